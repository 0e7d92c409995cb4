use serde::{Deserialize, Serialize};

use super::state::{AptState, Locks};
use crate::error::{Error, Result};
use crate::table::{fmt_g6, parse_f64, split_rows, CsvWriter};
use crate::units::{mean_std, Axes, URAD};

/// One simulator tick.
///
/// `error` is the true line-of-sight error left after the actuators of the
/// innermost active loop; in non-tracking states it is the gimbal error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackingSample {
    pub t_s: f64,
    pub state: AptState,
    pub error_pitch_rad: f64,
    pub error_azimuth_rad: f64,
    pub gimbal: Axes,
    pub fsm1: Axes,
    pub fsm2: Axes,
    pub locks: Locks,
}

impl TrackingSample {
    pub fn error(&self) -> Axes {
        Axes::new(self.error_pitch_rad, self.error_azimuth_rad)
    }

    pub fn radial_error(&self) -> f64 {
        self.error().norm()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackingSeries {
    pub sample_period_s: f64,
    pub scenario: String,
    pub seed: u64,
    pub samples: Vec<TrackingSample>,
}

pub const TRACKING_HEADER: [&str; 11] = [
    "t_s",
    "state",
    "err_pitch_urad",
    "err_az_urad",
    "fsm1_p_urad",
    "fsm1_a_urad",
    "fsm2_p_urad",
    "fsm2_a_urad",
    "lock0",
    "lock1",
    "lock2",
];

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

impl TrackingSeries {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 * self.sample_period_s
    }

    /// Samples with `t0 <= t_s < t1`.
    pub fn window(&self, t0: f64, t1: f64) -> &[TrackingSample] {
        let start = self.samples.partition_point(|s| s.t_s < t0 - 1e-9);
        let end = self.samples.partition_point(|s| s.t_s < t1 - 1e-9);
        &self.samples[start..end.max(start)]
    }

    pub fn to_csv(&self) -> String {
        let mut w = CsvWriter::with_header(&TRACKING_HEADER);
        for s in &self.samples {
            w.row([
                fmt_g6(s.t_s),
                s.state.name().to_string(),
                fmt_g6(s.error_pitch_rad / URAD),
                fmt_g6(s.error_azimuth_rad / URAD),
                fmt_g6(s.fsm1.pitch / URAD),
                fmt_g6(s.fsm1.azimuth / URAD),
                fmt_g6(s.fsm2.pitch / URAD),
                fmt_g6(s.fsm2.azimuth / URAD),
                flag(s.locks.coarse).to_string(),
                flag(s.locks.fine1).to_string(),
                flag(s.locks.fine2).to_string(),
            ]);
        }
        w.finish()
    }

    /// Parses the CSV written by [`TrackingSeries::to_csv`]. Gimbal angles
    /// are not part of the export and come back as zero.
    pub fn from_csv(text: &str, sample_period_s: f64, scenario: &str, seed: u64) -> Result<Self> {
        let bad = |what: String| Error::validation("tracking.csv", what);
        let (header, rows) = split_rows(text).ok_or_else(|| bad("empty file".into()))?;
        if header != TRACKING_HEADER {
            return Err(bad(format!("unexpected header {header:?}")));
        }
        let mut samples = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            if r.len() != TRACKING_HEADER.len() {
                return Err(bad(format!("row {} has {} fields", i + 1, r.len())));
            }
            let num = |k: usize| parse_f64(r[k]).ok_or_else(|| bad(format!("row {} column {}", i + 1, k + 1)));
            let lock = |k: usize| match r[k] {
                "1" => Ok(true),
                "0" => Ok(false),
                other => Err(bad(format!("row {}: bad flag `{other}`", i + 1))),
            };
            samples.push(TrackingSample {
                t_s: num(0)?,
                state: r[1].parse().map_err(bad)?,
                error_pitch_rad: num(2)? * URAD,
                error_azimuth_rad: num(3)? * URAD,
                gimbal: Axes::ZERO,
                fsm1: Axes::new(num(4)? * URAD, num(5)? * URAD),
                fsm2: Axes::new(num(6)? * URAD, num(7)? * URAD),
                locks: Locks {
                    coarse: lock(8)?,
                    fine1: lock(9)?,
                    fine2: lock(10)?,
                },
            });
        }
        Ok(Self {
            sample_period_s,
            scenario: scenario.to_string(),
            seed,
            samples,
        })
    }
}

/// Per-axis mean and population standard deviation of the pointing error,
/// plus the mean radial error, all in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackingStats {
    pub count: usize,
    pub pitch_mean_rad: f64,
    pub pitch_std_rad: f64,
    pub azimuth_mean_rad: f64,
    pub azimuth_std_rad: f64,
    pub radial_mean_rad: f64,
}

pub fn stats_of(samples: &[TrackingSample]) -> Result<TrackingStats> {
    let (pm, ps, n) = mean_std(samples.iter().map(|s| s.error_pitch_rad)).ok_or(Error::Empty("tracking window"))?;
    let (am, asd, _) = mean_std(samples.iter().map(|s| s.error_azimuth_rad)).expect("nonempty");
    let (rm, _, _) = mean_std(samples.iter().map(|s| s.radial_error())).expect("nonempty");
    Ok(TrackingStats {
        count: n,
        pitch_mean_rad: pm,
        pitch_std_rad: ps,
        azimuth_mean_rad: am,
        azimuth_std_rad: asd,
        radial_mean_rad: rm,
    })
}

/// Statistics over samples with `window.0 <= t_s < window.1`.
pub fn tracking_stats(series: &TrackingSeries, window: (f64, f64)) -> Result<TrackingStats> {
    stats_of(series.window(window.0, window.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Stream};
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn sample(t: f64, p: f64, a: f64) -> TrackingSample {
        TrackingSample {
            t_s: t,
            state: AptState::Linked,
            error_pitch_rad: p,
            error_azimuth_rad: a,
            gimbal: Axes::ZERO,
            fsm1: Axes::new(1e-5, -2e-5),
            fsm2: Axes::ZERO,
            locks: Locks {
                coarse: true,
                fine1: true,
                fine2: true,
            },
        }
    }

    fn series(samples: Vec<TrackingSample>) -> TrackingSeries {
        TrackingSeries {
            sample_period_s: 1e-3,
            scenario: "t".into(),
            seed: 0,
            samples,
        }
    }

    #[test]
    fn constant_series() {
        let s = series((0..10).map(|k| sample(k as f64 * 1e-3, 3e-6, -4e-6)).collect());
        let st = tracking_stats(&s, (0.0, 1.0)).unwrap();
        assert!((st.pitch_mean_rad - 3e-6).abs() < 1e-18);
        assert!((st.azimuth_mean_rad + 4e-6).abs() < 1e-18);
        assert!(st.pitch_std_rad < 1e-20 && st.azimuth_std_rad < 1e-20);
        assert!((st.radial_mean_rad - 5e-6).abs() < 1e-18);
    }

    #[test]
    fn two_samples() {
        let s = series(vec![sample(0.0, 0.0, 0.0), sample(1e-3, 2.0, 0.0)]);
        let st = tracking_stats(&s, (0.0, 1.0)).unwrap();
        assert_eq!(st.pitch_mean_rad, 1.0);
        assert_eq!(st.pitch_std_rad, 1.0);
    }

    #[test]
    fn empty_window_is_an_error() {
        let s = series(vec![sample(0.0, 0.0, 0.0)]);
        assert!(matches!(tracking_stats(&s, (5.0, 6.0)), Err(Error::Empty(_))));
    }

    #[test]
    fn gaussian_series_recovers_parameters() {
        let mut rng = stream(5, Stream::Calibration);
        let n = 20_000;
        let (mu, sigma) = (2e-6, 3e-6);
        let samples = (0..n)
            .map(|k| {
                let p: f64 = rng.sample(StandardNormal);
                let a: f64 = rng.sample(StandardNormal);
                sample(k as f64 * 1e-3, mu + sigma * p, sigma * a)
            })
            .collect();
        let st = tracking_stats(&series(samples), (0.0, 1e9)).unwrap();
        let tol = 3.0 * sigma / (n as f64).sqrt();
        assert!((st.pitch_mean_rad - mu).abs() < tol);
        assert!(st.azimuth_mean_rad.abs() < tol);
        // std of the sample std is ~ sigma/sqrt(2n)
        assert!((st.pitch_std_rad - sigma).abs() < 3.0 * sigma / (2.0 * n as f64).sqrt());
    }

    #[test]
    fn csv_reparses_to_the_same_text() {
        let s = series(vec![sample(0.0, 1.234567e-6, -7.5e-6), sample(1e-3, 0.0, 2e-7)]);
        let csv = s.to_csv();
        assert!(csv.starts_with(
            "t_s,state,err_pitch_urad,err_az_urad,fsm1_p_urad,fsm1_a_urad,fsm2_p_urad,fsm2_a_urad,lock0,lock1,lock2\n"
        ));
        assert!(csv.contains("0.001,Linked,0,0.2,10,-20,0,0,1,1,1\n"));
        let back = TrackingSeries::from_csv(&csv, 1e-3, "t", 0).unwrap();
        assert_eq!(back.to_csv(), csv);
    }
}
