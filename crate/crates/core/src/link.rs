//! From pointing residuals to link loss and delivered throughput.

use serde::{Deserialize, Serialize};

use crate::apt::TrackingSeries;
use crate::error::{Error, Result};
use crate::optics::OpticsContext;
use crate::table::{fmt_g6, parse_f64, split_rows, CsvWriter};
use crate::units::mean_std;

/// Fiber transceiver pair at the two ends of the link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransceiverSpec {
    pub rated_rate_gbps: f64,
    /// TCP goodput measured back to back.
    pub effective_tcp_rate_gbps: f64,
    /// Largest end-to-end loss at which the full rate is still delivered.
    pub max_tolerable_loss_db: f64,
    /// Goodput ratio between the free-space and back-to-back tests.
    pub tcp_efficiency: f64,
}

impl Default for TransceiverSpec {
    fn default() -> Self {
        Self {
            rated_rate_gbps: 10.0,
            effective_tcp_rate_gbps: 9.27,
            max_tolerable_loss_db: 24.1,
            tcp_efficiency: 0.988,
        }
    }
}

impl TransceiverSpec {
    pub fn validate(&self, field: &str) -> Result<()> {
        if !(self.rated_rate_gbps > 0.0 && self.rated_rate_gbps.is_finite()) {
            return Err(Error::validation(
                format!("{field}.rated_rate_gbps"),
                "must be finite and > 0",
            ));
        }
        if !(self.effective_tcp_rate_gbps > 0.0 && self.effective_tcp_rate_gbps <= self.rated_rate_gbps) {
            return Err(Error::validation(
                format!("{field}.effective_tcp_rate_gbps"),
                "must be in (0, rated_rate_gbps]",
            ));
        }
        if !(self.max_tolerable_loss_db > 0.0 && self.max_tolerable_loss_db.is_finite()) {
            return Err(Error::validation(
                format!("{field}.max_tolerable_loss_db"),
                "must be finite and > 0",
            ));
        }
        if !(self.tcp_efficiency > 0.0 && self.tcp_efficiency <= 1.0) {
            return Err(Error::validation(
                format!("{field}.tcp_efficiency"),
                "must be in (0, 1]",
            ));
        }
        Ok(())
    }

    /// Delivered rate at `loss_db`; `None` (no lock) delivers nothing.
    pub fn rate_gbps(&self, loss_db: Option<f64>) -> f64 {
        match loss_db {
            Some(l) if l <= self.max_tolerable_loss_db => self.effective_tcp_rate_gbps * self.tcp_efficiency,
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossSample {
    pub t_s: f64,
    /// `None` while no tracking loop holds the beam: the link is down.
    pub loss_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossSeries {
    pub sample_period_s: f64,
    pub scenario: String,
    pub seed: u64,
    pub samples: Vec<LossSample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSample {
    pub t_s: f64,
    pub rate_gbps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThroughputSeries {
    pub sample_period_s: f64,
    pub scenario: String,
    pub seed: u64,
    pub samples: Vec<RateSample>,
}

pub const LOSS_HEADER: [&str; 3] = ["t_s", "loss_db", "link_up"];
pub const RATE_HEADER: [&str; 2] = ["t_s", "rate_gbps"];

/// Per-sample end-to-end loss of a tracking run over `distance_m`.
pub fn loss_timeseries(tracking: &TrackingSeries, optics: &OpticsContext, distance_m: f64) -> Result<LossSeries> {
    if tracking.is_empty() {
        return Err(Error::Empty("tracking series"));
    }
    let samples = tracking
        .samples
        .iter()
        .map(|s| LossSample {
            t_s: s.t_s,
            loss_db: s
                .state
                .is_tracking()
                .then(|| optics.budget(distance_m, s.radial_error()).total_db),
        })
        .collect();
    Ok(LossSeries {
        sample_period_s: tracking.sample_period_s,
        scenario: tracking.scenario.clone(),
        seed: tracking.seed,
        samples,
    })
}

/// A fixed attenuation held for `duration_s`, as in a back-to-back test
/// through a variable attenuator.
pub fn constant_loss_series(
    loss_db: f64,
    duration_s: f64,
    sample_period_s: f64,
    scenario: &str,
    seed: u64,
) -> LossSeries {
    let n = (duration_s / sample_period_s).round() as usize;
    LossSeries {
        sample_period_s,
        scenario: scenario.to_string(),
        seed,
        samples: (0..n)
            .map(|k| LossSample {
                t_s: k as f64 * sample_period_s,
                loss_db: Some(loss_db),
            })
            .collect(),
    }
}

pub fn throughput_series(loss: &LossSeries, tx: &TransceiverSpec) -> Result<ThroughputSeries> {
    if loss.samples.is_empty() {
        return Err(Error::Empty("loss series"));
    }
    Ok(ThroughputSeries {
        sample_period_s: loss.sample_period_s,
        scenario: loss.scenario.clone(),
        seed: loss.seed,
        samples: loss
            .samples
            .iter()
            .map(|s| RateSample {
                t_s: s.t_s,
                rate_gbps: tx.rate_gbps(s.loss_db),
            })
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

pub fn summarize(values: &[f64]) -> Result<SummaryStats> {
    let (mean, std, count) = mean_std(values.iter().copied()).ok_or(Error::Empty("summary input"))?;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(SummaryStats {
        mean: mean.clamp(min, max),
        std,
        min,
        max,
        count,
    })
}

/// Loss statistics as exported next to the loss CSV.
///
/// `mean`/`std`/`min`/`max`/`count` cover locked samples only;
/// `link_down_count` counts the others. `downtime_fraction` is the share of
/// all samples that deliver no traffic, either unlocked or above the
/// transceiver tolerance. The statistics are `null` if the link never
/// locked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossSummary {
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub count: usize,
    pub link_down_count: usize,
    pub downtime_fraction: f64,
}

impl LossSeries {
    pub fn locked_losses(&self) -> Vec<f64> {
        self.samples.iter().filter_map(|s| s.loss_db).collect()
    }

    pub fn summary(&self, tx: &TransceiverSpec) -> Result<LossSummary> {
        if self.samples.is_empty() {
            return Err(Error::Empty("loss series"));
        }
        let locked = self.locked_losses();
        let stats = summarize(&locked).ok();
        let down = self.samples.iter().filter(|s| tx.rate_gbps(s.loss_db) == 0.0).count();
        Ok(LossSummary {
            mean: stats.map(|s| s.mean),
            std: stats.map(|s| s.std),
            min: stats.map(|s| s.min),
            max: stats.map(|s| s.max),
            count: locked.len(),
            link_down_count: self.samples.len() - locked.len(),
            downtime_fraction: down as f64 / self.samples.len() as f64,
        })
    }

    /// `loss_db` is written as `inf` with `link_up` 0 while unlocked.
    pub fn to_csv(&self) -> String {
        let mut w = CsvWriter::with_header(&LOSS_HEADER);
        for s in &self.samples {
            match s.loss_db {
                Some(l) => w.row([fmt_g6(s.t_s), fmt_g6(l), "1".into()]),
                None => w.row([fmt_g6(s.t_s), "inf".into(), "0".into()]),
            }
        }
        w.finish()
    }

    pub fn from_csv(text: &str, sample_period_s: f64, scenario: &str, seed: u64) -> Result<Self> {
        let bad = |what: String| Error::validation("loss.csv", what);
        let (header, rows) = split_rows(text).ok_or_else(|| bad("empty file".into()))?;
        if header != LOSS_HEADER {
            return Err(bad(format!("unexpected header {header:?}")));
        }
        let samples = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let row_err = || bad(format!("row {}", i + 1));
                if r.len() != 3 {
                    return Err(row_err());
                }
                let t_s = parse_f64(r[0]).ok_or_else(row_err)?;
                let loss_db = match r[2] {
                    "1" => Some(parse_f64(r[1]).filter(|l| l.is_finite()).ok_or_else(row_err)?),
                    "0" => None,
                    _ => return Err(row_err()),
                };
                Ok(LossSample { t_s, loss_db })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            sample_period_s,
            scenario: scenario.to_string(),
            seed,
            samples,
        })
    }
}

impl ThroughputSeries {
    pub fn rates(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.rate_gbps).collect()
    }

    pub fn summary(&self) -> Result<SummaryStats> {
        summarize(&self.rates())
    }

    pub fn to_csv(&self) -> String {
        let mut w = CsvWriter::with_header(&RATE_HEADER);
        for s in &self.samples {
            w.row([fmt_g6(s.t_s), fmt_g6(s.rate_gbps)]);
        }
        w.finish()
    }

    pub fn from_csv(text: &str, sample_period_s: f64, scenario: &str, seed: u64) -> Result<Self> {
        let bad = |what: String| Error::validation("throughput.csv", what);
        let (header, rows) = split_rows(text).ok_or_else(|| bad("empty file".into()))?;
        if header != RATE_HEADER {
            return Err(bad(format!("unexpected header {header:?}")));
        }
        let samples = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                match (
                    r.len(),
                    r.first().and_then(|f| parse_f64(f)),
                    r.get(1).and_then(|f| parse_f64(f)),
                ) {
                    (2, Some(t_s), Some(rate_gbps)) => Ok(RateSample { t_s, rate_gbps }),
                    _ => Err(bad(format!("row {}", i + 1))),
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            sample_period_s,
            scenario: scenario.to_string(),
            seed,
            samples,
        })
    }
}
