use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::calibrate::{calibrate, CalibrationReport, CalibrationTargets};
use super::scenario::Scenario;
use crate::apt::{run_apt, stats_of, tracking_stats, StageMask, TrackingSeries, TrackingStats};
use crate::error::{Error, Result};
use crate::link::{
    constant_loss_series, loss_timeseries, throughput_series, LossSeries, LossSummary, SummaryStats, ThroughputSeries,
};
use crate::optics::{distance_sweep, sweep_to_csv, AtmosphereModel, LinkBudget};

/// Lowercase hex SHA-256 of the scenario's canonical JSON form.
pub fn scenario_digest(scenario: &Scenario) -> String {
    let hash = Sha256::digest(scenario.to_json().as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

/// Static budget (no pointing error) over the scenario's link, or over
/// `distance_m` when given.
pub fn cmd_budget(scenario: &Scenario, distance_m: Option<f64>) -> Result<LinkBudget> {
    let d = match distance_m {
        Some(d) if d >= 0.0 && d.is_finite() => d,
        Some(_) => return Err(Error::validation("distance", "must be finite and >= 0")),
        None => scenario.distance_m()?,
    };
    Ok(scenario.optics().budget(d, 0.0))
}

/// Static-loss sweep as CSV. `clear_air` drops the scenario's visibility.
pub fn cmd_sweep(scenario: &Scenario, d_min_m: f64, d_max_m: f64, steps: usize, clear_air: bool) -> Result<String> {
    let o = scenario.optics();
    let atm = if clear_air {
        AtmosphereModel::clear(o.atmosphere.wavelength_m)
    } else {
        o.atmosphere
    };
    let rows = distance_sweep(&o.beam, &o.tx, &o.rx, &atm, &o.coupling, d_min_m, d_max_m, steps)?;
    Ok(sweep_to_csv(&rows))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackReport {
    pub scenario: String,
    pub seed: u64,
    pub duration_s: f64,
    pub stages: StageMask,
    pub overall: TrackingStats,
    /// Window before the fine loops were allowed to close.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub before_fine: Option<TrackingStats>,
    /// Window after the fine loops were allowed to close.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub after_fine: Option<TrackingStats>,
    /// Statistics of the samples spent in each APT state.
    pub by_state: BTreeMap<String, TrackingStats>,
}

fn by_state(series: &TrackingSeries) -> BTreeMap<String, TrackingStats> {
    let mut groups: BTreeMap<String, Vec<_>> = BTreeMap::new();
    for s in &series.samples {
        groups.entry(s.state.name().to_string()).or_default().push(*s);
    }
    groups
        .into_iter()
        .map(|(k, v)| (k, stats_of(&v).expect("nonempty group")))
        .collect()
}

pub fn track_report(series: &TrackingSeries, stages: StageMask) -> Result<TrackReport> {
    let end = series.duration_s();
    let split = stages.fine_after_s.filter(|&t| t > 0.0 && t < end);
    Ok(TrackReport {
        scenario: series.scenario.clone(),
        seed: series.seed,
        duration_s: end,
        stages,
        overall: tracking_stats(series, (0.0, end))?,
        before_fine: split.map(|t| tracking_stats(series, (0.0, t))).transpose()?,
        after_fine: split.map(|t| tracking_stats(series, (t, end))).transpose()?,
        by_state: by_state(series),
    })
}

/// Tracking simulation with the given loops enabled.
pub fn cmd_track(
    scenario: &Scenario,
    duration_s: f64,
    seed: u64,
    stages: StageMask,
) -> Result<(TrackingSeries, TrackReport)> {
    if scenario.is_bench() {
        return Err(Error::validation("bench", "a bench scenario has no tracking stack"));
    }
    let mut cfg = scenario.tracking_config()?;
    cfg.stages = stages;
    let series = run_apt(&cfg, duration_s, seed)?;
    let report = track_report(&series, stages)?;
    Ok((series, report))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub scenario_digest: String,
    pub seed: u64,
    pub duration_s: f64,
    pub distance_m: f64,
    /// Tracking statistics per APT state; empty for bench runs.
    pub tracking: BTreeMap<String, TrackingStats>,
    pub loss: LossSummary,
    pub throughput: SummaryStats,
    pub downtime_fraction: f64,
    pub runtime_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    /// `None` for bench runs.
    pub tracking: Option<TrackingSeries>,
    pub loss: LossSeries,
    pub throughput: ThroughputSeries,
    pub report: RunReport,
}

/// Full pipeline: tracking, loss, throughput and their statistics.
pub fn cmd_run(scenario: &Scenario, duration_s: f64, seed: u64) -> Result<RunOutput> {
    let started = Instant::now();
    if !(duration_s > 0.0 && duration_s.is_finite()) {
        return Err(Error::validation("duration_s", "must be finite and > 0"));
    }
    let (tracking, loss, distance_m) = match &scenario.bench {
        Some(bench) => (
            None,
            constant_loss_series(
                bench.attenuation_db,
                duration_s,
                crate::apt::SAMPLE_PERIOD_S,
                &scenario.name,
                seed,
            ),
            0.0,
        ),
        None => {
            let d = scenario.distance_m()?;
            let series = run_apt(&scenario.tracking_config()?, duration_s, seed)?;
            let loss = loss_timeseries(&series, &scenario.optics(), d)?;
            (Some(series), loss, d)
        }
    };
    let throughput = throughput_series(&loss, &scenario.transceiver)?;
    let loss_summary = loss.summary(&scenario.transceiver)?;
    let report = RunReport {
        scenario: scenario.name.clone(),
        scenario_digest: scenario_digest(scenario),
        seed,
        duration_s,
        distance_m,
        tracking: tracking.as_ref().map(by_state).unwrap_or_default(),
        throughput: throughput.summary()?,
        downtime_fraction: loss_summary.downtime_fraction,
        loss: loss_summary,
        runtime_s: started.elapsed().as_secs_f64(),
    };
    Ok(RunOutput {
        tracking,
        loss,
        throughput,
        report,
    })
}

/// Independent replicas over `seeds`, run in parallel and returned in seed
/// order.
pub fn cmd_run_ensemble(
    scenario: &Scenario,
    duration_s: f64,
    seeds: std::ops::RangeInclusive<u64>,
) -> Result<Vec<RunOutput>> {
    let seeds: Vec<u64> = seeds.collect();
    if seeds.is_empty() {
        return Err(Error::InvalidRange("empty seed range".into()));
    }
    let mut runs: Vec<RunOutput> = seeds
        .par_iter()
        .map(|&seed| cmd_run(scenario, duration_s, seed))
        .collect::<Result<_>>()?;
    runs.sort_by_key(|r| r.report.seed);
    Ok(runs)
}

/// Aggregate over replicas: the mean and spread of each per-seed mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub scenario: String,
    pub scenario_digest: String,
    pub seeds: Vec<u64>,
    pub loss_mean_db: Option<SummaryStats>,
    pub throughput_mean_gbps: SummaryStats,
    pub downtime_fraction: SummaryStats,
    pub runs: Vec<RunReport>,
}

pub fn ensemble_report(runs: &[RunOutput]) -> Result<EnsembleReport> {
    let first = runs.first().ok_or(Error::Empty("ensemble"))?;
    let loss_means: Vec<f64> = runs.iter().filter_map(|r| r.report.loss.mean).collect();
    let pick = |f: fn(&RunReport) -> f64| -> Vec<f64> { runs.iter().map(|r| f(&r.report)).collect() };
    Ok(EnsembleReport {
        scenario: first.report.scenario.clone(),
        scenario_digest: first.report.scenario_digest.clone(),
        seeds: runs.iter().map(|r| r.report.seed).collect(),
        loss_mean_db: crate::link::summarize(&loss_means).ok(),
        throughput_mean_gbps: crate::link::summarize(&pick(|r| r.throughput.mean))?,
        downtime_fraction: crate::link::summarize(&pick(|r| r.downtime_fraction))?,
        runs: runs.iter().map(|r| r.report.clone()).collect(),
    })
}

pub fn cmd_calibrate(scenario: &Scenario, targets: &CalibrationTargets) -> Result<CalibrationReport> {
    calibrate(scenario, targets)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes `tracking.csv` and `tracking_stats.json` into `dir`.
pub fn write_track(dir: &Path, series: &TrackingSeries, report: &TrackReport) -> Result<()> {
    write_file(&dir.join("tracking.csv"), &series.to_csv())?;
    write_file(&dir.join("tracking_stats.json"), &to_json(report))
}

/// Writes the CSVs and JSON summaries of one run into `dir`.
pub fn write_run(dir: &Path, run: &RunOutput) -> Result<()> {
    if let Some(t) = &run.tracking {
        write_file(&dir.join("tracking.csv"), &t.to_csv())?;
    }
    write_file(&dir.join("loss.csv"), &run.loss.to_csv())?;
    write_file(&dir.join("throughput.csv"), &run.throughput.to_csv())?;
    write_file(&dir.join("loss_summary.json"), &to_json(&run.report.loss))?;
    write_file(&dir.join("report.json"), &to_json(&run.report))
}
