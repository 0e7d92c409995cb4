use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fsolink::apt::StageMask;
use fsolink::cli::{self, load_scenario, load_targets, Scenario};
use fsolink::{Error, Result};

#[derive(Parser)]
#[command(name = "fsolink", version, about = "Free-space optical link and tracking simulator")]
struct Opts {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Overrides the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the scenario duration, in seconds.
    #[arg(long)]
    duration: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stages {
    Coarse,
    Fine1,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Static link budget (no pointing error) as JSON.
    Budget {
        #[arg(long)]
        scenario: PathBuf,
        /// Link distance instead of the node separation.
        #[arg(long)]
        distance_km: Option<f64>,
    },
    /// Static loss versus distance as CSV.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        min_km: f64,
        #[arg(long, default_value_t = 10.0)]
        max_km: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Ignore the scenario visibility.
        #[arg(long)]
        clear_air: bool,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tracking simulation: tracking.csv and tracking_stats.json.
    Track {
        #[command(flatten)]
        common: Common,
        /// Keep the fine loops open until this time, in seconds.
        #[arg(long)]
        fine_after: Option<f64>,
        /// Loops allowed to close; the scenario decides when absent.
        #[arg(long, value_enum)]
        stages: Option<Stages>,
        /// Output directory; CSV to stdout and statistics to stderr when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full pipeline: tracking, loss and throughput series plus report.json.
    Run {
        #[command(flatten)]
        common: Common,
        /// Seed range `a..b` (inclusive), run in parallel.
        #[arg(long, conflicts_with = "seed")]
        seeds: Option<String>,
        /// Overrides the transceiver loss tolerance, in dB.
        #[arg(long)]
        max_loss_db: Option<f64>,
        /// Output directory; the report goes to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit insertion and coupling losses to anchor losses.
    Calibrate {
        #[arg(long)]
        scenario: PathBuf,
        /// Calibration targets (JSON).
        #[arg(long)]
        anchors: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the scenario with the fitted parameters here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn scenario(common: &Common) -> Result<Scenario> {
    let mut s = load_scenario(&common.scenario)?;
    if let Some(seed) = common.seed {
        s.seed = seed;
    }
    if let Some(d) = common.duration {
        s.duration_s = d;
    }
    s.validate()?;
    Ok(s)
}

fn parse_seeds(text: &str) -> Result<std::ops::RangeInclusive<u64>> {
    let bad = || Error::InvalidRange(format!("seed range `{text}` must look like a..b"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => cli::write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Budget { scenario, distance_km } => {
            let s = load_scenario(&scenario)?;
            let b = cli::cmd_budget(&s, distance_km.map(|k| k * 1e3))?;
            print!("{}", cli::to_json(&b));
        }
        Command::Sweep {
            scenario,
            min_km,
            max_km,
            steps,
            clear_air,
            out,
        } => {
            let s = load_scenario(&scenario)?;
            let csv = cli::cmd_sweep(&s, min_km * 1e3, max_km * 1e3, steps, clear_air)?;
            emit(out.as_deref(), &csv)?;
        }
        Command::Track {
            common,
            fine_after,
            stages,
            out,
        } => {
            let s = scenario(&common)?;
            let mut mask = match stages {
                Some(Stages::Coarse) => StageMask::coarse_only(),
                Some(Stages::Fine1) => StageMask::first_fine_only(),
                Some(Stages::All) => StageMask::default(),
                None => s.apt.stages,
            };
            if fine_after.is_some() {
                mask.fine_after_s = fine_after;
            }
            let (series, report) = cli::cmd_track(&s, s.duration_s, s.seed, mask)?;
            match out {
                Some(dir) => cli::write_track(&dir, &series, &report)?,
                None => {
                    print!("{}", series.to_csv());
                    eprint!("{}", cli::to_json(&report));
                }
            }
        }
        Command::Run {
            common,
            seeds,
            max_loss_db,
            out,
        } => {
            let mut s = scenario(&common)?;
            if let Some(l) = max_loss_db {
                s.transceiver.max_tolerable_loss_db = l;
                s.validate()?;
            }
            match seeds {
                Some(range) => {
                    let runs = cli::cmd_run_ensemble(&s, s.duration_s, parse_seeds(&range)?)?;
                    let report = cli::ensemble_report(&runs)?;
                    if let Some(dir) = &out {
                        for r in &runs {
                            cli::write_run(&dir.join(format!("seed_{}", r.report.seed)), r)?;
                        }
                        cli::write_file(&dir.join("ensemble.json"), &cli::to_json(&report))?;
                    } else {
                        print!("{}", cli::to_json(&report));
                    }
                }
                None => {
                    let run = cli::cmd_run(&s, s.duration_s, s.seed)?;
                    match &out {
                        Some(dir) => cli::write_run(dir, &run)?,
                        None => print!("{}", cli::to_json(&run.report)),
                    }
                }
            }
        }
        Command::Calibrate {
            scenario,
            anchors,
            seed,
            out,
        } => {
            let mut s = load_scenario(&scenario)?;
            if let Some(seed) = seed {
                s.seed = seed;
            }
            let targets = load_targets(&anchors)?;
            let report = cli::cmd_calibrate(&s, &targets)?;
            print!("{}", cli::to_json(&report));
            if !report.converged {
                let err = report.into_result().unwrap_err();
                eprintln!("error: {err}");
                return Ok(ExitCode::from(err.exit_code() as u8));
            }
            if let Some(path) = out {
                cli::write_file(&path, &report.apply(&s).to_json())?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // usage errors share exit code 1 with other input errors
    let opts = match Opts::try_parse() {
        Ok(o) => o,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(opts.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
