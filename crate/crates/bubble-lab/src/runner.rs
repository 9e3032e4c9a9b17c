//! Execution engine: runs a configured experiment end to end and
//! persists plot-ready artifacts.
//!
//! A run proceeds in strict phases so that failures map to the
//! documented exit codes **before** anything touches the disk:
//!
//! 1. parse + resolve the configuration (configuration errors);
//! 2. simulate, when configured (stepper precondition errors such as
//!    the CFL bound or the support margin — no partial artifacts);
//! 3. evaluate the requested analyses, concurrently where independent
//!    (each failure is recorded in the report, not raised);
//! 4. write `trajectory.csv`, `moments.csv`, and `report.json` into the
//!    output directory.
//!
//! A divergence during the simulation is a *finding*: the trajectory is
//! truncated at the crossing, analyses consume what exists, and the run
//! exits 0 — unless the divergence happened before every requested
//! analysis window opened, which exits with the dedicated code (the
//! artifacts are still written).
//!
//! CSV numbers are written in the shortest decimal form that parses
//! back to the exact same `f64`, making artifacts byte-reproducible
//! across runs and platforms; `report.json` excludes timestamps for the
//! same reason.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{AnalysisSpec, ExperimentConfig, LifespanSpec, WeightSpec};
use crate::criteria::{
    self, BubbleEvent, HypothesisReport, LifespanEstimate, OverallVerdict,
};
use crate::error::{Error, Result};
use crate::functionals::{self, MomentSeries, SignednessFit};
use crate::solver::{simulate, BlowupFlag, Geometry, SimOptions, Trajectory};
use crate::verify;

/// Upward energy step tolerated (absolute, per slice pair) before a run
/// is flagged as energy-increasing; covers rounding in the discrete
/// dissipation balance.
pub const ENERGY_STEP_SLACK: f64 = 1e-8;

/// Environment variable consulted for the worker-thread count when no
/// explicit value is given.
pub const THREADS_ENV_VAR: &str = "BUBBLE_LAB_THREADS";

// ─────────────────────────── report document ───────────────────────────

/// Provenance block: everything needed to reproduce and interpret the
/// run, with defaults materialized.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    /// Producing tool.
    pub tool: String,
    /// Crate version.
    pub version: String,
    /// The fully resolved configuration (output override applied).
    pub config: ExperimentConfig,
    /// Effective-mass readings used, one per hypothesis analysis in
    /// order.
    pub m_eff_readings: Vec<criteria::MEffReading>,
    /// The coupled-charge exponent convention applied throughout.
    pub beta_reading: String,
}

/// Summary of the simulation phase.
#[derive(Debug, Clone, Serialize)]
pub struct SimSummary {
    /// Number of stored slices.
    pub slices: usize,
    /// Time of the first slice.
    pub t_start: f64,
    /// Time of the last stored slice.
    pub t_final: f64,
    /// Solver step.
    pub dt: f64,
    /// Storage stride.
    pub store_every: usize,
    /// Set when the amplitude crossed the divergence threshold.
    pub blowup: Option<BlowupFlag>,
}

/// Result of one requested analysis.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case", tag = "analysis")]
pub enum AnalysisReport {
    /// Moment series summary (the series itself goes to `moments.csv`).
    Moments {
        /// Weight used.
        weight: WeightSpec,
        /// Number of slices in the series.
        samples: usize,
        /// Measured `C₀ = F(0)`.
        c0: f64,
        /// Measured `C₁ = Ḟ(0)`.
        c1: f64,
    },
    /// Energy monotonicity summary (the series goes to `moments.csv`).
    Energy {
        /// Energy of the first slice.
        initial: f64,
        /// Energy of the last slice.
        r#final: f64,
        /// Largest upward step between consecutive slices (0 when
        /// monotone).
        max_step_increase: f64,
        /// True when every step is non-increasing up to
        /// [`ENERGY_STEP_SLACK`].
        nonincreasing: bool,
    },
    /// Signedness fit outcome.
    Signedness {
        /// The fitted constant and verdict.
        fit: SignednessFit,
    },
    /// Hypothesis evaluation outcome.
    Hypotheses {
        /// The full report.
        report: HypothesisReport,
    },
    /// Interior zeros per slice.
    Bubbles {
        /// Number of slices with at least one wall.
        count: usize,
        /// The events.
        events: Vec<BubbleEvent>,
    },
    /// Embedded kernel-identity verification table.
    KernelVerify {
        /// The suite table.
        suite: verify::SuiteReport,
    },
    /// Comparison-ODE life-span bound.
    Lifespan {
        /// The estimate.
        estimate: LifespanEstimate,
    },
    /// An analysis that could not be completed on this trajectory
    /// (e.g. its window lies beyond a divergence).
    Failed {
        /// Which analysis was requested.
        requested: String,
        /// Why it failed.
        error: String,
    },
}

/// The full report document written to `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    /// Reproducibility block.
    pub provenance: Provenance,
    /// Simulation summary (absent for verification-only documents).
    pub simulation: Option<SimSummary>,
    /// One entry per requested analysis, in order.
    pub analyses: Vec<AnalysisReport>,
    /// Combined verdict over the hypothesis analyses (absent when none
    /// completed).
    pub overall: Option<OverallVerdict>,
}

/// Outcome of a run: artifacts on disk plus the process exit code.
#[derive(Debug)]
pub struct RunOutcome {
    /// Directory the artifacts were written to.
    pub out_dir: PathBuf,
    /// The report document (also on disk as `report.json`).
    pub report: RunReport,
    /// 0 on success, 3 when the run diverged before any analysis
    /// window.
    pub exit_code: i32,
}

// ─────────────────────────── thread plumbing ───────────────────────────

/// Resolve the worker-thread count: explicit value, else the
/// [`THREADS_ENV_VAR`] environment variable, else the library default.
pub fn thread_count(cli: Option<usize>) -> Result<Option<usize>> {
    let env = std::env::var(THREADS_ENV_VAR).ok();
    thread_count_from(cli, env.as_deref())
}

/// Pure core of [`thread_count`] (explicit argument wins; 0 and
/// non-numeric values are rejected).
fn thread_count_from(cli: Option<usize>, env: Option<&str>) -> Result<Option<usize>> {
    let reject_zero = |n: usize, origin: &str| {
        if n == 0 {
            Err(Error::Config(format!("{origin}: thread count must be ≥ 1")))
        } else {
            Ok(Some(n))
        }
    };
    if let Some(n) = cli {
        return reject_zero(n, "--threads");
    }
    match env {
        None => Ok(None),
        Some(s) => {
            let n: usize = s.trim().parse().map_err(|_| {
                Error::Config(format!("{THREADS_ENV_VAR} must be a positive integer, got {s:?}"))
            })?;
            reject_zero(n, THREADS_ENV_VAR)
        }
    }
}

/// Build a dedicated pool when a count is requested; otherwise the
/// global default pool is used.
fn build_pool(threads: Option<usize>) -> Result<Option<rayon::ThreadPool>> {
    match threads {
        None => Ok(None),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(Some)
            .map_err(|e| Error::Config(format!("thread pool: {e}"))),
    }
}

// ─────────────────────────── analysis execution ───────────────────────────

/// Series destined for `moments.csv`.
enum CsvSeries {
    Moments(MomentSeries),
    Energy(Vec<f64>),
}

/// Run one analysis; errors become `Failed` entries instead of
/// aborting the run.
fn run_one(spec: &AnalysisSpec, traj: Option<&Trajectory>) -> (AnalysisReport, Option<CsvSeries>) {
    let attempt = || -> Result<(AnalysisReport, Option<CsvSeries>)> {
        match spec {
            AnalysisSpec::Moments { weight } => {
                let traj = traj.expect("validated: trajectory present");
                let desc = weight.resolve()?;
                let series = functionals::moments(traj, &desc)?;
                let constants = functionals::initial_constants(traj, &desc)?;
                let entry = AnalysisReport::Moments {
                    weight: *weight,
                    samples: series.times.len(),
                    c0: constants.c0,
                    c1: constants.c1,
                };
                Ok((entry, Some(CsvSeries::Moments(series))))
            }
            AnalysisSpec::Energy => {
                let traj = traj.expect("validated: trajectory present");
                let energies: Vec<f64> = traj
                    .slices
                    .iter()
                    .zip(&traj.velocities)
                    .map(|(f, v)| functionals::energy(f, v, &traj.params))
                    .collect::<Result<_>>()?;
                let max_step_increase = energies
                    .windows(2)
                    .map(|w| w[1] - w[0])
                    .fold(0.0f64, f64::max)
                    .max(0.0);
                let entry = AnalysisReport::Energy {
                    initial: energies[0],
                    r#final: *energies.last().expect("nonempty run"),
                    max_step_increase,
                    nonincreasing: max_step_increase <= ENERGY_STEP_SLACK,
                };
                Ok((entry, Some(CsvSeries::Energy(energies))))
            }
            AnalysisSpec::Signedness { sigma, a, b, window, weight } => {
                let traj = traj.expect("validated: trajectory present");
                let desc = weight.resolve()?;
                let series = functionals::moments(traj, &desc)?;
                let fit = functionals::fit_signedness(&series, *sigma, *a, *b, *window)?;
                Ok((AnalysisReport::Signedness { fit }, None))
            }
            AnalysisSpec::Hypotheses { family, sigma, delta, weight, reading } => {
                let traj = traj.expect("validated: trajectory present");
                let desc = weight.resolve()?;
                let report =
                    criteria::check_hypotheses(traj, &desc, *family, *sigma, *delta, *reading)?;
                Ok((AnalysisReport::Hypotheses { report }, None))
            }
            AnalysisSpec::Bubbles => {
                let traj = traj.expect("validated: trajectory present");
                let events = criteria::detect_bubbles(traj);
                Ok((AnalysisReport::Bubbles { count: events.len(), events }, None))
            }
            AnalysisSpec::KernelVerify => {
                Ok((AnalysisReport::KernelVerify { suite: verify::kernel_suite() }, None))
            }
            AnalysisSpec::Lifespan { spec } => {
                let estimate = match *spec {
                    LifespanSpec::PowerKernel { p, delta0, weight_b, f0, fdot0, t0 } => {
                        criteria::kato_lifespan(p, delta0, weight_b, f0, fdot0, t0)?
                    }
                    LifespanSpec::ExpKernel {
                        growth_rate,
                        kernel_coeff,
                        kernel_rate,
                        kernel_power,
                        p,
                        c0,
                        window,
                    } => criteria::exp_kernel_lifespan(
                        &criteria::GrowthDescriptor { rate: growth_rate },
                        &criteria::KernelDescriptor {
                            coeff: kernel_coeff,
                            rate: kernel_rate,
                            power: kernel_power,
                        },
                        p,
                        c0,
                        window,
                    )?,
                };
                Ok((AnalysisReport::Lifespan { estimate }, None))
            }
        }
    };
    attempt().unwrap_or_else(|e| {
        (
            AnalysisReport::Failed { requested: spec.name().to_string(), error: e.to_string() },
            None,
        )
    })
}

/// Combined verdict over the successfully evaluated hypothesis
/// analyses: any indeterminate wins (no conclusion), else any
/// not-met, else met; absent when none completed.
fn combine_verdicts(entries: &[AnalysisReport]) -> Option<OverallVerdict> {
    let verdicts: Vec<OverallVerdict> = entries
        .iter()
        .filter_map(|e| match e {
            AnalysisReport::Hypotheses { report } => Some(report.overall),
            _ => None,
        })
        .collect();
    if verdicts.is_empty() {
        return None;
    }
    if verdicts.contains(&OverallVerdict::Indeterminate) {
        Some(OverallVerdict::Indeterminate)
    } else if verdicts.contains(&OverallVerdict::NotMet) {
        Some(OverallVerdict::NotMet)
    } else {
        Some(OverallVerdict::HypothesesMet)
    }
}

// ─────────────────────────── CSV artifacts ───────────────────────────

/// Shortest decimal representation that parses back to the same `f64`.
fn fmt(v: f64) -> String {
    format!("{v}")
}

/// Write `trajectory.csv`: one row per (slice, node) with columns
/// `t, x|r, phi, phi_t`.
fn write_trajectory_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let coord_name = match traj.slices[0].grid.geometry {
        Geometry::Line => "x",
        Geometry::Radial3d => "r",
    };
    w.write_record(["t", coord_name, "phi", "phi_t"])?;
    for (slice, vel) in traj.slices.iter().zip(&traj.velocities) {
        let t = fmt(slice.time);
        for i in 0..slice.grid.len {
            w.write_record([
                t.as_str(),
                &fmt(slice.grid.coord(i)),
                &fmt(slice.values[i]),
                &fmt(vel[i]),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Write `moments.csv`: column `t`, then `F`,`S` per moment series (the
/// second and later get numeric suffixes), then `E` when present.
fn write_moments_csv(path: &Path, times: &[f64], series: &[&CsvSeries]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = vec!["t".into()];
    let mut moment_idx = 0usize;
    for s in series {
        match s {
            CsvSeries::Moments(_) => {
                moment_idx += 1;
                if moment_idx == 1 {
                    header.push("F".into());
                    header.push("S".into());
                } else {
                    header.push(format!("F{moment_idx}"));
                    header.push(format!("S{moment_idx}"));
                }
            }
            CsvSeries::Energy(_) => header.push("E".into()),
        }
    }
    w.write_record(&header)?;
    for (j, &t) in times.iter().enumerate() {
        let mut row: Vec<String> = vec![fmt(t)];
        for s in series {
            match s {
                CsvSeries::Moments(m) => {
                    row.push(fmt(m.f[j]));
                    row.push(fmt(m.s[j]));
                }
                CsvSeries::Energy(e) => row.push(fmt(e[j])),
            }
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

// ─────────────────────────── entry points ───────────────────────────

/// Run the experiment described by a configuration file.  See the
/// module docs for phases, artifacts, and exit-code semantics.
pub fn run(
    config_path: &Path,
    out_override: Option<&Path>,
    threads: Option<usize>,
) -> Result<RunOutcome> {
    let cfg = ExperimentConfig::from_path(config_path)?;
    run_config(&cfg, out_override, threads)
}

/// [`run`] on an already parsed document.
pub fn run_config(
    cfg: &ExperimentConfig,
    out_override: Option<&Path>,
    threads: Option<usize>,
) -> Result<RunOutcome> {
    let resolved = cfg.resolve()?;
    let pool = build_pool(thread_count(threads)?)?;

    let mut echo = resolved.config.clone();
    let out_dir = out_override.map(Path::to_path_buf).unwrap_or_else(|| echo.output.clone());
    echo.output = out_dir.clone();

    // Simulation precedes any filesystem effect: a precondition
    // violation leaves no partial artifacts behind.
    let traj: Option<Trajectory> = match &resolved.sim {
        Some(s) => {
            let opts = SimOptions { store_every: s.store_every, ..SimOptions::default() };
            Some(simulate(&s.params, &s.initial, &s.velocity, s.t_end, s.dt, &opts)?)
        }
        None => None,
    };

    let work = || -> Vec<(AnalysisReport, Option<CsvSeries>)> {
        echo.analyses.par_iter().map(|a| run_one(a, traj.as_ref())).collect()
    };
    let results = match &pool {
        Some(p) => p.install(work),
        None => work(),
    };
    let (entries, csv_series): (Vec<AnalysisReport>, Vec<Option<CsvSeries>>) =
        results.into_iter().unzip();

    let overall = combine_verdicts(&entries);
    let m_eff_readings = echo
        .analyses
        .iter()
        .filter_map(|a| match a {
            AnalysisSpec::Hypotheses { reading, .. } => Some(*reading),
            _ => None,
        })
        .collect();

    let simulation = traj.as_ref().map(|t| SimSummary {
        slices: t.slices.len(),
        t_start: t.slices[0].time,
        t_final: t.slices.last().expect("nonempty").time,
        dt: t.dt,
        store_every: resolved.sim.as_ref().expect("sim present").store_every,
        blowup: t.blowup.clone(),
    });

    // Exit 3 iff the run diverged before every requested analysis
    // window opened (divergence inside a window is a recorded finding).
    let earliest_window = echo.analyses.iter().filter_map(AnalysisSpec::window_start).fold(
        None,
        |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.min(s))),
    );
    let exit_code = match (traj.as_ref().and_then(|t| t.blowup.as_ref()), earliest_window) {
        (Some(flag), Some(start)) if flag.time < start => 3,
        _ => 0,
    };

    let report = RunReport {
        provenance: Provenance {
            tool: "bubble-lab".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: echo,
            m_eff_readings,
            beta_reading: "coupled-charge exponent admissible when β > 1/p − 1".to_string(),
        },
        simulation,
        analyses: entries,
        overall,
    };

    // Artifact phase: everything computed, now persist.
    std::fs::create_dir_all(&out_dir)?;
    if let Some(t) = &traj {
        write_trajectory_csv(&out_dir.join("trajectory.csv"), t)?;
        let series: Vec<&CsvSeries> = csv_series.iter().flatten().collect();
        if !series.is_empty() {
            write_moments_csv(&out_dir.join("moments.csv"), &t.times(), &series)?;
        }
    }
    let mut f = std::fs::File::create(out_dir.join("report.json"))?;
    f.write_all(serde_json::to_string_pretty(&report)?.as_bytes())?;
    f.write_all(b"\n")?;

    Ok(RunOutcome { out_dir, report, exit_code })
}

// ─────────────────────────── tests ───────────────────────────
