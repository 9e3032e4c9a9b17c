//! Command-line front end.
//!
//! Two subcommands:
//!
//! - `bubble-lab run <config.json>` — execute an experiment document
//!   and write `trajectory.csv`, `moments.csv`, and `report.json` into
//!   its output directory.  `--out` overrides the document's `output`
//!   field; `--threads` (or the `BUBBLE_LAB_THREADS` environment
//!   variable) sets the analysis worker count.
//! - `bubble-lab verify <kernel|specfun|exact>` — run a built-in
//!   verification suite, print its table, and optionally write the
//!   machine-readable version with `--out`.
//!
//! Exit codes: 0 success; 1 configuration or I/O problem; 2 stepper
//! precondition violation (nothing written); 3 divergence before any
//! analysis window, or a failing verification suite.

use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use bubble_lab::runner::{self, AnalysisReport};
use bubble_lab::verify;

#[derive(Parser)]
#[command(name = "bubble-lab", version, about = "Semilinear field dynamics laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON configuration document.
    Run {
        /// Path to the configuration document.
        config: PathBuf,
        /// Output directory (overrides the document's `output` field).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Analysis worker threads (default: BUBBLE_LAB_THREADS, then
        /// one per core).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run a built-in verification suite and print its table.
    Verify {
        /// Which suite to run.
        #[arg(value_parser = ["kernel", "specfun", "exact"])]
        suite: String,
        /// Also write the table as `<suite>.json` into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// One human-readable status line per analysis entry.
fn describe(entry: &AnalysisReport) -> String {
    match entry {
        AnalysisReport::Moments { samples, c0, c1, .. } => {
            format!("moments: {samples} samples, C0 = {c0:.6e}, C1 = {c1:.6e}")
        }
        AnalysisReport::Energy { initial, r#final, nonincreasing, .. } => format!(
            "energy: {initial:.6e} → {final:.6e} ({})",
            if *nonincreasing { "non-increasing" } else { "INCREASED" },
            final = r#final
        ),
        AnalysisReport::Signedness { fit } => {
            format!("signedness: fitted constant {:.6e}, verdict {:?}", fit.c, fit.verdict)
        }
        AnalysisReport::Hypotheses { report } => {
            let verdict = serde_json::to_value(report.overall)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default();
            format!("hypotheses ({:?}): {verdict}", report.family)
        }
        AnalysisReport::Bubbles { count, .. } => {
            format!("bubbles: {count} slice(s) with interior walls")
        }
        AnalysisReport::KernelVerify { suite } => format!(
            "kernel_verify: {}/{} checks passed",
            suite.rows.iter().filter(|r| r.passed).count(),
            suite.rows.len()
        ),
        AnalysisReport::Lifespan { estimate } => match estimate.blowup_time_upper {
            Some(t) => format!("lifespan: upper bound {t:.6e}"),
            None => "lifespan: no finite bound (conditions not met)".to_string(),
        },
        AnalysisReport::Failed { requested, error } => format!("{requested}: FAILED — {error}"),
    }
}

fn run_command(config: &PathBuf, out: Option<PathBuf>, threads: Option<usize>) -> i32 {
    match runner::run(config, out.as_deref(), threads) {
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
        Ok(outcome) => {
            if let Some(sim) = &outcome.report.simulation {
                match &sim.blowup {
                    Some(flag) => println!(
                        "simulated {} slices to t = {} (diverged at t = {})",
                        sim.slices, sim.t_final, flag.time
                    ),
                    None => println!("simulated {} slices to t = {}", sim.slices, sim.t_final),
                }
            }
            for entry in &outcome.report.analyses {
                println!("  {}", describe(entry));
            }
            if let Some(v) = &outcome.report.overall {
                let label = serde_json::to_value(v)
                    .ok()
                    .and_then(|x| x.as_str().map(str::to_owned))
                    .unwrap_or_default();
                println!("overall verdict: {label}");
            }
            println!("artifacts in {}", outcome.out_dir.display());
            outcome.exit_code
        }
    }
}

fn verify_command(name: &str, out: Option<PathBuf>) -> i32 {
    let Some(report) = verify::suite(name) else {
        eprintln!("error: unknown suite {name:?} (expected kernel, specfun, or exact)");
        return 1;
    };
    print!("{}", report.render());
    if let Some(dir) = out {
        let write = || -> std::io::Result<()> {
            std::fs::create_dir_all(&dir)?;
            let mut f = std::fs::File::create(dir.join(format!("{name}.json")))?;
            f.write_all(serde_json::to_string_pretty(&report)?.as_bytes())?;
            f.write_all(b"\n")
        };
        if let Err(e) = write() {
            eprintln!("error: {e}");
            return 1;
        }
    }
    if report.passed {
        0
    } else {
        3
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { config, out, threads } => run_command(&config, out, threads),
        Command::Verify { suite, out } => verify_command(&suite, out),
    };
    std::process::exit(code);
}
