//! Command-line entry point tying the toolkit together.
//!
//! Subcommands: `simulate` runs one scenario and writes trace files, `tune`
//! runs the firefly tuner over filter/controller diagonals, `analyze` prints
//! the metrics table of a written trace, and `roots` prints the
//! characteristic polynomial and spectrum of a scenario's model.
//!
//! Exit codes: 0 on success, 2 on usage errors, 1 on runtime failures. All
//! randomness flows from `--seed` (default 0); machine outputs land only
//! under `--out`.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use crate::airframe::{characteristic_polynomial, dynamic_core, stability_roots, LinearModel};
use crate::firefly::{
    selector_diagonals, tune_pipeline, FireflyParams, SearchSpace, TuneSelector,
};
use crate::linalg::ComplexPair;
use crate::sim::{
    load_scenario_file, run_scenario, save_scenario, write_trace, MetricsReport, Scenario,
    ScenarioError,
};

#[derive(Parser)]
#[command(
    name = "lqgkit",
    version,
    about = "Linear-quadratic estimation and control toolkit",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one closed-loop scenario and write trace.csv / metrics.json /
    /// plot.csv under --out.
    Simulate {
        /// Preset name (longitudinal-demo, planar-goal) or a scenario file.
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
    },
    /// Tune filter/controller diagonals with the firefly algorithm; writes
    /// history.csv and tuned_scenario.json under --out.
    Tune {
        /// Preset name or scenario file.
        #[arg(long)]
        scenario: String,
        /// What to tune: comma-separated subset of {kf, lqr}.
        #[arg(long, value_delimiter = ',', required = true)]
        select: Vec<SelectArg>,
        /// Firefly iterations.
        #[arg(long, default_value_t = 50)]
        iters: usize,
        /// Firefly population.
        #[arg(long, default_value_t = 15)]
        pop: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the metrics table of a previously written trace directory.
    Analyze {
        /// Directory holding metrics.json.
        #[arg(long)]
        trace: PathBuf,
    },
    /// Print the characteristic polynomial, eigenvalues, and stability
    /// verdict of a scenario's model.
    Roots {
        /// Preset name or scenario file.
        #[arg(long)]
        scenario: String,
    },
}

/// CLI spelling of the tuning selectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SelectArg {
    /// Assumed process/measurement covariance diagonals.
    #[value(alias = "kf-noise-diagonals")]
    Kf,
    /// Controller Q/R weight diagonals.
    #[value(alias = "lqr-weight-diagonals")]
    Lqr,
}

impl From<SelectArg> for TuneSelector {
    fn from(s: SelectArg) -> Self {
        match s {
            SelectArg::Kf => TuneSelector::KfNoiseDiagonals,
            SelectArg::Lqr => TuneSelector::LqrWeightDiagonals,
        }
    }
}

/// Parses `argv` (without the program name) and runs one subcommand.
/// Returns the process exit code.
pub fn dispatch<I, S>(argv: I) -> u8
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args = std::iter::once("lqgkit".to_string()).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    2
                }
            };
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn run(command: Command) -> Result<(), Box<dyn std::error::Error>> {
    match command {
        Command::Simulate { scenario, seed, out } => {
            let scenario = resolve_scenario(&scenario)?;
            let trace = run_scenario(&scenario, seed)?;
            let files = write_trace(&trace, &scenario, &out)?;
            println!(
                "simulated `{}` for {} steps (seed {seed})",
                scenario.name,
                trace.rows.len()
            );
            print!("{}", print_report(&trace.metrics));
            println!("wrote {}", files.trace_csv.display());
            println!("wrote {}", files.metrics_json.display());
            println!("wrote {}", files.plot_csv.display());
            Ok(())
        }
        Command::Tune {
            scenario,
            select,
            iters,
            pop,
            seed,
            out,
        } => {
            let scenario = resolve_scenario(&scenario)?;
            let selectors: Vec<TuneSelector> = select.iter().map(|&s| s.into()).collect();
            // default search box: two decades around the current diagonals
            let center: Vec<f64> = selector_diagonals(&scenario, &selectors)?
                .iter()
                .map(|v| v.max(1e-12).log10())
                .collect();
            let space = SearchSpace::new(
                center.iter().map(|c| c - 2.0).collect(),
                center.iter().map(|c| c + 2.0).collect(),
            )?;
            let params = FireflyParams {
                population: pop,
                iterations: iters,
                seed,
                ..Default::default()
            };
            let result = tune_pipeline(&scenario, &selectors, &space, &params)?;

            std::fs::create_dir_all(&out)
                .map_err(|e| format!("cannot create `{}`: {e}", out.display()))?;
            let history_path = out.join("history.csv");
            let mut csv = String::from("iteration,best_cost");
            for d in 0..space.dims() {
                csv.push_str(&format!(",best_position_{d}"));
            }
            csv.push('\n');
            for (i, (cost, pos)) in result
                .optimization
                .history
                .iter()
                .zip(&result.optimization.position_history)
                .enumerate()
            {
                csv.push_str(&i.to_string());
                csv.push(',');
                csv.push_str(&crate::sim::fmt_float(*cost));
                for v in pos {
                    csv.push(',');
                    csv.push_str(&crate::sim::fmt_float(*v));
                }
                csv.push('\n');
            }
            std::fs::write(&history_path, csv)
                .map_err(|e| format!("cannot write `{}`: {e}", history_path.display()))?;

            let tuned_path = out.join("tuned_scenario.json");
            std::fs::write(&tuned_path, save_scenario(&result.tuned_scenario))
                .map_err(|e| format!("cannot write `{}`: {e}", tuned_path.display()))?;

            println!(
                "tuned `{}` over {} dims: best mean MSE {:.6e}",
                scenario.name,
                space.dims(),
                result.optimization.best_cost
            );
            println!(
                "tuned diagonals: [{}]",
                result
                    .tuned_diagonals
                    .iter()
                    .map(|v| format!("{v:.6e}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            println!("wrote {}", history_path.display());
            println!("wrote {}", tuned_path.display());
            Ok(())
        }
        Command::Analyze { trace } => {
            let path = trace.join("metrics.json");
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read `{}`: {e}", path.display()))?;
            let report: MetricsReport = serde_json::from_str(&text)
                .map_err(|e| format!("malformed `{}`: {e}", path.display()))?;
            print!("{}", print_report(&report));
            Ok(())
        }
        Command::Roots { scenario } => {
            let scenario = resolve_scenario(&scenario)?;
            let model = scenario.build_model()?;
            print!("{}", roots_report(&scenario.name, &model)?);
            Ok(())
        }
    }
}

/// Resolves `--scenario`: exact preset names need no file.
fn resolve_scenario(arg: &str) -> Result<Scenario, ScenarioError> {
    match Scenario::preset(arg) {
        Ok(s) => Ok(s),
        Err(ScenarioError::UnknownPreset { .. }) => load_scenario_file(Path::new(arg)),
        Err(e) => Err(e),
    }
}

fn fmt_root(r: &ComplexPair) -> String {
    if r.im == 0.0 {
        format!("{:+.6}", r.re)
    } else {
        format!("{:+.6} {} {:.6}i", r.re, if r.im >= 0.0 { "+" } else { "-" }, r.im.abs())
    }
}

fn verdict(stable: bool) -> &'static str {
    if stable {
        "stable"
    } else {
        "not stable"
    }
}

fn spectrum_lines(title: &str, model: &LinearModel, out: &mut String) -> Result<(), Box<dyn std::error::Error>> {
    let poly = characteristic_polynomial(model)?;
    let report = stability_roots(model)?;
    out.push_str(&format!("{title} ({} states)\n", model.num_states()));
    out.push_str("  characteristic polynomial (monic, descending): ");
    out.push_str(
        &poly
            .iter()
            .map(|c| format!("{c:.6}"))
            .collect::<Vec<_>>()
            .join(" "),
    );
    out.push('\n');
    out.push_str("  roots:\n");
    for r in &report.roots {
        out.push_str(&format!("    {}\n", fmt_root(r)));
    }
    out.push_str(&format!("  verdict: {}\n", verdict(report.stable)));
    Ok(())
}

/// Stability analysis text for a model: the full system and, when pure
/// kinematic output states split off structurally, the dynamic core.
pub fn roots_report(name: &str, model: &LinearModel) -> Result<String, Box<dyn std::error::Error>> {
    let mut out = format!("scenario: {name}\n");
    spectrum_lines("full model", model, &mut out)?;
    if let Some(core) = dynamic_core(model) {
        spectrum_lines("dynamic core", &core, &mut out)?;
    }
    Ok(out)
}

fn fmt_db(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.4}")
    } else if v > 0.0 {
        "inf".to_string()
    } else if v < 0.0 {
        "-inf".to_string()
    } else {
        "nan".to_string()
    }
}

/// One aligned metrics table, columns ordered
/// Specificity / Sensitivity / Accuracy / SNR / PSNR / MSE.
pub fn print_report(report: &MetricsReport) -> String {
    let headers = ["Specificity", "Sensitivity", "Accuracy", "SNR(dB)", "PSNR(dB)", "MSE"];
    let values = [
        format!("{:.4}", report.specificity),
        format!("{:.4}", report.sensitivity),
        format!("{:.4}", report.accuracy),
        fmt_db(report.snr_db),
        fmt_db(report.psnr_db),
        format!("{:.6}", report.mse),
    ];
    let mut header_line = String::new();
    let mut value_line = String::new();
    for (h, v) in headers.iter().zip(&values) {
        let width = h.len().max(v.len()) + 2;
        header_line.push_str(&format!("{h:<width$}"));
        value_line.push_str(&format!("{v:<width$}"));
    }
    format!("{}\n{}\n", header_line.trim_end(), value_line.trim_end())
}
