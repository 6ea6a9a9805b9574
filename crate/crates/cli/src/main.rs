use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dephaselab_core::workbench::{
    blp_report, emit_csv, equivalence_report, figure_config, load_config, run_experiment,
    write_csv, Dataset, Figure, FigureOverrides, WorkbenchError,
};

/// Equivalent dephasing models: reduced dynamics, correlations and
/// information backflow.
#[derive(Parser)]
#[command(name = "dephaselab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Regenerate a figure's data with preset parameters.
    Figure {
        #[arg(value_parser = parse_figure)]
        name: Figure,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        g: Option<f64>,
        /// End of the time axis; for fig5-fig7 the later time t of Δ_S(t, s).
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide whether two configured models have the same reduced dynamics.
    CheckEquivalence {
        #[arg(long)]
        config: PathBuf,
    },
    /// BLP non-Markovianity of both configured models.
    Blp {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_figure(name: &str) -> Result<Figure, String> {
    match Figure::parse(name) {
        Some(f) if f.name().starts_with("fig") => Ok(f),
        _ => Err(format!(
            "expected one of fig3, fig4, fig5, fig6, fig7; got '{name}'"
        )),
    }
}

fn output(dataset: &Dataset, out: Option<&Path>) -> Result<(), WorkbenchError> {
    match out {
        Some(path) => emit_csv(dataset, path)?,
        None => write_csv(dataset, std::io::stdout().lock())?,
    }
    Ok(())
}

fn execute(command: Command) -> Result<(), WorkbenchError> {
    match command {
        Command::Run { config } => {
            let cfg = load_config(&config)?;
            let ds = run_experiment(&cfg)?;
            output(&ds, cfg.out.as_deref())
        }
        Command::Figure {
            name,
            r,
            c,
            d,
            g,
            t_max,
            points,
            out,
        } => {
            let overrides = FigureOverrides {
                r,
                c,
                d,
                g,
                t_max,
                points,
            };
            let cfg = figure_config(name, &overrides)?;
            let ds = run_experiment(&cfg)?;
            emit_csv(&ds, &out)?;
            eprintln!("wrote {} rows to {}", ds.rows.len(), out.display());
            Ok(())
        }
        Command::CheckEquivalence { config } => {
            let cfg = load_config(&config)?;
            let report = equivalence_report(&cfg)?;
            let mut stdout = std::io::stdout().lock();
            for v in report.verdicts() {
                writeln!(
                    stdout,
                    "{:<13} {:<14} max_discrepancy={:.3e} tol={:.1e}",
                    v.method.name(),
                    if v.equivalent {
                        "equivalent"
                    } else if v.borderline {
                        "borderline"
                    } else {
                        "not-equivalent"
                    },
                    v.max_discrepancy,
                    v.tolerance,
                )?;
            }
            drop(stdout);
            if let Some(out) = &cfg.out {
                emit_csv(&report.dataset, out)?;
            }
            Ok(())
        }
        Command::Blp { config } => {
            let cfg = load_config(&config)?;
            let report = blp_report(&cfg)?;
            println!(
                "model_a {:.12} best pair {}",
                report.model_a.measure, report.model_a.best_pair.label
            );
            println!(
                "model_b {:.12} best pair {}",
                report.model_b.measure, report.model_b.best_pair.label
            );
            if let Some(out) = &cfg.out {
                emit_csv(&report.dataset, out)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dephaselab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
