use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use smcs_sim::config::{ConfigError, DetectorKind, ExperimentConfig};
use smcs_sim::figures::run_figure;
use smcs_sim::output::{emit_results, render, write_text};
use smcs_sim::plot::{plot_script, FigureId};
use smcs_sim::{run_sweep, SweepResult};

#[derive(Parser)]
#[command(name = "smcs", version, about = "Monte Carlo sweeps for spatial-modulation MIMO detectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured sweep.
    Sweep(Overrides),
    /// Evaluate the analytical SCSER curves.
    Analytic(Overrides),
    /// Run a figure replica and write its gnuplot script.
    Figure {
        /// fig3, fig4, fig5, fig6 or fig7.
        name: FigureId,
        #[command(flatten)]
        overrides: Overrides,
    },
}

/// Flags mirror the config keys and override the config file.
#[derive(Args, Default)]
struct Overrides {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    nt: Option<String>,
    #[arg(long)]
    nr: Option<String>,
    #[arg(long)]
    na: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    rt: Option<String>,
    #[arg(long)]
    rr: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<String>,
    #[arg(long)]
    detectors: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    max_errors: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    workers: Option<String>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    ml_budget: Option<String>,
    #[arg(long)]
    timing: Option<String>,
}

impl Overrides {
    fn pairs(&self) -> Vec<(&'static str, &str)> {
        let all = [
            ("nt", &self.nt),
            ("nr", &self.nr),
            ("na", &self.na),
            ("m", &self.m),
            ("scheme", &self.scheme),
            ("g", &self.g),
            ("rt", &self.rt),
            ("rr", &self.rr),
            ("snr_db", &self.snr_db),
            ("detectors", &self.detectors),
            ("trials", &self.trials),
            ("max_errors", &self.max_errors),
            ("seed", &self.seed),
            ("out", &self.out),
            ("workers", &self.workers),
            ("format", &self.format),
            ("ml_budget", &self.ml_budget),
            ("timing", &self.timing),
        ];
        all.into_iter().filter_map(|(k, v)| v.as_deref().map(|v| (k, v))).collect()
    }

    fn load(&self) -> Result<ExperimentConfig, String> {
        let mut cfg = ExperimentConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            cfg.apply_text(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        }
        self.apply(&mut cfg).map_err(|e| e.to_string())?;
        Ok(cfg)
    }

    fn apply(&self, cfg: &mut ExperimentConfig) -> Result<(), ConfigError> {
        for (k, v) in self.pairs() {
            cfg.set(k, v)?;
        }
        Ok(())
    }
}

enum Failure {
    Config(String),
    Refused,
}

fn finish(result: &SweepResult, cfg: &ExperimentConfig) -> Result<(), Failure> {
    match &cfg.out {
        _ if result.records.is_empty() => {}
        Some(path) => emit_results(result, cfg.format, path).map_err(|e| Failure::Config(e.to_string()))?,
        None => print!("{}", render(result, cfg.format).map_err(|e| Failure::Config(e.to_string()))?),
    }
    for r in &result.refusals {
        eprintln!("refused {} at {} dB: {}", r.detector, r.snr_db, r.reason);
    }
    if result.refusals.is_empty() {
        Ok(())
    } else {
        Err(Failure::Refused)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sweep(o) => {
            let cfg = o.load().map_err(Failure::Config)?;
            let result = run_sweep(&cfg).map_err(|e| Failure::Config(e.to_string()))?;
            finish(&result, &cfg)
        }
        Command::Analytic(o) => {
            let mut cfg = o.load().map_err(Failure::Config)?;
            cfg.detectors.retain(|d| d.is_analytic());
            if cfg.detectors.is_empty() {
                cfg.detectors = DetectorKind::ALL.into_iter().filter(|d| d.is_analytic()).collect();
            }
            let result = run_sweep(&cfg).map_err(|e| Failure::Config(e.to_string()))?;
            finish(&result, &cfg)
        }
        Command::Figure { name, overrides } => {
            let mut file = ExperimentConfig::default();
            if overrides.config.is_some() {
                file = overrides.load().map_err(Failure::Config)?;
            }
            let keep: Vec<(&str, &str)> = overrides
                .pairs()
                .into_iter()
                .filter(|(k, _)| matches!(*k, "snr_db" | "trials" | "max_errors" | "seed" | "workers" | "ml_budget" | "timing"))
                .collect();
            let result = run_figure(name, |cfg| {
                for (k, v) in &keep {
                    let _ = cfg.set(k, v);
                }
            })
            .map_err(|e| Failure::Config(e.to_string()))?;
            let out = overrides
                .out
                .as_deref()
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(format!("{}.{}", name.name(), file.format.extension())));
            let format = overrides.format.as_deref().map_or(Ok(file.format), |f| {
                let mut c = ExperimentConfig::default();
                c.set("format", f).map(|_| c.format)
            });
            let format = format.map_err(|e| Failure::Config(e.to_string()))?;
            if result.records.is_empty() {
                return finish(&result, &file);
            }
            emit_results(&result, format, &out).map_err(|e| Failure::Config(e.to_string()))?;
            let script = plot_script(&result.records, name).map_err(|e| Failure::Config(e.to_string()))?;
            write_text(&out.with_extension("gp"), &script).map_err(|e| Failure::Config(e.to_string()))?;
            for r in &result.refusals {
                eprintln!("refused {} at {} dB: {}", r.detector, r.snr_db, r.reason);
            }
            if result.refusals.is_empty() {
                Ok(())
            } else {
                Err(Failure::Refused)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Refused) => ExitCode::from(2),
    }
}
