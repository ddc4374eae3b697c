//! `latacc`: estimate classifier accuracy on unlabeled data.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use latacc::config::{DataSource, FitConfig, PredictionFiles};
use latacc::{elicit_beta, grid_posterior_means, io, run_fit, CrossTab, Error, Result};

#[derive(Parser)]
#[command(name = "latacc", version, about = "Bayesian accuracy estimates for two binary classifiers without labels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cross-tabulate two prediction files (one 0/1 per line).
    Crosstab {
        file_a: PathBuf,
        file_b: PathBuf,
        /// Print JSON instead of `y1,y2,y3,y4`.
        #[arg(long)]
        json: bool,
    },
    /// Beta(a, b) with the given mode and mass above a threshold.
    Elicit {
        #[arg(long)]
        mode: f64,
        #[arg(long)]
        threshold: f64,
        #[arg(long)]
        tail_mass: f64,
    },
    /// Sample the posterior and write chains.csv and report.json.
    Fit {
        #[command(flatten)]
        input: InputArgs,
        /// Overrides the config seed and LATACC_SEED.
        #[arg(long, env = "LATACC_SEED")]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Posterior means by brute-force grid integration.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        points: Option<usize>,
        /// Integrate without the Se + Sp > 1 restriction.
        #[arg(long)]
        unconstrained: bool,
    },
    /// Re-summarize and diagnose an existing chain CSV.
    Report {
        chains: PathBuf,
        /// Also write the JSON report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct InputArgs {
    /// JSON fit configuration.
    #[arg(long)]
    config: PathBuf,
    /// Cross-tab counts `y1,y2,y3,y4`; repeat for the second dataset.
    #[arg(long, value_parser = parse_tab)]
    tab: Vec<CrossTab>,
    /// Prediction files of classifiers A and B; repeat for the second dataset.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pred: Vec<PathBuf>,
}

fn parse_tab(s: &str) -> std::result::Result<CrossTab, String> {
    let counts: Vec<u64> = s
        .split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    let counts: [u64; 4] = counts
        .try_into()
        .map_err(|v: Vec<u64>| format!("expected 4 counts, got {}", v.len()))?;
    Ok(CrossTab::from_counts(counts))
}

impl InputArgs {
    /// Load the config and the cross-tabs; command-line data replaces the config's.
    fn load(&self) -> Result<(FitConfig, Vec<CrossTab>)> {
        let mut config = FitConfig::from_file(&self.config)?;
        if !self.tab.is_empty() && !self.pred.is_empty() {
            return Err(Error::Config("give either --tab or --pred, not both".into()));
        }
        if !self.tab.is_empty() {
            config.data = Some(DataSource {
                tabs: Some(self.tab.iter().map(CrossTab::counts).collect()),
                predictions: None,
            });
        } else if !self.pred.is_empty() {
            let pairs = self
                .pred
                .chunks(2)
                .map(|p| PredictionFiles { a: p[0].clone(), b: p[1].clone() })
                .collect();
            config.data = Some(DataSource { tabs: None, predictions: Some(pairs) });
        }
        config.validate()?;
        let base = self.config.parent().filter(|p| !p.as_os_str().is_empty());
        let tabs = match &config.data {
            Some(data) => data.load(base)?,
            None => return Err(Error::Config("no data: set data in the config or pass --tab/--pred".into())),
        };
        Ok((config, tabs))
    }
}

/// `v` to `digits` significant figures.
fn significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return v.to_string();
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Crosstab { file_a, file_b, json } => {
            let tab = io::crosstab(&file_a, &file_b)?;
            if json {
                serde_json::to_writer(&mut out, &tab)?;
                writeln!(out)?;
            } else {
                writeln!(out, "{},{},{},{}", tab.y1, tab.y2, tab.y3, tab.y4)?;
            }
        }
        Command::Elicit { mode, threshold, tail_mass } => {
            let p = elicit_beta(mode, threshold, tail_mass)?;
            writeln!(out, "a={}", significant(p.a(), 6))?;
            writeln!(out, "b={}", significant(p.b(), 6))?;
        }
        Command::Fit { input, seed, out_dir } => {
            let (mut config, tabs) = input.load()?;
            if let Some(seed) = seed {
                config.sampler.seed = seed;
            }
            let fit = run_fit(&config, &tabs)?;
            std::fs::create_dir_all(&out_dir)?;

            let mut csv = BufWriter::new(File::create(out_dir.join("chains.csv"))?);
            io::write_chain_csv(&fit.chains, &mut csv)?;
            csv.flush()?;

            let mut report = fit.report;
            report.generated_at = SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs());
            write_json(&out_dir.join("report.json"), &report)?;

            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            write!(out, "{}", report.parameters.to_csv())?;
            write!(out, "{}", report.metrics.to_csv().split_once('\n').map_or("", |(_, rows)| rows))?;
        }
        Command::Oracle { input, points, unconstrained } => {
            let (config, tabs) = input.load()?;
            let priors = config.validate()?;
            let points = points.unwrap_or_else(|| config.oracle_points());
            let grid = grid_posterior_means(config.model, &tabs, &priors, points, !unconstrained)?;
            serde_json::to_writer_pretty(&mut out, &grid)?;
            writeln!(out)?;
        }
        Command::Report { chains, out: path } => {
            let set = io::read_chain_csv(File::open(&chains)?)?;
            let report = latacc::fit::reanalyze(&set)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            if let Some(path) = path {
                write_json(&path, &report)?;
            }
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        // Output piped into e.g. `head`.
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{line}");
            ExitCode::FAILURE
        }
    }
}
