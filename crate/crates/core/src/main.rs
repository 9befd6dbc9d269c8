use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ihsim::calib::{self, AlphaSynthesis, SyntheticSpec};
use ihsim::graph::NetworkKind;
use ihsim::harness::{
    self, report, DatasetSource, ExperimentConfig, FractionSweepRow, NetworkSweepRow,
};

#[derive(Parser)]
#[command(name = "ihsim", version, about = "Simulate humility-modulated estimation on social networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic calibration dataset as CSV.
    Generate(GenerateArgs),
    /// Run a matched control/treatment experiment.
    Run(RunArgs),
    /// Sweep one experiment axis (network structure or treatment fraction).
    Sweep(SweepArgs),
    /// Aggregate result files into plot-ready CSVs.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Output CSV path.
    #[arg(long, default_value = "dataset.csv")]
    out: PathBuf,
    #[arg(long, default_value_t = 4)]
    questions: usize,
    /// Respondents per question.
    #[arg(long, default_value_t = 200)]
    respondents: usize,
    #[arg(long, default_value_t = 1_000.0)]
    truth_lo: f64,
    #[arg(long, default_value_t = 1_000_000.0)]
    truth_hi: f64,
    /// Log-scale dispersion of estimates around the truth.
    #[arg(long, default_value_t = 0.6)]
    dispersion: f64,
    /// Probability of the D and R labels, e.g. `0.5,0.5`; omit for a
    /// party-free dataset.
    #[arg(long)]
    party_split: Option<String>,
    /// Skip synthesizing baseline self-weights.
    #[arg(long)]
    no_alpha0: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    overrides: ConfigOverrides,
    /// Also dump replication-0 network edge lists for each question.
    #[arg(long)]
    dump_networks: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep axis: `network` or `fraction`.
    #[arg(long)]
    axis: String,
    /// Fractions for the fraction axis, e.g. `0.0,0.5,1.0`. Defaults to
    /// 0.0 through 1.0 in steps of 0.1.
    #[arg(long)]
    fractions: Option<String>,
    #[command(flatten)]
    overrides: ConfigOverrides,
}

#[derive(Args)]
struct ReportArgs {
    /// Result CSV files to aggregate (agents.csv siblings are picked up
    /// automatically).
    #[arg(required = true)]
    results: Vec<PathBuf>,
    #[arg(long, default_value = "report")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    resamples: usize,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

/// Flags shared by `run` and `sweep`; they override config-file values.
#[derive(Args)]
struct ConfigOverrides {
    /// Config file (key = value lines); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory override.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Replication count override.
    #[arg(long)]
    replications: Option<usize>,
    /// Network structure override: egalitarian, ba, ws or star.
    #[arg(long)]
    network: Option<String>,
    /// Treatment-fraction override.
    #[arg(long)]
    fraction: Option<f64>,
    /// Dataset CSV override (or the literal `synthetic`).
    #[arg(long)]
    dataset: Option<String>,
    /// Disable the homophily term (required for party-free datasets).
    #[arg(long)]
    no_homophily: bool,
}

impl ConfigOverrides {
    fn resolve(&self) -> Result<ExperimentConfig, harness::HarnessError> {
        let mut cfg = match &self.config {
            Some(path) => harness::load_config(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.master_seed = seed;
        }
        if let Some(dir) = &self.out_dir {
            cfg.output_dir = dir.clone();
        }
        if let Some(reps) = self.replications {
            cfg.replications = reps;
        }
        if let Some(name) = &self.network {
            cfg.network = match name.as_str() {
                "egalitarian" => NetworkKind::Egalitarian { degree: 4 },
                "ba" => NetworkKind::BarabasiAlbert { m: 2, p: 0.5 },
                "ws" => NetworkKind::WattsStrogatz { k: 4, p: 0.5 },
                "star" => NetworkKind::Star,
                other => {
                    return Err(harness::HarnessError::Config(format!(
                        "--network `{other}` is not one of egalitarian, ba, ws, star"
                    )))
                }
            };
        }
        if let Some(f) = self.fraction {
            cfg.treatment_fraction = f;
        }
        if let Some(ds) = &self.dataset {
            cfg.dataset = if ds == "synthetic" {
                DatasetSource::Synthetic(SyntheticSpec::default())
            } else {
                DatasetSource::Path(PathBuf::from(ds))
            };
        }
        if self.no_homophily {
            cfg.homophily_enabled = false;
        }
        Ok(cfg)
    }
}

fn parse_split(raw: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("--party-split expects `d,r`, got `{raw}`"));
    }
    let d = parts[0].trim().parse::<f64>().map_err(|e| e.to_string())?;
    let r = parts[1].trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((d, r))
}

fn cmd_generate(args: &GenerateArgs) -> Result<(), String> {
    let party_split = match &args.party_split {
        Some(raw) => Some(parse_split(raw)?),
        None => None,
    };
    let spec = SyntheticSpec {
        n_questions: args.questions,
        n_respondents: args.respondents,
        truth_range: (args.truth_lo, args.truth_hi),
        estimate_dispersion: args.dispersion,
        party_split,
        alpha_params: if args.no_alpha0 { None } else { Some(AlphaSynthesis::default()) },
    };
    let dataset = calib::generate_synthetic_dataset(&spec, args.seed).map_err(|e| e.to_string())?;
    calib::write_dataset_to_path(&dataset, &args.out).map_err(|e| e.to_string())?;
    let rows: usize = dataset.iter().map(|(_, rs)| rs.len()).sum();
    println!("wrote {} questions, {rows} rows to {}", dataset.len(), args.out.display());
    Ok(())
}

fn cmd_run(args: &RunArgs) -> Result<(), String> {
    let cfg = args.overrides.resolve().map_err(|e| e.to_string())?;
    let output = harness::run_experiment(&cfg).map_err(|e| e.to_string())?;
    harness::write_outputs(&output, &cfg, &cfg.output_dir).map_err(|e| e.to_string())?;
    if args.dump_networks {
        harness::dump_networks(&cfg, &cfg.output_dir.join("networks")).map_err(|e| e.to_string())?;
    }
    println!(
        "wrote {} result rows ({} questions x {} replications) to {}",
        output.rows.len(),
        output.question_ids.len(),
        cfg.replications,
        cfg.output_dir.display()
    );
    Ok(())
}

fn print_network_sweep(rows: &[NetworkSweepRow]) {
    for row in rows {
        let fmt = |s: Option<&harness::EffectSummary>| match s {
            Some(e) => format!("{:+.4} (p={:.4})", e.effect, e.p_value),
            None => "n/a".to_string(),
        };
        println!(
            "{:24} error {} | revision {} | polarization {}",
            row.kind.to_string(),
            fmt(Some(&row.error)),
            fmt(row.revision.as_ref()),
            fmt(row.polarization.as_ref()),
        );
    }
}

fn print_fraction_sweep(rows: &[FractionSweepRow]) {
    for row in rows {
        println!(
            "f={:<4} error {:+.5} (p={:.4})",
            row.fraction, row.error.effect, row.error.p_value
        );
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), String> {
    let cfg = args.overrides.resolve().map_err(|e| e.to_string())?;
    std::fs::create_dir_all(&cfg.output_dir).map_err(|e| e.to_string())?;
    match args.axis.as_str() {
        "network" => {
            let kinds = [
                NetworkKind::Egalitarian { degree: 4 },
                NetworkKind::BarabasiAlbert { m: 2, p: 0.5 },
                NetworkKind::WattsStrogatz { k: 4, p: 0.5 },
                NetworkKind::Star,
            ];
            let rows = harness::sweep_networks(&cfg, &kinds).map_err(|e| e.to_string())?;
            let path = cfg.output_dir.join("network_sweep.csv");
            let file = std::fs::File::create(&path).map_err(|e| e.to_string())?;
            harness::write_network_sweep_csv(&rows, file).map_err(|e| e.to_string())?;
            print_network_sweep(&rows);
            println!("wrote {}", path.display());
        }
        "fraction" => {
            let fractions: Vec<f64> = match &args.fractions {
                Some(raw) => raw
                    .split(',')
                    .map(|s| s.trim().parse::<f64>().map_err(|e| e.to_string()))
                    .collect::<Result<_, _>>()?,
                None => (0..=10).map(|i| i as f64 / 10.0).collect(),
            };
            let rows = harness::sweep_fraction(&cfg, &fractions).map_err(|e| e.to_string())?;
            let path = cfg.output_dir.join("fraction_sweep.csv");
            let file = std::fs::File::create(&path).map_err(|e| e.to_string())?;
            harness::write_fraction_sweep_csv(&rows, file).map_err(|e| e.to_string())?;
            print_fraction_sweep(&rows);
            println!("wrote {}", path.display());
        }
        other => return Err(format!("--axis `{other}` must be `network` or `fraction`")),
    }
    Ok(())
}

fn cmd_report(args: &ReportArgs) -> Result<(), String> {
    let opts = report::ReportOptions { resamples: args.resamples, level: args.level, seed: args.seed };
    let rpt =
        report::write_report(&args.results, &args.out_dir, &opts).map_err(|e| e.to_string())?;
    println!(
        "wrote report ({} error curves, {} decomposition rows) to {}",
        rpt.error_curves.len(),
        rpt.dpt_comparison.len(),
        args.out_dir.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Report(args) => cmd_report(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
