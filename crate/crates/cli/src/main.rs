use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod error;
mod output;

use config::RunConfig;
use error::CliResult;

/// Disambiguate homonymous authors in co-authorship data.
#[derive(Debug, Parser)]
#[command(name = "homonym", version)]
struct Cli {
    /// More log output (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the weighted co-authorship graph of a corpus.
    BuildNet(BuildNetArgs),
    /// Cluster the ambiguous mentions of a corpus, or the nodes of a graph.
    Disambiguate(DisambiguateArgs),
    /// Score the method and the baselines over a grid of synthetic benchmarks.
    Sweep(SweepArgs),
    /// Write a synthetic benchmark or the 15-node demo network.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct BuildNetArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Ambiguous names: JSON with optional mention groups, or one name per line.
    #[arg(long)]
    pub ambiguous: PathBuf,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

/// Settings shared by `disambiguate` and `sweep`.
#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Flat `key = value` file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long = "omega-min")]
    pub omega_min: Option<f64>,
    #[arg(long = "omega-max")]
    pub omega_max: Option<f64>,
    /// Walk repetitions.
    #[arg(long = "r")]
    pub r: Option<usize>,
    #[arg(long = "max-iters")]
    pub max_iters: Option<u64>,
    /// Stop once domination levels move less than this per window; 0 runs to max-iters.
    #[arg(long = "conv-tol")]
    pub conv_tol: Option<f64>,
    #[arg(long = "conv-window")]
    pub conv_window: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `none`, `threshold:<tau>` or `knn:<kappa>`.
    #[arg(long)]
    pub sparsify: Option<String>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DisambiguateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of particles.
    #[arg(long = "k")]
    pub k: Option<usize>,
    /// Walk length.
    #[arg(long = "l")]
    pub l: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Start nodes (0-based, comma separated).
    #[arg(long)]
    pub positions: Option<String>,
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub ambiguous: Option<PathBuf>,
    /// CSV `paper_id,name,entity` (corpus mode) or `node,class` (graph mode).
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Edge list to cluster instead of a corpus.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub nodes: Option<PathBuf>,
    /// Run the competition on the graph itself, skipping the similarity stage.
    #[arg(long)]
    pub direct: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Walk lengths.
    #[arg(long = "l", value_delimiter = ',')]
    pub l: Vec<usize>,
    /// Particle counts; the entity count when omitted.
    #[arg(long = "k", value_delimiter = ',')]
    pub k: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "2,3,5,9")]
    pub eta: Vec<usize>,
    /// Dataset seeds, `a..b` (inclusive) or a comma list.
    #[arg(long, default_value = "1..10")]
    pub seeds: String,
    #[arg(long = "p-cross", default_value_t = 0.15)]
    pub p_cross: f64,
    #[arg(long = "papers-per-entity", default_value_t = 8)]
    pub papers_per_entity: usize,
    #[arg(long = "coauthor-pool", default_value_t = 6)]
    pub coauthor_pool: usize,
    /// Chance of a win under the null hypothesis of the sign test.
    #[arg(long, default_value_t = 1.0 / 6.0)]
    pub chance: f64,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Write the 15-node, 3-community demo network instead.
    #[arg(long)]
    pub demo: bool,
    #[arg(long, default_value_t = 2)]
    pub eta: usize,
    #[arg(long = "papers-per-entity", default_value_t = 8)]
    pub papers_per_entity: usize,
    #[arg(long = "coauthor-pool", default_value_t = 6)]
    pub coauthor_pool: usize,
    #[arg(long = "p-cross", default_value_t = 0.15)]
    pub p_cross: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .format_timestamp(None)
        .try_init();
}

/// Defaults, then the config file, then flags.
fn resolve(model: &ModelArgs, extra: &[(&str, Option<String>)], verbose: u8) -> CliResult<RunConfig> {
    let mut config = match &model.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let flags: [(&str, Option<String>); 10] = [
        ("delta", model.delta.map(|v| v.to_string())),
        ("omega_min", model.omega_min.map(|v| v.to_string())),
        ("omega_max", model.omega_max.map(|v| v.to_string())),
        ("r", model.r.map(|v| v.to_string())),
        ("max_iters", model.max_iters.map(|v| v.to_string())),
        ("conv_tol", model.conv_tol.map(|v| v.to_string())),
        ("conv_window", model.conv_window.map(|v| v.to_string())),
        ("seed", model.seed.map(|v| v.to_string())),
        ("sparsify", model.sparsify.clone()),
        ("workers", model.workers.map(|v| v.to_string())),
    ];
    for (key, value) in flags.iter().chain(extra) {
        if let Some(value) = value {
            config.set(key, value)?;
        }
    }
    if let Some(out) = &model.out {
        config.out = out.clone();
    }
    if verbose > 0 {
        config.verbosity = verbose;
    }
    Ok(config)
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::BuildNet(args) => commands::build_net(&args),
        Command::Synth(args) => commands::synth(&args),
        Command::Disambiguate(args) => {
            let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
            let extra = [
                ("k", args.k.map(|v| v.to_string())),
                ("l", args.l.map(|v| v.to_string())),
                ("lambda", args.lambda.map(|v| v.to_string())),
                ("positions", args.positions.clone()),
                ("corpus", path(&args.corpus)),
                ("ambiguous", path(&args.ambiguous)),
                ("truth", path(&args.truth)),
                ("graph", path(&args.graph)),
                ("nodes", path(&args.nodes)),
                ("direct", args.direct.then(|| "true".to_string())),
            ];
            let config = resolve(&args.model, &extra, cli.verbose)?;
            commands::disambiguate(&config)
        }
        Command::Sweep(args) => {
            let config = resolve(&args.model, &[], cli.verbose)?;
            commands::sweep(&config, &args)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    init_logging(cli.verbose);
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

