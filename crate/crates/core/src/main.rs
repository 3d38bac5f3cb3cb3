use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vnentropy::evolution::{EntropyVariant, Heuristic, Objective, Pairing, TieBreak};
use vnentropy::experiments::{log_space, ExperimentConfig, GrowthMode, OmegaConfigToml, Provenance};
use vnentropy::generators::Model;
use vnentropy::quad::EdgeSumConvention;
use vnentropy::Error;

#[derive(Parser)]
#[command(name = "vnentropy", version, about = "Von Neumann graph entropy experiments")]
struct Cli {
    /// Master seed; required by every stochastic command.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Trials per parameter value.
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// All four entropies of an edge-list graph, as JSON.
    Entropy {
        #[arg(long)]
        input: PathBuf,
    },
    /// Sample one graph from a model and print it as an edge list.
    Generate(ModelArgs),
    /// Entropy-driven edge or node growth; writes a JSON trace.
    Grow {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long, value_enum)]
        objective: ObjectiveArg,
        #[arg(long)]
        steps: usize,
        /// Edges per new node (node mode).
        #[arg(long, default_value_t = 1)]
        attach: usize,
        /// Seed graph for edge mode (default: path on 8 nodes).
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Heuristic edge-prediction accuracy sweep, as CSV.
    Heuristics {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<f64>,
        #[arg(long, value_enum, value_delimiter = ',')]
        heuristics: Vec<HeuristicArg>,
    },
    /// Predictability-error sweep, as CSV.
    Predictability {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<f64>,
        #[arg(long, value_enum, default_value = "both")]
        pairing: PairingArg,
        /// How ties in the approximation's optimum are resolved.
        #[arg(long, value_enum, default_value = "exact-favorable")]
        ties: TiesArg,
    },
    /// Pairwise entropy correlations per setting, as JSON.
    Correlate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        graphs: usize,
        #[arg(long, value_enum, default_value = "ordered-pairs")]
        convention: ConventionArg,
    },
    /// Per-graph entropies and edge counts, as CSV.
    EntropyVsEdges {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        graphs: usize,
    },
    /// Small-worldness of Watts-Strogatz graphs over a rewiring sweep, as CSV.
    Smallworld {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        k: usize,
        /// Explicit rewiring probabilities; overrides --points.
        #[arg(long, value_delimiter = ',')]
        ps: Vec<f64>,
        /// Log-spaced points in [1e-3, 1].
        #[arg(long, default_value_t = 16)]
        points: usize,
        #[arg(long, default_value_t = 10)]
        instances: usize,
        #[arg(long, default_value_t = 20)]
        references: usize,
        #[arg(long, default_value_t = 10)]
        swaps_per_edge: usize,
    },
    /// Sliding-window correlation networks from a price CSV.
    Ingest {
        #[arg(long)]
        prices: PathBuf,
        #[arg(long, default_value_t = 28)]
        window: usize,
        /// Correlation threshold; edges need |r| strictly above it.
        #[arg(long)]
        threshold: f64,
        #[arg(long)]
        out_dir: PathBuf,
        /// Also report entropy correlations over the connected networks.
        #[arg(long)]
        analyze: bool,
    },
    /// Run an experiment described by a TOML file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Edge (ER) or rewiring (WS) probability.
    #[arg(long)]
    p: Option<f64>,
    /// Ring neighbours (WS).
    #[arg(long)]
    k: Option<usize>,
    /// Edges per new node (BA).
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Er,
    Ws,
    Ba,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Edge,
    Node,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Le,
    Ale,
    Nle,
    Anle,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Max,
    Min,
}

#[derive(Clone, Copy, ValueEnum)]
enum HeuristicArg {
    MinDegreeSum,
    MaxGeodesic,
    MinSumMaxGeo,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairingArg {
    Laplacian,
    Normalized,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum TiesArg {
    Uniform,
    ExactFavorable,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    OrderedPairs,
    UnorderedPairs,
}

impl ModelArgs {
    fn model(&self, sweep: &[f64]) -> Result<Model, Error> {
        // A swept parameter may be omitted; the placeholder is replaced per sweep value.
        let need = |name: &str| Error::BadParam(format!("--{name} is required for this model"));
        let sweep_default = sweep.first().copied();
        Ok(match self.model {
            ModelKind::Er => Model::Er {
                n: self.n,
                p: self.p.or(sweep_default).ok_or_else(|| need("p"))?,
            },
            ModelKind::Ws => Model::Ws {
                n: self.n,
                k: self.k.or(sweep_default.map(|v| v as usize)).ok_or_else(|| need("k"))?,
                p: self.p.ok_or_else(|| need("p"))?,
            },
            ModelKind::Ba => Model::Ba {
                n: self.n,
                m: self.m.or(sweep_default.map(|v| v as usize)).ok_or_else(|| need("m"))?,
            },
        })
    }
}

fn require_seed(seed: Option<u64>, command: &str) -> Result<u64, Error> {
    seed.ok_or_else(|| Error::BadParam(format!("--seed is required for `{command}`")))
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let trials = cli.trials.unwrap_or(50);
    Ok(match &cli.command {
        Command::Entropy { input } => ExperimentConfig::Entropy { input: input.clone() },
        Command::Generate(m) => ExperimentConfig::Generate {
            model: m.model(&[])?,
            seed: require_seed(cli.seed, "generate")?,
        },
        Command::Grow {
            mode,
            variant,
            objective,
            steps,
            attach,
            input,
        } => ExperimentConfig::Grow {
            mode: match mode {
                ModeArg::Edge => GrowthMode::Edge,
                ModeArg::Node => GrowthMode::Node,
            },
            variant: match variant {
                VariantArg::Le => EntropyVariant::ExactL,
                VariantArg::Ale => EntropyVariant::ApproxL,
                VariantArg::Nle => EntropyVariant::ExactN,
                VariantArg::Anle => EntropyVariant::ApproxN,
            },
            objective: match objective {
                ObjectiveArg::Max => Objective::Maximize,
                ObjectiveArg::Min => Objective::Minimize,
            },
            steps: *steps,
            attach: *attach,
            input: input.clone(),
            seed: require_seed(cli.seed, "grow")?,
        },
        Command::Heuristics { model, sweep, heuristics } => ExperimentConfig::Heuristics {
            model: model.model(sweep)?,
            sweep: sweep.clone(),
            trials,
            heuristics: if heuristics.is_empty() {
                Heuristic::ALL.to_vec()
            } else {
                heuristics
                    .iter()
                    .map(|h| match h {
                        HeuristicArg::MinDegreeSum => Heuristic::MinDegreeSum,
                        HeuristicArg::MaxGeodesic => Heuristic::MaxGeodesic,
                        HeuristicArg::MinSumMaxGeo => Heuristic::MinSumMaxGeo,
                        HeuristicArg::Random => Heuristic::Random,
                    })
                    .collect()
            },
            seed: require_seed(cli.seed, "heuristics")?,
        },
        Command::Predictability {
            model,
            sweep,
            pairing,
            ties,
        } => ExperimentConfig::Predictability {
            model: model.model(sweep)?,
            sweep: sweep.clone(),
            trials,
            pairings: match pairing {
                PairingArg::Laplacian => vec![Pairing::Laplacian],
                PairingArg::Normalized => vec![Pairing::Normalized],
                PairingArg::Both => vec![Pairing::Laplacian, Pairing::Normalized],
            },
            ties: match ties {
                TiesArg::Uniform => TieBreak::Uniform,
                TiesArg::ExactFavorable => TieBreak::ExactFavorable,
            },
            seed: require_seed(cli.seed, "predictability")?,
        },
        Command::Correlate {
            model,
            sweep,
            graphs,
            convention,
        } => ExperimentConfig::Correlate {
            model: model.model(sweep)?,
            sweep: sweep.clone(),
            graphs: *graphs,
            convention: match convention {
                ConventionArg::OrderedPairs => EdgeSumConvention::OrderedPairs,
                ConventionArg::UnorderedPairs => EdgeSumConvention::UnorderedPairs,
            },
            seed: require_seed(cli.seed, "correlate")?,
        },
        Command::EntropyVsEdges { model, sweep, graphs } => ExperimentConfig::EntropyVsEdges {
            model: model.model(sweep)?,
            sweep: sweep.clone(),
            graphs: *graphs,
            seed: require_seed(cli.seed, "entropy-vs-edges")?,
        },
        Command::Smallworld {
            n,
            k,
            ps,
            points,
            instances,
            references,
            swaps_per_edge,
        } => ExperimentConfig::Smallworld {
            n: *n,
            k: *k,
            ps: if ps.is_empty() { log_space(1e-3, 1.0, *points) } else { ps.clone() },
            instances: *instances,
            omega: OmegaConfigToml {
                references: *references,
                swaps_per_edge: *swaps_per_edge,
            },
            seed: require_seed(cli.seed, "smallworld")?,
        },
        Command::Ingest {
            prices,
            window,
            threshold,
            out_dir,
            analyze,
        } => ExperimentConfig::IngestAnalyze {
            prices: prices.clone(),
            window: *window,
            threshold: *threshold,
            out_dir: out_dir.clone(),
            analyze: *analyze,
        },
        Command::Run { config } => {
            let text = std::fs::read_to_string(config)?;
            ExperimentConfig::from_toml(&text)?
        }
    })
}

fn run(cli: &Cli) -> Result<(), Error> {
    let cfg = build_config(cli)?;
    let command = std::iter::once("vnentropy".to_string())
        .chain(std::env::args().skip(1))
        .collect::<Vec<_>>()
        .join(" ");
    let output = cfg.execute(&Provenance::new(command, cfg.seed()))?;
    match &cli.out {
        Some(path) => std::fs::write(path, output)?,
        None => print!("{output}"),
    }
    Ok(())
}

fn fail(code: &str, message: &str, exit: u8) -> ExitCode {
    eprintln!("{}", serde_json::json!({ "error": code, "message": message }));
    ExitCode::from(exit)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("Usage", e.to_string().trim(), 2),
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.code(), &e.to_string(), 1),
    }
}
