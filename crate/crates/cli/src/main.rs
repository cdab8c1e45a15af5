//! `edvw`: reduce, sparsify, cut and classify hypergraphs with edge-dependent
//! vertex weights.

mod verify;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use edvw_core::flownet::{hypergraph_min_st_cut, max_flow_min_cut};
use edvw_core::reduction::{enumerate_qs, Capacity};
use edvw_core::sparsify::{sparsify_continuous, sparsify_discrete, PiecewiseLinear};
use edvw_core::textpipe::experiment::{alpha_grid, beta_grid, results_csv, run_experiment, ExperimentConfig, Family, Param};
use edvw_core::textpipe::synthetic::{synthetic_corpus, synthetic_options};
use edvw_core::textpipe::{build_corpus, parse_tsv, CorpusOptions, TfMode};
use edvw_core::{reduce_hypergraph, Caps, Error, FlowNetwork, Hypergraph, ReductionMode, SplittingSpec};

#[derive(Parser)]
#[command(name = "edvw", version, about = "Hypergraph cuts with edge-dependent vertex weights")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for internal parallelism (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Sparse,
}

#[derive(clap::Args)]
struct ReductionArgs {
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Largest hyperedge the exact reduction enumerates.
    #[arg(long, default_value_t = 20)]
    max_edge_size: usize,
}

impl ReductionArgs {
    fn mode(&self) -> Result<ReductionMode, CliError> {
        match self.mode {
            Mode::Exact => Ok(ReductionMode::Exact),
            Mode::Sparse if self.epsilon >= 0.0 && self.epsilon.is_finite() => Ok(ReductionMode::Sparsified(self.epsilon)),
            Mode::Sparse => Err(CliError::Usage(format!("epsilon {} must be non-negative", self.epsilon))),
        }
    }

    fn caps(&self) -> Caps {
        Caps {
            max_edge_size: self.max_edge_size,
            ..Caps::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Continuous,
    Discrete,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Product,
    Minhalf,
    Thresh,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tune {
    None,
    Alpha,
    Beta,
}

#[derive(Clone, Copy, ValueEnum)]
enum TfArg {
    Raw,
    Relative,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a hypergraph to a flow network.
    Reduce {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        split: String,
        #[command(flatten)]
        reduction: ReductionArgs,
        /// Where to write the network; statistics go to stdout either way.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Piecewise-linear envelope of one hyperedge's splitting generator.
    Sparsify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        edge: String,
        #[arg(long)]
        split: String,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, value_enum, default_value = "discrete")]
        method: Method,
        #[arg(long, default_value_t = 20)]
        max_edge_size: usize,
    },
    /// Minimum s-t cut of a flow network file.
    Mincut {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        source: usize,
        #[arg(long)]
        sink: usize,
    },
    /// Minimum hypergraph cut separating two seed sets.
    Hypercut {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        split: String,
        /// Comma-separated vertex names.
        #[arg(long)]
        sources: String,
        #[arg(long)]
        sinks: String,
        #[command(flatten)]
        reduction: ReductionArgs,
    },
    /// Two-class semi-supervised document classification.
    Classify {
        /// TSV corpus `id<TAB>label<TAB>text`; labels 0, 1 or `?`.
        #[arg(long, conflicts_with = "synthetic", required_unless_present = "synthetic")]
        input: Option<PathBuf>,
        /// Generate a synthetic two-topic corpus of this many documents.
        #[arg(long)]
        synthetic: Option<usize>,
        #[arg(long, value_enum, default_value = "product")]
        family: FamilyArg,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.15)]
        beta: f64,
        #[arg(long, value_enum, default_value = "none")]
        tune: Tune,
        /// Upper end of the α grid `0:0.2:max`.
        #[arg(long, default_value_t = 3.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 0.3)]
        labeled_fraction: f64,
        #[arg(long, default_value_t = 5)]
        folds: usize,
        #[arg(long, value_enum, default_value = "raw")]
        tf: TfArg,
        #[arg(long)]
        min_df: Option<f64>,
        #[arg(long)]
        max_df: Option<f64>,
        #[arg(long)]
        top_k: Option<usize>,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Property checks on every hyperedge: submodularity, gadget
    /// equivalence, exact reduction and the sparsifier sandwich.
    Verify {
        /// Hypergraph file; a random one is generated from `--seed` if absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        split: String,
        #[arg(long, default_value_t = 10)]
        max_edge_size: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Edge count of the generated hypergraph.
        #[arg(long, default_value_t = 20)]
        random_edges: usize,
    },
}

#[derive(Debug)]
pub(crate) enum CliError {
    /// Bad input: unreadable file, malformed record or specification.
    Usage(String),
    Compute(String),
    /// A verification property failed; details are already on stderr.
    Verify,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e.root() {
            Error::Parse { .. } | Error::InvalidSpec(_) | Error::InvalidConfig(_) => CliError::Usage(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

/// Rounds to 12 significant digits and prints the shortest form.
pub(crate) fn num(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if rounded == 0.0 {
        "0".into()
    } else {
        format!("{rounded}")
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Compute(format!("{}: {e}", path.display())))
}

pub(crate) fn load_hypergraph(path: &Path) -> Result<Hypergraph, CliError> {
    Hypergraph::parse(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub(crate) fn parse_spec(s: &str) -> Result<SplittingSpec, CliError> {
    s.parse().map_err(|e: Error| CliError::Usage(e.to_string()))
}

fn parse_names(h: &Hypergraph, list: &str) -> Result<BTreeSet<usize>, CliError> {
    let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    h.resolve(&names).map_err(|e| CliError::Usage(e.to_string()))
}

fn run_reduce(input: &Path, split: &str, args: &ReductionArgs, output: Option<&Path>) -> Result<String, CliError> {
    let h = load_hypergraph(input)?;
    let spec = parse_spec(split)?;
    let mode = args.mode()?;
    let specs = vec![spec; h.edges().len()];
    let r = reduce_hypergraph(&h, &specs, mode, &args.caps())?;
    if let Some(path) = output {
        write(path, &r.network.to_text())?;
    }
    let mut out = String::new();
    let _ = writeln!(out, "nodes {}", r.network.node_count());
    let _ = writeln!(out, "arcs {}", r.network.arc_count());
    let _ = writeln!(out, "gadgets {}", r.gadget_count());
    for s in &r.strategies {
        let _ = write!(out, "edge {} {:?} {}", s.edge, s.kind, s.terms);
        if let Some(note) = &s.fallback {
            let _ = write!(out, " ({note})");
        }
        out.push('\n');
    }
    Ok(out)
}

fn envelope_csv(p: &PiecewiseLinear) -> String {
    let mut out = String::from("piece,slope,intercept,breakpoint\n");
    let starts: Vec<f64> = std::iter::once(0.0).chain(p.crossovers()).collect();
    for (i, (line, start)) in p.pieces().iter().zip(starts).enumerate() {
        let _ = writeln!(out, "{},{},{},{}", i + 1, num(line.slope), num(line.intercept), num(start));
    }
    out
}

fn run_sparsify(
    input: &Path,
    edge: &str,
    split: &str,
    eps: f64,
    method: Method,
    max_edge_size: usize,
) -> Result<String, CliError> {
    let h = load_hypergraph(input)?;
    let spec = parse_spec(split)?;
    let e = h
        .edge_by_id(edge)
        .ok_or_else(|| CliError::Usage(format!("no hyperedge `{edge}`")))?;
    let gen = spec.edge_generator(e)?;
    if !gen.is_symmetric() {
        return Err(CliError::Compute(format!("{edge}: generator is not symmetric")));
    }
    let p = match method {
        Method::Continuous => sparsify_continuous(
            |x| gen.value(x),
            |x| gen.right_slope(x).unwrap_or(f64::NAN),
            e.gamma_total() / 2.0,
            eps,
        )?,
        Method::Discrete => {
            let caps = Caps {
                max_edge_size,
                ..Caps::default()
            };
            let points: Vec<(f64, f64)> = enumerate_qs(e, &caps)?.iter().map(|&q| (q, gen.value(q))).collect();
            sparsify_discrete(&points, eps)?
        }
    };
    Ok(envelope_csv(&p))
}

fn run_mincut(input: &Path, source: usize, sink: usize) -> Result<String, CliError> {
    let g = FlowNetwork::parse(&read(input)?).map_err(|e| CliError::Usage(format!("{}: {e}", input.display())))?;
    let cut = max_flow_min_cut(&g, source, sink)?;
    let value = match cut.value {
        Capacity::Finite(v) => num(v),
        Capacity::Infinite => "inf".into(),
    };
    let nodes: Vec<String> = cut.source_nodes().iter().map(|v| v.to_string()).collect();
    Ok(format!("value {value}\nsource_side {}\n", nodes.join(" ")))
}

fn run_hypercut(input: &Path, split: &str, sources: &str, sinks: &str, args: &ReductionArgs) -> Result<String, CliError> {
    let h = load_hypergraph(input)?;
    let spec = parse_spec(split)?;
    let mode = args.mode()?;
    let (src, snk) = (parse_names(&h, sources)?, parse_names(&h, sinks)?);
    let specs = vec![spec; h.edges().len()];
    let cut = hypergraph_min_st_cut(&h, &specs, &src, &snk, mode, &args.caps())?;
    info!("flow network: {} nodes, {} arcs", cut.nodes, cut.arcs);
    let names: Vec<&str> = cut.set.iter().map(|&v| h.name(v)).collect();
    Ok(format!("value {}\nsource_side {}\n", num(cut.value), names.join(" ")))
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Reduce {
            input,
            split,
            reduction,
            output,
        } => run_reduce(&input, &split, &reduction, output.as_deref()),
        Command::Sparsify {
            input,
            edge,
            split,
            epsilon,
            method,
            max_edge_size,
        } => run_sparsify(&input, &edge, &split, epsilon, method, max_edge_size),
        Command::Mincut { input, source, sink } => run_mincut(&input, source, sink),
        Command::Hypercut {
            input,
            split,
            sources,
            sinks,
            reduction,
        } => run_hypercut(&input, &split, &sources, &sinks, &reduction),
        Command::Classify {
            input,
            synthetic,
            family,
            alpha,
            beta,
            tune,
            alpha_max,
            labeled_fraction,
            folds,
            tf,
            min_df,
            max_df,
            top_k,
            epsilon,
            output,
        } => {
            let (raw, mut opts) = match (&input, synthetic) {
                (Some(path), _) => (parse_tsv(&read(path)?)?, CorpusOptions::default()),
                (None, Some(n)) => (synthetic_corpus(n, cli.seed), synthetic_options()),
                (None, None) => unreachable!("clap requires one corpus source"),
            };
            opts.min_df = min_df.unwrap_or(opts.min_df);
            opts.max_df = max_df.unwrap_or(opts.max_df);
            opts.top_k = top_k.unwrap_or(opts.top_k);
            let corpus = build_corpus(&raw, &opts)?;
            info!("corpus: {} documents, {} words", corpus.documents.len(), corpus.vocabulary.len());
            let config = ExperimentConfig {
                family: match family {
                    FamilyArg::Product => Family::Product,
                    FamilyArg::Minhalf => Family::MinHalf,
                    FamilyArg::Thresh => Family::Thresholded,
                },
                alpha,
                beta,
                labeled_fraction,
                folds,
                seed: cli.seed,
                tf: match tf {
                    TfArg::Raw => TfMode::Raw,
                    TfArg::Relative => TfMode::Relative,
                },
                mode: ReductionMode::Sparsified(epsilon),
                ..ExperimentConfig::default()
            };
            let grid = match tune {
                Tune::None => None,
                Tune::Alpha => Some((Param::Alpha, alpha_grid(alpha_max))),
                Tune::Beta => Some((Param::Beta, beta_grid())),
            };
            let result = run_experiment(&corpus, &config, grid.as_ref().map(|(p, g)| (*p, g.as_slice())))?;
            info!(
                "chosen {} test accuracy {} ({} seeds, {} scored)",
                num(result.chosen),
                num(result.test_accuracy),
                result.seeds,
                result.evaluated
            );
            let csv = results_csv(&result);
            match output {
                Some(path) => {
                    write(&path, &csv)?;
                    Ok(format!("chosen {}\ntest_accuracy {}\n", num(result.chosen), num(result.test_accuracy)))
                }
                None => Ok(csv),
            }
        }
        Command::Verify {
            input,
            split,
            max_edge_size,
            epsilon,
            random_edges,
        } => {
            let h = match &input {
                Some(path) => load_hypergraph(path)?,
                None => verify::random_hypergraph(cli.seed, random_edges, max_edge_size)?,
            };
            let spec = parse_spec(&split)?;
            verify::run_verify(&h, &spec, max_edge_size, epsilon)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("EDVW_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Verify) => ExitCode::from(1),
    }
}

#[cfg(test)]
mod tests {
    use super::num;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(0.1 + 0.2), "0.3");
        assert_eq!(num(2.0 / 3.0), "0.666666666667");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(123456789012345.0), "123456789012000");
    }
}
