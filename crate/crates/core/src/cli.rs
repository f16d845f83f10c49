//! Command-line surface: estimate-tutte, estimate-z, estimate-lambda, exact,
//! generate, and diagnose subcommands, with reproducible seeding and
//! machine-readable JSON/CSV output.
//!
//! Exit codes: 0 success, 1 i/o or parse failure, 2 domain/precondition
//! violation.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exact::{
    chromatic_eval, lambda_exact, mu_exact, tutte_statesum, z_exact, EvalPoint, RCConfig,
};
use crate::generators::{gen_family, gen_plg, FamilySpec, PLGSpec};
use crate::graph::{components, DensityFamily, EdgeSubset, Graph, SuperdenseFn};
use crate::sampler::{estimate_lambda, estimate_tutte, estimate_z, SamplerConfig};
use crate::{diagnostics, sampler};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "rctutte",
    version,
    about = "Tutte polynomial and random-cluster estimation on dense graphs"
)]
pub struct Cli {
    /// Worker threads for sampling (never changes results).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate T_G(x, y) by percolation sampling (requires x > 1, y > 1).
    EstimateTutte {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Explicit sample count (otherwise derived from a variance bound).
        #[arg(long)]
        t: Option<u64>,
        /// Variance bound p(n) for t = ceil(2 p(n) / epsilon^2).
        #[arg(long)]
        variance_bound: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Subdensity parameter for the automatic variance bound.
        #[arg(long, default_value_t = 1.0)]
        subdense_c: f64,
        /// Odd median-of-means repetition count.
        #[arg(long, default_value_t = 1)]
        amplification: u32,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Estimate the random-cluster partition function Z = E(Q^kappa(G_p)).
    EstimateZ {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long = "Q", alias = "q")]
        q: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long)]
        t: Option<u64>,
        #[arg(long)]
        variance_bound: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1.0)]
        subdense_c: f64,
        #[arg(long, default_value_t = 1)]
        amplification: u32,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Estimate lambda(A) = p^|A| Z_{G/A} / Z_G for an edge subset A.
    EstimateLambda {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long = "Q", alias = "q")]
        q: f64,
        /// Comma-separated edge indices, e.g. "0,2,5".
        #[arg(long)]
        edges: String,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long)]
        t: Option<u64>,
        #[arg(long)]
        variance_bound: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1.0)]
        subdense_c: f64,
        #[arg(long, default_value_t = 1)]
        amplification: u32,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Exact small-graph oracles: Tutte at (x, y), Z/lambda/mu at (p, Q),
    /// chromatic polynomial at an integer.
    Exact {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        y: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long = "Q", alias = "q")]
        q: Option<f64>,
        /// With (p, Q): also compute lambda(A) and mu(A) for these edges.
        #[arg(long)]
        edges: Option<String>,
        /// Number of colors for the chromatic specialization.
        #[arg(long)]
        chromatic: Option<i64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Generate a graph family instance; writes the graph text format plus a
    /// JSON metadata sidecar.
    Generate {
        /// plg | eps-dense | subdense | superdense
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        /// Superdense deficiency f(n): a constant, "n^gamma" or "n/log n".
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output path; the sidecar lands at OUT.meta.json. Without it the
        /// graph goes to stdout and the metadata to stderr.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Drop loops and merge parallel edges (leaves the exact model).
        #[arg(long, default_value_t = false)]
        simplify: bool,
    },
    /// Diagnostics for the variance-bounding constructions.
    Diagnose {
        #[command(subcommand)]
        what: DiagnoseCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum DiagnoseCommand {
    /// Build the auxiliary graph G* and compare its component count against
    /// the subdense bound s.
    Gstar {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        d0: Option<f64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Monte Carlo estimate of E(Q^(2 kappa)) against the 2 Q^(2s) bound.
    SecondMoment {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long = "Q", alias = "q")]
        q: f64,
        #[arg(long, default_value_t = 1000)]
        t: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Sweep E(Q^kappa) on f(n)-superdense graphs over an n grid; CSV rows
    /// (n, estimate, rel_error).
    SuperdenseSweep {
        /// Deficiency f(n): a constant, "n^gamma" or "n/log n".
        #[arg(long)]
        f: String,
        #[arg(long)]
        p: f64,
        #[arg(long = "Q", alias = "q")]
        q: f64,
        /// Comma-separated sizes, e.g. "50,100,200".
        #[arg(long)]
        n_grid: String,
        #[arg(long, default_value_t = 100_000)]
        t: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Closed-form Z of the perfect-matching graph and the beta -> infinity
    /// reference.
    MatchingZ {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long = "Q", alias = "q")]
        q: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
}

/// Parses argv, dispatches, prints the report to stdout and warnings to
/// stderr; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.threads {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::domain(format!("cannot build thread pool: {e}")))?;
            pool.install(|| dispatch(cli.command))
        }
        None => dispatch(cli.command),
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    Graph::from_text(&text)
}

fn effective_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

fn sampler_config(
    epsilon: f64,
    t: Option<u64>,
    variance_bound: Option<f64>,
    seed: u64,
    subdense_c: f64,
    amplification: u32,
) -> Result<SamplerConfig> {
    let mut cfg = SamplerConfig::new(epsilon, seed)?;
    cfg.t_override = t;
    cfg.variance_bound = variance_bound;
    cfg.subdense_c = subdense_c;
    cfg.fail_prob_amplification = amplification;
    Ok(cfg)
}

fn parse_edge_list(spec: &str, m: usize) -> Result<EdgeSubset> {
    let mut indices = Vec::new();
    for tok in spec.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let idx: usize = tok
            .parse()
            .map_err(|_| Error::domain(format!("invalid edge index {tok:?}")))?;
        indices.push(idx);
    }
    EdgeSubset::from_indices(m, &indices)
}

fn require_json(format: OutputFormat, what: &str) -> Result<()> {
    if format == OutputFormat::Csv {
        return Err(Error::domain(format!(
            "csv output is only available for sweep-style diagnostics, not {what}"
        )));
    }
    Ok(())
}

fn emit_run(run: &sampler::EstimatorRun) {
    for w in &run.warnings {
        eprintln!("warning: {w}");
    }
    println!("{}", run.to_json());
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::EstimateTutte {
            graph,
            x,
            y,
            epsilon,
            t,
            variance_bound,
            seed,
            subdense_c,
            amplification,
            format,
        } => {
            require_json(format, "estimate-tutte")?;
            let g = read_graph(&graph)?;
            let seed = effective_seed(seed);
            let cfg = sampler_config(epsilon, t, variance_bound, seed, subdense_c, amplification)?;
            let run = estimate_tutte(&g, &EvalPoint::new(x, y), &cfg)?;
            emit_run(&run);
            Ok(())
        }
        Command::EstimateZ {
            graph,
            p,
            q,
            epsilon,
            t,
            variance_bound,
            seed,
            subdense_c,
            amplification,
            format,
        } => {
            require_json(format, "estimate-z")?;
            let g = read_graph(&graph)?;
            let seed = effective_seed(seed);
            let cfg = sampler_config(epsilon, t, variance_bound, seed, subdense_c, amplification)?;
            let run = estimate_z(&g, &RCConfig::new(p, q)?, &cfg)?;
            emit_run(&run);
            Ok(())
        }
        Command::EstimateLambda {
            graph,
            p,
            q,
            edges,
            epsilon,
            t,
            variance_bound,
            seed,
            subdense_c,
            amplification,
            format,
        } => {
            require_json(format, "estimate-lambda")?;
            let g = read_graph(&graph)?;
            let subset = parse_edge_list(&edges, g.edge_count())?;
            let seed = effective_seed(seed);
            let cfg = sampler_config(epsilon, t, variance_bound, seed, subdense_c, amplification)?;
            let est = estimate_lambda(&g, &RCConfig::new(p, q)?, &subset, &cfg)?;
            for w in est.numerator.warnings.iter().chain(&est.denominator.warnings) {
                eprintln!("warning: {w}");
            }
            println!("{}", est.to_json());
            Ok(())
        }
        Command::Exact {
            graph,
            x,
            y,
            p,
            q,
            edges,
            chromatic,
            format,
        } => {
            require_json(format, "exact")?;
            let g = read_graph(&graph)?;
            let mut report = Map::new();
            report.insert("n".into(), json!(g.vertex_count()));
            report.insert("m".into(), json!(g.edge_count()));
            let mut produced = false;
            match (x, y) {
                (Some(x), Some(y)) => {
                    report.insert("x".into(), json!(x));
                    report.insert("y".into(), json!(y));
                    report.insert("tutte".into(), json!(tutte_statesum(&g, &x, &y)?));
                    produced = true;
                }
                (None, None) => {}
                _ => return Err(Error::domain("provide both --x and --y or neither")),
            }
            match (p, q) {
                (Some(p), Some(q)) => {
                    let rc = RCConfig::new(p, q)?;
                    report.insert("p".into(), json!(p));
                    report.insert("Q".into(), json!(q));
                    report.insert("z".into(), json!(z_exact(&g, &p, &q)?));
                    if let Some(spec) = &edges {
                        let subset = parse_edge_list(spec, g.edge_count())?;
                        report.insert(
                            "lambda".into(),
                            json!(lambda_exact(&g, &rc.p, &rc.q_weight, &subset)?),
                        );
                        report.insert(
                            "mu".into(),
                            json!(mu_exact(&g, &rc.p, &rc.q_weight, &subset)?),
                        );
                        report.insert("edges".into(), json!(subset.iter().collect::<Vec<_>>()));
                    }
                    produced = true;
                }
                (None, None) => {
                    if edges.is_some() {
                        return Err(Error::domain("--edges needs --p and --Q"));
                    }
                }
                _ => return Err(Error::domain("provide both --p and --Q or neither")),
            }
            if let Some(colors) = chromatic {
                report.insert(
                    "chromatic".into(),
                    json!(chromatic_eval(&g, colors)?.to_string()),
                );
                produced = true;
            }
            if !produced {
                return Err(Error::domain(
                    "nothing to compute: provide (--x, --y), (--p, --Q) and/or --chromatic",
                ));
            }
            println!("{}", Value::Object(report));
            Ok(())
        }
        Command::Generate {
            family,
            n,
            alpha,
            beta,
            eps,
            c,
            f,
            seed,
            out,
            simplify,
        } => {
            let seed = effective_seed(seed);
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut meta = Map::new();
            meta.insert("family".into(), json!(family));
            meta.insert("seed".into(), json!(seed));
            let mut graph = match family.as_str() {
                "plg" => {
                    if n.is_some() {
                        return Err(Error::domain(
                            "plg derives n from alpha/beta; drop --n",
                        ));
                    }
                    let alpha = alpha.ok_or_else(|| Error::domain("plg needs --alpha"))?;
                    let beta = beta.ok_or_else(|| Error::domain("plg needs --beta"))?;
                    let spec = PLGSpec::new(alpha, beta)?;
                    let out = gen_plg(&spec, &mut rng)?;
                    meta.insert("params".into(), json!({"alpha": alpha, "beta": beta}));
                    meta.insert("max_degree".into(), json!(spec.max_degree()));
                    if let Some(v) = out.dropped_copy {
                        meta.insert("dropped_copy".into(), json!(v));
                    }
                    out.graph
                }
                "eps-dense" | "subdense" | "superdense" => {
                    let n = n.ok_or_else(|| Error::domain(format!("{family} needs --n")))?;
                    let fam = match family.as_str() {
                        "eps-dense" => DensityFamily::EpsDense(
                            eps.ok_or_else(|| Error::domain("eps-dense needs --eps"))?,
                        ),
                        "subdense" => DensityFamily::Subdense(
                            c.ok_or_else(|| Error::domain("subdense needs --c"))?,
                        ),
                        _ => DensityFamily::Superdense(SuperdenseFn::parse(
                            &f.ok_or_else(|| Error::domain("superdense needs --f"))?,
                        )?),
                    };
                    meta.insert("params".into(), json!(format!("{fam}")));
                    gen_family(&FamilySpec { family: fam, n }, &mut rng)?
                }
                other => {
                    return Err(Error::domain(format!(
                        "unknown family {other:?}; expected plg, eps-dense, subdense or superdense"
                    )))
                }
            };
            if simplify {
                graph = graph.simplified();
                meta.insert("simplified".into(), json!(true));
            }
            meta.insert("n".into(), json!(graph.vertex_count()));
            meta.insert("m".into(), json!(graph.edge_count()));
            meta.insert("min_degree".into(), json!(graph.min_degree()));
            let full = EdgeSubset::full(graph.edge_count());
            meta.insert(
                "connected".into(),
                json!(components(&graph, &full).kappa <= 1),
            );
            let meta = Value::Object(meta);
            match out {
                Some(path) => {
                    std::fs::write(&path, graph.to_text())?;
                    let sidecar = PathBuf::from(format!("{}.meta.json", path.display()));
                    std::fs::write(&sidecar, format!("{meta}\n"))?;
                }
                None => {
                    print!("{}", graph.to_text());
                    eprintln!("{meta}");
                }
            }
            Ok(())
        }
        Command::Diagnose { what } => diagnose(what),
    }
}

fn diagnose(cmd: DiagnoseCommand) -> Result<()> {
    match cmd {
        DiagnoseCommand::Gstar {
            graph,
            c,
            d0,
            format,
        } => {
            require_json(format, "diagnose gstar")?;
            let g = read_graph(&graph)?;
            let (gstar, report) = diagnostics::build_gstar(&g, c, d0)?;
            let mut value = serde_json::to_value(&report).expect("report serializes");
            value["gstar_edges"] = json!(gstar.edge_count());
            println!("{value}");
            Ok(())
        }
        DiagnoseCommand::SecondMoment {
            graph,
            p,
            q,
            t,
            seed,
            c,
            format,
        } => {
            require_json(format, "diagnose second-moment")?;
            let g = read_graph(&graph)?;
            let seed = effective_seed(seed);
            if q >= 1.0 {
                let report = diagnostics::second_moment_report(&g, p, q, t, seed, c)?;
                println!("{}", serde_json::to_value(&report).expect("report serializes"));
            } else {
                let run = diagnostics::second_moment(&g, p, q, t, seed)?;
                emit_run(&run);
            }
            Ok(())
        }
        DiagnoseCommand::SuperdenseSweep {
            f,
            p,
            q,
            n_grid,
            t,
            seed,
            format,
        } => {
            let f = SuperdenseFn::parse(&f)?;
            let grid: Vec<usize> = n_grid
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::domain(format!("invalid grid size {s:?}")))
                })
                .collect::<Result<_>>()?;
            let seed = effective_seed(seed);
            let report = diagnostics::superdense_convergence(&f, p, q, &grid, t, seed)?;
            for note in &report.notes {
                eprintln!("note: {note}");
            }
            match format {
                OutputFormat::Csv => print!("{}", report.to_csv()),
                OutputFormat::Json => {
                    println!("{}", serde_json::to_value(&report).expect("report serializes"))
                }
            }
            Ok(())
        }
        DiagnoseCommand::MatchingZ { n, p, q, format } => {
            require_json(format, "diagnose matching-z")?;
            let report = diagnostics::matching_model_z(n, p, q)?;
            println!("{}", serde_json::to_value(&report).expect("report serializes"));
            Ok(())
        }
    }
}
