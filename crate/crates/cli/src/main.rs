//! secfan: exact regular subdivisions of hypersimplices, secondary cones
//! and their rays, flip-graph enumeration up to symmetry, tight spans,
//! metric cones and fans, and split decomposition of finite metrics.
//!
//! Exit codes: 0 success, 2 invalid input, 3 resource limit, 4 internal
//! invariant violation.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use secfan_core::error::Error;
use secfan_core::hypersimplex::{self, HypersimplexSpec, PointConfiguration};
use secfan_core::jsonio;
use secfan_core::metrics::{self, DissimilarityMap};
use secfan_core::secfan::{self, EnumerateOptions, EnumerationOutcome, TriangulationCatalog};
use secfan_core::subdivide::{self, HeightFunction};
use secfan_core::symmetry::{GroupSpec, LabelGroup};

#[derive(Parser)]
#[command(name = "secfan", version, about)]
struct Cli {
    /// Worker threads (default: SECFAN_THREADS or all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Skip the structural self-checks on computed subdivisions.
    #[arg(long, global = true)]
    unchecked: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the vertices of a hypersimplex as a configuration JSON.
    Gen {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regular subdivision of a lifted hypersimplex, with predicate report.
    Subdivide {
        #[command(flatten)]
        lifting: LiftingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the dual graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Tight span of a lifted hypersimplex (DOT plus face counts).
    Tightspan {
        #[command(flatten)]
        lifting: LiftingArgs,
        /// Highest face dimension to compute.
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Secondary cone of the induced subdivision: dimensions and rays.
    Seccone {
        #[command(flatten)]
        lifting: LiftingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate all regular triangulations up to symmetry, then collect
    /// the coarsest-subdivision orbits.
    Enumerate {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// Group: "auto" (sym_x2 when n = 2k, else sym), "sym", "sym_x2",
        /// "trivial", or generator cycles.
        #[arg(long, default_value = "auto")]
        group: String,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 512)]
        checkpoint_interval: usize,
        /// Stop after expanding this many nodes (resume from checkpoint).
        #[arg(long)]
        max_nodes: Option<usize>,
        /// Skip the coarsest-orbit collection.
        #[arg(long)]
        triangulations_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coarsest-subdivision orbits from a completed triangulation catalog.
    Coarsest {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "auto")]
        group: String,
        /// Catalog file produced by `enumerate`; recomputed when absent.
        #[arg(long)]
        from: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split decomposition of a metric on the second hypersimplex.
    Decompose {
        /// Distance matrix file.
        #[arg(long)]
        metric: PathBuf,
        /// Require the input to satisfy the triangle inequalities.
        #[arg(long)]
        require_metric: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Tight span of the metric in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Metric cone rays and metric fan ray orbits.
    MetricFan {
        #[arg(long)]
        n: usize,
        /// Allow n > 6 (expensive).
        #[arg(long)]
        allow_large: bool,
        /// Skip the secondary-fan side (metric cone only).
        #[arg(long)]
        cone_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coherency index of one lifting with respect to another.
    Coherency {
        #[arg(long)]
        n: usize,
        /// Base metric file (entered as heights through negation).
        #[arg(long)]
        metric: PathBuf,
        /// Reference metric file.
        #[arg(long)]
        wrt: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exactly one lifting source for an analysis command.
#[derive(Args)]
struct LiftingArgs {
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Height 1 on the first n-k vertices.
    #[arg(long, conflicts_with_all = ["kappa", "split", "thrackle", "metric", "heights"])]
    lambda: bool,
    /// Height 1 on the leading-one vertices except the last.
    #[arg(long, conflicts_with_all = ["split", "thrackle", "metric", "heights"])]
    kappa: bool,
    /// Split lifting from a comma-separated part, e.g. "1,2" (1-based).
    #[arg(long, conflicts_with_all = ["thrackle", "metric", "heights"])]
    split: Option<String>,
    /// The thrackle metric lifting.
    #[arg(long, conflicts_with_all = ["metric", "heights"])]
    thrackle: bool,
    /// Distance matrix file, entered as heights through negation.
    #[arg(long, conflicts_with = "heights")]
    metric: Option<PathBuf>,
    /// JSON array of heights (integers or "p/q" strings).
    #[arg(long)]
    heights: Option<PathBuf>,
    /// Require metric input to satisfy the triangle inequalities.
    #[arg(long)]
    require_metric: bool,
}

struct Lifting {
    config: PointConfiguration,
    heights: HeightFunction,
    source: String,
    /// Set when the heights came from a metric file.
    metric: Option<DissimilarityMap>,
}

impl LiftingArgs {
    fn resolve(&self) -> Result<Lifting, Error> {
        if let Some(path) = &self.metric {
            let text = std::fs::read_to_string(path)?;
            let d = metrics::parse_decimal_metric(&text)?;
            if self.require_metric && !d.is_pseudometric() {
                return Err(Error::InvalidParameter(
                    "input violates the triangle inequality".into(),
                ));
            }
            if let Some(n) = self.n {
                if n != d.n() {
                    return Err(Error::DimensionMismatch(format!(
                        "matrix has {} points, --n says {n}",
                        d.n()
                    )));
                }
            }
            if self.k.is_some() && self.k != Some(2) {
                return Err(Error::InvalidParameter(
                    "metric liftings live on k = 2".into(),
                ));
            }
            let spec = HypersimplexSpec::new(2, d.n())?;
            return Ok(Lifting {
                config: hypersimplex::vertices(spec),
                heights: d.lifting(),
                source: format!("metric {}", path.display()),
                metric: Some(d),
            });
        }
        let (Some(k), Some(n)) = (self.k, self.n) else {
            return Err(Error::InvalidParameter(
                "--k and --n are required unless --metric is given".into(),
            ));
        };
        let spec = HypersimplexSpec::new(k, n)?;
        let config = hypersimplex::vertices(spec);
        if self.lambda {
            return Ok(Lifting {
                heights: hypersimplex::lambda_lift(spec)?,
                config,
                source: "lambda".into(),
                metric: None,
            });
        }
        if self.kappa {
            return Ok(Lifting {
                heights: hypersimplex::kappa_lift(spec)?,
                config,
                source: "kappa".into(),
                metric: None,
            });
        }
        if let Some(part) = &self.split {
            if k != 2 {
                return Err(Error::InvalidParameter("split liftings live on k = 2".into()));
            }
            let part: Vec<usize> = part
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad split element {t:?}")))
                })
                .collect::<Result<_, _>>()?;
            if part.iter().any(|&i| i == 0 || i > n) {
                return Err(Error::InvalidParameter(format!(
                    "split elements must lie in 1..={n}"
                )));
            }
            let zero_based: Vec<usize> = part.iter().map(|&i| i - 1).collect();
            let d = hypersimplex::split_pseudometric(n, &zero_based)?;
            return Ok(Lifting {
                heights: d.lifting(),
                config,
                source: format!("split {part:?}"),
                metric: Some(d),
            });
        }
        if self.thrackle {
            if k != 2 {
                return Err(Error::InvalidParameter(
                    "the thrackle lifting lives on k = 2".into(),
                ));
            }
            let d = hypersimplex::thrackle(n)?;
            return Ok(Lifting {
                heights: d.lifting(),
                config,
                source: "thrackle".into(),
                metric: Some(d),
            });
        }
        if let Some(path) = &self.heights {
            let values = jsonio::parse_heights_json(&std::fs::read_to_string(path)?)?;
            if values.len() != config.n_points() {
                return Err(Error::DimensionMismatch(format!(
                    "{} heights for {} points",
                    values.len(),
                    config.n_points()
                )));
            }
            return Ok(Lifting {
                heights: HeightFunction::from_values(values),
                config,
                source: format!("heights {}", path.display()),
                metric: None,
            });
        }
        Err(Error::InvalidParameter(
            "choose a lifting: --lambda, --kappa, --split, --thrackle, --metric or --heights"
                .into(),
        ))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("SECFAN_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let checked = !cli.unchecked;
    match pool.install(|| run(cli.command, checked)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::ResourceLimit(_) => 3,
                Error::Invariant(_) => 4,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn emit(out: &Option<PathBuf>, value: &serde_json::Value) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn write_text(path: &PathBuf, text: &str) -> Result<(), Error> {
    Ok(std::fs::write(path, text)?)
}

fn run(command: Command, checked: bool) -> Result<(), Error> {
    match command {
        Command::Gen { k, n, out } => {
            let config = hypersimplex::vertices(HypersimplexSpec::new(k, n)?);
            let j = jsonio::ConfigJson::from_config(&config)?;
            emit(&out, &serde_json::to_value(&j)?)
        }
        Command::Subdivide { lifting, out, dot } => {
            let l = lifting.resolve()?;
            let report = report::subdivision_report(&l, checked)?;
            if let Some(path) = dot {
                let s = subdivide::regular_subdivision(&l.config, &l.heights)?;
                let g = subdivide::dual_graph(&l.config, &s)?;
                write_text(&path, &report::dual_graph_dot(&s, &g))?;
            }
            emit(&out, &report)
        }
        Command::Tightspan {
            lifting,
            max_dim,
            dot,
            out,
        } => {
            let l = lifting.resolve()?;
            let ts = subdivide::tight_span(&l.config, &l.heights, max_dim)?;
            if let Some(path) = dot {
                write_text(&path, &ts.to_dot())?;
            }
            emit(&out, &report::tight_span_report(&l, &ts)?)
        }
        Command::Seccone { lifting, out } => {
            let l = lifting.resolve()?;
            emit(&out, &report::seccone_report(&l)?)
        }
        Command::Enumerate {
            k,
            n,
            group,
            checkpoint,
            checkpoint_interval,
            max_nodes,
            triangulations_only,
            out,
        } => {
            let spec = HypersimplexSpec::new(k, n)?;
            let config = hypersimplex::vertices(spec);
            let lg = label_group(spec, &group)?;
            let opts = EnumerateOptions {
                checkpoint_path: checkpoint,
                checkpoint_interval,
                max_nodes,
            };
            match secfan::enumerate_regular_triangulations(&config, &lg, &opts)? {
                EnumerationOutcome::Paused { nodes_processed } => emit(
                    &out,
                    &serde_json::json!({
                        "status": "paused",
                        "nodes_processed": nodes_processed,
                    }),
                ),
                EnumerationOutcome::Complete(catalog) => {
                    let coarsest = if triangulations_only {
                        None
                    } else {
                        Some(secfan::collect_coarsest_orbits(&config, &catalog, &lg)?)
                    };
                    emit(&out, &report::enumeration_report(&catalog, coarsest.as_ref())?)
                }
            }
        }
        Command::Coarsest {
            k,
            n,
            group,
            from,
            out,
        } => {
            let spec = HypersimplexSpec::new(k, n)?;
            let config = hypersimplex::vertices(spec);
            let lg = label_group(spec, &group)?;
            let catalog: TriangulationCatalog = match from {
                Some(path) => {
                    let parsed: serde_json::Value =
                        serde_json::from_str(&std::fs::read_to_string(path)?)?;
                    serde_json::from_value(parsed["triangulations"].clone())?
                }
                None => match secfan::enumerate_regular_triangulations(
                    &config,
                    &lg,
                    &EnumerateOptions::default(),
                )? {
                    EnumerationOutcome::Complete(c) => c,
                    EnumerationOutcome::Paused { .. } => unreachable!("no node budget"),
                },
            };
            let coarsest = secfan::collect_coarsest_orbits(&config, &catalog, &lg)?;
            emit(&out, &report::coarsest_report(&coarsest)?)
        }
        Command::Decompose {
            metric,
            require_metric,
            out,
            dot,
        } => {
            let text = std::fs::read_to_string(&metric)?;
            let d = metrics::parse_decimal_metric(&text)?;
            if require_metric && !d.is_pseudometric() {
                return Err(Error::InvalidParameter(
                    "input violates the triangle inequality".into(),
                ));
            }
            let spec = HypersimplexSpec::new(2, d.n())?;
            let config = hypersimplex::vertices(spec);
            let dec = metrics::split_decompose(&config, &d.lifting())?;
            if let Some(path) = dot {
                let ts = subdivide::tight_span(&config, &d.lifting(), 3)?;
                write_text(&path, &ts.to_dot())?;
            }
            emit(&out, &report::decomposition_report(&d, &dec)?)
        }
        Command::MetricFan {
            n,
            allow_large,
            cone_only,
            out,
        } => {
            let (vcone, mc_orbits) = metrics::metric_cone_rays(n, allow_large)?;
            let mf = if cone_only || n < 4 {
                None
            } else {
                let spec = HypersimplexSpec::new(2, n)?;
                let config = hypersimplex::vertices(spec);
                let lg = LabelGroup::for_hypersimplex(spec, &GroupSpec::Sym)?;
                let catalog = match secfan::enumerate_regular_triangulations(
                    &config,
                    &lg,
                    &EnumerateOptions::default(),
                )? {
                    EnumerationOutcome::Complete(c) => c,
                    EnumerationOutcome::Paused { .. } => unreachable!("no node budget"),
                };
                let coarsest = secfan::collect_coarsest_orbits(&config, &catalog, &lg)?;
                Some(metrics::metric_fan_rays(n, &coarsest)?)
            };
            emit(
                &out,
                &report::metric_fan_report(n, &vcone, &mc_orbits, mf.as_deref())?,
            )
        }
        Command::Coherency { n, metric, wrt, out } => {
            let spec = HypersimplexSpec::new(2, n)?;
            let config = hypersimplex::vertices(spec);
            let read = |path: &PathBuf| -> Result<DissimilarityMap, Error> {
                metrics::parse_decimal_metric(&std::fs::read_to_string(path)?)
            };
            let base = read(&metric)?;
            let with = read(&wrt)?;
            if base.n() != n || with.n() != n {
                return Err(Error::DimensionMismatch(
                    "matrix sizes disagree with --n".into(),
                ));
            }
            let alpha =
                metrics::coherency_index(&config, &base.lifting(), &with.lifting())?;
            emit(
                &out,
                &serde_json::json!({
                    "n": n,
                    "alpha": jsonio::rational_to_string(&alpha),
                    "decimal": metrics::decimal_string(&alpha, 8),
                }),
            )
        }
    }
}

fn label_group(spec: HypersimplexSpec, text: &str) -> Result<LabelGroup, Error> {
    let gs = if text == "auto" {
        if spec.n == 2 * spec.k {
            GroupSpec::SymX2
        } else {
            GroupSpec::Sym
        }
    } else {
        GroupSpec::parse(spec.n, text)?
    };
    if matches!(gs, GroupSpec::Trivial) {
        return Ok(LabelGroup::trivial(spec.num_vertices()));
    }
    LabelGroup::for_hypersimplex(spec, &gs)
}
