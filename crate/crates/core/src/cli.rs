//! Command-line front end shared by the `coverfilt` binary and the tests.
//!
//! Exit codes: 0 success, 2 input error, 3 nerve budget exceeded,
//! 4 disconnected or empty result.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::cover::{fraction_to_f64, Cover, Interner};
use crate::cover_io::{format_fraction, read_cover, write_cover};
use crate::error::{Error, Result};
use crate::geometry::{compare_filtrations, MonteCarloConfig};
use crate::graph::{read_graph, WeightedGraph};
use crate::ingest::{
    cover_graph, export_mapper_cover, resolve_label, synthetic_ratings, LabeledPath, QueryMode, RatingsTable,
    SyntheticConfig, ToolConfig,
};
use crate::metrics::{certify_interleaving, cover_bottleneck};
use crate::nerve::{build_clique_rank_filtration, build_steinhaus_nerve, read_complex, write_complex, FilteredComplex};
use crate::paths::{fewest_hops_path, maximally_stable_path, pareto_frontier, EdgeBound, ParetoEntry};
use crate::persistence::{diagram_bottleneck, of_dim, persistence_diagram, write_diagram_csv, PersistencePair};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_NO_RESULT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "coverfilt", version, about = "Steinhaus cover filtrations and stable paths")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 2)]
    pub max_dim: usize,
    #[arg(long, global = true, default_value_t = 10)]
    pub min_ratings: usize,
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub budget: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// MovieLens directory holding `ratings.csv` and `movies.csv`.
    #[arg(long, global = true)]
    pub movielens: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// Where a cover comes from.
#[derive(Debug, Args, Default)]
pub struct CoverSource {
    /// Cover file: `label<TAB>member[:weight],...`
    #[arg(long)]
    pub cover: Option<PathBuf>,
    /// Ratings CSV, one element per item.
    #[arg(long)]
    pub ratings: Option<PathBuf>,
    /// Item titles CSV (`movieId,title,...`) for `--ratings`.
    #[arg(long)]
    pub titles: Option<PathBuf>,
    /// Generate the planted-bridge ratings dataset from `--seed`.
    #[arg(long)]
    pub synthetic: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Turn ratings into a cover file.
    Ingest {
        #[command(flatten)]
        source: CoverSource,
        /// Write the cover here and print a summary instead.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Steinhaus nerve of a cover, or clique-rank filtration of a graph.
    BuildNerve {
        #[command(flatten)]
        source: CoverSource,
        #[arg(long, conflicts_with_all = ["cover", "ratings", "synthetic"])]
        graph: Option<PathBuf>,
    },
    /// Stable paths between two labels.
    Paths(PathArgs),
    /// Pareto frontier of hops against instability (same as `paths --mode frontier`).
    Pareto(PathArgs),
    /// H0/H1 persistence diagram.
    Persistence {
        #[command(flatten)]
        source: CoverSource,
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Complex file in the `dim<TAB>vertices<TAB>birth` format.
        #[arg(long)]
        complex: Option<PathBuf>,
    },
    /// Bottleneck distance between two covers of equal size.
    CoverDistance {
        first: PathBuf,
        second: PathBuf,
        /// Also compare the two nerves simplex by simplex.
        #[arg(long)]
        certify: bool,
    },
    /// Rips against sampled Steinhaus persistence on landmark points.
    CechCompare {
        /// CSV of landmark coordinates, one point per row.
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        /// Directory for `rips.csv`, `steinhaus.csv` and `rescaled_rips.csv`.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Steinhaus nerve of an externally produced Mapper cover.
    MapperNerve {
        #[arg(long)]
        cover: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct PathArgs {
    #[command(flatten)]
    pub source: CoverSource,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub from: String,
    #[arg(long)]
    pub to: String,
    #[arg(long, default_value = "frontier")]
    pub mode: QueryMode,
    /// Also write `hops,instability` rows here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command, and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return e.exit_code();
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NerveBudgetExceeded { .. } => EXIT_BUDGET,
        Error::NoPath(..) => EXIT_NO_RESULT,
        _ => EXIT_INPUT,
    }
}

fn config(g: &GlobalArgs) -> ToolConfig {
    ToolConfig {
        min_ratings: g.min_ratings,
        max_dim: g.max_dim,
        budget: g.budget,
        seed: g.seed,
        output: None,
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

struct Loaded {
    cover: Cover,
    table: Option<RatingsTable>,
}

fn load_cover(source: &CoverSource, g: &GlobalArgs) -> Result<Option<Loaded>> {
    if let Some(path) = &source.cover {
        let mut interner = Interner::new();
        let cover = read_cover(open(path)?, &mut interner)?;
        return Ok(Some(Loaded { cover, table: None }));
    }
    let table = if let Some(path) = &source.ratings {
        let mut table = RatingsTable::read(open(path)?)?;
        if let Some(titles) = &source.titles {
            table.attach_titles(open(titles)?)?;
        }
        table
    } else if source.synthetic {
        let data = synthetic_ratings(&SyntheticConfig {
            seed: g.seed,
            ..Default::default()
        });
        RatingsTable::read(data.csv.as_bytes())?
    } else if let Some(dir) = &g.movielens {
        let mut table = RatingsTable::read(open(&dir.join("ratings.csv"))?)?;
        let movies = dir.join("movies.csv");
        if movies.exists() {
            table.attach_titles(open(&movies)?)?;
        }
        table
    } else {
        return Ok(None);
    };
    let cover = table.to_cover(g.min_ratings)?;
    Ok(Some(Loaded {
        cover,
        table: Some(table),
    }))
}

fn require_cover(source: &CoverSource, g: &GlobalArgs) -> Result<Loaded> {
    load_cover(source, g)?
        .ok_or_else(|| Error::Usage("no input: give --cover, --ratings, --synthetic or --movielens".into()))
}

fn emit_json<T: Serialize + ?Sized>(out: &mut dyn Write, value: &T, pretty: bool) -> Result<()> {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("serializable");
    writeln!(out, "{text}")?;
    Ok(())
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    let cfg = config(g);
    match &cli.command {
        Command::Ingest { source, out: path } => {
            let loaded = require_cover(source, g)?;
            match path {
                Some(path) => {
                    write_cover(&loaded.cover, create(path)?)?;
                    let mut summary = json!({
                        "elements": loaded.cover.len(),
                        "universe": loaded.cover.universe().len(),
                        "min_ratings": g.min_ratings,
                    });
                    if let Some(t) = &loaded.table {
                        summary["rows"] = json!(t.rows());
                        summary["items_read"] = json!(t.item_count());
                        summary["dropped"] = json!(t.item_count() - loaded.cover.len());
                    }
                    emit_json(out, &summary, g.format == Format::Pretty)?;
                }
                None => write_cover(&loaded.cover, &mut *out)?,
            }
            Ok(EXIT_OK)
        }
        Command::BuildNerve { source, graph } => {
            let complex = match graph {
                Some(path) => build_clique_rank_filtration(&read_graph(open(path)?)?, g.max_dim),
                None => build_steinhaus_nerve(&require_cover(source, g)?.cover, &cfg.nerve_options())?,
            };
            emit_complex(out, &complex, g.format)?;
            Ok(EXIT_OK)
        }
        Command::MapperNerve { cover } => {
            let complex = export_mapper_cover(open(cover)?, &cfg.nerve_options())?;
            emit_complex(out, &complex, g.format)?;
            Ok(EXIT_OK)
        }
        Command::Paths(args) => run_paths(args, args.mode, g, out),
        Command::Pareto(args) => run_paths(args, QueryMode::Frontier, g, out),
        Command::Persistence { source, graph, complex } => {
            let filtration = match (complex, graph) {
                (Some(path), _) => read_complex(open(path)?)?,
                (None, Some(path)) => build_clique_rank_filtration(&read_graph(open(path)?)?, g.max_dim),
                (None, None) => build_steinhaus_nerve(&require_cover(source, g)?.cover, &cfg.nerve_options())?,
            };
            let hom_dim = usize::from(g.max_dim >= 2);
            let diagram = persistence_diagram(&filtration, hom_dim);
            emit_diagram(out, &diagram, g.format)?;
            Ok(EXIT_OK)
        }
        Command::CoverDistance { first, second, certify } => {
            let mut interner = Interner::new();
            let u = read_cover(open(first)?, &mut interner)?;
            let v = read_cover(open(second)?, &mut interner)?;
            let (d, matching) = cover_bottleneck(&u, &v)?;
            let pairs: Vec<[&str; 2]> = matching
                .pairs
                .iter()
                .map(|&(i, j)| [u.element(i).label(), v.element(j).label()])
                .collect();
            let mut report = json!({
                "distance": fraction_to_f64(&d),
                "distance_exact": format_fraction(&d),
                "matching": pairs,
            });
            if *certify {
                report["interleaving"] = serde_json::to_value(certify_interleaving(&u, &v, g.max_dim)?.summary())
                    .expect("serializable");
            }
            match g.format {
                Format::Csv => {
                    writeln!(out, "first,second")?;
                    for [a, b] in pairs {
                        writeln!(out, "{a},{b}")?;
                    }
                }
                f => emit_json(out, &report, f == Format::Pretty)?,
            }
            Ok(EXIT_OK)
        }
        Command::CechCompare {
            points,
            radius,
            samples,
            out_dir,
        } => {
            let landmarks = read_points(open(points)?)?;
            let cmp = compare_filtrations(&landmarks, *radius, &MonteCarloConfig::new(*samples, g.seed), g.max_dim)?;
            std::fs::create_dir_all(out_dir)?;
            write_diagram_csv(&cmp.rips, create(&out_dir.join("rips.csv"))?)?;
            write_diagram_csv(&cmp.steinhaus, create(&out_dir.join("steinhaus.csv"))?)?;
            write_diagram_csv(&cmp.rescaled_rips, create(&out_dir.join("rescaled_rips.csv"))?)?;
            let summary = json!({
                "landmarks": landmarks.len(),
                "radius": radius,
                "samples": samples,
                "seed": g.seed,
                "bottleneck_h0": cmp.bottleneck_h0,
                "bottleneck_h1": cmp.bottleneck_h1,
                "bottleneck": cmp.bottleneck(),
                "edge_error_bound": cmp.edge_error_bound,
                "max_edge_error": cmp.max_edge_error,
                "rips_vs_steinhaus_h0": diagram_bottleneck(&of_dim(&cmp.rips, 0), &of_dim(&cmp.steinhaus, 0))?,
            });
            emit_json(out, &summary, g.format == Format::Pretty)?;
            Ok(EXIT_OK)
        }
    }
}

fn run_paths(args: &PathArgs, mode: QueryMode, g: &GlobalArgs, out: &mut dyn Write) -> Result<i32> {
    let result: Vec<LabeledPath> = match &args.graph {
        Some(path) => {
            let graph = read_graph(open(path)?)?;
            graph_query(&graph, &args.from, &args.to, mode)?
        }
        None => {
            let loaded = require_cover(&args.source, g)?;
            if loaded.cover.len() <= 5_000 {
                let graph = cover_graph(&loaded.cover, g.budget)?;
                graph_query(&graph, &args.from, &args.to, mode)?
            } else {
                crate::ingest::run_query(&loaded.cover, &args.from, &args.to, mode)?
            }
        }
    };
    if let Some(path) = &args.csv {
        let mut file = create(path)?;
        writeln!(file, "hops,instability")?;
        for p in &result {
            writeln!(file, "{},{}", p.hops, p.instability)?;
        }
    }
    match g.format {
        Format::Json => emit_json(out, &result, false)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["hops", "instability", "path"])?;
            for p in &result {
                w.write_record([p.hops.to_string(), p.instability.to_string(), p.path.join(" > ")])?;
            }
            w.flush()?;
        }
        Format::Pretty => {
            if result.is_empty() {
                writeln!(out, "no path between `{}` and `{}`", args.from, args.to)?;
            }
            for p in &result {
                writeln!(out, "{} hops, instability {:.6}", p.hops, p.instability)?;
                for label in &p.path {
                    writeln!(out, "    {label}")?;
                }
            }
        }
    }
    Ok(if result.is_empty() { EXIT_NO_RESULT } else { EXIT_OK })
}

fn graph_query(graph: &WeightedGraph, from: &str, to: &str, mode: QueryMode) -> Result<Vec<LabeledPath>> {
    let labels = || graph.labels().iter().map(String::as_str);
    let s = resolve_label(from, labels())?;
    let t = resolve_label(to, labels())?;
    let entries: Vec<ParetoEntry> = match mode {
        QueryMode::Frontier => pareto_frontier(graph, s, t),
        QueryMode::Stable => match maximally_stable_path(graph, s, t) {
            Ok(p) => vec![p],
            Err(Error::NoPath(..)) => Vec::new(),
            Err(e) => return Err(e),
        },
        QueryMode::Shortest => fewest_hops_path(graph, s, t, EdgeBound::Unbounded).into_iter().collect(),
    };
    let label = |v: usize| graph.label(v).to_owned();
    Ok(entries.iter().map(|e| LabeledPath::from_entry(e, label)).collect())
}

#[derive(Serialize)]
struct SimplexRow<'a> {
    dim: usize,
    vertices: Vec<&'a str>,
    birth: f64,
}

fn emit_complex(out: &mut dyn Write, complex: &FilteredComplex, format: Format) -> Result<()> {
    match format {
        Format::Csv => write_complex(complex, out),
        Format::Json | Format::Pretty => {
            let labels = complex.labels();
            let rows: Vec<SimplexRow> = complex
                .simplices()
                .iter()
                .map(|s| SimplexRow {
                    dim: s.dim(),
                    vertices: s
                        .vertices
                        .iter()
                        .map(|&v| labels.get(v).map_or("?", String::as_str))
                        .collect(),
                    birth: s.birth,
                })
                .collect();
            emit_json(out, &rows, format == Format::Pretty)
        }
    }
}

fn emit_diagram(out: &mut dyn Write, diagram: &[PersistencePair], format: Format) -> Result<()> {
    match format {
        Format::Csv => write_diagram_csv(diagram, out),
        Format::Json => {
            // JSON has no infinity; essential deaths become null
            let rows: Vec<_> = diagram
                .iter()
                .map(|p| json!({"dim": p.dim, "birth": p.birth, "death": p.death.is_finite().then_some(p.death)}))
                .collect();
            emit_json(out, &rows, false)
        }
        Format::Pretty => {
            for p in diagram {
                writeln!(out, "H{}  [{:.6}, {})", p.dim, p.birth, if p.is_essential() { "inf".into() } else { format!("{:.6}", p.death) })?;
            }
            Ok(())
        }
    }
}

/// Landmark coordinates, one point per row. A non-numeric first row is
/// taken as a header.
pub fn read_points<R: std::io::Read>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut points = Vec::new();
    for (idx, record) in csv.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(idx + 1, |p| p.line() as usize);
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(p) => points.push(p),
            Err(_) if idx == 0 => continue,
            Err(_) => return Err(Error::parse(line, "non-numeric coordinate")),
        }
    }
    Ok(points)
}
