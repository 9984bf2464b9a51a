//! `tmgraph`: validate, measure, transform and render topological multigraph
//! drawings stored in `TMGD 1` files.
//!
//! Exit codes: 0 success, 1 a check found a violation, 2 usage, parse or
//! other errors.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tmgraph::bounds::{linear_bound_holds, verify_crossing_lemma, verify_edge_bounds};
use tmgraph::constructions::{ConstructionSpec, Family};
use tmgraph::decomposition::{bisect, decompose, Cutter, ORACLE_MAX_VERTICES};
use tmgraph::drawing::{Drawing, EdgeId, LensOptions, VertexId};
use tmgraph::geometry::Scalar;
use tmgraph::io::{
    bound_table, parse_drawing, parse_drawing_unchecked, parse_rational, render_svg, serialize_drawing,
    sha256_hex, ReportFormat, SvgOptions, Table,
};
use tmgraph::styles::{girth, Style, StyleParams};
use tmgraph::transforms::{
    planarize, reroute_empty_lens_step, reroute_to_fixpoint, split_high_degree, vertex_split, RerouteOutcome,
    SplitPlan,
};

#[derive(Parser)]
#[command(name = "tmgraph", version, about = "Topological multigraph drawings: crossings, styles and crossing-lemma bounds")]
struct Cli {
    /// Output format for tabular results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Table,
    Delimited,
    Json,
}

impl Format {
    fn report(self) -> ReportFormat {
        match self {
            Format::Text | Format::Table => ReportFormat::Table,
            Format::Delimited => ReportFormat::Delimited,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check general position; exit 1 when violated.
    Validate { file: PathBuf },
    /// Vertex, edge and crossing counts, maximum degree and multiplicity, girth.
    Stats { file: PathBuf },
    /// Check a drawing style; exit 1 with a witness when violated.
    StyleCheck {
        file: PathBuf,
        #[command(flatten)]
        style: StyleArgs,
    },
    /// Balanced style-preserving bisection of minimum width.
    Bisect {
        file: PathBuf,
        #[command(flatten)]
        style: OptionalStyle,
        #[command(flatten)]
        cutter: CutterArgs,
    },
    /// Recursive bisection trace with exact stop tests.
    Decompose {
        file: PathBuf,
        #[command(flatten)]
        style: StyleArgs,
        #[command(flatten)]
        cutter: CutterArgs,
    },
    /// Compare the crossing number with the crossing lemma of a style.
    BoundCheck {
        file: PathBuf,
        #[command(flatten)]
        style: StyleArgs,
    },
    /// Crossing-preserving surgery on a drawing.
    #[command(subcommand)]
    Transform(Transform),
    /// Generate a drawing from a named family.
    Construct {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Minimum segments per arc for the arc family.
        #[arg(long, default_value_t = 4)]
        resolution: usize,
        /// Edge count for the random family (default 2n).
        #[arg(long)]
        edges: Option<usize>,
        /// Cycle parameter for even-cycle: draws C_(2r+2).
        #[arg(long)]
        r: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Render a drawing as SVG.
    Render {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        no_crossings: bool,
        #[arg(long)]
        no_lenses: bool,
    },
    /// Crossing number versus bound for a family over a range of n.
    Report {
        #[arg(long)]
        family: String,
        /// Inclusive range `A..B`.
        #[arg(long)]
        n_range: String,
        /// Style to check; defaults to the family's natural style.
        #[arg(long)]
        style: Option<String>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        resolution: usize,
    },
}

#[derive(Subcommand)]
enum Transform {
    /// Split one vertex by a grouping of its edges, or split every vertex of
    /// degree above `--max-degree` (default 2e/n).
    Split {
        file: PathBuf,
        #[arg(long)]
        vertex: Option<String>,
        /// Comma-separated edges for the first copy; consecutive in rotation.
        #[arg(long, value_delimiter = ',')]
        first: Vec<String>,
        /// Rational degree bound, e.g. `7/2`.
        #[arg(long)]
        max_degree: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reroute edges along empty lenses until none is left.
    Reroute {
        file: PathBuf,
        /// Perform a single step only.
        #[arg(long)]
        once: bool,
        /// Ignore lenses between a shared endpoint and a crossing.
        #[arg(long)]
        no_endpoint_lenses: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Put a vertex on every crossing.
    Planarize {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct StyleArgs {
    /// separated, locally-starlike, single-crossing, branching, multiplicity, girth
    #[arg(long)]
    style: String,
    /// Multiplicity bound for the multiplicity style.
    #[arg(long)]
    m: Option<usize>,
    /// Girth parameter: no cycles of length at most 2r.
    #[arg(long)]
    r: Option<usize>,
    /// Edge-count constant of the girth style, a rational.
    #[arg(long, default_value = "1")]
    c: String,
}

impl StyleArgs {
    fn style(&self) -> Result<Style> {
        Ok(Style::from_parts(&self.style, self.m, self.r)?)
    }

    fn params(&self) -> Result<StyleParams> {
        let c = parse_rational(&self.c).map_err(|e| anyhow!(e))?;
        Ok(self.style()?.params(Some(c))?)
    }
}

#[derive(Args)]
struct OptionalStyle {
    /// Defaults to separated when it holds, else the drawing's multiplicity.
    #[arg(long)]
    style: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
}

#[derive(Args)]
#[group(multiple = false)]
struct CutterArgs {
    /// Exhaustive search (at most 20 vertices).
    #[arg(long)]
    oracle: bool,
    /// Sweep-seeded local search.
    #[arg(long)]
    heuristic: bool,
}

impl CutterArgs {
    fn cutter(&self, n: usize) -> Cutter {
        if self.heuristic || (!self.oracle && n > ORACLE_MAX_VERTICES) {
            Cutter::Heuristic
        } else {
            Cutter::Oracle
        }
    }
}

fn read_text(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
    }
}

fn load(path: &PathBuf) -> Result<Drawing> {
    let text = read_text(path)?;
    parse_drawing(&text).with_context(|| format!("{}", path.display()))
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn code(ok: bool) -> u8 {
    if ok {
        0
    } else {
        1
    }
}

fn natural_style(d: &Drawing) -> Result<Style> {
    if Style::Separated.holds(d)? {
        Ok(Style::Separated)
    } else {
        Ok(Style::Multiplicity(d.max_multiplicity().max(1)))
    }
}

fn run(cli: Cli) -> Result<u8> {
    let format = cli.format;
    match cli.command {
        Command::Validate { file } => {
            let d = parse_drawing_unchecked(&read_text(&file)?).with_context(|| format!("{}", file.display()))?;
            let report = d.validate();
            if format == Format::Json {
                let v: Vec<serde_json::Value> = report
                    .violations
                    .iter()
                    .map(|v| serde_json::json!({"kind": v.kind(), "detail": v.to_string()}))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&serde_json::json!({"valid": report.is_empty(), "violations": v}))?);
            } else if report.is_empty() {
                println!("valid: general position holds");
            } else {
                for v in &report.violations {
                    println!("{v}");
                }
            }
            Ok(code(report.is_empty()))
        }
        Command::Stats { file } => {
            let d = load(&file)?;
            let g = girth(&d).map_or("none".to_string(), |g| g.to_string());
            let values = [
                ("n", d.num_vertices().to_string()),
                ("e", d.num_edges().to_string()),
                ("cr", d.crossing_number()?.to_string()),
                ("max_degree", d.max_degree().to_string()),
                ("max_multiplicity", d.max_multiplicity().to_string()),
                ("girth", g),
            ];
            if format == Format::Text {
                let parts: Vec<String> = values.iter().map(|(k, v)| format!("{k}={v}")).collect();
                println!("{}", parts.join(" "));
            } else {
                let cols: Vec<&str> = values.iter().map(|(k, _)| *k).collect();
                let mut t = Table::new(&cols);
                t.push(values.iter().map(|(_, v)| v.clone()).collect());
                print!("{}", t.render(format.report()));
            }
            Ok(0)
        }
        Command::StyleCheck { file, style } => {
            let d = load(&file)?;
            let r = style.style()?.check(&d)?;
            if format == Format::Json {
                println!(
                    "{}",
                    serde_json::json!({"style": r.style, "holds": r.holds, "witness": r.witness.as_ref().map(|w| w.to_string())})
                );
            } else {
                println!("{r}");
            }
            Ok(code(r.holds))
        }
        Command::Bisect { file, style, cutter } => {
            let d = load(&file)?;
            let s = match &style.style {
                Some(name) => Style::from_parts(name, style.m, style.r)?,
                None => natural_style(&d)?,
            };
            let c = cutter.cutter(d.num_vertices());
            let (w, b) = bisect(&d, s, c)?;
            if format == Format::Json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({"style": s.to_string(), "cutter": c, "width": w, "bipartition": b}))?
                );
            } else {
                let ids = |v: &[VertexId]| v.iter().map(|x| x.0.as_str()).collect::<Vec<_>>().join(" ");
                let eids = |v: &[EdgeId]| v.iter().map(|x| x.0.as_str()).collect::<Vec<_>>().join(" ");
                println!("style={s} cutter={c} width={w}");
                println!("part1: {}", ids(&b.part1));
                println!("part2: {}", ids(&b.part2));
                println!("cut: {}", eids(&b.cut));
                println!("repaired: {}", eids(&b.repaired));
            }
            Ok(0)
        }
        Command::Decompose { file, style, cutter } => {
            let d = load(&file)?;
            let params = style.params()?;
            let t = decompose(&d, &params, cutter.cutter(d.num_vertices()))?;
            if format == Format::Json {
                println!("{}", serde_json::to_string_pretty(&t)?);
            } else {
                print!("{t}");
            }
            Ok(0)
        }
        Command::BoundCheck { file, style } => {
            let d = load(&file)?;
            let params = style.params()?;
            let s = params.style;
            let check = s.check(&d)?;
            if !check.holds {
                println!("{check}");
                return Ok(1);
            }
            let report = verify_crossing_lemma(&d, &params)?;
            let linear = linear_bound_holds(report.cr, report.n, report.e, &params);
            let edges = verify_edge_bounds(&d, s)?;
            if format == Format::Json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({"bound": report, "linear_bound": linear, "edge_bounds": edges}))?
                );
            } else {
                print!("{}", bound_table(std::slice::from_ref(&report)).render(format.report()));
                match linear {
                    Some(ok) => println!("cr >= e - k1*n: {}", if ok { "holds" } else { "FAILS" }),
                    None => println!("cr >= e - k1*n: n/a (e <= (k1+1)n)"),
                }
                println!("{edges}");
            }
            let ok = report.satisfied != Some(false) && linear != Some(false) && edges.holds();
            Ok(code(ok))
        }
        Command::Transform(t) => transform(t),
        Command::Construct { family, n, seed, resolution, edges, r, output } => {
            let family: Family = family.parse()?;
            let spec = ConstructionSpec { family, n, seed, resolution, edges, r };
            let d = spec.build()?;
            emit(&output, &serialize_drawing(&d))?;
            Ok(0)
        }
        Command::Render { file, output, no_crossings, no_lenses } => {
            let text = read_text(&file)?;
            let d = parse_drawing(&text).with_context(|| format!("{}", file.display()))?;
            let opts = SvgOptions {
                crossings: !no_crossings,
                lenses: !no_lenses,
                source_hash: Some(sha256_hex(text.as_bytes())),
            };
            emit(&output, &render_svg(&d, &opts))?;
            Ok(0)
        }
        Command::Report { family, n_range, style, m, r, seed, resolution } => {
            let family: Family = family.parse()?;
            let (a, b) = parse_range(&n_range)?;
            let mut reports = Vec::new();
            for n in a..=b {
                let spec = ConstructionSpec { family, n, seed, resolution, edges: None, r: None };
                let d = spec.build().with_context(|| format!("{} n={n}", family.name()))?;
                let s = match &style {
                    Some(name) => Style::from_parts(name, m, r)?,
                    None => match family {
                        Family::SeparatedArc => Style::Separated,
                        Family::ConvexComplete => Style::Multiplicity(1),
                        Family::EvenCycle => Style::Girth(1),
                        _ => natural_style(&d)?,
                    },
                };
                let params = s.params(Some(Scalar::from_integer(1.into())))?;
                reports.push(verify_crossing_lemma(&d, &params)?);
            }
            print!("{}", bound_table(&reports).render(format.report()));
            Ok(code(reports.iter().all(|r| r.satisfied != Some(false))))
        }
    }
}

fn transform(t: Transform) -> Result<u8> {
    match t {
        Transform::Split { file, vertex, first, max_degree, output } => {
            let d = load(&file)?;
            let out = match (vertex, max_degree) {
                (Some(_), Some(_)) => bail!("--vertex and --max-degree are exclusive"),
                (Some(v), None) => {
                    let vid = VertexId(v);
                    let first: Vec<EdgeId> = first.into_iter().map(EdgeId).collect();
                    let second: Vec<EdgeId> = d
                        .incident(d.vertex_index(&vid)?)
                        .into_iter()
                        .map(|i| d.edges()[i].id.clone())
                        .filter(|e| !first.contains(e))
                        .collect();
                    vertex_split(&d, &SplitPlan::new(vid, first, second))?
                }
                (None, bound) => {
                    let bound = match bound {
                        Some(s) => parse_rational(&s).map_err(|e| anyhow!(e))?,
                        None if d.num_vertices() > 0 => Scalar::new(
                            (2 * d.num_edges() as i64).into(),
                            (d.num_vertices() as i64).into(),
                        ),
                        None => bail!("empty drawing"),
                    };
                    split_high_degree(&d, &bound)?
                }
            };
            eprintln!(
                "n {} -> {}, max degree {} -> {}, cr {} -> {}",
                d.num_vertices(),
                out.num_vertices(),
                d.max_degree(),
                out.max_degree(),
                d.crossing_number()?,
                out.crossing_number()?
            );
            emit(&output, &serialize_drawing(&out))?;
            Ok(0)
        }
        Transform::Reroute { file, once, no_endpoint_lenses, output } => {
            let d = load(&file)?;
            let opts = LensOptions { endpoint_to_crossing: !no_endpoint_lenses };
            let out = if once {
                match reroute_empty_lens_step(&d, opts)? {
                    RerouteOutcome::Changed(x) => x,
                    RerouteOutcome::NoEmptyLens => d.clone(),
                }
            } else {
                reroute_to_fixpoint(&d, opts)?
            };
            eprintln!("cr {} -> {}", d.crossing_number()?, out.crossing_number()?);
            emit(&output, &serialize_drawing(&out))?;
            Ok(0)
        }
        Transform::Planarize { file, output } => {
            let d = load(&file)?;
            let out = planarize(&d)?;
            eprintln!(
                "n {} -> {}, e {} -> {}, cr {} -> {}",
                d.num_vertices(),
                out.num_vertices(),
                d.num_edges(),
                out.num_edges(),
                d.crossing_number()?,
                out.crossing_number()?
            );
            emit(&output, &serialize_drawing(&out))?;
            Ok(0)
        }
    }
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once("..").ok_or_else(|| anyhow!("range {s:?} must look like A..B"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
    if a > b {
        bail!("empty range {s:?}");
    }
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
