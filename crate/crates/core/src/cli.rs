//! The `polgraph` command line.
//!
//! Exit codes: 0 on success, 1 when an input fails to load or validate,
//! 2 on a usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::additive::is_additive_morphism;
use crate::algebra::{LabelAlgebra, MonoidHom};
use crate::dot;
use crate::emergence::{emergence_report, glue, GluedGraph};
use crate::error::Error;
use crate::graph::{change_labels, is_label_preserving, Graph, LabeledGraph};
use crate::homology::{cycle_report, decompose_cycle, h0, loop_polarity, simple_loops, Carrier, Chain, SimpleLoop};
use crate::io::{self, Model, MorphismKind};
use crate::open::{compose, tensor, OpenGraph};
use crate::paths::{builtin_motif, find_motifs, MotifQuery, DEFAULT_MAX_PATH_LEN};

#[derive(Debug, Parser)]
#[command(name = "polgraph", version, about = "Analyse graphs whose edges carry polarities")]
struct Cli {
    /// Print machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load a model file and check its algebra, labels and morphism.
    Validate { file: PathBuf },
    /// List simple loops with their polarity.
    Loops { file: PathBuf },
    /// Find occurrences of a motif in a host graph.
    Motif {
        host: PathBuf,
        /// A catalog motif name.
        #[arg(long, conflicts_with = "motif_file", required_unless_present = "motif_file")]
        motif: Option<String>,
        /// A model file holding the motif graph.
        #[arg(long)]
        motif_file: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_PATH_LEN)]
        max_len: usize,
        #[arg(long, default_value_t = 1000)]
        max_results: usize,
        /// Let motif edges map to identity paths.
        #[arg(long)]
        allow_identity: bool,
    },
    /// Glue two open graphs end to end.
    Compose {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Place two open graphs side by side.
    Tensor {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Components, minimal cycles and relations among them.
    Homology {
        file: PathBuf,
        /// Largest coefficient in the relation search.
        #[arg(long, default_value_t = 1)]
        bound: u32,
    },
    /// Tag the loops of a glued graph as inherited or emergent.
    Emergence {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Relabel a graph along a homomorphism.
    ChangeLabels {
        file: PathBuf,
        /// A predefined homomorphism.
        #[arg(long, value_enum, conflicts_with_all = ["to", "images"], required_unless_present = "to")]
        hom: Option<HomChoice>,
        /// Target algebra for `--images`.
        #[arg(long, requires = "images")]
        to: Option<String>,
        /// Image of every source element, as `x=y` pairs separated by commas.
        #[arg(long, requires = "to")]
        images: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split an ℕ-cycle into simple loops.
    Decompose {
        file: PathBuf,
        /// Edge coefficients as `name=n` pairs separated by commas; a bare
        /// name counts once.
        #[arg(long)]
        chain: String,
    },
    /// Write a graph in Graphviz DOT format.
    ExportDot {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum HomChoice {
    /// ℚ under multiplication to {+,0,-}.
    Sign,
    /// {+,0,-} into ℚ under multiplication.
    SignEmbedding,
    /// Everything to the one-element monoid.
    Collapse,
}

/// A failure reported with exit code 1.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<io::ParseError> for Failure {
    fn from(e: io::ParseError) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs the command line `args` (program name first), writing normal
/// output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = if informational { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return if informational { 0 } else { 2 };
        }
    };
    let mut buf = String::new();
    let result = dispatch(&cli, &mut buf);
    let _ = out.write_all(buf.as_bytes());
    match result {
        Ok(()) => 0,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "{msg}");
            1
        }
    }
}

fn read(path: &FsPath) -> std::result::Result<Model, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    io::load(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn labeled(path: &FsPath) -> std::result::Result<LabeledGraph, Failure> {
    read(path)?
        .labeled_graph()
        .cloned()
        .ok_or_else(|| Failure(format!("{}: no graph in file", path.display())))
}

fn open_graph(path: &FsPath) -> std::result::Result<OpenGraph, Failure> {
    read(path)?.open_graph.ok_or_else(|| Failure(format!("{}: no open graph in file", path.display())))
}

fn write_or_print(out: &mut String, target: &Option<PathBuf>, text: &str) -> Outcome {
    match target {
        None => out.push_str(text),
        Some(p) => fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display())))?,
    }
    Ok(())
}

fn json_line(out: &mut String, v: &Value) {
    out.push_str(&serde_json::to_string_pretty(v).expect("values serialize"));
    out.push('\n');
}

fn dispatch(cli: &Cli, out: &mut String) -> Outcome {
    match &cli.command {
        Command::Validate { file } => validate(file, cli.json, out),
        Command::Loops { file } => loops(&labeled(file)?, cli.json, out),
        Command::Motif { host, motif, motif_file, max_len, max_results, allow_identity } => {
            let host = labeled(host)?;
            let pattern = match (motif, motif_file) {
                (Some(name), _) => builtin_motif(name)?,
                (None, Some(f)) => labeled(f)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            let query = MotifQuery { max_path_len: *max_len, max_results: *max_results, allow_identity_paths: *allow_identity };
            motifs(&pattern, &host, query, cli.json, out)
        }
        Command::Compose { left, right, out: target } => {
            let z = compose(&open_graph(left)?, &open_graph(right)?)?;
            summarize_open(&z, target, cli.json, out)
        }
        Command::Tensor { left, right, out: target } => {
            let z = tensor(&open_graph(left)?, &open_graph(right)?)?;
            summarize_open(&z, target, cli.json, out)
        }
        Command::Homology { file, bound } => homology(&labeled(file)?, *bound, cli.json, out),
        Command::Emergence { left, right } => {
            let g = glue(&open_graph(left)?, &open_graph(right)?)?;
            emergence(&g, cli.json, out)
        }
        Command::ChangeLabels { file, hom, to, images, out: target } => {
            let g = labeled(file)?;
            let h = match (hom, to, images) {
                (Some(HomChoice::Sign), _, _) => MonoidHom::sign(),
                (Some(HomChoice::SignEmbedding), _, _) => MonoidHom::sign_embedding(),
                (Some(HomChoice::Collapse), _, _) => MonoidHom::collapse(g.algebra().clone()),
                (None, Some(to), Some(images)) => table_hom(g.algebra(), to, images)?,
                _ => unreachable!("clap enforces the combinations"),
            };
            let violations = h.validate(false);
            if let Some(v) = violations.first() {
                return Err(Failure(format!("not a homomorphism: {v}")));
            }
            let relabeled = change_labels(&h, &g)?;
            write_or_print(out, target, &io::emit(&io::graph_file(&relabeled)))
        }
        Command::Decompose { file, chain } => decompose(&labeled(file)?, chain, cli.json, out),
        Command::ExportDot { file, out: target } => {
            let model = read(file)?;
            let text = match (&model.open_graph, model.labeled_graph()) {
                (Some(x), _) => dot::open_to_dot(x),
                (None, Some(g)) => dot::to_dot(g),
                (None, None) => return Err(Failure(format!("{}: no graph in file", file.display()))),
            };
            write_or_print(out, target, &text)
        }
    }
}

fn validate(file: &FsPath, as_json: bool, out: &mut String) -> Outcome {
    let model = read(file)?;
    let mut problems: Vec<String> = model.algebra.validate().violations.iter().map(|v| v.to_string()).collect();
    if let (Some(g), Some(m)) = (&model.graph, &model.morphism) {
        let squares = m.map.validate(g.graph(), m.target.graph())?;
        let edge = |e: usize| g.graph().edge_name(e).to_string();
        if let Some(f) = squares.first() {
            problems.push(format!("morphism is not a graph map: {f:?}"));
        } else {
            match m.kind {
                MorphismKind::Graph => {}
                MorphismKind::LabelPreserving => {
                    if let Some(&e) = is_label_preserving(&m.map, g, &m.target)?.witness() {
                        problems.push(format!("label of edge `{}` is not preserved", edge(e)));
                    }
                }
                MorphismKind::Additive => {
                    if let Some(&e) = is_additive_morphism(&m.map, g, &m.target)?.witness() {
                        problems.push(format!(
                            "label of target edge `{}` is not the sum of its fiber",
                            m.target.graph().edge_name(e)
                        ));
                    }
                }
            }
        }
    }
    let (vertices, edges) = model.labeled_graph().map_or((0, 0), |g| (g.graph().vertex_count(), g.graph().edge_count()));
    if as_json {
        json_line(
            out,
            &json!({
                "algebra": model.algebra.name(),
                "vertices": vertices,
                "edges": edges,
                "valid": problems.is_empty(),
                "problems": problems,
            }),
        );
    } else {
        out.push_str(&format!("algebra {}, {vertices} vertices, {edges} edges\n", model.algebra.name()));
        for p in &problems {
            out.push_str(&format!("violation: {p}\n"));
        }
        if problems.is_empty() {
            out.push_str("ok\n");
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure(format!("{}: {} violation(s)", file.display(), problems.len())))
    }
}

fn walk(g: &Graph, l: &SimpleLoop) -> String {
    l.vertices(g).iter().map(|&v| g.vertex_name(v)).collect::<Vec<_>>().join(" -> ")
}

fn edge_names(g: &Graph, edges: &[usize]) -> Vec<String> {
    edges.iter().map(|&e| g.edge_name(e).to_string()).collect()
}

/// Causal-loop reading of a sign.
fn loop_kind(polarity: &str) -> Option<&'static str> {
    match polarity {
        "+" => Some("reinforcing"),
        "-" => Some("balancing"),
        _ => None,
    }
}

fn loops(g: &LabeledGraph, as_json: bool, out: &mut String) -> Outcome {
    let found = simple_loops(g.graph());
    let alg = g.algebra();
    let gr = g.graph();
    let mut rows = Vec::new();
    for l in &found.loops {
        let p = alg.show(&loop_polarity(l, g)?);
        rows.push((l, p));
    }
    if as_json {
        let loops: Vec<Value> = rows
            .iter()
            .map(|(l, p)| {
                json!({
                    "edges": edge_names(gr, l.edges()),
                    "vertices": l.vertices(gr).iter().map(|&v| gr.vertex_name(v)).collect::<Vec<_>>(),
                    "polarity": p,
                    "kind": loop_kind(p),
                })
            })
            .collect();
        json_line(out, &json!({ "loops": loops, "truncated": found.truncated }));
        return Ok(());
    }
    out.push_str(&format!("{} simple loop(s)\n", rows.len()));
    for (i, (l, p)) in rows.iter().enumerate() {
        let kind = loop_kind(p).map_or(String::new(), |k| format!("  {k}"));
        out.push_str(&format!("L{}  {p}{kind}  {}\n", i + 1, walk(gr, l)));
    }
    if found.truncated {
        out.push_str("(truncated)\n");
    }
    Ok(())
}

fn motifs(pattern: &LabeledGraph, host: &LabeledGraph, query: MotifQuery, as_json: bool, out: &mut String) -> Outcome {
    let pattern = if pattern.algebra() == host.algebra() {
        pattern.clone()
    } else if pattern.algebra().name() == host.algebra().name() {
        let (g, _, labels) = pattern.clone().into_parts();
        LabeledGraph::new(g, host.algebra().clone(), labels)?
    } else {
        return Err(Error::AlgebraMismatch {
            expected: host.algebra().name().to_string(),
            found: pattern.algebra().name().to_string(),
        }
        .into());
    };
    let search = find_motifs(&pattern, host, query)?;
    let (pg, hg) = (pattern.graph(), host.graph());
    let describe = |k: &crate::paths::KleisliMorphism| {
        let vertices: Vec<(String, String)> =
            k.vertex_map.iter().enumerate().map(|(v, &w)| (pg.vertex_name(v).to_string(), hg.vertex_name(w).to_string())).collect();
        let edges: Vec<(String, Vec<String>)> = k
            .edge_paths
            .iter()
            .enumerate()
            .map(|(e, p)| (pg.edge_name(e).to_string(), edge_names(hg, &p.edges)))
            .collect();
        (vertices, edges)
    };
    if as_json {
        let matches: Vec<Value> = search
            .matches
            .iter()
            .map(|k| {
                let (vertices, edges) = describe(k);
                json!({
                    "vertices": vertices.into_iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                    "edges": edges.into_iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                })
            })
            .collect();
        json_line(out, &json!({ "matches": matches, "truncated": search.truncated }));
        return Ok(());
    }
    out.push_str(&format!("{} match(es)\n", search.matches.len()));
    for (i, k) in search.matches.iter().enumerate() {
        let (vertices, edges) = describe(k);
        let vs: Vec<String> = vertices.iter().map(|(a, b)| format!("{a}->{b}")).collect();
        let es: Vec<String> = edges.iter().map(|(a, b)| format!("{a}->[{}]", b.join(", "))).collect();
        out.push_str(&format!("M{}  {}  {}\n", i + 1, vs.join(" "), es.join(" ")));
    }
    if search.truncated {
        out.push_str("(truncated)\n");
    }
    Ok(())
}

fn summarize_open(z: &OpenGraph, target: &Option<PathBuf>, as_json: bool, out: &mut String) -> Outcome {
    let text = io::emit(&io::open_graph_file(z));
    match target {
        None => out.push_str(&text),
        Some(p) => {
            fs::write(p, &text).map_err(|e| Failure(format!("{}: {e}", p.display())))?;
            let g = z.inner().graph();
            if as_json {
                json_line(out, &json!({ "vertices": g.vertex_count(), "edges": g.edge_count(), "out": p.display().to_string() }));
            } else {
                out.push_str(&format!("{} vertices, {} edges written to {}\n", g.vertex_count(), g.edge_count(), p.display()));
            }
        }
    }
    Ok(())
}

fn homology(g: &LabeledGraph, bound: u32, as_json: bool, out: &mut String) -> Outcome {
    let gr = g.graph();
    let nat = LabelAlgebra::builtin(crate::Builtin::NatAdd);
    let comps = h0(gr, &nat)?;
    let report = cycle_report(g, bound)?;
    let loop_names: Vec<String> = (1..=report.loops.len()).map(|i| format!("L{i}")).collect();
    let relations: Option<Vec<String>> = report.relations.as_ref().map(|rs| rs.iter().map(|r| r.show(&loop_names)).collect());
    let components: Vec<Vec<&str>> = comps.components.iter().map(|c| c.iter().map(|&v| gr.vertex_name(v)).collect()).collect();
    if as_json {
        let cycles: Vec<Value> = report
            .loops
            .iter()
            .zip(&loop_names)
            .map(|(l, n)| json!({ "name": n, "edges": edge_names(gr, l.edges()) }))
            .collect();
        json_line(
            out,
            &json!({
                "components": components,
                "minimal_cycles": cycles,
                "relations": relations,
                "bound": bound,
                "truncated": report.truncated,
            }),
        );
        return Ok(());
    }
    out.push_str(&format!("H0: {} component(s)\n", comps.rank()));
    for c in &components {
        out.push_str(&format!("  {{{}}}\n", c.join(", ")));
    }
    out.push_str(&format!("H1 over N: {} minimal cycle(s)\n", report.loops.len()));
    for (l, n) in report.loops.iter().zip(&loop_names) {
        out.push_str(&format!("  {n} = {}\n", edge_names(gr, l.edges()).join(" + ")));
    }
    match relations {
        None => out.push_str(&format!("relations at bound {bound}: search space too large\n")),
        Some(rs) => {
            out.push_str(&format!("relations at bound {bound}: {}\n", rs.len()));
            for r in rs {
                out.push_str(&format!("  {r}\n"));
            }
        }
    }
    Ok(())
}

fn emergence(g: &GluedGraph, as_json: bool, out: &mut String) -> Outcome {
    let report = emergence_report(g)?;
    let gr = g.graph();
    let alg = g.composite.algebra();
    if as_json {
        let loops: Vec<Value> = report
            .loops
            .iter()
            .map(|e| {
                json!({
                    "edges": edge_names(gr, e.simple_loop.edges()),
                    "sides": e.simple_loop.edges().iter().map(|&i| g.side[i].letter().to_string()).collect::<Vec<_>>(),
                    "inherited": e.inherited,
                    "word": e.word.to_string(),
                    "polarity": alg.show(&e.polarity),
                })
            })
            .collect();
        json_line(
            out,
            &json!({
                "x_loops": report.x_loops,
                "y_loops": report.y_loops,
                "composite_loops": report.loops.len(),
                "emergent": report.emergent(),
                "loops": loops,
                "truncated": report.truncated,
            }),
        );
        return Ok(());
    }
    out.push_str(&format!(
        "left piece: {} loop(s), right piece: {} loop(s), composite: {} loop(s), {} emergent\n",
        report.x_loops,
        report.y_loops,
        report.loops.len(),
        report.emergent()
    ));
    for (i, e) in report.loops.iter().enumerate() {
        let tag = if e.inherited { "inherited" } else { "emergent" };
        out.push_str(&format!(
            "L{}  {tag}  {}  {}  {}\n",
            i + 1,
            e.word,
            alg.show(&e.polarity),
            walk(gr, &e.simple_loop)
        ));
    }
    Ok(())
}

fn table_hom(source: &Arc<LabelAlgebra>, to: &str, images: &str) -> std::result::Result<MonoidHom, Failure> {
    let target = Arc::new(LabelAlgebra::by_name(to).ok_or_else(|| Failure(format!("unknown algebra `{to}`")))?);
    let elements = source
        .elements()
        .ok_or_else(|| Failure(format!("{} is infinite; use a predefined --hom", source.name())))?;
    let pairs: Vec<(&str, &str)> = images
        .split(',')
        .map(|p| p.trim().split_once('=').ok_or_else(|| Failure(format!("expected `x=y`, found `{p}`"))))
        .collect::<std::result::Result<_, _>>()?;
    let mut names = Vec::with_capacity(elements.len());
    for x in &elements {
        let shown = source.show(x);
        let (_, y) = pairs
            .iter()
            .find(|(a, _)| a.trim() == shown)
            .ok_or_else(|| Failure(format!("no image given for `{shown}`")))?;
        names.push(y.trim());
    }
    Ok(MonoidHom::from_names(source.clone(), target, &names)?)
}

fn decompose(g: &LabeledGraph, chain: &str, as_json: bool, out: &mut String) -> Outcome {
    let gr = g.graph();
    let mut terms = Vec::new();
    for part in chain.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, n) = match part.split_once('=') {
            Some((name, n)) => {
                (name.trim(), n.trim().parse::<u64>().map_err(|_| Failure(format!("bad coefficient in `{part}`")))?)
            }
            None => (part, 1),
        };
        let e = gr.edge_by_name(name).ok_or_else(|| Failure(format!("no edge named `{name}`")))?;
        terms.push((e, n));
    }
    let c = Chain::nat(Carrier::Edges, &terms);
    let parts = decompose_cycle(&c, gr)?;
    if as_json {
        let parts: Vec<Value> = parts
            .iter()
            .map(|(l, k)| json!({ "edges": edge_names(gr, l.edges()), "multiplicity": k.to_string() }))
            .collect();
        json_line(out, &json!({ "loops": parts }));
        return Ok(());
    }
    for (l, k) in &parts {
        let mut text = gr.vertex_name(gr.src(l.edges()[0])).to_string();
        for &e in l.edges() {
            text.push_str(&format!(" -{}-> {}", gr.edge_name(e), gr.vertex_name(gr.tgt(e))));
        }
        out.push_str(&format!("{k} x  {text}\n"));
    }
    Ok(())
}
