//! JSON model files.
//!
//! A model file holds a label algebra (by name or as tables) and
//! optionally a graph or an open graph, plus an optional morphism out of
//! the graph. Vertices, edges and elements are referred to by name.
//!
//! ```json
//! {
//!   "format": 1,
//!   "algebra": "SIGN",
//!   "graph": {
//!     "vertices": ["u", "v"],
//!     "edges": [{ "name": "e1", "src": "u", "tgt": "v", "label": "-" }]
//!   }
//! }
//! ```

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Flags, LabelAlgebra};
use crate::error::Error;
use crate::graph::{Graph, GraphMorphism, LabeledGraph};
use crate::open::OpenGraph;

pub const FORMAT_VERSION: u32 = 1;

/// Category of a load failure. Each has a stable code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorCode {
    /// Not well-formed JSON.
    Syntax,
    /// Well-formed JSON of the wrong shape.
    Schema,
    /// Unsupported `format`.
    Version,
    /// A label or table entry that is not an element of the algebra.
    UnknownElement,
    /// A reference to a vertex or edge that does not exist.
    Dangling,
    /// Anything else the library rejects.
    Invalid,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::Syntax => "E001",
            ErrorCode::Schema => "E002",
            ErrorCode::Version => "E003",
            ErrorCode::UnknownElement => "E004",
            ErrorCode::Dangling => "E005",
            ErrorCode::Invalid => "E006",
        }
    }
}

/// A load failure with its position in the input when one is known. For
/// name-resolution errors the position is that of the first occurrence of
/// the offending name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub code: ErrorCode,
    pub message: String,
    pub position: Option<(usize, usize)>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]", self.code.as_str())?;
        if let Some((line, col)) = self.position {
            write!(f, " at {line}:{col}")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format: u32,
    pub algebra: AlgebraSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub open_graph: Option<OpenGraphSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphism: Option<MorphismSpec>,
}

/// A named algebra (see [`LabelAlgebra::by_name`]) or explicit tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSpec {
    Named(String),
    Table(TableSpec),
}

/// Tables are written with element names; `mul[i][j]` is the product of
/// the `i`-th and `j`-th elements. `add` and `zero` make it a rig.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    pub name: String,
    pub elements: Vec<String>,
    pub mul: Vec<Vec<String>>,
    pub unit: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub add: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero: Option<String>,
    #[serde(default)]
    pub commutative: bool,
    #[serde(default)]
    pub cancellative: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
}

/// An edge; a missing name becomes `e<k>` for the `k`-th edge and a
/// missing label becomes the unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub src: String,
    pub tgt: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenGraphSpec {
    pub graph: GraphSpec,
    #[serde(default)]
    pub left: Vec<FootSpec>,
    #[serde(default)]
    pub right: Vec<FootSpec>,
}

/// A foot point: either a vertex name, used as the point's name too, or
/// an explicit point name with the vertex it lands on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FootSpec {
    Vertex(String),
    Point { point: String, vertex: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MorphismKind {
    /// Only the graph squares are checked.
    Graph,
    LabelPreserving,
    Additive,
}

/// A morphism from the file's graph to `target`, given by the name of
/// the image of each source vertex and edge, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub kind: MorphismKind,
    pub target: GraphSpec,
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
}

/// A model file with every name resolved.
#[derive(Debug, Clone)]
pub struct Model {
    pub algebra: Arc<LabelAlgebra>,
    pub graph: Option<LabeledGraph>,
    pub open_graph: Option<OpenGraph>,
    pub morphism: Option<Morphism>,
}

#[derive(Debug, Clone)]
pub struct Morphism {
    pub kind: MorphismKind,
    pub map: GraphMorphism,
    pub target: LabeledGraph,
}

impl Model {
    /// The graph of the file, or the inner graph of its open graph.
    pub fn labeled_graph(&self) -> Option<&LabeledGraph> {
        self.graph.as_ref().or(self.open_graph.as_ref().map(OpenGraph::inner))
    }
}

fn position_of(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.chars().count(), |i| before[i + 1..].chars().count()) + 1;
    (line, column)
}

/// Position of the first JSON string literal equal to `name`.
fn locate(text: &str, name: &str) -> Option<(usize, usize)> {
    let quoted = serde_json::to_string(name).ok()?;
    text.find(&quoted).map(|i| position_of(text, i))
}

struct Resolver<'a> {
    text: Option<&'a str>,
}

impl Resolver<'_> {
    fn fail(&self, code: ErrorCode, message: String, token: Option<&str>) -> ParseError {
        let position = match (self.text, token) {
            (Some(text), Some(token)) => locate(text, token),
            _ => None,
        };
        ParseError { code, message, position }
    }

    fn wrap(&self, err: Error, context: &str) -> ParseError {
        let code = match err {
            Error::Malformed { .. } => ErrorCode::Schema,
            Error::UnknownElement { .. } => ErrorCode::UnknownElement,
            Error::Dangling { .. } => ErrorCode::Dangling,
            _ => ErrorCode::Invalid,
        };
        ParseError { code, message: format!("{context}: {err}"), position: None }
    }

    fn algebra(&self, spec: &AlgebraSpec) -> Result<Arc<LabelAlgebra>, ParseError> {
        let t = match spec {
            AlgebraSpec::Named(name) => {
                return LabelAlgebra::by_name(name)
                    .map(Arc::new)
                    .ok_or_else(|| self.fail(ErrorCode::Schema, format!("unknown algebra `{name}`"), Some(name)));
            }
            AlgebraSpec::Table(t) => t,
        };
        let index: HashMap<&str, usize> = t.elements.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let look = |name: &str| {
            index.get(name).copied().ok_or_else(|| {
                self.fail(
                    ErrorCode::UnknownElement,
                    format!("algebra {}: `{name}` is not one of its elements", t.name),
                    Some(name),
                )
            })
        };
        let table = |rows: &[Vec<String>]| -> Result<Vec<Vec<usize>>, ParseError> {
            rows.iter().map(|row| row.iter().map(|x| look(x)).collect()).collect()
        };
        let flags = Flags { commutative: t.commutative, cancellative: t.cancellative };
        let mul = table(&t.mul)?;
        let unit = look(&t.unit)?;
        let built = match (&t.add, &t.zero) {
            (None, None) => LabelAlgebra::from_table(&t.name, t.elements.clone(), mul, unit, flags),
            (Some(add), Some(zero)) => {
                LabelAlgebra::rig_from_tables(&t.name, t.elements.clone(), table(add)?, mul, look(zero)?, unit, flags)
            }
            _ => {
                return Err(self.fail(
                    ErrorCode::Schema,
                    format!("algebra {}: `add` and `zero` must be given together", t.name),
                    None,
                ))
            }
        };
        built.map(Arc::new).map_err(|e| self.wrap(e, &format!("algebra {}", t.name)))
    }

    fn graph(&self, spec: &GraphSpec, alg: &Arc<LabelAlgebra>) -> Result<LabeledGraph, ParseError> {
        let mut g = Graph::default();
        for v in &spec.vertices {
            if g.vertex_by_name(v).is_some() {
                return Err(self.fail(ErrorCode::Schema, format!("vertex `{v}` is declared twice"), Some(v)));
            }
            g.add_vertex(v.clone());
        }
        let mut labels = Vec::with_capacity(spec.edges.len());
        for (i, e) in spec.edges.iter().enumerate() {
            let name = e.name.clone().unwrap_or_else(|| format!("e{}", i + 1));
            if g.edge_by_name(&name).is_some() {
                return Err(self.fail(ErrorCode::Schema, format!("edge `{name}` is declared twice"), Some(&name)));
            }
            let end = |v: &str| {
                g.vertex_by_name(v).ok_or_else(|| {
                    self.fail(ErrorCode::Dangling, format!("edge `{name}`: no vertex named `{v}`"), Some(v))
                })
            };
            let (s, t) = (end(&e.src)?, end(&e.tgt)?);
            let label = match &e.label {
                None => alg.unit(),
                Some(l) => alg.parse_elem(l).map_err(|_| {
                    self.fail(
                        ErrorCode::UnknownElement,
                        format!("edge `{name}`: label `{l}` is not an element of {}", alg.name()),
                        Some(l),
                    )
                })?,
            };
            g.add_named_edge(name, s, t).expect("endpoints exist");
            labels.push(label);
        }
        LabeledGraph::new(g, alg.clone(), labels).map_err(|e| self.wrap(e, "graph"))
    }

    fn foot(&self, g: &Graph, foot: &[FootSpec]) -> Result<(Vec<String>, Vec<usize>), ParseError> {
        let mut names = Vec::with_capacity(foot.len());
        let mut leg = Vec::with_capacity(foot.len());
        for f in foot {
            let (point, vertex) = match f {
                FootSpec::Vertex(v) => (v, v),
                FootSpec::Point { point, vertex } => (point, vertex),
            };
            let v = g.vertex_by_name(vertex).ok_or_else(|| {
                self.fail(ErrorCode::Dangling, format!("foot point `{point}`: no vertex named `{vertex}`"), Some(vertex))
            })?;
            names.push(point.clone());
            leg.push(v);
        }
        Ok((names, leg))
    }

    fn morphism(&self, spec: &MorphismSpec, src: &Graph, alg: &Arc<LabelAlgebra>) -> Result<Morphism, ParseError> {
        let target = self.graph(&spec.target, alg)?;
        if spec.vertices.len() != src.vertex_count() || spec.edges.len() != src.edge_count() {
            return Err(self.fail(
                ErrorCode::Schema,
                format!(
                    "morphism maps {} vertices and {} edges but the graph has {} and {}",
                    spec.vertices.len(),
                    spec.edges.len(),
                    src.vertex_count(),
                    src.edge_count()
                ),
                None,
            ));
        }
        let tg = target.graph();
        let dangling = |kind: &str, name: &str| {
            self.fail(ErrorCode::Dangling, format!("morphism: target has no {kind} named `{name}`"), Some(name))
        };
        let f0 = spec
            .vertices
            .iter()
            .map(|v| tg.vertex_by_name(v).ok_or_else(|| dangling("vertex", v)))
            .collect::<Result<_, _>>()?;
        let f1 = spec
            .edges
            .iter()
            .map(|e| tg.edge_by_name(e).ok_or_else(|| dangling("edge", e)))
            .collect::<Result<_, _>>()?;
        Ok(Morphism { kind: spec.kind, map: GraphMorphism { f0, f1 }, target })
    }

    fn model(&self, file: &ModelFile) -> Result<Model, ParseError> {
        if file.format != FORMAT_VERSION {
            return Err(ParseError {
                code: ErrorCode::Version,
                message: format!("format {} is not supported (expected {FORMAT_VERSION})", file.format),
                position: None,
            });
        }
        if file.graph.is_some() && file.open_graph.is_some() {
            return Err(self.fail(ErrorCode::Schema, "give either `graph` or `open_graph`, not both".into(), None));
        }
        let algebra = self.algebra(&file.algebra)?;
        let graph = file.graph.as_ref().map(|g| self.graph(g, &algebra)).transpose()?;
        let open_graph = match &file.open_graph {
            None => None,
            Some(o) => {
                let inner = self.graph(&o.graph, &algebra)?;
                let (left, leg_in) = self.foot(inner.graph(), &o.left)?;
                let (right, leg_out) = self.foot(inner.graph(), &o.right)?;
                Some(OpenGraph::new(inner, left, leg_in, right, leg_out).map_err(|e| self.wrap(e, "open graph"))?)
            }
        };
        let morphism = match (&file.morphism, &graph) {
            (None, _) => None,
            (Some(m), Some(g)) => Some(self.morphism(m, g.graph(), &algebra)?),
            (Some(_), None) => {
                return Err(self.fail(ErrorCode::Schema, "a morphism needs a `graph` to start from".into(), None))
            }
        };
        Ok(Model { algebra, graph, open_graph, morphism })
    }
}

/// Reads a model file without resolving names.
pub fn parse(text: &str) -> Result<ModelFile, ParseError> {
    serde_json::from_str(text).map_err(|e| {
        use serde_json::error::Category;
        let code = match e.classify() {
            Category::Data => ErrorCode::Schema,
            Category::Syntax | Category::Eof | Category::Io => ErrorCode::Syntax,
        };
        let message = e.to_string();
        let message = message.rsplit_once(" at line ").map_or(message.clone(), |(m, _)| m.to_string());
        ParseError { code, message, position: Some((e.line(), e.column())) }
    })
}

/// Reads a model file and resolves every name in it.
pub fn load(text: &str) -> Result<Model, ParseError> {
    let file = parse(text)?;
    Resolver { text: Some(text) }.model(&file)
}

/// Resolves an already-parsed file. Errors carry no positions.
pub fn resolve(file: &ModelFile) -> Result<Model, ParseError> {
    Resolver { text: None }.model(file)
}

/// Pretty-printed JSON with a trailing newline. Output depends only on
/// the file's contents.
pub fn emit(file: &ModelFile) -> String {
    let mut out = serde_json::to_string_pretty(file).expect("model files always serialize");
    out.push('\n');
    out
}

/// Named algebras are written by name, other tables in full.
pub fn algebra_spec(alg: &LabelAlgebra) -> AlgebraSpec {
    if LabelAlgebra::by_name(alg.name()).as_ref() == Some(alg) {
        return AlgebraSpec::Named(alg.name().to_string());
    }
    match alg.tables() {
        None => AlgebraSpec::Named(alg.name().to_string()),
        Some(t) => {
            let names = |rows: &[Vec<usize>]| rows.iter().map(|r| r.iter().map(|&i| t.elements[i].clone()).collect()).collect();
            AlgebraSpec::Table(TableSpec {
                name: alg.name().to_string(),
                elements: t.elements.clone(),
                mul: names(&t.mul),
                unit: t.elements[t.unit].clone(),
                add: t.rig.as_ref().map(|r| names(&r.add)),
                zero: t.rig.as_ref().map(|r| t.elements[r.zero].clone()),
                commutative: alg.flags().commutative,
                cancellative: alg.flags().cancellative,
            })
        }
    }
}

/// Names made unique by priming repeats, so the file can refer to them.
fn unique(names: &[String]) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    names
        .iter()
        .map(|n| {
            let mut name = n.clone();
            while !seen.insert(name.clone()) {
                name.push('\'');
            }
            name
        })
        .collect()
}

/// Vertex and edge names as they will be written.
fn written_names(g: &Graph) -> (Vec<String>, Vec<String>) {
    (unique(g.vertex_names()), unique(g.edge_names()))
}

/// The graph section for `g`. Repeated vertex or edge names get primes
/// appended.
pub fn graph_spec(g: &LabeledGraph) -> GraphSpec {
    let gr = g.graph();
    let (vertices, edges) = written_names(gr);
    GraphSpec {
        edges: (0..gr.edge_count())
            .map(|e| EdgeSpec {
                name: Some(edges[e].clone()),
                src: vertices[gr.src(e)].clone(),
                tgt: vertices[gr.tgt(e)].clone(),
                label: Some(g.label_name(e)),
            })
            .collect(),
        vertices,
    }
}

fn foot_specs(vertices: &[String], foot: &[String], leg: &[usize]) -> Vec<FootSpec> {
    foot.iter()
        .zip(leg)
        .map(|(p, &v)| {
            if vertices[v] == *p {
                FootSpec::Vertex(p.clone())
            } else {
                FootSpec::Point { point: p.clone(), vertex: vertices[v].clone() }
            }
        })
        .collect()
}

/// A model file holding just `g`.
pub fn graph_file(g: &LabeledGraph) -> ModelFile {
    ModelFile {
        format: FORMAT_VERSION,
        algebra: algebra_spec(g.algebra()),
        graph: Some(graph_spec(g)),
        open_graph: None,
        morphism: None,
    }
}

/// A model file holding just `x`.
pub fn open_graph_file(x: &OpenGraph) -> ModelFile {
    let (vertices, _) = written_names(x.inner().graph());
    ModelFile {
        format: FORMAT_VERSION,
        algebra: algebra_spec(x.algebra()),
        graph: None,
        open_graph: Some(OpenGraphSpec {
            graph: graph_spec(x.inner()),
            left: foot_specs(&vertices, x.left_foot(), x.leg_in()),
            right: foot_specs(&vertices, x.right_foot(), x.leg_out()),
        }),
        morphism: None,
    }
}

/// A model file holding `src` and a morphism from it into `target`.
pub fn morphism_file(src: &LabeledGraph, kind: MorphismKind, map: &GraphMorphism, target: &LabeledGraph) -> ModelFile {
    let (vertices, edges) = written_names(target.graph());
    ModelFile {
        morphism: Some(MorphismSpec {
            kind,
            target: graph_spec(target),
            vertices: map.f0.iter().map(|&v| vertices[v].clone()).collect(),
            edges: map.f1.iter().map(|&e| edges[e].clone()).collect(),
        }),
        ..graph_file(src)
    }
}

/// An algebra-only model file.
pub fn algebra_file(alg: &LabelAlgebra) -> ModelFile {
    ModelFile { format: FORMAT_VERSION, algebra: algebra_spec(alg), graph: None, open_graph: None, morphism: None }
}
