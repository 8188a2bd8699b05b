//! Reading and writing graphs and decompositions.
//!
//! Graph JSON is `{"vertices":[..],"edges":[[u,v],..],"embedding_hint":{..}}`
//! where the optional hint maps each vertex to the cyclic order of its incident
//! edges, given as indices into `edges`. The edge-list format has one `u v`
//! pair per line; a line holding a single id declares an isolated vertex and
//! `#` starts a comment.
//!
//! Every JSON document written here carries `"schema": 1`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::GeneratedInstance;
use crate::graph::{Graph, Vertex};
use crate::planarity::PlanarEmbedding;
use crate::treedec::{BagLabel, TreeDecomposition};
use crate::tutte::TutteDecomposition;

pub const SCHEMA_VERSION: u32 = 1;

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

fn check_schema(v: u32) -> Result<()> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(Error::Schema(v))
    }
}

/// A graph as stored on disk, with an optional drawing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<[Vertex; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding_hint: Option<BTreeMap<Vertex, Vec<usize>>>,
    /// Intended stripping layers, outermost first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<Vec<Vertex>>>,
    /// A dart whose left side is the outer face of the hint.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_dart: Option<[Vertex; 2]>,
}

impl GraphFile {
    pub fn from_graph(g: &Graph) -> Self {
        GraphFile {
            schema: SCHEMA_VERSION,
            vertices: g.vertices().to_vec(),
            edges: g.edges().iter().map(|&e| e.into()).collect(),
            embedding_hint: None,
            layers: None,
            outer_dart: None,
        }
    }

    /// Graph plus its rotation, layers and outer dart.
    pub fn from_instance(inst: &GeneratedInstance) -> Self {
        let mut f = GraphFile::from_graph(&inst.graph);
        let g = &inst.graph;
        let hint = inst
            .rotation
            .iter()
            .map(|(&v, rot)| {
                let ids = rot
                    .iter()
                    .map(|&w| g.edge_id((v, w).into()).expect("rotation follows edges"))
                    .collect();
                (v, ids)
            })
            .collect();
        f.embedding_hint = Some(hint);
        f.layers = Some(inst.layers.clone());
        f.outer_dart = Some([inst.outer_dart.0, inst.outer_dart.1]);
        f
    }

    pub fn graph(&self) -> Result<Graph> {
        check_schema(self.schema)?;
        Graph::new(self.vertices.iter().copied(), self.edges.iter().map(|e| (e[0], e[1])))
    }

    /// Rotation system from the hint, as neighbour lists.
    pub fn rotation(&self) -> Result<Option<BTreeMap<Vertex, Vec<Vertex>>>> {
        let Some(hint) = &self.embedding_hint else {
            return Ok(None);
        };
        let mut out = BTreeMap::new();
        for (&v, ids) in hint {
            let mut rot = Vec::with_capacity(ids.len());
            for &i in ids {
                let e = self
                    .edges
                    .get(i)
                    .ok_or_else(|| Error::Parse(format!("embedding hint at {v} names edge {i}")))?;
                let w = match *e {
                    [a, b] if a == v => b,
                    [a, b] if b == v => a,
                    _ => return Err(Error::Parse(format!("edge {i} is not incident to {v}"))),
                };
                rot.push(w);
            }
            out.insert(v, rot);
        }
        Ok(Some(out))
    }

    /// The embedding described by the hint, if any.
    pub fn embedding(&self) -> Result<Option<PlanarEmbedding>> {
        let Some(rot) = self.rotation()? else { return Ok(None) };
        let g = self.graph()?;
        let dart = self.outer_dart.map(|d| (d[0], d[1]));
        PlanarEmbedding::from_rotation(&g, &rot, dart).map(Some)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_edge_list(text: &str) -> Result<GraphFile> {
    let mut vertices = std::collections::BTreeSet::new();
    let mut edges = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = line.split_whitespace().collect();
        let ids = fields
            .iter()
            .map(|f| f.parse::<Vertex>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", no + 1)))?;
        match ids[..] {
            [] => {}
            [v] => {
                vertices.insert(v);
            }
            [a, b] => {
                vertices.insert(a);
                vertices.insert(b);
                edges.push([a, b]);
            }
            _ => return Err(Error::Parse(format!("line {}: expected one or two ids", no + 1))),
        }
    }
    let f = GraphFile {
        schema: SCHEMA_VERSION,
        vertices: vertices.into_iter().collect(),
        edges,
        embedding_hint: None,
        layers: None,
        outer_dart: None,
    };
    f.graph()?;
    Ok(f)
}

/// Parses either format; JSON is recognised by a leading `{`.
pub fn parse_graph_file(text: &str) -> Result<GraphFile> {
    if text.trim_start().starts_with('{') {
        let f: GraphFile = from_json(text)?;
        f.graph()?;
        f.rotation()?;
        Ok(f)
    } else {
        parse_edge_list(text)
    }
}

pub fn read_graph(text: &str) -> Result<Graph> {
    parse_graph_file(text)?.graph()
}

pub fn graph_to_json(g: &Graph) -> String {
    GraphFile::from_graph(g).to_json()
}

pub fn graph_to_edge_list(g: &Graph) -> String {
    let mut s = String::new();
    let mut covered = std::collections::BTreeSet::new();
    for e in g.edges() {
        covered.insert(e.u());
        covered.insert(e.v());
    }
    for &v in g.vertices() {
        if !covered.contains(&v) {
            let _ = writeln!(s, "{v}");
        }
    }
    for e in g.edges() {
        let _ = writeln!(s, "{} {}", e.u(), e.v());
    }
    s
}

#[derive(Serialize, Deserialize)]
struct TdFile {
    #[serde(default = "default_schema")]
    schema: u32,
    width: usize,
    bags: Vec<Vec<Vertex>>,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parent: Option<Vec<Option<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<BagLabel>>,
}

pub fn td_to_json(td: &TreeDecomposition) -> String {
    to_json(&TdFile {
        schema: SCHEMA_VERSION,
        width: td.width(),
        bags: td.bags.clone(),
        edges: td.edges.iter().map(|&(a, b)| [a, b]).collect(),
        parent: td.parent.clone(),
        labels: td.labels.clone(),
    })
}

/// Reads a decomposition. Bags and edges are normalised; the stored width is ignored.
pub fn td_from_json(text: &str) -> Result<TreeDecomposition> {
    let f: TdFile = from_json(text)?;
    check_schema(f.schema)?;
    let n = f.bags.len();
    if let Some(&[a, b]) = f.edges.iter().find(|e| e[0] >= n || e[1] >= n) {
        return Err(Error::Parse(format!("tree edge ({a},{b}) names a missing node")));
    }
    if f.parent.as_ref().is_some_and(|p| p.len() != n) || f.labels.as_ref().is_some_and(|l| l.len() != n) {
        return Err(Error::Parse("parent or labels length differs from bag count".into()));
    }
    let mut td = TreeDecomposition::from_edges(f.bags, f.edges.iter().map(|e| (e[0], e[1])).collect());
    td.parent = f.parent;
    td.labels = f.labels;
    Ok(td)
}

#[derive(Serialize)]
struct TutteFile<'a> {
    schema: u32,
    adhesion: usize,
    #[serde(flatten)]
    td3: &'a TutteDecomposition,
}

#[derive(Deserialize)]
struct TutteFileOwned {
    schema: u32,
    #[serde(flatten)]
    td3: TutteDecomposition,
}

pub fn tutte_to_json(td3: &TutteDecomposition) -> String {
    to_json(&TutteFile {
        schema: SCHEMA_VERSION,
        adhesion: td3.adhesion(),
        td3,
    })
}

pub fn tutte_from_json(text: &str) -> Result<TutteDecomposition> {
    let f: TutteFileOwned = from_json(text)?;
    check_schema(f.schema)?;
    Ok(f.td3)
}

/// Any serialisable report wrapped with the schema version.
pub fn report_to_json<T: Serialize>(kind: &str, body: &T) -> String {
    #[derive(Serialize)]
    struct Wrapped<'a, T> {
        schema: u32,
        kind: &'a str,
        #[serde(flatten)]
        body: &'a T,
    }
    to_json(&Wrapped {
        schema: SCHEMA_VERSION,
        kind,
        body,
    })
}

fn join(vs: &[Vertex]) -> String {
    vs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

pub fn graph_to_dot(g: &Graph) -> String {
    let mut s = String::from("graph G {\n");
    for &v in g.vertices() {
        let _ = writeln!(s, "  {v};");
    }
    for e in g.edges() {
        let _ = writeln!(s, "  {} -- {};", e.u(), e.v());
    }
    s.push_str("}\n");
    s
}

/// Bags become node labels; a rooted decomposition draws parent-to-child arcs.
pub fn td_to_dot(td: &TreeDecomposition) -> String {
    let mut s = String::from("digraph TD {\n  node [shape=box];\n");
    for (i, bag) in td.bags.iter().enumerate() {
        let mut label = format!("{{{}}}", join(bag));
        if let Some(l) = td.label(i) {
            let kind = serde_json::to_value(l.kind).expect("serializable");
            let kind = kind.as_str().unwrap_or_default().to_string();
            match l.witness {
                Some(w) => {
                    let _ = write!(label, "\\n{kind} {w}");
                }
                None => {
                    let _ = write!(label, "\\n{kind}");
                }
            }
        }
        let _ = writeln!(s, "  n{i} [label=\"{label}\"];");
    }
    match &td.parent {
        Some(parent) => {
            for (c, p) in parent.iter().enumerate() {
                if let Some(p) = p {
                    let _ = writeln!(s, "  n{p} -> n{c};");
                }
            }
        }
        None => {
            for &(a, b) in &td.edges {
                let _ = writeln!(s, "  n{a} -> n{b} [dir=none];");
            }
        }
    }
    s.push_str("}\n");
    s
}

/// Cut nodes are ellipses, 3-blocks are boxes with their kind and virtual edges.
pub fn tutte_to_dot(td3: &TutteDecomposition) -> String {
    let mut s = String::from("graph Tutte {\n");
    for (i, b) in td3.blocks.iter().enumerate() {
        let kind = serde_json::to_value(b.kind).expect("serializable");
        let mut label = format!("{{{}}}\\n{}", join(&b.vertices), kind.as_str().unwrap_or_default());
        if !b.virtual_edges.is_empty() {
            let v: Vec<String> = b.virtual_edges.iter().map(|e| e.to_string()).collect();
            let _ = write!(label, "\\nvirtual {}", v.join(" "));
        }
        let _ = writeln!(s, "  b{i} [shape=box,label=\"{label}\"];");
    }
    for (i, c) in td3.cuts.iter().enumerate() {
        let _ = writeln!(s, "  c{i} [shape=ellipse,label=\"{{{},{}}}\"];", c.u(), c.v());
    }
    for &(c, b) in &td3.tree {
        let _ = writeln!(s, "  c{c} -- b{b};");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemble::full_td;
    use crate::generate::{complete_graph, generate, theta_graph};
    use crate::tutte::tutte_decomposition;

    #[test]
    fn edge_list_and_json() {
        let f = parse_graph_file("# square\n1 2\n2 3 # side\n3 4\n4 1\n\n7\n").unwrap();
        let g = f.graph().unwrap();
        assert_eq!(g.vertices(), &[1, 2, 3, 4, 7]);
        assert_eq!(g.m(), 4);
        assert_eq!(read_graph(&graph_to_json(&g)).unwrap(), g);
        assert_eq!(read_graph(&graph_to_edge_list(&g)).unwrap(), g);
        assert!(matches!(parse_graph_file("1 2 3\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_graph_file("1 x\n"), Err(Error::Parse(_))));
        assert_eq!(parse_graph_file("1 1\n"), Err(Error::SelfLoop(1)));
        assert!(matches!(parse_graph_file("{\"vertices\":[1],"), Err(Error::Parse(_))));
        assert_eq!(
            parse_graph_file("{\"schema\":9,\"vertices\":[],\"edges\":[]}"),
            Err(Error::Schema(9))
        );
    }

    #[test]
    fn embedding_hint_round_trip() {
        let inst = generate(12, 2, 5).unwrap();
        let f = GraphFile::from_instance(&inst);
        let back = parse_graph_file(&f.to_json()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.rotation().unwrap().unwrap(), inst.rotation);
        let emb = back.embedding().unwrap().unwrap();
        assert_eq!(emb.layer_partition().layers, inst.layers);
    }

    #[test]
    fn decompositions_round_trip() {
        let g = theta_graph();
        let td = full_td(&g, Some(1)).unwrap();
        assert_eq!(td_from_json(&td_to_json(&td)).unwrap(), td);
        let dot = td_to_dot(&td);
        assert!(dot.starts_with("digraph TD {"));
        assert_eq!(dot.matches("->").count(), td.len() - 1);

        let td3 = tutte_decomposition(&g).unwrap();
        assert_eq!(tutte_from_json(&tutte_to_json(&td3)).unwrap(), td3);
        assert!(tutte_to_dot(&td3).contains("c0 -- b"));
        assert!(graph_to_dot(&complete_graph(3)).contains("1 -- 2;"));
        assert!(matches!(
            td_from_json("{\"width\":0,\"bags\":[[1]],\"edges\":[[0,3]]}"),
            Err(Error::Parse(_))
        ));
    }
}
