//! Vertex, edge and face remember numbers of spanning forests, exhaustive
//! spanning-tree enumeration, and spanning-tree synthesis.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{spanning_forest, Edge, FundamentalCycles, Graph, SpanningForest, Vertex};
use crate::planarity::PlanarEmbedding;

/// Remember numbers with the element attaining each maximum and the non-tree
/// edges whose fundamental cycles were counted there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RememberReport {
    pub vr: usize,
    pub er: usize,
    pub fr: Option<usize>,
    pub vr_witness: Option<(Vertex, Vec<Edge>)>,
    pub er_witness: Option<(Edge, Vec<Edge>)>,
    /// Face id and counted edges.
    pub fr_witness: Option<(usize, Vec<Edge>)>,
}

/// Fundamental cycles through each vertex and each edge.
struct Counts {
    by_vertex: Vec<Vec<usize>>,
    by_edge: Vec<Vec<usize>>,
}

fn counts(g: &Graph, fc: &FundamentalCycles) -> Counts {
    let mut by_vertex = vec![Vec::new(); g.n()];
    let mut by_edge = vec![Vec::new(); g.m()];
    for c in 0..fc.len() {
        for v in fc.cycle_vertices[c].ones() {
            by_vertex[v].push(c);
        }
        for e in fc.cycle_edges[c].ones() {
            by_edge[e].push(c);
        }
    }
    Counts { by_vertex, by_edge }
}

/// Non-tree edges whose fundamental cycle shares an edge with the boundary of each face
/// (None for the outer face).
pub fn face_cycle_lists(g: &Graph, fc: &FundamentalCycles, emb: &PlanarEmbedding) -> Vec<Option<Vec<usize>>> {
    emb.faces()
        .iter()
        .map(|f| {
            if f.id == emb.outer_face() {
                return None;
            }
            let ids: Vec<usize> = f.boundary_edges.iter().map(|&e| g.edge_id(e).expect("edge")).collect();
            Some(
                (0..fc.len())
                    .filter(|&c| ids.iter().any(|&i| fc.cycle_edges[c].contains(i)))
                    .collect(),
            )
        })
        .collect()
}

pub fn remember_report(g: &Graph, t: &SpanningForest, emb: Option<&PlanarEmbedding>) -> RememberReport {
    let fc = FundamentalCycles::new(g, t);
    let cs = counts(g, &fc);
    let edges_of = |l: &[usize]| -> Vec<Edge> { l.iter().map(|&c| fc.non_tree[c]).collect() };
    let best_v = (0..g.n()).max_by_key(|&i| (cs.by_vertex[i].len(), std::cmp::Reverse(i)));
    let vr = best_v.map_or(0, |i| cs.by_vertex[i].len());
    let vr_witness = best_v
        .filter(|_| vr > 0)
        .map(|i| (g.vertices()[i], edges_of(&cs.by_vertex[i])));
    let tree_ids: Vec<usize> = t
        .tree_edges()
        .iter()
        .map(|&e| g.edge_id(e).expect("tree edge"))
        .collect();
    let best_e = tree_ids
        .iter()
        .copied()
        .max_by_key(|&i| (cs.by_edge[i].len(), std::cmp::Reverse(i)));
    let er = best_e.map_or(0, |i| cs.by_edge[i].len());
    let er_witness = best_e
        .filter(|_| er > 0)
        .map(|i| (g.edges()[i], edges_of(&cs.by_edge[i])));
    let (fr, fr_witness) = match emb {
        Some(emb) => {
            let lists = face_cycle_lists(g, &fc, emb);
            let best = lists
                .iter()
                .enumerate()
                .filter_map(|(f, l)| l.as_ref().map(|l| (f, l)))
                .max_by_key(|&(f, l)| (l.len(), std::cmp::Reverse(f)));
            let fr = best.map_or(0, |(_, l)| l.len());
            (Some(fr), best.filter(|_| fr > 0).map(|(f, l)| (f, edges_of(l))))
        }
        None => (None, None),
    };
    RememberReport {
        vr,
        er,
        fr,
        vr_witness,
        er_witness,
        fr_witness,
    }
}

/// Largest number of fundamental cycles through one vertex.
pub fn vertex_remember(g: &Graph, t: &SpanningForest) -> usize {
    remember_report(g, t, None).vr
}

/// Largest number of fundamental cycles using one tree edge.
pub fn edge_remember(g: &Graph, t: &SpanningForest) -> usize {
    remember_report(g, t, None).er
}

/// Largest number of fundamental cycles sharing an edge with one inner face boundary.
pub fn face_remember(g: &Graph, t: &SpanningForest, emb: &PlanarEmbedding) -> usize {
    remember_report(g, t, Some(emb)).fr.unwrap_or(0)
}

/// Quantity minimised by [`exact_min_remember`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Objective {
    Vr,
    Er,
    Fr,
    /// max(er + 1, 3 fr)
    ErFrBound,
}

impl Objective {
    pub fn value(self, r: &RememberReport) -> usize {
        let fr = r.fr.unwrap_or(0);
        match self {
            Objective::Vr => r.vr,
            Objective::Er => r.er,
            Objective::Fr => fr,
            Objective::ErFrBound => (r.er + 1).max(3 * fr),
        }
    }
}

/// Number of spanning trees by the matrix-tree theorem (floating point).
pub fn spanning_tree_count(g: &Graph) -> f64 {
    let n = g.n();
    if n <= 1 {
        return 1.0;
    }
    let mut a = vec![vec![0.0f64; n - 1]; n - 1];
    for e in g.edges() {
        let i = g.index_of(e.u()).unwrap();
        let j = g.index_of(e.v()).unwrap();
        for (x, y) in [(i, j), (j, i)] {
            if x < n - 1 {
                a[x][x] += 1.0;
                if y < n - 1 {
                    a[x][y] -= 1.0;
                }
            }
        }
    }
    let m = n - 1;
    let mut det = 1.0;
    for c in 0..m {
        let p = (c..m).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        if a[p][c].abs() < 1e-12 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..m {
            let f = a[r][c] / a[c][c];
            if f != 0.0 {
                for k in c..m {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    det.abs().round()
}

struct Rollback {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<(usize, usize)>,
}

impl Rollback {
    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.history.push((a, b));
        true
    }
    fn undo(&mut self) {
        let (a, b) = self.history.pop().expect("undo after union");
        self.parent[b] = b;
        self.size[a] -= self.size[b];
    }
}

/// Calls `visit` with the sorted edge ids of every spanning tree of a connected
/// graph, in lexicographic order of those id lists.
pub fn for_each_spanning_tree<F>(g: &Graph, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let n = g.n();
    if n == 0 {
        return ControlFlow::Continue(());
    }
    let ends: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|e| (g.index_of(e.u()).unwrap(), g.index_of(e.v()).unwrap()))
        .collect();
    let mut dsu = Rollback {
        parent: (0..n).collect(),
        size: vec![1; n],
        history: Vec::new(),
    };
    let mut chosen = Vec::with_capacity(n - 1);
    fn rec<F: FnMut(&[usize]) -> ControlFlow<()>>(
        i: usize,
        ends: &[(usize, usize)],
        need: usize,
        dsu: &mut Rollback,
        chosen: &mut Vec<usize>,
        visit: &mut F,
    ) -> ControlFlow<()> {
        if chosen.len() == need {
            return visit(chosen);
        }
        // Too few edges left to finish a tree.
        if ends.len() - i < need - chosen.len() {
            return ControlFlow::Continue(());
        }
        let (a, b) = ends[i];
        if dsu.union(a, b) {
            chosen.push(i);
            let r = rec(i + 1, ends, need, dsu, chosen, visit);
            chosen.pop();
            dsu.undo();
            r?;
        }
        rec(i + 1, ends, need, dsu, chosen, visit)
    }
    rec(0, &ends, n - 1, &mut dsu, &mut chosen, &mut visit)
}

/// All spanning trees of a connected graph.
pub fn all_spanning_trees(g: &Graph) -> Vec<SpanningForest> {
    let mut out = Vec::new();
    let _ = for_each_spanning_tree(g, |ids| {
        let es: Vec<Edge> = ids.iter().map(|&i| g.edges()[i]).collect();
        out.push(SpanningForest::from_edges(g, &es).expect("enumerated tree"));
        ControlFlow::Continue(())
    });
    out
}

pub const EXACT_MAX_N: usize = 10;
pub const EXACT_MAX_TREES: f64 = 1e6;

fn enumerable(g: &Graph) -> bool {
    g.n() <= EXACT_MAX_N || spanning_tree_count(g) <= EXACT_MAX_TREES
}

/// Exact optimum of `objective` over all spanning trees, with the lexicographically
/// smallest optimal tree.
pub fn exact_min_remember(g: &Graph, emb: &PlanarEmbedding, objective: Objective) -> Result<(SpanningForest, usize)> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if !enumerable(g) {
        return Err(Error::TooLarge(format!(
            "n = {} with about {} spanning trees",
            g.n(),
            spanning_tree_count(g)
        )));
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    let _ = for_each_spanning_tree(g, |ids| {
        let t = forest_from_ids(g, ids);
        let r = remember_report(g, &t, Some(emb));
        let v = objective.value(&r);
        if best.as_ref().is_none_or(|b| v < b.0) {
            best = Some((v, ids.to_vec()));
        }
        if v == 0 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    let (v, ids) = best.expect("connected graphs have a spanning tree");
    Ok((forest_from_ids(g, &ids), v))
}

fn forest_from_ids(g: &Graph, ids: &[usize]) -> SpanningForest {
    let es: Vec<Edge> = ids.iter().map(|&i| g.edges()[i]).collect();
    SpanningForest::from_edges(g, &es).expect("tree edges")
}

fn key(r: &RememberReport) -> (usize, usize, usize) {
    (r.fr.unwrap_or(0), r.er, r.vr)
}

/// Largest instance solved by exhaustive search inside [`synthesize_spanning_tree`].
const SYNTH_EXACT_TREES: f64 = 2e4;

/// Spanning tree with small face remember number, then small edge remember number.
///
/// Small instances are solved exactly. Larger ones start from a greedy tree
/// that prefers edges near the outer face and improve it by edge swaps.
pub fn synthesize_spanning_tree(
    g: &Graph,
    _k: usize,
    emb: &PlanarEmbedding,
) -> Result<(SpanningForest, RememberReport)> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if emb.graph() != g {
        return Err(Error::InvalidEmbedding("embedding belongs to another graph".into()));
    }
    if spanning_tree_count(g) <= SYNTH_EXACT_TREES {
        let mut best: Option<((usize, usize, usize), Vec<usize>)> = None;
        let _ = for_each_spanning_tree(g, |ids| {
            let r = remember_report(g, &forest_from_ids(g, ids), Some(emb));
            let k = key(&r);
            if best.as_ref().is_none_or(|b| k < b.0) {
                best = Some((k, ids.to_vec()));
            }
            ControlFlow::Continue(())
        });
        let t = forest_from_ids(g, &best.expect("tree").1);
        let r = remember_report(g, &t, Some(emb));
        return Ok((t, r));
    }
    let layer = emb.vertex_layers();
    let mut pri: Vec<Edge> = g.edges().to_vec();
    // Edges inside a layer first (outer layers first), then edges between layers.
    pri.sort_by_key(|e| {
        let (a, b) = (layer[&e.u()], layer[&e.v()]);
        (a.min(b), a != b, *e)
    });
    let mut t = spanning_forest(g, Some(&pri));
    let mut r = remember_report(g, &t, Some(emb));
    let mut improved = true;
    let mut rounds = 0;
    while improved && rounds < 50 {
        improved = false;
        rounds += 1;
        let fc = FundamentalCycles::new(g, &t);
        'swap: for c in 0..fc.len() {
            let add = fc.non_tree[c];
            for ei in fc.cycle_edges[c].ones() {
                let rem = g.edges()[ei];
                if rem == add {
                    continue;
                }
                let mut es: Vec<Edge> = t.tree_edges().iter().copied().filter(|&x| x != rem).collect();
                es.push(add);
                let cand = SpanningForest::from_edges(g, &es).expect("swap keeps a tree");
                let cr = remember_report(g, &cand, Some(emb));
                if key(&cr) < key(&r) {
                    t = cand;
                    r = cr;
                    improved = true;
                    break 'swap;
                }
            }
        }
    }
    Ok((t, r))
}
