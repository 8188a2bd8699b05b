//! Checks shared by the msol integration tests and the acceptance harness.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use kop_core::assemble::cycle_block_td;
use kop_core::graph::{root_orient, spanning_forest, Edge, FundamentalCycles, Graph, SpanningForest, Vertex};
use kop_core::minor::has_minor;
use kop_core::msol::{extract_relation, library, library_call, Assignment, Formula, Structure, Value, DEFAULT_BUDGET};
use kop_core::planarity::{
    check_layer_characterization, embed, face_adjacent, incident_edge_order, induced_cycles,
    is_nonseparating_induced_cycle, is_outerplanar, LayerPartition,
};
use kop_core::remember::{all_spanning_trees, face_remember, remember_report};
use kop_core::treedec::{td_from_vr_er, validate, BagKind, EndpointRule, TreeDecomposition, Witness};
use kop_core::tutte::outerplanarity_index;
use kop_core::{generate, is_l_connected};

/// Outcome of a batch of oracle comparisons.
#[derive(Default, Debug)]
pub struct Tally {
    pub checks: usize,
    pub mismatches: Vec<String>,
    /// Decompositions rebuilt from extracted relations and validated.
    pub rebuilt: usize,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.mismatches.len() < 50 {
            self.mismatches.push(what());
        }
    }

    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn merge(&mut self, o: Tally) {
        self.checks += o.checks;
        self.rebuilt += o.rebuilt;
        self.mismatches.extend(o.mismatches);
    }
}

fn lib(name: &str) -> Formula {
    library_call(name).unwrap()
}

fn rel(s: &Structure, f: &Formula, a: &Assignment) -> BTreeSet<Vec<Value>> {
    extract_relation(s, f, a, DEFAULT_BUDGET).unwrap()
}

fn holds(s: &Structure, f: &Formula, a: &Assignment) -> bool {
    kop_core::msol::evaluate(s, f, a).unwrap()
}

fn vset(vs: impl IntoIterator<Item = Vertex>) -> Value {
    Value::vertex_set(vs)
}

fn eset(es: impl IntoIterator<Item = Edge>) -> Value {
    Value::edge_set(es)
}

fn subsets<T: Copy>(items: &[T]) -> Vec<Vec<T>> {
    (0..1u64 << items.len())
        .map(|m| {
            (0..items.len())
                .filter(|&i| m >> i & 1 == 1)
                .map(|i| items[i])
                .collect()
        })
        .collect()
}

fn as_vertices(v: &Value) -> Vec<Vertex> {
    match v {
        Value::VertexSet(s) => s.iter().copied().collect(),
        _ => panic!("not a vertex set"),
    }
}

/// Graph on `xs` with the edges of `es` (all endpoints must lie in `xs`).
fn sub(xs: &[Vertex], es: &[Edge]) -> Option<Graph> {
    if es.iter().any(|e| !xs.contains(&e.u()) || !xs.contains(&e.v())) {
        return None;
    }
    Some(Graph::new(xs.to_vec(), es.iter().map(|e| (e.u(), e.v()))).unwrap())
}

fn is_tree(h: &Graph) -> bool {
    h.n() >= 1 && h.is_connected() && h.m() + 1 == h.n()
}

fn endpoints(es: &[Edge]) -> Vec<Vertex> {
    let s: BTreeSet<Vertex> = es.iter().flat_map(|e| [e.u(), e.v()]).collect();
    s.into_iter().collect()
}

/// Spanning trees to use for `g`: up to `limit` spread over all of them, or
/// the greedy forest when `g` is disconnected.
pub fn sample_trees(g: &Graph, limit: usize) -> Vec<SpanningForest> {
    if !g.is_connected() {
        return vec![spanning_forest(g, None)];
    }
    let all = all_spanning_trees(g);
    let step = all.len().div_ceil(limit.max(1)).max(1);
    all.into_iter().step_by(step).collect()
}

/// Structural predicates on one graph.
pub fn check_structural(g: &Graph) -> Tally {
    let mut t = Tally::default();
    let s = Structure::two_sorted(g).unwrap();
    let vs = g.vertices().to_vec();
    let es = g.edges().to_vec();
    let all_e = Assignment::new().with("EA", eset(es.clone()));

    // Connectivity of induced subgraphs.
    let conn = lib("Conn").with_parameters(&["EA"]);
    let got = rel(&s, &conn, &all_e);
    for xs in subsets(&vs) {
        let want = g.induced(&xs).unwrap().is_connected();
        let have = got.contains(&vec![vset(xs.clone())]);
        t.check(have == want, || format!("Conn {g:?} X={xs:?}: formula {have}"));
    }
    let conn1 = lib("Conn1");
    let got1 = rel(&s, &conn1, &Assignment::new());
    let got_conn: BTreeSet<Vec<Value>> = got.clone();
    t.check(got1 == got_conn, || format!("Conn1 differs from Conn on {g:?}"));

    // Cycles, trees and paths over every (X, EA).
    for name in ["Cycle", "Tree", "Path"] {
        let got = rel(&s, &lib(name), &Assignment::new());
        for xs in subsets(&vs) {
            for ea in subsets(&es) {
                let want = match sub(&xs, &ea) {
                    None => false,
                    Some(h) => match name {
                        "Cycle" => h.is_cycle(),
                        "Tree" => is_tree(&h),
                        _ => is_tree(&h) && h.max_degree() <= 2,
                    },
                };
                let have = got.contains(&vec![vset(xs.clone()), eset(ea.clone())]);
                t.check(have == want, || {
                    format!("{name} {g:?} X={xs:?} EA={ea:?}: formula {have}")
                });
            }
        }
    }

    // Simple x-y paths.
    let got = rel(&s, &lib("PathXY"), &Assignment::new());
    for &x in &vs {
        for &y in &vs {
            for ep in subsets(&es) {
                let want = if x == y {
                    ep.is_empty()
                } else {
                    let ends = endpoints(&ep);
                    match sub(&ends, &ep) {
                        Some(h) if h.n() > 0 => {
                            is_tree(&h)
                                && h.max_degree() <= 2
                                && h.contains_vertex(x)
                                && h.contains_vertex(y)
                                && h.degree(x) == 1
                                && h.degree(y) == 1
                        }
                        _ => false,
                    }
                };
                let have = got.contains(&vec![Value::Vertex(x), Value::Vertex(y), eset(ep.clone())]);
                t.check(have == want, || {
                    format!("PathXY {g:?} {x}-{y} EP={ep:?}: formula {have}")
                });
            }
        }
    }

    // Degrees and adjacency.
    for k in 0..=3 {
        let got = rel(&s, &lib(&format!("Deg{{k={k}}}")), &Assignment::new());
        for &v in &vs {
            for ea in subsets(&es) {
                let want = ea.iter().filter(|e| e.contains(v)).count() == k;
                let have = got.contains(&vec![Value::Vertex(v), eset(ea.clone())]);
                t.check(have == want, || format!("Deg{k} {g:?} v={v} EA={ea:?}"));
            }
        }
    }
    let adj = lib("Adj").with_parameters(&["EA"]);
    let got = rel(&s, &adj, &all_e);
    for &v in &vs {
        for &w in &vs {
            let have = got.contains(&vec![Value::Vertex(v), Value::Vertex(w)]);
            t.check(have == g.has_edge(v, w), || format!("Adj {g:?} {v} {w}"));
        }
    }

    // Minors and outerplanarity of induced subgraphs.
    let k4 = generate::complete_graph(4);
    let k23 = generate::complete_bipartite(2, 3);
    let mk4 = lib("Minor_H{H=K4}").with_parameters(&["EA"]);
    let mk23 = lib("Minor_H{H=K23}").with_parameters(&["EA"]);
    let op = lib("Outerplanar").with_parameters(&["EA"]);
    let (gk4, gk23, gop) = (rel(&s, &mk4, &all_e), rel(&s, &mk23, &all_e), rel(&s, &op, &all_e));
    for xs in subsets(&vs) {
        let h = g.induced(&xs).unwrap();
        let key = vec![vset(xs.clone())];
        t.check(gk4.contains(&key) == has_minor(&h, &k4), || {
            format!("Minor K4 {g:?} X={xs:?}")
        });
        t.check(gk23.contains(&key) == has_minor(&h, &k23), || {
            format!("Minor K23 {g:?} X={xs:?}")
        });
        t.check(gop.contains(&key) == is_outerplanar(&h), || {
            format!("Outerplanar {g:?} X={xs:?}")
        });
    }
    if g.n() > 0 {
        let whole = gop.contains(&vec![vset(vs.clone())]);
        let index_one = outerplanarity_index(g).map(|i| i <= 1).unwrap_or(false);
        t.check(whole == index_one, || {
            format!("Outerplanar vs outerplanarity index on {g:?}")
        });
    }

    // Non-separating induced cycles.
    let got = rel(&s, &lib("FaceB3"), &Assignment::new());
    for xs in subsets(&vs) {
        let want = is_nonseparating_induced_cycle(g, &xs);
        let have = got.contains(&vec![vset(xs.clone())]);
        t.check(have == want, || format!("FaceB3 {g:?} X={xs:?}: formula {have}"));
    }

    // Vertex connectivity.
    if g.is_connected() {
        for k in 1..=3 {
            let f = lib(&format!("Conn_k{{k={k}}}"));
            let a = Assignment::new()
                .with("X", vset(vs.clone()))
                .with("EA", eset(es.clone()));
            let want = is_l_connected(g, k).unwrap();
            t.check(holds(&s, &f, &a) == want, || format!("Conn_k{k} {g:?}"));
        }
    }

    // Layer partitions with one or two layers.
    for k in 1..=2usize {
        let have = holds(&s, &lib(&format!("KOuterplanar{{k={k}}}")), &Assignment::new());
        let want = (0..k.pow(vs.len() as u32)).any(|code| {
            let mut layers = vec![Vec::new(); k];
            let mut c = code;
            for &v in &vs {
                layers[c % k].push(v);
                c /= k;
            }
            check_layer_characterization(g, &LayerPartition::new(layers)).unwrap()
        });
        t.check(have == want, || format!("KOuterplanar{k} {g:?}: formula {have}"));
    }

    // Virtual pairs behave like real adjacency for edg-only formulas.
    let missing: Vec<(Vertex, Vertex)> = vs
        .iter()
        .flat_map(|&a| vs.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| a < b && !g.has_edge(a, b))
        .take(2)
        .collect();
    if !missing.is_empty() {
        let with_virtual = kop_core::msol::with_virtual_edges(g, &missing).unwrap();
        let extra: Vec<Edge> = missing.iter().map(|&(a, b)| Edge::new(a, b)).collect();
        let union = Structure::two_sorted(&g.with_extra_edges(&extra).unwrap()).unwrap();
        for text in [
            "@Conn1(V)",
            "forall v . exists w . edg(v,w)",
            "exists x, y, z . (edg(x,y) & edg(y,z) & edg(x,z))",
            "forall X . (mod[0,2](X) | exists x in X, y in X . edg(x,y))",
        ] {
            let f = kop_core::msol::parse_formula(text).unwrap();
            let (a, b) = (
                holds(&with_virtual, &f, &Assignment::new()),
                holds(&union, &f, &Assignment::new()),
            );
            t.check(a == b, || format!("virtual pairs {missing:?} on {g:?}: {text}"));
        }
    }
    t
}

/// Colour classes of the endpoint rule as parameters C0, C1, ...
fn colour_params(g: &Graph, a: &mut Assignment) -> usize {
    let rule = EndpointRule::new(g);
    let colors = rule.colors();
    let c = colors.iter().copied().max().map_or(1, |m| m + 1);
    for i in 0..c {
        let class = g
            .vertices()
            .iter()
            .enumerate()
            .filter(|&(j, _)| colors[j] == i)
            .map(|(_, &v)| v);
        a.set(&format!("C{i}"), vset(class));
    }
    c
}

/// Remember-number formulas and the vertex/edge bag relations for one tree.
pub fn check_tree(g: &Graph, t0: &SpanningForest) -> Tally {
    let mut t = Tally::default();
    let s = Structure::two_sorted(g).unwrap();
    let f_val = eset(t0.tree_edges().iter().copied());
    let a = Assignment::new().with("F", f_val.clone());
    let rep = remember_report(g, t0, None);
    let fc = FundamentalCycles::new(g, t0);

    let bound = |name: &str, c: usize| holds(&s, &lib(&format!("{name}{{k={c}}}")), &a);
    for (name, value) in [("vr_le", rep.vr), ("er_le", rep.er)] {
        t.check(bound(name, value), || {
            format!("{name}{{k={value}}} false on {g:?} with {:?}", t0.tree_edges())
        });
        if value > 0 {
            t.check(!bound(name, value - 1), || {
                format!("{name}{{k={}}} true on {g:?} with {:?}", value - 1, t0.tree_edges())
            });
        }
    }

    // Fundamental cycle membership.
    let got = rel(&s, &lib("FundCyc"), &a);
    for (vi, &v) in g.vertices().iter().enumerate() {
        for (ei, &e) in g.edges().iter().enumerate() {
            let want = fc
                .non_tree
                .iter()
                .position(|&x| x == e)
                .is_some_and(|c| fc.cycle_vertices[c].contains(vi));
            let have = got.contains(&vec![Value::Vertex(v), Value::Edge(e)]);
            t.check(have == want, || format!("FundCyc {g:?} v={v} e={e:?}"));
            let _ = ei;
        }
    }

    // Vertex-scoped face count over all non-separating induced cycles.
    let faces: Vec<Vec<Edge>> = induced_cycles(g)
        .into_iter()
        .filter(|c| is_nonseparating_induced_cycle(g, c))
        .map(|c| g.induced(&c).unwrap().edges().to_vec())
        .collect();
    let mut fr_v = 0;
    for (vi, _) in g.vertices().iter().enumerate() {
        for face in &faces {
            let ids: Vec<usize> = face.iter().map(|&e| g.edge_id(e).unwrap()).collect();
            let n = (0..fc.len())
                .filter(|&c| fc.cycle_vertices[c].contains(vi) && ids.iter().any(|&i| fc.cycle_edges[c].contains(i)))
                .count();
            fr_v = fr_v.max(n);
        }
    }
    t.check(bound("fr_le", fr_v), || format!("fr_le{{k={fr_v}}} false on {g:?}"));
    if fr_v > 0 {
        t.check(!bound("fr_le", fr_v - 1), || {
            format!("fr_le{{k={}}} true on {g:?}", fr_v - 1)
        });
    }

    if g.is_connected() && g.n() >= 1 {
        t.merge(check_bags(g, t0));
    }
    t
}

/// Bag_V, Bag_E and Parent extraction against the vertex/edge bag construction.
fn check_bags(g: &Graph, t0: &SpanningForest) -> Tally {
    let mut t = Tally::default();
    let r = g.vertices()[0];
    let tree = root_orient(t0, r).unwrap();
    let td = td_from_vr_er(g, &tree).unwrap();
    let s = Structure::two_sorted(g).unwrap();
    let mut a = Assignment::new()
        .with("F", eset(tree.tree_edges().iter().copied()))
        .with("r", Value::Vertex(r));
    let c = colour_params(g, &mut a);

    let labels = td.labels.clone().unwrap();
    let mut want_v = BTreeSet::new();
    let mut want_e = BTreeSet::new();
    for (x, l) in labels.iter().enumerate() {
        let bag = vset(td.bags[x].iter().copied());
        match (l.kind, l.witness) {
            (BagKind::VertexBag, Some(Witness::Vertex(v))) => {
                want_v.insert(vec![Value::Vertex(v), bag]);
            }
            (BagKind::EdgeBag, Some(Witness::Edge(e))) => {
                want_e.insert(vec![Value::Edge(e), bag]);
            }
            _ => unreachable!(),
        }
    }
    let want_p: BTreeSet<Vec<Value>> = td
        .parent
        .as_ref()
        .unwrap()
        .iter()
        .enumerate()
        .filter_map(|(x, p)| p.map(|p| vec![vset(td.bags[p].iter().copied()), vset(td.bags[x].iter().copied())]))
        .collect();

    let bag_v = rel(&s, &lib(&format!("Bag_V{{c={c}}}")), &a);
    let bag_e = rel(&s, &lib(&format!("Bag_E{{c={c}}}")), &a);
    let parent = rel(&s, &lib(&format!("Parent{{c={c}}}")), &a);
    t.check(bag_v == want_v, || {
        format!("Bag_V on {g:?} tree {:?}: {bag_v:?} vs {want_v:?}", tree.tree_edges())
    });
    t.check(bag_e == want_e, || {
        format!("Bag_E on {g:?} tree {:?}", tree.tree_edges())
    });
    t.check(parent == want_p, || {
        format!("Parent on {g:?} tree {:?}: {parent:?} vs {want_p:?}", tree.tree_edges())
    });

    // Rebuild the decomposition from the relations when bags are distinct sets.
    let bags: Vec<Vec<Vertex>> = bag_v.iter().chain(bag_e.iter()).map(|t| as_vertices(&t[1])).collect();
    let mut index: BTreeMap<Vec<Vertex>, usize> = BTreeMap::new();
    for (i, b) in bags.iter().enumerate() {
        index.insert(b.clone(), i);
    }
    if index.len() == bags.len() {
        let edges: Vec<(usize, usize)> = parent
            .iter()
            .map(|p| (index[&as_vertices(&p[0])], index[&as_vertices(&p[1])]))
            .collect();
        let rebuilt = TreeDecomposition::from_edges(bags, edges);
        let report = validate(g, &rebuilt);
        let rep = remember_report(g, &tree, None);
        let cap = rep.vr.max(rep.er + 1);
        t.check(report.valid && report.width <= cap, || {
            format!("rebuilt decomposition on {g:?}: {report:?}")
        });
        t.rebuilt += 1;
    }
    t
}

/// Face predicates on a 3-connected planar host.
pub fn check_three_connected(g: &Graph, trees: &[SpanningForest]) -> Tally {
    let mut t = Tally::default();
    let s = Structure::two_sorted(g).unwrap();
    let emb = embed(g).unwrap();
    let outer: Vec<Edge> = emb.faces()[emb.outer_face()].boundary_edges.clone();
    for t0 in trees {
        let fr = face_remember(g, t0, &emb);
        let a = Assignment::new()
            .with("F", eset(t0.tree_edges().iter().copied()))
            .with("EO", eset(outer.clone()));
        let bound = |c: usize| holds(&s, &lib(&format!("fr_face_le{{k={c}}}")), &a);
        t.check(bound(fr), || format!("fr_face_le{{k={fr}}} false on {g:?}"));
        if fr > 0 {
            t.check(!bound(fr - 1), || format!("fr_face_le{{k={}}} true on {g:?}", fr - 1));
        }
    }

    let adj_f = rel(&s, &lib("Adj_F"), &Assignment::new());
    for &e in g.edges() {
        for &f in g.edges() {
            let want = e != f && face_adjacent(&emb, e, f).unwrap_or(false);
            let have = adj_f.contains(&vec![Value::Edge(e), Value::Edge(f)]);
            t.check(have == want, || format!("Adj_F {g:?} {e:?} {f:?}: formula {have}"));
        }
    }

    let ori = library("oriNB", &[]).unwrap();
    let path_f = library("Path_F", &[]).unwrap();
    for &v in g.vertices() {
        if g.degree(v) < 3 {
            continue;
        }
        let inc = g.incident_edges(v);
        for &anchor in &inc {
            for &co in &inc {
                let Ok(order) = incident_edge_order(g, v, anchor, co) else {
                    continue;
                };
                let pos = |e: Edge| order.iter().position(|&x| x == e).unwrap();
                let a = Assignment::new()
                    .with("v", Value::Vertex(v))
                    .with("a", Value::Edge(anchor))
                    .with("ca", Value::Edge(co));
                let got: BTreeSet<(Edge, Edge)> = rel(&s, &ori, &a)
                    .into_iter()
                    .filter_map(|t| match (&t[0], &t[1]) {
                        (Value::Edge(e), Value::Edge(f)) if *e != co && *f != co => Some((*e, *f)),
                        _ => None,
                    })
                    .collect();
                let want: BTreeSet<(Edge, Edge)> = order[..order.len() - 1]
                    .iter()
                    .flat_map(|&e| order[..order.len() - 1].iter().map(move |&f| (e, f)))
                    .filter(|&(e, f)| pos(e) < pos(f))
                    .collect();
                t.check(got == want, || {
                    format!("oriNB {g:?} v={v} anchor={anchor:?} co={co:?}: {got:?} vs {want:?}")
                });

                let got: BTreeSet<Vec<Value>> = rel(&s, &path_f, &a)
                    .into_iter()
                    .filter(|t| {
                        let at_v = |x: &Value| matches!(x, Value::Edge(e) if e.contains(v) && *e != co);
                        at_v(&t[1]) && at_v(&t[2])
                    })
                    .collect();
                let mut want = BTreeSet::new();
                for &e in &order[..order.len() - 1] {
                    for &f in &order[..order.len() - 1] {
                        let (i, j) = (pos(e).min(pos(f)), pos(e).max(pos(f)));
                        want.insert(vec![eset(order[i..=j].iter().copied()), Value::Edge(e), Value::Edge(f)]);
                    }
                }
                t.check(got == want, || {
                    format!("Path_F {g:?} v={v} anchor={anchor:?} co={co:?}: {got:?} vs {want:?}")
                });
            }
        }
    }
    t
}

/// Cycle bags and their parent relation against the cycle construction.
pub fn check_cycle(n: u32) -> Tally {
    let mut t = Tally::default();
    let c = generate::cycle_graph(n);
    let s = Structure::two_sorted(&c).unwrap();
    for &r in c.vertices() {
        for &first in c.neighbors(r) {
            let last = *c.neighbors(r).iter().find(|&&w| w != first).unwrap();
            let td = cycle_block_td(&c, r, first).unwrap();
            let a = Assignment::new()
                .with("r", Value::Vertex(r))
                .with("EC", eset(c.edges().iter().copied()))
                .with("el", Value::Edge(Edge::new(r, last)));
            let bags: BTreeSet<Value> = rel(&s, &lib("Bag_Cyc"), &a).into_iter().map(|t| t[1].clone()).collect();
            let want: BTreeSet<Value> = td.bags.iter().map(|b| vset(b.iter().copied())).collect();
            t.check(bags == want, || format!("Bag_Cyc C{n} r={r} first={first}"));
            let got = rel(&s, &lib("Parent_Cyc"), &a);
            let want: BTreeSet<Vec<Value>> = td
                .parent
                .as_ref()
                .unwrap()
                .iter()
                .enumerate()
                .filter_map(|(x, p)| {
                    p.map(|p| vec![vset(td.bags[p].iter().copied()), vset(td.bags[x].iter().copied())])
                })
                .collect();
            t.check(got == want, || {
                format!("Parent_Cyc C{n} r={r} first={first}: {got:?} vs {want:?}")
            });
        }
    }
    t
}

/// Every check over the graphs with at most `max_n` vertices and `max_m` edges.
pub fn corpus_check(max_n: usize, max_m: usize, trees_per_graph: usize) -> (Tally, usize) {
    let mut total = Tally::default();
    let mut graphs = 0;
    for n in 1..=max_n {
        for g in kop_core::corpus::all_graphs(n, false) {
            if g.m() > max_m {
                continue;
            }
            graphs += 1;
            total.merge(check_structural(&g));
            let trees = sample_trees(&g, trees_per_graph);
            for t0 in &trees {
                total.merge(check_tree(&g, t0));
            }
            if n >= 4 && g.is_connected() && is_l_connected(&g, 3).unwrap() && embed(&g).is_ok() {
                total.merge(check_three_connected(&g, &trees));
            }
        }
    }
    for n in 3..=6 {
        total.merge(check_cycle(n));
    }
    (total, graphs)
}
