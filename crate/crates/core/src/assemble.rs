//! Gluing per-3-block decompositions into one rooted tree decomposition of a
//! connected planar graph.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{root_orient, Edge, ForestIndex, Graph, SpanningForest, Vertex};
use crate::planarity::{embed, layered_embedding, stripping_layers, OuterFacePolicy};
use crate::remember::{remember_report, synthesize_spanning_tree};
use crate::treedec::{td_3connected_kop_with_tree, BagKind, BagLabel, TreeDecomposition, Witness};
use crate::tutte::{
    block_decomposition, derive_spanning_sets, three_block_graph, tutte_decomposition, BlockDecomposition, BlockKind,
    TutteDecomposition,
};

/// Root vertex and whether it avoids every 1-cut and every Tutte 2-cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootChoice {
    pub vertex: Vertex,
    pub cut_free: bool,
}

fn tutte_all(bd: &BlockDecomposition) -> Result<Vec<Option<TutteDecomposition>>> {
    (0..bd.blocks.len())
        .map(|i| {
            if bd.blocks[i].len() >= 3 {
                tutte_decomposition(&bd.block_graph(i)).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect()
}

fn root_choice(g: &Graph, bd: &BlockDecomposition, td3s: &[Option<TutteDecomposition>]) -> Result<RootChoice> {
    let mut memberships = vec![0usize; g.n()];
    for &c in &bd.cut_vertices {
        memberships[g.index_of(c).unwrap()] += 1;
    }
    for td3 in td3s.iter().flatten() {
        let pairs: BTreeSet<Edge> = td3.cuts.iter().copied().collect();
        for p in pairs {
            memberships[g.index_of(p.u()).unwrap()] += 1;
            memberships[g.index_of(p.v()).unwrap()] += 1;
        }
    }
    let i = (0..g.n())
        .min_by_key(|&i| (memberships[i], i))
        .ok_or(Error::Disconnected)?;
    Ok(RootChoice {
        vertex: g.vertices()[i],
        cut_free: memberships[i] == 0,
    })
}

/// Smallest vertex in no cut vertex and no Tutte 2-cut; failing that, the
/// smallest vertex with the fewest cut memberships.
pub fn choose_root(g: &Graph) -> Result<Vertex> {
    choose_root_report(g).map(|c| c.vertex)
}

pub fn choose_root_report(g: &Graph) -> Result<RootChoice> {
    let bd = block_decomposition(g)?;
    let td3s = tutte_all(&bd)?;
    root_choice(g, &bd, &td3s)
}

/// Decomposition of a cycle with bags {r, v, w} for every edge {v, w} away
/// from `r`, in a path that follows the cycle from `r` towards `first`.
pub fn cycle_block_td(c: &Graph, r: Vertex, first: Vertex) -> Result<TreeDecomposition> {
    if !c.is_cycle() {
        return Err(Error::NotACycle);
    }
    if !c.contains_vertex(r) {
        return Err(Error::RootNotOnCycle(r));
    }
    if !c.has_edge(r, first) {
        return Err(Error::UnknownEdge(Edge::new(r, first)));
    }
    let mut walk = vec![r, first];
    while walk.len() < c.n() {
        let (prev, cur) = (walk[walk.len() - 2], walk[walk.len() - 1]);
        let nb = c.neighbors(cur);
        walk.push(if nb[0] == prev { nb[1] } else { nb[0] });
    }
    let mut bags = Vec::new();
    let mut labels = Vec::new();
    let mut parent = Vec::new();
    for i in 1..walk.len() - 1 {
        let (v, w) = (walk[i], walk[i + 1]);
        bags.push(vec![r, v, w]);
        labels.push(BagLabel::new(BagKind::Cyc, Some(Witness::Edge(Edge::new(v, w)))));
        parent.push(if i == 1 { None } else { Some(i - 2) });
    }
    Ok(TreeDecomposition::from_parent(bags, parent, Some(labels)))
}

/// Which of two 3-blocks sharing the cut {x, y} lies towards the root of
/// `tree`: the child side has every vertex outside the cut below x or y, and
/// the parent side has a vertex outside the cut above x or y. Returns
/// (parent index, child index) into `blocks`.
pub fn orient_cut_block(g: &Graph, tree: &SpanningForest, cut: Edge, blocks: [&[Vertex]; 2]) -> Result<(usize, usize)> {
    if !tree.is_rooted() {
        return Err(Error::NotRooted);
    }
    for v in [cut.u(), cut.v()] {
        if !g.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    let fi = ForestIndex::new(tree);
    let (x, y) = (cut.u(), cut.v());
    let outside = |b: &[Vertex]| b.iter().copied().filter(|&v| v != x && v != y).collect::<Vec<_>>();
    let child = |b: &[Vertex]| outside(b).iter().all(|&v| fi.is_ancestor(x, v) || fi.is_ancestor(y, v));
    let parent = |b: &[Vertex]| outside(b).iter().any(|&v| fi.is_ancestor(v, x) || fi.is_ancestor(v, y));
    let c = [child(blocks[0]), child(blocks[1])];
    let p = [parent(blocks[0]), parent(blocks[1])];
    match (c, p) {
        ([false, true], [true, _]) => Ok((0, 1)),
        ([true, false], [_, true]) => Ok((1, 0)),
        _ => {
            let mut all: Vec<Vertex> = blocks.iter().flat_map(|b| b.iter().copied()).collect();
            all.sort_unstable();
            all.dedup();
            Err(Error::AmbiguousOrientation(all))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageKind {
    Vertex,
    Edge,
    Cycle,
    ThreeConnected,
}

/// One per-3-block decomposition before augmentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub vertices: Vec<Vertex>,
    pub kind: StageKind,
    pub width: usize,
    /// Remember numbers of the 3-block's spanning tree (3-connected blocks only).
    pub er: Option<usize>,
    pub fr: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblyReport {
    pub k: usize,
    pub root: RootChoice,
    pub stages: Vec<Stage>,
    pub max_stage_width: usize,
    /// Every 3-connected stage achieved width at most 3k.
    pub stages_within_3k: bool,
    pub width: usize,
    /// Tree edges whose orientation inside a 3-block differs from the global tree.
    pub orientation_conflicts: usize,
}

struct Arena {
    bags: Vec<Vec<Vertex>>,
    parent: Vec<Option<usize>>,
    labels: Vec<BagLabel>,
    depth: Vec<usize>,
}

impl Arena {
    fn push(&mut self, bag: Vec<Vertex>, parent: Option<usize>, label: BagLabel) -> usize {
        let id = self.bags.len();
        self.depth.push(parent.map_or(0, |p| self.depth[p] + 1));
        self.bags.push(bag);
        self.parent.push(parent);
        self.labels.push(label);
        id
    }

    /// Inserts a rooted decomposition, hanging its root under `attach`.
    fn insert(&mut self, td: TreeDecomposition, attach: Option<usize>) -> Vec<usize> {
        let parent = td.parent.clone().expect("rooted stage");
        let labels = td
            .labels
            .clone()
            .unwrap_or_else(|| vec![BagLabel::new(BagKind::Block, None); td.len()]);
        let base = self.bags.len();
        // Parents before children so depths are known.
        let mut order: Vec<usize> = (0..td.len()).collect();
        order.sort_by_key(|&x| td.depth(x));
        let len = td.len();
        self.bags.extend(td.bags);
        self.parent.extend(parent.iter().map(|p| match p {
            Some(p) => Some(base + p),
            None => attach,
        }));
        self.labels.extend(labels);
        self.depth.resize(self.bags.len(), 0);
        for &x in &order {
            let id = base + x;
            self.depth[id] = self.parent[id].map_or(0, |p| self.depth[p] + 1);
        }
        (base..base + len).collect()
    }

    fn augment(&mut self, nodes: &[usize], extra: &[Vertex]) {
        for &x in nodes {
            for &v in extra {
                if let Err(pos) = self.bags[x].binary_search(&v) {
                    self.bags[x].insert(pos, v);
                }
            }
        }
    }

    /// Node among `nodes` holding all of `want` that is closest to the root, ties by id.
    fn top_holding(&self, nodes: &[usize], want: &[Vertex]) -> Option<usize> {
        nodes
            .iter()
            .copied()
            .filter(|&x| want.iter().all(|v| self.bags[x].binary_search(v).is_ok()))
            .min_by_key(|&x| (self.depth[x], x))
    }
}

/// Full decomposition with a per-stage report; `k` defaults to the number of
/// stripping layers.
pub fn assemble(g: &Graph, k: Option<usize>) -> Result<(TreeDecomposition, AssemblyReport)> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    embed(g)?;
    let k = match k {
        Some(k) => k,
        None => stripping_layers(g)?.k,
    };
    let bd = block_decomposition(g)?;
    let td3s = tutte_all(&bd)?;
    let root = root_choice(g, &bd, &td3s)?;
    let r = root.vertex;
    let emb = layered_embedding(g, OuterFacePolicy::Auto)?;
    let (t, _) = synthesize_spanning_tree(g, k, &emb)?;
    let t = root_orient(&t, r)?;
    let fi = ForestIndex::new(&t);
    let present: Vec<TutteDecomposition> = td3s.iter().flatten().cloned().collect();
    let sets = derive_spanning_sets(g, &t, &present)?;

    let mut arena = Arena {
        bags: Vec::new(),
        parent: Vec::new(),
        labels: Vec::new(),
        depth: Vec::new(),
    };
    let mut stages = Vec::new();
    let nb = bd.blocks.len();
    let root_block = bd.blocks_of(r)[0];
    let mut visited = vec![false; nb];
    visited[root_block] = true;
    // (2-block, local root, attach node)
    let mut queue: VecDeque<(usize, Vertex, Option<usize>)> = VecDeque::from([(root_block, r, None)]);
    while let Some((b, rho, attach)) = queue.pop_front() {
        let nodes = match &td3s[b] {
            None => {
                let (bag, label) = match bd.block_edges[b].first() {
                    Some(&e) => (
                        vec![e.u(), e.v()],
                        BagLabel::new(BagKind::Block, Some(Witness::Edge(e))),
                    ),
                    None => (
                        bd.blocks[b].clone(),
                        BagLabel::new(BagKind::Block, Some(Witness::Vertex(rho))),
                    ),
                };
                stages.push(Stage {
                    vertices: bd.blocks[b].clone(),
                    kind: if bag.len() == 2 {
                        StageKind::Edge
                    } else {
                        StageKind::Vertex
                    },
                    width: bag.len() - 1,
                    er: None,
                    fr: None,
                });
                vec![arena.push(bag, attach, label)]
            }
            Some(td3) => assemble_block(&mut arena, &mut stages, td3, rho, attach, &fi, &sets)?,
        };
        if b != root_block {
            arena.augment(&nodes, &[rho]);
        }
        // Cut vertices of this block lead to unvisited blocks.
        for &c in &bd.cut_vertices {
            if bd.blocks[b].binary_search(&c).is_err() {
                continue;
            }
            let children: Vec<usize> = bd.blocks_of(c).into_iter().filter(|&x| !visited[x]).collect();
            if children.is_empty() {
                continue;
            }
            let top = arena.top_holding(&nodes, &[c]).expect("block holds its cut vertex");
            let cut_node = arena.push(
                vec![c],
                Some(top),
                BagLabel::new(BagKind::Cut, Some(Witness::Vertex(c))),
            );
            for x in children {
                visited[x] = true;
                queue.push_back((x, c, Some(cut_node)));
            }
        }
    }
    let td = TreeDecomposition::from_parent(arena.bags, arena.parent, Some(arena.labels));
    let max_stage_width = stages.iter().map(|s| s.width).max().unwrap_or(0);
    let stages_within_3k = stages
        .iter()
        .filter(|s| s.kind == StageKind::ThreeConnected)
        .all(|s| s.width <= 3 * k);
    let report = AssemblyReport {
        k,
        root,
        width: td.width(),
        stages,
        max_stage_width,
        stages_within_3k,
        orientation_conflicts: sets.conflicts,
    };
    Ok((td, report))
}

/// Decomposes one 2-connected block through its Tutte decomposition and
/// returns the arena nodes it created.
fn assemble_block(
    arena: &mut Arena,
    stages: &mut Vec<Stage>,
    td3: &TutteDecomposition,
    rho: Vertex,
    attach: Option<usize>,
    fi: &ForestIndex,
    sets: &crate::tutte::SpanningSets,
) -> Result<Vec<usize>> {
    let nb = td3.blocks.len();
    let start = (0..nb)
        .find(|&j| td3.blocks[j].vertices.binary_search(&rho).is_ok())
        .expect("local root lies in a 3-block");
    let mut all_nodes = Vec::new();
    let mut seen = vec![false; nb];
    seen[start] = true;
    // (3-block, parent cut pair, attach node)
    let mut queue: VecDeque<(usize, Option<Edge>, Option<usize>, usize)> =
        VecDeque::from([(start, None, attach, usize::MAX)]);
    while let Some((j, cut, at, from_cut)) = queue.pop_front() {
        let block = &td3.blocks[j];
        let h = three_block_graph(td3, j)?;
        let local_root = *block
            .vertices
            .iter()
            .min_by_key(|&&v| (fi.depth(v), v))
            .expect("nonempty block");
        let (mut theta, stage) = match block.kind {
            BlockKind::Cycle => {
                let first = match cut {
                    Some(p) if p.contains(local_root) => p.other(local_root),
                    _ => h.neighbors(local_root)[0],
                };
                let td = cycle_block_td(&h, local_root, first)?;
                let w = td.width();
                (
                    td,
                    Stage {
                        vertices: block.vertices.clone(),
                        kind: StageKind::Cycle,
                        width: w,
                        er: None,
                        fr: None,
                    },
                )
            }
            BlockKind::ThreeConnected => {
                let bt = sets
                    .block(&block.vertices)
                    .expect("spanning tree per 3-connected block");
                let tree = SpanningForest::from_edges(&h, &bt.tree_edges)?;
                let emb = layered_embedding(&h, OuterFacePolicy::Auto)?;
                let rep = remember_report(&h, &tree, Some(&emb));
                let td = td_3connected_kop_with_tree(&h, &tree, bt.root, &emb)?;
                let w = td.width();
                (
                    td,
                    Stage {
                        vertices: block.vertices.clone(),
                        kind: StageKind::ThreeConnected,
                        width: w,
                        er: Some(rep.er),
                        fr: rep.fr,
                    },
                )
            }
        };
        stages.push(stage);
        if let Some(p) = cut {
            let extra = [p.u(), p.v()];
            for bag in theta.bags.iter_mut() {
                for v in extra {
                    if let Err(pos) = bag.binary_search(&v) {
                        bag.insert(pos, v);
                    }
                }
            }
        }
        let nodes = arena.insert(theta, at);
        all_nodes.extend(nodes.iter().copied());
        for c in td3.block_cuts(j) {
            if c == from_cut {
                continue;
            }
            let pair = td3.cuts[c];
            let next: Vec<usize> = td3.cut_neighbors(c).into_iter().filter(|&x| !seen[x]).collect();
            if next.is_empty() {
                continue;
            }
            let top = arena
                .top_holding(&nodes, &[pair.u(), pair.v()])
                .expect("3-block decomposition covers its cut edge");
            let cut_node = arena.push(
                vec![pair.u(), pair.v()],
                Some(top),
                BagLabel::new(BagKind::Cut, Some(Witness::Edge(pair))),
            );
            all_nodes.push(cut_node);
            for x in next {
                seen[x] = true;
                queue.push_back((x, Some(pair), Some(cut_node), c));
            }
        }
    }
    Ok(all_nodes)
}

/// Rooted tree decomposition of a connected planar graph built from its
/// blocks, 2-cuts and 3-blocks.
pub fn full_td(g: &Graph, k: Option<usize>) -> Result<TreeDecomposition> {
    assemble(g, k).map(|(td, _)| td)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::*;
    use crate::graph::spanning_forest;
    use crate::treedec::validate;

    #[test]
    fn root_examples() {
        assert_eq!(choose_root(&complete_graph(4)).unwrap(), 1);
        assert_eq!(choose_root(&theta_graph()).unwrap(), 2);
        assert_eq!(choose_root(&path_graph(3)).unwrap(), 1);
        // Only the two hubs of K2,3 lie in its 2-cut.
        let c = choose_root_report(&complete_bipartite(2, 3)).unwrap();
        assert!(c.cut_free);
        assert_eq!(c.vertex, 3);
    }

    #[test]
    fn cycle_examples() {
        let c5 = cycle_graph(5);
        let td = cycle_block_td(&c5, 1, 2).unwrap();
        assert_eq!(td.bags, vec![vec![1, 2, 3], vec![1, 3, 4], vec![1, 4, 5]]);
        assert_eq!(td.parent, Some(vec![None, Some(0), Some(1)]));
        assert!(validate(&c5, &td).valid);
        assert_eq!(td.width(), 2);
        let k3 = cycle_graph(3);
        assert_eq!(cycle_block_td(&k3, 1, 2).unwrap().bags, vec![vec![1, 2, 3]]);
        let c4 = cycle_graph(4);
        let a = cycle_block_td(&c4, 1, 2).unwrap();
        let b = cycle_block_td(&c4, 1, 4).unwrap();
        let mut x = a.bags.clone();
        let mut y = b.bags.clone();
        x.sort();
        y.sort();
        assert_eq!(x, y);
        assert_eq!(a.bags[0], b.bags[1]);
        assert_eq!(cycle_block_td(&c4, 9, 2).unwrap_err(), Error::RootNotOnCycle(9));
    }

    #[test]
    fn orientation_examples() {
        let h = double_k4();
        // Root 3 lies in the K4 on {1,2,3,4}.
        let t = root_orient(&spanning_forest(&h, None), 3).unwrap();
        let a = [1, 2, 3, 4];
        let b = [1, 2, 5, 6];
        assert_eq!(orient_cut_block(&h, &t, Edge::new(1, 2), [&a, &b]).unwrap(), (0, 1));
        assert_eq!(orient_cut_block(&h, &t, Edge::new(1, 2), [&b, &a]).unwrap(), (1, 0));
        let th = theta_graph();
        let t = root_orient(&spanning_forest(&th, None), 2).unwrap();
        let (p, _) = orient_cut_block(&th, &t, Edge::new(1, 4), [&[1, 2, 3, 4], &[1, 4, 5, 6]]).unwrap();
        assert_eq!(p, 0);
    }

    fn check(g: &Graph, k: usize) -> AssemblyReport {
        let (td, rep) = assemble(g, Some(k)).unwrap();
        let v = validate(g, &td);
        assert!(v.valid, "{:?} {:?}", g.edges(), v.violations);
        assert_eq!(td.roots().len(), 1);
        assert!(td.width() <= rep.max_stage_width + 3);
        if rep.stages_within_3k {
            assert!(td.width() <= 3 * k + 3);
        }
        rep
    }

    #[test]
    fn full_examples() {
        let rep = check(&cycle_graph(5), 1);
        assert_eq!(rep.width, 2);
        check(&theta_graph(), 1);
        // Two K4s on a 2-cut plus a pendant edge.
        let mut es: Vec<(Vertex, Vertex)> = double_k4().edges().iter().map(|e| (e.u(), e.v())).collect();
        es.push((6, 7));
        let h = Graph::from_edges(es).unwrap();
        let rep = check(&h, 2);
        assert!(rep.width <= 9);
        check(&complete_graph(4), 2);
        check(&path_graph(4), 1);
        check(&Graph::new([1], Vec::<(u32, u32)>::new()).unwrap(), 1);
        check(&cube_graph(), 2);
    }

    #[test]
    fn generated_instances() {
        for seed in 0..20 {
            for k in 1..=3 {
                let n = 3 * k + 4;
                let inst = generate(n, k, seed).unwrap();
                check(&inst.graph, k);
            }
        }
    }
}
