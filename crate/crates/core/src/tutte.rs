//! Block decomposition and Tutte decomposition into 2-cuts and 3-blocks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{biconnected_components, is_l_connected, Edge, Graph, SpanningForest, Vertex};
use crate::minor::has_k4_minor;
use crate::planarity::{best_layering, embed, is_outerplanar, OuterFacePolicy};
use crate::treedec::{validate, BagKind, BagLabel, TreeDecomposition, Witness};

/// Blocks (maximal 2-connected subgraphs and bridges) linked through cut vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    /// Sorted vertex set per block.
    pub blocks: Vec<Vec<Vertex>>,
    /// Sorted edges per block.
    pub block_edges: Vec<Vec<Edge>>,
    pub cut_vertices: Vec<Vertex>,
    /// Tree edges as (cut vertex index, block index).
    pub tree: Vec<(usize, usize)>,
}

impl BlockDecomposition {
    pub fn is_edge_block(&self, i: usize) -> bool {
        self.block_edges[i].len() == 1
    }

    /// Indices of the single-edge blocks.
    pub fn edge_blocks(&self) -> Vec<usize> {
        (0..self.blocks.len()).filter(|&i| self.is_edge_block(i)).collect()
    }

    pub fn block_graph(&self, i: usize) -> Graph {
        Graph::from_sorted(self.blocks[i].clone(), self.block_edges[i].clone())
    }

    /// Blocks containing `v`.
    pub fn blocks_of(&self, v: Vertex) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&i| self.blocks[i].binary_search(&v).is_ok())
            .collect()
    }
}

pub fn block_decomposition(g: &Graph) -> Result<BlockDecomposition> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let (comps, cut_vertices) = biconnected_components(g);
    let mut pairs: Vec<(Vec<Vertex>, Vec<Edge>)> = comps
        .into_iter()
        .map(|es| {
            let mut vs: Vec<Vertex> = es.iter().flat_map(|e| [e.u(), e.v()]).collect();
            vs.sort_unstable();
            vs.dedup();
            (vs, es)
        })
        .collect();
    if pairs.is_empty() {
        pairs.extend(g.vertices().iter().map(|&v| (vec![v], Vec::new())));
    }
    pairs.sort();
    let (blocks, block_edges): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let mut tree = Vec::new();
    for (c, &v) in cut_vertices.iter().enumerate() {
        for (b, vs) in blocks.iter().enumerate() {
            if vs.binary_search(&v).is_ok() {
                tree.push((c, b));
            }
        }
    }
    Ok(BlockDecomposition {
        blocks,
        block_edges,
        cut_vertices,
        tree,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    Cycle,
    ThreeConnected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeBlock {
    pub vertices: Vec<Vertex>,
    pub kind: BlockKind,
    /// Pairs of incident cuts that are not edges of the host.
    pub virtual_edges: Vec<Edge>,
}

/// 2-cuts and 3-blocks of a 2-connected graph, joined in a bipartite tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TutteDecomposition {
    pub host: Graph,
    pub blocks: Vec<ThreeBlock>,
    /// Cut pairs; the same pair repeats when more than two 3-blocks share it.
    pub cuts: Vec<Edge>,
    /// Tree edges as (cut index, block index).
    pub tree: Vec<(usize, usize)>,
}

impl TutteDecomposition {
    /// Block indices adjacent to cut `c`.
    pub fn cut_neighbors(&self, c: usize) -> Vec<usize> {
        self.tree.iter().filter(|&&(x, _)| x == c).map(|&(_, b)| b).collect()
    }

    /// Cut indices adjacent to block `b`.
    pub fn block_cuts(&self, b: usize) -> Vec<usize> {
        self.tree.iter().filter(|&&(_, y)| y == b).map(|&(c, _)| c).collect()
    }

    /// All virtual edges, deduplicated.
    pub fn virtual_edges(&self) -> Vec<Edge> {
        let set: BTreeSet<Edge> = self
            .blocks
            .iter()
            .flat_map(|b| b.virtual_edges.iter().copied())
            .collect();
        set.into_iter().collect()
    }

    /// Host graph plus all virtual edges.
    pub fn augmented_host(&self) -> Graph {
        self.host
            .with_extra_edges(&self.virtual_edges())
            .expect("virtual edges join host vertices")
    }

    /// As a tree decomposition: block bags first, then cut bags.
    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let nb = self.blocks.len();
        let mut bags: Vec<Vec<Vertex>> = self.blocks.iter().map(|b| b.vertices.clone()).collect();
        bags.extend(self.cuts.iter().map(|c| vec![c.u(), c.v()]));
        let edges = self.tree.iter().map(|&(c, b)| (b, nb + c)).collect();
        let mut td = TreeDecomposition::from_edges(bags, edges);
        let mut labels: Vec<BagLabel> = self
            .blocks
            .iter()
            .map(|_| BagLabel::new(BagKind::Block, None))
            .collect();
        labels.extend(
            self.cuts
                .iter()
                .map(|&c| BagLabel::new(BagKind::Cut, Some(Witness::Edge(c)))),
        );
        td.labels = Some(labels);
        td
    }

    pub fn adhesion(&self) -> usize {
        if self.cuts.is_empty() {
            0
        } else {
            self.to_tree_decomposition().adhesion()
        }
    }
}

/// A piece during splitting: a 2-connected graph whose virtual edges link to cut nodes.
#[derive(Clone, Debug)]
struct Piece {
    vertices: Vec<Vertex>,
    edges: BTreeSet<Edge>,
    /// (pair, cut node id)
    links: Vec<(Edge, usize)>,
}

impl Piece {
    fn graph(&self) -> Graph {
        Graph::from_sorted(self.vertices.clone(), self.edges.iter().copied().collect())
    }
}

fn first_two_cut(h: &Graph) -> Option<(Vertex, Vertex)> {
    let vs = h.vertices();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            if !h.connected_avoiding(&[vs[i], vs[j]]) {
                return Some((vs[i], vs[j]));
            }
        }
    }
    None
}

fn components_avoiding(h: &Graph, x: Vertex, y: Vertex) -> Vec<Vec<Vertex>> {
    h.without(&[x, y]).components()
}

/// Splits `b` along 2-cuts into cycles and 3-connected graphs, then merges
/// adjacent cycles across cuts that are not host edges and joins cut nodes
/// with equal pairs. Cuts shared by more than two 3-blocks become a chain of
/// equal cut bags.
pub fn tutte_decomposition(b: &Graph) -> Result<TutteDecomposition> {
    if b.n() < 3 || !b.is_connected() || !is_l_connected(b, 2)? {
        return Err(Error::NotTwoConnected);
    }
    let mut cut_pairs: Vec<Edge> = Vec::new();
    let mut leaves: Vec<Piece> = Vec::new();
    let mut work = vec![Piece {
        vertices: b.vertices().to_vec(),
        edges: b.edges().iter().copied().collect(),
        links: Vec::new(),
    }];
    while let Some(p) = work.pop() {
        let h = p.graph();
        if h.is_cycle() {
            leaves.push(p);
            continue;
        }
        let Some((x, y)) = first_two_cut(&h) else {
            leaves.push(p);
            continue;
        };
        let pair = Edge::new(x, y);
        let cid = cut_pairs.len();
        cut_pairs.push(pair);
        let mut parts: Vec<Piece> = components_avoiding(&h, x, y)
            .into_iter()
            .map(|comp| {
                let mut vs = comp;
                vs.push(x);
                vs.push(y);
                vs.sort_unstable();
                let edges: BTreeSet<Edge> = p
                    .edges
                    .iter()
                    .copied()
                    .filter(|e| vs.binary_search(&e.u()).is_ok() && vs.binary_search(&e.v()).is_ok())
                    .chain(std::iter::once(pair))
                    .collect();
                Piece {
                    vertices: vs,
                    edges,
                    links: vec![(pair, cid)],
                }
            })
            .collect();
        for &(e, c) in &p.links {
            // A link on the split pair itself goes to the first part; the
            // cut nodes are joined later.
            let target = parts
                .iter()
                .position(|q| {
                    q.vertices.binary_search(&e.u()).is_ok()
                        && q.vertices.binary_search(&e.v()).is_ok()
                        && (e == pair || !q.links.iter().any(|&(f, _)| f == e))
                })
                .expect("link endpoints lie in some part");
            parts[target].links.push((e, c));
        }
        work.extend(parts.into_iter().rev());
    }

    // Cut node -> set of leaf ids.
    let mut cut_nodes: Vec<Option<(Edge, BTreeSet<usize>)>> =
        cut_pairs.iter().map(|&e| Some((e, BTreeSet::new()))).collect();
    for (i, leaf) in leaves.iter().enumerate() {
        for &(_, c) in &leaf.links {
            cut_nodes[c].as_mut().unwrap().1.insert(i);
        }
    }
    let mut alive: Vec<bool> = vec![true; leaves.len()];
    loop {
        let mut changed = false;
        // Join cut nodes with equal pairs that share a leaf.
        for a in 0..cut_nodes.len() {
            for c in a + 1..cut_nodes.len() {
                let join = match (&cut_nodes[a], &cut_nodes[c]) {
                    (Some((ea, na)), Some((ec, nc))) => ea == ec && !na.is_disjoint(nc),
                    _ => false,
                };
                if join {
                    let (_, nc) = cut_nodes[c].take().unwrap();
                    cut_nodes[a].as_mut().unwrap().1.extend(nc);
                    for leaf in leaves.iter_mut() {
                        for l in leaf.links.iter_mut() {
                            if l.1 == c {
                                l.1 = a;
                            }
                        }
                        leaf.links.dedup();
                    }
                    changed = true;
                }
            }
        }
        // Merge two cycles across a cut that is not a host edge.
        for c in 0..cut_nodes.len() {
            let Some((pair, nbrs)) = &cut_nodes[c] else { continue };
            if nbrs.len() != 2 || b.contains_edge(*pair) {
                continue;
            }
            let v: Vec<usize> = nbrs.iter().copied().collect();
            let (i, j) = (v[0], v[1]);
            if !(leaves[i].graph().is_cycle() && leaves[j].graph().is_cycle()) {
                continue;
            }
            let pair = *pair;
            let other = leaves[j].clone();
            let li = &mut leaves[i];
            li.vertices.extend(other.vertices);
            li.vertices.sort_unstable();
            li.vertices.dedup();
            li.edges.extend(other.edges);
            li.edges.remove(&pair);
            li.links.extend(other.links);
            li.links.retain(|&(_, x)| x != c);
            alive[j] = false;
            cut_nodes[c] = None;
            for node in cut_nodes.iter_mut().flatten() {
                if node.1.remove(&j) {
                    node.1.insert(i);
                }
            }
            changed = true;
            break;
        }
        if !changed {
            break;
        }
    }

    let mut order: Vec<usize> = (0..leaves.len()).filter(|&i| alive[i]).collect();
    order.sort_by(|&a, &b| leaves[a].vertices.cmp(&leaves[b].vertices));
    let new_id: BTreeMap<usize, usize> = order.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let blocks: Vec<ThreeBlock> = order
        .iter()
        .map(|&i| {
            let leaf = &leaves[i];
            let kind = if leaf.graph().is_cycle() {
                BlockKind::Cycle
            } else {
                BlockKind::ThreeConnected
            };
            let mut virtual_edges: Vec<Edge> = leaf
                .links
                .iter()
                .map(|&(e, _)| e)
                .filter(|&e| !b.contains_edge(e))
                .collect();
            virtual_edges.sort_unstable();
            virtual_edges.dedup();
            ThreeBlock {
                vertices: leaf.vertices.clone(),
                kind,
                virtual_edges,
            }
        })
        .collect();
    let mut chains: Vec<(Edge, Vec<usize>)> = cut_nodes
        .into_iter()
        .flatten()
        .map(|(e, ns)| {
            let mut v: Vec<usize> = ns.into_iter().map(|i| new_id[&i]).collect();
            v.sort_unstable();
            (e, v)
        })
        .collect();
    chains.sort();
    let mut cuts = Vec::new();
    let mut tree = Vec::new();
    for (pair, ns) in chains {
        for w in ns.windows(2) {
            let c = cuts.len();
            cuts.push(pair);
            tree.push((c, w[0]));
            tree.push((c, w[1]));
        }
    }
    Ok(TutteDecomposition {
        host: b.clone(),
        blocks,
        cuts,
        tree,
    })
}

/// The 3-block graph: induced subgraph of the host plus an edge for every incident cut.
pub fn three_block_graph(td3: &TutteDecomposition, bag: usize) -> Result<Graph> {
    let block = td3.blocks.get(bag).ok_or(Error::UnknownBag(bag))?;
    let h = td3.host.induced(&block.vertices)?;
    let extra: Vec<Edge> = td3
        .block_cuts(bag)
        .into_iter()
        .map(|c| td3.cuts[c])
        .filter(|&e| !h.contains_edge(e))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    h.with_extra_edges(&extra)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TutteAxiom {
    /// Cut bags are 2-cuts and block bags are 3-blocks.
    BagType,
    /// Every tree edge joins one cut bag and one block bag.
    Bipartite,
    /// Every cut bag has exactly two block neighbours.
    CutDegree,
    /// Block bags containing a cut pair meet the bags of that pair.
    CutAdjacency,
    /// The blocks and cuts form a tree decomposition of the augmented host.
    Decomposition,
    Adhesion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TutteViolation {
    pub axiom: TutteAxiom,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TutteReport {
    pub valid: bool,
    pub adhesion: usize,
    pub violations: Vec<TutteViolation>,
}

/// Checks the Tutte decomposition axioms. When a pair is shared by more than
/// two 3-blocks the cut bags of that pair form a chain, and the adjacency
/// axiom is checked in the weaker form: every block bag containing the pair is
/// adjacent to a cut bag of that pair, and those bags form a subtree.
pub fn validate_tutte(b: &Graph, td3: &TutteDecomposition) -> TutteReport {
    let mut violations = Vec::new();
    let mut push = |axiom: TutteAxiom, witness: String| violations.push(TutteViolation { axiom, witness });
    let nb = td3.blocks.len();
    let nc = td3.cuts.len();

    for (c, &pair) in td3.cuts.iter().enumerate() {
        if !b.contains_vertex(pair.u()) || !b.contains_vertex(pair.v()) || b.connected_avoiding(&[pair.u(), pair.v()]) {
            push(TutteAxiom::BagType, format!("cut bag {c} = {pair} is not a 2-cut"));
        }
    }
    for i in 0..nb {
        match three_block_graph(td3, i) {
            Ok(h) => {
                let ok = match td3.blocks[i].kind {
                    BlockKind::Cycle => h.is_cycle(),
                    BlockKind::ThreeConnected => h.n() >= 4 && is_l_connected(&h, 3).unwrap_or(false),
                };
                if !ok {
                    push(
                        TutteAxiom::BagType,
                        format!("block bag {i} is not a {:?} 3-block", td3.blocks[i].kind),
                    );
                }
            }
            Err(e) => push(TutteAxiom::BagType, format!("block bag {i}: {e}")),
        }
    }
    for &(c, bl) in &td3.tree {
        if c >= nc || bl >= nb {
            push(TutteAxiom::Bipartite, format!("tree edge ({c},{bl}) is not cut-block"));
        }
    }
    for c in 0..nc {
        let d = td3.cut_neighbors(c).len();
        if d != 2 {
            push(TutteAxiom::CutDegree, format!("cut bag {c} has {d} block neighbours"));
        }
    }
    let pairs: BTreeSet<Edge> = td3.cuts.iter().copied().collect();
    for &pair in &pairs {
        let cut_ids: Vec<usize> = (0..nc).filter(|&c| td3.cuts[c] == pair).collect();
        let holders: Vec<usize> = (0..nb)
            .filter(|&i| {
                let vs = &td3.blocks[i].vertices;
                vs.binary_search(&pair.u()).is_ok() && vs.binary_search(&pair.v()).is_ok()
            })
            .collect();
        for &i in &holders {
            let adjacent = td3.tree.iter().any(|&(c, bl)| bl == i && cut_ids.contains(&c));
            if !adjacent {
                push(
                    TutteAxiom::CutAdjacency,
                    format!("block bag {i} contains {pair} but no cut bag of it is adjacent"),
                );
            }
        }
        // Cut bags of the pair plus their holders must be connected.
        let members = cut_ids.len() + holders.len();
        let links = td3
            .tree
            .iter()
            .filter(|&&(c, bl)| cut_ids.contains(&c) && holders.contains(&bl))
            .count();
        if links + 1 != members {
            push(
                TutteAxiom::CutAdjacency,
                format!("bags of {pair} do not form a subtree"),
            );
        }
    }
    let td = td3.to_tree_decomposition();
    let report = validate(&td3.augmented_host(), &td);
    for v in report.violations {
        push(TutteAxiom::Decomposition, format!("{:?}: {}", v.axiom, v.witness));
    }
    let adhesion = td3.adhesion();
    if nc > 0 && adhesion != 2 {
        push(TutteAxiom::Adhesion, format!("adhesion {adhesion}"));
    }
    TutteReport {
        valid: violations.is_empty(),
        adhesion,
        violations,
    }
}

/// Graph classes whose preservation by 3-blocks can be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassProperty {
    /// Outerplanarity index at most k, minimised over outer faces.
    OuterplanarityIndex(usize),
    Planar,
    K4MinorFree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockMeasure {
    pub vertices: Vec<Vertex>,
    pub kind: BlockKind,
    /// Outerplanarity index for the index property, else 1 when the property holds.
    pub value: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub host_holds: bool,
    pub blocks: Vec<BlockMeasure>,
    pub all_hold: bool,
}

/// Outerplanarity index of a planar graph: the largest over its components.
///
/// Index 1 is decided exactly. Larger values come from the computed embedding
/// of each component, minimised over all outer faces, so they are exact for
/// 3-connected components (unique embedding) and an upper bound otherwise.
pub fn outerplanarity_index(g: &Graph) -> Result<usize> {
    if g.n() == 0 {
        return Ok(0);
    }
    embed(g)?;
    if is_outerplanar(g) {
        return Ok(1);
    }
    let mut k = 1;
    for comp in g.components() {
        let h = g.induced(&comp)?;
        if !is_outerplanar(&h) {
            let emb = embed(&h)?;
            k = k.max(best_layering(&emb, OuterFacePolicy::Exhaustive).1.k.max(2));
        }
    }
    Ok(k)
}

fn measure(g: &Graph, property: ClassProperty) -> (usize, bool) {
    match property {
        ClassProperty::OuterplanarityIndex(k) => match outerplanarity_index(g) {
            Ok(i) => (i, i <= k),
            Err(_) => (usize::MAX, false),
        },
        ClassProperty::Planar => {
            let ok = embed(g).is_ok();
            (ok as usize, ok)
        }
        ClassProperty::K4MinorFree => {
            let ok = !has_k4_minor(g);
            (ok as usize, ok)
        }
    }
}

/// Measures `property` on every 3-block graph of every block of `g`. Cycle
/// blocks are listed too.
pub fn check_3block_class_preservation(g: &Graph, property: ClassProperty) -> Result<ClassReport> {
    let host_holds = measure(g, property).1;
    let bd = block_decomposition(g)?;
    let mut blocks = Vec::new();
    for i in 0..bd.blocks.len() {
        if bd.blocks[i].len() < 3 {
            continue;
        }
        let td3 = tutte_decomposition(&bd.block_graph(i))?;
        for j in 0..td3.blocks.len() {
            let h = three_block_graph(&td3, j)?;
            let (value, holds) = measure(&h, property);
            blocks.push(BlockMeasure {
                vertices: td3.blocks[j].vertices.clone(),
                kind: td3.blocks[j].kind,
                value,
                holds,
            });
        }
    }
    let all_hold = blocks.iter().all(|b| b.holds);
    Ok(ClassReport {
        host_holds,
        blocks,
        all_hold,
    })
}

/// Spanning trees of the 3-connected 3-blocks carved from one rooted spanning
/// tree of the host.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningSets {
    /// Global tree edges plus the added cut edges.
    pub s_edges: Vec<Edge>,
    /// Added cut edges, oriented away from the block root.
    pub added: Vec<(Vertex, Vertex)>,
    /// Per 3-connected 3-block (by vertex set): root and spanning tree edges.
    pub blocks: Vec<BlockTree>,
    /// Tree edges whose orientation inside some block differs from the global one.
    pub conflicts: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockTree {
    pub vertices: Vec<Vertex>,
    pub root: Vertex,
    pub tree_edges: Vec<Edge>,
}

impl SpanningSets {
    pub fn roots(&self) -> Vec<Vertex> {
        let set: BTreeSet<Vertex> = self.blocks.iter().map(|b| b.root).collect();
        set.into_iter().collect()
    }

    pub fn block(&self, vertices: &[Vertex]) -> Option<&BlockTree> {
        self.blocks.iter().find(|b| b.vertices == vertices)
    }
}

fn depths(t: &SpanningForest) -> Result<BTreeMap<Vertex, usize>> {
    let parent = t.parent_map().ok_or(Error::NotRooted)?;
    let mut depth = BTreeMap::new();
    for &v in t.vertices() {
        let mut d = 0;
        let mut x = v;
        while let Some(&p) = parent.get(&x) {
            x = p;
            d += 1;
        }
        depth.insert(v, d);
    }
    Ok(depth)
}

/// For each 3-connected 3-block: keep the global tree edges inside it, join the
/// remaining pieces with incident cut edges, and root it at its vertex closest
/// to the global root (ties to the smaller id).
pub fn derive_spanning_sets(
    g: &Graph,
    global_tree: &SpanningForest,
    td3s: &[TutteDecomposition],
) -> Result<SpanningSets> {
    if !global_tree.is_rooted() {
        return Err(Error::NotRooted);
    }
    let depth = depths(global_tree)?;
    let parent = global_tree.parent_map().ok_or(Error::NotRooted)?;
    let mut s_edges: BTreeSet<Edge> = global_tree.tree_edges().iter().copied().collect();
    let mut added = Vec::new();
    let mut blocks = Vec::new();
    let mut conflicts = 0;
    for td3 in td3s {
        for (j, block) in td3.blocks.iter().enumerate() {
            if block.kind != BlockKind::ThreeConnected {
                continue;
            }
            let h = three_block_graph(td3, j)?;
            let root = *block
                .vertices
                .iter()
                .min_by_key(|&&v| (depth[&v], v))
                .expect("nonempty block");
            let inside: Vec<Edge> = global_tree
                .tree_edges()
                .iter()
                .copied()
                .filter(|&e| h.contains_edge(e) && g.contains_edge(e))
                .collect();
            // Grow from the root: tree edges first, then cut edges entering a
            // piece at its top vertex, then any joining cut edge.
            let mut cut_edges: Vec<Edge> = td3.block_cuts(j).into_iter().map(|c| td3.cuts[c]).collect();
            cut_edges.sort_unstable();
            cut_edges.dedup();
            let mut reached: BTreeSet<Vertex> = BTreeSet::from([root]);
            let mut chosen: Vec<Edge> = Vec::new();
            let mut local_parent: BTreeMap<Vertex, Vertex> = BTreeMap::new();
            let grow = |reached: &mut BTreeSet<Vertex>,
                        local_parent: &mut BTreeMap<Vertex, Vertex>,
                        chosen: &mut Vec<Edge>| loop {
                let next = inside
                    .iter()
                    .copied()
                    .find(|e| reached.contains(&e.u()) != reached.contains(&e.v()));
                let Some(e) = next else { break };
                let (a, b) = if reached.contains(&e.u()) {
                    (e.u(), e.v())
                } else {
                    (e.v(), e.u())
                };
                reached.insert(b);
                local_parent.insert(b, a);
                chosen.push(e);
            };
            grow(&mut reached, &mut local_parent, &mut chosen);
            while reached.len() < h.n() {
                let crossing: Vec<(Vertex, Vertex)> = cut_edges
                    .iter()
                    .filter(|e| reached.contains(&e.u()) != reached.contains(&e.v()))
                    .map(|e| {
                        if reached.contains(&e.u()) {
                            (e.u(), e.v())
                        } else {
                            (e.v(), e.u())
                        }
                    })
                    .collect();
                // Prefer entering a piece at its vertex closest to the global root.
                let top_entry = crossing.iter().copied().find(|&(_, b)| {
                    parent
                        .get(&b)
                        .is_none_or(|p| !h.contains_vertex(*p) || !inside.contains(&Edge::new(*p, b)))
                });
                let Some((a, b)) = top_entry.or(crossing.first().copied()) else {
                    return Err(Error::NotAForest(format!(
                        "cut edges do not connect the tree pieces of block {:?}",
                        block.vertices
                    )));
                };
                reached.insert(b);
                local_parent.insert(b, a);
                let e = Edge::new(a, b);
                chosen.push(e);
                if !g.contains_edge(e) || !s_edges.contains(&e) {
                    added.push((a, b));
                    s_edges.insert(e);
                }
                grow(&mut reached, &mut local_parent, &mut chosen);
            }
            for e in &inside {
                let global_child = if parent.get(&e.v()) == Some(&e.u()) {
                    e.v()
                } else {
                    e.u()
                };
                if local_parent.get(&global_child) != Some(&e.other(global_child)) {
                    conflicts += 1;
                }
            }
            chosen.sort_unstable();
            blocks.push(BlockTree {
                vertices: block.vertices.clone(),
                root,
                tree_edges: chosen,
            });
        }
    }
    added.sort_unstable();
    added.dedup();
    Ok(SpanningSets {
        s_edges: s_edges.into_iter().collect(),
        added,
        blocks,
        conflicts,
    })
}
