//! Tree decompositions: data model, validator, and three constructions from a
//! spanning tree.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_l_connected, root_orient, Edge, FundamentalCycles, Graph, SpanningForest, Vertex};
use crate::planarity::{layered_embedding, OuterFacePolicy, PlanarEmbedding};
use crate::remember::synthesize_spanning_tree;

/// Role of a bag in the construction that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BagKind {
    /// Bag of a tree edge.
    Sigma,
    /// Bag of an incident edge at its head (larger endpoint).
    SigmaH,
    /// Bag of an incident edge at its tail (smaller endpoint).
    SigmaT,
    Cut,
    Block,
    Cyc,
    VertexBag,
    EdgeBag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Vertex(Vertex),
    Edge(Edge),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Vertex(v) => write!(f, "{v}"),
            Witness::Edge(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BagLabel {
    pub witness: Option<Witness>,
    pub kind: BagKind,
}

impl BagLabel {
    pub fn new(kind: BagKind, witness: Option<Witness>) -> Self {
        BagLabel { witness, kind }
    }
}

/// Bags on a tree. Node ids are indices into `bags`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TreeDecomposition {
    /// Sorted vertex set per node.
    pub bags: Vec<Vec<Vertex>>,
    /// Tree edges as (smaller id, larger id), sorted.
    pub edges: Vec<(usize, usize)>,
    pub parent: Option<Vec<Option<usize>>>,
    pub labels: Option<Vec<BagLabel>>,
}

impl TreeDecomposition {
    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Decomposition oriented by a parent map; tree edges are derived from it.
    pub fn from_parent(bags: Vec<Vec<Vertex>>, parent: Vec<Option<usize>>, labels: Option<Vec<BagLabel>>) -> Self {
        let mut edges: Vec<(usize, usize)> = parent
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|p| (c.min(p), c.max(p))))
            .collect();
        edges.sort_unstable();
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition {
            bags,
            edges,
            parent: Some(parent),
            labels,
        }
    }

    /// Unrooted decomposition.
    pub fn from_edges(bags: Vec<Vec<Vertex>>, edges: Vec<(usize, usize)>) -> Self {
        let mut edges: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition {
            bags,
            edges,
            parent: None,
            labels: None,
        }
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn adhesion(&self) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| intersection_size(&self.bags[a], &self.bags[b]))
            .max()
            .unwrap_or(0)
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for &(a, b) in &self.edges {
            if a < self.len() && b < self.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors().iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Nodes without a parent.
    pub fn roots(&self) -> Vec<usize> {
        match &self.parent {
            Some(p) => (0..p.len()).filter(|&i| p[i].is_none()).collect(),
            None => Vec::new(),
        }
    }

    pub fn root(&self) -> Option<usize> {
        match self.roots().as_slice() {
            [r] => Some(*r),
            _ => None,
        }
    }

    /// Orients the tree away from `r`.
    pub fn rooted_at(mut self, r: usize) -> Self {
        let adj = self.neighbors();
        let mut parent = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        if r < self.len() {
            seen[r] = true;
            let mut queue = VecDeque::from([r]);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        parent[y] = Some(x);
                        queue.push_back(y);
                    }
                }
            }
        }
        self.parent = Some(parent);
        self
    }

    /// Number of parent links from `x` up to its root.
    pub fn depth(&self, mut x: usize) -> usize {
        let mut d = 0;
        if let Some(p) = &self.parent {
            while let Some(q) = p[x] {
                x = q;
                d += 1;
                if d > p.len() {
                    break;
                }
            }
        }
        d
    }

    pub fn label(&self, x: usize) -> Option<BagLabel> {
        self.labels.as_ref().and_then(|l| l.get(x).copied())
    }
}

/// Adds every vertex to each bag on the smallest subtree joining the bags that
/// already hold it, so the connectivity axiom holds. Returns how many vertex
/// insertions were needed.
pub fn connect_subtrees(td: &mut TreeDecomposition) -> usize {
    let nn = td.len();
    if nn == 0 {
        return 0;
    }
    let adj = td.neighbors();
    let start = td.root().unwrap_or(0);
    // BFS order and parent pointers of the node tree.
    let mut order = vec![start];
    let mut up = vec![usize::MAX; nn];
    let mut seen = vec![false; nn];
    seen[start] = true;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                up[y] = x;
                order.push(y);
            }
        }
    }
    let mut holders: std::collections::BTreeMap<Vertex, Vec<usize>> = std::collections::BTreeMap::new();
    for (x, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            holders.entry(v).or_default().push(x);
        }
    }
    let mut added = 0;
    let mut count = vec![0usize; nn];
    for (v, nodes) in holders {
        if nodes.len() < 2 {
            continue;
        }
        count.iter_mut().for_each(|c| *c = 0);
        for &x in &nodes {
            count[x] = 1;
        }
        for &x in order.iter().rev() {
            if up[x] != usize::MAX {
                count[up[x]] += count[x];
            }
        }
        let total = nodes.len();
        // The deepest node whose subtree holds every occurrence is the top.
        let top = order
            .iter()
            .rev()
            .copied()
            .find(|&x| count[x] == total)
            .unwrap_or(start);
        for &x in &order {
            if count[x] > 0 && (count[x] < total || x == top) {
                if let Err(pos) = td.bags[x].binary_search(&v) {
                    td.bags[x].insert(pos, v);
                    added += 1;
                }
            }
        }
    }
    added
}

fn intersection_size(a: &[Vertex], b: &[Vertex]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Which condition a violation breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// Node set and edges form a tree.
    Tree,
    /// Bags only mention host vertices.
    BagVertex,
    /// Every vertex lies in some bag.
    VertexCover,
    /// Every edge lies in some bag.
    EdgeCover,
    /// The bags containing a vertex form a subtree.
    Connectivity,
    /// The parent map orients the tree edges from one root.
    Parent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub width: usize,
    pub adhesion: usize,
    pub violations: Vec<Violation>,
}

/// Checks the tree-decomposition axioms of `td` against `g`.
pub fn validate(g: &Graph, td: &TreeDecomposition) -> ValidationReport {
    let mut violations = Vec::new();
    let mut push = |axiom: Axiom, witness: String| violations.push(Violation { axiom, witness });
    let nn = td.len();

    // Tree shape.
    let mut tree_ok = nn > 0 || g.n() == 0;
    if nn == 0 && g.n() > 0 {
        push(Axiom::Tree, "no nodes".into());
    }
    for &(a, b) in &td.edges {
        if a >= nn || b >= nn || a == b {
            push(Axiom::Tree, format!("bad tree edge ({a},{b})"));
            tree_ok = false;
        }
    }
    if td.edges.windows(2).any(|w| w[0] == w[1]) {
        push(Axiom::Tree, "repeated tree edge".into());
        tree_ok = false;
    }
    if tree_ok && nn > 0 {
        if td.edges.len() != nn - 1 {
            push(Axiom::Tree, format!("{} nodes but {} edges", nn, td.edges.len()));
            tree_ok = false;
        } else {
            let adj = td.neighbors();
            let mut seen = vec![false; nn];
            seen[0] = true;
            let mut stack = vec![0];
            let mut count = 1;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
            if count != nn {
                push(Axiom::Tree, "node graph is disconnected".into());
                tree_ok = false;
            }
        }
    }

    // Bag contents, vertex cover and connectivity.
    let n = g.n();
    let mut holders = vec![0usize; n];
    let mut bad_vertex = false;
    for (x, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            match g.index_of(v) {
                Some(i) => holders[i] += 1,
                None => {
                    push(Axiom::BagVertex, format!("bag {x} holds unknown vertex {v}"));
                    bad_vertex = true;
                }
            }
        }
    }
    for (i, &h) in holders.iter().enumerate() {
        if h == 0 {
            push(Axiom::VertexCover, format!("vertex {} is in no bag", g.vertices()[i]));
        }
    }
    let _ = bad_vertex;
    if tree_ok {
        let mut links = vec![0usize; n];
        for &(a, b) in &td.edges {
            let (ba, bb) = (&td.bags[a], &td.bags[b]);
            let (mut i, mut j) = (0, 0);
            while i < ba.len() && j < bb.len() {
                match ba[i].cmp(&bb[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        if let Some(k) = g.index_of(ba[i]) {
                            links[k] += 1;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        for i in 0..n {
            if holders[i] > 0 && links[i] + 1 != holders[i] {
                push(
                    Axiom::Connectivity,
                    format!("bags containing {} do not form a subtree", g.vertices()[i]),
                );
            }
        }
    }

    // Edge cover.
    let mut covered = vec![false; g.m()];
    for bag in &td.bags {
        for (i, &a) in bag.iter().enumerate() {
            for &b in &bag[i + 1..] {
                if let Some(id) = g.edge_id(Edge::new(a, b)) {
                    covered[id] = true;
                }
            }
        }
    }
    for (id, &c) in covered.iter().enumerate() {
        if !c {
            push(Axiom::EdgeCover, format!("edge {} is in no bag", g.edges()[id]));
        }
    }

    // Orientation.
    if let Some(parent) = &td.parent {
        if parent.len() != nn {
            push(Axiom::Parent, "parent map has the wrong length".into());
        } else {
            let roots = parent.iter().filter(|p| p.is_none()).count();
            if roots != 1 {
                push(Axiom::Parent, format!("{roots} roots"));
            }
            let mut derived: Vec<(usize, usize)> = Vec::new();
            for (c, p) in parent.iter().enumerate() {
                if let Some(p) = *p {
                    if p >= nn {
                        push(Axiom::Parent, format!("node {c} has unknown parent {p}"));
                    } else {
                        derived.push((c.min(p), c.max(p)));
                    }
                }
            }
            derived.sort_unstable();
            if derived != td.edges {
                push(Axiom::Parent, "parent links differ from the tree edges".into());
            }
        }
    }

    let valid = violations.is_empty();
    ValidationReport {
        valid,
        width: td.width(),
        adhesion: td.adhesion(),
        violations,
    }
}

pub fn width(td: &TreeDecomposition) -> usize {
    td.width()
}

pub fn adhesion(td: &TreeDecomposition) -> usize {
    td.adhesion()
}

/// Proper colouring used to pick one endpoint per non-tree edge: vertices are
/// coloured greedily in degeneracy order (repeatedly removing a vertex of
/// minimum degree, ties to the smaller id). If that uses more than
/// degeneracy + 1 colours, the reverse order is used instead, which never does.
pub fn endpoint_coloring(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut deg: Vec<usize> = g.vertices().iter().map(|&v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut degeneracy = 0;
    for _ in 0..n {
        let i = (0..n).filter(|&i| !removed[i]).min_by_key(|&i| (deg[i], i)).unwrap();
        degeneracy = degeneracy.max(deg[i]);
        removed[i] = true;
        order.push(i);
        for &w in g.neighbors(g.vertices()[i]) {
            let j = g.index_of(w).unwrap();
            if !removed[j] {
                deg[j] -= 1;
            }
        }
    }
    let greedy = |order: &[usize]| {
        let mut color = vec![usize::MAX; n];
        for &i in order {
            let used: Vec<usize> = g
                .neighbors(g.vertices()[i])
                .iter()
                .map(|&w| color[g.index_of(w).unwrap()])
                .collect();
            color[i] = (0..).find(|c| !used.contains(c)).unwrap();
        }
        color
    };
    let first = greedy(&order);
    if first.iter().copied().max().map_or(0, |c| c + 1) <= degeneracy + 1 {
        return first;
    }
    order.reverse();
    greedy(&order)
}

/// Endpoint of each non-tree edge that is recorded in bags: the lower colour,
/// then the smaller id.
pub struct EndpointRule {
    color: Vec<usize>,
}

impl EndpointRule {
    pub fn new(g: &Graph) -> Self {
        EndpointRule {
            color: endpoint_coloring(g),
        }
    }

    pub fn colors(&self) -> &[usize] {
        &self.color
    }

    pub fn pick(&self, g: &Graph, e: Edge) -> Vertex {
        let cu = self.color[g.index_of(e.u()).unwrap()];
        let cv = self.color[g.index_of(e.v()).unwrap()];
        if (cv, e.v()) < (cu, e.u()) {
            e.v()
        } else {
            e.u()
        }
    }
}

fn rooted(t: &SpanningForest, g: &Graph) -> Result<SpanningForest> {
    if t.is_rooted() {
        return Ok(t.clone());
    }
    match g.vertices().first() {
        Some(&r) => root_orient(t, r),
        None => Ok(t.clone()),
    }
}

fn check_spans(g: &Graph, t: &SpanningForest) -> Result<()> {
    if t.vertices() != g.vertices() || t.tree_edges().iter().any(|&e| !g.contains_edge(e)) {
        return Err(Error::NotAForest("forest belongs to another graph".into()));
    }
    Ok(())
}

/// One bag per vertex and per tree edge, each adding one endpoint of every
/// non-tree edge whose fundamental cycle passes through it. The tree is the
/// subdivided spanning tree, rooted at the vertex bag of the forest root.
pub fn td_from_vr_er(g: &Graph, t: &SpanningForest) -> Result<TreeDecomposition> {
    check_spans(g, t)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let t = rooted(t, g)?;
    let fc = FundamentalCycles::new(g, &t);
    let rule = EndpointRule::new(g);
    let ep: Vec<Vertex> = fc.non_tree.iter().map(|&e| rule.pick(g, e)).collect();
    let n = g.n();
    let mut bags: Vec<Vec<Vertex>> = Vec::with_capacity(2 * n);
    let mut labels = Vec::with_capacity(2 * n);
    let mut parent = Vec::with_capacity(2 * n);
    for (i, &v) in g.vertices().iter().enumerate() {
        let mut b = vec![v];
        b.extend(fc.through_vertex(i).map(|c| ep[c]));
        bags.push(b);
        labels.push(BagLabel::new(BagKind::VertexBag, Some(Witness::Vertex(v))));
        parent.push(None);
    }
    for &e in t.tree_edges() {
        let id = g.edge_id(e).expect("tree edge");
        let mut b = vec![e.u(), e.v()];
        b.extend(fc.through_edge(id).map(|c| ep[c]));
        let x = bags.len();
        bags.push(b);
        labels.push(BagLabel::new(BagKind::EdgeBag, Some(Witness::Edge(e))));
        let upper = t.upper_endpoint(e).expect("rooted forest orients tree edges");
        let lower = e.other(upper);
        parent.push(Some(g.index_of(upper).unwrap()));
        parent[g.index_of(lower).unwrap()] = Some(x);
    }
    Ok(TreeDecomposition::from_parent(bags, parent, Some(labels)))
}

/// Endpoints of the non-tree edges whose fundamental cycle shares an edge with
/// the boundary of inner face `face`; restricted to cycles through `v` when given.
pub fn cycle_endpoint_set(
    g: &Graph,
    t: &SpanningForest,
    emb: &PlanarEmbedding,
    face: usize,
    v: Option<Vertex>,
) -> Result<Vec<Vertex>> {
    if face == emb.outer_face() {
        return Err(Error::OuterFaceForbidden);
    }
    let f = emb.face(face)?;
    let fc = FundamentalCycles::new(g, t);
    let rule = EndpointRule::new(g);
    let vi = match v {
        Some(v) => Some(g.index_of(v).ok_or(Error::UnknownVertex(v))?),
        None => None,
    };
    let ids: Vec<usize> = f.boundary_edges.iter().map(|&e| g.edge_id(e).expect("edge")).collect();
    let mut out: Vec<Vertex> = (0..fc.len())
        .filter(|&c| ids.iter().any(|&i| fc.cycle_edges[c].contains(i)))
        .filter(|&c| vi.is_none_or(|vi| fc.cycle_vertices[c].contains(vi)))
        .map(|c| rule.pick(g, fc.non_tree[c]))
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Shared per-vertex construction of the face-based decompositions.
struct FaceSets<'a> {
    g: &'a Graph,
    emb: &'a PlanarEmbedding,
    fc: FundamentalCycles,
    ep: Vec<Vertex>,
    /// Per face, the cycles sharing an edge with its boundary.
    face_cycles: Vec<Vec<usize>>,
}

impl<'a> FaceSets<'a> {
    fn new(g: &'a Graph, t: &SpanningForest, emb: &'a PlanarEmbedding) -> Self {
        let fc = FundamentalCycles::new(g, t);
        let rule = EndpointRule::new(g);
        let ep = fc.non_tree.iter().map(|&e| rule.pick(g, e)).collect();
        let face_cycles = emb
            .faces()
            .iter()
            .map(|f| {
                let ids: Vec<usize> = f.boundary_edges.iter().map(|&e| g.edge_id(e).expect("edge")).collect();
                (0..fc.len())
                    .filter(|&c| ids.iter().any(|&i| fc.cycle_edges[c].contains(i)))
                    .collect()
            })
            .collect();
        FaceSets {
            g,
            emb,
            fc,
            ep,
            face_cycles,
        }
    }

    /// C(v, f): endpoints of cycles through v meeting the boundary of f.
    fn extend_with(&self, bag: &mut Vec<Vertex>, vi: usize, f: usize) {
        for &c in &self.face_cycles[f] {
            if self.fc.cycle_vertices[c].contains(vi) {
                bag.push(self.ep[c]);
            }
        }
    }

    fn tree_edge_bag(&self, e: Edge) -> Vec<Vertex> {
        let id = self.g.edge_id(e).expect("tree edge");
        let mut b = vec![e.u(), e.v()];
        b.extend(self.fc.through_edge(id).map(|c| self.ep[c]));
        b
    }
}

/// Per-vertex bag path: returns the bags and, per rotation position, the bag
/// that edge attaches to. `first` is the face placed between the last and the
/// first edge of the rotation.
fn vertex_path(fs: &FaceSets, v: Vertex, first: usize) -> (Vec<Vertex>, Vec<Vec<Vertex>>, Vec<usize>) {
    let vi = fs.g.index_of(v).unwrap();
    let rot = fs.emb.rotation(v);
    let d = rot.len();
    if d == 0 {
        return (Vec::new(), vec![vec![v]], Vec::new());
    }
    let around = fs.emb.faces_around(v);
    // around[t] lies between rot[t] and rot[t+1]; rotate so that `first`
    // lies between the last and the first edge.
    let s = (0..d).find(|&t| around[t] == first).expect("face at v");
    let edges: Vec<Vertex> = (0..d).map(|t| rot[(s + 1 + t) % d]).collect();
    // faces[t] lies before edges[t]; faces[0] = first.
    let faces: Vec<usize> = (0..d).map(|t| around[(s + t) % d]).collect();
    if d <= 2 {
        let mut b = vec![v];
        for &f in &faces {
            fs.extend_with(&mut b, vi, f);
        }
        return (edges, vec![b], vec![0; d]);
    }
    let mut bags = Vec::with_capacity(d - 2);
    // Bag i (1-based positions 2..d-1) covers faces[0], faces[i-1], faces[i].
    for i in 1..d - 1 {
        let mut b = vec![v];
        fs.extend_with(&mut b, vi, faces[0]);
        fs.extend_with(&mut b, vi, faces[i]);
        fs.extend_with(&mut b, vi, faces[i + 1]);
        bags.push(b);
    }
    let mut attach = Vec::with_capacity(d);
    for t in 0..d {
        attach.push(t.saturating_sub(1).min(d - 3));
    }
    (edges, bags, attach)
}

/// Decomposition built from a spanning tree and a planar embedding: a path of
/// bags per vertex, following the rotation from a lowest-layer incident face,
/// and one bag per tree edge linking the paths of its endpoints.
pub fn td_from_er_fr(g: &Graph, t: &SpanningForest, emb: &PlanarEmbedding) -> Result<TreeDecomposition> {
    check_spans(g, t)?;
    if emb.graph() != g {
        return Err(Error::InvalidEmbedding("embedding belongs to another graph".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let t = rooted(t, g)?;
    let fs = FaceSets::new(g, &t, emb);
    let mut bags: Vec<Vec<Vertex>> = Vec::new();
    let mut labels = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    // Node attached to each (vertex index, neighbour) pair.
    let mut attach_node: Vec<Vec<(Vertex, usize)>> = vec![Vec::new(); g.n()];
    let mut first_bag = vec![0; g.n()];
    for (vi, &v) in g.vertices().iter().enumerate() {
        let f1 = emb.lowest_layer_face(v, None)?;
        let (nbrs, path, attach) = vertex_path(&fs, v, f1);
        let base = bags.len();
        first_bag[vi] = base;
        for (i, b) in path.into_iter().enumerate() {
            if i > 0 {
                edges.push((base + i - 1, base + i));
            }
            bags.push(b);
            labels.push(BagLabel::new(BagKind::VertexBag, Some(Witness::Vertex(v))));
        }
        for (w, a) in nbrs.into_iter().zip(attach) {
            attach_node[vi].push((w, base + a));
        }
    }
    let node_at = |v: Vertex, w: Vertex| {
        attach_node[g.index_of(v).unwrap()]
            .iter()
            .find(|&&(x, _)| x == w)
            .map(|&(_, a)| a)
            .expect("incident edge")
    };
    for &e in t.tree_edges() {
        let x = bags.len();
        bags.push(fs.tree_edge_bag(e));
        labels.push(BagLabel::new(BagKind::EdgeBag, Some(Witness::Edge(e))));
        edges.push((node_at(e.u(), e.v()), x));
        edges.push((node_at(e.v(), e.u()), x));
    }
    let root = first_bag[g.index_of(t.root().expect("rooted")).unwrap()];
    let mut td = TreeDecomposition::from_edges(bags, edges).rooted_at(root);
    td.labels = Some(labels);
    connect_subtrees(&mut td);
    Ok(td)
}

/// The construction for 3-connected planar graphs with a supplied spanning tree
/// and root. The embedding's outer face should minimise the number of layers.
///
/// At every vertex the lowest-layer face is chosen, preferring the face closest
/// in the rotation to the tree edge from the parent. The two edges bounding it
/// are the anchors; every other incident edge gets a bag labelled by its head or
/// tail, and every tree edge gets its own bag. Bags point away from the bag of
/// the incoming tree edge, so every node has at most three neighbours.
pub fn td_3connected_kop_with_tree(
    g: &Graph,
    tree: &SpanningForest,
    root: Vertex,
    emb: &PlanarEmbedding,
) -> Result<TreeDecomposition> {
    check_spans(g, tree)?;
    if emb.graph() != g {
        return Err(Error::InvalidEmbedding("embedding belongs to another graph".into()));
    }
    if !g.is_connected() || !is_l_connected(g, 3)? {
        return Err(Error::NotThreeConnected);
    }
    let t = root_orient(tree, root)?;
    let fs = FaceSets::new(g, &t, emb);
    let mut bags: Vec<Vec<Vertex>> = Vec::new();
    let mut labels: Vec<BagLabel> = Vec::new();
    let mut parent: Vec<Option<usize>> = Vec::new();
    let mut attach_node: Vec<Vec<(Vertex, usize)>> = vec![Vec::new(); g.n()];
    let mut local_root = vec![0; g.n()];
    for (vi, &v) in g.vertices().iter().enumerate() {
        let incoming = t.parent(v).map(|p| Edge::new(p, v));
        let fl = emb.lowest_layer_face(v, incoming)?;
        let (nbrs, path, attach) = vertex_path(&fs, v, fl);
        let base = bags.len();
        let d = nbrs.len();
        let count = path.len();
        for (i, b) in path.into_iter().enumerate() {
            bags.push(b);
            // Path bag i carries the non-anchor edge at rotation position i + 1.
            let w = if d >= 3 {
                nbrs[i + 1]
            } else {
                nbrs.first().copied().unwrap_or(v)
            };
            let e = Edge::new(v, w);
            let kind = if e.v() == v { BagKind::SigmaH } else { BagKind::SigmaT };
            labels.push(BagLabel::new(kind, Some(Witness::Edge(e))));
            parent.push(None);
        }
        for (&w, &a) in nbrs.iter().zip(&attach) {
            attach_node[vi].push((w, base + a));
        }
        let entry = match incoming {
            Some(e) => {
                let p = e.other(v);
                base + attach[nbrs.iter().position(|&w| w == p).expect("parent is a neighbour")]
            }
            None => base,
        };
        local_root[vi] = entry;
        for i in base..base + count {
            if i < entry {
                parent[i] = Some(i + 1);
            } else if i > entry {
                parent[i] = Some(i - 1);
            }
        }
    }
    let node_at = |v: Vertex, w: Vertex| {
        attach_node[g.index_of(v).unwrap()]
            .iter()
            .find(|&&(x, _)| x == w)
            .map(|&(_, a)| a)
            .expect("incident edge")
    };
    for &e in t.tree_edges() {
        let x = bags.len();
        bags.push(fs.tree_edge_bag(e));
        labels.push(BagLabel::new(BagKind::Sigma, Some(Witness::Edge(e))));
        let upper = t.upper_endpoint(e).expect("rooted");
        let lower = e.other(upper);
        parent.push(Some(node_at(upper, lower)));
        let child = local_root[g.index_of(lower).unwrap()];
        debug_assert_eq!(child, node_at(lower, upper));
        parent[child] = Some(x);
    }
    let mut td = TreeDecomposition::from_parent(bags, parent, Some(labels));
    connect_subtrees(&mut td);
    Ok(td)
}

/// [`td_3connected_kop_with_tree`] with a synthesized spanning tree rooted at
/// the smallest vertex and an embedding with the fewest layers.
pub fn td_3connected_kop(g: &Graph, k: usize) -> Result<TreeDecomposition> {
    if !g.is_connected() || !is_l_connected(g, 3)? {
        return Err(Error::NotThreeConnected);
    }
    let emb = layered_embedding(g, OuterFacePolicy::Auto)?;
    let (t, _) = synthesize_spanning_tree(g, k, &emb)?;
    let root = g.vertices()[0];
    td_3connected_kop_with_tree(g, &t, root, &emb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::*;
    use crate::graph::spanning_forest;
    use crate::planarity::embed;
    use crate::remember::{all_spanning_trees, remember_report};

    fn e(a: Vertex, b: Vertex) -> Edge {
        Edge::new(a, b)
    }

    #[test]
    fn validator_examples() {
        let k3 = complete_graph(3);
        let single = TreeDecomposition::from_edges(vec![vec![1, 2, 3]], vec![]);
        let r = validate(&k3, &single);
        assert!(r.valid);
        assert_eq!((r.width, r.adhesion), (2, 0));

        let c4 = cycle_graph(4);
        let path = TreeDecomposition::from_edges(vec![vec![1, 2], vec![2, 3], vec![3, 4]], vec![(0, 1), (1, 2)]);
        let r = validate(&c4, &path);
        assert!(!r.valid);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].axiom, Axiom::EdgeCover);

        let edge = Graph::new([1, 2], [(1, 2)]).unwrap();
        let twice = TreeDecomposition::from_edges(vec![vec![1, 2], vec![1, 2]], vec![(0, 1)]);
        let r = validate(&edge, &twice);
        assert!(r.valid);
        assert_eq!((r.width, r.adhesion), (1, 2));

        let pair = TreeDecomposition::from_edges(vec![vec![1, 2, 3], vec![2, 3, 4]], vec![(0, 1)]);
        assert_eq!(pair.adhesion(), 2);
    }

    #[test]
    fn validator_catches_broken_subtrees() {
        let p = path_graph(3);
        let td = TreeDecomposition::from_edges(vec![vec![1, 2], vec![3], vec![2, 3]], vec![(0, 1), (1, 2)]);
        let r = validate(&p, &td);
        assert!(r.violations.iter().any(|v| v.axiom == Axiom::Connectivity));
        let cyc = TreeDecomposition::from_edges(vec![vec![1, 2], vec![2, 3], vec![1, 3]], vec![(0, 1), (1, 2), (0, 2)]);
        assert!(validate(&p, &cyc).violations.iter().any(|v| v.axiom == Axiom::Tree));
    }

    #[test]
    fn vr_er_examples() {
        let c4 = cycle_graph(4);
        let t = spanning_forest(&c4, Some(&[e(1, 2), e(2, 3), e(3, 4)]));
        let td = td_from_vr_er(&c4, &t).unwrap();
        let r = validate(&c4, &td);
        assert!(r.valid, "{:?}", r.violations);
        assert_eq!(r.width, 2);

        let p = path_graph(5);
        let td = td_from_vr_er(&p, &spanning_forest(&p, None)).unwrap();
        assert_eq!(validate(&p, &td).width, 1);

        let k4 = complete_graph(4);
        let star = spanning_forest(&k4, Some(&[e(1, 2), e(1, 3), e(1, 4)]));
        let td = td_from_vr_er(&k4, &star).unwrap();
        let r = validate(&k4, &td);
        assert!(r.valid);
        assert!(r.width <= 3);
    }

    #[test]
    fn endpoint_sets() {
        let c4 = cycle_graph(4);
        let t = spanning_forest(&c4, Some(&[e(1, 2), e(2, 3), e(3, 4)]));
        let emb = embed(&c4).unwrap();
        let inner = 1 - emb.outer_face();
        assert_eq!(cycle_endpoint_set(&c4, &t, &emb, inner, None).unwrap(), vec![1]);
        assert_eq!(
            cycle_endpoint_set(&c4, &t, &emb, emb.outer_face(), None),
            Err(Error::OuterFaceForbidden)
        );

        let k4 = complete_graph(4);
        let star = spanning_forest(&k4, Some(&[e(1, 2), e(1, 3), e(1, 4)]));
        let emb = embed(&k4).unwrap();
        let outer = emb
            .faces()
            .iter()
            .position(|f| f.boundary_vertices == vec![1, 2, 3])
            .unwrap();
        let emb = emb.with_outer_face(outer).unwrap();
        let f234 = emb
            .faces()
            .iter()
            .position(|f| f.boundary_vertices == vec![2, 3, 4])
            .unwrap();
        let rule = EndpointRule::new(&k4);
        let mut expect: Vec<Vertex> = [e(2, 3), e(2, 4), e(3, 4)].iter().map(|&x| rule.pick(&k4, x)).collect();
        expect.sort_unstable();
        expect.dedup();
        assert_eq!(cycle_endpoint_set(&k4, &star, &emb, f234, None).unwrap(), expect);

        let p = path_graph(3);
        let emb = embed(&p).unwrap();
        let two = Graph::new([1, 2, 3], [(1, 2), (2, 3), (1, 3)]).unwrap();
        let _ = two;
        assert!(matches!(
            cycle_endpoint_set(&p, &spanning_forest(&p, None), &emb, 0, None),
            Err(Error::OuterFaceForbidden)
        ));
    }

    #[test]
    fn er_fr_examples() {
        let c4 = cycle_graph(4);
        let t = spanning_forest(&c4, Some(&[e(1, 2), e(2, 3), e(3, 4)]));
        let emb = embed(&c4).unwrap();
        let td = td_from_er_fr(&c4, &t, &emb).unwrap();
        let r = validate(&c4, &td);
        assert!(r.valid, "{:?}", r.violations);
        assert!(r.width <= 3);

        let k4 = complete_graph(4);
        let star = spanning_forest(&k4, Some(&[e(1, 2), e(1, 3), e(1, 4)]));
        let emb = embed(&k4).unwrap();
        let td = td_from_er_fr(&k4, &star, &emb).unwrap();
        let r = validate(&k4, &td);
        assert!(r.valid);
        assert!(r.width <= 9);

        let p = path_graph(4);
        let emb = embed(&p).unwrap();
        let td = td_from_er_fr(&p, &spanning_forest(&p, None), &emb).unwrap();
        assert_eq!(validate(&p, &td).width, 1);
    }

    #[test]
    fn er_fr_bound_on_every_tree_of_small_graphs() {
        for g in [
            complete_graph(4),
            wheel_graph(5),
            prism_graph(),
            theta_graph(),
            double_k4(),
        ] {
            let emb = embed(&g).unwrap();
            for t in all_spanning_trees(&g) {
                let r = remember_report(&g, &t, Some(&emb));
                let td = td_from_er_fr(&g, &t, &emb).unwrap();
                let v = validate(&g, &td);
                assert!(v.valid, "{:?}", v.violations);
                assert!(v.width <= (r.er + 1).max(3 * r.fr.unwrap()));
                let td = td_from_vr_er(&g, &t).unwrap();
                let v = validate(&g, &td);
                assert!(v.valid);
                assert!(v.width <= r.vr.max(r.er + 1));
            }
        }
    }

    #[test]
    fn three_connected_examples() {
        for g in [complete_graph(4), wheel_graph(4), prism_graph()] {
            let td = td_3connected_kop(&g, 2).unwrap();
            let r = validate(&g, &td);
            assert!(r.valid, "{:?}", r.violations);
            assert!(td.max_degree() <= 3);
            assert_eq!(td.roots().len(), 1);
        }
        assert_eq!(
            td_3connected_kop(&cycle_graph(5), 1).unwrap_err(),
            Error::NotThreeConnected
        );
    }

    #[test]
    fn three_connected_every_tree_and_root() {
        for g in [complete_graph(4), wheel_graph(4), prism_graph()] {
            let emb = layered_embedding(&g, OuterFacePolicy::Auto).unwrap();
            for t in all_spanning_trees(&g) {
                for &r in g.vertices() {
                    let td = td_3connected_kop_with_tree(&g, &t, r, &emb).unwrap();
                    let v = validate(&g, &td);
                    assert!(v.valid, "{:?}", v.violations);
                    assert!(td.max_degree() <= 3);
                    let root = td.root().unwrap();
                    assert!(td.bags[root].contains(&r));
                }
            }
        }
    }
}
