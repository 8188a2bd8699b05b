//! Simple undirected graphs, cuts, spanning forests and fundamental cycles.
//!
//! Vertices are caller-supplied integers. Every iteration is in ascending id
//! order so results are reproducible.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// An unordered vertex pair, stored with the smaller id first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[Vertex; 2]", into = "[Vertex; 2]")]
pub struct Edge(Vertex, Vertex);

impl Edge {
    pub fn new(a: Vertex, b: Vertex) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn u(self) -> Vertex {
        self.0
    }

    pub fn v(self) -> Vertex {
        self.1
    }

    pub fn contains(self, x: Vertex) -> bool {
        self.0 == x || self.1 == x
    }

    /// The endpoint that is not `x`. `x` must be an endpoint.
    pub fn other(self, x: Vertex) -> Vertex {
        debug_assert!(self.contains(x));
        if self.0 == x {
            self.1
        } else {
            self.0
        }
    }

    pub fn common_vertex(self, f: Edge) -> Option<Vertex> {
        if f.contains(self.0) {
            Some(self.0)
        } else if f.contains(self.1) {
            Some(self.1)
        } else {
            None
        }
    }
}

impl From<[Vertex; 2]> for Edge {
    fn from(p: [Vertex; 2]) -> Self {
        Edge::new(p[0], p[1])
    }
}

impl From<Edge> for [Vertex; 2] {
    fn from(e: Edge) -> Self {
        [e.0, e.1]
    }
}

impl From<(Vertex, Vertex)> for Edge {
    fn from(p: (Vertex, Vertex)) -> Self {
        Edge::new(p.0, p.1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.0, self.1)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Simple undirected graph.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    adj: Vec<Vec<Vertex>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;
    fn try_from(r: GraphRepr) -> Result<Self> {
        Graph::new(r.vertices, r.edges.into_iter().map(|e| (e.0, e.1)))
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            vertices: g.vertices,
            edges: g.edges,
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.vertices)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and undeclared endpoints.
    pub fn new<I, J, E>(vertices: I, edges: J) -> Result<Self>
    where
        I: IntoIterator<Item = Vertex>,
        J: IntoIterator<Item = E>,
        E: Into<(Vertex, Vertex)>,
    {
        let mut vs: Vec<Vertex> = vertices.into_iter().collect();
        vs.sort_unstable();
        if let Some(w) = vs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0]));
        }
        let mut es = Vec::new();
        for p in edges {
            let (a, b) = p.into();
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let e = Edge::new(a, b);
            if vs.binary_search(&a).is_err() || vs.binary_search(&b).is_err() {
                return Err(Error::UnknownEndpoint(e));
            }
            es.push(e);
        }
        es.sort_unstable();
        if let Some(w) = es.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0]));
        }
        Ok(Self::from_sorted(vs, es))
    }

    /// Graph whose vertex set is the set of edge endpoints.
    pub fn from_edges<J, E>(edges: J) -> Result<Self>
    where
        J: IntoIterator<Item = E>,
        E: Into<(Vertex, Vertex)>,
    {
        let pairs: Vec<(Vertex, Vertex)> = edges.into_iter().map(Into::into).collect();
        let vs: BTreeSet<Vertex> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        Self::new(vs, pairs)
    }

    /// Caller guarantees sorted, distinct vertices and sorted, distinct edges between them.
    pub(crate) fn from_sorted(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Self {
        let mut adj = vec![Vec::new(); vertices.len()];
        for e in &edges {
            let i = vertices.binary_search(&e.0).expect("endpoint");
            let j = vertices.binary_search(&e.1).expect("endpoint");
            adj[i].push(e.1);
            adj[j].push(e.0);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Graph { vertices, edges, adj }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.index_of(v).is_some()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edge_id(e).is_some()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        a != b && self.contains_edge(Edge::new(a, b))
    }

    /// Position of `e` in the sorted edge list; used as the edge id.
    pub fn edge_id(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    /// Sorted neighbours of `v` (empty for unknown vertices).
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        match self.index_of(v) {
            Some(i) => &self.adj[i],
            None => &[],
        }
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }

    pub fn incident_edges(&self, v: Vertex) -> Vec<Edge> {
        self.neighbors(v).iter().map(|&w| Edge::new(v, w)).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Induced subgraph on `w`.
    pub fn induced(&self, w: &[Vertex]) -> Result<Graph> {
        let mut keep: Vec<Vertex> = w.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&v) = keep.iter().find(|&&v| !self.contains_vertex(v)) {
            return Err(Error::UnknownVertex(v));
        }
        let es = self
            .edges
            .iter()
            .copied()
            .filter(|e| keep.binary_search(&e.0).is_ok() && keep.binary_search(&e.1).is_ok())
            .collect();
        Ok(Self::from_sorted(keep, es))
    }

    /// Induced subgraph on the complement of `removed`.
    pub fn without(&self, removed: &[Vertex]) -> Graph {
        let rem: BTreeSet<Vertex> = removed.iter().copied().collect();
        let keep: Vec<Vertex> = self.vertices.iter().copied().filter(|v| !rem.contains(v)).collect();
        self.induced(&keep).expect("subset of vertices")
    }

    /// Same vertex set with the extra pairs added (pairs already present are skipped).
    pub fn with_extra_edges(&self, extra: &[Edge]) -> Result<Graph> {
        let mut es: BTreeSet<Edge> = self.edges.iter().copied().collect();
        for &e in extra {
            if e.0 == e.1 {
                return Err(Error::SelfLoop(e.0));
            }
            if !self.contains_vertex(e.0) || !self.contains_vertex(e.1) {
                return Err(Error::UnknownEndpoint(e));
            }
            es.insert(e);
        }
        Ok(Self::from_sorted(self.vertices.clone(), es.into_iter().collect()))
    }

    /// Same vertex set, only the given edges (which must belong to the graph).
    pub fn edge_subgraph(&self, keep: &[Edge]) -> Graph {
        let mut es: Vec<Edge> = keep.to_vec();
        es.sort_unstable();
        es.dedup();
        Self::from_sorted(self.vertices.clone(), es)
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![self.vertices[s]];
            let mut queue = VecDeque::from([s]);
            while let Some(i) = queue.pop_front() {
                for &w in &self.adj[i] {
                    let j = self.index_of(w).expect("neighbour");
                    if !seen[j] {
                        seen[j] = true;
                        comp.push(w);
                        queue.push_back(j);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Empty and single-vertex graphs count as connected.
    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.connected_avoiding(&[])
    }

    /// Whether the graph minus `removed` is connected (empty remainder counts as connected).
    pub fn connected_avoiding(&self, removed: &[Vertex]) -> bool {
        let n = self.n();
        let mut blocked = vec![false; n];
        let mut remaining = n;
        for &v in removed {
            if let Some(i) = self.index_of(v) {
                if !blocked[i] {
                    blocked[i] = true;
                    remaining -= 1;
                }
            }
        }
        let Some(start) = (0..n).find(|&i| !blocked[i]) else {
            return true;
        };
        let mut seen = blocked;
        seen[start] = true;
        let mut count = 1;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for &w in &self.adj[i] {
                let j = self.index_of(w).expect("neighbour");
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == remaining
    }

    /// Whether every vertex has degree two and the graph is one connected cycle on at least three vertices.
    pub fn is_cycle(&self) -> bool {
        self.n() >= 3 && self.adj.iter().all(|a| a.len() == 2) && self.is_connected()
    }

    /// Vertices of a cycle graph in traversal order, starting at the smallest id
    /// and continuing to its smaller neighbour.
    pub fn cycle_order(&self) -> Option<Vec<Vertex>> {
        if !self.is_cycle() {
            return None;
        }
        let start = self.vertices[0];
        let mut order = vec![start];
        let mut prev = start;
        let mut cur = self.neighbors(start)[0];
        while cur != start {
            order.push(cur);
            let nb = self.neighbors(cur);
            let next = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = next;
        }
        Some(order)
    }
}

/// Biconnected components as sorted edge lists plus the sorted cut vertices.
/// Bridges form single-edge components; isolated vertices belong to none.
/// Components are ordered by their smallest edge.
pub fn biconnected_components(g: &Graph) -> (Vec<Vec<Edge>>, Vec<Vertex>) {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut comps: Vec<Vec<Edge>> = Vec::new();
    let mut is_cut = vec![false; n];
    let mut estack: Vec<Edge> = Vec::new();
    for s in 0..n {
        if disc[s] != usize::MAX {
            continue;
        }
        disc[s] = time;
        low[s] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex index, parent index, next neighbour position)
        let mut stack: Vec<(usize, usize, usize)> = vec![(s, usize::MAX, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, parent, pos) = *top;
            let nb = &g.adj[v];
            if pos < nb.len() {
                top.2 += 1;
                let w = g.index_of(nb[pos]).expect("neighbour");
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    estack.push(Edge::new(g.vertices[v], g.vertices[w]));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if v == s {
                        root_children += 1;
                    }
                    stack.push((w, v, 0));
                } else if disc[w] < disc[v] {
                    estack.push(Edge::new(g.vertices[v], g.vertices[w]));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        if parent != s {
                            is_cut[parent] = true;
                        }
                        let pe = Edge::new(g.vertices[parent], g.vertices[v]);
                        let mut comp = Vec::new();
                        while let Some(e) = estack.pop() {
                            comp.push(e);
                            if e == pe {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        if root_children > 1 {
            is_cut[s] = true;
        }
    }
    comps.sort_unstable();
    let cuts = (0..n).filter(|&i| is_cut[i]).map(|i| g.vertices[i]).collect();
    (comps, cuts)
}

/// Builds a graph from explicit vertex ids and edge pairs.
pub fn build_graph(vertex_ids: &[Vertex], edge_pairs: &[(Vertex, Vertex)]) -> Result<Graph> {
    Graph::new(vertex_ids.iter().copied(), edge_pairs.iter().copied())
}

pub fn induced_subgraph(g: &Graph, w: &[Vertex]) -> Result<Graph> {
    g.induced(w)
}

/// A vertex set whose removal disconnects the host.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cut {
    pub members: Vec<Vertex>,
}

impl Cut {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// All vertex sets of size exactly `l` whose removal disconnects `g`.
pub fn enumerate_cuts(g: &Graph, l: usize) -> Result<Vec<Cut>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(g.vertices()
        .iter()
        .copied()
        .combinations(l)
        .filter(|c| !g.connected_avoiding(c))
        .map(|members| Cut { members })
        .collect())
}

/// True iff `g` has no cut of size at most `l - 1`.
pub fn is_l_connected(g: &Graph, l: usize) -> Result<bool> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    for j in 1..l {
        if !enumerate_cuts(g, j)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Maximal spanning forest, optionally rooted with an explicit parent map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningForest {
    vertices: Vec<Vertex>,
    tree_edges: Vec<Edge>,
    roots: Vec<Vertex>,
    parent: Option<BTreeMap<Vertex, Vertex>>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl SpanningForest {
    /// Checks that `edges` form a maximal spanning forest of `g`.
    pub fn from_edges(g: &Graph, edges: &[Edge]) -> Result<Self> {
        let mut es = edges.to_vec();
        es.sort_unstable();
        es.dedup();
        let mut dsu = Dsu::new(g.n());
        for &e in &es {
            let i = g.index_of(e.0).ok_or(Error::UnknownEdge(e))?;
            let j = g.index_of(e.1).ok_or(Error::UnknownEdge(e))?;
            if !g.contains_edge(e) {
                return Err(Error::UnknownEdge(e));
            }
            if !dsu.union(i, j) {
                return Err(Error::NotAForest(format!("tree edges contain a cycle through {e}")));
            }
        }
        if es.len() + g.components().len() != g.n() {
            return Err(Error::NotAForest("some component is not spanned".into()));
        }
        Ok(SpanningForest {
            vertices: g.vertices().to_vec(),
            tree_edges: es,
            roots: Vec::new(),
            parent: None,
        })
    }

    pub fn tree_edges(&self) -> &[Edge] {
        &self.tree_edges
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.tree_edges.binary_search(&e).is_ok()
    }

    pub fn roots(&self) -> &[Vertex] {
        &self.roots
    }

    /// Root of the component of the first vertex, if oriented.
    pub fn root(&self) -> Option<Vertex> {
        self.roots.first().copied()
    }

    pub fn parent_map(&self) -> Option<&BTreeMap<Vertex, Vertex>> {
        self.parent.as_ref()
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent.as_ref().and_then(|p| p.get(&v).copied())
    }

    pub fn is_rooted(&self) -> bool {
        self.parent.is_some()
    }

    /// The forest as a graph on the host's vertex set.
    pub fn as_graph(&self) -> Graph {
        Graph::from_sorted(self.vertices.clone(), self.tree_edges.clone())
    }

    /// For an oriented forest: the endpoint of tree edge `e` closer to the root.
    pub fn upper_endpoint(&self, e: Edge) -> Option<Vertex> {
        let p = self.parent.as_ref()?;
        if p.get(&e.1) == Some(&e.0) {
            Some(e.0)
        } else if p.get(&e.0) == Some(&e.1) {
            Some(e.1)
        } else {
            None
        }
    }
}

/// Greedy maximal spanning forest. Edges listed in `edge_priority` are tried first
/// in the given order, the rest afterwards in ascending order.
pub fn spanning_forest(g: &Graph, edge_priority: Option<&[Edge]>) -> SpanningForest {
    let mut order: Vec<Edge> = Vec::with_capacity(g.m());
    let mut used = vec![false; g.m()];
    if let Some(pri) = edge_priority {
        for &e in pri {
            if let Some(id) = g.edge_id(e) {
                if !used[id] {
                    used[id] = true;
                    order.push(e);
                }
            }
        }
    }
    for (id, &e) in g.edges().iter().enumerate() {
        if !used[id] {
            order.push(e);
        }
    }
    let mut dsu = Dsu::new(g.n());
    let mut tree = Vec::new();
    for e in order {
        let i = g.index_of(e.0).expect("endpoint");
        let j = g.index_of(e.1).expect("endpoint");
        if dsu.union(i, j) {
            tree.push(e);
        }
    }
    tree.sort_unstable();
    SpanningForest {
        vertices: g.vertices().to_vec(),
        tree_edges: tree,
        roots: Vec::new(),
        parent: None,
    }
}

/// Parent/depth view of a forest; unrooted components hang from their smallest vertex.
#[derive(Clone, Debug)]
pub struct ForestIndex {
    vertices: Vec<Vertex>,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    comp: Vec<usize>,
}

impl ForestIndex {
    pub fn new(t: &SpanningForest) -> Self {
        let n = t.vertices.len();
        let idx = |v: Vertex| t.vertices.binary_search(&v).expect("forest vertex");
        let mut adj = vec![Vec::new(); n];
        for e in &t.tree_edges {
            let (i, j) = (idx(e.0), idx(e.1));
            adj[i].push(j);
            adj[j].push(i);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let mut starts: Vec<usize> = t.roots.iter().map(|&r| idx(r)).collect();
        starts.extend(0..n);
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut comp = vec![usize::MAX; n];
        let mut c = 0;
        for s in starts {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = c;
            let mut queue = VecDeque::from([s]);
            while let Some(i) = queue.pop_front() {
                for &j in &adj[i] {
                    if comp[j] == usize::MAX {
                        comp[j] = c;
                        parent[j] = Some(i);
                        depth[j] = depth[i] + 1;
                        queue.push_back(j);
                    }
                }
            }
            c += 1;
        }
        ForestIndex {
            vertices: t.vertices.clone(),
            parent,
            depth,
            comp,
        }
    }

    fn idx(&self, v: Vertex) -> Result<usize> {
        self.vertices.binary_search(&v).map_err(|_| Error::UnknownVertex(v))
    }

    pub fn depth(&self, v: Vertex) -> usize {
        self.idx(v).map(|i| self.depth[i]).unwrap_or(0)
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        let i = self.idx(v).ok()?;
        self.parent[i].map(|p| self.vertices[p])
    }

    pub fn same_component(&self, x: Vertex, y: Vertex) -> bool {
        match (self.idx(x), self.idx(y)) {
            (Ok(i), Ok(j)) => self.comp[i] == self.comp[j],
            _ => false,
        }
    }

    /// Vertices of the tree path from `x` to `y`, both included.
    pub fn path_vertices(&self, x: Vertex, y: Vertex) -> Result<Vec<Vertex>> {
        let (mut i, mut j) = (self.idx(x)?, self.idx(y)?);
        if self.comp[i] != self.comp[j] {
            return Err(Error::CrossComponent(x, y));
        }
        let mut front = vec![i];
        let mut back = vec![j];
        while self.depth[i] > self.depth[j] {
            i = self.parent[i].expect("deeper vertex has a parent");
            front.push(i);
        }
        while self.depth[j] > self.depth[i] {
            j = self.parent[j].expect("deeper vertex has a parent");
            back.push(j);
        }
        while i != j {
            i = self.parent[i].expect("non-root");
            j = self.parent[j].expect("non-root");
            front.push(i);
            back.push(j);
        }
        back.pop();
        front.extend(back.into_iter().rev());
        Ok(front.into_iter().map(|k| self.vertices[k]).collect())
    }

    /// Whether `a` lies on the path from the root to `b` (inclusive).
    pub fn is_ancestor(&self, a: Vertex, b: Vertex) -> bool {
        let (Ok(i), Ok(mut j)) = (self.idx(a), self.idx(b)) else {
            return false;
        };
        if self.comp[i] != self.comp[j] {
            return false;
        }
        while self.depth[j] > self.depth[i] {
            j = self.parent[j].expect("non-root");
        }
        i == j
    }
}

/// Vertex and edge sets of the fundamental cycle of the non-tree edge `e`.
pub fn fundamental_cycle(g: &Graph, t: &SpanningForest, e: Edge) -> Result<(Vec<Vertex>, Vec<Edge>)> {
    if !g.contains_edge(e) {
        return Err(Error::UnknownEdge(e));
    }
    if t.contains(e) {
        return Err(Error::EdgeInForest(e));
    }
    let fi = ForestIndex::new(t);
    let path = fi.path_vertices(e.0, e.1)?;
    let mut edges: Vec<Edge> = path.windows(2).map(|w| Edge::new(w[0], w[1])).collect();
    edges.push(e);
    edges.sort_unstable();
    let mut vs = path;
    vs.sort_unstable();
    Ok((vs, edges))
}

/// Orients the forest away from `r`; other components are rooted at their smallest vertex.
pub fn root_orient(t: &SpanningForest, r: Vertex) -> Result<SpanningForest> {
    if t.vertices.binary_search(&r).is_err() {
        return Err(Error::UnknownVertex(r));
    }
    let unrooted = SpanningForest {
        roots: vec![r],
        parent: None,
        ..t.clone()
    };
    let fi = ForestIndex::new(&unrooted);
    let mut roots = vec![r];
    let mut parent = BTreeMap::new();
    for (i, &v) in t.vertices.iter().enumerate() {
        match fi.parent[i] {
            Some(p) => {
                parent.insert(v, t.vertices[p]);
            }
            None if v != r => roots.push(v),
            None => {}
        }
    }
    Ok(SpanningForest {
        vertices: t.vertices.clone(),
        tree_edges: t.tree_edges.clone(),
        roots,
        parent: Some(parent),
    })
}

/// The forest path from `x` to `y` as an edge sequence.
pub fn tree_path(t: &SpanningForest, x: Vertex, y: Vertex) -> Result<Vec<Edge>> {
    let vs = ForestIndex::new(t).path_vertices(x, y)?;
    Ok(vs.windows(2).map(|w| Edge::new(w[0], w[1])).collect())
}

/// Fundamental cycles of all non-tree edges, as bitsets over vertex and edge ids of the host.
#[derive(Clone, Debug)]
pub struct FundamentalCycles {
    pub non_tree: Vec<Edge>,
    pub cycle_vertices: Vec<FixedBitSet>,
    pub cycle_edges: Vec<FixedBitSet>,
}

impl FundamentalCycles {
    pub fn new(g: &Graph, t: &SpanningForest) -> Self {
        let fi = ForestIndex::new(t);
        let mut non_tree = Vec::new();
        let mut cycle_vertices = Vec::new();
        let mut cycle_edges = Vec::new();
        for &e in g.edges() {
            if t.contains(e) {
                continue;
            }
            let path = fi
                .path_vertices(e.0, e.1)
                .expect("maximal forest spans every component");
            let mut vb = FixedBitSet::with_capacity(g.n());
            let mut eb = FixedBitSet::with_capacity(g.m());
            for &v in &path {
                vb.insert(g.index_of(v).expect("vertex"));
            }
            for w in path.windows(2) {
                eb.insert(g.edge_id(Edge::new(w[0], w[1])).expect("tree edge"));
            }
            eb.insert(g.edge_id(e).expect("edge"));
            non_tree.push(e);
            cycle_vertices.push(vb);
            cycle_edges.push(eb);
        }
        FundamentalCycles {
            non_tree,
            cycle_vertices,
            cycle_edges,
        }
    }

    pub fn len(&self) -> usize {
        self.non_tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.non_tree.is_empty()
    }

    /// Indices of cycles passing through vertex index `vi`.
    pub fn through_vertex(&self, vi: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&c| self.cycle_vertices[c].contains(vi))
    }

    /// Indices of cycles using edge id `ei`.
    pub fn through_edge(&self, ei: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&c| self.cycle_edges[c].contains(ei))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{complete_graph, cycle_graph, path_graph};

    fn e(a: Vertex, b: Vertex) -> Edge {
        Edge::new(a, b)
    }

    #[test]
    fn build_rejects_bad_input() {
        let k3 = build_graph(&[1, 2, 3], &[(1, 2), (2, 3), (3, 1)]).unwrap();
        assert_eq!(k3.m(), 3);
        let single = build_graph(&[1], &[]).unwrap();
        assert_eq!((single.n(), single.m()), (1, 0));
        assert_eq!(build_graph(&[1, 2], &[(1, 1)]), Err(Error::SelfLoop(1)));
        assert_eq!(
            build_graph(&[1, 2], &[(1, 2), (2, 1)]),
            Err(Error::DuplicateEdge(e(1, 2)))
        );
        assert_eq!(build_graph(&[1], &[(1, 2)]), Err(Error::UnknownEndpoint(e(1, 2))));
    }

    #[test]
    fn induced() {
        let k4 = complete_graph(4);
        let t = induced_subgraph(&k4, &[1, 2, 3]).unwrap();
        assert_eq!(t.edges(), &[e(1, 2), e(1, 3), e(2, 3)]);
        let c4 = cycle_graph(4);
        let two = induced_subgraph(&c4, &[1, 3]).unwrap();
        assert_eq!((two.n(), two.m()), (2, 0));
        assert_eq!(induced_subgraph(&c4, c4.vertices()).unwrap(), c4);
        assert_eq!(induced_subgraph(&c4, &[9]), Err(Error::UnknownVertex(9)));
    }

    #[test]
    fn connectivity_levels() {
        assert!(is_l_connected(&complete_graph(4), 3).unwrap());
        assert!(!is_l_connected(&cycle_graph(5), 3).unwrap());
        assert!(!is_l_connected(&path_graph(3), 2).unwrap());
        let two = Graph::new([1, 2, 3], [(1, 2)]).unwrap();
        assert_eq!(is_l_connected(&two, 2), Err(Error::Disconnected));
    }

    #[test]
    fn cuts() {
        let c4 = cycle_graph(4);
        let cuts: Vec<Vec<Vertex>> = enumerate_cuts(&c4, 2).unwrap().into_iter().map(|c| c.members).collect();
        assert_eq!(cuts, vec![vec![1, 3], vec![2, 4]]);
        assert!(enumerate_cuts(&complete_graph(4), 2).unwrap().is_empty());
        let p = enumerate_cuts(&path_graph(3), 1).unwrap();
        assert_eq!(p, vec![Cut { members: vec![2] }]);
    }

    #[test]
    fn blocks_and_cut_vertices() {
        let bowtie = build_graph(&[1, 2, 3, 4, 5], &[(1, 2), (2, 5), (1, 5), (3, 4), (4, 5), (3, 5)]).unwrap();
        let (blocks, cuts) = biconnected_components(&bowtie);
        assert_eq!(blocks.len(), 2);
        assert_eq!(cuts, vec![5]);
        let (blocks, cuts) = biconnected_components(&path_graph(3));
        assert_eq!(blocks, vec![vec![e(1, 2)], vec![e(2, 3)]]);
        assert_eq!(cuts, vec![2]);
        let (blocks, cuts) = biconnected_components(&complete_graph(4));
        assert_eq!(blocks.len(), 1);
        assert!(cuts.is_empty());
    }

    #[test]
    fn greedy_forests() {
        let c4 = cycle_graph(4);
        let t = spanning_forest(&c4, Some(&[e(1, 2), e(2, 3), e(3, 4)]));
        assert_eq!(t.tree_edges(), &[e(1, 2), e(2, 3), e(3, 4)]);
        let k4 = complete_graph(4);
        let star = spanning_forest(&k4, Some(&[e(1, 2), e(1, 3), e(1, 4)]));
        assert_eq!(star.tree_edges(), &[e(1, 2), e(1, 3), e(1, 4)]);
        let two = Graph::new([1, 2, 3, 4], [(1, 2), (3, 4)]).unwrap();
        let f = spanning_forest(&two, None);
        assert_eq!(f.tree_edges().len(), 2);
        assert_eq!(f.as_graph().components().len(), 2);
    }

    #[test]
    fn fundamental_cycles() {
        let c4 = cycle_graph(4);
        let t = spanning_forest(&c4, Some(&[e(1, 2), e(2, 3), e(3, 4)]));
        let (vs, es) = fundamental_cycle(&c4, &t, e(4, 1)).unwrap();
        assert_eq!(vs, vec![1, 2, 3, 4]);
        assert_eq!(es.len(), 4);
        assert_eq!(fundamental_cycle(&c4, &t, e(1, 2)), Err(Error::EdgeInForest(e(1, 2))));

        let k4 = complete_graph(4);
        let star = spanning_forest(&k4, Some(&[e(1, 2), e(1, 3), e(1, 4)]));
        let (vs, es) = fundamental_cycle(&k4, &star, e(2, 3)).unwrap();
        assert_eq!(vs, vec![1, 2, 3]);
        assert_eq!(es, vec![e(1, 2), e(1, 3), e(2, 3)]);

        let path = spanning_forest(&k4, Some(&[e(1, 2), e(2, 3), e(3, 4)]));
        let (vs, es) = fundamental_cycle(&k4, &path, e(1, 4)).unwrap();
        assert_eq!(vs, vec![1, 2, 3, 4]);
        assert_eq!(es, vec![e(1, 2), e(1, 4), e(2, 3), e(3, 4)]);
    }

    #[test]
    fn orientation_and_paths() {
        let p3 = path_graph(3);
        let t = spanning_forest(&p3, None);
        let at2 = root_orient(&t, 2).unwrap();
        assert_eq!(at2.parent(1), Some(2));
        assert_eq!(at2.parent(3), Some(2));
        let at1 = root_orient(&t, 1).unwrap();
        assert_eq!(at1.parent(2), Some(1));
        assert_eq!(at1.parent(3), Some(2));

        let k4 = complete_graph(4);
        let star = spanning_forest(&k4, Some(&[e(1, 2), e(1, 3), e(1, 4)]));
        let rooted = root_orient(&star, 1).unwrap();
        assert!([2, 3, 4].iter().all(|&v| rooted.parent(v) == Some(1)));
        assert_eq!(tree_path(&star, 2, 3).unwrap(), vec![e(1, 2), e(1, 3)]);

        let p4 = path_graph(4);
        let t4 = spanning_forest(&p4, None);
        assert_eq!(tree_path(&t4, 1, 4).unwrap(), vec![e(1, 2), e(2, 3), e(3, 4)]);
        assert!(tree_path(&t4, 3, 3).unwrap().is_empty());

        let two = Graph::new([1, 2, 3, 4], [(1, 2), (3, 4)]).unwrap();
        let f = root_orient(&spanning_forest(&two, None), 2).unwrap();
        assert_eq!(f.roots(), &[2, 3]);
        assert_eq!(tree_path(&f, 1, 3), Err(Error::CrossComponent(1, 3)));
    }
}
