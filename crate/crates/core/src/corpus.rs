//! Exhaustive corpora of small graphs, one representative per isomorphism class.
//!
//! Graphs on n vertices are grown from the classes on n - 1 vertices by adding a
//! vertex with every possible neighbourhood and keeping one graph per canonical
//! code. Planarity is closed under taking induced subgraphs, so the planar
//! corpus can be pruned level by level.

use std::collections::HashSet;

use crate::graph::{Graph, Vertex};
use crate::planarity::embed;

/// Largest vertex count supported by the 64-bit canonical code.
pub const MAX_CORPUS_N: usize = 11;

/// Adjacency as bitmasks; vertex i is bit i.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Small {
    adj: Vec<u16>,
}

impl Small {
    fn n(&self) -> usize {
        self.adj.len()
    }

    fn code_under(&self, order: &[usize]) -> u64 {
        // order[p] = vertex placed at position p.
        let mut code = 0u64;
        let n = self.n();
        for i in 0..n {
            for j in i + 1..n {
                code <<= 1;
                if self.adj[order[i]] >> order[j] & 1 == 1 {
                    code |= 1;
                }
            }
        }
        code
    }

    /// Colour refinement starting from degrees.
    fn refine(&self) -> Vec<usize> {
        let n = self.n();
        let mut colour: Vec<usize> = self.adj.iter().map(|a| a.count_ones() as usize).collect();
        loop {
            let sigs: Vec<(usize, Vec<usize>)> = (0..n)
                .map(|v| {
                    let mut nb: Vec<usize> = (0..n)
                        .filter(|&w| self.adj[v] >> w & 1 == 1)
                        .map(|w| colour[w])
                        .collect();
                    nb.sort_unstable();
                    (colour[v], nb)
                })
                .collect();
            let mut distinct = sigs.clone();
            distinct.sort();
            distinct.dedup();
            let next: Vec<usize> = sigs.iter().map(|s| distinct.binary_search(s).unwrap()).collect();
            let classes = |c: &[usize]| c.iter().collect::<HashSet<_>>().len();
            if classes(&next) == classes(&colour) {
                return next;
            }
            colour = next;
        }
    }

    /// Largest code over orderings that sort vertices by refined colour.
    fn canonical(&self) -> u64 {
        let colour = self.refine();
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by_key(|&v| colour[v]);
        let mut cells: Vec<(usize, usize)> = Vec::new();
        let mut s = 0;
        for p in 1..=order.len() {
            if p == order.len() || colour[order[p]] != colour[order[s]] {
                cells.push((s, p));
                s = p;
            }
        }
        let mut best = 0u64;
        permute_cells(&mut order, &cells, 0, &mut |o| best = best.max(self.code_under(o)));
        best
    }

    fn to_graph(&self) -> Graph {
        let n = self.n();
        let vs: Vec<Vertex> = (1..=n as Vertex).collect();
        let es: Vec<(Vertex, Vertex)> = (0..n)
            .flat_map(|i| {
                (i + 1..n)
                    .filter(move |&j| self.adj[i] >> j & 1 == 1)
                    .map(move |j| (i as Vertex + 1, j as Vertex + 1))
            })
            .collect();
        Graph::new(vs, es).expect("simple graph")
    }
}

fn permute_cells(order: &mut [usize], cells: &[(usize, usize)], c: usize, visit: &mut impl FnMut(&[usize])) {
    if c == cells.len() {
        visit(order);
        return;
    }
    let (s, e) = cells[c];
    heap_permute(order, s, e - s, &mut |o| permute_cells(o, cells, c + 1, visit));
}

fn heap_permute(order: &mut [usize], s: usize, k: usize, visit: &mut dyn FnMut(&mut [usize])) {
    if k <= 1 {
        visit(order);
        return;
    }
    for i in 0..k {
        heap_permute(order, s, k - 1, visit);
        if k.is_multiple_of(2) {
            order.swap(s + i, s + k - 1);
        } else {
            order.swap(s, s + k - 1);
        }
    }
}

fn from_code(n: usize, code: u64) -> Small {
    let mut adj = vec![0u16; n];
    let mut bit = n * (n.saturating_sub(1)) / 2;
    for i in 0..n {
        for j in i + 1..n {
            bit -= 1;
            if code >> bit & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    Small { adj }
}

/// Canonical codes of all graphs on exactly `n` vertices, ascending.
fn codes(n: usize, planar_only: bool) -> Vec<u64> {
    assert!(n <= MAX_CORPUS_N, "corpus limited to {MAX_CORPUS_N} vertices");
    let mut level: Vec<u64> = vec![0];
    for size in 1..n.max(1) {
        let mut seen: HashSet<u64> = HashSet::new();
        let mut next: Vec<u64> = Vec::new();
        for &c in &level {
            let base = from_code(size, c);
            for s in 0u16..(1 << size) {
                let mut adj = base.adj.clone();
                for (i, a) in adj.iter_mut().enumerate() {
                    if s >> i & 1 == 1 {
                        *a |= 1 << size;
                    }
                }
                adj.push(s);
                let g = Small { adj };
                let code = g.canonical();
                if seen.insert(code) && (!planar_only || embed(&g.to_graph()).is_ok()) {
                    next.push(code);
                }
            }
        }
        next.sort_unstable();
        level = next;
    }
    if n == 0 {
        return Vec::new();
    }
    level
}

/// One graph per isomorphism class on vertices 1..=n.
pub fn all_graphs(n: usize, planar_only: bool) -> Vec<Graph> {
    codes(n, planar_only)
        .into_iter()
        .map(|c| from_code(n, c).to_graph())
        .collect()
}

/// Connected graphs on vertices 1..=n, one per isomorphism class.
pub fn connected_graphs(n: usize, planar_only: bool) -> Vec<Graph> {
    all_graphs(n, planar_only)
        .into_iter()
        .filter(Graph::is_connected)
        .collect()
}

/// Connected graphs with 1..=n vertices.
pub fn connected_graphs_up_to(n: usize, planar_only: bool) -> Vec<Graph> {
    (1..=n).flat_map(|k| connected_graphs(k, planar_only)).collect()
}

/// Canonical code of `g`; equal codes mean isomorphic graphs.
pub fn canonical_code(g: &Graph) -> u64 {
    assert!(g.n() <= MAX_CORPUS_N);
    let mut adj = vec![0u16; g.n()];
    for e in g.edges() {
        let a = g.index_of(e.u()).unwrap();
        let b = g.index_of(e.v()).unwrap();
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    Small { adj }.canonical()
}


#[cfg(test)]
mod timing {
    #[test]
    #[ignore]
    fn planar_counts() {
        let t = std::time::Instant::now();
        let c7 = super::connected_graphs(7, true).len();
        let c8 = super::connected_graphs(8, true).len();
        eprintln!("{c7} {c8} {:?}", t.elapsed());
    }
}
