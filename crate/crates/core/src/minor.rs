//! Brute-force minor containment for small patterns.
//!
//! A pattern H with h vertices is a minor of G iff G has h disjoint connected
//! vertex sets (branch sets) with an edge of G between the sets of every edge
//! of H. The search assigns each vertex of G to a branch set or to none.

use crate::generate::{complete_bipartite, complete_graph};
use crate::graph::Graph;

/// Largest pattern the search accepts.
pub const MAX_PATTERN: usize = 5;

struct Search<'a> {
    g: &'a Graph,
    h: usize,
    h_adj: Vec<Vec<bool>>,
    assign: Vec<usize>,
    sizes: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl Search<'_> {
    fn run(&mut self, i: usize) -> bool {
        let n = self.g.n();
        // Unfilled branch sets need at least one vertex each among the rest.
        let empty = self.sizes.iter().filter(|&&s| s == 0).count();
        if empty > n - i {
            return false;
        }
        if i == n {
            return self.check();
        }
        for b in 0..self.h {
            self.assign[i] = b;
            self.sizes[b] += 1;
            if self.run(i + 1) {
                return true;
            }
            self.sizes[b] -= 1;
        }
        self.assign[i] = NONE;
        self.run(i + 1)
    }

    fn check(&self) -> bool {
        let g = self.g;
        let n = g.n();
        // Connectivity of each branch set.
        let mut seen = vec![false; n];
        for b in 0..self.h {
            let Some(s) = (0..n).find(|&v| self.assign[v] == b) else {
                return false;
            };
            let mut stack = vec![s];
            seen[s] = true;
            let mut count = 1;
            while let Some(v) = stack.pop() {
                for &w in g.neighbors(g.vertices()[v]) {
                    let j = g.index_of(w).unwrap();
                    if !seen[j] && self.assign[j] == b {
                        seen[j] = true;
                        count += 1;
                        stack.push(j);
                    }
                }
            }
            if count != self.sizes[b] {
                return false;
            }
        }
        let mut hit = vec![vec![false; self.h]; self.h];
        for e in g.edges() {
            let a = self.assign[g.index_of(e.u()).unwrap()];
            let b = self.assign[g.index_of(e.v()).unwrap()];
            if a != NONE && b != NONE && a != b {
                hit[a][b] = true;
                hit[b][a] = true;
            }
        }
        (0..self.h).all(|a| (0..self.h).all(|b| !self.h_adj[a][b] || hit[a][b]))
    }
}

/// Whether `pattern` is a minor of `g`. Patterns are limited to [`MAX_PATTERN`] vertices.
pub fn has_minor(g: &Graph, pattern: &Graph) -> bool {
    let h = pattern.n();
    assert!(h <= MAX_PATTERN, "pattern too large for brute-force minor search");
    if h > g.n() || pattern.m() > g.m() {
        return false;
    }
    if h == 0 {
        return true;
    }
    let mut h_adj = vec![vec![false; h]; h];
    for e in pattern.edges() {
        let a = pattern.index_of(e.u()).unwrap();
        let b = pattern.index_of(e.v()).unwrap();
        h_adj[a][b] = true;
        h_adj[b][a] = true;
    }
    let mut s = Search {
        g,
        h,
        h_adj,
        assign: vec![NONE; g.n()],
        sizes: vec![0; h],
    };
    s.run(0)
}

pub fn has_k4_minor(g: &Graph) -> bool {
    has_minor(g, &complete_graph(4))
}

pub fn has_k23_minor(g: &Graph) -> bool {
    has_minor(g, &complete_bipartite(2, 3))
}

/// Outerplanarity by forbidden minors.
pub fn is_outerplanar_by_minors(g: &Graph) -> bool {
    !has_k4_minor(g) && !has_k23_minor(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::*;

    #[test]
    fn small_patterns() {
        assert!(has_k4_minor(&complete_graph(4)));
        assert!(!has_k4_minor(&cycle_graph(5)));
        assert!(has_k4_minor(&wheel_graph(5)));
        assert!(has_k4_minor(&prism_graph()));
        assert!(has_k23_minor(&complete_bipartite(2, 3)));
        assert!(!has_k23_minor(&complete_graph(4)));
        assert!(!has_k23_minor(&theta_graph()));
        assert!(is_outerplanar_by_minors(&theta_graph()));
        assert!(!is_outerplanar_by_minors(&cube_graph()));
        assert!(has_minor(&complete_graph(5), &complete_graph(5)));
        assert!(!has_minor(&prism_graph(), &complete_graph(5)));
    }
}
