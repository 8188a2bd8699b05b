//! Named graph families and a seeded generator of k-outerplanar graphs.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

fn graph(vertices: impl IntoIterator<Item = Vertex>, edges: Vec<(Vertex, Vertex)>) -> Graph {
    Graph::new(vertices, edges).expect("family graphs are simple")
}

/// Cycle 1-2-..-n-1.
pub fn cycle_graph(n: u32) -> Graph {
    let edges = (1..=n).map(|i| (i, i % n + 1)).collect();
    graph(1..=n, edges)
}

/// Path 1-2-..-n.
pub fn path_graph(n: u32) -> Graph {
    graph(1..=n, (1..n).map(|i| (i, i + 1)).collect())
}

/// Complete graph on 1..n.
pub fn complete_graph(n: u32) -> Graph {
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            edges.push((i, j));
        }
    }
    graph(1..=n, edges)
}

/// K_{a,b} with sides 1..a and a+1..a+b.
pub fn complete_bipartite(a: u32, b: u32) -> Graph {
    let mut edges = Vec::new();
    for i in 1..=a {
        for j in a + 1..=a + b {
            edges.push((i, j));
        }
    }
    graph(1..=a + b, edges)
}

/// Star with centre 1 and leaves 2..=n.
pub fn star_graph(n: u32) -> Graph {
    graph(1..=n, (2..=n).map(|i| (1, i)).collect())
}

/// Wheel with hub 0 and rim cycle 1..k.
pub fn wheel_graph(k: u32) -> Graph {
    let mut edges: Vec<(Vertex, Vertex)> = (1..=k).map(|i| (i, i % k + 1)).collect();
    edges.extend((1..=k).map(|i| (0, i)));
    graph(0..=k, edges)
}

/// Triangular prism: triangles 1-2-3 and 4-5-6 joined by 1-4, 2-5, 3-6.
pub fn prism_graph() -> Graph {
    graph(
        1..=6,
        vec![(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (1, 4), (2, 5), (3, 6)],
    )
}

/// Cube drawn as two nested squares 1-2-3-4 and 5-6-7-8 with spokes i to i+4.
pub fn cube_graph() -> Graph {
    graph(
        1..=8,
        vec![
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 1),
            (5, 6),
            (6, 7),
            (7, 8),
            (8, 5),
            (1, 5),
            (2, 6),
            (3, 7),
            (4, 8),
        ],
    )
}

/// Cycle 1..6 with the chord {1,4}.
pub fn theta_graph() -> Graph {
    let mut edges: Vec<(Vertex, Vertex)> = (1..=6).map(|i| (i, i % 6 + 1)).collect();
    edges.push((1, 4));
    graph(1..=6, edges)
}

/// Two copies of K4 glued on the pair {1,2}, which is not itself an edge.
/// The copies are {1,2,3,4} and {1,2,5,6}.
pub fn double_k4() -> Graph {
    graph(
        1..=6,
        vec![
            (1, 3),
            (1, 4),
            (2, 3),
            (2, 4),
            (3, 4),
            (1, 5),
            (1, 6),
            (2, 5),
            (2, 6),
            (5, 6),
        ],
    )
}

/// A k-outerplanar instance together with the drawing it was built from.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratedInstance {
    pub graph: Graph,
    /// Counter-clockwise neighbour order per vertex.
    pub rotation: BTreeMap<Vertex, Vec<Vertex>>,
    /// Rings from the outside in; these are the stripping layers of the drawing.
    pub layers: Vec<Vec<Vertex>>,
    /// A dart `(u, w)` whose left side is the unbounded face.
    pub outer_dart: (Vertex, Vertex),
}

/// Knobs for [`generate_with`].
#[derive(Clone, Copy, Debug)]
pub struct GenParams {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    /// Chance that a candidate chord is kept.
    pub chord_prob: f64,
    /// Chance that a candidate edge between neighbouring rings is kept.
    pub link_prob: f64,
    /// Chance that the innermost ring is a single hub vertex (when sizes allow).
    pub hub_prob: f64,
}

impl GenParams {
    pub fn new(n: usize, k: usize, seed: u64) -> Self {
        GenParams {
            n,
            k,
            seed,
            chord_prob: 0.4,
            link_prob: 0.6,
            hub_prob: 0.3,
        }
    }
}

/// Seeded k-outerplanar graph on vertices 1..=n built from k nested rings.
pub fn generate(n: usize, k: usize, seed: u64) -> Result<GeneratedInstance> {
    generate_with(GenParams::new(n, k, seed))
}

pub fn generate_with(p: GenParams) -> Result<GeneratedInstance> {
    let GenParams { n, k, .. } = p;
    if k == 0 {
        return Err(Error::InfeasibleParameters("k must be at least 1".into()));
    }
    let min_n = if k == 1 { 3 } else { 3 * (k - 1) + 1 };
    if n < min_n {
        return Err(Error::InfeasibleParameters(format!(
            "{k} rings need at least {min_n} vertices, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let sizes = ring_sizes(&mut rng, n, k, p.hub_prob);

    let mut rings: Vec<Vec<Vertex>> = Vec::with_capacity(k);
    let mut next: Vertex = 1;
    for &s in &sizes {
        rings.push((next..next + s as Vertex).collect());
        next += s as Vertex;
    }

    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    // Chords of the innermost ring, chord arcs of the other rings (start -> end and
    // end -> start), and the targets of edges between neighbouring rings.
    let mut fwd: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    let mut arc_out: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let mut arc_in: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let mut inner: BTreeMap<Vertex, Vec<(usize, Vertex)>> = BTreeMap::new();
    let mut outer: BTreeMap<Vertex, Vec<(usize, Vertex)>> = BTreeMap::new();
    let mut blocked: Vec<Vec<bool>> = Vec::with_capacity(k);

    for (i, ring) in rings.iter().enumerate() {
        let s = ring.len();
        let mut block = vec![false; s];
        if s >= 3 {
            for j in 0..s {
                edges.push((ring[j], ring[(j + 1) % s]));
            }
        }
        if i + 1 == k {
            if s >= 4 {
                for (a, b) in random_triangulation(&mut rng, s) {
                    if rng.random_bool(p.chord_prob) {
                        edges.push((ring[a], ring[b]));
                        fwd.entry(ring[a]).or_default().push(ring[b]);
                        fwd.entry(ring[b]).or_default().push(ring[a]);
                    }
                }
            }
        } else if s >= 4 {
            let mut j = rng.random_range(0..s);
            let mut covered = 0;
            let start = j;
            loop {
                let len = rng.random_range(2..=3usize);
                if len > s - 2 || covered + len > s - 1 {
                    break;
                }
                if rng.random_bool(p.chord_prob) {
                    let (a, b) = (j, (j + len) % s);
                    edges.push((ring[a], ring[b]));
                    arc_out.insert(ring[a], ring[b]);
                    arc_in.insert(ring[b], ring[a]);
                    for t in 1..len {
                        block[(j + t) % s] = true;
                    }
                    j = (j + len) % s;
                    covered += len;
                } else {
                    j = (j + 1) % s;
                    covered += 1;
                }
                if (j + s - start) % s == 0 && covered > 0 {
                    break;
                }
            }
        }
        blocked.push(block);
    }

    for i in 0..k.saturating_sub(1) {
        let (sa, sb) = (rings[i].len(), rings[i + 1].len());
        let mut stairs = vec![(0usize, 0usize)];
        let (mut a, mut b) = (0, 0);
        while a + 1 < sa || b + 1 < sb {
            if b + 1 >= sb || (a + 1 < sa && rng.random_bool(0.5)) {
                a += 1;
            } else {
                b += 1;
            }
            stairs.push((a, b));
        }
        let usable: Vec<(usize, usize)> = stairs.into_iter().filter(|&(a, _)| !blocked[i][a]).collect();
        let mut kept: Vec<(usize, usize)> = usable
            .iter()
            .copied()
            .filter(|_| rng.random_bool(p.link_prob))
            .collect();
        if kept.is_empty() {
            kept.push(usable[rng.random_range(0..usable.len())]);
        }
        for (a, b) in kept {
            let (u, w) = (rings[i][a], rings[i + 1][b]);
            edges.push((u, w));
            inner.entry(u).or_default().push((b, w));
            outer.entry(w).or_default().push((a, u));
        }
    }

    let g = Graph::new(1..next, edges.iter().copied())?;

    let mut rotation = BTreeMap::new();
    for ring in &rings {
        let s = ring.len();
        for j in 0..s {
            let v = ring[j];
            let mut rot = Vec::new();
            if s >= 3 {
                let offset = |w: Vertex| (ring.iter().position(|&x| x == w).unwrap() + s - j) % s;
                let mut chords: Vec<(usize, Vertex)> =
                    fwd.get(&v).into_iter().flatten().map(|&w| (offset(w), w)).collect();
                chords.sort_unstable();
                rot.push(ring[(j + 1) % s]);
                rot.extend(chords.iter().map(|&(_, w)| w));
                rot.extend(arc_out.get(&v));
                let mut ins = inner.get(&v).cloned().unwrap_or_default();
                ins.sort_unstable_by(|x, y| y.cmp(x));
                rot.extend(ins.iter().map(|&(_, w)| w));
                rot.extend(arc_in.get(&v));
                rot.push(ring[(j + s - 1) % s]);
            }
            let mut outs = outer.get(&v).cloned().unwrap_or_default();
            outs.sort_unstable();
            rot.extend(outs.iter().map(|&(_, w)| w));
            rotation.insert(v, rot);
        }
    }

    let r0 = &rings[0];
    let outer_dart = (r0[r0.len() - 1], r0[0]);
    Ok(GeneratedInstance {
        graph: g,
        rotation,
        layers: rings,
        outer_dart,
    })
}

fn ring_sizes(rng: &mut ChaCha8Rng, n: usize, k: usize, hub_prob: f64) -> Vec<usize> {
    if k == 1 {
        return vec![n];
    }
    let hub = n < 3 * k || rng.random_bool(hub_prob);
    let mut sizes = vec![3; k];
    if hub {
        sizes[k - 1] = 1;
    }
    let mut rest = n - sizes.iter().sum::<usize>();
    while rest > 0 {
        let i = rng.random_range(0..if hub { k - 1 } else { k });
        sizes[i] += 1;
        rest -= 1;
    }
    sizes
}

/// Diagonals of a random triangulation of the polygon 0..s.
fn random_triangulation(rng: &mut ChaCha8Rng, s: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut stack = vec![(0..s).collect::<Vec<usize>>()];
    while let Some(poly) = stack.pop() {
        let l = poly.len();
        if l <= 3 {
            continue;
        }
        let a = rng.random_range(0..l);
        let off = rng.random_range(2..=l - 2);
        let b = (a + off) % l;
        let (lo, hi) = (a.min(b), a.max(b));
        out.push((poly[lo].min(poly[hi]), poly[lo].max(poly[hi])));
        stack.push(poly[lo..=hi].to_vec());
        let mut other: Vec<usize> = poly[hi..].to_vec();
        other.extend_from_slice(&poly[..=lo]);
        stack.push(other);
    }
    out
}

/// First seed at or after `seed` whose instance satisfies `accept`.
pub fn generate_filtered(
    params: GenParams,
    max_tries: u64,
    mut accept: impl FnMut(&GeneratedInstance) -> bool,
) -> Result<GeneratedInstance> {
    for t in 0..max_tries {
        let inst = generate_with(GenParams {
            seed: params.seed.wrapping_add(t),
            ..params
        })?;
        if accept(&inst) {
            return Ok(inst);
        }
    }
    Err(Error::InfeasibleParameters(format!(
        "no acceptable instance within {max_tries} seeds"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        assert_eq!((cycle_graph(5).n(), cycle_graph(5).m()), (5, 5));
        assert_eq!(complete_graph(4).m(), 6);
        assert_eq!(wheel_graph(4).degree(0), 4);
        assert_eq!(prism_graph().m(), 9);
        assert_eq!(theta_graph().m(), 7);
        assert!(!double_k4().has_edge(1, 2));
    }

    #[test]
    fn triangle_for_three_vertices() {
        let inst = generate(3, 1, 7).unwrap();
        assert_eq!(inst.graph, cycle_graph(3));
    }

    #[test]
    fn infeasible() {
        assert!(matches!(generate(2, 1, 0), Err(Error::InfeasibleParameters(_))));
        assert!(matches!(generate(6, 3, 0), Err(Error::InfeasibleParameters(_))));
        assert!(generate(7, 3, 0).is_ok());
    }

    #[test]
    fn deterministic() {
        let a = generate(20, 3, 42).unwrap();
        let b = generate(20, 3, 42).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.rotation, b.rotation);
    }

    #[test]
    fn rotation_lists_every_neighbour_once() {
        for seed in 0..50 {
            let inst = generate(18, 3, seed).unwrap();
            for &v in inst.graph.vertices() {
                let mut rot = inst.rotation[&v].clone();
                rot.sort_unstable();
                assert_eq!(rot, inst.graph.neighbors(v), "seed {seed} vertex {v}");
            }
        }
    }
}
