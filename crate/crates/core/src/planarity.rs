//! Planar embeddings as rotation systems, faces, layer numbers and stripping layers.
//!
//! Blocks are embedded with the Demoucron-Malgrange-Pertuiset path-addition
//! algorithm and glued at cut vertices by concatenating rotations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{biconnected_components, is_l_connected, Edge, Graph, Vertex};

/// A face of an embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub id: usize,
    /// Tails of the darts of the boundary walk, in walk order.
    pub walk: Vec<Vertex>,
    pub boundary_edges: Vec<Edge>,
    pub boundary_vertices: Vec<Vertex>,
    pub layer_number: Option<usize>,
}

impl Face {
    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.boundary_vertices.binary_search(&v).is_ok()
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.boundary_edges.binary_search(&e).is_ok()
    }
}

/// Stripping layers V_1..V_k, outermost first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerPartition {
    pub layers: Vec<Vec<Vertex>>,
    pub k: usize,
}

impl LayerPartition {
    pub fn new(layers: Vec<Vec<Vertex>>) -> Self {
        let k = layers.len();
        LayerPartition { layers, k }
    }

    /// 1-based layer of each vertex.
    pub fn layer_of(&self) -> BTreeMap<Vertex, usize> {
        let mut out = BTreeMap::new();
        for (i, l) in self.layers.iter().enumerate() {
            for &v in l {
                out.insert(v, i + 1);
            }
        }
        out
    }
}

/// Rotation system of a graph with a designated outer face.
#[derive(Clone, Debug)]
pub struct PlanarEmbedding {
    graph: Graph,
    /// Per vertex index, the cyclic neighbour order.
    rotation: Vec<Vec<Vertex>>,
    faces: Vec<Face>,
    /// Per vertex index and position in the sorted adjacency, the face left of the dart leaving v.
    dart_face: Vec<Vec<usize>>,
    outer: usize,
}

impl PlanarEmbedding {
    /// Embedding from an explicit rotation system. The outer face is the one
    /// containing `outer_dart` when given, else the default choice.
    pub fn from_rotation(
        g: &Graph,
        rotation: &BTreeMap<Vertex, Vec<Vertex>>,
        outer_dart: Option<(Vertex, Vertex)>,
    ) -> Result<Self> {
        let mut rot = Vec::with_capacity(g.n());
        for &v in g.vertices() {
            let r = rotation.get(&v).cloned().unwrap_or_default();
            let mut sorted = r.clone();
            sorted.sort_unstable();
            if sorted != g.neighbors(v) {
                return Err(Error::InvalidEmbedding(format!(
                    "rotation at {v} is not a permutation of its neighbours"
                )));
            }
            rot.push(r);
        }
        let mut emb = Self::from_rotation_vec(g.clone(), rot);
        let components = g.components().len();
        // Faces are counted per component.
        if g.n() as i64 - g.m() as i64 + emb.faces.len() as i64 != 2 * components as i64 {
            return Err(Error::InvalidEmbedding(format!(
                "Euler's formula fails: n={} m={} f={}",
                g.n(),
                g.m(),
                emb.faces.len()
            )));
        }
        if let Some((u, w)) = outer_dart {
            let f = emb
                .face_of_dart(u, w)
                .ok_or_else(|| Error::InvalidEmbedding(format!("({u},{w}) is not a dart")))?;
            emb.set_outer(f);
        }
        Ok(emb)
    }

    fn from_rotation_vec(graph: Graph, rotation: Vec<Vec<Vertex>>) -> Self {
        let n = graph.n();
        // Position of each neighbour in the rotation, per vertex index, aligned to the sorted adjacency.
        let mut rot_pos: Vec<Vec<usize>> = Vec::with_capacity(n);
        for i in 0..n {
            let nb = graph.neighbors(graph.vertices()[i]);
            let mut pos = vec![0; nb.len()];
            for (p, w) in rotation[i].iter().enumerate() {
                pos[nb.binary_search(w).expect("neighbour")] = p;
            }
            rot_pos.push(pos);
        }
        let mut dart_face: Vec<Vec<usize>> = (0..n)
            .map(|i| vec![usize::MAX; graph.neighbors(graph.vertices()[i]).len()])
            .collect();
        let mut faces = Vec::new();
        for i in 0..n {
            let v = graph.vertices()[i];
            let deg = graph.degree(v);
            if deg == 0 {
                faces.push(make_face(faces.len(), vec![v]));
                continue;
            }
            for p in 0..deg {
                if dart_face[i][p] != usize::MAX {
                    continue;
                }
                let id = faces.len();
                let mut walk = Vec::new();
                let (mut a, mut ap) = (i, p);
                loop {
                    if dart_face[a][ap] != usize::MAX {
                        break;
                    }
                    dart_face[a][ap] = id;
                    let av = graph.vertices()[a];
                    walk.push(av);
                    let w = graph.neighbors(av)[ap];
                    let wi = graph.index_of(w).expect("neighbour");
                    // Next dart leaves w towards the successor of a in w's rotation.
                    let wp = graph.neighbors(w).binary_search(&av).expect("symmetric");
                    let r = &rotation[wi];
                    let next = r[(rot_pos[wi][wp] + 1) % r.len()];
                    a = wi;
                    ap = graph.neighbors(w).binary_search(&next).expect("neighbour");
                }
                faces.push(make_face(id, walk));
            }
        }
        let mut emb = PlanarEmbedding {
            graph,
            rotation,
            faces,
            dart_face,
            outer: 0,
        };
        let outer = emb.default_outer();
        emb.set_outer(outer);
        emb
    }

    /// Largest boundary walk, ties to the lexicographically greatest vertex set.
    fn default_outer(&self) -> usize {
        (0..self.faces.len())
            .max_by(|&a, &b| face_preference(&self.faces[a], &self.faces[b]))
            .unwrap_or(0)
    }

    fn set_outer(&mut self, f: usize) {
        self.outer = f;
        let layers = self.compute_face_layers();
        for (face, l) in self.faces.iter_mut().zip(layers) {
            face.layer_number = l;
        }
    }

    /// Same rotation with another outer face.
    pub fn with_outer_face(&self, f: usize) -> Result<Self> {
        if f >= self.faces.len() {
            return Err(Error::UnknownFace(f));
        }
        let mut e = self.clone();
        e.set_outer(f);
        Ok(e)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: usize) -> Result<&Face> {
        self.faces.get(id).ok_or(Error::UnknownFace(id))
    }

    pub fn outer_face(&self) -> usize {
        self.outer
    }

    /// Cyclic neighbour order at `v`.
    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        match self.graph.index_of(v) {
            Some(i) => &self.rotation[i],
            None => &[],
        }
    }

    pub fn rotation_map(&self) -> BTreeMap<Vertex, Vec<Vertex>> {
        self.graph
            .vertices()
            .iter()
            .copied()
            .zip(self.rotation.iter().cloned())
            .collect()
    }

    /// Face on the left of the dart `u -> w`.
    pub fn face_of_dart(&self, u: Vertex, w: Vertex) -> Option<usize> {
        let i = self.graph.index_of(u)?;
        let p = self.graph.neighbors(u).binary_search(&w).ok()?;
        Some(self.dart_face[i][p])
    }

    /// Faces around `v` in rotation order: entry t lies between the edges to
    /// `rotation(v)[t]` and `rotation(v)[t+1]`.
    pub fn faces_around(&self, v: Vertex) -> Vec<usize> {
        let r = self.rotation(v);
        if r.is_empty() {
            return self.faces.iter().filter(|f| f.walk == [v]).map(|f| f.id).collect();
        }
        (0..r.len())
            .map(|t| self.face_of_dart(v, r[(t + 1) % r.len()]).expect("dart"))
            .collect()
    }

    /// Distinct faces incident to `v`, ascending.
    pub fn incident_faces(&self, v: Vertex) -> Vec<usize> {
        let mut fs = self.faces_around(v);
        fs.sort_unstable();
        fs.dedup();
        fs
    }

    fn compute_face_layers(&self) -> Vec<Option<usize>> {
        let nf = self.faces.len();
        let mut at_vertex: Vec<Vec<usize>> = vec![Vec::new(); self.graph.n()];
        for f in &self.faces {
            for &v in &f.boundary_vertices {
                at_vertex[self.graph.index_of(v).expect("vertex")].push(f.id);
            }
        }
        let mut layer = vec![None; nf];
        if nf == 0 {
            return layer;
        }
        layer[self.outer] = Some(0);
        let mut queue = VecDeque::from([self.outer]);
        while let Some(f) = queue.pop_front() {
            let l = layer[f].expect("queued faces have layers");
            for &v in &self.faces[f].boundary_vertices {
                for &h in &at_vertex[self.graph.index_of(v).expect("vertex")] {
                    if layer[h].is_none() {
                        layer[h] = Some(l + 1);
                        queue.push_back(h);
                    }
                }
            }
        }
        layer
    }

    /// Layer number per face id (shared-vertex adjacency, outer face 0).
    pub fn face_layer_numbers(&self) -> Vec<Option<usize>> {
        self.faces.iter().map(|f| f.layer_number).collect()
    }

    /// Vertex layers: one more than the lowest layer among incident faces.
    pub fn vertex_layers(&self) -> BTreeMap<Vertex, usize> {
        let mut out = BTreeMap::new();
        for f in &self.faces {
            if let Some(l) = f.layer_number {
                for &v in &f.boundary_vertices {
                    let e = out.entry(v).or_insert(l + 1);
                    *e = (*e).min(l + 1);
                }
            }
        }
        out
    }

    /// Stripping layers of this embedding with its outer face.
    pub fn layer_partition(&self) -> LayerPartition {
        let vl = self.vertex_layers();
        let k = vl.values().copied().max().unwrap_or(0);
        let mut layers = vec![Vec::new(); k];
        for (v, l) in vl {
            layers[l - 1].push(v);
        }
        LayerPartition::new(layers)
    }

    /// Whether some face boundary contains both edges.
    pub fn face_adjacent(&self, e: Edge, f: Edge) -> Result<bool> {
        if e.common_vertex(f).is_none() {
            return Err(Error::NoCommonVertex(e, f));
        }
        if e == f {
            return Ok(true);
        }
        Ok(self.faces.iter().any(|face| face.has_edge(e) && face.has_edge(f)))
    }

    /// Lowest-layer face at `v`. Ties go to the face reached from `incoming` by
    /// the fewest rotation steps at `v`, then to the smallest boundary edge ids.
    pub fn lowest_layer_face(&self, v: Vertex, incoming: Option<Edge>) -> Result<usize> {
        if !self.graph.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        let around = self.faces_around(v);
        let r = self.rotation(v);
        let d = r.len();
        let start = match incoming {
            Some(e) if e.contains(v) => r.iter().position(|&w| w == e.other(v)),
            _ => None,
        };
        let edge_ids = |f: usize| {
            let mut ids: Vec<usize> = self.faces[f]
                .boundary_edges
                .iter()
                .filter_map(|&e| self.graph.edge_id(e))
                .collect();
            ids.sort_unstable();
            ids
        };
        let key = |t: usize| {
            let f = around[t];
            let layer = self.faces[f].layer_number.unwrap_or(usize::MAX);
            // Face t lies between rotation positions t and t+1.
            let dist = match start {
                Some(s) => {
                    let a = (t + d - s) % d;
                    let b = (s + d - (t + 1) % d) % d;
                    a.min(b)
                }
                None => 0,
            };
            (layer, dist, edge_ids(f))
        };
        (0..around.len())
            .min_by_key(|&t| key(t))
            .map(|t| around[t])
            .ok_or(Error::UnknownVertex(v))
    }

    /// Incident edges of `v` in rotation order, starting at `anchor` and moving
    /// away from `co_anchor`, which comes last.
    pub fn incident_edge_order(&self, v: Vertex, anchor: Edge, co_anchor: Edge) -> Result<Vec<Edge>> {
        if !anchor.contains(v) || !co_anchor.contains(v) || anchor == co_anchor {
            return Err(Error::NotFaceAdjacentAnchors(anchor, co_anchor));
        }
        let r = self.rotation(v);
        let d = r.len();
        let pa = r.iter().position(|&w| w == anchor.other(v));
        let pc = r.iter().position(|&w| w == co_anchor.other(v));
        let (Some(pa), Some(pc)) = (pa, pc) else {
            return Err(Error::NotFaceAdjacentAnchors(anchor, co_anchor));
        };
        let step = if (pa + 1) % d == pc {
            d - 1
        } else if (pc + 1) % d == pa {
            1
        } else {
            return Err(Error::NotFaceAdjacentAnchors(anchor, co_anchor));
        };
        Ok((0..d).map(|t| Edge::new(v, r[(pa + t * step) % d])).collect())
    }
}

fn make_face(id: usize, walk: Vec<Vertex>) -> Face {
    let l = walk.len();
    let mut be: Vec<Edge> = if l >= 2 {
        (0..l).map(|i| Edge::new(walk[i], walk[(i + 1) % l])).collect()
    } else {
        Vec::new()
    };
    be.sort_unstable();
    be.dedup();
    let mut bv = walk.clone();
    bv.sort_unstable();
    bv.dedup();
    Face {
        id,
        walk,
        boundary_edges: be,
        boundary_vertices: bv,
        layer_number: None,
    }
}

fn face_preference(a: &Face, b: &Face) -> std::cmp::Ordering {
    a.walk
        .len()
        .cmp(&b.walk.len())
        .then_with(|| a.boundary_vertices.cmp(&b.boundary_vertices))
}

/// Faces of a 2-connected graph on local indices 0..n as oriented vertex cycles,
/// or None when the graph is not planar.
fn dmp_faces(n: usize, adj: &[Vec<usize>]) -> Option<Vec<Vec<usize>>> {
    let cycle = find_cycle(n, adj);
    let mut in_h = vec![false; n];
    let mut edge_in_h: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (t, &v) in cycle.iter().enumerate() {
        in_h[v] = true;
        let w = cycle[(t + 1) % cycle.len()];
        edge_in_h.insert((v.min(w), v.max(w)));
    }
    let mut rev = cycle.clone();
    rev.reverse();
    let mut faces: Vec<Vec<usize>> = vec![cycle, rev];
    let total_edges: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;

    while edge_in_h.len() < total_edges {
        // Fragments: chords between embedded vertices, and components of the rest.
        let mut fragments: Vec<(Vec<usize>, Vec<usize>)> = Vec::new(); // (attachments, path)
        for u in 0..n {
            if !in_h[u] {
                continue;
            }
            for &w in &adj[u] {
                if u < w && in_h[w] && !edge_in_h.contains(&(u, w)) {
                    fragments.push((vec![u, w], vec![u, w]));
                }
            }
        }
        let mut comp = vec![usize::MAX; n];
        for s in 0..n {
            if in_h[s] || comp[s] != usize::MAX {
                continue;
            }
            let id = s;
            comp[s] = id;
            let mut stack = vec![s];
            let mut attach = BTreeSet::new();
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if in_h[w] {
                        attach.insert(w);
                    } else if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            let attach: Vec<usize> = attach.into_iter().collect();
            let path = fragment_path(adj, &in_h, &comp, id, attach[0]);
            fragments.push((attach, path));
        }
        let face_sets: Vec<FixedBitSet> = faces
            .iter()
            .map(|f| {
                let mut b = FixedBitSet::with_capacity(n);
                for &v in f {
                    b.insert(v);
                }
                b
            })
            .collect();
        let mut best: Option<(usize, usize, usize)> = None; // (count, fragment, face)
        for (fi, (attach, _)) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&f| attach.iter().all(|&a| face_sets[f].contains(a)))
                .collect();
            if admissible.is_empty() {
                return None;
            }
            if best.is_none_or(|b| admissible.len() < b.0) {
                best = Some((admissible.len(), fi, admissible[0]));
            }
        }
        let (_, fi, f) = best.expect("some fragment remains");
        let path = &fragments[fi].1;
        let face = &faces[f];
        let l = face.len();
        let i = face.iter().position(|&x| x == path[0]).expect("attachment on face");
        let j = face
            .iter()
            .position(|&x| x == *path.last().unwrap())
            .expect("attachment on face");
        let interior = &path[1..path.len() - 1];
        let mut f1: Vec<usize> = Vec::new();
        let mut t = i;
        loop {
            f1.push(face[t]);
            if t == j {
                break;
            }
            t = (t + 1) % l;
        }
        f1.extend(interior.iter().rev());
        let mut f2: Vec<usize> = Vec::new();
        let mut t = j;
        loop {
            f2.push(face[t]);
            if t == i {
                break;
            }
            t = (t + 1) % l;
        }
        f2.extend(interior.iter());
        for &v in path {
            in_h[v] = true;
        }
        for w in path.windows(2) {
            edge_in_h.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
        faces[f] = f1;
        faces.push(f2);
    }
    Some(faces)
}

fn find_cycle(n: usize, adj: &[Vec<usize>]) -> Vec<usize> {
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    depth[0] = 0;
    let mut stack = vec![(0usize, 0usize)];
    while let Some(top) = stack.last_mut() {
        let (v, pos) = *top;
        if pos < adj[v].len() {
            top.1 += 1;
            let w = adj[v][pos];
            if w == parent[v] {
                continue;
            }
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                stack.push((w, 0));
            } else if depth[w] < depth[v] {
                let mut cyc = vec![v];
                let mut x = v;
                while x != w {
                    x = parent[x];
                    cyc.push(x);
                }
                return cyc;
            }
        } else {
            stack.pop();
        }
    }
    unreachable!("2-connected graphs with three or more vertices have a cycle")
}

/// Path from attachment `a` through component `id` to another attachment.
fn fragment_path(adj: &[Vec<usize>], in_h: &[bool], comp: &[usize], id: usize, a: usize) -> Vec<usize> {
    let n = adj.len();
    let mut prev = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for &w in &adj[a] {
        if !in_h[w] && comp[w] == id && prev[w] == usize::MAX {
            prev[w] = a;
            queue.push_back(w);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if in_h[w] && w != a {
                let mut path = vec![w, v];
                let mut x = v;
                while prev[x] != a {
                    x = prev[x];
                    path.push(x);
                }
                path.push(a);
                path.reverse();
                return path;
            }
            if !in_h[w] && comp[w] == id && prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragments of a 2-connected graph have two attachments")
}

/// Embeds `g`, or reports that it is not planar.
pub fn embed(g: &Graph) -> Result<PlanarEmbedding> {
    let (blocks, _) = biconnected_components(g);
    let mut rotation: Vec<Vec<Vertex>> = vec![Vec::new(); g.n()];
    for block in &blocks {
        if block.len() == 1 {
            let e = block[0];
            rotation[g.index_of(e.u()).unwrap()].push(e.v());
            rotation[g.index_of(e.v()).unwrap()].push(e.u());
            continue;
        }
        let mut verts: Vec<Vertex> = block.iter().flat_map(|e| [e.u(), e.v()]).collect();
        verts.sort_unstable();
        verts.dedup();
        let local = |v: Vertex| verts.binary_search(&v).unwrap();
        let mut adj = vec![Vec::new(); verts.len()];
        for e in block {
            adj[local(e.u())].push(local(e.v()));
            adj[local(e.v())].push(local(e.u()));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let faces = dmp_faces(verts.len(), &adj).ok_or(Error::NotPlanar)?;
        // sigma[w][u] = x when u -> w -> x are consecutive darts of a face.
        let mut sigma: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); verts.len()];
        for f in &faces {
            let l = f.len();
            for t in 0..l {
                sigma[f[t]].insert(f[(t + l - 1) % l], f[(t + 1) % l]);
            }
        }
        for (w, s) in sigma.iter().enumerate() {
            let start = adj[w][0];
            let mut x = start;
            let rot = &mut rotation[g.index_of(verts[w]).unwrap()];
            loop {
                rot.push(verts[x]);
                x = s[&x];
                if x == start {
                    break;
                }
            }
        }
    }
    Ok(PlanarEmbedding::from_rotation_vec(g.clone(), rotation))
}

pub fn faces(emb: &PlanarEmbedding) -> &[Face] {
    emb.faces()
}

pub fn face_layer_numbers(emb: &PlanarEmbedding) -> Vec<Option<usize>> {
    emb.face_layer_numbers()
}

/// Which outer faces [`stripping_layers_with`] tries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OuterFacePolicy {
    /// Every face when n is at most 12, else the preferred face only.
    Auto,
    Exhaustive,
    Preferred,
}

/// Stripping layers of `g` under its computed embedding; see [`OuterFacePolicy::Auto`].
pub fn stripping_layers(g: &Graph) -> Result<LayerPartition> {
    stripping_layers_with(g, OuterFacePolicy::Auto)
}

pub fn stripping_layers_with(g: &Graph, policy: OuterFacePolicy) -> Result<LayerPartition> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(fewest_layers(g, policy)?.1)
}

/// Best outer face of the computed embedding, replaced by an outerplanar
/// embedding when that one needs more than one layer and the graph allows it.
fn fewest_layers(g: &Graph, policy: OuterFacePolicy) -> Result<(PlanarEmbedding, LayerPartition)> {
    let emb = embed(g)?;
    let (f, p) = best_layering(&emb, policy);
    if p.k > 1 && g.is_connected() {
        if let Some(o) = outerplanar_embedding(g) {
            let p = o.layer_partition();
            return Ok((o, p));
        }
    }
    Ok((emb.with_outer_face(f)?, p))
}

/// Embedding of a connected graph with every vertex on the outer face, if one exists.
pub fn outerplanar_embedding(g: &Graph) -> Option<PlanarEmbedding> {
    let h = with_apex(g);
    let apex = *h.vertices().last()?;
    let eh = embed(&h).ok()?;
    let rotation: BTreeMap<Vertex, Vec<Vertex>> = g
        .vertices()
        .iter()
        .map(|&v| (v, eh.rotation(v).iter().copied().filter(|&w| w != apex).collect()))
        .collect();
    let emb = PlanarEmbedding::from_rotation(g, &rotation, None).ok()?;
    let f = emb.faces().iter().position(|f| f.boundary_vertices.len() == g.n())?;
    emb.with_outer_face(f).ok()
}

fn with_apex(g: &Graph) -> Graph {
    let apex = g.vertices().last().map_or(0, |&v| v + 1);
    let mut vs = g.vertices().to_vec();
    vs.push(apex);
    let mut es: Vec<(Vertex, Vertex)> = g.edges().iter().map(|e| (e.u(), e.v())).collect();
    es.extend(g.vertices().iter().map(|&v| (v, apex)));
    Graph::new(vs, es).expect("apex extension is simple")
}

/// Outer face giving the fewest layers, with ties to the preferred face, and its layers.
pub fn best_layering(emb: &PlanarEmbedding, policy: OuterFacePolicy) -> (usize, LayerPartition) {
    let exhaustive = match policy {
        OuterFacePolicy::Auto => emb.graph().n() <= 12,
        OuterFacePolicy::Exhaustive => true,
        OuterFacePolicy::Preferred => false,
    };
    if !exhaustive {
        let f = emb.default_outer();
        let e = emb.with_outer_face(f).expect("face exists");
        return (f, e.layer_partition());
    }
    let mut order: Vec<usize> = (0..emb.faces().len()).collect();
    order.sort_by(|&a, &b| face_preference(&emb.faces()[b], &emb.faces()[a]));
    let mut best: Option<(usize, LayerPartition)> = None;
    for f in order {
        let p = emb.with_outer_face(f).expect("face exists").layer_partition();
        if best.as_ref().is_none_or(|b| p.k < b.1.k) {
            best = Some((f, p));
        }
    }
    best.expect("every embedding has a face")
}

/// Embedding whose outer face minimises the number of layers (see [`best_layering`]).
pub fn layered_embedding(g: &Graph, policy: OuterFacePolicy) -> Result<PlanarEmbedding> {
    Ok(fewest_layers(g, policy)?.0)
}

/// Outerplanarity: the graph plus a vertex adjacent to everything is planar.
pub fn is_outerplanar(g: &Graph) -> bool {
    embed(&with_apex(g)).is_ok()
}

/// Checks that `p` partitions V, every layer induces an outerplanar graph, and
/// every edge joins equal or consecutive layers.
pub fn check_layer_characterization(g: &Graph, p: &LayerPartition) -> Result<bool> {
    let mut seen = BTreeSet::new();
    for l in &p.layers {
        for &v in l {
            if !g.contains_vertex(v) {
                return Err(Error::NotAPartition(format!("{v} is not a vertex")));
            }
            if !seen.insert(v) {
                return Err(Error::NotAPartition(format!("{v} appears twice")));
            }
        }
    }
    if seen.len() != g.n() {
        return Err(Error::NotAPartition("some vertex is in no layer".into()));
    }
    for l in &p.layers {
        if !is_outerplanar(&g.induced(l)?) {
            return Ok(false);
        }
    }
    let layer = p.layer_of();
    Ok(g.edges().iter().all(|e| layer[&e.u()].abs_diff(layer[&e.v()]) <= 1))
}

/// Induced cycle whose removal leaves a connected (possibly empty) graph.
pub fn is_nonseparating_induced_cycle(g: &Graph, c: &[Vertex]) -> bool {
    match g.induced(c) {
        Ok(h) => h.is_cycle() && g.connected_avoiding(c),
        Err(_) => false,
    }
}

/// All chordless cycles of `g` as sorted vertex lists.
pub fn induced_cycles(g: &Graph) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    for &s in g.vertices() {
        let mut path = vec![s];
        extend_chordless(g, &mut path, &mut out);
    }
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn extend_chordless(g: &Graph, path: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
    let s = path[0];
    let last = *path.last().unwrap();
    let t = path.len();
    for &w in g.neighbors(last) {
        if w <= s || path.contains(&w) {
            continue;
        }
        // No chord from w back into the path other than to s and last.
        let interior = if t >= 2 { &path[1..t - 1] } else { &[][..] };
        if interior.iter().any(|&x| g.has_edge(x, w)) {
            continue;
        }
        if t >= 2 && g.has_edge(w, s) {
            // Each cycle is found twice; keep the direction with path[1] < w.
            if path[1] < w {
                let mut c = path.clone();
                c.push(w);
                out.push(c);
            }
            continue;
        }
        path.push(w);
        extend_chordless(g, path, out);
        path.pop();
    }
}

/// Face boundaries of a 3-connected planar graph found combinatorially, as the
/// non-separating induced cycles.
pub fn face_boundaries_3connected(g: &Graph) -> Result<Vec<Vec<Vertex>>> {
    if !g.is_connected() || !is_l_connected(g, 3)? {
        return Err(Error::NotThreeConnected);
    }
    embed(g)?;
    Ok(induced_cycles(g)
        .into_iter()
        .filter(|c| g.connected_avoiding(c))
        .collect())
}

pub fn face_adjacent(emb: &PlanarEmbedding, e: Edge, f: Edge) -> Result<bool> {
    emb.face_adjacent(e, f)
}

/// Rotation-based incident edge order of `v` in a 3-connected planar graph.
pub fn incident_edge_order(g: &Graph, v: Vertex, anchor: Edge, co_anchor: Edge) -> Result<Vec<Edge>> {
    if !g.is_connected() || !is_l_connected(g, 3)? {
        return Err(Error::NotThreeConnected);
    }
    embed(g)?.incident_edge_order(v, anchor, co_anchor)
}

pub fn lowest_layer_face(emb: &PlanarEmbedding, v: Vertex, incoming: Option<Edge>) -> Result<&Face> {
    let f = emb.lowest_layer_face(v, incoming)?;
    emb.face(f)
}
