//! Brute-force evaluation over |G|₁ and |G|₂ with bitmask values.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::ast::{Expr, Formula, Quantifier, Sort, Var, Within};
use crate::error::{Error, Result};
use crate::generate::{complete_bipartite, complete_graph, cycle_graph};
use crate::graph::{Edge, Graph, Vertex};
use crate::minor::has_minor;

/// Default cap on quantifier iterations per evaluation.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Largest universe a structure may have on either sort.
pub const MAX_UNIVERSE: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Vertices only, with the adjacency relation.
    OneSorted,
    /// Vertices and edges, with incidence.
    TwoSorted,
}

/// A graph seen as a relational structure.
#[derive(Clone, Debug)]
pub struct Structure {
    host: Graph,
    mode: Mode,
    virtual_pairs: BTreeSet<Edge>,
    ends: Vec<(usize, usize)>,
    /// Real or virtual adjacency.
    adj: Vec<u64>,
    vadj: Vec<u64>,
}

impl Structure {
    pub fn new(host: &Graph, mode: Mode) -> Result<Self> {
        if host.n() > MAX_UNIVERSE || host.m() > MAX_UNIVERSE {
            return Err(Error::TooLarge(format!(
                "structures hold at most {MAX_UNIVERSE} vertices and edges"
            )));
        }
        let ends: Vec<(usize, usize)> = host
            .edges()
            .iter()
            .map(|e| (host.index_of(e.u()).unwrap(), host.index_of(e.v()).unwrap()))
            .collect();
        let mut adj = vec![0u64; host.n()];
        for &(a, b) in &ends {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Ok(Structure {
            host: host.clone(),
            mode,
            virtual_pairs: BTreeSet::new(),
            ends,
            vadj: vec![0; host.n()],
            adj,
        })
    }

    pub fn one_sorted(host: &Graph) -> Result<Self> {
        Self::new(host, Mode::OneSorted)
    }

    pub fn two_sorted(host: &Graph) -> Result<Self> {
        Self::new(host, Mode::TwoSorted)
    }

    /// Adds virtual pairs to the adjacency relation.
    pub fn with_virtual(mut self, pairs: &[(Vertex, Vertex)]) -> Result<Self> {
        for &(a, b) in pairs {
            if a == b {
                return Err(Error::SelfPair(a));
            }
            let ia = self.host.index_of(a).ok_or(Error::UnknownVertex(a))?;
            let ib = self.host.index_of(b).ok_or(Error::UnknownVertex(b))?;
            self.virtual_pairs.insert(Edge::new(a, b));
            self.adj[ia] |= 1 << ib;
            self.adj[ib] |= 1 << ia;
            self.vadj[ia] |= 1 << ib;
            self.vadj[ib] |= 1 << ia;
        }
        Ok(self)
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn virtual_pairs(&self) -> &BTreeSet<Edge> {
        &self.virtual_pairs
    }

    fn full(&self, sort: Sort) -> u64 {
        let k = if sort.uses_edges() {
            self.host.m()
        } else {
            self.host.n()
        };
        if k == 64 {
            u64::MAX
        } else {
            (1u64 << k) - 1
        }
    }

    fn encode(&self, var: &Var, value: &Value) -> Result<u64> {
        let bad = || Error::SortError(var.name.clone());
        let vi = |v: &Vertex| self.host.index_of(*v).ok_or(Error::UnknownVertex(*v));
        let ei = |e: &Edge| self.host.edge_id(*e).ok_or(Error::UnknownEdge(*e));
        match (var.sort, value) {
            (Sort::Vertex, Value::Vertex(v)) => Ok(vi(v)? as u64),
            (Sort::Edge, Value::Edge(e)) => Ok(ei(e)? as u64),
            (Sort::VertexSet, Value::VertexSet(s)) => s.iter().try_fold(0u64, |m, v| Ok(m | 1 << vi(v)?)),
            (Sort::EdgeSet, Value::EdgeSet(s)) => s.iter().try_fold(0u64, |m, e| Ok(m | 1 << ei(e)?)),
            _ => Err(bad()),
        }
    }

    fn decode(&self, sort: Sort, x: u64) -> Value {
        let ones = |m: u64| (0..64).filter(move |i| m >> i & 1 == 1);
        match sort {
            Sort::Vertex => Value::Vertex(self.host.vertices()[x as usize]),
            Sort::Edge => Value::Edge(self.host.edges()[x as usize]),
            Sort::VertexSet => Value::VertexSet(ones(x).map(|i| self.host.vertices()[i]).collect()),
            Sort::EdgeSet => Value::EdgeSet(ones(x).map(|i| self.host.edges()[i]).collect()),
        }
    }
}

/// Structure for the host with extra virtual pairs in its adjacency relation.
pub fn with_virtual_edges(g: &Graph, pairs: &[(Vertex, Vertex)]) -> Result<Structure> {
    Structure::two_sorted(g)?.with_virtual(pairs)
}

/// Value of a free variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Value {
    Vertex(Vertex),
    Edge(Edge),
    VertexSet(BTreeSet<Vertex>),
    EdgeSet(BTreeSet<Edge>),
}

impl Value {
    pub fn vertex_set(vs: impl IntoIterator<Item = Vertex>) -> Value {
        Value::VertexSet(vs.into_iter().collect())
    }

    pub fn edge_set(es: impl IntoIterator<Item = Edge>) -> Value {
        Value::EdgeSet(es.into_iter().collect())
    }
}

/// Values for free variables by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment(pub BTreeMap<String, Value>);

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn with(mut self, name: &str, value: Value) -> Self {
        self.0.insert(name.to_string(), value);
        self
    }

    pub fn set(&mut self, name: &str, value: Value) {
        self.0.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.0.get(name)
    }
}

/// Truth value and the number of quantifier steps spent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: bool,
    pub cost: u64,
}

pub(crate) fn pattern_graph(name: &str) -> Option<Graph> {
    let digits = name.get(1..)?;
    let d: Vec<u32> = digits.chars().map(|c| c.to_digit(10)).collect::<Option<_>>()?;
    match (name.chars().next()?, d.as_slice()) {
        ('K', [n]) if (1..=5).contains(n) => Some(complete_graph(*n)),
        ('K', [a, b]) if *a >= 1 && *b >= 1 && a + b <= 5 => Some(complete_bipartite(*a, *b)),
        ('C', [n]) if (3..=5).contains(n) => Some(cycle_graph(*n)),
        _ => None,
    }
}

type Slot = usize;

enum Node {
    Const(bool),
    Eq(Slot, Slot),
    Inc(Slot, Slot),
    Edg(Slot, Slot),
    Vedg(Slot, Slot),
    Edg2(Slot, Slot, Slot),
    In(Slot, Slot),
    Sub(Slot, Slot),
    Mod(u32, u32, Slot),
    Minor(usize, Slot, Slot),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Quant {
        exists: bool,
        slot: Slot,
        sort: Sort,
        within: Option<Slot>,
        body: Box<Node>,
        /// Memo table index and the free slots forming the key.
        memo: Option<(usize, Vec<Slot>)>,
    },
}

const V_SLOT: Slot = 0;
const E_SLOT: Slot = 1;

struct Compiler<'s> {
    s: &'s Structure,
    sorts: Vec<Sort>,
    scope: Vec<(String, Slot)>,
    free: HashMap<String, Slot>,
    patterns: Vec<Graph>,
    pattern_ids: HashMap<String, usize>,
    memos: usize,
}

/// Result of compiling a subformula: node, free slots, and whether it is costly.
type Compiled = (Node, BTreeSet<Slot>, bool);

impl<'s> Compiler<'s> {
    fn slot(&self, name: &str) -> Result<Slot> {
        if let Some(&(_, s)) = self.scope.iter().rev().find(|(n, _)| n == name) {
            return Ok(s);
        }
        if let Some(&s) = self.free.get(name) {
            return Ok(s);
        }
        match name {
            "V" => Ok(V_SLOT),
            "E" => Ok(E_SLOT),
            _ => Err(Error::UnboundVariable(name.to_string())),
        }
    }

    fn new_slot(&mut self, sort: Sort, name: &str) -> Result<Slot> {
        if self.s.mode == Mode::OneSorted && sort.uses_edges() {
            return Err(Error::SortError(name.to_string()));
        }
        self.sorts.push(sort);
        Ok(self.sorts.len() - 1)
    }

    fn atom(&self, names: &[&String]) -> Result<(Vec<Slot>, BTreeSet<Slot>)> {
        let slots: Vec<Slot> = names.iter().map(|n| self.slot(n)).collect::<Result<_>>()?;
        if self.s.mode == Mode::OneSorted {
            if let Some((n, _)) = names.iter().zip(&slots).find(|(_, &s)| self.sorts[s].uses_edges()) {
                return Err(Error::SortError(n.to_string()));
            }
        }
        let free = slots.iter().copied().filter(|&s| s > E_SLOT).collect();
        Ok((slots, free))
    }

    fn compile(&mut self, e: &Expr) -> Result<Compiled> {
        Ok(match e {
            Expr::Bool(b) => (Node::Const(*b), BTreeSet::new(), false),
            Expr::Eq(a, b) => {
                let (s, f) = self.atom(&[a, b])?;
                (Node::Eq(s[0], s[1]), f, false)
            }
            Expr::Inc(a, b) => {
                let (s, f) = self.atom(&[a, b])?;
                (Node::Inc(s[0], s[1]), f, false)
            }
            Expr::Edg(a, b) => {
                let (s, f) = self.atom(&[a, b])?;
                (Node::Edg(s[0], s[1]), f, false)
            }
            Expr::Vedg(a, b) => {
                let (s, f) = self.atom(&[a, b])?;
                (Node::Vedg(s[0], s[1]), f, false)
            }
            Expr::Edg2(a, b, c) => {
                let (s, f) = self.atom(&[a, b, c])?;
                (Node::Edg2(s[0], s[1], s[2]), f, false)
            }
            Expr::In(a, b) => {
                let (s, f) = self.atom(&[a, b])?;
                (Node::In(s[0], s[1]), f, false)
            }
            Expr::Sub(a, b) => {
                let (s, f) = self.atom(&[a, b])?;
                (Node::Sub(s[0], s[1]), f, false)
            }
            Expr::Mod { p, q, set } => {
                let (s, f) = self.atom(&[set])?;
                (Node::Mod(*p, *q, s[0]), f, false)
            }
            Expr::Minor {
                pattern,
                vertices,
                edges,
            } => {
                let (s, f) = self.atom(&[vertices, edges])?;
                let id = match self.pattern_ids.get(pattern) {
                    Some(&id) => id,
                    None => {
                        let g = pattern_graph(pattern).ok_or_else(|| Error::UnknownPredicate(pattern.clone()))?;
                        self.patterns.push(g);
                        self.pattern_ids.insert(pattern.clone(), self.patterns.len() - 1);
                        self.patterns.len() - 1
                    }
                };
                (Node::Minor(id, s[0], s[1]), f, true)
            }
            Expr::Not(a) => {
                let (n, f, c) = self.compile(a)?;
                (Node::Not(Box::new(n)), f, c)
            }
            Expr::And(v) | Expr::Or(v) => {
                let mut nodes = Vec::with_capacity(v.len());
                let mut free = BTreeSet::new();
                let mut costly = false;
                for x in v {
                    let (n, f, c) = self.compile(x)?;
                    nodes.push(n);
                    free.extend(f);
                    costly |= c;
                }
                let node = if matches!(e, Expr::And(_)) {
                    Node::And(nodes)
                } else {
                    Node::Or(nodes)
                };
                (node, free, costly)
            }
            Expr::Implies(a, b) | Expr::Iff(a, b) => {
                let (na, mut fa, ca) = self.compile(a)?;
                let (nb, fb, cb) = self.compile(b)?;
                fa.extend(fb);
                let node = if matches!(e, Expr::Implies(..)) {
                    Node::Implies(Box::new(na), Box::new(nb))
                } else {
                    Node::Iff(Box::new(na), Box::new(nb))
                };
                (node, fa, ca || cb)
            }
            Expr::Quant { q, var, within, body } => {
                let within = match within {
                    Within::All => None,
                    Within::Set(s) => Some(self.slot(s)?),
                };
                let slot = self.new_slot(var.sort, &var.name)?;
                self.scope.push((var.name.clone(), slot));
                let compiled = self.compile(body);
                self.scope.pop();
                let (b, mut free, costly) = compiled?;
                free.remove(&slot);
                if let Some(w) = within.filter(|&w| w > E_SLOT) {
                    free.insert(w);
                }
                let costly = costly || var.sort.is_set();
                let memo = if costly {
                    self.memos += 1;
                    Some((self.memos - 1, free.iter().copied().collect()))
                } else {
                    None
                };
                let node = Node::Quant {
                    exists: *q == Quantifier::Exists,
                    slot,
                    sort: var.sort,
                    within,
                    body: Box::new(b),
                    memo,
                };
                (node, free, costly)
            }
            Expr::Call { body, .. } => self.compile(body)?,
        })
    }
}

/// A compiled formula bound to a structure, with its memo tables.
pub struct Evaluator<'s> {
    s: &'s Structure,
    root: Node,
    env: Vec<u64>,
    free: Vec<(Var, Slot)>,
    patterns: Vec<Graph>,
    memo: Vec<HashMap<Vec<u64>, bool>>,
    minor_cache: HashMap<(usize, u64, u64), bool>,
    budget: u64,
    cost: u64,
}

impl<'s> Evaluator<'s> {
    pub fn new(s: &'s Structure, f: &Formula, budget: u64) -> Result<Self> {
        let mut c = Compiler {
            s,
            sorts: vec![Sort::VertexSet, Sort::EdgeSet],
            scope: Vec::new(),
            free: HashMap::new(),
            patterns: Vec::new(),
            pattern_ids: HashMap::new(),
            memos: 0,
        };
        let mut free = Vec::new();
        for var in f.free() {
            let slot = c.new_slot(var.sort, &var.name)?;
            c.free.insert(var.name.clone(), slot);
            free.push((var.clone(), slot));
        }
        let (root, _, _) = c.compile(&f.expr)?;
        let mut env = vec![0u64; c.sorts.len()];
        env[V_SLOT] = s.full(Sort::VertexSet);
        env[E_SLOT] = if s.mode == Mode::TwoSorted {
            s.full(Sort::EdgeSet)
        } else {
            0
        };
        Ok(Evaluator {
            s,
            root,
            env,
            free,
            patterns: c.patterns,
            memo: vec![HashMap::new(); c.memos],
            minor_cache: HashMap::new(),
            budget,
            cost: 0,
        })
    }

    /// Binds the free variables; every one must have a value.
    pub fn bind(&mut self, a: &Assignment) -> Result<()> {
        for (var, slot) in &self.free {
            let value = a
                .get(&var.name)
                .ok_or_else(|| Error::UnboundVariable(var.name.clone()))?;
            self.env[*slot] = self.s.encode(var, value)?;
        }
        Ok(())
    }

    pub fn cost(&self) -> u64 {
        self.cost
    }

    pub fn run(&mut self) -> Result<bool> {
        let root = std::mem::replace(&mut self.root, Node::Const(false));
        let r = self.eval(&root);
        self.root = root;
        r
    }

    fn minor(&mut self, p: usize, vm: u64, em: u64) -> bool {
        let ends = &self.s.ends;
        let em = (0..ends.len())
            .filter(|&i| em >> i & 1 == 1 && vm >> ends[i].0 & 1 == 1 && vm >> ends[i].1 & 1 == 1)
            .fold(0u64, |m, i| m | 1 << i);
        if let Some(&r) = self.minor_cache.get(&(p, vm, em)) {
            return r;
        }
        let h = &self.s.host;
        let vs: Vec<Vertex> = (0..h.n())
            .filter(|&i| vm >> i & 1 == 1)
            .map(|i| h.vertices()[i])
            .collect();
        let es: Vec<(Vertex, Vertex)> = (0..h.m())
            .filter(|&i| em >> i & 1 == 1)
            .map(|i| (h.edges()[i].u(), h.edges()[i].v()))
            .collect();
        let sub = Graph::new(vs, es).expect("subgraph of a simple graph");
        let r = has_minor(&sub, &self.patterns[p]);
        self.minor_cache.insert((p, vm, em), r);
        r
    }

    fn eval(&mut self, n: &Node) -> Result<bool> {
        let env = &self.env;
        Ok(match n {
            Node::Const(b) => *b,
            Node::Eq(a, b) => env[*a] == env[*b],
            Node::Inc(v, e) => {
                let (a, b) = self.s.ends[env[*e] as usize];
                env[*v] as usize == a || env[*v] as usize == b
            }
            Node::Edg(x, y) => self.s.adj[env[*x] as usize] >> env[*y] & 1 == 1,
            Node::Vedg(x, y) => self.s.vadj[env[*x] as usize] >> env[*y] & 1 == 1,
            Node::Edg2(e, x, y) => {
                let (a, b) = self.s.ends[env[*e] as usize];
                let (x, y) = (env[*x] as usize, env[*y] as usize);
                (a, b) == (x, y) || (a, b) == (y, x)
            }
            Node::In(x, s) => env[*s] >> env[*x] & 1 == 1,
            Node::Sub(a, b) => env[*a] & !env[*b] == 0,
            Node::Mod(p, q, s) => env[*s].count_ones() % q == *p,
            Node::Minor(p, vs, es) => {
                let (vm, em) = (env[*vs], env[*es]);
                self.minor(*p, vm, em)
            }
            Node::Not(a) => !self.eval(a)?,
            Node::And(v) => {
                for x in v {
                    if !self.eval(x)? {
                        return Ok(false);
                    }
                }
                true
            }
            Node::Or(v) => {
                for x in v {
                    if self.eval(x)? {
                        return Ok(true);
                    }
                }
                false
            }
            Node::Implies(a, b) => !self.eval(a)? || self.eval(b)?,
            Node::Iff(a, b) => self.eval(a)? == self.eval(b)?,
            Node::Quant {
                exists,
                slot,
                sort,
                within,
                body,
                memo,
            } => {
                let key = memo
                    .as_ref()
                    .map(|(id, free)| (*id, free.iter().map(|&s| env[s]).collect::<Vec<u64>>()));
                if let Some((id, k)) = &key {
                    if let Some(&r) = self.memo[*id].get(k) {
                        return Ok(r);
                    }
                }
                let r = self.quantify(*exists, *slot, *sort, *within, body)?;
                if let Some((id, k)) = key {
                    self.memo[id].insert(k, r);
                }
                r
            }
        })
    }

    fn step(&mut self) -> Result<()> {
        self.cost += 1;
        if self.cost > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn quantify(&mut self, exists: bool, slot: Slot, sort: Sort, within: Option<Slot>, body: &Node) -> Result<bool> {
        let domain = match within {
            Some(w) => self.env[w],
            None => self.s.full(sort),
        };
        if sort.is_set() {
            let mut sub = 0u64;
            loop {
                self.step()?;
                self.env[slot] = sub;
                if self.eval(body)? == exists {
                    return Ok(exists);
                }
                if sub == domain {
                    return Ok(!exists);
                }
                sub = sub.wrapping_sub(domain) & domain;
            }
        }
        let mut rest = domain;
        while rest != 0 {
            self.step()?;
            let i = rest.trailing_zeros() as u64;
            rest &= rest - 1;
            self.env[slot] = i;
            if self.eval(body)? == exists {
                return Ok(exists);
            }
        }
        Ok(!exists)
    }
}

/// Evaluates `f` under `a` with the default budget.
pub fn evaluate(s: &Structure, f: &Formula, a: &Assignment) -> Result<bool> {
    Ok(evaluate_with_budget(s, f, a, DEFAULT_BUDGET)?.value)
}

pub fn evaluate_with_budget(s: &Structure, f: &Formula, a: &Assignment, budget: u64) -> Result<Evaluation> {
    let mut ev = Evaluator::new(s, f, budget)?;
    ev.bind(a)?;
    let value = ev.run()?;
    Ok(Evaluation { value, cost: ev.cost })
}

/// All tuples of argument values satisfying `f`, with parameters taken from `params`.
///
/// Tuples come out in the order of the argument list, sorted.
pub fn extract_relation(s: &Structure, f: &Formula, params: &Assignment, budget: u64) -> Result<BTreeSet<Vec<Value>>> {
    let mut ev = Evaluator::new(s, f, budget)?;
    let arg_slots: Vec<(Sort, Slot)> = ev.free[..f.arguments.len()].iter().map(|(v, s)| (v.sort, *s)).collect();
    for (var, slot) in ev.free[f.arguments.len()..].to_vec() {
        let value = params
            .get(&var.name)
            .ok_or_else(|| Error::UnboundVariable(var.name.clone()))?;
        ev.env[slot] = s.encode(&var, value)?;
    }
    let mut out = BTreeSet::new();
    let mut tuple = vec![0u64; arg_slots.len()];
    extract_rec(&mut ev, &arg_slots, 0, &mut tuple, &mut out)?;
    Ok(out)
}

fn extract_rec(
    ev: &mut Evaluator<'_>,
    args: &[(Sort, Slot)],
    i: usize,
    tuple: &mut Vec<u64>,
    out: &mut BTreeSet<Vec<Value>>,
) -> Result<()> {
    if i == args.len() {
        ev.step()?;
        if ev.run()? {
            out.insert(
                args.iter()
                    .zip(tuple.iter())
                    .map(|(&(sort, _), &x)| ev.s.decode(sort, x))
                    .collect(),
            );
        }
        return Ok(());
    }
    let (sort, slot) = args[i];
    let full = ev.s.full(sort);
    let values: Box<dyn Iterator<Item = u64>> = if sort.is_set() {
        if full.count_ones() >= 32 {
            return Err(Error::BudgetExceeded(ev.budget));
        }
        Box::new(0..=full)
    } else {
        Box::new((0..64).filter(move |i| full >> i & 1 == 1))
    };
    for x in values {
        ev.env[slot] = x;
        tuple[i] = x;
        extract_rec(ev, args, i + 1, tuple, out)?;
    }
    Ok(())
}
