use std::fmt;

use serde::{Deserialize, Serialize};

/// Sort of a variable: single vertex, single edge, vertex set or edge set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sort {
    Vertex,
    Edge,
    VertexSet,
    EdgeSet,
}

impl Sort {
    pub fn is_set(self) -> bool {
        matches!(self, Sort::VertexSet | Sort::EdgeSet)
    }

    /// Element sort of a set sort, or the sort itself.
    pub fn element(self) -> Sort {
        match self {
            Sort::VertexSet => Sort::Vertex,
            Sort::EdgeSet => Sort::Edge,
            s => s,
        }
    }

    pub fn uses_edges(self) -> bool {
        matches!(self, Sort::Edge | Sort::EdgeSet)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sort::Vertex => "v",
            Sort::Edge => "e",
            Sort::VertexSet => "V",
            Sort::EdgeSet => "E",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Sort> {
        match s {
            "v" => Some(Sort::Vertex),
            "e" => Some(Sort::Edge),
            "V" => Some(Sort::VertexSet),
            "E" => Some(Sort::EdgeSet),
            _ => None,
        }
    }

    /// Sort implied by a variable name when none is declared.
    ///
    /// Lower-case names starting with `e`, `f` or `g` are edges, other
    /// lower-case names are vertices. Upper-case names starting with `E` or `F`
    /// are edge sets, other upper-case names are vertex sets.
    pub fn from_name(name: &str) -> Sort {
        let c = name.chars().next().unwrap_or('v');
        match (c.is_uppercase(), c) {
            (false, 'e' | 'f' | 'g') => Sort::Edge,
            (false, _) => Sort::Vertex,
            (true, 'E' | 'F') => Sort::EdgeSet,
            (true, _) => Sort::VertexSet,
        }
    }
}

/// Variable with its sort.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Var {
    pub name: String,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: Sort) -> Self {
        Var {
            name: name.into(),
            sort,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// Restriction of a bound variable: membership for elements, inclusion for sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Within {
    All,
    Set(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Bool(bool),
    Eq(String, String),
    /// Vertex first, edge second.
    Inc(String, String),
    Edg(String, String),
    /// The virtual-edge relation alone.
    Vedg(String, String),
    Edg2(String, String, String),
    In(String, String),
    Sub(String, String),
    Mod {
        p: u32,
        q: u32,
        set: String,
    },
    /// Minor containment in the subgraph on a vertex set and an edge set.
    Minor {
        pattern: String,
        vertices: String,
        edges: String,
    },
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
    Quant {
        q: Quantifier,
        var: Var,
        within: Within,
        body: Box<Expr>,
    },
    /// Library invocation, kept for printing; `body` is its expansion.
    Call {
        name: String,
        consts: Vec<(String, String)>,
        args: Vec<String>,
        body: Box<Expr>,
    },
}

/// A formula with its free variables split into arguments and parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub expr: Expr,
    pub arguments: Vec<Var>,
    pub parameters: Vec<Var>,
}

impl Formula {
    /// Free variables, arguments first.
    pub fn free(&self) -> impl Iterator<Item = &Var> {
        self.arguments.iter().chain(self.parameters.iter())
    }

    pub fn is_sentence(&self) -> bool {
        self.arguments.is_empty() && self.parameters.is_empty()
    }

    /// Same formula with conjunctions and disjunctions sorted.
    pub fn canonical(&self) -> Formula {
        Formula {
            expr: self.expr.canonical(),
            arguments: self.arguments.clone(),
            parameters: self.parameters.clone(),
        }
    }

    /// Moves the named free variables from the arguments to the parameters.
    pub fn with_parameters(mut self, names: &[&str]) -> Formula {
        let (p, a): (Vec<Var>, Vec<Var>) = self
            .arguments
            .into_iter()
            .partition(|v| names.contains(&v.name.as_str()));
        self.arguments = a;
        self.parameters.extend(p);
        self
    }

    /// Number of AST nodes, library expansions included.
    pub fn size(&self) -> usize {
        self.expr.size()
    }
}

impl Expr {
    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn size(&self) -> usize {
        match self {
            Expr::Not(a) => 1 + a.size(),
            Expr::And(v) | Expr::Or(v) => 1 + v.iter().map(Expr::size).sum::<usize>(),
            Expr::Implies(a, b) | Expr::Iff(a, b) => 1 + a.size() + b.size(),
            Expr::Quant { body, .. } | Expr::Call { body, .. } => 1 + body.size(),
            _ => 1,
        }
    }

    pub fn canonical(&self) -> Expr {
        match self {
            Expr::Not(a) => Expr::Not(Box::new(a.canonical())),
            Expr::And(v) => Expr::And(sorted(v)),
            Expr::Or(v) => Expr::Or(sorted(v)),
            Expr::Implies(a, b) => Expr::Implies(Box::new(a.canonical()), Box::new(b.canonical())),
            Expr::Iff(a, b) => Expr::Iff(Box::new(a.canonical()), Box::new(b.canonical())),
            Expr::Quant { q, var, within, body } => Expr::Quant {
                q: *q,
                var: var.clone(),
                within: within.clone(),
                body: Box::new(body.canonical()),
            },
            Expr::Call {
                name,
                consts,
                args,
                body,
            } => Expr::Call {
                name: name.clone(),
                consts: consts.clone(),
                args: args.clone(),
                body: Box::new(body.canonical()),
            },
            e => e.clone(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Quant { .. } => 0,
            Expr::Iff(..) => 1,
            Expr::Implies(..) => 2,
            Expr::Or(v) if v.len() > 1 => 3,
            Expr::And(v) if v.len() > 1 => 4,
            _ => 5,
        }
    }
}

fn sorted(v: &[Expr]) -> Vec<Expr> {
    let mut out: Vec<(String, Expr)> = v.iter().map(|e| e.canonical()).map(|e| (e.to_string(), e)).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|p| p.1).collect()
}

fn child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Bool(b) => write!(f, "{b}"),
            Expr::Eq(a, b) => write!(f, "{a} = {b}"),
            Expr::Inc(v, e) => write!(f, "Inc({v},{e})"),
            Expr::Edg(x, y) => write!(f, "edg({x},{y})"),
            Expr::Vedg(x, y) => write!(f, "vedg({x},{y})"),
            Expr::Edg2(e, x, y) => write!(f, "edg2({e},{x},{y})"),
            Expr::In(x, s) => write!(f, "{x} in {s}"),
            Expr::Sub(a, b) => write!(f, "{a} sub {b}"),
            Expr::Mod { p, q, set } => write!(f, "mod[{p},{q}]({set})"),
            Expr::Minor {
                pattern,
                vertices,
                edges,
            } => write!(f, "minor[{pattern}]({vertices},{edges})"),
            Expr::Not(a) => match a.as_ref() {
                Expr::Eq(x, y) => write!(f, "{x} != {y}"),
                a => {
                    write!(f, "!")?;
                    child(f, a, 5)
                }
            },
            Expr::And(v) | Expr::Or(v) if v.is_empty() => write!(f, "{}", matches!(self, Expr::And(_))),
            Expr::And(v) | Expr::Or(v) if v.len() == 1 => write!(f, "{}", v[0]),
            Expr::And(v) | Expr::Or(v) => {
                let (op, p) = if matches!(self, Expr::And(_)) {
                    (" & ", 5)
                } else {
                    (" | ", 4)
                };
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(op)?;
                    }
                    child(f, e, p)?;
                }
                Ok(())
            }
            Expr::Implies(a, b) => {
                child(f, a, 3)?;
                f.write_str(" -> ")?;
                child(f, b, 2)
            }
            Expr::Iff(a, b) => {
                child(f, a, 2)?;
                f.write_str(" <-> ")?;
                child(f, b, 2)
            }
            Expr::Quant { q, var, within, body } => {
                let kw = if *q == Quantifier::Exists { "exists" } else { "forall" };
                write!(f, "{kw} {}:{}", var.name, var.sort.symbol())?;
                if let Within::Set(s) = within {
                    write!(f, " {} {s}", if var.sort.is_set() { "sub" } else { "in" })?;
                }
                write!(f, " . {body}")
            }
            Expr::Call { name, consts, args, .. } => {
                write!(f, "@{name}")?;
                if !consts.is_empty() {
                    let c: Vec<String> = consts.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    write!(f, "{{{}}}", c.join(","))?;
                }
                write!(f, "({})", args.join(","))
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}
