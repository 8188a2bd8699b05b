//! Text front-end for formulas.
//!
//! ```text
//! formula := ("exists" | "forall") binder ("," binder)* "." formula | iff
//! binder  := name [":" sort] [("in" | "sub") name]
//! iff     := imp ("<->" imp)*
//! imp     := or ["->" imp]
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | "(" formula ")" | quantified | atom
//! atom    := "true" | "false" | name "=" name | name "!=" name
//!          | name "in" name | name "sub" name
//!          | "Inc(" name "," name ")" | "edg(" x "," y ")" | "vedg(" x "," y ")"
//!          | "edg2(" e "," x "," y ")" | "mod[" p "," q "](" S ")"
//!          | "minor[" H "](" X "," F ")"
//!          | "@" Name ["{" key "=" value ("," key "=" value)* "}"] "(" names ")"
//! sort    := "v" | "e" | "V" | "E"
//! ```
//!
//! Unbound `V` and `E` denote all vertices and all edges. Other free variables
//! take their sort from their name (see [`Sort::from_name`]).

use std::collections::HashMap;

use super::ast::{Expr, Formula, Quantifier, Sort, Var, Within};
use super::library;
use crate::error::{Error, Result};

/// Upper bound on formula size, library expansions included.
pub const MAX_FORMULA_SIZE: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(u32),
    Sym(&'static str),
    End,
}

const SYMBOLS: [&str; 17] = [
    "<->", "->", "!=", "(", ")", ",", ".", "!", "&", "|", "=", "{", "}", "[", "]", "@", ":",
];

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                i += 1;
            }
            out.push((Tok::Ident(src[s..i].to_string()), s));
            continue;
        }
        if c.is_ascii_digit() {
            let s = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[s..i].parse().map_err(|_| syntax(s, "number too large"))?;
            out.push((Tok::Num(n), s));
            continue;
        }
        for sym in SYMBOLS {
            if src[i..].starts_with(sym) {
                out.push((Tok::Sym(sym), i));
                i += sym.len();
                continue 'outer;
            }
        }
        return Err(syntax(i, &format!("unexpected character {c:?}")));
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

fn syntax(position: usize, message: &str) -> Error {
    Error::SyntaxError {
        position,
        message: message.to_string(),
    }
}

const KEYWORDS: [&str; 12] = [
    "exists", "forall", "in", "sub", "true", "false", "Inc", "edg", "vedg", "edg2", "mod", "minor",
];

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    scope: Vec<Var>,
    free: Vec<Var>,
    declared: Option<&'a [Var]>,
    fresh: usize,
}

/// Parses a formula; every free variable becomes an argument.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser::new(text, None)?;
    let expr = p.formula()?;
    p.finish(expr)
}

/// Parses a formula whose free variables must all be among `declared`.
pub(crate) fn parse_declared(text: &str, arguments: Vec<Var>, parameters: Vec<Var>) -> Result<Formula> {
    let declared: Vec<Var> = arguments.iter().chain(parameters.iter()).cloned().collect();
    let mut p = Parser::new(text, Some(&declared))?;
    let expr = p.formula()?;
    p.expect_end()?;
    if expr.size() > MAX_FORMULA_SIZE {
        return Err(Error::TooLarge(format!("formula has {} nodes", expr.size())));
    }
    Ok(Formula {
        expr,
        arguments,
        parameters,
    })
}

impl<'a> Parser<'a> {
    fn new(text: &str, declared: Option<&'a [Var]>) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            scope: Vec::new(),
            free: Vec::new(),
            declared,
            fresh: 0,
        })
    }

    fn finish(mut self, expr: Expr) -> Result<Formula> {
        self.expect_end()?;
        if expr.size() > MAX_FORMULA_SIZE {
            return Err(Error::TooLarge(format!("formula has {} nodes", expr.size())));
        }
        Ok(Formula {
            expr,
            arguments: std::mem::take(&mut self.free),
            parameters: Vec::new(),
        })
    }

    fn expect_end(&self) -> Result<()> {
        match &self.toks[self.pos] {
            (Tok::End, _) => Ok(()),
            (_, at) => Err(syntax(*at, "trailing input")),
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == w)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.is_sym(s);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(syntax(self.at(), &format!("expected '{s}'")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        let at = self.at();
        match self.bump() {
            Tok::Ident(s) => Ok(s),
            _ => Err(syntax(at, "expected a name")),
        }
    }

    fn name(&mut self) -> Result<String> {
        let at = self.at();
        let s = self.ident()?;
        if KEYWORDS.contains(&s.as_str()) {
            return Err(syntax(at, &format!("keyword {s} used as a name")));
        }
        Ok(s)
    }

    fn num(&mut self) -> Result<u32> {
        let at = self.at();
        match self.bump() {
            Tok::Num(n) => Ok(n),
            _ => Err(syntax(at, "expected a number")),
        }
    }

    /// Sort of a name in the current scope, registering free variables.
    fn sort_of(&mut self, name: &str) -> Result<Sort> {
        if let Some(v) = self.scope.iter().rev().find(|v| v.name == name) {
            return Ok(v.sort);
        }
        if let Some(v) = self.free.iter().find(|v| v.name == name) {
            return Ok(v.sort);
        }
        if name == "V" {
            return Ok(Sort::VertexSet);
        }
        if name == "E" {
            return Ok(Sort::EdgeSet);
        }
        let sort = match self.declared {
            Some(d) => match d.iter().find(|v| v.name == name) {
                Some(v) => v.sort,
                None => return Err(Error::UnboundVariable(name.to_string())),
            },
            None => Sort::from_name(name),
        };
        self.free.push(Var::new(name, sort));
        Ok(sort)
    }

    fn want(&mut self, name: &str, sort: Sort) -> Result<()> {
        if self.sort_of(name)? == sort {
            Ok(())
        } else {
            Err(Error::SortError(name.to_string()))
        }
    }

    fn formula(&mut self) -> Result<Expr> {
        if self.is_word("exists") || self.is_word("forall") {
            return self.quantified();
        }
        self.iff()
    }

    fn quantified(&mut self) -> Result<Expr> {
        let q = if self.ident()? == "exists" {
            Quantifier::Exists
        } else {
            Quantifier::Forall
        };
        let mut binders = Vec::new();
        loop {
            let name = self.name()?;
            let sort = if self.eat_sym(":") {
                let at = self.at();
                let s = self.ident()?;
                Sort::from_symbol(&s).ok_or_else(|| syntax(at, "sort must be one of v, e, V, E"))?
            } else {
                Sort::from_name(&name)
            };
            let within = if self.is_word("in") || self.is_word("sub") {
                let kw = self.ident()?;
                if (kw == "sub") != sort.is_set() {
                    return Err(syntax(self.at(), "use 'in' for elements and 'sub' for sets"));
                }
                let set = self.name()?;
                let want = if sort.is_set() {
                    sort
                } else if sort == Sort::Vertex {
                    Sort::VertexSet
                } else {
                    Sort::EdgeSet
                };
                self.want(&set, want)?;
                Within::Set(set)
            } else {
                Within::All
            };
            let var = Var::new(name, sort);
            self.scope.push(var.clone());
            binders.push((var, within));
            if !self.eat_sym(",") {
                break;
            }
        }
        self.expect_sym(".")?;
        let mut body = self.formula()?;
        for (var, within) in binders.into_iter().rev() {
            self.scope.pop();
            body = Expr::Quant {
                q,
                var,
                within,
                body: Box::new(body),
            };
        }
        Ok(body)
    }

    fn iff(&mut self) -> Result<Expr> {
        let mut left = self.imp()?;
        while self.eat_sym("<->") {
            let right = self.imp()?;
            left = Expr::Iff(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Expr> {
        let left = self.or()?;
        if self.eat_sym("->") {
            let right = if self.is_word("exists") || self.is_word("forall") {
                self.quantified()?
            } else {
                self.imp()?
            };
            return Ok(Expr::Implies(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Expr> {
        let mut items = vec![self.and()?];
        while self.eat_sym("|") {
            items.push(self.and()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Expr::Or(items)
        })
    }

    fn and(&mut self) -> Result<Expr> {
        let mut items = vec![self.unary()?];
        while self.eat_sym("&") {
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Expr::And(items)
        })
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_sym("!") {
            return Ok(Expr::not(self.unary()?));
        }
        if self.eat_sym("(") {
            let e = self.formula()?;
            self.expect_sym(")")?;
            return Ok(e);
        }
        if self.is_word("exists") || self.is_word("forall") {
            return self.quantified();
        }
        if self.eat_sym("@") {
            return self.call();
        }
        self.atom()
    }

    fn pair(&mut self) -> Result<(String, String)> {
        self.expect_sym("(")?;
        let a = self.name()?;
        self.expect_sym(",")?;
        let b = self.name()?;
        self.expect_sym(")")?;
        Ok((a, b))
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.at();
        let word = match self.peek() {
            Tok::Ident(w) => w.clone(),
            _ => return Err(syntax(at, "expected a formula")),
        };
        match word.as_str() {
            "true" | "false" => {
                self.bump();
                Ok(Expr::Bool(word == "true"))
            }
            "Inc" => {
                self.bump();
                let (a, b) = self.pair()?;
                let (sa, sb) = (self.sort_of(&a)?, self.sort_of(&b)?);
                match (sa, sb) {
                    (Sort::Vertex, Sort::Edge) => Ok(Expr::Inc(a, b)),
                    (Sort::Edge, Sort::Vertex) => Ok(Expr::Inc(b, a)),
                    (Sort::Vertex, _) => Err(Error::SortError(b)),
                    _ => Err(Error::SortError(a)),
                }
            }
            "edg" | "vedg" => {
                self.bump();
                let (a, b) = self.pair()?;
                self.want(&a, Sort::Vertex)?;
                self.want(&b, Sort::Vertex)?;
                Ok(if word == "edg" {
                    Expr::Edg(a, b)
                } else {
                    Expr::Vedg(a, b)
                })
            }
            "edg2" => {
                self.bump();
                self.expect_sym("(")?;
                let e = self.name()?;
                self.expect_sym(",")?;
                let x = self.name()?;
                self.expect_sym(",")?;
                let y = self.name()?;
                self.expect_sym(")")?;
                self.want(&e, Sort::Edge)?;
                self.want(&x, Sort::Vertex)?;
                self.want(&y, Sort::Vertex)?;
                Ok(Expr::Edg2(e, x, y))
            }
            "mod" => {
                self.bump();
                self.expect_sym("[")?;
                let p = self.num()?;
                self.expect_sym(",")?;
                let q = self.num()?;
                self.expect_sym("]")?;
                if p >= q {
                    return Err(syntax(at, "mod[p,q] needs p < q"));
                }
                self.expect_sym("(")?;
                let set = self.name()?;
                self.expect_sym(")")?;
                if !self.sort_of(&set)?.is_set() {
                    return Err(Error::SortError(set));
                }
                Ok(Expr::Mod { p, q, set })
            }
            "minor" => {
                self.bump();
                self.expect_sym("[")?;
                let pat_at = self.at();
                let pattern = self.ident()?;
                if super::eval::pattern_graph(&pattern).is_none() {
                    return Err(syntax(pat_at, "unknown minor pattern"));
                }
                self.expect_sym("]")?;
                let (x, f) = self.pair()?;
                self.want(&x, Sort::VertexSet)?;
                self.want(&f, Sort::EdgeSet)?;
                Ok(Expr::Minor {
                    pattern,
                    vertices: x,
                    edges: f,
                })
            }
            _ => {
                let a = self.name()?;
                let op_at = self.at();
                if self.eat_sym("=") || self.is_sym("!=") {
                    let negated = self.eat_sym("!=");
                    let b = self.name()?;
                    if self.sort_of(&a)? != self.sort_of(&b)? {
                        return Err(Error::SortError(b));
                    }
                    let e = Expr::Eq(a, b);
                    return Ok(if negated { Expr::not(e) } else { e });
                }
                if self.is_word("in") || self.is_word("sub") {
                    let kw = self.ident()?;
                    let b = self.name()?;
                    let (sa, sb) = (self.sort_of(&a)?, self.sort_of(&b)?);
                    if kw == "in" {
                        if sa.is_set() || !sb.is_set() || sb.element() != sa {
                            return Err(Error::SortError(if sa.is_set() { a } else { b }));
                        }
                        return Ok(Expr::In(a, b));
                    }
                    if !sa.is_set() || sa != sb {
                        return Err(Error::SortError(if sa.is_set() { b } else { a }));
                    }
                    return Ok(Expr::Sub(a, b));
                }
                Err(syntax(op_at, "expected '=', '!=', 'in' or 'sub'"))
            }
        }
    }

    fn call(&mut self) -> Result<Expr> {
        let at = self.at();
        let name = self.ident()?;
        let mut consts = Vec::new();
        if self.eat_sym("{") {
            loop {
                let key = self.ident()?;
                self.expect_sym("=")?;
                let vat = self.at();
                let value = match self.bump() {
                    Tok::Num(n) => n.to_string(),
                    Tok::Ident(s) => s,
                    _ => return Err(syntax(vat, "expected a constant")),
                };
                consts.push((key, value));
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.expect_sym("}")?;
        }
        self.expect_sym("(")?;
        let mut args = Vec::new();
        if !self.eat_sym(")") {
            loop {
                args.push(self.name()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.expect_sym(")")?;
        }
        let lib = library::library(&name, &consts)?;
        let formals: Vec<&Var> = lib.free().collect();
        if formals.len() != args.len() {
            return Err(syntax(
                at,
                &format!("@{name} takes {} arguments, got {}", formals.len(), args.len()),
            ));
        }
        let mut map = HashMap::new();
        for (f, a) in formals.iter().zip(&args) {
            if self.sort_of(a)? != f.sort {
                return Err(Error::SortError(a.clone()));
            }
            map.insert(f.name.clone(), a.clone());
        }
        let body = substitute(&lib.expr, &map, &mut self.fresh);
        Ok(Expr::Call {
            name,
            consts,
            args,
            body: Box::new(body),
        })
    }
}

/// Renames free variables by `map`, renaming binders that would capture.
pub(crate) fn substitute(e: &Expr, map: &HashMap<String, String>, fresh: &mut usize) -> Expr {
    let r = |n: &String| map.get(n).cloned().unwrap_or_else(|| n.clone());
    match e {
        Expr::Bool(b) => Expr::Bool(*b),
        Expr::Eq(a, b) => Expr::Eq(r(a), r(b)),
        Expr::Inc(a, b) => Expr::Inc(r(a), r(b)),
        Expr::Edg(a, b) => Expr::Edg(r(a), r(b)),
        Expr::Vedg(a, b) => Expr::Vedg(r(a), r(b)),
        Expr::Edg2(a, b, c) => Expr::Edg2(r(a), r(b), r(c)),
        Expr::In(a, b) => Expr::In(r(a), r(b)),
        Expr::Sub(a, b) => Expr::Sub(r(a), r(b)),
        Expr::Mod { p, q, set } => Expr::Mod {
            p: *p,
            q: *q,
            set: r(set),
        },
        Expr::Minor {
            pattern,
            vertices,
            edges,
        } => Expr::Minor {
            pattern: pattern.clone(),
            vertices: r(vertices),
            edges: r(edges),
        },
        Expr::Not(a) => Expr::not(substitute(a, map, fresh)),
        Expr::And(v) => Expr::And(v.iter().map(|x| substitute(x, map, fresh)).collect()),
        Expr::Or(v) => Expr::Or(v.iter().map(|x| substitute(x, map, fresh)).collect()),
        Expr::Implies(a, b) => Expr::Implies(Box::new(substitute(a, map, fresh)), Box::new(substitute(b, map, fresh))),
        Expr::Iff(a, b) => Expr::Iff(Box::new(substitute(a, map, fresh)), Box::new(substitute(b, map, fresh))),
        Expr::Quant { q, var, within, body } => {
            let within = match within {
                Within::All => Within::All,
                Within::Set(s) => Within::Set(r(s)),
            };
            let mut inner = map.clone();
            inner.remove(&var.name);
            let mut var = var.clone();
            if inner.values().any(|v| *v == var.name) {
                *fresh += 1;
                let renamed = format!("{}'{}", var.name, fresh);
                inner.insert(var.name.clone(), renamed.clone());
                var.name = renamed;
            }
            Expr::Quant {
                q: *q,
                var,
                within,
                body: Box::new(substitute(body, &inner, fresh)),
            }
        }
        Expr::Call {
            name,
            consts,
            args,
            body,
        } => Expr::Call {
            name: name.clone(),
            consts: consts.clone(),
            args: args.iter().map(r).collect(),
            body: Box::new(substitute(body, map, fresh)),
        },
    }
}
