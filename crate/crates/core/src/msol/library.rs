//! Catalog of named predicates.
//!
//! Bodies are written in the formula syntax and may call each other. Elements
//! of a set argument are quantified with `in`/`sub` restrictions where the
//! definition allows it, which keeps the evaluation cost down without changing
//! the meaning.

use super::ast::{Formula, Sort, Var};
use super::parser::parse_declared;
use crate::error::{Error, Result};

/// One catalog entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    /// Names of the constants the entry needs.
    pub constants: &'static [&'static str],
    /// Argument list shown to users; parameters follow the `|`.
    pub signature: &'static str,
    pub summary: &'static str,
    /// Parameter count quoted alongside the definition, when there is one.
    pub quoted_parameters: Option<&'static str>,
}

const fn entry(
    name: &'static str,
    constants: &'static [&'static str],
    signature: &'static str,
    summary: &'static str,
) -> CatalogEntry {
    CatalogEntry {
        name,
        constants,
        signature,
        summary,
        quoted_parameters: None,
    }
}

const fn quoted(mut e: CatalogEntry, q: &'static str) -> CatalogEntry {
    e.quoted_parameters = Some(q);
    e
}

static CATALOG: &[CatalogEntry] = &[
    entry("Adj", &[], "(v, w, EA)", "v and w are joined by an edge of EA"),
    entry("Edge", &[], "(e, v, w)", "e joins v and w"),
    entry("IncV", &[], "(X, EA)", "X is the set of endpoints of EA"),
    entry(
        "IncE",
        &[],
        "(EA, X)",
        "EA is the set of edges with both endpoints in X",
    ),
    entry("Within", &[], "(EA, X)", "every edge of EA has both endpoints in X"),
    entry("Deg", &["k"], "(v, EA)", "exactly k edges of EA meet v"),
    entry("AtMost", &["k"], "(X)", "X has at most k elements"),
    entry("Conn", &[], "(X, EA)", "the graph (X, EA restricted to X) is connected"),
    entry("Conn1", &[], "(X)", "X is connected under the adjacency relation"),
    entry("ConnE", &[], "(EA)", "the edges of EA form one connected piece"),
    entry(
        "Conn_k",
        &["k"],
        "(X, EA)",
        "(X, EA) has no separating set of fewer than k vertices",
    ),
    entry("Acyclic", &[], "(EA)", "EA contains no cycle"),
    entry("Cycle", &[], "(X, EA)", "(X, EA) is a cycle"),
    entry("Tree", &[], "(X, EA)", "(X, EA) is a tree"),
    entry("Path", &[], "(X, EA)", "(X, EA) is a path"),
    entry("PathXY", &[], "(x, y, EP)", "EP is the edge set of a simple x-y path"),
    entry(
        "Minor_H",
        &["H"],
        "(X, EA)",
        "(X, EA) has H as a minor; H in K1..K5, Kab with a+b <= 5, C3..C5",
    ),
    entry(
        "Outerplanar",
        &[],
        "(X, EA)",
        "(X, EA) has neither K4 nor K2,3 as a minor",
    ),
    quoted(
        entry(
            "LayerPartition",
            &["k"],
            "(X1, ..., Xk)",
            "X1..Xk partition V into outerplanar layers with edges between consecutive layers only",
        ),
        "k",
    ),
    entry("KOuterplanar", &["k"], "()", "some k sets form a layer partition"),
    entry(
        "FundCycSet",
        &[],
        "(e, EC | F)",
        "EC is the edge set of the fundamental cycle of e",
    ),
    entry(
        "FundCyc",
        &[],
        "(v, e | F)",
        "v lies on the fundamental cycle of the non-tree edge e",
    ),
    entry(
        "FundCycE",
        &[],
        "(g, e | F)",
        "g lies on the fundamental cycle of the non-tree edge e",
    ),
    quoted(
        entry(
            "vr_le",
            &["k"],
            "(| F)",
            "every vertex lies on at most k fundamental cycles",
        ),
        "|F| = 1",
    ),
    quoted(
        entry(
            "er_le",
            &["k"],
            "(| F)",
            "every tree edge lies on at most k fundamental cycles",
        ),
        "|F| = 1",
    ),
    entry(
        "CycMeets",
        &[],
        "(e, v, EB | F)",
        "the fundamental cycle of e passes v and shares an edge with EB",
    ),
    entry(
        "CycHits",
        &[],
        "(e, EB | F)",
        "the fundamental cycle of e shares an edge with EB",
    ),
    entry(
        "C_set",
        &[],
        "(EA | v, EB, F)",
        "EA is the set of non-tree edges whose cycle passes v and meets EB",
    ),
    quoted(
        entry(
            "fr_le",
            &["k"],
            "(| F)",
            "for every vertex v and face boundary, at most k cycles through v meet it",
        ),
        "|F| = 1",
    ),
    entry(
        "fr_face_le",
        &["k"],
        "(| F, EO)",
        "every face boundary other than EO meets at most k fundamental cycles",
    ),
    entry(
        "FaceB3",
        &[],
        "(X)",
        "X induces a cycle whose removal leaves a connected graph",
    ),
    entry("FaceB3E", &[], "(EA)", "EA is the edge set of a FaceB3 cycle"),
    entry(
        "Adj_F",
        &[],
        "(e, f)",
        "distinct edges with a common vertex on a common FaceB3 cycle",
    ),
    entry(
        "Path_F",
        &[],
        "(EP, e, f | v, ca)",
        "EP is the face-adjacency path from e to f around v avoiding ca",
    ),
    entry(
        "oriNB",
        &[],
        "(e, f | v, a, ca)",
        "e comes strictly before f around v starting from a, ending at ca",
    ),
    entry(
        "Head",
        &[],
        "(v, e | F, r)",
        "v is the endpoint of tree edge e nearer to r",
    ),
    entry(
        "Tail",
        &[],
        "(v, e | F, r)",
        "v is the endpoint of tree edge e farther from r",
    ),
    entry(
        "Low",
        &["c"],
        "(v, e | C0, ..., Cc-1)",
        "v is the endpoint of e in the lower colour class",
    ),
    quoted(
        entry("Bag_V", &["c"], "(v, X | F, C0, ..., Cc-1)", "X is the vertex bag of v"),
        "c + 1",
    ),
    quoted(
        entry(
            "Bag_E",
            &["c"],
            "(e, X | F, C0, ..., Cc-1)",
            "X is the edge bag of tree edge e",
        ),
        "c + 1",
    ),
    quoted(
        entry(
            "Parent",
            &["c"],
            "(XP, XC | F, r, C0, ..., Cc-1)",
            "XP is the parent bag of XC in the vertex/edge bag decomposition",
        ),
        "c + 2",
    ),
    entry("Share2", &[], "(X, Y)", "X and Y have exactly two common vertices"),
    entry(
        "Bag_Cyc",
        &[],
        "(e, X | r, EC)",
        "X is the bag of cycle edge e away from r",
    ),
    entry(
        "Parent_Cyc",
        &[],
        "(X, Y | r, EC, el)",
        "X is the parent of Y in the path of cycle bags, el closing the cycle at r",
    ),
];

/// Every predicate the library knows.
pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG
}

fn vars(pairs: &[(&str, Sort)]) -> Vec<Var> {
    pairs.iter().map(|&(n, s)| Var::new(n, s)).collect()
}

use Sort::{Edge as Ed, EdgeSet as ES, Vertex as Vx, VertexSet as VS};

struct Consts<'a> {
    name: &'a str,
    given: &'a [(String, String)],
}

impl Consts<'_> {
    fn int(&self, key: &str, lo: i64, hi: i64) -> Result<i64> {
        let raw = self
            .given
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v)
            .ok_or_else(|| Error::BadConstants(format!("{} needs constant {key}", self.name)))?;
        let v: i64 = raw
            .parse()
            .map_err(|_| Error::BadConstants(format!("{key}={raw} is not an integer")))?;
        if v < lo || v > hi {
            return Err(Error::BadConstants(format!("{key}={v} outside {lo}..={hi}")));
        }
        Ok(v)
    }

    fn text(&self, key: &str) -> Result<&str> {
        self.given
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::BadConstants(format!("{} needs constant {key}", self.name)))
    }
}

fn joined(items: impl IntoIterator<Item = String>, op: &str, empty: &str) -> String {
    let v: Vec<String> = items.into_iter().collect();
    if v.is_empty() {
        empty.to_string()
    } else {
        format!("({})", v.join(op))
    }
}

/// Disjunction of pairwise equalities among `names`.
fn some_equal(names: &[String]) -> String {
    let mut eqs = Vec::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            eqs.push(format!("{} = {}", names[i], names[j]));
        }
    }
    joined(eqs, " | ", "false")
}

/// At most `k` distinct edges satisfy `pred(e)`, over all edges.
fn at_most_edges(k: i64, pred: impl Fn(&str) -> String) -> String {
    let es: Vec<String> = (1..=k + 1).map(|i| format!("e{i}")).collect();
    let body = joined(es.iter().map(|e| pred(e)), " & ", "true");
    format!("forall {} . ({} -> {})", es.join(", "), body, some_equal(&es))
}

fn colour_names(c: i64) -> Vec<String> {
    (0..c).map(|i| format!("C{i}")).collect()
}

/// Formula for a catalog entry.
pub fn library(name: &str, consts: &[(String, String)]) -> Result<Formula> {
    let entry = CATALOG
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownPredicate(name.to_string()))?;
    if let Some((k, _)) = consts.iter().find(|(k, _)| !entry.constants.contains(&k.as_str())) {
        return Err(Error::BadConstants(format!("{name} takes no constant {k}")));
    }
    let c = Consts { name, given: consts };
    let (args, params, body): (Vec<Var>, Vec<Var>, String) = match name {
        "Adj" => (vars(&[("v", Vx), ("w", Vx), ("EA", ES)]), vec![], "v != w & exists e in EA . (Inc(v,e) & Inc(w,e))".into()),
        "Edge" => (vars(&[("e", Ed), ("v", Vx), ("w", Vx)]), vec![], "edg2(e,v,w)".into()),
        "IncV" => (vars(&[("X", VS), ("EA", ES)]), vec![], "forall v . (v in X <-> exists e in EA . Inc(v,e))".into()),
        "IncE" => (vars(&[("EA", ES), ("X", VS)]), vec![], "forall e . (e in EA <-> forall v . (Inc(v,e) -> v in X))".into()),
        "Within" => (vars(&[("EA", ES), ("X", VS)]), vec![], "forall e in EA . forall v . (Inc(v,e) -> v in X)".into()),
        "Deg" => {
            let k = c.int("k", 0, 8)?;
            let body = if k == 0 {
                "!(exists e in EA . Inc(v,e))".to_string()
            } else {
                let es: Vec<String> = (1..=k).map(|i| format!("e{i}")).collect();
                let binders: Vec<String> = es.iter().map(|e| format!("{e} in EA")).collect();
                let mut parts: Vec<String> = es.iter().map(|e| format!("Inc(v,{e})")).collect();
                for i in 0..es.len() {
                    for j in i + 1..es.len() {
                        parts.push(format!("{} != {}", es[i], es[j]));
                    }
                }
                let cover = joined(es.iter().map(|e| format!("g = {e}")), " | ", "false");
                parts.push(format!("(forall g in EA . (Inc(v,g) -> {cover}))"));
                format!("exists {} . ({})", binders.join(", "), parts.join(" & "))
            };
            (vars(&[("v", Vx), ("EA", ES)]), vec![], body)
        }
        "AtMost" => {
            let k = c.int("k", 0, 8)?;
            let body = if k == 0 {
                "!(exists x in X . true)".to_string()
            } else {
                let xs: Vec<String> = (1..=k + 1).map(|i| format!("x{i}")).collect();
                let binders: Vec<String> = xs.iter().map(|x| format!("{x} in X")).collect();
                format!("forall {} . {}", binders.join(", "), some_equal(&xs))
            };
            (vars(&[("X", VS)]), vec![], body)
        }
        "Conn" => (
            vars(&[("X", VS), ("EA", ES)]),
            vec![],
            "forall Y sub X . ((exists a in Y . true) & (exists b in X . !(b in Y)) -> \
             exists e in EA . exists a in Y . exists b in X . (!(b in Y) & Inc(a,e) & Inc(b,e)))"
                .into(),
        ),
        "Conn1" => (
            vars(&[("X", VS)]),
            vec![],
            "forall Y sub X . ((exists a in Y . true) & (exists b in X . !(b in Y)) -> \
             exists a in Y . exists b in X . (!(b in Y) & edg(a,b)))"
                .into(),
        ),
        "ConnE" => (
            vars(&[("EA", ES)]),
            vec![],
            "forall EB sub EA . ((exists e in EB . true) & (exists f in EA . !(f in EB)) -> \
             exists e in EB . exists f in EA . (!(f in EB) & exists v . (Inc(v,e) & Inc(v,f))))"
                .into(),
        ),
        "Conn_k" => {
            let k = c.int("k", 0, 6)?;
            let body = if k == 0 {
                "true".to_string()
            } else {
                format!(
                    "forall Y sub X . (@AtMost{{k={}}}(Y) -> exists Z sub X . ((forall z in X . (z in Z <-> !(z in Y))) & @Conn(Z,EA)))",
                    k - 1
                )
            };
            (vars(&[("X", VS), ("EA", ES)]), vec![], body)
        }
        "Acyclic" => (
            vars(&[("EA", ES)]),
            vec![],
            "!(exists EC sub EA . ((exists e in EC . true) & forall v . (@Deg{k=0}(v,EC) | @Deg{k=2}(v,EC))))".into(),
        ),
        "Cycle" => (
            vars(&[("X", VS), ("EA", ES)]),
            vec![],
            "(exists v in X . true) & @Within(EA,X) & @IncV(X,EA) & (forall v in X . @Deg{k=2}(v,EA)) & @Conn(X,EA)".into(),
        ),
        "Tree" => (
            vars(&[("X", VS), ("EA", ES)]),
            vec![],
            "(exists v in X . true) & @Within(EA,X) & @Conn(X,EA) & @Acyclic(EA)".into(),
        ),
        "Path" => (
            vars(&[("X", VS), ("EA", ES)]),
            vec![],
            "@Tree(X,EA) & forall v in X . (@Deg{k=0}(v,EA) | @Deg{k=1}(v,EA) | @Deg{k=2}(v,EA))".into(),
        ),
        "PathXY" => (
            vars(&[("x", Vx), ("y", Vx), ("EP", ES)]),
            vec![],
            "(x = y & !(exists e in EP . true)) | (x != y & @Deg{k=1}(x,EP) & @Deg{k=1}(y,EP) & \
             (forall v . ((exists e in EP . Inc(v,e)) & v != x & v != y -> @Deg{k=2}(v,EP))) & @ConnE(EP))"
                .into(),
        ),
        "Minor_H" => {
            let h = c.text("H")?;
            if super::eval::pattern_graph(h).is_none() {
                return Err(Error::BadConstants(format!("unsupported minor pattern {h}")));
            }
            (vars(&[("X", VS), ("EA", ES)]), vec![], format!("minor[{h}](X,EA)"))
        }
        "Outerplanar" => (
            vars(&[("X", VS), ("EA", ES)]),
            vec![],
            "!(@Minor_H{H=K4}(X,EA) | @Minor_H{H=K23}(X,EA))".into(),
        ),
        "LayerPartition" => {
            let k = c.int("k", 1, 6)?;
            let xs: Vec<String> = (1..=k).map(|i| format!("X{i}")).collect();
            let cover = joined(xs.iter().map(|x| format!("v in {x}")), " | ", "false");
            let mut parts = vec![format!("(forall v . {cover})")];
            for i in 0..xs.len() {
                for j in i + 1..xs.len() {
                    parts.push(format!("!(exists v in {} . v in {})", xs[i], xs[j]));
                }
            }
            for x in &xs {
                parts.push(format!("(exists EA . (@IncE(EA,{x}) & @Outerplanar({x},EA)))"));
            }
            let steps: Vec<String> = (0..xs.len())
                .map(|i| {
                    let near: Vec<String> =
                        (i.saturating_sub(1)..=(i + 1).min(xs.len() - 1)).map(|j| format!("w in {}", xs[j])).collect();
                    format!("(v in {} -> ({}))", xs[i], near.join(" | "))
                })
                .collect();
            parts.push(format!("(forall v, w . (edg(v,w) -> ({})))", steps.join(" & ")));
            (xs.iter().map(|x| Var::new(x.clone(), VS)).collect(), vec![], parts.join(" & "))
        }
        "KOuterplanar" => {
            let k = c.int("k", 1, 6)?;
            let xs: Vec<String> = (1..=k).map(|i| format!("X{i}")).collect();
            (vec![], vec![], format!("exists {} . @LayerPartition{{k={k}}}({})", xs.join(", "), xs.join(",")))
        }
        "FundCycSet" => (
            vars(&[("e", Ed), ("EC", ES)]),
            vars(&[("F", ES)]),
            "!(e in F) & e in EC & exists x, y . (edg2(e,x,y) & exists EP sub F . \
             (@PathXY(x,y,EP) & forall g . (g in EC <-> (g = e | g in EP))))"
                .into(),
        ),
        "FundCyc" => (
            vars(&[("v", Vx), ("e", Ed)]),
            vars(&[("F", ES)]),
            "!(e in F) & exists x, y . (edg2(e,x,y) & exists EP sub F . \
             (@PathXY(x,y,EP) & (v = x | v = y | exists g in EP . Inc(v,g))))"
                .into(),
        ),
        "FundCycE" => (
            vars(&[("g", Ed), ("e", Ed)]),
            vars(&[("F", ES)]),
            "!(e in F) & (g = e | exists x, y . (edg2(e,x,y) & exists EP sub F . (@PathXY(x,y,EP) & g in EP)))".into(),
        ),
        "vr_le" => {
            let k = c.int("k", 0, 8)?;
            let body = format!("forall v . {}", at_most_edges(k, |e| format!("!({e} in F) & @FundCyc(v,{e},F)")));
            (vec![], vars(&[("F", ES)]), body)
        }
        "er_le" => {
            let k = c.int("k", 0, 8)?;
            let body = format!("forall f in F . {}", at_most_edges(k, |e| format!("!({e} in F) & @FundCycE(f,{e},F)")));
            (vec![], vars(&[("F", ES)]), body)
        }
        "CycMeets" => (
            vars(&[("e", Ed), ("v", Vx), ("EB", ES)]),
            vars(&[("F", ES)]),
            "!(e in F) & exists x, y . (edg2(e,x,y) & exists EP sub F . (@PathXY(x,y,EP) & \
             (e in EB | exists g in EP . g in EB) & (v = x | v = y | exists g in EP . Inc(v,g))))"
                .into(),
        ),
        "CycHits" => (
            vars(&[("e", Ed), ("EB", ES)]),
            vars(&[("F", ES)]),
            "!(e in F) & exists x, y . (edg2(e,x,y) & exists EP sub F . (@PathXY(x,y,EP) & (e in EB | exists g in EP . g in EB)))"
                .into(),
        ),
        "C_set" => (
            vars(&[("EA", ES)]),
            vars(&[("v", Vx), ("EB", ES), ("F", ES)]),
            "forall e . (e in EA <-> @CycMeets(e,v,EB,F))".into(),
        ),
        "fr_le" => {
            let k = c.int("k", 0, 8)?;
            let body = format!("forall v . forall EB . (@FaceB3E(EB) -> {})", at_most_edges(k, |e| format!("@CycMeets({e},v,EB,F)")));
            (vec![], vars(&[("F", ES)]), body)
        }
        "fr_face_le" => {
            let k = c.int("k", 0, 8)?;
            let body = format!("forall EB . (@FaceB3E(EB) & EB != EO -> {})", at_most_edges(k, |e| format!("@CycHits({e},EB,F)")));
            (vec![], vars(&[("F", ES), ("EO", ES)]), body)
        }
        "FaceB3" => (
            vars(&[("X", VS)]),
            vec![],
            "(exists EC . (@IncE(EC,X) & @Cycle(X,EC))) & exists Y . ((forall y . (y in Y <-> !(y in X))) & @Conn1(Y))".into(),
        ),
        "FaceB3E" => (vars(&[("EA", ES)]), vec![], "exists X . (@IncV(X,EA) & @IncE(EA,X) & @FaceB3(X))".into()),
        "Adj_F" => (
            vars(&[("e", Ed), ("f", Ed)]),
            vec![],
            "e != f & (exists v . (Inc(v,e) & Inc(v,f))) & exists EA . (@FaceB3E(EA) & e in EA & f in EA)".into(),
        ),
        "Path_F" => (
            vars(&[("EP", ES), ("e", Ed), ("f", Ed)]),
            vars(&[("v", Vx), ("ca", Ed)]),
            "e in EP & f in EP & (forall g in EP . ((Inc(v,g) & g != ca) | g = e | g = f)) & \
             ((e = f & forall g in EP . g = e) | \
              (e != f & forall g in EP . ( \
                 ((g = e | g = f) & exists g1 in EP . (@Adj_F(g,g1) & forall g2 in EP . (g2 != g1 -> !@Adj_F(g,g2)))) | \
                 (g != e & g != f & exists g1 in EP . exists g2 in EP . (g1 != g2 & @Adj_F(g,g1) & @Adj_F(g,g2) & \
                    forall g3 in EP . (g3 != g1 & g3 != g2 -> !@Adj_F(g,g3)))))))"
                .into(),
        ),
        "oriNB" => (
            vars(&[("e", Ed), ("f", Ed)]),
            vars(&[("v", Vx), ("a", Ed), ("ca", Ed)]),
            "exists EV . ((forall g . (g in EV <-> Inc(v,g))) & exists EP1 sub EV . exists EP2 sub EV . \
             (@Path_F(EP1,a,e,v,ca) & @Path_F(EP2,a,f,v,ca) & EP1 sub EP2 & !(EP2 sub EP1)))"
                .into(),
        ),
        "Head" => (
            vars(&[("v", Vx), ("e", Ed)]),
            vars(&[("F", ES), ("r", Vx)]),
            "e in F & Inc(v,e) & exists EP sub F . (@PathXY(r,v,EP) & !(e in EP))".into(),
        ),
        "Tail" => (
            vars(&[("v", Vx), ("e", Ed)]),
            vars(&[("F", ES), ("r", Vx)]),
            "e in F & Inc(v,e) & !@Head(v,e,F,r)".into(),
        ),
        "Low" => {
            let k = c.int("c", 1, 8)?;
            let cs = colour_names(k);
            let mut lower = Vec::new();
            for i in 0..cs.len() {
                for j in i + 1..cs.len() {
                    lower.push(format!("(v in {} & w in {})", cs[i], cs[j]));
                }
            }
            let body = format!("Inc(v,e) & forall w . (w != v & Inc(w,e) -> {})", joined(lower, " | ", "false"));
            let params = cs.iter().map(|c| Var::new(c.clone(), VS)).collect();
            (vars(&[("v", Vx), ("e", Ed)]), params, body)
        }
        "Bag_V" | "Bag_E" | "Parent" => {
            let k = c.int("c", 1, 8)?;
            let cs = colour_names(k).join(",");
            let mut params = vars(&[("F", ES)]);
            if name == "Parent" {
                params.push(Var::new("r", Vx));
            }
            params.extend(colour_names(k).into_iter().map(|c| Var::new(c, VS)));
            match name {
                "Bag_V" => (
                    vars(&[("v", Vx), ("X", VS)]),
                    params,
                    format!("forall w . (w in X <-> (w = v | exists e . (!(e in F) & @FundCyc(v,e,F) & @Low{{c={k}}}(w,e,{cs}))))"),
                ),
                "Bag_E" => (
                    vars(&[("f", Ed), ("X", VS)]),
                    params,
                    format!(
                        "f in F & forall w . (w in X <-> (Inc(w,f) | exists e . (!(e in F) & @FundCycE(f,e,F) & @Low{{c={k}}}(w,e,{cs}))))"
                    ),
                ),
                _ => (
                    vars(&[("XP", VS), ("XC", VS)]),
                    params,
                    format!(
                        "exists v . exists e in F . ((@Bag_V{{c={k}}}(v,XP,F,{cs}) & @Bag_E{{c={k}}}(e,XC,F,{cs}) & @Head(v,e,F,r)) | \
                         (@Bag_V{{c={k}}}(v,XC,F,{cs}) & @Bag_E{{c={k}}}(e,XP,F,{cs}) & @Tail(v,e,F,r)))"
                    ),
                ),
            }
        }
        "Share2" => (
            vars(&[("X", VS), ("Y", VS)]),
            vec![],
            "exists a in X . exists b in X . (a != b & a in Y & b in Y & forall z in X . (z in Y -> z = a | z = b))".into(),
        ),
        "Bag_Cyc" => (
            vars(&[("e", Ed), ("X", VS)]),
            vars(&[("r", Vx), ("EC", ES)]),
            "e in EC & !Inc(r,e) & forall v . (v in X <-> (Inc(v,e) | v = r))".into(),
        ),
        "Parent_Cyc" => (
            vars(&[("X", VS), ("Y", VS)]),
            vars(&[("r", Vx), ("EC", ES), ("el", Ed)]),
            "exists e in EC . exists f in EC . (@Bag_Cyc(e,X,r,EC) & @Bag_Cyc(f,Y,r,EC) & @Share2(X,Y) & \
             exists EP1 sub EC . exists EP2 sub EC . (!(el in EP1) & !(el in EP2) & !(e in EP1) & !(f in EP2) & \
             (exists x . (Inc(x,e) & @PathXY(r,x,EP1))) & (exists y . (Inc(y,f) & @PathXY(r,y,EP2))) & \
             EP1 sub EP2 & !(EP2 sub EP1)))"
                .into(),
        ),
        _ => return Err(Error::UnknownPredicate(name.to_string())),
    };
    parse_declared(&body, args, params)
}

/// Parses `Name` or `Name{k=v,...}` and looks it up.
pub fn library_call(call: &str) -> Result<Formula> {
    let call = call.trim().trim_start_matches('@');
    let (name, consts) = match call.find('{') {
        Some(i) => {
            let inner = call[i + 1..]
                .strip_suffix('}')
                .ok_or_else(|| Error::BadConstants(format!("unterminated constants in {call}")))?;
            let consts = inner
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|kv| {
                    let (k, v) = kv
                        .split_once('=')
                        .ok_or_else(|| Error::BadConstants(format!("expected key=value, got {kv}")))?;
                    Ok((k.trim().to_string(), v.trim().to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            (&call[..i], consts)
        }
        None => (call, Vec::new()),
    };
    library(name, &consts)
}
