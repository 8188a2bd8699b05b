//! Monadic second-order logic over graphs, evaluated by brute force.
//!
//! Formulas are parsed from text (see [`parser`]) or taken from the predicate
//! [`library`], and evaluated over a graph seen as a structure with vertices
//! only ([`Mode::OneSorted`]) or vertices and edges ([`Mode::TwoSorted`]).
//! Quantifier results whose body contains a set quantifier are memoized on the
//! values of their free variables.

pub mod ast;
pub mod eval;
pub mod library;
pub mod parser;

pub use ast::{Expr, Formula, Quantifier, Sort, Var, Within};
pub use eval::{
    evaluate, evaluate_with_budget, extract_relation, with_virtual_edges, Assignment, Evaluation, Evaluator, Mode,
    Structure, Value, DEFAULT_BUDGET,
};
pub use library::{catalog, library, library_call, CatalogEntry};
pub use parser::{parse_formula, MAX_FORMULA_SIZE};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{complete_graph, cycle_graph, path_graph, theta_graph};
    use crate::graph::{Edge, Graph};

    fn two(g: &Graph) -> Structure {
        Structure::two_sorted(g).unwrap()
    }

    fn holds(g: &Graph, text: &str, a: &Assignment) -> bool {
        evaluate(&two(g), &parse_formula(text).unwrap(), a).unwrap()
    }

    #[test]
    fn parses_examples() {
        let f = parse_formula("exists v . v in V").unwrap();
        assert!(f.is_sentence());
        let f = parse_formula("mod[0,2](S)").unwrap();
        assert_eq!(
            f.expr,
            Expr::Mod {
                p: 0,
                q: 2,
                set: "S".into()
            }
        );
        assert_eq!(f.arguments, vec![Var::new("S", Sort::VertexSet)]);
        let f = parse_formula("forall v . exists e . Inc(v,e)").unwrap();
        assert!(holds(&cycle_graph(4), &f.to_string(), &Assignment::new()));
        assert!(!holds(
            &Graph::new([1, 2, 3], [(1, 2)]).unwrap(),
            &f.to_string(),
            &Assignment::new()
        ));
    }

    #[test]
    fn syntax_and_sort_errors() {
        assert!(matches!(
            parse_formula("exists v . "),
            Err(crate::Error::SyntaxError { .. })
        ));
        assert!(matches!(parse_formula("v in w"), Err(crate::Error::SortError(_))));
        assert!(matches!(parse_formula("Inc(v,w)"), Err(crate::Error::SortError(_))));
        assert!(matches!(
            parse_formula("mod[2,2](S)"),
            Err(crate::Error::SyntaxError { .. })
        ));
        assert!(matches!(
            parse_formula("@Nope(X)"),
            Err(crate::Error::UnknownPredicate(_))
        ));
        assert!(matches!(
            parse_formula("@Deg(v,EA)"),
            Err(crate::Error::BadConstants(_))
        ));
        assert!(matches!(
            parse_formula("@Deg{k=1,j=2}(v,EA)"),
            Err(crate::Error::BadConstants(_))
        ));
        assert!(matches!(
            parse_formula("@Conn(X)"),
            Err(crate::Error::SyntaxError { .. })
        ));
        assert!(matches!(parse_formula("@Conn(EA,X)"), Err(crate::Error::SortError(_))));
    }

    #[test]
    fn round_trip() {
        for text in [
            "exists v . v in V",
            "forall v . exists e . Inc(v,e)",
            "a = b | c != d & !(x in S) -> (X sub Y <-> mod[1,3](X))",
            "exists X:V sub Y, x in X . edg(x,y) & edg2(e,x,y)",
            "(exists v . true) & !(forall w . false)",
            "@Conn(X,EA) & @Deg{k=2}(v,EA) | minor[K23](X,EA)",
            "((a = b <-> c = d) <-> x = y) -> (p = q -> r = s) -> t = u",
        ] {
            let f = parse_formula(text).unwrap();
            let printed = f.to_string();
            let g = parse_formula(&printed).unwrap();
            assert_eq!(g.canonical(), f.canonical(), "{text} -> {printed}");
            assert_eq!(g.to_string(), printed);
        }
    }

    #[test]
    fn conn_and_mod() {
        let conn = parse_formula("@Conn(V,E)").unwrap();
        let a = Assignment::new();
        assert!(evaluate(&two(&cycle_graph(4)), &conn, &a).unwrap());
        let split = Graph::new(1..=4, [(1, 2), (3, 4)]).unwrap();
        assert!(!evaluate(&two(&split), &conn, &a).unwrap());
        let m = parse_formula("mod[1,2](S)").unwrap();
        let a = Assignment::new().with("S", Value::vertex_set([1, 2, 3]));
        assert!(evaluate(&two(&path_graph(4)), &m, &a).unwrap());
    }

    #[test]
    fn outerplanar_and_minor() {
        let op = library("Outerplanar", &[]).unwrap();
        let all = |g: &Graph| {
            Assignment::new()
                .with("X", Value::vertex_set(g.vertices().to_vec()))
                .with("EA", Value::edge_set(g.edges().to_vec()))
        };
        let k4 = complete_graph(4);
        assert!(!evaluate(&two(&k4), &op, &all(&k4)).unwrap());
        assert!(evaluate(&two(&cycle_graph(4)), &op, &all(&cycle_graph(4))).unwrap());
        let m = library_call("Minor_H{H=K4}").unwrap();
        assert!(evaluate(&two(&k4), &m, &all(&k4)).unwrap());
        assert!(!evaluate(&two(&cycle_graph(5)), &m, &all(&cycle_graph(5))).unwrap());
    }

    #[test]
    fn face_b3_on_k4() {
        let k4 = complete_graph(4);
        let f = library("FaceB3", &[]).unwrap();
        let a = Assignment::new().with("X", Value::vertex_set([1, 2, 3]));
        assert!(evaluate(&two(&k4), &f, &a).unwrap());
        let rel = extract_relation(&two(&k4), &f, &Assignment::new(), DEFAULT_BUDGET).unwrap();
        let got: Vec<Vec<Value>> = rel.into_iter().collect();
        let want: Vec<Vec<Value>> = [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]
            .iter()
            .map(|t| vec![Value::vertex_set(t.iter().copied())])
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn vr_le_on_c4() {
        let c4 = cycle_graph(4);
        let f = Value::edge_set([Edge::new(1, 2), Edge::new(2, 3), Edge::new(3, 4)]);
        let a = Assignment::new().with("F", f);
        assert!(evaluate(&two(&c4), &library_call("vr_le{k=1}").unwrap(), &a).unwrap());
        assert!(!evaluate(&two(&c4), &library_call("vr_le{k=0}").unwrap(), &a).unwrap());
    }

    #[test]
    fn virtual_edges() {
        let theta = theta_graph();
        let block = theta.induced(&[1, 2, 3, 4]).unwrap();
        let s = with_virtual_edges(&block, &[(1, 4)]).unwrap();
        let a = Assignment::new()
            .with("x", Value::Vertex(1))
            .with("y", Value::Vertex(4));
        assert!(evaluate(&s, &parse_formula("edg(x,y)").unwrap(), &a).unwrap());
        let split = Graph::new(1..=4, [(1, 2), (3, 4)]).unwrap();
        let c1 = parse_formula("@Conn1(V)").unwrap();
        assert!(!evaluate(&two(&split), &c1, &Assignment::new()).unwrap());
        let s = with_virtual_edges(&split, &[(2, 3)]).unwrap();
        assert!(evaluate(&s, &c1, &Assignment::new()).unwrap());
        assert!(matches!(
            with_virtual_edges(&split, &[(2, 2)]),
            Err(crate::Error::SelfPair(2))
        ));
    }

    #[test]
    fn budget_and_unbound() {
        let f = parse_formula("forall X . forall Y . X sub Y | Y sub X | !(X sub Y)").unwrap();
        let s = two(&cycle_graph(8));
        assert!(matches!(
            evaluate_with_budget(&s, &f, &Assignment::new(), 1000),
            Err(crate::Error::BudgetExceeded(1000))
        ));
        let r = evaluate_with_budget(&s, &f, &Assignment::new(), DEFAULT_BUDGET).unwrap();
        assert!(r.value && r.cost > 256);
        let g = parse_formula("v in S").unwrap();
        assert!(matches!(
            evaluate(&s, &g, &Assignment::new()),
            Err(crate::Error::UnboundVariable(_))
        ));
    }

    #[test]
    fn one_sorted_rejects_edges() {
        let s = Structure::one_sorted(&cycle_graph(4)).unwrap();
        let f = parse_formula("forall v . exists e . Inc(v,e)").unwrap();
        assert!(matches!(
            evaluate(&s, &f, &Assignment::new()),
            Err(crate::Error::SortError(_))
        ));
        let f = parse_formula("forall v . exists w . edg(v,w)").unwrap();
        assert!(evaluate(&s, &f, &Assignment::new()).unwrap());
    }
}
