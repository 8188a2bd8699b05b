mod common;

use common::{check_cycle, check_structural, check_three_connected, check_tree, sample_trees, Tally};
use kop_core::corpus::all_graphs;
use kop_core::generate::{complete_graph, prism_graph, wheel_graph};

fn report(t: &Tally) {
    assert!(
        t.ok(),
        "{} mismatches out of {} checks:\n{}",
        t.mismatches.len(),
        t.checks,
        t.mismatches.join("\n")
    );
}

#[test]
fn structural_predicates_match_on_small_graphs() {
    let mut t = Tally::default();
    for n in 1..=4 {
        for g in all_graphs(n, false) {
            t.merge(check_structural(&g));
        }
    }
    report(&t);
}

#[test]
fn remember_formulas_and_bags_match_on_small_graphs() {
    let mut t = Tally::default();
    for n in 1..=5 {
        for g in all_graphs(n, false) {
            if g.m() > 7 {
                continue;
            }
            for tree in sample_trees(&g, 2) {
                t.merge(check_tree(&g, &tree));
            }
        }
    }
    report(&t);
    assert!(t.rebuilt > 0);
}

#[test]
fn face_predicates_match_on_three_connected_hosts() {
    let mut t = Tally::default();
    for g in [complete_graph(4), wheel_graph(4), prism_graph()] {
        let trees = sample_trees(&g, 2);
        t.merge(check_three_connected(&g, &trees));
    }
    report(&t);
}

#[test]
fn cycle_bags_match() {
    let mut t = Tally::default();
    for n in 3..=7 {
        t.merge(check_cycle(n));
    }
    report(&t);
}
