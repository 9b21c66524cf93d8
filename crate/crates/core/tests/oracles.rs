//! Library optima against brute-force references on small random networks.

mod common;

use common::*;
use pin_secrecy::graph::{Multigraph, TerminalSet};
use pin_secrecy::omniscience::{int_omn, nash_williams, omn};
use pin_secrecy::packing::{enumerate_steiner_trees, mu, mu_f};
use pin_secrecy::rational::{int, ratio};
use rand::Rng;

#[test]
fn oracle_self_checks() {
    let triangle = Multigraph::from_edges(3, &[(0, 1, 1), (0, 2, 1), (1, 2, 1)]).unwrap();
    let all = TerminalSet::full(3);
    assert_eq!(omn_oracle(&triangle, all), ratio(3, 2));
    assert_eq!(int_omn_oracle(&triangle, all, 1), 2);
    assert_eq!(mu_oracle(&triangle, all), 1);
    assert_eq!(mu_f_oracle(&triangle, all), ratio(3, 2));
    assert_eq!(spanning_tree_count(&triangle), 3);
    assert_eq!(partitions(4).len(), 15);
    let path = Multigraph::from_edges(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
    assert_eq!(omn_oracle(&path, [0, 2].into()), int(1));
    assert_eq!(steiner_trees_oracle(&path, [0, 2].into()).len(), 1);
}

#[test]
fn omniscience_matches_vertex_enumeration() {
    let mut r = rng(11);
    for _ in 0..60 {
        let m = if r.gen_bool(0.5) { 3 } else { 4 };
        let g = random_connected(&mut r, m, 3);
        let a = random_set(&mut r, m);
        assert_eq!(omn(&g, a).unwrap().value, omn_oracle(&g, a), "{g:?} A={a}");
        for n in 1..=2 {
            assert_eq!(int_omn(&g, a, n).unwrap().value, int_omn_oracle(&g, a, n), "{g:?} A={a} n={n}");
        }
    }
}

#[test]
fn integer_packing_matches_exhaustive_search() {
    let mut r = rng(12);
    for k in 0..60 {
        let (m, e) = if k % 3 == 2 { (5, 1) } else { (3 + k % 2, 2) };
        let g = random_connected(&mut r, m, e);
        let a = random_set(&mut r, m);
        let p = mu(&g, a).unwrap();
        p.verify().unwrap();
        assert_eq!(p.value, mu_oracle(&g, a), "{g:?} A={a}");
    }
}

#[test]
fn fractional_packing_matches_dual_enumeration() {
    let mut r = rng(13);
    let mut checked = 0;
    while checked < 40 {
        let m = if r.gen_bool(0.5) { 3 } else { 4 };
        let g = random_connected(&mut r, m, 3);
        let a = random_set(&mut r, m);
        // Vertex enumeration grows as C(trees + pairs, pairs).
        if steiner_trees_oracle(&g, a).len() + g.support().len() > 16 {
            continue;
        }
        checked += 1;
        let f = mu_f(&g, a).unwrap();
        assert!(f.is_feasible());
        assert_eq!(f.value, mu_f_oracle(&g, a), "{g:?} A={a}");
    }
}

#[test]
fn tree_enumeration_matches_matrix_tree_counts() {
    let mut r = rng(14);
    for _ in 0..40 {
        let m = r.gen_range(2..=6);
        let g = random_connected(&mut r, m, 1);
        let trees = enumerate_steiner_trees(&g, g.terminals()).unwrap();
        assert_eq!(trees.len() as u64, spanning_tree_count(&g), "{g:?}");
    }
}

#[test]
fn steiner_enumeration_matches_subset_scan() {
    let mut r = rng(15);
    for _ in 0..40 {
        let m = r.gen_range(3..=5);
        let g = random_connected(&mut r, m, 1);
        let a = random_set(&mut r, m);
        let mut ours: Vec<Vec<usize>> = enumerate_steiner_trees(&g, a)
            .unwrap()
            .iter()
            .map(|t| {
                let mut p = t.pair_indices(&g);
                p.sort();
                p
            })
            .collect();
        let mut theirs = steiner_trees_oracle(&g, a);
        ours.sort();
        theirs.sort();
        assert_eq!(ours, theirs, "{g:?} A={a}");
    }
}

#[test]
fn spanning_packing_matches_partition_formula() {
    let mut r = rng(16);
    for _ in 0..40 {
        let m = r.gen_range(2..=5);
        let g = random_connected(&mut r, m, 3);
        assert_eq!(nash_williams(&g).unwrap(), partition_formula(&g), "{g:?}");
        if m <= 4 {
            assert_eq!(mu(&g, g.terminals()).unwrap().value, partition_formula(&g), "{g:?}");
        }
    }
}
