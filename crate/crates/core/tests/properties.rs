//! Structural invariants over generated networks.

use proptest::prelude::*;

use pin_secrecy::gf2::{BitMatrix, BitVector};
use pin_secrecy::graph::{parse_graph_file, write_graph_file, GraphFile, Multigraph, TerminalSet};
use pin_secrecy::helper::{tight_sets, weak_helper_ilp};
use pin_secrecy::omniscience::{capacity, int_omn, omn, partition_bound};
use pin_secrecy::packing::{mu, mu_f, SteinerTree};
use pin_secrecy::protocol::{
    packing_protocol, parse_scheme, tree_lc, tree_lc_matrix, verify_perfect_secrecy, write_scheme,
};
use pin_secrecy::rational::{int, ratio};

fn graph(max_m: usize, max_e: u64) -> impl Strategy<Value = Multigraph> {
    (2..=max_m).prop_flat_map(move |m| {
        proptest::collection::vec(0..=max_e, m * (m - 1) / 2)
            .prop_map(move |mult| Multigraph::from_multiplicities(m, mult).unwrap())
    })
}

fn with_set(max_m: usize, max_e: u64) -> impl Strategy<Value = (Multigraph, TerminalSet)> {
    graph(max_m, max_e).prop_flat_map(|g| {
        let m = g.m();
        (Just(g), (0u32..1 << m).prop_filter("two members", |b| b.count_ones() >= 2))
            .prop_map(|(g, b)| (g, TerminalSet::from_bits(b)))
    })
}

/// A random labelled tree from a Prüfer sequence.
fn tree(max_edges: usize) -> impl Strategy<Value = SteinerTree> {
    (1..=max_edges).prop_flat_map(|edges| {
        let v = edges + 1;
        proptest::collection::vec(0..v, v.saturating_sub(2)).prop_map(move |code| {
            let mut degree = vec![1usize; v];
            for &c in &code {
                degree[c] += 1;
            }
            let mut out = Vec::new();
            for &c in &code {
                let leaf = (0..v).find(|&x| degree[x] == 1).unwrap();
                out.push((leaf, c));
                degree[leaf] -= 1;
                degree[c] -= 1;
            }
            let rest: Vec<usize> = (0..v).filter(|&x| degree[x] == 1).collect();
            out.push((rest[0], rest[1]));
            SteinerTree::new(out).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn graph_file_round_trip((g, a) in with_set(6, 4)) {
        let file = GraphFile { graph: g, set: a };
        prop_assert_eq!(parse_graph_file(&write_graph_file(&file)).unwrap(), file);
    }

    #[test]
    fn split_off_moves_one_edge(g in graph(5, 3), seed in any::<u64>()) {
        let m = g.m();
        prop_assume!(m >= 3);
        let h = (seed as usize) % m;
        let nbrs: Vec<usize> = (0..m).filter(|&i| i != h && g.multiplicity(i, h) > 0).collect();
        prop_assume!(nbrs.len() >= 2);
        let s = g.split_off(nbrs[0], nbrs[1], h).unwrap();
        prop_assert_eq!(s.edge_count() + 1, g.edge_count());
        for i in 0..m {
            let drop = if i == h { 2 } else { 0 };
            prop_assert_eq!(s.degree(i).unwrap() + drop, g.degree(i).unwrap());
        }
    }

    #[test]
    fn capacity_bounds((g, a) in with_set(5, 3)) {
        let c = capacity(&g, a).unwrap();
        prop_assert!(c <= partition_bound(&g, a).unwrap().value);
        let f = mu_f(&g, a).unwrap();
        prop_assert!(f.is_feasible());
        prop_assert!(f.value <= c);
        prop_assert!(c * ratio(1, 2) <= f.value);
    }

    #[test]
    fn integer_packing_bounds((g, a) in with_set(4, 2), n in 1u64..=2) {
        let blown = g.blow_up(n).unwrap();
        let p = mu(&blown, a).unwrap();
        p.verify().unwrap();
        prop_assert!(int(p.value as i64) <= mu_f(&blown, a).unwrap().value.floor());
        prop_assert!(p.value <= blown.edge_count() - int_omn(&g, a, n).unwrap().value);
    }

    #[test]
    fn omniscience_scales((g, a) in with_set(5, 3), n in 2u64..=4) {
        let base = omn(&g, a).unwrap().value;
        prop_assert_eq!(omn(&g.blow_up(n).unwrap(), a).unwrap().value, base * int(n as i64));
    }

    #[test]
    fn splitting_never_helps_packing(g in graph(5, 2)) {
        let m = g.m();
        prop_assume!(m >= 3);
        let h = m - 1;
        let a = TerminalSet::full(m - 1);
        let nbrs: Vec<usize> = (0..h).filter(|&i| g.multiplicity(i, h) > 0).collect();
        prop_assume!(nbrs.len() >= 2);
        let split = g.split_off(nbrs[0], nbrs[1], h).unwrap();
        prop_assert!(mu(&g, a).unwrap().value >= mu(&split, a).unwrap().value);
    }

    #[test]
    fn tight_set_structure(g in graph(5, 2)) {
        let m = g.m();
        prop_assume!(m >= 3);
        let a = TerminalSet::full(m - 1);
        let w = weak_helper_ilp(&g).unwrap();
        prop_assume!(w.holds);
        let family = tight_sets(&g, a, &w.witness).unwrap();
        prop_assert_eq!(family.closure_violation(a), None);
        if w.witness[m - 1] > 0 {
            prop_assert!(family.degree_violations(w.witness[m - 1]).is_empty());
        }
    }

    #[test]
    fn tree_checks_leave_only_constant_vectors(t in tree(10)) {
        let checks = tree_lc(&t);
        prop_assert_eq!(checks.len(), t.len() - 1);
        let l = tree_lc_matrix(&t);
        prop_assert_eq!(l.rank(), t.len() - 1);
        let ones = BitVector::ones(t.len());
        prop_assert!(l.mul_vec(&ones).is_zero());
    }

    #[test]
    fn rank_nullity(rows in 1usize..8, cols in 1usize..10, seed in any::<u64>()) {
        let bits: Vec<BitVector> = (0..rows)
            .map(|r| BitVector::from_u64(seed.rotate_left((r * 7) as u32) & ((1 << cols) - 1), cols))
            .collect();
        let a = BitMatrix::from_rows(cols, bits).unwrap();
        let kernel = a.kernel();
        prop_assert_eq!(a.rank() + kernel.len(), cols);
        for v in &kernel {
            prop_assert!(a.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn packing_protocols_are_secret((g, a) in with_set(4, 2), n in 1u64..=2) {
        prop_assume!(g.edge_count() * n <= 12);
        let p = packing_protocol(&g, a, n).unwrap();
        let (scheme, key) = parse_scheme(&write_scheme(&p.scheme, Some(&p.key_map))).unwrap();
        prop_assert_eq!(&scheme, &p.scheme);
        prop_assert_eq!(key.as_ref(), Some(&p.key_map));
        let report = verify_perfect_secrecy(&p.scheme, &p.key_map, a, 16).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
        prop_assert_eq!(p.key_map.key_len() as u64, p.packing.value);
    }
}
