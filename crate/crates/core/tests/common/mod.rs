//! Independent reference computations and random instances for the
//! integration tests. Nothing here calls the library's solvers.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use pin_secrecy::graph::{Multigraph, TerminalSet};
use pin_secrecy::rational::{int, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A connected multigraph: a random spanning tree with multiplicities in
/// `1..=max_e`, plus each other pair independently empty with probability
/// one half and otherwise in `1..=max_e`.
pub fn random_connected(rng: &mut ChaCha8Rng, m: usize, max_e: u64) -> Multigraph {
    let mut g = Multigraph::empty(m).unwrap();
    for v in 1..m {
        let u = rng.gen_range(0..v);
        g.set_multiplicity(u, v, rng.gen_range(1..=max_e));
    }
    for i in 0..m {
        for j in i + 1..m {
            if g.multiplicity(i, j) == 0 && rng.gen_bool(0.5) {
                g.set_multiplicity(i, j, rng.gen_range(1..=max_e));
            }
        }
    }
    g
}

/// A uniformly random subset of size at least two.
pub fn random_set(rng: &mut ChaCha8Rng, m: usize) -> TerminalSet {
    loop {
        let bits: u32 = rng.gen_range(0..1u32 << m);
        let set = TerminalSet::from_bits(bits);
        if set.len() >= 2 {
            return set;
        }
    }
}

/// A single-helper multigraph: users `0..m−1` with sparse edges, each user
/// tied to the helper `m − 1` with multiplicity in `0..=max_e`, and the
/// helper reaching at least one user.
pub fn random_helper_instance(rng: &mut ChaCha8Rng, m: usize, max_e: u64) -> Multigraph {
    let h = m - 1;
    loop {
        let mut g = Multigraph::empty(m).unwrap();
        for i in 0..h {
            for j in i + 1..h {
                if rng.gen_bool(0.4) {
                    g.set_multiplicity(i, j, rng.gen_range(1..=max_e));
                }
            }
            g.set_multiplicity(i, h, rng.gen_range(0..=max_e));
        }
        if g.degree(h).unwrap() > 0 && g.connects(g.terminals()) {
            return g;
        }
    }
}

/// Unique solution of a square system by Gaussian elimination.
pub fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Rational::one() / a[col][col].clone();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone() * inv.clone();
                for c in col..n {
                    let delta = f.clone() * a[col][c].clone();
                    a[r][c] -= delta;
                }
                let delta = f * b[col].clone();
                b[r] -= delta;
            }
        }
    }
    Some((0..n).map(|i| b[i].clone() / a[i][i].clone()).collect())
}

/// `min c·x` over `Ax ≥ b, x ≥ 0` by enumerating every basic point. The
/// program must have a finite optimum.
pub fn lp_min_by_vertices(rows: &[Vec<Rational>], rhs: &[Rational], cost: &[Rational]) -> Rational {
    let n = cost.len();
    let mut all_rows: Vec<Vec<Rational>> = rows.to_vec();
    let mut all_rhs: Vec<Rational> = rhs.to_vec();
    for j in 0..n {
        let mut unit = vec![Rational::zero(); n];
        unit[j] = Rational::one();
        all_rows.push(unit);
        all_rhs.push(Rational::zero());
    }
    let feasible = |x: &[Rational]| {
        x.iter().all(|v| !v.is_negative())
            && rows.iter().zip(rhs).all(|(r, b)| r.iter().zip(x).map(|(a, v)| a * v).sum::<Rational>() >= *b)
    };
    let mut best: Option<Rational> = None;
    let mut chosen = Vec::with_capacity(n);
    fn walk(
        start: usize,
        chosen: &mut Vec<usize>,
        n: usize,
        total: usize,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if chosen.len() == n {
            visit(chosen);
            return;
        }
        for k in start..total {
            chosen.push(k);
            walk(k + 1, chosen, n, total, visit);
            chosen.pop();
        }
    }
    let mut visit = |idx: &[usize]| {
        let a = idx.iter().map(|&k| all_rows[k].clone()).collect();
        let b = idx.iter().map(|&k| all_rhs[k].clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(&x) {
                let v: Rational = cost.iter().zip(&x).map(|(c, v)| c * v).sum();
                if best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
        }
    };
    let total = all_rows.len();
    walk(0, &mut chosen, n, total, &mut visit);
    best.expect("bounded feasible program has a vertex")
}

/// Nonempty `B ⊂ 𝓜` with `B ⊉ A`.
pub fn constraint_sets(m: usize, a: TerminalSet) -> Vec<u32> {
    (1..(1u32 << m) - 1).filter(|&b| b & a.bits() != a.bits()).collect()
}

pub fn internal(g: &Multigraph, b: u32) -> u64 {
    g.pairs().filter(|&(i, j, _)| b >> i & 1 == 1 && b >> j & 1 == 1).map(|(_, _, e)| e).sum()
}

/// `OMN_G(A)` by vertex enumeration.
pub fn omn_oracle(g: &Multigraph, a: TerminalSet) -> Rational {
    let m = g.m();
    let sets = constraint_sets(m, a);
    let rows: Vec<Vec<Rational>> =
        sets.iter().map(|&b| (0..m).map(|i| int((b >> i & 1) as i64)).collect()).collect();
    let rhs: Vec<Rational> = sets.iter().map(|&b| int(internal(g, b) as i64)).collect();
    lp_min_by_vertices(&rows, &rhs, &vec![int(1); m])
}

/// `INT_{G^(n)}(A)` by scanning the box `Π [0, n·d_i]`.
pub fn int_omn_oracle(g: &Multigraph, a: TerminalSet, n: u64) -> u64 {
    let m = g.m();
    let caps: Vec<u64> = (0..m).map(|i| n * g.degree(i).unwrap()).collect();
    let sets: Vec<(u32, u64)> = constraint_sets(m, a).into_iter().map(|b| (b, n * internal(g, b))).collect();
    let mut best = u64::MAX;
    let mut x = vec![0u64; m];
    loop {
        let total: u64 = x.iter().sum();
        if total < best
            && sets.iter().all(|&(b, e)| (0..m).filter(|&i| b >> i & 1 == 1).map(|i| x[i]).sum::<u64>() >= e)
        {
            best = total;
        }
        let mut k = 0;
        loop {
            if k == m {
                return best;
            }
            if x[k] < caps[k] {
                x[k] += 1;
                break;
            }
            x[k] = 0;
            k += 1;
        }
    }
}

fn find(parent: &mut [usize], v: usize) -> usize {
    let mut r = v;
    while parent[r] != r {
        r = parent[r];
    }
    parent[v] = r;
    r
}

/// Every Steiner tree for `A` (any tree in the support that contains `A`),
/// as lists of pair indices, by scanning all subsets of support pairs.
pub fn steiner_trees_oracle(g: &Multigraph, a: TerminalSet) -> Vec<Vec<usize>> {
    let support: Vec<(usize, usize, usize)> = g
        .pairs()
        .enumerate()
        .filter(|(_, (_, _, e))| *e > 0)
        .map(|(p, (i, j, _))| (p, i, j))
        .collect();
    assert!(support.len() <= 20, "oracle limited to 20 support pairs");
    let mut out = Vec::new();
    for mask in 1u32..1 << support.len() {
        let chosen: Vec<&(usize, usize, usize)> =
            support.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, e)| e).collect();
        let mut parent: Vec<usize> = (0..g.m()).collect();
        let mut acyclic = true;
        let mut verts = 0u32;
        for &&(_, i, j) in &chosen {
            verts |= 1 << i | 1 << j;
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri == rj {
                acyclic = false;
                break;
            }
            parent[ri] = rj;
        }
        if !acyclic || verts & a.bits() != a.bits() || verts.count_ones() as usize != chosen.len() + 1 {
            continue;
        }
        out.push(chosen.iter().map(|e| e.0).collect());
    }
    out
}

/// `μ(A, G)` by exact dynamic programming over trees and residual
/// multiplicities.
pub fn mu_oracle(g: &Multigraph, a: TerminalSet) -> u64 {
    let trees = steiner_trees_oracle(g, a);
    let caps = g.multiplicities().to_vec();
    fn best(i: usize, caps: &mut Vec<u64>, trees: &[Vec<usize>], memo: &mut HashMap<(usize, Vec<u64>), u64>) -> u64 {
        if i == trees.len() {
            return 0;
        }
        if let Some(&v) = memo.get(&(i, caps.clone())) {
            return v;
        }
        let mut v = best(i + 1, caps, trees, memo);
        if trees[i].iter().all(|&p| caps[p] > 0) {
            for &p in &trees[i] {
                caps[p] -= 1;
            }
            v = v.max(1 + best(i, caps, trees, memo));
            for &p in &trees[i] {
                caps[p] += 1;
            }
        }
        memo.insert((i, caps.clone()), v);
        v
    }
    best(0, &mut caps.clone(), &trees, &mut HashMap::new())
}

/// `μ_f(A, G)` through the dual `min Σ e_p y_p` with every tree covered,
/// by vertex enumeration.
pub fn mu_f_oracle(g: &Multigraph, a: TerminalSet) -> Rational {
    let trees = steiner_trees_oracle(g, a);
    if trees.is_empty() {
        return Rational::zero();
    }
    let pairs: Vec<usize> = (0..g.num_pairs()).filter(|&p| g.multiplicities()[p] > 0).collect();
    let rows: Vec<Vec<Rational>> = trees
        .iter()
        .map(|t| pairs.iter().map(|p| int(t.contains(p) as i64)).collect())
        .collect();
    let rhs = vec![int(1); rows.len()];
    let cost: Vec<Rational> = pairs.iter().map(|&p| int(g.multiplicities()[p] as i64)).collect();
    lp_min_by_vertices(&rows, &rhs, &cost)
}

/// Spanning trees of the support of `g` by the matrix-tree theorem.
pub fn spanning_tree_count(g: &Multigraph) -> u64 {
    let m = g.m();
    let mut lap = vec![vec![Rational::zero(); m - 1]; m - 1];
    for (i, j, e) in g.pairs() {
        if e == 0 {
            continue;
        }
        for (x, y) in [(i, j), (j, i)] {
            if x < m - 1 {
                lap[x][x] += Rational::one();
                if y < m - 1 {
                    lap[x][y] -= Rational::one();
                }
            }
        }
    }
    let mut det = Rational::one();
    let n = m - 1;
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !lap[r][col].is_zero()) else {
            return 0;
        };
        if p != col {
            lap.swap(p, col);
            det = -det;
        }
        det *= lap[col][col].clone();
        for r in col + 1..n {
            let f = lap[r][col].clone() / lap[col][col].clone();
            for c in col..n {
                let delta = f.clone() * lap[col][c].clone();
                lap[r][c] -= delta;
            }
        }
    }
    det.to_integer().try_into().unwrap()
}

/// Set partitions of `0..m` as block labels (restricted growth strings).
pub fn partitions(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; m];
    fn go(k: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == labels.len() {
            out.push(labels.clone());
            return;
        }
        for l in 0..=max + 1 {
            labels[k] = l;
            go(k + 1, max.max(l), labels, out);
        }
    }
    if m > 0 {
        go(1, 0, &mut labels, &mut out);
    }
    out
}

/// `⌊min crossing/(|P|−1)⌋` over partitions of all terminals with at least
/// two blocks.
pub fn partition_formula(g: &Multigraph) -> u64 {
    let mut best: Option<Rational> = None;
    for labels in partitions(g.m()) {
        let blocks = labels.iter().max().unwrap() + 1;
        if blocks < 2 {
            continue;
        }
        let cross: u64 = g.pairs().filter(|&(i, j, _)| labels[i] != labels[j]).map(|(_, _, e)| e).sum();
        let v = Rational::new(int(cross as i64).to_integer(), int((blocks - 1) as i64).to_integer());
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    best.unwrap().floor().to_integer().try_into().unwrap()
}
