//! Steiner tree enumeration and packing.
//!
//! Trees live on the support of the multigraph (at most one edge per pair);
//! a packing assigns each tree a usage count, and the usage of a pair summed
//! over all trees must not exceed its multiplicity.

use std::collections::HashMap;
use std::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{enumerate_partitions, Multigraph, Terminal, TerminalSet};
use crate::lp::{solve_lp, LinearProgram, Relation, Sense};
use crate::omniscience::{check_set, DEFAULT_MAX_TERMINALS};
use crate::rational::{int, ratio, Rational};

pub const DEFAULT_TREE_CAP: usize = 1_000_000;

/// A tree in the support graph, stored as sorted `(i, j)` pairs with `i < j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SteinerTree {
    edges: Vec<(Terminal, Terminal)>,
    vertices: TerminalSet,
}

impl SteinerTree {
    /// Validates that `edges` form a tree: nonempty, no repeated pair, no
    /// self-loop, connected and acyclic.
    pub fn new(edges: Vec<(Terminal, Terminal)>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::MalformedTree("no edges".into()));
        }
        let mut norm: Vec<(Terminal, Terminal)> = Vec::with_capacity(edges.len());
        for (i, j) in edges {
            if i == j {
                return Err(Error::MalformedTree(format!("self-loop on {}", i + 1)));
            }
            if i.max(j) >= crate::graph::MAX_TERMINALS {
                return Err(Error::MalformedTree(format!("terminal {} out of range", i.max(j) + 1)));
            }
            norm.push((i.min(j), i.max(j)));
        }
        norm.sort_unstable();
        if norm.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedTree("repeated pair".into()));
        }
        let vertices: TerminalSet = norm.iter().flat_map(|&(i, j)| [i, j]).collect();
        if vertices.len() != norm.len() + 1 {
            return Err(Error::MalformedTree(format!(
                "{} edges on {} vertices",
                norm.len(),
                vertices.len()
            )));
        }
        // With |V| = |E| + 1, connectivity is equivalent to acyclicity.
        let mut reached = TerminalSet::singleton(norm[0].0);
        loop {
            let before = reached;
            for &(i, j) in &norm {
                if reached.contains(i) || reached.contains(j) {
                    reached = reached.with(i).with(j);
                }
            }
            if reached == before {
                break;
            }
        }
        if reached != vertices {
            return Err(Error::MalformedTree("not connected".into()));
        }
        Ok(Self { edges: norm, vertices })
    }

    pub fn edges(&self) -> &[(Terminal, Terminal)] {
        &self.edges
    }

    pub fn vertices(&self) -> TerminalSet {
        self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn degree(&self, v: Terminal) -> usize {
        self.edges.iter().filter(|&&(i, j)| i == v || j == v).count()
    }

    pub fn leaves(&self) -> TerminalSet {
        self.vertices.iter().filter(|&v| self.degree(v) == 1).collect()
    }

    pub fn covers(&self, a: TerminalSet) -> bool {
        self.vertices.is_superset_of(a)
    }

    /// Every leaf belongs to `A`, so no edge can be dropped while still
    /// covering `A`.
    pub fn is_leaf_minimal(&self, a: TerminalSet) -> bool {
        self.leaves().is_subset_of(a)
    }

    /// Canonical pair indices of the edges in `g`.
    pub fn pair_indices(&self, g: &Multigraph) -> Vec<usize> {
        self.edges.iter().map(|&(i, j)| g.pair_index(i, j)).collect()
    }

    /// Checks that the tree lives in the support of `g` and covers `a`.
    pub fn verify(&self, g: &Multigraph, a: TerminalSet) -> Result<()> {
        if self.vertices.bound() > g.m() {
            return Err(Error::MalformedTree("vertex outside the graph".into()));
        }
        if let Some(&(i, j)) = self.edges.iter().find(|&&(i, j)| g.multiplicity(i, j) == 0) {
            return Err(Error::MalformedTree(format!("pair {}-{} has no edge", i + 1, j + 1)));
        }
        if !self.covers(a) {
            return Err(Error::MalformedTree(format!("does not cover {a}")));
        }
        Ok(())
    }
}

/// One-based, e.g. `{1-2,2-3}`.
impl fmt::Display for SteinerTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|(i, j)| format!("{}-{}", i + 1, j + 1)).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for SteinerTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PackingOptions {
    pub tree_cap: usize,
    pub max_terminals: usize,
}

impl Default for PackingOptions {
    fn default() -> Self {
        Self { tree_cap: DEFAULT_TREE_CAP, max_terminals: DEFAULT_MAX_TERMINALS }
    }
}

struct Enumerator<'a> {
    g: &'a Multigraph,
    a: TerminalSet,
    cap: usize,
    out: Vec<SteinerTree>,
}

impl Enumerator<'_> {
    /// Vertices reachable from `from` without using excluded pairs.
    fn reachable(&self, from: TerminalSet, excluded: &[bool]) -> TerminalSet {
        let mut seen = from;
        let mut stack: Vec<Terminal> = from.iter().collect();
        while let Some(x) = stack.pop() {
            for y in 0..self.g.m() {
                if !seen.contains(y) && self.g.multiplicity(x, y) > 0 && !excluded[self.g.pair_index(x, y)] {
                    seen.insert(y);
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Every subtree containing the current vertex set is reached exactly
    /// once by deciding the frontier pairs one at a time.
    fn grow(
        &mut self,
        vertices: TerminalSet,
        edges: &mut Vec<(Terminal, Terminal)>,
        excluded: &mut Vec<bool>,
    ) -> Result<()> {
        if !self.reachable(vertices, excluded).is_superset_of(self.a) {
            return Ok(());
        }
        let g = self.g;
        let next = vertices.iter().find_map(|x| {
            (0..g.m()).find(|&y| {
                !vertices.contains(y) && g.multiplicity(x, y) > 0 && !excluded[g.pair_index(x, y)]
            })
            .map(|y| (x, y))
        });
        let Some((x, y)) = next else {
            if vertices.is_superset_of(self.a) && !edges.is_empty() {
                if self.out.len() == self.cap {
                    return Err(Error::TreeCapExceeded { cap: self.cap });
                }
                self.out.push(SteinerTree::new(edges.clone()).expect("grown edges form a tree"));
            }
            return Ok(());
        };
        let p = g.pair_index(x, y);
        edges.push((x, y));
        self.grow(vertices.with(y), edges, excluded)?;
        edges.pop();
        excluded[p] = true;
        self.grow(vertices, edges, excluded)?;
        excluded[p] = false;
        Ok(())
    }
}

/// All Steiner trees for `A` in the support graph, ordered by size and then
/// by edge list.
pub fn enumerate_steiner_trees(g: &Multigraph, a: TerminalSet) -> Result<Vec<SteinerTree>> {
    enumerate_steiner_trees_with(g, a, &PackingOptions::default())
}

pub fn enumerate_steiner_trees_with(
    g: &Multigraph,
    a: TerminalSet,
    options: &PackingOptions,
) -> Result<Vec<SteinerTree>> {
    check_set(g, a, options.max_terminals)?;
    let root = a.iter().next().expect("|A| ≥ 2");
    let mut e = Enumerator { g, a, cap: options.tree_cap, out: Vec::new() };
    e.grow(TerminalSet::singleton(root), &mut Vec::new(), &mut vec![false; g.num_pairs()])?;
    let mut trees = e.out;
    trees.sort_by(|s, t| (s.len(), &s.edges).cmp(&(t.len(), &t.edges)));
    Ok(trees)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PackingStats {
    pub trees_considered: usize,
    pub nodes: u64,
    pub upper_bound: u64,
}

/// Edge-disjoint Steiner trees in a multigraph, as trees with usage counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerPacking {
    pub graph: Multigraph,
    pub set: TerminalSet,
    pub value: u64,
    pub trees: Vec<(SteinerTree, u64)>,
    pub stats: PackingStats,
}

impl IntegerPacking {
    /// Usage of every pair, in canonical order.
    pub fn usage(&self) -> Vec<u64> {
        let mut used = vec![0; self.graph.num_pairs()];
        for (t, c) in &self.trees {
            for p in t.pair_indices(&self.graph) {
                used[p] += c;
            }
        }
        used
    }

    /// Recomputes every tree and the capacity constraints.
    pub fn verify(&self) -> Result<()> {
        for (t, _) in &self.trees {
            SteinerTree::new(t.edges.clone())?;
            t.verify(&self.graph, self.set)?;
        }
        for (p, (&u, &e)) in self.usage().iter().zip(self.graph.multiplicities()).enumerate() {
            if u > e {
                let (i, j) = self.graph.pair_at(p);
                return Err(Error::InsufficientMultiplicity { i, j });
            }
        }
        let total: u64 = self.trees.iter().map(|(_, c)| c).sum();
        if total != self.value {
            return Err(Error::Precondition(format!("packing holds {total} trees, reports {}", self.value)));
        }
        Ok(())
    }
}

/// Tree weights satisfying the per-pair capacity constraints.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalPacking {
    pub graph: Multigraph,
    pub set: TerminalSet,
    pub value: Rational,
    pub trees: Vec<SteinerTree>,
    pub weights: Vec<Rational>,
}

impl FractionalPacking {
    pub fn is_feasible(&self) -> bool {
        let mut load = vec![Rational::zero(); self.graph.num_pairs()];
        for (t, w) in self.trees.iter().zip(&self.weights) {
            if *w < Rational::zero() {
                return false;
            }
            for p in t.pair_indices(&self.graph) {
                load[p] += w;
            }
        }
        load.iter().zip(self.graph.multiplicities()).all(|(l, &e)| *l <= int(e as i64))
            && self.weights.iter().sum::<Rational>() == self.value
    }
}

/// The trees a maximum packing needs: every Steiner tree contains one whose
/// leaves all lie in `A`, so restricting to those loses nothing.
fn packing_trees(g: &Multigraph, a: TerminalSet, options: &PackingOptions) -> Result<Vec<SteinerTree>> {
    Ok(enumerate_steiner_trees_with(g, a, options)?
        .into_iter()
        .filter(|t| t.is_leaf_minimal(a))
        .collect())
}

fn fractional_program(g: &Multigraph, trees: &[SteinerTree]) -> LinearProgram {
    let mut p = LinearProgram::new(Sense::Maximize, vec![int(1); trees.len()]);
    let columns: Vec<Vec<usize>> = trees.iter().map(|t| t.pair_indices(g)).collect();
    for q in g.support() {
        let terms: Vec<(usize, Rational)> = columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(&q))
            .map(|(l, _)| (l, int(1)))
            .collect();
        if !terms.is_empty() {
            p.add_sparse(&terms, Relation::Le, int(g.multiplicities()[q] as i64)).expect("in range");
        }
    }
    p
}

pub fn mu_f(g: &Multigraph, a: TerminalSet) -> Result<FractionalPacking> {
    mu_f_with(g, a, &PackingOptions::default())
}

/// Maximum fractional Steiner tree packing.
pub fn mu_f_with(g: &Multigraph, a: TerminalSet, options: &PackingOptions) -> Result<FractionalPacking> {
    let trees = packing_trees(g, a, options)?;
    let r = solve_lp(&fractional_program(g, &trees));
    let value = r.optimum().clone();
    let (trees, weights): (Vec<_>, Vec<_>) =
        trees.into_iter().zip(r.witness).filter(|(_, w)| !w.is_zero()).unzip();
    Ok(FractionalPacking { graph: g.clone(), set: a, value, trees, weights })
}

/// A partition of the terminals, reduced to the pairs it cuts.
struct CutFamily {
    pairs: Vec<usize>,
    divisor: u64,
}

struct Packer<'a> {
    trees: &'a [Vec<usize>],
    cuts: Vec<CutFamily>,
    failed: HashMap<Vec<u64>, u64>,
    nodes: u64,
}

impl Packer<'_> {
    /// Every tree for `A` crosses an admissible partition at least
    /// `|𝒫| − 1` times.
    fn bound(&self, residual: &[u64]) -> u64 {
        self.cuts
            .iter()
            .map(|c| c.pairs.iter().map(|&p| residual[p]).sum::<u64>() / c.divisor)
            .min()
            .unwrap_or(0)
    }

    fn fits(&self, t: usize, residual: &[u64]) -> bool {
        self.trees[t].iter().all(|&p| residual[p] > 0)
    }

    fn apply(&self, t: usize, residual: &mut [u64], sign: bool) {
        for &p in &self.trees[t] {
            if sign {
                residual[p] -= 1;
            } else {
                residual[p] += 1;
            }
        }
    }

    /// Trees that fit, paired with the bound left after taking them, best
    /// first; ties keep tree order.
    fn children(&self, residual: &mut [u64]) -> Vec<(usize, u64)> {
        let mut out = Vec::new();
        for t in 0..self.trees.len() {
            if self.fits(t, residual) {
                self.apply(t, residual, true);
                out.push((t, self.bound(residual)));
                self.apply(t, residual, false);
            }
        }
        out.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
        out
    }

    fn greedy(&mut self, residual: &mut [u64]) -> Vec<usize> {
        let mut chosen = Vec::new();
        while let Some(&(t, _)) = self.children(residual).first() {
            self.nodes += 1;
            self.apply(t, residual, true);
            chosen.push(t);
        }
        for &t in &chosen {
            self.apply(t, residual, false);
        }
        chosen
    }

    /// Whether `k` more trees fit into `residual`; on success `chosen`
    /// receives them.
    fn feasible(&mut self, residual: &mut Vec<u64>, k: u64, chosen: &mut Vec<usize>) -> bool {
        if k == 0 {
            return true;
        }
        self.nodes += 1;
        if self.bound(residual) < k || self.failed.get(residual).is_some_and(|&f| f <= k) {
            return false;
        }
        for (t, b) in self.children(residual) {
            if b + 1 < k {
                break;
            }
            self.apply(t, residual, true);
            let ok = self.feasible(residual, k - 1, chosen);
            self.apply(t, residual, false);
            if ok {
                chosen.push(t);
                return true;
            }
        }
        let entry = self.failed.entry(residual.clone()).or_insert(k);
        *entry = (*entry).min(k);
        false
    }
}

pub fn mu(g: &Multigraph, a: TerminalSet) -> Result<IntegerPacking> {
    mu_with(g, a, &PackingOptions::default())
}

/// Maximum number of edge-disjoint Steiner trees, by branch-and-bound.
///
/// The incumbent comes from a bound-guided greedy descent; larger targets
/// are then tried one at a time by depth-first search until one fails or
/// the root bound is met. Failed residuals are memoised.
pub fn mu_with(g: &Multigraph, a: TerminalSet, options: &PackingOptions) -> Result<IntegerPacking> {
    let trees = packing_trees(g, a, options)?;
    let columns: Vec<Vec<usize>> = trees.iter().map(|t| t.pair_indices(g)).collect();
    let cuts = enumerate_partitions(g.m())
        .into_iter()
        .filter(|p| p.len() >= 2 && p.atoms().iter().all(|atom| atom.intersects(a)))
        .map(|p| {
            let label = p.labels(g.m());
            let pairs = (0..g.num_pairs())
                .filter(|&q| {
                    let (i, j) = g.pair_at(q);
                    label[i] != label[j]
                })
                .collect();
            CutFamily { pairs, divisor: (p.len() - 1) as u64 }
        })
        .collect();
    let mut packer = Packer { trees: &columns, cuts, failed: HashMap::new(), nodes: 0 };

    let mut residual = g.multiplicities().to_vec();
    let mut upper = packer.bound(&residual);
    if !trees.is_empty() {
        let relaxed = solve_lp(&fractional_program(g, &trees));
        let floor = relaxed.optimum().floor().to_integer().to_u64().expect("nonnegative");
        upper = upper.min(floor);
    } else {
        upper = 0;
    }

    let mut best = packer.greedy(&mut residual);
    let mut k = best.len() as u64 + 1;
    while k <= upper {
        let mut chosen = Vec::new();
        if !packer.feasible(&mut residual, k, &mut chosen) {
            break;
        }
        best = chosen;
        k += 1;
    }

    let mut counts: Vec<u64> = vec![0; trees.len()];
    for t in &best {
        counts[*t] += 1;
    }
    let packed: Vec<(SteinerTree, u64)> =
        trees.iter().cloned().zip(counts).filter(|&(_, c)| c > 0).collect();
    let result = IntegerPacking {
        graph: g.clone(),
        set: a,
        value: best.len() as u64,
        trees: packed,
        stats: PackingStats { trees_considered: trees.len(), nodes: packer.nodes, upper_bound: upper },
    };
    result.verify()?;
    Ok(result)
}

/// Half the smallest cut `(C, C^c)` over nonempty `C ≠ 𝓜` meeting `A`,
/// rounded down. A lower bound on the packing number of an Eulerian graph.
pub fn eulerian_lower_bound(g: &Multigraph, a: TerminalSet) -> Result<u64> {
    check_set(g, a, DEFAULT_MAX_TERMINALS)?;
    if let Some(odd) = g.degrees().iter().position(|d| d % 2 == 1) {
        return Err(Error::NotEulerian(odd));
    }
    let full = TerminalSet::full(g.m());
    let min_cut = (1..full.bits())
        .map(TerminalSet::from_bits)
        .filter(|c| c.intersects(a))
        .map(|c| g.cut_count(c))
        .min()
        .expect("m ≥ 2");
    Ok(min_cut / 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateRow {
    pub n: u64,
    pub mu: u64,
    pub rate: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PackingRate {
    pub rows: Vec<RateRow>,
    pub mu_f: Rational,
}

/// `μ(A, G^(n))/n` for `n = 1..=n_max` next to `μ_f(A, G)`.
pub fn packing_rate(g: &Multigraph, a: TerminalSet, n_max: u64) -> Result<PackingRate> {
    if n_max == 0 {
        return Err(Error::ZeroBlowUp);
    }
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let value = mu(&g.blow_up(n)?, a)?.value;
        rows.push(RateRow { n, mu: value, rate: ratio(value as i64, n as i64) });
    }
    Ok(PackingRate { rows, mu_f: mu_f(g, a)?.value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(m: usize, edges: &[(usize, usize, i64)]) -> Multigraph {
        Multigraph::from_edges(m, edges).unwrap()
    }

    fn complete(m: usize) -> Multigraph {
        let mut e = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                e.push((i, j, 1));
            }
        }
        graph(m, &e)
    }

    #[test]
    fn tree_validation() {
        assert!(SteinerTree::new(vec![(0, 1), (1, 2)]).is_ok());
        assert!(SteinerTree::new(vec![]).is_err());
        assert!(SteinerTree::new(vec![(0, 1), (1, 2), (0, 2)]).is_err());
        assert!(SteinerTree::new(vec![(0, 1), (2, 3)]).is_err());
        assert!(SteinerTree::new(vec![(0, 1), (1, 0)]).is_err());
        let t = SteinerTree::new(vec![(2, 1), (0, 1)]).unwrap();
        assert_eq!(t.to_string(), "{1-2,2-3}");
        assert_eq!(t.leaves(), TerminalSet::from([0, 2]));
    }

    #[test]
    fn tree_counts() {
        let p3 = graph(3, &[(0, 1, 1), (1, 2, 1)]);
        let trees = enumerate_steiner_trees(&p3, [0, 2].into()).unwrap();
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].edges(), &[(0, 1), (1, 2)]);
        assert_eq!(enumerate_steiner_trees(&complete(3), TerminalSet::full(3)).unwrap().len(), 3);
        assert_eq!(enumerate_steiner_trees(&complete(4), TerminalSet::full(4)).unwrap().len(), 16);
        let opts = PackingOptions { tree_cap: 10, ..Default::default() };
        assert_eq!(
            enumerate_steiner_trees_with(&complete(4), TerminalSet::full(4), &opts).unwrap_err(),
            Error::TreeCapExceeded { cap: 10 }
        );
    }

    #[test]
    fn packing_values() {
        let tri = complete(3);
        let all = TerminalSet::full(3);
        assert_eq!(mu(&tri, all).unwrap().value, 1);
        assert_eq!(mu_f(&tri, all).unwrap().value, ratio(3, 2));
        assert_eq!(mu(&tri.blow_up(2).unwrap(), all).unwrap().value, 3);
        let p3 = graph(3, &[(0, 1, 1), (1, 2, 1)]);
        assert_eq!(mu(&p3.blow_up(2).unwrap(), [0, 2].into()).unwrap().value, 2);
        let pair = graph(2, &[(0, 1, 4)]);
        assert_eq!(mu_f(&pair, TerminalSet::full(2)).unwrap().value, int(4));
        assert_eq!(mu(&complete(4), TerminalSet::full(4)).unwrap().value, 2);
    }

    #[test]
    fn disconnected_users_pack_nothing() {
        let g = graph(4, &[(0, 1, 2), (2, 3, 2)]);
        let a = TerminalSet::from([0, 3]);
        assert_eq!(mu(&g, a).unwrap().value, 0);
        assert_eq!(mu_f(&g, a).unwrap().value, int(0));
    }

    #[test]
    fn eulerian_bounds() {
        let tri2 = complete(3).blow_up(2).unwrap();
        assert_eq!(eulerian_lower_bound(&tri2, TerminalSet::full(3)).unwrap(), 2);
        let p3 = graph(3, &[(0, 1, 2), (1, 2, 2)]);
        assert_eq!(eulerian_lower_bound(&p3, [0, 2].into()).unwrap(), 1);
        assert_eq!(
            eulerian_lower_bound(&graph(3, &[(0, 1, 1), (1, 2, 1)]), [0, 2].into()).unwrap_err(),
            Error::NotEulerian(0)
        );
    }

    #[test]
    fn rates() {
        let r = packing_rate(&complete(3), TerminalSet::full(3), 2).unwrap();
        let got: Vec<(u64, Rational)> = r.rows.iter().map(|row| (row.n, row.rate.clone())).collect();
        assert_eq!(got, vec![(1, int(1)), (2, ratio(3, 2))]);
        assert_eq!(r.mu_f, ratio(3, 2));
    }
}
