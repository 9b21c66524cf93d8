//! Networks with a single helper.
//!
//! Throughout, the helper is the last terminal `h = m − 1` and the users are
//! `A = {0, …, m − 2}`. Covers the weak-helper tests, tight constraint sets
//! and the edge-splitting reduction that turns a weak helper's Steiner tree
//! packing into a spanning tree packing of the users, and the decomposition
//! bounds through fractional multigraphs on `A`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{enumerate_constraint_sets, Multigraph, Terminal, TerminalSet};
use crate::lp::{enumerate_integer_points, solve_ilp, solve_lp, LinearProgram, Relation, Sense};
use crate::omniscience::{self, check_set, int_omn, omn, omniscience_program, to_u64, DEFAULT_MAX_TERMINALS};
use crate::packing::{enumerate_steiner_trees_with, mu_f_with, mu_with, PackingOptions};
use crate::rational::{int, ratio, Rational};

/// Default cap on the integer `ẽ` box enumerated for the integer bounds.
pub const DEFAULT_BOX_LIMIT: u128 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HelperOptions {
    pub box_limit: u128,
    pub packing: PackingOptions,
}

impl Default for HelperOptions {
    fn default() -> Self {
        Self { box_limit: DEFAULT_BOX_LIMIT, packing: PackingOptions::default() }
    }
}

/// The lone helper of `A`, which must be the last terminal.
pub fn single_helper(g: &Multigraph, a: TerminalSet) -> Result<Terminal> {
    let outside = g.terminals().difference(a);
    if outside.len() != 1 {
        return Err(Error::HelperCount(outside.len()));
    }
    let h = outside.iter().next().expect("one member");
    if h != g.m() - 1 {
        return Err(Error::Precondition(format!(
            "the helper must be the last terminal, found terminal {}",
            h + 1
        )));
    }
    Ok(h)
}

/// The users `{0, …, m − 2}` after checking the size caps.
fn users(g: &Multigraph) -> Result<TerminalSet> {
    if g.m() < 3 {
        return Err(Error::TooFewTerminals(g.m()));
    }
    let a = TerminalSet::full(g.m() - 1);
    check_set(g, a, DEFAULT_MAX_TERMINALS)?;
    Ok(a)
}

/// Weights `0 ≤ ẽ_ij ≤ e_ij` on the pairs inside `A`, stored in the
/// canonical pair order of the graph induced on `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalMultigraph {
    users: usize,
    weights: Vec<Rational>,
}

impl FractionalMultigraph {
    pub fn new(g: &Multigraph, weights: Vec<Rational>) -> Result<Self> {
        let inner = g.prefix(g.m() - 1)?;
        if weights.len() != inner.num_pairs() {
            return Err(Error::ArityMismatch { expected: inner.num_pairs(), got: weights.len() });
        }
        for (w, (i, j, e)) in weights.iter().zip(inner.pairs()) {
            if w.is_negative() || *w > int(e as i64) {
                return Err(Error::Precondition(format!(
                    "weight {w} on pair ({}, {}) is outside [0, {e}]",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(Self { users: inner.m(), weights })
    }

    pub fn zero(g: &Multigraph) -> Self {
        let users = g.m() - 1;
        Self { users, weights: vec![Rational::zero(); users * (users - 1) / 2] }
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// `ẽ_ij` for users `i ≠ j`.
    pub fn weight(&self, i: Terminal, j: Terminal) -> &Rational {
        let shape = Multigraph::empty(self.users).expect("at least one user");
        &self.weights[shape.pair_index(i, j)]
    }

    /// `G̃` as a multigraph on `A` when every weight is an integer.
    pub fn to_multigraph(&self) -> Option<Multigraph> {
        let mult = self.weights.iter().map(|w| w.is_integer().then(|| to_u64(w))).collect::<Option<_>>()?;
        Multigraph::from_multiplicities(self.users, mult).ok()
    }

    /// `G ∖ G̃` as a multigraph on all terminals when every weight is an
    /// integer.
    pub fn complement(&self, g: &Multigraph) -> Option<Multigraph> {
        let inner = self.to_multigraph()?;
        let mut out = g.clone();
        for (i, j, e) in inner.pairs() {
            out.set_multiplicity(i, j, g.multiplicity(i, j) - e);
        }
        Some(out)
    }
}

/// Outcome of a weak-helper test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakHelper<T> {
    pub holds: bool,
    /// Optimum without the helper constraint.
    pub unconstrained: T,
    /// Optimum with the helper constraint.
    pub constrained: T,
    /// Optimal point of the constrained program.
    pub witness: Vec<T>,
}

/// Whether some rate vector attaining `OMN_G(A)` has `R_h ≤ d_h/2`.
pub fn weak_helper_lp(g: &Multigraph) -> Result<WeakHelper<Rational>> {
    let a = users(g)?;
    let h = g.m() - 1;
    let unconstrained = omn(g, a)?.value;
    let mut p = omniscience_program(g, a, 1, false);
    p.set_upper_bound(h, ratio(g.degree(h)? as i64, 2));
    let r = solve_lp(&p);
    let constrained = r.optimum().clone();
    Ok(WeakHelper { holds: constrained == unconstrained, unconstrained, constrained, witness: r.witness })
}

/// Whether some length vector attaining `INT_G(A)` has `I_h ≤ ⌊d_h/2⌋`.
pub fn weak_helper_ilp(g: &Multigraph) -> Result<WeakHelper<u64>> {
    let a = users(g)?;
    let h = g.m() - 1;
    let unconstrained = int_omn(g, a, 1)?.value;
    let mut p = omniscience_program(g, a, 1, false);
    for (i, d) in g.degrees().into_iter().enumerate() {
        let cap = if i == h { d / 2 } else { d };
        p.set_upper_bound(i, int(cap as i64));
    }
    let r = solve_ilp(&p, &vec![true; g.m()]);
    // `I_i = d_i` on the users and `I_h = 0` is always feasible.
    let constrained = to_u64(r.optimum());
    Ok(WeakHelper {
        holds: constrained == unconstrained,
        unconstrained,
        constrained,
        witness: r.witness.iter().map(to_u64).collect(),
    })
}

/// The tight constraint sets of a length vector, with `D_h(B)`, the number
/// of helper edges into `B ∩ A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightSetFamily {
    pub helper: Terminal,
    pub members: Vec<TerminalSet>,
    pub helper_edges: Vec<u64>,
}

impl TightSetFamily {
    /// `B′`: the intersection of the members with `u ∉ B` and `h ∈ B`, or
    /// the empty set when there are none.
    pub fn inner_set(&self, u: Terminal) -> TerminalSet {
        self.members
            .iter()
            .filter(|b| !b.contains(u) && b.contains(self.helper))
            .copied()
            .reduce(|x, y| x.intersection(y))
            .unwrap_or(TerminalSet::EMPTY)
    }

    /// `B″`: the union of the members with `u ∈ B` and `h ∉ B`.
    pub fn outer_set(&self, u: Terminal) -> TerminalSet {
        self.members
            .iter()
            .filter(|b| b.contains(u) && !b.contains(self.helper))
            .fold(TerminalSet::EMPTY, |x, &y| x.union(y))
    }

    pub fn contains(&self, b: TerminalSet) -> bool {
        self.members.binary_search(&b).is_ok()
    }

    /// Closure under union and intersection of members whose union does not
    /// contain `A`. Returns the first offending pair.
    pub fn closure_violation(&self, a: TerminalSet) -> Option<(TerminalSet, TerminalSet)> {
        for (k, &x) in self.members.iter().enumerate() {
            for &y in &self.members[k + 1..] {
                let (u, i) = (x.union(y), x.intersection(y));
                if !u.is_superset_of(a) && (!self.contains(u) || (!i.is_empty() && !self.contains(i))) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Members contradicting `D_h(B) ≥ I_h` when `h ∈ B`, or `D_h(B) ≤ I_h`
    /// when `h ∉ B`.
    pub fn degree_violations(&self, helper_length: u64) -> Vec<TerminalSet> {
        self.members
            .iter()
            .zip(&self.helper_edges)
            .filter(|(b, &d)| if b.contains(self.helper) { d < helper_length } else { d > helper_length })
            .map(|(&b, _)| b)
            .collect()
    }
}

/// The constraint sets `B` with `Σ_{i∈B} I_i = e_G(B)`, for a helper `h`.
pub fn tight_sets(g: &Multigraph, a: TerminalSet, lengths: &[u64]) -> Result<TightSetFamily> {
    check_set(g, a, DEFAULT_MAX_TERMINALS)?;
    if lengths.len() != g.m() {
        return Err(Error::ArityMismatch { expected: g.m(), got: lengths.len() });
    }
    let outside = g.terminals().difference(a);
    if outside.len() != 1 {
        return Err(Error::HelperCount(outside.len()));
    }
    let helper = outside.iter().next().expect("one member");
    let mut members = Vec::new();
    for b in enumerate_constraint_sets(g.m(), a) {
        let sum: u64 = b.iter().map(|i| lengths[i]).sum();
        let e = g.internal_edges(b);
        if sum < e {
            return Err(Error::InfeasibleLengths(format!("{b} carries {sum} < {e}")));
        }
        if sum == e {
            members.push(b);
        }
    }
    members.sort();
    let helper_edges = members
        .iter()
        .map(|b| b.intersection(a).iter().map(|i| g.multiplicity(i, helper)).sum())
        .collect();
    Ok(TightSetFamily { helper, members, helper_edges })
}

/// A split-off pair `(u, v)` with the sets behind the choice of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitChoice {
    pub u: Terminal,
    pub v: Terminal,
    pub inner: TerminalSet,
    pub outer: TerminalSet,
}

fn helper_neighbours(g: &Multigraph) -> Vec<Terminal> {
    let h = g.m() - 1;
    (0..h).filter(|&i| g.multiplicity(i, h) > 0).collect()
}

/// A user `v` such that lowering the helper length by one stays optimal on
/// `G^{uv}`. `u` defaults to the smallest user adjacent to the helper; ties
/// in `v` go to the smallest index.
pub fn choose_split_partner(g: &Multigraph, lengths: &[u64], u: Option<Terminal>) -> Result<SplitChoice> {
    let a = users(g)?;
    let h = g.m() - 1;
    let neighbours = helper_neighbours(g);
    if neighbours.len() < 2 {
        return Err(Error::Precondition("the helper reaches fewer than two users".into()));
    }
    let d = g.degree(h)?;
    if lengths.len() != g.m() || lengths[h] == 0 || lengths[h] > d / 2 {
        return Err(Error::Precondition(format!(
            "helper length must lie in [1, {}], got {:?}",
            d / 2,
            lengths.get(h)
        )));
    }
    let u = u.unwrap_or(neighbours[0]);
    if !neighbours.contains(&u) {
        return Err(Error::Precondition(format!("terminal {} is not adjacent to the helper", u + 1)));
    }
    let family = tight_sets(g, a, lengths)?;
    let (inner, outer) = (family.inner_set(u), family.outer_set(u));
    let v = neighbours
        .iter()
        .copied()
        .find(|&v| v != u && !outer.contains(v) && (inner.is_empty() || inner.contains(v)))
        .ok_or_else(|| Error::Precondition("no split partner exists; lengths are not optimal".into()))?;
    let mut reduced = lengths.to_vec();
    reduced[h] -= 1;
    let split = g.split_off(u, v, h)?;
    let rates: Vec<Rational> = reduced.iter().map(|&x| int(x as i64)).collect();
    if !omniscience::is_omniscience_feasible(&split, a, 1, &rates) {
        return Err(Error::Precondition(format!(
            "lowered lengths are infeasible after splitting ({}, {})",
            u + 1,
            v + 1
        )));
    }
    Ok(SplitChoice { u, v, inner, outer })
}

/// One multigraph of a split chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitStep {
    pub graph: Multigraph,
    /// Lengths carried along the chain; optimal for `graph`.
    pub lengths: Vec<u64>,
    /// `INT_{G_i}(A)`, solved afresh.
    pub int: u64,
    /// `|E_i| − INT_{G_i}(A)`.
    pub invariant: u64,
    /// The split applied to reach the next step.
    pub split: Option<SplitChoice>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitChain {
    pub steps: Vec<SplitStep>,
    /// `μ(A, G_q)` for the last multigraph.
    pub final_mu: u64,
}

impl SplitChain {
    pub fn is_invariant_constant(&self) -> bool {
        self.steps.windows(2).all(|w| w[0].invariant == w[1].invariant)
    }

    /// Every carried length vector attains the integer optimum.
    pub fn lengths_optimal(&self) -> bool {
        self.steps.iter().all(|s| s.lengths.iter().sum::<u64>() == s.int)
    }

    /// `μ(A, G_q) = |E_q| − INT_{G_q}(A)` and the invariant is constant, so
    /// `μ(A, G) = |E| − INT_G(A)`.
    pub fn certifies(&self) -> bool {
        self.is_invariant_constant() && self.steps.last().is_some_and(|s| s.invariant == self.final_mu)
    }
}

/// Splits helper edges until the helper length reaches zero or the helper
/// reaches at most one user. Requires a weak helper in the integer sense.
pub fn reduce_to_spanning(g: &Multigraph) -> Result<SplitChain> {
    reduce_to_spanning_with(g, &HelperOptions::default())
}

pub fn reduce_to_spanning_with(g: &Multigraph, options: &HelperOptions) -> Result<SplitChain> {
    let a = users(g)?;
    let h = g.m() - 1;
    let weak = weak_helper_ilp(g)?;
    if !weak.holds {
        return Err(Error::Precondition("the helper is not weak: no optimal lengths with I_h ≤ ⌊d_h/2⌋".into()));
    }
    let mut graph = g.clone();
    let mut lengths = weak.witness;
    let mut steps = Vec::new();
    loop {
        let int = int_omn(&graph, a, 1)?.value;
        let invariant = graph.edge_count() - int;
        let split = if lengths[h] == 0 || helper_neighbours(&graph).len() <= 1 {
            None
        } else {
            Some(choose_split_partner(&graph, &lengths, None)?)
        };
        let next = split.as_ref().map(|s| graph.split_off(s.u, s.v, h)).transpose()?;
        steps.push(SplitStep { graph: graph.clone(), lengths: lengths.clone(), int, invariant, split });
        match next {
            Some(n) => {
                graph = n;
                lengths[h] -= 1;
            }
            None => break,
        }
    }
    let final_mu = mu_with(&graph, a, &options.packing)?.value;
    Ok(SplitChain { steps, final_mu })
}

/// One decomposition bound: `lhs` against the optimum over `G̃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundRow {
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
    /// An optimal `G̃`.
    pub split: FractionalMultigraph,
}

/// The four decomposition bounds through multigraphs `G̃` on `A`:
/// `μ_f(A,G) ≥ max μ_f(A,G̃) + μ_f(𝓜,G∖G̃)`, `OMN_G(A) ≤ min OMN_G̃(A) +
/// OMN_{G∖G̃}(𝓜)`, and their integer analogues over integer `G̃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionBounds {
    pub fractional_packing: BoundRow,
    pub fractional_omniscience: BoundRow,
    pub integer_packing: BoundRow,
    pub integer_omniscience: BoundRow,
}

impl DecompositionBounds {
    pub fn rows(&self) -> [(&'static str, &BoundRow); 4] {
        [
            ("fractional_packing", &self.fractional_packing),
            ("fractional_omniscience", &self.fractional_omniscience),
            ("integer_packing", &self.integer_packing),
            ("integer_omniscience", &self.integer_omniscience),
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.rows().iter().all(|(_, r)| r.holds)
    }
}

/// Pairs inside `A` with at least one edge, as (index in `G`, index in the
/// graph on `A`).
fn user_pairs(g: &Multigraph, inner: &Multigraph) -> Vec<(usize, usize)> {
    inner
        .pairs()
        .filter(|&(_, _, e)| e > 0)
        .map(|(i, j, _)| (g.pair_index(i, j), inner.pair_index(i, j)))
        .collect()
}

fn split_from(g: &Multigraph, inner: &Multigraph, pairs: &[(usize, usize)], values: &[Rational]) -> FractionalMultigraph {
    let mut weights = vec![Rational::zero(); inner.num_pairs()];
    for (&(_, q), v) in pairs.iter().zip(values) {
        weights[q] = v.clone();
    }
    FractionalMultigraph::new(g, weights).expect("LP respects the pair bounds")
}

fn support(g: &Multigraph) -> Multigraph {
    let mult = g.multiplicities().iter().map(|&e| e.min(1)).collect();
    Multigraph::from_multiplicities(g.m(), mult).expect("same shape")
}

/// Spanning trees of the support of `g`, as pair indices of `host`.
fn spanning_trees(g: &Multigraph, host: &Multigraph, options: &PackingOptions) -> Result<Vec<Vec<usize>>> {
    Ok(enumerate_steiner_trees_with(&support(g), g.terminals(), options)?
        .iter()
        .map(|t| t.edges().iter().map(|&(i, j)| host.pair_index(i, j)).collect())
        .collect())
}

/// `max μ_f(A,G̃) + μ_f(𝓜,G∖G̃)` as one LP in `ẽ` and the weights of the
/// spanning trees of `A` and of `𝓜`.
fn fractional_packing_split(g: &Multigraph, options: &PackingOptions) -> Result<(Rational, FractionalMultigraph)> {
    let inner = g.prefix(g.m() - 1)?;
    let pairs = user_pairs(g, &inner);
    let user_trees = spanning_trees(&inner, g, options)?;
    let all_trees = spanning_trees(g, g, options)?;
    let k = pairs.len();
    let mut objective = vec![Rational::zero(); k];
    objective.extend(std::iter::repeat_n(int(1), user_trees.len() + all_trees.len()));
    let mut p = LinearProgram::new(Sense::Maximize, objective);
    let mut user_load: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); g.num_pairs()];
    let mut all_load: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); g.num_pairs()];
    for (t, tree) in user_trees.iter().enumerate() {
        for &q in tree {
            user_load[q].push((k + t, int(1)));
        }
    }
    for (t, tree) in all_trees.iter().enumerate() {
        for &q in tree {
            all_load[q].push((k + user_trees.len() + t, int(1)));
        }
    }
    let multiplicities = g.multiplicities();
    for (x, &(q, _)) in pairs.iter().enumerate() {
        let e = int(multiplicities[q] as i64);
        p.set_upper_bound(x, e.clone());
        let mut row = std::mem::take(&mut user_load[q]);
        row.push((x, int(-1)));
        p.add_sparse(&row, Relation::Le, Rational::zero())?;
        let mut row = std::mem::take(&mut all_load[q]);
        row.push((x, int(1)));
        p.add_sparse(&row, Relation::Le, e)?;
    }
    for (q, row) in all_load.iter().enumerate() {
        if !row.is_empty() {
            p.add_sparse(row, Relation::Le, int(multiplicities[q] as i64))?;
        }
    }
    let r = solve_lp(&p);
    let split = split_from(g, &inner, &pairs, &r.witness[..k]);
    Ok((r.optimum().clone(), split))
}

/// `min OMN_G̃(A) + OMN_{G∖G̃}(𝓜)` as one LP in `ẽ`, `R′` over `A` and `R″`
/// over `𝓜`.
fn fractional_omniscience_split(g: &Multigraph) -> Result<(Rational, FractionalMultigraph)> {
    let m = g.m();
    let inner = g.prefix(m - 1)?;
    let pairs = user_pairs(g, &inner);
    let k = pairs.len();
    let (r1, r2) = (k, k + m - 1);
    let mut objective = vec![Rational::zero(); k];
    objective.extend(std::iter::repeat_n(int(1), 2 * m - 1));
    let mut p = LinearProgram::new(Sense::Minimize, objective);
    let multiplicities = g.multiplicities();
    for (x, &(q, _)) in pairs.iter().enumerate() {
        p.set_upper_bound(x, int(multiplicities[q] as i64));
    }
    let inside = |b: TerminalSet| -> Vec<usize> {
        pairs
            .iter()
            .enumerate()
            .filter(|(_, &(q, _))| {
                let (i, j) = g.pair_at(q);
                b.contains(i) && b.contains(j)
            })
            .map(|(x, _)| x)
            .collect()
    };
    for b in enumerate_constraint_sets(m - 1, TerminalSet::full(m - 1)) {
        let mut row: Vec<(usize, Rational)> = b.iter().map(|i| (r1 + i, int(1))).collect();
        row.extend(inside(b).into_iter().map(|x| (x, int(-1))));
        p.add_sparse(&row, Relation::Ge, Rational::zero())?;
    }
    for b in enumerate_constraint_sets(m, TerminalSet::full(m)) {
        let mut row: Vec<(usize, Rational)> = b.iter().map(|i| (r2 + i, int(1))).collect();
        row.extend(inside(b).into_iter().map(|x| (x, int(1))));
        p.add_sparse(&row, Relation::Ge, int(g.internal_edges(b) as i64))?;
    }
    let r = solve_lp(&p);
    let split = split_from(g, &inner, &pairs, &r.witness[..k]);
    Ok((r.optimum().clone(), split))
}

/// Integer `G̃` optima by enumerating `Π [0, e_ij]` over the user pairs.
fn integer_splits(
    g: &Multigraph,
    options: &HelperOptions,
) -> Result<((u64, FractionalMultigraph), (u64, FractionalMultigraph))> {
    let m = g.m();
    let inner = g.prefix(m - 1)?;
    let pairs = user_pairs(g, &inner);
    let bounds: Vec<(i64, i64)> = pairs.iter().map(|&(q, _)| (0, g.multiplicities()[q] as i64)).collect();
    let free = LinearProgram::new(Sense::Minimize, vec![Rational::zero(); pairs.len()]);
    let (users, everyone) = (TerminalSet::full(m - 1), TerminalSet::full(m));
    let mut best_packing: Option<(u64, FractionalMultigraph)> = None;
    let mut best_int: Option<(u64, FractionalMultigraph)> = None;
    for point in enumerate_integer_points(&free, &bounds, options.box_limit)?.chain(
        // A user graph without edges gives an empty box with one point.
        pairs.is_empty().then(Vec::new),
    ) {
        let values: Vec<Rational> = point.iter().map(|&v| int(v)).collect();
        let split = split_from(g, &inner, &pairs, &values);
        let tilde = split.to_multigraph().expect("integer weights");
        let rest = split.complement(g).expect("integer weights");
        let packing = mu_with(&tilde, users, &options.packing)?.value + mu_with(&rest, everyone, &options.packing)?.value;
        let ints = int_omn(&tilde, users, 1)?.value + int_omn(&rest, everyone, 1)?.value;
        if best_packing.as_ref().is_none_or(|(v, _)| packing > *v) {
            best_packing = Some((packing, split.clone()));
        }
        if best_int.as_ref().is_none_or(|(v, _)| ints < *v) {
            best_int = Some((ints, split));
        }
    }
    Ok((best_packing.expect("the box is nonempty"), best_int.expect("the box is nonempty")))
}

pub fn decomposition_bounds(g: &Multigraph) -> Result<DecompositionBounds> {
    decomposition_bounds_with(g, &HelperOptions::default())
}

pub fn decomposition_bounds_with(g: &Multigraph, options: &HelperOptions) -> Result<DecompositionBounds> {
    let a = users(g)?;
    let mu_f = mu_f_with(g, a, &options.packing)?.value;
    let omn_value = omn(g, a)?.value;
    let mu = mu_with(g, a, &options.packing)?.value;
    let int_value = int_omn(g, a, 1)?.value;

    let (packing_rhs, packing_split) = fractional_packing_split(g, &options.packing)?;
    let (omn_rhs, omn_split) = fractional_omniscience_split(g)?;
    let ((mu_rhs, mu_split), (int_rhs, int_split)) = integer_splits(g, options)?;
    let as_int = |v: u64| int(v as i64);
    Ok(DecompositionBounds {
        fractional_packing: BoundRow { holds: mu_f >= packing_rhs, lhs: mu_f, rhs: packing_rhs, split: packing_split },
        fractional_omniscience: BoundRow { holds: omn_value <= omn_rhs, lhs: omn_value, rhs: omn_rhs, split: omn_split },
        integer_packing: BoundRow { holds: mu >= mu_rhs, lhs: as_int(mu), rhs: as_int(mu_rhs), split: mu_split },
        integer_omniscience: BoundRow {
            holds: int_value <= int_rhs,
            lhs: as_int(int_value),
            rhs: as_int(int_rhs),
            split: int_split,
        },
    })
}

/// Packing-versus-capacity verdicts for a single helper, each computed two
/// ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityCheck {
    /// `OMN_G(A)` meets the fractional decomposition minimum.
    pub fractional_equality: bool,
    /// `INT_G(A)` meets the integer decomposition minimum.
    pub integer_equality: bool,
    /// `μ_f(A,G) = C(A)`.
    pub packing_attains_capacity: bool,
    /// `μ(A,G) = |E| − INT_G(A)`.
    pub packing_attains_integer_bound: bool,
    pub capacity: Rational,
    pub mu_f: Rational,
    pub integer_bound: u64,
    pub mu: u64,
    pub bounds: DecompositionBounds,
}

impl EqualityCheck {
    /// Both routes agree on both verdicts.
    pub fn consistent(&self) -> bool {
        self.fractional_equality == self.packing_attains_capacity
            && self.integer_equality == self.packing_attains_integer_bound
    }
}

pub fn equality_check(g: &Multigraph) -> Result<EqualityCheck> {
    equality_check_with(g, &HelperOptions::default())
}

pub fn equality_check_with(g: &Multigraph, options: &HelperOptions) -> Result<EqualityCheck> {
    let bounds = decomposition_bounds_with(g, options)?;
    let edges = g.edge_count();
    let capacity = int(edges as i64) - bounds.fractional_omniscience.lhs.clone();
    let mu_f = bounds.fractional_packing.lhs.clone();
    let integer_bound = edges - to_u64(&bounds.integer_omniscience.lhs);
    let mu = to_u64(&bounds.integer_packing.lhs);
    Ok(EqualityCheck {
        fractional_equality: bounds.fractional_omniscience.lhs == bounds.fractional_omniscience.rhs,
        integer_equality: bounds.integer_omniscience.lhs == bounds.integer_omniscience.rhs,
        packing_attains_capacity: mu_f == capacity,
        packing_attains_integer_bound: mu == integer_bound,
        capacity,
        mu_f,
        integer_bound,
        mu,
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Users 1 and 2 joined only through helper 3.
    fn star(k: i64) -> Multigraph {
        Multigraph::from_edges(3, &[(0, 2, k), (1, 2, k)]).unwrap()
    }

    #[test]
    fn weak_helper_examples() {
        let lp = weak_helper_lp(&star(1)).unwrap();
        assert!(lp.holds);
        assert_eq!(lp.witness, vec![int(0), int(0), int(1)]);
        let ilp = weak_helper_ilp(&star(1)).unwrap();
        assert_eq!((ilp.holds, ilp.witness), (true, vec![0, 0, 1]));
        assert_eq!(weak_helper_ilp(&star(2)).unwrap().witness, vec![0, 0, 2]);

        let lopsided = Multigraph::from_edges(3, &[(0, 2, 3), (1, 2, 1)]).unwrap();
        let lp = weak_helper_lp(&lopsided).unwrap();
        assert!(lp.holds);
        assert_eq!(lp.constrained, int(3));
        assert!(lp.witness[2] <= int(2));
        assert!(omniscience::is_omniscience_feasible(&lopsided, [0, 1].into(), 1, &lp.witness));
    }

    #[test]
    fn degree_one_helper_is_always_weak() {
        // The helper's only edge can be announced by its user instead.
        let g = Multigraph::from_edges(3, &[(0, 1, 1), (0, 2, 1)]).unwrap();
        let w = weak_helper_ilp(&g).unwrap();
        assert!(w.holds);
        assert_eq!(w.witness[2], 0);
    }

    #[test]
    fn star_tight_sets_and_partner() {
        let a = TerminalSet::from([0, 1]);
        let family = tight_sets(&star(1), a, &[0, 0, 1]).unwrap();
        let mut expected: Vec<TerminalSet> =
            vec![[0].into(), [1].into(), [0, 2].into(), [1, 2].into()];
        expected.sort();
        assert_eq!(family.members, expected);
        assert_eq!(family.closure_violation(a), None);
        assert!(family.degree_violations(1).is_empty());
        let c = choose_split_partner(&star(1), &[0, 0, 1], None).unwrap();
        assert_eq!((c.u, c.v), (0, 1));
        assert_eq!((c.inner, c.outer), (TerminalSet::from([1, 2]), TerminalSet::from([0])));
        assert!(matches!(tight_sets(&star(1), a, &[0, 0, 0]), Err(Error::InfeasibleLengths(_))));
    }

    #[test]
    fn symmetric_partner_tiebreak() {
        // A bare three-user star is never weak: INT = 2 needs I_h = 2 > ⌊3/2⌋.
        let bare = Multigraph::from_edges(4, &[(0, 3, 1), (1, 3, 1), (2, 3, 1)]).unwrap();
        assert!(!weak_helper_ilp(&bare).unwrap().holds);
        let mut edges = vec![(0, 3, 1), (1, 3, 1), (2, 3, 1)];
        edges.extend([(0, 1, 1), (0, 2, 1), (1, 2, 1)]);
        let g = Multigraph::from_edges(4, &edges).unwrap();
        let w = weak_helper_ilp(&g).unwrap();
        assert!(w.holds);
        assert_eq!(w.witness, vec![1, 1, 1, 1]);
        let c = choose_split_partner(&g, &w.witness, Some(0)).unwrap();
        assert_eq!(c.v, 1);
        let err = choose_split_partner(&star(1).split_off(0, 1, 2).unwrap(), &[0, 0, 0], None);
        assert!(matches!(err, Err(Error::Precondition(_))));
        let lonely = Multigraph::from_edges(4, &[(0, 3, 1), (1, 3, 1), (1, 2, 1)]).unwrap();
        assert!(choose_split_partner(&lonely, &[0, 1, 0, 1], Some(2)).is_err());
    }

    #[test]
    fn chains() {
        let c = reduce_to_spanning(&star(1)).unwrap();
        assert_eq!(c.steps.len(), 2);
        assert_eq!(c.steps[1].graph.multiplicity(0, 1), 1);
        assert_eq!((c.final_mu, c.steps[1].invariant), (1, 1));
        assert!(c.certifies() && c.lengths_optimal());

        let c = reduce_to_spanning(&star(2)).unwrap();
        assert_eq!(c.steps.len(), 3);
        assert_eq!(c.steps[2].graph.multiplicity(0, 1), 2);
        assert_eq!(c.final_mu, 2);
        assert!(c.certifies());

        let pendant = Multigraph::from_edges(3, &[(0, 1, 2), (0, 2, 1)]).unwrap();
        let c = reduce_to_spanning(&pendant).unwrap();
        assert_eq!(c.steps.len(), 1);
        assert!(c.certifies());
    }

    #[test]
    fn star_bounds_and_equality() {
        let b = decomposition_bounds(&star(1)).unwrap();
        assert!(b.all_hold());
        assert_eq!(b.fractional_omniscience.rhs, int(1));
        assert_eq!(b.fractional_omniscience.lhs, int(1));
        assert_eq!(b.fractional_packing.rhs, int(1));

        let check = equality_check(&star(1)).unwrap();
        assert!(check.fractional_equality && check.integer_equality);
        assert_eq!(check.mu_f, int(1));
        assert_eq!(check.capacity, int(1));
        assert!(check.consistent());

        let lopsided = Multigraph::from_edges(3, &[(0, 2, 3), (1, 2, 1)]).unwrap();
        let check = equality_check(&lopsided).unwrap();
        assert!(check.fractional_equality && check.integer_equality);
        assert_eq!((check.mu_f.clone(), check.capacity.clone()), (int(1), int(1)));
    }

    #[test]
    fn users_only_graph_is_its_own_split() {
        let g = Multigraph::from_edges(4, &[(0, 1, 1), (0, 2, 1), (1, 2, 1)]).unwrap();
        let b = decomposition_bounds(&g).unwrap();
        assert_eq!(b.fractional_packing.lhs, ratio(3, 2));
        assert_eq!(b.fractional_packing.rhs, ratio(3, 2));
    }

    #[test]
    fn helper_count() {
        let g = star(1);
        assert_eq!(single_helper(&g, [0, 1].into()), Ok(2));
        assert_eq!(single_helper(&g, [0].into()), Err(Error::HelperCount(2)));
        assert!(matches!(single_helper(&g, [0, 2].into()), Err(Error::Precondition(_))));
        let split = FractionalMultigraph::zero(&g);
        assert_eq!(split.complement(&g), Some(g.clone()));
        assert!(FractionalMultigraph::new(&g, vec![int(1)]).is_err());
    }
}
