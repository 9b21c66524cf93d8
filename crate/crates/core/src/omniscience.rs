//! Communication for omniscience and perfect secret-key capacity.
//!
//! `OMN_G(A)` is the least total rate `Σ R_i` with `Σ_{i∈B} R_i ≥ e_G(B)`
//! for every nonempty proper `B ⊉ A`; the capacity is `|E| − OMN_G(A)`.
//! `INT` is the integer program over `G^(n)` with the same constraint sets.

use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::graph::{enumerate_constraint_sets, enumerate_partitions, Multigraph, Partition, TerminalSet};
use crate::lp::{solve_ilp, solve_lp, LinearProgram, Relation, Sense, SolveStats};
use crate::rational::{int, ratio, Rational};

/// Default cap on the number of terminals for the exponential enumerations.
pub const DEFAULT_MAX_TERMINALS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OmniscienceOptions {
    /// Drop constraint sets with no internal edges; they are implied by
    /// nonnegativity.
    pub prune_vacuous: bool,
    pub max_terminals: usize,
}

impl Default for OmniscienceOptions {
    fn default() -> Self {
        Self { prune_vacuous: false, max_terminals: DEFAULT_MAX_TERMINALS }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OmniscienceSolution {
    pub graph: Multigraph,
    pub set: TerminalSet,
    pub value: Rational,
    pub rates: Vec<Rational>,
    pub stats: SolveStats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntOmniscienceSolution {
    pub graph: Multigraph,
    pub set: TerminalSet,
    pub n: u64,
    pub value: u64,
    pub lengths: Vec<u64>,
    pub stats: SolveStats,
}

/// A minimising partition for a partition bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionBound {
    pub value: Rational,
    pub partition: Partition,
}

/// Checks `|A| ≥ 2`, `A ⊆ 𝓜` and the terminal cap.
pub(crate) fn check_set(g: &Multigraph, a: TerminalSet, max_terminals: usize) -> Result<()> {
    if g.m() > max_terminals {
        return Err(Error::TooManyTerminals { m: g.m(), cap: max_terminals });
    }
    if let Some(index) = a.iter().find(|&i| i >= g.m()) {
        return Err(Error::VertexOutOfRange { index, m: g.m() });
    }
    if a.len() < 2 {
        return Err(Error::SetTooSmall(a.len()));
    }
    Ok(())
}

/// The constraint sets of the omniscience region, in enumeration order.
pub fn constraint_sets(g: &Multigraph, a: TerminalSet, prune_vacuous: bool) -> Vec<TerminalSet> {
    enumerate_constraint_sets(g.m(), a)
        .into_iter()
        .filter(|&b| !prune_vacuous || g.internal_edges(b) > 0)
        .collect()
}

/// `min Σ R_i` over the omniscience region, with right-hand sides scaled
/// by `scale`. Rows appear in constraint-set order.
pub(crate) fn omniscience_program(
    g: &Multigraph,
    a: TerminalSet,
    scale: u64,
    prune_vacuous: bool,
) -> LinearProgram {
    let m = g.m();
    let mut p = LinearProgram::new(Sense::Minimize, vec![int(1); m]);
    for b in constraint_sets(g, a, prune_vacuous) {
        let terms: Vec<(usize, Rational)> = b.iter().map(|i| (i, int(1))).collect();
        let rhs = int((scale * g.internal_edges(b)) as i64);
        p.add_sparse(&terms, Relation::Ge, rhs).expect("indices are in range");
    }
    p
}

/// Whether `rates` satisfy every constraint of the omniscience region of
/// `G^(scale)`.
pub fn is_omniscience_feasible(g: &Multigraph, a: TerminalSet, scale: u64, rates: &[Rational]) -> bool {
    rates.len() == g.m()
        && rates.iter().all(|r| !r.is_negative())
        && enumerate_constraint_sets(g.m(), a).into_iter().all(|b| {
            let total: Rational = b.iter().map(|i| rates[i].clone()).sum();
            total >= int((scale * g.internal_edges(b)) as i64)
        })
}

pub fn omn(g: &Multigraph, a: TerminalSet) -> Result<OmniscienceSolution> {
    omn_with(g, a, &OmniscienceOptions::default())
}

pub fn omn_with(
    g: &Multigraph,
    a: TerminalSet,
    options: &OmniscienceOptions,
) -> Result<OmniscienceSolution> {
    check_set(g, a, options.max_terminals)?;
    let p = omniscience_program(g, a, 1, options.prune_vacuous);
    let r = solve_lp(&p);
    // Every rate vector with R_i = d_i is feasible and the objective is
    // bounded below by zero, so the program always has an optimum.
    let value = r.optimum().clone();
    Ok(OmniscienceSolution { graph: g.clone(), set: a, value, rates: r.witness, stats: r.stats })
}

pub fn int_omn(g: &Multigraph, a: TerminalSet, n: u64) -> Result<IntOmniscienceSolution> {
    int_omn_with(g, a, n, &OmniscienceOptions::default())
}

/// `INT_{G^(n)}(A)`, with each length bounded by `n·d_i`.
pub fn int_omn_with(
    g: &Multigraph,
    a: TerminalSet,
    n: u64,
    options: &OmniscienceOptions,
) -> Result<IntOmniscienceSolution> {
    check_set(g, a, options.max_terminals)?;
    if n == 0 {
        return Err(Error::ZeroBlowUp);
    }
    let mut p = omniscience_program(g, a, n, options.prune_vacuous);
    for (i, d) in g.degrees().into_iter().enumerate() {
        p.set_upper_bound(i, int((n * d) as i64));
    }
    let r = solve_ilp(&p, &vec![true; g.m()]);
    Ok(IntOmniscienceSolution {
        graph: g.clone(),
        set: a,
        n,
        value: to_u64(r.optimum()),
        lengths: r.witness.iter().map(to_u64).collect(),
        stats: r.stats,
    })
}

pub(crate) fn to_u64(v: &Rational) -> u64 {
    assert!(v.is_integer(), "expected an integer, got {v}");
    v.to_integer().to_u64().expect("nonnegative value fits in u64")
}

/// Perfect secret-key capacity `|E| − OMN_G(A)`.
pub fn capacity(g: &Multigraph, a: TerminalSet) -> Result<Rational> {
    let sol = omn(g, a)?;
    Ok(int(g.edge_count() as i64) - sol.value)
}

fn min_partition_ratio(
    g: &Multigraph,
    admissible: impl Fn(&Partition) -> bool,
) -> Option<PartitionBound> {
    let mut best: Option<PartitionBound> = None;
    for partition in enumerate_partitions(g.m()) {
        if partition.len() < 2 || !admissible(&partition) {
            continue;
        }
        let value = ratio(g.crossing_count(&partition) as i64, (partition.len() - 1) as i64);
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(PartitionBound { value, partition });
        }
    }
    best
}

/// Minimum of `crossing/(|𝒫| − 1)` over partitions with at least two atoms,
/// every atom meeting `A`. An upper bound on the capacity.
pub fn partition_bound(g: &Multigraph, a: TerminalSet) -> Result<PartitionBound> {
    check_set(g, a, DEFAULT_MAX_TERMINALS)?;
    Ok(min_partition_ratio(g, |p| p.atoms().iter().all(|atom| atom.intersects(a)))
        .expect("the all-singleton partition of A is admissible"))
}

/// The spanning-tree packing number: floor of the minimum crossing ratio
/// over all partitions of the terminals.
pub fn nash_williams(g: &Multigraph) -> Result<u64> {
    Ok(nash_williams_bound(g)?.value.floor().to_integer().to_u64().expect("nonnegative"))
}

/// The minimising partition behind [`nash_williams`].
pub fn nash_williams_bound(g: &Multigraph) -> Result<PartitionBound> {
    if g.m() > DEFAULT_MAX_TERMINALS {
        return Err(Error::TooManyTerminals { m: g.m(), cap: DEFAULT_MAX_TERMINALS });
    }
    Ok(min_partition_ratio(g, |_| true).expect("m ≥ 2 gives a two-atom partition"))
}
