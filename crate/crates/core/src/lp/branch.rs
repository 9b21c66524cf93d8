use crate::error::{Error, Result};
use crate::rational::{int, Rational};

use super::{solve_lp, LinearProgram, OptResult, Sense, SolveStats, Status};

struct Search<'a> {
    integral: &'a [bool],
    integral_objective: bool,
    sense: Sense,
    best: Option<(Rational, Vec<Rational>)>,
    stats: SolveStats,
    unbounded: bool,
}

impl Search<'_> {
    /// Objective oriented so that smaller is better.
    fn key(&self, v: &Rational) -> Rational {
        match self.sense {
            Sense::Minimize => v.clone(),
            Sense::Maximize => -v.clone(),
        }
    }

    fn can_improve(&self, relaxed: &Rational) -> bool {
        let Some((incumbent, _)) = &self.best else {
            return true;
        };
        let mut bound = self.key(relaxed);
        if self.integral_objective {
            bound = bound.ceil();
        }
        bound < self.key(incumbent)
    }

    fn explore(&mut self, p: &mut LinearProgram) {
        self.stats.nodes += 1;
        let r = solve_lp(p);
        self.stats.pivots += r.stats.pivots;
        match r.status {
            Status::Infeasible => return,
            Status::Unbounded => {
                self.unbounded = true;
                return;
            }
            Status::Optimal => {}
        }
        let value = r.value.expect("optimal");
        if !self.can_improve(&value) {
            return;
        }
        let fractional =
            (0..p.num_vars()).find(|&j| self.integral[j] && !r.witness[j].is_integer());
        let Some(j) = fractional else {
            self.best = Some((value, r.witness));
            return;
        };
        let v = &r.witness[j];
        let (down, up) = (v.floor(), v.ceil());

        let saved_ub = p.upper_bounds[j].clone();
        p.upper_bounds[j] = Some(down);
        self.explore(p);
        p.upper_bounds[j] = saved_ub;
        if self.unbounded {
            return;
        }

        let saved_lb = std::mem::replace(&mut p.lower_bounds[j], up);
        self.explore(p);
        p.lower_bounds[j] = saved_lb;
    }
}

/// Branch-and-bound over the variables marked in `integral`. Branches on the
/// smallest-index fractional variable, down branch first.
///
/// Marked variables should have finite implied bounds; if a relaxation is
/// unbounded the result is [`Status::Unbounded`].
pub fn solve_ilp(p: &LinearProgram, integral: &[bool]) -> OptResult {
    assert_eq!(integral.len(), p.num_vars(), "integrality mask arity");
    let mut work = p.clone();
    // Integer lower bounds can be rounded up front.
    for (j, lb) in work.lower_bounds.iter_mut().enumerate() {
        if integral[j] {
            *lb = lb.ceil();
        }
    }
    for (j, ub) in work.upper_bounds.iter_mut().enumerate() {
        if integral[j] {
            if let Some(u) = ub {
                *u = u.floor();
            }
        }
    }
    let mut search = Search {
        integral,
        integral_objective: p.has_integral_objective(integral),
        sense: p.sense,
        best: None,
        stats: SolveStats::default(),
        unbounded: false,
    };
    search.explore(&mut work);
    let stats = search.stats;
    if search.unbounded {
        return OptResult::without_solution(Status::Unbounded, stats);
    }
    match search.best {
        None => OptResult::without_solution(Status::Infeasible, stats),
        Some((value, witness)) => {
            debug_assert!(p.is_feasible(&witness));
            OptResult { status: Status::Optimal, value: Some(value), witness, stats }
        }
    }
}

/// Every integer point of a box that satisfies all rows of `p`, in
/// lexicographic order. The variable bounds of `p` are enforced too.
#[derive(Clone, Debug)]
pub struct IntegerPoints<'a> {
    program: &'a LinearProgram,
    bounds: Vec<(i64, i64)>,
    next: Option<Vec<i64>>,
}

impl Iterator for IntegerPoints<'_> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        loop {
            let current = self.next.take()?;
            // Odometer step.
            let mut succ = current.clone();
            let mut k = succ.len();
            let mut advanced = false;
            while k > 0 {
                k -= 1;
                if succ[k] < self.bounds[k].1 {
                    succ[k] += 1;
                    for (j, v) in succ.iter_mut().enumerate().skip(k + 1) {
                        *v = self.bounds[j].0;
                    }
                    advanced = true;
                    break;
                }
            }
            if advanced {
                self.next = Some(succ);
            }
            let x: Vec<Rational> = current.iter().map(|&v| int(v)).collect();
            if self.program.is_feasible(&x) {
                return Some(current);
            }
        }
    }
}

/// Enumerates the feasible integer points in `bounds` (inclusive ranges).
/// Fails if the box holds more than `limit` points.
pub fn enumerate_integer_points<'a>(
    p: &'a LinearProgram,
    bounds: &[(i64, i64)],
    limit: u128,
) -> Result<IntegerPoints<'a>> {
    if bounds.len() != p.num_vars() {
        return Err(Error::ArityMismatch { expected: p.num_vars(), got: bounds.len() });
    }
    let mut volume: u128 = 1;
    for &(lo, hi) in bounds {
        let width = if hi < lo { 0 } else { (hi - lo) as u128 + 1 };
        volume = volume.saturating_mul(width);
    }
    if volume > limit {
        return Err(Error::BoxTooLarge { volume, limit });
    }
    let next = (volume > 0 && !bounds.is_empty()).then(|| bounds.iter().map(|b| b.0).collect());
    Ok(IntegerPoints { program: p, bounds: bounds.to_vec(), next })
}
