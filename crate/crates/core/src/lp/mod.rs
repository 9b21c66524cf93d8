//! Exact linear and integer linear programming over the rationals.
//!
//! [`solve_lp`] is a dense two-phase simplex using Bland's rule, so it always
//! terminates and the pivot sequence is fixed by the input ordering.
//! [`solve_ilp`] is a depth-first branch-and-bound on top of it. There is no
//! floating point anywhere: witnesses satisfy their constraints exactly.

mod branch;
mod simplex;

pub use branch::{enumerate_integer_points, solve_ilp, IntegerPoints};
pub use simplex::solve_lp;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(x)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, v)| a * v)
            .sum()
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// `optimise c·x` subject to linear rows and per-variable bounds.
///
/// Every variable has a finite lower bound (zero unless changed) and an
/// optional upper bound.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub lower_bounds: Vec<Rational>,
    pub upper_bounds: Vec<Option<Rational>>,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            constraints: Vec::new(),
            lower_bounds: vec![Rational::zero(); n],
            upper_bounds: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(
        &mut self,
        coeffs: Vec<Rational>,
        relation: Relation,
        rhs: Rational,
    ) -> Result<()> {
        if coeffs.len() != self.num_vars() {
            return Err(Error::ArityMismatch { expected: self.num_vars(), got: coeffs.len() });
        }
        self.constraints.push(Constraint { coeffs, relation, rhs });
        Ok(())
    }

    /// Adds a row given as `(variable, coefficient)` terms; repeated
    /// variables accumulate.
    pub fn add_sparse(
        &mut self,
        terms: &[(usize, Rational)],
        relation: Relation,
        rhs: Rational,
    ) -> Result<()> {
        let mut coeffs = vec![Rational::zero(); self.num_vars()];
        for (j, a) in terms {
            if *j >= coeffs.len() {
                return Err(Error::ArityMismatch { expected: self.num_vars(), got: j + 1 });
            }
            coeffs[*j] += a;
        }
        self.add_constraint(coeffs, relation, rhs)
    }

    pub fn set_lower_bound(&mut self, var: usize, lb: Rational) {
        self.lower_bounds[var] = lb;
    }

    pub fn set_upper_bound(&mut self, var: usize, ub: Rational) {
        self.upper_bounds[var] = Some(ub);
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective
            .iter()
            .zip(x)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| c * v)
            .sum()
    }

    /// Exact feasibility of `x`: every row, every bound, no tolerance.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && x.iter().zip(&self.lower_bounds).all(|(v, lb)| v >= lb)
            && x
                .iter()
                .zip(&self.upper_bounds)
                .all(|(v, ub)| ub.as_ref().is_none_or(|ub| v <= ub))
            && self.constraints.iter().all(|c| c.is_satisfied(x))
    }

    /// Whether the objective is integral whenever the masked variables are:
    /// integer costs on masked variables, zero cost elsewhere.
    pub(crate) fn has_integral_objective(&self, integral: &[bool]) -> bool {
        self.objective.iter().zip(integral).all(|(c, &int)| {
            if int {
                c.is_integer()
            } else {
                c.is_zero()
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub pivots: u64,
    pub nodes: u64,
}

/// Outcome of a solve. `value` and `witness` are populated only when the
/// status is [`Status::Optimal`].
#[derive(Clone, Debug, PartialEq)]
pub struct OptResult {
    pub status: Status,
    pub value: Option<Rational>,
    pub witness: Vec<Rational>,
    pub stats: SolveStats,
}

impl OptResult {
    pub(crate) fn without_solution(status: Status, stats: SolveStats) -> Self {
        Self { status, value: None, witness: Vec::new(), stats }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }

    /// The optimal value; panics when the program was not solved to
    /// optimality.
    pub fn optimum(&self) -> &Rational {
        self.value.as_ref().expect("program has no optimum")
    }
}
