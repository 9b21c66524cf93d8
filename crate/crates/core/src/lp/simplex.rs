use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

use super::{LinearProgram, OptResult, Relation, Sense, SolveStats, Status};

/// Dense simplex tableau. Row `rows.len()` is kept separately as the
/// reduced-cost row; the last entry of every row is its right-hand side.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    cost: Vec<Rational>,
    basis: Vec<usize>,
    /// Columns at or beyond this index may never enter the basis.
    enter_limit: usize,
    pivots: u64,
}

impl Tableau {
    fn rhs_col(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        let nonzero: Vec<usize> = (0..pivot_row.len()).filter(|&k| !pivot_row[k].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for &k in &nonzero {
                let delta = &f * &pivot_row[k];
                row[k] -= delta;
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.basis[r] = c;
    }

    /// Runs Bland's rule to optimality. Returns false if unbounded.
    fn optimise(&mut self) -> bool {
        let rhs = self.rhs_col();
        loop {
            let Some(c) = (0..self.enter_limit).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

/// Solves `p` exactly. Infeasibility and unboundedness are statuses.
pub fn solve_lp(p: &LinearProgram) -> OptResult {
    let n = p.num_vars();

    // Shift to y = x - lower ≥ 0 and turn upper bounds into rows.
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for c in &p.constraints {
        let shift = c.lhs(&p.lower_bounds);
        rows.push((c.coeffs.clone(), c.relation, &c.rhs - shift));
    }
    for (j, ub) in p.upper_bounds.iter().enumerate() {
        if let Some(ub) = ub {
            let mut coeffs = vec![Rational::zero(); n];
            coeffs[j] = Rational::one();
            rows.push((coeffs, Relation::Le, ub - &p.lower_bounds[j]));
        }
    }

    // Nonnegative right-hand sides; `≥ 0` rows become `≤ 0` so their slack
    // can start in the basis.
    for (coeffs, rel, rhs) in rows.iter_mut() {
        if rhs.is_negative() {
            for a in coeffs.iter_mut() {
                *a = -a.clone();
            }
            *rhs = -rhs.clone();
            *rel = match *rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        if *rel == Relation::Ge && rhs.is_zero() {
            for a in coeffs.iter_mut() {
                *a = -a.clone();
            }
            *rel = Relation::Le;
        }
    }

    let slacks = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let artificials = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let first_art = n + slacks;
    let width = first_art + artificials + 1;

    let mut t = Tableau {
        rows: Vec::with_capacity(rows.len()),
        cost: vec![Rational::zero(); width],
        basis: Vec::with_capacity(rows.len()),
        enter_limit: first_art + artificials,
        pivots: 0,
    };
    let (mut next_slack, mut next_art) = (n, first_art);
    for (coeffs, rel, rhs) in rows {
        let mut row = coeffs;
        row.resize(width, Rational::zero());
        row[width - 1] = rhs;
        match rel {
            Relation::Le => {
                row[next_slack] = Rational::one();
                t.basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -Rational::one();
                next_slack += 1;
                row[next_art] = Rational::one();
                t.basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = Rational::one();
                t.basis.push(next_art);
                next_art += 1;
            }
        }
        t.rows.push(row);
    }

    // Phase one: minimise the sum of artificials.
    if artificials > 0 {
        for (i, row) in t.rows.iter().enumerate() {
            if t.basis[i] >= first_art {
                for (k, v) in row.iter().enumerate() {
                    if !v.is_zero() && !(first_art..first_art + artificials).contains(&k) {
                        t.cost[k] -= v;
                    }
                }
            }
        }
        t.optimise();
        if !t.cost[width - 1].is_zero() {
            let stats = SolveStats { pivots: t.pivots, nodes: 0 };
            return OptResult::without_solution(Status::Infeasible, stats);
        }
        // Drive remaining (zero-valued) artificials out of the basis; rows
        // where that is impossible are redundant.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= first_art {
                match (0..first_art).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        t.enter_limit = first_art;
    }

    // Phase two.
    let cost: Vec<Rational> = match p.sense {
        Sense::Minimize => p.objective.clone(),
        Sense::Maximize => p.objective.iter().map(|c| -c.clone()).collect(),
    };
    t.cost = vec![Rational::zero(); width];
    t.cost[..n].clone_from_slice(&cost);
    for (i, row) in t.rows.iter().enumerate() {
        let b = t.basis[i];
        if b < n && !cost[b].is_zero() {
            let cb = &cost[b];
            for (k, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    t.cost[k] -= cb * v;
                }
            }
        }
    }
    let bounded = t.optimise();
    let stats = SolveStats { pivots: t.pivots, nodes: 0 };
    if !bounded {
        return OptResult::without_solution(Status::Unbounded, stats);
    }

    let mut x = p.lower_bounds.clone();
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] += &t.rows[i][width - 1];
        }
    }
    debug_assert!(p.is_feasible(&x), "simplex produced an infeasible witness");
    OptResult { status: Status::Optimal, value: Some(p.objective_value(&x)), witness: x, stats }
}
