//! The exact rational simplex and branch-and-bound used by every optimum
//! in the crate.

use pin_secrecy::lp::{solve_ilp, solve_lp, LinearProgram, Relation, Sense};
use pin_secrecy::rational::{int, render};

fn main() -> pin_secrecy::Result<()> {
    // min x + y + z  subject to every pair summing to at least 1
    let mut p = LinearProgram::new(Sense::Minimize, vec![int(1); 3]);
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        p.add_sparse(&[(a, int(1)), (b, int(1))], Relation::Ge, int(1))?;
    }
    let relaxed = solve_lp(&p);
    let witness: Vec<String> = relaxed.witness.iter().map(render).collect();
    println!("LP optimum {} at {:?} after {} pivots", render(relaxed.optimum()), witness, relaxed.stats.pivots);

    let integral = solve_ilp(&p, &[true; 3]);
    let witness: Vec<String> = integral.witness.iter().map(render).collect();
    println!("ILP optimum {} at {:?} after {} nodes", render(integral.optimum()), witness, integral.stats.nodes);
    Ok(())
}
