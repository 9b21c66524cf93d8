//! One helper between two users: weak-helper tests, the edge-splitting
//! chain and the decomposition bounds.

use pin_secrecy::graph::Multigraph;
use pin_secrecy::helper::{equality_check, reduce_to_spanning, weak_helper_ilp, weak_helper_lp};
use pin_secrecy::rational::render;

fn main() -> pin_secrecy::Result<()> {
    let g = Multigraph::from_edges(3, &[(0, 2, 2), (1, 2, 2)])?;
    let lp = weak_helper_lp(&g)?;
    let ilp = weak_helper_ilp(&g)?;
    println!("weak (fractional): {}  OMN = {}", lp.holds, render(&lp.unconstrained));
    println!("weak (integer): {}  lengths = {:?}", ilp.holds, ilp.witness);

    let chain = reduce_to_spanning(&g)?;
    for (k, step) in chain.steps.iter().enumerate() {
        let split = step.split.as_ref().map(|s| format!("split {}-{}", s.u + 1, s.v + 1));
        println!("G_{}: |E| - INT = {}  {}", k + 1, step.invariant, split.unwrap_or_default());
    }
    println!("mu of the last graph = {}, certified: {}", chain.final_mu, chain.certifies());

    let check = equality_check(&g)?;
    for (name, row) in check.bounds.rows() {
        println!("{name}: {} vs {} ({})", render(&row.lhs), render(&row.rhs), row.holds);
    }
    Ok(())
}
