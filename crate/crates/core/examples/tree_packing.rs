//! Steiner tree packing: integer and fractional optima and the rate
//! sequence `μ(A, G^(n)) / n`.

use pin_secrecy::graph::{Multigraph, TerminalSet};
use pin_secrecy::packing::{enumerate_steiner_trees, eulerian_lower_bound, mu, mu_f, packing_rate};
use pin_secrecy::rational::render;

fn main() -> pin_secrecy::Result<()> {
    let g = Multigraph::from_edges(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)])?;
    let a = TerminalSet::from([0, 1, 2]);

    let trees = enumerate_steiner_trees(&g, a)?;
    println!("{} Steiner trees for {a} in K4", trees.len());

    let packing = mu(&g, a)?;
    println!("mu = {} ({} search nodes)", packing.value, packing.stats.nodes);
    for (tree, count) in &packing.trees {
        println!("  {count} x {tree}");
    }
    let fractional = mu_f(&g, a)?;
    println!("mu_f = {}", render(&fractional.value));

    let doubled = g.blow_up(2)?;
    println!("Eulerian lower bound on G^(2): {}", eulerian_lower_bound(&doubled, a)?);

    let rate = packing_rate(&g, a, 3)?;
    for row in &rate.rows {
        println!("  n = {}: mu = {}, mu/n = {}", row.n, row.mu, render(&row.rate));
    }
    Ok(())
}
