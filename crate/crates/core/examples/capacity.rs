//! Omniscience rate and secret-key capacity of a few small networks.

use pin_secrecy::graph::{Multigraph, TerminalSet};
use pin_secrecy::omniscience::{int_omn, omn, partition_bound};
use pin_secrecy::rational::{int, render};

fn main() -> pin_secrecy::Result<()> {
    let triangle = Multigraph::from_edges(3, &[(0, 1, 1), (0, 2, 1), (1, 2, 1)])?;
    let path = Multigraph::from_edges(3, &[(0, 1, 1), (1, 2, 1)])?;
    let cases = [("triangle", triangle, TerminalSet::full(3)), ("path, ends only", path, TerminalSet::from([0, 2]))];

    for (name, g, a) in cases {
        let sol = omn(&g, a)?;
        let capacity = int(g.edge_count() as i64) - sol.value.clone();
        let rates: Vec<String> = sol.rates.iter().map(render).collect();
        let bound = partition_bound(&g, a)?;
        println!("{name}: A = {a}");
        println!("  OMN = {}  rates = [{}]", render(&sol.value), rates.join(", "));
        println!("  C = {}  partition bound = {} at {}", render(&capacity), render(&bound.value), bound.partition);
        for n in 1..=3 {
            let i = int_omn(&g, a, n)?;
            println!("  n = {n}: INT = {}  lengths = {:?}", i.value, i.lengths);
        }
    }
    Ok(())
}
