//! The three-helper network: capacity 2, fractional packing 9/5, and
//! integer packing rates of `G^(n)`.

use pin_secrecy::cli::reference_network;
use pin_secrecy::omniscience::capacity;
use pin_secrecy::packing::{mu, mu_f};
use pin_secrecy::rational::render;

fn main() -> pin_secrecy::Result<()> {
    let net = reference_network();
    let (g, a) = (&net.graph, net.set);
    println!("C(A) = {}", render(&capacity(g, a)?));
    let f = mu_f(g, a)?;
    println!("mu_f = {}", render(&f.value));
    for (tree, w) in f.trees.iter().zip(&f.weights) {
        println!("  {} x {tree}", render(w));
    }
    for n in 1..=5 {
        println!("n = {n}: mu = {}", mu(&g.blow_up(n)?, a)?.value);
    }
    Ok(())
}
