//! Random linear communication for omniscience: how often a random scheme
//! with lengths `⌈n(R_i + 1/10)⌉` lets every user recover the whole source.

use pin_secrecy::graph::{Multigraph, TerminalSet};
use pin_secrecy::omniscience::omn;
use pin_secrecy::protocol::{default_epsilon, extract_key, omniscience_lengths, random_lco, RandomLco};

fn main() -> pin_secrecy::Result<()> {
    let g = Multigraph::from_edges(3, &[(0, 1, 1), (0, 2, 1), (1, 2, 1)])?;
    let a = TerminalSet::full(3);
    let rates = omn(&g, a)?.rates;
    let seeds = 200;
    for n in [1, 2, 4, 8] {
        let lengths = omniscience_lengths(&rates, n, &default_epsilon());
        let mut accepted = 0;
        let mut key_bits = 0;
        for seed in 0..seeds {
            if let RandomLco::Accepted(s) = random_lco(&g, a, n, &lengths, seed)? {
                accepted += 1;
                key_bits = extract_key(&s).key_len();
            }
        }
        println!("n = {n}: lengths {lengths:?}, accepted {accepted}/{seeds}, key bits {key_bits}");
    }
    Ok(())
}
