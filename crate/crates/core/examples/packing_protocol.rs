//! A key-agreement protocol from a tree packing, run on one source
//! realisation and then checked over all of them.

use pin_secrecy::graph::{Multigraph, TerminalSet};
use pin_secrecy::protocol::{packing_protocol, run, verify_perfect_secrecy, write_scheme, SourceRealization};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> pin_secrecy::Result<()> {
    let g = Multigraph::from_edges(3, &[(0, 1, 1), (0, 2, 1), (1, 2, 1)])?;
    let a = TerminalSet::full(3);
    let n = 2;
    let p = packing_protocol(&g, a, n)?;
    println!("{} source bits, {} sent, {} key bits", p.scheme.layout().total(), p.scheme.total_length(), p.key_map.key_len());
    print!("{}", write_scheme(&p.scheme, Some(&p.key_map)));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let x = SourceRealization::from_index(p.scheme.layout(), rng.gen_range(0..1 << p.scheme.layout().total()));
    let out = run(&p.scheme, &p.key_map, a, &x)?;
    println!("transcript {}  key {}", out.transcript.concatenated(), out.key);
    for (j, k) in &out.decoded {
        println!("  terminal {} decodes {k}", j + 1);
    }

    let report = verify_perfect_secrecy(&p.scheme, &p.key_map, a, 24)?;
    println!("exhaustive check passed: {}", report.passed());
    Ok(())
}
