//! Tracks the upper envelope alongside the stem trace: every envelope
//! entry bounds the limit from above, so the running infimum brackets the
//! converged value from the first few iterations on.
//!
//! ```bash
//! cargo run --release --example envelope_bound
//! ```

use tsent::{stem_entropy, stem_upper_envelope, BinaryMatrix, EntropyOptions, MarkovSystem,
    RelationMatrix};

fn main() {
    let relation = RelationMatrix::validate(&[vec![1, 1], vec![1, 0]]).unwrap();
    let golden = BinaryMatrix::from_rows(&[vec![1, 1], vec![1, 0]]).unwrap();
    let flipped = BinaryMatrix::from_rows(&[vec![0, 1], vec![1, 1]]).unwrap();
    let sys = MarkovSystem::new(
        relation,
        vec!["0".into(), "1".into()],
        vec![flipped, golden],
    )
    .unwrap();

    let opts = EntropyOptions::default();
    let est = stem_entropy(&sys, &opts).unwrap();
    let envelope = stem_upper_envelope(&sys, 20, opts.base).unwrap();

    println!("mixed golden pair on the Fibonacci tree (base {})", est.base);
    println!("converged stem value = {:.13}\n", est.value);
    println!("{:>3} {:>18} {:>18} {:>12}", "n", "envelope e_n", "running inf", "gap to value");
    let mut inf = f64::INFINITY;
    for (n, &e) in envelope.iter().enumerate() {
        inf = inf.min(e);
        println!("{:>3} {:>18.13} {:>18.13} {:>12.3e}", n, e, inf, inf - est.value);
    }
}
