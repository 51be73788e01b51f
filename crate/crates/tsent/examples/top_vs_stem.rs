//! Compares topological entropy (root ball normalization) with stem
//! entropy (per-generator semiball normalization) on certified systems,
//! where the two must agree, and prints both traces side by side.
//!
//! ```bash
//! cargo run --release --example top_vs_stem
//! ```

use tsent::{
    existence_certificate, stem_entropy, topological_entropy_cayley, BinaryMatrix,
    EntropyOptions, MarkovSystem, RelationMatrix,
};

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

    let certs = existence_certificate(&sys);
    println!("certificates ({}):", certs.len());
    for c in &certs {
        println!("  {}", c.kind.name());
    }

    let opts = EntropyOptions::default();
    let stem = stem_entropy(&sys, &opts).unwrap();
    let top = topological_entropy_cayley(&sys, &opts).unwrap();

    println!("\nstem = {:.13} ({} iterations)", stem.value, stem.iterations_used);
    println!("top  = {:.13} ({} iterations)", top.value, top.iterations_used);
    println!("difference = {:.3e}\n", (stem.value - top.value).abs());

    println!("{:>3} {:>18} {:>18}", "n", "max_j h^(j)_n", "root h_n");
    for row in top.trace.iter().take(15) {
        let stem_h = row.h.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        match row.root {
            Some(root) => println!("{:>3} {:>18.13} {:>18.13}", row.n, stem_h, root),
            None => println!("{:>3} {:>18.13} {:>18}", row.n, stem_h, "-"),
        }
    }
}
