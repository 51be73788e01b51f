//! Cross-checks the per-generator counting recursion against exact big
//! integer tables and a brute-force pattern enumerator on small depths.
//!
//! ```bash
//! cargo run --release --example counting_oracle
//! ```

use tsent::{brute_force_counts, exact_ball_counts, BinaryMatrix, MarkovSystem, RelationMatrix};

fn main() {
    let relation = RelationMatrix::validate(&[vec![1, 1], vec![1, 0]]).unwrap();
    let golden = BinaryMatrix::from_rows(&[vec![1, 1], vec![1, 0]]).unwrap();
    let sys = MarkovSystem::hom(
        relation,
        vec!["0".into(), "1".into()],
        golden,
    )
    .unwrap();

    let depth = 4;
    let exact = exact_ball_counts(&sys, depth).unwrap();
    let brute = brute_force_counts(&sys, depth).unwrap();

    println!("golden mean hom shift on the Fibonacci tree, depth {depth}");
    for n in 0..=depth {
        for j in 0..sys.k() {
            let counts: Vec<String> = exact
                .stem_counts(n, j)
                .iter()
                .map(|c| c.to_string())
                .collect();
            println!("  p^(s{})_{n} = ({})", j + 1, counts.join(", "));
        }
        if let Some(total) = exact.ball_total(n) {
            println!("  ball total p_{n} = {total}");
        }
    }

    let mismatches = exact.diff(&brute);
    if mismatches.is_empty() {
        println!("recursion and brute force agree on every table entry");
    } else {
        for m in &mismatches {
            println!("MISMATCH {m}");
        }
    }
}
