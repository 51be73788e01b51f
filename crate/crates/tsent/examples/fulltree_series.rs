//! Topological entropy on the full d-ary tree with the series bracket:
//! for an essential hom shift the partial sums enclose the limit and the
//! bracket width shrinks like log|A|/d^N.
//!
//! ```bash
//! cargo run --release --example fulltree_series
//! ```

use tsent::{fulltree_entropy, BinaryMatrix, EntropyOptions};

fn main() {
    let golden = BinaryMatrix::from_rows(&[vec![1, 1], vec![1, 0]]).unwrap();
    let opts = EntropyOptions::default();

    for d in [2usize, 3] {
        let est = fulltree_entropy(&vec![golden.clone(); d], &opts).unwrap();
        println!(
            "golden mean hom shift on the full {d}-ary tree (base {})",
            est.base
        );
        println!("value = {:.13} after {} iterations", est.value, est.iterations_used);
        if let Some(series) = &est.series {
            println!("{:>4} {:>18} {:>18} {:>12}", "N", "lower", "upper", "width");
            for bracket in series.iter().take(12) {
                println!(
                    "{:>4} {:>18.13} {:>18.13} {:>12.3e}",
                    bracket.n_terms,
                    bracket.lower,
                    bracket.upper,
                    bracket.width()
                );
            }
        }
        println!();
    }
}
