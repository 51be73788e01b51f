//! Computes stem entropy for the reference systems on the Fibonacci tree
//! and the rank-2 free group, printing base-10 values and iteration
//! counts.
//!
//! ```bash
//! cargo run --release --example stem_tables
//! ```

use tsent::cayley::free_group_relation;
use tsent::{stem_entropy, BinaryMatrix, EntropyOptions, MarkovSystem, RelationMatrix};

fn bm(rows: &[&[u8]]) -> BinaryMatrix {
    BinaryMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn symbols(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn f2_pair(name: &str, a1: BinaryMatrix, a2: BinaryMatrix) -> (String, MarkovSystem) {
    let dim = a1.dim();
    let mats = vec![a1.clone(), a2.clone(), a1.transpose(), a2.transpose()];
    let sys = MarkovSystem::new(free_group_relation(2), symbols(dim), mats).unwrap();
    (format!("F2 {name}"), sys)
}

fn main() {
    let golden = bm(&[&[1, 1], &[1, 0]]);
    let flipped = bm(&[&[0, 1], &[1, 1]]);
    let fib =
        RelationMatrix::validate(&[vec![1, 1], vec![1, 0]]).expect("valid relation");

    let fib_sys = |name: &str, m1: &BinaryMatrix, m2: &BinaryMatrix| {
        let sys =
            MarkovSystem::new(fib.clone(), symbols(2), vec![m1.clone(), m2.clone()]).unwrap();
        (format!("Fibonacci {name}"), sys)
    };

    let systems = vec![
        fib_sys("golden/golden", &golden, &golden),
        fib_sys("golden/flipped", &flipped, &golden),
        f2_pair("flipped+golden", flipped.clone(), golden.clone()),
        f2_pair("golden+golden", golden.clone(), golden.clone()),
        f2_pair(
            "3x3 pair",
            bm(&[&[0, 1, 0], &[1, 0, 1], &[0, 1, 0]]),
            bm(&[&[0, 1, 1], &[1, 0, 0], &[0, 1, 1]]),
        ),
    ];

    let opts = EntropyOptions::default();
    println!("{:<24} {:>16} {:>6} {:>10}", "system", "stem (base 10)", "iters", "spread");
    for (name, sys) in systems {
        match stem_entropy(&sys, &opts) {
            Ok(est) => println!(
                "{:<24} {:>16.13} {:>6} {:>10.2e}",
                name,
                est.value,
                est.iterations_used,
                est.final_spread()
            ),
            Err(e) => println!("{name:<24} failed: {e}"),
        }
    }
}
