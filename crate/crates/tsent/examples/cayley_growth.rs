//! Explores the Cayley tree geometry of a few relations: primitivity,
//! period, spectral radius and the semiball and ball growth that drive
//! the entropy normalization.
//!
//! ```bash
//! cargo run --release --example cayley_growth
//! ```

use tsent::cayley::free_group_relation;
use tsent::{BallGeometry, RelationMatrix};

fn rel(rows: &[&[u8]]) -> RelationMatrix {
    RelationMatrix::validate(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn main() {
    let relations: Vec<(&str, RelationMatrix)> = vec![
        ("Fibonacci", rel(&[&[1, 1], &[1, 0]])),
        ("free group F2", free_group_relation(2)),
        ("period 2", rel(&[&[0, 1], &[1, 0]])),
        ("single generator", rel(&[&[1]])),
    ];

    for (name, relation) in &relations {
        println!("{name}: k = {}", relation.k());
        println!(
            "  irreducible = {}, primitive = {}, period = {}",
            relation.is_irreducible(),
            relation.is_primitive(),
            relation
                .period()
                .map_or("-".into(), |p| p.to_string())
        );
        if let Ok(rho) = relation.spectral_radius(1e-12) {
            println!("  spectral radius = {rho:.12}");
        }
        let geo = BallGeometry::new(relation.clone());
        let balls: Vec<String> = (0..=8).map(|n| geo.ball_size(n).to_string()).collect();
        println!("  ball sizes |D_n|, n = 0..8: {}", balls.join(", "));
        for i in 0..relation.k() {
            let semis: Vec<String> = (0..=8)
                .map(|n| geo.semiball_size(i, n).unwrap().to_string())
                .collect();
            println!("  semiball sizes in direction s{}: {}", i + 1, semis.join(", "));
        }
        println!();
    }
}
