//! Runs the structural analysis on a handful of systems: graph
//! representation, strong connectivity, pivot search and the resulting
//! existence certificates.
//!
//! ```bash
//! cargo run --release --example certificates
//! ```

use tsent::{
    build_graph_representation, existence_certificate, find_pivot, is_strongly_connected,
    BinaryMatrix, MarkovSystem, RelationMatrix,
};

fn bm(rows: &[&[u8]]) -> BinaryMatrix {
    BinaryMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn rel(rows: &[&[u8]]) -> RelationMatrix {
    RelationMatrix::validate(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn symbols(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn main() {
    let golden = bm(&[&[1, 1], &[1, 0]]);
    let systems: Vec<(&str, MarkovSystem)> = vec![
        (
            "Fibonacci tree, golden mean hom shift",
            MarkovSystem::hom(rel(&[&[1, 1], &[1, 0]]), symbols(2), golden.clone()).unwrap(),
        ),
        (
            "free group F2, golden pair with transposes",
            MarkovSystem::new(
                tsent::cayley::free_group_relation(2),
                symbols(2),
                vec![
                    golden.clone(),
                    golden.clone(),
                    golden.transpose(),
                    golden.transpose(),
                ],
            )
            .unwrap(),
        ),
        (
            "reducible relation, identity transitions",
            MarkovSystem::new(
                rel(&[&[1, 1], &[0, 1]]),
                symbols(2),
                vec![bm(&[&[1, 0], &[0, 1]]), bm(&[&[1, 0], &[0, 1]])],
            )
            .unwrap(),
        ),
    ];

    for (name, sys) in &systems {
        println!("{name}");
        let graph = build_graph_representation(sys);
        let sc = is_strongly_connected(&graph);
        println!(
            "  graph: {} vertices, {} edges, strongly connected = {sc}",
            graph.vertex_count(),
            graph.edge_count()
        );
        match find_pivot(&graph) {
            Some(p) => println!(
                "  pivot: symbol {} in direction s{} reaches s{} at walk length {}",
                p.symbol,
                p.generator + 1,
                p.target_generator + 1,
                p.walk_length
            ),
            None => println!("  pivot: none"),
        }
        let certs = existence_certificate(sys);
        if certs.is_empty() {
            println!("  certificates: none (nothing is claimed either way)");
        }
        for c in &certs {
            let facts: Vec<String> = c.evidence.iter().map(|(k, v)| format!("{k}={v}")).collect();
            println!("  certificate: {} [{}]", c.kind.name(), facts.join(", "));
        }
        println!();
    }
}
