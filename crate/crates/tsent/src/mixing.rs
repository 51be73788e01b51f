//! Graph representation of a Markov tree shift and entropy-existence
//! certificates.
//!
//! The graph has one vertex per (symbol, generator) pair and an edge
//! ((a,s_i),(b,s_j)) exactly when K(s_i,s_j)=1 and A_j(a,b)=1. Strong
//! connectivity and the pivot property of this graph, together with the
//! structural classification of the system, drive the certificates.

use std::collections::HashSet;

use serde::Serialize;

use crate::matrix::BinaryMatrix;
use crate::shift::MarkovSystem;

/// The (symbol, generator) digraph. Vertex `(a, s_i)` has id `a*k + i`:
/// symbols outer, generators inner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphRep {
    k: usize,
    alphabet_size: usize,
    adjacency: BinaryMatrix,
}

impl GraphRep {
    pub fn vertex_count(&self) -> usize {
        self.alphabet_size * self.k
    }

    pub fn vertex_id(&self, a: usize, i: usize) -> usize {
        a * self.k + i
    }

    /// Inverse of [`vertex_id`](Self::vertex_id): `(symbol, generator)`.
    pub fn vertex_pair(&self, id: usize) -> (usize, usize) {
        (id / self.k, id % self.k)
    }

    pub fn has_edge(&self, a: usize, i: usize, b: usize, j: usize) -> bool {
        self.adjacency.get(self.vertex_id(a, i), self.vertex_id(b, j))
    }

    pub fn edge_count(&self) -> usize {
        let v = self.vertex_count();
        (0..v)
            .map(|x| (0..v).filter(|&y| self.adjacency.get(x, y)).count())
            .sum()
    }

    pub fn adjacency(&self) -> &BinaryMatrix {
        &self.adjacency
    }
}

pub fn build_graph_representation(sys: &MarkovSystem) -> GraphRep {
    let k = sys.k();
    let asize = sys.alphabet_size();
    let adjacency = BinaryMatrix::from_fn(asize * k, |x, y| {
        let (a, i) = (x / k, x % k);
        let (b, j) = (y / k, y % k);
        sys.relation().get(i, j) && sys.transition(j).get(a, b)
    });
    GraphRep {
        k,
        alphabet_size: asize,
        adjacency,
    }
}

fn reachable(adj: &BinaryMatrix, start: usize, backward: bool) -> Vec<bool> {
    let v = adj.dim();
    let mut seen = vec![false; v];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(x) = stack.pop() {
        for y in 0..v {
            let edge = if backward { adj.get(y, x) } else { adj.get(x, y) };
            if edge && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// True iff every ordered vertex pair is joined by a directed walk, i.e.
/// the whole graph is one strongly connected component.
pub fn is_strongly_connected(g: &GraphRep) -> bool {
    let fwd = reachable(&g.adjacency, 0, false);
    let bwd = reachable(&g.adjacency, 0, true);
    fwd.iter().zip(bwd.iter()).all(|(&f, &b)| f && b)
}

/// A pivot: from `(symbol, generator)` there are walks of one common
/// length `walk_length` to `(b, target_generator)` for every symbol b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Pivot {
    pub symbol: usize,
    pub generator: usize,
    pub target_generator: usize,
    pub walk_length: usize,
}

/// Scans boolean powers of the adjacency matrix for a pivot, in
/// deterministic (symbol, generator, target) order, smallest walk length
/// first. The power sequence is eventually periodic, so a seen-set of
/// matrices guarantees termination once the cycle closes without a hit.
pub fn find_pivot(g: &GraphRep) -> Option<Pivot> {
    let mut power = g.adjacency.clone();
    let mut seen: HashSet<BinaryMatrix> = HashSet::new();
    let mut n = 1usize;
    loop {
        for a in 0..g.alphabet_size {
            for i in 0..g.k {
                for j in 0..g.k {
                    let hit = (0..g.alphabet_size)
                        .all(|b| power.get(g.vertex_id(a, i), g.vertex_id(b, j)));
                    if hit {
                        return Some(Pivot {
                            symbol: a,
                            generator: i,
                            target_generator: j,
                            walk_length: n,
                        });
                    }
                }
            }
        }
        if !seen.insert(power.clone()) {
            return None;
        }
        power = power.bool_mul(&g.adjacency);
        n += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertificateKind {
    #[serde(rename = "PrimitiveK_StemExists")]
    PrimitiveKStemExists,
    #[serde(rename = "IrreducibleK_StemExists")]
    IrreducibleKStemExists,
    #[serde(rename = "FullRow_TopEqualsStem")]
    FullRowTopEqualsStem,
    #[serde(rename = "HomConstantRowSum_TopEqualsStem")]
    HomConstantRowSumTopEqualsStem,
    #[serde(rename = "FreeGroupHom_TopEqualsStem")]
    FreeGroupHomTopEqualsStem,
    #[serde(rename = "FreeGroupSmallAlphabet_TopEqualsStem")]
    FreeGroupSmallAlphabetTopEqualsStem,
    #[serde(rename = "PivotSC_TopEqualsStem")]
    PivotSCTopEqualsStem,
}

impl CertificateKind {
    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::PrimitiveKStemExists => "PrimitiveK_StemExists",
            CertificateKind::IrreducibleKStemExists => "IrreducibleK_StemExists",
            CertificateKind::FullRowTopEqualsStem => "FullRow_TopEqualsStem",
            CertificateKind::HomConstantRowSumTopEqualsStem => "HomConstantRowSum_TopEqualsStem",
            CertificateKind::FreeGroupHomTopEqualsStem => "FreeGroupHom_TopEqualsStem",
            CertificateKind::FreeGroupSmallAlphabetTopEqualsStem => {
                "FreeGroupSmallAlphabet_TopEqualsStem"
            }
            CertificateKind::PivotSCTopEqualsStem => "PivotSC_TopEqualsStem",
        }
    }

    /// Kinds asserting that topological entropy exists and equals the
    /// stem entropy (the others assert stem existence only).
    pub fn implies_top_equals_stem(self) -> bool {
        !matches!(
            self,
            CertificateKind::PrimitiveKStemExists | CertificateKind::IrreducibleKStemExists
        )
    }
}

/// A mechanically verified sufficient condition, with the facts that were
/// checked. Absence of certificates never means the entropy fails to
/// exist.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub evidence: Vec<(String, String)>,
}

fn fact(key: &str, value: impl ToString) -> (String, String) {
    (key.to_string(), value.to_string())
}

/// Smallest exponent with `K^n` entrywise positive, if any within the
/// Wielandt bound.
fn positive_power(m: &BinaryMatrix) -> Option<usize> {
    let k = m.dim();
    let bound = (k - 1) * (k - 1) + 1;
    let mut power = m.clone();
    for n in 1..=bound {
        if power.is_positive() {
            return Some(n);
        }
        power = power.bool_mul(m);
    }
    None
}

/// True when the second half of the matrices are the transposes of the
/// first half, the `X_{A,A^t}` free-group convention.
fn transpose_paired(sys: &MarkovSystem, rank: usize) -> bool {
    (0..rank).all(|i| *sys.transition(rank + i) == sys.transition(i).transpose())
}

pub fn existence_certificate(sys: &MarkovSystem) -> Vec<Certificate> {
    let rel = sys.relation();
    let cls = sys.classification();
    let primitive = rel.is_primitive();
    let mut out = Vec::new();

    if primitive {
        let n = positive_power(rel.matrix()).expect("primitive has a positive power");
        out.push(Certificate {
            kind: CertificateKind::PrimitiveKStemExists,
            evidence: vec![fact("k", rel.k()), fact("positive_power", n)],
        });
    }
    if rel.is_irreducible() {
        let (period, classes) = rel.period_and_classes().expect("irreducible");
        out.push(Certificate {
            kind: CertificateKind::IrreducibleKStemExists,
            evidence: vec![fact("period", period), fact("cyclic_classes", classes.len())],
        });
    }
    if primitive {
        if let Some(row) = cls.full_row_index {
            out.push(Certificate {
                kind: CertificateKind::FullRowTopEqualsStem,
                evidence: vec![fact("row", row + 1), fact("row_sum", rel.k())],
            });
        }
        if let (true, Some(m)) = (cls.is_hom, cls.constant_row_sum) {
            out.push(Certificate {
                kind: CertificateKind::HomConstantRowSumTopEqualsStem,
                evidence: vec![fact("row_sum", m), fact("k", rel.k())],
            });
        }
    }
    if let Some(rank) = cls.free_group_shape {
        if transpose_paired(sys, rank) {
            let first_half_hom = (1..rank).all(|i| sys.transition(i) == sys.transition(0));
            if first_half_hom {
                out.push(Certificate {
                    kind: CertificateKind::FreeGroupHomTopEqualsStem,
                    evidence: vec![fact("rank", rank), fact("transpose_paired", true)],
                });
            }
            if cls.alphabet_small_enough == Some(true) {
                out.push(Certificate {
                    kind: CertificateKind::FreeGroupSmallAlphabetTopEqualsStem,
                    evidence: vec![
                        fact("rank", rank),
                        fact("alphabet_size", sys.alphabet_size()),
                        fact("bound", 2 * rank - 1),
                    ],
                });
            }
        }
    }
    let graph = build_graph_representation(sys);
    if is_strongly_connected(&graph) {
        if let Some(pivot) = find_pivot(&graph) {
            out.push(Certificate {
                kind: CertificateKind::PivotSCTopEqualsStem,
                evidence: vec![
                    fact("pivot_symbol", &sys.alphabet()[pivot.symbol]),
                    fact("pivot_generator", pivot.generator + 1),
                    fact("target_generator", pivot.target_generator + 1),
                    fact("walk_length", pivot.walk_length),
                ],
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::RelationMatrix;
    use crate::shift::extend_with_transposes;
    use crate::testutil::{bm, fibonacci_hom, free_group_table_row1, golden, rel, symbols};

    fn hom(k_rows: &[&[u8]], a_rows: &[&[u8]]) -> MarkovSystem {
        let a = bm(a_rows);
        MarkovSystem::hom(rel(k_rows), symbols(a.dim()), a).unwrap()
    }

    #[test]
    fn figure_example_graph() {
        let sys = MarkovSystem::new(
            rel(&[&[1, 1], &[1, 0]]),
            symbols(2),
            vec![bm(&[&[1, 1], &[1, 0]]), bm(&[&[0, 1], &[1, 1]])],
        )
        .unwrap();
        let g = build_graph_representation(&sys);
        assert_eq!(g.vertex_count(), 4);
        // Manual expansion of the edge rule: K(1,1) and K(2,1) each give
        // the three A_1 edges, K(1,2) gives the three A_2 edges, and
        // K(2,2)=0 gives none.
        assert_eq!(g.edge_count(), 9);
        assert!(g.has_edge(0, 0, 0, 0));
        assert!(g.has_edge(0, 0, 1, 1));
        assert!(!g.has_edge(0, 0, 0, 1));
        assert!(!g.has_edge(0, 1, 0, 1));
        assert!(g.has_edge(1, 1, 0, 0));
    }

    #[test]
    fn trivial_graphs() {
        // Single-symbol alphabet: the graph mirrors K.
        let sys = hom(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]], &[&[1]]);
        let g = build_graph_representation(&sys);
        assert_eq!(g.vertex_count(), 3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g.has_edge(0, i, 0, j), sys.relation().get(i, j));
            }
        }

        // Full shift: every K-allowed pair of vertices is joined.
        let sys = hom(&[&[1, 1], &[1, 0]], &[&[1, 1], &[1, 1]]);
        let g = build_graph_representation(&sys);
        assert_eq!(g.edge_count(), 3 * 4);
    }

    #[test]
    fn strong_connectivity_examples() {
        assert!(is_strongly_connected(&build_graph_representation(
            &fibonacci_hom()
        )));
        let diagonal = hom(&[&[1, 1], &[1, 0]], &[&[1, 0], &[0, 1]]);
        assert!(!is_strongly_connected(&build_graph_representation(
            &diagonal
        )));
        let swap = hom(&[&[1, 1], &[1, 0]], &[&[0, 1], &[1, 0]]);
        assert!(is_strongly_connected(&build_graph_representation(&swap)));
    }

    #[test]
    fn pivot_examples() {
        let g = build_graph_representation(&fibonacci_hom());
        let pivot = find_pivot(&g).unwrap();
        assert!(pivot.walk_length >= 1);

        let swap = hom(&[&[1, 1], &[1, 0]], &[&[0, 1], &[1, 0]]);
        assert_eq!(find_pivot(&build_graph_representation(&swap)), None);

        let single = hom(&[&[1, 1], &[1, 0]], &[&[1]]);
        let pivot = find_pivot(&build_graph_representation(&single)).unwrap();
        assert_eq!(pivot.symbol, 0);
    }

    /// The hom equivalence on Fibonacci K over all essential 2x2 binary
    /// matrices, with ground truth from the period analysis of A itself.
    #[test]
    fn hom_equivalence_small() {
        let k_rel = rel(&[&[1, 1], &[1, 0]]);
        for bits in 0..16u32 {
            let a = BinaryMatrix::from_fn(2, |i, j| bits >> (i * 2 + j) & 1 == 1);
            let essential = (0..2).all(|i| (0..2).any(|j| a.get(i, j)))
                && (0..2).all(|j| (0..2).any(|i| a.get(i, j)));
            if !essential {
                continue;
            }
            let truth = RelationMatrix::from_matrix(a.clone()).unwrap();
            let sys = MarkovSystem::hom(k_rel.clone(), symbols(2), a).unwrap();
            let g = build_graph_representation(&sys);
            let sc = is_strongly_connected(&g);
            assert_eq!(sc, truth.is_irreducible(), "bits {bits:04b}");
            assert_eq!(
                sc && find_pivot(&g).is_some(),
                truth.is_primitive(),
                "bits {bits:04b}"
            );
        }
    }

    #[test]
    fn certificates_for_named_systems() {
        let kinds = |sys: &MarkovSystem| {
            existence_certificate(sys)
                .iter()
                .map(|c| c.kind)
                .collect::<Vec<_>>()
        };

        let fib = kinds(&fibonacci_hom());
        assert!(fib.contains(&CertificateKind::PrimitiveKStemExists));
        assert!(fib.contains(&CertificateKind::FullRowTopEqualsStem));
        assert!(fib.contains(&CertificateKind::PivotSCTopEqualsStem));

        let f2 = kinds(&free_group_table_row1());
        assert!(f2.contains(&CertificateKind::PrimitiveKStemExists));
        assert!(f2.contains(&CertificateKind::IrreducibleKStemExists));
        assert!(f2.contains(&CertificateKind::FreeGroupSmallAlphabetTopEqualsStem));
        assert!(!f2.contains(&CertificateKind::FreeGroupHomTopEqualsStem));

        let bethe = hom(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]], &[&[1, 1], &[1, 0]]);
        let bethe_kinds = kinds(&bethe);
        assert!(bethe_kinds.contains(&CertificateKind::HomConstantRowSumTopEqualsStem));
        assert!(bethe_kinds.contains(&CertificateKind::PivotSCTopEqualsStem));

        // Hom free-group system gets the hom free-group certificate.
        let hom_f2 = MarkovSystem::new(
            crate::cayley::free_group_relation(2),
            symbols(2),
            extend_with_transposes(&[golden(), golden()]),
        )
        .unwrap();
        assert!(kinds(&hom_f2).contains(&CertificateKind::FreeGroupHomTopEqualsStem));
    }

    #[test]
    fn no_certificate_makes_no_claim() {
        // Reducible K without structural hypotheses and a disconnected
        // graph: the list is empty, which asserts nothing.
        let sys = MarkovSystem::new(
            rel(&[&[1, 1], &[0, 1]]),
            symbols(2),
            vec![bm(&[&[1, 0], &[0, 1]]), bm(&[&[1, 1], &[1, 0]])],
        )
        .unwrap();
        assert!(existence_certificate(&sys).is_empty());
    }

    #[test]
    fn evidence_is_recorded() {
        let certs = existence_certificate(&fibonacci_hom());
        let full_row = certs
            .iter()
            .find(|c| c.kind == CertificateKind::FullRowTopEqualsStem)
            .unwrap();
        assert!(full_row
            .evidence
            .iter()
            .any(|(k, v)| k == "row" && v == "1"));
        let pivot = certs
            .iter()
            .find(|c| c.kind == CertificateKind::PivotSCTopEqualsStem)
            .unwrap();
        assert!(pivot.evidence.iter().any(|(k, _)| k == "walk_length"));
    }
}
