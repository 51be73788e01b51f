//! Constructors shared by the unit tests of several modules.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cayley::RelationMatrix;
use crate::matrix::BinaryMatrix;
use crate::shift::{extend_with_transposes, MarkovSystem};

pub(crate) fn rel(rows: &[&[u8]]) -> RelationMatrix {
    RelationMatrix::validate(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

pub(crate) fn bm(rows: &[&[u8]]) -> BinaryMatrix {
    BinaryMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

pub(crate) fn symbols(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// The golden mean matrix [[1,1],[1,0]].
pub(crate) fn golden() -> BinaryMatrix {
    bm(&[&[1, 1], &[1, 0]])
}

/// `X_{A1,A2,A1^t,A2^t}` on F_2 with A1=[[0,1],[1,1]], A2=[[1,1],[1,0]].
pub(crate) fn free_group_pair(a1: BinaryMatrix, a2: BinaryMatrix) -> MarkovSystem {
    let n = a1.dim();
    MarkovSystem::new(
        crate::cayley::free_group_relation(2),
        symbols(n),
        extend_with_transposes(&[a1, a2]),
    )
    .unwrap()
}

pub(crate) fn free_group_table_row1() -> MarkovSystem {
    free_group_pair(bm(&[&[0, 1], &[1, 1]]), golden())
}

pub(crate) fn fibonacci_hom() -> MarkovSystem {
    MarkovSystem::hom(rel(&[&[1, 1], &[1, 0]]), symbols(2), golden()).unwrap()
}

/// A random valid system with `k <= k_max` generators and alphabet size
/// `<= a_max`; retries until the relation has no dead row.
pub(crate) fn random_system(rng: &mut ChaCha8Rng, k_max: usize, a_max: usize) -> MarkovSystem {
    loop {
        let k = rng.gen_range(1..=k_max);
        let asize = rng.gen_range(1..=a_max);
        let raw: Vec<Vec<u8>> = (0..k)
            .map(|_| (0..k).map(|_| rng.gen_range(0..=1u8)).collect())
            .collect();
        let Ok(relation) = RelationMatrix::validate(&raw) else {
            continue;
        };
        let transitions: Vec<BinaryMatrix> = (0..k)
            .map(|_| BinaryMatrix::from_fn(asize, |_, _| rng.gen_bool(0.7)))
            .collect();
        if let Ok(sys) = MarkovSystem::new(relation, symbols(asize), transitions) {
            return sys;
        }
    }
}
