//! Geometry of the Cayley tree of a finitely generated semigroup
//! `G = <S_k | K>`.
//!
//! The relation matrix `K` is a `k x k` binary matrix; `K(s_i, s_j) = 0`
//! marks the forbidden successor `s_i s_j`, so the Cayley graph is an
//! infinite tree whose branching is governed by the rows of `K`. This
//! module computes level counts and semiball/ball sizes with exact
//! arbitrary-precision arithmetic, the structural flags of `K`
//! (irreducible, period, primitive), and its Perron root.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::matrix::{BinaryMatrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CayleyError {
    #[error(transparent)]
    Shape(#[from] MatrixError),
    #[error("row {row} of K is all zeros; the branch rooted there terminates")]
    DeadRow { row: usize },
    #[error("generator index {index} out of range for k = {k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("K is not irreducible")]
    NotIrreducible,
    #[error("spectral radius iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
}

#[derive(Debug, Clone)]
struct StructureFlags {
    irreducible: bool,
    primitive: bool,
    /// Period and cyclic classes, present iff irreducible.
    period_classes: Option<(usize, Vec<Vec<usize>>)>,
}

/// The relation matrix `K` of `G = <S_k | K>`, with lazily computed
/// structural flags. Every row must contain a 1: a zero row would make a
/// branch of the Cayley tree finite, which none of the entropy theory
/// allows.
#[derive(Debug, Clone)]
pub struct RelationMatrix {
    matrix: BinaryMatrix,
    flags: OnceLock<StructureFlags>,
}

impl PartialEq for RelationMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for RelationMatrix {}

impl RelationMatrix {
    /// Validates a raw 0/1 array as a relation matrix.
    pub fn validate(rows: &[Vec<u8>]) -> Result<Self, CayleyError> {
        Self::from_matrix(BinaryMatrix::from_rows(rows)?)
    }

    pub fn from_matrix(matrix: BinaryMatrix) -> Result<Self, CayleyError> {
        for i in 0..matrix.dim() {
            if matrix.row_sum(i) == 0 {
                return Err(CayleyError::DeadRow { row: i });
            }
        }
        Ok(Self {
            matrix,
            flags: OnceLock::new(),
        })
    }

    pub fn k(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.matrix.get(i, j)
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.matrix.row_sum(i)
    }

    fn flags(&self) -> &StructureFlags {
        self.flags.get_or_init(|| {
            let irreducible = strongly_connected(&self.matrix);
            let period_classes = irreducible.then(|| period_and_classes_of(&self.matrix));
            StructureFlags {
                irreducible,
                primitive: wielandt_primitive(&self.matrix),
                period_classes,
            }
        })
    }

    /// True iff some boolean power of `K` is entrywise positive, decided by
    /// checking exponents up to the Wielandt bound `(k-1)^2 + 1`.
    pub fn is_primitive(&self) -> bool {
        self.flags().primitive
    }

    /// True iff the digraph on generators with edge `i -> j` when
    /// `K(i,j) = 1` is strongly connected.
    pub fn is_irreducible(&self) -> bool {
        self.flags().irreducible
    }

    /// The period (gcd of cycle lengths) and the cyclic classes of the
    /// generator digraph.
    pub fn period_and_classes(&self) -> Result<(usize, Vec<Vec<usize>>), CayleyError> {
        self.flags()
            .period_classes
            .clone()
            .ok_or(CayleyError::NotIrreducible)
    }

    pub fn period(&self) -> Result<usize, CayleyError> {
        Ok(self.period_and_classes()?.0)
    }

    /// Perron root of `K` within `tol`, via Collatz-Wielandt bounds.
    ///
    /// For period `P > 1` the bounds are applied to `K^P` and the `P`-th
    /// root of the bracket is returned.
    pub fn spectral_radius(&self, tol: f64) -> Result<f64, CayleyError> {
        let (period, _) = self.period_and_classes()?;
        let k = self.k();
        let base: Vec<f64> = (0..k * k)
            .map(|idx| self.matrix.get(idx / k, idx % k) as u8 as f64)
            .collect();
        let mut m = identity_f64(k);
        for _ in 0..period {
            m = mat_mul_f64(k, &m, &base);
        }
        let mut v = vec![1.0; k];
        const MAX_ITERS: usize = 100_000;
        for _ in 0..MAX_ITERS {
            let w = mat_vec_f64(k, &m, &v);
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for i in 0..k {
                let r = w[i] / v[i];
                lo = lo.min(r);
                hi = hi.max(r);
            }
            let inv = 1.0 / period as f64;
            let (rlo, rhi) = (lo.powf(inv), hi.powf(inv));
            if rhi - rlo < tol {
                return Ok(0.5 * (rlo + rhi));
            }
            let max = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            v = w.iter().map(|x| x / max).collect();
        }
        Err(CayleyError::NoConvergence {
            iterations: MAX_ITERS,
        })
    }
}

/// Relation matrix of the free group `F_r`: `k = 2r` generators with
/// `K(s_i, s_j) = 0` exactly when `|i - j| = r` (a generator may not be
/// followed by its inverse).
pub fn free_group_relation(rank: usize) -> RelationMatrix {
    assert!(rank >= 1);
    let k = 2 * rank;
    let m = BinaryMatrix::from_fn(k, |i, j| i.abs_diff(j) != rank);
    RelationMatrix::from_matrix(m).expect("free group relation has no dead rows")
}

fn strongly_connected(m: &BinaryMatrix) -> bool {
    let k = m.dim();
    let fwd = reach(k, 0, |u, v| m.get(u, v));
    let bwd = reach(k, 0, |u, v| m.get(v, u));
    (0..k).all(|v| fwd[v] && bwd[v])
}

fn reach(k: usize, start: usize, edge: impl Fn(usize, usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; k];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(u) = stack.pop() {
        for v in 0..k {
            if !seen[v] && edge(u, v) {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

fn wielandt_primitive(m: &BinaryMatrix) -> bool {
    let k = m.dim();
    let bound = (k - 1) * (k - 1) + 1;
    let mut power = m.clone();
    for step in 1..=bound {
        if power.is_positive() {
            return true;
        }
        if step < bound {
            power = power.bool_mul(m);
        }
    }
    false
}

/// Breadth-first layering: the period is the gcd of `level(u) + 1 - level(v)`
/// over all edges `u -> v`, and the cyclic classes are the residues of the
/// levels mod the period.
fn period_and_classes_of(m: &BinaryMatrix) -> (usize, Vec<Vec<usize>>) {
    let k = m.dim();
    let mut level = vec![usize::MAX; k];
    let mut queue = std::collections::VecDeque::from([0usize]);
    level[0] = 0;
    while let Some(u) = queue.pop_front() {
        for v in 0..k {
            if m.get(u, v) && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g: u64 = 0;
    for u in 0..k {
        for v in 0..k {
            if m.get(u, v) {
                let d = (level[u] as i64 + 1 - level[v] as i64).unsigned_abs();
                g = gcd(g, d);
            }
        }
    }
    let period = g.max(1) as usize;
    let mut classes = vec![Vec::new(); period];
    for v in 0..k {
        classes[level[v] % period].push(v);
    }
    (period, classes)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn identity_f64(k: usize) -> Vec<f64> {
    let mut m = vec![0.0; k * k];
    for i in 0..k {
        m[i * k + i] = 1.0;
    }
    m
}

fn mat_mul_f64(k: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; k * k];
    for i in 0..k {
        for l in 0..k {
            let ail = a[i * k + l];
            if ail != 0.0 {
                for j in 0..k {
                    out[i * k + j] += ail * b[l * k + j];
                }
            }
        }
    }
    out
}

fn mat_vec_f64(k: usize, m: &[f64], v: &[f64]) -> Vec<f64> {
    (0..k)
        .map(|i| (0..k).map(|j| m[i * k + j] * v[j]).sum())
        .collect()
}

/// Exact geometric quantities of the Cayley tree rooted at the identity,
/// backed by a memoized cache of big-integer powers of `K`.
///
/// The cache fill is idempotent; all methods may be called from several
/// threads at once.
pub struct BallGeometry {
    rel: RelationMatrix,
    powers: Mutex<Vec<Vec<BigUint>>>,
}

impl BallGeometry {
    pub fn new(rel: RelationMatrix) -> Self {
        let k = rel.k();
        let mut identity = vec![BigUint::zero(); k * k];
        for i in 0..k {
            identity[i * k + i] = BigUint::one();
        }
        Self {
            rel,
            powers: Mutex::new(vec![identity]),
        }
    }

    pub fn relation(&self) -> &RelationMatrix {
        &self.rel
    }

    /// Entry `(i, j)` of `K^l`, exact.
    pub fn power_entry(&self, l: usize, i: usize, j: usize) -> BigUint {
        let k = self.rel.k();
        let mut powers = self.powers.lock().unwrap();
        while powers.len() <= l {
            let last = powers.last().unwrap();
            let next = big_mat_mul(k, last, &self.rel);
            powers.push(next);
        }
        powers[l][i * k + j].clone()
    }

    /// `[L_0, ..., L_n]` with `L_0 = 1` and `L_l = sum_j K^l(s_i, s_j)`.
    pub fn level_counts(&self, i: usize, n: usize) -> Result<Vec<BigUint>, CayleyError> {
        let k = self.rel.k();
        if i >= k {
            return Err(CayleyError::IndexOutOfRange { index: i, k });
        }
        Ok((0..=n)
            .map(|l| {
                if l == 0 {
                    BigUint::one()
                } else {
                    (0..k).map(|j| self.power_entry(l, i, j)).sum()
                }
            })
            .collect())
    }

    /// `|semiball(s_i, n)| = sum_{l=0}^{n} L_l`.
    pub fn semiball_size(&self, i: usize, n: usize) -> Result<BigUint, CayleyError> {
        Ok(self.level_counts(i, n)?.into_iter().sum())
    }

    /// `|ball(n)|`: the root plus the `k` semiballs of depth `n - 1`.
    pub fn ball_size(&self, n: usize) -> BigUint {
        if n == 0 {
            return BigUint::one();
        }
        let k = self.rel.k();
        BigUint::one()
            + (0..k)
                .map(|i| self.semiball_size(i, n - 1).expect("index in range"))
                .sum::<BigUint>()
    }
}

fn big_mat_mul(k: usize, a: &[BigUint], rel: &RelationMatrix) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); k * k];
    for i in 0..k {
        for l in 0..k {
            if !a[i * k + l].is_zero() {
                for j in 0..k {
                    if rel.get(l, j) {
                        let add = a[i * k + l].clone();
                        out[i * k + j] += add;
                    }
                }
            }
        }
    }
    out
}
