//! Markov tree shifts `X_A` on the Cayley tree of `G = <S_k | K>`.
//!
//! A Markov tree shift is given by a k-tuple of binary transition matrices
//! `A_1..A_k`: a labeling is admissible when `A_i(t_g, t_{g s_i}) = 1` on
//! every tree edge, where the matrix is indexed by the *child's* generator.
//! This module validates systems, classifies their structure, and counts
//! admissible patterns exactly — both by the product recursion and by an
//! independent brute-force enumeration at small depth.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::cayley::{BallGeometry, CayleyError, RelationMatrix};
use crate::matrix::{BinaryMatrix, MatrixError};

/// Counts grow doubly exponentially in the depth; this cap keeps tables
/// within memory for k <= 4.
pub const DEFAULT_DEPTH_CAP: usize = 12;

/// Brute-force enumeration guard: at most 2^25 label assignments.
pub const ORACLE_STATE_BITS: f64 = 25.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShiftError {
    #[error(transparent)]
    Shape(#[from] MatrixError),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error("expected {expected} transition matrices of dimension {dim}, got matrix {index} with dimension {got}")]
    DimensionMismatch {
        expected: usize,
        dim: usize,
        index: usize,
        got: usize,
    },
    #[error("expected {k} transition matrices, got {got}")]
    WrongMatrixCount { k: usize, got: usize },
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("depth {depth} exceeds the exact-count cap {cap}")]
    DepthCapExceeded { depth: usize, cap: usize },
    #[error("brute-force enumeration needs {bits:.1} bits of state, above the {limit:.0}-bit guard")]
    OracleTooLarge { bits: f64, limit: f64 },
}

/// Structural hypotheses of the existence theorems, checked eagerly at
/// validation.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Classification {
    /// All transition matrices equal.
    pub is_hom: bool,
    /// Some row of `K` sums to `k`.
    pub full_row_index: Option<usize>,
    /// All rows of `K` share this sum.
    pub constant_row_sum: Option<usize>,
    /// `K` is the free-group relation of this rank.
    pub free_group_shape: Option<usize>,
    /// `|alphabet| <= 2 rank - 1`, when `free_group_shape` is set.
    pub alphabet_small_enough: Option<bool>,
}

/// A validated Markov tree shift: the relation matrix, the alphabet, and
/// one transition matrix per generator. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovSystem {
    relation: RelationMatrix,
    alphabet: Vec<String>,
    transitions: Vec<BinaryMatrix>,
    classification: Classification,
}

impl MarkovSystem {
    pub fn new(
        relation: RelationMatrix,
        alphabet: Vec<String>,
        transitions: Vec<BinaryMatrix>,
    ) -> Result<Self, ShiftError> {
        if alphabet.is_empty() {
            return Err(ShiftError::EmptyAlphabet);
        }
        let k = relation.k();
        if transitions.len() != k {
            return Err(ShiftError::WrongMatrixCount {
                k,
                got: transitions.len(),
            });
        }
        for (index, m) in transitions.iter().enumerate() {
            if m.dim() != alphabet.len() {
                return Err(ShiftError::DimensionMismatch {
                    expected: k,
                    dim: alphabet.len(),
                    index,
                    got: m.dim(),
                });
            }
        }
        let classification = classify_parts(&relation, &alphabet, &transitions);
        Ok(Self {
            relation,
            alphabet,
            transitions,
            classification,
        })
    }

    /// Hom system: the same transition matrix in every direction.
    pub fn hom(
        relation: RelationMatrix,
        alphabet: Vec<String>,
        matrix: BinaryMatrix,
    ) -> Result<Self, ShiftError> {
        let k = relation.k();
        Self::new(relation, alphabet, vec![matrix; k])
    }

    pub fn relation(&self) -> &RelationMatrix {
        &self.relation
    }

    pub fn k(&self) -> usize {
        self.relation.k()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn transitions(&self) -> &[BinaryMatrix] {
        &self.transitions
    }

    pub fn transition(&self, i: usize) -> &BinaryMatrix {
        &self.transitions[i]
    }

    pub fn classification(&self) -> &Classification {
        &self.classification
    }
}

/// Extends `r` matrices to `2r` by appending transposes, the
/// `X_{A, A^t}` convention for shifts over free groups.
pub fn extend_with_transposes(matrices: &[BinaryMatrix]) -> Vec<BinaryMatrix> {
    let mut out = matrices.to_vec();
    out.extend(matrices.iter().map(|m| m.transpose()));
    out
}

pub fn classify(sys: &MarkovSystem) -> Classification {
    sys.classification.clone()
}

fn classify_parts(
    relation: &RelationMatrix,
    alphabet: &[String],
    transitions: &[BinaryMatrix],
) -> Classification {
    let k = relation.k();
    let is_hom = transitions.windows(2).all(|w| w[0] == w[1]);
    let full_row_index = (0..k).find(|&i| relation.row_sum(i) == k);
    let sums: Vec<usize> = (0..k).map(|i| relation.row_sum(i)).collect();
    let constant_row_sum = (sums.windows(2).all(|w| w[0] == w[1])).then(|| sums[0]);
    let free_group_shape = (k % 2 == 0)
        .then(|| k / 2)
        .filter(|&r| {
            (0..k).all(|i| (0..k).all(|j| relation.get(i, j) == (i.abs_diff(j) != r)))
        });
    let alphabet_small_enough = free_group_shape.map(|r| alphabet.len() <= 2 * r - 1);
    Classification {
        is_hom,
        full_row_index,
        constant_row_sum,
        free_group_shape,
        alphabet_small_enough,
    }
}

/// Exact pattern counts up to a depth: per-generator semiball counts
/// `p^{(s_j)}_{m;a}`, optionally root-ball counts `p_{m;a}` and branch
/// counts `q^{(s_i)}_{m;a}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCountTable {
    depth: usize,
    k: usize,
    alphabet_size: usize,
    /// `stem[m][j][a] = p^{(s_j)}_{m;a}`.
    stem: Vec<Vec<Vec<BigUint>>>,
    /// `ball[m][a] = p_{m;a}`.
    ball: Option<Vec<Vec<BigUint>>>,
    /// `branch[m][i][a] = q^{(s_i)}_{m;a}`.
    branch: Option<Vec<Vec<Vec<BigUint>>>>,
}

impl ExactCountTable {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn stem_count(&self, m: usize, j: usize, a: usize) -> &BigUint {
        &self.stem[m][j][a]
    }

    pub fn stem_counts(&self, m: usize, j: usize) -> &[BigUint] {
        &self.stem[m][j]
    }

    /// `p^{(s_j)}_m`, the total over root symbols.
    pub fn stem_total(&self, m: usize, j: usize) -> BigUint {
        self.stem[m][j].iter().sum()
    }

    pub fn stem_max(&self, m: usize, j: usize) -> &BigUint {
        self.stem[m][j].iter().max().expect("nonempty alphabet")
    }

    pub fn ball_count(&self, m: usize, a: usize) -> Option<&BigUint> {
        self.ball.as_ref().map(|b| &b[m][a])
    }

    pub fn ball_total(&self, m: usize) -> Option<BigUint> {
        self.ball.as_ref().map(|b| b[m].iter().sum())
    }

    pub fn branch_count(&self, m: usize, i: usize, a: usize) -> Option<&BigUint> {
        self.branch.as_ref().map(|q| &q[m][i][a])
    }

    /// Entrywise differences against another table, as human-readable
    /// strings; empty means the tables agree on their common fields.
    pub fn diff(&self, other: &Self) -> Vec<String> {
        let mut out = Vec::new();
        let depth = self.depth.min(other.depth);
        for m in 0..=depth {
            for j in 0..self.k {
                for a in 0..self.alphabet_size {
                    let (x, y) = (&self.stem[m][j][a], &other.stem[m][j][a]);
                    if x != y {
                        out.push(format!("stem p^(s{})_({m};{a}): {x} vs {y}", j + 1));
                    }
                }
            }
            if let (Some(b1), Some(b2)) = (&self.ball, &other.ball) {
                for a in 0..self.alphabet_size {
                    if b1[m][a] != b2[m][a] {
                        out.push(format!("ball p_({m};{a}): {} vs {}", b1[m][a], b2[m][a]));
                    }
                }
            }
            if let (Some(q1), Some(q2)) = (&self.branch, &other.branch) {
                for i in 0..self.k {
                    for a in 0..self.alphabet_size {
                        if q1[m][i][a] != q2[m][i][a] {
                            out.push(format!(
                                "branch q^(s{})_({m};{a}): {} vs {}",
                                i + 1,
                                q1[m][i][a],
                                q2[m][i][a]
                            ));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Semiball counts by the recursion
/// `p^{(s_j)}_{m;a} = prod_{l: K(j,l)=1} sum_b A_l(a,b) p^{(s_l)}_{m-1;b}`.
pub fn exact_stem_counts(sys: &MarkovSystem, n: usize) -> Result<ExactCountTable, ShiftError> {
    exact_counts(sys, n, false, DEFAULT_DEPTH_CAP)
}

/// As [`exact_stem_counts`], also filling root-ball and branch counts.
pub fn exact_ball_counts(sys: &MarkovSystem, n: usize) -> Result<ExactCountTable, ShiftError> {
    exact_counts(sys, n, true, DEFAULT_DEPTH_CAP)
}

pub fn exact_counts_capped(
    sys: &MarkovSystem,
    n: usize,
    cap: usize,
) -> Result<ExactCountTable, ShiftError> {
    exact_counts(sys, n, true, cap)
}

fn exact_counts(
    sys: &MarkovSystem,
    n: usize,
    with_ball: bool,
    cap: usize,
) -> Result<ExactCountTable, ShiftError> {
    if n > cap {
        return Err(ShiftError::DepthCapExceeded { depth: n, cap });
    }
    let k = sys.k();
    let asize = sys.alphabet_size();
    let rel = sys.relation();

    let mut stem: Vec<Vec<Vec<BigUint>>> = vec![vec![vec![BigUint::one(); asize]; k]];
    for m in 1..=n {
        let prev = &stem[m - 1];
        let mut layer = Vec::with_capacity(k);
        for j in 0..k {
            let mut per_symbol = Vec::with_capacity(asize);
            for a in 0..asize {
                let mut count = BigUint::one();
                for l in 0..k {
                    if rel.get(j, l) {
                        count *= child_sum(sys.transition(l), a, &prev[l]);
                    }
                }
                per_symbol.push(count);
            }
            layer.push(per_symbol);
        }
        stem.push(layer);
    }

    let (ball, branch) = if with_ball {
        let mut ball = vec![vec![BigUint::one(); asize]];
        let mut branch = vec![vec![vec![BigUint::one(); asize]; k]];
        for m in 1..=n {
            let prev = &stem[m - 1];
            let mut q_layer = Vec::with_capacity(k);
            for i in 0..k {
                q_layer.push(
                    (0..asize)
                        .map(|a| child_sum(sys.transition(i), a, &prev[i]))
                        .collect::<Vec<_>>(),
                );
            }
            ball.push(
                (0..asize)
                    .map(|a| (0..k).map(|i| q_layer[i][a].clone()).product())
                    .collect(),
            );
            branch.push(q_layer);
        }
        (Some(ball), Some(branch))
    } else {
        (None, None)
    };

    Ok(ExactCountTable {
        depth: n,
        k,
        alphabet_size: asize,
        stem,
        ball,
        branch,
    })
}

fn child_sum(a_mat: &BinaryMatrix, a: usize, child_counts: &[BigUint]) -> BigUint {
    child_counts
        .iter()
        .enumerate()
        .filter(|&(b, _)| a_mat.get(a, b))
        .map(|(_, c)| c)
        .sum()
}

/// Independent oracle: build each support tree explicitly, enumerate all
/// symbol assignments by backtracking, and count the admissible ones.
/// Never uses the product recursion.
pub fn brute_force_counts(sys: &MarkovSystem, n: usize) -> Result<ExactCountTable, ShiftError> {
    let k = sys.k();
    let asize = sys.alphabet_size();
    let geo = BallGeometry::new(sys.relation().clone());
    let node_count = geo.ball_size(n).to_f64().unwrap_or(f64::INFINITY);
    let state_bits = node_count * (asize as f64).log2();
    if state_bits > ORACLE_STATE_BITS {
        return Err(ShiftError::OracleTooLarge {
            bits: state_bits,
            limit: ORACLE_STATE_BITS,
        });
    }

    let mut stem = Vec::with_capacity(n + 1);
    let mut ball = Vec::with_capacity(n + 1);
    let mut branch = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut stem_layer = Vec::with_capacity(k);
        for j in 0..k {
            let tree = Tree::semiball(sys.relation(), j, m);
            stem_layer.push(tree.count_per_root_symbol(sys));
        }
        stem.push(stem_layer);

        ball.push(Tree::ball(sys.relation(), m).count_per_root_symbol(sys));

        let mut branch_layer = Vec::with_capacity(k);
        for i in 0..k {
            if m == 0 {
                branch_layer.push(vec![BigUint::one(); asize]);
            } else {
                branch_layer.push(Tree::branch(sys.relation(), i, m).count_per_root_symbol(sys));
            }
        }
        branch.push(branch_layer);
    }

    Ok(ExactCountTable {
        depth: n,
        k,
        alphabet_size: asize,
        stem,
        ball: Some(ball),
        branch: Some(branch),
    })
}

/// An explicit finite subtree of the Cayley tree. Node 0 is the root;
/// parents precede children. `gen[v]` is the generator labeling the edge
/// into `v` (`None` only for a root at the identity).
struct Tree {
    gen: Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
}

impl Tree {
    fn new_root(gen: Option<usize>) -> Self {
        Self {
            gen: vec![gen],
            parent: vec![None],
        }
    }

    fn push_child(&mut self, parent: usize, gen: usize) -> usize {
        self.gen.push(Some(gen));
        self.parent.push(Some(parent));
        self.gen.len() - 1
    }

    /// Grow all continuations allowed by `K` below `node` to `depth` more
    /// levels.
    fn grow(&mut self, rel: &RelationMatrix, node: usize, depth: usize) {
        if depth == 0 {
            return;
        }
        let g = self.gen[node].expect("grown nodes carry a generator");
        for l in 0..rel.k() {
            if rel.get(g, l) {
                let child = self.push_child(node, l);
                self.grow(rel, child, depth - 1);
            }
        }
    }

    /// Semiball of depth `m` rooted via generator `j`.
    fn semiball(rel: &RelationMatrix, j: usize, m: usize) -> Self {
        let mut tree = Self::new_root(Some(j));
        tree.grow(rel, 0, m);
        tree
    }

    /// Ball of depth `m` around the identity.
    fn ball(rel: &RelationMatrix, m: usize) -> Self {
        let mut tree = Self::new_root(None);
        if m > 0 {
            for i in 0..rel.k() {
                let child = tree.push_child(0, i);
                tree.grow(rel, child, m - 1);
            }
        }
        tree
    }

    /// Root plus the `s_i` branch of depth `m - 1` (the support of the
    /// branch counts `q^{(s_i)}_m`).
    fn branch(rel: &RelationMatrix, i: usize, m: usize) -> Self {
        debug_assert!(m >= 1);
        let mut tree = Self::new_root(None);
        let child = tree.push_child(0, i);
        tree.grow(rel, child, m - 1);
        tree
    }

    /// Count admissible labelings, bucketed by the root symbol. The edge
    /// into a child with generator `l` must satisfy `A_l(parent, child)`.
    fn count_per_root_symbol(&self, sys: &MarkovSystem) -> Vec<BigUint> {
        let asize = sys.alphabet_size();
        let mut counts = vec![0u64; asize];
        let mut labels = vec![0usize; self.gen.len()];
        self.enumerate(sys, 0, &mut labels, &mut counts);
        counts.into_iter().map(BigUint::from).collect()
    }

    fn enumerate(
        &self,
        sys: &MarkovSystem,
        node: usize,
        labels: &mut [usize],
        counts: &mut [u64],
    ) {
        if node == self.gen.len() {
            counts[labels[0]] += 1;
            return;
        }
        for a in 0..sys.alphabet_size() {
            if let Some(p) = self.parent[node] {
                let l = self.gen[node].expect("non-root node has a generator");
                if !sys.transition(l).get(labels[p], a) {
                    continue;
                }
            }
            labels[node] = a;
            self.enumerate(sys, node + 1, labels, counts);
        }
    }
}
