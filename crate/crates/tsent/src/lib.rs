//! Stem and topological entropy of Markov tree shifts on Cayley trees.
//!
//! A finitely generated semigroup `G = <S_k | K>` with a binary relation
//! matrix `K` spans a Cayley tree; a Markov tree shift constrains tree
//! labelings by one transition matrix per generator. This crate computes
//! the stem entropy (per-generator semiball growth) and the topological
//! entropy (ball growth) of such shifts with normalized log-domain
//! recursions, cross-checks the counting recursions against exact big
//! integer and brute-force oracles, and issues machine-checked
//! certificates for the known sufficient conditions under which these
//! entropies exist and coincide.
//!
//! Start with [`shift::MarkovSystem`] to describe a system, then
//! [`entropy::stem_entropy`], [`entropy::topological_entropy_cayley`] or
//! [`entropy::fulltree_entropy`] for estimates, and
//! [`mixing::existence_certificate`] for the structural analysis. The
//! `examples/` directory walks through each capability; the `tsent`
//! binary exposes the same operations over JSON configs.

pub mod cayley;
pub mod cli;
pub mod entropy;
pub mod matrix;
pub mod mixing;
pub mod shift;
pub mod util;

#[cfg(test)]
pub(crate) mod testutil;

pub use cayley::{BallGeometry, CayleyError, RelationMatrix};
pub use entropy::{
    fulltree_entropy, stem_entropy, stem_upper_envelope, topological_entropy_cayley,
    EntropyEstimate, EntropyError, EntropyOptions, LogBase,
};
pub use matrix::{BinaryMatrix, MatrixError};
pub use mixing::{
    build_graph_representation, existence_certificate, find_pivot, is_strongly_connected,
    Certificate, CertificateKind, GraphRep, Pivot,
};
pub use shift::{
    brute_force_counts, classify, exact_ball_counts, exact_stem_counts, extend_with_transposes,
    Classification, ExactCountTable, MarkovSystem, ShiftError,
};
