//! Normalized log-domain entropy recursions.
//!
//! Stem entropy iterates the per-generator semiball recursion; topological
//! entropy combines the generator states at the root ball; the full-tree
//! variant runs the d-ary recursion with a convergent series bracket. All
//! internal arithmetic is in natural log; results are converted to the
//! requested base at the end.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::BinaryMatrix;
use crate::shift::MarkovSystem;
use crate::util::log_sum_exp;

/// Hard iteration cap; the accumulators grow like entropy times semiball
/// size, which stays in double range up to here for the supported k.
pub const ITERATION_CAP: usize = 600;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogBase {
    #[serde(rename = "e")]
    E,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "10")]
    Ten,
}

impl LogBase {
    /// Natural log of the base, the conversion divisor.
    pub fn ln(self) -> f64 {
        match self {
            LogBase::E => 1.0,
            LogBase::Two => std::f64::consts::LN_2,
            LogBase::Ten => std::f64::consts::LN_10,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LogBase::E => "e",
            LogBase::Two => "2",
            LogBase::Ten => "10",
        }
    }
}

impl std::str::FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "e" => Ok(LogBase::E),
            "2" => Ok(LogBase::Two),
            "10" => Ok(LogBase::Ten),
            other => Err(format!("unknown log base {other:?}, expected e, 2 or 10")),
        }
    }
}

impl std::fmt::Display for LogBase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyOptions {
    pub max_iters: usize,
    /// Relative-change convergence threshold.
    pub eps: f64,
    /// Absolute threshold declaring the value zero.
    pub eps_zero: f64,
    pub base: LogBase,
}

impl Default for EntropyOptions {
    fn default() -> Self {
        Self {
            max_iters: 300,
            eps: 1e-13,
            eps_zero: 1e-13,
            base: LogBase::Ten,
        }
    }
}

/// One iteration of a run: per-generator estimates `h^{(s_j)}_n`, their
/// spread, the total-count upper envelope, and for topological runs the
/// root-ball estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub n: usize,
    pub h: Vec<f64>,
    pub spread: f64,
    pub envelope: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root: Option<f64>,
}

/// Partial sum of the full-tree series with its tail bound; the entropy
/// lies in `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesBracket {
    pub n_terms: usize,
    pub lower: f64,
    pub upper: f64,
}

impl SeriesBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyEstimate {
    pub value: f64,
    pub base: LogBase,
    pub per_generator: Vec<f64>,
    pub trace: Vec<TraceRow>,
    pub converged: bool,
    pub iterations_used: usize,
    pub upper_envelope: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<Vec<SeriesBracket>>,
}

impl EntropyEstimate {
    /// Max pairwise spread of the final per-generator values.
    pub fn final_spread(&self) -> f64 {
        spread(&self.per_generator)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntropyError {
    #[error("shift is empty: counts in direction s_{} vanish at depth {depth}", generator + 1)]
    EmptyShift { generator: usize, depth: usize },
    #[error("no convergence within {} iterations", .0.iterations_used)]
    NoConvergence(Box<EntropyEstimate>),
    #[error("need at least one transition matrix")]
    NoMatrices,
    #[error("transition matrices have mixed dimensions")]
    MixedDimensions,
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    if values.is_empty() {
        0.0
    } else {
        max - min
    }
}

/// Stopping test on one scalar sequence: small relative change or a
/// value that is numerically zero.
fn settled(prev: f64, cur: f64, opts: &EntropyOptions) -> bool {
    (cur - prev).abs() < opts.eps * prev.abs() || cur.abs() < opts.eps_zero
}

fn iteration_budget(opts: &EntropyOptions) -> usize {
    opts.max_iters.min(ITERATION_CAP)
}

/// Per-generator log-domain state: `ell[j][a] = log p^(s_j)_(n;a) - t[j]`
/// normalized to max 0, `t[j] = log max_a p^(s_j)_(n;a)`, and the f64
/// level/size counters of the semiballs.
struct StemState<'a> {
    sys: &'a MarkovSystem,
    n: usize,
    ell: Vec<Vec<f64>>,
    t: Vec<f64>,
    level: Vec<f64>,
    size: Vec<f64>,
}

impl<'a> StemState<'a> {
    fn new(sys: &'a MarkovSystem) -> Self {
        let k = sys.k();
        let asize = sys.alphabet_size();
        Self {
            sys,
            n: 0,
            ell: vec![vec![0.0; asize]; k],
            t: vec![0.0; k],
            level: vec![1.0; k],
            size: vec![1.0; k],
        }
    }

    /// `log sum_b A_i(a,b) p^(s_i)_(n;b)` minus the accumulator `t[i]`.
    fn child_lse(&self, i: usize, a: usize) -> f64 {
        let a_mat = self.sys.transition(i);
        let terms: Vec<f64> = self.ell[i]
            .iter()
            .enumerate()
            .filter(|&(b, _)| a_mat.get(a, b))
            .map(|(_, &l)| l)
            .collect();
        log_sum_exp(&terms)
    }

    fn step(&mut self) -> Result<(), EntropyError> {
        let k = self.sys.k();
        let asize = self.sys.alphabet_size();
        let rel = self.sys.relation();
        let mut new_ell = Vec::with_capacity(k);
        let mut new_t = Vec::with_capacity(k);
        for j in 0..k {
            let mut v = vec![0.0; asize];
            for (a, entry) in v.iter_mut().enumerate() {
                for l in 0..k {
                    if rel.get(j, l) {
                        *entry += self.child_lse(l, a);
                    }
                }
            }
            let log_r = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if log_r == f64::NEG_INFINITY {
                return Err(EntropyError::EmptyShift {
                    generator: j,
                    depth: self.n + 1,
                });
            }
            for entry in v.iter_mut() {
                *entry -= log_r;
            }
            let mut t = log_r;
            for l in 0..k {
                if rel.get(j, l) {
                    t += self.t[l];
                }
            }
            new_ell.push(v);
            new_t.push(t);
        }
        self.ell = new_ell;
        self.t = new_t;
        let new_level: Vec<f64> = (0..k)
            .map(|j| (0..k).filter(|&l| rel.get(j, l)).map(|l| self.level[l]).sum())
            .collect();
        for j in 0..k {
            self.size[j] += new_level[j];
        }
        self.level = new_level;
        self.n += 1;
        Ok(())
    }

    /// `h^(s_j)_n = t / |semiball|` per generator, natural log.
    fn h(&self) -> Vec<f64> {
        (0..self.sys.k()).map(|j| self.t[j] / self.size[j]).collect()
    }

    /// Total-count envelope entry `max_j log p^(s_j)_n / |semiball_j|`.
    fn envelope(&self) -> f64 {
        (0..self.sys.k())
            .map(|j| (self.t[j] + log_sum_exp(&self.ell[j])) / self.size[j])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Root-ball estimate `log max_a p_(n+1;a) / |Delta_(n+1)|` combining
    /// the current per-generator states one level below the root.
    fn root_h(&self) -> f64 {
        let k = self.sys.k();
        let asize = self.sys.alphabet_size();
        let mut best = f64::NEG_INFINITY;
        for a in 0..asize {
            let v: f64 = (0..k).map(|i| self.child_lse(i, a)).sum();
            best = best.max(v);
        }
        let t_root: f64 = best + self.t.iter().sum::<f64>();
        let ball: f64 = 1.0 + self.size.iter().sum::<f64>();
        t_root / ball
    }
}

fn convert(est: &mut EntropyEstimate, base: LogBase) {
    let d = base.ln();
    est.value /= d;
    for v in &mut est.per_generator {
        *v /= d;
    }
    for row in &mut est.trace {
        for h in &mut row.h {
            *h /= d;
        }
        row.spread /= d;
        row.envelope /= d;
        if let Some(r) = &mut row.root {
            *r /= d;
        }
    }
    for e in &mut est.upper_envelope {
        *e /= d;
    }
    if let Some(series) = &mut est.series {
        for b in series {
            b.lower /= d;
            b.upper /= d;
        }
    }
    est.base = base;
}

fn run_cayley(
    sys: &MarkovSystem,
    opts: &EntropyOptions,
    root_mode: bool,
) -> Result<EntropyEstimate, EntropyError> {
    let mut state = StemState::new(sys);
    let budget = iteration_budget(opts);

    let mut trace = Vec::new();
    let mut envelope_seq = Vec::new();
    let h0 = state.h();
    let e0 = state.envelope();
    envelope_seq.push(e0);
    trace.push(TraceRow {
        n: 0,
        spread: spread(&h0),
        h: h0.clone(),
        envelope: e0,
        root: root_mode.then(|| 0.0),
    });

    let mut prev_h = h0;
    let mut prev_root = 0.0;
    let mut converged = false;
    let mut iterations_used = 0;

    for n in 1..=budget {
        // The root ball of radius n is the root plus k semiballs of
        // radius n - 1, so it is derived before stepping the state.
        let root = root_mode.then(|| state.root_h());
        state.step()?;
        let h = state.h();
        let env = state.envelope();
        envelope_seq.push(env);
        trace.push(TraceRow {
            n,
            spread: spread(&h),
            h: h.clone(),
            envelope: env,
            root,
        });
        iterations_used = n;

        let done = if root_mode {
            let root = root.expect("root mode");
            let ok = n > 1 && settled(prev_root, root, opts);
            prev_root = root;
            ok
        } else {
            h.iter()
                .zip(prev_h.iter())
                .all(|(&cur, &prev)| settled(prev, cur, opts))
        };
        prev_h = h;
        if done {
            converged = true;
            break;
        }
    }

    let value = if root_mode {
        trace
            .last()
            .and_then(|row| row.root)
            .expect("trace is nonempty")
    } else {
        prev_h.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    };
    let mut est = EntropyEstimate {
        value,
        base: LogBase::E,
        per_generator: prev_h,
        trace,
        converged,
        iterations_used,
        upper_envelope: envelope_seq,
        series: None,
    };
    convert(&mut est, opts.base);
    if est.converged {
        Ok(est)
    } else {
        Err(EntropyError::NoConvergence(Box::new(est)))
    }
}

/// Stem entropy of a Markov tree shift: per-generator limits of
/// `log max_a p^(s_j)_(n;a) / |semiball_j(n)|`, joint convergence.
pub fn stem_entropy(
    sys: &MarkovSystem,
    opts: &EntropyOptions,
) -> Result<EntropyEstimate, EntropyError> {
    run_cayley(sys, opts, false)
}

/// Topological entropy over the Cayley tree: the stem recursion combined
/// at the root ball, `log max_a p_(n;a) / |Delta_n|`.
pub fn topological_entropy_cayley(
    sys: &MarkovSystem,
    opts: &EntropyOptions,
) -> Result<EntropyEstimate, EntropyError> {
    run_cayley(sys, opts, true)
}

/// Upper envelope `max_j log p^(s_j)_n / |semiball_j(n)|` for n up to
/// `n_max`; its infimum over n is the stem entropy.
pub fn stem_upper_envelope(
    sys: &MarkovSystem,
    n_max: usize,
    base: LogBase,
) -> Result<Vec<f64>, EntropyError> {
    let mut state = StemState::new(sys);
    let mut out = vec![state.envelope() / base.ln()];
    for _ in 1..=n_max {
        state.step()?;
        out.push(state.envelope() / base.ln());
    }
    Ok(out)
}

/// Topological entropy of a Markov tree shift on the full d-ary tree,
/// one matrix per child direction, with the series bracket when all
/// matrices coincide and are essential.
pub fn fulltree_entropy(
    matrices: &[BinaryMatrix],
    opts: &EntropyOptions,
) -> Result<EntropyEstimate, EntropyError> {
    let d = matrices.len();
    if d == 0 {
        return Err(EntropyError::NoMatrices);
    }
    let asize = matrices[0].dim();
    if matrices.iter().any(|m| m.dim() != asize) {
        return Err(EntropyError::MixedDimensions);
    }
    let essential_hom = matrices.windows(2).all(|w| w[0] == w[1])
        && (0..asize).all(|a| (0..asize).any(|b| matrices[0].get(a, b)))
        && (0..asize).all(|b| (0..asize).any(|a| matrices[0].get(a, b)));
    let with_series = essential_hom && d >= 2;
    let log_asize = (asize as f64).ln();

    let budget = iteration_budget(opts);
    let mut ell = vec![0.0f64; asize];
    let mut t = 0.0f64;
    let mut ball = 1.0f64;
    let mut d_pow = 1.0f64; // d^n
    let mut partial = 0.0f64; // sum of log r_m (d-1)/d^(m+1), log r_0 = 0

    let mut trace = vec![TraceRow {
        n: 0,
        h: vec![0.0],
        spread: 0.0,
        envelope: log_asize,
        root: None,
    }];
    let mut envelope_seq = vec![log_asize];
    let mut series = with_series.then(|| {
        vec![SeriesBracket {
            n_terms: 0,
            lower: 0.0,
            upper: log_asize, // tail at N = 0 is log|A|/d^0
        }]
    });

    let mut prev_h = 0.0;
    let mut converged = false;
    let mut iterations_used = 0;

    for n in 1..=budget {
        let mut v = vec![0.0f64; asize];
        for (a, entry) in v.iter_mut().enumerate() {
            for mat in matrices {
                let terms: Vec<f64> = ell
                    .iter()
                    .enumerate()
                    .filter(|&(b, _)| mat.get(a, b))
                    .map(|(_, &l)| l)
                    .collect();
                *entry += log_sum_exp(&terms);
            }
        }
        let log_r = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if log_r == f64::NEG_INFINITY {
            return Err(EntropyError::EmptyShift {
                generator: 0,
                depth: n,
            });
        }
        for entry in v.iter_mut() {
            *entry -= log_r;
        }
        ell = v;
        t = (d as f64) * t + log_r;
        d_pow *= d as f64;
        ball += d_pow;

        let h = t / ball;
        let env = (t + log_sum_exp(&ell)) / ball;
        envelope_seq.push(env);
        trace.push(TraceRow {
            n,
            h: vec![h],
            spread: 0.0,
            envelope: env,
            root: None,
        });
        if let Some(series) = &mut series {
            // (d-1)/d^(n+1) and the tail log|A|/d^n of the remark's
            // geometric bound.
            partial += log_r * (d as f64 - 1.0) / (d_pow * d as f64);
            series.push(SeriesBracket {
                n_terms: n,
                lower: partial,
                upper: partial + log_asize / d_pow,
            });
        }
        iterations_used = n;

        if settled(prev_h, h, opts) {
            prev_h = h;
            converged = true;
            break;
        }
        prev_h = h;
    }

    let mut est = EntropyEstimate {
        value: prev_h,
        base: LogBase::E,
        per_generator: vec![prev_h],
        trace,
        converged,
        iterations_used,
        upper_envelope: envelope_seq,
        series,
    };
    convert(&mut est, opts.base);
    if est.converged {
        Ok(est)
    } else {
        Err(EntropyError::NoConvergence(Box::new(est)))
    }
}
