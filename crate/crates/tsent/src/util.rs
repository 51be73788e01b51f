//! Small numeric helpers shared across modules.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Natural log of a nonnegative big integer; `-inf` for zero. Exact to
/// f64 precision regardless of magnitude.
pub fn big_ln(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().expect("53-bit mantissa");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `a / b` as f64 for big integers of arbitrary magnitude.
pub fn big_ratio(a: &BigUint, b: &BigUint) -> f64 {
    (big_ln(a) - big_ln(b)).exp()
}

/// `log(sum exp(x))` over a slice, stable against underflow; `-inf` for an
/// empty or all `-inf` input.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}
