//! Exact arithmetic: Gaussian rationals, univariate and bivariate
//! polynomials, and truncated power series over ℚ(i).

mod gaussian;
mod poly1;
mod poly2;
mod series;

pub use gaussian::{gr, gr_string, ln_ratio, ratio_to_f64, GaussianRational};
pub use poly1::Poly1;
pub use poly2::Poly2;
pub use series::TruncatedSeries;

use num_bigint::BigInt;
use num_traits::One;

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `n!` for every `n ≤ max`.
pub fn factorials(max: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(max + 1);
    let mut acc = BigInt::one();
    out.push(acc.clone());
    for k in 1..=max {
        acc *= k;
        out.push(acc.clone());
    }
    out
}

/// `ln n!` in floating point.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}
