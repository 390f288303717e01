//! The discrete analytic polynomials `ζ_n`, built two ways: by repeated
//! analytic extension from the axis, and as Taylor coefficients of
//! `e_{x,y}(z) = (1+z)^x ((1+i+iz)/(1+i+z))^y`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{
    difference_1d, falling_row, joint_primitive, poly1_to_factorial, BasisTag, CoefficientSeries,
    CoefficientSeries2,
};
use crate::error::{Error, Result};
use crate::lattice::{LatticeFunction, Window};
use crate::numeric::{factorials, ln_factorial, GaussianRational, Poly1, Poly2, TruncatedSeries};

fn half_one_minus_i() -> GaussianRational {
    GaussianRational::from_fractions(1, 2, -1, 2)
}

/// One extension step. Given the analytic extension `f` of `δp` and the
/// constant `p(0)`, returns the analytic `q` with `δ_x q = f`, `q(0,0) = p(0)`.
fn extension_step(f: &CoefficientSeries2, p0: &GaussianRational) -> CoefficientSeries2 {
    // D̄q = 0 with δ_x q = f forces δ_y q = i f − ((1−i)/2) δ_y f.
    let g = f.scale(&GaussianRational::i()).sub(&f.delta_y().scale(&half_one_minus_i()));
    let h = joint_primitive(f, &g).expect("δ_y f = δ_x g holds for analytic f");
    let mut q = h.clone();
    q.add_term(0, 0, &-h.get(0, 0));
    q.add_term(0, 0, p0);
    q
}

fn extend_factorial(c: &CoefficientSeries) -> CoefficientSeries2 {
    if c.len() <= 1 {
        return CoefficientSeries2::from_factorial_x(c);
    }
    let f = extend_factorial(&difference_1d(c));
    extension_step(&f, &c.coeff(0))
}

/// The unique discrete analytic polynomial `q` with `q(x, 0) = p(x)`.
pub fn extend_polynomial(p: &Poly1) -> Poly2 {
    extend_factorial(&poly1_to_factorial(p)).to_poly2()
}

/// Same as [`extend_polynomial`], with input and output in the factorial basis.
pub fn extend_factorial_series(c: &CoefficientSeries) -> CoefficientSeries2 {
    extend_factorial(c)
}

/// `ζ_0, …, ζ_N` with their values on a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaTable {
    max_degree: usize,
    window: Window,
    values: Vec<LatticeFunction>,
    polys: Vec<Poly2>,
    #[serde(skip)]
    factorial: Vec<CoefficientSeries2>,
}

impl ZetaTable {
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    /// Values of `ζ_n` on the window.
    pub fn values(&self, n: usize) -> &LatticeFunction {
        &self.values[n]
    }

    pub fn value(&self, n: usize, x: i64, y: i64) -> Result<&GaussianRational> {
        self.values
            .get(n)
            .ok_or(Error::TableTooSmall { required: n, available: self.max_degree })?
            .get(x, y)
    }

    /// `ζ_n` in monomials `x^a y^b`.
    pub fn poly(&self, n: usize) -> &Poly2 {
        &self.polys[n]
    }

    pub fn polys(&self) -> &[Poly2] {
        &self.polys
    }

    /// `ζ_n` in the factorial basis `x^[m] y^[k]`.
    pub fn factorial_coeffs(&self, n: usize) -> CoefficientSeries2 {
        self.factorial
            .get(n)
            .cloned()
            .unwrap_or_else(|| CoefficientSeries2::from_poly2(&self.polys[n]))
    }

    /// Rows `(n, x, y, value)` in table order.
    pub fn rows(&self) -> impl Iterator<Item = (usize, i64, i64, &GaussianRational)> {
        self.values.iter().enumerate().flat_map(|(n, f)| {
            f.window().points().zip(f.values()).map(move |((x, y), v)| (n, x, y, v))
        })
    }
}

/// `ζ_n = extend(x^[n])` for `n ≤ N`. Since `δ x^[n] = n x^[n−1]`, each step
/// reuses the previous polynomial as the extension of the difference.
pub fn zeta_by_extension(max_degree: usize, w: &Window) -> ZetaTable {
    let mut factorial = Vec::with_capacity(max_degree + 1);
    factorial.push(CoefficientSeries2::unit(0, 0));
    for n in 1..=max_degree {
        let f = factorial[n - 1].scale(&GaussianRational::from(n as i64));
        factorial.push(extension_step(&f, &GaussianRational::zero()));
    }
    let (values, polys): (Vec<_>, Vec<_>) =
        factorial.par_iter().map(|c| (c.eval_window(w), c.to_poly2())).unzip();
    ZetaTable { max_degree, window: *w, values, polys, factorial }
}

/// `(1+z)^k` to order `N`: binomial coefficients for `k ≥ 0`, powers of the
/// geometric series otherwise.
fn one_plus_z_pow(k: i64, order: usize) -> TruncatedSeries {
    if k >= 0 {
        let facts = factorials(order);
        let row = falling_row(k, order);
        let coeffs = row
            .into_iter()
            .zip(facts)
            .map(|(f, nf)| GaussianRational::real(BigRational::new(f, nf)))
            .collect();
        TruncatedSeries::new(coeffs, order)
    } else {
        let one = GaussianRational::one();
        TruncatedSeries::inverse_linear(&one, &one, order)
            .and_then(|s| s.powi(-k))
            .expect("1+z has a unit constant term")
    }
}

/// Taylor coefficients of `e_{x,y}` at `z = 0` through `z^N`; coefficient `n`
/// equals `ζ_n(x, y) / n!`.
pub fn exy_taylor(x: i64, y: i64, order: usize) -> CoefficientSeries {
    let a = GaussianRational::from_integers(1, 1);
    let first = one_plus_z_pow(x, order);
    let second = if y == 0 {
        TruncatedSeries::one(order)
    } else {
        // (1+i+iz)/(1+i+z) or its reciprocal, each as numerator × geometric series.
        let (num, den) = if y > 0 {
            ((a.clone(), GaussianRational::i()), (a.clone(), GaussianRational::one()))
        } else {
            ((a.clone(), GaussianRational::one()), (a.clone(), GaussianRational::i()))
        };
        let base = TruncatedSeries::new(vec![num.0, num.1], order).mul(
            &TruncatedSeries::inverse_linear(&den.0, &den.1, order).expect("1+i is nonzero"),
        );
        base.powi(y.abs()).expect("nonnegative power")
    };
    CoefficientSeries::new(BasisTag::Monomial, first.mul(&second).into_coeffs())
}

/// `ζ_n(x, y)` for `n ≤ N` from the Taylor route.
pub fn zeta_point_by_taylor(x: i64, y: i64, max_degree: usize) -> Vec<GaussianRational> {
    let facts = factorials(max_degree);
    let c = exy_taylor(x, y, max_degree);
    (0..=max_degree).map(|n| c.coeff(n) * GaussianRational::from(facts[n].clone())).collect()
}

/// Values of `ζ_0, …, ζ_N` on a window from the Taylor route, one series per point.
pub fn zeta_values_by_taylor(max_degree: usize, w: &Window) -> Vec<LatticeFunction> {
    let points: Vec<(i64, i64)> = w.points().collect();
    let per_point: Vec<Vec<GaussianRational>> =
        points.par_iter().map(|&(x, y)| zeta_point_by_taylor(x, y, max_degree)).collect();
    (0..=max_degree)
        .map(|n| {
            let vals = per_point.iter().map(|col| col[n].clone()).collect();
            LatticeFunction::new(*w, vals).expect("one value per window point")
        })
        .collect()
}

/// Cauchy–Hadamard estimate `max_{N/2 ≤ n ≤ N} (|ζ_n(x,y)| / n!)^{1/n}`.
///
/// Tends to `1/√2` for `y ≠ 0`. On the half-axis `y = 0, x ≥ 0` the series
/// terminates and there is nothing to estimate.
pub fn growth_rate(x: i64, y: i64, max_degree: usize) -> Result<f64> {
    if y == 0 && x >= 0 {
        return Err(Error::GrowthUndefined(format!(
            "e_{{{x},0}} is a polynomial; its coefficients vanish beyond n = {x}"
        )));
    }
    if max_degree < 20 {
        return Err(Error::InvalidArgument(format!("growth_rate needs N >= 20, got {max_degree}")));
    }
    let c = exy_taylor(x, y, max_degree);
    let lo = max_degree.div_ceil(2).max(1);
    let est = (lo..=max_degree)
        .filter(|&n| !c.coeff(n).is_zero())
        .map(|n| (c.coeff(n).ln_abs() / n as f64).exp())
        .fold(0.0f64, f64::max);
    Ok(est)
}

/// `ln(|ζ_n(x,y)| / n!)`, for callers that want the raw sequence.
pub fn log_coefficient(value: &GaussianRational, n: usize) -> f64 {
    value.ln_abs() - ln_factorial(n)
}

/// `n!` as a Gaussian rational, handy when normalizing `e_n = ζ_n / n!`.
pub fn factorial_gr(n: usize) -> GaussianRational {
    GaussianRational::from((1..=n).fold(BigInt::one(), |a, k| a * k))
}
