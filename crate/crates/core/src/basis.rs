//! The factorial basis `x^[n] = x(x-1)…(x-n+1)` and the transform
//! `f̂(n) = (δⁿf)(0) / n!` on ℤ₊ and ℤ₊², with its inverse and the
//! antidifference constructions built on it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeFunction, Window};
use crate::numeric::{factorials, gr_string, GaussianRational, Poly1, Poly2};

/// Which basis a coefficient sequence refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisTag {
    /// `x^[n]` on ℤ₊.
    FactorialX,
    /// The discrete analytic polynomials `ζ_n`.
    Zeta,
    /// Ordinary powers `zⁿ`.
    Monomial,
}

/// Coefficients `c_0, c_1, …` in a fixed basis, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientSeries {
    basis: BasisTag,
    #[serde(with = "gr_string::vec")]
    coeffs: Vec<GaussianRational>,
}

impl CoefficientSeries {
    pub fn new(basis: BasisTag, mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { basis, coeffs }
    }

    pub fn zero(basis: BasisTag) -> Self {
        Self { basis, coeffs: Vec::new() }
    }

    /// Indicator of index `n`.
    pub fn unit(basis: BasisTag, n: usize) -> Self {
        let mut coeffs = vec![GaussianRational::zero(); n + 1];
        coeffs[n] = GaussianRational::one();
        Self { basis, coeffs }
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    /// Same coefficients read in another basis.
    pub fn retag(self, basis: BasisTag) -> Self {
        Self { basis, ..self }
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> GaussianRational {
        self.coeffs.get(n).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the last nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Keeps the coefficients of index `≤ n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.basis, self.coeffs.iter().take(n + 1).cloned().collect())
    }
}

/// `x^[n]` as an ordinary polynomial.
pub fn factorial_poly(n: usize) -> Poly1 {
    (0..n).fold(Poly1::constant(GaussianRational::one()), |acc, j| {
        &acc * &Poly1::from_integers(&[-(j as i64), 1])
    })
}

/// `x^[n]` at an integer point.
pub fn falling(x: i64, n: usize) -> BigInt {
    (0..n as i64).fold(BigInt::one(), |acc, j| acc * (x - j))
}

/// `x^[0], …, x^[n]` at an integer point.
pub fn falling_row(x: i64, n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = BigInt::one();
    for j in 0..=n {
        out.push(acc.clone());
        acc *= x - j as i64;
    }
    out
}

/// Stirling numbers of the second kind `S(k, j)` for `k, j ≤ n`.
fn stirling2(n: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
    s[0][0] = BigInt::one();
    for k in 1..=n {
        for j in 1..=k {
            s[k][j] = &s[k - 1][j - 1] + &s[k - 1][j] * j;
        }
    }
    s
}

/// Transform of samples `f(0), …, f(N)`: coefficient `n` is `(δⁿf)(0) / n!`.
///
/// Computed by iterated forward differences, `O(N²)` exact operations.
pub fn fourier_1d(values: &[GaussianRational]) -> CoefficientSeries {
    let facts = factorials(values.len());
    let mut work = values.to_vec();
    let mut coeffs = Vec::with_capacity(values.len());
    for n in 0..values.len() {
        let inv = BigRational::new(BigInt::one(), facts[n].clone());
        coeffs.push(work[0].scale(&inv));
        for k in 0..work.len() - 1 {
            work[k] = &work[k + 1] - &work[k];
        }
        work.pop();
    }
    CoefficientSeries::new(BasisTag::FactorialX, coeffs)
}

/// `Σ_n c_n x^[n]`; at most `x + 1` terms are nonzero for `x ∈ ℤ₊`.
pub fn inverse_fourier_1d(c: &CoefficientSeries, x: u64) -> GaussianRational {
    let top = c.len().min(x as usize + 1);
    let row = falling_row(x as i64, top.saturating_sub(1));
    c.coeffs()[..top]
        .iter()
        .zip(row)
        .map(|(a, f)| a * &GaussianRational::from(f))
        .sum()
}

/// Evaluates a factorial-basis series at any integer, negative ones included.
pub fn eval_factorial_series(c: &CoefficientSeries, x: i64) -> GaussianRational {
    if c.is_empty() {
        return GaussianRational::zero();
    }
    let row = falling_row(x, c.len() - 1);
    c.coeffs().iter().zip(row).map(|(a, f)| a * &GaussianRational::from(f)).sum()
}

/// `g` with `δg = f` and `g(0) = 0`: coefficient `n+1` of `g` is `f̂(n) / (n+1)`.
pub fn antidifference_1d(f: &CoefficientSeries) -> CoefficientSeries {
    let mut coeffs = Vec::with_capacity(f.len() + 1);
    coeffs.push(GaussianRational::zero());
    for (n, c) in f.coeffs().iter().enumerate() {
        coeffs.push(c.scale(&BigRational::new(BigInt::one(), BigInt::from(n + 1))));
    }
    CoefficientSeries::new(BasisTag::FactorialX, coeffs)
}

/// Forward difference of a factorial-basis series: `δ x^[n] = n x^[n-1]`.
pub fn difference_1d(f: &CoefficientSeries) -> CoefficientSeries {
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| c.scale_int(n as i64))
        .collect();
    CoefficientSeries::new(f.basis(), coeffs)
}

/// Ordinary polynomial → factorial-basis coefficients.
pub fn poly1_to_factorial(p: &Poly1) -> CoefficientSeries {
    let Some(d) = p.degree() else {
        return CoefficientSeries::zero(BasisTag::FactorialX);
    };
    let s = stirling2(d);
    let mut out = vec![GaussianRational::zero(); d + 1];
    for (k, c) in p.coeffs().iter().enumerate() {
        for (j, sk) in s[k].iter().enumerate().take(k + 1) {
            if !sk.is_zero() {
                out[j] += &(c * &GaussianRational::from(sk.clone()));
            }
        }
    }
    CoefficientSeries::new(BasisTag::FactorialX, out)
}

/// Factorial-basis coefficients → ordinary polynomial.
pub fn factorial_to_poly1(c: &CoefficientSeries) -> Poly1 {
    c.coeffs()
        .iter()
        .enumerate()
        .fold(Poly1::zero(), |acc, (n, a)| &acc + &factorial_poly(n).scale(a))
}

/// Coefficients `f̂(m, n)` of `x^[m] y^[n]`, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoefficientSeries2 {
    coeffs: BTreeMap<(usize, usize), GaussianRational>,
}

impl CoefficientSeries2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(m: usize, n: usize) -> Self {
        let mut s = Self::zero();
        s.add_term(m, n, &GaussianRational::one());
        s
    }

    pub fn add_term(&mut self, m: usize, n: usize, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry((m, n)).or_insert_with(GaussianRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&(m, n));
        }
    }

    pub fn get(&self, m: usize, n: usize) -> GaussianRational {
        self.coeffs.get(&(m, n)).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &GaussianRational)> {
        self.coeffs.iter().map(|(&k, v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|&(m, n)| m + n).max()
    }

    pub fn max_m(&self) -> Option<usize> {
        self.coeffs.keys().map(|&(m, _)| m).max()
    }

    pub fn max_n(&self) -> Option<usize> {
        self.coeffs.keys().map(|&(_, n)| n).max()
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        let mut out = Self::zero();
        for (&(m, n), c) in &self.coeffs {
            out.add_term(m, n, &(c * k));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(m, n), c) in &other.coeffs {
            out.add_term(m, n, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-GaussianRational::one()))
    }

    /// `δ_x (x^[m] y^[n]) = m x^[m-1] y^[n]`.
    pub fn delta_x(&self) -> Self {
        let mut out = Self::zero();
        for (&(m, n), c) in &self.coeffs {
            if m > 0 {
                out.add_term(m - 1, n, &c.scale_int(m as i64));
            }
        }
        out
    }

    /// `δ_y (x^[m] y^[n]) = n x^[m] y^[n-1]`.
    pub fn delta_y(&self) -> Self {
        let mut out = Self::zero();
        for (&(m, n), c) in &self.coeffs {
            if n > 0 {
                out.add_term(m, n - 1, &c.scale_int(n as i64));
            }
        }
        out
    }

    pub fn eval(&self, x: i64, y: i64) -> GaussianRational {
        let xs = falling_row(x, self.max_m().unwrap_or(0));
        let ys = falling_row(y, self.max_n().unwrap_or(0));
        self.eval_with_rows(&xs, &ys)
    }

    fn eval_with_rows(&self, xs: &[BigInt], ys: &[BigInt]) -> GaussianRational {
        self.coeffs
            .iter()
            .map(|(&(m, n), c)| c * &GaussianRational::from(&xs[m] * &ys[n]))
            .sum()
    }

    /// Values on a window, reusing the falling-factorial rows per coordinate.
    pub fn eval_window(&self, w: &Window) -> LatticeFunction {
        let dm = self.max_m().unwrap_or(0);
        let dn = self.max_n().unwrap_or(0);
        let xrows: Vec<Vec<BigInt>> = (w.x_min..=w.x_max).map(|x| falling_row(x, dm)).collect();
        let yrows: Vec<Vec<BigInt>> = (w.y_min..=w.y_max).map(|y| falling_row(y, dn)).collect();
        LatticeFunction::from_fn(*w, |x, y| {
            self.eval_with_rows(&xrows[(x - w.x_min) as usize], &yrows[(y - w.y_min) as usize])
        })
    }

    /// Restriction to `y = 0`, as a factorial-basis series in `x`.
    pub fn restrict_y0(&self) -> CoefficientSeries {
        let d = self.max_m().unwrap_or(0);
        CoefficientSeries::new(BasisTag::FactorialX, (0..=d).map(|m| self.get(m, 0)).collect())
    }

    pub fn from_factorial_x(c: &CoefficientSeries) -> Self {
        let mut out = Self::zero();
        for (m, v) in c.coeffs().iter().enumerate() {
            out.add_term(m, 0, v);
        }
        out
    }

    /// Expands into ordinary monomials `x^a y^b`.
    pub fn to_poly2(&self) -> Poly2 {
        let xs: Vec<Poly1> = (0..=self.max_m().unwrap_or(0)).map(factorial_poly).collect();
        let ys: Vec<Poly1> = (0..=self.max_n().unwrap_or(0)).map(factorial_poly).collect();
        let mut out = Poly2::zero();
        for (&(m, n), c) in &self.coeffs {
            for (a, ca) in xs[m].coeffs().iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                let cca = c * ca;
                for (b, cb) in ys[n].coeffs().iter().enumerate() {
                    if !cb.is_zero() {
                        out.add_term(a, b, &(&cca * cb));
                    }
                }
            }
        }
        out
    }

    /// Rewrites ordinary monomials in the factorial basis.
    pub fn from_poly2(p: &Poly2) -> Self {
        let d = p.degree_x().unwrap_or(0).max(p.degree_y().unwrap_or(0));
        let s = stirling2(d);
        let mut out = Self::zero();
        for ((a, b), c) in p.terms() {
            for j in 0..=a {
                if s[a][j].is_zero() {
                    continue;
                }
                let cj = c * &GaussianRational::from(s[a][j].clone());
                for k in 0..=b {
                    if !s[b][k].is_zero() {
                        out.add_term(j, k, &(&cj * &GaussianRational::from(s[b][k].clone())));
                    }
                }
            }
        }
        out
    }
}

/// Transform on a window anchored at the origin: first in `y` along each
/// column, then in `x` for each `y`-order.
pub fn fourier_2d(f: &LatticeFunction) -> Result<CoefficientSeries2> {
    let w = f.window();
    if w.x_min != 0 || w.y_min != 0 {
        return Err(Error::NotAnchored { x_min: w.x_min, y_min: w.y_min });
    }
    let columns: Vec<CoefficientSeries> = (0..=w.x_max)
        .map(|x| {
            let col: Vec<GaussianRational> =
                (0..=w.y_max).map(|y| f.get(x, y).cloned()).collect::<Result<_>>()?;
            Ok(fourier_1d(&col))
        })
        .collect::<Result<_>>()?;
    let mut out = CoefficientSeries2::zero();
    for n in 0..w.height() {
        let row: Vec<GaussianRational> = columns.iter().map(|c| c.coeff(n)).collect();
        for (m, c) in fourier_1d(&row).coeffs().iter().enumerate() {
            out.add_term(m, n, c);
        }
    }
    Ok(out)
}

/// Inverse transform: the values of `Σ f̂(m,n) x^[m] y^[n]` on `w`.
pub fn inverse_fourier_2d(c: &CoefficientSeries2, w: &Window) -> LatticeFunction {
    c.eval_window(w)
}

/// `h` with `δ_x h = f` and `δ_y h = g`, given `δ_y f = δ_x g`.
///
/// Compatibility is checked coefficientwise as
/// `(n+1) f̂(m, n+1) = (m+1) ĝ(m+1, n)`; then
/// `h = Σ f̂(m,n)/(m+1) x^[m+1] y^[n] + Σ ĝ(0,n)/(n+1) y^[n+1]`.
pub fn joint_primitive(f: &CoefficientSeries2, g: &CoefficientSeries2) -> Result<CoefficientSeries2> {
    let mm = f.max_m().unwrap_or(0).max(g.max_m().unwrap_or(0));
    let nn = f.max_n().unwrap_or(0).max(g.max_n().unwrap_or(0));
    for m in 0..=mm {
        for n in 0..=nn {
            let lhs = f.get(m, n + 1).scale_int(n as i64 + 1);
            let rhs = g.get(m + 1, n).scale_int(m as i64 + 1);
            if lhs != rhs {
                return Err(Error::Incompatible { m, n });
            }
        }
    }
    let mut h = CoefficientSeries2::zero();
    for ((m, n), c) in f.terms() {
        h.add_term(m + 1, n, &c.scale(&BigRational::new(BigInt::one(), BigInt::from(m + 1))));
    }
    for ((m, n), c) in g.terms() {
        if m == 0 {
            h.add_term(0, n + 1, &c.scale(&BigRational::new(BigInt::one(), BigInt::from(n + 1))));
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::gr;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<GaussianRational> {
        v.iter().map(|&k| gr(k, 0)).collect()
    }

    /// Brute-force oracle: the n-th forward difference at 0 from the binomial
    /// sum `Σ_k (-1)^{n-k} C(n,k) f(k)`.
    fn binomial_difference(values: &[GaussianRational], n: usize) -> GaussianRational {
        let mut binom = BigInt::one();
        let mut acc = GaussianRational::zero();
        for k in 0..=n {
            let sign = if (n - k) & 1 == 0 { 1 } else { -1 };
            acc += &(&values[k] * &GaussianRational::from(binom.clone() * sign));
            binom = binom * (n - k) / (k + 1);
        }
        acc
    }

    #[test]
    fn factorial_polynomials() {
        assert_eq!(factorial_poly(0), Poly1::from_integers(&[1]));
        assert_eq!(factorial_poly(2), Poly1::from_integers(&[0, -1, 1]));
        for n in 0..8 {
            for x in 0..n as i64 {
                assert!(factorial_poly(n).eval_int(x).is_zero());
                assert!(falling(x, n).is_zero());
            }
        }
    }

    #[test]
    fn transform_of_square() {
        let vals: Vec<_> = (0..=5).map(|x| gr(x * x, 0)).collect();
        assert_eq!(fourier_1d(&vals).coeffs(), &ints(&[0, 1, 1])[..]);
    }

    #[test]
    fn transform_of_basis_element() {
        let vals: Vec<_> = (0..=6).map(|x| GaussianRational::from(falling(x, 3))).collect();
        assert_eq!(fourier_1d(&vals), CoefficientSeries::unit(BasisTag::FactorialX, 3));
    }

    #[test]
    fn transform_of_reciprocal() {
        let vals: Vec<_> = (0..=12).map(|x| GaussianRational::from_fractions(1, x + 1, 0, 1)).collect();
        let c = fourier_1d(&vals);
        let facts = factorials(14);
        for n in 0..=12 {
            // oracle: brute-force binomial differences divided by n!
            let expected = binomial_difference(&vals, n)
                .scale(&BigRational::new(BigInt::one(), facts[n].clone()));
            assert_eq!(c.coeff(n), expected);
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(c.coeff(n), GaussianRational::real(BigRational::new(sign.into(), facts[n + 1].clone())));
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse_fourier_1d(&CoefficientSeries::unit(BasisTag::FactorialX, 1), 7), gr(7, 0));
        let c = CoefficientSeries::new(BasisTag::FactorialX, ints(&[0, 1, 1]));
        assert_eq!(inverse_fourier_1d(&c, 3), gr(9, 0));
    }

    #[test]
    fn two_dimensional_examples() {
        let w = Window::anchored(5, 4).unwrap();
        let f = LatticeFunction::from_fn(w, |x, y| GaussianRational::from(falling(x, 2) * falling(y, 1)));
        assert_eq!(fourier_2d(&f).unwrap(), CoefficientSeries2::unit(2, 1));
        let z = LatticeFunction::from_fn(w, gr);
        let mut expected = CoefficientSeries2::zero();
        expected.add_term(1, 0, &gr(1, 0));
        expected.add_term(0, 1, &gr(0, 1));
        assert_eq!(fourier_2d(&z).unwrap(), expected);
        let shifted = LatticeFunction::constant(Window::new(1, 3, 0, 2).unwrap(), gr(1, 0));
        assert!(matches!(fourier_2d(&shifted), Err(Error::NotAnchored { .. })));
    }

    #[test]
    fn antidifference_examples() {
        for n in 0..6 {
            let g = antidifference_1d(&CoefficientSeries::unit(BasisTag::FactorialX, n));
            let mut expected = vec![GaussianRational::zero(); n + 2];
            expected[n + 1] = GaussianRational::from_fractions(1, n as i64 + 1, 0, 1);
            assert_eq!(g.coeffs(), &expected[..]);
        }
        assert!(antidifference_1d(&CoefficientSeries::zero(BasisTag::FactorialX)).is_zero());
        let one = CoefficientSeries::new(BasisTag::FactorialX, ints(&[1]));
        assert_eq!(antidifference_1d(&one), CoefficientSeries::unit(BasisTag::FactorialX, 1));
    }

    #[test]
    fn joint_primitive_examples() {
        let mut f = CoefficientSeries2::zero();
        f.add_term(0, 0, &gr(1, 0));
        let mut g = CoefficientSeries2::zero();
        g.add_term(0, 0, &gr(0, 1));
        let h = joint_primitive(&f, &g).unwrap();
        let mut expected = CoefficientSeries2::zero();
        expected.add_term(1, 0, &gr(1, 0));
        expected.add_term(0, 1, &gr(0, 1));
        assert_eq!(h, expected);

        assert!(joint_primitive(&CoefficientSeries2::zero(), &CoefficientSeries2::zero()).unwrap().is_zero());

        let h = joint_primitive(&CoefficientSeries2::unit(0, 1), &CoefficientSeries2::unit(1, 0)).unwrap();
        assert_eq!(h, CoefficientSeries2::unit(1, 1));
    }

    #[test]
    fn joint_primitive_rejects_incompatible_data() {
        // δ_y f = 1 but δ_x g = 0.
        let r = joint_primitive(&CoefficientSeries2::unit(0, 1), &CoefficientSeries2::zero());
        assert_eq!(r, Err(Error::Incompatible { m: 0, n: 0 }));
    }

    #[test]
    fn basis_conversions_agree_on_values() {
        let p = &Poly2::z().pow(3) - &Poly2::y();
        let c = CoefficientSeries2::from_poly2(&p);
        assert_eq!(c.to_poly2(), p);
        for (x, y) in Window::new(-3, 3, -3, 3).unwrap().points() {
            assert_eq!(c.eval(x, y), p.eval(x, y));
        }
        let q = Poly1::from_integers(&[3, 0, -2, 1]);
        assert_eq!(factorial_to_poly1(&poly1_to_factorial(&q)), q);
    }

    fn arb_values(len: usize) -> impl Strategy<Value = Vec<GaussianRational>> {
        proptest::collection::vec((-30i64..30, -30i64..30, 1i64..7), len)
            .prop_map(|v| v.into_iter().map(|(a, b, d)| GaussianRational::from_fractions(a, d, b, d)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn round_trip_1d(vals in arb_values(20)) {
            let c = fourier_1d(&vals);
            for (x, v) in vals.iter().enumerate() {
                prop_assert_eq!(&inverse_fourier_1d(&c, x as u64), v);
            }
            let facts = factorials(20);
            for n in [0usize, 3, 11, 19] {
                let oracle = binomial_difference(&vals, n).scale(&BigRational::new(BigInt::one(), facts[n].clone()));
                prop_assert_eq!(c.coeff(n), oracle);
            }
        }

        #[test]
        fn round_trip_2d(vals in arb_values(36)) {
            let w = Window::anchored(6, 6).unwrap();
            let f = LatticeFunction::new(w, vals).unwrap();
            let c = fourier_2d(&f).unwrap();
            prop_assert_eq!(inverse_fourier_2d(&c, &w), f);
        }

        #[test]
        fn polynomial_support_bounded_by_degree(coeffs in proptest::collection::vec(-9i64..9, 1..7)) {
            let p = Poly1::from_integers(&coeffs);
            let vals: Vec<_> = (0..15).map(|x| p.eval_int(x)).collect();
            let c = fourier_1d(&vals);
            prop_assert!(c.len() <= p.degree().map_or(0, |d| d + 1));
        }

        #[test]
        fn antidifference_inverts_difference(coeffs in arb_values(6)) {
            let f = CoefficientSeries::new(BasisTag::FactorialX, coeffs);
            let g = antidifference_1d(&f);
            prop_assert_eq!(difference_1d(&g), f.clone());
            prop_assert!(eval_factorial_series(&g, 0).is_zero());
            if let Some(d) = f.degree() {
                prop_assert_eq!(g.degree(), Some(d + 1));
            }
            // δg = f on sample points, computed from values
            for x in -3i64..6 {
                let diff = &eval_factorial_series(&g, x + 1) - &eval_factorial_series(&g, x);
                prop_assert_eq!(diff, eval_factorial_series(&f, x));
            }
        }

        #[test]
        fn joint_primitive_solves_both_equations(vals in arb_values(10)) {
            // Build a compatible pair from a random h0: f = δ_x h0, g = δ_y h0.
            let mut h0 = CoefficientSeries2::zero();
            for (k, v) in vals.iter().enumerate() {
                h0.add_term(k % 4, k / 4, v);
            }
            let f = h0.delta_x();
            let g = h0.delta_y();
            let h = joint_primitive(&f, &g).unwrap();
            let w = Window::new(-2, 4, -2, 4).unwrap();
            let hv = h.eval_window(&w);
            prop_assert_eq!(hv.delta_x().unwrap(), f.eval_window(&w).restrict(hv.delta_x().unwrap().window()).unwrap());
            prop_assert_eq!(hv.delta_y().unwrap(), g.eval_window(&w).restrict(hv.delta_y().unwrap().window()).unwrap());
        }
    }
}
