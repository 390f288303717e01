//! Expandable functions `Σ f̂₀(n) ζ_n`, the multiplication operator `𝒵`, and
//! the Cauchy–Kovalevskaya (`⊙`) and `⊡` products.
//!
//! Both products are computed on coefficients. The C-K product multiplies
//! restrictions to `y = 0` and transforms back, which is exact for every
//! coefficient index the inputs determine.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::basis::{factorial_to_poly1, fourier_1d, inverse_fourier_1d, BasisTag, CoefficientSeries};
use crate::error::{Error, Result};
use crate::lattice::{LatticeFunction, Window};
use crate::numeric::{factorials, ln_factorial, GaussianRational, Poly1, Poly2};
use crate::zeta::ZetaTable;

/// How far the stored coefficients describe the function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Support {
    /// All coefficients past the stored ones vanish: a polynomial.
    Finite,
    /// Coefficients `0..=N` are exact; later ones are unknown.
    Truncated(usize),
}

impl Support {
    fn known_up_to(self) -> Option<usize> {
        match self {
            Support::Finite => None,
            Support::Truncated(n) => Some(n),
        }
    }

    fn meet(self, other: Support) -> Support {
        match (self.known_up_to(), other.known_up_to()) {
            (None, None) => Support::Finite,
            (Some(a), None) | (None, Some(a)) => Support::Truncated(a),
            (Some(a), Some(b)) => Support::Truncated(a.min(b)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    pub bound: f64,
    pub checked_up_to: usize,
}

/// `f = Σ f̂₀(n) ζ_n` with `f̂₀` the transform of the restriction `f(x, 0)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawExpandable", into = "RawExpandable")]
pub struct ExpandableFunction {
    coeffs: CoefficientSeries,
    support: Support,
    rational: bool,
    growth_certificate: Option<GrowthCertificate>,
}

#[derive(Serialize, Deserialize)]
struct RawExpandable {
    #[serde(flatten)]
    coeffs: CoefficientSeries,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    rational: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    growth_certificate: Option<GrowthCertificate>,
}

impl TryFrom<RawExpandable> for ExpandableFunction {
    type Error = Error;
    fn try_from(r: RawExpandable) -> Result<Self> {
        if r.coeffs.basis() != BasisTag::Zeta {
            return Err(Error::InvalidArgument(format!(
                "expandable functions use the zeta basis, got {:?}",
                r.coeffs.basis()
            )));
        }
        let support = match r.truncation {
            None => Support::Finite,
            Some(n) => Support::Truncated(n),
        };
        Ok(Self {
            coeffs: r.coeffs.truncate(r.truncation.unwrap_or(usize::MAX - 1)),
            support,
            rational: r.rational,
            growth_certificate: r.growth_certificate,
        })
    }
}

impl From<ExpandableFunction> for RawExpandable {
    fn from(f: ExpandableFunction) -> Self {
        Self {
            coeffs: f.coeffs,
            truncation: f.support.known_up_to(),
            rational: f.rational,
            growth_certificate: f.growth_certificate,
        }
    }
}

impl ExpandableFunction {
    /// A polynomial `Σ c_n ζ_n`.
    pub fn polynomial(coeffs: Vec<GaussianRational>) -> Self {
        Self {
            coeffs: CoefficientSeries::new(BasisTag::Zeta, coeffs),
            support: Support::Finite,
            rational: true,
            growth_certificate: None,
        }
    }

    /// `ζ_n` itself.
    pub fn zeta(n: usize) -> Self {
        Self::polynomial(CoefficientSeries::unit(BasisTag::Zeta, n).coeffs().to_vec())
    }

    /// Coefficients known through index `N` only.
    pub fn truncated(coeffs: Vec<GaussianRational>, n: usize) -> Self {
        let mut c = coeffs;
        c.truncate(n + 1);
        Self {
            coeffs: CoefficientSeries::new(BasisTag::Zeta, c),
            support: Support::Truncated(n),
            rational: false,
            growth_certificate: None,
        }
    }

    /// Marks the restriction as a rational function of `x`.
    pub fn with_rational(mut self, rational: bool) -> Self {
        self.rational = rational;
        self
    }

    pub fn with_certificate(mut self, cert: GrowthCertificate) -> Self {
        self.growth_certificate = Some(cert);
        self
    }

    /// The restriction `f₀(x) = f(x, 0)` as a polynomial, for finite support.
    pub fn restriction_poly(&self) -> Option<Poly1> {
        (self.support == Support::Finite).then(|| factorial_to_poly1(&self.coeffs.clone().retag(BasisTag::FactorialX)))
    }

    /// Transforms samples `f₀(0), …, f₀(N)` into a truncated expandable function.
    pub fn from_restriction_samples(values: &[GaussianRational]) -> Self {
        let n = values.len().saturating_sub(1);
        Self::truncated(fourier_1d(values).coeffs().to_vec(), n)
    }

    pub fn coeffs(&self) -> &CoefficientSeries {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> GaussianRational {
        self.coeffs.coeff(n)
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn is_polynomial(&self) -> bool {
        self.support == Support::Finite
    }

    pub fn is_rational(&self) -> bool {
        self.rational
    }

    pub fn growth_certificate(&self) -> Option<&GrowthCertificate> {
        self.growth_certificate.as_ref()
    }

    /// Largest coefficient index the function needs from a table.
    pub fn required_degree(&self) -> usize {
        match self.support {
            Support::Finite => self.coeffs.degree().unwrap_or(0),
            Support::Truncated(n) => n,
        }
    }

    /// `f(x, 0) = Σ f̂₀(n) x^[n]`, exact for `0 ≤ x ≤ N` whatever the support.
    pub fn restriction_at(&self, x: u64) -> Result<GaussianRational> {
        if let Support::Truncated(n) = self.support {
            if x as usize > n {
                return Err(Error::TruncatedSeries { required: x as usize, available: n });
            }
        }
        Ok(inverse_fourier_1d(&self.coeffs.clone().retag(BasisTag::FactorialX), x))
    }

    fn restriction_samples(&self, n: usize) -> Vec<GaussianRational> {
        let c = self.coeffs.clone().retag(BasisTag::FactorialX);
        (0..=n as u64).map(|x| inverse_fourier_1d(&c, x)).collect()
    }

    /// `Σ c_n ζ_n` as a bivariate polynomial; needs finite support.
    pub fn to_poly2(&self, zt: &ZetaTable) -> Result<Poly2> {
        if !self.is_polynomial() {
            return Err(Error::InvalidArgument("a truncated series has no polynomial form".into()));
        }
        let d = self.coeffs.degree().unwrap_or(0);
        if d > zt.max_degree() {
            return Err(Error::TableTooSmall { required: d, available: zt.max_degree() });
        }
        Ok(self
            .coeffs
            .coeffs()
            .iter()
            .enumerate()
            .fold(Poly2::zero(), |acc, (n, c)| &acc + &zt.poly(n).scale(c)))
    }

    /// Values of the (truncated) series on the table window.
    pub fn values(&self, zt: &ZetaTable) -> Result<LatticeFunction> {
        let d = self.coeffs.degree().unwrap_or(0);
        if d > zt.max_degree() {
            return Err(Error::TableTooSmall { required: d, available: zt.max_degree() });
        }
        let w = *zt.window();
        let mut acc = LatticeFunction::constant(w, GaussianRational::zero());
        for (n, c) in self.coeffs.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&zt.values(n).scale(c))?;
            }
        }
        Ok(acc)
    }
}

/// Value of an expandable function at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub value: GaussianRational,
    /// Estimated size of the omitted tail; `None` for an exact sum.
    pub tail_bound: Option<f64>,
}

/// `Σ f̂₀(n) ζ_n(x, y)` read from a table.
///
/// Finite support gives an exact value. For a truncated series the omitted
/// tail is estimated by extrapolating the geometric decay of the last half
/// of the computed terms; it is `∞` when the terms are not decaying.
pub fn eval_expandable(f: &ExpandableFunction, zt: &ZetaTable, x: i64, y: i64) -> Result<Evaluation> {
    let need = f.required_degree();
    if need > zt.max_degree() {
        return Err(Error::TableTooSmall { required: need, available: zt.max_degree() });
    }
    let mut value = GaussianRational::zero();
    let mut mags = Vec::with_capacity(need + 1);
    for n in 0..=need {
        let c = f.coeff(n);
        let term = &c * zt.value(n, x, y)?;
        mags.push(if term.is_zero() { f64::NEG_INFINITY } else { term.ln_abs() });
        value += &term;
    }
    let tail_bound = match f.support() {
        Support::Finite => None,
        Support::Truncated(n) => Some(geometric_tail(&mags, n)),
    };
    Ok(Evaluation { value, tail_bound })
}

fn geometric_tail(log_terms: &[f64], n: usize) -> f64 {
    let lo = n / 2;
    if n == lo || !log_terms[n].is_finite() {
        return if log_terms[lo..].iter().all(|t| !t.is_finite()) { 0.0 } else { f64::INFINITY };
    }
    let peak = log_terms[lo..].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let rate = (log_terms[n] - peak) / (n - lo) as f64;
    if rate >= 0.0 {
        return f64::INFINITY;
    }
    let q = rate.exp();
    log_terms[n].exp() * q / (1.0 - q)
}

/// `(𝒵f)(x,y) = x f(x,y) + i y (f(x,y+1) + f(x,y−1)) / 2`, on the window
/// without its top and bottom rows.
pub fn z_operator(f: &LatticeFunction) -> Result<LatticeFunction> {
    let w = f.window();
    if w.height() < 3 {
        return Err(Error::DegenerateWindow(format!(
            "the multiplication operator needs three rows, window has {}",
            w.height()
        )));
    }
    let out = Window::new(w.x_min, w.x_max, w.y_min + 1, w.y_max - 1)?;
    let half_i = GaussianRational::from_fractions(0, 1, 1, 2);
    Ok(LatticeFunction::from_fn(out, |x, y| {
        let at = |yy| f.get(x, yy).expect("inside window");
        let vert = at(y + 1) + at(y - 1);
        &at(y).scale_int(x) + &(&vert * &half_i).scale_int(y)
    }))
}

/// `f ⊙ g`. Needs one polynomial factor, or two factors with rational
/// restrictions; otherwise use [`ck_product_truncated`].
pub fn ck_product(f: &ExpandableFunction, g: &ExpandableFunction) -> Result<ExpandableFunction> {
    match (f.support(), g.support()) {
        (Support::Finite, Support::Finite) => {
            let d = f.required_degree() + g.required_degree();
            let vals: Vec<_> = f
                .restriction_samples(d)
                .iter()
                .zip(g.restriction_samples(d))
                .map(|(a, b)| a * &b)
                .collect();
            Ok(ExpandableFunction::polynomial(fourier_1d(&vals).coeffs().to_vec()))
        }
        (Support::Finite, Support::Truncated(n)) | (Support::Truncated(n), Support::Finite) => {
            Ok(ck_product_truncated(f, g, n)?.with_rational(f.is_rational() && g.is_rational()))
        }
        (Support::Truncated(a), Support::Truncated(b)) => {
            if f.is_rational() && g.is_rational() {
                Ok(ck_product_truncated(f, g, a.min(b))?.with_rational(true))
            } else {
                Err(Error::NeedsTruncation)
            }
        }
    }
}

/// Coefficients `0..=N` of `f ⊙ g`, from restrictions sampled at `0..=N`.
pub fn ck_product_truncated(f: &ExpandableFunction, g: &ExpandableFunction, n: usize) -> Result<ExpandableFunction> {
    for h in [f, g] {
        if let Support::Truncated(k) = h.support() {
            if k < n {
                return Err(Error::TruncatedSeries { required: n, available: k });
            }
        }
    }
    let vals: Vec<_> = f
        .restriction_samples(n)
        .iter()
        .zip(g.restriction_samples(n))
        .map(|(a, b)| a * &b)
        .collect();
    Ok(ExpandableFunction::from_restriction_samples(&vals))
}

/// `c_j^{m,n} = δ^j(x^[m] x^[n])(0) / j!` for `j ≤ m + n`.
pub fn ck_structure_constants(m: usize, n: usize) -> CoefficientSeries {
    let vals: Vec<GaussianRational> = (0..=(m + n) as i64)
        .map(|x| GaussianRational::from(crate::basis::falling(x, m) * crate::basis::falling(x, n)))
        .collect();
    fourier_1d(&vals).retag(BasisTag::Zeta)
}

/// `f ⊙ g` on a lattice window from the `𝒵`-polynomial form
/// `c_0 g + c_1 𝒵g + … + c_d 𝒵^d g`, where `f(x,0) = Σ c_k x^k`.
/// The window loses `d` rows at top and bottom.
pub fn ck_product_zpoly(f: &ExpandableFunction, g: &LatticeFunction) -> Result<LatticeFunction> {
    let p = f
        .restriction_poly()
        .ok_or_else(|| Error::InvalidArgument("the Z-polynomial form needs a polynomial factor".into()))?;
    let d = p.degree().unwrap_or(0);
    let mut powers = vec![g.clone()];
    for _ in 0..d {
        let next = z_operator(powers.last().expect("nonempty"))?;
        powers.push(next);
    }
    let w = *powers[d].window();
    let mut acc = LatticeFunction::constant(w, GaussianRational::zero());
    for (k, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc = acc.add(&powers[k].restrict(&w)?.scale(c))?;
        }
    }
    Ok(acc)
}

/// `ζ_n ⊡ ζ_m = m! n! ζ_{m+n} / (m+n)!`, extended bilinearly.
pub fn boxdot_product(f: &ExpandableFunction, g: &ExpandableFunction) -> ExpandableFunction {
    let support = f.support().meet(g.support());
    let top = match support {
        Support::Finite => f.coeffs().len() + g.coeffs().len(),
        Support::Truncated(n) => n + 1,
    };
    let facts = factorials(top);
    let mut out = vec![GaussianRational::zero(); top];
    for (m, a) in f.coeffs().coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (n, b) in g.coeffs().coeffs().iter().enumerate() {
            if m + n >= top || b.is_zero() {
                continue;
            }
            let w = BigRational::new(&facts[m] * &facts[n], facts[m + n].clone());
            out[m + n] += &(a * b).scale(&w);
        }
    }
    let res = match support {
        Support::Finite => ExpandableFunction::polynomial(out),
        Support::Truncated(n) => ExpandableFunction::truncated(out, n),
    };
    res.with_rational(f.is_rational() && g.is_rational())
}

fn denominator_check(q: &ExpandableFunction) -> Result<Poly1> {
    let q0 = q
        .restriction_poly()
        .ok_or_else(|| Error::InvalidArgument("the denominator must be a polynomial".into()))?;
    if q0.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if let Some(root) = q0.first_nonneg_integer_root() {
        return Err(Error::DenominatorRoot(root));
    }
    Ok(q0)
}

/// Coefficients `0..=N` of the unique expandable `f` with `q ⊙ f = p`,
/// by dividing restrictions and transforming back.
pub fn ck_quotient(p: &ExpandableFunction, q: &ExpandableFunction, n: usize) -> Result<ExpandableFunction> {
    if !p.is_polynomial() {
        return Err(Error::InvalidArgument("the numerator must be a polynomial".into()));
    }
    let q0 = denominator_check(q)?;
    let vals: Vec<GaussianRational> = p
        .restriction_samples(n)
        .into_iter()
        .enumerate()
        .map(|(x, pv)| pv.checked_div(&q0.eval_int(x as i64)))
        .collect::<Result<_>>()?;
    Ok(ExpandableFunction::from_restriction_samples(&vals).with_rational(true))
}

/// Same quotient by forward substitution in `Σ_{j,n} q̂(j) f̂(n) c_k^{j,n} = p̂(k)`.
///
/// Uses `x^[j] x^[n] = Σ_i C(j,i) C(n,i) i! x^[j+n−i]`; the diagonal entry at
/// step `k` is `Σ_j q̂(j) k^[j] = q(k, 0)`.
pub fn ck_quotient_triangular(p: &ExpandableFunction, q: &ExpandableFunction, n: usize) -> Result<ExpandableFunction> {
    if !p.is_polynomial() {
        return Err(Error::InvalidArgument("the numerator must be a polynomial".into()));
    }
    let q0 = denominator_check(q)?;
    let dq = q.coeffs().degree().unwrap_or(0);
    let top = n + dq;
    let facts = factorials(top);
    let binom = |a: usize, b: usize| -> BigInt { &facts[a] / (&facts[b] * &facts[a - b]) };
    // Structure constant c_k^{j,m} for j ≤ deg q.
    let c = |k: usize, j: usize, m: usize| -> BigInt {
        if k < j.max(m) || k > j + m {
            return BigInt::zero();
        }
        let i = j + m - k;
        binom(j, i) * binom(m, i) * &facts[i]
    };
    let mut f: Vec<GaussianRational> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut rhs = p.coeff(k);
        for (m, fm) in f.iter().enumerate() {
            for j in 0..=dq {
                let qj = q.coeff(j);
                let ckm = c(k, j, m);
                if !qj.is_zero() && !ckm.is_zero() {
                    rhs -= &(&(&qj * fm) * &GaussianRational::from(ckm));
                }
            }
        }
        f.push(rhs.checked_div(&q0.eval_int(k as i64))?);
    }
    Ok(ExpandableFunction::truncated(f, n).with_rational(true))
}

/// `max_{N/2 ≤ n ≤ N} (|f̂₀(n)| n!)^{1/n}`, a finite-data proxy for the
/// limsup in the expandability condition. Advisory only; zero coefficients
/// are skipped and an all-zero range gives 0.
pub fn expandability_estimate(c: &CoefficientSeries, n: usize) -> f64 {
    let lo = n.div_ceil(2).max(1);
    (lo..=n)
        .filter(|&k| !c.coeff(k).is_zero())
        .map(|k| ((c.coeff(k).ln_abs() + ln_factorial(k)) / k as f64).exp())
        .fold(0.0, f64::max)
}

/// `Σ tⁿ/n! ζ_n`, whose restriction is `(1+t)^x`.
pub fn exponential_series(t: &GaussianRational, n: usize) -> ExpandableFunction {
    let facts = factorials(n);
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut tp = GaussianRational::one();
    for f in facts {
        coeffs.push(tp.scale(&BigRational::new(BigInt::one(), f)));
        tp = &tp * t;
    }
    ExpandableFunction::truncated(coeffs, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::falling;
    use crate::numeric::gr;
    use crate::zeta::zeta_by_extension;
    use proptest::prelude::*;

    fn table(n: usize) -> ZetaTable {
        zeta_by_extension(n, &Window::new(-3, 8, -4, 4).unwrap())
    }

    fn reciprocal_coeffs(n: usize) -> Vec<GaussianRational> {
        let facts = factorials(n + 1);
        (0..=n)
            .map(|k| GaussianRational::real(BigRational::new(BigInt::from(if k % 2 == 0 { 1 } else { -1 }), facts[k + 1].clone())))
            .collect()
    }

    #[test]
    fn evaluation_examples() {
        let zt = table(12);
        let z1 = ExpandableFunction::zeta(1);
        for (x, y) in [(0, 0), (3, -2), (-1, 4)] {
            let e = eval_expandable(&z1, &zt, x, y).unwrap();
            assert_eq!(e.value, gr(x, y));
            assert_eq!(e.tail_bound, None);
        }
        let r = ExpandableFunction::truncated(reciprocal_coeffs(12), 12);
        for x in 0..=8 {
            let e = eval_expandable(&r, &zt, x, 0).unwrap();
            assert_eq!(e.value, GaussianRational::from_fractions(1, x + 1, 0, 1));
        }
        let off = eval_expandable(&r, &zt, 1, 2).unwrap();
        let tail = off.tail_bound.unwrap();
        assert!(tail > 0.0 && tail < 0.5, "{tail}");
        let p = ExpandableFunction::polynomial(vec![gr(1, 0), gr(0, 2), gr(-3, 1)]);
        let poly = p.to_poly2(&zt).unwrap();
        for (x, y) in zt.window().points() {
            assert_eq!(eval_expandable(&p, &zt, x, y).unwrap().value, poly.eval(x, y));
        }
        assert!(matches!(
            eval_expandable(&ExpandableFunction::zeta(13), &zt, 0, 0),
            Err(Error::TableTooSmall { .. })
        ));
    }

    #[test]
    fn z_operator_examples() {
        let zt = table(7);
        let z0 = z_operator(zt.values(0)).unwrap();
        assert_eq!(&z0, &zt.values(1).restrict(z0.window()).unwrap());
        for n in 1..=6 {
            let zn = z_operator(zt.values(n)).unwrap();
            let w = *zn.window();
            let expected = zt.values(n + 1).restrict(&w).unwrap().add(&zt.values(n).restrict(&w).unwrap().scale(&gr(n as i64, 0))).unwrap();
            assert_eq!(zn, expected);
            assert!(zn.is_discrete_analytic().unwrap().analytic);
        }
        let flat = LatticeFunction::constant(Window::new(0, 3, 0, 1).unwrap(), gr(1, 0));
        assert!(matches!(z_operator(&flat), Err(Error::DegenerateWindow(_))));
    }

    #[test]
    fn ck_product_examples() {
        let z1 = ExpandableFunction::zeta(1);
        assert_eq!(ck_product(&z1, &z1).unwrap(), ExpandableFunction::polynomial(vec![gr(0, 0), gr(1, 0), gr(1, 0)]));
        let f = ExpandableFunction::polynomial(vec![gr(2, 1), gr(0, -1), gr(5, 0)]);
        assert_eq!(ck_product(&ExpandableFunction::zeta(0), &f).unwrap(), f);
        let z2 = ExpandableFunction::zeta(2);
        assert_eq!(ck_product(&z2, &z2).unwrap().coeffs().coeffs(), &[gr(0, 0), gr(0, 0), gr(2, 0), gr(4, 0), gr(1, 0)]);
        let a = ExpandableFunction::truncated(reciprocal_coeffs(5), 5);
        assert_eq!(ck_product(&a, &a), Err(Error::NeedsTruncation));
        assert!(ck_product(&a.clone().with_rational(true), &a.with_rational(true)).is_ok());
    }

    #[test]
    fn structure_constant_examples() {
        assert_eq!(ck_structure_constants(1, 1).coeffs(), &[gr(0, 0), gr(1, 0), gr(1, 0)]);
        for m in 0..6 {
            assert_eq!(ck_structure_constants(m, 0), CoefficientSeries::unit(BasisTag::Zeta, m));
        }
        assert_eq!(ck_structure_constants(2, 2).coeffs(), &[gr(0, 0), gr(0, 0), gr(2, 0), gr(4, 0), gr(1, 0)]);
    }

    #[test]
    fn boxdot_examples() {
        let z1 = ExpandableFunction::zeta(1);
        assert_eq!(boxdot_product(&z1, &z1), ExpandableFunction::polynomial(vec![gr(0, 0), gr(0, 0), GaussianRational::from_fractions(1, 2, 0, 1)]));
        let f = ExpandableFunction::polynomial(vec![gr(1, 1), gr(0, 3)]);
        assert_eq!(boxdot_product(&ExpandableFunction::zeta(0), &f), f);
        let p = boxdot_product(&ExpandableFunction::zeta(2), &ExpandableFunction::zeta(3));
        assert_eq!(p.coeff(5), GaussianRational::from_fractions(1, 10, 0, 1));
        assert_eq!(p.coeffs().len(), 6);
    }

    #[test]
    fn quotient_examples() {
        let one = ExpandableFunction::zeta(0);
        let q = ExpandableFunction::polynomial(vec![gr(1, 0), gr(1, 0)]);
        let f = ck_quotient(&one, &q, 20).unwrap();
        assert_eq!(f.coeffs().coeffs(), &reciprocal_coeffs(20)[..]);
        assert_eq!(ck_quotient_triangular(&one, &q, 20).unwrap(), f);
        let back = ck_product(&q.clone().with_rational(true), &f).unwrap();
        assert_eq!(back.coeffs(), one.coeffs());

        assert_eq!(ck_quotient(&q, &q, 10).unwrap().coeffs(), one.coeffs());

        // x − 3 vanishes at 3
        let bad = ExpandableFunction::polynomial(vec![gr(-3, 0), gr(1, 0)]);
        assert_eq!(ck_quotient(&one, &bad, 8), Err(Error::DenominatorRoot(3)));
        assert_eq!(ck_quotient_triangular(&one, &bad, 8), Err(Error::DenominatorRoot(3)));
    }

    #[test]
    fn expandability_examples() {
        let r = CoefficientSeries::new(BasisTag::Zeta, reciprocal_coeffs(40));
        let e = expandability_estimate(&r, 40);
        assert!(e <= 1.0 + 1e-12 && e > 0.85, "{e}");
        let p = CoefficientSeries::new(BasisTag::Zeta, vec![gr(1, 0), gr(2, 0)]);
        assert_eq!(expandability_estimate(&p, 10), 0.0);
        let t = GaussianRational::from_fractions(6, 5, 0, 1);
        let e = expandability_estimate(exponential_series(&t, 40).coeffs(), 40);
        assert!((e - 1.2).abs() < 1e-9, "{e}");
    }

    #[test]
    fn squared_exponential_leaves_expandable_class() {
        // √(1+√2) − 1 ≈ 0.554 < t < √2: (1+t)^{2x} = (1+2t+t²)^x grows past √2.
        let t = GaussianRational::from_fractions(3, 5, 0, 1);
        let f = exponential_series(&t, 40);
        assert!(expandability_estimate(f.coeffs(), 40) < std::f64::consts::SQRT_2);
        let sq = ck_product_truncated(&f, &f, 40).unwrap();
        let e = expandability_estimate(sq.coeffs(), 40);
        assert!((e - 1.56).abs() < 1e-9 && e > std::f64::consts::SQRT_2, "{e}");
    }

    #[test]
    fn json_shape() {
        let f = ExpandableFunction::truncated(vec![gr(1, 0), gr(0, -1)], 3).with_rational(true);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"basis":"zeta","coeffs":["1/1+0/1*i","0/1-1/1*i"],"truncation":3,"rational":true}"#);
        let back: ExpandableFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let plain: ExpandableFunction = serde_json::from_str(r#"{"basis":"zeta","coeffs":["2","i"]}"#).unwrap();
        assert!(plain.is_polynomial());
        assert!(serde_json::from_str::<ExpandableFunction>(r#"{"basis":"monomial","coeffs":[]}"#).is_err());
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = ExpandableFunction> {
        proptest::collection::vec((-5i64..5, -5i64..5, 1i64..4), 0..=max_deg + 1)
            .prop_map(|v| ExpandableFunction::polynomial(v.into_iter().map(|(a, b, d)| GaussianRational::from_fractions(a, d, b, d)).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn ck_restriction_law_and_commutativity(f in arb_poly(8), g in arb_poly(8)) {
            let fg = ck_product(&f, &g).unwrap();
            prop_assert_eq!(&fg, &ck_product(&g, &f).unwrap());
            for x in 0..20u64 {
                prop_assert_eq!(fg.restriction_at(x).unwrap(), f.restriction_at(x).unwrap() * g.restriction_at(x).unwrap());
            }
            // Oracle: bilinear expansion through the structure constants.
            let mut expected = vec![GaussianRational::zero(); f.coeffs().len() + g.coeffs().len()];
            for (m, a) in f.coeffs().coeffs().iter().enumerate() {
                for (n, b) in g.coeffs().coeffs().iter().enumerate() {
                    for (j, c) in ck_structure_constants(m, n).coeffs().iter().enumerate() {
                        expected[j] += &(&(a * b) * c);
                    }
                }
            }
            prop_assert_eq!(fg, ExpandableFunction::polynomial(expected));
        }

        #[test]
        fn ck_product_is_analytic_and_matches_zpoly_form(f in arb_poly(3), g in arb_poly(4)) {
            let zt = zeta_by_extension(8, &Window::new(-2, 4, -5, 5).unwrap());
            let fg = ck_product(&f, &g).unwrap();
            let vals = fg.values(&zt).unwrap();
            prop_assert!(vals.is_discrete_analytic().unwrap().analytic);
            let zform = ck_product_zpoly(&f, &g.values(&zt).unwrap()).unwrap();
            prop_assert_eq!(zform.clone(), vals.restrict(zform.window()).unwrap());
        }

        #[test]
        fn boxdot_associative_commutative(f in arb_poly(4), g in arb_poly(4), h in arb_poly(4)) {
            prop_assert_eq!(boxdot_product(&f, &g), boxdot_product(&g, &f));
            prop_assert_eq!(boxdot_product(&boxdot_product(&f, &g), &h), boxdot_product(&f, &boxdot_product(&g, &h)));
        }

        #[test]
        fn quotient_routes_agree(p in arb_poly(3), a in 1i64..5, b in 1i64..4) {
            // q(x,0) = b x + a has no root in ℤ₊
            let q = ExpandableFunction::polynomial(vec![gr(a, 0), gr(b, 0)]);
            let f = ck_quotient(&p, &q, 12).unwrap();
            prop_assert_eq!(&f, &ck_quotient_triangular(&p, &q, 12).unwrap());
            let back = ck_product(&q, &f).unwrap();
            for x in 0..=12u64 {
                prop_assert_eq!(back.restriction_at(x).unwrap(), p.restriction_at(x).unwrap());
            }
        }
    }

    #[test]
    fn structure_constants_match_falling_factorial_products() {
        for m in 0..5 {
            for n in 0..5 {
                let c = ck_structure_constants(m, n);
                for x in 0..10 {
                    let lhs = GaussianRational::from(falling(x, m) * falling(x, n));
                    let rhs: GaussianRational = c.coeffs().iter().enumerate().map(|(j, cj)| cj * &GaussianRational::from(falling(x, j))).sum();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
