//! The entire-function space `𝐇 = T𝐇₂` with `T(zⁿ) = zⁿ/n!`, its product
//! `F ◇ G = T(T⁻¹F · T⁻¹G)`, contractive multipliers `s = Ts₀`, coisometric
//! realizations and their kernels, and the transport `V: zⁿ ↦ ζ_n` to the
//! lattice.
//!
//! Everything here is floating point. Truncations default to degree 64.

use nalgebra::{DMatrix, DVector, RowDVector};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::LatticeFunction;
use crate::numeric::GaussianRational;
use crate::operator::spectral_norm;
use crate::products::ExpandableFunction;
use crate::zeta::ZetaTable;

pub const DEFAULT_TRUNCATION: usize = 64;
pub const TOLERANCE: f64 = 1e-8;
const COISOMETRY_TOL: f64 = 1e-10;

type C64 = Complex64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `n!` as a float (exact up to 22!, finite up to 170!).
pub fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |a, k| a * k as f64)
}

/// Which picture the coefficients live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    H2,
    HSpace,
}

/// A truncated power series `Σ_{n≤N} a_n zⁿ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntireSeries {
    #[serde(with = "complex_vec")]
    coeffs: Vec<C64>,
    space: Space,
}

impl EntireSeries {
    pub fn new(space: Space, coeffs: Vec<C64>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![C64::zero()] } else { coeffs };
        Self { coeffs, space }
    }

    pub fn h2(coeffs: Vec<C64>) -> Self {
        Self::new(Space::H2, coeffs)
    }

    pub fn h_space(coeffs: Vec<C64>) -> Self {
        Self::new(Space::HSpace, coeffs)
    }

    /// `zⁿ`, padded with zeros through degree `len - 1`.
    pub fn monomial(space: Space, n: usize, len: usize) -> Self {
        let mut v = vec![C64::zero(); len.max(n + 1)];
        v[n] = C64::one();
        Self::new(space, v)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> C64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Truncation degree `N`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::zero(), |acc, a| acc * z + a)
    }

    /// Coefficients in `𝐇₂` coordinates (undoes `T` for `𝐇` series).
    pub fn h2_coeffs(&self) -> Vec<C64> {
        match self.space {
            Space::H2 => self.coeffs.clone(),
            Space::HSpace => t_inverse(self).coeffs,
        }
    }

    /// `‖·‖₂` for `𝐇₂` series, the range norm `‖Tf‖ = ‖f‖₂` for `𝐇` series.
    pub fn norm(&self) -> f64 {
        self.h2_coeffs().iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product in the space the series is tagged with.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.space != other.space {
            return Err(Error::InvalidArgument("inner product across spaces".into()));
        }
        let (a, b) = (self.h2_coeffs(), other.h2_coeffs());
        Ok(a.iter().zip(&b).map(|(x, y)| x * y.conj()).sum())
    }

    /// `𝔡`: differentiation, which lowers the degree by one.
    pub fn derivative(&self) -> Self {
        let v: Vec<C64> =
            self.coeffs.iter().enumerate().skip(1).map(|(n, a)| a * n as f64).collect();
        Self::new(self.space, v)
    }
}

/// `T`: coefficient `n` divided by `n!`. The input is read as `𝐇₂` data.
pub fn t_map(f: &EntireSeries) -> EntireSeries {
    let mut fact = 1.0;
    let v = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| {
            if n > 0 {
                fact *= n as f64;
            }
            a / fact
        })
        .collect();
    EntireSeries::h_space(v)
}

/// `T⁻¹`: coefficient `n` multiplied by `n!`.
pub fn t_inverse(f: &EntireSeries) -> EntireSeries {
    let mut fact = 1.0;
    let v = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| {
            if n > 0 {
                fact *= n as f64;
            }
            a * fact
        })
        .collect();
    EntireSeries::h2(v)
}

/// `F ◇ G = T(T⁻¹F · T⁻¹G)`, truncated at the smaller degree.
///
/// Coefficientwise `(F◇G)_n = Σ_k F_k G_{n−k} / C(n,k)`, which avoids forming
/// large factorials.
pub fn diamond_product(f: &EntireSeries, g: &EntireSeries) -> EntireSeries {
    let len = f.coeffs.len().min(g.coeffs.len());
    let mut out = vec![C64::zero(); len];
    for (n, slot) in out.iter_mut().enumerate() {
        let mut binom = 1.0;
        for k in 0..=n {
            *slot += f.coeffs[k] * g.coeffs[n - k] / binom;
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
    }
    EntireSeries::h_space(out)
}

/// `e^{az} = Σ aⁿzⁿ/n!`, the ◇-inverse of `1 − za`.
pub fn exp_series(a: C64, n: usize) -> EntireSeries {
    let mut v = Vec::with_capacity(n + 1);
    let mut term = C64::one();
    for k in 0..=n {
        v.push(term);
        term = term * a / (k + 1) as f64;
    }
    EntireSeries::h_space(v)
}

/// `K_𝐇(·, w) = Σ w̄ⁿ zⁿ / (n!)²` through degree `n`.
pub fn kernel_section(w: C64, n: usize) -> EntireSeries {
    let mut v = Vec::with_capacity(n + 1);
    let mut term = C64::one();
    for k in 0..=n {
        v.push(term);
        term = term * w.conj() / (((k + 1) * (k + 1)) as f64);
    }
    EntireSeries::h_space(v)
}

/// `K_𝐇(z, w)` summed through degree `n`.
pub fn kernel_h(z: C64, w: C64, n: usize) -> C64 {
    kernel_section(w, n).eval(z)
}

/// Lower-triangular Toeplitz truncation of multiplication by `s₀` on `𝐇₂`.
pub fn toeplitz_matrix(s0: &[C64], n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |i, j| if i >= j { s0.get(i - j).copied().unwrap_or_default() } else { C64::zero() })
}

/// Spectral norm of the `N × N` multiplication matrix of `s₀`. The multiplier
/// `Ts₀` is ◇-contractive on `𝐇` exactly when this stays below one for all `N`.
pub fn multiplier_norm(s0: &EntireSeries, n: usize) -> f64 {
    spectral_norm(&toeplitz_matrix(&s0.h2_coeffs(), n))
}

/// `(‖s ◇ Tf‖_𝐇, ‖Tf‖_𝐇)` for `s = Ts₀`.
pub fn multiplier_contractivity(s0: &EntireSeries, f: &EntireSeries) -> (f64, f64) {
    let s = t_map(&EntireSeries::h2(s0.h2_coeffs()));
    let tf = t_map(&EntireSeries::h2(f.h2_coeffs()));
    (diamond_product(&s, &tf).norm(), tf.norm())
}

/// Taylor coefficients through degree `n` of the finite Blaschke product
/// `u Π (z − a_k)/(1 − ā_k z)`.
pub fn blaschke_series(zeros: &[C64], unimodular: C64, n: usize) -> Result<EntireSeries> {
    let mut acc = vec![C64::zero(); n + 1];
    acc[0] = unimodular;
    for &a in zeros {
        if a.norm() >= 1.0 {
            return Err(Error::InvalidArgument(format!("Blaschke zero {a} is not in the unit disc")));
        }
        // (z − a) Σ (āz)^k
        let mut factor = vec![C64::zero(); n + 1];
        let mut p = C64::one();
        for k in 0..=n {
            factor[k] -= a * p;
            if k < n {
                factor[k + 1] += p;
            }
            p *= a.conj();
        }
        let mut next = vec![C64::zero(); n + 1];
        for i in 0..=n {
            for j in 0..=n - i {
                next[i + j] += acc[i] * factor[j];
            }
        }
        acc = next;
    }
    Ok(EntireSeries::h2(acc))
}

/// Block data `M = [[A, B], [C, D]]` with state space `ℂ^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoisometryRealization {
    a: DMatrix<C64>,
    b: DVector<C64>,
    c: RowDVector<C64>,
    d: C64,
}

impl CoisometryRealization {
    pub fn new(a: DMatrix<C64>, b: DVector<C64>, c: RowDVector<C64>, d: C64) -> Result<Self> {
        let m = a.nrows();
        if a.ncols() != m || b.len() != m || c.len() != m {
            return Err(Error::Dimension(format!(
                "A is {}x{}, B has {} rows, C has {} columns",
                a.nrows(),
                a.ncols(),
                b.len(),
                c.len()
            )));
        }
        Ok(Self { a, b, c, d })
    }

    /// `s₀(z) = z`: `A = 0, B = 1, C = 1, D = 0`.
    pub fn identity_function() -> Self {
        let one = |_, _| C64::one();
        Self::new(DMatrix::zeros(1, 1), DVector::from_fn(1, one), RowDVector::from_fn(1, one), C64::zero())
            .expect("shapes agree")
    }

    /// The constant `s₀ = c` through the backward shift on the first `n`
    /// coordinates `zᵏ/k!` of `𝐇`, `C = √(1−|c|²)` times evaluation at 0.
    ///
    /// `K_s = (1−|c|²) K_𝐇` needs an infinite state space; this truncation is
    /// coisometric except in the last row of `A` and reproduces `K_𝐇` through
    /// degree `n − 1`.
    pub fn constant(value: C64, n: usize) -> Result<Self> {
        if value.norm() > 1.0 {
            return Err(Error::InvalidArgument(format!("|c| = {} exceeds 1", value.norm())));
        }
        if n == 0 {
            return Err(Error::Dimension("state dimension must be positive".into()));
        }
        let a = DMatrix::from_fn(n, n, |i, j| if j == i + 1 { C64::one() } else { C64::zero() });
        let mut cc = RowDVector::zeros(n);
        cc[0] = c((1.0 - value.norm_sqr()).sqrt(), 0.0);
        Self::new(a, DVector::zeros(n), cc, value)
    }

    /// A random unitary `M` of size `m + 1`, from the QR factor of a random
    /// complex matrix.
    pub fn random_unitary(m: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = DMatrix::from_fn(m + 1, m + 1, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let q = raw.qr().q();
        Self::from_block(&q).expect("square block")
    }

    /// Splits an `(m+1) × (m+1)` block matrix.
    pub fn from_block(mm: &DMatrix<C64>) -> Result<Self> {
        let k = mm.nrows();
        if k == 0 || mm.ncols() != k {
            return Err(Error::Dimension(format!("block matrix is {}x{}", mm.nrows(), mm.ncols())));
        }
        let m = k - 1;
        Self::new(
            mm.view((0, 0), (m, m)).into_owned(),
            mm.view((0, m), (m, 1)).column(0).into_owned(),
            mm.view((m, 0), (1, m)).row(0).into_owned(),
            mm[(m, m)],
        )
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &DMatrix<C64> {
        &self.a
    }

    pub fn b(&self) -> &DVector<C64> {
        &self.b
    }

    pub fn c(&self) -> &RowDVector<C64> {
        &self.c
    }

    pub fn d(&self) -> C64 {
        self.d
    }

    pub fn block(&self) -> DMatrix<C64> {
        let m = self.dim();
        let mut mm = DMatrix::zeros(m + 1, m + 1);
        mm.view_mut((0, 0), (m, m)).copy_from(&self.a);
        mm.view_mut((0, m), (m, 1)).copy_from(&self.b);
        mm.view_mut((m, 0), (1, m)).copy_from(&self.c);
        mm[(m, m)] = self.d;
        mm
    }

    /// `max |(MM* − I)_{ij}|`.
    pub fn coisometry_defect(&self) -> f64 {
        let mm = self.block();
        let g = &mm * mm.adjoint() - DMatrix::identity(mm.nrows(), mm.nrows());
        g.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_coisometry(&self) -> bool {
        self.coisometry_defect() <= COISOMETRY_TOL
    }

    /// Taylor coefficients of the classical transfer function
    /// `s₀(z) = D + zC(I − zA)⁻¹B`: `D, CB, CAB, …`.
    pub fn classical_coeffs(&self, n: usize) -> Vec<C64> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(self.d);
        let mut v = self.b.clone();
        for _ in 0..n {
            out.push((&self.c * &v)[(0, 0)]);
            v = &self.a * v;
        }
        out
    }

    /// `s₀` as an `𝐇₂` series through degree `n`.
    pub fn classical_series(&self, n: usize) -> EntireSeries {
        EntireSeries::h2(self.classical_coeffs(n))
    }
}

fn warn_if_not_coisometric(r: &CoisometryRealization) {
    let defect = r.coisometry_defect();
    if defect > COISOMETRY_TOL {
        log::warn!("realization is not coisometric: max |MM* - I| = {defect:.3e}");
    }
}

/// `s(z) = D + Σ_{n≥0} z^{n+1}/(n+1)! · C Aⁿ B`, summed until the terms stall.
///
/// A non-coisometric `M` is still evaluated; a warning goes to the log.
pub fn coisometry_realize_eval(r: &CoisometryRealization, z: C64) -> C64 {
    warn_if_not_coisometric(r);
    let mut sum = r.d;
    let mut v = r.b.clone();
    let mut weight = C64::one();
    for n in 0..10_000usize {
        weight = weight * z / (n + 1) as f64;
        let term = weight * (&r.c * &v)[(0, 0)];
        sum += term;
        let bound = weight.norm() * v.norm();
        if n > 8 && bound <= 1e-18 * sum.norm().max(1e-300) {
            break;
        }
        v = &r.a * v;
    }
    sum
}

/// `D + C (∫₀ᶻ e^{tA} dt) B`, read off the corner of `exp(z[[A, B], [0, 0]])`.
pub fn realize_eval_exponential(r: &CoisometryRealization, z: C64) -> C64 {
    let m = r.dim();
    let mut aug = DMatrix::zeros(m + 1, m + 1);
    aug.view_mut((0, 0), (m, m)).copy_from(&(&r.a * z));
    aug.view_mut((0, m), (m, 1)).copy_from(&(&r.b * z));
    let e = aug.exp();
    let col = e.view((0, m), (m, 1)).into_owned();
    r.d + (&r.c * col)[(0, 0)]
}

/// `(Ts₀)(z)` with `s₀` the classical transfer function truncated at degree `n`.
pub fn realize_eval_classical(r: &CoisometryRealization, z: C64, n: usize) -> C64 {
    t_map(&r.classical_series(n)).eval(z)
}

/// `K_s(z, w) = C e^{zA} e^{w̄A*} C*`.
pub fn ks_kernel(r: &CoisometryRealization, z: C64, w: C64) -> C64 {
    let left = &r.c * (&r.a * z).exp();
    let right = &r.c * (&r.a * w).exp();
    left.dot(&right.conjugate())
}

/// `((I − M_s M_s*) K_𝐇(·, w))(z)` on degree-`n` truncations. Since `T` is
/// unitary and `M_s = T M_{s₀} T⁻¹`, this is `T(g − L L* g)` with
/// `g_k = w̄ᵏ/k!` and `L` the Toeplitz matrix of `s₀`.
pub fn ks_kernel_truncated(s0: &EntireSeries, z: C64, w: C64, n: usize) -> C64 {
    let len = n + 1;
    let mut g = DVector::zeros(len);
    let mut term = C64::one();
    for k in 0..len {
        g[k] = term;
        term = term * w.conj() / (k + 1) as f64;
    }
    let l = toeplitz_matrix(&s0.h2_coeffs(), len);
    let h = &g - &l * (l.adjoint() * &g);
    t_map(&EntireSeries::h2(h.iter().copied().collect())).eval(z)
}

/// Gram matrix `[K_s(z_i, z_j)]`.
pub fn ks_gram(r: &CoisometryRealization, points: &[C64]) -> DMatrix<C64> {
    let rows: Vec<RowDVector<C64>> = points.par_iter().map(|&z| &r.c * (&r.a * z).exp()).collect();
    DMatrix::from_fn(points.len(), points.len(), |i, j| rows[i].dot(&rows[j].conjugate()))
}

/// Coefficients `k_{ab}` of `(1 − s₀(z)s₀(w)*)/(1 − zw̄) = Σ k_{ab} zᵃ w̄ᵇ`,
/// from the coefficients of `s₀` alone.
pub fn h_s0_kernel_coeffs(s0: &[C64], n: usize) -> DMatrix<C64> {
    let s = |k: usize| s0.get(k).copied().unwrap_or_default();
    DMatrix::from_fn(n + 1, n + 1, |a, b| {
        let delta = if a == b { C64::one() } else { C64::zero() };
        delta - (0..=a.min(b)).map(|k| s(a - k) * s(b - k).conj()).sum::<C64>()
    })
}

/// Mismatches of the two Gram matrices at the sample points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GramTransport {
    /// `Σ k_{ab} zᵃw̄ᵇ` against the closed form `(1 − s₀(z)s₀(w)*)/(1 − zw̄)`.
    pub before: f64,
    /// `Σ k_{ab} zᵃw̄ᵇ/(a!b!)` against `C e^{zA} e^{w̄A*} C*`.
    pub after: f64,
}

/// Applies `T` in both variables to the `H(s₀)` kernel and compares with `K_s`.
/// Points must lie in the unit disc for the `before` comparison.
pub fn gram_transport_check(r: &CoisometryRealization, points: &[C64], n: usize) -> Result<GramTransport> {
    if let Some(z) = points.iter().find(|z| z.norm() >= 1.0) {
        return Err(Error::InvalidArgument(format!("sample point {z} is outside the unit disc")));
    }
    let s0 = r.classical_coeffs(n);
    let s0_series = EntireSeries::h2(s0.clone());
    let k = h_s0_kernel_coeffs(&s0, n);
    let facts: Vec<f64> = (0..=n).map(factorial_f64).collect();
    let expand = |z: C64, w: C64, transported: bool| -> C64 {
        let mut total = C64::zero();
        for a in 0..=n {
            for b in 0..=n {
                let mut t = k[(a, b)] * z.powu(a as u32) * w.conj().powu(b as u32);
                if transported {
                    t /= facts[a] * facts[b];
                }
                total += t;
            }
        }
        total
    };
    let g_after = ks_gram(r, points);
    let mut before = 0.0f64;
    let mut after = 0.0f64;
    for (i, &z) in points.iter().enumerate() {
        for (j, &w) in points.iter().enumerate() {
            let closed = (C64::one() - s0_series.eval(z) * s0_series.eval(w).conj()) / (C64::one() - z * w.conj());
            before = before.max((expand(z, w, false) - closed).norm());
            after = after.max((expand(z, w, true) - g_after[(i, j)]).norm());
        }
    }
    Ok(GramTransport { before, after })
}

/// Outcome of `‖𝔡F‖² ≤ ‖F‖² − |F(0)|²` over random `F = Σ α_j K_s(·, w_j)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HsInequality {
    pub samples: usize,
    /// Largest `‖𝔡F‖² + |F(0)|² − ‖F‖²`, relative to `‖F‖²`.
    pub max_violation: f64,
    /// Largest gap between `α*Gα` and the state-space norm of the same `F`.
    pub norm_consistency: f64,
}

/// `H(s)` is the range of `x ↦ C e^{zA} x` with the range norm, so
/// `F = Ce^{zA}x` has `‖F‖ = ‖Px‖`, `𝔡F = Ce^{zA}Ax` and `F(0) = Cx`, with `P`
/// the projection off the unobservable subspace.
pub fn hs_inequality_check(r: &CoisometryRealization, samples: usize, seed: u64) -> HsInequality {
    let m = r.dim();
    let mut obs = DMatrix::zeros(m.max(1), m);
    let mut row = r.c.clone();
    for k in 0..m {
        obs.row_mut(k).copy_from(&row);
        row = &row * &r.a;
    }
    let svd = obs.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > 1e-10 * smax.max(1e-300))
        .collect();
    let proj = |x: &DVector<C64>| -> DVector<C64> {
        let mut out = DVector::zeros(m);
        for &i in &keep {
            let v = vt.row(i).adjoint();
            let coef = v.dotc(x);
            out += v * coef;
        }
        out
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_violation = f64::NEG_INFINITY;
    let mut norm_consistency = 0.0f64;
    for _ in 0..samples {
        let count = rng.random_range(1..=4usize);
        let ws: Vec<C64> = (0..count).map(|_| c(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5))).collect();
        let alphas: Vec<C64> = (0..count).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let mut x = DVector::zeros(m);
        for (&w, &al) in ws.iter().zip(&alphas) {
            let sec = (&r.c * (&r.a * w).exp()).adjoint();
            x += sec * al;
        }
        let gram = ks_gram(r, &ws);
        let av = DVector::from_vec(alphas.clone());
        let norm_gram = av.dotc(&(&gram * &av)).re;
        let px = proj(&x);
        let norm_f = px.norm_squared();
        norm_consistency = norm_consistency.max((norm_gram - norm_f).abs());
        let d_norm = proj(&(&r.a * &x)).norm_squared();
        let f0 = (&r.c * &x)[(0, 0)].norm_sqr();
        let scale = norm_f.max(1e-300);
        max_violation = max_violation.max((d_norm + f0 - norm_f) / scale);
    }
    HsInequality { samples, max_violation, norm_consistency }
}

/// `𝔡` and evaluation at zero on the orthonormal basis `u_k = zᵏ/k!` of `𝐇`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DdReport {
    pub n: usize,
    /// `𝔡T(zᵏ) = TR₀(zᵏ)` in exact arithmetic for every `k ≤ N`.
    pub intertwining_exact: bool,
    /// `‖(𝔡𝔡* − I)v‖_∞` with the last index masked.
    pub dd_star_error: f64,
    /// `‖(𝔡*𝔡 − I + C*C)v‖_∞`.
    pub d_star_d_error: f64,
}

impl DdReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.intertwining_exact && self.dd_star_error <= tol && self.d_star_d_error <= tol
    }
}

/// Matrix of `𝔡` in the basis `u_0, …, u_{N−1}`, computed by differentiating
/// each `u_k` and re-expanding.
pub fn derivative_matrix(n: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(n, n);
    for k in 1..n {
        // d/dz zᵏ/k! = k zᵏ⁻¹/k!, and zᵏ⁻¹ = (k−1)! u_{k−1}.
        m[(k - 1, k)] = c(k as f64 * factorial_f64(k - 1) / factorial_f64(k), 0.0);
    }
    m
}

pub fn dd_checks(n: usize, seed: u64) -> Result<DdReport> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("dd_checks needs N >= 4, got {n}")));
    }
    let intertwining_exact = (0..=n).all(|k| {
        // T(zᵏ) = zᵏ/k!, differentiated: k/k! at degree k−1.
        let lhs = if k == 0 { BigRational::zero() } else { BigRational::from_integer(k.into()) / fact_big(k) };
        // R₀zᵏ = zᵏ⁻¹, then T: 1/(k−1)!.
        let rhs = if k == 0 { BigRational::zero() } else { BigRational::one() / fact_big(k - 1) };
        lhs == rhs
    });

    let d = derivative_matrix(n);
    let eval0 = RowDVector::from_fn(n, |_, k| EntireSeries::monomial(Space::HSpace, k, k + 1).eval(C64::zero()) / factorial_f64(k));
    let ccs = eval0.adjoint() * &eval0;
    let id = DMatrix::<C64>::identity(n, n);
    let dd_star = &d * d.adjoint() - &id;
    let d_star_d = d.adjoint() * &d - (&id - ccs);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e1 = 0.0f64;
    let mut e2 = 0.0f64;
    for _ in 0..8 {
        let v = DVector::from_fn(n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let a = &dd_star * &v;
        let b = &d_star_d * &v;
        e1 = e1.max(a.iter().take(n - 1).map(|z| z.norm()).fold(0.0, f64::max));
        e2 = e2.max(b.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    Ok(DdReport { n, intertwining_exact, dd_star_error: e1, d_star_d_error: e2 })
}

fn fact_big(n: usize) -> BigRational {
    BigRational::from_integer((1..=n).fold(num_bigint::BigInt::one(), |a, k| a * k))
}

/// `K₀(r) = (1/π)∫_ℝ exp(−r cosh t) dt` by the trapezoid rule with step `h`,
/// which converges geometrically for this integrand.
pub fn bessel_k0(r: f64, h: f64) -> f64 {
    let mut sum = 0.5 * (-r).exp();
    let mut k = 1usize;
    loop {
        let arg = r * (k as f64 * h).cosh();
        if arg > 745.0 {
            break;
        }
        sum += (-arg).exp();
        k += 1;
    }
    2.0 * h * sum / std::f64::consts::PI
}

/// `∫_ℂ |zⁿ|² K₀(2|z|) dA / (n!)²`, with the radial integral taken in
/// `r = eᵘ` and `resolution` nodes per unit of `u` and of `t`.
///
/// The weight carries the constant that makes `‖1‖ = 1`: the `1/π` in front of
/// the integral over all of `ℝ` equals `2/π` times the usual `K₀`.
pub fn bessel_norm_check(n: usize, resolution: usize) -> Result<f64> {
    if n > 8 {
        return Err(Error::InvalidArgument(format!("bessel_norm_check supports n <= 8, got {n}")));
    }
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    let h = 1.0 / resolution as f64;
    let (lo, hi) = (-25.0f64, 5.0f64);
    let steps = ((hi - lo) / h).ceil() as usize;
    let power = (2 * n + 2) as f64;
    let radial: f64 = (0..=steps)
        .into_par_iter()
        .map(|j| {
            let u = lo + j as f64 * h;
            let r = u.exp();
            (power * u).exp() * bessel_k0(2.0 * r, h)
        })
        .sum::<f64>()
        * h;
    let total = 2.0 * std::f64::consts::PI * radial;
    let f = factorial_f64(n);
    Ok(total / (f * f))
}

/// `V`: the coefficient of `zⁿ` becomes the coefficient of `ζ_n`.
pub fn v_transport(f: &EntireSeries, zt: &ZetaTable) -> Result<ExpandableFunction> {
    let coeffs = to_exact(&f.coeffs)?;
    let n = f.degree();
    if n > zt.max_degree() {
        return Err(Error::TableTooSmall { required: n, available: zt.max_degree() });
    }
    Ok(ExpandableFunction::truncated(coeffs, n))
}

fn to_exact(v: &[C64]) -> Result<Vec<GaussianRational>> {
    v.iter()
        .map(|&z| {
            GaussianRational::from_complex64(z)
                .ok_or_else(|| Error::InvalidArgument(format!("non-finite coefficient {z}")))
        })
        .collect()
}

/// `V𝔡F` and `δ_x VF` on the table window, both in exact arithmetic.
pub fn v_intertwining(f: &EntireSeries, zt: &ZetaTable) -> Result<(LatticeFunction, LatticeFunction)> {
    let exact = to_exact(&f.coeffs)?;
    let n = f.degree();
    if n > zt.max_degree() {
        return Err(Error::TableTooSmall { required: n, available: zt.max_degree() });
    }
    let deriv: Vec<GaussianRational> =
        exact.iter().enumerate().skip(1).map(|(k, a)| a.scale_int(k as i64)).collect();
    let lhs = ExpandableFunction::truncated(deriv, n.saturating_sub(1)).values(zt)?;
    let rhs = ExpandableFunction::truncated(exact, n).values(zt)?.delta_x()?;
    let lhs = lhs.restrict(rhs.window())?;
    Ok((lhs, rhs))
}

/// `e_{x,y}(A) = (I+A)^x ((1+i)I + iA)((1+i)I + A)⁻¹)^y`.
pub fn exy_matrix(a: &DMatrix<C64>, x: i64, y: i64) -> Result<DMatrix<C64>> {
    let m = a.nrows();
    let id = DMatrix::<C64>::identity(m, m);
    let one_i = c(1.0, 1.0);
    let first = matrix_powi(&(&id + a), x, "I + A")?;
    let den = (&id * one_i + a)
        .try_inverse()
        .ok_or_else(|| Error::SingularMatrix("(1+i)I + A".into()))?;
    let ratio = (&id * one_i + a * c(0.0, 1.0)) * den;
    let second = matrix_powi(&ratio, y, "(1+i)I + iA")?;
    Ok(first * second)
}

fn matrix_powi(m: &DMatrix<C64>, e: i64, what: &str) -> Result<DMatrix<C64>> {
    let base = if e < 0 {
        m.clone().try_inverse().ok_or_else(|| Error::SingularMatrix(what.into()))?
    } else {
        m.clone()
    };
    let mut result = DMatrix::identity(m.nrows(), m.nrows());
    let mut sq = base;
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &sq;
        }
        sq = &sq * &sq;
        k >>= 1;
    }
    Ok(result)
}

/// `K_s(p₁, p₂) = C e_{p₁}(A) e_{p₂}(A)* C*` on the lattice. Requires
/// `‖A‖ < √2`.
pub fn hda_multiplier_kernel(r: &CoisometryRealization, p1: (i64, i64), p2: (i64, i64)) -> Result<C64> {
    let norm = spectral_norm(&r.a);
    let bound = std::f64::consts::SQRT_2;
    if norm >= bound {
        return Err(Error::NormTooLarge { norm, bound });
    }
    let e1 = exy_matrix(&r.a, p1.0, p1.1)?;
    let e2 = exy_matrix(&r.a, p2.0, p2.1)?;
    let left = &r.c * e1;
    let right = &r.c * e2;
    Ok(left.dot(&right.conjugate()))
}

/// The same kernel from `e_{x,y}(A) = Σ_{n≤N} ζ_n(x,y) Aⁿ/n!`, i.e. `V`
/// applied in both variables to `Σ zᵃw̄ᵇ C Aᵃ A*ᵇ C*/(a!b!)`.
pub fn hda_kernel_series(
    r: &CoisometryRealization,
    p1: (i64, i64),
    p2: (i64, i64),
    zt: &ZetaTable,
    n: usize,
) -> Result<C64> {
    if n > zt.max_degree() {
        return Err(Error::TableTooSmall { required: n, available: zt.max_degree() });
    }
    let e = |p: (i64, i64), k: usize| -> Result<C64> {
        let v = zt.value(k, p.0, p.1)?;
        Ok(v.to_complex64() / factorial_f64(k))
    };
    let m = r.dim();
    let mut left = RowDVector::zeros(m);
    let mut right = RowDVector::zeros(m);
    let mut row = r.c.clone();
    for k in 0..=n {
        left += &row * e(p1, k)?;
        right += &row * e(p2, k)?;
        row = &row * &r.a;
    }
    Ok(left.dot(&right.conjugate()))
}

/// Largest `|T⁻¹(p◇F)|` coefficient past half the truncation, relative to the
/// largest coefficient overall.
pub fn diamond_rational_residual(f: &EntireSeries, p: &EntireSeries) -> f64 {
    let mut padded = p.coeffs.clone();
    padded.resize(padded.len().max(f.coeffs.len()), C64::zero());
    let q = diamond_product(&EntireSeries::h_space(padded), f).h2_coeffs();
    let scale = q.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let start = q.len() / 2 + 1;
    q.iter().skip(start).map(|z| z.norm()).fold(0.0, f64::max) / scale
}

/// `p ◇ F` is a polynomial up to `tol`, i.e. `F = Tf₀` with `f₀` rational and
/// denominator `T⁻¹p`. The candidate `p` must not vanish at the origin.
pub fn diamond_rational_check(f: &EntireSeries, p: &EntireSeries, tol: f64) -> Result<bool> {
    if p.coeff(0).norm() == 0.0 {
        return Err(Error::InvalidArgument("candidate polynomial vanishes at the origin".into()));
    }
    Ok(diamond_rational_residual(f, p) <= tol)
}

mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<C64>, D::Error> {
        let raw: Vec<Num> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(C64::from).collect())
    }
}

/// A real number or a `[re, im]` pair.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Real(f64),
    Pair([f64; 2]),
}

impl From<Num> for C64 {
    fn from(n: Num) -> Self {
        match n {
            Num::Real(r) => c(r, 0.0),
            Num::Pair([re, im]) => c(re, im),
        }
    }
}

impl From<C64> for Num {
    fn from(z: C64) -> Self {
        Num::Pair([z.re, z.im])
    }
}

#[derive(Serialize, Deserialize)]
struct RawCoisometry {
    #[serde(rename = "A")]
    a: Vec<Vec<Num>>,
    #[serde(rename = "B")]
    b: Vec<Num>,
    #[serde(rename = "C")]
    c: Vec<Num>,
    #[serde(rename = "D")]
    d: Num,
}

impl Serialize for CoisometryRealization {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawCoisometry {
            a: self.a.row_iter().map(|row| row.iter().map(|&z| z.into()).collect()).collect(),
            b: self.b.iter().map(|&z| z.into()).collect(),
            c: self.c.iter().map(|&z| z.into()).collect(),
            d: self.d.into(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoisometryRealization {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawCoisometry::deserialize(d)?;
        let m = raw.a.len();
        if raw.a.iter().any(|row| row.len() != m) {
            return Err(serde::de::Error::custom("A must be square"));
        }
        let a = DMatrix::from_fn(m, m, |i, j| C64::from(raw.a[i][j]));
        let b = DVector::from_iterator(raw.b.len(), raw.b.into_iter().map(C64::from));
        let cc = RowDVector::from_iterator(raw.c.len(), raw.c.into_iter().map(C64::from));
        CoisometryRealization::new(a, b, cc, raw.d.into()).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Window;
    use crate::zeta::zeta_by_extension;
    use proptest::prelude::*;
    use rand::Rng;

    fn rand_series(n: usize, seed: u64) -> Vec<C64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..=n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
    }

    /// Power series of `exp(g)` via `n f_n = Σ k g_k f_{n−k}`.
    fn series_exp(g: &[C64]) -> Vec<C64> {
        let mut f = vec![g[0].exp()];
        for n in 1..g.len() {
            let s: C64 = (1..=n).map(|k| g[k] * k as f64 * f[n - k]).sum();
            f.push(s / n as f64);
        }
        f
    }

    #[test]
    fn t_map_examples() {
        let z3 = EntireSeries::monomial(Space::H2, 3, 4);
        assert!((t_map(&z3).coeff(3) - c(1.0 / 6.0, 0.0)).norm() < 1e-16);
        let k = EntireSeries::h2(vec![c(2.0, -1.0)]);
        assert_eq!(t_map(&k).coeffs(), k.coeffs());
        let f = EntireSeries::h2(rand_series(30, 1));
        let back = t_inverse(&t_map(&f));
        for (a, b) in back.coeffs().iter().zip(f.coeffs()) {
            assert!((a - b).norm() <= 1e-15 * b.norm().max(1.0));
        }
        assert!((t_map(&f).norm() - f.norm()).abs() < 1e-12);
    }

    #[test]
    fn diamond_examples() {
        let z = EntireSeries::monomial(Space::HSpace, 1, 3);
        let zz = diamond_product(&z, &z);
        assert!((zz.coeff(2) - c(0.5, 0.0)).norm() < 1e-15);
        let one = EntireSeries::monomial(Space::HSpace, 0, 20);
        let f = t_map(&EntireSeries::h2(rand_series(19, 2)));
        assert_eq!(diamond_product(&one, &f), f);

        let a = c(0.7, -0.4);
        let e = exp_series(a, 40);
        let mut lin = vec![C64::zero(); 41];
        lin[0] = C64::one();
        lin[1] = -a;
        let prod = diamond_product(&EntireSeries::h_space(lin), &e);
        assert!((prod.coeff(0) - 1.0).norm() < 1e-14);
        assert!(prod.coeffs().iter().skip(1).all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn kernel_reproduces() {
        let f = t_map(&EntireSeries::h2(rand_series(40, 3)));
        let w = c(0.8, -1.3);
        let ip = f.inner(&kernel_section(w, 40)).unwrap();
        assert!((ip - f.eval(w)).norm() < 1e-10);
    }

    #[test]
    fn multiplier_norm_examples() {
        let z = EntireSeries::monomial(Space::H2, 1, 2);
        assert!(multiplier_norm(&z, 40) <= 1.0 + 1e-12);
        let k = EntireSeries::h2(vec![c(0.3, 0.4)]);
        assert!((multiplier_norm(&k, 30) - 0.5).abs() < 1e-12);
        let b = blaschke_series(&[c(-0.5, 0.0)], C64::one(), 60).unwrap();
        assert!((b.coeff(0) - 0.5).norm() < 1e-15);
        assert!((b.coeff(1) - 0.75).norm() < 1e-15);
        let nb = multiplier_norm(&b, 60);
        assert!(nb <= 1.0 + 1e-8 && nb > 0.99, "{nb}");
    }

    #[test]
    fn realization_examples() {
        let r = CoisometryRealization::identity_function();
        assert!(r.is_coisometry());
        for z in [c(0.3, 2.0), c(-1.5, 0.1)] {
            assert!((coisometry_realize_eval(&r, z) - z).norm() < 1e-14);
            assert!((ks_kernel(&r, z, c(1.0, 1.0)) - 1.0).norm() < 1e-14);
        }
        let mut rb = CoisometryRealization::random_unitary(3, 4);
        rb.b.fill(C64::zero());
        assert_eq!(coisometry_realize_eval(&rb, c(2.0, -1.0)), rb.d());
    }

    #[test]
    fn three_routes_agree() {
        let r = CoisometryRealization::random_unitary(4, 5);
        assert!(r.is_coisometry());
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let z = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let a = coisometry_realize_eval(&r, z);
            assert!((a - realize_eval_classical(&r, z, 64)).norm() < 1e-10);
            assert!((a - realize_eval_exponential(&r, z)).norm() < 1e-10);
        }
    }

    #[test]
    fn ks_kernel_routes() {
        let r = CoisometryRealization::random_unitary(3, 7);
        let s0 = r.classical_series(80);
        assert!((ks_kernel(&r, C64::zero(), C64::zero()) - r.c().norm_squared()).norm() < 1e-14);
        assert!((r.c().norm_squared() - (1.0 - r.d().norm_sqr())).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let z = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let w = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let a = ks_kernel(&r, z, w);
            let b = ks_kernel_truncated(&s0, z, w, 64);
            assert!((a - b).norm() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn constant_multiplier_kernel() {
        let cst = c(0.6, 0.0);
        let r = CoisometryRealization::constant(cst, 40).unwrap();
        let (z, w) = (c(1.0, 0.5), c(-0.7, 1.2));
        let expect = kernel_h(z, w, 60) * (1.0 - cst.norm_sqr());
        assert!((ks_kernel(&r, z, w) - expect).norm() < 1e-10);
        assert!((coisometry_realize_eval(&r, z) - cst).norm() < 1e-15);
        let s0 = EntireSeries::h2(vec![cst]);
        assert!((ks_kernel_truncated(&s0, z, w, 60) - expect).norm() < 1e-10);
    }

    #[test]
    fn dd_identities() {
        let rep = dd_checks(40, 9).unwrap();
        assert!(rep.holds(1e-12), "{rep:?}");
        assert!(dd_checks(3, 0).is_err());
        let d = derivative_matrix(6);
        let one = DVector::from_fn(6, |i, _| if i == 0 { C64::one() } else { C64::zero() });
        assert!((d.adjoint() * &d * &one).norm() == 0.0);
    }

    #[test]
    fn bessel_weight_normalization() {
        for (n, res) in [(0, 8), (1, 8), (4, 8), (8, 8)] {
            let ratio = bessel_norm_check(n, res).unwrap();
            assert!((ratio - 1.0).abs() < 5e-3, "n = {n}: {ratio}");
        }
        assert!(bessel_norm_check(9, 8).is_err());
        // Direct value: K₀(1) = 0.42102443824070834 in the usual normalization.
        let k = bessel_k0(1.0, 0.05) * std::f64::consts::PI / 2.0;
        assert!((k - 0.421_024_438_240_708_34).abs() < 1e-13);
    }

    #[test]
    fn transport_to_lattice() {
        let w = Window::new(-2, 3, -2, 3).unwrap();
        let zt = zeta_by_extension(12, &w);
        let e3 = t_map(&EntireSeries::monomial(Space::H2, 3, 4));
        let v = v_transport(&e3, &zt).unwrap().values(&zt).unwrap();
        for (x, y) in w.points() {
            let expect = zt.value(3, x, y).unwrap().to_complex64() / 6.0;
            assert!((v.get(x, y).unwrap().to_complex64() - expect).norm() < 1e-14);
        }
        let one = EntireSeries::h_space(vec![C64::one()]);
        assert!(v_transport(&one, &zt).unwrap().values(&zt).unwrap().values().iter().all(|g| g.is_one()));

        let f = EntireSeries::h_space(rand_series(12, 10));
        let (lhs, rhs) = v_intertwining(&f, &zt).unwrap();
        assert_eq!(lhs, rhs);
        assert!(v_transport(&EntireSeries::h_space(rand_series(13, 1)), &zt).is_err());
    }

    #[test]
    fn v_of_exponential_is_exy_partial_sum() {
        let w = Window::new(0, 2, -1, 2).unwrap();
        let zt = zeta_by_extension(30, &w);
        let t = 0.25;
        let vals = v_transport(&exp_series(c(t, 0.0), 30), &zt).unwrap().values(&zt).unwrap();
        for (x, y) in w.points() {
            let closed = c(1.0 + t, 0.0).powi(x as i32)
                * (c(1.0, 1.0 + t) / c(1.0 + t, 1.0)).powi(y as i32);
            assert!((vals.get(x, y).unwrap().to_complex64() - closed).norm() < 1e-12);
        }
    }

    #[test]
    fn hda_kernel_routes() {
        let w = Window::new(-1, 3, -2, 2).unwrap();
        let zt = zeta_by_extension(30, &w);
        let t = 0.3;
        let scalar = CoisometryRealization::new(
            DMatrix::from_element(1, 1, c(t, 0.0)),
            DVector::from_element(1, C64::zero()),
            RowDVector::from_element(1, C64::one()),
            C64::zero(),
        )
        .unwrap();
        let ex = |x: i32, y: i32| c(1.0 + t, 0.0).powi(x) * (c(1.0, 1.0 + t) / c(1.0 + t, 1.0)).powi(y);
        let k = hda_multiplier_kernel(&scalar, (2, 1), (-1, -2)).unwrap();
        assert!((k - ex(2, 1) * ex(-1, -2).conj()).norm() < 1e-12);

        let mut r = CoisometryRealization::random_unitary(3, 11);
        r.a *= c(0.4, 0.0);
        let cc = r.c().norm_squared();
        assert!((hda_multiplier_kernel(&r, (0, 0), (0, 0)).unwrap() - cc).norm() < 1e-14);
        for p1 in [(0, 0), (2, 1), (-1, 2), (3, -2)] {
            for p2 in [(1, 1), (-1, -1), (2, 0)] {
                let a = hda_multiplier_kernel(&r, p1, p2).unwrap();
                let b = hda_kernel_series(&r, p1, p2, &zt, 30).unwrap();
                assert!((a - b).norm() < 1e-8, "{p1:?} {p2:?}: {a} vs {b}");
            }
        }

        let big = CoisometryRealization::new(
            DMatrix::from_element(1, 1, c(1.5, 0.0)),
            DVector::zeros(1),
            RowDVector::from_element(1, C64::one()),
            C64::zero(),
        )
        .unwrap();
        assert!(matches!(hda_multiplier_kernel(&big, (0, 0), (0, 0)), Err(Error::NormTooLarge { .. })));
        let sing = CoisometryRealization::new(
            DMatrix::from_element(1, 1, c(-1.0, -1.0) * 0.99),
            DVector::zeros(1),
            RowDVector::from_element(1, C64::one()),
            C64::zero(),
        )
        .unwrap();
        assert!(hda_multiplier_kernel(&sing, (0, 1), (0, 0)).is_ok());
        let sing_exact = CoisometryRealization::new(
            DMatrix::from_element(1, 1, c(-1.0, 0.0)),
            DVector::zeros(1),
            RowDVector::from_element(1, C64::one()),
            C64::zero(),
        )
        .unwrap();
        assert!(matches!(
            hda_multiplier_kernel(&sing_exact, (-1, 0), (0, 0)),
            Err(Error::SingularMatrix(_))
        ));
    }

    #[test]
    fn rationality_examples() {
        let n = 40;
        let geom: Vec<C64> = (0..=n).map(|k| c(0.5f64.powi(k as i32), 0.0)).collect();
        let f = t_map(&EntireSeries::h2(geom));
        let p = EntireSeries::h_space(vec![C64::one(), c(-0.5, 0.0)]);
        assert!(diamond_rational_check(&f, &p, 1e-10).unwrap());

        let poly = EntireSeries::h_space(vec![c(1.0, 0.0), c(2.0, 1.0), c(0.0, 3.0)]);
        let one = EntireSeries::h_space(vec![C64::one()]);
        let padded = EntireSeries::h_space([poly.coeffs().to_vec(), vec![C64::zero(); 37]].concat());
        assert!(diamond_rational_check(&padded, &one, 1e-10).unwrap());

        let g = rand_series(n, 12);
        let wild = t_map(&EntireSeries::h2(series_exp(&g)));
        assert!(!diamond_rational_check(&wild, &p, 1e-10).unwrap());
        assert!(!diamond_rational_check(&wild, &one, 1e-10).unwrap());
        let zero_at_origin = EntireSeries::h_space(vec![C64::zero(), C64::one()]);
        assert!(diamond_rational_check(&f, &zero_at_origin, 1e-10).is_err());
    }

    #[test]
    fn gram_transport() {
        let r = CoisometryRealization::random_unitary(3, 13);
        let pts = [c(0.1, 0.2), c(-0.4, 0.3), c(0.5, -0.5), c(0.0, 0.0), c(-0.2, -0.6)];
        let rep = gram_transport_check(&r, &pts, 64).unwrap();
        assert!(rep.before < 1e-8 && rep.after < 1e-8, "{rep:?}");
        assert!(gram_transport_check(&r, &[c(1.0, 0.0)], 10).is_err());
    }

    #[test]
    fn hs_inequality_holds() {
        for seed in 0..4 {
            let r = CoisometryRealization::random_unitary(3, 100 + seed);
            let rep = hs_inequality_check(&r, 20, seed);
            assert!(rep.max_violation <= 1e-8, "{rep:?}");
            assert!(rep.norm_consistency < 1e-8, "{rep:?}");
        }
    }

    #[test]
    fn realization_json_round_trip() {
        let r = CoisometryRealization::random_unitary(2, 14);
        let s = serde_json::to_string(&r).unwrap();
        let back: CoisometryRealization = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        let simple: CoisometryRealization =
            serde_json::from_str(r#"{"A":[[0]],"B":[1],"C":[1],"D":0}"#).unwrap();
        assert_eq!(simple, CoisometryRealization::identity_function());
        assert!(serde_json::from_str::<CoisometryRealization>(r#"{"A":[[0,1]],"B":[1],"C":[1],"D":0}"#).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn t_is_unitary(seed in any::<u64>(), n in 1usize..50) {
            let f = EntireSeries::h2(rand_series(n, seed));
            prop_assert!((t_map(&f).norm() - f.norm()).abs() <= 1e-12 * f.norm().max(1.0));
        }

        #[test]
        fn diamond_is_transported_product(s1 in any::<u64>(), s2 in any::<u64>(), z in -2.0f64..2.0) {
            let (f, g) = (rand_series(12, s1), rand_series(12, s2));
            let mut prod = vec![C64::zero(); 25];
            for i in 0..=12 { for j in 0..=12 { prod[i + j] += f[i] * g[j]; } }
            let lhs = diamond_product(
                &t_map(&EntireSeries::h2([f, vec![C64::zero(); 12]].concat())),
                &t_map(&EntireSeries::h2([g, vec![C64::zero(); 12]].concat())),
            );
            let rhs = t_map(&EntireSeries::h2(prod));
            let zc = c(z, 0.5);
            prop_assert!((lhs.eval(zc) - rhs.eval(zc)).norm() < 1e-10);
        }

        #[test]
        fn schur_multiplier_contracts(seed in any::<u64>(), zero in 0.0f64..0.9, arg in 0.0f64..std::f64::consts::TAU) {
            let b = blaschke_series(&[C64::from_polar(zero, arg)], C64::one(), 48).unwrap();
            let s0 = EntireSeries::h2(b.coeffs().iter().map(|z| z * 0.9).collect());
            let f = EntireSeries::h2(rand_series(48, seed));
            let (lhs, rhs) = multiplier_contractivity(&s0, &f);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        }

        #[test]
        fn ks_gram_is_psd(seed in any::<u64>()) {
            let r = CoisometryRealization::random_unitary(3, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
            let pts: Vec<C64> = (0..6).map(|_| c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect();
            let g = ks_gram(&r, &pts);
            let herm = (&g + g.adjoint()) * c(0.5, 0.0);
            let scale = g.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
            let min = herm.symmetric_eigen().eigenvalues.min();
            prop_assert!(min >= -1e-12 * scale);
        }
    }
}
