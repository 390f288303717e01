//! Rational functions on ℤ₊ in state-space form `f(x) = p(x) + C(xI − A)⁻¹B`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::basis::{fourier_1d, poly1_to_factorial};
use crate::error::{Error, Result};
use crate::numeric::{gr_string, ratio_to_f64, GaussianRational, Poly1};
use crate::products::{expandability_estimate, ExpandableFunction};
use crate::zeta::ZetaTable;

/// Past this many exact determinant checks the spectrum test gives up.
const MAX_SPECTRUM_SCAN: u64 = 100_000;

/// Scalar realization with exact entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRealization", into = "RawRealization")]
pub struct Realization {
    a: Vec<Vec<GaussianRational>>,
    b: Vec<GaussianRational>,
    c: Vec<GaussianRational>,
    poly: Poly1,
}

#[derive(Serialize, Deserialize)]
struct RawRealization {
    #[serde(rename = "A")]
    a: Vec<Row>,
    #[serde(rename = "B", with = "gr_string::vec")]
    b: Vec<GaussianRational>,
    #[serde(rename = "C", with = "gr_string::vec")]
    c: Vec<GaussianRational>,
    #[serde(default)]
    poly: Poly1,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct Row(#[serde(with = "gr_string::vec")] Vec<GaussianRational>);

impl TryFrom<RawRealization> for Realization {
    type Error = Error;
    fn try_from(r: RawRealization) -> Result<Self> {
        Realization::new(r.a.into_iter().map(|row| row.0).collect(), r.b, r.c, r.poly)
    }
}

impl From<Realization> for RawRealization {
    fn from(r: Realization) -> Self {
        Self { a: r.a.into_iter().map(Row).collect(), b: r.b, c: r.c, poly: r.poly }
    }
}

impl Realization {
    /// Checks shapes and that `σ(A) ∩ ℤ₊ = ∅`.
    pub fn new(
        a: Vec<Vec<GaussianRational>>,
        b: Vec<GaussianRational>,
        c: Vec<GaussianRational>,
        poly: Poly1,
    ) -> Result<Self> {
        let n = a.len();
        if let Some(row) = a.iter().find(|r| r.len() != n) {
            return Err(Error::ShapeMismatch { expected: n, found: row.len() });
        }
        if b.len() != n {
            return Err(Error::ShapeMismatch { expected: n, found: b.len() });
        }
        if c.len() != n {
            return Err(Error::ShapeMismatch { expected: n, found: c.len() });
        }
        let r = Self { a, b, c, poly };
        r.check_spectrum()?;
        Ok(r)
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Vec<GaussianRational>] {
        &self.a
    }

    pub fn b(&self) -> &[GaussianRational] {
        &self.b
    }

    pub fn c(&self) -> &[GaussianRational] {
        &self.c
    }

    pub fn poly(&self) -> &Poly1 {
        &self.poly
    }

    /// No resolvent part contributes.
    pub fn is_polynomial(&self) -> bool {
        self.dim() == 0 || self.b.iter().all(Zero::is_zero) || self.c.iter().all(Zero::is_zero)
    }

    /// Every eigenvalue has `|λ| ≤` this bound (Gershgorin, with `|re| + |im|`
    /// standing in for the modulus).
    pub fn gershgorin_bound(&self) -> f64 {
        self.a
            .iter()
            .map(|row| row.iter().map(|v| ratio_to_f64(&v.l1_norm())).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn check_spectrum(&self) -> Result<()> {
        if self.dim() == 0 {
            return Ok(());
        }
        let bound = self.gershgorin_bound().floor();
        if bound > MAX_SPECTRUM_SCAN as f64 {
            return Err(Error::InvalidArgument(format!(
                "Gershgorin bound {bound} too large to scan ℤ₊ exactly"
            )));
        }
        for x in 0..=bound as u64 {
            if determinant(&self.resolvent_matrix(x as i64)).is_zero() {
                return Err(Error::SingularResolvent(x as i64));
            }
        }
        Ok(())
    }

    fn resolvent_matrix(&self, x: i64) -> Vec<Vec<GaussianRational>> {
        let xv = GaussianRational::from(x);
        self.a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, v)| if i == j { &xv - v } else { -v })
                    .collect()
            })
            .collect()
    }
}

/// Exact determinant by Gaussian elimination over ℚ(i).
pub fn determinant(m: &[Vec<GaussianRational>]) -> GaussianRational {
    let n = m.len();
    let mut a: Vec<Vec<GaussianRational>> = m.to_vec();
    let mut det = GaussianRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return GaussianRational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= &pivot;
        let inv = pivot.inv().expect("nonzero pivot");
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            for k in col..n {
                let sub = &factor * &a[col][k];
                a[r][k] -= &sub;
            }
        }
    }
    det
}

/// Solves `M v = rhs` exactly; `None` when `M` is singular.
pub fn solve_exact(m: &[Vec<GaussianRational>], rhs: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
    let n = m.len();
    let mut a: Vec<Vec<GaussianRational>> =
        m.iter().zip(rhs).map(|(row, r)| row.iter().cloned().chain([r.clone()]).collect()).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        let inv = a[col][col].inv().ok()?;
        for k in col..=n {
            a[col][k] = &a[col][k] * &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for k in col..=n {
                let sub = &factor * &a[col][k];
                a[r][k] -= &sub;
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// `p(x) + C(xI − A)⁻¹B`, exactly.
pub fn eval_realization(r: &Realization, x: u64) -> Result<GaussianRational> {
    let x = x as i64;
    let mut value = r.poly.eval_int(x);
    if r.dim() > 0 {
        let v = solve_exact(&r.resolvent_matrix(x), &r.b).ok_or(Error::SingularResolvent(x))?;
        value += &r.c.iter().zip(&v).map(|(c, v)| c * v).sum::<GaussianRational>();
    }
    Ok(value)
}

/// Diagonal realization of `p(x) + Σ_k residue_k / (x − λ_k)`.
pub fn realize_from_poles(poles: &[(GaussianRational, GaussianRational)], p: Poly1) -> Result<Realization> {
    for (lambda, _) in poles {
        if let Some(k) = lambda.as_integer() {
            if k >= num_bigint::BigInt::zero() {
                return Err(Error::PoleOnLattice(lambda.to_string()));
            }
        }
    }
    let n = poles.len();
    let a = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { poles[i].0.clone() } else { GaussianRational::zero() })
                .collect()
        })
        .collect();
    let b = vec![GaussianRational::one(); n];
    let c = poles.iter().map(|(_, r)| r.clone()).collect();
    Realization::new(a, b, c, p)
}

/// Transform of `f(0), …, f(N)` and the proxy `max_{N/2≤n≤N} (|f̂(n)| n!)^{1/n}`,
/// which stays near or below 1 for rational `f`.
pub fn fourier_decay_check(r: &Realization, n: usize) -> Result<f64> {
    let vals: Vec<GaussianRational> = (0..=n as u64).map(|x| eval_realization(r, x)).collect::<Result<_>>()?;
    Ok(expandability_estimate(&fourier_1d(&vals), n))
}

/// The rational discrete analytic function with restriction `r` on ℤ₊,
/// as coefficients through degree `N` (finite support when `r` is a polynomial).
pub fn rational_da_extend(r: &Realization, zt: &ZetaTable, n: usize) -> Result<ExpandableFunction> {
    if zt.max_degree() < n {
        return Err(Error::TableTooSmall { required: n, available: zt.max_degree() });
    }
    if r.is_polynomial() {
        return Ok(ExpandableFunction::polynomial(poly1_to_factorial(r.poly()).coeffs().to_vec()));
    }
    let vals: Vec<GaussianRational> = (0..=n as u64).map(|x| eval_realization(r, x)).collect::<Result<_>>()?;
    Ok(ExpandableFunction::from_restriction_samples(&vals).with_rational(true))
}
