use num_traits::{One, Zero};

use super::gaussian::GaussianRational;
use crate::error::{Error, Result};

/// Power series in `z` over ℚ(i), truncated after the coefficient of `z^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<GaussianRational>,
}

impl TruncatedSeries {
    /// Pads or cuts `coeffs` to exactly `order + 1` entries.
    pub fn new(mut coeffs: Vec<GaussianRational>, order: usize) -> Self {
        coeffs.resize(order + 1, GaussianRational::zero());
        Self { coeffs }
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![GaussianRational::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<GaussianRational> {
        self.coeffs
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let mut out = vec![GaussianRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Self { coeffs: out }
    }

    /// Reciprocal by the recursive division identity; needs a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0_inv = self.coeffs[0].inv()?;
        let n = self.order();
        let mut out: Vec<GaussianRational> = Vec::with_capacity(n + 1);
        out.push(c0_inv.clone());
        for k in 1..=n {
            let s: GaussianRational = (1..=k).map(|j| &self.coeffs[j] * &out[k - j]).sum();
            out.push(-(&s * &c0_inv));
        }
        Ok(Self { coeffs: out })
    }

    /// Integer power; negative exponents go through [`Self::reciprocal`].
    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.reciprocal()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one(self.order());
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    /// Geometric expansion of `1 / (a + b z)` for `a ≠ 0`.
    pub fn inverse_linear(a: &GaussianRational, b: &GaussianRational, order: usize) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let a_inv = a.inv()?;
        let ratio = -(b * &a_inv);
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = a_inv;
        for _ in 0..=order {
            coeffs.push(term.clone());
            term = &term * &ratio;
        }
        Ok(Self { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::gaussian::gr;

    #[test]
    fn reciprocal_of_one_plus_z() {
        let s = TruncatedSeries::new(vec![gr(1, 0), gr(1, 0)], 5);
        let r = s.reciprocal().unwrap();
        let expected: Vec<_> = (0..=5).map(|k| gr(if k % 2 == 0 { 1 } else { -1 }, 0)).collect();
        assert_eq!(r.coeffs(), &expected[..]);
        assert_eq!(TruncatedSeries::inverse_linear(&gr(1, 0), &gr(1, 0), 5).unwrap(), r);
        assert_eq!(s.mul(&r), TruncatedSeries::one(5));
    }

    #[test]
    fn binomial_power() {
        let s = TruncatedSeries::new(vec![gr(1, 0), gr(1, 0)], 4);
        let p = s.powi(3).unwrap();
        assert_eq!(p.coeffs(), &[gr(1, 0), gr(3, 0), gr(3, 0), gr(1, 0), gr(0, 0)]);
        let q = s.powi(-2).unwrap();
        // (1+z)^{-2} = Σ (-1)^k (k+1) z^k
        assert_eq!(q.coeffs(), &[gr(1, 0), gr(-2, 0), gr(3, 0), gr(-4, 0), gr(5, 0)]);
    }
}
