use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::gaussian::{gr_string, GaussianRational};

/// Univariate polynomial over ℚ(i), coefficients indexed by degree.
///
/// The coefficient vector never ends in a zero; the zero polynomial is the
/// empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly1 {
    #[serde(with = "gr_string::vec")]
    coeffs: Vec<GaussianRational>,
}

impl Poly1 {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![GaussianRational::zero(), GaussianRational::one()])
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GaussianRational::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        self.coeffs
            .iter()
            .rev()
            .fold(GaussianRational::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_int(&self, x: i64) -> GaussianRational {
        self.eval(&GaussianRational::from(x))
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(GaussianRational::one()), |acc, _| &acc * self)
    }

    /// `p(x + 1)`, via Horner in the shifted variable.
    pub fn shift_one(&self) -> Self {
        let x_plus_one = Self::from_integers(&[1, 1]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * &x_plus_one) + &Self::constant(c.clone()))
    }

    /// Forward difference `p(x + 1) - p(x)`.
    pub fn forward_difference(&self) -> Self {
        &self.shift_one() - self
    }

    /// Smallest root in ℤ₊, if any, found exactly.
    ///
    /// After clearing denominators an integer root `r ≥ 1` divides both parts
    /// of the lowest nonzero coefficient, and a Cauchy bound caps the search.
    pub fn first_nonneg_integer_root(&self) -> Option<u64> {
        let lead = self.leading()?;
        if self.coeffs[0].is_zero() {
            return Some(0);
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| {
            acc.lcm(c.re().denom()).lcm(c.im().denom())
        });
        let scaled: Vec<(BigInt, BigInt)> = self
            .coeffs
            .iter()
            .map(|c| {
                let f = BigRational::from_integer(lcm.clone());
                ((c.re() * &f).to_integer(), (c.im() * &f).to_integer())
            })
            .collect();
        let (c0r, c0i) = &scaled[0];
        let g = c0r.gcd(c0i);
        // |root| ≤ 1 + max |a_k| / |a_n|, with |a_k| ≤ |re|+|im| and |a_n| ≥ max(|re|, |im|).
        let lead_lower = lead.re().abs().max(lead.im().abs());
        let max_ratio = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.l1_norm() / &lead_lower)
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
        let bound = (max_ratio.ceil().to_integer() + 1u32).min(g.clone());
        let bound = bound.to_u64().unwrap_or(u64::MAX);
        (1..=bound)
            .filter(|r| (&g % BigInt::from(*r)).is_zero())
            .find(|&r| self.eval_int(r as i64).is_zero())
    }
}

impl Add<&Poly1> for &Poly1 {
    type Output = Poly1;
    fn add(self, rhs: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly1::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub<&Poly1> for &Poly1 {
    type Output = Poly1;
    fn sub(self, rhs: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly1::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Mul<&Poly1> for &Poly1 {
    type Output = Poly1;
    fn mul(self, rhs: &Poly1) -> Poly1 {
        if self.is_zero() || rhs.is_zero() {
            return Poly1::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly1::new(out)
    }
}

impl Neg for &Poly1 {
    type Output = Poly1;
    fn neg(self) -> Poly1 {
        Poly1::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "Poly1(0)");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({c})x^{k}"))
            .collect();
        write!(f, "Poly1({})", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::gaussian::gr;

    #[test]
    fn trims_trailing_zeros() {
        let p = Poly1::new(vec![gr(1, 0), gr(0, 0), gr(0, 0)]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(Poly1::new(vec![gr(0, 0)]).degree(), None);
    }

    #[test]
    fn forward_difference_of_square() {
        // (x+1)^2 - x^2 = 2x + 1
        let p = Poly1::from_integers(&[0, 0, 1]);
        assert_eq!(p.forward_difference(), Poly1::from_integers(&[1, 2]));
    }

    #[test]
    fn integer_roots() {
        // (x - 3)(x + 2) = x^2 - x - 6
        assert_eq!(Poly1::from_integers(&[-6, -1, 1]).first_nonneg_integer_root(), Some(3));
        assert_eq!(Poly1::from_integers(&[1, 1]).first_nonneg_integer_root(), None);
        assert_eq!(Poly1::from_integers(&[0, 5]).first_nonneg_integer_root(), Some(0));
        // x^2 + 1 has no real roots
        assert_eq!(Poly1::from_integers(&[1, 0, 1]).first_nonneg_integer_root(), None);
        // (2x - 14)(x + i) = 2x^2 + (2i - 14)x - 14i
        let p = Poly1::new(vec![gr(0, -14), gr(-14, 2), gr(2, 0)]);
        assert_eq!(p.first_nonneg_integer_root(), Some(7));
        // x/3 - 5/6 has root 5/2, not an integer
        let q = Poly1::new(vec![
            GaussianRational::from_fractions(-5, 6, 0, 1),
            GaussianRational::from_fractions(1, 3, 0, 1),
        ]);
        assert_eq!(q.first_nonneg_integer_root(), None);
    }
}
