use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::gaussian::{gr_string, GaussianRational};
use super::poly1::Poly1;

/// Bivariate polynomial over ℚ(i) in the monomials `x^m y^n`, stored sparsely.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    terms: BTreeMap<(usize, usize), GaussianRational>,
}

#[derive(Serialize, Deserialize)]
struct Term {
    x: usize,
    y: usize,
    #[serde(with = "gr_string")]
    coeff: GaussianRational,
}

impl Serialize for Poly2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(&(x, y), c)| Term { x, y, coeff: c.clone() })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<Term>::deserialize(d)?;
        let mut p = Poly2::zero();
        for t in terms {
            p.add_term(t.x, t.y, &t.coeff);
        }
        Ok(p)
    }
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, &c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, GaussianRational::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, GaussianRational::one())
    }

    /// `z = x + i y`.
    pub fn z() -> Self {
        &Self::x() + &Self::monomial(0, 1, GaussianRational::i())
    }

    pub fn monomial(m: usize, n: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, n, &c);
        p
    }

    /// Embeds a polynomial in `x` alone.
    pub fn from_poly1_in_x(p: &Poly1) -> Self {
        let mut out = Self::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            out.add_term(k, 0, c);
        }
        out
    }

    pub fn add_term(&mut self, m: usize, n: usize, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((m, n)).or_insert_with(GaussianRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(m, n));
        }
    }

    pub fn coeff(&self, m: usize, n: usize) -> GaussianRational {
        self.terms.get(&(m, n)).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &GaussianRational)> {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|&(m, n)| m + n).max()
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.terms.keys().map(|&(m, _)| m).max()
    }

    pub fn degree_y(&self) -> Option<usize> {
        self.terms.keys().map(|&(_, n)| n).max()
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        let mut out = Self::zero();
        for (&(m, n), c) in &self.terms {
            out.add_term(m, n, &(c * k));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(GaussianRational::one()), |acc, _| &acc * self)
    }

    /// Exact value at an integer point, summing monomials with precomputed powers.
    pub fn eval(&self, x: i64, y: i64) -> GaussianRational {
        let Some(dx) = self.degree_x() else {
            return GaussianRational::zero();
        };
        let dy = self.degree_y().unwrap_or(0);
        let xs = powers(x, dx);
        let ys = powers(y, dy);
        self.terms
            .iter()
            .map(|(&(m, n), c)| c * &GaussianRational::from(xs[m].clone() * ys[n].clone()))
            .sum()
    }

    /// Nested Horner evaluation: outer in `y`, inner in `x`.
    pub fn eval_horner(&self, x: i64, y: i64) -> GaussianRational {
        let xv = GaussianRational::from(x);
        let yv = GaussianRational::from(y);
        let dy = self.degree_y().unwrap_or(0);
        (0..=dy).rev().fold(GaussianRational::zero(), |acc, n| {
            let row = Poly1::new(
                (0..=self.degree_x().unwrap_or(0)).map(|m| self.coeff(m, n)).collect(),
            );
            &(&acc * &yv) + &row.eval(&xv)
        })
    }

    /// Restriction to the axis `y = 0`.
    pub fn restrict_y0(&self) -> Poly1 {
        let d = self.degree_x().unwrap_or(0);
        Poly1::new((0..=d).map(|m| self.coeff(m, 0)).collect())
    }

    /// Dense coefficient grid `grid[n][m]` (rows by power of `y`).
    pub fn to_dense(&self) -> Vec<Vec<GaussianRational>> {
        let (Some(dx), Some(dy)) = (self.degree_x(), self.degree_y()) else {
            return Vec::new();
        };
        (0..=dy)
            .map(|n| (0..=dx).map(|m| self.coeff(m, n)).collect())
            .collect()
    }

    pub fn from_dense(grid: &[Vec<GaussianRational>]) -> Self {
        let mut p = Self::zero();
        for (n, row) in grid.iter().enumerate() {
            for (m, c) in row.iter().enumerate() {
                p.add_term(m, n, c);
            }
        }
        p
    }
}

fn powers(v: i64, d: usize) -> Vec<num_bigint::BigInt> {
    let mut out = Vec::with_capacity(d + 1);
    let mut acc = num_bigint::BigInt::one();
    for _ in 0..=d {
        out.push(acc.clone());
        acc *= v;
    }
    out
}

impl Add<&Poly2> for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(m, n), c) in &rhs.terms {
            out.add_term(m, n, c);
        }
        out
    }
}

impl Sub<&Poly2> for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        self + &(-rhs)
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.scale(&-GaussianRational::one())
    }
}

impl Mul<&Poly2> for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(m1, n1), a) in &self.terms {
            for (&(m2, n2), b) in &rhs.terms {
                out.add_term(m1 + m2, n1 + n2, &(a * b));
            }
        }
        out
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "Poly2(0)");
        }
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|((m, n), c)| format!("({c})x^{m}y^{n}"))
            .collect();
        write!(f, "Poly2({})", terms.join(" + "))
    }
}
