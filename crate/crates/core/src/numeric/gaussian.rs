//! Exact complex numbers with rational real and imaginary parts.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of ℚ(i).
///
/// Both parts are kept as reduced [`BigRational`]s with positive
/// denominators, so structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_integers(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    /// `(re_num / re_den) + (im_num / im_den) i`.
    ///
    /// Panics if a denominator is zero.
    pub fn from_fractions(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self::new(
            BigRational::new(re_num.into(), re_den.into()),
            BigRational::new(im_num.into(), im_den.into()),
        )
    }

    pub fn real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::real(BigRational::from_integer(n))
    }

    pub fn i() -> Self {
        Self::from_integers(0, 1)
    }

    /// Exact conversion of a finite float pair (every finite `f64` is a dyadic rational).
    pub fn from_complex64(z: Complex64) -> Option<Self> {
        Some(Self::new(
            BigRational::from_float(z.re)?,
            BigRational::from_float(z.im)?,
        ))
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// |z|², exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `Some(n)` when the value is a real integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.im.is_zero() && self.re.is_integer()).then(|| self.re.to_integer())
    }

    pub fn inv(&self) -> Result<Self> {
        let d = self.norm_sqr();
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::new(&self.re / &d, -(&self.im / &d)))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(k.into()))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Signed integer power; negative exponents fail on zero.
    pub fn powi(&self, exp: i64) -> Result<Self> {
        let p = self.pow(exp.unsigned_abs() as u32);
        if exp < 0 {
            p.inv()
        } else {
            Ok(p)
        }
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    /// `ln |z|`, finite for any nonzero value however large or small.
    pub fn ln_abs(&self) -> f64 {
        0.5 * ln_ratio(&self.norm_sqr())
    }

    /// Cheap upper bound |re| + |im| ≥ |z|.
    pub fn l1_norm(&self) -> BigRational {
        self.re.abs() + self.im.abs()
    }
}

/// Float value of a big rational that stays accurate when numerator and
/// denominator individually overflow `f64`.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() && (v != 0.0 || r.is_zero()) {
            return v;
        }
    }
    // Bring both parts to ~60 significant bits before dividing.
    let (num, den) = (r.numer(), r.denom());
    let n_shift = (num.bits() as i64 - 60).max(0);
    let d_shift = (den.bits() as i64 - 60).max(0);
    let n = num >> n_shift as usize;
    let d = den >> d_shift as usize;
    let q = n.to_f64().unwrap_or(0.0) / d.to_f64().unwrap_or(1.0);
    q * 2f64.powi((n_shift - d_shift).clamp(-2000, 2000) as i32)
}

/// Natural log of a positive rational, computed from shifted mantissas.
pub fn ln_ratio(r: &BigRational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    let ln_big = |v: &BigInt| {
        let v = v.magnitude();
        let shift = v.bits().saturating_sub(60);
        (v >> shift).to_f64().unwrap_or(1.0).ln() + shift as f64 * std::f64::consts::LN_2
    };
    ln_big(r.numer()) - ln_big(r.denom())
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_integers(n, 0)
    }
}

impl From<BigInt> for GaussianRational {
    fn from(n: BigInt) -> Self {
        Self::from_bigint(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $trait<&'b GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'b GaussianRational) -> GaussianRational {
                let f: fn(&GaussianRational, &GaussianRational) -> GaussianRational = $body;
                f(self, rhs)
            }
        }
        impl $trait<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $trait<&'b GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'b GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussianRational::new(&a.re + &b.re, &a.im + &b.im));
forward_binop!(Sub, sub, |a, b| GaussianRational::new(&a.re - &b.re, &a.im - &b.im));
forward_binop!(Mul, mul, |a, b| {
    if a.im.is_zero() && b.im.is_zero() {
        return GaussianRational::real(&a.re * &b.re);
    }
    GaussianRational::new(
        &a.re * &b.re - &a.im * &b.im,
        &a.re * &b.im + &a.im * &b.re,
    )
});

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign for GaussianRational {
    fn add_assign(&mut self, rhs: GaussianRational) {
        *self += &rhs;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl SubAssign for GaussianRational {
    fn sub_assign(&mut self, rhs: GaussianRational) {
        *self -= &rhs;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl Sum for GaussianRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl<'a> Sum<&'a GaussianRational> for GaussianRational {
    fn sum<I: Iterator<Item = &'a Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

impl Product for GaussianRational {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, x| &acc * &x)
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Canonical text form `a/b+c/d*i` (or `a/b-c/d*i`), always with both
/// denominators and both parts present.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}*i", fmt_ratio(&self.re), sign, fmt_ratio(&self.im.abs()))
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GR({self})")
    }
}

fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Accepts the canonical form plus the shorthands `p`, `p/q`, `q*i`, `i`.
impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        let Some(body) = t.strip_suffix('i') else {
            return parse_ratio(&t).map(Self::real).ok_or_else(err);
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        // Split at the last sign that is not in leading position.
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .next_back();
        let (re_part, im_part) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im_part {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_ratio(other.strip_prefix('+').unwrap_or(other)).ok_or_else(err)?,
        };
        let re = parse_ratio(re_part).ok_or_else(err)?;
        Ok(Self::new(re, im))
    }
}

/// JSON object encoding `{"re":"p/q","im":"r/s"}`.
impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("GaussianRational", 2)?;
        st.serialize_field("re", &fmt_ratio(&self.re))?;
        st.serialize_field("im", &fmt_ratio(&self.im))?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GrRepr {
    Text(String),
    Object { re: String, im: String },
    Int(i64),
}

/// Accepts the object form, the canonical string form, or a bare integer.
impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match GrRepr::deserialize(deserializer)? {
            GrRepr::Text(s) => s.parse().map_err(D::Error::custom),
            GrRepr::Object { re, im } => {
                let re = parse_ratio(&re).ok_or_else(|| D::Error::custom(format!("bad rational {re:?}")))?;
                let im = parse_ratio(&im).ok_or_else(|| D::Error::custom(format!("bad rational {im:?}")))?;
                Ok(Self::new(re, im))
            }
            GrRepr::Int(n) => Ok(Self::from(n)),
        }
    }
}

/// Serde adapter writing Gaussian rationals as canonical strings; use with
/// `#[serde(with = "gr_string")]` on single values or `gr_string::vec` on sequences.
pub mod gr_string {
    use super::GaussianRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &GaussianRational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<GaussianRational, D::Error> {
        GaussianRational::deserialize(d)
    }

    pub mod vec {
        use super::GaussianRational;
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[GaussianRational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&x.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<GaussianRational>, D::Error> {
            Vec::<GaussianRational>::deserialize(d)
        }
    }
}

/// Shorthand for integer literals in tests and examples.
pub fn gr(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_integers(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn quotient_of_conjugates_is_i() {
        let q = gr(1, 1).checked_div(&gr(1, -1)).unwrap();
        assert_eq!(q, gr(0, 1));
    }

    #[test]
    fn rationalized_quotient() {
        let q = gr(-2, 2).checked_div(&gr(1, 1)).unwrap();
        assert_eq!(q, gr(0, 2));
    }

    #[test]
    fn multiplicative_identity_and_zero_division() {
        let a = GaussianRational::from_fractions(3, 4, -5, 6);
        assert_eq!(&a * &GaussianRational::one(), a);
        assert_eq!(a.checked_div(&GaussianRational::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn canonical_text_form() {
        let a = GaussianRational::from_fractions(-2, 4, 3, 1);
        assert_eq!(a.to_string(), "-1/2+3/1*i");
        assert_eq!(gr(0, -1).to_string(), "0/1-1/1*i");
        assert_eq!("-1/2+3/1*i".parse::<GaussianRational>().unwrap(), a);
    }

    #[test]
    fn shorthand_literals() {
        assert_eq!("7".parse::<GaussianRational>().unwrap(), gr(7, 0));
        assert_eq!("-3/6".parse::<GaussianRational>().unwrap(), GaussianRational::from_fractions(-1, 2, 0, 1));
        assert_eq!("i".parse::<GaussianRational>().unwrap(), gr(0, 1));
        assert_eq!("-i".parse::<GaussianRational>().unwrap(), gr(0, -1));
        assert_eq!("2-3i".parse::<GaussianRational>().unwrap(), gr(2, -3));
        assert_eq!("1/2*i".parse::<GaussianRational>().unwrap(), GaussianRational::from_fractions(0, 1, 1, 2));
        assert!("1/0".parse::<GaussianRational>().is_err());
        assert!("abc".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn json_object_form() {
        let a = GaussianRational::from_fractions(1, 3, -2, 5);
        let js = serde_json::to_string(&a).unwrap();
        assert_eq!(js, r#"{"re":"1/3","im":"-2/5"}"#);
        let back: GaussianRational = serde_json::from_str(&js).unwrap();
        assert_eq!(back, a);
        let from_text: GaussianRational = serde_json::from_str("\"1/3-2/5*i\"").unwrap();
        assert_eq!(from_text, a);
    }

    #[test]
    fn float_conversion_of_huge_ratios() {
        let big = BigInt::from(10).pow(400);
        let r = BigRational::new(big.clone() * 3, big * 4);
        assert_eq!(ratio_to_f64(&r), 0.75);
        let tiny = BigRational::new(BigInt::from(1), BigInt::from(10).pow(320));
        let v = ratio_to_f64(&tiny);
        assert!(v == 0.0 || (v > 0.0 && v < 1e-300));
        let r2 = BigRational::new(BigInt::from(7) * BigInt::from(10).pow(350), BigInt::from(10).pow(360));
        assert!((ratio_to_f64(&r2) - 7e-10).abs() < 1e-22);
    }

    fn arb_gr() -> impl Strategy<Value = GaussianRational> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20)
            .prop_map(|(a, b, c, d)| GaussianRational::from_fractions(a, b, c, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_gr(), b in arb_gr(), c in arb_gr()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a - &a, GaussianRational::zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), GaussianRational::one());
                prop_assert_eq!((&b * &a).checked_div(&a).unwrap(), b.clone());
            }
        }

        #[test]
        fn text_round_trip(a in arb_gr()) {
            let s = a.to_string();
            let back: GaussianRational = s.parse().unwrap();
            prop_assert_eq!(back.to_string(), s);
            prop_assert_eq!(back, a);
        }
    }
}
