use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational, rational_sqrt, to_decimal, Rational};
use super::ArithError;

/// An element `a + b·√d` of the quadratic extension `ℚ(√d)`, `d ≥ 0`.
///
/// Canonical form: whenever `b = 0` or `d` is the square of a rational the
/// value is stored as `(a, 0, 0)`. Otherwise the radicand is never reduced
/// to its square-free part, so
/// `√8` and `2·√2` are distinct representations of the same real number;
/// [`PartialEq`] and [`Ord`] compare the real values, not the triples.
///
/// Two operands are *compatible* when they share a radicand or at least one
/// of them is rational. Arithmetic operators panic on incompatible
/// operands; the `try_*` methods report [`ArithError::RadicandMismatch`].
#[derive(Clone, Debug)]
pub struct QuadraticNumber {
    a: Rational,
    b: Rational,
    d: Rational,
}

/// Sign of `a + b·√d` for `d ≥ 0`, by comparing `a²` with `b²·d`.
pub(crate) fn sign_single(a: &Rational, b: &Rational, d: &Rational) -> i8 {
    let sa = signum(a);
    if b.is_zero() || d.is_zero() {
        return sa;
    }
    let sb = signum(b);
    if sa == 0 || sa == sb {
        return sb;
    }
    // opposite signs
    match (a * a).cmp(&(b * b * d)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

/// Sign of `α + β·√p + γ·√q` with `p, q ≥ 0` arbitrary.
fn sign_two_radicals(alpha: &Rational, beta: &Rational, p: &Rational, gamma: &Rational, q: &Rational) -> i8 {
    // sign(X − Y) with X = α + β√p, Y = −γ√q
    let sx = sign_single(alpha, beta, p);
    let sy = if q.is_zero() { 0 } else { -signum(gamma) };
    if sx != sy {
        return if sx > sy { 1 } else { -1 };
    }
    if sx == 0 {
        return 0;
    }
    // same strict sign: compare squares, X² − Y² = α² + β²p − γ²q + 2αβ√p
    let rational_part = alpha * alpha + beta * beta * p - gamma * gamma * q;
    let radical_part = alpha * beta * Rational::from_integer(BigInt::from(2));
    sx * sign_single(&rational_part, &radical_part, p)
}

fn signum(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl QuadraticNumber {
    pub fn new(a: Rational, b: Rational, d: Rational) -> Result<Self, ArithError> {
        if d.is_negative() {
            return Err(ArithError::NegativeRadicand);
        }
        if b.is_zero() || d.is_zero() {
            return Ok(Self::from_rational(a));
        }
        if let Some(root) = rational_sqrt(&d) {
            return Ok(Self::from_rational(a + b * root));
        }
        Ok(Self { a, b, d })
    }

    pub fn from_rational(a: Rational) -> Self {
        Self { a, b: Rational::zero(), d: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// `√r` for `r ≥ 0`; rational whenever `r` is a rational square.
    pub fn sqrt(r: &Rational) -> Result<Self, ArithError> {
        if r.is_negative() {
            return Err(ArithError::NegativeRadicand);
        }
        Ok(match rational_sqrt(r) {
            Some(root) => Self::from_rational(root),
            None => Self { a: Rational::zero(), b: Rational::one(), d: r.clone() },
        })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `a − b·√d`.
    pub fn conjugate(&self) -> Self {
        Self { a: self.a.clone(), b: -&self.b, d: self.d.clone() }
    }

    /// Field norm `a² − b²·d`, the product with the conjugate.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * &self.d
    }

    pub fn sign(&self) -> i8 {
        sign_single(&self.a, &self.b, &self.d)
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn compatible(&self, other: &Self) -> bool {
        self.b.is_zero() || other.b.is_zero() || self.d == other.d
    }

    fn shared_radicand(&self, other: &Self) -> Result<Rational, ArithError> {
        if self.b.is_zero() {
            Ok(other.d.clone())
        } else if other.b.is_zero() || self.d == other.d {
            Ok(self.d.clone())
        } else {
            Err(ArithError::RadicandMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ArithError> {
        let d = self.shared_radicand(other)?;
        Self::new(&self.a + &other.a, &self.b + &other.b, d)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ArithError> {
        let d = self.shared_radicand(other)?;
        Self::new(&self.a - &other.a, &self.b - &other.b, d)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        let d = self.shared_radicand(other)?;
        let a = &self.a * &other.a + &self.b * &other.b * &d;
        let b = &self.a * &other.b + &self.b * &other.a;
        Self::new(a, b, d)
    }

    pub fn try_recip(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let n = self.norm();
        if n.is_zero() {
            // a = ∓b√d with d a rational square: the value itself is rational
            let root = rational_sqrt(&self.d).expect("vanishing norm implies a square radicand");
            let value = &self.a + &self.b * root;
            if value.is_zero() {
                return Err(ArithError::DivisionByZero);
            }
            return Ok(Self::from_rational(value.recip()));
        }
        Self::new(&self.a / &n, -&self.b / &n, self.d.clone())
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ArithError> {
        self.shared_radicand(other)?;
        self.try_mul(&other.try_recip()?)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(&self.a * factor, &self.b * factor, self.d.clone()).expect("radicand already valid")
    }

    /// Exact comparison of real values, radicands may differ.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        let s = if self.compatible(other) {
            let d = self.shared_radicand(other).expect("compatible");
            sign_single(&(&self.a - &other.a), &(&self.b - &other.b), &d)
        } else {
            sign_two_radicals(&(&self.a - &other.a), &self.b, &self.d, &(-&other.b), &other.d)
        };
        s.cmp(&0)
    }

    /// Decimal rendering truncated toward zero after `digits` places.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_rational() {
            return to_decimal(&self.a, digits);
        }
        let magnitude = self.abs();
        let scale = BigInt::from(10u32).pow(digits as u32);
        // initial guess from ⌊√d·scale·m⌋/m with m > |b|, then exact correction
        let m = magnitude.b().abs().ceil().to_integer() + BigInt::one();
        let p = self.d.numer();
        let q = self.d.denom();
        let fine = &scale * &m;
        let root = Rational::new((p * q * &fine * &fine).sqrt(), q * &m);
        let guess = (magnitude.a() * Rational::from_integer(scale.clone()) + magnitude.b() * root).floor();
        let mut k = guess.to_integer();
        let at = |k: &BigInt| QuadraticNumber::from_rational(Rational::new(k.clone(), scale.clone()));
        while at(&(&k + BigInt::one())) <= magnitude {
            k += BigInt::one();
        }
        while at(&k) > magnitude {
            k -= BigInt::one();
        }
        let sign = if self.sign() < 0 { "-" } else { "" };
        let (whole, frac) = k.div_rem(&scale);
        if digits == 0 {
            format!("{sign}{whole}")
        } else {
            format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = digits)
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal(20).parse().unwrap_or(f64::NAN)
    }
}

impl PartialEq for QuadraticNumber {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }
}

impl Eq for QuadraticNumber {}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl From<Rational> for QuadraticNumber {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}·√{}", self.a, self.b, self.d)
        }
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber { a: -&self.a, b: -&self.b, d: self.d.clone() }
    }
}

impl Neg for QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&QuadraticNumber> for &QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: &QuadraticNumber) -> QuadraticNumber {
                match self.$try(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{}: {} {} {}", e, self, stringify!($method), rhs),
                }
            }
        }
        impl $trait<QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: QuadraticNumber) -> QuadraticNumber {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: &QuadraticNumber) -> QuadraticNumber {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

/// Rational values travel as `"p/q"`, the rest as `{"a", "b", "d"}`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum QuadraticRepr {
    Rational(String),
    Radical { a: String, b: String, d: String },
}

impl Serialize for QuadraticNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = if self.is_rational() {
            QuadraticRepr::Rational(format_rational(&self.a))
        } else {
            QuadraticRepr::Radical { a: format_rational(&self.a), b: format_rational(&self.b), d: format_rational(&self.d) }
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuadraticNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let parse = |s: &str| parse_rational(s).map_err(D::Error::custom);
        match QuadraticRepr::deserialize(deserializer)? {
            QuadraticRepr::Rational(a) => Ok(QuadraticNumber::from_rational(parse(&a)?)),
            QuadraticRepr::Radical { a, b, d } => {
                QuadraticNumber::new(parse(&a)?, parse(&b)?, parse(&d)?).map_err(D::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rational::{int, rat};

    fn qn(a: Rational, b: Rational, d: i64) -> QuadraticNumber {
        QuadraticNumber::new(a, b, int(d)).unwrap()
    }

    #[test]
    fn conjugate_product_is_canonical() {
        let x = qn(int(1), int(1), 2);
        let y = qn(int(1), int(-1), 2);
        let p = &x * &y;
        assert_eq!(p.a(), &int(-1));
        assert!(p.b().is_zero());
        assert!(p.d().is_zero());
    }

    #[test]
    fn self_division_is_one() {
        let x = qn(int(2), int(3), 5);
        assert_eq!(x.try_div(&x).unwrap(), QuadraticNumber::one());
        assert!(x.try_div(&x).unwrap().is_rational());
    }

    #[test]
    fn signs() {
        assert_eq!(QuadraticNumber::zero().sign(), 0);
        assert_eq!(qn(int(1), rat(-3, 4), 2).sign(), -1);
        assert_eq!(qn(rat(3, 2), rat(-1, 2), 2).sign(), 1);
        // 2 − √4 = 0 without reducing the radicand
        assert_eq!(qn(int(2), int(-1), 4).sign(), 0);
    }

    #[test]
    fn mismatched_radicands() {
        let x = qn(int(0), int(1), 2);
        let y = qn(int(0), int(1), 3);
        assert_eq!(x.try_add(&y).unwrap_err(), ArithError::RadicandMismatch);
        // rationals combine with anything
        assert!(x.try_add(&QuadraticNumber::one()).is_ok());
        // comparison across radicands: √2 < √3, 2√2 = √8
        assert!(x < y);
        assert_eq!(qn(int(0), int(2), 2), qn(int(0), int(1), 8));
        assert!(qn(int(1), int(1), 2) > qn(int(0), int(1), 5)); // 2.414 > 2.236
        assert!(qn(int(3), int(-1), 2) < qn(int(0), int(1), 3)); // 1.586 < 1.732
    }

    #[test]
    fn division_by_zero() {
        let x = qn(int(1), int(1), 2);
        assert_eq!(x.try_div(&QuadraticNumber::zero()).unwrap_err(), ArithError::DivisionByZero);
        assert_eq!(qn(int(2), int(-1), 4).try_recip().unwrap_err(), ArithError::DivisionByZero);
    }

    #[test]
    fn negative_radicand_rejected() {
        assert_eq!(QuadraticNumber::new(int(0), int(1), int(-2)).unwrap_err(), ArithError::NegativeRadicand);
    }

    #[test]
    fn decimal_rendering() {
        let sqrt2 = QuadraticNumber::sqrt(&int(2)).unwrap();
        assert_eq!(sqrt2.to_decimal(10), "1.4142135623");
        assert_eq!((-&sqrt2).to_decimal(5), "-1.41421");
        assert_eq!(QuadraticNumber::sqrt(&rat(9, 4)).unwrap().to_decimal(2), "1.50");
    }

    #[test]
    fn serde_shape() {
        let x = qn(rat(1, 2), int(-1), 3);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"a":"1/2","b":"-1/1","d":"3/1"}"#);
        let back: QuadraticNumber = serde_json::from_str(&json).unwrap();
        assert_eq!(serde_json::to_string(&QuadraticNumber::from(rat(1, 4))).unwrap(), r#""1/4""#);
        assert_eq!(serde_json::from_str::<QuadraticNumber>(r#""1/4""#).unwrap(), QuadraticNumber::from(rat(1, 4)));
        assert_eq!(back, x);
    }
}
