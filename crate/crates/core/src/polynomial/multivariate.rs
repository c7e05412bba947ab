use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::PolyError;
use crate::exact_arith::rational::{format_rational, int, parse_rational};
use crate::exact_arith::{Rational, Scalar};

/// Sparse polynomial in `variable_count` variables over ℚ.
///
/// Terms are keyed by exponent vector; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultivariatePolynomial {
    variable_count: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultivariatePolynomial {
    pub fn zero(variable_count: usize) -> Self {
        Self { variable_count, terms: BTreeMap::new() }
    }

    pub fn constant(variable_count: usize, c: Rational) -> Self {
        let mut p = Self::zero(variable_count);
        p.add_term(vec![0; variable_count], c);
        p
    }

    /// The coordinate function `x_index`.
    pub fn variable(variable_count: usize, index: usize) -> Self {
        assert!(index < variable_count, "variable index out of range");
        let mut exps = vec![0; variable_count];
        exps[index] = 1;
        let mut p = Self::zero(variable_count);
        p.add_term(exps, Rational::one());
        p
    }

    /// `Σ coeffs[i]·x_i + constant`.
    pub fn linear(coeffs: &[Rational], constant: Rational) -> Self {
        let n = coeffs.len();
        let mut p = Self::constant(n, constant);
        for (i, c) in coeffs.iter().enumerate() {
            let mut exps = vec![0; n];
            exps[i] = 1;
            p.add_term(exps, c.clone());
        }
        p
    }

    pub fn from_terms(
        variable_count: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(variable_count);
        for (exps, c) in terms {
            if exps.len() != variable_count {
                return Err(PolyError::DimensionMismatch { expected: variable_count, found: exps.len() });
            }
            p.add_term(exps, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn check_same(&self, other: &Self) -> Result<(), PolyError> {
        if self.variable_count != other.variable_count {
            return Err(PolyError::DimensionMismatch { expected: self.variable_count, found: other.variable_count });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        let mut out = Self::zero(self.variable_count);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.variable_count);
        }
        Self {
            variable_count: self.variable_count,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * factor)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.variable_count, Rational::one()), |acc, _| &acc * self)
    }

    pub fn partial_derivative(&self, index: usize) -> Self {
        let mut out = Self::zero(self.variable_count);
        for (e, c) in &self.terms {
            if e[index] > 0 {
                let mut e2 = e.clone();
                e2[index] -= 1;
                out.add_term(e2, c * int(e[index] as i64));
            }
        }
        out
    }

    /// Exact value at `point`.
    pub fn evaluate<S: Scalar>(&self, point: &[S]) -> Result<S, PolyError> {
        if point.len() != self.variable_count {
            return Err(PolyError::DimensionMismatch { expected: self.variable_count, found: point.len() });
        }
        let mut total = S::zero_value();
        for (e, c) in &self.terms {
            let mut term = S::from_rational(c);
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    term = term.try_mul(x)?;
                }
            }
            total = total.try_add(&term)?;
        }
        Ok(total)
    }

    /// Substitutes `images[i]` for `x_i`; the result lives in the images'
    /// variable space.
    pub fn compose(&self, images: &[MultivariatePolynomial]) -> Result<Self, PolyError> {
        if images.len() != self.variable_count {
            return Err(PolyError::DimensionMismatch { expected: self.variable_count, found: images.len() });
        }
        let target = images.first().map_or(0, |p| p.variable_count);
        if let Some(bad) = images.iter().find(|p| p.variable_count != target) {
            return Err(PolyError::DimensionMismatch { expected: target, found: bad.variable_count });
        }
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    term = term.try_mul(&img.pow(k))?;
                }
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Sets `x_keep, x_{keep+1}, …` to zero and drops them from the
    /// variable space.
    pub fn restrict_leading(&self, keep: usize) -> Self {
        let mut out = Self::zero(keep);
        for (e, c) in &self.terms {
            if e[keep..].iter().all(|&k| k == 0) {
                out.add_term(e[..keep].to_vec(), c.clone());
            }
        }
        out
    }
}

impl Add for &MultivariatePolynomial {
    type Output = MultivariatePolynomial;
    fn add(self, rhs: &MultivariatePolynomial) -> MultivariatePolynomial {
        self.try_add(rhs).expect("polynomials over different variable counts")
    }
}

impl Sub for &MultivariatePolynomial {
    type Output = MultivariatePolynomial;
    fn sub(self, rhs: &MultivariatePolynomial) -> MultivariatePolynomial {
        self.try_add(&-rhs).expect("polynomials over different variable counts")
    }
}

impl Mul for &MultivariatePolynomial {
    type Output = MultivariatePolynomial;
    fn mul(self, rhs: &MultivariatePolynomial) -> MultivariatePolynomial {
        self.try_mul(rhs).expect("polynomials over different variable counts")
    }
}

impl Neg for &MultivariatePolynomial {
    type Output = MultivariatePolynomial;
    fn neg(self) -> MultivariatePolynomial {
        self.scale(&int(-1))
    }
}

impl fmt::Display for MultivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "·x{}", i + 1)?,
                    _ => write!(f, "·x{}^{k}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// Wire form of one term: `{"exponents": [..], "coefficient": "p/q"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

impl MultivariatePolynomial {
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(e, c)| TermRecord { exponents: e.clone(), coefficient: format_rational(c) })
            .collect()
    }

    pub fn from_records(variable_count: usize, records: &[TermRecord]) -> Result<Self, PolyError> {
        let terms = records
            .iter()
            .map(|r| Ok((r.exponents.clone(), parse_rational(&r.coefficient)?)))
            .collect::<Result<Vec<_>, PolyError>>()?;
        Self::from_terms(variable_count, terms)
    }
}

impl Serialize for MultivariatePolynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_records().serialize(serializer)
    }
}
