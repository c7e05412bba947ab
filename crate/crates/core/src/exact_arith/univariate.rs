//! Univariate polynomials over ℚ with Sturm-sequence root isolation.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::rational::{int, Rational};
use super::{ArithError, QuadraticNumber};

/// Dense univariate polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariatePolynomial {
    coefficients: Vec<Rational>,
}

/// An open-closed interval `(lo, hi]` holding exactly one real root, or the
/// exact root when `lo == hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        if self.is_exact() {
            x == &self.lo
        } else {
            &self.lo < x && x <= &self.hi
        }
    }
}

impl UnivariatePolynomial {
    pub fn new(mut coefficients: Vec<Rational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn zero() -> Self {
        Self { coefficients: Vec::new() }
    }

    /// `∏ (x − r)` over the given roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(Self::new(vec![Rational::one()]), |acc, r| {
            acc.mul(&Self::new(vec![-r.clone(), Rational::one()]))
        })
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coefficients.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coefficients.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    fn scale(&self, factor: &Rational) -> Self {
        Self::new(self.coefficients.iter().map(|c| c * factor).collect())
    }

    /// Euclidean division: `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), ArithError> {
        let dd = divisor.degree().ok_or(ArithError::DivisionByZero)?;
        let lead = divisor.leading().expect("nonzero");
        let mut rem = self.coefficients.clone();
        let mut quot = vec![Rational::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = rem.last().expect("nonempty") / lead;
            for (i, c) in divisor.coefficients.iter().enumerate() {
                rem[k + i] -= &factor * c;
            }
            quot[k] = factor;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        match a.leading().cloned() {
            Some(lead) => a.scale(&lead.recip()),
            None => a,
        }
    }

    /// `p / gcd(p, p')`: same distinct roots, all simple.
    pub fn square_free_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        self.div_rem(&g).expect("gcd nonzero").0
    }

    /// Sturm chain `p₀ = p, p₁ = p′, pₖ₊₁ = −rem(pₖ₋₁, pₖ)`.
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut chain = vec![self.clone()];
        if self.is_zero() {
            return chain;
        }
        let mut prev = self.clone();
        let mut cur = self.derivative();
        while !cur.is_zero() {
            chain.push(cur.clone());
            let (_, r) = prev.div_rem(&cur).expect("cur nonzero");
            prev = cur;
            cur = r.scale(&int(-1));
        }
        chain
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        let chain = self.square_free_part().sturm_sequence();
        let at_neg = variations(chain.iter().map(|p| infinity_sign(p, true)));
        let at_pos = variations(chain.iter().map(|p| infinity_sign(p, false)));
        at_neg - at_pos
    }

    /// Exact real roots of a polynomial of degree at most two, ascending,
    /// without multiplicity. Roots are rational whenever the discriminant is
    /// a rational square.
    pub fn quadratic_real_roots(&self) -> Result<Vec<QuadraticNumber>, ArithError> {
        let c = |k: usize| self.coefficients.get(k).cloned().unwrap_or_else(Rational::zero);
        match self.degree() {
            None => Err(ArithError::ZeroPolynomial),
            Some(0) => Ok(Vec::new()),
            Some(1) => Ok(vec![QuadraticNumber::from_rational(-c(0) / c(1))]),
            Some(2) => {
                let (c0, c1, c2) = (c(0), c(1), c(2));
                let disc = &c1 * &c1 - int(4) * &c2 * &c0;
                if disc < Rational::zero() {
                    return Ok(Vec::new());
                }
                let denom = int(2) * &c2;
                let centre = QuadraticNumber::from_rational(-&c1 / &denom);
                if disc.is_zero() {
                    return Ok(vec![centre]);
                }
                let spread = QuadraticNumber::sqrt(&disc)?.scale(&denom.recip());
                let mut roots = vec![&centre - &spread, &centre + &spread];
                roots.sort();
                Ok(roots)
            }
            Some(_) => Err(ArithError::DegreeTooHigh),
        }
    }

    /// Isolating intervals for the distinct real roots in `(lo, hi)`, sorted.
    pub fn isolate_roots(&self, lo: &Rational, hi: &Rational) -> Result<Vec<RootInterval>, ArithError> {
        if self.is_zero() {
            return Err(ArithError::ZeroPolynomial);
        }
        if lo >= hi {
            return Err(ArithError::EmptyInterval);
        }
        if self.eval(lo).is_zero() || self.eval(hi).is_zero() {
            return Err(ArithError::EndpointIsRoot);
        }
        let sturm = SturmCounter::new(self);
        let mut out = Vec::new();
        let mut stack = vec![(lo.clone(), hi.clone())];
        while let Some((a, b)) = stack.pop() {
            match sturm.count(&a, &b) {
                0 => {}
                1 => out.push(sturm.tighten(RootInterval { lo: a, hi: b })),
                _ => {
                    let mid = (&a + &b) / int(2);
                    stack.push((a, mid.clone()));
                    stack.push((mid, b));
                }
            }
        }
        out.sort_by(|x, y| x.lo.cmp(&y.lo));
        Ok(out)
    }

    /// Bisects an isolating interval until its width is at most `width`.
    /// Linear square-free parts yield the exact root for any `width`;
    /// otherwise `width` must be positive.
    pub fn refine(&self, interval: &RootInterval, width: &Rational) -> RootInterval {
        let sturm = SturmCounter::new(self);
        if sturm.base.degree() == Some(1) {
            let c = sturm.base.coefficients();
            let root = -&c[0] / &c[1];
            return RootInterval { lo: root.clone(), hi: root };
        }
        assert!(width.is_positive() || interval.is_exact(), "refinement width must be positive");
        let mut cur = interval.clone();
        while !cur.is_exact() && &cur.width() > width {
            let mid = (&cur.lo + &cur.hi) / int(2);
            cur = if sturm.count(&cur.lo, &mid) == 1 {
                RootInterval { lo: cur.lo, hi: mid }
            } else {
                RootInterval { lo: mid, hi: cur.hi }
            };
            cur = sturm.tighten(cur);
        }
        cur
    }
}

/// Sturm chain of the square-free part; counts distinct roots in `(a, b]`.
///
/// Signs are taken with zeros dropped, so a root of the square-free part at
/// either endpoint is handled: at a simple root `V(c) = V(c⁺)`.
struct SturmCounter {
    base: UnivariatePolynomial,
    chain: Vec<UnivariatePolynomial>,
}

impl SturmCounter {
    fn new(p: &UnivariatePolynomial) -> Self {
        let base = p.square_free_part();
        let chain = base.sturm_sequence();
        Self { base, chain }
    }

    fn variations_at(&self, x: &Rational) -> usize {
        variations(self.chain.iter().map(|p| sign(&p.eval(x))))
    }

    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }

    /// Collapses `(lo, hi]` to `[hi, hi]` when `hi` is the root.
    fn tighten(&self, interval: RootInterval) -> RootInterval {
        if !interval.is_exact() && self.base.eval(&interval.hi).is_zero() {
            RootInterval { lo: interval.hi.clone(), hi: interval.hi }
        } else {
            interval
        }
    }
}

fn sign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x > &Rational::zero() {
        1
    } else {
        -1
    }
}

fn infinity_sign(p: &UnivariatePolynomial, negative: bool) -> i8 {
    match (p.leading(), p.degree()) {
        (Some(lead), Some(deg)) => {
            let s = sign(lead);
            if negative && deg % 2 == 1 {
                -s
            } else {
                s
            }
        }
        _ => 0,
    }
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

impl fmt::Display for UnivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}·x"),
                _ => format!("{c}·x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rational::rat;

    fn poly(cs: &[i64]) -> UnivariatePolynomial {
        UnivariatePolynomial::new(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn sqrt_two_roots() {
        let p = poly(&[-2, 0, 1]);
        let roots = p.isolate_roots(&int(-2), &int(2)).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].hi <= int(0) && roots[0].lo >= int(-2));
        assert!(roots[1].lo >= int(0) && roots[1].hi <= int(2));
        let fine = p.refine(&roots[1], &rat(1, 1 << 20));
        assert!(&fine.lo * &fine.lo < int(2) && int(2) <= &fine.hi * &fine.hi);
    }

    #[test]
    fn rational_root() {
        let p = UnivariatePolynomial::new(vec![rat(-1, 3), int(1)]);
        let roots = p.isolate_roots(&int(0), &int(1)).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].contains(&rat(1, 3)));
        let exact = p.refine(&roots[0], &int(0));
        assert!(exact.contains(&rat(1, 3)));
    }

    #[test]
    fn no_real_roots() {
        let p = poly(&[1, 0, 1]);
        assert!(p.isolate_roots(&int(-10), &int(10)).unwrap().is_empty());
        assert_eq!(p.count_real_roots(), 0);
    }

    #[test]
    fn errors() {
        let p = poly(&[-1, 1]);
        assert_eq!(p.isolate_roots(&int(1), &int(2)).unwrap_err(), ArithError::EndpointIsRoot);
        assert_eq!(p.isolate_roots(&int(2), &int(0)).unwrap_err(), ArithError::EmptyInterval);
        assert_eq!(
            UnivariatePolynomial::zero().isolate_roots(&int(0), &int(1)).unwrap_err(),
            ArithError::ZeroPolynomial
        );
    }

    #[test]
    fn repeated_roots_counted_once() {
        // (x − 1)²(x + 2)
        let p = UnivariatePolynomial::from_roots(&[int(1), int(1), int(-2)]);
        let roots = p.isolate_roots(&int(-5), &int(5)).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(p.count_real_roots(), 2);
    }

    #[test]
    fn quadratic_roots_exact() {
        // x² − 2
        let roots = poly(&[-2, 0, 1]).quadratic_real_roots().unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(&roots[1] * &roots[1], QuadraticNumber::from(int(2)));
        assert!(roots[0].sign() < 0);
        // (2x − 1)(x + 3): rational discriminant
        let roots = poly(&[-3, 5, 2]).quadratic_real_roots().unwrap();
        assert_eq!(roots, vec![QuadraticNumber::from(int(-3)), QuadraticNumber::from(rat(1, 2))]);
        assert!(roots.iter().all(QuadraticNumber::is_rational));
        assert!(poly(&[1, 0, 1]).quadratic_real_roots().unwrap().is_empty());
        assert_eq!(poly(&[1, 2, 1]).quadratic_real_roots().unwrap(), vec![QuadraticNumber::from(int(-1))]);
        assert_eq!(poly(&[1, 0, 0, 1]).quadratic_real_roots().unwrap_err(), ArithError::DegreeTooHigh);
        // agrees with Sturm counting
        for cs in [[-2, 0, 1], [-3, 5, 2], [1, 0, 1], [1, 2, 1], [7, -3, -5]] {
            let p = poly(&cs);
            assert_eq!(p.quadratic_real_roots().unwrap().len(), p.count_real_roots());
        }
    }

    #[test]
    fn division() {
        let p = poly(&[-1, 0, 0, 1]);
        let (q, r) = p.div_rem(&poly(&[-1, 1])).unwrap();
        assert_eq!(q, poly(&[1, 1, 1]));
        assert!(r.is_zero());
    }
}
