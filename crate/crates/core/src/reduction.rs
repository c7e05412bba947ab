//! Basis-pursuit instances and their reduction to linear-objective
//! polynomial optimisation over a quantifier-free semialgebraic set.
//!
//! Real case: `‖x‖₁` is not a polynomial, so each coordinate is split into
//! positive and negative parts `x = w − z`, `w, z ≥ 0`. The problem becomes
//!
//! ```text
//!     minimise  Σ wᵢ + zᵢ
//!     over      q(w − z) ≤ 0  ∧  ⋀ wᵢ ≥ 0  ∧  ⋀ zᵢ ≥ 0
//! ```
//!
//! with the ball polynomial `q(x) = Σᵢ (Σⱼ aᵢⱼxⱼ − yᵢ)² − ε²`. The complex
//! case treats `x ∈ ℂᴺ` as `(Re x, Im x) ∈ ℝ²ᴺ`, expands `|·|²` into real
//! and imaginary parts and splits both, giving `4N` variables.
//!
//! Variable orders are fixed: real splits are `(w₁..w_N, z₁..z_N)`,
//! complex splits `(Re⁺, Re⁻, Im⁺, Im⁻)` blocks, and complex coordinates are
//! `(Re x₁..Re x_N, Im x₁..Im x_N)`.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact_arith::{ArithError, Rational, Scalar};
use crate::linalg::Matrix;
use crate::polynomial::{MultivariatePolynomial, Relation, SemialgebraicDescription, SignAtom};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("matrix must have at least one row")]
    NoRows,
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedMatrix { row: usize, expected: usize, found: usize },
    #[error("measurement has {found} entries, expected {expected}")]
    MeasurementLength { expected: usize, found: usize },
    #[error("need N >= 2 columns, got {0}")]
    TooFewColumns(usize),
    #[error("need m < N, got m = {m}, N = {n}")]
    NotUnderdetermined { m: usize, n: usize },
    #[error("epsilon must be strictly positive")]
    NonPositiveEpsilon,
    #[error("real and imaginary parts have different shapes")]
    PartShapeMismatch,
}

fn check_shape(a: &Matrix, y: &[Rational]) -> Result<(usize, usize), InstanceError> {
    let m = a.len();
    if m == 0 {
        return Err(InstanceError::NoRows);
    }
    let n = a[0].len();
    for (row, r) in a.iter().enumerate() {
        if r.len() != n {
            return Err(InstanceError::RaggedMatrix { row, expected: n, found: r.len() });
        }
    }
    if y.len() != m {
        return Err(InstanceError::MeasurementLength { expected: m, found: y.len() });
    }
    if n < 2 {
        return Err(InstanceError::TooFewColumns(n));
    }
    if m >= n {
        return Err(InstanceError::NotUnderdetermined { m, n });
    }
    Ok((m, n))
}

/// `min ‖x‖₁ s.t. ‖Ax − y‖₂ ≤ ε` with exact data, `1 ≤ m < N`, `ε > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInstance {
    a: Matrix,
    y: Vec<Rational>,
    epsilon: Rational,
}

impl RealInstance {
    pub fn new(a: Matrix, y: Vec<Rational>, epsilon: Rational) -> Result<Self, InstanceError> {
        check_shape(&a, &y)?;
        if epsilon <= Rational::zero() {
            return Err(InstanceError::NonPositiveEpsilon);
        }
        Ok(Self { a, y, epsilon })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn y(&self) -> &[Rational] {
        &self.y
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn cols(&self) -> usize {
        self.a[0].len()
    }
}

/// Complex instance given by real and imaginary parts; objective `‖·‖*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInstance {
    a_re: Matrix,
    a_im: Matrix,
    y_re: Vec<Rational>,
    y_im: Vec<Rational>,
    epsilon: Rational,
}

impl ComplexInstance {
    pub fn new(
        a_re: Matrix,
        a_im: Matrix,
        y_re: Vec<Rational>,
        y_im: Vec<Rational>,
        epsilon: Rational,
    ) -> Result<Self, InstanceError> {
        let shape = check_shape(&a_re, &y_re)?;
        if check_shape(&a_im, &y_im)? != shape {
            return Err(InstanceError::PartShapeMismatch);
        }
        if epsilon <= Rational::zero() {
            return Err(InstanceError::NonPositiveEpsilon);
        }
        Ok(Self { a_re, a_im, y_re, y_im, epsilon })
    }

    /// Embeds a real instance with zero imaginary parts.
    pub fn from_real(inst: &RealInstance) -> Self {
        let zero_a = vec![vec![Rational::zero(); inst.cols()]; inst.rows()];
        Self {
            a_re: inst.a.clone(),
            a_im: zero_a,
            y_re: inst.y.clone(),
            y_im: vec![Rational::zero(); inst.rows()],
            epsilon: inst.epsilon.clone(),
        }
    }

    pub fn a_re(&self) -> &Matrix {
        &self.a_re
    }

    pub fn a_im(&self) -> &Matrix {
        &self.a_im
    }

    pub fn y_re(&self) -> &[Rational] {
        &self.y_re
    }

    pub fn y_im(&self) -> &[Rational] {
        &self.y_im
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn rows(&self) -> usize {
        self.a_re.len()
    }

    pub fn cols(&self) -> usize {
        self.a_re[0].len()
    }

    pub fn is_real_valued(&self) -> bool {
        self.a_im.iter().flatten().all(Zero::is_zero) && self.y_im.iter().all(Zero::is_zero)
    }

    /// The real `2m × 2N` system acting on `(Re x, Im x)`: rows are the real
    /// parts of `Ax − y` followed by the imaginary parts.
    pub fn real_form(&self) -> (Matrix, Vec<Rational>) {
        let (m, n) = (self.rows(), self.cols());
        let mut a = Vec::with_capacity(2 * m);
        for i in 0..m {
            let row: Vec<Rational> =
                (0..n).map(|j| self.a_re[i][j].clone()).chain((0..n).map(|j| -&self.a_im[i][j])).collect();
            a.push(row);
        }
        for i in 0..m {
            let row: Vec<Rational> =
                (0..n).map(|j| self.a_im[i][j].clone()).chain((0..n).map(|j| self.a_re[i][j].clone())).collect();
            a.push(row);
        }
        let y = self.y_re.iter().chain(&self.y_im).cloned().collect();
        (a, y)
    }
}

/// Maps split variables back to solution coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RecoveryMap {
    /// `x = w − z` over `N` coordinates.
    Real { n: usize },
    /// `Re x = Re⁺ − Re⁻`, `Im x = Im⁺ − Im⁻` over `N` complex coordinates.
    Complex { n: usize },
}

impl RecoveryMap {
    /// Number of real solution coordinates.
    pub fn coordinate_count(&self) -> usize {
        match *self {
            RecoveryMap::Real { n } => n,
            RecoveryMap::Complex { n } => 2 * n,
        }
    }

    pub fn split_count(&self) -> usize {
        2 * self.coordinate_count()
    }

    /// Index of the split variable carrying the positive (`negative = false`)
    /// or negative part of real coordinate `coord`.
    pub fn split_index(&self, coord: usize, negative: bool) -> usize {
        match *self {
            RecoveryMap::Real { n } => coord + if negative { n } else { 0 },
            RecoveryMap::Complex { n } => {
                let (block, j) = if coord < n { (0, coord) } else { (2, coord - n) };
                (block + usize::from(negative)) * n + j
            }
        }
    }

    /// Split variables → real coordinates.
    pub fn recover<S: Scalar>(&self, split: &[S]) -> Result<Vec<S>, ArithError> {
        (0..self.coordinate_count())
            .map(|c| split[self.split_index(c, false)].try_sub(&split[self.split_index(c, true)]))
            .collect()
    }

    /// Real coordinates → (positive part, negative part) split.
    pub fn split<S: Scalar>(&self, coords: &[S]) -> Vec<S> {
        let mut out = vec![S::zero_value(); self.split_count()];
        for (c, x) in coords.iter().enumerate() {
            if x.signum() >= 0 {
                out[self.split_index(c, false)] = x.clone();
            } else {
                out[self.split_index(c, true)] = x.negate();
            }
        }
        out
    }

    /// The coordinates as polynomials in the split variables.
    fn coordinate_polynomials(&self) -> Vec<MultivariatePolynomial> {
        let s = self.split_count();
        (0..self.coordinate_count())
            .map(|c| {
                &MultivariatePolynomial::variable(s, self.split_index(c, false))
                    - &MultivariatePolynomial::variable(s, self.split_index(c, true))
            })
            .collect()
    }
}

/// Linear objective over a ball atom plus nonnegativity atoms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedProblem {
    pub objective: MultivariatePolynomial,
    pub feasible_set: SemialgebraicDescription,
    pub recover: RecoveryMap,
}

impl ReducedProblem {
    fn assemble(ball: &MultivariatePolynomial, recover: RecoveryMap) -> Self {
        let s = recover.split_count();
        let lifted = ball.compose(&recover.coordinate_polynomials()).expect("coordinate count matches");
        let mut atoms = vec![SignAtom::new(lifted, Relation::Le)];
        atoms.extend((0..s).map(|k| SignAtom::new(MultivariatePolynomial::variable(s, k), Relation::Ge)));
        let objective = MultivariatePolynomial::linear(&vec![Rational::one(); s], Rational::zero());
        let feasible_set = SemialgebraicDescription::conjunction(s, atoms).expect("atoms share the split space");
        Self { objective, feasible_set, recover }
    }

    pub fn variable_count(&self) -> usize {
        self.recover.split_count()
    }

    /// The ball atom `q(split) ≤ 0`.
    pub fn ball_atom(&self) -> &SignAtom {
        &self.feasible_set.disjuncts()[0][0]
    }
}

/// `q(x) = Σᵢ (Σⱼ aᵢⱼxⱼ − yᵢ)² − ε²`, so that `‖Ax − y‖₂ ≤ ε ⇔ q(x) ≤ 0`.
pub fn build_ball_polynomial(inst: &RealInstance) -> MultivariatePolynomial {
    ball_from_rows(&inst.a, &inst.y, &inst.epsilon)
}

fn ball_from_rows(a: &Matrix, y: &[Rational], epsilon: &Rational) -> MultivariatePolynomial {
    let n = a.first().map_or(0, Vec::len);
    let mut q = MultivariatePolynomial::constant(n, -(epsilon * epsilon));
    for (row, yi) in a.iter().zip(y) {
        let r = MultivariatePolynomial::linear(row, -yi.clone());
        q = &q + &(&r * &r);
    }
    q
}

/// Ball polynomial of a complex instance over `(Re x₁..Re x_N, Im x₁..Im x_N)`:
/// `Σᵢ (Σⱼ Re aᵢⱼ Re xⱼ − Im aᵢⱼ Im xⱼ − Re yᵢ)² + (Σⱼ Re aᵢⱼ Im xⱼ + Im aᵢⱼ Re xⱼ − Im yᵢ)² − ε²`.
pub fn complex_ball_polynomial(inst: &ComplexInstance) -> MultivariatePolynomial {
    let (m, n) = (inst.rows(), inst.cols());
    let mut q = MultivariatePolynomial::constant(2 * n, -(&inst.epsilon * &inst.epsilon));
    for i in 0..m {
        let mut re = vec![Rational::zero(); 2 * n];
        let mut im = vec![Rational::zero(); 2 * n];
        for j in 0..n {
            re[j] = inst.a_re[i][j].clone();
            re[n + j] = -&inst.a_im[i][j];
            im[j] = inst.a_im[i][j].clone();
            im[n + j] = inst.a_re[i][j].clone();
        }
        let re = MultivariatePolynomial::linear(&re, -inst.y_re[i].clone());
        let im = MultivariatePolynomial::linear(&im, -inst.y_im[i].clone());
        q = &(&q + &(&re * &re)) + &(&im * &im);
    }
    q
}

/// Positive/negative-part split of the real problem in `2N` variables.
pub fn split_abs(inst: &RealInstance) -> ReducedProblem {
    ReducedProblem::assemble(&build_ball_polynomial(inst), RecoveryMap::Real { n: inst.cols() })
}

/// Complex problem as a real problem in `4N` split variables.
pub fn lift_complex(inst: &ComplexInstance) -> ReducedProblem {
    ReducedProblem::assemble(&complex_ball_polynomial(inst), RecoveryMap::Complex { n: inst.cols() })
}

/// `‖x‖* = Σ |Re xᵢ| + |Im xᵢ|`; with `x` as `2N` reals this is the ℓ¹ norm.
pub fn star_norm<S: Scalar>(x: &[S]) -> Result<S, ArithError> {
    x.iter().try_fold(S::zero_value(), |acc, v| if v.signum() < 0 { acc.try_sub(v) } else { acc.try_add(v) })
}
