//! Exact minimisation of `Σ u` over one convex ball atom plus nonnegativity
//! atoms, the problem family produced by [`crate::reduction`].
//!
//! The feasible set is convex, so a point is a global minimiser exactly when
//! it admits KKT multipliers. [`solve`] enumerates signed supports of the
//! split variables, solves stationarity over ℚ parameterised by the ball
//! multiplier `λ`, and substitutes into `q = 0`, which leaves a polynomial of
//! degree at most two in `λ`. Its roots are kept as [`QuadraticNumber`]s.
//!
//! When `min ‖Ax − y‖² = ε²` there is no interior point and no ball
//! multiplier need exist; the feasible set is then the affine least-squares
//! set and the ball atom is replaced by the normal equations.

mod certificate;
mod kkt;
pub mod oracle;

use std::cmp::Ordering;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exact_arith::rational::serde_str;
use crate::exact_arith::{QuadraticNumber, Rational};
use crate::linalg::{dot, least_squares, Matrix};
use crate::reduction::{star_norm, ComplexInstance, RealInstance, RecoveryMap};

pub use certificate::{certify, certify_complex};
pub use oracle::{oracle_solve, oracle_solve_complex, OracleBracket, OracleError};

/// Default limit on split variables (`2N` real, `4N` complex).
pub const MAX_SPLIT_VARIABLES: usize = 24;
/// Default limit on enumerated (support, sign) candidates.
pub const DEFAULT_CANDIDATE_BUDGET: u128 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FeasibilityStatus {
    Empty,
    Feasible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub status: FeasibilityStatus,
    /// `min_x ‖Ax − y‖²`.
    #[serde(with = "serde_str")]
    pub min_residual_sq: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("infeasible: min ‖Ax − y‖² = {min_residual_sq} exceeds ε² = {epsilon_sq}")]
    Infeasible { min_residual_sq: Rational, epsilon_sq: Rational },
    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded { what: &'static str, needed: u128, limit: u128 },
    #[error("no KKT point found")]
    NoKktPoint,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub max_split_variables: usize,
    pub max_candidates: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { max_split_variables: MAX_SPLIT_VARIABLES, max_candidates: DEFAULT_CANDIDATE_BUDGET }
    }
}

/// Lagrange multipliers for `L = Σu + λ·q(u) − Σ μₖuₖ`.
///
/// `Affine` replaces the ball by the equalities `(AᵀA)_R x = (Aᵀy)_R` over
/// an independent row set `R`, valid only when `min ‖Ax − y‖² = ε²`; there
/// `L = Σu − νᵀ((AᵀA)_R x − (Aᵀy)_R) − Σ μₖuₖ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Multipliers {
    Ball { ball: QuadraticNumber, nonnegativity: Vec<QuadraticNumber> },
    Affine { rows: Vec<usize>, equality: Vec<QuadraticNumber>, nonnegativity: Vec<QuadraticNumber> },
}

impl Multipliers {
    pub fn nonnegativity(&self) -> &[QuadraticNumber] {
        match self {
            Multipliers::Ball { nonnegativity, .. } | Multipliers::Affine { nonnegativity, .. } => nonnegativity,
        }
    }
}

/// A minimiser with its certificate. Constraint indices in `active_set`
/// follow the reduced problem: 0 is the ball, `k + 1` is `uₖ ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Solution {
    /// `N` coordinates, or `(Re x₁..Re x_N, Im x₁..Im x_N)` for complex input.
    pub point: Vec<QuadraticNumber>,
    pub objective_value: QuadraticNumber,
    pub active_set: Vec<usize>,
    pub multipliers: Multipliers,
}

impl Solution {
    /// `(Re xⱼ, Im xⱼ)` pairs of a complex solution.
    pub fn complex_coordinates(&self) -> Vec<(QuadraticNumber, QuadraticNumber)> {
        let n = self.point.len() / 2;
        (0..n).map(|j| (self.point[j].clone(), self.point[n + j].clone())).collect()
    }
}

/// The real system `‖Ax − y‖² ≤ ε²` the solver works on, together with the
/// split layout used for selection and multipliers.
struct BallSystem {
    a: Matrix,
    y: Vec<Rational>,
    epsilon_sq: Rational,
    layout: RecoveryMap,
}

impl BallSystem {
    fn real(inst: &RealInstance) -> Self {
        Self {
            a: inst.a().clone(),
            y: inst.y().to_vec(),
            epsilon_sq: inst.epsilon() * inst.epsilon(),
            layout: RecoveryMap::Real { n: inst.cols() },
        }
    }

    fn complex(inst: &ComplexInstance) -> Self {
        let (a, y) = inst.real_form();
        Self { a, y, epsilon_sq: inst.epsilon() * inst.epsilon(), layout: RecoveryMap::Complex { n: inst.cols() } }
    }

    fn feasibility(&self) -> FeasibilityReport {
        let min_residual_sq = least_squares(&self.a, &self.y).residual_sq;
        let status =
            if min_residual_sq > self.epsilon_sq { FeasibilityStatus::Empty } else { FeasibilityStatus::Feasible };
        FeasibilityReport { status, min_residual_sq }
    }
}

pub fn check_feasible(inst: &RealInstance) -> FeasibilityReport {
    BallSystem::real(inst).feasibility()
}

pub fn check_feasible_complex(inst: &ComplexInstance) -> FeasibilityReport {
    BallSystem::complex(inst).feasibility()
}

pub fn solve(inst: &RealInstance) -> Result<Solution, SolveError> {
    solve_with(inst, &SolveOptions::default())
}

pub fn solve_with(inst: &RealInstance, options: &SolveOptions) -> Result<Solution, SolveError> {
    solve_system(&BallSystem::real(inst), options)
}

/// Minimises `‖x‖*`; the point is returned as `2N` reals in block order.
pub fn solve_complex(inst: &ComplexInstance) -> Result<Solution, SolveError> {
    solve_complex_with(inst, &SolveOptions::default())
}

pub fn solve_complex_with(inst: &ComplexInstance, options: &SolveOptions) -> Result<Solution, SolveError> {
    solve_system(&BallSystem::complex(inst), options)
}

fn solve_system(sys: &BallSystem, options: &SolveOptions) -> Result<Solution, SolveError> {
    let split = sys.layout.split_count();
    if split > options.max_split_variables {
        return Err(SolveError::BudgetExceeded {
            what: "split variables",
            needed: split as u128,
            limit: options.max_split_variables as u128,
        });
    }
    let report = sys.feasibility();
    if report.status == FeasibilityStatus::Empty {
        return Err(SolveError::Infeasible {
            min_residual_sq: report.min_residual_sq,
            epsilon_sq: sys.epsilon_sq.clone(),
        });
    }
    let candidates = if dot(&sys.y, &sys.y) <= sys.epsilon_sq {
        vec![kkt::origin(sys)]
    } else if report.min_residual_sq < sys.epsilon_sq {
        kkt::ball_candidates(sys, options)?
    } else {
        kkt::affine_candidates(sys, options)?
    };
    select(sys, candidates)
}

/// Canonical choice among candidate minimisers: least objective, then fewest
/// nonzero split variables, then the lexicographically smallest 0/1 support
/// indicator over the split variables, then the lexicographically smallest
/// point.
fn select(sys: &BallSystem, candidates: Vec<kkt::Candidate>) -> Result<Solution, SolveError> {
    let keyed: Vec<_> = candidates
        .into_iter()
        .map(|c| {
            let objective = star_norm(&c.point).expect("candidate coordinates share one radicand");
            let indicator: Vec<bool> = sys.layout.split(&c.point).iter().map(|u| !u.is_zero()).collect();
            (objective, indicator, c)
        })
        .collect();
    let best = keyed
        .iter()
        .min_by(|x, y| {
            x.0.cmp_exact(&y.0)
                .then_with(|| count(&x.1).cmp(&count(&y.1)))
                .then_with(|| x.1.cmp(&y.1))
                .then_with(|| lex_cmp(&x.2.point, &y.2.point))
        })
        .ok_or(SolveError::NoKktPoint)?;
    let (objective, indicator, cand) = best;
    let ball_active = ball_value(sys, &cand.point).is_zero();
    let active_set = ball_active
        .then_some(0)
        .into_iter()
        .chain(indicator.iter().enumerate().filter(|(_, nz)| !**nz).map(|(k, _)| k + 1))
        .collect();
    Ok(Solution {
        point: cand.point.clone(),
        objective_value: objective.clone(),
        active_set,
        multipliers: cand.multipliers.clone(),
    })
}

fn count(indicator: &[bool]) -> usize {
    indicator.iter().filter(|b| **b).count()
}

fn lex_cmp(x: &[QuadraticNumber], y: &[QuadraticNumber]) -> Ordering {
    x.iter().zip(y).map(|(a, b)| a.cmp_exact(b)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

/// `A x − y` in exact arithmetic.
fn residual(a: &Matrix, y: &[Rational], x: &[QuadraticNumber]) -> Vec<QuadraticNumber> {
    a.iter()
        .zip(y)
        .map(|(row, yi)| {
            row.iter()
                .zip(x)
                .filter(|(c, _)| !c.is_zero())
                .fold(QuadraticNumber::from(-yi.clone()), |acc, (c, xi)| &acc + &xi.scale(c))
        })
        .collect()
}

/// `q(x) = ‖Ax − y‖² − ε²`.
fn ball_value(sys: &BallSystem, x: &[QuadraticNumber]) -> QuadraticNumber {
    residual(&sys.a, &sys.y, x)
        .iter()
        .fold(QuadraticNumber::from(-sys.epsilon_sq.clone()), |acc, r| &acc + &(r * r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rational::{int, rat};

    fn real(a: &[&[i64]], y: &[i64], eps: Rational) -> RealInstance {
        RealInstance::new(
            a.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect(),
            y.iter().map(|&v| int(v)).collect(),
            eps,
        )
        .unwrap()
    }

    fn qn(r: Rational) -> QuadraticNumber {
        QuadraticNumber::from(r)
    }

    #[test]
    fn feasibility_examples() {
        let r = check_feasible(&real(&[&[0, 0]], &[1], rat(1, 2)));
        assert_eq!(r.status, FeasibilityStatus::Empty);
        assert_eq!(r.min_residual_sq, int(1));
        let r = check_feasible(&real(&[&[1, 0]], &[1], rat(1, 100)));
        assert_eq!(r.status, FeasibilityStatus::Feasible);
        assert!(r.min_residual_sq.is_zero());
        let r = check_feasible(&real(&[&[1, 1, 0], &[2, 2, 0]], &[1, 0], rat(1, 2)));
        assert_eq!(r.status, FeasibilityStatus::Empty);
        assert_eq!(r.min_residual_sq, rat(4, 5));
    }

    #[test]
    fn closed_form_examples() {
        let s = solve(&real(&[&[1, 2]], &[1], rat(1, 2))).unwrap();
        assert_eq!(s.point, vec![qn(int(0)), qn(rat(1, 4))]);
        assert_eq!(s.objective_value, qn(rat(1, 4)));

        let inst = RealInstance::new(vec![vec![int(1), int(2)]], vec![rat(1, 4)], rat(1, 2)).unwrap();
        let s = solve(&inst).unwrap();
        assert_eq!(s.point, vec![qn(int(0)), qn(int(0))]);
        assert!(s.objective_value.is_zero());
        assert_eq!(s.active_set, vec![1, 2, 3, 4]);

        let s = solve(&real(&[&[1, 1]], &[1], rat(1, 2))).unwrap();
        assert_eq!(s.point, vec![qn(int(0)), qn(rat(1, 2))]);
        assert_eq!(s.objective_value, qn(rat(1, 2)));
        assert_eq!(s.active_set, vec![0, 1, 3, 4]);
    }

    #[test]
    fn irrational_minimiser() {
        // x = (0, 0, 1 − √2/20): the optimum sits where the ball meets the
        // third axis, so the ball multiplier is irrational.
        let s = solve(&real(&[&[1, 0, 1], &[0, 1, 1]], &[1, 1], rat(1, 10))).unwrap();
        let expected = &QuadraticNumber::one() - &QuadraticNumber::sqrt(&int(2)).unwrap().scale(&rat(1, 20));
        assert_eq!(s.objective_value, expected);
        assert_eq!(s.point[2], expected);
        assert!(s.point[0].is_zero() && s.point[1].is_zero());
    }

    #[test]
    fn infeasible_and_budget() {
        assert!(matches!(solve(&real(&[&[0, 0]], &[1], rat(1, 2))), Err(SolveError::Infeasible { .. })));
        let wide = RealInstance::new(vec![vec![int(1); 13]], vec![int(1)], rat(1, 2)).unwrap();
        assert!(matches!(solve(&wide), Err(SolveError::BudgetExceeded { .. })));
        let tight = SolveOptions { max_candidates: 3, ..SolveOptions::default() };
        assert!(matches!(
            solve_with(&real(&[&[1, 2, 3]], &[1], rat(1, 2)), &tight),
            Err(SolveError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn degenerate_slater_case() {
        // columns span (3, 4); y = (3, 4) + (4, −3) so min ‖Ax − y‖² = 25 = ε²
        // and the feasible set is the line x₁ + 2x₂ = 1 (x₃ free).
        let inst = real(&[&[3, 6, 0], &[4, 8, 0]], &[7, 1], int(5));
        assert!(check_feasible(&inst).min_residual_sq == int(25));
        let s = solve(&inst).unwrap();
        assert!(matches!(s.multipliers, Multipliers::Affine { .. }));
        assert_eq!(s.point, vec![qn(int(0)), qn(rat(1, 2)), qn(int(0))]);
        assert_eq!(s.objective_value, qn(rat(1, 2)));
        assert!(certify(&inst, &s));
    }

    #[test]
    fn complex_example() {
        // A = (i, 0), y = 1, ε = 1/2 → x = (−i/2, 0)
        let inst = ComplexInstance::new(
            vec![vec![int(0), int(0)]],
            vec![vec![int(1), int(0)]],
            vec![int(1)],
            vec![int(0)],
            rat(1, 2),
        )
        .unwrap();
        let s = solve_complex(&inst).unwrap();
        assert_eq!(s.point, vec![qn(int(0)), qn(int(0)), qn(rat(-1, 2)), qn(int(0))]);
        assert_eq!(s.objective_value, qn(rat(1, 2)));
        assert_eq!(s.complex_coordinates()[0], (qn(int(0)), qn(rat(-1, 2))));
        assert!(certify_complex(&inst, &s));
    }

    #[test]
    fn deterministic() {
        let inst = real(&[&[1, -2, 3, 1], &[2, 1, -1, 2]], &[1, 2], rat(1, 3));
        let first = solve(&inst).unwrap();
        for _ in 0..3 {
            assert_eq!(solve(&inst).unwrap(), first);
        }
    }
}
