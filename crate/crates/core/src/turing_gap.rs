//! A discontinuity witness for the basis-pursuit solution map.
//!
//! For `1 × N` instances with positive entries and `y = 1`, the minimisers
//! are exactly the points `tⱼ(1 − ε)/aⱼ` with `Σ tⱼ = 1`, `tⱼ ≥ 0` and
//! `tⱼ = 0` unless `aⱼ` is maximal. The two families
//!
//! ```text
//!     ω¹ₙ = ((1, 1 − 2⁻ⁿ), 1)      ω²ₙ = ((1 − 2⁻ⁿ, 1), 1)
//! ```
//!
//! both converge to `ω* = ((1, 1), 1)` at rate `2⁻ⁿ`, yet their unique
//! minimisers `(1 − ε)e₁` and `(1 − ε)e₂` stay `√2(1 − ε)` apart. A map
//! that is continuous on computable sequences cannot select a minimiser
//! along both, while the exact solver handles every member.

use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact_arith::rational::{pow2_inv, serde_str};
use crate::exact_arith::{QuadraticNumber, Rational};
use crate::optimizer::{solve, Solution, SolveError};
use crate::reduction::RealInstance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GapError {
    #[error("epsilon must lie strictly between 0 and 1")]
    EpsilonOutOfRange,
    #[error("need at least one sequence member")]
    EmptySequence,
    #[error("sequences have different lengths")]
    LengthMismatch,
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Clone, Debug)]
pub struct GapSequences {
    pub epsilon: Rational,
    pub omega1: Vec<RealInstance>,
    pub omega2: Vec<RealInstance>,
    pub omega_star: RealInstance,
    pub kappa: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapRecord {
    pub n: usize,
    /// `max_j ‖ωⁿʲ − ω*‖`, exact.
    #[serde(with = "serde_str")]
    pub input_distance: Rational,
    pub solution1: Solution,
    pub solution2: Solution,
    #[serde(with = "serde_str")]
    pub solution_separation_sq: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    #[serde(with = "serde_str")]
    pub epsilon: Rational,
    #[serde(with = "serde_str")]
    pub kappa: Rational,
    pub limit_solution: Solution,
    pub records: Vec<GapRecord>,
    pub conditions_a_b_hold: bool,
}

fn one_by_two(a1: Rational, a2: Rational, epsilon: &Rational) -> RealInstance {
    RealInstance::new(vec![vec![a1, a2]], vec![Rational::one()], epsilon.clone()).expect("1 × 2 instance with ε > 0")
}

pub fn build_sequences(epsilon: &Rational, n_max: usize) -> Result<GapSequences, GapError> {
    if !(epsilon > &Rational::zero() && epsilon < &Rational::one()) {
        return Err(GapError::EpsilonOutOfRange);
    }
    if n_max == 0 {
        return Err(GapError::EmptySequence);
    }
    let near = |n: usize| Rational::one() - pow2_inv(n as u32);
    Ok(GapSequences {
        epsilon: epsilon.clone(),
        omega1: (1..=n_max).map(|n| one_by_two(Rational::one(), near(n), epsilon)).collect(),
        omega2: (1..=n_max).map(|n| one_by_two(near(n), Rational::one(), epsilon)).collect(),
        omega_star: one_by_two(Rational::one(), Rational::one(), epsilon),
        kappa: Rational::one() - epsilon,
    })
}

/// ℓ² distance between two instances over their stacked `(A, y)` entries.
/// Exact: the squared distance must have a rational square root, which
/// holds whenever the instances differ in a single entry.
pub fn input_distance(a: &RealInstance, b: &RealInstance) -> Option<Rational> {
    let sq = a
        .a()
        .iter()
        .flatten()
        .zip(b.a().iter().flatten())
        .chain(a.y().iter().zip(b.y()))
        .fold(Rational::zero(), |acc, (u, v)| acc + (u - v) * (u - v));
    QuadraticNumber::sqrt(&sq).ok()?.to_rational()
}

/// `‖x₁ − x₂‖²`; `None` if the points mix radicands irreconcilably.
fn separation_sq(x1: &[QuadraticNumber], x2: &[QuadraticNumber]) -> Option<Rational> {
    let mut acc = QuadraticNumber::zero();
    for (u, v) in x1.iter().zip(x2) {
        let d = u.try_sub(v).ok()?;
        acc = acc.try_add(&d.try_mul(&d).ok()?).ok()?;
    }
    acc.to_rational()
}

pub fn verify_gap(seq: &GapSequences) -> Result<GapReport, GapError> {
    if seq.omega1.len() != seq.omega2.len() {
        return Err(GapError::LengthMismatch);
    }
    if seq.omega1.is_empty() {
        return Err(GapError::EmptySequence);
    }
    let limit_solution = solve(&seq.omega_star)?;
    let kappa_sq = &seq.kappa * &seq.kappa;
    let mut holds = seq.kappa > Rational::zero();
    let mut records = Vec::with_capacity(seq.omega1.len());
    for (k, (w1, w2)) in seq.omega1.iter().zip(&seq.omega2).enumerate() {
        let n = k + 1;
        let solution1 = solve(w1)?;
        let solution2 = solve(w2)?;
        let bound = pow2_inv(n as u32);
        let d1 = input_distance(w1, &seq.omega_star);
        let d2 = input_distance(w2, &seq.omega_star);
        let input_distance = match (d1, d2) {
            (Some(d1), Some(d2)) => {
                holds &= d1 <= bound && d2 <= bound;
                d1.max(d2)
            }
            _ => {
                holds = false;
                bound.clone() + Rational::one()
            }
        };
        let solution_separation_sq = match separation_sq(&solution1.point, &solution2.point) {
            Some(s) => s,
            None => {
                holds = false;
                Rational::zero()
            }
        };
        holds &= solution_separation_sq > kappa_sq;
        records.push(GapRecord { n, input_distance, solution1, solution2, solution_separation_sq });
    }
    Ok(GapReport {
        epsilon: seq.epsilon.clone(),
        kappa: seq.kappa.clone(),
        limit_solution,
        records,
        conditions_a_b_hold: holds,
    })
}

impl GapReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "epsilon = {}, kappa = {}", self.epsilon, self.kappa);
        let _ = writeln!(out, "{:>4}  {:>14}  {:>14}", "n", "input distance", "separation^2");
        for r in &self.records {
            let _ = writeln!(out, "{:>4}  {:>14}  {:>14}", r.n, r.input_distance.to_string(), r.solution_separation_sq.to_string());
        }
        let _ = writeln!(out, "conditions (a) and (b) hold: {}", self.conditions_a_b_hold);
        out
    }
}
