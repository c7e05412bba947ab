//! Exact KKT verification against the reduced problem.

use super::{Multipliers, Solution};
use crate::exact_arith::{ArithError, QuadraticNumber, Rational};
use crate::linalg::{gram, least_squares, mat_vec, transpose, Matrix};
use crate::polynomial::PolyError;
use crate::reduction::{lift_complex, split_abs, star_norm, ComplexInstance, RealInstance, ReducedProblem};

/// True iff `sol` is feasible and its multipliers satisfy stationarity,
/// complementary slackness and sign conditions exactly.
pub fn certify(inst: &RealInstance, sol: &Solution) -> bool {
    let eps_sq = inst.epsilon() * inst.epsilon();
    check(&split_abs(inst), inst.a(), inst.y(), &eps_sq, sol).unwrap_or(false)
}

pub fn certify_complex(inst: &ComplexInstance, sol: &Solution) -> bool {
    let eps_sq = inst.epsilon() * inst.epsilon();
    let (a, y) = inst.real_form();
    check(&lift_complex(inst), &a, &y, &eps_sq, sol).unwrap_or(false)
}

fn check(rp: &ReducedProblem, a: &Matrix, y: &[Rational], eps_sq: &Rational, sol: &Solution) -> Result<bool, PolyError> {
    let s = rp.variable_count();
    if sol.point.len() != rp.recover.coordinate_count() || sol.multipliers.nonnegativity().len() != s {
        return Ok(false);
    }
    let u = rp.recover.split(&sol.point);
    let ball = &rp.ball_atom().polynomial;
    let q = ball.evaluate(&u)?;
    if q.sign() > 0 {
        return Ok(false);
    }
    let mu = sol.multipliers.nonnegativity();
    for (m, uk) in mu.iter().zip(&u) {
        if m.sign() < 0 || !m.try_mul(uk)?.is_zero() {
            return Ok(false);
        }
    }
    let stationary = match &sol.multipliers {
        Multipliers::Ball { ball: lambda, .. } => {
            if lambda.sign() < 0 || !lambda.try_mul(&q)?.is_zero() {
                return Ok(false);
            }
            // ∇f + λ∇q − μ = 0
            let mut ok = true;
            for k in 0..s {
                let df = rp.objective.partial_derivative(k).evaluate(&u)?;
                let dq = ball.partial_derivative(k).evaluate(&u)?;
                ok &= df.try_add(&lambda.try_mul(&dq)?)?.try_sub(&mu[k])?.is_zero();
            }
            ok
        }
        Multipliers::Affine { rows, equality, .. } => affine_stationary(rp, a, y, eps_sq, sol, rows, equality)?,
    };
    if !stationary {
        return Ok(false);
    }
    let objective = rp.objective.evaluate(&u)?;
    if objective != sol.objective_value || star_norm(&sol.point)? != sol.objective_value {
        return Ok(false);
    }
    let active: Vec<usize> = q
        .is_zero()
        .then_some(0)
        .into_iter()
        .chain(u.iter().enumerate().filter(|(_, v)| v.is_zero()).map(|(k, _)| k + 1))
        .collect();
    Ok(active == sol.active_set)
}

/// The affine certificate is only sound when the ball has no interior, so
/// that the feasible set lies inside `{x : (AᵀA)_R x = (Aᵀy)_R}`.
fn affine_stationary(
    rp: &ReducedProblem,
    a: &Matrix,
    y: &[Rational],
    eps_sq: &Rational,
    sol: &Solution,
    rows: &[usize],
    nu: &[QuadraticNumber],
) -> Result<bool, ArithError> {
    if least_squares(a, y).residual_sq != *eps_sq || rows.len() != nu.len() {
        return Ok(false);
    }
    let m = gram(a);
    let c = mat_vec(&transpose(a), y);
    if rows.iter().any(|&r| r >= m.len()) {
        return Ok(false);
    }
    for &r in rows {
        let lhs = dot_q(&m[r], &sol.point)?;
        if lhs != QuadraticNumber::from(c[r].clone()) {
            return Ok(false);
        }
    }
    let mu = sol.multipliers.nonnegativity();
    for j in 0..sol.point.len() {
        let column: Vec<Rational> = rows.iter().map(|&r| m[r][j].clone()).collect();
        let reduced = dot_q(&column, nu)?;
        let one = QuadraticNumber::one();
        if mu[rp.recover.split_index(j, false)] != one.try_sub(&reduced)?
            || mu[rp.recover.split_index(j, true)] != one.try_add(&reduced)?
        {
            return Ok(false);
        }
    }
    Ok(true)
}

fn dot_q(coeffs: &[Rational], x: &[QuadraticNumber]) -> Result<QuadraticNumber, ArithError> {
    coeffs.iter().zip(x).try_fold(QuadraticNumber::zero(), |acc, (c, v)| acc.try_add(&v.scale(c)))
}
