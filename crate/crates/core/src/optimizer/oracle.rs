//! Branch-and-bound bracket on the optimal value, independent of the KKT
//! solver.
//!
//! Cells are axis-aligned boxes inside `[−R, R]ⁿ`, `R` the ℓ¹ norm of the
//! least-squares point. Because `q` is convex its tangent plane at the cell
//! centre underestimates it, so the minimum of `‖x‖₁` over the cell cut by
//! that halfspace is a valid lower bound (and an empty cut proves the cell
//! infeasible). Upper bounds come from exactly feasible points: the segment
//! from the strictly feasible least-squares point to the cell's relaxed
//! minimiser is cut at the boundary by isolating a root of `q` along it.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact_arith::rational::{int, serde_str, serde_str_vec};
use crate::exact_arith::Rational;
use crate::linalg::{least_squares, Matrix};
use crate::reduction::{ComplexInstance, RealInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("infeasible: min ‖Ax − y‖² = {0} exceeds ε²")]
    Infeasible(Rational),
    #[error("feasible set has no interior point")]
    NoInteriorPoint,
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
    #[error("budget of {0} cells exhausted")]
    BudgetExceeded(usize),
}

/// `lower ≤ optimum ≤ upper`, with `witness` an exactly feasible point of
/// objective `upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleBracket {
    #[serde(with = "serde_str")]
    pub lower: Rational,
    #[serde(with = "serde_str")]
    pub upper: Rational,
    #[serde(with = "serde_str_vec")]
    pub witness: Vec<Rational>,
    pub cells: usize,
}

pub fn oracle_solve(inst: &RealInstance, tol: &Rational, max_cells: usize) -> Result<OracleBracket, OracleError> {
    let ball = Ball { a: inst.a().clone(), y: inst.y().to_vec(), eps_sq: inst.epsilon() * inst.epsilon() };
    ball.bracket(tol, max_cells)
}

/// Works on `(Re x, Im x)`; the objective is then `‖x‖*`.
pub fn oracle_solve_complex(
    inst: &ComplexInstance,
    tol: &Rational,
    max_cells: usize,
) -> Result<OracleBracket, OracleError> {
    let (m, n) = (inst.rows(), inst.cols());
    // (α + iβ)(u + iv) = (αu − βv) + i(βu + αv)
    let mut a = vec![vec![Rational::zero(); 2 * n]; 2 * m];
    let mut y = vec![Rational::zero(); 2 * m];
    for i in 0..m {
        for j in 0..n {
            let (alpha, beta) = (&inst.a_re()[i][j], &inst.a_im()[i][j]);
            a[2 * i][j] = alpha.clone();
            a[2 * i][n + j] = -beta;
            a[2 * i + 1][j] = beta.clone();
            a[2 * i + 1][n + j] = alpha.clone();
        }
        y[2 * i] = inst.y_re()[i].clone();
        y[2 * i + 1] = inst.y_im()[i].clone();
    }
    Ball { a, y, eps_sq: inst.epsilon() * inst.epsilon() }.bracket(tol, max_cells)
}

struct Ball {
    a: Matrix,
    y: Vec<Rational>,
    eps_sq: Rational,
}

struct Cell {
    lo: Vec<Rational>,
    hi: Vec<Rational>,
    relaxed: Vec<Rational>,
}

fn l1(x: &[Rational]) -> Rational {
    x.iter().fold(Rational::zero(), |acc, v| acc + v.abs())
}

/// A point of `[0, θ*]` within `width` of `θ*`, the root of
/// `c₀ + c₁θ + c₂θ²` in `(0, 1)`, given `c₀ < 0 < c₀ + c₁ + c₂` and `c₂ ≥ 0`.
fn boundary_lower(c0: &Rational, c1: &Rational, c2: &Rational, width: &Rational) -> Rational {
    if c2.is_zero() {
        return -c0 / c1;
    }
    // θ* = (√D − c₁)/(2c₂) with D = c₁² − 4c₀c₂ > 0; write √D = √(pq)/q
    let disc = c1 * c1 - int(4) * c0 * c2;
    let (p, q) = (disc.numer(), disc.denom());
    let two_c2 = int(2) * c2;
    // an error of 1/(qK) in √D moves θ by 1/(qK·2c₂) ≤ width
    let k: BigInt = (Rational::one() / (width * Rational::from(q.clone()) * &two_c2)).ceil().to_integer() + 1u32;
    let radicand: BigInt = p * q * &k * &k;
    let s = radicand.sqrt();
    let root = Rational::new(s, q * k);
    let theta = (root - c1) / two_c2;
    if theta.is_negative() {
        Rational::zero()
    } else {
        theta
    }
}

impl Ball {
    fn dim(&self) -> usize {
        self.a[0].len()
    }

    fn residual(&self, x: &[Rational]) -> Vec<Rational> {
        self.a
            .iter()
            .zip(&self.y)
            .map(|(row, yi)| row.iter().zip(x).fold(-yi.clone(), |acc, (c, v)| acc + c * v))
            .collect()
    }

    fn q(&self, x: &[Rational]) -> Rational {
        self.residual(x).iter().fold(-self.eps_sq.clone(), |acc, r| acc + r * r)
    }

    fn gradient(&self, x: &[Rational]) -> Vec<Rational> {
        let r = self.residual(x);
        (0..self.dim())
            .map(|j| self.a.iter().zip(&r).fold(Rational::zero(), |acc, (row, ri)| acc + int(2) * &row[j] * ri))
            .collect()
    }

    /// Lower bound and relaxed minimiser on a box, `None` if the tangent cut
    /// leaves nothing of it.
    fn relax(&self, lo: &[Rational], hi: &[Rational]) -> Option<(Rational, Vec<Rational>)> {
        let n = self.dim();
        let centre: Vec<Rational> = lo.iter().zip(hi).map(|(a, b)| (a + b) / int(2)).collect();
        let g = self.gradient(&centre);
        // q(c) + g·(x − c) ≤ 0  ⇔  g·x ≤ β
        let beta = g.iter().zip(&centre).fold(-self.q(&centre), |acc, (gi, ci)| acc + gi * ci);
        let mut x: Vec<Rational> = (0..n)
            .map(|i| {
                if lo[i].is_positive() {
                    lo[i].clone()
                } else if hi[i].is_negative() {
                    hi[i].clone()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        let mut excess = g.iter().zip(&x).fold(-beta, |acc, (gi, xi)| acc + gi * xi);
        if excess.is_positive() {
            // moving xᵢ by t against gᵢ lowers g·x by |gᵢ|·t at ℓ¹ cost t
            let mut order: Vec<usize> = (0..n).filter(|&i| !g[i].is_zero()).collect();
            order.sort_by(|&i, &j| g[j].abs().cmp(&g[i].abs()).then(i.cmp(&j)));
            for i in order {
                let room = if g[i].is_positive() { &x[i] - &lo[i] } else { &hi[i] - &x[i] };
                let gain = g[i].abs();
                let need = &excess / &gain;
                let t = if need < room { need } else { room };
                if g[i].is_positive() {
                    x[i] -= &t;
                } else {
                    x[i] += &t;
                }
                excess -= &gain * &t;
                if !excess.is_positive() {
                    break;
                }
            }
            if excess.is_positive() {
                return None;
            }
        }
        Some((l1(&x), x))
    }

    /// A feasible point on the segment from `inside` (q < 0) towards
    /// `target`, within `width` of the boundary in the segment parameter.
    fn pull_inside(&self, inside: &[Rational], target: &[Rational], width: &Rational) -> Vec<Rational> {
        if self.q(target) <= Rational::zero() {
            return target.to_vec();
        }
        let d: Vec<Rational> = target.iter().zip(inside).map(|(t, s)| t - s).collect();
        // q(s + θd) = ‖r₀ + θ·Ad‖² − ε²
        let r0 = self.residual(inside);
        let ad: Vec<Rational> =
            self.a.iter().map(|row| row.iter().zip(&d).fold(Rational::zero(), |acc, (c, v)| acc + c * v)).collect();
        let c2 = ad.iter().fold(Rational::zero(), |acc, v| acc + v * v);
        let c1 = r0.iter().zip(&ad).fold(Rational::zero(), |acc, (r, v)| acc + int(2) * r * v);
        let c0 = r0.iter().fold(-self.eps_sq.clone(), |acc, r| acc + r * r);
        let theta = boundary_lower(&c0, &c1, &c2, width);
        inside.iter().zip(&d).map(|(s, v)| s + &theta * v).collect()
    }

    fn bracket(&self, tol: &Rational, max_cells: usize) -> Result<OracleBracket, OracleError> {
        if !tol.is_positive() {
            return Err(OracleError::NonPositiveTolerance);
        }
        let n = self.dim();
        let ls = least_squares(&self.a, &self.y);
        match ls.residual_sq.cmp(&self.eps_sq) {
            Ordering::Greater => return Err(OracleError::Infeasible(ls.residual_sq)),
            Ordering::Equal => return Err(OracleError::NoInteriorPoint),
            Ordering::Less => {}
        }
        let zero = vec![Rational::zero(); n];
        if self.q(&zero) <= Rational::zero() {
            return Ok(OracleBracket { lower: Rational::zero(), upper: Rational::zero(), witness: zero, cells: 0 });
        }
        let inside = ls.point;
        let mut upper = l1(&inside);
        let mut witness = inside.clone();
        let radius = upper.clone();
        let mut cells: Vec<Cell> = Vec::new();
        let mut heap = BinaryHeap::new();
        let lo = vec![-radius.clone(); n];
        let hi = vec![radius; n];
        if let Some((lower, relaxed)) = self.relax(&lo, &hi) {
            heap.push(Reverse((lower.clone(), 0usize)));
            cells.push(Cell { lo, hi, relaxed });
        }
        let mut processed = 0;
        // least bound among cells dropped for lying within `tol` of `upper`
        let mut dropped: Option<Rational> = None;
        loop {
            let lower = match (heap.peek(), &dropped) {
                (Some(Reverse((top, _))), Some(d)) => top.min(d).clone(),
                (Some(Reverse((top, _))), None) => top.clone(),
                (None, Some(d)) => d.clone(),
                // every remaining cell was pruned against `upper`
                (None, None) => upper.clone(),
            };
            if &upper - &lower <= *tol {
                let lower = lower.min(upper.clone());
                return Ok(OracleBracket { lower, upper, witness, cells: processed });
            }
            let Some(Reverse((_, id))) = heap.pop() else { unreachable!("a dropped bound within tol ends the loop") };
            processed += 1;
            if processed > max_cells {
                return Err(OracleError::BudgetExceeded(max_cells));
            }
            let cell = &cells[id];
            let width = tol / (int(4) * (l1(&cell.relaxed) + l1(&inside) + Rational::one()));
            let candidate = self.pull_inside(&inside, &cell.relaxed, &width);
            let value = l1(&candidate);
            if value < upper {
                upper = value;
                witness = candidate;
            }
            let axis = (0..n).max_by(|&i, &j| (&cell.hi[i] - &cell.lo[i]).cmp(&(&cell.hi[j] - &cell.lo[j])).then(j.cmp(&i)));
            let axis = axis.expect("nonempty dimension");
            let mid = (&cell.lo[axis] + &cell.hi[axis]) / int(2);
            let (lo, hi) = (cell.lo.clone(), cell.hi.clone());
            let mut left_hi = hi.clone();
            left_hi[axis] = mid.clone();
            let mut right_lo = lo.clone();
            right_lo[axis] = mid;
            for (clo, chi) in [(lo, left_hi), (right_lo, hi)] {
                if let Some((lower, relaxed)) = self.relax(&clo, &chi) {
                    if &upper - &lower > *tol {
                        heap.push(Reverse((lower, cells.len())));
                        cells.push(Cell { lo: clo, hi: chi, relaxed });
                    } else if lower < upper && dropped.as_ref().is_none_or(|d| &lower < d) {
                        dropped = Some(lower);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rational::{pow2_inv, rat};
    use crate::exact_arith::QuadraticNumber;

    #[test]
    fn closed_form_bracket() {
        let inst = RealInstance::new(vec![vec![int(1), int(2)]], vec![int(1)], rat(1, 2)).unwrap();
        let tol = rat(1, 1_000_000);
        let b = oracle_solve(&inst, &tol, 100_000).unwrap();
        assert!(b.lower <= rat(1, 4) && rat(1, 4) <= b.upper);
        assert!(&b.upper - &b.lower <= tol);
        let ball = Ball { a: inst.a().clone(), y: inst.y().to_vec(), eps_sq: rat(1, 4) };
        assert!(ball.q(&b.witness) <= Rational::zero());
        assert_eq!(l1(&b.witness), b.upper);
    }

    #[test]
    fn brackets_irrational_optimum() {
        // exact optimum 1 − √2/20
        let a = vec![vec![int(1), int(0), int(1)], vec![int(0), int(1), int(1)]];
        let inst = RealInstance::new(a, vec![int(1), int(1)], rat(1, 10)).unwrap();
        let b = oracle_solve(&inst, &rat(1, 1_000_000), 200_000).unwrap();
        let optimum = QuadraticNumber::one() - QuadraticNumber::sqrt(&int(2)).unwrap().scale(&rat(1, 20));
        assert!(QuadraticNumber::from(b.lower.clone()) <= optimum);
        assert!(optimum <= QuadraticNumber::from(b.upper.clone()));
    }

    #[test]
    fn zero_when_measurement_inside_ball() {
        let inst = RealInstance::new(vec![vec![int(1), int(2)]], vec![rat(1, 4)], rat(1, 2)).unwrap();
        let b = oracle_solve(&inst, &pow2_inv(20), 10).unwrap();
        assert_eq!((b.lower, b.upper), (Rational::zero(), Rational::zero()));
    }

    #[test]
    fn errors() {
        let empty = RealInstance::new(vec![vec![int(0), int(0)]], vec![int(1)], rat(1, 2)).unwrap();
        assert!(matches!(oracle_solve(&empty, &rat(1, 10), 10), Err(OracleError::Infeasible(_))));
        let tight = RealInstance::new(vec![vec![int(0), int(0)]], vec![int(1)], int(1)).unwrap();
        assert_eq!(oracle_solve(&tight, &rat(1, 10), 10).unwrap_err(), OracleError::NoInteriorPoint);
        let ok = RealInstance::new(vec![vec![int(1), int(2)]], vec![int(1)], rat(1, 2)).unwrap();
        assert_eq!(oracle_solve(&ok, &int(0), 10).unwrap_err(), OracleError::NonPositiveTolerance);
        assert_eq!(oracle_solve(&ok, &pow2_inv(40), 2).unwrap_err(), OracleError::BudgetExceeded(2));
    }

    #[test]
    fn complex_bracket() {
        // A = (i, 0), y = 1, ε = 1/2: optimum 1/2
        let inst = ComplexInstance::new(
            vec![vec![int(0), int(0)]],
            vec![vec![int(1), int(0)]],
            vec![int(1)],
            vec![int(0)],
            rat(1, 2),
        )
        .unwrap();
        let b = oracle_solve_complex(&inst, &rat(1, 1_000_000), 100_000).unwrap();
        assert!(b.lower <= rat(1, 2) && rat(1, 2) <= b.upper);
    }
}
