//! Candidate KKT points by signed-support enumeration.
//!
//! A minimiser of least support has linearly independent support columns:
//! otherwise a null-space direction of `A` restricted to the support keeps
//! `Ax` fixed and, by minimality of `‖x‖₁`, can be followed until a
//! coordinate vanishes. So only supports `S` with `A_S` of full column rank
//! are visited, each with every sign vector `σ`.

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{residual, BallSystem, Multipliers, SolveError, SolveOptions};
use crate::exact_arith::rational::int;
use crate::exact_arith::{QuadraticNumber, Rational, UnivariatePolynomial};
use crate::linalg::{dot, gram, independent_rows, inverse, mat_vec, rank, select_columns, select_rows, transpose};

#[derive(Clone, Debug)]
pub(super) struct Candidate {
    pub point: Vec<QuadraticNumber>,
    pub multipliers: Multipliers,
}

/// `x = 0` with the ball inactive: `λ = 0`, every `μ = 1`.
pub(super) fn origin(sys: &BallSystem) -> Candidate {
    Candidate {
        point: vec![QuadraticNumber::zero(); sys.layout.coordinate_count()],
        multipliers: Multipliers::Ball {
            ball: QuadraticNumber::zero(),
            nonnegativity: vec![QuadraticNumber::one(); sys.layout.split_count()],
        },
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for j in start..=n - (k - current.len()) {
            current.push(j);
            go(j + 1, n, k, current, out);
            current.pop();
        }
    }
    go(0, n, k, &mut current, &mut out);
    out
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn sign_vectors(k: usize) -> impl Iterator<Item = Vec<i64>> {
    (0..1u64 << k).map(move |bits| (0..k).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect())
}

fn check_budget(needed: u128, options: &SolveOptions) -> Result<(), SolveError> {
    if needed > options.max_candidates {
        return Err(SolveError::BudgetExceeded { what: "candidate enumeration", needed, limit: options.max_candidates });
    }
    Ok(())
}

/// Candidates with the ball active and `λ > 0`; requires a strictly feasible
/// point so that multipliers exist.
///
/// On support `S` with signs `σ`, stationarity reads `σ + 2λ A_Sᵀ(A_S x_S − y) = 0`,
/// so `x_S = p − r/(2λ)` with `G = A_SᵀA_S`, `p = G⁻¹A_Sᵀy`, `r = G⁻¹σ`.
/// Writing `h₀ = A_S p − y`, `h₁ = A_S r`, the ball equality multiplied by
/// `4λ²` becomes `4(‖h₀‖² − ε²)λ² − 4(h₀·h₁)λ + ‖h₁‖² = 0`.
pub(super) fn ball_candidates(sys: &BallSystem, options: &SolveOptions) -> Result<Vec<Candidate>, SolveError> {
    let n = sys.layout.coordinate_count();
    let r = rank(&sys.a).min(n);
    check_budget((1..=r).map(|k| binomial(n, k) << k).sum(), options)?;
    let supports: Vec<Vec<usize>> = (1..=r).flat_map(|k| combinations(n, k)).collect();
    let found: Vec<Vec<Candidate>> = supports.par_iter().map(|s| support_candidates(sys, s)).collect();
    Ok(found.into_iter().flatten().collect())
}

fn support_candidates(sys: &BallSystem, support: &[usize]) -> Vec<Candidate> {
    let a_s = select_columns(&sys.a, support);
    let Some(g_inv) = inverse(&gram(&a_s)) else {
        return Vec::new();
    };
    let p = mat_vec(&g_inv, &mat_vec(&transpose(&a_s), &sys.y));
    let h0: Vec<Rational> = mat_vec(&a_s, &p).iter().zip(&sys.y).map(|(v, t)| v - t).collect();
    let c2 = int(4) * (dot(&h0, &h0) - &sys.epsilon_sq);
    let mut out = Vec::new();
    for sigma in sign_vectors(support.len()) {
        let sigma_q: Vec<Rational> = sigma.iter().map(|&s| int(s)).collect();
        let r = mat_vec(&g_inv, &sigma_q);
        let h1 = mat_vec(&a_s, &r);
        let c1 = int(-4) * dot(&h0, &h1);
        let c0 = dot(&h1, &h1);
        let poly = UnivariatePolynomial::new(vec![c0, c1, c2.clone()]);
        let Ok(roots) = poly.quadratic_real_roots() else { continue };
        for lambda in roots.into_iter().filter(|l| l.sign() > 0) {
            if let Some(c) = ball_candidate(sys, support, &sigma, &p, &r, &lambda) {
                out.push(c);
            }
        }
    }
    out
}

fn ball_candidate(
    sys: &BallSystem,
    support: &[usize],
    sigma: &[i64],
    p: &[Rational],
    r: &[Rational],
    lambda: &QuadraticNumber,
) -> Option<Candidate> {
    let n = sys.layout.coordinate_count();
    let inv_two_lambda = lambda.scale(&int(2)).try_recip().ok()?;
    let mut point = vec![QuadraticNumber::zero(); n];
    for (i, &j) in support.iter().enumerate() {
        let xj = &QuadraticNumber::from(p[i].clone()) - &inv_two_lambda.scale(&r[i]);
        if xj.sign() * sigma[i] as i8 <= 0 {
            return None;
        }
        point[j] = xj;
    }
    let res = residual(&sys.a, &sys.y, &point);
    let q = res.iter().fold(QuadraticNumber::from(-sys.epsilon_sq.clone()), |acc, v| &acc + &(v * v));
    if !q.is_zero() {
        return None;
    }
    // μ for w/z of coordinate j: 1 ± λ·∂q/∂xⱼ with ∂q/∂xⱼ = 2 Σᵢ aᵢⱼ resᵢ
    let mut nonneg = vec![QuadraticNumber::zero(); sys.layout.split_count()];
    for j in 0..n {
        let grad = sys
            .a
            .iter()
            .zip(&res)
            .filter(|(row, _)| !row[j].is_zero())
            .fold(QuadraticNumber::zero(), |acc, (row, v)| &acc + &v.scale(&(int(2) * &row[j])));
        let step = lambda * &grad;
        let w = &QuadraticNumber::one() + &step;
        let z = &QuadraticNumber::one() - &step;
        if w.sign() < 0 || z.sign() < 0 {
            return None;
        }
        nonneg[sys.layout.split_index(j, false)] = w;
        nonneg[sys.layout.split_index(j, true)] = z;
    }
    Some(Candidate { point, multipliers: Multipliers::Ball { ball: lambda.clone(), nonnegativity: nonneg } })
}

/// Candidates when `min ‖Ax − y‖² = ε²`. The feasible set is
/// `{x : Mx = c}` with `M = AᵀA`, `c = Aᵀy`; keep an independent row set `R`
/// and visit bases `J` of `M_R` (`|J| = |R|`). A basis with signs `τ` is
/// optimal for `min ‖x‖₁` when `τⱼxⱼ ≥ 0` on `J` and the dual
/// `ν = M_R[:, J]⁻ᵀτ` satisfies `‖M_Rᵀν‖∞ ≤ 1`.
pub(super) fn affine_candidates(sys: &BallSystem, options: &SolveOptions) -> Result<Vec<Candidate>, SolveError> {
    let n = sys.layout.coordinate_count();
    let m_full = gram(&sys.a);
    let c_full = mat_vec(&transpose(&sys.a), &sys.y);
    let rows = independent_rows(&m_full);
    let r = rows.len();
    check_budget(binomial(n, r) << r, options)?;
    let m_r = select_rows(&m_full, &rows);
    let c_r: Vec<Rational> = rows.iter().map(|&i| c_full[i].clone()).collect();
    let bases = combinations(n, r);
    let found: Vec<Vec<Candidate>> =
        bases.par_iter().map(|basis| basis_candidates(sys, &rows, &m_r, &c_r, basis)).collect();
    Ok(found.into_iter().flatten().collect())
}

fn basis_candidates(
    sys: &BallSystem,
    rows: &[usize],
    m_r: &[Vec<Rational>],
    c_r: &[Rational],
    basis: &[usize],
) -> Vec<Candidate> {
    let n = sys.layout.coordinate_count();
    let b = select_columns(&m_r.to_vec(), basis);
    let Some(b_inv) = inverse(&b) else {
        return Vec::new();
    };
    let x_b = mat_vec(&b_inv, c_r);
    let b_inv_t = transpose(&b_inv);
    let mut out = Vec::new();
    'signs: for tau in sign_vectors(basis.len()) {
        for (t, x) in tau.iter().zip(&x_b) {
            let s = if x.is_zero() { 0 } else if *x > Rational::zero() { 1 } else { -1 };
            if s != 0 && s != *t {
                continue 'signs;
            }
        }
        let tau_q: Vec<Rational> = tau.iter().map(|&t| int(t)).collect();
        let nu = mat_vec(&b_inv_t, &tau_q);
        let reduced = mat_vec(&transpose(&m_r.to_vec()), &nu);
        if reduced.iter().any(|v| v > &Rational::one() || v < &-Rational::one()) {
            continue;
        }
        let mut point = vec![QuadraticNumber::zero(); n];
        for (&j, x) in basis.iter().zip(&x_b) {
            point[j] = QuadraticNumber::from(x.clone());
        }
        let mut nonneg = vec![QuadraticNumber::zero(); sys.layout.split_count()];
        for (j, v) in reduced.iter().enumerate() {
            nonneg[sys.layout.split_index(j, false)] = QuadraticNumber::from(Rational::one() - v);
            nonneg[sys.layout.split_index(j, true)] = QuadraticNumber::from(Rational::one() + v);
        }
        out.push(Candidate {
            point,
            multipliers: Multipliers::Affine {
                rows: rows.to_vec(),
                equality: nu.into_iter().map(QuadraticNumber::from).collect(),
                nonnegativity: nonneg,
            },
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_in_order() {
        assert_eq!(combinations(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(binomial(12, 5), 792);
        assert_eq!(sign_vectors(2).count(), 4);
    }
}
