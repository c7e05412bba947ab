//! Dense linear algebra over ℚ by Gauss–Jordan elimination.

use num_traits::{One, Zero};

use crate::exact_arith::Rational;

/// Row-major matrix.
pub type Matrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn cols(m: &Matrix) -> usize {
    m.first().map_or(0, Vec::len)
}

pub fn transpose(m: &Matrix) -> Matrix {
    let (r, c) = (m.len(), cols(m));
    (0..c).map(|j| (0..r).map(|i| m[i][j].clone()).collect()).collect()
}

pub fn dot(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter().zip(y).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

pub fn mat_vec(m: &Matrix, x: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| dot(row, x)).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let bt = transpose(b);
    a.iter().map(|row| bt.iter().map(|col| dot(row, col)).collect()).collect()
}

pub fn select_columns(m: &Matrix, columns: &[usize]) -> Matrix {
    m.iter().map(|row| columns.iter().map(|&j| row[j].clone()).collect()).collect()
}

pub fn select_rows(m: &Matrix, rows: &[usize]) -> Matrix {
    rows.iter().map(|&i| m[i].clone()).collect()
}

/// Reduced row echelon form and the pivot column of each nonzero row.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, ncols) = (a.len(), cols(&a));
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..ncols {
                    let delta = &f * &a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).1.len()
}

/// Indices of a maximal linearly independent set of columns (the first ones
/// in order).
pub fn independent_columns(m: &Matrix) -> Vec<usize> {
    rref(m).1
}

/// Indices of a maximal linearly independent set of rows.
pub fn independent_rows(m: &Matrix) -> Vec<usize> {
    rref(&transpose(m)).1
}

/// Solves `m·x = rhs` for square nonsingular `m`; `None` if singular.
pub fn solve(m: &Matrix, rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(red.into_iter().map(|mut row| row.pop().expect("augmented")).collect())
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(red.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Gram matrix `AᵀA`.
pub fn gram(a: &Matrix) -> Matrix {
    let at = transpose(a);
    at.iter().map(|ci| at.iter().map(|cj| dot(ci, cj)).collect()).collect()
}

/// Exact least-squares fit of `y` by the columns of `a`.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    /// A minimiser of `‖Ax − y‖²`, supported on independent columns.
    pub point: Vec<Rational>,
    /// `min ‖Ax − y‖²`.
    pub residual_sq: Rational,
    pub rank: usize,
}

pub fn least_squares(a: &Matrix, y: &[Rational]) -> LeastSquares {
    let n = cols(a);
    let basis = independent_columns(a);
    let mut point = vec![Rational::zero(); n];
    if !basis.is_empty() {
        let ab = select_columns(a, &basis);
        let rhs = mat_vec(&transpose(&ab), y);
        let coef = solve(&gram(&ab), &rhs).expect("independent columns give a nonsingular Gram matrix");
        for (&j, c) in basis.iter().zip(coef) {
            point[j] = c;
        }
    }
    let residual: Vec<Rational> = mat_vec(a, &point).iter().zip(y).map(|(p, t)| p - t).collect();
    LeastSquares { residual_sq: dot(&residual, &residual), point, rank: basis.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(solve(&m(&[&[1, 2], &[2, 4]]), &[int(1), int(2)]).is_none());
    }

    #[test]
    fn rank_deficient_least_squares() {
        // min (s − 1)² + (2s)² over s = x₁ + x₂ → s = 1/5, residual 4/5
        let a = m(&[&[1, 1, 0], &[2, 2, 0]]);
        let ls = least_squares(&a, &[int(1), int(0)]);
        assert_eq!(ls.rank, 1);
        assert_eq!(ls.residual_sq, rat(4, 5));
        assert_eq!(independent_rows(&a), vec![0]);
    }

    #[test]
    fn zero_matrix() {
        let a = m(&[&[0, 0]]);
        let ls = least_squares(&a, &[int(1)]);
        assert_eq!(ls.rank, 0);
        assert_eq!(ls.residual_sq, int(1));
    }
}
