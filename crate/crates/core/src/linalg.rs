//! Small dense complex linear algebra: solves, inverses, Hermitian spectra,
//! least squares, and determinants of expression matrices.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::exprlang::Expr;
use crate::fmath::ComplexMath;

pub type Matrix = Vec<Vec<Complex64>>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { ONE } else { ZERO }).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn mat_vec(a: &Matrix, x: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|row| row.iter().zip(x).map(|(r, v)| r * v).sum()).collect()
}

pub fn conj_transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].conj()).collect()).collect()
}

pub fn max_abs(a: &Matrix) -> f64 {
    a.iter().flatten().map(|c| c.modulus()).fold(0.0, f64::max)
}

/// Gaussian elimination with partial pivoting on `[a | b]` where `b` has
/// several right-hand sides. Returns `None` for an exactly singular pivot.
fn eliminate(mut a: Matrix, mut b: Matrix) -> Option<Matrix> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].modulus().total_cmp(&a[j][col].modulus()))?;
        if a[pivot][col] == ZERO {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].inv();
        for row in col + 1..n {
            let f = a[row][col] * inv;
            if f == ZERO {
                continue;
            }
            for k in col..n {
                let t = a[col][k];
                a[row][k] -= f * t;
            }
            for k in 0..b[row].len() {
                let t = b[col][k];
                b[row][k] -= f * t;
            }
        }
    }
    for col in (0..n).rev() {
        let inv = a[col][col].inv();
        for k in 0..b[col].len() {
            let mut acc = b[col][k];
            for j in col + 1..n {
                acc -= a[col][j] * b[j][k];
            }
            b[col][k] = acc * inv;
        }
    }
    Some(b)
}

pub fn solve(a: &Matrix, rhs: &[Complex64]) -> Option<Vec<Complex64>> {
    let b = rhs.iter().map(|c| vec![*c]).collect();
    eliminate(a.clone(), b).map(|x| x.into_iter().map(|r| r[0]).collect())
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    eliminate(a.clone(), identity(a.len()))
}

pub fn determinant(a: &Matrix) -> Complex64 {
    let n = a.len();
    let mut a = a.clone();
    let mut det = ONE;
    for col in 0..n {
        let Some(pivot) = (col..n).max_by(|&i, &j| a[i][col].modulus().total_cmp(&a[j][col].modulus()))
        else {
            return ONE;
        };
        if a[pivot][col] == ZERO {
            return ZERO;
        }
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= a[col][col];
        let inv = a[col][col].inv();
        for row in col + 1..n {
            let f = a[row][col] * inv;
            for k in col..n {
                let t = a[col][k];
                a[row][k] -= f * t;
            }
        }
    }
    det
}

/// Minimizes `‖a x − b‖` through the normal equations. Returns the solution
/// and the largest absolute residual entry.
pub fn least_squares(a: &Matrix, b: &[Complex64]) -> Option<(Vec<Complex64>, f64)> {
    let ah = conj_transpose(a);
    let normal = mat_mul(&ah, a);
    let rhs = mat_vec(&ah, b);
    let x = solve(&normal, &rhs)?;
    let fit = mat_vec(a, &x);
    let res = fit.iter().zip(b).map(|(f, y)| (f - y).modulus()).fold(0.0, f64::max);
    Some((x, res))
}

/// Largest entrywise deviation from Hermitian symmetry.
pub fn hermitian_defect(a: &Matrix) -> f64 {
    let n = a.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((a[i][j] - a[j][i].conj()).modulus());
        }
    }
    worst
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// ascending.
pub fn symmetric_eigenvalues(mut s: Vec<Vec<f64>>) -> Vec<f64> {
    let n = s.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| s[i][j] * s[i][j])
            .sum();
        let diag: f64 = (0..n).map(|i| s[i][i] * s[i][i]).sum();
        if off <= 1e-30 * (1.0 + diag) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if s[p][q] == 0.0 {
                    continue;
                }
                let theta = (s[q][q] - s[p][p]) / (2.0 * s[p][q]);
                let t = theta.signum() / (theta.abs() + crate::fmath::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / crate::fmath::sqrt(t * t + 1.0);
                let sn = t * c;
                for k in 0..n {
                    let (akp, akq) = (s[k][p], s[k][q]);
                    s[k][p] = c * akp - sn * akq;
                    s[k][q] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (s[p][k], s[q][k]);
                    s[p][k] = c * apk - sn * aqk;
                    s[q][k] = sn * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| s[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// `A + iB` is embedded as the real symmetric `[[A, −B], [B, A]]`, whose
/// spectrum is that of the Hermitian matrix with every eigenvalue doubled.
pub fn hermitian_eigenvalues(a: &Matrix) -> Vec<f64> {
    let n = a.len();
    let mut s = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            // symmetrize so rounding in the input cannot break the embedding
            let h = (a[i][j] + a[j][i].conj()) * 0.5;
            s[i][j] = h.re;
            s[n + i][n + j] = h.re;
            s[i][n + j] = -h.im;
            s[n + i][j] = h.im;
        }
    }
    symmetric_eigenvalues(s).into_iter().step_by(2).collect()
}

/// Spectral condition number of a Hermitian matrix.
pub fn hermitian_condition(eigenvalues: &[f64]) -> f64 {
    let max = eigenvalues.iter().map(|e| e.abs()).fold(0.0, f64::max);
    let min = eigenvalues.iter().map(|e| e.abs()).fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Determinant of an expression matrix by cofactor expansion.
pub fn expr_determinant(a: &[Vec<Expr>]) -> Expr {
    let n = a.len();
    match n {
        0 => Expr::one(),
        1 => a[0][0].clone(),
        _ => {
            let mut terms = Vec::with_capacity(n);
            for j in 0..n {
                if a[0][j].is_zero() {
                    continue;
                }
                let term = Expr::mul(a[0][j].clone(), expr_determinant(&minor(a, 0, j)));
                terms.push(if j % 2 == 0 { term } else { Expr::neg(term) });
            }
            Expr::sum(terms)
        }
    }
}

fn minor(a: &[Vec<Expr>], row: usize, col: usize) -> Vec<Vec<Expr>> {
    a.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, e)| e.clone()).collect())
        .collect()
}

/// `adj(a) / det(a)` as expressions.
pub fn expr_inverse(a: &[Vec<Expr>]) -> Vec<Vec<Expr>> {
    let n = a.len();
    let det = expr_determinant(a);
    if n == 1 {
        return vec![vec![Expr::div(Expr::one(), det)]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    // adj[i][j] = (−1)^{i+j} det(minor(j, i))
                    let c = expr_determinant(&minor(a, j, i));
                    let c = if (i + j) % 2 == 0 { c } else { Expr::neg(c) };
                    Expr::div(c, det.clone())
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::Point;
    use crate::exprlang::VarSlot;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &Matrix, b: &Matrix, tol: f64) -> bool {
        a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x - y).modulus() < tol)
    }

    #[test]
    fn inverse_round_trip() {
        let a = vec![vec![c(2.0, 0.0), c(1.0, 1.0)], vec![c(0.0, -1.0), c(3.0, 0.5)]];
        let inv = inverse(&a).unwrap();
        assert!(close(&mat_mul(&a, &inv), &identity(2), 1e-14));
        assert!((determinant(&a) - c(6.0 - 1.0, 1.0 + 1.0)).modulus() < 1e-14);
        assert!(inverse(&vec![vec![ZERO, ZERO], vec![ZERO, ZERO]]).is_none());
    }

    #[test]
    fn hermitian_spectrum() {
        // eigenvalues of [[2, i], [-i, 2]] are 1 and 3
        let a = vec![vec![c(2.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(2.0, 0.0)]];
        let ev = hermitian_eigenvalues(&a);
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
        let d = vec![vec![c(1.0, 0.0), ZERO], vec![ZERO, c(-2.0, 0.0)]];
        assert_eq!(hermitian_eigenvalues(&d)[0], -2.0);
        assert!((hermitian_condition(&ev) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn least_squares_recovers_consistent_system() {
        let a = vec![vec![c(1.0, 0.0), ZERO], vec![ZERO, c(1.0, 0.0)], vec![c(1.0, 0.0), c(1.0, 0.0)]];
        let (x, res) = least_squares(&a, &[c(1.0, 2.0), c(-1.0, 0.0), c(0.0, 2.0)]).unwrap();
        assert!(res < 1e-14);
        assert!((x[0] - c(1.0, 2.0)).modulus() < 1e-14);
    }

    #[test]
    fn symbolic_inverse_matches_numeric() {
        let z = Expr::var(VarSlot::z(1));
        let a = vec![
            vec![Expr::exp(z.clone()), z.clone()],
            vec![Expr::zero(), Expr::exp(z.clone())],
        ];
        let p = Point::new(vec![c(0.3, -0.2)], vec![]);
        let w = expr_inverse(&a);
        let num: Matrix =
            a.iter().map(|r| r.iter().map(|e| e.evaluate(&p).unwrap()).collect()).collect();
        let wn: Matrix =
            w.iter().map(|r| r.iter().map(|e| e.evaluate(&p).unwrap()).collect()).collect();
        assert!(close(&wn, &inverse(&num).unwrap(), 1e-14));
    }
}
