//! Dense linear algebra for the small matrices of this crate (order <= 8).
//!
//! Hand-rolled LU and Cholesky so that the element type can be a (nested)
//! dual number; pivot selection and positivity checks look only at the primal
//! value part. Storage is `ndarray`.

use ndarray::Array2;
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is singular (zero pivot at column {0})")]
    Singular(usize),
    #[error("matrix is not positive definite (pivot {0})")]
    NotPositiveDefinite(usize),
    #[error("dimension mismatch: {0}")]
    Shape(&'static str),
}

/// LU factorization with partial pivoting, stored packed in `lu`;
/// `perm[i]` is the source row of factored row i, `sign` the permutation sign.
struct Lu<S> {
    lu: Array2<S>,
    perm: Vec<usize>,
    sign: f64,
}

fn factor<S: Scalar>(a: &Array2<S>) -> Result<Lu<S>, LinalgError> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(LinalgError::Shape("factor requires a square matrix"));
    }
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = lu[(col, col)].abs_value();
        for row in col + 1..n {
            let mag = lu[(row, col)].abs_value();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag == 0.0 {
            return Err(LinalgError::Singular(col));
        }
        if pivot_row != col {
            for k in 0..n {
                let tmp = lu[(col, k)];
                lu[(col, k)] = lu[(pivot_row, k)];
                lu[(pivot_row, k)] = tmp;
            }
            perm.swap(col, pivot_row);
            sign = -sign;
        }
        let pivot = lu[(col, col)];
        for row in col + 1..n {
            let factor = lu[(row, col)] / pivot;
            lu[(row, col)] = factor;
            for k in col + 1..n {
                let sub = factor * lu[(col, k)];
                lu[(row, k)] -= sub;
            }
        }
    }
    Ok(Lu { lu, perm, sign })
}

impl<S: Scalar> Lu<S> {
    fn solve_vec(&self, b: &[S]) -> Vec<S> {
        let n = self.perm.len();
        let mut x: Vec<S> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            for k in 0..i {
                let sub = self.lu[(i, k)] * x[k];
                x[i] -= sub;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let sub = self.lu[(i, k)] * x[k];
                x[i] -= sub;
            }
            x[i] = x[i] / self.lu[(i, i)];
        }
        x
    }
}

/// Solve `a x = b` for a single right-hand side.
pub fn solve<S: Scalar>(a: &Array2<S>, b: &[S]) -> Result<Vec<S>, LinalgError> {
    if b.len() != a.nrows() {
        return Err(LinalgError::Shape("rhs length must match matrix order"));
    }
    Ok(factor(a)?.solve_vec(b))
}

/// Matrix inverse via LU.
pub fn inverse<S: Scalar>(a: &Array2<S>) -> Result<Array2<S>, LinalgError> {
    let n = a.nrows();
    let lu = factor(a)?;
    let mut inv = Array2::from_elem((n, n), S::zero());
    let mut e = vec![S::zero(); n];
    for col in 0..n {
        e[col] = S::one();
        let x = lu.solve_vec(&e);
        for row in 0..n {
            inv[(row, col)] = x[row];
        }
        e[col] = S::zero();
    }
    Ok(inv)
}

pub fn determinant<S: Scalar>(a: &Array2<S>) -> Result<S, LinalgError> {
    let n = a.nrows();
    let lu = match factor(a) {
        Ok(lu) => lu,
        Err(LinalgError::Singular(_)) => return Ok(S::zero()),
        Err(e) => return Err(e),
    };
    let mut det = S::from_f64(lu.sign);
    for i in 0..n {
        det *= lu.lu[(i, i)];
    }
    Ok(det)
}

/// Cholesky factor `L` (lower triangular, `a = L L^T`).
///
/// Positivity is judged on the primal value part, so this doubles as the
/// positive-definiteness check used by the metric invariants.
pub fn cholesky<S: Scalar>(a: &Array2<S>) -> Result<Array2<S>, LinalgError> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(LinalgError::Shape("cholesky requires a square matrix"));
    }
    let mut l = Array2::from_elem((n, n), S::zero());
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[(i, j)];
            for k in 0..j {
                let sub = l[(i, k)] * l[(j, k)];
                sum -= sub;
            }
            if i == j {
                if sum.value() <= 0.0 {
                    return Err(LinalgError::NotPositiveDefinite(i));
                }
                l[(i, j)] = sum.sqrt();
            } else {
                l[(i, j)] = sum / l[(j, j)];
            }
        }
    }
    Ok(l)
}

pub fn matvec<S: Scalar>(a: &Array2<S>, v: &[S]) -> Vec<S> {
    let (rows, cols) = (a.nrows(), a.ncols());
    debug_assert_eq!(cols, v.len());
    let mut out = vec![S::zero(); rows];
    for i in 0..rows {
        for j in 0..cols {
            let add = a[(i, j)] * v[j];
            out[i] += add;
        }
    }
    out
}

pub fn matmul<S: Scalar>(a: &Array2<S>, b: &Array2<S>) -> Array2<S> {
    let (n, m, p) = (a.nrows(), a.ncols(), b.ncols());
    debug_assert_eq!(m, b.nrows());
    let mut out = Array2::from_elem((n, p), S::zero());
    for i in 0..n {
        for k in 0..m {
            let aik = a[(i, k)];
            for j in 0..p {
                let add = aik * b[(k, j)];
                out[(i, j)] += add;
            }
        }
    }
    out
}

/// Largest |entry value| of a matrix; handy for residual norms.
pub fn max_abs<S: Scalar>(a: &Array2<S>) -> f64 {
    a.iter().map(|v| v.abs_value()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Dual;
    use approx::assert_relative_eq;
    use ndarray::array;
    use proptest::prelude::*;

    #[test]
    fn inverse_of_known_matrix() {
        let a = array![[4.0, 7.0], [2.0, 6.0]];
        let inv = inverse(&a).unwrap();
        assert_relative_eq!(inv[(0, 0)], 0.6, epsilon = 1e-14);
        assert_relative_eq!(inv[(0, 1)], -0.7, epsilon = 1e-14);
        assert_relative_eq!(inv[(1, 0)], -0.2, epsilon = 1e-14);
        assert_relative_eq!(inv[(1, 1)], 0.4, epsilon = 1e-14);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = array![[1.0, 2.0], [2.0, 4.0]];
        assert!(matches!(inverse(&a), Err(LinalgError::Singular(_))));
        assert_relative_eq!(determinant(&a).unwrap(), 0.0);
    }

    #[test]
    fn cholesky_reconstructs_spd_matrix() {
        let a = array![[4.0, 2.0, 0.4], [2.0, 5.0, 1.0], [0.4, 1.0, 3.0]];
        let l = cholesky(&a).unwrap();
        let lt = l.t().to_owned();
        let back = matmul(&l, &lt);
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(back[(i, j)], a[(i, j)], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = array![[1.0, 2.0], [2.0, 1.0]];
        assert!(matches!(
            cholesky(&a),
            Err(LinalgError::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn determinant_tracks_permutations() {
        let a = array![[0.0, 1.0], [1.0, 0.0]];
        assert_relative_eq!(determinant(&a).unwrap(), -1.0, epsilon = 1e-14);
    }

    #[test]
    fn dual_valued_inverse_differentiates() {
        // A(t) = [[1 + t, 0], [0, 2]]; d/dt A^{-1}(0) = [[-1, 0], [0, 0]]
        let d = |re: f64, eps: f64| Dual::seeded(re, eps);
        let a = array![
            [d(1.0, 1.0), d(0.0, 0.0)],
            [d(0.0, 0.0), d(2.0, 0.0)]
        ];
        let inv = inverse(&a).unwrap();
        assert_relative_eq!(inv[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert_relative_eq!(inv[(0, 0)].eps, -1.0, epsilon = 1e-14);
        assert_relative_eq!(inv[(1, 1)].eps, 0.0, epsilon = 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn solve_roundtrips_spd_systems(
            m00 in 0.5f64..3.0, m01 in -0.9f64..0.9, m11 in 0.5f64..3.0,
            b0 in -2.0f64..2.0, b1 in -2.0f64..2.0,
        ) {
            // B^T B + I is SPD for any B.
            let b = array![[m00, m01], [m01, m11]];
            let mut a = matmul(&b.t().to_owned(), &b);
            a[(0, 0)] += 1.0;
            a[(1, 1)] += 1.0;
            let rhs = [b0, b1];
            let x = solve(&a, &rhs).unwrap();
            let back = matvec(&a, &x);
            prop_assert!((back[0] - b0).abs() < 1e-10);
            prop_assert!((back[1] - b1).abs() < 1e-10);
        }
    }
}
