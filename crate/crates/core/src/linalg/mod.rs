//! Exact integer and rational linear algebra.

mod smith;

pub use smith::{smith_normal_form, SmithDecomposition};

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Integral;

fn require_square<T>(m: &Matrix<T>) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

/// Exact determinant by Bareiss fraction-free elimination.
///
/// # Panics
///
/// If `m` is not square.
pub fn determinant<T: Integral>(m: &Matrix<T>) -> T {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                return T::zero();
            };
            a.swap_rows(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                a[(i, j)] = num / prev.clone();
            }
        }
        prev = a[(k, k)].clone();
    }
    if n == 0 {
        return T::one();
    }
    sign * a[(n - 1, n - 1)].clone()
}

/// Exact inverse over the rationals, by Gauss–Jordan elimination.
pub fn inverse_rational<T: Integral>(m: &Matrix<T>) -> Result<Matrix<Ratio<T>>> {
    require_square(m)?;
    let n = m.rows();
    let mut a = m.map(|x| Ratio::from_integer(x.clone()));
    let mut inv = Matrix::<Ratio<T>>::identity(n);
    for k in 0..n {
        let r = (k..n)
            .find(|&r| !a[(r, k)].is_zero())
            .ok_or(Error::SingularMatrix)?;
        a.swap_rows(k, r);
        inv.swap_rows(k, r);
        let scale = a[(k, k)].recip();
        for j in 0..n {
            a[(k, j)] = a[(k, j)].clone() * scale.clone();
            inv[(k, j)] = inv[(k, j)].clone() * scale.clone();
        }
        for i in (0..n).filter(|&i| i != k) {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = -a[(i, k)].clone();
            a.add_row_multiple(i, k, &f);
            inv.add_row_multiple(i, k, &f);
        }
    }
    Ok(inv)
}

/// Counts of positive, negative and zero entries in a diagonalization of a
/// symmetric matrix (Sylvester's law of inertia).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

/// Inertia of a symmetric integer matrix by exact congruence
/// diagonalization over ℚ.
///
/// A nonzero diagonal entry is used as a pivot when one exists; otherwise a
/// hyperbolic block `[[0, b], [b, 0]]` (one positive, one negative direction)
/// is split off.
pub fn inertia<T: Integral>(m: &Matrix<T>) -> Result<Inertia> {
    require_square(m)?;
    if let Some((row, col)) = m.first_asymmetry() {
        return Err(Error::NotSymmetric { row, col });
    }
    let n = m.rows();
    let mut a = m.map(|x| Ratio::from_integer(x.clone()));
    let mut out = Inertia::default();
    let mut k = 0;
    while k < n {
        if let Some(p) = (k..n).find(|&i| !a[(i, i)].is_zero()) {
            a.swap_rows(k, p);
            a.swap_cols(k, p);
            let pivot = a[(k, k)].clone();
            if pivot > Ratio::zero() {
                out.positive += 1;
            } else {
                out.negative += 1;
            }
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = -(a[(i, k)].clone() / pivot.clone());
                a.add_row_multiple(i, k, &f);
                a.add_col_multiple(i, k, &f);
            }
            k += 1;
            continue;
        }

        // All remaining diagonal entries vanish.
        let off = (k..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[(i, j)].is_zero());
        let Some((i, j)) = off else {
            out.zero += n - k;
            break;
        };
        a.swap_rows(k, i);
        a.swap_cols(k, i);
        let j = if j == k { i } else { j };
        a.swap_rows(k + 1, j);
        a.swap_cols(k + 1, j);
        let b = a[(k, k + 1)].clone();
        for r in k + 2..n {
            let x = a[(r, k)].clone();
            let y = a[(r, k + 1)].clone();
            // (x, y)·[[0, b], [b, 0]]⁻¹ = (y/b, x/b)
            let fk = -(y / b.clone());
            let fk1 = -(x / b.clone());
            a.add_row_multiple(r, k, &fk);
            a.add_row_multiple(r, k + 1, &fk1);
            a.add_col_multiple(r, k, &fk);
            a.add_col_multiple(r, k + 1, &fk1);
        }
        out.positive += 1;
        out.negative += 1;
        k += 2;
    }
    Ok(out)
}

/// Signature of a nondegenerate symmetric integer matrix.
pub fn signature<T: Integral>(m: &Matrix<T>) -> Result<i64> {
    require_square(m)?;
    if let Some((row, col)) = m.first_asymmetry() {
        return Err(Error::NotSymmetric { row, col });
    }
    if determinant(m).is_zero() {
        return Err(Error::DegenerateForm);
    }
    Ok(inertia(m)?.signature())
}

/// Reduces a rational into `[0, 1)`.
pub fn fract_mod_one<T: Integral>(q: &Ratio<T>) -> Ratio<T> {
    q - Ratio::from_integer(q.floor().to_integer())
}

/// `true` when every entry of the rational matrix is an integer.
pub fn is_integral<T: Integral>(m: &Matrix<Ratio<T>>) -> bool {
    m.as_slice().iter().all(|q| q.denom().is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn mat(n: usize, rows: Vec<Vec<i64>>) -> Matrix<i64> {
        Matrix::from_rows(n, rows).unwrap()
    }

    fn l26() -> Matrix<i64> {
        mat(3, vec![vec![-3, 1, 1], vec![1, 3, 1], vec![1, 1, -1]])
    }

    /// Laplace expansion along the first row.
    fn cofactor_det(m: &Matrix<i64>) -> i64 {
        let n = m.rows();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let rest: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let rows: Vec<usize> = (1..n).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[(0, j)] * cofactor_det(&m.select(&rows, &rest))
            })
            .sum()
    }

    #[test]
    fn determinant_fixtures() {
        assert_eq!(determinant(&Matrix::<i64>::identity(4)), 1);
        assert_eq!(determinant(&mat(2, vec![vec![2, 0], vec![0, 3]])), 6);
        assert_eq!(cofactor_det(&l26()), 12);
        assert_eq!(determinant(&l26()), 12);
        assert_eq!(determinant(&Matrix::<i64>::zeros(0, 0)), 1);
        assert_eq!(determinant(&mat(2, vec![vec![0, 1], vec![1, 0]])), -1);
        assert_eq!(determinant(&mat(2, vec![vec![1, 2], vec![2, 4]])), 0);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = mat(
            4,
            vec![vec![0, 3, -2, 5], vec![1, 0, 4, -1], vec![7, -3, 0, 2], vec![2, 2, 2, 0]],
        );
        assert_eq!(determinant(&m), cofactor_det(&m));
    }

    #[test]
    fn inverse_of_two_six_fixture() {
        let inv = inverse_rational(&l26()).unwrap();
        let expected = mat(3, vec![vec![-2, 1, -1], vec![1, 1, 2], vec![-1, 2, -5]])
            .map(|&x| Ratio::new(x, 6));
        assert_eq!(inv, expected);
        let l = l26().map(|&x| Ratio::from_integer(x));
        assert_eq!(&l * &inv, Matrix::identity(3));
    }

    #[test]
    fn inverse_small_cases() {
        let inv = inverse_rational(&mat(2, vec![vec![2, 0], vec![0, 3]])).unwrap();
        assert_eq!(inv[(0, 0)], Ratio::new(1, 2));
        assert_eq!(inv[(1, 1)], Ratio::new(1, 3));
        assert_eq!(inverse_rational(&Matrix::<i64>::identity(2)).unwrap(), Matrix::identity(2));
        assert_eq!(
            inverse_rational(&mat(2, vec![vec![1, 2], vec![2, 4]])),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn signature_fixtures() {
        assert_eq!(signature(&Matrix::<i64>::identity(3)), Ok(3));
        assert_eq!(signature(&mat(2, vec![vec![2, 0], vec![0, -3]])), Ok(0));
        assert_eq!(signature(&l26()), Ok(-1));
        assert_eq!(signature(&Matrix::<i64>::zeros(0, 0)), Ok(0));
    }

    #[test]
    fn signature_handles_zero_diagonal() {
        let h = mat(2, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(signature(&h), Ok(0));
        let m = mat(3, vec![vec![0, 2, 1], vec![2, 0, 3], vec![1, 3, 0]]);
        let i = inertia(&m).unwrap();
        assert_eq!(i.positive + i.negative, 3);
        // trace 0, det = 12 > 0: eigenvalues (+, -, -)
        assert_eq!(signature(&m), Ok(-1));
    }

    #[test]
    fn signature_errors() {
        assert_eq!(
            signature(&mat(2, vec![vec![1, 2], vec![3, 4]])),
            Err(Error::NotSymmetric { row: 0, col: 1 })
        );
        assert_eq!(signature(&mat(2, vec![vec![1, 2], vec![2, 4]])), Err(Error::DegenerateForm));
        let deg = inertia(&mat(2, vec![vec![1, 2], vec![2, 4]])).unwrap();
        assert_eq!(deg, Inertia { positive: 1, negative: 0, zero: 1 });
    }

    #[test]
    fn bigint_path() {
        let l = l26().map(|&x| BigInt::from(x));
        assert_eq!(determinant(&l), BigInt::from(12));
        assert_eq!(signature(&l), Ok(-1));
    }

    #[test]
    fn fract_mod_one_range() {
        assert_eq!(fract_mod_one(&Ratio::new(-1i64, 2)), Ratio::new(1, 2));
        assert_eq!(fract_mod_one(&Ratio::new(7i64, 3)), Ratio::new(1, 3));
        assert_eq!(fract_mod_one(&Ratio::from_integer(-4i64)), Ratio::zero());
    }
}
