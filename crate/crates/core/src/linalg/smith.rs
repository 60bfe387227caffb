//! Smith normal form with unimodular transformation matrices.

use crate::matrix::Matrix;
use crate::scalar::Integral;

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, `dᵢ ≥ 0`,
/// `dᵢ | dᵢ₊₁`, zeros only in trailing positions.
///
/// `v_inv` is the exact inverse of `v`; its rows express the new
/// generators of the cokernel in terms of the original ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition<T> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
    pub v_inv: Matrix<T>,
}

impl<T: Integral> SmithDecomposition<T> {
    /// The diagonal entries `d₁, …, d_min(rows, cols)`.
    pub fn invariant_factors(&self) -> Vec<T> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smallest nonzero `|entry|` in the trailing block `[t.., t..]`, ties broken
/// by row-major order.
fn find_pivot<T: Integral>(a: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), T)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a[(i, j)].abs();
            if v.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                best = Some(((i, j), v));
            }
        }
    }
    best.map(|(idx, _)| idx)
}

/// Computes the Smith normal form of `m` together with the transformation
/// matrices. Works for any shape; the output is deterministic.
pub fn smith_normal_form<T: Integral>(m: &Matrix<T>) -> SmithDecomposition<T> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = Matrix::<T>::identity(rows);
    let mut v = Matrix::<T>::identity(cols);
    let mut v_inv = Matrix::<T>::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = find_pivot(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        loop {
            let pivot = a[(t, t)].clone();
            let mut reduced = true;

            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -nearest_quotient(&a[(i, t)], &pivot);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                reduced &= a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -nearest_quotient(&a[(t, j)], &pivot);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                // V ← V·E with E = I + q·e_t e_jᵀ, so V⁻¹ ← E⁻¹·V⁻¹.
                v_inv.add_row_multiple(t, j, &-q);
                reduced &= a[(t, j)].is_zero();
            }

            if reduced {
                // Pivot row and column are clear; enforce divisibility of the rest.
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[(i, j)].is_multiple_of(&pivot));
                match bad {
                    None => break,
                    Some((i, _)) => {
                        a.add_row_multiple(t, i, &T::one());
                        u.add_row_multiple(t, i, &T::one());
                        continue;
                    }
                }
            }

            // A nonzero remainder is now strictly smaller than the pivot.
            let (pi, pj) = find_pivot_in_cross(&a, t);
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);
        }

        if a[(t, t)].is_negative() {
            let minus_one = -T::one();
            scale_row(&mut a, t, &minus_one);
            scale_row(&mut u, t, &minus_one);
        }
    }

    SmithDecomposition { u, d: a, v, v_inv }
}

/// Smallest nonzero `|entry|` in row `t` and column `t` of the trailing block.
fn find_pivot_in_cross<T: Integral>(a: &Matrix<T>, t: usize) -> (usize, usize) {
    let candidates = (t..a.rows())
        .map(|i| (i, t))
        .chain((t + 1..a.cols()).map(|j| (t, j)));
    let mut best: Option<((usize, usize), T)> = None;
    for (i, j) in candidates {
        let v = a[(i, j)].abs();
        if !v.is_zero() && best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some(((i, j), v));
        }
    }
    best.expect("pivot cross holds a nonzero entry").0
}

/// Quotient `q` with `|a − q·b| ≤ |b|/2`.
fn nearest_quotient<T: Integral>(a: &T, b: &T) -> T {
    let q = a.div_floor(b);
    let r = a.clone() - q.clone() * b.clone();
    if (r.clone() + r.clone()).abs() <= b.abs() {
        q
    } else if r.signum() == b.signum() {
        q + T::one()
    } else {
        q - T::one()
    }
}

fn scale_row<T: Integral>(a: &mut Matrix<T>, i: usize, factor: &T) {
    for j in 0..a.cols() {
        a[(i, j)] = a[(i, j)].clone() * factor.clone();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::determinant;
    use num_bigint::BigInt;

    fn mat(n: usize, rows: Vec<Vec<i64>>) -> Matrix<i64> {
        Matrix::from_rows(n, rows).unwrap()
    }

    fn check(m: &Matrix<i64>) -> SmithDecomposition<i64> {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert_eq!(&s.v * &s.v_inv, Matrix::identity(m.cols()));
        assert_eq!(determinant(&s.u).abs(), 1);
        assert_eq!(determinant(&s.v).abs(), 1);
        assert!(s.d.is_diagonal());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[0] >= 0 && w[1] >= 0);
            if w[0] == 0 {
                assert_eq!(w[1], 0, "zeros must trail");
            } else {
                assert_eq!(w[1] % w[0], 0, "divisibility chain");
            }
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&Matrix::identity(3));
        assert_eq!(s.d, Matrix::identity(3));
        assert_eq!(s.u, Matrix::identity(3));
        assert_eq!(s.v, Matrix::identity(3));
    }

    #[test]
    fn coprime_diagonal_merges() {
        let s = check(&mat(2, vec![vec![2, 0], vec![0, 3]]));
        assert_eq!(s.invariant_factors(), vec![1, 6]);
    }

    #[test]
    fn two_six_fixture() {
        let l = mat(3, vec![vec![-3, 1, 1], vec![1, 3, 1], vec![1, 1, -1]]);
        let s = check(&l);
        assert_eq!(s.invariant_factors(), vec![1, 2, 6]);
    }

    #[test]
    fn zero_and_singular_inputs() {
        let s = check(&Matrix::zeros(2, 2));
        assert_eq!(s.invariant_factors(), vec![0, 0]);
        let s = check(&mat(2, vec![vec![2, 4], vec![1, 2]]));
        assert_eq!(s.invariant_factors(), vec![1, 0]);
        assert_eq!(s.rank(), 1);
        let s = check(&Matrix::zeros(0, 0));
        assert!(s.invariant_factors().is_empty());
    }

    #[test]
    fn negative_entries_normalize() {
        let s = check(&mat(2, vec![vec![-4, 0], vec![0, -6]]));
        assert_eq!(s.invariant_factors(), vec![2, 12]);
    }

    #[test]
    fn rectangular_input() {
        let s = check(&mat(3, vec![vec![2, 4, 4], vec![-6, 6, 12]]));
        assert_eq!(s.invariant_factors(), vec![2, 6]);
    }

    #[test]
    fn bigint_agrees_with_i64() {
        let l = mat(3, vec![vec![4, 6, 2], vec![6, 9, 3], vec![2, 3, 7]]);
        let big = l.map(|&x| BigInt::from(x));
        let a = smith_normal_form(&l);
        let b = smith_normal_form(&big);
        assert_eq!(a.d.map(|&x| BigInt::from(x)), b.d);
        assert_eq!(a.u.map(|&x| BigInt::from(x)), b.u);
    }
}
