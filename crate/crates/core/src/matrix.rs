//! Dense square matrices and the exact determinant kernels.
//!
//! * [`bareiss_det`] – fraction-free elimination over ℤ, O(n³) ring ops.
//! * [`berkowitz_det`] – division-free, works over any commutative ring
//!   (truncated power series, cyclotomic integers, residues).
//! * [`poly_matrix_det`] – determinant of a matrix of integer polynomials by
//!   evaluation at `0..=d` and exact Newton interpolation.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::ring::Ring;

#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    n: usize,
    data: Vec<R>,
}

pub type IntMatrix = Matrix<BigInt>;

impl<R: Clone> Matrix<R> {
    pub fn filled(n: usize, value: R) -> Self {
        Matrix {
            n,
            data: vec![value; n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix must be square");
            data.extend(row);
        }
        Matrix { n, data }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> impl Iterator<Item = &[R]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn map<S: Clone>(&self, f: impl FnMut(&R) -> S) -> Matrix<S> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.n, |i, j| self[(j, i)].clone())
    }

    /// Drops row `r` and column `c`.
    pub fn minor(&self, r: usize, c: usize) -> Self {
        let mut data = Vec::with_capacity((self.n - 1) * (self.n - 1));
        for i in (0..self.n).filter(|&i| i != r) {
            for j in (0..self.n).filter(|&j| j != c) {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix {
            n: self.n - 1,
            data,
        }
    }
}

impl<R> Index<(usize, usize)> for Matrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.n + j]
    }
}

impl<R> IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[i * self.n + j]
    }
}

impl<R: fmt::Debug + Clone> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }
}

/// Determinant over ℤ by Bareiss fraction-free elimination with row pivoting.
pub fn bareiss_det(m: &IntMatrix) -> BigInt {
    let n = m.dim();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.rows().map(|r| r.to_vec()).collect();
    let mut sign_flip = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign_flip = !sign_flip;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let factor = core::mem::take(&mut row[k]);
            for j in k + 1..n {
                let mut v = &row[j] * pivot;
                if !factor.is_zero() && !pivot_row[j].is_zero() {
                    v -= &factor * &pivot_row[j];
                }
                row[j] = if prev.is_one() {
                    v
                } else {
                    let (q, r) = v.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    q
                };
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Coefficients of `det(xI − M)` in descending powers of `x`, computed with
/// Berkowitz's division-free recursion. Needs `one` for the empty matrix case.
pub fn berkowitz_charpoly<R: Ring>(m: &Matrix<R>, one: &R) -> Vec<R> {
    let n = m.dim();
    let zero = one.zero_like();
    let mut vect = vec![one.clone()];
    for r in 0..n {
        // Leading r×r block M, column C = m[0..r][r], row R = m[r][0..r].
        let mut t = Vec::with_capacity(r + 2);
        t.push(one.clone());
        t.push(m[(r, r)].negated());
        let mut v: Vec<R> = (0..r).map(|i| m[(i, r)].clone()).collect();
        for k in 0..r {
            let mut rv = zero.clone();
            for (j, vj) in v.iter().enumerate() {
                rv.add_product(&m[(r, j)], vj);
            }
            t.push(rv.negated());
            if k + 1 < r {
                let mut next = vec![zero.clone(); r];
                for (i, slot) in next.iter_mut().enumerate() {
                    for (j, vj) in v.iter().enumerate() {
                        slot.add_product(&m[(i, j)], vj);
                    }
                }
                v = next;
            }
        }
        let mut next = vec![zero.clone(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in vect.iter().enumerate().take(i + 1) {
                slot.add_product(&t[i - j], vj);
            }
        }
        vect = next;
    }
    vect
}

/// Division-free determinant over an arbitrary commutative ring.
pub fn berkowitz_det<R: Ring>(m: &Matrix<R>, one: &R) -> R {
    let n = m.dim();
    let cp = berkowitz_charpoly(m, one);
    let c = cp[n].clone();
    if n % 2 == 1 {
        c.negated()
    } else {
        c
    }
}

/// Determinant of a matrix whose entries are integer polynomials (coefficient
/// vectors, low degree first). `degree_bound` must bound the degree of the
/// determinant. Evaluates at `0..=degree_bound` with [`bareiss_det`] and
/// recovers the coefficients via forward differences, all in ℤ.
pub fn poly_matrix_det(m: &Matrix<Vec<BigInt>>, degree_bound: usize) -> Vec<BigInt> {
    let n = m.dim();
    let values: Vec<BigInt> = (0..=degree_bound)
        .map(|x| {
            let x = BigInt::from(x);
            let evaluated = Matrix::from_fn(n, |i, j| horner(&m[(i, j)], &x));
            bareiss_det(&evaluated)
        })
        .collect();
    interpolate_integer(&values)
}

fn horner(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Recovers an integer polynomial from its values at `0, 1, …, d`.
///
/// Uses the Newton form `Σ Δᵏf(0)·C(x,k)`; for integer-coefficient
/// polynomials `k!` divides `Δᵏf(0)`, so every step stays in ℤ.
pub fn interpolate_integer(values: &[BigInt]) -> Vec<BigInt> {
    let d = values.len();
    let mut diffs = values.to_vec();
    let mut newton = Vec::with_capacity(d);
    for k in 0..d {
        newton.push(diffs[0].clone());
        for i in 0..d - k - 1 {
            diffs[i] = &diffs[i + 1] - &diffs[i];
        }
    }
    // Σ (Δᵏ/k!) · x(x−1)…(x−k+1)
    let mut result = vec![BigInt::zero(); d.max(1)];
    let mut falling = vec![BigInt::one()];
    let mut factorial = BigInt::one();
    for (k, dk) in newton.iter().enumerate() {
        if k > 0 {
            factorial *= k;
            let shift = BigInt::from(k as i64 - 1);
            let mut next = vec![BigInt::zero(); falling.len() + 1];
            for (i, c) in falling.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * &shift;
            }
            falling = next;
        }
        let (scale, rem) = dk.div_rem(&factorial);
        assert!(
            rem.is_zero(),
            "values do not come from an integer polynomial"
        );
        for (i, c) in falling.iter().enumerate() {
            result[i] += c * &scale;
        }
    }
    while result.len() > 1 && result.last().is_some_and(|c| c.is_zero()) {
        result.pop();
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ModInt;

    fn cofactor_det(m: &IntMatrix) -> BigInt {
        let n = m.dim();
        if n == 0 {
            return BigInt::one();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            let term = &m[(0, j)] * cofactor_det(&m.minor(0, j));
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn bareiss_small_cases() {
        assert_eq!(bareiss_det(&IntMatrix::from_i64(&[])), BigInt::one());
        assert_eq!(bareiss_det(&IntMatrix::from_i64(&[&[7]])), BigInt::from(7));
        let m = IntMatrix::from_i64(&[&[0, 2, 1], &[3, 0, 4], &[1, 1, 0]]);
        assert_eq!(bareiss_det(&m), cofactor_det(&m));
        let singular = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(bareiss_det(&singular), BigInt::zero());
    }

    #[test]
    fn bareiss_matches_cofactor_on_pseudorandom_matrices() {
        let mut seed: u64 = 0x9e3779b97f4a7c15;
        for n in 1..=6 {
            for _ in 0..20 {
                let m = Matrix::from_fn(n, |_, _| {
                    seed ^= seed << 13;
                    seed ^= seed >> 7;
                    seed ^= seed << 17;
                    BigInt::from((seed % 7) as i64 - 3)
                });
                assert_eq!(bareiss_det(&m), cofactor_det(&m));
                assert_eq!(berkowitz_det(&m, &BigInt::one()), cofactor_det(&m));
            }
        }
    }

    #[test]
    fn berkowitz_charpoly_of_companion() {
        // x^2 - 3x + 2
        let m = IntMatrix::from_i64(&[&[1, 0], &[0, 2]]);
        let cp = berkowitz_charpoly(&m, &BigInt::one());
        assert_eq!(cp, [1, -3, 2].map(BigInt::from).to_vec());
    }

    #[test]
    fn berkowitz_over_residues() {
        let m = Matrix::from_fn(2, |i, j| ModInt::new([[4, 5], [6, 7]][i][j], 9));
        let det = berkowitz_det(&m, &ModInt::new(1, 9));
        assert_eq!(det, ModInt::new(28 - 30, 9));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let poly = [5i64, -6, 1, 0, 3];
        let values: Vec<BigInt> = (0..=6)
            .map(|x: i64| BigInt::from(poly.iter().rev().fold(0, |a, &c| a * x + c)))
            .collect();
        assert_eq!(
            interpolate_integer(&values),
            poly.map(BigInt::from).to_vec()
        );
    }

    #[test]
    fn polynomial_matrix_determinant() {
        // det [[1-u, u], [u, 1+u]] = 1 - u^2 - u^2 = 1 - 2u^2
        let p = |c: &[i64]| c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let m = Matrix::from_rows(vec![
            vec![p(&[1, -1]), p(&[0, 1])],
            vec![p(&[0, 1]), p(&[1, 1])],
        ]);
        assert_eq!(poly_matrix_det(&m, 2), p(&[1, 0, -2]));
    }
}
