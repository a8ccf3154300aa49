//! Exact dense linear algebra for the tiny square systems that base
//! decomposition needs.

#![allow(clippy::needless_range_loop)]

use crate::space::Vector;
use crate::{Int, Rat};
use num_traits::{Signed, Zero};

/// Flatten a vector into the fixed coordinate order (ε.., δ.., δ-null).
fn coords(v: &Vector) -> Vec<Int> {
    let mut out = Vec::with_capacity(v.eps.len() + v.del.len() + 1);
    out.extend(v.eps.iter().cloned());
    out.extend(v.del.iter().cloned());
    out.push(v.delta.clone());
    out
}

/// Solve Σ c_j · cols[j] = target exactly; `None` when the columns are
/// linearly dependent. The column count must equal the coordinate dimension.
pub fn solve_columns(cols: &[Vector], target: &Vector) -> Option<Vec<Rat>> {
    let d = cols.len();
    debug_assert!(cols.iter().all(|c| c.dims() == target.dims()));
    debug_assert_eq!(d, target.eps.len() + target.del.len() + 1);

    // Augmented matrix rows: one per coordinate.
    let col_coords: Vec<Vec<Int>> = cols.iter().map(coords).collect();
    let rhs = coords(target);
    let mut a: Vec<Vec<Rat>> = (0..d)
        .map(|r| {
            let mut row: Vec<Rat> = (0..d)
                .map(|c| Rat::from_integer(col_coords[c][r].clone()))
                .collect();
            row.push(Rat::from_integer(rhs[r].clone()));
            row
        })
        .collect();

    // Gaussian elimination with exact pivoting (any nonzero pivot works).
    for col in 0..d {
        let pivot = (col..d).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].clone();
        for r in col + 1..d {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &inv;
            for c in col..=d {
                let sub = &factor * &a[col][c];
                a[r][c] = &a[r][c] - &sub;
            }
        }
    }
    // Back substitution.
    let mut x = vec![Rat::zero(); d];
    for r in (0..d).rev() {
        let mut acc = a[r][d].clone();
        for c in r + 1..d {
            acc -= &a[r][c] * &x[c];
        }
        x[r] = acc / &a[r][r];
    }
    Some(x)
}

/// Fraction-free determinant (Bareiss) over i128; `None` on overflow.
fn bareiss_det(mut a: Vec<Vec<i128>>) -> Option<i128> {
    let d = a.len();
    if d == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..d {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..d).find(|&r| a[r][k] != 0) else {
                return Some(0);
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..d {
            for j in k + 1..d {
                a[i][j] = (a[i][j].checked_mul(a[k][k])? - a[i][k].checked_mul(a[k][j])?) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Some(sign * a[d - 1][d - 1])
}

fn int_matrix(cols: &[Vector]) -> Option<Vec<Vec<i128>>> {
    let d = cols.len();
    let mut a = vec![vec![0i128; d]; d];
    for (c, v) in cols.iter().enumerate() {
        for (r, x) in coords(v).iter().enumerate() {
            a[r][c] = i128::try_from(x).ok()?;
        }
    }
    Some(a)
}

/// Fast independence pre-filter; `None` when a coordinate does not fit i128.
pub fn det_nonzero_fast(cols: &[Vector]) -> Option<bool> {
    bareiss_det(int_matrix(cols)?).map(|det| det != 0)
}

/// Exact integer decomposition engine for one fixed base: coefficients of v
/// are adj·v / det. Built once, then each window root costs one
/// matrix-vector product.
pub struct IntDecomposer {
    adj: Vec<Vec<i128>>,
    det: i128,
    d: usize,
}

impl IntDecomposer {
    /// `None` when the columns are singular or do not fit i128.
    pub fn try_new(cols: &[Vector]) -> Option<IntDecomposer> {
        let d = cols.len();
        let a = int_matrix(cols)?;
        let det = bareiss_det(a.clone())?;
        if det == 0 {
            return None;
        }
        // adj[i][j] = (−1)^{i+j}·minor(j,i).
        let mut adj = vec![vec![0i128; d]; d];
        for i in 0..d {
            for j in 0..d {
                let minor: Vec<Vec<i128>> = (0..d)
                    .filter(|&r| r != j)
                    .map(|r| (0..d).filter(|&c| c != i).map(|c| a[r][c]).collect())
                    .collect();
                let m = bareiss_det(minor)?;
                adj[i][j] = if (i + j) % 2 == 0 { m } else { -m };
            }
        }
        Some(IntDecomposer { adj, det, d })
    }

    /// Numerators of the coefficients over the common denominator `det`.
    pub fn numerators(&self, v: &Vector) -> Option<Vec<i128>> {
        let x = coords(v);
        let mut out = vec![0i128; self.d];
        for (i, row) in self.adj.iter().enumerate() {
            let mut acc = 0i128;
            for (a, c) in row.iter().zip(&x) {
                acc = acc.checked_add(a.checked_mul(i128::try_from(c).ok()?)?)?;
            }
            out[i] = acc;
        }
        Some(out)
    }

    pub fn det(&self) -> i128 {
        self.det
    }
}

/// True iff the square column set is linearly independent. The elimination
/// in `solve_columns` fails to find a pivot exactly when the matrix is
/// singular, so solvability against any fixed target decides independence.
pub fn independent(cols: &[Vector]) -> bool {
    if let Some(ans) = det_nonzero_fast(cols) {
        return ans;
    }
    let (m, n) = cols[0].dims();
    solve_columns(cols, &Vector::zero(m, n)).is_some()
}

/// Is every entry an integer?
pub fn all_integral(xs: &[Rat]) -> bool {
    xs.iter().all(|x| x.is_integer())
}

/// Uniform-sign classification of a rational coefficient vector.
pub fn sign_pattern(xs: &[Rat]) -> (bool, bool, bool) {
    let any_pos = xs.iter().any(|x| x.is_positive());
    let any_neg = xs.iter().any(|x| x.is_negative());
    (any_pos, any_neg, xs.iter().all(Zero::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Vector;

    fn v(text: &str, m: usize, n: usize) -> Vector {
        Vector::parse(text, m, n).unwrap()
    }

    #[test]
    fn solves_small_system() {
        // Columns δ−δ₁−ε₁, δ₁−ε₁, ε₁ against δ: coefficients (1,1,2).
        let cols = vec![v("-e1-d1+D", 1, 1), v("-e1+d1", 1, 1), v("e1", 1, 1)];
        let x = solve_columns(&cols, &v("D", 1, 1)).unwrap();
        let expect: Vec<Rat> = [1, 1, 2].iter().map(|&k| Rat::from_integer(Int::from(k))).collect();
        assert_eq!(x, expect);
    }

    #[test]
    fn detects_dependence() {
        let cols = vec![v("e1", 1, 1), v("2e1", 1, 1), v("D", 1, 1)];
        assert!(solve_columns(&cols, &v("d1", 1, 1)).is_none());
        assert!(!independent(&cols));
        assert_eq!(det_nonzero_fast(&cols), Some(false));
        let good = vec![v("e1", 1, 1), v("d1-e1", 1, 1), v("D-d1", 1, 1)];
        assert!(independent(&good));
        assert_eq!(det_nonzero_fast(&good), Some(true));
    }

    #[test]
    fn solution_recomposes() {
        let cols = vec![v("-2d1", 1, 2), v("d1-e1", 1, 2), v("e1-d2", 1, 2), v("e1+d2+D", 1, 2)];
        let target = v("-2d2+2D", 1, 2);
        let x = solve_columns(&cols, &target).unwrap();
        // Recompose exactly.
        let mut acc = vec![Rat::zero(); 4];
        for (i, c) in x.iter().enumerate() {
            acc[i] = c.clone();
        }
        let mut sum = Vector::zero(1, 2);
        for (c, col) in acc.iter().zip(&cols) {
            assert!(c.is_integer());
            let k = i64::try_from(c.to_integer()).unwrap();
            sum = &sum + &col.scaled(k);
        }
        assert_eq!(sum, target);
    }
}
