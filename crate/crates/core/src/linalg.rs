//! Dense linear algebra over a [`Scalar`] backend. Matrices are row-major
//! `Vec<Vec<S>>`; sizes here never exceed a handful of rows, so clarity
//! wins over blocking or in-place tricks.

use crate::scalar::{max_abs, Scalar};

pub type Matrix<S> = Vec<Vec<S>>;

pub fn identity<S: Scalar>(n: usize) -> Matrix<S> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect()
}

pub fn dot<S: Scalar>(u: &[S], v: &[S]) -> S {
    u.iter()
        .zip(v)
        .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

pub fn scale_vec<S: Scalar>(v: &[S], s: &S) -> Vec<S> {
    v.iter().map(|x| x.clone() * s.clone()).collect()
}

pub fn add_vec<S: Scalar>(u: &[S], v: &[S]) -> Vec<S> {
    u.iter().zip(v).map(|(a, b)| a.clone() + b.clone()).collect()
}

pub fn sub_vec<S: Scalar>(u: &[S], v: &[S]) -> Vec<S> {
    u.iter().zip(v).map(|(a, b)| a.clone() - b.clone()).collect()
}

pub fn mat_vec<S: Scalar>(m: &Matrix<S>, v: &[S]) -> Vec<S> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(S::zero(), |acc, (x, brow)| acc + x.clone() * brow[j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn transpose<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Matrix whose columns are the given vectors.
pub fn from_columns<S: Scalar>(cols: &[Vec<S>]) -> Matrix<S> {
    transpose(&cols.to_vec())
}

fn matrix_scale<S: Scalar>(m: &Matrix<S>) -> f64 {
    m.iter().map(|r| max_abs(r)).fold(0.0, f64::max)
}

/// Index of the pivot row in column `col` among rows `from..`: largest
/// magnitude for floats, first nonzero for exact backends.
fn pick_pivot<S: Scalar>(m: &Matrix<S>, col: usize, from: usize, scale: f64) -> Option<usize> {
    if S::EXACT {
        (from..m.len()).find(|&r| !m[r][col].is_zero())
    } else {
        let (best, mag) = (from..m.len())
            .map(|r| (r, m[r][col].to_f64().abs()))
            .fold((from, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if from < m.len() && !S::from_f64(mag).negligible(scale) {
            Some(best)
        } else {
            None
        }
    }
}

/// Row echelon reduction; returns the reduced matrix, pivot columns and
/// the number of row swaps.
fn echelon<S: Scalar>(mut m: Matrix<S>) -> (Matrix<S>, Vec<usize>, usize) {
    let scale = matrix_scale(&m);
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = pick_pivot(&m, c, r, scale) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            swaps += 1;
        }
        let piv = m[r][c].clone();
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() / piv.clone();
            for j in c..cols {
                let v = m[r][j].clone() * f.clone();
                m[i][j] = m[i][j].clone() - v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots, swaps)
}

/// Determinant by elimination with partial pivoting. Only an exactly zero
/// column gives 0, so ill-conditioned float matrices keep their value.
pub fn det<S: Scalar>(m: &Matrix<S>) -> S {
    if let Some(v) = S::special_det(m) {
        return v;
    }
    let n = m.len();
    let mut a = m.clone();
    let mut acc = S::one();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .expect("nonempty range");
        if a[p][c].is_zero() {
            return S::zero();
        }
        if p != c {
            a.swap(p, c);
            acc = -acc;
        }
        let piv = a[c][c].clone();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() / piv.clone();
            for j in c..n {
                let v = a[c][j].clone() * f.clone();
                a[i][j] = a[i][j].clone() - v;
            }
        }
        acc = acc * piv;
    }
    acc
}

/// Product of the Euclidean row norms, an upper bound for `|det m|`.
pub fn hadamard_bound<S: Scalar>(m: &Matrix<S>) -> f64 {
    m.iter().map(|r| r.iter().map(|v| v.to_f64().powi(2)).sum::<f64>().sqrt()).product()
}

pub fn rank<S: Scalar>(m: &Matrix<S>) -> usize {
    if m.is_empty() {
        return 0;
    }
    echelon(m.clone()).1.len()
}

/// Solve `m x = b` for square nonsingular `m`.
pub fn solve<S: Scalar>(m: &Matrix<S>, b: &[S]) -> Option<Vec<S>> {
    let n = m.len();
    let aug: Matrix<S> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (e, pivots, _) = echelon(aug);
    if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut x = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut acc = e[i][n].clone();
        for j in i + 1..n {
            acc = acc - e[i][j].clone() * x[j].clone();
        }
        x[i] = acc / e[i][i].clone();
    }
    Some(x)
}

pub fn inverse<S: Scalar>(m: &Matrix<S>) -> Option<Matrix<S>> {
    let n = m.len();
    let mut cols = Vec::with_capacity(n);
    // One elimination per column keeps this short; n <= 8 in practice.
    for j in 0..n {
        let e: Vec<S> = (0..n).map(|i| if i == j { S::one() } else { S::zero() }).collect();
        cols.push(solve(m, &e)?);
    }
    Some(from_columns(&cols))
}

/// Generalized cross product of `k = N - 1` vectors in `N` dimensions:
/// the covector `h` with `h . v = det[r_1; ...; r_k; v]` for every `v`.
/// It annihilates every input row and vanishes iff the rows are dependent.
pub fn cofactor_vector<S: Scalar>(rows: &[Vec<S>]) -> Vec<S> {
    let n = rows.len() + 1;
    (0..n)
        .map(|i| {
            let minor: Matrix<S> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect())
                .collect();
            let d = det(&minor);
            if (n - 1 + i).is_multiple_of(2) {
                d
            } else {
                -d
            }
        })
        .collect()
}

/// True if the vector is zero (float: negligible relative to `scale`).
pub fn is_null_vec<S: Scalar>(v: &[S], scale: f64) -> bool {
    v.iter().all(|x| x.negligible(scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn determinant_and_inverse() {
        let m = qm(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(det(&m), q(18));
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(3));
        assert_eq!(det(&qm(&[&[1, 2], &[2, 4]])), q(0));
        assert!(inverse(&qm(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn cofactor_annihilates_rows() {
        let rows = qm(&[&[1, 2, 3, 4], &[0, 1, -1, 2], &[5, 0, 1, 1]]);
        let h = cofactor_vector(&rows);
        for r in &rows {
            assert_eq!(dot(&h, r), q(0));
        }
        let v = vec![q(1), q(1), q(0), q(-3)];
        let mut full = rows.clone();
        full.push(v.clone());
        assert_eq!(dot(&h, &v), det(&full));
    }

    #[test]
    fn float_rank_uses_relative_threshold() {
        let m = vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-15]];
        assert_eq!(rank(&m), 1);
        let m = vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-6]];
        assert_eq!(rank(&m), 2);
    }
}
