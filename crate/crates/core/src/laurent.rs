//! Laurent polynomials in the spectral parameter and square matrices of them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::linalg::Matrix;
use crate::scalar::{format_scalar, Scalar};

/// `sum c_e lambda^e` with no zero coefficients stored.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly<S: Scalar> {
    terms: BTreeMap<i32, S>,
}

impl<S: Scalar> LaurentPoly<S> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(c, 0)
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    /// `c lambda^e`.
    pub fn monomial(c: S, e: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (i32, S)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: i32, c: S) {
        let v = match self.terms.remove(&e) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(e, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i32) -> S {
        self.terms.get(&e).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &S)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// `(c, e)` if this is a single nonzero term.
    pub fn as_monomial(&self) -> Option<(S, i32)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (c.clone(), *e))
        } else {
            None
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c.clone() * s.clone())))
    }

    /// Multiply by `lambda^m`.
    pub fn shift(&self, m: i32) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e + m, c.clone())).collect() }
    }

    pub fn eval(&self, lambda: &S) -> S {
        let inv = S::one() / lambda.clone();
        self.terms.iter().fold(S::zero(), |acc, (e, c)| {
            let base = if *e < 0 { &inv } else { lambda };
            acc + c.clone() * base.powi(e.abs())
        })
    }

    /// `d/d lambda`.
    pub fn derivative(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| **e != 0)
                .map(|(e, c)| (e - 1, c.clone() * S::from_i64(*e as i64))),
        )
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> S {
        self.terms.values().map(|c| c.abs()).fold(S::zero(), S::max_of)
    }
}

impl<S: Scalar> fmt::Display for LaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(e, c)| format!("({})*l^{}", format_scalar(c), e)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<S: Scalar> Add for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn add(self, rhs: Self) -> LaurentPoly<S> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn sub(self, rhs: Self) -> LaurentPoly<S> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<S: Scalar> Neg for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn neg(self) -> LaurentPoly<S> {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl<S: Scalar> Mul for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn mul(self, rhs: Self) -> LaurentPoly<S> {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

/// Square matrix of Laurent polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix<S: Scalar> {
    pub entries: Vec<Vec<LaurentPoly<S>>>,
}

impl<S: Scalar> PolyMatrix<S> {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn zeros(n: usize) -> Self {
        Self { entries: vec![vec![LaurentPoly::zero(); n]; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i][i] = LaurentPoly::one();
        }
        m
    }

    pub fn from_scalar(m: &Matrix<S>) -> Self {
        Self {
            entries: m.iter().map(|r| r.iter().map(|c| LaurentPoly::constant(c.clone())).collect()).collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly<S> {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly<S>) {
        self.entries[i][j] = p;
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.size();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = LaurentPoly::zero();
                for k in 0..n {
                    if self.entries[i][k].is_zero() || rhs.entries[k][j].is_zero() {
                        continue;
                    }
                    acc = &acc + &(&self.entries[i][k] * &rhs.entries[k][j]);
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
                .collect(),
        }
    }

    pub fn scale(&self, s: &LaurentPoly<S>) -> Self {
        Self { entries: self.entries.iter().map(|r| r.iter().map(|c| c * s).collect()).collect() }
    }

    /// Minor on the given rows and columns, by Laplace expansion along the
    /// first listed row with memoization over column subsets.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> LaurentPoly<S> {
        let mut memo: BTreeMap<u64, LaurentPoly<S>> = BTreeMap::new();
        self.minor_rec(rows, cols, (1u64 << cols.len()) - 1, &mut memo)
    }

    fn minor_rec(
        &self,
        rows: &[usize],
        cols: &[usize],
        mask: u64,
        memo: &mut BTreeMap<u64, LaurentPoly<S>>,
    ) -> LaurentPoly<S> {
        let used = cols.len() - mask.count_ones() as usize;
        if used == rows.len() {
            return LaurentPoly::one();
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let row = rows[used];
        let mut acc = LaurentPoly::zero();
        let mut sign_pos = true;
        for (ci, &c) in cols.iter().enumerate() {
            if mask & (1 << ci) == 0 {
                continue;
            }
            let entry = &self.entries[row][c];
            if !entry.is_zero() {
                let sub = self.minor_rec(rows, cols, mask & !(1 << ci), memo);
                let term = entry * &sub;
                acc = if sign_pos { &acc + &term } else { &acc - &term };
            }
            sign_pos = !sign_pos;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    pub fn det(&self) -> LaurentPoly<S> {
        let idx: Vec<usize> = (0..self.size()).collect();
        self.minor(&idx, &idx)
    }

    /// Adjugate divided by the determinant; `None` unless the determinant is
    /// a single monomial (so that the inverse stays Laurent).
    pub fn inverse(&self) -> Option<Self> {
        let n = self.size();
        let (c, e) = self.det().as_monomial()?;
        let inv_det = LaurentPoly::monomial(S::one() / c, -e);
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&k| k != i).collect();
                let m = self.minor(&rows, &cols);
                let m = if (i + j) % 2 == 0 { m } else { -&m };
                out.entries[i][j] = &m * &inv_det;
            }
        }
        Some(out)
    }

    pub fn eval(&self, lambda: &S) -> Matrix<S> {
        self.entries.iter().map(|r| r.iter().map(|p| p.eval(lambda)).collect()).collect()
    }

    /// Largest absolute coefficient over all entries.
    pub fn max_abs_coeff(&self) -> S {
        self.entries.iter().flatten().map(|p| p.max_abs_coeff()).fold(S::zero(), S::max_of)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|p| p.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn ring_operations() {
        let a = LaurentPoly::from_terms([(-1, q(2)), (1, q(3))]);
        let b = LaurentPoly::from_terms([(1, q(1)), (0, q(-1))]);
        let p = &a * &b;
        assert_eq!(p, LaurentPoly::from_terms([(0, q(2)), (-1, q(-2)), (2, q(3)), (1, q(-3))]));
        assert!((&p - &p).is_zero());
        assert_eq!(p.eval(&q(2)), a.eval(&q(2)) * b.eval(&q(2)));
        assert_eq!(a.derivative(), LaurentPoly::from_terms([(-2, q(-2)), (0, q(3))]));
    }

    #[test]
    fn determinant_and_inverse_of_monomial_det() {
        let l = LaurentPoly::monomial(q(1), 1);
        let m = PolyMatrix {
            entries: vec![
                vec![LaurentPoly::zero(), LaurentPoly::constant(q(-1))],
                vec![l.clone(), LaurentPoly::constant(q(5))],
            ],
        };
        assert_eq!(m.det(), l);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), PolyMatrix::identity(2));
    }
}
