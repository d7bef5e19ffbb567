//! Dense univariate polynomials over the rationals, and the subresultant
//! resultant of polynomials with coefficients in that ring.

use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Coefficients from the constant term upward, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly {
    c: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|v| v.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    pub fn zero() -> Self {
        Self { c: Vec::new() }
    }

    pub fn constant(v: Rational) -> Self {
        Self::new(vec![v])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.c.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn lead(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let len = self.c.len().max(o.c.len());
        Self::new((0..len).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let len = self.c.len().max(o.c.len());
        Self::new((0..len).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self { c: self.c.iter().map(|v| -v.clone()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.c.iter().map(|v| v * s).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = Rational::one() / d.lead();
        let mut r = self.c.clone();
        let mut q = vec![Rational::zero(); self.c.len().saturating_sub(dd)];
        while r.len() > dd {
            let top = r.len() - 1;
            let f = r[top].clone() * lead_inv.clone();
            if !f.is_zero() {
                for (i, dc) in d.c.iter().enumerate() {
                    r[top - dd + i] -= f.clone() * dc;
                }
                q[top - dd] = f;
            }
            r.pop();
        }
        (Self::new(q), Self::new(r))
    }

    /// Division that is known to be exact.
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            self.clone()
        } else {
            self.scale(&(Rational::one() / self.lead()))
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(i, v)| v * Rational::from_integer(i.into())).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.c.iter().rev().fold(Rational::zero(), |acc, v| acc * x + v)
    }

    /// Multiplicity of the root 0.
    pub fn low_order(&self) -> usize {
        self.c.iter().take_while(|v| v.is_zero()).count()
    }

    /// Divide out `x^m` with `m = low_order()`.
    pub fn strip_zero_root(&self) -> Self {
        Self::new(self.c[self.low_order()..].to_vec())
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }
}

/// Polynomial in k with coefficients in `Q[x]`, constant term first.
pub type KPoly = Vec<UPoly>;

fn kdeg(p: &KPoly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn ktrim(mut p: KPoly) -> KPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// `d/dk`.
pub fn k_derivative(p: &KPoly) -> KPoly {
    ktrim(p.iter().enumerate().skip(1).map(|(i, c)| c.scale(&Rational::from_integer(i.into()))).collect())
}

/// Pseudo-remainder of `a` by `b`: `lc(b)^(deg a - deg b + 1) a mod b`.
fn pseudo_rem(a: &KPoly, b: &KPoly) -> KPoly {
    let db = kdeg(b).expect("nonzero divisor");
    let lb = b[db].clone();
    let mut r = ktrim(a.clone());
    let mut e = kdeg(&r).map_or(0, |da| da + 1 - db.min(da + 1));
    while let Some(dr) = kdeg(&r) {
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        let mut next: KPoly = r.iter().map(|c| c.mul(&lb)).collect();
        for (i, bc) in b.iter().enumerate() {
            next[dr - db + i] = next[dr - db + i].sub(&bc.mul(&lr));
        }
        r = ktrim(next);
        e = e.saturating_sub(1);
    }
    let factor = lb.pow(e);
    r.iter().map(|c| c.mul(&factor)).collect()
}

/// `Res_k(a, b)` by the subresultant algorithm, with exact divisions in
/// `Q[x]` throughout.
pub fn resultant(a: &KPoly, b: &KPoly) -> UPoly {
    let (mut a, mut b) = (ktrim(a.clone()), ktrim(b.clone()));
    let (Some(mut da), Some(mut db)) = (kdeg(&a), kdeg(&b)) else {
        return UPoly::zero();
    };
    let mut sign = false;
    if da < db {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut da, &mut db);
        if da % 2 == 1 && db % 2 == 1 {
            sign = !sign;
        }
    }
    if db == 0 {
        return b[0].pow(da);
    }
    let mut g = UPoly::one();
    let mut h = UPoly::one();
    loop {
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = !sign;
        }
        let r = pseudo_rem(&a, &b);
        a = b;
        let divisor = g.mul(&h.pow(delta));
        b = r.iter().map(|c| c.exact_div(&divisor)).collect();
        b = ktrim(b);
        g = a[kdeg(&a).unwrap()].clone();
        h = if delta == 0 { h } else { g.pow(delta).exact_div(&h.pow(delta - 1)) };
        da = kdeg(&a).unwrap();
        match kdeg(&b) {
            None => return UPoly::zero(),
            Some(0) => {
                let lb = b[0].clone();
                let out = if da == 0 { h } else { lb.pow(da).exact_div(&h.pow(da - 1)) };
                return if sign { out.neg() } else { out };
            }
            Some(d) => db = d,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    fn p(v: &[i64]) -> UPoly {
        UPoly::new(v.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[-1, 1])), p(&[-1, 1]));
        assert!(a.is_squarefree());
        assert!(!a.mul(&b).is_squarefree());
        assert_eq!(p(&[0, 0, 3, 1]).strip_zero_root(), p(&[3, 1]));
    }

    /// Resultant via the Sylvester determinant after substituting x = x0.
    fn sylvester_at(a: &KPoly, b: &KPoly, x0: &Rational) -> Rational {
        let ea: Vec<Rational> = a.iter().map(|c| c.eval(x0)).collect();
        let eb: Vec<Rational> = b.iter().map(|c| c.eval(x0)).collect();
        let (m, n) = (ea.len() - 1, eb.len() - 1);
        let size = m + n;
        let mut s = vec![vec![Rational::zero(); size]; size];
        for i in 0..n {
            for (j, c) in ea.iter().rev().enumerate() {
                s[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in eb.iter().rev().enumerate() {
                s[n + i][i + j] = c.clone();
            }
        }
        linalg::det(&s)
    }

    #[test]
    fn resultant_matches_sylvester_determinant() {
        let a: KPoly = vec![p(&[1, 2]), p(&[0, -1, 3]), p(&[2]), p(&[-1, 0, 1]), p(&[0, 1])];
        let b = k_derivative(&a);
        let r = resultant(&a, &b);
        for x in [-3i64, -1, 2, 5, 7] {
            let x0 = Rational::from_integer(x.into());
            assert_eq!(r.eval(&x0), sylvester_at(&a, &b, &x0), "x={x}");
        }
    }

    #[test]
    fn resultant_of_common_root_is_zero() {
        let a: KPoly = vec![p(&[-1]), p(&[0]), p(&[1])];
        let b: KPoly = vec![p(&[-1]), p(&[1])];
        assert!(resultant(&a, &b).is_zero());
    }
}
