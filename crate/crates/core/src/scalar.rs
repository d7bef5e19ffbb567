//! Field elements shared by every construction: arbitrary-precision
//! rationals for identities that must hold exactly, and `f64` for
//! numerical sweeps.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Rational = BigRational;

/// Pivot threshold used by the float backend, relative to the largest
/// absolute entry of the matrix being reduced.
pub const FLOAT_PIVOT_REL: f64 = 1e-12;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for backends whose arithmetic is exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;

    /// Exact zero test.
    fn is_zero(&self) -> bool;

    /// Zero test used for rank and pivot decisions: exact zero for exact
    /// backends, `|x| <= FLOAT_PIVOT_REL * scale` for floats.
    fn negligible(&self, scale: f64) -> bool;

    /// Real `k`-th root, if one exists in this backend. Rationals only
    /// return perfect powers.
    fn nth_root(&self, k: u32) -> Option<Self>;

    fn powi(&self, e: i32) -> Self {
        let mut acc = Self::one();
        let base = if e < 0 { Self::one() / self.clone() } else { self.clone() };
        for _ in 0..e.unsigned_abs() {
            acc = acc * base.clone();
        }
        acc
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    /// Determinant by a backend-specific method, if there is one; `None`
    /// falls back to elimination in the field.
    fn special_det(_m: &[Vec<Self>]) -> Option<Self> {
        None
    }

    /// A representative of the projective point `[v]` with small entries:
    /// divided by its largest entry by default, a primitive integer vector
    /// for rationals.
    fn projective_normalize(v: &[Self]) -> Vec<Self> {
        let pivot = v.iter().fold(Self::zero(), |m, x| if x.abs() > m.abs() { x.clone() } else { m });
        if pivot.is_zero() {
            return v.to_vec();
        }
        v.iter().map(|x| x.clone() / pivot.clone()).collect()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn negligible(&self, scale: f64) -> bool {
        f64::abs(*self) <= FLOAT_PIVOT_REL * scale.max(f64::MIN_POSITIVE)
    }
    fn nth_root(&self, k: u32) -> Option<Self> {
        if k == 0 {
            return None;
        }
        if *self < 0.0 {
            if k.is_multiple_of(2) {
                None
            } else {
                Some(-(-self).powf(1.0 / k as f64))
            }
        } else {
            Some(self.powf(1.0 / k as f64))
        }
    }
    fn powi(&self, e: i32) -> Self {
        f64::powi(*self, e)
    }
}

fn exact_int_root(v: &BigInt, k: u32) -> Option<BigInt> {
    let r = v.nth_root(k);
    for cand in [r.clone(), &r + 1, &r - 1] {
        if num_traits::pow(cand.clone(), k as usize) == *v {
            return Some(cand);
        }
    }
    None
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn negligible(&self, _scale: f64) -> bool {
        Zero::is_zero(self)
    }
    fn nth_root(&self, k: u32) -> Option<Self> {
        if k == 0 {
            return None;
        }
        if Signed::is_negative(self) {
            if k.is_multiple_of(2) {
                return None;
            }
            return Scalar::nth_root(&-self.clone(), k).map(|r: Rational| -r);
        }
        let num = exact_int_root(self.numer(), k)?;
        let den = exact_int_root(self.denom(), k)?;
        Some(BigRational::new(num, den))
    }
    /// Fraction-free (Bareiss) elimination on the integer matrix obtained by
    /// clearing each row's denominators; avoids the gcds that dominate
    /// rational elimination once entries have thousands of digits.
    fn special_det(m: &[Vec<Self>]) -> Option<Self> {
        let n = m.len();
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = m
            .iter()
            .map(|row| {
                let lcm = row.iter().fold(BigInt::one(), |l, x| if x.denom().is_one() { l } else { l.lcm(x.denom()) });
                let ints = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
                scale *= lcm;
                ints
            })
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return Some(Zero::zero());
            };
            if p != c {
                a.swap(p, c);
                sign = -sign;
            }
            for i in c + 1..n {
                for j in c + 1..n {
                    let v = &a[c][c] * &a[i][j] - &a[i][c] * &a[c][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[c][c].clone();
        }
        let det = if n == 0 { BigInt::one() } else { prev };
        Some(BigRational::new(sign * det, scale))
    }

    fn projective_normalize(v: &[Self]) -> Vec<Self> {
        let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            return v.to_vec();
        }
        ints.into_iter().map(|x| BigRational::from_integer(x / &g)).collect()
    }
}

/// Largest absolute value in a slice, as `f64` (used for relative thresholds).
pub fn max_abs<S: Scalar>(values: &[S]) -> f64 {
    values.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
}

/// Parse "p/q", "p", or a decimal literal into a scalar.
pub fn parse_scalar<S: Scalar>(s: &str) -> Option<S> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if Zero::is_zero(&q) {
            return None;
        }
        let r = BigRational::new(p, q);
        return Some(from_rational(&r));
    }
    if let Ok(i) = s.parse::<BigInt>() {
        return Some(from_rational(&BigRational::from_integer(i)));
    }
    s.parse::<f64>().ok().map(S::from_f64)
}

/// Convert an exact rational into any backend.
pub fn from_rational<S: Scalar>(r: &Rational) -> S {
    if S::EXACT {
        // Rebuild from the integer digits so this stays generic without
        // specialisation.
        let num: S = big_to_scalar(r.numer());
        let den: S = big_to_scalar(r.denom());
        num / den
    } else {
        S::from_f64(Scalar::to_f64(r))
    }
}

fn big_to_scalar<S: Scalar>(v: &BigInt) -> S {
    // Horner in base 2^32 so arbitrary-size integers survive.
    let (sign, digits) = v.to_u32_digits();
    let base = S::from_i64(1 << 32);
    let mut acc = S::zero();
    for d in digits.iter().rev() {
        acc = acc * base.clone() + S::from_i64(*d as i64);
    }
    if sign == num_bigint::Sign::Minus {
        -acc
    } else {
        acc
    }
}

/// Render a scalar for the JSON/CSV formats: rationals as "p/q", floats
/// in shortest round-trip form.
pub fn format_scalar<S: Scalar>(v: &S) -> String {
    if S::EXACT {
        let s = v.to_string();
        if s.contains('/') {
            s
        } else {
            format!("{s}/1")
        }
    } else {
        format!("{}", v.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn rational_roots_are_exact_or_absent() {
        assert_eq!(Scalar::nth_root(&q(16, 81), 4), Some(q(2, 3)));
        assert_eq!(Scalar::nth_root(&q(-8, 27), 3), Some(q(-2, 3)));
        assert_eq!(Scalar::nth_root(&q(2, 1), 2), None);
        assert_eq!(Scalar::nth_root(&q(-1, 1), 2), None);
    }

    #[test]
    fn fraction_free_det_matches_elimination() {
        let m = vec![vec![q(1, 2), q(2, 3), q(0, 1)], vec![q(0, 1), q(5, 7), q(-1, 1)], vec![q(3, 1), q(0, 1), q(1, 5)]];
        let expect = q(1, 2) * (q(5, 7) * q(1, 5)) - q(2, 3) * (q(0, 1) * q(1, 5) + q(3, 1));
        assert_eq!(Rational::special_det(&m), Some(expect));
        let singular = vec![vec![q(1, 1), q(2, 1)], vec![q(1, 2), q(1, 1)]];
        assert_eq!(Rational::special_det(&singular), Some(q(0, 1)));
        assert_eq!(f64::special_det(&[vec![1.0]]), None);
    }

    #[test]
    fn projective_normalization() {
        let v = [q(2, 3), q(-4, 9), q(0, 1)];
        assert_eq!(Rational::projective_normalize(&v), vec![q(3, 1), q(-2, 1), q(0, 1)]);
        let f = f64::projective_normalize(&[2.0, -4.0, 1.0]);
        assert_eq!(f, vec![-0.5, 1.0, -0.25]);
    }

    #[test]
    fn float_roots() {
        assert!((Scalar::nth_root(&81.0f64, 4).unwrap() - 3.0).abs() < 1e-14);
        assert!((Scalar::nth_root(&-8.0f64, 3).unwrap() + 2.0).abs() < 1e-14);
        assert!(Scalar::nth_root(&-8.0f64, 4).is_none());
    }

    #[test]
    fn parse_and_format_round_trip() {
        let v: Rational = parse_scalar("-12/18").unwrap();
        assert_eq!(v, q(-2, 3));
        assert_eq!(format_scalar(&v), "-2/3");
        assert_eq!(format_scalar(&q(5, 1)), "5/1");
        let big: Rational = parse_scalar("123456789012345678901234567891/7").unwrap();
        assert_eq!(format_scalar(&big), "123456789012345678901234567891/7");
        let f: f64 = parse_scalar("3/4").unwrap();
        assert_eq!(f, 0.75);
        let g: f64 = parse_scalar("0.125").unwrap();
        assert_eq!(g, 0.125);
    }
}
