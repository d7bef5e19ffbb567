//! The spectral function `R(lambda, k) = det(T(lambda) - k)` of the 3D map,
//! its integrals of motion, the branch census behind the genus formula, and
//! the quadruple-point conditions for closed polygons.

use crate::coords::{Abc3, Xyz3};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, PolyMatrix};
use crate::lax::{lax_abc, laxes_from_coeffs, laxes_from_xyz, monodromy};
use crate::linalg::{self, Matrix};
use crate::projective::CoeffSeq;
use crate::scalar::{Rational, Scalar, FLOAT_PIVOT_REL};
use crate::upoly::{k_derivative, resultant, KPoly, UPoly};

/// How the monodromy was built, which fixes the normalization of `R`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralMode<S: Scalar> {
    /// `(a, b, c)` Lax matrices (odd n).
    Abc,
    /// `(x, y, z)` Lax matrices, rescaled by `I_0`.
    Xyz { i0: S },
    /// `(x, y, z)` Lax matrices without the `I_0` rescaling.
    XyzUnscaled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction<S: Scalar> {
    pub n: usize,
    /// `coeffs[m]` is the coefficient of `k^m`.
    pub coeffs: Vec<LaurentPoly<S>>,
    pub mode: SpectralMode<S>,
    /// Set when `I_0` was taken from `|prod x^2 y z|` because the product
    /// was negative.
    pub branch_ambiguous: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integrals3D<S: Scalar> {
    pub i: Vec<S>,
    pub j: Vec<S>,
    pub g: Vec<S>,
}

impl<S: Scalar> Integrals3D<S> {
    /// `I_0..I_q, J_0..J_q, G_0..G_q` in one list.
    pub fn flatten(&self) -> Vec<S> {
        self.i.iter().chain(&self.j).chain(&self.g).cloned().collect()
    }
}

/// Coefficients of `det(T - k)` in powers of k, from sums of principal
/// minors.
pub fn char_poly<S: Scalar>(t: &PolyMatrix<S>) -> Vec<LaurentPoly<S>> {
    let size = t.size();
    let mut coeffs = vec![LaurentPoly::zero(); size + 1];
    for mask in 0u32..(1 << size) {
        let idx: Vec<usize> = (0..size).filter(|i| mask & (1 << i) != 0).collect();
        let m = size - idx.len();
        let minor = t.minor(&idx, &idx);
        let term = if m.is_multiple_of(2) { minor } else { -&minor };
        coeffs[m] = &coeffs[m] + &term;
    }
    coeffs
}

/// Spectral function from a 3D monodromy matrix.
pub fn spectral_function<S: Scalar>(t: &PolyMatrix<S>, n: usize, mode: SpectralMode<S>) -> SpectralFunction<S> {
    let mut coeffs = char_poly(t);
    if let SpectralMode::Xyz { i0 } = &mode {
        for (m, c) in coeffs.iter_mut().enumerate() {
            *c = c.scale(&i0.powi(m as i32 - 4));
        }
    }
    SpectralFunction { n, coeffs, mode, branch_ambiguous: false }
}

pub fn spectral_function_abc<S: Scalar>(abc: &Abc3<S>) -> SpectralFunction<S> {
    let laxes: Vec<PolyMatrix<S>> = (0..abc.n()).map(|j| lax_abc(&abc.a[j], &abc.b[j], &abc.c[j])).collect();
    spectral_function(&monodromy(&laxes, 0), abc.n(), SpectralMode::Abc)
}

/// `I_0 = (prod x_i^2 y_i z_i)^{-1/4}`, principal real root; the flag is set
/// when the product is negative and its absolute value was used instead.
pub fn i0_from_xyz<S: Scalar>(xyz: &Xyz3<S>) -> Result<(S, bool)> {
    let w = xyz.weight_product();
    if w.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let ambiguous = w.is_negative();
    let root = (S::one() / w.abs())
        .nth_root(4)
        .ok_or_else(|| Error::NoExactRoot(format!("(prod x^2 y z)^(-1/4) of {w}")))?;
    Ok((root, ambiguous))
}

/// Spectral function from `(x, y, z)`. `i0` overrides the principal branch;
/// `None` computes it from the coordinates.
pub fn spectral_function_xyz<S: Scalar>(xyz: &Xyz3<S>, i0: Option<S>) -> Result<SpectralFunction<S>> {
    let (i0, ambiguous) = match i0 {
        Some(v) => (v, false),
        None => i0_from_xyz(xyz)?,
    };
    let t = monodromy(&laxes_from_xyz(xyz)?, 0);
    let mut r = spectral_function(&t, xyz.n(), SpectralMode::Xyz { i0 });
    r.branch_ambiguous = ambiguous;
    Ok(r)
}

/// Spectral function from `(x, y, z)` without the `I_0` rescaling; it has the
/// same zero set in lambda up to the substitution `k -> k I_0`.
pub fn spectral_function_xyz_unscaled<S: Scalar>(xyz: &Xyz3<S>) -> Result<SpectralFunction<S>> {
    let t = monodromy(&laxes_from_xyz(xyz)?, 0);
    Ok(spectral_function(&t, xyz.n(), SpectralMode::XyzUnscaled))
}

/// Integrals of a double-precision `(x, y, z)` state, evaluated exactly:
/// every float is a dyadic rational, so the monodromy product is formed in
/// rational arithmetic and only the final `I_0` rescaling is rounded. This
/// keeps the result free of the cancellation the float product suffers when
/// some coordinates get small.
pub fn integrals_xyz_f64(xyz: &Xyz3<f64>) -> Result<Integrals3D<f64>> {
    let q = |v: &[f64]| -> Result<Vec<Rational>> {
        v.iter()
            .map(|&t| {
                if t.is_finite() {
                    Ok(Rational::from_f64(t))
                } else {
                    Err(Error::InvalidInput(format!("non-finite coordinate {t}")))
                }
            })
            .collect()
    };
    let exact = spectral_function_xyz_unscaled(&Xyz3 { x: q(&xyz.x)?, y: q(&xyz.y)?, z: q(&xyz.z)? })?;
    let (i0, ambiguous) = i0_from_xyz(xyz)?;
    let coeffs = exact
        .coeffs
        .iter()
        .enumerate()
        .map(|(m, c)| LaurentPoly::from_terms(c.terms().map(|(e, v)| (e, v.to_f64() * i0.powi(m as i32 - 4)))))
        .collect();
    extract_integrals(&SpectralFunction { n: xyz.n(), coeffs, mode: SpectralMode::Xyz { i0 }, branch_ambiguous: ambiguous })
}

/// `det(T - k)` for the general-d Lax matrices of a coefficient sequence.
pub fn char_poly_of_coeffs<S: Scalar>(coeffs: &CoeffSeq<S>) -> Vec<LaurentPoly<S>> {
    char_poly(&monodromy(&laxes_from_coeffs(coeffs), 0))
}

fn check_window<S: Scalar>(p: &LaurentPoly<S>, lo: i32, hi: i32, scale: f64, what: &str) -> Result<()> {
    for (e, c) in p.terms() {
        if (e < lo || e > hi) && !c.negligible(scale) {
            return Err(Error::UnexpectedSupport(format!("{what} has a term lambda^{e} outside [{lo}, {hi}]")));
        }
    }
    Ok(())
}

fn close_to<S: Scalar>(a: &LaurentPoly<S>, b: &LaurentPoly<S>, scale: f64) -> bool {
    (a - b).terms().all(|(_, c)| c.negligible(scale))
}

/// Terms outside the support windows cancel exactly; in floats they survive
/// as roundoff of the monodromy product, which can exceed the pivot
/// threshold by a few orders of magnitude. Relative cutoff for those.
const FLOAT_SUPPORT_REL: f64 = 1e-6;

/// Read off `I_j, J_j, G_j` after checking the support of every coefficient.
/// Float data is checked relative to its largest coefficient.
pub fn extract_integrals<S: Scalar>(r: &SpectralFunction<S>) -> Result<Integrals3D<S>> {
    if r.coeffs.len() != 5 {
        return Err(Error::UnexpectedSupport(format!("expected degree 4 in k, got {}", r.coeffs.len() - 1)));
    }
    let n = r.n as i32;
    let q = n / 2;
    let largest = r.coeffs.iter().map(|c| c.max_abs_coeff().to_f64()).fold(1.0, f64::max);
    let scale = largest * FLOAT_SUPPORT_REL / FLOAT_PIVOT_REL;
    if !close_to(&r.coeffs[4], &LaurentPoly::one(), scale) {
        return Err(Error::UnexpectedSupport("k^4 coefficient is not 1".into()));
    }
    check_window(&r.coeffs[0], -2 * n, -2 * n, scale, "k^0 coefficient")?;
    if r.mode != SpectralMode::XyzUnscaled && !close_to(&r.coeffs[0], &LaurentPoly::monomial(S::one(), -2 * n), scale) {
        return Err(Error::UnexpectedSupport("k^0 coefficient is not lambda^(-2n)".into()));
    }
    check_window(&r.coeffs[3], -n, q - n, scale, "k^3 coefficient")?;
    check_window(&r.coeffs[2], -q - n, -n, scale, "k^2 coefficient")?;
    check_window(&r.coeffs[1], -2 * n, q - 2 * n, scale, "k^1 coefficient")?;
    let read = |m: usize, off: i32, neg: bool| -> Vec<S> {
        (0..=q)
            .map(|j| {
                let v = r.coeffs[m].coeff(j + off);
                if neg {
                    -v
                } else {
                    v
                }
            })
            .collect()
    };
    Ok(Integrals3D { i: read(1, -2 * n, true), j: read(2, -q - n, false), g: read(3, -n, true) })
}

/// Finite branch points of the spectral curve.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchCount {
    /// Degree of the discriminant after removing its root at `lambda = 0`.
    pub nu_fin: usize,
    /// Multiplicity of the discriminant's root at `lambda = 0`.
    pub zero_order: usize,
    pub squarefree: bool,
    pub genus: i64,
}

/// Expected genus: `3q` for odd n, `3q - 3` for even n.
pub fn expected_genus(n: usize) -> i64 {
    let q = (n / 2) as i64;
    if n % 2 == 1 {
        3 * q
    } else {
        3 * q - 3
    }
}

/// Count finite branch points of `R = 0` from `Disc_k(lambda^{2n} R)` and
/// convert to a genus with `2 - 2g = 8 - nu`, where the branch points over
/// `lambda = 0, infinity` contribute 3 for odd n and none for even n.
pub fn finite_branch_count(r: &SpectralFunction<Rational>) -> Result<BranchCount> {
    let shift = 2 * r.n as i32;
    let p: KPoly = r
        .coeffs
        .iter()
        .map(|c| {
            let mut v = Vec::new();
            for (e, coef) in c.shift(shift).terms() {
                if e < 0 {
                    return Err(Error::UnexpectedSupport(format!("negative power lambda^{e} after clearing")));
                }
                let e = e as usize;
                if v.len() <= e {
                    v.resize(e + 1, <Rational as Scalar>::zero());
                }
                v[e] = coef.clone();
            }
            Ok(UPoly::new(v))
        })
        .collect::<Result<_>>()?;
    let disc = resultant(&p, &k_derivative(&p));
    if disc.is_zero() {
        return Err(Error::NonGeneric("discriminant vanishes identically".into()));
    }
    let zero_order = disc.low_order();
    let stripped = disc.strip_zero_root();
    let nu_fin = stripped.degree().unwrap_or(0);
    let nu = if r.n % 2 == 1 { nu_fin + 3 } else { nu_fin } as i64;
    Ok(BranchCount { nu_fin, zero_order, squarefree: stripped.is_squarefree(), genus: (nu - 6) / 2 })
}

/// The derivative orders `(a, b)` of `d_k^a d_lambda^b R` that vanish at a
/// quadruple point.
pub const QUADRUPLE_CONDITIONS: [(usize, usize); 10] =
    [(0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1), (3, 0), (0, 3), (2, 1), (1, 2)];

fn falling(m: usize, a: usize) -> i64 {
    (0..a).map(|i| m as i64 - i as i64).product()
}

/// `d_k^a d_lambda^b R` at `(lambda0, k0)`.
pub fn partial<S: Scalar>(r: &SpectralFunction<S>, a: usize, b: usize, lambda0: &S, k0: &S) -> S {
    let mut acc = S::zero();
    for (m, c) in r.coeffs.iter().enumerate() {
        if m < a {
            continue;
        }
        let mut cb = c.clone();
        for _ in 0..b {
            cb = cb.derivative();
        }
        acc = acc + S::from_i64(falling(m, a)) * k0.powi((m - a) as i32) * cb.eval(lambda0);
    }
    acc
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosednessReport<S: Scalar> {
    /// The ten quadruple-point residuals at `(1, 1)`.
    pub at_plus: Vec<S>,
    /// The same at `(1, -1)`.
    pub at_minus: Vec<S>,
    /// `R - (s R_k - R_kk/2 + s R_kkk/6)` at `(1, s)`, `s = 1, -1`.
    pub identity: [S; 2],
}

impl<S: Scalar> ClosednessReport<S> {
    /// True if all ten residuals vanish at one of the two points.
    pub fn quadruple_point(&self) -> bool {
        self.at_plus.iter().all(|v| v.is_zero()) || self.at_minus.iter().all(|v| v.is_zero())
    }
}

pub fn closedness_residuals<S: Scalar>(r: &SpectralFunction<S>) -> ClosednessReport<S> {
    let one = S::one();
    let eval_at = |s: &S| -> Vec<S> { QUADRUPLE_CONDITIONS.iter().map(|&(a, b)| partial(r, a, b, &one, s)).collect() };
    let identity = |s: &S| {
        let rk = |a| partial(r, a, 0, &one, s);
        rk(0) - (s.clone() * rk(1) - rk(2) / S::from_i64(2) + s.clone() * rk(3) / S::from_i64(6))
    };
    let (p, m) = (S::one(), -S::one());
    ClosednessReport { at_plus: eval_at(&p), at_minus: eval_at(&m), identity: [identity(&p), identity(&m)] }
}

/// `R - (s R_k - R_kk/2 + s R_kkk/6)` at `(1, s)` for a monomial `k^m`.
fn identity_weight<S: Scalar>(m: usize, s: &S) -> S {
    let f = |a: usize| {
        if m < a {
            S::zero()
        } else {
            S::from_i64(falling(m, a)) * s.powi((m - a) as i32)
        }
    };
    f(0) - (s.clone() * f(1) - f(2) / S::from_i64(2) + s.clone() * f(3) / S::from_i64(6))
}

/// The dependency identity for `R` built from unscaled `(x, y, z)` Lax
/// matrices, with `I_0` kept formal. The scaled coefficient of `k^m` is
/// `I_0^{m-4}` times the unscaled one, so the residual is a Laurent
/// polynomial in `I_0`; with `I_0^{-4} = prod x^2 y z` it reduces to the
/// entries returned here (constant part, then the `I_0^{-3}, I_0^{-2},
/// I_0^{-1}` parts), for `s = 1` and `s = -1`. All vanish iff the identity
/// holds on every branch of `I_0`.
pub fn identity_residuals_formal<S: Scalar>(r: &SpectralFunction<S>, weight: &S) -> [Vec<S>; 2] {
    let one = S::one();
    let at = |s: S| {
        let mut parts = vec![S::zero(); 5];
        for (m, c) in r.coeffs.iter().enumerate().take(5) {
            parts[4 - m] = c.eval(&one) * identity_weight(m, &s);
        }
        // parts[e] multiplies I_0^{-e}.
        vec![parts[4].clone() * weight.clone() + parts[0].clone(), parts[3].clone(), parts[2].clone(), parts[1].clone()]
    };
    [at(S::one()), at(-S::one())]
}

/// Linear parts of the ten conditions at `(1, s)` as a 10 x 3(q+1) matrix
/// over `(I_0..I_q, J_0..J_q, G_0..G_q)`.
pub fn condition_matrix<S: Scalar>(n: usize, s: &S) -> Matrix<S> {
    let q = (n / 2) as i32;
    let ni = n as i32;
    let mut basis: Vec<SpectralFunction<S>> = Vec::new();
    let unit = |m: usize, e: i32, sign: S| {
        let mut coeffs = vec![LaurentPoly::zero(); 5];
        coeffs[m] = LaurentPoly::monomial(sign, e);
        SpectralFunction { n, coeffs, mode: SpectralMode::Abc, branch_ambiguous: false }
    };
    for j in 0..=q {
        basis.push(unit(1, j - 2 * ni, -S::one()));
    }
    for j in 0..=q {
        basis.push(unit(2, j - q - ni, S::one()));
    }
    for j in 0..=q {
        basis.push(unit(3, j - ni, -S::one()));
    }
    let one = S::one();
    QUADRUPLE_CONDITIONS
        .iter()
        .map(|&(a, b)| basis.iter().map(|f| partial(f, a, b, &one, s)).collect())
        .collect()
}

/// Rank of the linear conditions at `(1, s)`.
pub fn condition_rank<S: Scalar>(n: usize, s: &S) -> usize {
    linalg::rank(&condition_matrix(n, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::xyz_from_abc;
    use crate::random::{random_coeffs, seeded};

    fn q(a: i64) -> Rational {
        Rational::from_integer(a.into())
    }

    fn random_abc(n: usize, seed: u64) -> Abc3<Rational> {
        let mut rng = seeded(seed);
        Abc3::from_coeffs(&random_coeffs::<Rational>(3, n, &mut rng)).unwrap()
    }

    #[test]
    fn support_and_constant_term() {
        let abc = random_abc(7, 1);
        let r = spectral_function_abc(&abc);
        assert_eq!(r.coeffs[0], LaurentPoly::monomial(q(1), -14));
        let ints = extract_integrals(&r).unwrap();
        assert_eq!(ints.i[0], abc.prod_a());
        assert_eq!(ints.g[0], abc.prod_c());
    }

    #[test]
    fn abc_and_xyz_modes_agree_for_odd_n() {
        let abc = random_abc(7, 2);
        let xyz = xyz_from_abc(&abc).unwrap();
        let r_abc = spectral_function_abc(&abc);
        let r_xyz = spectral_function_xyz(&xyz, Some(abc.prod_a())).unwrap();
        assert_eq!(r_abc.coeffs, r_xyz.coeffs);
        let (i0, _) = i0_from_xyz(&xyz).unwrap();
        assert_eq!(i0, abc.prod_a().abs());
    }

    #[test]
    fn base_point_independence() {
        let abc = random_abc(5, 3);
        let laxes: Vec<_> = (0..5).map(|j| lax_abc(&abc.a[j], &abc.b[j], &abc.c[j])).collect();
        let r0 = char_poly(&monodromy(&laxes, 0));
        for base in 1..5 {
            assert_eq!(char_poly(&monodromy(&laxes, base)), r0);
        }
    }

    #[test]
    fn dependency_identity_and_negative_control() {
        let abc = random_abc(7, 4);
        let mut r = spectral_function_abc(&abc);
        let rep = closedness_residuals(&r);
        assert!(rep.identity.iter().all(Scalar::is_zero));
        assert!(!rep.quadruple_point());
        r.coeffs[0] = &r.coeffs[0] + &LaurentPoly::monomial(q(1), -3);
        let rep = closedness_residuals(&r);
        assert!(!Scalar::is_zero(&rep.identity[0]));
    }

    #[test]
    fn formal_identity_for_even_n() {
        let poly = crate::random::random_twisted_polygon::<Rational>(3, 6, &mut seeded(12));
        let xyz = crate::coords::xyz_geometric(&poly).unwrap();
        let mut r = spectral_function_xyz_unscaled(&xyz).unwrap();
        let w = xyz.weight_product();
        assert!(identity_residuals_formal(&r, &w).iter().flatten().all(Scalar::is_zero));
        // Only the k^0 and k^4 coefficients carry weight in the identity.
        r.coeffs[0] = &r.coeffs[0] + &LaurentPoly::monomial(q(1), -6);
        assert!(!identity_residuals_formal(&r, &w).iter().flatten().all(Scalar::is_zero));
    }

    #[test]
    fn condition_rank_is_nine() {
        assert_eq!(condition_rank::<Rational>(7, &q(1)), 9);
        assert_eq!(condition_rank::<Rational>(7, &q(-1)), 9);
    }

    #[test]
    fn branch_count_small_n() {
        let abc = random_abc(5, 5);
        let bc = finite_branch_count(&spectral_function_abc(&abc)).unwrap();
        assert_eq!(bc.nu_fin, 15);
        assert_eq!(bc.genus, expected_genus(5));
    }
}
