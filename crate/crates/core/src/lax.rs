//! Lax matrices with spectral parameter, their monodromy, and the scaling
//! symmetry they are built from.

use crate::coords::{explicit_step, Xyz3};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, PolyMatrix};
use crate::maps::higher_map;
use crate::projective::{balanced_frame, coefficients_from_lift, lift_polygon, reconstruct_from_coeffs, CoeffSeq};
use crate::scalar::Scalar;

fn c<S: Scalar>(v: S) -> LaurentPoly<S> {
    LaurentPoly::constant(v)
}

fn lam<S: Scalar>(v: S, e: i32) -> LaurentPoly<S> {
    LaurentPoly::monomial(v, e)
}

fn at<S: Scalar>(v: &[S], i: i64) -> S {
    v[i.rem_euclid(v.len() as i64) as usize].clone()
}

/// The 3D Lax matrix in `(a, b, c)` coordinates; `det = lambda^{-2}`.
pub fn lax_abc<S: Scalar>(a: &S, b: &S, cc: &S) -> PolyMatrix<S> {
    let z = LaurentPoly::zero;
    let one = S::one;
    PolyMatrix {
        entries: vec![
            vec![lam(cc.clone(), -1), lam(one(), -1), z(), z()],
            vec![c(b.clone()), z(), c(one()), z()],
            vec![lam(a.clone(), -1), z(), z(), lam(one(), -1)],
            vec![c(-one()), z(), z(), z()],
        ],
    }
}

/// Inverse of the 3D `(x, y, z)` Lax matrix:
/// rows `(0,0,0,-1)`, `(lambda x y,0,0,1)`, `(0,z,0,1)`, `(0,0,lambda x,1)`.
pub fn lax_xyz_inverse<S: Scalar>(x: &S, y: &S, zz: &S) -> PolyMatrix<S> {
    let z = LaurentPoly::zero;
    let one = S::one;
    PolyMatrix {
        entries: vec![
            vec![z(), z(), z(), c(-one())],
            vec![lam(x.clone() * y.clone(), 1), z(), z(), c(one())],
            vec![z(), c(zz.clone()), z(), c(one())],
            vec![z(), z(), lam(x.clone(), 1), c(one())],
        ],
    }
}

/// The 3D Lax matrix in `(x, y, z)` coordinates.
pub fn lax_xyz<S: Scalar>(x: &S, y: &S, z: &S) -> Result<PolyMatrix<S>> {
    if (x.clone() * y.clone() * z.clone()).is_zero() {
        return Err(Error::SingularMatrix);
    }
    lax_xyz_inverse(x, y, z).inverse().ok_or(Error::SingularMatrix)
}

fn nz<S: Scalar>(v: S, expr: &'static str, index: usize) -> Result<S> {
    if v.is_zero() {
        Err(Error::SingularStep { expr, index })
    } else {
        Ok(v)
    }
}

/// The gauge matrix `P_i` of the `(x, y, z)` Lax equation at vertex i.
pub fn p_matrix_xyz<S: Scalar>(xyz: &Xyz3<S>, i: i64) -> Result<PolyMatrix<S>> {
    let iu = i.rem_euclid(xyz.n() as i64) as usize;
    let x = |k: i64| at(&xyz.x, k);
    let y = |k: i64| at(&xyz.y, k);
    let z = |k: i64| at(&xyz.z, k);
    let one = S::one;
    let e0 = nz(one() + y(i) + z(i + 1), "1+y_i+z_{i+1}", iu)?;
    let e1 = nz(one() + y(i - 1) + z(i), "1+y_{i-1}+z_i", iu)?;
    let e2 = one() + y(i - 2) + z(i - 1);
    let rho = one() / nz(x(i) * e0.clone(), "x_i(1+y_i+z_{i+1})", iu)?;
    let sigma = x(i - 1) * y(i - 1) * e2.clone()
        / nz(x(i) * z(i - 1) * e1.clone() * e0, "x_i z_{i-1}(1+y_{i-1}+z_i)(1+y_i+z_{i+1})", iu)?;
    let tau = nz(
        x(i) * (one() + y(i - 2) - y(i) * z(i - 1) + z(i + 1) + z(i + 1) * y(i - 2)),
        "tau_i",
        iu,
    )?;
    let theta = e2 / (tau.clone() * e1.clone());
    let zero = LaurentPoly::zero;
    Ok(PolyMatrix {
        entries: vec![
            vec![zero(), c(rho.clone()), zero(), c(-rho.clone())],
            vec![lam(sigma.clone() * (one() + z(i)), 1), c(-rho.clone()), lam(sigma, 1), c(rho)],
            vec![
                c(y(i - 1) * theta.clone()),
                c(z(i - 1) / tau.clone()),
                c(-theta),
                c((one() + y(i - 2)) / tau),
            ],
            vec![lam(-(y(i - 1) / e1.clone()), 1), zero(), lam(one() / e1, 1), zero()],
        ],
    })
}

/// Largest coefficient of `L_{i,t+1} P_{i,t} - P_{i+1,t} L_{i,t}` over all i
/// for a given pair of consecutive states.
pub fn verify_lax_pair<S: Scalar>(xyz_t: &Xyz3<S>, xyz_next: &Xyz3<S>) -> Result<S> {
    let mut worst = S::zero();
    let laxes_t: Vec<PolyMatrix<S>> = (0..xyz_t.n())
        .map(|i| lax_xyz(&xyz_t.x[i], &xyz_t.y[i], &xyz_t.z[i]))
        .collect::<Result<_>>()?;
    let ps: Vec<PolyMatrix<S>> =
        (0..=xyz_t.n() as i64).map(|i| p_matrix_xyz(xyz_t, i)).collect::<Result<_>>()?;
    for i in 0..xyz_t.n() {
        let l_next = lax_xyz(&xyz_next.x[i], &xyz_next.y[i], &xyz_next.z[i])?;
        let lhs = l_next.mul(&ps[i]);
        let rhs = ps[i + 1].mul(&laxes_t[i]);
        worst = S::max_of(worst, lhs.sub(&rhs).max_abs_coeff());
    }
    Ok(worst)
}

/// Lax defect along one step of the explicit map; zero certifies the Lax
/// representation at this state.
pub fn verify_lax<S: Scalar>(xyz: &Xyz3<S>) -> Result<S> {
    let next = explicit_step(xyz)?;
    verify_lax_pair(xyz, &next)
}

/// Inverse Lax matrix in dimension d: top row `(0, ..., 0, (-1)^d)`, the
/// diagonal block `D(lambda)` below it, and last column `a_{j,1..d}`.
pub fn lax_general_inverse<S: Scalar>(d: usize, row: &[S]) -> PolyMatrix<S> {
    let mut m = PolyMatrix::zeros(d + 1);
    let sign = if d.is_multiple_of(2) { S::one() } else { -S::one() };
    m.set(0, d, c(sign));
    for k in 0..d {
        let has_lambda = if d % 2 == 1 { k % 2 == 0 } else { k % 2 == 1 };
        m.set(k + 1, k, lam(S::one(), has_lambda as i32));
        let cur = m.get(k + 1, d).clone();
        m.set(k + 1, d, &cur + &c(row[k].clone()));
    }
    m
}

/// Lax matrix for general d (inverse of `lax_general_inverse`).
pub fn lax_general<S: Scalar>(d: usize, row: &[S]) -> PolyMatrix<S> {
    lax_general_inverse(d, row).inverse().expect("determinant is a monomial")
}

/// `T_i = L_{i+n-1} ... L_{i+1} L_i`.
pub fn monodromy<S: Scalar>(laxes: &[PolyMatrix<S>], base: usize) -> PolyMatrix<S> {
    let n = laxes.len();
    let mut t = laxes[base % n].clone();
    for step in 1..n {
        t = laxes[(base + step) % n].mul(&t);
    }
    t
}

/// Lax matrices of a periodic coefficient sequence.
pub fn laxes_from_coeffs<S: Scalar>(coeffs: &CoeffSeq<S>) -> Vec<PolyMatrix<S>> {
    coeffs.a.iter().map(|row| lax_general(coeffs.d, row)).collect()
}

/// Lax matrices of the `(x, y, z)` form.
pub fn laxes_from_xyz<S: Scalar>(xyz: &Xyz3<S>) -> Result<Vec<PolyMatrix<S>>> {
    (0..xyz.n()).map(|i| lax_xyz(&xyz.x[i], &xyz.y[i], &xyz.z[i])).collect()
}

/// Power of s applied to `a_{j,k}` by the scaling symmetry.
pub fn scaling_exponent(d: usize, k: usize) -> i32 {
    if d % 2 == 1 {
        (k % 2) as i32
    } else {
        let kappa = (d / 2) as i32;
        let l = k.div_ceil(2) as i32;
        if k % 2 == 1 {
            l - 1 - kappa
        } else {
            l
        }
    }
}

/// The scaling symmetry on recurrence coefficients.
pub fn scaling<S: Scalar>(coeffs: &CoeffSeq<S>, s: &S) -> CoeffSeq<S> {
    let d = coeffs.d;
    let a = coeffs
        .a
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(k0, v)| v.clone() * s.powi(scaling_exponent(d, k0 + 1)))
                .collect()
        })
        .collect();
    CoeffSeq { d, n: coeffs.n, a, quasi: coeffs.quasi.clone() }
}

/// The higher pentagram map acting on coefficient sequences
/// (`gcd(n, d+1) = 1`). Float inputs are moved to a balanced frame first.
pub fn pentagram_on_coeffs<S: Scalar>(coeffs: &CoeffSeq<S>) -> Result<CoeffSeq<S>> {
    let poly = balanced_frame(&reconstruct_from_coeffs(coeffs)?.to_polygon()?)?;
    let img = higher_map(&poly)?;
    coefficients_from_lift(&lift_polygon(&img)?)
}

/// Largest relative deviation between `T(S_s(c))` and `S_s(T(c))`,
/// coefficient by coefficient.
pub fn scaling_invariance_defect<S: Scalar>(coeffs: &CoeffSeq<S>, s: &S) -> Result<S> {
    let lhs = pentagram_on_coeffs(&scaling(coeffs, s))?;
    let rhs = scaling(&pentagram_on_coeffs(coeffs)?, s);
    let mut worst = S::zero();
    for (r1, r2) in lhs.a.iter().zip(&rhs.a) {
        for (u, v) in r1.iter().zip(r2) {
            let diff = (u.clone() - v.clone()).abs();
            let dev = if S::EXACT { diff } else { diff / (S::one() + v.abs()) };
            worst = S::max_of(worst, dev);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::{xyz_from_abc, Abc3};
    use crate::random::{random_coeffs, seeded};
    use crate::scalar::Rational;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from_ratio(a, b)
    }

    fn random_xyz(n: usize, seed: u64) -> Xyz3<Rational> {
        let mut rng = seeded(seed);
        let abc = Abc3::from_coeffs(&random_coeffs::<Rational>(3, n, &mut rng)).unwrap();
        xyz_from_abc(&abc).unwrap()
    }

    #[test]
    fn abc_lax_determinant_and_inverse() {
        let l = lax_abc(&q(1, 1), &q(1, 1), &q(1, 1));
        assert_eq!(l.det(), LaurentPoly::monomial(q(1, 1), -2));
        let (a, b, cc) = (q(2, 3), q(-5, 7), q(4, 1));
        let l = lax_abc(&a, &b, &cc);
        assert_eq!(l.inverse().unwrap(), lax_general_inverse(3, &[cc.clone(), b.clone(), a.clone()]));
        assert_eq!(lax_general(3, &[cc.clone(), b.clone(), a.clone()]), l);
    }

    #[test]
    fn abc_lax_from_scaled_companion_matrix() {
        let (a, b, cc, s) = (q(2, 3), q(-5, 7), q(4, 1), q(3, 2));
        let n_s = [vec![q(0, 1), q(0, 1), q(0, 1), q(-1, 1)],
            vec![q(1, 1), q(0, 1), q(0, 1), s.clone() * cc.clone()],
            vec![q(0, 1), q(1, 1), q(0, 1), b.clone()],
            vec![q(0, 1), q(0, 1), q(1, 1), s.clone() * a.clone()]];
        let g = [q(1, 1), s.clone(), q(1, 1), s.clone()];
        let lam = q(1, 1) / (s.clone() * s.clone());
        let l_inv = lax_abc(&a, &b, &cc).inverse().unwrap().eval(&lam);
        for i in 0..4 {
            for j in 0..4 {
                let expect = n_s[i][j].clone() * g[j].clone() / (g[i].clone() * s.clone());
                assert_eq!(l_inv[i][j], expect);
            }
        }
    }

    #[test]
    fn xyz_lax_determinant() {
        let (x, y, z) = (q(2, 1), q(3, 5), q(-7, 2));
        let l = lax_xyz(&x, &y, &z).unwrap();
        let w = x.clone() * x * y * z;
        assert_eq!(l.det(), LaurentPoly::monomial(q(1, 1) / w, -2));
        let ones = lax_xyz(&q(1, 1), &q(1, 1), &q(1, 1)).unwrap();
        assert!(ones.max_abs_coeff() > q(0, 1));
    }

    #[test]
    fn xyz_lax_is_a_gauge_of_abc_lax() {
        let mut rng = seeded(11);
        let abc = Abc3::from_coeffs(&random_coeffs::<Rational>(3, 7, &mut rng)).unwrap();
        let xyz = xyz_from_abc(&abc).unwrap();
        let n = abc.n();
        for i in 0..n {
            let h = |k: usize| [q(1, 1), abc.c[k % n].clone(), abc.b[k % n].clone(), abc.a[k % n].clone()];
            let (hi, hn) = (h(i), h(i + 1));
            let l = lax_abc(&abc.a[i], &abc.b[i], &abc.c[i]);
            let lt = lax_xyz(&xyz.x[i], &xyz.y[i], &xyz.z[i]).unwrap();
            let scale = abc.a[(i + 1) % n].clone();
            for r in 0..4 {
                for col in 0..4 {
                    let expect = l.get(r, col).scale(&(scale.clone() * hi[col].clone() / hn[r].clone()));
                    assert_eq!(lt.get(r, col), &expect, "i={i} ({r},{col})");
                }
            }
        }
    }

    #[test]
    fn tau_on_all_ones() {
        let xyz = Xyz3::constant(7, q(1, 1), q(1, 1), q(1, 1));
        let p = p_matrix_xyz(&xyz, 0).unwrap();
        assert_eq!(p.get(2, 1), &LaurentPoly::constant(q(1, 3)));
    }

    #[test]
    fn lax_equation_holds_exactly() {
        for (n, seed) in [(7, 1), (8, 2)] {
            let xyz = random_xyz(n, seed);
            assert!(verify_lax(&xyz).unwrap().is_zero(), "n={n}");
        }
    }

    #[test]
    fn lax_equation_fails_for_perturbed_image() {
        let xyz = random_xyz(7, 3);
        let mut next = explicit_step(&xyz).unwrap();
        next.x[2] = next.x[2].clone() + q(1, 1);
        assert!(!verify_lax_pair(&xyz, &next).unwrap().is_zero());
    }

    #[test]
    fn scaling_exponents() {
        assert_eq!((1..=3).map(|k| scaling_exponent(3, k)).collect::<Vec<_>>(), vec![1, 0, 1]);
        assert_eq!((1..=2).map(|k| scaling_exponent(2, k)).collect::<Vec<_>>(), vec![-1, 1]);
        assert_eq!((1..=4).map(|k| scaling_exponent(4, k)).collect::<Vec<_>>(), vec![-2, 1, -1, 2]);
    }

    #[test]
    fn scaling_by_one_is_identity() {
        let mut rng = seeded(4);
        let c = random_coeffs::<Rational>(4, 7, &mut rng);
        assert_eq!(scaling(&c, &q(1, 1)), c);
    }

    #[test]
    fn monodromy_determinant_and_base_point() {
        let mut rng = seeded(5);
        let coeffs = random_coeffs::<Rational>(3, 5, &mut rng);
        let laxes = laxes_from_coeffs(&coeffs);
        let t0 = monodromy(&laxes, 0);
        assert_eq!(t0.det(), LaurentPoly::monomial(q(1, 1), -10));
        assert_eq!(monodromy(&laxes[..1], 0), laxes[0]);
    }

    #[test]
    fn scaling_commutes_with_map_exactly() {
        let mut rng = seeded(6);
        for (d, n) in [(2, 7), (3, 7)] {
            let coeffs = random_coeffs::<Rational>(d, n, &mut rng);
            let defect = scaling_invariance_defect(&coeffs, &q(2, 1)).unwrap();
            assert!(defect.is_zero(), "d={d}");
        }
    }
}
