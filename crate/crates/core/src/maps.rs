//! Diagonal hyperplanes and the maps built from them: the general maps
//! `T_{p,r}`, the centered higher pentagram map, the correspondences
//! `alpha_p` into the dual space, and a numerical certificate for the
//! duality `T_{p,r} = T_{r,p}^{-1} o Sh`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{self, dot};
use crate::projective::{span_raw, ProjPoint, TwistedPolygon};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapParams {
    pub p: usize,
    pub r: usize,
    /// Centered index convention of the higher map (only for `p = 2, r = 1`).
    pub centered: bool,
}

impl MapParams {
    pub fn new(p: usize, r: usize) -> Self {
        Self { p, r, centered: false }
    }

    /// The higher pentagram map `T`.
    pub fn centered() -> Self {
        Self { p: 2, r: 1, centered: true }
    }
}

/// Covector of the hyperplane through `v_k, v_{k+p}, ..., v_{k+(d-1)p}`.
fn diagonal_covector<S: Scalar>(poly: &TwistedPolygon<S>, k: i64, p: i64) -> Result<Vec<S>> {
    let rows: Vec<Vec<S>> = (0..poly.d as i64).map(|m| poly.vertex(k + m * p)).collect();
    let h = span_raw(&rows).ok_or(Error::DegenerateSpan { index: k })?;
    Ok(if S::EXACT { h } else { S::projective_normalize(&h) })
}

/// The p-diagonal hyperplane `P_k = (v_k, v_{k+p}, ..., v_{k+(d-1)p})`.
pub fn p_diagonal<S: Scalar>(
    poly: &TwistedPolygon<S>,
    k: i64,
    p: i64,
) -> Result<crate::projective::Hyperplane<S>> {
    diagonal_covector(poly, k, p).map(crate::projective::Hyperplane::new)
}

/// Start offset of the centered short-diagonal hyperplane `P_k` and the
/// range of plane indices intersected to form `T v_k`, both relative to k.
///
/// Odd `d = 2m+1`: `P_k` passes through `v_{k-2m}, ..., v_{k+2m}` and
/// `T v_k = P_{k-m} ∩ ... ∩ P_{k+m}`. Even `d = 2m`: `P_k` passes through
/// `v_{k-2m+1}, ..., v_{k+2m-1}` and `T v_k = P_{k-m+1} ∩ ... ∩ P_{k+m}`.
fn centered_offsets(d: usize) -> (i64, i64) {
    let m = (d / 2) as i64;
    if d % 2 == 1 {
        (-2 * m, -m)
    } else {
        (-2 * m + 1, -m + 1)
    }
}

/// Centered short-diagonal hyperplane of the higher map.
pub fn centered_plane<S: Scalar>(
    poly: &TwistedPolygon<S>,
    k: i64,
) -> Result<crate::projective::Hyperplane<S>> {
    let (start, _) = centered_offsets(poly.d);
    diagonal_covector(poly, k + start, 2)
        .map(crate::projective::Hyperplane::new)
        .map_err(|_| Error::DegenerateSpan { index: k })
}

pub fn general_map<S: Scalar>(poly: &TwistedPolygon<S>, params: MapParams) -> Result<TwistedPolygon<S>> {
    if params.p == 0 || params.r == 0 {
        return Err(Error::InvalidInput("p and r must be positive".into()));
    }
    if params.centered && (params.p != 2 || params.r != 1) {
        return Err(Error::InvalidInput("the centered convention is defined for p = 2, r = 1".into()));
    }
    let d = poly.d as i64;
    let (p, r) = (params.p as i64, params.r as i64);
    let (plane_start, first_plane) = if params.centered { centered_offsets(poly.d) } else { (0, 0) };
    let mut planes: HashMap<i64, Vec<S>> = HashMap::new();
    let mut verts = Vec::with_capacity(poly.n);
    for k in 0..poly.n as i64 {
        let mut rows = Vec::with_capacity(poly.d);
        for m in 0..d {
            let idx = k + first_plane + m * r;
            if let std::collections::hash_map::Entry::Vacant(e) = planes.entry(idx) {
                let cov = diagonal_covector(poly, idx + plane_start, p)
                    .map_err(|_| Error::DegenerateSpan { index: idx })?;
                e.insert(cov);
            }
            rows.push(planes[&idx].clone());
        }
        let v = span_raw(&rows).ok_or(Error::DegenerateIntersection { index: k })?;
        // Cofactor magnitudes compound over iterations; keep floats in range.
        verts.push(if S::EXACT { v } else { S::projective_normalize(&v) });
    }
    TwistedPolygon::new(verts, poly.monodromy.clone())
}

/// The higher pentagram map (centered `T_{2,1}`).
pub fn higher_map<S: Scalar>(poly: &TwistedPolygon<S>) -> Result<TwistedPolygon<S>> {
    general_map(poly, MapParams::centered())
}

/// `alpha_p`: the dual twisted polygon whose j-th vertex is the hyperplane
/// `(v_{j+s}, v_{j+s+p}, ..., v_{j+s+(d-1)p})`, `s = offset`. Its monodromy
/// is `M^{-T}`.
pub fn alpha_map_offset<S: Scalar>(poly: &TwistedPolygon<S>, p: i64, offset: i64) -> Result<TwistedPolygon<S>> {
    if p == 0 {
        return Err(Error::InvalidInput("p must be nonzero".into()));
    }
    let verts = (0..poly.n as i64)
        .map(|j| diagonal_covector(poly, j + offset, p).map_err(|_| Error::DegenerateSpan { index: j }))
        .collect::<Result<Vec<_>>>()?;
    let dual_m = linalg::transpose(poly.monodromy_inverse());
    TwistedPolygon::new(verts, dual_m)
}

/// `alpha_p` with the defining hyperplanes starting at the vertex itself.
pub fn alpha_map<S: Scalar>(poly: &TwistedPolygon<S>, p: i64) -> Result<TwistedPolygon<S>> {
    alpha_map_offset(poly, p, 0)
}

/// Symmetric variant for odd d: the hyperplane through
/// `v_{j-mp}, ..., v_j, ..., v_{j+mp}` with `d = 2m+1`.
pub fn alpha_map_centered<S: Scalar>(poly: &TwistedPolygon<S>, p: i64) -> Result<TwistedPolygon<S>> {
    if poly.d.is_multiple_of(2) {
        return Err(Error::InvalidInput("centered alpha needs odd d".into()));
    }
    alpha_map_offset(poly, p, -((poly.d as i64 - 1) / 2) * p)
}

/// `1 - <u,v>^2 / (<u,u><v,v>)`: zero exactly when u and v are proportional,
/// rational for rational inputs.
pub fn projective_distance<S: Scalar>(u: &[S], v: &[S]) -> S {
    // Floats are rescaled first so the squares cannot overflow.
    let (u, v) = if S::EXACT { (u.to_vec(), v.to_vec()) } else { (S::projective_normalize(u), S::projective_normalize(v)) };
    let uv = dot(&u, &v);
    let uu = dot(&u, &u);
    let vv = dot(&v, &v);
    let d = S::one() - uv.clone() * uv / (uu * vv);
    if !S::EXACT && !d.to_f64().is_finite() {
        // A NaN would vanish in a max-fold; report it as maximally distant.
        return S::one();
    }
    if d.is_negative() {
        -d
    } else {
        d
    }
}

/// Largest vertex-wise projective distance between `a` and `b` shifted by
/// `shift` (`a_k` against `b_{k+shift}`).
pub fn shifted_distance<S: Scalar>(a: &TwistedPolygon<S>, b: &TwistedPolygon<S>, shift: i64) -> S {
    (0..a.n as i64)
        .map(|k| projective_distance(&a.vertex(k), &b.vertex(k + shift)))
        .fold(S::zero(), S::max_of)
}

/// Best index shift matching `a` to `b`, searched over `-n..=n`, with its
/// defect. Ties go to the smallest absolute shift.
pub fn best_shift<S: Scalar>(a: &TwistedPolygon<S>, b: &TwistedPolygon<S>) -> (i64, S) {
    best_shift_within(a, b, a.n as i64)
}

/// As `best_shift`, over `-max_shift..=max_shift`. Shifts beyond the period
/// are distinct for twisted polygons.
pub fn best_shift_within<S: Scalar>(a: &TwistedPolygon<S>, b: &TwistedPolygon<S>, max_shift: i64) -> (i64, S) {
    let mut best: Option<(i64, S)> = None;
    let mut shifts: Vec<i64> = (-max_shift..=max_shift).collect();
    shifts.sort_by_key(|s| (s.abs(), *s));
    for s in shifts {
        let dist = shifted_distance(a, b, s);
        if best.as_ref().is_none_or(|(_, bd)| dist < *bd) {
            let exact_hit = dist.is_zero();
            best = Some((s, dist));
            if exact_hit {
                break;
            }
        }
    }
    best.expect("at least one shift")
}

/// Defect of the duality `T_{r,p} o T_{p,r} = Sh`: applies both maps and
/// returns `(defect, shift)` for the best-matching shift of the original.
pub fn duality_defect<S: Scalar>(poly: &TwistedPolygon<S>, p: usize, r: usize) -> Result<(S, i64)> {
    let img = general_map(poly, MapParams::new(p, r))?;
    let back = general_map(&img, MapParams::new(r, p))?;
    // Each map reaches (d - 1)(p + r) indices ahead, which bounds the shift.
    let reach = 2 * (poly.d as i64 - 1) * (p + r) as i64;
    let (shift, defect) = best_shift_within(&back, poly, reach.max(poly.n as i64));
    Ok((defect, shift))
}

/// Projective equality of two polygons vertex by vertex (no shift).
pub fn same_polygon<S: Scalar>(a: &TwistedPolygon<S>, b: &TwistedPolygon<S>) -> bool {
    a.n == b.n && (0..a.n).all(|k| ProjPoint::new(a.vertex(k as i64)) == ProjPoint::new(b.vertex(k as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_closed_polygon, random_twisted_polygon, seeded};
    use crate::scalar::Rational;

    #[test]
    fn one_dimensional_map_is_identity() {
        let mut rng = seeded(3);
        let poly = random_twisted_polygon::<Rational>(1, 5, &mut rng);
        let img = higher_map(&poly).unwrap();
        assert!(same_polygon(&img, &poly));
    }

    #[test]
    fn equal_strides_give_a_shift() {
        let mut rng = seeded(4);
        for d in 2..=3 {
            let poly = random_twisted_polygon::<Rational>(d, 7, &mut rng);
            for p in 1..=3usize {
                let img = general_map(&poly, MapParams::new(p, p)).unwrap();
                let (shift, defect) = best_shift(&img, &poly);
                assert!(defect.is_zero(), "d={d} p={p}");
                assert_eq!(shift, ((d - 1) * p) as i64);
            }
        }
    }

    #[test]
    fn short_diagonal_plane_in_three_dimensions() {
        let mut rng = seeded(5);
        let poly = random_twisted_polygon::<Rational>(3, 7, &mut rng);
        let h = centered_plane(&poly, 4).unwrap();
        for k in [2, 4, 6] {
            assert!(dot(&h.covector, &poly.vertex(k)).is_zero());
        }
        let wrap = centered_plane(&poly, 7).unwrap();
        for k in [5, 7, 9] {
            assert!(dot(&wrap.covector, &poly.vertex(k)).is_zero());
        }
    }

    #[test]
    fn alpha_squared_is_a_shift() {
        let mut rng = seeded(6);
        for (d, n) in [(2, 7), (3, 7), (4, 9)] {
            let poly = random_twisted_polygon::<Rational>(d, n, &mut rng);
            for p in 1..=2 {
                let twice = alpha_map(&alpha_map(&poly, p).unwrap(), p).unwrap();
                let (shift, defect) = best_shift(&twice, &poly);
                assert!(defect.is_zero(), "d={d} p={p}");
                assert_eq!(shift, (d as i64 - 1) * p);
            }
        }
    }

    #[test]
    fn alpha_beta_compose_to_higher_map() {
        let mut rng = seeded(7);
        let poly = random_closed_polygon::<Rational>(3, 8, &mut rng);
        let beta = alpha_map_centered(&poly, 2).unwrap();
        let composed = alpha_map_centered(&beta, 1).unwrap();
        assert!(same_polygon(&composed, &higher_map(&poly).unwrap()));
    }

    #[test]
    fn projective_distance_is_zero_iff_proportional() {
        let u: Vec<Rational> = [1, 2, 3].iter().map(|&v| Rational::from_i64(v)).collect();
        let v = linalg::scale_vec(&u, &Rational::from_ratio(-5, 3));
        assert!(projective_distance(&u, &v).is_zero());
        let w: Vec<Rational> = [1, 2, 4].iter().map(|&v| Rational::from_i64(v)).collect();
        assert!(!projective_distance(&u, &w).is_zero());
    }
}
