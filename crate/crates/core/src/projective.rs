//! Homogeneous-coordinate geometry: points and hyperplanes of projective
//! d-space, twisted polygons, their normalized lifts and the coefficients
//! of the linear recurrence satisfied by a lift.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::linalg::{self, dot, from_columns, Matrix};
use crate::scalar::{max_abs, Scalar};

/// Relative tolerance for the float backend's lift consistency checks.
pub const FLOAT_LIFT_TOL: f64 = 1e-9;

/// A point of projective d-space, as a nonzero (d+1)-vector.
#[derive(Debug, Clone)]
pub struct ProjPoint<S: Scalar> {
    pub coords: Vec<S>,
}

/// A hyperplane of projective d-space, as a nonzero covector.
#[derive(Debug, Clone)]
pub struct Hyperplane<S: Scalar> {
    pub covector: Vec<S>,
}

/// True when `u` and `v` are proportional (all 2x2 minors vanish).
pub fn proportional<S: Scalar>(u: &[S], v: &[S]) -> bool {
    let scale = max_abs(u) * max_abs(v);
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            let m = u[i].clone() * v[j].clone() - u[j].clone() * v[i].clone();
            if !m.negligible(scale) {
                return false;
            }
        }
    }
    true
}

impl<S: Scalar> ProjPoint<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

impl<S: Scalar> PartialEq for ProjPoint<S> {
    fn eq(&self, other: &Self) -> bool {
        self.coords.len() == other.coords.len() && proportional(&self.coords, &other.coords)
    }
}

impl<S: Scalar> Hyperplane<S> {
    pub fn new(covector: Vec<S>) -> Self {
        Self { covector }
    }

    pub fn contains(&self, p: &ProjPoint<S>) -> bool {
        let v = dot(&self.covector, &p.coords);
        v.negligible(max_abs(&self.covector) * max_abs(&p.coords))
    }

    /// Incidence value `covector . point` (exactly zero on incidence for
    /// rationals).
    pub fn pairing(&self, p: &ProjPoint<S>) -> S {
        dot(&self.covector, &p.coords)
    }
}

impl<S: Scalar> PartialEq for Hyperplane<S> {
    fn eq(&self, other: &Self) -> bool {
        self.covector.len() == other.covector.len() && proportional(&self.covector, &other.covector)
    }
}

/// One period of a twisted n-gon in projective d-space together with its
/// monodromy: `v_{k+n} = M v_k`.
#[derive(Debug, Clone)]
pub struct TwistedPolygon<S: Scalar> {
    pub d: usize,
    pub n: usize,
    pub vertices: Vec<ProjPoint<S>>,
    pub monodromy: Matrix<S>,
    monodromy_inv: Matrix<S>,
}

impl<S: Scalar> TwistedPolygon<S> {
    pub fn new(vertices: Vec<Vec<S>>, monodromy: Matrix<S>) -> Result<Self> {
        let n = vertices.len();
        if n == 0 {
            return Err(Error::InvalidInput("polygon needs at least one vertex".into()));
        }
        let dim = vertices[0].len();
        if dim < 2 {
            return Err(Error::InvalidInput("vertices need at least 2 coordinates".into()));
        }
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidInput("vertices have inconsistent dimension".into()));
        }
        if monodromy.len() != dim || monodromy.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidInput(format!("monodromy must be {dim}x{dim}")));
        }
        if let Some(i) = vertices.iter().position(|v| linalg::is_null_vec(v, max_abs(v))) {
            return Err(Error::InvalidInput(format!("vertex {i} is the zero vector")));
        }
        let det = linalg::det(&monodromy);
        let det_ok = if S::EXACT {
            det == S::one()
        } else {
            (det.to_f64() - 1.0).abs() <= FLOAT_LIFT_TOL * linalg::hadamard_bound(&monodromy).max(1.0)
        };
        if !det_ok {
            return Err(Error::InvalidInput(format!("monodromy determinant is {det}, expected 1")));
        }
        let monodromy_inv = linalg::inverse(&monodromy).ok_or(Error::SingularMatrix)?;
        Ok(Self {
            d: dim - 1,
            n,
            vertices: vertices.into_iter().map(ProjPoint::new).collect(),
            monodromy,
            monodromy_inv,
        })
    }

    /// Closed polygon (identity monodromy).
    pub fn closed(vertices: Vec<Vec<S>>) -> Result<Self> {
        let dim = vertices.first().map_or(0, |v| v.len());
        Self::new(vertices, linalg::identity(dim))
    }

    pub fn monodromy_inverse(&self) -> &Matrix<S> {
        &self.monodromy_inv
    }

    /// Homogeneous coordinates of `v_k` for any integer `k`, extended
    /// through the monodromy.
    pub fn vertex(&self, k: i64) -> Vec<S> {
        let n = self.n as i64;
        let (q, r) = k.div_mod_floor(&n);
        let mut v = self.vertices[r as usize].coords.clone();
        let m = if q >= 0 { &self.monodromy } else { &self.monodromy_inv };
        for _ in 0..q.unsigned_abs() {
            v = linalg::mat_vec(m, &v);
        }
        v
    }

    pub fn point(&self, k: i64) -> ProjPoint<S> {
        ProjPoint::new(self.vertex(k))
    }

    /// `det|v_j, ..., v_{j+d}|` of the raw (unnormalized) coordinates.
    pub fn consecutive_det(&self, j: i64) -> S {
        let cols: Vec<Vec<S>> = (0..=self.d as i64).map(|m| self.vertex(j + m)).collect();
        linalg::det(&from_columns(&cols))
    }

    /// Every d+1 cyclically consecutive vertices are independent.
    pub fn in_general_position(&self) -> bool {
        (0..self.n as i64).all(|j| {
            let cols: Vec<Vec<S>> = (0..=self.d as i64).map(|m| self.vertex(j + m)).collect();
            linalg::rank(&from_columns(&cols)) == self.d + 1
        })
    }

    /// Apply `g` to every vertex and conjugate the monodromy: `g M g^{-1}`.
    pub fn transform(&self, g: &Matrix<S>) -> Result<Self> {
        let ginv = linalg::inverse(g).ok_or(Error::SingularMatrix)?;
        let m = linalg::mat_mul(&linalg::mat_mul(g, &self.monodromy), &ginv);
        let verts = self.vertices.iter().map(|v| linalg::mat_vec(g, &v.coords)).collect();
        Self::new(verts, m)
    }

    /// Relabel vertices: the result's vertex `k` is this polygon's `k + shift`.
    pub fn shifted(&self, shift: i64) -> Self {
        let verts = (0..self.n as i64).map(|k| self.point(k + shift)).collect();
        Self {
            d: self.d,
            n: self.n,
            vertices: verts,
            monodromy: self.monodromy.clone(),
            monodromy_inv: self.monodromy_inv.clone(),
        }
    }
}

/// Coefficients of the recurrence
/// `V_{j+d+1} = a_{j,d} V_{j+d} + ... + a_{j,1} V_{j+1} + (-1)^d V_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeq<S: Scalar> {
    pub d: usize,
    pub n: usize,
    /// `a[j][k - 1] = a_{j,k}` for `0 <= j < n`, `1 <= k <= d`.
    pub a: Vec<Vec<S>>,
    /// Four-periodic twist `t_0..t_3` of a quasiperiodic 3D sequence;
    /// `None` means strictly n-periodic.
    pub quasi: Option<[S; 4]>,
}

impl<S: Scalar> CoeffSeq<S> {
    pub fn periodic(d: usize, a: Vec<Vec<S>>) -> Result<Self> {
        if a.is_empty() || a.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidInput(format!("coefficient rows must have length {d}")));
        }
        Ok(Self { d, n: a.len(), a, quasi: None })
    }

    /// Constant coefficients `a_{j,k} = row[k-1]` for every j.
    pub fn constant(n: usize, row: Vec<S>) -> Self {
        Self { d: row.len(), n, a: vec![row; n], quasi: None }
    }

    pub fn get(&self, j: usize, k: usize) -> &S {
        &self.a[j][k - 1]
    }
}

/// A lift of a twisted polygon: vectors `V_0..V_{n-1}` with
/// `V_{j+n} = t_j M V_j` (`t = 1` unless a quasiperiodic twist is
/// recorded) and all consecutive determinants equal to `det_value`.
#[derive(Debug, Clone)]
pub struct LiftedPolygon<S: Scalar> {
    pub d: usize,
    pub n: usize,
    pub vectors: Vec<Vec<S>>,
    pub monodromy: Matrix<S>,
    /// Common value of `det|V_j, ..., V_{j+d}|`; equals 1 whenever the
    /// backend has the needed (d+1)-th root.
    pub det_value: S,
    pub twist: Option<[S; 4]>,
}

impl<S: Scalar> LiftedPolygon<S> {
    pub fn vector(&self, k: i64) -> Vec<S> {
        let n = self.n as i64;
        let (q, r) = k.div_mod_floor(&n);
        let mut v = self.vectors[r as usize].clone();
        if q >= 0 {
            for step in 0..q {
                let idx = r + step * n;
                v = linalg::mat_vec(&self.monodromy, &v);
                if let Some(t) = &self.twist {
                    v = linalg::scale_vec(&v, &t[idx.rem_euclid(4) as usize]);
                }
            }
        } else {
            let minv = linalg::inverse(&self.monodromy).expect("monodromy is invertible");
            for step in 1..=q.unsigned_abs() as i64 {
                let idx = r - step * n;
                v = linalg::mat_vec(&minv, &v);
                if let Some(t) = &self.twist {
                    v = linalg::scale_vec(&v, &(S::one() / t[idx.rem_euclid(4) as usize].clone()));
                }
            }
        }
        v
    }

    pub fn consecutive_det(&self, j: i64) -> S {
        let cols: Vec<Vec<S>> = (0..=self.d as i64).map(|m| self.vector(j + m)).collect();
        linalg::det(&from_columns(&cols))
    }

    pub fn to_polygon(&self) -> Result<TwistedPolygon<S>> {
        TwistedPolygon::new(self.vectors.clone(), self.monodromy.clone())
    }
}

fn first_nonzero<S: Scalar>(v: &[S]) -> Option<&S> {
    let scale = max_abs(v);
    v.iter().find(|x| !x.negligible(scale))
}

/// Lift a twisted polygon so that all consecutive (d+1)-determinants are
/// equal, normalized to 1 when a real root is available in the backend.
///
/// Sign rule: when the normalization leaves a global sign free (d+1 even),
/// the first nonzero coordinate of `V_0` is made positive. When no root
/// exists, `V_0` is scaled so that its first nonzero coordinate is 1.
pub fn lift_polygon<S: Scalar>(poly: &TwistedPolygon<S>) -> Result<LiftedPolygon<S>> {
    let (d, n) = (poly.d, poly.n);
    if n.gcd(&(d + 1)) != 1 {
        return Err(Error::GcdObstruction { n, d });
    }
    let dets: Vec<S> = (0..n as i64).map(|j| poly.consecutive_det(j)).collect();
    for (j, dj) in dets.iter().enumerate() {
        let cols: Vec<Vec<S>> = (0..=d as i64).map(|m| poly.vertex(j as i64 + m)).collect();
        let scale: f64 = cols.iter().map(|c| max_abs(c)).product();
        if dj.negligible(scale) {
            return Err(Error::DegenerateInput { index: j as i64 });
        }
    }
    // Equal consecutive determinants force t_{j+d+1} = t_j D_j / D_{j+1};
    // stepping by d+1 visits every residue because gcd(n, d+1) = 1.
    let mut ratio: Vec<Option<S>> = vec![None; n];
    ratio[0] = Some(S::one());
    let mut j = 0usize;
    for _ in 0..n - 1 {
        let next = (j + d + 1) % n;
        let r = ratio[j].clone().unwrap() * dets[j].clone() / dets[(j + 1) % n].clone();
        ratio[next] = Some(r);
        j = next;
    }
    let ratio: Vec<S> = ratio.into_iter().map(|r| r.expect("all residues visited")).collect();
    let mut vectors: Vec<Vec<S>> = (0..n)
        .map(|j| linalg::scale_vec(&poly.vertices[j].coords, &ratio[j]))
        .collect();
    let kappa = (0..=d).fold(dets[0].clone(), |acc, m| acc * ratio[m % n].clone());

    let (scale, det_value) = match (S::one() / kappa.clone()).nth_root(d as u32 + 1) {
        Some(t0) => {
            let mut t0 = t0;
            if (d + 1) % 2 == 0 {
                let lead = first_nonzero(&vectors[0]).cloned().unwrap_or_else(S::one);
                if (lead * t0.clone()).is_negative() {
                    t0 = -t0;
                }
            }
            (t0, S::one())
        }
        None => {
            let lead = first_nonzero(&vectors[0]).cloned().unwrap_or_else(S::one);
            let s = S::one() / lead;
            let dv = kappa.clone() * s.powi(d as i32 + 1);
            (s, dv)
        }
    };
    for v in vectors.iter_mut() {
        *v = linalg::scale_vec(v, &scale);
    }
    Ok(LiftedPolygon {
        d,
        n,
        vectors,
        monodromy: poly.monodromy.clone(),
        det_value,
        twist: None,
    })
}

/// Express `V_{j+d+1}` in the basis `V_j..V_{j+d}` for one period.
pub fn coefficients_from_lift<S: Scalar>(lift: &LiftedPolygon<S>) -> Result<CoeffSeq<S>> {
    let (d, n) = (lift.d, lift.n);
    let expected = if d % 2 == 0 { S::one() } else { -S::one() };
    let mut a = Vec::with_capacity(n);
    for j in 0..n as i64 {
        let basis: Vec<Vec<S>> = (0..=d as i64).map(|m| lift.vector(j + m)).collect();
        let target = lift.vector(j + d as i64 + 1);
        let x = linalg::solve(&from_columns(&basis), &target)
            .ok_or(Error::DegenerateInput { index: j })?;
        let consistent = if S::EXACT {
            x[0] == expected
        } else {
            (x[0].clone() - expected.clone()).to_f64().abs() <= FLOAT_LIFT_TOL * (1.0 + max_abs(&x))
        };
        if !consistent {
            return Err(Error::InconsistentLift { index: j });
        }
        a.push(x[1..].to_vec());
    }
    Ok(CoeffSeq { d, n, a, quasi: lift.twist.clone() })
}

/// Run the recurrence from the standard basis `V_0..V_d = e_1..e_{d+1}` and
/// read off the monodromy from `V_n..V_{n+d}` (divided by the twist when
/// the sequence is quasiperiodic).
pub fn reconstruct_from_coeffs<S: Scalar>(coeffs: &CoeffSeq<S>) -> Result<LiftedPolygon<S>> {
    let (d, n) = (coeffs.d, coeffs.n);
    if coeffs.quasi.is_some() && d != 3 {
        return Err(Error::InvalidInput("quasiperiodic twist is only defined for d = 3".into()));
    }
    let sign = if d % 2 == 0 { S::one() } else { -S::one() };
    let mut vs: Vec<Vec<S>> = linalg::identity(d + 1);
    for j in 0..n {
        let mut next = linalg::scale_vec(&vs[j], &sign);
        for k in 1..=d {
            next = linalg::add_vec(&next, &linalg::scale_vec(&vs[j + k], coeffs.get(j, k)));
        }
        vs.push(next);
    }
    let cols: Vec<Vec<S>> = (0..=d)
        .map(|m| match &coeffs.quasi {
            Some(t) => linalg::scale_vec(&vs[n + m], &(S::one() / t[m % 4].clone())),
            None => vs[n + m].clone(),
        })
        .collect();
    let monodromy = from_columns(&cols);
    let lift = LiftedPolygon {
        d,
        n,
        vectors: vs[..n].to_vec(),
        monodromy,
        det_value: S::one(),
        twist: coeffs.quasi.clone(),
    };
    for j in 0..n as i64 {
        let dj = lift.consecutive_det(j);
        if dj.is_zero() {
            return Err(Error::DegenerateOutput { index: j });
        }
    }
    Ok(lift)
}

/// Projectively equivalent polygon in a balanced frame: with `G` the sum of
/// `v v^T / |v|^2` over one period and `G = L L^T`, vertices go to `L^{-1} v`
/// and the monodromy to `L^{-1} M L`. Needs square roots, so exact backends
/// get the polygon back unchanged.
pub fn balanced_frame<S: Scalar>(poly: &TwistedPolygon<S>) -> Result<TwistedPolygon<S>> {
    let dim = poly.d + 1;
    let mut gram = vec![vec![S::zero(); dim]; dim];
    for v in &poly.vertices {
        let nv = dot(&v.coords, &v.coords);
        for i in 0..dim {
            for j in 0..dim {
                gram[i][j] = gram[i][j].clone() + v.coords[i].clone() * v.coords[j].clone() / nv.clone();
            }
        }
    }
    let mut l = vec![vec![S::zero(); dim]; dim];
    for j in 0..dim {
        let mut diag = gram[j][j].clone();
        for k in 0..j {
            diag = diag - l[j][k].clone() * l[j][k].clone();
        }
        let Some(root) = (!diag.is_negative() && !diag.is_zero()).then(|| diag.nth_root(2)).flatten() else {
            return Ok(poly.clone());
        };
        if S::EXACT {
            return Ok(poly.clone());
        }
        l[j][j] = root.clone();
        for i in j + 1..dim {
            let mut v = gram[i][j].clone();
            for k in 0..j {
                v = v - l[i][k].clone() * l[j][k].clone();
            }
            l[i][j] = v / root.clone();
        }
    }
    let linv = linalg::inverse(&l).ok_or(Error::SingularMatrix)?;
    let verts = poly.vertices.iter().map(|v| linalg::mat_vec(&linv, &v.coords)).collect();
    let m = linalg::mat_mul(&linalg::mat_mul(&linv, &poly.monodromy), &l);
    TwistedPolygon::new(verts, m)
}

/// Hyperplane through d points of projective d-space (generalized cross
/// product of their coordinate vectors).
pub fn hyperplane_span<S: Scalar>(points: &[ProjPoint<S>]) -> Result<Hyperplane<S>> {
    let rows: Vec<Vec<S>> = points.iter().map(|p| p.coords.clone()).collect();
    span_raw(&rows).map(Hyperplane::new).ok_or(Error::DegenerateSpan { index: 0 })
}

/// Intersection point of d hyperplanes.
pub fn intersect<S: Scalar>(planes: &[Hyperplane<S>]) -> Result<ProjPoint<S>> {
    let rows: Vec<Vec<S>> = planes.iter().map(|p| p.covector.clone()).collect();
    span_raw(&rows).map(ProjPoint::new).ok_or(Error::DegenerateIntersection { index: 0 })
}

/// Cofactor vector of `rows` (N-1 vectors in N dimensions), or `None` when
/// they are dependent.
pub(crate) fn span_raw<S: Scalar>(rows: &[Vec<S>]) -> Option<Vec<S>> {
    let dim = rows.first()?.len();
    if rows.len() + 1 != dim {
        return None;
    }
    let h = linalg::cofactor_vector(rows);
    let scale: f64 = rows.iter().map(|r| max_abs(r)).product();
    if linalg::is_null_vec(&h, scale) {
        None
    } else {
        Some(h)
    }
}

/// Coefficients `(l1, l2)` with `p = l1 a + l2 b`, or an error if `p` is off
/// the line through `a` and `b`.
fn decompose<S: Scalar>(a: &[S], b: &[S], p: &[S]) -> Result<(S, S)> {
    let scale = max_abs(a) * max_abs(b);
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let m = a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone();
            if m.negligible(scale) {
                continue;
            }
            let mag = m.to_f64().abs();
            if best.is_none_or(|(_, _, bm)| mag > bm) {
                best = Some((i, j, mag));
            }
            if S::EXACT {
                break;
            }
        }
        if S::EXACT && best.is_some() {
            break;
        }
    }
    let (i, j, _) = best.ok_or(Error::CoincidentPoints)?;
    let det = a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone();
    let l1 = (p[i].clone() * b[j].clone() - p[j].clone() * b[i].clone()) / det.clone();
    let l2 = (a[i].clone() * p[j].clone() - a[j].clone() * p[i].clone()) / det;
    let resid: Vec<S> = (0..a.len())
        .map(|k| p[k].clone() - l1.clone() * a[k].clone() - l2.clone() * b[k].clone())
        .collect();
    if !linalg::is_null_vec(&resid, max_abs(p).max(1e-300) * 1e3) {
        return Err(Error::NotCollinear);
    }
    Ok((l1, l2))
}

/// Cross-ratio `[p1, p2, p3, p4] = (l2 m1 - l1 m2) / (l2 m1)` where
/// `p3 = l1 p1 + l2 p2` and `p4 = m1 p1 + m2 p2`; in an affine parameter
/// this is `(t1 - t2)(t3 - t4) / ((t1 - t3)(t2 - t4))`.
pub fn cross_ratio<S: Scalar>(
    p1: &ProjPoint<S>,
    p2: &ProjPoint<S>,
    p3: &ProjPoint<S>,
    p4: &ProjPoint<S>,
) -> Result<S> {
    cross_ratio_raw(&p1.coords, &p2.coords, &p3.coords, &p4.coords)
}

pub(crate) fn cross_ratio_raw<S: Scalar>(p1: &[S], p2: &[S], p3: &[S], p4: &[S]) -> Result<S> {
    let (l1, l2) = decompose(p1, p2, p3)?;
    let (m1, m2) = decompose(p1, p2, p4)?;
    let den = l2.clone() * m1.clone();
    if den.negligible(max_abs(&[l1.clone(), l2.clone()]) * max_abs(&[m1.clone(), m2.clone()])) {
        return Err(Error::CoincidentPoints);
    }
    Ok((l2 * m1 - l1 * m2) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn qv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn affine(t: i64) -> ProjPoint<Rational> {
        ProjPoint::new(qv(&[1, t]))
    }

    #[test]
    fn cross_ratio_of_affine_parameters() {
        let cr = cross_ratio(&affine(0), &affine(1), &affine(2), &affine(3)).unwrap();
        assert_eq!(cr, Rational::from_ratio(1, 4));
    }

    #[test]
    fn cross_ratio_with_point_at_infinity() {
        // (0, 1, inf, t) evaluates to 1/(1 - t) under the affine formula.
        let inf = ProjPoint::new(qv(&[0, 1]));
        for t in [-3, 2, 5, 7] {
            let cr = cross_ratio(&affine(0), &affine(1), &inf, &affine(t)).unwrap();
            assert_eq!(cr, Rational::from_ratio(1, 1 - t));
        }
    }

    #[test]
    fn cross_ratio_errors() {
        let a = ProjPoint::new(qv(&[1, 0, 0]));
        let b = ProjPoint::new(qv(&[0, 1, 0]));
        let off = ProjPoint::new(qv(&[0, 0, 1]));
        let c = ProjPoint::new(qv(&[1, 1, 0]));
        assert_eq!(cross_ratio(&a, &b, &off, &c), Err(Error::NotCollinear));
        assert_eq!(cross_ratio(&a, &a, &c, &c), Err(Error::CoincidentPoints));
        assert_eq!(cross_ratio(&a, &b, &a, &c), Err(Error::CoincidentPoints));
    }

    #[test]
    fn coordinate_hyperplanes() {
        let e = |i: usize| {
            let mut v = vec![q(0); 4];
            v[i] = q(1);
            ProjPoint::new(v)
        };
        let h = hyperplane_span(&[e(0), e(1), e(2)]).unwrap();
        assert_eq!(h, Hyperplane::new(qv(&[0, 0, 0, 1])));
        let line = hyperplane_span(&[ProjPoint::new(qv(&[1, 0, 0])), ProjPoint::new(qv(&[0, 1, 0]))])
            .unwrap();
        assert_eq!(line, Hyperplane::new(qv(&[0, 0, 1])));
        let planes: Vec<_> = (1..4)
            .map(|i| {
                let mut v = vec![q(0); 4];
                v[i] = q(1);
                Hyperplane::new(v)
            })
            .collect();
        assert_eq!(intersect(&planes).unwrap(), e(0));
        assert_eq!(
            hyperplane_span(&[e(0), e(0), e(2)]).unwrap_err(),
            Error::DegenerateSpan { index: 0 }
        );
    }

    #[test]
    fn gcd_obstruction() {
        let verts: Vec<Vec<Rational>> = (0..8).map(|k| qv(&[1, k, k * k, k * k * k])).collect();
        let poly = TwistedPolygon::closed(verts).unwrap();
        assert_eq!(lift_polygon(&poly).unwrap_err(), Error::GcdObstruction { n: 8, d: 3 });
    }

    #[test]
    fn constant_coefficients_round_trip() {
        let seq = CoeffSeq::constant(7, qv(&[3, 2, 1]));
        let lift = reconstruct_from_coeffs(&seq).unwrap();
        for j in 0..7 {
            assert_eq!(lift.consecutive_det(j), q(1));
        }
        let back = coefficients_from_lift(&lift).unwrap();
        assert_eq!(back, seq);
    }

    #[test]
    fn two_dimensional_constant_monodromy_is_matrix_power() {
        // V_{j+3} = a V_{j+2} + b V_{j+1} + V_j with constant (a, b): the
        // monodromy is the n-th power of the companion matrix.
        let (a, b) = (q(2), q(-1));
        let n = 5;
        let seq = CoeffSeq::constant(n, vec![b.clone(), a.clone()]);
        let lift = reconstruct_from_coeffs(&seq).unwrap();
        let companion = vec![
            vec![q(0), q(0), q(1)],
            vec![q(1), q(0), b.clone()],
            vec![q(0), q(1), a.clone()],
        ];
        let mut power = linalg::identity(3);
        for _ in 0..n {
            power = linalg::mat_mul(&power, &companion);
        }
        assert_eq!(lift.monodromy, power);
    }
}
