//! Coordinates on twisted polygons and the closed-form dynamics in them.
//!
//! In 3D the lift satisfies `V_{j+4} = a_j V_{j+3} + b_j V_{j+2} + c_j V_{j+1} - V_j`
//! (`a_j = a_{j,3}`, `b_j = a_{j,2}`, `c_j = a_{j,1}`). For odd n the triples
//! are periodic coordinates; for any n the gauge-invariant
//! `x_j = b_{j+1}/(a_j a_{j+1})`, `y_j = a_j/(b_{j+1} c_j)`,
//! `z_j = c_{j+1}/(a_{j+1} b_j)` are coordinates on which the map is local.
//! In 2D the corner cross-ratios `(x_i, y_i)` play the same role.

use crate::error::{Error, Result};
use crate::linalg::{self, dot, from_columns};
use crate::maps::alpha_map_centered;
use crate::projective::{
    coefficients_from_lift, cross_ratio_raw, lift_polygon, reconstruct_from_coeffs, span_raw, CoeffSeq,
    TwistedPolygon,
};
use crate::scalar::{max_abs, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Abc3<S: Scalar> {
    pub a: Vec<S>,
    pub b: Vec<S>,
    pub c: Vec<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Xyz3<S: Scalar> {
    pub x: Vec<S>,
    pub y: Vec<S>,
    pub z: Vec<S>,
}

/// Ratios `alpha = t_0/t_3`, `beta = t_0/t_2`, `gamma = t_0/t_1` of the
/// four-periodic twist of a quasiperiodic sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiData<S: Scalar> {
    pub alpha: S,
    pub beta: S,
    pub gamma: S,
}

/// A 3D quasiperiodic sequence: one period of `(a, b, c)` plus the twist
/// `t_0..t_3` with `a_{j+n} = a_j t_j / t_{j+3}`, `b_{j+n} = b_j t_j / t_{j+2}`,
/// `c_{j+n} = c_j t_j / t_{j+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiSeq<S: Scalar> {
    pub abc: Abc3<S>,
    pub t: [S; 4],
}

/// Projective invariants carried by the twist.
#[derive(Debug, Clone, PartialEq)]
pub enum QuasiInvariants<S: Scalar> {
    /// Odd n: the twist can be gauged away entirely.
    Periodic,
    /// `n = 4p + 2`: only `alpha * gamma / beta` is invariant.
    Single { alpha_gamma_over_beta: S },
    /// `n = 4p`: all three ratios are invariant.
    Full(QuasiData<S>),
}

/// 2D corner cross-ratio coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Xy2<S: Scalar> {
    pub x: Vec<S>,
    pub y: Vec<S>,
}

fn at<S: Scalar>(v: &[S], i: i64) -> &S {
    &v[i.rem_euclid(v.len() as i64) as usize]
}

impl<S: Scalar> Abc3<S> {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn constant(n: usize, a: S, b: S, c: S) -> Self {
        Self { a: vec![a; n], b: vec![b; n], c: vec![c; n] }
    }

    pub fn to_coeffs(&self) -> CoeffSeq<S> {
        let a = (0..self.n())
            .map(|j| vec![self.c[j].clone(), self.b[j].clone(), self.a[j].clone()])
            .collect();
        CoeffSeq { d: 3, n: self.n(), a, quasi: None }
    }

    pub fn from_coeffs(coeffs: &CoeffSeq<S>) -> Result<Self> {
        if coeffs.d != 3 {
            return Err(Error::InvalidInput(format!("expected d = 3, got {}", coeffs.d)));
        }
        Ok(Self {
            a: coeffs.a.iter().map(|r| r[2].clone()).collect(),
            b: coeffs.a.iter().map(|r| r[1].clone()).collect(),
            c: coeffs.a.iter().map(|r| r[0].clone()).collect(),
        })
    }

    /// `a_0 a_1 ... a_{n-1}`.
    pub fn prod_a(&self) -> S {
        self.a.iter().fold(S::one(), |acc, v| acc * v.clone())
    }

    pub fn prod_c(&self) -> S {
        self.c.iter().fold(S::one(), |acc, v| acc * v.clone())
    }
}

impl<S: Scalar> Xyz3<S> {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn constant(n: usize, x: S, y: S, z: S) -> Self {
        Self { x: vec![x; n], y: vec![y; n], z: vec![z; n] }
    }

    /// `prod x_i^2 y_i z_i`, equal to `(prod a_i)^{-4}` for odd n.
    pub fn weight_product(&self) -> S {
        (0..self.n()).fold(S::one(), |acc, i| {
            acc * self.x[i].clone() * self.x[i].clone() * self.y[i].clone() * self.z[i].clone()
        })
    }

    /// Shift indices: entry i of the result is entry `i + shift` here.
    pub fn shifted(&self, shift: i64) -> Self {
        let sh = |v: &[S]| (0..v.len() as i64).map(|i| at(v, i + shift).clone()).collect();
        Self { x: sh(&self.x), y: sh(&self.y), z: sh(&self.z) }
    }
}

impl<S: Scalar> QuasiSeq<S> {
    pub fn n(&self) -> usize {
        self.abc.n()
    }

    pub fn periodic(abc: Abc3<S>) -> Self {
        Self { abc, t: [S::one(), S::one(), S::one(), S::one()] }
    }

    fn t(&self, j: i64) -> &S {
        &self.t[j.rem_euclid(4) as usize]
    }

    /// `(a_j, b_j, c_j)` for any integer j, extended quasiperiodically.
    pub fn get(&self, j: i64) -> (S, S, S) {
        let n = self.n() as i64;
        let mut q = j.div_euclid(n);
        let r = j.rem_euclid(n);
        let (mut a, mut b, mut c) =
            (self.abc.a[r as usize].clone(), self.abc.b[r as usize].clone(), self.abc.c[r as usize].clone());
        let mut idx = r;
        while q > 0 {
            a = a * self.t(idx).clone() / self.t(idx + 3).clone();
            b = b * self.t(idx).clone() / self.t(idx + 2).clone();
            c = c * self.t(idx).clone() / self.t(idx + 1).clone();
            idx += n;
            q -= 1;
        }
        while q < 0 {
            idx -= n;
            a = a * self.t(idx + 3).clone() / self.t(idx).clone();
            b = b * self.t(idx + 2).clone() / self.t(idx).clone();
            c = c * self.t(idx + 1).clone() / self.t(idx).clone();
            q += 1;
        }
        (a, b, c)
    }

    pub fn data(&self) -> QuasiData<S> {
        QuasiData {
            alpha: self.t[0].clone() / self.t[3].clone(),
            beta: self.t[0].clone() / self.t[2].clone(),
            gamma: self.t[0].clone() / self.t[1].clone(),
        }
    }

    /// Rescale the lift by the four-periodic `k_j` (`V_j -> k_j V_j`):
    /// `a_j -> a_j k_j/k_{j+3}`, `b_j -> b_j k_j/k_{j+2}`, `c_j -> c_j k_j/k_{j+1}`,
    /// `t_j -> t_j k_{j+n}/k_j`.
    pub fn gauge(&self, k: &[S; 4]) -> Self {
        let n = self.n() as i64;
        let kk = |j: i64| k[j.rem_euclid(4) as usize].clone();
        let a = (0..n).map(|j| self.abc.a[j as usize].clone() * kk(j) / kk(j + 3)).collect();
        let b = (0..n).map(|j| self.abc.b[j as usize].clone() * kk(j) / kk(j + 2)).collect();
        let c = (0..n).map(|j| self.abc.c[j as usize].clone() * kk(j) / kk(j + 1)).collect();
        let t = std::array::from_fn(|j| self.t[j].clone() * kk(j as i64 + n) / kk(j as i64));
        Self { abc: Abc3 { a, b, c }, t }
    }

    /// The lifted polygon generated from the standard frame.
    pub fn to_polygon(&self) -> Result<TwistedPolygon<S>> {
        let mut coeffs = self.abc.to_coeffs();
        coeffs.quasi = Some(self.t.clone());
        reconstruct_from_coeffs(&coeffs)?.to_polygon()
    }
}

/// Periodic `(a, b, c)` of a twisted polygon (n odd).
pub fn abc_from_polygon<S: Scalar>(poly: &TwistedPolygon<S>) -> Result<Abc3<S>> {
    if poly.d != 3 {
        return Err(Error::InvalidInput(format!("expected d = 3, got {}", poly.d)));
    }
    let lift = lift_polygon(poly)?;
    Abc3::from_coeffs(&coefficients_from_lift(&lift)?)
}

/// Polygon with the given periodic coordinates, built from the standard frame.
pub fn polygon_from_abc<S: Scalar>(abc: &Abc3<S>) -> Result<TwistedPolygon<S>> {
    reconstruct_from_coeffs(&abc.to_coeffs())?.to_polygon()
}

/// Quasiperiodic lift for any n: `V_0, V_1, V_2` are the given vertices and
/// each later vector is scaled so that consecutive 4x4 determinants are 1.
/// The twist is read off from `V_{j+n} = t_j M V_j`, `j = 0..3`.
pub fn quasi_lift<S: Scalar>(poly: &TwistedPolygon<S>) -> Result<QuasiSeq<S>> {
    if poly.d != 3 {
        return Err(Error::InvalidInput(format!("expected d = 3, got {}", poly.d)));
    }
    let n = poly.n as i64;
    let mut vs: Vec<Vec<S>> = (0..3).map(|j| poly.vertex(j)).collect();
    for j in 0..(n + 4) {
        let w = poly.vertex(j + 3);
        let cols = [vs[j as usize].clone(), vs[j as usize + 1].clone(), vs[j as usize + 2].clone(), w.clone()];
        let det = linalg::det(&from_columns(&cols));
        let scale: f64 = cols.iter().map(|c| max_abs(c)).product();
        if det.negligible(scale) {
            return Err(Error::DegenerateInput { index: j });
        }
        vs.push(linalg::scale_vec(&w, &(S::one() / det)));
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut c = Vec::new();
    for j in 0..n as usize {
        let basis = from_columns(&[vs[j].clone(), vs[j + 1].clone(), vs[j + 2].clone(), vs[j + 3].clone()]);
        let x = linalg::solve(&basis, &vs[j + 4]).ok_or(Error::DegenerateInput { index: j as i64 })?;
        c.push(x[1].clone());
        b.push(x[2].clone());
        a.push(x[3].clone());
    }
    let t = std::array::from_fn(|j| {
        let mv = linalg::mat_vec(&poly.monodromy, &vs[j]);
        let target = &vs[j + n as usize];
        // Ratio along the largest coordinate of M V_j.
        let (idx, _) = mv
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, v)| if v.to_f64().abs() > acc.1 { (i, v.to_f64().abs()) } else { acc });
        target[idx].clone() / mv[idx].clone()
    });
    Ok(QuasiSeq { abc: Abc3 { a, b, c }, t })
}

/// Gauge-invariant `(x, y, z)` from a sequence given by its extension rule.
fn xyz_from_fn<S: Scalar>(n: usize, get: impl Fn(i64) -> (S, S, S)) -> Result<Xyz3<S>> {
    let mut out = Xyz3 { x: Vec::with_capacity(n), y: Vec::with_capacity(n), z: Vec::with_capacity(n) };
    for j in 0..n as i64 {
        let (a0, b0, c0) = get(j);
        let (a1, b1, c1) = get(j + 1);
        let ju = j as usize;
        let den_x = a0.clone() * a1.clone();
        if den_x.is_zero() {
            return Err(Error::DivisionByZero { expr: "a_j a_{j+1}", index: ju });
        }
        let den_y = b1.clone() * c0;
        if den_y.is_zero() {
            return Err(Error::DivisionByZero { expr: "b_{j+1} c_j", index: ju });
        }
        let den_z = a1 * b0;
        if den_z.is_zero() {
            return Err(Error::DivisionByZero { expr: "a_{j+1} b_j", index: ju });
        }
        out.x.push(b1 / den_x);
        out.y.push(a0 / den_y);
        out.z.push(c1 / den_z);
    }
    Ok(out)
}

/// `x_j = b_{j+1}/(a_j a_{j+1})`, `y_j = a_j/(b_{j+1} c_j)`, `z_j = c_{j+1}/(a_{j+1} b_j)`
/// for a periodic sequence.
pub fn xyz_from_abc<S: Scalar>(abc: &Abc3<S>) -> Result<Xyz3<S>> {
    let n = abc.n() as i64;
    xyz_from_fn(abc.n(), |j| {
        let r = j.rem_euclid(n) as usize;
        (abc.a[r].clone(), abc.b[r].clone(), abc.c[r].clone())
    })
}

/// Same coordinates for a quasiperiodic sequence; independent of the
/// representative of its gauge class.
pub fn xyz_from_quasi<S: Scalar>(seq: &QuasiSeq<S>) -> Result<Xyz3<S>> {
    xyz_from_fn(seq.n(), |j| seq.get(j))
}

/// Intersection of the line `(p, q)` with the hyperplane `h`:
/// `(h.q) p - (h.p) q`.
fn line_plane<S: Scalar>(p: &[S], q: &[S], h: &[S]) -> Vec<S> {
    linalg::sub_vec(&linalg::scale_vec(p, &dot(h, q)), &linalg::scale_vec(q, &dot(h, p)))
}

/// `(x, y, z)` directly from vertices, as negated cross-ratios of edge
/// points with their intersections with nearby planes (any n).
pub fn xyz_geometric<S: Scalar>(poly: &TwistedPolygon<S>) -> Result<Xyz3<S>> {
    if poly.d != 3 {
        return Err(Error::InvalidInput(format!("expected d = 3, got {}", poly.d)));
    }
    let mut out = Xyz3 { x: Vec::new(), y: Vec::new(), z: Vec::new() };
    for i in 0..poly.n as i64 {
        let v: Vec<Vec<S>> = (0..6).map(|m| poly.vertex(i + m)).collect();
        let plane = |m: [usize; 3]| {
            span_raw(&[v[m[0]].clone(), v[m[1]].clone(), v[m[2]].clone()])
                .ok_or(Error::DegenerateSpan { index: i })
        };
        let phi = |j1: usize, j2: usize, m: [usize; 3]| -> Result<Vec<S>> {
            let h = plane(m)?;
            let pt = line_plane(&v[j1], &v[j2], &h);
            let scale = max_abs(&v[j1]) * max_abs(&v[j2]) * max_abs(&h);
            if linalg::is_null_vec(&pt, scale) {
                return Err(Error::DegenerateIntersection { index: i });
            }
            Ok(pt)
        };
        let p45_123 = phi(4, 5, [1, 2, 3])?;
        let x = cross_ratio_raw(&v[4], &v[5], &phi(4, 5, [0, 1, 2])?, &p45_123)?;
        let y = cross_ratio_raw(&v[0], &v[1], &phi(0, 1, [2, 3, 4])?, &phi(0, 1, [2, 4, 5])?)?;
        let z = cross_ratio_raw(&v[4], &v[5], &phi(4, 5, [0, 1, 3])?, &p45_123)?;
        out.x.push(-x);
        out.y.push(-y);
        out.z.push(-z);
    }
    Ok(out)
}

fn nonzero<S: Scalar>(v: S, expr: &'static str, index: usize) -> Result<S> {
    if v.is_zero() {
        Err(Error::SingularStep { expr, index })
    } else {
        Ok(v)
    }
}

/// One step of the 3D pentagram map in `(x, y, z)` coordinates.
pub fn explicit_step<S: Scalar>(xyz: &Xyz3<S>) -> Result<Xyz3<S>> {
    let n = xyz.n();
    let x = |i: i64| at(&xyz.x, i).clone();
    let y = |i: i64| at(&xyz.y, i).clone();
    let z = |i: i64| at(&xyz.z, i).clone();
    let one = S::one;
    let mut out = Xyz3 { x: Vec::with_capacity(n), y: Vec::with_capacity(n), z: Vec::with_capacity(n) };
    for iu in 0..n {
        let i = iu as i64;
        let e1 = nonzero(one() + y(i - 1) + z(i), "1+y_{i-1}+z_i", iu)?;
        let big = nonzero(
            one() + y(i - 1) + z(i + 2) + y(i - 1) * z(i + 2) - y(i + 1) * z(i),
            "1+y_{i-1}+z_{i+2}+y_{i-1}z_{i+2}-y_{i+1}z_i",
            iu,
        )?;
        let e2 = nonzero(one() + y(i) + z(i + 1), "1+y_i+z_{i+1}", iu)?;
        let xz = nonzero(x(i) * z(i - 1), "x_i z_{i-1}", iu)?;
        let xi = nonzero(x(i), "x_i", iu)?;
        let big2 = nonzero(
            one() + y(i - 2) + z(i + 1) - y(i) * z(i - 1) + y(i - 2) * z(i + 1),
            "1+y_{i-2}+z_{i+1}-y_i z_{i-1}+y_{i-2}z_{i+1}",
            iu,
        )?;
        let num = (one() + y(i + 1) + z(i + 2)) * (one() + y(i - 2) + z(i - 1));
        out.x.push(x(i + 1) * big.clone() / e1.clone());
        out.y.push(x(i - 1) * y(i - 1) * z(i) / xz * num.clone() / (e2 * big));
        out.z.push(x(i + 1) * z(i) / xi * num / (e1 * big2));
    }
    Ok(out)
}

/// Induced action on `(x, y, z)` of the scaling `a -> s a`, `b -> b`, `c -> s c`:
/// `x -> x / s^2`, `y -> y`, `z -> z`.
pub fn scale_xyz<S: Scalar>(xyz: &Xyz3<S>, s: &S) -> Xyz3<S> {
    let s2 = s.clone() * s.clone();
    Xyz3 { x: xyz.x.iter().map(|v| v.clone() / s2.clone()).collect(), y: xyz.y.clone(), z: xyz.z.clone() }
}

/// Cyclic products recovering the twist invariants from `(x, y, z)` for even n.
pub fn quasi_invariants_from_xyz<S: Scalar>(xyz: &Xyz3<S>) -> Result<QuasiInvariants<S>> {
    let n = xyz.n();
    let x = |i: usize| xyz.x[i % n].clone();
    let y = |i: usize| xyz.y[i % n].clone();
    let z = |i: usize| xyz.z[i % n].clone();
    let ratio = |num: S, den: S, index: usize| -> Result<S> {
        if den.is_zero() {
            Err(Error::DivisionByZero { expr: "cyclic product denominator", index })
        } else {
            Ok(num / den)
        }
    };
    match n % 4 {
        2 => {
            let mut acc = S::one();
            for j in 0..n / 2 {
                let (e, o) = (2 * j, 2 * j + 1);
                acc = acc
                    * ratio(x(e) * x(e) * y(e) * z(o), x(o) * x(o) * y(o) * z(e), e)?;
            }
            Ok(QuasiInvariants::Single { alpha_gamma_over_beta: acc })
        }
        0 => {
            let p = n / 4;
            let (mut al, mut be, mut ga) = (S::one(), S::one(), S::one());
            for j in 0..p {
                let b = 4 * j;
                al = al * ratio(x(b) * x(b + 2) * y(b + 2) * z(b + 1), x(b + 1) * x(b + 3) * y(b + 3) * z(b + 2), b)?;
                be = be * ratio(y(b + 1) * z(b), y(b + 3) * z(b + 2), b)?;
                ga = ga * ratio(y(b) * z(b + 3), y(b + 2) * z(b + 1), b)?;
            }
            // The third product is gamma / alpha.
            let gamma = ga * al.clone();
            Ok(QuasiInvariants::Full(QuasiData { alpha: al, beta: be, gamma }))
        }
        _ => Ok(QuasiInvariants::Periodic),
    }
}

/// Normal form of a quasiperiodic sequence: for odd n the gauge making the
/// twist trivial (the unique periodic representative); for even n the
/// sequence is returned unchanged together with its invariants.
pub fn quasiperiodic_normalize<S: Scalar>(seq: &QuasiSeq<S>) -> (QuasiSeq<S>, QuasiInvariants<S>) {
    let n = seq.n();
    if n % 2 == 1 {
        // t_j k_{j+n}/k_j = 1 fixes every ratio k_j/k_0 along j -> j + n,
        // which visits all residues mod 4. A common factor of k does not
        // change the coefficients.
        let mut k: [Option<S>; 4] = [Some(S::one()), None, None, None];
        let mut j = 0usize;
        for _ in 0..3 {
            let next = (j + n) % 4;
            k[next] = Some(k[j].clone().unwrap() / seq.t[j].clone());
            j = next;
        }
        let k: [S; 4] = std::array::from_fn(|i| k[i].clone().expect("all residues visited"));
        let mut g = seq.gauge(&k);
        g.t = [S::one(), S::one(), S::one(), S::one()];
        return (g, QuasiInvariants::Periodic);
    }
    let d = seq.data();
    let inv = if n.is_multiple_of(4) {
        QuasiInvariants::Full(d)
    } else {
        QuasiInvariants::Single { alpha_gamma_over_beta: d.alpha * d.gamma / d.beta }
    };
    (seq.clone(), inv)
}

/// The involution `alpha` (planes through `v_{i-1}, v_i, v_{i+1}`):
/// `(a, b, c)_i -> (c_{i+1}, b_i, a_{i-1})`.
pub fn alpha_abc<S: Scalar>(abc: &Abc3<S>) -> Abc3<S> {
    let n = abc.n() as i64;
    Abc3 {
        a: (0..n).map(|i| at(&abc.c, i + 1).clone()).collect(),
        b: abc.b.clone(),
        c: (0..n).map(|i| at(&abc.a, i - 1).clone()).collect(),
    }
}

/// The involution `beta` (planes through `v_{i-2}, v_i, v_{i+2}`), n odd.
///
/// The normalizing factors satisfy `l_i l_{i+1} l_{i+2} l_{i+3} = r_i` with
/// `r_i = 1/(Q_i Q_{i+1})`, `Q_i = a_{i-2}a_i + a_i b_{i-1} c_{i-2} + c_{i-2} c_i`.
/// Dividing consecutive conditions gives `l_{i+4}/l_i = r_{i+1}/r_i`, so all
/// ratios `l_i/l_0` are rational; the new coefficients only involve degree-4
/// products of the `l`'s and are therefore exact.
pub fn beta_abc<S: Scalar>(abc: &Abc3<S>) -> Result<Abc3<S>> {
    let n = abc.n();
    if n.is_multiple_of(2) {
        return Err(Error::InvalidInput("beta in (a,b,c) coordinates needs odd n".into()));
    }
    let (a, b, c) = (|i: i64| at(&abc.a, i).clone(), |i: i64| at(&abc.b, i).clone(), |i: i64| at(&abc.c, i).clone());
    let q = |i: i64| a(i - 2) * a(i) + a(i) * b(i - 1) * c(i - 2) + c(i - 2) * c(i);
    let qs: Vec<S> = (0..n as i64).map(q).collect();
    for (i, qi) in qs.iter().enumerate() {
        if qi.is_zero() {
            return Err(Error::SingularStep { expr: "a_{i-2}a_i+a_i b_{i-1}c_{i-2}+c_{i-2}c_i", index: i });
        }
    }
    let qq = |i: i64| at(&qs, i).clone();
    let r = |i: i64| S::one() / (qq(i) * qq(i + 1));
    let mut rho: Vec<Option<S>> = vec![None; n];
    rho[0] = Some(S::one());
    let mut i = 0usize;
    for _ in 0..n - 1 {
        let next = (i + 4) % n;
        rho[next] = Some(rho[i].clone().unwrap() * r(i as i64 + 1) / r(i as i64));
        i = next;
    }
    let rho: Vec<S> = rho.into_iter().map(|v| v.expect("all residues visited")).collect();
    // l_0^4 = r_0 / (rho_0 rho_1 rho_2 rho_3).
    let l0_4 = r(0) / (rho[0].clone() * rho[1 % n].clone() * rho[2 % n].clone() * rho[3 % n].clone());
    let rh = |i: i64| at(&rho, i).clone();
    let lam4 = |i: [i64; 4]| l0_4.clone() * rh(i[0]) * rh(i[1]) * rh(i[2]) * rh(i[3]);
    let mut out = Abc3 { a: Vec::with_capacity(n), b: Vec::with_capacity(n), c: Vec::with_capacity(n) };
    for iu in 0..n {
        let i = iu as i64;
        let q2 = qq(i + 2) * qq(i + 2);
        out.a.push(c(i - 1) * q2.clone() * lam4([i + 1, i + 2, i + 4, i + 4]));
        let bf = (a(i - 2) + b(i - 1) * c(i - 2)) * (c(i + 2) + a(i + 2) * b(i + 1)) - a(i + 2) * c(i - 2);
        out.b.push(bf * qq(i + 1) * lam4([i, i + 1, i + 3, i + 4]));
        out.c.push(a(i + 1) * q2 * lam4([i + 2, i + 3, i + 4, i + 4]));
    }
    Ok(out)
}

/// Geometric counterpart of [`beta_abc`]: coordinates of the dual polygon
/// of planes `(v_{i-2}, v_i, v_{i+2})`.
pub fn beta_geometric<S: Scalar>(poly: &TwistedPolygon<S>) -> Result<Abc3<S>> {
    abc_from_polygon(&alpha_map_centered(poly, 2)?)
}

/// Geometric counterpart of [`alpha_abc`].
pub fn alpha_geometric<S: Scalar>(poly: &TwistedPolygon<S>) -> Result<Abc3<S>> {
    abc_from_polygon(&alpha_map_centered(poly, 1)?)
}

impl<S: Scalar> Xy2<S> {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn shifted(&self, shift: i64) -> Self {
        let sh = |v: &[S]| (0..v.len() as i64).map(|i| at(v, i + shift).clone()).collect();
        Self { x: sh(&self.x), y: sh(&self.y) }
    }
}

/// 2D map: `x_i -> x_i (1 - x_{i-1}y_{i-1})/(1 - x_{i+1}y_{i+1})`,
/// `y_i -> y_{i+1} (1 - x_{i+2}y_{i+2})/(1 - x_i y_i)`.
pub fn xy2_step<S: Scalar>(xy: &Xy2<S>) -> Result<Xy2<S>> {
    let n = xy.n();
    let w = |i: i64| S::one() - at(&xy.x, i).clone() * at(&xy.y, i).clone();
    let mut out = Xy2 { x: Vec::with_capacity(n), y: Vec::with_capacity(n) };
    for iu in 0..n {
        let i = iu as i64;
        let d1 = nonzero(w(i + 1), "1-x_{i+1}y_{i+1}", iu)?;
        let d2 = nonzero(w(i), "1-x_i y_i", iu)?;
        out.x.push(at(&xy.x, i).clone() * w(i - 1) / d1);
        out.y.push(at(&xy.y, i + 1).clone() * w(i + 2) / d2);
    }
    Ok(out)
}

/// `R_s: (x, y) -> (s x, y / s)`.
pub fn scale_xy2<S: Scalar>(xy: &Xy2<S>, s: &S) -> Xy2<S> {
    Xy2 {
        x: xy.x.iter().map(|v| v.clone() * s.clone()).collect(),
        y: xy.y.iter().map(|v| v.clone() / s.clone()).collect(),
    }
}

/// Corner cross-ratios of a planar twisted polygon:
/// `x_i = [v_{i-2}, v_{i-1}, l_{i-2} ∩ l_i, l_{i-2} ∩ l_{i+1}]`,
/// `y_i = [l_{i-2} ∩ l_{i+1}, l_{i-1} ∩ l_{i+1}, v_{i+1}, v_{i+2}]`,
/// where `l_j` is the side line `(v_j, v_{j+1})`.
pub fn xy2_geometric<S: Scalar>(poly: &TwistedPolygon<S>) -> Result<Xy2<S>> {
    if poly.d != 2 {
        return Err(Error::InvalidInput(format!("expected d = 2, got {}", poly.d)));
    }
    let line = |j: i64| span_raw(&[poly.vertex(j), poly.vertex(j + 1)]).ok_or(Error::DegenerateSpan { index: j });
    let meet = |l1: &[S], l2: &[S], i: i64| {
        span_raw(&[l1.to_vec(), l2.to_vec()]).ok_or(Error::DegenerateIntersection { index: i })
    };
    let mut out = Xy2 { x: Vec::new(), y: Vec::new() };
    for i in 0..poly.n as i64 {
        let (lm2, lm1, l0, l1) = (line(i - 2)?, line(i - 1)?, line(i)?, line(i + 1)?);
        let x = cross_ratio_raw(&poly.vertex(i - 2), &poly.vertex(i - 1), &meet(&lm2, &l0, i)?, &meet(&lm2, &l1, i)?)?;
        let y = cross_ratio_raw(&meet(&lm2, &l1, i)?, &meet(&lm1, &l1, i)?, &poly.vertex(i + 1), &poly.vertex(i + 2))?;
        out.x.push(x);
        out.y.push(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::higher_map;
    use crate::random::{random_rational, random_twisted_polygon, seeded};
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn constant_abc_round_trip() {
        let abc = Abc3::constant(7, q(1, 1), q(2, 1), q(3, 1));
        let poly = polygon_from_abc(&abc).unwrap();
        assert_eq!(abc_from_polygon(&poly).unwrap(), abc);
    }

    #[test]
    fn even_n_has_no_periodic_abc() {
        let mut rng = seeded(1);
        let poly = random_twisted_polygon::<Rational>(3, 8, &mut rng);
        assert_eq!(abc_from_polygon(&poly).unwrap_err(), Error::GcdObstruction { n: 8, d: 3 });
    }

    #[test]
    fn ones_give_unit_xyz() {
        let xyz = xyz_from_abc(&Abc3::constant(5, q(1, 1), q(1, 1), q(1, 1))).unwrap();
        assert_eq!(xyz, Xyz3::constant(5, q(1, 1), q(1, 1), q(1, 1)));
    }

    #[test]
    fn constant_xyz_is_fixed() {
        for (x, y, z) in [(q(2, 3), q(5, 7), q(-1, 4)), (q(1, 1), q(1, 1), q(1, 1))] {
            let xyz = Xyz3::constant(6, x, y, z);
            assert_eq!(explicit_step(&xyz).unwrap(), xyz);
        }
    }

    #[test]
    fn geometric_xyz_matches_abc_for_odd_n() {
        let mut rng = seeded(11);
        for n in [5, 7, 9] {
            let poly = random_twisted_polygon::<Rational>(3, n, &mut rng);
            let abc = abc_from_polygon(&poly).unwrap();
            assert_eq!(xyz_geometric(&poly).unwrap(), xyz_from_abc(&abc).unwrap());
        }
    }

    #[test]
    fn quasi_lift_matches_geometry_for_even_n() {
        let mut rng = seeded(12);
        for n in [6, 8] {
            let poly = random_twisted_polygon::<Rational>(3, n, &mut rng);
            let seq = quasi_lift(&poly).unwrap();
            let prod = seq.t.iter().fold(q(1, 1), |acc, t| acc * t.clone());
            assert_eq!(prod, q(1, 1));
            assert_eq!(xyz_from_quasi(&seq).unwrap(), xyz_geometric(&poly).unwrap());
        }
    }

    #[test]
    fn odd_normalization_recovers_periodic_abc() {
        let mut rng = seeded(13);
        let poly = random_twisted_polygon::<Rational>(3, 7, &mut rng);
        let seq = quasi_lift(&poly).unwrap();
        let (norm, inv) = quasiperiodic_normalize(&seq);
        assert_eq!(inv, QuasiInvariants::Periodic);
        assert_eq!(norm.abc, abc_from_polygon(&poly).unwrap());
    }

    #[test]
    fn gauge_action_on_twist_invariants() {
        let mut rng = seeded(14);
        let k = [q(2, 1), q(-1, 3), q(5, 2), q(-3, 5)];
        for n in [6, 8] {
            let poly = random_twisted_polygon::<Rational>(3, n, &mut rng);
            let seq = quasi_lift(&poly).unwrap();
            let moved = seq.gauge(&k);
            assert_eq!(xyz_from_quasi(&moved).unwrap(), xyz_from_quasi(&seq).unwrap());
            let (_, before) = quasiperiodic_normalize(&seq);
            let (_, after) = quasiperiodic_normalize(&moved);
            assert_eq!(before, after);
            if n == 6 {
                assert_ne!(seq.data().alpha, moved.data().alpha);
            }
        }
    }

    #[test]
    fn alpha_is_an_involution_and_matches_geometry() {
        let mut rng = seeded(15);
        let poly = random_twisted_polygon::<Rational>(3, 7, &mut rng);
        let abc = abc_from_polygon(&poly).unwrap();
        assert_eq!(alpha_abc(&alpha_abc(&abc)), abc);
        assert_eq!(alpha_abc(&abc), alpha_geometric(&poly).unwrap());
    }

    #[test]
    fn beta_matches_geometry_and_squares_to_identity() {
        let mut rng = seeded(16);
        let poly = random_twisted_polygon::<Rational>(3, 7, &mut rng);
        let abc = abc_from_polygon(&poly).unwrap();
        let beta = beta_abc(&abc).unwrap();
        assert_eq!(beta, beta_geometric(&poly).unwrap());
        assert_eq!(beta_abc(&beta).unwrap(), abc);
    }

    #[test]
    fn alpha_after_beta_is_the_map() {
        let mut rng = seeded(17);
        let poly = random_twisted_polygon::<Rational>(3, 9, &mut rng);
        let abc = abc_from_polygon(&poly).unwrap();
        let composed = alpha_abc(&beta_abc(&abc).unwrap());
        assert_eq!(composed, abc_from_polygon(&higher_map(&poly).unwrap()).unwrap());
    }

    #[test]
    fn xy2_constant_product_telescopes() {
        let mut rng = seeded(18);
        let c = q(3, 7);
        let x: Vec<Rational> = (0..6).map(|_| random_rational(&mut rng, 9, 5)).collect();
        let y: Vec<Rational> = x.iter().map(|v| c.clone() / v.clone()).collect();
        let xy = Xy2 { x: x.clone(), y: y.clone() };
        let out = xy2_step(&xy).unwrap();
        assert_eq!(out.x, x);
        assert_eq!(out.y, xy.shifted(1).y);
    }
}
