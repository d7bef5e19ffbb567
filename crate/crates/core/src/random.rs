//! Seeded generation of test polygons with small rational coordinates.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coords::Xyz3;
use crate::linalg::{self, Matrix};
use crate::projective::{CoeffSeq, TwistedPolygon};
use crate::scalar::{from_rational, Rational, Scalar};

/// Bound on numerators and denominators of generated rationals.
pub const MAX_ENTRY: i64 = 97;

pub type Rng64 = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero rational `p/q` with `|p| <= max`, `1 <= q <= max_den`.
pub fn random_rational(rng: &mut impl Rng, max: i64, max_den: i64) -> Rational {
    loop {
        let p = rng.gen_range(-max..=max);
        let q = rng.gen_range(1..=max_den);
        if p != 0 {
            return Rational::from_ratio(p, q);
        }
    }
}

/// Small rational, used where exact arithmetic must stay cheap.
fn small<S: Scalar>(rng: &mut impl Rng) -> S {
    from_rational(&random_rational(rng, 9, 4))
}

/// Random element of SL(dim) with rational entries, as a product of
/// elementary unipotent matrices (determinant exactly 1).
pub fn random_sl<S: Scalar>(dim: usize, rng: &mut impl Rng) -> Matrix<S> {
    let mut m: Matrix<S> = linalg::identity(dim);
    for _ in 0..2 * dim {
        let i = rng.gen_range(0..dim);
        let mut j = rng.gen_range(0..dim);
        while j == i {
            j = rng.gen_range(0..dim);
        }
        let mut e: Matrix<S> = linalg::identity(dim);
        e[i][j] = from_rational(&random_rational(rng, 3, 2));
        m = linalg::mat_mul(&m, &e);
    }
    m
}

fn random_vertices<S: Scalar>(dim: usize, n: usize, rng: &mut impl Rng) -> Vec<Vec<S>> {
    (0..n)
        .map(|_| (0..dim).map(|_| from_rational(&random_rational(rng, MAX_ENTRY, MAX_ENTRY))).collect())
        .collect()
}

/// Random twisted n-gon in projective d-space in general position.
pub fn random_twisted_polygon<S: Scalar>(d: usize, n: usize, rng: &mut impl Rng) -> TwistedPolygon<S> {
    loop {
        let m = random_sl(d + 1, rng);
        let verts = random_vertices(d + 1, n, rng);
        if let Ok(p) = TwistedPolygon::new(verts, m) {
            if p.in_general_position() {
                return p;
            }
        }
    }
}

/// Random closed n-gon (identity monodromy) in general position.
pub fn random_closed_polygon<S: Scalar>(d: usize, n: usize, rng: &mut impl Rng) -> TwistedPolygon<S> {
    loop {
        let verts = random_vertices(d + 1, n, rng);
        if let Ok(p) = TwistedPolygon::closed(verts) {
            if p.in_general_position() {
                return p;
            }
        }
    }
}

/// Random recurrence coefficients with small rational entries.
pub fn random_coeffs<S: Scalar>(d: usize, n: usize, rng: &mut impl Rng) -> CoeffSeq<S> {
    let a = (0..n).map(|_| (0..d).map(|_| small(rng)).collect()).collect();
    CoeffSeq { d, n, a, quasi: None }
}

/// Random `(x, y, z)` coordinates with small rational entries. Every such
/// sequence is the coordinate sequence of some twisted 3D n-gon.
pub fn random_xyz<S: Scalar>(n: usize, rng: &mut impl Rng) -> Xyz3<S> {
    let mut col = || (0..n).map(|_| small(rng)).collect::<Vec<S>>();
    let (x, y, z) = (col(), col(), col());
    Xyz3 { x, y, z }
}

/// Closed n-gon inscribed in the trigonometric moment curve
/// `(1, cos t, sin t, cos 2t, sin 2t, ...)`, with every coordinate perturbed
/// by a relative amount drawn from `[-jitter, jitter]`. Float backend only.
pub fn moment_polygon(d: usize, n: usize, jitter: f64, rng: &mut impl Rng) -> TwistedPolygon<f64> {
    let verts: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let mut v = vec![1.0];
            for h in 1..=d.div_ceil(2) {
                v.push((h as f64 * th).cos());
                v.push((h as f64 * th).sin());
            }
            v.truncate(d + 1);
            v.iter().map(|x| x * (1.0 + jitter * rng.gen_range(-1.0..=1.0))).collect()
        })
        .collect();
    TwistedPolygon::closed(verts).expect("well-formed polygon")
}
