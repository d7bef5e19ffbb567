//! Continuous limit of the higher pentagram map.
//!
//! A nondegenerate curve `G: R -> R^{d+1}` with `det|G, G', ..., G^(d)| = 1`
//! is a fundamental system of `L = ∂^{d+1} + u_{d-1} ∂^{d-1} + ... + u_0`.
//! The short-diagonal hyperplanes `H_ε(x)` through `G(x + o_i ε)` envelope a
//! new curve `L_ε(x)`, and `L_ε = G + ε² C_d (G'' + 2/(d+1) u_{d-1} G) +
//! O(ε⁴)`. For `d = 3` the induced drift of the coefficients is the
//! (2,4)-KdV flow.
//!
//! Everything is double precision. Derivatives in `x` are never taken by
//! finite differences: the ODE gives the full jet of `G` at each grid point,
//! the hyperplane is spanned by divided differences of `G` (so no
//! cancellation as the points merge), and the envelope and its derivatives
//! are carried as truncated Taylor series in `x`.

pub mod series;
pub mod trig;

use crate::error::{Error, Result};
use crate::linalg;
use series::Series;
pub use trig::{spectral_derivative, sup_norm, uniform_grid, TrigPoly};

pub const DEFAULT_GRID: usize = 256;

/// Taylor terms kept when expanding `G` around `x` to reach the points
/// `x + o_i ε`.
const NODE_TERMS: usize = 24;

/// Extra jet order used by the Taylor integrator.
const STEP_TERMS: usize = 30;

const MAX_SUBDIVISIONS: u32 = 16;

/// `L = ∂^{d+1} + Σ_{j<d} u_j ∂^j` with trigonometric-polynomial coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveOperator {
    pub d: usize,
    /// `u_0, ..., u_{d-1}`.
    pub coeffs: Vec<TrigPoly>,
}

impl CurveOperator {
    pub fn new(d: usize, coeffs: Vec<TrigPoly>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidInput(format!("continuum needs d >= 2, got {d}")));
        }
        if coeffs.len() != d {
            return Err(Error::InvalidInput(format!("expected {d} coefficient functions, got {}", coeffs.len())));
        }
        Ok(Self { d, coeffs })
    }

    pub fn zero(d: usize) -> Result<Self> {
        Self::new(d, vec![TrigPoly::zero(); d])
    }

    /// Smooth test operator used by the CLI and the acceptance suite.
    pub fn standard(d: usize) -> Result<Self> {
        let mut coeffs = vec![TrigPoly::zero(); d];
        coeffs[d - 1] = TrigPoly::new(0.3, vec![(1, 0.2, 0.0)]);
        if d >= 3 {
            coeffs[d - 2] = TrigPoly::new(0.0, vec![(1, 0.0, 0.1)]);
            coeffs[d - 3] = TrigPoly::new(0.1, vec![(2, 0.05, 0.0)]);
        }
        Self::new(d, coeffs)
    }

    /// `u_j^(i)(x)` for `i = 0..=order`.
    fn coefficient_jets(&self, x: f64, order: usize) -> Vec<Vec<f64>> {
        self.coeffs.iter().map(|u| (0..=order).map(|i| u.deriv_eval(i as u32, x)).collect()).collect()
    }
}

fn binomials(n: usize) -> Vec<Vec<f64>> {
    let mut b = vec![vec![0.0; n + 1]; n + 1];
    for i in 0..=n {
        b[i][0] = 1.0;
        for j in 1..=i {
            b[i][j] = b[i - 1][j - 1] + if j < i { b[i - 1][j] } else { 0.0 };
        }
    }
    b
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|v| v as f64).product()
}

/// `G^(m)(x)` for `m = 0..=order` from the frame `G, ..., G^(d)` at `x`,
/// using the derivatives of `G^(d+1) = -Σ u_j G^(j)`.
fn jet(op: &CurveOperator, x: f64, frame: &[Vec<f64>], order: usize) -> Vec<Vec<f64>> {
    let d = op.d;
    let dim = d + 1;
    let mut out: Vec<Vec<f64>> = frame.to_vec();
    if order <= d {
        out.truncate(order + 1);
        return out;
    }
    let uj = op.coefficient_jets(x, order - d - 1);
    let binom = binomials(order);
    for m in d + 1..=order {
        let r = m - d - 1;
        let mut v = vec![0.0; dim];
        for (j, ujet) in uj.iter().enumerate() {
            for i in 0..=r {
                let c = binom[r][i] * ujet[i];
                if c == 0.0 {
                    continue;
                }
                for (acc, g) in v.iter_mut().zip(&out[j + r - i]) {
                    *acc -= c * g;
                }
            }
        }
        out.push(v);
    }
    out
}

/// Fundamental system on a uniform grid together with its derivatives up
/// to order d.
#[derive(Debug, Clone)]
pub struct CurveSamples {
    pub op: CurveOperator,
    pub x: Vec<f64>,
    /// `frames[m][j] = G^(j)(x_m)`, `j = 0..=d`.
    pub frames: Vec<Vec<Vec<f64>>>,
}

impl CurveSamples {
    pub fn d(&self) -> usize {
        self.op.d
    }

    pub fn wronskian(&self, m: usize) -> f64 {
        linalg::det(&self.frames[m])
    }

    pub fn max_wronskian_defect(&self) -> f64 {
        (0..self.x.len()).map(|m| (self.wronskian(m) - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn jet(&self, m: usize, order: usize) -> Vec<Vec<f64>> {
        jet(&self.op, self.x[m], &self.frames[m], order)
    }

    /// `G(x_m + s)` by Taylor expansion.
    pub fn value_near(&self, m: usize, s: f64) -> Vec<f64> {
        taylor(&self.jet(m, NODE_TERMS + self.d()), s, 0)
    }
}

/// `Σ_k jets[k + shift] s^k / k!`.
fn taylor(jets: &[Vec<f64>], s: f64, shift: usize) -> Vec<f64> {
    let mut out = vec![0.0; jets[0].len()];
    let mut coef = 1.0;
    for (k, g) in jets.iter().skip(shift).enumerate() {
        if k > 0 {
            coef *= s / k as f64;
        }
        for (o, v) in out.iter_mut().zip(g) {
            *o += coef * v;
        }
    }
    out
}

fn taylor_step(op: &CurveOperator, x: f64, frame: &[Vec<f64>], h: f64, depth: u32) -> Result<Vec<Vec<f64>>> {
    let d = op.d;
    let order = d + STEP_TERMS;
    let jets = jet(op, x, frame, order);
    let scale = jets.iter().take(d + 1).flatten().fold(1.0f64, |m, v| m.max(v.abs()));
    let tail = (order - 1..=order).map(|k| linalg_norm(&jets[k]) * h.abs().powi((k - d) as i32) / factorial(k - d)).fold(0.0, f64::max);
    if tail > 1e-17 * scale {
        if depth >= MAX_SUBDIVISIONS {
            return Err(Error::StiffnessFailure(format!("step control failed near x = {x:.6}")));
        }
        let mid = taylor_step(op, x, frame, h / 2.0, depth + 1)?;
        return taylor_step(op, x + h / 2.0, &mid, h / 2.0, depth + 1);
    }
    Ok((0..=d).map(|j| taylor(&jets[..order + 1 - (d - j)], h, j)).collect())
}

fn linalg_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Integrate `L G = 0` from the identity frame at `x = 0` with a Taylor
/// method, `substeps` steps per grid cell. The Wronskian of the result is
/// constant (no `∂^d` term), and is rescaled to 1.
pub fn fundamental_solutions_with(op: &CurveOperator, grid_size: usize, substeps: usize) -> Result<CurveSamples> {
    let d = op.d;
    let x = uniform_grid(grid_size);
    let mut frame: Vec<Vec<f64>> = linalg::identity::<f64>(d + 1);
    let h = 2.0 * std::f64::consts::PI / (grid_size * substeps) as f64;
    let mut frames = Vec::with_capacity(grid_size);
    for (m, &xm) in x.iter().enumerate() {
        frames.push(frame.clone());
        if m + 1 < grid_size {
            for s in 0..substeps {
                frame = taylor_step(op, xm + s as f64 * h, &frame, h, 0)?;
            }
        }
    }
    // Abel: the Wronskian is constant, so one global rescale normalises it.
    let w = linalg::det(&frames[0]);
    let c = signed_root(w, d + 1).ok_or_else(|| Error::StiffnessFailure("vanishing Wronskian".into()))?;
    for f in &mut frames {
        for v in f.iter_mut().flatten() {
            *v /= c;
        }
    }
    Ok(CurveSamples { op: op.clone(), x, frames })
}

pub fn fundamental_solutions(op: &CurveOperator, grid_size: usize) -> Result<CurveSamples> {
    fundamental_solutions_with(op, grid_size, 1)
}

/// Real `c` with `c^k = w`, positive when `k` is even.
fn signed_root(w: f64, k: usize) -> Option<f64> {
    if w == 0.0 || (w < 0.0 && k.is_multiple_of(2)) {
        return None;
    }
    Some(w.signum() * w.abs().powf(1.0 / k as f64))
}

/// Offsets of the d points spanning the short-diagonal hyperplane: every
/// other vertex around `x`, i.e. `-ϰ..ϰ` for `d = 2ϰ+1` and
/// `±1, ±3, ..., ±(d-1)` for even d (in units of ε).
pub fn symmetric_offsets(d: usize) -> Vec<f64> {
    if d % 2 == 1 {
        let k = (d / 2) as f64;
        (0..d).map(|i| i as f64 - k).collect()
    } else {
        (0..d).map(|i| 2.0 * i as f64 - (d - 1) as f64).collect()
    }
}

/// Offsets invariant under `o -> -o`.
pub fn is_symmetric(offsets: &[f64]) -> bool {
    let mut a: Vec<f64> = offsets.to_vec();
    let mut b: Vec<f64> = offsets.iter().map(|o| -o).collect();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12)
}

/// Empirical `C_d` for offsets with vanishing sum: `Σ o_i² / (2d(d-1))`.
/// This gives 1/6 for the symmetric 3D choice and 7/6 for `(-3, 1, 2)`.
pub fn predicted_constant(offsets: &[f64]) -> f64 {
    let d = offsets.len() as f64;
    offsets.iter().map(|o| o * o).sum::<f64>() / (2.0 * d * (d - 1.0))
}

/// `ε ∈ {0.02 · 2^-j}`, `j = 0..5`.
pub fn epsilon_grid() -> Vec<f64> {
    (0..5).map(|j| 0.02 / f64::from(1u32 << j)).collect()
}

/// Envelope `L_ε` on the grid together with its derivatives up to order
/// `d + 1`, normalised to unit Wronskian.
#[derive(Debug, Clone)]
pub struct EnvelopeSamples {
    pub eps: f64,
    pub offsets: Vec<f64>,
    pub x: Vec<f64>,
    /// `jets[m][j] = L_ε^(j)(x_m)`, `j = 0..=d+1`.
    pub jets: Vec<Vec<Vec<f64>>>,
    /// The same jets in the frame where `G^(j)(x_m) = e_j`.
    pub local: Vec<Vec<Vec<f64>>>,
    /// `L_ε(x_m) - G(x_m)`, formed in the local frame to avoid cancellation.
    pub displacement: Vec<Vec<f64>>,
}

impl EnvelopeSamples {
    pub fn value(&self, m: usize) -> &[f64] {
        &self.jets[m][0]
    }

    pub fn wronskian(&self, m: usize) -> f64 {
        let d = self.jets[m].len() - 2;
        linalg::det(&self.jets[m][..=d].to_vec())
    }
}

/// `h_p(t_0..t_k)` for `p = 0..=terms`, every prefix `k`.
fn complete_symmetric(nodes: &[f64], terms: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(nodes.len());
    let mut prev = vec![0.0; terms + 1];
    prev[0] = 1.0;
    for (k, &t) in nodes.iter().enumerate() {
        let mut cur = vec![0.0; terms + 1];
        for p in 0..=terms {
            // h_p(t_0..t_k) = h_p(t_0..t_{k-1}) + t_k h_{p-1}(t_0..t_k)
            let base = if k == 0 { if p == 0 { 1.0 } else { 0.0 } } else { prev[p] };
            cur[p] = base + if p > 0 { t * cur[p - 1] } else { 0.0 };
        }
        out.push(cur.clone());
        prev = cur;
    }
    out
}

fn series_norm(v: &[Series]) -> f64 {
    v.iter().map(|s| s.0[0] * s.0[0]).sum::<f64>().sqrt()
}

/// Envelope jets at `x_m` in the local frame. The construction commutes with
/// `SL(d+1)`, so it is carried out for `F^-1 G` with `F = [G, ..., G^(d)](x_m)`,
/// which keeps every intermediate quantity of unit size.
fn envelope_at(samples: &CurveSamples, m: usize, eps: f64, offsets: &[f64]) -> Result<Vec<Vec<f64>>> {
    let d = samples.d();
    let dim = d + 1;
    let h_len = 3 * d + 1;
    let identity: Vec<Vec<f64>> = linalg::identity(dim);
    let jets = jet(&samples.op, samples.x[m], &identity, NODE_TERMS + d - 1 + h_len);
    let nodes: Vec<f64> = offsets.iter().map(|o| o * eps).collect();
    let hs = complete_symmetric(&nodes, NODE_TERMS);
    let kernel_err = || Error::KernelDimension { x: samples.x[m] };

    // Divided differences [τ_0..τ_k] of s -> G(x + t + s), as series in t.
    let rows: Vec<Vec<Series>> = (0..d)
        .map(|k| {
            let mut comps = vec![Series::zero(h_len); dim];
            for r in 0..h_len {
                let rf = factorial(r);
                for p in 0..=NODE_TERMS {
                    let mm = k + p;
                    let c = hs[k][p] / (factorial(mm) * rf);
                    for (i, comp) in comps.iter_mut().enumerate() {
                        comp.0[r] += c * jets[mm + r][i];
                    }
                }
            }
            comps
        })
        .collect();
    let h = series::cross(&rows);
    let row_scale: f64 = rows.iter().map(|r| series_norm(r)).product();
    if series_norm(&h) <= 1e-13 * row_scale {
        return Err(kernel_err());
    }

    let hd: Vec<Vec<Series>> = (0..d).map(|j| h.iter().map(|s| s.derivative(j)).collect()).collect();
    let l = series::cross(&hd);
    let hd_scale: f64 = hd.iter().map(|r| series_norm(r)).product();
    if series_norm(&l) <= 1e-13 * hd_scale {
        return Err(kernel_err());
    }

    let ld: Vec<Vec<Series>> = (0..=d).map(|j| l.iter().map(|s| s.derivative(j)).collect()).collect();
    let w = series::det(&ld);
    let w0 = w.0[0];
    let c = signed_root(w0, dim).ok_or_else(kernel_err)?;
    let mut f = w.scaled(1.0 / w0).powf(-1.0 / dim as f64).scaled(1.0 / c);
    if l[0].0[0] * f.0[0] < 0.0 && dim.is_multiple_of(2) {
        f = f.scaled(-1.0);
    }
    let ln: Vec<Series> = l.iter().map(|s| s.mul(&f)).collect();
    Ok((0..=d + 1).map(|j| ln.iter().map(|s| s.deriv_at_zero(j)).collect()).collect())
}

/// Envelope of the hyperplanes through `G(x + o_i ε)`.
pub fn envelope(samples: &CurveSamples, eps: f64, offsets: &[f64]) -> Result<EnvelopeSamples> {
    let d = samples.d();
    if offsets.len() != d {
        return Err(Error::InvalidInput(format!("need {d} offsets, got {}", offsets.len())));
    }
    let mut sorted = offsets.to_vec();
    sorted.sort_by(f64::total_cmp);
    if eps == 0.0 || sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput("envelope points must be distinct".into()));
    }
    let local = (0..samples.x.len()).map(|m| envelope_at(samples, m, eps, offsets)).collect::<Result<Vec<_>>>()?;
    let to_global = |m: usize, v: &[f64]| -> Vec<f64> {
        let frame = &samples.frames[m];
        (0..=d).map(|c| frame.iter().zip(v).map(|(g, vi)| g[c] * vi).sum()).collect()
    };
    let jets = local.iter().enumerate().map(|(m, l)| l.iter().map(|v| to_global(m, v)).collect()).collect();
    let displacement = local
        .iter()
        .enumerate()
        .map(|(m, l)| {
            let mut v = l[0].clone();
            v[0] -= 1.0;
            to_global(m, &v)
        })
        .collect();
    Ok(EnvelopeSamples { eps, offsets: offsets.to_vec(), x: samples.x.clone(), jets, local, displacement })
}

pub fn envelope_family(samples: &CurveSamples, eps_grid: &[f64], offsets: &[f64]) -> Result<Vec<EnvelopeSamples>> {
    eps_grid.iter().map(|&e| envelope(samples, e, offsets)).collect()
}

/// `G'' + 2/(d+1) u_{d-1} G` at every grid point.
pub fn predicted_direction(samples: &CurveSamples) -> Vec<Vec<f64>> {
    let d = samples.d();
    let k = 2.0 / (d + 1) as f64;
    samples
        .frames
        .iter()
        .zip(&samples.x)
        .map(|(f, &x)| {
            let u = samples.op.coeffs[d - 1].eval(x);
            f[2].iter().zip(&f[0]).map(|(g2, g)| g2 + k * u * g).collect()
        })
        .collect()
}

/// Neville extrapolation to `h = 0` of vector data sampled at `hs`.
pub fn extrapolate(hs: &[f64], values: &[Vec<f64>]) -> Vec<f64> {
    let mut p: Vec<Vec<f64>> = values.to_vec();
    let n = hs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (hi, hj) = (hs[i], hs[i + level]);
            p[i] = p[i].iter().zip(&p[i + 1]).map(|(a, b)| (hj * a - hi * b) / (hj - hi)).collect();
        }
    }
    p.swap_remove(0)
}

/// Variable in which the ε-expansion is a power series: `ε²` for symmetric
/// offsets (the construction is even in ε), `ε` otherwise.
fn expansion_variable(offsets: &[f64], eps: f64) -> f64 {
    if is_symmetric(offsets) {
        eps * eps
    } else {
        eps
    }
}

fn flat_difference(env: &EnvelopeSamples) -> Vec<f64> {
    let e2 = env.eps * env.eps;
    env.displacement.iter().flatten().map(|v| v / e2).collect()
}

#[derive(Debug, Clone)]
pub struct EpsilonFit {
    /// Extrapolated `lim (L_ε - G)/ε²`, per grid point.
    pub b: Vec<Vec<f64>>,
    pub c_d: f64,
    /// `‖B - C_d P‖∞ / ‖B‖∞` with `P` the predicted direction.
    pub residual: f64,
    /// `‖L_ε - G - ε² C_d P‖∞` per ε of the family.
    pub remainder: Vec<f64>,
    /// Ratios of consecutive remainders (1/16 for an ε⁴ remainder).
    pub remainder_ratios: Vec<f64>,
    /// Mean empirical exponent `log2(r(ε) / r(ε/2))`.
    pub remainder_order: f64,
}

/// Least-squares coefficient of `v` along `p`.
fn project(v: &[f64], p: &[f64]) -> f64 {
    let num: f64 = v.iter().zip(p).map(|(a, b)| a * b).sum();
    let den: f64 = p.iter().map(|b| b * b).sum();
    num / den
}

pub fn fit_epsilon2(samples: &CurveSamples, family: &[EnvelopeSamples], threshold: f64) -> Result<EpsilonFit> {
    if family.len() < 3 {
        return Err(Error::InvalidInput("extrapolation needs at least three values of ε".into()));
    }
    let dim = samples.d() + 1;
    let hs: Vec<f64> = family.iter().map(|e| expansion_variable(&e.offsets, e.eps)).collect();
    let values: Vec<Vec<f64>> = family.iter().map(flat_difference).collect();
    let b = extrapolate(&hs, &values);
    let p: Vec<f64> = predicted_direction(samples).into_iter().flatten().collect();
    let c_d = project(&b, &p);
    let resid: Vec<f64> = b.iter().zip(&p).map(|(x, y)| x - c_d * y).collect();
    let residual = sup_norm(&resid) / sup_norm(&b);
    if residual > threshold {
        return Err(Error::PoorConditioning { residual, threshold });
    }
    let remainder: Vec<f64> = family
        .iter()
        .zip(&values)
        .map(|(e, v)| {
            let e2 = e.eps * e.eps;
            v.iter().zip(&p).fold(0.0f64, |m, (a, q)| m.max((e2 * (a - c_d * q)).abs()))
        })
        .collect();
    let remainder_ratios: Vec<f64> = remainder.windows(2).map(|w| w[1] / w[0]).collect();
    let eps_ratio: Vec<f64> = family.windows(2).map(|w| w[0].eps / w[1].eps).collect();
    let orders: Vec<f64> = remainder_ratios.iter().zip(&eps_ratio).map(|(r, q)| -r.ln() / q.ln()).collect();
    let remainder_order = orders.iter().sum::<f64>() / orders.len() as f64;
    Ok(EpsilonFit { b: b.chunks(dim).map(|c| c.to_vec()).collect(), c_d, residual, remainder, remainder_ratios, remainder_order })
}

/// Per-ε summary: `(ε, residual, C_d estimate)` from `(L_ε - G)/ε²` alone.
pub fn epsilon_sweep(samples: &CurveSamples, family: &[EnvelopeSamples]) -> Vec<(f64, f64, f64)> {
    let p: Vec<f64> = predicted_direction(samples).into_iter().flatten().collect();
    family
        .iter()
        .map(|e| {
            let v = flat_difference(e);
            let c = project(&v, &p);
            let r: Vec<f64> = v.iter().zip(&p).map(|(a, q)| a - c * q).collect();
            (e.eps, sup_norm(&r) / sup_norm(&v), c)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct RecoveredOperator {
    pub eps: f64,
    /// `coeffs[j][m] = u_{j,ε}(x_m)`, `j = 0..d`.
    pub coeffs: Vec<Vec<f64>>,
    /// Coefficient of `∂^d`, which vanishes for a unit-Wronskian system.
    pub top: Vec<f64>,
}

/// Coefficients of the order-(d+1) operator annihilating the envelope.
pub fn recover_operator(env: &EnvelopeSamples) -> Result<RecoveredOperator> {
    let d = env.jets[0].len() - 2;
    let mut coeffs = vec![Vec::with_capacity(env.x.len()); d];
    let mut top = Vec::with_capacity(env.x.len());
    // The operator is frame independent; the local frame is well conditioned.
    for (jets, &x) in env.local.iter().zip(&env.x) {
        let cols: Vec<Vec<f64>> = jets[..=d].to_vec();
        let a = linalg::from_columns(&cols);
        let rhs: Vec<f64> = jets[d + 1].iter().map(|v| -v).collect();
        let u = linalg::solve(&a, &rhs).ok_or(Error::IllConditioned { x })?;
        for (j, c) in coeffs.iter_mut().enumerate() {
            c.push(u[j]);
        }
        top.push(u[d]);
    }
    Ok(RecoveredOperator { eps: env.eps, coeffs, top })
}

/// Extrapolated `lim (u_{j,ε} - u_j)/ε²` for every coefficient.
pub fn coefficient_drift(samples: &CurveSamples, family: &[EnvelopeSamples]) -> Result<Vec<Vec<f64>>> {
    let d = samples.d();
    let recovered = family.iter().map(recover_operator).collect::<Result<Vec<_>>>()?;
    let hs: Vec<f64> = family.iter().map(|e| expansion_variable(&e.offsets, e.eps)).collect();
    Ok((0..d)
        .map(|j| {
            let u = samples.op.coeffs[j].sample(&samples.x);
            let values: Vec<Vec<f64>> = recovered
                .iter()
                .map(|r| r.coeffs[j].iter().zip(&u).map(|(a, b)| (a - b) / (r.eps * r.eps)).collect())
                .collect();
            extrapolate(&hs, &values)
        })
        .collect())
}

/// Right-hand side of the (2,4)-KdV flow `L̇ = [Q_2, L]` for
/// `L = ∂⁴ + u∂² + v∂ + w`, `Q_2 = ∂² + u/2`:
///
/// * `u̇ = 2v' - 2u''`
/// * `v̇ = 2w' + v'' - u u' - 2u'''`
/// * `ẇ = w'' - (u u'' + v u' + u'''')/2`
pub fn kdv24_rhs(u: &[f64], v: &[f64], w: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let du: Vec<Vec<f64>> = (0..=4).map(|k| spectral_derivative(u, k)).collect();
    let dv: Vec<Vec<f64>> = (0..=2).map(|k| spectral_derivative(v, k)).collect();
    let dw: Vec<Vec<f64>> = (0..=2).map(|k| spectral_derivative(w, k)).collect();
    let n = u.len();
    let ud = (0..n).map(|i| 2.0 * dv[1][i] - 2.0 * du[2][i]).collect();
    let vd = (0..n).map(|i| 2.0 * dw[1][i] + dv[2][i] - u[i] * du[1][i] - 2.0 * du[3][i]).collect();
    let wd = (0..n).map(|i| dw[2][i] - 0.5 * (u[i] * du[2][i] + v[i] * du[1][i] + du[4][i])).collect();
    (ud, vd, wd)
}

#[derive(Debug, Clone)]
pub struct KdvCheck {
    /// Extrapolated drifts of `(u, v, w)`.
    pub drift: [Vec<f64>; 3],
    /// `time_scale · kdv24_rhs`.
    pub predicted: [Vec<f64>; 3],
    /// Relative sup-norm residuals per component.
    pub residuals: [f64; 3],
}

/// Compare the coefficient drift of a 3D envelope family with the
/// (2,4)-KdV flow run for time `time_scale · ε²`.
pub fn kdv24_drift_check(samples: &CurveSamples, family: &[EnvelopeSamples], time_scale: f64) -> Result<KdvCheck> {
    if samples.d() != 3 {
        return Err(Error::InvalidInput("the (2,4)-KdV comparison is for d = 3".into()));
    }
    let mut drift = coefficient_drift(samples, family)?;
    let op = &samples.op;
    let (u, v, w) = (op.coeffs[2].sample(&samples.x), op.coeffs[1].sample(&samples.x), op.coeffs[0].sample(&samples.x));
    let (ud, vd, wd) = kdv24_rhs(&u, &v, &w);
    let scale = |x: Vec<f64>| x.into_iter().map(|y| y * time_scale).collect::<Vec<_>>();
    let predicted = [scale(ud), scale(vd), scale(wd)];
    let (dw, dv, du) = (drift.remove(0), drift.remove(0), drift.remove(0));
    let drift = [du, dv, dw];
    let residuals = std::array::from_fn(|i| {
        let diff: Vec<f64> = drift[i].iter().zip(&predicted[i]).map(|(a, b)| a - b).collect();
        sup_norm(&diff) / sup_norm(&predicted[i])
    });
    Ok(KdvCheck { drift, predicted, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn free_operator_gives_monomials() {
        let s = fundamental_solutions(&CurveOperator::zero(3).unwrap(), 32).unwrap();
        for (x, f) in s.x.iter().zip(&s.frames) {
            let expect = [1.0, *x, x * x / 2.0, x * x * x / 6.0];
            assert!(dist(&f[0], &expect) < 1e-12);
        }
        assert!(s.max_wronskian_defect() < 1e-12);
    }

    #[test]
    fn wronskian_is_constant() {
        let op = CurveOperator::new(3, vec![TrigPoly::zero(), TrigPoly::zero(), TrigPoly::new(0.3, vec![(1, 0.1, 0.0)])]).unwrap();
        let s = fundamental_solutions(&op, DEFAULT_GRID).unwrap();
        assert!(s.max_wronskian_defect() < 1e-10);
    }

    #[test]
    fn step_halving() {
        let op = CurveOperator::new(2, vec![TrigPoly::zero(), TrigPoly::new(0.0, vec![(1, 0.0, 0.2)])]).unwrap();
        let a = fundamental_solutions_with(&op, 64, 1).unwrap();
        let b = fundamental_solutions_with(&op, 64, 2).unwrap();
        for (fa, fb) in a.frames.iter().zip(&b.frames) {
            for (ra, rb) in fa.iter().zip(fb) {
                assert!(dist(ra, rb) < 1e-10);
            }
        }
    }

    #[test]
    fn envelope_is_even_in_eps() {
        let s = fundamental_solutions(&CurveOperator::standard(3).unwrap(), 64).unwrap();
        let off = symmetric_offsets(3);
        let a = envelope(&s, 0.01, &off).unwrap();
        let b = envelope(&s, -0.01, &off).unwrap();
        for m in 0..s.x.len() {
            assert!(dist(a.value(m), b.value(m)) < 1e-10);
            assert!((a.wronskian(m) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn planar_envelope_matches_chord_tangency() {
        let s = fundamental_solutions(&CurveOperator::standard(2).unwrap(), 32).unwrap();
        let eps = 0.05;
        let env = envelope(&s, eps, &symmetric_offsets(2)).unwrap();
        let cross3 = |a: &[f64], b: &[f64]| vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        for m in 0..s.x.len() {
            let jets = s.jet(m, 40);
            let (p, q) = (taylor(&jets, -eps, 0), taylor(&jets, eps, 0));
            let (dp, dq) = (taylor(&jets, -eps, 1), taylor(&jets, eps, 1));
            let line = cross3(&p, &q);
            let a = cross3(&dp, &q);
            let b = cross3(&p, &dq);
            let dline: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let point = cross3(&line, &dline);
            let l = env.value(m);
            let c = project(l, &point);
            let err = dist(l, &point.iter().map(|v| v * c).collect::<Vec<_>>());
            assert!(err < 1e-9 * sup_norm(l), "x = {}: {err}", s.x[m]);
        }
    }

    #[test]
    fn free_cubic_drift_is_second_derivative() {
        let s = fundamental_solutions(&CurveOperator::zero(3).unwrap(), 32).unwrap();
        let fam = envelope_family(&s, &epsilon_grid()[..3], &symmetric_offsets(3)).unwrap();
        let fit = fit_epsilon2(&s, &fam, 1e-6).unwrap();
        assert!((fit.c_d - 1.0 / 6.0).abs() < 1e-6, "{}", fit.c_d);
    }

    #[test]
    fn planar_fit_has_fourth_order_remainder() {
        let s = fundamental_solutions(&CurveOperator::standard(2).unwrap(), 64).unwrap();
        let fam = envelope_family(&s, &epsilon_grid(), &symmetric_offsets(2)).unwrap();
        let fit = fit_epsilon2(&s, &fam, 1e-6).unwrap();
        assert!((fit.c_d - 0.5).abs() < 1e-7);
        assert!((fit.remainder_order - 4.0).abs() < 0.05, "{}", fit.remainder_order);
    }

    #[test]
    fn constants_follow_second_moment_of_offsets() {
        for d in [4, 5] {
            let s = fundamental_solutions(&CurveOperator::standard(d).unwrap(), 16).unwrap();
            let off = symmetric_offsets(d);
            let fam = envelope_family(&s, &epsilon_grid()[..4], &off).unwrap();
            let fit = fit_epsilon2(&s, &fam, 1e-5).unwrap();
            assert!((fit.c_d / predicted_constant(&off) - 1.0).abs() < 1e-6, "d={d}");
        }
    }

    #[test]
    fn recovered_operator_converges() {
        let op = CurveOperator::standard(3).unwrap();
        let s = fundamental_solutions(&op, 32).unwrap();
        let off = symmetric_offsets(3);
        let err = |eps: f64| {
            let r = recover_operator(&envelope(&s, eps, &off).unwrap()).unwrap();
            assert!(sup_norm(&r.top) < 1e-9);
            (0..3).map(|j| dist(&r.coeffs[j], &op.coeffs[j].sample(&s.x))).fold(0.0, f64::max)
        };
        let ratio = err(0.01) / err(0.02);
        assert!((ratio - 0.25).abs() < 0.01, "{ratio}");
    }

    #[test]
    fn kdv24_rhs_examples() {
        let grid = uniform_grid(64);
        let zero = vec![0.0; 64];
        let (a, b, c) = kdv24_rhs(&zero, &zero, &zero);
        assert!(sup_norm(&a) + sup_norm(&b) + sup_norm(&c) == 0.0);
        let u: Vec<f64> = grid.iter().map(|x| x.cos()).collect();
        let (ud, vd, wd) = kdv24_rhs(&u, &zero, &zero);
        for (i, x) in grid.iter().enumerate() {
            assert!((ud[i] - 2.0 * x.cos()).abs() < 1e-9);
            assert!((vd[i] - (x.cos() * x.sin() - 2.0 * x.sin())).abs() < 1e-9);
            assert!((wd[i] - 0.5 * (x.cos().powi(2) - x.cos())).abs() < 1e-9);
        }
    }

    #[test]
    fn extrapolation_is_exact_on_polynomials() {
        let hs = [0.4, 0.2, 0.1];
        let vals: Vec<Vec<f64>> = hs.iter().map(|h| vec![3.0 + 2.0 * h - h * h]).collect();
        assert!((extrapolate(&hs, &vals)[0] - 3.0).abs() < 1e-13);
    }
}
