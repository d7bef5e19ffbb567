//! Serialisation of polygons, traces and spectral data.
//!
//! Polygons are JSON objects `{"d", "n", "vertices", "monodromy"}`; exact
//! entries are `"p/q"` strings and float entries plain numbers. Traces are
//! CSV with fixed headers. Object keys come out sorted, so identical inputs
//! give byte-identical files.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::continuum::{CurveSamples, EnvelopeSamples, EpsilonFit};
use crate::coords::Xyz3;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::projective::TwistedPolygon;
use crate::scalar::{format_scalar, parse_scalar, Scalar};
use crate::spectral::{Integrals3D, SpectralFunction};

fn scalar_json<S: Scalar>(v: &S) -> Value {
    if S::EXACT {
        Value::String(format_scalar(v))
    } else {
        json!(v.to_f64())
    }
}

fn scalar_from_json<S: Scalar>(v: &Value) -> Result<S> {
    let parsed = match v {
        Value::String(s) => parse_scalar(s),
        Value::Number(n) => n.as_f64().map(|f| {
            if S::EXACT {
                // Integers stay exact; other JSON numbers go through their
                // decimal text.
                parse_scalar(&n.to_string()).unwrap_or_else(|| S::from_f64(f))
            } else {
                S::from_f64(f)
            }
        }),
        _ => None,
    };
    parsed.ok_or_else(|| Error::InvalidInput(format!("not a scalar: {v}")))
}

fn matrix_json<S: Scalar>(m: &Matrix<S>) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(scalar_json).collect())).collect())
}

fn matrix_from_json<S: Scalar>(v: &Value, what: &str) -> Result<Matrix<S>> {
    let rows = v.as_array().ok_or_else(|| Error::InvalidInput(format!("{what} must be an array")))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::InvalidInput(format!("{what} rows must be arrays")))?
                .iter()
                .map(scalar_from_json)
                .collect()
        })
        .collect()
}

pub fn polygon_to_json<S: Scalar>(poly: &TwistedPolygon<S>) -> Value {
    let vertices: Matrix<S> = poly.vertices.iter().map(|p| p.coords.clone()).collect();
    json!({
        "d": poly.d,
        "n": poly.n,
        "vertices": matrix_json(&vertices),
        "monodromy": matrix_json(&poly.monodromy),
    })
}

pub fn polygon_from_json<S: Scalar>(v: &Value) -> Result<TwistedPolygon<S>> {
    let field = |k: &str| v.get(k).ok_or_else(|| Error::InvalidInput(format!("missing field {k:?}")));
    let vertices = matrix_from_json(field("vertices")?, "vertices")?;
    let monodromy = matrix_from_json(field("monodromy")?, "monodromy")?;
    let poly = TwistedPolygon::new(vertices, monodromy)?;
    for (k, expect) in [("d", poly.d), ("n", poly.n)] {
        if let Some(given) = v.get(k) {
            if given.as_u64() != Some(expect as u64) {
                return Err(Error::InvalidInput(format!("field {k:?} is {given}, data has {expect}")));
            }
        }
    }
    Ok(poly)
}

pub fn polygon_to_string<S: Scalar>(poly: &TwistedPolygon<S>) -> String {
    let mut s = serde_json::to_string_pretty(&polygon_to_json(poly)).expect("JSON values always serialise");
    s.push('\n');
    s
}

pub fn polygon_from_str<S: Scalar>(s: &str) -> Result<TwistedPolygon<S>> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("bad polygon JSON: {e}")))?;
    polygon_from_json(&v)
}

/// `step,i,x,y,z`, one row per step and vertex index.
pub fn orbit_csv<S: Scalar>(trace: &[Xyz3<S>]) -> String {
    let mut out = String::from("step,i,x,y,z\n");
    for (step, xyz) in trace.iter().enumerate() {
        for i in 0..xyz.n() {
            let _ = writeln!(
                out,
                "{step},{i},{},{},{}",
                format_scalar(&xyz.x[i]),
                format_scalar(&xyz.y[i]),
                format_scalar(&xyz.z[i])
            );
        }
    }
    out
}

/// `step,I0..Iq,J0..Jq,G0..Gq`.
pub fn invariants_csv<S: Scalar>(trace: &[Integrals3D<S>]) -> String {
    let Some(first) = trace.first() else {
        return String::from("step\n");
    };
    let mut head = vec!["step".to_string()];
    for (name, v) in [("I", &first.i), ("J", &first.j), ("G", &first.g)] {
        head.extend((0..v.len()).map(|k| format!("{name}{k}")));
    }
    let mut out = head.join(",") + "\n";
    for (step, ints) in trace.iter().enumerate() {
        let row: Vec<String> = std::iter::once(step.to_string()).chain(ints.flatten().iter().map(format_scalar)).collect();
        out += &(row.join(",") + "\n");
    }
    out
}

/// `{k_power: {lambda_power: value}}` with zero coefficients omitted.
pub fn spectral_json<S: Scalar>(r: &SpectralFunction<S>) -> Value {
    let mut outer = Map::new();
    for (m, poly) in r.coeffs.iter().enumerate() {
        if poly.is_zero() {
            continue;
        }
        let inner: Map<String, Value> = poly.terms().map(|(e, c)| (e.to_string(), Value::String(format_scalar(c)))).collect();
        outer.insert(m.to_string(), Value::Object(inner));
    }
    Value::Object(outer)
}

/// `x,component,G,L_eps,B_fit,predicted_B` for one envelope of a family.
pub fn continuum_csv(samples: &CurveSamples, env: &EnvelopeSamples, fit: &EpsilonFit, predicted: &[Vec<f64>]) -> String {
    let mut out = String::from("x,component,G,L_eps,B_fit,predicted_B\n");
    for (m, &x) in samples.x.iter().enumerate() {
        for c in 0..=samples.d() {
            let _ = writeln!(
                out,
                "{x},{c},{},{},{},{}",
                samples.frames[m][0][c],
                env.jets[m][0][c],
                fit.b[m][c],
                fit.c_d * predicted[m][c]
            );
        }
    }
    out
}

/// `eps,residual,C_d_estimate`.
pub fn sweep_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("eps,residual,C_d_estimate\n");
    for (e, r, c) in rows {
        let _ = writeln!(out, "{e},{r},{c}");
    }
    out
}
