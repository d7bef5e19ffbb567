//! Higher pentagram maps on twisted polygons in projective d-space.
//!
//! The crate is organised around the objects of the theory:
//!
//! * [`projective`]: points, hyperplanes, twisted polygons, lifts and
//!   recurrence coefficients;
//! * [`maps`]: diagonal hyperplanes, the general maps `T_{p,r}`, the
//!   centered higher map and the duality involutions;
//! * [`coords`]: `(a,b,c)` and `(x,y,z)` coordinates in 3D, the 2D `(x,y)`
//!   coordinates and their closed-form dynamics;
//! * [`lax`], [`spectral`], [`codes`]: Lax matrices with spectral parameter,
//!   monodromy, the spectral function and its integrals;
//! * [`continuum`]: envelopes of smooth curves and the KdV-type limit.
//!
//! Everything is generic over [`Scalar`], with exact rationals and `f64`
//! as the two backends.

pub mod codes;
pub mod continuum;
pub mod coords;
pub mod error;
pub mod io;
pub mod laurent;
pub mod lax;
pub mod linalg;
pub mod maps;
pub mod projective;
pub mod random;
pub mod scalar;
pub mod spectral;
pub mod upoly;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
