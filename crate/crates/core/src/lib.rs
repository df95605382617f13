//! Band-limited functions on the circle, the m-torus and the 2-sphere.
//!
//! The crate represents trigonometric and spherical polynomials in
//! coefficient space, differentiates them along the generators of the
//! acting group (shifts on tori, coordinate-axis rotations on the sphere),
//! reconstructs those derivatives from translates through the Riesz
//! interpolation operators, and checks Bernstein and Nikolskii type
//! inequalities numerically. Each check produces a [`verify::CheckReport`].
//!
//! Module map:
//!
//! * [`geometry`]: manifolds, points, group elements, flows, distances.
//! * [`norms`]: quadrature rules, `L_p` and sup norms.
//! * [`bandlimited`]: the [`BandLimited`] type and its exact operators.
//! * [`riesz`]: Riesz interpolation operators with certified truncation.
//! * [`lattice`]: `(r, N)`-lattices and lattice-sampled norms.
//! * [`verify`]: the inequality/identity harness.
//! * [`suite`]: predefined suites and report files.

// `!(x > 0.0)` deliberately rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bandlimited;
mod error;
pub mod geometry;
pub mod lattice;
pub mod norms;
pub mod par;
pub mod random;
pub mod riesz;
pub mod suite;
pub mod summation;
pub mod verify;

pub use bandlimited::BandLimited;
pub use error::{Error, Result};
pub use geometry::{Generator, GroupElement, Manifold, Point};
pub use norms::{NormParams, QuadratureRule};
pub use num_complex::Complex64;
