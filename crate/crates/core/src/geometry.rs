//! Points, motions and one-parameter flows on the supported manifolds.
//!
//! Sign convention on the sphere: the flow of generator `i` rotates about
//! coordinate axis `i`, moving `e_j` toward `e_k` for `(i, j, k)` a cyclic
//! permutation of `(1, 2, 3)`. This is the flow of the vector field
//! `x_j d/dx_k - x_k d/dx_j`, so every module that differentiates along a
//! flow inherits it.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A supported homogeneous manifold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Manifold {
    Circle,
    /// Flat torus of the given dimension, acted on by shifts.
    Torus(usize),
    /// Unit sphere in R^3, acted on by SO(3).
    Sphere2,
}

impl Manifold {
    pub fn torus(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(invalid("torus dimension must be positive"));
        }
        Ok(Manifold::Torus(m))
    }

    /// Manifold dimension `m`.
    pub fn dim(&self) -> usize {
        match *self {
            Manifold::Circle => 1,
            Manifold::Torus(m) => m,
            Manifold::Sphere2 => 2,
        }
    }

    /// Number of generators `d` (dimension of the acting group).
    pub fn generator_count(&self) -> usize {
        match *self {
            Manifold::Circle => 1,
            Manifold::Torus(m) => m,
            Manifold::Sphere2 => 3,
        }
    }

    /// Total invariant measure.
    pub fn measure(&self) -> f64 {
        match *self {
            Manifold::Circle => TAU,
            Manifold::Torus(m) => TAU.powi(m as i32),
            Manifold::Sphere2 => 4.0 * PI,
        }
    }

    pub fn diameter(&self) -> f64 {
        match *self {
            Manifold::Circle | Manifold::Sphere2 => PI,
            Manifold::Torus(m) => PI * (m as f64).sqrt(),
        }
    }

    /// Base point `o`: angle zero on tori, the north pole on the sphere.
    pub fn origin(&self) -> Point {
        match *self {
            Manifold::Circle => Point::Circle(0.0),
            Manifold::Torus(m) => Point::Torus(vec![0.0; m]),
            Manifold::Sphere2 => Point::Sphere([0.0, 0.0, 1.0]),
        }
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> {
        (1..=self.generator_count()).map(Generator)
    }

    pub fn check_generator(&self, j: Generator) -> Result<()> {
        let count = self.generator_count();
        if j.0 == 0 || j.0 > count {
            return Err(Error::InvalidGenerator {
                manifold: *self,
                index: j.0,
                count,
            });
        }
        Ok(())
    }

    pub(crate) fn expect(&self, found: Manifold) -> Result<()> {
        if *self != found {
            return Err(Error::ManifoldMismatch { expected: *self, found });
        }
        Ok(())
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Manifold::Circle => write!(f, "circle"),
            Manifold::Torus(m) => write!(f, "torus{m}"),
            Manifold::Sphere2 => write!(f, "sphere2"),
        }
    }
}

impl FromStr for Manifold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circle" | "s1" => Ok(Manifold::Circle),
            "sphere" | "sphere2" | "s2" => Ok(Manifold::Sphere2),
            _ => match s.strip_prefix("torus") {
                Some(m) => Manifold::torus(
                    m.parse()
                        .map_err(|_| invalid(format!("bad torus dimension in {s:?}")))?,
                ),
                None => Err(invalid(format!("unknown manifold {s:?}"))),
            },
        }
    }
}

impl TryFrom<String> for Manifold {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Manifold> for String {
    fn from(m: Manifold) -> String {
        m.to_string()
    }
}

/// Index `j` (1-based) into the generator family `X_1..X_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator(pub usize);

/// A point of a supported manifold.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    /// Angle in `[0, 2pi)`.
    Circle(f64),
    /// Angles, each in `[0, 2pi)`.
    Torus(Vec<f64>),
    /// Unit vector.
    Sphere([f64; 3]),
}

pub(crate) fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Shortest signed distance between two angles, in `[-pi, pi]`.
pub(crate) fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

impl Point {
    pub fn circle(angle: f64) -> Self {
        Point::Circle(wrap_angle(angle))
    }

    pub fn torus(angles: &[f64]) -> Self {
        Point::Torus(angles.iter().map(|&a| wrap_angle(a)).collect())
    }

    /// Normalizes `v` onto the unit sphere.
    pub fn sphere(v: [f64; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(invalid("sphere point must be a nonzero finite vector"));
        }
        Ok(Point::Sphere([v[0] / n, v[1] / n, v[2] / n]))
    }

    /// Sphere point from colatitude `theta` and longitude `phi`.
    pub fn sphere_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Point::Sphere([st * cp, st * sp, ct])
    }

    pub fn manifold(&self) -> Manifold {
        match self {
            Point::Circle(_) => Manifold::Circle,
            Point::Torus(a) => Manifold::Torus(a.len()),
            Point::Sphere(_) => Manifold::Sphere2,
        }
    }

    pub fn coords(&self) -> Vec<f64> {
        match self {
            Point::Circle(t) => vec![*t],
            Point::Torus(a) => a.clone(),
            Point::Sphere(v) => v.to_vec(),
        }
    }

    /// Rebuilds a point from raw coordinates (inverse of [`Point::coords`]).
    pub fn from_coords(manifold: Manifold, c: &[f64]) -> Result<Self> {
        match manifold {
            Manifold::Circle if c.len() == 1 => Ok(Point::circle(c[0])),
            Manifold::Torus(m) if c.len() == m => Ok(Point::torus(c)),
            Manifold::Sphere2 if c.len() == 3 => {
                // unit vectors are kept bit-for-bit so serialization round-trips
                let p = Point::Sphere([c[0], c[1], c[2]]);
                if p.is_valid() {
                    Ok(p)
                } else {
                    Point::sphere([c[0], c[1], c[2]])
                }
            }
            _ => Err(invalid(format!(
                "{} coordinates do not describe a point of {manifold}",
                c.len()
            ))),
        }
    }

    pub fn is_valid(&self) -> bool {
        match self {
            Point::Circle(t) => (0.0..TAU).contains(t),
            Point::Torus(a) => a.iter().all(|t| (0.0..TAU).contains(t)),
            Point::Sphere(v) => {
                let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                (n - 1.0).abs() <= 1e-12
            }
        }
    }
}

/// An element of the acting group.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupElement {
    /// Translation of a circle (one angle) or torus (one angle per factor).
    Shift(Vec<f64>),
    /// Rotation of the sphere.
    Rotation(Matrix3<f64>),
}

const ORTHO_TOL: f64 = 1e-10;
const DRIFT_TOL: f64 = 1e-12;

/// `R_i(t)`: rotation by `t` about coordinate axis `axis` (1-based).
pub fn axis_rotation(axis: usize, t: f64) -> Matrix3<f64> {
    let (s, c) = t.sin_cos();
    let i = axis - 1;
    let j = (i + 1) % 3;
    let k = (i + 2) % 3;
    let mut r = Matrix3::zeros();
    r[(i, i)] = 1.0;
    r[(j, j)] = c;
    r[(k, k)] = c;
    r[(k, j)] = s;
    r[(j, k)] = -s;
    r
}

fn orthogonality_drift(r: &Matrix3<f64>) -> f64 {
    (r.transpose() * r - Matrix3::identity()).amax()
}

impl GroupElement {
    pub fn identity(manifold: Manifold) -> Self {
        match manifold {
            Manifold::Circle => GroupElement::Shift(vec![0.0]),
            Manifold::Torus(m) => GroupElement::Shift(vec![0.0; m]),
            Manifold::Sphere2 => GroupElement::Rotation(Matrix3::identity()),
        }
    }

    pub fn shift(angles: &[f64]) -> Self {
        GroupElement::Shift(angles.iter().map(|&a| wrap_angle(a)).collect())
    }

    /// Validated rotation: orthogonal with determinant +1 within `1e-10`.
    pub fn rotation(m: Matrix3<f64>) -> Result<Self> {
        if orthogonality_drift(&m) > ORTHO_TOL || (m.determinant() - 1.0).abs() > ORTHO_TOL {
            return Err(invalid("matrix is not a rotation"));
        }
        Ok(GroupElement::Rotation(m))
    }

    /// `R_z(alpha) R_y(beta) R_z(gamma)`.
    pub fn euler_zyz(alpha: f64, beta: f64, gamma: f64) -> Self {
        GroupElement::Rotation(axis_rotation(3, alpha) * axis_rotation(2, beta) * axis_rotation(3, gamma))
    }

    /// `exp(t X_j)`.
    pub fn exp_generator(manifold: Manifold, j: Generator, t: f64) -> Result<Self> {
        manifold.check_generator(j)?;
        Ok(match manifold {
            Manifold::Circle => GroupElement::shift(&[t]),
            Manifold::Torus(m) => {
                let mut s = vec![0.0; m];
                s[j.0 - 1] = t;
                GroupElement::shift(&s)
            }
            Manifold::Sphere2 => GroupElement::Rotation(axis_rotation(j.0, t)),
        })
    }

    /// A group element carrying the base point `o` to `x`.
    pub fn carrying_origin_to(x: &Point) -> Self {
        match x {
            Point::Circle(t) => GroupElement::Shift(vec![*t]),
            Point::Torus(a) => GroupElement::Shift(a.clone()),
            Point::Sphere(v) => {
                let theta = v[2].clamp(-1.0, 1.0).acos();
                let phi = v[1].atan2(v[0]);
                GroupElement::Rotation(axis_rotation(3, phi) * axis_rotation(2, theta))
            }
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            GroupElement::Shift(s) => GroupElement::Shift(s.iter().map(|&a| wrap_angle(-a)).collect()),
            GroupElement::Rotation(r) => GroupElement::Rotation(r.transpose()),
        }
    }

    /// Group product `self * other`, acting as `self . (other . x)`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        match (self, other) {
            (GroupElement::Shift(a), GroupElement::Shift(b)) if a.len() == b.len() => Ok(GroupElement::Shift(
                a.iter().zip(b).map(|(x, y)| wrap_angle(x + y)).collect(),
            )),
            (GroupElement::Rotation(a), GroupElement::Rotation(b)) => {
                let mut r = a * b;
                if orthogonality_drift(&r) > DRIFT_TOL {
                    // one Newton-Schulz step toward the polar factor
                    r = r * (Matrix3::identity() * 3.0 - r.transpose() * r) * 0.5;
                }
                Ok(GroupElement::Rotation(r))
            }
            _ => Err(invalid("group elements act on different manifolds")),
        }
    }

    /// `g . x`.
    pub fn act(&self, x: &Point) -> Result<Point> {
        match (self, x) {
            (GroupElement::Shift(s), Point::Circle(t)) if s.len() == 1 => Ok(Point::circle(t + s[0])),
            (GroupElement::Shift(s), Point::Torus(a)) if s.len() == a.len() => {
                Ok(Point::Torus(a.iter().zip(s).map(|(t, d)| wrap_angle(t + d)).collect()))
            }
            (GroupElement::Rotation(r), Point::Sphere(v)) => {
                let w = r * Vector3::from(*v);
                Point::sphere([w[0], w[1], w[2]])
            }
            _ => Err(invalid(format!(
                "group element does not act on points of {}",
                x.manifold()
            ))),
        }
    }

    pub(crate) fn rotate_raw(&self, v: &[f64; 3]) -> [f64; 3] {
        match self {
            GroupElement::Rotation(r) => {
                let w = r * Vector3::from(*v);
                [w[0], w[1], w[2]]
            }
            GroupElement::Shift(_) => *v,
        }
    }
}

/// `exp(t X_j) . x`.
pub fn flow(manifold: Manifold, j: Generator, t: f64, x: &Point) -> Result<Point> {
    manifold.expect(x.manifold())?;
    GroupElement::exp_generator(manifold, j, t)?.act(x)
}

/// Geodesic distance for the round metrics.
///
/// # Panics
///
/// If the points belong to different manifolds.
pub fn geodesic_distance(x: &Point, y: &Point) -> f64 {
    match (x, y) {
        (Point::Circle(a), Point::Circle(b)) => angle_diff(*a, *b).abs(),
        (Point::Torus(a), Point::Torus(b)) if a.len() == b.len() => a
            .iter()
            .zip(b)
            .map(|(s, t)| angle_diff(*s, *t).powi(2))
            .sum::<f64>()
            .sqrt(),
        (Point::Sphere(a), Point::Sphere(b)) => sphere_distance(a, b),
        _ => panic!("geodesic_distance between points of different manifolds"),
    }
}

pub(crate) fn sphere_distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0).acos()
}
