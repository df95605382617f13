//! Band-limited functions in coefficient space.
//!
//! Coefficient layouts:
//!
//! * circle: `c_k`, `k = -n..=n`, stored at `k + n`;
//! * torus `T^m`: `c_k` for `max_i |k_i| <= n`, row-major with the first
//!   angle slowest, each axis stored at `k_i + n`;
//! * sphere: `c_{l,m}` in the orthonormal basis `Y_l^m`, row-major in
//!   `(l, m)`: index `l^2 + l + m`.
//!
//! The circle and torus bases `e^{i k.t}` are orthogonal but not
//! normalized: `||e^{i k.t}||_2^2 = (2 pi)^m`.

mod polynomial;
pub(crate) mod sphere;

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{Generator, GroupElement, Manifold, Point};
use crate::norms::quadrature::Layout;
use crate::norms::QuadratureRule;
use crate::summation::pairwise_sum_by;

pub use polynomial::{restrict_polynomial, Monomial};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A trigonometric (circle, torus) or spherical polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "Repr", try_from = "Repr")]
pub struct BandLimited {
    manifold: Manifold,
    degree: usize,
    coeffs: Vec<Complex64>,
    real_valued: bool,
}

/// Serialized form: `{manifold, degree, coeffs: [[re, im], ...], real}` with
/// coefficients in the layout documented at module level.
#[derive(Serialize, Deserialize)]
struct Repr {
    manifold: Manifold,
    degree: usize,
    coeffs: Vec<[f64; 2]>,
    #[serde(default)]
    real: bool,
}

impl From<BandLimited> for Repr {
    fn from(f: BandLimited) -> Repr {
        Repr {
            manifold: f.manifold,
            degree: f.degree,
            coeffs: f.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            real: f.real_valued,
        }
    }
}

impl TryFrom<Repr> for BandLimited {
    type Error = Error;
    fn try_from(r: Repr) -> Result<Self> {
        let coeffs = r.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect();
        let f = BandLimited::from_coeffs(r.manifold, r.degree, coeffs)?;
        if r.real {
            f.into_real()
        } else {
            Ok(f)
        }
    }
}

/// Number of coefficients for a given manifold and degree.
pub fn coeff_len(manifold: Manifold, degree: usize) -> usize {
    match manifold {
        Manifold::Circle => 2 * degree + 1,
        Manifold::Torus(m) => (2 * degree + 1).pow(m as u32),
        Manifold::Sphere2 => sphere::lm_len(degree),
    }
}

impl BandLimited {
    pub fn zeros(manifold: Manifold, degree: usize) -> Self {
        BandLimited {
            manifold,
            degree,
            coeffs: vec![Complex64::default(); coeff_len(manifold, degree)],
            real_valued: true,
        }
    }

    pub fn from_coeffs(manifold: Manifold, degree: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let expected = coeff_len(manifold, degree);
        if coeffs.len() != expected {
            return Err(invalid(format!(
                "{manifold} degree {degree} needs {expected} coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(invalid("coefficients must be finite"));
        }
        Ok(BandLimited {
            manifold,
            degree,
            coeffs,
            real_valued: false,
        })
    }

    /// The constant function with value `value`.
    pub fn constant(manifold: Manifold, value: f64) -> Self {
        let mut f = BandLimited::zeros(manifold, 0);
        f.coeffs[0] = match manifold {
            // Y_0^0 = 1 / sqrt(4 pi)
            Manifold::Sphere2 => Complex64::new(value * (4.0 * std::f64::consts::PI).sqrt(), 0.0),
            _ => Complex64::new(value, 0.0),
        };
        f
    }

    /// `e^{i k t}` on the circle, as a polynomial of degree `degree >= |k|`.
    pub fn circle_mode(degree: usize, k: i64) -> Result<Self> {
        if k.unsigned_abs() as usize > degree {
            return Err(invalid(format!("mode {k} exceeds degree {degree}")));
        }
        let mut f = BandLimited::zeros(Manifold::Circle, degree);
        f.coeffs[(k + degree as i64) as usize] = Complex64::new(1.0, 0.0);
        f.real_valued = k == 0;
        Ok(f)
    }

    /// `Y_l^m` on the sphere, as a polynomial of degree `degree >= l`.
    pub fn spherical_harmonic(degree: usize, l: usize, m: i64) -> Result<Self> {
        if l > degree || m.unsigned_abs() as usize > l {
            return Err(invalid(format!("no Y_{l}^{m} in degree {degree}")));
        }
        let mut f = BandLimited::zeros(Manifold::Sphere2, degree);
        f.coeffs[sphere::lm_index(l, m)] = Complex64::new(1.0, 0.0);
        f.real_valued = m == 0;
        Ok(f)
    }

    /// `e^{i k . t}` on the torus.
    pub fn torus_mode(m: usize, degree: usize, k: &[i64]) -> Result<Self> {
        let manifold = Manifold::torus(m)?;
        if k.len() != m || k.iter().any(|&ki| ki.unsigned_abs() as usize > degree) {
            return Err(invalid("torus mode out of range"));
        }
        let mut f = BandLimited::zeros(manifold, degree);
        let idx = torus_index(degree, k);
        f.coeffs[idx] = Complex64::new(1.0, 0.0);
        f.real_valued = k.iter().all(|&ki| ki == 0);
        Ok(f)
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Whether the function is flagged real-valued (conjugate-symmetric).
    pub fn real_valued(&self) -> bool {
        self.real_valued
    }

    /// Sets the real-valued flag after checking conjugate symmetry to `1e-12`.
    pub fn into_real(mut self) -> Result<Self> {
        if !self.is_conjugate_symmetric(1e-12) {
            return Err(invalid("coefficients are not conjugate-symmetric"));
        }
        self.real_valued = true;
        Ok(self)
    }

    /// Conjugate-symmetry relations of a real function: `c_{-k} = conj(c_k)`
    /// on tori, `c_{l,-m} = (-1)^m conj(c_{l,m})` on the sphere.
    pub fn is_conjugate_symmetric(&self, tol: f64) -> bool {
        let scale = self.max_abs().max(1.0);
        match self.manifold {
            Manifold::Circle | Manifold::Torus(_) => {
                let len = self.coeffs.len();
                (0..len).all(|i| (self.coeffs[len - 1 - i] - self.coeffs[i].conj()).norm() <= tol * scale)
            }
            Manifold::Sphere2 => (0..=self.degree).all(|l| {
                (0..=l as i64).all(|m| {
                    let c = self.coeffs[sphere::lm_index(l, m)].conj();
                    let c = if m % 2 == 0 { c } else { -c };
                    (self.coeffs[sphere::lm_index(l, -m)] - c).norm() <= tol * scale
                })
            }),
        }
    }

    /// Keeps the real-valued flag only where the coefficients still satisfy
    /// the symmetry relations (results of real operators on real inputs).
    pub(crate) fn with_real_flag(mut self, flag: bool) -> Self {
        self.real_valued = flag && self.is_conjugate_symmetric(1e-12);
        self
    }

    /// Frequency vectors of all coefficients (circle and torus).
    pub(crate) fn modes(&self) -> Vec<Vec<i64>> {
        (0..self.coeffs.len()).map(|i| self.mode(i)).collect()
    }

    pub fn circle_coeff(&self, k: i64) -> Complex64 {
        assert_eq!(self.manifold, Manifold::Circle);
        if k.unsigned_abs() as usize > self.degree {
            return Complex64::default();
        }
        self.coeffs[(k + self.degree as i64) as usize]
    }

    pub fn sphere_coeff(&self, l: usize, m: i64) -> Complex64 {
        assert_eq!(self.manifold, Manifold::Sphere2);
        if l > self.degree || m.unsigned_abs() as usize > l {
            return Complex64::default();
        }
        self.coeffs[sphere::lm_index(l, m)]
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Same function represented at degree `degree` (zero-padded or truncated).
    pub fn with_degree(&self, degree: usize) -> Self {
        let mut out = BandLimited::zeros(self.manifold, degree);
        out.real_valued = self.real_valued;
        let common = self.degree.min(degree);
        match self.manifold {
            Manifold::Circle => {
                for k in -(common as i64)..=common as i64 {
                    out.coeffs[(k + degree as i64) as usize] = self.coeffs[(k + self.degree as i64) as usize];
                }
            }
            Manifold::Torus(_) => {
                for (i, c) in self.coeffs.iter().enumerate() {
                    let k = torus_multi(self.degree, self.manifold.dim(), i);
                    if k.iter().all(|&ki| ki.unsigned_abs() as usize <= common) {
                        out.coeffs[torus_index(degree, &k)] = *c;
                    }
                }
            }
            Manifold::Sphere2 => {
                let len = sphere::lm_len(common);
                out.coeffs[..len].copy_from_slice(&self.coeffs[..len]);
            }
        }
        out
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        BandLimited {
            manifold: self.manifold,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            real_valued: self.real_valued && s.im == 0.0,
        }
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self> {
        self.manifold.expect(other.manifold)?;
        let degree = self.degree.max(other.degree);
        let a = self.with_degree(degree);
        let b = other.with_degree(degree);
        Ok(BandLimited {
            manifold: self.manifold,
            degree,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y * sign).collect(),
            real_valued: self.real_valued && other.real_valued,
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1.0)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1.0)
    }

    /// `L^2` norm computed from the coefficients (Parseval).
    pub fn l2_norm(&self) -> f64 {
        let s = pairwise_sum_by(self.coeffs.len(), |i| self.coeffs[i].norm_sqr());
        (s * self.basis_norm_sqr()).sqrt()
    }

    fn basis_norm_sqr(&self) -> f64 {
        match self.manifold {
            Manifold::Sphere2 => 1.0,
            m => TAU.powi(m.dim() as i32),
        }
    }

    /// `f(x)`.
    pub fn eval(&self, x: &Point) -> Result<Complex64> {
        self.manifold.expect(x.manifold())?;
        Ok(match x {
            Point::Circle(t) => horner(&self.coeffs, self.degree, *t),
            Point::Torus(a) => eval_torus(&self.coeffs, self.degree, a),
            Point::Sphere(v) => sphere::eval(self.degree, &self.coeffs, v),
        })
    }

    /// `f` at every node of `rule`, in node order.
    pub fn eval_on_rule(&self, rule: &QuadratureRule) -> Result<Vec<Complex64>> {
        self.manifold.expect(rule.manifold())?;
        Ok(match &rule.layout {
            Layout::SphereGrid { rows, phis, .. } => sphere::synthesize_grid(self.degree, &self.coeffs, rows, phis),
            Layout::Equispaced { .. } => self.eval_many(rule.nodes()),
        })
    }

    /// `f` at each of `points` (all on `f`'s manifold).
    pub(crate) fn eval_many(&self, points: &[Point]) -> Vec<Complex64> {
        crate::par::map_slice(points, |x| match x {
            Point::Circle(t) => horner(&self.coeffs, self.degree, *t),
            Point::Torus(a) => eval_torus(&self.coeffs, self.degree, a),
            Point::Sphere(v) => sphere::eval(self.degree, &self.coeffs, v),
        })
    }

    /// `x -> f(g . x)`.
    ///
    /// Shifts act exactly by phase multiplication. Rotations evaluate `f` at
    /// the rotated nodes of `rule` and project back; rotations preserve the
    /// harmonic degree, so the result has the degree of `f`.
    pub fn translate(&self, g: &GroupElement, rule: &QuadratureRule) -> Result<Self> {
        match (self.manifold, g) {
            (Manifold::Circle | Manifold::Torus(_), GroupElement::Shift(s)) if s.len() == self.manifold.dim() => {
                let mut out = self.clone();
                for (i, c) in out.coeffs.iter_mut().enumerate() {
                    let k = self.mode(i);
                    let phase: f64 = k.iter().zip(s).map(|(&ki, si)| ki as f64 * si).sum();
                    *c *= Complex64::from_polar(1.0, phase);
                }
                Ok(out)
            }
            (Manifold::Sphere2, GroupElement::Rotation(_)) => {
                rule_resolves(rule, self.degree)?;
                Manifold::Sphere2.expect(rule.manifold())?;
                let rotated: Vec<Point> = rule
                    .nodes()
                    .iter()
                    .map(|x| match x {
                        Point::Sphere(v) => Point::Sphere(g.rotate_raw(v)),
                        _ => unreachable!(),
                    })
                    .collect();
                let values = self.eval_many(&rotated);
                Ok(project(&values, rule, self.degree)?.with_real_flag(self.real_valued))
            }
            _ => Err(invalid(format!("group element does not act on {}", self.manifold))),
        }
    }

    /// Torus/circle frequency vector of coefficient `i`.
    fn mode(&self, i: usize) -> Vec<i64> {
        match self.manifold {
            Manifold::Circle => vec![i as i64 - self.degree as i64],
            Manifold::Torus(m) => torus_multi(self.degree, m, i),
            Manifold::Sphere2 => unreachable!(),
        }
    }

    /// Exact `D_j f`.
    pub fn apply_generator(&self, j: Generator) -> Result<Self> {
        self.manifold.check_generator(j)?;
        let coeffs = match self.manifold {
            Manifold::Circle | Manifold::Torus(_) => self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * I * self.mode(i)[j.0 - 1] as f64)
                .collect(),
            Manifold::Sphere2 => sphere::apply_axis(self.degree, &self.coeffs, j.0),
        };
        Ok(BandLimited {
            manifold: self.manifold,
            degree: self.degree,
            coeffs,
            real_valued: self.real_valued,
        })
    }

    /// `D_{i_1} ... D_{i_k} f`, the rightmost index applied first.
    pub fn apply_generators(&self, indices: &[Generator]) -> Result<Self> {
        let mut out = self.clone();
        for &j in indices.iter().rev() {
            out = out.apply_generator(j)?;
        }
        Ok(out)
    }

    /// Eigenvalue of the coefficient at position `i`.
    fn eigenvalue_at(&self, i: usize) -> u64 {
        match self.manifold {
            Manifold::Sphere2 => {
                let l = (i as f64).sqrt() as usize;
                let l = if (l + 1) * (l + 1) <= i { l + 1 } else { l };
                (l * (l + 1)) as u64
            }
            _ => self.mode(i).iter().map(|k| (k * k) as u64).sum(),
        }
    }

    /// Exact `L f` with `-L = sum_j D_j^2`.
    pub fn laplacian_exact(&self) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            *c *= self.eigenvalue_at(i) as f64;
        }
        out
    }

    /// `L^{k} f`.
    pub fn laplacian_power(&self, k: u32) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            *c *= (self.eigenvalue_at(i) as f64).powi(k as i32);
        }
        out
    }

    /// Eigenvalue blocks with their `L^2` norms; blocks with all-zero
    /// coefficients are omitted.
    pub fn spectrum(&self) -> SpectrumView {
        let mut blocks: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            blocks.entry(self.eigenvalue_at(i)).or_default().push(c.norm_sqr());
        }
        let scale = self.basis_norm_sqr();
        SpectrumView {
            blocks: blocks
                .into_iter()
                .filter(|(_, v)| v.iter().any(|&x| x > 0.0))
                .map(|(lambda, v)| SpectralBlock {
                    eigenvalue: lambda as f64,
                    norm: (crate::summation::pairwise_sum(&v) * scale).sqrt(),
                })
                .collect(),
        }
    }
}

/// One eigenvalue block of a [`SpectrumView`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralBlock {
    pub eigenvalue: f64,
    pub norm: f64,
}

/// Laplacian spectrum of a band-limited function, eigenvalues ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumView {
    pub blocks: Vec<SpectralBlock>,
}

impl SpectrumView {
    /// Largest eigenvalue whose block norm exceeds `tol`.
    pub fn max_eigenvalue(&self, tol: f64) -> f64 {
        self.blocks
            .iter()
            .filter(|b| b.norm > tol)
            .map(|b| b.eigenvalue)
            .fold(0.0, f64::max)
    }

    /// Membership in `E_omega(L)`: every block with eigenvalue above `omega`
    /// has norm at most `tol`.
    pub fn within(&self, omega: f64, tol: f64) -> bool {
        self.blocks.iter().all(|b| b.eigenvalue <= omega || b.norm <= tol)
    }

    /// `sum lambda^power |block|^2`, i.e. `||L^{power/2} f||_2^2`.
    pub fn weighted_energy(&self, power: f64) -> f64 {
        let terms: Vec<f64> = self
            .blocks
            .iter()
            .map(|b| {
                if b.eigenvalue == 0.0 && power > 0.0 {
                    0.0
                } else {
                    b.eigenvalue.powf(power) * b.norm * b.norm
                }
            })
            .collect();
        crate::summation::pairwise_sum(&terms)
    }
}

fn rule_resolves(rule: &QuadratureRule, degree: usize) -> Result<()> {
    if rule.exact_degree() < 2 * degree {
        return Err(Error::InsufficientQuadrature {
            exact: rule.exact_degree(),
            required: 2 * degree,
        });
    }
    Ok(())
}

/// Coefficients of degree `degree` from samples at the nodes of `rule`.
///
/// Requires `rule.exact_degree() >= 2 * degree`; under-resolved rules are
/// refused rather than silently aliased.
pub fn project(samples: &[Complex64], rule: &QuadratureRule, degree: usize) -> Result<BandLimited> {
    rule_resolves(rule, degree)?;
    if samples.len() != rule.len() {
        return Err(invalid(format!("{} samples for {} nodes", samples.len(), rule.len())));
    }
    let manifold = rule.manifold();
    let coeffs = match &rule.layout {
        Layout::SphereGrid {
            rows,
            row_weights,
            phis,
        } => sphere::analyze_grid(degree, samples, rows, row_weights, phis, TAU / phis.len() as f64),
        Layout::Equispaced { .. } => {
            let template = BandLimited::zeros(manifold, degree);
            let norm = TAU.powi(manifold.dim() as i32);
            let nodes = rule.nodes();
            crate::par::map_range(template.coeffs.len(), |i| {
                let k = template.mode(i);
                pairwise_sum_by(nodes.len(), |n| {
                    let angles = match &nodes[n] {
                        Point::Circle(t) => std::slice::from_ref(t),
                        Point::Torus(a) => a.as_slice(),
                        Point::Sphere(_) => unreachable!(),
                    };
                    let phase: f64 = k.iter().zip(angles).map(|(&ki, t)| ki as f64 * t).sum();
                    samples[n] * Complex64::from_polar(rule.weights()[n] / norm, -phase)
                })
            })
        }
    };
    BandLimited::from_coeffs(manifold, degree, coeffs)
}

/// The Fejer kernel in the normalization
/// `F_n(t) = sin^2((n+1)t/2) / (2 (n+1) sin^2(t/2))`,
/// i.e. `c_k = (1 - |k|/(n+1)) / 2`, half the textbook kernel.
pub fn fejer_kernel(n: usize) -> BandLimited {
    let mut f = BandLimited::zeros(Manifold::Circle, n);
    for k in -(n as i64)..=n as i64 {
        f.coeffs[(k + n as i64) as usize] = Complex64::new(0.5 * (1.0 - k.abs() as f64 / (n as f64 + 1.0)), 0.0);
    }
    f
}

/// `sum_{k=-n}^{n} c_k e^{ikt}` by Horner's rule in `e^{it}`.
fn horner(coeffs: &[Complex64], n: usize, t: f64) -> Complex64 {
    let z = Complex64::from_polar(1.0, t);
    let mut acc = Complex64::default();
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc * Complex64::from_polar(1.0, -(n as f64) * t)
}

fn eval_torus(coeffs: &[Complex64], n: usize, angles: &[f64]) -> Complex64 {
    if angles.len() == 1 {
        return horner(coeffs, n, angles[0]);
    }
    let block = coeffs.len() / (2 * n + 1);
    let inner: Vec<Complex64> = coeffs.chunks(block).map(|c| eval_torus(c, n, &angles[1..])).collect();
    horner(&inner, n, angles[0])
}

fn torus_index(n: usize, k: &[i64]) -> usize {
    let w = 2 * n + 1;
    k.iter().fold(0, |acc, &ki| acc * w + (ki + n as i64) as usize)
}

fn torus_multi(n: usize, m: usize, mut i: usize) -> Vec<i64> {
    let w = 2 * n + 1;
    let mut k = vec![0i64; m];
    for d in (0..m).rev() {
        k[d] = (i % w) as i64 - n as i64;
        i /= w;
    }
    k
}

#[cfg(test)]
mod tests;
