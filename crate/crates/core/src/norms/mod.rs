//! `L_p` and sup norms with respect to the invariant measure.

pub(crate) mod quadrature;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bandlimited::BandLimited;
use crate::error::{invalid, Result};
use crate::geometry::{Manifold, Point};
use crate::summation::pairwise_sum;

pub use quadrature::{build_quadrature, QuadratureRule};

/// Default sup-norm grid refinement.
pub const DEFAULT_REFINEMENT: usize = 16;

/// An exponent `p` in `[1, inf]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct NormParams {
    p: f64,
}

impl NormParams {
    pub const ONE: NormParams = NormParams { p: 1.0 };
    pub const TWO: NormParams = NormParams { p: 2.0 };
    pub const INF: NormParams = NormParams { p: f64::INFINITY };

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(invalid(format!("norm exponent must lie in [1, inf], got {p}")));
        }
        Ok(NormParams { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn is_inf(&self) -> bool {
        self.p.is_infinite()
    }

    /// `1/p`, zero for `p = inf`.
    pub fn recip(&self) -> f64 {
        1.0 / self.p
    }

    /// Even integer exponents make `|f|^p` band-limited.
    pub fn is_even_integer(&self) -> bool {
        self.p.is_finite() && self.p.fract() == 0.0 && (self.p as u64).is_multiple_of(2)
    }
}

impl fmt::Display for NormParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inf() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.p)
        }
    }
}

impl std::str::FromStr for NormParams {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(NormParams::INF),
            t => NormParams::new(t.parse().map_err(|_| invalid(format!("bad norm exponent {s:?}")))?),
        }
    }
}

// JSON has no infinity; `p = inf` is written as the string "inf".
impl Serialize for NormParams {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_inf() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.p)
        }
    }
}

impl<'de> Deserialize<'de> for NormParams {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::Num(p) => NormParams::new(p),
            Raw::Text(t) => t.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// `(sum_i w_i |f(x_i)|^p)^{1/p}`; `p = inf` delegates to [`sup_norm`].
pub fn lp_norm(f: &BandLimited, p: NormParams, rule: &QuadratureRule) -> Result<f64> {
    if p.is_inf() {
        return Ok(sup_norm(f, DEFAULT_REFINEMENT));
    }
    let values = f.eval_on_rule(rule)?;
    Ok(discrete_norm(&values, rule.weights(), p.p()))
}

fn discrete_norm(values: &[Complex64], weights: &[f64], p: f64) -> f64 {
    let terms: Vec<f64> = if p == 2.0 {
        values.iter().zip(weights).map(|(v, w)| w * v.norm_sqr()).collect()
    } else {
        values.iter().zip(weights).map(|(v, w)| w * v.norm().powf(p)).collect()
    };
    pairwise_sum(&terms).powf(1.0 / p)
}

/// Quadrature degree used for `||f||_p`: exact for even integer `p`
/// (`|f|^p` has degree `p * n`), `4n + 8` otherwise.
pub fn rule_degree(degree: usize, p: NormParams) -> usize {
    if p.is_even_integer() {
        (p.p() as usize) * degree
    } else {
        4 * degree + 8
    }
}

/// A norm value with the change observed when the quadrature degree is
/// doubled (zero for exact rules and for `p = inf`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub discrepancy: f64,
}

/// `||f||_p` on the rule chosen by [`rule_degree`]; for non-even `p` the
/// value is confirmed against a rule of twice the degree.
pub fn lp_norm_checked(f: &BandLimited, p: NormParams) -> NormEstimate {
    if p.is_inf() {
        return NormEstimate {
            value: sup_norm(f, DEFAULT_REFINEMENT),
            discrepancy: 0.0,
        };
    }
    let deg = rule_degree(f.degree(), p);
    let value = lp_norm(f, p, &build_quadrature(f.manifold(), deg)).expect("rule matches manifold");
    let discrepancy = if p.is_even_integer() {
        0.0
    } else {
        let fine = lp_norm(f, p, &build_quadrature(f.manifold(), 2 * deg)).expect("rule matches manifold");
        (fine - value).abs() / value.max(f64::MIN_POSITIVE)
    };
    NormEstimate { value, discrepancy }
}

/// `||f||_p` with the rule degree doubled until two successive values
/// agree to `rtol` (relative), up to `max_degree`. The discrepancy is the
/// last observed change. Exact rules and `p = inf` return at once.
pub fn lp_norm_converged(f: &BandLimited, p: NormParams, rtol: f64, max_degree: usize) -> NormEstimate {
    if p.is_inf() || p.is_even_integer() {
        return lp_norm_checked(f, p);
    }
    let at = |deg: usize| lp_norm(f, p, &build_quadrature(f.manifold(), deg)).expect("rule matches manifold");
    let mut deg = rule_degree(f.degree(), p);
    let mut value = at(deg);
    loop {
        deg *= 2;
        let next = at(deg);
        let discrepancy = (next - value).abs() / next.max(f64::MIN_POSITIVE);
        value = next;
        if discrepancy <= rtol || 2 * deg > max_degree {
            return NormEstimate { value, discrepancy };
        }
    }
}

/// `||f||_p` without the doubling check.
pub fn norm(f: &BandLimited, p: NormParams) -> f64 {
    if p.is_inf() {
        return sup_norm(f, DEFAULT_REFINEMENT);
    }
    let rule = build_quadrature(f.manifold(), rule_degree(f.degree(), p));
    lp_norm(f, p, &rule).expect("rule matches manifold")
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Maximizes `g` on `[a, b]` by golden-section search; returns the best
/// value seen, so the result never falls below `g` at the probes.
pub(crate) fn golden_max(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    for _ in 0..80 {
        if (b - a).abs() < 1e-13 {
            break;
        }
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - GOLDEN * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + GOLDEN * (b - a);
            gd = g(d);
        }
    }
    if gc > gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

/// Indices of grid local maxima whose value is within 1% of the global
/// maximum, strongest first, at most `limit`.
pub(crate) fn peak_candidates(values: &[f64], neighbours: impl Fn(usize) -> Vec<usize>, limit: usize) -> Vec<usize> {
    let top = values.iter().cloned().fold(0.0, f64::max);
    let mut peaks: Vec<usize> = (0..values.len())
        .filter(|&i| values[i] >= 0.99 * top && neighbours(i).iter().all(|&j| values[j] <= values[i]))
        .collect();
    peaks.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    peaks.truncate(limit);
    peaks
}

/// `max |f|` over a grid of `refinement * (degree + 1)` points per
/// dimension, polished by golden-section search around the leading grid
/// maxima. The value is attained at a point, hence a lower bound for the
/// true sup norm; its error decays like `degree^2 / refinement^2`.
pub fn sup_norm(f: &BandLimited, refinement: usize) -> f64 {
    let refinement = refinement.max(1);
    let count = refinement * (f.degree() + 1);
    match f.manifold() {
        Manifold::Circle => {
            let h = std::f64::consts::TAU / count as f64;
            let pts: Vec<Point> = (0..count).map(|i| Point::Circle(i as f64 * h)).collect();
            let vals: Vec<f64> = f.eval_many(&pts).iter().map(|v| v.norm()).collect();
            let mut best = vals.iter().cloned().fold(0.0, f64::max);
            let g = |t: f64| f.eval_many(&[Point::Circle(t)])[0].norm();
            for i in peak_candidates(&vals, |i| vec![(i + count - 1) % count, (i + 1) % count], 8) {
                let t = i as f64 * h;
                best = best.max(golden_max(g, t - h, t + h).1);
            }
            best
        }
        Manifold::Torus(m) => {
            let h = std::f64::consts::TAU / count as f64;
            let total = count.pow(m as u32);
            let angles = |mut idx: usize| {
                let mut a = vec![0.0; m];
                for d in (0..m).rev() {
                    a[d] = (idx % count) as f64 * h;
                    idx /= count;
                }
                a
            };
            let pts: Vec<Point> = (0..total).map(|i| Point::Torus(angles(i))).collect();
            let vals: Vec<f64> = f.eval_many(&pts).iter().map(|v| v.norm()).collect();
            let mut best = vals.iter().cloned().fold(0.0, f64::max);
            let neighbours = |idx: usize| {
                let mut out = Vec::new();
                let mut stride = 1;
                for _ in 0..m {
                    let digit = (idx / stride) % count;
                    let base = idx - digit * stride;
                    out.push(base + ((digit + 1) % count) * stride);
                    out.push(base + ((digit + count - 1) % count) * stride);
                    stride *= count;
                }
                out
            };
            for i in peak_candidates(&vals, neighbours, 8) {
                let mut a = angles(i);
                let mut here = vals[i];
                for _round in 0..POLISH_ROUNDS {
                    let before = here;
                    for d in 0..m {
                        let g = |t: f64| {
                            let mut b = a.clone();
                            b[d] = t;
                            f.eval_many(&[Point::Torus(b)])[0].norm()
                        };
                        let (t, v) = golden_max(g, a[d] - h, a[d] + h);
                        if v > here {
                            a[d] = t;
                            here = v;
                        }
                    }
                    if here - before <= POLISH_STOP * here {
                        break;
                    }
                }
                best = best.max(here);
            }
            best
        }
        Manifold::Sphere2 => sphere_sup(f, count),
    }
}

/// Coordinate-ascent rounds in the multi-dimensional sup polish; rounds
/// stop early once one gains less than `POLISH_STOP` (relative).
const POLISH_ROUNDS: usize = 200;
const POLISH_STOP: f64 = 1e-15;

fn sphere_sup(f: &BandLimited, count: usize) -> f64 {
    use std::f64::consts::{PI, TAU};
    let n_theta = count.max(2);
    let n_phi = count.max(2);
    let dt = PI / (n_theta - 1) as f64;
    let dp = TAU / n_phi as f64;
    let rows: Vec<(f64, f64)> = (0..n_theta)
        .map(|i| {
            let (s, c) = (i as f64 * dt).sin_cos();
            (c, s.max(0.0))
        })
        .collect();
    let phis: Vec<f64> = (0..n_phi).map(|j| j as f64 * dp).collect();
    let vals: Vec<f64> = crate::bandlimited::sphere::synthesize_grid(f.degree(), f.coeffs(), &rows, &phis)
        .iter()
        .map(|v| v.norm())
        .collect();
    let mut best = vals.iter().cloned().fold(0.0, f64::max);
    let neighbours = |idx: usize| {
        let (r, c) = (idx / n_phi, idx % n_phi);
        let mut out = vec![r * n_phi + (c + 1) % n_phi, r * n_phi + (c + n_phi - 1) % n_phi];
        if r > 0 {
            out.push((r - 1) * n_phi + c);
        }
        if r + 1 < n_theta {
            out.push((r + 1) * n_phi + c);
        }
        out
    };
    let at = |theta: f64, phi: f64| {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        f.eval_many(&[Point::Sphere([st * cp, st * sp, ct])])[0].norm()
    };
    for i in peak_candidates(&vals, neighbours, 8) {
        let mut theta = (i / n_phi) as f64 * dt;
        let mut phi = (i % n_phi) as f64 * dp;
        let mut here = vals[i];
        for _round in 0..POLISH_ROUNDS {
            let before = here;
            let (t, v) = golden_max(|t| at(t, phi), (theta - dt).max(0.0), (theta + dt).min(PI));
            if v > here {
                theta = t;
                here = v;
            }
            let (p, v) = golden_max(|p| at(theta, p), phi - dp, phi + dp);
            if v > here {
                phi = p;
                here = v;
            }
            if here - before <= POLISH_STOP * here {
                break;
            }
        }
        best = best.max(here);
    }
    best
}
