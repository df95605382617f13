//! Riesz interpolation operators: derivatives of band-limited functions as
//! weighted sums of their translates.
//!
//! * [`riesz_finite_circle`]: the finite formula for trigonometric
//!   polynomials of degree `<= n`, with nodes `t_q = (2q-1) pi / (2n)` and
//!   prefactor `1/(4n)`.
//! * [`riesz_series`]: the translation series
//!   `R_j^w f = (w/pi^2) sum_k (-1)^{k-1} (k-1/2)^{-2} f(exp(t_k X_j) x)`,
//!   `t_k = (pi/w)(k - 1/2)`, truncated to `k = -K+1..=K`. It reproduces
//!   `D_j f` whenever the spectrum of `D_j` on `f` lies in `i[-w, w]`.
//!
//! Translations are isometries, so truncation costs at most the dropped
//! weight mass times `||f||`: see [`RieszConfig::tail_bound`].

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix3};
use num_complex::Complex64;

use crate::bandlimited::{coeff_len, project, BandLimited};
use crate::error::{invalid, Result};
use crate::geometry::{axis_rotation, Generator, Manifold, Point};
use crate::norms::quadrature::Layout;
use crate::norms::{build_quadrature, QuadratureRule};
use crate::summation::pairwise_sum_by;

/// Default relative truncation tolerance: `tail_bound <= 1e-6 * omega`.
pub const DEFAULT_RTOL: f64 = 1e-6;

/// Band limit `omega` and truncation half-width `K` of the series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RieszConfig {
    omega: f64,
    k: usize,
}

/// One term of the truncated series: weight and flow time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesTerm {
    pub weight: f64,
    pub shift: f64,
}

impl RieszConfig {
    pub fn new(omega: f64, k: usize) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(invalid(format!("omega must be positive, got {omega}")));
        }
        if k == 0 {
            return Err(invalid("truncation half-width K must be at least 1"));
        }
        Ok(RieszConfig { omega, k })
    }

    /// Smallest `K` with `tail_bound <= rtol * omega`.
    pub fn with_tolerance(omega: f64, rtol: f64) -> Result<Self> {
        if !(rtol > 0.0 && rtol < 1.0) {
            return Err(invalid(format!("rtol must lie in (0, 1), got {rtol}")));
        }
        RieszConfig::new(omega, 1)?;
        // the tail is about 2 omega / (pi^2 K)
        let mut hi = (2.0 / (PI * PI * rtol)).ceil() as usize + 2;
        while RieszConfig::new(omega, hi)?.tail_bound() > rtol * omega {
            hi *= 2;
        }
        let mut lo = 1;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if RieszConfig::new(omega, mid)?.tail_bound() <= rtol * omega {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        RieszConfig::new(omega, lo)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `omega - (omega/pi^2) sum_{k=-K+1}^{K} (k-1/2)^{-2}`, the weight mass
    /// dropped by truncation (`sum_k (k-1/2)^{-2} = pi^2`). The partial sum
    /// is accumulated smallest term first.
    pub fn tail_bound(&self) -> f64 {
        let mut sum = 0.0;
        let mut comp = 0.0;
        for j in (1..=self.k).rev() {
            let x = j as f64 - 0.5;
            let term = 2.0 / (x * x);
            // Neumaier compensation
            let t = sum + term;
            if sum.abs() >= term {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
        }
        (self.omega - self.omega / (PI * PI) * (sum + comp)).max(0.0)
    }

    /// Series terms ordered by decreasing weight magnitude: `k = 1, 0, 2,
    /// -1, ...`.
    pub fn terms(&self) -> Vec<SeriesTerm> {
        let scale = self.omega / (PI * PI);
        let mut out = Vec::with_capacity(2 * self.k);
        for j in 1..=self.k as i64 {
            for k in [j, 1 - j] {
                let x = k as f64 - 0.5;
                let sign = if (k - 1).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                out.push(SeriesTerm {
                    weight: scale * sign / (x * x),
                    shift: PI / self.omega * x,
                });
            }
        }
        out
    }

    /// `sum_k w_k e^{i lambda t_k}`: the series acting on `e^{i lambda t}`.
    pub fn symbol(&self, lambda: f64) -> Complex64 {
        let terms = self.terms();
        pairwise_sum_by(terms.len(), |i| {
            Complex64::from_polar(terms[i].weight, lambda * terms[i].shift)
        })
    }
}

/// Finite Riesz formula on the circle:
/// `T'(t) = (1/(4n)) sum_{q=1}^{2n} (-1)^{q+1} csc^2(t_q/2) T(t + t_q)`,
/// `t_q = (2q-1) pi / (2n)`, exact for `deg T <= n`.
///
/// Translates act on coefficients by phase factors, so the formula is
/// applied mode by mode.
pub fn riesz_finite_circle(t: &BandLimited, n: usize) -> Result<BandLimited> {
    Manifold::Circle.expect(t.manifold())?;
    if n == 0 || t.degree() > n {
        return Err(invalid(format!(
            "finite Riesz formula of order {n} needs 1 <= degree <= n, got degree {}",
            t.degree()
        )));
    }
    let nodes: Vec<(f64, f64)> = (1..=2 * n)
        .map(|q| {
            let tq = (2 * q - 1) as f64 * PI / (2 * n) as f64;
            let sign = if q % 2 == 1 { 1.0 } else { -1.0 };
            (sign / (4.0 * n as f64 * (tq / 2.0).sin().powi(2)), tq)
        })
        .collect();
    let deg = t.degree() as i64;
    let coeffs = (-deg..=deg)
        .map(|k| {
            let s = pairwise_sum_by(nodes.len(), |q| {
                Complex64::from_polar(nodes[q].0, k as f64 * nodes[q].1)
            });
            t.circle_coeff(k) * s
        })
        .collect();
    BandLimited::from_coeffs(Manifold::Circle, t.degree(), coeffs)
}

fn check_admissible(f: &BandLimited, cfg: &RieszConfig) -> Result<()> {
    // tolerate omega given as a rounded float of an integer degree
    if f.degree() as f64 > cfg.omega * (1.0 + 1e-12) {
        return Err(invalid(format!(
            "degree {} is not admissible for omega = {}",
            f.degree(),
            cfg.omega
        )));
    }
    Ok(())
}

/// Truncated series `R_j^omega f`.
///
/// Circle and torus translates are phase factors, so the series acts
/// through its symbol. On the sphere each term is the translate
/// `x -> f(R_j(t_k) x)`: the weighted sum of translates is accumulated at
/// every node of `rule` and projected once.
pub fn riesz_series(f: &BandLimited, j: Generator, cfg: &RieszConfig, rule: &QuadratureRule) -> Result<BandLimited> {
    let m = f.manifold();
    m.check_generator(j)?;
    m.expect(rule.manifold())?;
    check_admissible(f, cfg)?;
    match m {
        Manifold::Circle | Manifold::Torus(_) => Ok(RieszOperator::assemble(m, f.degree(), j, cfg)?.apply(f)?),
        Manifold::Sphere2 => {
            let terms = cfg.terms();
            let rotations: Vec<_> = terms.iter().map(|t| axis_rotation(j.0, t.shift)).collect();
            let values = crate::par::map_slice(rule.nodes(), |x| {
                let Point::Sphere(v) = x else { unreachable!() };
                let v = nalgebra::Vector3::from(*v);
                pairwise_sum_by(terms.len(), |i| {
                    let w = rotations[i] * v;
                    f.eval_many(&[Point::Sphere([w[0], w[1], w[2]])])[0] * terms[i].weight
                })
            });
            let mut out = project(&values, rule, f.degree())?;
            out = out.with_real_flag(f.real_valued());
            Ok(out)
        }
    }
}

/// `R_{i_1} ... R_{i_k} f`, the rightmost operator applied first, matching
/// [`BandLimited::apply_generators`]. An empty list returns `f`.
pub fn riesz_compose(
    f: &BandLimited,
    indices: &[Generator],
    cfg: &RieszConfig,
    rule: &QuadratureRule,
) -> Result<BandLimited> {
    let mut out = f.clone();
    for &j in indices.iter().rev() {
        out = riesz_series(&out, j, cfg, rule)?;
    }
    Ok(out)
}

/// Error bound for [`riesz_compose`] with `k` factors:
/// `k omega^{k-1} tail_bound ||f||`.
pub fn compose_bound(cfg: &RieszConfig, k: usize, f_norm: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    k as f64 * cfg.omega.powi(k as i32 - 1) * cfg.tail_bound() * f_norm
}

/// `L f = -sum_j R_j(R_j f)`, the sum-of-squares Laplacian with every
/// derivative replaced by its Riesz series.
pub fn riesz_laplacian(f: &BandLimited, cfg: &RieszConfig, rule: &QuadratureRule) -> Result<BandLimited> {
    let m = f.manifold();
    let mut acc = BandLimited::zeros(m, f.degree());
    for j in m.generators() {
        let twice = riesz_compose(f, &[j, j], cfg, rule)?;
        acc = acc.checked_sub(&twice)?;
    }
    Ok(acc.with_real_flag(f.real_valued()))
}

/// [`riesz_laplacian`] through assembled operators, one per generator.
pub fn riesz_laplacian_with(f: &BandLimited, ops: &[RieszOperator]) -> Result<BandLimited> {
    let m = f.manifold();
    let mut seen: Vec<Generator> = ops.iter().map(|o| o.generator).collect();
    seen.sort();
    seen.dedup();
    if seen.len() != ops.len() || seen != m.generators().collect::<Vec<_>>() {
        return Err(invalid(format!("need exactly one operator per generator of {m}")));
    }
    let mut acc = BandLimited::zeros(m, f.degree());
    for op in ops {
        acc = acc.checked_sub(&op.apply(&op.apply(f)?)?)?;
    }
    Ok(acc.with_real_flag(f.real_valued()))
}

/// The truncated series `R_j^omega` as a matrix on the coefficients of
/// degree `degree`.
///
/// On the sphere the columns are the series applied to every basis
/// function, built from the same node-wise sums of translates as
/// [`riesz_series`], so one assembly serves many inputs.
#[derive(Clone, Debug)]
pub struct RieszOperator {
    manifold: Manifold,
    degree: usize,
    generator: Generator,
    config: RieszConfig,
    matrix: DMatrix<Complex64>,
}

impl RieszOperator {
    pub fn assemble(manifold: Manifold, degree: usize, j: Generator, cfg: &RieszConfig) -> Result<Self> {
        manifold.check_generator(j)?;
        if degree as f64 > cfg.omega * (1.0 + 1e-12) {
            return Err(invalid(format!(
                "degree {degree} is not admissible for omega = {}",
                cfg.omega
            )));
        }
        let len = coeff_len(manifold, degree);
        let matrix = match manifold {
            Manifold::Circle | Manifold::Torus(_) => {
                let probe = BandLimited::zeros(manifold, degree);
                let modes = probe.modes();
                let deg = degree as i64;
                // the symbol depends only on the frequency along axis j
                let symbols: Vec<Complex64> = (-deg..=deg).map(|k| cfg.symbol(k as f64)).collect();
                let diag: Vec<Complex64> = modes.iter().map(|k| symbols[(k[j.0 - 1] + deg) as usize]).collect();
                DMatrix::from_diagonal(&DVector::from_vec(diag))
            }
            Manifold::Sphere2 => sphere_operator(degree, j, cfg, len)?,
        };
        Ok(RieszOperator {
            manifold,
            degree,
            generator: j,
            config: *cfg,
            matrix,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generator(&self) -> Generator {
        self.generator
    }

    pub fn config(&self) -> &RieszConfig {
        &self.config
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn apply(&self, f: &BandLimited) -> Result<BandLimited> {
        self.manifold.expect(f.manifold())?;
        if f.degree() > self.degree {
            return Err(invalid(format!(
                "operator of degree {} applied to degree {}",
                self.degree,
                f.degree()
            )));
        }
        let x = DVector::from_column_slice(f.with_degree(self.degree).coeffs());
        let y = &self.matrix * x;
        Ok(
            BandLimited::from_coeffs(self.manifold, self.degree, y.as_slice().to_vec())?
                .with_degree(f.degree())
                .with_real_flag(f.real_valued()),
        )
    }
}

/// Matrix of `f -> f(Q .)` on the coefficients of degree `degree`.
fn rotation_matrix(degree: usize, q: &Matrix3<f64>, len: usize) -> DMatrix<Complex64> {
    use crate::bandlimited::sphere;
    let rule = build_quadrature(Manifold::Sphere2, 2 * degree);
    let Layout::SphereGrid {
        rows,
        row_weights,
        phis,
    } = &rule.layout
    else {
        unreachable!()
    };
    let values = crate::par::map_slice(rule.nodes(), |x| {
        let Point::Sphere(v) = x else { unreachable!() };
        let w = q * nalgebra::Vector3::from(*v);
        let mut leg = vec![0.0; sphere::tri_len(degree)];
        let mut basis = vec![Complex64::default(); len];
        sphere::basis(degree, &[w[0], w[1], w[2]], &mut leg, &mut basis);
        basis
    });
    let phi_weight = std::f64::consts::TAU / phis.len() as f64;
    let columns = crate::par::map_range(len, |b| {
        let samples: Vec<Complex64> = values.iter().map(|s| s[b]).collect();
        sphere::analyze_grid(degree, &samples, rows, row_weights, phis, phi_weight)
    });
    DMatrix::from_fn(len, len, |a, b| columns[b][a])
}

/// The series about axis `j` on the sphere.
///
/// About axis 3 a translate multiplies `Y_l^m` by `e^{imt}`, so the series
/// is the diagonal `symbol(m)`. The other axes are conjugates: with the
/// cyclic permutation `P` (`e1 -> e2 -> e3 -> e1`), `R_1(t) = P R_3(t) P^-1`
/// and `R_2(t) = P^2 R_3(t) P^-2`. For `R_j(t) = Q R_3(t) Q^-1`,
/// `f(R_j(t) x) = (U_Q f)(R_3(t) Q^-1 x)` with `U_Q f = f(Q .)`, hence
/// `R_j = U_{Q^-1} diag(symbol(m)) U_Q`, exactly the same finite sum.
fn sphere_operator(degree: usize, j: Generator, cfg: &RieszConfig, len: usize) -> Result<DMatrix<Complex64>> {
    let deg = degree as i64;
    let symbols: Vec<Complex64> = (-deg..=deg).map(|m| cfg.symbol(m as f64)).collect();
    let diag: Vec<Complex64> = (0..=deg)
        .flat_map(|l| -l..=l)
        .map(|m| symbols[(m + deg) as usize])
        .collect();
    let d = DMatrix::from_diagonal(&DVector::from_vec(diag));
    let p = Matrix3::new(0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0);
    let q = match j.0 {
        3 => return Ok(d),
        1 => p,
        _ => p * p,
    };
    let forward = rotation_matrix(degree, &q, len);
    let back = rotation_matrix(degree, &q.transpose(), len);
    Ok(back * d * forward)
}
