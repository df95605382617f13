use std::f64::consts::{PI, TAU};

use crate::geometry::{Manifold, Point};
use crate::summation::pairwise_sum;

/// Node layout; all rules built here are product rules, which lets
/// synthesis and analysis run separably.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Layout {
    /// `count` equispaced angles per torus factor (circle: one factor).
    Equispaced { count: usize },
    /// Gauss-Legendre in `cos theta` times equispaced `phi`, row-major.
    SphereGrid {
        rows: Vec<(f64, f64)>,
        row_weights: Vec<f64>,
        phis: Vec<f64>,
    },
}

/// A positive quadrature rule for the invariant measure.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    manifold: Manifold,
    nodes: Vec<Point>,
    weights: Vec<f64>,
    exact_degree: usize,
    pub(crate) layout: Layout,
}

impl QuadratureRule {
    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Band-limited integrands of degree up to this are integrated exactly.
    pub fn exact_degree(&self) -> usize {
        self.exact_degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_i w_i g(x_i)` with pairwise summation.
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        let terms: Vec<f64> = values.iter().zip(&self.weights).map(|(v, w)| v * w).collect();
        pairwise_sum(&terms)
    }
}

/// Builds the product rule exact for band-limited functions of degree
/// `<= degree` on `manifold`.
///
/// Circle: `degree + 1` equispaced nodes. Torus: tensor product of circle
/// rules. Sphere: `ceil((degree + 2) / 2)` Gauss-Legendre nodes in
/// `cos theta` times `degree + 1` equispaced longitudes.
pub fn build_quadrature(manifold: Manifold, degree: usize) -> QuadratureRule {
    match manifold {
        Manifold::Circle | Manifold::Torus(_) => {
            let dims = manifold.dim();
            let count = degree + 1;
            let h = TAU / count as f64;
            let total = count.pow(dims as u32);
            let w = h.powi(dims as i32);
            let nodes = (0..total)
                .map(|mut idx| {
                    let mut a = vec![0.0; dims];
                    for d in (0..dims).rev() {
                        a[d] = (idx % count) as f64 * h;
                        idx /= count;
                    }
                    if manifold == Manifold::Circle {
                        Point::Circle(a[0])
                    } else {
                        Point::Torus(a)
                    }
                })
                .collect();
            QuadratureRule {
                manifold,
                nodes,
                weights: vec![w; total],
                exact_degree: degree,
                layout: Layout::Equispaced { count },
            }
        }
        Manifold::Sphere2 => {
            let n_theta = (degree + 2).div_ceil(2);
            let n_phi = degree + 1;
            let (xs, ws) = gauss_legendre(n_theta);
            let rows: Vec<(f64, f64)> = xs.iter().map(|&x| (x, (1.0 - x * x).max(0.0).sqrt())).collect();
            let phis: Vec<f64> = (0..n_phi).map(|j| TAU * j as f64 / n_phi as f64).collect();
            let wphi = TAU / n_phi as f64;
            let mut nodes = Vec::with_capacity(n_theta * n_phi);
            let mut weights = Vec::with_capacity(n_theta * n_phi);
            for (r, &(x, s)) in rows.iter().enumerate() {
                for &phi in &phis {
                    let (sp, cp) = phi.sin_cos();
                    nodes.push(Point::Sphere([s * cp, s * sp, x]));
                    weights.push(ws[r] * wphi);
                }
            }
            QuadratureRule {
                manifold,
                nodes,
                weights,
                exact_degree: degree,
                layout: Layout::SphereGrid {
                    rows,
                    row_weights: ws,
                    phis,
                },
            }
        }
    }
}

/// Gauss-Legendre nodes (ascending) and weights on `[-1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = -x;
        xs[n - 1 - i] = x;
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        xs[n / 2] = 0.0;
    }
    (xs, ws)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_measure() {
        for m in [Manifold::Circle, Manifold::Torus(2), Manifold::Sphere2] {
            for degree in [0, 1, 5, 16, 33] {
                let rule = build_quadrature(m, degree);
                let total = pairwise_sum(rule.weights());
                assert!((total - m.measure()).abs() < 1e-10 * m.measure(), "{m} {degree}");
                assert!(rule.weights().iter().all(|&w| w > 0.0));
                assert!(rule.nodes().iter().all(|x| x.is_valid()));
            }
        }
    }

    #[test]
    fn gauss_legendre_integrates_monomials() {
        for n in 1..=20 {
            let (xs, ws) = gauss_legendre(n);
            for p in 0..2 * n {
                let q: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.powi(p as i32)).sum();
                let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn circle_rule_kills_nonzero_modes() {
        // geometric-sum oracle: sum_j e^{i k 2 pi j / N} = 0 unless N | k
        let n = 7;
        let rule = build_quadrature(Manifold::Circle, 2 * n);
        for k in 1..=(2 * n) as i64 {
            let re: Vec<f64> = rule
                .nodes()
                .iter()
                .map(|p| match p {
                    Point::Circle(t) => (k as f64 * t).cos(),
                    _ => unreachable!(),
                })
                .collect();
            let im: Vec<f64> = rule
                .nodes()
                .iter()
                .map(|p| match p {
                    Point::Circle(t) => (k as f64 * t).sin(),
                    _ => unreachable!(),
                })
                .collect();
            assert!(rule.integrate_values(&re).abs() < 1e-13);
            assert!(rule.integrate_values(&im).abs() < 1e-13);
        }
    }

    #[test]
    fn sphere_constant_integrates_to_area() {
        let rule = build_quadrature(Manifold::Sphere2, 12);
        let ones = vec![1.0; rule.len()];
        assert!((rule.integrate_values(&ones) - 4.0 * PI).abs() < 1e-12);
    }
}
