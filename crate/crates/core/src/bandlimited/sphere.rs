//! Complex orthonormal spherical harmonics with the Condon-Shortley phase.
//!
//! `Y_l^m(theta, phi) = y_l^m(theta) e^{i m phi}` for `m >= 0`, with
//! `Y_l^{-m} = (-1)^m conj(Y_l^m)`. The `y_l^m` are generated by the fully
//! normalized three-term recurrence, so no factorials appear and the values
//! stay finite well beyond degree 64.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Position of `(l, m)`, `0 <= m <= l`, in a triangular table.
#[inline]
pub(crate) fn tri(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

pub(crate) fn tri_len(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// Position of `(l, m)`, `|m| <= l`, in the row-major coefficient layout.
#[inline]
pub(crate) fn lm_index(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m) as usize
}

pub(crate) fn lm_len(n: usize) -> usize {
    (n + 1) * (n + 1)
}

/// Fills `out[tri(l, m)]` with `y_l^m` at `cos(theta) = x`, `sin(theta) = s`.
pub(crate) fn normalized_legendre(n: usize, x: f64, s: f64, out: &mut [f64]) {
    debug_assert!(out.len() >= tri_len(n));
    out[0] = 0.5 / PI.sqrt();
    for m in 0..=n {
        if m > 0 {
            let mf = m as f64;
            out[tri(m, m)] = -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s * out[tri(m - 1, m - 1)];
        }
        if m < n {
            out[tri(m + 1, m)] = (2.0 * m as f64 + 3.0).sqrt() * x * out[tri(m, m)];
        }
        let m2 = (m * m) as f64;
        for l in (m + 2)..=n {
            let lf = l as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - m2)).sqrt();
            let lp = lf - 1.0;
            let b = ((lp * lp - m2) / (4.0 * lp * lp - 1.0)).sqrt();
            out[tri(l, m)] = a * (x * out[tri(l - 1, m)] - b * out[tri(l - 2, m)]);
        }
    }
}

/// `(cos theta, sin theta, e^{i phi})` of a unit vector.
#[inline]
pub(crate) fn polar_parts(v: &[f64; 3]) -> (f64, f64, Complex64) {
    let s = v[0].hypot(v[1]);
    let x = v[2].clamp(-1.0, 1.0);
    let e = if s > 0.0 {
        Complex64::new(v[0] / s, v[1] / s)
    } else {
        Complex64::new(1.0, 0.0)
    };
    (x, s, e)
}

fn phase_powers(n: usize, e: Complex64) -> Vec<Complex64> {
    let phi = e.arg();
    (0..=n).map(|m| Complex64::from_polar(1.0, m as f64 * phi)).collect()
}

/// `G_m = sum_l c_{l,m} Y_l^m` stripped of its `e^{i m phi}` factor, for
/// `m = -n..=n` stored at `m + n`.
fn latitude_sums(n: usize, coeffs: &[Complex64], leg: &[f64], out: &mut [Complex64]) {
    for m in 0..=n {
        let mut pos = Complex64::default();
        let mut neg = Complex64::default();
        for l in m..=n {
            let y = leg[tri(l, m)];
            pos += coeffs[lm_index(l, m as i64)] * y;
            if m > 0 {
                neg += coeffs[lm_index(l, -(m as i64))] * y;
            }
        }
        out[n + m] = pos;
        if m > 0 {
            out[n - m] = if m % 2 == 0 { neg } else { -neg };
        }
    }
}

/// Evaluates a degree-`n` coefficient vector at a unit vector.
pub(crate) fn eval(n: usize, coeffs: &[Complex64], v: &[f64; 3]) -> Complex64 {
    let (x, s, e) = polar_parts(v);
    let mut leg = vec![0.0; tri_len(n)];
    normalized_legendre(n, x, s, &mut leg);
    let mut g = vec![Complex64::default(); 2 * n + 1];
    latitude_sums(n, coeffs, &leg, &mut g);
    let pw = phase_powers(n, e);
    let mut acc = g[n];
    for m in 1..=n {
        acc += g[n + m] * pw[m] + g[n - m] * pw[m].conj();
    }
    acc
}

/// All basis values `Y_l^m(v)`, `l <= n`, in coefficient layout.
pub(crate) fn basis(n: usize, v: &[f64; 3], leg: &mut [f64], out: &mut [Complex64]) {
    let (x, s, e) = polar_parts(v);
    normalized_legendre(n, x, s, leg);
    let pw = phase_powers(n, e);
    for l in 0..=n {
        out[lm_index(l, 0)] = Complex64::new(leg[tri(l, 0)], 0.0);
        for m in 1..=l {
            let y = pw[m] * leg[tri(l, m)];
            out[lm_index(l, m as i64)] = y;
            let c = y.conj();
            out[lm_index(l, -(m as i64))] = if m % 2 == 0 { c } else { -c };
        }
    }
}

/// Values on the product grid `rows x phis` (row-major), where each row is
/// `(cos theta, sin theta)`.
pub(crate) fn synthesize_grid(n: usize, coeffs: &[Complex64], rows: &[(f64, f64)], phis: &[f64]) -> Vec<Complex64> {
    let table = phase_table(n, phis);
    let width = 2 * n + 1;
    let per_row = crate::par::map_slice(rows, |&(x, s)| {
        let mut leg = vec![0.0; tri_len(n)];
        normalized_legendre(n, x, s, &mut leg);
        let mut g = vec![Complex64::default(); width];
        latitude_sums(n, coeffs, &leg, &mut g);
        (0..phis.len())
            .map(|j| {
                let t = &table[j * width..(j + 1) * width];
                let mut acc = g[n];
                for m in 1..=n {
                    acc += g[n + m] * t[n + m] + g[n - m] * t[n - m];
                }
                acc
            })
            .collect::<Vec<_>>()
    });
    per_row.concat()
}

/// `e^{i m phi_j}` for `m = -n..=n`, laid out per `phi`.
fn phase_table(n: usize, phis: &[f64]) -> Vec<Complex64> {
    let width = 2 * n + 1;
    let mut t = vec![Complex64::default(); width * phis.len()];
    for (j, &phi) in phis.iter().enumerate() {
        for m in 0..width {
            t[j * width + m] = Complex64::from_polar(1.0, (m as f64 - n as f64) * phi);
        }
    }
    t
}

/// Inverse of [`synthesize_grid`] for a quadrature product grid:
/// `c_{l,m} = sum_i w_i f(x_i) conj(Y_l^m(x_i))`.
pub(crate) fn analyze_grid(
    n: usize,
    values: &[Complex64],
    rows: &[(f64, f64)],
    row_weights: &[f64],
    phis: &[f64],
    phi_weight: f64,
) -> Vec<Complex64> {
    let width = 2 * n + 1;
    let table = phase_table(n, phis);
    let n_phi = phis.len();
    // per-row contributions, reduced afterwards in row order
    let contributions = crate::par::map_range(rows.len(), |r| {
        let (x, s) = rows[r];
        let mut fm = vec![Complex64::default(); width];
        let row = &values[r * n_phi..(r + 1) * n_phi];
        for (j, v) in row.iter().enumerate() {
            let t = &table[j * width..(j + 1) * width];
            for k in 0..width {
                fm[k] += v * t[k].conj();
            }
        }
        let mut leg = vec![0.0; tri_len(n)];
        normalized_legendre(n, x, s, &mut leg);
        let w = row_weights[r] * phi_weight;
        let mut out = vec![Complex64::default(); lm_len(n)];
        for l in 0..=n {
            out[lm_index(l, 0)] = fm[n] * (w * leg[tri(l, 0)]);
            for m in 1..=l {
                let y = w * leg[tri(l, m)];
                out[lm_index(l, m as i64)] = fm[n + m] * y;
                let neg = fm[n - m] * y;
                out[lm_index(l, -(m as i64))] = if m % 2 == 0 { neg } else { -neg };
            }
        }
        out
    });
    let len = lm_len(n);
    (0..len)
        .map(|i| crate::summation::pairwise_sum_by(contributions.len(), |r| contributions[r][i]))
        .collect()
}

/// Ladder coupling `sqrt(l(l+1) - m(m+1))` (raising from `m`).
#[inline]
pub(crate) fn raise(l: usize, m: i64) -> f64 {
    let l = l as f64;
    let m = m as f64;
    (l * (l + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

/// Ladder coupling `sqrt(l(l+1) - m(m-1))` (lowering from `m`).
#[inline]
pub(crate) fn lower(l: usize, m: i64) -> f64 {
    let l = l as f64;
    let m = m as f64;
    (l * (l + 1.0) - m * (m - 1.0)).max(0.0).sqrt()
}

/// Exact action of the rotation generator about `axis` in coefficient space.
///
/// With `D_i = i L_i` (angular momentum `L = -i x cross grad`):
/// `D_3 = i m`, `D_1 = (i/2)(L_+ + L_-)`, `D_2 = (1/2)(L_+ - L_-)`.
pub(crate) fn apply_axis(n: usize, coeffs: &[Complex64], axis: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); lm_len(n)];
    let i = Complex64::new(0.0, 1.0);
    for l in 0..=n {
        let li = l as i64;
        for m in -li..=li {
            let idx = lm_index(l, m);
            out[idx] = match axis {
                3 => coeffs[idx] * Complex64::new(0.0, m as f64),
                _ => {
                    // contributions raised from m-1 and lowered from m+1
                    let up = if m > -li {
                        coeffs[lm_index(l, m - 1)] * raise(l, m - 1)
                    } else {
                        Complex64::default()
                    };
                    let down = if m < li {
                        coeffs[lm_index(l, m + 1)] * lower(l, m + 1)
                    } else {
                        Complex64::default()
                    };
                    if axis == 1 {
                        i * (up + down) * 0.5
                    } else {
                        (up - down) * 0.5
                    }
                }
            };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force P_l^m from the Rodrigues-type power series, with factorials.
    fn legendre_oracle(l: usize, m: usize, x: f64) -> f64 {
        // P_l^m(x) = (-1)^m (1-x^2)^{m/2} d^m/dx^m P_l(x),
        // P_l(x) = 2^{-l} sum_k (-1)^k C(l,k) C(2l-2k, l) x^{l-2k}
        let fact = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
        let choose = |n: usize, k: usize| fact(n) / (fact(k) * fact(n - k));
        let mut deriv = 0.0;
        for k in 0..=l / 2 {
            let p = l - 2 * k;
            if p < m {
                continue;
            }
            let coef = (-1f64).powi(k as i32) * choose(l, k) * choose(2 * l - 2 * k, l) / 2f64.powi(l as i32);
            deriv += coef * fact(p) / fact(p - m) * x.powi((p - m) as i32);
        }
        let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        let norm = ((2 * l + 1) as f64 / (4.0 * PI) * fact(l - m) / fact(l + m)).sqrt();
        sign * norm * (1.0 - x * x).powf(m as f64 / 2.0) * deriv
    }

    #[test]
    fn recurrence_matches_closed_form() {
        let n = 10;
        for &x in &[-0.93, -0.2, 0.0, 0.41, 0.77] {
            let s = (1.0f64 - x * x).sqrt();
            let mut out = vec![0.0; tri_len(n)];
            normalized_legendre(n, x, s, &mut out);
            for l in 0..=n {
                for m in 0..=l {
                    let o = legendre_oracle(l, m, x);
                    assert!((out[tri(l, m)] - o).abs() < 1e-10, "l={l} m={m} x={x}");
                }
            }
        }
    }

    #[test]
    fn y10_at_north_pole() {
        let c = {
            let mut c = vec![Complex64::default(); lm_len(1)];
            c[lm_index(1, 0)] = Complex64::new(1.0, 0.0);
            c
        };
        let v = eval(1, &c, &[0.0, 0.0, 1.0]);
        assert!((v.re - (3.0 / (4.0 * PI)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn high_degree_stays_finite() {
        let n = 96;
        let mut out = vec![0.0; tri_len(n)];
        let x: f64 = 0.3;
        normalized_legendre(n, x, (1.0 - x * x).sqrt(), &mut out);
        assert!(out.iter().all(|v| v.is_finite()));
        // sum_m |Y_l^m|^2 = (2l+1)/(4 pi) (addition theorem)
        for l in [32, 64, 96] {
            let mut s = out[tri(l, 0)].powi(2);
            for m in 1..=l {
                s += 2.0 * out[tri(l, m)].powi(2);
            }
            assert!((s - (2 * l + 1) as f64 / (4.0 * PI)).abs() < 1e-10);
        }
    }

    #[test]
    fn basis_and_eval_agree() {
        let n = 6;
        let v = [0.2, -0.5, (1.0f64 - 0.29).sqrt()];
        let mut leg = vec![0.0; tri_len(n)];
        let mut b = vec![Complex64::default(); lm_len(n)];
        basis(n, &v, &mut leg, &mut b);
        for idx in 0..lm_len(n) {
            let mut c = vec![Complex64::default(); lm_len(n)];
            c[idx] = Complex64::new(1.0, 0.0);
            assert!((eval(n, &c, &v) - b[idx]).norm() < 1e-14);
        }
    }
}
