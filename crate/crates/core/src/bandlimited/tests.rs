use std::f64::consts::PI;

use super::*;
use crate::geometry::axis_rotation;
use crate::norms::build_quadrature;
use crate::random::random_function;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_coeff_diff(a: &BandLimited, b: &BandLimited) -> f64 {
    a.checked_sub(b).unwrap().max_abs()
}

#[test]
fn eval_examples() {
    let e1 = BandLimited::circle_mode(1, 1).unwrap();
    let v = e1.eval(&Point::circle(PI)).unwrap();
    assert!((v - c(-1.0, 0.0)).norm() < 1e-15);

    let f3 = fejer_kernel(3);
    assert!((f3.eval(&Point::circle(0.0)).unwrap() - c(2.0, 0.0)).norm() < 1e-15);

    let y10 = BandLimited::spherical_harmonic(1, 1, 0).unwrap();
    let north = y10.eval(&Point::sphere([0.0, 0.0, 1.0]).unwrap()).unwrap();
    assert!((north.re - (3.0 / (4.0 * PI)).sqrt()).abs() < 1e-15);
}

#[test]
fn fejer_matches_closed_form() {
    let f1 = fejer_kernel(1);
    assert_eq!(f1.coeffs(), &[c(0.25, 0.0), c(0.5, 0.0), c(0.25, 0.0)]);
    assert!(f1.eval(&Point::circle(PI)).unwrap().norm() < 1e-15);
    for n in [1usize, 2, 5, 13] {
        let f = fejer_kernel(n);
        for t in [0.3, 1.1, 2.9, 4.4] {
            let np1 = n as f64 + 1.0;
            let closed = (np1 * t / 2.0).sin().powi(2) / (2.0 * np1 * (t / 2.0).sin().powi(2));
            assert!((f.eval(&Point::circle(t)).unwrap().re - closed).abs() < 1e-12);
        }
    }
}

#[test]
fn torus_eval_matches_direct_sum() {
    let f = random_function(Manifold::Torus(2), 3, 11, 0);
    let a = [0.7, 2.3];
    let mut direct = Complex64::default();
    for k1 in -3i64..=3 {
        for k2 in -3i64..=3 {
            let idx = ((k1 + 3) * 7 + (k2 + 3)) as usize;
            direct += f.coeffs()[idx] * Complex64::from_polar(1.0, k1 as f64 * a[0] + k2 as f64 * a[1]);
        }
    }
    assert!((f.eval(&Point::torus(&a)).unwrap() - direct).norm() < 1e-12);
}

#[test]
fn project_round_trips() {
    let y21 = BandLimited::spherical_harmonic(2, 2, 1).unwrap();
    let rule = build_quadrature(Manifold::Sphere2, 4);
    let back = project(&y21.eval_on_rule(&rule).unwrap(), &rule, 2).unwrap();
    assert!(max_coeff_diff(&back, &y21) < 1e-12);

    for m in [Manifold::Circle, Manifold::Torus(2), Manifold::Sphere2] {
        let deg = if m == Manifold::Torus(2) { 6 } else { 10 };
        for seed in 0..3 {
            let f = random_function(m, deg, seed, 0);
            let rule = build_quadrature(m, 2 * deg);
            let back = project(&f.eval_on_rule(&rule).unwrap(), &rule, deg).unwrap();
            assert!(max_coeff_diff(&back, &f) < 1e-12 * f.max_abs().max(1.0), "{m}");
        }
    }
}

#[test]
fn project_refuses_under_resolved_rules() {
    let rule = build_quadrature(Manifold::Sphere2, 6);
    let samples = vec![Complex64::default(); rule.len()];
    assert!(matches!(
        project(&samples, &rule, 4),
        Err(Error::InsufficientQuadrature { .. })
    ));
}

#[test]
fn translate_examples() {
    let s = 0.37;
    let f = BandLimited::circle_mode(3, 2).unwrap();
    let rule = build_quadrature(Manifold::Circle, 6);
    let g = f.translate(&GroupElement::shift(&[s]), &rule).unwrap();
    assert!((g.circle_coeff(2) - Complex64::from_polar(1.0, 2.0 * s)).norm() < 1e-15);

    let rule = build_quadrature(Manifold::Sphere2, 2);
    let y10 = BandLimited::spherical_harmonic(1, 1, 0).unwrap();
    let rz = GroupElement::Rotation(axis_rotation(3, 0.8));
    assert!(max_coeff_diff(&y10.translate(&rz, &rule).unwrap(), &y10) < 1e-12);

    let f = random_function(Manifold::Sphere2, 7, 5, 0);
    let rule = build_quadrature(Manifold::Sphere2, 14);
    let g = GroupElement::euler_zyz(0.3, 1.2, -2.0);
    let moved = f.translate(&g, &rule).unwrap();
    assert!((moved.l2_norm() - f.l2_norm()).abs() < 1e-12 * f.l2_norm());
    let back = moved.translate(&g.inverse(), &rule).unwrap();
    assert!(max_coeff_diff(&back, &f) < 1e-11 * f.max_abs());

    // translate really is x -> f(g x)
    let x = Point::sphere([0.2, -0.5, 0.7]).unwrap();
    let direct = f.eval(&g.act(&x).unwrap()).unwrap();
    assert!((moved.eval(&x).unwrap() - direct).norm() < 1e-11 * f.max_abs());
}

/// Central difference of `t -> f(exp(t X_j) x)` in coefficient space.
fn flow_difference(f: &BandLimited, j: usize, h: f64, rule: &QuadratureRule) -> BandLimited {
    let m = f.manifold();
    let plus = f
        .translate(&GroupElement::exp_generator(m, Generator(j), h).unwrap(), rule)
        .unwrap();
    let minus = f
        .translate(&GroupElement::exp_generator(m, Generator(j), -h).unwrap(), rule)
        .unwrap();
    plus.checked_sub(&minus).unwrap().scaled(c(0.5 / h, 0.0))
}

#[test]
fn generators_match_flow_finite_differences() {
    for (m, deg) in [(Manifold::Sphere2, 6), (Manifold::Circle, 6), (Manifold::Torus(2), 4)] {
        let f = random_function(m, deg, 21, 0);
        let rule = build_quadrature(m, 2 * deg);
        for j in m.generators() {
            let exact = f.apply_generator(j).unwrap();
            let errs: Vec<f64> = [1e-3, 1e-4]
                .iter()
                .map(|&h| {
                    flow_difference(&f, j.0, h, &rule)
                        .checked_sub(&exact)
                        .unwrap()
                        .l2_norm()
                })
                .collect();
            let order = (errs[0] / errs[1]).log10();
            assert!(
                order >= 1.9 || errs[0] < 1e-11 * exact.l2_norm(),
                "{m} D_{}: errors {errs:?}",
                j.0
            );
        }
    }
}

#[test]
fn axis_three_is_diagonal() {
    // Richardson-extrapolated central difference at a point
    for (l, m) in [(1usize, 1i64), (3, -2), (5, 4)] {
        let y = BandLimited::spherical_harmonic(l, l, m).unwrap();
        let x = Point::sphere([0.3, 0.4, -0.5]).unwrap();
        let g = |t: f64| {
            y.eval(&crate::geometry::flow(Manifold::Sphere2, Generator(3), t, &x).unwrap())
                .unwrap()
        };
        let d = |h: f64| (g(h) - g(-h)) / (2.0 * h);
        let fd = (d(1e-5) * 4.0 - d(2e-5)) / 3.0;
        let expected = y.eval(&x).unwrap() * c(0.0, m as f64);
        assert!((fd - expected).norm() < 1e-8, "l={l} m={m}");
        let exact = y.apply_generator(Generator(3)).unwrap();
        assert!((exact.sphere_coeff(l, m) - c(0.0, m as f64)).norm() < 1e-15);
    }
}

#[test]
fn commutator_of_rotation_generators() {
    let f = random_function(Manifold::Sphere2, 8, 2, 0);
    let d = |g: &BandLimited, j| g.apply_generator(Generator(j)).unwrap();
    for (a, b, cc) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
        let bracket = d(&d(&f, b), a).checked_sub(&d(&d(&f, a), b)).unwrap();
        let target = d(&f, cc).scaled(c(-1.0, 0.0));
        assert!(bracket.checked_sub(&target).unwrap().l2_norm() < 1e-10 * target.l2_norm());
    }
}

#[test]
fn laplacian_is_minus_sum_of_squares() {
    for (m, deg) in [(Manifold::Sphere2, 12), (Manifold::Circle, 12), (Manifold::Torus(2), 5)] {
        let f = random_function(m, deg, 4, 0);
        let mut sum = BandLimited::zeros(m, deg);
        for j in m.generators() {
            sum = sum.checked_sub(&f.apply_generators(&[j, j]).unwrap()).unwrap();
        }
        let lap = f.laplacian_exact();
        assert!(lap.checked_sub(&sum).unwrap().l2_norm() <= 1e-10 * lap.l2_norm(), "{m}");
    }
}

#[test]
fn laplacian_matches_laplace_beltrami_differences() {
    // -Delta in spherical coordinates, by second differences on a fine grid
    let h = 1e-4;
    for (l, m) in [(2usize, 0i64), (3, 1), (5, -3), (6, 6)] {
        let y = BandLimited::spherical_harmonic(l, l, m).unwrap();
        let at = |theta: f64, phi: f64| y.eval(&Point::sphere_angles(theta, phi)).unwrap();
        for (theta, phi) in [(0.9f64, 0.4f64), (2.1, 5.0)] {
            let st = theta.sin();
            let d_theta = (at(theta + h, phi) * (theta + h / 2.0).sin()
                - at(theta, phi) * ((theta + h / 2.0).sin() + (theta - h / 2.0).sin())
                + at(theta - h, phi) * (theta - h / 2.0).sin())
                / (h * h * st);
            let d_phi = (at(theta, phi + h) - at(theta, phi) * 2.0 + at(theta, phi - h)) / (h * h * st * st);
            let minus_delta = -(d_theta + d_phi);
            let expected = at(theta, phi) * (l * (l + 1)) as f64;
            assert!(
                (minus_delta - expected).norm() < 1e-5 * (1.0 + expected.norm()),
                "l={l} m={m}"
            );
        }
        assert_eq!(y.laplacian_exact().sphere_coeff(l, m), c((l * (l + 1)) as f64, 0.0));
    }
}

#[test]
fn spectrum_examples() {
    let y31 = BandLimited::spherical_harmonic(3, 3, 1).unwrap();
    let s = y31.spectrum();
    assert_eq!(
        s.blocks,
        vec![SpectralBlock {
            eigenvalue: 12.0,
            norm: 1.0
        }]
    );

    let sin2 = BandLimited::from_coeffs(
        Manifold::Circle,
        2,
        vec![c(0.0, 0.5), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -0.5)],
    )
    .unwrap();
    let s = sin2.spectrum();
    assert_eq!(s.blocks.len(), 1);
    assert_eq!(s.blocks[0].eigenvalue, 4.0);
    assert!((s.blocks[0].norm - PI.sqrt()).abs() < 1e-15);

    let one = BandLimited::constant(Manifold::Sphere2, 1.0);
    assert_eq!(one.spectrum().blocks[0].eigenvalue, 0.0);

    let f = random_function(Manifold::Sphere2, 9, 1, 0);
    let s = f.spectrum();
    assert!(s.blocks.windows(2).all(|w| w[0].eigenvalue < w[1].eigenvalue));
    let energy: f64 = s.blocks.iter().map(|b| b.norm * b.norm).sum();
    assert!((energy - f.l2_norm().powi(2)).abs() < 1e-10 * energy);
}

#[test]
fn generators_annihilate_constants() {
    for m in [Manifold::Circle, Manifold::Torus(3), Manifold::Sphere2] {
        let one = BandLimited::constant(m, 2.5).with_degree(3);
        for j in m.generators() {
            assert_eq!(one.apply_generator(j).unwrap().max_abs(), 0.0);
        }
        assert_eq!(one.laplacian_exact().max_abs(), 0.0);
    }
}

#[test]
fn restriction_examples() {
    let x3 = restrict_polynomial(&[Monomial::new(1.0, [0, 0, 1])], 1).unwrap();
    assert!((x3.sphere_coeff(1, 0).re - (4.0 * PI / 3.0).sqrt()).abs() < 1e-13);
    assert!(x3.with_degree(0).max_abs() < 1e-15);

    let r2 = restrict_polynomial(
        &[
            Monomial::new(1.0, [2, 0, 0]),
            Monomial::new(1.0, [0, 2, 0]),
            Monomial::new(1.0, [0, 0, 2]),
        ],
        2,
    )
    .unwrap();
    let one = restrict_polynomial(&[Monomial::new(1.0, [0, 0, 0])], 0).unwrap();
    for g in [&r2.with_degree(0), &one] {
        assert!((g.sphere_coeff(0, 0).re - (4.0 * PI).sqrt()).abs() < 1e-13);
    }
    assert!(r2.spectrum().max_eigenvalue(1e-12) == 0.0);

    let over = restrict_polynomial(&[Monomial::new(1.0, [1, 1, 1])], 2);
    assert!(matches!(over, Err(Error::DegreeOverflow { found: 3, limit: 2 })));
}

#[test]
fn json_round_trip_is_bit_exact() {
    for m in [Manifold::Circle, Manifold::Torus(2), Manifold::Sphere2] {
        let f = random_function(m, 4, 9, 0).scaled(c(1.0 / 3.0, 0.0));
        let text = serde_json::to_string(&f).unwrap();
        let back: BandLimited = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }
    let real = fejer_kernel(3);
    let back: BandLimited = serde_json::from_str(&serde_json::to_string(&real).unwrap()).unwrap();
    assert!(back.real_valued());
}

#[test]
fn real_flag_requires_symmetry() {
    let e1 = BandLimited::circle_mode(1, 1).unwrap();
    assert!(e1.clone().into_real().is_err());
    assert!(fejer_kernel(4).real_valued());
    let y = BandLimited::spherical_harmonic(2, 2, 1).unwrap();
    let sym = y
        .checked_sub(&BandLimited::spherical_harmonic(2, 2, -1).unwrap())
        .unwrap();
    assert!(sym.into_real().is_ok());
}
