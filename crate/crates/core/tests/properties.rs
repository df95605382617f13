use std::f64::consts::TAU;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use riesz_core::bandlimited::{restrict_polynomial, Monomial};
use riesz_core::geometry::{flow, geodesic_distance};
use riesz_core::norms::{build_quadrature, lp_norm, lp_norm_checked, lp_norm_converged, norm};
use riesz_core::random::{random_function, random_real_function, random_rotation};
use riesz_core::riesz::{riesz_finite_circle, riesz_series, RieszConfig};
use riesz_core::verify::{from_jsonl, read_csv, to_jsonl, write_csv, CheckReport, Params};
use riesz_core::{BandLimited, Generator, GroupElement, Manifold, NormParams, Point};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 32,
        ..ProptestConfig::default()
    }
}

fn manifold() -> impl Strategy<Value = Manifold> {
    prop_oneof![
        Just(Manifold::Circle),
        Just(Manifold::Torus(2)),
        Just(Manifold::Sphere2)
    ]
}

fn point(m: Manifold) -> BoxedStrategy<Point> {
    match m {
        Manifold::Circle => (0.0..TAU).prop_map(Point::Circle).boxed(),
        Manifold::Torus(d) => prop::collection::vec(0.0..TAU, d)
            .prop_map(|a| Point::torus(&a))
            .boxed(),
        Manifold::Sphere2 => (0.0..std::f64::consts::PI, 0.0..TAU)
            .prop_map(|(t, p)| Point::sphere_angles(t, p))
            .boxed(),
    }
}

fn element(m: Manifold) -> BoxedStrategy<GroupElement> {
    match m {
        Manifold::Circle => (-10.0..10.0f64).prop_map(|a| GroupElement::shift(&[a])).boxed(),
        Manifold::Torus(d) => prop::collection::vec(-10.0..10.0f64, d)
            .prop_map(|a| GroupElement::shift(&a))
            .boxed(),
        Manifold::Sphere2 => any::<u64>()
            .prop_map(|s| random_rotation(&mut ChaCha8Rng::seed_from_u64(s)))
            .boxed(),
    }
}

/// Chord length on the sphere, geodesic distance elsewhere. Near zero
/// `acos` of the dot product only resolves about `1e-8`, too coarse for
/// round-trip checks at `1e-12`.
fn gap(x: &Point, y: &Point) -> f64 {
    match (x, y) {
        (Point::Sphere(a), Point::Sphere(b)) => a.iter().zip(b).map(|(s, t)| (s - t).powi(2)).sum::<f64>().sqrt(),
        _ => geodesic_distance(x, y),
    }
}

fn close(a: &BandLimited, b: &BandLimited, rel: f64) -> bool {
    let scale = a.l2_norm().max(b.l2_norm()).max(1e-300);
    a.checked_sub(b).unwrap().l2_norm() <= rel * scale
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn flow_is_a_one_parameter_group(
        (m, x) in manifold().prop_flat_map(|m| (Just(m), point(m))),
        j in 1usize..=3,
        s in -4.0..4.0f64,
        t in -4.0..4.0f64,
    ) {
        let j = Generator((j - 1) % m.generator_count() + 1);
        let a = flow(m, j, s, &flow(m, j, t, &x).unwrap()).unwrap();
        let b = flow(m, j, s + t, &x).unwrap();
        prop_assert!(gap(&a, &b) < 1e-12);
        let g = GroupElement::exp_generator(m, j, t).unwrap();
        prop_assert!(gap(&g.act(&x).unwrap(), &flow(m, j, t, &x).unwrap()) < 1e-12);
    }

    #[test]
    fn action_is_isometric_and_compatible(
        (_m, x, y, g, h) in manifold().prop_flat_map(|m| (Just(m), point(m), point(m), element(m), element(m))),
    ) {
        let gx = g.act(&x).unwrap();
        let gy = g.act(&y).unwrap();
        prop_assert!(gx.is_valid());
        prop_assert!((geodesic_distance(&gx, &gy) - geodesic_distance(&x, &y)).abs() < 1e-10);
        let nested = g.act(&h.act(&x).unwrap()).unwrap();
        let composed = g.compose(&h).unwrap().act(&x).unwrap();
        prop_assert!(gap(&nested, &composed) < 1e-12);
        let back = g.inverse().act(&gx).unwrap();
        prop_assert!(gap(&back, &x) < 1e-12);
    }

    #[test]
    fn sphere_points_stay_on_the_sphere(x in point(Manifold::Sphere2), g in element(Manifold::Sphere2)) {
        let Point::Sphere(v) = g.act(&x).unwrap() else { unreachable!() };
        prop_assert!((v.iter().map(|c| c * c).sum::<f64>().sqrt() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lp_norms_are_translation_invariant(
        (m, g) in manifold().prop_flat_map(|m| (Just(m), element(m))),
        n in 1usize..6,
        seed in any::<u32>(),
    ) {
        let f = random_function(m, n, seed as u64, 0);
        let rule = build_quadrature(m, 2 * n);
        let tf = f.translate(&g, &rule).unwrap();
        let a = lp_norm_checked(&f, NormParams::TWO).value;
        let b = lp_norm_checked(&tf, NormParams::TWO).value;
        prop_assert!((a - b).abs() <= 1e-10 * a, "p = 2: {a} vs {b}");
        let a = norm(&f, NormParams::INF);
        let b = norm(&tf, NormParams::INF);
        prop_assert!((a - b).abs() <= 1e-10 * a, "p = inf: {a} vs {b}");
        // |f| is not band-limited, so p = 1 is only as good as the rule:
        // converged to 1e-12 on the circle, to its own doubling
        // discrepancy on T^2 and S^2
        if m == Manifold::Circle {
            let a = lp_norm_converged(&f, NormParams::ONE, 1e-12, 1 << 20).value;
            let b = lp_norm_converged(&tf, NormParams::ONE, 1e-12, 1 << 20).value;
            prop_assert!((a - b).abs() <= 1e-10 * a, "p = 1: {a} vs {b}");
        } else {
            let a = lp_norm_checked(&f, NormParams::ONE);
            let b = lp_norm_checked(&tf, NormParams::ONE);
            let tol = 1e-10 + 4.0 * (a.discrepancy + b.discrepancy);
            prop_assert!((a.value - b.value).abs() <= tol * a.value, "p = 1: {a:?} vs {b:?}");
        }
    }

    #[test]
    fn holder_on_finite_measure(
        m in manifold(),
        n in 0usize..6,
        seed in any::<u32>(),
        (p, q) in (1.0..6.0f64, 1.0..6.0f64).prop_map(|(a, b)| (a.min(b), a.max(b))),
    ) {
        let f = random_function(m, n, seed as u64, 1);
        let rule = build_quadrature(m, 8 * n + 8);
        let fp = lp_norm(&f, NormParams::new(p).unwrap(), &rule).unwrap();
        let fq = lp_norm(&f, NormParams::new(q).unwrap(), &rule).unwrap();
        // the discrete rule has positive weights summing to the measure,
        // so Holder holds exactly for the discrete norms
        prop_assert!(fp <= fq * m.measure().powf(1.0 / p - 1.0 / q) * (1.0 + 1e-12));
    }

    #[test]
    fn even_norms_are_exact_at_their_rule_degree(m in manifold(), n in 1usize..8, seed in any::<u32>()) {
        let f = random_function(m, n, seed as u64, 2);
        for p in [2usize, 4] {
            let np = NormParams::new(p as f64).unwrap();
            let a = lp_norm(&f, np, &build_quadrature(m, p * n)).unwrap();
            let b = lp_norm(&f, np, &build_quadrature(m, 2 * p * n)).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * a);
        }
    }

    #[test]
    fn laplacian_is_minus_sum_of_squares(m in manifold(), n in 0usize..10, seed in any::<u32>()) {
        let f = random_function(m, n, seed as u64, 3);
        let mut sum = BandLimited::zeros(m, n);
        for j in m.generators() {
            sum = sum.checked_sub(&f.apply_generators(&[j, j]).unwrap()).unwrap();
        }
        prop_assert!(close(&f.laplacian_exact(), &sum, 1e-10));
    }

    #[test]
    fn sphere_generators_satisfy_the_bracket(n in 1usize..12, seed in any::<u32>()) {
        let f = random_function(Manifold::Sphere2, n, seed as u64, 4);
        for (i, j, k) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
            let ij = f.apply_generators(&[Generator(j), Generator(i)]).unwrap();
            let ji = f.apply_generators(&[Generator(i), Generator(j)]).unwrap();
            let dk = f.apply_generator(Generator(k)).unwrap();
            let bracket = ij.checked_sub(&ji).unwrap();
            let plus = close(&bracket, &dk, 1e-10);
            let minus = close(&bracket, &dk.scaled((-1.0).into()), 1e-10);
            prop_assert!(plus || minus);
        }
    }

    #[test]
    fn translate_then_inverse_is_identity(
        (m, g) in manifold().prop_flat_map(|m| (Just(m), element(m))),
        n in 0usize..10,
        seed in any::<u32>(),
    ) {
        let f = random_function(m, n, seed as u64, 5);
        let rule = build_quadrature(m, 2 * n);
        let back = f.translate(&g, &rule).unwrap().translate(&g.inverse(), &rule).unwrap();
        prop_assert!(close(&back, &f, 1e-11));
    }

    #[test]
    fn generator_matches_finite_differences(
        (m, j) in manifold().prop_flat_map(|m| (Just(m), 1..=m.generator_count())),
        n in 1usize..6,
        seed in any::<u32>(),
    ) {
        let f = random_real_function(m, n, seed as u64, 6);
        let exact = f.apply_generator(Generator(j)).unwrap();
        let rule = build_quadrature(m, 2 * n);
        let err = |h: f64| {
            let fwd = f.translate(&GroupElement::exp_generator(m, Generator(j), h).unwrap(), &rule).unwrap();
            let bwd = f.translate(&GroupElement::exp_generator(m, Generator(j), -h).unwrap(), &rule).unwrap();
            let fd = fwd.checked_sub(&bwd).unwrap().scaled((0.5 / h).into());
            fd.checked_sub(&exact).unwrap().l2_norm()
        };
        let (e1, e2) = (err(1e-2), err(1e-3));
        prop_assert!(e2 < 1e-4 * exact.l2_norm().max(1.0));
        prop_assert!((e1 / e2).log10() >= 1.9, "order {}", (e1 / e2).log10());
    }

    #[test]
    fn restricted_polynomials_are_band_limited(
        terms in prop::collection::vec((-2.0..2.0f64, 0u32..4, 0u32..4, 0u32..4), 1..6),
    ) {
        let monomials: Vec<Monomial> = terms.iter().map(|&(c, a, b, d)| Monomial::new(c, [a, b, d])).collect();
        let n = monomials.iter().map(Monomial::degree).max().unwrap();
        let f = restrict_polynomial(&monomials, n).unwrap();
        let lambda = f.spectrum().max_eigenvalue(1e-12 * f.l2_norm().max(1.0));
        prop_assert!(lambda <= (n * (n + 1)) as f64 + 1e-9);
        let x = Point::sphere_angles(0.7, 2.1);
        let Point::Sphere(v) = x else { unreachable!() };
        let direct: f64 = monomials.iter().map(|t| t.eval(&v).re).sum();
        prop_assert!((f.eval(&x).unwrap().re - direct).abs() < 1e-10 * (1.0 + direct.abs()));
    }

    #[test]
    fn finite_riesz_formula_is_exact(n in 1usize..65, seed in any::<u32>()) {
        let t = random_function(Manifold::Circle, n, seed as u64, 7);
        let exact = t.apply_generator(Generator(1)).unwrap();
        let out = riesz_finite_circle(&t, n).unwrap();
        prop_assert!(out.checked_sub(&exact).unwrap().l2_norm() <= 1e-10 * exact.l2_norm());
    }

    #[test]
    fn riesz_series_respects_bounds(
        m in manifold(),
        n in 1usize..6,
        k in 10usize..400,
        seed in any::<u32>(),
    ) {
        let f = random_function(m, n, seed as u64, 8);
        let cfg = RieszConfig::new(n as f64, k).unwrap();
        let rule = build_quadrature(m, 2 * n);
        for j in m.generators() {
            let out = riesz_series(&f, j, &cfg, &rule).unwrap();
            let exact = f.apply_generator(j).unwrap();
            let err = out.checked_sub(&exact).unwrap().l2_norm();
            prop_assert!(err <= cfg.tail_bound() * f.l2_norm() * (1.0 + 1e-9));
            prop_assert!(out.l2_norm() <= n as f64 * f.l2_norm() * (1.0 + 1e-10));
        }
        let more = RieszConfig::new(n as f64, k + 1).unwrap();
        prop_assert!(more.tail_bound() < cfg.tail_bound());
        prop_assert!(cfg.tail_bound().is_finite());
    }

    #[test]
    fn riesz_series_commutes_with_coaxial_rotation(
        axis in 1usize..=3,
        t in -3.0..3.0f64,
        n in 1usize..5,
        seed in any::<u32>(),
    ) {
        let f = random_function(Manifold::Sphere2, n, seed as u64, 9);
        let cfg = RieszConfig::new(n as f64, 200).unwrap();
        let rule = build_quadrature(Manifold::Sphere2, 2 * n);
        let j = Generator(axis);
        let g = GroupElement::exp_generator(Manifold::Sphere2, j, t).unwrap();
        let a = riesz_series(&f.translate(&g, &rule).unwrap(), j, &cfg, &rule).unwrap();
        let b = riesz_series(&f, j, &cfg, &rule).unwrap().translate(&g, &rule).unwrap();
        prop_assert!(close(&a, &b, 1e-10));
    }
}

fn params() -> impl Strategy<Value = Params> {
    let value = prop_oneof![
        any::<i64>().prop_map(riesz_core::verify::ParamValue::Int),
        any::<f64>().prop_map(riesz_core::verify::ParamValue::Real),
        "[a-z_][a-z_0-9]{0,6}".prop_map(riesz_core::verify::ParamValue::Text),
    ];
    prop::collection::btree_map("[a-z_]{1,6}", value, 0..5).prop_map(|map| {
        let mut p = Params::new();
        for (k, v) in map {
            p = match v {
                riesz_core::verify::ParamValue::Real(x) => p.real(&k, x),
                riesz_core::verify::ParamValue::Int(i) => p.int(&k, i),
                riesz_core::verify::ParamValue::Text(s) => p.text(&k, s),
            };
        }
        p
    })
}

fn float() -> impl Strategy<Value = f64> {
    prop_oneof![any::<f64>(), Just(f64::INFINITY), Just(f64::NEG_INFINITY), Just(0.0)]
}

fn report() -> impl Strategy<Value = CheckReport> {
    (
        "[a-z_]{1,12}",
        params(),
        float(),
        float(),
        0.0..1e-6f64,
        0u8..3,
        "[ -~&&[^\"]]{0,20}",
    )
        .prop_map(|(name, params, lhs, rhs, tol, kind, notes)| {
            let r = match kind {
                0 => CheckReport::inequality(&name, params, lhs, rhs, tol),
                1 => CheckReport::identity(&name, params, lhs, rhs, tol),
                _ => CheckReport::estimate(&name, params, lhs, rhs),
            };
            r.with_notes(notes)
        })
}

/// Equality that treats NaN as equal to itself.
fn same(a: &CheckReport, b: &CheckReport) -> bool {
    let f = |x: f64, y: f64| x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan());
    a.check_name == b.check_name
        && a.params == b.params
        && f(a.lhs, b.lhs)
        && f(a.rhs, b.rhs)
        && f(a.ratio, b.ratio)
        && a.passed == b.passed
        && f(a.tolerance, b.tolerance)
        && a.asserted == b.asserted
        && a.notes == b.notes
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn reports_round_trip(reports in prop::collection::vec(report(), 0..6)) {
        let back = from_jsonl(&to_jsonl(&reports).unwrap()).unwrap();
        prop_assert_eq!(back.len(), reports.len());
        for (a, b) in reports.iter().zip(&back) {
            prop_assert!(same(a, b), "{:?} vs {:?}", a, b);
        }
        let mut buf = Vec::new();
        write_csv(&reports, &mut buf).unwrap();
        let back = read_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.len(), reports.len());
        for (a, b) in reports.iter().zip(&back) {
            prop_assert!(same(a, b), "{:?} vs {:?}", a, b);
        }
    }

    #[test]
    fn pass_rule_follows_the_kind(lhs in 0.0..10.0f64, rhs in 0.0..10.0f64, tol in 0.0..0.1f64) {
        let ineq = CheckReport::inequality("x", Params::new(), lhs, rhs, tol);
        prop_assert_eq!(ineq.passed, ineq.ratio <= 1.0 + tol);
        let id = CheckReport::identity("x", Params::new(), lhs, rhs, tol);
        prop_assert_eq!(id.passed, (lhs - rhs).abs() <= tol * rhs.abs().max(1.0));
        prop_assert!(!CheckReport::estimate("x", Params::new(), lhs, rhs).is_failure());
    }
}
