use multibrot_core::dynamics::{orbit, ComplexPoint, OrbitVerdict};
use multibrot_core::render::{compute_grid, Window};
use multibrot_core::sections::{classify, scan_ray_endpoint_with, Classifier, RayClass};
use multibrot_core::{
    analyze_real_q_orbit, escape_radius, extremal_cycle, iterate_p, iterate_q, Degree,
    IterationBudget, PolyMap, VerdictKind,
};
use num_complex::Complex;
use proptest::prelude::*;

fn degree(d: u32) -> Degree {
    Degree::new(d).unwrap()
}

fn budget(n: u64) -> IterationBudget {
    IterationBudget::with_max_iters(n).unwrap()
}

fn point(re: f64, im: f64) -> ComplexPoint<f64> {
    ComplexPoint::new(re, im).unwrap()
}

/// Rounding budget for comparing two computed orbits that agree in exact
/// arithmetic: each step adds ~10 ulp of the step's magnitude, and carries the
/// previous error through the derivative `d z^(d-1)`.
fn rounding_bounds(d: u32, c: Complex<f64>, z: &[Complex<f64>]) -> Vec<f64> {
    let ulp = 10.0 * f64::EPSILON;
    let mut err = ulp * c.norm();
    let mut prev = 0.0_f64;
    z.iter()
        .map(|w| {
            err = d as f64 * prev.powi(d as i32 - 1) * err
                + ulp * (prev.powi(d as i32) + c.norm() + w.norm());
            prev = w.norm() + err;
            err
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn escape_is_sound(d in 2u32..8, re in -2.5f64..2.5, im in -2.5f64..2.5, minus in any::<bool>()) {
        let (dg, c) = (degree(d), point(re, im));
        let map = if minus { PolyMap::Minus } else { PolyMap::Plus };
        let verdict = match map {
            PolyMap::Plus => iterate_p(dg, c, &budget(500)),
            PolyMap::Minus => iterate_q(dg, c, &budget(500)),
        };
        if let OrbitVerdict::Escaped { steps, modulus } = verdict {
            let radius = escape_radius(dg, c) + 1e-9;
            prop_assert!(modulus > radius);
            if modulus.is_finite() {
                let z = orbit(map, dg, c, steps as usize + 1);
                prop_assert_eq!(z[steps as usize - 1].norm(), modulus);
                prop_assert!(z[steps as usize].norm() > modulus);
            }
        }
    }

    #[test]
    fn rotation_conjugates_orbits(d in 3u32..7, k in 1u32..6, re in -1.2f64..1.2, im in -1.2f64..1.2) {
        let dg = degree(d);
        let k = k % (d - 1);
        let theta = std::f64::consts::TAU * k as f64 / (d - 1) as f64;
        let omega = Complex::new(theta.cos(), theta.sin());
        let c = point(re, im);
        let rc = ComplexPoint::from_complex(omega * c.to_complex()).unwrap();
        let n = 6;
        let base = orbit(PolyMap::Plus, dg, c, n);
        let rotated = orbit(PolyMap::Plus, dg, rc, n);
        let bounds = rounding_bounds(d, c.to_complex(), &base);
        let radius = escape_radius(dg, c);
        for (j, (z, w)) in base.iter().zip(&rotated).enumerate().take_while(|(_, (z, _))| z.norm() <= radius) {
            let expected = omega * z;
            prop_assert!((expected - w).norm() <= bounds[j], "step {}: {} vs {}", j, expected, w);
        }
    }

    #[test]
    fn minus_unity_conjugates_p_to_q(d in 3u32..9, re in -1.0f64..1.0, im in -1.0f64..1.0) {
        // omega^(d-1) = -1: omega^-1 p_(omega c)(omega z) = q_c(z)
        let dg = degree(d);
        let theta = std::f64::consts::PI / (d - 1) as f64;
        let omega = Complex::new(theta.cos(), theta.sin());
        let c = point(re, im);
        let rc = ComplexPoint::from_complex(omega * c.to_complex()).unwrap();
        let n = 6;
        let p = orbit(PolyMap::Plus, dg, rc, n);
        let q = orbit(PolyMap::Minus, dg, c, n);
        let bounds = rounding_bounds(d, c.to_complex(), &q);
        let radius = escape_radius(dg, c);
        for (j, (zp, zq)) in p.iter().zip(&q).enumerate().take_while(|(_, (_, zq))| zq.norm() <= radius) {
            prop_assert!((zp.norm() - zq.norm()).abs() <= bounds[j], "step {}", j);
        }
    }

    #[test]
    fn real_q_witness_is_checkable(d in prop::sample::select(vec![3u32, 5, 7, 9]), c in 0.0f64..1.2) {
        let dg = degree(d);
        if let OrbitVerdict::ProvenBounded { witness, .. } =
            analyze_real_q_orbit(dg, c, &budget(200_000)).unwrap()
        {
            prop_assert!(witness.low <= 0.0 && witness.high >= 0.0);
            prop_assert!(witness.is_q_invariant(dg, c, 1e-8));
        }
    }

    #[test]
    fn real_q_never_contradicts_plain_iteration(d in prop::sample::select(vec![3u32, 5]), c in 0.0f64..1.5) {
        let dg = degree(d);
        let analysed = analyze_real_q_orbit(dg, c, &budget(20_000)).unwrap();
        let plain = iterate_q(dg, point(c, 0.0), &budget(20_000));
        match analysed.kind() {
            VerdictKind::Escaped => prop_assert_eq!(analysed.escape_steps(), plain.escape_steps()),
            VerdictKind::ProvenBounded => prop_assert!(!plain.is_escaped()),
            VerdictKind::Undetermined => {}
        }
    }
}

#[test]
fn real_q_at_extremal_parameter_recovers_cycle() {
    let cyc = extremal_cycle(3.0_f64).unwrap();
    let verdict = analyze_real_q_orbit(degree(3), cyc.c, &budget(10_000_000)).unwrap();
    match verdict {
        OrbitVerdict::ProvenBounded { witness, steps } => {
            // parabolic cycle: convergence is algebraic, so the limits are only
            // resolved to ~1e-7 when the step size drops below 1e-13
            assert!(
                (witness.high - cyc.a0).abs() < 1e-6,
                "{witness:?} after {steps}"
            );
            assert!((-witness.low - cyc.b0).abs() < 1e-6, "{witness:?}");
            assert!((witness.high * -witness.low - 1.0 / 3.0).abs() < 1e-6);
        }
        other => panic!("expected bounded, got {other:?}"),
    }
}

#[test]
fn budget_refinement_is_monotone() {
    let window = Window::<f64>::default_for(64, 64).unwrap();
    let coarse = compute_grid(degree(4), window, &budget(50)).unwrap();
    let fine = compute_grid(degree(4), window, &budget(400)).unwrap();
    for (a, b) in coarse.counts().iter().zip(fine.counts()) {
        if *a != 0 {
            assert_eq!(a, b, "an escaped pixel changed");
        }
    }
}

#[test]
fn scans_bracket_the_prediction() {
    let b = budget(100_000);
    for d in 2..=5u32 {
        let dg = degree(d);
        let mut rays = vec![
            RayClass::<f64>::root_of_unity(dg),
            RayClass::root_of_minus_unity(dg),
        ];
        if let Ok(r) = RayClass::imaginary_axis(dg) {
            rays.push(r);
        }
        for ray in rays {
            let predicted = ray.predicted_endpoint().unwrap();
            for classifier in [Classifier::Direct, Classifier::Conjugate] {
                let est = scan_ray_endpoint_with(&ray, &b, 40, classifier).unwrap();
                assert!(est.t_low < est.t_high);
                assert!(est.t_low < predicted + 1e-6, "d={d} {ray:?}");
                assert!(predicted < est.t_high + 2e-3, "d={d} {ray:?}");
                assert!((est.midpoint() - predicted).abs() <= 2e-3);
            }
        }
    }
}

#[test]
fn cubic_imaginary_axis_endpoint() {
    let ray = RayClass::<f64>::imaginary_axis(degree(3)).unwrap();
    let est = scan_ray_endpoint_with(&ray, &budget(100_000), 40, Classifier::Direct).unwrap();
    assert!((est.midpoint() - (32.0_f64 / 27.0).sqrt()).abs() < 1e-3);
}

#[test]
fn conjugate_and_direct_classifiers_agree_along_rays() {
    let b = budget(20_000);
    for d in [3u32, 5, 7] {
        let ray = RayClass::<f64>::root_of_minus_unity(degree(d));
        let predicted = ray.predicted_endpoint().unwrap();
        for i in 0..=200 {
            let t = 1.6 * i as f64 / 200.0;
            if (t - predicted).abs() < 1e-2 {
                continue;
            }
            let direct = classify(&ray, t, &b, Classifier::Direct).unwrap();
            let conj = classify(&ray, t, &b, Classifier::Conjugate).unwrap();
            assert_eq!(direct.kind(), conj.kind(), "d={d} t={t}");
        }
    }
}

#[test]
fn escape_region_along_rays_is_an_interval() {
    let b = budget(20_000);
    for d in 2..=5u32 {
        let dg = degree(d);
        for ray in [
            RayClass::<f64>::root_of_unity(dg),
            RayClass::root_of_minus_unity(dg),
        ] {
            let kinds: Vec<bool> = (0..=400)
                .map(|i| {
                    let t = 2.5 * i as f64 / 400.0;
                    classify(&ray, t, &b, Classifier::Direct)
                        .unwrap()
                        .is_escaped()
                })
                .collect();
            let first = kinds.iter().position(|&e| e).expect("escapes somewhere");
            assert!(kinds[first..].iter().all(|&e| e), "d={d} {ray:?}");
        }
    }
}
