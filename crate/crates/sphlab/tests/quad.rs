use proptest::prelude::*;
use sphlab::quad::*;
use std::f64::consts::PI;

#[test]
fn sphere_areas() {
    let want = [2.0, 2.0 * PI, 4.0 * PI, 2.0 * PI * PI];
    for (d, w) in (1..=4).zip(want) {
        assert!((sphere_area(d) - w).abs() < 1e-13 * w, "d={d}");
    }
}

#[test]
fn raw_rules_carry_the_surface_mass() {
    for d in 1..=4 {
        let r = sphere_rule(d, 12, Measure::Raw).unwrap();
        assert!((r.mass() - sphere_area(d)).abs() < 1e-12 * sphere_area(d));
        let n = r.with_mode(Measure::Normalized);
        assert!((n.mass() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn mixed_moment_on_s2() {
    // E[y1^2 y2^2] = 1/(d(d+2)) for the normalized measure.
    let r = sphere_rule(3, 16, Measure::Normalized).unwrap();
    let v = r.integrate(|y| y[0] * y[0] * y[1] * y[1]);
    assert!((v - 1.0 / 15.0).abs() < 1e-15);
    // Odd moments vanish.
    assert!(r.integrate(|y| y[0] * y[1] * y[2]).abs() < 1e-15);
}

#[test]
fn rejects_bad_rules() {
    assert!(sphere_rule(5, 8, Measure::Raw).is_err());
    assert!(sphere_rule(2, 2, Measure::Raw).is_err());
}

#[test]
fn gauss_legendre_is_exact_on_polynomials() {
    let v: f64 = gauss_legendre(4, 0.0, 2.0).iter().map(|(x, w)| w * x.powi(7)).sum();
    assert!((v - 32.0).abs() < 1e-12);
}

#[test]
fn slicing_rule_includes_the_weight() {
    // d = 2: weight s, so sum w = 1/2 and |S^3| = (2π)^2 / 2.
    let r = slicing_rule(2, 16);
    let mass: f64 = r.iter().map(|(_, w)| w).sum();
    assert!((mass - 0.5).abs() < 1e-14);
    let m2: f64 = r.iter().map(|(s, w)| w * s * s).sum();
    assert!((m2 - 0.25).abs() < 1e-14);
    // d = 4: weight s^3 (1 - s^2); |S^7| = π^4/3.
    let m: f64 = slicing_rule(4, 16).iter().map(|(_, w)| w).sum();
    assert!((sphere_area(4).powi(2) * m - PI.powi(4) / 3.0).abs() < 1e-12);
}

#[test]
fn rotation() {
    let a = RotationAngle::new(PI / 2.0).unwrap();
    let v = rotate([1.0, 0.0], a);
    assert!(v[0].abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15);
    assert!(RotationAngle::new(f64::NAN).is_err());
}

proptest! {
    #[test]
    fn quadratic_forms_average_to_trace(d in 2usize..=4, n in 4usize..24, a in prop::collection::vec(-3.0f64..3.0, 4)) {
        // E[(a.y)^2] = |a|^2 / d.
        let r = sphere_rule(d, n, Measure::Normalized).unwrap();
        let v = r.integrate(|y| { let s: f64 = (0..d).map(|i| a[i] * y[i]).sum(); s * s });
        let want: f64 = a[..d].iter().map(|x| x * x).sum::<f64>() / d as f64;
        prop_assert!((v - want).abs() <= 1e-12 * (1.0 + want));
    }

    #[test]
    fn rotation_preserves_length(x in -5.0f64..5.0, y in -5.0f64..5.0, t in -7.0f64..7.0) {
        let v = rotate_by([x, y], t);
        prop_assert!((v[0].hypot(v[1]) - x.hypot(y)).abs() < 1e-12);
    }
}
