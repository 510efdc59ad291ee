use sphlab::funcspace::{Exponent, Field, FnField, Gaussian, GridFunction};
use sphlab::operators::*;
use sphlab::quad::{sphere_area, sphere_rule, Measure, RotationAngle};
use std::f64::consts::PI;

fn r(s: &str) -> RExponent {
    RExponent::new(s.parse().unwrap()).unwrap()
}

fn gauss(c: [f64; 2], a: f64) -> Gaussian {
    Gaussian { center: c.to_vec(), a, amp: 1.0 }
}

#[test]
fn averages_of_constants() {
    let one = FnField { dim: 2, f: |_: &[f64]| 1.0 };
    let rule = sphere_rule(2, 16, Measure::Normalized).unwrap();
    assert!((spherical_average(&one, &[0.3, 0.1], 1.7, &rule).unwrap() - 1.0).abs() < 1e-15);
    // ||1||_{L^r([1,2], t dt)} = (3/2)^{1/r}.
    for (s, want) in [("1", 1.5), ("2", 1.5f64.sqrt()), ("inf", 1.0)] {
        let v = ar_value(&one, &[0.0, 0.0], r(s), &rule, 8).unwrap();
        assert!((v - want).abs() < 1e-13, "r={s}: {v}");
    }
    assert!(spherical_average(&one, &[0.0, 0.0], -1.0, &rule).is_err());
}

#[test]
fn gaussian_average_at_the_centre() {
    let g = gauss([0.0, 0.0], 2.0);
    let rule = sphere_rule(2, 16, Measure::Raw).unwrap();
    let v = spherical_average(&g, &[0.0, 0.0], 0.5, &rule).unwrap();
    assert!((v - 2.0 * PI * (-0.5f64).exp()).abs() < 1e-13);
}

#[test]
fn maximal_average_is_a_lower_bound_over_the_grid() {
    let g = gauss([0.0, 0.0], 4.0);
    let rule = sphere_rule(2, 32, Measure::Normalized).unwrap();
    let grid = TimeGrid::local(8).unwrap();
    let x = [1.5, 0.0];
    let m = maximal_average(&g, &x, &grid, &rule).unwrap();
    for t in grid.times() {
        assert!(spherical_average(&g, &x, t, &rule).unwrap() <= m);
    }
}

#[test]
fn domination_constant_formula() {
    // r = 2, d = 2: (1 - 1/2)^{-2} = 4.
    assert!((domination_constant(2, r("2")) - 4.0).abs() < 1e-14);
    // r = 4, r' = 4/3, d = 2: (1 - 2^{-1/2})^{-1} (1 - 2^{-3/2})^{-1}.
    let want = 1.0 / ((1.0 - 0.5f64.sqrt()) * (1.0 - 0.5f64.powf(1.5)));
    assert!((domination_constant(2, r("4")) - want).abs() < 1e-13);
    // At the endpoints one factor blows up.
    assert!(domination_constant(2, r("inf")).is_infinite());
    assert!(domination_constant_with_overlap(2, r("2")) > domination_constant(2, r("2")));
}

#[test]
fn sliced_matches_direct() {
    let f = gauss([0.2, -0.4], 3.0);
    let g = gauss([-0.5, 0.1], 1.0);
    let direct = bilinear_rule(2, 48, Measure::Raw).unwrap();
    let s1 = sphere_rule(2, 48, Measure::Raw).unwrap();
    for t in [1.0, 1.3, 2.0] {
        let a = bilinear_average_direct(&f, &g, &[0.1, 0.2], t, &direct).unwrap();
        let b = bilinear_average_sliced(&f, &g, &[0.1, 0.2], t, &s1, 48, Measure::Raw).unwrap();
        assert!((a - b).abs() < 1e-8 * a.abs(), "t={t}: {a} {b}");
    }
}

#[test]
fn holder_bridge_dominates_the_bilinear_maximal() {
    let f = gauss([0.3, 0.0], 5.0);
    let g = gauss([0.0, -0.2], 0.8);
    let rule = sphere_rule(2, 64, Measure::Raw).unwrap();
    let grid = TimeGrid::global(8, -2, 1).unwrap();
    let lhs = bilinear_maximal(&f, &g, &[0.0, 0.0], &grid, &BilinearEval::Sliced(&rule, 48, Measure::Raw)).unwrap();
    for s in ["3/2", "2", "4"] {
        let hb = holder_bridge(&f, &g, &[0.0, 0.0], r(s), &grid, &rule, 48).unwrap();
        assert!(lhs <= hb * (1.0 + 1e-12), "r={s}");
    }
}

#[test]
fn rotated_average_matches_a_direct_sum() {
    let f = gauss([0.2, 0.3], 1.0);
    let g = gauss([-0.1, 0.4], 2.0);
    let rule = sphere_rule(2, 64, Measure::Normalized).unwrap();
    let (x, t) = ([0.1, 0.0], 1.2);
    // Θ = π sends y to -y.
    let a = rotated_bilinear(&f, &g, &x, t, RotationAngle::new(PI).unwrap(), &rule).unwrap();
    let b = rule.integrate(|y| f.eval(&[x[0] - t * y[0], x[1] - t * y[1]]) * g.eval(&[x[0] + t * y[0], x[1] + t * y[1]]));
    assert!((a - b).abs() < 1e-14);
    // At the origin the linearized operator is f(0) g(0) times the mass.
    let v = linearized_bilinear(&f, &g, &[0.0, 0.0], RotationAngle::new(PI).unwrap(), &rule).unwrap();
    assert!((v - f.eval(&[0.0, 0.0]) * g.eval(&[0.0, 0.0])).abs() < 1e-15);
    assert!(RotationAngle::new(0.0).is_err());
}

#[test]
fn duality_holds_with_a_quarter_turn() {
    let f = gauss([0.3, -0.2], 1.0);
    let g = gauss([-0.1, 0.4], 2.0);
    let h = gauss([0.2, 0.5], 0.7);
    let (l, rr) = duality_sides(&f, &g, &h, 1.0, 6.0, 96);
    assert!((l - rr).abs() < 1e-10 * l.abs());
    // The opposite quarter turn is a different integral.
    let (l2, r2) = duality_sides(&f, &g, &h, -1.0, 6.0, 96);
    assert!((l2 - r2).abs() > 1e-2 * l2.abs());
}

#[test]
fn beta_integral_tails() {
    let e = |s: &str| s.parse::<Exponent>().unwrap();
    assert!(beta_bound_finite(e("3"), e("6")));
    // Convergent tails vanish like 6 eps^{1/6}.
    let a = beta_truncated(e("3"), e("6"), 1e-30);
    let b = beta_truncated(e("3"), e("6"), 1e-60);
    assert!((a - b).abs() < 1e-4);
    // 1/p1 = 1/2: logarithmic divergence, about ln(1e20) more.
    let a = beta_truncated(e("2"), e("6"), 1e-20);
    let b = beta_truncated(e("2"), e("6"), 1e-40);
    assert!((b - a - 20.0 * 10f64.ln()).abs() < 0.1);
}

#[test]
fn multilinear_moments() {
    let one = FnField { dim: 1, f: |_: &[f64]| 1.0 };
    let sq = FnField { dim: 1, f: |x: &[f64]| x[0] * x[0] };
    for m in 2..=4 {
        let fs: Vec<&dyn Field> = vec![&one; m];
        assert!((multilinear_average(&fs, 0.0, 1.0, 24).unwrap() - 1.0).abs() < 1e-12, "m={m}");
    }
    // E[y1^2 y2^2] on S^1 and E[y1^2 y2^2 y3^2] on S^2.
    assert!((multilinear_average(&[&sq, &sq], 0.0, 1.0, 24).unwrap() - 1.0 / 8.0).abs() < 1e-13);
    assert!((multilinear_average(&[&sq, &sq, &sq], 0.0, 1.0, 24).unwrap() - 1.0 / 105.0).abs() < 1e-13);
    assert!(multilinear_average(&[&one], 0.0, 1.0, 8).is_err());
}

#[test]
fn tk_bounds_on_indicators() {
    let cells = |a: usize, b: usize| {
        let v: Vec<f64> = (0..64).map(|i| if (a..b).contains(&i) { 1.0 } else { 0.0 }).collect();
        GridFunction::new(vec![-8.0], vec![8.0], vec![64], v).unwrap()
    };
    let (f, g) = (cells(30, 33), cells(26, 40));
    let times: Vec<f64> = (0..=16).map(|i| (i as f64 / 16.0).exp2()).collect();
    for k in 0..6u32 {
        for x in [-0.5, 0.0, 0.4] {
            let t = tk_operator(&f, &g, x, k, &times).unwrap();
            let kk = k as f64;
            let m = |h: &GridFunction, p| sphlab::funcspace::hl_maximal(h, p, x).unwrap();
            let (p3, p32) = (Exponent::int(3), Exponent::frac(3, 2));
            assert!(t <= TK_CONSTANT * (kk / 3.0).exp2() * m(&f, p3) * m(&g, p32));
            assert!(t <= TK_CONSTANT_SWAPPED * (-kk / 3.0).exp2() * m(&f, p32) * m(&g, p3));
        }
    }
    assert_eq!(tk_split_index(64.0, 1.0), 3);
}

#[test]
fn support_is_checked() {
    let f = GridFunction::new(vec![-1.0], vec![1.0], vec![4], vec![1.0; 4]).unwrap();
    assert!(tk_operator(&f, &f, 0.0, 1, &[1.5]).is_err());
    assert!(sphere_area(2) > 0.0);
}
