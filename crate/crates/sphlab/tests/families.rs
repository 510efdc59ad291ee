use sphlab::families::*;
use sphlab::funcspace::{Exponent, Q};
use num_traits::ToPrimitive;
use sphlab::operators::RExponent;
use std::f64::consts::{FRAC_PI_2, PI};

#[test]
fn row_exponents_at_d3() {
    let r = Exponent::int(2);
    let row = |id| ExampleRow::new(id, 3, r).unwrap();
    assert_eq!(row(RowId::ShellNeighborhood).gamma, Q::new(1, 2));
    assert_eq!(row(RowId::SmallBall).gamma, Q::new(5, 2));
    assert_eq!(row(RowId::Knapp).alpha_p, Q::from_integer(2));
    assert_eq!(row(RowId::LargeBall).beta, Q::from_integer(-3));
    assert_eq!(row(RowId::SmallBall).condition_text(), "(3)/p <= (0)/q + 5/2");
    assert!(ExampleRow::new(RowId::Knapp, 1, r).is_err());
}

#[test]
fn row_ids_parse() {
    assert_eq!("3".parse::<RowId>().unwrap(), RowId::Knapp);
    for id in RowId::ALL {
        assert_eq!(id.to_string().parse::<RowId>().unwrap(), id);
    }
    assert!("5".parse::<RowId>().is_err());
}

#[test]
fn row_measures_scale_as_tabulated() {
    // |E| ~ δ^β, so halving δ moves log2 |E| by -β.
    for id in RowId::ALL {
        let a = make_row(id, 1.0 / 64.0, 2, 4.0).unwrap();
        let b = make_row(id, 1.0 / 128.0, 2, 4.0).unwrap();
        let beta = ExampleRow::new(id, 2, Exponent::int(2)).unwrap().beta.to_f64().unwrap();
        let s = (b.e_measure / a.e_measure).log2();
        assert!((s + beta).abs() < 0.2, "{id}: {s}");
    }
}

#[test]
fn row_lower_bounds_are_positive() {
    let r = RExponent::new(Exponent::int(2)).unwrap();
    for id in RowId::ALL {
        let inst = make_row(id, 1.0 / 64.0, 2, 4.0).unwrap();
        assert!(inst.gamma_value(r, 8).unwrap() > 0.0, "{id}");
        assert!(!inst.test_points.is_empty());
    }
}

#[test]
fn row_parameters_are_validated() {
    assert!(make_row(RowId::SmallBall, 0.5, 2, 1.0).is_err());
    assert!(make_row(RowId::SmallBall, 1.0 / 16.0, 2, 32.0).is_err());
    assert!(make_row(RowId::Knapp, 1.0 / 16.0, 3, 2.0).is_err());
    assert!(make_row(RowId::SmallBall, 1.0 / 16.0, 4, 2.0).is_err());
}

#[test]
fn kakeya_union_is_small() {
    // |∪R_l| log(1/δ) / δ² stays of order one.
    for n in [4, 5, 6] {
        let fam = make_kakeya((-(n as f64)).exp2(), FRAC_PI_2).unwrap();
        let ratio = fam.union_ratio(2000);
        assert!((0.5..2.0).contains(&ratio), "n={n}: {ratio}");
        assert_eq!(fam.rects.len(), 1 << n);
    }
    assert!(make_kakeya(0.3, PI).is_err());
    assert!(make_kakeya(1.0 / 16.0, 0.0).is_err());
}

#[test]
fn kakeya_maximal_is_of_order_delta_on_the_region() {
    let delta = 1.0 / 32.0;
    let fam = make_kakeya(delta, FRAC_PI_2).unwrap();
    let pts = fam.sample_region(60, 11);
    assert_eq!(pts, fam.sample_region(60, 11));
    let vals: Vec<f64> = pts.iter().map(|x| fam.local_maximal(*x, 8) / delta).collect();
    let good = vals.iter().filter(|v| **v >= 0.04).count();
    assert!(good as f64 >= 0.95 * vals.len() as f64, "{vals:?}");
    // Averages are normalized lengths.
    assert!(vals.iter().all(|v| v * delta <= 1.0));
}

#[test]
fn dyadic_sum_levels() {
    let spec = DyadicSumSpec { n: 6, a: 0.25, d: 2, r: Exponent::int(2) };
    // 1/p0 = (d - 1 + 1/r)/d = 3/4.
    assert_eq!(spec.p0(), Exponent::frac(4, 3));
    let s = make_dyadic_sum(spec.clone()).unwrap();
    assert_eq!(s.levels.levels().len(), 6);
    assert!(spec.block_value(2) > spec.block_value(1));
    assert!(make_dyadic_sum(DyadicSumSpec { n: 0, ..spec.clone() }).is_err());
    assert!(make_dyadic_sum(DyadicSumSpec { a: 0.5, ..spec }).is_err());
}

fn product(a: Q, b: Q) -> ProductTypeSpec {
    ProductTypeSpec { alpha: [a, a], beta: [b, b], p1: Exponent::int(2), p2: Exponent::int(2), k_range: (4, 9) }
}

#[test]
fn product_pair_norms_match_quadrature() {
    let pair = make_product_type(product(Q::new(9, 10), Q::new(3, 5))).unwrap();
    let (nf, ng) = pair.norms();
    // ∫_{-2}^{2} ||u|-1|^{-a} = 4 I(a) and ∫_{-2}^{2} |v|^{-a} = 2^{2-a} I(a), I(a) = ∫_0^1 s^{-a}.
    let i = |a: f64| truncated_power_integral(a, 1e-300);
    let want = |a: f64| 4.0 * i(a) * (2.0 - a).exp2() * i(a);
    assert!((nf * nf - want(0.9)).abs() < 1e-8 * want(0.9));
    assert!((ng * ng - want(0.6)).abs() < 1e-8 * want(0.6));
    // 0.45 + 0.3 + (0.45 + 0.3)/2 - 1/2.
    assert_eq!(pair.predicted_exponent(), Q::new(5, 8));
}

#[test]
fn truncated_power_integrals() {
    assert!((truncated_power_integral(0.5, 1e-12) - 2.0 * (1.0 - 1e-6)).abs() < 1e-9);
    let a = truncated_power_integral(1.0, 1e-10);
    assert!((a - 10.0 * 10f64.ln()).abs() < 1e-8);
}

#[test]
fn product_transform_grows_on_bk() {
    let pair = make_product_type(product(Q::new(9, 10), Q::new(9, 10))).unwrap();
    let (a, b) = (pair.bk_lower_bound(4), pair.bk_lower_bound(6));
    let s = (b / a).log2() / 2.0;
    assert!((s - 0.85).abs() < 0.1, "{s}");
    assert!(make_product_type(product(Q::from_integer(1), Q::new(1, 2))).is_err());
}
