use sphlab::funcspace::GridFunction;
use sphlab::lpdecomp::*;
use sphlab::operators::RExponent;

fn bank() -> MultiplierBank {
    MultiplierBank::new(10).unwrap()
}

#[test]
fn multipliers_have_the_right_supports() {
    let b = bank();
    assert_eq!(b.phi_hat(0.9), 1.0);
    assert_eq!(b.phi_hat(2.0), 0.0);
    for j in 1..=5u32 {
        let s = (j as f64).exp2();
        assert_eq!(b.psi_hat(j, 0.49 * s), 0.0);
        assert_eq!(b.psi_hat(j, 2.01 * s), 0.0);
        assert!(b.psi_hat(j, s) > 0.99);
    }
    assert!(MultiplierBank::new(0).is_err());
}

#[test]
fn partition_of_unity() {
    let rep = partition_check(&bank(), (0.5, 256.0), 1.0 / 8.0).unwrap();
    assert!(rep.max_error <= 1e-8, "{rep:?}");
    assert!(rep.covered);
}

#[test]
fn pieces_sum_back_to_the_function() {
    let b = bank();
    let f = GridFunction::from_fn(&[-4.0, -4.0], &[4.0, 4.0], &[128, 128], |x| (-(x[0] * x[0] + x[1] * x[1]) * 2.0).exp()).unwrap();
    let mut acc = low_piece(&f, &b).unwrap().values().to_vec();
    for j in 1..=2 {
        for (a, v) in acc.iter_mut().zip(lp_piece(&f, j, &b).unwrap().values()) {
            *a += v;
        }
    }
    // The gaussian has negligible energy above |ξ| = 4.
    let err = acc.iter().zip(f.values()).map(|(a, v)| (a - v).abs()).fold(0.0, f64::max);
    assert!(err < 1e-6, "{err}");
    assert!(lp_piece(&f, 4, &b).is_err(), "piece 4 reaches |ξ| = 32, beyond the grid");
}

#[test]
fn l2_proxy_decays_like_two_to_minus_half_j() {
    let b = bank();
    let v: Vec<f64> = (3..=6).map(|j| l2_decay_proxy(&b, j, 2048, 10, 3)).collect();
    for w in v.windows(2) {
        let s = (w[1] / w[0]).log2();
        assert!((s + 0.5).abs() < 0.15, "{s}");
    }
}

#[test]
fn l1_linf_proxy_grows_like_two_to_j_over_r_prime() {
    let b = bank();
    let r = RExponent::new(sphlab::funcspace::Exponent::int(2)).unwrap();
    let lo = l1_linf_proxy(&b, 4, r, 1.0 / 16384.0, 1.5, 4);
    let hi = l1_linf_proxy(&b, 7, r, 1.0 / 16384.0, 1.5, 4);
    let s = (hi / lo).log2() / 3.0;
    assert!((s - 0.5).abs() < 0.15, "{s}");
}

#[test]
fn kernel_decays_off_the_sphere() {
    let b = bank();
    let c: Vec<f64> = [4u32, 6].iter().map(|j| kernel_decay_fit(&DecayCheckSpec::around(*j, 1.5, 4, 40.0).unwrap(), &b).unwrap()).collect();
    assert!(c.iter().all(|c| *c < 2.0), "{c:?}");
    assert!(DecayCheckSpec::around(4, 3.0, 4, 10.0).is_err());
}
