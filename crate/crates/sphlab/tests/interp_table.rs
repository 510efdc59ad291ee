use num_rational::Ratio;
use proptest::prelude::*;
use sphlab::funcspace::Exponent;
use sphlab::interp::*;
use sphlab::regions::{classify, ExponentPoint, TheoremId, Verdict};

type Q = Ratio<i64>;

const RS: [&str; 6] = ["1", "5/4", "3/2", "2", "3", "inf"];

#[test]
fn every_row_lands_on_its_vertex() {
    let mut seen = [0usize; 6];
    for d in [2u32, 3, 4] {
        for r in RS {
            let r: Exponent = r.parse().unwrap();
            for c in reproduce_table(d, r).unwrap() {
                seen[c.row - 1] += 1;
                if c.degenerate {
                    // Only r = 1 (no growth rate) or d = 2, r = inf in the
                    // L^2 rows (no decay rate).
                    let ok = r == Exponent::int(1) || (d == 2 && r.is_infinite() && (c.row == 4 || c.row == 6));
                    assert!(ok, "unexpected degenerate row {} at d={d}, r={r}", c.row);
                    continue;
                }
                assert!(c.matches, "row {} d={d} r={r}: {:?} vs {:?}", c.row, c.result, c.expected);
                let pt = ExponentPoint::new(c.expected.clone(), d, Some(r));
                assert_eq!(classify(&pt, TheoremId::LinearAr).unwrap().verdict, Verdict::RestrictedWeak);
            }
        }
    }
    assert!(seen.iter().all(|n| *n > 0), "rows visited: {seen:?}");
}

#[test]
fn csv_has_one_line_per_check() {
    let checks = reproduce_table(3, "3/2".parse().unwrap()).unwrap();
    let s = table_csv(&checks).unwrap();
    assert_eq!(s.lines().count(), checks.len() + 1);
    assert!(s.lines().skip(1).all(|l| l.ends_with("match")));
}

#[test]
fn r_one_is_flagged() {
    let checks = reproduce_table(2, Exponent::int(1)).unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c.degenerate && c.result.is_none()));
    assert!(table_csv(&checks).unwrap().contains("degenerate"));
}

fn small_pos() -> impl Strategy<Value = Q> {
    (1i64..20, 1i64..20).prop_map(|(a, b)| Q::new(a, b))
}

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![Just(Exponent::Infinite), (1i64..6, 1i64..6).prop_map(|(a, b)| Exponent::from_recip(Q::new(b.min(a), a)))]
}

proptest! {
    #[test]
    fn scaling_rates_leaves_point_unchanged(
        e1 in small_pos(), e2 in small_pos(), c in small_pos(),
        p1 in exponent(), q1 in exponent(), p2 in exponent(), q2 in exponent(),
    ) {
        let g = EndpointEstimate::linear(p1, q1, e1);
        let dcy = EndpointEstimate::linear(p2, q2, -e2);
        let a = bourgain_combine(&g, &dcy).unwrap();
        let gs = EndpointEstimate::linear(p1, q1, e1 * c);
        let ds = EndpointEstimate::linear(p2, q2, -e2 * c);
        let b = bourgain_combine(&gs, &ds).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn combined_point_lies_between(e1 in small_pos(), e2 in small_pos(), p1 in exponent(), p2 in exponent()) {
        let g = EndpointEstimate::linear(p1, Exponent::Infinite, e1);
        let dcy = EndpointEstimate::linear(p2, Exponent::int(2), -e2);
        let x = bourgain_combine(&g, &dcy).unwrap();
        let (a, b) = (p1.recip(), p2.recip());
        let lo = if a < b { a } else { b };
        let hi = if a < b { b } else { a };
        prop_assert!(x.ps[0].recip() >= lo && x.ps[0].recip() <= hi);
        prop_assert!(x.theta > Q::from_integer(0) && x.theta < Q::from_integer(1));
    }
}
