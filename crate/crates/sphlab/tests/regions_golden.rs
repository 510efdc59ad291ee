use num_rational::Ratio;
use sphlab::funcspace::Exponent;
use sphlab::regions::*;

type Q = Ratio<i64>;

fn q(a: i64, b: i64) -> Q {
    Q::new(a, b)
}

fn r_of(s: &str) -> Option<Exponent> {
    Some(s.parse().unwrap())
}

fn lin(x: Q, y: Q, d: u32, r: &str) -> ExponentPoint {
    ExponentPoint::new(vec![x, y], d, r_of(r))
}

fn bil(a: Q, b: Q, z: Q, d: u32) -> ExponentPoint {
    ExponentPoint::new(vec![a, b, z], d, None)
}

fn verdict(p: &ExponentPoint, t: TheoremId) -> Verdict {
    classify(p, t).unwrap().verdict
}

#[test]
fn golden_coordinates_linear() {
    let r2 = r_of("2");
    let at = |t, d, r, n: &str| vertex(t, d, r, n).unwrap();
    assert_eq!(at(TheoremId::LinearAr, 2, r2, "A"), vec![q(1, 2), q(0, 1)]);
    assert_eq!(at(TheoremId::LinearAr, 2, r2, "P"), vec![q(7, 10), q(1, 10)]);
    assert_eq!(at(TheoremId::LinearAr, 2, r2, "Q"), vec![q(3, 4), q(1, 4)]);
    assert_eq!(at(TheoremId::LinearAr, 2, r2, "R"), vec![q(3, 4), q(3, 4)]);
    assert_eq!(at(TheoremId::LinearAr, 3, r2, "P"), vec![q(4, 5), q(1, 10)]);
    assert_eq!(at(TheoremId::LinearAr, 3, r2, "Q"), vec![q(5, 6), q(1, 6)]);
    // r = 3/2, d = 2: P = ((3 + 2r)/(5r), 1/(5r')).
    assert_eq!(at(TheoremId::LinearAr, 2, r_of("3/2"), "P"), vec![q(4, 5), q(1, 15)]);
    assert_eq!(at(TheoremId::LinearBr, 2, r2, "P'"), vec![q(2, 5), q(1, 5)]);
    assert_eq!(at(TheoremId::LinearBr, 3, r2, "P'"), vec![q(3, 5), q(1, 5)]);
    assert_eq!(at(TheoremId::LinearBr, 3, r2, "Q'"), vec![q(2, 3), q(1, 3)]);
    assert_eq!(at(TheoremId::LinearBr, 3, r2, "R'"), vec![q(2, 3), q(2, 3)]);
}

#[test]
fn golden_coordinates_bilinear() {
    let at = |d, n: &str| vertex(TheoremId::SlicedImproving, d, None, n).unwrap();
    assert_eq!(at(2, "A"), vec![q(1, 2), q(0, 1)]);
    assert_eq!(at(2, "E"), vec![q(1, 2), q(0, 1)]);
    assert_eq!(at(2, "F"), vec![q(9, 14), q(1, 7)]);
    assert_eq!(at(2, "B'"), vec![q(7, 10), q(1, 5)]);
    assert_eq!(at(2, "C"), vec![q(3, 4), q(1, 2)]);
    assert_eq!(at(2, "D"), vec![q(3, 4), q(3, 2)]);
    assert_eq!(at(3, "E"), vec![q(3, 4), q(1, 6)]);
    assert_eq!(at(3, "F"), vec![q(25, 32), q(3, 16)]);
    assert_eq!(at(3, "B'"), vec![q(4, 5), q(1, 5)]);
    assert_eq!(at(3, "C"), vec![q(5, 6), q(1, 3)]);
    assert_eq!(at(3, "D"), vec![q(5, 6), q(5, 3)]);
    let u = vertex_table(TheoremId::FullMaximal, 1, None).unwrap();
    assert_eq!(u[1].1, vec![q(1, 2), q(1, 2)]);
    let v = vertex_table(TheoremId::FullMaximal, 2, None).unwrap();
    assert_eq!(v[0].1, vec![q(1, 1), q(1, 2)]);
    assert_eq!(vertex_table(TheoremId::Gikl, 2, None).unwrap().len(), 7);
    assert_eq!(vertex_table(TheoremId::GiklPi, 2, None).unwrap().len(), 6);
}

/// Every vertex lies on the facets it is listed on, and on no other;
/// at the degenerate values (r = 1, r = inf, or E = A in the plane) only
/// containment is required.
#[test]
fn vertices_on_their_facets() {
    for d in [2u32, 3] {
        for r in ["1", "3/2", "2", "3", "inf"] {
            let rr = r_of(r);
            let vs = vertex_table(TheoremId::LinearAr, d, rr).unwrap();
            let degenerate = r == "1" || r == "inf";
            for (c, expected) in facets(TheoremId::LinearAr, d, rr).unwrap() {
                for (name, x) in &vs {
                    assert!(c.satisfied(x), "{name} violates {} (d={d}, r={r})", c.name);
                    let want = expected.contains(&name.as_str());
                    if want {
                        assert!(c.tight(x), "{name} off {} (d={d}, r={r})", c.name);
                    } else if !degenerate {
                        assert!(!c.tight(x), "{name} unexpectedly on {} (d={d}, r={r})", c.name);
                    }
                }
            }
        }
        let vs = vertex_table(TheoremId::SlicedImproving, d, None).unwrap();
        for (c, expected) in facets(TheoremId::SlicedImproving, d, None).unwrap() {
            for (name, x) in &vs {
                let want = expected.contains(&name.as_str());
                if want {
                    assert!(c.tight(x), "{name} off {} (d={d})", c.name);
                } else if d > 2 {
                    assert!(!c.tight(x), "{name} unexpectedly on {} (d={d})", c.name);
                }
            }
        }
    }
}

#[test]
fn schlag_sogge_is_the_r_inf_limit() {
    for d in [2u32, 3, 4] {
        let a = vertex_table(TheoremId::LinearAr, d, r_of("inf")).unwrap();
        let s = vertex_table(TheoremId::SchlagSogge, d, None).unwrap();
        assert_eq!(a[0].1, a[1].1, "A = O at r = inf");
        for k in 1..4 {
            assert_eq!(a[k + 1].1, s[k].1);
        }
    }
}

#[test]
fn schlag_matches_br_at_r1_d2() {
    let probes = [
        (q(3, 10), q(1, 5)),
        (q(1, 2), q(1, 10)),
        (q(3, 5), q(3, 10)),
        (q(4, 5), q(3, 5)),
        (q(9, 10), q(1, 10)),
    ];
    for (x, y) in probes {
        let a = classify(&lin(x, y, 2, "1"), TheoremId::LinearBr).unwrap();
        let b = classify(&lin(x, y, 2, "1"), TheoremId::Schlag).unwrap();
        assert_eq!(a.verdict, b.verdict);
        let pa = a.delta_power.unwrap();
        let pb = b.delta_power.unwrap();
        assert_eq!(pa.rsplit(" = ").next(), pb.rsplit(" = ").next(), "at ({x}, {y})");
    }
}

#[test]
fn pinned_linear_probes() {
    use Verdict::*;
    let t = TheoremId::LinearAr;
    let cases: Vec<(ExponentPoint, Verdict)> = vec![
        (lin(q(1, 4), q(1, 8), 2, "2"), Strong),
        (lin(q(1, 2), q(0, 1), 2, "2"), Strong),
        (lin(q(1, 4), q(0, 1), 2, "2"), Strong),
        (lin(q(3, 5), q(1, 20), 2, "2"), Strong),
        (lin(q(1, 2), q(1, 2), 2, "2"), Strong),
        (lin(q(7, 10), q(1, 10), 2, "2"), RestrictedWeak),
        (lin(q(3, 4), q(1, 4), 2, "2"), RestrictedWeak),
        (lin(q(3, 4), q(3, 4), 2, "2"), RestrictedWeak),
        (lin(q(3, 4), q(1, 2), 2, "2"), RestrictedStrong),
        (lin(q(29, 40), q(7, 40), 2, "2"), Strong),
        (lin(q(4, 5), q(1, 2), 2, "2"), False),
        (lin(q(1, 2), q(3, 4), 2, "2"), False),
        (lin(q(3, 5), q(0, 1), 2, "2"), False),
        (lin(q(1, 1), q(1, 2), 2, "1"), RestrictedStrong),
        (lin(q(1, 1), q(0, 1), 2, "1"), RestrictedWeak),
        (lin(q(5, 6), q(1, 6), 3, "2"), RestrictedWeak),
        (lin(q(2, 3), q(1, 3), 3, "inf"), RestrictedWeak),
    ];
    for (p, want) in &cases {
        assert_eq!(verdict(p, t), *want, "point {:?}", p.coords);
    }
    // Maximal operator on the diagonal.
    let m = TheoremId::LinearArStar;
    assert_eq!(verdict(&lin(q(1, 2), q(1, 2), 2, "2"), m), Strong);
    assert_eq!(verdict(&lin(q(3, 4), q(3, 4), 2, "2"), m), RestrictedWeak);
    assert_eq!(verdict(&lin(q(4, 5), q(4, 5), 2, "2"), m), False);
    assert_eq!(verdict(&lin(q(1, 2), q(1, 2), 2, "inf"), m), Open);
    assert!(classify(&lin(q(1, 2), q(1, 4), 2, "2"), m).is_err());
}

#[test]
fn pinned_br_probes() {
    let t = TheoremId::LinearBr;
    let c = |x, y| classify(&lin(x, y, 2, "2"), t).unwrap();
    let inner = c(q(2, 5), q(3, 10));
    assert_eq!(inner.verdict, Verdict::Strong);
    assert!(inner.citations[0].contains("(1)"));
    assert!(c(q(1, 2), q(1, 20)).citations[0].contains("(2)"));
    assert!(c(q(3, 5), q(1, 5)).citations[0].contains("(3)"));
    assert!(c(q(7, 10), q(3, 5)).citations[0].contains("(4)"));
    assert_eq!(c(q(3, 4), q(1, 2)).verdict, Verdict::Open);
    assert_eq!(c(q(7, 10), q(1, 10)).verdict, Verdict::Open);
    assert_eq!(c(q(1, 2), q(3, 4)).verdict, Verdict::False);
    // δ-powers at a vertex shared by parts (2) and (3) agree.
    let at = |x, y| c(x, y).delta_power.unwrap();
    assert!(at(q(2, 5), q(1, 5)).ends_with("= 0"));
}

#[test]
fn pinned_bilinear_probes() {
    use Verdict::*;
    let cases: Vec<(ExponentPoint, TheoremId, Verdict)> = vec![
        (bil(q(3, 4), q(3, 4), q(3, 2), 2), TheoremId::FullMaximal, RestrictedWeak),
        (bil(q(1, 1), q(1, 2), q(3, 2), 2), TheoremId::FullMaximal, Open),
        (bil(q(1, 2), q(1, 2), q(1, 1), 2), TheoremId::FullMaximal, Strong),
        (bil(q(1, 1), q(0, 1), q(1, 1), 2), TheoremId::FullMaximal, False),
        (bil(q(1, 1), q(1, 1), q(2, 1), 2), TheoremId::FullMaximal, False),
        (bil(q(1, 2), q(1, 4), q(3, 4), 1), TheoremId::FullMaximal, RestrictedWeak),
        (bil(q(1, 4), q(1, 4), q(1, 2), 1), TheoremId::FullMaximal, Strong),
        (bil(q(3, 4), q(0, 1), q(3, 4), 1), TheoremId::FullMaximal, False),
        (bil(q(5, 6), q(5, 6), q(5, 3), 3), TheoremId::FullMaximal, RestrictedWeak),
        (bil(q(3, 4), q(3, 4), q(1, 2), 3), TheoremId::JeongLee, Strong),
        (bil(q(4, 5), q(4, 5), q(1, 4), 3), TheoremId::JeongLee, Open),
        (bil(q(4, 5), q(4, 5), q(1, 4), 3), TheoremId::SlicedImproving, Strong),
        (bil(q(4, 5), q(4, 5), q(1, 5), 3), TheoremId::SlicedImproving, Open),
        (bil(q(1, 2), q(1, 2), q(1, 2), 3), TheoremId::SlicedImproving, Strong),
        (bil(q(9, 10), q(9, 10), q(1, 1), 3), TheoremId::SlicedImproving, False),
        (bil(q(1, 4), q(1, 4), q(3, 4), 3), TheoremId::SlicedImproving, False),
        (bil(q(1, 4), q(1, 4), q(1, 4), 2), TheoremId::Gikl, Strong),
        (bil(q(1, 2), q(1, 2), q(1, 2), 2), TheoremId::Gikl, Strong),
        (bil(q(1, 2), q(1, 2), q(1, 2), 2), TheoremId::GiklPi, False),
        (bil(q(1, 2), q(1, 2), q(7, 4), 2), TheoremId::GiklPi, Open),
        (bil(q(1, 1), q(1, 1), q(3, 2), 2), TheoremId::GiklPi, False),
        (bil(q(1, 4), q(1, 8), q(3, 8), 2), TheoremId::RotatedMaximal, Strong),
        (bil(q(1, 4), q(1, 3), q(7, 12), 2), TheoremId::RotatedMaximal, Open),
        (bil(q(1, 2), q(1, 3), q(5, 6), 2), TheoremId::RotatedMaximal, False),
        (bil(q(1, 2), q(1, 3), q(5, 6), 2), TheoremId::Linearized, RestrictedWeak),
        (bil(q(1, 3), q(1, 3), q(2, 3), 2), TheoremId::Linearized, Strong),
        (bil(q(1, 2), q(1, 2), q(1, 1), 2), TheoremId::ProductNecessary, Open),
        (bil(q(1, 1), q(1, 1), q(1, 2), 2), TheoremId::ProductNecessary, False),
        (bil(q(1, 1), q(0, 1), q(1, 4), 3), TheoremId::ImprovingNecessary, False),
    ];
    for (p, t, want) in &cases {
        assert_eq!(verdict(p, *t), *want, "{t} at {:?} (d={})", p.coords, p.d);
    }
}

/// A point strictly inside the triangle F B' C is open for the improved
/// theorem and also open (not false) for the older range.
#[test]
fn fbc_triangle_is_open() {
    for d in [2u32, 3, 4] {
        let get = |n: &str| vertex(TheoremId::SlicedImproving, d, None, n).unwrap();
        let (f, b, c) = (get("F"), get("B'"), get("C"));
        let third = q(1, 3);
        let x = (f[0] + b[0] + c[0]) * third;
        let z = (f[1] + b[1] + c[1]) * third;
        let p = bil(x, x, z, d);
        assert_eq!(verdict(&p, TheoremId::SlicedImproving), Verdict::Open, "d={d}");
        assert_eq!(verdict(&p, TheoremId::JeongLee), Verdict::Open, "d={d}");
        // Centroid of O, E, F, C, D, A is proved by the improved theorem.
        let pts = ["A", "E", "F", "C", "D", "O"].map(get);
        let cx = pts.iter().map(|p| p[0]).sum::<Q>() / Q::from_integer(6);
        let cz = pts.iter().map(|p| p[1]).sum::<Q>() / Q::from_integer(6);
        assert_eq!(verdict(&bil(cx, cx, cz, d), TheoremId::SlicedImproving), Verdict::Strong, "d={d}");
    }
}

#[test]
fn multilinear_probes() {
    use Verdict::*;
    let m = |xs: Vec<Q>| ExponentPoint::new(xs, 1, None);
    assert_eq!(verdict(&m(vec![q(1, 2), q(1, 1)]), TheoremId::DosidisRamos), False);
    assert_eq!(verdict(&m(vec![q(1, 3), q(1, 3), q(1, 3)]), TheoremId::DosidisRamos), Strong);
    assert_eq!(verdict(&m(vec![q(1, 1), q(0, 1), q(0, 1)]), TheoremId::DosidisRamos), Weak);
    assert_eq!(verdict(&m(vec![q(1, 4), q(1, 2), q(1, 1)]), TheoremId::Multilinear), RestrictedWeak);
    assert_eq!(verdict(&m(vec![q(1, 4), q(1, 2), q(1, 1)]), TheoremId::DosidisRamos), False);
    assert_eq!(verdict(&m(vec![q(1, 2), q(1, 2)]), TheoremId::Multilinear), RestrictedWeak);
}

#[test]
fn representation_invariance() {
    let a = lin(Q::new(6, 8), Q::new(2, 8), 2, "2");
    let b = lin(q(3, 4), q(1, 4), 2, "2");
    assert_eq!(classify(&a, TheoremId::LinearAr).unwrap(), classify(&b, TheoremId::LinearAr).unwrap());
    let from_p = ExponentPoint::from_exponents(&["4/3".parse().unwrap(), "4".parse().unwrap()], 2, r_of("2"));
    assert_eq!(from_p, b);
}

#[test]
fn json_verdict_shape() {
    let v = classify(&lin(q(3, 4), q(1, 4), 2, "2"), TheoremId::LinearAr).unwrap();
    let j: serde_json::Value = serde_json::to_value(&v).unwrap();
    assert_eq!(j["theorem"], "linearAr");
    assert_eq!(j["verdict"], "restricted-weak");
    assert_eq!(j["point"][0], "3/4");
    assert!(j["citations"].as_array().unwrap().len() >= 1);
}

#[test]
fn errors() {
    assert!(classify(&lin(q(3, 2), q(0, 1), 2, "2"), TheoremId::LinearAr).is_err());
    assert!(classify(&ExponentPoint::new(vec![q(1, 2), q(1, 4)], 2, None), TheoremId::LinearAr).is_err());
    assert!(classify(&bil(q(1, 2), q(1, 2), q(1, 4), 2), TheoremId::FullMaximal).is_err());
    assert!(vertex_table(TheoremId::Linearized, 2, None).is_err());
}

#[test]
fn necessary_gap_examples() {
    let c = necessary_gap(&bil(q(3, 4), q(3, 4), q(3, 2), 2), TheoremId::ImprovingNecessary).unwrap();
    assert_eq!(c.len(), 4);
    assert!(c.iter().all(|c| c.satisfied));
    let c = necessary_gap(&bil(q(1, 2), q(1, 2), q(1, 1), 2), TheoremId::ProductNecessary).unwrap();
    assert_eq!((c[0].lhs.as_str(), c[0].rhs.as_str()), ("3", "4"));
    let s = product_split_check(q(1, 2), q(1, 2), q(1, 1), 1, 1);
    assert!(s.satisfied);
    // Split with d1 = 1 reduces to the (d+1) form with d = d2 + 1... scaled by 1/2.
    for d2 in 1..4 {
        let (x1, x2, z) = (q(2, 3), q(1, 2), q(3, 4));
        let a = product_split_check(x1, x2, z, 1, d2);
        let d = Q::from_integer(d2 as i64 + 1);
        let one = Q::from_integer(1);
        assert_eq!(a.satisfied, (d + one) * (x1 + x2) <= d - one + (d + one) * z);
    }
}
