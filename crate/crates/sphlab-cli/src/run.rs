//! The five operations.

use crate::config::{AverageOperator, AverageParams, ExperimentConfig, FieldSpec, Operation, RegionParams, SweepParams, TableParams, VerifyParams};
use crate::output::Sink;
use crate::Failure;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use sphlab::families::{make_product_type, ProductTypeSpec, RowId};
use sphlab::funcspace::{Exponent, Field, Gaussian, RadialProfile, Q};
use sphlab::interp::{reproduce_table, table_csv, TableCheck};
use sphlab::operators::{ar_value, bilinear_average_sliced, linearized_bilinear, maximal_average, rotated_bilinear, spherical_average, RExponent, TimeGrid};
use sphlab::quad::{sphere_rule, Measure, RotationAngle};
use sphlab::regions::{classify, necessary_gap, vertex, vertex_table, ExponentPoint, NecessaryCheck, TheoremId, VerdictRecord};
use sphlab::suites::{run_suite, SuiteReport, SUITES};
use sphlab::sweep::*;

pub fn dispatch(op: Operation, cfg: &ExperimentConfig) -> Result<(), Failure> {
    match op {
        Operation::Verify => verify(cfg, cfg.verify.as_ref().expect("verify table")),
        Operation::Sweep => sweep(cfg, cfg.sweep.as_ref().expect("sweep table")),
        Operation::Region => region(cfg, cfg.region.as_ref().expect("region table")),
        Operation::Table => table(cfg, cfg.table.as_ref().expect("table table")),
        Operation::Average => average(cfg, cfg.average.as_ref().expect("average table")),
    }
}

fn judged(v: SweepVerdict) -> Result<(), Failure> {
    match v {
        SweepVerdict::Pass | SweepVerdict::NotJudged => Ok(()),
        SweepVerdict::Fail | SweepVerdict::Inconclusive => Err(Failure::Checks),
    }
}

fn combine(vs: impl IntoIterator<Item = SweepVerdict>) -> SweepVerdict {
    let vs: Vec<SweepVerdict> = vs.into_iter().collect();
    if vs.contains(&SweepVerdict::Fail) {
        SweepVerdict::Fail
    } else if vs.contains(&SweepVerdict::Inconclusive) {
        SweepVerdict::Inconclusive
    } else if vs.iter().all(|v| *v == SweepVerdict::NotJudged) {
        SweepVerdict::NotJudged
    } else {
        SweepVerdict::Pass
    }
}

/// File-name-safe form of an exponent.
fn tag(e: Exponent) -> String {
    e.to_string().replace('/', "-")
}

#[derive(Serialize)]
struct VerifyResult {
    passed: bool,
    suites: Vec<SuiteReport>,
}

fn verify(cfg: &ExperimentConfig, p: &VerifyParams) -> Result<(), Failure> {
    let names: Vec<&str> = if p.suites.iter().any(|s| s == "all") { SUITES.to_vec() } else { p.suites.iter().map(String::as_str).collect() };
    if names.is_empty() {
        return Err(Failure::Usage("no suites given".into()));
    }
    if let Some(bad) = names.iter().find(|n| !SUITES.contains(n)) {
        return Err(Failure::Usage(format!("unknown suite {bad:?}; known suites: {}", SUITES.join(", "))));
    }
    let seed = cfg.seed.unwrap_or(0);
    let sink = Sink::new(cfg, "verify", None);
    let mut reports = Vec::new();
    for n in names {
        reports.push(run_suite(n, seed)?);
    }
    let passed = reports.iter().all(|r| r.passed);
    for r in &reports {
        for c in r.checks.iter().filter(|c| !c.passed) {
            eprintln!("FAIL {}/{}: value {:e}, bound {:e} {}", r.suite, c.name, c.value, c.bound, c.detail);
        }
    }
    sink.json(&VerifyResult { passed, suites: reports })?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

#[derive(Serialize)]
struct SweepSet {
    verdict: SweepVerdict,
    sweeps: Vec<SweepResult>,
}

#[derive(Serialize)]
struct RowResult {
    verdict: SweepVerdict,
    report: NecessaryReport,
    fits: RowFits,
}

fn tune(plan: &mut SweepPlan, cfg: &ExperimentConfig, tolerance: f64, r2_min: f64) {
    plan.tolerance = tolerance;
    plan.r2_min = r2_min;
    if let Some(res) = cfg.resolution {
        plan.resolution = res;
    }
}

fn run_set(sink: &Sink, runs: Vec<(String, SweepPlan)>, adjust: impl Fn(&mut SweepResult)) -> Result<(), Failure> {
    let mut sweeps = Vec::new();
    for (suffix, plan) in runs {
        let mut res = run_sweep(&plan)?;
        adjust(&mut res);
        sink.csv(&suffix, &sweep_csv(&res)?)?;
        sweeps.push(res);
    }
    let verdict = combine(sweeps.iter().map(|s| s.verdict));
    sink.json(&SweepSet { verdict, sweeps })?;
    judged(verdict)
}

fn sweep(cfg: &ExperimentConfig, p: &SweepParams) -> Result<(), Failure> {
    let sink = Sink::new(cfg, "sweep", Some("out"));
    match p {
        SweepParams::Row { row, d, r, p, q, delta, tolerance, r2_min } => {
            let ladder = delta_ladder(delta.0, delta.1);
            let mut plans = row_plans(row.0, *d, r.0, p.0, &ladder)?;
            let mut res = Vec::new();
            for plan in plans.iter_mut() {
                tune(plan, cfg, *tolerance, *r2_min);
                res.push(run_sweep(plan)?);
            }
            let [alpha, beta, gamma]: [SweepResult; 3] = res.try_into().expect("three sweeps");
            let fits = RowFits { row: row.0, d: *d as u32, r: r.0, p: p.0, alpha, beta, gamma };
            for (s, f) in [("alpha", &fits.alpha), ("beta", &fits.beta), ("gamma", &fits.gamma)] {
                sink.csv(s, &sweep_csv(f)?)?;
            }
            let report = necessary_condition_report(&fits, q.0)?;
            let verdict = report.verdict;
            sink.json(&RowResult { verdict, report, fits })?;
            judged(verdict)
        }
        SweepParams::Rows { d, r, delta, tolerance, r2_min } => {
            let ladder = delta_ladder(delta.0, delta.1);
            let mut runs = Vec::new();
            for row in RowId::ALL {
                for r in r {
                    let [_, _, mut g] = row_plans(row, *d, r.0, Exponent::int(2), &ladder)?;
                    tune(&mut g, cfg, *tolerance, *r2_min);
                    runs.push((format!("row{}_r{}", row.index(), tag(r.0)), g));
                }
            }
            run_set(&sink, runs, |_| {})
        }
        SweepParams::DyadicLorentz { d, r, s, a, n, tolerance, r2_min } => {
            let ladder: Vec<f64> = n.iter().map(|&v| f64::from(v)).collect();
            let runs = s
                .iter()
                .map(|s| {
                    let mut plan = SweepPlan::new(format!("dyadic_lorentz_s{}", s.0), Observable::DyadicLorentz { d: *d, r: r.0, s: s.0, a: *a }, ladder.clone(), s.0.recip());
                    tune(&mut plan, cfg, *tolerance, *r2_min);
                    (format!("s{}", tag(s.0)), plan)
                })
                .collect();
            run_set(&sink, runs, |_| {})
        }
        SweepParams::DyadicAr { d, r, a, n, tolerance, r2_min } => {
            let ladder: Vec<f64> = n.iter().map(|&v| f64::from(v)).collect();
            let runs = r
                .iter()
                .map(|r| {
                    let mut plan = SweepPlan::new(format!("dyadic_ar_r{}", r.0), Observable::DyadicAr { d: *d, r: r.0, a: *a }, ladder.clone(), Q::from_integer(1));
                    tune(&mut plan, cfg, *tolerance, *r2_min);
                    (format!("r{}", tag(r.0)), plan)
                })
                .collect();
            // Linear growth in N is claimed only at r = 1 and r = inf.
            run_set(&sink, runs, |res| {
                let endpoint = res.name.ends_with("_r1") || res.name.ends_with("_rinf");
                if !endpoint {
                    res.verdict = SweepVerdict::NotJudged;
                    res.detail = format!("growth like N^(1/r) expected for 1 < r < inf; {}", res.detail);
                }
            })
        }
        SweepParams::Product { alpha, beta, p1, p2, k, tolerance, r2_min } => {
            let spec = ProductTypeSpec { alpha: [alpha[0].0, alpha[1].0], beta: [beta[0].0, beta[1].0], p1: p1.0, p2: p2.0, k_range: *k };
            let predicted = make_product_type(spec.clone())?.predicted_exponent();
            let ladder: Vec<f64> = (k.0..=k.1).map(f64::from).collect();
            let mut plan = SweepPlan::new("product", Observable::ProductBk { spec }, ladder, predicted);
            tune(&mut plan, cfg, *tolerance, *r2_min);
            run_set(&sink, vec![(String::new(), plan)], |_| {})
        }
        SweepParams::WeakType { p1, p2, p, theta, delta, samples, columns, tolerance, r2_min } => {
            let mut plan = WeakTypePlan::new(p1.0, p2.0, p.0);
            plan.ladder = delta_ladder(delta.0, delta.1);
            plan.theta = *theta;
            plan.samples = *samples;
            plan.columns = *columns;
            plan.tolerance = *tolerance;
            plan.r2_min = *r2_min;
            plan.seed = cfg.seed.unwrap_or(0);
            if let Some(res) = cfg.resolution {
                plan.resolution = res;
            }
            let rep = weak_type_ratio_sweep(&plan)?;
            sink.csv("", &weak_type_csv(&rep)?)?;
            sink.json(&rep)?;
            judged(rep.verdict)
        }
    }
}

#[derive(Serialize)]
struct Classified {
    record: VerdictRecord,
    necessary: Option<Vec<NecessaryCheck>>,
}

#[derive(Serialize)]
struct NamedVertex {
    theorem: String,
    d: u32,
    r: Option<String>,
    vertex: String,
    coords: Vec<String>,
}

fn region(cfg: &ExperimentConfig, p: &RegionParams) -> Result<(), Failure> {
    let thm: TheoremId = p.thm.parse()?;
    let r = p.r.map(|e| e.0);
    let sink = Sink::new(cfg, "region", None);
    let named = |name: &str, coords: &[Q]| NamedVertex {
        theorem: thm.name().to_string(),
        d: p.d,
        r: r.map(|r| r.to_string()),
        vertex: name.to_string(),
        coords: coords.iter().map(Ratio::to_string).collect(),
    };
    if let Some(v) = &p.vertex {
        if p.exponents.is_some() || p.point.is_some() {
            return Err(Failure::Usage("--vertex does not take a point".into()));
        }
        return if v == "all" {
            let all: Vec<NamedVertex> = vertex_table(thm, p.d, r)?.iter().map(|(n, c)| named(n, c)).collect();
            sink.json(&all)
        } else {
            sink.json(&named(v, &vertex(thm, p.d, r, v)?))
        };
    }
    let pt = match (&p.exponents, &p.point) {
        (Some(e), None) => ExponentPoint::from_exponents(&e.iter().map(|e| e.0).collect::<Vec<_>>(), p.d, r),
        (None, Some(c)) => ExponentPoint::new(c.iter().map(|c| c.0).collect(), p.d, r),
        _ => return Err(Failure::Usage("give exactly one of exponents (--p/--q, --p1/--p2/--p), --point or --vertex".into())),
    };
    let record = classify(&pt, thm)?;
    let necessary = necessary_gap(&pt, thm).ok();
    sink.json(&Classified { record, necessary })
}

#[derive(Serialize)]
struct TableResult {
    passed: bool,
    checks: Vec<TableCheck>,
}

fn table(cfg: &ExperimentConfig, p: &TableParams) -> Result<(), Failure> {
    let sink = Sink::new(cfg, "table", Some("out"));
    let mut checks = Vec::new();
    for &d in &p.d {
        for r in &p.r {
            checks.extend(reproduce_table(d, r.0)?);
        }
    }
    let passed = checks.iter().all(|c| c.degenerate || c.matches);
    for c in checks.iter().filter(|c| !c.degenerate && !c.matches) {
        eprintln!("FAIL row {} at d={} r={}: target {}", c.row, c.d, c.r, c.target);
    }
    sink.csv("", &table_csv(&checks)?)?;
    sink.json(&TableResult { passed, checks })?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn field(spec: &FieldSpec) -> Result<Box<dyn Field>, Failure> {
    Ok(match spec {
        FieldSpec::Gaussian { center, a, amp } => Box::new(Gaussian { center: center.clone(), a: *a, amp: *amp }),
        FieldSpec::Ball { d, radius } => Box::new(RadialProfile::ball(*d, *radius)?),
        FieldSpec::Annulus { d, inner, outer } => Box::new(RadialProfile::annulus(*d, *inner, *outer)?),
    })
}

#[derive(Serialize)]
struct AverageRow {
    x: Vec<f64>,
    t: f64,
    value: f64,
}

fn average(cfg: &ExperimentConfig, p: &AverageParams) -> Result<(), Failure> {
    use AverageOperator::*;
    let sink = Sink::new(cfg, "average", Some("out"));
    let f = field(&p.f)?;
    let dim = f.dim();
    let bilinear = matches!(p.operator, Bilinear | Rotated | Linearized);
    let g = match (&p.g, bilinear) {
        (Some(g), true) => Some(field(g)?),
        (None, true) => return Err(Failure::Usage("bilinear operators need a second field `g`".into())),
        (Some(_), false) => return Err(Failure::Usage("`g` is only used by bilinear operators".into())),
        (None, false) => None,
    };
    if g.as_ref().is_some_and(|g| g.dim() != dim) {
        return Err(Failure::Usage("`f` and `g` have different dimensions".into()));
    }
    if p.points.is_empty() || p.points.iter().any(|x| x.len() != dim) {
        return Err(Failure::Usage(format!("points must be non-empty and of length {dim}")));
    }
    let n = cfg.resolution.unwrap_or(64);
    let raw = sphere_rule(dim, n, Measure::Raw)?;
    let normalized = sphere_rule(dim, n, Measure::Normalized)?;
    let r = match (p.operator, p.r) {
        (Ar, Some(r)) => Some(RExponent::new(r.0)?),
        (Ar, None) => return Err(Failure::Usage("operator `ar` needs `r`".into())),
        _ => None,
    };
    let theta = match (p.operator, p.theta) {
        (Rotated | Linearized, Some(t)) => Some(RotationAngle::new(t)?),
        (Rotated | Linearized, None) => return Err(Failure::Usage("rotated operators need `theta`".into())),
        _ => None,
    };
    // `t` is ignored where the operator fixes or maximizes the radius.
    let times: Vec<f64> = match p.operator {
        Spherical | Bilinear | Rotated => p.t.clone(),
        Maximal | Ar | Linearized => vec![f64::NAN],
    };
    let grid = TimeGrid::local(n.max(4))?;
    let jobs: Vec<(Vec<f64>, f64)> = p.points.iter().flat_map(|x| times.iter().map(move |&t| (x.clone(), t))).collect();
    let values: Vec<sphlab::Result<f64>> = jobs
        .par_iter()
        .map(|(x, t)| {
            let f = f.as_ref();
            match p.operator {
                Spherical => spherical_average(f, x, *t, &normalized),
                Maximal => maximal_average(f, x, &grid, &normalized),
                Ar => ar_value(f, x, r.expect("checked"), &normalized, (n / 4).max(4)),
                Bilinear => bilinear_average_sliced(f, g.as_deref().expect("checked"), x, *t, &raw, n, Measure::Normalized),
                Rotated => rotated_bilinear(f, g.as_deref().expect("checked"), x, *t, theta.expect("checked"), &normalized),
                Linearized => linearized_bilinear(f, g.as_deref().expect("checked"), x, theta.expect("checked"), &normalized),
            }
        })
        .collect();
    let mut rows = Vec::with_capacity(jobs.len());
    for ((x, t), v) in jobs.into_iter().zip(values) {
        rows.push(AverageRow { x, t, value: v? });
    }
    let mut body = (0..dim).map(|i| format!("x{i}")).collect::<Vec<_>>().join(",") + ",t,value\n";
    for row in &rows {
        let t = if row.t.is_nan() { String::new() } else { row.t.to_string() };
        body += &format!("{},{t},{:.15e}\n", row.x.iter().map(f64::to_string).collect::<Vec<_>>().join(","), row.value);
    }
    sink.csv("", &body)?;
    sink.json(&rows)
}
