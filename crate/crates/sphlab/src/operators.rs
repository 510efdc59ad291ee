//! Spherical, bilinear spherical and multilinear averages and their maximal
//! and `L^r`-in-scale variants.

use crate::funcspace::{quadrature_average, Exponent, Field, GridFunction, RadialProfile};
use crate::quad::{gauss_legendre, rotate_by, slicing_rule, sphere_area, sphere_rule, Measure, RotationAngle, SphereRule};
use crate::{domain, pairwise_sum, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Local (`[1,2]`) or global (dyadic) sampling of the scale parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub per_octave: usize,
    /// `None` for the local grid on `[1, 2]`.
    pub k_range: Option<(i32, i32)>,
}

impl TimeGrid {
    pub fn local(per_octave: usize) -> Result<Self> {
        Self::check(per_octave)?;
        Ok(TimeGrid { per_octave, k_range: None })
    }
    pub fn global(per_octave: usize, k_lo: i32, k_hi: i32) -> Result<Self> {
        Self::check(per_octave)?;
        if k_hi < k_lo {
            return domain("empty k range");
        }
        Ok(TimeGrid { per_octave, k_range: Some((k_lo, k_hi)) })
    }
    fn check(k: usize) -> Result<()> {
        if k < 8 {
            return domain(format!("need at least 8 samples per octave, got {k}"));
        }
        Ok(())
    }
    /// Geometric samples; the local grid includes both endpoints.
    pub fn times(&self) -> Vec<f64> {
        let k = self.per_octave as f64;
        match self.k_range {
            None => (0..=self.per_octave).map(|i| (i as f64 / k).exp2()).collect(),
            Some((a, b)) => {
                let n = (b - a + 1) as usize * self.per_octave;
                (0..=n).map(|i| (a as f64 + i as f64 / k).exp2()).collect()
            }
        }
    }
    pub fn max_time(&self) -> f64 {
        match self.k_range {
            None => 2.0,
            Some((_, b)) => (b as f64 + 1.0).exp2(),
        }
    }
}

/// `r` in `[1, inf]` with its conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RExponent {
    pub r: Exponent,
}

impl RExponent {
    pub fn new(r: Exponent) -> Result<Self> {
        if let Exponent::Finite(q) = r {
            if q < crate::funcspace::Q::from_integer(1) {
                return domain("r must be at least 1");
            }
        }
        Ok(RExponent { r })
    }
    pub fn conj(self) -> RExponent {
        RExponent { r: self.r.conjugate() }
    }
    pub fn value(self) -> f64 {
        self.r.to_f64()
    }
}

fn check_point(f: &dyn Field, x: &[f64]) -> Result<()> {
    if x.len() != f.dim() {
        return domain(format!("point has {} coordinates, function lives in R^{}", x.len(), f.dim()));
    }
    Ok(())
}

fn mode_scale(mode: Measure, d: usize) -> f64 {
    match mode {
        Measure::Raw => sphere_area(d),
        Measure::Normalized => 1.0,
    }
}

/// `A_t f(x) = int f(x - t y) dσ(y)` in the measure of `rule`.
pub fn spherical_average(f: &dyn Field, x: &[f64], t: f64, rule: &SphereRule) -> Result<f64> {
    check_point(f, x)?;
    if !(t > 0.0) {
        return domain(format!("radius must be positive, got {t}"));
    }
    if rule.dim() != f.dim() {
        return domain("sphere rule dimension does not match the function");
    }
    f.check_radius(t)?;
    Ok(unchecked_average(f, x, t, rule))
}

fn unchecked_average(f: &dyn Field, x: &[f64], t: f64, rule: &SphereRule) -> f64 {
    match f.exact_sphere_average(x, t) {
        Some(v) => v * mode_scale(rule.mode(), f.dim()),
        None => quadrature_average(f, x, t, rule),
    }
}

/// `max |A_t f(x)|` over the grid: a lower bound for `A_* f(x)` / `A_loc f(x)`.
pub fn maximal_average(f: &dyn Field, x: &[f64], grid: &TimeGrid, rule: &SphereRule) -> Result<f64> {
    check_point(f, x)?;
    f.check_radius(grid.max_time())?;
    Ok(grid
        .times()
        .iter()
        .map(|&t| unchecked_average(f, x, t, rule).abs())
        .fold(0.0, f64::max))
}

const PIECE_ORDER: usize = 8;

fn reference_nodes() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| crate::quad::sine_gauss(PIECE_ORDER, -1.0, 1.0))
}

/// Nodes of the composite rule on `[a, b]`: `k` equal panels, further cut at
/// `breaks`, each piece with a sine-clustered Gauss rule.
pub fn panel_nodes(a: f64, b: f64, k: usize, breaks: &[f64]) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = (0..=k).map(|i| a + (b - a) * i as f64 / k as f64).collect();
    cuts.extend(breaks.iter().copied().filter(|t| *t > a && *t < b));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut out = Vec::with_capacity(cuts.len() * PIECE_ORDER);
    for w in cuts.windows(2) {
        let (c, h) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
        if h <= 0.0 {
            continue;
        }
        out.extend(reference_nodes().iter().map(|&(u, wt)| (c + h * u, h * wt)));
    }
    out
}

/// Scale-`lam` version of `𝔄^r`: `(int_1^2 |A_{lam t} f(x)|^r t^{d-1} dt)^{1/r}`.
fn ar_scaled(f: &dyn Field, x: &[f64], r: RExponent, lam: f64, rule: &SphereRule, k: usize) -> f64 {
    let d = f.dim();
    let scale = mode_scale(rule.mode(), d);
    // Radial step functions are integrated in the offset variable tau = s - |x|
    // so that shells much thinner than |x| * 1e-16 are still resolved.
    if let (Some(rad), true) = (f.as_radial(), d >= 2) {
        return ar_radial(rad, x, r, lam, scale, k);
    }
    let breaks = f.t_breaks(x, lam, 2.0 * lam);
    let nodes = panel_nodes(lam, 2.0 * lam, k, &breaks);
    let weight = |s: f64| (s / lam).powi(d as i32 - 1) / lam;
    match r.r {
        Exponent::Infinite => nodes
            .iter()
            .map(|&(s, _)| unchecked_average(f, x, s, rule).abs())
            .fold(0.0, f64::max),
        _ => {
            let rv = r.value();
            let terms: Vec<f64> = nodes
                .iter()
                .map(|&(s, w)| w * weight(s) * unchecked_average(f, x, s, rule).abs().powf(rv))
                .collect();
            pairwise_sum(&terms).powf(1.0 / rv)
        }
    }
}

fn ar_radial(f: &RadialProfile, x: &[f64], r: RExponent, lam: f64, scale: f64, k: usize) -> f64 {
    let d = f.dimension();
    let rx = x.iter().map(|c| c * c).sum::<f64>().sqrt();
    let (a, b) = (lam - rx, 2.0 * lam - rx);
    let mut breaks = Vec::new();
    for (rho, _) in f.ball_decomposition() {
        breaks.extend([rho, -rho, rho - 2.0 * rx]);
    }
    let nodes = panel_nodes(a, b, k, &breaks);
    let val = |tau: f64| scale * f.sphere_average_offset(rx, tau).abs();
    match r.r {
        Exponent::Infinite => {
            let mut best = nodes.iter().map(|&(tau, _)| val(tau)).fold(0.0, f64::max);
            // Peaks of thin-shell averages sit at tau = 0.
            if a < 0.0 && b > 0.0 {
                best = best.max(val(0.0));
            }
            best
        }
        _ => {
            let rv = r.value();
            let terms: Vec<f64> = nodes
                .iter()
                .map(|&(tau, w)| w * ((rx + tau) / lam).powi(d as i32 - 1) / lam * val(tau).powf(rv))
                .collect();
            pairwise_sum(&terms).powf(1.0 / rv)
        }
    }
}

/// `𝔄^r f(x) = ||A_t f(x)||_{L^r([1,2], t^{d-1} dt)}` with `k` panels.
pub fn ar_value(f: &dyn Field, x: &[f64], r: RExponent, rule: &SphereRule, k: usize) -> Result<f64> {
    check_point(f, x)?;
    f.check_radius(2.0)?;
    Ok(ar_scaled(f, x, r, 1.0, rule, k))
}

/// [`ar_value`] without the support test, for functions known to be
/// negligible outside the box (band-limited pieces on a periodic grid).
pub fn ar_value_unchecked(f: &dyn Field, x: &[f64], r: RExponent, rule: &SphereRule, k: usize) -> Result<f64> {
    check_point(f, x)?;
    Ok(ar_scaled(f, x, r, 1.0, rule, k))
}

/// `𝔄^r_* f(x)`: maximum over `k in k_range` of the dyadically rescaled
/// `𝔄^r`, together with its `k -> -inf` limit `|f(x)| mu^{1/r}`
/// (`mu = (2^d - 1)/d`), which is a value of the supremum for continuous `f`.
pub fn ar_star(f: &dyn Field, x: &[f64], r: RExponent, k_range: (i32, i32), rule: &SphereRule, k: usize) -> Result<f64> {
    check_point(f, x)?;
    let (lo, hi) = k_range;
    if hi < lo {
        return domain("empty k range");
    }
    f.check_radius((hi as f64 + 1.0).exp2())?;
    let d = f.dim();
    let mu = ((1u64 << d) as f64 - 1.0) / d as f64;
    let local = f.eval(x).abs() * mode_scale(rule.mode(), d);
    let mut best = match r.r {
        Exponent::Infinite => local,
        _ => local * mu.powf(1.0 / r.value()),
    };
    for kk in lo..=hi {
        best = best.max(ar_scaled(f, x, r, (kk as f64).exp2(), rule, k));
    }
    Ok(best)
}

/// `𝔅^r_δ f(x) = sup_{1<t<2} ((1/δ) int_{1-δ}^{1+δ} |A_{ts} f(x)|^r s^{d-1} ds)^{1/r}`
/// over the local grid.
pub fn br_delta(f: &dyn Field, x: &[f64], r: RExponent, delta: f64, grid: &TimeGrid, rule: &SphereRule, k: usize) -> Result<f64> {
    check_point(f, x)?;
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("delta must lie in (0,1), got {delta}"));
    }
    f.check_radius(2.0 * (1.0 + delta))?;
    let d = f.dim();
    let mut best = 0.0f64;
    for &t in &grid.times() {
        let (a, b) = (t * (1.0 - delta), t * (1.0 + delta));
        let nodes = panel_nodes(a, b, k, &f.t_breaks(x, a, b));
        let v = match r.r {
            Exponent::Infinite => nodes.iter().map(|&(u, _)| unchecked_average(f, x, u, rule).abs()).fold(0.0, f64::max),
            _ => {
                let rv = r.value();
                let terms: Vec<f64> = nodes
                    .iter()
                    .map(|&(u, w)| w / t * (u / t).powi(d as i32 - 1) * unchecked_average(f, x, u, rule).abs().powf(rv))
                    .collect();
                (pairwise_sum(&terms) / delta).powf(1.0 / rv)
            }
        };
        best = best.max(v);
    }
    Ok(best)
}

/// Rule on `S^{2d-1}` for the direct bilinear average.
pub fn bilinear_rule(d: usize, n: usize, mode: Measure) -> Result<SphereRule> {
    if !(1..=3).contains(&d) {
        return domain("bilinear averages are implemented for d in 1..=3");
    }
    crate::quad::sphere_rule_any(2 * d, n, mode)
}

/// `int_{S^{2d-1}} f(x - t y_1) g(x - t y_2) dσ(y_1, y_2)` by quadrature on
/// `rule` (which lives in `R^{2d}`). For `d = 1` the circle is split into
/// eight arcs of length `pi/4`, each integrated by Gauss–Legendre in the
/// angle, with `rule.len()` nodes in total.
pub fn bilinear_average_direct(f: &dyn Field, g: &dyn Field, x: &[f64], t: f64, rule: &SphereRule) -> Result<f64> {
    check_point(f, x)?;
    check_point(g, x)?;
    let d = f.dim();
    if rule.dim() != 2 * d {
        return domain("direct bilinear average needs a rule on S^{2d-1}");
    }
    if !(t > 0.0) {
        return domain("radius must be positive");
    }
    f.check_radius(t)?;
    g.check_radius(t)?;
    if d == 1 {
        let per_arc = (rule.len() / 8).max(4);
        let arc = gauss_legendre(per_arc, 0.0, PI / 4.0);
        let mut terms = Vec::with_capacity(8 * per_arc);
        for j in 0..8 {
            let off = j as f64 * PI / 4.0;
            for &(phi, w) in &arc {
                let (s, c) = (phi + off).sin_cos();
                terms.push(w * f.eval(&[x[0] - t * c]) * g.eval(&[x[0] - t * s]));
            }
        }
        let norm = match rule.mode() {
            Measure::Raw => 1.0,
            Measure::Normalized => 1.0 / (2.0 * PI),
        };
        return Ok(norm * pairwise_sum(&terms));
    }
    let mut a = [0.0; 3];
    let mut b = [0.0; 3];
    Ok(rule.integrate(|y| {
        for k in 0..d {
            a[k] = x[k] - t * y[k];
            b[k] = x[k] - t * y[d + k];
        }
        f.eval(&a[..d]) * g.eval(&b[..d])
    }))
}

/// Slicing form `int_0^1 A_{ts} f(x) A_{t sqrt(1-s^2)} g(x) s^{d-1}(1-s^2)^{(d-2)/2} ds`
/// with raw `S^{d-1}` averages from `rule`, `k` Gauss nodes in `s = sin(phi)`.
/// Returned in `mode` on `S^{2d-1}`.
pub fn bilinear_average_sliced(f: &dyn Field, g: &dyn Field, x: &[f64], t: f64, rule: &SphereRule, k: usize, mode: Measure) -> Result<f64> {
    check_point(f, x)?;
    check_point(g, x)?;
    let d = f.dim();
    if d < 2 {
        return domain("the slicing form needs d >= 2");
    }
    if rule.dim() != d {
        return domain("slicing needs a rule on S^{d-1}");
    }
    f.check_radius(t)?;
    g.check_radius(t)?;
    let raw = rule.with_mode(Measure::Raw);
    let terms: Vec<f64> = slicing_rule(d, k)
        .iter()
        .map(|&(s, w)| {
            let c = (1.0 - s * s).max(0.0).sqrt();
            w * unchecked_average(f, x, t * s, &raw) * unchecked_average(g, x, t * c, &raw)
        })
        .collect();
    let v = pairwise_sum(&terms);
    Ok(match mode {
        Measure::Raw => v,
        Measure::Normalized => v / sphere_area(2 * d),
    })
}

/// How single-scale bilinear averages are evaluated inside maximal operators.
pub enum BilinearEval<'a> {
    Direct(&'a SphereRule),
    /// Rule on `S^{d-1}`, number of slicing nodes, output measure.
    Sliced(&'a SphereRule, usize, Measure),
}

impl BilinearEval<'_> {
    pub fn eval(&self, f: &dyn Field, g: &dyn Field, x: &[f64], t: f64) -> Result<f64> {
        match self {
            BilinearEval::Direct(rule) => bilinear_average_direct(f, g, x, t, rule),
            BilinearEval::Sliced(rule, k, mode) => bilinear_average_sliced(f, g, x, t, rule, *k, *mode),
        }
    }
}

/// `𝔐(f,g)(x)` / `𝔐_loc(f,g)(x)` over the grid (a lower bound).
pub fn bilinear_maximal(f: &dyn Field, g: &dyn Field, x: &[f64], grid: &TimeGrid, how: &BilinearEval) -> Result<f64> {
    f.check_radius(grid.max_time())?;
    g.check_radius(grid.max_time())?;
    let mut best = 0.0f64;
    for &t in &grid.times() {
        best = best.max(how.eval(f, g, x, t)?.abs());
    }
    Ok(best)
}

/// Constant of the domination inequality `𝔐 <= C 𝔄^r_* f 𝔄^{r'}_* g` from the
/// two geometric series `(1 - 2^{-d/r})^{-1} (1 - 2^{-d/r'})^{-1}`.
pub fn domination_constant(d: usize, r: RExponent) -> f64 {
    let s = |e: Exponent| {
        let inv = e.recip();
        let v = num_traits::ToPrimitive::to_f64(&inv).unwrap();
        1.0 / (1.0 - (-(d as f64) * v).exp2())
    };
    s(r.r) * s(r.conj().r)
}

/// The domination constant with the factor `(1 + 2^{-d})` that appears when
/// the half-window `[t/2, t]` straddles two dyadic blocks.
pub fn domination_constant_with_overlap(d: usize, r: RExponent) -> f64 {
    domination_constant(d, r) * (1.0 + (-(d as f64)).exp2())
}

/// Right side of the Hölder step:
/// `sup_t (int_0^1 |A_{ts} f|^r s^{d-1} ds)^{1/r} (int_0^1 |A_{t sqrt(1-s^2)} g|^{r'} s (1-s^2)^{(d-2)/2} ds)^{1/r'}`
/// with raw averages.
pub fn holder_bridge(f: &dyn Field, g: &dyn Field, x: &[f64], r: RExponent, grid: &TimeGrid, rule: &SphereRule, k: usize) -> Result<f64> {
    let d = f.dim();
    if d < 2 {
        return domain("the Hölder bridge needs d >= 2");
    }
    f.check_radius(grid.max_time())?;
    g.check_radius(grid.max_time())?;
    let raw = rule.with_mode(Measure::Raw);
    let nodes = gauss_legendre(k, 0.0, 0.5 * PI);
    let norm = |vals: &[(f64, f64)], e: RExponent| -> f64 {
        match e.r {
            Exponent::Infinite => vals.iter().map(|v| v.0.abs()).fold(0.0, f64::max),
            _ => {
                let rv = e.value();
                let terms: Vec<f64> = vals.iter().map(|(v, w)| w * v.abs().powf(rv)).collect();
                pairwise_sum(&terms).powf(1.0 / rv)
            }
        }
    };
    let mut best = 0.0f64;
    for &t in &grid.times() {
        let mut fv = Vec::with_capacity(k);
        let mut gv = Vec::with_capacity(k);
        for &(phi, w) in &nodes {
            let (s, c) = phi.sin_cos();
            // ds = cos(phi) dphi.
            fv.push((unchecked_average(f, x, t * s, &raw), w * s.powi(d as i32 - 1) * c));
            gv.push((unchecked_average(g, x, t * c, &raw), w * s * c.powi(d as i32 - 1)));
        }
        best = best.max(norm(&fv, r) * norm(&gv, r.conj()));
    }
    Ok(best)
}

/// `𝒜^θ_t(f,g)(x) = int_{S^1} f(x - t y) g(x - t Θ y) dσ(y)`.
pub fn rotated_bilinear(f: &dyn Field, g: &dyn Field, x: &[f64], t: f64, theta: RotationAngle, rule: &SphereRule) -> Result<f64> {
    if f.dim() != 2 || g.dim() != 2 || x.len() != 2 || rule.dim() != 2 {
        return domain("rotated bilinear averages are planar");
    }
    f.check_radius(t)?;
    g.check_radius(t)?;
    Ok(rotated_unchecked(f, g, [x[0], x[1]], t, theta.theta(), rule))
}

fn rotated_unchecked(f: &dyn Field, g: &dyn Field, x: [f64; 2], t: f64, theta: f64, rule: &SphereRule) -> f64 {
    rule.integrate(|y| {
        let ry = rotate_by([y[0], y[1]], theta);
        f.eval(&[x[0] - t * y[0], x[1] - t * y[1]]) * g.eval(&[x[0] - t * ry[0], x[1] - t * ry[1]])
    })
}

/// `ℳ^θ` / `ℳ^θ_loc` over the grid.
pub fn rotated_maximal(f: &dyn Field, g: &dyn Field, x: &[f64], theta: RotationAngle, grid: &TimeGrid, rule: &SphereRule) -> Result<f64> {
    let mut best = 0.0f64;
    for &t in &grid.times() {
        best = best.max(rotated_bilinear(f, g, x, t, theta, rule)?.abs());
    }
    Ok(best)
}

/// `Ã^θ(f,g)(x) = 𝒜^θ_{|x|}(f,g)(x)`, and `f(0) g(0)` (times the mass) at the origin.
pub fn linearized_bilinear(f: &dyn Field, g: &dyn Field, x: &[f64], theta: RotationAngle, rule: &SphereRule) -> Result<f64> {
    if x.len() != 2 {
        return domain("linearized averages are planar");
    }
    let r = x[0].hypot(x[1]);
    if r == 0.0 {
        return Ok(f.eval(x) * g.eval(x) * rule.mass());
    }
    rotated_bilinear(f, g, x, r, theta, rule)
}

/// Both sides of the polar change-of-variables identity for `Ã^π` with
/// raw circle measure:
/// `<Ã^π(f,g), h> = int_{-1}^{1} int f(2u z) g(2 sqrt(1-u^2) R_{sign pi/2} z) h(R_{acos u} z) dz 2 du / sqrt(1-u^2)`.
/// Returns `(left, right)`; quadrature on the disc of radius `rmax` with `n` nodes per direction.
pub fn duality_sides(f: &dyn Field, g: &dyn Field, h: &dyn Field, sign: f64, rmax: f64, n: usize) -> (f64, f64) {
    let radial = gauss_legendre(n, 0.0, rmax);
    let angles: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
    let dang = 2.0 * PI / n as f64;
    let circle = sphere_rule(2, n, Measure::Raw).unwrap();
    let mut left = Vec::with_capacity(n * n);
    for &(rho, wr) in &radial {
        for &a in &angles {
            let x = [rho * a.cos(), rho * a.sin()];
            let inner = circle.integrate(|y| {
                f.eval(&[x[0] - rho * y[0], x[1] - rho * y[1]]) * g.eval(&[x[0] + rho * y[0], x[1] + rho * y[1]])
            });
            left.push(wr * rho * dang * inner * h.eval(&x));
        }
    }
    // u = cos(alpha), du / sqrt(1-u^2) = d alpha on (0, pi).
    let alphas = gauss_legendre(n, 0.0, PI);
    let mut right = Vec::with_capacity(n * n * n);
    for &(al, wa) in &alphas {
        let (s, u) = al.sin_cos();
        for &(rho, wr) in &radial {
            for &a in &angles {
                let z = [rho * a.cos(), rho * a.sin()];
                let gz = rotate_by(z, sign * 0.5 * PI);
                let hz = rotate_by(z, al);
                right.push(
                    2.0 * wa * wr * rho * dang
                        * f.eval(&[2.0 * u * z[0], 2.0 * u * z[1]])
                        * g.eval(&[2.0 * s * gz[0], 2.0 * s * gz[1]])
                        * h.eval(&hz),
                );
            }
        }
    }
    (pairwise_sum(&left), pairwise_sum(&right))
}

/// `∫_0^1 t^a (1-t)^b dt` with `a = -1/p1 - 1/2`, `b = -1/p2 - 1/2` is finite
/// exactly when both exponents exceed `-1`, i.e. `p1, p2 > 2`.
pub fn beta_bound_finite(p1: Exponent, p2: Exponent) -> bool {
    let half = crate::funcspace::Q::new(1, 2);
    p1.recip() < half && p2.recip() < half
}

/// `∫_eps^{1-eps} t^a (1-t)^b dt`, integrated in `ln t` / `ln(1-t)` so the
/// endpoint singularities are smooth.
pub fn beta_truncated(p1: Exponent, p2: Exponent, eps: f64) -> f64 {
    let a = -p1.recip_f64() - 0.5;
    let b = -p2.recip_f64() - 0.5;
    let half = |a: f64, b: f64| -> f64 {
        // ∫_eps^{1/2} t^a (1-t)^b dt with t = e^v.
        let (lo, hi) = (eps.ln(), 0.5f64.ln());
        let panels = ((hi - lo) / 0.5).ceil().max(1.0) as usize;
        let terms: Vec<f64> = panel_nodes(lo, hi, panels, &[])
            .iter()
            .map(|&(v, w)| {
                let t = v.exp();
                w * t.powf(a + 1.0) * (1.0 - t).powf(b)
            })
            .collect();
        pairwise_sum(&terms)
    };
    half(a, b) + half(b, a)
}

trait RecipF64 {
    fn recip_f64(self) -> f64;
}
impl RecipF64 for Exponent {
    fn recip_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.recip()).unwrap()
    }
}

/// Normalized `S^m(f_1..f_m)(x)` at scale `t` for functions on `R`, by
/// slicing `S^{m-1}` into the ball `B^{m-2}` times a circle:
/// `dσ = dỹ dω` for `y = (ỹ, sqrt(1-|ỹ|^2) ω)`.
pub fn multilinear_average(fs: &[&dyn Field], x: f64, t: f64, k: usize) -> Result<f64> {
    let m = fs.len();
    if !(2..=4).contains(&m) {
        return domain(format!("multilinear averages are implemented for m in 2..=4, got {m}"));
    }
    if fs.iter().any(|f| f.dim() != 1) {
        return domain("multilinear averages act on functions of one variable");
    }
    for f in fs {
        f.check_radius(t)?;
    }
    let circle = gauss_legendre(k, 0.0, 2.0 * PI);
    let inner = |rad: f64| -> f64 {
        let (a, b) = (fs[m - 2], fs[m - 1]);
        let terms: Vec<f64> = circle
            .iter()
            .map(|&(phi, w)| {
                let (s, c) = phi.sin_cos();
                w * a.eval(&[x - t * rad * c]) * b.eval(&[x - t * rad * s])
            })
            .collect();
        pairwise_sum(&terms)
    };
    let total = match m {
        2 => inner(1.0),
        3 => {
            // ỹ = sin(psi), psi in (-pi/2, pi/2).
            let terms: Vec<f64> = gauss_legendre(k, -0.5 * PI, 0.5 * PI)
                .iter()
                .map(|&(psi, w)| {
                    let (s, c) = psi.sin_cos();
                    w * c * fs[0].eval(&[x - t * s]) * inner(c)
                })
                .collect();
            pairwise_sum(&terms)
        }
        _ => {
            // |ỹ| = sin(psi), psi in (0, pi/2), polar angle alpha.
            let mut terms = Vec::with_capacity(k * k);
            for &(psi, w) in &gauss_legendre(k, 0.0, 0.5 * PI) {
                let (s, c) = psi.sin_cos();
                let ring = inner(c);
                for &(al, wa) in &circle {
                    let (sa, ca) = al.sin_cos();
                    terms.push(w * wa * s * c * fs[0].eval(&[x - t * s * ca]) * fs[1].eval(&[x - t * s * sa]) * ring);
                }
            }
            pairwise_sum(&terms)
        }
    };
    Ok(total / sphere_area(m))
}

/// `T_k(f,g)(x) = sup_t int_{2^{-k-1}}^{2^{-k}} |f(x - t y)| |g(x - t sqrt(1-y^2))| dy`
/// over `times`, for grid functions read as constant on cells; the integral
/// is exact between the breakpoints where either argument crosses a cell edge.
pub fn tk_operator(f: &GridFunction, g: &GridFunction, x: f64, k: u32, times: &[f64]) -> Result<f64> {
    if f.dim() != 1 || g.dim() != 1 {
        return domain("T_k acts on functions of one variable");
    }
    let tmax = times.iter().cloned().fold(0.0, f64::max);
    f.check_radius(tmax)?;
    g.check_radius(tmax)?;
    let (ya, yb) = ((-(k as f64) - 1.0).exp2(), (-(k as f64)).exp2());
    let cell = |gf: &GridFunction, z: f64| -> f64 {
        let u = (z - gf.lo()[0]) / gf.spacing()[0];
        if u < 0.0 || u >= gf.shape()[0] as f64 {
            0.0
        } else {
            gf.values()[u.floor() as usize].abs()
        }
    };
    let edges = |gf: &GridFunction, lo: f64, hi: f64| -> Vec<f64> {
        let (l, h) = (gf.lo()[0], gf.spacing()[0]);
        let i0 = ((lo - l) / h).floor().max(0.0) as usize;
        let i1 = (((hi - l) / h).ceil().max(0.0) as usize).min(gf.shape()[0]);
        (i0..=i1).map(|i| l + i as f64 * h).filter(|b| *b > lo && *b < hi).collect()
    };
    let mut best = 0.0f64;
    for &t in times {
        if !(t > 0.0) {
            return domain("times must be positive");
        }
        let mut cuts = vec![ya, yb];
        // f argument x - t y is monotone in y.
        for b in edges(f, x - t * yb, x - t * ya) {
            cuts.push((x - b) / t);
        }
        // g argument x - t sqrt(1 - y^2) is increasing in y.
        let (za, zb) = ((1.0 - ya * ya).sqrt(), (1.0 - yb * yb).sqrt());
        for b in edges(g, x - t * za, x - t * zb) {
            let z = (x - b) / t;
            cuts.push((1.0 - z * z).max(0.0).sqrt());
        }
        cuts.retain(|y| *y >= ya && *y <= yb);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let terms: Vec<f64> = cuts
            .windows(2)
            .map(|w| {
                let y = 0.5 * (w[0] + w[1]);
                (w[1] - w[0]) * cell(f, x - t * y) * cell(g, x - t * (1.0 - y * y).sqrt())
            })
            .collect();
        best = best.max(pairwise_sum(&terms));
    }
    Ok(best)
}

/// Constant in `T_k <= C 2^{k/3} M_3 f M_{3/2} g`: Hölder with exponents
/// `(3, 3/2)`, the `f` integral bounded by an interval of length `t 2^{-k}`
/// containing `x`, and the `g` integral by the Jacobian
/// `|dy/dz| = z/sqrt(1-z^2) <= 2^{k+1}` over an interval of length `<= t`.
pub const TK_CONSTANT: f64 = 1.587_401_051_968_199_4; // 2^{2/3}

/// Constant in the swapped bound `T_k <= C 2^{-k/3} M_{3/2} f M_3 g`.
pub const TK_CONSTANT_SWAPPED: f64 = 1.259_921_049_894_873_2; // 2^{1/3}

/// Splitting index `N = 3 log2(|F|^{1/6} |G|^{-1/6})`, rounded to the nearest integer.
pub fn tk_split_index(measure_f: f64, measure_g: f64) -> i64 {
    (0.5 * (measure_f / measure_g).log2()).round() as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{FnField, Gaussian};

    fn one(d: usize) -> FnField<impl Fn(&[f64]) -> f64 + Sync> {
        FnField { dim: d, f: |_: &[f64]| 1.0 }
    }
    fn r(a: i64, b: i64) -> RExponent {
        RExponent::new(Exponent::frac(a, b)).unwrap()
    }

    #[test]
    fn single_scale_examples() {
        let rule = sphere_rule(2, 64, Measure::Normalized).unwrap();
        assert!((spherical_average(&one(2), &[0.3, 0.1], 1.5, &rule).unwrap() - 1.0).abs() < 1e-14);
        let sq = FnField { dim: 2, f: |x: &[f64]| x[0] * x[0] + x[1] * x[1] };
        assert!((spherical_average(&sq, &[0.0, 0.0], 1.0, &rule).unwrap() - 1.0).abs() < 1e-14);
        let g = Gaussian { center: vec![0.0, 0.0], a: 1.0, amp: 1.0 };
        assert!((spherical_average(&g, &[0.0, 0.0], 1.0, &rule).unwrap() - (-1.0f64).exp()).abs() < 1e-14);
        assert!(spherical_average(&g, &[0.0, 0.0], 0.0, &rule).is_err());
    }

    #[test]
    fn ar_examples() {
        let rule = sphere_rule(2, 32, Measure::Normalized).unwrap();
        let x = [0.2, 0.0];
        assert!((ar_value(&one(2), &x, r(1, 1), &rule, 8).unwrap() - 1.5).abs() < 1e-12);
        let inf = RExponent::new(Exponent::Infinite).unwrap();
        assert!((ar_value(&one(2), &x, inf, &rule, 8).unwrap() - 1.0).abs() < 1e-12);
        assert!((ar_star(&one(2), &x, inf, (-3, 3), &rule, 8).unwrap() - 1.0).abs() < 1e-12);
        let grid = TimeGrid::local(8).unwrap();
        let b = br_delta(&one(2), &x, r(1, 1), 0.3, &grid, &rule, 8).unwrap();
        assert!((b - 2.0).abs() < 1e-12);
        let g = Gaussian { center: vec![0.4, -0.2], a: 2.0, amp: 1.0 };
        let a1 = ar_value(&g, &x, r(1, 1), &rule, 8).unwrap();
        let a2 = ar_value(&g, &x, r(2, 1), &rule, 8).unwrap();
        assert!(a1 <= 1.5f64.sqrt() * a2 + 1e-12);
    }

    #[test]
    fn bilinear_masses() {
        let rule = bilinear_rule(2, 12, Measure::Raw).unwrap();
        let v = bilinear_average_direct(&one(2), &one(2), &[0.0, 0.0], 1.0, &rule).unwrap();
        assert!((v - 2.0 * PI * PI).abs() < 1e-10);
        let s1 = sphere_rule(2, 16, Measure::Raw).unwrap();
        let v = bilinear_average_sliced(&one(2), &one(2), &[0.0, 0.0], 1.0, &s1, 16, Measure::Raw).unwrap();
        assert!((v - 2.0 * PI * PI).abs() < 1e-10);
        let g = Gaussian { center: vec![0.0, 0.0], a: 1.0, amp: 1.0 };
        let v = bilinear_average_direct(&g, &g, &[0.0, 0.0], 1.0, &rule).unwrap();
        assert!((v - (-1.0f64).exp() * 2.0 * PI * PI).abs() < 1e-10);
        assert!(bilinear_average_sliced(&one(1), &one(1), &[0.0], 1.0, &sphere_rule(1, 4, Measure::Raw).unwrap(), 8, Measure::Raw).is_err());
    }

    #[test]
    fn slicing_matches_direct_d2() {
        let f = Gaussian { center: vec![0.1, -0.3], a: 1.3, amp: 1.0 };
        let g = Gaussian { center: vec![-0.2, 0.4], a: 0.7, amp: 2.0 };
        let direct = bilinear_rule(2, 48, Measure::Raw).unwrap();
        let s1 = sphere_rule(2, 48, Measure::Raw).unwrap();
        let x = [0.3, 0.0];
        let a = bilinear_average_direct(&f, &g, &x, 1.0, &direct).unwrap();
        let b = bilinear_average_sliced(&f, &g, &x, 1.0, &s1, 48, Measure::Raw).unwrap();
        assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()), "{a} {b}");
    }

    #[test]
    fn rotated_special_cases() {
        let rule = sphere_rule(2, 128, Measure::Normalized).unwrap();
        let f = Gaussian { center: vec![0.5, 0.1], a: 1.0, amp: 1.0 };
        let x = [0.2, 0.3];
        let th = RotationAngle::new(1.0).unwrap();
        let a = rotated_bilinear(&f, &one(2), &x, 1.2, th, &rule).unwrap();
        let b = spherical_average(&f, &x, 1.2, &rule).unwrap();
        assert!((a - b).abs() < 1e-13);
        let g = Gaussian { center: vec![0.0, 0.0], a: 1.0, amp: 1.0 };
        let h = Gaussian { center: vec![0.0, 0.0], a: 0.3, amp: 1.0 };
        let v1 = rotated_bilinear(&g, &h, &[0.0, 0.0], 1.0, th, &rule).unwrap();
        let v2 = rotated_bilinear(&g, &h, &[0.0, 0.0], 1.0, RotationAngle::new(2.5).unwrap(), &rule).unwrap();
        assert!((v1 - v2).abs() < 1e-13);
        let o = linearized_bilinear(&one(2), &one(2), &[0.4, 0.0], th, &rule).unwrap();
        assert!((o - 1.0).abs() < 1e-13);
    }

    #[test]
    fn multilinear_consistency() {
        let gs: Vec<Gaussian> = (0..3).map(|i| Gaussian { center: vec![0.1 * i as f64], a: 1.0 + 0.5 * i as f64, amp: 1.0 }).collect();
        let refs: Vec<&dyn Field> = gs.iter().map(|g| g as &dyn Field).collect();
        let s3 = multilinear_average(&refs, 0.0, 1.0, 40).unwrap();
        let rule = sphere_rule(3, 40, Measure::Normalized).unwrap();
        let direct = rule.integrate(|y| gs[0].eval(&[-y[0]]) * gs[1].eval(&[-y[1]]) * gs[2].eval(&[-y[2]]));
        assert!((s3 - direct).abs() < 1e-10 * direct, "{s3} {direct}");
        let s2 = multilinear_average(&refs[..2], 0.2, 1.0, 64).unwrap();
        let b = bilinear_average_direct(refs[0], refs[1], &[0.2], 1.0, &bilinear_rule(1, 64, Measure::Normalized).unwrap()).unwrap();
        assert!((s2 - b).abs() < 1e-10);
        let ones: Vec<FnField<_>> = (0..4).map(|_| one(1)).collect();
        let refs: Vec<&dyn Field> = ones.iter().map(|g| g as &dyn Field).collect();
        assert!((multilinear_average(&refs, 0.0, 1.0, 16).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tk_on_constants() {
        let f = GridFunction::from_fn(&[-4.0], &[4.0], &[64], |x| if x[0].abs() < 2.0 { 1.0 } else { 0.0 }).unwrap();
        for k in 0..5 {
            let v = tk_operator(&f, &f, 0.0, k, &[1.0, 1.5]).unwrap();
            assert!((v - (-(k as f64) - 1.0).exp2()).abs() < 1e-14);
        }
    }

    #[test]
    fn tk_constants() {
        assert!((TK_CONSTANT - 2f64.powf(2.0 / 3.0)).abs() < 1e-15);
        assert!((TK_CONSTANT_SWAPPED - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn beta_predicate() {
        let e = |s: &str| s.parse::<Exponent>().unwrap();
        assert!(beta_bound_finite(e("3"), e("4")));
        assert!(!beta_bound_finite(e("2"), e("4")));
        assert!(!beta_bound_finite(e("3"), e("3/2")));
        // The tails vanish like eps^{1/6} and eps^{1/4}.
        let a = beta_truncated(e("3"), e("4"), 1e-30);
        let b = beta_truncated(e("3"), e("4"), 1e-60);
        assert!((a - b).abs() < 1e-4 * a);
        let exact = libm::tgamma(1.0 - 1.0 / 3.0 - 0.5) * libm::tgamma(1.0 - 0.25 - 0.5) / libm::tgamma(2.0 - 1.0 / 3.0 - 0.25 - 1.0);
        assert!((b - exact).abs() < 1e-8 * exact, "{b} {exact}");
    }
}
