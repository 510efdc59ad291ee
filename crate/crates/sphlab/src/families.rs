//! Extremal families: the four necessary-condition rows, the thin rectangle
//! arrangement behind the rotated bilinear counterexample, the dyadic ball
//! sum, and the singular product pair.

use crate::funcspace::{Exponent, Field, RadialProfile, SimpleFunction, Q};
use crate::operators::{ar_value, RExponent};
use crate::planar::{intersect, shift_arcs, total_length, union, ConvexPolygon, PolygonSet};
use crate::quad::{rotate_by, sphere_area, sphere_rule, Measure, RotationAngle};
use crate::{domain, Result};
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

const TAU: f64 = 2.0 * PI;

fn ball_volume(d: usize, r: f64) -> f64 {
    sphere_area(d) / d as f64 * r.powi(d as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowId {
    /// `f` = indicator of the `cδ`-neighbourhood of the unit sphere, `E = B(0, δ)`.
    ShellNeighborhood,
    /// `f` = indicator of `B(0, cδ)`, `E = {1 <= |x| <= 2}`.
    SmallBall,
    /// `f` = indicator of a `c√δ × cδ` plate, `E` = a `√δ × 1` plate above it.
    Knapp,
    /// `f = E` = indicator of `B(0, 1/δ)`.
    LargeBall,
}

impl RowId {
    pub const ALL: [RowId; 4] = [RowId::ShellNeighborhood, RowId::SmallBall, RowId::Knapp, RowId::LargeBall];

    pub fn index(self) -> usize {
        match self {
            RowId::ShellNeighborhood => 1,
            RowId::SmallBall => 2,
            RowId::Knapp => 3,
            RowId::LargeBall => 4,
        }
    }
}

impl fmt::Display for RowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

impl FromStr for RowId {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "shell" => Ok(RowId::ShellNeighborhood),
            "2" | "small-ball" => Ok(RowId::SmallBall),
            "3" | "knapp" => Ok(RowId::Knapp),
            "4" | "large-ball" => Ok(RowId::LargeBall),
            other => domain(format!("unknown example row {other:?}")),
        }
    }
}

/// Predicted scaling of one row: `||f||_p ~ δ^{alpha_p / p}`, `|E| ~ δ^beta`,
/// `𝔄^r f >~ δ^gamma` on `E`. Boundedness forces `alpha <= beta/q + gamma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleRow {
    pub id: RowId,
    pub d: u32,
    pub r: Exponent,
    pub alpha_p: Q,
    pub beta: Q,
    pub gamma: Q,
}

impl ExampleRow {
    pub fn new(id: RowId, d: u32, r: Exponent) -> Result<Self> {
        if d < 2 {
            return domain("example rows need d >= 2");
        }
        RExponent::new(r)?;
        let dq = Q::from_integer(d as i64);
        let rho = r.recip();
        let half = Q::new(1, 2);
        let (alpha_p, beta, gamma) = match id {
            RowId::ShellNeighborhood => (Q::one(), dq, rho),
            RowId::SmallBall => (dq, Q::zero(), dq - 1 + rho),
            RowId::Knapp => ((dq + 1) * half, (dq - 1) * half, (dq - 1) * half + rho),
            RowId::LargeBall => (-dq, -dq, Q::zero()),
        };
        Ok(ExampleRow { id, d, r, alpha_p, beta, gamma })
    }

    pub fn alpha(&self, p: Exponent) -> Q {
        self.alpha_p * p.recip()
    }

    /// `(alpha, beta/q + gamma)` at `(p, q)`.
    pub fn condition(&self, p: Exponent, q: Exponent) -> (Q, Q) {
        (self.alpha(p), self.beta * q.recip() + self.gamma)
    }

    /// The condition as text in `1/p, 1/q`.
    pub fn condition_text(&self) -> String {
        format!("({})/p <= ({})/q + {}", self.alpha_p, self.beta, self.gamma)
    }
}

/// The function of a row: radial rows are exact step profiles, the Knapp
/// row is an exact rectangle.
#[derive(Debug, Clone)]
pub enum RowFunction {
    Radial(RadialProfile),
    Plate(PolygonSet),
}

impl RowFunction {
    pub fn field(&self) -> &dyn Field {
        match self {
            RowFunction::Radial(f) => f,
            RowFunction::Plate(f) => f,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RowInstance {
    pub id: RowId,
    pub delta: f64,
    pub d: usize,
    pub f: RowFunction,
    /// Points of `E` where the lower bound is measured.
    pub test_points: Vec<Vec<f64>>,
    /// `|supp f|`; `f` is an indicator.
    pub f_measure: f64,
    pub e_measure: f64,
}

impl RowInstance {
    pub fn f_norm(&self, p: Exponent) -> f64 {
        self.f_measure.powf(p.recip().to_f64().unwrap())
    }

    /// Smallest `𝔄^r f` over the test points.
    pub fn gamma_value(&self, r: RExponent, k: usize) -> Result<f64> {
        let rule = sphere_rule(self.d, 8, Measure::Normalized)?;
        let mut best = f64::INFINITY;
        for x in &self.test_points {
            best = best.min(ar_value(self.f.field(), x, r, &rule, k)?);
        }
        Ok(best)
    }
}

fn on_axis(d: usize, s: f64) -> Vec<f64> {
    let mut x = vec![0.0; d];
    x[0] = s;
    x
}

/// Function and test set of a row at scale `delta` with plate constant `c`.
pub fn make_row(id: RowId, delta: f64, d: usize, c: f64) -> Result<RowInstance> {
    if !(delta > 0.0 && delta <= 0.25) {
        return domain(format!("delta must lie in (0, 1/4], got {delta}"));
    }
    if !(c >= 1.0 && c * delta <= 1.0) {
        return domain(format!("need 1 <= c <= 1/delta, got c = {c}"));
    }
    if !(2..=3).contains(&d) {
        return domain("example rows are generated for d in 2..=3");
    }
    let row = |f, test_points, f_measure, e_measure| Ok(RowInstance { id, delta, d, f, test_points, f_measure, e_measure });
    match id {
        RowId::ShellNeighborhood => {
            let (a, b) = (1.0 - c * delta, 1.0 + c * delta);
            let f = RadialProfile::annulus(d, a, b)?;
            let pts = [0.0, 0.5, 1.0].iter().map(|u| on_axis(d, u * delta)).collect();
            row(RowFunction::Radial(f), pts, ball_volume(d, b) - ball_volume(d, a), ball_volume(d, delta))
        }
        RowId::SmallBall => {
            let f = RadialProfile::ball(d, c * delta)?;
            let pts = [1.0, 1.25, 1.5, 1.75, 2.0].iter().map(|s| on_axis(d, *s)).collect();
            row(RowFunction::Radial(f), pts, ball_volume(d, c * delta), ball_volume(d, 2.0) - ball_volume(d, 1.0))
        }
        RowId::Knapp => {
            if d != 2 {
                return domain("the plate row is generated with exact arcs, which are planar (d = 2)");
            }
            let s = delta.sqrt();
            let plate = ConvexPolygon::rect(-c * s, c * s, -c * delta, c * delta)?;
            let f = PolygonSet::new(vec![plate])?;
            let mut pts = Vec::new();
            for u in [0.0, 0.5, 1.0] {
                for v in [1.25, 1.5, 1.75] {
                    pts.push(vec![u * s, v]);
                }
            }
            row(RowFunction::Plate(f), pts, 4.0 * c * c * delta * s, 2.0 * s)
        }
        RowId::LargeBall => {
            let big = 1.0 / delta;
            let f = RadialProfile::ball(d, big)?;
            // Points at distance >= 2 from the boundary see f = 1 on every sphere.
            let pts = [0.0, 0.5 * big, big - 2.0].iter().map(|s| on_axis(d, *s)).collect();
            let v = ball_volume(d, big);
            row(RowFunction::Radial(f), pts, v, v)
        }
    }
}

/// Thin parallelograms in `δ^{-1}` directions with a small union, their
/// sweeps along the normals (where the lower bound holds) and the pieces
/// carrying `g`.
#[derive(Debug, Clone)]
pub struct KakeyaFamily {
    pub delta: f64,
    pub theta: RotationAngle,
    /// `R_l`: `δ × δ²` parallelograms with slopes `l δ`.
    pub rects: Vec<ConvexPolygon>,
    /// Unit normals `n_l` to the long sides.
    pub normals: Vec<[f64; 2]>,
    /// `R_l - [1, 2] n_l`.
    pub strips: Vec<ConvexPolygon>,
    /// `(I - Θ) R_l + Θ R_l - [1, 2] (I - Θ) n_l`.
    pub pieces: Vec<ConvexPolygon>,
    pub f: PolygonSet,
    pub g: PolygonSet,
    pub region: PolygonSet,
}

/// Offsets of the parallelograms: `b_j = -sum_k eps_k(j) 2^{-k} k/n` with
/// `eps_k(j)` the binary digits of `j / 2^n`.
fn offsets(n: u32) -> Vec<f64> {
    let count = 1usize << n;
    (0..count)
        .map(|j| {
            (1..=n)
                .filter(|k| (j >> (n - k)) & 1 == 1)
                .map(|k| -(k as f64 / n as f64) * (-(k as f64)).exp2())
                .sum()
        })
        .collect()
}

pub fn make_kakeya(delta: f64, theta: f64) -> Result<KakeyaFamily> {
    let n = -delta.log2();
    if !(n.fract() == 0.0 && (2.0..=10.0).contains(&n)) {
        return domain(format!("delta must be 2^-n with 2 <= n <= 10, got {delta}"));
    }
    let theta = RotationAngle::new(theta)?;
    let n = n as u32;
    let count = 1usize << n;
    let w = 0.5 / count as f64;
    let (c, s) = (theta.theta().cos(), theta.theta().sin());
    let rot = [[c, -s], [s, c]];
    let id_minus = [[1.0 - c, s], [-s, 1.0 - c]];
    let apply = |m: [[f64; 2]; 2], p: [f64; 2]| [m[0][0] * p[0] + m[0][1] * p[1], m[1][0] * p[0] + m[1][1] * p[1]];

    let mut rects = Vec::with_capacity(count);
    let mut normals = Vec::with_capacity(count);
    let mut strips = Vec::with_capacity(count);
    let mut pieces = Vec::with_capacity(count);
    for (j, b) in offsets(n).into_iter().enumerate() {
        let a = j as f64 / count as f64;
        let v = [[0.0, b - w], [1.0, a + b - w], [1.0, a + b + w], [0.0, b + w]].map(|p| [delta * p[0], delta * p[1]]);
        let rect = ConvexPolygon::hull(&v)?;
        let h = a.hypot(1.0);
        let nl = [-a / h, 1.0 / h];
        let swept: Vec<[f64; 2]> = [1.0, 2.0].iter().flat_map(|t| v.iter().map(move |p| [p[0] - t * nl[0], p[1] - t * nl[1]])).collect();
        let dn = apply(id_minus, nl);
        let mut g = Vec::with_capacity(32);
        for p in &v {
            let ip = apply(id_minus, *p);
            for q in &v {
                let rq = apply(rot, *q);
                for t in [1.0, 2.0] {
                    g.push([ip[0] + rq[0] - t * dn[0], ip[1] + rq[1] - t * dn[1]]);
                }
            }
        }
        strips.push(ConvexPolygon::hull(&swept)?);
        pieces.push(ConvexPolygon::hull(&g)?);
        rects.push(rect);
        normals.push(nl);
    }
    Ok(KakeyaFamily {
        delta,
        theta,
        f: PolygonSet::new(rects.clone())?,
        g: PolygonSet::new(pieces.clone())?,
        region: PolygonSet::new(strips.clone())?,
        rects,
        normals,
        strips,
        pieces,
    })
}

impl KakeyaFamily {
    /// `|∪ R_l| log(1/δ) / δ²`.
    pub fn union_ratio(&self, columns: usize) -> f64 {
        self.f.union_area(columns) * (1.0 / self.delta).ln() / (self.delta * self.delta)
    }

    /// `𝒜^θ_t(f, g)(x)` in normalized measure, from exact arcs.
    pub fn average(&self, x: [f64; 2], t: f64) -> f64 {
        let sf = self.f.arcs(x, t);
        if sf.is_empty() {
            return 0.0;
        }
        let sg = union(self.pieces.iter().flat_map(|q| q.arcs(x, t)).collect());
        total_length(&intersect(&sf, &shift_arcs(&sg, self.theta.theta()))) / TAU
    }

    /// Lower bound for `ℳ^θ_loc(f, g)(x)`: the largest average over `k`
    /// radii in each window where the circle about `x` crosses some `R_l`
    /// along its long side.
    pub fn local_maximal(&self, x: [f64; 2], k: usize) -> f64 {
        let mut best = 0.0f64;
        for (l, strip) in self.strips.iter().enumerate() {
            if !strip.contains(x) {
                continue;
            }
            let nl = self.normals[l];
            let heights: Vec<f64> = self.rects[l].vertices().iter().map(|p| (p[0] - x[0]) * nl[0] + (p[1] - x[1]) * nl[1]).collect();
            let lo = heights.iter().copied().fold(f64::INFINITY, f64::min).max(1.0);
            let hi = heights.iter().copied().fold(f64::NEG_INFINITY, f64::max).min(2.0);
            if hi <= lo {
                continue;
            }
            for i in 0..k {
                let t = lo + (hi - lo) * (i as f64 + 0.5) / k as f64;
                best = best.max(self.average(x, t));
            }
        }
        best
    }

    /// `n` points uniform on `∪ (R_l - [1,2] n_l)` by rejection from its box.
    pub fn sample_region(&self, n: usize, seed: u64) -> Vec<[f64; 2]> {
        let (lo, hi) = self.region.bbox();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let p = [rng.gen_range(lo[0]..hi[0]), rng.gen_range(lo[1]..hi[1])];
            if self.region.contains(p) {
                out.push(p);
            }
        }
        out
    }

    /// Rotation applied by `g`'s pieces to the directions seen by `f`.
    pub fn rotate(&self, v: [f64; 2]) -> [f64; 2] {
        rotate_by(v, self.theta.theta())
    }
}

/// `f = sum_{i=1}^N 4^{(d/p0) i} 1_{B(0, a 4^{-i})}`, `p0 = dr/(dr - r + 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicSumSpec {
    pub n: u32,
    pub a: f64,
    pub d: usize,
    pub r: Exponent,
}

impl DyadicSumSpec {
    pub fn p0(&self) -> Exponent {
        let d = Q::from_integer(self.d as i64);
        Exponent::from_recip((d - 1 + self.r.recip()) / d)
    }

    /// `d / p0 = d - 1 + 1/r`.
    pub fn level_exponent(&self) -> f64 {
        (self.d as f64 - 1.0) + self.r.recip().to_f64().unwrap()
    }

    pub fn radius(&self, i: u32) -> f64 {
        self.a * (-2.0 * i as f64).exp2()
    }

    /// Value of `f` on `a 4^{-i-1} <= |x| < a 4^{-i}` (`i = N` is the inner ball).
    pub fn block_value(&self, i: u32) -> f64 {
        let e = self.level_exponent();
        (1..=i).map(|m| (2.0 * e * m as f64).exp2()).sum()
    }
}

#[derive(Debug, Clone)]
pub struct DyadicSum {
    pub spec: DyadicSumSpec,
    pub profile: RadialProfile,
    pub levels: SimpleFunction,
}

pub fn make_dyadic_sum(spec: DyadicSumSpec) -> Result<DyadicSum> {
    if spec.n < 1 || spec.n > 64 {
        return domain("need 1 <= N <= 64");
    }
    if !(spec.a > 0.0 && spec.a <= 0.25) {
        return domain("radius a must lie in (0, 1/4]");
    }
    if !(2..=3).contains(&spec.d) {
        return domain("dyadic sums are generated for d in 2..=3");
    }
    RExponent::new(spec.r)?;
    let n = spec.n;
    let mut edges = vec![0.0];
    let mut values = Vec::with_capacity(n as usize);
    for i in (1..=n).rev() {
        edges.push(spec.radius(i));
        values.push(spec.block_value(i));
    }
    let profile = RadialProfile::shells(spec.d, edges, values)?;
    let mut levels = Vec::with_capacity(n as usize);
    for i in (1..=n).rev() {
        let inner = if i == n { 0.0 } else { ball_volume(spec.d, spec.radius(i + 1)) };
        levels.push((spec.block_value(i), ball_volume(spec.d, spec.radius(i)) - inner));
    }
    let levels = SimpleFunction::new(levels)?;
    Ok(DyadicSum { spec, profile, levels })
}

/// Singular pair on `R^2 = R × R`:
/// `f = ||x1| - 1|^{-alpha1/p1} |x2|^{-alpha2/p1}` on `[-2, 2]^2`, `g` likewise
/// with `beta`, `p2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductTypeSpec {
    pub alpha: [Q; 2],
    pub beta: [Q; 2],
    pub p1: Exponent,
    pub p2: Exponent,
    pub k_range: (u32, u32),
}

#[derive(Debug, Clone)]
pub struct ProductPair {
    pub spec: ProductTypeSpec,
    /// Exponents of `f` and `g` as floats: `[alpha1/p1, alpha2/p1]`, `[beta1/p2, beta2/p2]`.
    fe: [f64; 2],
    ge: [f64; 2],
}

fn integrable(e: Q) -> bool {
    e < Q::one()
}

pub fn make_product_type(spec: ProductTypeSpec) -> Result<ProductPair> {
    for (name, e) in [("alpha1", spec.alpha[0]), ("alpha2", spec.alpha[1]), ("beta1", spec.beta[0]), ("beta2", spec.beta[1])] {
        if e < Q::zero() || !integrable(e) {
            return domain(format!("{name} = {e} must lie in [0, 1) for integrability"));
        }
    }
    for p in [spec.p1, spec.p2] {
        if p.recip() > Q::one() || p.recip() <= Q::zero() {
            return domain("p1, p2 must lie in [1, inf)");
        }
    }
    if spec.k_range.0 < 1 || spec.k_range.1 < spec.k_range.0 || spec.k_range.1 > 30 {
        return domain("k range must satisfy 1 <= k_lo <= k_hi <= 30");
    }
    let q = |e: Q, p: Exponent| (e * p.recip()).to_f64().unwrap();
    Ok(ProductPair {
        fe: [q(spec.alpha[0], spec.p1), q(spec.alpha[1], spec.p1)],
        ge: [q(spec.beta[0], spec.p2), q(spec.beta[1], spec.p2)],
        spec,
    })
}

fn singular_factor(e: [f64; 2], x: [f64; 2]) -> f64 {
    if x[0].abs() > 2.0 || x[1].abs() > 2.0 {
        return 0.0;
    }
    (x[0].abs() - 1.0).abs().powf(-e[0]) * x[1].abs().powf(-e[1])
}

/// `∫_eps^1 u^{-e} du` by tanh-sinh quadrature: converges as `eps -> 0` iff `e < 1`.
pub fn truncated_power_integral(e: f64, eps: f64) -> f64 {
    // Geometric panels keep the rule accurate when the integral diverges.
    let mut total = 0.0;
    let mut lo = eps;
    while lo < 1.0 {
        let hi = (lo * 16.0).min(1.0);
        total += quadrature::double_exponential::integrate(|u: f64| u.powf(-e), lo, hi, 1e-12).integral;
        lo = hi;
    }
    total
}

impl ProductPair {
    pub fn f(&self, x: [f64; 2]) -> f64 {
        singular_factor(self.fe, x)
    }
    pub fn g(&self, x: [f64; 2]) -> f64 {
        singular_factor(self.ge, x)
    }

    /// `(||f||_{p1}, ||g||_{p2})` from `∫_{-2}^2 ||u|-1|^{-a} = 4/(1-a)` and
    /// `∫_{-2}^2 |u|^{-a} = 2^{2-a}/(1-a)`.
    pub fn norms(&self) -> (f64, f64) {
        let one = |a: Q, b: Q, p: Exponent| {
            let (a, b) = (a.to_f64().unwrap(), b.to_f64().unwrap());
            let mass = 4.0 / (1.0 - a) * (2.0 - b).exp2() / (1.0 - b);
            mass.powf(p.recip().to_f64().unwrap())
        };
        (one(self.spec.alpha[0], self.spec.alpha[1], self.spec.p1), one(self.spec.beta[0], self.spec.beta[1], self.spec.p2))
    }

    /// `𝒯(f, g)(x) = ∫_{S^1} f(x - y) g(x + y) dσ(y)`, normalized, split at
    /// every angle where a factor is singular or has a kink.
    pub fn transform(&self, x: [f64; 2]) -> f64 {
        self.transform_with(x, 1e-11)
    }

    /// [`Self::transform`] with quadrature tolerance `tol` per piece.
    pub fn transform_with(&self, x: [f64; 2], tol: f64) -> f64 {
        let mut cuts = vec![0.0, TAU];
        let mut push_cos = |c: f64| {
            if c.abs() < 1.0 {
                let a = c.acos();
                cuts.extend([a, TAU - a]);
            }
        };
        for c in [x[0] - 1.0, x[0] + 1.0, 1.0 - x[0], -1.0 - x[0], x[0], -x[0]] {
            push_cos(c);
        }
        for s in [x[1], -x[1]] {
            if s.abs() < 1.0 {
                let a = s.asin();
                cuts.extend([a.rem_euclid(TAU), PI - a]);
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let integrand = |phi: f64| {
            let (s, c) = phi.sin_cos();
            self.f([x[0] - c, x[1] - s]) * self.g([x[0] + c, x[1] + s])
        };
        let parts: Vec<f64> = cuts
            .windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| quadrature::double_exponential::integrate(integrand, w[0], w[1], tol).integral)
            .collect();
        crate::pairwise_sum(&parts) / TAU
    }

    /// Sample points of `B_k = {2^{-k} <= x1 <= 2^{1-k}, 2^{-k/2} <= x2 <= 2^{(1-k)/2}}`.
    pub fn bk_points(&self, k: u32) -> Vec<[f64; 2]> {
        let (a, b) = ((-(k as f64)).exp2(), (-(k as f64) / 2.0).exp2());
        let mut out = Vec::with_capacity(9);
        for u in [1.2, 1.5, 1.8] {
            for v in [1.1, 1.2, 1.35] {
                out.push([u * a, v * b]);
            }
        }
        out
    }

    /// `min 𝒯(f, g)` over the sample points of `B_k`.
    pub fn bk_lower_bound(&self, k: u32) -> f64 {
        self.bk_lower_bound_with(k, 1e-11)
    }

    pub fn bk_lower_bound_with(&self, k: u32, tol: f64) -> f64 {
        self.bk_points(k).into_iter().map(|x| self.transform_with(x, tol)).fold(f64::INFINITY, f64::min)
    }

    /// `alpha1/p1 + beta1/p2 + alpha2/(2 p1) + beta2/(2 p2) - 1/2`: growth of
    /// `𝒯` on `B_k` in powers of `2^k`.
    pub fn predicted_exponent(&self) -> Q {
        let s = &self.spec;
        let half = Q::new(1, 2);
        s.alpha[0] * s.p1.recip() + s.beta[0] * s.p2.recip() + half * (s.alpha[1] * s.p1.recip() + s.beta[1] * s.p2.recip()) - half
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_match_binary_digits() {
        let b = offsets(2);
        // j = 1: digits (0, 1) -> -(2/2) * 1/4; j = 3: -(1/2)(1/2) - (1)(1/4).
        assert_eq!(b, vec![0.0, -0.25, -0.25, -0.5]);
    }

    #[test]
    fn rows_have_tabulated_exponents() {
        let r = ExampleRow::new(RowId::Knapp, 2, Exponent::int(2)).unwrap();
        assert_eq!(r.alpha_p, Q::new(3, 2));
        assert_eq!(r.gamma, Q::one());
        let (l, rhs) = r.condition(Exponent::int(2), Exponent::int(2));
        assert_eq!(l, Q::new(3, 4));
        assert_eq!(rhs, Q::new(5, 4));
    }

    #[test]
    fn dyadic_single_ball() {
        let s = make_dyadic_sum(DyadicSumSpec { n: 1, a: 0.25, d: 2, r: Exponent::int(2) }).unwrap();
        assert_eq!(s.levels.levels().len(), 1);
        let (v, m) = s.levels.levels()[0];
        assert!((v - 8.0).abs() < 1e-12);
        assert!((m - PI / 256.0).abs() < 1e-15);
    }
}
