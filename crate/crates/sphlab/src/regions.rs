//! Exact-rational exponent regions: vertex tables, half-space constraints,
//! and classification of exponent points into verdict strata.
//!
//! Linear points are `(1/p, 1/q)`; bilinear points are `(1/p1, 1/p2, 1/p)`;
//! `m`-linear points are `(1/p1, .., 1/pm)` with `1/p` their sum.
//! Throughout `rho = 1/r` (so `1/r' = 1 - rho`).

use crate::funcspace::{Exponent, Q};
use crate::{domain, Result};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

fn q(a: i64, b: i64) -> Q {
    Q::new(a, b)
}
fn qi(a: i64) -> Q {
    Q::from_integer(a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TheoremId {
    /// Full bilinear maximal function: `d = 1` segments and the `d = 2` endpoint line.
    FullMaximal,
    /// Strong/weak type range of the `m`-linear maximal function on the line.
    DosidisRamos,
    /// The same, plus restricted weak type on the closed segments `L_{k,j}`.
    Multilinear,
    /// Known strong range of the local bilinear maximal function.
    JeongLee,
    /// Improved range of the local bilinear maximal function via slicing.
    SlicedImproving,
    /// `L^p -> L^q` range of `𝔄^r`.
    LinearAr,
    /// `L^p -> L^p` range of `𝔄^r_*`.
    LinearArStar,
    /// `δ`-dependence of `𝔅^r_δ`.
    LinearBr,
    /// `δ`-dependence of `𝔅^1_δ` in the plane.
    Schlag,
    /// `L^p -> L^q` range of the local spherical maximal function.
    SchlagSogge,
    /// Single-scale rotated bilinear average, `θ != π`.
    Gikl,
    /// Single-scale rotated bilinear average, `θ = π`.
    GiklPi,
    /// Full rotated bilinear maximal function `ℳ^θ`.
    RotatedMaximal,
    /// Linearized rotated average `Ã^θ`.
    Linearized,
    /// Product-type necessary condition for the `d`-dimensional `θ = π` average.
    ProductNecessary,
    /// Ball/annulus necessary conditions for the same operator.
    ImprovingNecessary,
}

impl TheoremId {
    pub const ALL: [TheoremId; 16] = [
        TheoremId::FullMaximal,
        TheoremId::DosidisRamos,
        TheoremId::Multilinear,
        TheoremId::JeongLee,
        TheoremId::SlicedImproving,
        TheoremId::LinearAr,
        TheoremId::LinearArStar,
        TheoremId::LinearBr,
        TheoremId::Schlag,
        TheoremId::SchlagSogge,
        TheoremId::Gikl,
        TheoremId::GiklPi,
        TheoremId::RotatedMaximal,
        TheoremId::Linearized,
        TheoremId::ProductNecessary,
        TheoremId::ImprovingNecessary,
    ];
    pub fn name(self) -> &'static str {
        match self {
            TheoremId::FullMaximal => "fullMaximal",
            TheoremId::DosidisRamos => "dosidisRamos",
            TheoremId::Multilinear => "multilinear",
            TheoremId::JeongLee => "jeongLee",
            TheoremId::SlicedImproving => "slicedImproving",
            TheoremId::LinearAr => "linearAr",
            TheoremId::LinearArStar => "linearArStar",
            TheoremId::LinearBr => "linearBr",
            TheoremId::Schlag => "schlag",
            TheoremId::SchlagSogge => "schlagSogge",
            TheoremId::Gikl => "gikl",
            TheoremId::GiklPi => "giklPi",
            TheoremId::RotatedMaximal => "rotatedMaximal",
            TheoremId::Linearized => "linearized",
            TheoremId::ProductNecessary => "productNecessary",
            TheoremId::ImprovingNecessary => "improvingNecessary",
        }
    }
    /// Whether points are `(1/p, 1/q)` pairs.
    pub fn is_linear(self) -> bool {
        matches!(
            self,
            TheoremId::LinearAr | TheoremId::LinearArStar | TheoremId::LinearBr | TheoremId::Schlag | TheoremId::SchlagSogge
        )
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| crate::Error::Domain(format!("unknown theorem id {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Strong,
    RestrictedWeak,
    RestrictedStrong,
    Weak,
    False,
    Open,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Strong => "strong",
            Verdict::RestrictedWeak => "restricted-weak",
            Verdict::RestrictedStrong => "restricted-strong",
            Verdict::Weak => "weak",
            Verdict::False => "false",
            Verdict::Open => "open",
        })
    }
}

/// Reciprocal exponents with the dimension (or arity) and optional `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentPoint {
    pub coords: Vec<Q>,
    pub d: u32,
    pub r: Option<Exponent>,
}

impl ExponentPoint {
    pub fn new(coords: Vec<Q>, d: u32, r: Option<Exponent>) -> Self {
        ExponentPoint { coords, d, r }
    }
    /// From exponents `p` (not reciprocals).
    pub fn from_exponents(ps: &[Exponent], d: u32, r: Option<Exponent>) -> Self {
        ExponentPoint { coords: ps.iter().map(|p| p.recip()).collect(), d, r }
    }
    fn rho(&self) -> Result<Q> {
        match self.r {
            Some(r) => {
                let v = r.recip();
                if v < Q::zero() || v > Q::one() {
                    return domain("r must lie in [1, inf]");
                }
                Ok(v)
            }
            None => domain("this theorem needs r"),
        }
    }
    fn labels(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }
}

/// `coeffs · x <= rhs` (or `<` when strict).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub coeffs: Vec<Q>,
    pub rhs: Q,
    pub strict: bool,
}

impl Constraint {
    fn new(name: &str, coeffs: Vec<Q>, rhs: Q, strict: bool) -> Self {
        Constraint { name: name.to_string(), coeffs, rhs, strict }
    }
    pub fn lhs(&self, x: &[Q]) -> Q {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum()
    }
    pub fn satisfied(&self, x: &[Q]) -> bool {
        let l = self.lhs(x);
        if self.strict {
            l < self.rhs
        } else {
            l <= self.rhs
        }
    }
    pub fn tight(&self, x: &[Q]) -> bool {
        self.lhs(x) == self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub theorem: String,
    pub point: Vec<String>,
    pub verdict: Verdict,
    pub citations: Vec<String>,
    /// `δ`-power of the operator norm, for the `𝔅^r_δ` families.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_power: Option<String>,
}

/// One inequality of a necessary condition evaluated at a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessaryCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub satisfied: bool,
    /// Equality holds: the point is on the boundary of the condition.
    pub boundary: bool,
}

pub type Vertex = (String, Vec<Q>);

fn v(name: &str, c: Vec<Q>) -> Vertex {
    (name.to_string(), c)
}

fn need_d(d: u32, lo: u32) -> Result<Q> {
    if d < lo {
        return domain(format!("dimension must be at least {lo}"));
    }
    Ok(qi(d as i64))
}

/// Vertices `O, A, P, Q, R` for `𝔄^r` at `rho = 1/r`.
fn linear_ar_vertices(d: Q, rho: Q) -> Vec<Vertex> {
    let one = Q::one();
    let dd = d * d;
    vec![
        v("O", vec![Q::zero(), Q::zero()]),
        v("A", vec![rho, Q::zero()]),
        v("P", vec![((d + one) * rho + dd - d) / (dd + one), (d - one) * (one - rho) / (dd + one)]),
        v("Q", vec![(d - one + rho) / d, (one - rho) / d]),
        v("R", vec![(d - one + rho) / d, (d - one + rho) / d]),
    ]
}

/// `P', Q', R'`: the `r = inf` positions of `P, Q, R`.
fn primed_vertices(d: Q) -> Vec<Vertex> {
    linear_ar_vertices(d, Q::zero())
        .into_iter()
        .skip(2)
        .map(|(n, c)| (format!("{n}'"), c))
        .collect()
}

fn slicing_diag_vertices(d: Q) -> Vec<Vertex> {
    let one = Q::one();
    let two = qi(2);
    let dd = d * d;
    vec![
        v("O", vec![Q::zero(), Q::zero()]),
        v("A", vec![q(1, 2), Q::zero()]),
        v("E", vec![(two * d - qi(3)) / (two * (d - one)), (d - two) / (d * (d - one))]),
        v(
            "F",
            vec![
                (two * d - one) * (two * d - one) / (two * (two * dd - d + one)),
                (two * d - qi(3)) / (two * dd - d + one),
            ],
        ),
        v("B'", vec![(two * dd - d + one) / (two * (dd + one)), (d - one) / (dd + one)]),
        v("C", vec![(two * d - one) / (two * d), one / d]),
        v("D", vec![(two * d - one) / (two * d), (two * d - one) / d]),
    ]
}

fn gikl_vertices(with_center: bool) -> Vec<Vertex> {
    let mut out = vec![
        v("O", vec![qi(0), qi(0), qi(0)]),
        v("W", vec![q(2, 3), q(2, 3), qi(1)]),
        v("X1", vec![qi(0), q(2, 3), q(1, 3)]),
        v("X2", vec![q(2, 3), qi(0), q(1, 3)]),
        v("Y1", vec![qi(1), qi(0), qi(1)]),
        v("Y2", vec![qi(0), qi(1), qi(1)]),
    ];
    if with_center {
        out.push(v("Z", vec![q(1, 2), q(1, 2), q(1, 2)]));
    }
    out
}

/// Named vertices of the region attached to `theorem`. `r` is needed for
/// the `𝔄^r`/`𝔅^r_δ` families.
pub fn vertex_table(theorem: TheoremId, d: u32, r: Option<Exponent>) -> Result<Vec<Vertex>> {
    let rho = || ExponentPoint::new(vec![], d, r).rho();
    Ok(match theorem {
        TheoremId::LinearAr | TheoremId::LinearArStar => linear_ar_vertices(need_d(d, 2)?, rho()?),
        TheoremId::LinearBr => {
            let dq = need_d(d, 2)?;
            let mut out = linear_ar_vertices(dq, rho()?);
            out.extend(primed_vertices(dq));
            out
        }
        TheoremId::Schlag => {
            if d != 2 {
                return domain("this family is planar");
            }
            vec![
                v("O", vec![qi(0), qi(0)]),
                v("X", vec![qi(1), qi(0)]),
                v("Y", vec![qi(1), qi(1)]),
                v("P'", vec![q(2, 5), q(1, 5)]),
                v("Q'", vec![q(1, 2), q(1, 2)]),
            ]
        }
        TheoremId::SchlagSogge => {
            let dq = need_d(d, 2)?;
            let mut out = vec![v("O", vec![qi(0), qi(0)])];
            out.extend(primed_vertices(dq));
            out
        }
        TheoremId::FullMaximal => match d {
            1 => vec![
                v("U1", vec![q(1, 2), qi(0)]),
                v("U2", vec![q(1, 2), q(1, 2)]),
                v("U3", vec![qi(0), q(1, 2)]),
            ],
            2 => vec![v("V1", vec![qi(1), q(1, 2)]), v("V2", vec![q(1, 2), qi(1)])],
            _ => return domain("named vertices exist for d = 1, 2"),
        },
        TheoremId::JeongLee | TheoremId::SlicedImproving => slicing_diag_vertices(need_d(d, 2)?),
        TheoremId::Gikl => gikl_vertices(true),
        TheoremId::GiklPi => gikl_vertices(false),
        _ => return domain(format!("{theorem} has no vertex table")),
    })
}

pub fn vertex(theorem: TheoremId, d: u32, r: Option<Exponent>, name: &str) -> Result<Vec<Q>> {
    vertex_table(theorem, d, r)?
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, c)| c)
        .ok_or_else(|| crate::Error::Domain(format!("{theorem} has no vertex {name:?}")))
}

/// Facets of the `𝔄^r` pentagon `O A P Q R` as `a·(x, y) <= b`.
fn linear_ar_constraints(d: Q, rho: Q) -> Vec<Constraint> {
    let one = Q::one();
    vec![
        Constraint::new("OA: 1/q >= 0", vec![Q::zero(), -one], Q::zero(), false),
        Constraint::new("AP: 1/p <= d/q + 1/r", vec![one, -d], rho, false),
        Constraint::new(
            "PQ: 1/p <= (d-1)/((d+1)q) + 2/((d+1)r) + (d-1)/(d+1)",
            vec![one, -(d - one) / (d + one)],
            (qi(2) * rho + d - one) / (d + one),
            false,
        ),
        Constraint::new("QR: 1/p <= (d-1)/d + 1/(dr)", vec![one, Q::zero()], (d - one + rho) / d, false),
        Constraint::new("RO: 1/q <= 1/p", vec![-one, one], Q::zero(), false),
    ]
}

/// Facets of the diagonal (`p1 = p2`) slice in `(1/p1, 1/p)` coordinates.
fn slicing_diag_constraints(d: Q) -> Vec<Constraint> {
    let one = Q::one();
    let two = qi(2);
    let dd = d * d;
    vec![
        Constraint::new("OA: 1/p >= 0", vec![Q::zero(), -one], Q::zero(), false),
        Constraint::new("AEF: 2/p1 <= 1 + d/p", vec![two, -d], one, false),
        Constraint::new(
            "FC: 2/p1 <= (2d-1)/((2d+1)p) + 2(2d-1)/(2d+1)",
            vec![two, -(two * d - one) / (two * d + one)],
            two * (two * d - one) / (two * d + one),
            false,
        ),
        Constraint::new(
            "F: (4d^2+2d+4)/p1 <= (2d^2+d)/p + 4d^2-2d+2",
            vec![qi(4) * dd + two * d + qi(4), -(two * dd + d)],
            qi(4) * dd - two * d + two,
            false,
        ),
        Constraint::new("CD: 2/p1 <= (2d-1)/d", vec![two, Q::zero()], (two * d - one) / d, false),
        Constraint::new("DO: 1/p <= 2/p1", vec![-two, one], Q::zero(), false),
        Constraint::new("EC: 2/p1 <= 1/p + 2(d-1)/d", vec![two, -one], two * (d - one) / d, false),
        Constraint::new(
            "B'C: 2/p1 <= (d-1)/((d+1)p) + 2d/(d+1)",
            vec![two, -(d - one) / (d + one)],
            two * d / (d + one),
            false,
        ),
    ]
}

/// Named facets with the vertices lying on each; used by the
/// golden incidence tests.
pub fn facets(theorem: TheoremId, d: u32, r: Option<Exponent>) -> Result<Vec<(Constraint, Vec<&'static str>)>> {
    match theorem {
        TheoremId::LinearAr => {
            let rho = ExponentPoint::new(vec![], d, r).rho()?;
            let inc: [&[&'static str]; 5] = [&["O", "A"], &["A", "P"], &["P", "Q"], &["Q", "R"], &["R", "O"]];
            Ok(linear_ar_constraints(need_d(d, 2)?, rho).into_iter().zip(inc.iter().map(|s| s.to_vec())).collect())
        }
        TheoremId::SlicedImproving => {
            let inc: [&[&'static str]; 8] = [
                &["O", "A"],
                &["A", "E", "F", "B'"],
                &["F", "C"],
                &["F"],
                &["C", "D"],
                &["D", "O"],
                &["E", "C"],
                &["B'", "C"],
            ];
            Ok(slicing_diag_constraints(need_d(d, 2)?).into_iter().zip(inc.iter().map(|s| s.to_vec())).collect())
        }
        _ => domain(format!("no facet list for {theorem}")),
    }
}

/// Exact convex hull in the plane (monotone chain), counter-clockwise,
/// without repeated or collinear points.
pub fn hull2(points: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut pts: Vec<Vec<Q>> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: &Vec<Q>, a: &Vec<Q>, b: &Vec<Q>| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<Vec<Q>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= Q::zero() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<Q>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= Q::zero() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// Position of `x` relative to the convex hull of `points` in the plane.
fn hull_membership(points: &[Vec<Q>], x: &[Q]) -> Membership {
    let h = hull2(points);
    match h.len() {
        0 => Membership::Outside,
        1 => {
            if h[0] == x {
                Membership::Boundary
            } else {
                Membership::Outside
            }
        }
        2 => {
            if on_segment(&h[0], &h[1], x) {
                Membership::Boundary
            } else {
                Membership::Outside
            }
        }
        n => {
            let mut boundary = false;
            for i in 0..n {
                let (a, b) = (&h[i], &h[(i + 1) % n]);
                let c = (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]);
                if c < Q::zero() {
                    return Membership::Outside;
                }
                if c == Q::zero() {
                    boundary = true;
                }
            }
            if boundary {
                Membership::Boundary
            } else {
                Membership::Interior
            }
        }
    }
}

/// `x` on the closed segment `[a, b]`.
pub fn on_segment(a: &[Q], b: &[Q], x: &[Q]) -> bool {
    let c = (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]);
    if c != Q::zero() {
        return false;
    }
    (0..2).all(|k| {
        let (lo, hi) = if a[k] <= b[k] { (a[k], b[k]) } else { (b[k], a[k]) };
        x[k] >= lo && x[k] <= hi
    })
}

fn on_open_segment(a: &[Q], b: &[Q], x: &[Q]) -> bool {
    on_segment(a, b, x) && x != a && x != b
}

/// Facet planes of the convex hull of points in `R^3`, as `n·x <= c`, by
/// testing all triples (the vertex sets here are tiny).
pub fn hull3_planes(points: &[Vec<Q>]) -> Vec<(Vec<Q>, Q)> {
    let mut planes: Vec<(Vec<Q>, Q)> = Vec::new();
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (&points[i], &points[j], &points[k]);
                let u: Vec<Q> = (0..3).map(|t| b[t] - a[t]).collect();
                let w: Vec<Q> = (0..3).map(|t| c[t] - a[t]).collect();
                let mut nrm = vec![u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]];
                if nrm.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let mut off: Q = (0..3).map(|t| nrm[t] * a[t]).sum();
                let side: Vec<Q> = points.iter().map(|p| (0..3).map(|t| nrm[t] * p[t]).sum::<Q>() - off).collect();
                let pos = side.iter().any(|s| *s > Q::zero());
                let neg = side.iter().any(|s| *s < Q::zero());
                if pos && neg {
                    continue;
                }
                if pos {
                    nrm.iter_mut().for_each(|x| *x = -*x);
                    off = -off;
                }
                // Normalize so duplicates compare equal.
                let scale = nrm.iter().chain(std::iter::once(&off)).find(|x| !x.is_zero()).map(|x| x.abs()).unwrap();
                let nrm: Vec<Q> = nrm.iter().map(|x| x / scale).collect();
                let off = off / scale;
                if !planes.iter().any(|(m, c)| *m == nrm && *c == off) {
                    planes.push((nrm, off));
                }
            }
        }
    }
    planes
}

fn in_hull3(points: &[Vec<Q>], x: &[Q]) -> bool {
    hull3_planes(points)
        .iter()
        .all(|(n, c)| (0..3).map(|t| n[t] * x[t]).sum::<Q>() <= *c)
}

struct Builder {
    theorem: TheoremId,
    point: Vec<String>,
}

impl Builder {
    fn done(&self, verdict: Verdict, citations: &[&str]) -> VerdictRecord {
        VerdictRecord {
            theorem: self.theorem.name().to_string(),
            point: self.point.clone(),
            verdict,
            citations: citations.iter().map(|s| s.to_string()).collect(),
            delta_power: None,
        }
    }
}

fn incompatible<T>(msg: impl Into<String>) -> Result<T> {
    Err(crate::Error::Domain(format!("incompatible point: {}", msg.into())))
}

fn check_unit(x: &[Q]) -> Result<()> {
    if x.iter().any(|c| *c < Q::zero() || *c > Q::one()) {
        return incompatible("reciprocal exponents must lie in [0, 1]");
    }
    Ok(())
}

/// Split a multilinear point into reciprocal inputs and `1/p`. Accepts
/// either `m` coordinates (Hölder `1/p` implied) or `m + 1` with the last
/// equal to the sum.
fn holder_split(pt: &ExponentPoint, m: usize) -> Result<(Vec<Q>, Q)> {
    let c = &pt.coords;
    let inputs = if c.len() == m {
        c.clone()
    } else if c.len() == m + 1 {
        c[..m].to_vec()
    } else {
        return incompatible(format!("expected {m} or {} coordinates, got {}", m + 1, c.len()));
    };
    check_unit(&inputs)?;
    let s: Q = inputs.iter().sum();
    if c.len() == m + 1 && c[m] != s {
        return incompatible("1/p must equal 1/p1 + 1/p2 for this theorem");
    }
    Ok((inputs, s))
}

fn three(pt: &ExponentPoint) -> Result<(Q, Q, Q)> {
    if pt.coords.len() != 3 {
        return incompatible("expected (1/p1, 1/p2, 1/p)");
    }
    let (a, b, z) = (pt.coords[0], pt.coords[1], pt.coords[2]);
    check_unit(&[a, b])?;
    if z < Q::zero() {
        return incompatible("1/p must be nonnegative");
    }
    Ok((a, b, z))
}

fn two(pt: &ExponentPoint) -> Result<(Q, Q)> {
    if pt.coords.len() != 2 {
        return incompatible("expected (1/p, 1/q)");
    }
    check_unit(&pt.coords)?;
    Ok((pt.coords[0], pt.coords[1]))
}

/// Classify an exponent point for a theorem, in exact arithmetic.
pub fn classify(pt: &ExponentPoint, theorem: TheoremId) -> Result<VerdictRecord> {
    let b = Builder { theorem, point: pt.labels() };
    match theorem {
        TheoremId::LinearAr => classify_linear_ar(pt, &b),
        TheoremId::LinearArStar => {
            let (x, y) = two(pt)?;
            if x != y {
                return incompatible("the maximal operator is classified on the diagonal 1/p = 1/q");
            }
            let d = need_d(pt.d, 2)?;
            let rho = pt.rho()?;
            let x0 = (d - Q::one() + rho) / d;
            Ok(if x < x0 {
                b.done(Verdict::Strong, &["linearArStar: bounded on L^p for p > dr/(dr-r+1)"])
            } else if x == x0 {
                if rho.is_zero() {
                    b.done(Verdict::Open, &["linearArStar: restricted weak type at the endpoint is stated only for r < inf"])
                } else {
                    b.done(Verdict::RestrictedWeak, &["linearArStar: restricted weak type (dr/(dr-r+1), dr/(dr-r+1)) for 1 <= r < inf"])
                }
            } else {
                b.done(Verdict::False, &["linearAr necessity: 1/p <= (d-1)/d + 1/(dr) fails, and the maximal operator dominates 𝔄^r"])
            })
        }
        TheoremId::LinearBr => classify_linear_br(pt, &b),
        TheoremId::Schlag => classify_schlag(pt, &b),
        TheoremId::SchlagSogge => {
            let (x, y) = two(pt)?;
            let d = need_d(pt.d, 2)?;
            let pts: Vec<Vec<Q>> = std::iter::once(vec![Q::zero(), Q::zero()])
                .chain(primed_vertices(d).into_iter().map(|(_, c)| c))
                .collect();
            Ok(match hull_membership(&pts, &[x, y]) {
                Membership::Interior => b.done(Verdict::Strong, &["schlagSogge: bounded in the interior of the hull of O, P', Q', R'"]),
                Membership::Boundary => b.done(Verdict::Open, &["schlagSogge: boundary resolved separately (Lee); not encoded here"]),
                Membership::Outside => b.done(Verdict::False, &["schlagSogge: unbounded outside the closed hull"]),
            })
        }
        TheoremId::FullMaximal => classify_full_maximal(pt, &b),
        TheoremId::DosidisRamos => classify_dosidis(pt, &b, false),
        TheoremId::Multilinear => classify_dosidis(pt, &b, true),
        TheoremId::JeongLee | TheoremId::SlicedImproving => classify_local_bilinear(pt, &b, theorem == TheoremId::SlicedImproving),
        TheoremId::Gikl | TheoremId::GiklPi => {
            let (x1, x2, z) = three(pt)?;
            let pi = theorem == TheoremId::GiklPi;
            let pts: Vec<Vec<Q>> = gikl_vertices(!pi).into_iter().map(|(_, c)| c).collect();
            let x = [x1, x2, z];
            if in_hull3(&pts, &x) {
                return Ok(b.done(Verdict::Strong, &["gikl: bounded on the closed convex hull of the listed vertices"]));
            }
            if z <= Q::one() {
                return Ok(b.done(Verdict::False, &["gikl: the hull is sharp in the range p >= 1"]));
            }
            if pi && qi(3) * (x1 + x2) > Q::one() + qi(3) * z {
                return Ok(b.done(Verdict::False, &["giklPi necessity: 3/p1 + 3/p2 <= 1 + 3/p fails"]));
            }
            Ok(b.done(Verdict::Open, &["gikl: unknown outside the hull for p < 1"]))
        }
        TheoremId::RotatedMaximal => {
            let (xs, z) = holder_split(pt, 2)?;
            let half = q(1, 2);
            if xs.iter().any(|x| *x == Q::one()) {
                return Ok(b.done(Verdict::Open, &["rotatedMaximal: stated for 1 < p1, p2"]));
            }
            Ok(if xs.iter().any(|x| *x >= half) {
                b.done(Verdict::False, &["rotatedMaximal: not of restricted weak type when p1 <= 2 or p2 <= 2"])
            } else if z < half {
                b.done(Verdict::Strong, &["rotatedMaximal: bounded for 2 < p <= inf by interpolation with the linear maximal function"])
            } else {
                b.done(Verdict::Open, &["rotatedMaximal: no result in the local L^2 range p1, p2 > 2, 1 < p <= 2"])
            })
        }
        TheoremId::Linearized => {
            let (xs, _) = holder_split(pt, 2)?;
            let half = q(1, 2);
            Ok(if xs.iter().all(|x| *x < half) {
                b.done(Verdict::Strong, &["linearized: bounded for 2 < p1, p2 <= inf (finite beta integral)"])
            } else if (xs[0] == half && xs[1] <= half) || (xs[1] == half && xs[0] <= half) {
                b.done(Verdict::RestrictedWeak, &["linearized: restricted weak type when p1 = 2 or p2 = 2"])
            } else {
                b.done(Verdict::Open, &["linearized: not claimed for p1 < 2 or p2 < 2"])
            })
        }
        TheoremId::ProductNecessary | TheoremId::ImprovingNecessary => {
            let checks = necessary_gap(pt, theorem)?;
            Ok(if checks.iter().all(|c| c.satisfied) {
                b.done(Verdict::Open, &["necessary conditions hold; sufficiency not claimed"])
            } else {
                let mut rec = b.done(Verdict::False, &[]);
                rec.citations = checks.iter().filter(|c| !c.satisfied).map(|c| format!("{theorem}: {} fails", c.name)).collect();
                rec
            })
        }
    }
}

fn classify_linear_ar(pt: &ExponentPoint, b: &Builder) -> Result<VerdictRecord> {
    let (x, y) = two(pt)?;
    let d = need_d(pt.d, 2)?;
    let rho = pt.rho()?;
    let verts = linear_ar_vertices(d, rho);
    let get = |n: &str| verts.iter().find(|(m, _)| m == n).unwrap().1.clone();
    let (p, qv, r) = (get("P"), get("Q"), get("R"));
    let xy = vec![x, y];
    for (name, c) in [("P", &p), ("Q", &qv), ("R", &r)] {
        if *c == xy {
            let cite = format!("linearAr: restricted weak type L^(p,1) -> L^(q,inf) at {name}");
            return Ok(b.done(Verdict::RestrictedWeak, &[cite.as_str()]));
        }
    }
    if on_open_segment(&qv, &r, &xy) {
        return Ok(b.done(
            Verdict::RestrictedStrong,
            &[
                "linearAr: restricted strong type L^(p,1) -> L^q on the open segment QR",
                "dyadic-sum example: no bound from L^(dr/(dr-r+1),s), s > 1, so strong type fails on QR",
            ],
        ));
    }
    let cons = linear_ar_constraints(d, rho);
    let failed: Vec<String> = cons.iter().filter(|c| !c.satisfied(&xy)).map(|c| format!("linearAr necessity: {} fails", c.name)).collect();
    if failed.is_empty() {
        Ok(b.done(Verdict::Strong, &["linearAr: L^p -> L^q bounded on the closed hull of O, A, P, Q, R minus P, Q, R and QR"]))
    } else {
        let mut rec = b.done(Verdict::False, &[]);
        rec.citations = failed;
        Ok(rec)
    }
}

fn delta_power(label: &str, value: Q) -> Option<String> {
    Some(format!("{label} = {value}"))
}

fn classify_linear_br(pt: &ExponentPoint, b: &Builder) -> Result<VerdictRecord> {
    let (x, y) = two(pt)?;
    let d = need_d(pt.d, 2)?;
    let rho = pt.rho()?;
    let mut vs = linear_ar_vertices(d, rho);
    vs.extend(primed_vertices(d));
    let get = |n: &str| vs.iter().find(|(m, _)| m == n).unwrap().1.clone();
    let (o, a, p, qv, r) = (get("O"), get("A"), get("P"), get("Q"), get("R"));
    let (p1, q1, r1) = (get("P'"), get("Q'"), get("R'"));
    let xy = vec![x, y];
    let one = Q::one();
    let half = q(1, 2);
    let rec = |verdict: Verdict, cite: &str, power: Option<String>| {
        let mut out = b.done(verdict, &[cite]);
        out.delta_power = power;
        out
    };
    if hull_membership(&[o.clone(), p1.clone(), q1.clone(), r1.clone()], &xy) == Membership::Interior {
        return Ok(rec(Verdict::Strong, "linearBr (1): A_δ = 1 on the open hull of O, P', Q', R'", delta_power("δ-power", Q::zero())));
    }
    if hull_membership(&[o.clone(), a, p.clone(), p1.clone()], &xy) != Membership::Outside && xy != p {
        return Ok(rec(Verdict::Strong, "linearBr (2): A_δ = δ^(d/q - 1/p) on the hull of O, A, P, P' minus P", delta_power("δ-power", d * y - x)));
    }
    if hull_membership(&[p.clone(), qv.clone(), q1.clone(), p1], &xy) != Membership::Outside && xy != p && xy != qv {
        let e = half * (d - one + (d - one) * y - (d + one) * x);
        return Ok(rec(Verdict::Strong, "linearBr (3): A_δ = δ^((d-1+(d-1)/q-(d+1)/p)/2) on the hull of P, Q, Q', P' minus P, Q", delta_power("δ-power", e)));
    }
    if hull_membership(&[qv.clone(), r.clone(), r1, q1], &xy) != Membership::Outside && !on_segment(&qv, &r, &xy) {
        return Ok(rec(Verdict::Strong, "linearBr (4): A_δ = δ^(d-1-d/p) on the hull of Q, R, R', Q' minus the segment QR", delta_power("δ-power", d - one - d * x)));
    }
    if linear_ar_constraints(d, rho).iter().all(|c| c.satisfied(&xy)) {
        return Ok(rec(Verdict::Open, "linearBr: point of the 𝔄^r range not covered by the four stated parts", None));
    }
    Ok(rec(Verdict::False, "linearBr: range of boundedness equals that of 𝔄^r", None))
}

fn classify_schlag(pt: &ExponentPoint, b: &Builder) -> Result<VerdictRecord> {
    if pt.d != 2 {
        return incompatible("this family is planar");
    }
    let (x, y) = two(pt)?;
    let xy = vec![x, y];
    let o = vec![qi(0), qi(0)];
    let e1 = vec![qi(1), qi(0)];
    let e2 = vec![qi(1), qi(1)];
    let s = vec![q(2, 5), q(1, 5)];
    let h = vec![q(1, 2), q(1, 2)];
    let one = Q::one();
    let rec = |verdict: Verdict, cite: &str, power: Option<String>| {
        let mut out = b.done(verdict, &[cite]);
        out.delta_power = power;
        out
    };
    if hull_membership(&[o.clone(), s.clone(), h.clone()], &xy) == Membership::Interior {
        return Ok(rec(Verdict::Strong, "schlag (1): A_δ = 1 on the open hull of (0,0), (2/5,1/5), (1/2,1/2)", delta_power("δ-power", Q::zero())));
    }
    if hull_membership(&[o, e1.clone(), s.clone()], &xy) != Membership::Outside {
        return Ok(rec(Verdict::Strong, "schlag (2): A_δ = C_ε δ^(2/q - 1/p - ε)", delta_power("δ-power (+ε loss)", qi(2) * y - x)));
    }
    if hull_membership(&[s, e1.clone(), h.clone()], &xy) != Membership::Outside {
        return Ok(rec(Verdict::Strong, "schlag (3): A_δ = C_ε δ^((1 + 1/q - 3/p)/2 - ε)", delta_power("δ-power (+ε loss)", q(1, 2) * (one + y - qi(3) * x))));
    }
    if hull_membership(&[h, e1, e2], &xy) != Membership::Outside {
        return Ok(rec(Verdict::Strong, "schlag (4): A_δ = δ^(1 - 2/p)", delta_power("δ-power", one - qi(2) * x)));
    }
    if y <= x {
        return Ok(rec(Verdict::Open, "schlag: point on the diagonal not covered by the four parts", None));
    }
    Ok(rec(Verdict::False, "translation invariance: 1/q <= 1/p is necessary", None))
}

fn classify_full_maximal(pt: &ExponentPoint, b: &Builder) -> Result<VerdictRecord> {
    let (xs, z) = holder_split(pt, 2)?;
    let half = q(1, 2);
    match pt.d {
        1 => {
            let on_u = |a: Q, c: Q| a == half && c <= half;
            if on_u(xs[0], xs[1]) || on_u(xs[1], xs[0]) {
                return Ok(b.done(
                    Verdict::RestrictedWeak,
                    &["fullMaximal (d = 1): restricted weak type on U1U2 ∪ U2U3 (p1 = 2 or p2 = 2, 1 <= p <= inf)"],
                ));
            }
            let inner = ExponentPoint::new(xs, 2, None);
            let mut rec = classify_dosidis(&inner, b, false)?;
            rec.point = pt.labels();
            Ok(rec)
        }
        2 => {
            let corners = [vec![qi(1), qi(0)], vec![qi(0), qi(1)]];
            if corners.contains(&xs) {
                return Ok(b.done(Verdict::False, &["full bilinear maximal function: strong type fails at (1, inf, 1) and (inf, 1, 1)"]));
            }
            if z < q(3, 2) {
                return Ok(b.done(Verdict::Strong, &["full bilinear maximal function: strong type for p > d/(2d-1)"]));
            }
            if z == q(3, 2) {
                if xs.iter().all(|x| *x > half && *x < Q::one()) {
                    return Ok(b.done(
                        Verdict::RestrictedWeak,
                        &["fullMaximal (d = 2): L^(p1,1) x L^(p2,1) -> L^(2/3,inf) for 1 < p1, p2 < 2 (open segment V1V2)"],
                    ));
                }
                return Ok(b.done(Verdict::Open, &["fullMaximal (d = 2): endpoints V1, V2 are excluded"]));
            }
            Ok(b.done(Verdict::False, &["full bilinear maximal function: bounded only if p >= d/(2d-1)"]))
        }
        d => {
            let d = qi(d as i64);
            let top = (qi(2) * d - Q::one()) / d;
            Ok(if z < top {
                b.done(Verdict::Strong, &["full bilinear maximal function: strong type for p > d/(2d-1)"])
            } else if z == top {
                b.done(Verdict::RestrictedWeak, &["full bilinear maximal function: restricted weak type at p = d/(2d-1) for d >= 3"])
            } else {
                b.done(Verdict::False, &["full bilinear maximal function: bounded only if p >= d/(2d-1)"])
            })
        }
    }
}

fn classify_dosidis(pt: &ExponentPoint, b: &Builder, segments: bool) -> Result<VerdictRecord> {
    let m = pt.coords.len();
    if m < 2 {
        return incompatible("need at least two exponents");
    }
    let (xs, z) = holder_split(pt, m)?;
    let mq = qi(m as i64);
    let half = q(1, 2);
    if segments {
        for k in 0..m {
            for j in 0..m {
                if j == k {
                    continue;
                }
                let ok = xs[k] >= Q::zero()
                    && xs[k] <= half
                    && xs[j] == half
                    && (0..m).filter(|i| *i != k && *i != j).all(|i| xs[i] == Q::one());
                if ok {
                    return Ok(b.done(Verdict::RestrictedWeak, &["multilinear: restricted weak type on the closed segments L_{k,j}"]));
                }
            }
        }
    }
    let c1 = z < mq - Q::one();
    let edge = (0..m).any(|i| z - xs[i] == mq - q(3, 2));
    let c2 = (0..m).all(|i| z - xs[i] < mq - q(3, 2));
    let corner = xs.iter().all(|x| x.is_zero() || *x == Q::one()) && xs.iter().any(|x| *x == Q::one());
    if edge {
        return Ok(b.done(Verdict::False, &["dosidisRamos: if some sum_{j != i} 1/p_j = m - 3/2, even L^p -> L^(p,inf) fails"]));
    }
    if c1 && c2 && !corner {
        return Ok(b.done(Verdict::Strong, &["dosidisRamos: strong type iff 1/p < m-1, sum_{j != i} 1/p_j < m-3/2, and not a 0/1 corner"]));
    }
    if c1 && c2 && corner {
        return Ok(b.done(Verdict::Weak, &["dosidisRamos: weak type at the 0/1 corners satisfying the two inequalities"]));
    }
    Ok(b.done(Verdict::False, &["dosidisRamos: necessary inequalities 1/p < m-1 or sum_{j != i} 1/p_j < m-3/2 fail"]))
}

fn classify_local_bilinear(pt: &ExponentPoint, b: &Builder, improved: bool) -> Result<VerdictRecord> {
    let (x1, x2, z) = three(pt)?;
    let d = need_d(pt.d, 2)?;
    let one = Q::one();
    let two = qi(2);
    let s = x1 + x2;
    if z >= two {
        return incompatible("need 1/2 < p");
    }
    if z.is_zero() {
        return Ok(if s <= one {
            b.done(Verdict::Strong, &["jeongLee: for p = inf bounded iff 1/p1 + 1/p2 <= 1"])
        } else {
            b.done(Verdict::False, &["jeongLee: for p = inf bounded iff 1/p1 + 1/p2 <= 1"])
        });
    }
    let cd = (two * d - one) / d;
    let jl = z <= s && s < cd && s < one + d * z && s < z + two * (d - one) / d;
    let dd = d * d;
    let a = two * dd + d;
    let imp = z <= s
        && s < cd
        && s < one + d * z
        && s < (two * d - one) * z / (two * d + one) + two * (two * d - one) / (two * d + one)
        && (a + qi(4)) * x1 + a * x2 < a * z + qi(4) * dd - two * d + two
        && a * x1 + (a + qi(4)) * x2 < a * z + qi(4) * dd - two * d + two;
    if jl {
        return Ok(b.done(Verdict::Strong, &["jeongLee: 1/p <= 1/p1 + 1/p2 < min{(2d-1)/d, 1 + d/p, 1/p + 2(d-1)/d}"]));
    }
    if improved && imp {
        return Ok(b.done(Verdict::Strong, &["slicedImproving: conditions (1)-(3) hold"]));
    }
    let checks = necessary_gap(pt, TheoremId::JeongLee)?;
    if checks.iter().all(|c| c.satisfied) {
        return Ok(b.done(Verdict::Open, &["local bilinear maximal function: necessary conditions hold, sufficiency unknown (includes the triangle FB'C)"]));
    }
    let mut rec = b.done(Verdict::False, &[]);
    rec.citations = checks.iter().filter(|c| !c.satisfied).map(|c| format!("{}: {} fails", b.theorem, c.name)).collect();
    Ok(rec)
}

fn check(name: &str, lhs: Q, rhs: Q) -> NecessaryCheck {
    NecessaryCheck { name: name.to_string(), lhs: lhs.to_string(), rhs: rhs.to_string(), satisfied: lhs <= rhs, boundary: lhs == rhs }
}

/// Evaluate every necessary inequality attached to `theorem` at the point.
/// Theorems without stated necessary conditions return an empty list.
pub fn necessary_gap(pt: &ExponentPoint, theorem: TheoremId) -> Result<Vec<NecessaryCheck>> {
    let one = Q::one();
    Ok(match theorem {
        TheoremId::LinearAr | TheoremId::LinearBr => {
            let (x, y) = two(pt)?;
            let d = need_d(pt.d, 2)?;
            let rho = pt.rho()?;
            let knapp = (d - one) / (d + one) * y + qi(2) * rho / (d + one) + (d - one) / (d + one);
            vec![
                check("1/q <= 1/p", y, x),
                check("1/p <= d/q + 1/r", x, d * y + rho),
                check("1/p <= (d-1)/d + 1/(dr)", x, (d - one + rho) / d),
                check("1/p <= (d-1)/((d+1)q) + 2/((d+1)r) + (d-1)/(d+1)", x, knapp),
            ]
        }
        TheoremId::JeongLee | TheoremId::SlicedImproving => {
            let (x1, x2, z) = three(pt)?;
            let d = need_d(pt.d, 2)?;
            let s = x1 + x2;
            vec![
                check("1/p <= 1/p1 + 1/p2", z, s),
                check("1/p1 + 1/p2 <= (2d-1)/d", s, (qi(2) * d - one) / d),
                check("1/p1 + 1/p2 <= 1 + d/p", s, one + d * z),
                check("1/p1 + 1/p2 <= (d-1)/((d+1)p) + 2d/(d+1)", s, (d - one) * z / (d + one) + qi(2) * d / (d + one)),
            ]
        }
        TheoremId::ProductNecessary => {
            let (x1, x2, z) = three(pt)?;
            let d = need_d(pt.d, 2)?;
            vec![check("(d+1)/p1 + (d+1)/p2 <= d-1 + (d+1)/p", (d + one) * (x1 + x2), d - one + (d + one) * z)]
        }
        TheoremId::ImprovingNecessary => {
            let (x1, x2, z) = three(pt)?;
            let d = need_d(pt.d, 2)?;
            vec![
                check("d/p1 + 1/p2 <= 1 + 1/p", d * x1 + x2, one + z),
                check("1/p1 + d/p2 <= 1 + 1/p", x1 + d * x2, one + z),
                check("1/p <= 1/p1 + 1/p2", z, x1 + x2),
                check("1/p1 + 1/p2 <= d/p", x1 + x2, d * z),
            ]
        }
        TheoremId::GiklPi => {
            let (x1, x2, z) = three(pt)?;
            vec![check("3/p1 + 3/p2 <= 1 + 3/p", qi(3) * (x1 + x2), one + qi(3) * z)]
        }
        _ => Vec::new(),
    })
}

/// Product-type necessary condition for a split `d = d1 + d2`:
/// `(d2+2)/(2 p1) + (d2+2)/(2 p2) <= d2/2 + (2 d1 + d2)/(2 p)`.
pub fn product_split_check(x1: Q, x2: Q, z: Q, d1: u32, d2: u32) -> NecessaryCheck {
    let (a, b) = (qi(d1 as i64), qi(d2 as i64));
    let two = qi(2);
    check(
        "(d2+2)/(2p1) + (d2+2)/(2p2) <= d2/2 + (2d1+d2)/(2p)",
        (b + two) / two * (x1 + x2),
        b / two + (two * a + b) / two * z,
    )
}

/// Hull vertices as CSV rows `name,coord...` for plotting.
pub fn hull_csv(theorem: TheoremId, d: u32, r: Option<Exponent>) -> Result<String> {
    let mut out = String::from("name,x,y,z\n");
    for (name, c) in vertex_table(theorem, d, r)? {
        let cs: Vec<String> = c.iter().map(|v| v.to_string()).collect();
        let pad = if cs.len() == 2 { ",".to_string() } else { String::new() };
        out.push_str(&format!("{name},{}{pad}\n", cs.join(",")));
    }
    Ok(out)
}
