//! Function carriers (grid, radial, level-set) and Lebesgue / Lorentz norms.

use crate::quad::{sphere_area, SphereRule};
use crate::{domain, pairwise_sum, Error, Result};
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

pub type Q = Ratio<i64>;

/// An exponent in `[1, inf]` (or any nonnegative rational where a routine allows it).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exponent {
    Finite(Q),
    Infinite,
}

impl Exponent {
    pub fn int(n: i64) -> Self {
        Exponent::Finite(Q::from_integer(n))
    }
    pub fn frac(a: i64, b: i64) -> Self {
        Exponent::Finite(Q::new(a, b))
    }
    pub fn to_f64(self) -> f64 {
        match self {
            Exponent::Finite(q) => q.to_f64().unwrap(),
            Exponent::Infinite => f64::INFINITY,
        }
    }
    /// `1/p`, with `1/inf = 0`.
    pub fn recip(self) -> Q {
        match self {
            Exponent::Finite(q) => q.recip(),
            Exponent::Infinite => Q::zero(),
        }
    }
    pub fn from_recip(r: Q) -> Self {
        if r.is_zero() {
            Exponent::Infinite
        } else {
            Exponent::Finite(r.recip())
        }
    }
    /// Hölder conjugate.
    pub fn conjugate(self) -> Self {
        Exponent::from_recip(Q::from_integer(1) - self.recip())
    }
    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(q) => write!(f, "{q}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "∞") {
            return Ok(Exponent::Infinite);
        }
        let bad = || Error::Domain(format!("cannot parse exponent '{s}'"));
        let q = match s.split_once('/') {
            Some((a, b)) => {
                let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                if b == 0 {
                    return Err(bad());
                }
                Q::new(a, b)
            }
            None => Q::from_integer(s.parse().map_err(|_| bad())?),
        };
        Ok(Exponent::Finite(q))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LorentzParams {
    pub p: Exponent,
    pub q: Exponent,
}

impl LorentzParams {
    pub fn new(p: Exponent, q: Exponent) -> Result<Self> {
        for e in [p, q] {
            if let Exponent::Finite(v) = e {
                if v < Q::from_integer(1) {
                    return domain(format!("Lorentz exponents must be >= 1, got {v}"));
                }
            }
        }
        Ok(LorentzParams { p, q })
    }
}

/// Anything that can be averaged over spheres.
pub trait Field: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> f64;
    /// Fails when averaging up to radius `rad` would need values the
    /// carrier does not hold.
    fn check_radius(&self, _rad: f64) -> Result<()> {
        Ok(())
    }
    /// Closed-form normalized spherical average, when the carrier has one.
    fn exact_sphere_average(&self, _x: &[f64], _t: f64) -> Option<f64> {
        None
    }
    /// Radii in `(lo, hi)` where `t -> A_t f(x)` is not smooth.
    fn t_breaks(&self, _x: &[f64], _lo: f64, _hi: f64) -> Vec<f64> {
        Vec::new()
    }
    fn as_radial(&self) -> Option<&RadialProfile> {
        None
    }
}

/// Closure-backed field for analytic test functions.
pub struct FnField<F: Fn(&[f64]) -> f64 + Sync> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> Field for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

/// `amp * exp(-a |x - c|^2)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Gaussian {
    pub center: Vec<f64>,
    pub a: f64,
    pub amp: f64,
}

impl Field for Gaussian {
    fn dim(&self) -> usize {
        self.center.len()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum();
        self.amp * (-self.a * r2).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interp {
    Multilinear,
    /// Piecewise constant on cells.
    Nearest,
}

/// Cell-centred samples on an axis-aligned box, zero outside it.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    dim: usize,
    lo: Vec<f64>,
    h: Vec<f64>,
    shape: Vec<usize>,
    values: Vec<f64>,
    support: Option<(Vec<f64>, Vec<f64>)>,
    pub interp: Interp,
}

impl GridFunction {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, shape: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let dim = lo.len();
        if !(1..=3).contains(&dim) || hi.len() != dim || shape.len() != dim {
            return domain("grid functions need 1 <= d <= 3 and consistent box/shape");
        }
        if shape.iter().product::<usize>() != values.len() || shape.contains(&0) {
            return domain("value array does not match grid shape");
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(b > a)) {
            return domain("empty box");
        }
        if values.iter().any(|v| !v.is_finite()) {
            return domain("non-finite grid value");
        }
        let h = (0..dim).map(|i| (hi[i] - lo[i]) / shape[i] as f64).collect();
        let mut g = GridFunction { dim, lo, h, shape, values, support: None, interp: Interp::Multilinear };
        g.support = g.compute_support();
        Ok(g)
    }

    /// Samples `f` at cell centres.
    pub fn from_fn(lo: &[f64], hi: &[f64], shape: &[usize], f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let d = lo.len();
        let n: usize = shape.iter().product();
        let mut values = Vec::with_capacity(n);
        let mut x = vec![0.0; d];
        for flat in 0..n {
            let mut rem = flat;
            for k in (0..d).rev() {
                let i = rem % shape[k];
                rem /= shape[k];
                x[k] = lo[k] + (i as f64 + 0.5) * (hi[k] - lo[k]) / shape[k] as f64;
            }
            values.push(f(&x));
        }
        GridFunction::new(lo.to_vec(), hi.to_vec(), shape.to_vec(), values)
    }

    pub fn with_interp(mut self, interp: Interp) -> Self {
        self.interp = interp;
        self
    }
    pub fn lo(&self) -> &[f64] {
        &self.lo
    }
    pub fn hi(&self) -> Vec<f64> {
        (0..self.dim).map(|k| self.lo[k] + self.h[k] * self.shape[k] as f64).collect()
    }
    pub fn spacing(&self) -> &[f64] {
        &self.h
    }
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    /// Applies `op` to every value.
    pub fn map_values(&mut self, op: impl Fn(f64) -> f64) {
        self.values.iter_mut().for_each(|v| *v = op(*v));
        self.support = self.compute_support();
    }
    pub fn cell_volume(&self) -> f64 {
        self.h.iter().product()
    }
    pub fn center(&self, idx: &[usize]) -> Vec<f64> {
        (0..self.dim).map(|k| self.lo[k] + (idx[k] as f64 + 0.5) * self.h[k]).collect()
    }
    fn flat(&self, idx: &[isize]) -> Option<usize> {
        let mut f = 0usize;
        for k in 0..self.dim {
            if idx[k] < 0 || idx[k] as usize >= self.shape[k] {
                return None;
            }
            f = f * self.shape[k] + idx[k] as usize;
        }
        Some(f)
    }
    fn cell_value(&self, idx: &[isize]) -> f64 {
        self.flat(idx).map_or(0.0, |i| self.values[i])
    }

    /// Bounding box of the cells with nonzero value, as closed cell extents.
    pub fn support_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        self.support.clone()
    }

    fn compute_support(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let mut lo_i = self.shape.clone();
        let mut hi_i = vec![0usize; self.dim];
        let mut any = false;
        for (flat, v) in self.values.iter().enumerate() {
            if *v == 0.0 {
                continue;
            }
            any = true;
            let mut rem = flat;
            for k in (0..self.dim).rev() {
                let i = rem % self.shape[k];
                rem /= self.shape[k];
                lo_i[k] = lo_i[k].min(i);
                hi_i[k] = hi_i[k].max(i + 1);
            }
        }
        any.then(|| {
            (
                (0..self.dim).map(|k| self.lo[k] + lo_i[k] as f64 * self.h[k]).collect(),
                (0..self.dim).map(|k| self.lo[k] + hi_i[k] as f64 * self.h[k]).collect(),
            )
        })
    }

    pub fn write_binary(&self, mut w: impl Write) -> Result<()> {
        w.write_all(&(self.dim as u64).to_le_bytes())?;
        for v in self.lo.iter().chain(self.hi().iter()) {
            w.write_all(&v.to_le_bytes())?;
        }
        for s in &self.shape {
            w.write_all(&(*s as u64).to_le_bytes())?;
        }
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary(mut r: impl Read) -> Result<Self> {
        let mut b = [0u8; 8];
        let mut u = |r: &mut dyn Read| -> Result<[u8; 8]> {
            r.read_exact(&mut b).map_err(|e| Error::Format(format!("truncated grid file: {e}")))?;
            Ok(b)
        };
        let d = u64::from_le_bytes(u(&mut r)?) as usize;
        if !(1..=3).contains(&d) {
            return Err(Error::Format(format!("bad dimension {d}")));
        }
        let mut bx = Vec::with_capacity(2 * d);
        for _ in 0..2 * d {
            bx.push(f64::from_le_bytes(u(&mut r)?));
        }
        let mut shape = Vec::with_capacity(d);
        for _ in 0..d {
            shape.push(u64::from_le_bytes(u(&mut r)?) as usize);
        }
        let n: usize = shape.iter().product();
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            values.push(f64::from_le_bytes(u(&mut r)?));
        }
        GridFunction::new(bx[..d].to_vec(), bx[d..].to_vec(), shape, values)
    }

    /// CSV: a header row `d,lo..,hi..,shape..` then one value per row in
    /// row-major order.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut wr = csv::WriterBuilder::new().flexible(true).from_writer(w);
        let mut head = vec![self.dim.to_string()];
        head.extend(self.lo.iter().chain(self.hi().iter()).map(|v| format!("{v:e}")));
        head.extend(self.shape.iter().map(|s| s.to_string()));
        wr.write_record(&head).map_err(csv_err)?;
        for v in &self.values {
            wr.write_record([format!("{v:e}")]).map_err(csv_err)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv(r: impl Read) -> Result<Self> {
        let mut rd = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(r);
        let mut recs = rd.records();
        let head = recs.next().ok_or_else(|| Error::Format("empty csv".into()))?.map_err(csv_err)?;
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Format(format!("bad number '{s}'")));
        let d = num(&head[0])? as usize;
        if !(1..=3).contains(&d) || head.len() != 1 + 3 * d {
            return Err(Error::Format("bad csv header".into()));
        }
        let lo = (0..d).map(|k| num(&head[1 + k])).collect::<Result<Vec<_>>>()?;
        let hi = (0..d).map(|k| num(&head[1 + d + k])).collect::<Result<Vec<_>>>()?;
        let shape = (0..d).map(|k| num(&head[1 + 2 * d + k]).map(|v| v as usize)).collect::<Result<Vec<_>>>()?;
        let values = recs
            .map(|r| r.map_err(csv_err).and_then(|r| num(&r[0])))
            .collect::<Result<Vec<_>>>()?;
        GridFunction::new(lo, hi, shape, values)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

impl Field for GridFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        match self.interp {
            Interp::Nearest => {
                let mut idx = [0isize; 3];
                for k in 0..self.dim {
                    let u = (x[k] - self.lo[k]) / self.h[k];
                    if !(u >= 0.0) {
                        return 0.0;
                    }
                    idx[k] = u.floor() as isize;
                }
                self.cell_value(&idx[..self.dim])
            }
            Interp::Multilinear => {
                let mut base = [0isize; 3];
                let mut frac = [0.0f64; 3];
                for k in 0..self.dim {
                    let u = (x[k] - self.lo[k]) / self.h[k] - 0.5;
                    if !(u > -1.0 && u < self.shape[k] as f64) {
                        return 0.0;
                    }
                    let f = u.floor();
                    base[k] = f as isize;
                    frac[k] = u - f;
                }
                let mut acc = 0.0;
                for corner in 0..(1usize << self.dim) {
                    let mut w = 1.0;
                    let mut idx = [0isize; 3];
                    for k in 0..self.dim {
                        let bit = (corner >> k) & 1;
                        idx[k] = base[k] + bit as isize;
                        w *= if bit == 1 { frac[k] } else { 1.0 - frac[k] };
                    }
                    if w != 0.0 {
                        acc += w * self.cell_value(&idx[..self.dim]);
                    }
                }
                acc
            }
        }
    }

    fn check_radius(&self, rad: f64) -> Result<()> {
        let Some((slo, shi)) = &self.support else { return Ok(()) };
        let hi = self.hi();
        // Interpolation reaches half a cell past the support.
        for k in 0..self.dim {
            let pad = rad + if self.interp == Interp::Multilinear { 0.5 * self.h[k] } else { 0.0 };
            if slo[k] - pad < self.lo[k] - 1e-12 || shi[k] + pad > hi[k] + 1e-12 {
                let c: Vec<f64> = slo.iter().zip(shi.iter()).map(|(a, b)| 0.5 * (a + b)).collect();
                return Err(Error::Support { point: c, radius: rad });
            }
        }
        Ok(())
    }
}

/// Radial step function: value `values[i]` on `edges[i] <= |x| < edges[i+1]`,
/// zero beyond the last edge.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    dim: usize,
    edges: Vec<f64>,
    values: Vec<f64>,
    pub nonnegative: bool,
}

impl RadialProfile {
    pub fn shells(dim: usize, edges: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return domain("radial profiles need 1 <= d <= 3");
        }
        if edges.len() != values.len() + 1 || values.is_empty() {
            return domain("need one more edge than values");
        }
        if edges[0] < 0.0 || edges.windows(2).any(|w| !(w[1] > w[0])) {
            return domain("edges must be nonnegative and strictly increasing");
        }
        if values.iter().any(|v| !v.is_finite()) {
            return domain("non-finite profile value");
        }
        let nonnegative = values.iter().all(|v| *v >= 0.0);
        Ok(RadialProfile { dim, edges, values, nonnegative })
    }

    /// Samples `rho` at the midpoints of `n` equal shells on `[0, rmax]`.
    pub fn sampled(dim: usize, rmax: f64, n: usize, rho: impl Fn(f64) -> f64) -> Result<Self> {
        let edges: Vec<f64> = (0..=n).map(|i| rmax * i as f64 / n as f64).collect();
        let values = (0..n).map(|i| rho(0.5 * (edges[i] + edges[i + 1]))).collect();
        RadialProfile::shells(dim, edges, values)
    }

    /// Indicator of `{a <= |x| < b}`.
    pub fn annulus(dim: usize, a: f64, b: f64) -> Result<Self> {
        if a <= 0.0 {
            RadialProfile::shells(dim, vec![0.0, b], vec![1.0])
        } else {
            RadialProfile::shells(dim, vec![0.0, a, b], vec![0.0, 1.0])
        }
    }

    pub fn ball(dim: usize, r: f64) -> Result<Self> {
        RadialProfile::annulus(dim, 0.0, r)
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn profile(&self, r: f64) -> f64 {
        if r < self.edges[0] || r >= *self.edges.last().unwrap() {
            return 0.0;
        }
        let i = self.edges.partition_point(|e| *e <= r) - 1;
        self.values[i]
    }

    /// `f = sum_k c_k 1_{|y| < R_k}` with nonzero `c_k`.
    pub fn ball_decomposition(&self) -> Vec<(f64, f64)> {
        let n = self.values.len();
        let mut out = Vec::new();
        for k in 0..n {
            let next = if k + 1 < n { self.values[k + 1] } else { 0.0 };
            let c = self.values[k] - next;
            if c != 0.0 {
                out.push((self.edges[k + 1], c));
            }
        }
        // The inner edge removes the ball of radius edges[0].
        if self.edges[0] > 0.0 && self.values[0] != 0.0 {
            out.push((self.edges[0], -self.values[0]));
        }
        out
    }

    /// Normalized average over the sphere of radius `|x| + tau` centred at a
    /// point at distance `rx` from the origin; `tau` is passed separately so
    /// radii far below machine precision relative to `rx` stay resolved.
    pub fn sphere_average_offset(&self, rx: f64, tau: f64) -> f64 {
        self.ball_decomposition()
            .iter()
            .map(|&(rho, c)| c * ball_fraction(self.dim, rx, tau, rho))
            .sum()
    }
}

/// Fraction of the sphere `{x - t y}` (`t = rx + tau`, `|x| = rx`) that
/// lies in the open ball `B(0, rho)`, for the normalized measure on `S^{d-1}`.
pub fn ball_fraction(d: usize, rx: f64, tau: f64, rho: f64) -> f64 {
    let t = rx + tau;
    if t <= 0.0 {
        return if rx < rho { 1.0 } else { 0.0 };
    }
    if rx == 0.0 {
        return if t < rho { 1.0 } else { 0.0 };
    }
    // |x - t y|^2 = rx^2 + t^2 - 2 rx t u,  u = <x/|x|, y>.
    // Inside iff u > 1 - eps with eps = (rho^2 - tau^2) / (2 rx t).
    let eps = (rho - tau) * (rho + tau) / (2.0 * rx * t);
    if eps <= 0.0 {
        return 0.0;
    }
    if eps >= 2.0 {
        return 1.0;
    }
    match d {
        1 => {
            // Two points, u = 1 and u = -1.
            0.5
        }
        2 => {
            let phi = if eps <= 1.0 { 2.0 * (0.5 * eps).sqrt().asin() } else { (1.0 - eps).acos() };
            phi / PI
        }
        _ => 0.5 * eps,
    }
}

impl Field for RadialProfile {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, x: &[f64]) -> f64 {
        self.profile(x.iter().map(|c| c * c).sum::<f64>().sqrt())
    }
    fn exact_sphere_average(&self, x: &[f64], t: f64) -> Option<f64> {
        let rx = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        if self.dim == 1 {
            return Some(0.5 * (self.eval(&[x[0] - t]) + self.eval(&[x[0] + t])));
        }
        Some(self.sphere_average_offset(rx, t - rx))
    }
    fn t_breaks(&self, x: &[f64], lo: f64, hi: f64) -> Vec<f64> {
        let rx = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        let mut out: Vec<f64> = self
            .edges
            .iter()
            .flat_map(|e| [rx - e, rx + e, e - rx])
            .filter(|t| *t > lo && *t < hi)
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
    fn as_radial(&self) -> Option<&RadialProfile> {
        Some(self)
    }
}

/// Nonincreasing rearrangement as finitely many levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimpleFunction {
    levels: Vec<(f64, f64)>,
}

impl SimpleFunction {
    /// `levels` are `(value, measure)` pairs with strictly decreasing
    /// positive values and positive measures.
    pub fn new(levels: Vec<(f64, f64)>) -> Result<Self> {
        if levels.iter().any(|(v, m)| !(*v > 0.0) || !(*m > 0.0) || !v.is_finite() || !m.is_finite()) {
            return domain("levels need positive finite values and measures");
        }
        if levels.windows(2).any(|w| !(w[0].0 > w[1].0)) {
            return domain("level values must be strictly decreasing");
        }
        Ok(SimpleFunction { levels })
    }

    /// Merges arbitrary `(|value|, measure)` pairs into levels.
    pub fn from_pairs(mut pairs: Vec<(f64, f64)>) -> Self {
        pairs.retain(|(v, m)| *v != 0.0 && *m > 0.0);
        pairs.iter_mut().for_each(|p| p.0 = p.0.abs());
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut levels: Vec<(f64, f64)> = Vec::new();
        let mut run: Vec<f64> = Vec::new();
        for (v, m) in pairs {
            match levels.last_mut() {
                Some(last) if last.0 == v => run.push(m),
                _ => {
                    if let Some(last) = levels.last_mut() {
                        last.1 = pairwise_sum(&run);
                    }
                    run = vec![m];
                    levels.push((v, m));
                }
            }
        }
        if let Some(last) = levels.last_mut() {
            last.1 = pairwise_sum(&run);
        }
        SimpleFunction { levels }
    }

    pub fn levels(&self) -> &[(f64, f64)] {
        &self.levels
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return domain("scale must be positive");
        }
        Ok(SimpleFunction { levels: self.levels.iter().map(|(v, m)| (v * c, *m)).collect() })
    }
}

/// Carriers with a computable nonincreasing rearrangement.
pub trait Rearrange {
    fn rearrangement(&self) -> SimpleFunction;
}

impl Rearrange for SimpleFunction {
    fn rearrangement(&self) -> SimpleFunction {
        self.clone()
    }
}

impl Rearrange for GridFunction {
    fn rearrangement(&self) -> SimpleFunction {
        let vol = self.cell_volume();
        SimpleFunction::from_pairs(self.values.iter().map(|v| (*v, vol)).collect())
    }
}

impl Rearrange for RadialProfile {
    fn rearrangement(&self) -> SimpleFunction {
        let w = sphere_area(self.dim) / self.dim as f64;
        let d = self.dim as i32;
        SimpleFunction::from_pairs(
            self.values
                .iter()
                .enumerate()
                .map(|(i, v)| (*v, w * (self.edges[i + 1].powi(d) - self.edges[i].powi(d))))
                .collect(),
        )
    }
}

pub fn lp_norm(f: &impl Rearrange, p: Exponent) -> Result<f64> {
    let s = f.rearrangement();
    match p {
        Exponent::Infinite => Ok(s.levels.first().map_or(0.0, |l| l.0)),
        Exponent::Finite(q) => {
            if q < Q::from_integer(1) {
                return domain(format!("L^p needs p >= 1, got {q}"));
            }
            let pf = q.to_f64().unwrap();
            // Scaled by the top level so huge values do not overflow.
            let top = s.levels.first().map_or(1.0, |l| l.0);
            let terms: Vec<f64> = s.levels.iter().map(|(v, m)| (v / top).powf(pf) * m).collect();
            Ok(top * pairwise_sum(&terms).powf(1.0 / pf))
        }
    }
}

/// `|{ |f| > lambda }|`.
pub fn distribution_function(f: &impl Rearrange, lambda: f64) -> f64 {
    let s = f.rearrangement();
    let m: Vec<f64> = s.levels.iter().filter(|(v, _)| *v > lambda).map(|l| l.1).collect();
    pairwise_sum(&m)
}

/// `(int_0^inf (t^{1/p} f*(t))^q dt/t)^{1/q}`, evaluated in closed form on
/// the level decomposition.
pub fn lorentz_norm(f: &impl Rearrange, params: LorentzParams) -> Result<f64> {
    let s = f.rearrangement();
    let p = match params.p {
        Exponent::Infinite => {
            return match params.q {
                Exponent::Infinite => lp_norm(&s, Exponent::Infinite),
                _ => domain("L^{inf,q} with q < inf is trivial and not supported"),
            }
        }
        Exponent::Finite(p) => p.to_f64().unwrap(),
    };
    let mut cum = 0.0;
    match params.q {
        Exponent::Infinite => {
            let mut best = 0.0f64;
            for (v, m) in &s.levels {
                cum += m;
                best = best.max(v * cum.powf(1.0 / p));
            }
            Ok(best)
        }
        Exponent::Finite(q) => {
            let q = q.to_f64().unwrap();
            let r = q / p;
            let top = s.levels.first().map_or(1.0, |l| l.0);
            let mut terms = Vec::with_capacity(s.levels.len());
            for (v, m) in &s.levels {
                let prev = cum;
                cum += m;
                terms.push((v / top).powf(q) * (p / q) * (cum.powf(r) - prev.powf(r)));
            }
            Ok(top * pairwise_sum(&terms).powf(1.0 / q))
        }
    }
}

/// `M_p f(x) = sup_{I ∋ x} (|I|^{-1} int_I |f|^p)^{1/p}` over intervals whose
/// endpoints are cell boundaries or `x` itself. The grid is read as constant
/// on cells, for which this supremum is the supremum over all intervals.
pub fn hl_maximal(f: &GridFunction, p: Exponent, x: f64) -> Result<f64> {
    if f.dim != 1 {
        return domain("hl_maximal is one-dimensional");
    }
    let pf = match p {
        Exponent::Infinite => return domain("M_p needs finite p"),
        Exponent::Finite(q) if q < Q::from_integer(1) => return domain("M_p needs p >= 1"),
        Exponent::Finite(q) => q.to_f64().unwrap(),
    };
    let (lo, h, n) = (f.lo[0], f.h[0], f.shape[0]);
    // Cumulative integral of |f|^p at boundaries lo + i h, extended by zero.
    let mut cum = vec![0.0; n + 1];
    for i in 0..n {
        cum[i + 1] = cum[i] + f.values[i].abs().powf(pf) * h;
    }
    let big = |y: f64| -> f64 {
        let u = (y - lo) / h;
        if u <= 0.0 {
            return 0.0;
        }
        if u >= n as f64 {
            return cum[n];
        }
        let i = u.floor() as usize;
        cum[i] + (u - i as f64) * (cum[i + 1] - cum[i])
    };
    let mut lefts = vec![x];
    let mut rights = vec![x];
    for i in 0..=n {
        let b = lo + i as f64 * h;
        // Boundaries that coincide with x up to rounding would give 0/0.
        if b < x - 1e-9 * h {
            lefts.push(b);
        } else if b > x + 1e-9 * h {
            rights.push(b);
        }
    }
    let mut best = 0.0f64;
    for &a in &lefts {
        let fa = big(a);
        for &b in &rights {
            if b > a {
                best = best.max((big(b) - fa) / (b - a));
            }
        }
    }
    Ok(best.powf(1.0 / pf))
}

/// Normalized spherical average by quadrature (used when no closed form exists).
pub fn quadrature_average(f: &dyn Field, x: &[f64], t: f64, rule: &SphereRule) -> f64 {
    let d = x.len();
    let mut y = [0.0; 4];
    rule.integrate(|u| {
        for k in 0..d {
            y[k] = x[k] - t * u[k];
        }
        f.eval(&y[..d])
    })
}
