//! Littlewood–Paley multipliers `φ̂`, `ψ̂_{2^{-j}}`, the pieces `f * ψ_{2^{-j}}`
//! on planar grids, and radial (Hankel) evaluation of the kernels
//! `ψ_{2^{-j}} * dσ_t`.
//!
//! Frequencies are in cycles: `f̂(ξ) = ∫ f(x) e^{-2πi x·ξ} dx`, so the
//! normalized circle measure has `σ̂(ξ) = J_0(2π|ξ|)`.

use crate::funcspace::{Exponent, Field, GridFunction};
use crate::operators::{panel_nodes, RExponent};
use crate::quad::{gauss_legendre, SphereRule};
use crate::{domain, pairwise_sum, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::sync::OnceLock;

const BUMP_ORDER: usize = 16;

fn bump_nodes() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| gauss_legendre(BUMP_ORDER, -1.0, 1.0))
}

/// `∫_{-1}^{u} exp(-1/(1-s^2)) ds`, unnormalized. With `s = tanh(v)` the
/// integrand becomes `exp(-cosh^2 v) sech^2 v`, analytic and negligible for
/// `v < -4`, so unit Gauss panels are accurate to rounding.
fn bump_integral(u: f64) -> f64 {
    if u <= -1.0 {
        return 0.0;
    }
    let top = u.min(1.0 - 1e-16).atanh().min(4.0);
    let lo = -4.0;
    if top <= lo {
        return 0.0;
    }
    let m = (top - lo).ceil() as usize;
    let h = (top - lo) / m as f64;
    let mut terms = Vec::with_capacity(m * BUMP_ORDER);
    for i in 0..m {
        let c = lo + (i as f64 + 0.5) * h;
        for &(x, w) in bump_nodes() {
            let v = c + 0.5 * h * x;
            let ch = v.cosh();
            terms.push(0.5 * h * w * (-ch * ch).exp() / (ch * ch));
        }
    }
    pairwise_sum(&terms)
}

/// Radial multiplier bank: `φ̂(ξ) = 1 - S(2|ξ| - 3)` with `S` the normalized
/// primitive of the mollifier `exp(-1/(1-s^2))`, so `φ̂ = 1` on `B(0,1)` and
/// vanishes off `B(0,2)`; `ψ̂_t(ξ) = φ̂(tξ) - φ̂(2tξ)`.
#[derive(Debug, Clone)]
pub struct MultiplierBank {
    pieces: u32,
    total: f64,
}

impl MultiplierBank {
    /// Bank with `j = 1..=pieces`.
    pub fn new(pieces: u32) -> Result<Self> {
        if pieces == 0 || pieces > 40 {
            return domain("number of dyadic pieces must lie in 1..=40");
        }
        Ok(MultiplierBank { pieces, total: bump_integral(1.0) })
    }
    pub fn pieces(&self) -> u32 {
        self.pieces
    }
    /// `φ̂` at radius `rho = |ξ|`.
    pub fn phi_hat(&self, rho: f64) -> f64 {
        let u = 2.0 * rho.abs() - 3.0;
        if u <= -1.0 {
            1.0
        } else if u >= 1.0 {
            0.0
        } else {
            1.0 - bump_integral(u) / self.total
        }
    }
    /// `ψ̂_{2^{-j}}` at radius `rho`; supported in `[2^{j-1}, 2^{j+1}]`.
    pub fn psi_hat(&self, j: u32, rho: f64) -> f64 {
        let t = (-(j as f64)).exp2();
        self.phi_hat(t * rho) - self.phi_hat(2.0 * t * rho)
    }
    /// `φ̂ + Σ_{j ≤ pieces} ψ̂_{2^{-j}}` at radius `rho`.
    pub fn partial_sum(&self, rho: f64) -> f64 {
        let mut terms = vec![self.phi_hat(rho)];
        terms.extend((1..=self.pieces).map(|j| self.psi_hat(j, rho)));
        terms.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionReport {
    pub max_error: f64,
    /// Whether the annulus lies in `{1/2 <= |ξ| <= 2^{pieces-1}}`, where the
    /// truncated sum is exactly one.
    pub covered: bool,
}

/// Max of `|φ̂ + Σ ψ̂ - 1|` over the lattice `spacing · Z^2` inside the annulus.
pub fn partition_check(bank: &MultiplierBank, annulus: (f64, f64), spacing: f64) -> Result<PartitionReport> {
    let (a, b) = annulus;
    if !(a >= 0.0 && b > a && spacing > 0.0) {
        return domain("annulus needs 0 <= a < b and a positive lattice spacing");
    }
    let n = (b / spacing).ceil() as i64;
    let mut err = 0.0f64;
    for i in -n..=n {
        for k in 0..=n {
            let rho = spacing * ((i * i + k * k) as f64).sqrt();
            if rho >= a && rho <= b {
                err = err.max((bank.partial_sum(rho) - 1.0).abs());
            }
        }
    }
    Ok(PartitionReport { max_error: err, covered: a >= 0.5 && b <= (bank.pieces as f64 - 1.0).exp2() })
}

fn fft2(data: &mut [Complex64], n0: usize, n1: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let (p0, p1) = if inverse {
        (planner.plan_fft_inverse(n0), planner.plan_fft_inverse(n1))
    } else {
        (planner.plan_fft_forward(n0), planner.plan_fft_forward(n1))
    };
    // Values are stored with the last index fastest.
    for row in data.chunks_exact_mut(n1) {
        p1.process(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); n0];
    for c in 0..n1 {
        for r in 0..n0 {
            col[r] = data[r * n1 + c];
        }
        p0.process(&mut col);
        for r in 0..n0 {
            data[r * n1 + c] = col[r];
        }
    }
}

fn frequency(k: usize, n: usize, period: f64) -> f64 {
    let kk = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
    kk / period
}

/// Apply a radial multiplier to a planar grid function, treating the box as a torus.
pub fn apply_radial_multiplier(f: &GridFunction, m: impl Fn(f64) -> f64) -> Result<GridFunction> {
    if f.dim() != 2 {
        return domain("the discrete Fourier path is planar");
    }
    let (n0, n1) = (f.shape()[0], f.shape()[1]);
    let (l0, l1) = (n0 as f64 * f.spacing()[0], n1 as f64 * f.spacing()[1]);
    let mut data: Vec<Complex64> = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2(&mut data, n0, n1, false);
    for r in 0..n0 {
        let xi0 = frequency(r, n0, l0);
        for c in 0..n1 {
            let xi1 = frequency(c, n1, l1);
            data[r * n1 + c] *= m(xi0.hypot(xi1));
        }
    }
    fft2(&mut data, n0, n1, true);
    let scale = 1.0 / (n0 * n1) as f64;
    let vals: Vec<f64> = data.iter().map(|z| z.re * scale).collect();
    GridFunction::new(f.lo().to_vec(), f.hi(), f.shape().to_vec(), vals).map(|g| g.with_interp(f.interp))
}

fn nyquist(f: &GridFunction) -> f64 {
    f.spacing().iter().map(|h| 0.5 / h).fold(f64::INFINITY, f64::min)
}

/// `f * ψ_{2^{-j}}` by the discrete Fourier transform of the sampled box.
pub fn lp_piece(f: &GridFunction, j: u32, bank: &MultiplierBank) -> Result<GridFunction> {
    if j == 0 || j > bank.pieces {
        return domain(format!("piece index must lie in 1..={}", bank.pieces));
    }
    let top = (j as f64 + 1.0).exp2();
    if nyquist(f) < top {
        return Err(Error::Aliasing(format!(
            "grid resolves |ξ| <= {:.3}, piece {j} reaches {top}",
            nyquist(f)
        )));
    }
    apply_radial_multiplier(f, |rho| bank.psi_hat(j, rho))
}

/// `f * φ`.
pub fn low_piece(f: &GridFunction, bank: &MultiplierBank) -> Result<GridFunction> {
    if nyquist(f) < 2.0 {
        return Err(Error::Aliasing("grid does not resolve |ξ| <= 2".into()));
    }
    apply_radial_multiplier(f, |rho| bank.phi_hat(rho))
}

/// `A^{r,j}_1 f(x) = ||A_t (f * ψ_{2^{-j}})(x)||_{L^r([1,2], t dt)}`.
/// The piece is not compactly supported; the support test is applied to `f`
/// with the radius `2 + 2^{1-j} * 8` to leave room for the kernel tail.
pub fn a_rj(f: &GridFunction, x: &[f64], j: u32, r: RExponent, bank: &MultiplierBank, rule: &SphereRule, k: usize) -> Result<f64> {
    f.check_radius(2.0 + 8.0 * (1.0 - j as f64).exp2())?;
    let piece = lp_piece(f, j, bank)?;
    crate::operators::ar_value_unchecked(&piece, x, r, rule, k)
}

/// Gauss–Legendre panels of width at most `width` on `[a, b]`, `nodes` each.
fn panels(a: f64, b: f64, width: f64, nodes: usize) -> Vec<(f64, f64)> {
    let m = ((b - a) / width).ceil().max(1.0) as usize;
    let base = gauss_legendre(nodes, -1.0, 1.0);
    let h = (b - a) / m as f64;
    let mut out = Vec::with_capacity(m * nodes);
    for i in 0..m {
        let c = a + (i as f64 + 0.5) * h;
        out.extend(base.iter().map(|&(u, w)| (c + 0.5 * h * u, 0.5 * h * w)));
    }
    out
}

/// Nodes in `ρ` over the support of `ψ̂_{2^{-j}}`, fine enough for phases up
/// to `2π · 4 ρ`.
fn psi_nodes(j: u32) -> Vec<(f64, f64)> {
    panels((j as f64 - 1.0).exp2(), (j as f64 + 1.0).exp2(), 0.5, 14)
}

/// `(ψ_{2^{-j}} * dσ_t)(x)` for the normalized circle measure at `|x| = s`:
/// `2π ∫ ψ̂_{2^{-j}}(ρ) J_0(2π t ρ) J_0(2π s ρ) ρ dρ`.
pub fn kernel_value(bank: &MultiplierBank, j: u32, t: f64, s: f64) -> f64 {
    RadialKernel::new(bank, j, t).value(s)
}

/// `ψ_{2^{-j}} * dσ_t` with the `ρ`-quadrature precomputed.
pub struct RadialKernel {
    coef: Vec<(f64, f64)>,
}

impl RadialKernel {
    pub fn new(bank: &MultiplierBank, j: u32, t: f64) -> Self {
        let coef = psi_nodes(j)
            .iter()
            .map(|&(rho, w)| (rho, 2.0 * PI * w * rho * bank.psi_hat(j, rho) * libm::j0(2.0 * PI * t * rho)))
            .collect();
        RadialKernel { coef }
    }
    /// Value at `|x| = s`.
    pub fn value(&self, s: f64) -> f64 {
        let terms: Vec<f64> = self.coef.iter().map(|&(rho, c)| c * libm::j0(2.0 * PI * s * rho)).collect();
        pairwise_sum(&terms)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayCheckSpec {
    pub j: u32,
    pub t: f64,
    pub order: u32,
    /// Sample radii `|x|`.
    pub radii: Vec<f64>,
}

impl DecayCheckSpec {
    /// Radii `t + u 2^{-j}` for `u` in `[-span, span]`, step `1/4`, kept
    /// inside the annulus `t/2 <= |x| <= 3t/2`.
    pub fn around(j: u32, t: f64, order: u32, span: f64) -> Result<Self> {
        if order < 2 {
            return domain("decay order must be at least 2");
        }
        if !(1.0..=2.0).contains(&t) {
            return domain("t must lie in [1, 2]");
        }
        let h = (-(j as f64)).exp2();
        let m = (4.0 * span) as i64;
        let radii = (-m..=m).map(|i| t + 0.25 * i as f64 * h).filter(|s| (s - t).abs() <= 0.5 * t).collect();
        Ok(DecayCheckSpec { j, t, order, radii })
    }
}

/// Smallest `C` with `|ψ_{2^{-j}} * dσ_t(x)| <= C 2^j (1 + 2^j ||x| - t|)^{-N}` on the samples.
pub fn kernel_decay_fit(spec: &DecayCheckSpec, bank: &MultiplierBank) -> Result<f64> {
    if spec.radii.len() < 8 {
        return domain("need at least 8 sample radii");
    }
    let scale = (spec.j as f64).exp2();
    let kernel = RadialKernel::new(bank, spec.j, spec.t);
    Ok(spec
        .radii
        .iter()
        .map(|&s| kernel.value(s).abs() * (1.0 + scale * (s - spec.t).abs()).powi(spec.order as i32) / scale)
        .fold(0.0, f64::max))
}

/// Multiplier of `f ↦ A^{2,j}_1 f` on `L^2`:
/// `ψ̂_{2^{-j}}(ρ)^2 ∫_1^2 J_0(2π t ρ)^2 t dt`, using
/// `∫ J_0(at)^2 t dt = t^2 (J_0(at)^2 + J_1(at)^2) / 2`.
pub fn l2_symbol(bank: &MultiplierBank, j: u32, rho: f64) -> f64 {
    let p = bank.psi_hat(j, rho);
    if p == 0.0 {
        return 0.0;
    }
    let a = 2.0 * PI * rho;
    let prim = |t: f64| 0.5 * t * t * (libm::j0(a * t).powi(2) + libm::j1(a * t).powi(2));
    p * p * (prim(2.0) - prim(1.0))
}

/// Lower bound for `||A^{2,j}_1||_{L^2 → L^2}` from band-limited inputs:
/// the best of `samples` single frequencies across the band and `trials`
/// random superpositions of them (whose ratio is a weighted mean of symbols).
pub fn l2_decay_proxy(bank: &MultiplierBank, j: u32, samples: usize, trials: usize, seed: u64) -> f64 {
    let (lo, hi) = ((j as f64 - 1.0).exp2(), (j as f64 + 1.0).exp2());
    let symbols: Vec<f64> = (1..samples)
        .map(|i| l2_symbol(bank, j, lo + (hi - lo) * i as f64 / samples as f64))
        .collect();
    let mut best = symbols.iter().cloned().fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let c: Vec<f64> = symbols.iter().map(|_| rng.gen_range(-1.0..1.0f64).powi(2)).collect();
        let num: f64 = c.iter().zip(&symbols).map(|(c, m)| c * m).sum();
        let den: f64 = c.iter().sum();
        best = best.max(num / den);
    }
    best.sqrt()
}

/// `A^{r,j}_1 f(x)` for `f` the normalized indicator of `B(0, eps)` (unit
/// `L^1` norm) at `|x| = s`, by the Hankel integral with `refine · 2^j`
/// panels in `t` and
/// `f̂(ρ) = 2 J_1(2π eps ρ) / (2π eps ρ)`.
pub fn l1_linf_proxy(bank: &MultiplierBank, j: u32, r: RExponent, eps: f64, s: f64, refine: usize) -> f64 {
    let rho = psi_nodes(j);
    let pre: Vec<(f64, f64)> = rho
        .iter()
        .map(|&(q, w)| {
            let z = 2.0 * PI * eps * q;
            let fh = if z < 1e-8 { 1.0 } else { 2.0 * libm::j1(z) / z };
            (q, 2.0 * PI * w * q * bank.psi_hat(j, q) * fh * libm::j0(2.0 * PI * s * q))
        })
        .collect();
    let val = |t: f64| -> f64 {
        let terms: Vec<f64> = pre.iter().map(|&(q, c)| c * libm::j0(2.0 * PI * t * q)).collect();
        pairwise_sum(&terms)
    };
    let tn = panel_nodes(1.0, 2.0, refine.max(1) << j, &[s]);
    match r.r {
        Exponent::Infinite => tn.iter().map(|&(t, _)| val(t).abs()).fold(0.0, f64::max),
        _ => {
            let rv = r.value();
            let terms: Vec<f64> = tn.iter().map(|&(t, w)| w * t * val(t).abs().powf(rv)).collect();
            pairwise_sum(&terms).powf(1.0 / rv)
        }
    }
}
