//! Quadrature on spheres, plane rotations and the slicing weight.

use crate::{domain, Result};
use gauss_quad::{FiniteAboveNegOneF64, GaussJacobi, GaussLegendre};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// Surface measure, total mass `|S^{d-1}|`.
    Raw,
    /// Probability measure.
    Normalized,
}

/// `|S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)` for the unit sphere in `R^d`.
pub fn sphere_area(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * PI.powf(h) / libm::tgamma(h)
}

/// Gauss–Legendre nodes and weights mapped to `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(n.max(1).try_into().unwrap());
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    rule.as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (c + h * x, h * w))
        .collect()
}

/// Composite rule on `[a, b]` whose nodes cluster like `sin` at both ends,
/// so integrands with square-root endpoint behaviour converge quickly.
pub fn sine_gauss(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    gauss_legendre(n, -0.5 * PI, 0.5 * PI)
        .into_iter()
        .map(|(phi, w)| (c + h * phi.sin(), w * h * phi.cos()))
        .collect()
}

#[derive(Debug, Clone)]
pub struct SphereRule {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    mode: Measure,
    exactness: usize,
}

impl SphereRule {
    /// Ambient dimension `d` (the rule lives on `S^{d-1}`).
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn len(&self) -> usize {
        self.weights.len()
    }
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
    pub fn mode(&self) -> Measure {
        self.mode
    }
    /// Polynomials of total degree at most this are integrated exactly.
    pub fn exactness(&self) -> usize {
        self.exactness
    }
    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.nodes
            .chunks_exact(self.dim)
            .zip(self.weights.iter().copied())
    }
    /// Total mass of the rule (the measure of the sphere in its mode).
    pub fn mass(&self) -> f64 {
        crate::pairwise_sum(&self.weights)
    }
    pub fn integrate(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        let vals: Vec<f64> = self.iter().map(|(y, w)| w * f(y)).collect();
        crate::pairwise_sum(&vals)
    }
    /// Same nodes, other measure.
    pub fn with_mode(&self, mode: Measure) -> SphereRule {
        if mode == self.mode {
            return self.clone();
        }
        let s = match mode {
            Measure::Raw => sphere_area(self.dim),
            Measure::Normalized => 1.0 / sphere_area(self.dim),
        };
        SphereRule {
            weights: self.weights.iter().map(|w| w * s).collect(),
            mode,
            ..self.clone()
        }
    }
}

/// Product rule on `S^{d-1}`: `n` equispaced angles on circles, and
/// Gauss–Jacobi in the cosine of each polar angle with the weight
/// `(1-z^2)^{(m-3)/2}` that the surface measure induces (Legendre on `S^2`).
pub fn sphere_rule(d: usize, n: usize, mode: Measure) -> Result<SphereRule> {
    if !(1..=4).contains(&d) {
        return domain(format!("sphere rules are available for d in 1..=4, got {d}"));
    }
    sphere_rule_any(d, n, mode)
}

/// As [`sphere_rule`] without the dimension cap; used for `S^5` in the
/// direct bilinear average when `d = 3`.
pub fn sphere_rule_any(d: usize, n: usize, mode: Measure) -> Result<SphereRule> {
    if d == 0 {
        return domain("dimension must be at least 1");
    }
    if n < 4 {
        return domain(format!("resolution n must be at least 4, got {n}"));
    }
    let (nodes, weights) = raw_nodes(d, n);
    let mut rule = SphereRule {
        dim: d,
        nodes,
        weights,
        mode: Measure::Raw,
        exactness: if d == 1 { usize::MAX } else { n - 1 },
    };
    if mode == Measure::Normalized {
        let total = rule.mass();
        rule.weights.iter_mut().for_each(|w| *w /= total);
        rule.mode = Measure::Normalized;
    }
    Ok(rule)
}

fn raw_nodes(d: usize, n: usize) -> (Vec<f64>, Vec<f64>) {
    match d {
        1 => (vec![1.0, -1.0], vec![1.0, 1.0]),
        2 => {
            let mut nodes = Vec::with_capacity(2 * n);
            for k in 0..n {
                let a = 2.0 * PI * k as f64 / n as f64;
                nodes.extend([a.cos(), a.sin()]);
            }
            (nodes, vec![2.0 * PI / n as f64; n])
        }
        _ => {
            let (inner_nodes, inner_w) = raw_nodes(d - 1, n);
            let alpha = (d as f64 - 3.0) / 2.0;
            let polar: Vec<(f64, f64)> = if d == 3 {
                GaussLegendre::new(n.try_into().unwrap())
                    .as_node_weight_pairs()
                    .to_vec()
            } else {
                let a = FiniteAboveNegOneF64::new(alpha).unwrap();
                GaussJacobi::new(n.try_into().unwrap(), a, a)
                    .as_node_weight_pairs()
                    .to_vec()
            };
            let mut nodes = Vec::with_capacity(d * polar.len() * inner_w.len());
            let mut weights = Vec::with_capacity(polar.len() * inner_w.len());
            for &(z, wz) in &polar {
                let rho = (1.0 - z * z).max(0.0).sqrt();
                for (w, om) in inner_w.iter().zip(inner_nodes.chunks_exact(d - 1)) {
                    nodes.extend(om.iter().map(|c| rho * c));
                    nodes.push(z);
                    weights.push(wz * w);
                }
            }
            (nodes, weights)
        }
    }
}

/// Counter-clockwise plane rotation angle in `(0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationAngle(f64);

impl RotationAngle {
    pub fn new(theta: f64) -> Result<Self> {
        if theta > 0.0 && theta < 2.0 * PI {
            Ok(RotationAngle(theta))
        } else {
            domain(format!("rotation angle must lie in (0, 2pi), got {theta}"))
        }
    }
    pub fn theta(self) -> f64 {
        self.0
    }
}

pub fn rotate(x: [f64; 2], angle: RotationAngle) -> [f64; 2] {
    rotate_by(x, angle.0)
}

/// Rotation by an arbitrary real angle.
pub fn rotate_by(x: [f64; 2], theta: f64) -> [f64; 2] {
    let (s, c) = theta.sin_cos();
    [c * x[0] - s * x[1], s * x[0] + c * x[1]]
}

/// `s^{d-1} (1-s^2)^{(d-2)/2}`, the density of `|y_1|` for `y` uniform on
/// `S^{2d-1}` up to the factor `|S^{d-1}|^2`.
pub fn slicing_weight(s: f64, d: usize) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return domain(format!("slicing weight needs 0 < s < 1, got {s}"));
    }
    if d < 2 {
        return domain("slicing weight needs d >= 2");
    }
    Ok(s.powi(d as i32 - 1) * (1.0 - s * s).powf((d as f64 - 2.0) / 2.0))
}

/// Nodes `s_i` and weights `w_i` with `sum w_i F(s_i) ~ int_0^1 F(s) w(s) ds`,
/// built through `s = sin(phi)` so both endpoints are smooth.
pub fn slicing_rule(d: usize, n: usize) -> Vec<(f64, f64)> {
    gauss_legendre(n, 0.0, 0.5 * PI)
        .into_iter()
        .map(|(phi, w)| {
            let (s, c) = phi.sin_cos();
            (s, w * s.powi(d as i32 - 1) * c.powi(d as i32 - 1))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masses() {
        for d in 1..=4 {
            let r = sphere_rule(d, 16, Measure::Raw).unwrap();
            assert!((r.mass() - sphere_area(d)).abs() < 1e-10, "d={d}");
            let r = sphere_rule(d, 16, Measure::Normalized).unwrap();
            assert!((r.mass() - 1.0).abs() < 1e-12);
        }
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn unit_nodes() {
        for d in 1..=4 {
            let r = sphere_rule(d, 9, Measure::Raw).unwrap();
            for (y, _) in r.iter() {
                let n: f64 = y.iter().map(|c| c * c).sum();
                assert!((n - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn second_moment_on_s2() {
        let r = sphere_rule(3, 32, Measure::Normalized).unwrap();
        assert!((r.integrate(|y| y[2] * y[2]) - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn fourth_moment_on_s3() {
        // E[y_1^4] = 3 / (d (d+2)) for the uniform measure on S^{d-1}.
        let r = sphere_rule(4, 12, Measure::Normalized).unwrap();
        assert!((r.integrate(|y| y[0].powi(4)) - 3.0 / 24.0).abs() < 1e-13);
        assert!((r.integrate(|y| y[3].powi(4)) - 3.0 / 24.0).abs() < 1e-13);
    }

    #[test]
    fn bad_inputs() {
        assert!(sphere_rule(5, 8, Measure::Raw).is_err());
        assert!(sphere_rule(2, 3, Measure::Raw).is_err());
        assert!(RotationAngle::new(0.0).is_err());
        assert!(slicing_weight(1.0, 2).is_err());
    }

    #[test]
    fn rotation_examples() {
        let q = rotate([1.0, 0.0], RotationAngle::new(PI / 2.0).unwrap());
        assert!((q[0]).abs() < 1e-15 && (q[1] - 1.0).abs() < 1e-15);
        let q = rotate([1.0, 0.0], RotationAngle::new(PI).unwrap());
        assert!((q[0] + 1.0).abs() < 1e-15 && q[1].abs() < 1e-15);
    }

    #[test]
    fn weight_examples() {
        let s = 0.5f64.sqrt();
        assert!((slicing_weight(s, 2).unwrap() - s).abs() < 1e-15);
        assert!((slicing_weight(0.5, 3).unwrap() - 0.25 * 3f64.sqrt() / 2.0).abs() < 1e-15);
    }
}
