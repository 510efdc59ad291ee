//! Convex polygons in the plane: exact arcs of circles inside them, unions
//! of such arcs, and areas of unions. Backs the rectangle-based examples.

use crate::funcspace::Field;
use crate::{domain, Result};
use std::f64::consts::PI;

const TAU: f64 = 2.0 * PI;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    /// Counter-clockwise vertices.
    pts: Vec<[f64; 2]>,
    center: [f64; 2],
    radius: f64,
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

impl ConvexPolygon {
    /// Convex hull of the given points.
    pub fn hull(points: &[[f64; 2]]) -> Result<Self> {
        let mut p: Vec<[f64; 2]> = points.to_vec();
        p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        p.dedup();
        if p.len() < 3 {
            return domain("a polygon needs three distinct points");
        }
        let mut lower: Vec<[f64; 2]> = Vec::new();
        for &q in &p {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0.0 {
                lower.pop();
            }
            lower.push(q);
        }
        let mut upper: Vec<[f64; 2]> = Vec::new();
        for &q in p.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0.0 {
                upper.pop();
            }
            upper.push(q);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() < 3 {
            return domain("degenerate polygon");
        }
        Ok(Self::from_ccw(lower))
    }

    fn from_ccw(pts: Vec<[f64; 2]>) -> Self {
        let n = pts.len() as f64;
        let center = [pts.iter().map(|p| p[0]).sum::<f64>() / n, pts.iter().map(|p| p[1]).sum::<f64>() / n];
        let radius = pts.iter().map(|p| (p[0] - center[0]).hypot(p[1] - center[1])).fold(0.0, f64::max);
        ConvexPolygon { pts, center, radius }
    }

    /// Axis-aligned box `[x0, x1] x [y0, y1]`.
    pub fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x1 > x0 && y1 > y0) {
            return domain("empty rectangle");
        }
        Ok(Self::from_ccw(vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]]))
    }

    /// Minkowski sum (hull of pairwise vertex sums).
    pub fn minkowski(&self, other: &ConvexPolygon) -> Result<Self> {
        let sums: Vec<[f64; 2]> = self
            .pts
            .iter()
            .flat_map(|a| other.pts.iter().map(move |b| [a[0] + b[0], a[1] + b[1]]))
            .collect();
        Self::hull(&sums)
    }

    /// Image under a linear map `m` (row-major 2x2) followed by `+ shift`.
    pub fn affine(&self, m: [[f64; 2]; 2], shift: [f64; 2]) -> Result<Self> {
        let pts: Vec<[f64; 2]> = self
            .pts
            .iter()
            .map(|p| [m[0][0] * p[0] + m[0][1] * p[1] + shift[0], m[1][0] * p[0] + m[1][1] * p[1] + shift[1]])
            .collect();
        Self::hull(&pts)
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.pts
    }

    pub fn area(&self) -> f64 {
        let n = self.pts.len();
        0.5 * (0..n).map(|i| {
            let (a, b) = (self.pts[i], self.pts[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        }).sum::<f64>()
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        let n = self.pts.len();
        (0..n).all(|i| cross(self.pts[i], self.pts[(i + 1) % n], p) >= 0.0)
    }

    /// `(min, max)` distance from `x` to points of the polygon.
    pub fn distance_range(&self, x: [f64; 2]) -> (f64, f64) {
        let dmax = self.pts.iter().map(|p| (p[0] - x[0]).hypot(p[1] - x[1])).fold(0.0, f64::max);
        if self.contains(x) {
            return (0.0, dmax);
        }
        let n = self.pts.len();
        let dmin = (0..n)
            .map(|i| segment_distance(self.pts[i], self.pts[(i + 1) % n], x))
            .fold(f64::INFINITY, f64::min);
        (dmin, dmax)
    }

    /// Arcs `{φ : x + t (cos φ, sin φ) ∈ P}` as disjoint intervals in `[0, 2π)`.
    pub fn arcs(&self, x: [f64; 2], t: f64) -> Vec<(f64, f64)> {
        let dc = (self.center[0] - x[0]).hypot(self.center[1] - x[1]);
        if dc + self.radius < t || dc - self.radius > t {
            return Vec::new();
        }
        let mut cur = vec![(0.0, TAU)];
        let n = self.pts.len();
        for i in 0..n {
            let (a, b) = (self.pts[i], self.pts[(i + 1) % n]);
            // Inside half-plane: nrm · p <= h with outward normal nrm.
            let e = [b[0] - a[0], b[1] - a[1]];
            let len = e[0].hypot(e[1]);
            let nrm = [e[1] / len, -e[0] / len];
            let h = nrm[0] * a[0] + nrm[1] * a[1];
            let c = (h - nrm[0] * x[0] - nrm[1] * x[1]) / t;
            if c >= 1.0 {
                continue;
            }
            if c <= -1.0 {
                return Vec::new();
            }
            // cos(φ - ψ) <= c  <=>  φ - ψ in [acos c, 2π - acos c].
            let psi = nrm[1].atan2(nrm[0]);
            let w = c.acos();
            let start = (psi + w).rem_euclid(TAU);
            let allowed = split_arc(start, TAU - 2.0 * w);
            cur = intersect(&cur, &allowed);
            if cur.is_empty() {
                break;
            }
        }
        cur
    }

    /// Interval of `y` with `(x0, y)` inside, if any.
    pub fn vertical_section(&self, x0: f64) -> Option<(f64, f64)> {
        let n = self.pts.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let (a, b) = (self.pts[i], self.pts[(i + 1) % n]);
            let (xa, xb) = (a[0].min(b[0]), a[0].max(b[0]));
            if x0 < xa || x0 > xb {
                continue;
            }
            if xb == xa {
                lo = lo.min(a[1].min(b[1]));
                hi = hi.max(a[1].max(b[1]));
            } else {
                let y = a[1] + (b[1] - a[1]) * (x0 - a[0]) / (b[0] - a[0]);
                lo = lo.min(y);
                hi = hi.max(y);
            }
        }
        (hi >= lo).then_some((lo, hi))
    }

    /// Radii where the circle about `x` meets a vertex or becomes tangent
    /// to an edge.
    pub fn critical_radii(&self, x: [f64; 2]) -> Vec<f64> {
        let n = self.pts.len();
        let mut out: Vec<f64> = self.pts.iter().map(|p| (p[0] - x[0]).hypot(p[1] - x[1])).collect();
        for i in 0..n {
            let (a, b) = (self.pts[i], self.pts[(i + 1) % n]);
            let e = [b[0] - a[0], b[1] - a[1]];
            let l2 = e[0] * e[0] + e[1] * e[1];
            let s = ((x[0] - a[0]) * e[0] + (x[1] - a[1]) * e[1]) / l2;
            if s > 0.0 && s < 1.0 {
                out.push(segment_distance(a, b, x));
            }
        }
        out
    }
}

fn segment_distance(a: [f64; 2], b: [f64; 2], x: [f64; 2]) -> f64 {
    let e = [b[0] - a[0], b[1] - a[1]];
    let l2 = e[0] * e[0] + e[1] * e[1];
    let s = (((x[0] - a[0]) * e[0] + (x[1] - a[1]) * e[1]) / l2).clamp(0.0, 1.0);
    (a[0] + s * e[0] - x[0]).hypot(a[1] + s * e[1] - x[1])
}

/// Arc `[start, start + len)` on the circle as at most two intervals of `[0, 2π)`.
fn split_arc(start: f64, len: f64) -> Vec<(f64, f64)> {
    let end = start + len;
    if end <= TAU {
        vec![(start, end)]
    } else {
        vec![(0.0, end - TAU), (start, TAU)]
    }
}

/// Intersection of two sorted disjoint interval lists.
pub fn intersect(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = a[i].0.max(b[j].0);
        let hi = a[i].1.min(b[j].1);
        if hi > lo {
            out.push((lo, hi));
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Sorted disjoint union of intervals.
pub fn union(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
    for (lo, hi) in v {
        match out.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

pub fn total_length(v: &[(f64, f64)]) -> f64 {
    v.iter().map(|(a, b)| b - a).sum()
}

/// Rotate an interval list on the circle by `-shift`.
pub fn shift_arcs(v: &[(f64, f64)], shift: f64) -> Vec<(f64, f64)> {
    union(v.iter().flat_map(|&(a, b)| split_arc((a - shift).rem_euclid(TAU), b - a)).collect())
}

/// Indicator of a finite union of convex polygons.
#[derive(Debug, Clone)]
pub struct PolygonSet {
    polys: Vec<ConvexPolygon>,
}

impl PolygonSet {
    pub fn new(polys: Vec<ConvexPolygon>) -> Result<Self> {
        if polys.is_empty() {
            return domain("empty polygon set");
        }
        Ok(PolygonSet { polys })
    }
    pub fn polygons(&self) -> &[ConvexPolygon] {
        &self.polys
    }
    pub fn contains(&self, p: [f64; 2]) -> bool {
        self.polys.iter().any(|q| q.contains(p))
    }
    /// Arcs of the circle of radius `t` about `x` inside the union.
    pub fn arcs(&self, x: [f64; 2], t: f64) -> Vec<(f64, f64)> {
        union(self.polys.iter().flat_map(|q| q.arcs(x, t)).collect())
    }
    /// As [`Self::arcs`], restricted to the polygons listed in `active`.
    pub fn arcs_of(&self, active: &[usize], x: [f64; 2], t: f64) -> Vec<(f64, f64)> {
        union(active.iter().flat_map(|&i| self.polys[i].arcs(x, t)).collect())
    }
    pub fn bbox(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in self.polys.iter().flat_map(|q| q.pts.iter()) {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }
    /// Area of the union by exact vertical sections at `columns` midpoints.
    pub fn union_area(&self, columns: usize) -> f64 {
        let (lo, hi) = self.bbox();
        let h = (hi[0] - lo[0]) / columns as f64;
        let lens: Vec<f64> = (0..columns)
            .map(|i| {
                let x0 = lo[0] + (i as f64 + 0.5) * h;
                total_length(&union(self.polys.iter().filter_map(|q| q.vertical_section(x0)).collect()))
            })
            .collect();
        crate::pairwise_sum(&lens) * h
    }
}

impl Field for PolygonSet {
    fn dim(&self) -> usize {
        2
    }
    fn eval(&self, x: &[f64]) -> f64 {
        if self.contains([x[0], x[1]]) {
            1.0
        } else {
            0.0
        }
    }
    fn exact_sphere_average(&self, x: &[f64], t: f64) -> Option<f64> {
        Some(total_length(&self.arcs([x[0], x[1]], t)) / TAU)
    }
    fn t_breaks(&self, x: &[f64], lo: f64, hi: f64) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .polys
            .iter()
            .flat_map(|q| q.critical_radii([x[0], x[1]]))
            .filter(|t| *t > lo && *t < hi)
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_arcs() {
        let sq = ConvexPolygon::rect(-1.0, 1.0, -1.0, 1.0).unwrap();
        assert!((sq.area() - 4.0).abs() < 1e-15);
        // Circle of radius 1/2 about the center lies inside.
        assert!((total_length(&sq.arcs([0.0, 0.0], 0.5)) - TAU).abs() < 1e-12);
        // Radius sqrt(2) touches only the corners.
        assert!(total_length(&sq.arcs([0.0, 0.0], 2f64.sqrt())) < 1e-6);
        // Radius 2^{1/2}·cos(π/8)^{-1}... use a clean case: radius 1 about a corner.
        let arc = total_length(&sq.arcs([1.0, 1.0], 1.0));
        assert!((arc - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn half_plane_cut() {
        // Big square, circle about a point on an edge: exactly half inside.
        let sq = ConvexPolygon::rect(-10.0, 10.0, 0.0, 10.0).unwrap();
        assert!((total_length(&sq.arcs([0.0, 0.0], 1.0)) - PI).abs() < 1e-12);
        // Offset inside by 1/2: arc above y = -1/2, i.e. 2π - 2 acos(1/2).
        let a = total_length(&sq.arcs([0.0, 0.5], 1.0));
        assert!((a - (TAU - 2.0 * (0.5f64).acos())).abs() < 1e-12);
    }

    #[test]
    fn union_area_of_overlapping_squares() {
        let a = ConvexPolygon::rect(0.0, 2.0, 0.0, 2.0).unwrap();
        let b = ConvexPolygon::rect(1.0, 3.0, 1.0, 3.0).unwrap();
        let s = PolygonSet::new(vec![a, b]).unwrap();
        // Columns aligned with the jumps at x = 1, 2: the midpoint rule is exact.
        let a = s.union_area(999);
        assert!((a - 7.0).abs() < 1e-9, "{a}");
    }

    #[test]
    fn minkowski_of_squares() {
        let a = ConvexPolygon::rect(0.0, 1.0, 0.0, 1.0).unwrap();
        let m = a.minkowski(&a).unwrap();
        assert!((m.area() - 4.0).abs() < 1e-12);
        assert_eq!(m.vertices().len(), 4);
    }

    #[test]
    fn arcs_match_sampling() {
        let p = ConvexPolygon::hull(&[[0.3, -0.2], [1.4, 0.1], [1.1, 0.9], [0.2, 0.7]]).unwrap();
        let (x, t) = ([0.1, 0.05], 1.0);
        let exact = total_length(&p.arcs(x, t));
        let n = 200_000;
        let hits = (0..n)
            .filter(|i| {
                let a = TAU * (*i as f64 + 0.5) / n as f64;
                p.contains([x[0] + t * a.cos(), x[1] + t * a.sin()])
            })
            .count();
        assert!((exact - TAU * hits as f64 / n as f64).abs() < 1e-4);
    }

    #[test]
    fn shifted_intervals() {
        let v = shift_arcs(&[(0.5, 1.0)], 0.75);
        assert!((total_length(&v) - 0.5).abs() < 1e-15);
        assert!(v.len() == 2);
    }
}
