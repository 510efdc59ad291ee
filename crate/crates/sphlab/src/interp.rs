//! Combining a growing and a decaying dyadic estimate into a restricted
//! weak type bound, and the endpoint pairs that produce `P`, `Q`, `R`.

use crate::funcspace::{Exponent, Q};
use crate::regions::{self, TheoremId};
use crate::{domain, Result};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// `||T_j||_{L^{p^1} x .. -> L^q} <~ 2^{eps j}`: `eps > 0` is growth,
/// `eps < 0` decay.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointEstimate {
    pub ps: Vec<Exponent>,
    pub q: Exponent,
    pub eps: Q,
}

impl EndpointEstimate {
    pub fn linear(p: Exponent, q: Exponent, eps: Q) -> Self {
        EndpointEstimate { ps: vec![p], q, eps }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterpolatedPoint {
    pub ps: Vec<Exponent>,
    pub q: Exponent,
    /// Weight of the growing estimate.
    pub theta: Q,
    /// The growing estimate has `q = inf`; the combination still holds
    /// (`L^{q,inf}` target) but needs the usual care.
    pub q1_infinite: bool,
}

impl InterpolatedPoint {
    pub fn recips(&self) -> Vec<Q> {
        self.ps.iter().map(|p| p.recip()).chain(std::iter::once(self.q.recip())).collect()
    }
}

/// Restricted weak type at the point with `1/p = θ/p_1 + (1-θ)/p_2` (each
/// slot) and `1/q = θ/q_1 + (1-θ)/q_2`, `θ = ε_2/(ε_1+ε_2)`.
pub fn bourgain_combine(growth: &EndpointEstimate, decay: &EndpointEstimate) -> Result<InterpolatedPoint> {
    if growth.ps.len() != decay.ps.len() || growth.ps.is_empty() {
        return domain("estimates must have the same, nonzero arity");
    }
    if growth.eps <= Q::zero() {
        return domain(format!("first estimate must grow (eps > 0), got {}", growth.eps));
    }
    if decay.eps >= Q::zero() {
        return domain(format!("second estimate must decay (eps < 0), got {}", decay.eps));
    }
    let e1 = growth.eps;
    let e2 = -decay.eps;
    let theta = e2 / (e1 + e2);
    let mix = |a: Exponent, b: Exponent| Exponent::from_recip(theta * a.recip() + (Q::one() - theta) * b.recip());
    Ok(InterpolatedPoint {
        ps: growth.ps.iter().zip(&decay.ps).map(|(a, b)| mix(*a, *b)).collect(),
        q: mix(growth.q, decay.q),
        theta,
        q1_infinite: growth.q.is_infinite(),
    })
}

/// One row of the endpoint table: which `d` and `r` it covers and the two
/// estimates as functions of `(d, rho = 1/r)`.
#[derive(Debug, Clone, Copy)]
pub struct TableRow {
    pub index: usize,
    pub target: &'static str,
    pub d_min: u32,
    pub d_max: Option<u32>,
    /// `rho` range (inclusive) covered by the row.
    pub rho_range: (Q, Q),
}

pub fn table_rows() -> [TableRow; 6] {
    let half = Q::new(1, 2);
    let (z, o) = (Q::zero(), Q::one());
    [
        TableRow { index: 1, target: "P", d_min: 2, d_max: Some(2), rho_range: (z, o) },
        TableRow { index: 2, target: "P", d_min: 3, d_max: None, rho_range: (z, o) },
        TableRow { index: 3, target: "Q", d_min: 2, d_max: None, rho_range: (half, o) },
        TableRow { index: 4, target: "Q", d_min: 2, d_max: None, rho_range: (z, half) },
        TableRow { index: 5, target: "R", d_min: 2, d_max: None, rho_range: (half, o) },
        TableRow { index: 6, target: "R", d_min: 2, d_max: None, rho_range: (z, half) },
    ]
}

impl TableRow {
    pub fn covers(&self, d: u32, rho: Q) -> bool {
        d >= self.d_min && self.d_max.is_none_or(|m| d <= m) && rho >= self.rho_range.0 && rho <= self.rho_range.1
    }

    /// The growing and decaying estimates (`ε` of the second stored negative).
    pub fn estimates(&self, d: u32, rho: Q) -> (EndpointEstimate, EndpointEstimate) {
        let one = Q::one();
        let dq = Q::from_integer(d as i64);
        let rc = one - rho; // 1/r'
        let from = Exponent::from_recip;
        let lin = |p: Q, q: Q, e: Q| EndpointEstimate::linear(from(p), from(q), e);
        let half = Q::new(1, 2);
        let growth_q = if self.target == "R" { one } else { Q::zero() };
        let growth = lin(one, growth_q, rc);
        let decay = match self.index {
            1 => lin((Q::from_integer(12) * rho + Q::from_integer(7)) / 19, Q::from_integer(4) * rc / 19, -rc / 19),
            2 => {
                let e = (dq * dq - Q::from_integer(2) * dq - one) * rc / (Q::from_integer(2) * (dq + one));
                lin((one + rho) * half, (dq - one) * rc / (Q::from_integer(2) * (dq + one)), -e)
            }
            3 => lin(rho, rc, -(dq - one) * rc),
            5 => lin(rho, rho, -(dq - one) * rc),
            _ => lin(half, half, -((dq - Q::from_integer(2)) * half + rho)),
        };
        (growth, decay)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableCheck {
    pub row: usize,
    pub d: u32,
    pub r: Exponent,
    pub target: String,
    pub growth: EndpointEstimate,
    pub decay: EndpointEstimate,
    /// A rate vanishes (e.g. `r = 1`): the combination is not applicable.
    pub degenerate: bool,
    pub result: Option<InterpolatedPoint>,
    pub expected: Vec<Q>,
    pub matches: bool,
}

/// Run every applicable table row at `(d, r)` and compare the combined
/// point with the exact vertex of the `𝔄^r` region.
pub fn reproduce_table(d: u32, r: Exponent) -> Result<Vec<TableCheck>> {
    let rho = r.recip();
    if rho < Q::zero() || rho > Q::one() {
        return domain("r must lie in [1, inf]");
    }
    let mut out = Vec::new();
    for row in table_rows() {
        if !row.covers(d, rho) {
            continue;
        }
        let (growth, decay) = row.estimates(d, rho);
        let expected = regions::vertex(TheoremId::LinearAr, d, Some(r), row.target)?;
        let degenerate = growth.eps.is_zero() || decay.eps.is_zero();
        let result = if degenerate { None } else { Some(bourgain_combine(&growth, &decay)?) };
        let matches = result.as_ref().is_some_and(|p| p.recips() == expected);
        out.push(TableCheck { row: row.index, d, r, target: row.target.to_string(), growth, decay, degenerate, result, expected, matches });
    }
    Ok(out)
}

pub fn table_csv(checks: &[TableCheck]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["row", "d", "r", "target", "p1", "q1", "eps1", "p2", "q2", "eps2", "theta", "inv_p", "inv_q", "expected_inv_p", "expected_inv_q", "status"])
        .map_err(|e| crate::Error::Format(e.to_string()))?;
    for c in checks {
        let (theta, ip, iq) = match &c.result {
            Some(p) => (p.theta.to_string(), p.ps[0].recip().to_string(), p.q.recip().to_string()),
            None => (String::new(), String::new(), String::new()),
        };
        let status = if c.degenerate {
            "degenerate"
        } else if c.matches {
            "match"
        } else {
            "mismatch"
        };
        w.write_record([
            c.row.to_string(),
            c.d.to_string(),
            c.r.to_string(),
            c.target.clone(),
            c.growth.ps[0].to_string(),
            c.growth.q.to_string(),
            c.growth.eps.to_string(),
            c.decay.ps[0].to_string(),
            c.decay.q.to_string(),
            c.decay.eps.to_string(),
            theta,
            ip,
            iq,
            c.expected[0].to_string(),
            c.expected[1].to_string(),
            status.to_string(),
        ])
        .map_err(|e| crate::Error::Format(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| crate::Error::Format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_combination() {
        let g = EndpointEstimate::linear(Exponent::int(1), Exponent::Infinite, Q::new(1, 2));
        let dcy = EndpointEstimate::linear(Exponent::int(2), Exponent::int(2), Q::new(-1, 2));
        let p = bourgain_combine(&g, &dcy).unwrap();
        assert_eq!(p.theta, Q::new(1, 2));
        assert_eq!(p.ps[0], Exponent::frac(4, 3));
        assert_eq!(p.q, Exponent::int(4));
        assert!(p.q1_infinite);
    }

    #[test]
    fn refuses_bad_pairs() {
        let g = EndpointEstimate::linear(Exponent::int(1), Exponent::Infinite, Q::new(1, 2));
        assert!(bourgain_combine(&g, &g).is_err());
        let b = EndpointEstimate { ps: vec![Exponent::int(2), Exponent::int(2)], q: Exponent::int(1), eps: Q::new(-1, 1) };
        assert!(bourgain_combine(&g, &b).is_err());
    }

    #[test]
    fn row_one_d2_r2() {
        let rows = reproduce_table(2, Exponent::int(2)).unwrap();
        let p = rows.iter().find(|c| c.row == 1).unwrap();
        assert!(p.matches);
        assert_eq!(p.result.as_ref().unwrap().theta, Q::new(1, 20));
    }
}
