//! Credit spread and rate duration.

use crate::analytic::phi;
use crate::error::{invalid, Error, Result};
use crate::fd::PriceSurface;
use crate::model::{ModelSpec, Side};

/// Default-free bond with the same promised cashflows,
/// `sum_{T_k > t} C_k Z(r,t;T_k) + F Z(r,t;T_N)`. At a coupon date the
/// side decides whether that coupon is still attached.
pub fn gov_coupon_bond(r: f64, t: f64, spec: &ModelSpec, side: Side) -> Result<f64> {
    let i = spec.schedule.interval_at(t, side)?;
    phi(r, t, i, spec)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskReport {
    pub price: f64,
    pub gov_price: f64,
    pub credit_spread: f64,
    pub duration: f64,
}

fn side_or_before(side: Option<Side>) -> Side {
    side.unwrap_or(Side::Before)
}

/// `CS = -ln(B / G) / (T_N - t)` with `G` the matching government bond.
pub fn credit_spread(surface: &PriceSurface, v: f64, r: f64, t: f64, side: Option<Side>) -> Result<f64> {
    let spec = surface.spec();
    let maturity = spec.schedule.maturity();
    if !(t < maturity) {
        return Err(Error::Domain {
            what: "t",
            value: t,
            reason: "credit spread needs t < T_N",
        });
    }
    let b = surface.query(v, r, t, side)?;
    if !(b > 0.0) {
        return Err(Error::NonPositivePrice(b));
    }
    let gov = gov_coupon_bond(r, t, spec, side_or_before(side))?;
    Ok(spread_from_prices(b, gov, maturity - t))
}

/// `-ln(price / gov) / horizon`.
pub fn spread_from_prices(price: f64, gov: f64, horizon: f64) -> f64 {
    let cs = -(price / gov).ln() / horizon;
    if cs == 0.0 {
        0.0
    } else {
        cs
    }
}

/// `D = -(1/B) dB/dr`, differencing the surface with its own `r` spacing;
/// one-sided within one step of the rate boundary.
pub fn duration(surface: &PriceSurface, v: f64, r: f64, t: f64, side: Option<Side>) -> Result<f64> {
    let rs = surface.r_nodes();
    let h = rs[1] - rs[0];
    let (lo, hi) = (rs[0], rs[rs.len() - 1]);
    let b = surface.query(v, r, t, side)?;
    if !(b > 0.0) {
        return Err(Error::NonPositivePrice(b));
    }
    let tol = 1e-12;
    let slope = if r - h >= lo - tol && r + h <= hi + tol {
        (surface.query(v, (r + h).min(hi), t, side)? - surface.query(v, (r - h).max(lo), t, side)?) / (2.0 * h)
    } else if r + h <= hi + tol {
        (surface.query(v, (r + h).min(hi), t, side)? - b) / h
    } else {
        (b - surface.query(v, (r - h).max(lo), t, side)?) / h
    };
    let d = -slope / b;
    Ok(if d == 0.0 { 0.0 } else { d })
}

/// Price, government price, spread and duration at one point.
pub fn risk_report(surface: &PriceSurface, v: f64, r: f64, t: f64, side: Option<Side>) -> Result<RiskReport> {
    let price = surface.query(v, r, t, side)?;
    let gov_price = gov_coupon_bond(r, t, surface.spec(), side_or_before(side))?;
    Ok(RiskReport {
        price,
        gov_price,
        credit_spread: credit_spread(surface, v, r, t, side)?,
        duration: duration(surface, v, r, t, side)?,
    })
}

/// Flat-rate duration `sum (t_i - t) w_i` with weights
/// `w_i ∝ C_i exp(-r (t_i - t))`.
pub fn duration_flat_rate(cashflows: &[(f64, f64)], r: f64, t: f64) -> Result<f64> {
    let weights = flat_rate_weights(cashflows, r, t)?;
    Ok(cashflows.iter().zip(&weights).map(|((ti, _), w)| (ti - t) * w).sum())
}

/// Normalised present-value weights of the cashflows.
pub fn flat_rate_weights(cashflows: &[(f64, f64)], r: f64, t: f64) -> Result<Vec<f64>> {
    if cashflows.is_empty() {
        return Err(invalid("cashflows", "must not be empty"));
    }
    if cashflows.iter().any(|(ti, c)| !(*ti > t) || !(*c >= 0.0)) {
        return Err(invalid("cashflows", "need t_i > t and C_i >= 0"));
    }
    let pv: Vec<f64> = cashflows.iter().map(|(ti, c)| c * (-r * (ti - t)).exp()).collect();
    let total: f64 = pv.iter().sum();
    if !(total > 0.0) {
        return Err(invalid("cashflows", "at least one C_i must be positive"));
    }
    Ok(pv.into_iter().map(|p| p / total).collect())
}
