//! Closed-form and quadrature analytics: the Vasicek zero-coupon bond, the
//! value of the remaining promised cashflows, the effective variance of the
//! firm value measured in zero-coupon units, and the closed-form price on
//! the last coupon interval.

use crate::error::{Error, Result};
use crate::model::{FirmDynamics, ModelSpec, VasicekParams};
use crate::quadrature::{integrate, QuadratureConfig};

fn check_order(t: f64, maturity: f64) -> Result<()> {
    if !(t <= maturity) {
        return Err(Error::Domain {
            what: "t",
            value: t,
            reason: "must not exceed the maturity",
        });
    }
    Ok(())
}

#[inline]
fn b_tilde_tau(tau: f64, a2: f64) -> f64 {
    -(-a2 * tau).exp_m1() / a2
}

/// Rate loading of the Vasicek bond, `(1 - exp(-a2 (T - t))) / a2`.
pub fn b_tilde(t: f64, maturity: f64, params: &VasicekParams) -> Result<f64> {
    check_order(t, maturity)?;
    Ok(b_tilde_tau(maturity - t, params.a2))
}

/// `-int_t^T [a1 B(u,T) - sr^2 B(u,T)^2 / 2] du` by Simpson quadrature.
pub fn a_tilde(t: f64, maturity: f64, params: &VasicekParams, quad: &QuadratureConfig) -> Result<f64> {
    check_order(t, maturity)?;
    let VasicekParams { a1, a2, sr } = *params;
    let integral = integrate(
        |u| {
            let b = b_tilde_tau(maturity - u, a2);
            a1 * b - 0.5 * sr * sr * b * b
        },
        t,
        maturity,
        quad,
    )?;
    Ok(-integral)
}

/// Default-free zero-coupon bond maturing at `maturity`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZcbCurve {
    pub params: VasicekParams,
    pub maturity: f64,
}

impl ZcbCurve {
    pub fn new(params: VasicekParams, maturity: f64) -> Result<Self> {
        if !(maturity > 0.0) {
            return Err(Error::Domain {
                what: "maturity",
                value: maturity,
                reason: "must be > 0",
            });
        }
        Ok(Self { params, maturity })
    }

    /// `(A(t,T), B(t,T))` so that `Z = exp(A - B r)`.
    pub fn factors(&self, t: f64, quad: &QuadratureConfig) -> Result<(f64, f64)> {
        Ok((
            a_tilde(t, self.maturity, &self.params, quad)?,
            b_tilde(t, self.maturity, &self.params)?,
        ))
    }

    pub fn price(&self, r: f64, t: f64) -> Result<f64> {
        let (a, b) = self.factors(t, &QuadratureConfig::default())?;
        Ok((a - b * r).exp())
    }
}

/// `Z(r, t; T)`.
pub fn zcb_price(r: f64, t: f64, maturity: f64, params: &VasicekParams) -> Result<f64> {
    check_order(t, maturity)?;
    let (a, b) = (
        a_tilde(t, maturity, params, &QuadratureConfig::default())?,
        b_tilde(t, maturity, params)?,
    );
    Ok((a - b * r).exp())
}

/// Remaining promised cashflows of interval `i` valued at a fixed time, as
/// `(amount, A, B)` triples. Evaluating at many rates reuses the
/// quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct CashflowStrip {
    terms: Vec<(f64, f64, f64)>,
}

impl CashflowStrip {
    /// Cashflows after `T_i` seen from time `t`, `T_i <= t <= T_{i+1}`.
    pub fn new(t: f64, i: usize, spec: &ModelSpec) -> Result<Self> {
        let s = &spec.schedule;
        if i >= s.len() {
            return Err(Error::Domain {
                what: "interval",
                value: i as f64,
                reason: "interval index beyond the last coupon",
            });
        }
        let (start, end) = s.interval_bounds(i);
        if !(t >= start && t <= end) {
            return Err(Error::Domain {
                what: "t",
                value: t,
                reason: "must lie inside the interval's closure",
            });
        }
        let quad = QuadratureConfig::default();
        let n = s.len();
        let mut terms = Vec::with_capacity(n - i);
        for k in (i + 1)..=n {
            let mut amount = s.coupon(k);
            if k == n {
                amount += s.face();
            }
            let maturity = s.date(k);
            let a = a_tilde(t, maturity, &spec.vasicek, &quad)?;
            let b = b_tilde(t, maturity, &spec.vasicek)?;
            terms.push((amount, a, b));
        }
        Ok(Self { terms })
    }

    #[inline]
    pub fn value(&self, r: f64) -> f64 {
        self.terms.iter().map(|&(c, a, b)| c * (a - b * r).exp()).sum()
    }
}

/// `Phi_i(r, t) = sum_{k>i} C_k Z(r,t;T_k) + F Z(r,t;T_N)` on interval `i`.
pub fn phi(r: f64, t: f64, i: usize, spec: &ModelSpec) -> Result<f64> {
    let maturity = spec.schedule.maturity();
    if !(0.0..=maturity).contains(&t) {
        return Err(Error::Domain {
            what: "t",
            value: t,
            reason: "must lie in [0, T_N]",
        });
    }
    Ok(CashflowStrip::new(t, i, spec)?.value(r))
}

/// Instantaneous variance of `V / Z(., ., T)`.
pub fn sigma_sq(u: f64, maturity: f64, vasicek: &VasicekParams, firm: &FirmDynamics) -> Result<f64> {
    let b = b_tilde(u, maturity, vasicek)?;
    Ok(sigma_sq_at(b, vasicek, firm))
}

#[inline]
fn sigma_sq_at(b: f64, vasicek: &VasicekParams, firm: &FirmDynamics) -> f64 {
    let sv = firm.sv;
    let srb = vasicek.sr * b;
    sv * sv + 2.0 * firm.rho * sv * srb + srb * srb
}

/// `int_t^tau sigma^2(u; T) du`, where the variance is taken relative to
/// the bond maturing at `maturity`.
pub fn integrated_variance(
    t: f64,
    tau: f64,
    maturity: f64,
    vasicek: &VasicekParams,
    firm: &FirmDynamics,
    quad: &QuadratureConfig,
) -> Result<f64> {
    check_order(t, tau)?;
    check_order(tau, maturity)?;
    integrate(
        |u| sigma_sq_at(b_tilde_tau(maturity - u, vasicek.a2), vasicek, firm),
        t,
        tau,
        quad,
    )
}

fn d_pm_from_variance(x: f64, horizon: f64, payout: f64, variance: f64) -> (f64, f64) {
    let sd = variance.sqrt();
    let centre = x.ln() - payout * horizon;
    ((centre + 0.5 * variance) / sd, (centre - 0.5 * variance) / sd)
}

/// `(d+, d-)` for moneyness `x` over `[t, T]`.
pub fn d_plus_minus(
    x: f64,
    t: f64,
    maturity: f64,
    vasicek: &VasicekParams,
    firm: &FirmDynamics,
    quad: &QuadratureConfig,
) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            what: "x",
            value: x,
            reason: "moneyness must be > 0",
        });
    }
    if !(t < maturity) {
        return Err(Error::Domain {
            what: "t",
            value: t,
            reason: "must be strictly before the maturity",
        });
    }
    let var = integrated_variance(t, maturity, maturity, vasicek, firm, quad)?;
    Ok(d_pm_from_variance(x, maturity - t, firm.payout, var))
}

/// Standard normal CDF.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Moneyness used inside the intensity integral of the last-interval
/// formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecoveryMoneyness {
    /// `delta x / (F + C_N)`: the split point of `min(delta x, F + C_N)`.
    Scaled,
    /// `x / (F + C_N)`, as in the maturity term.
    Unscaled,
}

/// Payout discount applied to the asset leg inside the intensity integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralPayoutDiscount {
    /// `exp(-b (T - t))`.
    ToMaturity,
    /// `exp(-b (tau - t))`, matching the recovery time.
    ToRecoveryTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LastIntervalVariant {
    pub moneyness: RecoveryMoneyness,
    pub payout_discount: IntegralPayoutDiscount,
}

impl LastIntervalVariant {
    pub const PRINTED: Self = Self {
        moneyness: RecoveryMoneyness::Scaled,
        payout_discount: IntegralPayoutDiscount::ToMaturity,
    };
    pub const CORRECTED: Self = Self {
        moneyness: RecoveryMoneyness::Scaled,
        payout_discount: IntegralPayoutDiscount::ToRecoveryTime,
    };

    pub fn all() -> [Self; 4] {
        use IntegralPayoutDiscount::*;
        use RecoveryMoneyness::*;
        [
            Self::PRINTED,
            Self::CORRECTED,
            Self {
                moneyness: Unscaled,
                payout_discount: ToMaturity,
            },
            Self {
                moneyness: Unscaled,
                payout_discount: ToRecoveryTime,
            },
        ]
    }

    pub fn label(&self) -> &'static str {
        match (self.moneyness, self.payout_discount) {
            (RecoveryMoneyness::Scaled, IntegralPayoutDiscount::ToMaturity) => "printed",
            (RecoveryMoneyness::Scaled, IntegralPayoutDiscount::ToRecoveryTime) => "corrected",
            (RecoveryMoneyness::Unscaled, IntegralPayoutDiscount::ToMaturity) => "unscaled/maturity",
            (RecoveryMoneyness::Unscaled, IntegralPayoutDiscount::ToRecoveryTime) => "unscaled/recovery-time",
        }
    }
}

/// `(N(d-), N(-d+))`, with the zero-variance limit taken as a step.
fn digital_split(m: f64, horizon: f64, payout: f64, variance: f64) -> (f64, f64) {
    if variance > 0.0 {
        let (dp, dm) = d_pm_from_variance(m, horizon, payout, variance);
        (norm_cdf(dm), norm_cdf(-dp))
    } else {
        let c = m.ln() - payout * horizon;
        if c > 0.0 {
            (1.0, 0.0)
        } else if c < 0.0 {
            (0.0, 1.0)
        } else {
            (0.5, 0.5)
        }
    }
}

/// Closed-form bond price on the last coupon interval,
/// `B_{N-1}(V,r,t) = Z(r,t;T_N) u(V / Z(r,t;T_N), t)`.
///
/// The intensity integral over the recovery time `tau` is computed after
/// the substitution `tau = t + (T_N - t) w^2`, which removes the
/// square-root behaviour of the integrand near `tau = t`. It starts at
/// `quad.panels.max(512)` panels.
pub fn analytic_last_interval(
    v: f64,
    r: f64,
    t: f64,
    spec: &ModelSpec,
    quad: &QuadratureConfig,
    variant: LastIntervalVariant,
) -> Result<f64> {
    let s = &spec.schedule;
    let n = s.len();
    let (start, maturity) = s.interval_bounds(n - 1);
    if !(t >= start && t < maturity) {
        return Err(Error::Domain {
            what: "t",
            value: t,
            reason: "must lie in [T_{N-1}, T_N)",
        });
    }
    if !(v > 0.0) {
        return Err(Error::Domain {
            what: "V",
            value: v,
            reason: "firm value must be > 0",
        });
    }
    let vas = &spec.vasicek;
    let firm = &spec.firm;
    let k = s.final_payment();
    let lambda = s.intensity(n - 1);
    let delta = firm.delta;
    let b = firm.payout;

    let z = zcb_price(r, t, maturity, vas)?;
    let x = v / z;

    let horizon = maturity - t;
    let var_total = integrated_variance(t, maturity, maturity, vas, firm, quad)?;
    let (nd_minus, nd_plus) = digital_split(x / k, horizon, b, var_total);
    let maturity_leg = (-lambda * horizon).exp() * (k * nd_minus + delta * x * (-b * horizon).exp() * nd_plus);

    let recovery_leg = if lambda > 0.0 {
        let m = match variant.moneyness {
            RecoveryMoneyness::Scaled => delta * x / k,
            RecoveryMoneyness::Unscaled => x / k,
        };
        // The inner variance quadrature errors are surfaced through a cell.
        let failure = std::cell::Cell::new(None);
        let outer = QuadratureConfig {
            panels: quad.panels.max(512),
            ..*quad
        };
        let integral = integrate(
            |w| {
                if w == 0.0 {
                    return 0.0;
                }
                let tau = t + horizon * w * w;
                let to_tau = tau - t;
                let var = match integrated_variance(t, tau.min(maturity), maturity, vas, firm, quad) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.set(Some(e));
                        return 0.0;
                    }
                };
                let (n_minus, n_plus) = digital_split(m, to_tau, b, var);
                let payout_horizon = match variant.payout_discount {
                    IntegralPayoutDiscount::ToMaturity => horizon,
                    IntegralPayoutDiscount::ToRecoveryTime => to_tau,
                };
                let inner = k * n_minus + delta * x * (-b * payout_horizon).exp() * n_plus;
                (-lambda * to_tau).exp() * inner * 2.0 * horizon * w
            },
            0.0,
            1.0,
            &outer,
        )?;
        if let Some(e) = failure.take() {
            return Err(e);
        }
        lambda * integral
    } else {
        0.0
    };

    Ok(z * (maturity_leg + recovery_leg))
}
