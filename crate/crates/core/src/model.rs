//! Model data and the payoff maps that glue the per-interval pricing
//! problems together.
//!
//! Time is measured in years from the valuation date `T_0 = 0`. Interval
//! `i` (zero based) is `(T_i, T_{i+1}]`; the bond pays coupon `C_{i+1}` at
//! its right end, and face plus the last coupon at `T_N`.

use crate::error::{invalid, Error, Result};

/// Vasicek short-rate dynamics `dr = (a1 - a2 r) dt + sr dW`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VasicekParams {
    pub a1: f64,
    /// Mean-reversion speed.
    pub a2: f64,
    /// Rate volatility.
    pub sr: f64,
}

impl VasicekParams {
    pub fn new(a1: f64, a2: f64, sr: f64) -> Result<Self> {
        let p = Self { a1, a2, sr };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.a1.is_finite() {
            return Err(invalid("a1", "must be finite"));
        }
        if !(self.a2 > 0.0 && self.a2.is_finite()) {
            return Err(invalid("a2", format!("must be > 0, got {}", self.a2)));
        }
        if !(self.sr >= 0.0 && self.sr.is_finite()) {
            return Err(invalid("sr", format!("must be >= 0, got {}", self.sr)));
        }
        Ok(())
    }

    /// Risk-neutral drift `a_r = a1 - a2 r`.
    #[inline]
    pub fn drift(&self, r: f64) -> f64 {
        self.a1 - self.a2 * r
    }
}

/// Firm-value dynamics and recovery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirmDynamics {
    /// Firm-value volatility.
    pub sv: f64,
    /// Continuous payout rate.
    pub payout: f64,
    /// Correlation between the firm-value and short-rate Wiener processes.
    pub rho: f64,
    /// Fractional recovery of firm value at default.
    pub delta: f64,
}

impl FirmDynamics {
    pub fn new(sv: f64, payout: f64, rho: f64, delta: f64) -> Result<Self> {
        let f = Self {
            sv,
            payout,
            rho,
            delta,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sv > 0.0 && self.sv.is_finite()) {
            return Err(invalid("sv", format!("must be > 0, got {}", self.sv)));
        }
        if !(self.payout >= 0.0 && self.payout.is_finite()) {
            return Err(invalid("payout", format!("must be >= 0, got {}", self.payout)));
        }
        if !(-1.0..=1.0).contains(&self.rho) {
            return Err(invalid("rho", format!("must lie in [-1, 1], got {}", self.rho)));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(invalid("delta", format!("must lie in [0, 1], got {}", self.delta)));
        }
        Ok(())
    }
}

/// Coupon dates, amounts, face and per-interval default intensities.
#[derive(Debug, Clone, PartialEq)]
pub struct CouponSchedule {
    dates: Vec<f64>,
    coupons: Vec<f64>,
    face: f64,
    intensities: Vec<f64>,
}

impl CouponSchedule {
    /// `intensities[i]` applies on `(T_i, T_{i+1}]`, so all three sequences
    /// have the same length `N`.
    pub fn new(dates: Vec<f64>, coupons: Vec<f64>, face: f64, intensities: Vec<f64>) -> Result<Self> {
        if dates.is_empty() {
            return Err(invalid("dates", "at least one payment date is required"));
        }
        if coupons.len() != dates.len() {
            return Err(invalid(
                "coupons",
                format!("expected {} coupons, got {}", dates.len(), coupons.len()),
            ));
        }
        if intensities.len() != dates.len() {
            return Err(invalid(
                "intensities",
                format!("expected {} intensities, got {}", dates.len(), intensities.len()),
            ));
        }
        if !(dates[0] > 0.0) {
            return Err(invalid("dates", "the first date must be > 0"));
        }
        if dates.iter().any(|d| !d.is_finite()) || dates.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("dates", "dates must be finite and strictly increasing"));
        }
        if coupons.iter().any(|c| !(*c >= 0.0 && c.is_finite())) {
            return Err(invalid("coupons", "coupons must be finite and >= 0"));
        }
        if !(face > 0.0 && face.is_finite()) {
            return Err(invalid("face", format!("must be > 0, got {face}")));
        }
        if intensities.iter().any(|l| !(*l >= 0.0 && l.is_finite())) {
            return Err(invalid("intensities", "intensities must be finite and >= 0"));
        }
        Ok(Self {
            dates,
            coupons,
            face,
            intensities,
        })
    }

    /// Number of payment dates `N`.
    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn dates(&self) -> &[f64] {
        &self.dates
    }

    pub fn coupons(&self) -> &[f64] {
        &self.coupons
    }

    pub fn intensities(&self) -> &[f64] {
        &self.intensities
    }

    pub fn face(&self) -> f64 {
        self.face
    }

    pub fn maturity(&self) -> f64 {
        self.dates[self.dates.len() - 1]
    }

    /// `T_i`, with `T_0 = 0`.
    pub fn date(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.dates[i - 1]
        }
    }

    /// `C_i` for `i` in `1..=N`.
    pub fn coupon(&self, i: usize) -> f64 {
        self.coupons[i - 1]
    }

    /// `(T_i, T_{i+1})` for interval `i`.
    pub fn interval_bounds(&self, i: usize) -> (f64, f64) {
        (self.date(i), self.date(i + 1))
    }

    pub fn intensity(&self, i: usize) -> f64 {
        self.intensities[i]
    }

    /// Promised amount at maturity, `F + C_N`.
    pub fn final_payment(&self) -> f64 {
        self.face + self.coupons[self.coupons.len() - 1]
    }

    /// Returns a copy with every coupon replaced by `coupon`.
    pub fn with_flat_coupons(&self, coupon: f64) -> Result<Self> {
        Self::new(
            self.dates.clone(),
            vec![coupon; self.dates.len()],
            self.face,
            self.intensities.clone(),
        )
    }

    /// Returns a copy with all intensities multiplied by `factor`.
    pub fn with_scaled_intensities(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.dates.clone(),
            self.coupons.clone(),
            self.face,
            self.intensities.iter().map(|l| l * factor).collect(),
        )
    }

    /// Index of the interval whose closure contains `t`. Interior coupon
    /// dates belong to the interval on the requested side.
    pub fn interval_at(&self, t: f64, side: Side) -> Result<usize> {
        let maturity = self.maturity();
        if !(0.0..=maturity).contains(&t) {
            return Err(Error::Domain {
                what: "t",
                value: t,
                reason: "must lie in [0, T_N]",
            });
        }
        let n = self.len();
        for i in 0..n {
            let end = self.dates[i];
            if t < end {
                return Ok(i);
            }
            if t == end {
                return Ok(if i + 1 < n && side == Side::After { i + 1 } else { i });
            }
        }
        Ok(n - 1)
    }
}

/// Which one-sided limit to use at a coupon date. `Before` is the
/// cum-coupon value `B_i(T_{i+1})`, `After` the ex-coupon `B_{i+1}(T_{i+1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Before,
    After,
}

/// The complete pricing problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub vasicek: VasicekParams,
    pub firm: FirmDynamics,
    pub schedule: CouponSchedule,
}

impl ModelSpec {
    pub fn new(vasicek: VasicekParams, firm: FirmDynamics, schedule: CouponSchedule) -> Result<Self> {
        vasicek.validate()?;
        firm.validate()?;
        Ok(Self {
            vasicek,
            firm,
            schedule,
        })
    }

    /// The worked example: two semi-annual coupons of 1 on a face of 10,
    /// one year to maturity, `rho = 0`.
    pub fn reference() -> Self {
        Self {
            vasicek: VasicekParams {
                a1: 0.379 * 0.098,
                a2: 0.379,
                sr: 0.077,
            },
            firm: FirmDynamics {
                sv: 1.0,
                payout: 0.05,
                rho: 0.0,
                delta: 0.5,
            },
            schedule: CouponSchedule {
                dates: vec![0.5, 1.0],
                coupons: vec![1.0, 1.0],
                face: 10.0,
                intensities: vec![0.1, 0.3],
            },
        }
    }
}

/// Maturity payoff: `F + C_N` if the firm can pay it, otherwise `delta V`.
pub fn terminal_payoff(v: f64, spec: &ModelSpec) -> f64 {
    interface_condition(v, spec.schedule.face(), spec.schedule.coupon(spec.schedule.len()), spec.firm.delta)
}

/// Coupon-date map: the holder receives `continuation + coupon` when the
/// firm value covers it, otherwise `delta V`. The threshold itself is
/// solvent.
#[inline]
pub fn interface_condition(v: f64, continuation: f64, coupon: f64, delta: f64) -> f64 {
    let promised = continuation + coupon;
    if v >= promised {
        promised
    } else {
        delta * v
    }
}

/// Recovery on unexpected default, `min(delta V, phi)`.
#[inline]
pub fn recovery_cap(v: f64, phi: f64, delta: f64) -> f64 {
    (delta * v).min(phi)
}
