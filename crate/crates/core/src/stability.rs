//! Sufficient stability conditions for the three explicit schemes.

use std::fmt;

use crate::error::{Error, Result};
use crate::fd::{GridSpec, SchemeKind};
use crate::model::ModelSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Unsupported,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Unsupported => "UNSUPPORTED",
        })
    }
}

/// One inequality `attained < bound` (or `<=` when not strict).
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub name: &'static str,
    pub attained: f64,
    pub bound: f64,
    pub strict: bool,
    pub satisfied: bool,
    /// `bound - attained`.
    pub margin: f64,
    /// Grid rate at which an `r`-dependent condition binds.
    pub worst_r: Option<f64>,
}

impl Condition {
    fn new(name: &'static str, attained: f64, bound: f64, strict: bool, worst_r: Option<f64>) -> Self {
        let satisfied = if strict { attained < bound } else { attained <= bound };
        Self {
            name,
            attained,
            bound,
            strict,
            satisfied,
            margin: bound - attained,
            worst_r,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub interval: usize,
    pub dt: f64,
    pub scheme: SchemeKind,
    pub rho: f64,
    pub verdict: Verdict,
    pub conditions: Vec<Condition>,
    pub mu_x: f64,
    pub mu_r: f64,
    /// Intensity on the interval; it never enters a condition.
    pub lambda: f64,
}

impl StabilityReport {
    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

struct Ratios {
    dt: f64,
    mu_x: f64,
    mu_r: f64,
}

fn ratios(grid: &GridSpec, spec: &ModelSpec, interval: usize) -> Result<Ratios> {
    grid.validate()?;
    if interval >= spec.schedule.len() {
        return Err(Error::Domain {
            what: "interval",
            value: interval as f64,
            reason: "interval index beyond the last coupon",
        });
    }
    let dt = grid.interval_dt(spec, interval);
    let sv = spec.firm.sv;
    let sr = spec.vasicek.sr;
    Ok(Ratios {
        dt,
        mu_x: sv * sv * dt / (grid.dx * grid.dx),
        mu_r: sr * sr * dt / (grid.dr * grid.dr),
    })
}

/// `step / (2 s^2) * |drift|`, with `0/0` read as 0.
fn cell_peclet(step: f64, s: f64, drift: f64) -> f64 {
    if drift == 0.0 {
        0.0
    } else if s == 0.0 {
        f64::INFINITY
    } else {
        step / (2.0 * s * s) * drift.abs()
    }
}

/// Largest value of `f` over the rate grid and where it occurs.
fn worst_over_r(grid: &GridSpec, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut best = (f64::NEG_INFINITY, grid.r_min);
    for r in grid.r_nodes() {
        let v = f(r);
        if v > best.0 || v.is_nan() {
            best = (v, r);
        }
    }
    best
}

fn advection(grid: &GridSpec, spec: &ModelSpec, bound_x: f64, bound_r: f64) -> [Condition; 2] {
    let sv = spec.firm.sv;
    let (ax, rx) = worst_over_r(grid, |r| cell_peclet(grid.dx, sv, r - spec.firm.payout - 0.5 * sv * sv));
    let (ar, rr) = worst_over_r(grid, |r| cell_peclet(grid.dr, spec.vasicek.sr, spec.vasicek.drift(r)));
    [
        Condition::new("advection_x", ax, bound_x, true, Some(rx)),
        Condition::new("advection_r", ar, bound_r, true, Some(rr)),
    ]
}

fn report(
    spec: &ModelSpec,
    interval: usize,
    scheme: SchemeKind,
    ratios: Ratios,
    conditions: Vec<Condition>,
) -> StabilityReport {
    let verdict = if conditions.iter().all(|c| c.satisfied) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    StabilityReport {
        interval,
        dt: ratios.dt,
        scheme,
        rho: spec.firm.rho,
        verdict,
        conditions,
        mu_x: ratios.mu_x,
        mu_r: ratios.mu_r,
        lambda: spec.schedule.intensity(interval),
    }
}

/// Conditions for the central cross-difference scheme (`rho = 0`).
pub fn check_central(grid: &GridSpec, spec: &ModelSpec, interval: usize) -> Result<StabilityReport> {
    let rho = spec.firm.rho;
    if rho != 0.0 {
        return Err(Error::WrongScheme {
            scheme: SchemeKind::CentralMixed.name(),
            rho,
        });
    }
    let q = ratios(grid, spec, interval)?;
    let mut c = vec![Condition::new("mu_sum", q.mu_x + q.mu_r, 1.0, true, None)];
    c.extend(advection(grid, spec, 0.5, 0.5));
    Ok(report(spec, interval, SchemeKind::CentralMixed, q, c))
}

/// Shared body of the one-sided schemes; `s` is `rho` for the forward
/// scheme and `-rho` for the forward-backward one.
fn one_sided(grid: &GridSpec, spec: &ModelSpec, interval: usize, scheme: SchemeKind, s: f64) -> Result<StabilityReport> {
    let q = ratios(grid, spec, interval)?;
    let kx = s * (q.mu_r / q.mu_x).sqrt();
    let kr = s * (q.mu_x / q.mu_r).sqrt();
    let mut c = vec![
        Condition::new("mu_sum", q.mu_x + q.mu_r - s * (q.mu_x * q.mu_r).sqrt(), 1.0, false, None),
        Condition::new("mix_ratio_x", kx, 0.5, true, None),
        Condition::new("mix_ratio_r", kr, 0.5, true, None),
    ];
    c.extend(advection(grid, spec, 0.5 - kx, 0.5 - kr));
    Ok(report(spec, interval, scheme, q, c))
}

/// Conditions for the forward cross-difference scheme (`0 < rho < 1/2`).
pub fn check_forward(grid: &GridSpec, spec: &ModelSpec, interval: usize) -> Result<StabilityReport> {
    let rho = spec.firm.rho;
    if !(rho > 0.0 && rho < 0.5) {
        return Err(Error::WrongScheme {
            scheme: SchemeKind::ForwardMixed.name(),
            rho,
        });
    }
    one_sided(grid, spec, interval, SchemeKind::ForwardMixed, rho)
}

/// Conditions for the forward-backward cross-difference scheme
/// (`-1/2 < rho < 0`).
pub fn check_backward(grid: &GridSpec, spec: &ModelSpec, interval: usize) -> Result<StabilityReport> {
    let rho = spec.firm.rho;
    if !(rho < 0.0 && rho > -0.5) {
        return Err(Error::WrongScheme {
            scheme: SchemeKind::ForwardBackwardMixed.name(),
            rho,
        });
    }
    one_sided(grid, spec, interval, SchemeKind::ForwardBackwardMixed, -rho)
}

/// Dispatches on `scheme`, which must match the sign of `rho`.
pub fn check_scheme(scheme: SchemeKind, grid: &GridSpec, spec: &ModelSpec, interval: usize) -> Result<StabilityReport> {
    match scheme {
        SchemeKind::CentralMixed => check_central(grid, spec, interval),
        SchemeKind::ForwardMixed => check_forward(grid, spec, interval),
        SchemeKind::ForwardBackwardMixed => check_backward(grid, spec, interval),
    }
}

/// Report for the scheme that `rho` selects; `UNSUPPORTED` with no
/// conditions when `|rho| >= 1/2`.
pub fn check_interval(grid: &GridSpec, spec: &ModelSpec, interval: usize) -> Result<StabilityReport> {
    let rho = spec.firm.rho;
    if rho.abs() >= 0.5 {
        let q = ratios(grid, spec, interval)?;
        return Ok(StabilityReport {
            interval,
            dt: q.dt,
            scheme: SchemeKind::by_sign(rho),
            rho,
            verdict: Verdict::Unsupported,
            conditions: Vec::new(),
            mu_x: q.mu_x,
            mu_r: q.mu_r,
            lambda: spec.schedule.intensity(interval),
        });
    }
    check_scheme(SchemeKind::by_sign(rho), grid, spec, interval)
}

/// One report per coupon interval.
pub fn check_all(grid: &GridSpec, spec: &ModelSpec) -> Result<Vec<StabilityReport>> {
    (0..spec.schedule.len()).map(|i| check_interval(grid, spec, i)).collect()
}

/// Smallest time step accepted by the search.
pub const DT_FLOOR: f64 = 1e-7;

/// Largest time step target for which every interval passes with every
/// margin at least `(1 - safety)` of its bound.
pub fn suggest_dt(grid: &GridSpec, spec: &ModelSpec, safety: f64) -> Result<f64> {
    if !(safety > 0.0 && safety < 1.0) {
        return Err(crate::error::invalid("safety", "must lie in (0, 1)"));
    }
    let rho = spec.firm.rho;
    if rho.abs() >= 0.5 {
        return Err(Error::UnsupportedCorrelation(rho));
    }
    let cx = spec.firm.sv.powi(2) / grid.dx.powi(2);
    let cr = spec.vasicek.sr.powi(2) / grid.dr.powi(2);
    // mu_sum is linear in dt.
    let per_dt = cx + cr + rho.abs() * (cx * cr).sqrt();
    let mut dt = if per_dt > 0.0 { safety / per_dt } else { 1.0 };
    let s = &spec.schedule;
    let accepted = |dt: f64| -> Result<Option<f64>> {
        let g = grid.with_dt(dt);
        let mut actual = f64::INFINITY;
        for i in 0..s.len() {
            let rep = check_interval(&g, spec, i)?;
            let ok = rep.verdict == Verdict::Pass
                && rep
                    .conditions
                    .iter()
                    .all(|c| c.margin >= (1.0 - safety) * c.bound);
            if !ok {
                return Ok(None);
            }
            actual = actual.min(rep.dt);
        }
        Ok(Some(actual))
    };
    while dt >= DT_FLOOR {
        if let Some(actual) = accepted(dt)? {
            return Ok(actual);
        }
        dt *= 0.5;
    }
    Err(Error::NoFeasibleDt { floor: DT_FLOOR })
}
