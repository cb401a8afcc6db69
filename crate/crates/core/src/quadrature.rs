//! Composite Simpson integration with panel doubling.

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Starting panel count; must be even.
    pub panels: usize,
    /// Successive doublings stop once the estimates differ by less than this.
    pub abs_tol: f64,
    /// Give up beyond this many panels.
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            panels: 2,
            abs_tol: 1e-10,
            max_panels: 1 << 20,
        }
    }
}

impl QuadratureConfig {
    pub fn with_panels(panels: usize) -> Self {
        Self {
            panels,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.panels < 2 || self.panels % 2 != 0 {
            return Err(invalid("panels", format!("must be even and >= 2, got {}", self.panels)));
        }
        if !(self.abs_tol > 0.0) {
            return Err(invalid("abs_tol", "must be > 0"));
        }
        if self.max_panels < self.panels {
            return Err(invalid("max_panels", "must be >= panels"));
        }
        Ok(())
    }
}

/// Composite Simpson rule on `[a, b]` with a fixed even number of panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    debug_assert!(panels >= 2 && panels % 2 == 0);
    if a == b {
        return 0.0;
    }
    let h = (b - a) / panels as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for k in 1..panels {
        let y = f(a + h * k as f64);
        if k % 2 == 1 {
            odd += y;
        } else {
            even += y;
        }
    }
    h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even)
}

/// Doubles the panel count from `cfg.panels` until two successive Simpson
/// estimates agree within `cfg.abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    if a == b {
        return Ok(0.0);
    }
    let mut panels = cfg.panels;
    let mut prev = simpson(&f, a, b, panels);
    loop {
        panels *= 2;
        let next = simpson(&f, a, b, panels);
        let diff = (next - prev).abs();
        if !next.is_finite() {
            return Err(Error::QuadratureNonConvergence {
                panels,
                difference: f64::NAN,
            });
        }
        if diff < cfg.abs_tol {
            return Ok(next);
        }
        if panels >= cfg.max_panels {
            return Err(Error::QuadratureNonConvergence {
                panels,
                difference: diff,
            });
        }
        prev = next;
    }
}
