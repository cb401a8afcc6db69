//! Explicit nine-point stencils for one backward time step.
//!
//! With `mu_x = S_V^2 dt / dx^2`, `mu_r = S_r^2 dt / dr^2`,
//! `ax = dt (r - b - S_V^2/2) / dx`, `ar = dt (a1 - a2 r) / dr` and
//! `mix = rho sqrt(mu_x mu_r)`, an interior node is updated as
//!
//! ```text
//! B^{n-1}_{l,m} (1 + dt (r_m + lambda)) = sum_{p,q} w[p][q] B^n_{l+p-1, m+q-1}
//!                                         + dt lambda min(delta e^{x_l}, Phi(r_m, t_n))
//! ```
//!
//! where the weights differ only in how the cross derivative is
//! discretised. The weights always sum to one.

use crate::error::{Error, Result};

/// Discretisation of the cross derivative `B_xr`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Four-corner central difference; used for `rho = 0`.
    CentralMixed,
    /// `(B[l+1,m+1] - B[l+1,m] - B[l,m+1] + B[l,m]) / (dx dr)`; `0 < rho < 1/2`.
    ForwardMixed,
    /// `(B[l,m+1] - B[l,m] - B[l-1,m+1] + B[l-1,m]) / (dx dr)`; `-1/2 < rho < 0`.
    ForwardBackwardMixed,
}

impl SchemeKind {
    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::CentralMixed => "central",
            SchemeKind::ForwardMixed => "forward",
            SchemeKind::ForwardBackwardMixed => "forward-backward",
        }
    }

    /// The scheme a correlation would select if stability were ignored.
    pub fn by_sign(rho: f64) -> Self {
        if rho > 0.0 {
            SchemeKind::ForwardMixed
        } else if rho < 0.0 {
            SchemeKind::ForwardBackwardMixed
        } else {
            SchemeKind::CentralMixed
        }
    }
}

/// Picks the scheme whose stability result covers `rho`.
pub fn select_scheme(rho: f64) -> Result<SchemeKind> {
    if !(rho.abs() < 0.5) {
        return Err(Error::UnsupportedCorrelation(rho));
    }
    Ok(SchemeKind::by_sign(rho))
}

/// Weights on level-`n` values, indexed `w[dl + 1][dm + 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Stencil {
    pub w: [[f64; 3]; 3],
}

impl Stencil {
    pub fn sum(&self) -> f64 {
        self.w.iter().flatten().sum()
    }

    pub fn abs_sum(&self) -> f64 {
        self.w.iter().flatten().map(|c| c.abs()).sum()
    }

    #[inline]
    pub fn centre(&self) -> f64 {
        self.w[1][1]
    }
}

/// Per-step constants shared by every node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRatios {
    pub mu_x: f64,
    pub mu_r: f64,
    pub rho: f64,
}

impl StepRatios {
    #[inline]
    pub fn mix(&self) -> f64 {
        if self.rho == 0.0 {
            0.0
        } else {
            self.rho * (self.mu_x * self.mu_r).sqrt()
        }
    }
}

/// Where a node sits along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    Low,
    Interior,
    High,
}

impl Position {
    pub fn of(index: usize, len: usize) -> Self {
        if index == 0 {
            Position::Low
        } else if index + 1 == len {
            Position::High
        } else {
            Position::Interior
        }
    }
}

/// Adds one axis's diffusion and advection to the stencil.
///
/// Edge nodes use a linearly extrapolated ghost value, so the second
/// difference vanishes and the first difference becomes one-sided. The
/// one-sided difference is kept only when it points upwind; otherwise the
/// normal derivative is dropped, which keeps every weight non-negative.
fn add_axis(w: &mut [[f64; 3]; 3], axis: usize, pos: Position, mu: f64, adv: f64) {
    let mut put = |offset: isize, c: f64| {
        let k = (offset + 1) as usize;
        if axis == 0 {
            w[k][1] += c;
        } else {
            w[1][k] += c;
        }
    };
    match pos {
        Position::Interior => {
            put(0, -mu);
            put(1, 0.5 * mu + 0.5 * adv);
            put(-1, 0.5 * mu - 0.5 * adv);
        }
        Position::Low => {
            if adv > 0.0 {
                put(1, adv);
                put(0, -adv);
            }
        }
        Position::High => {
            if adv < 0.0 {
                put(-1, -adv);
                put(0, adv);
            }
        }
    }
}

/// Stencil at a node given its position on both axes and the local
/// advection numbers `ax`, `ar`. The cross term is applied only at nodes
/// interior in both directions.
pub fn node_stencil(scheme: SchemeKind, ratios: &StepRatios, px: Position, pr: Position, ax: f64, ar: f64) -> Stencil {
    let mut w = [[0.0; 3]; 3];
    w[1][1] = 1.0;
    add_axis(&mut w, 0, px, ratios.mu_x, ax);
    add_axis(&mut w, 1, pr, ratios.mu_r, ar);
    if px == Position::Interior && pr == Position::Interior {
        let mix = ratios.mix();
        match scheme {
            SchemeKind::CentralMixed => {
                let q = 0.25 * mix;
                w[2][2] += q;
                w[2][0] -= q;
                w[0][2] -= q;
                w[0][0] += q;
            }
            SchemeKind::ForwardMixed => {
                w[2][2] += mix;
                w[2][1] -= mix;
                w[1][2] -= mix;
                w[1][1] += mix;
            }
            SchemeKind::ForwardBackwardMixed => {
                w[1][2] += mix;
                w[1][1] -= mix;
                w[0][2] -= mix;
                w[0][1] += mix;
            }
        }
    }
    Stencil { w }
}
