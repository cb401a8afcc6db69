//! Pricing of defaultable bonds with fixed discrete coupons in a two-factor
//! model: firm value with a Vasicek short rate, expected default at coupon
//! dates and unexpected default at a constant intensity between them.
//!
//! Prices come from explicit finite differences in `(ln V, r)`. Each
//! time step is gated by sufficient stability conditions on the mesh
//! ratios.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod fd;
pub mod model;
pub mod quadrature;
pub mod risk;
pub mod stability;

pub use error::{Error, Result};
pub use fd::{solve, GridSpec, PriceSurface, SchemeKind};
pub use model::{CouponSchedule, FirmDynamics, ModelSpec, Side, VasicekParams};
