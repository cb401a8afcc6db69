//! Explicit finite differences in `x = ln V` and `r`.

mod grid;
mod solver;
mod stencil;
mod surface;

pub use grid::GridSpec;
pub use solver::{solve, solve_with, step, SolveOptions, Stepper};
pub use stencil::{node_stencil, select_scheme, Position, SchemeKind, Stencil, StepRatios};
pub use surface::{bilinear, coupon_slices, PriceSurface};
