use ndarray::{Array2, Array3, Zip};

use super::grid::GridSpec;
use super::stencil::{node_stencil, select_scheme, Position, SchemeKind, Stencil, StepRatios};
use super::surface::PriceSurface;
use crate::analytic::CashflowStrip;
use crate::error::{Error, Result};
use crate::model::{interface_condition, recovery_cap, terminal_payoff, ModelSpec};
use crate::stability::{check_scheme, Verdict};

/// One backward time step on a fixed interval.
#[derive(Debug, Clone)]
pub struct Stepper {
    spec: ModelSpec,
    interval: usize,
    scheme: SchemeKind,
    dt: f64,
    steps: usize,
    ratios: StepRatios,
    x_nodes: Vec<f64>,
    r_nodes: Vec<f64>,
    adv_x: Vec<f64>,
    adv_r: Vec<f64>,
}

impl Stepper {
    /// Builds a stepper after checking the stability conditions for the
    /// interval's actual time step.
    pub fn new(spec: &ModelSpec, grid: &GridSpec, interval: usize, scheme: SchemeKind) -> Result<Self> {
        let report = check_scheme(scheme, grid, spec, interval)?;
        if report.verdict != Verdict::Pass {
            let failing = report
                .conditions
                .iter()
                .find(|c| !c.satisfied)
                .map(|c| (c.name.to_string(), c.margin))
                .unwrap_or_else(|| ("unsupported correlation".to_string(), f64::NAN));
            return Err(Error::StabilityViolation {
                interval,
                condition: failing.0,
                margin: failing.1,
            });
        }
        Self::new_unchecked(spec, grid, interval, scheme)
    }

    /// Builds a stepper without consulting the stability conditions.
    pub fn new_unchecked(spec: &ModelSpec, grid: &GridSpec, interval: usize, scheme: SchemeKind) -> Result<Self> {
        grid.validate()?;
        if interval >= spec.schedule.len() {
            return Err(Error::Domain {
                what: "interval",
                value: interval as f64,
                reason: "interval index beyond the last coupon",
            });
        }
        let (start, end) = spec.schedule.interval_bounds(interval);
        let (steps, dt) = grid.time_steps(end - start);
        let sv = spec.firm.sv;
        let sr = spec.vasicek.sr;
        let ratios = StepRatios {
            mu_x: sv * sv * dt / (grid.dx * grid.dx),
            mu_r: sr * sr * dt / (grid.dr * grid.dr),
            rho: spec.firm.rho,
        };
        let r_nodes = grid.r_nodes();
        let adv_x = r_nodes
            .iter()
            .map(|r| dt * (r - spec.firm.payout - 0.5 * sv * sv) / grid.dx)
            .collect();
        let adv_r = r_nodes.iter().map(|r| dt * spec.vasicek.drift(*r) / grid.dr).collect();
        Ok(Self {
            spec: spec.clone(),
            interval,
            scheme,
            dt,
            steps,
            ratios,
            x_nodes: grid.x_nodes(),
            r_nodes,
            adv_x,
            adv_r,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn ratios(&self) -> StepRatios {
        self.ratios
    }

    pub fn scheme(&self) -> SchemeKind {
        self.scheme
    }

    pub fn x_nodes(&self) -> &[f64] {
        &self.x_nodes
    }

    pub fn r_nodes(&self) -> &[f64] {
        &self.r_nodes
    }

    /// Weights used at node `(l, m)`, before the division by
    /// `1 + dt (r_m + lambda)`.
    pub fn stencil(&self, l: usize, m: usize) -> Stencil {
        let px = Position::of(l, self.x_nodes.len());
        let pr = Position::of(m, self.r_nodes.len());
        node_stencil(self.scheme, &self.ratios, px, pr, self.adv_x[m], self.adv_r[m])
    }

    /// `1 + dt (r_m + lambda_i)`.
    pub fn discount(&self, m: usize) -> f64 {
        1.0 + self.dt * (self.r_nodes[m] + self.spec.schedule.intensity(self.interval))
    }

    fn check_shape(&self, slice: &Array2<f64>) -> Result<()> {
        if slice.dim() != (self.x_nodes.len(), self.r_nodes.len()) {
            return Err(Error::InvalidParameter {
                name: "slice",
                reason: format!(
                    "shape {:?} does not match the grid ({}, {})",
                    slice.dim(),
                    self.x_nodes.len(),
                    self.r_nodes.len()
                ),
            });
        }
        Ok(())
    }

    fn apply(&self, slice: &Array2<f64>, source: Option<&Array2<f64>>, t_out: f64) -> Result<Array2<f64>> {
        self.check_shape(slice)?;
        let (nx, nr) = slice.dim();
        let mut out = Array2::<f64>::zeros((nx, nr));
        Zip::indexed(&mut out).par_for_each(|(l, m), o| {
            let s = self.stencil(l, m);
            let mut acc = 0.0;
            for (p, row) in s.w.iter().enumerate() {
                for (q, &c) in row.iter().enumerate() {
                    if c != 0.0 {
                        acc += c * slice[[l + p - 1, m + q - 1]];
                    }
                }
            }
            if let Some(src) = source {
                acc += src[[l, m]];
            }
            *o = acc / self.discount(m);
        });
        if let Some(((l, m), _)) = out.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteValue { l, m, t: t_out });
        }
        Ok(out)
    }

    /// Recovery source `dt lambda min(delta e^x, Phi(r, t_n))` on every node.
    pub fn source(&self, t_n: f64) -> Result<Array2<f64>> {
        let lambda = self.spec.schedule.intensity(self.interval);
        let (nx, nr) = (self.x_nodes.len(), self.r_nodes.len());
        if lambda == 0.0 {
            return Ok(Array2::zeros((nx, nr)));
        }
        let strip = CashflowStrip::new(t_n, self.interval, &self.spec)?;
        let phi: Vec<f64> = self.r_nodes.iter().map(|r| strip.value(*r)).collect();
        let delta = self.spec.firm.delta;
        let scale = self.dt * lambda;
        Ok(Array2::from_shape_fn((nx, nr), |(l, m)| {
            scale * recovery_cap(self.x_nodes[l].exp(), phi[m], delta)
        }))
    }

    /// Maps the slice at `t_n` to the slice at `t_n - dt`.
    pub fn step(&self, slice: &Array2<f64>, t_n: f64) -> Result<Array2<f64>> {
        let src = self.source(t_n)?;
        self.apply(slice, Some(&src), t_n - self.dt)
    }

    /// The same step with the recovery source removed.
    pub fn step_homogeneous(&self, slice: &Array2<f64>) -> Result<Array2<f64>> {
        self.apply(slice, None, f64::NAN)
    }
}

/// One explicit step from `t_n` to `t_n - dt` on interval `interval`.
pub fn step(
    slice: &Array2<f64>,
    t_n: f64,
    interval: usize,
    spec: &ModelSpec,
    grid: &GridSpec,
    scheme: SchemeKind,
) -> Result<Array2<f64>> {
    Stepper::new(spec, grid, interval, scheme)?.step(slice, t_n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    /// Step even when the stability conditions fail or `|rho| >= 1/2`.
    pub force: bool,
}

/// Backward induction from maturity to `t = 0`.
pub fn solve(spec: &ModelSpec, grid: &GridSpec) -> Result<PriceSurface> {
    solve_with(spec, grid, SolveOptions::default())
}

pub fn solve_with(spec: &ModelSpec, grid: &GridSpec, opts: SolveOptions) -> Result<PriceSurface> {
    grid.validate()?;
    let scheme = if opts.force {
        SchemeKind::by_sign(spec.firm.rho)
    } else {
        select_scheme(spec.firm.rho)?
    };
    let s = &spec.schedule;
    let n = s.len();
    let x_nodes = grid.x_nodes();
    let r_nodes = grid.r_nodes();
    let (nx, nr) = (x_nodes.len(), r_nodes.len());
    let firm_values: Vec<f64> = x_nodes.iter().map(|x| x.exp()).collect();

    let mut current = Array2::from_shape_fn((nx, nr), |(l, _)| terminal_payoff(firm_values[l], spec));
    // Collected from maturity backwards, reversed at the end.
    let mut slices: Vec<(f64, usize, Array2<f64>)> = Vec::new();
    let mut step_sizes = vec![0.0; n];

    for i in (0..n).rev() {
        let stepper = if opts.force {
            Stepper::new_unchecked(spec, grid, i, scheme)?
        } else {
            Stepper::new(spec, grid, i, scheme)?
        };
        step_sizes[i] = stepper.dt();
        let (start, end) = s.interval_bounds(i);
        slices.push((end, i, current.clone()));
        let steps = stepper.steps();
        for k in 0..steps {
            let t_n = end - k as f64 * stepper.dt();
            current = stepper.step(&current, t_n)?;
            let t_out = if k + 1 == steps {
                start
            } else {
                end - (k + 1) as f64 * stepper.dt()
            };
            if k + 1 < steps || i == 0 {
                slices.push((t_out, i, current.clone()));
            }
        }
        if i > 0 {
            // `current` is B_i at T_i (ex-coupon); store it, then map to the
            // cum-coupon value seen by interval i - 1.
            slices.push((start, i, current.clone()));
            let coupon = s.coupon(i);
            let delta = spec.firm.delta;
            current = Array2::from_shape_fn((nx, nr), |(l, m)| {
                interface_condition(firm_values[l], current[[l, m]], coupon, delta)
            });
        }
    }

    slices.reverse();
    let times: Vec<f64> = slices.iter().map(|s| s.0).collect();
    let intervals: Vec<usize> = slices.iter().map(|s| s.1).collect();
    let mut values = Array3::<f64>::zeros((slices.len(), nx, nr));
    for (k, (_, _, v)) in slices.iter().enumerate() {
        values.index_axis_mut(ndarray::Axis(0), k).assign(v);
    }
    Ok(PriceSurface::new(
        x_nodes,
        r_nodes,
        times,
        intervals,
        values,
        step_sizes,
        spec,
    ))
}
