use ndarray::{Array2, Array3, ArrayView2, Axis};

use crate::error::{Error, Result};
use crate::model::{terminal_payoff, ModelSpec, Side};

/// Solved values `B(x, r, t)` on the lattice, ordered by ascending time.
/// Coupon dates carry two slices, the cum-coupon one first.
#[derive(Debug, Clone)]
pub struct PriceSurface {
    x_nodes: Vec<f64>,
    r_nodes: Vec<f64>,
    times: Vec<f64>,
    interval_index: Vec<usize>,
    values: Array3<f64>,
    coupon_dates: Vec<f64>,
    step_sizes: Vec<f64>,
    spec: ModelSpec,
}

impl PriceSurface {
    pub(crate) fn new(
        x_nodes: Vec<f64>,
        r_nodes: Vec<f64>,
        times: Vec<f64>,
        interval_index: Vec<usize>,
        values: Array3<f64>,
        step_sizes: Vec<f64>,
        spec: &ModelSpec,
    ) -> Self {
        let s = &spec.schedule;
        let coupon_dates = (1..s.len()).map(|i| s.date(i)).collect();
        Self {
            x_nodes,
            r_nodes,
            times,
            interval_index,
            values,
            coupon_dates,
            step_sizes,
            spec: spec.clone(),
        }
    }

    /// Builds a surface from a function of `(V, r, t)` on the solver's
    /// time layout. Used for oracle checks of the risk metrics.
    pub fn from_fn<F: Fn(f64, f64, f64) -> f64>(
        spec: &ModelSpec,
        grid: &super::GridSpec,
        f: F,
    ) -> Result<Self> {
        grid.validate()?;
        let s = &spec.schedule;
        let mut times = Vec::new();
        let mut intervals = Vec::new();
        let mut step_sizes = Vec::new();
        for i in 0..s.len() {
            let (a, b) = s.interval_bounds(i);
            let (n, dt) = grid.time_steps(b - a);
            step_sizes.push(dt);
            for k in 0..=n {
                times.push(if k == n { b } else { a + k as f64 * dt });
                intervals.push(i);
            }
        }
        let x = grid.x_nodes();
        let r = grid.r_nodes();
        let mut values = Array3::zeros((times.len(), x.len(), r.len()));
        for ((k, l, m), v) in values.indexed_iter_mut() {
            *v = f(x[l].exp(), r[m], times[k]);
        }
        Ok(Self::new(x, r, times, intervals, values, step_sizes, spec))
    }

    pub fn x_nodes(&self) -> &[f64] {
        &self.x_nodes
    }

    pub fn r_nodes(&self) -> &[f64] {
        &self.r_nodes
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn interval_index(&self) -> &[usize] {
        &self.interval_index
    }

    pub fn values(&self) -> &Array3<f64> {
        &self.values
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    /// Actual time step used on each interval.
    pub fn step_sizes(&self) -> &[f64] {
        &self.step_sizes
    }

    pub fn slice(&self, k: usize) -> ArrayView2<'_, f64> {
        self.values.index_axis(Axis(0), k)
    }

    /// Stored slice index at time `t`. Coupon dates need a side.
    pub fn slice_index(&self, t: f64, side: Option<Side>) -> Result<usize> {
        let maturity = self.spec.schedule.maturity();
        let tol = 1e-12 * maturity.max(1.0);
        if !(t >= -tol && t <= maturity + tol) {
            return Err(Error::Domain {
                what: "t",
                value: t,
                reason: "must lie in [0, T_N]",
            });
        }
        let t = t.clamp(0.0, maturity);
        if let Some(pos) = self.coupon_dates.iter().position(|d| (d - t).abs() <= tol) {
            let date = self.coupon_dates[pos];
            let side = side.ok_or(Error::AmbiguousTime(date))?;
            let interval = match side {
                Side::Before => pos,
                Side::After => pos + 1,
            };
            return Ok(self.nearest_in_interval(date, interval));
        }
        let interval = self.spec.schedule.interval_at(t, Side::Before)?;
        Ok(self.nearest_in_interval(t, interval))
    }

    fn nearest_in_interval(&self, t: f64, interval: usize) -> usize {
        let mut best = 0;
        let mut gap = f64::INFINITY;
        for (k, (tk, ik)) in self.times.iter().zip(&self.interval_index).enumerate() {
            if *ik == interval && (tk - t).abs() < gap {
                gap = (tk - t).abs();
                best = k;
            }
        }
        best
    }

    /// Bilinear value in `(ln V, r)` on the slice nearest to `t`.
    ///
    /// At maturity the closed-form payoff is returned instead, since the
    /// terminal slice is discontinuous in `V`.
    pub fn query(&self, v: f64, r: f64, t: f64, side: Option<Side>) -> Result<f64> {
        let maturity = self.spec.schedule.maturity();
        let k = self.slice_index(t, side)?;
        let x = v.ln();
        let (xs, rs) = (&self.x_nodes, &self.r_nodes);
        let eps = 1e-12;
        let inside = v > 0.0
            && x >= xs[0] - eps
            && x <= xs[xs.len() - 1] + eps
            && r >= rs[0] - eps
            && r <= rs[rs.len() - 1] + eps;
        if !inside {
            return Err(Error::OutOfDomain { v, r, t });
        }
        if self.times[k] == maturity {
            return Ok(terminal_payoff(v, &self.spec));
        }
        Ok(bilinear(&self.slice(k), xs, rs, x, r))
    }
}

fn locate(nodes: &[f64], x: f64) -> (usize, f64) {
    let n = nodes.len();
    let h = (nodes[n - 1] - nodes[0]) / (n - 1) as f64;
    let s = ((x - nodes[0]) / h).clamp(0.0, (n - 1) as f64);
    let j = (s.floor() as usize).min(n - 2);
    let w = ((x - nodes[j]) / (nodes[j + 1] - nodes[j])).clamp(0.0, 1.0);
    (j, w)
}

/// Bilinear interpolation on a uniform lattice.
pub fn bilinear(values: &ArrayView2<'_, f64>, xs: &[f64], rs: &[f64], x: f64, r: f64) -> f64 {
    let (l, wx) = locate(xs, x);
    let (m, wr) = locate(rs, r);
    let v00 = values[[l, m]];
    let v10 = values[[l + 1, m]];
    let v01 = values[[l, m + 1]];
    let v11 = values[[l + 1, m + 1]];
    (1.0 - wx) * ((1.0 - wr) * v00 + wr * v01) + wx * ((1.0 - wr) * v10 + wr * v11)
}

/// Copies of the two stored slices at coupon date `T_i` (`i >= 1`).
pub fn coupon_slices(surface: &PriceSurface, i: usize) -> Result<(Array2<f64>, Array2<f64>)> {
    let date = surface.spec.schedule.date(i);
    let before = surface.slice_index(date, Some(Side::Before))?;
    let after = surface.slice_index(date, Some(Side::After))?;
    Ok((surface.slice(before).to_owned(), surface.slice(after).to_owned()))
}
