//! CSV data behind the price, spread and duration figures.

use std::path::{Path, PathBuf};

use super::commands::{checked_solve, fmt6};
use super::config::RunConfig;
use crate::analytic::{b_tilde, zcb_price};
use crate::error::Result;
use crate::fd::{GridSpec, PriceSurface};
use crate::model::{ModelSpec, Side};
use crate::risk::{credit_spread, duration, duration_flat_rate};

/// One emitted figure: file stem and CSV body.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub name: &'static str,
    pub csv: String,
}

/// Spacing of the time sweeps.
pub const T_STEP: f64 = 0.025;
/// Firm value used by the single-firm time curves.
pub const V_CURVE: f64 = 20.276;
/// Largest time step used for figure data.
pub const FIGURE_DT_MAX: f64 = 0.001;

/// Sample times on `[0, T_N]` (or `[0, T_N)`), with every coupon date
/// listed twice: cum-coupon first, then ex-coupon.
pub fn time_points(spec: &ModelSpec, include_maturity: bool) -> Vec<(f64, Option<Side>)> {
    let s = &spec.schedule;
    let maturity = s.maturity();
    let n = (maturity / T_STEP + 1e-9).floor() as usize;
    let mut ts: Vec<f64> = (0..=n).map(|k| k as f64 * T_STEP).collect();
    ts.extend((1..s.len()).map(|i| s.date(i)));
    ts.push(maturity);
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let coupon = |t: f64| (1..s.len()).map(|i| s.date(i)).find(|d| (d - t).abs() < 1e-9);
    let mut out = Vec::new();
    for t in ts {
        if !include_maturity && (t - maturity).abs() < 1e-9 {
            continue;
        }
        match coupon(t) {
            Some(d) => {
                out.push((d, Some(Side::Before)));
                out.push((d, Some(Side::After)));
            }
            None => out.push((t.min(maturity), None)),
        }
    }
    out
}

fn label(prefix: &str, v: f64) -> String {
    format!("{prefix}={v}")
}

fn header(abscissa: &str, series: &[String]) -> String {
    let mut h = abscissa.to_string();
    for s in series {
        h.push(',');
        h.push_str(s);
    }
    h.push('\n');
    h
}

fn row(o: &mut String, x: f64, ys: &[f64]) {
    o.push_str(&fmt6(x));
    for y in ys {
        o.push(',');
        o.push_str(&fmt6(*y));
    }
    o.push('\n');
}

/// Moves the `x` range by the change in `ln(F + C_N)`, so the maturity
/// jump keeps its place relative to the nodes.
fn shifted_grid(grid: &GridSpec, base: &ModelSpec, other: &ModelSpec) -> GridSpec {
    let shift = other.schedule.final_payment().ln() - base.schedule.final_payment().ln();
    GridSpec {
        x_min: grid.x_min + shift,
        x_max: grid.x_max + shift,
        ..*grid
    }
}

fn t_curves<F>(spec: &ModelSpec, include_maturity: bool, series: &[String], f: F) -> Result<String>
where
    F: Fn(usize, f64, Option<Side>) -> Result<f64>,
{
    let mut o = header("t", series);
    for (t, side) in time_points(spec, include_maturity) {
        let ys = (0..series.len()).map(|j| f(j, t, side)).collect::<Result<Vec<_>>>()?;
        row(&mut o, t, &ys);
    }
    Ok(o)
}

/// Computes every figure's data.
pub fn figure_tables(cfg: &RunConfig, force: bool, notes: &mut Vec<String>) -> Result<Vec<Figure>> {
    let spec = &cfg.spec;
    let mut grid = cfg.resolved_grid()?;
    if grid.dt_target > FIGURE_DT_MAX {
        notes.push(format!("figures: time step refined from {} to {}", fmt6(grid.dt_target), fmt6(FIGURE_DT_MAX)));
        grid.dt_target = FIGURE_DT_MAX;
    }
    let base = checked_solve(spec, &grid, force, notes)?;
    let mut figs = Vec::new();

    // Price against the short rate at t = 0.
    let vs = [5.0, 12.3, 33.4];
    let mut o = header("r", &vs.iter().map(|v| label("V", *v)).collect::<Vec<_>>());
    for k in 0..=16 {
        let r = 0.02 + 0.005 * k as f64;
        let ys = vs.iter().map(|v| base.query(*v, r, 0.0, None)).collect::<Result<Vec<_>>>()?;
        row(&mut o, r, &ys);
    }
    figs.push(Figure { name: "figure_4_1", csv: o });

    // Price against firm value at t = 0.
    let rs = [0.02, 0.04, 0.08];
    let mut o = header("V", &rs.iter().map(|r| label("r", *r)).collect::<Vec<_>>());
    for k in 0..=60 {
        let v = 5.0 + 0.5 * k as f64;
        let ys = rs.iter().map(|r| base.query(v, *r, 0.0, None)).collect::<Result<Vec<_>>>()?;
        row(&mut o, v, &ys);
    }
    figs.push(Figure { name: "figure_4_2", csv: o });

    let rs = [0.02, 0.04, 0.08];
    let names: Vec<String> = rs.iter().map(|r| label("r", *r)).collect();
    let csv = t_curves(spec, true, &names, |j, t, side| base.query(V_CURVE, rs[j], t, side))?;
    figs.push(Figure { name: "figure_4_3", csv });

    let vs = [9.11, 10.06, 11.13, 12.3];
    let names: Vec<String> = vs.iter().map(|v| label("V", *v)).collect();
    let csv = t_curves(spec, true, &names, |j, t, side| base.query(vs[j], 0.04, t, side))?;
    figs.push(Figure { name: "figure_4_4", csv });

    let vs = [13.6, 20.3, 30.2];
    let names: Vec<String> = vs.iter().map(|v| label("V", *v)).collect();
    let csv = t_curves(spec, false, &names, |j, t, side| credit_spread(&base, vs[j], 0.04, t, side))?;
    figs.push(Figure { name: "figure_4_5", csv });

    let rs = [0.02, 0.04, 0.06];
    let names: Vec<String> = rs.iter().map(|r| label("r", *r)).collect();
    let csv = t_curves(spec, false, &names, |j, t, side| credit_spread(&base, 20.3, rs[j], t, side))?;
    figs.push(Figure { name: "figure_4_6", csv });

    // Spread for coupon sizes 0, 1, 2.
    let mut coupon_surfaces: Vec<PriceSurface> = Vec::new();
    let cs = [0.0, 1.0, 2.0];
    for c in cs {
        let mut s = spec.clone();
        s.schedule = spec.schedule.with_flat_coupons(c)?;
        coupon_surfaces.push(checked_solve(&s, &shifted_grid(&grid, spec, &s), force, notes)?);
    }
    let names: Vec<String> = cs.iter().map(|c| label("C", *c)).collect();
    let csv = t_curves(spec, false, &names, |j, t, side| {
        credit_spread(&coupon_surfaces[j], V_CURVE, 0.04, t, side)
    })?;
    figs.push(Figure { name: "figure_4_7", csv });

    // Spread for scaled intensities.
    let scales = [0.5, 1.0, 2.0];
    let mut lambda_surfaces: Vec<PriceSurface> = Vec::new();
    for f in scales {
        let mut s = spec.clone();
        s.schedule = spec.schedule.with_scaled_intensities(f)?;
        lambda_surfaces.push(checked_solve(&s, &grid, force, notes)?);
    }
    let names: Vec<String> = scales.iter().map(|f| label("lambda_scale", *f)).collect();
    let csv = t_curves(spec, false, &names, |j, t, side| {
        credit_spread(&lambda_surfaces[j], V_CURVE, 0.04, t, side)
    })?;
    figs.push(Figure { name: "figure_4_8", csv });

    // Flat-rate duration of the coupon strip alone.
    let flows: Vec<(f64, f64)> = spec
        .schedule
        .dates()
        .iter()
        .copied()
        .zip(spec.schedule.coupons().iter().copied())
        .collect();
    let mut o = header("t", &["duration".to_string()]);
    for (t, side) in time_points(spec, false) {
        if side == Some(Side::Before) {
            continue;
        }
        let live: Vec<(f64, f64)> = flows.iter().copied().filter(|(ti, _)| *ti > t + 1e-12).collect();
        row(&mut o, t, &[duration_flat_rate(&live, 0.04, t)?]);
    }
    figs.push(Figure { name: "figure_4_9a", csv: o });

    // Vasicek zero-coupon duration: closed form and the surface differencing.
    let maturity = spec.schedule.maturity();
    let v = spec.vasicek;
    let zgrid = GridSpec {
        x_min: 0.0,
        x_max: 2.0 * grid.dx,
        ..grid
    };
    let zs = PriceSurface::from_fn(spec, &zgrid, |_, r, t| zcb_price(r, t, maturity, &v).unwrap_or(f64::NAN))?;
    let mut o = header("t", &["b_tilde".to_string(), "differenced".to_string()]);
    for (t, side) in time_points(spec, false) {
        if side == Some(Side::After) {
            continue;
        }
        let d = duration(&zs, zgrid.dx.exp(), 0.04, t, side)?;
        row(&mut o, t, &[b_tilde(t, maturity, &v)?, d]);
    }
    figs.push(Figure { name: "figure_4_9b", csv: o });

    let vs = [13.6, 20.3, 30.2];
    let names: Vec<String> = vs.iter().map(|v| label("V", *v)).collect();
    let csv = t_curves(spec, false, &names, |j, t, side| duration(&base, vs[j], 0.04, t, side))?;
    figs.push(Figure { name: "figure_4_10", csv });

    let rs = [0.02, 0.04, 0.06];
    let names: Vec<String> = rs.iter().map(|r| label("r", *r)).collect();
    let csv = t_curves(spec, false, &names, |j, t, side| duration(&base, V_CURVE, rs[j], t, side))?;
    figs.push(Figure { name: "figure_4_11", csv });

    Ok(figs)
}

/// Writes `figure_*.csv` into `dir`, creating it if needed.
pub fn write_figures(figs: &[Figure], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for f in figs {
        let p = dir.join(format!("{}.csv", f.name));
        std::fs::write(&p, &f.csv)?;
        paths.push(p);
    }
    Ok(paths)
}
