use std::fmt::Write as _;

use super::config::{Artifact, DtChoice, Method, RunConfig};
use crate::analytic::analytic_last_interval;
use crate::error::{Error, Result};
use crate::fd::{solve_with, GridSpec, PriceSurface, SolveOptions};
use crate::model::ModelSpec;
use crate::quadrature::QuadratureConfig;
use crate::risk::{credit_spread, duration};
use crate::stability::{check_all, StabilityReport, Verdict};

/// Fixed six-decimal rendering with negative zero folded to zero.
pub fn fmt6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// Output of a command: the main text and diagnostics meant for stderr.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommandOutput {
    pub text: String,
    pub notes: Vec<String>,
}

fn first_failure(reports: &[StabilityReport]) -> Option<Error> {
    for rep in reports {
        match rep.verdict {
            Verdict::Pass => {}
            Verdict::Unsupported => return Some(Error::UnsupportedCorrelation(rep.rho)),
            Verdict::Fail => {
                let c = rep.conditions.iter().find(|c| !c.satisfied)?;
                return Some(Error::StabilityViolation {
                    interval: rep.interval,
                    condition: c.name.to_string(),
                    margin: c.margin,
                });
            }
        }
    }
    None
}

/// Solves after checking every interval. With `force` the failure becomes
/// a warning note.
pub fn checked_solve(spec: &ModelSpec, grid: &GridSpec, force: bool, notes: &mut Vec<String>) -> Result<PriceSurface> {
    let reports = check_all(grid, spec)?;
    if let Some(e) = first_failure(&reports) {
        if !force {
            return Err(e);
        }
        notes.push(format!("WARNING: stepping outside the proven stability region ({e}); results may be meaningless"));
    }
    solve_with(spec, grid, SolveOptions { force })
}

/// Price rows `V,r,t,price` over the configured points.
pub fn cmd_price(cfg: &RunConfig, force: bool) -> Result<CommandOutput> {
    let mut notes = Vec::new();
    let spread = cfg.wants(Artifact::Spread);
    let dur = cfg.wants(Artifact::Duration);
    let mut text = String::from("V,r,t,price");
    if spread {
        text.push_str(",credit_spread");
    }
    if dur {
        text.push_str(",duration");
    }
    text.push('\n');
    let side = Some(cfg.coupon_side);

    match cfg.method {
        Method::Fd => {
            let grid = cfg.resolved_grid()?;
            if cfg.wants(Artifact::Stability) {
                notes.push(stability_text(&check_all(&grid, &cfg.spec)?));
            }
            let surface = checked_solve(&cfg.spec, &grid, force, &mut notes)?;
            let maturity = cfg.spec.schedule.maturity();
            for &v in &cfg.price_v {
                for &r in &cfg.price_r {
                    for &t in &cfg.price_t {
                        let price = surface.query(v, r, t, side)?;
                        let _ = write!(text, "{},{},{},{}", fmt6(v), fmt6(r), fmt6(t), fmt6(price));
                        if spread {
                            text.push(',');
                            if t < maturity {
                                text.push_str(&fmt6(credit_spread(&surface, v, r, t, side)?));
                            }
                        }
                        if dur {
                            text.push(',');
                            text.push_str(&fmt6(duration(&surface, v, r, t, side)?));
                        }
                        text.push('\n');
                    }
                }
            }
        }
        Method::Analytic => {
            if spread || dur {
                return Err(Error::Config {
                    line: 0,
                    message: "method = analytic supports the price output only".into(),
                });
            }
            let quad = QuadratureConfig::default();
            let variant = cfg.eq26.formula();
            notes.push(format!("analytic last-interval formula, variant {}", variant.label()));
            for &v in &cfg.price_v {
                for &r in &cfg.price_r {
                    for &t in &cfg.price_t {
                        let price = analytic_last_interval(v, r, t, &cfg.spec, &quad, variant)?;
                        let _ = writeln!(text, "{},{},{},{}", fmt6(v), fmt6(r), fmt6(t), fmt6(price));
                    }
                }
            }
        }
    }
    Ok(CommandOutput { text, notes })
}

/// Human-readable stability table.
pub fn stability_text(reports: &[StabilityReport]) -> String {
    let mut o = String::new();
    for rep in reports {
        let _ = writeln!(
            o,
            "interval {}: scheme {}, rho {}, dt {}, mu_x {}, mu_r {}, lambda {} (not used by any condition), verdict {}",
            rep.interval,
            rep.scheme.name(),
            fmt6(rep.rho),
            fmt6(rep.dt),
            fmt6(rep.mu_x),
            fmt6(rep.mu_r),
            fmt6(rep.lambda),
            rep.verdict
        );
        if rep.verdict == Verdict::Unsupported {
            let _ = writeln!(o, "  |rho| >= 0.5: no stability result covers this correlation");
            continue;
        }
        let _ = writeln!(
            o,
            "  {:<12} {:>12} {:>4} {:>12} {:>12} {:>10} {}",
            "condition", "attained", "", "bound", "margin", "worst_r", "ok"
        );
        for c in &rep.conditions {
            let _ = writeln!(
                o,
                "  {:<12} {:>12} {:>4} {:>12} {:>12} {:>10} {}",
                c.name,
                fmt6(c.attained),
                if c.strict { "<" } else { "<=" },
                fmt6(c.bound),
                fmt6(c.margin),
                c.worst_r.map(fmt6).unwrap_or_else(|| "-".into()),
                if c.satisfied { "yes" } else { "NO" }
            );
        }
    }
    o
}

/// Machine-readable stability table.
pub fn stability_csv(reports: &[StabilityReport]) -> String {
    let mut o = String::from("interval,scheme,verdict,condition,attained,bound,strict,margin,worst_r,satisfied\n");
    for rep in reports {
        if rep.verdict == Verdict::Unsupported {
            let a = rep.rho.abs();
            let _ = writeln!(
                o,
                "{},{},{},correlation,{},{},false,{},,false",
                rep.interval,
                rep.scheme.name(),
                rep.verdict,
                fmt6(a),
                fmt6(0.5),
                fmt6(0.5 - a)
            );
            continue;
        }
        for c in &rep.conditions {
            let _ = writeln!(
                o,
                "{},{},{},{},{},{},{},{},{},{}",
                rep.interval,
                rep.scheme.name(),
                rep.verdict,
                c.name,
                fmt6(c.attained),
                fmt6(c.bound),
                c.strict,
                fmt6(c.margin),
                c.worst_r.map(fmt6).unwrap_or_default(),
                c.satisfied
            );
        }
    }
    o
}

/// Stability report for the configured grid. Never refuses: when
/// `dt = auto` has no feasible step the configured fallback step is used.
pub fn cmd_stability(cfg: &RunConfig) -> Result<(CommandOutput, String)> {
    let mut notes = Vec::new();
    let grid = match cfg.resolved_grid() {
        Ok(g) => g,
        Err(e @ (Error::NoFeasibleDt { .. } | Error::UnsupportedCorrelation(_))) if cfg.dt == DtChoice::Auto => {
            let mut c = cfg.clone();
            c.dt = DtChoice::Fixed(cfg.grid.dt_target);
            notes.push(format!("dt = auto failed ({e}); reporting at dt = {}", fmt6(cfg.grid.dt_target)));
            c.resolved_grid()?
        }
        Err(e) => return Err(e),
    };
    let reports = check_all(&grid, &cfg.spec)?;
    Ok((
        CommandOutput {
            text: stability_text(&reports),
            notes,
        },
        stability_csv(&reports),
    ))
}
