//! Flat `key = value` run configuration.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::analytic::LastIntervalVariant;
use crate::error::{Error, Result};
use crate::fd::GridSpec;
use crate::model::{CouponSchedule, FirmDynamics, ModelSpec, Side, VasicekParams};
use crate::stability::suggest_dt;

/// Mesh ratio `mu_r` quoted with the worked example, and the step it was
/// quoted for.
pub const PRINTED_MU_R: f64 = 0.9625;
pub const PRINTED_MU_R_DT: f64 = 0.005;

/// How the rate spacing is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuRVariant {
    /// Use `dr` as configured.
    Recomputed,
    /// Replace `dr` by the spacing that gives `mu_r = 0.9625` at
    /// `dt = 0.005`, rounded so the rate range holds a whole number of cells.
    Printed,
}

/// Which form of the last-interval formula `method = analytic` uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eq26Variant {
    Printed,
    Corrected,
}

impl Eq26Variant {
    pub fn formula(&self) -> LastIntervalVariant {
        match self {
            Eq26Variant::Printed => LastIntervalVariant::PRINTED,
            Eq26Variant::Corrected => LastIntervalVariant::CORRECTED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Fd,
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Artifact {
    Price,
    Spread,
    Duration,
    Stability,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtChoice {
    Fixed(f64),
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub spec: ModelSpec,
    /// Spatial grid; its `dt_target` mirrors `dt` when that is fixed.
    pub grid: GridSpec,
    pub dt: DtChoice,
    pub dt_safety: f64,
    pub mu_r: MuRVariant,
    pub eq26: Eq26Variant,
    pub method: Method,
    pub outputs: Vec<Artifact>,
    pub price_v: Vec<f64>,
    pub price_r: Vec<f64>,
    pub price_t: Vec<f64>,
    pub coupon_side: Side,
}

/// Firm values of the printed price tables.
pub const TABLE_V: [f64; 9] = [5.00, 9.11, 10.06, 11.13, 12.30, 13.60, 20.30, 30.20, 33.40];

impl Default for RunConfig {
    fn default() -> Self {
        let spec = ModelSpec::reference();
        let grid = GridSpec::aligned(&spec);
        Self {
            dt: DtChoice::Fixed(grid.dt_target),
            grid,
            spec,
            dt_safety: 0.9,
            mu_r: MuRVariant::Recomputed,
            eq26: Eq26Variant::Corrected,
            method: Method::Fd,
            outputs: vec![Artifact::Price],
            price_v: TABLE_V.to_vec(),
            price_r: vec![0.02, 0.04, 0.06, 0.08],
            price_t: vec![0.0],
            coupon_side: Side::Before,
        }
    }
}

impl RunConfig {
    /// Grid after applying the `mu_r` variant and resolving `dt = auto`.
    pub fn resolved_grid(&self) -> Result<GridSpec> {
        let mut g = self.grid;
        if self.mu_r == MuRVariant::Printed {
            let exact = self.spec.vasicek.sr * (PRINTED_MU_R_DT / PRINTED_MU_R).sqrt();
            let cells = ((g.r_max - g.r_min) / exact).round().max(2.0);
            g.dr = (g.r_max - g.r_min) / cells;
        }
        match self.dt {
            DtChoice::Fixed(dt) => g.dt_target = dt,
            DtChoice::Auto => g.dt_target = suggest_dt(&g, &self.spec, self.dt_safety)?,
        }
        g.validate()?;
        Ok(g)
    }

    pub fn wants(&self, a: Artifact) -> bool {
        self.outputs.contains(&a)
    }

    /// Serialises every key, so that parsing the result gives back `self`.
    pub fn dump(&self) -> String {
        let s = &self.spec;
        let sch = &s.schedule;
        let g = &self.grid;
        let mut o = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(o, "{k} = {v}");
        };
        kv("a1", num(s.vasicek.a1));
        kv("a2", num(s.vasicek.a2));
        kv("sr", num(s.vasicek.sr));
        kv("sv", num(s.firm.sv));
        kv("payout", num(s.firm.payout));
        kv("rho", num(s.firm.rho));
        kv("delta", num(s.firm.delta));
        kv("face", num(sch.face()));
        kv("dates", list(sch.dates()));
        kv("coupons", list(sch.coupons()));
        kv("intensities", list(sch.intensities()));
        kv("x_min", num(g.x_min));
        kv("x_max", num(g.x_max));
        kv("dx", num(g.dx));
        kv("r_min", num(g.r_min));
        kv("r_max", num(g.r_max));
        kv("dr", num(g.dr));
        kv(
            "dt",
            match self.dt {
                DtChoice::Fixed(v) => num(v),
                DtChoice::Auto => "auto".into(),
            },
        );
        kv("dt_safety", num(self.dt_safety));
        kv(
            "mu_r",
            match self.mu_r {
                MuRVariant::Printed => "printed",
                MuRVariant::Recomputed => "recomputed",
            }
            .into(),
        );
        kv(
            "eq26",
            match self.eq26 {
                Eq26Variant::Printed => "printed",
                Eq26Variant::Corrected => "corrected",
            }
            .into(),
        );
        kv(
            "method",
            match self.method {
                Method::Fd => "fd",
                Method::Analytic => "analytic",
            }
            .into(),
        );
        kv(
            "outputs",
            self.outputs.iter().map(|a| artifact_name(*a)).collect::<Vec<_>>().join(", "),
        );
        kv("price_v", list(&self.price_v));
        kv("price_r", list(&self.price_r));
        kv("price_t", list(&self.price_t));
        kv(
            "coupon_side",
            match self.coupon_side {
                Side::Before => "before",
                Side::After => "after",
            }
            .into(),
        );
        o
    }

    /// Applies a command-line `--variant key=value` override.
    pub fn apply_variant(&mut self, arg: &str) -> Result<()> {
        let (k, v) = arg.split_once('=').ok_or_else(|| Error::Config {
            line: 0,
            message: format!("--variant expects key=value, got `{arg}`"),
        })?;
        match k.trim() {
            "mu_r" => self.mu_r = parse_mu_r(v.trim()).map_err(|m| Error::Config { line: 0, message: m })?,
            "eq26" => self.eq26 = parse_eq26(v.trim()).map_err(|m| Error::Config { line: 0, message: m })?,
            other => {
                return Err(Error::Config {
                    line: 0,
                    message: format!("unknown variant `{other}` (expected mu_r or eq26)"),
                })
            }
        }
        Ok(())
    }
}

fn num(v: f64) -> String {
    format!("{v:?}")
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(", ")
}

fn artifact_name(a: Artifact) -> &'static str {
    match a {
        Artifact::Price => "price",
        Artifact::Spread => "spread",
        Artifact::Duration => "duration",
        Artifact::Stability => "stability",
    }
}

fn parse_mu_r(v: &str) -> std::result::Result<MuRVariant, String> {
    match v {
        "printed" => Ok(MuRVariant::Printed),
        "recomputed" => Ok(MuRVariant::Recomputed),
        _ => Err(format!("mu_r must be `printed` or `recomputed`, got `{v}`")),
    }
}

fn parse_eq26(v: &str) -> std::result::Result<Eq26Variant, String> {
    match v {
        "printed" => Ok(Eq26Variant::Printed),
        "corrected" => Ok(Eq26Variant::Corrected),
        _ => Err(format!("eq26 must be `printed` or `corrected`, got `{v}`")),
    }
}

fn parse_f64(v: &str) -> std::result::Result<f64, String> {
    let x = f64::from_str(v.trim()).map_err(|_| format!("`{}` is not a number", v.trim()))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{}` is not finite", v.trim()))
    }
}

fn parse_list(v: &str) -> std::result::Result<Vec<f64>, String> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(parse_f64).collect()
}

/// Parses a configuration, starting from the defaults.
pub fn parse(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let (mut a1, mut a2, mut sr) = (cfg.spec.vasicek.a1, cfg.spec.vasicek.a2, cfg.spec.vasicek.sr);
    let f = cfg.spec.firm;
    let (mut sv, mut payout, mut rho, mut delta) = (f.sv, f.payout, f.rho, f.delta);
    let s = cfg.spec.schedule.clone();
    let mut face = s.face();
    let mut dates = s.dates().to_vec();
    let mut coupons = s.coupons().to_vec();
    let mut intensities = s.intensities().to_vec();
    let mut seen: HashMap<String, usize> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| Error::Config { line, message };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
        let key = key.trim();
        let value = value.trim();
        if let Some(first) = seen.insert(key.to_string(), line) {
            return Err(err(format!("`{key}` already set on line {first}")));
        }
        let scalar = || parse_f64(value).map_err(err);
        let seq = || parse_list(value).map_err(err);
        match key {
            "a1" => a1 = scalar()?,
            "a2" => a2 = scalar()?,
            "sr" => sr = scalar()?,
            "sv" => sv = scalar()?,
            "payout" => payout = scalar()?,
            "rho" => rho = scalar()?,
            "delta" => delta = scalar()?,
            "face" => face = scalar()?,
            "dates" => dates = seq()?,
            "coupons" => coupons = seq()?,
            "intensities" => intensities = seq()?,
            "x_min" => cfg.grid.x_min = scalar()?,
            "x_max" => cfg.grid.x_max = scalar()?,
            "dx" => cfg.grid.dx = scalar()?,
            "r_min" => cfg.grid.r_min = scalar()?,
            "r_max" => cfg.grid.r_max = scalar()?,
            "dr" => cfg.grid.dr = scalar()?,
            "dt" => {
                cfg.dt = if value == "auto" {
                    DtChoice::Auto
                } else {
                    let v = scalar()?;
                    cfg.grid.dt_target = v;
                    DtChoice::Fixed(v)
                }
            }
            "dt_safety" => cfg.dt_safety = scalar()?,
            "mu_r" => cfg.mu_r = parse_mu_r(value).map_err(err)?,
            "eq26" => cfg.eq26 = parse_eq26(value).map_err(err)?,
            "method" => {
                cfg.method = match value {
                    "fd" => Method::Fd,
                    "analytic" => Method::Analytic,
                    _ => return Err(err(format!("method must be `fd` or `analytic`, got `{value}`"))),
                }
            }
            "outputs" => {
                cfg.outputs = value
                    .split(',')
                    .map(|a| match a.trim() {
                        "price" => Ok(Artifact::Price),
                        "spread" => Ok(Artifact::Spread),
                        "duration" => Ok(Artifact::Duration),
                        "stability" => Ok(Artifact::Stability),
                        other => Err(err(format!("unknown output `{other}`"))),
                    })
                    .collect::<Result<_>>()?
            }
            "price_v" => cfg.price_v = seq()?,
            "price_r" => cfg.price_r = seq()?,
            "price_t" => cfg.price_t = seq()?,
            "coupon_side" => {
                cfg.coupon_side = match value {
                    "before" => Side::Before,
                    "after" => Side::After,
                    _ => return Err(err(format!("coupon_side must be `before` or `after`, got `{value}`"))),
                }
            }
            _ => return Err(err(format!("unknown key `{key}`"))),
        }
    }

    let line_of = |keys: &[&str]| keys.iter().filter_map(|k| seen.get(*k).copied()).min().unwrap_or(0);
    let anchor = |e: Error, keys: &[&str]| match e {
        Error::InvalidParameter { name, reason } => Error::Config {
            line: seen.get(name).copied().unwrap_or_else(|| line_of(keys)),
            message: format!("invalid `{name}`: {reason}"),
        },
        other => Error::Config {
            line: line_of(keys),
            message: other.to_string(),
        },
    };

    let vasicek = VasicekParams::new(a1, a2, sr).map_err(|e| anchor(e, &["a1", "a2", "sr"]))?;
    let firm = FirmDynamics::new(sv, payout, rho, delta).map_err(|e| anchor(e, &["sv", "payout", "rho", "delta"]))?;
    let schedule = CouponSchedule::new(dates, coupons, face, intensities)
        .map_err(|e| anchor(e, &["dates", "coupons", "face", "intensities"]))?;
    cfg.spec = ModelSpec::new(vasicek, firm, schedule).map_err(|e| anchor(e, &[]))?;

    let grid_keys = ["x_min", "x_max", "dx", "r_min", "r_max", "dr", "dt"];
    let mut check = cfg.grid;
    if cfg.dt == DtChoice::Auto {
        check.dt_target = 1.0;
    }
    check.validate().map_err(|e| anchor(e, &grid_keys))?;
    if !(cfg.dt_safety > 0.0 && cfg.dt_safety < 1.0) {
        return Err(Error::Config {
            line: line_of(&["dt_safety"]),
            message: "dt_safety must lie in (0, 1)".into(),
        });
    }
    if cfg.price_v.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Config {
            line: line_of(&["price_v"]),
            message: "price_v entries must be > 0".into(),
        });
    }
    if cfg.outputs.is_empty() {
        return Err(Error::Config {
            line: line_of(&["outputs"]),
            message: "outputs must name at least one artifact".into(),
        });
    }
    Ok(cfg)
}
