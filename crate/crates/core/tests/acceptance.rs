//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::HashMap;
use std::time::Instant;

use discobond::analytic::{analytic_last_interval, d_plus_minus, norm_cdf, zcb_price, LastIntervalVariant};
use discobond::cli::config::{DtChoice, MuRVariant, RunConfig};
use discobond::cli::{cmd_price, figure_tables, write_figures};
use discobond::fd::{coupon_slices, solve, GridSpec, SchemeKind, Stepper};
use discobond::model::{terminal_payoff, ModelSpec, Side};
use discobond::quadrature::{simpson, QuadratureConfig};
use discobond::risk::duration_flat_rate;
use discobond::stability::check_interval;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TABLE_R: [f64; 4] = [0.02, 0.04, 0.06, 0.08];
const TABLE_V: [f64; 9] = [5.00, 9.11, 10.06, 11.13, 12.30, 13.60, 20.30, 30.20, 33.40];
const PRICE_TABLE: [[f64; 4]; 9] = [
    [3.257, 3.251, 3.245, 3.238],
    [5.103, 5.081, 5.059, 5.037],
    [5.452, 5.427, 5.401, 5.375],
    [5.812, 5.782, 5.751, 5.721],
    [6.178, 6.143, 6.108, 6.073],
    [6.549, 6.509, 6.469, 6.428],
    [8.028, 7.961, 7.894, 7.826],
    [9.333, 9.233, 9.134, 9.034],
    [9.612, 9.504, 9.397, 9.290],
];
/// Maturity column of the time table at `r = 0.04`.
const MATURITY_COLUMN: [&str; 9] = ["2.500", "4.555", "5.030", "11.000", "11.000", "11.000", "11.000", "11.000", "11.000"];

/// Relative-error limits for the price table.
const C1_MAX_REL: f64 = 0.02;
const C1_TIGHT_REL: f64 = 0.005;
const C1_TIGHT_COUNT: usize = 30;
const C1_SECONDS: f64 = 10.0;
const C3_MAX_ABS: f64 = 0.05;
const C4_PASS_CONFIGS: usize = 50;
const C4_FAIL_CONFIGS: usize = 20;
const C4_STEPS: usize = 200;
const C4_FAIL_MARGIN: f64 = -0.2;
const C4_GROWTH: f64 = 10.0;
const C4_GROWTH_COUNT: usize = 18;
const C5_TOL: f64 = 1e-12;
const C6_CONVEX_TOL: f64 = 1e-6;
const C6_ZCB_DURATION_TOL: f64 = 1e-4;
const C7_NORM_TOL: f64 = 1e-12;
const C7_D_TOL: f64 = 1e-10;
const C7_FLAT_DURATION: f64 = 0.7475;
const C7_FLAT_TOL: f64 = 1e-4;

struct Outcome {
    pass: bool,
    detail: String,
}

fn line(id: &str, o: &Outcome) {
    println!("{id}: {} | {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
}

fn sub(label: &str, pass: bool, detail: String) -> bool {
    println!("    [{}] {label}: {detail}", if pass { "ok" } else { "FAIL" });
    pass
}

/// Parses `V,r,t,price` rows into a map keyed by rounded `(V, r)`.
fn price_map(csv: &str) -> HashMap<(i64, i64), f64> {
    csv.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (((f[0] * 100.0).round() as i64, (f[1] * 100.0).round() as i64), f[3])
        })
        .collect()
}

struct TableFit {
    max_rel: f64,
    within_tight: usize,
    seconds: f64,
}

fn price_table_fit(cfg: &RunConfig) -> Result<TableFit, String> {
    let start = Instant::now();
    let out = cmd_price(cfg, false).map_err(|e| e.to_string())?;
    let seconds = start.elapsed().as_secs_f64();
    let prices = price_map(&out.text);
    let mut max_rel: f64 = 0.0;
    let mut within_tight = 0;
    for (i, v) in TABLE_V.iter().enumerate() {
        for (j, r) in TABLE_R.iter().enumerate() {
            let got = prices[&(((v * 100.0).round() as i64), ((r * 100.0).round() as i64))];
            let rel = (got - PRICE_TABLE[i][j]).abs() / PRICE_TABLE[i][j];
            max_rel = max_rel.max(rel);
            if rel <= C1_TIGHT_REL {
                within_tight += 1;
            }
        }
    }
    Ok(TableFit {
        max_rel,
        within_tight,
        seconds,
    })
}

fn criterion_1() -> Outcome {
    let mut printed_dr = RunConfig::default();
    printed_dr.mu_r = MuRVariant::Recomputed;
    let mut printed_mu = RunConfig::default();
    printed_mu.mu_r = MuRVariant::Printed;
    printed_mu.dt = DtChoice::Auto;

    let mut best: Option<(String, TableFit)> = None;
    let mut all_fast = true;
    for (name, cfg) in [("dr=0.02", printed_dr), ("mu_r=0.9625 (dr=0.2/36, dt=auto)", printed_mu)] {
        match price_table_fit(&cfg) {
            Ok(fit) => {
                all_fast &= fit.seconds < C1_SECONDS;
                println!(
                    "    variant {name}: max rel err {:.4}%, {}/36 within 0.5%, {:.2}s",
                    100.0 * fit.max_rel,
                    fit.within_tight,
                    fit.seconds
                );
                let better = match &best {
                    None => true,
                    Some((_, b)) => (fit.within_tight, -fit.max_rel) > (b.within_tight, -b.max_rel),
                };
                if better {
                    best = Some((name.to_string(), fit));
                }
            }
            Err(e) => println!("    variant {name}: could not run ({e})"),
        }
    }

    // The coarse ln 2 lattice, for reference only.
    for (name, dr) in [("ln2 lattice, dr=0.02", 0.02), ("ln2 lattice, dr=0.2/36", 0.2 / 36.0)] {
        let mut cfg = RunConfig::default();
        cfg.grid = GridSpec::coarse_log2().with_dr(dr);
        match price_table_fit(&cfg) {
            Ok(fit) => println!(
                "    info {name}: max rel err {:.4}%, {}/36 within 0.5%",
                100.0 * fit.max_rel,
                fit.within_tight
            ),
            Err(e) => println!("    info {name}: could not run ({e})"),
        }
    }

    match best {
        Some((name, fit)) => Outcome {
            pass: fit.max_rel <= C1_MAX_REL && fit.within_tight >= C1_TIGHT_COUNT && all_fast,
            detail: format!(
                "price table, better variant {name}: max rel err {:.4}% (limit 2%), {}/36 within 0.5% (need 30), runtime under {C1_SECONDS}s: {all_fast}",
                100.0 * fit.max_rel,
                fit.within_tight
            ),
        },
        None => Outcome {
            pass: false,
            detail: "no grid variant could be solved".into(),
        },
    }
}

fn criterion_2() -> Outcome {
    let mut cfg = RunConfig::default();
    cfg.price_r = vec![0.04];
    cfg.price_t = vec![1.0];
    let out = match cmd_price(&cfg, false) {
        Ok(o) => o,
        Err(e) => {
            return Outcome {
                pass: false,
                detail: e.to_string(),
            }
        }
    };
    let spec = ModelSpec::reference();
    let mut bad = Vec::new();
    for (row, want) in out.text.lines().skip(1).zip(MATURITY_COLUMN) {
        let f: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        let exact = terminal_payoff(f[0], &spec);
        let printed: f64 = want.parse().unwrap();
        if exact != printed || format!("{:.3}", f[3]) != want {
            bad.push(format!("V={} got {} want {want}", f[0], f[3]));
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            "maturity column at r = 0.04: all 9 rows exact".into()
        } else {
            bad.join("; ")
        },
    }
}

fn criterion_3() -> Outcome {
    let spec = ModelSpec::reference();
    let grid = GridSpec::aligned(&spec);
    let surface = match solve(&spec, &grid) {
        Ok(s) => s,
        Err(e) => {
            return Outcome {
                pass: false,
                detail: e.to_string(),
            }
        }
    };
    let quad = QuadratureConfig::default();
    let xs = surface.x_nodes().to_vec();
    let rs = surface.r_nodes().to_vec();
    let mut results = Vec::new();
    for variant in LastIntervalVariant::all() {
        let mut worst: f64 = 0.0;
        for t in [0.5, 0.75] {
            let k = surface.slice_index(t, Some(Side::After)).unwrap();
            let slice = surface.slice(k);
            for (l, x) in xs.iter().enumerate().skip(1).take(xs.len() - 2) {
                let v = x.exp();
                if !(5.0..=34.0).contains(&v) {
                    continue;
                }
                for (m, r) in rs.iter().enumerate().skip(1).take(rs.len() - 2) {
                    if !(0.02 - 1e-12..=0.08 + 1e-12).contains(r) {
                        continue;
                    }
                    let a = analytic_last_interval(v, *r, t, &spec, &quad, variant).unwrap();
                    worst = worst.max((a - slice[[l, m]]).abs());
                }
            }
        }
        println!("    variant {}: max |analytic - FD| = {:.5}", variant.label(), worst);
        results.push((variant.label(), worst));
    }
    let printed = results.iter().find(|r| r.0 == "printed").unwrap().1;
    let dropped = results.iter().find(|r| r.0 == "unscaled/maturity").unwrap().1;
    let (name, best) = results.iter().fold(("", f64::INFINITY), |acc, r| if r.1 < acc.1 { (r.0, r.1) } else { acc });
    Outcome {
        pass: best <= C3_MAX_ABS,
        detail: format!(
            "last interval, t in {{0.5, 0.75}}: printed {printed:.5}, delta dropped {dropped:.5}, winner `{name}` at {best:.5} (limit {C3_MAX_ABS})"
        ),
    }
}

/// Random model and lattice whose rho selects `scheme`.
fn random_setup(rng: &mut ChaCha8Rng, scheme: SchemeKind) -> (ModelSpec, GridSpec) {
    let mut spec = ModelSpec::reference();
    spec.firm.sv = rng.random_range(0.2..1.5);
    spec.firm.payout = rng.random_range(0.0..0.1);
    spec.vasicek.sr = rng.random_range(0.02..0.3);
    spec.vasicek.a2 = rng.random_range(0.1..1.0);
    spec.vasicek.a1 = spec.vasicek.a2 * rng.random_range(0.0..0.1);
    spec.firm.rho = match scheme {
        SchemeKind::CentralMixed => 0.0,
        SchemeKind::ForwardMixed => rng.random_range(0.01..0.49),
        SchemeKind::ForwardBackwardMixed => -rng.random_range(0.01..0.49),
    };
    spec.schedule = spec.schedule.with_scaled_intensities(rng.random_range(0.0..2.0)).unwrap();
    let dx = rng.random_range(0.05..0.3);
    let dr = rng.random_range(0.005..0.03);
    let r_min = rng.random_range(-0.02..0.05);
    let grid = GridSpec {
        x_min: 0.0,
        x_max: 20.0 * dx,
        dx,
        r_min,
        r_max: r_min + 10.0 * dr,
        dr,
        dt_target: 0.5,
    };
    (spec, grid)
}

/// Time step target giving the requested `mu_x + mu_r` on interval 0.
fn dt_for_mu_sum(spec: &ModelSpec, grid: &GridSpec, mu_sum: f64) -> f64 {
    let per_dt = spec.firm.sv.powi(2) / grid.dx.powi(2) + spec.vasicek.sr.powi(2) / grid.dr.powi(2);
    mu_sum / per_dt
}

fn max_abs(a: &Array2<f64>) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn criterion_4() -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for (s_idx, scheme) in [SchemeKind::CentralMixed, SchemeKind::ForwardMixed, SchemeKind::ForwardBackwardMixed]
        .into_iter()
        .enumerate()
    {
        let mut rng = ChaCha8Rng::seed_from_u64(4000 + s_idx as u64);
        let mut found = 0;
        let mut violations = 0;
        let mut draws = 0;
        while found < C4_PASS_CONFIGS && draws < 100_000 {
            draws += 1;
            let (spec, grid) = random_setup(&mut rng, scheme);
            let grid = grid.with_dt(dt_for_mu_sum(&spec, &grid, rng.random_range(0.05..1.0)));
            let Ok(stepper) = Stepper::new(&spec, &grid, 0, scheme) else {
                continue;
            };
            found += 1;
            let r = stepper.ratios();
            let lambda = spec.schedule.intensity(0);
            let factor = (1.0 + r.rho.abs() * (r.mu_x * r.mu_r).sqrt()) / (1.0 + stepper.dt() * (grid.r_min + lambda));
            let mut b = Array2::from_shape_fn((grid.nx(), grid.nr()), |_| rng.random_range(-1.0..1.0));
            for _ in 0..C4_STEPS {
                let next = stepper.step_homogeneous(&b).unwrap();
                if max_abs(&next) > max_abs(&b) * factor * (1.0 + 1e-12) {
                    violations += 1;
                    break;
                }
                b = next;
            }
        }
        pass &= found == C4_PASS_CONFIGS && violations == 0;

        let mut grown = 0;
        let mut tried = 0;
        let mut shortfalls = Vec::new();
        let mut seed = 9000 + 100 * s_idx as u64;
        while tried < C4_FAIL_CONFIGS {
            seed += 1;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (spec, grid) = random_setup(&mut rng, scheme);
            let grid = grid.with_dt(dt_for_mu_sum(&spec, &grid, rng.random_range(1.3..2.0)));
            let rep = check_interval(&grid, &spec, 0).unwrap();
            let mu = rep.condition("mu_sum").unwrap();
            if !(mu.margin < C4_FAIL_MARGIN) {
                continue;
            }
            tried += 1;
            let stepper = Stepper::new_unchecked(&spec, &grid, 0, scheme).unwrap();
            let eps = 1e-6;
            let mut b = Array2::from_shape_fn((grid.nx(), grid.nr()), |(l, m)| if (l + m) % 2 == 0 { eps } else { -eps });
            let mut growth = f64::INFINITY;
            for _ in 0..C4_STEPS {
                match stepper.step_homogeneous(&b) {
                    Ok(next) => b = next,
                    Err(_) => break,
                }
            }
            if b.iter().all(|v| v.is_finite()) {
                growth = max_abs(&b) / eps;
            }
            if growth >= C4_GROWTH {
                grown += 1;
            } else {
                shortfalls.push(format!("seed {seed}: growth {growth:.3e}"));
            }
        }
        for s in &shortfalls {
            println!("    shortfall {}: {s}", scheme.name());
        }
        pass &= grown >= C4_GROWTH_COUNT;
        details.push(format!(
            "{}: {found}/{C4_PASS_CONFIGS} PASS configs, {violations} bound violations; {grown}/{C4_FAIL_CONFIGS} unstable configs grew >=10x",
            scheme.name()
        ));
    }
    Outcome {
        pass,
        detail: details.join("; "),
    }
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    let spec = ModelSpec::reference();
    let grid = GridSpec::aligned(&spec);
    let surface = solve(&spec, &grid).unwrap();

    let (before, after) = coupon_slices(&surface, 1).unwrap();
    let c1 = spec.schedule.coupon(1);
    let mut worst_jump: f64 = 0.0;
    let mut solvent = 0;
    for ((l, m), a) in after.indexed_iter() {
        if surface.x_nodes()[l].exp() >= a + c1 {
            solvent += 1;
            worst_jump = worst_jump.max((before[[l, m]] - a - c1).abs());
        }
    }
    pass &= sub(
        "coupon jump identity",
        worst_jump <= C5_TOL && solvent > 0,
        format!("{solvent} solvent nodes, max |before - after - C_1| = {worst_jump:.3e}"),
    );

    let mut worst_sum: f64 = 0.0;
    let mut nodes = 0;
    let mut cases = vec![(spec.clone(), grid, SchemeKind::CentralMixed)];
    for rho in [0.3, -0.3] {
        let mut s = spec.clone();
        s.firm.rho = rho;
        cases.push((s, grid, SchemeKind::by_sign(rho)));
    }
    for (s, g, scheme) in &cases {
        for i in 0..s.schedule.len() {
            let st = Stepper::new_unchecked(s, g, i, *scheme).unwrap();
            for l in 0..g.nx() {
                for m in 0..g.nr() {
                    worst_sum = worst_sum.max((st.stencil(l, m).sum() - 1.0).abs());
                    nodes += 1;
                }
            }
        }
    }
    pass &= sub(
        "stencil coefficient sums",
        worst_sum <= C5_TOL,
        format!("{nodes} node stencils over three schemes, max |sum - 1| = {worst_sum:.3e}"),
    );

    let last = surface.times().len() - 1;
    let term = surface.slice(last);
    let exact = term
        .indexed_iter()
        .all(|((l, _), v)| *v == terminal_payoff(surface.x_nodes()[l].exp(), &spec));
    pass &= sub(
        "terminal slice",
        exact && surface.times()[last] == 1.0,
        format!("slice at t = {} equals the payoff nodewise: {exact}", surface.times()[last]),
    );
    Outcome {
        pass,
        detail: "coupon jump, stencil sums, terminal slice".into(),
    }
}

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

fn read_csv(path: &std::path::Path) -> Csv {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    Csv { header, rows }
}

/// Index pairs `(before, after)` of rows sharing the abscissa `t`.
fn jump_rows(c: &Csv, t: f64) -> (usize, usize) {
    let idx: Vec<usize> = (0..c.rows.len()).filter(|&k| (c.rows[k][0] - t).abs() < 1e-9).collect();
    assert_eq!(idx.len(), 2, "expected two rows at t = {t}");
    (idx[0], idx[1])
}

/// Every row has its series strictly ordered `col1 > col2 > ...` (or `<`).
fn ordered(c: &Csv, decreasing: bool) -> (bool, usize) {
    let mut bad = 0;
    for row in &c.rows {
        for w in row[1..].windows(2) {
            let ok = if decreasing { w[0] > w[1] } else { w[0] < w[1] };
            if !ok {
                bad += 1;
            }
        }
    }
    (bad == 0, bad)
}

fn criterion_6() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::default();
    let mut notes = Vec::new();
    let figs = figure_tables(&cfg, false, &mut notes).unwrap();
    write_figures(&figs, dir.path()).unwrap();
    let fig = |n: &str| read_csv(&dir.path().join(format!("{n}.csv")));
    let mut pass = true;

    let f1 = fig("figure_4_1");
    let dec_r = (1..f1.header.len()).all(|j| f1.rows.windows(2).all(|w| w[1][j] < w[0][j]));
    pass &= sub("4.1 price decreasing in r", dec_r, format!("series {:?}", &f1.header[1..]));

    let f2 = fig("figure_4_2");
    let inc_v = (1..f2.header.len()).all(|j| f2.rows.windows(2).all(|w| w[1][j] > w[0][j]));
    pass &= sub("4.2 price increasing in V", inc_v, format!("{} points per series", f2.rows.len()));
    let mut min_second: f64 = f64::INFINITY;
    let mut max_second: f64 = f64::NEG_INFINITY;
    for j in 1..f2.header.len() {
        for w in f2.rows.windows(3) {
            let d2 = w[2][j] - 2.0 * w[1][j] + w[0][j];
            min_second = min_second.min(d2);
            max_second = max_second.max(d2);
        }
    }
    pass &= sub(
        "4.2 price convex in V (second differences >= -1e-6)",
        min_second >= -C6_CONVEX_TOL,
        format!("second differences span [{min_second:.3e}, {max_second:.3e}]"),
    );
    println!("    [info] 4.2 concave in V (second differences <= 1e-6): {}", max_second <= C6_CONVEX_TOL);

    for n in ["figure_4_3", "figure_4_4"] {
        let f = fig(n);
        let (b, a) = jump_rows(&f, 0.5);
        let down = (1..f.header.len()).all(|j| f.rows[a][j] < f.rows[b][j]);
        let sizes: Vec<String> = (1..f.header.len()).map(|j| format!("{:.4}", f.rows[b][j] - f.rows[a][j])).collect();
        pass &= sub(&format!("{n} downward price jump at T_1"), down, format!("drops {}", sizes.join(", ")));
    }

    let (ok, bad) = ordered(&fig("figure_4_5"), true);
    pass &= sub("4.5 spread decreasing in V", ok, format!("{bad} out-of-order pairs"));
    let (ok, bad) = ordered(&fig("figure_4_6"), true);
    pass &= sub("4.6 spread decreasing in r", ok, format!("{bad} out-of-order pairs"));

    let f7 = fig("figure_4_7");
    let (b, a) = jump_rows(&f7, 0.5);
    let jumps: Vec<f64> = (1..4).map(|j| f7.rows[a][j] - f7.rows[b][j]).collect();
    let ok = jumps.iter().all(|j| *j >= 0.0) && jumps[0] < jumps[1] && jumps[1] < jumps[2];
    pass &= sub(
        "4.7 spread jump at T_1 non-negative and growing with C",
        ok,
        format!("jumps for C = 0, 1, 2: {:.5}, {:.5}, {:.5}", jumps[0], jumps[1], jumps[2]),
    );

    let f8 = fig("figure_4_8");
    let (ok, bad) = ordered(&f8, false);
    let broken: Vec<f64> = f8.rows.iter().filter(|r| !(r[1] < r[2] && r[2] < r[3])).map(|r| r[0]).collect();
    pass &= sub(
        "4.8 spread increasing with intensity",
        ok,
        format!(
            "{bad} out-of-order pairs, at t in [{}, {}]",
            broken.first().copied().unwrap_or(f64::NAN),
            broken.last().copied().unwrap_or(f64::NAN)
        ),
    );
    let f3 = fig("figure_4_3");
    let spec = ModelSpec::reference();
    println!(
        "    [info] 4.8 at t = 0, r = 0.04: bond {:.4} vs unexpected-default recovery delta V = {:.4}",
        f3.rows[0][2],
        spec.firm.delta * discobond::cli::figures::V_CURVE
    );

    let f9 = fig("figure_4_9b");
    let worst = f9.rows.iter().map(|r| (r[1] - r[2]).abs()).fold(0.0, f64::max);
    pass &= sub(
        "4.9b Vasicek bond duration equals B~(t,T)",
        worst <= C6_ZCB_DURATION_TOL,
        format!("max deviation {worst:.3e}"),
    );

    let (ok, bad) = ordered(&fig("figure_4_10"), false);
    pass &= sub("4.10 duration increasing in V", ok, format!("{bad} out-of-order pairs"));
    let (ok, bad) = ordered(&fig("figure_4_11"), false);
    pass &= sub("4.11 duration increasing in r", ok, format!("{bad} out-of-order pairs"));

    Outcome {
        pass,
        detail: "qualitative figure checks over the emitted CSV files".into(),
    }
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    let spec = ModelSpec::reference();

    let p = discobond::VasicekParams { sr: 0.3, ..spec.vasicek };
    let z = |r: f64, t: f64| zcb_price(r, t, 1.0, &p).unwrap();
    let residual = |h: f64| {
        let (r, t) = (0.04, 0.4);
        let zt = (z(r, t + h) - z(r, t - h)) / (2.0 * h);
        let zr = (z(r + h, t) - z(r - h, t)) / (2.0 * h);
        let zrr = (z(r + h, t) - 2.0 * z(r, t) + z(r - h, t)) / (h * h);
        (zt + 0.5 * p.sr * p.sr * zrr + p.drift(r) * zr - r * z(r, t)).abs()
    };
    let res: Vec<f64> = [0.08, 0.04, 0.02].iter().map(|h| residual(*h)).collect();
    let ratios = [res[0] / res[1], res[1] / res[2]];
    pass &= sub(
        "zcb PDE residual second order",
        ratios.iter().all(|q| (3.5..4.5).contains(q)),
        format!("residuals {:.3e}, {:.3e}, {:.3e}; ratios {:.3}, {:.3}", res[0], res[1], res[2], ratios[0], ratios[1]),
    );

    let density = |y: f64| (-0.5 * y * y).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let worst_n = [-3.0, -1.7, -0.4, 0.3, 1.0, 2.5, 4.0]
        .iter()
        .map(|x| (norm_cdf(*x) - (0.5 + simpson(density, 0.0, *x, 20_000))).abs())
        .fold(0.0, f64::max);
    pass &= sub("N1 accuracy", worst_n <= C7_NORM_TOL, format!("max error {worst_n:.3e}"));

    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let quad = QuadratureConfig::default();
    let mut worst_d: f64 = 0.0;
    for _ in 0..200 {
        let mut s = spec.clone();
        s.firm.rho = rng.random_range(-0.9..0.9);
        s.firm.sv = rng.random_range(0.05..1.5);
        s.vasicek.sr = rng.random_range(0.0..0.3);
        let x = rng.random_range(0.05..20.0);
        let t = rng.random_range(0.0..0.95);
        let (dp, dm) = d_plus_minus(x, t, 1.0, &s.vasicek, &s.firm, &quad).unwrap();
        let var = discobond::analytic::integrated_variance(t, 1.0, 1.0, &s.vasicek, &s.firm, &quad).unwrap();
        worst_d = worst_d.max((dp - dm - var.sqrt()).abs());
    }
    pass &= sub("d+ - d- identity", worst_d <= C7_D_TOL, format!("max deviation {worst_d:.3e} over 200 draws"));

    let d = duration_flat_rate(&[(0.5, 1.0), (1.0, 1.0)], 0.04, 0.0).unwrap();
    pass &= sub(
        "flat-rate duration",
        (d - C7_FLAT_DURATION).abs() <= C7_FLAT_TOL,
        format!("{d:.6} vs {C7_FLAT_DURATION}"),
    );
    Outcome {
        pass,
        detail: "analytic unit checks".into(),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("CRITERION 1 price table reproduction", criterion_1),
        ("CRITERION 2 maturity column", criterion_2),
        ("CRITERION 3 analytic vs FD on the last interval", criterion_3),
        ("CRITERION 4 stability concordance", criterion_4),
        ("CRITERION 5 structural identities", criterion_5),
        ("CRITERION 6 qualitative figure suite", criterion_6),
        ("CRITERION 7 analytic unit suite", criterion_7),
    ];
    let mut failed = 0;
    for (id, f) in criteria {
        println!("{id}");
        let o = f();
        line(id, &o);
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of 7 criteria passed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
