//! Bundled witness families and the end-to-end checks run on them.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

use crate::analytic::scan::{circle_extrema, max_spherical_on_annulus, max_spherical_on_disk, wrap_angle};
use crate::analytic::Disk;
use crate::config::LabConfig;
use crate::dsl::{parse_fn_sources, FnSource};
use crate::error::{Error, Result};
use crate::report::{CheckReport, Verdict};
use crate::roots::{locate_a_points, verify_lemma7, Lemma7Verdict};
use crate::zalcman::run_sequence;
use crate::zerofree::{extract_form, verify_form_bounds};

/// Function sources used by the scenarios, in the fn-file format.
pub const BUNDLED_SOURCES: &str = include_str!("sources.json");

/// Check identifiers a scenario may list.
pub const KNOWN_CHECKS: [&str; 11] = [
    "sample_modulus",
    "run_sequence",
    "extract_form",
    "verify_form_bounds",
    "spherical_at_zero",
    "max_spherical_on_disk",
    "max_spherical_on_annulus",
    "locate_a_points",
    "factor_modulus",
    "verify_lemma7",
    "circle_extrema",
];

/// Largest spherical derivative allowed on `0.2 ≤ |z| ≤ 0.8` in the blow-up scenarios.
pub const ANNULUS_BOUND: f64 = 1.0;
/// Tolerance on `arg c` and `|c|` for the last index of the dichotomy scenarios.
pub const FORM_TOL: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub id: &'static str,
    pub source: &'static str,
    /// Sequence indices or radii.
    pub schedule: Vec<f64>,
    pub checks: Vec<&'static str>,
    pub expected: Verdict,
}

/// All bundled scenarios in declaration order.
pub fn scenarios() -> Vec<Scenario> {
    let ks = vec![10.0, 20.0, 40.0];
    let radii = vec![1.0, 2.0, 4.0, 8.0];
    let dichotomy = vec!["sample_modulus", "run_sequence", "extract_form", "verify_form_bounds"];
    let blowup = vec!["spherical_at_zero", "max_spherical_on_disk", "max_spherical_on_annulus"];
    let sc = |id, source, schedule: &Vec<f64>, checks: &Vec<&'static str>, expected| Scenario {
        id,
        source,
        schedule: schedule.clone(),
        checks: checks.clone(),
        expected,
    };
    vec![
        sc("dichotomy", "wave", &ks, &dichotomy, Verdict::Pass),
        sc("dichotomy-conjugate", "wave_conjugate", &ks, &dichotomy, Verdict::Pass),
        sc("origin-blowup", "affine_zero", &ks, &blowup, Verdict::Pass),
        sc("origin-blowup-centered", "affine_zero", &ks, &blowup, Verdict::Pass),
        sc("theorem2-form", "affine_zero", &ks, &vec!["locate_a_points", "factor_modulus"], Verdict::Pass),
        sc("theorem2-lemma7", "affine_zero", &ks, &vec!["verify_lemma7"], Verdict::HypothesisFailed),
        sc("0a1-rescale", "exp_dynamics", &radii, &vec!["circle_extrema"], Verdict::Pass),
        sc("0a1-rescale-constant", "constant_one", &radii, &vec!["circle_extrema"], Verdict::HypothesisFailed),
    ]
}

pub fn find_scenario(id: &str) -> Option<Scenario> {
    scenarios().into_iter().find(|s| s.id == id)
}

pub fn bundled_sources() -> Result<Vec<FnSource>> {
    parse_fn_sources(BUNDLED_SOURCES)
}

fn source(name: &str) -> Result<FnSource> {
    bundled_sources()?
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::InvalidArgument(format!("no bundled source `{name}`")))
}

/// Runs one scenario, optionally with its schedule replaced, and records
/// whether the verdict matches the expected one.
pub fn run_scenario(s: &Scenario, schedule: Option<&[f64]>, cfg: &LabConfig) -> Result<CheckReport> {
    let sched = schedule.unwrap_or(&s.schedule);
    let src = source(s.source)?;
    let report = match s.id {
        "dichotomy" => scenario_dichotomy(&src, sched, -FRAC_PI_2, cfg),
        "dichotomy-conjugate" => scenario_dichotomy(&src, sched, FRAC_PI_2, cfg),
        "origin-blowup" => scenario_origin_blowup(&src, sched, false, cfg),
        "origin-blowup-centered" => scenario_origin_blowup(&src, sched, true, cfg),
        "theorem2-form" => scenario_theorem2_form(&src, sched, cfg),
        "theorem2-lemma7" => scenario_theorem2_lemma7(&src, sched, cfg),
        "0a1-rescale" | "0a1-rescale-constant" => scenario_0a1_rescale(&src, sched, cfg),
        other => return Err(Error::InvalidArgument(format!("unknown scenario `{other}`"))),
    }?;
    let mut report = report
        .meta("scenario", s.id)
        .meta("expected", s.expected)
        .meta("matches_expected", false);
    let matches = report.verdict == s.expected;
    report.metadata.insert("matches_expected".into(), matches.into());
    report.check = s.id.to_string();
    report.config_hash = Some(cfg.hash());
    Ok(report)
}

fn strictly_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] > w[0])
}

fn validate_indices(ks: &[f64], min_len: usize, min_value: f64) -> Result<()> {
    if ks.len() < min_len {
        return Err(Error::ScheduleInvalid(format!(
            "{} indices given, at least {min_len} needed for a trend",
            ks.len()
        )));
    }
    if !strictly_increasing(ks) || ks.iter().any(|k| !(*k >= min_value && k.is_finite())) {
        return Err(Error::ScheduleInvalid(format!(
            "indices must be strictly increasing and at least {min_value}"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct DichotomyRow {
    k: f64,
    ln_abs_plus: f64,
    ln_abs_minus: f64,
    z_k: Complex64,
    rho: f64,
    r_k: f64,
    c: Complex64,
    arg_error: f64,
    modulus_error: f64,
    c_bound_ok: bool,
    delta_margin: f64,
}

/// `f_k = exp(∓ikz)`: blow-up on one side of the real axis, decay on the
/// other, and rescaled limits of the form `exp(c z + const)` with `c → ±2i`.
pub fn scenario_dichotomy(src: &FnSource, ks: &[f64], target_arg: f64, cfg: &LabConfig) -> Result<CheckReport> {
    validate_indices(ks, 3, f64::MIN_POSITIVE)?;
    let family = |k: f64| src.instantiate(&[("k", k)]);
    let (plus, minus) = (Complex64::new(0.0, 0.3), Complex64::new(0.0, -0.3));
    let run = run_sequence(&family, Complex64::new(0.0, 0.0), ks, &cfg.sequence_options())?;
    let mut rows = Vec::new();
    for row in &run.rows {
        let f = family(row.k)?;
        let g = f.rescaled(row.z_k, row.rho);
        let form = extract_form(&g, cfg.form_radius, &cfg.form_options())?;
        let bounds = verify_form_bounds(&form, &cfg.delta_grid())?;
        rows.push(DichotomyRow {
            k: row.k,
            ln_abs_plus: f.ln_abs(plus)?,
            ln_abs_minus: f.ln_abs(minus)?,
            z_k: row.z_k,
            rho: row.rho,
            r_k: row.r_k,
            c: form.c,
            arg_error: wrap_angle(form.c.arg() - target_arg).abs(),
            modulus_error: (form.c.norm() - 2.0).abs(),
            c_bound_ok: bounds.c_bound_ok,
            delta_margin: bounds.delta_margin,
        });
    }
    let lp: Vec<f64> = rows.iter().map(|r| if target_arg < 0.0 { r.ln_abs_plus } else { r.ln_abs_minus }).collect();
    let lm: Vec<f64> = rows.iter().map(|r| if target_arg < 0.0 { r.ln_abs_minus } else { r.ln_abs_plus }).collect();
    let step = |v: &[f64]| v.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let growth_step = step(&lp);
    let decay_step = step(&lm.iter().map(|x| -x).collect::<Vec<_>>());
    let errs: Vec<f64> = rows.iter().map(|r| r.arg_error + r.modulus_error).collect();
    let trend_ok = errs.windows(2).all(|w| w[1] <= w[0] + 1e-9);
    let last = rows.last().expect("at least three rows");
    let mut report = CheckReport::new("dichotomy")
        .margin("growth_step_min", growth_step)
        .margin("decay_step_min", decay_step)
        .margin("arg_error_last", FORM_TOL - last.arg_error)
        .margin("modulus_error_last", FORM_TOL - last.modulus_error)
        .margin("bound12_margin_min", run.min_bound12_margin)
        .meta("target_arg", target_arg)
        .meta("r_strictly_increasing", run.r_strictly_increasing)
        .meta("rows", &rows);
    if !(growth_step > 0.0) {
        report = report.fail(Some(plus), growth_step, "|f_k| does not grow monotonically on the growth side");
    } else if !(decay_step > 0.0) {
        report = report.fail(Some(minus), decay_step, "|f_k| does not decay monotonically on the decay side");
    } else if last.arg_error > FORM_TOL || last.modulus_error > FORM_TOL {
        report = report.fail(Some(last.c), last.k, "extracted c is not within 0.05 of the limit");
    } else if !trend_ok {
        report = report.fail(None, errs[errs.len() - 1], "distance of c from its limit does not shrink with k");
    }
    Ok(report)
}

#[derive(Serialize)]
struct BlowupRow {
    k: f64,
    a_k: f64,
    spherical_at_zero: f64,
    near_origin_max: f64,
    annulus_max: f64,
    annulus_argmax: Complex64,
}

/// `f_k = k²(z − a_k)`: unbounded spherical derivative at the origin and a
/// uniform bound on the annulus `0.2 ≤ |z| ≤ 0.8`.
pub fn scenario_origin_blowup(src: &FnSource, ks: &[f64], centered: bool, cfg: &LabConfig) -> Result<CheckReport> {
    validate_indices(ks, 2, 1.0)?;
    let grid = cfg.polar_grid();
    let (radial, angular) = grid.polar_counts();
    let mut rows = Vec::new();
    for &k in ks {
        let a_k = if centered { 0.0 } else { 1.0 / k };
        let f = src.instantiate(&[("c", k * k), ("a", a_k)])?;
        let at_zero = f.spherical_derivative(Complex64::new(a_k, 0.0))?;
        let near = max_spherical_on_disk(&f, Complex64::new(0.0, 0.0), 0.05, &grid)?;
        let (argmax, annulus) = max_spherical_on_annulus(&f, Complex64::new(0.0, 0.0), 0.2, 0.8, radial, angular)?;
        rows.push(BlowupRow {
            k,
            a_k,
            spherical_at_zero: at_zero,
            near_origin_max: near.value,
            annulus_max: annulus,
            annulus_argmax: argmax,
        });
    }
    let zero_err = rows
        .iter()
        .map(|r| (r.spherical_at_zero - r.k * r.k).abs() / (r.k * r.k))
        .fold(0.0, f64::max);
    let near: Vec<f64> = rows.iter().map(|r| r.near_origin_max).collect();
    let worst = rows
        .iter()
        .max_by(|x, y| x.annulus_max.total_cmp(&y.annulus_max))
        .expect("at least two rows");
    let mut report = CheckReport::new("origin_blowup")
        .margin("annulus_bound_margin", ANNULUS_BOUND - worst.annulus_max)
        .margin("spherical_at_zero_rel_error", zero_err)
        .meta("centered", centered)
        .meta("rows", &rows);
    if zero_err > 1e-12 {
        report = report.fail(None, zero_err, "f_k#(a_k) differs from k²");
    } else if !strictly_increasing(&near) {
        report = report.fail(Some(Complex64::new(0.0, 0.0)), near[near.len() - 1], "sup of f_k# near 0 does not grow with k");
    } else if worst.annulus_max > ANNULUS_BOUND {
        report = report.fail(Some(worst.annulus_argmax), worst.annulus_max, "f_k# exceeds the annulus bound");
    }
    Ok(report)
}

#[derive(Serialize)]
struct FactorRow {
    k: f64,
    zero: Complex64,
    zero_error: f64,
    g_min_on_circle: f64,
    g_rel_error: f64,
}

/// `f_k = k²(z − 1/k) = (z − a_k)g_k` with `a_k → 0` and `min |g_k| → ∞` on `|z| ≤ 0.9`.
pub fn scenario_theorem2_form(src: &FnSource, ks: &[f64], cfg: &LabConfig) -> Result<CheckReport> {
    validate_indices(ks, 2, 2.0)?;
    let r = 0.9;
    let mut rows = Vec::new();
    for &k in ks {
        let a_k = 1.0 / k;
        let f = src.instantiate(&[("c", k * k), ("a", a_k)])?;
        let zeros = locate_a_points(&f, Complex64::new(0.0, 0.0), Disk::centered(r)?, cfg.root_tol)?;
        if zeros.total() != 1 {
            return Err(Error::HypothesisFailed(format!("k = {k}: {} zeros in |z| < {r}", zeros.total())));
        }
        let zero = zeros.roots[0].location;
        // g_k = f_k/(z − a_k) is zero-free, so its minimum modulus on the disk sits on the circle
        let n = cfg.circle_grid(r).circle_samples();
        let mut g_min = f64::INFINITY;
        for j in 0..n {
            let z = Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / n as f64);
            g_min = g_min.min((f.ln_abs(z)? - (z - zero).norm().ln()).exp());
        }
        rows.push(FactorRow {
            k,
            zero,
            zero_error: (zero - a_k).norm(),
            g_min_on_circle: g_min,
            g_rel_error: (g_min - k * k).abs() / (k * k),
        });
    }
    let g_min: Vec<f64> = rows.iter().map(|r| r.g_min_on_circle).collect();
    let zeros: Vec<f64> = rows.iter().map(|r| -r.zero.norm()).collect();
    let zero_err = rows.iter().map(|r| r.zero_error).fold(0.0, f64::max);
    let g_err = rows.iter().map(|r| r.g_rel_error).fold(0.0, f64::max);
    let mut report = CheckReport::new("theorem2_form")
        .margin("zero_error_max", zero_err)
        .margin("g_rel_error_max", g_err)
        .meta("rows", &rows);
    if zero_err > 1e-9 || g_err > 1e-9 {
        report = report.fail(None, zero_err.max(g_err), "factorization f_k = (z − a_k)k² not reproduced");
    } else if !strictly_increasing(&g_min) || !strictly_increasing(&zeros) {
        report = report.fail(None, g_min[g_min.len() - 1], "min |g_k| does not grow or a_k does not shrink");
    }
    Ok(report)
}

#[derive(Serialize)]
struct Lemma7Row {
    k: f64,
    hypothesis_ok: bool,
    ones_on_nonpositive_axis: bool,
    min_modulus: f64,
    verdict: Lemma7Verdict,
}

/// Runs the zero/1-point dichotomy check on `f_k = k²(z − 1/k)` at `r = 0.5`.
/// The 1-point `1/k + 1/k²` is positive, so the hypothesis fails.
pub fn scenario_theorem2_lemma7(src: &FnSource, ks: &[f64], cfg: &LabConfig) -> Result<CheckReport> {
    validate_indices(ks, 2, 2.0)?;
    let mut rows = Vec::new();
    for &k in ks {
        let f = src.instantiate(&[("c", k * k), ("a", 1.0 / k)])?;
        let rep = verify_lemma7(&f, 0.5, &cfg.lemma7_options())?;
        rows.push(Lemma7Row {
            k,
            hypothesis_ok: rep.hypothesis_ok,
            ones_on_nonpositive_axis: rep.ones_on_nonpositive_axis,
            min_modulus: rep.min_modulus,
            verdict: rep.verdict,
        });
    }
    let report = CheckReport::new("theorem2_lemma7").meta("rows", &rows);
    if let Some(bad) = rows.iter().find(|r| r.hypothesis_ok && r.verdict == Lemma7Verdict::Violation) {
        return Ok(report.fail(None, bad.k, "hypothesis holds but the counts violate the dichotomy"));
    }
    Ok(if rows.iter().all(|r| !r.hypothesis_ok) {
        report.hypothesis_failed("1-points of every f_k lie on the positive axis")
    } else {
        report
    })
}

#[derive(Serialize)]
struct RescaleRow {
    r_k: f64,
    min_on_half_circle: f64,
    ln_max_on_half_circle: f64,
}

/// `f_k(z) = f(2r_k z)` for a radius schedule with `min_{|z|=r_k}|f| ≤ 1`:
/// the minimum on `|z| = 1/2` stays at most 1 while the maximum diverges.
pub fn scenario_0a1_rescale(src: &FnSource, radii: &[f64], cfg: &LabConfig) -> Result<CheckReport> {
    if radii.is_empty() || !strictly_increasing(radii) || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::ScheduleInvalid("radii must be positive and strictly increasing".into()));
    }
    let f = src.build()?;
    let grid = cfg.circle_grid(0.5);
    let mut rows = Vec::new();
    for &r_k in radii {
        let fk = f.affine_precompose(Complex64::new(2.0 * r_k, 0.0), Complex64::new(0.0, 0.0));
        let ext = circle_extrema(&fk, Complex64::new(0.0, 0.0), 0.5, &grid)?;
        rows.push(RescaleRow {
            r_k,
            min_on_half_circle: ext.min,
            ln_max_on_half_circle: ext.ln_max,
        });
    }
    let ln_max: Vec<f64> = rows.iter().map(|r| r.ln_max_on_half_circle).collect();
    let min_max = rows.iter().map(|r| r.min_on_half_circle).fold(0.0, f64::max);
    let report = CheckReport::new("0a1_rescale")
        .margin("min_modulus_margin", 1.0 - min_max)
        .meta("rows", &rows)
        .note("stand-in function: only the min/max pattern on |z| = 1/2 is checked");
    Ok(if min_max > 1.0 + 1e-12 {
        report.hypothesis_failed("the schedule has a radius where min |f| exceeds 1")
    } else if !strictly_increasing(&ln_max) {
        report.hypothesis_failed("max |f_k| does not diverge: the function is normal")
    } else {
        report
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declarations_are_consistent() {
        let all = scenarios();
        let sources = bundled_sources().unwrap();
        for (i, s) in all.iter().enumerate() {
            assert!(all[..i].iter().all(|t| t.id != s.id), "duplicate id {}", s.id);
            assert!(sources.iter().any(|x| x.name == s.source));
            assert!(s.checks.iter().all(|c| KNOWN_CHECKS.contains(c)));
        }
    }

    #[test]
    fn blowup_and_factor_scenarios() {
        let cfg = LabConfig::default();
        for id in ["origin-blowup", "origin-blowup-centered", "theorem2-form", "theorem2-lemma7"] {
            let s = find_scenario(id).unwrap();
            let r = run_scenario(&s, None, &cfg).unwrap();
            assert_eq!(r.verdict, s.expected, "{id}: {r:?}");
            assert_eq!(r.metadata["matches_expected"], true);
        }
    }

    #[test]
    fn rescale_scenarios() {
        let cfg = LabConfig::default();
        for id in ["0a1-rescale", "0a1-rescale-constant"] {
            let s = find_scenario(id).unwrap();
            assert_eq!(run_scenario(&s, None, &cfg).unwrap().verdict, s.expected);
        }
        let s = find_scenario("0a1-rescale").unwrap();
        let e = run_scenario(&s, Some(&[2.0, 1.0]), &cfg);
        assert!(matches!(e, Err(Error::ScheduleInvalid(_))));
        // exp(2kz) on |z| = 1/2: min e^{-k}, max e^{k}
        let r = run_scenario(&s, Some(&[3.0]), &cfg).unwrap();
        let row = &r.metadata["rows"][0];
        assert!((row["ln_max_on_half_circle"].as_f64().unwrap() - 3.0).abs() < 1e-9);
        assert!((row["min_on_half_circle"].as_f64().unwrap() - (-3f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn schedule_errors() {
        let cfg = LabConfig::default();
        let s = find_scenario("dichotomy").unwrap();
        assert!(matches!(run_scenario(&s, Some(&[10.0]), &cfg), Err(Error::ScheduleInvalid(_))));
        let s = find_scenario("theorem2-form").unwrap();
        assert!(matches!(run_scenario(&s, Some(&[1.0, 3.0]), &cfg), Err(Error::ScheduleInvalid(_))));
    }

    #[test]
    fn dichotomy_limits() {
        let cfg = LabConfig::default();
        for id in ["dichotomy", "dichotomy-conjugate"] {
            let s = find_scenario(id).unwrap();
            let r = run_scenario(&s, None, &cfg).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
            let rows = r.metadata["rows"].as_array().unwrap();
            let lp: Vec<f64> = rows.iter().map(|x| x["ln_abs_plus"].as_f64().unwrap()).collect();
            let sign = if id == "dichotomy" { 1.0 } else { -1.0 };
            for (x, k) in lp.iter().zip([10.0, 20.0, 40.0]) {
                assert!((x - sign * 0.3 * k).abs() < 1e-12);
            }
        }
    }
}
