//! Exponential forms of zero-free functions and the growth bound near a level set.

mod quad;

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::analytic::scan::polar_points;
use crate::analytic::{AnalyticFn, Disk, GridSpec};
use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::roots::{count_a_points, locate_a_points};

/// Default Landau spherical constant used by the hypothesis checks.
pub const DEFAULT_B_USED: f64 = 4.5;
/// Largest admissible `|g′/g|·|z − b|` along a continuation path.
pub const PATH_GUARD: f64 = 1e8;
const CONTINUATION_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormOptions {
    pub b_used: f64,
    /// Normalization and the `g# ≤ 1 + |z|/R` pre-check become hard errors.
    pub strict: bool,
    pub precheck_radial: usize,
    pub precheck_angular: usize,
    pub locate_tol: f64,
}

impl Default for FormOptions {
    fn default() -> FormOptions {
        FormOptions {
            b_used: DEFAULT_B_USED,
            strict: false,
            precheck_radial: 32,
            precheck_angular: 64,
            locate_tol: 1e-12,
        }
    }
}

/// What was checked before extraction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormHypotheses {
    pub radius_threshold: f64,
    pub zero_free_method: String,
    pub g_sharp_origin: f64,
    pub normalized: bool,
    /// `min (1 + |z|/R − g#(z))` over the pre-check grid.
    pub growth_margin: f64,
    pub growth_worst_point: Complex64,
    pub growth_ok: bool,
    /// `|g′(0)/g(0)|`, at least 2 under the normalization.
    pub log_derivative_origin: f64,
}

/// `g(z) = exp(c(z − b) + δ(z))` with `g(b) = 1`.
#[derive(Clone, Debug)]
pub struct ZeroFreeForm {
    pub g: AnalyticFn,
    pub radius: f64,
    pub b_used: f64,
    pub b: Complex64,
    pub c: Complex64,
    pub hypotheses: FormHypotheses,
}

impl ZeroFreeForm {
    /// The continued logarithm `h` with `h(b) = 0`.
    pub fn h(&self, z: Complex64) -> Result<Complex64> {
        log_branch(&self.g, self.b, z)
    }

    pub fn delta(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.h(z)? - self.c * (z - self.b))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormBoundReport {
    pub radius: f64,
    pub b_used: f64,
    pub b: Complex64,
    pub c: Complex64,
    pub c_abs: f64,
    pub c_lower: f64,
    pub c_upper: f64,
    pub c_bound_ok: bool,
    /// `min (128|z − b|²/R − |δ(z)|)` over the grid on `|z − b| ≤ R/16`.
    pub delta_margin: f64,
    pub delta_worst_point: Complex64,
    pub max_abs_delta: f64,
    pub delta_ok: bool,
    pub radial: usize,
    pub angular: usize,
    pub hypotheses: FormHypotheses,
}

impl FormBoundReport {
    pub fn passed(&self) -> bool {
        self.c_bound_ok && self.delta_ok
    }
}

/// Confirms `g` has no zeros in the disk; returns how.
pub(crate) fn ensure_zero_free(g: &AnalyticFn, disk: Disk) -> Result<&'static str> {
    if g.expr().is_structurally_zero_free() {
        g.check_disk(disk.center, disk.radius)?;
        return Ok("structural");
    }
    let grid = GridSpec::circle_default(disk.radius, 1.0);
    let n = count_a_points(g, Complex64::new(0.0, 0.0), disk, &grid)?;
    if n.count > 0 {
        return Err(Error::HypothesisFailed(format!(
            "{} zero(s) in the disk of radius {} about {}",
            n.count, disk.radius, disk.center
        )));
    }
    Ok("argument principle")
}

/// The 1-point of smallest modulus in `|z| < search_radius`.
pub fn find_unit_point(g: &AnalyticFn, search_radius: f64) -> Result<Complex64> {
    find_unit_point_tol(g, search_radius, 1e-12)
}

fn find_unit_point_tol(g: &AnalyticFn, search_radius: f64, tol: f64) -> Result<Complex64> {
    let disk = Disk::centered(search_radius)?;
    ensure_zero_free(g, disk)?;
    let ones = locate_a_points(g, Complex64::new(1.0, 0.0), disk, tol)?;
    let mut best: Option<Complex64> = None;
    for r in &ones.roots {
        if best.map_or(true, |b| r.location.norm() < b.norm()) {
            best = Some(r.location);
        }
    }
    let mut b = best.ok_or(Error::NoUnitPoint {
        radius: search_radius,
    })?;
    // a few Newton steps settle |g(b) − 1| at rounding level
    for _ in 0..4 {
        let (v, d) = g.eval_with_derivative(b)?;
        if d.norm() == 0.0 {
            break;
        }
        let step = (v - 1.0) / d;
        if !step.is_finite() || step.norm() > 1e-6 * (1.0 + search_radius) {
            break;
        }
        b -= step;
    }
    let v = g.eval(b)?;
    if (v - 1.0).norm() > 1e-10 {
        return Err(Error::NonConvergent(format!(
            "unit point {b} has |g(b) − 1| = {:.3e}",
            (v - 1.0).norm()
        )));
    }
    Ok(b)
}

/// `∫_[b,z] g′/g dζ` along the straight segment: the continued logarithm of
/// `g(z)/g(b)`, not reduced modulo 2πi.
pub fn log_branch(g: &AnalyticFn, b: Complex64, z: Complex64) -> Result<Complex64> {
    let dz = z - b;
    if dz.norm() == 0.0 {
        g.check_point(b)?;
        return Ok(Complex64::new(0.0, 0.0));
    }
    let len = dz.norm();
    let integrand = |t: f64| -> Result<Complex64> {
        let p = b + dz * t;
        let j = g.jet(p)?;
        if j.v.is_zero() {
            return Err(Error::PathTooCloseToZero { near: p });
        }
        let q = j.d.div(j.v).to_complex().ok_or(Error::PathTooCloseToZero { near: p })?;
        if q.norm() * len > PATH_GUARD {
            return Err(Error::PathTooCloseToZero { near: p });
        }
        Ok(q * dz)
    };
    let h = quad::integrate(&integrand, 1e-13)?;
    // the real part must reproduce ln|g(z)/g(b)| and the imaginary part its argument
    let ratio = g.jet(z)?.v.div(g.jet(b)?.v);
    let re_err = (h.re - ratio.ln_abs()).abs();
    let im_err = crate::analytic::scan::wrap_angle(h.im - ratio.arg()).abs();
    let scale = 1.0 + 1e-6 * h.norm();
    if re_err > CONTINUATION_TOL * scale || im_err > CONTINUATION_TOL * scale {
        return Err(Error::QuadratureNonConvergent(format!(
            "continuation to {z} disagrees with g by {re_err:.2e} in modulus and {im_err:.2e} in argument"
        )));
    }
    Ok(h)
}

/// Extracts `b`, `c` and `δ` for a zero-free `g` on `D(0, R)`.
pub fn extract_form(g: &AnalyticFn, radius: f64, opts: &FormOptions) -> Result<ZeroFreeForm> {
    let threshold = 256.0 * opts.b_used;
    if !(radius > threshold) {
        return Err(Error::HypothesisFailed(format!(
            "R = {radius} must exceed 2^8·B = {threshold}"
        )));
    }
    let disk = Disk::centered(radius)?;
    g.check_disk(disk.center, disk.radius)?;
    let method = ensure_zero_free(g, disk)?;
    let origin = Complex64::new(0.0, 0.0);
    let jet0 = g.jet(origin)?;
    let g_sharp_origin = crate::analytic::spherical_from_jet(&jet0);
    let normalized = (g_sharp_origin - 1.0).abs() <= 1e-3;
    let log_derivative_origin = jet0.d.div(jet0.v).abs();
    let mut growth_margin = f64::INFINITY;
    let mut growth_worst_point = origin;
    // g# peaks where |g| = 1, a curve the polar grid alone can miss
    let crossings = level_crossings(
        g,
        origin,
        radius,
        opts.precheck_angular,
        4 * opts.precheck_radial,
        0.0,
    )?;
    let pts = std::iter::once(origin)
        .chain(polar_points(origin, radius, opts.precheck_radial, opts.precheck_angular))
        .chain(crossings);
    for p in pts {
        let m = 1.0 + p.norm() / radius - g.spherical_derivative(p)?;
        if m < growth_margin {
            growth_margin = m;
            growth_worst_point = p;
        }
    }
    let growth_ok = growth_margin >= -1e-9;
    if opts.strict && !normalized {
        return Err(Error::HypothesisFailed(format!(
            "g#(0) = {g_sharp_origin} is outside [0.999, 1.001]"
        )));
    }
    if opts.strict && !growth_ok {
        return Err(Error::HypothesisFailed(format!(
            "g#(z) exceeds 1 + |z|/R by {:.3e} at {growth_worst_point}",
            -growth_margin
        )));
    }
    let b = find_unit_point_tol(g, opts.b_used, opts.locate_tol)?;
    let (v, d) = g.eval_with_derivative(b)?;
    Ok(ZeroFreeForm {
        g: g.clone(),
        radius,
        b_used: opts.b_used,
        b,
        c: d / v,
        hypotheses: FormHypotheses {
            radius_threshold: threshold,
            zero_free_method: method.to_string(),
            g_sharp_origin,
            normalized,
            growth_margin,
            growth_worst_point,
            growth_ok,
            log_derivative_origin,
        },
    })
}

/// Checks the bounds on `|c|` and on `|δ|` over a polar grid of `|z − b| ≤ R/16`.
pub fn verify_form_bounds(form: &ZeroFreeForm, grid: &GridSpec) -> Result<FormBoundReport> {
    grid.validate()?;
    let (radial, angular) = grid.polar_counts();
    let (r, bu) = (form.radius, form.b_used);
    let c_abs = form.c.norm();
    let c_lower = 2.0 - 256.0 * bu / r;
    let c_upper = 2.0 + 2.0 * bu / r;
    let mut delta_margin = f64::INFINITY;
    let mut delta_worst_point = form.b;
    let mut max_abs_delta: f64 = 0.0;
    for i in 1..=radial {
        let rho = r / 16.0 * i as f64 / radial as f64;
        for j in 0..angular {
            let z = form.b + Complex64::from_polar(rho, TAU * j as f64 / angular as f64);
            let d = form.delta(z)?.norm();
            max_abs_delta = max_abs_delta.max(d);
            let m = 128.0 * rho * rho / r - d;
            if m < delta_margin {
                delta_margin = m;
                delta_worst_point = z;
            }
        }
    }
    Ok(FormBoundReport {
        radius: r,
        b_used: bu,
        b: form.b,
        c: form.c,
        c_abs,
        c_lower,
        c_upper,
        c_bound_ok: c_lower <= c_abs && c_abs <= c_upper,
        delta_margin,
        delta_worst_point,
        max_abs_delta,
        delta_ok: delta_margin >= 0.0,
        radial,
        angular,
        hypotheses: form.hypotheses.clone(),
    })
}

/// Points where `ln|f| = level` along `rays` rays from `center` up to `reach`,
/// found from sign changes between `samples` equispaced points and bisection.
fn level_crossings(
    f: &AnalyticFn,
    center: Complex64,
    reach: f64,
    rays: usize,
    samples: usize,
    level: f64,
) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for j in 0..rays {
        let dir = Complex64::from_polar(1.0, TAU * j as f64 / rays as f64);
        let at = |t: f64| center + dir * t;
        let mut t0 = 0.0;
        let mut s0 = f.ln_abs(center)? - level;
        for i in 1..=samples {
            let t1 = reach * i as f64 / samples as f64;
            let s1 = f.ln_abs(at(t1))? - level;
            if s1 == 0.0 {
                out.push(at(t1));
            } else if s0 != 0.0 && (s0 < 0.0) != (s1 < 0.0) {
                let (mut lo, mut hi) = (t0, t1);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if (f.ln_abs(at(mid))? - level < 0.0) == (s0 < 0.0) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                out.push(at(0.5 * (lo + hi)));
            }
            t0 = t1;
            s0 = s1;
        }
    }
    Ok(out)
}

/// Checks `|f(z)| < K·exp(2L|z − a|/K)` on `D(a, r/2)` given `|f(a)| ≤ K` and
/// `|f′| ≤ L` where `|f| = K`.
pub fn verify_growth_bound(
    f: &AnalyticFn,
    a: Complex64,
    r: f64,
    k: f64,
    l: f64,
    grid: &GridSpec,
) -> Result<CheckReport> {
    grid.validate()?;
    if !(r > 0.0 && k > 0.0 && l >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need r > 0, K > 0, L ≥ 0 (got r = {r}, K = {k}, L = {l})"
        )));
    }
    f.check_disk(a, r)?;
    let (radial, angular) = grid.polar_counts();
    let ln_k = k.ln();
    let fa = f.ln_abs(a)?;
    if fa > ln_k + 1e-12 {
        return Err(Error::PremiseFailed(format!("|f(a)| = {} exceeds K = {k}", fa.exp())));
    }
    let deriv = f.deriv();
    let mut crossings = 0usize;
    let mut max_level_deriv: f64 = 0.0;
    for z in level_crossings(f, a, 0.999 * r, angular, 4 * radial, ln_k)? {
        let d = deriv.abs(z)?;
        crossings += 1;
        max_level_deriv = max_level_deriv.max(d);
        if d > l * (1.0 + 1e-9) + 1e-12 {
            return Err(Error::PremiseFailed(format!(
                "|f′| = {d} exceeds L = {l} on the level set near {z}"
            )));
        }
    }
    let mut worst = f64::NEG_INFINITY;
    let mut worst_point = a;
    for z in std::iter::once(a).chain(polar_points(a, 0.5 * r, radial, angular)) {
        let lr = f.ln_abs(z)? - ln_k - 2.0 * l * (z - a).norm() / k;
        if lr > worst {
            worst = lr;
            worst_point = z;
        }
    }
    let mut report = CheckReport::new("growth_bound")
        .margin("log_ratio_worst", worst)
        .margin("premise_value_margin", k - fa.exp())
        .meta("a", a)
        .meta("r", r)
        .meta("K", k)
        .meta("L", l)
        .meta("level_set_crossings", crossings)
        .meta("grid", [radial, angular])
        .meta("worst_ratio", worst.exp());
    if crossings > 0 {
        report = report.margin("level_set_derivative_margin", l - max_level_deriv);
    }
    // equality is attained at z = a when |f(a)| = K
    if worst > 1e-12 {
        report = report.fail(Some(worst_point), worst.exp(), "|f| exceeds K·exp(2L|z − a|/K)");
    }
    Ok(report)
}
