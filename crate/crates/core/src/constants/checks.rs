use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use super::precision::{hempel_lai_a, C_LOW};
use crate::analytic::scan::min_modulus_on_circle;
use crate::analytic::{AnalyticFn, Disk, GridSpec};
use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::roots::{count_a_points, locate_a_points, Lemma7Options, RootList};

fn a_f64() -> f64 {
    hempel_lai_a(30).to_f64()
}

/// Fails unless `f` omits both 0 and 1 on `D(a, r)`.
fn ensure_omits_zero_one(f: &AnalyticFn, a: Complex64, r: f64) -> Result<()> {
    let disk = Disk::new(a, r)?;
    let grid = GridSpec::circle_default(r, 1.0);
    for value in [0.0, 1.0] {
        let n = count_a_points(f, Complex64::new(value, 0.0), disk, &grid)?;
        if n.count > 0 {
            return Err(Error::OmissionFailed { value, count: n.count });
        }
    }
    Ok(())
}

/// `|f′(a)| ≤ 2|f(a)|(|ln|f(a)|| + A)/r` for `f` omitting 0 and 1 on `D(a, r)`.
pub fn landau_check(f: &AnalyticFn, a: Complex64, r: f64) -> Result<CheckReport> {
    ensure_omits_zero_one(f, a, r)?;
    let j = f.jet(a)?;
    let big_a = a_f64();
    let q = j.d.div(j.v).abs();
    let ratio = q / (j.v.ln_abs().abs() + big_a);
    let bound = 2.0 / r;
    let report = CheckReport::new("landau")
        .margin("bound_margin", bound - ratio)
        .meta("ratio", ratio)
        .meta("bound", bound)
        .meta("A", big_a)
        .meta("a", a)
        .meta("r", r);
    Ok(if ratio <= bound {
        report
    } else {
        report.fail(Some(a), ratio, "|f′|/(|f|(|ln|f|| + A)) exceeds 2/r")
    })
}

/// `f#(a) ≤ B/r` for `f` omitting 0 and 1 on `D(a, r)`.
pub fn spherical_landau_check(f: &AnalyticFn, a: Complex64, r: f64, b_used: f64) -> Result<CheckReport> {
    ensure_omits_zero_one(f, a, r)?;
    let s = f.spherical_derivative(a)?;
    let bound = b_used / r;
    let report = CheckReport::new("spherical_landau")
        .margin("bound_margin", bound - s)
        .meta("f_sharp", s)
        .meta("B_used", b_used)
        .meta("a", a)
        .meta("r", r);
    Ok(if s <= bound {
        report
    } else {
        report
            .fail(Some(a), s, "f#(a) exceeds B_used/r")
            .note("the configured B_used is too small for this function")
    })
}

fn strip_arg(z: Complex64, x0: f64, y0: f64) -> Result<(Complex64, Complex64)> {
    if !(x0 < 0.0) || !y0.is_finite() {
        return Err(Error::InvalidArgument(format!("strip needs x0 < 0 (got x0 = {x0}, y0 = {y0})")));
    }
    if !(z.re > 2.0 * x0 && z.re < 0.0) {
        return Err(Error::OutsideStrip { z, lower: 2.0 * x0 });
    }
    let k = Complex64::new(0.0, PI / (2.0 * x0));
    Ok((k, k * (z - Complex64::new(x0, y0))))
}

/// `(E − 1)/(E + 1)` with `E = exp(πi(z − z0)/(2x0))`: the strip
/// `2x0 < Re z < 0` onto the unit disk, `z0 = x0 + iy0 ↦ 0`.
pub fn strip_map(z: Complex64, x0: f64, y0: f64) -> Result<Complex64> {
    let (_, w) = strip_arg(z, x0, y0)?;
    Ok(tanh_half(w))
}

pub fn strip_map_derivative(z: Complex64, x0: f64, y0: f64) -> Result<Complex64> {
    let (k, w) = strip_arg(z, x0, y0)?;
    let t = tanh_half(w);
    Ok(k * (1.0 - t * t) * 0.5)
}

/// `|φ′(z0)| = π/(4|x0|)`.
pub fn strip_map_deriv_at_center(x0: f64) -> Result<f64> {
    Ok(strip_map_derivative(Complex64::new(x0, 0.0), x0, 0.0)?.norm())
}

/// `tanh(w/2)`, stable for large `|Re w|`.
fn tanh_half(w: Complex64) -> Complex64 {
    if w.re >= 0.0 {
        let e = (-w).exp();
        (1.0 - e) / (1.0 + e)
    } else {
        let e = w.exp();
        (e - 1.0) / (e + 1.0)
    }
}

const PJ_TOL: f64 = 1e-8;
const PJ_RESIDUAL: f64 = 1e-6;
const PJ_MAX_LEVEL: u32 = 20;

/// Compares `ln|f(b)|` with the Poisson–Jensen representation on `|z| = r`
/// using the supplied zeros.
pub fn poisson_jensen_check(f: &AnalyticFn, b: Complex64, r: f64, zeros: &RootList) -> Result<CheckReport> {
    if !(r > 0.0) || !(b.norm() < r) {
        return Err(Error::InvalidArgument(format!("need |b| < r (b = {b}, r = {r})")));
    }
    f.check_disk(Complex64::new(0.0, 0.0), r)?;
    let disk = Disk::centered(r)?;
    let counted = match count_a_points(f, Complex64::new(0.0, 0.0), disk, &GridSpec::circle_default(r, 1.0)) {
        Ok(n) => n.count,
        Err(Error::BoundaryRoot { near, .. }) => {
            return Err(Error::BoundaryZero(format!("f vanishes near {near} on |z| = {r}")))
        }
        Err(e) => return Err(e),
    };
    let inside = zeros.inside(Complex64::new(0.0, 0.0), r);
    if inside.total() != counted {
        return Err(Error::InvalidArgument(format!(
            "{} zeros supplied inside |z| < {r}, the argument principle counts {counted}",
            inside.total()
        )));
    }
    let lhs = f.ln_abs(b)?;
    if !lhs.is_finite() {
        return Err(Error::InvalidArgument(format!("b = {b} is a zero of f")));
    }
    let kernel_term = |theta: f64| -> Result<f64> {
        let z = Complex64::from_polar(r, theta);
        let l = f.ln_abs(z)?;
        if !l.is_finite() {
            return Err(Error::BoundaryZero(format!("f(z) = 0 at {z}")));
        }
        Ok(l * ((z + b) / (z - b)).re)
    };
    // trapezoid rule, doubling and reusing the previous nodes
    let mut n = 64usize;
    let mut sum = 0.0;
    for j in 0..n {
        sum += kernel_term(TAU * j as f64 / n as f64)?;
    }
    let mut integral = sum / n as f64;
    let mut level = 0;
    loop {
        let mut extra = 0.0;
        for j in 0..n {
            extra += kernel_term(TAU * (j as f64 + 0.5) / n as f64)?;
        }
        sum += extra;
        n *= 2;
        let next = sum / n as f64;
        let diff = (next - integral).abs();
        integral = next;
        level += 1;
        if diff <= PJ_TOL {
            break;
        }
        if level >= PJ_MAX_LEVEL {
            return Err(Error::QuadratureNonConvergent(format!(
                "boundary integral still moving by {diff:.2e} with {n} nodes"
            )));
        }
    }
    let mut blaschke = 0.0;
    for z in &inside.roots {
        let a = z.location;
        let term = ((r * r - a.conj() * b) / (r * (b - a))).norm().ln();
        blaschke += z.multiplicity as f64 * term;
    }
    let rhs = integral - blaschke;
    let residual = (lhs - rhs).abs();
    let report = CheckReport::new("poisson_jensen")
        .margin("residual", residual)
        .meta("lhs", lhs)
        .meta("rhs", rhs)
        .meta("boundary_integral", integral)
        .meta("nodes", n)
        .meta("zeros", inside.total())
        .meta("b", b)
        .meta("r", r);
    Ok(if residual <= PJ_RESIDUAL {
        report
    } else {
        report.fail(Some(b), residual, "Poisson–Jensen residual exceeds 1e-6")
    })
}

/// Checks the value-distribution hypothesis on `f` and then the two
/// ingredients of the lower bound: `min_{|z|=s}|f| ≤ 1` for `s ∈ (r, 1)`
/// and `r ≥ 0.000024`.
pub fn theorem4_witness_check(f: &AnalyticFn, r: f64) -> Result<CheckReport> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("r = {r} must lie in (0, 1)")));
    }
    let opts = Lemma7Options::default();
    let reach = opts.hypothesis_fraction;
    let disk = Disk::centered(reach)?;
    let locate = |v: f64| {
        locate_a_points(f, Complex64::new(v, 0.0), disk, opts.locate_tol).map_err(|e| {
            Error::HypothesisUnchecked(format!("locating the {v}-points: {e}"))
        })
    };
    let zeros = locate(0.0)?;
    let ones = locate(1.0)?;
    let tol = opts.axis_tol;
    for z in &zeros.roots {
        let p = z.location;
        if p.im.abs() > tol || p.re < -tol || p.re > r + tol {
            return Err(Error::HypothesisFailed(format!("zero at {p} is not in [0, {r}]")));
        }
    }
    for z in &ones.roots {
        let p = z.location;
        if p.im.abs() > tol || p.re > tol || p.re < -r - tol {
            return Err(Error::HypothesisFailed(format!("1-point at {p} is not in [-{r}, 0]")));
        }
    }
    if zeros.total() < 2 && ones.total() < 2 {
        return Err(Error::HypothesisFailed(format!(
            "neither value is taken twice ({} zeros, {} 1-points)",
            zeros.total(),
            ones.total()
        )));
    }
    let mut radii: Vec<f64> = (1..16).map(|j| r + (reach - r) * j as f64 / 16.0).collect();
    if r.sqrt() > r && r.sqrt() < reach {
        radii.push(r.sqrt());
    }
    let mut worst = f64::NEG_INFINITY;
    let mut worst_point = Complex64::new(0.0, 0.0);
    for s in &radii {
        let m = min_modulus_on_circle(f, *s, &GridSpec::circle_default(*s, 1.0))?;
        if m.ln_min > worst {
            worst = m.ln_min;
            worst_point = m.argmin;
        }
    }
    let mut report = CheckReport::new("theorem4_witness")
        .margin("min_modulus_log_margin", -worst)
        .margin("radius_margin", r - C_LOW)
        .meta("r", r)
        .meta("zeros", zeros.total())
        .meta("ones", ones.total())
        .meta("radii_sampled", radii.len())
        .meta("reference_A2_bounds", [0.005874, 0.02529]);
    if worst > 1e-12 {
        report = report.fail(
            Some(worst_point),
            worst.exp(),
            "violation: a circle beyond r where |f| stays above 1",
        );
    } else if r < C_LOW {
        report = report.fail(None, r, "r is below the proven lower bound");
    }
    Ok(report)
}
