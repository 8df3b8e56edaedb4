//! Grid scans for extrema of real functions over disks and circles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use super::AnalyticFn;
use crate::error::{Error, Result};

const GOLDEN_ITERS: usize = 40;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GridKind {
    Circle { samples: usize },
    PolarDisk { radial: usize, angular: usize },
    Segment { samples: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(flatten)]
    pub kind: GridKind,
    pub refine: bool,
}

impl GridSpec {
    pub fn circle(samples: usize) -> GridSpec {
        GridSpec {
            kind: GridKind::Circle { samples },
            refine: true,
        }
    }

    pub fn polar(radial: usize, angular: usize) -> GridSpec {
        GridSpec {
            kind: GridKind::PolarDisk { radial, angular },
            refine: true,
        }
    }

    pub fn segment(samples: usize) -> GridSpec {
        GridSpec {
            kind: GridKind::Segment { samples },
            refine: true,
        }
    }

    pub fn without_refinement(mut self) -> GridSpec {
        self.refine = false;
        self
    }

    /// Default circle sampling: `max(256, ⌈64·r·density⌉)` points.
    pub fn circle_default(r: f64, density: f64) -> GridSpec {
        GridSpec::circle(default_circle_samples(r, density))
    }

    pub fn validate(&self) -> Result<()> {
        let counts: &[usize] = match &self.kind {
            GridKind::Circle { samples } | GridKind::Segment { samples } => &[*samples][..],
            GridKind::PolarDisk { radial, angular } => &[*radial, *angular][..],
        };
        if let Some(n) = counts.iter().find(|&&n| n < 8) {
            return Err(Error::InvalidGrid(format!("grid count {n} is below 8")));
        }
        Ok(())
    }

    /// Number of samples on a circle, whatever the grid kind.
    pub fn circle_samples(&self) -> usize {
        match self.kind {
            GridKind::Circle { samples } | GridKind::Segment { samples } => samples,
            GridKind::PolarDisk { angular, .. } => angular,
        }
    }

    /// `(radial, angular)` counts for a disk scan, whatever the grid kind.
    pub fn polar_counts(&self) -> (usize, usize) {
        match self.kind {
            GridKind::PolarDisk { radial, angular } => (radial, angular),
            GridKind::Circle { samples } | GridKind::Segment { samples } => {
                ((samples / 8).max(8), samples)
            }
        }
    }
}

pub fn default_circle_samples(r: f64, density: f64) -> usize {
    let n = (64.0 * r * density).ceil();
    if n.is_finite() && n > 256.0 {
        n.min(1e7) as usize
    } else {
        256
    }
}

/// Result of a disk maximization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiskMax {
    pub argmax: Complex64,
    pub value: f64,
    pub radial: usize,
    pub angular: usize,
    pub evaluations: usize,
    pub refined: bool,
}

/// Sampled minimum and maximum of |f| on a circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CircleExtrema {
    pub min: f64,
    pub argmin: Complex64,
    pub max: f64,
    pub argmax: Complex64,
    pub ln_min: f64,
    pub ln_max: f64,
    pub samples: usize,
    pub refined: bool,
}

/// Golden-section search for a maximum of `h` on `[lo, hi]`.
fn golden_max<H>(h: &H, lo: f64, hi: f64) -> Result<(f64, f64)>
where
    H: Fn(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = h(x1)?;
    let mut f2 = h(x2)?;
    for _ in 0..GOLDEN_ITERS {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = h(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = h(x2)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

fn polar(center: Complex64, rad: f64, theta: f64) -> Complex64 {
    center + Complex64::from_polar(rad, theta)
}

/// Maximizes `g` over the closed disk `D̄(center, r)` on a polar grid.
///
/// Grid index 0 is the center, followed by rings of increasing radius, each
/// starting at angle 0. The lowest index wins ties. With `refine`, one
/// golden-section pass in radius then angle runs around the grid argmax.
pub fn maximize_on_disk<G>(
    g: G,
    center: Complex64,
    r: f64,
    radial: usize,
    angular: usize,
    refine: bool,
) -> Result<DiskMax>
where
    G: Fn(Complex64) -> Result<f64>,
{
    let mut best = (center, g(center)?);
    let mut best_idx = (0usize, 0usize);
    let mut evals = 1;
    if r > 0.0 {
        for i in 1..=radial {
            let rad = r * i as f64 / radial as f64;
            for j in 0..angular {
                let z = polar(center, rad, TAU * j as f64 / angular as f64);
                let v = g(z)?;
                evals += 1;
                if v > best.1 {
                    best = (z, v);
                    best_idx = (i, j);
                }
            }
        }
    }
    let mut refined = false;
    if refine && r > 0.0 && best_idx.0 > 0 {
        let (i, j) = best_idx;
        let dr = r / radial as f64;
        let theta = TAU * j as f64 / angular as f64;
        let lo = dr * (i - 1) as f64;
        let hi = (dr * (i + 1) as f64).min(r);
        let (rad, _) = golden_max(&|x| g(polar(center, x, theta)), lo, hi)?;
        let dt = TAU / angular as f64;
        let (th, v) = golden_max(&|t| g(polar(center, rad, t)), theta - dt, theta + dt)?;
        evals += 4 * GOLDEN_ITERS + 4;
        if v > best.1 {
            best = (polar(center, rad, th), v);
            refined = true;
        }
    }
    Ok(DiskMax {
        argmax: best.0,
        value: best.1,
        radial,
        angular,
        evaluations: evals,
        refined,
    })
}

/// Sampled `H(r) = max f#` over `D̄(a, r)` with its argmax.
pub fn max_spherical_on_disk(
    f: &AnalyticFn,
    a: Complex64,
    r: f64,
    grid: &GridSpec,
) -> Result<DiskMax> {
    grid.validate()?;
    f.check_disk(a, r)?;
    let (radial, angular) = grid.polar_counts();
    maximize_on_disk(
        |z| f.spherical_derivative(z),
        a,
        r,
        radial,
        angular,
        grid.refine,
    )
}

/// Sampled extrema of `|f|` on the circle `|z − center| = r`.
pub fn circle_extrema(
    f: &AnalyticFn,
    center: Complex64,
    r: f64,
    grid: &GridSpec,
) -> Result<CircleExtrema> {
    grid.validate()?;
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("circle radius {r} must be positive")));
    }
    f.check_disk(center, r)?;
    let n = grid.circle_samples();
    let mut lo = (f64::INFINITY, 0usize);
    let mut hi = (f64::NEG_INFINITY, 0usize);
    for j in 0..n {
        let v = f.ln_abs(polar(center, r, TAU * j as f64 / n as f64))?;
        if v < lo.0 {
            lo = (v, j);
        }
        if v > hi.0 {
            hi = (v, j);
        }
    }
    let dt = TAU / n as f64;
    let mut argmin = polar(center, r, dt * lo.1 as f64);
    let mut argmax = polar(center, r, dt * hi.1 as f64);
    let mut refined = false;
    if grid.refine {
        let t0 = dt * lo.1 as f64;
        let (t, v) = golden_max(&|t| Ok(-f.ln_abs(polar(center, r, t))?), t0 - dt, t0 + dt)?;
        if -v < lo.0 {
            lo.0 = -v;
            argmin = polar(center, r, t);
            refined = true;
        }
        let t0 = dt * hi.1 as f64;
        let (t, v) = golden_max(&|t| f.ln_abs(polar(center, r, t)), t0 - dt, t0 + dt)?;
        if v > hi.0 {
            hi.0 = v;
            argmax = polar(center, r, t);
            refined = true;
        }
    }
    Ok(CircleExtrema {
        min: lo.0.exp(),
        argmin,
        max: hi.0.exp(),
        argmax,
        ln_min: lo.0,
        ln_max: hi.0,
        samples: n,
        refined,
    })
}

/// Sampled `max_{|z|=r} |f(z)|`.
pub fn max_modulus_on_circle(f: &AnalyticFn, r: f64, grid: &GridSpec) -> Result<CircleExtrema> {
    circle_extrema(f, Complex64::new(0.0, 0.0), r, grid)
}

/// Sampled `min_{|z|=r} |f(z)|`.
pub fn min_modulus_on_circle(f: &AnalyticFn, r: f64, grid: &GridSpec) -> Result<CircleExtrema> {
    circle_extrema(f, Complex64::new(0.0, 0.0), r, grid)
}

/// Points of a polar grid on `D̄(center, r)` excluding the center.
pub fn polar_points(center: Complex64, r: f64, radial: usize, angular: usize) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(radial * angular);
    for i in 1..=radial {
        let rad = r * i as f64 / radial as f64;
        for j in 0..angular {
            // half-step angular offset on odd rings spreads the samples
            let off = if i % 2 == 1 { 0.5 } else { 0.0 };
            pts.push(polar(center, rad, TAU * (j as f64 + off) / angular as f64));
        }
    }
    pts
}

/// Scans `f#` over the annulus `r_in ≤ |z − center| ≤ r_out`; returns the sampled maximum.
pub fn max_spherical_on_annulus(
    f: &AnalyticFn,
    center: Complex64,
    r_in: f64,
    r_out: f64,
    radial: usize,
    angular: usize,
) -> Result<(Complex64, f64)> {
    f.check_disk(center, r_out)?;
    let mut best = (center, f64::NEG_INFINITY);
    for i in 0..=radial {
        let rad = r_in + (r_out - r_in) * i as f64 / radial as f64;
        for j in 0..angular {
            let z = polar(center, rad, TAU * j as f64 / angular as f64);
            let v = f.spherical_derivative(z)?;
            if v > best.1 {
                best = (z, v);
            }
        }
    }
    Ok(best)
}

/// Normalizes an angle into `(−π, π]`.
pub(crate) fn wrap_angle(t: f64) -> f64 {
    let mut x = t % TAU;
    if x <= -PI {
        x += TAU;
    } else if x > PI {
        x -= TAU;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::Expr;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::circle(7).validate().is_err());
        assert!(GridSpec::polar(8, 4).validate().is_err());
        assert!(GridSpec::segment(8).validate().is_ok());
        assert_eq!(default_circle_samples(0.5, 1.0), 256);
        assert_eq!(default_circle_samples(10.0, 1.0), 640);
    }

    #[test]
    fn max_spherical_examples() {
        let grid = GridSpec::polar(16, 32);
        let id = AnalyticFn::on_unit_disk(Expr::z());
        let m = max_spherical_on_disk(&id, c(0.0, 0.0), 0.5, &grid).unwrap();
        assert_eq!(m.value, 1.0);
        assert_eq!(m.argmax, c(0.0, 0.0));

        let f = AnalyticFn::on_unit_disk(Expr::poly(vec![c(0.0, 0.0), c(0.0, -10.0)]).exp());
        let m = max_spherical_on_disk(&f, c(0.0, 0.0), 0.2, &grid).unwrap();
        assert!((m.value - 5.0).abs() < 1e-12);
        assert!(m.argmax.im.abs() < 1e-9);

        let k = AnalyticFn::on_unit_disk(Expr::constant(c(7.0, 0.0)));
        assert_eq!(max_spherical_on_disk(&k, c(0.0, 0.0), 0.9, &grid).unwrap().value, 0.0);
    }

    #[test]
    fn max_spherical_refines_off_grid_peaks() {
        // f = 100(z − p): f# peaks at p with value 100
        let p = c(0.1234, -0.0567);
        let f = AnalyticFn::on_unit_disk(Expr::poly(vec![-p * 100.0, c(100.0, 0.0)]));
        let coarse = max_spherical_on_disk(&f, c(0.0, 0.0), 0.5, &GridSpec::polar(16, 32).without_refinement()).unwrap();
        let fine = max_spherical_on_disk(&f, c(0.0, 0.0), 0.5, &GridSpec::polar(16, 32)).unwrap();
        assert!(fine.value >= coarse.value);
        assert!(fine.value > 90.0);
    }

    #[test]
    fn domain_is_checked() {
        let id = AnalyticFn::on_unit_disk(Expr::z());
        assert!(matches!(
            max_spherical_on_disk(&id, c(0.5, 0.0), 0.6, &GridSpec::polar(8, 8)),
            Err(Error::DomainExceeded { .. })
        ));
    }

    #[test]
    fn circle_modulus_examples() {
        let g = GridSpec::circle(256);
        let id = AnalyticFn::on_unit_disk(Expr::z());
        let e = min_modulus_on_circle(&id, 0.5, &g).unwrap();
        assert!((e.min - 0.5).abs() < 1e-15 && (e.max - 0.5).abs() < 1e-15);
        let f = AnalyticFn::on_unit_disk(Expr::poly(vec![c(2.0, 0.0), c(1.0, 0.0)]));
        let e = max_modulus_on_circle(&f, 0.5, &g).unwrap();
        assert!((e.min - 1.5).abs() < 1e-12);
        assert!((e.max - 2.5).abs() < 1e-12);
        let h = AnalyticFn::on_unit_disk(Expr::poly(vec![c(0.5, 0.0), c(-10.0, 0.0)]));
        let e = min_modulus_on_circle(&h, 0.5, &g).unwrap();
        assert!((e.min - 4.5).abs() < 1e-12);
    }

    #[test]
    fn refinement_is_monotone_on_nested_grids() {
        let f = AnalyticFn::on_unit_disk(
            Expr::poly(vec![c(0.3, 0.1), c(-1.7, 0.4), c(0.0, 0.0), c(2.1, -0.3)]),
        );
        let mut prev_max = f64::NEG_INFINITY;
        let mut prev_min = f64::INFINITY;
        let mut prev_h = f64::NEG_INFINITY;
        for n in [8usize, 16, 32, 64, 128] {
            let e = circle_extrema(&f, c(0.0, 0.0), 0.7, &GridSpec::circle(n).without_refinement()).unwrap();
            assert!(e.max >= prev_max && e.min <= prev_min);
            prev_max = e.max;
            prev_min = e.min;
            let h = max_spherical_on_disk(&f, c(0.0, 0.0), 0.7, &GridSpec::polar(n, n).without_refinement()).unwrap();
            assert!(h.value >= prev_h);
            prev_h = h.value;
        }
    }

    #[test]
    fn angle_wrapping() {
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(-0.5) + 0.5).abs() < 1e-15);
    }
}
