//! Counting and locating a-points with the argument principle.

pub(crate) mod contour;
mod lemma7;

pub use lemma7::{verify_lemma7, Lemma7Options, Lemma7Report, Lemma7Verdict};

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

use crate::analytic::{AnalyticFn, Disk, GridSpec};
use crate::error::{Error, Result};
use contour::{circle, wind, Piece};

/// Number of a-points of a function in a disk.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootCount {
    pub a: Complex64,
    pub disk: Disk,
    pub count: u32,
    /// Distance of the raw contour integral (in turns) to `count`.
    pub winding_residual: f64,
    pub samples: usize,
    pub min_boundary_modulus: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Root {
    pub location: Complex64,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize)]
pub struct RootList {
    pub roots: Vec<Root>,
}

impl RootList {
    pub fn total(&self) -> u32 {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Roots strictly inside `|z − center| < r`.
    pub fn inside(&self, center: Complex64, r: f64) -> RootList {
        RootList {
            roots: self
                .roots
                .iter()
                .copied()
                .filter(|x| (x.location - center).norm() < r)
                .collect(),
        }
    }
}

/// Counts the solutions of `f(z) = a` in the open disk.
pub fn count_a_points(
    f: &AnalyticFn,
    a: Complex64,
    disk: Disk,
    quadrature: &GridSpec,
) -> Result<RootCount> {
    quadrature.validate()?;
    f.check_disk(disk.center, disk.radius)?;
    let w = wind(
        f,
        a,
        &circle(disk.center, disk.radius),
        quadrature.circle_samples(),
        disk.center,
    )?;
    if w.count < 0 {
        return Err(Error::NonConvergent(format!("negative winding number {}", w.count)));
    }
    Ok(RootCount {
        a,
        disk,
        count: w.count as u32,
        winding_residual: w.residual,
        samples: w.samples,
        min_boundary_modulus: w.min_ln.exp(),
    })
}

/// Counts of `f = a` in the four quarter-disks
/// `{θ0 + jπ/2 < arg(z − center) < θ0 + (j+1)π/2}` of the open disk.
pub fn count_a_points_quadrisected(
    f: &AnalyticFn,
    a: Complex64,
    disk: Disk,
    quadrature: &GridSpec,
    theta0: f64,
) -> Result<[u32; 4]> {
    quadrature.validate()?;
    f.check_disk(disk.center, disk.radius)?;
    let mut out = [0u32; 4];
    for (j, slot) in out.iter_mut().enumerate() {
        let quarter = Region::Sector {
            center: disk.center,
            r0: 0.0,
            r1: disk.radius,
            t0: theta0 + FRAC_PI_2 * j as f64,
            t1: theta0 + FRAC_PI_2 * (j + 1) as f64,
        };
        let w = wind(f, a, &quarter.contour(), quadrature.circle_samples(), quarter.anchor())?;
        if w.count < 0 {
            return Err(Error::NonConvergent(format!("negative winding number {}", w.count)));
        }
        *slot = w.count as u32;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
enum Region {
    Disk {
        center: Complex64,
        radius: f64,
    },
    /// `{center + ρe^{iθ} : r0 < ρ < r1, t0 < θ < t1}`
    Sector {
        center: Complex64,
        r0: f64,
        r1: f64,
        t0: f64,
        t1: f64,
    },
}

const SPLIT_RATIOS: [(f64, f64); 4] = [(0.5, 0.5), (0.437, 0.561), (0.583, 0.419), (0.371, 0.647)];
const SPLIT_OFFSETS: [f64; 4] = [0.1234, 0.5321, 0.9137, 1.3311];

impl Region {
    fn contour(&self) -> Vec<Piece> {
        match *self {
            Region::Disk { center, radius } => circle(center, radius),
            Region::Sector {
                center,
                r0,
                r1,
                t0,
                t1,
            } => {
                let p = |r: f64, t: f64| center + Complex64::from_polar(r, t);
                vec![
                    Piece::Arc {
                        center,
                        radius: r1,
                        t0,
                        t1,
                    },
                    Piece::Segment {
                        a: p(r1, t1),
                        b: p(r0, t1),
                    },
                    Piece::Arc {
                        center,
                        radius: r0,
                        t0: t1,
                        t1: t0,
                    },
                    Piece::Segment {
                        a: p(r0, t0),
                        b: p(r1, t0),
                    },
                ]
            }
        }
    }

    fn size(&self) -> f64 {
        match *self {
            Region::Disk { radius, .. } => 2.0 * radius,
            Region::Sector { r0, r1, t0, t1, .. } => (r1 - r0) + r1 * (t1 - t0),
        }
    }

    fn anchor(&self) -> Complex64 {
        match *self {
            Region::Disk { center, .. } => center,
            Region::Sector {
                center,
                r0,
                r1,
                t0,
                t1,
            } => center + Complex64::from_polar(0.5 * (r0 + r1), 0.5 * (t0 + t1)),
        }
    }

    fn split(&self, variant: usize) -> Vec<Region> {
        let (mu, nu) = SPLIT_RATIOS[variant];
        match *self {
            Region::Disk { center, radius } => {
                let inner = mu * radius;
                let off = SPLIT_OFFSETS[variant];
                let mut out = vec![Region::Disk {
                    center,
                    radius: inner,
                }];
                for j in 0..4 {
                    out.push(Region::Sector {
                        center,
                        r0: inner,
                        r1: radius,
                        t0: off + FRAC_PI_2 * j as f64,
                        t1: off + FRAC_PI_2 * (j + 1) as f64,
                    });
                }
                out
            }
            Region::Sector {
                center,
                r0,
                r1,
                t0,
                t1,
            } => {
                let rm = r0 + mu * (r1 - r0);
                let tm = t0 + nu * (t1 - t0);
                let mut out = Vec::with_capacity(4);
                for (a, b) in [(r0, rm), (rm, r1)] {
                    for (c, d) in [(t0, tm), (tm, t1)] {
                        out.push(Region::Sector {
                            center,
                            r0: a,
                            r1: b,
                            t0: c,
                            t1: d,
                        });
                    }
                }
                out
            }
        }
    }
}

struct Locator<'a> {
    f: &'a AnalyticFn,
    a: Complex64,
    cluster_tol: f64,
    roots: Vec<Root>,
}

const SUB_SAMPLES: usize = 32;
const MAX_DEPTH: usize = 200;

impl Locator<'_> {
    fn newton(&self, z0: Complex64, mult: u32) -> Option<Complex64> {
        let mut z = z0;
        for _ in 0..60 {
            let (v, d) = self.f.eval_with_derivative(z).ok()?;
            let g = v - self.a;
            if g == Complex64::new(0.0, 0.0) {
                return Some(z);
            }
            if d == Complex64::new(0.0, 0.0) {
                return None;
            }
            let step = g / d * mult as f64;
            z -= step;
            if !z.re.is_finite() || !z.im.is_finite() {
                return None;
            }
            if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
                return Some(z);
            }
        }
        // multiple roots converge slowly near the noise floor; accept the last iterate
        Some(z)
    }

    fn solve(&mut self, region: Region, count: u32, moments: [Complex64; 3], depth: usize) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        let k = count as f64;
        let anchor = region.anchor();
        let size = region.size();
        let centroid = anchor + moments[1] / k;
        let spread = ((moments[2] - moments[1] * moments[1] / k).norm() / k).sqrt();
        if count == 1 || spread <= self.cluster_tol {
            let z = match self.newton(centroid, count) {
                Some(z) if (z - centroid).norm() <= spread + 1e-6 * size + self.cluster_tol => z,
                _ => centroid,
            };
            self.roots.push(Root {
                location: z,
                multiplicity: count,
            });
            return Ok(());
        }
        if size < self.cluster_tol || depth >= MAX_DEPTH {
            return Err(Error::ClusterUnresolved { near: centroid });
        }
        let mut last_err = None;
        for variant in 0..SPLIT_RATIOS.len() {
            let children = region.split(variant);
            let mut results = Vec::with_capacity(children.len());
            let mut ok = true;
            for child in &children {
                match wind(self.f, self.a, &child.contour(), SUB_SAMPLES, child.anchor()) {
                    Ok(w) if w.count >= 0 => results.push((*child, w)),
                    Ok(w) => {
                        last_err = Some(Error::NonConvergent(format!("negative winding {}", w.count)));
                        ok = false;
                        break;
                    }
                    Err(e @ (Error::BoundaryRoot { .. } | Error::NonConvergent(_))) => {
                        last_err = Some(e);
                        ok = false;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if !ok {
                continue;
            }
            let total: i64 = results.iter().map(|(_, w)| w.count).sum();
            if total != count as i64 {
                last_err = Some(Error::NonConvergent(format!(
                    "sub-region counts sum to {total}, expected {count}"
                )));
                continue;
            }
            for (child, w) in results {
                self.solve(child, w.count as u32, w.moments, depth + 1)?;
            }
            return Ok(());
        }
        Err(last_err.unwrap_or(Error::ClusterUnresolved { near: centroid }))
    }
}

/// Locates the solutions of `f(z) = a` in the open disk with multiplicities.
///
/// Regions are subdivided by count until each holds a single root or a
/// cluster narrower than `max(tol, 1e-8·radius)`; contour moments give the
/// starting point for Newton polishing.
pub fn locate_a_points(f: &AnalyticFn, a: Complex64, disk: Disk, tol: f64) -> Result<RootList> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    f.check_disk(disk.center, disk.radius)?;
    let top = Region::Disk {
        center: disk.center,
        radius: disk.radius,
    };
    let n = crate::analytic::scan::default_circle_samples(disk.radius, 1.0);
    let w = wind(f, a, &top.contour(), n, top.anchor())?;
    if w.count < 0 {
        return Err(Error::NonConvergent(format!("negative winding number {}", w.count)));
    }
    let mut loc = Locator {
        f,
        a,
        cluster_tol: tol.max(1e-8 * disk.radius),
        roots: Vec::new(),
    };
    loc.solve(top, w.count as u32, w.moments, 0)?;
    let mut roots = loc.roots;
    roots.sort_by(|x, y| {
        x.location
            .re
            .total_cmp(&y.location.re)
            .then(x.location.im.total_cmp(&y.location.im))
    });
    Ok(RootList { roots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::Expr;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly_from_roots(roots: &[Complex64], domain: f64) -> AnalyticFn {
        let mut e = Expr::constant(c(1.0, 0.0));
        for r in roots {
            e = e.mul(Expr::poly(vec![-r, c(1.0, 0.0)]));
        }
        AnalyticFn::new(e, Disk::centered(domain).unwrap())
    }

    #[test]
    fn count_examples() {
        let g = GridSpec::circle(256);
        let f = poly_from_roots(&[c(1.0, 0.0), c(-1.0, 0.0)], 3.0);
        assert_eq!(count_a_points(&f, c(0.0, 0.0), Disk::centered(2.0).unwrap(), &g).unwrap().count, 2);
        let e = AnalyticFn::new(Expr::z().exp(), Disk::centered(6.0).unwrap());
        assert_eq!(count_a_points(&e, c(0.0, 0.0), Disk::centered(5.0).unwrap(), &g).unwrap().count, 0);
        let w = AnalyticFn::on_unit_disk(Expr::poly(vec![c(0.0, 0.0), c(0.0, -10.0)]).exp());
        let rc = count_a_points(&w, c(1.0, 0.0), Disk::centered(0.95).unwrap(), &g).unwrap();
        assert_eq!(rc.count, 3);
        assert!(rc.winding_residual < 1e-6);
    }

    #[test]
    fn count_rejects_boundary_roots() {
        let f = poly_from_roots(&[c(1.0, 0.0), c(-1.0, 0.0)], 3.0);
        let r = count_a_points(&f, c(0.0, 0.0), Disk::centered(1.0).unwrap(), &GridSpec::circle(256));
        assert!(matches!(r, Err(Error::BoundaryRoot { .. })));
        let near = poly_from_roots(&[c(1.0 + 1e-13, 0.0)], 3.0);
        let r = count_a_points(&near, c(0.0, 0.0), Disk::centered(1.0).unwrap(), &GridSpec::circle(256));
        assert!(matches!(r, Err(Error::BoundaryRoot { .. })), "{r:?}");
    }

    #[test]
    fn locate_examples() {
        let f = poly_from_roots(&[c(1.0, 0.0), c(-1.0, 0.0)], 3.0);
        let l = locate_a_points(&f, c(0.0, 0.0), Disk::centered(2.0).unwrap(), 1e-10).unwrap();
        assert_eq!(l.roots.len(), 2);
        assert!((l.roots[0].location - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((l.roots[1].location - c(1.0, 0.0)).norm() < 1e-12);

        let d = poly_from_roots(&[c(0.3, 0.0), c(0.3, 0.0)], 1.0);
        let l = locate_a_points(&d, c(0.0, 0.0), Disk::unit(), 1e-10).unwrap();
        assert_eq!(l.roots.len(), 1);
        assert_eq!(l.roots[0].multiplicity, 2);
        assert!((l.roots[0].location - c(0.3, 0.0)).norm() < 1e-7);

        let lin = AnalyticFn::on_unit_disk(Expr::poly(vec![c(0.5, 0.0), c(-10.0, 0.0)]));
        let l = locate_a_points(&lin, c(1.0, 0.0), Disk::centered(0.5).unwrap(), 1e-10).unwrap();
        assert_eq!(l.roots.len(), 1);
        assert_eq!(l.roots[0].multiplicity, 1);
        assert!((l.roots[0].location - c(-0.05, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn locate_close_and_clustered_roots() {
        let roots = [c(0.1, 0.1), c(0.1 + 1e-5, 0.1), c(-0.4, 0.2), c(0.05, -0.6)];
        let f = poly_from_roots(&roots, 1.0);
        let l = locate_a_points(&f, c(0.0, 0.0), Disk::centered(0.9).unwrap(), 1e-10).unwrap();
        assert_eq!(l.total(), 4);
        assert_eq!(l.roots.len(), 4);
        for r in roots {
            assert!(l.roots.iter().any(|x| (x.location - r).norm() < 1e-10));
        }
    }

    #[test]
    fn locate_exponential_one_points() {
        let w = AnalyticFn::on_unit_disk(Expr::poly(vec![c(0.0, 0.0), c(0.0, -10.0)]).exp());
        let l = locate_a_points(&w, c(1.0, 0.0), Disk::centered(0.95).unwrap(), 1e-10).unwrap();
        let want = [-std::f64::consts::PI / 5.0, 0.0, std::f64::consts::PI / 5.0];
        assert_eq!(l.roots.len(), 3);
        for (r, x) in l.roots.iter().zip(want) {
            assert!((r.location - c(x, 0.0)).norm() < 1e-12);
        }
    }
}
