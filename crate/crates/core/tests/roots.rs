mod common;

use std::f64::consts::{FRAC_PI_2, TAU};

use common::{c, point_in};
use normfam_core::roots::{count_a_points, count_a_points_quadrisected, locate_a_points};
use normfam_core::{AnalyticFn, Complex64, Disk, Expr, GridSpec};
use proptest::prelude::*;

fn poly_with_roots(lead: Complex64, roots: &[Complex64]) -> AnalyticFn {
    let e = roots
        .iter()
        .fold(Expr::constant(lead), |acc, r| acc.mul(Expr::z().sub(Expr::constant(*r))));
    AnalyticFn::new(e, Disk::centered(3.0).unwrap())
}

fn roots_strategy() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(point_in(1.4), 1..=6)
}

fn lead_strategy() -> impl Strategy<Value = Complex64> {
    (0.2f64..5.0, 0.0..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

/// Distance from `z` to the segment from `a` to `b`.
fn seg_dist(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let t = (((z - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn count_matches_known_roots(roots in roots_strategy(), lead in lead_strategy(),
                                 center in point_in(0.4), r in 0.2f64..1.2) {
        prop_assume!(roots.iter().all(|z| ((z - center).norm() - r).abs() > 1e-6));
        let f = poly_with_roots(lead, &roots);
        let truth = roots.iter().filter(|z| (*z - center).norm() < r).count() as u32;
        let n = count_a_points(&f, c(0.0, 0.0), Disk::new(center, r).unwrap(), &GridSpec::circle_default(r, 1.0)).unwrap();
        prop_assert_eq!(n.count, truth);
        prop_assert!(n.winding_residual < 0.25);
    }

    #[test]
    fn quadrisection_is_additive(roots in roots_strategy(), lead in lead_strategy(),
                                 r in 0.3f64..1.2, theta0 in 0.0..TAU) {
        let o = c(0.0, 0.0);
        let rays: Vec<Complex64> = (0..4).map(|j| Complex64::from_polar(r, theta0 + FRAC_PI_2 * j as f64)).collect();
        prop_assume!(roots.iter().all(|z| (z.norm() - r).abs() > 1e-4 && rays.iter().all(|e| seg_dist(*z, o, *e) > 1e-4)));
        let f = poly_with_roots(lead, &roots);
        let disk = Disk::centered(r).unwrap();
        let grid = GridSpec::circle_default(r, 1.0);
        let whole = count_a_points(&f, o, disk, &grid).unwrap().count;
        let parts = count_a_points_quadrisected(&f, o, disk, &grid, theta0).unwrap();
        prop_assert_eq!(parts.iter().sum::<u32>(), whole);
    }

    #[test]
    fn rouche_zeros_equal_one_points(roots in prop::collection::vec(point_in(0.6), 1..=5), scale in 2.0f64..50.0) {
        let f = poly_with_roots(c(scale, 0.0), &roots);
        let disk = Disk::centered(0.9).unwrap();
        let grid = GridSpec::circle_default(0.9, 1.0);
        let zeros = count_a_points(&f, c(0.0, 0.0), disk, &grid).unwrap();
        prop_assume!(zeros.min_boundary_modulus > 1.0 + 1e-9);
        let ones = count_a_points(&f, c(1.0, 0.0), disk, &grid).unwrap();
        prop_assert_eq!(zeros.count, ones.count);
    }

    #[test]
    fn located_multiplicities_sum_to_the_count(roots in roots_strategy(), lead in lead_strategy(), a in point_in(2.0)) {
        let f = poly_with_roots(lead, &roots);
        let disk = Disk::centered(1.0).unwrap();
        let n = count_a_points(&f, a, disk, &GridSpec::circle_default(1.0, 1.0));
        prop_assume!(n.is_ok());
        let located = locate_a_points(&f, a, disk, 1e-10).unwrap();
        prop_assert_eq!(located.total(), n.unwrap().count);
        for root in &located.roots {
            let v = f.eval(root.location).unwrap() - a;
            prop_assert!(v.norm() <= 1e-6 * (1.0 + a.norm()), "residual {} at {}", v.norm(), root.location);
        }
    }
}

#[test]
fn quadrisection_rejects_a_root_on_a_ray() {
    let f = poly_with_roots(c(1.0, 0.0), &[c(0.5, 0.0)]);
    let disk = Disk::centered(1.0).unwrap();
    assert!(count_a_points_quadrisected(&f, c(0.0, 0.0), disk, &GridSpec::circle(256), 0.0).is_err());
    let parts = count_a_points_quadrisected(&f, c(0.0, 0.0), disk, &GridSpec::circle(256), 0.3).unwrap();
    assert_eq!(parts, [0, 0, 0, 1]);
}
