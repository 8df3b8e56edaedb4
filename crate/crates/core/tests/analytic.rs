mod common;

use common::{build, c, dsl_text, point_in};
use normfam_core::analytic::scan::circle_extrema;
use normfam_core::{Complex64, GridSpec};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn derivative_matches_central_differences(text in dsl_text(), z in point_in(0.5)) {
        let f = build(&text, 1.0);
        let (v, d) = f.eval_with_derivative(z).unwrap();
        let fd = |h: f64| (f.eval(z + h).unwrap() - f.eval(z - h).unwrap()) / (2.0 * h);
        let (e1, e2) = ((fd(1e-3) - d).norm(), (fd(5e-4) - d).norm());
        let scale = 1.0 + v.norm() + d.norm();
        prop_assert!(e2 <= 1e-5 * scale, "{text} at {z}: fd error {e2}");
        // second order: halving h divides the error by about 4
        if e1 > 1e-9 * scale {
            prop_assert!(e2 < 0.35 * e1, "{text} at {z}: {e1} -> {e2}");
        }
    }

    #[test]
    fn spherical_derivative_is_reciprocal_invariant(text in dsl_text(), a in common::coeff(), z in point_in(0.9)) {
        let lead = c(a.abs() + 0.5, a);
        let f = build(&format!("({}+{}i)*exp({text})", lead.re, lead.im), 1.0);
        let inv = lead.inv();
        let g = build(&format!("({}+{}i)*exp(-1*({text}))", inv.re, inv.im), 1.0);
        let (sf, sg) = (f.spherical_derivative(z).unwrap(), g.spherical_derivative(z).unwrap());
        prop_assert!((sf - sg).abs() <= 1e-9 * (sf + sg).max(1e-300), "{sf} vs {sg}");
    }

    #[test]
    fn symmetrized_function_is_real_on_the_axis(text in dsl_text(), x in -0.95f64..0.95) {
        let f = build(&text, 1.0).reflect_symmetrize();
        let v = f.eval(c(x, 0.0)).unwrap();
        prop_assert!(v.im.abs() <= 1e-10 * (1.0 + v.norm()), "{v}");
        prop_assert!(v.re >= -1e-10 * (1.0 + v.norm()));
    }

    #[test]
    fn extrema_are_monotone_under_refinement(text in dsl_text(), r in 0.1f64..0.9, n in 16usize..64) {
        let f = build(&text, 1.0);
        let o = Complex64::new(0.0, 0.0);
        let coarse = circle_extrema(&f, o, r, &GridSpec::circle(n).without_refinement()).unwrap();
        let fine = circle_extrema(&f, o, r, &GridSpec::circle(2 * n).without_refinement()).unwrap();
        let polished = circle_extrema(&f, o, r, &GridSpec::circle(2 * n)).unwrap();
        prop_assert!(fine.ln_max >= coarse.ln_max && fine.ln_min <= coarse.ln_min);
        prop_assert!(polished.ln_max >= fine.ln_max && polished.ln_min <= fine.ln_min);
    }
}
