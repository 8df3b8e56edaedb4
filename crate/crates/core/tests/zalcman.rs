mod common;

use common::{build, c, point_in};
use normfam_core::zalcman::{find_rescaling, run_sequence, Schedule, SequenceOptions, WeightFn};
use normfam_core::{Error, GridSpec};
use proptest::prelude::*;

const TOL: f64 = 1e-6;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn certificates_re_derive_their_invariants(k in 8.0f64..200.0, a in point_in(0.2), eps in 0.3f64..1.0, t0 in 2.0f64..8.0) {
        let f = build(&format!("exp(-1*i*{k}*z)"), 50.0);
        let w = WeightFn::log_squared(t0);
        let cert = match find_rescaling(&f, a, eps, &w, &GridSpec::polar(16, 32)) {
            Err(Error::GuardRejected(_)) => return Ok(()),
            r => r.unwrap(),
        };
        let again = cert.recheck(&w);
        prop_assert_eq!(again, cert.invariants);
        prop_assert!(cert.invariants.hold(), "{:?}", cert.invariants);
        prop_assert!(cert.invariants.normalization_error <= 1e-12);
        prop_assert!((cert.rho * cert.f_sharp_c - 1.0).abs() <= 1e-12);
        prop_assert!(cert.bound_margin >= -TOL, "bound margin {}", cert.bound_margin);
        prop_assert!((cert.a - a).norm() <= eps);
    }

    #[test]
    fn affine_certificates(scale in 20.0f64..2000.0, zero in point_in(0.05)) {
        let f = build(&format!("{scale}*(z - ({} + {}i))", zero.re, zero.im), 1.0);
        let w = WeightFn::log_squared(4.0);
        let cert = find_rescaling(&f, zero, 0.5, &w, &GridSpec::polar(16, 32)).unwrap();
        prop_assert!(cert.invariants.hold());
        prop_assert!(cert.bound_margin >= -TOL);
        // the certificate point stays near the zero, where f# peaks
        prop_assert!((cert.c - zero).norm() <= 0.5);
    }

    #[test]
    fn sequence_growth_bound(eps0 in 2.0f64..4.0, k0 in 10.0f64..30.0) {
        let family = |k: f64| Ok(build(&format!("exp(-1*i*{k}*z)"), 100.0));
        let opts = SequenceOptions {
            schedule: Schedule::InverseSqrt { eps0 },
            weight: WeightFn::log_squared(4.0),
            grid: GridSpec::polar(16, 32),
            search_fraction: 0.5,
        };
        let run = match run_sequence(&family, c(0.0, 0.0), &[k0, 2.0 * k0, 4.0 * k0], &opts) {
            Err(e) if matches!(e.root_cause(), Error::GuardRejected(_)) => return Ok(()),
            r => r.unwrap(),
        };
        prop_assert!(run.min_bound12_margin >= -TOL, "{}", run.min_bound12_margin);
        prop_assert!(run.max_relation_error <= 1e-12);
        for row in &run.rows {
            prop_assert!((row.r_k - row.s / 2.0).abs() <= 1e-15 * row.r_k);
            let eps_k = eps0 / row.k.sqrt();
            prop_assert!(row.xi.norm() <= 0.5 * eps_k * (1.0 + 1e-12));
            prop_assert!((row.eps + row.xi.norm() - eps_k).abs() <= 1e-12);
        }
    }
}

#[test]
fn log_squared_tail_matches_closed_form() {
    for t0 in [2.0, 4.0, 8.0, 1e3] {
        let a = WeightFn::log_squared(t0).admissibility().unwrap();
        assert!(a.admissible);
        assert!((a.integral - 1.0 / f64::ln(t0)).abs() <= 1e-6, "t0 = {t0}: {}", a.integral);
    }
}
