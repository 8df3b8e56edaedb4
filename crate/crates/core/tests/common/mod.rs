#![allow(dead_code)]

use normfam_core::{AnalyticFn, Complex64, Disk};
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn coeff() -> impl Strategy<Value = f64> {
    (-30i32..=30).prop_map(|n| n as f64 / 10.0)
}

/// Random DSL text with bounded nesting.
pub fn dsl_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("z".to_string()),
        coeff().prop_map(|x| format!("{x}")),
        coeff().prop_map(|x| format!("{}i", x.abs())),
        (coeff(), 1u32..4).prop_map(|(x, n)| format!("{x}*z^{n}")),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} + {b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) - ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            inner.clone().prop_map(|a| format!("exp(0.5*({a}))")),
            inner.clone().prop_map(|a| format!("reflect({a})")),
            (inner, 0u32..3).prop_map(|(a, n)| format!("({a})^{n}")),
        ]
    })
}

pub fn build(text: &str, radius: f64) -> AnalyticFn {
    normfam_core::dsl::parse_fn(text, &Default::default())
        .unwrap_or_else(|e| panic!("{text}: {e}"))
        .with_domain(Disk::centered(radius).unwrap())
}

pub fn point_in(r: f64) -> impl Strategy<Value = Complex64> {
    (0.0..r, 0.0..std::f64::consts::TAU).prop_map(|(rho, t)| Complex64::from_polar(rho, t))
}
