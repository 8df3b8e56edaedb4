//! Shared inputs for the benchmarks in `benches/`.

use normfam_core::dsl::FnSource;
use normfam_core::{AnalyticFn, Complex64, Disk};

/// `exp(−ikz)` on a disk of the given radius.
pub fn wave(k: f64, radius: f64) -> AnalyticFn {
    FnSource::new("wave", "exp(-1*i*k*z)")
        .with_param("k", k)
        .with_domain(Disk::centered(radius).expect("positive radius"))
        .build()
        .expect("fixture parses")
}

/// Monic polynomial with `n` zeros spread on the circle of radius 1/2.
pub fn spread_poly(n: usize) -> AnalyticFn {
    let text = (0..n)
        .map(|j| {
            let w = Complex64::from_polar(0.5, 0.7 + std::f64::consts::TAU * j as f64 / n as f64);
            format!("(z - ({} + {}i))", w.re, w.im)
        })
        .collect::<Vec<_>>()
        .join("*");
    FnSource::new("spread", &text)
        .with_domain(Disk::centered(2.0).expect("positive radius"))
        .build()
        .expect("fixture parses")
}

/// `exp(2iz + εz²)` on the disk of radius 4096.
pub fn perturbed_exp(eps: f64) -> AnalyticFn {
    FnSource::new("perturbed", &format!("exp(2*i*z + {eps}*z^2)"))
        .with_domain(Disk::centered(4096.0).expect("positive radius"))
        .build()
        .expect("fixture parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert!(wave(10.0, 1.0).eval(Complex64::new(0.0, 0.0)).is_ok());
        assert!((spread_poly(6).eval(Complex64::new(0.0, 0.0)).unwrap().norm() - 0.5f64.powi(6)).abs() < 1e-15);
        assert!(perturbed_exp(1e-5).eval(Complex64::new(100.0, 0.0)).is_ok());
    }
}
