//! Holomorphic functions as expression trees, evaluation, and extremum scans.

mod expr;
pub mod scan;
pub(crate) mod wide;

pub use expr::Expr;
pub(crate) use expr::Jet;
pub use scan::{CircleExtrema, DiskMax, GridKind, GridSpec};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack used when testing membership in a closed disk.
pub const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Result<Disk> {
        if !(radius.is_finite() && radius > 0.0) || !center.re.is_finite() || !center.im.is_finite()
        {
            return Err(Error::InvalidArgument(format!(
                "disk radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Disk { center, radius })
    }

    pub fn centered(radius: f64) -> Result<Disk> {
        Disk::new(Complex64::new(0.0, 0.0), radius)
    }

    pub fn unit() -> Disk {
        Disk {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
        }
    }

    /// Membership in the closed disk, with a small relative slack.
    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius * (1.0 + DOMAIN_SLACK)
    }

    /// Whether the closed disk `D̄(center, radius)` lies in this closed disk.
    pub fn contains_disk(&self, center: Complex64, radius: f64) -> bool {
        (center - self.center).norm() + radius <= self.radius * (1.0 + DOMAIN_SLACK)
    }
}

/// A holomorphic function on a disk.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticFn {
    expr: Expr,
    domain: Disk,
}

impl AnalyticFn {
    pub fn new(expr: Expr, domain: Disk) -> AnalyticFn {
        AnalyticFn { expr, domain }
    }

    /// Function on the unit disk.
    pub fn on_unit_disk(expr: Expr) -> AnalyticFn {
        AnalyticFn::new(expr, Disk::unit())
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn domain(&self) -> Disk {
        self.domain
    }

    pub fn with_domain(mut self, domain: Disk) -> AnalyticFn {
        self.domain = domain;
        self
    }

    pub(crate) fn check_point(&self, z: Complex64) -> Result<()> {
        if self.domain.contains(z) {
            Ok(())
        } else {
            Err(Error::DomainExceeded {
                z,
                domain: self.domain,
            })
        }
    }

    pub(crate) fn check_disk(&self, center: Complex64, radius: f64) -> Result<()> {
        if self.domain.contains_disk(center, radius) {
            Ok(())
        } else {
            let dir = center - self.domain.center;
            let unit = if dir.norm() > 0.0 {
                dir / dir.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            Err(Error::DomainExceeded {
                z: center + unit * radius,
                domain: self.domain,
            })
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_point(z)?;
        self.expr
            .eval_wide(z)
            .and_then(|w| w.to_complex())
            .ok_or(Error::Overflow)
    }

    /// Value and derivative at `z`.
    pub fn eval_with_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let j = self.jet(z)?;
        match (j.v.to_complex(), j.d.to_complex()) {
            (Some(v), Some(d)) => Ok((v, d)),
            _ => Err(Error::Overflow),
        }
    }

    pub(crate) fn jet(&self, z: Complex64) -> Result<Jet> {
        self.check_point(z)?;
        let j = self.expr.jet(z).ok_or(Error::Overflow)?;
        if j.v.is_finite() && j.d.is_finite() {
            Ok(j)
        } else {
            Err(Error::Overflow)
        }
    }

    /// ln |f(z)|, valid far beyond the double range.
    pub fn ln_abs(&self, z: Complex64) -> Result<f64> {
        self.check_point(z)?;
        let w = self.expr.eval_wide(z).ok_or(Error::Overflow)?;
        Ok(w.ln_abs())
    }

    /// |f(z)|, possibly `inf` when the modulus exceeds the double range.
    pub fn abs(&self, z: Complex64) -> Result<f64> {
        Ok(self.ln_abs(z)?.exp())
    }

    /// Symbolic derivative on the same domain.
    pub fn deriv(&self) -> AnalyticFn {
        AnalyticFn::new(self.expr.derivative(), self.domain)
    }

    /// `|f′(z)| / (1 + |f(z)|²)`.
    pub fn spherical_derivative(&self, z: Complex64) -> Result<f64> {
        Ok(spherical_from_jet(&self.jet(z)?))
    }

    /// `z ↦ f(c + ρz)` on the preimage of the domain.
    pub fn rescaled(&self, c: Complex64, rho: f64) -> AnalyticFn {
        self.affine_precompose(Complex64::new(rho, 0.0), c)
    }

    /// `z ↦ f(a·z + b)`; the domain becomes the preimage disk.
    pub fn affine_precompose(&self, a: Complex64, b: Complex64) -> AnalyticFn {
        let domain = Disk {
            center: (self.domain.center - b) / a,
            radius: self.domain.radius / a.norm(),
        };
        AnalyticFn::new(self.expr.clone().affine(a, b), domain)
    }

    /// `z ↦ f(z)·conj(f(conj z))`, on the largest disk symmetric about the real axis.
    pub fn reflect_symmetrize(&self) -> AnalyticFn {
        let c = self.domain.center;
        let domain = Disk {
            center: Complex64::new(c.re, 0.0),
            radius: (self.domain.radius - c.im.abs()).max(f64::MIN_POSITIVE),
        };
        AnalyticFn::new(self.expr.clone().reflect(), domain)
    }
}

pub(crate) fn spherical_from_jet(j: &Jet) -> f64 {
    if j.d.is_zero() {
        return 0.0;
    }
    let lf = j.v.ln_abs();
    let ld = j.d.ln_abs();
    // ln(1 + |f|²) computed without overflow
    let denom = if lf > 0.0 {
        2.0 * lf + (-2.0 * lf).exp().ln_1p()
    } else {
        (2.0 * lf).exp().ln_1p()
    };
    (ld - denom).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn exp_linear(k: Complex64) -> AnalyticFn {
        AnalyticFn::on_unit_disk(Expr::poly(vec![c(0.0, 0.0), k]).exp())
    }

    #[test]
    fn eval_examples() {
        let f = AnalyticFn::new(Expr::poly(vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]), Disk::centered(3.0).unwrap());
        assert_eq!(f.eval(c(2.0, 0.0)).unwrap(), c(3.0, 0.0));
        assert_eq!(exp_linear(c(0.0, 2.0)).eval(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        let g = AnalyticFn::on_unit_disk(Expr::poly(vec![c(0.5, 0.0), c(-10.0, 0.0)])).reflect_symmetrize();
        assert!((g.eval(c(-0.05, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn domain_and_overflow_errors() {
        let f = exp_linear(c(1000.0, 0.0));
        assert!(matches!(f.eval(c(2.0, 0.0)), Err(Error::DomainExceeded { .. })));
        assert!(matches!(f.eval(c(0.9, 0.0)), Err(Error::Overflow)));
        assert!((f.ln_abs(c(0.9, 0.0)).unwrap() - 900.0).abs() < 1e-9);
    }

    #[test]
    fn deriv_examples() {
        let sq = AnalyticFn::on_unit_disk(Expr::z().pow(2)).deriv();
        assert_eq!(sq.eval(c(1.0, 0.0)).unwrap(), c(2.0, 0.0));
        let e = exp_linear(c(0.0, 2.0)).deriv();
        assert_eq!(e.eval(c(0.0, 0.0)).unwrap(), c(0.0, 2.0));
        let lin = AnalyticFn::on_unit_disk(Expr::z().sub(Expr::constant(c(0.05, 0.0))).mul(Expr::constant(c(10.0, 0.0)))).deriv();
        assert_eq!(lin.expr(), &Expr::constant(c(10.0, 0.0)));
    }

    #[test]
    fn spherical_derivative_examples() {
        let id = AnalyticFn::on_unit_disk(Expr::z());
        assert_eq!(id.spherical_derivative(c(0.0, 0.0)).unwrap(), 1.0);
        assert!((exp_linear(c(0.0, 2.0)).spherical_derivative(c(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        let f = exp_linear(c(0.0, -10.0));
        for x in [-0.7, 0.0, 0.3] {
            assert!((f.spherical_derivative(c(x, 0.0)).unwrap() - 5.0).abs() < 1e-13);
        }
        // closed form k e^{ky}/(1+e^{2ky})
        let y: f64 = 0.37;
        let want = 10.0 * (10.0 * y).exp() / (1.0 + (20.0 * y).exp());
        assert!((f.spherical_derivative(c(0.1, y)).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn spherical_derivative_for_huge_values() {
        // f = exp(1000 z): f# = 1000 e^{1000x}/(1+e^{2000x}) ~ 1000 e^{-1000x}
        let f = exp_linear(c(1000.0, 0.0));
        let got = f.spherical_derivative(c(0.6, 0.0)).unwrap();
        let want = (1000f64.ln() - 600.0).exp();
        assert!((got / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rescaled_examples() {
        let f = exp_linear(c(0.0, -10.0));
        let g = f.rescaled(c(0.0, 0.0), 0.2);
        assert_eq!(g.domain().radius, 5.0);
        let z = c(0.7, -0.3);
        let want = (c(0.0, -2.0) * z).exp();
        assert!((g.eval(z).unwrap() - want).norm() < 1e-14);
        let id = AnalyticFn::on_unit_disk(Expr::z());
        assert_eq!(id.rescaled(c(0.0, 0.0), 1.0), id);
        let cc = c(0.1, 0.05);
        let s = f.rescaled(cc, 0.3).spherical_derivative(c(0.0, 0.0)).unwrap();
        assert!((s - 0.3 * f.spherical_derivative(cc).unwrap()).abs() < 1e-14);
    }
}
