use num_complex::Complex64;
use serde::Serialize;

use super::{count_a_points, locate_a_points, RootList};
use crate::analytic::scan::min_modulus_on_circle;
use crate::analytic::{AnalyticFn, Disk, GridSpec};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma7Verdict {
    Empty,
    OnePair,
    Violation,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Lemma7Options {
    /// Imaginary-part tolerance for "on the real axis".
    pub axis_tol: f64,
    /// Fraction of the domain radius searched for zeros and 1-points.
    pub hypothesis_fraction: f64,
    pub locate_tol: f64,
}

impl Default for Lemma7Options {
    fn default() -> Self {
        Lemma7Options {
            axis_tol: 1e-8,
            hypothesis_fraction: 0.999,
            locate_tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma7Report {
    pub hypothesis_ok: bool,
    pub zeros_on_nonnegative_axis: bool,
    pub ones_on_nonpositive_axis: bool,
    pub min_modulus: f64,
    pub n_zeros: u32,
    pub n_ones: u32,
    pub verdict: Lemma7Verdict,
    pub zeros: RootList,
    pub ones: RootList,
}

/// Checks the zero/1-point dichotomy on `D(0, r)` for a function whose zeros
/// lie on the non-negative axis and whose 1-points lie on the non-positive axis.
pub fn verify_lemma7(f: &AnalyticFn, r: f64, opts: &Lemma7Options) -> Result<Lemma7Report> {
    let dom = f.domain();
    let hyp = Disk::new(dom.center, opts.hypothesis_fraction * dom.radius)?;
    let unchecked = |what: &str, e: Error| Error::HypothesisUnchecked(format!("locating {what}: {e}"));
    let zeros = locate_a_points(f, Complex64::new(0.0, 0.0), hyp, opts.locate_tol)
        .map_err(|e| unchecked("zeros", e))?;
    let ones = locate_a_points(f, Complex64::new(1.0, 0.0), hyp, opts.locate_tol)
        .map_err(|e| unchecked("1-points", e))?;
    let tol = opts.axis_tol;
    let zeros_ok = zeros
        .roots
        .iter()
        .all(|x| x.location.im.abs() <= tol && x.location.re >= -tol);
    let ones_ok = ones
        .roots
        .iter()
        .all(|x| x.location.im.abs() <= tol && x.location.re <= tol);
    let grid = GridSpec::circle_default(r, 1.0);
    let circle = min_modulus_on_circle(f, r, &grid)?;
    let min_ok = circle.min > 1.0;

    let origin = Complex64::new(0.0, 0.0);
    let zeros_in = zeros.inside(origin, r);
    let ones_in = ones.inside(origin, r);
    let (n_zeros, n_ones) = (zeros_in.total(), ones_in.total());
    if min_ok {
        // |f| > 1 on the circle, so neither count can meet a boundary root
        let disk = Disk::centered(r)?;
        let cz = count_a_points(f, origin, disk, &grid)?.count;
        let co = count_a_points(f, Complex64::new(1.0, 0.0), disk, &grid)?.count;
        if cz != n_zeros || co != n_ones {
            return Err(Error::NonConvergent(format!(
                "located ({n_zeros}, {n_ones}) points but counted ({cz}, {co})"
            )));
        }
    }
    let simple = |l: &RootList| l.roots.iter().all(|x| x.multiplicity == 1);
    let verdict = match (n_zeros, n_ones) {
        (0, 0) => Lemma7Verdict::Empty,
        (1, 1) if simple(&zeros_in) && simple(&ones_in) => Lemma7Verdict::OnePair,
        _ => Lemma7Verdict::Violation,
    };
    Ok(Lemma7Report {
        hypothesis_ok: zeros_ok && ones_ok && min_ok,
        zeros_on_nonnegative_axis: zeros_ok,
        ones_on_nonpositive_axis: ones_ok,
        min_modulus: circle.min,
        n_zeros,
        n_ones,
        verdict,
        zeros,
        ones,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::Expr;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn one_pair_example() {
        let f = AnalyticFn::on_unit_disk(Expr::poly(vec![c(0.5, 0.0), c(-10.0, 0.0)]));
        let rep = verify_lemma7(&f, 0.5, &Lemma7Options::default()).unwrap();
        assert!(rep.hypothesis_ok);
        assert!((rep.min_modulus - 4.5).abs() < 1e-9);
        assert_eq!((rep.n_zeros, rep.n_ones), (1, 1));
        assert_eq!(rep.verdict, Lemma7Verdict::OnePair);
    }

    #[test]
    fn empty_example() {
        let f = AnalyticFn::on_unit_disk(Expr::poly(vec![c(2.0, 0.0), c(1.0, 0.0)]));
        let rep = verify_lemma7(&f, 0.5, &Lemma7Options::default()).unwrap();
        assert!(rep.hypothesis_ok);
        assert_eq!(rep.verdict, Lemma7Verdict::Empty);
    }

    #[test]
    fn small_min_modulus_rejects_hypothesis() {
        let f = AnalyticFn::on_unit_disk(Expr::z());
        let rep = verify_lemma7(&f, 0.5, &Lemma7Options::default()).unwrap();
        assert!(!rep.hypothesis_ok);
        assert!((rep.min_modulus - 0.5).abs() < 1e-12);
    }

    #[test]
    fn off_axis_roots_reject_hypothesis() {
        let f = AnalyticFn::on_unit_disk(Expr::poly(vec![c(-0.1, -0.1), c(1.0, 0.0)]).mul(Expr::constant(c(10.0, 0.0))));
        let rep = verify_lemma7(&f, 0.5, &Lemma7Options::default()).unwrap();
        assert!(!rep.zeros_on_nonnegative_axis);
        assert!(!rep.hypothesis_ok);
    }
}
