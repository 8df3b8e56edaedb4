//! Constructive rescaling: from a point of large spherical derivative to a
//! rescaled function with an explicit spherical-derivative bound.

mod weight;

pub use weight::{Admissibility, WeightFn, ADMISSIBILITY_CAP};

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::E;

use crate::analytic::scan::{max_spherical_on_disk, maximize_on_disk, polar_points};
use crate::analytic::{AnalyticFn, DiskMax, GridSpec};
use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 100_000;
/// Relative tolerance of the sampled bound checks.
pub const BOUND_TOL: f64 = 1e-6;

/// The four algebraic invariants of a certificate, re-derived from its fields.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CertificateInvariants {
    pub normalization_error: f64,
    pub containment_slack: f64,
    pub dominance: bool,
    pub proximity_ratio: f64,
}

impl CertificateInvariants {
    pub fn hold(&self) -> bool {
        self.normalization_error <= 1e-12
            && self.containment_slack >= -1e-12
            && self.dominance
            && self.proximity_ratio <= 2.0 / 3.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RescalingCertificate {
    pub a: Complex64,
    pub eps: f64,
    /// Stopping radius.
    pub r: f64,
    /// Sampled `max f#` on `D̄(a, r)`.
    pub h: f64,
    pub b: Complex64,
    pub t: f64,
    pub c: Complex64,
    /// `f#(c)`
    pub f_sharp_c: f64,
    pub rho: f64,
    pub s: f64,
    /// Smallest `1 − g#(z)(1 − |z|/s)` over the verification grid.
    pub bound_margin: f64,
    /// `g#(0)` evaluated on the rescaled tree.
    pub g_sharp_origin: f64,
    pub iterations: usize,
    pub invariants: CertificateInvariants,
    pub weight: String,
    pub grid: GridSpec,
}

impl RescalingCertificate {
    /// Recomputes the invariants from the stored fields.
    pub fn recheck(&self, weight: &WeightFn) -> CertificateInvariants {
        invariants(self.a, self.eps, self.b, self.h, self.t, self.c, self.f_sharp_c, self.rho, weight)
    }
}

#[allow(clippy::too_many_arguments)]
fn invariants(
    a: Complex64,
    eps: f64,
    b: Complex64,
    h: f64,
    t: f64,
    c: Complex64,
    fc: f64,
    rho: f64,
    weight: &WeightFn,
) -> CertificateInvariants {
    let s = fc / (3.0 * weight.eval(fc));
    CertificateInvariants {
        normalization_error: (rho * fc - 1.0).abs(),
        containment_slack: eps - ((c - a).norm() + rho * s),
        dominance: fc >= h,
        proximity_ratio: (c - b).norm() / t,
    }
}

/// Runs the stopping-radius iteration and the weighted argmax from `a`.
///
/// Requires `f#(a) ≥ t0` and `φ(f#(a)) > 2/ε`. The sampled bound
/// `g#(z) ≤ 1/(1 − |z|/s)` for `g(z) = f(c + ρz)` is checked on a polar grid
/// of `D(0, 0.9s)`.
pub fn find_rescaling(
    f: &AnalyticFn,
    a: Complex64,
    eps: f64,
    weight: &WeightFn,
    grid: &GridSpec,
) -> Result<RescalingCertificate> {
    weight.validate()?;
    grid.validate()?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("eps = {eps} must be positive")));
    }
    f.check_disk(a, eps)?;
    let fa = f.spherical_derivative(a)?;
    let t0 = weight.t0();
    if !(fa >= t0) {
        return Err(Error::GuardRejected(format!(
            "f#(a) = {fa:.6e} is below the weight threshold t0 = {t0}"
        )));
    }
    if weight.eval(fa) <= 2.0 / eps {
        return Err(Error::GuardRejected(format!(
            "phi(f#(a)) = {:.6} does not exceed 2/eps = {:.6}",
            weight.eval(fa),
            2.0 / eps
        )));
    }
    let (radial, angular) = grid.polar_counts();
    let mut r = 0.0;
    let mut cur = DiskMax {
        argmax: a,
        value: fa,
        radial,
        angular,
        evaluations: 1,
        refined: false,
    };
    let mut iterations = 0;
    loop {
        let next_r = r + 1.0 / weight.eval(cur.value);
        if next_r >= eps {
            return Err(Error::NoStop { r: next_r, eps });
        }
        let next = max_spherical_on_disk(f, a, next_r, grid)?;
        if next.value <= E * cur.value {
            break;
        }
        r = next_r;
        if r >= eps / 2.0 {
            return Err(Error::NoStop { r, eps });
        }
        cur = next;
        iterations += 1;
        if iterations >= MAX_ITERATIONS {
            return Err(Error::NoStop { r, eps });
        }
    }
    let b = cur.argmax;
    let h = cur.value;
    let t = 1.0 / weight.eval(h);
    let weighted = maximize_on_disk(
        |z| Ok(f.spherical_derivative(z)? * (1.0 - (z - b).norm() / t)),
        b,
        t,
        radial,
        angular,
        grid.refine,
    )?;
    let c = weighted.argmax;
    let fc = f.spherical_derivative(c)?;
    let rho = 1.0 / fc;
    let s = fc / (3.0 * weight.eval(fc));
    let inv = invariants(a, eps, b, h, t, c, fc, rho, weight);
    if !inv.hold() {
        return Err(Error::BoundViolated(format!("certificate invariants fail: {inv:?}")));
    }
    let g = f.rescaled(c, rho);
    let g0 = g.spherical_derivative(Complex64::new(0.0, 0.0))?;
    let mut bound_margin = 1.0 - g0;
    for z in polar_points(Complex64::new(0.0, 0.0), 0.9 * s, radial, angular) {
        let m = 1.0 - g.spherical_derivative(z)? * (1.0 - z.norm() / s);
        bound_margin = bound_margin.min(m);
    }
    if bound_margin < -BOUND_TOL {
        return Err(Error::BoundViolated(format!(
            "sampled g#(z)(1 - |z|/s) exceeds 1 by {:.3e}",
            -bound_margin
        )));
    }
    Ok(RescalingCertificate {
        a,
        eps,
        r,
        h,
        b,
        t,
        c,
        f_sharp_c: fc,
        rho,
        s,
        bound_margin,
        g_sharp_origin: g0,
        iterations,
        invariants: inv,
        weight: weight.describe(),
        grid: *grid,
    })
}

/// How the search radius shrinks along a sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    /// `ε_k = ε0/√k`
    InverseSqrt { eps0: f64 },
    /// One radius per entry of `ks`.
    Explicit { eps: Vec<f64> },
}

impl Schedule {
    fn radii(&self, ks: &[f64]) -> Result<Vec<f64>> {
        let eps: Vec<f64> = match self {
            Schedule::InverseSqrt { eps0 } => ks.iter().map(|k| eps0 / k.sqrt()).collect(),
            Schedule::Explicit { eps } => {
                if eps.len() != ks.len() {
                    return Err(Error::ScheduleInvalid(format!(
                        "{} radii for {} sequence indices",
                        eps.len(),
                        ks.len()
                    )));
                }
                eps.clone()
            }
        };
        if eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(Error::ScheduleInvalid("radii must be positive".into()));
        }
        if eps.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::ScheduleInvalid("radii must be non-increasing".into()));
        }
        Ok(eps)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SequenceRow {
    pub k: f64,
    /// Point of largest sampled `f_k#` near `z0`, the centre of the search.
    pub xi: Complex64,
    pub eps: f64,
    pub z_k: Complex64,
    pub rho: f64,
    pub s: f64,
    /// `R_k = s_k/2`
    pub r_k: f64,
    /// Smallest `1 + |z|/R_k − g_k#(z)` on `D(0, 0.9R_k)`.
    pub bound12_margin: f64,
    /// `1/(6ρ_k φ(1/ρ_k))`
    pub r_k_from_rho: f64,
    pub relation_error: f64,
    pub certificate: RescalingCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SequenceRun {
    pub rows: Vec<SequenceRow>,
    pub r_nondecreasing: bool,
    pub r_strictly_increasing: bool,
    pub min_bound12_margin: f64,
    pub max_relation_error: f64,
}

/// Options for [`run_sequence`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SequenceOptions {
    pub schedule: Schedule,
    pub weight: WeightFn,
    pub grid: GridSpec,
    /// `ξ_k` is searched on `D̄(z0, search_fraction·ε_k)`.
    pub search_fraction: f64,
}

/// Runs [`find_rescaling`] along a family `k ↦ f_k` near `z0`.
///
/// For each `k` the search starts from the point `ξ_k` of largest sampled
/// spherical derivative on `D̄(z0, search_fraction·ε_k)` and uses the radius
/// `ε_k − |ξ_k − z0|`, so every search disk stays inside `D̄(z0, ε_k)`.
pub fn run_sequence(
    family: &dyn Fn(f64) -> Result<AnalyticFn>,
    z0: Complex64,
    ks: &[f64],
    opts: &SequenceOptions,
) -> Result<SequenceRun> {
    if ks.is_empty() || ks.iter().any(|k| !(*k > 0.0)) || ks.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::ScheduleInvalid(
            "sequence indices must be positive and strictly increasing".into(),
        ));
    }
    if !(opts.search_fraction >= 0.0 && opts.search_fraction < 1.0) {
        return Err(Error::InvalidArgument("search fraction must lie in [0, 1)".into()));
    }
    let eps = opts.schedule.radii(ks)?;
    let mut rows = Vec::with_capacity(ks.len());
    for (&k, &eps_k) in ks.iter().zip(&eps) {
        let row = sequence_row(family, z0, k, eps_k, opts).map_err(|e| Error::Source {
            name: format!("k = {k}"),
            source: Box::new(e),
        })?;
        rows.push(row);
    }
    let r: Vec<f64> = rows.iter().map(|x| x.r_k).collect();
    Ok(SequenceRun {
        r_nondecreasing: r.windows(2).all(|w| w[1] >= w[0]),
        r_strictly_increasing: r.windows(2).all(|w| w[1] > w[0]),
        min_bound12_margin: rows.iter().map(|x| x.bound12_margin).fold(f64::INFINITY, f64::min),
        max_relation_error: rows.iter().map(|x| x.relation_error).fold(0.0, f64::max),
        rows,
    })
}

fn sequence_row(
    family: &dyn Fn(f64) -> Result<AnalyticFn>,
    z0: Complex64,
    k: f64,
    eps_k: f64,
    opts: &SequenceOptions,
) -> Result<SequenceRow> {
    let f = family(k)?;
    let xi = if opts.search_fraction > 0.0 {
        max_spherical_on_disk(&f, z0, opts.search_fraction * eps_k, &opts.grid)?.argmax
    } else {
        z0
    };
    let eps = eps_k - (xi - z0).norm();
    let cert = find_rescaling(&f, xi, eps, &opts.weight, &opts.grid)?;
    let r_k = cert.s / 2.0;
    let g = f.rescaled(cert.c, cert.rho);
    let (radial, angular) = opts.grid.polar_counts();
    let mut margin = 1.0 - g.spherical_derivative(Complex64::new(0.0, 0.0))?;
    for z in polar_points(Complex64::new(0.0, 0.0), 0.9 * r_k, radial, angular) {
        margin = margin.min(1.0 + z.norm() / r_k - g.spherical_derivative(z)?);
    }
    if margin < -BOUND_TOL {
        return Err(Error::BoundViolated(format!(
            "sampled g#(z) exceeds 1 + |z|/R by {:.3e}",
            -margin
        )));
    }
    let from_rho = 1.0 / (6.0 * cert.rho * opts.weight.eval(1.0 / cert.rho));
    Ok(SequenceRow {
        k,
        xi,
        eps,
        z_k: cert.c,
        rho: cert.rho,
        s: cert.s,
        r_k,
        bound12_margin: margin,
        r_k_from_rho: from_rho,
        relation_error: (r_k - from_rho).abs() / r_k,
        certificate: cert,
    })
}
