//! Adaptive evaluation of winding numbers and log-derivative moments along
//! closed piecewise contours.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI, TAU};

use crate::analytic::wide::Wide;
use crate::analytic::AnalyticFn;
use crate::error::{Error, Result};

pub(crate) const MAX_SAMPLES: usize = 1 << 18;
/// Relative modulus floor of the boundary guard.
pub(crate) const GUARD_REL: f64 = 1e-9;

const GL_X: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL_W: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

#[derive(Clone, Copy, Debug)]
pub(crate) enum Piece {
    /// Arc of `center + radius·e^{iθ}` for θ from `t0` to `t1`.
    Arc {
        center: Complex64,
        radius: f64,
        t0: f64,
        t1: f64,
    },
    Segment { a: Complex64, b: Complex64 },
}

impl Piece {
    /// Point and `dz/ds` at parameter `s ∈ [0, 1]`.
    fn at(&self, s: f64) -> (Complex64, Complex64) {
        match *self {
            Piece::Arc {
                center,
                radius,
                t0,
                t1,
            } => {
                let t = t0 + (t1 - t0) * s;
                let e = Complex64::from_polar(radius, t);
                (center + e, e * Complex64::new(0.0, t1 - t0))
            }
            Piece::Segment { a, b } => (a + (b - a) * s, b - a),
        }
    }

    fn length(&self) -> f64 {
        match *self {
            Piece::Arc { radius, t0, t1, .. } => radius * (t1 - t0).abs(),
            Piece::Segment { a, b } => (b - a).norm(),
        }
    }
}

pub(crate) fn circle(center: Complex64, radius: f64) -> Vec<Piece> {
    vec![Piece::Arc {
        center,
        radius,
        t0: 0.0,
        t1: TAU,
    }]
}

#[derive(Clone, Copy)]
struct Sample {
    g: Wide,
    /// g′/g
    q: Complex64,
}

/// Outcome of one closed-contour pass.
#[derive(Clone, Debug)]
pub(crate) struct Winding {
    pub count: i64,
    pub residual: f64,
    /// `(1/2πi) ∮ (z − m)^p g′/g dz` for p = 0, 1, 2.
    pub moments: [Complex64; 3],
    pub samples: usize,
    pub min_ln: f64,
}

struct Acc<'a> {
    f: &'a AnalyticFn,
    a: Wide,
    mc: Complex64,
    samples: usize,
    min_ln: f64,
    max_ln: f64,
    argmin: Complex64,
    min_dist: f64,
}

impl Acc<'_> {
    fn sample(&mut self, z: Complex64) -> Result<Sample> {
        self.samples += 1;
        let j = self.f.jet(z)?;
        let g = j.v.sub(self.a);
        if g.is_zero() {
            return Err(Error::BoundaryRoot {
                min_modulus: 0.0,
                near: z,
            });
        }
        let q = j.d.div(g).to_complex().ok_or(Error::Overflow)?;
        let ln = g.ln_abs();
        if ln < self.min_ln {
            self.min_ln = ln;
            self.argmin = z;
        }
        self.max_ln = self.max_ln.max(ln);
        let qn = q.norm();
        if qn > 0.0 {
            self.min_dist = self.min_dist.min(1.0 / qn);
        }
        Ok(Sample { g, q })
    }

    /// The scale-aware guard: the boundary modulus is tiny relative to the
    /// largest boundary modulus and the log-derivative says a zero is close.
    fn guard_tripped(&self, size: f64) -> bool {
        let m = self.max_ln;
        let ln_one_plus_max = if m > 0.0 { m + (-m).exp().ln_1p() } else { m.exp().ln_1p() };
        let floor = GUARD_REL.ln() + ln_one_plus_max;
        self.min_ln <= floor && self.min_dist <= GUARD_REL * size
    }

    fn boundary_root(&self) -> Error {
        Error::BoundaryRoot {
            min_modulus: self.min_ln.exp(),
            near: self.argmin,
        }
    }
}

/// Winding number of `f − a` along `contour` with log-derivative moments about `mc`.
pub(crate) fn wind(
    f: &AnalyticFn,
    a: Complex64,
    contour: &[Piece],
    base: usize,
    mc: Complex64,
) -> Result<Winding> {
    let total: f64 = contour.iter().map(Piece::length).sum();
    let size = total / PI;
    let mut acc = Acc {
        f,
        a: Wide::new(a),
        mc,
        samples: 0,
        min_ln: f64::INFINITY,
        max_ln: f64::NEG_INFINITY,
        argmin: contour.first().map(|p| p.at(0.0).0).unwrap_or_default(),
        min_dist: f64::INFINITY,
    };
    let mut phase = 0.0;
    let mut quad = 0.0;
    let mut moments = [Complex64::new(0.0, 0.0); 3];
    for piece in contour {
        let len = piece.length();
        let n = ((base as f64 * len / total).ceil() as usize).max(8);
        let mut stack = Vec::new();
        let mut prev = acc.sample(piece.at(0.0).0)?;
        // intervals are processed left to right; the stack holds pending right halves
        for j in 0..n {
            let s1 = (j + 1) as f64 / n as f64;
            let right = acc.sample(piece.at(s1).0)?;
            stack.push((j as f64 / n as f64, s1, right));
            while let Some((s0, s1, right)) = stack.pop() {
                if acc.samples > MAX_SAMPLES {
                    return Err(if acc.guard_tripped(size) {
                        acc.boundary_root()
                    } else {
                        Error::NonConvergent(format!(
                            "winding number unresolved after {MAX_SAMPLES} samples"
                        ))
                    });
                }
                let dph = right.g.div(prev.g).arg();
                let h = 0.5 * (s1 - s0);
                let mid = 0.5 * (s0 + s1);
                let mut ints = [Complex64::new(0.0, 0.0); 3];
                let mut qmax = prev.q.norm().max(right.q.norm());
                for (x, w) in GL_X.iter().zip(GL_W) {
                    let (z, dz) = piece.at(mid + h * x);
                    let smp = acc.sample(z)?;
                    qmax = qmax.max(smp.q.norm());
                    let term = smp.q * dz * (h * w);
                    let d = z - acc.mc;
                    ints[0] += term;
                    ints[1] += term * d;
                    ints[2] += term * d * d;
                }
                let dq = ints[0].im;
                let local = qmax * len * (s1 - s0);
                if dph.abs() <= FRAC_PI_4 && local <= 0.5 && (dq - dph).abs() <= 0.05 {
                    phase += dph;
                    quad += dq;
                    for p in 0..3 {
                        moments[p] += ints[p];
                    }
                    prev = right;
                } else {
                    let m = acc.sample(piece.at(mid).0)?;
                    stack.push((mid, s1, right));
                    stack.push((s0, mid, m));
                }
            }
        }
    }
    if acc.guard_tripped(size) {
        return Err(acc.boundary_root());
    }
    let turns = phase / TAU;
    let count = turns.round();
    let raw = quad / TAU;
    let residual = (raw - count).abs();
    if residual >= 0.25 || (turns - count).abs() > 1e-6 {
        return Err(Error::NonConvergent(format!(
            "winding residual {residual:.3e} (phase turns {turns:.6})"
        )));
    }
    let scale = Complex64::new(0.0, TAU);
    Ok(Winding {
        count: count as i64,
        residual,
        moments: moments.map(|m| m / scale),
        samples: acc.samples,
        min_ln: acc.min_ln,
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
    fn moments_recover_roots() {
        let f = AnalyticFn::on_unit_disk(Expr::poly(vec![c(-0.06, 0.0), c(0.1, 0.0), c(1.0, 0.0)]));
        // roots 0.2 and -0.3
        let w = wind(&f, c(0.0, 0.0), &circle(c(0.0, 0.0), 0.9), 64, c(0.0, 0.0)).unwrap();
        assert_eq!(w.count, 2);
        assert!((w.moments[0] - c(2.0, 0.0)).norm() < 1e-10);
        assert!((w.moments[1] - c(-0.1, 0.0)).norm() < 1e-10);
        assert!((w.moments[2] - c(0.13, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn exact_boundary_root_is_rejected() {
        let f = AnalyticFn::on_unit_disk(Expr::poly(vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]));
        let r = wind(&f, c(0.0, 0.0), &circle(c(0.0, 0.0), 1.0), 64, c(0.0, 0.0));
        assert!(matches!(r, Err(Error::BoundaryRoot { .. })), "{r:?}");
    }

    #[test]
    fn segments_close_a_square() {
        let f = AnalyticFn::on_unit_disk(Expr::poly(vec![c(-0.1, -0.1), c(1.0, 0.0)]));
        let p = [c(0.0, 0.0), c(0.5, 0.0), c(0.5, 0.5), c(0.0, 0.5)];
        let sq: Vec<Piece> = (0..4).map(|i| Piece::Segment { a: p[i], b: p[(i + 1) % 4] }).collect();
        let w = wind(&f, c(0.0, 0.0), &sq, 32, c(0.0, 0.0)).unwrap();
        assert_eq!(w.count, 1);
        assert!((w.moments[1] - c(0.1, 0.1)).norm() < 1e-11, "{:?}", w.moments);
    }
}
