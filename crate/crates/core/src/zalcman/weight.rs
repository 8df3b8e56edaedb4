use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper end of the sampled admissibility range.
pub const ADMISSIBILITY_CAP: f64 = 1e12;

/// A weight `φ` for the rescaling procedure, defined on `[t0, ∞)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightFn {
    /// `φ(t) = (ln t)²`
    LogSquared { t0: f64 },
    /// `φ(t) = (ln t)^p`, `p > 1`
    PowerLog { exponent: f64, t0: f64 },
    /// Piecewise linear in `ln t` through `(t, φ)` points, then
    /// `φ_last·(ln t / ln t_last)^tail_exponent`.
    Table {
        points: Vec<(f64, f64)>,
        tail_exponent: f64,
    },
}

/// Sampled admissibility of a weight.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Admissibility {
    pub nondecreasing: bool,
    /// `φ(t)/t` decreases over the sampled decades.
    pub ratio_decreasing: bool,
    pub ratio_at_cap: f64,
    /// `∫_{t0}^{cap} dt/(tφ(t))`
    pub partial_integral: f64,
    /// Power-law estimate of the remaining tail.
    pub tail_estimate: f64,
    pub tail_exponent: f64,
    pub integral: f64,
    pub admissible: bool,
}

impl WeightFn {
    pub fn log_squared(t0: f64) -> WeightFn {
        WeightFn::LogSquared { t0 }
    }

    pub fn t0(&self) -> f64 {
        match self {
            WeightFn::LogSquared { t0 } | WeightFn::PowerLog { t0, .. } => *t0,
            WeightFn::Table { points, .. } => points.first().map_or(f64::NAN, |p| p.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.t0() > 1.0) {
            return bad(format!("weight threshold t0 = {} must exceed 1", self.t0()));
        }
        match self {
            WeightFn::LogSquared { .. } => Ok(()),
            WeightFn::PowerLog { exponent, .. } if *exponent > 1.0 => Ok(()),
            WeightFn::PowerLog { exponent, .. } => bad(format!("exponent {exponent} must exceed 1")),
            WeightFn::Table {
                points,
                tail_exponent,
            } => {
                if points.len() < 2 || !(*tail_exponent > 1.0) {
                    return bad("table needs two points and a tail exponent above 1".into());
                }
                let sorted = points.windows(2).all(|w| w[0].0 < w[1].0);
                let positive = points.iter().all(|p| p.1 > 0.0 && p.1.is_finite());
                if !sorted || !positive {
                    return bad("table points must have increasing t and positive values".into());
                }
                Ok(())
            }
        }
    }

    /// `φ(e^u)`, finite for every `u ≥ ln t0`.
    pub fn of_log(&self, u: f64) -> f64 {
        match self {
            WeightFn::LogSquared { .. } => u * u,
            WeightFn::PowerLog { exponent, .. } => u.powf(*exponent),
            WeightFn::Table {
                points,
                tail_exponent,
            } => {
                let last = points[points.len() - 1];
                let ul = last.0.ln();
                if u >= ul {
                    return last.1 * (u / ul).powf(*tail_exponent);
                }
                let i = points
                    .windows(2)
                    .position(|w| u < w[1].0.ln())
                    .unwrap_or(points.len() - 2);
                let (a, b) = (points[i], points[i + 1]);
                let (ua, ub) = (a.0.ln(), b.0.ln());
                let w = ((u - ua) / (ub - ua)).clamp(0.0, 1.0);
                a.1 + w * (b.1 - a.1)
            }
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.of_log(t.ln())
    }

    /// Short description for reports.
    pub fn describe(&self) -> String {
        match self {
            WeightFn::LogSquared { t0 } => format!("(ln t)^2, t0 = {t0}"),
            WeightFn::PowerLog { exponent, t0 } => format!("(ln t)^{exponent}, t0 = {t0}"),
            WeightFn::Table { points, .. } => format!("table with {} points", points.len()),
        }
    }

    pub fn admissibility(&self) -> Result<Admissibility> {
        self.validate()?;
        let u0 = self.t0().ln();
        let cap = ADMISSIBILITY_CAP.ln();
        let n = 400;
        let mut nondecreasing = true;
        let mut prev = self.of_log(u0);
        for j in 1..=n {
            let v = self.of_log(u0 + (cap - u0) * j as f64 / n as f64);
            if v < prev {
                nondecreasing = false;
            }
            prev = v;
        }
        // ln(φ(t)/t) over decades from 10^3 to the cap
        let mut ratio_decreasing = true;
        let mut prev = f64::INFINITY;
        let start = (u0 / std::f64::consts::LN_10).ceil().max(3.0) as i32;
        for d in start..=12 {
            let u = d as f64 * std::f64::consts::LN_10;
            let v = self.of_log(u).ln() - u;
            if v >= prev {
                ratio_decreasing = false;
            }
            prev = v;
        }
        let ratio_at_cap = (self.of_log(cap).ln() - cap).exp();
        let partial_integral = adaptive_simpson(&|u| 1.0 / self.of_log(u), u0, cap, 1e-13, 50);
        let h = 1e-4;
        let p = (self.of_log(cap * (1.0 + h)).ln() - self.of_log(cap * (1.0 - h)).ln())
            / ((1.0 + h).ln() - (1.0 - h).ln());
        let tail_estimate = if p > 1.0 {
            cap / (self.of_log(cap) * (p - 1.0))
        } else {
            f64::INFINITY
        };
        let integral = partial_integral + tail_estimate;
        Ok(Admissibility {
            nondecreasing,
            ratio_decreasing,
            ratio_at_cap,
            partial_integral,
            tail_estimate,
            tail_exponent: p,
            integral,
            admissible: nondecreasing && ratio_decreasing && ratio_at_cap < 1e-3 && integral.is_finite(),
        })
    }
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, depth)
}
