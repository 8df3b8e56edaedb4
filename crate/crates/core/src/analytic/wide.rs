//! Complex numbers with an extended exponent, `m * exp(e)`.

use num_complex::Complex64;

const HI: f64 = 1e150;
const LO: f64 = 1e-150;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Wide {
    m: Complex64,
    e: f64,
}

impl Wide {
    pub const ZERO: Wide = Wide {
        m: Complex64 { re: 0.0, im: 0.0 },
        e: 0.0,
    };

    pub fn new(c: Complex64) -> Wide {
        Wide { m: c, e: 0.0 }.renorm()
    }

    fn renorm(self) -> Wide {
        let a = self.m.norm();
        if a == 0.0 {
            return Wide::ZERO;
        }
        if !(LO..=HI).contains(&a) {
            Wide {
                m: self.m / a,
                e: self.e + a.ln(),
            }
        } else {
            self
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.re == 0.0 && self.m.im == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.m.re.is_finite() && self.m.im.is_finite() && self.e.is_finite()
    }

    /// ln |self|; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.m.norm().ln() + self.e
        }
    }

    /// Argument of the value.
    pub fn arg(&self) -> f64 {
        self.m.arg()
    }

    pub fn abs(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.ln_abs().exp()
        }
    }

    /// Plain complex value; `None` if it does not fit in a double.
    pub fn to_complex(self) -> Option<Complex64> {
        if self.is_zero() {
            return Some(Complex64::new(0.0, 0.0));
        }
        let v = if self.e == 0.0 {
            self.m
        } else if self.e > 0.0 {
            // split so that neither factor overflows early
            let h = (self.e / 2.0).exp();
            self.m * h * h
        } else {
            let h = (self.e / 2.0).exp();
            self.m * h * h
        };
        if v.re.is_finite() && v.im.is_finite() {
            Some(v)
        } else {
            None
        }
    }

    pub fn exp_of(arg: Complex64) -> Wide {
        if arg.re.abs() <= 700.0 {
            Wide {
                m: arg.exp(),
                e: 0.0,
            }
            .renorm()
        } else {
            Wide {
                m: Complex64::from_polar(1.0, arg.im),
                e: arg.re,
            }
        }
    }

    pub fn add(self, o: Wide) -> Wide {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let e = self.e.max(o.e);
        let m = self.m * (self.e - e).exp() + o.m * (o.e - e).exp();
        Wide { m, e }.renorm()
    }

    pub fn neg(self) -> Wide {
        Wide {
            m: -self.m,
            e: self.e,
        }
    }

    pub fn sub(self, o: Wide) -> Wide {
        self.add(o.neg())
    }

    pub fn mul(self, o: Wide) -> Wide {
        if self.is_zero() || o.is_zero() {
            return Wide::ZERO;
        }
        Wide {
            m: self.m * o.m,
            e: self.e + o.e,
        }
        .renorm()
    }

    pub fn scale(self, c: Complex64) -> Wide {
        self.mul(Wide::new(c))
    }

    /// Division; caller guarantees `o` is nonzero.
    pub fn div(self, o: Wide) -> Wide {
        if self.is_zero() {
            return Wide::ZERO;
        }
        Wide {
            m: self.m / o.m,
            e: self.e - o.e,
        }
        .renorm()
    }

    pub fn conj(self) -> Wide {
        Wide {
            m: self.m.conj(),
            e: self.e,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn survives_large_exponents() {
        let a = Wide::exp_of(Complex64::new(900.0, 1.0));
        let b = Wide::exp_of(Complex64::new(-900.0, -1.0));
        let p = a.mul(b).to_complex().unwrap();
        assert!((p - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(a.to_complex().is_none());
        assert!((a.ln_abs() - 900.0).abs() < 1e-12);
    }

    #[test]
    fn addition_aligns_scales() {
        let big = Wide::exp_of(Complex64::new(800.0, 0.0));
        let s = big.add(big.neg()).add(Wide::new(Complex64::new(2.0, 0.0)));
        assert_eq!(s.to_complex().unwrap(), Complex64::new(2.0, 0.0));
        let small = Wide::new(Complex64::new(1e-200, 0.0));
        assert!((small.mul(small).ln_abs() + 400.0 * 10f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn division_by_moderately_small_exponentials() {
        let v = Wide::exp_of(Complex64::new(-380.0, 0.5));
        let d = v.scale(Complex64::new(3.0, 4.0));
        let q = d.div(v).to_complex().unwrap();
        assert!((q - Complex64::new(3.0, 4.0)).norm() < 1e-12);
    }
}
