use num_complex::Complex64;
use std::fmt;

use super::wide::Wide;

/// Expression tree of a holomorphic function of `z`.
///
/// Trees are kept in a canonical shape by the smart constructors
/// ([`Expr::add`], [`Expr::mul`], ...): sums and products are flat, and all
/// polynomial pieces of a sum or product are merged into one trailing
/// `Poly` entry.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// Coefficients in increasing degree; no trailing zeros (the zero polynomial is empty).
    Poly(Vec<Complex64>),
    Exp(Box<Expr>),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    /// `z ↦ inner(scale·z + shift)`.
    Affine {
        scale: Complex64,
        shift: Complex64,
        inner: Box<Expr>,
    },
    /// `z ↦ inner(z)·conj(inner(conj z))`.
    Reflect(Box<Expr>),
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn is_zero(x: Complex64) -> bool {
    x.re == 0.0 && x.im == 0.0
}

fn trim(mut v: Vec<Complex64>) -> Vec<Complex64> {
    while v.last().is_some_and(|x| is_zero(*x)) {
        v.pop();
    }
    v
}

fn poly_add(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => *x,
            (None, Some(y)) => *y,
            (None, None) => unreachable!(),
        });
    }
    trim(out)
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![c(0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Value and first derivative at a point.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Jet {
    pub v: Wide,
    pub d: Wide,
}

impl Expr {
    pub fn poly(coeffs: Vec<Complex64>) -> Expr {
        Expr::Poly(trim(coeffs))
    }

    pub fn constant(v: Complex64) -> Expr {
        Expr::poly(vec![v])
    }

    /// The identity function `z`.
    pub fn z() -> Expr {
        Expr::Poly(vec![c(0.0), c(1.0)])
    }

    pub fn zero() -> Expr {
        Expr::Poly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Poly(p) if p.is_empty())
    }

    pub fn add(self, other: Expr) -> Expr {
        let mut terms = Vec::new();
        let mut poly: Vec<Complex64> = Vec::new();
        for e in [self, other] {
            match e {
                Expr::Sum(ts) => {
                    for t in ts {
                        match t {
                            Expr::Poly(p) => poly = poly_add(&poly, &p),
                            t => terms.push(t),
                        }
                    }
                }
                Expr::Poly(p) => poly = poly_add(&poly, &p),
                t => terms.push(t),
            }
        }
        if terms.is_empty() {
            return Expr::Poly(poly);
        }
        if !poly.is_empty() {
            terms.push(Expr::Poly(poly));
        }
        if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Sum(terms)
        }
    }

    pub fn mul(self, other: Expr) -> Expr {
        let mut factors = Vec::new();
        let mut poly: Vec<Complex64> = vec![c(1.0)];
        for e in [self, other] {
            match e {
                Expr::Product(fs) => {
                    for f in fs {
                        match f {
                            Expr::Poly(p) => poly = poly_mul(&poly, &p),
                            f => factors.push(f),
                        }
                    }
                }
                Expr::Poly(p) => poly = poly_mul(&poly, &p),
                f => factors.push(f),
            }
        }
        if poly.is_empty() {
            return Expr::zero();
        }
        if factors.is_empty() {
            return Expr::Poly(poly);
        }
        if poly != [c(1.0)] {
            factors.push(Expr::Poly(poly));
        }
        if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::Product(factors)
        }
    }

    pub fn neg(self) -> Expr {
        match self {
            Expr::Poly(p) => Expr::Poly(p.into_iter().map(|x| -x).collect()),
            e => e.mul(Expr::constant(c(-1.0))),
        }
    }

    pub fn sub(self, other: Expr) -> Expr {
        self.add(other.neg())
    }

    /// Integer power by repeated multiplication.
    pub fn pow(self, n: u32) -> Expr {
        if n == 0 {
            return Expr::constant(c(1.0));
        }
        if let Expr::Poly(p) = &self {
            // binary exponentiation keeps coefficient growth well-conditioned
            let mut result = vec![c(1.0)];
            let mut base = p.clone();
            let mut k = n;
            while k > 0 {
                if k & 1 == 1 {
                    result = poly_mul(&result, &base);
                }
                k >>= 1;
                if k > 0 {
                    base = poly_mul(&base, &base);
                }
            }
            return Expr::Poly(result);
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul(self.clone());
        }
        acc
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }

    pub fn reflect(self) -> Expr {
        Expr::Reflect(Box::new(self))
    }

    /// `z ↦ self(scale·z + shift)`; nested affine maps are composed.
    pub fn affine(self, scale: Complex64, shift: Complex64) -> Expr {
        if scale == c(1.0) && is_zero(shift) {
            return self;
        }
        match self {
            Expr::Affine {
                scale: s2,
                shift: b2,
                inner,
            } => (*inner).affine(s2 * scale, s2 * shift + b2),
            e => Expr::Affine {
                scale,
                shift,
                inner: Box::new(e),
            },
        }
    }

    /// The function `z ↦ conj(self(conj z))`.
    pub fn star(&self) -> Expr {
        match self {
            Expr::Poly(p) => Expr::Poly(p.iter().map(|x| x.conj()).collect()),
            Expr::Exp(u) => u.star().exp(),
            Expr::Sum(ts) => Expr::Sum(ts.iter().map(Expr::star).collect()),
            Expr::Product(fs) => Expr::Product(fs.iter().map(Expr::star).collect()),
            Expr::Affine {
                scale,
                shift,
                inner,
            } => Expr::Affine {
                scale: scale.conj(),
                shift: shift.conj(),
                inner: Box::new(inner.star()),
            },
            Expr::Reflect(u) => Expr::Reflect(u.clone()),
        }
    }

    /// Exact symbolic derivative.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Poly(p) => Expr::poly(
                p.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, x)| x * i as f64)
                    .collect(),
            ),
            Expr::Exp(u) => self.clone().mul(u.derivative()),
            Expr::Sum(ts) => ts
                .iter()
                .fold(Expr::zero(), |acc, t| acc.add(t.derivative())),
            Expr::Product(fs) => {
                let mut acc = Expr::zero();
                for i in 0..fs.len() {
                    let mut term = fs[i].derivative();
                    for (j, f) in fs.iter().enumerate() {
                        if j != i {
                            term = term.mul(f.clone());
                        }
                    }
                    acc = acc.add(term);
                }
                acc
            }
            Expr::Affine {
                scale,
                shift,
                inner,
            } => inner
                .derivative()
                .affine(*scale, *shift)
                .mul(Expr::constant(*scale)),
            Expr::Reflect(u) => {
                let du = u.derivative();
                let us = u.star();
                let dus = du.star();
                du.mul(us).add((**u).clone().mul(dus))
            }
        }
    }

    /// True when the tree can never vanish (exponentials and their products).
    pub fn is_structurally_zero_free(&self) -> bool {
        match self {
            Expr::Exp(_) => true,
            Expr::Poly(p) => p.len() == 1,
            Expr::Product(fs) => fs.iter().all(Expr::is_structurally_zero_free),
            Expr::Affine { scale, inner, .. } => {
                !is_zero(*scale) && inner.is_structurally_zero_free()
            }
            Expr::Reflect(u) => u.is_structurally_zero_free(),
            Expr::Sum(_) => false,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + match self {
            Expr::Poly(_) => 0,
            Expr::Exp(u) | Expr::Reflect(u) => u.size(),
            Expr::Affine { inner, .. } => inner.size(),
            Expr::Sum(ts) | Expr::Product(ts) => ts.iter().map(Expr::size).sum(),
        }
    }

    /// Value without derivative. `None` if an exponent argument is not finite.
    pub(crate) fn eval_wide(&self, z: Complex64) -> Option<Wide> {
        Some(match self {
            Expr::Poly(p) => horner(p, z).0,
            Expr::Exp(u) => {
                let a = u.eval_wide(z)?.to_complex()?;
                Wide::exp_of(a)
            }
            Expr::Sum(ts) => {
                let mut acc = Wide::ZERO;
                for t in ts {
                    acc = acc.add(t.eval_wide(z)?);
                }
                acc
            }
            Expr::Product(fs) => {
                let mut acc = Wide::new(c(1.0));
                for f in fs {
                    acc = acc.mul(f.eval_wide(z)?);
                }
                acc
            }
            Expr::Affine {
                scale,
                shift,
                inner,
            } => inner.eval_wide(scale * z + shift)?,
            Expr::Reflect(u) => u.eval_wide(z)?.mul(u.eval_wide(z.conj())?.conj()),
        })
    }

    /// Value and derivative in one forward pass.
    pub(crate) fn jet(&self, z: Complex64) -> Option<Jet> {
        Some(match self {
            Expr::Poly(p) => {
                let (v, d) = horner(p, z);
                Jet { v, d }
            }
            Expr::Exp(u) => {
                let j = u.jet(z)?;
                let v = Wide::exp_of(j.v.to_complex()?);
                Jet { v, d: v.mul(j.d) }
            }
            Expr::Sum(ts) => {
                let mut v = Wide::ZERO;
                let mut d = Wide::ZERO;
                for t in ts {
                    let j = t.jet(z)?;
                    v = v.add(j.v);
                    d = d.add(j.d);
                }
                Jet { v, d }
            }
            Expr::Product(fs) => {
                let mut v = Wide::new(c(1.0));
                let mut d = Wide::ZERO;
                for f in fs {
                    let j = f.jet(z)?;
                    d = d.mul(j.v).add(v.mul(j.d));
                    v = v.mul(j.v);
                }
                Jet { v, d }
            }
            Expr::Affine {
                scale,
                shift,
                inner,
            } => {
                let j = inner.jet(scale * z + shift)?;
                Jet {
                    v: j.v,
                    d: j.d.scale(*scale),
                }
            }
            Expr::Reflect(u) => {
                let p = u.jet(z)?;
                let q = u.jet(z.conj())?;
                Jet {
                    v: p.v.mul(q.v.conj()),
                    d: p.d.mul(q.v.conj()).add(p.v.mul(q.d.conj())),
                }
            }
        })
    }
}

fn horner(p: &[Complex64], z: Complex64) -> (Wide, Wide) {
    let mut v = c(0.0);
    let mut d = c(0.0);
    for x in p.iter().rev() {
        d = d * z + v;
        v = v * z + x;
    }
    (Wide::new(v), Wide::new(d))
}

fn fmt_real(x: f64) -> String {
    if x.is_sign_negative() {
        format!("(-{:?})", -x)
    } else {
        format!("{x:?}")
    }
}

fn fmt_coeff(x: Complex64) -> String {
    if x.im == 0.0 && !x.im.is_sign_negative() {
        fmt_real(x.re)
    } else {
        let im = if x.im.is_sign_negative() {
            format!("(-{:?}i)", -x.im)
        } else {
            format!("{:?}i", x.im)
        };
        format!("({} + {})", fmt_real(x.re), im)
    }
}

impl Expr {
    fn write_with_var(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        match self {
            Expr::Poly(p) => {
                if p.is_empty() {
                    return write!(f, "0.0");
                }
                write!(f, "(")?;
                for (i, x) in p.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    match i {
                        0 => write!(f, "{}", fmt_coeff(*x))?,
                        1 => write!(f, "{}*{var}", fmt_coeff(*x))?,
                        _ => write!(f, "{}*{var}^{i}", fmt_coeff(*x))?,
                    }
                }
                write!(f, ")")
            }
            Expr::Exp(u) => {
                write!(f, "exp(")?;
                u.write_with_var(f, var)?;
                write!(f, ")")
            }
            Expr::Reflect(u) => {
                if var != "z" {
                    // reflect only makes sense on the bare variable; expand it
                    let expanded = (**u).clone().mul(u.star());
                    return expanded.write_with_var(f, var);
                }
                write!(f, "reflect(")?;
                u.write_with_var(f, var)?;
                write!(f, ")")
            }
            Expr::Sum(ts) | Expr::Product(ts) => {
                let sep = if matches!(self, Expr::Sum(_)) { " + " } else { "*" };
                write!(f, "(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{sep}")?;
                    }
                    t.write_with_var(f, var)?;
                }
                write!(f, ")")
            }
            Expr::Affine {
                scale,
                shift,
                inner,
            } => {
                let v = format!("({}*{var} + {})", fmt_coeff(*scale), fmt_coeff(*shift));
                inner.write_with_var(f, &v)
            }
        }
    }
}

/// Prints DSL text that parses back to the same function.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with_var(f, "z")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(e: &Expr, z: Complex64) -> Complex64 {
        e.eval_wide(z).unwrap().to_complex().unwrap()
    }

    #[test]
    fn canonical_products_merge_polys() {
        let e = Expr::z().exp();
        let p = Expr::constant(c(2.0)).mul(e.clone()).mul(Expr::constant(c(3.0)));
        assert_eq!(p, Expr::Product(vec![e.clone(), Expr::constant(c(6.0))]));
        assert_eq!(e.clone().mul(Expr::zero()), Expr::zero());
        assert_eq!(e.clone().mul(Expr::constant(c(1.0))), e);
    }

    #[test]
    fn canonical_sums_put_poly_last() {
        let e = Expr::z().exp();
        let s = Expr::constant(c(1.0)).add(e.clone()).add(Expr::z());
        assert_eq!(s, Expr::Sum(vec![e, Expr::poly(vec![c(1.0), c(1.0)])]));
    }

    #[test]
    fn derivative_of_reflect_matches_expansion() {
        let u = Expr::poly(vec![Complex64::new(0.5, 0.2), Complex64::new(-10.0, 1.0)]);
        let r = u.clone().reflect();
        let expanded = u.clone().mul(u.star());
        let z = Complex64::new(0.13, -0.4);
        assert!((ev(&r.derivative(), z) - ev(&expanded.derivative(), z)).norm() < 1e-12);
        assert!((ev(&r, z) - ev(&expanded, z)).norm() < 1e-12);
    }

    #[test]
    fn affine_composes() {
        let e = Expr::z().exp().affine(c(2.0), c(1.0)).affine(c(3.0), c(0.5));
        match &e {
            Expr::Affine { scale, shift, .. } => {
                assert_eq!(*scale, c(6.0));
                assert_eq!(*shift, c(2.0));
            }
            _ => panic!("expected affine node"),
        }
    }

    #[test]
    fn jet_agrees_with_symbolic_derivative() {
        let e = Expr::z()
            .pow(3)
            .mul(Expr::poly(vec![c(0.0), Complex64::new(0.0, 2.0)]).exp())
            .add(Expr::z().reflect())
            .affine(Complex64::new(0.5, 0.1), c(0.2));
        let z = Complex64::new(0.3, 0.7);
        let j = e.jet(z).unwrap();
        assert!((j.d.to_complex().unwrap() - ev(&e.derivative(), z)).norm() < 1e-12);
        assert!((j.v.to_complex().unwrap() - ev(&e, z)).norm() < 1e-12);
    }

    #[test]
    fn zero_free_detection() {
        assert!(Expr::z().exp().is_structurally_zero_free());
        assert!(!Expr::z().is_structurally_zero_free());
        assert!(!Expr::z().exp().add(Expr::z()).is_structurally_zero_free());
    }
}
