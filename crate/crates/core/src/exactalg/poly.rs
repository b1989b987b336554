use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::{Rational, Scalar};
use crate::error::{Error, Result};

/// Univariate polynomial, coefficients in ascending degree, trailing zeros stripped.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![S::zero(), S::one()])
    }

    /// `x - a`.
    pub fn linear(a: &S) -> Self {
        Self::new(vec![-a.clone(), S::one()])
    }

    pub fn monomial(c: S, k: usize) -> Self {
        let mut v = vec![S::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn from_rationals(r: &[Rational]) -> Self {
        Self::new(r.iter().map(S::from_rational).collect())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn leading(&self) -> S {
        self.coeffs.last().cloned().unwrap_or_else(S::zero)
    }

    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale_int(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `p(y + a)` as a polynomial in `y` (Taylor shift).
    pub fn shift(&self, a: &S) -> Self {
        let mut acc = Self::zero();
        let lin = Self::new(vec![a.clone(), S::one()]);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        acc
    }

    /// Remainder modulo `y^k`.
    pub fn truncate(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().take(k).cloned().collect())
    }

    /// Coefficients reversed against the bound `d`: `y^d p(1/y)`.
    pub fn reverse(&self, d: usize) -> Result<Self> {
        if self.degree() > d as i64 {
            return Err(Error::InternalInconsistency(format!(
                "reverse: degree {} exceeds bound {d}",
                self.degree()
            )));
        }
        let mut v = vec![S::zero(); d + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[d - k] = c.clone();
        }
        Ok(Self::new(v))
    }

    /// Euclidean division; the divisor's leading coefficient must be invertible.
    pub fn divrem(&self, b: &Self) -> Result<(Self, Self)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero("zero polynomial".into()));
        }
        let lc_inv = b
            .leading()
            .inv()
            .ok_or_else(|| Error::DivisionByZero("leading coefficient".into()))?;
        let db = b.degree() as usize;
        let mut r = self.coeffs.clone();
        if r.len() < b.coeffs.len() {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![S::zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let c = r[k + db].clone() * lc_inv.clone();
            if !c.is_zero() {
                for (i, bc) in b.coeffs.iter().enumerate() {
                    r[k + i] = r[k + i].clone() - c.clone() * bc.clone();
                }
            }
            q[k] = c;
        }
        r.truncate(db);
        Ok((Self::new(q), Self::new(r)))
    }

    /// Exact quotient; errors if the remainder is nonzero.
    pub fn div_exact(&self, b: &Self) -> Result<Self> {
        let (q, r) = self.divrem(b)?;
        if !r.is_zero() {
            return Err(Error::InternalInconsistency(format!(
                "nonzero remainder of degree {}",
                r.degree()
            )));
        }
        Ok(q)
    }

    /// `∏ (x - r)`.
    pub fn from_roots(roots: &[S]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| &acc * &Self::linear(r))
    }

    /// The unique polynomial of degree `< xs.len()` with `p(xs[k]) = ys[k]`.
    ///
    /// Barycentric weights `w_k = 1/∏_{m≠k}(x_k - x_m)`, expanded exactly.
    pub fn interpolate(xs: &[S], ys: &[S]) -> Result<Self> {
        let n = xs.len();
        if n != ys.len() {
            return Err(Error::InternalInconsistency("interpolate: length mismatch".into()));
        }
        if n == 0 {
            return Ok(Self::zero());
        }
        let full = Self::from_roots(xs);
        let mut acc = Self::zero();
        for k in 0..n {
            let mut denom = S::one();
            for m in 0..n {
                if m != k {
                    denom = denom * (xs[k].clone() - xs[m].clone());
                }
            }
            let w = denom
                .inv()
                .ok_or_else(|| Error::DegenerateConfiguration(k))?;
            let basis = full.div_exact(&Self::linear(&xs[k]))?;
            acc = &acc + &basis.scale(&(w * ys[k].clone()));
        }
        Ok(acc)
    }

    /// `(p - p(a)) / (x - a)`, always a polynomial.
    pub fn difference_quotient(&self, a: &S) -> Self {
        let pa = self.eval(a);
        let shifted = self - &Self::constant(pa);
        shifted
            .divrem(&Self::linear(a))
            .map(|(q, _)| q)
            .unwrap_or_else(|_| Self::zero())
    }
}

impl Poly<Rational> {
    /// Monic gcd over the rationals.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lc = a.leading().inv().expect("nonzero leading");
        a.scale(&lc)
    }
}

impl<'a, S: Scalar> Add<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn add(self, o: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<'a, S: Scalar> Sub<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn sub(self, o: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<'a, S: Scalar> Mul<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn mul(self, o: &Poly<S>) -> Poly<S> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![S::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(v)
    }
}

impl<'a, S: Scalar> Neg for &'a Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        self.map(|c| -c.clone())
    }
}

impl<S: Scalar> Add for Poly<S> {
    type Output = Poly<S>;
    fn add(self, o: Self) -> Self {
        &self + &o
    }
}

impl<S: Scalar> Sub for Poly<S> {
    type Output = Poly<S>;
    fn sub(self, o: Self) -> Self {
        &self - &o
    }
}

impl<S: Scalar> Mul for Poly<S> {
    type Output = Poly<S>;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::rat;

    type P = Poly<Rational>;

    fn p(c: &[i64]) -> P {
        Poly::new(c.iter().map(|&k| rat(k, 1)).collect())
    }

    #[test]
    fn trailing_zeros_stripped() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), 1);
        assert!(p(&[0, 0]).is_zero());
    }

    #[test]
    fn division_roundtrip() {
        let a = p(&[3, -1, 4, 1, 5]);
        let b = p(&[2, 0, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn shift_is_taylor() {
        let a = p(&[1, 2, 3]);
        let s = a.shift(&rat(2, 1));
        for k in -3..4 {
            let y = rat(k, 1);
            assert_eq!(s.eval(&y), a.eval(&(y.clone() + rat(2, 1))));
        }
    }

    #[test]
    fn interpolation_hits_nodes() {
        let xs = vec![rat(1, 2), rat(-3, 1), rat(5, 7)];
        let ys = vec![rat(2, 1), rat(0, 1), rat(-1, 3)];
        let q = Poly::interpolate(&xs, &ys).unwrap();
        assert!(q.degree() <= 2);
        for (x, y) in xs.iter().zip(&ys) {
            assert_eq!(&q.eval(x), y);
        }
    }

    #[test]
    fn gcd_detects_double_root() {
        let a = Poly::from_roots(&[rat(1, 1), rat(1, 1), rat(2, 1)]);
        let g = a.gcd(&a.derivative());
        assert_eq!(g, p(&[-1, 1]));
    }
}
