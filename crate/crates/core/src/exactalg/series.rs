use std::ops::{Add, Mul, Neg, Sub};

use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Truncated Laurent series `Σ_{k=start}^{trunc} c_k y^k`.
///
/// Coefficients above `trunc` are unknown; reading them is an error, never a zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<S> {
    start: i64,
    coeffs: Vec<S>,
    trunc: i64,
}

impl<S: Scalar> Series<S> {
    /// Series with the given leading order; known through the last supplied coefficient.
    pub fn new(start: i64, coeffs: Vec<S>) -> Self {
        let trunc = start + coeffs.len() as i64 - 1;
        Series { start, coeffs, trunc }
    }

    /// Series known through `trunc`, coefficients padded or cut to fit.
    pub fn with_trunc(start: i64, mut coeffs: Vec<S>, trunc: i64) -> Self {
        let len = (trunc - start + 1).max(0) as usize;
        coeffs.resize(len, S::zero());
        Series { start, coeffs, trunc }
    }

    pub fn zero(trunc: i64) -> Self {
        Series { start: trunc + 1, coeffs: Vec::new(), trunc }
    }

    pub fn constant(c: S, trunc: i64) -> Self {
        Self::with_trunc(0, vec![c], trunc)
    }

    /// `c y^k`, known through `trunc`.
    pub fn monomial(c: S, k: i64, trunc: i64) -> Self {
        if k > trunc {
            return Self::zero(trunc);
        }
        Self::with_trunc(k, vec![c], trunc)
    }

    pub fn from_poly(p: &Poly<S>, trunc: i64) -> Self {
        Self::with_trunc(0, p.coeffs().to_vec(), trunc)
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// Coefficient of `y^k`.
    pub fn coeff(&self, k: i64) -> Result<S> {
        if k > self.trunc {
            return Err(Error::Truncation { needed: k, available: self.trunc });
        }
        if k < self.start {
            return Ok(S::zero());
        }
        Ok(self.coeffs[(k - self.start) as usize].clone())
    }

    fn get(&self, k: i64) -> S {
        if k < self.start || k > self.trunc {
            S::zero()
        } else {
            self.coeffs[(k - self.start) as usize].clone()
        }
    }

    /// Coefficient of `y^{-1}`.
    pub fn residue(&self) -> Result<S> {
        self.coeff(-1)
    }

    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> Series<T> {
        Series { start: self.start, coeffs: self.coeffs.iter().map(f).collect(), trunc: self.trunc }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    /// Drops leading zero coefficients.
    pub fn normalized(&self) -> Self {
        let skip = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        Series { start: self.start + skip as i64, coeffs: self.coeffs[skip..].to_vec(), trunc: self.trunc }
    }

    /// Lowers the truncation order.
    pub fn truncated(&self, trunc: i64) -> Self {
        let t = trunc.min(self.trunc);
        let coeffs = if t < self.start {
            Vec::new()
        } else {
            self.coeffs[..(t - self.start + 1) as usize].to_vec()
        };
        Series { start: if t < self.start { t + 1 } else { self.start }, coeffs, trunc: t }
    }

    /// Multiplication by `y^m`.
    pub fn shifted(&self, m: i64) -> Self {
        Series { start: self.start + m, coeffs: self.coeffs.clone(), trunc: self.trunc + m }
    }

    pub fn derivative(&self) -> Self {
        let start = self.start - 1;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale_int(self.start + i as i64))
            .collect();
        Series { start, coeffs, trunc: self.trunc - 1 }.normalized_start()
    }

    fn normalized_start(self) -> Self {
        if self.coeffs.is_empty() {
            Series { start: self.trunc + 1, ..self }
        } else {
            self
        }
    }

    /// Multiplicative inverse; the leading nonzero coefficient must be invertible.
    pub fn inv(&self) -> Result<Self> {
        let a = self.normalized();
        if a.coeffs.is_empty() {
            return Err(Error::DivisionByZero("series with no known nonzero coefficient".into()));
        }
        let lead_inv = a.coeffs[0]
            .inv()
            .ok_or_else(|| Error::DivisionByZero(format!("leading coefficient {:?}", a.coeffs[0])))?;
        let rel = a.trunc - a.start;
        let mut b: Vec<S> = Vec::with_capacity(rel as usize + 1);
        for k in 0..=rel as usize {
            let mut acc = if k == 0 { S::one() } else { S::zero() };
            for i in 1..=k {
                acc = acc - a.coeffs[i].clone() * b[k - i].clone();
            }
            b.push(acc * lead_inv.clone());
        }
        Ok(Series { start: -a.start, coeffs: b, trunc: -a.start + rel })
    }

    /// Substitutes `y = ζ²`.
    pub fn substitute_square(&self) -> Self {
        let mut coeffs = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                coeffs.push(S::zero());
            }
            coeffs.push(c.clone());
        }
        let start = 2 * self.start;
        let trunc = 2 * self.trunc + 1;
        Self::with_trunc(start, coeffs, trunc)
    }

    /// `(1 + u y)^{-m}` for `m ≥ 0`, known through `trunc`.
    pub fn binomial_inverse_power(u: &S, m: u32, trunc: i64) -> Self {
        if trunc < 0 {
            return Self::zero(trunc);
        }
        // coefficient k: C(-m, k) u^k = (-1)^k C(m+k-1, k) u^k
        let mut coeffs = Vec::with_capacity(trunc as usize + 1);
        let mut binom = S::one();
        let mut upow = S::one();
        for k in 0..=trunc {
            let sign = if k % 2 == 0 { S::one() } else { -S::one() };
            coeffs.push(sign * binom.clone() * upow.clone());
            // C(m+k, k+1) = C(m+k-1, k) * (m+k)/(k+1)
            let num = S::from_int(m as i64 + k);
            let den = S::from_int(k + 1).inv().expect("positive integer");
            binom = binom * num * den;
            upow = upow * u.clone();
        }
        Series { start: 0, coeffs, trunc }
    }
}

impl<'a, S: Scalar> Add<&'a Series<S>> for &'a Series<S> {
    type Output = Series<S>;
    fn add(self, o: &Series<S>) -> Series<S> {
        let trunc = self.trunc.min(o.trunc);
        let start = self.start.min(o.start);
        let coeffs = (start..=trunc).map(|k| self.get(k) + o.get(k)).collect();
        Series { start, coeffs, trunc }.normalized_start()
    }
}

impl<'a, S: Scalar> Sub<&'a Series<S>> for &'a Series<S> {
    type Output = Series<S>;
    fn sub(self, o: &Series<S>) -> Series<S> {
        let trunc = self.trunc.min(o.trunc);
        let start = self.start.min(o.start);
        let coeffs = (start..=trunc).map(|k| self.get(k) - o.get(k)).collect();
        Series { start, coeffs, trunc }.normalized_start()
    }
}

impl<'a, S: Scalar> Mul<&'a Series<S>> for &'a Series<S> {
    type Output = Series<S>;
    fn mul(self, o: &Series<S>) -> Series<S> {
        let trunc = (self.start + o.trunc).min(o.start + self.trunc);
        let start = self.start + o.start;
        let mut coeffs = Vec::new();
        for k in start..=trunc {
            let mut acc = S::zero();
            for i in self.start..=self.trunc {
                let j = k - i;
                if j < o.start {
                    break;
                }
                if j > o.trunc {
                    continue;
                }
                let a = &self.coeffs[(i - self.start) as usize];
                if a.is_zero() {
                    continue;
                }
                acc = acc + a.clone() * o.coeffs[(j - o.start) as usize].clone();
            }
            coeffs.push(acc);
        }
        Series { start, coeffs, trunc }.normalized_start()
    }
}

impl<'a, S: Scalar> Neg for &'a Series<S> {
    type Output = Series<S>;
    fn neg(self) -> Series<S> {
        self.map(|c| -c.clone())
    }
}

/// 2×2 matrix over a scalar ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<S> {
    pub m: [[S; 2]; 2],
}

impl<S: Scalar> Mat2<S> {
    pub fn new(a: S, b: S, c: S, d: S) -> Self {
        Mat2 { m: [[a, b], [c, d]] }
    }
    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero(), S::zero(), S::zero())
    }
    pub fn identity() -> Self {
        Self::new(S::one(), S::zero(), S::zero(), S::one())
    }
    pub fn diag(a: S, d: S) -> Self {
        Self::new(a, S::zero(), S::zero(), d)
    }
    pub fn get(&self, i: usize, j: usize) -> S {
        self.m[i][j].clone()
    }
    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> Mat2<T> {
        Mat2::new(f(&self.m[0][0]), f(&self.m[0][1]), f(&self.m[1][0]), f(&self.m[1][1]))
    }
    pub fn scale(&self, c: &S) -> Self {
        self.map(|a| a.clone() * c.clone())
    }
    pub fn det(&self) -> S {
        self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0)
    }
    pub fn trace(&self) -> S {
        self.get(0, 0) + self.get(1, 1)
    }
    pub fn inv(&self) -> Result<Self> {
        let di = self
            .det()
            .inv()
            .ok_or_else(|| Error::DivisionByZero("singular 2x2 matrix".into()))?;
        Ok(Mat2::new(self.get(1, 1), -self.get(0, 1), -self.get(1, 0), self.get(0, 0)).scale(&di))
    }
    pub fn is_zero(&self) -> bool {
        self.m.iter().flatten().all(|c| c.is_zero())
    }
    pub fn commutator(&self, o: &Self) -> Self {
        &(self * o) - &(o * self)
    }
}

impl<'a, S: Scalar> Add<&'a Mat2<S>> for &'a Mat2<S> {
    type Output = Mat2<S>;
    fn add(self, o: &Mat2<S>) -> Mat2<S> {
        Mat2::new(
            self.get(0, 0) + o.get(0, 0),
            self.get(0, 1) + o.get(0, 1),
            self.get(1, 0) + o.get(1, 0),
            self.get(1, 1) + o.get(1, 1),
        )
    }
}

impl<'a, S: Scalar> Sub<&'a Mat2<S>> for &'a Mat2<S> {
    type Output = Mat2<S>;
    fn sub(self, o: &Mat2<S>) -> Mat2<S> {
        Mat2::new(
            self.get(0, 0) - o.get(0, 0),
            self.get(0, 1) - o.get(0, 1),
            self.get(1, 0) - o.get(1, 0),
            self.get(1, 1) - o.get(1, 1),
        )
    }
}

impl<'a, S: Scalar> Mul<&'a Mat2<S>> for &'a Mat2<S> {
    type Output = Mat2<S>;
    fn mul(self, o: &Mat2<S>) -> Mat2<S> {
        let e = |i: usize, j: usize| self.get(i, 0) * o.get(0, j) + self.get(i, 1) * o.get(1, j);
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

/// Local chart a matrix series lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chart {
    /// `y = x - t` at a finite point (label is the formatted position).
    Finite(String),
    /// `w = 1/x`.
    Infinity,
    /// `ζ` with `ζ² = y` at the labelled point.
    Zeta(String),
    Free,
}

/// Truncated Laurent series with 2×2 matrix coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct MatSeries<S> {
    pub chart: Chart,
    start: i64,
    coeffs: Vec<Mat2<S>>,
    trunc: i64,
}

impl<S: Scalar> MatSeries<S> {
    pub fn with_trunc(start: i64, mut coeffs: Vec<Mat2<S>>, trunc: i64) -> Self {
        let len = (trunc - start + 1).max(0) as usize;
        coeffs.resize(len, Mat2::zero());
        MatSeries { chart: Chart::Free, start, coeffs, trunc }
    }

    pub fn in_chart(mut self, chart: Chart) -> Self {
        self.chart = chart;
        self
    }

    pub fn zero(trunc: i64) -> Self {
        MatSeries { chart: Chart::Free, start: trunc + 1, coeffs: Vec::new(), trunc }
    }

    pub fn identity(trunc: i64) -> Self {
        Self::constant(Mat2::identity(), trunc)
    }

    pub fn constant(m: Mat2<S>, trunc: i64) -> Self {
        Self::with_trunc(0, vec![m], trunc)
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn coeff(&self, k: i64) -> Result<Mat2<S>> {
        if k > self.trunc {
            return Err(Error::Truncation { needed: k, available: self.trunc });
        }
        Ok(self.get(k))
    }

    fn get(&self, k: i64) -> Mat2<S> {
        if k < self.start || k > self.trunc {
            Mat2::zero()
        } else {
            self.coeffs[(k - self.start) as usize].clone()
        }
    }

    /// Matrix coefficient of `y^{-1}`.
    pub fn residue(&self) -> Result<Mat2<S>> {
        self.coeff(-1)
    }

    pub fn from_entries(e: [[Series<S>; 2]; 2]) -> Self {
        let start = e.iter().flatten().map(|s| s.start()).min().unwrap_or(0);
        let trunc = e.iter().flatten().map(|s| s.trunc()).min().unwrap_or(0);
        let coeffs = (start..=trunc)
            .map(|k| {
                Mat2::new(e[0][0].get(k), e[0][1].get(k), e[1][0].get(k), e[1][1].get(k))
            })
            .collect();
        MatSeries { chart: Chart::Free, start, coeffs, trunc }.normalized_start()
    }

    pub fn diag(a: &Series<S>, d: &Series<S>) -> Self {
        let t = a.trunc().min(d.trunc());
        Self::from_entries([[a.clone(), Series::zero(t)], [Series::zero(t), d.clone()]])
    }

    pub fn entry(&self, i: usize, j: usize) -> Series<S> {
        Series::with_trunc(self.start, self.coeffs.iter().map(|m| m.get(i, j)).collect(), self.trunc)
    }

    pub fn trace(&self) -> Series<S> {
        Series::with_trunc(self.start, self.coeffs.iter().map(|m| m.trace()).collect(), self.trunc)
    }

    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> MatSeries<T> {
        MatSeries {
            chart: self.chart.clone(),
            start: self.start,
            coeffs: self.coeffs.iter().map(|m| m.map(&f)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    pub fn scale_series(&self, s: &Series<S>) -> Self {
        let e = |i, j| s * &self.entry(i, j);
        Self::from_entries([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]).in_chart(self.chart.clone())
    }

    pub fn truncated(&self, trunc: i64) -> Self {
        let t = trunc.min(self.trunc);
        let coeffs = (self.start..=t).map(|k| self.get(k)).collect();
        MatSeries { chart: self.chart.clone(), start: self.start.min(t + 1), coeffs, trunc: t }
            .normalized_start()
    }

    pub fn shifted(&self, m: i64) -> Self {
        MatSeries { chart: self.chart.clone(), start: self.start + m, coeffs: self.coeffs.clone(), trunc: self.trunc + m }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&S::from_int(self.start + i as i64)))
            .collect();
        MatSeries { chart: self.chart.clone(), start: self.start - 1, coeffs, trunc: self.trunc - 1 }
            .normalized_start()
    }

    fn normalized_start(self) -> Self {
        if self.coeffs.is_empty() {
            MatSeries { start: self.trunc + 1, ..self }
        } else {
            self
        }
    }

    /// Drops leading zero matrices.
    pub fn normalized(&self) -> Self {
        let skip = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        MatSeries {
            chart: self.chart.clone(),
            start: self.start + skip as i64,
            coeffs: self.coeffs[skip..].to_vec(),
            trunc: self.trunc,
        }
    }

    /// Inverse of a series whose leading matrix is invertible.
    pub fn inv(&self) -> Result<Self> {
        let a = self.normalized();
        if a.coeffs.is_empty() {
            return Err(Error::DivisionByZero("zero matrix series".into()));
        }
        let l = a.coeffs[0].inv()?;
        let rel = a.trunc - a.start;
        let mut b: Vec<Mat2<S>> = Vec::with_capacity(rel as usize + 1);
        for k in 0..=rel as usize {
            let mut acc = if k == 0 { Mat2::identity() } else { Mat2::zero() };
            for i in 1..=k {
                acc = &acc - &(&b[k - i] * &a.coeffs[i]);
            }
            b.push(&acc * &l);
        }
        Ok(MatSeries { chart: self.chart.clone(), start: -a.start, coeffs: b, trunc: -a.start + rel })
    }

    /// Substitutes `y = ζ²`.
    pub fn substitute_square(&self, chart: Chart) -> Self {
        let mut coeffs = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                coeffs.push(Mat2::zero());
            }
            coeffs.push(c.clone());
        }
        Self::with_trunc(2 * self.start, coeffs, 2 * self.trunc + 1).in_chart(chart)
    }

    /// Returns `T⁻¹ S T` for a series `T` with known inverse.
    pub fn conjugate(&self, t: &Self, t_inv: &Self) -> Self {
        &(t_inv * self) * t
    }
}

impl<'a, S: Scalar> Add<&'a MatSeries<S>> for &'a MatSeries<S> {
    type Output = MatSeries<S>;
    fn add(self, o: &MatSeries<S>) -> MatSeries<S> {
        let trunc = self.trunc.min(o.trunc);
        let start = self.start.min(o.start);
        let coeffs = (start..=trunc).map(|k| &self.get(k) + &o.get(k)).collect();
        MatSeries { chart: self.chart.clone(), start, coeffs, trunc }.normalized_start()
    }
}

impl<'a, S: Scalar> Sub<&'a MatSeries<S>> for &'a MatSeries<S> {
    type Output = MatSeries<S>;
    fn sub(self, o: &MatSeries<S>) -> MatSeries<S> {
        let trunc = self.trunc.min(o.trunc);
        let start = self.start.min(o.start);
        let coeffs = (start..=trunc).map(|k| &self.get(k) - &o.get(k)).collect();
        MatSeries { chart: self.chart.clone(), start, coeffs, trunc }.normalized_start()
    }
}

impl<'a, S: Scalar> Mul<&'a MatSeries<S>> for &'a MatSeries<S> {
    type Output = MatSeries<S>;
    fn mul(self, o: &MatSeries<S>) -> MatSeries<S> {
        let trunc = (self.start + o.trunc).min(o.start + self.trunc);
        let start = self.start + o.start;
        let mut coeffs = Vec::new();
        for k in start..=trunc {
            let mut acc = Mat2::zero();
            for i in self.start..=self.trunc {
                let j = k - i;
                if j < o.start {
                    break;
                }
                if j > o.trunc {
                    continue;
                }
                let a = &self.coeffs[(i - self.start) as usize];
                if a.is_zero() {
                    continue;
                }
                acc = &acc + &(a * &o.coeffs[(j - o.start) as usize]);
            }
            coeffs.push(acc);
        }
        MatSeries { chart: self.chart.clone(), start, coeffs, trunc }.normalized_start()
    }
}

impl<'a, S: Scalar> Neg for &'a MatSeries<S> {
    type Output = MatSeries<S>;
    fn neg(self) -> MatSeries<S> {
        self.map(|c| -c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::{rat, Rational};

    #[test]
    fn geometric_series() {
        // 1/(x-1) at 0 is -(1 + x + x^2 + ...)
        let s: Series<Rational> = Series::new(0, vec![rat(-1, 1), rat(1, 1)]).with_known(5);
        let inv = s.inv().unwrap();
        for k in 0..=2 {
            assert_eq!(inv.coeff(k).unwrap(), rat(-1, 1));
        }
    }

    #[test]
    fn reading_past_truncation_fails() {
        let s: Series<Rational> = Series::new(-1, vec![rat(1, 1)]);
        assert!(s.coeff(0).is_err());
        assert_eq!(s.residue().unwrap(), rat(1, 1));
    }

    #[test]
    fn binomial_matches_inverse() {
        let u = rat(3, 2);
        let b: Series<Rational> = Series::binomial_inverse_power(&u, 3, 6);
        let base: Series<Rational> = Series::with_trunc(0, vec![rat(1, 1), u], 6);
        let cube = &(&base * &base) * &base;
        let prod = &b * &cube;
        assert_eq!(prod.coeff(0).unwrap(), rat(1, 1));
        for k in 1..=6 {
            assert_eq!(prod.coeff(k).unwrap(), rat(0, 1));
        }
    }

    #[test]
    fn matrix_series_inverse() {
        let a = MatSeries::with_trunc(
            0,
            vec![
                Mat2::new(rat(1, 1), rat(2, 1), rat(0, 1), rat(1, 1)),
                Mat2::new(rat(0, 1), rat(1, 1), rat(3, 1), rat(0, 1)),
            ],
            4,
        );
        let prod = &a * &a.inv().unwrap();
        assert_eq!(prod, MatSeries::identity(4));
    }
}

impl<S: Scalar> Series<S> {
    /// Same coefficients, known (exactly) through `trunc`: missing ones are zero.
    ///
    /// Only valid for series that are genuinely finite, such as polynomials.
    pub fn with_known(self, trunc: i64) -> Self {
        Self::with_trunc(self.start, self.coeffs, trunc)
    }
}
