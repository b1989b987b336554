use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::{Rational, Scalar};
use crate::error::{Error, Result};

/// First-order dual number `v + ε d` with `ε² = 0`.
///
/// Running a construction over `Jet<T>` carries the exact directional
/// derivative of every coefficient in the `d` slot.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<T> {
    pub v: T,
    pub d: T,
}

impl<T: Scalar> Jet<T> {
    pub fn new(v: T, d: T) -> Self {
        Jet { v, d }
    }

    pub fn constant(v: T) -> Self {
        Jet { v, d: T::zero() }
    }

    /// The coordinate function itself: derivative one.
    pub fn variable(v: T) -> Self {
        Jet { v, d: T::one() }
    }
}

impl<T: Scalar> Add for Jet<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Jet { v: self.v + o.v, d: self.d + o.d }
    }
}

impl<T: Scalar> Sub for Jet<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Jet { v: self.v - o.v, d: self.d - o.d }
    }
}

impl<T: Scalar> Mul for Jet<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let d = self.v.clone() * o.d + self.d * o.v.clone();
        Jet { v: self.v * o.v, d }
    }
}

impl<T: Scalar> Neg for Jet<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet { v: -self.v, d: -self.d }
    }
}

impl<T: Scalar> Scalar for Jet<T> {
    const EXACT: bool = T::EXACT;

    fn zero() -> Self {
        Jet::constant(T::zero())
    }
    fn one() -> Self {
        Jet::constant(T::one())
    }
    fn from_int(n: i64) -> Self {
        Jet::constant(T::from_int(n))
    }
    fn from_rational(r: &Rational) -> Self {
        Jet::constant(T::from_rational(r))
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero() && self.d.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        let iv = self.v.inv()?;
        let d = -(self.d.clone() * iv.clone() * iv.clone());
        Some(Jet { v: iv, d })
    }
    fn approx(&self) -> f64 {
        self.v.approx()
    }
}

/// Value part of a jet-valued object.
pub fn value_of<T: Scalar>(j: &Jet<T>) -> T {
    j.v.clone()
}

/// Derivative part of a jet-valued object.
pub fn deriv_of<T: Scalar>(j: &Jet<T>) -> T {
    j.d.clone()
}

/// An object built by rational operations from named rational parameters.
pub trait Construction {
    type Output<S: Scalar>;

    /// Parameter names with their current values.
    fn parameters(&self) -> Vec<(String, Rational)>;

    /// Rebuilds the object from parameter values given in the order of `parameters`.
    fn construct<S: Scalar>(&self, values: &[S]) -> Result<Self::Output<S>>;
}

/// Rebuilds `c` over jets seeded with the weighted direction, so every
/// coefficient carries its exact directional derivative.
pub fn jet_lift<C: Construction>(c: &C, direction: &[(String, Rational)]) -> Result<C::Output<Jet<Rational>>> {
    let params = c.parameters();
    for (name, _) in direction {
        if !params.iter().any(|(p, _)| p == name) {
            return Err(Error::UnknownDirection(name.clone()));
        }
    }
    let seeds: Vec<Jet<Rational>> = params
        .iter()
        .map(|(name, v)| {
            let d = direction.iter().filter(|(n, _)| n == name).fold(<Rational as Scalar>::zero(), |acc, (_, w)| acc + w.clone());
            Jet::new(v.clone(), d)
        })
        .collect();
    c.construct(&seeds)
}
