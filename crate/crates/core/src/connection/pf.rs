use crate::error::{Error, Result};
use crate::exactalg::{Poly, Pos, RatFunc, Scalar, Series};

/// `num(x - center) / (x - center)^power`.
#[derive(Clone, Debug, PartialEq)]
pub struct PfTerm<S> {
    pub center: S,
    pub num: Poly<S>,
    pub power: u32,
}

/// A rational function kept as a sum of centered terms, so that it can be
/// expanded at any point (including infinity) without common denominators.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PartialFractions<S> {
    pub terms: Vec<PfTerm<S>>,
}

impl<S: Scalar> PartialFractions<S> {
    pub fn new() -> Self {
        PartialFractions { terms: Vec::new() }
    }

    pub fn push(&mut self, center: S, num: Poly<S>, power: u32) {
        if !num.is_zero() {
            self.terms.push(PfTerm { center, num, power });
        }
    }

    /// Adds a polynomial in `x`.
    pub fn push_poly(&mut self, p: Poly<S>) {
        self.push(S::zero(), p, 0);
    }

    pub fn eval(&self, x: &S) -> Result<S> {
        let mut acc = S::zero();
        for t in &self.terms {
            let y = x.clone() - t.center.clone();
            let v = t.num.eval(&y).try_div(&y.pow(t.power))?;
            acc = acc + v;
        }
        Ok(acc)
    }

    /// Laurent series in the local variable at `pos`, known through `trunc`.
    pub fn expand(&self, pos: &Pos<S>, trunc: i64) -> Result<Series<S>> {
        let mut acc = Series::zero(trunc);
        for t in &self.terms {
            let s = match pos {
                Pos::Finite(b) => expand_term_finite(t, b, trunc)?,
                Pos::Inf => expand_term_inf(t, trunc)?,
            };
            acc = &acc + &s;
        }
        Ok(acc)
    }

    /// Single rational function with the product of all denominators.
    pub fn to_ratfunc(&self) -> Result<RatFunc<S>> {
        let mut acc = RatFunc::from_poly(Poly::zero());
        for t in &self.terms {
            let num = t.num.shift(&-t.center.clone());
            let den = Poly::linear(&t.center).pow(t.power);
            acc = acc.add(&RatFunc::new(num, den)?);
        }
        Ok(acc)
    }
}

fn expand_term_finite<S: Scalar>(t: &PfTerm<S>, b: &S, trunc: i64) -> Result<Series<S>> {
    let m = t.power as i64;
    let d = b.clone() - t.center.clone();
    if d.is_zero() {
        return Ok(Series::new(0, t.num.coeffs().to_vec()).with_known(trunc + m).shifted(-m));
    }
    let dinv = d.inv().ok_or_else(|| Error::Unexpandable("pole too close to the expansion point".into()))?;
    if trunc < 0 {
        return Ok(Series::zero(trunc));
    }
    // x - c = y + d; (y + d)^{-m} = d^{-m} (1 + y/d)^{-m}
    let num = Series::from_poly(&t.num.shift(&d), trunc);
    let inv = Series::binomial_inverse_power(&dinv, t.power, trunc).scale(&dinv.pow(t.power));
    Ok((&num * &inv).truncated(trunc))
}

fn expand_term_inf<S: Scalar>(t: &PfTerm<S>, trunc: i64) -> Result<Series<S>> {
    let q = t.num.shift(&-t.center.clone());
    if q.is_zero() {
        return Ok(Series::zero(trunc));
    }
    let deg = q.degree();
    let m = t.power as i64;
    let shift = m - deg;
    let rel = trunc - shift;
    if rel < 0 {
        return Ok(Series::zero(trunc));
    }
    let rev = Series::new(0, q.reverse(deg as usize)?.into_coeffs()).with_known(rel);
    let bin = Series::binomial_inverse_power(&-t.center.clone(), t.power, rel);
    Ok((&rev * &bin).shifted(shift).truncated(trunc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{laurent_expand, rat, Rational};

    fn sample() -> PartialFractions<Rational> {
        let mut f = PartialFractions::new();
        f.push(rat(0, 1), Poly::new(vec![rat(1, 1), rat(2, 1)]), 2);
        f.push(rat(3, 2), Poly::constant(rat(-5, 1)), 1);
        f.push_poly(Poly::new(vec![rat(1, 3), rat(0, 1), rat(4, 1)]));
        f
    }

    #[test]
    fn agrees_with_common_denominator() {
        let f = sample();
        let r = f.to_ratfunc().unwrap();
        for pos in [Pos::Finite(rat(0, 1)), Pos::Finite(rat(3, 2)), Pos::Finite(rat(-7, 5)), Pos::Inf] {
            let a = f.expand(&pos, 4).unwrap();
            let b = laurent_expand(&r, &pos, 4).unwrap();
            for k in -3..=4 {
                assert_eq!(a.coeff(k).unwrap(), b.coeff(k).unwrap(), "{pos:?} {k}");
            }
        }
        let x = rat(2, 7);
        assert_eq!(f.eval(&x).unwrap(), r.eval(&x).unwrap());
    }
}
