use super::poly::Poly;
use super::scalar::Scalar;
use super::series::Series;
use crate::error::{Error, Result};

/// A point of the Riemann sphere.
#[derive(Clone, Debug, PartialEq)]
pub enum Pos<S> {
    Finite(S),
    Inf,
}

impl<S: Scalar> Pos<S> {
    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> Pos<T> {
        match self {
            Pos::Finite(a) => Pos::Finite(f(a)),
            Pos::Inf => Pos::Inf,
        }
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Pos::Inf)
    }
}

/// Rational function `num / den` with monic denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc<S> {
    num: Poly<S>,
    den: Poly<S>,
}

impl<S: Scalar> RatFunc<S> {
    pub fn new(num: Poly<S>, den: Poly<S>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("zero denominator".into()));
        }
        let lc = den
            .leading()
            .inv()
            .ok_or_else(|| Error::DivisionByZero("denominator leading coefficient".into()))?;
        Ok(RatFunc { num: num.scale(&lc), den: den.scale(&lc) })
    }

    pub fn from_poly(p: Poly<S>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn num(&self) -> &Poly<S> {
        &self.num
    }

    pub fn den(&self) -> &Poly<S> {
        &self.den
    }

    pub fn eval(&self, x: &S) -> Result<S> {
        self.num.eval(x).try_div(&self.den.eval(x))
    }

    pub fn add(&self, o: &Self) -> Self {
        RatFunc {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFunc { num: &self.num * &o.num, den: &self.den * &o.den }
    }
}

impl RatFunc<super::scalar::Rational> {
    /// Cancels the common factor of numerator and denominator.
    pub fn reduced(&self) -> Self {
        let g = self.num.gcd(&self.den);
        if g.degree() <= 0 {
            return self.clone();
        }
        let num = self.num.div_exact(&g).expect("gcd divides");
        let den = self.den.div_exact(&g).expect("gcd divides");
        RatFunc::new(num, den).expect("nonzero denominator")
    }
}

/// Laurent expansion of `f` at `pos` through order `trunc` in the local variable
/// (`x - a` at a finite point, `1/x` at infinity).
pub fn laurent_expand<S: Scalar>(f: &RatFunc<S>, pos: &Pos<S>, trunc: i64) -> Result<Series<S>> {
    let (num, den, offset) = match pos {
        Pos::Finite(a) => (f.num.shift(a), f.den.shift(a), 0i64),
        Pos::Inf => {
            let dn = f.num.degree().max(0) as usize;
            let dd = f.den.degree() as usize;
            (f.num.reverse(dn)?, f.den.reverse(dd)?, dd as i64 - dn as i64)
        }
    };
    let v = den.coeffs().iter().take_while(|c| c.is_zero()).count() as i64;
    let lead = den.coeff(v as usize);
    if lead.inv().is_none() {
        return Err(Error::Unexpandable(format!("{:?}", pos)));
    }
    // f = y^{offset - v} num(y) / (den(y)/y^v)
    let shift = offset - v;
    let rel = trunc - shift;
    if rel < 0 || num.is_zero() {
        return Ok(Series::zero(trunc));
    }
    let n = Series::from_poly(&num, rel);
    let d = Series::new(0, den.coeffs()[v as usize..].to_vec()).with_known(rel);
    Ok((&n * &d.inv()?).shifted(shift).truncated(trunc))
}

/// Residue of the differential `f(x) dx` at `pos`.
pub fn residue_at<S: Scalar>(f: &RatFunc<S>, pos: &Pos<S>) -> Result<S> {
    match pos {
        Pos::Finite(_) => laurent_expand(f, pos, -1)?.coeff(-1),
        // dx = -dw / w²
        Pos::Inf => Ok(-laurent_expand(f, pos, 1)?.coeff(1)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::{rat, Rational};

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&k| rat(k, 1)).collect())
    }

    #[test]
    fn simple_pole_residue() {
        // 3/(x-2) + 1/x
        let f = RatFunc::new(p(&[-2, 4]), p(&[0, -2, 1])).unwrap();
        assert_eq!(residue_at(&f, &Pos::Finite(rat(2, 1))).unwrap(), rat(3, 1));
        assert_eq!(residue_at(&f, &Pos::Finite(rat(0, 1))).unwrap(), rat(1, 1));
        assert_eq!(residue_at(&f, &Pos::Inf).unwrap(), rat(-4, 1));
    }

    #[test]
    fn expansion_at_infinity() {
        // x^2/(x-1) = x + 1 + 1/x + ...
        let f = RatFunc::new(p(&[0, 0, 1]), p(&[-1, 1])).unwrap();
        let s = laurent_expand(&f, &Pos::Inf, 3).unwrap();
        assert_eq!(s.start(), -1);
        for k in -1..=3 {
            assert_eq!(s.coeff(k).unwrap(), rat(1, 1));
        }
        assert!(s.coeff(4).is_err());
    }

    #[test]
    fn double_pole() {
        // 1/(x-1)^2 at 1
        let f = RatFunc::new(p(&[1]), p(&[1, -2, 1])).unwrap();
        let s = laurent_expand(&f, &Pos::Finite(rat(1, 1)), 2).unwrap();
        assert_eq!(s.coeff(-2).unwrap(), rat(1, 1));
        assert_eq!(s.coeff(-1).unwrap(), rat(0, 1));
        assert_eq!(s.coeff(2).unwrap(), rat(0, 1));
    }
}
