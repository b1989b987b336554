use num_complex::Complex64;


use super::data::DarbouxPoint;
use super::e1::E1Connection;
use crate::error::{Error, Result};
use crate::exactalg::scalar::convergents;
use crate::exactalg::{format_rational, Mat2, MatSeries, Poly, Rational, Scalar, Series};

/// All complex roots of a polynomial with float coefficients (Aberth iteration).
pub fn numeric_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let monic: Vec<f64> = c.iter().map(|v| v / lead).collect();
    let radius = 1.0 + monic[..deg].iter().map(|v| v.abs()).fold(0.0, f64::max);
    let eval = |z: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for k in (0..=deg).rev() {
            dp = dp * z + p;
            p = p * z + monic[k];
        }
        (p, dp)
    };
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64;
            Complex64::from_polar(radius * 0.5 + 0.1, a)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..deg).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Exact rational roots of a square-free polynomial whose roots are all rational.
///
/// Each numeric root is rounded by continued fractions and certified by exact
/// evaluation, then deflated out exactly.
pub fn rational_roots(b: &Poly<Rational>) -> Result<Vec<Rational>> {
    let mut rest = b.clone();
    let mut out = Vec::new();
    while rest.degree() > 0 {
        let fl: Vec<f64> = rest.coeffs().iter().map(|c| c.approx()).collect();
        let roots = numeric_roots(&fl);
        let mut found = None;
        'outer: for z in &roots {
            if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
                continue;
            }
            for cand in convergents(z.re, 1_000_000_000) {
                if rest.eval(&cand).is_zero() {
                    found = Some(cand);
                    break 'outer;
                }
            }
        }
        let Some(r) = found else {
            return Err(Error::NonGenericApparentDivisor(format!(
                "no certified rational root among {:?}",
                roots
            )));
        };
        rest = rest.div_exact(&Poly::linear(&r))?;
        out.push(r);
    }
    out.sort();
    Ok(out)
}

/// Recovers the Darboux coordinates from a connection on `E_1`.
///
/// `q_j` are the zeros of the `(1,2)` numerator; `p_j` is read from the
/// `0`-eigendirection `[1 : p_j]` of the residue at `q_j` after pushing
/// forward to `E_{n-2}`.
pub fn apparent_data(e1: &E1Connection<Rational>) -> Result<Vec<DarbouxPoint<Rational>>> {
    let b = &e1.m[0][1];
    if b.is_zero() {
        return Err(Error::InvariantSubbundle);
    }
    let expect = e1.n - 3;
    if b.degree() != expect as i64 {
        return Err(Error::NonGenericApparentDivisor(format!(
            "(1,2) numerator has degree {}, expected {expect}",
            b.degree()
        )));
    }
    let g = b.gcd(&b.derivative());
    if g.degree() > 0 {
        return Err(Error::NonGenericApparentDivisor("repeated apparent point".into()));
    }
    let lc_inv = b.leading().inv().expect("nonzero");
    let q1 = b.scale(&lc_inv);
    let qs = rational_roots(&q1)?;
    let a = &e1.m[0][0];
    let mut out = Vec::new();
    for q in qs {
        if e1.p.eval(&q).is_zero() {
            return Err(Error::NonGenericApparentDivisor(format!(
                "apparent point {} on the polar divisor",
                format_rational(&q)
            )));
        }
        let res = pushed_residue(e1, a, &q1, &q)?;
        // kernel vector [1 : p] of the residue
        let p = if !res.get(1, 1).is_zero() {
            -res.get(1, 0) * res.get(1, 1).inv().expect("nonzero")
        } else {
            return Err(Error::InternalInconsistency(format!(
                "residue at {} has no eigendirection of the form [1:p]",
                format_rational(&q)
            )));
        };
        let kernel_ok = (res.get(0, 0) + res.get(0, 1) * p.clone()).is_zero();
        if !kernel_ok || p != a.eval(&q) {
            return Err(Error::InternalInconsistency(format!(
                "dual parameter mismatch at {}",
                format_rational(&q)
            )));
        }
        out.push(DarbouxPoint { q, p });
    }
    Ok(out)
}

/// Residue at `q` of `G Ω G^{-1} - dG G^{-1}`, `G = [[1,0],[A,Q_1]]`.
pub fn pushed_residue(
    e1: &E1Connection<Rational>,
    a: &Poly<Rational>,
    q1: &Poly<Rational>,
    q: &Rational,
) -> Result<Mat2<Rational>> {
    let t = 3;
    let om = e1.local_matrix(q, t)?;
    let sa = Series::from_poly(&a.shift(q), t + 2);
    let sb = Series::from_poly(&q1.shift(q), t + 2);
    let sb_inv = sb.inv()?;
    let zero = Series::zero(t + 2);
    let one = Series::constant(<Rational as Scalar>::one(), t + 2);
    let g = MatSeries::from_entries([[one.clone(), zero.clone()], [sa.clone(), sb.clone()]]);
    let g_inv = MatSeries::from_entries([[one, zero.clone()], [-&(&sa * &sb_inv), sb_inv]]);
    let dg = MatSeries::from_entries([[zero.clone(), zero.clone()], [sa.derivative(), sb.derivative()]]);
    let pushed = &(&(&g * &om) * &g_inv) - &(&dg * &g_inv);
    pushed.residue()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    #[test]
    fn finds_rational_roots() {
        let r = vec![rat(-3, 7), rat(1, 2), rat(22, 5)];
        let p = Poly::from_roots(&r);
        assert_eq!(rational_roots(&p).unwrap(), r);
    }

    #[test]
    fn irrational_roots_rejected() {
        let p = Poly::new(vec![rat(-2, 1), rat(0, 1), rat(1, 1)]);
        assert!(matches!(rational_roots(&p), Err(Error::NonGenericApparentDivisor(_))));
    }
}
