use super::framing::framing_unramified;
use super::{local_coeffs, LocalReduction};
use crate::connection::{NormalForm, Sign, Theta};
use crate::error::{Error, Result};
use crate::exactalg::{Mat2, MatSeries, Scalar};

/// Diagonalizes the connection at a regular or unramified pole through order `K`.
///
/// Solves `B Ξ + Ξ' = Ξ Λ` with `B = Φ⁻¹ Ω Φ`, `Ξ = I + Σ ξ_s y^s` with zero
/// diagonals, `Λ = Σ diag(θ⁺_l, θ⁻_l) y^{l-n}`.
pub fn reduce_unramified<S: Scalar>(nf: &NormalForm<S>, i: usize, order: Option<usize>) -> Result<LocalReduction<S>> {
    let pt = nf.sing().points.get(i).ok_or_else(|| Error::BadIndex(format!("point {i}")))?;
    let n = pt.order;
    let kmax = order.unwrap_or(2 * n - 1);
    if kmax < 2 * n - 1 {
        return Err(Error::Truncation { needed: 2 * n as i64 - 1, available: kmax as i64 });
    }
    let framing = framing_unramified(nf, i)?;
    let phi_inv = framing.phi.inv()?;
    let b: Vec<Mat2<S>> =
        local_coeffs(nf, i, kmax)?.iter().map(|m| &(&phi_inv * m) * &framing.phi).collect();
    let (tp, tm) = (b[0].get(0, 0), b[0].get(1, 1));
    if S::EXACT && !(b[0].get(0, 1).is_zero() && b[0].get(1, 0).is_zero()) {
        return Err(Error::InternalInconsistency(format!("framing at {i} does not diagonalize")));
    }
    let gap = tp.clone() - tm.clone();
    let mut xi = vec![Mat2::identity()];
    let mut lam = vec![Mat2::diag(tp, tm)];
    for s in 1..=kmax {
        let mut r = b[s].clone();
        for a in 1..s {
            r = &(&r + &(&b[a] * &xi[s - a])) - &(&xi[s - a] * &lam[a]);
        }
        let m = s as i64 - n as i64 + 1;
        if m >= 1 && (m as usize) < s {
            r = &r + &xi[m as usize].scale(&S::from_int(m));
        }
        let shift = if n == 1 { S::from_int(s as i64) } else { S::zero() };
        let x12 = -r.get(0, 1).try_div(&(gap.clone() + shift.clone()))?;
        let x21 = -r.get(1, 0).try_div(&(shift - gap.clone()))?;
        xi.push(Mat2::new(S::zero(), x12, x21, S::zero()));
        lam.push(Mat2::diag(r.get(0, 0), r.get(1, 1)));
    }
    let plus: Vec<S> = lam.iter().map(|l| l.get(0, 0)).collect();
    let minus: Vec<S> = lam.iter().map(|l| l.get(1, 1)).collect();
    if S::EXACT {
        for l in 0..n {
            if plus[l] != pt.theta_pm(Sign::Plus, l)? || minus[l] != pt.theta_pm(Sign::Minus, l)? {
                return Err(Error::InternalInconsistency(format!(
                    "reduction at point {i} does not reproduce the input data at order {l}"
                )));
            }
        }
    }
    Ok(LocalReduction {
        point: i,
        kind: pt.kind,
        framing,
        xi: MatSeries::with_trunc(0, xi, kmax as i64),
        theta: Theta::Pair { plus, minus },
        pole_order: n,
        residual_order: kmax as i64 - n as i64,
    })
}

/// `(ΦΞ)⁻¹ d(ΦΞ) + (ΦΞ)⁻¹ Ω (ΦΞ)` at the reduced point, through the certified order.
pub fn gauge_transformed<S: Scalar>(nf: &NormalForm<S>, red: &LocalReduction<S>) -> Result<MatSeries<S>> {
    let pt = &nf.sing().points[red.point];
    let k = red.xi.trunc();
    let om = nf.local_matrix(&pt.pos, k - pt.order as i64)?;
    let g = &MatSeries::constant(red.framing.phi.clone(), k) * &red.xi;
    let g_inv = g.inv()?;
    let out = &(&(&g_inv * &om) * &g) + &(&g_inv * &g.derivative());
    Ok(out.truncated(red.residual_order))
}
