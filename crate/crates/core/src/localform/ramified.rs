use super::framing::framing_ramified;
use super::{local_coeffs, LocalReduction, ReduceOptions};
use crate::connection::{NormalForm, Theta};
use crate::error::{Error, Result};
use crate::exactalg::{rat, Chart, Mat2, MatSeries, Scalar};

/// Target coefficient `T_k = [[a_k, b_k], [b_{k-1}, a_k]] - ½δ_{k,n-1} E_22`.
fn target<S: Scalar>(a: &[S], b: &[S], k: usize, n: usize) -> Mat2<S> {
    let prev = if k == 0 { S::zero() } else { b[k - 1].clone() };
    let mut t = Mat2::new(a[k].clone(), b[k].clone(), prev, a[k].clone());
    if k + 1 == n {
        t.m[1][1] = t.m[1][1].clone() - S::from_rational(&rat(1, 2));
    }
    t
}

fn sigma<S: Scalar>(opts: &ReduceOptions<S>, s: usize) -> S {
    opts.sigma.get(s).cloned().unwrap_or_else(S::zero)
}

/// Brings the connection at a ramified pole to the shape
/// `[[α, β], [yβ, α - dy/(2y)]]`, `α = Σ a_k y^{k-n}`, `β = Σ b_k y^{k-n}`,
/// and reads `θ_{2k} = 2a_k`, `θ_{2k+1} = 2b_k`.
///
/// At each order the free entries `(ξ_s)_{11} = σ_s`, `(ξ_s)_{12} = 0` are
/// imposed; `(ξ_s)_{22}` and `b_s` are fixed one order later.
pub fn reduce_ramified<S: Scalar>(nf: &NormalForm<S>, i: usize, opts: &ReduceOptions<S>) -> Result<LocalReduction<S>> {
    let pt = nf.sing().points.get(i).ok_or_else(|| Error::BadIndex(format!("point {i}")))?;
    let n = pt.order;
    let kmax = opts.order.unwrap_or(2 * n - 1);
    if kmax < 2 * n - 1 {
        return Err(Error::Truncation { needed: 2 * n as i64 - 1, available: kmax as i64 });
    }
    let framing = framing_ramified(nf, i)?;
    let phi_inv = framing.phi.inv()?;
    let bm: Vec<Mat2<S>> =
        local_coeffs(nf, i, kmax)?.iter().map(|m| &(&phi_inv * m) * &framing.phi).collect();
    let th1 = bm[0].get(0, 1) * S::from_int(2);
    let half = S::from_rational(&rat(1, 2));
    let mut a = vec![bm[0].get(0, 0)];
    let mut b = vec![bm[0].get(0, 1)];
    let mut xi = vec![Mat2::identity()];
    let mut r12_prev = S::zero();

    // R_s with the current partial data
    let remainder = |s: usize, xi: &[Mat2<S>], a: &[S], b: &[S]| -> Mat2<S> {
        let mut r = bm[s].clone();
        for k in 1..s {
            let t = target(a, b, k, n);
            r = &(&r + &(&bm[k] * &xi[s - k])) - &(&xi[s - k] * &t);
        }
        let m = s as i64 - n as i64 + 1;
        if m >= 1 {
            r = &r + &xi[m as usize].scale(&S::from_int(m));
        }
        r
    };
    let delta = |s: usize| if s + 1 == n { half.clone() } else { S::zero() };
    let defect = |r: &Mat2<S>, bprev: &S| r.get(1, 0) - bprev.clone();

    for s in 1..=kmax {
        let r = if s == 1 {
            let r = remainder(1, &xi, &a, &b);
            if S::EXACT && !defect(&r, &b[0]).is_zero() {
                return Err(Error::InternalInconsistency(format!("ramified framing at {i} is not adapted")));
            }
            r
        } else {
            let sig = sigma(opts, s - 1);
            let mut eval = |u: S| {
                xi[s - 1].m[1][1] = u.clone();
                let bs = r12_prev.clone() + th1.clone() * half.clone() * (u - sig.clone());
                b.truncate(s - 1);
                b.push(bs.clone());
                let r = remainder(s, &xi, &a, &b);
                (defect(&r, &bs), r)
            };
            let (f0, _) = eval(S::zero());
            let (f1, _) = eval(S::one());
            let slope = f1 - f0.clone();
            let u = (-f0).try_div(&slope).map_err(|_| {
                Error::InternalInconsistency(format!("ramified recursion at {i} is singular at order {s}"))
            })?;
            eval(u).1
        };
        let x21 = (r.get(1, 1) - r.get(0, 0) + delta(s)).try_div(&th1)?;
        a.push(r.get(0, 0) + th1.clone() * half.clone() * x21.clone());
        let sig = sigma(opts, s);
        xi.push(Mat2::new(sig.clone(), S::zero(), x21, sig));
        r12_prev = r.get(0, 1);
    }
    // b_K is not determined at this depth
    let mut theta = Vec::with_capacity(2 * kmax + 1);
    for k in 0..=kmax {
        theta.push(a[k].clone() * S::from_int(2));
        if k < kmax {
            theta.push(b[k].clone() * S::from_int(2));
        }
    }
    if S::EXACT {
        for l in 0..2 * n - 1 {
            if theta[l] != pt.theta_ra(l)? {
                return Err(Error::InternalInconsistency(format!(
                    "reduction at point {i} does not reproduce θ_{l}"
                )));
            }
        }
    }
    Ok(LocalReduction {
        point: i,
        kind: pt.kind,
        framing,
        xi: MatSeries::with_trunc(0, xi, kmax as i64),
        theta: Theta::Ramified(theta),
        pole_order: n,
        residual_order: kmax as i64 - 1 - n as i64,
    })
}

/// The reduced shape `[[α, β], [yβ, α - 1/(2y)]]` as a series, through the certified order.
pub fn reduced_shape<S: Scalar>(red: &LocalReduction<S>) -> Result<MatSeries<S>> {
    let n = red.pole_order;
    let Theta::Ramified(th) = &red.theta else {
        return Err(Error::KindMismatch(format!("point {}", red.point)));
    };
    let half = S::from_rational(&rat(1, 2));
    let kk = (th.len() - 1) / 2;
    let a: Vec<S> = (0..=kk).map(|k| th[2 * k].clone() * half.clone()).collect();
    let mut b: Vec<S> = (0..kk).map(|k| th[2 * k + 1].clone() * half.clone()).collect();
    b.push(S::zero());
    let coeffs = (0..kk).map(|k| target(&a, &b, k, n)).collect();
    Ok(MatSeries::with_trunc(-(n as i64), coeffs, red.residual_order))
}

/// Diagonal of the ζ-chart form after `y = ζ²` and conjugation by
/// `M_ζ = [[1, 1], [ζ, -ζ]]`, as pairs `(coefficient of ζ^k dζ)` for the two
/// diagonal entries, together with the lowest power.
pub fn zeta_diagonal<S: Scalar>(red: &LocalReduction<S>) -> Result<(i64, Vec<(S, S)>)> {
    let shape = reduced_shape(red)?;
    let label = format!("zeta@{}", red.point);
    // Ω(ζ²) · 2ζ
    let sq = shape.substitute_square(Chart::Zeta(label.clone()));
    let two_zeta = MatSeries::with_trunc(1, vec![Mat2::diag(S::from_int(2), S::from_int(2))], sq.trunc() - sq.start() + 2);
    let om = &sq * &two_zeta;
    // M_ζ and its inverse are exact; carry them far enough past the pole of `om`
    let t = om.trunc() - om.start() + 2;
    let (o, z) = (S::one(), S::zero());
    let m = MatSeries::with_trunc(
        0,
        vec![Mat2::new(o.clone(), o.clone(), z.clone(), z.clone()), Mat2::new(z.clone(), z.clone(), o.clone(), -o.clone())],
        t,
    );
    let h = S::from_rational(&rat(1, 2));
    let m_inv = MatSeries::with_trunc(
        -1,
        vec![Mat2::new(z.clone(), h.clone(), z.clone(), -h.clone()), Mat2::new(h.clone(), z.clone(), h.clone(), z.clone())],
        t,
    );
    let dm = MatSeries::constant(Mat2::new(z.clone(), z.clone(), o.clone(), -o), t);
    let res = &(&(&m_inv * &om) * &m) + &(&m_inv * &dm);
    let res = res.truncated(om.trunc());
    let lo = 1 - 2 * red.pole_order as i64;
    let mut out = Vec::new();
    for k in lo..=res.trunc() {
        let c = res.coeff(k)?;
        if S::EXACT && !(c.get(0, 1).is_zero() && c.get(1, 0).is_zero()) {
            return Err(Error::InternalInconsistency(format!("ζ form not diagonal at order {k}")));
        }
        out.push((c.get(0, 0), c.get(1, 1)));
    }
    Ok((lo, out))
}
