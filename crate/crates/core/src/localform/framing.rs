use super::local_coeffs;
use crate::connection::{Kind, NormalForm, Sign};
use crate::error::{Error, Result};
use crate::exactalg::{rat, Mat2, Scalar};

/// Constant gauge putting the leading coefficient at a pole in normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatibleFraming<S> {
    pub point: usize,
    pub phi: Mat2<S>,
}

fn mismatch(i: usize, why: &str) -> Error {
    Error::KindMismatch(format!("{i}: {why}"))
}

/// Eigenvector framing at a regular or unramified pole.
///
/// With `a` the `(1,2)` entry of the leading matrix the columns are
/// `(1, θ⁺_0/a)` and `(a/θ⁻_0, 1)`, in that order; when `θ⁻_0 = 0` the
/// second column is `(1, θ⁻_0/a)`, which is `(1, 0)` for exact scalars.
pub fn framing_unramified<S: Scalar>(nf: &NormalForm<S>, i: usize) -> Result<CompatibleFraming<S>> {
    let pt = nf.sing().points.get(i).ok_or_else(|| Error::BadIndex(format!("point {i}")))?;
    if pt.kind == Kind::Ramified {
        return Err(mismatch(i, "declared ramified"));
    }
    let a0 = local_coeffs(nf, i, 0)?.remove(0);
    let tp = pt.theta_pm(Sign::Plus, 0)?;
    let tm = pt.theta_pm(Sign::Minus, 0)?;
    let disc = a0.trace() * a0.trace() - S::from_int(4) * a0.det();
    if S::EXACT {
        let ev = |t: &S| (&a0 - &Mat2::diag(t.clone(), t.clone())).det().is_zero();
        if disc.is_zero() || !ev(&tp) || !ev(&tm) || (tp.clone() - tm.clone()).is_zero() {
            return Err(mismatch(i, "leading matrix does not have the distinct eigenvalues θ⁺_0, θ⁻_0"));
        }
    }
    let a = a0.get(0, 1);
    let a_inv = a.inv().ok_or_else(|| mismatch(i, "leading (1,2) entry vanishes"))?;
    let col2 = match tm.inv() {
        Some(tm_inv) => (a * tm_inv, S::one()),
        None => (S::one(), tm * a_inv.clone()),
    };
    let phi = Mat2::new(S::one(), col2.0, tp * a_inv, col2.1);
    if phi.det().inv().is_none() {
        return Err(mismatch(i, "eigenvectors are dependent"));
    }
    Ok(CompatibleFraming { point: i, phi })
}

/// Jordan framing at a ramified pole.
///
/// `Φ⁻¹ A_0 Φ = [[θ_0/2, θ_1/2], [0, θ_0/2]]`, and the remaining freedom
/// `Φ → Φ (1 + κ N)` is fixed by equal diagonal entries of `Φ⁻¹ A_1 Φ`.
pub fn framing_ramified<S: Scalar>(nf: &NormalForm<S>, i: usize) -> Result<CompatibleFraming<S>> {
    let pt = nf.sing().points.get(i).ok_or_else(|| Error::BadIndex(format!("point {i}")))?;
    if pt.kind != Kind::Ramified {
        return Err(mismatch(i, "not declared ramified"));
    }
    let a = local_coeffs(nf, i, 1)?;
    let (a0, a1) = (&a[0], &a[1]);
    let half = S::from_rational(&rat(1, 2));
    let disc = a0.trace() * a0.trace() - S::from_int(4) * a0.det();
    if S::EXACT && !disc.is_zero() {
        return Err(mismatch(i, "leading matrix is semisimple with distinct eigenvalues"));
    }
    let lam = a0.trace() * half.clone();
    let mu = pt.theta_ra(1)? * half;
    let a01 = a0.get(0, 1);
    let a_inv = a01.inv().ok_or_else(|| mismatch(i, "leading matrix is scalar"))?;
    let base = Mat2::new(S::one(), S::zero(), lam.clone() * a_inv.clone(), mu.clone() * a_inv.clone());
    let b1 = &(&base.inv()? * a1) * &base;
    let kappa = (b1.get(0, 0) - b1.get(1, 1)).try_div(&(b1.get(1, 0) * S::from_int(2)))?;
    let k = Mat2::new(S::one(), kappa, S::zero(), S::one());
    Ok(CompatibleFraming { point: i, phi: &base * &k })
}
