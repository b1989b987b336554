use crate::connection::NormalForm;
use crate::error::{Error, Result};
use crate::exactalg::{Mat2, MatSeries, Pos, Scalar};

/// Local solution `Ψ = Φ Ξ(y) Λ(y)` at an apparent point, `y = x - q_j`,
/// `Φ = [[1,0],[p_j,1]]`, `Λ = diag(1, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ApparentSolution<S> {
    pub index: usize,
    pub phi: Mat2<S>,
    pub xi: MatSeries<S>,
}

/// Solves `B Ξ + Ξ' = Ξ diag(0,-1)/y` for `B = Φ⁻¹ Ω Φ` through order `K`,
/// with the free `(ξ_1)_{21}` set to 0.
pub fn apparent_solution<S: Scalar>(nf: &NormalForm<S>, j: usize, order: usize) -> Result<ApparentSolution<S>> {
    let dp = nf.darboux().get(j).ok_or_else(|| Error::BadIndex(format!("apparent point {j}")))?;
    let (o, z) = (S::one(), S::zero());
    let phi = Mat2::new(o.clone(), z.clone(), dp.p.clone(), o.clone());
    let phi_inv = phi.inv()?;
    let om = nf.local_matrix(&Pos::Finite(dp.q.clone()), order as i64)?;
    // B_{k-1} for k = 0..=order+1
    let b: Vec<Mat2<S>> =
        (-1..=order as i64).map(|k| Ok(&(&phi_inv * &om.coeff(k)?) * &phi)).collect::<Result<_>>()?;
    if S::EXACT && b[0] != Mat2::diag(z.clone(), -o.clone()) {
        return Err(Error::NotApparent(j));
    }
    let mut xi = vec![Mat2::identity()];
    for s in 1..=order {
        let mut r = Mat2::zero();
        for a in 1..=s {
            r = &r + &(&b[a] * &xi[s - a]);
        }
        let sf = S::from_int(s as i64);
        let x21 = if s == 1 {
            if S::EXACT && !r.get(1, 0).is_zero() {
                return Err(Error::NotApparent(j));
            }
            z.clone()
        } else {
            -r.get(1, 0).try_div(&S::from_int(s as i64 - 1))?
        };
        let x11 = -r.get(0, 0).try_div(&sf)?;
        let x12 = -r.get(0, 1).try_div(&S::from_int(s as i64 + 1))?;
        let x22 = -r.get(1, 1).try_div(&sf)?;
        xi.push(Mat2::new(x11, x12, x21, x22));
    }
    Ok(ApparentSolution { index: j, phi, xi: MatSeries::with_trunc(0, xi, order as i64) })
}
