use super::coords::Coord;
use crate::connection::{Kind, NormalForm, Sign};
use crate::error::{Error, Result};
use crate::exactalg::{Pos, Scalar};
use crate::localform::{reduce_point, LocalReduction, ReduceOptions};

/// `H_{θ^±_l} = θ^±_{2n-l-2} / (n-l-1)` for `0 ≤ l ≤ n-2`.
pub fn hamiltonian_theta_unramified<S: Scalar>(red: &LocalReduction<S>, sign: Sign, l: usize) -> Result<S> {
    let n = red.pole_order;
    if red.kind == Kind::Ramified {
        return Err(Error::KindMismatch(format!("point {}", red.point)));
    }
    if l + 2 > n {
        return Err(Error::BadIndex(format!("theta_{l} at a pole of order {n}")));
    }
    let th = red.theta_pm(sign == Sign::Plus, 2 * n - l - 2)?;
    th.try_div(&S::from_int((n - l - 1) as i64))
}

/// `H_t = Σ_{l<n} (θ⁺_l θ⁺_{2n-1-l} + θ⁻_l θ⁻_{2n-1-l})` at a movable regular or unramified pole.
pub fn hamiltonian_t<S: Scalar>(nf: &NormalForm<S>, red: &LocalReduction<S>) -> Result<S> {
    let pt = &nf.sing().points[red.point];
    let fixed = match &pt.pos {
        Pos::Inf => true,
        Pos::Finite(t) => t.is_zero() || (t.clone() - S::one()).is_zero(),
    };
    if fixed || pt.kind == Kind::Ramified {
        return Err(Error::NotADeformationDirection(format!("position of point {}", red.point)));
    }
    let n = red.pole_order;
    let mut acc = S::zero();
    for plus in [true, false] {
        for l in 0..n {
            acc = acc + red.theta_pm(plus, l)? * red.theta_pm(plus, 2 * n - 1 - l)?;
        }
    }
    Ok(acc)
}

/// `H_{θ_{l'}} = θ_{4(n-1)-l'} / (2(n-1)-l')`, with `-θ_{2n-1}/(2θ_1)` added for `l' = 0`.
pub fn hamiltonian_theta_ramified<S: Scalar>(red: &LocalReduction<S>, l: usize) -> Result<S> {
    let n = red.pole_order;
    if red.kind != Kind::Ramified {
        return Err(Error::KindMismatch(format!("point {}", red.point)));
    }
    if l + 3 > 2 * n {
        return Err(Error::BadIndex(format!("theta_{l} at a ramified pole of order {n}")));
    }
    let mut h = red.theta_ra(4 * (n - 1) - l)?.try_div(&S::from_int((2 * (n - 1) - l) as i64))?;
    if l == 0 {
        let th1 = red.theta_ra(1)?;
        if th1.inv().is_none() {
            return Err(Error::KindMismatch(format!("theta_1 vanishes at point {}", red.point)));
        }
        h = h - red.theta_ra(2 * n - 1)?.try_div(&(th1 * S::from_int(2)))?;
    }
    Ok(h)
}

/// Hamiltonians conjugate to the given base coordinates, one reduction per pole.
pub fn hamiltonians<S: Scalar>(nf: &NormalForm<S>, coords: &[Coord]) -> Result<Vec<S>> {
    let mut reds: Vec<Option<LocalReduction<S>>> = vec![None; nf.sing().points.len()];
    let mut out = Vec::with_capacity(coords.len());
    for c in coords {
        let i = match c {
            Coord::T(i) | Coord::ThetaUn { point: i, .. } | Coord::ThetaRa { point: i, .. } => *i,
            _ => return Err(Error::NotADeformationDirection(format!("{c} is a fiber coordinate"))),
        };
        if i >= reds.len() {
            return Err(Error::BadIndex(format!("point {i}")));
        }
        if reds[i].is_none() {
            reds[i] = Some(reduce_point(nf, i, &ReduceOptions::default())?);
        }
        let red = reds[i].as_ref().expect("reduced above");
        out.push(match c {
            Coord::T(_) => hamiltonian_t(nf, red)?,
            Coord::ThetaUn { sign, index, .. } => hamiltonian_theta_unramified(red, *sign, *index)?,
            Coord::ThetaRa { index, .. } => hamiltonian_theta_ramified(red, *index)?,
            _ => unreachable!(),
        });
    }
    Ok(out)
}
