//! Truncated formal reductions at the poles and holomorphic solutions at the
//! apparent points.

mod apparent;
mod framing;
mod ramified;
mod report;
mod unramified;


pub use apparent::{apparent_solution, ApparentSolution};
pub use framing::{framing_ramified, framing_unramified, CompatibleFraming};
pub use ramified::{reduce_ramified, reduced_shape, zeta_diagonal};
pub use report::ReductionReport;
pub use unramified::{gauge_transformed, reduce_unramified};

use crate::connection::{Kind, NormalForm, Theta};
use crate::error::{Error, Result};
use crate::exactalg::{Mat2, MatSeries, Scalar};

/// Output of a local reduction at one pole.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalReduction<S> {
    pub point: usize,
    pub kind: Kind,
    pub framing: CompatibleFraming<S>,
    /// `Ξ = Σ ξ_s y^s`, `ξ_0 = I`.
    pub xi: MatSeries<S>,
    /// The full local formal data, input part followed by the computed tail.
    pub theta: Theta<S>,
    /// Pole order `n_i`.
    pub pole_order: usize,
    /// Highest local order (power of the local variable) at which the gauge
    /// identity is certified.
    pub residual_order: i64,
}

impl<S: Scalar> LocalReduction<S> {
    /// The computed coefficients beyond the input data: `θ^±_l` for
    /// `l = n_i..`, or `θ_{l'}` for `l' = 2n_i - 1..`.
    pub fn theta_tail(&self) -> Theta<S> {
        let n = self.pole_order;
        match &self.theta {
            Theta::Pair { plus, minus } => Theta::Pair { plus: plus[n..].to_vec(), minus: minus[n..].to_vec() },
            Theta::Ramified(v) => Theta::Ramified(v[2 * n - 1..].to_vec()),
        }
    }

    /// `θ^±_l` (unramified or regular).
    pub fn theta_pm(&self, plus: bool, l: usize) -> Result<S> {
        match &self.theta {
            Theta::Pair { plus: p, minus: m } => {
                let v = if plus { p } else { m };
                v.get(l).cloned().ok_or(Error::Truncation { needed: l as i64, available: v.len() as i64 - 1 })
            }
            Theta::Ramified(_) => Err(Error::KindMismatch(format!("point {}", self.point))),
        }
    }

    /// `θ_{l'}` (ramified).
    pub fn theta_ra(&self, l: usize) -> Result<S> {
        match &self.theta {
            Theta::Ramified(v) => {
                v.get(l).cloned().ok_or(Error::Truncation { needed: l as i64, available: v.len() as i64 - 1 })
            }
            Theta::Pair { .. } => Err(Error::KindMismatch(format!("point {}", self.point))),
        }
    }
}

/// Gauge-related options of the reductions.
#[derive(Clone, Debug, PartialEq)]
pub struct ReduceOptions<S> {
    /// Highest order `K` of `Ξ` (default `2n_i - 1`).
    pub order: Option<usize>,
    /// Values of the free `(ξ_s)_{11}` in the ramified recursion (default 0).
    pub sigma: Vec<S>,
}

impl<S> Default for ReduceOptions<S> {
    fn default() -> Self {
        ReduceOptions { order: None, sigma: Vec::new() }
    }
}

/// Reduction at any pole, dispatched on its kind.
pub fn reduce_point<S: Scalar>(nf: &NormalForm<S>, i: usize, opts: &ReduceOptions<S>) -> Result<LocalReduction<S>> {
    let pt = nf.sing().points.get(i).ok_or_else(|| Error::BadIndex(format!("point {i}")))?;
    match pt.kind {
        Kind::Ramified => reduce_ramified(nf, i, opts),
        _ => reduce_unramified(nf, i, opts.order),
    }
}

/// Coefficients `A_0, …, A_kmax` of `Ω = Σ A_k y^{k-n} dy` at point `i`.
pub(crate) fn local_coeffs<S: Scalar>(nf: &NormalForm<S>, i: usize, kmax: usize) -> Result<Vec<Mat2<S>>> {
    let pt = &nf.sing().points[i];
    let n = pt.order as i64;
    let om = nf.local_matrix(&pt.pos, kmax as i64 - n)?;
    (0..=kmax as i64).map(|k| om.coeff(k - n)).collect()
}
