use serde::{Deserialize, Serialize};

use super::field::{check_deformation, vector_field, DeformationDirection};
use crate::connection::{DarbouxPoint, Instance, SingularityData};
use crate::error::{Error, Result};
use crate::exactalg::Pos;
use crate::symplectic::{base_value, p_from_eta, set_base_coordinate};

/// A point of a trajectory: deformation parameter `s` and the fiber state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloatState {
    pub s: f64,
    pub q: Vec<f64>,
    pub eta: Vec<f64>,
}

impl FloatState {
    /// Starting state of an instance in float arithmetic.
    pub fn of_instance(inst: &Instance<f64>, dir: DeformationDirection) -> Result<Self> {
        let (q, eta) = super::field::state_of(inst)?;
        Ok(FloatState { s: base_value(&inst.sing, dir.coord())?, q, eta })
    }

    fn axpy(&self, h: f64, v: &[f64], w: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let q = self.q.iter().zip(v).map(|(a, b)| a + h * b).collect();
        let eta = self.eta.iter().zip(w).map(|(a, b)| a + h * b).collect();
        (q, eta)
    }

    fn distance(&self, other: &Self) -> f64 {
        self.q
            .iter()
            .zip(&other.q)
            .chain(self.eta.iter().zip(&other.eta))
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowOptions {
    pub h: f64,
    pub steps: usize,
    /// Minimal distance between two apparent points or an apparent point and a pole.
    pub margin: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions { h: 1e-3, steps: 100, margin: 1e-6 }
    }
}

/// Spectral data with the deformation coordinate set to `s`.
pub fn data_at(sing: &SingularityData<f64>, dir: DeformationDirection, s: f64) -> Result<SingularityData<f64>> {
    let mut out = sing.clone();
    set_base_coordinate(&mut out, dir.coord(), s)?;
    Ok(out)
}

/// The float instance reached by a state.
pub fn instance_at(sing: &SingularityData<f64>, dir: DeformationDirection, st: &FloatState) -> Result<Instance<f64>> {
    let data = data_at(sing, dir, st.s)?;
    let p = p_from_eta(&data, &st.q, &st.eta)?;
    let darboux = st.q.iter().zip(p).map(|(&q, p)| DarbouxPoint { q, p }).collect();
    Ok(Instance { sing: data, darboux })
}

fn check_margin(sing: &SingularityData<f64>, st: &FloatState, margin: f64) -> std::result::Result<(), String> {
    for (j, q) in st.q.iter().enumerate() {
        if !q.is_finite() || !st.eta[j].is_finite() {
            return Err(format!("state of apparent point {j} is not finite"));
        }
        for (k, r) in st.q.iter().enumerate().skip(j + 1) {
            if (q - r).abs() < margin {
                return Err(format!("q{j} and q{k} collide"));
            }
        }
        for (i, pt) in sing.points.iter().enumerate() {
            if let Pos::Finite(t) = pt.pos {
                if (q - t).abs() < margin {
                    return Err(format!("q{j} reaches point {i}"));
                }
            }
        }
    }
    Ok(())
}

fn rk4_step(
    sing: &SingularityData<f64>,
    dir: DeformationDirection,
    st: &FloatState,
    h: f64,
) -> Result<FloatState> {
    let f = |s: f64, q: &[f64], eta: &[f64]| -> Result<(Vec<f64>, Vec<f64>)> {
        let v = vector_field(&data_at(sing, dir, s)?, q, eta, dir)?;
        Ok((v.dq, v.deta))
    };
    let (k1q, k1e) = f(st.s, &st.q, &st.eta)?;
    let (q2, e2) = st.axpy(h / 2.0, &k1q, &k1e);
    let (k2q, k2e) = f(st.s + h / 2.0, &q2, &e2)?;
    let (q3, e3) = st.axpy(h / 2.0, &k2q, &k2e);
    let (k3q, k3e) = f(st.s + h / 2.0, &q3, &e3)?;
    let (q4, e4) = st.axpy(h, &k3q, &k3e);
    let (k4q, k4e) = f(st.s + h, &q4, &e4)?;
    let comb = |a: &[f64], b: &[f64], c: &[f64], d: &[f64]| -> Vec<f64> {
        (0..a.len()).map(|i| (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]) / 6.0).collect()
    };
    let (q, eta) = st.axpy(h, &comb(&k1q, &k2q, &k3q, &k4q), &comb(&k1e, &k2e, &k3e, &k4e));
    Ok(FloatState { s: st.s + h, q, eta })
}

/// Classical RK4 for the Hamiltonian system of `dir`, the deformation
/// coordinate advancing linearly. Returns all `steps + 1` states.
pub fn flow(
    sing: &SingularityData<f64>,
    start: &FloatState,
    dir: DeformationDirection,
    opts: &FlowOptions,
) -> Result<Vec<FloatState>> {
    check_deformation(sing, dir)?;
    if start.q.len() != start.eta.len() {
        return Err(Error::Validation("q and eta have different lengths".into()));
    }
    let singular = |step: usize, reason: String| Error::FlowSingular { step, reason };
    let mut traj = vec![start.clone()];
    check_margin(&data_at(sing, dir, start.s)?, start, opts.margin).map_err(|r| singular(0, r))?;
    for k in 1..=opts.steps {
        let prev = traj.last().expect("non-empty");
        let next = rk4_step(sing, dir, prev, opts.h).map_err(|e| singular(k, e.to_string()))?;
        check_margin(&data_at(sing, dir, next.s)?, &next, opts.margin).map_err(|r| singular(k, r))?;
        traj.push(next);
    }
    Ok(traj)
}

/// Observed convergence order from endpoints at steps `h`, `h/2`, `h/4` over the same length.
pub fn observed_order(
    sing: &SingularityData<f64>,
    start: &FloatState,
    dir: DeformationDirection,
    h: f64,
    steps: usize,
) -> Result<f64> {
    let end = |k: usize| -> Result<FloatState> {
        let opts = FlowOptions { h: h / k as f64, steps: steps * k, ..FlowOptions::default() };
        Ok(flow(sing, start, dir, &opts)?.pop().expect("non-empty"))
    };
    let (a, b, c) = (end(1)?, end(2)?, end(4)?);
    let (e1, e2) = (a.distance(&b), b.distance(&c));
    if e2 == 0.0 {
        return Err(Error::IntegrationFailure("step refinement did not change the endpoint".into()));
    }
    Ok((e1 / e2).log2())
}
