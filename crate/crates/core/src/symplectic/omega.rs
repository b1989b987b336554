use super::coords::{base_coordinates, eta_from_p, fiber_coordinates, lift_instance, Coord, FiberChart, TangentDirection};
use super::hamiltonian::hamiltonians;
use crate::connection::{assemble_normal_form, Instance, Kind, NormalForm, Theta};
use crate::error::{Error, Result};
use crate::exactalg::jet::{deriv_of, value_of};
use crate::exactalg::{rat, Jet, Mat2, MatSeries, Pos, Rational, Scalar, Series};
use crate::localform::{apparent_solution, reduce_point, LocalReduction, ReduceOptions};

type J = Jet<Rational>;

/// Which 2-form is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaMode {
    /// The residue form on a fiber; both directions must be vertical.
    Fiber,
    /// The same residue formula on the extended space.
    Extended,
}

/// First-order variation of the connection and of the formal solution at one point.
#[derive(Clone, Debug)]
struct LocalVariation {
    d_omega: MatSeries<Rational>,
    /// `δψ ψ^{-1}`
    x: MatSeries<Rational>,
}

/// All local variations of one direction, poles first, then apparent points.
#[derive(Clone, Debug)]
pub struct Variation {
    pub direction: TangentDirection,
    local: Vec<LocalVariation>,
}

fn split(m: &MatSeries<J>) -> (MatSeries<Rational>, MatSeries<Rational>) {
    (m.map(value_of), m.map(deriv_of))
}

/// `Σ_{l ≤ lmax, l ≠ n-1} c_l y^{l-n+1} / (l-n+1)`, through `trunc`.
fn integrate(c: &[Rational], n: usize, trunc: i64) -> Series<Rational> {
    let start = 1 - n as i64;
    let coeffs = c
        .iter()
        .enumerate()
        .map(|(l, v)| {
            let k = l as i64 - n as i64 + 1;
            if k == 0 {
                rat(0, 1)
            } else {
                v.clone() / rat(k, 1)
            }
        })
        .collect();
    Series::with_trunc(start, coeffs, trunc)
}

/// `Σ c_l y^{l-n}` through `trunc`.
fn laurent(c: &[Rational], n: usize, trunc: i64) -> Series<Rational> {
    Series::with_trunc(-(n as i64), c.to_vec(), trunc)
}

fn pole_variation(nf: &NormalForm<J>, i: usize, order: usize) -> Result<LocalVariation> {
    let pt = &nf.sing().points[i];
    let n = pt.order;
    let red: LocalReduction<J> = reduce_point(nf, i, &ReduceOptions { order: Some(order), sigma: vec![] })?;
    let t = order as i64 - n as i64;
    let (om_v, om_d) = split(&nf.local_matrix(&pt.pos, t)?);
    let g = &MatSeries::constant(red.framing.phi.clone(), order as i64) * &red.xi;
    let (g_v, g_d) = split(&g);
    let speed = match &pt.pos {
        Pos::Finite(c) => deriv_of(c),
        Pos::Inf => rat(0, 1),
    };
    let d_omega = &om_d - &om_v.derivative().scale(&speed);
    let dg = &g_d - &g_v.derivative().scale(&speed);
    let g_inv = g_v.inv()?;
    let diag = match (&red.theta, pt.kind) {
        (Theta::Pair { plus, minus }, _) => {
            let one = |seq: &[J]| {
                let vals: Vec<Rational> = seq.iter().map(value_of).collect();
                let ders: Vec<Rational> = seq.iter().map(deriv_of).collect();
                &integrate(&ders, n, t) - &laurent(&vals, n, t).scale(&speed)
            };
            MatSeries::diag(&one(plus), &one(minus))
        }
        (Theta::Ramified(th), Kind::Ramified) => {
            if !speed.is_zero() {
                return Err(Error::NotADeformationDirection(format!("position of ramified point {i}")));
            }
            let kk = (order - 1).min((th.len() - 1) / 2);
            let da: Vec<Rational> = (0..=kk).map(|k| deriv_of(&th[2 * k]) * rat(1, 2)).collect();
            let db: Vec<Rational> = (0..=kk).map(|k| deriv_of(&th[2 * k + 1])).collect();
            let big_a = integrate(&da, n, t);
            // Σ 2 b_k y^{k-n+1} / (2k-2n+3)
            let bt: Vec<Rational> = db
                .iter()
                .enumerate()
                .map(|(k, v)| v.clone() / rat(2 * k as i64 - 2 * n as i64 + 3, 1))
                .collect();
            let big_b = Series::with_trunc(1 - n as i64, bt, t);
            let k_mat = MatSeries::with_trunc(
                0,
                vec![
                    Mat2::new(rat(0, 1), rat(1, 1), rat(0, 1), rat(0, 1)),
                    Mat2::new(rat(0, 1), rat(0, 1), rat(1, 1), rat(0, 1)),
                ],
                // exact polynomial; keeps the product with `big_b` good through `t`
                t + n as i64,
            );
            &MatSeries::diag(&big_a, &big_a) + &k_mat.scale_series(&big_b)
        }
        _ => return Err(Error::KindMismatch(format!("point {i}"))),
    };
    let x = &(&dg * &g_inv) - &(&(&g_v * &diag) * &g_inv);
    Ok(LocalVariation { d_omega, x })
}

fn apparent_variation(nf: &NormalForm<J>, j: usize, order: usize) -> Result<LocalVariation> {
    let q = nf.darboux()[j].q.clone();
    let sol = apparent_solution(nf, j, order)?;
    let t = order as i64 - 1;
    let (om_v, om_d) = split(&nf.local_matrix(&Pos::Finite(q.clone()), t)?);
    let g = &MatSeries::constant(sol.phi.clone(), order as i64) * &sol.xi;
    let (g_v, g_d) = split(&g);
    let speed = deriv_of(&q);
    let d_omega = &om_d - &om_v.derivative().scale(&speed);
    let dg = &g_d - &g_v.derivative().scale(&speed);
    let g_inv = g_v.inv()?;
    let z = rat(0, 1);
    let lam = MatSeries::with_trunc(-1, vec![Mat2::diag(z.clone(), -speed)], t);
    let x = &(&dg * &g_inv) + &(&(&g_v * &lam) * &g_inv);
    Ok(LocalVariation { d_omega, x })
}

/// Variations of `Ω` and `ψ` along `dir` at every pole and apparent point.
pub fn variation(inst: &Instance<Rational>, dir: &TangentDirection) -> Result<Variation> {
    let lifted = lift_instance(inst, dir)?;
    let nf = assemble_normal_form(&lifted)?;
    let mut local = Vec::new();
    for (i, pt) in inst.sing.points.iter().enumerate() {
        local.push(pole_variation(&nf, i, 2 * pt.order + 2)?);
    }
    for j in 0..inst.darboux.len() {
        local.push(apparent_variation(&nf, j, 4)?);
    }
    Ok(Variation { direction: dir.clone(), local })
}

/// `½ Σ res Tr(δ_1Ω · X_2 - δ_2Ω · X_1)` over all poles and apparent points.
pub fn pair_variations(a: &Variation, b: &Variation) -> Result<Rational> {
    let mut acc = rat(0, 1);
    for (u, v) in a.local.iter().zip(&b.local) {
        let s = &(&u.d_omega * &v.x) - &(&v.d_omega * &u.x);
        acc += s.trace().residue()?;
    }
    Ok(acc * rat(1, 2))
}

fn check_mode(mode: OmegaMode, dirs: &[&TangentDirection]) -> Result<()> {
    if mode == OmegaMode::Fiber && dirs.iter().any(|d| !d.is_vertical()) {
        return Err(Error::NotADeformationDirection("the fiber form takes vertical directions only".into()));
    }
    Ok(())
}

/// The residue 2-form on a pair of tangent directions, exactly.
pub fn krichever_omega(
    inst: &Instance<Rational>,
    d1: &TangentDirection,
    d2: &TangentDirection,
    mode: OmegaMode,
) -> Result<Rational> {
    check_mode(mode, &[d1, d2])?;
    pair_variations(&variation(inst, d1)?, &variation(inst, d2)?)
}

/// The residue 2-form on all pairs of the given directions.
pub fn krichever_matrix(inst: &Instance<Rational>, dirs: &[TangentDirection], mode: OmegaMode) -> Result<Vec<Vec<Rational>>> {
    check_mode(mode, &dirs.iter().collect::<Vec<_>>())?;
    let vars = dirs.iter().map(|d| variation(inst, d)).collect::<Result<Vec<_>>>()?;
    antisymmetric(vars.len(), |a, b| pair_variations(&vars[a], &vars[b]))
}

fn antisymmetric(k: usize, f: impl Fn(usize, usize) -> Result<Rational>) -> Result<Vec<Vec<Rational>>> {
    let mut m = vec![vec![rat(0, 1); k]; k];
    for a in 0..k {
        for b in a + 1..k {
            let v = f(a, b)?;
            m[b][a] = -v.clone();
            m[a][b] = v;
        }
    }
    Ok(m)
}

/// Differentials of the coordinates entering the canonical form along one direction:
/// `dq_j, dη_j`, and `dc, dH_c` for every base coordinate `c`.
#[derive(Clone, Debug)]
pub struct CanonicalDifferentials {
    pub dq: Vec<Rational>,
    pub deta: Vec<Rational>,
    pub dbase: Vec<Rational>,
    pub dh: Vec<Rational>,
}

/// Evaluates every differential in `ω̂′` along `dir` by one jet lift.
pub fn canonical_differentials(inst: &Instance<Rational>, dir: &TangentDirection) -> Result<CanonicalDifferentials> {
    let base = base_coordinates(&inst.sing);
    let lifted = lift_instance(inst, dir)?;
    let eta = eta_from_p(&lifted.sing, &lifted.darboux)?;
    let nf = assemble_normal_form(&lifted)?;
    let h = hamiltonians(&nf, &base)?;
    Ok(CanonicalDifferentials {
        dq: lifted.darboux.iter().map(|d| deriv_of(&d.q)).collect(),
        deta: eta.iter().map(deriv_of).collect(),
        dbase: base.iter().map(|c| dir.weight(c)).collect(),
        dh: h.iter().map(deriv_of).collect(),
    })
}

fn canonical_pair(a: &CanonicalDifferentials, b: &CanonicalDifferentials) -> Rational {
    let wedge = |x: &[Rational], y: &[Rational], u: &[Rational], v: &[Rational]| {
        x.iter().zip(y).zip(u.iter().zip(v)).fold(rat(0, 1), |acc, ((x1, y1), (x2, y2))| {
            acc + x1.clone() * y2.clone() - x2.clone() * y1.clone()
        })
    };
    // (α∧β)(δ1, δ2) = α(δ1)β(δ2) - α(δ2)β(δ1)
    wedge(&a.deta, &a.dq, &b.deta, &b.dq) + wedge(&a.dh, &a.dbase, &b.dh, &b.dbase)
}

/// `ω̂′ = Σ dη_j∧dq_j + Σ dH_θ∧dθ + Σ dH_t∧dt` on a pair of directions.
pub fn canonical_omega_hat(inst: &Instance<Rational>, d1: &TangentDirection, d2: &TangentDirection) -> Result<Rational> {
    Ok(canonical_pair(&canonical_differentials(inst, d1)?, &canonical_differentials(inst, d2)?))
}

/// `ω̂′` on all pairs of the given directions.
pub fn canonical_matrix(inst: &Instance<Rational>, dirs: &[TangentDirection]) -> Result<Vec<Vec<Rational>>> {
    let diffs = dirs.iter().map(|d| canonical_differentials(inst, d)).collect::<Result<Vec<_>>>()?;
    antisymmetric(diffs.len(), |a, b| Ok(canonical_pair(&diffs[a], &diffs[b])))
}

/// Every coordinate vector field of the chart: fiber pairs first, then the base.
pub fn coordinate_basis(inst: &Instance<Rational>, chart: FiberChart) -> Vec<(Coord, TangentDirection)> {
    let mut coords = fiber_coordinates(inst.darboux.len(), chart);
    coords.extend(base_coordinates(&inst.sing));
    coords.into_iter().map(|c| (c, TangentDirection::basis_in(chart, c))).collect()
}
