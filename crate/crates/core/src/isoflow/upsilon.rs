use super::field::{state_of, vector_field, DeformationDirection};
use crate::connection::{assemble_normal_form, to_e1, E1Connection, Instance, Kind};
use crate::error::{Error, Result};
use crate::exactalg::jet::{deriv_of, value_of};
use crate::exactalg::{residue_at, solve_linear, Pos, Poly, RatFunc, Rational, Scalar};
use crate::symplectic::{lift_instance, Coord, FiberChart, TangentDirection};

type PMat = [[Poly<Rational>; 2]; 2];

fn pmat_map(f: impl Fn(usize, usize) -> Poly<Rational>) -> PMat {
    [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]]
}

fn pmat_mul(a: &PMat, b: &PMat) -> PMat {
    pmat_map(|i, j| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]))
}

/// Exact first variation of `Ω^(1) = M/P` along a tangent direction.
#[derive(Clone, Debug)]
pub struct DeltaOmega {
    pub direction: TangentDirection,
    /// The connection at the base point.
    pub conn: E1Connection<Rational>,
    /// `δΩ^(1) = numer / P²`.
    pub numer: PMat,
    /// Finite pole positions at the base point.
    pub poles: Vec<Rational>,
}

impl DeltaOmega {
    pub fn entry(&self, i: usize, j: usize) -> Result<RatFunc<Rational>> {
        RatFunc::new(self.numer[i][j].clone(), &self.conn.p * &self.conn.p)
    }

    pub fn trace(&self) -> Result<RatFunc<Rational>> {
        RatFunc::new(&self.numer[0][0] + &self.numer[1][1], &self.conn.p * &self.conn.p)
    }

    /// Sum of the residues of `Tr δΩ^(1)` over all finite poles and infinity.
    pub fn trace_residue_sum(&self) -> Result<Rational> {
        let tr = self.trace()?;
        let mut acc = <Rational as Scalar>::zero();
        for r in &self.poles {
            acc = acc + residue_at(&tr, &Pos::Finite(r.clone()))?;
        }
        Ok(acc + residue_at(&tr, &Pos::Inf)?)
    }

    pub fn is_zero(&self) -> bool {
        self.numer.iter().flatten().all(|p| p.is_zero())
    }
}

/// `δΩ^(1)` along an arbitrary tangent direction, through jets.
pub fn delta_omega_along(inst: &Instance<Rational>, dir: &TangentDirection) -> Result<DeltaOmega> {
    let lifted = lift_instance(inst, dir)?;
    let e1 = to_e1(&assemble_normal_form(&lifted)?)?;
    let conn = e1.map(value_of);
    let dm = e1.map(deriv_of);
    let (p, dp) = (&conn.p, &dm.p);
    let numer = pmat_map(|i, j| &(&dm.m[i][j] * p) - &(&conn.m[i][j] * dp));
    let poles = inst.sing.finite().map(|(_, t, _)| t.clone()).collect();
    Ok(DeltaOmega { direction: dir.clone(), conn, numer, poles })
}

/// The isomonodromic tangent vector of `dir`: unit speed in the base
/// coordinate plus the Hamiltonian velocity in `(q, η)`.
pub fn isomonodromic_direction(inst: &Instance<Rational>, dir: DeformationDirection) -> Result<TangentDirection> {
    let (q, eta) = state_of(inst)?;
    let v = vector_field(&inst.sing, &q, &eta, dir)?;
    let mut weights = vec![(dir.coord(), <Rational as Scalar>::one())];
    for (j, (a, b)) in v.dq.into_iter().zip(v.deta).enumerate() {
        weights.push((Coord::Q(j), a));
        weights.push((Coord::Eta(j), b));
    }
    Ok(TangentDirection { chart: FiberChart::Eta, weights })
}

/// `δΩ^(1)` along the isomonodromic vector field of `dir`.
pub fn delta_omega(inst: &Instance<Rational>, dir: DeformationDirection) -> Result<DeltaOmega> {
    delta_omega_along(inst, &isomonodromic_direction(inst, dir)?)
}

/// A solution `Υ = N/B` of `δΩ = dΥ + [Ω, Υ]`.
#[derive(Clone, Debug)]
pub struct Upsilon {
    pub numer: PMat,
    pub denom: Poly<Rational>,
    /// Number of unknown coefficients in the ansatz that succeeded.
    pub unknowns: usize,
    /// Dimension of the solution space of the homogeneous system.
    pub nullity: usize,
    /// 0 for the prescribed pole budget, 1 after the single enlargement.
    pub budget_increase: usize,
}

impl Upsilon {
    pub fn entry(&self, i: usize, j: usize) -> Result<RatFunc<Rational>> {
        RatFunc::new(self.numer[i][j].clone(), self.denom.clone())
    }
}

/// `P²(N'B - NB') + PB[M, N]`, the numerator of `dΥ + [Ω, Υ]` over `P²B²`.
pub fn apply_operator(conn: &E1Connection<Rational>, n: &PMat, b: &Poly<Rational>) -> PMat {
    let p2 = &conn.p * &conn.p;
    let db = b.derivative();
    let pb = &conn.p * b;
    let mn = pmat_mul(&conn.m, n);
    let nm = pmat_mul(n, &conn.m);
    pmat_map(|i, j| {
        let d = &(&n[i][j].derivative() * b) - &(&n[i][j] * &db);
        &(&p2 * &d) + &(&pb * &(&mn[i][j] - &nm[i][j]))
    })
}

/// Pole budget of the ansatz: the denominator and the degree bound of each numerator entry.
fn ansatz(conn_sing: &crate::connection::SingularityData<Rational>, moving: &[usize], extra: usize) -> Result<(Poly<Rational>, [[i64; 2]; 2])> {
    let mut b = Poly::one();
    for (i, t, n) in conn_sing.finite() {
        let k = if moving.contains(&i) { n } else { n - 1 } + extra;
        b = &b * &Poly::linear(t).pow(k as u32);
    }
    let top = b.degree().max(0) + (conn_sing.inf()?.order + extra) as i64;
    // G_1^{-1} Υ G_1 has pole order ≤ n_∞ - 1 at infinity
    let d = [[top - 1, top - 2], [top, top - 1]];
    Ok((b, d))
}

fn flatten(m: &PMat, width: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(4 * width);
    for row in m {
        for p in row {
            out.extend((0..width).map(|k| p.coeff(k)));
        }
    }
    out
}

fn try_solve(delta: &DeltaOmega, moving: &[usize], extra: usize, sing: &crate::connection::SingularityData<Rational>) -> Result<Upsilon> {
    let conn = &delta.conn;
    let (b, deg) = ansatz(sing, moving, extra)?;
    let mut cols: Vec<(usize, usize, usize)> = Vec::new();
    for (i, row) in deg.iter().enumerate() {
        for (j, d) in row.iter().enumerate() {
            cols.extend((0..=*d).map(|k| (i, j, k as usize)));
        }
    }
    let b2 = &b * &b;
    let rhs_m = pmat_map(|i, j| &b2 * &delta.numer[i][j]);
    let images: Vec<PMat> = cols
        .iter()
        .map(|&(i, j, k)| {
            let unit = pmat_map(|a, c| if (a, c) == (i, j) { Poly::monomial(<Rational as Scalar>::one(), k) } else { Poly::zero() });
            apply_operator(conn, &unit, &b)
        })
        .collect();
    let width = images
        .iter()
        .chain(std::iter::once(&rhs_m))
        .flatten()
        .flatten()
        .map(|p| p.degree() + 1)
        .max()
        .unwrap_or(0)
        .max(0) as usize;
    let flat: Vec<Vec<Rational>> = images.iter().map(|m| flatten(m, width)).collect();
    let rhs = flatten(&rhs_m, width);
    let a: Vec<Vec<Rational>> = (0..rhs.len()).map(|r| flat.iter().map(|c| c[r].clone()).collect()).collect();
    let sol = solve_linear(&a, &rhs)?;
    let mut numer = pmat_map(|_, _| Poly::zero());
    for (&(i, j, k), x) in cols.iter().zip(&sol.x) {
        numer[i][j] = &numer[i][j] + &Poly::monomial(x.clone(), k);
    }
    let up = Upsilon { numer, denom: b, unknowns: cols.len(), nullity: sol.nullity, budget_increase: extra };
    if !residual(delta, &up).iter().flatten().all(|p| p.is_zero()) {
        return Err(Error::InternalInconsistency("Υ solve left a nonzero residual".into()));
    }
    Ok(up)
}

/// `P²B² (dΥ + [Ω, Υ] - δΩ)` as polynomials; identically zero for a solution.
pub fn residual(delta: &DeltaOmega, up: &Upsilon) -> PMat {
    let lhs = apply_operator(&delta.conn, &up.numer, &up.denom);
    let b2 = &up.denom * &up.denom;
    pmat_map(|i, j| &lhs[i][j] - &(&b2 * &delta.numer[i][j]))
}

/// Solves `δΩ = dΥ + [Ω, Υ]` for a rational `Υ` regular off the poles.
///
/// The prescribed budget allows poles of order `n_i - 1` at `t_i` (`n_i` at
/// points whose position moves) and order `n_∞ - 1` at infinity on `E_1`;
/// on `NoSolution` every budget is raised by one and the solve retried once.
pub fn solve_upsilon(inst: &Instance<Rational>, delta: &DeltaOmega) -> Result<Upsilon> {
    let sing = &inst.sing;
    let moving: Vec<usize> = (0..sing.points.len()).filter(|&i| !Scalar::is_zero(&delta.direction.point_speed(i))).collect();
    for &i in &moving {
        if sing.points[i].kind == Kind::Ramified {
            return Err(Error::NotADeformationDirection(format!("position of ramified point {i}")));
        }
    }
    match try_solve(delta, &moving, 0, sing) {
        Err(Error::NoSolution { .. }) => try_solve(delta, &moving, 1, sing),
        other => other,
    }
}

/// Certificate for one admissible direction.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub direction: DeformationDirection,
    pub result: std::result::Result<Upsilon, Error>,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.result.is_ok()
    }
}

/// Runs the Υ solve for every admissible direction of the instance, in parallel.
pub fn certify(inst: &Instance<Rational>) -> Vec<Certificate> {
    use rayon::prelude::*;
    DeformationDirection::all(&inst.sing)
        .into_par_iter()
        .map(|direction| Certificate {
            direction,
            result: delta_omega(inst, direction).and_then(|d| solve_upsilon(inst, &d)),
        })
        .collect()
}
