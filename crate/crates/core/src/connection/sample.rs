//! Seeded random instances and the two reference families.

use rand::Rng;

use super::data::{fuchs_sum, DarbouxPoint, Instance, Kind, SingularPoint, SingularityData, Theta};
use super::normal::{build_cd, solve_tildec};
use crate::error::{Error, Result};
use crate::exactalg::{rat, Pos, Rational, Scalar};

/// Uniform rational with `|num| ≤ h` and `1 ≤ den ≤ h`.
pub fn small_rational<R: Rng>(rng: &mut R, h: i64) -> Rational {
    let n = rng.gen_range(-h..=h);
    let d = rng.gen_range(1..=h);
    rat(n, d)
}

/// Same, but never zero.
pub fn small_nonzero<R: Rng>(rng: &mut R, h: i64) -> Rational {
    loop {
        let r = small_rational(rng, h);
        if !Scalar::is_zero(&r) {
            return r;
        }
    }
}

fn non_integer<R: Rng>(rng: &mut R, h: i64) -> Rational {
    loop {
        let r = small_rational(rng, h);
        if !r.is_integer() {
            return r;
        }
    }
}

/// Position, kind and order of one pole in a layout.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSpec {
    pub pos: Pos<Rational>,
    pub kind: Kind,
    pub order: usize,
}

/// Random spectral data for a layout, the Fuchs relation enforced exactly.
pub fn random_singularity_data<R: Rng>(rng: &mut R, layout: &[PointSpec], h: i64) -> Result<SingularityData<Rational>> {
    // the residue of one non-regular point absorbs the Fuchs relation when possible
    let adjust = layout.iter().rposition(|p| p.kind != Kind::Regular);
    for _ in 0..1000 {
        let mut points = Vec::new();
        for spec in layout {
            let n = spec.order;
            let theta = match spec.kind {
                Kind::Regular => {
                    let minus = small_rational(rng, h);
                    let plus = &minus + non_integer(rng, h);
                    Theta::Pair { plus: vec![plus], minus: vec![minus] }
                }
                Kind::Unramified => {
                    let mut plus: Vec<Rational> = (0..n).map(|_| small_rational(rng, h)).collect();
                    let minus: Vec<Rational> = (0..n).map(|_| small_rational(rng, h)).collect();
                    plus[0] = &minus[0] + small_nonzero(rng, h);
                    Theta::Pair { plus, minus }
                }
                Kind::Ramified => {
                    let mut v: Vec<Rational> = (0..2 * n - 1).map(|_| small_rational(rng, h)).collect();
                    v[1] = small_nonzero(rng, h);
                    Theta::Ramified(v)
                }
            };
            points.push(SingularPoint { pos: spec.pos.clone(), order: n, kind: spec.kind, theta });
        }
        let mut sing = SingularityData { points };
        let defect = fuchs_sum(&sing)? + rat(1, 1);
        match adjust {
            Some(i) => {
                let pt = &mut sing.points[i];
                let n = pt.order;
                match &mut pt.theta {
                    Theta::Pair { minus, .. } => minus[n - 1] = &minus[n - 1] - &defect,
                    Theta::Ramified(v) => v[2 * n - 2] = &v[2 * n - 2] - &defect,
                }
                return Ok(sing);
            }
            None => {
                // all regular: shift one minus residue, keep non-resonance
                let pt = &mut sing.points[0];
                if let Theta::Pair { plus, minus } = &mut pt.theta {
                    minus[0] = &minus[0] - &defect;
                    if !(&plus[0] - &minus[0]).is_integer() {
                        return Ok(sing);
                    }
                }
            }
        }
    }
    Err(Error::Validation("could not sample non-resonant data".into()))
}

/// Random Darboux points: distinct `q_j` off the divisor, arbitrary `p_j`,
/// resampled until the apparent conditions are solvable.
pub fn random_darboux<R: Rng>(rng: &mut R, sing: &SingularityData<Rational>, h: i64) -> Result<Vec<DarbouxPoint<Rational>>> {
    let m = sing.n().checked_sub(3).ok_or_else(|| Error::Validation("n < 3".into()))?;
    let cd = build_cd(sing)?;
    for _ in 0..200 {
        let mut qs: Vec<Rational> = Vec::new();
        while qs.len() < m {
            let q = small_rational(rng, h);
            let clash = qs.contains(&q) || sing.points.iter().any(|p| p.pos == Pos::Finite(q.clone()));
            if !clash {
                qs.push(q);
            }
        }
        let darboux: Vec<_> = qs.into_iter().map(|q| DarbouxPoint { q, p: small_rational(rng, h) }).collect();
        let inst = Instance { sing: sing.clone(), darboux: darboux.clone() };
        match solve_tildec(&inst, &cd) {
            Ok(_) => return Ok(darboux),
            Err(Error::DegenerateConfiguration(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Validation("no generic Darboux configuration found".into()))
}

pub fn random_instance<R: Rng>(rng: &mut R, layout: &[PointSpec], h: i64) -> Result<Instance<Rational>> {
    let sing = random_singularity_data(rng, layout, h)?;
    let darboux = random_darboux(rng, &sing, h)?;
    Ok(Instance { sing, darboux })
}

/// A random layout of total degree `n` with poles at `0`, `1`, `∞` and
/// further finite positions as needed.
pub fn random_layout<R: Rng>(rng: &mut R, n: usize) -> Vec<PointSpec> {
    loop {
        let mut rest = n;
        let mut specs = Vec::new();
        let mut used: Vec<Rational> = Vec::new();
        let mut idx = 0;
        while rest > 0 {
            let kind = match rng.gen_range(0..3) {
                0 => Kind::Regular,
                1 => Kind::Unramified,
                _ => Kind::Ramified,
            };
            let order = if kind == Kind::Regular || rest == 1 { 1 } else { rng.gen_range(2..=rest.min(3)) };
            let kind = if order == 1 { Kind::Regular } else { kind };
            let pos = match idx {
                0 => Pos::Inf,
                1 => Pos::Finite(rat(0, 1)),
                2 => Pos::Finite(rat(1, 1)),
                _ => loop {
                    let t = small_rational(rng, 9);
                    if t != rat(0, 1) && t != rat(1, 1) && !used.contains(&t) {
                        break Pos::Finite(t);
                    }
                },
            };
            if let Pos::Finite(t) = &pos {
                used.push(t.clone());
            }
            specs.push(PointSpec { pos, kind, order });
            rest -= order;
            idx += 1;
        }
        if specs.len() >= 2 {
            return specs;
        }
    }
}

fn pair<S: Scalar>(plus: Vec<S>, minus: Vec<S>) -> Theta<S> {
    Theta::Pair { plus, minus }
}

/// Three unramified double poles at `0`, `1`, `∞` (`n = 6`).
///
/// `theta[i] = [θ⁺_0, θ⁻_0, θ⁺_1, θ⁻_1]` for the points `0, 1, ∞`; the last
/// `θ⁻_1` at infinity is overwritten to satisfy the Fuchs relation.
pub fn double_poles_instance<S: Scalar>(theta: [[S; 4]; 3], darboux: [(S, S); 3]) -> Instance<S> {
    let mut th = theta;
    let s = th[0][2].clone() + th[0][3].clone() + th[1][2].clone() + th[1][3].clone() + th[2][2].clone();
    th[2][3] = -S::one() - s;
    let positions = [Pos::Finite(S::zero()), Pos::Finite(S::one()), Pos::Inf];
    let points = th
        .iter()
        .zip(positions)
        .map(|(t, pos)| SingularPoint {
            pos,
            order: 2,
            kind: Kind::Unramified,
            theta: pair(vec![t[0].clone(), t[2].clone()], vec![t[1].clone(), t[3].clone()]),
        })
        .collect();
    Instance {
        sing: SingularityData { points },
        darboux: darboux.into_iter().map(|(q, p)| DarbouxPoint { q, p }).collect(),
    }
}

/// A single ramified pole of order five at infinity with times `t_1, t_2`
/// (the `H(9/2)` family): `θ = (0, 6, 0, 0, 0, 3t_1, 0, t_2, -1/2)`.
pub fn ramified_quintic_instance<S: Scalar>(t1: S, t2: S, darboux: [(S, S); 2]) -> Instance<S> {
    let z = S::zero;
    let theta = vec![
        z(),
        S::from_int(6),
        z(),
        z(),
        z(),
        S::from_int(3) * t1,
        z(),
        t2,
        S::from_rational(&rat(-1, 2)),
    ];
    let points = vec![SingularPoint { pos: Pos::Inf, order: 5, kind: Kind::Ramified, theta: Theta::Ramified(theta) }];
    Instance {
        sing: SingularityData { points },
        darboux: darboux.into_iter().map(|(q, p)| DarbouxPoint { q, p }).collect(),
    }
}
