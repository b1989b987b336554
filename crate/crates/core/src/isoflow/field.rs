use std::fmt;
use std::str::FromStr;

use crate::connection::{assemble_normal_form, DarbouxPoint, Instance, Kind, Sign, SingularityData};
use crate::error::{Error, Result};
use crate::exactalg::{Jet, Pos, Rational, Scalar};
use crate::symplectic::{eta_from_p, hamiltonians, p_from_eta, Coord};

/// An admissible isomonodromic deformation direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeformationDirection {
    ThetaUn { point: usize, index: usize, sign: Sign },
    ThetaRa { point: usize, index: usize },
    Position(usize),
}

impl DeformationDirection {
    /// The base coordinate driven with unit speed.
    pub fn coord(&self) -> Coord {
        match *self {
            DeformationDirection::ThetaUn { point, index, sign } => Coord::ThetaUn { point, sign, index },
            DeformationDirection::ThetaRa { point, index } => Coord::ThetaRa { point, index },
            DeformationDirection::Position(i) => Coord::T(i),
        }
    }

    pub fn from_coord(c: Coord) -> Result<Self> {
        match c {
            Coord::ThetaUn { point, sign, index } => Ok(DeformationDirection::ThetaUn { point, index, sign }),
            Coord::ThetaRa { point, index } => Ok(DeformationDirection::ThetaRa { point, index }),
            Coord::T(i) => Ok(DeformationDirection::Position(i)),
            _ => Err(Error::NotADeformationDirection(format!("{c} is a fiber coordinate"))),
        }
    }

    /// Every admissible direction of the singularity data.
    pub fn all(sing: &SingularityData<Rational>) -> Vec<Self> {
        crate::symplectic::base_coordinates(sing)
            .into_iter()
            .filter_map(|c| Self::from_coord(c).ok())
            .collect()
    }
}

impl fmt::Display for DeformationDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeformationDirection::ThetaUn { point, index, sign } => {
                write!(f, "theta_un:{point}:{index}:{}", sign.symbol())
            }
            DeformationDirection::ThetaRa { point, index } => write!(f, "theta_ra:{point}:{index}"),
            DeformationDirection::Position(i) => write!(f, "t:{i}"),
        }
    }
}

impl FromStr for DeformationDirection {
    type Err = Error;

    /// `theta_un:i:l:+`, `theta_un:i:l:-`, `theta_ra:i:l'` or `t:i`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |k: usize| -> Result<usize> {
            parts.get(k).and_then(|v| v.parse().ok()).ok_or_else(|| Error::Parse(format!("direction {s:?}")))
        };
        match (parts.first().copied(), parts.len()) {
            (Some("theta_un"), 4) => {
                let sign = match parts[3] {
                    "+" => Sign::Plus,
                    "-" => Sign::Minus,
                    _ => return Err(Error::Parse(format!("direction {s:?}: sign must be + or -"))),
                };
                Ok(DeformationDirection::ThetaUn { point: num(1)?, index: num(2)?, sign })
            }
            (Some("theta_ra"), 3) => Ok(DeformationDirection::ThetaRa { point: num(1)?, index: num(2)? }),
            (Some("t"), 2) => Ok(DeformationDirection::Position(num(1)?)),
            _ => Err(Error::Parse(format!("direction {s:?}"))),
        }
    }
}

/// Rejects frozen or malformed directions for the given data.
pub fn check_deformation<S: Scalar>(sing: &SingularityData<S>, dir: DeformationDirection) -> Result<()> {
    let frozen = |why: &str| Err(Error::NotADeformationDirection(format!("{dir}: {why}")));
    let i = match dir {
        DeformationDirection::ThetaUn { point, .. } | DeformationDirection::ThetaRa { point, .. } => point,
        DeformationDirection::Position(i) => i,
    };
    let pt = sing.points.get(i).ok_or_else(|| Error::BadIndex(format!("point {i}")))?;
    let n = pt.order;
    match dir {
        DeformationDirection::ThetaUn { index, .. } => {
            if pt.kind == Kind::Ramified {
                return frozen("point is ramified");
            }
            if index + 2 > n {
                return frozen("residue or beyond the polar part");
            }
        }
        DeformationDirection::ThetaRa { index, .. } => {
            if pt.kind != Kind::Ramified {
                return frozen("point is not ramified");
            }
            if index + 3 > 2 * n {
                return frozen("residue or beyond the polar part");
            }
        }
        DeformationDirection::Position(_) => {
            if pt.kind == Kind::Ramified {
                return frozen("ramified positions are fixed");
            }
            match &pt.pos {
                Pos::Inf => return frozen("infinity is fixed"),
                Pos::Finite(t) if t.is_zero() || (t.clone() - S::one()).is_zero() => {
                    return frozen("0 and 1 are fixed");
                }
                _ => {}
            }
        }
    }
    Ok(())
}

/// Velocity of the Hamiltonian system: `q̇ = -∂H/∂η`, `η̇ = ∂H/∂q`.
#[derive(Clone, Debug, PartialEq)]
pub struct Velocity<S> {
    pub dq: Vec<S>,
    pub deta: Vec<S>,
}

enum Seed {
    None,
    Q(usize),
    Eta(usize),
}

fn hamiltonian_seeded<S: Scalar>(
    sing: &SingularityData<S>,
    q: &[S],
    eta: &[S],
    dir: DeformationDirection,
    seed: Seed,
) -> Result<Jet<S>> {
    let js = sing.map(|v| Jet::constant(v.clone()));
    let mut jq: Vec<Jet<S>> = q.iter().map(|v| Jet::constant(v.clone())).collect();
    let mut je: Vec<Jet<S>> = eta.iter().map(|v| Jet::constant(v.clone())).collect();
    match seed {
        Seed::Q(j) => jq[j] = Jet::variable(q[j].clone()),
        Seed::Eta(j) => je[j] = Jet::variable(eta[j].clone()),
        Seed::None => {}
    }
    let p = p_from_eta(&js, &jq, &je)?;
    let inst = Instance { sing: js, darboux: jq.into_iter().zip(p).map(|(q, p)| DarbouxPoint { q, p }).collect() };
    let nf = assemble_normal_form(&inst)?;
    Ok(hamiltonians(&nf, &[dir.coord()])?.remove(0))
}

/// The Hamiltonian of `dir` at a state `(q, η)`.
pub fn hamiltonian<S: Scalar>(sing: &SingularityData<S>, q: &[S], eta: &[S], dir: DeformationDirection) -> Result<S> {
    check_deformation(sing, dir)?;
    Ok(hamiltonian_seeded(sing, q, eta, dir, Seed::None)?.v)
}

/// The isomonodromic vector field of `dir` at `(q, η)`; the base coordinate
/// of `dir` moves with unit speed. Exact over rationals, approximate over floats.
pub fn vector_field<S: Scalar>(
    sing: &SingularityData<S>,
    q: &[S],
    eta: &[S],
    dir: DeformationDirection,
) -> Result<Velocity<S>> {
    check_deformation(sing, dir)?;
    if q.len() != eta.len() {
        return Err(Error::Validation("q and eta have different lengths".into()));
    }
    let mut dq = Vec::with_capacity(q.len());
    let mut deta = Vec::with_capacity(q.len());
    for j in 0..q.len() {
        let h_eta = hamiltonian_seeded(sing, q, eta, dir, Seed::Eta(j))?.d;
        let h_q = hamiltonian_seeded(sing, q, eta, dir, Seed::Q(j))?.d;
        dq.push(-h_eta);
        deta.push(h_q);
    }
    Ok(Velocity { dq, deta })
}

/// `(q, η)` of an instance.
pub fn state_of<S: Scalar>(inst: &Instance<S>) -> Result<(Vec<S>, Vec<S>)> {
    let eta = eta_from_p(&inst.sing, &inst.darboux)?;
    Ok((inst.darboux.iter().map(|d| d.q.clone()).collect(), eta))
}
