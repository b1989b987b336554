use std::fmt;

use crate::connection::normal::p_poly;
use crate::connection::{build_cd, DarbouxPoint, Instance, Kind, Sign, SingularityData, Theta};
use crate::error::{Error, Result};
use crate::exactalg::{jet_lift, Construction, Jet, Pos, Rational, Scalar};

/// A coordinate of the extended moduli space.
///
/// Point indices refer to `SingularityData::points`, apparent indices to
/// `Instance::darboux`; both are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Q(usize),
    P(usize),
    Eta(usize),
    T(usize),
    ThetaUn { point: usize, sign: Sign, index: usize },
    ThetaRa { point: usize, index: usize },
}

impl Coord {
    pub fn is_fiber(&self) -> bool {
        matches!(self, Coord::Q(_) | Coord::P(_) | Coord::Eta(_))
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Q(j) => write!(f, "q{j}"),
            Coord::P(j) => write!(f, "p{j}"),
            Coord::Eta(j) => write!(f, "eta{j}"),
            Coord::T(i) => write!(f, "t{i}"),
            Coord::ThetaUn { point, sign, index } => write!(f, "theta_un:{point}:{index}:{}", sign.symbol()),
            Coord::ThetaRa { point, index } => write!(f, "theta_ra:{point}:{index}"),
        }
    }
}

/// Which momentum is held fixed by base directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiberChart {
    P,
    Eta,
}

/// A tangent vector: rational weights on coordinates of one chart.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentDirection {
    pub chart: FiberChart,
    pub weights: Vec<(Coord, Rational)>,
}

impl TangentDirection {
    /// The coordinate vector field `∂/∂c`; the chart follows the momentum kind of `c`.
    pub fn basis(c: Coord) -> Self {
        let chart = if matches!(c, Coord::Eta(_)) { FiberChart::Eta } else { FiberChart::P };
        TangentDirection { chart, weights: vec![(c, rone())] }
    }

    pub fn basis_in(chart: FiberChart, c: Coord) -> Self {
        TangentDirection { chart, weights: vec![(c, rone())] }
    }

    pub fn weight(&self, c: &Coord) -> Rational {
        self.weights.iter().filter(|(k, _)| k == c).fold(rzero(), |a, (_, w)| a + w.clone())
    }

    pub fn is_vertical(&self) -> bool {
        self.weights.iter().all(|(c, w)| c.is_fiber() || Scalar::is_zero(w))
    }

    /// Moving-center speed `δt_i` of point `i`.
    pub fn point_speed(&self, i: usize) -> Rational {
        self.weight(&Coord::T(i))
    }
}

fn rone() -> Rational {
    <Rational as Scalar>::one()
}

fn rzero() -> Rational {
    <Rational as Scalar>::zero()
}

fn is_fixed_position(pos: &Pos<Rational>) -> bool {
    match pos {
        Pos::Inf => true,
        Pos::Finite(t) => Scalar::is_zero(t) || *t == rone(),
    }
}

/// Base coordinates that may be deformed: non-residual θ's and positions of
/// finite regular or unramified points other than `0` and `1`.
pub fn base_coordinates(sing: &SingularityData<Rational>) -> Vec<Coord> {
    let mut out = Vec::new();
    for (i, pt) in sing.points.iter().enumerate() {
        let n = pt.order;
        match pt.kind {
            Kind::Ramified => {
                out.extend((0..2 * n - 2).map(|index| Coord::ThetaRa { point: i, index }));
            }
            _ => {
                for sign in [Sign::Plus, Sign::Minus] {
                    out.extend((0..n - 1).map(|index| Coord::ThetaUn { point: i, sign, index }));
                }
                if !is_fixed_position(&pt.pos) {
                    out.push(Coord::T(i));
                }
            }
        }
    }
    out
}

/// `q_j` and the chosen momentum for every apparent point.
pub fn fiber_coordinates(m: usize, chart: FiberChart) -> Vec<Coord> {
    let mut out = Vec::with_capacity(2 * m);
    for j in 0..m {
        out.push(Coord::Q(j));
        out.push(match chart {
            FiberChart::P => Coord::P(j),
            FiberChart::Eta => Coord::Eta(j),
        });
    }
    out
}

/// Checks that every weighted coordinate exists, is deformable and belongs to the chart.
pub fn check_direction(inst: &Instance<Rational>, dir: &TangentDirection) -> Result<()> {
    let m = inst.darboux.len();
    let base = base_coordinates(&inst.sing);
    for (c, _) in &dir.weights {
        match c {
            Coord::Q(j) | Coord::P(j) | Coord::Eta(j) if *j >= m => {
                return Err(Error::BadIndex(format!("apparent point {j}")));
            }
            Coord::P(_) if dir.chart == FiberChart::Eta => {
                return Err(Error::UnknownDirection(format!("{c} in the eta chart")));
            }
            Coord::Eta(_) if dir.chart == FiberChart::P => {
                return Err(Error::UnknownDirection(format!("{c} in the p chart")));
            }
            Coord::Q(_) | Coord::P(_) | Coord::Eta(_) => {}
            Coord::T(i) | Coord::ThetaUn { point: i, .. } | Coord::ThetaRa { point: i, .. } => {
                let pt = inst.sing.points.get(*i).ok_or_else(|| Error::BadIndex(format!("point {i}")))?;
                let kind_ok = match c {
                    Coord::ThetaRa { .. } => pt.kind == Kind::Ramified,
                    _ => pt.kind != Kind::Ramified,
                };
                if !kind_ok {
                    return Err(Error::KindMismatch(format!("{c}")));
                }
                if !base.contains(c) {
                    return Err(Error::NotADeformationDirection(format!("{c}")));
                }
            }
        }
    }
    Ok(())
}

/// `η_j = p_j/P(q_j) - Σ_i D_i(q_j - t_i)/(q_j - t_i)^{n_i} - D_∞(q_j)`.
pub fn eta_from_p<S: Scalar>(sing: &SingularityData<S>, darboux: &[DarbouxPoint<S>]) -> Result<Vec<S>> {
    let shifts = eta_shifts(sing, darboux.iter().map(|d| &d.q))?;
    let p = p_poly(sing);
    darboux
        .iter()
        .zip(shifts)
        .enumerate()
        .map(|(j, (dp, s))| {
            let pq = p.eval(&dp.q).inv().ok_or_else(|| Error::PoleCollision(format!("q{j}")))?;
            Ok(dp.p.clone() * pq - s)
        })
        .collect()
}

/// Inverse of [`eta_from_p`] at fixed `(t, θ, q)`.
pub fn p_from_eta<S: Scalar>(sing: &SingularityData<S>, q: &[S], eta: &[S]) -> Result<Vec<S>> {
    let shifts = eta_shifts(sing, q.iter())?;
    let p = p_poly(sing);
    q.iter()
        .zip(eta)
        .zip(shifts)
        .enumerate()
        .map(|(j, ((qj, e), s))| {
            let pq = p.eval(qj);
            if pq.inv().is_none() {
                return Err(Error::PoleCollision(format!("q{j}")));
            }
            Ok((e.clone() + s) * pq)
        })
        .collect()
}

/// `Σ_i D_i(q - t_i)/(q - t_i)^{n_i} + D_∞(q)` at every `q`.
fn eta_shifts<'a, S: Scalar>(sing: &SingularityData<S>, qs: impl Iterator<Item = &'a S>) -> Result<Vec<S>> {
    let cd = build_cd(sing)?;
    qs.enumerate()
        .map(|(j, q)| {
            let mut acc = S::zero();
            for (i, pt) in sing.points.iter().enumerate() {
                match &pt.pos {
                    Pos::Finite(t) => {
                        let y = q.clone() - t.clone();
                        let yi = y.inv().ok_or_else(|| Error::PoleCollision(format!("q{j} at point {i}")))?;
                        acc = acc + cd[i].d.eval(&y) * yi.pow(pt.order as u32);
                    }
                    Pos::Inf => acc = acc + cd[i].d.eval(q),
                }
            }
            Ok(acc)
        })
        .collect()
}

/// Overwrites one base coordinate of the spectral data.
pub fn set_base_coordinate<S: Scalar>(sing: &mut SingularityData<S>, c: Coord, v: S) -> Result<()> {
    let bad = || Error::BadIndex(format!("{c}"));
    match c {
        Coord::T(i) => sing.points.get_mut(i).ok_or_else(bad)?.pos = Pos::Finite(v),
        Coord::ThetaUn { point, sign, index } => match &mut sing.points.get_mut(point).ok_or_else(bad)?.theta {
            Theta::Pair { plus, minus } => {
                let seq = if sign == Sign::Plus { plus } else { minus };
                *seq.get_mut(index).ok_or_else(bad)? = v;
            }
            Theta::Ramified(_) => return Err(Error::KindMismatch(format!("{c}"))),
        },
        Coord::ThetaRa { point, index } => match &mut sing.points.get_mut(point).ok_or_else(bad)?.theta {
            Theta::Ramified(seq) => *seq.get_mut(index).ok_or_else(bad)? = v,
            Theta::Pair { .. } => return Err(Error::KindMismatch(format!("{c}"))),
        },
        _ => return Err(Error::NotADeformationDirection(format!("{c} is a fiber coordinate"))),
    }
    Ok(())
}

/// Current value of one base coordinate.
pub fn base_value<S: Scalar>(sing: &SingularityData<S>, c: Coord) -> Result<S> {
    let pt = |i: usize| sing.points.get(i).ok_or_else(|| Error::BadIndex(format!("{c}")));
    match c {
        Coord::T(i) => pt(i)?.finite_pos().cloned().ok_or_else(|| Error::NotADeformationDirection(format!("{c}"))),
        Coord::ThetaUn { point, sign, index } => pt(point)?.theta_pm(sign, index),
        Coord::ThetaRa { point, index } => pt(point)?.theta_ra(index),
        _ => Err(Error::NotADeformationDirection(format!("{c} is a fiber coordinate"))),
    }
}

/// An instance viewed as a function of its deformable coordinates in one chart.
pub struct Parametrized<'a> {
    pub inst: &'a Instance<Rational>,
    pub chart: FiberChart,
}

impl Parametrized<'_> {
    fn coords(&self) -> Vec<Coord> {
        let mut c = fiber_coordinates(self.inst.darboux.len(), self.chart);
        c.extend(base_coordinates(&self.inst.sing));
        c
    }
}

impl Construction for Parametrized<'_> {
    type Output<S: Scalar> = Instance<S>;

    fn parameters(&self) -> Vec<(String, Rational)> {
        let eta = if self.chart == FiberChart::Eta { eta_from_p(&self.inst.sing, &self.inst.darboux).ok() } else { None };
        self.coords()
            .into_iter()
            .map(|c| {
                let v = match c {
                    Coord::Q(j) => self.inst.darboux[j].q.clone(),
                    Coord::P(j) => self.inst.darboux[j].p.clone(),
                    Coord::Eta(j) => eta.as_ref().map(|e| e[j].clone()).unwrap_or_else(rzero),
                    Coord::T(i) => self.inst.sing.points[i].finite_pos().cloned().unwrap_or_else(rzero),
                    Coord::ThetaUn { point, sign, index } => {
                        self.inst.sing.points[point].theta_pm(sign, index).unwrap_or_else(|_| rzero())
                    }
                    Coord::ThetaRa { point, index } => {
                        self.inst.sing.points[point].theta_ra(index).unwrap_or_else(|_| rzero())
                    }
                };
                (c.to_string(), v)
            })
            .collect()
    }

    fn construct<S: Scalar>(&self, values: &[S]) -> Result<Instance<S>> {
        let mut out: Instance<S> = self.inst.map(S::from_rational);
        let mut eta = vec![S::zero(); out.darboux.len()];
        for (c, v) in self.coords().into_iter().zip(values) {
            match c {
                Coord::Q(j) => out.darboux[j].q = v.clone(),
                Coord::P(j) => out.darboux[j].p = v.clone(),
                Coord::Eta(j) => eta[j] = v.clone(),
                c => set_base_coordinate(&mut out.sing, c, v.clone())?,
            }
        }
        if self.chart == FiberChart::Eta {
            let q: Vec<S> = out.darboux.iter().map(|d| d.q.clone()).collect();
            let p = p_from_eta(&out.sing, &q, &eta)?;
            for (d, pj) in out.darboux.iter_mut().zip(p) {
                d.p = pj;
            }
        }
        Ok(out)
    }
}

/// The instance over jets whose derivative slots are the variation along `dir`.
pub fn lift_instance(inst: &Instance<Rational>, dir: &TangentDirection) -> Result<Instance<Jet<Rational>>> {
    check_direction(inst, dir)?;
    let named: Vec<(String, Rational)> = dir.weights.iter().map(|(c, w)| (c.to_string(), w.clone())).collect();
    jet_lift(&Parametrized { inst, chart: dir.chart }, &named)
}
