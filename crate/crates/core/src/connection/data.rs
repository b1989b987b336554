use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exactalg::{format_rational, rat, Pos, Rational, Scalar};

/// Local type of a pole of the connection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Regular,
    Unramified,
    Ramified,
}

impl Kind {
    pub fn tag(self) -> &'static str {
        match self {
            Kind::Regular => "reg",
            Kind::Unramified => "un",
            Kind::Ramified => "ra",
        }
    }

    pub fn from_tag(s: &str) -> Result<Self> {
        match s {
            "reg" => Ok(Kind::Regular),
            "un" => Ok(Kind::Unramified),
            "ra" => Ok(Kind::Ramified),
            _ => Err(Error::Parse(format!("unknown kind {s:?}"))),
        }
    }
}

/// Spectral data of one pole.
///
/// `Pair` holds `θ⁺_l, θ⁻_l` for `l = 0..n`; `Ramified` holds `θ_0..θ_{2n-2}`.
#[derive(Clone, Debug, PartialEq)]
pub enum Theta<S> {
    Pair { plus: Vec<S>, minus: Vec<S> },
    Ramified(Vec<S>),
}

impl<S: Scalar> Theta<S> {
    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> Theta<T> {
        match self {
            Theta::Pair { plus, minus } => Theta::Pair {
                plus: plus.iter().map(&f).collect(),
                minus: minus.iter().map(&f).collect(),
            },
            Theta::Ramified(v) => Theta::Ramified(v.iter().map(&f).collect()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn other(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularPoint<S> {
    pub pos: Pos<S>,
    pub order: usize,
    pub kind: Kind,
    pub theta: Theta<S>,
}

impl<S: Scalar> SingularPoint<S> {
    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> SingularPoint<T> {
        SingularPoint { pos: self.pos.map(&f), order: self.order, kind: self.kind, theta: self.theta.map(&f) }
    }

    /// `θ^±_l` of a regular or unramified point.
    pub fn theta_pm(&self, sign: Sign, l: usize) -> Result<S> {
        match &self.theta {
            Theta::Pair { plus, minus } => {
                let v = if sign == Sign::Plus { plus } else { minus };
                v.get(l).cloned().ok_or_else(|| Error::BadIndex(format!("theta{}_{l}", sign.symbol())))
            }
            Theta::Ramified(_) => Err(Error::KindMismatch("expected a theta pair".into())),
        }
    }

    /// `θ_{l'}` of a ramified point.
    pub fn theta_ra(&self, l: usize) -> Result<S> {
        match &self.theta {
            Theta::Ramified(v) => v.get(l).cloned().ok_or_else(|| Error::BadIndex(format!("theta_{l}"))),
            Theta::Pair { .. } => Err(Error::KindMismatch("expected a ramified theta sequence".into())),
        }
    }

    pub fn finite_pos(&self) -> Option<&S> {
        match &self.pos {
            Pos::Finite(t) => Some(t),
            Pos::Inf => None,
        }
    }
}

/// The polar divisor with its spectral data. Exactly one point sits at infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularityData<S> {
    pub points: Vec<SingularPoint<S>>,
}

impl<S: Scalar> SingularityData<S> {
    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> SingularityData<T> {
        SingularityData { points: self.points.iter().map(|p| p.map(&f)).collect() }
    }

    /// Degree of the divisor.
    pub fn n(&self) -> usize {
        self.points.iter().map(|p| p.order).sum()
    }

    pub fn inf_index(&self) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p.pos.is_inf())
            .ok_or_else(|| Error::Validation("no point at infinity".into()))
    }

    pub fn inf(&self) -> Result<&SingularPoint<S>> {
        Ok(&self.points[self.inf_index()?])
    }

    /// Finite points as `(index, position, order)`.
    pub fn finite(&self) -> impl Iterator<Item = (usize, &S, usize)> {
        self.points
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.finite_pos().map(|t| (i, t, p.order)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DarbouxPoint<S> {
    pub q: S,
    pub p: S,
}

impl<S: Scalar> DarbouxPoint<S> {
    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> DarbouxPoint<T> {
        DarbouxPoint { q: f(&self.q), p: f(&self.p) }
    }
}

/// A point of the extended moduli space: divisor data plus Darboux coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance<S> {
    pub sing: SingularityData<S>,
    pub darboux: Vec<DarbouxPoint<S>>,
}

impl<S: Scalar> Instance<S> {
    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> Instance<T> {
        Instance { sing: self.sing.map(&f), darboux: self.darboux.iter().map(|d| d.map(&f)).collect() }
    }

    pub fn n(&self) -> usize {
        self.sing.n()
    }
}

/// Human-readable position label: `0`, `1`, `inf` or the rational value.
pub fn pos_label(pos: &Pos<Rational>) -> String {
    match pos {
        Pos::Finite(t) => format_rational(t),
        Pos::Inf => "inf".into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

/// Itemized outcome of [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Diagnostics {
    pub checks: Vec<Check>,
}

impl Diagnostics {
    fn push(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), ok, detail: detail.into() });
    }

    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.ok).collect()
    }

    /// `Ok` if every check passed, else a `Validation` error listing failures.
    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            return Ok(());
        }
        let msg = self
            .failures()
            .iter()
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect::<Vec<_>>()
            .join("; ");
        Err(Error::Validation(msg))
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "[{}] {} {}", if c.ok { "ok" } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Left-hand side of the Fuchs relation; it must equal `-1`.
pub fn fuchs_sum<S: Scalar>(sing: &SingularityData<S>) -> Result<S> {
    let mut acc = S::zero();
    for p in &sing.points {
        match &p.theta {
            Theta::Pair { plus, minus } => {
                let l = p.order - 1;
                acc = acc + plus[l].clone() + minus[l].clone();
            }
            Theta::Ramified(v) => {
                acc = acc + v[2 * p.order - 2].clone() - S::from_rational(&rat(1, 2));
            }
        }
    }
    Ok(acc)
}

/// Checks every invariant of the divisor data and the Darboux points.
pub fn validate(inst: &Instance<Rational>) -> Diagnostics {
    let mut d = Diagnostics::default();
    let sing = &inst.sing;
    let n_inf = sing.points.iter().filter(|p| p.pos.is_inf()).count();
    d.push("infinity", n_inf == 1, format!("{n_inf} point(s) at infinity"));
    let mut shape_ok = true;
    for (i, p) in sing.points.iter().enumerate() {
        let label = format!("point {i} ({})", pos_label(&p.pos));
        for (j, o) in sing.points.iter().enumerate().skip(i + 1) {
            if o.pos == p.pos {
                d.push("distinct positions", false, format!("points {i} and {j} coincide"));
                shape_ok = false;
            }
        }
        if p.order == 0 {
            d.push(format!("{label} order"), false, "order must be at least 1");
            shape_ok = false;
            continue;
        }
        match (&p.kind, &p.theta) {
            (Kind::Regular | Kind::Unramified, Theta::Pair { plus, minus }) => {
                let len_ok = plus.len() == p.order && minus.len() == p.order;
                d.push(
                    format!("{label} theta length"),
                    len_ok,
                    format!("expected {} values per sign, got {} and {}", p.order, plus.len(), minus.len()),
                );
                if !len_ok {
                    shape_ok = false;
                    continue;
                }
                let diff = &plus[0] - &minus[0];
                if p.kind == Kind::Regular {
                    d.push(format!("{label} regular order"), p.order == 1, format!("order {}", p.order));
                    d.push(
                        format!("{label} non-resonant"),
                        !is_integer(&diff),
                        format!("theta+_0 - theta-_0 = {}", format_rational(&diff)),
                    );
                } else {
                    d.push(format!("{label} unramified order"), p.order > 1, format!("order {}", p.order));
                    d.push(
                        format!("{label} theta+_0 != theta-_0"),
                        !Scalar::is_zero(&diff),
                        format!("difference {}", format_rational(&diff)),
                    );
                }
                if p.order == 1 && p.kind == Kind::Unramified {
                    shape_ok = false;
                }
            }
            (Kind::Ramified, Theta::Ramified(v)) => {
                let len_ok = v.len() == 2 * p.order - 1;
                d.push(
                    format!("{label} theta length"),
                    len_ok,
                    format!("expected {} values, got {}", 2 * p.order - 1, v.len()),
                );
                if !len_ok {
                    shape_ok = false;
                    continue;
                }
                d.push(format!("{label} ramified order"), p.order > 1, format!("order {}", p.order));
                if p.order > 1 {
                    d.push(
                        format!("{label} theta_1 != 0"),
                        !Scalar::is_zero(&v[1]),
                        format!("theta_1 = {}", format_rational(&v[1])),
                    );
                } else {
                    shape_ok = false;
                }
            }
            _ => {
                d.push(format!("{label} theta shape"), false, "theta layout does not match kind");
                shape_ok = false;
            }
        }
    }
    let n = sing.n();
    d.push("n >= 3", n >= 3, format!("n = {n}"));
    if shape_ok {
        match fuchs_sum(sing) {
            Ok(s) => d.push(
                "Fuchs relation",
                s == rat(-1, 1),
                format!("sum of residue data = {}", format_rational(&s)),
            ),
            Err(e) => d.push("Fuchs relation", false, e.to_string()),
        }
    }
    let expect = n.saturating_sub(3);
    d.push(
        "darboux count",
        inst.darboux.len() == expect,
        format!("expected n-3 = {expect}, got {}", inst.darboux.len()),
    );
    for (j, dp) in inst.darboux.iter().enumerate() {
        for p in &sing.points {
            if let Pos::Finite(t) = &p.pos {
                if *t == dp.q {
                    d.push(format!("q_{j} off the divisor"), false, format!("q = {}", format_rational(t)));
                }
            }
        }
        for (k, o) in inst.darboux.iter().enumerate().skip(j + 1) {
            if o.q == dp.q {
                d.push("distinct q", false, format!("q_{j} = q_{k}"));
            }
        }
    }
    if !d.checks.iter().any(|c| c.name.starts_with('q') || c.name == "distinct q") {
        d.push("apparent points", true, "distinct and off the divisor");
    }
    d
}
