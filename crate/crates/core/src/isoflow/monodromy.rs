use num_complex::Complex64 as C;

use crate::connection::{E1Connection, SingularityData};
use crate::error::{Error, Result};
use crate::exactalg::{Poly, Pos};

type M2 = [[C; 2]; 2];

const ID: M2 = [[C::new(1.0, 0.0), C::new(0.0, 0.0)], [C::new(0.0, 0.0), C::new(1.0, 0.0)]];

fn mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[C::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn axpy(y: &M2, h: f64, terms: &[(f64, &M2)]) -> M2 {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] += k[i][j] * (h * c);
            }
        }
    }
    out
}

/// One piece of a loop in the `x`-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Segment {
    Line { from: C, to: C },
    /// Counterclockwise for `to > from`.
    Arc { center: C, radius: f64, from: f64, to: f64 },
}

impl Segment {
    fn point(&self, tau: f64) -> (C, C) {
        match *self {
            Segment::Line { from, to } => (from + (to - from) * tau, to - from),
            Segment::Arc { center, radius, from, to } => {
                let a = from + (to - from) * tau;
                let e = C::from_polar(radius, a);
                (center + e, C::i() * e * (to - from))
            }
        }
    }
}

/// Counterclockwise circle starting and ending at `center + radius`.
pub fn circle(center: C, radius: f64) -> Vec<Segment> {
    vec![Segment::Arc { center, radius, from: 0.0, to: std::f64::consts::TAU }]
}

/// A circle enclosing exactly the finite poles `inside`, halfway between the
/// farthest enclosed pole and the nearest excluded one.
pub fn loop_around(sing: &SingularityData<f64>, inside: &[usize]) -> Result<Vec<Segment>> {
    let finite: Vec<(usize, C)> = sing.points.iter().enumerate().filter_map(|(i, p)| match p.pos {
        Pos::Finite(t) => Some((i, C::new(t, 0.0))),
        Pos::Inf => None,
    }).collect();
    let chosen: Vec<C> = inside
        .iter()
        .map(|i| finite.iter().find(|(k, _)| k == i).map(|(_, z)| *z).ok_or_else(|| Error::BadIndex(format!("finite point {i}"))))
        .collect::<Result<_>>()?;
    if chosen.is_empty() {
        return Err(Error::Validation("a loop must enclose at least one pole".into()));
    }
    let center = chosen.iter().sum::<C>() / chosen.len() as f64;
    let r_in = chosen.iter().map(|z| (z - center).norm()).fold(0.0, f64::max);
    let r_out = finite
        .iter()
        .filter(|(i, _)| !inside.contains(i))
        .map(|(_, z)| (z - center).norm())
        .fold(f64::INFINITY, f64::min);
    if r_out <= r_in {
        return Err(Error::Validation("no circle separates the chosen poles from the others".into()));
    }
    let radius = if r_out.is_finite() { (r_in + r_out) / 2.0 } else { r_in + 1.0 };
    Ok(circle(center, radius.max(r_in + 1e-3)))
}

fn eval_poly(p: &Poly<f64>, x: C) -> C {
    p.coeffs().iter().rev().fold(C::new(0.0, 0.0), |acc, &c| acc * x + c)
}

/// `Ω^(1)(x)` at a complex point.
pub fn eval_connection(conn: &E1Connection<f64>, x: C) -> Result<M2> {
    let p = eval_poly(&conn.p, x);
    if p.norm() == 0.0 {
        return Err(Error::DivisionByZero("P(x) = 0 on the loop".into()));
    }
    let e = |i: usize, j: usize| eval_poly(&conn.m[i][j], x) / p;
    Ok([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
}

/// Adaptive Dormand–Prince 5(4) for `Y' = A(τ) Y`, `τ ∈ [0, 1]`, `Y(0) = I`.
///
/// The embedded error estimate is held below `rtol` relative to the solution
/// (with an absolute floor of `rtol`) at every accepted step.
pub fn transport(a: impl Fn(f64) -> Result<M2>, rtol: f64) -> Result<M2> {
    const C2: f64 = 1.0 / 5.0;
    const C3: f64 = 3.0 / 10.0;
    const C4: f64 = 4.0 / 5.0;
    const C5: f64 = 8.0 / 9.0;
    const A21: f64 = 1.0 / 5.0;
    const A31: f64 = 3.0 / 40.0;
    const A32: f64 = 9.0 / 40.0;
    const A41: f64 = 44.0 / 45.0;
    const A42: f64 = -56.0 / 15.0;
    const A43: f64 = 32.0 / 9.0;
    const A51: f64 = 19372.0 / 6561.0;
    const A52: f64 = -25360.0 / 2187.0;
    const A53: f64 = 64448.0 / 6561.0;
    const A54: f64 = -212.0 / 729.0;
    const A61: f64 = 9017.0 / 3168.0;
    const A62: f64 = -355.0 / 33.0;
    const A63: f64 = 46732.0 / 5247.0;
    const A64: f64 = 49.0 / 176.0;
    const A65: f64 = -5103.0 / 18656.0;
    const B1: f64 = 35.0 / 384.0;
    const B3: f64 = 500.0 / 1113.0;
    const B4: f64 = 125.0 / 192.0;
    const B5: f64 = -2187.0 / 6784.0;
    const B6: f64 = 11.0 / 84.0;
    const E1: f64 = 71.0 / 57600.0;
    const E3: f64 = -71.0 / 16695.0;
    const E4: f64 = 71.0 / 1920.0;
    const E5: f64 = -17253.0 / 339200.0;
    const E6: f64 = 22.0 / 525.0;
    const E7: f64 = -1.0 / 40.0;

    if !(rtol > 0.0) {
        return Err(Error::Validation("rtol must be positive".into()));
    }
    let f = |t: f64, y: &M2| -> Result<M2> { Ok(mul(&a(t)?, y)) };
    let mut t: f64 = 0.0;
    let mut y = ID;
    let mut h: f64 = 1e-2;
    let mut k1 = f(t, &y)?;
    let mut steps = 0usize;
    while t < 1.0 {
        steps += 1;
        if steps > 2_000_000 {
            return Err(Error::IntegrationFailure("too many steps".into()));
        }
        if h < 1e-14 {
            return Err(Error::IntegrationFailure(format!("step size underflow at τ = {t}")));
        }
        let h_try = h.min(1.0 - t);
        let k2 = f(t + C2 * h_try, &axpy(&y, h_try, &[(A21, &k1)]))?;
        let k3 = f(t + C3 * h_try, &axpy(&y, h_try, &[(A31, &k1), (A32, &k2)]))?;
        let k4 = f(t + C4 * h_try, &axpy(&y, h_try, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
        let k5 = f(t + C5 * h_try, &axpy(&y, h_try, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
        let k6 = f(t + h_try, &axpy(&y, h_try, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]))?;
        let y_new = axpy(&y, h_try, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(t + h_try, &y_new)?;
        let zero = [[C::new(0.0, 0.0); 2]; 2];
        let err = axpy(&zero, h_try, &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)]);
        let mut ratio: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let scale = rtol * (1.0 + y[i][j].norm().max(y_new[i][j].norm()));
                ratio = ratio.max(err[i][j].norm() / scale);
            }
        }
        if !ratio.is_finite() {
            h = h_try / 10.0;
            continue;
        }
        if ratio <= 1.0 {
            t += h_try;
            y = y_new;
            k1 = k7;
        }
        let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
        h = h_try * factor;
    }
    Ok(y)
}

/// Transport of `dΨ = -Ω Ψ` along a loop; a product of segment transports.
pub fn loop_transport(conn: &E1Connection<f64>, path: &[Segment], rtol: f64) -> Result<M2> {
    let mut total = ID;
    for seg in path {
        let piece = transport(
            |tau| {
                let (x, dx) = seg.point(tau);
                let om = eval_connection(conn, x)?;
                Ok([[-om[0][0] * dx, -om[0][1] * dx], [-om[1][0] * dx, -om[1][1] * dx]])
            },
            rtol,
        )?;
        total = mul(&piece, &total);
    }
    Ok(total)
}

/// Trace of the monodromy along a loop, a conjugation invariant.
pub fn monodromy_trace(conn: &E1Connection<f64>, path: &[Segment], rtol: f64) -> Result<C> {
    let m = loop_transport(conn, path, rtol)?;
    Ok(m[0][0] + m[1][1])
}
