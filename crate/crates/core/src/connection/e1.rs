use super::normal::NormalForm;
use crate::error::{Error, Result};
use crate::exactalg::{Chart, MatSeries, Poly, Pos, Scalar, Series};

/// Connection on `E_1`, stored as `Ω^(1) = M(x)/P(x) dx` with polynomial `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct E1Connection<S> {
    pub p: Poly<S>,
    pub m: [[Poly<S>; 2]; 2],
    pub q1: Poly<S>,
    pub q2: Poly<S>,
    pub n: usize,
    pub n_inf: usize,
}

/// Transform of the normal form by `G̃ = [[1,0],[Q_2,Q_1]]`.
///
/// The apparent poles at `q_j` are cancelled symbolically; a nonzero
/// remainder means `C̃` was wrong.
pub fn to_e1<S: Scalar>(nf: &NormalForm<S>) -> Result<E1Connection<S>> {
    let sing = nf.sing();
    let n = nf.n();
    let qs: Vec<S> = nf.darboux().iter().map(|d| d.q.clone()).collect();
    let ps: Vec<S> = nf.darboux().iter().map(|d| d.p.clone()).collect();
    let q1 = Poly::from_roots(&qs);
    let q2 = Poly::interpolate(&qs, &ps)?;
    let p = nf.p.clone();

    // P c0reg and P d0reg as polynomials
    let mut pc = Poly::zero();
    let mut pd = Poly::zero();
    for (i, pt) in sing.points.iter().enumerate() {
        match &pt.pos {
            Pos::Finite(t) => {
                let mut cof = Poly::one();
                for (j, tj, nj) in sing.finite() {
                    if j != i {
                        cof = &cof * &Poly::linear(tj).pow(nj as u32);
                    }
                }
                let neg = -t.clone();
                pc = &pc + &(&nf.cd[i].c.shift(&neg) * &cof);
                pd = &pd + &(&nf.cd[i].d.shift(&neg) * &cof);
            }
            Pos::Inf => {
                let poly = &(&Poly::monomial(S::one(), n - 3) * &nf.cd[i].c) + &nf.ctilde;
                pc = &pc + &(&p * &poly);
                pd = &pd + &(&p * &nf.cd[i].d);
            }
        }
    }
    let mut dq_sum = Poly::zero();
    for q in &qs {
        dq_sum = &dq_sum + &q2.difference_quotient(q);
    }
    let numer = &(&(&(&pc + &(&q2 * &pd)) - &(&p * &dq_sum)) + &(&p * &q2.derivative())) - &(&q2 * &q2);
    let (c, r) = numer.divrem(&q1)?;
    if S::EXACT && !r.is_zero() {
        return Err(Error::InternalInconsistency(format!(
            "residual pole at the apparent divisor (remainder of degree {})",
            r.degree()
        )));
    }
    let d = &pd - &q2;
    Ok(E1Connection {
        m: [[q2.clone(), q1.clone()], [c, d]],
        p,
        q1,
        q2,
        n,
        n_inf: sing.inf()?.order,
    })
}

impl<S: Scalar> E1Connection<S> {
    pub fn map<T: Scalar, F: Fn(&S) -> T + Copy>(&self, f: F) -> E1Connection<T> {
        let mp = |p: &Poly<S>| p.map(f);
        E1Connection {
            p: mp(&self.p),
            m: [[mp(&self.m[0][0]), mp(&self.m[0][1])], [mp(&self.m[1][0]), mp(&self.m[1][1])]],
            q1: mp(&self.q1),
            q2: mp(&self.q2),
            n: self.n,
            n_inf: self.n_inf,
        }
    }

    /// `Ω^(1)` evaluated at a point off the divisor.
    pub fn eval(&self, x: &S) -> Result<[[S; 2]; 2]> {
        let pinv = self.p.eval(x).inv().ok_or_else(|| Error::DivisionByZero("P(x) = 0".into()))?;
        let e = |i: usize, j: usize| self.m[i][j].eval(x) * pinv.clone();
        Ok([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    /// Expansion at a finite point through `trunc`.
    pub fn local_matrix(&self, b: &S, trunc: i64) -> Result<MatSeries<S>> {
        let ps = self.p.shift(b);
        let v = ps.coeffs().iter().take_while(|c| c.is_zero()).count() as i64;
        let inv = Series::new(0, ps.coeffs()[v as usize..].to_vec()).with_known(trunc + v).inv()?;
        let ent = |i: usize, j: usize| {
            let s = Series::from_poly(&self.m[i][j].shift(b), trunc + v);
            (&s * &inv).shifted(-v).truncated(trunc)
        };
        Ok(MatSeries::from_entries([[ent(0, 0), ent(0, 1)], [ent(1, 0), ent(1, 1)]])
            .in_chart(Chart::Finite(format!("{}", b.approx()))))
    }
}
