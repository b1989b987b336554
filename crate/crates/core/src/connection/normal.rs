use super::data::{DarbouxPoint, Instance, SingularityData, Theta};
use super::pf::PartialFractions;
use crate::error::{Error, Result};
use crate::exactalg::{rat, solve_linear, Chart, Mat2, MatSeries, Poly, Pos, Scalar, Series};

/// The pair `(C_i, D_i)` of one pole.
///
/// At a finite point both are polynomials in `y = x - t_i`; at infinity they
/// are `C_∞(x)` and `D_∞(x)` as polynomials in `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalCD<S> {
    pub c: Poly<S>,
    pub d: Poly<S>,
}

fn half<S: Scalar>() -> S {
    S::from_rational(&rat(1, 2))
}

/// `∏_{j≠i, finite} (y + t_i - t_j)^{n_j}`.
pub fn local_cofactor<S: Scalar>(sing: &SingularityData<S>, i: usize) -> Poly<S> {
    let ti = sing.points[i].finite_pos().expect("finite point").clone();
    let mut acc = Poly::one();
    for (j, tj, nj) in sing.finite() {
        if j != i {
            let lin = Poly::new(vec![ti.clone() - tj.clone(), S::one()]);
            acc = &acc * &lin.pow(nj as u32);
        }
    }
    acc
}

/// `P̂(w) = ∏_{finite} (1 - t_j w)^{n_j}`.
pub fn p_hat<S: Scalar>(sing: &SingularityData<S>) -> Poly<S> {
    let mut acc = Poly::one();
    for (_, tj, nj) in sing.finite() {
        let lin = Poly::new(vec![S::one(), -tj.clone()]);
        acc = &acc * &lin.pow(nj as u32);
    }
    acc
}

/// `P(x) = ∏_{finite} (x - t_j)^{n_j}`.
pub fn p_poly<S: Scalar>(sing: &SingularityData<S>) -> Poly<S> {
    let mut acc = Poly::one();
    for (_, tj, nj) in sing.finite() {
        acc = &acc * &Poly::linear(tj).pow(nj as u32);
    }
    acc
}

/// `-(core · cofactor) mod y^n`.
fn c_from_core<S: Scalar>(core: &Poly<S>, cof: &Poly<S>, n: usize) -> Poly<S> {
    -&(core * cof).truncate(n)
}

/// Core polynomial whose truncated product with the cofactor gives `C`.
fn core_poly<S: Scalar>(theta: &Theta<S>, n: usize) -> Poly<S> {
    match theta {
        Theta::Pair { plus, minus } => &Poly::new(plus.clone()) * &Poly::new(minus.clone()),
        Theta::Ramified(v) => {
            let (a, b) = ramified_ab(v, n);
            let y_n1 = Poly::monomial(S::one(), n - 1);
            let t1 = &a * &a;
            let t2 = (&y_n1 * &a).scale(&half());
            let t3 = &Poly::x() * &(&b * &b);
            &(&t1 - &t2) - &t3
        }
    }
}

/// `A = Σ θ_{2l}/2 y^l`, `B = Σ θ_{2l+1}/2 y^l`.
fn ramified_ab<S: Scalar>(v: &[S], n: usize) -> (Poly<S>, Poly<S>) {
    let h = half::<S>();
    let a = Poly::new((0..n).map(|l| v[2 * l].clone() * h.clone()).collect());
    let b = Poly::new((0..n.saturating_sub(1)).map(|l| v[2 * l + 1].clone() * h.clone()).collect());
    (a, b)
}

/// Closed forms for `C_i, D_i` at every pole, `C_∞, D_∞` at infinity.
pub fn build_cd<S: Scalar>(sing: &SingularityData<S>) -> Result<Vec<LocalCD<S>>> {
    let mut out = Vec::with_capacity(sing.points.len());
    for (i, pt) in sing.points.iter().enumerate() {
        let n = pt.order;
        let core = core_poly(&pt.theta, n);
        match &pt.pos {
            Pos::Finite(_) => {
                let cof = local_cofactor(sing, i);
                let c = c_from_core(&core, &cof, n);
                let d = match &pt.theta {
                    Theta::Pair { plus, minus } => &Poly::new(plus.clone()) + &Poly::new(minus.clone()),
                    Theta::Ramified(v) => {
                        let (a, _) = ramified_ab(v, n);
                        &a.scale(&S::from_int(2)) - &Poly::monomial(half(), n - 1)
                    }
                };
                out.push(LocalCD { c, d });
            }
            Pos::Inf => {
                let u = c_from_core(&core, &p_hat(sing), n);
                // u(w) = Σ_k C^{(k)} w^{n-1-k}
                let c = Poly::new((0..n).map(|k| u.coeff(n - 1 - k)).collect());
                let d = match &pt.theta {
                    Theta::Pair { plus, minus } => Poly::new(
                        (0..n.saturating_sub(1))
                            .map(|k| -(plus[n - 2 - k].clone() + minus[n - 2 - k].clone()))
                            .collect(),
                    ),
                    Theta::Ramified(v) => {
                        Poly::new((0..n.saturating_sub(1)).map(|k| -v[2 * (n - 2 - k)].clone()).collect())
                    }
                };
                out.push(LocalCD { c, d });
            }
        }
    }
    Ok(out)
}

/// The global normal form on `E_{n-2}`:
/// `Ω = [[0, 1/P], [c_0, d_0]] dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm<S> {
    pub inst: Instance<S>,
    pub cd: Vec<LocalCD<S>>,
    pub ctilde: Poly<S>,
    pub p: Poly<S>,
    pub c0: PartialFractions<S>,
    pub d0: PartialFractions<S>,
}

fn chart_of<S: Scalar>(pos: &Pos<S>) -> Chart {
    match pos {
        Pos::Finite(b) => Chart::Finite(format!("{}", b.approx())),
        Pos::Inf => Chart::Infinity,
    }
}

impl<S: Scalar> NormalForm<S> {
    /// Assembles `c_0, d_0` for a given `C̃` (no apparent condition enforced).
    pub fn with_ctilde(inst: &Instance<S>, cd: Vec<LocalCD<S>>, ctilde: Poly<S>) -> Result<Self> {
        let sing = &inst.sing;
        let n = sing.n();
        let mut c0 = PartialFractions::new();
        let mut d0 = PartialFractions::new();
        for (i, pt) in sing.points.iter().enumerate() {
            match &pt.pos {
                Pos::Finite(t) => {
                    c0.push(t.clone(), cd[i].c.clone(), pt.order as u32);
                    d0.push(t.clone(), cd[i].d.clone(), pt.order as u32);
                }
                Pos::Inf => {
                    let shifted = &Poly::monomial(S::one(), n.saturating_sub(3)) * &cd[i].c;
                    let lifted = if n >= 3 { shifted } else { return Err(Error::Validation("n < 3".into())) };
                    c0.push_poly(&lifted + &ctilde);
                    d0.push_poly(cd[i].d.clone());
                }
            }
        }
        for dp in &inst.darboux {
            c0.push(dp.q.clone(), Poly::constant(dp.p.clone()), 1);
            d0.push(dp.q.clone(), Poly::constant(-S::one()), 1);
        }
        Ok(NormalForm { inst: inst.clone(), cd, ctilde, p: p_poly(sing), c0, d0 })
    }

    pub fn n(&self) -> usize {
        self.inst.n()
    }

    pub fn sing(&self) -> &SingularityData<S> {
        &self.inst.sing
    }

    pub fn darboux(&self) -> &[DarbouxPoint<S>] {
        &self.inst.darboux
    }

    /// Index of `C_∞, D_∞` in `cd`.
    pub fn inf_cd(&self) -> Result<&LocalCD<S>> {
        Ok(&self.cd[self.inst.sing.inf_index()?])
    }

    /// Expansion of `1/P` at a finite point.
    pub fn inv_p_series(&self, b: &S, trunc: i64) -> Result<Series<S>> {
        let mut m = 0i64;
        let mut cof = Poly::one();
        for (_, t, nj) in self.inst.sing.finite() {
            let d = b.clone() - t.clone();
            if d.is_zero() {
                m = nj as i64;
            } else {
                cof = &cof * &Poly::new(vec![d, S::one()]).pow(nj as u32);
            }
        }
        let s = Series::new(0, cof.into_coeffs()).with_known(trunc + m);
        Ok(s.inv()?.shifted(-m).truncated(trunc))
    }

    /// Connection matrix at `pos` as a Laurent series in the local variable,
    /// coefficient of `dy` (`y = x - b`) or `dw` (`w = 1/x`), through `trunc`.
    pub fn local_matrix(&self, pos: &Pos<S>, trunc: i64) -> Result<MatSeries<S>> {
        match pos {
            Pos::Finite(b) => {
                let e12 = self.inv_p_series(b, trunc)?;
                let e21 = self.c0.expand(pos, trunc)?;
                let e22 = self.d0.expand(pos, trunc)?;
                Ok(MatSeries::from_entries([[Series::zero(trunc), e12], [e21, e22]]).in_chart(chart_of(pos)))
            }
            Pos::Inf => {
                let n = self.n() as i64;
                let ninf = self.inst.sing.inf()?.order as i64;
                let ph = p_hat(&self.inst.sing);
                let e12 = -&Series::new(0, ph.into_coeffs()).with_known(trunc + ninf).inv()?.shifted(-ninf);
                let e21 = -&self.c0.expand(pos, trunc - (n - 4))?.shifted(n - 4);
                let res = Series::monomial(S::from_int(2 - n), -1, trunc);
                let e22 = &res - &self.d0.expand(pos, trunc + 2)?.shifted(-2);
                Ok(MatSeries::from_entries([[Series::zero(trunc), e12.truncated(trunc)], [e21, e22]])
                    .in_chart(Chart::Infinity))
            }
        }
    }

    /// Elementary transform by `[[1,0],[p_j, x-q_j]]` expanded at `q_j` through `trunc`.
    pub fn elementary_transform_at(&self, j: usize, trunc: i64) -> Result<MatSeries<S>> {
        let dp = &self.inst.darboux[j];
        let pos = Pos::Finite(dp.q.clone());
        let om = self.local_matrix(&pos, trunc + 1)?;
        let big = trunc + 4;
        let o = S::one();
        let z = S::zero();
        let phi = MatSeries::with_trunc(
            0,
            vec![
                Mat2::new(o.clone(), z.clone(), dp.p.clone(), z.clone()),
                Mat2::new(z.clone(), z.clone(), z.clone(), o.clone()),
            ],
            big,
        );
        let phi_inv = MatSeries::with_trunc(
            -1,
            vec![
                Mat2::new(z.clone(), z.clone(), -dp.p.clone(), o.clone()),
                Mat2::new(o.clone(), z.clone(), z.clone(), z.clone()),
            ],
            big,
        );
        let dphi = MatSeries::constant(Mat2::new(z.clone(), z.clone(), z.clone(), o), big);
        let t = &(&(&phi_inv * &om) * &phi) + &(&phi_inv * &dphi);
        Ok(t.truncated(trunc))
    }

    /// Coefficient of `y^{-1}` in the `(2,1)` entry after the elementary
    /// transform at each `q_j`; all vanish exactly when every `q_j` is apparent.
    pub fn apparent_residuals(&self) -> Result<Vec<S>> {
        (0..self.inst.darboux.len())
            .map(|j| Ok(self.elementary_transform_at(j, 0)?.coeff(-1)?.get(1, 0)))
            .collect()
    }
}

/// Solves for `C̃` (degree `≤ n-4`) so that every `q_j` is an apparent singularity.
///
/// The defect is affine in the coefficients of `C̃`; it is probed once per
/// monomial and the resulting square system is solved exactly.
pub fn solve_tildec<S: Scalar>(inst: &Instance<S>, cd: &[LocalCD<S>]) -> Result<Poly<S>> {
    let m = inst.darboux.len();
    if m == 0 {
        return Ok(Poly::zero());
    }
    let base = NormalForm::with_ctilde(inst, cd.to_vec(), Poly::zero())?.apparent_residuals()?;
    let mut cols = Vec::with_capacity(m);
    for k in 0..m {
        let probe = NormalForm::with_ctilde(inst, cd.to_vec(), Poly::monomial(S::one(), k))?;
        let r = probe.apparent_residuals()?;
        cols.push(r.iter().zip(&base).map(|(a, b)| a.clone() - b.clone()).collect::<Vec<_>>());
    }
    let a: Vec<Vec<S>> = (0..m).map(|j| (0..m).map(|k| cols[k][j].clone()).collect()).collect();
    let b: Vec<S> = base.iter().map(|v| -v.clone()).collect();
    match solve_linear(&a, &b) {
        Ok(sol) if sol.is_unique() => Ok(Poly::new(sol.x)),
        _ => {
            // first apparent point at which the leading rows lose rank
            for j in 0..m {
                let rows: Vec<Vec<S>> = a[..=j].to_vec();
                let zeros = vec![S::zero(); j + 1];
                if let Ok(s) = solve_linear(&rows, &zeros) {
                    if s.rank < j + 1 {
                        return Err(Error::DegenerateConfiguration(j));
                    }
                }
            }
            Err(Error::DegenerateConfiguration(m - 1))
        }
    }
}

/// `build_cd`, `solve_tildec` and assembly in one step.
pub fn assemble_normal_form<S: Scalar>(inst: &Instance<S>) -> Result<NormalForm<S>> {
    if inst.darboux.len() + 3 != inst.n() {
        return Err(Error::Validation(format!(
            "expected {} apparent points, got {}",
            inst.n().saturating_sub(3),
            inst.darboux.len()
        )));
    }
    let cd = build_cd(&inst.sing)?;
    let ct = solve_tildec(inst, &cd)?;
    NormalForm::with_ctilde(inst, cd, ct)
}
