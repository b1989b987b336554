//! Reproductions of the two worked examples: three double poles at `0, 1, ∞`
//! and the single ramified pole of order five at infinity.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::connection::sample::{double_poles_instance, ramified_quintic_instance, small_rational};
use crate::connection::{assemble_normal_form, validate, Instance, NormalForm, Sign};
use crate::error::{Error, Result};
use crate::exactalg::{format_rational, rat, Jet, Pos, Rational, Scalar};
use crate::localform::{reduce_point, reduced_shape, ReduceOptions};
use crate::symplectic::{hamiltonians, Coord};

/// Sample height: numerators and denominators are bounded by this.
pub const HEIGHT: i64 = 50;

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub name: String,
    pub computed: String,
    pub closed_form: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleReport {
    pub parameters: Vec<(String, String)>,
    pub comparisons: Vec<Comparison>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproduceReport {
    pub which: String,
    pub seed: u64,
    pub samples: Vec<SampleReport>,
    /// Largest `|computed - closed form|` over all samples, as a rational.
    pub max_discrepancy: String,
    pub ok: bool,
}

fn cmp(name: impl Into<String>, computed: &Rational, closed: &Rational) -> (Comparison, Rational) {
    let d = computed - closed;
    let d = if d < rat(0, 1) { -d } else { d };
    (Comparison { name: name.into(), computed: format_rational(computed), closed_form: format_rational(closed) }, d)
}

fn finish(which: &str, seed: u64, results: Vec<(SampleReport, Rational)>) -> ReproduceReport {
    let max = results.iter().map(|(_, d)| d.clone()).fold(rat(0, 1), |a, b| if b > a { b } else { a });
    ReproduceReport {
        which: which.into(),
        seed,
        ok: Scalar::is_zero(&max),
        max_discrepancy: format_rational(&max),
        samples: results.into_iter().map(|(s, _)| s).collect(),
    }
}

/// `[θ⁺_0, θ⁻_0, θ⁺_1, θ⁻_1]` per point and the three Darboux points.
type DoublePoleParams = ([[Rational; 4]; 3], [(Rational, Rational); 3]);

fn sample_double_poles(rng: &mut ChaCha8Rng) -> (DoublePoleParams, Instance<Rational>, NormalForm<Rational>) {
    loop {
        let mut th: [[Rational; 4]; 3] = Default::default();
        for v in th.iter_mut().flatten() {
            *v = small_rational(rng, HEIGHT);
        }
        let d: [(Rational, Rational); 3] =
            std::array::from_fn(|_| (small_rational(rng, HEIGHT), small_rational(rng, HEIGHT)));
        let inst = double_poles_instance(th.clone(), d.clone());
        if !validate(&inst).is_ok() {
            continue;
        }
        if let Ok(nf) = assemble_normal_form(&inst) {
            return ((th, d), inst, nf);
        }
    }
}

/// The displayed Hamiltonians `H_{θ^±_0} = θ^±_2` at the three double poles,
/// written in the data `C_i, D_i, C̃` of the normal form.
pub fn double_pole_closed_form(nf: &NormalForm<Rational>, point: usize, sign: Sign) -> Result<Rational> {
    let inst = &nf.inst;
    let pt = &inst.sing.points[point];
    let (a0, b0) = (pt.theta_pm(sign, 0)?, pt.theta_pm(sign.other(), 0)?);
    let (a1, b1) = (pt.theta_pm(sign, 1)?, pt.theta_pm(sign.other(), 1)?);
    let c = |i: usize, k: usize| nf.cd[i].c.coeff(k);
    let d = |i: usize, k: usize| nf.cd[i].d.coeff(k);
    let ct = |k: usize| nf.ctilde.coeff(k);
    let two = rat(2, 1);
    let one = rat(1, 1);
    let common = &a0 * &b0 + &a1 * &b1;
    let cross = &a0 * &b1 + &a1 * &b0;
    let q: Vec<&Rational> = inst.darboux.iter().map(|x| &x.q).collect();
    let p: Vec<&Rational> = inst.darboux.iter().map(|x| &x.p).collect();
    // indices: 0 is the point 0, 1 the point 1, 2 infinity
    let body = match point {
        0 => {
            let mut s = common - &two * cross + ct(0) + (c(1, 0) - c(1, 1)) + (d(1, 0) - d(1, 1) + d(2, 0)) * &a0;
            for j in 0..3 {
                s -= (p[j] - &a0) / q[j];
            }
            s
        }
        1 => {
            let mut s = common + &two * cross + (ct(0) + ct(1) + ct(2)) + (c(0, 0) + c(0, 1)) + (c(2, 0) + c(2, 1))
                + (d(0, 0) + d(0, 1) + d(2, 0)) * &a0;
            for j in 0..3 {
                s -= (p[j] - &a0) / (q[j] - &one);
            }
            s
        }
        2 => {
            common - &two * cross + ct(2) - (d(0, 0) + d(1, 0) + d(1, 1)) * &a0
                + (q[0] + q[1] + q[2]) * &a0
        }
        _ => return Err(Error::BadIndex(format!("point {point}"))),
    };
    body.try_div(&(&a0 - &b0))
}

fn double_poles_one(inst: &Instance<Rational>, nf: &NormalForm<Rational>, params: &DoublePoleParams) -> Result<(SampleReport, Rational)> {
    let mut comparisons = Vec::new();
    let mut worst = rat(0, 1);
    let labels = ["0", "1", "inf"];
    for (i, label) in labels.iter().enumerate() {
        let red = reduce_point(nf, i, &ReduceOptions::default())?;
        for sign in [Sign::Plus, Sign::Minus] {
            let computed = red.theta_pm(sign == Sign::Plus, 2)?;
            let closed = double_pole_closed_form(nf, i, sign)?;
            let (c, d) = cmp(format!("theta{}_2 at {label}", sign.symbol()), &computed, &closed);
            comparisons.push(c);
            if d > worst {
                worst = d;
            }
        }
    }
    let mut parameters = Vec::new();
    for (i, label) in labels.iter().enumerate() {
        let t = &params.0[i];
        for (k, name) in ["theta+_0", "theta-_0", "theta+_1", "theta-_1"].iter().enumerate() {
            let v = if i == 2 && k == 3 { inst.sing.points[2].theta_pm(Sign::Minus, 1)? } else { t[k].clone() };
            parameters.push((format!("{name} at {label}"), format_rational(&v)));
        }
    }
    for (j, d) in inst.darboux.iter().enumerate() {
        parameters.push((format!("q{}", j + 1), format_rational(&d.q)));
        parameters.push((format!("p{}", j + 1), format_rational(&d.p)));
    }
    Ok((SampleReport { parameters, comparisons }, worst))
}

/// The double-pole example at `count` seeded samples.
pub fn reproduce_double_poles(seed: u64, count: usize) -> Result<ReproduceReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<_> = (0..count).map(|_| sample_double_poles(&mut rng)).collect();
    let results = samples
        .par_iter()
        .map(|(params, inst, nf)| double_poles_one(inst, nf, params))
        .collect::<Result<Vec<_>>>()?;
    Ok(finish("double-poles", seed, results))
}

/// Kimura's constants `K_1, K_2`: the `w^1`, `w^0` coefficients of the
/// `(2,1)` entry at infinity are `-3K_1`, `-3K_2`.
pub fn kimura_constants<S: Scalar>(nf: &NormalForm<S>) -> Result<(S, S)> {
    let c = nf.local_matrix(&Pos::Inf, 2)?.entry(1, 0);
    let three = S::from_int(3);
    Ok((-c.coeff(1)?.try_div(&three)?, -c.coeff(0)?.try_div(&three)?))
}

/// `(H_1, H_2) = (H_{θ_5}, H_{θ_7})` at the ramified pole.
pub fn kimura_hamiltonians<S: Scalar>(nf: &NormalForm<S>) -> Result<(S, S)> {
    let h = hamiltonians(nf, &[Coord::ThetaRa { point: 0, index: 5 }, Coord::ThetaRa { point: 0, index: 7 }])?;
    Ok((h[0].clone(), h[1].clone()))
}

/// `∂(3H_1)/∂t_2 - ∂H_2/∂t_1 - Σ_i (∂(3H_1)/∂η_i ∂H_2/∂q_i - ∂(3H_1)/∂q_i ∂H_2/∂η_i)` with `η_i = -p_i`.
pub fn kimura_compatibility(vars: &[Rational; 6]) -> Result<Rational> {
    // variables t1, t2, q1, p1, q2, p2
    let mut d = Vec::with_capacity(6);
    for k in 0..6 {
        let v: Vec<Jet<Rational>> = vars
            .iter()
            .enumerate()
            .map(|(i, x)| if i == k { Jet::variable(x.clone()) } else { Jet::constant(x.clone()) })
            .collect();
        let inst = ramified_quintic_instance(v[0].clone(), v[1].clone(), [(v[2].clone(), v[3].clone()), (v[4].clone(), v[5].clone())]);
        let (h1, h2) = kimura_hamiltonians(&assemble_normal_form(&inst)?)?;
        d.push((h1.d * rat(3, 1), h2.d));
    }
    let mut bracket = rat(0, 1);
    for i in 0..2 {
        let (q, p) = (2 + 2 * i, 3 + 2 * i);
        let (f_eta, g_eta) = (-d[p].0.clone(), -d[p].1.clone());
        bracket += &f_eta * &d[q].1 - &d[q].0 * &g_eta;
    }
    Ok(&d[1].0 - &d[0].1 - bracket)
}

fn kimura_one(vars: &[Rational; 6]) -> Result<(SampleReport, Rational)> {
    let [t1, t2, q1, p1, q2, p2] = vars.clone();
    let inst = ramified_quintic_instance(t1.clone(), t2.clone(), [(q1.clone(), p1.clone()), (q2.clone(), p2.clone())]);
    let nf = assemble_normal_form(&inst)?;
    let (k1, k2) = kimura_constants(&nf)?;
    let (h1, h2) = kimura_hamiltonians(&nf)?;
    let opts = ReduceOptions { order: None, sigma: vec![rat(0, 1), rat(1, 1), rat(1, 1), rat(1, 1)] };
    let red = reduce_point(&nf, 0, &opts)?;
    let res = reduced_shape(&red)?.coeff(-1)?;
    let half = rat(1, 2);
    let one = rat(1, 1);
    let rows = vec![
        cmp("H1", &h1, &(&k1 / rat(3, 1) - &t1 * &t2 / rat(6, 1))),
        cmp("H2", &h2, &(&k2 - rat(3, 4) * &t1 * &t1)),
        cmp("compatibility", &kimura_compatibility(vars)?, &rat(0, 1)),
        cmp("residue (1,1)", &res.get(0, 0), &rat(-1, 4)),
        cmp("residue (2,2)", &res.get(1, 1), &rat(-3, 4)),
        cmp("a1", &(red.theta_ra(10)? * &half), &(&one + &q1 * &half + &q2 * &half)),
        cmp("b3", &(red.theta_ra(9)? * &half), &(rat(-3, 8) * &t1 * &t1 + &k2 * &half)),
        cmp("b4", &(red.theta_ra(11)? * &half), &(-(&t1 * &t2) / rat(4, 1) + &k1 * &half)),
    ];
    let worst = rows.iter().map(|(_, d)| d.clone()).fold(rat(0, 1), |a, b| if b > a { b } else { a });
    let mut comparisons = vec![
        Comparison { name: "K1".into(), computed: format_rational(&k1), closed_form: "solved".into() },
        Comparison { name: "K2".into(), computed: format_rational(&k2), closed_form: "solved".into() },
    ];
    comparisons.extend(rows.into_iter().map(|(c, _)| c));
    let names = ["t1", "t2", "q1", "p1", "q2", "p2"];
    let parameters = names.iter().zip(vars).map(|(n, v)| (n.to_string(), format_rational(v))).collect();
    Ok((SampleReport { parameters, comparisons }, worst))
}

fn sample_kimura(rng: &mut ChaCha8Rng) -> [Rational; 6] {
    loop {
        let v: [Rational; 6] = std::array::from_fn(|_| small_rational(rng, HEIGHT));
        let inst = ramified_quintic_instance(v[0].clone(), v[1].clone(), [(v[2].clone(), v[3].clone()), (v[4].clone(), v[5].clone())]);
        if v[2] != v[4] && assemble_normal_form(&inst).is_ok() {
            return v;
        }
    }
}

/// The ramified example at `count` seeded samples.
pub fn reproduce_kimura(seed: u64, count: usize) -> Result<ReproduceReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<[Rational; 6]> = (0..count).map(|_| sample_kimura(&mut rng)).collect();
    let results = samples.par_iter().map(kimura_one).collect::<Result<Vec<_>>>()?;
    Ok(finish("kimura", seed, results))
}
