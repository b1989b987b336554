use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sample::{double_poles_instance, random_instance, random_layout, ramified_quintic_instance, small_rational};
use super::*;
use crate::exactalg::{rat, Pos, Rational, Series};

fn r(n: i64, d: i64) -> Rational {
    rat(n, d)
}

fn sample_double_poles(seed: u64) -> Instance<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = || small_rational(&mut rng, 20);
    let mut th = [[r(0, 1), r(0, 1), r(0, 1), r(0, 1)], [r(0, 1), r(0, 1), r(0, 1), r(0, 1)], [r(0, 1), r(0, 1), r(0, 1), r(0, 1)]];
    for row in th.iter_mut() {
        for v in row.iter_mut() {
            *v = g();
        }
        if row[0] == row[1] {
            row[0] = &row[1] + r(1, 3);
        }
    }
    double_poles_instance(th, [(r(2, 3), g()), (r(-5, 2), g()), (r(7, 4), g())])
}

#[test]
fn cd_closed_forms_double_poles() {
    let inst = sample_double_poles(1);
    let cd = build_cd(&inst.sing).unwrap();
    let th = |i: usize, s: Sign, l: usize| inst.sing.points[i].theta_pm(s, l).unwrap();
    use Sign::*;
    // at 0
    let (a, b, a1, b1) = (th(0, Plus, 0), th(0, Minus, 0), th(0, Plus, 1), th(0, Minus, 1));
    assert_eq!(cd[0].c.coeff(0), -(&a * &b));
    assert_eq!(cd[0].c.coeff(1), r(2, 1) * &a * &b - &a * &b1 - &b * &a1);
    assert_eq!(cd[0].d.coeff(1), &a1 + &b1);
    // at 1, in powers of x - 1
    let (a, b, a1, b1) = (th(1, Plus, 0), th(1, Minus, 0), th(1, Plus, 1), th(1, Minus, 1));
    assert_eq!(cd[1].c.coeff(0), -(&a * &b));
    assert_eq!(cd[1].c.coeff(1), -(r(2, 1) * &a * &b + &a * &b1 + &b * &a1));
    // at infinity
    let (a, b, a1, b1) = (th(2, Plus, 0), th(2, Minus, 0), th(2, Plus, 1), th(2, Minus, 1));
    assert_eq!(cd[2].c.coeff(0), r(2, 1) * &a * &b - &b * &a1 - &a * &b1);
    assert_eq!(cd[2].c.coeff(1), -(&a * &b));
    assert_eq!(cd[2].d.coeff(0), -(&a + &b));
}

#[test]
fn ctilde_matches_closed_form_oracle() {
    let inst = sample_double_poles(2);
    let nf = assemble_normal_form(&inst).unwrap();
    let cd = &nf.cd;
    let qs: Vec<_> = inst.darboux.iter().map(|d| d.q.clone()).collect();
    let q_prime = |j: usize| (0..3).filter(|&k| k != j).fold(r(1, 1), |acc, k| acc * (&qs[j] - &qs[k]));
    let mut expected = crate::exactalg::Poly::zero();
    for j in 0..3 {
        let (q, p) = (&inst.darboux[j].q, &inst.darboux[j].p);
        let mut v = p * p / (q * q * (q - r(1, 1)) * (q - r(1, 1)));
        for (i, t) in [(0usize, r(0, 1)), (1, r(1, 1))] {
            let y = q - &t;
            v -= (cd[i].d.eval(&y) * p + cd[i].c.eval(&y)) / (&y * &y);
        }
        for k in 0..3 {
            if k != j {
                v += (p - &inst.darboux[k].p) / (q - &inst.darboux[k].q);
            }
        }
        v -= cd[2].d.coeff(0) * p + cd[2].c.coeff(0) * q * q * q + cd[2].c.coeff(1) * q * q * q * q;
        let ct = v / q_prime(j);
        let others: Vec<_> = (0..3).filter(|&k| k != j).map(|k| qs[k].clone()).collect();
        expected = &expected + &crate::exactalg::Poly::from_roots(&others).scale(&ct);
    }
    assert_eq!(nf.ctilde, expected);
}

#[test]
fn ramified_quintic_normal_form_at_infinity() {
    let (t1, t2) = (r(2, 3), r(-5, 7));
    let darboux = [(r(1, 2), r(3, 1)), (r(-4, 3), r(2, 5))];
    let inst = ramified_quintic_instance(t1.clone(), t2.clone(), darboux.clone());
    let nf = assemble_normal_form(&inst).unwrap();
    let om = nf.local_matrix(&Pos::Inf, 3).unwrap();
    assert_eq!(om.coeff(-5).unwrap().get(0, 1), r(-1, 1));
    let c = om.entry(1, 0);
    assert_eq!(c.coeff(-4).unwrap(), r(-9, 1));
    assert_eq!(c.coeff(-3).unwrap(), r(0, 1));
    assert_eq!(c.coeff(-2).unwrap(), r(-9, 1) * &t1);
    assert_eq!(c.coeff(-1).unwrap(), r(-3, 1) * &t2);
    // -Σ p w²/(1 - q w) starts at w²
    let k2 = -c.coeff(0).unwrap() / r(3, 1);
    let k1 = -c.coeff(1).unwrap() / r(3, 1);
    let tail: Rational = darboux.iter().map(|(q, p)| p.clone() * q.clone()).sum::<Rational>();
    let w2: Rational = darboux.iter().map(|(_, p)| p.clone()).sum::<Rational>();
    assert_eq!(c.coeff(2).unwrap(), -w2);
    assert_eq!(c.coeff(3).unwrap(), -tail);
    let d = om.entry(1, 1);
    assert_eq!(d.coeff(-1).unwrap(), r(-1, 1));
    let qsum: Rational = darboux.iter().map(|(q, _)| q.clone()).sum::<Rational>();
    assert_eq!(d.coeff(0).unwrap(), qsum);
    // the apparent conditions are satisfied with these K
    assert!(nf.apparent_residuals().unwrap().iter().all(|v| *v == r(0, 1)));
    assert!(k1 != r(0, 1) || k2 != r(0, 1));
}

#[test]
fn round_trip_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 3..=7 {
        for _ in 0..3 {
            let layout = random_layout(&mut rng, n);
            let inst = random_instance(&mut rng, &layout, 12).unwrap();
            assert!(validate(&inst).is_ok(), "{}", validate(&inst));
            let nf = assemble_normal_form(&inst).unwrap();
            let e1 = to_e1(&nf).unwrap();
            let mut back = apparent_data(&e1).unwrap();
            let mut want = inst.darboux.clone();
            back.sort_by(|a, b| a.q.cmp(&b.q));
            want.sort_by(|a, b| a.q.cmp(&b.q));
            assert_eq!(back, want);
        }
    }
}

#[test]
fn apparent_points_are_resolved_and_residues_have_trace_minus_one() {
    let inst = sample_double_poles(3);
    let nf = assemble_normal_form(&inst).unwrap();
    for j in 0..3 {
        let t = nf.elementary_transform_at(j, 1).unwrap();
        assert!(t.coeff(-2).unwrap().is_zero());
        assert!(t.coeff(-1).unwrap().is_zero());
        let q = Pos::Finite(inst.darboux[j].q.clone());
        let res = nf.local_matrix(&q, 0).unwrap().residue().unwrap();
        assert_eq!(res.trace(), r(-1, 1));
    }
}

#[test]
fn pole_orders_of_the_normal_form() {
    let inst = sample_double_poles(4);
    let nf = assemble_normal_form(&inst).unwrap();
    for pt in &inst.sing.points {
        let m = nf.local_matrix(&pt.pos, 0).unwrap().normalized();
        assert_eq!(m.start(), -(pt.order as i64));
    }
    let e1 = to_e1(&nf).unwrap();
    assert_eq!(e1.m[0][1], e1.q1);
    assert_eq!(e1.m[0][0], e1.q2);
    for d in &inst.darboux {
        let s = e1.local_matrix(&d.q, 0).unwrap().normalized();
        assert!(s.start() >= 0);
    }
}

#[test]
fn residue_theorem_on_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let layout = random_layout(&mut rng, 6);
    let inst = random_instance(&mut rng, &layout, 10).unwrap();
    let nf = assemble_normal_form(&inst).unwrap();
    let conn = to_e1(&nf).unwrap().connection().unwrap();
    let tr = conn.omega0[0][0].add(&conn.omega0[1][1]);
    let mut total = r(0, 1);
    for pt in &inst.sing.points {
        total += crate::exactalg::residue_at(&tr, &pt.pos).unwrap();
    }
    assert_eq!(total, r(0, 1));
    let _ = Series::<Rational>::zero(0);
}

#[test]
fn validation_reports_fuchs_and_ramified_theta1() {
    let mut inst = ramified_quintic_instance(r(1, 1), r(2, 1), [(r(1, 2), r(1, 1)), (r(3, 1), r(0, 1))]);
    assert!(validate(&inst).is_ok());
    if let Theta::Ramified(v) = &mut inst.sing.points[0].theta {
        v[1] = r(0, 1);
        v[8] = r(0, 1);
    }
    let d = validate(&inst);
    let failed: Vec<_> = d.failures().iter().map(|c| c.name.clone()).collect();
    assert!(failed.iter().any(|n| n.contains("theta_1")));
    assert!(failed.iter().any(|n| n.contains("Fuchs")));
}

#[test]
fn n3_has_no_apparent_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let layout = random_layout(&mut rng, 3);
    let inst = random_instance(&mut rng, &layout, 10).unwrap();
    let e1 = to_e1(&assemble_normal_form(&inst).unwrap()).unwrap();
    assert!(apparent_data(&e1).unwrap().is_empty());
}
