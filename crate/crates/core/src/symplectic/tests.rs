use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::connection::sample::{random_darboux, random_instance, random_layout};
use crate::connection::Instance;
use crate::connection::{assemble_normal_form, Sign};
use crate::exactalg::{rat, Jet, Rational, Scalar};
use crate::error::Error;

fn r(n: i64, d: i64) -> Rational {
    rat(n, d)
}

fn instance(seed: u64, n: usize) -> Instance<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let layout = random_layout(&mut rng, n);
    random_instance(&mut rng, &layout, 7).unwrap()
}

mod closed_forms {
    use super::*;
    use crate::connection::sample::double_poles_instance;
    use crate::localform::reduce_unramified;

    /// Both sides for every point and sign: `(computed θ^±_2, closed form)`.
    pub fn sides(seed: u64) -> Vec<(Rational, Rational)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use crate::connection::sample::small_rational;
        let mut th: [[Rational; 4]; 3] = Default::default();
        loop {
            for row in th.iter_mut() {
                for v in row.iter_mut() {
                    *v = small_rational(&mut rng, 50);
                }
            }
            let ok = th.iter().all(|t| t[0] != t[1] && !Scalar::is_zero(&t[1]) && !Scalar::is_zero(&t[0]));
            if !ok {
                continue;
            }
            let dps: Vec<(Rational, Rational)> =
                (0..3).map(|_| (small_rational(&mut rng, 50), small_rational(&mut rng, 50))).collect();
            let inst = double_poles_instance(th.clone(), [dps[0].clone(), dps[1].clone(), dps[2].clone()]);
            let Ok(nf) = assemble_normal_form(&inst) else { continue };
            let mut out = Vec::new();
            let cd = &nf.cd;
            let ct = |k: usize| nf.ctilde.coeff(k);
            let (c0, c1, ci, d0, d1, di) = (&cd[0].c, &cd[1].c, &cd[2].c, &cd[0].d, &cd[1].d, &cd[2].d);
            let q: Vec<Rational> = inst.darboux.iter().map(|d| d.q.clone()).collect();
            let p: Vec<Rational> = inst.darboux.iter().map(|d| d.p.clone()).collect();
            for i in 0..3 {
                let red = reduce_unramified(&nf, i, None).unwrap();
                for sign in [Sign::Plus, Sign::Minus] {
                    let pt = &inst.sing.points[i];
                    let a0 = pt.theta_pm(sign, 0).unwrap();
                    let b0 = pt.theta_pm(sign.other(), 0).unwrap();
                    let a1 = pt.theta_pm(sign, 1).unwrap();
                    let b1 = pt.theta_pm(sign.other(), 1).unwrap();
                    let common = &a0 * &b0 + &a1 * &b1;
                    let cross = &a0 * &b1 + &a1 * &b0;
                    let body = match i {
                        0 => {
                            let mut s = common - r(2, 1) * cross + ct(0) + (c1.coeff(0) - c1.coeff(1))
                                + (d1.coeff(0) - d1.coeff(1) + di.coeff(0)) * &a0;
                            for j in 0..3 {
                                s -= (&p[j] - &a0) / &q[j];
                            }
                            s
                        }
                        1 => {
                            let mut s = common + r(2, 1) * cross + ct(0) + ct(1) + ct(2)
                                + (c0.coeff(0) + c0.coeff(1))
                                + (ci.coeff(0) + ci.coeff(1))
                                + (d0.coeff(0) + d0.coeff(1) + di.coeff(0)) * &a0;
                            for j in 0..3 {
                                s -= (&p[j] - &a0) / (&q[j] - r(1, 1));
                            }
                            s
                        }
                        _ => {
                            common - r(2, 1) * cross + ct(2) - (d0.coeff(0) + d1.coeff(0) + d1.coeff(1)) * &a0
                                + (&q[0] + &q[1] + &q[2]) * &a0
                        }
                    };
                    let closed = body / (&a0 - &b0);
                    out.push((red.theta_pm(sign == Sign::Plus, 2).unwrap(), closed));
                }
            }
            return out;
        }
    }
}


#[test]
fn double_pole_hamiltonians_match_closed_forms() {
    for seed in 0..4 {
        for (computed, closed) in closed_forms::sides(seed) {
            assert_eq!(computed, closed, "seed {seed}");
        }
    }
}

fn p_at(inst: &Instance<Rational>, q: &Rational) -> Rational {
    crate::connection::normal::p_poly(&inst.sing).eval(q)
}

#[test]
fn eta_coordinates_round_trip() {
    for seed in 0..6 {
        let inst = instance(seed, 4 + seed as usize % 3);
        let eta = eta_from_p(&inst.sing, &inst.darboux).unwrap();
        let q: Vec<Rational> = inst.darboux.iter().map(|d| d.q.clone()).collect();
        let p = p_from_eta(&inst.sing, &q, &eta).unwrap();
        assert!(p.iter().zip(&inst.darboux).all(|(a, d)| *a == d.p));
    }
    let mut inst = instance(1, 5);
    inst.darboux[0].q = rat(0, 1);
    assert!(matches!(eta_from_p(&inst.sing, &inst.darboux), Err(Error::PoleCollision(_))));
}

#[test]
fn eta_on_double_poles() {
    use crate::connection::sample::double_poles_instance;
    let th = [
        [r(1, 2), r(-2, 3), r(3, 1), r(1, 5)],
        [r(2, 1), r(5, 7), r(-1, 3), r(1, 1)],
        [r(-3, 2), r(1, 4), r(2, 9), r(0, 1)],
    ];
    let inst = double_poles_instance(th, [(r(2, 1), r(1, 3)), (r(-1, 2), r(4, 1)), (r(3, 5), r(-2, 1))]);
    let cd = crate::connection::build_cd(&inst.sing).unwrap();
    let eta = eta_from_p(&inst.sing, &inst.darboux).unwrap();
    for (j, dp) in inst.darboux.iter().enumerate() {
        let q = &dp.q;
        let q1 = q - r(1, 1);
        let want = &dp.p / (q * q * &q1 * &q1)
            - (cd[0].d.coeff(0) + cd[0].d.coeff(1) * q) / (q * q)
            - (cd[1].d.coeff(0) + cd[1].d.coeff(1) * &q1) / (&q1 * &q1)
            - cd[2].d.coeff(0);
        assert_eq!(eta[j], want);
    }
}

#[test]
fn fiber_form_is_canonical() {
    for (seed, n) in [(1u64, 4usize), (2, 5), (3, 6), (4, 5)] {
        let inst = instance(seed, n);
        let dirs: Vec<TangentDirection> =
            fiber_coordinates(inst.darboux.len(), FiberChart::P).into_iter().map(TangentDirection::basis).collect();
        let m = krichever_matrix(&inst, &dirs, OmegaMode::Fiber).unwrap();
        for (a, row) in m.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                let want = if a / 2 != b / 2 || a == b {
                    r(0, 1)
                } else {
                    let w = r(1, 1) / p_at(&inst, &inst.darboux[a / 2].q);
                    if a % 2 == 1 { w } else { -w }
                };
                assert_eq!(*v, want, "seed {seed} entry ({a},{b})");
            }
        }
    }
}

fn difference(inst: &Instance<Rational>, dirs: &[TangentDirection]) -> Vec<Vec<Rational>> {
    let k = krichever_matrix(inst, dirs, OmegaMode::Extended).unwrap();
    let c = canonical_matrix(inst, dirs).unwrap();
    k.iter().zip(&c).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect()
}

#[test]
fn extended_form_differs_by_a_base_form() {
    for (seed, n) in [(5u64, 5usize), (11, 6)] {
        let inst = instance(seed, n);
        let basis = coordinate_basis(&inst, FiberChart::Eta);
        let dirs: Vec<TangentDirection> = basis.iter().map(|(_, d)| d.clone()).collect();
        let d1 = difference(&inst, &dirs);
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 1000);
        let other = Instance { sing: inst.sing.clone(), darboux: random_darboux(&mut rng, &inst.sing, 7).unwrap() };
        let d2 = difference(&other, &dirs);
        for (a, (ca, _)) in basis.iter().enumerate() {
            for (b, (cb, _)) in basis.iter().enumerate() {
                if ca.is_fiber() || cb.is_fiber() {
                    assert_eq!(d1[a][b], r(0, 1), "seed {seed} ({ca},{cb})");
                } else {
                    assert_eq!(d1[a][b], d2[a][b], "seed {seed} ({ca},{cb})");
                }
            }
        }
    }
}

#[test]
fn omega_is_bilinear_and_alternating() {
    let inst = instance(7, 5);
    let basis = coordinate_basis(&inst, FiberChart::P);
    let (c1, c2, c3) = (basis[0].0, basis[1].0, basis[basis.len() - 1].0);
    let d1 = TangentDirection::basis(c1);
    let mix = TangentDirection { chart: FiberChart::P, weights: vec![(c2, r(2, 3)), (c3, r(-5, 1))] };
    let lhs = krichever_omega(&inst, &d1, &mix, OmegaMode::Extended).unwrap();
    let rhs = r(2, 3) * krichever_omega(&inst, &d1, &TangentDirection::basis(c2), OmegaMode::Extended).unwrap()
        - r(5, 1) * krichever_omega(&inst, &d1, &TangentDirection::basis(c3), OmegaMode::Extended).unwrap();
    assert_eq!(lhs, rhs);
    assert_eq!(krichever_omega(&inst, &mix, &mix, OmegaMode::Extended).unwrap(), r(0, 1));
    assert_eq!(canonical_omega_hat(&inst, &mix, &mix).unwrap(), r(0, 1));
}

#[test]
fn frozen_and_foreign_directions_are_rejected() {
    let inst = instance(3, 6);
    for (i, pt) in inst.sing.points.iter().enumerate() {
        let frozen = match pt.kind {
            crate::connection::Kind::Ramified => Coord::ThetaRa { point: i, index: 2 * pt.order - 2 },
            _ => Coord::ThetaUn { point: i, sign: Sign::Plus, index: pt.order - 1 },
        };
        let err = lift_instance(&inst, &TangentDirection::basis(frozen)).unwrap_err();
        assert!(matches!(err, Error::NotADeformationDirection(_)), "{err:?}");
    }
    let infinity = inst.sing.inf_index().unwrap();
    if inst.sing.points[infinity].kind != crate::connection::Kind::Ramified {
        let err = lift_instance(&inst, &TangentDirection::basis(Coord::T(infinity))).unwrap_err();
        assert!(matches!(err, Error::NotADeformationDirection(_)));
    }
    let foreign = TangentDirection::basis_in(FiberChart::P, Coord::Eta(0));
    assert!(matches!(lift_instance(&inst, &foreign), Err(Error::UnknownDirection(_))));
    let base = base_coordinates(&inst.sing);
    let vertical = TangentDirection::basis(Coord::Q(0));
    let slanted = TangentDirection::basis(base[0]);
    assert!(matches!(
        krichever_omega(&inst, &vertical, &slanted, OmegaMode::Fiber),
        Err(Error::NotADeformationDirection(_))
    ));
}

#[test]
fn hamiltonian_t_is_half_residue_of_trace_square() {
    use crate::exactalg::Series;
    use crate::localform::reduce_unramified;
    let mut found = 0;
    for seed in 0..40 {
        let inst = instance(seed, 6);
        let nf = assemble_normal_form(&inst).unwrap();
        for c in base_coordinates(&inst.sing) {
            let Coord::T(i) = c else { continue };
            let red = reduce_unramified(&nf, i, None).unwrap();
            let n = red.pole_order;
            let lam = |plus: bool| {
                let v: Vec<Rational> = (0..2 * n).map(|l| red.theta_pm(plus, l).unwrap()).collect();
                Series::with_trunc(-(n as i64), v, n as i64 - 1)
            };
            let (a, b) = (lam(true), lam(false));
            let half = (&(&a * &a) + &(&b * &b)).residue().unwrap() * r(1, 2);
            assert_eq!(hamiltonian_t(&nf, &red).unwrap(), half);
            found += 1;
        }
    }
    assert!(found >= 3);
}

fn kimura(t1: Jet<Rational>, t2: Jet<Rational>, d: [(Jet<Rational>, Jet<Rational>); 2]) -> (Jet<Rational>, Jet<Rational>, Jet<Rational>, Jet<Rational>) {
    use crate::connection::sample::ramified_quintic_instance;
    use crate::exactalg::Pos;
    let inst = ramified_quintic_instance(t1, t2, d);
    let nf = assemble_normal_form(&inst).unwrap();
    let h = hamiltonians(&nf, &[Coord::ThetaRa { point: 0, index: 5 }, Coord::ThetaRa { point: 0, index: 7 }]).unwrap();
    let c = nf.local_matrix(&Pos::Inf, 2).unwrap().entry(1, 0);
    let three = Jet::constant(r(3, 1));
    let k2 = -c.coeff(0).unwrap().try_div(&three).unwrap();
    let k1 = -c.coeff(1).unwrap().try_div(&three).unwrap();
    (h[0].clone(), h[1].clone(), k1, k2)
}

#[test]
fn quintic_hamiltonians_and_their_compatibility() {
    let base = [r(2, 3), r(-5, 4), r(1, 2), r(3, 1), r(-4, 3), r(2, 5)];
    // variables t1, t2, q1, p1, q2, p2
    let at = |k: Option<usize>| {
        let v: Vec<Jet<Rational>> = base
            .iter()
            .enumerate()
            .map(|(i, x)| if Some(i) == k { Jet::variable(x.clone()) } else { Jet::constant(x.clone()) })
            .collect();
        kimura(v[0].clone(), v[1].clone(), [(v[2].clone(), v[3].clone()), (v[4].clone(), v[5].clone())])
    };
    let (h1, h2, k1, k2) = at(None);
    let (t1, t2) = (&base[0], &base[1]);
    assert_eq!(h1.v, &k1.v / r(3, 1) - t1 * t2 / r(6, 1));
    assert_eq!(h2.v, &k2.v - r(3, 4) * t1 * t1);
    let d: Vec<(Rational, Rational)> = (0..6).map(|k| { let (a, b, _, _) = at(Some(k)); (a.d * r(3, 1), b.d) }).collect();
    // η_i = -p_i: ∂/∂η_i = -∂/∂p_i
    let mut bracket = r(0, 1);
    for i in 0..2 {
        let (q, p) = (2 + 2 * i, 3 + 2 * i);
        let (f_eta, g_eta) = (-d[p].0.clone(), -d[p].1.clone());
        bracket += &f_eta * &d[q].1 - &d[q].0 * &g_eta;
    }
    assert_eq!(&d[1].0 - &d[0].1 - bracket, r(0, 1));
}

#[test]
fn extended_form_on_a_high_order_ramified_pole() {
    use crate::connection::sample::ramified_quintic_instance;
    let sing = ramified_quintic_instance(r(2, 3), r(-5, 4), [(r(1, 2), r(3, 1)), (r(-4, 3), r(2, 5))]);
    let other = ramified_quintic_instance(r(2, 3), r(-5, 4), [(r(3, 7), r(-1, 1)), (r(5, 2), r(1, 6))]);
    let basis = coordinate_basis(&sing, FiberChart::Eta);
    let dirs: Vec<TangentDirection> = basis.iter().map(|(_, d)| d.clone()).collect();
    let (d1, d2) = (difference(&sing, &dirs), difference(&other, &dirs));
    for (a, (ca, _)) in basis.iter().enumerate() {
        for (b, (cb, _)) in basis.iter().enumerate() {
            if ca.is_fiber() || cb.is_fiber() {
                assert_eq!(d1[a][b], r(0, 1), "({ca},{cb})");
            } else {
                assert_eq!(d1[a][b], d2[a][b], "({ca},{cb})");
            }
        }
    }
}
