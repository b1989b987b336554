use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::connection::sample::{random_instance, random_layout, ramified_quintic_instance, PointSpec};
use crate::connection::{to_e1, assemble_normal_form, E1Connection, Instance, Kind, Sign};
use crate::error::Error;
use crate::exactalg::{rat, Poly, Pos, Rational, Scalar};
use crate::symplectic::{Coord, TangentDirection};

fn instance(seed: u64, n: usize) -> Instance<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let layout = random_layout(&mut rng, n);
    random_instance(&mut rng, &layout, 7).unwrap()
}

fn floats(inst: &Instance<Rational>) -> Instance<f64> {
    inst.map(|r| r.approx())
}

/// Regular points at 0, 1, 3 and an unramified double pole at infinity.
fn mixed_instance(seed: u64) -> Instance<Rational> {
    let layout = vec![
        PointSpec { pos: Pos::Inf, kind: Kind::Unramified, order: 2 },
        PointSpec { pos: Pos::Finite(rat(0, 1)), kind: Kind::Regular, order: 1 },
        PointSpec { pos: Pos::Finite(rat(1, 1)), kind: Kind::Regular, order: 1 },
        PointSpec { pos: Pos::Finite(rat(3, 1)), kind: Kind::Regular, order: 1 },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_instance(&mut rng, &layout, 5).unwrap()
}

#[test]
fn directions_parse_and_print() {
    for s in ["theta_un:2:0:+", "theta_un:0:1:-", "theta_ra:1:3", "t:4"] {
        let d: DeformationDirection = s.parse().unwrap();
        assert_eq!(d.to_string(), s);
    }
    for s in ["theta_un:2:0", "theta_un:a:0:+", "theta_ra:1", "x:1", "t:1:2", "theta_un:1:1:*"] {
        assert!(matches!(s.parse::<DeformationDirection>(), Err(Error::Parse(_))), "{s}");
    }
}

#[test]
fn frozen_directions_are_rejected() {
    let kim = ramified_quintic_instance(rat(1, 2), rat(1, 3), [(rat(1, 1), rat(2, 1)), (rat(-1, 1), rat(1, 1))]);
    let not_dir = |inst: &Instance<Rational>, d: DeformationDirection| {
        matches!(check_deformation(&inst.sing, d), Err(Error::NotADeformationDirection(_)))
    };
    assert!(not_dir(&kim, DeformationDirection::Position(0)));
    assert!(not_dir(&kim, DeformationDirection::ThetaRa { point: 0, index: 8 }));
    assert!(not_dir(&kim, DeformationDirection::ThetaUn { point: 0, index: 0, sign: Sign::Plus }));
    assert!(check_deformation(&kim.sing, DeformationDirection::ThetaRa { point: 0, index: 7 }).is_ok());
    let mixed = mixed_instance(1);
    assert!(not_dir(&mixed, DeformationDirection::Position(0)));
    assert!(not_dir(&mixed, DeformationDirection::Position(1)));
    assert!(not_dir(&mixed, DeformationDirection::ThetaUn { point: 0, index: 1, sign: Sign::Minus }));
    assert!(not_dir(&mixed, DeformationDirection::ThetaUn { point: 1, index: 0, sign: Sign::Minus }));
    assert!(check_deformation(&mixed.sing, DeformationDirection::Position(3)).is_ok());
    assert!(matches!(
        check_deformation(&mixed.sing, DeformationDirection::Position(7)),
        Err(Error::BadIndex(_))
    ));
    let (q, eta) = state_of(&mixed).unwrap();
    assert!(vector_field(&mixed.sing, &q, &eta, DeformationDirection::Position(1)).is_err());
}

#[test]
fn velocity_matches_finite_differences_of_the_hamiltonian() {
    for seed in 0..3 {
        let inst = floats(&instance(seed, 5));
        let (q, eta) = state_of(&inst).unwrap();
        for dir in DeformationDirection::all(&instance(seed, 5).sing) {
            let v = vector_field(&inst.sing, &q, &eta, dir).unwrap();
            let eps = 1e-5;
            for j in 0..q.len() {
                let h_at = |dq: f64, de: f64| {
                    let mut q2 = q.clone();
                    let mut e2 = eta.clone();
                    q2[j] += dq;
                    e2[j] += de;
                    hamiltonian(&inst.sing, &q2, &e2, dir).unwrap()
                };
                let dh_dq = (h_at(eps, 0.0) - h_at(-eps, 0.0)) / (2.0 * eps);
                let dh_deta = (h_at(0.0, eps) - h_at(0.0, -eps)) / (2.0 * eps);
                let scale = 1.0 + dh_dq.abs().max(dh_deta.abs());
                assert!((v.deta[j] - dh_dq).abs() <= 1e-6 * scale, "seed {seed} {dir}: {} vs {dh_dq}", v.deta[j]);
                assert!((v.dq[j] + dh_deta).abs() <= 1e-6 * scale, "seed {seed} {dir}: {} vs {dh_deta}", v.dq[j]);
            }
        }
    }
}

#[test]
fn exact_and_float_fields_agree() {
    let inst = instance(11, 5);
    let (q, eta) = state_of(&inst).unwrap();
    let f = floats(&inst);
    let (qf, ef) = state_of(&f).unwrap();
    for dir in DeformationDirection::all(&inst.sing) {
        let exact = vector_field(&inst.sing, &q, &eta, dir).unwrap();
        let approx = vector_field(&f.sing, &qf, &ef, dir).unwrap();
        for (a, b) in exact.dq.iter().chain(&exact.deta).zip(approx.dq.iter().chain(&approx.deta)) {
            assert!((a.approx() - b).abs() <= 1e-8 * (1.0 + b.abs()), "{dir}");
        }
    }
}

#[test]
fn trace_of_the_variation_has_no_total_residue() {
    for seed in 0..4 {
        let inst = instance(seed, 5);
        for dir in DeformationDirection::all(&inst.sing) {
            let d = delta_omega(&inst, dir).unwrap();
            assert!(Scalar::is_zero(&d.trace_residue_sum().unwrap()), "seed {seed} {dir}");
        }
    }
}

#[test]
fn integrability_holds_along_every_direction() {
    for seed in 0..4 {
        let inst = instance(100 + seed, 6);
        for cert in certify(&inst) {
            let up = cert.result.as_ref().unwrap_or_else(|e| panic!("seed {seed} {}: {e}", cert.direction));
            let d = delta_omega(&inst, cert.direction).unwrap();
            assert!(residual(&d, up).iter().flatten().all(|p| p.is_zero()));
        }
    }
}

#[test]
fn fiber_only_perturbations_are_not_integrable() {
    for seed in 0..3 {
        let inst = instance(200 + seed, 5);
        let d = delta_omega_along(&inst, &TangentDirection::basis(Coord::P(0))).unwrap();
        assert!(matches!(solve_upsilon(&inst, &d), Err(Error::NoSolution { .. })), "seed {seed}");
    }
}

#[test]
fn planted_upsilon_is_recovered() {
    let inst = instance(7, 5);
    let e1 = to_e1(&assemble_normal_form(&inst).unwrap()).unwrap();
    let mut b = Poly::one();
    for (_, t, n) in inst.sing.finite() {
        b = &b * &Poly::linear(t).pow(n as u32 - 1);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut entry = |deg: i64| {
        Poly::new((0..=deg).map(|_| crate::connection::sample::small_rational(&mut rng, 5)).collect())
    };
    let db = b.degree();
    let ninf = inst.sing.inf().unwrap().order as i64;
    let n0 = [[entry(db + ninf - 1), entry(db + ninf - 2)], [entry(db + ninf), entry(db + ninf - 1)]];
    let image = apply_operator(&e1, &n0, &b);
    let b2 = &b * &b;
    let numer = [
        [image[0][0].div_exact(&b2).unwrap(), image[0][1].div_exact(&b2).unwrap()],
        [image[1][0].div_exact(&b2).unwrap(), image[1][1].div_exact(&b2).unwrap()],
    ];
    let delta = DeltaOmega {
        direction: TangentDirection { chart: crate::symplectic::FiberChart::P, weights: vec![] },
        conn: e1,
        numer,
        poles: inst.sing.finite().map(|(_, t, _)| t.clone()).collect(),
    };
    let up = solve_upsilon(&inst, &delta).unwrap();
    assert_eq!(up.budget_increase, 0);
    assert!(residual(&delta, &up).iter().flatten().all(|p| p.is_zero()));
}

#[test]
fn empty_flow_and_margin_violations() {
    let inst = mixed_instance(2);
    let f = floats(&inst);
    let dir = DeformationDirection::ThetaUn { point: 0, index: 0, sign: Sign::Plus };
    let start = FloatState::of_instance(&f, dir).unwrap();
    let traj = flow(&f.sing, &start, dir, &FlowOptions { steps: 0, ..FlowOptions::default() }).unwrap();
    assert_eq!(traj, vec![start.clone()]);
    let traj = flow(&f.sing, &start, dir, &FlowOptions { steps: 5, h: 1e-3, margin: 1e-6 }).unwrap();
    assert_eq!(traj.len(), 6);
    assert!((traj[5].s - start.s - 5e-3).abs() < 1e-12);
    let huge = FlowOptions { steps: 5, h: 1e-3, margin: 1e3 };
    assert!(matches!(flow(&f.sing, &start, dir, &huge), Err(Error::FlowSingular { step: 0, .. })));
}

fn diagonal_model(a: f64, b: f64) -> E1Connection<f64> {
    E1Connection {
        p: Poly::new(vec![0.0, 1.0]),
        m: [[Poly::constant(a), Poly::zero()], [Poly::zero(), Poly::constant(b)]],
        q1: Poly::one(),
        q2: Poly::zero(),
        n: 2,
        n_inf: 1,
    }
}

#[test]
fn diagonal_model_traces() {
    let (a, b) = (0.3, -0.45);
    let conn = diagonal_model(a, b);
    let rtol = 1e-10;
    let tr = monodromy_trace(&conn, &circle(Complex64::new(0.0, 0.0), 0.7), rtol).unwrap();
    let i2pi = Complex64::new(0.0, -std::f64::consts::TAU);
    let expect = (i2pi * a).exp() + (i2pi * b).exp();
    assert!((tr - expect).norm() < 1e-8, "{tr} vs {expect}");
    let empty = monodromy_trace(&conn, &circle(Complex64::new(2.0, 0.5), 0.5), rtol).unwrap();
    assert!((empty - Complex64::new(2.0, 0.0)).norm() <= 10.0 * rtol, "{empty}");
}

#[test]
fn rk4_converges_with_order_four() {
    let kim = ramified_quintic_instance(rat(1, 2), rat(1, 3), [(rat(1, 1), rat(2, 1)), (rat(-1, 1), rat(1, 1))]);
    let f = floats(&kim);
    let dir = DeformationDirection::ThetaRa { point: 0, index: 5 };
    let start = FloatState::of_instance(&f, dir).unwrap();
    let order = observed_order(&f.sing, &start, dir, 0.02, 10).unwrap();
    assert!((3.7..=4.3).contains(&order), "order {order}");
}

#[test]
fn monodromy_is_constant_along_the_flow() {
    let inst = mixed_instance(5);
    let f = floats(&inst);
    let dir = DeformationDirection::ThetaUn { point: 0, index: 0, sign: Sign::Plus };
    let start = FloatState::of_instance(&f, dir).unwrap();
    let traj = flow(&f.sing, &start, dir, &FlowOptions { h: 1e-3, steps: 100, margin: 1e-6 }).unwrap();
    let rtol = 1e-9;
    let traces = |st: &FloatState| {
        let inst = instance_at(&f.sing, dir, st).unwrap();
        let conn = to_e1(&assemble_normal_form(&inst).unwrap()).unwrap();
        [vec![1], vec![3], vec![1, 2], vec![2, 3]]
            .iter()
            .map(|pts| monodromy_trace(&conn, &loop_around(&inst.sing, pts).unwrap(), rtol).unwrap())
            .collect::<Vec<_>>()
    };
    let (a, b) = (traces(&traj[0]), traces(traj.last().unwrap()));
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).norm() <= 1e-5 * x.norm().max(1.0), "{x} vs {y}");
    }
}

#[test]
fn spectral_data_moves_only_along_its_own_coordinate() {
    use crate::exactalg::jet::deriv_of;
    use crate::localform::{reduce_point, ReduceOptions};
    use crate::symplectic::{base_coordinates, lift_instance};
    for seed in 0..3 {
        let inst = instance(300 + seed, 5);
        for dir in DeformationDirection::all(&inst.sing) {
            let lifted = lift_instance(&inst, &isomonodromic_direction(&inst, dir).unwrap()).unwrap();
            let nf = assemble_normal_form(&lifted).unwrap();
            for (i, pt) in inst.sing.points.iter().enumerate() {
                let red = reduce_point(&nf, i, &ReduceOptions::default()).unwrap_or_else(|e| panic!("seed {seed} {dir} point {i} {:?}: {e}", pt.kind));
                let n = pt.order;
                let mut checks: Vec<(Coord, crate::exactalg::Jet<Rational>)> = Vec::new();
                if pt.kind == Kind::Ramified {
                    for l in 0..=2 * n - 2 {
                        checks.push((Coord::ThetaRa { point: i, index: l }, red.theta_ra(l).unwrap()));
                    }
                } else {
                    for sign in [Sign::Plus, Sign::Minus] {
                        for l in 0..n {
                            let th = red.theta_pm(sign == Sign::Plus, l).unwrap();
                            checks.push((Coord::ThetaUn { point: i, sign, index: l }, th));
                        }
                    }
                }
                for (c, th) in checks {
                    let expect = if c == dir.coord() { rat(1, 1) } else { rat(0, 1) };
                    assert_eq!(deriv_of(&th), expect, "seed {seed} {dir} {c}");
                }
            }
            assert!(base_coordinates(&inst.sing).contains(&dir.coord()));
        }
    }
}
