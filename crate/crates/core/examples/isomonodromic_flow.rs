//! Integrates an isomonodromic flow and watches monodromy traces stay put.

use isomono::connection::{to_e1, assemble_normal_form};
use isomono::connection::sample::{random_darboux, random_singularity_data, PointSpec};
use isomono::connection::{Instance, Kind};
use isomono::exactalg::{rat, Pos, Scalar};
use isomono::isoflow::{flow, instance_at, loop_around, monodromy_trace, observed_order, DeformationDirection, FloatState, FlowOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run() -> anyhow::Result<()> {
    let layout = [
        PointSpec { pos: Pos::Inf, kind: Kind::Unramified, order: 2 },
        PointSpec { pos: Pos::Finite(rat(0, 1)), kind: Kind::Regular, order: 1 },
        PointSpec { pos: Pos::Finite(rat(1, 1)), kind: Kind::Regular, order: 1 },
        PointSpec { pos: Pos::Finite(rat(3, 1)), kind: Kind::Regular, order: 1 },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sing = random_singularity_data(&mut rng, &layout, 5)?;
    let darboux = random_darboux(&mut rng, &sing, 5)?;
    let inst = Instance { sing, darboux }.map(|r| r.approx());

    let dir: DeformationDirection = "theta_un:0:0:+".parse()?;
    let start = FloatState::of_instance(&inst, dir)?;
    let traj = flow(&inst.sing, &start, dir, &FlowOptions { h: 1e-3, steps: 100, ..FlowOptions::default() })?;

    let trace = |st: &FloatState| -> anyhow::Result<num_complex::Complex64> {
        let at = instance_at(&inst.sing, dir, st)?;
        let e1 = to_e1(&assemble_normal_form(&at)?)?;
        Ok(monodromy_trace(&e1, &loop_around(&at.sing, &[1])?, 1e-9)?)
    };
    for st in traj.iter().step_by(25) {
        println!("s = {:.3}  q = {:?}  trace around 0 = {:.10}", st.s, st.q, trace(st)?);
    }
    println!("observed RK4 order {:.3}", observed_order(&inst.sing, &start, dir, 0.01, 10)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
