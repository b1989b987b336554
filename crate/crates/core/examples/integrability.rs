//! Exact integrability certificates along every deformation direction, and a
//! perturbation that is not isomonodromic.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use isomono::connection::sample::{random_instance, random_layout};
use isomono::isoflow::{certify, delta_omega_along, solve_upsilon};
use isomono::symplectic::{Coord, TangentDirection};

pub fn run() -> anyhow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let layout = random_layout(&mut rng, 6);
    let inst = random_instance(&mut rng, &layout, 7)?;
    for p in &inst.sing.points {
        println!("pole {} order {} {}", isomono::connection::pos_label(&p.pos), p.order, p.kind.tag());
    }
    for c in certify(&inst) {
        match &c.result {
            Ok(u) => println!("{:<16} Upsilon found: {} unknowns, nullity {}", c.direction.to_string(), u.unknowns, u.nullity),
            Err(e) => println!("{:<16} {e}", c.direction.to_string()),
        }
    }
    if !inst.darboux.is_empty() {
        let push = delta_omega_along(&inst, &TangentDirection::basis(Coord::P(0)))?;
        println!("moving p_0 alone: {:?}", solve_upsilon(&inst, &push).map(|_| ()).unwrap_err());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
