//! The residue 2-form on the fiber and on the extended space.

use isomono::connection::io::InstanceFile;
use isomono::exactalg::format_rational;
use isomono::symplectic::{
    canonical_matrix, coordinate_basis, fiber_coordinates, krichever_matrix, FiberChart, OmegaMode, TangentDirection,
};

pub fn run() -> anyhow::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/instances/double_poles.json");
    let inst = InstanceFile::from_json(&std::fs::read_to_string(path)?)?.to_instance()?;

    let coords = fiber_coordinates(inst.darboux.len(), FiberChart::P);
    let dirs: Vec<_> = coords.iter().map(|c| TangentDirection::basis_in(FiberChart::P, *c)).collect();
    let omega = krichever_matrix(&inst, &dirs, OmegaMode::Fiber)?;
    println!("fiber form on {}", coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
    for row in &omega {
        println!("  {}", row.iter().map(|v| format!("{:>8}", format_rational(v))).collect::<String>());
    }
    assert_eq!(omega, canonical_matrix(&inst, &dirs)?);

    let basis = coordinate_basis(&inst, FiberChart::Eta);
    let dirs: Vec<_> = basis.iter().map(|(_, d)| d.clone()).collect();
    let full = krichever_matrix(&inst, &dirs, OmegaMode::Extended)?;
    let canon = canonical_matrix(&inst, &dirs)?;
    println!("extended form minus its canonical part:");
    for (a, (ca, _)) in basis.iter().enumerate() {
        for (b, (cb, _)) in basis.iter().enumerate().skip(a + 1) {
            let d = &full[a][b] - &canon[a][b];
            if d != num_zero() {
                println!("  ({ca}, {cb}): {}", format_rational(&d));
            }
        }
    }
    Ok(())
}

fn num_zero() -> isomono::exactalg::Rational {
    isomono::exactalg::rat(0, 1)
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
