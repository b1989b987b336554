//! Formal reductions at an unramified and at a ramified pole.

use isomono::connection::io::InstanceFile;
use isomono::connection::{assemble_normal_form, Theta};
use isomono::exactalg::{format_rational, Rational};
use isomono::localform::{reduce_point, zeta_diagonal, ReduceOptions};

fn load(name: &str) -> anyhow::Result<isomono::connection::Instance<Rational>> {
    let path = format!("{}/instances/{name}", env!("CARGO_MANIFEST_DIR"));
    Ok(InstanceFile::from_json(&std::fs::read_to_string(path)?)?.to_instance()?)
}

fn list(v: &[Rational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

pub fn run() -> anyhow::Result<()> {
    let nf = assemble_normal_form(&load("double_poles.json")?)?;
    for i in 0..nf.sing().points.len() {
        let red = reduce_point(&nf, i, &ReduceOptions::default())?;
        if let Theta::Pair { plus, minus } = red.theta_tail() {
            println!("point {i}: theta+ tail [{}], theta- tail [{}]", list(&plus), list(&minus));
        }
    }

    let nf = assemble_normal_form(&load("kimura.json")?)?;
    let red = reduce_point(&nf, 0, &ReduceOptions::default())?;
    if let Theta::Ramified(tail) = red.theta_tail() {
        println!("ramified tail [{}]", list(&tail));
    }
    let (start, diag) = zeta_diagonal(&red)?;
    println!("zeta diagonal from zeta^{start}:");
    for (k, (a, b)) in diag.iter().enumerate() {
        println!("  {:>3}: {} {}", start + k as i64, format_rational(a), format_rational(b));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
