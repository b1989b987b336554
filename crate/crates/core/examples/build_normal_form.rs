//! Builds both connection matrices from an instance file and recovers the
//! apparent singularities from the `E_1` form.

use isomono::connection::io::InstanceFile;
use isomono::connection::{apparent_data, assemble_normal_form, to_e1, validate};
use isomono::exactalg::format_rational;

pub fn run() -> anyhow::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/instances/double_poles.json");
    let inst = InstanceFile::from_json(&std::fs::read_to_string(path)?)?.to_instance()?;
    print!("{}", validate(&inst));

    let nf = assemble_normal_form(&inst)?;
    println!("P(x) = {:?}", nf.p.coeffs().iter().map(format_rational).collect::<Vec<_>>());
    println!("C~ = {:?}", nf.ctilde.coeffs().iter().map(format_rational).collect::<Vec<_>>());

    let e1 = to_e1(&nf)?;
    println!("Q_1 = {:?}", e1.q1.coeffs().iter().map(format_rational).collect::<Vec<_>>());
    for d in apparent_data(&e1)? {
        println!("apparent point q = {}, p = {}", format_rational(&d.q), format_rational(&d.p));
        assert!(inst.darboux.contains(&d));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
