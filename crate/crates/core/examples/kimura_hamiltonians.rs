//! One ramified pole of order five at infinity: the two Hamiltonians, the
//! apparent constants and the compatibility of the two flows.

use isomono::cli::reproduce::{kimura_compatibility, kimura_constants, kimura_hamiltonians, reproduce_kimura};
use isomono::connection::assemble_normal_form;
use isomono::connection::sample::ramified_quintic_instance;
use isomono::exactalg::{format_rational, rat};

pub fn run() -> anyhow::Result<()> {
    let (t1, t2) = (rat(2, 3), rat(-5, 4));
    let inst = ramified_quintic_instance(t1.clone(), t2.clone(), [(rat(1, 2), rat(3, 1)), (rat(-4, 3), rat(2, 5))]);
    let nf = assemble_normal_form(&inst)?;
    let (k1, k2) = kimura_constants(&nf)?;
    let (h1, h2) = kimura_hamiltonians(&nf)?;
    println!("K1 = {}, K2 = {}", format_rational(&k1), format_rational(&k2));
    println!("H1 = {}  (K1/3 - t1 t2/6 = {})", format_rational(&h1), format_rational(&(&k1 / rat(3, 1) - &t1 * &t2 / rat(6, 1))));
    println!("H2 = {}  (K2 - 3 t1^2/4 = {})", format_rational(&h2), format_rational(&(&k2 - rat(3, 4) * &t1 * &t1)));

    let vars = [t1, t2, rat(1, 2), rat(3, 1), rat(-4, 3), rat(2, 5)];
    println!("compatibility defect {}", format_rational(&kimura_compatibility(&vars)?));

    let report = reproduce_kimura(11, 3)?;
    println!("3 random samples, max discrepancy {}", report.max_discrepancy);
    assert!(report.ok);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
