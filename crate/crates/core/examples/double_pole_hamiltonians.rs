//! Three unramified double poles at 0, 1 and infinity: the Hamiltonians of
//! the spectral directions against their closed forms.

use isomono::cli::reproduce::reproduce_double_poles;

pub fn run() -> anyhow::Result<()> {
    let report = reproduce_double_poles(7, 4)?;
    for (k, s) in report.samples.iter().enumerate() {
        println!("sample {k}");
        for c in &s.comparisons {
            println!("  {:<14} {} = {}", c.name, c.computed, c.closed_form);
        }
    }
    println!("max discrepancy {}", report.max_discrepancy);
    assert!(report.ok);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
