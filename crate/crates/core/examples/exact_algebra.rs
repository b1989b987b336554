//! Exact polynomials, rational functions, Laurent expansions and jets.

use isomono::exactalg::{format_rational, laurent_expand, rat, residue_at, solve_linear, Jet, Poly, Pos, RatFunc, Scalar};

fn show(p: &Poly<isomono::exactalg::Rational>) -> String {
    p.coeffs().iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

pub fn run() -> anyhow::Result<()> {
    // (x - 1/2)(x + 3)
    let p = Poly::from_roots(&[rat(1, 2), rat(-3, 1)]);
    println!("p = [{}]", show(&p));
    let (q, r) = p.divrem(&Poly::linear(&rat(2, 1)))?;
    println!("p / (x - 2): quotient [{}], remainder [{}]", show(&q), show(&r));

    let f = RatFunc::new(Poly::one(), Poly::from_roots(&[rat(0, 1), rat(0, 1), rat(1, 1)]))?;
    let at0 = laurent_expand(&f, &Pos::Finite(rat(0, 1)), 2)?;
    let coeffs: Vec<String> = (at0.start()..=2).map(|k| format_rational(&at0.coeff(k).unwrap())).collect();
    println!("1/(x^2 (x-1)) at 0: {} from x^{}", coeffs.join(", "), at0.start());
    let residues: Vec<_> = [Pos::Finite(rat(0, 1)), Pos::Finite(rat(1, 1)), Pos::Inf]
        .iter()
        .map(|pos| residue_at(&f, pos))
        .collect::<Result<_, _>>()?;
    let total = residues.iter().fold(rat(0, 1), |a, b| a + b);
    println!("residues {:?}, sum {}", residues.iter().map(format_rational).collect::<Vec<_>>(), format_rational(&total));
    assert!(total.is_zero());

    // exact derivative of x^3 / (1 + x) at x = 2 through a jet
    let x = Jet::variable(rat(2, 1));
    let y = (x.clone() * x.clone() * x.clone()).try_div(&(Jet::constant(rat(1, 1)) + x))?;
    println!("f(2) = {}, f'(2) = {}", format_rational(&y.v), format_rational(&y.d));

    let a = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 3), rat(-1, 1)]];
    let sol = solve_linear(&a, &[rat(1, 1), rat(0, 1)])?;
    println!("solution {:?}, nullity {}", sol.x.iter().map(format_rational).collect::<Vec<_>>(), sol.nullity);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
