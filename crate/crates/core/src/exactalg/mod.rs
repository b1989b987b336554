//! Exact arithmetic layer: rationals, jets, polynomials, truncated Laurent
//! series, rational functions and linear solves.

pub mod jet;
pub mod linalg;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod series;

pub use jet::{jet_lift, Construction, Jet};
pub use linalg::{solve_linear, LinearSolution};
pub use poly::Poly;
pub use ratfunc::{laurent_expand, residue_at, Pos, RatFunc};
pub use scalar::{format_rational, parse_rational, rat, Rational, Scalar};
pub use series::{Chart, Mat2, MatSeries, Series};
