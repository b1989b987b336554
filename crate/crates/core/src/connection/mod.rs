//! Global normal form on `E_{n-2}`, its transform to `E_1`, and the
//! correspondence between connections and apparent-singularity coordinates.

pub mod apparent;
pub mod data;
pub mod e1;
pub mod io;
pub mod normal;
pub mod pf;
pub mod sample;

#[cfg(test)]
mod tests;

pub use apparent::{apparent_data, rational_roots};
pub use data::{
    fuchs_sum, pos_label, validate, Check, DarbouxPoint, Diagnostics, Instance, Kind, Sign, SingularPoint,
    SingularityData, Theta,
};
pub use e1::{to_e1, E1Connection};
pub use normal::{assemble_normal_form, build_cd, solve_tildec, LocalCD, NormalForm};

use crate::error::Result;
use crate::exactalg::{Poly, RatFunc, Scalar};

/// Which bundle a connection matrix lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bundle {
    E1,
    En2,
}

/// Connection matrix on the finite chart as rational functions (the `dx` stripped).
#[derive(Clone, Debug, PartialEq)]
pub struct Connection<S> {
    pub bundle: Bundle,
    pub omega0: [[RatFunc<S>; 2]; 2],
}

impl<S: Scalar> NormalForm<S> {
    pub fn connection(&self) -> Result<Connection<S>> {
        let zero = RatFunc::from_poly(Poly::zero());
        let e12 = RatFunc::new(Poly::one(), self.p.clone())?;
        Ok(Connection {
            bundle: Bundle::En2,
            omega0: [[zero, e12], [self.c0.to_ratfunc()?, self.d0.to_ratfunc()?]],
        })
    }
}

impl<S: Scalar> E1Connection<S> {
    pub fn connection(&self) -> Result<Connection<S>> {
        let f = |i: usize, j: usize| RatFunc::new(self.m[i][j].clone(), self.p.clone());
        Ok(Connection { bundle: Bundle::E1, omega0: [[f(0, 0)?, f(0, 1)?], [f(1, 0)?, f(1, 1)?]] })
    }
}
