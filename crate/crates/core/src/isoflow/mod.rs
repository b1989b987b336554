//! Isomonodromic vector fields as Hamiltonian systems, exact certification
//! of the integrability condition, float flows and monodromy traces.

pub mod field;
pub mod integrate;
pub mod monodromy;
pub mod upsilon;

#[cfg(test)]
mod tests;

pub use field::{check_deformation, hamiltonian, state_of, vector_field, DeformationDirection, Velocity};
pub use integrate::{data_at, flow, instance_at, observed_order, FloatState, FlowOptions};
pub use monodromy::{circle, eval_connection, loop_around, loop_transport, monodromy_trace, transport, Segment};
pub use upsilon::{
    apply_operator, certify, delta_omega, delta_omega_along, isomonodromic_direction, residual, solve_upsilon,
    Certificate, DeltaOmega, Upsilon,
};
