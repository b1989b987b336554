//! Darboux and η coordinates, the Hamiltonians of the deformation
//! directions, and exact evaluation of the residue 2-forms.

mod coords;
mod hamiltonian;
mod omega;

#[cfg(test)]
mod tests;

pub use coords::{
    base_coordinates, base_value, check_direction, set_base_coordinate, eta_from_p, fiber_coordinates, lift_instance, p_from_eta, Coord, FiberChart,
    Parametrized, TangentDirection,
};
pub use hamiltonian::{hamiltonian_t, hamiltonian_theta_ramified, hamiltonian_theta_unramified, hamiltonians};
pub use omega::{
    canonical_differentials, canonical_matrix, canonical_omega_hat, coordinate_basis, krichever_matrix, krichever_omega,
    pair_variations, variation, CanonicalDifferentials, OmegaMode, Variation,
};
