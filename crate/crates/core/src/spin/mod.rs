//! Exact diagonalization of transverse-field Ising chains.
//!
//! Basis convention: site `j` of an `L`-site register is bit `L - 1 - j` of the
//! basis index, and bit value 0 is spin up (`sigma^z = +1`). Reduced density
//! matrices keep the same convention over their own, sorted, site list.

mod entanglement;
mod hamiltonian;
mod otoc;
mod state;

pub use entanglement::{
    entanglement_entropy, logarithmic_negativity, mutual_information, partial_transpose,
    reduced_density_matrix, von_neumann_entropy,
};
pub use hamiltonian::{
    build_spin_hamiltonian, IsingParams, LocalOperator, Pauli, SpinHamiltonian, MAX_SITES,
};
pub use otoc::{otoc, OtocSeries, OtocState};
pub use state::{
    evolve_density, evolve_state, operator_quench, thermal_density_matrix, DensityMatrix,
    ManyBodyState, SpinState,
};

/// Bit of the basis index holding `site` in a register of `n_sites`.
#[inline]
pub(crate) fn site_bit(n_sites: usize, site: usize) -> usize {
    1 << (n_sites - 1 - site)
}
