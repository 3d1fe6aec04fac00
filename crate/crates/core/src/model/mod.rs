//! Domain types shared by the whole crate: spectra, subsystem splits, density
//! matrices, lattices and local Hamiltonians.

mod density;
mod lattice;
mod local;
pub mod operator;
mod spectrum;
mod split;

pub use density::{
    basis_vector, max_abs_diff, normalized, pure_product_state, separable_mixture, DensityMatrix,
    SeparableComponent,
};
pub use lattice::LatticeSpec;
pub use local::{random_local_hamiltonian, random_traceless_hermitian, LocalHamiltonianSpec, TermInput};
pub use operator::LocalOp;
pub use spectrum::{spectrum_from_solvable, Provenance, SolvableSpectrumSpec, SpectrumTable, MAX_SOLVABLE_MODES};
pub use split::SubsystemSplit;
