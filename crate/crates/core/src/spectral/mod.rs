//! Characteristic function, spectral moments, exact diagonalization of small
//! local Hamiltonians and cluster contractions for large ones.

mod cluster;
mod exact;
mod moments;
mod phi;

pub use cluster::{block_moments, restricted_sigma2, sigma2_local_contraction, BlockMoments, MAX_CLUSTER_DIM};
pub use exact::{assemble_dense, exact_spectrum_local, MAX_EXACT_DIM};
pub use moments::{sigma2_from_spectrum, MomentReport};
pub use phi::{phi_direct, phi_solvable_abs};
