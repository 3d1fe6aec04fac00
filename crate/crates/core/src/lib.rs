//! Quantum quenches under Haar-randomized Hamiltonians with a fixed spectrum,
//! with explicit, checkable equilibration and thermalization bounds.
//!
//! The numerical core is generic over the real scalar ([`Real`], implemented
//! for `f32` and `f64`); `*64` aliases fix the common `f64` case.

pub mod bounds;
pub mod dynamics;
pub mod error;
pub mod haar;
pub mod model;
pub mod montecarlo;
pub mod partition;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::{CMatrix, CVector, Cplx, Real};

pub type DensityMatrix64 = model::DensityMatrix<f64>;
pub type DensityMatrix32 = model::DensityMatrix<f32>;
pub type SpectrumTable64 = model::SpectrumTable<f64>;
pub type SpectrumTable32 = model::SpectrumTable<f32>;
pub type SolvableSpectrumSpec64 = model::SolvableSpectrumSpec<f64>;
pub type LocalHamiltonianSpec64 = model::LocalHamiltonianSpec<f64>;
pub type EigenHamiltonian64 = haar::EigenHamiltonian<f64>;
pub type EigenHamiltonian32 = haar::EigenHamiltonian<f32>;
pub type CMatrix64 = CMatrix<f64>;
pub type CVector64 = CVector<f64>;
