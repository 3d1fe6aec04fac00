use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{LocalHamiltonianSpec, Provenance, SpectrumTable};
use crate::scalar::{CMatrix, Real};

/// Largest total dimension accepted for dense assembly and diagonalization.
pub const MAX_EXACT_DIM: usize = 1 << 14;

/// Dense `H = sum_i h_i` on the full Hilbert space.
pub fn assemble_dense<T: Real>(spec: &LocalHamiltonianSpec<T>) -> Result<CMatrix<T>> {
    let d = spec.total_dim();
    if d > MAX_EXACT_DIM as u128 {
        return Err(Error::Capacity {
            what: "Hilbert-space dimension",
            value: usize::try_from(d).unwrap_or(usize::MAX),
            limit: MAX_EXACT_DIM,
        });
    }
    let d = d as usize;
    let all: Vec<usize> = (0..spec.lattice().n_sites()).collect();
    let mut h = CMatrix::zeros(d, d);
    for (_, op) in spec.terms() {
        op.add_embedded(&all, spec.site_dims(), T::one(), &mut h);
    }
    Ok(h)
}

/// Sorted eigenvalues of the assembled Hamiltonian.
///
/// Real-symmetric Hamiltonians are diagonalized in real arithmetic.
pub fn exact_spectrum_local<T: Real>(spec: &LocalHamiltonianSpec<T>) -> Result<SpectrumTable<T>> {
    let h = assemble_dense(spec)?;
    let mut energies: Vec<T> = if spec.is_real() {
        let real = DMatrix::<T>::from_fn(h.nrows(), h.ncols(), |i, j| h[(i, j)].re);
        drop(h);
        real.symmetric_eigenvalues().iter().copied().collect()
    } else {
        h.symmetric_eigenvalues().iter().copied().collect()
    };
    energies.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    SpectrumTable::with_provenance(energies, Provenance::Diagonalized)
}
