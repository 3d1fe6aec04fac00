use num_complex::Complex;

use crate::model::{SolvableSpectrumSpec, SpectrumTable};
use crate::scalar::{cis, Real};

/// `phi(t) = (1/d) sum_k e^{i t E_k}`.
pub fn phi_direct<T: Real>(spectrum: &SpectrumTable<T>, t: T) -> Complex<T> {
    if t == T::zero() {
        return Complex::new(T::one(), T::zero());
    }
    let sum = spectrum
        .energies()
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, &e| acc + cis(t * e));
    sum / Complex::new(T::lit(spectrum.dim() as f64), T::zero())
}

/// `|phi(t)| = prod_k |cos(eps_k t / 2)|` for a spectrum `sum_k eps_k n_k`.
pub fn phi_solvable_abs<T: Real>(spec: &SolvableSpectrumSpec<T>, t: T) -> T {
    let half = T::lit(0.5);
    spec.epsilons()
        .iter()
        .fold(T::one(), |acc, &e| acc * (e * t * half).cos().abs())
}
