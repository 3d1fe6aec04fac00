//! Haar-random unitaries and randomized Hamiltonians `U diag(E) U^dagger`.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::SpectrumTable;
use crate::scalar::{modulus, re, CMatrix, Real};

/// Master seed from which independent per-sample generators are derived.
///
/// Sample `k` draws from ChaCha stream `k` keyed by the master seed, so
/// samples can be generated in any order or concurrently and still reproduce
/// bit-identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedStream {
    master: u64,
}

/// Seed of one Monte Carlo sample: `(master, index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SampleSeed {
    pub master: u64,
    pub index: u64,
}

impl SeedStream {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    pub fn sample(&self, index: u64) -> SampleSeed {
        SampleSeed {
            master: self.master,
            index,
        }
    }

    /// Generator for auxiliary draws that are not Monte Carlo samples
    /// (random spectra, random chains), kept apart from the sample streams.
    pub fn auxiliary(&self, tag: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master ^ 0x9e37_79b9_7f4a_7c15);
        rng.set_stream(tag);
        rng
    }
}

impl SampleSeed {
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.index);
        rng
    }
}

/// Draws a Haar-distributed `d x d` unitary from `rng`.
///
/// A complex Ginibre matrix is QR-factorized and each column of `Q` is
/// multiplied by the phase of the matching diagonal entry of `R`, which makes
/// the factorization unique and the distribution of `Q` exactly Haar.
pub fn haar_unitary_from_rng<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<CMatrix<T>> {
    if d == 0 {
        return Err(Error::domain("unitary dimension must be at least 1"));
    }
    let scale = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let ginibre = CMatrix::<T>::from_fn(d, d, |_, _| {
        let a = T::standard_normal(rng);
        let b = T::standard_normal(rng);
        Complex::new(a * scale, b * scale)
    });
    let qr = ginibre.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let m = modulus(rjj);
        // exact zeros have probability zero; leave the column alone if one appears
        if m > T::zero() {
            let phase = rjj / re(m);
            for z in q.column_mut(j).iter_mut() {
                *z *= phase;
            }
        }
    }
    Ok(q)
}

pub fn sample_haar_unitary<T: Real>(d: usize, seed: &SampleSeed) -> Result<CMatrix<T>> {
    haar_unitary_from_rng(d, &mut seed.rng())
}

/// `max |U^dagger U - 1|` over entries.
pub fn unitarity_defect<T: Real>(u: &CMatrix<T>) -> f64 {
    let p = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            let target = if i == j { T::one() } else { T::zero() };
            worst = worst.max(modulus(p[(i, j)] - re(target)).as_f64());
        }
    }
    worst
}

/// `H = U diag(E) U^dagger`, stored as the pair `(U, E)`.
#[derive(Debug, Clone)]
pub struct EigenHamiltonian<T: Real> {
    u: CMatrix<T>,
    spectrum: SpectrumTable<T>,
}

impl<T: Real> EigenHamiltonian<T> {
    /// Checks that `u` is unitary (to `T::STRUCT_TOL`) and matches the spectrum size.
    pub fn new(u: CMatrix<T>, spectrum: SpectrumTable<T>) -> Result<Self> {
        if !u.is_square() || u.nrows() != spectrum.dim() {
            return Err(Error::domain(format!(
                "unitary is {}x{}, spectrum has {} entries",
                u.nrows(),
                u.ncols(),
                spectrum.dim()
            )));
        }
        let defect = unitarity_defect(&u);
        if defect > T::STRUCT_TOL {
            return Err(Error::validation(format!("matrix is not unitary (defect {defect:.3e})")));
        }
        Ok(Self { u, spectrum })
    }

    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    pub fn unitary(&self) -> &CMatrix<T> {
        &self.u
    }

    pub fn spectrum(&self) -> &SpectrumTable<T> {
        &self.spectrum
    }

    pub fn energies(&self) -> &[T] {
        self.spectrum.energies()
    }

    /// Dense `U diag(E) U^dagger`.
    pub fn materialize(&self) -> CMatrix<T> {
        let mut ue = self.u.clone();
        for (j, &e) in self.spectrum.energies().iter().enumerate() {
            for i in 0..ue.nrows() {
                ue[(i, j)] *= re(e);
            }
        }
        ue * self.u.adjoint()
    }
}

/// Pairs a fresh Haar unitary with a fixed spectrum.
pub fn randomized_hamiltonian<T: Real>(spectrum: &SpectrumTable<T>, seed: &SampleSeed) -> Result<EigenHamiltonian<T>> {
    let u = sample_haar_unitary(spectrum.dim(), seed)?;
    Ok(EigenHamiltonian {
        u,
        spectrum: spectrum.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::norm_sqr;

    #[test]
    fn zero_dimension_is_rejected() {
        assert!(sample_haar_unitary::<f64>(0, &SeedStream::new(1).sample(0)).is_err());
    }

    #[test]
    fn circle_case_has_unit_modulus() {
        let seeds = SeedStream::new(5);
        let mut phases = Vec::new();
        for k in 0..2000 {
            let u = sample_haar_unitary::<f64>(1, &seeds.sample(k)).unwrap();
            assert!((modulus(u[(0, 0)]) - 1.0).abs() < 1e-14);
            phases.push(u[(0, 0)].arg());
        }
        // uniform phase: E[cos] = E[sin] = 0 with std 1/sqrt(2n)
        let n = phases.len() as f64;
        let mc = phases.iter().map(|p| p.cos()).sum::<f64>() / n;
        let ms = phases.iter().map(|p| p.sin()).sum::<f64>() / n;
        let se = (0.5 / n).sqrt();
        assert!(mc.abs() < 4.0 * se && ms.abs() < 4.0 * se);
    }

    #[test]
    fn unitarity_across_dimensions() {
        let seeds = SeedStream::new(17);
        for (k, &d) in [2usize, 4, 8, 16].iter().cycle().take(100).enumerate() {
            let u = sample_haar_unitary::<f64>(d, &seeds.sample(k as u64)).unwrap();
            assert!(unitarity_defect(&u) < 1e-10, "d = {d}");
        }
    }

    #[test]
    fn first_and_second_moments() {
        // E|U_ij|^2 = 1/d, E|U_ij|^4 = 2/(d(d+1)), E|U_11|^2|U_22|^2 = 1/(d^2-1)
        let d = 4usize;
        let n = 10_000;
        let seeds = SeedStream::new(99);
        let mut first = Vec::with_capacity(n);
        let mut fourth = Vec::with_capacity(n);
        let mut cross = Vec::with_capacity(n);
        for k in 0..n {
            let u = sample_haar_unitary::<f64>(d, &seeds.sample(k as u64)).unwrap();
            let a = norm_sqr(u[(0, 0)]);
            let b = norm_sqr(u[(1, 1)]);
            first.push(a);
            fourth.push(a * a);
            cross.push(a * b);
        }
        let check = |xs: &[f64], expected: f64| {
            let n = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / n;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            let se = (var / n).sqrt();
            assert!((mean - expected).abs() <= 4.0 * se, "mean {mean} vs {expected} (se {se})");
        };
        let df = d as f64;
        check(&first, 1.0 / df);
        check(&fourth, 2.0 / (df * (df + 1.0)));
        check(&cross, 1.0 / (df * df - 1.0));
    }

    #[test]
    fn deterministic_per_index() {
        let s = SeedStream::new(123);
        let a = sample_haar_unitary::<f64>(6, &s.sample(4)).unwrap();
        let b = sample_haar_unitary::<f64>(6, &s.sample(4)).unwrap();
        let c = sample_haar_unitary::<f64>(6, &s.sample(5)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn randomized_hamiltonian_traces() {
        let spec = SpectrumTable::new(vec![0.0, 1.0]).unwrap();
        let h = randomized_hamiltonian(&spec, &SeedStream::new(1).sample(0)).unwrap();
        let m = h.materialize();
        assert!((m.trace().re - 1.0f64).abs() < 1e-12);
        assert!(((&m * &m).trace().re - 1.0f64).abs() < 1e-12);
        let zero = SpectrumTable::new(vec![0.0; 5]).unwrap();
        let h0 = randomized_hamiltonian(&zero, &SeedStream::new(1).sample(1)).unwrap();
        assert!(h0.materialize().iter().all(|z| norm_sqr(*z) == 0.0));
    }

    #[test]
    fn materialized_spectrum_is_preserved() {
        let energies = vec![-1.3, 0.2, 0.2, 2.0, 3.5, -0.7];
        let spec = SpectrumTable::new(energies.clone()).unwrap();
        let h = randomized_hamiltonian(&spec, &SeedStream::new(8).sample(3)).unwrap();
        let mut ev: Vec<f64> = h.materialize().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in ev.iter().zip(spec.sorted()) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn eigen_hamiltonian_rejects_non_unitary() {
        let spec = SpectrumTable::new(vec![0.0, 1.0]).unwrap();
        let m = CMatrix::<f64>::identity(2, 2) * Complex::new(1.1, 0.0);
        assert!(EigenHamiltonian::new(m, spec.clone()).is_err());
        assert!(EigenHamiltonian::new(CMatrix::<f64>::identity(3, 3), spec).is_err());
    }
}
