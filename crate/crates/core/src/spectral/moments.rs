use crate::model::SpectrumTable;
use crate::scalar::Real;

use super::cluster::BlockMoments;

/// Second moments of a Hamiltonian under the uniform state `tr[.]/d`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport<T> {
    /// `sigma^2 = <(H - <H>)^2>`.
    pub sigma2: T,
    /// `sigma^2 / N`.
    pub sigma_bar2: T,
    /// `<H>`.
    pub mean: T,
    /// Number of sites or modes `N` used for `sigma_bar2`.
    pub n_sites: usize,
    /// `sigma_n^2` and `<H_n^4>` per block, when computed.
    pub blocks: Vec<BlockMoments<T>>,
    /// `|sigma^2 - sigma_A^2|`, where `A` is the union of the blocks.
    pub cross_deficit: Option<T>,
}

impl<T: Real> MomentReport<T> {
    pub fn new(sigma2: T, mean: T, n_sites: usize) -> Self {
        let n = n_sites.max(1);
        Self {
            sigma2,
            sigma_bar2: sigma2 / T::lit(n as f64),
            mean,
            n_sites: n,
            blocks: Vec::new(),
            cross_deficit: None,
        }
    }

    /// Same moments with `sigma_bar2` taken per `n_sites` sites.
    pub fn with_n_sites(mut self, n_sites: usize) -> Self {
        let n = n_sites.max(1);
        self.n_sites = n;
        self.sigma_bar2 = self.sigma2 / T::lit(n as f64);
        self
    }
}

/// Variance of the energies under the uniform distribution on the levels.
///
/// `sigma_bar2` is reported per `log2(d)` sites when `d` is a power of two
/// and per one site otherwise; override with [`MomentReport::with_n_sites`].
pub fn sigma2_from_spectrum<T: Real>(spectrum: &SpectrumTable<T>) -> MomentReport<T> {
    let mean = spectrum.mean();
    let n = T::lit(spectrum.dim() as f64);
    let sigma2 = spectrum
        .energies()
        .iter()
        .fold(T::zero(), |acc, &e| acc + (e - mean) * (e - mean))
        / n;
    let d = spectrum.dim();
    let sites = if d.is_power_of_two() { d.trailing_zeros() as usize } else { 1 };
    MomentReport::new(sigma2, mean, sites)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{spectrum_from_solvable, SolvableSpectrumSpec};

    #[test]
    fn variance_examples() {
        let c = SpectrumTable::new(vec![2.5; 6]).unwrap();
        assert_eq!(sigma2_from_spectrum(&c).sigma2, 0.0);
        let spec = SolvableSpectrumSpec::new(vec![1.0f64, 1.0]).unwrap();
        let r = sigma2_from_spectrum(&spectrum_from_solvable(&spec).unwrap());
        assert!((r.sigma2 - 0.5).abs() < 1e-15);
        assert!((r.mean - 1.0).abs() < 1e-15);
        assert_eq!(r.n_sites, 2);
        assert_eq!(r.sigma_bar2, r.sigma2 / 2.0);
        let r = r.with_n_sites(4);
        assert_eq!(r.sigma_bar2, r.sigma2 / 4.0);
    }
}
