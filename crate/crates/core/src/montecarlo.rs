//! Monte Carlo estimates of Haar averages with standard errors.
//!
//! Sample `k` uses the Haar unitary drawn from stream `k` of the master seed
//! for the whole trajectory. Samples run in parallel and are reduced in index
//! order, so results depend only on the seed.

use rayon::prelude::*;

use crate::bounds::{fmt_float, BoundReport};
use crate::dynamics::{
    distance_to_maximally_mixed, partial_trace_b, purity, time_average, EvolutionCache, PureEvolution, QuadratureGrid,
};
use crate::error::{Error, Result};
use crate::haar::{randomized_hamiltonian, SeedStream};
use crate::model::{DensityMatrix, SpectrumTable, SubsystemSplit};
use crate::scalar::{CVector, Real};

/// Largest Hilbert-space dimension accepted by the estimators.
pub const MAX_MC_DIM: usize = 4096;
/// Fewest samples accepted by the estimators.
pub const MIN_SAMPLES: usize = 100;
/// Standard errors allowed in dominance comparisons.
pub const DOMINANCE_SE: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorResult {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n_samples)`.
    pub std_error: f64,
    pub n_samples: usize,
    pub samples: Vec<f64>,
}

impl EstimatorResult {
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::domain(format!("a standard error needs at least 2 samples, got {n}")));
        }
        let nf = n as f64;
        let mean = samples.iter().sum::<f64>() / nf;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
        Ok(Self {
            mean,
            std_error: (var / nf).sqrt(),
            n_samples: n,
            samples,
        })
    }

    /// `mean <= bound + DOMINANCE_SE * std_error`.
    pub fn dominated_by(&self, bound: f64) -> bool {
        self.mean <= bound + DOMINANCE_SE * self.std_error
    }

    /// `|mean - value| <= DOMINANCE_SE * std_error`.
    pub fn agrees_with(&self, value: f64) -> bool {
        (self.mean - value).abs() <= DOMINANCE_SE * self.std_error
    }
}

/// Estimates at several times from shared Haar draws.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEstimate {
    pub times: Vec<f64>,
    pub points: Vec<EstimatorResult>,
}

impl TrajectoryEstimate {
    pub const CSV_HEADER: &'static str = "t,mean,std_error,n,bound_value,dominance_flag";

    /// One row per time; `bounds[i]` is compared with point `i`.
    pub fn csv(&self, bounds: &[f64]) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for (k, (t, p)) in self.times.iter().zip(&self.points).enumerate() {
            let (b, flag) = match bounds.get(k) {
                Some(&b) => (fmt_float(b), p.dominated_by(b).to_string()),
                None => (String::new(), String::new()),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt_float(*t),
                fmt_float(p.mean),
                fmt_float(p.std_error),
                p.n_samples,
                b,
                flag
            ));
        }
        out
    }
}

/// Initial state of a quench.
#[derive(Debug, Clone)]
pub enum InitialState<T: Real> {
    Pure(CVector<T>),
    Mixed(DensityMatrix<T>),
}

impl<T: Real> InitialState<T> {
    pub fn dim(&self) -> usize {
        match self {
            InitialState::Pure(v) => v.len(),
            InitialState::Mixed(r) => r.dim(),
        }
    }
}

fn check_inputs<T: Real>(spectrum: &SpectrumTable<T>, split: &SubsystemSplit, state_dim: usize, n: usize) -> Result<()> {
    let d = spectrum.dim();
    if d > MAX_MC_DIM {
        return Err(Error::Capacity {
            what: "Hilbert-space dimension",
            value: d,
            limit: MAX_MC_DIM,
        });
    }
    if split.d() != d || state_dim != d {
        return Err(Error::domain(format!(
            "spectrum has dimension {d}, split {} and state {state_dim}",
            split.d()
        )));
    }
    if n < MIN_SAMPLES {
        return Err(Error::domain(format!("need at least {MIN_SAMPLES} samples, got {n}")));
    }
    Ok(())
}

/// Per-sample values of `f(rho_S(t_j))` for every time, one Haar draw each.
fn sample_trajectories<T: Real>(
    spectrum: &SpectrumTable<T>,
    split: &SubsystemSplit,
    state: &InitialState<T>,
    times: &[f64],
    n: usize,
    seeds: &SeedStream,
    f: impl Fn(&DensityMatrix<T>) -> f64 + Sync,
) -> Result<Vec<Vec<f64>>> {
    let map = split.index_map();
    (0..n as u64)
        .into_par_iter()
        .map(|k| {
            let h = randomized_hamiltonian(spectrum, &seeds.sample(k))?;
            match state {
                InitialState::Pure(psi) => {
                    let ev = PureEvolution::new(&h, psi)?;
                    Ok(times.iter().map(|&t| f(&ev.reduced(T::lit(t), split, &map))).collect())
                }
                InitialState::Mixed(rho) => {
                    let cache = EvolutionCache::new(&h, rho)?;
                    times
                        .iter()
                        .map(|&t| Ok(f(&partial_trace_b(&cache.at(T::lit(t)), split)?)))
                        .collect()
                }
            }
        })
        .collect()
}

fn per_time(times: &[f64], rows: Vec<Vec<f64>>) -> Result<TrajectoryEstimate> {
    let points = (0..times.len())
        .map(|j| EstimatorResult::from_samples(rows.iter().map(|r| r[j]).collect()))
        .collect::<Result<_>>()?;
    Ok(TrajectoryEstimate {
        times: times.to_vec(),
        points,
    })
}

/// `E[tr rho_S(t)^2]` for the pure product state `psi_s (x) psi_b`.
pub fn estimate_purity<T: Real>(
    spectrum: &SpectrumTable<T>,
    split: &SubsystemSplit,
    psi_s: &CVector<T>,
    psi_b: &CVector<T>,
    times: &[f64],
    n: usize,
    seeds: &SeedStream,
) -> Result<TrajectoryEstimate> {
    if psi_s.len() != split.d_s() || psi_b.len() != split.d_b() {
        return Err(Error::domain("factor dimensions do not match the split"));
    }
    let psi = psi_s.kronecker(psi_b);
    check_inputs(spectrum, split, psi.len(), n)?;
    let state = InitialState::Pure(psi);
    let rows = sample_trajectories(spectrum, split, &state, times, n, seeds, |r| purity(r).as_f64())?;
    per_time(times, rows)
}

/// `E ||rho_S(t) - 1/dS||_1`.
pub fn estimate_trace_distance<T: Real>(
    spectrum: &SpectrumTable<T>,
    split: &SubsystemSplit,
    state: &InitialState<T>,
    times: &[f64],
    n: usize,
    seeds: &SeedStream,
) -> Result<TrajectoryEstimate> {
    check_inputs(spectrum, split, state.dim(), n)?;
    let rows = sample_trajectories(spectrum, split, state, times, n, seeds, |r| {
        distance_to_maximally_mixed(r).as_f64()
    })?;
    per_time(times, rows)
}

/// `E[Delta(T)]` with `Delta(T) = (1/T) int_0^T ||rho_S(t) - 1/dS||_1 dt`
/// evaluated on `grid`; `samples` holds each draw's `Delta(T)`.
pub fn estimate_delta<T: Real>(
    spectrum: &SpectrumTable<T>,
    split: &SubsystemSplit,
    state: &InitialState<T>,
    grid: &QuadratureGrid,
    n: usize,
    seeds: &SeedStream,
) -> Result<EstimatorResult> {
    check_inputs(spectrum, split, state.dim(), n)?;
    let times = grid.times();
    let rows = sample_trajectories(spectrum, split, state, &times, n, seeds, |r| {
        distance_to_maximally_mixed(r).as_f64()
    })?;
    let deltas = rows
        .into_iter()
        .map(|vals| {
            let mut it = vals.into_iter();
            time_average(|_| it.next().expect("one value per grid time"), grid).value
        })
        .collect();
    EstimatorResult::from_samples(deltas)
}

/// Empirical check of `P[Delta <= y c] >= 1 - 1/y`: the observed frequency
/// must reach the floor minus three binomial standard errors.
pub fn markov_empirical_check(samples: &[f64], c: f64, y: f64) -> BoundReport {
    let n = samples.len().max(1) as f64;
    let floor = (1.0 - 1.0 / y).max(0.0);
    let hits = samples.iter().filter(|&&s| s <= y * c).count() as f64;
    let freq = hits / n;
    let se = (floor * (1.0 - floor) / n).sqrt();
    let mean = samples.iter().sum::<f64>() / n;
    BoundReport::new("markov_empirical", Some(floor - 3.0 * se), freq)
        .with_tolerance(0.0)
        .with_precondition("empirical mean <= c", mean <= c)
        .with_precondition("y > 0", y > 0.0)
}
