//! Exact unitary evolution in the stored eigenbasis, reduction to the
//! subsystem, and the distance and purity functionals.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::haar::EigenHamiltonian;
use crate::model::{DensityMatrix, SubsystemSplit};
use crate::scalar::{cis, norm_sqr, CMatrix, CVector, Real};

/// `e^{-itH} rho0 e^{itH}`, computed as `U (D(t) (U^dag rho0 U) D(t)^dag) U^dag`.
pub fn evolve<T: Real>(h: &EigenHamiltonian<T>, rho0: &DensityMatrix<T>, t: T) -> Result<DensityMatrix<T>> {
    Ok(EvolutionCache::new(h, rho0)?.at(t))
}

/// Caches `U^dag rho0 U` for scanning many times with one Hamiltonian.
#[derive(Debug, Clone)]
pub struct EvolutionCache<'a, T: Real> {
    h: &'a EigenHamiltonian<T>,
    rho0: &'a DensityMatrix<T>,
    rotated: CMatrix<T>,
}

impl<'a, T: Real> EvolutionCache<'a, T> {
    pub fn new(h: &'a EigenHamiltonian<T>, rho0: &'a DensityMatrix<T>) -> Result<Self> {
        if h.dim() != rho0.dim() {
            return Err(Error::domain(format!(
                "Hamiltonian has dimension {}, state has {}",
                h.dim(),
                rho0.dim()
            )));
        }
        let u = h.unitary();
        let rotated = u.adjoint() * rho0.matrix() * u;
        Ok(Self { h, rho0, rotated })
    }

    pub fn at(&self, t: T) -> DensityMatrix<T> {
        if t == T::zero() {
            return self.rho0.clone();
        }
        let phases: Vec<Complex<T>> = self.h.energies().iter().map(|&e| cis(-(t * e))).collect();
        let mut m = self.rotated.clone();
        for j in 0..m.ncols() {
            let pj = phases[j].conj();
            for i in 0..m.nrows() {
                m[(i, j)] *= phases[i] * pj;
            }
        }
        let u = self.h.unitary();
        let mut out = u * m * u.adjoint();
        hermitize(&mut out);
        DensityMatrix::from_trusted(out)
    }
}

/// Evolution of a pure state grouped by distinct energy levels:
/// `psi(t) = sum_E e^{-itE} P_E psi0`.
///
/// Degenerate spectra (e.g. solvable ones with commensurate couplings) make
/// each time point cost `O(levels * d)` rather than `O(d^2)`.
#[derive(Debug, Clone)]
pub struct PureEvolution<T: Real> {
    psi0: CVector<T>,
    levels: Vec<T>,
    components: Vec<CVector<T>>,
}

impl<T: Real> PureEvolution<T> {
    pub fn new(h: &EigenHamiltonian<T>, psi0: &CVector<T>) -> Result<Self> {
        let d = h.dim();
        if psi0.len() != d {
            return Err(Error::domain(format!("Hamiltonian has dimension {d}, state has {}", psi0.len())));
        }
        let u = h.unitary();
        let coeffs = u.adjoint() * psi0;
        let mut order: Vec<usize> = (0..d).collect();
        let e = h.energies();
        order.sort_by(|&a, &b| e[a].partial_cmp(&e[b]).expect("finite energies"));
        let mut levels: Vec<T> = Vec::new();
        let mut components: Vec<CVector<T>> = Vec::new();
        for &n in &order {
            if levels.last() != Some(&e[n]) {
                levels.push(e[n]);
                components.push(CVector::zeros(d));
            }
            let w = components.last_mut().expect("level just pushed");
            w.axpy(coeffs[n], &u.column(n), Complex::new(T::one(), T::zero()));
        }
        Ok(Self {
            psi0: psi0.clone(),
            levels,
            components,
        })
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn state(&self, t: T) -> CVector<T> {
        if t == T::zero() {
            return self.psi0.clone();
        }
        let mut psi = CVector::zeros(self.psi0.len());
        for (e, w) in self.levels.iter().zip(&self.components) {
            psi.axpy(cis(-(t * *e)), w, Complex::new(T::one(), T::zero()));
        }
        psi
    }

    /// `tr_B |psi(t)><psi(t)|`.
    pub fn reduced(&self, t: T, split: &SubsystemSplit, map: &[usize]) -> DensityMatrix<T> {
        reduced_from_pure(&self.state(t), split, map)
    }
}

fn hermitize<T: Real>(m: &mut CMatrix<T>) {
    let n = m.nrows();
    let half = T::lit(0.5);
    for i in 0..n {
        m[(i, i)] = Complex::new(m[(i, i)].re, T::zero());
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * Complex::new(half, T::zero());
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
}

fn check_split<T: Real>(d: usize, split: &SubsystemSplit) -> Result<()> {
    let _ = std::marker::PhantomData::<T>;
    if split.d() != d {
        return Err(Error::domain(format!(
            "split dS*dB = {} does not match dimension {d}",
            split.d()
        )));
    }
    Ok(())
}

/// `tr_B rho` for the subsystem described by `split`.
pub fn partial_trace_b<T: Real>(rho: &DensityMatrix<T>, split: &SubsystemSplit) -> Result<DensityMatrix<T>> {
    check_split::<T>(rho.dim(), split)?;
    let (ds, db) = (split.d_s(), split.d_b());
    let m = rho.matrix();
    let map = split.index_map();
    let mut out = CMatrix::zeros(ds, ds);
    for i in 0..ds {
        for j in 0..ds {
            let mut acc = Complex::new(T::zero(), T::zero());
            for b in 0..db {
                acc += m[(map[i * db + b], map[j * db + b])];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(DensityMatrix::from_trusted(out))
}

/// `tr_B |psi><psi|` without forming the `d x d` projector. `map` is
/// `split.index_map()`, passed in so hot loops compute it once.
pub fn reduced_from_pure<T: Real>(psi: &CVector<T>, split: &SubsystemSplit, map: &[usize]) -> DensityMatrix<T> {
    let (ds, db) = (split.d_s(), split.d_b());
    let mut out = CMatrix::zeros(ds, ds);
    for i in 0..ds {
        for j in i..ds {
            let mut acc = Complex::new(T::zero(), T::zero());
            for b in 0..db {
                acc += psi[map[i * db + b]] * psi[map[j * db + b]].conj();
            }
            out[(i, j)] = acc;
            out[(j, i)] = acc.conj();
        }
        out[(i, i)] = Complex::new(out[(i, i)].re, T::zero());
    }
    DensityMatrix::from_trusted(out)
}

/// Sum of singular values of `a - b` (no factor 1/2), in `[0, 2]`.
pub fn trace_distance<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::domain(format!("dimensions {} and {} differ", a.dim(), b.dim())));
    }
    let diff = a.matrix() - b.matrix();
    Ok(diff.singular_values().iter().fold(T::zero(), |acc, &s| acc + s))
}

/// Trace distance to `1/dS`, the infinite-temperature state.
pub fn distance_to_maximally_mixed<T: Real>(rho: &DensityMatrix<T>) -> T {
    let d = rho.dim();
    let mut diff = rho.matrix().clone();
    let w = T::one() / T::lit(d as f64);
    for k in 0..d {
        diff[(k, k)].re -= w;
    }
    if d == 2 {
        // traceless Hermitian 2x2: eigenvalues +-sqrt(a^2 + |b|^2)
        let a = diff[(0, 0)].re;
        return T::lit(2.0) * (a * a + norm_sqr(diff[(0, 1)])).sqrt();
    }
    diff.singular_values().iter().fold(T::zero(), |acc, &s| acc + s)
}

/// `tr rho^2`.
pub fn purity<T: Real>(rho: &DensityMatrix<T>) -> T {
    rho.matrix().iter().fold(T::zero(), |acc, &z| acc + norm_sqr(z))
}

/// Uniform time grid `0 = t_0 < ... < t_n = T` for trapezoidal averages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid {
    t_max: f64,
    intervals: usize,
}

impl QuadratureGrid {
    pub fn new(t_max: f64, intervals: usize) -> Result<Self> {
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(Error::domain(format!("averaging window T = {t_max} must be positive")));
        }
        if intervals == 0 {
            return Err(Error::domain("grid needs at least one interval"));
        }
        Ok(Self { t_max, intervals })
    }

    /// Largest uniform grid on `[0, T]` with step at most `max_step`.
    pub fn with_max_step(t_max: f64, max_step: f64) -> Result<Self> {
        if !(max_step > 0.0) {
            return Err(Error::domain("grid step must be positive"));
        }
        let intervals = (t_max / max_step).ceil().max(1.0) as usize;
        Self::new(t_max, intervals)
    }

    /// Step `min(T/2000, pi / (10 (E_max - E_min)))`, at least 20 points per
    /// period of the fastest oscillation `e^{it (E_max - E_min)}`.
    pub fn resolving(t_max: f64, bandwidth: f64) -> Result<Self> {
        let mut step = t_max / 2000.0;
        if bandwidth > 0.0 {
            step = step.min(std::f64::consts::PI / (10.0 * bandwidth));
        }
        Self::with_max_step(t_max, step)
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn step(&self) -> f64 {
        self.t_max / self.intervals as f64
    }

    pub fn times(&self) -> Vec<f64> {
        let h = self.step();
        (0..=self.intervals)
            .map(|k| if k == self.intervals { self.t_max } else { k as f64 * h })
            .collect()
    }
}

/// Values of a scalar observable on an increasing time grid starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.is_empty() || times.len() != values.len() {
            return Err(Error::validation("trajectory needs matching, non-empty times and values"));
        }
        if times[0] != 0.0 {
            return Err(Error::validation("trajectory must start at t = 0"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::validation("trajectory times must be strictly increasing"));
        }
        Ok(Self { times, values })
    }

    pub fn sample(grid: &QuadratureGrid, f: impl FnMut(f64) -> f64) -> Self {
        let times = grid.times();
        let values = times.iter().copied().map(f).collect();
        Self { times, values }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Trapezoidal `(1/T) int_0^T f dt` over the stored points.
    pub fn time_average(&self) -> Result<f64> {
        let t_max = *self.times.last().expect("non-empty");
        if !(t_max > 0.0) {
            return Err(Error::domain("time average needs T > 0"));
        }
        let mut acc = 0.0;
        for k in 1..self.times.len() {
            acc += 0.5 * (self.values[k] + self.values[k - 1]) * (self.times[k] - self.times[k - 1]);
        }
        Ok(acc / t_max)
    }
}

/// Result of [`time_average`], with the step used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeAverage {
    pub value: f64,
    pub step: f64,
}

/// Trapezoidal `(1/T) int_0^T f(t) dt` on `grid`.
pub fn time_average(f: impl FnMut(f64) -> f64, grid: &QuadratureGrid) -> TimeAverage {
    let traj = Trajectory::sample(grid, f);
    TimeAverage {
        value: traj.time_average().expect("grid has T > 0"),
        step: grid.step(),
    }
}

/// Fraction of grid times at which the value is `<= threshold`.
pub fn fraction_below(traj: &Trajectory, threshold: f64) -> f64 {
    let hits = traj.values.iter().filter(|&&v| v <= threshold).count();
    hits as f64 / traj.values.len() as f64
}
