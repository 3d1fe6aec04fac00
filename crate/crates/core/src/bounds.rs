//! Closed-form purity and trace-distance bounds, thermalization time scales
//! and the probability statements that follow from them.

use std::f64::consts::PI;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::{LatticeSpec, SolvableSpectrumSpec, SubsystemSplit};
use crate::partition::{lemma_constants, solvable_constants, Derivation, LemmaConstants};
use crate::spectral::phi_solvable_abs;

/// Default absolute tolerance of `lhs <= rhs` comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundStatus {
    Pass,
    Fail,
    /// Some precondition does not hold; no claim is made.
    NotApplicable,
    /// Only the right-hand side is known.
    BoundOnly,
}

impl BoundStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundStatus::Pass => "true",
            BoundStatus::Fail => "false",
            BoundStatus::NotApplicable => "not_applicable",
            BoundStatus::BoundOnly => "bound_only",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Precondition {
    pub description: String,
    pub satisfied: bool,
}

/// An inequality `lhs <= rhs + tolerance` together with the preconditions
/// under which it is claimed. The verdict is always derived.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    name: String,
    block: Option<usize>,
    lhs: Option<f64>,
    rhs: f64,
    preconditions: Vec<Precondition>,
    tolerance: f64,
}

impl BoundReport {
    pub fn new(name: impl Into<String>, lhs: Option<f64>, rhs: f64) -> Self {
        Self {
            name: name.into(),
            block: None,
            lhs,
            rhs,
            preconditions: Vec::new(),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_block(mut self, block: usize) -> Self {
        self.block = Some(block);
        self
    }

    /// Descriptions must not contain `,`, `;` or `=`.
    pub fn with_precondition(mut self, description: impl Into<String>, satisfied: bool) -> Self {
        self.preconditions.push(Precondition {
            description: description.into(),
            satisfied,
        });
        self
    }

    /// Same report with the right-hand side multiplied by `factor`.
    pub fn scaled_rhs(mut self, factor: f64) -> Self {
        self.rhs *= factor;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn block(&self) -> Option<usize> {
        self.block
    }

    pub fn lhs(&self) -> Option<f64> {
        self.lhs
    }

    pub fn rhs(&self) -> f64 {
        self.rhs
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn preconditions(&self) -> &[Precondition] {
        &self.preconditions
    }

    pub fn preconditions_hold(&self) -> bool {
        self.preconditions.iter().all(|p| p.satisfied)
    }

    pub fn status(&self) -> BoundStatus {
        if !self.preconditions_hold() {
            return BoundStatus::NotApplicable;
        }
        match self.lhs {
            None => BoundStatus::BoundOnly,
            Some(l) if l <= self.rhs + self.tolerance => BoundStatus::Pass,
            Some(_) => BoundStatus::Fail,
        }
    }

    pub fn satisfied(&self) -> bool {
        self.status() == BoundStatus::Pass
    }

    /// `rhs - lhs`.
    pub fn slack(&self) -> Option<f64> {
        self.lhs.map(|l| self.rhs - l)
    }

    /// `description=0|1` pairs joined by `;`.
    pub fn precondition_flags(&self) -> String {
        self.preconditions
            .iter()
            .map(|p| format!("{}={}", p.description, u8::from(p.satisfied)))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub const CSV_HEADER: &'static str = "name,lhs,rhs,satisfied,precondition_flags,tolerance";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.name,
            self.lhs.map(fmt_float).unwrap_or_default(),
            fmt_float(self.rhs),
            self.status().as_str(),
            self.precondition_flags(),
            fmt_float(self.tolerance)
        )
    }
}

/// Floats in CSV output: 17 significant digits, round-trip exact.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// `1 - 1/y`, clipped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clipped {
    pub value: f64,
    pub raw: f64,
    pub clipped: bool,
    /// The unclipped floor is `<= 0` and carries no information.
    pub vacuous: bool,
}

impl Clipped {
    pub fn new(raw: f64) -> Self {
        let value = raw.clamp(0.0, 1.0);
        Self {
            value,
            raw,
            clipped: value != raw,
            vacuous: raw <= 0.0,
        }
    }
}

/// What a bound `E[Delta(T)]^2 <= bound` says about one Hamiltonian draw:
/// with probability at least `probability_floor`, the fraction of times in
/// `[0, T]` at which the trace distance is `<= distance_threshold` is at
/// least `fraction_floor`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalizationForecast {
    pub t: f64,
    pub bound_on_e_delta2: f64,
    pub x: f64,
    pub y: f64,
    pub probability_floor: Clipped,
    pub distance_threshold: f64,
    pub fraction_floor: Clipped,
    pub preconditions: Vec<Precondition>,
}

impl ThermalizationForecast {
    /// Markov composition with `c = sqrt(bound)`: `P[Delta <= y c] >= 1 - 1/y`
    /// and a time fraction of at least `1 - x y c` within distance `1/x`.
    pub fn from_bound(t: f64, bound_on_e_delta2: f64, x: f64, y: f64) -> Result<Self> {
        if !(x > 0.0) || !(y > 0.0) {
            return Err(Error::domain(format!("Markov parameters x = {x}, y = {y} must be positive")));
        }
        if !(bound_on_e_delta2 >= 0.0) {
            return Err(Error::domain("bound must be nonnegative"));
        }
        let c = bound_on_e_delta2.sqrt();
        Ok(Self {
            t,
            bound_on_e_delta2,
            x,
            y,
            probability_floor: Clipped::new(1.0 - 1.0 / y),
            distance_threshold: 1.0 / x,
            fraction_floor: Clipped::new(1.0 - x * y * c),
            preconditions: Vec::new(),
        })
    }

    fn with_precondition(mut self, description: &str, satisfied: bool) -> Self {
        self.preconditions.push(Precondition {
            description: description.to_string(),
            satisfied,
        });
        self
    }

    pub fn preconditions_hold(&self) -> bool {
        self.preconditions.iter().all(|p| p.satisfied)
    }

    /// Bound on the mean `E[Delta(T)] <= sqrt(bound)`, by Jensen.
    pub fn mean_delta_bound(&self) -> f64 {
        self.bound_on_e_delta2.sqrt()
    }
}

/// Markov's inequality for `E[Delta] <= c`: `P[Delta <= y c] >= 1 - 1/y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovForecast {
    pub threshold: f64,
    pub probability_floor: Clipped,
}

pub fn markov_forecast(c: f64, y: f64) -> Result<MarkovForecast> {
    if !(y > 0.0) || !(c >= 0.0) {
        return Err(Error::domain(format!("need c >= 0 and y > 0, got c = {c}, y = {y}")));
    }
    Ok(MarkovForecast {
        threshold: y * c,
        probability_floor: Clipped::new(1.0 - 1.0 / y),
    })
}

fn check_phi(z: Complex<f64>, what: &str) -> Result<()> {
    if !(z.norm() <= 1.0 + 1e-12) {
        return Err(Error::domain(format!("|{what}| = {} exceeds 1", z.norm())));
    }
    Ok(())
}

fn check_phi_abs(p: f64) -> Result<()> {
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(Error::domain(format!("|phi| = {p} is outside [0, 1]")));
    }
    Ok(())
}

/// Haar average of `tr rho_S(t)^2` for a pure product initial state, in
/// terms of the characteristic function at `t` and `2t`.
pub fn expected_purity(split: &SubsystemSplit, phi_t: Complex<f64>, phi_2t: Complex<f64>) -> Result<f64> {
    check_phi(phi_t, "phi(t)")?;
    check_phi(phi_2t, "phi(2t)")?;
    let d = split.d() as f64;
    if split.d() == 1 {
        return Err(Error::domain("expected purity needs d > 1"));
    }
    let delta = split.delta() as f64;
    let a2 = phi_t.norm_sqr();
    let bracket = a2 * a2 / 4.0 + phi_2t.norm_sqr() / (4.0 * d * d) + (phi_t * phi_t * phi_2t.conj()).re / (2.0 * d)
        - a2 / (d * d);
    let prefactor = 4.0 * (d - delta + 1.0) * d * d / ((d + 3.0) * (d * d - 1.0));
    Ok(delta / (1.0 + d) + prefactor * bracket)
}

/// `|phi|^4 + 4/dB`, bounding `E[tr rho_S^2] - 1/dS` for separable states.
pub fn separable_purity_gap_bound(split: &SubsystemSplit, phi_abs: f64) -> Result<f64> {
    check_phi_abs(phi_abs)?;
    Ok(phi_abs.powi(4) + 4.0 / split.d_b() as f64)
}

/// `sqrt(dS) sqrt(|phi|^4 + 4/dB)`, bounding the mean trace distance of
/// `rho_S(t)` to `1/dS` for separable initial states.
pub fn corollary1_bound(split: &SubsystemSplit, phi_abs: f64) -> Result<f64> {
    Ok((split.d_s() as f64).sqrt() * separable_purity_gap_bound(split, phi_abs)?.sqrt())
}

/// `prod_k |cos(eps_k t/2)| <= exp(-sigma^2 t^2 / 2)`, claimed for `|t| eps_max <= 2 pi`.
pub fn solvable_gaussian_phi_bound(spec: &SolvableSpectrumSpec<f64>, t: f64) -> BoundReport {
    let lhs = phi_solvable_abs(spec, t);
    let rhs = (-spec.variance() * t * t / 2.0).exp();
    BoundReport::new("solvable_gaussian_phi", Some(lhs), rhs)
        .with_tolerance(1e-12)
        .with_precondition("|t| eps_max <= 2pi", t.abs() * spec.eps_max() <= 2.0 * PI)
}

/// Thermalization time `T = N^{e - 1/2} / eps_max` for a solvable spectrum and
/// the bound `E[Delta(T)]^2 <= a0 dS (eps_max / (N^e sigma_bar) + 1/dB)`.
pub fn solvable_timescale_bound(
    spec: &SolvableSpectrumSpec<f64>,
    split: &SubsystemSplit,
    exponent: f64,
    x: f64,
    y: f64,
) -> Result<ThermalizationForecast> {
    if !(exponent > 0.0 && exponent <= 0.5) {
        return Err(Error::domain(format!("exponent {exponent} must lie in (0, 1/2]")));
    }
    let n = spec.modes() as f64;
    let sigma_bar = (spec.variance() / n).sqrt();
    if !(sigma_bar > 0.0) {
        return Err(Error::domain("solvable spectrum has zero variance"));
    }
    let eps_max = spec.eps_max();
    let t = n.powf(exponent - 0.5) / eps_max;
    let a0 = solvable_a0();
    let bound = a0 * split.d_s() as f64 * (eps_max / (n.powf(exponent) * sigma_bar) + 1.0 / split.d_b() as f64);
    Ok(ThermalizationForecast::from_bound(t, bound, x, y)?
        .with_precondition("T eps_max <= 2pi", t * eps_max <= 2.0 * PI))
}

/// Constant of [`solvable_timescale_bound`] with its derivation.
pub fn solvable_a0_derivation() -> Vec<Derivation> {
    solvable_constants()
}

fn solvable_a0() -> f64 {
    solvable_constants().last().expect("a0 entry").value
}

/// Time scale and bound on the averaged characteristic function of a local
/// Hamiltonian: `T = a0 sigma_bar^2 N^{1/(5D) - 1/2}` and
/// `(1/T) int_0^T |phi| <= b0 (1 + sigma_bar^{-3}) / N^{1/(5D)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Bound {
    pub t: f64,
    pub bound: f64,
    pub report: BoundReport,
    pub constants: LemmaConstants,
}

pub fn theorem1_time_and_phi_bound(lattice: &LatticeSpec, sigma_bar2: f64, h: f64) -> Result<Theorem1Bound> {
    if !(sigma_bar2 > 0.0) {
        return Err(Error::domain("sigma_bar^2 must be positive"));
    }
    let c = lemma_constants(lattice, h)?;
    let n = lattice.n_sites() as f64;
    let p = 1.0 / (5.0 * lattice.dim() as f64);
    let t = c.theorem_a0 * sigma_bar2 * n.powf(p - 0.5);
    let bound = c.theorem_b0 * (1.0 + sigma_bar2.powf(-1.5)) / n.powf(p);
    let report = BoundReport::new("theorem1_phi_average", None, bound)
        .with_precondition("(8R)^5 <= M^3", lattice.theorem1_applicable())
        .with_precondition("sigma_bar^2 <= c2", sigma_bar2 <= c.c2);
    Ok(Theorem1Bound {
        t,
        bound,
        report,
        constants: c,
    })
}

/// `E[Delta(T)]^2 <= b0 dS ((1 + sigma_bar^{-3}) / N^{1/(5D)} + 1/dB)` at the
/// time of [`theorem1_time_and_phi_bound`], composed with Markov's inequality
/// at `x = y = N^{(1/(5D) - epsilon)/4}`.
pub fn corollary2_forecast(
    lattice: &LatticeSpec,
    split: &SubsystemSplit,
    sigma_bar2: f64,
    h: f64,
    epsilon: f64,
) -> Result<ThermalizationForecast> {
    if !(epsilon > 0.0) {
        return Err(Error::domain(format!("epsilon = {epsilon} must be positive")));
    }
    let th = theorem1_time_and_phi_bound(lattice, sigma_bar2, h)?;
    let n = lattice.n_sites() as f64;
    let p = 1.0 / (5.0 * lattice.dim() as f64);
    let bound = th.constants.corollary_b0
        * split.d_s() as f64
        * ((1.0 + sigma_bar2.powf(-1.5)) / n.powf(p) + 1.0 / split.d_b() as f64);
    let xy = n.powf((p - epsilon) / 4.0);
    Ok(ThermalizationForecast::from_bound(th.t, bound, xy, xy)?
        .with_precondition("(8R)^5 <= M^3", lattice.theorem1_applicable())
        .with_precondition("sigma_bar^2 <= c2", sigma_bar2 <= th.constants.c2))
}
