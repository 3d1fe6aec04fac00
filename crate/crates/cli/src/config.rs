//! Flat `key = value` run configuration with per-subcommand schemas.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::CliError;

/// Value type of a configuration key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Int,
    Real,
    /// Comma-separated reals.
    RealList,
    Text,
}

#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub help: &'static str,
}

const fn key(name: &'static str, kind: Kind, help: &'static str) -> Key {
    Key { name, kind, help }
}

const SPECTRUM_KEYS: [Key; 4] = [
    key("spectrum_path", Kind::Text, "spectrum file, one energy per line"),
    key("solvable_eps_energy", Kind::RealList, "couplings eps_k of a solvable spectrum"),
    key("random_spectrum_dim", Kind::Int, "dimension of a seeded random spectrum"),
    key("random_spectrum_half_width_energy", Kind::Real, "energies uniform in [-w, w] (default 2)"),
];

const GRID_KEYS: [Key; 2] = [
    key("t_max_inverse_energy", Kind::Real, "largest time"),
    key("t_points", Kind::Int, "number of equally spaced times in [0, t_max] (0 for none)"),
];

const SPLIT_KEYS: [Key; 2] = [key("d_s", Kind::Int, "subsystem dimension"), key("d_b", Kind::Int, "bath dimension")];

const STATE_KEYS: [Key; 3] = [
    key("state", Kind::Text, "product | mixed_subsystem | separable"),
    key("psi_s_index", Kind::Int, "basis index of the subsystem factor (default 0)"),
    key("psi_b_index", Kind::Int, "basis index of the bath factor (default 0)"),
];

const LATTICE_KEYS: [Key; 4] = [
    key("lattice_dim", Kind::Int, "lattice dimension D"),
    key("lattice_size", Kind::Int, "side length M"),
    key("radius", Kind::Int, "interaction radius R"),
    key("h_energy", Kind::Real, "bound on the local term norms"),
];

pub const PHI_KEYS: &[&[Key]] = &[&SPECTRUM_KEYS, &GRID_KEYS];

pub const BOUNDS_KEYS: &[&[Key]] = &[
    &LATTICE_KEYS,
    &SPLIT_KEYS,
    &[
        key("sigma_bar2_energy2", Kind::Real, "variance per site"),
        key("epsilon", Kind::Real, "exponent of the probability statement"),
        key("phi_abs", Kind::Real, "|phi(t)| entering the separable-state bounds"),
        key("markov_c", Kind::Real, "bound c on E[Delta]"),
        key("markov_y", Kind::Real, "Markov parameter y"),
        key("solvable_eps_energy", Kind::RealList, "couplings of a solvable spectrum"),
        key("solvable_t_inverse_energy", Kind::Real, "time of the Gaussian comparison"),
        key("solvable_exponent", Kind::Real, "exponent e of the solvable time scale"),
        key("solvable_x", Kind::Real, "distance parameter x (default 4)"),
        key("solvable_y", Kind::Real, "probability parameter y (default 4)"),
    ],
];

pub const QUENCH_KEYS: &[&[Key]] = &[
    &SPECTRUM_KEYS,
    &GRID_KEYS,
    &SPLIT_KEYS,
    &STATE_KEYS,
    &[key("sample_index", Kind::Int, "index of the Haar draw (default 0)")],
];

pub const MONTECARLO_KEYS: &[&[Key]] = &[
    &SPECTRUM_KEYS,
    &GRID_KEYS,
    &SPLIT_KEYS,
    &STATE_KEYS,
    &[
        key("estimator", Kind::Text, "purity | trace_distance | delta"),
        key("n_samples", Kind::Int, "number of Haar draws"),
        key("T_inverse_energy", Kind::Real, "horizon of the delta estimator"),
        key("quadrature_intervals", Kind::Int, "intervals of the delta quadrature (default: resolving)"),
        key("markov_y", Kind::Real, "Markov parameter for the delta estimator"),
    ],
];

pub const APPENDIX_KEYS: &[&[Key]] = &[
    &LATTICE_KEYS,
    &[
        key("hamiltonian_path", Kind::Text, "local Hamiltonian file"),
        key("partition", Kind::Text, "single | slabs | custom"),
        key("blocks", Kind::Text, "custom blocks, e.g. 0-2;5-7 (0-based sites)"),
        key("rhs_scale", Kind::Real, "multiplies every rhs (self-test, default 1)"),
        key("quadrature_intervals", Kind::Int, "intervals of the lemma quadrature (default 2000)"),
    ],
];

pub const PARTITION_KEYS: &[&[Key]] = &[&LATTICE_KEYS];

/// Parsed configuration: keys checked against a schema, values kept as text
/// so the snapshot reproduces the input exactly.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn find(schema: &[&[Key]], name: &str) -> Option<Key> {
    schema.iter().flat_map(|g| g.iter()).find(|k| k.name == name).copied()
}

fn check_value(k: &Key, v: &str) -> Result<(), String> {
    let ok = match k.kind {
        Kind::Int => v.parse::<u64>().is_ok(),
        Kind::Real => v.parse::<f64>().map(f64::is_finite).unwrap_or(false),
        Kind::RealList => v.split(',').all(|x| x.trim().parse::<f64>().map(f64::is_finite).unwrap_or(false)),
        Kind::Text => !v.is_empty(),
    };
    if ok {
        Ok(())
    } else {
        Err(format!("{} expects {:?}, got {v:?}", k.name, k.kind))
    }
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment. `seed` is accepted
    /// everywhere.
    pub fn parse(text: &str, schema: &[&[Key]]) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Parse { line: i + 1, message: format!("expected key = value, got {line:?}") })?;
            cfg.set(k.trim(), v.trim(), schema)
                .map_err(|message| CliError::Parse { line: i + 1, message })?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, k: &str, v: &str, schema: &[&[Key]]) -> Result<(), String> {
        if k == "seed" {
            v.parse::<u64>().map_err(|_| format!("seed expects an unsigned integer, got {v:?}"))?;
        } else {
            let key = find(schema, k).ok_or_else(|| format!("unknown key {k:?}"))?;
            check_value(&key, v)?;
        }
        self.values.insert(k.to_string(), v.to_string());
        Ok(())
    }

    /// Applies `key=value` command-line overrides.
    pub fn apply_overrides(&mut self, pairs: &[String], schema: &[&[Key]]) -> Result<(), CliError> {
        for p in pairs {
            let (k, v) = p.split_once('=').ok_or_else(|| usage(format!("expected key=value, got {p:?}")))?;
            self.set(k.trim(), v.trim(), schema).map_err(usage)?;
        }
        Ok(())
    }

    pub fn has(&self, k: &str) -> bool {
        self.values.contains_key(k)
    }

    pub fn text(&self, k: &str) -> Option<&str> {
        self.values.get(k).map(String::as_str)
    }

    fn parsed<T: FromStr>(&self, k: &str) -> Option<T> {
        // values were validated on insertion
        self.values.get(k).and_then(|v| v.parse().ok())
    }

    pub fn int(&self, k: &str) -> Option<usize> {
        self.parsed(k)
    }

    pub fn real(&self, k: &str) -> Option<f64> {
        self.parsed(k)
    }

    pub fn reals(&self, k: &str) -> Option<Vec<f64>> {
        self.values
            .get(k)
            .map(|v| v.split(',').map(|x| x.trim().parse().expect("validated list")).collect())
    }

    pub fn require_int(&self, k: &str) -> Result<usize, CliError> {
        self.int(k).ok_or_else(|| usage(format!("missing required key {k}")))
    }

    pub fn require_real(&self, k: &str) -> Result<f64, CliError> {
        self.real(k).ok_or_else(|| usage(format!("missing required key {k}")))
    }

    pub fn seed(&self) -> u64 {
        self.parsed("seed").unwrap_or(0)
    }

    /// Sorted `key = value` lines; parsing them gives back this config.
    pub fn snapshot(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.values {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

/// Help text listing every key of a schema.
pub fn describe(schema: &[&[Key]]) -> String {
    let mut out = String::new();
    for k in schema.iter().flat_map(|g| g.iter()) {
        let _ = writeln!(out, "  {:<36} {}", k.name, k.help);
    }
    out
}
