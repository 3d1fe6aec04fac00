use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::SubsystemSplit;
use crate::scalar::Real;

/// Largest number of two-level modes whose spectrum we enumerate.
pub const MAX_SOLVABLE_MODES: usize = 24;

/// Where a spectrum came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Explicit,
    Solvable,
    Diagonalized,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Explicit => "explicit",
            Provenance::Solvable => "solvable",
            Provenance::Diagonalized => "diagonalized",
        }
    }
}

/// The fixed list of `d` energies of a randomized Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable<T> {
    energies: Vec<T>,
    provenance: Provenance,
}

impl<T: Real> SpectrumTable<T> {
    pub fn new(energies: Vec<T>) -> Result<Self> {
        Self::with_provenance(energies, Provenance::Explicit)
    }

    /// Like [`SpectrumTable::new`] but also checks the declared total dimension.
    pub fn with_dimension(energies: Vec<T>, d: usize) -> Result<Self> {
        if energies.len() != d {
            return Err(Error::validation(format!(
                "spectrum has {} entries, declared dimension is {d}",
                energies.len()
            )));
        }
        Self::new(energies)
    }

    pub fn with_provenance(energies: Vec<T>, provenance: Provenance) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::validation("spectrum is empty"));
        }
        if let Some(k) = energies.iter().position(|e| !e.as_f64().is_finite()) {
            return Err(Error::validation(format!("energy #{k} is not finite")));
        }
        Ok(Self {
            energies,
            provenance,
        })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[T] {
        &self.energies
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn min(&self) -> T {
        self.energies.iter().copied().fold(self.energies[0], |a, b| a.min(b))
    }

    pub fn max(&self) -> T {
        self.energies.iter().copied().fold(self.energies[0], |a, b| a.max(b))
    }

    /// `E_max - E_min`.
    pub fn bandwidth(&self) -> T {
        self.max() - self.min()
    }

    pub fn mean(&self) -> T {
        let sum = self.energies.iter().fold(T::zero(), |acc, &e| acc + e);
        sum / T::lit(self.dim() as f64)
    }

    /// Energies sorted ascending.
    pub fn sorted(&self) -> Vec<T> {
        let mut v = self.energies.clone();
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite energies"));
        v
    }

    /// Writes the plain-text spectrum format, with the optional split header.
    pub fn to_text(&self, split: Option<&SubsystemSplit>) -> String {
        let mut out = String::new();
        if let Some(s) = split {
            let _ = writeln!(out, "# d={} dS={} dB={}", s.d(), s.d_s(), s.d_b());
        }
        for e in &self.energies {
            let _ = writeln!(out, "{:.16e}", e.as_f64());
        }
        out
    }
}

impl SpectrumTable<f64> {
    /// Parses the plain-text spectrum format: one energy per line, blank lines
    /// ignored, and an optional `# d=<int> dS=<int> dB=<int>` header.
    pub fn parse(text: &str) -> Result<(Self, Option<SubsystemSplit>)> {
        let mut energies = Vec::new();
        let mut header: Option<(usize, usize, usize, usize)> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if rest.contains('=') {
                    if header.is_some() || !energies.is_empty() {
                        return Err(Error::parse(line_no, "header must be the first line"));
                    }
                    let (d, ds, db) = parse_header(rest, line_no)?;
                    header = Some((d, ds, db, line_no));
                }
                continue;
            }
            let e: f64 = line
                .parse()
                .map_err(|_| Error::parse(line_no, format!("not a number: {line:?}")))?;
            if !e.is_finite() {
                return Err(Error::parse(line_no, "energy is not finite"));
            }
            energies.push(e);
        }
        let split = match header {
            Some((d, ds, db, line_no)) => {
                if energies.len() != d {
                    return Err(Error::parse(
                        line_no,
                        format!("header declares d={d} but file has {} energies", energies.len()),
                    ));
                }
                let split = SubsystemSplit::new(ds, db)
                    .map_err(|e| Error::parse(line_no, e.to_string()))?;
                if split.d() != d {
                    return Err(Error::parse(line_no, format!("dS*dB = {} != d = {d}", split.d())));
                }
                Some(split)
            }
            None => None,
        };
        if energies.is_empty() {
            return Err(Error::parse(text.lines().count().max(1), "no energies found"));
        }
        Ok((Self::new(energies)?, split))
    }
}

fn parse_header(rest: &str, line_no: usize) -> Result<(usize, usize, usize)> {
    let mut d = None;
    let mut ds = None;
    let mut db = None;
    for tok in rest.split_whitespace() {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, format!("malformed header token {tok:?}")))?;
        let value: usize = value
            .parse()
            .map_err(|_| Error::parse(line_no, format!("header value {value:?} is not an integer")))?;
        match key {
            "d" => d = Some(value),
            "dS" => ds = Some(value),
            "dB" => db = Some(value),
            other => return Err(Error::parse(line_no, format!("unknown header key {other:?}"))),
        }
    }
    match (d, ds, db) {
        (Some(d), Some(ds), Some(db)) => Ok((d, ds, db)),
        _ => Err(Error::parse(line_no, "header needs d, dS and dB")),
    }
}

/// Couplings of a spectrum of the form `E_n = sum_k eps_k n_k`, `n_k` in {0, 1}.
#[derive(Debug, Clone, PartialEq)]
pub struct SolvableSpectrumSpec<T> {
    epsilons: Vec<T>,
}

impl<T: Real> SolvableSpectrumSpec<T> {
    pub fn new(epsilons: Vec<T>) -> Result<Self> {
        if epsilons.is_empty() {
            return Err(Error::validation("solvable spectrum needs at least one mode"));
        }
        if epsilons.iter().any(|e| !e.as_f64().is_finite()) {
            return Err(Error::validation("couplings must be finite"));
        }
        Ok(Self { epsilons })
    }

    pub fn epsilons(&self) -> &[T] {
        &self.epsilons
    }

    pub fn modes(&self) -> usize {
        self.epsilons.len()
    }

    /// `max_k |eps_k|`.
    pub fn eps_max(&self) -> T {
        self.epsilons.iter().fold(T::zero(), |m, e| m.max(e.abs()))
    }

    /// Closed-form energy variance `sum_k eps_k^2 / 4`.
    pub fn variance(&self) -> T {
        self.epsilons.iter().fold(T::zero(), |acc, &e| acc + e * e) / T::lit(4.0)
    }

    /// Closed-form mean energy `sum_k eps_k / 2`.
    pub fn mean(&self) -> T {
        self.epsilons.iter().fold(T::zero(), |acc, &e| acc + e) / T::lit(2.0)
    }
}

/// All `2^N` energies in lexicographic order of `(n_1, ..., n_N)`, `n_1` most significant.
pub fn spectrum_from_solvable<T: Real>(spec: &SolvableSpectrumSpec<T>) -> Result<SpectrumTable<T>> {
    let n = spec.modes();
    if n > MAX_SOLVABLE_MODES {
        return Err(Error::Capacity {
            what: "solvable modes",
            value: n,
            limit: MAX_SOLVABLE_MODES,
        });
    }
    let mut energies = Vec::with_capacity(1 << n);
    energies.push(T::zero());
    for &eps in spec.epsilons() {
        let prev = std::mem::take(&mut energies);
        energies.reserve(prev.len() * 2);
        for e in prev {
            energies.push(e);
            energies.push(e + eps);
        }
    }
    SpectrumTable::with_provenance(energies, Provenance::Solvable)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solvable(eps: &[f64]) -> SpectrumTable<f64> {
        spectrum_from_solvable(&SolvableSpectrumSpec::new(eps.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn solvable_examples() {
        assert_eq!(solvable(&[0.0]).energies(), &[0.0, 0.0]);
        assert_eq!(solvable(&[1.0]).energies(), &[0.0, 1.0]);
        assert_eq!(solvable(&[1.0, 2.0]).energies(), &[0.0, 2.0, 1.0, 3.0]);
    }

    #[test]
    fn solvable_capacity() {
        let spec = SolvableSpectrumSpec::new(vec![1.0; 25]).unwrap();
        assert!(matches!(
            spectrum_from_solvable(&spec),
            Err(Error::Capacity { limit: 24, .. })
        ));
    }

    #[test]
    fn solvable_mean_and_variance() {
        let eps = [0.3, -1.2, 2.5, 0.7, 1.1];
        let s = solvable(&eps);
        let spec = SolvableSpectrumSpec::new(eps.to_vec()).unwrap();
        let mean = s.mean();
        let var = s.energies().iter().map(|e| (e - mean).powi(2)).sum::<f64>() / s.dim() as f64;
        assert!((mean - spec.mean()).abs() < 1e-10);
        assert!((var - spec.variance()).abs() < 1e-10);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(SpectrumTable::new(vec![0.0, f64::NAN]).is_err());
        assert!(SpectrumTable::with_dimension(vec![0.0, 1.0], 3).is_err());
    }

    #[test]
    fn parse_with_header() {
        let (s, split) = SpectrumTable::parse("# d=4 dS=2 dB=2\n0.0\n1\n\n-2.5\n3e-1\n").unwrap();
        assert_eq!(s.energies(), &[0.0, 1.0, -2.5, 0.3]);
        let split = split.unwrap();
        assert_eq!((split.d_s(), split.d_b()), (2, 2));
    }

    #[test]
    fn parse_reports_line_numbers() {
        match SpectrumTable::parse("0.0\n1.0\nabc\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match SpectrumTable::parse("# d=3 dS=1 dB=3\n0\n1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn text_round_trip_is_exact() {
        let s = SpectrumTable::new(vec![0.1, -1.0 / 3.0, 2.0f64.sqrt()]).unwrap();
        let (back, _) = SpectrumTable::parse(&s.to_text(None)).unwrap();
        assert_eq!(back, s);
    }
}
