use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::operator::LocalOp;
use crate::model::LatticeSpec;
use crate::scalar::{re, CMatrix, Real};

/// `H = sum_i h_i` on a lattice, one term per anchor site.
///
/// Terms handed to [`LocalHamiltonianSpec::new`] that share an anchor are
/// summed into a single `h_i`; the norm bound `h` applies to the sum.
#[derive(Debug, Clone)]
pub struct LocalHamiltonianSpec<T: Real> {
    lattice: LatticeSpec,
    site_dims: Vec<usize>,
    h: T,
    terms: Vec<(usize, LocalOp<T>)>,
}

/// Raw input term: anchor site, support (any order), matrix on the support
/// sites sorted ascending.
#[derive(Debug, Clone)]
pub struct TermInput<T: Real> {
    pub anchor: usize,
    pub support: Vec<usize>,
    pub matrix: CMatrix<T>,
}

impl<T: Real> LocalHamiltonianSpec<T> {
    pub fn new(lattice: LatticeSpec, site_dims: Vec<usize>, h: T, terms: Vec<TermInput<T>>) -> Result<Self> {
        let n = lattice.n_sites();
        if site_dims.len() != n {
            return Err(Error::validation(format!(
                "{} site dimensions given for {n} sites",
                site_dims.len()
            )));
        }
        if site_dims.iter().any(|&d| d < 1) {
            return Err(Error::validation("site dimensions must be positive"));
        }
        if h < T::zero() {
            return Err(Error::validation("norm bound h must be nonnegative"));
        }
        let mut merged: BTreeMap<usize, LocalOp<T>> = BTreeMap::new();
        for (k, t) in terms.into_iter().enumerate() {
            if t.anchor >= n {
                return Err(Error::validation(format!("term #{k}: anchor {} out of range", t.anchor)));
            }
            let mut support = t.support.clone();
            support.sort_unstable();
            support.dedup();
            if support.len() != t.support.len() || support.is_empty() {
                return Err(Error::validation(format!("term #{k}: support must be non-empty and unique")));
            }
            if let Some(&s) = support.iter().find(|&&s| s >= n || lattice.dist(t.anchor, s) > lattice.radius()) {
                return Err(Error::validation(format!(
                    "term #{k}: site {s} lies outside the radius-{} ball of anchor {}",
                    lattice.radius(),
                    t.anchor
                )));
            }
            let expected: usize = support.iter().map(|&s| site_dims[s]).product();
            if t.matrix.nrows() != expected || t.matrix.ncols() != expected {
                return Err(Error::validation(format!(
                    "term #{k}: matrix is {}x{}, support dimension is {expected}",
                    t.matrix.nrows(),
                    t.matrix.ncols()
                )));
            }
            let op = LocalOp::new(support, t.matrix, &site_dims);
            let herm = op.hermiticity_defect();
            if herm > T::STRUCT_TOL {
                return Err(Error::validation(format!("term #{k}: not Hermitian (defect {herm:.3e})")));
            }
            let entry = match merged.remove(&t.anchor) {
                Some(prev) => prev.add(&op, &site_dims),
                None => op,
            };
            merged.insert(t.anchor, entry);
        }
        for (anchor, op) in &merged {
            let norm = op.hermitian_norm();
            if (norm - h).as_f64() > T::STRUCT_TOL {
                return Err(Error::validation(format!(
                    "term at anchor {anchor}: norm {:.6} exceeds h = {:.6}",
                    norm.as_f64(),
                    h.as_f64()
                )));
            }
        }
        Ok(Self {
            lattice,
            site_dims,
            h,
            terms: merged.into_iter().collect(),
        })
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn site_dims(&self) -> &[usize] {
        &self.site_dims
    }

    pub fn h(&self) -> T {
        self.h
    }

    /// `(anchor, h_anchor)` pairs, ascending by anchor.
    pub fn terms(&self) -> &[(usize, LocalOp<T>)] {
        &self.terms
    }

    /// Total Hilbert-space dimension as `u128` (may exceed `usize` for big lattices).
    pub fn total_dim(&self) -> u128 {
        self.site_dims.iter().map(|&d| d as u128).product()
    }

    /// Terms with `<h_i> 1` subtracted, dropping terms that vanish.
    pub fn centered_terms(&self) -> Vec<(usize, LocalOp<T>)> {
        self.terms
            .iter()
            .map(|(a, op)| (*a, op.centered()))
            .filter(|(_, op)| !op.is_zero())
            .collect()
    }

    /// `sum_i <h_i>`, the shift removed by centering.
    pub fn mean_energy(&self) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |acc, (_, op)| acc + op.normalized_trace().re)
    }

    /// Largest operator norm among the centered terms.
    pub fn centered_norm_bound(&self) -> T {
        self.centered_terms()
            .iter()
            .fold(T::zero(), |m, (_, op)| m.max(op.hermitian_norm()))
    }

    /// `true` when every matrix entry is real.
    pub fn is_real(&self) -> bool {
        self.terms
            .iter()
            .all(|(_, op)| op.matrix().iter().all(|z| z.im == T::zero()))
    }
}

impl LocalHamiltonianSpec<f64> {
    /// Serializes to the structured text format read by [`LocalHamiltonianSpec::parse`].
    pub fn to_text(&self) -> String {
        let l = &self.lattice;
        let mut out = String::new();
        let _ = writeln!(out, "lattice D={} M={} R={}", l.dim(), l.size(), l.radius());
        let uniform = self.site_dims.iter().all(|&d| d == self.site_dims[0]);
        if uniform {
            let _ = writeln!(out, "site_dims {}", self.site_dims[0]);
        } else {
            let dims: Vec<String> = self.site_dims.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "site_dims {}", dims.join(" "));
        }
        let _ = writeln!(out, "h {:.16e}", self.h);
        for (anchor, op) in &self.terms {
            let a = l.coords(*anchor);
            let coord_str = |c: &[usize]| c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            let _ = writeln!(out, "term {}", coord_str(&a));
            let offsets: Vec<String> = op
                .sites()
                .iter()
                .map(|&s| {
                    let c = l.coords(s);
                    c.iter()
                        .zip(&a)
                        .map(|(x, y)| (*x as i64 - *y as i64).to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect();
            let _ = writeln!(out, "offsets {}", offsets.join(";"));
            let m = op.matrix();
            for r in 0..m.nrows() {
                let row: Vec<String> = (0..m.ncols())
                    .map(|c| format!("{:.16e} {:.16e}", m[(r, c)].re, m[(r, c)].im))
                    .collect();
                let _ = writeln!(out, "{}", row.join("  "));
            }
            let _ = writeln!(out, "end");
        }
        out
    }

    /// Parses the structured text format:
    ///
    /// ```text
    /// lattice D=1 M=4 R=1
    /// site_dims 2            # one value for all sites, or N values
    /// h 1.0
    /// term 2                 # anchor, 1-based coordinates separated by ','
    /// offsets 0;1            # support offsets, ascending site order, ';'-separated
    /// 1 0  0 0  0 0  0 0     # row-major entries as `re im` pairs, one row per line
    /// ...
    /// end
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let mut lattice: Option<LatticeSpec> = None;
        let mut dims_raw: Option<(usize, Vec<usize>)> = None;
        let mut h: Option<f64> = None;
        let mut terms: Vec<TermInput<f64>> = Vec::new();

        while let Some((ln, line)) = lines.next() {
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match key {
                "lattice" => {
                    let (mut d, mut m, mut r) = (None, None, None);
                    for tok in rest.split_whitespace() {
                        let (k, v) = tok
                            .split_once('=')
                            .ok_or_else(|| Error::parse(ln, format!("malformed token {tok:?}")))?;
                        let v: usize = v.parse().map_err(|_| Error::parse(ln, format!("bad integer {v:?}")))?;
                        match k {
                            "D" => d = Some(v),
                            "M" => m = Some(v),
                            "R" => r = Some(v),
                            _ => return Err(Error::parse(ln, format!("unknown lattice key {k:?}"))),
                        }
                    }
                    let (Some(d), Some(m), Some(r)) = (d, m, r) else {
                        return Err(Error::parse(ln, "lattice needs D, M and R"));
                    };
                    lattice = Some(LatticeSpec::new(d, m, r).map_err(|e| Error::parse(ln, e.to_string()))?);
                }
                "site_dims" => {
                    let v: Result<Vec<usize>> = rest
                        .split_whitespace()
                        .map(|t| t.parse().map_err(|_| Error::parse(ln, format!("bad site dimension {t:?}"))))
                        .collect();
                    dims_raw = Some((ln, v?));
                }
                "h" => {
                    h = Some(rest.parse().map_err(|_| Error::parse(ln, format!("bad h {rest:?}")))?);
                }
                "term" => {
                    let lat = lattice.ok_or_else(|| Error::parse(ln, "term before lattice line"))?;
                    let dims = resolve_dims(&lat, dims_raw.as_ref())?;
                    let anchor_c = parse_coords(rest, lat.dim(), ln)?;
                    let anchor = lat
                        .site(&anchor_c)
                        .ok_or_else(|| Error::parse(ln, "anchor outside lattice"))?;
                    let (ln_o, off_line) = lines.next().ok_or_else(|| Error::parse(ln, "missing offsets line"))?;
                    let off_rest = off_line
                        .strip_prefix("offsets")
                        .ok_or_else(|| Error::parse(ln_o, "expected `offsets`"))?
                        .trim();
                    let mut support = Vec::new();
                    for part in off_rest.split(';') {
                        let off = parse_coords(part.trim(), lat.dim(), ln_o)?;
                        let c: Vec<i64> = anchor_c.iter().zip(&off).map(|(a, o)| a + o).collect();
                        let s = lat
                            .site(&c)
                            .ok_or_else(|| Error::parse(ln_o, format!("offset {part:?} leaves the lattice")))?;
                        support.push(s);
                    }
                    if !support.windows(2).all(|w| w[0] < w[1]) {
                        return Err(Error::parse(ln_o, "offsets must list support sites in ascending order"));
                    }
                    let dsupp: usize = support.iter().map(|&s| dims[s]).product();
                    let mut entries = Vec::with_capacity(dsupp * dsupp);
                    for _ in 0..dsupp {
                        let (ln_r, row) = lines.next().ok_or_else(|| Error::parse(ln_o, "matrix truncated"))?;
                        let vals: Vec<f64> = row
                            .split_whitespace()
                            .map(|t| t.parse().map_err(|_| Error::parse(ln_r, format!("bad number {t:?}"))))
                            .collect::<Result<_>>()?;
                        if vals.len() != 2 * dsupp {
                            return Err(Error::parse(
                                ln_r,
                                format!("row has {} numbers, expected {}", vals.len(), 2 * dsupp),
                            ));
                        }
                        entries.extend(vals.chunks(2).map(|p| Complex::new(p[0], p[1])));
                    }
                    let (ln_e, end) = lines.next().ok_or_else(|| Error::parse(ln, "missing `end`"))?;
                    if end != "end" {
                        return Err(Error::parse(ln_e, "expected `end`"));
                    }
                    terms.push(TermInput {
                        anchor,
                        support,
                        matrix: CMatrix::from_row_slice(dsupp, dsupp, &entries),
                    });
                }
                other => return Err(Error::parse(ln, format!("unknown directive {other:?}"))),
            }
        }
        let lattice = lattice.ok_or_else(|| Error::parse(1, "missing lattice line"))?;
        let dims = resolve_dims(&lattice, dims_raw.as_ref())?;
        let h = h.ok_or_else(|| Error::parse(1, "missing h line"))?;
        Self::new(lattice, dims, h, terms)
    }
}

fn resolve_dims(lat: &LatticeSpec, raw: Option<&(usize, Vec<usize>)>) -> Result<Vec<usize>> {
    let n = lat.n_sites();
    match raw {
        None => Ok(vec![2; n]),
        Some((_, v)) if v.len() == 1 => Ok(vec![v[0]; n]),
        Some((_, v)) if v.len() == n => Ok(v.clone()),
        Some((ln, v)) => Err(Error::parse(*ln, format!("{} site dimensions for {n} sites", v.len()))),
    }
}

fn parse_coords(s: &str, dim: usize, ln: usize) -> Result<Vec<i64>> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::parse(ln, format!("bad coordinate {t:?}"))))
        .collect::<Result<_>>()?;
    if v.len() != dim {
        return Err(Error::parse(ln, format!("expected {dim} coordinates, got {}", v.len())));
    }
    Ok(v)
}

/// Random traceless Hermitian term scaled to operator norm `scale`.
pub fn random_traceless_hermitian<T: Real, R: Rng + ?Sized>(
    d: usize,
    scale: T,
    real: bool,
    rng: &mut R,
) -> CMatrix<T> {
    let g = CMatrix::<T>::from_fn(d, d, |_, _| {
        let a = T::standard_normal(rng);
        let b = if real { T::zero() } else { T::standard_normal(rng) };
        Complex::new(a, b)
    });
    let mut h = (&g + g.adjoint()) * re(T::lit(0.5));
    let shift = h.trace() / re(T::lit(d as f64));
    for k in 0..d {
        h[(k, k)] -= shift;
    }
    let norm = h
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .fold(T::zero(), |m, e| m.max(e.abs()));
    if norm == T::zero() {
        return h;
    }
    h * re(scale / norm)
}

/// Random local Hamiltonian on qubits: `h_i` acts on site `i` and its forward
/// neighbour along each axis, is traceless, and has norm uniform in `[h/2, h]`.
pub fn random_local_hamiltonian<T: Real, R: Rng + ?Sized>(
    lattice: LatticeSpec,
    h: T,
    real: bool,
    rng: &mut R,
) -> Result<LocalHamiltonianSpec<T>> {
    let n = lattice.n_sites();
    let dims = vec![2; n];
    let mut terms = Vec::with_capacity(n);
    for i in 0..n {
        let c = lattice.coords(i);
        let mut support = vec![i];
        for k in 0..lattice.dim() {
            let mut nb: Vec<i64> = c.iter().map(|&x| x as i64).collect();
            nb[k] += 1;
            if let Some(j) = lattice.site(&nb) {
                support.push(j);
            }
        }
        support.sort_unstable();
        let d: usize = 1 << support.len();
        let u: f64 = rng.random_range(0.5..=1.0);
        let scale = h * T::lit(u);
        let matrix = random_traceless_hermitian(d, scale, real, rng);
        terms.push(TermInput {
            anchor: i,
            support,
            matrix,
        });
    }
    LocalHamiltonianSpec::new(lattice, dims, h, terms)
}
