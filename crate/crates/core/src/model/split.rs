use crate::error::{Error, Result};

/// Bipartition of the Hilbert space into a subsystem `S` and a bath `B`.
///
/// Tensor factors are ordered by site index; `S` is an explicit subset of the
/// sites. [`SubsystemSplit::new`] uses two factors with `S` first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemSplit {
    site_dims: Vec<usize>,
    s_sites: Vec<usize>,
    d_s: usize,
    d_b: usize,
}

impl SubsystemSplit {
    pub fn new(d_s: usize, d_b: usize) -> Result<Self> {
        if d_s == 0 || d_b == 0 {
            return Err(Error::validation("subsystem and bath dimensions must be positive"));
        }
        Ok(Self {
            site_dims: vec![d_s, d_b],
            s_sites: vec![0],
            d_s,
            d_b,
        })
    }

    /// `S` consists of `s_sites` (indices into `site_dims`), the bath is the rest.
    pub fn from_sites(site_dims: Vec<usize>, s_sites: Vec<usize>) -> Result<Self> {
        if site_dims.is_empty() || site_dims.contains(&0) {
            return Err(Error::validation("site dimensions must be positive"));
        }
        let mut s_sites = s_sites;
        s_sites.sort_unstable();
        s_sites.dedup();
        if s_sites.is_empty() {
            return Err(Error::validation("subsystem needs at least one site"));
        }
        if let Some(&bad) = s_sites.iter().find(|&&s| s >= site_dims.len()) {
            return Err(Error::validation(format!("subsystem site {bad} out of range")));
        }
        let d_s = s_sites.iter().map(|&s| site_dims[s]).product();
        let d: usize = site_dims.iter().product();
        Ok(Self {
            site_dims,
            s_sites,
            d_s,
            d_b: d / d_s,
        })
    }

    /// `n` qubits with the first `k` forming the subsystem.
    pub fn leading_qubits(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::validation(format!("cannot take {k} of {n} qubits")));
        }
        Self::from_sites(vec![2; n], (0..k).collect())
    }

    pub fn d_s(&self) -> usize {
        self.d_s
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn d(&self) -> usize {
        self.d_s * self.d_b
    }

    /// `dS + dB`.
    pub fn delta(&self) -> usize {
        self.d_s + self.d_b
    }

    pub fn site_dims(&self) -> &[usize] {
        &self.site_dims
    }

    pub fn subsystem_sites(&self) -> &[usize] {
        &self.s_sites
    }

    /// `true` when `S` is the leading block of factors, so that full index
    /// `s * dB + b` is the product basis state `|s>|b>`.
    pub fn is_leading(&self) -> bool {
        self.s_sites.iter().enumerate().all(|(k, &s)| k == s)
    }

    /// Table `map[s * dB + b]` = full basis index of `|s>_S |b>_B`.
    pub fn index_map(&self) -> Vec<usize> {
        let d = self.d();
        if self.is_leading() {
            return (0..d).collect();
        }
        let n = self.site_dims.len();
        let in_s: Vec<bool> = (0..n).map(|i| self.s_sites.binary_search(&i).is_ok()).collect();
        let mut map = vec![0usize; d];
        let mut digits = vec![0usize; n];
        for full in 0..d {
            let mut rem = full;
            for site in (0..n).rev() {
                digits[site] = rem % self.site_dims[site];
                rem /= self.site_dims[site];
            }
            let (mut s, mut b) = (0usize, 0usize);
            for site in 0..n {
                if in_s[site] {
                    s = s * self.site_dims[site] + digits[site];
                } else {
                    b = b * self.site_dims[site] + digits[site];
                }
            }
            map[s * self.d_b + b] = full;
        }
        map
    }
}
