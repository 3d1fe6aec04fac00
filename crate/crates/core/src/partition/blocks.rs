use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::LatticeSpec;

use super::geometry::{pow_le, scaled_pow_le};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionKind {
    /// Slabs of the last coordinate, blocks separated by thin buffers.
    Slabs,
    /// Caller-supplied blocks; the buffer is the complement of their union.
    Custom,
}

/// Blocks `A_k` separated by more than `2R`, and buffers `C_k` covering the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    lattice: LatticeSpec,
    kind: PartitionKind,
    blocks: Vec<Vec<usize>>,
    buffers: Vec<Vec<usize>>,
    slab_width: Option<f64>,
}

/// Exact checks of the partition invariants and size windows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCheck {
    pub disjoint_cover: bool,
    /// `usize::MAX` for a single block.
    pub min_block_distance: usize,
    pub separated: bool,
    /// `(8R)^5 <= M^3`; the size windows are only asserted when this holds.
    pub applicable: bool,
    /// `M - 2 M^{3/5} >= M/2` and `M^{3/5} - 2R >= M^{3/5}/2`.
    pub k_window_preconditions: bool,
    pub block_lower: bool,
    pub block_upper: bool,
    pub buffer_upper: bool,
    pub k_lower: bool,
    pub k_upper: bool,
}

impl PartitionCheck {
    /// Everything that must hold for this partition, given its preconditions.
    pub fn passes(&self) -> bool {
        let base = self.disjoint_cover && self.separated;
        let sizes = !self.applicable || (self.block_lower && self.block_upper && self.buffer_upper);
        let k = !self.k_window_preconditions || (self.k_lower && self.k_upper);
        base && sizes && k
    }
}

/// Number of slabs: the largest `K` with `K (M^{3/5} + 2R) <= M`, i.e.
/// `(M - 2RK)^5 >= M^3 K^5`.
pub fn slab_count(lattice: &LatticeSpec) -> usize {
    let m = lattice.size() as u128;
    let r2 = 2 * lattice.radius() as u128;
    let fits = |k: u128| k * r2 <= m && {
        // K^5 M^3 <= (M - 2RK)^5
        let lhs = m.checked_pow(3).and_then(|x| k.checked_pow(5).and_then(|y| x.checked_mul(y)));
        match (lhs, (m - k * r2).checked_pow(5)) {
            (Some(l), Some(r)) => l <= r,
            _ => 3.0 * (m as f64).ln() + 5.0 * (k as f64).ln() <= 5.0 * ((m - k * r2) as f64).ln(),
        }
    };
    let mut k = 0u128;
    while fits(k + 1) {
        k += 1;
    }
    k as usize
}

/// Slab partition along the last coordinate: with `a_k = kM/K` and
/// `a = M/K - 2R`, `A_k` holds the sites with `a_k < n <= a_k + a` and `C_k`
/// those with `a_k + a < n <= a_{k+1}`.
pub fn build_partition(lattice: LatticeSpec) -> Result<Partition> {
    let k = slab_count(&lattice);
    if k == 0 {
        return Err(Error::LatticeTooSmall(format!(
            "M = {} admits no slab of width M^(3/5) + 2R with R = {}",
            lattice.size(),
            lattice.radius()
        )));
    }
    let m = lattice.size();
    let r2k = 2 * lattice.radius() * k;
    let mut blocks = vec![Vec::new(); k];
    let mut buffers = vec![Vec::new(); k];
    for site in 0..lattice.n_sites() {
        let nk = lattice.last_coord(site) * k;
        let slab = (nk - 1) / m;
        if nk + r2k <= (slab + 1) * m {
            blocks[slab].push(site);
        } else {
            buffers[slab].push(site);
        }
    }
    Ok(Partition {
        lattice,
        kind: PartitionKind::Slabs,
        blocks,
        buffers,
        slab_width: Some(m as f64 / k as f64 - 2.0 * lattice.radius() as f64),
    })
}

impl Partition {
    /// Blocks given by the caller, pairwise further apart than `2R`; the
    /// single buffer is everything else.
    pub fn custom(lattice: LatticeSpec, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = lattice.n_sites();
        let mut seen = BTreeSet::new();
        let mut sorted = Vec::with_capacity(blocks.len());
        for (k, b) in blocks.into_iter().enumerate() {
            if b.is_empty() {
                return Err(Error::validation(format!("block {k} is empty")));
            }
            let mut b = b;
            b.sort_unstable();
            for &s in &b {
                if s >= n || !seen.insert(s) {
                    return Err(Error::validation(format!("site {s} is out of range or in two blocks")));
                }
            }
            sorted.push(b);
        }
        for i in 0..sorted.len() {
            for j in (i + 1)..sorted.len() {
                let d = lattice.set_dist(&sorted[i], &sorted[j]);
                if d <= 2 * lattice.radius() {
                    return Err(Error::validation(format!(
                        "blocks {i} and {j} are at distance {d} <= 2R = {}",
                        2 * lattice.radius()
                    )));
                }
            }
        }
        let buffer: Vec<usize> = (0..n).filter(|s| !seen.contains(s)).collect();
        Ok(Self {
            lattice,
            kind: PartitionKind::Custom,
            blocks: sorted,
            buffers: vec![buffer],
            slab_width: None,
        })
    }

    /// The whole lattice as one block (`C` empty).
    pub fn single_block(lattice: LatticeSpec) -> Self {
        Self {
            lattice,
            kind: PartitionKind::Custom,
            blocks: vec![(0..lattice.n_sites()).collect()],
            buffers: vec![Vec::new()],
            slab_width: None,
        }
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn kind(&self) -> PartitionKind {
        self.kind
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn buffers(&self) -> &[Vec<usize>] {
        &self.buffers
    }

    /// Number of blocks `K`.
    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    /// Slab width `a = M/K - 2R` (slab partitions only).
    pub fn slab_width(&self) -> Option<f64> {
        self.slab_width
    }

    /// `|A|`.
    pub fn block_sites(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// `|C|`.
    pub fn buffer_sites(&self) -> usize {
        self.buffers.iter().map(Vec::len).sum()
    }

    /// `max_n |A_n|`.
    pub fn max_block(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `A = union of the blocks`, ascending.
    pub fn block_union(&self) -> Vec<usize> {
        let mut u: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        u.sort_unstable();
        u
    }

    /// `C = union of the buffers`, ascending.
    pub fn buffer_union(&self) -> Vec<usize> {
        let mut u: Vec<usize> = self.buffers.iter().flatten().copied().collect();
        u.sort_unstable();
        u
    }

    /// Smallest distance between two distinct blocks.
    pub fn min_block_distance(&self) -> usize {
        let mut best = usize::MAX;
        match self.kind {
            PartitionKind::Slabs => {
                // blocks span the full transverse extent, so only last coordinates matter
                let spans: Vec<(usize, usize)> = self
                    .blocks
                    .iter()
                    .filter(|b| !b.is_empty())
                    .map(|b| {
                        let c = b.iter().map(|&s| self.lattice.last_coord(s));
                        (c.clone().min().unwrap(), c.max().unwrap())
                    })
                    .collect();
                for i in 0..spans.len() {
                    for j in (i + 1)..spans.len() {
                        let (a, b) = (spans[i], spans[j]);
                        let d = if a.1 < b.0 { b.0 - a.1 } else { a.0 - b.1 };
                        best = best.min(d);
                    }
                }
            }
            PartitionKind::Custom => {
                for i in 0..self.blocks.len() {
                    for j in (i + 1)..self.blocks.len() {
                        best = best.min(self.lattice.set_dist(&self.blocks[i], &self.blocks[j]));
                    }
                }
            }
        }
        best
    }

    pub fn check(&self) -> PartitionCheck {
        let l = &self.lattice;
        let n = l.n_sites();
        let mut count = vec![0u32; n];
        for s in self.blocks.iter().chain(&self.buffers).flatten() {
            count[*s] += 1;
        }
        let disjoint_cover = count.iter().all(|&c| c == 1);
        let min_block_distance = self.min_block_distance();
        let separated = min_block_distance > 2 * l.radius();

        let m = l.size() as u128;
        let d = l.dim() as u32;
        let r = l.radius() as u128;
        let k = self.k() as u128;
        let m_pow = 5 * d - 2;
        let block_lower = self.blocks.iter().all(|b| pow_le(m, m_pow, 2 * b.len() as u128, 5));
        let block_upper = self.blocks.iter().all(|b| scaled_pow_le(b.len() as u128, 5, 1024, m, m_pow));
        let cap = 2 * (r + 1) * m.pow(d - 1);
        let buffer_upper = self.buffers.iter().all(|c| c.len() as u128 <= cap);
        PartitionCheck {
            disjoint_cover,
            min_block_distance,
            separated,
            applicable: l.theorem1_applicable(),
            k_window_preconditions: pow_le(4, 5, m, 2) && pow_le(4 * r, 5, m, 3),
            block_lower,
            block_upper,
            buffer_upper,
            k_lower: pow_le(m, 2, 4 * k, 5),
            k_upper: pow_le(k, 5, m, 2),
        }
    }
}
