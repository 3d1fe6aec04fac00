use crate::error::{Error, Result};

/// Open-boundary hypercubic lattice `{1..M}^D` with interaction radius `R`.
///
/// Sites are numbered `0..N` in lexicographic order of their coordinates, the
/// last coordinate running fastest. Coordinates are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeSpec {
    dim: usize,
    size: usize,
    radius: usize,
}

impl LatticeSpec {
    pub fn new(dim: usize, size: usize, radius: usize) -> Result<Self> {
        if dim == 0 || size == 0 || radius == 0 {
            return Err(Error::validation("lattice dimension, size and radius must be positive"));
        }
        if (size as u128).checked_pow(dim as u32).is_none_or(|n| n > u32::MAX as u128) {
            return Err(Error::Capacity {
                what: "lattice sites",
                value: usize::MAX,
                limit: u32::MAX as usize,
            });
        }
        Ok(Self { dim, size, radius })
    }

    /// Open chain of `m` sites.
    pub fn chain(m: usize, radius: usize) -> Result<Self> {
        Self::new(1, m, radius)
    }

    /// Spatial dimension `D`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Linear size `M`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Interaction radius `R`.
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// `N = M^D`.
    pub fn n_sites(&self) -> usize {
        self.size.pow(self.dim as u32)
    }

    /// `4^{3/2} R <= M^{3/5}`, decided exactly as `(8R)^5 <= M^3`.
    pub fn theorem1_applicable(&self) -> bool {
        let lhs = (8 * self.radius as u128).pow(5);
        let rhs = (self.size as u128).pow(3);
        lhs <= rhs
    }

    /// 1-based coordinates of a site.
    pub fn coords(&self, site: usize) -> Vec<usize> {
        let mut c = vec![0; self.dim];
        let mut rem = site;
        for k in (0..self.dim).rev() {
            c[k] = rem % self.size + 1;
            rem /= self.size;
        }
        c
    }

    /// Site index of 1-based coordinates, `None` if outside the lattice.
    pub fn site(&self, coords: &[i64]) -> Option<usize> {
        if coords.len() != self.dim {
            return None;
        }
        let mut idx = 0usize;
        for &x in coords {
            if x < 1 || x > self.size as i64 {
                return None;
            }
            idx = idx * self.size + (x as usize - 1);
        }
        Some(idx)
    }

    /// Last (slab) coordinate of a site.
    pub fn last_coord(&self, site: usize) -> usize {
        site % self.size + 1
    }

    /// `dist(i, j) = sum_k |i_k - j_k|`.
    pub fn dist(&self, i: usize, j: usize) -> usize {
        let (mut a, mut b) = (i, j);
        let mut d = 0;
        for _ in 0..self.dim {
            d += (a % self.size).abs_diff(b % self.size);
            a /= self.size;
            b /= self.size;
        }
        d
    }

    /// All lattice sites within distance `r` of `center`, ascending.
    pub fn ball(&self, center: usize, r: usize) -> Vec<usize> {
        (0..self.n_sites()).filter(|&j| self.dist(center, j) <= r).collect()
    }

    /// Smallest distance between two site sets (`usize::MAX` if either is empty).
    pub fn set_dist(&self, a: &[usize], b: &[usize]) -> usize {
        let mut best = usize::MAX;
        for &i in a {
            for &j in b {
                best = best.min(self.dist(i, j));
            }
        }
        best
    }
}
