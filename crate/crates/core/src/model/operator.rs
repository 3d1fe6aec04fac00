//! Dense operators acting on a small set of lattice sites.
//!
//! Matrices are indexed in the product basis of the sites sorted ascending,
//! the first site being the most significant digit (the global ordering).

use num_complex::Complex;

use crate::scalar::{hermiticity_defect, re, CMatrix, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct LocalOp<T: Real> {
    sites: Vec<usize>,
    mat: CMatrix<T>,
}

/// Digit decomposition tables of a site list relative to a superset.
struct Layout {
    /// sub-index (over `inner` sites) of every superset basis index
    sub: Vec<usize>,
    /// rest-index (over superset \ inner) of every superset basis index
    rest: Vec<usize>,
    /// superset index of (sub, rest), stored as `inv[sub * d_rest + rest]`
    inv: Vec<usize>,
    d_sub: usize,
    d_rest: usize,
}

fn dims_of(sites: &[usize], site_dims: &[usize]) -> usize {
    sites.iter().map(|&s| site_dims[s]).product()
}

impl Layout {
    fn new(outer: &[usize], inner: &[usize], site_dims: &[usize]) -> Self {
        let in_inner: Vec<bool> = outer.iter().map(|s| inner.binary_search(s).is_ok()).collect();
        let d_out = dims_of(outer, site_dims);
        let d_sub = dims_of(inner, site_dims);
        let d_rest = d_out / d_sub;
        let mut sub = vec![0; d_out];
        let mut rest = vec![0; d_out];
        let mut inv = vec![0; d_out];
        let mut digits = vec![0usize; outer.len()];
        for idx in 0..d_out {
            let mut r = idx;
            for k in (0..outer.len()).rev() {
                let dk = site_dims[outer[k]];
                digits[k] = r % dk;
                r /= dk;
            }
            let (mut a, mut b) = (0, 0);
            for k in 0..outer.len() {
                let dk = site_dims[outer[k]];
                if in_inner[k] {
                    a = a * dk + digits[k];
                } else {
                    b = b * dk + digits[k];
                }
            }
            sub[idx] = a;
            rest[idx] = b;
            inv[a * d_rest + b] = idx;
        }
        Self {
            sub,
            rest,
            inv,
            d_sub,
            d_rest,
        }
    }
}

/// Sorted union of two sorted site lists.
pub fn union_sites(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

/// `true` when two sorted site lists share a site.
pub fn overlaps(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => return true,
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    false
}

fn intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

impl<T: Real> LocalOp<T> {
    /// `sites` must be sorted, unique and match the matrix dimension.
    pub fn new(sites: Vec<usize>, mat: CMatrix<T>, site_dims: &[usize]) -> Self {
        debug_assert!(sites.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(mat.nrows(), dims_of(&sites, site_dims));
        Self { sites, mat }
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// `tr[X] / dim`, the uniform expectation.
    pub fn normalized_trace(&self) -> Complex<T> {
        self.mat.trace() / re(T::lit(self.dim() as f64))
    }

    /// `X - <X> 1`.
    pub fn centered(&self) -> Self {
        let shift = self.normalized_trace();
        let mut mat = self.mat.clone();
        for k in 0..mat.nrows() {
            mat[(k, k)] -= shift;
        }
        Self {
            sites: self.sites.clone(),
            mat,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mat.iter().all(|z| z.re == T::zero() && z.im == T::zero())
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.mat)
    }

    /// Operator norm of a Hermitian operator, `max |eigenvalue|`.
    pub fn hermitian_norm(&self) -> T {
        self.mat
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .fold(T::zero(), |m, e| m.max(e.abs()))
    }

    /// Matrix of `X (x) 1` on `target`, a sorted superset of `self.sites()`.
    pub fn embed(&self, target: &[usize], site_dims: &[usize]) -> CMatrix<T> {
        if target == self.sites.as_slice() {
            return self.mat.clone();
        }
        let d = dims_of(target, site_dims);
        let mut out = CMatrix::zeros(d, d);
        self.add_embedded(target, site_dims, T::one(), &mut out);
        out
    }

    /// `out += scale * (X (x) 1)` with `out` indexed over `target`.
    pub fn add_embedded(&self, target: &[usize], site_dims: &[usize], scale: T, out: &mut CMatrix<T>) {
        let lay = Layout::new(target, &self.sites, site_dims);
        let d = lay.sub.len();
        debug_assert_eq!(out.nrows(), d);
        let s = re(scale);
        for r in 0..d {
            let (rs, rr) = (lay.sub[r], lay.rest[r]);
            for cs in 0..lay.d_sub {
                let v = self.mat[(rs, cs)];
                if v.re != T::zero() || v.im != T::zero() {
                    out[(r, lay.inv[cs * lay.d_rest + rr])] += v * s;
                }
            }
        }
    }

    /// Product `self * other` as an operator on the union of the supports.
    pub fn mul(&self, other: &Self, site_dims: &[usize]) -> Self {
        let sites = union_sites(&self.sites, &other.sites);
        let a = self.embed(&sites, site_dims);
        let b = other.embed(&sites, site_dims);
        Self { sites, mat: a * b }
    }

    pub fn add(&self, other: &Self, site_dims: &[usize]) -> Self {
        let sites = union_sites(&self.sites, &other.sites);
        let mat = self.embed(&sites, site_dims) + other.embed(&sites, site_dims);
        Self { sites, mat }
    }

    /// Partial trace onto `keep`, a sorted subset of the support (unnormalized).
    pub fn partial_trace_to(&self, keep: &[usize], site_dims: &[usize]) -> Self {
        if keep == self.sites.as_slice() {
            return self.clone();
        }
        let lay = Layout::new(&self.sites, keep, site_dims);
        let mut out = CMatrix::zeros(lay.d_sub, lay.d_sub);
        for a in 0..lay.d_sub {
            for b in 0..lay.d_sub {
                let mut acc = Complex::new(T::zero(), T::zero());
                for t in 0..lay.d_rest {
                    acc += self.mat[(lay.inv[a * lay.d_rest + t], lay.inv[b * lay.d_rest + t])];
                }
                out[(a, b)] = acc;
            }
        }
        Self {
            sites: keep.to_vec(),
            mat: out,
        }
    }
}

/// `<X Y>` with `<.> = tr[.]/dim` on the union of supports, evaluated through
/// partial traces onto the common sites.
pub fn pair_expectation<T: Real>(x: &LocalOp<T>, y: &LocalOp<T>, site_dims: &[usize]) -> Complex<T> {
    let common = intersection(&x.sites, &y.sites);
    let union_dim = dims_of(&union_sites(&x.sites, &y.sites), site_dims);
    let norm = re(T::lit(union_dim as f64));
    if common.is_empty() {
        return x.mat.trace() * y.mat.trace() / norm;
    }
    let px = x.partial_trace_to(&common, site_dims);
    let py = y.partial_trace_to(&common, site_dims);
    let mut acc = Complex::new(T::zero(), T::zero());
    let n = px.mat.nrows();
    for i in 0..n {
        for j in 0..n {
            acc += px.mat[(i, j)] * py.mat[(j, i)];
        }
    }
    acc / norm
}
