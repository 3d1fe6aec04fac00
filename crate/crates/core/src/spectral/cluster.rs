//! Moments of sums of centered local terms by contracting only clusters of
//! terms whose overlap graph has no isolated vertex.
//!
//! With `<.> = tr[.]/d`, a product of centered terms over disjoint site sets
//! factorizes, so `<h_a h_b h_c h_d>` vanishes unless every factor overlaps
//! some other factor. The surviving ordered quadruples either have a
//! connected overlap graph or split into two overlapping pairs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::model::operator::{pair_expectation, union_sites, LocalOp};
use crate::model::LocalHamiltonianSpec;
use crate::scalar::Real;

use super::moments::MomentReport;

/// Largest dimension of the union of supports contracted in one cluster.
pub const MAX_CLUSTER_DIM: usize = 1 << 16;

/// `sigma_n^2 = <H_n^2>` and `<H_n^4>` for `H_n` the sum of the centered
/// terms anchored in one block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockMoments<T> {
    pub sigma2: T,
    pub moment4: T,
}

struct TermGraph<'a, T: Real> {
    dims: &'a [usize],
    ops: Vec<LocalOp<T>>,
    /// overlap neighbours, self excluded, ascending
    adj: Vec<Vec<usize>>,
}

impl<'a, T: Real> TermGraph<'a, T> {
    /// Centered terms whose anchor passes `keep`.
    fn new(spec: &'a LocalHamiltonianSpec<T>, keep: impl Fn(usize) -> bool) -> Self {
        let ops: Vec<LocalOp<T>> = spec
            .centered_terms()
            .into_iter()
            .filter(|(a, _)| keep(*a))
            .map(|(_, op)| op)
            .collect();
        let mut by_site: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (k, op) in ops.iter().enumerate() {
            for &s in op.sites() {
                by_site.entry(s).or_default().push(k);
            }
        }
        let adj = (0..ops.len())
            .map(|k| {
                let mut nb = BTreeSet::new();
                for s in ops[k].sites() {
                    nb.extend(by_site[s].iter().copied().filter(|&j| j != k));
                }
                nb.into_iter().collect()
            })
            .collect();
        Self {
            dims: spec.site_dims(),
            ops,
            adj,
        }
    }

    fn len(&self) -> usize {
        self.ops.len()
    }

    fn linked(&self, i: usize, j: usize) -> bool {
        i == j || self.adj[i].binary_search(&j).is_ok()
    }

    /// `i` followed by its overlap neighbours.
    fn closed(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(i).chain(self.adj[i].iter().copied())
    }

    fn union_dim(&self, sets: &[&[usize]]) -> u128 {
        let mut u: Vec<usize> = Vec::new();
        for s in sets {
            u = union_sites(&u, s);
        }
        u.iter().map(|&s| self.dims[s] as u128).product()
    }

    fn check_capacity(&self, sets: &[&[usize]]) -> Result<()> {
        let d = self.union_dim(sets);
        if d > MAX_CLUSTER_DIM as u128 {
            return Err(Error::Capacity {
                what: "cluster support dimension",
                value: usize::try_from(d).unwrap_or(usize::MAX),
                limit: MAX_CLUSTER_DIM,
            });
        }
        Ok(())
    }

    /// `<h_i h_j>` for linked `i, j`.
    fn pair(&self, i: usize, j: usize) -> Result<T> {
        self.check_capacity(&[self.ops[i].sites(), self.ops[j].sites()])?;
        Ok(pair_expectation(&self.ops[i], &self.ops[j], self.dims).re)
    }

    /// `sum_{i ~ j} <h_i h_j>` over ordered linked pairs.
    fn second_moment(&self) -> Result<T> {
        let mut acc = T::zero();
        for i in 0..self.len() {
            for j in self.closed(i) {
                acc += self.pair(i, j)?;
            }
        }
        Ok(acc)
    }

    /// Terms within overlap-graph distance 3 of `a`, `a` included, ascending.
    fn ball3(&self, a: usize) -> Vec<usize> {
        let mut dist: BTreeMap<usize, usize> = BTreeMap::new();
        dist.insert(a, 0);
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[&x];
            if dx == 3 {
                continue;
            }
            for &y in &self.adj[x] {
                if !dist.contains_key(&y) {
                    dist.insert(y, dx + 1);
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<usize> = dist.into_keys().collect();
        out.sort_unstable();
        out
    }

    fn fourth_moment(&self) -> Result<T> {
        let n = self.len();
        let mut pairs: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for i in 0..n {
            for j in self.closed(i) {
                pairs.insert((i, j), self.pair(i, j)?);
            }
        }
        let s: T = pairs.values().fold(T::zero(), |acc, &v| acc + v);

        // pairings whose two groups touch; these are already in the connected sum
        let mut touching = T::zero();
        for (&(x, y), &cxy) in &pairs {
            let zone: BTreeSet<usize> = self.closed(x).chain(self.closed(y)).collect();
            let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
            for &u in &zone {
                for v in self.closed(u) {
                    seen.insert((u, v));
                    seen.insert((v, u));
                }
            }
            for (u, v) in seen {
                touching += cxy * pairs[&(u, v)];
            }
        }

        let mut products: BTreeMap<(usize, usize), LocalOp<T>> = BTreeMap::new();
        let mut connected = T::zero();
        for a in 0..n {
            let near = self.ball3(a);
            for &b in &near {
                for &c in &near {
                    for &d in &near {
                        let q = [a, b, c, d];
                        if !self.connected(&q) {
                            continue;
                        }
                        self.check_capacity(&q.map(|k| self.ops[k].sites()))?;
                        for key in [(a, b), (c, d)] {
                            products
                                .entry(key)
                                .or_insert_with(|| self.ops[key.0].mul(&self.ops[key.1], self.dims));
                        }
                        connected += pair_expectation(&products[&(a, b)], &products[&(c, d)], self.dims).re;
                    }
                }
            }
        }
        Ok(connected + T::lit(3.0) * (s * s - touching))
    }

    fn connected(&self, q: &[usize; 4]) -> bool {
        let mut reached = 1u8;
        let mut frontier = 1u8;
        while frontier != 0 {
            let mut next = 0u8;
            for i in 0..4 {
                if frontier & (1 << i) == 0 {
                    continue;
                }
                for j in 0..4 {
                    if reached & (1 << j) == 0 && self.linked(q[i], q[j]) {
                        next |= 1 << j;
                    }
                }
            }
            reached |= next;
            frontier = next;
        }
        reached == 0b1111
    }
}

/// `sigma^2 = sum_{i,j} <h_i h_j>` over centered terms with overlapping
/// supports, each evaluated on the union of the two supports.
pub fn sigma2_local_contraction<T: Real>(spec: &LocalHamiltonianSpec<T>) -> Result<MomentReport<T>> {
    let sigma2 = TermGraph::new(spec, |_| true).second_moment()?;
    Ok(MomentReport::new(sigma2, spec.mean_energy(), spec.lattice().n_sites()))
}

/// `sigma_A^2 = <H_A^2>` for `H_A` the centered terms anchored in `sites`.
pub fn restricted_sigma2<T: Real>(spec: &LocalHamiltonianSpec<T>, sites: &[usize]) -> Result<T> {
    let set: BTreeSet<usize> = sites.iter().copied().collect();
    TermGraph::new(spec, |a| set.contains(&a)).second_moment()
}

/// Second and fourth moments of the terms anchored in `block`.
pub fn block_moments<T: Real>(spec: &LocalHamiltonianSpec<T>, block: &[usize]) -> Result<BlockMoments<T>> {
    let set: BTreeSet<usize> = block.iter().copied().collect();
    let g = TermGraph::new(spec, |a| set.contains(&a));
    Ok(BlockMoments {
        sigma2: g.second_moment()?,
        moment4: g.fourth_moment()?,
    })
}

impl<T: Real> MomentReport<T> {
    /// Adds per-block moments and the deficit `|sigma^2 - sigma_A^2|` for `A`
    /// the union of `blocks`.
    pub fn with_blocks(mut self, spec: &LocalHamiltonianSpec<T>, blocks: &[Vec<usize>]) -> Result<Self> {
        self.blocks = blocks.iter().map(|b| block_moments(spec, b)).collect::<Result<_>>()?;
        let union: Vec<usize> = blocks.iter().flatten().copied().collect();
        let sigma_a2 = restricted_sigma2(spec, &union)?;
        self.cross_deficit = Some((self.sigma2 - sigma_a2).abs());
        Ok(self)
    }
}
