use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{hermiticity_defect, modulus, norm_sqr, re, CMatrix, CVector, Real};

/// Hermitian, positive semidefinite, unit-trace `d x d` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    m: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and positivity at `T::STRUCT_TOL`.
    pub fn new(m: CMatrix<T>) -> Result<Self> {
        check_density(&m)?;
        Ok(Self { m })
    }

    /// Wraps a matrix produced by a trace- and positivity-preserving map of a
    /// valid density matrix.
    pub(crate) fn from_trusted(m: CMatrix<T>) -> Self {
        Self { m }
    }

    /// `|psi><psi|` for a unit vector.
    pub fn pure(psi: &CVector<T>) -> Result<Self> {
        check_unit(psi, "state vector")?;
        Ok(Self {
            m: psi * psi.adjoint(),
        })
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("dimension must be positive"));
        }
        let w = re(T::one() / T::lit(d as f64));
        Ok(Self {
            m: CMatrix::from_diagonal_element(d, d, w),
        })
    }

    /// Diagonal density matrix from a probability vector.
    pub fn diagonal(probs: &[T]) -> Result<Self> {
        let m = CMatrix::from_diagonal(&CVector::from_iterator(probs.len(), probs.iter().map(|&p| re(p))));
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.m
    }

    /// Re-runs the invariant checks.
    pub fn validate(&self) -> Result<()> {
        check_density(&self.m)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<T> {
        let mut ev: Vec<T> = self.m.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        ev
    }

    /// `self (x) other`, with `self` as the leading factor.
    pub fn kron(&self, other: &Self) -> Self {
        Self {
            m: self.m.kronecker(&other.m),
        }
    }
}

fn check_unit<T: Real>(v: &CVector<T>, what: &str) -> Result<()> {
    let n2 = v.iter().fold(T::zero(), |acc, &z| acc + norm_sqr(z));
    if (n2.sqrt().as_f64() - 1.0).abs() > T::STRUCT_TOL {
        return Err(Error::validation(format!(
            "{what} has norm {:.3e}, expected 1",
            n2.sqrt().as_f64()
        )));
    }
    Ok(())
}

fn check_density<T: Real>(m: &CMatrix<T>) -> Result<()> {
    let tol = T::STRUCT_TOL;
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::validation("density matrix must be square and non-empty"));
    }
    let herm = hermiticity_defect(m);
    if herm > tol {
        return Err(Error::validation(format!("not Hermitian: max deviation {herm:.3e}")));
    }
    let tr = m.trace();
    if (tr.re.as_f64() - 1.0).abs() > tol || tr.im.as_f64().abs() > tol {
        return Err(Error::validation(format!(
            "trace is {:.6}{:+.3e}i, expected 1",
            tr.re.as_f64(),
            tr.im.as_f64()
        )));
    }
    let min_ev = m
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b.as_f64()));
    if min_ev < -tol {
        return Err(Error::validation(format!("negative eigenvalue {min_ev:.3e}")));
    }
    Ok(())
}

/// `|psi_S> (x) |psi_B>` as a rank-one density matrix.
pub fn pure_product_state<T: Real>(psi_s: &CVector<T>, psi_b: &CVector<T>) -> Result<DensityMatrix<T>> {
    check_unit(psi_s, "subsystem vector")?;
    check_unit(psi_b, "bath vector")?;
    DensityMatrix::pure(&psi_s.kronecker(psi_b))
}

/// One term `p * rho_S (x) rho_B` of a separable state.
#[derive(Debug, Clone)]
pub struct SeparableComponent<T: Real> {
    pub weight: T,
    pub rho_s: DensityMatrix<T>,
    pub rho_b: DensityMatrix<T>,
}

/// `sum_n p_n rho_S^(n) (x) rho_B^(n)`.
pub fn separable_mixture<T: Real>(components: &[SeparableComponent<T>]) -> Result<DensityMatrix<T>> {
    let first = components
        .first()
        .ok_or_else(|| Error::validation("separable mixture needs at least one component"))?;
    let (ds, db) = (first.rho_s.dim(), first.rho_b.dim());
    let mut total = T::zero();
    let mut m = CMatrix::<T>::zeros(ds * db, ds * db);
    for (k, c) in components.iter().enumerate() {
        if c.weight < T::zero() {
            return Err(Error::validation(format!("weight #{k} is negative")));
        }
        if c.rho_s.dim() != ds || c.rho_b.dim() != db {
            return Err(Error::validation(format!("component #{k} has mismatched dimensions")));
        }
        total += c.weight;
        m += c.rho_s.matrix().kronecker(c.rho_b.matrix()) * re(c.weight);
    }
    if (total.as_f64() - 1.0).abs() > T::STRUCT_TOL {
        return Err(Error::validation(format!(
            "weights sum to {:.12}, expected 1",
            total.as_f64()
        )));
    }
    DensityMatrix::new(m)
}

/// Normalized computational basis vector `|k>` in dimension `d`.
pub fn basis_vector<T: Real>(d: usize, k: usize) -> CVector<T> {
    let mut v = CVector::zeros(d);
    v[k] = Complex::new(T::one(), T::zero());
    v
}

/// Scales a nonzero vector to unit norm.
pub fn normalized<T: Real>(v: CVector<T>) -> CVector<T> {
    let n = v.iter().fold(T::zero(), |acc, &z| acc + norm_sqr(z)).sqrt();
    v.map(|z| z / re(n))
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (&x, &y)| acc.max(modulus(x - y).as_f64()))
}
