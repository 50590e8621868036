//! Dense complex linear algebra shared by the rest of the crate.
//!
//! Public indices that mirror physics notation (`pair_index`, Bell state
//! levels) are 1-based. Everything that touches a matrix directly is
//! 0-based, and [`BipartiteDims::joint`] is the single place where the
//! two conventions meet.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Default absolute tolerance for matrix comparisons.
pub const DEFAULT_TOL: f64 = 1e-12;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dimensions `M` (subsystem A) and `N` (subsystem B) of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartiteDims {
    m: usize,
    n: usize,
}

impl BipartiteDims {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::DimsTooSmall { m, n });
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Size of the joint space, `M·N`.
    pub fn total(&self) -> usize {
        self.m * self.n
    }

    /// 0-based joint index of the 0-based level pair `(a, b)`.
    #[inline]
    pub fn joint(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.m && b < self.n);
        a * self.n + b
    }

    /// Number of `k<l, p<q` quadruples, `M(M-1)N(N-1)/4`.
    pub fn quadruple_count(&self) -> usize {
        self.m * (self.m - 1) * self.n * (self.n - 1) / 4
    }

    /// All `(k, l, p, q)` with `k<l`, `p<q`, 0-based, in lexicographic order.
    pub fn quadruples(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        let (m, n) = (self.m, self.n);
        (0..m).flat_map(move |k| {
            (k + 1..m).flat_map(move |l| {
                (0..n).flat_map(move |p| (p + 1..n).map(move |q| (k, l, p, q)))
            })
        })
    }
}

impl std::fmt::Display for BipartiteDims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.m, self.n)
    }
}

impl std::str::FromStr for BipartiteDims {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("expected MxN, got {s:?}"));
        let (m, n) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let m = m.trim().parse().map_err(|_| bad())?;
        let n = n.trim().parse().map_err(|_| bad())?;
        Self::new(m, n)
    }
}

/// Which factor of the bipartite system to trace out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Kronecker product; block `(i, j)` of the result is `a[i,j]·b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let s = a[(i, j)];
            if s == ZERO {
                continue;
            }
            for x in 0..br {
                for y in 0..bc {
                    out[(i * br + x, j * bc + y)] = s * b[(x, y)];
                }
            }
        }
    }
    out
}

/// Reduced matrix after tracing out `traced`. The result is `M×M` when
/// tracing out B and `N×N` when tracing out A.
pub fn partial_trace(
    rho: &ComplexMatrix,
    dims: BipartiteDims,
    traced: Subsystem,
) -> Result<ComplexMatrix> {
    let d = dims.total();
    if rho.shape() != (d, d) {
        return Err(Error::DimsMismatch {
            expected: format!("{d}x{d}"),
            actual: format!("{}x{}", rho.nrows(), rho.ncols()),
        });
    }
    let (m, n) = (dims.m(), dims.n());
    Ok(match traced {
        Subsystem::B => ComplexMatrix::from_fn(m, m, |k, l| {
            (0..n).map(|p| rho[(dims.joint(k, p), dims.joint(l, p))]).sum()
        }),
        Subsystem::A => ComplexMatrix::from_fn(n, n, |p, q| {
            (0..m).map(|k| rho[(dims.joint(k, p), dims.joint(k, q))]).sum()
        }),
    })
}

/// 1-based joint index `(k-1)·N + p` of the 1-based level pair `(k, p)`.
pub fn pair_index(k: usize, p: usize, dims: BipartiteDims) -> Result<usize> {
    if k == 0 || k > dims.m() {
        return Err(Error::IndexOutOfRange {
            what: "k",
            value: k,
            max: dims.m(),
        });
    }
    if p == 0 || p > dims.n() {
        return Err(Error::IndexOutOfRange {
            what: "p",
            value: p,
            max: dims.n(),
        });
    }
    Ok((k - 1) * dims.n() + p)
}

/// Largest entrywise modulus of `a - b`; `INFINITY` on shape mismatch.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn approx_eq(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    max_abs_diff(a, b) <= tol
}

pub fn trace(a: &ComplexMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}

/// `max |A - A†|` entrywise.
pub fn hermiticity_defect(a: &ComplexMatrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(a, &a.adjoint())
}

/// `max |U†U - I|` entrywise.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(&(u.adjoint() * u), &ComplexMatrix::identity(u.nrows(), u.ncols()))
}

/// Eigenvalues of the Hermitian part of `a`, ascending.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Vec<f64> {
    let h = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// The first check that failed in [`is_density_operator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityFailure {
    NotSquare,
    NotHermitian,
    TraceNotOne,
    NegativeEigenvalue,
}

impl std::fmt::Display for DensityFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::NotSquare => "not square",
            Self::NotHermitian => "not Hermitian",
            Self::TraceNotOne => "trace is not 1",
            Self::NegativeEigenvalue => "negative eigenvalue",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityCheck {
    pub hermiticity_defect: f64,
    pub trace: Complex64,
    /// `NaN` when the Hermiticity check already failed.
    pub min_eigenvalue: f64,
    pub failure: Option<DensityFailure>,
}

impl DensityCheck {
    pub fn is_valid(&self) -> bool {
        self.failure.is_none()
    }

    pub fn into_result(self) -> Result<()> {
        match self.failure {
            None => Ok(()),
            Some(f) => Err(Error::InvalidDensity(format!(
                "{f} (hermiticity defect {:e}, trace {}, min eigenvalue {:e})",
                self.hermiticity_defect, self.trace, self.min_eigenvalue
            ))),
        }
    }
}

/// Checks Hermiticity, unit trace and positivity, in that order.
pub fn is_density_operator(rho: &ComplexMatrix, tol: f64) -> DensityCheck {
    if !rho.is_square() {
        return DensityCheck {
            hermiticity_defect: f64::INFINITY,
            trace: ZERO,
            min_eigenvalue: f64::NAN,
            failure: Some(DensityFailure::NotSquare),
        };
    }
    let herm = hermiticity_defect(rho);
    let tr = trace(rho);
    if herm > tol {
        return DensityCheck {
            hermiticity_defect: herm,
            trace: tr,
            min_eigenvalue: f64::NAN,
            failure: Some(DensityFailure::NotHermitian),
        };
    }
    let min_ev = hermitian_eigenvalues(rho).first().copied().unwrap_or(0.0);
    let failure = if (tr - ONE).norm() > tol {
        Some(DensityFailure::TraceNotOne)
    } else if min_ev < -tol {
        Some(DensityFailure::NegativeEigenvalue)
    } else {
        None
    };
    DensityCheck {
        hermiticity_defect: herm,
        trace: tr,
        min_eigenvalue: min_ev,
        failure,
    }
}

#[cfg(test)]
pub(crate) fn real_diag(values: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| Complex64::new(v, 0.0)),
    ))
}

#[cfg(test)]
pub(crate) fn from_real_rows(rows: &[&[f64]]) -> ComplexMatrix {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    ComplexMatrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
}
