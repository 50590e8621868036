//! Pure states, density operators, Bell states and random ensembles.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::local_unitary::LocalUnitary;
use crate::rng::{complex_gaussian, ginibre, rng_from};
use crate::tensor::{
    is_density_operator, kron, partial_trace, trace, BipartiteDims, ComplexMatrix, Subsystem,
    ONE, ZERO,
};

/// Tolerance used when validating user-supplied states.
pub const STATE_TOL: f64 = 1e-9;

/// A pure bipartite state `Σ α_kl |kl⟩`, stored as the `M×N` amplitude matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: BipartiteDims,
    amp: ComplexMatrix,
}

impl PureState {
    /// Fails if the shape disagrees with `dims` or `Σ|α|²` is off by more than [`STATE_TOL`].
    pub fn new(dims: BipartiteDims, amp: ComplexMatrix) -> Result<Self> {
        check_amp_shape(dims, &amp)?;
        let norm_sq = amp.norm_squared();
        if (norm_sq - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { dims, amp })
    }

    /// Rescales `amp` to unit norm. Fails on the zero matrix.
    pub fn normalized(dims: BipartiteDims, amp: ComplexMatrix) -> Result<Self> {
        check_amp_shape(dims, &amp)?;
        let norm = amp.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm_sq: norm * norm });
        }
        Ok(Self {
            dims,
            amp: amp.unscale(norm),
        })
    }

    /// Builds a state from 1-based `(k, l, amplitude)` terms, then normalizes.
    pub fn from_terms(dims: BipartiteDims, terms: &[(usize, usize, Complex64)]) -> Result<Self> {
        let mut amp = ComplexMatrix::zeros(dims.m(), dims.n());
        for &(k, l, a) in terms {
            crate::tensor::pair_index(k, l, dims)?;
            amp[(k - 1, l - 1)] += a;
        }
        Self::normalized(dims, amp)
    }

    pub fn from_vector(dims: BipartiteDims, v: &DVector<Complex64>) -> Result<Self> {
        if v.len() != dims.total() {
            return Err(Error::DimsMismatch {
                expected: dims.total().to_string(),
                actual: v.len().to_string(),
            });
        }
        let amp = ComplexMatrix::from_fn(dims.m(), dims.n(), |k, l| v[dims.joint(k, l)]);
        Self::new(dims, amp)
    }

    pub(crate) fn new_unchecked(dims: BipartiteDims, amp: ComplexMatrix) -> Self {
        Self { dims, amp }
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn amp(&self) -> &ComplexMatrix {
        &self.amp
    }

    /// Joint state vector in `pair_index` order.
    pub fn to_vector(&self) -> DVector<Complex64> {
        let d = self.dims;
        DVector::from_fn(d.total(), |i, _| self.amp[(i / d.n(), i % d.n())])
    }
}

fn check_amp_shape(dims: BipartiteDims, amp: &ComplexMatrix) -> Result<()> {
    if amp.shape() != (dims.m(), dims.n()) {
        return Err(Error::DimsMismatch {
            expected: dims.to_string(),
            actual: format!("{}x{}", amp.nrows(), amp.ncols()),
        });
    }
    Ok(())
}

/// A validated density operator on the joint `M·N` space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dims: BipartiteDims,
    rho: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(dims: BipartiteDims, rho: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(dims, rho, STATE_TOL)
    }

    pub fn with_tolerance(dims: BipartiteDims, rho: ComplexMatrix, tol: f64) -> Result<Self> {
        let d = dims.total();
        if rho.shape() != (d, d) {
            return Err(Error::DimsMismatch {
                expected: format!("{d}x{d}"),
                actual: format!("{}x{}", rho.nrows(), rho.ncols()),
            });
        }
        is_density_operator(&rho, tol).into_result()?;
        Ok(Self { dims, rho })
    }

    pub(crate) fn new_unchecked(dims: BipartiteDims, rho: ComplexMatrix) -> Self {
        Self { dims, rho }
    }

    pub fn maximally_mixed(dims: BipartiteDims) -> Self {
        let d = dims.total();
        Self {
            dims,
            rho: ComplexMatrix::identity(d, d).unscale(d as f64),
        }
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    /// Entry at 0-based level pairs: `⟨a1 b1| ρ |a2 b2⟩`.
    #[inline]
    pub(crate) fn at(&self, a1: usize, b1: usize, a2: usize, b2: usize) -> Complex64 {
        self.rho[(self.dims.joint(a1, b1), self.dims.joint(a2, b2))]
    }

    pub fn reduced(&self, traced: Subsystem) -> ComplexMatrix {
        partial_trace(&self.rho, self.dims, traced).expect("shape checked at construction")
    }
}

/// `|ψ⟩⟨ψ|` in `pair_index` ordering.
pub fn pure_to_density(psi: &PureState) -> DensityOperator {
    let v = psi.to_vector();
    DensityOperator::new_unchecked(psi.dims, &v * v.adjoint())
}

/// `ρ_A ⊗ ρ_B`; both factors must be density operators.
pub fn product_state(rho_a: &ComplexMatrix, rho_b: &ComplexMatrix) -> Result<DensityOperator> {
    for (name, f) in [("A", rho_a), ("B", rho_b)] {
        is_density_operator(f, STATE_TOL).into_result().map_err(|e| match e {
            Error::InvalidDensity(msg) => Error::InvalidDensity(format!("factor {name}: {msg}")),
            other => other,
        })?;
    }
    let dims = BipartiteDims::new(rho_a.nrows(), rho_b.nrows())?;
    Ok(DensityOperator::new_unchecked(dims, kron(rho_a, rho_b)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// `(|kp⟩ ± |lq⟩)/√2` with 1-based levels, `k < l` and `p ≠ q`.
///
/// `p < q` is the "plus" pairing `(kp, lq)`; `p > q` is the mirrored pairing
/// that reaches the coefficient at `(kq, lp)` of the same quadruple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BellState {
    pub k: usize,
    pub l: usize,
    pub p: usize,
    pub q: usize,
    pub sign: Sign,
}

impl BellState {
    pub fn new(k: usize, l: usize, p: usize, q: usize, sign: Sign) -> Result<Self> {
        if k == 0 || p == 0 || q == 0 || k >= l || p == q {
            return Err(Error::InvalidBellState(format!(
                "need 1 <= k < l and p != q, got (k,l,p,q) = ({k},{l},{p},{q})"
            )));
        }
        Ok(Self { k, l, p, q, sign })
    }

    pub fn with_sign(self, sign: Sign) -> Self {
        Self { sign, ..self }
    }

    pub fn check_dims(&self, dims: BipartiteDims) -> Result<()> {
        crate::tensor::pair_index(self.l, self.p.max(self.q), dims).map(|_| ())
    }

    /// 0-based joint indices of the `|kp⟩` and `|lq⟩` components.
    pub fn joint_indices(&self, dims: BipartiteDims) -> (usize, usize) {
        (
            dims.joint(self.k - 1, self.p - 1),
            dims.joint(self.l - 1, self.q - 1),
        )
    }
}

impl std::fmt::Display for BellState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(|{}{}> {} |{}{}>)/sqrt2",
            self.k,
            self.p,
            self.sign.symbol(),
            self.l,
            self.q
        )
    }
}

pub fn bell_vector(b: &BellState, dims: BipartiteDims) -> Result<DVector<Complex64>> {
    b.check_dims(dims)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (x, y) = b.joint_indices(dims);
    let mut v = DVector::from_element(dims.total(), ZERO);
    v[x] = Complex64::new(s, 0.0);
    v[y] = Complex64::new(s * b.sign.value(), 0.0);
    Ok(v)
}

/// `(1/√K) Σ_{k≤K} |kk⟩`.
pub fn max_entangled(k_rank: usize, dims: BipartiteDims) -> Result<PureState> {
    let kmax = dims.m().min(dims.n());
    if k_rank == 0 || k_rank > kmax {
        return Err(Error::IndexOutOfRange {
            what: "K",
            value: k_rank,
            max: kmax,
        });
    }
    let a = Complex64::new(1.0 / (k_rank as f64).sqrt(), 0.0);
    let amp = ComplexMatrix::from_fn(dims.m(), dims.n(), |i, j| {
        if i == j && i < k_rank {
            a
        } else {
            ZERO
        }
    });
    Ok(PureState::new_unchecked(dims, amp))
}

/// Schmidt form of a pure state, `amp = basis_a · diag(√λ) · basis_b†`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Squared Schmidt coefficients above the rank cutoff, descending.
    pub coefficients: Vec<f64>,
    pub basis_a: ComplexMatrix,
    pub basis_b: ComplexMatrix,
    pub rank: usize,
}

impl SchmidtDecomposition {
    /// `basis_a · diag(√λ) · basis_b†` as an `M×N` matrix.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n) = (self.basis_a.nrows(), self.basis_b.nrows());
        let mut sigma = ComplexMatrix::zeros(m, n);
        for (i, &l) in self.coefficients.iter().enumerate() {
            sigma[(i, i)] = Complex64::new(l.max(0.0).sqrt(), 0.0);
        }
        &self.basis_a * sigma * self.basis_b.adjoint()
    }
}

/// Relative cutoff on singular values below which a Schmidt term is dropped.
const RANK_CUTOFF: f64 = 1e-12;

pub fn schmidt(psi: &PureState) -> SchmidtDecomposition {
    let (m, n) = (psi.dims.m(), psi.dims.n());
    let svd = psi.amp.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let smax = order.first().map_or(0.0, |&i| svd.singular_values[i]);
    let kept: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| svd.singular_values[i] > RANK_CUTOFF * smax.max(f64::MIN_POSITIVE))
        .collect();

    // Columns of U and V (rows of V^T, conjugated), reordered, then completed.
    let thin_a = ComplexMatrix::from_fn(m, order.len(), |r, c| u[(r, order[c])]);
    let thin_b = ComplexMatrix::from_fn(n, order.len(), |r, c| v_t[(order[c], r)].conj());
    SchmidtDecomposition {
        coefficients: kept.iter().map(|&i| svd.singular_values[i].powi(2)).collect(),
        basis_a: complete_unitary(&thin_a),
        basis_b: complete_unitary(&thin_b),
        rank: kept.len(),
    }
}

/// Extends orthonormal columns to a square unitary by Gram-Schmidt against
/// the standard basis.
pub(crate) fn complete_unitary(thin: &ComplexMatrix) -> ComplexMatrix {
    let d = thin.nrows();
    let mut cols: Vec<DVector<Complex64>> = thin.column_iter().map(|c| c.into_owned()).collect();
    let mut e = 0;
    while cols.len() < d && e < d {
        let mut v = DVector::from_element(d, ZERO);
        v[e] = ONE;
        e += 1;
        // Two passes for numerical orthogonality.
        for _ in 0..2 {
            for c in &cols {
                let proj = c.dotc(&v);
                v -= c * proj;
            }
        }
        let nrm = v.norm();
        if nrm > 1e-6 {
            cols.push(v.unscale(nrm));
        }
    }
    ComplexMatrix::from_columns(&cols)
}

/// Haar-random pure state: normalized i.i.d. complex Gaussian amplitudes.
pub fn random_pure(dims: BipartiteDims, seed: u64) -> PureState {
    let mut rng = rng_from(seed);
    random_pure_with(dims, &mut rng)
}

pub fn random_pure_with<R: Rng + ?Sized>(dims: BipartiteDims, rng: &mut R) -> PureState {
    let g = ginibre(dims.m(), dims.n(), rng);
    let norm = g.norm();
    PureState::new_unchecked(dims, g.unscale(norm))
}

/// Full-rank random density matrix `GG†/Tr(GG†)` from a square Ginibre `G`.
pub fn random_density_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(d, d, rng);
    let w = &g * g.adjoint();
    let t = trace(&w).re;
    let w = w.unscale(t);
    // Symmetrize away roundoff.
    (&w + w.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `ρ_A ⊗ ρ_B` with independent random factors.
pub fn random_product(dims: BipartiteDims, seed: u64) -> DensityOperator {
    let mut rng = rng_from(seed);
    let a = random_density_matrix(dims.m(), &mut rng);
    let b = random_density_matrix(dims.n(), &mut rng);
    DensityOperator::new_unchecked(dims, kron(&a, &b))
}

/// Full-rank random mixed state on the joint space.
pub fn random_mixed(dims: BipartiteDims, seed: u64) -> DensityOperator {
    let mut rng = rng_from(seed);
    DensityOperator::new_unchecked(dims, random_density_matrix(dims.total(), &mut rng))
}

/// Haar-random `d×d` unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(d, d, rng);
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let ph = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { ONE };
        for i in 0..d {
            q[(i, j)] *= ph;
        }
    }
    q
}

pub fn random_local_unitary(dims: BipartiteDims, seed: u64) -> LocalUnitary {
    let mut rng = rng_from(seed);
    random_local_unitary_with(dims, &mut rng)
}

pub fn random_local_unitary_with<R: Rng + ?Sized>(
    dims: BipartiteDims,
    rng: &mut R,
) -> LocalUnitary {
    let u_a = haar_unitary(dims.m(), rng);
    let u_b = haar_unitary(dims.n(), rng);
    LocalUnitary::new_unchecked(u_a, u_b)
}

/// Random complex amplitude of unit modulus.
pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let z = complex_gaussian(rng);
    if z.norm() == 0.0 {
        ONE
    } else {
        z / z.norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{approx_eq, unitarity_defect, DEFAULT_TOL};

    fn d(m: usize, n: usize) -> BipartiteDims {
        BipartiteDims::new(m, n).unwrap()
    }

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn pure_to_density_examples() {
        let psi = PureState::from_terms(d(2, 2), &[(1, 1, ONE)]).unwrap();
        let rho = pure_to_density(&psi);
        assert!(approx_eq(
            rho.matrix(),
            &crate::tensor::real_diag(&[1.0, 0.0, 0.0, 0.0]),
            DEFAULT_TOL
        ));

        let bell = PureState::from_terms(d(2, 3), &[(1, 1, ONE), (2, 2, ONE)]).unwrap();
        let rho = pure_to_density(&bell);
        for i in 0..6 {
            for j in 0..6 {
                let want = if [0, 4].contains(&i) && [0, 4].contains(&j) { 0.5 } else { 0.0 };
                assert!((rho.matrix()[(i, j)] - r(want)).norm() < DEFAULT_TOL, "({i},{j})");
            }
        }
        let check = is_density_operator(rho.matrix(), DEFAULT_TOL);
        assert!(check.is_valid());
        // rank one
        let ev = crate::tensor::hermitian_eigenvalues(rho.matrix());
        assert_eq!(ev.iter().filter(|&&e| e > 1e-10).count(), 1);
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let amp = ComplexMatrix::from_element(2, 2, ONE);
        assert!(matches!(
            PureState::new(d(2, 2), amp.clone()),
            Err(Error::NotNormalized { .. })
        ));
        assert!(PureState::normalized(d(2, 2), amp).is_ok());
        assert!(PureState::new(d(2, 3), ComplexMatrix::identity(2, 2)).is_err());
    }

    #[test]
    fn product_state_examples() {
        let rho = product_state(
            &(ComplexMatrix::identity(2, 2) * r(0.5)),
            &(ComplexMatrix::identity(3, 3) * r(1.0 / 3.0)),
        )
        .unwrap();
        assert!(approx_eq(
            rho.matrix(),
            &(ComplexMatrix::identity(6, 6) * r(1.0 / 6.0)),
            DEFAULT_TOL
        ));

        let rho = product_state(
            &crate::tensor::real_diag(&[1.0, 0.0]),
            &crate::tensor::real_diag(&[0.0, 1.0, 0.0]),
        )
        .unwrap();
        // |12>, joint index 2 (1-based)
        assert!((rho.matrix()[(1, 1)] - ONE).norm() < DEFAULT_TOL);
        assert!((trace(rho.matrix()) - ONE).norm() < DEFAULT_TOL);

        let err = product_state(
            &crate::tensor::real_diag(&[1.5, -0.5]),
            &ComplexMatrix::identity(2, 2),
        )
        .unwrap_err();
        assert!(err.to_string().contains("factor A"));
        assert!(err.to_string().contains("negative eigenvalue"));
    }

    #[test]
    fn bell_vector_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi1 = BellState::new(1, 2, 1, 2, Sign::Plus).unwrap();
        let v = bell_vector(&psi1, d(2, 3)).unwrap();
        assert!((v[0] - r(s)).norm() < DEFAULT_TOL);
        assert!((v[4] - r(s)).norm() < DEFAULT_TOL);
        assert!((v.norm() - 1.0).abs() < DEFAULT_TOL);

        let phi2 = BellState::new(1, 2, 1, 3, Sign::Minus).unwrap();
        let v = bell_vector(&phi2, d(2, 3)).unwrap();
        assert!((v[0] - r(s)).norm() < DEFAULT_TOL);
        assert!((v[5] - r(-s)).norm() < DEFAULT_TOL);
        assert_eq!(v.iter().filter(|z| **z != ZERO).count(), 2);

        assert!(BellState::new(2, 1, 1, 2, Sign::Plus).is_err());
        assert!(BellState::new(1, 2, 2, 2, Sign::Plus).is_err());
        let big = BellState::new(1, 3, 1, 2, Sign::Plus).unwrap();
        assert!(bell_vector(&big, d(2, 3)).is_err());
    }

    #[test]
    fn bell_density_has_single_offdiagonal_pair() {
        let dims = d(3, 3);
        let b = BellState::new(1, 3, 2, 1, Sign::Minus).unwrap();
        let v = bell_vector(&b, dims).unwrap();
        let rho = &v * v.adjoint();
        let (x, y) = b.joint_indices(dims);
        for i in 0..9 {
            for j in 0..9 {
                if i == j {
                    continue;
                }
                let want = if (i, j) == (x, y) || (i, j) == (y, x) { -0.5 } else { 0.0 };
                assert!((rho[(i, j)] - r(want)).norm() < DEFAULT_TOL);
            }
        }
    }

    #[test]
    fn max_entangled_examples() {
        let k1 = max_entangled(1, d(2, 3)).unwrap();
        assert_eq!(schmidt(&k1).rank, 1);
        let k2 = max_entangled(2, d(2, 2)).unwrap();
        let bell = PureState::from_terms(d(2, 2), &[(1, 1, ONE), (2, 2, ONE)]).unwrap();
        assert!(approx_eq(k2.amp(), bell.amp(), DEFAULT_TOL));
        let k3 = max_entangled(3, d(3, 3)).unwrap();
        let s = schmidt(&k3);
        assert_eq!(s.rank, 3);
        for l in s.coefficients {
            assert!((l - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!(max_entangled(3, d(2, 3)).is_err());
        assert!(max_entangled(0, d(2, 3)).is_err());
    }

    #[test]
    fn schmidt_examples() {
        let prod = PureState::from_terms(d(2, 3), &[(1, 2, ONE)]).unwrap();
        let s = schmidt(&prod);
        assert_eq!(s.rank, 1);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-12);

        let psi =
            PureState::from_terms(d(2, 3), &[(1, 1, ONE), (1, 2, ONE), (2, 3, ONE)]).unwrap();
        let s = schmidt(&psi);
        assert_eq!(s.rank, 2);
        assert!((s.coefficients[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((s.coefficients[1] - 1.0 / 3.0).abs() < 1e-12);
        assert!(approx_eq(&s.reconstruct(), psi.amp(), 1e-12));
        assert!(unitarity_defect(&s.basis_a) < 1e-12);
        assert!(unitarity_defect(&s.basis_b) < 1e-12);
    }

    #[test]
    fn schmidt_reconstructs_random_states() {
        for (i, (m, n)) in [(2, 2), (2, 3), (3, 2), (3, 4), (4, 4)].into_iter().enumerate() {
            let psi = random_pure(d(m, n), 100 + i as u64);
            let s = schmidt(&psi);
            assert!(approx_eq(&s.reconstruct(), psi.amp(), 1e-12));
            assert!((s.coefficients.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(s.coefficients.windows(2).all(|w| w[0] >= w[1]));
            assert!(s.rank <= m.min(n));
            // Rotating back by the bases gives a diagonal matrix.
            let diag = s.basis_a.adjoint() * psi.amp() * &s.basis_b;
            for a in 0..m {
                for b in 0..n {
                    let want = if a == b && a < s.rank { s.coefficients[a].sqrt() } else { 0.0 };
                    assert!((diag[(a, b)] - r(want)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn random_generators_are_valid_and_deterministic() {
        for seed in 0..20 {
            let dims = d(3, 4);
            let psi = random_pure(dims, seed);
            assert!((psi.amp().norm_squared() - 1.0).abs() < 1e-12);
            assert_eq!(psi, random_pure(dims, seed));

            let u = random_local_unitary(dims, seed);
            assert!(unitarity_defect(u.u_a()) < 1e-12);
            assert!(unitarity_defect(u.u_b()) < 1e-12);
            assert_eq!(u, random_local_unitary(dims, seed));

            let rho = random_product(dims, seed);
            assert!(is_density_operator(rho.matrix(), 1e-12).is_valid());
            assert_eq!(rho, random_product(dims, seed));

            let mixed = random_mixed(dims, seed);
            assert!(is_density_operator(mixed.matrix(), 1e-12).is_valid());
        }
        assert_ne!(random_pure(d(2, 2), 1), random_pure(d(2, 2), 2));
    }

    #[test]
    fn reduced_purities_agree() {
        for seed in 0..30 {
            let psi = random_pure(d(3, 4), seed);
            let rho = pure_to_density(&psi);
            let ra = rho.reduced(Subsystem::B);
            let rb = rho.reduced(Subsystem::A);
            let pa = trace(&(&ra * &ra)).re;
            let pb = trace(&(&rb * &rb)).re;
            assert!((pa - pb).abs() < 1e-12);
        }
    }
}
