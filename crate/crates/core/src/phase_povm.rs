//! Γ through the Fourier components of a phase-operator expectation value.
//!
//! For each subsystem the operator
//!
//! ```text
//! Δ_A = (1/2π) ( I + Σ_{k<l} e^{iφ_{A;kl}} |k⟩⟨l| + h.c. )
//! ```
//!
//! is built from one phase per level pair, likewise `Δ_B`, and `Δ = Δ_A ⊗ Δ_B`.
//! Every matrix element of `Δ` carries a distinct phase monomial, so the
//! Fourier coefficient of `Tr(ρΔ)` at `e^{-i(φ_{A;kl} ± φ_{B;pq})}` is exactly
//! one density-matrix element divided by `(2π)²`:
//!
//! ```text
//! (1/(2π)²) ∬ dφ_{A;kl} dφ_{B;pq} e^{i(φ_{A;kl} + φ_{B;pq})} Tr(ρΔ) = ρ_{(k,p),(l,q)} / (2π)²
//! (1/(2π)²) ∬ dφ_{A;kl} dφ_{B;pq} e^{i(φ_{A;kl} − φ_{B;pq})} Tr(ρΔ) = ρ_{(k,q),(l,p)} / (2π)²
//! ```
//!
//! The integrand is a trigonometric polynomial of degree 1 in each
//! integrated phase, so the uniform `G`-point rule is exact for `G ≥ 3`.
//! The integral is taken over the two local phases rather than the
//! sum/difference phases, since `(φ_A, φ_B) ↦ (φ_A + φ_B, φ_A − φ_B)` is not
//! a bijection of the torus.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{gamma, MeasureConfig};
use crate::states::{pure_to_density, DensityOperator, PureState};
use crate::tensor::{kron, BipartiteDims, ComplexMatrix, ONE, ZERO};

/// Constant relating the squared Fourier magnitudes to squared coefficients,
/// `(2π)⁴`.
pub const POVM_CONSTANT: f64 = TAU * TAU * TAU * TAU;

/// Default quadrature points per axis.
pub const DEFAULT_GRID: usize = 4;

/// Level-pair phases for both subsystems; keys are 1-based `(k, l)`, `k < l`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhaseAssignment {
    pub a_phases: BTreeMap<(usize, usize), f64>,
    pub b_phases: BTreeMap<(usize, usize), f64>,
}

fn pairs(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=d).flat_map(move |k| (k + 1..=d).map(move |l| (k, l)))
}

impl PhaseAssignment {
    /// Every phase set to `value`.
    pub fn constant(dims: BipartiteDims, value: f64) -> Self {
        Self {
            a_phases: pairs(dims.m()).map(|p| (p, value)).collect(),
            b_phases: pairs(dims.n()).map(|p| (p, value)).collect(),
        }
    }

    pub fn zeros(dims: BipartiteDims) -> Self {
        Self::constant(dims, 0.0)
    }

    /// Phases drawn uniformly from `[0, 2π)`.
    pub fn random<R: rand::Rng + ?Sized>(dims: BipartiteDims, rng: &mut R) -> Self {
        Self {
            a_phases: pairs(dims.m()).map(|p| (p, rng.gen_range(0.0..TAU))).collect(),
            b_phases: pairs(dims.n()).map(|p| (p, rng.gen_range(0.0..TAU))).collect(),
        }
    }

    /// `φ_{A;kl} ± φ_{B;pq}`.
    pub fn sum_difference(&self, k: usize, l: usize, p: usize, q: usize) -> Result<(f64, f64)> {
        let a = *self.a_phases.get(&(k, l)).ok_or(Error::MissingPhase(k, l))?;
        let b = *self.b_phases.get(&(p, q)).ok_or(Error::MissingPhase(p, q))?;
        Ok((a + b, a - b))
    }
}

fn delta_local(phases: &BTreeMap<(usize, usize), f64>, d: usize) -> Result<ComplexMatrix> {
    let mut m = ComplexMatrix::identity(d, d);
    for (k, l) in pairs(d) {
        let phi = *phases.get(&(k, l)).ok_or(Error::MissingPhase(k, l))?;
        let e = Complex64::from_polar(1.0, phi);
        m[(k - 1, l - 1)] = e;
        m[(l - 1, k - 1)] = e.conj();
    }
    Ok(m.unscale(TAU))
}

pub fn delta_a(phases: &PhaseAssignment, dims: BipartiteDims) -> Result<ComplexMatrix> {
    delta_local(&phases.a_phases, dims.m())
}

pub fn delta_b(phases: &PhaseAssignment, dims: BipartiteDims) -> Result<ComplexMatrix> {
    delta_local(&phases.b_phases, dims.n())
}

/// `Δ_A ⊗ Δ_B`
pub fn delta_joint(phases: &PhaseAssignment, dims: BipartiteDims) -> Result<ComplexMatrix> {
    Ok(kron(&delta_a(phases, dims)?, &delta_b(phases, dims)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    /// `φ_{A;kl} + φ_{B;pq}`, isolating `ρ_{(k,p),(l,q)}`.
    Plus,
    /// `φ_{A;kl} − φ_{B;pq}`, isolating `ρ_{(k,q),(l,p)}`.
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierComponent {
    pub k: usize,
    pub l: usize,
    pub p: usize,
    pub q: usize,
    pub branch: Branch,
    /// Complex Fourier coefficient before taking the modulus.
    #[serde(skip)]
    pub value: Complex64,
    pub magnitude: f64,
}

/// `Tr(ρ·Δ)` without forming the product.
fn expectation(rho: &ComplexMatrix, delta: &ComplexMatrix) -> Complex64 {
    rho.iter()
        .zip(delta.transpose().iter())
        .map(|(r, d)| r * d)
        .sum()
}

/// Fourier component at all-zero fixed phases. See [`fourier_component_at`].
pub fn fourier_component(
    rho: &DensityOperator,
    k: usize,
    l: usize,
    p: usize,
    q: usize,
    branch: Branch,
    grid: usize,
) -> Result<FourierComponent> {
    fourier_component_at(rho, &PhaseAssignment::zeros(rho.dims()), k, l, p, q, branch, grid)
}

/// `|(1/(2π)²) ∬ dφ_{A;kl} dφ_{B;pq} e^{i(φ_{A;kl} ± φ_{B;pq})} Tr(ρΔ)|` by a
/// `grid × grid` uniform rule, with every other phase held at its value in
/// `fixed`. Levels are 1-based with `k < l`, `p < q`.
#[allow(clippy::too_many_arguments)]
pub fn fourier_component_at(
    rho: &DensityOperator,
    fixed: &PhaseAssignment,
    k: usize,
    l: usize,
    p: usize,
    q: usize,
    branch: Branch,
    grid: usize,
) -> Result<FourierComponent> {
    if grid < 3 {
        return Err(Error::GridTooCoarse(grid));
    }
    let dims = rho.dims();
    if !(1 <= k && k < l && l <= dims.m()) {
        return Err(Error::InvalidArgument(format!(
            "A levels need 1 <= k < l <= {}, got ({k}, {l})",
            dims.m()
        )));
    }
    if !(1 <= p && p < q && q <= dims.n()) {
        return Err(Error::InvalidArgument(format!(
            "B levels need 1 <= p < q <= {}, got ({p}, {q})",
            dims.n()
        )));
    }
    let sign = branch.sign();
    let mut phases = fixed.clone();
    let mut acc = ZERO;
    for i in 0..grid {
        let phi_a = TAU * i as f64 / grid as f64;
        phases.a_phases.insert((k, l), phi_a);
        let da = delta_a(&phases, dims)?;
        for j in 0..grid {
            let phi_b = TAU * j as f64 / grid as f64;
            phases.b_phases.insert((p, q), phi_b);
            let db = delta_b(&phases, dims)?;
            let w = Complex64::from_polar(1.0, phi_a + sign * phi_b);
            acc += w * expectation(rho.matrix(), &kron(&da, &db));
        }
    }
    let value = acc / (grid * grid) as f64;
    Ok(FourierComponent {
        k,
        l,
        p,
        q,
        branch,
        value,
        magnitude: value.norm(),
    })
}

/// `√(n2 · (2π)⁴ · Σ_{k<l,p<q} (|Γ⁺| − |Γ⁻|)²)`.
pub fn gamma_via_povm(rho: &DensityOperator, cfg: &MeasureConfig, grid: usize) -> Result<f64> {
    gamma_via_povm_at(rho, &PhaseAssignment::zeros(rho.dims()), cfg, grid)
}

pub fn gamma_via_povm_at(
    rho: &DensityOperator,
    fixed: &PhaseAssignment,
    cfg: &MeasureConfig,
    grid: usize,
) -> Result<f64> {
    let dims = rho.dims();
    let mut sum = 0.0;
    for (k, l, p, q) in dims.quadruples() {
        let (k, l, p, q) = (k + 1, l + 1, p + 1, q + 1);
        let plus = fourier_component_at(rho, fixed, k, l, p, q, Branch::Plus, grid)?;
        let minus = fourier_component_at(rho, fixed, k, l, p, q, Branch::Minus, grid)?;
        sum += (plus.magnitude - minus.magnitude).powi(2);
    }
    Ok((cfg.n2 * POVM_CONSTANT * sum).sqrt())
}

/// Checks [`POVM_CONSTANT`] on the 2⊗2 Bell state `(|11⟩ + |22⟩)/√2`,
/// returning the absolute mismatch against the direct route.
pub fn self_test() -> Result<f64> {
    let dims = BipartiteDims::new(2, 2)?;
    let bell = PureState::from_terms(dims, &[(1, 1, ONE), (2, 2, ONE)])?;
    let rho = pure_to_density(&bell);
    let cfg = MeasureConfig::preset(crate::measures::Preset::Unnormalized);
    let via = gamma_via_povm(&rho, &cfg, DEFAULT_GRID)?;
    let direct = gamma(&rho, &cfg).total;
    let err = (via - direct).abs();
    if err > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "phase-operator route disagrees with direct route on a Bell state: {via} vs {direct}"
        )));
    }
    Ok(err)
}

/// Every phase advanced by π. For a single subsystem `Δ(φ) + Δ(φ + π) = I/π`.
pub fn shifted(phases: &PhaseAssignment) -> PhaseAssignment {
    PhaseAssignment {
        a_phases: phases.a_phases.iter().map(|(&k, &v)| (k, v + PI)).collect(),
        b_phases: phases.b_phases.iter().map(|(&k, &v)| (k, v + PI)).collect(),
    }
}
