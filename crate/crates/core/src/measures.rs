//! Scalar entanglement quantities.
//!
//! The phase measure Γ pairs, for every `k<l`, `p<q`, the coefficient
//! `ρ_{(k,p),(l,q)}` with its mirror `ρ_{(k,q),(l,p)}`:
//!
//! ```text
//! Γ = ( n2 · Σ_{k<l, p<q} ( |ρ_{(k,p),(l,q)}| − |ρ_{(k,q),(l,p)}| )² )^{1/2}
//! ```
//!
//! For a product state both coefficients factor as `ρ_A;kl·ρ_B;pq` and
//! `ρ_A;kl·ρ_B;qp`, which have equal modulus, so Γ vanishes.
//!
//! The overall constant `n2` is a convention. [`Preset`] names the three
//! in use; see [`crate::conventions`] for how they relate to each other.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::{schmidt, DensityOperator, PureState};
use crate::tensor::{BipartiteDims, ComplexMatrix, Subsystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// `n2 = 2`, the normalization used with the 2⊗3 formulas.
    #[serde(rename = "paper-2x3")]
    Paper2x3,
    /// `n2 = 4`, so that the Schmidt-basis Γ equals the I-concurrence.
    ConcurrenceMatched,
    /// `n2 = 1`.
    Unnormalized,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Paper2x3, Preset::ConcurrenceMatched, Preset::Unnormalized];

    pub fn n2(self) -> f64 {
        match self {
            Preset::Paper2x3 => 2.0,
            Preset::ConcurrenceMatched => 4.0,
            Preset::Unnormalized => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Paper2x3 => "paper-2x3",
            Preset::ConcurrenceMatched => "concurrence-matched",
            Preset::Unnormalized => "unnormalized",
        }
    }
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown n2 preset {s:?}")))
    }
}

/// Normalization for Γ. `preset` is `None` when `n2` was set explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureConfig {
    pub n2: f64,
    pub preset: Option<Preset>,
}

impl MeasureConfig {
    pub fn preset(p: Preset) -> Self {
        Self {
            n2: p.n2(),
            preset: Some(p),
        }
    }

    pub fn custom(n2: f64) -> Result<Self> {
        if !(n2 > 0.0 && n2.is_finite()) {
            return Err(Error::InvalidArgument(format!("n2 must be positive, got {n2}")));
        }
        Ok(Self { n2, preset: None })
    }

    pub fn label(&self) -> String {
        match self.preset {
            Some(p) => p.name().to_string(),
            None => "custom".to_string(),
        }
    }
}

impl Default for MeasureConfig {
    fn default() -> Self {
        Self::preset(Preset::ConcurrenceMatched)
    }
}

/// One `(k, l, p, q)` term of Γ, with 1-based levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaTerm {
    pub k: usize,
    pub l: usize,
    pub p: usize,
    pub q: usize,
    /// `|ρ_{(k-1)N+p,(l-1)N+q}|`
    pub coeff_plus: f64,
    /// `|ρ_{(k-1)N+q,(l-1)N+p}|`
    pub coeff_minus: f64,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaBreakdown {
    pub terms: Vec<GammaTerm>,
    pub n2: f64,
    pub total: f64,
}

impl GammaBreakdown {
    /// Builds the breakdown from per-quadruple coefficient moduli, visited in
    /// [`BipartiteDims::quadruples`] order with 0-based levels.
    pub fn assemble<F>(dims: BipartiteDims, n2: f64, mut moduli: F) -> Self
    where
        F: FnMut(usize, usize, usize, usize) -> (f64, f64),
    {
        let terms: Vec<GammaTerm> = dims
            .quadruples()
            .map(|(k, l, p, q)| {
                let (plus, minus) = moduli(k, l, p, q);
                GammaTerm {
                    k: k + 1,
                    l: l + 1,
                    p: p + 1,
                    q: q + 1,
                    coeff_plus: plus,
                    coeff_minus: minus,
                    contribution: (plus - minus).powi(2),
                }
            })
            .collect();
        let sum: f64 = terms.iter().map(|t| t.contribution).sum();
        Self {
            terms,
            n2,
            total: (n2 * sum).sqrt(),
        }
    }

    pub fn term(&self, k: usize, l: usize, p: usize, q: usize) -> Option<&GammaTerm> {
        self.terms
            .iter()
            .find(|t| (t.k, t.l, t.p, t.q) == (k, l, p, q))
    }
}

/// Γ from density-matrix coefficients.
pub fn gamma(rho: &DensityOperator, cfg: &MeasureConfig) -> GammaBreakdown {
    GammaBreakdown::assemble(rho.dims(), cfg.n2, |k, l, p, q| {
        (rho.at(k, p, l, q).norm(), rho.at(k, q, l, p).norm())
    })
}

/// Γ computed from amplitudes, `|α_kp α*_lq|` against `|α_kq α*_lp|`.
pub fn gamma_pure(psi: &PureState, cfg: &MeasureConfig) -> GammaBreakdown {
    let a = psi.amp();
    GammaBreakdown::assemble(psi.dims(), cfg.n2, |k, l, p, q| {
        (
            a[(k, p)].norm() * a[(l, q)].norm(),
            a[(k, q)].norm() * a[(l, p)].norm(),
        )
    })
}

/// Allocation-free Γ total over an amplitude matrix, used in inner loops.
pub(crate) fn gamma_pure_total(amp: &ComplexMatrix, dims: BipartiteDims, n2: f64) -> f64 {
    let mut sum = 0.0;
    for (k, l, p, q) in dims.quadruples() {
        let diff = amp[(k, p)].norm() * amp[(l, q)].norm() - amp[(k, q)].norm() * amp[(l, p)].norm();
        sum += diff * diff;
    }
    (n2 * sum).sqrt()
}

/// Allocation-free Γ total over a joint density matrix.
pub(crate) fn gamma_density_total(rho: &ComplexMatrix, dims: BipartiteDims, n2: f64) -> f64 {
    let mut sum = 0.0;
    for (k, l, p, q) in dims.quadruples() {
        let diff = rho[(dims.joint(k, p), dims.joint(l, q))].norm()
            - rho[(dims.joint(k, q), dims.joint(l, p))].norm();
        sum += diff * diff;
    }
    (n2 * sum).sqrt()
}

/// `√(2(1 − Tr ρ_A²))` from the reduced state.
pub fn i_concurrence(psi: &PureState) -> f64 {
    let v = psi.amp();
    let rho_a = v * v.adjoint();
    let purity: f64 = rho_a.iter().map(|z| z.norm_sqr()).sum();
    (2.0 * (1.0 - purity)).max(0.0).sqrt()
}

/// Same quantity via the partial trace of `|ψ⟩⟨ψ|`, tracing out `traced`.
pub fn i_concurrence_partial_trace(psi: &PureState, traced: Subsystem) -> f64 {
    let rho = crate::states::pure_to_density(psi);
    let red = rho.reduced(traced);
    let purity = crate::tensor::trace(&(&red * &red)).re;
    (2.0 * (1.0 - purity)).max(0.0).sqrt()
}

/// Same quantity via Schmidt coefficients, `√(2(1 − Σλ²))`.
pub fn i_concurrence_schmidt(psi: &PureState) -> f64 {
    let s = schmidt(psi);
    let sum_sq: f64 = s.coefficients.iter().map(|l| l * l).sum();
    (2.0 * (1.0 - sum_sq)).max(0.0).sqrt()
}

/// `Σ_{k<l, p<q} |α_kp α_lq − α_kq α_lp|²`, the sum of squared 2×2 minors.
pub fn minor_sum(psi: &PureState) -> f64 {
    let a = psi.amp();
    psi.dims()
        .quadruples()
        .map(|(k, l, p, q)| (a[(k, p)] * a[(l, q)] - a[(k, q)] * a[(l, p)]).norm_sqr())
        .sum()
}

/// `(prefactor · Σ minors²)^{1/2}`. A prefactor of 4 reproduces the
/// I-concurrence, since `1 − Tr ρ_A² = 2 Σ minors²`.
pub fn concurrence_general(psi: &PureState, prefactor: f64) -> f64 {
    (prefactor * minor_sum(psi)).sqrt()
}

/// Canonical prefactor for [`concurrence_general`].
pub const CONCURRENCE_PREFACTOR: f64 = 4.0;

/// The three-minor 2⊗3 concurrence with its printed factor of 2.
pub fn concurrence_2x3(psi: &PureState) -> Result<f64> {
    let dims = psi.dims();
    if (dims.m(), dims.n()) != (2, 3) {
        return Err(Error::DimsMismatch {
            expected: "2x3".into(),
            actual: dims.to_string(),
        });
    }
    let a = psi.amp();
    let minor = |p: usize, q: usize| (a[(0, p)] * a[(1, q)] - a[(0, q)] * a[(1, p)]).norm_sqr();
    Ok((2.0 * (minor(0, 1) + minor(0, 2) + minor(1, 2))).sqrt())
}

/// Γ in the Schmidt basis, `√(n2 · Σ_{i<j} λ_i λ_j)`.
pub fn gamma_schmidt(psi: &PureState, cfg: &MeasureConfig) -> f64 {
    let lambda = schmidt(psi).coefficients;
    let mut pairs = 0.0;
    for (i, li) in lambda.iter().enumerate() {
        for lj in &lambda[i + 1..] {
            pairs += li * lj;
        }
    }
    (cfg.n2 * pairs).sqrt()
}
