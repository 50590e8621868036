//! Bell-state projections: enumeration, coefficient recovery, measurement
//! planning and finite-shot simulation.
//!
//! The projector pair `(|kp⟩ ± |lq⟩)/√2` gives
//! `P₊ − P₋ = 2 Re ρ_{(k,p),(l,q)}`, so only real parts are visible to a
//! fixed pair. Estimating `|ρ_{(k,p),(l,q)}|` therefore needs the state to
//! be locally phase-rotated so the targeted coefficient is real and
//! non-negative; [`PhaseAlignment`] carries that rotation per target.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::distributions::Distribution;
use rand_distr::Binomial;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{GammaBreakdown, MeasureConfig};
use crate::rng::rng_from;
use crate::states::{BellState, DensityOperator, PureState, Sign};
use crate::tensor::BipartiteDims;

#[derive(Debug, Clone)]
pub struct BellFamily {
    pub dims: BipartiteDims,
    pub states: Vec<BellState>,
}

/// All `M(M−1)N(N−1)` Bell states: for every `k<l`, `p<q`, both pairings
/// `(kp, lq)` and `(kq, lp)` with both signs.
pub fn enumerate_bell(dims: BipartiteDims) -> BellFamily {
    let mut states = Vec::with_capacity(4 * dims.quadruple_count());
    for (k, l, p, q) in dims.quadruples() {
        for (b1, b2) in [(p, q), (q, p)] {
            for sign in [Sign::Plus, Sign::Minus] {
                states.push(BellState {
                    k: k + 1,
                    l: l + 1,
                    p: b1 + 1,
                    q: b2 + 1,
                    sign,
                });
            }
        }
    }
    BellFamily { dims, states }
}

/// Conventional names: `Psi±`/`Phi±` in 2⊗2 and the two six-state bases
/// `Psi1..Psi6`, `Phi1..Phi6` in 2⊗3.
pub fn conventional_name(b: &BellState, dims: BipartiteDims) -> Option<String> {
    let s = b.sign;
    let idx = |base: usize| base + usize::from(s == Sign::Minus);
    match (dims.m(), dims.n(), b.k, b.l, b.p, b.q) {
        (2, 2, 1, 2, 1, 2) => Some(format!("Psi{}", s.symbol())),
        (2, 2, 1, 2, 2, 1) => Some(format!("Phi{}", s.symbol())),
        (2, 3, 1, 2, 1, 2) => Some(format!("Psi{}", idx(1))),
        (2, 3, 1, 2, 2, 3) => Some(format!("Psi{}", idx(3))),
        (2, 3, 1, 2, 3, 1) => Some(format!("Psi{}", idx(5))),
        (2, 3, 1, 2, 1, 3) => Some(format!("Phi{}", idx(1))),
        (2, 3, 1, 2, 2, 1) => Some(format!("Phi{}", idx(3))),
        (2, 3, 1, 2, 3, 2) => Some(format!("Phi{}", idx(5))),
        _ => None,
    }
}

/// Inverse of [`conventional_name`] for 2⊗3.
pub fn named_2x3(name: &str) -> Option<BellState> {
    let dims = BipartiteDims::new(2, 3).ok()?;
    enumerate_bell(dims)
        .states
        .into_iter()
        .find(|b| conventional_name(b, dims).as_deref() == Some(name))
}

/// `⟨b|ρ|b⟩`
pub fn project(rho: &DensityOperator, b: &BellState) -> Result<f64> {
    project_rotated(rho, b, 0.0)
}

/// `⟨b(χ)|ρ|b(χ)⟩` for `b(χ) = (|kp⟩ ± e^{-iχ}|lq⟩)/√2`. This equals the
/// probability of the fixed projector `b` after the local phase
/// `|lq⟩ ↦ e^{iχ}|lq⟩`, so `P₊ − P₋ = 2 Re(e^{iχ} ρ_{(k,p),(l,q)})`.
pub fn project_rotated(rho: &DensityOperator, b: &BellState, chi: f64) -> Result<f64> {
    let dims = rho.dims();
    b.check_dims(dims)?;
    let (x, y) = b.joint_indices(dims);
    let m = rho.matrix();
    let cross = Complex64::from_polar(1.0, chi) * m[(x, y)];
    Ok(0.5 * (m[(x, x)].re + m[(y, y)].re) + b.sign.value() * cross.re)
}

/// `(P₊ − P₋)/2` for the Bell pair on `(|kp⟩, |lq⟩)`, which is
/// `Re ρ_{(k,p),(l,q)}`. 1-based levels, `k < l`, `p ≠ q`.
pub fn recover_coefficient(
    rho: &DensityOperator,
    k: usize,
    l: usize,
    p: usize,
    q: usize,
) -> Result<f64> {
    let plus = BellState::new(k, l, p, q, Sign::Plus)?;
    Ok((project(rho, &plus)? - project(rho, &plus.with_sign(Sign::Minus))?) / 2.0)
}

/// One coefficient position and the projector pair that reads it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanTarget {
    /// The `(+)` member; its levels name the coefficient `ρ_{(k,p),(l,q)}`.
    pub plus: BellState,
    pub minus: BellState,
    /// 1-based joint row and column of the coefficient.
    pub row: usize,
    pub col: usize,
}

impl PlanTarget {
    fn new(dims: BipartiteDims, k: usize, l: usize, p: usize, q: usize) -> Self {
        let plus = BellState {
            k,
            l,
            p,
            q,
            sign: Sign::Plus,
        };
        Self {
            plus,
            minus: plus.with_sign(Sign::Minus),
            row: (k - 1) * dims.n() + p,
            col: (l - 1) * dims.n() + q,
        }
    }

    /// True for the `(kp, lq)`, `p<q` position of its quadruple.
    pub fn is_plus_position(&self) -> bool {
        self.plus.p < self.plus.q
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PlanKind {
    /// Both coefficient positions of every quadruple.
    Full,
    /// Only the `(kq, lp)` position of every quadruple. Sufficient after a
    /// local rotation that zeroes the `(kp, lq)` coefficients, as
    /// `zero_a11_a23` does in 2⊗3.
    Reduced,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasurementPlan {
    pub dims: (usize, usize),
    pub kind: PlanKind,
    pub targets: Vec<PlanTarget>,
    /// Projector pairs in the plan that are not orthogonal (they share a
    /// basis ket), so cannot belong to one Bell basis.
    pub non_orthogonal_pairs: Vec<(BellState, BellState)>,
    /// A complete Bell basis needs an even `M·N`.
    pub complete_basis_possible: bool,
}

impl MeasurementPlan {
    fn build(dims: BipartiteDims, kind: PlanKind) -> Self {
        let mut targets = Vec::new();
        for (k, l, p, q) in dims.quadruples() {
            let (k, l, p, q) = (k + 1, l + 1, p + 1, q + 1);
            if kind == PlanKind::Full {
                targets.push(PlanTarget::new(dims, k, l, p, q));
            }
            targets.push(PlanTarget::new(dims, k, l, q, p));
        }
        let projectors: Vec<BellState> = targets.iter().flat_map(|t| [t.plus, t.minus]).collect();
        let mut non_orthogonal_pairs = Vec::new();
        for (i, a) in projectors.iter().enumerate() {
            for b in &projectors[i + 1..] {
                if !orthogonal(a, b) {
                    non_orthogonal_pairs.push((*a, *b));
                }
            }
        }
        Self {
            dims: (dims.m(), dims.n()),
            kind,
            targets,
            non_orthogonal_pairs,
            complete_basis_possible: dims.total().is_multiple_of(2),
        }
    }

    pub fn bipartite_dims(&self) -> BipartiteDims {
        BipartiteDims::new(self.dims.0, self.dims.1).expect("plan dims were validated")
    }

    /// Distinct projectors, in plan order.
    pub fn projectors(&self) -> Vec<BellState> {
        let mut seen = BTreeSet::new();
        self.targets
            .iter()
            .flat_map(|t| [t.plus, t.minus])
            .filter(|b| seen.insert(*b))
            .collect()
    }

    pub fn is_orthogonal_pair(&self, a: &BellState, b: &BellState) -> bool {
        !self
            .non_orthogonal_pairs
            .iter()
            .any(|(x, y)| (x == a && y == b) || (x == b && y == a))
    }

    pub fn reduced(&self) -> Self {
        Self::build(self.bipartite_dims(), PlanKind::Reduced)
    }
}

/// Bell states are orthogonal unless they share exactly one basis ket, or
/// are the same state.
fn orthogonal(a: &BellState, b: &BellState) -> bool {
    let ka = [(a.k, a.p), (a.l, a.q)];
    let kb = [(b.k, b.p), (b.l, b.q)];
    let shared = ka.iter().filter(|x| kb.contains(x)).count();
    match shared {
        0 => true,
        2 => a.sign != b.sign,
        _ => false,
    }
}

/// Projector pairs for both coefficient positions of every quadruple.
pub fn plan_measurement(dims: BipartiteDims) -> MeasurementPlan {
    MeasurementPlan::build(dims, PlanKind::Full)
}

/// One coefficient position per quadruple, `M(M−1)N(N−1)/2` projectors.
pub fn reduced_plan(dims: BipartiteDims) -> MeasurementPlan {
    MeasurementPlan::build(dims, PlanKind::Reduced)
}

/// Per-target phase `χ` applied before projecting (see [`project_rotated`]).
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseAlignment {
    /// Fixed bases; recovers real parts only.
    None,
    /// One phase per plan target, in plan order.
    Explicit(Vec<f64>),
}

impl PhaseAlignment {
    /// Phases that make every targeted coefficient of `|ψ⟩⟨ψ|` real and
    /// non-negative: `χ = −arg(α_kp α*_lq)`.
    pub fn from_pure(psi: &PureState, plan: &MeasurementPlan) -> Self {
        let a = psi.amp();
        Self::Explicit(
            plan.targets
                .iter()
                .map(|t| {
                    let b = &t.plus;
                    let z = a[(b.k - 1, b.p - 1)] * a[(b.l - 1, b.q - 1)].conj();
                    if z.norm() == 0.0 {
                        0.0
                    } else {
                        -z.arg()
                    }
                })
                .collect(),
        )
    }

    /// Phases taken from the density matrix itself, `χ = −arg ρ_xy`.
    pub fn from_density(rho: &DensityOperator, plan: &MeasurementPlan) -> Self {
        let m = rho.matrix();
        Self::Explicit(
            plan.targets
                .iter()
                .map(|t| {
                    let z = m[(t.row - 1, t.col - 1)];
                    if z.norm() == 0.0 {
                        0.0
                    } else {
                        -z.arg()
                    }
                })
                .collect(),
        )
    }

    fn phase(&self, i: usize) -> f64 {
        match self {
            PhaseAlignment::None => 0.0,
            PhaseAlignment::Explicit(v) => v[i],
        }
    }

    fn check(&self, plan: &MeasurementPlan) -> Result<()> {
        if let PhaseAlignment::Explicit(v) = self {
            if v.len() != plan.targets.len() {
                return Err(Error::InvalidArgument(format!(
                    "phase alignment has {} entries, plan has {} targets",
                    v.len(),
                    plan.targets.len()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientEstimate {
    pub row: usize,
    pub col: usize,
    pub p_plus: f64,
    pub p_minus: f64,
    /// `(P₊ − P₋)/2`
    pub estimate: f64,
    /// `½ √(σ₊² + σ₋²)` with `σ = √(P(1−P)/shots)` at the estimated `P`.
    pub std_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShotEstimate {
    /// `None` for exact probabilities.
    pub shots: Option<u64>,
    pub coefficients: Vec<CoefficientEstimate>,
    pub breakdown: GammaBreakdown,
}

impl ShotEstimate {
    pub fn gamma(&self) -> f64 {
        self.breakdown.total
    }
}

fn assemble(
    plan: &MeasurementPlan,
    coefficients: Vec<CoefficientEstimate>,
    cfg: &MeasureConfig,
    shots: Option<u64>,
) -> ShotEstimate {
    let dims = plan.bipartite_dims();
    let lookup = |row: usize, col: usize| {
        coefficients
            .iter()
            .find(|c| c.row == row && c.col == col)
            .map_or(0.0, |c| c.estimate.abs())
    };
    let breakdown = GammaBreakdown::assemble(dims, cfg.n2, |k, l, p, q| {
        let plus = lookup(dims.joint(k, p) + 1, dims.joint(l, q) + 1);
        let minus = lookup(dims.joint(k, q) + 1, dims.joint(l, p) + 1);
        (plus, minus)
    });
    ShotEstimate {
        shots,
        coefficients,
        breakdown,
    }
}

/// Γ estimated from exact projection probabilities (the infinite-shot limit).
/// Coefficients the plan does not target count as zero.
pub fn exact_estimate(
    rho: &DensityOperator,
    plan: &MeasurementPlan,
    alignment: &PhaseAlignment,
    cfg: &MeasureConfig,
) -> Result<ShotEstimate> {
    alignment.check(plan)?;
    let mut coefficients = Vec::with_capacity(plan.targets.len());
    for (i, t) in plan.targets.iter().enumerate() {
        let chi = alignment.phase(i);
        let pp = project_rotated(rho, &t.plus, chi)?;
        let pm = project_rotated(rho, &t.minus, chi)?;
        coefficients.push(CoefficientEstimate {
            row: t.row,
            col: t.col,
            p_plus: pp,
            p_minus: pm,
            estimate: (pp - pm) / 2.0,
            std_error: 0.0,
        });
    }
    Ok(assemble(plan, coefficients, cfg, None))
}

/// Draws `Binomial(shots, P)` for every projector of the plan, then
/// assembles Γ from the plug-in `|(P̂₊ − P̂₋)/2|`.
///
/// The plug-in modulus is biased upward for coefficients whose true value
/// is zero, by about `σ·√(2/π)`.
pub fn simulate_shots(
    rho: &DensityOperator,
    plan: &MeasurementPlan,
    alignment: &PhaseAlignment,
    cfg: &MeasureConfig,
    shots: u64,
    seed: u64,
) -> Result<ShotEstimate> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    alignment.check(plan)?;
    let mut rng = rng_from(seed);
    let n = shots as f64;
    let mut draw = |p: f64| -> Result<f64> {
        let dist = Binomial::new(shots, p.clamp(0.0, 1.0))
            .map_err(|e| Error::InvalidArgument(format!("binomial: {e}")))?;
        Ok(dist.sample(&mut rng) as f64 / n)
    };
    let mut coefficients = Vec::with_capacity(plan.targets.len());
    for (i, t) in plan.targets.iter().enumerate() {
        let chi = alignment.phase(i);
        let pp = draw(project_rotated(rho, &t.plus, chi)?)?;
        let pm = draw(project_rotated(rho, &t.minus, chi)?)?;
        let var = |p: f64| p * (1.0 - p) / n;
        coefficients.push(CoefficientEstimate {
            row: t.row,
            col: t.col,
            p_plus: pp,
            p_minus: pm,
            estimate: (pp - pm) / 2.0,
            std_error: 0.5 * (var(pp) + var(pm)).sqrt(),
        });
    }
    Ok(assemble(plan, coefficients, cfg, Some(shots)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{gamma, Preset};
    use crate::states::bell_vector;
    use crate::states::{pure_to_density, random_mixed, random_product, random_pure};
    use crate::tensor::ONE;

    fn d(m: usize, n: usize) -> BipartiteDims {
        BipartiteDims::new(m, n).unwrap()
    }

    fn bell_2x3() -> DensityOperator {
        pure_to_density(&PureState::from_terms(d(2, 3), &[(1, 1, ONE), (2, 2, ONE)]).unwrap())
    }

    #[test]
    fn family_sizes() {
        for m in 2..=4 {
            for n in 2..=4 {
                let fam = enumerate_bell(d(m, n));
                assert_eq!(fam.states.len(), m * (m - 1) * n * (n - 1));
                let distinct: BTreeSet<_> = fam.states.iter().collect();
                assert_eq!(distinct.len(), fam.states.len());
                for b in &fam.states {
                    let v = bell_vector(b, fam.dims).unwrap();
                    assert!((v.norm() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn named_states() {
        let fam = enumerate_bell(d(2, 2));
        let names: BTreeSet<String> =
            fam.states.iter().filter_map(|b| conventional_name(b, fam.dims)).collect();
        let want: BTreeSet<String> =
            ["Psi+", "Psi-", "Phi+", "Phi-"].iter().map(|s| s.to_string()).collect();
        assert_eq!(names, want);

        let fam = enumerate_bell(d(2, 3));
        let names: BTreeSet<String> =
            fam.states.iter().filter_map(|b| conventional_name(b, fam.dims)).collect();
        assert_eq!(names.len(), 12);
        // Φ2 = (|11⟩ − |23⟩)/√2
        let phi2 = named_2x3("Phi2").unwrap();
        assert_eq!((phi2.k, phi2.p, phi2.l, phi2.q, phi2.sign), (1, 1, 2, 3, Sign::Minus));
        // Ψ5 = (|13⟩ + |21⟩)/√2
        let psi5 = named_2x3("Psi5").unwrap();
        assert_eq!((psi5.k, psi5.p, psi5.l, psi5.q, psi5.sign), (1, 3, 2, 1, Sign::Plus));
    }

    #[test]
    fn the_two_2x3_bases_are_orthonormal() {
        for prefix in ["Psi", "Phi"] {
            let basis: Vec<_> =
                (1..=6).map(|i| bell_vector(&named_2x3(&format!("{prefix}{i}")).unwrap(), d(2, 3)).unwrap()).collect();
            for (i, a) in basis.iter().enumerate() {
                for (j, b) in basis.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((a.dotc(b).norm() - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn projection_examples() {
        let rho = bell_2x3();
        let psi1 = named_2x3("Psi1").unwrap();
        let psi2 = named_2x3("Psi2").unwrap();
        assert!((project(&rho, &psi1).unwrap() - 1.0).abs() < 1e-12);
        assert!(project(&rho, &psi2).unwrap().abs() < 1e-12);
        let mixed = DensityOperator::maximally_mixed(d(2, 3));
        for b in enumerate_bell(d(2, 3)).states {
            assert!((project(&mixed, &b).unwrap() - 1.0 / 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn recover_coefficient_examples() {
        assert!((recover_coefficient(&bell_2x3(), 1, 2, 1, 2).unwrap() - 0.5).abs() < 1e-12);

        for seed in 0..10 {
            let rho = random_mixed(d(3, 3), seed);
            for b in enumerate_bell(rho.dims()).states.iter().filter(|b| b.sign == Sign::Plus) {
                let (x, y) = b.joint_indices(rho.dims());
                let got = recover_coefficient(&rho, b.k, b.l, b.p, b.q).unwrap();
                assert!((got - rho.matrix()[(x, y)].re).abs() < 1e-12);
            }
        }

        // ρ15 = i/2: only the real part is visible.
        let psi = PureState::from_terms(d(2, 3), &[(1, 1, ONE), (2, 2, -crate::tensor::I)]).unwrap();
        let rho = pure_to_density(&psi);
        assert!((rho.matrix()[(0, 4)] - Complex64::new(0.0, 0.5)).norm() < 1e-12);
        assert!(recover_coefficient(&rho, 1, 2, 1, 2).unwrap().abs() < 1e-12);
    }

    #[test]
    fn full_plan_2x2() {
        let plan = plan_measurement(d(2, 2));
        assert_eq!(plan.targets.len(), 2);
        assert_eq!(plan.projectors().len(), 4);
        let cells: Vec<_> = plan.targets.iter().map(|t| (t.row, t.col)).collect();
        assert_eq!(cells, vec![(1, 4), (2, 3)]);
        assert!(plan.complete_basis_possible);
    }

    #[test]
    fn reduced_plan_2x3() {
        let plan = reduced_plan(d(2, 3));
        let names: BTreeSet<String> = plan
            .projectors()
            .iter()
            .map(|b| conventional_name(b, d(2, 3)).unwrap())
            .collect();
        let want: BTreeSet<String> = ["Phi3", "Phi4", "Phi5", "Phi6", "Psi5", "Psi6"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(names, want);
        let cells: BTreeSet<_> = plan.targets.iter().map(|t| (t.row, t.col)).collect();
        assert_eq!(cells, [(2, 4), (3, 5), (3, 4)].into_iter().collect());

        // Each ± pair is orthogonal; Ψ5/Ψ6 overlap every Φ projector.
        for t in &plan.targets {
            assert!(plan.is_orthogonal_pair(&t.plus, &t.minus));
        }
        for psi in ["Psi5", "Psi6"] {
            for phi in ["Phi3", "Phi4", "Phi5", "Phi6"] {
                let a = named_2x3(psi).unwrap();
                let b = named_2x3(phi).unwrap();
                assert!(!plan.is_orthogonal_pair(&a, &b), "{psi} vs {phi}");
            }
        }
        // Φ3/Φ4 and Φ5/Φ6 belong to one basis.
        assert!(plan.is_orthogonal_pair(&named_2x3("Phi3").unwrap(), &named_2x3("Phi5").unwrap()));
    }

    #[test]
    fn reduced_plan_bound() {
        for m in 2..=4 {
            for n in 2..=4 {
                let plan = reduced_plan(d(m, n));
                assert!(plan.projectors().len() <= m * (m - 1) * n * (n - 1) / 2);
                assert!(plan.targets.len() <= m * (m - 1) * n * (n - 1) / 4);
                assert_eq!(plan.complete_basis_possible, (m * n) % 2 == 0);
                assert_eq!(plan_measurement(d(m, n)).projectors().len(), m * (m - 1) * n * (n - 1));
            }
        }
    }

    #[test]
    fn exact_estimate_matches_gamma() {
        let cfg = MeasureConfig::preset(Preset::Paper2x3);
        for (m, n) in [(2, 2), (2, 3), (3, 3)] {
            for seed in 0..5 {
                let psi = random_pure(d(m, n), seed);
                let rho = pure_to_density(&psi);
                let plan = plan_measurement(rho.dims());
                let est = exact_estimate(&rho, &plan, &PhaseAlignment::from_pure(&psi, &plan), &cfg)
                    .unwrap();
                assert!((est.gamma() - gamma(&rho, &cfg).total).abs() < 1e-12);

                let mixed = random_mixed(d(m, n), seed);
                let al = PhaseAlignment::from_density(&mixed, &plan);
                let est = exact_estimate(&mixed, &plan, &al, &cfg).unwrap();
                assert!((est.gamma() - gamma(&mixed, &cfg).total).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reduced_plan_after_zeroing_gives_gamma() {
        let cfg = MeasureConfig::preset(Preset::Paper2x3);
        for seed in 0..10 {
            let psi = random_pure(d(2, 3), seed);
            let (rot, _, _) = crate::local_unitary::zero_a11_a23(&psi).unwrap();
            let plan = reduced_plan(d(2, 3));
            let al = PhaseAlignment::from_pure(&rot, &plan);
            let est = exact_estimate(&pure_to_density(&rot), &plan, &al, &cfg).unwrap();
            let want = crate::measures::concurrence_2x3(&psi).unwrap();
            assert!((est.gamma() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn simulation_is_deterministic_and_reports_errors() {
        let cfg = MeasureConfig::preset(Preset::Paper2x3);
        let rho = bell_2x3();
        let plan = plan_measurement(rho.dims());
        let a = simulate_shots(&rho, &plan, &PhaseAlignment::None, &cfg, 10_000, 3).unwrap();
        let b = simulate_shots(&rho, &plan, &PhaseAlignment::None, &cfg, 10_000, 3).unwrap();
        assert_eq!(a.gamma(), b.gamma());
        let c = simulate_shots(&rho, &plan, &PhaseAlignment::None, &cfg, 10_000, 4).unwrap();
        assert_ne!(a.gamma(), c.gamma());
        for co in &a.coefficients {
            assert!(co.std_error >= 0.0 && co.std_error < 0.01);
        }
        assert!(simulate_shots(&rho, &plan, &PhaseAlignment::None, &cfg, 0, 3).is_err());
        assert!(simulate_shots(&rho, &plan, &PhaseAlignment::Explicit(vec![0.0]), &cfg, 10, 3).is_err());
    }

    #[test]
    fn zero_coefficients_are_biased_upward() {
        // Product state: Γ = 0, every |estimate| is non-negative, and the
        // mean shrinks with more shots.
        let cfg = MeasureConfig::preset(Preset::Paper2x3);
        let rho = random_product(d(2, 3), 1);
        let plan = plan_measurement(rho.dims());
        let al = PhaseAlignment::from_density(&rho, &plan);
        let mean = |shots: u64| {
            (0..40)
                .map(|s| simulate_shots(&rho, &plan, &al, &cfg, shots, s).unwrap().gamma())
                .sum::<f64>()
                / 40.0
        };
        let coarse = mean(1_000);
        let fine = mean(100_000);
        assert!(coarse > 0.0 && fine > 0.0);
        assert!(fine < coarse);
    }
}
