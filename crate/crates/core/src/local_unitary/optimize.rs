//! Derivative-free ascent of Γ over `U(M) × U(N)`.
//!
//! Each restart fixes a starting local unitary `V` and optimizes
//! `Γ(U(x) · V · state)` over the plane-rotation chart `x` (see
//! [`super::UnitaryParams`]), starting from `x = 0`. A sweep visits every
//! coordinate once: a coarse scan over the full period, then a
//! golden-section refinement around the best scan point. A move is only
//! accepted if it improves Γ, so every restart ends at least as high as it
//! started.
//!
//! The start set always contains the identity and, for pure inputs, the
//! Schmidt rotation; the remaining restarts start from Haar-random
//! unitaries.

use rayon::prelude::*;

use super::chart::materialize;
use super::{apply_local, apply_local_density, schmidt_rotation, LocalUnitary};
use crate::measures::{gamma_density_total, gamma_pure_total, gamma_schmidt, MeasureConfig};
use crate::rng::{derive_seed, rng_from};
use crate::states::{random_local_unitary_with, DensityOperator, PureState};
use crate::tensor::{kron, BipartiteDims, ComplexMatrix};

#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a PureState),
    Mixed(&'a DensityOperator),
}

impl StateRef<'_> {
    pub fn dims(&self) -> BipartiteDims {
        match self {
            StateRef::Pure(p) => p.dims(),
            StateRef::Mixed(r) => r.dims(),
        }
    }
}

impl<'a> From<&'a PureState> for StateRef<'a> {
    fn from(p: &'a PureState) -> Self {
        StateRef::Pure(p)
    }
}

impl<'a> From<&'a DensityOperator> for StateRef<'a> {
    fn from(r: &'a DensityOperator) -> Self {
        StateRef::Mixed(r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerOptions {
    /// Total number of starts, including the identity and Schmidt starts.
    pub restarts: usize,
    /// Maximum sweeps per start.
    pub sweeps: usize,
    /// A sweep improving Γ by no more than this ends the start as converged.
    pub tol: f64,
    pub seed: u64,
    /// Scan points per coordinate over one period.
    pub scan_points: usize,
    /// Golden-section bracket width at which refinement stops, in radians.
    pub refine_tol: f64,
    /// Run starts on the rayon pool.
    pub parallel: bool,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            restarts: 8,
            sweeps: 40,
            tol: 1e-9,
            seed: 0,
            scan_points: 8,
            refine_tol: 1e-7,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SupremumReport {
    pub best_gamma: f64,
    pub best_unitary: LocalUnitary,
    /// Γ in the Schmidt basis; only defined for pure inputs.
    pub schmidt_gamma: Option<f64>,
    /// Γ of the input as given.
    pub initial_gamma: f64,
    /// Sweeps run, summed over all starts.
    pub iterations: usize,
    pub restarts: usize,
    /// Index of the winning start (0 = identity, 1 = Schmidt for pure inputs).
    pub best_restart: usize,
    pub converged: bool,
}

impl SupremumReport {
    /// `best_gamma − schmidt_gamma`, positive when the optimizer beat the
    /// Schmidt benchmark.
    pub fn excess_over_schmidt(&self) -> Option<f64> {
        self.schmidt_gamma.map(|s| self.best_gamma - s)
    }
}

struct RestartOutcome {
    gamma: f64,
    unitary: LocalUnitary,
    sweeps: usize,
    converged: bool,
}

/// Objective for one start: the state already rotated by the start unitary.
enum Rotated {
    Pure(ComplexMatrix),
    Mixed(ComplexMatrix),
}

struct Objective {
    dims: BipartiteDims,
    n2: f64,
    state: Rotated,
}

impl Objective {
    fn unitaries(&self, x: &[f64]) -> (ComplexMatrix, ComplexMatrix) {
        let (m, n) = (self.dims.m(), self.dims.n());
        (materialize(m, &x[..m * m]), materialize(n, &x[m * m..]))
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let (ua, ub) = self.unitaries(x);
        match &self.state {
            Rotated::Pure(amp) => {
                let out = &ua * amp * ub.transpose();
                gamma_pure_total(&out, self.dims, self.n2)
            }
            Rotated::Mixed(rho) => {
                let j = kron(&ua, &ub);
                let out = &j * rho * j.adjoint();
                gamma_density_total(&out, self.dims, self.n2)
            }
        }
    }
}

fn start_unitaries(state: StateRef<'_>, opts: &OptimizerOptions) -> Vec<LocalUnitary> {
    let dims = state.dims();
    let mut starts = vec![LocalUnitary::identity(dims)];
    if let StateRef::Pure(psi) = state {
        starts.push(schmidt_rotation(psi).1);
    }
    let fixed = starts.len();
    for r in fixed..opts.restarts.max(fixed) {
        let mut rng = rng_from(derive_seed(opts.seed, &[r as u64]));
        starts.push(random_local_unitary_with(dims, &mut rng));
    }
    starts
}

fn rotate(state: StateRef<'_>, u: &LocalUnitary) -> Rotated {
    match state {
        StateRef::Pure(psi) => Rotated::Pure(
            apply_local(psi, u)
                .expect("start unitary has matching dims")
                .amp()
                .clone(),
        ),
        StateRef::Mixed(rho) => Rotated::Mixed(
            apply_local_density(rho, u)
                .expect("start unitary has matching dims")
                .matrix()
                .clone(),
        ),
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizes `f` along coordinate `i` starting from `(x, fx)`; leaves the
/// best point found in `x` and returns its value.
fn line_search(obj: &Objective, x: &mut [f64], i: usize, fx: f64, opts: &OptimizerOptions) -> f64 {
    let base = x[i];
    let step = std::f64::consts::TAU / opts.scan_points as f64;
    let mut best = (base, fx);
    let probe = |x: &mut [f64], t: f64| {
        x[i] = t;
        obj.eval(x)
    };
    for j in 1..opts.scan_points {
        let t = base + step * j as f64;
        let v = probe(x, t);
        if v > best.1 {
            best = (t, v);
        }
    }

    let (mut a, mut b) = (best.0 - step, best.0 + step);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = probe(x, c);
    let mut fd = probe(x, d);
    while b - a > opts.refine_tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = probe(x, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = probe(x, d);
        }
    }
    for (t, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (t, v);
        }
    }
    x[i] = best.0;
    best.1
}

fn run_start(
    state: StateRef<'_>,
    start: &LocalUnitary,
    cfg: &MeasureConfig,
    opts: &OptimizerOptions,
) -> RestartOutcome {
    let dims = state.dims();
    let obj = Objective {
        dims,
        n2: cfg.n2,
        state: rotate(state, start),
    };
    let nparams = dims.m() * dims.m() + dims.n() * dims.n();
    let mut x = vec![0.0; nparams];
    let mut fx = obj.eval(&x);
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < opts.sweeps {
        let before = fx;
        for i in 0..nparams {
            fx = line_search(&obj, &mut x, i, fx, opts);
        }
        sweeps += 1;
        if fx - before <= opts.tol {
            converged = true;
            break;
        }
    }
    let (ua, ub) = obj.unitaries(&x);
    let step = LocalUnitary::new_unchecked(ua, ub);
    RestartOutcome {
        gamma: fx,
        unitary: step.compose(start),
        sweeps,
        converged,
    }
}

/// Maximizes Γ over local unitaries. Deterministic for a given `opts.seed`,
/// whether or not starts run in parallel.
pub fn maximize_gamma<'a>(
    state: impl Into<StateRef<'a>>,
    cfg: &MeasureConfig,
    opts: &OptimizerOptions,
) -> SupremumReport {
    let state = state.into();
    let starts = start_unitaries(state, opts);
    let outcomes: Vec<RestartOutcome> = if opts.parallel {
        starts
            .par_iter()
            .map(|s| run_start(state, s, cfg, opts))
            .collect()
    } else {
        starts.iter().map(|s| run_start(state, s, cfg, opts)).collect()
    };

    // Max by value, lowest index on ties.
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate().skip(1) {
        if o.gamma > outcomes[best].gamma {
            best = i;
        }
    }
    let iterations = outcomes.iter().map(|o| o.sweeps).sum();
    let restarts = outcomes.len();
    let dims = state.dims();
    let initial_gamma = match state {
        StateRef::Pure(psi) => gamma_pure_total(psi.amp(), dims, cfg.n2),
        StateRef::Mixed(rho) => gamma_density_total(rho.matrix(), dims, cfg.n2),
    };
    let schmidt_gamma = match state {
        StateRef::Pure(psi) => Some(gamma_schmidt(psi, cfg)),
        StateRef::Mixed(_) => None,
    };
    let winner = outcomes.into_iter().nth(best).expect("at least one start");
    SupremumReport {
        best_gamma: winner.gamma,
        best_unitary: winner.unitary,
        schmidt_gamma,
        initial_gamma,
        iterations,
        restarts,
        best_restart: best,
        converged: winner.converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{gamma, gamma_pure, i_concurrence, Preset};
    use crate::states::{
        product_state, random_density_matrix, random_local_unitary, random_mixed, random_pure,
    };
    use crate::tensor::{unitarity_defect, ONE};

    fn d(m: usize, n: usize) -> BipartiteDims {
        BipartiteDims::new(m, n).unwrap()
    }

    fn matched() -> MeasureConfig {
        MeasureConfig::preset(Preset::ConcurrenceMatched)
    }

    fn quick() -> OptimizerOptions {
        OptimizerOptions {
            restarts: 3,
            sweeps: 10,
            parallel: false,
            ..Default::default()
        }
    }

    #[test]
    fn product_state_stays_at_zero() {
        let psi = PureState::from_terms(d(2, 3), &[(1, 2, ONE)]).unwrap();
        let rep = maximize_gamma(&psi, &matched(), &quick());
        assert!(rep.best_gamma < 1e-9);
        assert!(rep.converged);
    }

    #[test]
    fn bell_state_reaches_one() {
        let psi = PureState::from_terms(d(2, 3), &[(1, 1, ONE), (2, 2, ONE)]).unwrap();
        let rep = maximize_gamma(&psi, &matched(), &OptimizerOptions::default());
        assert!((rep.best_gamma - 1.0).abs() < 1e-6);
        assert!((rep.best_gamma - i_concurrence(&psi)).abs() < 1e-6);
    }

    #[test]
    fn reported_unitary_reproduces_best_gamma() {
        let psi = random_pure(d(3, 3), 4);
        let rep = maximize_gamma(&psi, &matched(), &quick());
        assert!(unitarity_defect(rep.best_unitary.u_a()) < 1e-10);
        assert!(unitarity_defect(rep.best_unitary.u_b()) < 1e-10);
        let out = apply_local(&psi, &rep.best_unitary).unwrap();
        assert!((gamma_pure(&out, &matched()).total - rep.best_gamma).abs() < 1e-12);
        assert_eq!(rep.restarts, 3);
    }

    #[test]
    fn never_below_start_or_schmidt() {
        for seed in 0..5 {
            let psi = random_pure(d(2, 4), seed);
            let rep = maximize_gamma(&psi, &matched(), &quick());
            assert!(rep.best_gamma >= gamma_pure(&psi, &matched()).total - 1e-12);
            assert!(rep.best_gamma >= rep.schmidt_gamma.unwrap() - 1e-6);
            assert!(rep.excess_over_schmidt().unwrap() < 1e-9);
            assert!((rep.initial_gamma - gamma_pure(&psi, &matched()).total).abs() < 1e-12);
        }
    }

    #[test]
    fn random_starts_alone_climb() {
        // Without the Schmidt start the ascent still improves on the input.
        let psi = random_pure(d(2, 3), 11);
        let u = random_local_unitary(d(2, 3), 12);
        let rotated = apply_local(&psi, &u).unwrap();
        let rho = crate::states::pure_to_density(&rotated);
        let rep = maximize_gamma(&rho, &matched(), &quick());
        assert!(rep.schmidt_gamma.is_none());
        assert!(rep.best_gamma >= gamma(&rho, &matched()).total);
        assert!((rep.best_gamma - i_concurrence(&psi)).abs() < 1e-4);
    }

    #[test]
    fn mixed_inputs() {
        let mut rng = rng_from(1);
        let prod = product_state(
            &random_density_matrix(2, &mut rng),
            &random_density_matrix(3, &mut rng),
        )
        .unwrap();
        let rep = maximize_gamma(&prod, &matched(), &quick());
        assert!(rep.best_gamma < 1e-9);

        let rho = random_mixed(d(2, 2), 3);
        let rep = maximize_gamma(&rho, &matched(), &quick());
        assert!(rep.best_gamma >= gamma(&rho, &matched()).total);
    }

    #[test]
    fn deterministic_and_parallel_agnostic() {
        let psi = random_pure(d(3, 2), 8);
        let mut opts = quick();
        let a = maximize_gamma(&psi, &matched(), &opts);
        opts.parallel = true;
        let b = maximize_gamma(&psi, &matched(), &opts);
        assert_eq!(a.best_gamma, b.best_gamma);
        assert_eq!(a.best_unitary, b.best_unitary);
        assert_eq!(a.iterations, b.iterations);
    }
}
