//! State files, report rows and the command implementations behind the
//! `bell-gamma` binary.
//!
//! Commands return a [`CommandOutput`] holding the rendered report and the
//! exit code (0 pass, 1 quantitative check failed). Input and usage errors
//! surface as [`Error`] and map to exit code 2 in the binary.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bell_analysis::{plan_measurement, simulate_shots, PhaseAlignment};
use crate::error::{Error, Result};
use crate::local_unitary::{conjecture_sweep, maximize_gamma, OptimizerOptions, StateRef};
use crate::measures::{
    concurrence_2x3, concurrence_general, gamma, gamma_schmidt, i_concurrence, MeasureConfig,
    CONCURRENCE_PREFACTOR,
};
use crate::phase_povm::gamma_via_povm;
use crate::rng::derive_seed;
use crate::states::{pure_to_density, DensityOperator, PureState, STATE_TOL};
use crate::tensor::{BipartiteDims, ComplexMatrix};

/// Γ below this counts as zero when labelling a state.
pub const SEPARABLE_TOL: f64 = 1e-9;

/// Largest `|gamma − povm_gamma|` accepted by `povm-check`.
pub const POVM_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Density,
}

/// On-disk state: `data` is the `M×N` amplitude matrix for pure states or
/// the `MN×MN` density matrix, as nested arrays of `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub kind: StateKind,
    pub data: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone)]
pub enum LoadedState {
    Pure(PureState),
    Density(DensityOperator),
}

impl LoadedState {
    pub fn dims(&self) -> BipartiteDims {
        match self {
            LoadedState::Pure(p) => p.dims(),
            LoadedState::Density(r) => r.dims(),
        }
    }

    pub fn density(&self) -> DensityOperator {
        match self {
            LoadedState::Pure(p) => pure_to_density(p),
            LoadedState::Density(r) => r.clone(),
        }
    }

    pub fn as_ref(&self) -> StateRef<'_> {
        match self {
            LoadedState::Pure(p) => StateRef::Pure(p),
            LoadedState::Density(r) => StateRef::Mixed(r),
        }
    }
}

fn to_pairs(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

impl StateFile {
    pub fn from_pure(psi: &PureState) -> Self {
        let d = psi.dims();
        Self {
            dims: [d.m(), d.n()],
            kind: StateKind::Pure,
            data: to_pairs(psi.amp()),
        }
    }

    pub fn from_density(rho: &DensityOperator) -> Self {
        let d = rho.dims();
        Self {
            dims: [d.m(), d.n()],
            kind: StateKind::Density,
            data: to_pairs(rho.matrix()),
        }
    }

    fn matrix(&self, rows: usize, cols: usize) -> Result<ComplexMatrix> {
        let shape_ok = self.data.len() == rows && self.data.iter().all(|r| r.len() == cols);
        if !shape_ok {
            let got_cols = self.data.first().map_or(0, |r| r.len());
            return Err(Error::DimsMismatch {
                expected: format!("{rows}x{cols} data for dims {}x{}", self.dims[0], self.dims[1]),
                actual: format!("{}x{got_cols}", self.data.len()),
            });
        }
        Ok(ComplexMatrix::from_fn(rows, cols, |i, j| {
            let [re, im] = self.data[i][j];
            Complex64::new(re, im)
        }))
    }

    /// Validates shape and normalization. With `renormalize`, pure data is
    /// rescaled instead of rejected.
    pub fn into_state(&self, renormalize: bool) -> Result<LoadedState> {
        let dims = BipartiteDims::new(self.dims[0], self.dims[1])?;
        match self.kind {
            StateKind::Pure => {
                let amp = self.matrix(dims.m(), dims.n())?;
                if renormalize {
                    Ok(LoadedState::Pure(PureState::normalized(dims, amp)?))
                } else {
                    Ok(LoadedState::Pure(PureState::new(dims, amp)?))
                }
            }
            StateKind::Density => {
                let rho = self.matrix(dims.total(), dims.total())?;
                Ok(LoadedState::Density(DensityOperator::with_tolerance(dims, rho, STATE_TOL)?))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state files always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

pub fn load_state(path: &Path, renormalize: bool) -> Result<LoadedState> {
    StateFile::read(path)?.into_state(renormalize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidArgument(format!("unknown output format {other:?}"))),
        }
    }
}

/// Fixed-precision float formatting for CSV: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// A report row with a fixed CSV column order.
pub trait CsvRow {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

pub fn render<T: CsvRow + Serialize>(rows: &[T], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("rows always serialize");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(T::HEADER).expect("in-memory write");
            for r in rows {
                w.write_record(r.fields()).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
        }
    }
}

/// One state through every measure. Quantities that need a pure state are
/// empty for density inputs.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub state: String,
    pub dims: String,
    pub n2_preset: String,
    pub n2: f64,
    pub gamma: f64,
    pub gamma_sup: f64,
    pub gamma_schmidt: Option<f64>,
    pub i_concurrence: Option<f64>,
    pub concurrence_general: Option<f64>,
    pub concurrence_2x3: Option<f64>,
    pub povm_gamma: f64,
    /// `gamma_sup − gamma_schmidt`
    pub deviation_sup_schmidt: Option<f64>,
    /// `gamma_sup − concurrence_general(n2)`
    pub deviation_sup_concurrence: Option<f64>,
    /// `gamma_via_povm − gamma`
    pub deviation_povm: f64,
    pub verdict: String,
}

impl CsvRow for ReportRow {
    const HEADER: &'static [&'static str] = &[
        "state",
        "dims",
        "n2_preset",
        "n2",
        "gamma",
        "gamma_sup",
        "gamma_schmidt",
        "i_concurrence",
        "concurrence_general",
        "concurrence_2x3",
        "povm_gamma",
        "deviation_sup_schmidt",
        "deviation_sup_concurrence",
        "deviation_povm",
        "verdict",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            self.state.clone(),
            self.dims.clone(),
            self.n2_preset.clone(),
            fmt_f64(self.n2),
            fmt_f64(self.gamma),
            fmt_f64(self.gamma_sup),
            fmt_opt(self.gamma_schmidt),
            fmt_opt(self.i_concurrence),
            fmt_opt(self.concurrence_general),
            fmt_opt(self.concurrence_2x3),
            fmt_f64(self.povm_gamma),
            fmt_opt(self.deviation_sup_schmidt),
            fmt_opt(self.deviation_sup_concurrence),
            fmt_f64(self.deviation_povm),
            self.verdict.clone(),
        ]
    }
}

pub fn report_row(
    name: &str,
    state: &LoadedState,
    cfg: &MeasureConfig,
    opts: &OptimizerOptions,
    grid: usize,
) -> Result<ReportRow> {
    let dims = state.dims();
    let rho = state.density();
    let g = gamma(&rho, cfg).total;
    let povm = gamma_via_povm(&rho, cfg, grid)?;
    let sup = maximize_gamma(state.as_ref(), cfg, opts).best_gamma;
    let (schmidt, ic, cg, c23) = match state {
        LoadedState::Pure(psi) => (
            Some(gamma_schmidt(psi, cfg)),
            Some(i_concurrence(psi)),
            Some(concurrence_general(psi, CONCURRENCE_PREFACTOR)),
            concurrence_2x3(psi).ok(),
        ),
        LoadedState::Density(_) => (None, None, None, None),
    };
    let same_n2 = match state {
        LoadedState::Pure(psi) => Some(concurrence_general(psi, cfg.n2)),
        LoadedState::Density(_) => None,
    };
    let verdict = if sup < SEPARABLE_TOL {
        "separable by Γ-criterion"
    } else {
        "Γ > 0"
    };
    Ok(ReportRow {
        state: name.to_string(),
        dims: dims.to_string(),
        n2_preset: cfg.label(),
        n2: cfg.n2,
        gamma: g,
        gamma_sup: sup,
        gamma_schmidt: schmidt,
        i_concurrence: ic,
        concurrence_general: cg,
        concurrence_2x3: c23,
        povm_gamma: povm,
        deviation_sup_schmidt: schmidt.map(|s| sup - s),
        deviation_sup_concurrence: same_n2.map(|c| sup - c),
        deviation_povm: povm - g,
        verdict: verdict.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub report: String,
    /// Human-readable summary for stderr.
    pub summary: String,
    pub exit_code: i32,
}

fn state_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn cmd_measure(
    path: &Path,
    cfg: &MeasureConfig,
    opts: &OptimizerOptions,
    grid: usize,
    renormalize: bool,
    format: OutputFormat,
) -> Result<CommandOutput> {
    let state = load_state(path, renormalize)?;
    let row = report_row(&state_name(path), &state, cfg, opts, grid)?;
    Ok(CommandOutput {
        summary: format!("{}: gamma = {}, {}", row.state, row.gamma, row.verdict),
        report: render(&[row], format),
        exit_code: 0,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureTableRow {
    pub dims: String,
    pub trials: usize,
    pub max_deviation: f64,
    pub overshoots: usize,
}

impl CsvRow for ConjectureTableRow {
    const HEADER: &'static [&'static str] = &["dims", "trials", "max_deviation", "overshoots"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.dims.clone(),
            self.trials.to_string(),
            fmt_f64(self.max_deviation),
            self.overshoots.to_string(),
        ]
    }
}

/// Runs the sweep and fails (exit 1) when any deviation reaches `threshold`
/// or any trial overshoots the Schmidt value.
pub fn cmd_conjecture(
    dims: &[BipartiteDims],
    trials: usize,
    seed: u64,
    threshold: f64,
    cfg: &MeasureConfig,
    opts: &OptimizerOptions,
    format: OutputFormat,
) -> Result<CommandOutput> {
    let report = conjecture_sweep(dims, trials, seed, cfg, opts);
    let rows: Vec<ConjectureTableRow> = report
        .summaries
        .iter()
        .filter(|s| s.trials > 0)
        .map(|s| ConjectureTableRow {
            dims: s.dims.clone(),
            trials: s.trials,
            max_deviation: s.max_deviation,
            overshoots: s.overshoots,
        })
        .collect();
    let pass = report.max_deviation() < threshold && report.overshoots() == 0;
    Ok(CommandOutput {
        summary: format!(
            "max deviation {:e}, overshoots {}: {}",
            report.max_deviation(),
            report.overshoots(),
            if pass { "pass" } else { "FAIL" }
        ),
        report: render(&rows, format),
        exit_code: if pass { 0 } else { 1 },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PovmRow {
    pub state: String,
    pub dims: String,
    pub grid: usize,
    pub gamma: f64,
    pub povm_gamma: f64,
    pub difference: f64,
}

impl CsvRow for PovmRow {
    const HEADER: &'static [&'static str] =
        &["state", "dims", "grid", "gamma", "povm_gamma", "difference"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.state.clone(),
            self.dims.clone(),
            self.grid.to_string(),
            fmt_f64(self.gamma),
            fmt_f64(self.povm_gamma),
            fmt_f64(self.difference),
        ]
    }
}

pub fn cmd_povm_check(
    path: &Path,
    cfg: &MeasureConfig,
    grid: usize,
    renormalize: bool,
    format: OutputFormat,
) -> Result<CommandOutput> {
    if grid < 3 {
        return Err(Error::GridTooCoarse(grid));
    }
    let state = load_state(path, renormalize)?;
    let rho = state.density();
    let g = gamma(&rho, cfg).total;
    let p = gamma_via_povm(&rho, cfg, grid)?;
    let row = PovmRow {
        state: state_name(path),
        dims: rho.dims().to_string(),
        grid,
        gamma: g,
        povm_gamma: p,
        difference: (p - g).abs(),
    };
    let pass = row.difference < POVM_CHECK_TOL;
    Ok(CommandOutput {
        summary: format!("|difference| = {:e}: {}", row.difference, if pass { "pass" } else { "FAIL" }),
        report: render(&[row], format),
        exit_code: if pass { 0 } else { 1 },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ShotRow {
    pub shots: u64,
    pub rep: usize,
    pub gamma_hat: f64,
    pub abs_error: f64,
}

impl CsvRow for ShotRow {
    const HEADER: &'static [&'static str] = &["shots", "rep", "gamma_hat", "abs_error"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.shots.to_string(),
            self.rep.to_string(),
            fmt_f64(self.gamma_hat),
            fmt_f64(self.abs_error),
        ]
    }
}

pub fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Shot-noise runs over the full Bell plan. Pure inputs are phase-aligned
/// from their amplitudes; density inputs need explicit per-target phases.
/// Rep `r` at `shots` uses seed `derive_seed(seed, [shots, r])`.
#[allow(clippy::too_many_arguments)]
pub fn cmd_simulate(
    path: &Path,
    cfg: &MeasureConfig,
    shots: &[u64],
    reps: usize,
    seed: u64,
    phase_rotation: Option<&[f64]>,
    renormalize: bool,
    format: OutputFormat,
) -> Result<CommandOutput> {
    let state = load_state(path, renormalize)?;
    let rho = state.density();
    let plan = plan_measurement(rho.dims());
    let alignment = match (&state, phase_rotation) {
        (_, Some(phases)) => PhaseAlignment::Explicit(phases.to_vec()),
        (LoadedState::Pure(psi), None) => PhaseAlignment::from_pure(psi, &plan),
        (LoadedState::Density(_), None) => {
            return Err(Error::InvalidArgument(
                "density input needs --phase-rotation with one phase per plan target".into(),
            ))
        }
    };
    let exact = gamma(&rho, cfg).total;
    let mut rows = Vec::with_capacity(shots.len() * reps);
    let mut summary = Vec::new();
    for &k in shots {
        let mut errs = Vec::with_capacity(reps);
        for r in 0..reps {
            let est = simulate_shots(&rho, &plan, &alignment, cfg, k, derive_seed(seed, &[k, r as u64]))?;
            let err = (est.gamma() - exact).abs();
            errs.push(err);
            rows.push(ShotRow {
                shots: k,
                rep: r,
                gamma_hat: est.gamma(),
                abs_error: err,
            });
        }
        summary.push(format!("shots {k}: median abs_error {:e}", median(&mut errs)));
    }
    Ok(CommandOutput {
        report: render(&rows, format),
        summary: summary.join("\n"),
        exit_code: 0,
    })
}

/// Parses a JSON array of phases for `--phase-rotation`.
pub fn read_phases(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}
