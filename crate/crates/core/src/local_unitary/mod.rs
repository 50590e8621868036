//! Local unitaries `U_A ⊗ U_B` and the supremum of Γ over them.

mod chart;
mod conjecture;
mod optimize;
mod zeroing;

pub use chart::UnitaryParams;
pub use conjecture::{conjecture_sweep, ConjectureReport, ConjectureRow, ConjectureSummary};
pub use optimize::{maximize_gamma, OptimizerOptions, StateRef, SupremumReport};
pub use zeroing::{schmidt_rotation, ua_theta_phi, ub_theta_phi, zero_a11_a23, ZeroingAngles};

use crate::error::{Error, Result};
use crate::states::{DensityOperator, PureState};
use crate::tensor::{kron, unitarity_defect, BipartiteDims, ComplexMatrix};

/// Unitarity tolerance enforced by [`LocalUnitary::new`].
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary {
    u_a: ComplexMatrix,
    u_b: ComplexMatrix,
}

impl LocalUnitary {
    pub fn new(u_a: ComplexMatrix, u_b: ComplexMatrix) -> Result<Self> {
        for u in [&u_a, &u_b] {
            let deviation = unitarity_defect(u);
            if deviation > UNITARY_TOL {
                return Err(Error::NotUnitary { deviation });
            }
        }
        Ok(Self { u_a, u_b })
    }

    pub(crate) fn new_unchecked(u_a: ComplexMatrix, u_b: ComplexMatrix) -> Self {
        Self { u_a, u_b }
    }

    pub fn identity(dims: BipartiteDims) -> Self {
        Self {
            u_a: ComplexMatrix::identity(dims.m(), dims.m()),
            u_b: ComplexMatrix::identity(dims.n(), dims.n()),
        }
    }

    pub fn u_a(&self) -> &ComplexMatrix {
        &self.u_a
    }

    pub fn u_b(&self) -> &ComplexMatrix {
        &self.u_b
    }

    pub fn dims(&self) -> BipartiteDims {
        BipartiteDims::new(self.u_a.nrows(), self.u_b.nrows()).expect("factors are at least 2x2")
    }

    /// `kron(u_a, u_b)`, the action on the joint space.
    pub fn joint(&self) -> ComplexMatrix {
        kron(&self.u_a, &self.u_b)
    }

    /// `self` applied after `first`.
    pub fn compose(&self, first: &LocalUnitary) -> LocalUnitary {
        LocalUnitary {
            u_a: &self.u_a * &first.u_a,
            u_b: &self.u_b * &first.u_b,
        }
    }

    fn check_dims(&self, dims: BipartiteDims) -> Result<()> {
        if self.u_a.nrows() != dims.m() || self.u_b.nrows() != dims.n() {
            return Err(Error::DimsMismatch {
                expected: dims.to_string(),
                actual: format!("{}x{}", self.u_a.nrows(), self.u_b.nrows()),
            });
        }
        Ok(())
    }
}

/// `amp ↦ u_a · amp · u_bᵀ`, i.e. the joint vector is multiplied by `kron(u_a, u_b)`.
pub fn apply_local(psi: &PureState, u: &LocalUnitary) -> Result<PureState> {
    u.check_dims(psi.dims())?;
    Ok(PureState::new_unchecked(
        psi.dims(),
        apply_to_amp(psi.amp(), &u.u_a, &u.u_b),
    ))
}

pub(crate) fn apply_to_amp(
    amp: &ComplexMatrix,
    u_a: &ComplexMatrix,
    u_b: &ComplexMatrix,
) -> ComplexMatrix {
    u_a * amp * u_b.transpose()
}

/// `ρ ↦ U ρ U†` with `U = kron(u_a, u_b)`.
pub fn apply_local_density(rho: &DensityOperator, u: &LocalUnitary) -> Result<DensityOperator> {
    u.check_dims(rho.dims())?;
    let j = u.joint();
    Ok(DensityOperator::new_unchecked(
        rho.dims(),
        &j * rho.matrix() * j.adjoint(),
    ))
}
