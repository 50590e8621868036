use num_complex::Complex64;

use super::{apply_local, LocalUnitary};
use crate::error::{Error, Result};
use crate::states::{schmidt, PureState};
use crate::tensor::{ComplexMatrix, I, ONE, ZERO};

/// `[[cos θ, i e^{iφ} sin θ], [i sin θ, e^{iφ} cos θ]]`
pub fn ua_theta_phi(theta: f64, phi: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    ComplexMatrix::from_row_slice(2, 2, &[c.into(), I * e * s, I * s, e * c])
}

/// The 2×2 block of [`ua_theta_phi`] acting on levels 2 and 3 of a qutrit.
pub fn ub_theta_phi(vartheta: f64, varphi: f64) -> ComplexMatrix {
    let (s, c) = vartheta.sin_cos();
    let e = Complex64::from_polar(1.0, varphi);
    #[rustfmt::skip]
    let m = ComplexMatrix::from_row_slice(3, 3, &[
        ONE, ZERO, ZERO,
        ZERO, c.into(), I * e * s,
        ZERO, I * s, e * c,
    ]);
    m
}

/// Angles chosen by [`zero_a11_a23`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroingAngles {
    pub theta: f64,
    pub phi: f64,
    pub vartheta: f64,
    pub varphi: f64,
}

/// Phase of `z`, or 0 for `z = 0`.
fn arg_or_zero(z: Complex64) -> f64 {
    if z == ZERO {
        0.0
    } else {
        z.arg()
    }
}

/// Rotates a 2⊗3 state so that `α'_11 = α'_23 = 0`, using
/// `U_A(θ, φ) ⊗ U_B(ϑ, ϕ)` with parameters solved in closed form.
///
/// With `apply_local`'s convention `α' = U_A α U_Bᵀ`:
///
/// ```text
/// α'_11 = α_11 cos θ + i e^{iφ} α_21 sin θ
/// α'_23 = i sin ϑ · A + e^{iϕ} cos ϑ · B
///   A = i α_12 sin θ + e^{iφ} α_22 cos θ
///   B = i α_13 sin θ + e^{iφ} α_23 cos θ
/// ```
///
/// `α'_11 = 0` needs `tan θ = |α_11|/|α_21|` and `e^{iφ} = i·(α_11/|α_11|)/(α_21/|α_21|)`.
/// `α'_23 = 0` then needs `tan ϑ = |B|/|A|` and `e^{iϕ} = −i·(A/|A|)/(B/|B|)`.
///
/// Degenerate cases fall out of `atan2`: `α_21 = 0` gives `θ = π/2`,
/// `α_11 = 0` gives `θ = 0`; likewise `A = 0` gives `ϑ = π/2` and `B = 0`
/// gives `ϑ = 0`. A phase whose factor vanishes is set to 0.
pub fn zero_a11_a23(psi: &PureState) -> Result<(PureState, LocalUnitary, ZeroingAngles)> {
    let dims = psi.dims();
    if (dims.m(), dims.n()) != (2, 3) {
        return Err(Error::DimsMismatch {
            expected: "2x3".into(),
            actual: dims.to_string(),
        });
    }
    let a = psi.amp();
    let (a11, a12, a13) = (a[(0, 0)], a[(0, 1)], a[(0, 2)]);
    let (a21, a22, a23) = (a[(1, 0)], a[(1, 1)], a[(1, 2)]);

    let theta = a11.norm().atan2(a21.norm());
    let phi = if a11 == ZERO || a21 == ZERO {
        0.0
    } else {
        std::f64::consts::FRAC_PI_2 + a11.arg() - a21.arg()
    };

    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    let big_a = I * a12 * s + e * a22 * c;
    let big_b = I * a13 * s + e * a23 * c;

    let vartheta = big_b.norm().atan2(big_a.norm());
    let varphi = if big_a == ZERO || big_b == ZERO {
        0.0
    } else {
        -std::f64::consts::FRAC_PI_2 + arg_or_zero(big_a) - arg_or_zero(big_b)
    };

    let u = LocalUnitary::new_unchecked(ua_theta_phi(theta, phi), ub_theta_phi(vartheta, varphi));
    let out = apply_local(psi, &u)?;
    Ok((
        out,
        u,
        ZeroingAngles {
            theta,
            phi,
            vartheta,
            varphi,
        },
    ))
}

/// Rotates `psi` into its Schmidt basis: the output amplitude matrix is
/// `diag(√λ_1, √λ_2, …)`.
pub fn schmidt_rotation(psi: &PureState) -> (PureState, LocalUnitary) {
    let s = schmidt(psi);
    // α = B_A Σ B_B†  ⇒  B_A† α (B_B†)ᵀ = Σ.
    let u = LocalUnitary::new_unchecked(s.basis_a.adjoint(), s.basis_b.transpose());
    let out = apply_local(psi, &u).expect("dims agree by construction");
    (out, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{
        concurrence_2x3, gamma_pure, gamma_schmidt, i_concurrence, MeasureConfig, Preset,
    };
    use crate::states::random_pure;
    use crate::tensor::{approx_eq, unitarity_defect, BipartiteDims, DEFAULT_TOL};
    use std::f64::consts::FRAC_PI_2;

    fn d(m: usize, n: usize) -> BipartiteDims {
        BipartiteDims::new(m, n).unwrap()
    }

    #[test]
    fn printed_matrices() {
        assert!(approx_eq(&ua_theta_phi(0.0, 0.0), &ComplexMatrix::identity(2, 2), 1e-15));
        let want = ComplexMatrix::from_row_slice(2, 2, &[ZERO, I, I, ZERO]);
        assert!(approx_eq(&ua_theta_phi(FRAC_PI_2, 0.0), &want, 1e-15));
        assert!(approx_eq(&ub_theta_phi(0.0, 0.0), &ComplexMatrix::identity(3, 3), 1e-15));
        for (t, p) in [(0.3, 1.1), (2.0, -0.4), (-1.3, 5.0)] {
            assert!(unitarity_defect(&ua_theta_phi(t, p)) < 1e-12);
            assert!(unitarity_defect(&ub_theta_phi(t, p)) < 1e-12);
        }
    }

    #[test]
    fn already_zero_is_identity() {
        let psi = PureState::from_terms(
            d(2, 3),
            &[(1, 2, ONE), (1, 3, Complex64::new(0.0, 1.0)), (2, 1, ONE), (2, 2, ONE)],
        )
        .unwrap();
        let (out, u, _) = zero_a11_a23(&psi).unwrap();
        assert!(approx_eq(out.amp(), psi.amp(), DEFAULT_TOL));
        assert!(approx_eq(u.u_a(), &ComplexMatrix::identity(2, 2), DEFAULT_TOL));
        assert!(approx_eq(u.u_b(), &ComplexMatrix::identity(3, 3), DEFAULT_TOL));
    }

    #[test]
    fn bell_state_zeroing() {
        let bell = PureState::from_terms(d(2, 3), &[(1, 1, ONE), (2, 2, ONE)]).unwrap();
        let (out, _, _) = zero_a11_a23(&bell).unwrap();
        assert!(out.amp()[(0, 0)].norm() < 1e-12);
        assert!(out.amp()[(1, 2)].norm() < 1e-12);
        let g = gamma_pure(&out, &MeasureConfig::preset(Preset::Paper2x3)).total;
        assert!((g - concurrence_2x3(&bell).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn degenerate_branches() {
        // α21 = 0, α11 ≠ 0 → θ = π/2
        let psi = PureState::from_terms(
            d(2, 3),
            &[(1, 1, ONE), (1, 2, ONE), (2, 3, Complex64::new(0.5, 0.5))],
        )
        .unwrap();
        let (out, _, ang) = zero_a11_a23(&psi).unwrap();
        assert!((ang.theta - FRAC_PI_2).abs() < 1e-15);
        assert!(out.amp()[(0, 0)].norm() < 1e-12);
        assert!(out.amp()[(1, 2)].norm() < 1e-12);

        // Product state where A = 0 after the first rotation.
        let psi = PureState::from_terms(d(2, 3), &[(1, 1, ONE), (1, 3, ONE)]).unwrap();
        let (out, _, _) = zero_a11_a23(&psi).unwrap();
        assert!(out.amp()[(0, 0)].norm() < 1e-12);
        assert!(out.amp()[(1, 2)].norm() < 1e-12);

        assert!(zero_a11_a23(&random_pure(d(3, 3), 0)).is_err());
    }

    #[test]
    fn random_states_are_zeroed() {
        let cfg = MeasureConfig::preset(Preset::Paper2x3);
        for seed in 0..200 {
            let psi = random_pure(d(2, 3), seed);
            let (out, u, _) = zero_a11_a23(&psi).unwrap();
            assert!(out.amp()[(0, 0)].norm() < 1e-12, "seed {seed}");
            assert!(out.amp()[(1, 2)].norm() < 1e-12, "seed {seed}");
            assert!(unitarity_defect(u.u_a()) < 1e-12);
            let g = gamma_pure(&out, &cfg).total;
            assert!((g - concurrence_2x3(&psi).unwrap()).abs() < 1e-9);
            assert!((i_concurrence(&out) - i_concurrence(&psi)).abs() < 1e-10);
        }
    }

    #[test]
    fn schmidt_rotation_diagonalizes() {
        let cfg = MeasureConfig::preset(Preset::ConcurrenceMatched);
        for (m, n) in [(2, 2), (2, 3), (3, 3), (4, 3)] {
            for seed in 0..10 {
                let psi = random_pure(d(m, n), seed);
                let (out, _) = schmidt_rotation(&psi);
                let lambda = schmidt(&psi).coefficients;
                for i in 0..m {
                    for j in 0..n {
                        let want = if i == j && i < lambda.len() { lambda[i].sqrt() } else { 0.0 };
                        assert!((out.amp()[(i, j)] - Complex64::new(want, 0.0)).norm() < 1e-10);
                    }
                }
                let g = gamma_pure(&out, &cfg).total;
                assert!((g - gamma_schmidt(&psi, &cfg)).abs() < 1e-10);
                assert!((i_concurrence(&out) - i_concurrence(&psi)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn schmidt_rotation_examples() {
        let psi =
            PureState::from_terms(d(2, 3), &[(1, 1, ONE), (1, 2, ONE), (2, 3, ONE)]).unwrap();
        let (out, _) = schmidt_rotation(&psi);
        assert!((out.amp()[(0, 0)].norm() - (2.0f64 / 3.0).sqrt()).abs() < 1e-10);
        assert!((out.amp()[(1, 1)].norm() - (1.0f64 / 3.0).sqrt()).abs() < 1e-10);

        let diag = PureState::from_terms(
            d(3, 3),
            &[(1, 1, 0.8.into()), (2, 2, 0.5.into()), (3, 3, 0.2.into())],
        )
        .unwrap();
        let (out, _) = schmidt_rotation(&diag);
        for i in 0..3 {
            assert!((out.amp()[(i, i)].norm() - diag.amp()[(i, i)].norm()).abs() < 1e-12);
        }
    }
}
