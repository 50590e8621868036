use num_complex::Complex64;

use crate::tensor::{ComplexMatrix, ZERO};

/// Coordinates on `U(d)`: one complex plane rotation per level pair `i<j`
/// followed by a diagonal phase layer,
///
/// ```text
/// U = diag(e^{iδ_1}, …, e^{iδ_d}) · G_{d-1,d} ⋯ G_{1,3} · G_{1,2}
/// ```
///
/// where `G_{ij}(θ, φ)` acts on the `(i, j)` plane as
/// `[[cos θ, −e^{−iφ} sin θ], [e^{iφ} sin θ, cos θ]]`.
/// All-zero parameters give the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryParams {
    dim: usize,
    /// `(θ, φ)` per pair, pairs in lexicographic order.
    pub rotations: Vec<(f64, f64)>,
    pub phases: Vec<f64>,
}

impl UnitaryParams {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            rotations: vec![(0.0, 0.0); dim * (dim - 1) / 2],
            phases: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of real parameters, `d²`.
    pub fn len(&self) -> usize {
        self.dim * self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.dim == 0
    }

    /// Flattened as `θ_0, φ_0, θ_1, φ_1, …, δ_1, …, δ_d`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.len());
        for &(t, p) in &self.rotations {
            v.push(t);
            v.push(p);
        }
        v.extend_from_slice(&self.phases);
        v
    }

    pub fn from_slice(dim: usize, x: &[f64]) -> Self {
        assert_eq!(x.len(), dim * dim, "parameter count must be d^2");
        let npairs = dim * (dim - 1) / 2;
        Self {
            dim,
            rotations: (0..npairs).map(|i| (x[2 * i], x[2 * i + 1])).collect(),
            phases: x[2 * npairs..].to_vec(),
        }
    }

    pub fn materialize(&self) -> ComplexMatrix {
        materialize(self.dim, &self.to_vec())
    }
}

/// Builds the unitary for flattened parameters without allocating a
/// [`UnitaryParams`].
pub(crate) fn materialize(dim: usize, x: &[f64]) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(dim, dim);
    let mut idx = 0;
    for i in 0..dim {
        for j in i + 1..dim {
            let (theta, phi) = (x[idx], x[idx + 1]);
            idx += 2;
            if theta == 0.0 {
                continue;
            }
            let (s, c) = theta.sin_cos();
            let e = Complex64::from_polar(1.0, phi);
            // Left-multiply by G_ij: only rows i and j change.
            for col in 0..dim {
                let ui = u[(i, col)];
                let uj = u[(j, col)];
                u[(i, col)] = ui * c - e.conj() * uj * s;
                u[(j, col)] = e * ui * s + uj * c;
            }
        }
    }
    for i in 0..dim {
        let delta = x[idx + i];
        if delta != 0.0 {
            let e = Complex64::from_polar(1.0, delta);
            for col in 0..dim {
                if u[(i, col)] != ZERO {
                    u[(i, col)] *= e;
                }
            }
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{approx_eq, unitarity_defect};
    use proptest::prelude::*;

    #[test]
    fn zeros_is_identity() {
        for d in 2..=5 {
            let p = UnitaryParams::zeros(d);
            assert_eq!(p.len(), d * d);
            assert!(approx_eq(&p.materialize(), &ComplexMatrix::identity(d, d), 0.0));
        }
    }

    #[test]
    fn flatten_round_trip() {
        let x: Vec<f64> = (0..9).map(|i| i as f64 * 0.37).collect();
        let p = UnitaryParams::from_slice(3, &x);
        assert_eq!(p.to_vec(), x);
        assert_eq!(p.rotations.len(), 3);
        assert_eq!(p.phases.len(), 3);
    }

    proptest! {
        #[test]
        fn materialize_is_unitary(d in 2usize..=5, raw in proptest::collection::vec(-10.0f64..10.0, 25)) {
            let u = materialize(d, &raw[..d * d]);
            prop_assert!(unitarity_defect(&u) < 1e-12);
        }
    }
}
