//! Constant-factor conventions that disagree with each other, reproduced as
//! numbers.
//!
//! Direct evaluation of the formulas in [`crate::measures`] is normative.
//! Each [`ConventionEntry`] pairs a commonly quoted closed form (`claimed`)
//! with the value the code computes (`direct`) for one reference state, so
//! the discrepancy is visible instead of silently patched.
//!
//! | preset | `n2` | property |
//! |---|---|---|
//! | `paper-2x3` | 2 | Γ after 2⊗3 zeroing equals `concurrence_2x3` |
//! | `concurrence-matched` | 4 | `gamma_schmidt` equals I-concurrence |
//! | `unnormalized` | 1 | raw sum |

use serde::Serialize;

use crate::error::Result;
use crate::measures::{concurrence_2x3, gamma_pure, i_concurrence, MeasureConfig};
use crate::states::{max_entangled, PureState};
use crate::tensor::{BipartiteDims, ONE};

#[derive(Debug, Clone, Serialize)]
pub struct ConventionEntry {
    pub name: &'static str,
    pub description: String,
    pub claimed: f64,
    pub direct: f64,
}

impl ConventionEntry {
    /// `claimed / direct`
    pub fn ratio(&self) -> f64 {
        self.claimed / self.direct
    }

    pub fn agrees(&self, tol: f64) -> bool {
        (self.claimed - self.direct).abs() <= tol
    }
}

/// `(|11⟩ + |22⟩)/√2` in 2⊗3.
pub fn bell_2x3() -> PureState {
    PureState::from_terms(BipartiteDims::new(2, 3).expect("valid"), &[(1, 1, ONE), (2, 2, ONE)])
        .expect("normalizable")
}

/// Ledger rows for the given `n2`. `k` is the Schmidt rank of the maximally
/// entangled row (it needs `k ≤ min(M, N)` for a `k⊗k` carrier).
pub fn ledger(cfg: &MeasureConfig, k: usize) -> Result<Vec<ConventionEntry>> {
    let n2 = cfg.n2;
    let bell = bell_2x3();
    let mut rows = vec![ConventionEntry {
        name: "concurrence-2x3-vs-i-concurrence",
        description: "2x3 concurrence with its factor 2 against I-concurrence, Bell state".into(),
        claimed: i_concurrence(&bell),
        direct: concurrence_2x3(&bell)?,
    }];

    rows.push(ConventionEntry {
        name: "bell-gamma-sup",
        description: format!("Gamma supremum of a Bell state, claimed sqrt(n2/2), n2 = {n2}"),
        claimed: (n2 / 2.0).sqrt(),
        direct: gamma_pure(&bell, cfg).total,
    });

    let dims = BipartiteDims::new(k, k)?;
    let me = max_entangled(k, dims)?;
    rows.push(ConventionEntry {
        name: "max-entangled-gamma-sup",
        description: format!("Gamma supremum of the rank-{k} maximally entangled state, claimed sqrt(n2)"),
        claimed: n2.sqrt(),
        direct: gamma_pure(&me, cfg).total,
    });
    Ok(rows)
}
