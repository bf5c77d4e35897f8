//! Unitalization, finite semidirect products `Z ⋉ I`, and unital
//! semidirect products `Z[1/m] ⋉ I` with a finite `I`.
//!
//! A unital `Z[1/m] ⋉ I` is pinned down by an idempotent `e` and the two
//! actions of `1/m` on `I`. Splitting an abstract unital ring into this form
//! (locating the idempotent inside the ring and a section of the
//! projection) is not modeled; rings are always given by their data.

mod finite;
mod handle;
mod lambda1;

use thiserror::Error;

use crate::ring::RingError;

pub use finite::{additive_endomorphisms, check_prop_iso, semidirect_finite, unitalization, ActionTables, PropIso};
pub use handle::{Canonical, LocalizedSemidirect, PowerCycle, SdElement, SemidirectData};
pub use lambda1::{Lambda1Report, Merge, WitnessBounds};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemidirectError {
    #[error("invalid data: {condition} fails at {witness:?}")]
    Invalid { condition: String, witness: Vec<usize> },
    #[error("witness check failed: {0}")]
    WitnessFailed(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

impl SemidirectError {
    pub(crate) fn invalid(condition: &str, witness: Vec<usize>) -> Self {
        Self::Invalid { condition: condition.to_string(), witness }
    }
}
