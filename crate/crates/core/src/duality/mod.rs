//! The abelian-duality verifier: the duality map on states, the exact
//! duality-square check, the scaling-factor audit, the pairing identities,
//! and the non-orientable counterexample.

mod klein;
mod lambda;
mod lemmas;
mod map;
mod square;

pub use klein::{klein_counterexample, KleinReport};
pub use lambda::{audit_lambda, LambdaCheck, LambdaReport};
pub use lemmas::{verify_pairing_identities, PairingIdentityReport};
pub use map::{dual_partners, duality_map, duality_map_object, state_pairing};
pub use square::{
    verify_closed_duality, verify_duality_square, ClosedDualityReport, DualityReport,
};
