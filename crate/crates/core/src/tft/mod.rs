//! The finite homotopy state-sum functor: state spaces, transfer matrices,
//! partition functions, the Euler theory, and the gluing verifier.

mod bordmap;
mod euler;
mod gluing;
mod state;

pub use bordmap::{
    bordism_map, bordism_map_oracle, partition_function, restriction_data, transfer_weight,
    RestrictionData,
};
pub use euler::{euler_tft, verify_euler_triviality_odd, EulerTrivialityReport};
pub use gluing::{mv_counters, verify_gluing, GluingReport};
pub use state::{StateSpace, TftMap};
