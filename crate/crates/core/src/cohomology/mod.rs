//! Simplicial cohomology and homology with finite abelian coefficients:
//! absolute and relative groups, induced maps, long exact sequences, cup
//! products against the dual coefficients, and the duality pairing over a
//! fundamental class.

mod cochain;
mod groups;
mod maps;
mod oracle;
mod pairing;

pub use cochain::{
    coboundary_of, extend_by_zero, is_cocycle, pullback_cochain, CochainTuple, Pair,
};
pub use groups::{
    cohomology, cohomology_pair, cyclic_cohomology, cyclic_homology_order, CohGroup,
    CyclicCohomology,
};
pub use maps::{connecting_hom, induced_map, les_counters, les_of_pair, GroupHom, LesResult};
pub use oracle::{brute_cohomology_oracle, OracleResult};
pub use pairing::{cup_pair, evaluate_fundamental, poincare_pairing, QmodZCochain};
