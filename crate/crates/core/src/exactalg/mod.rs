//! Exact integer and modular linear algebra, finite abelian groups with
//! their character pairing, and cyclotomic-rational scalars.

mod cyclo;
mod graded;
mod group;
mod int_matrix;
mod snf;
mod solve;

pub use cyclo::{CycloMatrix, CycloRat};
pub use graded::{graded_size, GradedFinGroup};
pub use group::{
    character_value, dual_group, group_from_presentation, mu, FinAbGroup, GroupProjection, QmodZ,
};
pub use int_matrix::IntMatrix;
pub use snf::{smith_normal_form, SnfResult};
pub use solve::{cokernel_order, kernel_order, solve_mod, ModSolution};
