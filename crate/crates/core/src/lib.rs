//! Exact computation of finite homotopy topological field theories.
//!
//! The library builds state-sum TFTs `Z_X` for theories `X` that are finite
//! direct sums of shifted Eilenberg-MacLane spectra `Σ^p HA` (`A` finite
//! abelian), evaluates them on triangulated bordisms, and verifies the
//! abelian-duality square `D(N') ∘ Z_X(M) = |X|^{χ(M)-χ(N)} · Z_dual(M) ∘ D(N)`
//! together with all supporting size, gluing and pairing identities.  Every
//! scalar is an exact cyclotomic rational; there is no floating point on any
//! verification path.

pub mod cohomology;
pub mod duality;
pub mod error;
pub mod exactalg;
pub mod simplicial;
pub mod spectra;
pub mod suite;
pub mod tft;

pub use error::{Error, Result};
