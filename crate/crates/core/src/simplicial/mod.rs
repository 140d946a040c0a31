//! Finite ordered simplicial complexes, triangulated manifolds with boundary,
//! orientations, bordisms with labeled boundary, and the manifold library.

mod bordism;
mod build;
mod complex;
mod io;
mod library;
mod orientation;

pub use bordism::{Bordism, BoundaryAttach, ClosedObject};
pub use build::{
    barycentric_subdivision, cone, connected_sum, cycle_complex, duoprism_sphere, lens_space,
    mapping_torus, ordered_product, path_complex, quotient_by_cyclic, refine4, ProductVertexMap,
};
pub use complex::{validate_manifold, SimComplex, ValidationReport};
pub use io::{bordism_from_file, bordism_to_file, complex_from_file, complex_to_file, BordismFile};
pub use library::{library_bordism, library_closed, library_complex, library_names};
pub use orientation::{
    boundary_chain, fundamental_class, sort_sign, transport_class, verify_orientation, OrientRing,
    Orientation,
};
