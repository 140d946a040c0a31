//! Empirical invariance under one barycentric subdivision: Euler
//! characteristics, cohomology, orientability and partition functions must
//! not change.

use std::sync::Arc;

use finitetft::cohomology::{cohomology_pair, Pair};
use finitetft::exactalg::FinAbGroup;
use finitetft::simplicial::{
    barycentric_subdivision, fundamental_class, library_complex, validate_manifold, OrientRing,
};
use finitetft::spectra::TheorySpec;
use finitetft::tft::partition_function;

#[test]
fn one_subdivision_is_invisible_to_the_invariants() {
    let coeffs = [
        FinAbGroup::cyclic(2),
        FinAbGroup::cyclic(3),
        FinAbGroup::cyclic(6),
    ];
    for name in ["S2", "RP2", "T2"] {
        let k = Arc::new(library_complex(name).unwrap());
        let sd = Arc::new(barycentric_subdivision(&k).unwrap());

        let rep = validate_manifold(&sd, sd.dim()).unwrap();
        assert!(
            rep.closed && rep.is_manifold(),
            "sd({}) must stay a closed manifold",
            name
        );
        assert_eq!(
            k.euler_characteristic(),
            sd.euler_characteristic(),
            "chi sd({})",
            name
        );
        assert_eq!(
            fundamental_class(&k, OrientRing::Integer).is_ok(),
            fundamental_class(&sd, OrientRing::Integer).is_ok(),
            "orientability of sd({})",
            name
        );

        for coeff in &coeffs {
            for degree in 0..=k.dim() {
                let a = cohomology_pair(&Pair::absolute(k.clone()), coeff, degree).unwrap();
                let b = cohomology_pair(&Pair::absolute(sd.clone()), coeff, degree).unwrap();
                assert_eq!(
                    a.factors(),
                    b.factors(),
                    "H^{}({}) changed under subdivision with Z/{}",
                    degree,
                    name,
                    coeff.order()
                );
            }
        }

        for x in [
            TheorySpec::em(2, 1, FinAbGroup::cyclic(2)).unwrap(),
            TheorySpec::em(2, 0, FinAbGroup::cyclic(3)).unwrap(),
        ] {
            let za = partition_function(&k, &x).unwrap();
            let zb = partition_function(&sd, &x).unwrap();
            assert_eq!(
                za,
                zb,
                "Z[{}]({}) changed under subdivision",
                x.label(),
                name
            );
        }
    }
}
