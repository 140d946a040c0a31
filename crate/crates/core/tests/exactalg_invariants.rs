//! Character-pairing invariants swept over every finite abelian group of
//! order at most 64.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use finitetft::exactalg::{
    character_value, dual_group, mu, CycloMatrix, CycloRat, FinAbGroup, QmodZ,
};

/// All invariant-factor chains with order <= bound.
fn groups_up_to(bound: u64) -> Vec<FinAbGroup> {
    fn extend(chain: &mut Vec<u64>, order: u64, bound: u64, out: &mut Vec<FinAbGroup>) {
        let start = chain.last().copied().unwrap_or(2);
        let mut n = start;
        while order * n <= bound {
            if chain.last().map_or(true, |&prev| n % prev == 0) {
                chain.push(n);
                out.push(
                    FinAbGroup::from_invariant_factors(
                        chain.iter().map(|&f| BigUint::from(f)).collect(),
                    )
                    .unwrap(),
                );
                extend(chain, order * n, bound, out);
                chain.pop();
            }
            n += 1;
        }
    }
    let mut out = vec![FinAbGroup::trivial()];
    extend(&mut Vec::new(), 1, bound, &mut out);
    out
}

#[test]
fn character_sums_vanish_off_the_identity() {
    // Σ_α exp(2πi μ(a, α)) = 0 for every a != 0; this is exactly the
    // orthogonality that inverts the character matrix.
    for group in groups_up_to(64) {
        if group.is_trivial() {
            continue;
        }
        let elements = group.elements();
        for a in &elements {
            if a.iter().all(|x| x.is_zero()) {
                continue;
            }
            let mut acc = CycloRat::zero();
            for alpha in &elements {
                let q = mu(&group, a, alpha).unwrap();
                acc = acc.add(&character_value(&q));
            }
            assert!(
                acc.is_zero(),
                "character sum over {:?} at a = {:?} is {}",
                group.factors(),
                a,
                acc
            );
        }
    }
}

#[test]
fn double_dual_map_is_an_isomorphism() {
    // a -> (α -> μ(a, α)) is injective into the double dual, and the two
    // groups have the same order, so it is an isomorphism.
    for group in groups_up_to(64) {
        let dual = dual_group(&group);
        assert_eq!(group.factors(), dual.factors());
        let elements = group.elements();
        for a in &elements {
            if a.iter().all(|x| x.is_zero()) {
                continue;
            }
            let separated = elements
                .iter()
                .any(|alpha| !mu(&group, a, alpha).unwrap().is_zero());
            assert!(separated, "{:?} not separated in {:?}", a, group.factors());
        }
    }
}

#[test]
fn small_pairing_matrices_invert_exactly() {
    // direct Gauss-Jordan inversion of the full pairing matrix on small
    // groups, including a non-cyclic one
    let groups = [
        FinAbGroup::cyclic(2),
        FinAbGroup::cyclic(3),
        FinAbGroup::cyclic(4),
        FinAbGroup::cyclic(6),
        FinAbGroup::cyclic(8),
        FinAbGroup::from_cyclic_orders(&[BigUint::from(2u32), BigUint::from(2u32)]),
        FinAbGroup::from_cyclic_orders(&[BigUint::from(2u32), BigUint::from(4u32)]),
        FinAbGroup::from_cyclic_orders(&[BigUint::from(3u32), BigUint::from(3u32)]),
    ];
    for group in &groups {
        let elements = group.elements();
        let n = elements.len();
        let mut m = CycloMatrix::zeros(n, n);
        for (i, a) in elements.iter().enumerate() {
            for (j, alpha) in elements.iter().enumerate() {
                m[(i, j)] = character_value(&mu(group, a, alpha).unwrap());
            }
        }
        let inv = m.inverse();
        assert!(
            inv.is_some(),
            "pairing matrix of {:?} is singular",
            group.factors()
        );
        assert_eq!(m.mul(&inv.unwrap()), CycloMatrix::identity(n));
    }
}

#[test]
fn pairing_is_biadditive() {
    let group = FinAbGroup::from_cyclic_orders(&[BigUint::from(2u32), BigUint::from(6u32)]);
    let elements = group.elements();
    for a in elements.iter().take(6) {
        for b in elements.iter().take(6) {
            for alpha in elements.iter().take(6) {
                let sum = group.add(a, b).unwrap();
                let lhs = mu(&group, &sum, alpha).unwrap();
                let rhs = mu(&group, a, alpha)
                    .unwrap()
                    .add(&mu(&group, b, alpha).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }
    // scaling by an integer matches repeated addition
    let a = &elements[1];
    let alpha = &elements[5];
    let q = mu(&group, a, alpha).unwrap();
    let mut acc = QmodZ::zero();
    for _ in 0..5 {
        acc = acc.add(&q);
    }
    assert_eq!(acc, q.scale(&BigInt::from(5)));
}

mod duality_map_sweep {
    use finitetft::duality::duality_map_object;
    use finitetft::exactalg::CycloMatrix;
    use finitetft::simplicial::library_closed;
    use finitetft::suite::theories_for_dim;

    /// D(N) must invert exactly for every oriented suite object and theory.
    #[test]
    fn all_duality_maps_invert() {
        let objects: &[(&str, i64)] = &[
            ("point", 1),
            ("S1", 2),
            ("S1(5)", 2),
            ("S2", 3),
            ("T2", 3),
            ("T2grid", 3),
        ];
        for (name, d) in objects {
            let obj = library_closed(name).unwrap();
            for x in theories_for_dim(*d) {
                let map = duality_map_object(&obj, &x).unwrap();
                let inv = map
                    .matrix
                    .inverse()
                    .unwrap_or_else(|| panic!("D({}) singular for {}", name, x.label()));
                assert_eq!(
                    inv.mul(&map.matrix),
                    CycloMatrix::identity(map.matrix.rows()),
                    "D({}) inverse fails for {}",
                    name,
                    x.label()
                );
            }
        }
    }
}
