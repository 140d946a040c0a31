use num_bigint::BigInt;
use num_traits::Zero;

use super::cochain::CochainTuple;
use crate::error::{Error, Result};
use crate::exactalg::{character_value, CycloRat, FinAbGroup, QmodZ};
use crate::simplicial::{ClosedObject, OrientRing, Orientation, SimComplex};

/// A cochain with values in Q/Z.
#[derive(Debug, Clone)]
pub struct QmodZCochain {
    pub degree: i64,
    pub values: Vec<QmodZ>,
}

/// Alexander-Whitney cup product of `a` in degree p (coefficients `A`)
/// against `alpha` in degree q (coefficients in the dual group), paired
/// componentwise into Q/Z:
/// `(a ⌣ α)(v0..v_{p+q}) = Σ_j a_j(v0..vp) · α_j(vp..v_{p+q}) / n_j`.
pub fn cup_pair(
    complex: &SimComplex,
    coeff: &FinAbGroup,
    a: &CochainTuple,
    alpha: &CochainTuple,
) -> Result<QmodZCochain> {
    if a.slots.len() != coeff.rank() || alpha.slots.len() != coeff.rank() {
        return Err(Error::FactorMismatch(
            "cup arguments must share the coefficient group".into(),
        ));
    }
    let p = a.degree;
    let q = alpha.degree;
    let deg = p + q;
    let mut values = Vec::with_capacity(complex.num_simplices(deg));
    for simplex in complex.simplices(deg) {
        let front = &simplex[..=(p as usize)];
        let back = &simplex[(p as usize)..];
        let fi = complex
            .simplex_index(p, front)
            .ok_or_else(|| Error::Internal("front face missing".into()))?;
        let bi = complex
            .simplex_index(q, back)
            .ok_or_else(|| Error::Internal("back face missing".into()))?;
        let mut acc = QmodZ::zero();
        for ((sa, sb), n) in a.slots.iter().zip(&alpha.slots).zip(coeff.factors()) {
            let prod = &sa[fi] * &sb[bi];
            acc = acc.add(&QmodZ::new(&prod, n));
        }
        values.push(acc);
    }
    Ok(QmodZCochain {
        degree: deg,
        values,
    })
}

/// Evaluates a top-degree Q/Z class against a fundamental class:
/// `Σ_F sign(F) · c(F)`.
///
/// A mod-2 orientation is only meaningful when every value has denominator
/// dividing 2, since the facet signs are then only defined up to sign.
pub fn evaluate_fundamental(
    complex: &SimComplex,
    c: &QmodZCochain,
    orientation: &Orientation,
) -> Result<QmodZ> {
    if c.degree != complex.dim() {
        return Err(Error::DimensionMismatch(format!(
            "evaluating a degree-{} class on a {}-dimensional fundamental class",
            c.degree,
            complex.dim()
        )));
    }
    if orientation.ring == OrientRing::Mod2 {
        let two = num_bigint::BigUint::from(2u32);
        if c.values
            .iter()
            .any(|v| !v.is_zero() && (&two % v.den()) != num_bigint::BigUint::zero())
        {
            return Err(Error::OrientationRequired(
                "mod-2 fundamental class cannot evaluate odd-order values".into(),
            ));
        }
    }
    let mut acc = QmodZ::zero();
    for (fi, facet) in complex.facets().iter().enumerate() {
        let idx = complex
            .simplex_index(complex.dim(), facet)
            .ok_or_else(|| Error::Internal("facet missing".into()))?;
        let term = c.values[idx].scale(&BigInt::from(orientation.signs[fi] as i64));
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// The duality pairing on a closed oriented manifold:
/// `<a, α>_N = exp(2πi ∫_[N] a ⌣ α)` as an exact root of unity.
pub fn poincare_pairing(
    object: &ClosedObject,
    coeff: &FinAbGroup,
    a: &CochainTuple,
    alpha: &CochainTuple,
) -> Result<CycloRat> {
    let orientation = object.orientation.as_ref().ok_or_else(|| {
        Error::OrientationRequired(format!("{} carries no integer orientation", object.name))
    })?;
    if a.degree + alpha.degree != object.complex.dim() {
        return Err(Error::DimensionMismatch(
            "pairing degrees must sum to the dimension".into(),
        ));
    }
    let cup = cup_pair(&object.complex, coeff, a, alpha)?;
    let val = evaluate_fundamental(&object.complex, &cup, orientation)?;
    Ok(character_value(&val))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{cohomology, Pair};
    use crate::simplicial::{fundamental_class, library_closed, library_complex};
    use num_bigint::BigUint;
    use std::sync::Arc;

    #[test]
    fn zero_class_pairs_trivially() {
        let s1 = library_closed("S1").unwrap();
        let coeff = FinAbGroup::cyclic(2);
        let h1 = cohomology(s1.complex.clone(), &coeff, 1).unwrap();
        let h0 = cohomology(s1.complex.clone(), &coeff, 0).unwrap();
        let zero1 = h1.representative(&h1.zero()).unwrap();
        for alpha in h0.elements() {
            let rep = h0.representative(&alpha).unwrap();
            assert_eq!(
                poincare_pairing(&s1, &coeff, &zero1, &rep).unwrap(),
                CycloRat::one()
            );
        }
    }

    #[test]
    fn circle_pairing_matrix_is_the_character_table() {
        let s1 = library_closed("S1").unwrap();
        let coeff = FinAbGroup::cyclic(2);
        let h1 = cohomology(s1.complex.clone(), &coeff, 1).unwrap();
        let h0 = cohomology(s1.complex.clone(), &coeff, 0).unwrap();
        let mut entries = Vec::new();
        for a in h1.elements() {
            for alpha in h0.elements() {
                let ra = h1.representative(&a).unwrap();
                let rb = h0.representative(&alpha).unwrap();
                entries.push(poincare_pairing(&s1, &coeff, &ra, &rb).unwrap());
            }
        }
        let one = CycloRat::one();
        let minus = CycloRat::from_int(-1);
        assert_eq!(entries, vec![one.clone(), one.clone(), one, minus]);
    }

    #[test]
    fn sphere_top_class_evaluates_to_half() {
        let s2 = Arc::new(library_complex("S2").unwrap());
        let coeff = FinAbGroup::cyclic(2);
        let h2 = cohomology(s2.clone(), &coeff, 2).unwrap();
        assert_eq!(h2.order(), BigUint::from(2u32));
        let gen = h2.representative(&[BigUint::from(1u32)]).unwrap();
        let cup0 = QmodZCochain {
            degree: 2,
            values: gen.slots[0]
                .iter()
                .map(|v| QmodZ::new(v, &BigUint::from(2u32)))
                .collect(),
        };
        let o = fundamental_class(&s2, OrientRing::Integer).unwrap();
        let v = evaluate_fundamental(&s2, &cup0, &o).unwrap();
        assert_eq!(v, QmodZ::new(&BigInt::from(1), &BigUint::from(2u32)));
        // reversal negates the evaluation
        let vn = evaluate_fundamental(&s2, &cup0, &o.negate()).unwrap();
        assert_eq!(vn, v.neg());
    }

    #[test]
    fn torus_generators_cup_to_the_top_class() {
        let t2 = library_closed("T2").unwrap();
        let coeff = FinAbGroup::cyclic(2);
        let h1 = cohomology(t2.complex.clone(), &coeff, 1).unwrap();
        let gens: Vec<_> = h1
            .elements()
            .into_iter()
            .filter(|e| e.iter().any(|x| !num_traits::Zero::is_zero(x)))
            .collect();
        // the pairing matrix on H^1 x H^1 must be nondegenerate: some pair
        // of classes cups to the nonzero top value
        let mut nontrivial = false;
        for a in &gens {
            for b in &gens {
                let ra = h1.representative(a).unwrap();
                let rb = h1.representative(b).unwrap();
                if poincare_pairing(&t2, &coeff, &ra, &rb).unwrap() != CycloRat::one() {
                    nontrivial = true;
                }
            }
        }
        assert!(nontrivial);
    }

    #[test]
    fn pairing_ignores_coboundary_shifts() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let t2 = library_closed("T2").unwrap();
        let coeff = FinAbGroup::cyclic(2);
        let h1 = cohomology(t2.complex.clone(), &coeff, 1).unwrap();
        let pair = Pair::absolute(t2.complex.clone());
        let mut rng = StdRng::seed_from_u64(11);
        let a = h1
            .representative(&[BigUint::from(1u32), BigUint::zero()])
            .unwrap();
        let alpha = h1
            .representative(&[BigUint::zero(), BigUint::from(1u32)])
            .unwrap();
        let base = poincare_pairing(&t2, &coeff, &a, &alpha).unwrap();
        for _ in 0..200 {
            // random 0-cochain coboundary added to either side
            let n0 = t2.complex.num_simplices(0);
            let mut c0 = CochainTuple {
                degree: 0,
                slots: vec![(0..n0).map(|_| BigInt::from(rng.gen_range(0..2))).collect()],
            };
            c0.reduce(&coeff);
            let mut shift = super::super::cochain::coboundary_of(&c0, &t2.complex);
            shift.reduce(&coeff);
            let mut a2 = a.clone();
            a2.add_scaled(&shift, &BigInt::from(1), &coeff);
            let _ = pair;
            let v = poincare_pairing(&t2, &coeff, &a2, &alpha).unwrap();
            assert_eq!(v, base);
            let mut alpha2 = alpha.clone();
            alpha2.add_scaled(&shift, &BigInt::from(1), &coeff);
            let v2 = poincare_pairing(&t2, &coeff, &a, &alpha2).unwrap();
            assert_eq!(v2, base);
        }
    }
}

#[cfg(test)]
mod cap_product_tests {
    use super::*;
    use crate::cohomology::cohomology;
    use crate::exactalg::FinAbGroup;
    use crate::simplicial::library_closed;
    use num_bigint::{BigInt, BigUint};

    /// Test-only simplicial cap product: the fundamental class eats the
    /// front face of each facet, `[N] ∩ a = Σ_F sign(F) a(front_p F) · back F`,
    /// leaving a chain in degree dim - p.
    fn cap_with_class(
        obj: &crate::simplicial::ClosedObject,
        coeff: &FinAbGroup,
        a: &CochainTuple,
    ) -> Vec<(usize, Vec<BigInt>)> {
        let complex = &obj.complex;
        let d = complex.dim();
        let p = a.degree;
        let o = obj.orientation.as_ref().unwrap();
        let mut chain: std::collections::BTreeMap<usize, Vec<BigInt>> =
            std::collections::BTreeMap::new();
        for (fi, facet) in complex.facets().iter().enumerate() {
            let front = &facet[..=(p as usize)];
            let back = &facet[(p as usize)..];
            let fidx = complex.simplex_index(p, front).unwrap();
            let bidx = complex.simplex_index(d - p, back).unwrap();
            let entry = chain
                .entry(bidx)
                .or_insert_with(|| vec![BigInt::from(0); coeff.rank()]);
            for (slot, acc) in a.slots.iter().zip(entry.iter_mut()) {
                *acc += BigInt::from(o.signs[fi] as i64) * &slot[fidx];
            }
        }
        chain.into_iter().collect()
    }

    /// Evaluating the dual class on the capped chain agrees with pairing
    /// through the cup product.
    #[test]
    fn cap_route_matches_cup_route() {
        for (name, n) in [("S1", 2u64), ("S1", 3), ("T2", 2), ("T2", 3)] {
            let obj = library_closed(name).unwrap();
            let coeff = FinAbGroup::cyclic(n);
            let d = obj.complex.dim();
            for p in 0..=d {
                let q = d - p;
                let hp = cohomology(obj.complex.clone(), &coeff, p).unwrap();
                let hq = cohomology(obj.complex.clone(), &coeff, q).unwrap();
                for ac in hp.elements() {
                    for bc in hq.elements() {
                        let a = hp.representative(&ac).unwrap();
                        let alpha = hq.representative(&bc).unwrap();
                        // cup route
                        let cup = cup_pair(&obj.complex, &coeff, &a, &alpha).unwrap();
                        let via_cup = evaluate_fundamental(
                            &obj.complex,
                            &cup,
                            obj.orientation.as_ref().unwrap(),
                        )
                        .unwrap();
                        // cap route: α evaluated on [N] ∩ a
                        let capped = cap_with_class(&obj, &coeff, &a);
                        let mut via_cap = QmodZ::zero();
                        for (bidx, mult) in &capped {
                            for ((slot, m), nf) in alpha.slots.iter().zip(mult).zip(coeff.factors())
                            {
                                via_cap = via_cap.add(&QmodZ::new(&(&slot[*bidx] * m), nf));
                            }
                        }
                        assert_eq!(
                            via_cup, via_cap,
                            "{} Z/{} p={} a={:?} α={:?}",
                            name, n, p, ac, bc
                        );
                    }
                }
            }
        }
    }
}
