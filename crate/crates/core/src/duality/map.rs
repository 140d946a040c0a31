use std::sync::Arc;

use num_bigint::BigUint;

use crate::cohomology::{poincare_pairing, CochainTuple};
use crate::error::{Error, Result};
use crate::exactalg::{CycloMatrix, CycloRat};
use crate::simplicial::ClosedObject;
use crate::spectra::{bc_dual_theory, mapping_sizes, TheorySpec};
use crate::tft::{StateSpace, TftMap};

/// For each summand of the dual theory, the index of the primal summand it
/// pairs against (`(p, A)` against `(d-1-p, Â)`).
pub fn dual_partners(x: &TheorySpec, dual: &TheorySpec) -> Vec<usize> {
    let mut used = vec![false; x.summands().len()];
    dual.summands()
        .iter()
        .map(|t| {
            let j = x
                .summands()
                .iter()
                .enumerate()
                .position(|(j, s)| !used[j] && x.d - 1 - s.p == t.p && s.coeff == t.coeff)
                .expect("dual theory summands match the primal ones");
            used[j] = true;
            j
        })
        .collect()
}

/// The pairing of a full state against a full dual state over one closed
/// object: the product of the summandwise duality pairings.
pub fn state_pairing(
    obj: &Arc<ClosedObject>,
    x: &TheorySpec,
    partners: &[usize],
    primal_reps: &[CochainTuple],
    dual_reps: &[CochainTuple],
) -> Result<CycloRat> {
    let mut acc = CycloRat::one();
    for (t, &j) in partners.iter().enumerate() {
        let coeff = &x.summands()[j].coeff;
        let v = poincare_pairing(obj, coeff, &primal_reps[j], &dual_reps[t])?;
        acc = acc.mul(&v);
    }
    Ok(acc)
}

/// The duality map `D(N): Z_X(N) -> Z_dual(N)` on one closed oriented
/// object: `a -> |τ>=1 X(N)| Σ_α <a, α>_N α`.
pub fn duality_map_object(obj: &Arc<ClosedObject>, x: &TheorySpec) -> Result<TftMap> {
    if obj.orientation.is_none() {
        return Err(Error::OrientationRequired(format!(
            "duality map needs an integer orientation on {}",
            obj.name
        )));
    }
    let dual = bc_dual_theory(x);
    let domain = StateSpace::new(std::slice::from_ref(obj), x)?;
    let codomain = StateSpace::new(std::slice::from_ref(obj), &dual)?;
    let partners = dual_partners(x, &dual);

    let weight = {
        let sizes = mapping_sizes(&crate::cohomology::Pair::absolute(obj.complex.clone()), x)?;
        CycloRat::from_rational(sizes.tau_geq(1))
    };

    // representatives per part, precomputed
    let primal_reps: Vec<Vec<CochainTuple>> = domain
        .parts
        .iter()
        .map(|g| {
            g.elements()
                .iter()
                .map(|e| g.representative(e).unwrap())
                .collect()
        })
        .collect();
    let dual_reps: Vec<Vec<CochainTuple>> = codomain
        .parts
        .iter()
        .map(|g| {
            g.elements()
                .iter()
                .map(|e| g.representative(e).unwrap())
                .collect()
        })
        .collect();

    let mut matrix = CycloMatrix::zeros(codomain.dimension(), domain.dimension());
    for (col, a) in domain.basis.iter().enumerate() {
        let a_parts = domain.split(a);
        let a_tuples: Vec<CochainTuple> = a_parts
            .iter()
            .enumerate()
            .map(|(j, coords)| {
                primal_reps[j][tuple_rank(coords, domain.parts[j].factors())].clone()
            })
            .collect();
        for (row, alpha) in codomain.basis.iter().enumerate() {
            let al_parts = codomain.split(alpha);
            let al_tuples: Vec<CochainTuple> = al_parts
                .iter()
                .enumerate()
                .map(|(t, coords)| {
                    dual_reps[t][tuple_rank(coords, codomain.parts[t].factors())].clone()
                })
                .collect();
            let pairing = state_pairing(obj, x, &partners, &a_tuples, &al_tuples)?;
            matrix[(row, col)] = weight.mul(&pairing);
        }
    }
    Ok(TftMap {
        domain,
        codomain,
        matrix,
    })
}

/// Mixed-radix rank of a coordinate tuple within its factor list.
fn tuple_rank(coords: &[BigUint], factors: &[BigUint]) -> usize {
    let mut rank = BigUint::from(0u32);
    for (c, f) in coords.iter().zip(factors) {
        rank = rank * f + c;
    }
    usize::try_from(&rank).expect("basis index fits usize")
}

/// The duality map over a whole interface: the tensor product of the
/// per-object maps in interface order (identity on the empty interface).
pub fn duality_map(interface: &[Arc<ClosedObject>], x: &TheorySpec) -> Result<TftMap> {
    let dual = bc_dual_theory(x);
    if interface.is_empty() {
        return Ok(TftMap {
            domain: StateSpace::new(&[], x)?,
            codomain: StateSpace::new(&[], &dual)?,
            matrix: CycloMatrix::identity(1),
        });
    }
    let mut acc = duality_map_object(&interface[0], x)?;
    for obj in &interface[1..] {
        let next = duality_map_object(obj, x)?;
        acc = acc.tensor(&next)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::FinAbGroup;
    use crate::simplicial::library_closed;

    fn em(d: i64, p: i64, n: u64) -> TheorySpec {
        TheorySpec::em(d, p, FinAbGroup::cyclic(n)).unwrap()
    }

    #[test]
    fn circle_duality_map_is_the_scaled_character_table() {
        let s1 = library_closed("S1").unwrap();
        let x = em(2, 1, 2);
        let d = duality_map_object(&s1, &x).unwrap();
        let half = CycloRat::from_rational(num_rational::BigRational::new(1.into(), 2.into()));
        let expect: [[i64; 2]; 2] = [[1, 1], [1, -1]];
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(
                    d.matrix[(r, c)],
                    half.mul(&CycloRat::from_int(expect[r][c]))
                );
            }
        }
    }

    #[test]
    fn duality_maps_are_invertible() {
        let cases: Vec<(&str, TheorySpec)> = vec![
            ("S1", em(2, 1, 2)),
            ("S1", em(2, 1, 3)),
            ("S1", em(2, 0, 4)),
            ("S1(5)", em(2, 1, 2)),
            ("T2grid", em(3, 1, 2)),
            ("T2grid", em(3, 0, 3)),
            ("T2", em(3, 1, 3)),
            ("S2", em(3, 1, 4)),
            (
                "point",
                TheorySpec::em(1, 0, FinAbGroup::cyclic(5)).unwrap(),
            ),
        ];
        for (name, x) in cases {
            let obj = library_closed(name).unwrap();
            let d = duality_map_object(&obj, &x).unwrap();
            let inv = d.matrix.inverse();
            assert!(
                inv.is_some(),
                "D({}) not invertible for {}",
                name,
                x.label()
            );
            let prod = d.matrix.mul(&inv.unwrap());
            assert_eq!(prod, CycloMatrix::identity(d.matrix.rows()));
        }
    }

    #[test]
    fn torus_duality_map_for_the_intersection_form() {
        // d=3, X = ΣHZ/2 on the grid torus: 4x4 matrix of ±1 scaled by 1/2,
        // and D D^T is the identity scaled back
        let t2 = library_closed("T2grid").unwrap();
        let x = em(3, 1, 2);
        let d = duality_map_object(&t2, &x).unwrap();
        assert_eq!(d.matrix.rows(), 4);
        let half = CycloRat::from_rational(num_rational::BigRational::new(1.into(), 2.into()));
        let one = CycloRat::one();
        let minus = CycloRat::from_int(-1);
        for r in 0..4 {
            for c in 0..4 {
                let v = &d.matrix[(r, c)];
                let unscaled = v.mul(&half.inverse().unwrap());
                assert!(unscaled == one || unscaled == minus);
            }
        }
    }

    #[test]
    fn orientation_reversal_inverts_the_pairing() {
        let s1 = library_closed("S1").unwrap();
        let x = em(2, 1, 4);
        let d = duality_map_object(&s1, &x).unwrap();
        let rev = s1.reversed();
        let drev = duality_map_object(&rev, &x).unwrap();
        // weight is orientation-independent; each pairing entry inverts
        let sizes =
            mapping_sizes(&crate::cohomology::Pair::absolute(s1.complex.clone()), &x).unwrap();
        let w = CycloRat::from_rational(sizes.tau_geq(1));
        let winv = w.inverse().unwrap();
        for r in 0..d.matrix.rows() {
            for c in 0..d.matrix.cols() {
                let lhs = d.matrix[(r, c)].mul(&winv);
                let rhs = drev.matrix[(r, c)].mul(&winv);
                assert_eq!(lhs.mul(&rhs), CycloRat::one());
            }
        }
    }

    #[test]
    fn non_orientable_object_is_refused() {
        let klein = library_closed("klein").unwrap();
        let x = em(3, 1, 2);
        assert!(matches!(
            duality_map_object(&klein, &x),
            Err(Error::OrientationRequired(_))
        ));
    }
}
