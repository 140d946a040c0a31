//! Brute-force cohomology by full cochain enumeration.  This is the
//! independent oracle the engine is checked against; it never touches the
//! Smith-normal-form path.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};

use super::cochain::{CochainTuple, Pair};
use crate::error::{Error, Result};
use crate::exactalg::FinAbGroup;

/// Classes found by enumeration: exact order and one canonical (least)
/// representative per class.
#[derive(Debug)]
pub struct OracleResult {
    pub order: BigUint,
    /// Each representative is factor-major: `reps[class][factor][simplex]`.
    pub classes: Vec<Vec<Vec<u64>>>,
}

impl OracleResult {
    pub fn class_tuple(&self, idx: usize, degree: i64) -> CochainTuple {
        CochainTuple {
            degree,
            slots: self.classes[idx]
                .iter()
                .map(|slot| slot.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        }
    }
}

/// Enumerates all k-cochains, filters cocycles, and quotients by the
/// enumerated coboundaries.  Enforces `|A|^(#k-simplices) <= cap` and the
/// same bound one degree down.
pub fn brute_cohomology_oracle(
    pair: &Pair,
    coeff: &FinAbGroup,
    k: i64,
    cap: u64,
) -> Result<OracleResult> {
    let factors: Vec<u64> = coeff
        .factors()
        .iter()
        .map(|f| u64::try_from(f).map_err(|_| Error::OracleTooLarge("factor exceeds u64".into())))
        .collect::<Result<_>>()?;
    let cols_k = pair.out_indices(k);
    let cols_km1 = pair.out_indices(k - 1);
    for (count, what) in [
        (cols_k.len(), "cochains"),
        (cols_km1.len(), "one degree down"),
    ] {
        let mut total = 1u128;
        for &f in &factors {
            for _ in 0..count {
                total = total.saturating_mul(f as u128);
                if total > cap as u128 {
                    return Err(Error::OracleTooLarge(format!(
                        "{}^{} {} exceeds the cap {}",
                        coeff.order(),
                        count,
                        what,
                        cap
                    )));
                }
            }
        }
    }

    let m = cols_k.len();
    let nslots = factors.len();
    // The state vector is factor-major over the out-columns.
    let dim = m * nslots;
    let radix: Vec<u64> = factors
        .iter()
        .flat_map(|&f| std::iter::repeat_n(f, m))
        .collect();

    // coboundary action per factor (shared integer matrix)
    let delta = pair.coboundary(k);
    let delta_rows = delta.rows();
    let is_cocycle = |state: &[u64]| -> bool {
        for (slot, &f) in factors.iter().enumerate() {
            for r in 0..delta_rows {
                let mut acc: i128 = 0;
                for c in 0..m {
                    let coeff_rc = i128::try_from(&delta[(r, c)]).unwrap();
                    if coeff_rc != 0 {
                        acc += coeff_rc * state[slot * m + c] as i128;
                    }
                }
                if acc.rem_euclid(f as i128) != 0 {
                    return false;
                }
            }
        }
        true
    };

    // enumerate coboundaries of all (k-1)-cochains
    let m1 = cols_km1.len();
    let delta_km1 = pair.coboundary(k - 1);
    let mut coboundaries: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut lower = vec![0u64; m1 * nslots];
    let lower_radix: Vec<u64> = factors
        .iter()
        .flat_map(|&f| std::iter::repeat_n(f, m1))
        .collect();
    loop {
        let mut image = vec![0u64; dim];
        for (slot, &f) in factors.iter().enumerate() {
            for r in 0..m {
                let mut acc: i128 = 0;
                for c in 0..m1 {
                    let coeff_rc = i128::try_from(&delta_km1[(r, c)]).unwrap();
                    if coeff_rc != 0 {
                        acc += coeff_rc * lower[slot * m1 + c] as i128;
                    }
                }
                image[slot * m + r] = acc.rem_euclid(f as i128) as u64;
            }
        }
        coboundaries.insert(image);
        if !increment(&mut lower, &lower_radix) {
            break;
        }
    }

    // walk all cochains in lexicographic order; group cocycles into cosets
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut classes = Vec::new();
    let mut state = vec![0u64; dim];
    loop {
        if !seen.contains(&state) && is_cocycle(&state) {
            // the whole coset state + coboundaries
            for b in &coboundaries {
                let shifted: Vec<u64> = state
                    .iter()
                    .zip(b)
                    .zip(&radix)
                    .map(|((x, y), f)| (x + y) % f)
                    .collect();
                seen.insert(shifted);
            }
            classes.push(state.clone());
        }
        if !increment(&mut state, &radix) {
            break;
        }
    }

    let reps: Vec<Vec<Vec<u64>>> = classes
        .iter()
        .map(|flat| {
            (0..nslots)
                .map(|slot| {
                    // scatter out-columns to full length
                    let mut full = vec![0u64; pair.complex.num_simplices(k)];
                    for (pos, &col) in cols_k.iter().enumerate() {
                        full[col] = flat[slot * m + pos];
                    }
                    full
                })
                .collect()
        })
        .collect();
    Ok(OracleResult {
        order: BigUint::from(reps.len()),
        classes: reps,
    })
}

fn increment(state: &mut [u64], radix: &[u64]) -> bool {
    for i in (0..state.len()).rev() {
        state[i] += 1;
        if state[i] < radix[i] {
            return true;
        }
        state[i] = 0;
    }
    !state.is_empty() && false
}


#[cfg(test)]
mod torus_enumeration {
    use super::*;
    use crate::simplicial::library_complex;
    use std::sync::Arc;

    /// Full enumeration of all 2^21 edge cochains on the 7-vertex torus.
    #[test]
    fn torus_mod2_degree_one() {
        let t2 = Arc::new(library_complex("T2").unwrap());
        let pair = Pair::absolute(t2.clone());
        let coeff = FinAbGroup::cyclic(2);
        let res = brute_cohomology_oracle(&pair, &coeff, 1, 1 << 22).unwrap();
        assert_eq!(res.order, BigUint::from(4u32));
        let h = crate::cohomology::cohomology_pair(&pair, &coeff, 1).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for ci in 0..res.classes.len() {
            let tuple = res.class_tuple(ci, 1);
            seen.insert(h.coordinates_of(&tuple).unwrap());
        }
        assert_eq!(seen.len(), 4);
    }
}
