use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::cyclo::CycloRat;
use super::int_matrix::IntMatrix;
use super::snf::smith_normal_form;
use crate::error::{Error, Result};

/// A finite abelian group in canonical invariant-factor form `n1 | n2 | ...`
/// with every `nj >= 2`.  The empty list is the trivial group.  Elements are
/// coordinate tuples `(a1, ..., ak)` with `aj` in `Z/nj`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    factors: Vec<BigUint>,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup { factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            FinAbGroup::trivial()
        } else {
            FinAbGroup {
                factors: vec![BigUint::from(n)],
            }
        }
    }

    /// Builds the group from a list of cyclic orders, canonicalizing the
    /// result so isomorphic inputs produce identical invariant factors.
    pub fn from_cyclic_orders(orders: &[BigUint]) -> Self {
        let nontrivial: Vec<&BigUint> = orders.iter().filter(|n| **n > BigUint::one()).collect();
        if nontrivial.is_empty() {
            return FinAbGroup::trivial();
        }
        // Already a divisibility chain: keep as is.
        let chain = nontrivial.windows(2).all(|w| (w[1] % w[0]).is_zero());
        if chain {
            return FinAbGroup {
                factors: nontrivial.into_iter().cloned().collect(),
            };
        }
        let n = nontrivial.len();
        let mut rel = IntMatrix::zeros(n, n);
        for (i, f) in nontrivial.iter().enumerate() {
            rel[(i, i)] = BigInt::from((*f).clone());
        }
        let (g, _) = group_from_presentation(&rel).expect("diagonal presentation is finite");
        g
    }

    /// Validates an explicit invariant-factor chain.
    pub fn from_invariant_factors(factors: Vec<BigUint>) -> Result<Self> {
        for f in &factors {
            if *f < BigUint::from(2u32) {
                return Err(Error::FactorMismatch(
                    "invariant factors must be >= 2".into(),
                ));
            }
        }
        for w in factors.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(Error::FactorMismatch(format!(
                    "divisibility chain broken: {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(FinAbGroup { factors })
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut orders = self.factors.clone();
        orders.extend(other.factors.iter().cloned());
        FinAbGroup::from_cyclic_orders(&orders)
    }

    pub fn factors(&self) -> &[BigUint] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn order(&self) -> BigUint {
        self.factors.iter().product()
    }

    /// Least common multiple of the factors (1 for the trivial group).
    pub fn exponent(&self) -> BigUint {
        self.factors.last().cloned().unwrap_or_else(BigUint::one)
    }

    pub fn zero(&self) -> Vec<BigUint> {
        vec![BigUint::zero(); self.factors.len()]
    }

    pub fn reduce(&self, coords: &[BigInt]) -> Result<Vec<BigUint>> {
        if coords.len() != self.factors.len() {
            return Err(Error::FactorMismatch("coordinate length".into()));
        }
        Ok(coords
            .iter()
            .zip(&self.factors)
            .map(|(c, n)| c.mod_floor(&BigInt::from(n.clone())).magnitude().clone())
            .collect())
    }

    pub fn add(&self, a: &[BigUint], b: &[BigUint]) -> Result<Vec<BigUint>> {
        if a.len() != self.factors.len() || b.len() != self.factors.len() {
            return Err(Error::FactorMismatch("coordinate length".into()));
        }
        Ok(a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((x, y), n)| (x + y) % n)
            .collect())
    }

    pub fn neg(&self, a: &[BigUint]) -> Result<Vec<BigUint>> {
        if a.len() != self.factors.len() {
            return Err(Error::FactorMismatch("coordinate length".into()));
        }
        Ok(a.iter()
            .zip(&self.factors)
            .map(|(x, n)| if x.is_zero() { BigUint::zero() } else { n - x })
            .collect())
    }

    /// All elements in lexicographic coordinate order (leftmost coordinate
    /// most significant).
    pub fn elements(&self) -> Vec<Vec<BigUint>> {
        let mut out = vec![vec![]];
        for n in &self.factors {
            let mut next = Vec::new();
            for prefix in &out {
                let mut k = BigUint::zero();
                while &k < n {
                    let mut e = prefix.clone();
                    e.push(k.clone());
                    next.push(e);
                    k += BigUint::one();
                }
            }
            out = next;
        }
        out
    }
}

/// Coordinate projection `Z^cols -> group` attached to a presentation.
#[derive(Debug, Clone)]
pub struct GroupProjection {
    u: IntMatrix,
    kept: Vec<usize>,
    factors: Vec<BigUint>,
}

impl GroupProjection {
    pub fn project(&self, v: &[BigInt]) -> Result<Vec<BigUint>> {
        let uv = self.u.mul_vec(v)?;
        Ok(self
            .kept
            .iter()
            .zip(&self.factors)
            .map(|(&i, n)| {
                uv[i]
                    .mod_floor(&BigInt::from(n.clone()))
                    .magnitude()
                    .clone()
            })
            .collect())
    }

    /// Integer representative of the `i`-th group generator.
    pub fn generator_lift(&self, u_inv: &IntMatrix, i: usize) -> Vec<BigInt> {
        (0..u_inv.rows())
            .map(|r| u_inv[(r, self.kept[i])].clone())
            .collect()
    }
}

/// Quotient of `Z^cols` by the row span of `relations`.
///
/// Fails with the free rank when the quotient is infinite.
pub fn group_from_presentation(relations: &IntMatrix) -> Result<(FinAbGroup, GroupProjection)> {
    let cols = relations.cols();
    let snf = smith_normal_form(&relations.transpose());
    let diag = snf.diag();
    let mut factors = Vec::new();
    let mut kept = Vec::new();
    let mut free_rank = cols.saturating_sub(diag.len());
    for (i, d) in diag.iter().enumerate() {
        if d.is_zero() {
            free_rank += 1;
        } else if !d.is_one() {
            kept.push(i);
            factors.push(d.magnitude().clone());
        }
    }
    if free_rank > 0 {
        return Err(Error::InfiniteGroup { free_rank });
    }
    let group = FinAbGroup::from_invariant_factors(factors.clone())?;
    Ok((
        group,
        GroupProjection {
            u: snf.u,
            kept,
            factors,
        },
    ))
}

/// The Pontryagin dual group, canonically with the same invariant factors.
pub fn dual_group(a: &FinAbGroup) -> FinAbGroup {
    a.clone()
}

/// A rational number modulo 1, stored as a reduced fraction `num/den` with
/// `0 <= num < den`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ {
    num: BigUint,
    den: BigUint,
}

impl QmodZ {
    pub fn zero() -> Self {
        QmodZ {
            num: BigUint::zero(),
            den: BigUint::one(),
        }
    }

    /// `num/den` reduced modulo 1.
    pub fn new(num: &BigInt, den: &BigUint) -> Self {
        assert!(!den.is_zero(), "QmodZ denominator must be positive");
        let d = BigInt::from(den.clone());
        let n = num.mod_floor(&d).magnitude().clone();
        let g = n.gcd(den);
        QmodZ {
            num: n / &g,
            den: den / &g,
        }
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn den(&self) -> &BigUint {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &QmodZ) -> QmodZ {
        let den = self.den.lcm(&other.den);
        let num = &self.num * (&den / &self.den) + &other.num * (&den / &other.den);
        QmodZ::new(&BigInt::from(num), &den)
    }

    pub fn neg(&self) -> QmodZ {
        if self.num.is_zero() {
            QmodZ::zero()
        } else {
            QmodZ {
                num: &self.den - &self.num,
                den: self.den.clone(),
            }
        }
    }

    pub fn scale(&self, k: &BigInt) -> QmodZ {
        QmodZ::new(&(k * BigInt::from(self.num.clone())), &self.den)
    }
}

impl std::fmt::Display for QmodZ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// The canonical pairing of `A` with its dual, `(a, α) -> Σ aj αj / nj mod 1`.
pub fn mu(group: &FinAbGroup, a: &[BigUint], alpha: &[BigUint]) -> Result<QmodZ> {
    if a.len() != group.rank() || alpha.len() != group.rank() {
        return Err(Error::FactorMismatch(format!(
            "pairing arity: group rank {}, |a|={}, |alpha|={}",
            group.rank(),
            a.len(),
            alpha.len()
        )));
    }
    let mut acc = QmodZ::zero();
    for ((x, y), n) in a.iter().zip(alpha).zip(group.factors()) {
        acc = acc.add(&QmodZ::new(&BigInt::from(x * y), n));
    }
    Ok(acc)
}

/// `q -> exp(2πi q)` as an exact root of unity `ζ_den^num`.
pub fn character_value(q: &QmodZ) -> CycloRat {
    let den = u64::try_from(q.den()).expect("character conductor fits in u64");
    let num = u64::try_from(q.num()).expect("character exponent fits in u64");
    CycloRat::root_of_unity(den, num as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bu(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn presentation_z2_z3_is_z6() {
        let rel = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let (g, proj) = group_from_presentation(&rel).unwrap();
        assert_eq!(g.factors(), &[bu(6)]);
        // Cross-check by coset enumeration of Z^2 / <(2,0), (0,3)>.
        let mut seen = std::collections::HashSet::new();
        for x in 0..2i64 {
            for y in 0..3i64 {
                let coords = proj.project(&[BigInt::from(x), BigInt::from(y)]).unwrap();
                seen.insert(coords);
            }
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn presentation_identity_is_trivial() {
        let rel = IntMatrix::identity(3);
        let (g, _) = group_from_presentation(&rel).unwrap();
        assert!(g.is_trivial());
    }

    #[test]
    fn presentation_two_two() {
        let rel = IntMatrix::from_i64(&[&[2, 0], &[0, 2]]);
        let (g, proj) = group_from_presentation(&rel).unwrap();
        assert_eq!(g.factors(), &[bu(2), bu(2)]);
        let mut seen = std::collections::HashSet::new();
        for x in 0..2i64 {
            for y in 0..2i64 {
                seen.insert(proj.project(&[BigInt::from(x), BigInt::from(y)]).unwrap());
            }
        }
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn infinite_presentation_reports_free_rank() {
        let rel = IntMatrix::from_i64(&[&[2, 0]]);
        match group_from_presentation(&rel) {
            Err(Error::InfiniteGroup { free_rank }) => assert_eq!(free_rank, 1),
            other => panic!("expected infinite group, got {:?}", other.map(|(g, _)| g)),
        }
    }

    #[test]
    fn canonicalization_merges_coprime_orders() {
        let g = FinAbGroup::from_cyclic_orders(&[bu(2), bu(3)]);
        assert_eq!(g.factors(), &[bu(6)]);
        let h = FinAbGroup::from_cyclic_orders(&[bu(2), bu(4), bu(3)]);
        assert_eq!(h.factors(), &[bu(2), bu(12)]);
    }

    #[test]
    fn mu_values() {
        let z2 = FinAbGroup::cyclic(2);
        assert_eq!(
            mu(&z2, &[bu(1)], &[bu(1)]).unwrap(),
            QmodZ::new(&BigInt::from(1), &bu(2))
        );
        let z4 = FinAbGroup::cyclic(4);
        assert_eq!(
            mu(&z4, &[bu(1)], &[bu(1)]).unwrap(),
            QmodZ::new(&BigInt::from(1), &bu(4))
        );
        // The character alpha = 1 on Z/4 has order 4.
        let alpha = [bu(1)];
        let mut acc = QmodZ::zero();
        for _ in 0..4 {
            acc = acc.add(&mu(&z4, &[bu(1)], &alpha).unwrap());
        }
        assert!(acc.is_zero());
        // Trivial character pairs to zero.
        assert!(mu(&z4, &[bu(3)], &[bu(0)]).unwrap().is_zero());
    }

    #[test]
    fn element_enumeration_is_lexicographic() {
        let g = FinAbGroup::from_invariant_factors(vec![bu(2), bu(4)]).unwrap();
        let elems = g.elements();
        assert_eq!(elems.len(), 8);
        assert_eq!(elems[0], vec![bu(0), bu(0)]);
        assert_eq!(elems[1], vec![bu(0), bu(1)]);
        assert_eq!(elems[4], vec![bu(1), bu(0)]);
    }
}
