//! Theory specifications (finite sums of shifted Eilenberg-MacLane spectra),
//! their sizes, truncated mapping-spectrum sizes, and the dual theory.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cohomology::{cohomology_pair, Pair};
use crate::error::{Error, Result};
use crate::exactalg::{dual_group, FinAbGroup};

/// The data `(d, ⊕_j Σ^{p_j} H A_j)` defining a finite homotopy TFT.  By
/// construction only sums of shifted Eilenberg-MacLane summands can be
/// expressed; there is no field for Postnikov invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheorySpec {
    pub d: i64,
    summands: Vec<Summand>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub p: i64,
    #[serde(rename = "A", with = "coeff_serde")]
    pub coeff: FinAbGroup,
}

mod coeff_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(g: &FinAbGroup, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<u64> = g
            .factors()
            .iter()
            .map(|f| u64::try_from(f).expect("factor fits u64 for serialization"))
            .collect();
        serde::Serialize::serialize(&v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<FinAbGroup, D::Error> {
        let v: Vec<u64> = serde::Deserialize::deserialize(d)?;
        let factors: Vec<BigUint> = v.into_iter().map(BigUint::from).collect();
        Ok(FinAbGroup::from_cyclic_orders(&factors))
    }
}

impl TheorySpec {
    /// Single-summand theory `Σ^p H A` in dimension `d`.
    pub fn em(d: i64, p: i64, coeff: FinAbGroup) -> Result<TheorySpec> {
        TheorySpec::new(d, vec![(p, coeff)])
    }

    pub fn new(d: i64, summands: Vec<(i64, FinAbGroup)>) -> Result<TheorySpec> {
        if d < 1 {
            return Err(Error::InvalidInput("theory dimension must be >= 1".into()));
        }
        if summands.is_empty() {
            return Err(Error::InvalidInput(
                "a theory needs at least one summand".into(),
            ));
        }
        let mut summands: Vec<Summand> = summands
            .into_iter()
            .map(|(p, coeff)| Summand { p, coeff })
            .collect();
        summands.sort_by(|a, b| (a.p, a.coeff.factors()).cmp(&(b.p, b.coeff.factors())));
        Ok(TheorySpec { d, summands })
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    /// Least common multiple of all coefficient exponents: the scalar field
    /// conductor shared by this theory and its dual.
    pub fn conductor(&self) -> u64 {
        let mut m = 1u64;
        for s in &self.summands {
            let e = u64::try_from(&s.coeff.exponent()).expect("exponent fits u64");
            m = num_integer::lcm(m, e.max(1));
        }
        m
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|s| {
                let factors: Vec<String> =
                    s.coeff.factors().iter().map(|f| f.to_string()).collect();
                format!("S^{} H(Z/{})", s.p, factors.join("+Z/"))
            })
            .collect();
        format!("d={} {}", self.d, parts.join(" (+) "))
    }
}

/// `|X| = Π_j |A_j|^((-1)^(p_j))`.
pub fn theory_size(x: &TheorySpec) -> BigRational {
    let mut acc = BigRational::one();
    for s in x.summands() {
        let ord = BigRational::from(BigInt::from(s.coeff.order()));
        if s.p.rem_euclid(2) == 0 {
            acc *= ord;
        } else {
            acc /= ord;
        }
    }
    acc
}

/// The dual theory in the same dimension: each summand `(p, A)` becomes
/// `(d-1-p, Â)`, the degreewise dual shifted to pair against the original.
pub fn bc_dual_theory(x: &TheorySpec) -> TheorySpec {
    TheorySpec::new(
        x.d,
        x.summands()
            .iter()
            .map(|s| (x.d - 1 - s.p, dual_group(&s.coeff)))
            .collect(),
    )
    .expect("dual of a valid theory is valid")
}

/// Graded orders `|X^{-i}(K)|` of a mapping spectrum, with the truncated
/// sizes derived from them.
#[derive(Debug, Clone)]
pub struct MappingSpectrumSizes {
    /// i -> |π_i X(K)| = |X^{-i}(K)|; only nonzero entries are stored.
    pub graded: BTreeMap<i64, BigUint>,
}

impl MappingSpectrumSizes {
    pub fn total(&self) -> BigRational {
        self.range_size(i64::MIN, i64::MAX)
    }

    /// `|τ_{>= i}|`.
    pub fn tau_geq(&self, i: i64) -> BigRational {
        self.range_size(i, i64::MAX)
    }

    /// `|τ_{<= i}|`.
    pub fn tau_leq(&self, i: i64) -> BigRational {
        self.range_size(i64::MIN, i)
    }

    fn range_size(&self, lo: i64, hi: i64) -> BigRational {
        let mut acc = BigRational::one();
        for (&i, ord) in &self.graded {
            if i < lo || i > hi {
                continue;
            }
            let r = BigRational::from(BigInt::from(ord.clone()));
            if i.rem_euclid(2) == 0 {
                acc *= r;
            } else {
                acc /= r;
            }
        }
        acc
    }
}

/// Graded orders of `X(K)` (or of the pair spectrum when `pair` is
/// relative): `|X^{-i}| = Π_j |H^{p_j - i}(pair; A_j)|`.
pub fn mapping_sizes(pair: &Pair, x: &TheorySpec) -> Result<MappingSpectrumSizes> {
    let dim = pair.complex.dim();
    let mut graded = BTreeMap::new();
    for s in x.summands() {
        for k in 0..=dim.max(0) {
            let i = s.p - k;
            let h = cohomology_pair(pair, &s.coeff, k)?;
            if !h.group.is_trivial() {
                let entry = graded.entry(i).or_insert_with(BigUint::one);
                *entry *= h.order();
            }
        }
    }
    Ok(MappingSpectrumSizes { graded })
}

/// Size-formula report: `|X(K)|` against `|X|^χ(K)`.
#[derive(Debug, Clone, Serialize)]
pub struct SizeReport {
    pub complex: String,
    pub theory: String,
    pub lhs: String,
    pub rhs: String,
    pub ok: bool,
}

/// Checks `|X(K)| = |X|^χ(K)` exactly on a compact manifold complex.
pub fn verify_size_formula(name: &str, pair: &Pair, x: &TheorySpec) -> Result<SizeReport> {
    let sizes = mapping_sizes(pair, x)?;
    let lhs = sizes.total();
    let chi = {
        // relative pairs use the pair Euler characteristic
        let k = pair.complex.euler_characteristic();
        match &pair.sub {
            None => k,
            Some(l) => k - l.euler_characteristic(),
        }
    };
    let rhs = rational_pow(&theory_size(x), chi);
    Ok(SizeReport {
        complex: name.to_string(),
        theory: x.label(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        ok: lhs == rhs,
    })
}

pub fn rational_pow(base: &BigRational, e: i64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= base;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Parses a compact theory syntax: `d=2;p=1,A=2;p=0,A=2x3` (summands
/// separated by `;`, coefficient factors by `x`).
pub fn parse_theory(s: &str) -> Result<TheorySpec> {
    let mut d: Option<i64> = None;
    let mut summands = Vec::new();
    for part in s.split(';') {
        let part = part.trim();
        if let Some(v) = part.strip_prefix("d=") {
            d = Some(
                v.parse()
                    .map_err(|_| Error::InvalidInput(format!("bad dimension {}", v)))?,
            );
            continue;
        }
        let mut p: Option<i64> = None;
        let mut coeff: Option<FinAbGroup> = None;
        for field in part.split(',') {
            let field = field.trim();
            if let Some(v) = field.strip_prefix("p=") {
                p = Some(
                    v.parse()
                        .map_err(|_| Error::InvalidInput(format!("bad shift {}", v)))?,
                );
            } else if let Some(v) = field.strip_prefix("A=") {
                coeff = Some(parse_group(v)?);
            } else if !field.is_empty() {
                return Err(Error::InvalidInput(format!("unrecognized field {}", field)));
            }
        }
        match (p, coeff) {
            (Some(p), Some(a)) => summands.push((p, a)),
            (None, None) => {}
            _ => return Err(Error::InvalidInput(format!("incomplete summand {}", part))),
        }
    }
    let d = d.ok_or_else(|| Error::InvalidInput("theory needs d=<dim>".into()))?;
    TheorySpec::new(d, summands)
}

/// Parses a finite abelian group like `2`, `2x2`, or `6`.
pub fn parse_group(s: &str) -> Result<FinAbGroup> {
    let factors: Vec<BigUint> = s
        .split('x')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map(BigUint::from)
                .map_err(|_| Error::InvalidInput(format!("bad group factor {}", t)))
        })
        .collect::<Result<_>>()?;
    Ok(FinAbGroup::from_cyclic_orders(&factors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::library_complex;
    use std::sync::Arc;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sizes_of_shifted_summands() {
        let x = TheorySpec::em(3, 0, FinAbGroup::cyclic(5)).unwrap();
        assert_eq!(theory_size(&x), rat(5, 1));
        let y = TheorySpec::em(2, 1, FinAbGroup::cyclic(3)).unwrap();
        assert_eq!(theory_size(&y), rat(1, 3));
        let z = TheorySpec::new(
            3,
            vec![(1, FinAbGroup::cyclic(2)), (2, FinAbGroup::cyclic(2))],
        )
        .unwrap();
        assert_eq!(theory_size(&z), rat(1, 1));
    }

    #[test]
    fn dual_theory_shifts() {
        let x = TheorySpec::em(3, 1, FinAbGroup::cyclic(7)).unwrap();
        let dual = bc_dual_theory(&x);
        assert_eq!(dual.summands()[0].p, 1);
        let y = TheorySpec::em(2, 1, FinAbGroup::cyclic(3)).unwrap();
        assert_eq!(bc_dual_theory(&y).summands()[0].p, 0);
        // involution
        assert_eq!(bc_dual_theory(&bc_dual_theory(&x)), x);
    }

    #[test]
    fn dual_size_relation() {
        for (d, p, n) in [(2i64, 1i64, 3u64), (3, 1, 4), (3, 0, 5), (4, 2, 6)] {
            let x = TheorySpec::em(d, p, FinAbGroup::cyclic(n)).unwrap();
            let dual = bc_dual_theory(&x);
            let expect = rational_pow(&theory_size(&x), if (d - 1) % 2 == 0 { 1 } else { -1 });
            assert_eq!(theory_size(&dual), expect);
        }
    }

    #[test]
    fn mapping_sizes_on_a_circle() {
        let s1 = Arc::new(library_complex("S1").unwrap());
        let x = TheorySpec::em(2, 1, FinAbGroup::cyclic(2)).unwrap();
        let sizes = mapping_sizes(&Pair::absolute(s1), &x).unwrap();
        // |τ>=1| = |H^0(S1; Z/2)|^(-1) = 1/2; no contribution above
        assert_eq!(sizes.tau_geq(1), rat(1, 2));
        // p=0 theory has no positive-degree homotopy on any complex
        let y = TheorySpec::em(2, 0, FinAbGroup::cyclic(4)).unwrap();
        let s2 = Arc::new(library_complex("S2").unwrap());
        let sizes = mapping_sizes(&Pair::absolute(s2), &y).unwrap();
        assert_eq!(sizes.tau_geq(1), rat(1, 1));
    }

    #[test]
    fn truncation_factorization() {
        let t2 = Arc::new(library_complex("T2").unwrap());
        let x = TheorySpec::em(3, 1, FinAbGroup::cyclic(4)).unwrap();
        let sizes = mapping_sizes(&Pair::absolute(t2), &x).unwrap();
        let total = sizes.total();
        for i in -3..=3 {
            assert_eq!(sizes.tau_geq(i) * sizes.tau_leq(i - 1), total);
        }
    }

    #[test]
    fn size_formula_on_library_manifolds() {
        let theories = [
            TheorySpec::em(2, 1, FinAbGroup::cyclic(2)).unwrap(),
            TheorySpec::em(2, 0, FinAbGroup::cyclic(3)).unwrap(),
            TheorySpec::em(3, 1, FinAbGroup::cyclic(4)).unwrap(),
        ];
        for name in ["S2", "T2", "RP2", "klein", "disk", "mobius", "T3", "L(3,1)"] {
            let k = Arc::new(library_complex(name).unwrap());
            for x in &theories {
                let rep = verify_size_formula(name, &Pair::absolute(k.clone()), x).unwrap();
                assert!(
                    rep.ok,
                    "size formula fails on {} for {}: {} vs {}",
                    name,
                    x.label(),
                    rep.lhs,
                    rep.rhs
                );
            }
        }
    }

    #[test]
    fn size_formula_example_values() {
        // X = HZ/3 on the sphere: both sides 9
        let x = TheorySpec::em(2, 0, FinAbGroup::cyclic(3)).unwrap();
        let s2 = Arc::new(library_complex("S2").unwrap());
        let sizes = mapping_sizes(&Pair::absolute(s2), &x).unwrap();
        assert_eq!(sizes.total(), rat(9, 1));
        // X(pt) has the size of X
        let pt = Arc::new(library_complex("point").unwrap());
        let y = TheorySpec::em(2, 1, FinAbGroup::cyclic(6)).unwrap();
        let sizes = mapping_sizes(&Pair::absolute(pt), &y).unwrap();
        assert_eq!(sizes.total(), theory_size(&y));
    }

    #[test]
    fn theory_parsing_roundtrip() {
        let x = parse_theory("d=2;p=1,A=2x2").unwrap();
        assert_eq!(x.d, 2);
        assert_eq!(x.summands()[0].coeff.factors().len(), 2);
        let two = parse_theory("d=3;p=1,A=2;p=2,A=3").unwrap();
        assert_eq!(two.summands().len(), 2);
        assert_eq!(two.conductor(), 6);
        let json = serde_json::to_string(&two).unwrap();
        let back: TheorySpec = serde_json::from_str(&json).unwrap();
        assert_eq!(two, back);
    }
}
