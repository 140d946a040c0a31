use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::cohomology::{cohomology_pair, CohGroup, Pair};
use crate::error::{Error, Result};
use crate::exactalg::CycloMatrix;
use crate::simplicial::ClosedObject;
use crate::spectra::TheorySpec;

/// The state space `C[⊕_c ⊕_j H^{p_j}(N_c; A_j)]` of an ordered interface,
/// with its deterministic lexicographic basis.
#[derive(Debug, Clone)]
pub struct StateSpace {
    pub theory: TheorySpec,
    pub interface: Vec<Arc<ClosedObject>>,
    /// One cohomology group per (component, summand), component-major.
    pub parts: Vec<CohGroup>,
    /// Concatenated invariant factors across the parts.
    pub factors: Vec<BigUint>,
    /// Basis elements in lexicographic coordinate order.
    pub basis: Vec<Vec<BigUint>>,
    index: HashMap<Vec<BigUint>, usize>,
}

impl StateSpace {
    pub fn new(interface: &[Arc<ClosedObject>], theory: &TheorySpec) -> Result<StateSpace> {
        let mut parts = Vec::new();
        for obj in interface {
            if obj.dim() != theory.d - 1 {
                return Err(Error::DimensionMismatch(format!(
                    "object {} has dimension {}, theory states live on {}-manifolds",
                    obj.name,
                    obj.dim(),
                    theory.d - 1
                )));
            }
            for s in theory.summands() {
                parts.push(cohomology_pair(
                    &Pair::absolute(obj.complex.clone()),
                    &s.coeff,
                    s.p,
                )?);
            }
        }
        let factors: Vec<BigUint> = parts
            .iter()
            .flat_map(|g| g.factors().iter().cloned())
            .collect();
        let basis = enumerate(&factors);
        let index = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, b)| (b, i))
            .collect();
        Ok(StateSpace {
            theory: theory.clone(),
            interface: interface.to_vec(),
            parts,
            factors,
            basis,
            index,
        })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, coords: &[BigUint]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    /// Splits a concatenated coordinate tuple into per-part tuples.
    pub fn split<'a>(&self, coords: &'a [BigUint]) -> Vec<&'a [BigUint]> {
        let mut out = Vec::with_capacity(self.parts.len());
        let mut at = 0;
        for p in &self.parts {
            out.push(&coords[at..at + p.rank()]);
            at += p.rank();
        }
        out
    }

    pub fn compatible(&self, other: &StateSpace) -> bool {
        self.theory == other.theory
            && self.interface.len() == other.interface.len()
            && self
                .interface
                .iter()
                .zip(&other.interface)
                .all(|(a, b)| a.as_ref() == b.as_ref())
    }
}

fn enumerate(factors: &[BigUint]) -> Vec<Vec<BigUint>> {
    let mut out = vec![vec![]];
    for n in factors {
        let mut next = Vec::new();
        for prefix in &out {
            let mut k = BigUint::from(0u32);
            while &k < n {
                let mut e = prefix.clone();
                e.push(k.clone());
                next.push(e);
                k += 1u32;
            }
        }
        out = next;
    }
    out
}

/// A linear map between state spaces with exact cyclotomic entries.
#[derive(Debug, Clone)]
pub struct TftMap {
    pub domain: StateSpace,
    pub codomain: StateSpace,
    pub matrix: CycloMatrix,
}

impl TftMap {
    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &TftMap) -> Result<TftMap> {
        if !self.domain.compatible(&other.codomain) {
            return Err(Error::NotComposable("state spaces do not match".into()));
        }
        Ok(TftMap {
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.mul(&other.matrix),
        })
    }

    pub fn same_matrix(&self, other: &TftMap) -> bool {
        self.matrix == other.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == CycloMatrix::identity(self.matrix.rows())
    }

    /// Kronecker product on both interfaces (concatenation of interfaces).
    pub fn tensor(&self, other: &TftMap) -> Result<TftMap> {
        let join = |a: &StateSpace, b: &StateSpace| -> Result<StateSpace> {
            let mut interface = a.interface.clone();
            interface.extend(b.interface.iter().cloned());
            StateSpace::new(&interface, &a.theory)
        };
        Ok(TftMap {
            domain: join(&self.domain, &other.domain)?,
            codomain: join(&self.codomain, &other.codomain)?,
            matrix: self.matrix.kron(&other.matrix),
        })
    }
}
