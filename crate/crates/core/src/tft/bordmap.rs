use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use super::state::{StateSpace, TftMap};
use crate::cohomology::{cohomology_pair, CohGroup, GroupHom, Pair};
use crate::error::{Error, Result};
use crate::exactalg::{CycloMatrix, CycloRat, IntMatrix};
use crate::simplicial::{Bordism, SimComplex};
use crate::spectra::{mapping_sizes, TheorySpec};

/// The joint restriction data of a bordism: cohomology of the body, the
/// stacked map to both boundary interfaces, and the state spaces.
pub struct RestrictionData {
    pub domain: StateSpace,
    pub codomain: StateSpace,
    pub body_groups: Vec<CohGroup>,
    /// stacked map H_X(M) -> H_X(incoming) ⊕ H_X(outgoing)
    pub joint: GroupHom,
    pub in_rank: usize,
}

pub fn restriction_data(b: &Bordism, x: &TheorySpec) -> Result<RestrictionData> {
    if b.d != x.d {
        return Err(Error::DimensionMismatch(format!(
            "bordism dimension {} vs theory dimension {}",
            b.d, x.d
        )));
    }
    let in_objs: Vec<_> = b.incoming.iter().map(|a| a.object.clone()).collect();
    let out_objs: Vec<_> = b.outgoing.iter().map(|a| a.object.clone()).collect();
    let domain = StateSpace::new(&in_objs, x)?;
    let codomain = StateSpace::new(&out_objs, x)?;

    let body_groups: Vec<CohGroup> = x
        .summands()
        .iter()
        .map(|s| cohomology_pair(&Pair::absolute(b.m.clone()), &s.coeff, s.p))
        .collect::<Result<_>>()?;
    let body_factors: Vec<BigUint> = body_groups
        .iter()
        .flat_map(|g| g.factors().iter().cloned())
        .collect();

    // stacked matrix: rows blocks are (attach, summand) pullbacks in
    // interface order (incoming first), column blocks are the body summands
    let mut target_factors: Vec<BigUint> = domain.factors.clone();
    target_factors.extend(codomain.factors.iter().cloned());
    let total_rows = target_factors.len();
    let total_cols = body_factors.len();
    let mut matrix = IntMatrix::zeros(total_rows, total_cols);

    let mut row_at = 0;
    let mut spaces = [(&b.incoming, &domain), (&b.outgoing, &codomain)];
    for (attaches, space) in spaces.iter_mut() {
        let mut part_idx = 0;
        for attach in attaches.iter() {
            for (j, _s) in x.summands().iter().enumerate() {
                let target = &space.parts[part_idx];
                part_idx += 1;
                let hom =
                    crate::cohomology::induced_map(&attach.vertex_map, &body_groups[j], target)?;
                // column offset of body summand j
                let col_at: usize = body_groups[..j].iter().map(|g| g.rank()).sum();
                for r in 0..hom.matrix.rows() {
                    for c in 0..hom.matrix.cols() {
                        matrix[(row_at + r, col_at + c)] = hom.matrix[(r, c)].clone();
                    }
                }
                row_at += hom.matrix.rows();
            }
        }
    }
    debug_assert_eq!(row_at, total_rows);

    let joint = GroupHom {
        domain_factors: body_factors,
        codomain_factors: target_factors,
        matrix,
    };
    let in_rank = domain.factors.len();
    Ok(RestrictionData {
        domain,
        codomain,
        body_groups,
        joint,
        in_rank,
    })
}

/// The transfer matrix of the state-sum theory on a bordism `N -> N'`:
/// entry `(a', a)` is `w · #{b in H_X(M) : b|_N = a, b|_N' = a'}` with
/// `w = |τ>=1 X(M)| / |τ>=1 X(N')|`.  Preimage counts come from the kernel
/// order of the joint restriction, never from enumerating `H_X(M)`.
pub fn bordism_map(b: &Bordism, x: &TheorySpec) -> Result<TftMap> {
    let data = restriction_data(b, x)?;
    let weight = transfer_weight(b, x)?;

    let kernel = data.joint.kernel_order()?;
    let entry_value = CycloRat::from_rational(weight * BigRational::from(BigInt::from(kernel)));

    let mut matrix = CycloMatrix::zeros(data.codomain.dimension(), data.domain.dimension());
    for img in data.joint.image_elements()? {
        let (a, a_prime) = img.split_at(data.in_rank);
        let col = data
            .domain
            .index_of(a)
            .ok_or_else(|| Error::Internal("image coordinate outside the domain basis".into()))?;
        let row = data
            .codomain
            .index_of(a_prime)
            .ok_or_else(|| Error::Internal("image coordinate outside the codomain basis".into()))?;
        matrix[(row, col)] = entry_value.clone();
    }
    Ok(TftMap {
        domain: data.domain,
        codomain: data.codomain,
        matrix,
    })
}

/// `|τ>=1 X(M)| / |τ>=1 X(N')|` over the outgoing interface.
pub fn transfer_weight(b: &Bordism, x: &TheorySpec) -> Result<BigRational> {
    let m_sizes = mapping_sizes(&Pair::absolute(b.m.clone()), x)?;
    let mut weight = m_sizes.tau_geq(1);
    for attach in &b.outgoing {
        let n_sizes = mapping_sizes(&Pair::absolute(attach.object.complex.clone()), x)?;
        weight /= n_sizes.tau_geq(1);
    }
    Ok(weight)
}

/// Partition function of a closed d-manifold:
/// `Z_X(M) = Π_{i>=0} |X^{-i}(M)|^((-1)^i)`.
pub fn partition_function(m: &std::sync::Arc<SimComplex>, x: &TheorySpec) -> Result<BigRational> {
    if m.dim() != x.d {
        return Err(Error::DimensionMismatch(format!(
            "partition function of a {}-complex in a d={} theory",
            m.dim(),
            x.d
        )));
    }
    let rep = crate::simplicial::validate_manifold(m, m.dim())?;
    if !rep.closed {
        return Err(Error::InvalidInput(
            "partition functions need a closed manifold".into(),
        ));
    }
    let sizes = mapping_sizes(&Pair::absolute(m.clone()), x)?;
    Ok(sizes.tau_geq(0))
}

/// Brute-force recomputation of the transfer matrix by enumerating
/// `H_X(M)` elementwise; used as the oracle against `bordism_map`.
pub fn bordism_map_oracle(b: &Bordism, x: &TheorySpec, cap: u64) -> Result<TftMap> {
    let data = restriction_data(b, x)?;
    let body_order: BigUint = data.joint.domain_factors.iter().product();
    if body_order > BigUint::from(cap) {
        return Err(Error::OracleTooLarge(format!(
            "|H_X(M)| = {} exceeds the cap {}",
            body_order, cap
        )));
    }
    let weight = transfer_weight(b, x)?;
    let mut counts = vec![vec![0u64; data.domain.dimension()]; data.codomain.dimension()];
    for b_elem in enumerate_tuples(&data.joint.domain_factors) {
        let img = data.joint.apply(&b_elem)?;
        let (a, a_prime) = img.split_at(data.in_rank);
        let col = data.domain.index_of(a).unwrap();
        let row = data.codomain.index_of(a_prime).unwrap();
        counts[row][col] += 1;
    }
    let mut matrix = CycloMatrix::zeros(data.codomain.dimension(), data.domain.dimension());
    for (r, rowc) in counts.iter().enumerate() {
        for (c, &count) in rowc.iter().enumerate() {
            if count > 0 {
                matrix[(r, c)] = CycloRat::from_rational(
                    weight.clone() * BigRational::from(BigInt::from(count)),
                );
            }
        }
    }
    Ok(TftMap {
        domain: data.domain,
        codomain: data.codomain,
        matrix,
    })
}

fn enumerate_tuples(factors: &[BigUint]) -> Vec<Vec<BigUint>> {
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
