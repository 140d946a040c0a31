use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;

use super::bordmap::{bordism_map, transfer_weight};
use crate::cohomology::{cohomology_pair, GroupHom, Pair};
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;
use crate::simplicial::Bordism;
use crate::spectra::{mapping_sizes, TheorySpec};

static MV_BUILT: AtomicU64 = AtomicU64::new(0);
static MV_FAILED: AtomicU64 = AtomicU64::new(0);

/// Counters of the gluing size identities checked so far: `(built, failed)`.
pub fn mv_counters() -> (u64, u64) {
    (
        MV_BUILT.load(Ordering::Relaxed),
        MV_FAILED.load(Ordering::Relaxed),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct GluingReport {
    pub left: String,
    pub right: String,
    pub theory: String,
    pub matrices_equal: bool,
    pub seam_size_identity: bool,
    pub composite: Vec<Vec<String>>,
    pub glued: Vec<Vec<String>>,
}

/// Verifies functoriality on a composable pair: the transfer matrix of the
/// glued bordism must equal the matrix product, and the seam bookkeeping
/// must satisfy the size identity
/// `w(M) w(M') |ker(H_X(M) ⊕ H_X(M') -> H_X(N'))| = |τ>=1 X(M∪M')| |X^0(M∪M')|`
/// (both sides divided by `|τ>=1 X(N')|` on the left).
pub fn verify_gluing(b1: &Bordism, b2: &Bordism, x: &TheorySpec) -> Result<GluingReport> {
    let glued = b1.glue(b2)?;
    let z1 = bordism_map(b1, x)?;
    let z2 = bordism_map(b2, x)?;
    let composite = z2.compose(&z1)?;
    let direct = bordism_map(&glued, x)?;
    let matrices_equal = composite.same_matrix(&direct);

    let seam_size_identity = seam_size_identity(b1, b2, &glued, x)?;
    MV_BUILT.fetch_add(1, Ordering::Relaxed);
    if !seam_size_identity || !matrices_equal {
        MV_FAILED.fetch_add(1, Ordering::Relaxed);
    }

    let dump = |m: &crate::exactalg::CycloMatrix| -> Vec<Vec<String>> {
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect())
            .collect()
    };
    Ok(GluingReport {
        left: b1.name.clone(),
        right: b2.name.clone(),
        theory: x.label(),
        matrices_equal,
        seam_size_identity,
        composite: dump(&composite.matrix),
        glued: dump(&direct.matrix),
    })
}

/// The exact seam identity extracted from the truncated gluing sequence:
/// with `w(B) = |τ>=1 X(M)| / |τ>=1 X(out B)|`,
/// `w(B1) w(B2) |ker| = |τ>=1 X(M ∪ M')| / |τ>=1 X(out B2)| · |X^0(M ∪ M')|`.
fn seam_size_identity(b1: &Bordism, b2: &Bordism, glued: &Bordism, x: &TheorySpec) -> Result<bool> {
    // joint difference map H_X(M) ⊕ H_X(M') -> H_X(N') along the seam
    let m1_groups: Vec<_> = x
        .summands()
        .iter()
        .map(|s| cohomology_pair(&Pair::absolute(b1.m.clone()), &s.coeff, s.p))
        .collect::<Result<Vec<_>>>()?;
    let m2_groups: Vec<_> = x
        .summands()
        .iter()
        .map(|s| cohomology_pair(&Pair::absolute(b2.m.clone()), &s.coeff, s.p))
        .collect::<Result<Vec<_>>>()?;

    let mut seam_factors: Vec<BigUint> = Vec::new();
    let mut blocks1: Vec<GroupHom> = Vec::new();
    let mut blocks2: Vec<GroupHom> = Vec::new();
    for (a1, a2) in b1.outgoing.iter().zip(&b2.incoming) {
        for (j, s) in x.summands().iter().enumerate() {
            let target =
                cohomology_pair(&Pair::absolute(a1.object.complex.clone()), &s.coeff, s.p)?;
            seam_factors.extend(target.factors().iter().cloned());
            blocks1.push(crate::cohomology::induced_map(
                &a1.vertex_map,
                &m1_groups[j],
                &target,
            )?);
            blocks2.push(crate::cohomology::induced_map(
                &a2.vertex_map,
                &m2_groups[j],
                &target,
            )?);
        }
    }
    let cols1: usize = m1_groups.iter().map(|g| g.rank()).sum();
    let cols2: usize = m2_groups.iter().map(|g| g.rank()).sum();
    let mut matrix = IntMatrix::zeros(seam_factors.len(), cols1 + cols2);
    // block row layout follows the seam components; columns are (M | M')
    let mut fill = |blocks: &[GroupHom],
                    col_base: usize,
                    sign: i64,
                    groups: &[crate::cohomology::CohGroup]| {
        let mut row = 0;
        for (bi, hom) in blocks.iter().enumerate() {
            let j = bi % x.summands().len();
            let col_at: usize = groups[..j].iter().map(|g| g.rank()).sum();
            for r in 0..hom.matrix.rows() {
                for c in 0..hom.matrix.cols() {
                    matrix[(row + r, col_base + col_at + c)] =
                        &hom.matrix[(r, c)] * BigInt::from(sign);
                }
            }
            row += hom.matrix.rows();
        }
        row
    };
    let row_at = fill(&blocks1, 0, 1, &m1_groups);
    let row_at2 = fill(&blocks2, cols1, -1, &m2_groups);
    if row_at != seam_factors.len() || row_at2 != seam_factors.len() {
        return Err(Error::Internal("seam block assembly mismatch".into()));
    }

    let mut domain_factors: Vec<BigUint> = m1_groups
        .iter()
        .flat_map(|g| g.factors().iter().cloned())
        .collect();
    domain_factors.extend(m2_groups.iter().flat_map(|g| g.factors().iter().cloned()));
    let joint = GroupHom {
        domain_factors,
        codomain_factors: seam_factors,
        matrix,
    };
    let kernel = joint.kernel_order()?;

    let lhs =
        transfer_weight(b1, x)? * transfer_weight(b2, x)? * BigRational::from(BigInt::from(kernel));
    let glued_sizes = mapping_sizes(&Pair::absolute(glued.m.clone()), x)?;
    let mut rhs = glued_sizes.tau_geq(1);
    for attach in &b2.outgoing {
        rhs /= mapping_sizes(&Pair::absolute(attach.object.complex.clone()), x)?.tau_geq(1);
    }
    // |X^0(glued)|
    let mut h0 = BigUint::from(1u32);
    for s in x.summands() {
        h0 *= cohomology_pair(&Pair::absolute(glued.m.clone()), &s.coeff, s.p)?.order();
    }
    rhs *= BigRational::from(BigInt::from(h0));
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::FinAbGroup;
    use crate::simplicial::library_bordism;
    use crate::tft::partition_function;
    use num_rational::BigRational;

    fn em(d: i64, p: i64, n: u64) -> TheorySpec {
        TheorySpec::em(d, p, FinAbGroup::cyclic(n)).unwrap()
    }

    #[test]
    fn cylinder_compositions() {
        let cyl = library_bordism("cyl(S1)").unwrap();
        for x in [em(2, 1, 2), em(2, 0, 3)] {
            let rep = verify_gluing(&cyl, &cyl, &x).unwrap();
            assert!(
                rep.matrices_equal && rep.seam_size_identity,
                "{}",
                x.label()
            );
        }
    }

    #[test]
    fn disks_compose_to_the_sphere_scalar() {
        let x = em(2, 1, 2);
        let out = library_bordism("disk_out").unwrap();
        let inn = library_bordism("disk_in").unwrap();
        let rep = verify_gluing(&out, &inn, &x).unwrap();
        assert!(rep.matrices_equal && rep.seam_size_identity);
        // the composite is the sphere partition function 1/2
        let glued = out.glue(&inn).unwrap();
        let z = partition_function(&glued.m, &x).unwrap();
        assert_eq!(z, BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn pants_with_disk_and_cylinder() {
        let x = em(2, 1, 2);
        let pants = library_bordism("pants").unwrap();
        let disk = library_bordism("disk_out").unwrap();
        let cyl = library_bordism("cyl(S1)").unwrap();
        let feed = disk.disjoint_union(&cyl).unwrap();
        let rep = verify_gluing(&feed, &pants, &x).unwrap();
        assert!(rep.matrices_equal && rep.seam_size_identity);
    }

    #[test]
    fn solid_torus_against_torus_cylinder() {
        let x = em(3, 1, 2);
        let st = library_bordism("solidtorus_out").unwrap();
        let cyl = library_bordism("cyl(T2grid)").unwrap();
        let rep = verify_gluing(&st, &cyl, &x).unwrap();
        assert!(rep.matrices_equal && rep.seam_size_identity);
        let st_in = library_bordism("solidtorus_in").unwrap();
        let rep = verify_gluing(&st, &st_in, &x).unwrap();
        assert!(rep.matrices_equal && rep.seam_size_identity);
    }

    #[test]
    fn gluing_associativity() {
        let x = em(2, 1, 3);
        let disk = library_bordism("disk_out").unwrap();
        let c = library_bordism("cyl(S1)").unwrap();
        let left = disk.glue(&c).unwrap().glue(&c).unwrap();
        let right = disk.glue(&c.glue(&c).unwrap()).unwrap();
        // isomorphic complexes: same face counts and same cohomology orders
        for k in 0..=2 {
            assert_eq!(left.m.num_simplices(k), right.m.num_simplices(k));
        }
        for n in [2u64, 3, 4] {
            let coeff = FinAbGroup::cyclic(n);
            for k in 0..=2 {
                let a = cohomology_pair(&Pair::absolute(left.m.clone()), &coeff, k).unwrap();
                let b = cohomology_pair(&Pair::absolute(right.m.clone()), &coeff, k).unwrap();
                assert_eq!(a.factors(), b.factors());
            }
        }
        let za = crate::tft::bordism_map(&left, &x).unwrap();
        let zb = crate::tft::bordism_map(&right, &x).unwrap();
        assert!(za.same_matrix(&zb));
    }
}
