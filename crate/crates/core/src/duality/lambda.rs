use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::cohomology::{cohomology_pair, induced_map, CohGroup, Pair};
use crate::error::{Error, Result};
use crate::exactalg::FinAbGroup;
use crate::simplicial::{Bordism, SimComplex};
use crate::spectra::{bc_dual_theory, mapping_sizes, rational_pow, theory_size, TheorySpec};

#[derive(Debug, Clone, Serialize)]
pub struct LambdaCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub ok: bool,
}

/// Step-by-step audit of the scaling factor between the two composites of
/// the duality square.  Every intermediate identity of the bookkeeping is
/// asserted exactly; the final value must be `|X|^(χ(M)-χ(N))`.
#[derive(Debug, Clone, Serialize)]
pub struct LambdaReport {
    pub bordism: String,
    pub theory: String,
    pub lambda: String,
    pub target: String,
    pub checks: Vec<LambdaCheck>,
    pub ok: bool,
}

fn rb(x: &BigUint) -> BigRational {
    BigRational::from(BigInt::from(x.clone()))
}

/// Subcomplex of the bordism body spanned by one side of the boundary
/// labels (vertex IDs shared with the body).
fn interface_subcomplex(b: &Bordism, incoming: bool) -> Result<Arc<SimComplex>> {
    let attaches = if incoming { &b.incoming } else { &b.outgoing };
    let mut facets = Vec::new();
    for a in attaches {
        for f in a.object.complex.facets() {
            let mut img: Vec<usize> = f.iter().map(|v| a.vertex_map[&v.clone()]).collect();
            img.sort_unstable();
            facets.push(img);
        }
    }
    Ok(Arc::new(SimComplex::from_facets(facets)?))
}

/// Kernel order of the restriction of a computed group to a subcomplex
/// sharing vertex IDs.
fn restriction_kernel(
    domain: &CohGroup,
    target: &Arc<SimComplex>,
    coeff: &FinAbGroup,
    degree: i64,
) -> Result<BigUint> {
    let target_group = cohomology_pair(&Pair::absolute(target.clone()), coeff, degree)?;
    let idmap = target.vertices().iter().map(|&v| (v, v)).collect();
    let hom = induced_map(&idmap, domain, &target_group)?;
    hom.kernel_order()
}

fn restriction_cokernel(
    domain: &CohGroup,
    target: &Arc<SimComplex>,
    coeff: &FinAbGroup,
    degree: i64,
) -> Result<BigUint> {
    let target_group = cohomology_pair(&Pair::absolute(target.clone()), coeff, degree)?;
    let idmap = target.vertices().iter().map(|&v| (v, v)).collect();
    let hom = induced_map(&idmap, domain, &target_group)?;
    hom.cokernel_order()
}

pub fn audit_lambda(b: &Bordism, x: &TheorySpec) -> Result<LambdaReport> {
    if !b.is_oriented() {
        return Err(Error::OrientationRequired(format!(
            "{} carries no integer orientation; the audit refuses unoriented input",
            b.name
        )));
    }
    let dual = bc_dual_theory(x);
    let l_in = interface_subcomplex(b, true)?;
    let l_out = interface_subcomplex(b, false)?;
    let boundary = Arc::new(b.m.boundary_complex());

    let abs_m = Pair::absolute(b.m.clone());
    let abs_in = Pair::absolute(l_in.clone());
    let abs_out = Pair::absolute(l_out.clone());
    let abs_bd = Pair::absolute(boundary.clone());
    let rel_in = Pair::relative(b.m.clone(), l_in.clone())?;
    let rel_bd = Pair::relative(b.m.clone(), boundary.clone())?;

    // sizes
    let sx_m = mapping_sizes(&abs_m, x)?;
    let sx_in = mapping_sizes(&abs_in, x)?;
    let sx_out = mapping_sizes(&abs_out, x)?;
    let sx_bd = mapping_sizes(&abs_bd, x)?;
    let sx_rel_bd = mapping_sizes(&rel_bd, x)?;
    let sd_m = mapping_sizes(&abs_m, &dual)?;
    let sd_out = mapping_sizes(&abs_out, &dual)?;

    // kernel bookkeeping, summandwise
    let mut kp = BigRational::one();
    let mut coker_p = BigRational::one();
    let mut kq = BigRational::one();
    let mut kq_rel = BigRational::one();
    let mut k_rel_m = BigRational::one();
    let mut k_m_bd = BigRational::one();
    let mut k_rel_bd = BigRational::one();
    let mut h0_in = BigRational::one();
    for s in x.summands() {
        let hm = cohomology_pair(&abs_m, &s.coeff, s.p)?;
        kp *= rb(&restriction_kernel(&hm, &l_in, &s.coeff, s.p)?);
        coker_p *= rb(&restriction_cokernel(&hm, &l_in, &s.coeff, s.p)?);
        h0_in *= rb(&cohomology_pair(&abs_in, &s.coeff, s.p)?.order());

        let hrel = cohomology_pair(&rel_in, &s.coeff, s.p + 1)?;
        kq_rel *= rb(&restriction_kernel(&hrel, &l_out, &s.coeff, s.p + 1)?);
        k_rel_bd *= rb(&restriction_kernel(&hrel, &boundary, &s.coeff, s.p + 1)?);
        // relative -> absolute on the body itself
        let habs = cohomology_pair(&abs_m, &s.coeff, s.p + 1)?;
        let idmap = b.m.vertices().iter().map(|&v| (v, v)).collect();
        let to_abs = induced_map(&idmap, &hrel, &habs)?;
        k_rel_m *= rb(&to_abs.kernel_order()?);
        k_m_bd *= rb(&restriction_kernel(&habs, &boundary, &s.coeff, s.p + 1)?);
    }
    for s in dual.summands() {
        let hm = cohomology_pair(&abs_m, &s.coeff, s.p)?;
        kq *= rb(&restriction_kernel(&hm, &l_out, &s.coeff, s.p)?);
    }

    let lambda = sx_m.tau_geq(1) / sx_in.tau_geq(1)
        * (sd_out.tau_geq(1) / sd_m.tau_geq(1))
        * (kp.clone() / kq.clone());
    let target = rational_pow(
        &theory_size(x),
        b.euler_characteristic() - b.incoming_euler(),
    );

    let mut checks: Vec<LambdaCheck> = Vec::new();
    let push = |name: &str, lhs: BigRational, rhs: BigRational, checks: &mut Vec<LambdaCheck>| {
        checks.push(LambdaCheck {
            name: name.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            ok: lhs == rhs,
        });
    };

    push(
        "lambda-equals-size-power",
        lambda.clone(),
        target.clone(),
        &mut checks,
    );
    push(
        "dual-truncation-on-outgoing",
        sd_out.tau_geq(1),
        sx_out.tau_leq(-1),
        &mut checks,
    );
    push(
        "dual-truncation-on-body",
        sd_m.tau_geq(1).recip(),
        sx_rel_bd.tau_leq(-2),
        &mut checks,
    );
    push(
        "kernel-transport-to-relative",
        kq.clone(),
        kq_rel.clone(),
        &mut checks,
    );
    push(
        "relative-kernel-through-boundary",
        kq_rel.clone(),
        k_rel_bd.clone(),
        &mut checks,
    );
    push(
        "kernel-composition",
        k_rel_bd.clone(),
        k_rel_m.clone() * k_m_bd.clone(),
        &mut checks,
    );
    push(
        "cokernel-as-relative-kernel",
        coker_p.clone(),
        k_rel_m.clone(),
        &mut checks,
    );
    push(
        "boundary-splits-interfaces",
        sx_in.tau_leq(0) * sx_out.tau_leq(-1),
        h0_in.clone() * sx_bd.tau_leq(-1),
        &mut checks,
    );
    // the assembled residual factor and its final collapse through the long
    // exact sequence of the pair (M, ∂M)
    let lambda_prime = lambda.clone() / target.clone();
    let lambda_prime_expr = (sx_in.tau_leq(0) / sx_m.tau_leq(0))
        * sx_out.tau_leq(-1)
        * sx_rel_bd.tau_leq(-2)
        * (kp.clone() / kq_rel.clone());
    push(
        "residual-factor-form",
        lambda_prime.clone(),
        lambda_prime_expr,
        &mut checks,
    );
    let les_form = sx_bd.tau_leq(-1) * sx_rel_bd.tau_leq(-2) / (sx_m.tau_leq(-1) * k_m_bd.clone());
    push(
        "residual-collapses-by-exactness",
        les_form,
        BigRational::one(),
        &mut checks,
    );
    push(
        "residual-factor-is-one",
        lambda_prime,
        BigRational::one(),
        &mut checks,
    );

    let ok = checks.iter().all(|c| c.ok);
    Ok(LambdaReport {
        bordism: b.name.clone(),
        theory: x.label(),
        lambda: lambda.to_string(),
        target: target.to_string(),
        checks,
        ok,
    })
}
