use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::cochain::{gather, is_cocycle, scatter, to_bigint, CochainTuple, Pair};
use crate::error::{Error, Result};
use crate::exactalg::{smith_normal_form, FinAbGroup, IntMatrix};

/// Cohomology of a pair with cyclic coefficients `Z/n`: cyclic orders,
/// generator cochains and the coordinate projection.
#[derive(Debug)]
pub struct CyclicCohomology {
    pub n: BigUint,
    pub degree: i64,
    /// Cyclic orders (> 1), a divisibility chain.
    pub orders: Vec<BigUint>,
    /// One full-length generator cochain per order.
    pub gens: Vec<Vec<BigInt>>,
    /// Projection rows scaled by n: coords_i = (q_rows[i] . x_out) / n mod orders[i].
    q_rows: Vec<Vec<BigInt>>,
    out_cols: Vec<usize>,
}

impl CyclicCohomology {
    pub fn order(&self) -> BigUint {
        self.orders.iter().product()
    }

    /// Coordinates of a cocycle given as a full-length vector.
    pub fn coordinates(&self, pair: &Pair, x: &[BigInt]) -> Result<Vec<BigUint>> {
        let x_out = gather(x, &self.out_cols);
        let n = to_bigint(&self.n);
        // cocycle check: δx = 0 (mod n) and vanishing on the subcomplex
        for (idx, v) in x.iter().enumerate() {
            if pair.in_sub(self.degree, idx) && !v.mod_floor(&n).is_zero() {
                return Err(Error::Internal(
                    "cochain does not vanish on the subcomplex".into(),
                ));
            }
        }
        let delta = pair.coboundary(self.degree);
        for r in 0..delta.rows() {
            let mut acc = BigInt::zero();
            for (j, v) in x_out.iter().enumerate() {
                if !num_traits::Zero::is_zero(&delta[(r, j)]) {
                    acc += &delta[(r, j)] * v;
                }
            }
            if !acc.mod_floor(&n).is_zero() {
                return Err(Error::Internal("not a cocycle modulo n".into()));
            }
        }
        let mut coords = Vec::with_capacity(self.orders.len());
        for (row, f) in self.q_rows.iter().zip(&self.orders) {
            let mut acc = BigInt::zero();
            for (a, b) in row.iter().zip(&x_out) {
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
            let (q, r) = acc.div_rem(&n);
            if !r.is_zero() {
                return Err(Error::Internal(
                    "projection row not divisible by the modulus".into(),
                ));
            }
            coords.push(q.mod_floor(&to_bigint(f)).magnitude().clone());
        }
        Ok(coords)
    }
}

/// Cyclic orders, generator vectors and projection rows of a lattice
/// subquotient.
type SubquotientData = (Vec<BigUint>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>);

/// Cyclic orders of `ker(constraint mod n) / (im(image_map) + n)` inside
/// `Z^m`, plus generator and projection data.  This is the one subquotient
/// routine behind every cohomology and homology computation: all kernels and
/// images are read off Smith normal forms of the two matrices.
fn subquotient(
    constraint: &IntMatrix, // rows x m
    image_map: &IntMatrix,  // m x cols
    n: &BigUint,
) -> Result<SubquotientData> {
    let m = constraint.cols();
    if image_map.rows() != m {
        return Err(Error::DimensionMismatch("subquotient shapes".into()));
    }
    let nb = to_bigint(n);
    if m == 0 {
        return Ok((vec![], vec![], vec![]));
    }

    // kernel lattice K = V1 . diag(s), s_i = n / gcd(d1_i, n)
    let snf1 = smith_normal_form(constraint);
    let d1 = snf1.diag();
    let s: Vec<BigInt> = (0..m)
        .map(|i| {
            let g = if i < d1.len() {
                d1[i].gcd(&nb)
            } else {
                BigInt::one()
            };
            let g = if g.is_zero() { nb.clone() } else { g };
            // d = 0 gives gcd 0 -> the constraint row is vacuous there
            if i < d1.len() && d1[i].is_zero() {
                BigInt::one()
            } else if i < d1.len() {
                &nb / g
            } else {
                BigInt::one()
            }
        })
        .collect();

    // image lattice M = U2^{-1} . diag(g), g_i = gcd(d2_i, n)
    let snf2 = smith_normal_form(image_map);
    let d2 = snf2.diag();
    let g: Vec<BigInt> = (0..m)
        .map(|i| {
            if i < d2.len() && !d2[i].is_zero() {
                d2[i].gcd(&nb)
            } else {
                nb.clone()
            }
        })
        .collect();

    // W = diag(1/s) . V1^{-1} . U2^{-1} . diag(g); integral because the
    // image lattice sits inside the kernel lattice.
    let x = snf1.v_inv.mul(&snf2.u_inv)?;
    let mut w = IntMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let num = &x[(i, j)] * &g[j];
            let (q, r) = num.div_rem(&s[i]);
            if !r.is_zero() {
                return Err(Error::Internal(
                    "image lattice escapes the kernel lattice".into(),
                ));
            }
            w[(i, j)] = q;
        }
    }
    let snf3 = smith_normal_form(&w);
    let d3 = snf3.diag();
    let mut orders = Vec::new();
    let mut kept = Vec::new();
    for (i, d) in d3.iter().enumerate() {
        if d.is_zero() {
            return Err(Error::Internal("subquotient is infinite".into()));
        }
        if !d.is_one() {
            kept.push(i);
            orders.push(d.magnitude().clone());
        }
    }

    // generators: columns of V1 . diag(s) . U3^{-1} at the kept indices
    let mut gens_out = Vec::new();
    for &ki in &kept {
        let mut col = vec![BigInt::zero(); m];
        for (i, item) in col.iter_mut().enumerate() {
            let mut acc = BigInt::zero();
            for (j, sj) in s.iter().enumerate() {
                let u = &snf3.u_inv[(j, ki)];
                if !u.is_zero() && !num_traits::Zero::is_zero(&snf1.v[(i, j)]) {
                    acc += &snf1.v[(i, j)] * sj * u;
                }
            }
            *item = acc;
        }
        gens_out.push(col);
    }

    // projection rows scaled by n: Q = U3_kept . diag(n/s) . V1^{-1}
    let mut q_rows = Vec::new();
    for &ki in &kept {
        let mut row = vec![BigInt::zero(); m];
        for (j, sj) in s.iter().enumerate() {
            let u = &snf3.u[(ki, j)];
            if u.is_zero() {
                continue;
            }
            let scale = &nb / sj;
            for (c, item) in row.iter_mut().enumerate() {
                let v = &snf1.v_inv[(j, c)];
                if !v.is_zero() {
                    *item += u * &scale * v;
                }
            }
        }
        q_rows.push(row);
    }

    Ok((orders, gens_out, q_rows))
}

type CacheKey = (u64, u64, BigUint, i64);
type CacheShard = Mutex<HashMap<CacheKey, Arc<CyclicCohomology>>>;
const CACHE_SHARDS: usize = 16;

fn cyclic_cache(key: &CacheKey) -> &'static CacheShard {
    static CACHE: OnceLock<Vec<CacheShard>> = OnceLock::new();
    let shards = CACHE.get_or_init(|| {
        (0..CACHE_SHARDS)
            .map(|_| Mutex::new(HashMap::new()))
            .collect()
    });
    let idx = (key.0 ^ key.1.rotate_left(17) ^ (key.3 as u64).rotate_left(41)) as usize;
    &shards[idx % CACHE_SHARDS]
}

/// `H^k(pair; Z/n)`, memoized per (complex, subcomplex, n, k).
pub fn cyclic_cohomology(pair: &Pair, n: &BigUint, k: i64) -> Result<Arc<CyclicCohomology>> {
    let (kid, lid) = pair.cache_key();
    let key = (kid, lid, n.clone(), k);
    if let Some(hit) = cyclic_cache(&key).lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let out_cols = pair.out_indices(k);
    let full_len = pair.complex.num_simplices(k);
    let result = if k < 0 || k > pair.complex.dim() || out_cols.is_empty() || *n == BigUint::one() {
        CyclicCohomology {
            n: n.clone(),
            degree: k,
            orders: vec![],
            gens: vec![],
            q_rows: vec![],
            out_cols,
        }
    } else {
        let constraint = pair.coboundary(k);
        let image_map = pair.coboundary(k - 1);
        let (orders, gens_packed, q_rows) = subquotient(&constraint, &image_map, n)?;
        let gens = gens_packed
            .iter()
            .map(|gp| scatter(gp, &out_cols, full_len))
            .collect();
        CyclicCohomology {
            n: n.clone(),
            degree: k,
            orders,
            gens,
            q_rows,
            out_cols,
        }
    };
    let arc = Arc::new(result);
    cyclic_cache(&key).lock().unwrap().insert(key, arc.clone());
    Ok(arc)
}

/// Order of `H_k(K; Z/n)` (homology), via the transposed boundary operators.
pub fn cyclic_homology_order(pair: &Pair, n: &BigUint, k: i64) -> Result<BigUint> {
    if k < 0 || k > pair.complex.dim() {
        return Ok(BigUint::one());
    }
    // boundary_k = transpose of coboundary(k-1); constraint is boundary_k,
    // image is boundary_{k+1}
    let constraint = pair.coboundary(k - 1).transpose();
    let image_map = pair.coboundary(k).transpose();
    let (orders, _, _) = subquotient(&constraint, &image_map, n)?;
    Ok(orders.iter().product())
}

/// A computed cohomology group `H^k(pair; A)` with generator cocycles and a
/// coordinate map onto its canonical invariant-factor form.
#[derive(Debug, Clone)]
pub struct CohGroup {
    pub pair: Pair,
    pub degree: i64,
    pub coeff: FinAbGroup,
    pub group: FinAbGroup,
    per_factor: Vec<Arc<CyclicCohomology>>,
    /// canonical generator cochain tuples, one per invariant factor
    gens: Vec<CochainTuple>,
    /// canonical coords = (u4 . presentation coords) mod factors at kept rows
    u4: IntMatrix,
    kept4: Vec<usize>,
}

impl CohGroup {
    pub fn order(&self) -> BigUint {
        self.group.order()
    }

    pub fn factors(&self) -> &[BigUint] {
        self.group.factors()
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn zero(&self) -> Vec<BigUint> {
        self.group.zero()
    }

    pub fn elements(&self) -> Vec<Vec<BigUint>> {
        self.group.elements()
    }

    pub fn generators(&self) -> &[CochainTuple] {
        &self.gens
    }

    /// Coordinates of a relative cocycle (full-length tuple).
    pub fn coordinates_of(&self, c: &CochainTuple) -> Result<Vec<BigUint>> {
        if c.degree != self.degree || c.slots.len() != self.coeff.rank() {
            return Err(Error::DimensionMismatch("cochain shape".into()));
        }
        let mut pres = Vec::new();
        for (cyc, slot) in self.per_factor.iter().zip(&c.slots) {
            pres.extend(cyc.coordinates(&self.pair, slot)?);
        }
        let pres_int: Vec<BigInt> = pres.iter().map(|x| BigInt::from(x.clone())).collect();
        let u = self.u4.mul_vec(&pres_int)?;
        Ok(self
            .kept4
            .iter()
            .zip(self.group.factors())
            .map(|(&i, f)| u[i].mod_floor(&to_bigint(f)).magnitude().clone())
            .collect())
    }

    /// A representative cocycle for the class with the given coordinates.
    pub fn representative(&self, coords: &[BigUint]) -> Result<CochainTuple> {
        if coords.len() != self.group.rank() {
            return Err(Error::FactorMismatch("coordinate arity".into()));
        }
        let mut out = CochainTuple::zero(&self.pair.complex, &self.coeff, self.degree);
        for (gen, c) in self.gens.iter().zip(coords) {
            out.add_scaled(gen, &BigInt::from(c.clone()), &self.coeff);
        }
        Ok(out)
    }

    pub fn is_cocycle(&self, c: &CochainTuple) -> bool {
        is_cocycle(&self.pair, &self.coeff, c)
    }
}

/// `H^k(K; A)` for a finite abelian coefficient group acting factorwise.
pub fn cohomology(
    complex: Arc<crate::simplicial::SimComplex>,
    coeff: &FinAbGroup,
    k: i64,
) -> Result<CohGroup> {
    cohomology_pair(&Pair::absolute(complex), coeff, k)
}

/// `H^k(K, L; A)`.
pub fn cohomology_pair(pair: &Pair, coeff: &FinAbGroup, k: i64) -> Result<CohGroup> {
    let per_factor: Vec<Arc<CyclicCohomology>> = coeff
        .factors()
        .iter()
        .map(|n| cyclic_cohomology(pair, n, k))
        .collect::<Result<_>>()?;

    // presentation = concatenated per-factor chains; canonicalize
    let mut pres: Vec<(usize, BigUint)> = Vec::new(); // (factor slot, order)
    for (j, cyc) in per_factor.iter().enumerate() {
        for f in &cyc.orders {
            pres.push((j, f.clone()));
        }
    }
    let r = pres.len();
    let mut rel = IntMatrix::zeros(r, r);
    for (i, (_, f)) in pres.iter().enumerate() {
        rel[(i, i)] = BigInt::from(f.clone());
    }
    let snf = smith_normal_form(&rel);
    let diag = snf.diag();
    let mut kept4 = Vec::new();
    let mut factors = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if d.is_zero() {
            return Err(Error::Internal(
                "cohomology presentation must be finite".into(),
            ));
        }
        if !d.is_one() {
            kept4.push(i);
            factors.push(d.magnitude().clone());
        }
    }
    let group = FinAbGroup::from_invariant_factors(factors)?;

    // canonical generators: columns of U4^{-1} at kept indices combine the
    // presentation generators
    let mut gens = Vec::new();
    for &ki in &kept4 {
        let mut tuple = CochainTuple::zero(&pair.complex, coeff, k);
        for (row, (slot, _)) in pres.iter().enumerate() {
            let cedge = &snf.u_inv[(row, ki)];
            if cedge.is_zero() {
                continue;
            }
            // presentation generator `row` lives in coefficient slot `slot`
            let pres_gen = pres_generator(&per_factor, &pres, row);
            let mut carrier = CochainTuple::zero(&pair.complex, coeff, k);
            carrier.slots[*slot] = pres_gen.clone();
            tuple.add_scaled(&carrier, cedge, coeff);
        }
        gens.push(tuple);
    }

    Ok(CohGroup {
        pair: pair.clone(),
        degree: k,
        coeff: coeff.clone(),
        group,
        per_factor,
        gens,
        u4: snf.u,
        kept4,
    })
}

fn pres_generator<'a>(
    per_factor: &'a [Arc<CyclicCohomology>],
    pres: &[(usize, BigUint)],
    row: usize,
) -> &'a Vec<BigInt> {
    let slot = pres[row].0;
    let offset: usize = pres[..row].iter().filter(|(s, _)| *s == slot).count();
    &per_factor[slot].gens[offset]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::library_complex;
    use std::sync::Arc;

    fn h(name: &str, coeff: &FinAbGroup, k: i64) -> CohGroup {
        let complex = Arc::new(library_complex(name).unwrap());
        cohomology(complex, coeff, k).unwrap()
    }

    fn bu(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn circle_cohomology() {
        let z2 = FinAbGroup::cyclic(2);
        assert_eq!(h("S1", &z2, 0).factors(), &[bu(2)]);
        assert_eq!(h("S1", &z2, 1).factors(), &[bu(2)]);
        assert!(h("S1", &z2, 2).group.is_trivial());
        assert!(h("S1", &z2, -1).group.is_trivial());
    }

    #[test]
    fn torus_cohomology_mod2() {
        let z2 = FinAbGroup::cyclic(2);
        assert_eq!(h("T2", &z2, 0).factors(), &[bu(2)]);
        assert_eq!(h("T2", &z2, 1).factors(), &[bu(2), bu(2)]);
        assert_eq!(h("T2", &z2, 2).factors(), &[bu(2)]);
    }

    #[test]
    fn klein_bottle_mod3_matches_its_known_orders() {
        let z3 = FinAbGroup::cyclic(3);
        assert_eq!(h("klein", &z3, 0).order(), bu(3));
        assert_eq!(h("klein", &z3, 1).order(), bu(3));
        assert_eq!(h("klein", &z3, 2).order(), bu(1));
    }

    #[test]
    fn projective_plane_mod2_and_mod3() {
        let z2 = FinAbGroup::cyclic(2);
        let z3 = FinAbGroup::cyclic(3);
        assert_eq!(h("RP2", &z2, 1).order(), bu(2));
        assert_eq!(h("RP2", &z2, 2).order(), bu(2));
        assert_eq!(h("RP2", &z3, 1).order(), bu(1));
        assert_eq!(h("RP2", &z3, 2).order(), bu(1));
    }

    #[test]
    fn lens_space_torsion() {
        let z3 = FinAbGroup::cyclic(3);
        let z2 = FinAbGroup::cyclic(2);
        let l31 = Arc::new(library_complex("L(3,1)").unwrap());
        for (coeff, expect) in [(&z3, 3u64), (&z2, 1u64)] {
            let h1 = cohomology(l31.clone(), coeff, 1).unwrap();
            assert_eq!(h1.order(), bu(expect));
            let h2 = cohomology(l31.clone(), coeff, 2).unwrap();
            assert_eq!(h2.order(), bu(expect));
        }
        let h3 = cohomology(l31, &z3, 3).unwrap();
        assert_eq!(h3.order(), bu(3));
    }

    #[test]
    fn relative_disk_boundary() {
        let disk = Arc::new(library_complex("disk").unwrap());
        let boundary = Arc::new(disk.boundary_complex());
        let pair = Pair::relative(disk, boundary).unwrap();
        let z2 = FinAbGroup::cyclic(2);
        let h2 = cohomology_pair(&pair, &z2, 2).unwrap();
        assert_eq!(h2.factors(), &[bu(2)]);
        let h1 = cohomology_pair(&pair, &z2, 1).unwrap();
        assert!(h1.group.is_trivial());
        let h0 = cohomology_pair(&pair, &z2, 0).unwrap();
        assert!(h0.group.is_trivial());
    }

    #[test]
    fn pair_with_itself_vanishes() {
        let t2 = Arc::new(library_complex("T2").unwrap());
        let pair = Pair::relative(t2.clone(), t2).unwrap();
        let z6 = FinAbGroup::cyclic(6);
        for k in 0..=2 {
            assert!(cohomology_pair(&pair, &z6, k).unwrap().group.is_trivial());
        }
    }

    #[test]
    fn generators_roundtrip_through_coordinates() {
        let coeffs = [
            FinAbGroup::cyclic(2),
            FinAbGroup::cyclic(6),
            FinAbGroup::from_cyclic_orders(&[bu(2), bu(2)]),
        ];
        for name in ["T2", "RP2", "klein", "S2"] {
            for coeff in &coeffs {
                for k in 0..=2 {
                    let g = h(name, coeff, k);
                    for coords in g.elements() {
                        let rep = g.representative(&coords).unwrap();
                        assert!(g.is_cocycle(&rep));
                        assert_eq!(g.coordinates_of(&rep).unwrap(), coords, "{} k={}", name, k);
                    }
                }
            }
        }
    }

    #[test]
    fn mixed_coefficients_merge_canonically() {
        // H^1(T2; Z/6) = (Z/6)^2, assembled from the factorwise computation
        let z6 = FinAbGroup::cyclic(6);
        assert_eq!(h("T2", &z6, 1).factors(), &[bu(6), bu(6)]);
    }

    #[test]
    fn homology_orders_match_cohomology_orders() {
        let z4 = FinAbGroup::cyclic(4);
        for name in ["S2", "T2", "RP2", "klein"] {
            let complex = Arc::new(library_complex(name).unwrap());
            let pair = Pair::absolute(complex.clone());
            for k in 0..=2i64 {
                let hc = cohomology(complex.clone(), &z4, k).unwrap().order();
                let hh = cyclic_homology_order(&pair, &bu(4), k).unwrap();
                assert_eq!(hc, hh, "{} degree {}", name, k);
            }
        }
    }
}
