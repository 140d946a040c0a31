//! Constructions producing new complexes: ordered products, cones, cyclic
//! quotients, mapping tori, connected sums and subdivisions.

use std::collections::{BTreeMap, BTreeSet};

use super::complex::{validate_manifold, SimComplex};
use crate::error::{Error, Result};

/// Path with vertices `0..=segments`.
pub fn path_complex(segments: usize) -> SimComplex {
    assert!(segments >= 1);
    SimComplex::from_facets((0..segments).map(|i| vec![i, i + 1]).collect()).unwrap()
}

/// Cycle (n-gon) on vertices `0..n`, n >= 3.
pub fn cycle_complex(n: usize) -> Result<SimComplex> {
    if n < 3 {
        return Err(Error::InvalidInput(
            "a polygon needs at least 3 vertices".into(),
        ));
    }
    let mut facets: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i, i + 1]).collect();
    facets.push(vec![0, n - 1]);
    SimComplex::from_facets(facets)
}

/// Cone over `base` with a fresh apex vertex.
pub fn cone(base: &SimComplex, apex: usize) -> Result<SimComplex> {
    if base.vertices().contains(&apex) {
        return Err(Error::InvalidInput(
            "apex already occurs in the base".into(),
        ));
    }
    let facets = base
        .facets()
        .iter()
        .map(|f| {
            let mut g = f.clone();
            g.push(apex);
            g
        })
        .collect();
    SimComplex::from_facets(facets)
}

/// The ordered (staircase) product triangulation of `|a| x |b|`.
///
/// Product vertices are the pairs `(va, vb)` numbered in lexicographic
/// order; the simplices over a facet pair are the monotone staircase paths
/// through the grid.  Returns the complex together with the pair-to-id map.
pub type ProductVertexMap = BTreeMap<(usize, usize), usize>;

pub fn ordered_product(a: &SimComplex, b: &SimComplex) -> Result<(SimComplex, ProductVertexMap)> {
    if a.is_empty() || b.is_empty() {
        return Ok((SimComplex::empty(), BTreeMap::new()));
    }
    let mut ids = BTreeMap::new();
    for &va in a.vertices() {
        for &vb in b.vertices() {
            let next = ids.len();
            ids.insert((va, vb), next);
        }
    }
    let mut facets = Vec::new();
    for fa in a.facets() {
        for fb in b.facets() {
            let p = fa.len() - 1;
            let q = fb.len() - 1;
            for mask in step_patterns(p, q) {
                let (mut i, mut j) = (0usize, 0usize);
                let mut verts = vec![ids[&(fa[0], fb[0])]];
                for step_in_a in mask {
                    if step_in_a {
                        i += 1;
                    } else {
                        j += 1;
                    }
                    verts.push(ids[&(fa[i], fb[j])]);
                }
                facets.push(verts);
            }
        }
    }
    Ok((SimComplex::from_facets(facets)?, ids))
}

/// All interleavings of `p` a-steps and `q` b-steps.
fn step_patterns(p: usize, q: usize) -> Vec<Vec<bool>> {
    fn go(p: usize, q: usize, prefix: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if p == 0 && q == 0 {
            out.push(prefix.clone());
            return;
        }
        if p > 0 {
            prefix.push(true);
            go(p - 1, q, prefix, out);
            prefix.pop();
        }
        if q > 0 {
            prefix.push(false);
            go(p, q - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(p, q, &mut Vec::new(), &mut out);
    out
}

/// Mapping torus of a simplicial automorphism `phi` of `n`, built from
/// `layers >= 3` product layers with the top glued back to the bottom
/// through `phi`.
pub fn mapping_torus(
    n: &SimComplex,
    phi: &BTreeMap<usize, usize>,
    layers: usize,
) -> Result<SimComplex> {
    if layers < 3 {
        return Err(Error::InvalidInput(
            "mapping torus needs at least 3 layers".into(),
        ));
    }
    check_automorphism(n, phi)?;
    let path = path_complex(layers);
    let (prod, ids) = ordered_product(n, &path)?;
    // final id of layer vertex (v, t); top layer wraps through phi
    let final_id = |v: usize, t: usize| -> usize {
        if t == layers {
            ids[&(phi[&v], 0)]
        } else {
            ids[&(v, t)]
        }
    };
    let mut back = BTreeMap::new();
    for (&(v, t), &id) in &ids {
        back.insert(id, (v, t));
    }
    let mut facets = Vec::new();
    for f in prod.facets() {
        let g: Vec<usize> = f
            .iter()
            .map(|&id| {
                let (v, t) = back[&id];
                final_id(v, t)
            })
            .collect();
        let set: BTreeSet<usize> = g.iter().cloned().collect();
        if set.len() != g.len() {
            return Err(Error::InvalidComplex(
                "mapping torus identification collapses a simplex".into(),
            ));
        }
        facets.push(g);
    }
    SimComplex::from_facets(facets)
}

fn check_automorphism(n: &SimComplex, phi: &BTreeMap<usize, usize>) -> Result<()> {
    let verts: BTreeSet<usize> = n.vertices().iter().cloned().collect();
    let image: BTreeSet<usize> = phi.values().cloned().collect();
    if phi.len() != verts.len() || image != verts || !phi.keys().all(|v| verts.contains(v)) {
        return Err(Error::InvalidInput("not a vertex bijection".into()));
    }
    for f in n.facets() {
        let mut img: Vec<usize> = f.iter().map(|v| phi[v]).collect();
        img.sort_unstable();
        if !n.contains_simplex(&img) {
            return Err(Error::InvalidInput("vertex map is not simplicial".into()));
        }
    }
    Ok(())
}

/// Quotient of `k` by the free cyclic action generated by `gen` (order `p`).
///
/// The action must be strongly free: no face meets any of its translates.
/// The quotient is validated to stay simplicial (face counts divide by `p`
/// exactly); quotient vertices are labeled by the least ID in each orbit.
pub fn quotient_by_cyclic(
    k: &SimComplex,
    gen: &BTreeMap<usize, usize>,
    p: usize,
) -> Result<SimComplex> {
    check_automorphism(k, gen)?;
    // powers of the generator
    let mut powers: Vec<BTreeMap<usize, usize>> =
        vec![k.vertices().iter().map(|&v| (v, v)).collect()];
    for t in 1..=p {
        let prev = &powers[t - 1];
        let next: BTreeMap<usize, usize> = prev.iter().map(|(&v, &w)| (v, gen[&w])).collect();
        powers.push(next);
    }
    if powers[p] != powers[0] {
        return Err(Error::InvalidInput(
            "generator does not have the stated order".into(),
        ));
    }
    for t in 1..p {
        if powers[t] == powers[0] {
            return Err(Error::InvalidInput(
                "generator order is smaller than stated".into(),
            ));
        }
    }
    // strong freeness on every face of every dimension
    for dim in 0..=k.dim() {
        for s in k.simplices(dim) {
            let sset: BTreeSet<usize> = s.iter().cloned().collect();
            for power in powers.iter().take(p).skip(1) {
                if s.iter().any(|v| sset.contains(&power[v])) {
                    return Err(Error::InvalidInput(format!(
                        "action is not strongly free: face {:?} meets a translate",
                        s
                    )));
                }
            }
        }
    }
    // orbit labels: least id in the orbit
    let mut label = BTreeMap::new();
    for &v in k.vertices() {
        let orbit_min = (0..p).map(|t| powers[t][&v]).min().unwrap();
        label.insert(v, orbit_min);
    }
    let mut seen = BTreeSet::new();
    let mut facets = Vec::new();
    for f in k.facets() {
        let mut img: Vec<usize> = f.iter().map(|v| label[v]).collect();
        img.sort_unstable();
        let set: BTreeSet<usize> = img.iter().cloned().collect();
        if set.len() != img.len() {
            return Err(Error::InvalidComplex("quotient collapses a facet".into()));
        }
        if seen.insert(img.clone()) {
            facets.push(img);
        }
    }
    if facets.len() * p != k.facets().len() {
        return Err(Error::InvalidComplex(
            "quotient facet orbits collide; the action is not regular enough".into(),
        ));
    }
    let q = SimComplex::from_facets(facets)?;
    // vertex-set injectivity on every dimension
    for dim in 0..=k.dim() {
        if q.num_simplices(dim) * p != k.num_simplices(dim) {
            return Err(Error::InvalidComplex(format!(
                "quotient face orbits collide in dimension {}",
                dim
            )));
        }
    }
    Ok(q)
}

/// The boundary of the product of an m-gon and an n-gon (a 3-sphere), as the
/// union of two staircase solid tori along their common grid torus.
///
/// Torus vertices `t(i,j) = i*n + j`; the two core circles follow with IDs
/// `m*n + i` and `m*n + m + j`.
pub fn duoprism_sphere(m: usize, n: usize) -> Result<SimComplex> {
    if m < 3 || n < 3 {
        return Err(Error::InvalidInput(
            "polygon factors need at least 3 sides".into(),
        ));
    }
    let t = |i: usize, j: usize| (i % m) * n + (j % n);
    let a = |i: usize| m * n + (i % m);
    let b = |j: usize| m * n + m + (j % n);
    let mut facets = Vec::new();
    for i in 0..m {
        for j in 0..n {
            // first solid torus: circle x cone(polygon)
            facets.push(vec![a(i), a(i + 1), t(i + 1, j), t(i + 1, j + 1)]);
            facets.push(vec![a(i), t(i, j), t(i + 1, j), t(i + 1, j + 1)]);
            facets.push(vec![a(i), t(i, j), t(i, j + 1), t(i + 1, j + 1)]);
            // second solid torus: cone(polygon) x circle
            facets.push(vec![b(j), t(i, j), t(i + 1, j), t(i + 1, j + 1)]);
            facets.push(vec![b(j), t(i, j), t(i, j + 1), t(i + 1, j + 1)]);
            facets.push(vec![b(j), b(j + 1), t(i, j + 1), t(i + 1, j + 1)]);
        }
    }
    let sphere = SimComplex::from_facets(facets)?;
    let rep = validate_manifold(&sphere, 3)?;
    if !rep.closed || !rep.is_manifold() || sphere.euler_characteristic() != 0 {
        return Err(Error::Internal("duoprism sphere failed validation".into()));
    }
    Ok(sphere)
}

/// Lens space `L(p, q)` as the quotient of the duoprism 3-sphere on
/// `3p x 3p`-gons by the free rotation `(i, j) -> (i + 3, j + 3q)`.
/// The quotient core circles are then 3-gons, the smallest simplicial size.
pub fn lens_space(p: usize, q: usize) -> Result<SimComplex> {
    if p < 2 || q == 0 || q >= p || gcd(p, q) != 1 {
        return Err(Error::InvalidInput(format!(
            "lens space parameters need 2 <= p, 1 <= q < p coprime; got ({}, {})",
            p, q
        )));
    }
    let m = 3 * p;
    let n = 3 * p;
    let sphere = duoprism_sphere(m, n)?;
    let t = |i: usize, j: usize| (i % m) * n + (j % n);
    let a = |i: usize| m * n + (i % m);
    let b = |j: usize| m * n + m + (j % n);
    let mut gen = BTreeMap::new();
    for i in 0..m {
        for j in 0..n {
            gen.insert(t(i, j), t(i + 3, j + 3 * q));
        }
    }
    for i in 0..m {
        gen.insert(a(i), a(i + 3));
    }
    for j in 0..n {
        gen.insert(b(j), b(j + 3 * q));
    }
    let lens = quotient_by_cyclic(&sphere, &gen, p)?;
    let rep = validate_manifold(&lens, 3)?;
    if !rep.closed || !rep.is_manifold() || lens.euler_characteristic() != 0 {
        return Err(Error::Internal("lens space failed validation".into()));
    }
    Ok(lens)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Connected sum of two closed surfaces: remove one facet from each and glue
/// the rims.  Tries facet pairs and rim bijections in deterministic order
/// until the result validates as a closed surface.
pub fn connected_sum(a: &SimComplex, b: &SimComplex) -> Result<SimComplex> {
    let fresh_base = a.vertices().iter().max().unwrap() + 1;
    for ta in a.facets() {
        for tb in b.facets() {
            for perm in permutations(3) {
                let mut vmap: BTreeMap<usize, usize> = BTreeMap::new();
                for (k, &idx) in perm.iter().enumerate() {
                    vmap.insert(tb[k], ta[idx]);
                }
                let mut next = fresh_base;
                for &v in b.vertices() {
                    vmap.entry(v).or_insert_with(|| {
                        let id = next;
                        next += 1;
                        id
                    });
                }
                let mut facets: Vec<Vec<usize>> =
                    a.facets().iter().filter(|f| *f != ta).cloned().collect();
                for f in b.facets() {
                    if f == tb {
                        continue;
                    }
                    let mut g: Vec<usize> = f.iter().map(|v| vmap[v]).collect();
                    g.sort_unstable();
                    facets.push(g);
                }
                let Ok(k) = SimComplex::from_facets(facets) else {
                    continue;
                };
                if k.facets().len() != a.facets().len() + b.facets().len() - 2 {
                    continue;
                }
                let Ok(rep) = validate_manifold(&k, 2) else {
                    continue;
                };
                if rep.closed && rep.is_manifold() && rep.components == 1 {
                    return Ok(k);
                }
            }
        }
    }
    Err(Error::InvalidComplex(
        "no valid connected-sum gluing found".into(),
    ))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(remaining: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..remaining.len() {
            let x = remaining.remove(i);
            prefix.push(x);
            go(remaining, prefix, out);
            prefix.pop();
            remaining.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

/// Uniform 1-to-4 refinement of a 2-complex (new vertex on each edge).
pub fn refine4(k: &SimComplex) -> Result<SimComplex> {
    if k.dim() != 2 {
        return Err(Error::InvalidInput("refine4 expects a 2-complex".into()));
    }
    let base = k.vertices().iter().max().unwrap() + 1;
    let mid = |e: &[usize]| -> usize { base + k.simplex_index(1, e).unwrap() };
    let mut facets = Vec::new();
    for f in k.facets() {
        let (x, y, z) = (f[0], f[1], f[2]);
        let mxy = mid(&[x, y]);
        let mxz = mid(&[x, z]);
        let myz = mid(&[y, z]);
        facets.push(vec![x, mxy, mxz]);
        facets.push(vec![y, mxy, myz]);
        facets.push(vec![z, mxz, myz]);
        facets.push(vec![mxy, mxz, myz]);
    }
    SimComplex::from_facets(facets)
}

/// One barycentric subdivision: vertices are the faces of `k`, facets are the
/// maximal chains in the face order.
pub fn barycentric_subdivision(k: &SimComplex) -> Result<SimComplex> {
    let mut face_id: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for dim in 0..=k.dim() {
        for s in k.simplices(dim) {
            let next = face_id.len();
            face_id.insert(s.clone(), next);
        }
    }
    let d = k.dim() as usize;
    let mut facets = Vec::new();
    for f in k.facets() {
        for perm in permutations(d + 1) {
            let mut chain = Vec::new();
            let mut partial: Vec<usize> = Vec::new();
            for &idx in &perm {
                partial.push(f[idx]);
                let mut sorted = partial.clone();
                sorted.sort_unstable();
                chain.push(face_id[&sorted]);
            }
            facets.push(chain);
        }
    }
    SimComplex::from_facets(facets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::orientation::{fundamental_class, OrientRing};

    #[test]
    fn product_torus_is_a_torus() {
        let c3 = cycle_complex(3).unwrap();
        let (t2, _) = ordered_product(&c3, &c3).unwrap();
        assert_eq!(t2.num_simplices(0), 9);
        assert_eq!(t2.num_simplices(2), 18);
        assert_eq!(t2.euler_characteristic(), 0);
        let rep = validate_manifold(&t2, 2).unwrap();
        assert!(rep.closed && rep.is_manifold());
        assert!(fundamental_class(&t2, OrientRing::Integer).is_ok());
    }

    #[test]
    fn cylinder_staircase_counts() {
        let c3 = cycle_complex(3).unwrap();
        let (cyl, _) = ordered_product(&c3, &path_complex(1)).unwrap();
        assert_eq!(cyl.num_simplices(0), 6);
        assert_eq!(cyl.num_simplices(2), 6);
        assert_eq!(cyl.euler_characteristic(), 0);
        let b = cyl.boundary_complex();
        assert_eq!(b.vertex_components().len(), 2);
    }

    #[test]
    fn klein_bottle_from_mapping_torus() {
        let c4 = cycle_complex(4).unwrap();
        let phi = BTreeMap::from([(0, 0), (1, 3), (2, 2), (3, 1)]);
        let k = mapping_torus(&c4, &phi, 3).unwrap();
        assert_eq!(k.euler_characteristic(), 0);
        let rep = validate_manifold(&k, 2).unwrap();
        assert!(rep.closed && rep.is_manifold());
        // non-orientable
        assert!(fundamental_class(&k, OrientRing::Integer).is_err());
        assert!(fundamental_class(&k, OrientRing::Mod2).is_ok());
    }

    #[test]
    fn duoprism_sphere_small() {
        let s3 = duoprism_sphere(3, 3).unwrap();
        assert_eq!(s3.facets().len(), 54);
        assert!(fundamental_class(&s3, OrientRing::Integer).is_ok());
    }

    #[test]
    fn lens_spaces_validate() {
        for (p, q) in [(2usize, 1usize), (3, 1), (5, 1)] {
            let l = lens_space(p, q).unwrap();
            assert_eq!(l.facets().len(), 54 * p, "L({},{}) facet count", p, q);
            assert!(fundamental_class(&l, OrientRing::Integer).is_ok());
        }
    }

    #[test]
    fn genus_two_from_connected_sum() {
        let c3 = cycle_complex(3).unwrap();
        let (t2, _) = ordered_product(&c3, &c3).unwrap();
        let sigma2 = connected_sum(&t2, &t2).unwrap();
        assert_eq!(sigma2.euler_characteristic(), -2);
        assert!(fundamental_class(&sigma2, OrientRing::Integer).is_ok());
    }

    #[test]
    fn subdivision_preserves_euler() {
        let c3 = cycle_complex(3).unwrap();
        let (t2, _) = ordered_product(&c3, &c3).unwrap();
        let sd = barycentric_subdivision(&t2).unwrap();
        assert_eq!(sd.euler_characteristic(), 0);
        assert_eq!(sd.facets().len(), 18 * 6);
        let rep = validate_manifold(&sd, 2).unwrap();
        assert!(rep.closed && rep.is_manifold());
    }
}
