use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::complex::SimComplex;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrientRing {
    Integer,
    Mod2,
}

/// A top-degree relative cycle with unit local multiplicities: one sign per
/// facet (all +1 in the mod-2 case).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    pub ring: OrientRing,
    pub signs: Vec<i8>,
}

impl Orientation {
    pub fn negate(&self) -> Orientation {
        match self.ring {
            OrientRing::Mod2 => self.clone(),
            OrientRing::Integer => Orientation {
                ring: OrientRing::Integer,
                signs: self.signs.iter().map(|s| -s).collect(),
            },
        }
    }
}

/// Parity sign of the permutation sorting `v`; vertices must be distinct.
pub fn sort_sign(v: &[usize]) -> i8 {
    let mut inv = 0usize;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inv += 1;
            }
        }
    }
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Computes a fundamental class of a (validated) manifold complex.
///
/// Over the integers, compatible signs are propagated across the facet
/// adjacency graph from an arbitrary root; a sign conflict along a cycle of
/// facets means the complex is non-orientable and the violating facet cycle
/// is reported.  Over F2 the all-ones class always works.
pub fn fundamental_class(k: &SimComplex, ring: OrientRing) -> Result<Orientation> {
    if k.is_empty() {
        return Ok(Orientation {
            ring,
            signs: vec![],
        });
    }
    let d = k.dim();
    let nf = k.facets().len();
    if ring == OrientRing::Mod2 {
        return Ok(Orientation {
            ring,
            signs: vec![1; nf],
        });
    }
    if d == 0 {
        return Ok(Orientation {
            ring,
            signs: vec![1; nf],
        });
    }

    // facet adjacency across interior ridges, remembering which face index
    // each facet uses for the shared ridge
    let mut adj: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); nf]; // (other, my_face_idx, other_face_idx)
    for co in k.ridge_cofacets() {
        if co.len() == 2 {
            let (f, g) = (co[0], co[1]);
            let fi = omitted_index(k, f, g);
            let gi = omitted_index(k, g, f);
            adj[f].push((g, fi, gi));
            adj[g].push((f, gi, fi));
        }
    }

    let mut signs: Vec<i8> = vec![0; nf];
    let mut parent: Vec<Option<usize>> = vec![None; nf];
    for root in 0..nf {
        if signs[root] != 0 {
            continue;
        }
        signs[root] = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(f) = queue.pop_front() {
            for &(g, fi, gi) in &adj[f] {
                // cancellation on the shared ridge: sf*(-1)^fi + sg*(-1)^gi = 0
                let want = -signs[f] * parity(fi) * parity(gi);
                if signs[g] == 0 {
                    signs[g] = want;
                    parent[g] = Some(f);
                    queue.push_back(g);
                } else if signs[g] != want {
                    return Err(Error::NonOrientable {
                        cycle: conflict_cycle(&parent, f, g),
                    });
                }
            }
        }
    }
    Ok(Orientation {
        ring: OrientRing::Integer,
        signs,
    })
}

fn parity(i: usize) -> i8 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Position of the vertex of facet `f` that is not in facet `g`'s shared ridge
/// (the two facets share a ridge, so exactly one vertex of `f` is omitted).
fn omitted_index(k: &SimComplex, f: usize, g: usize) -> usize {
    let ff = &k.facets()[f];
    let gg = &k.facets()[g];
    for (i, v) in ff.iter().enumerate() {
        if !gg.contains(v) {
            return i;
        }
    }
    // facets share all vertices of a ridge; recompute via set difference
    let shared: Vec<usize> = ff.iter().filter(|v| gg.contains(v)).cloned().collect();
    ff.iter()
        .position(|v| !shared.contains(v))
        .expect("distinct facets differ somewhere")
}

fn conflict_cycle(parent: &[Option<usize>], f: usize, g: usize) -> Vec<usize> {
    let path_to_root = |mut x: usize| {
        let mut p = vec![x];
        while let Some(q) = parent[x] {
            p.push(q);
            x = q;
        }
        p
    };
    let pf = path_to_root(f);
    let pg = path_to_root(g);
    // join at the lowest common ancestor
    let mut cycle = Vec::new();
    for &x in &pf {
        cycle.push(x);
        if pg.contains(&x) {
            let pos = pg.iter().position(|&y| y == x).unwrap();
            for &y in pg[..pos].iter().rev() {
                cycle.push(y);
            }
            break;
        }
    }
    cycle
}

/// The boundary of the weighted facet chain, as coefficients on the
/// (d-1)-simplices.  Interior ridges must cancel for a valid class.
pub fn boundary_chain(k: &SimComplex, o: &Orientation) -> Result<BTreeMap<usize, i64>> {
    let d = k.dim();
    let mut coeff: HashMap<usize, i64> = HashMap::new();
    for (fi, f) in k.facets().iter().enumerate() {
        for omit in 0..f.len() {
            let ridge: Vec<usize> = f
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != omit)
                .map(|(_, v)| *v)
                .collect();
            let ri = k
                .simplex_index(d - 1, &ridge)
                .ok_or_else(|| Error::Internal("missing ridge".into()))?;
            *coeff.entry(ri).or_insert(0) += (o.signs[fi] as i64) * (parity(omit) as i64);
        }
    }
    let co = k.ridge_cofacets();
    let mut out = BTreeMap::new();
    for (ri, c) in coeff {
        let interior = co[ri].len() == 2;
        match o.ring {
            OrientRing::Integer => {
                if interior {
                    if c != 0 {
                        return Err(Error::InvalidBordism(
                            "orientation is not a cycle relative to the boundary".into(),
                        ));
                    }
                } else if c != 0 {
                    out.insert(ri, c);
                }
            }
            OrientRing::Mod2 => {
                let c2 = c.rem_euclid(2);
                if interior {
                    if c2 != 0 {
                        return Err(Error::InvalidBordism(
                            "mod-2 class is not a relative cycle".into(),
                        ));
                    }
                } else if c2 != 0 {
                    out.insert(ri, c2);
                }
            }
        }
    }
    Ok(out)
}

/// Validates that `o` is a fundamental class for `k`: unit multiplicities and
/// relative-cycle boundary.
pub fn verify_orientation(k: &SimComplex, o: &Orientation) -> Result<()> {
    if o.signs.len() != k.facets().len() {
        return Err(Error::InvalidBordism("orientation length mismatch".into()));
    }
    if o.signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::InvalidBordism(
            "orientation multiplicities must be units".into(),
        ));
    }
    if k.dim() >= 1 {
        boundary_chain(k, o)?;
    }
    Ok(())
}

/// Pushes a facet-signed chain on `n` through a vertex map into simplices of
/// `m`, adjusting each sign by the parity of the sort that re-orders the
/// image vertices.
pub fn transport_class(
    n: &SimComplex,
    o: &Orientation,
    vertex_map: &BTreeMap<usize, usize>,
    m: &SimComplex,
    target_dim: i64,
) -> Result<BTreeMap<usize, i64>> {
    let mut out = BTreeMap::new();
    for (fi, f) in n.facets().iter().enumerate() {
        let image: Vec<usize> = f
            .iter()
            .map(|v| {
                vertex_map
                    .get(v)
                    .copied()
                    .ok_or_else(|| Error::InvalidBordism(format!("vertex {} unmapped", v)))
            })
            .collect::<Result<_>>()?;
        let sign = sort_sign(&image);
        let mut sorted = image;
        sorted.sort_unstable();
        let idx = m
            .simplex_index(target_dim, &sorted)
            .ok_or_else(|| Error::InvalidBordism(format!("image simplex {:?} missing", sorted)))?;
        let c = (o.signs[fi] as i64) * (sign as i64);
        *out.entry(idx).or_insert(0) += c;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere() -> SimComplex {
        SimComplex::from_facets(vec![
            vec![0, 1, 2],
            vec![0, 1, 3],
            vec![0, 2, 3],
            vec![1, 2, 3],
        ])
        .unwrap()
    }

    #[test]
    fn sphere_is_orientable_with_zero_boundary() {
        let s2 = sphere();
        let o = fundamental_class(&s2, OrientRing::Integer).unwrap();
        assert!(boundary_chain(&s2, &o).unwrap().is_empty());
        verify_orientation(&s2, &o).unwrap();
    }

    #[test]
    fn triangle_boundary_is_its_edge_cycle() {
        let t = SimComplex::from_facets(vec![vec![0, 1, 2]]).unwrap();
        let o = fundamental_class(&t, OrientRing::Integer).unwrap();
        let b = boundary_chain(&t, &o).unwrap();
        assert_eq!(b.len(), 3);
        assert!(b.values().all(|&c| c == 1 || c == -1));
    }

    #[test]
    fn orientation_reversal_negates_boundary() {
        let t = SimComplex::from_facets(vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        let o = fundamental_class(&t, OrientRing::Integer).unwrap();
        let b = boundary_chain(&t, &o).unwrap();
        let bn = boundary_chain(&t, &o.negate()).unwrap();
        for (k, v) in &b {
            assert_eq!(bn[k], -v);
        }
    }
}
