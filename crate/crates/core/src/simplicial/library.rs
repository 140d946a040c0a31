//! Curated triangulations and standard bordisms, validated at build time.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::bordism::{Bordism, BoundaryAttach, ClosedObject};
use super::build::{
    barycentric_subdivision, cone, connected_sum, cycle_complex, lens_space, mapping_torus,
    ordered_product, path_complex,
};
use super::complex::SimComplex;
use super::orientation::{boundary_chain, fundamental_class, transport_class, OrientRing};
use crate::error::{Error, Result};

/// Boundary of the n-simplex on vertices `0..=n` (the standard (n-1)-sphere).
fn simplex_boundary(n: usize) -> SimComplex {
    let all: Vec<usize> = (0..=n).collect();
    let facets: Vec<Vec<usize>> = (0..=n)
        .map(|omit| all.iter().filter(|&&v| v != omit).cloned().collect())
        .collect();
    SimComplex::from_facets(facets).unwrap()
}

/// The 7-vertex torus: facets `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
fn torus7() -> SimComplex {
    let mut facets = Vec::new();
    for i in 0..7usize {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    SimComplex::from_facets(facets).unwrap()
}

/// The 5-triangle Möbius band `{i, i+1, i+2}` mod 5.
fn mobius_band() -> SimComplex {
    let facets = (0..5usize)
        .map(|i| vec![i, (i + 1) % 5, (i + 2) % 5])
        .collect();
    SimComplex::from_facets(facets).unwrap()
}

/// The 6-vertex projective plane: Möbius band plus a cone over its rim.
fn rp2() -> SimComplex {
    let band = mobius_band();
    let rim = band.boundary_complex();
    let cap = cone(&rim, 5).unwrap();
    let mut facets = band.facets().to_vec();
    facets.extend(cap.facets().iter().cloned());
    SimComplex::from_facets(facets).unwrap()
}

/// Klein bottle as a twisted circle bundle: 3-layer mapping torus of the
/// reflection of the square.
fn klein_bottle() -> SimComplex {
    let c4 = cycle_complex(4).unwrap();
    let phi = BTreeMap::from([(0usize, 0usize), (1, 3), (2, 2), (3, 1)]);
    mapping_torus(&c4, &phi, 3).unwrap()
}

fn grid_torus() -> SimComplex {
    let c3 = cycle_complex(3).unwrap();
    ordered_product(&c3, &c3).unwrap().0
}

fn genus_surface(g: usize) -> Result<SimComplex> {
    if g == 0 {
        return Ok(simplex_boundary(3));
    }
    let mut acc = grid_torus();
    for _ in 1..g {
        acc = connected_sum(&acc, &grid_torus())?;
    }
    Ok(acc)
}

fn three_torus() -> SimComplex {
    let c3 = cycle_complex(3).unwrap();
    ordered_product(&torus7(), &c3).unwrap().0
}

fn disk3() -> SimComplex {
    cone(&cycle_complex(3).unwrap(), 3).unwrap()
}

/// Octahedron refined once: a sphere with enough room for three disjoint
/// holes.
fn pants_complex() -> (SimComplex, [Vec<usize>; 3]) {
    let octa = SimComplex::from_facets(vec![
        vec![0, 2, 4],
        vec![0, 2, 5],
        vec![0, 3, 4],
        vec![0, 3, 5],
        vec![1, 2, 4],
        vec![1, 2, 5],
        vec![1, 3, 4],
        vec![1, 3, 5],
    ])
    .unwrap();
    let sphere = super::build::refine4(&octa).unwrap();
    // three pairwise vertex-disjoint facets, first found in order
    let facets = sphere.facets();
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    for f in facets {
        if chosen.iter().all(|c| c.iter().all(|v| !f.contains(v))) {
            chosen.push(f.clone());
            if chosen.len() == 3 {
                break;
            }
        }
    }
    assert_eq!(
        chosen.len(),
        3,
        "refined octahedron admits three disjoint facets"
    );
    let remaining: Vec<Vec<usize>> = facets
        .iter()
        .filter(|f| !chosen.contains(f))
        .cloned()
        .collect();
    let pants = SimComplex::from_facets(remaining).unwrap();
    (
        pants,
        [chosen[0].clone(), chosen[1].clone(), chosen[2].clone()],
    )
}

pub fn library_complex(name: &str) -> Result<SimComplex> {
    if let Some(inner) = name.strip_prefix("sd(").and_then(|s| s.strip_suffix(')')) {
        return barycentric_subdivision(&library_complex(inner)?);
    }
    if let Some(inner) = name
        .strip_prefix("cylinder(")
        .and_then(|s| s.strip_suffix(')'))
    {
        let base = library_complex(inner)?;
        return Ok(ordered_product(&base, &path_complex(1))?.0);
    }
    if let Some(args) = name.strip_prefix("S1(").and_then(|s| s.strip_suffix(')')) {
        let n: usize = args
            .parse()
            .map_err(|_| Error::UnknownManifold(name.into()))?;
        return cycle_complex(n);
    }
    if let Some(args) = name.strip_prefix("L(").and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<&str> = args.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::UnknownManifold(name.into()));
        }
        let p: usize = parts[0]
            .trim()
            .parse()
            .map_err(|_| Error::UnknownManifold(name.into()))?;
        let q: usize = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::UnknownManifold(name.into()))?;
        if p > 7 {
            return Err(Error::UnknownManifold(format!(
                "lens spaces are curated only for p <= 7, got {}",
                name
            )));
        }
        return lens_space(p, q);
    }
    if let Some(args) = name
        .strip_prefix("Sigma(")
        .and_then(|s| s.strip_suffix(')'))
    {
        let g: usize = args
            .parse()
            .map_err(|_| Error::UnknownManifold(name.into()))?;
        if g > 3 {
            return Err(Error::UnknownManifold(
                "genus is curated only for g <= 3".into(),
            ));
        }
        return genus_surface(g);
    }
    match name {
        "point" => SimComplex::from_facets(vec![vec![0]]),
        "interval" => Ok(path_complex(1)),
        "S1" => cycle_complex(3),
        "S2" => Ok(simplex_boundary(3)),
        "S3" => Ok(simplex_boundary(4)),
        "S4" => Ok(simplex_boundary(5)),
        "T2" => Ok(torus7()),
        "T2grid" => Ok(grid_torus()),
        "RP2" => Ok(rp2()),
        "klein" => Ok(klein_bottle()),
        "mobius" => Ok(mobius_band()),
        "disk" => Ok(disk3()),
        "pants" => Ok(pants_complex().0),
        "T3" => Ok(three_torus()),
        "RP3" => lens_space(2, 1),
        "solidtorus" => {
            let c3 = cycle_complex(3).unwrap();
            Ok(ordered_product(&c3, &disk3())?.0)
        }
        _ => Err(Error::UnknownManifold(name.into())),
    }
}

/// Closed manifolds wrapped as bordism objects (with their standard
/// fundamental class when orientable).
pub fn library_closed(name: &str) -> Result<Arc<ClosedObject>> {
    ClosedObject::new(name, library_complex(name)?)
}

/// Finds a vertex map from the circle object onto the rim cycle whose
/// transported class matches `want` times the boundary restriction of the
/// base fundamental class.
fn circle_attach(
    m: &SimComplex,
    bchain: &BTreeMap<usize, i64>,
    obj: &Arc<ClosedObject>,
    rim: &[usize],
    want: i8,
) -> Result<BoundaryAttach> {
    let n = rim.len();
    let obj_orient = obj.orientation.as_ref().unwrap();
    for dir in [1i64, -1] {
        for rot in 0..n {
            let vertex_map: BTreeMap<usize, usize> = (0..n)
                .map(|k| {
                    let pos = (rot as i64 + dir * k as i64).rem_euclid(n as i64) as usize;
                    (k, rim[pos])
                })
                .collect();
            let Ok(t) = transport_class(&obj.complex, obj_orient, &vertex_map, m, m.dim() - 1)
            else {
                continue;
            };
            let mut ratio: Option<i8> = None;
            let mut ok = true;
            for (&idx, &c) in &t {
                let b = bchain.get(&idx).copied().unwrap_or(0);
                if b != c && b != -c {
                    ok = false;
                    break;
                }
                let r = if b == c { 1 } else { -1 };
                if *ratio.get_or_insert(r) != r {
                    ok = false;
                    break;
                }
            }
            if ok && ratio == Some(want) {
                return Ok(BoundaryAttach {
                    object: obj.clone(),
                    vertex_map,
                });
            }
        }
    }
    Err(Error::InvalidBordism(
        "no circle attachment with the requested sign".into(),
    ))
}

/// Ordered vertices of the boundary cycle supported on the given vertex set.
fn rim_cycle(m: &SimComplex, verts: &BTreeSet<usize>) -> Vec<usize> {
    let boundary = m.boundary_complex();
    let edges: Vec<&Vec<usize>> = boundary
        .simplices(1)
        .iter()
        .filter(|e| verts.contains(&e[0]) && verts.contains(&e[1]))
        .collect();
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in &edges {
        adj.entry(e[0]).or_default().push(e[1]);
        adj.entry(e[1]).or_default().push(e[0]);
    }
    let start = *verts.iter().next().unwrap();
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = adj[&start][0];
    while cur != start {
        cycle.push(cur);
        let next = *adj[&cur].iter().find(|&&x| x != prev).unwrap();
        prev = cur;
        cur = next;
    }
    cycle
}

/// The standard cylinder bordism `N x [0,1]: N -> N` for a library object.
fn cylinder_bordism(obj_name: &str) -> Result<Bordism> {
    let obj = library_closed(obj_name)?;
    let (m, ids) = ordered_product(&obj.complex, &path_complex(1))?;
    let inc = BoundaryAttach {
        object: obj.clone(),
        vertex_map: obj
            .complex
            .vertices()
            .iter()
            .map(|&v| (v, ids[&(v, 0)]))
            .collect(),
    };
    let out = BoundaryAttach {
        object: obj.clone(),
        vertex_map: obj
            .complex
            .vertices()
            .iter()
            .map(|&v| (v, ids[&(v, 1)]))
            .collect(),
    };
    Bordism::new(
        &format!("cyl({})", obj_name),
        m,
        vec![inc],
        vec![out],
        obj.orientation.is_some(),
    )
}

/// Disk bordism between the empty manifold and the standard circle.
fn disk_bordism(outgoing: bool) -> Result<Bordism> {
    let m = disk3();
    let obj = library_closed("S1")?;
    let bchain = boundary_chain(&m, &fundamental_class(&m, OrientRing::Integer)?)?;
    let rim = rim_cycle(&m, &[0, 1, 2].into_iter().collect());
    if outgoing {
        let attach = circle_attach(&m, &bchain, &obj, &rim, -1)?;
        Bordism::new("disk_out", m, vec![], vec![attach], true)
    } else {
        let attach = circle_attach(&m, &bchain, &obj, &rim, 1)?;
        Bordism::new("disk_in", m, vec![attach], vec![], true)
    }
}

/// Pair of pants `S1 ⊔ S1 -> S1`.
fn pants_bordism() -> Result<Bordism> {
    let (m, holes) = pants_complex();
    let obj = library_closed("S1")?;
    let bchain = boundary_chain(&m, &fundamental_class(&m, OrientRing::Integer)?)?;
    let rims: Vec<Vec<usize>> = holes
        .iter()
        .map(|h| rim_cycle(&m, &h.iter().cloned().collect()))
        .collect();
    let in1 = circle_attach(&m, &bchain, &obj, &rims[0], 1)?;
    let in2 = circle_attach(&m, &bchain, &obj, &rims[1], 1)?;
    let out = circle_attach(&m, &bchain, &obj, &rims[2], -1)?;
    Bordism::new("pants", m, vec![in1, in2], vec![out], true)
}

/// Genus-g surface with one open facet removed, as a bordism `∅ -> S1`.
fn cap_bordism(g: usize) -> Result<Bordism> {
    let sigma = genus_surface(g)?;
    let removed = sigma.facets()[0].clone();
    let remaining: Vec<Vec<usize>> = sigma.facets().iter().skip(1).cloned().collect();
    let m = SimComplex::from_facets(remaining)?;
    let obj = library_closed("S1")?;
    let bchain = boundary_chain(&m, &fundamental_class(&m, OrientRing::Integer)?)?;
    let rim = rim_cycle(&m, &removed.iter().cloned().collect());
    let attach = circle_attach(&m, &bchain, &obj, &rim, -1)?;
    Bordism::new(&format!("cap({})", g), m, vec![], vec![attach], true)
}

/// Möbius band as the unoriented bordism `∅ -> S1(5)` (its boundary is a
/// single circle, so it cannot connect two circles).
fn mobius_bordism() -> Result<Bordism> {
    let m = mobius_band();
    let obj = library_closed("S1(5)")?;
    let rim = rim_cycle(&m, &(0..5).collect());
    let vertex_map: BTreeMap<usize, usize> = (0..5).map(|k| (k, rim[k])).collect();
    Bordism::new(
        "mobius_out",
        m,
        vec![],
        vec![BoundaryAttach {
            object: obj,
            vertex_map,
        }],
        false,
    )
}

/// Solid torus `S1 x D^2` between the empty manifold and the grid torus.
fn solid_torus_bordism(outgoing: bool) -> Result<Bordism> {
    let c3 = cycle_complex(3).unwrap();
    let disk = disk3();
    let (m, st_ids) = ordered_product(&c3, &disk)?;
    let obj = library_closed("T2grid")?;
    let (_, t_ids) = ordered_product(&c3, &c3)?;
    // grid-torus vertex (i, j) -> solid-torus vertex (i, j); the rim
    // vertices of the disk are 0, 1, 2.
    let mut vertex_map = BTreeMap::new();
    for i in 0..3usize {
        for j in 0..3usize {
            vertex_map.insert(t_ids[&(i, j)], st_ids[&(i, j)]);
        }
    }
    let attach = BoundaryAttach {
        object: obj,
        vertex_map,
    };
    if outgoing {
        Bordism::new("solidtorus_out", m, vec![], vec![attach], true)
    } else {
        Bordism::new("solidtorus_in", m, vec![attach], vec![], true)
    }
}

/// Interval as the oriented bordism `pt -> pt`.
fn interval_bordism() -> Result<Bordism> {
    let m = path_complex(1);
    let pt = library_closed("point")?;
    let inc = BoundaryAttach {
        object: pt.clone(),
        vertex_map: BTreeMap::from([(0, 0)]),
    };
    let out = BoundaryAttach {
        object: pt,
        vertex_map: BTreeMap::from([(0, 1)]),
    };
    Bordism::new("interval", m, vec![inc], vec![out], true)
}

pub fn library_bordism(name: &str) -> Result<Bordism> {
    if let Some(inner) = name.strip_prefix("cyl(").and_then(|s| s.strip_suffix(')')) {
        return cylinder_bordism(inner);
    }
    if let Some(inner) = name
        .strip_prefix("closed(")
        .and_then(|s| s.strip_suffix(')'))
    {
        let m = library_complex(inner)?;
        let oriented = fundamental_class(&m, OrientRing::Integer).is_ok();
        return Bordism::closed(name, m, oriented);
    }
    if let Some(args) = name.strip_prefix("cap(").and_then(|s| s.strip_suffix(')')) {
        let g: usize = args
            .parse()
            .map_err(|_| Error::UnknownManifold(name.into()))?;
        return cap_bordism(g);
    }
    match name {
        "interval" => interval_bordism(),
        "disk_out" => disk_bordism(true),
        "disk_in" => disk_bordism(false),
        "pants" => pants_bordism(),
        "mobius_out" => mobius_bordism(),
        "solidtorus_out" => solid_torus_bordism(true),
        "solidtorus_in" => solid_torus_bordism(false),
        _ => Err(Error::UnknownManifold(name.into())),
    }
}

/// Names understood by `library_complex` and `library_bordism`.
pub fn library_names() -> (Vec<&'static str>, Vec<&'static str>) {
    (
        vec![
            "point",
            "interval",
            "S1",
            "S1(n)",
            "S2",
            "S3",
            "S4",
            "T2",
            "T2grid",
            "T3",
            "RP2",
            "RP3",
            "klein",
            "mobius",
            "disk",
            "pants",
            "solidtorus",
            "Sigma(g)",
            "L(p,q)",
            "cylinder(name)",
            "sd(name)",
        ],
        vec![
            "interval",
            "cyl(obj)",
            "disk_out",
            "disk_in",
            "pants",
            "cap(g)",
            "mobius_out",
            "solidtorus_out",
            "solidtorus_in",
            "closed(name)",
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::complex::validate_manifold;

    #[test]
    fn closed_library_invariants() {
        // (name, euler characteristic, orientable)
        let cases: Vec<(&str, i64, bool)> = vec![
            ("S1", 0, true),
            ("S1(5)", 0, true),
            ("S2", 2, true),
            ("S3", 0, true),
            ("S4", 2, true),
            ("T2", 0, true),
            ("T2grid", 0, true),
            ("RP2", 1, false),
            ("klein", 0, false),
            ("T3", 0, true),
            ("RP3", 0, true),
            ("L(3,1)", 0, true),
            ("L(5,1)", 0, true),
            ("L(5,2)", 0, true),
            ("L(7,1)", 0, true),
            ("Sigma(2)", -2, true),
            ("Sigma(3)", -4, true),
            ("point", 1, true),
        ];
        for (name, chi, orientable) in cases {
            let k = library_complex(name).unwrap();
            assert_eq!(k.euler_characteristic(), chi, "chi({})", name);
            let rep = validate_manifold(&k, k.dim()).unwrap();
            assert!(
                rep.closed && rep.is_manifold(),
                "{} must be a closed manifold",
                name
            );
            let has_orientation = fundamental_class(&k, OrientRing::Integer).is_ok();
            assert_eq!(has_orientation, orientable, "orientability of {}", name);
            assert!(fundamental_class(&k, OrientRing::Mod2).is_ok());
        }
    }

    #[test]
    fn torus7_counts() {
        let t = library_complex("T2").unwrap();
        assert_eq!(t.num_simplices(0), 7);
        assert_eq!(t.num_simplices(1), 21);
        assert_eq!(t.num_simplices(2), 14);
    }

    #[test]
    fn compact_pieces_have_expected_boundaries() {
        let disk = library_complex("disk").unwrap();
        assert_eq!(disk.boundary_complex().num_simplices(1), 3);
        let mob = library_complex("mobius").unwrap();
        let b = mob.boundary_complex();
        assert_eq!(b.vertex_components().len(), 1);
        assert_eq!(b.num_simplices(1), 5);
        let pants = library_complex("pants").unwrap();
        assert_eq!(pants.boundary_complex().vertex_components().len(), 3);
        assert_eq!(pants.euler_characteristic(), -1);
        let cyl = library_complex("cylinder(S1)").unwrap();
        assert_eq!(cyl.boundary_complex().vertex_components().len(), 2);
        assert_eq!(cyl.num_simplices(0), 6);
        assert_eq!(cyl.num_simplices(2), 6);
        let st = library_complex("solidtorus").unwrap();
        assert_eq!(st.euler_characteristic(), 0);
        assert_eq!(st.boundary_complex().euler_characteristic(), 0);
    }

    #[test]
    fn standard_bordisms_build() {
        for name in [
            "interval",
            "cyl(S1)",
            "cyl(T2grid)",
            "disk_out",
            "disk_in",
            "pants",
            "cap(1)",
            "cap(2)",
            "mobius_out",
            "solidtorus_out",
            "solidtorus_in",
            "closed(S2)",
            "closed(T3)",
            "closed(klein)",
        ] {
            let b = library_bordism(name).unwrap();
            if name == "mobius_out" || name == "closed(klein)" {
                assert!(!b.is_oriented(), "{} is non-orientable", name);
            } else {
                assert!(b.is_oriented(), "{} should be oriented", name);
            }
        }
    }

    #[test]
    fn pants_composes_with_disks() {
        let pants = library_bordism("pants").unwrap();
        let disk = library_bordism("disk_out").unwrap();
        let two_disks = disk.disjoint_union(&disk).unwrap();
        let cap = two_disks.glue(&pants).unwrap();
        // two disks capping the pair of pants leave a disk: chi = 1
        assert_eq!(cap.euler_characteristic(), 1);
        let disk_in = library_bordism("disk_in").unwrap();
        let sphere = cap.glue(&disk_in).unwrap();
        assert_eq!(sphere.euler_characteristic(), 2);
    }

    #[test]
    fn solid_tori_glue_to_a_closed_manifold() {
        let st_out = library_bordism("solidtorus_out").unwrap();
        let st_in = library_bordism("solidtorus_in").unwrap();
        let closed = st_out.glue(&st_in).unwrap();
        assert_eq!(closed.euler_characteristic(), 0);
        assert!(closed.incoming.is_empty() && closed.outgoing.is_empty());
    }

    #[test]
    fn odd_dimension_boundary_euler_halving() {
        for name in ["solidtorus_out", "cyl(T2grid)", "cyl(S2)", "interval"] {
            let b = library_bordism(name).unwrap();
            if b.d % 2 == 1 {
                let boundary_chi = b.incoming_euler() + b.outgoing_euler();
                assert_eq!(2 * b.euler_characteristic(), boundary_chi, "{}", name);
            }
        }
    }
}
