use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::complex::{validate_manifold, SimComplex};
use super::orientation::{
    boundary_chain, fundamental_class, sort_sign, transport_class, verify_orientation, OrientRing,
    Orientation,
};
use crate::error::{Error, Result};

/// A closed (d-1)-manifold serving as a bordism boundary label, carrying its
/// chosen fundamental class when orientable.
#[derive(Debug)]
pub struct ClosedObject {
    pub name: String,
    pub complex: Arc<SimComplex>,
    pub orientation: Option<Orientation>,
}

impl PartialEq for ClosedObject {
    fn eq(&self, other: &Self) -> bool {
        self.complex == other.complex && self.orientation == other.orientation
    }
}
impl Eq for ClosedObject {}

impl ClosedObject {
    pub fn new(name: &str, complex: SimComplex) -> Result<Arc<Self>> {
        let d = complex.dim();
        let rep = validate_manifold(&complex, d)?;
        if !rep.closed || !rep.is_manifold() {
            return Err(Error::InvalidComplex(format!(
                "object {} is not a closed manifold",
                name
            )));
        }
        let orientation = fundamental_class(&complex, OrientRing::Integer).ok();
        Ok(Arc::new(ClosedObject {
            name: name.to_string(),
            complex: Arc::new(complex),
            orientation,
        }))
    }

    /// The same manifold with the opposite fundamental class.
    pub fn reversed(&self) -> Arc<ClosedObject> {
        Arc::new(ClosedObject {
            name: format!("{}^rev", self.name),
            complex: self.complex.clone(),
            orientation: self.orientation.as_ref().map(|o| o.negate()),
        })
    }

    pub fn dim(&self) -> i64 {
        self.complex.dim()
    }
}

/// One boundary component identification: a vertex bijection from the object
/// onto a subcomplex of the bordism boundary.
#[derive(Debug, Clone)]
pub struct BoundaryAttach {
    pub object: Arc<ClosedObject>,
    /// object vertex -> bordism vertex
    pub vertex_map: BTreeMap<usize, usize>,
}

/// A compact triangulated d-manifold with labeled incoming and outgoing
/// boundary, optionally integer-oriented.  When oriented, the boundary of
/// the fundamental class restricts to `+[N]` on incoming components and
/// `-[N']` on outgoing ones.
#[derive(Debug, Clone)]
pub struct Bordism {
    pub name: String,
    pub m: Arc<SimComplex>,
    pub d: i64,
    pub incoming: Vec<BoundaryAttach>,
    pub outgoing: Vec<BoundaryAttach>,
    pub orientation: Option<Orientation>,
}

impl Bordism {
    pub fn new(
        name: &str,
        m: SimComplex,
        incoming: Vec<BoundaryAttach>,
        outgoing: Vec<BoundaryAttach>,
        oriented: bool,
    ) -> Result<Bordism> {
        Bordism::build(name, Arc::new(m), incoming, outgoing, oriented)
    }

    fn build(
        name: &str,
        m: Arc<SimComplex>,
        incoming: Vec<BoundaryAttach>,
        outgoing: Vec<BoundaryAttach>,
        oriented: bool,
    ) -> Result<Bordism> {
        let d = m.dim();
        if d < 1 {
            return Err(Error::InvalidBordism(
                "bordisms must have dimension >= 1".into(),
            ));
        }
        let rep = validate_manifold(&m, d)?;
        if !rep.is_manifold() {
            return Err(Error::NotManifold(format!(
                "bordism {} fails the link test",
                name
            )));
        }

        let co = m.ridge_cofacets();
        let boundary_ridges: BTreeSet<usize> = (0..m.num_simplices(d - 1))
            .filter(|&i| co[i].len() == 1)
            .collect();
        let mut covered: BTreeSet<usize> = BTreeSet::new();
        let mut attach_images: Vec<BTreeSet<usize>> = Vec::new();
        for attach in incoming.iter().chain(outgoing.iter()) {
            if attach.object.dim() != d - 1 {
                return Err(Error::InvalidBordism(format!(
                    "object {} has dimension {}, expected {}",
                    attach.object.name,
                    attach.object.dim(),
                    d - 1
                )));
            }
            let image = attach_image_ridges(&attach.object.complex, &attach.vertex_map, &m, d)?;
            for &ri in &image {
                if !boundary_ridges.contains(&ri) {
                    return Err(Error::InvalidBordism(format!(
                        "object {} maps into the interior of {}",
                        attach.object.name, name
                    )));
                }
                if !covered.insert(ri) {
                    return Err(Error::InvalidBordism(format!(
                        "boundary identifications overlap in {}",
                        name
                    )));
                }
            }
            attach_images.push(image);
        }
        if covered != boundary_ridges {
            return Err(Error::InvalidBordism(format!(
                "boundary of {} is not fully labeled ({} of {} ridges)",
                name,
                covered.len(),
                boundary_ridges.len()
            )));
        }

        let orientation = if oriented {
            Some(resolve_orientation(
                name,
                &m,
                &incoming,
                &outgoing,
                &attach_images,
            )?)
        } else {
            None
        };

        Ok(Bordism {
            name: name.to_string(),
            m,
            d,
            incoming,
            outgoing,
            orientation,
        })
    }

    /// A closed d-manifold as the bordism `∅ -> ∅`.
    pub fn closed(name: &str, m: SimComplex, oriented: bool) -> Result<Bordism> {
        Bordism::new(name, m, vec![], vec![], oriented)
    }

    pub fn is_oriented(&self) -> bool {
        self.orientation.is_some()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.m.euler_characteristic()
    }

    pub fn incoming_euler(&self) -> i64 {
        self.incoming
            .iter()
            .map(|a| a.object.complex.euler_characteristic())
            .sum()
    }

    pub fn outgoing_euler(&self) -> i64 {
        self.outgoing
            .iter()
            .map(|a| a.object.complex.euler_characteristic())
            .sum()
    }

    fn interface_objects(attaches: &[BoundaryAttach]) -> Vec<&Arc<ClosedObject>> {
        attaches.iter().map(|a| &a.object).collect()
    }

    /// Pushout composition along the shared middle interface.
    pub fn glue(&self, other: &Bordism) -> Result<Bordism> {
        if self.d != other.d {
            return Err(Error::NotComposable("dimension mismatch".into()));
        }
        let out = Bordism::interface_objects(&self.outgoing);
        let inc = Bordism::interface_objects(&other.incoming);
        if out.len() != inc.len() || out.iter().zip(&inc).any(|(a, b)| ***a != ***b) {
            return Err(Error::NotComposable(format!(
                "outgoing interface of {} does not match incoming interface of {}",
                self.name, other.name
            )));
        }

        // Relabel other.m: seam vertices land on self's outgoing images, the
        // rest get fresh IDs.
        let mut vmap: BTreeMap<usize, usize> = BTreeMap::new();
        for (mine, theirs) in self.outgoing.iter().zip(&other.incoming) {
            for (ov, mv) in &theirs.vertex_map {
                vmap.insert(*mv, mine.vertex_map[ov]);
            }
        }
        let mut next = self.m.vertices().iter().max().copied().unwrap_or(0) + 1;
        for &v in other.m.vertices() {
            vmap.entry(v).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
        }

        let mut facets = self.m.facets().to_vec();
        for f in other.m.facets() {
            let mut g: Vec<usize> = f.iter().map(|v| vmap[v]).collect();
            g.sort_unstable();
            facets.push(g);
        }
        let glued = SimComplex::from_facets(facets)?;

        let seam_chi: i64 = self
            .outgoing
            .iter()
            .map(|a| a.object.complex.euler_characteristic())
            .sum();
        let expect = self.m.euler_characteristic() + other.m.euler_characteristic() - seam_chi;
        if glued.euler_characteristic() != expect {
            return Err(Error::Internal(format!(
                "glued Euler characteristic {} differs from expected {}",
                glued.euler_characteristic(),
                expect
            )));
        }

        // Concatenate the two orientations and confirm the seam signs cancel.
        if let (Some(o1), Some(o2)) = (&self.orientation, &other.orientation) {
            let mut signs = vec![0i8; glued.facets().len()];
            let pos = |f: &Vec<usize>| glued.facets().binary_search(f).unwrap();
            for (fi, f) in self.m.facets().iter().enumerate() {
                signs[pos(f)] = o1.signs[fi];
            }
            for (fi, f) in other.m.facets().iter().enumerate() {
                let img: Vec<usize> = f.iter().map(|v| vmap[v]).collect();
                let s = sort_sign(&img);
                let mut sorted = img;
                sorted.sort_unstable();
                signs[pos(&sorted)] = o2.signs[fi] * s;
            }
            let o = Orientation {
                ring: OrientRing::Integer,
                signs,
            };
            verify_orientation(&glued, &o).map_err(|_| {
                Error::InvalidBordism(format!(
                    "orientation conflict across the seam gluing {} to {}",
                    self.name, other.name
                ))
            })?;
        }

        let outgoing: Vec<BoundaryAttach> = other
            .outgoing
            .iter()
            .map(|a| BoundaryAttach {
                object: a.object.clone(),
                vertex_map: a.vertex_map.iter().map(|(k, v)| (*k, vmap[v])).collect(),
            })
            .collect();
        let oriented = self.is_oriented() && other.is_oriented();
        Bordism::build(
            &format!("({} ; {})", self.name, other.name),
            Arc::new(glued),
            self.incoming.clone(),
            outgoing,
            oriented,
        )
    }

    /// Disjoint union, with `other` relabeled to fresh vertex IDs.
    pub fn disjoint_union(&self, other: &Bordism) -> Result<Bordism> {
        if self.d != other.d {
            return Err(Error::NotComposable("dimension mismatch".into()));
        }
        let offset = self.m.vertices().iter().max().copied().unwrap_or(0) + 1;
        let mut facets = self.m.facets().to_vec();
        for f in other.m.facets() {
            facets.push(f.iter().map(|v| v + offset).collect());
        }
        let m = SimComplex::from_facets(facets)?;
        let shift = |attaches: &[BoundaryAttach]| -> Vec<BoundaryAttach> {
            attaches
                .iter()
                .map(|a| BoundaryAttach {
                    object: a.object.clone(),
                    vertex_map: a.vertex_map.iter().map(|(k, v)| (*k, v + offset)).collect(),
                })
                .collect()
        };
        let mut incoming = self.incoming.clone();
        incoming.extend(shift(&other.incoming));
        let mut outgoing = self.outgoing.clone();
        outgoing.extend(shift(&other.outgoing));
        Bordism::new(
            &format!("({} | {})", self.name, other.name),
            m,
            incoming,
            outgoing,
            self.is_oriented() && other.is_oriented(),
        )
    }
}

/// Indices (in `m`) of the (d-1)-simplices in the image of an attach map;
/// also checks the map is simplicial and injective.
fn attach_image_ridges(
    n: &SimComplex,
    vmap: &BTreeMap<usize, usize>,
    m: &SimComplex,
    d: i64,
) -> Result<BTreeSet<usize>> {
    let verts: BTreeSet<usize> = n.vertices().iter().cloned().collect();
    if vmap.keys().cloned().collect::<BTreeSet<_>>() != verts {
        return Err(Error::InvalidBordism("vertex map domain mismatch".into()));
    }
    let image: BTreeSet<usize> = vmap.values().cloned().collect();
    if image.len() != vmap.len() {
        return Err(Error::InvalidBordism("vertex map is not injective".into()));
    }
    let mut out = BTreeSet::new();
    for f in n.facets() {
        let mut img: Vec<usize> = f.iter().map(|v| vmap[v]).collect();
        img.sort_unstable();
        let idx = m.simplex_index(d - 1, &img).ok_or_else(|| {
            Error::InvalidBordism(format!("image simplex {:?} is not in the bordism", img))
        })?;
        out.insert(idx);
    }
    Ok(out)
}

/// Chooses per-component signs of the fundamental class so that the induced
/// boundary class restricts to `+[N]` on incoming and `-[N']` on outgoing
/// attaches.
fn resolve_orientation(
    name: &str,
    m: &SimComplex,
    incoming: &[BoundaryAttach],
    outgoing: &[BoundaryAttach],
    attach_images: &[BTreeSet<usize>],
) -> Result<Orientation> {
    let d = m.dim();
    let base = fundamental_class(m, OrientRing::Integer)?;
    let bchain = boundary_chain(m, &base)?;

    // facet components over interior ridges
    let nf = m.facets().len();
    let co = m.ridge_cofacets();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nf];
    for ridge in &co {
        if ridge.len() == 2 {
            adj[ridge[0]].push(ridge[1]);
            adj[ridge[1]].push(ridge[0]);
        }
    }
    let mut comp = vec![usize::MAX; nf];
    let mut ncomp = 0;
    for root in 0..nf {
        if comp[root] != usize::MAX {
            continue;
        }
        let mut stack = vec![root];
        while let Some(f) = stack.pop() {
            if comp[f] != usize::MAX {
                continue;
            }
            comp[f] = ncomp;
            for &g in &adj[f] {
                if comp[g] == usize::MAX {
                    stack.push(g);
                }
            }
        }
        ncomp += 1;
    }

    let mut flip: Vec<Option<i8>> = vec![None; ncomp];
    let all: Vec<(&BoundaryAttach, i8)> = incoming
        .iter()
        .map(|a| (a, 1i8))
        .chain(outgoing.iter().map(|a| (a, -1i8)))
        .collect();
    for ((attach, want), image) in all.iter().zip(attach_images) {
        let obj_orient = attach.object.orientation.as_ref().ok_or_else(|| {
            Error::OrientationRequired(format!(
                "object {} is non-orientable; {} cannot be oriented",
                attach.object.name, name
            ))
        })?;
        let t = transport_class(
            &attach.object.complex,
            obj_orient,
            &attach.vertex_map,
            m,
            d - 1,
        )?;
        // ratio of the boundary restriction against the transported class
        let mut ratio: Option<i8> = None;
        for (&idx, &c) in &t {
            let b = bchain.get(&idx).copied().unwrap_or(0);
            if c == 0 || (b != c && b != -c) {
                return Err(Error::InvalidBordism(format!(
                    "boundary class of {} does not restrict to the class of {}",
                    name, attach.object.name
                )));
            }
            let r = if b == c { 1 } else { -1 };
            match ratio {
                None => ratio = Some(r),
                Some(prev) if prev != r => {
                    return Err(Error::InvalidBordism(format!(
                        "inconsistent boundary restriction for object {} in {}",
                        attach.object.name, name
                    )))
                }
                _ => {}
            }
        }
        let ratio = ratio.ok_or_else(|| {
            Error::InvalidBordism(format!("object {} has empty image", attach.object.name))
        })?;
        let ridge = *image.iter().next().unwrap();
        let cid = comp[co[ridge][0]];
        let needed = if ratio == *want { 1 } else { -1 };
        match flip[cid] {
            None => flip[cid] = Some(needed),
            Some(prev) if prev != needed => {
                return Err(Error::InvalidBordism(format!(
                    "orientation labels of {} conflict: boundary cannot be +[N] in / -[N'] out",
                    name
                )))
            }
            _ => {}
        }
    }

    let signs: Vec<i8> = base
        .signs
        .iter()
        .enumerate()
        .map(|(f, &s)| s * flip[comp[f]].unwrap_or(1))
        .collect();
    let o = Orientation {
        ring: OrientRing::Integer,
        signs,
    };
    verify_orientation(m, &o)?;
    Ok(o)
}
