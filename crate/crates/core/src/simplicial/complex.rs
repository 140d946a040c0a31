use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// A finite ordered simplicial complex.  Vertices are arbitrary distinct
/// nonnegative integer IDs; the global vertex order is integer order, and
/// every stored simplex is strictly increasing in it.
#[derive(Debug)]
pub struct SimComplex {
    id: u64,
    dim: i64,
    vertices: Vec<usize>,
    /// faces[k] = sorted list of all k-simplices.
    faces: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    facets: Vec<Vec<usize>>,
}

impl PartialEq for SimComplex {
    fn eq(&self, other: &Self) -> bool {
        self.facets == other.facets
    }
}
impl Eq for SimComplex {}

impl SimComplex {
    /// The empty complex (dimension -1).
    pub fn empty() -> Self {
        SimComplex {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            dim: -1,
            vertices: vec![],
            faces: vec![],
            index: vec![],
            facets: vec![],
        }
    }

    /// Builds a complex from its top simplices.  Facets are sorted; duplicate
    /// facets or repeated vertices within a facet are rejected.
    pub fn from_facets(mut facets: Vec<Vec<usize>>) -> Result<Self> {
        if facets.is_empty() {
            return Ok(SimComplex::empty());
        }
        for f in facets.iter_mut() {
            f.sort_unstable();
            let before = f.len();
            f.dedup();
            if f.len() != before {
                return Err(Error::InvalidComplex(format!(
                    "facet {:?} has a repeated vertex",
                    f
                )));
            }
        }
        facets.sort();
        for w in facets.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidComplex(format!("duplicate facet {:?}", w[0])));
            }
        }
        // Drop facets that are faces of larger ones (keeps the list maximal).
        let sets: Vec<BTreeSet<usize>> =
            facets.iter().map(|f| f.iter().cloned().collect()).collect();
        let maximal: Vec<Vec<usize>> = facets
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                !sets
                    .iter()
                    .enumerate()
                    .any(|(j, s)| *i != j && sets[*i].is_subset(s))
            })
            .map(|(_, f)| f.clone())
            .collect();
        let facets = maximal;

        let dim = facets.iter().map(|f| f.len() as i64 - 1).max().unwrap();
        let mut faces: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); (dim + 1) as usize];
        for f in &facets {
            collect_subsets(f, &mut faces);
        }
        let faces: Vec<Vec<Vec<usize>>> =
            faces.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = faces
            .iter()
            .map(|list| {
                list.iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), i))
                    .collect::<HashMap<_, _>>()
            })
            .collect();
        let vertices: Vec<usize> = faces[0].iter().map(|v| v[0]).collect();
        Ok(SimComplex {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            dim,
            vertices,
            faces,
            index,
            facets,
        })
    }

    pub fn cache_id(&self) -> u64 {
        self.id
    }

    pub fn dim(&self) -> i64 {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.dim < 0
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn simplices(&self, k: i64) -> &[Vec<usize>] {
        if k < 0 || k > self.dim {
            return &[];
        }
        &self.faces[k as usize]
    }

    pub fn num_simplices(&self, k: i64) -> usize {
        self.simplices(k).len()
    }

    pub fn simplex_index(&self, k: i64, simplex: &[usize]) -> Option<usize> {
        if k < 0 || k > self.dim {
            return None;
        }
        self.index[k as usize].get(simplex).copied()
    }

    pub fn contains_simplex(&self, simplex: &[usize]) -> bool {
        self.simplex_index(simplex.len() as i64 - 1, simplex)
            .is_some()
    }

    /// Alternating sum of face counts.
    pub fn euler_characteristic(&self) -> i64 {
        let mut chi = 0i64;
        for k in 0..=self.dim {
            let c = self.num_simplices(k) as i64;
            if k % 2 == 0 {
                chi += c;
            } else {
                chi -= c;
            }
        }
        chi
    }

    /// True when every simplex of `self` is a simplex of `other`
    /// (shared vertex IDs).
    pub fn is_subcomplex_of(&self, other: &SimComplex) -> bool {
        self.facets.iter().all(|f| other.contains_simplex(f))
    }

    /// For a pure d-complex: map from each (d-1)-simplex index to the facet
    /// indices containing it.
    pub fn ridge_cofacets(&self) -> Vec<Vec<usize>> {
        let d = self.dim;
        let mut out = vec![Vec::new(); self.num_simplices(d - 1)];
        if d < 1 {
            return out;
        }
        for (fi, f) in self.facets.iter().enumerate() {
            for omit in 0..f.len() {
                let ridge: Vec<usize> = f
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != omit)
                    .map(|(_, v)| *v)
                    .collect();
                let ri = self.simplex_index(d - 1, &ridge).unwrap();
                out[ri].push(fi);
            }
        }
        out
    }

    /// Boundary subcomplex: the (d-1)-simplices lying in exactly one facet.
    pub fn boundary_complex(&self) -> SimComplex {
        if self.dim < 1 {
            return SimComplex::empty();
        }
        let co = self.ridge_cofacets();
        let facets: Vec<Vec<usize>> = self
            .simplices(self.dim - 1)
            .iter()
            .enumerate()
            .filter(|(i, _)| co[*i].len() == 1)
            .map(|(_, s)| s.clone())
            .collect();
        SimComplex::from_facets(facets).expect("boundary facets are valid")
    }

    /// Vertex-connected components, as sets of vertices.
    pub fn vertex_components(&self) -> Vec<BTreeSet<usize>> {
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in &self.vertices {
            adj.entry(*v).or_default();
        }
        for e in self.simplices(1) {
            adj.get_mut(&e[0]).unwrap().push(e[1]);
            adj.get_mut(&e[1]).unwrap().push(e[0]);
        }
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut comps = Vec::new();
        for v in &self.vertices {
            if seen.contains(v) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![*v];
            while let Some(x) = stack.pop() {
                if !comp.insert(x) {
                    continue;
                }
                seen.insert(x);
                for y in &adj[&x] {
                    if !comp.contains(y) {
                        stack.push(*y);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// The link of a vertex: all simplices disjoint from `v` whose join with
    /// `v` is a simplex.
    pub fn vertex_link(&self, v: usize) -> SimComplex {
        let mut facets = Vec::new();
        for f in &self.facets {
            if let Ok(pos) = f.binary_search(&v) {
                let link: Vec<usize> = f
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != pos)
                    .map(|(_, w)| *w)
                    .collect();
                if !link.is_empty() {
                    facets.push(link);
                }
            }
        }
        SimComplex::from_facets(facets).expect("link facets are valid")
    }

    /// Restricts to the full subcomplex on the simplices of dimension <= k
    /// contained in the given simplex set (used to carve out boundary pieces).
    pub fn subcomplex_from_facets(&self, facets: Vec<Vec<usize>>) -> Result<SimComplex> {
        let sub = SimComplex::from_facets(facets)?;
        if !sub.is_subcomplex_of(self) {
            return Err(Error::InvalidComplex(
                "subcomplex facets not in complex".into(),
            ));
        }
        Ok(sub)
    }
}

fn collect_subsets(f: &[usize], out: &mut [BTreeSet<Vec<usize>>]) {
    let n = f.len();
    for mask in 1u32..(1 << n) {
        let sub: Vec<usize> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| f[i])
            .collect();
        out[sub.len() - 1].insert(sub);
    }
}

/// Manifold validation report.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub dim: i64,
    pub closed: bool,
    pub boundary_ridges: usize,
    /// Vertex-connected components.
    pub components: usize,
    /// Components whose facet-adjacency graph is disconnected.
    pub pseudo_manifold_failures: usize,
    /// Vertices whose link fails the manifold link test (dim <= 3 only).
    pub link_failures: Vec<usize>,
}

impl ValidationReport {
    pub fn is_manifold(&self) -> bool {
        self.pseudo_manifold_failures == 0 && self.link_failures.is_empty()
    }
}

/// Checks that `k` is a pure d-complex whose ridges lie in at most two
/// facets, and reports boundary, connectivity and link structure.
///
/// A ridge in three or more facets is a hard error; link anomalies are
/// reported in the result.
pub fn validate_manifold(k: &SimComplex, d: i64) -> Result<ValidationReport> {
    if k.is_empty() {
        return Err(Error::InvalidComplex("empty complex".into()));
    }
    if k.dim() != d || k.facets().iter().any(|f| f.len() as i64 != d + 1) {
        return Err(Error::NotManifold(format!(
            "complex is not pure of dimension {}",
            d
        )));
    }
    let mut boundary_ridges = 0;
    if d >= 1 {
        for (ri, co) in k.ridge_cofacets().iter().enumerate() {
            match co.len() {
                1 => boundary_ridges += 1,
                2 => {}
                n => {
                    return Err(Error::NotManifold(format!(
                        "ridge {:?} lies in {} facets",
                        k.simplices(d - 1)[ri],
                        n
                    )))
                }
            }
        }
    }

    let comps = k.vertex_components();
    let mut pm_failures = 0;
    if d >= 1 {
        for comp in &comps {
            let facet_ids: Vec<usize> = k
                .facets()
                .iter()
                .enumerate()
                .filter(|(_, f)| comp.contains(&f[0]))
                .map(|(i, _)| i)
                .collect();
            if !facet_graph_connected(k, &facet_ids) {
                pm_failures += 1;
            }
        }
    }

    let mut link_failures = Vec::new();
    if (1..=3).contains(&d) {
        for &v in k.vertices() {
            if !link_ok(&k.vertex_link(v), d - 1) {
                link_failures.push(v);
            }
        }
    }

    Ok(ValidationReport {
        dim: d,
        closed: boundary_ridges == 0,
        boundary_ridges,
        components: comps.len(),
        pseudo_manifold_failures: pm_failures,
        link_failures,
    })
}

fn facet_graph_connected(k: &SimComplex, facet_ids: &[usize]) -> bool {
    if facet_ids.len() <= 1 {
        return true;
    }
    let idset: BTreeSet<usize> = facet_ids.iter().cloned().collect();
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for co in k.ridge_cofacets() {
        if co.len() == 2 && idset.contains(&co[0]) && idset.contains(&co[1]) {
            adj.entry(co[0]).or_default().push(co[1]);
            adj.entry(co[1]).or_default().push(co[0]);
        }
    }
    let mut seen = BTreeSet::new();
    let mut stack = vec![facet_ids[0]];
    while let Some(f) = stack.pop() {
        if !seen.insert(f) {
            continue;
        }
        if let Some(next) = adj.get(&f) {
            for &g in next {
                if !seen.contains(&g) {
                    stack.push(g);
                }
            }
        }
    }
    seen.len() == facet_ids.len()
}

/// Link test: a vertex link in a d-manifold must be a (d-1)-sphere or
/// (d-1)-disk.  Implemented for d-1 in {0, 1, 2}.
fn link_ok(link: &SimComplex, link_dim: i64) -> bool {
    if link.is_empty() {
        return false;
    }
    match link_dim {
        0 => link.vertices().len() <= 2 && link.dim() == 0,
        1 => {
            if link.dim() != 1 {
                return false;
            }
            // single path or single cycle: all vertex degrees <= 2, connected
            let mut deg: HashMap<usize, usize> = HashMap::new();
            for e in link.simplices(1) {
                *deg.entry(e[0]).or_insert(0) += 1;
                *deg.entry(e[1]).or_insert(0) += 1;
            }
            if link
                .vertices()
                .iter()
                .any(|v| deg.get(v).is_none_or(|&d| d > 2))
            {
                return false;
            }
            link.vertex_components().len() == 1
        }
        2 => {
            // sphere (closed, chi 2) or disk (boundary a single cycle, chi 1)
            let Ok(rep) = validate_manifold(link, 2) else {
                return false;
            };
            if rep.components != 1 || !rep.is_manifold() {
                return false;
            }
            let chi = link.euler_characteristic();
            if rep.closed {
                chi == 2
            } else {
                chi == 1 && link.boundary_complex().vertex_components().len() == 1
            }
        }
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn boundary_of_simplex(n: usize) -> SimComplex {
        // boundary of the n-simplex on vertices 0..=n
        let all: Vec<usize> = (0..=n).collect();
        let facets: Vec<Vec<usize>> = (0..=n)
            .map(|omit| all.iter().filter(|&&v| v != omit).cloned().collect())
            .collect();
        SimComplex::from_facets(facets).unwrap()
    }

    #[test]
    fn sphere_from_tetrahedron_boundary() {
        let s2 = boundary_of_simplex(3);
        assert_eq!(s2.dim(), 2);
        assert_eq!(s2.num_simplices(0), 4);
        assert_eq!(s2.num_simplices(1), 6);
        assert_eq!(s2.num_simplices(2), 4);
        assert_eq!(s2.euler_characteristic(), 2);
        let rep = validate_manifold(&s2, 2).unwrap();
        assert!(rep.closed && rep.is_manifold());
        assert_eq!(rep.components, 1);
    }

    #[test]
    fn single_triangle_has_three_boundary_edges() {
        let t = SimComplex::from_facets(vec![vec![0, 1, 2]]).unwrap();
        let rep = validate_manifold(&t, 2).unwrap();
        assert!(!rep.closed);
        assert_eq!(rep.boundary_ridges, 3);
        let b = t.boundary_complex();
        assert_eq!(b.num_simplices(1), 3);
        assert_eq!(t.euler_characteristic(), 1);
    }

    #[test]
    fn point_has_euler_one() {
        let p = SimComplex::from_facets(vec![vec![0]]).unwrap();
        assert_eq!(p.euler_characteristic(), 1);
        assert!(validate_manifold(&p, 0).unwrap().closed);
    }

    #[test]
    fn ridge_in_three_facets_is_rejected() {
        let k = SimComplex::from_facets(vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]]).unwrap();
        assert!(matches!(
            validate_manifold(&k, 2),
            Err(Error::NotManifold(_))
        ));
    }

    #[test]
    fn pinched_sphere_flagged_by_link_report() {
        // Two tetrahedron boundaries sharing exactly one vertex: every ridge
        // test passes, but the link of the shared vertex is disconnected.
        let mut facets = boundary_of_simplex(3).facets().to_vec();
        // second sphere on vertices {0, 10, 11, 12}
        let second = vec![
            vec![0, 10, 11],
            vec![0, 10, 12],
            vec![0, 11, 12],
            vec![10, 11, 12],
        ];
        facets.extend(second);
        let k = SimComplex::from_facets(facets).unwrap();
        let rep = validate_manifold(&k, 2).unwrap();
        assert_eq!(rep.link_failures, vec![0]);
        assert!(!rep.is_manifold());
    }
}
