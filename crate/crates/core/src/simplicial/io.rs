//! JSON interchange for complexes and bordisms.
//!
//! Format: `{ "dimension": d, "facets": [[v, ...], ...], "incoming":
//! [{"name": obj, "vertex_map": {"objvertex": mvertex, ...}}, ...],
//! "outgoing": [...], "orientation": "integer" | "mod2" | "none" }`.
//! Facets must be sorted ascending; vertex IDs are nonnegative integers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::bordism::{Bordism, BoundaryAttach};
use super::complex::SimComplex;
use super::library::library_closed;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttachFile {
    pub name: String,
    pub vertex_map: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BordismFile {
    pub dimension: i64,
    pub facets: Vec<Vec<usize>>,
    #[serde(default)]
    pub incoming: Vec<AttachFile>,
    #[serde(default)]
    pub outgoing: Vec<AttachFile>,
    #[serde(default = "default_orientation")]
    pub orientation: String,
}

fn default_orientation() -> String {
    "none".to_string()
}

pub fn complex_from_file(json: &str) -> Result<SimComplex> {
    let file: BordismFile =
        serde_json::from_str(json).map_err(|e| Error::InvalidInput(format!("JSON: {}", e)))?;
    check_sorted(&file)?;
    let k = SimComplex::from_facets(file.facets)?;
    if k.dim() != file.dimension {
        return Err(Error::InvalidInput(format!(
            "declared dimension {} but facets have dimension {}",
            file.dimension,
            k.dim()
        )));
    }
    Ok(k)
}

fn check_sorted(file: &BordismFile) -> Result<()> {
    for f in &file.facets {
        if f.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!(
                "facet {:?} is not sorted strictly ascending",
                f
            )));
        }
    }
    Ok(())
}

pub fn bordism_from_file(json: &str) -> Result<Bordism> {
    let file: BordismFile =
        serde_json::from_str(json).map_err(|e| Error::InvalidInput(format!("JSON: {}", e)))?;
    check_sorted(&file)?;
    let k = SimComplex::from_facets(file.facets.clone())?;
    if k.dim() != file.dimension {
        return Err(Error::InvalidInput(format!(
            "declared dimension {} but facets have dimension {}",
            file.dimension,
            k.dim()
        )));
    }
    let parse_attaches = |files: &[AttachFile]| -> Result<Vec<BoundaryAttach>> {
        files
            .iter()
            .map(|a| {
                let object = library_closed(&a.name)?;
                let vertex_map: BTreeMap<usize, usize> = a
                    .vertex_map
                    .iter()
                    .map(|(k, v)| {
                        k.parse::<usize>()
                            .map(|key| (key, *v))
                            .map_err(|_| Error::InvalidInput(format!("bad vertex key {}", k)))
                    })
                    .collect::<Result<_>>()?;
                Ok(BoundaryAttach { object, vertex_map })
            })
            .collect()
    };
    let incoming = parse_attaches(&file.incoming)?;
    let outgoing = parse_attaches(&file.outgoing)?;
    let oriented = match file.orientation.as_str() {
        "integer" => true,
        "mod2" | "none" => false,
        other => {
            return Err(Error::InvalidInput(format!(
                "orientation must be integer|mod2|none, got {}",
                other
            )))
        }
    };
    Bordism::new("file", k, incoming, outgoing, oriented)
}

pub fn complex_to_file(k: &SimComplex, orientation: &str) -> String {
    let file = BordismFile {
        dimension: k.dim(),
        facets: k.facets().to_vec(),
        incoming: vec![],
        outgoing: vec![],
        orientation: orientation.to_string(),
    };
    serde_json::to_string_pretty(&file).expect("serialization cannot fail")
}

pub fn bordism_to_file(b: &Bordism) -> String {
    let conv = |attaches: &[BoundaryAttach]| -> Vec<AttachFile> {
        attaches
            .iter()
            .map(|a| AttachFile {
                name: a.object.name.clone(),
                vertex_map: a
                    .vertex_map
                    .iter()
                    .map(|(k, v)| (k.to_string(), *v))
                    .collect(),
            })
            .collect()
    };
    let file = BordismFile {
        dimension: b.d,
        facets: b.m.facets().to_vec(),
        incoming: conv(&b.incoming),
        outgoing: conv(&b.outgoing),
        orientation: if b.is_oriented() {
            "integer".into()
        } else {
            "none".into()
        },
    };
    serde_json::to_string_pretty(&file).expect("serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::library::library_bordism;

    #[test]
    fn complex_roundtrip() {
        let k = crate::simplicial::library::library_complex("T2").unwrap();
        let json = complex_to_file(&k, "none");
        let k2 = complex_from_file(&json).unwrap();
        assert_eq!(k, k2);
        // identical input gives byte-identical output
        assert_eq!(json, complex_to_file(&k2, "none"));
    }

    #[test]
    fn bordism_roundtrip() {
        let b = library_bordism("pants").unwrap();
        let json = bordism_to_file(&b);
        let b2 = bordism_from_file(&json).unwrap();
        assert_eq!(b.m, b2.m);
        assert_eq!(b2.incoming.len(), 2);
        assert_eq!(b2.outgoing.len(), 1);
        assert!(b2.is_oriented());
    }

    #[test]
    fn unsorted_facets_rejected() {
        let json = r#"{"dimension": 1, "facets": [[1, 0]]}"#;
        assert!(complex_from_file(json).is_err());
    }
}
