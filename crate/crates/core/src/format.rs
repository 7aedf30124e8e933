//! JSON structure files and Graphviz export.
//!
//! ```json
//! {"elements": ["a", "b", "c"], "relations": [["a", "c"], ["b", "c"]]}
//! ```
//!
//! Each relation `[x, y]` means `x ≤ y`; the reflexive-transitive closure is
//! taken on load.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{members, Poset, Relation, Structure, Topology, MAX_VERTICES};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFile {
    pub elements: Vec<String>,
    pub relations: Vec<(String, String)>,
}

/// A structure together with display names for its points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Named<S> {
    pub names: Vec<String>,
    pub structure: S,
}

impl StructureFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn relation(&self) -> Result<Relation> {
        let n = self.elements.len();
        if n > MAX_VERTICES {
            return Err(Error::TooLarge(n));
        }
        let mut index = HashMap::new();
        for (i, name) in self.elements.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        let lookup = |s: &String| {
            index
                .get(s.as_str())
                .copied()
                .ok_or_else(|| Error::UnknownElement(s.clone()))
        };
        let pairs = self
            .relations
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Relation::from_pairs(n, &pairs)
    }

    /// Describe a structure by its cover pairs, plus a cycle through every
    /// bag with more than one point.
    pub fn from_relation(rel: &Relation, names: Option<&[String]>) -> Self {
        let names = names.map(<[String]>::to_vec).unwrap_or_else(|| default_names(rel.len()));
        let mut relations: Vec<(String, String)> = rel
            .cover_pairs()
            .into_iter()
            .map(|(a, b)| (names[a].clone(), names[b].clone()))
            .collect();
        let topo = Topology::from_relation_unchecked(rel.clone());
        for bag in topo.bags_and_quotient().bags {
            let pts: Vec<usize> = members(bag).collect();
            if pts.len() > 1 {
                for w in 0..pts.len() {
                    let next = pts[(w + 1) % pts.len()];
                    relations.push((names[pts[w]].clone(), names[next].clone()));
                }
            }
        }
        StructureFile {
            elements: names,
            relations,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain strings serialize")
    }
}

/// `a`, `b`, ..., `z`, then `v26`, `v27`, ...
pub fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("v{i}")
            }
        })
        .collect()
}

/// Load a partial order; cycles are rejected.
pub fn load_poset(text: &str) -> Result<Named<Poset>> {
    let file = StructureFile::parse(text)?;
    let structure = Poset::new(file.relation()?)?;
    Ok(Named {
        names: file.elements,
        structure,
    })
}

/// Load a quasi-order; cycles collapse into bags.
pub fn load_topology(text: &str) -> Result<Named<Topology>> {
    let file = StructureFile::parse(text)?;
    let structure = Topology::new(file.relation()?)?;
    Ok(Named {
        names: file.elements,
        structure,
    })
}

/// Graphviz source for the cover graph, drawn bottom to top. Bags of a
/// topology become single nodes labeled with their members.
pub fn to_dot<S: Structure>(s: &S, names: Option<&[String]>) -> String {
    let rel = s.relation();
    let names = names.map(<[String]>::to_vec).unwrap_or_else(|| default_names(rel.len()));
    let topo = Topology::from_relation_unchecked(rel.clone());
    let bags = topo.bags_and_quotient();
    let labels: Vec<String> = bags
        .bags
        .iter()
        .map(|&b| {
            let parts: Vec<&str> = members(b).map(|x| names[x].as_str()).collect();
            parts.join(",")
        })
        .collect();
    bags.quotient.hasse().to_dot(Some(&labels))
}
