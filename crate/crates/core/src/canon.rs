//! Isomorphism classes, automorphism groups and the pairing.
//!
//! Canonical labelings come from an individualize-and-refine search: vertices
//! start in cells keyed by (color, up-degree, down-degree), cells are split
//! until every vertex sees the same number of up- and down-neighbours in
//! every cell, and the first non-singleton cell is individualized branch by
//! branch. The search tree is explored completely, so the leaves sharing the
//! best code are exactly `Aut` applied to the chosen leaf.
//!
//! Topologies are keyed by their bag-size-colored quotient poset, which
//! determines the homeomorphism type.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{bit, members, Kind, Poset, Relation, Structure, Topology, VertexSet};

/// Canonical byte string of an isomorphism class, tagged with its kind.
///
/// Layout: `[kind, k, colors (topologies only, k bytes), k rows as u16 BE]`
/// where `k` is the number of points (posets) or bags (topologies).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ClassKey(Vec<u8>);

impl From<ClassKey> for String {
    fn from(k: ClassKey) -> String {
        k.to_hex()
    }
}

impl TryFrom<String> for ClassKey {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        ClassKey::from_hex(&s)
    }
}

impl fmt::Debug for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl ClassKey {
    /// The unit: the empty structure of the given kind.
    pub fn empty(kind: Kind) -> Self {
        ClassKey(vec![kind.tag(), 0])
    }

    pub fn kind(&self) -> Kind {
        if self.0[0] == 0 {
            Kind::Poset
        } else {
            Kind::Topology
        }
    }

    pub fn is_unit(&self) -> bool {
        self.0[1] == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = hex::decode(s).map_err(|e| Error::BadKey(e.to_string()))?;
        Self::from_bytes(bytes)
    }

    fn from_bytes(bytes: Vec<u8>) -> Result<Self> {
        if bytes.len() < 2 || bytes[0] > 1 {
            return Err(Error::BadKey("bad header".into()));
        }
        let k = bytes[1] as usize;
        let colors = if bytes[0] == 1 { k } else { 0 };
        if bytes.len() != 2 + colors + 2 * k {
            return Err(Error::BadKey("bad length".into()));
        }
        let key = ClassKey(bytes);
        let total: usize = key.sizes().iter().sum();
        if total > crate::poset::MAX_VERTICES {
            return Err(Error::BadKey("too many points".into()));
        }
        let q = key.skeleton();
        if !q.is_reflexive() || !q.is_transitive() || !q.is_antisymmetric() {
            return Err(Error::BadKey("rows are not a partial order".into()));
        }
        Ok(key)
    }

    fn parts(&self) -> (usize, &[u8], &[u8]) {
        let k = self.0[1] as usize;
        match self.kind() {
            Kind::Poset => (k, &[], &self.0[2..]),
            Kind::Topology => (k, &self.0[2..2 + k], &self.0[2 + k..]),
        }
    }

    /// Bag sizes in canonical order (all ones for posets).
    pub fn sizes(&self) -> Vec<usize> {
        let (k, colors, _) = self.parts();
        match self.kind() {
            Kind::Poset => vec![1; k],
            Kind::Topology => colors.iter().map(|&c| c as usize).collect(),
        }
    }

    /// The canonical poset on points (posets) or on bags (topologies).
    fn skeleton(&self) -> Relation {
        let (k, _, rows) = self.parts();
        Relation::from_rows(
            (0..k)
                .map(|i| u16::from_be_bytes([rows[2 * i], rows[2 * i + 1]]))
                .collect(),
        )
    }

    /// Number of points of the structures in this class.
    pub fn vertex_count(&self) -> usize {
        self.sizes().iter().sum()
    }

    /// The canonical representative as a relation on points.
    pub fn relation(&self) -> Relation {
        match self.kind() {
            Kind::Poset => self.skeleton(),
            Kind::Topology => Topology::from_quotient(&self.skeleton(), &self.sizes())
                .relation()
                .clone(),
        }
    }

    pub fn poset(&self) -> Result<Poset> {
        self.expect_kind(Kind::Poset)?;
        Ok(Poset::from_relation_unchecked(self.relation()))
    }

    pub fn topology(&self) -> Result<Topology> {
        self.expect_kind(Kind::Topology)?;
        Ok(Topology::from_relation_unchecked(self.relation()))
    }

    /// The canonical representative as a structure of type `S`.
    pub fn structure<S: Structure>(&self) -> Result<S> {
        self.expect_kind(S::KIND)?;
        Ok(S::from_relation_unchecked(self.relation()))
    }

    fn expect_kind(&self, kind: Kind) -> Result<()> {
        if self.kind() != kind {
            return Err(Error::KindMismatch {
                expected: kind.name(),
                found: self.kind().name(),
            });
        }
        Ok(())
    }

    /// Key of the same structure viewed as a (T0) topology.
    pub fn to_topology(&self) -> ClassKey {
        match self.kind() {
            Kind::Topology => self.clone(),
            Kind::Poset => {
                let k = self.0[1] as usize;
                let mut bytes = vec![Kind::Topology.tag(), k as u8];
                bytes.extend(std::iter::repeat_n(1u8, k));
                bytes.extend_from_slice(&self.0[2..]);
                ClassKey(bytes)
            }
        }
    }

    /// Compact human-readable form: covers of the canonical representative,
    /// with bag sizes for topologies.
    pub fn describe(&self) -> String {
        if self.is_unit() {
            return "1".to_string();
        }
        let q = self.skeleton();
        let covers: Vec<String> = q.cover_pairs().iter().map(|(a, b)| format!("{a}<{b}")).collect();
        match self.kind() {
            Kind::Poset => format!("P{}{{{}}}", q.len(), covers.join(",")),
            Kind::Topology => {
                let sizes: Vec<String> = self.sizes().iter().map(|s| s.to_string()).collect();
                format!(
                    "T{}[{}]{{{}}}",
                    self.vertex_count(),
                    sizes.join(","),
                    covers.join(",")
                )
            }
        }
    }
}

/// Result of a complete canonical search.
struct Search {
    code: Vec<VertexSet>,
    /// Leaves achieving `code`; the first is the canonical labeling.
    leaves: Vec<Vec<usize>>,
}

fn initial_cells(rel: &Relation, colors: &[u8]) -> Vec<Vec<usize>> {
    let n = rel.len();
    let mut keyed: Vec<((u8, u32, u32), usize)> = (0..n)
        .map(|v| {
            (
                (
                    colors[v],
                    rel.up_set(v).count_ones(),
                    rel.down_set(v).count_ones(),
                ),
                v,
            )
        })
        .collect();
    keyed.sort();
    group_sorted(keyed)
}

fn group_sorted<K: PartialEq>(keyed: Vec<(K, usize)>) -> Vec<Vec<usize>> {
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut last: Option<K> = None;
    for (k, v) in keyed {
        if last.as_ref() == Some(&k) {
            cells.last_mut().expect("nonempty").push(v);
        } else {
            cells.push(vec![v]);
            last = Some(k);
        }
    }
    cells
}

/// Split cells until the partition is equitable with respect to both the
/// up- and down-relations.
fn refine(rel: &Relation, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let downs: Vec<VertexSet> = (0..rel.len()).map(|v| rel.down_set(v)).collect();
    loop {
        let masks: Vec<VertexSet> = cells
            .iter()
            .map(|c| c.iter().fold(0, |acc, &v| acc | bit(v)))
            .collect();
        let mut changed = false;
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let keyed: Vec<(Vec<u8>, usize)> = cell
                .iter()
                .map(|&v| {
                    let sig = masks
                        .iter()
                        .flat_map(|&m| {
                            [
                                (rel.up_set(v) & m).count_ones() as u8,
                                (downs[v] & m).count_ones() as u8,
                            ]
                        })
                        .collect();
                    (sig, v)
                })
                .collect();
            let mut keyed = keyed;
            keyed.sort();
            let groups = group_sorted(keyed);
            changed |= groups.len() > 1;
            next.extend(groups);
        }
        cells = next;
        if !changed {
            return cells;
        }
    }
}

fn leaf_code(rel: &Relation, labeling: &[usize]) -> Vec<VertexSet> {
    let mut code = vec![0; rel.len()];
    for (i, &li) in labeling.iter().enumerate() {
        code[li] = members(rel.up_set(i)).fold(0, |acc, j| acc | bit(labeling[j]));
    }
    code
}

fn descend(rel: &Relation, cells: Vec<Vec<usize>>, best: &mut Option<Search>) {
    let cells = refine(rel, cells);
    match cells.iter().position(|c| c.len() > 1) {
        Some(idx) => {
            for &v in &cells[idx] {
                let mut split = cells.clone();
                let rest: Vec<usize> = cells[idx].iter().copied().filter(|&w| w != v).collect();
                split[idx] = vec![v];
                split.insert(idx + 1, rest);
                descend(rel, split, best);
            }
        }
        None => {
            let mut labeling = vec![0; rel.len()];
            for (pos, cell) in cells.iter().enumerate() {
                labeling[cell[0]] = pos;
            }
            let code = leaf_code(rel, &labeling);
            match best {
                Some(b) if code > b.code => {}
                Some(b) if code == b.code => b.leaves.push(labeling),
                _ => {
                    *best = Some(Search {
                        code,
                        leaves: vec![labeling],
                    })
                }
            }
        }
    }
}

fn search(rel: &Relation, colors: &[u8]) -> Search {
    if rel.is_empty() {
        return Search {
            code: Vec::new(),
            leaves: vec![Vec::new()],
        };
    }
    let mut best = None;
    descend(rel, initial_cells(rel, colors), &mut best);
    best.expect("search visits at least one leaf")
}

fn colors_in_canonical_order(colors: &[u8], labeling: &[usize]) -> Vec<u8> {
    let mut out = vec![0; colors.len()];
    for (v, &pos) in labeling.iter().enumerate() {
        out[pos] = colors[v];
    }
    out
}

fn encode(kind: Kind, colors: Option<&[u8]>, code: &[VertexSet]) -> ClassKey {
    let mut bytes = vec![kind.tag(), code.len() as u8];
    if let Some(c) = colors {
        bytes.extend_from_slice(c);
    }
    for row in code {
        bytes.extend_from_slice(&row.to_be_bytes());
    }
    ClassKey(bytes)
}

/// Canonical key of a vertex-colored relation, together with the labeling
/// (`labeling[v]` = canonical position of `v`). Colors are part of the key.
pub fn colored_canonical_form(rel: &Relation, colors: &[u8]) -> (Vec<u8>, Vec<usize>) {
    let s = search(rel, colors);
    let labeling = s.leaves[0].clone();
    let mut bytes = colors_in_canonical_order(colors, &labeling);
    for row in &s.code {
        bytes.extend_from_slice(&row.to_be_bytes());
    }
    (bytes, labeling)
}

/// Canonical key and the labeling carrying `s` onto the class
/// representative: `s.relabel(&labeling)` equals `key.structure()`.
pub fn canonical_form<S: Structure>(s: &S) -> (ClassKey, Vec<usize>) {
    let rel = s.relation();
    match S::KIND {
        Kind::Poset => {
            let found = search(rel, &vec![0; rel.len()]);
            let labeling = found.leaves[0].clone();
            (encode(Kind::Poset, None, &found.code), labeling)
        }
        Kind::Topology => {
            let topo = Topology::from_relation_unchecked(rel.clone());
            let bags = topo.bags_and_quotient();
            let sizes: Vec<u8> = bags.bags.iter().map(|b| b.count_ones() as u8).collect();
            let found = search(bags.quotient.relation(), &sizes);
            let bag_pos = &found.leaves[0];
            let canon_sizes = colors_in_canonical_order(&sizes, bag_pos);
            let mut offsets = vec![0usize; sizes.len()];
            for pos in 1..sizes.len() {
                offsets[pos] = offsets[pos - 1] + canon_sizes[pos - 1] as usize;
            }
            let mut labeling = vec![0; rel.len()];
            for (b, &mask) in bags.bags.iter().enumerate() {
                for (rank, x) in members(mask).enumerate() {
                    labeling[x] = offsets[bag_pos[b]] + rank;
                }
            }
            (
                encode(Kind::Topology, Some(&canon_sizes), &found.code),
                labeling,
            )
        }
    }
}

pub fn class_key<S: Structure>(s: &S) -> ClassKey {
    canonical_form(s).0
}

/// Automorphism group of a structure, materialized element by element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroupData {
    pub n: usize,
    /// Every group element as a vertex map `v -> g[v]`, sorted; the identity
    /// comes first.
    pub elements: Vec<Vec<usize>>,
    pub generators: Vec<Vec<usize>>,
    /// Orbits of the group on vertices, ordered by smallest member.
    pub orbits: Vec<VertexSet>,
    /// `stabilizer_orders[v] = |Aut_v|`.
    pub stabilizer_orders: Vec<usize>,
}

impl PermGroupData {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn orbit_of(&self, v: usize) -> VertexSet {
        *self
            .orbits
            .iter()
            .find(|&&o| o & bit(v) != 0)
            .expect("orbits cover the carrier")
    }

    fn from_elements(n: usize, mut elements: Vec<Vec<usize>>) -> Self {
        elements.sort();
        elements.dedup();
        let mut orbits: Vec<VertexSet> = Vec::new();
        for v in 0..n {
            if orbits.iter().all(|&o| o & bit(v) == 0) {
                orbits.push(elements.iter().fold(0, |acc, g| acc | bit(g[v])));
            }
        }
        let stabilizer_orders = (0..n)
            .map(|v| elements.iter().filter(|g| g[v] == v).count())
            .collect();
        let generators = greedy_generators(&elements);
        PermGroupData {
            n,
            elements,
            generators,
            orbits,
            stabilizer_orders,
        }
    }
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // (a . b)(v) = a(b(v))
    b.iter().map(|&x| a[x]).collect()
}

fn greedy_generators(elements: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut gens: Vec<Vec<usize>> = Vec::new();
    let mut span: HashSet<Vec<usize>> = elements.iter().take(1).cloned().collect();
    for g in elements {
        if span.contains(g) {
            continue;
        }
        gens.push(g.clone());
        let mut frontier: Vec<Vec<usize>> = span.iter().cloned().collect();
        while let Some(h) = frontier.pop() {
            for s in &gens {
                let p = compose(s, &h);
                if span.insert(p.clone()) {
                    frontier.push(p);
                }
            }
        }
    }
    gens
}

fn automorphisms_of(rel: &Relation, colors: &[u8]) -> PermGroupData {
    let s = search(rel, colors);
    let first = &s.leaves[0];
    let mut inverse = vec![0; first.len()];
    for (v, &p) in first.iter().enumerate() {
        inverse[p] = v;
    }
    let elements = s.leaves.iter().map(|lab| compose(&inverse, lab)).collect();
    PermGroupData::from_elements(rel.len(), elements)
}

/// Automorphisms of a structure (homeomorphisms for topologies).
pub fn automorphisms<S: Structure>(s: &S) -> PermGroupData {
    let rel = s.relation();
    automorphisms_of(rel, &vec![0; rel.len()])
}

/// Automorphisms preserving a vertex coloring.
pub fn colored_automorphisms(rel: &Relation, colors: &[u8]) -> PermGroupData {
    automorphisms_of(rel, colors)
}

/// `sigma(P) = |Aut(P)|`.
pub fn symmetry_factor<S: Structure>(s: &S) -> u64 {
    let rel = s.relation();
    search(rel, &vec![0; rel.len()]).leaves.len() as u64
}

/// Symmetry factor of the class representative of `key`.
pub fn key_symmetry_factor(key: &ClassKey) -> u64 {
    let rel = key.relation();
    search(&rel, &vec![0; rel.len()]).leaves.len() as u64
}

/// Number of isomorphisms between `q` and `r`.
pub fn pairing<S: Structure>(q: &S, r: &S) -> u64 {
    if class_key(q) == class_key(r) {
        symmetry_factor(q)
    } else {
        0
    }
}

/// Exhaustive reference implementations for small structures.
pub mod oracle {
    use super::*;

    /// Heap's algorithm over all permutations of `0..n`.
    pub fn permutations(n: usize) -> Vec<Vec<usize>> {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut out = vec![perm.clone()];
        let mut c = vec![0; n];
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                out.push(perm.clone());
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        out
    }

    /// Smallest code over all relabelings, with the colors in that order.
    pub fn brute_force_code(rel: &Relation, colors: &[u8]) -> (Vec<u8>, Vec<VertexSet>) {
        permutations(rel.len())
            .into_iter()
            .map(|p| {
                (
                    colors_in_canonical_order(colors, &p),
                    leaf_code(rel, &p),
                )
            })
            .min()
            .unwrap_or_default()
    }

    /// Count of permutations preserving the relation in both directions.
    pub fn brute_force_automorphism_count(rel: &Relation) -> usize {
        permutations(rel.len())
            .into_iter()
            .filter(|p| rel.permute(p) == *rel)
            .count()
    }

    /// Isomorphism by trying every bijection.
    pub fn brute_force_isomorphic(a: &Relation, b: &Relation) -> bool {
        a.len() == b.len() && permutations(a.len()).iter().any(|p| a.permute(p) == *b)
    }

    /// Distinct brute-force codes among a family of relations.
    pub fn distinct_classes<'a>(rels: impl IntoIterator<Item = &'a Relation>) -> usize {
        rels.into_iter()
            .map(|r| brute_force_code(r, &vec![0; r.len()]))
            .collect::<BTreeSet<_>>()
            .len()
    }
}

#[cfg(test)]
mod tests {
    use super::oracle::*;
    use super::*;

    fn wedge() -> Poset {
        Poset::from_pairs(3, &[(0, 2), (1, 2)]).unwrap()
    }
    fn vee() -> Poset {
        Poset::from_pairs(3, &[(0, 1), (0, 2)]).unwrap()
    }
    fn diamond() -> Poset {
        Poset::from_pairs(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn relabeling_invariance() {
        let c = Poset::chain(2);
        let swapped = Poset::from_pairs(2, &[(1, 0)]).unwrap();
        assert_eq!(class_key(&c), class_key(&swapped));
        assert_ne!(class_key(&vee()), class_key(&wedge()));
        let keys: BTreeSet<_> = permutations(3)
            .iter()
            .map(|p| class_key(&wedge().relabel(p)))
            .collect();
        assert_eq!(keys.len(), 1);
    }

    #[test]
    fn labeling_reaches_representative() {
        for p in [wedge(), vee(), diamond(), Poset::chain(4)] {
            let (key, lab) = canonical_form(&p);
            assert_eq!(p.relabel(&lab), key.poset().unwrap());
        }
        let t = Topology::from_pairs(4, &[(0, 2), (2, 0), (1, 3), (0, 3)]).unwrap();
        let (key, lab) = canonical_form(&t);
        assert_eq!(t.relabel(&lab), key.topology().unwrap());
    }

    #[test]
    fn symmetry_factors() {
        assert_eq!(symmetry_factor(&Poset::point()), 1);
        assert_eq!(symmetry_factor(&wedge()), 2);
        assert_eq!(brute_force_automorphism_count(wedge().relation()), 2);
        assert_eq!(symmetry_factor(&diamond()), 2);
        assert_eq!(brute_force_automorphism_count(diamond().relation()), 2);
        assert_eq!(symmetry_factor(&Poset::antichain(5)), 120);
        assert_eq!(symmetry_factor(&Topology::bag(3)), 6);
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&Poset::point(), &Poset::point()), 1);
        assert_eq!(pairing(&wedge(), &wedge()), 2);
        assert_eq!(pairing(&Poset::chain(2), &wedge()), 0);
    }

    #[test]
    fn group_data() {
        let g = automorphisms(&Poset::antichain(3));
        assert_eq!(g.order(), 6);
        assert_eq!(g.elements[0], vec![0, 1, 2]);
        assert_eq!(g.orbits, vec![0b111]);
        assert_eq!(g.stabilizer_orders, vec![2, 2, 2]);
        assert!(g.generators.len() <= 2);
        let d = automorphisms(&diamond());
        assert_eq!(d.orbits, vec![0b0001, 0b0110, 0b1000]);
        for v in 0..4 {
            assert_eq!(d.orbit_of(v).count_ones() as usize * d.stabilizer_orders[v], d.order());
        }
    }

    #[test]
    fn key_roundtrip() {
        let k = class_key(&diamond());
        assert_eq!(ClassKey::from_hex(&k.to_hex()).unwrap(), k);
        assert!(ClassKey::from_hex("zz").is_err());
        assert!(ClassKey::from_hex("0002").is_err());
        assert_eq!(class_key(&Poset::empty()), ClassKey::empty(Kind::Poset));
        assert!(k.topology().is_err());
    }

    #[test]
    fn poset_key_lifts_to_topology_key() {
        for p in [wedge(), vee(), diamond(), Poset::antichain(2)] {
            assert_eq!(class_key(&p).to_topology(), class_key(&p.as_topology()));
        }
    }

    #[test]
    fn topology_keys_separate_bag_sizes() {
        // bag of two below a point, versus a point below a bag of two
        let a = Topology::from_pairs(3, &[(0, 1), (1, 0), (0, 2)]).unwrap();
        let b = Topology::from_pairs(3, &[(1, 2), (2, 1), (0, 1)]).unwrap();
        assert_ne!(class_key(&a), class_key(&b));
        assert!(!brute_force_isomorphic(a.relation(), b.relation()));
        let c = Topology::from_pairs(3, &[(2, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(class_key(&a), class_key(&c));
    }
}
