//! Finite posets and finite topologies (quasi-orders) stored as closure matrices.
//!
//! A structure on `n` points is a reflexive, transitive relation kept as one
//! bitset row per point: bit `j` of `up[i]` is set iff `i <= j`. Posets add
//! antisymmetry. Everything downstream (branches, ideals, restriction) reads
//! the closure directly; cover relations are derived on demand.

use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};

/// Widest carrier supported by the bitset rows.
pub const MAX_VERTICES: usize = 16;

/// A set of vertices, one bit per vertex index.
pub type VertexSet = u16;

/// Iterate over the indices of the set bits of `set`.
pub fn members(set: VertexSet) -> impl Iterator<Item = usize> {
    let mut rest = set;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

pub(crate) fn bit(i: usize) -> VertexSet {
    1 << i
}

/// Mask with the lowest `n` bits set.
pub fn full_set(n: usize) -> VertexSet {
    if n >= 16 {
        VertexSet::MAX
    } else {
        (1 << n) - 1
    }
}

/// A binary relation on `0..n` given by its rows.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    up: Vec<VertexSet>,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = (0..self.len())
            .flat_map(|i| {
                members(self.up[i])
                    .filter(move |&j| j != i)
                    .map(move |j| format!("{i}<={j}"))
            })
            .collect();
        write!(f, "Relation[{}]{{{}}}", self.len(), pairs.join(", "))
    }
}

impl Relation {
    /// The discrete order on `n` points.
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices");
        Relation {
            up: (0..n).map(bit).collect(),
        }
    }

    /// Build from raw rows without checking any axiom.
    pub fn from_rows(up: Vec<VertexSet>) -> Self {
        assert!(up.len() <= MAX_VERTICES, "at most {MAX_VERTICES} vertices");
        Relation { up }
    }

    /// Reflexive-transitive closure of the pairs `(a, b)` read as `a <= b`.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooLarge(n));
        }
        let mut rel = Relation::identity(n);
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::VertexOutOfRange { vertex: a.max(b), n });
            }
            rel.up[a] |= bit(b);
        }
        Ok(rel.transitive_closure())
    }

    pub fn rows(&self) -> &[VertexSet] {
        &self.up
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn all(&self) -> VertexSet {
        full_set(self.len())
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i] & bit(j) != 0
    }

    /// `i < j` in the quasi-order sense: `i <= j` and not `j <= i`.
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) && !self.leq(j, i)
    }

    pub fn equiv(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) && self.leq(j, i)
    }

    /// Points `j` with `i <= j`.
    pub fn up_set(&self, i: usize) -> VertexSet {
        self.up[i]
    }

    /// Points `j` with `j <= i`.
    pub fn down_set(&self, i: usize) -> VertexSet {
        let mut s = 0;
        for (j, row) in self.up.iter().enumerate() {
            if row & bit(i) != 0 {
                s |= bit(j);
            }
        }
        s
    }

    /// Points strictly above `i` (excludes everything equivalent to `i`).
    pub fn strict_up(&self, i: usize) -> VertexSet {
        self.up[i] & !self.down_set(i)
    }

    /// Union of the down-sets of the points of `set`.
    pub fn down_closure(&self, set: VertexSet) -> VertexSet {
        let mut s = 0;
        for (j, row) in self.up.iter().enumerate() {
            if row & set != 0 {
                s |= bit(j);
            }
        }
        s
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|i| self.leq(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.len()).all(|i| members(self.up[i]).all(|j| self.up[j] & !self.up[i] == 0))
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.len()).all(|i| members(self.up[i]).all(|j| j == i || !self.leq(j, i)))
    }

    /// Smallest transitive relation containing `self`.
    pub fn transitive_closure(&self) -> Self {
        let mut up = self.up.clone();
        let n = up.len();
        for k in 0..n {
            for i in 0..n {
                if up[i] & bit(k) != 0 {
                    up[i] |= up[k];
                }
            }
        }
        Relation { up }
    }

    /// The opposite relation.
    pub fn transpose(&self) -> Self {
        Relation {
            up: (0..self.len()).map(|i| self.down_set(i)).collect(),
        }
    }

    /// Relabel: vertex `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let n = self.len();
        assert_eq!(perm.len(), n);
        let mut up = vec![0; n];
        for i in 0..n {
            up[perm[i]] = members(self.up[i]).fold(0, |acc, j| acc | bit(perm[j]));
        }
        Relation { up }
    }

    /// Restriction to `set`, re-indexed in increasing order. Returns the
    /// restricted relation and the map new index -> old index.
    pub fn restrict(&self, set: VertexSet) -> (Self, Vec<usize>) {
        let index: Vec<usize> = members(set & self.all()).collect();
        let up = index
            .iter()
            .map(|&old| {
                index
                    .iter()
                    .enumerate()
                    .filter(|&(_, &o)| self.leq(old, o))
                    .fold(0, |acc, (new, _)| acc | bit(new))
            })
            .collect();
        (Relation { up }, index)
    }

    /// Points with nothing strictly below them. For a quasi-order this is
    /// every member of every minimal bag.
    pub fn minimal_elements(&self) -> VertexSet {
        (0..self.len())
            .filter(|&x| self.down_set(x) & !self.up[x] == 0)
            .fold(0, |acc, x| acc | bit(x))
    }

    pub fn maximal_elements(&self) -> VertexSet {
        (0..self.len())
            .filter(|&x| self.up[x] & !self.down_set(x) == 0)
            .fold(0, |acc, x| acc | bit(x))
    }

    /// Connected components of the comparability graph restricted to `within`.
    pub fn components_within(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut left = within & self.all();
        let mut out = Vec::new();
        while left != 0 {
            let start = left.trailing_zeros() as usize;
            let mut comp = bit(start);
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0;
                for x in members(frontier) {
                    next |= (self.up[x] | self.down_set(x)) & within;
                }
                frontier = next & !comp;
                comp |= next;
            }
            left &= !comp;
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.components_within(self.all())
    }

    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.components().len() == 1
    }

    /// Is `set` closed upward?
    pub fn is_upper_set(&self, set: VertexSet) -> bool {
        members(set).all(|x| self.up[x] & !set == 0)
    }

    /// All upper sets (open sets of the associated topology), including the
    /// empty set and the whole carrier, in increasing mask order.
    pub fn upper_sets(&self) -> Vec<VertexSet> {
        let all = self.all() as u32;
        (0..=all)
            .map(|s| s as VertexSet)
            .filter(|&s| self.is_upper_set(s))
            .collect()
    }

    /// Cover pairs `(i, j)`: `i < j` with nothing strictly in between.
    /// On a quasi-order this relates representatives of bags, using the
    /// smallest index of each bag.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let reps: Vec<usize> = (0..n)
            .filter(|&i| members(self.down_set(i) & self.up[i]).next() == Some(i))
            .collect();
        let mut out = Vec::new();
        for &i in &reps {
            for &j in &reps {
                if self.lt(i, j) && !reps.iter().any(|&k| self.lt(i, k) && self.lt(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Disjoint union; `other` is shifted past `self`.
    pub fn disjoint_union(&self, other: &Relation) -> Self {
        let shift = self.len();
        let mut up = self.up.clone();
        up.extend(other.up.iter().map(|&r| r << shift));
        Relation::from_rows(up)
    }
}

/// Grafting on relations: `upper` is placed above vertex `v` of `lower`.
/// `lower` keeps indices `0..|lower|`, `upper` is shifted by `|lower|`; every
/// point below `v` becomes below every point of `upper`.
pub fn graft_relation(upper: &Relation, v: usize, lower: &Relation) -> Relation {
    let shift = lower.len();
    let upper_mask = full_set(upper.len()) << shift;
    let below_v = lower.down_set(v);
    let mut up: Vec<VertexSet> = lower.up.clone();
    for x in members(below_v) {
        up[x] |= upper_mask;
    }
    up.extend(upper.up.iter().map(|&r| r << shift));
    Relation::from_rows(up)
}

/// Which family a structure belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Poset,
    Topology,
}

impl Kind {
    pub fn tag(self) -> u8 {
        match self {
            Kind::Poset => 0,
            Kind::Topology => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Poset => "poset",
            Kind::Topology => "topology",
        }
    }
}

/// Common surface of [`Poset`] and [`Topology`].
pub trait Structure: Clone + fmt::Debug + Send + Sync + Sized {
    const KIND: Kind;

    fn relation(&self) -> &Relation;

    /// Wrap a relation already known to satisfy the axioms of `Self`.
    fn from_relation_unchecked(rel: Relation) -> Self;

    fn induced(&self, set: VertexSet) -> Self {
        Self::from_relation_unchecked(self.relation().restrict(set).0)
    }

    fn order_reverse(&self) -> Self {
        Self::from_relation_unchecked(self.relation().transpose())
    }

    fn relabel(&self, perm: &[usize]) -> Self {
        Self::from_relation_unchecked(self.relation().permute(perm))
    }

    fn min_set(&self) -> VertexSet {
        self.relation().minimal_elements()
    }
}

/// A finite partial order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset(Relation);

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .hasse()
            .edges
            .iter()
            .map(|(a, b)| format!("{a}<{b}"))
            .collect();
        write!(f, "Poset[{}]{{{}}}", self.len(), covers.join(","))
    }
}

impl Deref for Poset {
    type Target = Relation;
    fn deref(&self) -> &Relation {
        &self.0
    }
}

impl Structure for Poset {
    const KIND: Kind = Kind::Poset;
    fn relation(&self) -> &Relation {
        &self.0
    }
    fn from_relation_unchecked(rel: Relation) -> Self {
        Poset(rel)
    }
}

impl Poset {
    /// Validate a closure matrix.
    pub fn new(rel: Relation) -> Result<Self> {
        if !rel.is_reflexive() || !rel.is_transitive() {
            return Err(Error::NotQuasiOrder);
        }
        if !rel.is_antisymmetric() {
            return Err(Error::NotAntisymmetric);
        }
        Ok(Poset(rel))
    }

    /// Close the given `a <= b` pairs; fails if the closure has a cycle.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Poset::new(Relation::from_pairs(n, pairs)?)
    }

    pub fn empty() -> Self {
        Poset(Relation::identity(0))
    }

    pub fn point() -> Self {
        Poset(Relation::identity(1))
    }

    pub fn antichain(n: usize) -> Self {
        Poset(Relation::identity(n))
    }

    /// `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_pairs(n, &pairs).expect("a chain is a poset")
    }

    pub fn hasse(&self) -> CoverGraph {
        CoverGraph {
            n: self.len(),
            edges: self.cover_pairs(),
        }
    }

    pub fn as_topology(&self) -> Topology {
        Topology(self.0.clone())
    }
}

/// Covering edges of a poset, directed from the covered point to its cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl CoverGraph {
    /// Graphviz rendering, edges drawn upward (covered -> cover).
    pub fn to_dot(&self, names: Option<&[String]>) -> String {
        let name = |i: usize| match names {
            Some(ns) => ns[i].clone(),
            None => i.to_string(),
        };
        let mut s = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=circle];\n");
        for i in 0..self.n {
            s.push_str(&format!("  n{i} [label=\"{}\"];\n", name(i)));
        }
        for &(a, b) in &self.edges {
            s.push_str(&format!("  n{a} -> n{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// A finite topological space, i.e. a finite quasi-order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Topology(Relation);

impl fmt::Debug for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Topology{:?}", self.0)
    }
}

impl Deref for Topology {
    type Target = Relation;
    fn deref(&self) -> &Relation {
        &self.0
    }
}

impl Structure for Topology {
    const KIND: Kind = Kind::Topology;
    fn relation(&self) -> &Relation {
        &self.0
    }
    fn from_relation_unchecked(rel: Relation) -> Self {
        Topology(rel)
    }
}

/// Bags of a topology and the poset they form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bags {
    /// Equivalence classes, ordered by smallest member.
    pub bags: Vec<VertexSet>,
    /// The induced order on bags.
    pub quotient: Poset,
    /// `bag_of[x]` is the index of the bag containing `x`.
    pub bag_of: Vec<usize>,
}

impl Topology {
    pub fn new(rel: Relation) -> Result<Self> {
        if !rel.is_reflexive() || !rel.is_transitive() {
            return Err(Error::NotQuasiOrder);
        }
        Ok(Topology(rel))
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Topology::new(Relation::from_pairs(n, pairs)?)
    }

    /// A single bag of `n` mutually equivalent points.
    pub fn bag(n: usize) -> Self {
        Topology(Relation::from_rows(vec![full_set(n); n]))
    }

    pub fn is_t0(&self) -> bool {
        self.0.is_antisymmetric()
    }

    pub fn to_poset(&self) -> Option<Poset> {
        self.is_t0().then(|| Poset(self.0.clone()))
    }

    pub fn bags_and_quotient(&self) -> Bags {
        let n = self.len();
        let mut bag_of = vec![usize::MAX; n];
        let mut bags = Vec::new();
        for x in 0..n {
            if bag_of[x] == usize::MAX {
                let class = self.up_set(x) & self.down_set(x);
                for y in members(class) {
                    bag_of[y] = bags.len();
                }
                bags.push(class);
            }
        }
        let rows = bags
            .iter()
            .map(|&b| {
                let rep = b.trailing_zeros() as usize;
                bags.iter()
                    .enumerate()
                    .filter(|&(_, &c)| self.leq(rep, c.trailing_zeros() as usize))
                    .fold(0, |acc, (k, _)| acc | bit(k))
            })
            .collect();
        Bags {
            bags,
            quotient: Poset(Relation::from_rows(rows)),
            bag_of,
        }
    }

    /// Rebuild a topology from a quotient poset and bag sizes; bag `k`
    /// occupies a consecutive block of points.
    pub fn from_quotient(quotient: &Relation, sizes: &[usize]) -> Self {
        assert_eq!(quotient.len(), sizes.len());
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut total = 0;
        for &s in sizes {
            offsets.push(total);
            total += s;
        }
        assert!(total <= MAX_VERTICES);
        let block = |k: usize| full_set(sizes[k]) << offsets[k];
        let mut up = Vec::with_capacity(total);
        for k in 0..sizes.len() {
            let row = members(quotient.up_set(k)).fold(0, |acc, l| acc | block(l));
            up.extend(std::iter::repeat_n(row, sizes[k]));
        }
        Topology(Relation::from_rows(up))
    }
}
