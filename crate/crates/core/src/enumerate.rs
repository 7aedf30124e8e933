//! Isomorphism classes of posets and topologies on `n` points.
//!
//! Posets on `n` points are grown from classes on `n - 1` points by adding a
//! new maximal point above a down-closed set; every poset arises this way by
//! deleting one of its maximal points. Topologies are bag-size assignments on
//! poset classes. Tables are memoized in memory and, when
//! `PRELIE_CACHE_DIR` is set, on disk.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{class_key, key_symmetry_factor, ClassKey};
use crate::error::{Error, Result};
use crate::format::StructureFile;
use crate::linear::{kernel_basis, FormalSum};
use crate::nap::nap_coproduct;
use crate::poset::{Kind, Poset, Relation, Structure, Topology, VertexSet};

pub const MAX_POSET_N: usize = 7;
pub const MAX_TOPOLOGY_N: usize = 5;
const FORMAT_VERSION: u32 = 1;

/// Environment variable naming the on-disk table cache directory.
pub const CACHE_ENV: &str = "PRELIE_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRow {
    pub key: ClassKey,
    pub sigma: u64,
    pub connected: bool,
}

impl ClassRow {
    fn new(key: ClassKey) -> Self {
        let connected = key.relation().is_connected();
        ClassRow {
            sigma: key_symmetry_factor(&key),
            connected,
            key,
        }
    }
}

/// Every isomorphism class of one kind on `n` points, sorted by key.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTable {
    pub kind: Kind,
    pub n: usize,
    pub rows: Vec<ClassRow>,
}

impl ClassTable {
    pub fn class_count(&self) -> usize {
        self.rows.len()
    }

    pub fn connected(&self) -> impl Iterator<Item = &ClassRow> {
        self.rows.iter().filter(|r| r.connected)
    }

    pub fn connected_count(&self) -> usize {
        self.connected().count()
    }

    pub fn connected_keys(&self) -> Vec<ClassKey> {
        self.connected().map(|r| r.key.clone()).collect()
    }

    /// Labeled structures on `n` points, by orbit counting: `Σ n!/σ`.
    pub fn labeled_count(&self) -> u64 {
        let fact: u64 = (1..=self.n as u64).product();
        self.rows.iter().map(|r| fact / r.sigma).sum()
    }
}

impl Serialize for Kind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Kind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "poset" => Ok(Kind::Poset),
            "topology" => Ok(Kind::Topology),
            other => Err(serde::de::Error::custom(format!("unknown kind {other:?}"))),
        }
    }
}

fn dedup_rows(mut keys: Vec<ClassKey>) -> Vec<ClassRow> {
    keys.par_sort_unstable();
    keys.dedup();
    keys.into_par_iter().map(ClassRow::new).collect()
}

/// Relation on `n + 1` points: `rel` plus a new top point above `below`.
fn add_top(rel: &Relation, below: VertexSet) -> Relation {
    let n = rel.len();
    let mut rows: Vec<VertexSet> = rel.rows().to_vec();
    for (x, row) in rows.iter_mut().enumerate() {
        if below & 1 << x != 0 {
            *row |= 1 << n;
        }
    }
    rows.push(1 << n);
    Relation::from_rows(rows)
}

fn generate_posets(n: usize) -> Result<ClassTable> {
    if n == 0 {
        return Ok(ClassTable {
            kind: Kind::Poset,
            n,
            rows: vec![ClassRow::new(ClassKey::empty(Kind::Poset))],
        });
    }
    let prev = poset_table(n - 1)?;
    let keys: Vec<ClassKey> = prev
        .rows
        .par_iter()
        .flat_map_iter(|row| {
            let rel = row.key.relation();
            let all = rel.all();
            rel.upper_sets()
                .into_iter()
                .map(move |up| class_key(&Poset::from_relation_unchecked(add_top(&rel, all & !up))))
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(ClassTable {
        kind: Kind::Poset,
        n,
        rows: dedup_rows(keys),
    })
}

/// Compositions of `n` into `k` positive parts.
fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(k - 1) {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn generate_topologies(n: usize) -> Result<ClassTable> {
    let mut keys = Vec::new();
    for k in 1..=n {
        let table = poset_table(k)?;
        let sizes = compositions(n, k);
        keys.par_extend(table.rows.par_iter().flat_map_iter(|row| {
            let rel = row.key.relation();
            sizes
                .iter()
                .map(|s| class_key(&Topology::from_quotient(&rel, s)))
                .collect::<Vec<_>>()
        }));
    }
    if n == 0 {
        keys.push(ClassKey::empty(Kind::Topology));
    }
    Ok(ClassTable {
        kind: Kind::Topology,
        n,
        rows: dedup_rows(keys),
    })
}

type Memo = Mutex<HashMap<(Kind, usize), Arc<ClassTable>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

#[derive(Serialize, Deserialize)]
struct CacheRow {
    key: ClassKey,
    sigma: u64,
    connected: bool,
    structure: StructureFile,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format_version: u32,
    kind: Kind,
    n: usize,
    rows: Vec<CacheRow>,
}

fn cache_path(dir: &Path, kind: Kind, n: usize) -> PathBuf {
    dir.join(format!("{}-n{}-v{}.json", kind.name(), n, FORMAT_VERSION))
}

fn read_cache(dir: &Path, kind: Kind, n: usize) -> Option<ClassTable> {
    let text = std::fs::read_to_string(cache_path(dir, kind, n)).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    if file.format_version != FORMAT_VERSION || file.kind != kind || file.n != n {
        return None;
    }
    Some(ClassTable {
        kind,
        n,
        rows: file
            .rows
            .into_iter()
            .map(|r| ClassRow {
                key: r.key,
                sigma: r.sigma,
                connected: r.connected,
            })
            .collect(),
    })
}

/// Write a table to `dir`, through a temporary file and a rename.
pub fn write_cache(dir: &Path, table: &ClassTable) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let file = CacheFile {
        format_version: FORMAT_VERSION,
        kind: table.kind,
        n: table.n,
        rows: table
            .rows
            .iter()
            .map(|r| CacheRow {
                key: r.key.clone(),
                sigma: r.sigma,
                connected: r.connected,
                structure: StructureFile::from_relation(&r.key.relation(), None),
            })
            .collect(),
    };
    let path = cache_path(dir, table.kind, table.n);
    let tmp = dir.join(format!(".{}.{}.tmp", table.kind.name(), std::process::id()));
    std::fs::write(&tmp, serde_json::to_string(&file)?)?;
    std::fs::rename(&tmp, &path)?;
    Ok(path)
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|s| !s.is_empty()).map(PathBuf::from)
}

fn table(kind: Kind, n: usize) -> Result<Arc<ClassTable>> {
    if let Some(t) = memo().lock().expect("memo lock").get(&(kind, n)) {
        return Ok(t.clone());
    }
    let dir = cache_dir();
    let loaded = dir.as_deref().and_then(|d| read_cache(d, kind, n));
    let built = match loaded {
        Some(t) => t,
        None => {
            let t = match kind {
                Kind::Poset => generate_posets(n)?,
                Kind::Topology => generate_topologies(n)?,
            };
            if let Some(d) = &dir {
                // a failed cache write only costs a rebuild next time
                let _ = write_cache(d, &t);
            }
            t
        }
    };
    let mut guard = memo().lock().expect("memo lock");
    Ok(guard.entry((kind, n)).or_insert_with(|| Arc::new(built)).clone())
}

fn poset_table(n: usize) -> Result<Arc<ClassTable>> {
    table(Kind::Poset, n)
}

/// All poset classes on `n` points, `1 <= n <= 7`.
pub fn enumerate_posets(n: usize) -> Result<Arc<ClassTable>> {
    if !(1..=MAX_POSET_N).contains(&n) {
        return Err(Error::UnsupportedSize {
            kind: "poset",
            n,
            max: MAX_POSET_N,
        });
    }
    poset_table(n)
}

/// All topology classes on `n` points, `1 <= n <= 5`.
pub fn enumerate_topologies(n: usize) -> Result<Arc<ClassTable>> {
    if !(1..=MAX_TOPOLOGY_N).contains(&n) {
        return Err(Error::UnsupportedSize {
            kind: "topology",
            n,
            max: MAX_TOPOLOGY_N,
        });
    }
    table(Kind::Topology, n)
}

pub fn connected_poset_classes(n: usize) -> Result<Vec<ClassKey>> {
    Ok(enumerate_posets(n)?.connected_keys())
}

pub fn connected_topology_classes(n: usize) -> Result<Vec<ClassKey>> {
    Ok(enumerate_topologies(n)?.connected_keys())
}

/// A basis of the primitives `ker δ` among connected posets on `n` points.
pub fn primitive_classes(n: usize) -> Result<Vec<FormalSum>> {
    let classes = connected_poset_classes(n)?;
    Ok(kernel_basis(&classes, |k| {
        nap_coproduct(&k.poset().expect("poset table"))
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountsRow {
    pub n: usize,
    pub classes: usize,
    pub connected: usize,
    pub labeled: u64,
    pub primitives: usize,
}

pub fn counts_report(max_n: usize) -> Result<Vec<CountsRow>> {
    (1..=max_n)
        .map(|n| {
            let t = enumerate_posets(n)?;
            Ok(CountsRow {
                n,
                classes: t.class_count(),
                connected: t.connected_count(),
                labeled: t.labeled_count(),
                primitives: primitive_classes(n)?.len(),
            })
        })
        .collect()
}

/// Exhaustive labeled enumeration over all relations, for small `n`.
pub mod oracle {
    use super::*;

    fn all_quasi_orders(n: usize) -> impl Iterator<Item = Relation> {
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let count = 1u64 << slots.len();
        (0..count).filter_map(move |mask| {
            let mut rows: Vec<VertexSet> = (0..n).map(|i| 1 << i).collect();
            for (b, &(i, j)) in slots.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    rows[i] |= 1 << j;
                }
            }
            let rel = Relation::from_rows(rows);
            rel.is_transitive().then_some(rel)
        })
    }

    /// Every labeled poset on `n` points.
    pub fn labeled_posets(n: usize) -> Vec<Relation> {
        all_quasi_orders(n).filter(|r| r.is_antisymmetric()).collect()
    }

    /// Every labeled topology on `n` points.
    pub fn labeled_topologies(n: usize) -> Vec<Relation> {
        all_quasi_orders(n).collect()
    }

    /// Class keys of the labeled structures, deduplicated.
    pub fn class_keys<S: Structure>(rels: &[Relation]) -> Vec<ClassKey> {
        let mut keys: Vec<ClassKey> = rels
            .par_iter()
            .map(|r| class_key(&S::from_relation_unchecked(r.clone())))
            .collect();
        keys.sort();
        keys.dedup();
        keys
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_counts() {
        let classes: Vec<usize> = (1..=6).map(|n| enumerate_posets(n).unwrap().class_count()).collect();
        assert_eq!(classes, vec![1, 2, 5, 16, 63, 318]);
        let connected: Vec<usize> = (1..=6)
            .map(|n| enumerate_posets(n).unwrap().connected_count())
            .collect();
        assert_eq!(connected, vec![1, 1, 3, 10, 44, 238]);
        let labeled: Vec<u64> = (1..=5).map(|n| enumerate_posets(n).unwrap().labeled_count()).collect();
        assert_eq!(labeled, vec![1, 3, 19, 219, 4231]);
    }

    #[test]
    fn topology_counts() {
        let classes: Vec<usize> = (1..=4)
            .map(|n| enumerate_topologies(n).unwrap().class_count())
            .collect();
        assert_eq!(classes, vec![1, 3, 9, 33]);
        let labeled: Vec<u64> = (1..=4)
            .map(|n| enumerate_topologies(n).unwrap().labeled_count())
            .collect();
        assert_eq!(labeled, vec![1, 4, 29, 355]);
    }

    #[test]
    fn oracle_agrees() {
        for n in 1..=4 {
            let labeled = oracle::labeled_posets(n);
            let keys = oracle::class_keys::<Poset>(&labeled);
            let table: Vec<ClassKey> = enumerate_posets(n).unwrap().rows.iter().map(|r| r.key.clone()).collect();
            assert_eq!(keys, table);
            let labeled = oracle::labeled_topologies(n);
            let keys = oracle::class_keys::<Topology>(&labeled);
            let table: Vec<ClassKey> = enumerate_topologies(n).unwrap().rows.iter().map(|r| r.key.clone()).collect();
            assert_eq!(keys, table);
        }
        assert_eq!(oracle::labeled_topologies(3).len(), 29);
    }

    #[test]
    fn range_errors() {
        assert!(enumerate_posets(0).is_err());
        assert!(enumerate_posets(8).is_err());
        assert!(enumerate_topologies(6).is_err());
    }

    #[test]
    fn primitive_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| primitive_classes(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 0, 1, 4]);
    }

    #[test]
    fn compositions_small() {
        assert_eq!(compositions(3, 2), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(compositions(2, 3), Vec::<Vec<usize>>::new());
    }

    #[test]
    fn cache_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let t = enumerate_posets(3).unwrap();
        let path = write_cache(dir.path(), &t).unwrap();
        assert!(path.exists());
        let back = read_cache(dir.path(), Kind::Poset, 3).unwrap();
        assert_eq!(&back, t.as_ref());
        assert!(read_cache(dir.path(), Kind::Poset, 4).is_none());
    }
}
