//! Exhaustive identity sweeps over class tables.
//!
//! Every sweep walks a fixed, sorted list of instances, so reports are
//! identical across runs and worker counts.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{class_key, ClassKey};
use crate::enumerate::{enumerate_posets, enumerate_topologies, oracle};
use crate::error::{Error, Result};
use crate::linear::{int, TensorSum};
use crate::nap::{
    branches, ck_coproduct, coassoc_check_with, compatibility_check_with, jacobi_check, nap_alg_check_with,
    nap_coproduct, nap_coproduct_down, nap_coassoc_check_with, nap_product, nap_product_up, prelie,
    prelie_check_with, searrow_coproduct, searrow_coproduct_with, AncestorRule, NapStructure,
};
use crate::orbit::{grafting_orbit_index, OrbitIndex};
use crate::poset::{Kind, Poset, Structure, Topology};
use crate::topology::{lift_tensor, quotient_group_orders, top_branches, top_duality_check, top_nap_coproduct};
use crate::trees::{rooted_trees, tree_compat_residual, tree_coassoc_residual, tree_prelie_residual, RootedTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Law {
    Nap,
    Prelie,
    NapCo,
    Compat,
    Duality,
    Jacobi,
    JIndex,
    NapUp,
    NapCoDown,
    CkCoassoc,
    SearrowCoassoc,
    /// Coassociativity of Δ↘ under the common-lower-bound admissibility rule.
    SearrowLowerBound,
    BranchLemma,
    T0,
    QuotientAut,
    TreePrelie,
    TreeNapCo,
    TreeCompat,
}

impl Law {
    pub const ALL: [Law; 18] = [
        Law::Nap,
        Law::Prelie,
        Law::NapCo,
        Law::Compat,
        Law::Duality,
        Law::Jacobi,
        Law::JIndex,
        Law::NapUp,
        Law::NapCoDown,
        Law::CkCoassoc,
        Law::SearrowCoassoc,
        Law::SearrowLowerBound,
        Law::BranchLemma,
        Law::T0,
        Law::QuotientAut,
        Law::TreePrelie,
        Law::TreeNapCo,
        Law::TreeCompat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::Nap => "nap",
            Law::Prelie => "prelie",
            Law::NapCo => "nap-co",
            Law::Compat => "compat",
            Law::Duality => "duality",
            Law::Jacobi => "jacobi",
            Law::JIndex => "j-index",
            Law::NapUp => "nap-up",
            Law::NapCoDown => "nap-co-down",
            Law::CkCoassoc => "ck-coassoc",
            Law::SearrowCoassoc => "searrow-coassoc",
            Law::SearrowLowerBound => "searrow-coassoc-lower-bound",
            Law::BranchLemma => "branch-lemma",
            Law::T0 => "t0",
            Law::QuotientAut => "quotient-aut",
            Law::TreePrelie => "tree-prelie",
            Law::TreeNapCo => "tree-nap-co",
            Law::TreeCompat => "tree-compat",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Law {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Law::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::UnknownLaw(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    Poset,
    Topology,
    Tree,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::Poset => "poset",
            SweepKind::Topology => "topology",
            SweepKind::Tree => "tree",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub inputs: Vec<String>,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub law: String,
    pub kind: SweepKind,
    pub range: String,
    pub max_total: usize,
    pub instances: u64,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Sweep `law` over every in-range instance with at most `max_total` points,
/// on `parallel` worker threads.
pub fn run(law: Law, topologies: bool, max_total: usize, parallel: usize) -> Result<VerificationReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallel.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| run_inner(law, topologies, max_total))
}

fn unsupported(law: Law, kind: SweepKind) -> Error {
    Error::UnsupportedLaw {
        law: law.name(),
        kind: kind.name(),
    }
}

fn run_inner(law: Law, topologies: bool, max_total: usize) -> Result<VerificationReport> {
    let kind = match law {
        Law::TreePrelie | Law::TreeNapCo | Law::TreeCompat => SweepKind::Tree,
        Law::T0 | Law::QuotientAut => SweepKind::Topology,
        _ if topologies => SweepKind::Topology,
        _ => SweepKind::Poset,
    };
    let (range, outcome) = match (kind, law) {
        (SweepKind::Tree, Law::TreePrelie) => ("triples, total", tree_prelie_sweep(max_total)),
        (SweepKind::Tree, Law::TreeNapCo) => ("trees, size", tree_coassoc_sweep(max_total)),
        (SweepKind::Tree, Law::TreeCompat) => ("pairs, total", tree_compat_sweep(max_total)),
        (SweepKind::Topology, Law::T0) => ("posets and pairs, total", t0_sweep(max_total)?),
        (SweepKind::Topology, Law::QuotientAut) => ("classes, size", quotient_aut_sweep(max_total)?),
        (SweepKind::Poset, Law::Duality) => ("triples |P| = |Q|+|R|, total", poset_duality_sweep(max_total)?),
        (SweepKind::Topology, Law::Duality) => ("triples |T| = |T'|+|T''|, total", top_duality_sweep(max_total)?),
        (SweepKind::Poset, Law::JIndex) => ("triples with graft sites, total", j_index_sweep(max_total)?),
        (SweepKind::Poset, Law::NapUp) => ("triples, total", product_law_sweep::<Poset>(max_total, nap_product_up::<Poset>, false)?),
        (SweepKind::Poset, Law::NapCoDown) => ("connected classes, size", nap_co_sweep(Kind::Poset, max_total, &|k| {
            Ok(nap_coproduct_down(&k.poset()?))
        })?),
        (SweepKind::Poset, _) => ("", generic::<Poset>(law, max_total)?),
        (SweepKind::Topology, Law::JIndex | Law::NapUp | Law::NapCoDown) => return Err(unsupported(law, kind)),
        (SweepKind::Topology, _) => ("", generic::<Topology>(law, max_total)?),
        (SweepKind::Tree, _) => return Err(unsupported(law, kind)),
    };
    let range = if range.is_empty() { generic_range(law) } else { range };
    let (instances, mut failures) = outcome;
    failures.sort_by(|a, b| a.inputs.cmp(&b.inputs));
    Ok(VerificationReport {
        law: law.name().to_string(),
        kind,
        range: format!("{range} <= {max_total}"),
        max_total,
        instances,
        failures,
    })
}

fn generic_range(law: Law) -> &'static str {
    match law {
        Law::Nap | Law::Prelie | Law::Jacobi => "triples, total",
        Law::Compat => "pairs, total",
        Law::CkCoassoc | Law::SearrowCoassoc | Law::SearrowLowerBound => "all classes, size",
        _ => "connected classes, size",
    }
}

type Outcome = (u64, Vec<Failure>);

fn generic<S: NapStructure>(law: Law, max_total: usize) -> Result<Outcome> {
    match law {
        Law::Nap => product_law_sweep::<S>(max_total, nap_product::<S>, false),
        Law::Prelie => product_law_sweep::<S>(max_total, prelie::<S>, true),
        Law::Jacobi => jacobi_sweep::<S>(max_total),
        Law::NapCo => nap_co_sweep(S::KIND, max_total, &|k| Ok(k.structure::<S>()?.nap_delta())),
        Law::Compat => compat_sweep::<S>(max_total),
        Law::CkCoassoc => coassoc_sweep(S::KIND, max_total, &|k| Ok(ck_coproduct(&k.structure::<S>()?))),
        Law::SearrowCoassoc => coassoc_sweep(S::KIND, max_total, &|k| Ok(searrow_coproduct(&k.structure::<S>()?))),
        Law::SearrowLowerBound => coassoc_sweep(S::KIND, max_total, &|k| {
            Ok(searrow_coproduct_with(&k.structure::<S>()?, AncestorRule::CommonLowerBound))
        }),
        Law::BranchLemma => branch_lemma_sweep::<S>(max_total),
        _ => unreachable!("dispatched earlier"),
    }
}

// ---- instance lists ------------------------------------------------------------

fn table_keys(kind: Kind, n: usize, connected_only: bool) -> Result<Vec<ClassKey>> {
    let t = match kind {
        Kind::Poset => enumerate_posets(n)?,
        Kind::Topology => enumerate_topologies(n)?,
    };
    Ok(t.rows
        .iter()
        .filter(|r| r.connected || !connected_only)
        .map(|r| r.key.clone())
        .collect())
}

/// `grades[n]` lists the classes on `n` points, for `1 <= n <= max`.
fn by_grade(kind: Kind, max: usize, connected_only: bool) -> Result<Vec<Vec<ClassKey>>> {
    let mut out = vec![Vec::new()];
    for n in 1..=max {
        out.push(table_keys(kind, n, connected_only)?);
    }
    Ok(out)
}

fn flat(grades: &[Vec<ClassKey>]) -> Vec<ClassKey> {
    grades.iter().flatten().cloned().collect()
}

fn pairs(grades: &[Vec<ClassKey>], max_total: usize) -> Vec<(ClassKey, ClassKey)> {
    let mut out = Vec::new();
    for a in 1..grades.len() {
        for b in 1..grades.len() {
            if a + b <= max_total {
                for p in &grades[a] {
                    for q in &grades[b] {
                        out.push((p.clone(), q.clone()));
                    }
                }
            }
        }
    }
    out
}

fn triples(grades: &[Vec<ClassKey>], max_total: usize) -> Vec<(ClassKey, ClassKey, ClassKey)> {
    let mut out = Vec::new();
    for (p, q) in pairs(grades, max_total.saturating_sub(1)) {
        let used = p.vertex_count() + q.vertex_count();
        for c in 1..grades.len() {
            if used + c <= max_total {
                for r in &grades[c] {
                    out.push((p.clone(), q.clone(), r.clone()));
                }
            }
        }
    }
    out
}

fn names(keys: &[&ClassKey]) -> Vec<String> {
    keys.iter().map(|k| k.to_string()).collect()
}

fn failure<T: fmt::Debug>(inputs: Vec<String>, residual: &T) -> Failure {
    Failure {
        inputs,
        residual: format!("{residual:?}"),
    }
}

fn collect<T, F>(items: &[T], check: F) -> Result<Outcome>
where
    T: Sync,
    F: Fn(&T) -> Result<Option<Failure>> + Sync + Send,
{
    let results: Vec<Option<Failure>> = items.par_iter().map(check).collect::<Result<_>>()?;
    Ok((items.len() as u64, results.into_iter().flatten().collect()))
}

fn grade_limit(kind: Kind, max_total: usize) -> usize {
    match kind {
        Kind::Poset => max_total.min(crate::enumerate::MAX_POSET_N),
        Kind::Topology => max_total.min(crate::enumerate::MAX_TOPOLOGY_N),
    }
}

fn check_range(kind: Kind, max_total: usize) -> Result<()> {
    let max = grade_limit(kind, usize::MAX);
    if max_total > max {
        return Err(Error::UnsupportedSize {
            kind: kind.name(),
            n: max_total,
            max,
        });
    }
    Ok(())
}

// ---- sweeps ----------------------------------------------------------------------

fn product_law_sweep<S: Structure>(
    max_total: usize,
    op: fn(&S, &S) -> Result<crate::linear::FormalSum>,
    prelie_law: bool,
) -> Result<Outcome> {
    check_range(S::KIND, max_total)?;
    let grades = by_grade(S::KIND, max_total.saturating_sub(2), true)?;
    let items = triples(&grades, max_total);
    let product = move |a: &ClassKey, b: &ClassKey| op(&a.structure::<S>()?, &b.structure::<S>()?);
    collect(&items, |(p, q, r)| {
        let c = if prelie_law {
            prelie_check_with(p, q, r, &product)?
        } else {
            nap_alg_check_with(p, q, r, &product)?
        };
        Ok((!c.holds()).then(|| failure(names(&[p, q, r]), &c.residual)))
    })
}

fn jacobi_sweep<S: Structure>(max_total: usize) -> Result<Outcome> {
    check_range(S::KIND, max_total)?;
    let grades = by_grade(S::KIND, max_total.saturating_sub(2), true)?;
    let items = triples(&grades, max_total);
    collect(&items, |(p, q, r)| {
        let c = jacobi_check(&p.structure::<S>()?, &q.structure::<S>()?, &r.structure::<S>()?)?;
        Ok((!c.holds()).then(|| failure(names(&[p, q, r]), &c.residual)))
    })
}

type KeyCoproduct<'a> = &'a (dyn Fn(&ClassKey) -> Result<TensorSum> + Sync);

fn nap_co_sweep(kind: Kind, max_total: usize, delta: KeyCoproduct<'_>) -> Result<Outcome> {
    check_range(kind, max_total)?;
    let items = flat(&by_grade(kind, max_total, true)?);
    collect(&items, |p| {
        let c = nap_coassoc_check_with(p, delta)?;
        Ok((!c.holds()).then(|| failure(names(&[p]), &c.residual)))
    })
}

fn coassoc_sweep(kind: Kind, max_total: usize, delta: KeyCoproduct<'_>) -> Result<Outcome> {
    check_range(kind, max_total)?;
    let items = flat(&by_grade(kind, max_total, false)?);
    collect(&items, |p| {
        let c = coassoc_check_with(p, delta)?;
        Ok((!c.holds()).then(|| failure(names(&[p]), &c.residual)))
    })
}

fn compat_sweep<S: NapStructure>(max_total: usize) -> Result<Outcome> {
    check_range(S::KIND, max_total)?;
    let grades = by_grade(S::KIND, max_total, true)?;
    let deltas: HashMap<ClassKey, TensorSum> = flat(&grades)
        .into_par_iter()
        .map(|k| {
            let d = k.structure::<S>().map(|s| s.nap_delta());
            d.map(|d| (k, d))
        })
        .collect::<Result<_>>()?;
    let delta = |k: &ClassKey| -> Result<TensorSum> {
        match deltas.get(k) {
            Some(d) => Ok(d.clone()),
            None => Ok(k.structure::<S>()?.nap_delta()),
        }
    };
    let product = |a: &ClassKey, b: &ClassKey| prelie(&a.structure::<S>()?, &b.structure::<S>()?);
    let items = pairs(&grades, max_total);
    collect(&items, |(p, q)| {
        let c = compatibility_check_with(p, q, &product, &delta)?;
        Ok((!c.holds()).then(|| failure(names(&[p, q]), &c.residual)))
    })
}

fn poset_duality_sweep(max_total: usize) -> Result<Outcome> {
    check_range(Kind::Poset, max_total)?;
    let mut sigma: HashMap<ClassKey, u64> = HashMap::new();
    let mut grades = vec![Vec::new()];
    for n in 1..=max_total {
        let t = enumerate_posets(n)?;
        for r in t.connected() {
            sigma.insert(r.key.clone(), r.sigma);
        }
        grades.push(t.connected_keys());
    }
    let mut instances = 0u64;
    let mut failures = Vec::new();
    for m in 2..=max_total {
        let deltas: Vec<(ClassKey, TensorSum, u32)> = grades[m]
            .par_iter()
            .map(|k| {
                let p = k.poset()?;
                Ok((k.clone(), nap_coproduct(&p), p.min_set().count_ones()))
            })
            .collect::<Result<_>>()?;
        let qr: Vec<(ClassKey, ClassKey)> = pairs(&grades, m)
            .into_iter()
            .filter(|(q, r)| q.vertex_count() + r.vertex_count() == m)
            .collect();
        let products: Vec<crate::linear::FormalSum> = qr
            .par_iter()
            .map(|(q, r)| nap_product(&q.poset()?, &r.poset()?))
            .collect::<Result<_>>()?;
        instances += (qr.len() * deltas.len()) as u64;
        let found: Vec<Failure> = deltas
            .par_iter()
            .flat_map_iter(|(pk, delta, minimal)| {
                let sp = int(sigma[pk] as i64);
                let mut out = Vec::new();
                for ((q, r), prod) in qr.iter().zip(&products) {
                    let lhs = delta.coeff(&(q.clone(), r.clone())) * int((sigma[q] * sigma[r]) as i64);
                    let rhs = prod.coeff(pk) * &sp / int(*minimal as i64);
                    if lhs != rhs {
                        out.push(failure(names(&[pk, q, r]), &(lhs, rhs)));
                    }
                }
                out
            })
            .collect();
        failures.extend(found);
    }
    Ok((instances, failures))
}

fn top_duality_sweep(max_total: usize) -> Result<Outcome> {
    check_range(Kind::Topology, max_total)?;
    let grades = by_grade(Kind::Topology, max_total, true)?;
    let mut items = Vec::new();
    for (q, r) in pairs(&grades, max_total) {
        let m = q.vertex_count() + r.vertex_count();
        for t in &grades[m] {
            items.push((t.clone(), q.clone(), r.clone()));
        }
    }
    collect(&items, |(t, q, r)| {
        let d = top_duality_check(&t.topology()?, &q.topology()?, &r.topology()?)?;
        Ok((!d.equal).then(|| failure(names(&[t, q, r]), &d)))
    })
}

fn j_index_sweep(max_total: usize) -> Result<Outcome> {
    check_range(Kind::Poset, max_total)?;
    let grades = by_grade(Kind::Poset, max_total, true)?;
    let qr = pairs(&grades, max_total);
    // the classes P reachable from (Q, R) by one minimal graft
    let matched: Vec<Vec<(ClassKey, ClassKey, ClassKey)>> = qr
        .par_iter()
        .map(|(q, r)| {
            let (qp, rp) = (q.poset()?, r.poset()?);
            let mut ps: Vec<ClassKey> = nap_product(&qp, &rp)?.keys().cloned().collect();
            ps.sort();
            Ok(ps.into_iter().map(|p| (p, q.clone(), r.clone())).collect())
        })
        .collect::<Result<_>>()?;
    let items: Vec<_> = matched.into_iter().flatten().collect();
    collect(&items, |(p, q, r)| {
        let idx = grafting_orbit_index(&p.poset()?, &q.poset()?, &r.poset()?)?;
        Ok(match idx {
            OrbitIndex::Index { j, .. } if j == int(1) => None,
            other => Some(failure(names(&[p, q, r]), &other)),
        })
    })
}

fn branch_lemma_sweep<S: NapStructure>(max_total: usize) -> Result<Outcome> {
    check_range(S::KIND, max_total)?;
    let items = flat(&by_grade(S::KIND, max_total, true)?);
    collect(&items, |k| {
        let rel = k.relation();
        let sets: Vec<u16> = match S::KIND {
            Kind::Poset => branches(&k.poset()?).into_iter().map(|b| b.set).collect(),
            Kind::Topology => top_branches(&k.topology()?).into_iter().map(|b| b.set).collect(),
        };
        let disjoint = sets
            .iter()
            .enumerate()
            .all(|(i, a)| sets[i + 1..].iter().all(|b| a & b == 0));
        let min = rel.minimal_elements();
        let preserved = sets.iter().all(|&i| {
            let (rest, index) = rel.restrict(rel.all() & !i);
            let rest_min = crate::poset::members(rest.minimal_elements()).fold(0u16, |acc, x| acc | 1 << index[x]);
            rest_min == min && rest.is_connected()
        });
        Ok((!(disjoint && preserved)).then(|| failure(names(&[k]), &sets)))
    })
}

/// Topological operations on posets agree with the poset operations.
fn t0_sweep(max_total: usize) -> Result<Outcome> {
    check_range(Kind::Topology, max_total)?;
    let grades = by_grade(Kind::Poset, max_total, true)?;
    let lift = |x: &crate::linear::FormalSum| x.map_keys(|k| k.to_topology());
    let singles = flat(&grades);
    let (n1, mut f1) = collect(&singles, |k| {
        let p = k.poset()?;
        let t = p.as_topology();
        let same = class_key(&t) == k.to_topology()
            && top_nap_coproduct(&t) == lift_tensor(&nap_coproduct(&p))
            && searrow_coproduct(&t) == lift_tensor(&searrow_coproduct(&p))
            && ck_coproduct(&t) == lift_tensor(&ck_coproduct(&p))
            && top_branches(&t).into_iter().map(|b| b.set).eq(branches(&p).into_iter().map(|b| b.set));
        Ok((!same).then(|| failure(names(&[k]), &"coproduct mismatch")))
    })?;
    let both = pairs(&grades, max_total);
    let (n2, f2) = collect(&both, |(a, b)| {
        let (p, q) = (a.poset()?, b.poset()?);
        let (s, t) = (p.as_topology(), q.as_topology());
        let same = prelie(&s, &t)? == lift(&prelie(&p, &q)?) && nap_product(&s, &t)? == lift(&nap_product(&p, &q)?);
        Ok((!same).then(|| failure(names(&[a, b]), &"product mismatch")))
    })?;
    f1.extend(f2);
    Ok((n1 + n2, f1))
}

fn quotient_aut_sweep(max_total: usize) -> Result<Outcome> {
    check_range(Kind::Topology, max_total)?;
    let items = flat(&by_grade(Kind::Topology, max_total, false)?);
    collect(&items, |k| {
        let o = quotient_group_orders(&k.topology()?);
        Ok((!o.consistent()).then(|| failure(names(&[k]), &o)))
    })
}

fn trees_upto(max: usize) -> Vec<Vec<RootedTree>> {
    (0..=max).map(rooted_trees).collect()
}

fn tree_items(max_total: usize, arity: usize) -> Vec<Vec<RootedTree>> {
    let by_size = trees_upto(max_total);
    let mut out: Vec<Vec<RootedTree>> = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::new();
        for prefix in &out {
            let used: usize = prefix.iter().map(RootedTree::size).sum();
            for size in 1..=max_total.saturating_sub(used) {
                for t in &by_size[size] {
                    let mut v = prefix.clone();
                    v.push(t.clone());
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

fn tree_outcome<F, R>(items: &[Vec<RootedTree>], check: F) -> Outcome
where
    F: Fn(&[RootedTree]) -> Option<R> + Sync,
    R: fmt::Debug,
{
    let failures: Vec<Failure> = items
        .par_iter()
        .filter_map(|v| {
            check(v).map(|r| failure(v.iter().map(RootedTree::describe).collect(), &r))
        })
        .collect();
    (items.len() as u64, failures)
}

fn tree_prelie_sweep(max_total: usize) -> Outcome {
    tree_outcome(&tree_items(max_total, 3), |v| {
        let r = tree_prelie_residual(&v[0], &v[1], &v[2]);
        (!r.is_zero()).then_some(r)
    })
}

fn tree_coassoc_sweep(max_total: usize) -> Outcome {
    tree_outcome(&tree_items(max_total, 1), |v| {
        let r = tree_coassoc_residual(&v[0]);
        (!r.is_zero()).then_some(r)
    })
}

fn tree_compat_sweep(max_total: usize) -> Outcome {
    tree_outcome(&tree_items(max_total, 2), |v| {
        let r = tree_compat_residual(&v[0], &v[1]);
        (!r.is_zero()).then_some(r)
    })
}

/// `Σ n!/σ` over the class table against the brute-force labeled count.
pub fn labeled_consistency(kind: Kind, n: usize) -> Result<(u64, u64)> {
    let (table, labeled) = match kind {
        Kind::Poset => (enumerate_posets(n)?, oracle::labeled_posets(n).len() as u64),
        Kind::Topology => (enumerate_topologies(n)?, oracle::labeled_topologies(n).len() as u64),
    };
    Ok((table.labeled_count(), labeled))
}
