//! The partition-overlap index `j(π, ρ)` and its instance on graft sites.

use std::collections::BTreeMap;

use crate::canon::{automorphisms, canonical_form, class_key};
use crate::error::{Error, Result};
use crate::linear::{int, Rational};
use crate::poset::{graft_relation, members, Poset, Structure, VertexSet};

fn validate(pi: &[Vec<usize>], rho: &[Vec<usize>]) -> Result<usize> {
    let cover = |p: &[Vec<usize>]| -> Result<Vec<usize>> {
        let mut all: Vec<usize> = p.iter().flatten().copied().collect();
        let len = all.len();
        all.sort_unstable();
        all.dedup();
        if all.len() != len || p.iter().any(|b| b.is_empty()) {
            return Err(Error::PartitionMismatch);
        }
        Ok(all)
    };
    let e = cover(pi)?;
    if e != cover(rho)? {
        return Err(Error::PartitionMismatch);
    }
    if e.is_empty() {
        return Err(Error::UndefinedIndex);
    }
    Ok(e.len())
}

/// `j(π, ρ) = (1/|E|) Σ_{α∈π, β∈ρ} |α∩β| |β| / |α|`.
pub fn j_index(pi: &[Vec<usize>], rho: &[Vec<usize>]) -> Result<Rational> {
    let e = validate(pi, rho)?;
    let mut total = int(0);
    for alpha in pi {
        for beta in rho {
            let overlap = alpha.iter().filter(|x| beta.contains(x)).count();
            if overlap > 0 {
                total += Rational::new(
                    ((overlap * beta.len()) as i64).into(),
                    (alpha.len() as i64).into(),
                );
            }
        }
    }
    Ok(total / int(e as i64))
}

/// Graft sites `E = {v ∈ min R : Q ↘_v R ≅ P}` with their two orbit
/// partitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitIndex {
    /// `P` is not a graft of `Q` on a minimal vertex of `R`.
    NoMatch,
    Index {
        sites: VertexSet,
        /// Sites grouped by the `Aut(P)`-orbit their image lands in.
        pi: Vec<Vec<usize>>,
        /// Sites grouped by `Aut(R)`-orbit.
        rho: Vec<Vec<usize>>,
        j: Rational,
    },
}

fn blocks(groups: BTreeMap<usize, Vec<usize>>) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

pub fn grafting_orbit_index(p: &Poset, q: &Poset, r: &Poset) -> Result<OrbitIndex> {
    for s in [p, q, r] {
        if !s.is_connected() {
            return Err(Error::NotConnected);
        }
    }
    let key = class_key(p);
    let rep: Poset = key.structure()?;
    let rep_group = automorphisms(&rep);
    let r_group = automorphisms(r);

    let mut sites: VertexSet = 0;
    let mut by_p: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut by_r: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in members(r.min_set()) {
        let g = Poset::from_relation_unchecked(graft_relation(q, v, r));
        let (k, labeling) = canonical_form(&g);
        if k != key {
            continue;
        }
        sites |= 1 << v;
        let orbit_p = rep_group.orbit_of(labeling[v]);
        by_p.entry(orbit_p.trailing_zeros() as usize).or_default().push(v);
        let orbit_r = r_group.orbit_of(v);
        by_r.entry(orbit_r.trailing_zeros() as usize).or_default().push(v);
    }
    if sites == 0 {
        return Ok(OrbitIndex::NoMatch);
    }
    let (pi, rho) = (blocks(by_p), blocks(by_r));
    let j = j_index(&pi, &rho)?;
    Ok(OrbitIndex::Index { sites, pi, rho, j })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::rat;

    #[test]
    fn overlap_index_examples() {
        let pi = vec![vec![1, 2], vec![3, 4]];
        let rho = vec![vec![1, 2, 3], vec![4]];
        assert_eq!(j_index(&pi, &rho).unwrap(), rat(5, 4));
        assert_eq!(j_index(&rho, &pi).unwrap(), int(1));
        let one = vec![vec![0, 1, 2, 3, 4]];
        assert_eq!(j_index(&one, &one).unwrap(), int(1));
    }

    #[test]
    fn overlap_index_errors() {
        assert!(matches!(j_index(&[], &[]), Err(Error::UndefinedIndex)));
        assert!(matches!(
            j_index(&[vec![1]], &[vec![2]]),
            Err(Error::PartitionMismatch)
        ));
        assert!(matches!(
            j_index(&[vec![1], vec![1]], &[vec![1]]),
            Err(Error::PartitionMismatch)
        ));
    }

    #[test]
    fn graft_site_examples() {
        let vee = Poset::from_pairs(3, &[(0, 1), (0, 2)]).unwrap();
        let idx = grafting_orbit_index(&vee, &Poset::point(), &Poset::chain(2)).unwrap();
        match idx {
            OrbitIndex::Index { sites, j, .. } => {
                assert_eq!(sites, 0b01);
                assert_eq!(j, int(1));
            }
            OrbitIndex::NoMatch => panic!("vee is a graft on the minimum"),
        }
        // the 3-chain arises only from the maximum of the 2-chain
        let idx = grafting_orbit_index(&Poset::chain(3), &Poset::point(), &Poset::chain(2)).unwrap();
        assert_eq!(idx, OrbitIndex::NoMatch);
        let wedge = Poset::from_pairs(3, &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(
            grafting_orbit_index(&wedge, &Poset::point(), &Poset::chain(2)).unwrap(),
            OrbitIndex::NoMatch
        );
    }

    #[test]
    fn two_sites_one_orbit() {
        let wedge = Poset::from_pairs(3, &[(0, 2), (1, 2)]).unwrap();
        let zig = Poset::from_pairs(4, &[(0, 2), (1, 2), (1, 3)]).unwrap();
        match grafting_orbit_index(&zig, &Poset::point(), &wedge).unwrap() {
            OrbitIndex::Index { pi, rho, j, .. } => {
                assert_eq!(pi, vec![vec![0, 1]]);
                assert_eq!(rho, vec![vec![0, 1]]);
                assert_eq!(j, int(1));
            }
            OrbitIndex::NoMatch => panic!(),
        }
    }
}
