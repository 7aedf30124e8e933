//! The NAP coproduct and duality on finite connected topologies
//! (quasi-orders), where branches hang over a single minimal bag.

use num_traits::Zero;

use crate::canon::{automorphisms, class_key, colored_automorphisms, key_symmetry_factor, ClassKey};
use crate::error::Result;
use crate::linear::{int, Rational, TensorSum};
use crate::nap::{branch_coproduct, lower_shadow, nap_product, pair_tensors};
use crate::poset::{graft_relation, members, Poset, Structure, Topology, VertexSet};

/// A branch of a topology: a component above one minimal bag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TopBranch {
    pub set: VertexSet,
    /// Every point of the anchoring minimal bag.
    pub anchor: VertexSet,
}

pub fn top_branches(t: &Topology) -> Vec<TopBranch> {
    let mut out = Vec::new();
    let mut seen: VertexSet = 0;
    for x in members(t.min_set()) {
        if seen & 1 << x != 0 {
            continue;
        }
        let anchor = t.up_set(x) & t.down_set(x);
        seen |= anchor;
        for set in t.components_within(t.strict_up(x)) {
            if lower_shadow(t, set) == anchor {
                out.push(TopBranch { set, anchor });
            }
        }
    }
    out.sort();
    out
}

/// `δ(T) = (1/|min T|) Σ_Y [T|Y] ⊗ [T|X\Y]`, `|min T|` counting points.
pub fn top_nap_coproduct(t: &Topology) -> TensorSum {
    branch_coproduct(t, top_branches(t).into_iter().map(|b| b.set))
}

/// Both sides of `⟨δ(T), T'⊗T''⟩ = ⟨T, T'⊛T''⟩ / (n |min T|)`.
///
/// `n` is the ratio of matching graft points to matching bags; it is `None`
/// when no graft of `t1` on a minimal point of `t2` gives `t`, and then the
/// identity reads `lhs = 0 = pairing`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopDuality {
    pub lhs: Rational,
    /// `⟨T, T'⊛T''⟩`.
    pub pairing: Rational,
    pub n: Option<Rational>,
    pub rhs: Option<Rational>,
    pub equal: bool,
}

pub fn top_duality_check(t: &Topology, t1: &Topology, t2: &Topology) -> Result<TopDuality> {
    let key = class_key(t);
    let lhs = pair_tensors(&top_nap_coproduct(t), &TensorSum::single((class_key(t1), class_key(t2))));
    let sigma = int(key_symmetry_factor(&key) as i64);
    let pairing = nap_product(t1, t2)?.coeff(&key) * &sigma;

    let mut points = 0i64;
    let mut bags: VertexSet = 0;
    let mut bag_count = 0i64;
    for v in members(t2.min_set()) {
        let g = Topology::from_relation_unchecked(graft_relation(t1, v, t2));
        if class_key(&g) == key {
            points += 1;
            if bags & 1 << v == 0 {
                bags |= t2.up_set(v) & t2.down_set(v);
                bag_count += 1;
            }
        }
    }
    let minimal = int(t.min_set().count_ones() as i64);
    if points == 0 {
        return Ok(TopDuality {
            equal: lhs.is_zero() && pairing.is_zero(),
            lhs,
            pairing,
            n: None,
            rhs: None,
        });
    }
    let n = Rational::new(points.into(), bag_count.into());
    let rhs = &pairing / (&n * minimal);
    Ok(TopDuality {
        equal: lhs == rhs,
        lhs,
        pairing,
        n: Some(n),
        rhs: Some(rhs),
    })
}

/// `|Aut(T)|`, `|G|` (automorphisms fixing every bag setwise) and the order
/// of the bag-size-preserving automorphism group of the quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuotientGroupOrders {
    pub aut: usize,
    pub bag_fixing: usize,
    pub quotient: usize,
}

impl QuotientGroupOrders {
    pub fn consistent(&self) -> bool {
        self.aut == self.bag_fixing * self.quotient
    }
}

pub fn quotient_group_orders(t: &Topology) -> QuotientGroupOrders {
    let bags = t.bags_and_quotient();
    let group = automorphisms(t);
    let bag_fixing = group
        .elements
        .iter()
        .filter(|g| (0..g.len()).all(|x| bags.bag_of[g[x]] == bags.bag_of[x]))
        .count();
    let sizes: Vec<u8> = bags.bags.iter().map(|b| b.count_ones() as u8).collect();
    QuotientGroupOrders {
        aut: group.order(),
        bag_fixing,
        quotient: colored_automorphisms(bags.quotient.relation(), &sizes).order(),
    }
}

/// Lift a poset-valued tensor to topology keys.
pub fn lift_tensor(t: &TensorSum) -> TensorSum {
    t.map_keys(|(a, b)| (a.to_topology(), b.to_topology()))
}

/// The topology key of a poset.
pub fn lift_key(p: &Poset) -> ClassKey {
    class_key(&p.as_topology())
}
