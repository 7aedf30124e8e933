//! Rooted trees with grafting and root-branch removal: the free pre-Lie /
//! cofree NAP model used to cross-check dimensions of the poset algebra.

use std::collections::BTreeSet;

use num_traits::One;
use serde::Serialize;

use crate::error::Result;
use crate::linear::{flip12, LinComb, Rational};

/// A rooted tree whose vertices carry a decoration label. Children are kept
/// sorted, so structural equality is isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedTree {
    pub label: u32,
    pub children: Vec<RootedTree>,
}

pub type TreeSum = LinComb<RootedTree>;
pub type TreeTensor = LinComb<(RootedTree, RootedTree)>;
pub type TreeTensor3 = LinComb<(RootedTree, RootedTree, RootedTree)>;

impl RootedTree {
    pub fn leaf() -> Self {
        Self::decorated(0)
    }

    pub fn decorated(label: u32) -> Self {
        RootedTree {
            label,
            children: Vec::new(),
        }
    }

    /// `B(label, children)`.
    pub fn node(label: u32, mut children: Vec<RootedTree>) -> Self {
        children.sort();
        RootedTree { label, children }
    }

    pub fn chain(n: usize) -> Self {
        let mut t = Self::leaf();
        for _ in 1..n {
            t = Self::node(0, vec![t]);
        }
        t
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(RootedTree::size).sum::<usize>()
    }

    fn with_child(&self, t: &RootedTree) -> Self {
        let mut children = self.children.clone();
        children.push(t.clone());
        Self::node(self.label, children)
    }

    /// Every tree obtained by attaching the root of `t` below one vertex of
    /// `self`, one entry per vertex.
    fn graft_everywhere(&self, t: &RootedTree) -> Vec<RootedTree> {
        let mut out = vec![self.with_child(t)];
        for (i, child) in self.children.iter().enumerate() {
            for g in child.graft_everywhere(t) {
                let mut children = self.children.clone();
                children[i] = g;
                out.push(Self::node(self.label, children));
            }
        }
        out
    }

    /// Bracket notation, `•` for a plain vertex and `(k)` for label `k`.
    pub fn describe(&self) -> String {
        let root = if self.label == 0 {
            "•".to_string()
        } else {
            format!("({})", self.label)
        };
        if self.children.is_empty() {
            root
        } else {
            let kids: Vec<String> = self.children.iter().map(RootedTree::describe).collect();
            format!("{root}[{}]", kids.join(" "))
        }
    }
}

/// `t → s`: graft the root of `t` on every vertex of `s`.
pub fn tree_graft(t: &RootedTree, s: &RootedTree) -> TreeSum {
    s.graft_everywhere(t)
        .into_iter()
        .map(|g| (g, Rational::one()))
        .collect()
}

pub fn tree_graft_sum(x: &TreeSum, y: &TreeSum) -> TreeSum {
    crate::linear::extend_bilinear(x, y, |a, b| Ok(tree_graft(a, b))).expect("infallible")
}

/// `δ(B(v, t_1..t_n)) = Σ_k t_k ⊗ B(v, t_1..t̂_k..t_n)`.
pub fn tree_nap_coproduct(t: &RootedTree) -> TreeTensor {
    (0..t.children.len())
        .map(|k| {
            let mut rest = t.children.clone();
            let removed = rest.remove(k);
            ((removed, RootedTree::node(t.label, rest)), Rational::one())
        })
        .collect()
}

/// All undecorated rooted trees with `n` vertices, by adding leaves.
pub fn rooted_trees(n: usize) -> Vec<RootedTree> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: BTreeSet<RootedTree> = BTreeSet::from([RootedTree::leaf()]);
    for _ in 1..n {
        level = level
            .iter()
            .flat_map(|t| t.graft_everywhere(&RootedTree::leaf()))
            .collect();
    }
    level.into_iter().collect()
}

/// Number of rooted trees with `n` vertices whose vertices are decorated by
/// generators, `g[k-1]` of them in grade `k`, counted by total grade.
/// Entry `i` of the result is the count in grade `i + 1`.
///
/// Solves `A = G · MSET(A)` with the Euler transform
/// `M_n = (1/n) Σ_k c_k M_{n-k}`, `c_k = Σ_{d|k} d A_d`.
pub fn decorated_tree_counts(g: &[u64], max_n: usize) -> Vec<i128> {
    let gk = |k: usize| -> i128 { g.get(k - 1).copied().unwrap_or(0) as i128 };
    let mut a = vec![0i128; max_n + 1];
    let mut m = vec![0i128; max_n + 1];
    let mut c = vec![0i128; max_n + 1];
    m[0] = 1;
    for n in 1..=max_n {
        // A_n only needs M_0..M_{n-1}
        a[n] = (1..=n).map(|k| gk(k) * m[n - k]).sum();
        c[n] = (1..=n).filter(|d| n % d == 0).map(|d| d as i128 * a[d]).sum();
        let s: i128 = (1..=n).map(|k| c[k] * m[n - k]).sum();
        m[n] = s / n as i128;
    }
    a[1..].to_vec()
}

pub fn rooted_tree_counts(max_n: usize) -> Vec<i128> {
    decorated_tree_counts(&[1], max_n)
}

/// Explicit generation of decorated trees of total grade `n`; labels are
/// `100 * grade + index`.
pub fn decorated_trees(g: &[u64], n: usize) -> Vec<RootedTree> {
    let mut by_weight: Vec<Vec<RootedTree>> = vec![Vec::new(); n + 1];
    for w in 1..=n {
        let mut out = BTreeSet::new();
        for root_grade in 1..=w.min(g.len()) {
            for idx in 0..g[root_grade - 1] {
                let label = 100 * root_grade as u32 + idx as u32;
                for kids in forests(&by_weight, w - root_grade, None) {
                    out.insert(RootedTree::node(label, kids));
                }
            }
        }
        by_weight[w] = out.into_iter().collect();
    }
    by_weight[n].clone()
}

/// Multisets of trees with total weight `w`, each tree at least `floor`.
fn forests(by_weight: &[Vec<RootedTree>], w: usize, floor: Option<&RootedTree>) -> Vec<Vec<RootedTree>> {
    if w == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first_w in 1..=w {
        for t in &by_weight[first_w] {
            if floor.is_some_and(|f| t < f) {
                continue;
            }
            for mut rest in forests(by_weight, w - first_w, Some(t)) {
                rest.push(t.clone());
                out.push(rest);
            }
        }
    }
    out
}

/// One grade of the free pre-Lie dimension check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessRow {
    pub n: usize,
    /// Generator dimension used in grade `n` (the primitive count).
    pub generators: u64,
    /// Decorated-tree count over the generator dimensions.
    pub tree_count: i128,
    /// Connected poset classes.
    pub class_count: i128,
    pub residual: i128,
    /// The value of `g_n` that makes the grade-`n` counts agree.
    pub solved_generator: i128,
}

/// Compare decorated-tree counts with generator dimensions `g` against
/// `classes` (entry `i` for grade `i + 1`).
pub fn freeness_rows(g: &[u64], classes: &[i128]) -> Vec<FreenessRow> {
    let max_n = classes.len();
    let trees = decorated_tree_counts(g, max_n);
    (1..=max_n)
        .map(|n| {
            let mut without = g[..n.min(g.len())].to_vec();
            without.resize(n, 0);
            without[n - 1] = 0;
            let base = decorated_tree_counts(&without, n)[n - 1];
            FreenessRow {
                n,
                generators: g.get(n - 1).copied().unwrap_or(0),
                tree_count: trees[n - 1],
                class_count: classes[n - 1],
                residual: trees[n - 1] - classes[n - 1],
                solved_generator: classes[n - 1] - base,
            }
        })
        .collect()
}

/// The dimension check with primitives and connected classes taken from the
/// enumeration module.
pub fn freeness_check(max_n: usize) -> Result<Vec<FreenessRow>> {
    let mut g = Vec::new();
    let mut classes = Vec::new();
    for n in 1..=max_n {
        g.push(crate::enumerate::primitive_classes(n)?.len() as u64);
        classes.push(crate::enumerate::enumerate_posets(n)?.connected_count() as i128);
    }
    Ok(freeness_rows(&g, &classes))
}

// ---- identity residuals ------------------------------------------------------

pub fn tree_prelie_residual(p: &RootedTree, q: &RootedTree, r: &RootedTree) -> TreeSum {
    let (p, q, r) = (TreeSum::single(p.clone()), TreeSum::single(q.clone()), TreeSum::single(r.clone()));
    let assoc = |a: &TreeSum, b: &TreeSum| {
        &tree_graft_sum(&tree_graft_sum(a, b), &r) - &tree_graft_sum(a, &tree_graft_sum(b, &r))
    };
    &assoc(&p, &q) - &assoc(&q, &p)
}

pub fn tree_coassoc_residual(t: &RootedTree) -> TreeTensor3 {
    let mut twice = TreeTensor3::zero();
    for ((a, b), c) in tree_nap_coproduct(t).iter() {
        for ((x, y), d) in tree_nap_coproduct(b).iter() {
            twice.add_term((a.clone(), x.clone(), y.clone()), c * d);
        }
    }
    &twice - &flip12(&twice)
}

/// `δ(t→s) - t⊗s - (t⊗1 + 1⊗t)→δ(s)`.
pub fn tree_compat_residual(t: &RootedTree, s: &RootedTree) -> TreeTensor {
    let mut residual = TreeTensor::zero();
    for (g, c) in tree_graft(t, s).iter() {
        residual.add_scaled(&tree_nap_coproduct(g), c);
    }
    residual.add_term((t.clone(), s.clone()), -Rational::one());
    for ((x, y), c) in tree_nap_coproduct(s).iter() {
        for (g, d) in tree_graft(t, x).iter() {
            residual.add_term((g.clone(), y.clone()), -(c * d));
        }
        for (g, d) in tree_graft(t, y).iter() {
            residual.add_term((x.clone(), g.clone()), -(c * d));
        }
    }
    residual
}

/// `B(v, t_1..t_n) - (t_n → B(v, t_1..t_{n-1}) - Σ_{i<n} B(v, .., t_n → t_i, ..))`
/// for a tree with at least one root child.
pub fn expansion_residual(t: &RootedTree) -> TreeSum {
    let kids = &t.children;
    let n = kids.len();
    assert!(n > 0, "root needs a child");
    let last = &kids[n - 1];
    let front = RootedTree::node(t.label, kids[..n - 1].to_vec());
    let mut rhs = tree_graft(last, &front);
    for i in 0..n - 1 {
        for (g, c) in tree_graft(last, &kids[i]).iter() {
            let mut others = kids[..n - 1].to_vec();
            others[i] = g.clone();
            rhs.add_term(RootedTree::node(t.label, others), -c.clone());
        }
    }
    &TreeSum::single(t.clone()) - &rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::int;

    fn leaf() -> RootedTree {
        RootedTree::leaf()
    }
    fn cherry() -> RootedTree {
        RootedTree::node(0, vec![leaf(), leaf()])
    }

    #[test]
    fn graft_examples() {
        assert_eq!(tree_graft(&leaf(), &leaf()), TreeSum::single(RootedTree::chain(2)));
        let expect: TreeSum = [(cherry(), int(1)), (RootedTree::chain(3), int(1))].into_iter().collect();
        assert_eq!(tree_graft(&leaf(), &RootedTree::chain(2)), expect);
    }

    #[test]
    fn coproduct_examples() {
        assert!(tree_nap_coproduct(&leaf()).is_zero());
        assert_eq!(
            tree_nap_coproduct(&RootedTree::chain(2)),
            TreeTensor::single((leaf(), leaf()))
        );
        assert_eq!(
            tree_nap_coproduct(&cherry()),
            TreeTensor::term((leaf(), RootedTree::chain(2)), int(2))
        );
    }

    #[test]
    fn counts() {
        assert_eq!(rooted_tree_counts(6), vec![1, 1, 2, 4, 9, 20]);
        for n in 1..=5 {
            assert_eq!(rooted_trees(n).len() as i128, rooted_tree_counts(n)[n - 1]);
        }
        assert_eq!(decorated_tree_counts(&[1, 0, 1, 4], 4), vec![1, 1, 3, 10]);
        assert_eq!(decorated_tree_counts(&[1, 0, 0, 0], 5), rooted_tree_counts(5));
    }

    #[test]
    fn explicit_decorated_generation() {
        let g = [1, 0, 1, 4, 2];
        let counts = decorated_tree_counts(&g, 5);
        for n in 1..=5 {
            assert_eq!(decorated_trees(&g, n).len() as i128, counts[n - 1], "n = {n}");
        }
    }

    #[test]
    fn solved_generators() {
        let rows = freeness_rows(&[1, 0, 1, 4, 22], &[1, 1, 3, 10, 44]);
        assert!(rows.iter().all(|r| r.residual == 0));
        assert_eq!(rows[4].solved_generator, 22);
        assert_eq!(rows[3].solved_generator, 4);
    }

    #[test]
    fn laws_small() {
        let trees: Vec<RootedTree> = (1..=3).flat_map(rooted_trees).collect();
        for p in &trees {
            for q in &trees {
                assert!(tree_compat_residual(p, q).is_zero());
                for r in &trees {
                    assert!(tree_prelie_residual(p, q, r).is_zero());
                }
            }
        }
        for t in rooted_trees(5) {
            assert!(tree_coassoc_residual(&t).is_zero());
        }
    }

    #[test]
    fn expansion_identity() {
        for n in 2..=6 {
            for t in rooted_trees(n) {
                assert!(expansion_residual(&t).is_zero(), "{}", t.describe());
            }
        }
    }
}
