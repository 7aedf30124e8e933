//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the report reads top to bottom.

use std::time::Instant;

use prelie_core::canon::{automorphisms, class_key, oracle::permutations};
use prelie_core::enumerate::{enumerate_posets, enumerate_topologies, primitive_classes};
use prelie_core::linear::{in_span, int, rat};
use prelie_core::nap::nap_coproduct;
use prelie_core::orbit::j_index;
use prelie_core::poset::Kind;
use prelie_core::trees::freeness_check;
use prelie_core::verify::{labeled_consistency, run, Law};
use prelie_core::{FormalSum, Poset, Structure, TensorSum};

type Outcome = Result<String, String>;

fn poset(n: usize, pairs: &[(usize, usize)]) -> Poset {
    Poset::from_pairs(n, pairs).expect("valid poset")
}

fn sweep(law: Law, topologies: bool, max_total: usize) -> Outcome {
    let r = run(law, topologies, max_total, 4).map_err(|e| e.to_string())?;
    if r.passed() {
        Ok(format!("{} {}: {} instances", r.law, r.range, r.instances))
    } else {
        Err(format!(
            "{} {}: {} of {} failed, first {:?}",
            r.law,
            r.range,
            r.failures.len(),
            r.instances,
            r.failures[0]
        ))
    }
}

fn all(parts: Vec<Outcome>) -> Outcome {
    let mut ok = Vec::new();
    for p in parts {
        ok.push(p?);
    }
    Ok(ok.join("; "))
}

fn check(cond: bool, what: &str) -> Outcome {
    if cond {
        Ok(what.to_string())
    } else {
        Err(format!("{what} does not hold"))
    }
}

fn figure_coproducts() -> Outcome {
    let point = class_key(&Poset::point());
    let c2 = class_key(&Poset::chain(2));
    let wedge = poset(3, &[(0, 2), (1, 2)]);
    let w = class_key(&wedge);
    let vee = poset(3, &[(0, 1), (0, 2)]);
    let zig = poset(4, &[(0, 2), (1, 2), (1, 3)]);
    let diamond = poset(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
    all(vec![
        check(nap_coproduct(&wedge).is_zero(), "δ(W) = 0"),
        check(
            nap_coproduct(&vee) == TensorSum::term((point.clone(), c2), int(2)),
            "δ(V) = 2 •⊗C2",
        ),
        check(
            nap_coproduct(&zig) == TensorSum::term((point.clone(), w.clone()), rat(1, 2)),
            "δ(a<c,b<c,b<d) = 1/2 •⊗W",
        ),
        check(
            nap_coproduct(&diamond) == TensorSum::single((w, point)),
            "δ(diamond) = W⊗•",
        ),
    ])
}

fn primitive_counts() -> Outcome {
    let counts: Vec<usize> = (1..=4)
        .map(|n| primitive_classes(n).map(|b| b.len()))
        .collect::<prelie_core::Result<_>>()
        .map_err(|e| e.to_string())?;
    if counts != [1, 0, 1, 4] {
        return Err(format!("primitive counts {counts:?}"));
    }
    let figures = [
        poset(4, &[(0, 3), (1, 3), (2, 3)]),
        poset(4, &[(0, 2), (1, 2), (2, 3)]),
        poset(4, &[(0, 1), (1, 3), (2, 3)]),
        poset(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]),
    ];
    let singles: Vec<FormalSum> = figures.iter().map(|p| FormalSum::single(class_key(p))).collect();
    let basis = primitive_classes(4).map_err(|e| e.to_string())?;
    let primitive = figures.iter().all(|p| nap_coproduct(p).is_zero());
    let spans = basis.iter().all(|b| in_span(&singles, b));
    let distinct = {
        let mut keys: Vec<_> = singles.iter().flat_map(|s| s.keys().cloned().collect::<Vec<_>>()).collect();
        keys.sort();
        keys.dedup();
        keys.len() == 4
    };
    all(vec![
        Ok("counts 1, 0, 1, 4".to_string()),
        check(primitive && spans && distinct, "grade-4 kernel spanned by the four single classes"),
    ])
}

fn algebra_laws() -> Outcome {
    all(vec![
        sweep(Law::Nap, false, 7),
        sweep(Law::Prelie, false, 7),
        sweep(Law::NapCo, false, 6),
    ])
}

fn orbit_index() -> Outcome {
    let pi = vec![vec![1, 2], vec![3, 4]];
    let rho = vec![vec![1, 2, 3], vec![4]];
    let a = j_index(&pi, &rho).map_err(|e| e.to_string())?;
    let b = j_index(&rho, &pi).map_err(|e| e.to_string())?;
    all(vec![
        sweep(Law::JIndex, false, 7),
        check(a == rat(5, 4) && b == int(1), "j(π,ρ) = 5/4 and j(ρ,π) = 1"),
    ])
}

fn freeness() -> Outcome {
    let rows = freeness_check(5).map_err(|e| e.to_string())?;
    let residuals: Vec<i128> = rows.iter().map(|r| r.residual).collect();
    let trees: Vec<i128> = rows.iter().map(|r| r.tree_count).collect();
    all(vec![
        check(residuals.iter().all(|&r| r == 0), "zero residuals for n <= 5"),
        check(trees[3] == 10 && trees[4] == 44, "tree counts 10 and 44 at n = 4, 5"),
        check(rows[4].solved_generator == 22, "g5 solves to 22"),
    ])
}

fn topological() -> Outcome {
    all(vec![
        sweep(Law::T0, true, 5),
        sweep(Law::NapCo, true, 4),
        sweep(Law::Duality, true, 5),
    ])
}

fn bracket_and_coproducts() -> Outcome {
    all(vec![
        sweep(Law::Jacobi, false, 7),
        sweep(Law::SearrowCoassoc, false, 5),
        sweep(Law::CkCoassoc, false, 5),
    ])
}

fn relabeling_invariance() -> bool {
    (1..=5).all(|n| {
        let perms = permutations(n);
        enumerate_posets(n).unwrap().rows.iter().all(|row| {
            let p: Poset = row.key.structure().unwrap();
            perms.iter().all(|perm| class_key(&p.relabel(perm)) == row.key)
        })
    })
}

fn orbit_stabilizer() -> bool {
    let rows = (1..=5).flat_map(|n| {
        let mut keys: Vec<_> = enumerate_posets(n).unwrap().rows.iter().map(|r| r.key.clone()).collect();
        keys.extend(enumerate_topologies(n).unwrap().rows.iter().map(|r| r.key.clone()));
        keys
    });
    rows.into_iter().all(|key| {
        let g = automorphisms(&prelie_core::Topology::from_relation_unchecked(key.relation()));
        (0..g.n).all(|v| g.orbit_of(v).count_ones() as usize * g.stabilizer_orders[v] == g.order())
    })
}

fn infrastructure() -> Outcome {
    let mut counts = Vec::new();
    for kind in [Kind::Poset, Kind::Topology] {
        for n in 1..=5 {
            let (orbit_sum, labeled) = labeled_consistency(kind, n).map_err(|e| e.to_string())?;
            if orbit_sum != labeled {
                return Err(format!("{} n={n}: Σ n!/σ = {orbit_sum}, labeled {labeled}", kind.name()));
            }
            counts.push(labeled);
        }
    }
    all(vec![
        check(relabeling_invariance(), "relabeling invariance for n <= 5"),
        check(orbit_stabilizer(), "orbit-stabilizer on every class n <= 5"),
        Ok(format!("Σ n!/σ = labeled counts {counts:?}")),
    ])
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("figure coproducts", figure_coproducts),
        ("primitive counts", primitive_counts),
        ("NAP, pre-Lie and NAP co-laws", algebra_laws),
        ("compatibility", || sweep(Law::Compat, false, 7)),
        ("duality", || sweep(Law::Duality, false, 7)),
        ("graft orbit index", orbit_index),
        ("freeness dimensions", freeness),
        ("topological suite", topological),
        ("Jacobi and coassociativity", bracket_and_coproducts),
        ("infrastructure", infrastructure),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
