//! Brute-force reference implementations used to cross-check the library.
//! Each one works straight from definitions: full enumeration of operation
//! tables, or a scan over every element of a free algebra.

#![allow(dead_code)]

use proptest::prelude::*;
use taylor_core::op::{all_tuples, encode_index, table_len};
use taylor_core::search::{Constraint, SearchSpec};
use taylor_core::subpower::{free_algebra, Completion};
use taylor_core::{Algebra, Elem, GeneratedSet, OperationTable, PartialTable, Partition};

/// Shapes small enough to enumerate. Arity 3 on three elements is only
/// enumerated over cyclic tables.
pub const SHAPES: [(usize, usize); 6] = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)];

fn rotate(t: &[Elem]) -> Vec<Elem> {
    let mut r = t.to_vec();
    r.rotate_left(1);
    r
}

fn swap01(t: &[Elem]) -> Vec<Elem> {
    let mut r = t.to_vec();
    if r.len() > 1 {
        r.swap(0, 1);
    }
    r
}

/// Decides a constraint by checking its definition on every argument tuple.
pub fn holds(f: &OperationTable, c: &Constraint) -> bool {
    let (n, k) = (f.domain(), f.arity());
    let tuples: Vec<Vec<Elem>> = all_tuples(n, k).collect();
    match c {
        Constraint::Idempotent => (0..n as Elem).all(|x| f.at(&vec![x; k]) == x),
        Constraint::Cyclic => tuples.iter().all(|t| f.at(t) == f.at(&rotate(t))),
        // A rotation and a transposition generate every permutation.
        Constraint::Symmetric => tuples.iter().all(|t| f.at(t) == f.at(&rotate(t)) && f.at(t) == f.at(&swap01(t))),
        Constraint::Commutative => tuples.iter().all(|t| f.at(t) == f.at(&swap01(t))),
        Constraint::PreservesRelation(rel) => all_tuples(rel.len(), k).all(|rows| {
            let image: Vec<Elem> = (0..rel[0].len())
                .map(|j| f.at(&rows.iter().map(|&r| rel[r as usize][j]).collect::<Vec<_>>()))
                .collect();
            rel.contains(&image)
        }),
        Constraint::InvariantPartition(p) => tuples.iter().all(|s| {
            tuples.iter().all(|t| !s.iter().zip(t).all(|(&x, &y)| p.related(x, y)) || p.related(f.at(s), f.at(t)))
        }),
        Constraint::QuotientEquals(p, q) => {
            holds(f, &Constraint::InvariantPartition(p.clone()))
                && tuples.iter().all(|t| {
                    let blocks: Vec<Elem> = t.iter().map(|&x| p.block_of(x) as Elem).collect();
                    p.block_of(f.at(t)) == q.at(&blocks) as usize
                })
        }
        Constraint::RestrictionEquals(subset, r) => all_tuples(subset.len(), k).all(|local| {
            let global: Vec<Elem> = local.iter().map(|&i| subset[i as usize]).collect();
            f.at(&global) == subset[r.at(&local) as usize]
        }),
        Constraint::PartialValues(p) => tuples.iter().all(|t| p.get(t).is_none_or(|v| v == f.at(t))),
        Constraint::CommutesWithPermutation(pi) => tuples.iter().all(|t| {
            let image: Vec<Elem> = t.iter().map(|&x| pi[x as usize]).collect();
            f.at(&image) == pi[f.at(t) as usize]
        }),
        Constraint::AgreesOnTuples(pairs) => pairs.iter().all(|(t, v)| f.at(t) == *v),
    }
}

/// Every table of the spec's shape satisfying all its constraints, in
/// lexicographic order of value lists. When the spec asks for a cyclic table
/// only cyclic tables are enumerated, by choosing one value per orbit.
pub fn brute_force(spec: &SearchSpec) -> Vec<OperationTable> {
    let (n, k) = (spec.domain, spec.arity);
    let len = table_len(n, k);
    // Representative cell of each cell's orbit.
    let rep: Vec<usize> = if spec.constraints.contains(&Constraint::Cyclic) {
        all_tuples(n, k)
            .map(|t| {
                let mut best = t.clone();
                let mut r = t;
                for _ in 1..k {
                    r = rotate(&r);
                    best = best.min(r.clone());
                }
                encode_index(&best, n)
            })
            .collect()
    } else {
        (0..len).collect()
    };
    let mut free: Vec<usize> = rep.clone();
    free.sort_unstable();
    free.dedup();
    assert!(free.len() <= 12, "{} free cells is too many to enumerate", free.len());
    let mut out = Vec::new();
    for choice in all_tuples(n, free.len()) {
        let mut values = vec![0; len];
        for (cell, v) in values.iter_mut().enumerate() {
            *v = choice[free.binary_search(&rep[cell]).unwrap()];
        }
        let f = OperationTable::new("f", k, n, values).unwrap();
        if spec.constraints.iter().all(|c| holds(&f, c)) {
            out.push(f);
        }
    }
    out.sort_by(|a, b| a.values().cmp(b.values()));
    out
}

fn elems(n: usize) -> impl Strategy<Value = Elem> {
    0..n as Elem
}

fn table(n: usize, k: usize) -> impl Strategy<Value = OperationTable> {
    prop::collection::vec(elems(n), table_len(n, k)).prop_map(move |v| OperationTable::new("r", k, n, v).unwrap())
}

fn partition(n: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..n, n).prop_map(|labels| Partition::from_labels(&labels))
}

/// One random constraint for tables of arity `k` over `n` elements.
pub fn constraint(n: usize, k: usize) -> BoxedStrategy<Constraint> {
    let quotient = partition(n)
        .prop_flat_map(move |p| {
            let m = p.num_blocks();
            (Just(p), table(m, k))
        })
        .prop_map(|(p, q)| Constraint::QuotientEquals(p, q));
    let restriction = prop::sample::subsequence((0..n as Elem).collect::<Vec<_>>(), 2)
        .prop_flat_map(move |s| (Just(s), table(2, k)))
        .prop_map(|(s, r)| Constraint::RestrictionEquals(s, r));
    let partial = prop::collection::vec(prop::option::weighted(0.2, elems(n)), table_len(n, k))
        .prop_map(move |v| Constraint::PartialValues(PartialTable::new(k, n, v).unwrap()));
    prop_oneof![
        Just(Constraint::Idempotent),
        Just(Constraint::Cyclic),
        Just(Constraint::Symmetric),
        Just(Constraint::Commutative),
        prop::collection::vec(prop::collection::vec(elems(n), 2), 1..=4).prop_map(Constraint::PreservesRelation),
        partition(n).prop_map(Constraint::InvariantPartition),
        quotient,
        restriction,
        partial,
        Just((0..n as Elem).collect::<Vec<_>>()).prop_shuffle().prop_map(Constraint::CommutesWithPermutation),
        prop::collection::vec((prop::collection::vec(elems(n), k), elems(n)), 1..=2)
            .prop_map(Constraint::AgreesOnTuples),
    ]
    .boxed()
}

/// A random spec over one of [`SHAPES`]. Ternary specs on three elements
/// always include idempotency and cyclicity so they stay enumerable.
pub fn spec() -> impl Strategy<Value = SearchSpec> {
    prop::sample::select(&SHAPES[..]).prop_flat_map(|(n, k)| {
        prop::collection::vec(constraint(n, k), 0..=3).prop_map(move |mut cs| {
            if (n, k) == (3, 3) {
                cs.insert(0, Constraint::Cyclic);
                cs.insert(0, Constraint::Idempotent);
            }
            SearchSpec::new(n, k, cs)
        })
    })
}

/// `count` specs from a fixed seed, so every run checks the same cases.
pub fn sample_specs(count: usize) -> Vec<SearchSpec> {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::TestRunner;
    let mut runner = TestRunner::deterministic();
    let strategy = spec();
    (0..count).map(|_| strategy.new_tree(&mut runner).unwrap().current()).collect()
}

/// The complete clone `Clo_k`, or `None` when the cap stops the closure.
pub fn clone_of(alg: &Algebra, k: usize, cap: usize) -> Option<GeneratedSet> {
    let set = free_algebra(alg, k, cap).ok()?;
    (set.completion() == Completion::Closed).then_some(set)
}

/// Nonempty proper subsets, as sorted element lists.
pub fn proper_subsets(n: usize) -> Vec<Vec<Elem>> {
    (1..(1u32 << n) - 1).map(|m| (0..n as Elem).filter(|&x| m >> x & 1 == 1).collect()).collect()
}

/// Whether some term of the scanned clone lands in `subset` whenever all but
/// at most one argument lie in it.
pub fn absorbs_naive(clone: &GeneratedSet, n: usize, subset: &[Elem]) -> bool {
    let k = clone.exponent().ilog(n) as usize;
    let cells: Vec<usize> = all_tuples(n, k)
        .filter(|t| t.iter().filter(|x| !subset.contains(x)).count() <= 1)
        .map(|t| encode_index(&t, n))
        .collect();
    clone.iter().any(|t| cells.iter().all(|&c| subset.contains(&t[c])))
}

/// Whether some binary term has `t(a,b) = t(b,a) = b`.
pub fn semilattice_edge_naive(clo2: &GeneratedSet, n: usize, a: Elem, b: Elem) -> bool {
    let (ab, ba) = (a as usize * n + b as usize, b as usize * n + a as usize);
    clo2.iter().any(|t| t[ab] == b && t[ba] == b)
}
