//! End-to-end checks of the catalog and the library, one verdict line per
//! item with its runtime budget. Run with `cargo test --test acceptance`.

#[path = "../../core/tests/common/oracle.rs"]
mod oracle;

use std::process::ExitCode;
use std::thread;
use std::time::{Duration, Instant};

use alg::suite::shipped_suite;
use taylor_core::catalog::{self, equivalent_up_to_iso, term_equivalent, verify_subdirect, CatalogEntry};
use taylor_core::certify::{Assertion, Status};
use taylor_core::congruence::{all_congruences, is_congruence, is_simple, quotient_algebra};
use taylor_core::op::all_tuples;
use taylor_core::search::{count_ops, search_ops, unique_completion};
use taylor_core::structure::{
    absorbs, dominance_against, has_malcev_term, is_taylor, semilattice_edge, ternary_absorbing_subuniverses,
    two_generated, weak_edges, Dominance,
};
use taylor_core::subpower::{cyclic_terms, free_algebra, rab_analyze, Completion, RabKind};
use taylor_core::{Algebra, Elem, Error, OperationTable, Partition, DEFAULT_CAP};

type Verdict = (Status, String);

fn pass(detail: impl Into<String>) -> Verdict {
    (Status::Pass, detail.into())
}

fn fail(detail: impl Into<String>) -> Verdict {
    (Status::Fail, detail.into())
}

/// Runs a check, turning cap hits into inconclusive verdicts and other
/// errors into failures.
fn guarded(check: impl FnOnce() -> Result<Verdict, Error>) -> Verdict {
    match check() {
        Ok(v) => v,
        Err(Error::Inconclusive { cap }) => (Status::Inconclusive, format!("cap {cap} reached")),
        Err(e) => fail(format!("error: {e}")),
    }
}

/// Collects failures; the first few are kept for the report.
#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
    inconclusive: Vec<String>,
}

impl Tally {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self.inconclusive.extend(other.inconclusive);
    }

    fn verdict(self, summary: impl Into<String>) -> Verdict {
        let summary = format!("{} ({} checks)", summary.into(), self.checked);
        if !self.failures.is_empty() {
            fail(format!("{summary}; {} failed, first: {}", self.failures.len(), self.failures[..self.failures.len().min(3)].join("; ")))
        } else if !self.inconclusive.is_empty() {
            (Status::Inconclusive, format!("{summary}; cap reached for {}", self.inconclusive.join(", ")))
        } else {
            pass(summary)
        }
    }
}

fn entry(name: &str) -> CatalogEntry {
    catalog::get(name).unwrap()
}

fn alg(name: &str) -> Algebra {
    entry(name).algebra
}

fn partition(s: &str) -> Partition {
    s.parse().unwrap()
}

fn entries_of_size(n: usize) -> Vec<CatalogEntry> {
    let all = catalog::all().unwrap();
    match n {
        3 => all.into_iter().filter(|e| e.domain() == 3).collect(),
        // The two extra affine entries are not part of the four-element list.
        _ => all.into_iter().filter(|e| e.name.starts_with("T4,")).collect(),
    }
}

/// Runs `f` on every entry in its own thread and merges the tallies.
fn per_entry(entries: Vec<CatalogEntry>, f: fn(&CatalogEntry) -> Tally) -> Tally {
    let handles: Vec<_> = entries.into_iter().map(|e| thread::spawn(move || f(&e))).collect();
    let mut total = Tally::default();
    for h in handles {
        total.merge(h.join().unwrap());
    }
    total
}

fn catalog_integrity() -> Verdict {
    let entries = match catalog::all() {
        Ok(e) => e,
        Err(e) => return fail(format!("catalog does not load: {e}")),
    };
    let mut t = Tally::default();
    t.expect(entries.len() == 47, || format!("{} entries", entries.len()));
    let mut partial = 0;
    for e in &entries {
        t.expect(e.algebra.is_idempotent(), || format!("{} not idempotent", e.name));
        t.expect(e.check_restrictions().is_ok(), || format!("{} restriction", e.name));
        if let Some((table, constraints)) = &e.partial {
            partial += 1;
            let done = unique_completion(table, constraints);
            t.expect(done.as_ref().is_ok_and(|d| d.values() == e.op().values()), || format!("{} completion {done:?}", e.name));
        }
    }
    let restrictions: usize = entries.iter().map(|e| e.restrictions.len()).sum();
    t.verdict(format!("47 entries, {restrictions} restrictions, {partial} unique completions"))
}

/// The symmetric `g` of a nonconservative entry, rebuilt from its two-element
/// restrictions and its values at 112, 122 and 012.
fn table1_g(on01: fn(&[Elem]) -> Elem, on02: fn(&[Elem]) -> Elem, v112: Elem, v122: Elem, v012: Elem) -> OperationTable {
    OperationTable::from_fn("g", 3, 3, |a| {
        let has = |x| a.contains(&x);
        let ones = a.iter().filter(|&&x| x == 1).count();
        match (has(0), has(1), has(2)) {
            (_, false, false) | (false, true, false) | (false, false, true) => a[0],
            (true, true, false) => on01(&a.iter().map(|&x| x.min(1)).collect::<Vec<_>>()),
            (true, false, true) => on02(&a.iter().map(|&x| x / 2).collect::<Vec<_>>()) * 2,
            (false, true, true) if ones == 2 => v112,
            (false, true, true) => v122,
            (true, true, true) => v012,
        }
    })
}

fn maj(a: &[Elem]) -> Elem {
    Elem::from(a.iter().filter(|&&x| x == 1).count() >= 2)
}

fn aff(a: &[Elem]) -> Elem {
    a[0] ^ a[1] ^ a[2]
}

fn min(a: &[Elem]) -> Elem {
    *a.iter().min().unwrap()
}

fn unique_cyclic_terms() -> Verdict {
    guarded(|| {
        let expected = [
            ("T1N", table1_g(maj, min, 1, 0, 0)),
            ("T2N", table1_g(aff, min, 0, 1, 1)),
            ("T3N", table1_g(maj, aff, 2, 0, 2)),
            ("T4N", table1_g(min, min, 0, 0, 0)),
        ];
        let mut t = Tally::default();
        for (name, g) in &expected {
            let found = cyclic_terms(&alg(name), 3, DEFAULT_CAP, usize::MAX)?;
            t.expect(!found.lower_bound_only, || format!("{name} closure incomplete"));
            t.expect(found.tables.len() == 1, || format!("{name} has {} cyclic terms", found.tables.len()));
            t.expect(found.tables.first().is_some_and(|c| c.values() == g.values()), || format!("{name} table differs"));
        }
        let z3 = cyclic_terms(&alg("Z3aff"), 3, DEFAULT_CAP, usize::MAX)?;
        t.expect(!z3.lower_bound_only && z3.tables.is_empty(), || format!("Z3aff has {} cyclic terms", z3.tables.len()));
        Ok(t.verdict("one ternary cyclic term each for T1N..T4N, none for Z3aff"))
    })
}

fn not_simple() -> Verdict {
    let stated: &[(&str, &[&str])] = &[
        ("T4,1", &["{0,1,2}{3}", "{0}{1,3}{2}"]),
        ("T4,2", &["{0,1,2}{3}", "{0}{1,3}{2}"]),
        ("T4,3", &["{0,1,2}{3}", "{0}{1,3}{2}"]),
        ("T4,4", &["{0,1,2}{3}", "{0}{1}{2,3}"]),
        ("T4,7", &["{0,3}{1}{2}", "{0,1,2}{3}"]),
        ("T4,9", &["{0,2}{1,3}", "{0,3}{1,2}"]),
        ("T4,10", &["{0,2}{1,3}"]),
        ("T4,14", &["{0,3}{1}{2}"]),
    ];
    let mut t = Tally::default();
    let mut named = Vec::new();
    for e in entries_of_size(4) {
        let a = &e.algebra;
        t.expect(two_generated(a).is_some(), || format!("{} not 2-generated", e.name));
        t.expect(!is_simple(a), || format!("{} simple", e.name));
        let cons = all_congruences(a);
        if let Some(c) = cons.iter().find(|c| !c.is_identity() && !c.is_full()) {
            named.push(format!("{} {c}", e.name));
        }
        for (name, parts) in stated.iter().filter(|(n, _)| *n == e.name) {
            for p in *parts {
                let p = partition(p);
                t.expect(cons.contains(&p) && is_congruence(a, &p).unwrap(), || format!("{name} lacks {p}"));
            }
        }
    }
    let sample: Vec<&String> = named.iter().filter(|s| s.starts_with("T4,10 ") || s.starts_with("T4,14 ")).collect();
    t.verdict(format!("18 entries 2-generated, each with a nontrivial congruence, e.g. {sample:?}"))
}

fn taylor() -> Verdict {
    let handles: Vec<_> =
        catalog::all().unwrap().into_iter().map(|e| thread::spawn(move || (e.name, is_taylor(&e.algebra, DEFAULT_CAP)))).collect();
    let mut t = Tally::default();
    for h in handles {
        let (name, r) = h.join().unwrap();
        match r {
            Ok(r) => t.expect(r.taylor, || format!("{name} not Taylor")),
            Err(Error::Inconclusive { .. }) => t.inconclusive.push(name.to_string()),
            Err(e) => t.expect(false, || format!("{name}: {e}")),
        }
    }
    for n in [2, 3] {
        for k in [2, 3] {
            let proj = Algebra::new(n, vec![OperationTable::projection(k, n, 0)]).unwrap();
            let r = is_taylor(&proj, DEFAULT_CAP);
            t.expect(r.as_ref().is_ok_and(|r| !r.taylor), || format!("projection n={n} k={k}: {r:?}"));
        }
    }
    t.verdict("47 entries Taylor, 4 projection algebras not")
}

fn pairwise_distinct() -> Verdict {
    let mut t = Tally::default();
    for n in [3, 4] {
        let entries = entries_of_size(n);
        let mut handles = Vec::new();
        for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                let (a, b) = (entries[i].clone(), entries[j].clone());
                handles.push(thread::spawn(move || (a.name, b.name, equivalent_up_to_iso(&a.algebra, &b.algebra, DEFAULT_CAP))));
            }
        }
        for h in handles {
            let (a, b, r) = h.join().unwrap();
            match r {
                Ok(iso) => t.expect(iso.is_none(), || format!("{a} ~ {b} via {iso:?}")),
                Err(Error::Inconclusive { .. }) => t.inconclusive.push(format!("{a}/{b}")),
                Err(e) => t.expect(false, || format!("{a}/{b}: {e}")),
            }
        }
    }
    t.verdict("24 three-element and 18 four-element entries pairwise inequivalent")
}

fn spot_checks() -> Verdict {
    guarded(|| {
        let mut t = Tally::default();
        t.expect(absorbs(&alg("T2N"), &[0, 1], 2, DEFAULT_CAP)?.holds, || "{0,1} does not 2-absorb T2N".into());
        t.expect(absorbs(&alg("T3N"), &[0, 2], 3, DEFAULT_CAP)?.holds, || "{0,2} does not 3-absorb T3N".into());
        t.expect(term_equivalent(&alg("T4,12"), &alg("Z4aff"), DEFAULT_CAP)?, || "T4,12 vs Z4aff".into());
        let factor = |name: &str| Algebra::new(2, vec![entry(name).op().clone().renamed("f")]).unwrap();
        let product = Algebra::product(&[factor("M"), factor("Z2aff")])?;
        t.expect(equivalent_up_to_iso(&alg("T4,9"), &product, DEFAULT_CAP)?.is_some(), || "T4,9 vs M x Z2aff".into());
        let p = catalog::t4_13_malcev().ops()[0].clone();
        t.expect(p.is_malcev()?, || "T4,13 p not Mal'cev".into());
        let g = entry("T4,13").op().clone();
        for perm in [[2, 1, 0, 3], [0, 3, 2, 1]] {
            t.expect(p.transport(&perm).values() == p.values(), || format!("T4,13 p does not commute with {perm:?}"));
            t.expect(g.transport(&perm).values() == g.values(), || format!("T4,13 g does not commute with {perm:?}"));
        }
        // The catalog stores the cyclic term; the Mal'cev operation generates the same clone.
        t.expect(term_equivalent(&catalog::t4_13_malcev(), &alg("T4,13"), DEFAULT_CAP)?, || "T4,13 p vs g".into());
        let subdirect = [
            ("T4,1", "{0,1,2}{3}", "{0}{1,3}{2}", "S", "T1N"),
            ("T4,2", "{0,1,2}{3}", "{0}{1,3}{2}", "S", "T2N"),
            ("T4,3", "{0,1,2}{3}", "{0}{1,3}{2}", "S", "T3N"),
            ("T4,4", "{0,1,2}{3}", "{0}{1}{2,3}", "S", "T3N"),
            ("T4,7", "{0,1,2}{3}", "{0,3}{1}{2}", "S", "Z3aff"),
        ];
        for (name, p1, p2, b1, b2) in subdirect {
            let ok = verify_subdirect(&alg(name), &partition(p1), &partition(p2), b1, b2, DEFAULT_CAP)?;
            t.expect(ok, || format!("{name} not subdirect in {b1} x {b2}"));
        }
        Ok(t.verdict("absorption, term equivalence, product, Mal'cev symmetry and 5 subdirect decompositions"))
    })
}

/// Absorption and semilattice edges against full clone scans.
fn oracle_entry(e: &CatalogEntry) -> Tally {
    let mut t = Tally::default();
    let (a, n) = (&e.algebra, e.domain());
    for k in [2, 3] {
        let Some(clone) = oracle::clone_of(a, k, DEFAULT_CAP) else {
            t.inconclusive.push(format!("{} Clo_{k}", e.name));
            continue;
        };
        for b in oracle::proper_subsets(n) {
            match absorbs(a, &b, k, DEFAULT_CAP) {
                Ok(r) => t.expect(r.holds == oracle::absorbs_naive(&clone, n, &b), || format!("{} {b:?} arity {k}", e.name)),
                Err(err) => t.expect(false, || format!("{} {b:?}: {err}", e.name)),
            }
        }
        if k == 2 {
            for (x, y) in (0..n as Elem).flat_map(|x| (0..n as Elem).map(move |y| (x, y))).filter(|(x, y)| x != y) {
                let fast = semilattice_edge(a, x, y, DEFAULT_CAP).map(|w| w.is_some());
                t.expect(fast.is_ok_and(|f| f == oracle::semilattice_edge_naive(&clone, n, x, y)), || format!("{} edge {x},{y}", e.name));
            }
        }
    }
    t
}

fn oracle_equivalence() -> Verdict {
    let small: Vec<CatalogEntry> = catalog::all().unwrap().into_iter().filter(|e| e.domain() <= 3).collect();
    let searches = thread::spawn(|| {
        let mut t = Tally::default();
        let mut solutions = 0;
        for spec in oracle::sample_specs(50) {
            let want = oracle::brute_force(&spec);
            solutions += want.len();
            let got = search_ops(&spec).map(|r| r.solutions);
            t.expect(got.as_ref().is_ok_and(|g| g.iter().map(|s| s.values()).eq(want.iter().map(|s| s.values()))), || {
                format!("search differs on {spec:?}")
            });
            t.expect(count_ops(&spec).is_ok_and(|c| c == (want.len(), false)), || format!("count differs on {spec:?}"));
        }
        (t, solutions)
    });
    let mut t = per_entry(small, oracle_entry);
    let (s, solutions) = searches.join().unwrap();
    t.merge(s);
    t.verdict(format!("27 algebras scanned, 50 random specs with {solutions} solutions in total"))
}

/// Every binary term has a dominant coordinate.
fn dominance_entry(e: &CatalogEntry) -> Tally {
    let mut t = Tally::default();
    let absorbing = match ternary_absorbing_subuniverses(&e.algebra, DEFAULT_CAP) {
        Ok(a) => a,
        Err(err) => {
            t.expect(false, || format!("{}: {err}", e.name));
            return t;
        }
    };
    let clo2 = free_algebra(&e.algebra, 2, DEFAULT_CAP).unwrap();
    if clo2.completion() != Completion::Closed {
        t.inconclusive.push(format!("{} Clo_2", e.name));
    }
    for v in clo2.iter() {
        let f = OperationTable::new("t", 2, e.domain(), v.to_vec()).unwrap();
        let d = dominance_against(&f, &absorbing).unwrap();
        t.expect(d != Dominance::Neither, || format!("{} term {v:?} has no dominant coordinate", e.name));
    }
    t
}

/// Some ternary cyclic term, or none when there is none. Cyclic terms pass
/// to quotients, so a quotient without one settles the question before the
/// ternary clone of the whole algebra is searched. `None` on a cap hit.
fn ternary_cyclic(a: &Algebra) -> Option<Option<OperationTable>> {
    if a.ops().iter().any(|f| f.arity() == 3 && f.is_cyclic()) {
        return Some(a.ops().iter().find(|f| f.arity() == 3 && f.is_cyclic()).cloned());
    }
    for theta in all_congruences(a).iter().filter(|p| !p.is_identity() && !p.is_full()) {
        if ternary_cyclic(&quotient_algebra(a, theta).unwrap())?.is_none() {
            return Some(None);
        }
    }
    let found = cyclic_terms(a, 3, DEFAULT_CAP, 1).ok()?;
    match found.tables.into_iter().next() {
        Some(g) => Some(Some(g)),
        None if !found.lower_bound_only => Some(None),
        None => None,
    }
}

/// Binary and ternary absorption against congruences, edges and cyclic terms,
/// the Mal'cev criterion, and loops in linked `R_ab`.
fn properties_entry(e: &CatalogEntry) -> Tally {
    let mut t = Tally::default();
    let (a, n) = (&e.algebra, e.domain());
    let cyclic = ternary_cyclic(a).unwrap_or_else(|| {
        t.inconclusive.push(format!("{} cyclic term", e.name));
        None
    });
    for b in oracle::proper_subsets(n) {
        let outside: Vec<Elem> = (0..n as Elem).filter(|x| !b.contains(x)).collect();
        if absorbs(a, &b, 2, DEFAULT_CAP).unwrap().holds {
            let theta = Partition::with_block(n, &b);
            t.expect(is_congruence(a, &theta).unwrap(), || format!("{} theta_{b:?} not a congruence", e.name));
            for &x in &outside {
                let mut bx = b.clone();
                bx.push(x);
                bx.sort_unstable();
                let semi = a.is_subuniverse(&bx) && {
                    let sub = a.subalgebra(&bx).unwrap();
                    let pos = bx.iter().position(|&y| y == x).unwrap() as Elem;
                    let block = Partition::from_labels(&(0..bx.len()).map(|i| usize::from(i as Elem == pos)).collect::<Vec<_>>());
                    let q = quotient_algebra(&sub, &block).unwrap();
                    let (absorbing, other) = (block.block_of(if pos == 0 { 1 } else { 0 }) as Elem, block.block_of(pos) as Elem);
                    let s = OperationTable::from_fn("s", 2, 2, |v| if v.contains(&absorbing) { absorbing } else { other });
                    term_equivalent(&q, &Algebra::new(2, vec![s]).unwrap(), DEFAULT_CAP).unwrap()
                };
                t.expect(semi, || format!("{} {b:?}+{x} is not a semilattice over {b:?}", e.name));
                let edge = b.iter().any(|&y| semilattice_edge(a, x, y, DEFAULT_CAP).unwrap().is_some());
                t.expect(edge, || format!("{} no semilattice edge from {x} into {b:?}", e.name));
            }
        }
        if let Some(g) = &cyclic {
            if absorbs(a, &b, 3, DEFAULT_CAP).unwrap().holds {
                let ok = all_tuples(n, 3)
                    .filter(|u| u.iter().filter(|x| b.contains(x)).count() >= 2)
                    .all(|u| b.contains(&g.at(&u)));
                t.expect(ok, || format!("{} cyclic term leaves {b:?}", e.name));
            }
        }
    }
    let mut bad_edges = false;
    for x in 0..n as Elem {
        for y in x + 1..n as Elem {
            bad_edges |= weak_edges(a, x, y, DEFAULT_CAP).unwrap().iter().any(|r| r.kind.is_semilattice() || r.kind.is_majority());
        }
    }
    match has_malcev_term(a, DEFAULT_CAP) {
        Ok(m) => t.expect(m != bad_edges, || format!("{} malcev={m} semilattice/majority edges={bad_edges}", e.name)),
        Err(_) => t.inconclusive.push(format!("{} Mal'cev", e.name)),
    }
    for x in 0..n as Elem {
        for y in (0..n as Elem).filter(|&y| y != x) {
            match rab_analyze(a, x, y, DEFAULT_CAP) {
                Ok(r) if r.kind == RabKind::Linked => t.expect(!r.loops.is_empty(), || format!("{} R_{x}{y} linked without loop", e.name)),
                Ok(_) => t.checked += 1,
                Err(_) => t.inconclusive.push(format!("{} R_{x}{y}", e.name)),
            }
        }
    }
    t
}

fn structure_properties() -> Verdict {
    let mut t = per_entry(entries_of_size(3), dominance_entry);
    t.merge(per_entry(catalog::all().unwrap(), properties_entry));
    t.verdict("dominant coordinates, absorption consequences, Mal'cev criterion and loops over the catalog")
}

fn uniqueness() -> Verdict {
    let wanted = ["T4,1", "T4,2", "T4,3", "T4,4", "T4,7", "T4,11"];
    let suite = match shipped_suite() {
        Ok(s) => s,
        Err(e) => return fail(format!("suite does not parse: {e}")),
    };
    let mut t = Tally::default();
    for name in wanted {
        let specs: Vec<_> = suite
            .iter()
            .filter(|s| s.certificate.algebra == name)
            .flat_map(|s| &s.certificate.assertions)
            .filter_map(|a| match a {
                Assertion::UniqueOpUnderConstraints(spec, _) => Some(spec.clone()),
                _ => None,
            })
            .collect();
        t.expect(!specs.is_empty(), || format!("{name} has no uniqueness certificate"));
        let op = entry(name).op().clone();
        for spec in specs {
            let found = search_ops(&spec.with_cap(usize::MAX)).map(|r| r.solutions);
            t.expect(found.as_ref().is_ok_and(|f| f.len() == 1 && f[0].values() == op.values()), || {
                format!("{name}: {} solutions", found.as_ref().map_or(0, Vec::len))
            });
        }
    }
    t.verdict("T4,1 T4,2 T4,3 T4,4 T4,7 T4,11 each have exactly one solution, the catalog table")
}

type Criterion = (&'static str, u64, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("catalog integrity", 120, catalog_integrity),
        ("unique ternary cyclic terms", 60, unique_cyclic_terms),
        ("four-element entries not simple", 60, not_simple),
        ("Taylor test", 300, taylor),
        ("pairwise distinctness", 1800, pairwise_distinct),
        ("structural spot checks", 300, spot_checks),
        ("oracle equivalence", 600, oracle_equivalence),
        ("structure theory properties", 900, structure_properties),
        ("uniqueness certificates", 600, uniqueness),
    ];
    let mut failed = false;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (mut status, mut detail) = check();
        let elapsed = start.elapsed();
        if elapsed > Duration::from_secs(*budget) && status == Status::Pass {
            status = Status::Fail;
            detail = format!("over budget; {detail}");
        }
        failed |= status == Status::Fail;
        println!(
            "criterion {} {:<12} {name} [{:.1}s of {budget}s] {detail}",
            i + 1,
            status.as_str().to_uppercase(),
            elapsed.as_secs_f64()
        );
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
