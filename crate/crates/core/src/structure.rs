//! Absorption, edges, the Taylor test via weak edges, Mal'cev and affine
//! recognition, and generation predicates.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::congruence::{all_congruences, quotient_algebra};
use crate::error::{Error, Result};
use crate::groups::groups_of_order;
use crate::op::{all_tuples, normalize_subset, permutations, Algebra, Elem, OperationTable};
use crate::partition::{Partition, UnionFind};
use crate::subpower::{
    binary_invariants, clone_membership, cyclic_shift_positions, free_algebra_until, generate, refuted_by_invariants, Completion,
    Stop,
};
use crate::term::{default_var_names, Term};

#[derive(Clone, Debug)]
pub struct AbsorptionResult {
    pub subset: Vec<Elem>,
    pub arity: usize,
    pub holds: bool,
    /// A term sending every pattern tuple into the subset, when one exists.
    pub witness: Option<Term>,
    /// Whether the subset is itself a subuniverse.
    pub subuniverse: bool,
}

/// All `arity`-tuples over the domain with at least `arity − 1` entries in
/// `subset`, in lexicographic order.
pub fn pattern_positions(domain: usize, subset: &[Elem], arity: usize) -> Vec<Vec<Elem>> {
    all_tuples(domain, arity)
        .filter(|t| t.iter().filter(|x| subset.contains(x)).count() + 1 >= arity)
        .collect()
}

/// Decides whether `subset` absorbs `alg` with respect to some `arity`-ary
/// term (arity 2 or 3).
pub fn absorbs(alg: &Algebra, subset: &[Elem], arity: usize, cap: usize) -> Result<AbsorptionResult> {
    let subset = normalize_subset(subset, alg.domain())?;
    if subset.is_empty() {
        return Err(Error::EmptyAlgebra);
    }
    if !(2..=3).contains(&arity) {
        return Err(Error::Unsupported("absorption arity must be 2 or 3"));
    }
    let positions = pattern_positions(alg.domain(), &subset, arity);
    let gens: Vec<Vec<Elem>> = (0..arity).map(|i| positions.iter().map(|t| t[i]).collect()).collect();
    let inside = |t: &[Elem]| t.iter().all(|x| subset.contains(x));
    if refuted_on_subuniverses(alg, &subset, &positions, &gens, cap) || refuted_on_quotients(alg, &subset, arity, cap)
    {
        return Ok(AbsorptionResult {
            subuniverse: alg.is_subuniverse(&subset),
            holds: false,
            witness: None,
            subset,
            arity,
        });
    }
    let set = generate(alg, positions.len(), &gens, cap, Stop::When(&inside))?;
    let hit = set.hit().or_else(|| set.iter().position(inside));
    if hit.is_none() && set.is_truncated() {
        return Err(Error::Inconclusive { cap });
    }
    Ok(AbsorptionResult {
        subuniverse: alg.is_subuniverse(&subset),
        holds: hit.is_some(),
        witness: hit.map(|i| set.witness_term(i)),
        subset,
        arity,
    })
}

/// Bound on each restricted closure tried before the full one.
const RESTRICTED_CAP: usize = 1_000;

/// Projecting onto a set of positions commutes with generation, so when the
/// closure over the positions inside `C^n` misses the target region for some
/// subuniverse `C`, so does the full closure. Subuniverses are natural choices
/// of position sets: a term absorbing into `B` also absorbs `C` into `B ∩ C`.
fn refuted_on_subuniverses(
    alg: &Algebra,
    subset: &[Elem],
    positions: &[Vec<Elem>],
    gens: &[Vec<Elem>],
    cap: usize,
) -> bool {
    let n = alg.domain();
    for c in all_subuniverses(alg) {
        if c.len() == n || c.iter().all(|x| subset.contains(x)) {
            continue;
        }
        let keep: Vec<usize> =
            (0..positions.len()).filter(|&p| positions[p].iter().all(|x| c.contains(x))).collect();
        if keep.is_empty() {
            continue;
        }
        let restricted: Vec<Vec<Elem>> = gens.iter().map(|g| keep.iter().map(|&p| g[p]).collect()).collect();
        let inside = |t: &[Elem]| t.iter().all(|x| subset.contains(x));
        let Ok(set) = generate(alg, keep.len(), &restricted, cap.min(RESTRICTED_CAP), Stop::When(&inside)) else {
            continue;
        };
        if set.completion() == Completion::Closed && set.hit().is_none() && !set.iter().any(inside) {
            return true;
        }
    }
    false
}

/// A term absorbing `A` into `B` also absorbs `A/θ` into the image of `B`,
/// since every pattern tuple of the quotient lifts to one of `A`.
fn refuted_on_quotients(alg: &Algebra, subset: &[Elem], arity: usize, cap: usize) -> bool {
    all_congruences(alg).iter().filter(|p| !p.is_identity() && !p.is_full()).any(|theta| {
        let mut image: Vec<Elem> = subset.iter().map(|&x| theta.block_of(x) as Elem).collect();
        image.dedup();
        image.len() < theta.num_blocks()
            && quotient_algebra(alg, theta)
                .and_then(|q| absorbs(&q, &image, arity, cap))
                .is_ok_and(|r| !r.holds)
    })
}

/// A binary term with `t(a,b) = t(b,a) = b`, if any.
pub fn semilattice_edge(alg: &Algebra, a: Elem, b: Elem, cap: usize) -> Result<Option<Term>> {
    check_pair(alg, a, b)?;
    let target = [vec![b, b]];
    let set = generate(alg, 2, &[vec![a, b], vec![b, a]], cap, Stop::Targets(&target))?;
    match set.index_of(&[b, b]) {
        Some(i) => Ok(Some(set.witness_term(i))),
        None if set.is_truncated() => Err(Error::Inconclusive { cap }),
        None => Ok(None),
    }
}

fn check_pair(alg: &Algebra, a: Elem, b: Elem) -> Result<()> {
    let n = alg.domain();
    for x in [a, b] {
        if x as usize >= n {
            return Err(Error::OutOfRange { value: x as usize, domain: n });
        }
    }
    if a == b {
        return Err(Error::Unsupported("edges need two distinct elements"));
    }
    Ok(())
}

fn mask_of(elems: &[Elem]) -> u32 {
    elems.iter().fold(0, |m, &x| m | 1 << x)
}

fn elems_of(mask: u32) -> Vec<Elem> {
    (0..32).filter(|&x| mask >> x & 1 == 1).collect()
}

fn sg_mask(alg: &Algebra, mut mask: u32) -> u32 {
    loop {
        let elems = elems_of(mask);
        let mut next = mask;
        for op in alg.ops() {
            let mut args = vec![0; op.arity()];
            let mut idx = vec![0; op.arity()];
            'tuples: loop {
                for (a, &i) in args.iter_mut().zip(&idx) {
                    *a = elems[i];
                }
                next |= 1 << op.at(&args);
                for p in (0..idx.len()).rev() {
                    idx[p] += 1;
                    if idx[p] < elems.len() {
                        continue 'tuples;
                    }
                    idx[p] = 0;
                }
                break;
            }
        }
        if next == mask {
            return mask;
        }
        mask = next;
    }
}

/// The subuniverse generated by `gens`, ascending.
pub fn subuniverse_generated(alg: &Algebra, gens: &[Elem]) -> Result<Vec<Elem>> {
    let gens = normalize_subset(gens, alg.domain())?;
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    Ok(elems_of(sg_mask(alg, mask_of(&gens))))
}

/// Every nonempty subuniverse, sorted by size and then lexicographically.
pub fn all_subuniverses(alg: &Algebra) -> Vec<Vec<Elem>> {
    let n = alg.domain() as Elem;
    let mut masks: Vec<u32> = Vec::new();
    for x in 0..n {
        let m = sg_mask(alg, 1 << x);
        if !masks.contains(&m) {
            masks.push(m);
        }
    }
    // Every subuniverse is reached by adding generators one at a time.
    let mut i = 0;
    while i < masks.len() {
        for x in 0..n {
            if masks[i] >> x & 1 == 0 {
                let m = sg_mask(alg, masks[i] | 1 << x);
                if !masks.contains(&m) {
                    masks.push(m);
                }
            }
        }
        i += 1;
    }
    let mut subs: Vec<Vec<Elem>> = masks.into_iter().map(elems_of).collect();
    subs.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    subs
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Semilattice,
    WeakSemilattice,
    WeakMajority,
    WeakAffine,
    Majority,
    Affine,
    StrongAffine,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 7] = [
        EdgeKind::Semilattice,
        EdgeKind::WeakSemilattice,
        EdgeKind::WeakMajority,
        EdgeKind::WeakAffine,
        EdgeKind::Majority,
        EdgeKind::Affine,
        EdgeKind::StrongAffine,
    ];

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == name)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Semilattice => "semilattice",
            EdgeKind::WeakSemilattice => "weak-semilattice",
            EdgeKind::WeakMajority => "weak-majority",
            EdgeKind::WeakAffine => "weak-affine",
            EdgeKind::Majority => "majority",
            EdgeKind::Affine => "affine",
            EdgeKind::StrongAffine => "strong-affine",
        }
    }

    pub fn is_semilattice(self) -> bool {
        matches!(self, EdgeKind::Semilattice | EdgeKind::WeakSemilattice)
    }

    pub fn is_majority(self) -> bool {
        matches!(self, EdgeKind::Majority | EdgeKind::WeakMajority)
    }

    pub fn is_affine(self) -> bool {
        matches!(self, EdgeKind::Affine | EdgeKind::WeakAffine | EdgeKind::StrongAffine)
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One edge found between two elements. For semilattice kinds the edge is
/// directed: the term sends both `(from, to)` and `(to, from)` to the class
/// of `to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRecord {
    pub from: Elem,
    pub to: Elem,
    pub kind: EdgeKind,
    /// `Sg{from, to}`, ascending.
    pub universe: Vec<Elem>,
    /// The witnessing congruence of `Sg{from, to}`, indexed by position in
    /// `universe`.
    pub congruence: Partition,
    pub term: Option<Term>,
}

impl EdgeRecord {
    /// The witnessing congruence with blocks in original element names.
    pub fn witness_blocks(&self) -> Vec<Vec<Elem>> {
        self.congruence.blocks().iter().map(|b| b.iter().map(|&i| self.universe[i as usize]).collect()).collect()
    }

    /// `a-b kind witness={..}{..} term=..`.
    pub fn render(&self, alg: &Algebra) -> String {
        let mut witness = String::new();
        for block in self.witness_blocks() {
            witness.push('{');
            for (i, x) in block.iter().enumerate() {
                if i > 0 {
                    witness.push(',');
                }
                witness.push_str(&format!("{x}"));
            }
            witness.push('}');
        }
        let mut line = format!("{}-{} {} witness={}", self.from, self.to, self.kind, witness);
        if let Some(t) = &self.term {
            let names = default_var_names(3);
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            line.push_str(" term=");
            line.push_str(&t.render(alg, &names));
        }
        line
    }
}

/// A ternary term acting as majority on `{a, b}`, if any.
fn majority_on_pair(alg: &Algebra, a: Elem, b: Elem, cap: usize) -> Result<Option<Term>> {
    let positions = [[a, a, b], [a, b, a], [b, a, a], [a, b, b], [b, a, b], [b, b, a]];
    let gens: Vec<Vec<Elem>> = (0..3).map(|i| positions.iter().map(|t| t[i]).collect()).collect();
    let target = [vec![a, a, a, b, b, b]];
    let set = generate(alg, 6, &gens, cap, Stop::Targets(&target))?;
    match set.index_of(&target[0]) {
        Some(i) => Ok(Some(set.witness_term(i))),
        None if set.is_truncated() => Err(Error::Inconclusive { cap }),
        None => Ok(None),
    }
}

/// The distinct tables `x − y + z` over every abelian group of order `n` and
/// every labeling, in enumeration order, each with its group name and
/// labeling.
pub fn affine_candidates(n: usize) -> Result<Vec<(&'static str, Vec<Elem>, OperationTable)>> {
    let mut out: Vec<(&'static str, Vec<Elem>, OperationTable)> = Vec::new();
    for g in groups_of_order(n)? {
        for labeling in permutations(n) {
            let p = g.malcev_table(&labeling);
            if !out.iter().any(|(_, _, q)| q.values() == p.values()) {
                out.push((g.name(), labeling, p));
            }
        }
    }
    Ok(out)
}

/// A term of `alg` whose table is `x − y + z` for some abelian group on the
/// domain.
fn affine_term(alg: &Algebra, cap: usize) -> Result<Option<Term>> {
    let candidates: Vec<OperationTable> = affine_candidates(alg.domain())?
        .into_iter()
        .map(|(_, _, p)| p)
        .filter(|p| !refuted_by_invariants(alg, p))
        .collect();
    if candidates.is_empty() {
        return Ok(None);
    }
    let wanted = |t: &[Elem]| candidates.iter().any(|p| p.values() == t);
    let set = free_algebra_until(alg, 3, cap, Stop::When(&wanted))?;
    match set.hit() {
        Some(i) => Ok(Some(set.witness_term(i))),
        None if set.is_truncated() => Err(Error::Inconclusive { cap }),
        None => Ok(None),
    }
}

struct PairContext {
    universe: Vec<Elem>,
    sub: Algebra,
    /// Positions of the two elements inside `universe`.
    a: Elem,
    b: Elem,
}

fn pair_context(alg: &Algebra, a: Elem, b: Elem) -> Result<PairContext> {
    check_pair(alg, a, b)?;
    let universe = subuniverse_generated(alg, &[a, b])?;
    let sub = alg.subalgebra(&universe)?;
    let pos = |x: Elem| universe.iter().position(|&u| u == x).expect("generator in Sg") as Elem;
    Ok(PairContext { a: pos(a), b: pos(b), sub, universe })
}

/// Whether every pair of representatives of the classes of `a` and `b`
/// generates the whole of `sub`.
fn classes_generate(sub: &Algebra, theta: &Partition, a: Elem, b: Elem) -> bool {
    let full = (1u32 << sub.domain()) - 1;
    let ca = theta.block(theta.block_of(a));
    let cb = theta.block(theta.block_of(b));
    ca.iter().all(|&x| cb.iter().all(|&y| sg_mask(sub, 1 << x | 1 << y) == full))
}

/// Every edge between `a` and `b`: one record per witnessing congruence and
/// kind, congruences in [`all_congruences`] order.
pub fn weak_edges(alg: &Algebra, a: Elem, b: Elem, cap: usize) -> Result<Vec<EdgeRecord>> {
    let ctx = pair_context(alg, a, b)?;
    let congruences = all_congruences(&ctx.sub);
    let maximal: Vec<bool> = congruences
        .iter()
        .map(|p| !p.is_full() && !congruences.iter().any(|q| !q.is_full() && q != p && p.refines(q)))
        .collect();
    let mut out = Vec::new();
    for (theta, &is_max) in congruences.iter().zip(&maximal) {
        if theta.related(ctx.a, ctx.b) {
            continue;
        }
        let q = quotient_algebra(&ctx.sub, theta)?;
        let (qa, qb) = (theta.block_of(ctx.a) as Elem, theta.block_of(ctx.b) as Elem);
        let record = |from: Elem, to: Elem, kind: EdgeKind, term: Option<Term>| EdgeRecord {
            from,
            to,
            kind,
            universe: ctx.universe.clone(),
            congruence: theta.clone(),
            term,
        };
        let semilattice = if theta.is_identity() { EdgeKind::Semilattice } else { EdgeKind::WeakSemilattice };
        for (x, y, from, to) in [(qa, qb, a, b), (qb, qa, b, a)] {
            if let Some(t) = semilattice_edge(&q, x, y, cap)? {
                out.push(record(from, to, semilattice, Some(t)));
            }
        }
        let strong = is_max && classes_generate(&ctx.sub, theta, ctx.a, ctx.b);
        if let Some(t) = majority_on_pair(&q, qa, qb, cap)? {
            let kind = if strong { EdgeKind::Majority } else { EdgeKind::WeakMajority };
            out.push(record(a, b, kind, Some(t)));
        }
        if let Some(t) = affine_term(&q, cap)? {
            let kind = match (strong, theta.is_identity()) {
                (true, true) => EdgeKind::StrongAffine,
                (true, false) => EdgeKind::Affine,
                _ => EdgeKind::WeakAffine,
            };
            out.push(record(a, b, kind, Some(t)));
        }
    }
    Ok(out)
}

/// Whether some edge of any kind joins `a` and `b`; stops at the first one.
pub fn has_weak_edge(alg: &Algebra, a: Elem, b: Elem, cap: usize) -> Result<bool> {
    let ctx = pair_context(alg, a, b)?;
    let congruences = all_congruences(&ctx.sub);
    // Coarser congruences make every test cheaper, so try them first.
    for theta in congruences.iter().rev() {
        if theta.related(ctx.a, ctx.b) {
            continue;
        }
        let q = quotient_algebra(&ctx.sub, theta)?;
        let (qa, qb) = (theta.block_of(ctx.a) as Elem, theta.block_of(ctx.b) as Elem);
        if semilattice_edge(&q, qa, qb, cap)?.is_some()
            || semilattice_edge(&q, qb, qa, cap)?.is_some()
            || majority_on_pair(&q, qa, qb, cap)?.is_some()
            || affine_term(&q, cap)?.is_some()
        {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaylorReport {
    pub taylor: bool,
    /// Unordered pairs joined by at least one edge.
    pub edges: Vec<(Elem, Elem)>,
    /// Subuniverses with at least two elements whose edge graph is not
    /// connected.
    pub disconnected: Vec<Vec<Elem>>,
}

/// Tests every subuniverse with at least two elements for a connected
/// weak-edge graph, orientation ignored.
pub fn is_taylor(alg: &Algebra, cap: usize) -> Result<TaylorReport> {
    alg.check_idempotent()?;
    let n = alg.domain() as Elem;
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if has_weak_edge(alg, a, b, cap)? {
                edges.push((a, b));
            }
        }
    }
    let mut disconnected = Vec::new();
    for sub in all_subuniverses(alg).into_iter().filter(|s| s.len() >= 2) {
        let mut uf = UnionFind::new(alg.domain());
        let mut parts = sub.len();
        for &(a, b) in &edges {
            if sub.contains(&a) && sub.contains(&b) && uf.union(a as usize, b as usize) {
                parts -= 1;
            }
        }
        if parts > 1 {
            disconnected.push(sub);
        }
    }
    Ok(TaylorReport { taylor: disconnected.is_empty(), edges, disconnected })
}

/// Stops at the first shift-invariant table of the free algebra.
pub fn has_cyclic_term(alg: &Algebra, k: usize, cap: usize) -> Result<bool> {
    if k < 2 {
        return Err(Error::ArityMismatch { expected: 2, found: k });
    }
    let shift = cyclic_shift_positions(alg.domain(), k);
    let cyclic = |t: &[Elem]| shift.iter().enumerate().all(|(p, &q)| t[p] == t[q]);
    let set = free_algebra_until(alg, k, cap, Stop::When(&cyclic))?;
    match (set.hit().is_some() || set.iter().any(cyclic), set.is_truncated()) {
        (true, _) => Ok(true),
        (false, true) => Err(Error::Inconclusive { cap }),
        (false, false) => Ok(false),
    }
}

/// Whether every two-generated subuniverse of `alg²` is rectangular. A
/// Mal'cev term forces this, so a failure refutes one.
fn binary_invariants_rectangular(alg: &Algebra) -> bool {
    binary_invariants(alg).iter().all(|rel| {
        rel.iter().all(|&(x, z)| {
            rel.iter().filter(|&&(_, z2)| z2 == z).all(|&(y, _)| {
                rel.iter().filter(|&&(y2, _)| y2 == y).all(|&(_, w)| rel.binary_search(&(x, w)).is_ok())
            })
        })
    })
}

/// A ternary term with `p(x,y,y) = p(y,y,x) = x`, if any.
pub fn malcev_term(alg: &Algebra, cap: usize) -> Result<Option<Term>> {
    if !binary_invariants_rectangular(alg) {
        return Ok(None);
    }
    let n = alg.domain() as Elem;
    let mut positions: Vec<([Elem; 3], Elem)> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for (t, v) in [([x, y, y], x), ([y, y, x], x)] {
                if !positions.iter().any(|(u, _)| *u == t) {
                    positions.push((t, v));
                }
            }
        }
    }
    let gens: Vec<Vec<Elem>> = (0..3).map(|i| positions.iter().map(|(t, _)| t[i]).collect()).collect();
    let target = [positions.iter().map(|&(_, v)| v).collect::<Vec<_>>()];
    let set = generate(alg, positions.len(), &gens, cap, Stop::Targets(&target))?;
    match set.index_of(&target[0]) {
        Some(i) => Ok(Some(set.witness_term(i))),
        None if set.is_truncated() => Err(Error::Inconclusive { cap }),
        None => Ok(None),
    }
}

pub fn has_malcev_term(alg: &Algebra, cap: usize) -> Result<bool> {
    Ok(malcev_term(alg, cap)?.is_some())
}

#[derive(Clone, Debug)]
pub struct AffineWitness {
    pub group: &'static str,
    /// Group element `g` is domain element `labeling[g]`.
    pub labeling: Vec<Elem>,
    pub table: OperationTable,
    pub term: Term,
}

/// Finds an abelian group structure whose `x − y + z` is a term operation
/// commuting with every basic operation. Groups and labelings are tried in a
/// fixed order.
pub fn is_affine_malcev_equiv(alg: &Algebra, cap: usize) -> Result<Option<AffineWitness>> {
    for (group, labeling, p) in affine_candidates(alg.domain())? {
        if !alg.ops().iter().all(|f| commutes_with_ternary(f, &p)) {
            continue;
        }
        if let Some(term) = clone_membership(alg, &p, cap)? {
            return Ok(Some(AffineWitness { group, labeling, table: p, term }));
        }
    }
    Ok(None)
}

/// `f(p(x̄, ȳ, z̄)) = p(f(x̄), f(ȳ), f(z̄))` for all argument columns.
pub fn commutes_with_ternary(f: &OperationTable, p: &OperationTable) -> bool {
    let k = f.arity();
    let n = f.domain();
    let mut cols = vec![0; 3 * k];
    let mut args = vec![0; k];
    all_tuples(n, 3 * k).all(|t| {
        cols.copy_from_slice(&t);
        for (j, a) in args.iter_mut().enumerate() {
            *a = p.at(&[cols[j], cols[k + j], cols[2 * k + j]]);
        }
        let left = f.at(&args);
        let right = p.at(&[f.at(&cols[..k]), f.at(&cols[k..2 * k]), f.at(&cols[2 * k..])]);
        left == right
    })
}

/// The first pair `(a, b)` with `a ≤ b` generating the whole algebra.
pub fn two_generated(alg: &Algebra) -> Option<(Elem, Elem)> {
    let n = alg.domain() as Elem;
    let full = (1u32 << n) - 1;
    (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).find(|&(a, b)| sg_mask(alg, 1 << a | 1 << b) == full)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dominance {
    First,
    Second,
    Both,
    Neither,
}

impl Dominance {
    pub fn as_str(self) -> &'static str {
        match self {
            Dominance::First => "first",
            Dominance::Second => "second",
            Dominance::Both => "both",
            Dominance::Neither => "neither",
        }
    }
}

/// Every subuniverse that absorbs `alg` with respect to a ternary term.
pub fn ternary_absorbing_subuniverses(alg: &Algebra, cap: usize) -> Result<Vec<Vec<Elem>>> {
    let mut out = Vec::new();
    for sub in all_subuniverses(alg) {
        if absorbs(alg, &sub, 3, cap)?.holds {
            out.push(sub);
        }
    }
    Ok(out)
}

/// Dominance of a binary table against a precomputed list of absorbing sets.
pub fn dominance_against(t: &OperationTable, absorbing: &[Vec<Elem>]) -> Result<Dominance> {
    if t.arity() != 2 {
        return Err(Error::ArityMismatch { expected: 2, found: t.arity() });
    }
    let n = t.domain() as Elem;
    let holds = |first: bool| {
        absorbing.iter().all(|c| {
            c.iter().all(|&x| {
                (0..n).all(|d| {
                    let v = if first { t.at(&[x, d]) } else { t.at(&[d, x]) };
                    c.contains(&v)
                })
            })
        })
    };
    Ok(match (holds(true), holds(false)) {
        (true, true) => Dominance::Both,
        (true, false) => Dominance::First,
        (false, true) => Dominance::Second,
        (false, false) => Dominance::Neither,
    })
}

/// Which coordinates of the binary table `t` keep results inside every
/// 3-absorbing subuniverse of `alg`.
pub fn dominant_coordinate(alg: &Algebra, t: &OperationTable, cap: usize) -> Result<Dominance> {
    if t.domain() != alg.domain() {
        return Err(Error::DomainMismatch { expected: alg.domain(), found: t.domain() });
    }
    dominance_against(t, &ternary_absorbing_subuniverses(alg, cap)?)
}
