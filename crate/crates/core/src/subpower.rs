//! Closure of generator tuples inside a finite power `A^m`.
//!
//! The engine processes elements in insertion order. When element `i` is
//! processed, every basic operation is applied to every argument tuple of
//! element indices in `[0, i]^k` that mentions `i`, in lexicographic order.
//! Tuples made only of older elements were handled when their largest member
//! was processed, so each tuple is evaluated exactly once. The resulting
//! element order and witness links are canonical.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::hash::BuildHasher;

use hashbrown::{DefaultHashBuilder, HashTable};

use crate::error::{Error, Result};
use crate::op::{decode_index, table_len, Algebra, Elem, OperationTable};
use crate::partition::{Partition, UnionFind};
use crate::term::{Node, Term};

/// Default bound on the number of elements of a generated set.
pub const DEFAULT_CAP: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completion {
    /// The set is closed under every basic operation.
    Closed,
    /// A stop condition fired before closure finished.
    StoppedEarly,
    /// The element cap was reached.
    CapExceeded,
}

/// When to abandon the closure before reaching the fixpoint.
#[derive(Clone, Copy)]
pub enum Stop<'a> {
    Never,
    /// Once every listed tuple has been produced.
    Targets(&'a [Vec<Elem>]),
    /// Once some element satisfies the predicate.
    When(&'a dyn Fn(&[Elem]) -> bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Link {
    /// Operation index, or `GENERATOR` for generator elements.
    op: u32,
    /// Start of the parent list in `parents`, or the generator index.
    start: u32,
}

const GENERATOR: u32 = u32::MAX;

#[derive(Clone)]
pub struct GeneratedSet {
    base: Algebra,
    exponent: usize,
    data: Vec<Elem>,
    links: Vec<Link>,
    parents: Vec<u32>,
    num_generators: usize,
    completion: Completion,
    hit: Option<usize>,
    cap: usize,
    index: HashTable<u32>,
    hasher: DefaultHashBuilder,
}

impl fmt::Debug for GeneratedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratedSet")
            .field("exponent", &self.exponent)
            .field("len", &self.len())
            .field("completion", &self.completion)
            .finish()
    }
}

impl GeneratedSet {
    pub fn base(&self) -> &Algebra {
        &self.base
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn completion(&self) -> Completion {
        self.completion
    }

    pub fn is_truncated(&self) -> bool {
        self.completion != Completion::Closed
    }

    /// Index of the first element that satisfied a `Stop::When` predicate.
    pub fn hit(&self) -> Option<usize> {
        self.hit
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn get(&self, i: usize) -> &[Elem] {
        &self.data[i * self.exponent..(i + 1) * self.exponent]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[Elem]> + '_ {
        // `chunks_exact(0)` panics; exponent is always at least one.
        self.data.chunks_exact(self.exponent)
    }

    pub fn index_of(&self, tuple: &[Elem]) -> Option<usize> {
        if tuple.len() != self.exponent {
            return None;
        }
        let h = self.hasher.hash_one(tuple);
        let (data, m) = (&self.data, self.exponent);
        self.index
            .find(h, |&i| &data[i as usize * m..(i as usize + 1) * m] == tuple)
            .map(|&i| i as usize)
    }

    /// Membership. An absent tuple in a truncated set is inconclusive.
    pub fn contains(&self, tuple: &[Elem]) -> Result<bool> {
        if tuple.len() != self.exponent {
            return Err(Error::LengthMismatch { expected: self.exponent, found: tuple.len() });
        }
        match (self.index_of(tuple), self.completion) {
            (Some(_), _) => Ok(true),
            (None, Completion::Closed) => Ok(false),
            (None, _) => Err(Error::Inconclusive { cap: self.cap }),
        }
    }

    /// The witness link of element `i`: `None` for generators, otherwise the
    /// operation index and parent element indices.
    pub fn link(&self, i: usize) -> Option<(usize, &[u32])> {
        let l = self.links[i];
        if l.op == GENERATOR {
            return None;
        }
        let k = self.base.ops()[l.op as usize].arity();
        Some((l.op as usize, &self.parents[l.start as usize..l.start as usize + k]))
    }

    /// A term over the generators (variable `g` = generator `g`) producing
    /// element `i`.
    pub fn witness_term(&self, i: usize) -> Term {
        let mut needed = vec![false; i + 1];
        needed[i] = true;
        for j in (0..=i).rev() {
            if needed[j] {
                if let Some((_, ps)) = self.link(j) {
                    for &p in ps {
                        needed[p as usize] = true;
                    }
                }
            }
        }
        let mut node_of = vec![usize::MAX; i + 1];
        let mut nodes = Vec::new();
        for j in 0..=i {
            if !needed[j] {
                continue;
            }
            let node = match self.link(j) {
                None => Node::Var(self.links[j].start as usize),
                Some((op, ps)) => Node::Op { op, args: ps.iter().map(|&p| node_of[p as usize]).collect() },
            };
            node_of[j] = nodes.len();
            nodes.push(node);
        }
        Term::from_nodes(nodes).expect("witness links point backwards")
    }

    pub fn witness_for(&self, tuple: &[Elem]) -> Result<Term> {
        self.index_of(tuple).map(|i| self.witness_term(i)).ok_or(Error::NotMember)
    }

    /// The generators, in the order given (duplicates dropped).
    pub fn generators(&self) -> impl Iterator<Item = &[Elem]> + '_ {
        self.iter().take(self.num_generators)
    }

    fn insert(&mut self, tuple: &[Elem], link: Link, parents: &[u32]) -> Option<bool> {
        let h = self.hasher.hash_one(tuple);
        let (data, m) = (&self.data, self.exponent);
        if self.index.find(h, |&i| &data[i as usize * m..(i as usize + 1) * m] == tuple).is_some() {
            return Some(false);
        }
        if self.len() >= self.cap {
            return None;
        }
        let id = self.len() as u32;
        self.data.extend_from_slice(tuple);
        let link = if link.op == GENERATOR {
            link
        } else {
            let start = self.parents.len() as u32;
            self.parents.extend_from_slice(parents);
            Link { op: link.op, start }
        };
        self.links.push(link);
        let (data, hasher) = (&self.data, &self.hasher);
        self.index.insert_unique(h, id, |&i| {
            hasher.hash_one(&data[i as usize * m..(i as usize + 1) * m])
        });
        Some(true)
    }
}

struct Targets<'a> {
    stop: Stop<'a>,
    remaining: Vec<&'a [Elem]>,
}

impl<'a> Targets<'a> {
    fn new(stop: Stop<'a>) -> Self {
        let remaining = match stop {
            Stop::Targets(ts) => ts.iter().map(Vec::as_slice).collect(),
            _ => Vec::new(),
        };
        Targets { stop, remaining }
    }

    /// Notes a newly inserted element; true when the stop condition fires.
    fn observe(&mut self, tuple: &[Elem]) -> bool {
        match self.stop {
            Stop::Never => false,
            Stop::Targets(_) => {
                self.remaining.retain(|t| *t != tuple);
                self.remaining.is_empty()
            }
            Stop::When(f) => f(tuple),
        }
    }
}

/// Closes `generators` under the basic operations of `base`, acting
/// coordinatewise on `A^m`.
pub fn generate(
    base: &Algebra,
    m: usize,
    generators: &[Vec<Elem>],
    cap: usize,
    stop: Stop<'_>,
) -> Result<GeneratedSet> {
    if m == 0 {
        return Err(Error::LengthMismatch { expected: 1, found: 0 });
    }
    if generators.is_empty() {
        return Err(Error::EmptyAlgebra);
    }
    let n = base.domain();
    for g in generators {
        if g.len() != m {
            return Err(Error::LengthMismatch { expected: m, found: g.len() });
        }
        if let Some(&x) = g.iter().find(|&&x| x as usize >= n) {
            return Err(Error::OutOfRange { value: x as usize, domain: n });
        }
    }
    if let Stop::Targets(ts) = stop {
        if let Some(t) = ts.iter().find(|t| t.len() != m) {
            return Err(Error::LengthMismatch { expected: m, found: t.len() });
        }
    }
    let mut set = GeneratedSet {
        base: base.clone(),
        exponent: m,
        data: Vec::new(),
        links: Vec::new(),
        parents: Vec::new(),
        num_generators: 0,
        completion: Completion::Closed,
        hit: None,
        cap: cap.max(1),
        index: HashTable::new(),
        hasher: DefaultHashBuilder::default(),
    };
    let mut targets = Targets::new(stop);
    let mut halted = false;
    for (gi, g) in generators.iter().enumerate() {
        match set.insert(g, Link { op: GENERATOR, start: gi as u32 }, &[]) {
            None => {
                set.completion = Completion::CapExceeded;
                halted = true;
                break;
            }
            Some(true) => {
                set.num_generators += 1;
                if targets.observe(g) {
                    set.hit = Some(set.len() - 1);
                    set.completion = Completion::StoppedEarly;
                    halted = true;
                    break;
                }
            }
            Some(false) => {}
        }
    }
    if !halted {
        let ops: Vec<OperationTable> = base.ops().to_vec();
        close(&mut set, &ops, &mut targets);
    }
    Ok(set)
}

/// Argument symmetry of a basic operation, used to skip argument tuples
/// whose result is already determined by an earlier tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symmetry {
    None,
    Cyclic,
    Full,
}

impl Symmetry {
    fn of(op: &OperationTable) -> Self {
        match op.arity() {
            2 if op.is_cyclic() => Symmetry::Full,
            3 if op.is_symmetric() => Symmetry::Full,
            3 if op.is_cyclic() => Symmetry::Cyclic,
            _ => Symmetry::None,
        }
    }
}

fn close(set: &mut GeneratedSet, ops: &[OperationTable], targets: &mut Targets<'_>) {
    let m = set.exponent;
    let n = set.base.domain();
    let mut scratch = vec![0 as Elem; m];
    let mut offsets = vec![0u32; m];
    let symmetry: Vec<Symmetry> = ops.iter().map(Symmetry::of).collect();
    let mut i = 0;
    // Returns from the enclosing function on Halt.
    macro_rules! emit {
        ($op:expr, $parents:expr) => {{
            let parents: &[u32] = $parents;
            match set.insert(&scratch, Link { op: $op as u32, start: 0 }, parents) {
                None => {
                    set.completion = Completion::CapExceeded;
                    return;
                }
                Some(true) => {
                    if targets.observe(&scratch) {
                        set.hit = Some(set.len() - 1);
                        set.completion = Completion::StoppedEarly;
                        return;
                    }
                }
                Some(false) => {}
            }
        }};
    }
    while i < set.len() {
        let iu = i as u32;
        for (oi, (op, sym)) in ops.iter().zip(&symmetry).enumerate() {
            let vals = op.values();
            match op.arity() {
                1 => {
                    for (s, &x) in scratch.iter_mut().zip(set.get(i)) {
                        *s = vals[x as usize];
                    }
                    emit!(oi, &[iu]);
                }
                2 => {
                    for a in 0..=i {
                        for (o, &x) in offsets.iter_mut().zip(set.get(a)) {
                            *o = x as u32 * n as u32;
                        }
                        let lo = match (a == i, *sym) {
                            (false, _) => i,
                            (true, Symmetry::None) => 0,
                            (true, _) => i,
                        };
                        for b in lo..=i {
                            for ((s, &o), &y) in scratch.iter_mut().zip(&offsets).zip(set.get(b)) {
                                *s = vals[(o + y as u32) as usize];
                            }
                            emit!(oi, &[a as u32, b as u32]);
                        }
                    }
                }
                3 => {
                    let nn = n as u32;
                    for a in 0..=i {
                        let b_lo = if *sym == Symmetry::None { 0 } else { a };
                        for b in b_lo..=i {
                            for ((o, &x), &y) in offsets.iter_mut().zip(set.get(a)).zip(set.get(b)) {
                                *o = (x as u32 * nn + y as u32) * nn;
                            }
                            let lo = if a == i || b == i { 0 } else { i };
                            // Only the lexicographically least argument tuple
                            // of each orbit is evaluated; the others would
                            // produce the same element later in this round.
                            let lo = match sym {
                                Symmetry::None => lo,
                                Symmetry::Cyclic if b == a => lo.max(a),
                                Symmetry::Cyclic => lo.max(a + 1),
                                Symmetry::Full => lo.max(b),
                            };
                            for c in lo..=i {
                                for ((s, &o), &z) in
                                    scratch.iter_mut().zip(&offsets).zip(set.get(c))
                                {
                                    *s = vals[(o + z as u32) as usize];
                                }
                                emit!(oi, &[a as u32, b as u32, c as u32]);
                            }
                        }
                    }
                }
                k => {
                    // Odometer over [0, i]^k, skipping tuples that avoid i.
                    let mut args = vec![0u32; k];
                    'tuples: loop {
                        if args.contains(&iu) {
                            for (j, s) in scratch.iter_mut().enumerate() {
                                let idx = args.iter().fold(0usize, |acc, &a| {
                                    acc * n + set.data[a as usize * m + j] as usize
                                });
                                *s = vals[idx];
                            }
                            emit!(oi, &args);
                        }
                        let mut p = k;
                        loop {
                            if p == 0 {
                                break 'tuples;
                            }
                            p -= 1;
                            if args[p] < iu {
                                args[p] += 1;
                                args[p + 1..].fill(0);
                                break;
                            }
                        }
                    }
                }
            }
        }
        i += 1;
    }
}

/// The `k` projection tuples of `A^(n^k)`.
pub fn projection_tuples(n: usize, k: usize) -> Vec<Vec<Elem>> {
    let len = table_len(n, k);
    let mut tuple = vec![0; k];
    let mut gens = vec![Vec::with_capacity(len); k];
    for p in 0..len {
        decode_index(p, n, &mut tuple);
        for (g, &x) in gens.iter_mut().zip(&tuple) {
            g.push(x);
        }
    }
    gens
}

/// The free algebra on `k` generators, i.e. `Clo_k(A)` when complete. Each
/// element is the value table of a `k`-ary term operation.
pub fn free_algebra(base: &Algebra, k: usize, cap: usize) -> Result<GeneratedSet> {
    free_algebra_until(base, k, cap, Stop::Never)
}

pub fn free_algebra_until(base: &Algebra, k: usize, cap: usize, stop: Stop<'_>) -> Result<GeneratedSet> {
    if k == 0 {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    }
    let n = base.domain();
    if table_len(n, k) > 1 << 16 {
        return Err(Error::Unsupported("power exponent above 65536"));
    }
    generate(base, table_len(n, k), &projection_tuples(n, k), cap, stop)
}

/// Decides `op ∈ Clo(base)`, returning a witness term on success.
pub fn clone_membership(base: &Algebra, op: &OperationTable, cap: usize) -> Result<Option<Term>> {
    if op.domain() != base.domain() {
        return Err(Error::DomainMismatch { expected: base.domain(), found: op.domain() });
    }
    if op.arity() > 0 && refuted_by_invariants(base, op) {
        return Ok(None);
    }
    let target = [op.values().to_vec()];
    let set = free_algebra_until(base, op.arity(), cap, Stop::Targets(&target))?;
    match set.index_of(op.values()) {
        Some(i) => Ok(Some(set.witness_term(i))),
        None if set.is_truncated() => Err(Error::Inconclusive { cap }),
        None => Ok(None),
    }
}

/// Largest domain for which the binary invariants below are enumerated.
const INVARIANT_DOMAIN: usize = 6;

/// Subuniverses of `base²` generated by one or two pairs, as sorted pair
/// lists. Every term operation preserves each of them. Empty above a small
/// domain size.
pub fn binary_invariants(base: &Algebra) -> Vec<Vec<(Elem, Elem)>> {
    let n = base.domain();
    if n > INVARIANT_DOMAIN {
        return Vec::new();
    }
    let pairs: Vec<Vec<Elem>> = (0..n * n).map(|i| vec![(i / n) as Elem, (i % n) as Elem]).collect();
    let mut out: Vec<Vec<(Elem, Elem)>> = Vec::new();
    for i in 0..pairs.len() {
        for j in i..pairs.len() {
            let set = generate(base, 2, &[pairs[i].clone(), pairs[j].clone()], usize::MAX, Stop::Never)
                .expect("pairs are in range");
            let mut rel: Vec<(Elem, Elem)> = set.iter().map(|t| (t[0], t[1])).collect();
            rel.sort_unstable();
            if !out.contains(&rel) {
                out.push(rel);
            }
        }
    }
    out
}

/// Whether `op` preserves the binary relation `rel` (a sorted pair list).
pub fn preserves_pairs(op: &OperationTable, rel: &[(Elem, Elem)]) -> bool {
    let n = op.domain();
    let mut member = vec![false; n * n];
    for &(x, y) in rel {
        member[x as usize * n + y as usize] = true;
    }
    let k = op.arity();
    let mut pick = vec![0 as Elem; k];
    let (mut left, mut right) = (vec![0 as Elem; k], vec![0 as Elem; k]);
    (0..table_len(rel.len(), k)).all(|i| {
        decode_index(i, rel.len(), &mut pick);
        for ((l, r), &p) in left.iter_mut().zip(right.iter_mut()).zip(&pick) {
            (*l, *r) = rel[p as usize];
        }
        member[op.at(&left) as usize * n + op.at(&right) as usize]
    })
}

/// A sound test for `op ∉ Clo(base)`: true when `op` breaks a subuniverse of
/// `base` or one of its [`binary_invariants`]. False means undecided.
pub fn refuted_by_invariants(base: &Algebra, op: &OperationTable) -> bool {
    let n = base.domain();
    if n > INVARIANT_DOMAIN || table_len(n, op.arity()) > 1 << 12 {
        return false;
    }
    binary_invariants(base).iter().any(|rel| !preserves_pairs(op, rel))
}

#[derive(Clone, Debug)]
pub struct CyclicTerms {
    pub tables: Vec<OperationTable>,
    /// The closure was truncated or stopped at the limit, so more cyclic
    /// terms may exist.
    pub lower_bound_only: bool,
}

/// Position permutation `p ↦ index of (x2, .., xk, x1)` on `A^(n^k)`.
pub fn cyclic_shift_positions(n: usize, k: usize) -> Vec<usize> {
    let mut tuple = vec![0; k];
    (0..table_len(n, k))
        .map(|p| {
            decode_index(p, n, &mut tuple);
            tuple.rotate_left(1);
            crate::op::encode_index(&tuple, n)
        })
        .collect()
}

/// All `k`-ary cyclic term operations, in generation order, up to `limit`.
/// The closure stops as soon as `limit` of them have appeared.
pub fn cyclic_terms(base: &Algebra, k: usize, cap: usize, limit: usize) -> Result<CyclicTerms> {
    if k < 2 {
        return Err(Error::ArityMismatch { expected: 2, found: k });
    }
    let shift = cyclic_shift_positions(base.domain(), k);
    let cyclic = |t: &[Elem]| shift.iter().enumerate().all(|(p, &q)| t[p] == t[q]);
    let seen = core::cell::Cell::new(0usize);
    let enough = |t: &[Elem]| {
        if cyclic(t) {
            seen.set(seen.get() + 1);
        }
        limit > 0 && seen.get() >= limit
    };
    let set = free_algebra_until(base, k, cap, Stop::When(&enough))?;
    let tables = set
        .iter()
        .filter(|t| cyclic(t))
        .take(limit)
        .map(|t| OperationTable::new("c", k, base.domain(), t.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(CyclicTerms { lower_bound_only: set.completion() != Completion::Closed, tables })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RabKind {
    AutomorphismGraph,
    Linked,
    Other,
}

#[derive(Clone, Debug)]
pub struct RabReport {
    pub relation: GeneratedSet,
    pub kind: RabKind,
    /// `(c, t)` with `t(a,b) = t(b,a) = c`.
    pub loops: Vec<(Elem, Term)>,
    /// Link tolerances as sorted pair lists, first then second coordinate.
    pub tolerances: [Vec<(Elem, Elem)>; 2],
    pub link_congruences: [Partition; 2],
}

/// Analyzes `R_ab = Sg{(a,b), (b,a)} ≤ A²`.
pub fn rab_analyze(base: &Algebra, a: Elem, b: Elem, cap: usize) -> Result<RabReport> {
    let n = base.domain();
    for x in [a, b] {
        if x as usize >= n {
            return Err(Error::OutOfRange { value: x as usize, domain: n });
        }
    }
    if a == b {
        return Err(Error::Unsupported("R_ab needs a != b"));
    }
    let relation = generate(base, 2, &[vec![a, b], vec![b, a]], cap, Stop::Never)?;
    if relation.is_truncated() {
        return Err(Error::Inconclusive { cap });
    }
    let pairs: Vec<(Elem, Elem)> = relation.iter().map(|t| (t[0], t[1])).collect();
    let tolerances = [link_tolerance(&pairs, n, 0), link_tolerance(&pairs, n, 1)];
    let link_congruences = [0, 1].map(|c| {
        let mut uf = UnionFind::new(n);
        for &(x, y) in &tolerances[c] {
            uf.union(x as usize, y as usize);
        }
        uf.partition()
    });
    let mut projection: Vec<Elem> = pairs.iter().map(|p| p.0).collect();
    projection.sort_unstable();
    projection.dedup();
    let mut second: Vec<Elem> = pairs.iter().map(|p| p.1).collect();
    second.sort_unstable();
    second.dedup();
    let functional = pairs.len() == projection.len() && pairs.len() == second.len();
    let linked = link_congruences.iter().zip([&projection, &second]).all(|(lk, proj)| {
        proj.iter().all(|&x| lk.related(x, proj[0]))
    });
    let kind = if functional {
        RabKind::AutomorphismGraph
    } else if linked {
        RabKind::Linked
    } else {
        RabKind::Other
    };
    let loops = (0..n as Elem)
        .filter_map(|c| relation.index_of(&[c, c]).map(|i| (c, relation.witness_term(i))))
        .collect();
    Ok(RabReport { relation, kind, loops, tolerances, link_congruences })
}

/// `tol_i R`: pairs of `i`-th coordinates that share the other coordinate.
fn link_tolerance(pairs: &[(Elem, Elem)], n: usize, coord: usize) -> Vec<(Elem, Elem)> {
    let mut rel = vec![false; n * n];
    let pick = |p: &(Elem, Elem)| if coord == 0 { (p.0, p.1) } else { (p.1, p.0) };
    for p in pairs {
        let (x, y) = pick(p);
        for q in pairs {
            let (x2, y2) = pick(q);
            if y == y2 {
                rel[x as usize * n + x2 as usize] = true;
            }
        }
    }
    (0..n * n).filter(|&i| rel[i]).map(|i| ((i / n) as Elem, (i % n) as Elem)).collect()
}

/// Renders an element of a power as `(x1,..,xm)`.
pub fn render_tuple(t: &[Elem]) -> String {
    use core::fmt::Write;
    let mut s = String::from("(");
    for (i, x) in t.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{x}");
    }
    s.push(')');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meet(n: usize) -> Algebra {
        // 0 below everything, others incomparable
        let m = OperationTable::from_fn("m", 2, n, |a| if a[0] == a[1] { a[0] } else { 0 });
        Algebra::new(n, vec![m]).unwrap()
    }

    #[test]
    fn closure_of_incomparable_pair() {
        let s = generate(&meet(3), 1, &[vec![1], vec![2]], DEFAULT_CAP, Stop::Never).unwrap();
        let mut got: Vec<_> = s.iter().map(|t| t[0]).collect();
        got.sort();
        assert_eq!(got, vec![0, 1, 2]);
        assert_eq!(s.completion(), Completion::Closed);
        let t = s.witness_for(&[0]).unwrap();
        assert_eq!(t.eval(&meet(3), &[1, 2]).unwrap(), 0);
        assert_eq!(s.witness_for(&[1]).unwrap().is_var(), Some(0));
    }

    #[test]
    fn cap_and_targets() {
        let alg = meet(4);
        let gens = vec![vec![1, 2], vec![2, 3], vec![3, 1]];
        let full = generate(&alg, 2, &gens, DEFAULT_CAP, Stop::Never).unwrap();
        assert_eq!(full.len(), 4);
        let capped = generate(&alg, 2, &gens, 3, Stop::Never).unwrap();
        assert_eq!(capped.completion(), Completion::CapExceeded);
        assert_eq!(capped.len(), 3);
        assert_eq!(capped.contains(&[0, 0]), Err(Error::Inconclusive { cap: 3 }));
        assert!(full.contains(&[0, 0]).unwrap());
        assert!(!full.contains(&[1, 1]).unwrap());
        let target = [vec![0, 0]];
        let early = generate(&alg, 2, &gens, DEFAULT_CAP, Stop::Targets(&target)).unwrap();
        assert_eq!(early.completion(), Completion::StoppedEarly);
        assert!(early.contains(&[0, 0]).unwrap());
        // element order is a prefix of the full run
        for (a, b) in early.iter().zip(full.iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn canonical_order_with_symmetric_ops() {
        // Plain closure over every argument tuple, as the module doc states.
        type Row = (Vec<Elem>, Option<(usize, Vec<usize>)>);
        fn reference(alg: &Algebra, gens: &[Vec<Elem>]) -> Vec<Row> {
            let mut out: Vec<Row> = Vec::new();
            for g in gens {
                if !out.iter().any(|(t, _)| t == g) {
                    out.push((g.clone(), None));
                }
            }
            let mut i = 0;
            while i < out.len() {
                for (oi, op) in alg.ops().iter().enumerate() {
                    let k = op.arity();
                    let mut args = vec![0 as Elem; k];
                    for idx in 0..table_len(i + 1, k) {
                        decode_index(idx, i + 1, &mut args);
                        if !args.contains(&(i as Elem)) {
                            continue;
                        }
                        let t: Vec<Elem> = (0..out[0].0.len())
                            .map(|j| op.at(&args.iter().map(|&a| out[a as usize].0[j]).collect::<Vec<_>>()))
                            .collect();
                        if !out.iter().any(|(u, _)| *u == t) {
                            out.push((t, Some((oi, args.iter().map(|&a| a as usize).collect()))));
                        }
                    }
                }
                i += 1;
            }
            out
        }
        // Majority off the rainbow; on it, the value records the orientation.
        let cyc = OperationTable::from_fn("g", 3, 3, |a| {
            if a[0] == a[1] || a[0] == a[2] { a[0] } else if a[1] == a[2] { a[1] } else if a[1] == (a[0] + 1) % 3 { 0 } else { 1 }
        });
        assert!(cyc.is_cyclic() && !cyc.is_symmetric());
        let sym = OperationTable::from_fn("m", 3, 3, |a| {
            if a[0] == a[1] || a[0] == a[2] { a[0] } else if a[1] == a[2] { a[1] } else { 2 }
        });
        let join = OperationTable::from_fn("j", 2, 3, |a| a[0].max(a[1]));
        let neg = OperationTable::from_fn("s", 1, 3, |a| 2 - a[0]);
        for ops in [vec![cyc.clone()], vec![sym.clone()], vec![join.clone(), cyc.clone()], vec![neg, join]] {
            let alg = Algebra::new(3, ops).unwrap();
            let gens = projection_tuples(3, 2);
            let fast = generate(&alg, 9, &gens, DEFAULT_CAP, Stop::Never).unwrap();
            let slow = reference(&alg, &gens);
            assert_eq!(fast.len(), slow.len());
            for (i, (t, link)) in slow.iter().enumerate() {
                assert_eq!(fast.get(i), &t[..]);
                let got = fast.link(i).map(|(op, ps)| (op, ps.iter().map(|&p| p as usize).collect()));
                assert_eq!(&got, link);
            }
        }
    }

    #[test]
    fn general_arity_matches_specialised() {
        // A 4-ary operation built from a ternary one, compared against the
        // same clone generated through the ternary table.
        let g = OperationTable::from_fn("g", 3, 3, |a| {
            if a[0] == a[1] { a[0] } else if a[1] == a[2] { a[1] } else if a[0] == a[2] { a[0] } else { (a[0] + a[1] + a[2]) % 3 }
        });
        let h = OperationTable::from_fn("h", 4, 3, |a| g.at(&[a[0], a[1], a[3]]));
        let alg4 = Algebra::new(3, vec![h]).unwrap();
        let alg3 = Algebra::new(3, vec![g]).unwrap();
        let f4 = free_algebra(&alg4, 2, DEFAULT_CAP).unwrap();
        let f3 = free_algebra(&alg3, 2, DEFAULT_CAP).unwrap();
        let mut a: Vec<_> = f4.iter().map(|t| t.to_vec()).collect();
        let mut b: Vec<_> = f3.iter().map(|t| t.to_vec()).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        for i in 0..f4.len() {
            let t = f4.witness_term(i);
            assert_eq!(t.to_table(&alg4, 2).unwrap().values(), f4.get(i));
        }
    }

    #[test]
    fn semilattice_free_algebra() {
        let s = Algebra::new(2, vec![OperationTable::from_fn("m", 2, 2, |a| a[0].min(a[1]))]).unwrap();
        assert_eq!(free_algebra(&s, 2, DEFAULT_CAP).unwrap().len(), 3);
        assert_eq!(free_algebra(&s, 1, DEFAULT_CAP).unwrap().len(), 1);
        let maj = OperationTable::from_fn("maj", 3, 2, |a| (a[0] & a[1]) | (a[1] & a[2]) | (a[0] & a[2]));
        assert_eq!(clone_membership(&s, &maj, DEFAULT_CAP).unwrap(), None);
    }

    #[test]
    fn rab_of_semilattice() {
        let s = Algebra::new(2, vec![OperationTable::from_fn("m", 2, 2, |a| a[0].min(a[1]))]).unwrap();
        let r = rab_analyze(&s, 0, 1, DEFAULT_CAP).unwrap();
        assert_eq!(r.relation.len(), 3);
        assert_eq!(r.loops.len(), 1);
        assert_eq!(r.loops[0].0, 0);
        assert_eq!(r.kind, RabKind::Linked);
    }

    #[test]
    fn rab_of_swap_automorphism() {
        let maj = OperationTable::from_fn("maj", 3, 2, |a| (a[0] & a[1]) | (a[1] & a[2]) | (a[0] & a[2]));
        let m = Algebra::new(2, vec![maj]).unwrap();
        let r = rab_analyze(&m, 0, 1, DEFAULT_CAP).unwrap();
        assert_eq!(r.kind, RabKind::AutomorphismGraph);
        assert!(r.loops.is_empty());
    }
}
