//! Backtracking search for operation tables under constraints.
//!
//! Cells are the argument tuples in row-major order. Symmetry constraints
//! merge cells into orbits that share one value; the solver always branches on
//! the first unassigned cell and tries values in ascending order, so solutions
//! come out in lexicographic order of their value sequences.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::op::{
    decode_index, encode_index, invert, normalize_subset, table_len, Elem, OperationTable,
    PartialTable,
};
use crate::partition::{Partition, UnionFind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    Idempotent,
    /// Invariant under cyclic shift of the arguments.
    Cyclic,
    /// Invariant under every permutation of the arguments.
    Symmetric,
    /// Invariant under swapping the first two arguments.
    Commutative,
    /// Applied coordinatewise, the operation maps tuples of the relation into
    /// the relation. All tuples must share one length.
    PreservesRelation(Vec<Vec<Elem>>),
    InvariantPartition(Partition),
    /// The partition is invariant and the induced operation on its blocks,
    /// numbered in canonical block order, equals the table.
    QuotientEquals(Partition, OperationTable),
    /// The restriction to `subset` (relabelled ascending) equals the table.
    RestrictionEquals(Vec<Elem>, OperationTable),
    PartialValues(PartialTable),
    /// `f(σx1, .., σxk) = σ f(x1, .., xk)`, with σ given as an image list.
    CommutesWithPermutation(Vec<Elem>),
    AgreesOnTuples(Vec<(Vec<Elem>, Elem)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub domain: usize,
    pub arity: usize,
    pub constraints: Vec<Constraint>,
    /// Maximum number of solutions to collect.
    pub cap: usize,
}

impl SearchSpec {
    pub fn new(domain: usize, arity: usize, constraints: Vec<Constraint>) -> Self {
        SearchSpec { domain, arity, constraints, cap: usize::MAX }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (n, k) = (self.domain, self.arity);
        if n == 0 {
            return Err(Error::EmptyAlgebra);
        }
        if n > 5 {
            return Err(Error::Unsupported("search domains above 5"));
        }
        if k == 0 || k > 4 {
            return Err(Error::Unsupported("search arities outside 1..=4"));
        }
        let in_range = |x: Elem| -> Result<()> {
            if (x as usize) < n {
                Ok(())
            } else {
                Err(Error::OutOfRange { value: x as usize, domain: n })
            }
        };
        for c in &self.constraints {
            match c {
                Constraint::PreservesRelation(rel) => {
                    let r = rel.first().map_or(0, Vec::len);
                    for t in rel {
                        if t.len() != r {
                            return Err(Error::LengthMismatch { expected: r, found: t.len() });
                        }
                        t.iter().try_for_each(|&x| in_range(x))?;
                    }
                }
                Constraint::InvariantPartition(p) => {
                    if p.domain() != n {
                        return Err(Error::DomainMismatch { expected: n, found: p.domain() });
                    }
                }
                Constraint::QuotientEquals(p, table) => {
                    if p.domain() != n {
                        return Err(Error::DomainMismatch { expected: n, found: p.domain() });
                    }
                    if table.domain() != p.num_blocks() || table.arity() != k {
                        return Err(Error::SignatureMismatch);
                    }
                }
                Constraint::RestrictionEquals(subset, table) => {
                    let s = normalize_subset(subset, n)?;
                    if table.domain() != s.len() || table.arity() != k {
                        return Err(Error::SignatureMismatch);
                    }
                }
                Constraint::PartialValues(p) => {
                    if p.domain() != n || p.arity() != k {
                        return Err(Error::SignatureMismatch);
                    }
                }
                Constraint::CommutesWithPermutation(pi) => {
                    let mut seen = vec![false; n];
                    if pi.len() != n {
                        return Err(Error::LengthMismatch { expected: n, found: pi.len() });
                    }
                    for &x in pi {
                        in_range(x)?;
                        if core::mem::replace(&mut seen[x as usize], true) {
                            return Err(Error::Unsupported("permutation is not a bijection"));
                        }
                    }
                }
                Constraint::AgreesOnTuples(pairs) => {
                    for (args, v) in pairs {
                        if args.len() != k {
                            return Err(Error::ArityMismatch { expected: k, found: args.len() });
                        }
                        args.iter().chain(core::iter::once(v)).try_for_each(|&x| in_range(x))?;
                    }
                }
                Constraint::Idempotent
                | Constraint::Cyclic
                | Constraint::Symmetric
                | Constraint::Commutative => {}
            }
        }
        Ok(())
    }
}

/// Cells fixed directly by a constraint, as `(cell, value)` pairs.
fn fixed_cells(c: &Constraint, n: usize, k: usize) -> Vec<(usize, Elem)> {
    match c {
        Constraint::Idempotent => (0..n)
            .map(|x| (encode_index(&vec![x as Elem; k], n), x as Elem))
            .collect(),
        Constraint::RestrictionEquals(subset, table) => {
            let s = normalize_subset(subset, n).expect("validated");
            let mut local = vec![0; k];
            (0..table.values().len())
                .map(|i| {
                    decode_index(i, s.len(), &mut local);
                    let global: Vec<Elem> = local.iter().map(|&l| s[l as usize]).collect();
                    (encode_index(&global, n), s[table.values()[i] as usize])
                })
                .collect()
        }
        Constraint::PartialValues(p) => p
            .values()
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, v)))
            .collect(),
        Constraint::AgreesOnTuples(pairs) => {
            pairs.iter().map(|(args, v)| (encode_index(args, n), *v)).collect()
        }
        Constraint::QuotientEquals(p, quotient) => required_blocks(p, quotient, n, k)
            .into_iter()
            .enumerate()
            .filter_map(|(cell, b)| {
                let block = p.block(b);
                (block.len() == 1).then(|| (cell, block[0]))
            })
            .collect(),
        _ => Vec::new(),
    }
}

/// Full, independent check of one constraint on a finished table.
pub fn satisfies(table: &OperationTable, c: &Constraint) -> bool {
    let (n, k) = (table.domain(), table.arity());
    match c {
        Constraint::Idempotent => table.is_idempotent(),
        Constraint::Cyclic => table.is_cyclic(),
        Constraint::Symmetric => table.is_symmetric(),
        Constraint::Commutative => {
            k < 2 || table.permute_arguments(&swap01(k)).values() == table.values()
        }
        Constraint::PreservesRelation(rel) => preserves_relation(table, rel),
        Constraint::QuotientEquals(p, quotient) => {
            let mut a = vec![0; k];
            (0..table.values().len()).all(|i| {
                decode_index(i, n, &mut a);
                let blocks: Vec<Elem> = a.iter().map(|&x| p.block_of(x) as Elem).collect();
                p.block_of(table.values()[i]) == quotient.at(&blocks) as usize
            })
        }
        Constraint::InvariantPartition(p) => {
            let mut a = vec![0; k];
            let mut b = vec![0; k];
            (0..table.values().len()).all(|i| {
                decode_index(i, n, &mut a);
                (0..table.values().len()).all(|j| {
                    decode_index(j, n, &mut b);
                    !a.iter().zip(&b).all(|(&x, &y)| p.related(x, y))
                        || p.related(table.values()[i], table.values()[j])
                })
            })
        }
        Constraint::RestrictionEquals(subset, expected) => {
            table.restrict(subset).map(|r| r.values() == expected.values()).unwrap_or(false)
        }
        Constraint::PartialValues(p) => {
            p.values().iter().zip(table.values()).all(|(w, &v)| w.is_none_or(|w| w == v))
        }
        Constraint::CommutesWithPermutation(pi) => {
            let mut a = vec![0; k];
            (0..table.values().len()).all(|i| {
                decode_index(i, n, &mut a);
                let image: Vec<Elem> = a.iter().map(|&x| pi[x as usize]).collect();
                table.at(&image) == pi[table.values()[i] as usize]
            })
        }
        Constraint::AgreesOnTuples(pairs) => pairs.iter().all(|(args, v)| table.at(args) == *v),
    }
}

/// For each cell, the block its value must lie in.
fn required_blocks(p: &Partition, quotient: &OperationTable, n: usize, k: usize) -> Vec<usize> {
    let mut tuple = vec![0; k];
    (0..table_len(n, k))
        .map(|cell| {
            decode_index(cell, n, &mut tuple);
            let blocks: Vec<Elem> = tuple.iter().map(|&x| p.block_of(x) as Elem).collect();
            quotient.at(&blocks) as usize
        })
        .collect()
}

fn swap01(k: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..k).collect();
    p.swap(0, 1);
    p
}

/// Whether `table` is a polymorphism of the relation.
pub fn preserves_relation(table: &OperationTable, rel: &[Vec<Elem>]) -> bool {
    let k = table.arity();
    let Some(r) = rel.first().map(Vec::len) else { return true };
    let mut choice = vec![0usize; k];
    let mut args = vec![0; k];
    let mut image = vec![0; r];
    loop {
        for (j, slot) in image.iter_mut().enumerate() {
            for (a, &c) in args.iter_mut().zip(&choice) {
                *a = rel[c][j];
            }
            *slot = table.at(&args);
        }
        if !rel.contains(&image) {
            return false;
        }
        let mut p = k;
        loop {
            if p == 0 {
                return true;
            }
            p -= 1;
            choice[p] += 1;
            if choice[p] < rel.len() {
                break;
            }
            choice[p] = 0;
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Undo {
    Cell(usize),
    ClassBlock { partition: usize, class: usize },
}

struct RelationCheck {
    /// For each combination of relation tuples, the cells read per coordinate.
    combos: Vec<Vec<usize>>,
    by_cell: Vec<Vec<usize>>,
    members: Vec<Vec<Elem>>,
}

struct PartitionCheck {
    partition: Partition,
    class_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    block: Vec<Option<usize>>,
}

struct Solver {
    n: usize,
    k: usize,
    cells: Vec<Option<Elem>>,
    orbit: Vec<Vec<usize>>,
    perms: Vec<(Vec<usize>, Vec<Elem>)>,
    partitions: Vec<PartitionCheck>,
    relations: Vec<RelationCheck>,
    quotients: Vec<(Partition, Vec<usize>)>,
    trail: Vec<Undo>,
    queue: Vec<usize>,
}

impl Solver {
    fn new(spec: &SearchSpec) -> Self {
        let (n, k) = (spec.domain, spec.arity);
        let len = table_len(n, k);
        let mut uf = UnionFind::new(len);
        let mut tuple = vec![0; k];
        let mut perms = Vec::new();
        let mut partitions = Vec::new();
        let mut relations = Vec::new();
        let mut quotients = Vec::new();
        for c in &spec.constraints {
            let arg_perms: Vec<Vec<usize>> = match c {
                Constraint::Cyclic => vec![(1..k).chain(core::iter::once(0)).collect()],
                Constraint::Symmetric => {
                    let mut v = vec![(1..k).chain(core::iter::once(0)).collect()];
                    if k >= 2 {
                        v.push(swap01(k));
                    }
                    v
                }
                Constraint::Commutative if k >= 2 => vec![swap01(k)],
                _ => Vec::new(),
            };
            for p in arg_perms {
                for cell in 0..len {
                    decode_index(cell, n, &mut tuple);
                    let moved: Vec<Elem> = p.iter().map(|&i| tuple[i]).collect();
                    uf.union(cell, encode_index(&moved, n));
                }
            }
            match c {
                Constraint::QuotientEquals(p, quotient) => {
                    quotients.push((p.clone(), required_blocks(p, quotient, n, k)));
                }
                Constraint::CommutesWithPermutation(pi) => {
                    let image: Vec<usize> = (0..len)
                        .map(|cell| {
                            decode_index(cell, n, &mut tuple);
                            let moved: Vec<Elem> = tuple.iter().map(|&x| pi[x as usize]).collect();
                            encode_index(&moved, n)
                        })
                        .collect();
                    perms.push((image, pi.clone()));
                    let inv = invert(pi);
                    let image_inv = (0..len)
                        .map(|cell| {
                            decode_index(cell, n, &mut tuple);
                            let moved: Vec<Elem> = tuple.iter().map(|&x| inv[x as usize]).collect();
                            encode_index(&moved, n)
                        })
                        .collect();
                    perms.push((image_inv, inv));
                }
                Constraint::InvariantPartition(p) => {
                    let blocks = p.num_blocks();
                    let class_of: Vec<usize> = (0..len)
                        .map(|cell| {
                            decode_index(cell, n, &mut tuple);
                            tuple.iter().fold(0, |acc, &x| acc * blocks + p.block_of(x))
                        })
                        .collect();
                    let classes = table_len(blocks, k);
                    let mut members = vec![Vec::new(); classes];
                    for (cell, &cl) in class_of.iter().enumerate() {
                        members[cl].push(cell);
                    }
                    partitions.push(PartitionCheck {
                        partition: p.clone(),
                        class_of,
                        members,
                        block: vec![None; classes],
                    });
                }
                Constraint::PreservesRelation(rel) if !rel.is_empty() => {
                    let r = rel[0].len();
                    let mut combos = Vec::new();
                    let mut choice = vec![0usize; k];
                    let mut args = vec![0; k];
                    'outer: loop {
                        let cells_read: Vec<usize> = (0..r)
                            .map(|j| {
                                for (a, &c) in args.iter_mut().zip(&choice) {
                                    *a = rel[c][j];
                                }
                                encode_index(&args, n)
                            })
                            .collect();
                        combos.push(cells_read);
                        let mut p = k;
                        loop {
                            if p == 0 {
                                break 'outer;
                            }
                            p -= 1;
                            choice[p] += 1;
                            if choice[p] < rel.len() {
                                break;
                            }
                            choice[p] = 0;
                        }
                    }
                    combos.sort_unstable();
                    combos.dedup();
                    let mut by_cell = vec![Vec::new(); len];
                    for (ci, cells) in combos.iter().enumerate() {
                        let mut uniq = cells.clone();
                        uniq.sort_unstable();
                        uniq.dedup();
                        for c in uniq {
                            by_cell[c].push(ci);
                        }
                    }
                    relations.push(RelationCheck { combos, by_cell, members: rel.clone() });
                }
                _ => {}
            }
        }
        let mut orbit = vec![Vec::new(); len];
        for cell in 0..len {
            let root = uf.find(cell);
            orbit[root].push(cell);
        }
        let orbit = (0..len).map(|cell| orbit[uf.find(cell)].clone()).collect();
        Solver {
            n,
            k,
            cells: vec![None; len],
            orbit,
            perms,
            partitions,
            relations,
            quotients,
            trail: Vec::new(),
            queue: Vec::new(),
        }
    }

    /// Assigns and propagates; false on conflict. The caller undoes via the
    /// trail either way.
    fn assign(&mut self, cell: usize, value: Elem) -> bool {
        if !self.set(cell, value) {
            return false;
        }
        while let Some(c) = self.queue.pop() {
            if !self.propagate(c) {
                self.queue.clear();
                return false;
            }
        }
        true
    }

    fn set(&mut self, cell: usize, value: Elem) -> bool {
        match self.cells[cell] {
            Some(v) => v == value,
            None => {
                self.cells[cell] = Some(value);
                self.trail.push(Undo::Cell(cell));
                self.queue.push(cell);
                true
            }
        }
    }

    fn propagate(&mut self, cell: usize) -> bool {
        let v = self.cells[cell].expect("queued cells are assigned");
        for i in 0..self.orbit[cell].len() {
            let other = self.orbit[cell][i];
            if !self.set(other, v) {
                return false;
            }
        }
        for i in 0..self.perms.len() {
            let (target, image) = (self.perms[i].0[cell], self.perms[i].1[v as usize]);
            if !self.set(target, image) {
                return false;
            }
        }
        for pi in 0..self.partitions.len() {
            let pc = &self.partitions[pi];
            let class = pc.class_of[cell];
            let b = pc.partition.block_of(v);
            match pc.block[class] {
                Some(req) if req != b => return false,
                Some(_) => {}
                None => {
                    let forced = pc.partition.block(b);
                    let members = pc.members[class].clone();
                    self.partitions[pi].block[class] = Some(b);
                    self.trail.push(Undo::ClassBlock { partition: pi, class });
                    if forced.len() == 1 {
                        for m in members {
                            if !self.set(m, forced[0]) {
                                return false;
                            }
                        }
                    } else {
                        let p = &self.partitions[pi].partition;
                        if members.iter().any(|&m| self.cells[m].is_some_and(|w| p.block_of(w) != b)) {
                            return false;
                        }
                    }
                }
            }
        }
        if self.quotients.iter().any(|(p, req)| p.block_of(v) != req[cell]) {
            return false;
        }
        for rc in &self.relations {
            for &ci in &rc.by_cell[cell] {
                let cells = &rc.combos[ci];
                let image: Option<Vec<Elem>> = cells.iter().map(|&c| self.cells[c]).collect();
                if let Some(image) = image {
                    if !rc.members.contains(&image) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::Cell(c) => self.cells[c] = None,
                Undo::ClassBlock { partition, class } => self.partitions[partition].block[class] = None,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub solutions: Vec<OperationTable>,
    /// The solution cap was reached; more solutions may exist.
    pub truncated: bool,
}

/// All tables satisfying the spec, in lexicographic order, up to `spec.cap`.
pub fn search_ops(spec: &SearchSpec) -> Result<SearchResult> {
    let mut solutions = Vec::new();
    let truncated = run(spec, |t| {
        solutions.push(t);
        true
    })?;
    Ok(SearchResult { solutions, truncated })
}

/// Number of solutions up to `spec.cap`, and whether the cap was hit.
pub fn count_ops(spec: &SearchSpec) -> Result<(usize, bool)> {
    let mut count = 0;
    let truncated = run(spec, |_| {
        count += 1;
        true
    })?;
    Ok((count, truncated))
}

/// The unique table extending `partial` under `constraints`.
pub fn unique_completion(partial: &PartialTable, constraints: &[Constraint]) -> Result<OperationTable> {
    let mut all = constraints.to_vec();
    all.push(Constraint::PartialValues(partial.clone()));
    let spec = SearchSpec::new(partial.domain(), partial.arity(), all).with_cap(2);
    let mut res = search_ops(&spec)?;
    match res.solutions.len() {
        0 => Err(Error::NoCompletion),
        1 => Ok(res.solutions.pop().unwrap()),
        found => Err(Error::NonUniqueCompletion { found }),
    }
}

/// Drives the search; `emit` returns false to stop. Returns the truncation
/// flag.
fn run(spec: &SearchSpec, mut emit: impl FnMut(OperationTable) -> bool) -> Result<bool> {
    spec.validate()?;
    let mut solver = Solver::new(spec);
    let (n, k) = (solver.n, solver.k);
    let mut fixed = Vec::new();
    for c in &spec.constraints {
        fixed.extend(fixed_cells(c, n, k));
    }
    for (cell, v) in fixed {
        if !solver.assign(cell, v) {
            return Ok(false);
        }
    }
    if spec.cap == 0 {
        return Ok(true);
    }
    let mut found = 0usize;
    // Explicit stack of (trail mark, cell, next value to try).
    let mut stack: Vec<(usize, usize, Elem)> = Vec::new();
    let mut descend = true;
    loop {
        if descend {
            match solver.cells.iter().position(Option::is_none) {
                None => {
                    let values: Vec<Elem> = solver.cells.iter().map(|c| c.unwrap()).collect();
                    let table = OperationTable::new("f", k, n, values)?;
                    if spec.constraints.iter().all(|c| satisfies(&table, c)) {
                        found += 1;
                        if !emit(table) {
                            return Ok(true);
                        }
                        if found >= spec.cap {
                            return Ok(true);
                        }
                    }
                }
                Some(cell) => stack.push((solver.trail.len(), cell, 0)),
            }
        }
        let Some(top) = stack.last_mut() else { return Ok(false) };
        let (mark, cell, value) = *top;
        solver.undo_to(mark);
        if value as usize >= n {
            stack.pop();
            descend = false;
            continue;
        }
        top.2 += 1;
        descend = solver.assign(cell, value);
    }
}
