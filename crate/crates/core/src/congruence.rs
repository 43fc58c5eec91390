//! Congruences: compatibility checks, principal congruences, the congruence
//! lattice, quotients and class algebras.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::op::{decode_index, table_len, Algebra, Elem, OperationTable};
use crate::partition::{Partition, UnionFind};

/// Two argument tuples, related blockwise, whose images lie in different
/// blocks. The tuples differ in exactly one position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub op: String,
    pub left: Vec<Elem>,
    pub right: Vec<Elem>,
    pub left_value: Elem,
    pub right_value: Elem,
}

fn check_domain(alg: &Algebra, p: &Partition) -> Result<()> {
    if p.domain() != alg.domain() {
        return Err(Error::DomainMismatch { expected: alg.domain(), found: p.domain() });
    }
    Ok(())
}

/// Calls `f(position, args)` for every argument position of `op` and every
/// assignment of the other positions; `f` fills `args[position]` itself.
/// Stops early when `f` returns false.
fn for_each_translation(
    op: &OperationTable,
    mut f: impl FnMut(usize, &mut [Elem]) -> bool,
) -> bool {
    let k = op.arity();
    let n = op.domain();
    let mut args = vec![0; k];
    for pos in 0..k {
        for idx in 0..table_len(n, k - 1) {
            decode_index(idx, n, &mut args[..k - 1]);
            args.copy_within(pos..k - 1, pos + 1);
            if !f(pos, &mut args) {
                return false;
            }
        }
    }
    true
}

/// The first violation of compatibility, or `None` when `p` is a congruence.
pub fn congruence_violation(alg: &Algebra, p: &Partition) -> Result<Option<Violation>> {
    check_domain(alg, p)?;
    let n = alg.domain() as Elem;
    let pairs: Vec<(Elem, Elem)> =
        (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).filter(|&(x, y)| p.related(x, y)).collect();
    for op in alg.ops() {
        let mut found = None;
        for_each_translation(op, |pos, args| {
            for &(x, y) in &pairs {
                args[pos] = x;
                let left = args.to_vec();
                let lv = op.at(args);
                args[pos] = y;
                let rv = op.at(args);
                if !p.related(lv, rv) {
                    found = Some(Violation {
                        op: op.name().into(),
                        left,
                        right: args.to_vec(),
                        left_value: lv,
                        right_value: rv,
                    });
                    return false;
                }
            }
            true
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

pub fn is_congruence(alg: &Algebra, p: &Partition) -> Result<bool> {
    Ok(congruence_violation(alg, p)?.is_none())
}

/// The least congruence relating `a` and `b`.
pub fn principal_congruence(alg: &Algebra, a: Elem, b: Elem) -> Result<Partition> {
    let n = alg.domain();
    for x in [a, b] {
        if x as usize >= n {
            return Err(Error::OutOfRange { value: x as usize, domain: n });
        }
    }
    Ok(generated_congruence(alg, &[(a, b)]))
}

/// The least congruence containing every listed pair. Each newly merged pair
/// is pushed through all unary translations; the equivalence generated by
/// the merged pairs is then closed under translations, hence a congruence.
pub fn generated_congruence(alg: &Algebra, pairs: &[(Elem, Elem)]) -> Partition {
    let mut uf = UnionFind::new(alg.domain());
    let mut queue: Vec<(Elem, Elem)> = Vec::new();
    for &(a, b) in pairs {
        if uf.union(a as usize, b as usize) {
            queue.push((a, b));
        }
    }
    while let Some((x, y)) = queue.pop() {
        for op in alg.ops() {
            for_each_translation(op, |pos, args| {
                args[pos] = x;
                let u = op.at(args);
                args[pos] = y;
                let v = op.at(args);
                if uf.union(u as usize, v as usize) {
                    queue.push((u, v));
                }
                true
            });
        }
    }
    uf.partition()
}

/// Every congruence, identity first and full last; otherwise ordered by
/// decreasing number of blocks, then by label sequence.
pub fn all_congruences(alg: &Algebra) -> Vec<Partition> {
    let n = alg.domain() as Elem;
    let mut found: BTreeSet<Partition> = BTreeSet::new();
    found.insert(Partition::identity(n as usize));
    for a in 0..n {
        for b in a + 1..n {
            found.insert(generated_congruence(alg, &[(a, b)]));
        }
    }
    let mut all: Vec<Partition> = found.iter().cloned().collect();
    let mut i = 0;
    while i < all.len() {
        for j in 0..i {
            let join = all[i].join(&all[j]);
            if found.insert(join.clone()) {
                all.push(join);
            }
        }
        i += 1;
    }
    all.sort_by(|x, y| y.num_blocks().cmp(&x.num_blocks()).then_with(|| x.cmp(y)));
    all
}

/// Proper congruences with no proper congruence strictly above them.
pub fn maximal_congruences(alg: &Algebra) -> Vec<Partition> {
    let proper: Vec<Partition> = all_congruences(alg).into_iter().filter(|p| !p.is_full()).collect();
    proper
        .iter()
        .filter(|p| !proper.iter().any(|q| q != *p && p.refines(q)))
        .cloned()
        .collect()
}

/// Whether the only congruences are the identity and the full relation.
pub fn is_simple(alg: &Algebra) -> bool {
    let n = alg.domain() as Elem;
    (0..n).all(|a| (a + 1..n).all(|b| generated_congruence(alg, &[(a, b)]).is_full()))
}

/// The quotient `alg / p`. Block `i` of the canonical block order becomes
/// element `i`.
pub fn quotient_algebra(alg: &Algebra, p: &Partition) -> Result<Algebra> {
    if !is_congruence(alg, p)? {
        return Err(Error::NotACongruence);
    }
    let reps: Vec<Elem> = p.blocks().iter().map(|b| b[0]).collect();
    let m = reps.len();
    let mut lifted = Vec::new();
    let ops = alg
        .ops()
        .iter()
        .map(|op| {
            OperationTable::from_fn(op.name(), op.arity(), m, |args| {
                lifted.clear();
                lifted.extend(args.iter().map(|&a| reps[a as usize]));
                p.block_of(op.at(&lifted)) as Elem
            })
        })
        .collect();
    let q = Algebra::new(m, ops)?;
    Ok(match alg.label() {
        Some(l) => q.with_label(&format!("{l}/{p}")),
        None => q,
    })
}

/// The subalgebra on block `block` of the congruence `p`, relabelled in
/// ascending order.
pub fn class_algebra(alg: &Algebra, p: &Partition, block: usize) -> Result<Algebra> {
    if !is_congruence(alg, p)? {
        return Err(Error::NotACongruence);
    }
    if block >= p.num_blocks() {
        return Err(Error::OutOfRange { value: block, domain: p.num_blocks() });
    }
    alg.subalgebra(&p.block(block))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn meet2() -> Algebra {
        Algebra::new(2, vec![OperationTable::from_fn("t", 2, 2, |a| a[0].min(a[1]))]).unwrap()
    }

    fn chain(n: usize) -> Algebra {
        Algebra::new(n, vec![OperationTable::from_fn("t", 2, n, |a| a[0].min(a[1]))]).unwrap()
    }

    #[test]
    fn semilattice_chain() {
        assert_eq!(principal_congruence(&meet2(), 0, 1).unwrap(), Partition::full(2));
        assert_eq!(principal_congruence(&meet2(), 1, 1).unwrap(), Partition::identity(2));
        // On a chain every interval partition is a congruence: 2^(n-1) of them.
        assert_eq!(all_congruences(&chain(4)).len(), 8);
        let c = chain(3);
        assert_eq!(principal_congruence(&c, 0, 2).unwrap(), Partition::full(3));
        assert_eq!(principal_congruence(&c, 0, 1).unwrap().to_string(), "{0,1}{2}");
        assert!(!is_congruence(&c, &"{0,2}{1}".parse().unwrap()).unwrap());
    }

    #[test]
    fn violation_is_genuine() {
        let c = chain(3);
        let p: Partition = "{0,2}{1}".parse().unwrap();
        let v = congruence_violation(&c, &p).unwrap().unwrap();
        let op = &c.ops()[0];
        assert_eq!(op.at(&v.left), v.left_value);
        assert_eq!(op.at(&v.right), v.right_value);
        assert!(v.left.iter().zip(&v.right).all(|(&x, &y)| p.related(x, y)));
        assert!(!p.related(v.left_value, v.right_value));
    }

    #[test]
    fn quotient_and_class() {
        let c = chain(3);
        let p: Partition = "{0,1}{2}".parse().unwrap();
        let q = quotient_algebra(&c, &p).unwrap();
        assert_eq!(q.ops()[0].values(), meet2().ops()[0].values());
        assert_eq!(class_algebra(&c, &p, 0).unwrap().ops()[0].values(), meet2().ops()[0].values());
        assert_eq!(class_algebra(&c, &p, 1).unwrap().domain(), 1);
        assert_eq!(quotient_algebra(&c, &"{0,2}{1}".parse().unwrap()), Err(Error::NotACongruence));
        assert_eq!(quotient_algebra(&c, &Partition::identity(3)).unwrap().ops(), c.ops());
    }

    #[test]
    fn domain_checked() {
        assert!(is_congruence(&chain(3), &Partition::identity(2)).is_err());
        assert!(principal_congruence(&chain(3), 0, 3).is_err());
    }

    #[test]
    fn simplicity() {
        assert!(is_simple(&meet2()));
        assert!(!is_simple(&chain(3)));
        assert_eq!(maximal_congruences(&chain(3)).len(), 2);
    }
}
