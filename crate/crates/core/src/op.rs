//! Finite operations and algebras.
//!
//! An operation of arity `k` on `{0..n-1}` is stored as its full value table in
//! row-major order: the argument tuple `(x1, .., xk)` lives at index
//! `x1*n^(k-1) + .. + xk`, first argument most significant. The same indexing is
//! used by the text format, the closure engine and the search module.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// An element of a finite domain `{0..n-1}`.
pub type Elem = u8;

/// Largest supported domain size.
pub const MAX_DOMAIN: usize = 16;

/// Number of argument tuples `n^k`.
pub fn table_len(domain: usize, arity: usize) -> usize {
    domain.pow(arity as u32)
}

/// Writes the argument tuple stored at `index` into `out`.
pub fn decode_index(mut index: usize, domain: usize, out: &mut [Elem]) {
    for slot in out.iter_mut().rev() {
        *slot = (index % domain) as Elem;
        index /= domain;
    }
}

/// Row-major index of an argument tuple.
pub fn encode_index(args: &[Elem], domain: usize) -> usize {
    args.iter().fold(0, |acc, &x| acc * domain + x as usize)
}

/// All `k`-tuples over `{0..n-1}` in row-major order.
pub fn all_tuples(domain: usize, arity: usize) -> impl Iterator<Item = Vec<Elem>> {
    (0..table_len(domain, arity)).map(move |i| {
        let mut t = vec![0; arity];
        decode_index(i, domain, &mut t);
        t
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperationTable {
    name: String,
    arity: usize,
    domain: usize,
    values: Vec<Elem>,
}

impl OperationTable {
    pub fn new(name: &str, arity: usize, domain: usize, values: Vec<Elem>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::ArityMismatch { expected: 1, found: 0 });
        }
        if domain == 0 {
            return Err(Error::EmptyAlgebra);
        }
        if domain > MAX_DOMAIN {
            return Err(Error::Unsupported("domain larger than 16"));
        }
        let expected = table_len(domain, arity);
        if values.len() != expected {
            return Err(Error::LengthMismatch { expected, found: values.len() });
        }
        if let Some(&v) = values.iter().find(|&&v| v as usize >= domain) {
            return Err(Error::OutOfRange { value: v as usize, domain });
        }
        Ok(OperationTable { name: name.to_string(), arity, domain, values })
    }

    /// Tabulates `f` over every argument tuple. Panics if `f` leaves the domain.
    pub fn from_fn(
        name: &str,
        arity: usize,
        domain: usize,
        mut f: impl FnMut(&[Elem]) -> Elem,
    ) -> Self {
        let mut args = vec![0; arity];
        let values = (0..table_len(domain, arity))
            .map(|i| {
                decode_index(i, domain, &mut args);
                let v = f(&args);
                assert!((v as usize) < domain, "value {v} outside domain {domain}");
                v
            })
            .collect();
        OperationTable { name: name.to_string(), arity, domain, values }
    }

    /// The `k`-ary projection onto coordinate `i` (0-based).
    pub fn projection(arity: usize, domain: usize, i: usize) -> Self {
        assert!(i < arity);
        let mut name = String::from("pi");
        name.push_str(&(i + 1).to_string());
        Self::from_fn(&name, arity, domain, |a| a[i])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// Unchecked lookup; `args` must have the right length and range.
    #[inline]
    pub fn at(&self, args: &[Elem]) -> Elem {
        self.values[encode_index(args, self.domain)]
    }

    pub fn eval(&self, args: &[Elem]) -> Result<Elem> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: args.len() });
        }
        if let Some(&x) = args.iter().find(|&&x| x as usize >= self.domain) {
            return Err(Error::OutOfRange { value: x as usize, domain: self.domain });
        }
        Ok(self.at(args))
    }

    /// `self ∘ (g1, .., gk)`: the `l`-ary operation `x ↦ self(g1(x), .., gk(x))`.
    pub fn compose(&self, inners: &[OperationTable]) -> Result<OperationTable> {
        if inners.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: inners.len() });
        }
        let l = inners[0].arity;
        for g in inners {
            if g.domain != self.domain {
                return Err(Error::DomainMismatch { expected: self.domain, found: g.domain });
            }
            if g.arity != l {
                return Err(Error::ArityMismatch { expected: l, found: g.arity });
            }
        }
        let mut inner_vals = vec![0; self.arity];
        let values = (0..table_len(self.domain, l))
            .map(|i| {
                for (slot, g) in inner_vals.iter_mut().zip(inners) {
                    *slot = g.values[i];
                }
                self.at(&inner_vals)
            })
            .collect();
        Ok(OperationTable { name: self.name.clone(), arity: l, domain: self.domain, values })
    }

    /// Restriction to `subset`, relabelled `0..|subset|-1` in ascending order of
    /// the original labels.
    pub fn restrict(&self, subset: &[Elem]) -> Result<OperationTable> {
        let subset = normalize_subset(subset, self.domain)?;
        let mut position = vec![usize::MAX; self.domain];
        for (i, &x) in subset.iter().enumerate() {
            position[x as usize] = i;
        }
        let m = subset.len();
        let mut local = vec![0; self.arity];
        let mut global = vec![0; self.arity];
        let mut values = Vec::with_capacity(table_len(m, self.arity));
        for i in 0..table_len(m, self.arity) {
            decode_index(i, m, &mut local);
            for (g, &l) in global.iter_mut().zip(&local) {
                *g = subset[l as usize];
            }
            let v = self.at(&global);
            match position[v as usize] {
                usize::MAX => {
                    return Err(Error::NotClosed { op: self.name.clone(), args: global })
                }
                p => values.push(p as Elem),
            }
        }
        Ok(OperationTable { name: self.name.clone(), arity: self.arity, domain: m, values })
    }

    /// Whether `subset` is closed under this operation.
    pub fn preserves_subset(&self, subset: &[Elem]) -> bool {
        let mut inside = vec![false; self.domain];
        for &x in subset {
            inside[x as usize] = true;
        }
        let mut local = vec![0; self.arity];
        let mut args = vec![0; self.arity];
        (0..table_len(subset.len(), self.arity)).all(|i| {
            decode_index(i, subset.len(), &mut local);
            for (a, &l) in args.iter_mut().zip(&local) {
                *a = subset[l as usize];
            }
            inside[self.at(&args) as usize]
        })
    }

    /// Image of this operation under the bijection `pi` (given as the list of
    /// images `pi[x]`): `x̄ ↦ pi(f(pi⁻¹ x̄))`.
    pub fn transport(&self, pi: &[Elem]) -> OperationTable {
        let inv = invert(pi);
        let mut pre = vec![0; self.arity];
        Self::from_fn(&self.name, self.arity, self.domain, |args| {
            for (p, &a) in pre.iter_mut().zip(args) {
                *p = inv[a as usize];
            }
            pi[self.at(&pre) as usize]
        })
    }

    /// `x̄ ↦ f(x_{perm[0]}, .., x_{perm[k-1]})`.
    pub fn permute_arguments(&self, perm: &[usize]) -> OperationTable {
        let mut args = vec![0; self.arity];
        Self::from_fn(&self.name, self.arity, self.domain, |x| {
            for (a, &p) in args.iter_mut().zip(perm) {
                *a = x[p];
            }
            self.at(&args)
        })
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.domain).all(|x| {
            let args = vec![x as Elem; self.arity];
            self.at(&args) as usize == x
        })
    }

    pub fn is_cyclic(&self) -> bool {
        let mut args = vec![0; self.arity];
        let mut shifted = vec![0; self.arity];
        (0..self.values.len()).all(|i| {
            decode_index(i, self.domain, &mut args);
            for j in 0..self.arity {
                shifted[j] = args[(j + 1) % self.arity];
            }
            self.values[i] == self.at(&shifted)
        })
    }

    pub fn is_symmetric(&self) -> bool {
        // Invariance under the transposition (1 2) and the full cycle generates
        // every permutation.
        if !self.is_cyclic() {
            return false;
        }
        if self.arity < 2 {
            return true;
        }
        let mut args = vec![0; self.arity];
        (0..self.values.len()).all(|i| {
            decode_index(i, self.domain, &mut args);
            args.swap(0, 1);
            self.values[i] == self.at(&args)
        })
    }

    pub fn is_commutative(&self) -> Result<bool> {
        if self.arity != 2 {
            return Err(Error::ArityMismatch { expected: 2, found: self.arity });
        }
        let n = self.domain;
        Ok((0..n).all(|x| (0..n).all(|y| self.values[x * n + y] == self.values[y * n + x])))
    }

    pub fn is_conservative(&self) -> bool {
        let mut args = vec![0; self.arity];
        (0..self.values.len()).all(|i| {
            decode_index(i, self.domain, &mut args);
            args.contains(&self.values[i])
        })
    }

    fn check_ternary(&self) -> Result<()> {
        if self.arity != 3 {
            return Err(Error::ArityMismatch { expected: 3, found: self.arity });
        }
        Ok(())
    }

    /// `m(x,x,y) = m(x,y,x) = m(y,x,x) = x`.
    pub fn is_majority(&self) -> Result<bool> {
        self.check_ternary()?;
        Ok(self.all_pairs(|x, y| {
            self.at(&[x, x, y]) == x && self.at(&[x, y, x]) == x && self.at(&[y, x, x]) == x
        }))
    }

    /// `p(x,y,y) = p(y,x,y) = p(y,y,x) = x`.
    pub fn is_minority(&self) -> Result<bool> {
        self.check_ternary()?;
        Ok(self.all_pairs(|x, y| {
            self.at(&[x, y, y]) == x && self.at(&[y, x, y]) == x && self.at(&[y, y, x]) == x
        }))
    }

    /// `p(x,y,y) = p(y,y,x) = x`.
    pub fn is_malcev(&self) -> Result<bool> {
        self.check_ternary()?;
        Ok(self.all_pairs(|x, y| self.at(&[x, y, y]) == x && self.at(&[y, y, x]) == x))
    }

    fn all_pairs(&self, mut f: impl FnMut(Elem, Elem) -> bool) -> bool {
        let n = self.domain as Elem;
        (0..n).all(|x| (0..n).all(|y| f(x, y)))
    }
}

/// Sorted, deduplicated, range-checked copy of a subset.
pub fn normalize_subset(subset: &[Elem], domain: usize) -> Result<Vec<Elem>> {
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.is_empty() {
        return Err(Error::EmptyAlgebra);
    }
    if let Some(&x) = s.iter().find(|&&x| x as usize >= domain) {
        return Err(Error::OutOfRange { value: x as usize, domain });
    }
    Ok(s)
}

/// Inverse of a bijection given as an image list.
pub fn invert(pi: &[Elem]) -> Vec<Elem> {
    let mut inv = vec![0; pi.len()];
    for (x, &y) in pi.iter().enumerate() {
        inv[y as usize] = x as Elem;
    }
    inv
}

/// All permutations of `{0..n-1}` in lexicographic order of their image lists.
pub fn permutations(n: usize) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    let mut current: Vec<Elem> = (0..n as Elem).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
}

/// A table with unknown cells, used as input to the search module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTable {
    arity: usize,
    domain: usize,
    values: Vec<Option<Elem>>,
}

impl PartialTable {
    pub fn unknown(arity: usize, domain: usize) -> Self {
        PartialTable { arity, domain, values: vec![None; table_len(domain, arity)] }
    }

    pub fn new(arity: usize, domain: usize, values: Vec<Option<Elem>>) -> Result<Self> {
        let expected = table_len(domain, arity);
        if values.len() != expected {
            return Err(Error::LengthMismatch { expected, found: values.len() });
        }
        if let Some(v) = values.iter().flatten().find(|&&v| v as usize >= domain) {
            return Err(Error::OutOfRange { value: *v as usize, domain });
        }
        Ok(PartialTable { arity, domain, values })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn values(&self) -> &[Option<Elem>] {
        &self.values
    }

    pub fn get(&self, args: &[Elem]) -> Option<Elem> {
        self.values[encode_index(args, self.domain)]
    }

    pub fn set(&mut self, args: &[Elem], value: Elem) -> Result<()> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: args.len() });
        }
        for &x in args.iter().chain(core::iter::once(&value)) {
            if x as usize >= self.domain {
                return Err(Error::OutOfRange { value: x as usize, domain: self.domain });
            }
        }
        let i = encode_index(args, self.domain);
        self.values[i] = Some(value);
        Ok(())
    }

    pub fn known(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }
}

impl From<&OperationTable> for PartialTable {
    fn from(op: &OperationTable) -> Self {
        PartialTable {
            arity: op.arity,
            domain: op.domain,
            values: op.values.iter().map(|&v| Some(v)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    domain: usize,
    ops: Vec<OperationTable>,
    label: Option<String>,
}

impl Algebra {
    pub fn new(domain: usize, ops: Vec<OperationTable>) -> Result<Self> {
        if domain == 0 {
            return Err(Error::EmptyAlgebra);
        }
        for (i, op) in ops.iter().enumerate() {
            if op.domain != domain {
                return Err(Error::DomainMismatch { expected: domain, found: op.domain });
            }
            if ops[..i].iter().any(|o| o.name == op.name) {
                return Err(Error::DuplicateOperation(op.name.clone()));
            }
        }
        Ok(Algebra { domain, ops, label: None })
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn ops(&self) -> &[OperationTable] {
        &self.ops
    }

    pub fn op(&self, name: &str) -> Option<&OperationTable> {
        self.ops.iter().find(|o| o.name == name)
    }

    pub fn op_names(&self) -> Vec<&str> {
        self.ops.iter().map(|o| o.name.as_str()).collect()
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(|o| o.arity).max().unwrap_or(0)
    }

    pub fn is_idempotent(&self) -> bool {
        self.ops.iter().all(OperationTable::is_idempotent)
    }

    pub fn check_idempotent(&self) -> Result<()> {
        match self.ops.iter().find(|o| !o.is_idempotent()) {
            Some(op) => Err(Error::NotIdempotent { op: op.name.clone() }),
            None => Ok(()),
        }
    }

    pub fn is_subuniverse(&self, subset: &[Elem]) -> bool {
        self.ops.iter().all(|o| o.preserves_subset(subset))
    }

    /// The subalgebra on `subset`, relabelled in ascending order.
    pub fn subalgebra(&self, subset: &[Elem]) -> Result<Algebra> {
        let ops = self.ops.iter().map(|o| o.restrict(subset)).collect::<Result<Vec<_>>>()?;
        let domain = ops.first().map_or(subset.len(), |o| o.domain);
        Algebra::new(domain, ops)
    }

    /// Isomorphic copy along the bijection `pi`.
    pub fn transport(&self, pi: &[Elem]) -> Algebra {
        Algebra {
            domain: self.domain,
            ops: self.ops.iter().map(|o| o.transport(pi)).collect(),
            label: self.label.clone(),
        }
    }

    /// Direct product with mixed-radix encoding, first factor most significant.
    pub fn product(factors: &[Algebra]) -> Result<Algebra> {
        let (first, rest) = factors.split_first().ok_or(Error::SignatureMismatch)?;
        for f in rest {
            if f.ops.len() != first.ops.len()
                || f.ops.iter().zip(&first.ops).any(|(a, b)| a.name != b.name || a.arity != b.arity)
            {
                return Err(Error::SignatureMismatch);
            }
        }
        let sizes: Vec<usize> = factors.iter().map(|f| f.domain).collect();
        let domain: usize = sizes.iter().product();
        if domain > MAX_DOMAIN {
            return Err(Error::Unsupported("product domain larger than 16"));
        }
        let decode = |mut x: usize| -> Vec<Elem> {
            let mut coords = vec![0; sizes.len()];
            for (c, &s) in coords.iter_mut().zip(&sizes).rev() {
                *c = (x % s) as Elem;
                x /= s;
            }
            coords
        };
        let ops = first
            .ops
            .iter()
            .enumerate()
            .map(|(oi, o)| {
                let mut coord_args = vec![0; o.arity];
                OperationTable::from_fn(&o.name, o.arity, domain, |args| {
                    let decoded: Vec<Vec<Elem>> = args.iter().map(|&a| decode(a as usize)).collect();
                    let mut out = 0usize;
                    for (fi, factor) in factors.iter().enumerate() {
                        for (slot, d) in coord_args.iter_mut().zip(&decoded) {
                            *slot = d[fi];
                        }
                        out = out * sizes[fi] + factor.ops[oi].at(&coord_args) as usize;
                    }
                    out as Elem
                })
            })
            .collect();
        Algebra::new(domain, ops)
    }
}

/// Coordinate projection of a product element (mixed radix, first factor most
/// significant).
pub fn product_coordinate(x: Elem, sizes: &[usize], factor: usize) -> Elem {
    let mut x = x as usize;
    for &s in sizes[factor + 1..].iter().rev() {
        x /= s;
    }
    (x % sizes[factor]) as Elem
}

#[cfg(test)]
mod tests {
    use super::*;

    fn maj2() -> OperationTable {
        OperationTable::from_fn("g", 3, 2, |a| if a[0] == a[1] || a[0] == a[2] { a[0] } else { a[1] })
    }

    fn minority2() -> OperationTable {
        OperationTable::from_fn("g", 3, 2, |a| a[0] ^ a[1] ^ a[2])
    }

    #[test]
    fn row_major_indexing() {
        let op = OperationTable::from_fn("f", 2, 3, |a| a[0]);
        assert_eq!(op.values(), &[0, 0, 0, 1, 1, 1, 2, 2, 2]);
        assert_eq!(encode_index(&[1, 2], 3), 5);
        let mut t = [0; 3];
        decode_index(11, 2, &mut t);
        assert_eq!(t, [0, 1, 1]);
    }

    #[test]
    fn eval_errors() {
        let op = maj2();
        assert_eq!(op.eval(&[0, 1]), Err(Error::ArityMismatch { expected: 3, found: 2 }));
        assert_eq!(op.eval(&[0, 1, 2]), Err(Error::OutOfRange { value: 2, domain: 2 }));
        assert_eq!(op.eval(&[1, 0, 1]), Ok(1));
    }

    #[test]
    fn new_validates() {
        assert!(matches!(
            OperationTable::new("g", 3, 4, vec![0; 63]),
            Err(Error::LengthMismatch { expected: 64, found: 63 })
        ));
        assert!(matches!(
            OperationTable::new("g", 1, 2, vec![0, 2]),
            Err(Error::OutOfRange { value: 2, domain: 2 })
        ));
    }

    #[test]
    fn compose_with_projections_is_identity() {
        let g = maj2();
        let ps: Vec<_> = (0..3).map(|i| OperationTable::projection(3, 2, i)).collect();
        assert_eq!(g.compose(&ps).unwrap(), g);
        let bad = [OperationTable::projection(2, 2, 0), OperationTable::projection(3, 2, 0), OperationTable::projection(3, 2, 1)];
        assert!(g.compose(&bad).is_err());
    }

    #[test]
    fn restrict_relabels_and_detects_escape() {
        // meet on 0 <= 1, 0 <= 2
        let meet = OperationTable::from_fn("m", 2, 3, |a| if a[0] == a[1] { a[0] } else { 0 });
        assert_eq!(meet.restrict(&[1]).unwrap().values(), &[0]);
        assert_eq!(meet.restrict(&[2, 0]).unwrap().values(), &[0, 0, 0, 1]);
        match meet.restrict(&[1, 2]) {
            Err(Error::NotClosed { args, .. }) => assert_eq!(args, vec![1, 2]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn predicates() {
        assert!(maj2().is_majority().unwrap());
        assert!(!maj2().is_minority().unwrap());
        assert!(minority2().is_minority().unwrap());
        assert!(minority2().is_malcev().unwrap());
        assert!(maj2().is_symmetric() && maj2().is_conservative() && maj2().is_idempotent());
        let first = OperationTable::projection(2, 3, 0);
        assert!(!first.is_commutative().unwrap());
        assert!(first.is_conservative());
        assert!(maj2().is_commutative().is_err());
        assert!(first.is_majority().is_err());
    }

    #[test]
    fn product_acts_coordinatewise() {
        let m = Algebra::new(2, vec![maj2()]).unwrap();
        let z = Algebra::new(2, vec![minority2()]).unwrap();
        let p = Algebra::product(&[m.clone(), z.clone()]).unwrap();
        assert_eq!(p.domain(), 4);
        let g = &p.ops()[0];
        for args in all_tuples(4, 3) {
            let v = g.at(&args);
            let first: Vec<Elem> = args.iter().map(|&a| product_coordinate(a, &[2, 2], 0)).collect();
            let second: Vec<Elem> = args.iter().map(|&a| product_coordinate(a, &[2, 2], 1)).collect();
            assert_eq!(product_coordinate(v, &[2, 2], 0), m.ops()[0].at(&first));
            assert_eq!(product_coordinate(v, &[2, 2], 1), z.ops()[0].at(&second));
        }
        assert_eq!(Algebra::product(core::slice::from_ref(&m)).unwrap(), m);
        let s = Algebra::new(2, vec![OperationTable::from_fn("t", 2, 2, |a| a[0].min(a[1]))]).unwrap();
        assert_eq!(Algebra::product(&[m, s]), Err(Error::SignatureMismatch));
    }

    #[test]
    fn permutations_lexicographic() {
        let ps = permutations(3);
        assert_eq!(ps.len(), 6);
        assert_eq!(ps[0], vec![0, 1, 2]);
        assert_eq!(ps[1], vec![0, 2, 1]);
        assert_eq!(ps[5], vec![2, 1, 0]);
    }

    #[test]
    fn transport_is_isomorphism() {
        let meet = OperationTable::from_fn("m", 2, 3, |a| if a[0] == a[1] { a[0] } else { 0 });
        let pi = [2, 0, 1];
        let t = meet.transport(&pi);
        for args in all_tuples(3, 2) {
            let image: Vec<Elem> = args.iter().map(|&a| pi[a as usize]).collect();
            assert_eq!(t.at(&image), pi[meet.at(&args) as usize]);
        }
    }

    #[test]
    fn algebra_rejects_duplicates() {
        let a = maj2();
        assert_eq!(
            Algebra::new(2, vec![a.clone(), a]),
            Err(Error::DuplicateOperation("g".into()))
        );
    }
}
