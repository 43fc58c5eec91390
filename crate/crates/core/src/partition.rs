//! Equivalence relations on `{0..n-1}` in canonical block form.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::op::Elem;

/// A partition stored as a block-label map. Blocks are numbered by ascending
/// minimum element, so two equal partitions always have equal `labels`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<u8>,
}

impl Partition {
    pub fn identity(n: usize) -> Self {
        Partition { labels: (0..n as u8).collect() }
    }

    pub fn full(n: usize) -> Self {
        Partition { labels: vec![0; n] }
    }

    /// Canonicalizes an arbitrary labeling (equal labels = same block).
    pub fn from_labels(raw: &[usize]) -> Self {
        let mut map: Vec<(usize, u8)> = Vec::new();
        let labels = raw
            .iter()
            .map(|&r| match map.iter().find(|(k, _)| *k == r) {
                Some(&(_, l)) => l,
                None => {
                    let l = map.len() as u8;
                    map.push((r, l));
                    l
                }
            })
            .collect();
        Partition { labels }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<Elem>]) -> Result<Self> {
        let mut raw = vec![usize::MAX; n];
        for (bi, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &x in block {
                let slot = raw
                    .get_mut(x as usize)
                    .ok_or(Error::OutOfRange { value: x as usize, domain: n })?;
                if *slot != usize::MAX {
                    return Err(Error::InvalidPartition(
                        ["element ", &x.to_string(), " in two blocks"].concat(),
                    ));
                }
                *slot = bi;
            }
        }
        if let Some(x) = raw.iter().position(|&r| r == usize::MAX) {
            return Err(Error::InvalidPartition(["element ", &x.to_string(), " not covered"].concat()));
        }
        Ok(Self::from_labels(&raw))
    }

    /// The partition with one block `block` and singletons elsewhere.
    pub fn with_block(n: usize, block: &[Elem]) -> Self {
        let raw: Vec<usize> = (0..n)
            .map(|x| if block.contains(&(x as Elem)) { usize::MAX } else { x })
            .collect();
        Self::from_labels(&raw)
    }

    pub fn domain(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    #[inline]
    pub fn block_of(&self, x: Elem) -> usize {
        self.labels[x as usize] as usize
    }

    #[inline]
    pub fn related(&self, x: Elem, y: Elem) -> bool {
        self.labels[x as usize] == self.labels[y as usize]
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    pub fn blocks(&self) -> Vec<Vec<Elem>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (x, &l) in self.labels.iter().enumerate() {
            blocks[l as usize].push(x as Elem);
        }
        blocks
    }

    pub fn block(&self, i: usize) -> Vec<Elem> {
        (0..self.domain() as Elem).filter(|&x| self.block_of(x) == i).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.num_blocks() == self.domain()
    }

    pub fn is_full(&self) -> bool {
        self.num_blocks() <= 1
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Partition) -> bool {
        let n = self.domain();
        (0..n).all(|x| (0..n).all(|y| !self.related(x as Elem, y as Elem) || other.related(x as Elem, y as Elem)))
    }

    pub fn join(&self, other: &Partition) -> Partition {
        let mut uf = UnionFind::new(self.domain());
        for p in [self, other] {
            let mut first = vec![usize::MAX; p.num_blocks()];
            for (x, &l) in p.labels.iter().enumerate() {
                match first[l as usize] {
                    usize::MAX => first[l as usize] = x,
                    r => {
                        uf.union(r, x);
                    }
                }
            }
        }
        uf.partition()
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        let raw: Vec<usize> = self
            .labels
            .iter()
            .zip(&other.labels)
            .map(|(&a, &b)| a as usize * 256 + b as usize)
            .collect();
        Self::from_labels(&raw)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in self.blocks() {
            f.write_str("{")?;
            for (i, x) in block.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `{0,2}{1,3}`. Whitespace is ignored; the domain is inferred as
    /// one more than the largest element, so every element must be listed.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |msg: &str| Error::InvalidPartition(msg.to_string());
        let mut blocks = Vec::new();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let inner = rest.strip_prefix('{').ok_or_else(|| bad("expected '{'"))?;
            let close = inner.find('}').ok_or_else(|| bad("missing '}'"))?;
            let block = inner[..close]
                .split(',')
                .map(|t| t.parse::<Elem>().map_err(|_| bad("bad element")))
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
            rest = &inner[close + 1..];
        }
        if blocks.is_empty() {
            return Err(bad("no blocks"));
        }
        let n = blocks.iter().flatten().map(|&x| x as usize + 1).max().unwrap_or(0);
        Self::from_blocks(n, &blocks)
    }
}

/// Union-find with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn partition(&mut self) -> Partition {
        let raw: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition::from_labels(&raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        let a = Partition::from_blocks(4, &[vec![3, 1], vec![2, 0]]).unwrap();
        assert_eq!(a.to_string(), "{0,2}{1,3}");
        assert_eq!(a, p("{1,3}{0,2}"));
        assert_eq!(Partition::identity(3).to_string(), "{0}{1}{2}");
    }

    #[test]
    fn parse_errors() {
        assert!("{0,1}{1,2}".parse::<Partition>().is_err());
        assert!("{0}{2}".parse::<Partition>().is_err());
        assert!("0,1".parse::<Partition>().is_err());
        assert!("{}".parse::<Partition>().is_err());
    }

    #[test]
    fn join_and_meet() {
        let a = p("{0,1}{2}{3}");
        let b = p("{0}{1,2}{3}");
        assert_eq!(a.join(&b), p("{0,1,2}{3}"));
        assert_eq!(a.meet(&b), Partition::identity(4));
        assert_eq!(p("{0,2}{1,3}").meet(&p("{0,1,2}{3}")), p("{0,2}{1}{3}"));
        assert!(a.refines(&a.join(&b)));
        assert!(!a.refines(&b));
    }

    #[test]
    fn with_block() {
        assert_eq!(Partition::with_block(4, &[0, 3]).to_string(), "{0,3}{1}{2}");
    }
}
