//! Abelian groups of order at most five and their affine Mal'cev operations.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::op::{invert, Algebra, Elem, OperationTable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    name: &'static str,
    order: usize,
    /// Addition table, row-major.
    add: Vec<Elem>,
}

impl AbelianGroup {
    pub fn cyclic(order: usize) -> Self {
        let name = match order {
            1 => "Z1",
            2 => "Z2",
            3 => "Z3",
            4 => "Z4",
            5 => "Z5",
            _ => "Zn",
        };
        let add = (0..order * order).map(|i| ((i / order + i % order) % order) as Elem).collect();
        AbelianGroup { name, order, add }
    }

    /// The Klein four-group, elements encoded as two bits under xor.
    pub fn klein() -> Self {
        let add = (0..16).map(|i| ((i / 4) ^ (i % 4)) as Elem).collect();
        AbelianGroup { name: "Z2xZ2", order: 4, add }
    }

    /// Builds a group from an addition table, checking the axioms.
    pub fn from_table(name: &'static str, order: usize, add: Vec<Elem>) -> Result<Self> {
        if add.len() != order * order {
            return Err(Error::LengthMismatch { expected: order * order, found: add.len() });
        }
        let g = AbelianGroup { name, order, add };
        if !g.is_abelian_group() {
            return Err(Error::Unsupported("table is not an abelian group"));
        }
        Ok(g)
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        self.add[x as usize * self.order + y as usize]
    }

    /// The identity element.
    pub fn zero(&self) -> Option<Elem> {
        let n = self.order as Elem;
        (0..n).find(|&e| (0..n).all(|x| self.add(e, x) == x))
    }

    pub fn neg(&self, x: Elem) -> Elem {
        let zero = self.zero().expect("groups have an identity");
        (0..self.order as Elem).find(|&y| self.add(x, y) == zero).expect("groups have inverses")
    }

    pub fn is_abelian_group(&self) -> bool {
        let n = self.order as Elem;
        if self.add.iter().any(|&v| v >= n) {
            return false;
        }
        let Some(zero) = self.zero() else { return false };
        let all = || 0..n;
        all().all(|x| all().any(|y| self.add(x, y) == zero))
            && all().all(|x| all().all(|y| self.add(x, y) == self.add(y, x)))
            && all().all(|x| {
                all().all(|y| all().all(|z| self.add(self.add(x, y), z) == self.add(x, self.add(y, z))))
            })
    }

    /// `x − y + z` transported along `labeling`, which sends group element
    /// `g` to domain element `labeling[g]`.
    pub fn malcev_table(&self, labeling: &[Elem]) -> OperationTable {
        let inv = invert(labeling);
        OperationTable::from_fn("p", 3, self.order, |a| {
            let (x, y, z) = (inv[a[0] as usize], inv[a[1] as usize], inv[a[2] as usize]);
            labeling[self.add(self.add(x, self.neg(y)), z) as usize]
        })
    }

    /// The affine Mal'cev algebra of the group with its natural labeling.
    pub fn affine_algebra(&self, op_name: &str) -> Algebra {
        let id: Vec<Elem> = (0..self.order as Elem).collect();
        Algebra::new(self.order, vec![self.malcev_table(&id).renamed(op_name)])
            .expect("one operation")
    }

    pub fn label(&self) -> String {
        String::from(self.name)
    }
}

/// Every abelian group of the given order, up to isomorphism, in a fixed order.
pub fn groups_of_order(order: usize) -> Result<Vec<AbelianGroup>> {
    match order {
        1..=3 | 5 => Ok(vec![AbelianGroup::cyclic(order)]),
        4 => Ok(vec![AbelianGroup::cyclic(4), AbelianGroup::klein()]),
        _ => Err(Error::Unsupported("abelian groups beyond order 5")),
    }
}
