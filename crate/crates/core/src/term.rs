//! Terms over an algebra's signature, stored as a DAG so that witnesses
//! reconstructed from long closure chains stay linear in size.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::op::{decode_index, table_len, Algebra, Elem, OperationTable};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Var(usize),
    /// Operation index into the algebra, with children as earlier node ids.
    Op { op: usize, args: Vec<usize> },
}

/// A term DAG. Every child id is smaller than its parent's id; the root is the
/// last node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    nodes: Vec<Node>,
}

impl Term {
    pub fn var(i: usize) -> Self {
        Term { nodes: vec![Node::Var(i)] }
    }

    /// Builds `op(children..)` by splicing the child DAGs together.
    pub fn apply(op: usize, children: &[Term]) -> Self {
        let mut nodes = Vec::new();
        let mut args = Vec::with_capacity(children.len());
        for child in children {
            let offset = nodes.len();
            nodes.extend(child.nodes.iter().map(|n| match n {
                Node::Var(i) => Node::Var(*i),
                Node::Op { op, args } => {
                    Node::Op { op: *op, args: args.iter().map(|a| a + offset).collect() }
                }
            }));
            args.push(nodes.len() - 1);
        }
        nodes.push(Node::Op { op, args });
        Term { nodes }
    }

    /// Assembles a term from raw nodes, checking the ordering invariant.
    pub fn from_nodes(nodes: Vec<Node>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Unsupported("empty term"));
        }
        for (i, n) in nodes.iter().enumerate() {
            if let Node::Op { args, .. } = n {
                if args.iter().any(|&a| a >= i) {
                    return Err(Error::Unsupported("term node refers forward"));
                }
            }
        }
        Ok(Term { nodes })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> &Node {
        self.nodes.last().expect("terms are nonempty")
    }

    pub fn is_var(&self) -> Option<usize> {
        match self.root() {
            Node::Var(i) => Some(*i),
            Node::Op { .. } => None,
        }
    }

    /// One more than the largest variable index used.
    pub fn num_vars(&self) -> usize {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Var(i) => Some(i + 1),
                Node::Op { .. } => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Number of nodes of the expanded tree, saturating.
    pub fn tree_size(&self) -> usize {
        let mut size: Vec<usize> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let s = match n {
                Node::Var(_) => 1,
                Node::Op { args, .. } => {
                    args.iter().fold(1usize, |acc, &a| acc.saturating_add(size[a]))
                }
            };
            size.push(s);
        }
        *size.last().unwrap()
    }

    fn check(&self, alg: &Algebra) -> Result<()> {
        for n in &self.nodes {
            if let Node::Op { op, args } = n {
                let table = alg.ops().get(*op).ok_or(Error::SignatureMismatch)?;
                if table.arity() != args.len() {
                    return Err(Error::ArityMismatch { expected: table.arity(), found: args.len() });
                }
            }
        }
        Ok(())
    }

    /// Evaluates at a single assignment of elements to variables.
    pub fn eval(&self, alg: &Algebra, vars: &[Elem]) -> Result<Elem> {
        let cols: Vec<Vec<Elem>> = vars.iter().map(|&v| vec![v]).collect();
        Ok(self.eval_power(alg, &cols)?[0])
    }

    /// Evaluates coordinatewise on tuples of a power: `vars[i]` is the value
    /// of variable `i` in every coordinate.
    pub fn eval_power(&self, alg: &Algebra, vars: &[Vec<Elem>]) -> Result<Vec<Elem>> {
        self.check(alg)?;
        let m = vars.first().map_or(1, Vec::len);
        if vars.iter().any(|v| v.len() != m) {
            return Err(Error::LengthMismatch { expected: m, found: 0 });
        }
        if let Some(v) = vars.iter().flatten().find(|&&v| v as usize >= alg.domain()) {
            return Err(Error::OutOfRange { value: *v as usize, domain: alg.domain() });
        }
        let mut values: Vec<Vec<Elem>> = Vec::with_capacity(self.nodes.len());
        let mut args = Vec::new();
        for n in &self.nodes {
            let v = match n {
                Node::Var(i) => vars
                    .get(*i)
                    .cloned()
                    .ok_or(Error::ArityMismatch { expected: i + 1, found: vars.len() })?,
                Node::Op { op, args: children } => {
                    let table = &alg.ops()[*op];
                    (0..m)
                        .map(|j| {
                            args.clear();
                            args.extend(children.iter().map(|&c| values[c][j]));
                            table.at(&args)
                        })
                        .collect()
                }
            };
            values.push(v);
        }
        Ok(values.pop().unwrap())
    }

    /// The `arity`-ary term operation this term induces.
    pub fn to_table(&self, alg: &Algebra, arity: usize) -> Result<OperationTable> {
        if self.num_vars() > arity {
            return Err(Error::ArityMismatch { expected: arity, found: self.num_vars() });
        }
        let n = alg.domain();
        let len = table_len(n, arity);
        let mut tuple = vec![0; arity];
        let mut cols = vec![Vec::with_capacity(len); arity];
        for i in 0..len {
            decode_index(i, n, &mut tuple);
            for (c, &x) in cols.iter_mut().zip(&tuple) {
                c.push(x);
            }
        }
        let values = self.eval_power(alg, &cols)?;
        OperationTable::new("t", arity, n, values)
    }

    /// Fully parenthesized prefix form, e.g. `g(x,t(x,y),y)`.
    pub fn render(&self, alg: &Algebra, var_names: &[&str]) -> String {
        let mut out = String::new();
        self.render_node(self.nodes.len() - 1, alg, var_names, &mut out);
        out
    }

    fn render_node(&self, id: usize, alg: &Algebra, var_names: &[&str], out: &mut String) {
        match &self.nodes[id] {
            Node::Var(i) => match var_names.get(*i) {
                Some(name) => out.push_str(name),
                None => {
                    out.push('x');
                    push_usize(out, *i);
                }
            },
            Node::Op { op, args } => {
                out.push_str(alg.ops().get(*op).map_or("?", |o| o.name()));
                out.push('(');
                for (k, &a) in args.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    self.render_node(a, alg, var_names, out);
                }
                out.push(')');
            }
        }
    }
}

fn push_usize(out: &mut String, x: usize) {
    use core::fmt::Write;
    let _ = write!(out, "{x}");
}

/// Default variable names: `x, y, z, w` and then `x4, x5, ..`.
pub fn default_var_names(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| match i {
            0 => "x".into(),
            1 => "y".into(),
            2 => "z".into(),
            3 => "w".into(),
            _ => {
                let mut s = String::from("x");
                push_usize(&mut s, i);
                s
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meet3() -> Algebra {
        let m = OperationTable::from_fn("m", 2, 3, |a| if a[0] == a[1] { a[0] } else { 0 });
        Algebra::new(3, vec![m]).unwrap()
    }

    #[test]
    fn apply_and_render() {
        let alg = meet3();
        let t = Term::apply(0, &[Term::var(0), Term::apply(0, &[Term::var(1), Term::var(0)])]);
        assert_eq!(t.render(&alg, &["x", "y"]), "m(x,m(y,x))");
        assert_eq!(t.tree_size(), 5);
        assert_eq!(t.eval(&alg, &[1, 2]).unwrap(), 0);
        assert_eq!(t.eval(&alg, &[2, 2]).unwrap(), 2);
    }

    #[test]
    fn to_table_of_projection() {
        let alg = meet3();
        let t = Term::var(1);
        assert_eq!(t.to_table(&alg, 2).unwrap(), OperationTable::projection(2, 3, 1).renamed("t"));
        assert!(t.to_table(&alg, 1).is_err());
    }

    #[test]
    fn arity_checked() {
        let alg = meet3();
        let bad = Term::apply(0, &[Term::var(0)]);
        assert!(bad.eval(&alg, &[0]).is_err());
    }
}
