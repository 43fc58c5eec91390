//! Checkable assertions about a single algebra, grouped into certificates.
//!
//! Every check reruns the underlying computation; nothing is trusted from an
//! earlier assertion. Failures carry a concrete counterexample.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::catalog::{equivalent_up_to_iso, get, verify_subdirect};
use crate::congruence::{all_congruences, congruence_violation, is_simple, quotient_algebra};
use crate::error::{Error, Result};
use crate::op::{encode_index, Algebra, Elem, OperationTable};
use crate::partition::Partition;
use crate::search::{search_ops, SearchSpec};
use crate::structure::{
    absorbs, has_cyclic_term, is_taylor, subuniverse_generated, two_generated, weak_edges, EdgeKind,
};
use crate::subpower::{clone_membership, cyclic_terms, generate, render_tuple, Stop};
use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Count {
    Exactly(usize),
    AtLeast(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assertion {
    IsCongruence(Partition),
    QuotientEquivalentTo(Partition, String),
    /// Block index in canonical block order.
    ClassEquivalentTo(Partition, usize, String),
    Absorbs { subset: Vec<Elem>, arity: usize, expected: bool },
    /// Some edge of this kind joins the pair; when blocks are given, its
    /// witnessing congruence must have exactly these blocks.
    EdgeIs { pair: (Elem, Elem), kind: EdgeKind, witness: Option<Vec<Vec<Elem>>> },
    SubpowerContains { power: usize, generators: Vec<Vec<Elem>>, tuple: Vec<Elem> },
    SubpowerExcludes { power: usize, generators: Vec<Vec<Elem>>, tuple: Vec<Elem> },
    CloneContainsOp(OperationTable),
    CloneLacksOp(OperationTable),
    UniqueOpUnderConstraints(SearchSpec, OperationTable),
    /// With a pair, that pair generates the algebra; without, some pair does.
    TwoGenerated(Option<(Elem, Elem)>),
    Simple(bool),
    /// Term equivalence up to a relabelling of the domain.
    TermEquivalentTo(String),
    SubdirectInto(Partition, Partition, String, String),
    CyclicTermCount(usize, Count),
    TaylorViaEdges(bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub detail: String,
}

impl Outcome {
    pub fn pass(detail: impl Into<String>) -> Self {
        Outcome { status: Status::Pass, detail: detail.into() }
    }

    pub fn fail(detail: impl Into<String>) -> Self {
        Outcome { status: Status::Fail, detail: detail.into() }
    }

    pub fn inconclusive(detail: impl Into<String>) -> Self {
        Outcome { status: Status::Inconclusive, detail: detail.into() }
    }

    fn expect(ok: bool, pass: impl Into<String>, fail: impl Into<String>) -> Self {
        if ok {
            Outcome::pass(pass)
        } else {
            Outcome::fail(fail)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// Catalog name of the algebra under test.
    pub algebra: String,
    pub notes: Vec<String>,
    pub assertions: Vec<Assertion>,
}

/// Checks one assertion. Cap exhaustion becomes an inconclusive outcome;
/// malformed input and unknown names are errors.
pub fn check_assertion(alg: &Algebra, assertion: &Assertion, cap: usize) -> Result<Outcome> {
    match check(alg, assertion, cap) {
        Err(Error::Inconclusive { cap }) => Ok(Outcome::inconclusive(format!("closure cap {cap} reached"))),
        other => other,
    }
}

/// Checks every assertion in order against the catalog algebra the
/// certificate names.
pub fn check_certificate(cert: &Certificate, cap: usize) -> Result<Vec<Outcome>> {
    if cert.assertions.is_empty() {
        return Err(Error::Unsupported("certificate without assertions"));
    }
    let alg = get(&cert.algebra)?.algebra;
    cert.assertions.iter().map(|a| check_assertion(&alg, a, cap)).collect()
}

fn check(alg: &Algebra, assertion: &Assertion, cap: usize) -> Result<Outcome> {
    Ok(match assertion {
        Assertion::IsCongruence(p) => match congruence_violation(alg, p)? {
            None => Outcome::pass(""),
            Some(v) => Outcome::fail(format!(
                "{}{} = {} and {}{} = {} are not related",
                v.op,
                render_tuple(&v.left),
                v.left_value,
                v.op,
                render_tuple(&v.right),
                v.right_value
            )),
        },
        Assertion::QuotientEquivalentTo(p, name) => {
            let target = get(name)?.algebra;
            match quotient_or_violation(alg, p)? {
                Err(fail) => fail,
                Ok(q) => iso_outcome(&q, &target, name, cap)?,
            }
        }
        Assertion::ClassEquivalentTo(p, block, name) => {
            let target = get(name)?.algebra;
            if *block >= p.num_blocks() {
                return Err(Error::OutOfRange { value: *block, domain: p.num_blocks() });
            }
            match quotient_or_violation(alg, p)? {
                Err(fail) => fail,
                Ok(_) => iso_outcome(&alg.subalgebra(&p.block(*block))?, &target, name, cap)?,
            }
        }
        Assertion::Absorbs { subset, arity, expected } => {
            let r = absorbs(alg, subset, *arity, cap)?;
            let detail = match &r.witness {
                Some(t) => format!("term {}", render_term(alg, t, *arity)),
                None => "no absorbing term".to_string(),
            };
            Outcome::expect(r.holds == *expected, detail.clone(), detail)
        }
        Assertion::EdgeIs { pair, kind, witness } => {
            let edges = weak_edges(alg, pair.0, pair.1, cap)?;
            let found = edges.iter().find(|e| {
                e.kind == *kind && witness.as_ref().is_none_or(|w| *w == e.witness_blocks())
            });
            match found {
                Some(e) => Outcome::pass(e.render(alg)),
                None if edges.is_empty() => Outcome::fail("no edge joins the pair"),
                None => {
                    let seen: Vec<String> = edges.iter().map(|e| e.render(alg)).collect();
                    Outcome::fail(format!("found only: {}", seen.join("; ")))
                }
            }
        }
        Assertion::SubpowerContains { power, generators, tuple } => {
            let targets = [tuple.clone()];
            let set = generate(alg, *power, generators, cap, Stop::Targets(&targets))?;
            match set.index_of(tuple) {
                Some(i) => Outcome::pass(format!("term {}", render_term(alg, &set.witness_term(i), generators.len()))),
                None if set.is_truncated() => return Err(Error::Inconclusive { cap }),
                None => Outcome::fail(format!("closed at {} elements without {}", set.len(), render_tuple(tuple))),
            }
        }
        Assertion::SubpowerExcludes { power, generators, tuple } => {
            let targets = [tuple.clone()];
            let set = generate(alg, *power, generators, cap, Stop::Targets(&targets))?;
            match set.index_of(tuple) {
                Some(i) => Outcome::fail(format!(
                    "{} is produced by {}",
                    render_tuple(tuple),
                    render_term(alg, &set.witness_term(i), generators.len())
                )),
                None if set.is_truncated() => return Err(Error::Inconclusive { cap }),
                None => Outcome::pass(format!("closed at {} elements", set.len())),
            }
        }
        Assertion::CloneContainsOp(op) => match clone_membership(alg, op, cap)? {
            Some(t) => Outcome::pass(format!("term {}", render_term(alg, &t, op.arity()))),
            None => Outcome::fail("operation is not a term operation"),
        },
        Assertion::CloneLacksOp(op) => match clone_membership(alg, op, cap)? {
            Some(t) => Outcome::fail(format!("term {} produces it", render_term(alg, &t, op.arity()))),
            None => Outcome::pass(""),
        },
        Assertion::UniqueOpUnderConstraints(spec, expected) => unique_outcome(spec, expected)?,
        Assertion::TwoGenerated(pair) => match pair {
            Some((a, b)) => {
                let sg = subuniverse_generated(alg, &[*a, *b])?;
                Outcome::expect(
                    sg.len() == alg.domain(),
                    format!("Sg{{{a},{b}}} is everything"),
                    format!("Sg{{{a},{b}}} = {}", render_set(&sg)),
                )
            }
            None => match two_generated(alg) {
                Some((a, b)) => Outcome::pass(format!("generated by {a},{b}")),
                None => Outcome::fail("no pair generates the algebra"),
            },
        },
        Assertion::Simple(expected) => {
            let simple = is_simple(alg);
            let detail = if simple {
                "no nontrivial congruence".to_string()
            } else {
                let all = all_congruences(alg);
                format!("nontrivial congruence {}", all[1])
            };
            Outcome::expect(simple == *expected, detail.clone(), detail)
        }
        Assertion::TermEquivalentTo(name) => {
            let target = get(name)?.algebra;
            if target.domain() != alg.domain() {
                Outcome::fail(format!("{name} has {} elements", target.domain()))
            } else {
                iso_outcome(alg, &target, name, cap)?
            }
        }
        Assertion::SubdirectInto(t1, t2, b1, b2) => {
            for theta in [t1, t2] {
                if let Err(fail) = quotient_or_violation(alg, theta)? {
                    return Ok(fail);
                }
            }
            Outcome::expect(
                verify_subdirect(alg, t1, t2, b1, b2, cap)?,
                "",
                format!("{t1} and {t2} do not give a subdirect embedding into {b1} x {b2}"),
            )
        }
        Assertion::CyclicTermCount(k, count) => cyclic_outcome(alg, *k, *count, cap)?,
        Assertion::TaylorViaEdges(expected) => {
            let report = is_taylor(alg, cap)?;
            let detail = if report.taylor {
                format!("{} edges connect every subuniverse", report.edges.len())
            } else {
                let parts: Vec<String> = report.disconnected.iter().map(|s| render_set(s)).collect();
                format!("disconnected: {}", parts.join(" "))
            };
            Outcome::expect(report.taylor == *expected, detail.clone(), detail)
        }
    })
}

/// The quotient, or a failing outcome naming the violation.
fn quotient_or_violation(alg: &Algebra, p: &Partition) -> Result<core::result::Result<Algebra, Outcome>> {
    if congruence_violation(alg, p)?.is_some() {
        let fail = check(alg, &Assertion::IsCongruence(p.clone()), 0)?;
        return Ok(Err(Outcome::fail(format!("{p} is not a congruence: {}", fail.detail))));
    }
    Ok(Ok(quotient_algebra(alg, p)?))
}

fn iso_outcome(alg: &Algebra, target: &Algebra, name: &str, cap: usize) -> Result<Outcome> {
    if alg.domain() != target.domain() {
        return Ok(Outcome::fail(format!("{} elements against {} in {name}", alg.domain(), target.domain())));
    }
    Ok(match equivalent_up_to_iso(target, alg, cap)? {
        Some(pi) => Outcome::pass(format!("via {}", render_tuple(&pi))),
        None => Outcome::fail(format!("not term-equivalent to {name} under any relabelling")),
    })
}

fn unique_outcome(spec: &SearchSpec, expected: &OperationTable) -> Result<Outcome> {
    let spec = spec.clone().with_cap(2);
    let found = search_ops(&spec)?.solutions;
    Ok(match found.as_slice() {
        [] => Outcome::fail("no operation satisfies the constraints"),
        [only] if only.values() == expected.values() => Outcome::pass("exactly one solution"),
        [only] => Outcome::fail(format!("the unique solution differs: {}", first_difference(only, expected))),
        [first, second, ..] => {
            let extra = if first.values() == expected.values() { second } else { first };
            Outcome::fail(format!("at least two solutions; another one has {}", first_difference(extra, expected)))
        }
    })
}

/// `f(args) = v where expected w` at the first differing cell.
fn first_difference(got: &OperationTable, expected: &OperationTable) -> String {
    if got.arity() != expected.arity() || got.domain() != expected.domain() {
        return "a different signature".to_string();
    }
    let (n, k) = (got.domain(), got.arity());
    crate::op::all_tuples(n, k)
        .find(|args| got.at(args) != expected.at(args))
        .map(|args| {
            let i = encode_index(&args, n);
            format!("f{} = {} where expected {}", render_tuple(&args), got.values()[i], expected.values()[i])
        })
        .unwrap_or_else(|| "identical values".to_string())
}

fn cyclic_outcome(alg: &Algebra, k: usize, count: Count, cap: usize) -> Result<Outcome> {
    if count == Count::AtLeast(1) {
        return Ok(Outcome::expect(has_cyclic_term(alg, k, cap)?, "", "no cyclic term"));
    }
    let limit = match count {
        Count::Exactly(c) => c + 1,
        Count::AtLeast(c) => c,
    };
    let found = cyclic_terms(alg, k, cap, limit)?;
    let got = found.tables.len();
    let detail = format!("{got} cyclic terms");
    Ok(match count {
        Count::Exactly(c) if got > c => Outcome::fail(format!("at least {got} cyclic terms")),
        Count::AtLeast(c) if got >= c => Outcome::pass(format!("at least {detail}")),
        _ if found.lower_bound_only => return Err(Error::Inconclusive { cap }),
        Count::Exactly(c) => Outcome::expect(got == c, detail.clone(), detail),
        Count::AtLeast(_) => Outcome::fail(detail),
    })
}

fn render_term(alg: &Algebra, t: &Term, vars: usize) -> String {
    let names = crate::term::default_var_names(vars.max(t.num_vars()));
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    t.render(alg, &names)
}

fn render_set(s: &[Elem]) -> String {
    let inner: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn t410() -> Algebra {
        get("T4,10").unwrap().algebra
    }

    #[test]
    fn congruence_and_corruption() {
        let good = Assertion::IsCongruence("{0,2}{1,3}".parse().unwrap());
        assert_eq!(check_assertion(&t410(), &good, 1000).unwrap().status, Status::Pass);
        let bad = Assertion::IsCongruence("{0,1}{2,3}".parse().unwrap());
        let out = check_assertion(&t410(), &bad, 1000).unwrap();
        assert_eq!(out.status, Status::Fail);
        assert!(out.detail.contains("are not related"), "{}", out.detail);
    }

    #[test]
    fn simple_names_a_congruence() {
        let out = check_assertion(&t410(), &Assertion::Simple(false), 1000).unwrap();
        assert_eq!(out.status, Status::Pass);
        assert!(out.detail.starts_with("nontrivial congruence {"), "{}", out.detail);
    }

    #[test]
    fn unknown_names_are_errors() {
        let a = Assertion::TermEquivalentTo("nope".into());
        assert!(matches!(check_assertion(&t410(), &a, 1000), Err(Error::UnknownName(_))));
        let cert = Certificate { algebra: "T4,10".into(), notes: vec![], assertions: vec![] };
        assert!(check_certificate(&cert, 1000).is_err());
    }

    #[test]
    fn tiny_cap_is_inconclusive() {
        let alg = get("T1N").unwrap().algebra;
        let gens = vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]];
        let a = Assertion::SubpowerExcludes { power: 3, generators: gens, tuple: vec![2, 2, 2] };
        assert_eq!(check_assertion(&alg, &a, 3).unwrap().status, Status::Inconclusive);
    }
}
