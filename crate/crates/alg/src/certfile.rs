//! The certificate file format.
//!
//! ```text
//! algebra T4,10
//! note the pair {0,2}{1,3} splits into two majority blocks
//! congruence {0,2}{1,3}
//! quotient {0,2}{1,3} ~ M
//! class {0,2}{1,3} 0 ~ S
//! absorbs 0,1 arity 2 yes
//! edge 0 1 majority witness {0}{1}
//! contains 2 gens 0,1;1,0 tuple 0,0
//! excludes 2 gens 0,1;1,0 tuple 2,2
//! clone-contains 2 := 0001
//! clone-lacks 3 := 00010111
//! unique 3
//!   idempotent
//!   cyclic
//!   expect 000...
//! end
//! two-generated 0 1
//! simple no
//! term-equivalent Z4aff
//! subdirect {0,1}{2,3} {0,2}{1,3} M Z2aff
//! cyclic-terms 3 = 1
//! taylor yes
//! ```
//!
//! `algebra` comes first; the rest may appear in any order and are checked
//! in file order. A `unique` block holds constraint lines for the algebra's
//! domain and closes with `expect <table>` and `end`.

use std::fmt::Write;

use taylor_core::catalog;
use taylor_core::certify::{Assertion, Certificate, Count};
use taylor_core::structure::EdgeKind;
use taylor_core::Elem;

use crate::constraints::{parse_table, render_constraint, split_word, ConstraintBuilder};
use crate::error::{Error, Result};
use crate::text::{
    content_lines, join, parse_blocks, parse_elem, parse_elems, parse_number, parse_partition, parse_tuples,
    render_blocks, render_values,
};

pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let mut lines = content_lines(text);
    let (line, first) = lines.next().ok_or_else(|| Error::syntax(1, "empty certificate"))?;
    let algebra = match split_word(first) {
        ("algebra", name) if !name.is_empty() => name.to_string(),
        (w, _) => return Err(Error::syntax(line, format!("expected `algebra <name>`, found `{w}`"))),
    };
    let n = catalog::get(&algebra).map_err(|e| Error::syntax(line, e.to_string()))?.domain();
    let mut notes = Vec::new();
    let mut assertions = Vec::new();
    while let Some((line, text)) = lines.next() {
        let (word, rest) = split_word(text);
        let a = match word {
            "note" => {
                notes.push(rest.to_string());
                continue;
            }
            "congruence" => Assertion::IsCongruence(parse_partition(line, rest, n)?),
            "quotient" => {
                let (p, name) = split_on(line, rest, '~')?;
                Assertion::QuotientEquivalentTo(parse_partition(line, p, n)?, known_name(line, name)?)
            }
            "class" => {
                let (head, name) = split_on(line, rest, '~')?;
                let (p, block) = head.rsplit_once(char::is_whitespace).ok_or_else(|| bad(line, text))?;
                let p = parse_partition(line, p.trim(), n)?;
                let block = parse_number(line, block, "block index")?;
                if block >= p.num_blocks() {
                    return Err(Error::syntax(line, format!("{p} has no block {block}")));
                }
                Assertion::ClassEquivalentTo(p, block, known_name(line, name)?)
            }
            "absorbs" => match rest.split_whitespace().collect::<Vec<_>>().as_slice() {
                [subset, "arity", k, yes] => Assertion::Absorbs {
                    subset: parse_elems(line, subset, n)?,
                    arity: parse_number(line, k, "arity")?,
                    expected: parse_yes(line, yes)?,
                },
                _ => return Err(bad(line, text)),
            },
            "edge" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                let (pair, kind, witness) = match words.as_slice() {
                    [a, b, kind] => ((a, b), kind, None),
                    [a, b, kind, "witness", w] => ((a, b), kind, Some(parse_blocks(line, w, n)?)),
                    _ => return Err(bad(line, text)),
                };
                let kind =
                    EdgeKind::from_name(kind).ok_or_else(|| Error::syntax(line, format!("unknown edge kind `{kind}`")))?;
                Assertion::EdgeIs { pair: (parse_elem(line, pair.0, n)?, parse_elem(line, pair.1, n)?), kind, witness }
            }
            "contains" | "excludes" => {
                let (power, generators, tuple) = parse_subpower(line, rest, n)?;
                if word == "contains" {
                    Assertion::SubpowerContains { power, generators, tuple }
                } else {
                    Assertion::SubpowerExcludes { power, generators, tuple }
                }
            }
            "clone-contains" | "clone-lacks" => {
                let (k, table) = split_on_str(line, rest, ":=")?;
                let k = parse_number(line, k, "arity")?;
                let op = parse_table(line, table, n, k)?;
                if word == "clone-contains" {
                    Assertion::CloneContainsOp(op)
                } else {
                    Assertion::CloneLacksOp(op)
                }
            }
            "unique" => {
                let k = parse_number(line, rest, "arity")?;
                let mut builder = ConstraintBuilder::new(n, k);
                let mut expected = None;
                loop {
                    let (l, t) = lines.next().ok_or_else(|| Error::syntax(line, "`unique` block without `end`"))?;
                    match split_word(t) {
                        ("end", "") => break,
                        ("expect", table) => expected = Some(parse_table(l, table, n, k)?),
                        _ if expected.is_some() => return Err(Error::syntax(l, "expected `end` after `expect`")),
                        _ => builder.line(l, t)?,
                    }
                }
                let expected = expected.ok_or_else(|| Error::syntax(line, "`unique` block without `expect`"))?;
                Assertion::UniqueOpUnderConstraints(builder.finish(), expected)
            }
            "two-generated" => match rest.split_whitespace().collect::<Vec<_>>().as_slice() {
                [] => Assertion::TwoGenerated(None),
                [a, b] => Assertion::TwoGenerated(Some((parse_elem(line, a, n)?, parse_elem(line, b, n)?))),
                _ => return Err(bad(line, text)),
            },
            "simple" => Assertion::Simple(parse_yes(line, rest)?),
            "term-equivalent" => Assertion::TermEquivalentTo(known_name(line, rest)?),
            "subdirect" => match rest.split_whitespace().collect::<Vec<_>>().as_slice() {
                [p1, p2, b1, b2] => Assertion::SubdirectInto(
                    parse_partition(line, p1, n)?,
                    parse_partition(line, p2, n)?,
                    known_name(line, b1)?,
                    known_name(line, b2)?,
                ),
                _ => return Err(bad(line, text)),
            },
            "cyclic-terms" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                match words.as_slice() {
                    [k, rel @ ("=" | ">="), c] => {
                        let k = parse_number(line, k, "arity")?;
                        let c = parse_number(line, c, "count")?;
                        let count = if *rel == "=" { Count::Exactly(c) } else { Count::AtLeast(c) };
                        Assertion::CyclicTermCount(k, count)
                    }
                    _ => return Err(bad(line, text)),
                }
            }
            "taylor" => Assertion::TaylorViaEdges(parse_yes(line, rest)?),
            "end" | "expect" => return Err(Error::syntax(line, format!("`{word}` outside a `unique` block"))),
            "algebra" => return Err(Error::syntax(line, "a certificate names one algebra")),
            other => return Err(Error::syntax(line, format!("unknown assertion `{other}`"))),
        };
        assertions.push(a);
    }
    if assertions.is_empty() {
        return Err(Error::syntax(1, "certificate without assertions"));
    }
    Ok(Certificate { algebra, notes, assertions })
}

/// Text that parses back to `cert`.
pub fn render_certificate(cert: &Certificate) -> String {
    let mut out = format!("algebra {}\n", cert.algebra);
    for note in &cert.notes {
        let _ = writeln!(out, "note {note}");
    }
    for a in &cert.assertions {
        out.push_str(&render_assertion(a));
        out.push('\n');
    }
    out
}

/// One assertion in file syntax; `unique` blocks span several lines.
pub fn render_assertion(a: &Assertion) -> String {
    let tuples = |ts: &[Vec<Elem>]| ts.iter().map(|t| join(t, ",")).collect::<Vec<_>>().join(";");
    let yes = |b: bool| if b { "yes" } else { "no" };
    match a {
        Assertion::IsCongruence(p) => format!("congruence {p}"),
        Assertion::QuotientEquivalentTo(p, name) => format!("quotient {p} ~ {name}"),
        Assertion::ClassEquivalentTo(p, i, name) => format!("class {p} {i} ~ {name}"),
        Assertion::Absorbs { subset, arity, expected } => {
            format!("absorbs {} arity {arity} {}", join(subset, ","), yes(*expected))
        }
        Assertion::EdgeIs { pair, kind, witness } => {
            let mut s = format!("edge {} {} {kind}", pair.0, pair.1);
            if let Some(w) = witness {
                let _ = write!(s, " witness {}", render_blocks(w));
            }
            s
        }
        Assertion::SubpowerContains { power, generators, tuple } => {
            format!("contains {power} gens {} tuple {}", tuples(generators), join(tuple, ","))
        }
        Assertion::SubpowerExcludes { power, generators, tuple } => {
            format!("excludes {power} gens {} tuple {}", tuples(generators), join(tuple, ","))
        }
        Assertion::CloneContainsOp(op) => {
            format!("clone-contains {} := {}", op.arity(), render_values(op.values(), op.domain()))
        }
        Assertion::CloneLacksOp(op) => format!("clone-lacks {} := {}", op.arity(), render_values(op.values(), op.domain())),
        Assertion::UniqueOpUnderConstraints(spec, expected) => {
            let mut s = format!("unique {}\n", spec.arity);
            for c in &spec.constraints {
                for line in render_constraint(c) {
                    let _ = writeln!(s, "  {line}");
                }
            }
            let _ = write!(s, "  expect {}\nend", render_values(expected.values(), expected.domain()));
            s
        }
        Assertion::TwoGenerated(None) => "two-generated".to_string(),
        Assertion::TwoGenerated(Some((a, b))) => format!("two-generated {a} {b}"),
        Assertion::Simple(b) => format!("simple {}", yes(*b)),
        Assertion::TermEquivalentTo(name) => format!("term-equivalent {name}"),
        Assertion::SubdirectInto(p1, p2, b1, b2) => format!("subdirect {p1} {p2} {b1} {b2}"),
        Assertion::CyclicTermCount(k, Count::Exactly(c)) => format!("cyclic-terms {k} = {c}"),
        Assertion::CyclicTermCount(k, Count::AtLeast(c)) => format!("cyclic-terms {k} >= {c}"),
        Assertion::TaylorViaEdges(b) => format!("taylor {}", yes(*b)),
    }
}

/// A short stable identifier for an assertion, used in reports.
pub fn assertion_id(a: &Assertion) -> String {
    let text = render_assertion(a);
    let first = text.lines().next().unwrap_or("");
    match a {
        Assertion::UniqueOpUnderConstraints(..) => format!("{first} (unique table)"),
        _ => first.to_string(),
    }
}

fn bad(line: usize, text: &str) -> Error {
    Error::syntax(line, format!("malformed assertion `{text}`"))
}

fn split_on(line: usize, text: &str, sep: char) -> Result<(&str, &str)> {
    text.split_once(sep)
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| Error::syntax(line, format!("expected `{sep}`")))
}

fn split_on_str<'a>(line: usize, text: &'a str, sep: &str) -> Result<(&'a str, &'a str)> {
    text.split_once(sep)
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| Error::syntax(line, format!("expected `{sep}`")))
}

fn parse_yes(line: usize, s: &str) -> Result<bool> {
    match s {
        "yes" => Ok(true),
        "no" => Ok(false),
        _ => Err(Error::syntax(line, format!("expected `yes` or `no`, found `{s}`"))),
    }
}

fn known_name(line: usize, name: &str) -> Result<String> {
    catalog::get(name).map_err(|e| Error::syntax(line, e.to_string()))?;
    Ok(name.to_string())
}

/// `m gens T;T tuple T`.
fn parse_subpower(line: usize, text: &str, n: usize) -> Result<(usize, Vec<Vec<Elem>>, Vec<Elem>)> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let [m, "gens", gens, "tuple", tuple] = words.as_slice() else {
        return Err(bad(line, text));
    };
    let m = parse_number(line, m, "power")?;
    let generators = parse_tuples(line, gens, n)?;
    let tuple = parse_elems(line, tuple, n)?;
    if generators.iter().any(|g| g.len() != m) || tuple.len() != m {
        return Err(Error::syntax(line, format!("tuples must have length {m}")));
    }
    Ok((m, generators, tuple))
}
