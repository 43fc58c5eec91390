//! The algebra file format and the small textual syntaxes shared by the
//! other formats: element lists, tuple lists, partitions and tables.
//!
//! An algebra file is `domain <n>` followed, per operation, by
//! `op <name> <arity>` and exactly `n^arity` values in row-major order. Line
//! breaks between values are free and `#` starts a comment.

use std::fmt::Write;

use taylor_core::op::table_len;
use taylor_core::subpower::GeneratedSet;
use taylor_core::{Algebra, Elem, OperationTable, Partition};

use crate::error::{Error, Result};

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
pub fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

pub fn parse_algebra(text: &str) -> Result<Algebra> {
    let mut tokens = content_lines(text).flat_map(|(no, line)| line.split_whitespace().map(move |t| (no, t)));
    let (line, word) = tokens.next().ok_or_else(|| Error::syntax(1, "empty file, expected `domain <n>`"))?;
    if word != "domain" {
        return Err(Error::syntax(line, format!("expected `domain`, found `{word}`")));
    }
    let (line, n) = tokens.next().ok_or_else(|| Error::syntax(line, "missing domain size"))?;
    let n: usize = parse_number(line, n, "domain size")?;
    if n == 0 || n > taylor_core::op::MAX_DOMAIN {
        return Err(Error::syntax(line, format!("domain size {n} outside 1..={}", taylor_core::op::MAX_DOMAIN)));
    }
    let mut ops = Vec::new();
    let mut tokens = tokens.peekable();
    while let Some((line, word)) = tokens.next() {
        if word != "op" {
            return Err(Error::syntax(line, format!("expected `op`, found `{word}`")));
        }
        let (line, name) = tokens.next().ok_or_else(|| Error::syntax(line, "missing operation name"))?;
        if !is_identifier(name) {
            return Err(Error::syntax(line, format!("invalid operation name `{name}`")));
        }
        let (line, arity) = tokens.next().ok_or_else(|| Error::syntax(line, "missing arity"))?;
        let arity: usize = parse_number(line, arity, "arity")?;
        if arity == 0 || table_len(n, arity) > 1 << 20 {
            return Err(Error::syntax(line, format!("unsupported arity {arity}")));
        }
        let expected = table_len(n, arity);
        let mut values = Vec::with_capacity(expected);
        let mut last = line;
        while values.len() < expected {
            match tokens.peek() {
                Some(&(_, "op")) | None => {
                    return Err(Error::syntax(
                        last,
                        format!("operation {name} has {} values, expected {expected}", values.len()),
                    ))
                }
                Some(&(l, v)) => {
                    tokens.next();
                    last = l;
                    values.push(parse_elem(l, v, n)?);
                }
            }
        }
        if let Some(&(l, v)) = tokens.peek() {
            if v != "op" {
                return Err(Error::syntax(l, format!("operation {name} has more than {expected} values")));
            }
        }
        ops.push(OperationTable::new(name, arity, n, values).map_err(|e| Error::syntax(line, e.to_string()))?);
    }
    Algebra::new(n, ops).map_err(|e| Error::syntax(1, e.to_string()))
}

/// Canonical text: one line per run of `n` values, last argument fastest.
pub fn serialize_algebra(alg: &Algebra) -> String {
    let n = alg.domain();
    let mut out = String::new();
    if let Some(label) = alg.label() {
        let _ = writeln!(out, "# {label}");
    }
    let _ = writeln!(out, "domain {n}");
    for op in alg.ops() {
        let _ = writeln!(out, "op {} {}", op.name(), op.arity());
        for row in op.values().chunks(n) {
            let _ = writeln!(out, "{}", join(row, " "));
        }
    }
    out
}

/// `exponent m`, `count N`, then one tuple per line in element order.
pub fn export_generated(set: &GeneratedSet) -> String {
    let mut out = format!("exponent {}\ncount {}\n", set.exponent(), set.len());
    for t in set.iter() {
        out.push_str(&join(t, " "));
        out.push('\n');
    }
    out
}

pub fn join<T: std::fmt::Display>(items: &[T], sep: &str) -> String {
    let mut s = String::new();
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            s.push_str(sep);
        }
        let _ = write!(s, "{x}");
    }
    s
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_number(line: usize, s: &str, what: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::syntax(line, format!("invalid {what} `{s}`")))
}

pub fn parse_elem(line: usize, s: &str, n: usize) -> Result<Elem> {
    let v = parse_number(line, s, "element")?;
    if v >= n {
        return Err(Error::syntax(line, format!("element {v} out of range for domain size {n}")));
    }
    Ok(v as Elem)
}

/// `0,2,3`.
pub fn parse_elems(line: usize, s: &str, n: usize) -> Result<Vec<Elem>> {
    s.split(',').map(|x| parse_elem(line, x.trim(), n)).collect()
}

/// `0,1;1,0`: tuples separated by `;`, entries by `,`.
pub fn parse_tuples(line: usize, s: &str, n: usize) -> Result<Vec<Vec<Elem>>> {
    let tuples: Vec<Vec<Elem>> = s.split(';').map(|t| parse_elems(line, t.trim(), n)).collect::<Result<_>>()?;
    if let Some(t) = tuples.iter().find(|t| t.len() != tuples[0].len()) {
        return Err(Error::syntax(line, format!("tuple {} has a different length", join(t, ","))));
    }
    Ok(tuples)
}

pub fn parse_partition(line: usize, s: &str, n: usize) -> Result<Partition> {
    let p: Partition = s.parse().map_err(|e: taylor_core::Error| Error::syntax(line, e.to_string()))?;
    if p.domain() != n {
        return Err(Error::syntax(line, format!("partition {s} covers {} elements, expected {n}", p.domain())));
    }
    Ok(p)
}

/// Blocks `{0,2}{1}` over an arbitrary subset of the domain.
pub fn parse_blocks(line: usize, s: &str, n: usize) -> Result<Vec<Vec<Elem>>> {
    let bad = || Error::syntax(line, format!("invalid blocks `{s}`"));
    let inner = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')).ok_or_else(bad)?;
    let mut blocks: Vec<Vec<Elem>> = inner
        .split("}{")
        .map(|b| {
            let mut v = parse_elems(line, b, n)?;
            v.sort_unstable();
            Ok(v)
        })
        .collect::<Result<_>>()?;
    blocks.sort();
    Ok(blocks)
}

/// Table values for arity `k` over `n` elements: either whitespace-separated
/// numbers, or one run of digits when `n ≤ 10`.
pub fn parse_values(line: usize, s: &str, n: usize, k: usize) -> Result<Vec<Elem>> {
    let words: Vec<&str> = s.split_whitespace().collect();
    let values: Vec<Elem> = if words.len() == 1 && n <= 10 && words[0].len() > 1 {
        words[0]
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).filter(|&d| d < n).map(|d| d as Elem))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::syntax(line, format!("invalid table digits `{}`", words[0])))?
    } else {
        words.iter().map(|w| parse_elem(line, w, n)).collect::<Result<_>>()?
    };
    let expected = table_len(n, k);
    if values.len() != expected {
        return Err(Error::syntax(line, format!("table has {} values, expected {expected}", values.len())));
    }
    Ok(values)
}

/// Digit run for small domains, space-separated values otherwise.
pub fn render_values(values: &[Elem], n: usize) -> String {
    if n <= 10 {
        values.iter().map(|v| char::from(b'0' + *v)).collect()
    } else {
        join(values, " ")
    }
}

pub fn render_set(s: &[Elem]) -> String {
    format!("{{{}}}", join(s, ","))
}

pub fn render_blocks(blocks: &[Vec<Elem>]) -> String {
    blocks.iter().map(|b| render_set(b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const T47: &str = "# a commutative binary operation\ndomain 4\nop t 2\n0 2 1 0\n2 1 0 2 # row 1\n1 0 2 1\n0 2 1 3\n";

    #[test]
    fn parses_and_serializes() {
        let a = parse_algebra(T47).unwrap();
        assert_eq!(a.ops()[0].at(&[0, 1]), 2);
        let text = serialize_algebra(&a);
        assert_eq!(text, "domain 4\nop t 2\n0 2 1 0\n2 1 0 2\n1 0 2 1\n0 2 1 3\n");
        assert_eq!(parse_algebra(&text).unwrap(), a);
    }

    #[test]
    fn line_breaks_are_free() {
        let a = parse_algebra("domain 2\nop f 2 0\n0 0\n1\n").unwrap();
        assert_eq!(a.ops()[0].values(), &[0, 0, 0, 1]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let short = "domain 4\nop g 3\n".to_string() + &"0 ".repeat(63) + "\n";
        let err = parse_algebra(&short).unwrap_err().to_string();
        assert!(err.starts_with("line 3:") && err.contains("63 values, expected 64"), "{err}");
        let err = parse_algebra("domain 2\nop f 1\n0 2\n").unwrap_err().to_string();
        assert_eq!(err, "line 3: element 2 out of range for domain size 2");
        let err = parse_algebra("domain 2\nop f 1\n0 1 1\n").unwrap_err().to_string();
        assert!(err.starts_with("line 3:"), "{err}");
        let err = parse_algebra("domain 2\nfoo\n").unwrap_err().to_string();
        assert_eq!(err, "line 2: expected `op`, found `foo`");
        assert!(parse_algebra("domain 2\nop f 1\n0 1\nop f 1\n0 1\n").is_err());
    }

    #[test]
    fn small_syntaxes() {
        assert_eq!(parse_tuples(1, "0,1;1,0", 2).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert!(parse_tuples(1, "0,1;1", 2).is_err());
        assert_eq!(parse_blocks(1, "{2}{0,1}", 3).unwrap(), vec![vec![0, 1], vec![2]]);
        assert_eq!(parse_values(1, "0110", 2, 2).unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(parse_values(1, "0 1 1 0", 2, 2).unwrap(), vec![0, 1, 1, 0]);
        assert!(parse_values(1, "012", 2, 2).is_err());
        assert_eq!(render_values(&[0, 1, 1, 0], 2), "0110");
    }
}
