//! The constraint file format for table searches.
//!
//! ```text
//! domain 4
//! arity 3
//! idempotent
//! cyclic
//! partition {0,2}{1,3}
//! quotient {0,2}{1,3} := maj
//! restrict 0,1,2 := 000001010011...
//! value 0,1,3 := 2
//! perm (0 2)(1 3)
//! relation 0,0;0,1;1,0
//! ```
//!
//! `symmetric` and `commutative` are also accepted, and `cap N` bounds the
//! number of solutions collected. Tables are written as digits, as
//! space-separated values, or on two-element targets as `maj`, `aff`, `min`
//! or `max`. Unknown directives are rejected.

use taylor_core::op::{decode_index, normalize_subset, table_len};
use taylor_core::search::{Constraint, SearchSpec};
use taylor_core::{Elem, OperationTable, PartialTable};

use crate::error::{Error, Result};
use crate::text::{
    content_lines, join, parse_elem, parse_elems, parse_number, parse_partition, parse_tuples, parse_values,
    render_values,
};

/// Accumulates constraints line by line for a fixed domain and arity.
#[derive(Debug)]
pub struct ConstraintBuilder {
    domain: usize,
    arity: usize,
    constraints: Vec<Constraint>,
    values: Option<PartialTable>,
}

impl ConstraintBuilder {
    pub fn new(domain: usize, arity: usize) -> Self {
        ConstraintBuilder { domain, arity, constraints: Vec::new(), values: None }
    }

    /// Parses one constraint directive.
    pub fn line(&mut self, line: usize, text: &str) -> Result<()> {
        let (n, k) = (self.domain, self.arity);
        let (word, rest) = split_word(text);
        let c = match word {
            "idempotent" | "cyclic" | "symmetric" | "commutative" => {
                if !rest.is_empty() {
                    return Err(Error::syntax(line, format!("`{word}` takes no arguments")));
                }
                match word {
                    "idempotent" => Constraint::Idempotent,
                    "cyclic" => Constraint::Cyclic,
                    "symmetric" => Constraint::Symmetric,
                    _ => Constraint::Commutative,
                }
            }
            "partition" => Constraint::InvariantPartition(parse_partition(line, rest, n)?),
            "quotient" => {
                let (p, table) = split_assign(line, rest)?;
                let p = parse_partition(line, p, n)?;
                let table = parse_table(line, table, p.num_blocks(), k)?;
                Constraint::QuotientEquals(p, table)
            }
            "restrict" => {
                let (subset, table) = split_assign(line, rest)?;
                let subset = parse_elems(line, subset, n)?;
                let sorted = normalize_subset(&subset, n).map_err(|e| Error::syntax(line, e.to_string()))?;
                let table = parse_table(line, table, sorted.len(), k)?;
                Constraint::RestrictionEquals(sorted, table)
            }
            "value" => {
                let (args, v) = split_assign(line, rest)?;
                let args = parse_elems(line, args, n)?;
                if args.len() != k {
                    return Err(Error::syntax(line, format!("expected {k} arguments, found {}", args.len())));
                }
                let v = parse_elem(line, v, n)?;
                let partial = self.values.get_or_insert_with(|| PartialTable::unknown(k, n));
                if partial.get(&args).is_some_and(|w| w != v) {
                    return Err(Error::syntax(line, "conflicting value for the same arguments"));
                }
                partial.set(&args, v)?;
                return Ok(());
            }
            "perm" => Constraint::CommutesWithPermutation(parse_cycles(line, rest, n)?),
            "relation" => {
                let rel = parse_tuples(line, rest, n)?;
                Constraint::PreservesRelation(rel)
            }
            "" => return Err(Error::syntax(line, "empty directive")),
            other => return Err(Error::syntax(line, format!("unknown directive `{other}`"))),
        };
        self.constraints.push(c);
        Ok(())
    }

    pub fn finish(mut self) -> SearchSpec {
        if let Some(p) = self.values.take() {
            self.constraints.push(Constraint::PartialValues(p));
        }
        SearchSpec::new(self.domain, self.arity, self.constraints)
    }
}

/// Parses a whole constraint file.
pub fn parse_spec(text: &str) -> Result<SearchSpec> {
    let mut lines = content_lines(text);
    let mut header = |key: &str| -> Result<usize> {
        let (line, text) = lines.next().ok_or_else(|| Error::syntax(1, format!("missing `{key}` line")))?;
        match split_word(text) {
            (w, v) if w == key => parse_number(line, v, key),
            (w, _) => Err(Error::syntax(line, format!("expected `{key}`, found `{w}`"))),
        }
    };
    let domain = header("domain")?;
    let arity = header("arity")?;
    if domain == 0 || domain > 5 || arity == 0 || arity > 4 {
        return Err(Error::Usage(format!("searches need domain 1..=5 and arity 1..=4, got {domain} and {arity}")));
    }
    let mut builder = ConstraintBuilder::new(domain, arity);
    let mut cap = None;
    for (line, text) in lines {
        match split_word(text) {
            ("cap", v) => cap = Some(parse_number(line, v, "cap")?),
            _ => builder.line(line, text)?,
        }
    }
    let spec = builder.finish();
    Ok(match cap {
        Some(c) => spec.with_cap(c),
        None => spec,
    })
}

/// Constraint lines that parse back to `c`.
pub fn render_constraint(c: &Constraint) -> Vec<String> {
    let table = |t: &OperationTable| render_values(t.values(), t.domain());
    match c {
        Constraint::Idempotent => vec!["idempotent".into()],
        Constraint::Cyclic => vec!["cyclic".into()],
        Constraint::Symmetric => vec!["symmetric".into()],
        Constraint::Commutative => vec!["commutative".into()],
        Constraint::PreservesRelation(rel) => {
            let tuples: Vec<String> = rel.iter().map(|t| join(t, ",")).collect();
            vec![format!("relation {}", tuples.join(";"))]
        }
        Constraint::InvariantPartition(p) => vec![format!("partition {p}")],
        Constraint::QuotientEquals(p, t) => vec![format!("quotient {p} := {}", table(t))],
        Constraint::RestrictionEquals(s, t) => vec![format!("restrict {} := {}", join(s, ","), table(t))],
        Constraint::PartialValues(p) => {
            let mut args = vec![0; p.arity()];
            p.values()
                .iter()
                .enumerate()
                .filter_map(|(i, v)| {
                    let v = (*v)?;
                    decode_index(i, p.domain(), &mut args);
                    Some(format!("value {} := {v}", join(&args, ",")))
                })
                .collect()
        }
        Constraint::CommutesWithPermutation(pi) => {
            let mut seen = vec![false; pi.len()];
            let mut out = String::new();
            for start in 0..pi.len() {
                if seen[start] || pi[start] as usize == start {
                    continue;
                }
                let mut cycle = Vec::new();
                let mut x = start;
                while !seen[x] {
                    seen[x] = true;
                    cycle.push(x);
                    x = pi[x] as usize;
                }
                out.push_str(&format!("({})", join(&cycle, " ")));
            }
            vec![format!("perm {out}").trim_end().to_string()]
        }
        Constraint::AgreesOnTuples(pairs) => {
            pairs.iter().map(|(args, v)| format!("value {} := {v}", join(args, ","))).collect()
        }
    }
}

pub fn split_word(text: &str) -> (&str, &str) {
    let text = text.trim();
    match text.split_once(char::is_whitespace) {
        Some((w, rest)) => (w, rest.trim()),
        None => (text, ""),
    }
}

fn split_assign(line: usize, text: &str) -> Result<(&str, &str)> {
    text.split_once(":=")
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| Error::syntax(line, "expected `:=`"))
}

/// A table of arity `k` over `m` elements; named tables need `m = 2`.
pub fn parse_table(line: usize, text: &str, m: usize, k: usize) -> Result<OperationTable> {
    let named = |f: fn(&[Elem]) -> Elem| -> Result<OperationTable> {
        if m != 2 {
            return Err(Error::syntax(line, format!("`{text}` needs a two-element target, found {m}")));
        }
        Ok(OperationTable::from_fn("f", k, 2, f))
    };
    match text {
        "maj" | "aff" if k != 3 => Err(Error::syntax(line, format!("`{text}` is ternary, arity is {k}"))),
        "maj" => named(|a| (a[0] + a[1] + a[2] >= 2) as Elem),
        "aff" => named(|a| (a[0] + a[1] + a[2]) % 2),
        "min" => named(|a| *a.iter().min().unwrap()),
        "max" => named(|a| *a.iter().max().unwrap()),
        _ => {
            let values = parse_values(line, text, m, k)?;
            debug_assert_eq!(values.len(), table_len(m, k));
            OperationTable::new("f", k, m, values).map_err(|e| Error::syntax(line, e.to_string()))
        }
    }
}

/// `(0 2)(1 3)` as an image list; unlisted elements are fixed.
fn parse_cycles(line: usize, text: &str, n: usize) -> Result<Vec<Elem>> {
    let bad = || Error::syntax(line, format!("invalid cycles `{text}`"));
    let mut image: Vec<Elem> = (0..n as Elem).collect();
    let mut moved = vec![false; n];
    let mut rest = text.trim();
    while !rest.is_empty() {
        let inner = rest.strip_prefix('(').ok_or_else(bad)?;
        let close = inner.find(')').ok_or_else(bad)?;
        let cycle: Vec<Elem> =
            inner[..close].split_whitespace().map(|x| parse_elem(line, x, n)).collect::<Result<_>>()?;
        for (i, &x) in cycle.iter().enumerate() {
            if std::mem::replace(&mut moved[x as usize], true) {
                return Err(Error::syntax(line, format!("element {x} appears in two cycles")));
            }
            image[x as usize] = cycle[(i + 1) % cycle.len()];
        }
        rest = inner[close + 1..].trim_start();
    }
    Ok(image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use taylor_core::search::count_ops;

    #[test]
    fn majority_is_unique() {
        let spec = parse_spec("domain 2\narity 3\nidempotent\ncyclic\nvalue 0,0,1 := 0\nvalue 0,1,1 := 1\n").unwrap();
        assert_eq!(count_ops(&spec).unwrap(), (1, false));
    }

    #[test]
    fn parses_every_directive() {
        let text = "# comment\ndomain 4\narity 3\ncap 5\nidempotent\ncyclic\nsymmetric\ncommutative\n\
                    partition {0,2}{1,3}\nquotient {0,2}{1,3} := maj\nrestrict 2,0 := min\n\
                    value 0,1,3 := 2\nperm (0 2)(1 3)\nrelation 0,0;1,1\n";
        let spec = parse_spec(text).unwrap();
        assert_eq!(spec.cap, 5);
        assert_eq!(spec.constraints.len(), 10);
        assert_eq!(spec.constraints[7], Constraint::CommutesWithPermutation(vec![2, 3, 0, 1]));
        match &spec.constraints[6] {
            Constraint::RestrictionEquals(s, t) => {
                assert_eq!(s, &vec![0, 2]);
                assert_eq!(t.values(), &[0, 0, 0, 0, 0, 0, 0, 1]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rendering_round_trips() {
        let text = "domain 4\narity 3\nidempotent\ncyclic\npartition {0,2}{1,3}\nquotient {0,2}{1,3} := maj\n\
                    restrict 0,2 := min\nperm (0 2)(1 3)\nrelation 0,0;1,1\nvalue 0,1,3 := 2\nvalue 0,3,1 := 2\n";
        let spec = parse_spec(text).unwrap();
        let mut again = String::from("domain 4\narity 3\n");
        for c in &spec.constraints {
            for line in render_constraint(c) {
                again.push_str(&line);
                again.push('\n');
            }
        }
        assert_eq!(again, text.replace(":= maj", ":= 00010111").replace(":= min", ":= 00000001"));
        assert_eq!(parse_spec(&again).unwrap(), spec);
    }

    #[test]
    fn rejects_bad_input() {
        let err = parse_spec("domain 3\narity 2\nfrobnicate\n").unwrap_err().to_string();
        assert_eq!(err, "line 3: unknown directive `frobnicate`");
        assert!(parse_spec("domain 3\narity 2\nrestrict 0,1 := maj\n").is_err());
        assert!(parse_spec("domain 3\narity 2\nvalue 0,1 := 1\nvalue 0,1 := 2\n").is_err());
        assert!(parse_spec("domain 3\narity 2\nperm (0 1)(1 2)\n").is_err());
        assert!(parse_spec("arity 2\ndomain 3\n").is_err());
        assert!(parse_spec("domain 9\narity 2\n").is_err());
    }
}
