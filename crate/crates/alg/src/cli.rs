//! The `alg` command line.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use taylor_core::catalog;
use taylor_core::certify::Status;
use taylor_core::congruence::{all_congruences, principal_congruence};
use taylor_core::search::{count_ops, search_ops};
use taylor_core::structure::{absorbs, all_subuniverses, is_taylor, two_generated, weak_edges, EdgeRecord};
use taylor_core::subpower::{clone_membership, cyclic_terms, free_algebra, generate, rab_analyze, RabKind, Stop};
use taylor_core::term::default_var_names;
use taylor_core::{Algebra, Elem, Term, DEFAULT_CAP};

use crate::constraints::parse_spec;
use crate::error::{read_file, Error, Result};
use crate::suite::{load_dir, shipped_suite, run_suite};
use crate::text::{export_generated, join, parse_algebra, parse_elems, parse_tuples, render_set, render_values, serialize_algebra};

#[derive(Debug, Parser)]
#[command(name = "alg", version, about = "Finite idempotent algebra workbench")]
pub struct Cli {
    /// Closure cap: the most elements any generated set may reach.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Domain, operations and basic properties.
    Info { file: PathBuf },
    /// The subpower of A^m generated by the given tuples.
    Sg {
        file: PathBuf,
        #[arg(long)]
        power: usize,
        /// Tuples such as `0,1;1,0`.
        #[arg(long)]
        gens: String,
    },
    /// The size of Clo_k, or whether an operation belongs to the clone.
    Clone {
        file: PathBuf,
        #[arg(long)]
        arity: usize,
        /// `FILE:OP`, an operation from another algebra file on the same domain.
        #[arg(long)]
        member: Option<String>,
    },
    /// Cyclic term operations of the given arity.
    Cyclic {
        file: PathBuf,
        #[arg(long)]
        arity: usize,
        #[arg(long, conflicts_with = "list")]
        count: bool,
        #[arg(long)]
        list: bool,
    },
    /// Congruences.
    Cong {
        file: PathBuf,
        /// The congruence generated by one pair.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        principal: Option<Vec<Elem>>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        simple: bool,
    },
    /// Whether a subset absorbs the algebra.
    Absorb {
        file: PathBuf,
        /// Elements such as `0,1`.
        #[arg(long)]
        subset: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        arity: u8,
    },
    /// Semilattice, majority and affine edges.
    Edges {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        pair: Option<Vec<Elem>>,
        /// Print the edge graph in DOT syntax.
        #[arg(long)]
        graph: bool,
    },
    /// The edge-connectivity Taylor test.
    Taylor { file: PathBuf },
    /// The relation generated by (a,b) and (b,a) and its loops.
    Rab { file: PathBuf, a: Elem, b: Elem },
    /// Term equivalence of two algebras on the same domain.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        /// Allow a relabelling of the second algebra.
        #[arg(long)]
        iso: bool,
    },
    /// The built-in catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Operation tables satisfying a constraint file.
    Search {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        count: bool,
    },
    /// Checks certificate suites.
    Verify {
        /// The shipped suite; `paper` is the only one.
        #[arg(long, conflicts_with = "dir")]
        suite: Option<String>,
        /// A directory of `.cert` files instead of the shipped suite.
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Treat inconclusive results as failures.
        #[arg(long)]
        strict: bool,
        /// Check certificates one at a time.
        #[arg(long)]
        serial: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    /// Tables and family of one entry.
    Show { name: String },
    /// The entry in algebra file format.
    Export { name: String },
}

/// What a command produced: text for people, JSON for scripts, and the
/// status that decides the exit code.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub json: Value,
    pub status: Status,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, status: Status::Pass }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            match &self.json {
                Value::Array(records) => records.iter().map(|r| r.to_string() + "\n").collect(),
                other => other.to_string() + "\n",
            }
        } else {
            self.text.clone()
        }
    }
}

/// Exit code for a status: 0 pass, 1 fail, 3 inconclusive.
pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Inconclusive => 3,
    }
}

/// Exit code for an error: 2 for bad input, 3 when a cap was reached.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::Core(taylor_core::Error::Inconclusive { .. }) => 3,
        _ => 2,
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let cap = cli.cap;
    match &cli.command {
        Command::Info { file } => info(&load(file)?),
        Command::Sg { file, power, gens } => sg(&load(file)?, *power, gens, cap),
        Command::Clone { file, arity, member } => clone(&load(file)?, *arity, member.as_deref(), cap),
        Command::Cyclic { file, arity, count, list } => cyclic(&load(file)?, *arity, *count, *list, cap),
        Command::Cong { file, principal, all, simple } => cong(&load(file)?, principal.as_deref(), *all, *simple),
        Command::Absorb { file, subset, arity } => absorb(&load(file)?, subset, *arity as usize, cap),
        Command::Edges { file, pair, graph } => edges(&load(file)?, pair.as_deref(), *graph, cap),
        Command::Taylor { file } => taylor(&load(file)?, cap),
        Command::Rab { file, a, b } => rab(&load(file)?, *a, *b, cap),
        Command::Equiv { first, second, iso } => equiv(&load(first)?, &load(second)?, *iso, cap),
        Command::Catalog { action } => catalog_verb(action),
        Command::Search { spec, count } => search(spec, *count),
        Command::Verify { suite, dir, strict, serial } => verify(suite.as_deref(), dir.as_deref(), *strict, !serial, cap),
    }
}

fn load(path: &Path) -> Result<Algebra> {
    parse_algebra(&read_file(path)?).map_err(|e| e.in_file(path))
}

fn check_elem(alg: &Algebra, x: Elem) -> Result<Elem> {
    if (x as usize) < alg.domain() {
        Ok(x)
    } else {
        Err(Error::Usage(format!("element {x} out of range for domain size {}", alg.domain())))
    }
}

fn render_term(alg: &Algebra, t: &Term, arity: usize) -> String {
    let names = default_var_names(arity);
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    t.render(alg, &names)
}

fn info(alg: &Algebra) -> Result<Output> {
    let n = alg.domain();
    let mut text = format!("domain {n}\n");
    let mut ops = Vec::new();
    for op in alg.ops() {
        let mut props = Vec::new();
        if op.is_idempotent() {
            props.push("idempotent");
        }
        if op.arity() >= 2 && op.is_cyclic() {
            props.push("cyclic");
        }
        if op.arity() >= 2 && op.is_symmetric() {
            props.push("symmetric");
        }
        if op.is_conservative() {
            props.push("conservative");
        }
        let _ = writeln!(text, "op {} {} {}", op.name(), op.arity(), props.join(" "));
        ops.push(json!({"name": op.name(), "arity": op.arity(), "properties": props}));
    }
    let subs = all_subuniverses(alg).len();
    let congs = all_congruences(alg).len();
    let gen = two_generated(alg);
    let _ = writeln!(text, "subuniverses {subs}\ncongruences {congs}");
    match gen {
        Some((a, b)) => {
            let _ = writeln!(text, "two-generated by {a},{b}");
        }
        None => text.push_str("not two-generated\n"),
    }
    let json = json!({
        "domain": n, "ops": ops, "subuniverses": subs, "congruences": congs,
        "two_generated": gen.map(|(a, b)| vec![a, b]),
    });
    Ok(Output::ok(text, json))
}

fn sg(alg: &Algebra, power: usize, gens: &str, cap: usize) -> Result<Output> {
    let gens = parse_tuples(1, gens, alg.domain()).map_err(|e| Error::Usage(format!("--gens: {e}")))?;
    if gens.iter().any(|g| g.len() != power) {
        return Err(Error::Usage(format!("every generator needs {power} entries")));
    }
    let set = generate(alg, power, &gens, cap, Stop::Never)?;
    if set.is_truncated() {
        return Err(taylor_core::Error::Inconclusive { cap }.into());
    }
    let tuples: Vec<&[Elem]> = set.iter().collect();
    let json = json!({"exponent": power, "count": set.len(), "tuples": tuples});
    Ok(Output::ok(export_generated(&set), json))
}

fn clone(alg: &Algebra, arity: usize, member: Option<&str>, cap: usize) -> Result<Output> {
    let Some(spec) = member else {
        let set = free_algebra(alg, arity, cap)?;
        if set.is_truncated() {
            return Err(taylor_core::Error::Inconclusive { cap }.into());
        }
        return Ok(Output::ok(format!("{}\n", set.len()), json!({"arity": arity, "size": set.len()})));
    };
    let (path, name) = spec.rsplit_once(':').ok_or_else(|| Error::Usage("--member expects FILE:OP".into()))?;
    let other = load(Path::new(path))?;
    let op = other.op(name).ok_or_else(|| Error::Usage(format!("{path} has no operation {name}")))?;
    if op.arity() != arity || other.domain() != alg.domain() {
        return Err(Error::Usage(format!("{name} is not a {arity}-ary operation on {} elements", alg.domain())));
    }
    Ok(match clone_membership(alg, op, cap)? {
        Some(t) => {
            let term = render_term(alg, &t, arity);
            Output::ok(format!("member=true term={term}\n"), json!({"member": true, "term": term}))
        }
        None => Output::ok("member=false\n".into(), json!({"member": false})),
    })
}

fn cyclic(alg: &Algebra, arity: usize, count: bool, list: bool, cap: usize) -> Result<Output> {
    let found = cyclic_terms(alg, arity, cap, usize::MAX)?;
    if found.lower_bound_only {
        return Err(taylor_core::Error::Inconclusive { cap }.into());
    }
    let n = alg.domain();
    let tables: Vec<String> = found.tables.iter().map(|t| render_values(t.values(), n)).collect();
    let text = if count || !list {
        format!("{}\n", tables.len())
    } else {
        tables.iter().map(|t| t.clone() + "\n").collect()
    };
    Ok(Output::ok(text, json!({"arity": arity, "count": tables.len(), "tables": tables})))
}

fn cong(alg: &Algebra, principal: Option<&[Elem]>, all: bool, simple: bool) -> Result<Output> {
    let mut text = String::new();
    let mut json = serde_json::Map::new();
    if let Some(&[a, b]) = principal {
        let p = principal_congruence(alg, check_elem(alg, a)?, check_elem(alg, b)?)?;
        let _ = writeln!(text, "principal {a} {b} = {p}");
        json.insert("principal".into(), json!(p.to_string()));
    }
    let congs = all_congruences(alg);
    if simple {
        let nontrivial = congs.get(1).filter(|p| !p.is_full());
        match nontrivial {
            Some(p) => {
                let _ = writeln!(text, "simple=false witness={p}");
                json.insert("witness".into(), json!(p.to_string()));
            }
            None => text.push_str("simple=true\n"),
        }
        json.insert("simple".into(), json!(nontrivial.is_none()));
    }
    if all || (principal.is_none() && !simple) {
        let names: Vec<String> = congs.iter().map(|p| p.to_string()).collect();
        for p in &names {
            let _ = writeln!(text, "{p}");
        }
        json.insert("congruences".into(), json!(names));
    }
    Ok(Output::ok(text, Value::Object(json)))
}

fn absorb(alg: &Algebra, subset: &str, arity: usize, cap: usize) -> Result<Output> {
    let subset = parse_elems(1, subset, alg.domain()).map_err(|e| Error::Usage(format!("--subset: {e}")))?;
    let r = absorbs(alg, &subset, arity, cap)?;
    let term = r.witness.as_ref().map(|t| render_term(alg, t, arity));
    let mut text = format!("absorbs={} subuniverse={}", r.holds, r.subuniverse);
    if let Some(t) = &term {
        let _ = write!(text, " term={t}");
    }
    text.push('\n');
    let json = json!({"subset": r.subset, "arity": arity, "absorbs": r.holds, "subuniverse": r.subuniverse, "term": term});
    Ok(Output::ok(text, json))
}

fn edge_json(alg: &Algebra, e: &EdgeRecord) -> Value {
    json!({
        "from": e.from, "to": e.to, "kind": e.kind.as_str(),
        "witness": crate::text::render_blocks(&e.witness_blocks()),
        "term": e.term.as_ref().map(|t| render_term(alg, t, 3)),
    })
}

fn edges(alg: &Algebra, pair: Option<&[Elem]>, graph: bool, cap: usize) -> Result<Output> {
    let n = alg.domain() as Elem;
    let pairs: Vec<(Elem, Elem)> = match pair {
        Some(&[a, b]) => vec![(check_elem(alg, a)?, check_elem(alg, b)?)],
        _ => (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect(),
    };
    let mut records = Vec::new();
    for (a, b) in pairs {
        if a == b {
            return Err(Error::Usage("an edge needs two distinct elements".into()));
        }
        records.extend(weak_edges(alg, a, b, cap)?);
    }
    let text = if graph {
        let mut s = String::from("digraph edges {\n");
        for e in &records {
            let arrow = if e.kind.is_semilattice() { "" } else { ", dir=none" };
            let _ = writeln!(s, "  {} -> {} [label=\"{}\"{arrow}];", e.from, e.to, e.kind);
        }
        s.push_str("}\n");
        s
    } else {
        records.iter().map(|e| e.render(alg) + "\n").collect()
    };
    let json = Value::Array(records.iter().map(|e| edge_json(alg, e)).collect());
    Ok(Output::ok(text, json))
}

fn taylor(alg: &Algebra, cap: usize) -> Result<Output> {
    let r = is_taylor(alg, cap)?;
    let mut text = format!("taylor={}\n", r.taylor);
    for (a, b) in &r.edges {
        let _ = writeln!(text, "edge {a} {b}");
    }
    for s in &r.disconnected {
        let _ = writeln!(text, "disconnected {}", render_set(s));
    }
    let json = json!({"taylor": r.taylor, "edges": r.edges, "disconnected": r.disconnected});
    Ok(Output::ok(text, json))
}

fn rab(alg: &Algebra, a: Elem, b: Elem, cap: usize) -> Result<Output> {
    let r = rab_analyze(alg, check_elem(alg, a)?, check_elem(alg, b)?, cap)?;
    let kind = match r.kind {
        RabKind::AutomorphismGraph => "automorphism-graph",
        RabKind::Linked => "linked",
        RabKind::Other => "other",
    };
    let pairs: Vec<String> = r.relation.iter().map(|t| join(t, ",")).collect();
    let loops: Vec<Value> =
        r.loops.iter().map(|(c, t)| json!({"element": c, "term": render_term(alg, t, 2)})).collect();
    let mut text = format!("size {}\nkind {kind}\npairs {}\n", pairs.len(), pairs.join(";"));
    for (i, p) in r.link_congruences.iter().enumerate() {
        let _ = writeln!(text, "link{} {p}", i + 1);
    }
    for (c, t) in &r.loops {
        let _ = writeln!(text, "loop {c} term={}", render_term(alg, t, 2));
    }
    let json = json!({
        "size": pairs.len(), "kind": kind, "pairs": pairs, "loops": loops,
        "links": r.link_congruences.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    });
    Ok(Output::ok(text, json))
}

fn equiv(first: &Algebra, second: &Algebra, iso: bool, cap: usize) -> Result<Output> {
    if first.domain() != second.domain() {
        return Ok(Output::ok("equivalent=false\n".into(), json!({"equivalent": false})));
    }
    if iso {
        Ok(match catalog::equivalent_up_to_iso(first, second, cap)? {
            Some(pi) => {
                let map = join(&pi, ",");
                Output::ok(format!("equivalent=true relabelling={map}\n"), json!({"equivalent": true, "relabelling": pi}))
            }
            None => Output::ok("equivalent=false\n".into(), json!({"equivalent": false})),
        })
    } else {
        let eq = catalog::term_equivalent(first, second, cap)?;
        Ok(Output::ok(format!("equivalent={eq}\n"), json!({"equivalent": eq})))
    }
}

fn catalog_verb(action: &CatalogAction) -> Result<Output> {
    match action {
        CatalogAction::List => {
            let mut text = String::new();
            let mut rows = Vec::new();
            for name in catalog::list() {
                let e = catalog::get(&name)?;
                let _ = writeln!(text, "{:<9} {} {:?}", name, e.domain(), e.family);
                rows.push(json!({"name": name, "domain": e.domain(), "family": format!("{:?}", e.family)}));
            }
            Ok(Output::ok(text, Value::Array(rows)))
        }
        CatalogAction::Show { name } => {
            let e = catalog::get(name)?;
            let mut text = format!("{name} family={:?} domain={}\n", e.family, e.domain());
            if e.letters {
                text.push_str("letters a=0 b=1 c=2 d=3\n");
            }
            for op in e.algebra.ops() {
                let _ = writeln!(text, "op {} {} {}", op.name(), op.arity(), render_values(op.values(), e.domain()));
            }
            for (s, t) in &e.restrictions {
                let _ = writeln!(text, "restrict {} := {}", join(s, ","), render_values(t.values(), t.domain()));
            }
            let ops: Vec<Value> = e
                .algebra
                .ops()
                .iter()
                .map(|op| json!({"name": op.name(), "arity": op.arity(), "values": op.values()}))
                .collect();
            Ok(Output::ok(text, json!({"name": name, "domain": e.domain(), "letters": e.letters, "ops": ops})))
        }
        CatalogAction::Export { name } => {
            let e = catalog::get(name)?;
            let text = serialize_algebra(&e.algebra.with_label(name));
            Ok(Output::ok(text.clone(), json!({"name": name, "text": text})))
        }
    }
}

fn search(path: &Path, count: bool) -> Result<Output> {
    let spec = parse_spec(&read_file(path)?).map_err(|e| e.in_file(path))?;
    if count {
        let (found, truncated) = count_ops(&spec)?;
        let text = if truncated { format!(">= {found}\n") } else { format!("{found}\n") };
        return Ok(Output::ok(text, json!({"count": found, "truncated": truncated})));
    }
    let res = search_ops(&spec)?;
    let tables: Vec<String> = res.solutions.iter().map(|t| render_values(t.values(), spec.domain)).collect();
    let mut text: String = tables.iter().map(|t| t.clone() + "\n").collect();
    if res.truncated {
        text.push_str("# cap reached, more solutions may exist\n");
    }
    Ok(Output::ok(text, json!({"solutions": tables, "truncated": res.truncated})))
}

fn verify(suite: Option<&str>, dir: Option<&Path>, strict: bool, parallel: bool, cap: usize) -> Result<Output> {
    let entries = match (suite, dir) {
        (_, Some(d)) => load_dir(d)?,
        (None | Some("paper"), None) => shipped_suite()?,
        (Some(other), None) => return Err(Error::Usage(format!("unknown suite `{other}`, expected `paper`"))),
    };
    let report = run_suite(&entries, cap, parallel);
    let records: Vec<Value> = report.records.iter().map(|r| serde_json::to_value(r).expect("records serialize")).collect();
    Ok(Output { text: report.render_text(), json: Value::Array(records), status: report.status(strict) })
}
