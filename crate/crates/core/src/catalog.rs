//! Small minimal Taylor algebras, stored as partial data plus constraints.
//!
//! Each entry is described the way it is usually published: behaviour on some
//! subsets (majority, affine, or a semilattice order), a handful of explicit
//! values, and a symmetry (cyclic, symmetric, commutative). The full table is
//! recovered with [`search::unique_completion`], so a transcription slip shows
//! up as a missing or ambiguous completion instead of a silently wrong table.
//!
//! Domains written with letters use `a→0, b→1, c→2, d→3`.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::groups::AbelianGroup;
use crate::op::{Algebra, Elem, OperationTable, PartialTable};
use crate::congruence::quotient_algebra;
use crate::op::permutations;
use crate::partition::Partition;
use crate::search::{unique_completion, Constraint};
use crate::structure::all_subuniverses;
use crate::subpower::{binary_invariants, clone_membership};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    TwoElement,
    Nonconservative,
    ConservativeCommutative,
    ConservativeOther,
    ConservativeCyclic,
    FourElement,
    AffineExtra,
}

/// Behaviour of an operation on a two-element subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    Majority,
    /// `x + y + z` modulo 2.
    Affine,
    /// Minimum for the order with the given element at the bottom.
    Min(Elem),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub family: Family,
    pub algebra: Algebra,
    /// Whether the published domain uses letters (`a→0, b→1, c→2, d→3`).
    pub letters: bool,
    /// Declared behaviour on subsets, as tables over the relabelled subset.
    pub restrictions: Vec<(Vec<Elem>, OperationTable)>,
    /// The partial table and constraints the algebra was completed from, when
    /// it was not built directly.
    pub partial: Option<(PartialTable, Vec<Constraint>)>,
}

impl CatalogEntry {
    pub fn domain(&self) -> usize {
        self.algebra.domain()
    }

    /// The first operation (every entry has exactly one).
    pub fn op(&self) -> &OperationTable {
        &self.algebra.ops()[0]
    }

    /// Checks every declared restriction against the stored table.
    pub fn check_restrictions(&self) -> Result<()> {
        for (subset, expected) in &self.restrictions {
            let got = self.op().restrict(subset)?;
            if got.values() != expected.values() {
                return Err(Error::NotClosed { op: self.op().name().to_string(), args: subset.clone() });
            }
        }
        Ok(())
    }
}

/// Names of all entries, in catalog order.
pub fn list() -> Vec<String> {
    let mut names: Vec<String> = ["S", "M", "Z2aff", "T1N", "T2N", "T3N", "T4N", "T5N", "T1S", "T2S", "T1P", "T2P"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for i in 1..=15 {
        names.push(["T", &i.to_string(), "C"].concat());
    }
    for i in 1..=18 {
        names.push(["T4,", &i.to_string()].concat());
    }
    names.push("Z4aff".into());
    names.push("Z2xZ2aff".into());
    names
}

/// All entries in catalog order.
pub fn all() -> Result<Vec<CatalogEntry>> {
    list().iter().map(|n| get(n)).collect()
}

/// Looks up an entry. `Z3aff` is accepted as another name for `T5N`.
pub fn get(name: &str) -> Result<CatalogEntry> {
    let entry = match name {
        "S" => binary("S", Family::TwoElement, 2, &[([0, 1], PairKind::Min(0))], &[]),
        "M" => ternary_sym("M", Family::TwoElement, 2, &[([0, 1], PairKind::Majority)], &[], Constraint::Symmetric),
        "Z2aff" => ternary_sym("Z2aff", Family::TwoElement, 2, &[([0, 1], PairKind::Affine)], &[], Constraint::Symmetric),
        "T1N" | "T2N" | "T3N" => {
            let (first, second, v112, v122, v012) = match name {
                "T1N" => (PairKind::Majority, PairKind::Min(0), 1, 0, 0),
                "T2N" => (PairKind::Affine, PairKind::Min(0), 0, 1, 1),
                _ => (PairKind::Majority, PairKind::Affine, 2, 0, 2),
            };
            ternary_sym(
                static_name(name),
                Family::Nonconservative,
                3,
                &[([0, 1], first), ([0, 2], second)],
                &[([1, 1, 2], v112), ([1, 2, 2], v122), ([0, 1, 2], v012)],
                Constraint::Symmetric,
            )
        }
        "T4N" => binary(
            "T4N",
            Family::Nonconservative,
            3,
            &[([0, 1], PairKind::Min(0)), ([0, 2], PairKind::Min(0))],
            &[([1, 2], 0)],
        ),
        "T5N" | "Z3aff" => Ok(group_entry("T5N", Family::Nonconservative, AbelianGroup::cyclic(3), "g")),
        "T1S" | "T2S" => {
            let last = if name == "T1S" { PairKind::Min(2) } else { PairKind::Min(0) };
            binary(
                static_name(name),
                Family::ConservativeCommutative,
                3,
                &[([0, 1], PairKind::Min(0)), ([1, 2], PairKind::Min(1)), ([0, 2], last)],
                &[],
            )
        }
        "T1P" | "T2P" => {
            let kind = if name == "T1P" { PairKind::Majority } else { PairKind::Affine };
            let mut values = Vec::new();
            for t in rainbow_triples(3) {
                let x = t[0];
                values.push((t, x));
            }
            build(
                static_name(name),
                Family::ConservativeOther,
                3,
                3,
                &[([0, 1], kind), ([1, 2], kind), ([0, 2], kind)],
                &values,
                &[Constraint::Idempotent],
                "f",
            )
        }
        _ if name.len() >= 3 && name.starts_with('T') && name.ends_with('C') => {
            let i: usize = name[1..name.len() - 1].parse().map_err(|_| unknown(name))?;
            conservative_cyclic(i).ok_or_else(|| unknown(name))?
        }
        _ if name.starts_with("T4,") => {
            let i: usize = name[3..].parse().map_err(|_| unknown(name))?;
            four_element(i).ok_or_else(|| unknown(name))?
        }
        "Z4aff" => Ok(group_entry("Z4aff", Family::AffineExtra, AbelianGroup::cyclic(4), "p")),
        "Z2xZ2aff" => Ok(group_entry("Z2xZ2aff", Family::AffineExtra, AbelianGroup::klein(), "p")),
        _ => Err(unknown(name)),
    }?;
    Ok(entry)
}

fn unknown(name: &str) -> Error {
    Error::UnknownName(name.to_string())
}

/// Maps a runtime name back to the static string stored in entries.
fn static_name(name: &str) -> &'static str {
    const NAMES: [&str; 9] = ["T1N", "T2N", "T3N", "T4N", "T5N", "T1S", "T2S", "T1P", "T2P"];
    NAMES.iter().find(|&&n| n == name).copied().expect("known name")
}

const CYCLIC_NAMES: [&str; 15] = [
    "T1C", "T2C", "T3C", "T4C", "T5C", "T6C", "T7C", "T8C", "T9C", "T10C", "T11C", "T12C", "T13C",
    "T14C", "T15C",
];

const FOUR_NAMES: [&str; 18] = [
    "T4,1", "T4,2", "T4,3", "T4,4", "T4,5", "T4,6", "T4,7", "T4,8", "T4,9", "T4,10", "T4,11",
    "T4,12", "T4,13", "T4,14", "T4,15", "T4,16", "T4,17", "T4,18",
];

/// The operation a pair kind describes, on the relabelled pair `{0,1}`.
pub fn pair_table(kind: PairKind, pair: [Elem; 2], arity: usize) -> OperationTable {
    let (lo, hi) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
    match kind {
        PairKind::Majority => OperationTable::from_fn("maj", arity, 2, |a| {
            let ones = a.iter().filter(|&&x| x == 1).count();
            (2 * ones > a.len()) as Elem
        }),
        PairKind::Affine => OperationTable::from_fn("aff", arity, 2, |a| a.iter().fold(0, |s, &x| s ^ x)),
        PairKind::Min(bottom) => {
            assert!(bottom == lo || bottom == hi, "bottom must be in the pair");
            let b = (bottom == hi) as Elem;
            OperationTable::from_fn("min", arity, 2, |a| if a.contains(&b) { b } else { 1 - b })
        }
    }
}

fn rainbow_triples(n: Elem) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if x != y && y != z && x != z {
                    out.push(vec![x, y, z]);
                }
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn build(
    name: &'static str,
    family: Family,
    n: usize,
    arity: usize,
    pairs: &[([Elem; 2], PairKind)],
    values: &[(Vec<Elem>, Elem)],
    constraints: &[Constraint],
    op_name: &str,
) -> Result<CatalogEntry> {
    let mut partial = PartialTable::unknown(arity, n);
    for (args, v) in values {
        partial.set(args, *v)?;
    }
    let mut all = constraints.to_vec();
    let mut restrictions = Vec::new();
    for &(pair, kind) in pairs {
        let table = pair_table(kind, pair, arity);
        let subset = vec![pair[0].min(pair[1]), pair[0].max(pair[1])];
        all.push(Constraint::RestrictionEquals(subset.clone(), table.clone()));
        restrictions.push((subset, table));
    }
    let op = unique_completion(&partial, &all)?.renamed(op_name);
    let algebra = Algebra::new(n, vec![op])?.with_label(name);
    Ok(CatalogEntry {
        name,
        family,
        algebra,
        letters: false,
        restrictions,
        partial: Some((partial, all)),
    })
}

fn binary(
    name: &'static str,
    family: Family,
    n: usize,
    pairs: &[([Elem; 2], PairKind)],
    values: &[([Elem; 2], Elem)],
) -> Result<CatalogEntry> {
    let values: Vec<_> = values.iter().map(|(a, v)| (a.to_vec(), *v)).collect();
    build(name, family, n, 2, pairs, &values, &[Constraint::Idempotent, Constraint::Commutative], "t")
}

fn ternary_sym(
    name: &'static str,
    family: Family,
    n: usize,
    pairs: &[([Elem; 2], PairKind)],
    values: &[([Elem; 3], Elem)],
    symmetry: Constraint,
) -> Result<CatalogEntry> {
    let values: Vec<_> = values.iter().map(|(a, v)| (a.to_vec(), *v)).collect();
    build(name, family, n, 3, pairs, &values, &[Constraint::Idempotent, symmetry], "g")
}

fn group_entry(name: &'static str, family: Family, group: AbelianGroup, op_name: &str) -> CatalogEntry {
    CatalogEntry {
        name,
        family,
        algebra: group.affine_algebra(op_name).with_label(name),
        letters: false,
        restrictions: Vec::new(),
        partial: None,
    }
}

fn conservative_cyclic(i: usize) -> Option<Result<CatalogEntry>> {
    use PairKind::{Affine as A, Majority as J};
    const M01: PairKind = PairKind::Min(0);
    const M12: PairKind = PairKind::Min(1);
    const M02: PairKind = PairKind::Min(0);
    // ({0,1}, {1,2}, {0,2}, g(0,1,2), g(0,2,1))
    let rows: [(PairKind, PairKind, PairKind, Elem, Elem); 15] = [
        (M01, M12, J, 0, 0),
        (M01, J, M02, 0, 0),
        (J, M12, M02, 0, 1),
        (M01, J, J, 0, 0),
        (M01, A, M02, 0, 0),
        (M01, M12, A, 0, 0),
        (A, M12, M02, 0, 1),
        (M01, A, A, 2, 2),
        (M01, A, J, 0, 0),
        (M01, J, A, 2, 2),
        (J, A, J, 1, 2),
        (A, J, A, 0, 0),
        (A, A, A, 0, 0),
        (J, J, J, 0, 0),
        (J, J, J, 1, 2),
    ];
    let (p01, p12, p02, r012, r021) = *rows.get(i.checked_sub(1)?)?;
    Some(ternary_sym(
        CYCLIC_NAMES[i - 1],
        Family::ConservativeCyclic,
        3,
        &[([0, 1], p01), ([1, 2], p12), ([0, 2], p02)],
        &[([0, 1, 2], r012), ([0, 2, 1], r021)],
        Constraint::Cyclic,
    ))
}

/// Argument triples for the value rows of the cyclic 4-element tables with a
/// semilattice quotient.
const ROWS_SEMILATTICE: [[Elem; 3]; 16] = [
    [0, 0, 3], [0, 3, 3], [1, 1, 2], [1, 2, 2], [1, 1, 3], [1, 3, 3], [2, 2, 3], [2, 3, 3],
    [0, 1, 2], [0, 2, 1], [0, 1, 3], [0, 3, 1], [0, 2, 3], [0, 3, 2], [1, 2, 3], [1, 3, 2],
];

/// Argument triples for the value rows of the majority- and affine-quotient
/// tables.
const ROWS_QUOTIENT: [[Elem; 3]; 16] = [
    [0, 0, 1], [0, 1, 1], [0, 0, 3], [0, 3, 3], [1, 1, 2], [1, 2, 2], [2, 2, 3], [2, 3, 3],
    [0, 1, 2], [0, 2, 1], [0, 1, 3], [0, 3, 1], [0, 2, 3], [0, 3, 2], [1, 2, 3], [1, 3, 2],
];

/// `None` in a value row means the cell is covered by a declared pair.
fn cyclic4(
    i: usize,
    pairs: &[([Elem; 2], PairKind)],
    rows: &[[Elem; 3]; 16],
    values: [Option<Elem>; 16],
) -> Result<CatalogEntry> {
    let vals: Vec<([Elem; 3], Elem)> =
        rows.iter().zip(values).filter_map(|(r, v)| v.map(|v| (*r, v))).collect();
    ternary_sym(FOUR_NAMES[i - 1], Family::FourElement, 4, pairs, &vals, Constraint::Cyclic)
}

fn four_element(i: usize) -> Option<Result<CatalogEntry>> {
    use PairKind::{Affine as A, Majority as J};
    let min = PairKind::Min(0);
    let all = |v: [Elem; 16]| v.map(Some);
    let entry = match i {
        1..=6 => {
            let (p01, p02) = [(J, min), (A, min), (J, A), (J, A), (J, min), (A, min)][i - 1];
            let values: [[Elem; 16]; 6] = [
                [0, 1, 1, 0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 1],
                [1, 0, 0, 1, 1, 1, 1, 0, 1, 1, 0, 0, 1, 1, 0, 0],
                [0, 1, 2, 0, 1, 1, 0, 2, 2, 2, 1, 1, 2, 2, 2, 2],
                [2, 0, 2, 0, 2, 0, 2, 2, 2, 2, 2, 2, 0, 0, 0, 0],
                [0, 0, 1, 1, 1, 1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 1],
                [0, 0, 1, 1, 1, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1],
            ];
            cyclic4(i, &[([0, 1], p01), ([0, 2], p02)], &ROWS_SEMILATTICE, all(values[i - 1]))
        }
        7 => total_binary(7, &[[0, 2, 1, 0], [2, 1, 0, 2], [1, 0, 2, 1], [0, 2, 1, 3]]),
        8 => {
            let mut v = [None; 16];
            v[6] = Some(0);
            v[7] = Some(1);
            for (k, x) in [0, 0, 1, 1, 0, 0, 1, 1].into_iter().enumerate() {
                v[8 + k] = Some(x);
            }
            cyclic4(
                8,
                &[([0, 2], min), ([1, 3], PairKind::Min(1)), ([0, 1], J), ([0, 3], J), ([1, 2], J)],
                &ROWS_QUOTIENT,
                v,
            )
        }
        9 => {
            let mut v = [None; 16];
            v[0] = Some(2);
            v[1] = Some(3);
            v[6] = Some(0);
            v[7] = Some(1);
            for (k, x) in [0, 0, 1, 1, 2, 2, 3, 3].into_iter().enumerate() {
                v[8 + k] = Some(x);
            }
            cyclic4(9, &[([0, 2], A), ([1, 3], A), ([0, 3], J), ([1, 2], J)], &ROWS_QUOTIENT, v)
        }
        10 => cyclic4(
            10,
            &[([0, 2], A), ([1, 3], A)],
            &ROWS_QUOTIENT,
            all([0, 3, 2, 3, 1, 0, 2, 1, 2, 2, 1, 1, 0, 0, 3, 3]),
        ),
        11 => {
            let mut v = all([3, 2, 3, 2, 2, 3, 0, 0, 3, 3, 2, 2, 3, 3, 2, 2]);
            v[6] = None;
            v[7] = None;
            cyclic4(11, &[([0, 2], J), ([1, 3], J), ([2, 3], A)], &ROWS_QUOTIENT, v)
        }
        12 => cyclic4(
            12,
            &[([0, 2], A), ([1, 3], A)],
            &ROWS_QUOTIENT,
            all([3, 2, 1, 2, 0, 3, 1, 0, 1, 1, 0, 0, 3, 3, 2, 2]),
        ),
        13 => cyclic4(
            13,
            &[([0, 2], A), ([1, 3], A)],
            &ROWS_QUOTIENT,
            all([3, 0, 1, 0, 2, 3, 1, 2, 1, 1, 2, 2, 3, 3, 0, 0]),
        ),
        14 => total_binary(14, &[[0, 2, 1, 0], [2, 1, 3, 2], [1, 3, 2, 1], [0, 2, 1, 3]]),
        15..=18 => ternary_p(i),
        _ => return None,
    };
    Some(entry.map(|mut e| {
        e.letters = i >= 14;
        e
    }))
}

fn total_binary(i: usize, rows: &[[Elem; 4]; 4]) -> Result<CatalogEntry> {
    let values: Vec<([Elem; 2], Elem)> = (0..4)
        .flat_map(|x| (0..4).map(move |y| ([x as Elem, y as Elem], rows[x][y])))
        .collect();
    binary(FOUR_NAMES[i - 1], Family::FourElement, 4, &[], &values)
}

/// Values shared by the four ternary algebras with an affine quotient of size
/// three, over `{a, b, c, d}`.
const P_COMMON: [(&str, char); 40] = [
    ("aab", 'b'), ("aac", 'c'), ("aba", 'c'), ("abc", 'b'), ("abd", 'c'),
    ("aca", 'b'), ("acb", 'c'), ("acd", 'b'), ("adb", 'b'), ("adc", 'c'),
    ("baa", 'b'), ("bab", 'c'), ("bad", 'b'), ("bbc", 'c'), ("bca", 'c'),
    ("bcc", 'b'), ("bcd", 'c'), ("bda", 'b'), ("bdb", 'c'), ("bdd", 'b'),
    ("caa", 'c'), ("cac", 'b'), ("cad", 'c'), ("cba", 'b'), ("cbb", 'c'),
    ("cbd", 'b'), ("ccb", 'b'), ("cda", 'c'), ("cdc", 'b'), ("cdd", 'c'),
    ("dab", 'b'), ("dac", 'c'), ("dba", 'c'), ("dbc", 'b'), ("dbd", 'c'),
    ("dca", 'b'), ("dcb", 'c'), ("dcd", 'b'), ("ddb", 'b'), ("ddc", 'c'),
];

const P_REMAINING: [&str; 14] = [
    "abb", "acc", "bac", "bba", "bbd", "bcb", "bdc", "cab", "cbc", "cca", "ccd", "cdb", "dbb", "dcc",
];

fn letter(c: char) -> Elem {
    c as Elem - b'a'
}

fn letters3(s: &str) -> Vec<Elem> {
    s.chars().map(letter).collect()
}

fn ternary_p(i: usize) -> Result<CatalogEntry> {
    // One column per algebra, in the order of `P_REMAINING`.
    let (kind, remaining) = match i {
        15 => (PairKind::Majority, "dddddddddddddd"),
        16 => (PairKind::Majority, "adaaaddaadddad"),
        17 => (PairKind::Affine, "ddaddddadddddd"),
        _ => (PairKind::Affine, "addaadddaddaad"),
    };
    let mut values: Vec<(Vec<Elem>, Elem)> =
        P_COMMON.iter().map(|(args, v)| (letters3(args), letter(*v))).collect();
    for (args, v) in P_REMAINING.iter().zip(remaining.chars()) {
        values.push((letters3(args), letter(v)));
    }
    build(
        FOUR_NAMES[i - 1],
        Family::FourElement,
        4,
        3,
        &[([0, 3], kind)],
        &values,
        &[Constraint::Idempotent],
        "p",
    )
}

/// The Mal'cev operation of the four-element algebra whose cyclic term is the
/// `T4,13` table: `p(x, a, y)` and `p(x, b, y)` are given group operations and
/// `p` commutes with `σ = (a c)` and `τ = (b d)`.
pub fn t4_13_malcev() -> Algebra {
    // Rows x, columns y, over letters.
    let plus_a = ["abcd", "bcda", "cdab", "dabc"];
    let plus_b = ["badc", "abcd", "dcba", "cdab"];
    let sigma = [2, 1, 0, 3];
    let tau = [0, 3, 2, 1];
    let look = |t: &[&str; 4], x: Elem, y: Elem| letter(t[x as usize].as_bytes()[y as usize] as char);
    let p = OperationTable::from_fn("p", 3, 4, |a| {
        let (x, m, y) = (a[0], a[1], a[2]);
        match m {
            0 => look(&plus_a, x, y),
            1 => look(&plus_b, x, y),
            2 => sigma[look(&plus_a, sigma[x as usize], sigma[y as usize]) as usize],
            _ => tau[look(&plus_b, tau[x as usize], tau[y as usize]) as usize],
        }
    });
    Algebra::new(4, vec![p]).expect("one operation").with_label("T4,13")
}

/// The group tables behind [`t4_13_malcev`], as `(+_a, +_b)` over `0..4`.
pub fn t4_13_groups() -> (Vec<Elem>, Vec<Elem>) {
    let m = t4_13_malcev();
    let p = &m.ops()[0];
    let table = |mid: Elem| (0..16).map(|i| p.at(&[(i / 4) as Elem, mid, (i % 4) as Elem])).collect();
    (table(0), table(1))
}

/// Whether `a` and `b` have the same clone: every basic operation of each is
/// a term operation of the other.
pub fn term_equivalent(a: &Algebra, b: &Algebra, cap: usize) -> Result<bool> {
    if a.domain() != b.domain() {
        return Err(Error::DomainMismatch { expected: a.domain(), found: b.domain() });
    }
    for (x, y) in [(a, b), (b, a)] {
        for op in y.ops() {
            if clone_membership(x, op, cap)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Clone invariants of `alg` that a bijection must carry onto the other
/// algebra's: subuniverses and two-generated subuniverses of the square.
struct Invariants {
    subuniverses: Vec<Vec<Elem>>,
    relations: Vec<Vec<(Elem, Elem)>>,
}

impl Invariants {
    fn of(alg: &Algebra) -> Self {
        let mut relations = binary_invariants(alg);
        relations.sort();
        Invariants { subuniverses: all_subuniverses(alg), relations }
    }

    /// Whether `pi` maps these invariants exactly onto `other`.
    fn mapped_onto(&self, pi: &[Elem], other: &Invariants) -> bool {
        if self.subuniverses.len() != other.subuniverses.len() || self.relations.len() != other.relations.len() {
            return false;
        }
        let subs_ok = self.subuniverses.iter().all(|s| {
            let mut img: Vec<Elem> = s.iter().map(|&x| pi[x as usize]).collect();
            img.sort_unstable();
            other.subuniverses.contains(&img)
        });
        subs_ok
            && self.relations.iter().all(|r| {
                let mut img: Vec<(Elem, Elem)> = r.iter().map(|&(x, y)| (pi[x as usize], pi[y as usize])).collect();
                img.sort_unstable();
                other.relations.binary_search(&img).is_ok()
            })
    }
}

/// The first bijection `pi`, in lexicographic order, such that transporting
/// `b` along `pi` gives an algebra term-equivalent to `a`. Bijections that do
/// not map the clone invariants of `b` onto those of `a` are skipped.
pub fn equivalent_up_to_iso(a: &Algebra, b: &Algebra, cap: usize) -> Result<Option<Vec<Elem>>> {
    if a.domain() != b.domain() {
        return Err(Error::DomainMismatch { expected: a.domain(), found: b.domain() });
    }
    let (ia, ib) = (Invariants::of(a), Invariants::of(b));
    let mut inconclusive = None;
    for pi in permutations(a.domain()) {
        if !ib.mapped_onto(&pi, &ia) {
            continue;
        }
        match term_equivalent(a, &b.transport(&pi), cap) {
            Ok(true) => return Ok(Some(pi)),
            Ok(false) => {}
            Err(e @ Error::Inconclusive { .. }) => inconclusive = Some(e),
            Err(e) => return Err(e),
        }
    }
    match inconclusive {
        Some(e) => Err(e),
        None => Ok(None),
    }
}

/// Checks that `alg` embeds subdirectly into the product of the named
/// catalog entries through the congruences `theta1` and `theta2`: the
/// congruences meet to the identity and each quotient is equivalent, up to
/// isomorphism, to its entry.
pub fn verify_subdirect(
    alg: &Algebra,
    theta1: &Partition,
    theta2: &Partition,
    b1: &str,
    b2: &str,
    cap: usize,
) -> Result<bool> {
    let factors = [get(b1)?, get(b2)?];
    let mut quotients = Vec::new();
    for theta in [theta1, theta2] {
        quotients.push(quotient_algebra(alg, theta)?);
    }
    if !theta1.meet(theta2).is_identity() {
        return Ok(false);
    }
    for (q, f) in quotients.iter().zip(&factors) {
        if q.domain() != f.domain() || equivalent_up_to_iso(&f.algebra, q, cap)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
