//! Gödel numbering of formulas, and a structural set-coding of syntax.
//!
//! The numbering is the bijection with α-canonical formulas ordered by (AST
//! size, then canonical serialization order). Size buckets are materialized
//! lazily and cached; the enumeration is meant for the small formulas that
//! appear as scheme instances, so a hard size cap guards against attempts to
//! rank composite formulas whose buckets would be astronomically large. For
//! those, [`formula_code`] provides the set-level coding of syntax that the
//! scheme oracles consume: a hereditarily finite set built from the AST,
//! bijective with canonical formulas of any size.

use std::fmt;
use std::sync::{LazyLock, Mutex};

use crate::setcode::HfSet;

use super::{Formula, Var};

/// Index of a formula in the fixed enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GodelIndex(pub u64);

impl fmt::Display for GodelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Largest AST size the enumeration will materialize. Buckets grow
/// combinatorially; past this point ranking is no longer desk-scale.
const MAX_ENUM_SIZE: usize = 6;

#[derive(Default)]
struct Cache {
    /// `buckets[s - 1]` holds all canonical formulas of size `s`, sorted.
    buckets: Vec<Vec<Formula>>,
}

static CACHE: LazyLock<Mutex<Cache>> = LazyLock::new(|| Mutex::new(Cache::default()));

/// Gödel index of a formula (of its α-canonical form).
pub fn godel(f: &Formula) -> GodelIndex {
    let canon = f.canonicalize();
    let size = canon.size();
    assert!(
        size <= MAX_ENUM_SIZE,
        "formula of size {size} exceeds the enumeration cap {MAX_ENUM_SIZE}; \
         use formula_code for set-level passing of large formulas"
    );
    let mut cache = CACHE.lock().unwrap();
    let mut index = 0u64;
    for s in 1..size {
        index += bucket(&mut cache, s).len() as u64;
    }
    let b = bucket(&mut cache, size);
    let rank = b
        .binary_search(&canon)
        .unwrap_or_else(|_| panic!("canonical formula missing from its bucket: {canon}"));
    GodelIndex(index + rank as u64)
}

/// The formula with the given index; inverse of [`godel`] up to
/// α-equivalence.
pub fn ungodel(i: GodelIndex) -> Formula {
    let mut cache = CACHE.lock().unwrap();
    let mut rest = i.0;
    for s in 1..=MAX_ENUM_SIZE {
        let b = bucket(&mut cache, s);
        if (rest as usize) < b.len() {
            return b[rest as usize].clone();
        }
        rest -= b.len() as u64;
    }
    panic!("index {i} lies beyond the enumeration cap");
}

/// Number of canonical formulas of a given size.
#[cfg(test)]
pub(crate) fn bucket_len(size: usize) -> usize {
    let mut cache = CACHE.lock().unwrap();
    bucket(&mut cache, size).len()
}

fn bucket<'a>(cache: &'a mut Cache, size: usize) -> &'a Vec<Formula> {
    while cache.buckets.len() < size {
        let s = cache.buckets.len() + 1;
        let mut formulas: Vec<Formula> = generate(
            s,
            &Ctx {
                next: 0,
                frees: Vec::new(),
                bounds: Vec::new(),
            },
        )
        .into_iter()
        .map(|(f, _)| f)
        .collect();
        formulas.sort();
        cache.buckets.push(formulas);
    }
    &cache.buckets[size - 1]
}

/// Left-to-right generation context: variables introduced so far. Canonical
/// formulas use index k for the k-th distinct variable in walk order, so at
/// any occurrence the choices are the known frees, the in-scope bounds, or
/// one fresh index.
#[derive(Clone)]
struct Ctx {
    next: u32,
    frees: Vec<u32>,
    bounds: Vec<u32>,
}

impl Ctx {
    fn occurrence_choices(&self) -> Vec<(u32, Ctx)> {
        let mut out = Vec::new();
        for &v in self.frees.iter().chain(self.bounds.iter()) {
            out.push((v, self.clone()));
        }
        let mut fresh = self.clone();
        let v = fresh.next;
        fresh.next += 1;
        fresh.frees.push(v);
        out.push((v, fresh));
        out
    }

    fn push_binder(&self) -> (u32, Ctx) {
        let mut c = self.clone();
        let v = c.next;
        c.next += 1;
        c.bounds.push(v);
        (v, c)
    }
}

fn generate(size: usize, ctx: &Ctx) -> Vec<(Formula, Ctx)> {
    let mut out = Vec::new();
    if size == 0 {
        return out;
    }
    if size == 1 {
        for (a, ctx_a) in ctx.occurrence_choices() {
            for (b, ctx_b) in ctx_a.occurrence_choices() {
                out.push((
                    Formula::Eq(Var::canonical(a), Var::canonical(b)),
                    ctx_b.clone(),
                ));
                out.push((Formula::In(Var::canonical(a), Var::canonical(b)), ctx_b));
            }
        }
        return out;
    }
    // Not
    for (s, c) in generate(size - 1, ctx) {
        out.push((s.not(), c));
    }
    // unbounded quantifiers
    {
        let (v, inner) = ctx.push_binder();
        for (s, mut c) in generate(size - 1, &inner) {
            c.bounds.pop();
            out.push((Formula::forall(Var::canonical(v), s.clone()), c.clone()));
            out.push((Formula::exists(Var::canonical(v), s), c));
        }
    }
    // bounded quantifiers: the bound is an occurrence outside the binder
    for (t, ctx_t) in ctx.occurrence_choices() {
        let (v, inner) = ctx_t.push_binder();
        for (s, mut c) in generate(size - 1, &inner) {
            c.bounds.pop();
            out.push((
                Formula::forall_in(Var::canonical(v), Var::canonical(t), s.clone()),
                c.clone(),
            ));
            out.push((
                Formula::exists_in(Var::canonical(v), Var::canonical(t), s),
                c,
            ));
        }
    }
    // binary connectives
    for left in 1..size - 1 {
        let right = size - 1 - left;
        for (a, ctx_a) in generate(left, ctx) {
            for (b, ctx_b) in generate(right, &ctx_a) {
                out.push((a.clone().and(b.clone()), ctx_b.clone()));
                out.push((a.clone().or(b.clone()), ctx_b.clone()));
                out.push((a.clone().implies(b.clone()), ctx_b.clone()));
                out.push((a.clone().iff(b), ctx_b));
            }
        }
    }
    out
}

// node tags for the set-level coding of syntax
const TAG_EQ: u64 = 0;
const TAG_IN: u64 = 1;
const TAG_NOT: u64 = 2;
const TAG_AND: u64 = 3;
const TAG_OR: u64 = 4;
const TAG_IMPLIES: u64 = 5;
const TAG_IFF: u64 = 6;
const TAG_FORALL: u64 = 7;
const TAG_EXISTS: u64 = 8;
const TAG_FORALL_IN: u64 = 9;
const TAG_EXISTS_IN: u64 = 10;

/// Set-level code of a formula: the α-canonical AST, as a hereditarily
/// finite set. This is what scheme oracles receive as the formula component
/// of `⌈φ(p)⌉`; unlike the enumeration index it stays desk-scale for
/// composite formulas.
///
/// A node is coded as a record {⟨0, tag⟩, ⟨1, field⟩, ⟨2, field⟩, ...} with
/// compact numerals for tags and variable indices. The record shape keeps
/// structural size additive — a Kuratowski pair duplicates its first
/// component, so nesting pairs of subtrees would blow up exponentially.
pub fn formula_code(f: &Formula) -> HfSet {
    fn slot(i: u64, x: HfSet) -> HfSet {
        HfSet::kuratowski(HfSet::numeral(i), x)
    }
    fn node(tag: u64, fields: Vec<HfSet>) -> HfSet {
        let mut record = vec![slot(0, HfSet::numeral(tag))];
        for (i, f) in fields.into_iter().enumerate() {
            record.push(slot(i as u64 + 1, f));
        }
        HfSet::from_elements(record)
    }
    fn var_code(v: &Var) -> HfSet {
        let idx = v
            .canonical_index()
            .expect("formula_code runs on canonical formulas");
        HfSet::numeral(idx as u64)
    }
    fn walk(f: &Formula) -> HfSet {
        match f {
            Formula::Eq(a, b) => node(TAG_EQ, vec![var_code(a), var_code(b)]),
            Formula::In(a, b) => node(TAG_IN, vec![var_code(a), var_code(b)]),
            Formula::Not(s) => node(TAG_NOT, vec![walk(s)]),
            Formula::And(a, b) => node(TAG_AND, vec![walk(a), walk(b)]),
            Formula::Or(a, b) => node(TAG_OR, vec![walk(a), walk(b)]),
            Formula::Implies(a, b) => node(TAG_IMPLIES, vec![walk(a), walk(b)]),
            Formula::Iff(a, b) => node(TAG_IFF, vec![walk(a), walk(b)]),
            Formula::ForAll(v, s) => node(TAG_FORALL, vec![var_code(v), walk(s)]),
            Formula::Exists(v, s) => node(TAG_EXISTS, vec![var_code(v), walk(s)]),
            Formula::ForAllIn(v, t, s) => {
                node(TAG_FORALL_IN, vec![var_code(v), var_code(t), walk(s)])
            }
            Formula::ExistsIn(v, t, s) => {
                node(TAG_EXISTS_IN, vec![var_code(v), var_code(t), walk(s)])
            }
        }
    }
    walk(&f.canonicalize())
}

/// Inverse of [`formula_code`]; `None` if the set is not a formula code.
pub fn formula_decode(code: &HfSet) -> Option<Formula> {
    // read the record slots back
    let mut fields: Vec<Option<HfSet>> = vec![None; 4];
    let mut count = 0usize;
    for entry in code.elements() {
        let (idx, value) = entry.as_kuratowski()?;
        let idx = idx.as_numeral()? as usize;
        if idx >= fields.len() || fields[idx].is_some() {
            return None;
        }
        fields[idx] = Some(value);
        count += 1;
    }
    let tag = fields[0].take()?.as_numeral()?;
    let field = |i: usize| fields.get(i).cloned().flatten();
    let var_of = |s: &HfSet| -> Option<Var> {
        Some(Var::canonical(u32::try_from(s.as_numeral()?).ok()?))
    };
    let arity = count - 1;
    Some(match (tag, arity) {
        (TAG_EQ, 2) => Formula::Eq(var_of(&field(1)?)?, var_of(&field(2)?)?),
        (TAG_IN, 2) => Formula::In(var_of(&field(1)?)?, var_of(&field(2)?)?),
        (TAG_NOT, 1) => formula_decode(&field(1)?)?.not(),
        (TAG_AND | TAG_OR | TAG_IMPLIES | TAG_IFF, 2) => {
            let a = formula_decode(&field(1)?)?;
            let b = formula_decode(&field(2)?)?;
            match tag {
                TAG_AND => a.and(b),
                TAG_OR => a.or(b),
                TAG_IMPLIES => a.implies(b),
                _ => a.iff(b),
            }
        }
        (TAG_FORALL | TAG_EXISTS, 2) => {
            let v = var_of(&field(1)?)?;
            let s = formula_decode(&field(2)?)?;
            match tag {
                TAG_FORALL => Formula::forall(v, s),
                _ => Formula::exists(v, s),
            }
        }
        (TAG_FORALL_IN | TAG_EXISTS_IN, 3) => {
            let v = var_of(&field(1)?)?;
            let t = var_of(&field(2)?)?;
            let s = formula_decode(&field(3)?)?;
            match tag {
                TAG_FORALL_IN => Formula::forall_in(v, t, s),
                _ => Formula::exists_in(v, t, s),
            }
        }
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    #[test]
    fn index_zero_is_the_reflexive_equation() {
        assert_eq!(ungodel(GodelIndex(0)), parse("v0 = v0").unwrap());
        assert_eq!(godel(&parse("x = x").unwrap()), GodelIndex(0));
    }

    #[test]
    fn size_one_bucket_has_four_formulas() {
        assert_eq!(bucket_len(1), 4);
    }

    #[test]
    fn generated_formulas_are_canonical_fixed_points() {
        for s in 1..=3 {
            let mut cache = CACHE.lock().unwrap();
            let bucket = bucket(&mut cache, s).clone();
            drop(cache);
            for f in &bucket {
                assert_eq!(&f.canonicalize(), f, "non-canonical enumerated: {f}");
            }
        }
    }

    #[test]
    fn godel_ungodel_roundtrip_on_initial_segment() {
        for i in 0..2500u64 {
            let f = ungodel(GodelIndex(i));
            assert_eq!(godel(&f), GodelIndex(i), "index {i} via {f}");
        }
    }

    #[test]
    fn godel_respects_alpha_equivalence() {
        let a = parse("A z. z in y").unwrap();
        let b = parse("A q. q in p").unwrap();
        assert_eq!(godel(&a), godel(&b));
        let back = ungodel(godel(&a));
        assert!(back.alpha_eq(&a));
    }

    #[test]
    fn formula_code_roundtrip() {
        let samples = [
            "x = x",
            "E u. u in x",
            "A z. (z in y <-> z sub x)",
            "A x. E y. (x in s -> x in y)",
            "(v0 = v1 & v1 in v2) | ~ v0 in v0",
        ];
        for s in samples {
            let f = parse(s).unwrap();
            let code = formula_code(&f);
            let back = formula_decode(&code).unwrap();
            assert!(back.alpha_eq(&f), "roundtrip of {s} gave {back}");
        }
        assert_eq!(formula_decode(&HfSet::empty()), None);
    }
}
