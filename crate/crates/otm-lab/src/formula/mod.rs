//! ∈-formulas: syntax, prenex normal form, Σₙ/Πₙ classification, Gödel
//! numbering, and Tarskian evaluation over a finite carrier.
//!
//! The language has equality and membership atoms between variables, the
//! usual connectives, unbounded quantifiers `∀v`/`∃v`, and bounded
//! quantifiers `∀v∈t`/`∃v∈t` whose bound is a variable. Bounded quantifiers
//! count as Δ₀ for classification and are left inside the matrix by the
//! prenex transformation whenever they contain no unbounded quantifier.

mod godel;
mod parse;

pub use godel::{formula_code, formula_decode, godel, ungodel, GodelIndex};
pub use parse::{parse, render, ParseFormulaError};

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::setcode::HfSet;

/// A formula variable. Canonical variables are named `v0`, `v1`, ...; the
/// surface syntax also admits arbitrary identifiers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// The canonical variable with the given index.
    pub fn canonical(index: u32) -> Self {
        Var(format!("v{index}"))
    }

    /// Index of a canonical variable, if this is one.
    pub fn canonical_index(&self) -> Option<u32> {
        self.0.strip_prefix('v')?.parse().ok()
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An ∈-formula AST.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Eq(Var, Var),
    In(Var, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ForAll(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
    /// ∀v ∈ t. body — the bound `t` is resolved outside the binder's scope.
    ForAllIn(Var, Var, Box<Formula>),
    /// ∃v ∈ t. body
    ExistsIn(Var, Var, Box<Formula>),
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseFormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

// Construction helpers; reductions build their trick formulas through these.
impl Formula {
    pub fn eq(a: impl Into<Var>, b: impl Into<Var>) -> Formula {
        Formula::Eq(a.into(), b.into())
    }

    pub fn elem(a: impl Into<Var>, b: impl Into<Var>) -> Formula {
        Formula::In(a.into(), b.into())
    }

    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Formula) -> Formula {
        Formula::Iff(Box::new(self), Box::new(other))
    }

    pub fn forall(v: impl Into<Var>, body: Formula) -> Formula {
        Formula::ForAll(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<Var>, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall_in(v: impl Into<Var>, t: impl Into<Var>, body: Formula) -> Formula {
        Formula::ForAllIn(v.into(), t.into(), Box::new(body))
    }

    pub fn exists_in(v: impl Into<Var>, t: impl Into<Var>, body: Formula) -> Formula {
        Formula::ExistsIn(v.into(), t.into(), Box::new(body))
    }

    /// `a ⊆ b` spelled out: ∀u∈a. u ∈ b, with a fresh inner variable.
    pub fn subset(a: impl Into<Var>, b: impl Into<Var>) -> Formula {
        let a = a.into();
        let b = b.into();
        let mut u = Var::new("u");
        let mut k = 0u32;
        while u == a || u == b {
            u = Var::new(format!("u{k}"));
            k += 1;
        }
        Formula::forall_in(u.clone(), a, Formula::In(u, b))
    }

    /// Free variables in order of first occurrence. For a bounded quantifier
    /// the bound is visited before the binder's body.
    pub fn free_vars(&self) -> Vec<Var> {
        fn touch(v: &Var, bound: &[Var], out: &mut Vec<Var>) {
            if !bound.contains(v) && !out.contains(v) {
                out.push(v.clone());
            }
        }
        fn walk(f: &Formula, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
            match f {
                Formula::Eq(a, b) | Formula::In(a, b) => {
                    touch(a, bound, out);
                    touch(b, bound, out);
                }
                Formula::Not(s) => walk(s, bound, out),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Iff(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Formula::ForAll(v, s) | Formula::Exists(v, s) => {
                    bound.push(v.clone());
                    walk(s, bound, out);
                    bound.pop();
                }
                Formula::ForAllIn(v, t, s) | Formula::ExistsIn(v, t, s) => {
                    touch(t, bound, out);
                    bound.push(v.clone());
                    walk(s, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Node count; the size notion behind the Gödel enumeration.
    pub fn size(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::In(..) => 1,
            Formula::Not(s)
            | Formula::ForAll(_, s)
            | Formula::Exists(_, s)
            | Formula::ForAllIn(_, _, s)
            | Formula::ExistsIn(_, _, s) => 1 + s.size(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Whether any unbounded quantifier occurs anywhere in the formula.
    pub fn has_unbounded_quantifier(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::In(..) => false,
            Formula::ForAll(..) | Formula::Exists(..) => true,
            Formula::Not(s) => s.has_unbounded_quantifier(),
            Formula::ForAllIn(_, _, s) | Formula::ExistsIn(_, _, s) => {
                s.has_unbounded_quantifier()
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.has_unbounded_quantifier() || b.has_unbounded_quantifier(),
        }
    }

    /// Total number of unbounded quantifier nodes, a naive upper bound on
    /// prenex prefix length.
    pub fn unbounded_quantifier_count(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::In(..) => 0,
            Formula::ForAll(_, s) | Formula::Exists(_, s) => 1 + s.unbounded_quantifier_count(),
            Formula::Not(s) | Formula::ForAllIn(_, _, s) | Formula::ExistsIn(_, _, s) => {
                s.unbounded_quantifier_count()
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.unbounded_quantifier_count() + b.unbounded_quantifier_count()
            }
        }
    }

    /// α-canonical form: every variable is renamed to `v{k}` where `k` counts
    /// distinct variables by first occurrence, binder positions included.
    /// Two formulas are α-equivalent, with the same parameter positions, iff
    /// their canonical forms are equal.
    pub fn canonicalize(&self) -> Formula {
        let mut r = Renamer {
            next: 0,
            frees: HashMap::new(),
            scope: Vec::new(),
        };
        r.walk(self)
    }

    /// α-equivalence, free variables matched by first-occurrence position.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self.canonicalize() == other.canonicalize()
    }

    /// Renames free occurrences of one variable. The replacement must not be
    /// bound anywhere in the formula, or it would be captured.
    pub fn rename_free(&self, from: &Var, to: &Var) -> Formula {
        fn walk(f: &Formula, from: &Var, to: &Var, depth_shadowed: bool) -> Formula {
            let sub = |v: &Var, shadowed: bool| -> Var {
                if !shadowed && v == from {
                    to.clone()
                } else {
                    v.clone()
                }
            };
            match f {
                Formula::Eq(a, b) => Formula::Eq(sub(a, depth_shadowed), sub(b, depth_shadowed)),
                Formula::In(a, b) => Formula::In(sub(a, depth_shadowed), sub(b, depth_shadowed)),
                Formula::Not(s) => walk(s, from, to, depth_shadowed).not(),
                Formula::And(a, b) => {
                    walk(a, from, to, depth_shadowed).and(walk(b, from, to, depth_shadowed))
                }
                Formula::Or(a, b) => {
                    walk(a, from, to, depth_shadowed).or(walk(b, from, to, depth_shadowed))
                }
                Formula::Implies(a, b) => {
                    walk(a, from, to, depth_shadowed).implies(walk(b, from, to, depth_shadowed))
                }
                Formula::Iff(a, b) => {
                    walk(a, from, to, depth_shadowed).iff(walk(b, from, to, depth_shadowed))
                }
                Formula::ForAll(v, s) => {
                    let sh = depth_shadowed || v == from;
                    Formula::ForAll(v.clone(), Box::new(walk(s, from, to, sh)))
                }
                Formula::Exists(v, s) => {
                    let sh = depth_shadowed || v == from;
                    Formula::Exists(v.clone(), Box::new(walk(s, from, to, sh)))
                }
                Formula::ForAllIn(v, t, s) => {
                    let t = sub(t, depth_shadowed);
                    let sh = depth_shadowed || v == from;
                    Formula::ForAllIn(v.clone(), t, Box::new(walk(s, from, to, sh)))
                }
                Formula::ExistsIn(v, t, s) => {
                    let t = sub(t, depth_shadowed);
                    let sh = depth_shadowed || v == from;
                    Formula::ExistsIn(v.clone(), t, Box::new(walk(s, from, to, sh)))
                }
            }
        }
        walk(self, from, to, false)
    }
}

struct Renamer {
    next: u32,
    frees: HashMap<Var, Var>,
    scope: Vec<(Var, Var)>,
}

impl Renamer {
    fn fresh(&mut self) -> Var {
        let v = Var::canonical(self.next);
        self.next += 1;
        v
    }

    fn occurrence(&mut self, v: &Var) -> Var {
        if let Some((_, canon)) = self.scope.iter().rev().find(|(orig, _)| orig == v) {
            return canon.clone();
        }
        if let Some(canon) = self.frees.get(v) {
            return canon.clone();
        }
        let canon = self.fresh();
        self.frees.insert(v.clone(), canon.clone());
        canon
    }

    fn binder(&mut self, v: &Var, t: Option<&Var>, s: &Formula) -> (Var, Option<Var>, Formula) {
        let t = t.map(|t| self.occurrence(t));
        let canon = self.fresh();
        self.scope.push((v.clone(), canon.clone()));
        let body = self.walk(s);
        self.scope.pop();
        (canon, t, body)
    }

    fn walk(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::Eq(a, b) => Formula::Eq(self.occurrence(a), self.occurrence(b)),
            Formula::In(a, b) => Formula::In(self.occurrence(a), self.occurrence(b)),
            Formula::Not(s) => self.walk(s).not(),
            Formula::And(a, b) => self.walk(a).and(self.walk(b)),
            Formula::Or(a, b) => self.walk(a).or(self.walk(b)),
            Formula::Implies(a, b) => self.walk(a).implies(self.walk(b)),
            Formula::Iff(a, b) => self.walk(a).iff(self.walk(b)),
            Formula::ForAll(v, s) => {
                let (v, _, body) = self.binder(v, None, s);
                Formula::ForAll(v, Box::new(body))
            }
            Formula::Exists(v, s) => {
                let (v, _, body) = self.binder(v, None, s);
                Formula::Exists(v, Box::new(body))
            }
            Formula::ForAllIn(v, t, s) => {
                let (v, t, body) = self.binder(v, Some(t), s);
                Formula::ForAllIn(v, t.unwrap(), Box::new(body))
            }
            Formula::ExistsIn(v, t, s) => {
                let (v, t, body) = self.binder(v, Some(t), s);
                Formula::ExistsIn(v, t.unwrap(), Box::new(body))
            }
        }
    }
}

/// Σₙ/Πₙ/Δ₀ classification of a prenex formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    DeltaZero,
    Sigma(u32),
    Pi(u32),
}

impl Classification {
    /// Number of alternating unbounded quantifier blocks.
    pub fn level(self) -> u32 {
        match self {
            Classification::DeltaZero => 0,
            Classification::Sigma(n) | Classification::Pi(n) => n,
        }
    }

    /// Whether formulas of this class are Σₙ for the given n (Δ₀ and Πₘ with
    /// m < n count as Σₙ).
    pub fn is_sigma(self, n: u32) -> bool {
        match self {
            Classification::DeltaZero => true,
            Classification::Sigma(m) => m <= n,
            Classification::Pi(m) => m < n,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::DeltaZero => write!(f, "Delta_0"),
            Classification::Sigma(n) => write!(f, "Sigma_{n}"),
            Classification::Pi(n) => write!(f, "Pi_{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quantifier {
    All,
    Ex,
}

/// Prenex normal form. Unbounded quantifiers are pulled to a leading prefix,
/// preserving their left-to-right order; bounded quantifiers stay in the
/// matrix unless an unbounded quantifier sits beneath them, in which case the
/// bounded quantifier is unfolded to its guarded unbounded form and pulled
/// too. Biconditionals whose sides contain unbounded quantifiers are split
/// into the two implications first.
pub fn prenex(f: &Formula) -> Formula {
    let rectified = rectify(f);
    let (prefix, matrix) = pull(&rectified);
    let mut out = matrix;
    for (q, v) in prefix.into_iter().rev() {
        out = match q {
            Quantifier::All => Formula::ForAll(v, Box::new(out)),
            Quantifier::Ex => Formula::Exists(v, Box::new(out)),
        };
    }
    out
}

fn flip(prefix: &mut [(Quantifier, Var)]) {
    for (q, _) in prefix.iter_mut() {
        *q = match q {
            Quantifier::All => Quantifier::Ex,
            Quantifier::Ex => Quantifier::All,
        };
    }
}

fn pull(f: &Formula) -> (Vec<(Quantifier, Var)>, Formula) {
    match f {
        Formula::Eq(..) | Formula::In(..) => (Vec::new(), f.clone()),
        Formula::Not(s) => {
            let (mut prefix, m) = pull(s);
            flip(&mut prefix);
            (prefix, m.not())
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let (mut pa, ma) = pull(a);
            if matches!(f, Formula::Implies(..)) {
                flip(&mut pa);
            }
            let (pb, mb) = pull(b);
            let mut prefix = pa;
            prefix.extend(pb);
            let matrix = match f {
                Formula::And(..) => ma.and(mb),
                Formula::Or(..) => ma.or(mb),
                _ => ma.implies(mb),
            };
            (prefix, matrix)
        }
        Formula::Iff(a, b) => {
            if !a.has_unbounded_quantifier() && !b.has_unbounded_quantifier() {
                return (Vec::new(), f.clone());
            }
            // split, then re-rectify: the split duplicates binders
            let split = a
                .as_ref()
                .clone()
                .implies(b.as_ref().clone())
                .and(b.as_ref().clone().implies(a.as_ref().clone()));
            pull(&rectify(&split))
        }
        Formula::ForAll(v, s) => {
            let (mut prefix, m) = pull(s);
            prefix.insert(0, (Quantifier::All, v.clone()));
            (prefix, m)
        }
        Formula::Exists(v, s) => {
            let (mut prefix, m) = pull(s);
            prefix.insert(0, (Quantifier::Ex, v.clone()));
            (prefix, m)
        }
        Formula::ForAllIn(v, t, s) => {
            let (prefix, m) = pull(s);
            if prefix.is_empty() {
                (
                    Vec::new(),
                    Formula::ForAllIn(v.clone(), t.clone(), Box::new(m)),
                )
            } else {
                let mut out = vec![(Quantifier::All, v.clone())];
                out.extend(prefix);
                (out, Formula::In(v.clone(), t.clone()).implies(m))
            }
        }
        Formula::ExistsIn(v, t, s) => {
            let (prefix, m) = pull(s);
            if prefix.is_empty() {
                (
                    Vec::new(),
                    Formula::ExistsIn(v.clone(), t.clone(), Box::new(m)),
                )
            } else {
                let mut out = vec![(Quantifier::Ex, v.clone())];
                out.extend(prefix);
                (out, Formula::In(v.clone(), t.clone()).and(m))
            }
        }
    }
}

/// Renames bound variables so that all binders are pairwise distinct and
/// disjoint from the free variables. Binders that do not collide keep their
/// names.
fn rectify(f: &Formula) -> Formula {
    fn fresh(used: &mut Vec<Var>, base: &Var) -> Var {
        if !used.contains(base) {
            used.push(base.clone());
            return base.clone();
        }
        let mut k = 0u32;
        loop {
            let cand = Var::new(format!("{}_{k}", base.name()));
            if !used.contains(&cand) {
                used.push(cand.clone());
                return cand;
            }
            k += 1;
        }
    }
    fn resolve(v: &Var, scope: &[(Var, Var)]) -> Var {
        scope
            .iter()
            .rev()
            .find(|(orig, _)| orig == v)
            .map(|(_, n)| n.clone())
            .unwrap_or_else(|| v.clone())
    }
    fn walk(f: &Formula, used: &mut Vec<Var>, scope: &mut Vec<(Var, Var)>) -> Formula {
        match f {
            Formula::Eq(a, b) => Formula::Eq(resolve(a, scope), resolve(b, scope)),
            Formula::In(a, b) => Formula::In(resolve(a, scope), resolve(b, scope)),
            Formula::Not(s) => walk(s, used, scope).not(),
            Formula::And(a, b) => walk(a, used, scope).and(walk(b, used, scope)),
            Formula::Or(a, b) => walk(a, used, scope).or(walk(b, used, scope)),
            Formula::Implies(a, b) => walk(a, used, scope).implies(walk(b, used, scope)),
            Formula::Iff(a, b) => walk(a, used, scope).iff(walk(b, used, scope)),
            Formula::ForAll(v, s) | Formula::Exists(v, s) => {
                let nv = fresh(used, v);
                scope.push((v.clone(), nv.clone()));
                let body = walk(s, used, scope);
                scope.pop();
                match f {
                    Formula::ForAll(..) => Formula::ForAll(nv, Box::new(body)),
                    _ => Formula::Exists(nv, Box::new(body)),
                }
            }
            Formula::ForAllIn(v, t, s) | Formula::ExistsIn(v, t, s) => {
                let t = resolve(t, scope);
                let nv = fresh(used, v);
                scope.push((v.clone(), nv.clone()));
                let body = walk(s, used, scope);
                scope.pop();
                match f {
                    Formula::ForAllIn(..) => Formula::ForAllIn(nv, t, Box::new(body)),
                    _ => Formula::ExistsIn(nv, t, Box::new(body)),
                }
            }
        }
    }
    let mut used = f.free_vars();
    walk(f, &mut used, &mut Vec::new())
}

/// Leading unbounded prefix of a prenex formula and its matrix. Each prefix
/// entry is `(is_universal, variable)`.
pub fn split_prenex(f: &Formula) -> (Vec<(bool, Var)>, Formula) {
    let mut prefix = Vec::new();
    let mut cur = f;
    loop {
        match cur {
            Formula::ForAll(v, s) => {
                prefix.push((true, v.clone()));
                cur = s;
            }
            Formula::Exists(v, s) => {
                prefix.push((false, v.clone()));
                cur = s;
            }
            _ => return (prefix, cur.clone()),
        }
    }
}

/// Folds a prefix back over a matrix; inverse of [`split_prenex`].
pub fn join_prenex(prefix: &[(bool, Var)], matrix: &Formula) -> Formula {
    let mut out = matrix.clone();
    for (universal, v) in prefix.iter().rev() {
        out = if *universal {
            Formula::ForAll(v.clone(), Box::new(out))
        } else {
            Formula::Exists(v.clone(), Box::new(out))
        };
    }
    out
}

/// Classification by alternation count of the leading unbounded prefix.
/// The input is brought to prenex form first, so the result is meaningful
/// for any formula; prenex inputs are classified as given.
pub fn classify(f: &Formula) -> Classification {
    let p = prenex(f);
    let mut blocks: Vec<Quantifier> = Vec::new();
    let mut cur = &p;
    loop {
        let q = match cur {
            Formula::ForAll(_, s) => {
                cur = s;
                Quantifier::All
            }
            Formula::Exists(_, s) => {
                cur = s;
                Quantifier::Ex
            }
            _ => break,
        };
        if blocks.last() != Some(&q) {
            blocks.push(q);
        }
    }
    match blocks.first() {
        None => Classification::DeltaZero,
        Some(Quantifier::Ex) => Classification::Sigma(blocks.len() as u32),
        Some(Quantifier::All) => Classification::Pi(blocks.len() as u32),
    }
}

/// Variable assignment for evaluation.
pub type Assignment = BTreeMap<Var, HfSet>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Var),
}

/// Tarskian satisfaction over a finite carrier: unbounded quantifiers range
/// over `carrier`, bounded quantifiers over the elements of their bound.
pub fn eval(f: &Formula, carrier: &[HfSet], assignment: &Assignment) -> Result<bool, EvalError> {
    let mut env = assignment.clone();
    eval_mut(f, carrier, &mut env)
}

/// Evaluation against a mutable environment: quantifiers bind by insertion
/// and restore the shadowed value afterwards, so no per-step copies of the
/// assignment are made. Exposed for oracle implementations whose witness
/// scans evaluate the same formula many times.
pub fn eval_mut(
    f: &Formula,
    carrier: &[HfSet],
    env: &mut Assignment,
) -> Result<bool, EvalError> {
    fn lookup<'a>(asg: &'a Assignment, v: &Var) -> Result<&'a HfSet, EvalError> {
        asg.get(v)
            .ok_or_else(|| EvalError::UnboundVariable(v.clone()))
    }
    fn quantify(
        v: &Var,
        body: &Formula,
        witness: bool,
        range: &[HfSet],
        carrier: &[HfSet],
        env: &mut Assignment,
    ) -> Result<bool, EvalError> {
        let shadowed = env.remove(v);
        let mut verdict = !witness;
        let mut error = None;
        for x in range {
            env.insert(v.clone(), x.clone());
            match eval_mut(body, carrier, env) {
                Ok(b) if b == witness => {
                    verdict = witness;
                    break;
                }
                Ok(_) => {}
                Err(e) => {
                    error = Some(e);
                    break;
                }
            }
        }
        match shadowed {
            Some(old) => {
                env.insert(v.clone(), old);
            }
            None => {
                env.remove(v);
            }
        }
        match error {
            Some(e) => Err(e),
            None => Ok(verdict),
        }
    }
    match f {
        Formula::Eq(a, b) => Ok(lookup(env, a)? == lookup(env, b)?),
        Formula::In(a, b) => Ok(lookup(env, b)?.contains(lookup(env, a)?)),
        Formula::Not(s) => Ok(!eval_mut(s, carrier, env)?),
        Formula::And(a, b) => Ok(eval_mut(a, carrier, env)? && eval_mut(b, carrier, env)?),
        Formula::Or(a, b) => Ok(eval_mut(a, carrier, env)? || eval_mut(b, carrier, env)?),
        Formula::Implies(a, b) => Ok(!eval_mut(a, carrier, env)? || eval_mut(b, carrier, env)?),
        Formula::Iff(a, b) => Ok(eval_mut(a, carrier, env)? == eval_mut(b, carrier, env)?),
        Formula::ForAll(v, s) | Formula::Exists(v, s) => {
            let witness = matches!(f, Formula::Exists(..));
            quantify(v, s, witness, carrier, carrier, env)
        }
        Formula::ForAllIn(v, t, s) | Formula::ExistsIn(v, t, s) => {
            let witness = matches!(f, Formula::ExistsIn(..));
            let range: Vec<HfSet> = lookup(env, t)?.elements().cloned().collect();
            quantify(v, s, witness, &range, carrier, env)
        }
    }
}
