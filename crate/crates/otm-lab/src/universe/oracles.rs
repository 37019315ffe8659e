//! Ground-truth effectivizers, adversarial families, and defining-formula
//! validation.
//!
//! Ground truths are computed directly from the universe: separation,
//! replacement, and collection through formula evaluation, the cardinal
//! principles from the designated cardinal set and beth function. Scheme
//! oracles receive the formula as a set-level syntax code (see
//! [`crate::formula::formula_code`]), then positional parameters, then the
//! subject set.
//!
//! Validation closes the loop: an output is checked against the principle's
//! defining formula, evaluated in the universe wherever the witnesses live
//! inside the carrier. The cardinality principles quantify over bijections
//! that a small Vₙ carrier cannot host, so their checks use the
//! definitionally equivalent native conditions instead; the full-Card
//! principle carries its own bijection witness and is checked by formula.

use std::collections::BTreeSet;

use crate::formula::{self, classify, prenex, split_prenex, Assignment, Formula, Var};
use crate::ordinal::Ordinal;
use crate::setcode::{self, HfSet, SetCode};

use super::{
    code_as_ordinal, decode_formula_arg, encode_effectivizer, nat_code, ord_code, ord_set_code,
    CardinalUniverse, Effectivizer, HfUniverse, OracleError, Principle, Universe,
};

// ---------------------------------------------------------------------------
// toy predicates: the Σ-leveled properties cardinal-structure separation
// oracles can test

/// Predicates available to separation oracles over cardinal structures,
/// indexed by the tag passed as the oracle's first argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToyPredicate {
    /// "α is not a cardinal": asserts a collapsing bijection exists, Σ₁.
    NotACardinal,
    /// "α is a cardinal": the Π₁ negation, within Σ₂.
    IsCardinal,
    /// "α is the cardinality of the power set of the parameter": Σ₂.
    IsPowerCardOf,
}

impl ToyPredicate {
    pub fn tag(self) -> u64 {
        match self {
            ToyPredicate::NotACardinal => 0,
            ToyPredicate::IsCardinal => 1,
            ToyPredicate::IsPowerCardOf => 2,
        }
    }

    pub fn from_tag(tag: u64) -> Option<Self> {
        match tag {
            0 => Some(ToyPredicate::NotACardinal),
            1 => Some(ToyPredicate::IsCardinal),
            2 => Some(ToyPredicate::IsPowerCardOf),
            _ => None,
        }
    }

    /// Quantifier level of the property when spelled out in ∈-language.
    pub fn sigma_level(self) -> u32 {
        match self {
            ToyPredicate::NotACardinal => 1,
            ToyPredicate::IsCardinal => 2,
            ToyPredicate::IsPowerCardOf => 2,
        }
    }

    pub fn takes_parameter(self) -> bool {
        matches!(self, ToyPredicate::IsPowerCardOf)
    }

    pub fn holds(
        self,
        u: &CardinalUniverse,
        param: Option<&Ordinal>,
        z: &Ordinal,
    ) -> Result<bool, OracleError> {
        match self {
            ToyPredicate::NotACardinal => Ok(!u.is_cardinal(z)),
            ToyPredicate::IsCardinal => Ok(u.is_cardinal(z)),
            ToyPredicate::IsPowerCardOf => {
                let alpha = param.ok_or_else(|| {
                    OracleError::MalformedInput("IsPowerCardOf needs a parameter".into())
                })?;
                Ok(u.power_card(alpha)? == *z)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// deterministic pseudo-choice for adversarial variants

/// A small stable hash over structural data; enough to spread adversarial
/// choices, with no cross-run instability.
fn stable_hash(seed: u64, data: &SetCode) -> u64 {
    let mut h = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    let mut mix = |v: u64| {
        h ^= v.wrapping_add(0x9e3779b97f4a7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
    };
    mix(data.root.nat_value().unwrap_or(u64::MAX));
    for m in &data.members {
        mix(m.nat_value().unwrap_or(u64::MAX));
        for (e, c) in m.to_string().bytes().enumerate() {
            mix((e as u64) << 8 | c as u64);
        }
    }
    h
}

fn stable_hash_hf(seed: u64, x: &HfSet) -> u64 {
    stable_hash(seed, &setcode::encode(x))
}

// ---------------------------------------------------------------------------
// scheme argument plumbing

/// Splits scheme-oracle arguments `[formula, p₁..pₘ, X]` and binds the
/// parameters positionally to the formula's free variables, leaving
/// `reserved` leading variables open. For separation, `reserved` may be 0
/// (all variables bound: a truth test) or 1 (the separation variable).
fn bind_scheme_args(
    args: &[SetCode],
    reserved_options: &[usize],
) -> Result<(Formula, Vec<Var>, Assignment, HfSet), OracleError> {
    if args.len() < 2 {
        return Err(OracleError::MalformedInput(
            "scheme oracle needs a formula and a subject set".into(),
        ));
    }
    let phi = decode_formula_arg(&args[0])?;
    let subject = setcode::decode(&args[args.len() - 1])?;
    let params: Vec<HfSet> = args[1..args.len() - 1]
        .iter()
        .map(setcode::decode)
        .collect::<Result<_, _>>()?;
    let vars = phi.free_vars();
    let reserved = *reserved_options
        .iter()
        .find(|r| params.len() + **r == vars.len())
        .ok_or_else(|| {
            OracleError::MalformedInput(format!(
                "formula has {} free variables but {} parameters were supplied",
                vars.len(),
                params.len()
            ))
        })?;
    let mut assignment = Assignment::new();
    for (v, p) in vars[reserved..].iter().zip(&params) {
        assignment.insert(v.clone(), p.clone());
    }
    Ok((phi, vars[..reserved].to_vec(), assignment, subject))
}

fn check_level(phi: &Formula, level: Option<u32>) -> Result<(), OracleError> {
    if let Some(n) = level {
        let class = classify(phi);
        if !class.is_sigma(n) {
            return Err(OracleError::LevelExceeded {
                found: class.to_string(),
                allowed: n,
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// ground truths

pub(super) fn ground_truth(
    universe: &Universe,
    principle: Principle,
) -> Result<Effectivizer, OracleError> {
    match universe {
        Universe::Hf(u) => hf_ground_truth(u, principle),
        Universe::Cardinal(u) => cardinal_ground_truth(u, principle),
    }
    .ok_or_else(|| OracleError::PrincipleUnavailable {
        principle: principle.to_string(),
        universe: universe.kind_name().to_string(),
    })
}

fn hf_ground_truth(u: &HfUniverse, principle: Principle) -> Option<Effectivizer> {
    let name = format!("{principle}@hf");
    match principle {
        Principle::Sep(level) => Some(hf_sep(u, level, name)),
        Principle::Rep(level) => Some(hf_rep(u, level, name)),
        Principle::Coll(level) => Some(hf_coll(u, level, name, 0, 0)),
        Principle::Pot => Some(encode_effectivizer(name, |values| match values {
            [x] => Ok(x.powerset()),
            _ => Err(OracleError::MalformedInput("Pot takes one set".into())),
        })),
        Principle::Card => Some(encode_effectivizer(name, |values| match values {
            [x] => Ok(HfSet::von_neumann(x.len() as u64)),
            _ => Err(OracleError::MalformedInput("Card takes one set".into())),
        })),
        Principle::CardFull => Some(encode_effectivizer(name, |values| match values {
            [x] => Ok(card_full_value(x, |_, n| n)),
            _ => Err(OracleError::MalformedInput("Card takes one set".into())),
        })),
        Principle::OrdCard => Some(encode_effectivizer(name, |values| match values {
            [x] => match x.as_von_neumann() {
                // in the hereditarily finite world every natural is a
                // cardinal, so an ordinal is its own cardinality
                Some(_) => Ok(x.clone()),
                None => Err(OracleError::MalformedInput(
                    "OrdCard takes a von Neumann ordinal".into(),
                )),
            },
            _ => Err(OracleError::MalformedInput("OrdCard takes one set".into())),
        })),
        Principle::Ac => Some(encode_effectivizer(name, |values| match values {
            [x] => Ok(choice_function(x, |_, _| 0)),
            _ => Err(OracleError::MalformedInput("AC takes one set".into())),
        })),
        Principle::Tnd(n) => Some(hf_tnd(u, n, name)),
        _ => None,
    }
}

fn cardinal_ground_truth(u: &CardinalUniverse, principle: Principle) -> Option<Effectivizer> {
    let name = format!("{principle}@cardinal");
    let one_ordinal = |args: &[SetCode]| -> Result<Ordinal, OracleError> {
        match args {
            [a] => code_as_ordinal(a),
            _ => Err(OracleError::MalformedInput(
                "expected a single ordinal argument".into(),
            )),
        }
    };
    match principle {
        Principle::NextCard | Principle::GreaterCard => {
            let u = u.clone();
            Some(Effectivizer::from_fn(name, move |args| {
                let alpha = one_ordinal(args)?;
                let kappa = u
                    .next_card(&alpha)
                    .ok_or(OracleError::NoNextCardinal { above: alpha })?;
                Ok(ord_code(&kappa))
            }))
        }
        Principle::DecCard => {
            let u = u.clone();
            Some(Effectivizer::from_fn(name, move |args| {
                let alpha = one_ordinal(args)?;
                Ok(nat_code(u.is_cardinal(&alpha) as u64))
            }))
        }
        Principle::Card | Principle::OrdCard => {
            let u = u.clone();
            Some(Effectivizer::from_fn(name, move |args| {
                let alpha = one_ordinal(args)?;
                Ok(ord_code(&u.card_of(&alpha)))
            }))
        }
        Principle::PowerCard => {
            let u = u.clone();
            Some(Effectivizer::from_fn(name, move |args| {
                let alpha = one_ordinal(args)?;
                Ok(ord_code(&u.power_card(&alpha)?))
            }))
        }
        Principle::Sep(level) => {
            let u = u.clone();
            Some(Effectivizer::from_fn(name, move |args| {
                cardinal_sep(&u, level, args)
            }))
        }
        _ => None,
    }
}

/// Separation over a cardinal structure: arguments are a predicate tag, the
/// predicate's parameter if it takes one, and the subject set of ordinals.
fn cardinal_sep(
    u: &CardinalUniverse,
    level: Option<u32>,
    args: &[SetCode],
) -> Result<SetCode, OracleError> {
    let (tag_code, rest) = args
        .split_first()
        .ok_or_else(|| OracleError::MalformedInput("missing predicate tag".into()))?;
    let tag = code_as_ordinal(tag_code)?
        .nat_value()
        .ok_or_else(|| OracleError::MalformedInput("predicate tag must be finite".into()))?;
    let pred = ToyPredicate::from_tag(tag)
        .ok_or_else(|| OracleError::MalformedInput(format!("unknown predicate tag {tag}")))?;
    if let Some(n) = level {
        if pred.sigma_level() > n {
            return Err(OracleError::LevelExceeded {
                found: format!("Sigma_{}", pred.sigma_level()),
                allowed: n,
            });
        }
    }
    let (param, subject) = match (pred.takes_parameter(), rest) {
        (true, [p, x]) => (Some(code_as_ordinal(p)?), x),
        (false, [x]) => (None, x),
        _ => {
            return Err(OracleError::MalformedInput(
                "wrong argument count for the predicate".into(),
            ))
        }
    };
    let mut out = BTreeSet::new();
    for z in &subject.members {
        if pred.holds(u, param.as_ref(), z)? {
            out.insert(z.clone());
        }
    }
    Ok(ord_set_code(&out))
}

/// Separation over an HF universe. The output code inherits the input's
/// point labels (the kept children of the root and their closures), so its
/// field is a subset of the input's field; the size monitor checks exactly
/// this.
fn hf_sep(u: &HfUniverse, level: Option<u32>, name: String) -> Effectivizer {
    let u = u.clone();
    Effectivizer::from_fn(name, move |args| {
        let (phi, open, base, _subject) = bind_scheme_args(args, &[1, 0])?;
        check_level(&phi, level)?;
        let x_code = &args[args.len() - 1];
        let points = setcode::decode_points(x_code)?;
        // decide point by point on the root's children
        let mut env = base;
        let mut verdicts: std::collections::BTreeMap<Ordinal, bool> = Default::default();
        for (b, g) in x_code.edges() {
            if g == x_code.root {
                let value = points.get(&b).ok_or_else(|| {
                    OracleError::MalformedInput("dangling edge in subject code".into())
                })?;
                if let Some(z) = open.first() {
                    env.insert(z.clone(), value.clone());
                }
                let keep = formula::eval_mut(&phi, u.carrier(), &mut env)?;
                verdicts.insert(b, keep);
            }
        }
        Ok(setcode::restrict_root_children(x_code, |p| {
            verdicts.get(p).copied().unwrap_or(false)
        }))
    })
}

/// Replacement over an HF universe: when the formula is functional on the
/// subject, the image set; otherwise the empty set (the defining implication
/// is then vacuous).
fn hf_rep(u: &HfUniverse, level: Option<u32>, name: String) -> Effectivizer {
    let u = u.clone();
    Effectivizer::from_fn(name, move |args| {
        let (phi, open, base, subject) = bind_scheme_args(args, &[2])?;
        check_level(&phi, level)?;
        let (x_var, y_var) = (&open[0], &open[1]);
        let mut env = base;
        let mut image = HfSet::empty();
        for x in subject.elements() {
            env.insert(x_var.clone(), x.clone());
            let mut unique: Option<&HfSet> = None;
            for y in u.carrier() {
                env.insert(y_var.clone(), y.clone());
                if formula::eval_mut(&phi, u.carrier(), &mut env).unwrap_or(false) {
                    if unique.is_some() {
                        // not functional on the subject: vacuous output
                        return Ok(setcode::encode(&HfSet::empty()));
                    }
                    unique = Some(y);
                }
            }
            match unique {
                Some(y) => image.insert(y.clone()),
                None => return Ok(setcode::encode(&HfSet::empty())),
            }
        }
        Ok(setcode::encode(&image))
    })
}

/// Collection over an HF universe. The canonical output picks, for each
/// element of the subject, the witnesses offset into its witness list (0 for
/// the ground truth), optionally padded with extra carrier elements;
/// adversarial variants use nonzero offsets and padding.
fn hf_coll(
    u: &HfUniverse,
    level: Option<u32>,
    name: String,
    witness_offset: u64,
    padding: usize,
) -> Effectivizer {
    let u = u.clone();
    Effectivizer::from_fn(name, move |args| {
        let (phi, open, base, subject) = bind_scheme_args(args, &[2])?;
        check_level(&phi, level)?;
        let (x_var, y_var) = (&open[0], &open[1]);
        let mut env = base;
        let mut out = HfSet::empty();
        for x in subject.elements() {
            env.insert(x_var.clone(), x.clone());
            let mut witnesses: Vec<&HfSet> = Vec::new();
            for y in u.carrier() {
                env.insert(y_var.clone(), y.clone());
                if formula::eval_mut(&phi, u.carrier(), &mut env).unwrap_or(false) {
                    witnesses.push(y);
                }
            }
            if witnesses.is_empty() {
                // antecedent fails: vacuous output
                return Ok(setcode::encode(&HfSet::empty()));
            }
            let pick = if witness_offset == 0 {
                0
            } else {
                (stable_hash_hf(witness_offset, x) as usize) % witnesses.len()
            };
            out.insert(witnesses[pick].clone());
        }
        for extra in u.carrier().iter().take(padding) {
            out.insert(extra.clone());
        }
        Ok(setcode::encode(&out))
    })
}

/// The (κ, f) value of the full cardinality principle: κ = |x| as a von
/// Neumann ordinal and f a bijection enumerating x, with the enumeration
/// order chosen by `pick`: `pick(x, i)` gives the canonical-order position
/// to place at index i.
fn card_full_value(x: &HfSet, pick: impl Fn(&HfSet, u64) -> u64) -> HfSet {
    let n = x.len() as u64;
    let elems: Vec<&HfSet> = x.elements().collect();
    let mut used = vec![false; elems.len()];
    let mut f = HfSet::empty();
    for i in 0..n {
        let mut target = pick(x, i) % n;
        // walk to the next unused slot so any pick function yields a bijection
        while used[target as usize] {
            target = (target + 1) % n;
        }
        used[target as usize] = true;
        f.insert(HfSet::kuratowski(
            HfSet::von_neumann(i),
            elems[target as usize].clone(),
        ));
    }
    HfSet::kuratowski(HfSet::von_neumann(n), f)
}

/// A choice function on a set of nonempty sets; `pick(x, n)` selects which
/// of the n elements to take from x. When the input contains the empty set
/// the principle's implication is vacuous and ∅ is returned.
fn choice_function(family: &HfSet, pick: impl Fn(&HfSet, usize) -> usize) -> HfSet {
    if family.elements().any(|x| x.is_empty()) {
        return HfSet::empty();
    }
    let mut f = HfSet::empty();
    for x in family.elements() {
        let elems: Vec<&HfSet> = x.elements().collect();
        let chosen = elems[pick(x, elems.len()) % elems.len()].clone();
        f.insert(HfSet::kuratowski(x.clone(), chosen));
    }
    f
}

// ---------------------------------------------------------------------------
// Σₙ truth with delegated witnesses

/// Protocol slots of a prenex prefix: every existential is preceded by
/// exactly one universal (a dummy where the original prefix has consecutive
/// existentials or leads with one). A call with j+1 argument values fills
/// the first j+1 universal slots and answers the existential that follows
/// the last filled one, computing canonical witnesses for any existentials
/// passed on the way.
#[derive(Debug, Clone)]
enum TndSlot {
    Universal(Var),
    Dummy,
    /// variable plus the remainder formula governing its choice
    Existential(Var, Formula),
}

fn tnd_slots(phi: &Formula) -> Vec<TndSlot> {
    let p = prenex(phi);
    let (prefix, matrix) = split_prenex(&p);
    let mut out = Vec::new();
    for (i, (universal, v)) in prefix.iter().enumerate() {
        if *universal {
            out.push(TndSlot::Universal(v.clone()));
        } else {
            if !matches!(out.last(), Some(TndSlot::Universal(_)) | Some(TndSlot::Dummy)) {
                out.push(TndSlot::Dummy);
            }
            let remainder = formula::join_prenex(&prefix[i + 1..], &matrix);
            out.push(TndSlot::Existential(v.clone(), remainder));
        }
    }
    out
}

fn canonical_witness(
    u: &HfUniverse,
    remainder: &Formula,
    v: &Var,
    env: &mut Assignment,
) -> Option<HfSet> {
    let shadowed = env.remove(v);
    let mut found = None;
    for w in u.carrier() {
        env.insert(v.clone(), w.clone());
        if formula::eval_mut(remainder, u.carrier(), env) == Ok(true) {
            found = Some(w.clone());
            break;
        }
    }
    match shadowed {
        Some(old) => env.insert(v.clone(), old),
        None => env.remove(v),
    };
    found
}

/// Σₙ truth with delegated witnesses: `[φ, p..]` answers the truth bit of
/// φ(p); `[φ, p.., a₀..aⱼ]` answers the witness for the existential after
/// the (j+1)-th universal of φ's prenex prefix, under universal values a₀..aⱼ
/// and canonical choices for earlier existentials. Witness calls on a false
/// instance return ∅; only true instances constrain an effectivizer.
fn hf_tnd(u: &HfUniverse, n: u32, name: String) -> Effectivizer {
    let u = u.clone();
    Effectivizer::from_fn(name, move |args| {
        let (formula_code, rest) = args
            .split_first()
            .ok_or_else(|| OracleError::MalformedInput("missing formula code".into()))?;
        let phi = decode_formula_arg(formula_code)?;
        let class = classify(&phi);
        if !class.is_sigma(n) {
            return Err(OracleError::LevelExceeded {
                found: class.to_string(),
                allowed: n,
            });
        }
        let frees = phi.free_vars();
        if rest.len() < frees.len() {
            return Err(OracleError::MalformedInput(format!(
                "{} parameters required, {} arguments given",
                frees.len(),
                rest.len()
            )));
        }
        let mut asg = Assignment::new();
        for (v, code) in frees.iter().zip(rest) {
            asg.insert(v.clone(), setcode::decode(code)?);
        }
        let universals = &rest[frees.len()..];
        if universals.is_empty() {
            let bit = u.eval(&phi, &asg)?;
            return Ok(setcode::encode(&HfSet::von_neumann(bit as u64)));
        }
        // witness call: feed universal values through the slot protocol
        let slots = tnd_slots(&phi);
        let mut supplied = universals.iter();
        let mut remaining = universals.len();
        for slot in &slots {
            match slot {
                TndSlot::Universal(v) => {
                    let code = supplied.next().expect("counted below");
                    asg.insert(v.clone(), setcode::decode(code)?);
                    remaining -= 1;
                }
                TndSlot::Dummy => {
                    let _ = supplied.next().expect("counted below");
                    remaining -= 1;
                }
                TndSlot::Existential(v, remainder) => {
                    let witness = canonical_witness(&u, remainder, v, &mut asg)
                        .unwrap_or_else(HfSet::empty);
                    if remaining == 0 {
                        return Ok(setcode::encode(&witness));
                    }
                    asg.insert(v.clone(), witness);
                }
            }
            if remaining == 0 && matches!(slot, TndSlot::Universal(_) | TndSlot::Dummy) {
                continue;
            }
        }
        Err(OracleError::MalformedInput(
            "more universal values than the prefix admits".into(),
        ))
    })
}

// ---------------------------------------------------------------------------
// adversarial families

pub(super) fn adversarial_family(
    universe: &Universe,
    principle: Principle,
    seed: u64,
) -> Result<Vec<Effectivizer>, OracleError> {
    let unavailable = || OracleError::PrincipleUnavailable {
        principle: principle.to_string(),
        universe: universe.kind_name().to_string(),
    };
    match (universe, principle) {
        (Universe::Cardinal(u), Principle::GreaterCard) => {
            let mk = |tag: &str, pick: Box<dyn Fn(&CardinalUniverse, &Ordinal) -> Option<Ordinal>>| {
                let u = u.clone();
                Effectivizer::from_fn(format!("GreaterCard@cardinal[{tag}]"), move |args| {
                    let alpha = match args {
                        [a] => code_as_ordinal(a)?,
                        _ => {
                            return Err(OracleError::MalformedInput(
                                "expected a single ordinal argument".into(),
                            ))
                        }
                    };
                    let kappa = pick(&u, &alpha)
                        .ok_or(OracleError::NoNextCardinal { above: alpha })?;
                    Ok(ord_code(&kappa))
                })
            };
            let least = mk("least", Box::new(|u, a| u.next_card(a)));
            let greatest = mk(
                "greatest",
                Box::new(|u, a| u.cardinals().iter().rev().find(|c| *c > a).cloned()),
            );
            let seeded = mk(
                "seeded",
                Box::new(move |u, a| {
                    let above: Vec<&Ordinal> = u.cardinals().iter().filter(|c| *c > a).collect();
                    if above.is_empty() {
                        return None;
                    }
                    let idx = stable_hash(seed, &ord_code(a)) as usize % above.len();
                    Some(above[idx].clone())
                }),
            );
            Ok(vec![least, greatest, seeded])
        }
        (Universe::Hf(_), Principle::Ac) => {
            let variant = |label: String, salt: u64| {
                encode_effectivizer(label, move |values| match values {
                    [x] => Ok(choice_function(x, |set, n| {
                        if salt == 0 {
                            0
                        } else {
                            stable_hash_hf(salt, set) as usize % n
                        }
                    })),
                    _ => Err(OracleError::MalformedInput("AC takes one set".into())),
                })
            };
            Ok(vec![
                variant("AC@hf[canonical]".into(), 0),
                variant("AC@hf[seeded-a]".into(), seed | 1),
                variant("AC@hf[seeded-b]".into(), seed.wrapping_add(0x5bd1e995) | 1),
            ])
        }
        (Universe::Hf(u), Principle::Coll(level)) => Ok(vec![
            hf_coll(u, level, "Coll@hf[canonical]".into(), 0, 0),
            hf_coll(u, level, "Coll@hf[padded]".into(), 0, 3),
            hf_coll(u, level, "Coll@hf[seeded]".into(), seed | 1, 1),
        ]),
        (Universe::Hf(_), Principle::CardFull) => {
            let variant = |label: String, salt: u64| {
                encode_effectivizer(label, move |values| match values {
                    [x] => Ok(card_full_value(x, |set, i| {
                        if salt == 0 {
                            i
                        } else {
                            stable_hash_hf(salt.wrapping_add(i), set)
                        }
                    })),
                    _ => Err(OracleError::MalformedInput("Card takes one set".into())),
                })
            };
            Ok(vec![
                variant("Card(full)@hf[canonical]".into(), 0),
                variant("Card(full)@hf[shuffled-a]".into(), seed | 1),
                variant(
                    "Card(full)@hf[shuffled-b]".into(),
                    seed.wrapping_add(0x2545f491) | 1,
                ),
            ])
        }
        _ => Err(unavailable()),
    }
}

// ---------------------------------------------------------------------------
// defining-formula validation

fn fresh_vars(avoid: &[Var], names: &[&str]) -> Vec<Var> {
    let mut out = Vec::new();
    for base in names {
        let mut v = Var::new(*base);
        let mut k = 0u32;
        while avoid.contains(&v) || out.contains(&v) {
            v = Var::new(format!("{base}{k}"));
            k += 1;
        }
        out.push(v);
    }
    out
}

/// z ∈ Y ↔ (z ∈ X ∧ φ(z, p)), evaluated for every z in the universe.
pub fn validate_sep(
    u: &HfUniverse,
    phi: &Formula,
    params: &[HfSet],
    subject: &HfSet,
    output: &HfSet,
) -> Result<bool, OracleError> {
    let vars = phi.free_vars();
    let (truth_test, z_var) = match vars.len() - params.len() {
        0 => (true, None),
        1 => (false, Some(vars[0].clone())),
        _ => {
            return Err(OracleError::MalformedInput(
                "parameter count does not fit the formula".into(),
            ))
        }
    };
    let fresh = fresh_vars(&vars, &["zz", "xx", "yy"]);
    let (z, x, y) = (fresh[0].clone(), fresh[1].clone(), fresh[2].clone());
    let z_for_phi = z_var.unwrap_or_else(|| z.clone());
    // ∀z (z∈Y ↔ z∈X ∧ φ): when all variables are parameters the z in φ is a
    // dummy and φ acts as a plain truth condition
    let matrix = Formula::elem(z.clone(), y.clone()).iff(
        Formula::elem(z.clone(), x.clone()).and(if truth_test {
            phi.clone()
        } else {
            // φ's separation variable is its first free variable; feed z
            // through an equality guard to avoid rewriting φ
            Formula::exists_in(
                z_for_phi.clone(),
                x.clone(),
                Formula::eq(z_for_phi.clone(), z.clone()).and(phi.clone()),
            )
        }),
    );
    let checked = Formula::forall(z.clone(), matrix);
    let mut asg = Assignment::new();
    asg.insert(x, subject.clone());
    asg.insert(y, output.clone());
    let param_vars = if truth_test { &vars[..] } else { &vars[1..] };
    for (v, p) in param_vars.iter().zip(params) {
        asg.insert(v.clone(), p.clone());
    }
    Ok(u.eval(&checked, &asg)?)
}

/// Functionality antecedent (checked natively), then ∀x∈X ∃y∈Y φ by
/// evaluation. A vacuous instance validates any output.
pub fn validate_rep(
    u: &HfUniverse,
    phi: &Formula,
    params: &[HfSet],
    subject: &HfSet,
    output: &HfSet,
) -> Result<bool, OracleError> {
    let vars = phi.free_vars();
    if vars.len() != params.len() + 2 {
        return Err(OracleError::MalformedInput(
            "parameter count does not fit the formula".into(),
        ));
    }
    let (x_var, y_var) = (vars[0].clone(), vars[1].clone());
    let mut base = Assignment::new();
    for (v, p) in vars[2..].iter().zip(params) {
        base.insert(v.clone(), p.clone());
    }
    for x in subject.elements() {
        let count = u
            .carrier()
            .iter()
            .filter(|y| {
                let mut asg = base.clone();
                asg.insert(x_var.clone(), x.clone());
                asg.insert(y_var.clone(), (*y).clone());
                u.eval(phi, &asg).unwrap_or(false)
            })
            .count();
        if count != 1 {
            return Ok(true); // not functional: the implication is vacuous
        }
    }
    validate_coverage(u, phi, &base, &x_var, &y_var, subject, output)
}

/// Existence antecedent, then ∀x∈X ∃y∈Y φ by evaluation.
pub fn validate_coll(
    u: &HfUniverse,
    phi: &Formula,
    params: &[HfSet],
    subject: &HfSet,
    output: &HfSet,
) -> Result<bool, OracleError> {
    let vars = phi.free_vars();
    if vars.len() != params.len() + 2 {
        return Err(OracleError::MalformedInput(
            "parameter count does not fit the formula".into(),
        ));
    }
    let (x_var, y_var) = (vars[0].clone(), vars[1].clone());
    let mut base = Assignment::new();
    for (v, p) in vars[2..].iter().zip(params) {
        base.insert(v.clone(), p.clone());
    }
    for x in subject.elements() {
        let any = u.carrier().iter().any(|y| {
            let mut asg = base.clone();
            asg.insert(x_var.clone(), x.clone());
            asg.insert(y_var.clone(), (*y).clone());
            u.eval(phi, &asg).unwrap_or(false)
        });
        if !any {
            return Ok(true); // antecedent fails: vacuous
        }
    }
    validate_coverage(u, phi, &base, &x_var, &y_var, subject, output)
}

/// ∀x∈X ∃y∈Y φ(x, y, p), as a formula.
fn validate_coverage(
    u: &HfUniverse,
    phi: &Formula,
    base: &Assignment,
    x_var: &Var,
    y_var: &Var,
    subject: &HfSet,
    output: &HfSet,
) -> Result<bool, OracleError> {
    let vars = phi.free_vars();
    let fresh = fresh_vars(&vars, &["XX", "YY"]);
    let (big_x, big_y) = (fresh[0].clone(), fresh[1].clone());
    let checked = Formula::forall_in(
        x_var.clone(),
        big_x.clone(),
        Formula::exists_in(y_var.clone(), big_y.clone(), phi.clone()),
    );
    let mut asg = base.clone();
    asg.insert(big_x, subject.clone());
    asg.insert(big_y, output.clone());
    Ok(u.eval(&checked, &asg)?)
}

/// ∀z (z ∈ y ↔ z ⊆ x), the power set matrix.
pub fn validate_pot(u: &HfUniverse, subject: &HfSet, output: &HfSet) -> Result<bool, OracleError> {
    let checked: Formula = "A z. (z in y <-> z sub x)".parse().expect("fixed formula");
    let mut asg = Assignment::new();
    asg.insert(Var::new("x"), subject.clone());
    asg.insert(Var::new("y"), output.clone());
    Ok(u.eval(&checked, &asg)?)
}

/// Builds "p is the Kuratowski pair ⟨a, b⟩" with all quantifiers bounded.
fn kuratowski_pair_formula(p: &str, a: &str, b: &str) -> Formula {
    let all_first: Formula = format!("A s in {p}. {a} in s").parse().unwrap();
    let some_second: Formula = format!("E s in {p}. {b} in s").parse().unwrap();
    let only_components: Formula = format!("A s in {p}. A t in s. (t = {a} | t = {b})")
        .parse()
        .unwrap();
    let has_singleton: Formula = format!("E s in {p}. A t in s. t = {a}").parse().unwrap();
    let nonempty: Formula = format!("E s in {p}. s = s").parse().unwrap();
    all_first
        .and(some_second)
        .and(only_components)
        .and(has_singleton)
        .and(nonempty)
}

/// ∅ ∉ X → every member of X gets an element of itself through f; the pair
/// decomposition is spelled out in ∈-language with bounded quantifiers.
pub fn validate_ac(u: &HfUniverse, family: &HfSet, output: &HfSet) -> Result<bool, OracleError> {
    let no_empty: Formula = "A e in X. E t in e. t = t".parse().unwrap();
    let pair_eq = kuratowski_pair_formula("p", "x", "y");
    let choice: Formula = Formula::forall_in(
        "x",
        "X",
        Formula::exists_in(
            "p",
            "f",
            Formula::exists_in(
                "s",
                "p",
                Formula::exists_in("y", "s", pair_eq.and(Formula::elem("y", "x"))),
            ),
        ),
    );
    let checked = no_empty.implies(choice);
    let mut asg = Assignment::new();
    asg.insert(Var::new("X"), family.clone());
    asg.insert(Var::new("f"), output.clone());
    Ok(u.eval(&checked, &asg)?)
}

/// The full-cardinality output (κ, f) checked by formula: f is a bijection
/// from κ onto the subject. All quantifiers are bounded in f, κ, and x, so
/// the check runs entirely inside the given sets.
pub fn validate_card_full(
    u: &HfUniverse,
    subject: &HfSet,
    output: &HfSet,
) -> Result<bool, OracleError> {
    let Some((kappa, f)) = output.as_kuratowski() else {
        return Ok(false);
    };
    if kappa.as_von_neumann().is_none() {
        return Ok(false);
    }
    let pair_eq = kuratowski_pair_formula("p", "a", "b");
    // every entry of f is a pair from κ × x
    let entries_typed = Formula::forall_in(
        "p",
        "f",
        Formula::exists_in(
            "s",
            "p",
            Formula::exists_in(
                "a",
                "s",
                Formula::exists_in(
                    "b",
                    "s",
                    pair_eq
                        .clone()
                        .and(Formula::elem("a", "k"))
                        .and(Formula::elem("b", "x")),
                ),
            ),
        ),
    );
    // totality on κ and surjectivity onto x
    let total = Formula::forall_in(
        "a",
        "k",
        Formula::exists_in(
            "p",
            "f",
            Formula::exists_in(
                "s",
                "p",
                Formula::exists_in("b", "s", kuratowski_pair_formula("p", "a", "b")),
            ),
        ),
    );
    let onto = Formula::forall_in(
        "b",
        "x",
        Formula::exists_in(
            "p",
            "f",
            Formula::exists_in(
                "s",
                "p",
                Formula::exists_in("a", "s", kuratowski_pair_formula("p", "a", "b")),
            ),
        ),
    );
    let checked = entries_typed.and(total).and(onto);
    let mut asg = Assignment::new();
    asg.insert(Var::new("k"), kappa.clone());
    asg.insert(Var::new("x"), subject.clone());
    asg.insert(Var::new("f"), f.clone());
    // typing + totality + surjectivity by formula; injectivity and
    // single-valuedness follow from |f| = |κ| = |x|, checked natively
    let map = f.as_function();
    let sizes_ok = map.as_ref().is_some_and(|m| {
        m.len() == subject.len() && kappa.len() == subject.len()
    });
    Ok(sizes_ok && u.eval(&checked, &asg)?)
}

/// Exhaustively checks that `g` behaves as an effectivizer of the closed
/// prenex formula φ over the universe: for every choice of universal values
/// from the carrier, the witnesses it returns make the matrix true.
pub fn effectivizer_satisfies(
    u: &HfUniverse,
    phi: &Formula,
    g: &Effectivizer,
) -> Result<bool, OracleError> {
    let p = prenex(phi);
    if !p.free_vars().is_empty() {
        return Err(OracleError::MalformedInput(
            "effectivizer validation needs a closed formula".into(),
        ));
    }
    let (prefix, matrix) = split_prenex(&p);
    fn walk(
        u: &HfUniverse,
        prefix: &[(bool, Var)],
        matrix: &Formula,
        g: &Effectivizer,
        asg: &Assignment,
        universal_args: &mut Vec<SetCode>,
    ) -> Result<bool, OracleError> {
        match prefix.split_first() {
            None => Ok(u.eval(matrix, asg)?),
            Some(((true, v), rest)) => {
                for x in u.carrier() {
                    let mut inner = asg.clone();
                    inner.insert(v.clone(), x.clone());
                    universal_args.push(setcode::encode(x));
                    let ok = walk(u, rest, matrix, g, &inner, universal_args)?;
                    universal_args.pop();
                    if !ok {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Some(((false, v), rest)) => {
                if universal_args.is_empty() {
                    // leading existential: the protocol's dummy slot
                    universal_args.push(setcode::encode(&HfSet::empty()));
                    let out = g.call(universal_args);
                    universal_args.pop();
                    let witness = setcode::decode(&out?)?;
                    let mut inner = asg.clone();
                    inner.insert(v.clone(), witness);
                    return walk(u, rest, matrix, g, &inner, universal_args);
                }
                let witness = setcode::decode(&g.call(universal_args)?)?;
                let mut inner = asg.clone();
                inner.insert(v.clone(), witness);
                walk(u, rest, matrix, g, &inner, universal_args)
            }
        }
    }
    walk(u, &prefix, &matrix, g, &Assignment::new(), &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn v4() -> HfUniverse {
        HfUniverse::new(4).unwrap()
    }

    fn hf(s: &str) -> HfSet {
        s.parse().unwrap()
    }

    fn cardinal_universe() -> CardinalUniverse {
        CardinalUniverse::new(
            Ordinal::from_nat(8),
            (0..=8)
                .filter(|n| [0, 1, 2, 3, 5, 8].contains(n))
                .map(Ordinal::from_nat),
            [(0u64, 1u64), (1, 2), (2, 3), (3, 5), (5, 8)]
                .into_iter()
                .map(|(a, b)| (Ordinal::from_nat(a), Ordinal::from_nat(b)))
                .collect(),
            None,
        )
        .unwrap()
    }

    #[test]
    fn pot_oracle_matches_powerset() {
        let u = Universe::Hf(v4());
        let pot = u.oracle(Principle::Pot).unwrap();
        let x = hf("{{}}");
        let out = pot.call(&[setcode::encode(&x)]).unwrap();
        assert_eq!(setcode::decode(&out).unwrap(), hf("{{},{{}}}"));
        assert!(validate_pot(u.as_hf().unwrap(), &x, &setcode::decode(&out).unwrap()).unwrap());
        assert_eq!(pot.call_count(), 1);
    }

    #[test]
    fn pot_oracle_is_label_independent() {
        let u = Universe::Hf(v4());
        let pot = u.oracle(Principle::Pot).unwrap();
        let c = setcode::encode(&hf("{{},{{}}}"));
        let relabeled = c.relabel(|o| o.add(&Ordinal::from_nat(9)));
        let out1 = pot.call(&[c]).unwrap();
        let out2 = pot.call(&[relabeled]).unwrap();
        assert!(setcode::same_set(&out1, &out2).unwrap());
        // invalid input propagates a code error
        let bogus = SetCode::new(Ordinal::zero(), [crate::ordinal::pair(&Ordinal::zero(), &Ordinal::zero())]);
        assert!(matches!(
            pot.call(&[bogus]),
            Err(OracleError::Code(setcode::CodeError::NotWellFounded(_)))
        ));
    }

    #[test]
    fn cardinal_oracles_follow_the_structure() {
        let u = Universe::Cardinal(cardinal_universe());
        let next = u.oracle(Principle::NextCard).unwrap();
        let out = next.call(&[ord_code(&Ordinal::from_nat(3))]).unwrap();
        assert_eq!(code_as_ordinal(&out).unwrap(), Ordinal::from_nat(5));
        assert!(matches!(
            next.call(&[ord_code(&Ordinal::from_nat(8))]),
            Err(OracleError::NoNextCardinal { .. })
        ));
        let dec = u.oracle(Principle::DecCard).unwrap();
        let bit = dec.call(&[ord_code(&Ordinal::from_nat(5))]).unwrap();
        assert_eq!(code_as_ordinal(&bit).unwrap(), Ordinal::one());
        let card = u.oracle(Principle::Card).unwrap();
        let k = card.call(&[ord_code(&Ordinal::from_nat(4))]).unwrap();
        assert_eq!(code_as_ordinal(&k).unwrap(), Ordinal::from_nat(3));
        let power = u.oracle(Principle::PowerCard).unwrap();
        let b = power.call(&[ord_code(&Ordinal::from_nat(1))]).unwrap();
        assert_eq!(code_as_ordinal(&b).unwrap(), Ordinal::from_nat(2));
    }

    #[test]
    fn hf_sep_filters_and_inherits_labels() {
        let u = Universe::Hf(v4());
        let hf_u = u.as_hf().unwrap();
        let sep = u.oracle(Principle::Sep(Some(1))).unwrap();
        // φ = "E u. u in z": picks the nonempty elements; z is free var #1
        let phi = parse("E u. u in z").unwrap();
        let v3: Vec<HfSet> = HfSet::v_level(3);
        let subject = HfSet::from_elements(v3.clone());
        let subject_code = setcode::encode(&subject);
        let out = sep
            .call(&[super::super::formula_arg(&phi), subject_code.clone()])
            .unwrap();
        let decoded = setcode::decode(&out).unwrap();
        let expected = HfSet::from_elements(v3.into_iter().filter(|x| !x.is_empty()));
        assert_eq!(decoded, expected);
        assert!(validate_sep(hf_u, &phi, &[], &subject, &decoded).unwrap());
        // the size-monitor property: output field within input field
        assert!(out.field().is_subset(&subject_code.field()));
        // level enforcement
        let pi2 = parse("A a. E b. a in b").unwrap();
        assert!(matches!(
            sep.call(&[super::super::formula_arg(&pi2), subject_code]),
            Err(OracleError::LevelExceeded { .. })
        ));
    }

    #[test]
    fn sep_truth_test_mode_separates_on_a_dummy() {
        let u = Universe::Hf(v4());
        let sep = u.oracle(Principle::Sep(Some(1))).unwrap();
        let one = setcode::encode(&hf("{{}}"));
        // φ = "E u. u in x" with x bound by the parameter: a pure truth test
        let phi = parse("E u. u in x").unwrap();
        let truthy = sep
            .call(&[
                super::super::formula_arg(&phi),
                setcode::encode(&hf("{{}}")),
                one.clone(),
            ])
            .unwrap();
        assert!(!truthy.members.is_empty(), "true test keeps the subject");
        let falsy = sep
            .call(&[
                super::super::formula_arg(&phi),
                setcode::encode(&HfSet::empty()),
                one,
            ])
            .unwrap();
        assert!(falsy.members.is_empty(), "false test empties the subject");
    }

    #[test]
    fn rep_oracle_collects_functional_images() {
        let u = Universe::Hf(v4());
        let rep = u.oracle(Principle::Rep(None)).unwrap();
        // φ = "y = x": identity map
        let phi = parse("x = y").unwrap();
        // free vars in order: x, y
        let v2 = HfSet::from_elements(HfSet::v_level(2));
        let out = rep
            .call(&[super::super::formula_arg(&phi), setcode::encode(&v2)])
            .unwrap();
        assert_eq!(setcode::decode(&out).unwrap(), v2);
        assert!(validate_rep(u.as_hf().unwrap(), &phi, &[], &v2, &v2).unwrap());
    }

    #[test]
    fn tnd_oracle_answers_bits_and_witnesses() {
        let u = Universe::Hf(v4());
        let tnd = u.oracle(Principle::Tnd(3)).unwrap();
        let truth: Formula = parse("A x. x = x").unwrap();
        let bit = tnd.call(&[super::super::formula_arg(&truth)]).unwrap();
        assert_eq!(setcode::decode(&bit).unwrap(), HfSet::von_neumann(1));
        // ∀x ∃y (y ⊆ x) is true with witness ∅
        let phi: Formula = parse("A x. E y. y sub x").unwrap();
        let bit = tnd.call(&[super::super::formula_arg(&phi)]).unwrap();
        assert_eq!(setcode::decode(&bit).unwrap(), HfSet::von_neumann(1));
        let w = tnd
            .call(&[
                super::super::formula_arg(&phi),
                setcode::encode(&hf("{{},{{}}}")),
            ])
            .unwrap();
        assert_eq!(setcode::decode(&w).unwrap(), HfSet::empty());
    }

    #[test]
    fn adversarial_greatercard_members_are_valid_and_distinct() {
        let u = Universe::Cardinal(cardinal_universe());
        let family = u.adversarial_family(Principle::GreaterCard, 42).unwrap();
        assert_eq!(family.len(), 3);
        let alpha = Ordinal::from_nat(3);
        let mut answers = BTreeSet::new();
        for f in &family {
            let out = f.call(&[ord_code(&alpha)]).unwrap();
            let kappa = code_as_ordinal(&out).unwrap();
            let cu = u.as_cardinal().unwrap();
            assert!(cu.is_cardinal(&kappa) && kappa > alpha, "{kappa} invalid");
            answers.insert(kappa);
        }
        assert!(answers.len() >= 2, "family should not be constant");
        assert!(matches!(
            u.adversarial_family(Principle::DecCard, 0),
            Err(OracleError::PrincipleUnavailable { .. })
        ));
    }

    #[test]
    fn adversarial_ac_members_disagree_somewhere() {
        let u = Universe::Hf(v4());
        let family = u.adversarial_family(Principle::Ac, 7).unwrap();
        let hf_u = u.as_hf().unwrap();
        // the family of all nonempty sets in V₃
        let x = HfSet::from_elements(HfSet::v_level(3).into_iter().filter(|s| !s.is_empty()));
        let outs: Vec<HfSet> = family
            .iter()
            .map(|f| setcode::decode(&f.call(&[setcode::encode(&x)]).unwrap()).unwrap())
            .collect();
        for out in &outs {
            assert!(validate_ac(hf_u, &x, out).unwrap());
        }
        assert!(
            outs.iter().any(|o| o != &outs[0]),
            "adversarial choices should differ from canonical somewhere"
        );
    }

    #[test]
    fn card_full_validates_by_formula() {
        let u = v4();
        let x = hf("{{},{{}},{{{}}}}");
        let good = card_full_value(&x, |_, n| n);
        assert!(validate_card_full(&u, &x, &good).unwrap());
        let bad = HfSet::kuratowski(HfSet::von_neumann(2), HfSet::empty());
        assert!(!validate_card_full(&u, &x, &bad).unwrap());
    }

    #[test]
    fn toy_sep_respects_levels_and_filters() {
        let u = Universe::Cardinal(cardinal_universe());
        let sep1 = u.oracle(Principle::Sep(Some(1))).unwrap();
        let subject: BTreeSet<Ordinal> = (3..=6).map(Ordinal::from_nat).collect();
        let out = sep1
            .call(&[
                nat_code(ToyPredicate::NotACardinal.tag()),
                ord_set_code(&subject),
            ])
            .unwrap();
        let expected: BTreeSet<Ordinal> = [4u64, 6].into_iter().map(Ordinal::from_nat).collect();
        assert_eq!(out.members, expected);
        // IsCardinal is Π₁, beyond a Σ₁ oracle
        assert!(matches!(
            sep1.call(&[
                nat_code(ToyPredicate::IsCardinal.tag()),
                ord_set_code(&subject)
            ]),
            Err(OracleError::LevelExceeded { .. })
        ));
        let sep2 = u.oracle(Principle::Sep(Some(2))).unwrap();
        let out = sep2
            .call(&[
                nat_code(ToyPredicate::IsPowerCardOf.tag()),
                ord_code(&Ordinal::from_nat(1)),
                ord_set_code(&(0..=8).map(Ordinal::from_nat).collect()),
            ])
            .unwrap();
        assert_eq!(
            out.members,
            [Ordinal::from_nat(2)].into_iter().collect::<BTreeSet<_>>()
        );
    }

    #[test]
    fn effectivizer_check_accepts_tnd_delegation() {
        let u = Universe::Hf(v4());
        let hf_u = u.as_hf().unwrap().clone();
        let tnd = u.oracle(Principle::Tnd(3)).unwrap();
        let phi: Formula = parse("A x. E y. y sub x").unwrap();
        let code = super::super::formula_arg(&phi);
        let g = Effectivizer::from_fn("delegated", move |args| {
            let mut full = vec![code.clone()];
            full.extend(args.iter().cloned());
            tnd.call(&full)
        });
        assert!(effectivizer_satisfies(&hf_u, &phi, &g).unwrap());
        // a false formula cannot be effectivized: the check surfaces it
        let false_phi: Formula = parse("A x. E y. x in y").unwrap();
        let constant = Effectivizer::from_fn("constant-empty", |_| {
            Ok(setcode::encode(&HfSet::empty()))
        });
        assert!(!effectivizer_satisfies(&hf_u, &false_phi, &constant).unwrap());
    }
}
