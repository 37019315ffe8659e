//! Reductions over hereditarily finite universes: the scheme principles,
//! the power set axiom, truth, and set cardinality.
//!
//! Scheme oracles bind parameters positionally to a formula's free
//! variables, so the trick formulas built here pin their free-variable order
//! with a leading chain of reflexive equalities where the natural
//! first-occurrence order would not match the oracle convention.

use std::collections::BTreeMap;

use crate::formula::{Formula, GodelIndex, Var};
use crate::setcode::{self, HfSet, SetCode};
use crate::universe::{
    formula_arg, validate_coll, validate_pot, validate_rep,
    validate_sep, Effectivizer, HfUniverse, OracleError, Principle, Universe,
};

use super::{require_hf, target_variants, universe_label, CheckOutput, ReductionError, ReductionReport};

/// Prepends reflexive equalities so that the formula's free variables start
/// with `leading`, in that order. Logically inert; the oracle's positional
/// parameter binding is what cares.
fn pin_free_order(leading: &[Var], body: Formula) -> Formula {
    let mut out = body;
    for v in leading.iter().rev() {
        out = Formula::Eq(v.clone(), v.clone()).and(out);
    }
    out
}

/// Parameter values arranged in the formula's free-variable order, skipping
/// the first `reserved` variables (the scheme's own slots).
fn params_in_free_order(
    formula: &Formula,
    reserved: usize,
    values: &BTreeMap<Var, HfSet>,
) -> Result<Vec<HfSet>, ReductionError> {
    formula.free_vars()[reserved..]
        .iter()
        .map(|v| {
            values.get(v).cloned().ok_or_else(|| {
                ReductionError::Other(format!("no value supplied for parameter {v}"))
            })
        })
        .collect()
}

fn fresh_named(avoid: &[Var], base: &str) -> Var {
    let mut v = Var::new(base);
    let mut k = 0u32;
    while avoid.contains(&v) {
        v = Var::new(format!("{base}{k}"));
        k += 1;
    }
    v
}

fn as_bit(code: &SetCode) -> Result<bool, ReductionError> {
    match setcode::decode(code)?.as_von_neumann() {
        Some(0) => Ok(false),
        Some(1) => Ok(true),
        _ => Err(ReductionError::Other("oracle answer is not a bit".into())),
    }
}

// ---------------------------------------------------------------------------
// truth and separation

/// Decide a Σₙ statement with one separation call: separate from {∅} with
/// the statement as a parameterized truth condition; the answer is the bit
/// "result is nonempty".
pub fn truth_from_sep(
    sep: &Effectivizer,
    phi: &Formula,
    params: &[HfSet],
) -> Result<bool, ReductionError> {
    let mut args = vec![formula_arg(phi)];
    args.extend(params.iter().map(setcode::encode));
    args.push(setcode::encode(&HfSet::singleton(HfSet::empty())));
    let out = sep.call(&args)?;
    Ok(!out.members.is_empty())
}

/// Separation from a truth oracle: run through the subject, ask the truth
/// bit for each element, collect the positive ones. Exactly |subject| calls.
pub fn sep_from_truth(
    truth: &Effectivizer,
    phi: &Formula,
    params: &[HfSet],
    subject: &HfSet,
) -> Result<HfSet, ReductionError> {
    let mut out = HfSet::empty();
    for c in subject.elements() {
        let mut args = vec![formula_arg(phi)];
        args.push(setcode::encode(c));
        args.extend(params.iter().map(setcode::encode));
        if as_bit(&truth.call(&args)?)? {
            out.insert(c.clone());
        }
    }
    Ok(out)
}

/// From a Σₙ-TND oracle and a statement it confirms true, the delegated
/// effectivizer G(a₀..aⱼ) := F(⌈φ⌉, a₀..aⱼ). A false statement is a contract
/// violation surfaced immediately.
pub fn effectivizer_from_tnd(
    tnd: &Effectivizer,
    phi: &Formula,
) -> Result<Effectivizer, ReductionError> {
    let code = formula_arg(phi);
    if !as_bit(&tnd.call(&[code.clone()])?)? {
        return Err(ReductionError::FormulaFalse);
    }
    let inner = tnd.clone();
    Ok(Effectivizer::from_fn(
        format!("delegated({})", tnd.name()),
        move |args| {
            let mut full = vec![code.clone()];
            full.extend(args.iter().cloned());
            inner.call(&full)
        },
    ))
}

// ---------------------------------------------------------------------------
// cardinality from the power set oracle

/// Is `rel` a set of Kuratowski pairs that strictly well-orders `domain`?
/// On a finite domain: pairs over the domain, irreflexive, transitive, and
/// total.
fn well_orders(domain: &HfSet, rel: &HfSet) -> bool {
    let mut edges: Vec<(HfSet, HfSet)> = Vec::new();
    for p in rel.elements() {
        match p.as_kuratowski() {
            Some((a, b)) if domain.contains(&a) && domain.contains(&b) && a != b => {
                edges.push((a, b))
            }
            _ => return false,
        }
    }
    let has = |a: &HfSet, b: &HfSet| edges.iter().any(|(x, y)| x == a && y == b);
    for (a, b) in &edges {
        for (b2, c) in &edges {
            if b == b2 && !has(a, c) {
                return false;
            }
        }
    }
    let elems: Vec<&HfSet> = domain.elements().collect();
    for (i, a) in elems.iter().enumerate() {
        for b in &elems[i + 1..] {
            if !has(a, b) && !has(b, a) {
                return false;
            }
        }
    }
    true
}

/// Cardinality of a coded set with exactly one power set call: obtain
/// 𝔓(a×a), find the relations that well-order a, and return the minimum of
/// their order types. On finite sets every well-order of a has type |a|.
pub fn card_from_pot(pot: &Effectivizer, a_code: &SetCode) -> Result<HfSet, ReductionError> {
    let a = setcode::decode(a_code)?;
    let product = setcode::product_code(a_code, a_code)?;
    let p = setcode::decode(&pot.call(&[product])?)?;
    let mut best: Option<u64> = None;
    for rel in p.elements() {
        if well_orders(&a, rel) {
            // the order type of a strict linear order of a finite set is the
            // number of points it orders
            let ty = a.len() as u64;
            best = Some(best.map_or(ty, |b: u64| b.min(ty)));
        }
    }
    match best {
        Some(ty) => Ok(HfSet::von_neumann(ty)),
        None => Err(ReductionError::Other(
            "the power set contained no well-ordering of the subject".into(),
        )),
    }
}

/// |𝔓(a)| with one power set call, reading the cardinality off the output
/// code's index image as in the ordinal-cardinality reduction; in the
/// hereditarily finite world an ordinal is its own cardinality.
pub fn powercard_from_pot(pot: &Effectivizer, a_code: &SetCode) -> Result<HfSet, ReductionError> {
    let p_code = pot.call(&[a_code.clone()])?;
    let gamma = p_code
        .edges()
        .iter()
        .filter(|(_, parent)| *parent == p_code.root)
        .count() as u64;
    Ok(HfSet::von_neumann(gamma))
}

/// The least cardinal above |a|, from one power set call on a×a: the
/// supremum of order types of well-orders found inside 𝔓(a×a), plus one.
/// Every subset of a is well-ordered by some member, so the supremum is |a|.
pub fn nextcard_from_pot(pot: &Effectivizer, a_code: &SetCode) -> Result<HfSet, ReductionError> {
    let a = setcode::decode(a_code)?;
    let product = setcode::product_code(a_code, a_code)?;
    let p = setcode::decode(&pot.call(&[product])?)?;
    let subsets: Vec<HfSet> = a.powerset().elements().cloned().collect();
    let mut sup = 0u64;
    for rel in p.elements() {
        for s in &subsets {
            if rel.elements().all(|e| {
                e.as_kuratowski()
                    .is_some_and(|(x, y)| s.contains(&x) && s.contains(&y))
            }) && well_orders(s, rel)
            {
                sup = sup.max(s.len() as u64);
            }
        }
    }
    Ok(HfSet::von_neumann(sup + 1))
}

// ---------------------------------------------------------------------------
// set cardinality vs ordinal cardinality

/// An ordinal's cardinality through the full set-cardinality oracle: one
/// call, keep the cardinal component of the (κ, f) answer.
pub fn ordcard_from_card(
    card_full: &Effectivizer,
    alpha: &HfSet,
) -> Result<HfSet, ReductionError> {
    let out = setcode::decode(&card_full.call(&[setcode::encode(alpha)])?)?;
    let (kappa, _bijection) = out
        .as_kuratowski()
        .ok_or_else(|| ReductionError::Other("full Card answer is not a (κ, f) pair".into()))?;
    Ok(kappa)
}

/// A set's cardinality through the ordinal-cardinality oracle: the code of
/// the set embeds an injection into the ordinals; the order type of its
/// image is a finite ordinal with the same cardinality.
pub fn card_from_ordcard(
    ordcard: &Effectivizer,
    a_code: &SetCode,
) -> Result<HfSet, ReductionError> {
    setcode::decode(a_code)?; // validity of the input code
    let gamma = a_code
        .edges()
        .iter()
        .filter(|(_, parent)| *parent == a_code.root)
        .count() as u64;
    Ok(setcode::decode(
        &ordcard.call(&[setcode::encode(&HfSet::von_neumann(gamma))])?,
    )?)
}

// ---------------------------------------------------------------------------
// separation, replacement, collection

/// Separation from replacement: map each element to itself when it
/// satisfies the condition and to the sentinel X otherwise, then delete the
/// sentinel from the image. Membership of the sentinel is decided
/// extensionally, the code-level analogue of the same-set test.
pub fn sep_from_rep(
    rep: &Effectivizer,
    phi: &Formula,
    params: &[HfSet],
    subject: &HfSet,
) -> Result<HfSet, ReductionError> {
    let frees = phi.free_vars();
    if frees.len() != params.len() + 1 {
        return Err(ReductionError::Other(
            "separation formula needs exactly one open variable".into(),
        ));
    }
    let z = frees[0].clone();
    let y = fresh_named(&frees, "yy");
    let sentinel = fresh_named(&frees, "XX");
    let psi_core = phi
        .clone()
        .and(Formula::Eq(y.clone(), z.clone()))
        .or(phi.clone().not().and(Formula::Eq(y.clone(), sentinel.clone())));
    let psi = pin_free_order(&[z, y], psi_core);
    let mut values: BTreeMap<Var, HfSet> = BTreeMap::new();
    for (v, p) in frees[1..].iter().zip(params) {
        values.insert(v.clone(), p.clone());
    }
    values.insert(sentinel, subject.clone());
    let mut args = vec![formula_arg(&psi)];
    for p in params_in_free_order(&psi, 2, &values)? {
        args.push(setcode::encode(&p));
    }
    args.push(setcode::encode(subject));
    let image = setcode::decode(&rep.call(&args)?)?;
    Ok(HfSet::from_elements(
        image.elements().filter(|m| *m != subject).cloned(),
    ))
}

/// Truth of a statement through the separation oracle, used as the stage
/// test inside the replacement and collection reductions.
fn sep_truth(
    sep: &Effectivizer,
    statement: &Formula,
    values: &BTreeMap<Var, HfSet>,
) -> Result<bool, ReductionError> {
    let params = params_in_free_order(statement, 0, values)?;
    truth_from_sep(sep, statement, &params)
}

/// Replacement from separation and power set: verify functionality through
/// the separation oracle, climb the cumulative stages with the power set
/// oracle until one covers the image, then separate the image out of that
/// stage.
pub fn rep_from_sep_pot(
    sep: &Effectivizer,
    pot: &Effectivizer,
    phi: &Formula,
    params: &[HfSet],
    subject: &HfSet,
    stage_cap: usize,
) -> Result<HfSet, ReductionError> {
    let frees = phi.free_vars();
    if frees.len() != params.len() + 2 {
        return Err(ReductionError::Other(
            "replacement formula needs two open variables".into(),
        ));
    }
    let (x, y) = (frees[0].clone(), frees[1].clone());
    let mut values: BTreeMap<Var, HfSet> = BTreeMap::new();
    for (v, p) in frees[2..].iter().zip(params) {
        values.insert(v.clone(), p.clone());
    }
    let big_x = fresh_named(&frees, "XX");
    let stage_var = fresh_named(&frees, "VV");
    values.insert(big_x.clone(), subject.clone());

    // ∀x∈X ∃y (φ ∧ ∀y2 (φ[y:=y2] → y2 = y)), the functionality antecedent
    let y2 = fresh_named(&frees, "yy");
    let unique = Formula::forall(
        y2.clone(),
        phi.rename_free(&y, &y2)
            .implies(Formula::Eq(y2.clone(), y.clone())),
    );
    let functional = Formula::forall_in(
        x.clone(),
        big_x.clone(),
        Formula::exists(y.clone(), phi.clone().and(unique)),
    );
    if !sep_truth(sep, &functional, &values)? {
        return Err(ReductionError::NotFunctional);
    }

    // climb stages until ∀x∈X ∃y∈V φ holds
    let covered = Formula::forall_in(
        x.clone(),
        big_x.clone(),
        Formula::exists_in(y.clone(), stage_var.clone(), phi.clone()),
    );
    let mut stage = HfSet::empty();
    for _ in 0..=stage_cap {
        values.insert(stage_var.clone(), stage.clone());
        if sep_truth(sep, &covered, &values)? {
            // separate the image out of the covering stage:
            // {y ∈ V : ∃x∈X φ(x, y, p)}
            let selector = pin_free_order(
                &[y.clone()],
                Formula::exists_in(x.clone(), big_x.clone(), phi.clone()),
            );
            let mut args = vec![formula_arg(&selector)];
            for p in params_in_free_order(&selector, 1, &values)? {
                args.push(setcode::encode(&p));
            }
            args.push(setcode::encode(&stage));
            return Ok(setcode::decode(&sep.call(&args)?)?);
        }
        stage = setcode::decode(&pot.call(&[setcode::encode(&stage)])?)?;
    }
    Err(ReductionError::Other(
        "no cumulative stage covered the image".into(),
    ))
}

/// Collection from replacement, by the effective Scott trick: map each x to
/// the set of its witnesses inside the first cumulative stage containing
/// one, a functional assignment, then flatten the image. The stage list
/// enters as formula parameters; finite cumulative stages are machine-
/// computable, no oracle needed for them.
pub fn coll_from_rep(
    rep: &Effectivizer,
    phi: &Formula,
    params: &[HfSet],
    subject: &HfSet,
    stages: &[HfSet],
) -> Result<HfSet, ReductionError> {
    let frees = phi.free_vars();
    if frees.len() != params.len() + 2 {
        return Err(ReductionError::Other(
            "collection formula needs two open variables".into(),
        ));
    }
    let (x, y) = (frees[0].clone(), frees[1].clone());
    let big_y = fresh_named(&frees, "YY");
    let stage_vars: Vec<Var> = (0..stages.len())
        .map(|i| fresh_named(&frees, &format!("VV{i}")))
        .collect();

    // disjunct n: ∃y∈Vₙ φ ∧ (∀m<n ¬∃y∈Vₘ φ) ∧ Y = {y ∈ Vₙ : φ}
    let mut disjuncts: Vec<Formula> = Vec::new();
    for n in 0..stages.len() {
        let mut clause = Formula::exists_in(y.clone(), stage_vars[n].clone(), phi.clone());
        for m in 0..n {
            clause = clause.and(
                Formula::exists_in(y.clone(), stage_vars[m].clone(), phi.clone()).not(),
            );
        }
        let y_def = Formula::forall_in(
            y.clone(),
            big_y.clone(),
            Formula::elem(y.clone(), stage_vars[n].clone()).and(phi.clone()),
        )
        .and(Formula::forall_in(
            y.clone(),
            stage_vars[n].clone(),
            phi.clone().implies(Formula::elem(y.clone(), big_y.clone())),
        ));
        disjuncts.push(clause.and(y_def));
    }
    let body = disjuncts
        .into_iter()
        .reduce(|a, b| a.or(b))
        .expect("at least one stage");
    let mut leading = vec![x.clone(), big_y.clone()];
    leading.extend(stage_vars.iter().cloned());
    let scott = pin_free_order(&leading, body);

    let mut values: BTreeMap<Var, HfSet> = BTreeMap::new();
    for (v, p) in frees[2..].iter().zip(params) {
        values.insert(v.clone(), p.clone());
    }
    for (v, s) in stage_vars.iter().zip(stages) {
        values.insert(v.clone(), s.clone());
    }
    let mut args = vec![formula_arg(&scott)];
    for p in params_in_free_order(&scott, 2, &values)? {
        args.push(setcode::encode(&p));
    }
    args.push(setcode::encode(subject));
    let packaged = setcode::decode(&rep.call(&args)?)?;
    Ok(packaged.union_all())
}

/// Collection from separation and power set: for each element, climb the
/// stages until the separation oracle confirms a witness, separate the
/// witness set out of that stage, and union the results.
pub fn coll_from_sep_pot(
    sep: &Effectivizer,
    pot: &Effectivizer,
    phi: &Formula,
    params: &[HfSet],
    subject: &HfSet,
    stage_cap: usize,
) -> Result<HfSet, ReductionError> {
    let frees = phi.free_vars();
    if frees.len() != params.len() + 2 {
        return Err(ReductionError::Other(
            "collection formula needs two open variables".into(),
        ));
    }
    let (x, y) = (frees[0].clone(), frees[1].clone());
    let stage_var = fresh_named(&frees, "VV");
    let witness_exists = Formula::exists_in(y.clone(), stage_var.clone(), phi.clone());

    let mut stages: Vec<HfSet> = vec![HfSet::empty()];
    let mut out = HfSet::empty();
    'subject: for xv in subject.elements() {
        let mut values: BTreeMap<Var, HfSet> = BTreeMap::new();
        for (v, p) in frees[2..].iter().zip(params) {
            values.insert(v.clone(), p.clone());
        }
        values.insert(x.clone(), xv.clone());
        for i in 0.. {
            if i >= stages.len() {
                if i > stage_cap {
                    // no witness anywhere: the collection antecedent fails
                    return Ok(HfSet::empty());
                }
                let next = setcode::decode(&pot.call(&[setcode::encode(&stages[i - 1])])?)?;
                stages.push(next);
            }
            values.insert(stage_var.clone(), stages[i].clone());
            if sep_truth(sep, &witness_exists, &values)? {
                let selector = pin_free_order(&[y.clone()], phi.clone());
                let mut args = vec![formula_arg(&selector)];
                for p in params_in_free_order(&selector, 1, &values)? {
                    args.push(setcode::encode(&p));
                }
                args.push(setcode::encode(&stages[i]));
                let sx = setcode::decode(&sep.call(&args)?)?;
                out = out.union(&sx);
                continue 'subject;
            }
            if i > stage_cap {
                return Ok(HfSet::empty());
            }
        }
    }
    Ok(out)
}

fn is_powerset_of(candidate: &HfSet, x: &HfSet) -> bool {
    candidate == &x.powerset()
}

/// Power set from replacement: "y is the power set of x" is functional, so
/// one replacement call over the singleton {x} yields a set containing
/// 𝔓(x); select it by the power set check, which is machine-decidable.
pub fn pot_from_rep(rep: &Effectivizer, x_code: &SetCode) -> Result<HfSet, ReductionError> {
    let x = setcode::decode(x_code)?;
    let psi_core = Formula::forall(
        "zz",
        Formula::elem("zz", "yy").iff(Formula::subset("zz", "xx")),
    );
    let psi = pin_free_order(&[Var::new("xx"), Var::new("yy")], psi_core);
    let singleton = HfSet::singleton(x.clone());
    let out = setcode::decode(&rep.call(&[formula_arg(&psi), setcode::encode(&singleton)])?)?;
    let found = out.elements().find(|y| is_powerset_of(y, &x)).cloned();
    found.ok_or_else(|| ReductionError::Other("replacement image contained no power set".into()))
}

// ---------------------------------------------------------------------------
// exhaustive checkers

type Check = Result<CheckOutput, ReductionError>;

/// Condition formulas (one open variable plus parameters) the scheme
/// checkers run with.
fn separation_formulas() -> Vec<(Formula, usize)> {
    // (formula, number of parameters)
    vec![
        ("~ z = z".parse().unwrap(), 0),
        ("z = z".parse().unwrap(), 0),
        ("E u. u in z".parse().unwrap(), 0),
        ("z in p".parse().unwrap(), 1),
    ]
}

/// Mapping formulas (two open variables x, y in that order) for replacement
/// and collection.
fn mapping_formulas() -> Vec<Formula> {
    let singleton_map = pin_free_order(
        &[Var::new("x"), Var::new("y")],
        Formula::forall_in("u", "y", Formula::eq("u", "x"))
            .and(Formula::exists_in("u", "y", Formula::eq("u", "x"))),
    );
    vec!["x = y".parse().unwrap(), singleton_map]
}

fn coverage_formulas() -> Vec<Formula> {
    vec![
        "x in y".parse().unwrap(),
        "x sub y".parse().unwrap(),
        "x = y".parse().unwrap(),
    ]
}

fn param_samples(u: &HfUniverse) -> Vec<HfSet> {
    vec![HfSet::empty(), u.carrier().last().cloned().unwrap_or_default()]
}

pub(super) fn check_truth_from_sep(u: &Universe, _seed: u64) -> Check {
    let hf = require_hf(u, "truth_from_sep")?;
    let sep = u.oracle(Principle::Sep(None))?;
    let mut report = ReductionReport::new("truth_from_sep", universe_label(u), sep.name());
    // a corpus of enumerated formulas with at most one free variable
    let mut corpus: Vec<Formula> = Vec::new();
    let mut idx = 0u64;
    while corpus.len() < 200 {
        let f = crate::formula::ungodel(GodelIndex(idx));
        if f.free_vars().len() <= 1 {
            corpus.push(f);
        }
        idx += 1;
    }
    let sample = param_samples(hf);
    for phi in &corpus {
        let params: Vec<Vec<HfSet>> = if phi.free_vars().is_empty() {
            vec![vec![]]
        } else {
            sample.iter().map(|p| vec![p.clone()]).collect()
        };
        for ps in params {
            sep.reset_log();
            let got = truth_from_sep(&sep, phi, &ps)?;
            let mut asg = crate::formula::Assignment::new();
            for (v, p) in phi.free_vars().iter().zip(&ps) {
                asg.insert(v.clone(), p.clone());
            }
            let want = hf.eval(phi, &asg).map_err(OracleError::from)?;
            if got != want {
                report
                    .failures
                    .push(format!("{phi}: bit {got}, truth {want}"));
            }
            if sep.call_count() != 1 {
                report
                    .failures
                    .push(format!("{phi}: {} calls, contract is one", sep.call_count()));
            }
            report.inputs_checked += 1;
            report.max_calls = report.max_calls.max(sep.call_count());
        }
    }
    Ok(CheckOutput::Reports(vec![report]))
}

pub(super) fn check_sep_from_truth(u: &Universe, _seed: u64) -> Check {
    let hf = require_hf(u, "sep_from_truth")?;
    let truth = u.oracle(Principle::Tnd(3))?;
    let mut report = ReductionReport::new("sep_from_truth", universe_label(u), truth.name());
    for (phi, n_params) in separation_formulas() {
        for subject in hf.carrier() {
            let param_sets: Vec<Vec<HfSet>> = if n_params == 0 {
                vec![vec![]]
            } else {
                param_samples(hf).into_iter().map(|p| vec![p]).collect()
            };
            for params in param_sets {
                truth.reset_log();
                let got = sep_from_truth(&truth, &phi, &params, subject)?;
                if truth.call_count() != subject.len() {
                    report.failures.push(format!(
                        "{phi} on {subject}: {} calls for |X| = {}",
                        truth.call_count(),
                        subject.len()
                    ));
                }
                if !validate_sep(hf, &phi, &params, subject, &got)? {
                    report
                        .failures
                        .push(format!("{phi} on {subject}: invalid output {got}"));
                }
                report.inputs_checked += 1;
                report.max_calls = report.max_calls.max(truth.call_count());
            }
        }
    }
    Ok(CheckOutput::Reports(vec![report]))
}

pub(super) fn check_effectivizer_from_tnd(u: &Universe, _seed: u64) -> Check {
    let hf = require_hf(u, "effectivizer_from_tnd")?;
    let tnd = u.oracle(Principle::Tnd(3))?;
    let mut report = ReductionReport::new("effectivizer_from_tnd", universe_label(u), tnd.name());
    let true_statements: Vec<Formula> = vec![
        "A x. E y. y sub x".parse().unwrap(),
        "A x. x = x".parse().unwrap(),
        "E y. y = y".parse().unwrap(),
    ];
    for phi in &true_statements {
        let g = effectivizer_from_tnd(&tnd, phi)?;
        if !crate::universe::effectivizer_satisfies(hf, phi, &g)? {
            report
                .failures
                .push(format!("{phi}: delegated effectivizer fails the matrix"));
        }
        report.inputs_checked += 1;
        report.max_calls = report.max_calls.max(g.call_count());
    }
    // a statement false in the universe is rejected up front
    let false_phi: Formula = "A x. E y. x in y".parse().unwrap();
    match effectivizer_from_tnd(&tnd, &false_phi) {
        Err(ReductionError::FormulaFalse) => {}
        other => report.failures.push(format!(
            "false statement should be rejected, got {other:?}"
        )),
    }
    report.inputs_checked += 1;
    Ok(CheckOutput::Reports(vec![report]))
}

pub(super) fn check_card_from_pot(u: &Universe, _seed: u64) -> Check {
    let hf = require_hf(u, "card_from_pot")?;
    let pot = u.oracle(Principle::Pot)?;
    // the full-cardinality family supplies the adversarial comparison: the
    // computed cardinal must match every variant's κ component even though
    // no bijection is produced
    let card_variants = u.adversarial_family(Principle::CardFull, 3)?;
    let mut report = ReductionReport::new("card_from_pot", universe_label(u), pot.name());
    for a in hf.carrier() {
        pot.reset_log();
        let a_code = setcode::encode(a);
        let got = card_from_pot(&pot, &a_code)?;
        if pot.call_count() != 1 {
            report.failures.push(format!(
                "{a}: {} power set calls, contract is one",
                pot.call_count()
            ));
        }
        if got.as_von_neumann() != Some(a.len() as u64) {
            report
                .failures
                .push(format!("{a}: cardinality {got}, want {}", a.len()));
        }
        for variant in &card_variants {
            let full = setcode::decode(&variant.call(&[a_code.clone()])?)?;
            let kappa = full.as_kuratowski().map(|(k, _)| k);
            if kappa.as_ref() != Some(&got) {
                report.failures.push(format!(
                    "{a}: {} disagrees with the computed cardinal",
                    variant.name()
                ));
            }
        }
        report.inputs_checked += 1;
        report.max_calls = report.max_calls.max(pot.call_count());
    }
    Ok(CheckOutput::Reports(vec![report]))
}

pub(super) fn check_powercard_from_pot(u: &Universe, _seed: u64) -> Check {
    let hf = require_hf(u, "powercard_from_pot")?;
    let pot = u.oracle(Principle::Pot)?;
    let mut report = ReductionReport::new("powercard_from_pot", universe_label(u), pot.name());
    // powers of members of V₃ stay inside the V₄ carrier
    for a in HfSet::v_level(3) {
        pot.reset_log();
        let got = powercard_from_pot(&pot, &setcode::encode(&a))?;
        let want = 1u64 << a.len();
        if got.as_von_neumann() != Some(want) {
            report
                .failures
                .push(format!("{a}: |P(a)| computed {got}, want {want}"));
        }
        if pot.call_count() != 1 {
            report
                .failures
                .push(format!("{a}: {} calls, contract is one", pot.call_count()));
        }
        report.inputs_checked += 1;
        report.max_calls = report.max_calls.max(pot.call_count());
    }
    let _ = hf;
    Ok(CheckOutput::Reports(vec![report]))
}

pub(super) fn check_nextcard_from_pot(u: &Universe, _seed: u64) -> Check {
    let hf = require_hf(u, "nextcard_from_pot")?;
    let pot = u.oracle(Principle::Pot)?;
    let mut report = ReductionReport::new("nextcard_from_pot", universe_label(u), pot.name());
    for a in hf.carrier() {
        pot.reset_log();
        let got = nextcard_from_pot(&pot, &setcode::encode(a))?;
        // in the hereditarily finite world the next cardinal is the successor
        let want = a.len() as u64 + 1;
        if got.as_von_neumann() != Some(want) {
            report
                .failures
                .push(format!("{a}: next cardinal {got}, want {want}"));
        }
        report.inputs_checked += 1;
        report.max_calls = report.max_calls.max(pot.call_count());
    }
    Ok(CheckOutput::Reports(vec![report]))
}

pub(super) fn check_ordcard_from_card(u: &Universe, seed: u64) -> Check {
    let hf = require_hf(u, "ordcard_from_card")?;
    let variants = target_variants(u, Principle::CardFull, seed)?;
    let mut reports = Vec::new();
    for variant in variants {
        let mut report =
            ReductionReport::new("ordcard_from_card", universe_label(u), variant.name());
        for n in 0..hf.level() as u64 {
            variant.reset_log();
            let alpha = HfSet::von_neumann(n);
            let got = ordcard_from_card(&variant, &alpha)?;
            if got.as_von_neumann() != Some(n) {
                report
                    .failures
                    .push(format!("ordinal {n}: cardinality {got}"));
            }
            if variant.call_count() != 1 {
                report
                    .failures
                    .push(format!("ordinal {n}: {} calls", variant.call_count()));
            }
            report.inputs_checked += 1;
            report.max_calls = report.max_calls.max(variant.call_count());
        }
        reports.push(report);
    }
    Ok(CheckOutput::Reports(reports))
}

pub(super) fn check_card_from_ordcard(u: &Universe, _seed: u64) -> Check {
    let hf = require_hf(u, "card_from_ordcard")?;
    let ordcard = u.oracle(Principle::OrdCard)?;
    let mut report = ReductionReport::new("card_from_ordcard", universe_label(u), ordcard.name());
    for a in hf.carrier() {
        ordcard.reset_log();
        let got = card_from_ordcard(&ordcard, &setcode::encode(a))?;
        if got.as_von_neumann() != Some(a.len() as u64) {
            report
                .failures
                .push(format!("{a}: cardinality {got}, want {}", a.len()));
        }
        if ordcard.call_count() != 1 {
            report
                .failures
                .push(format!("{a}: {} calls, contract is one", ordcard.call_count()));
        }
        report.inputs_checked += 1;
        report.max_calls = report.max_calls.max(ordcard.call_count());
    }
    Ok(CheckOutput::Reports(vec![report]))
}

pub(super) fn check_sep_from_rep(u: &Universe, _seed: u64) -> Check {
    let hf = require_hf(u, "sep_from_rep")?;
    let rep = u.oracle(Principle::Rep(None))?;
    let mut report = ReductionReport::new("sep_from_rep", universe_label(u), rep.name());
    for (phi, n_params) in separation_formulas() {
        for subject in hf.carrier() {
            let param_sets: Vec<Vec<HfSet>> = if n_params == 0 {
                vec![vec![]]
            } else {
                param_samples(hf).into_iter().map(|p| vec![p]).collect()
            };
            for params in param_sets {
                rep.reset_log();
                let got = sep_from_rep(&rep, &phi, &params, subject)?;
                if !validate_sep(hf, &phi, &params, subject, &got)? {
                    report
                        .failures
                        .push(format!("{phi} on {subject}: invalid output {got}"));
                }
                if rep.call_count() != 1 {
                    report.failures.push(format!(
                        "{phi} on {subject}: {} replacement calls",
                        rep.call_count()
                    ));
                }
                report.inputs_checked += 1;
                report.max_calls = report.max_calls.max(rep.call_count());
            }
        }
    }
    Ok(CheckOutput::Reports(vec![report]))
}

pub(super) fn check_rep_from_sep_pot(u: &Universe, _seed: u64) -> Check {
    let hf = require_hf(u, "rep_from_sep_pot")?;
    let sep = u.oracle(Principle::Sep(None))?;
    let pot = u.oracle(Principle::Pot)?;
    let mut report = ReductionReport::new(
        "rep_from_sep_pot",
        universe_label(u),
        "Sep@hf + Pot@hf",
    );
    for phi in mapping_formulas() {
        for subject in hf.carrier() {
            sep.reset_log();
            pot.reset_log();
            let got = rep_from_sep_pot(&sep, &pot, &phi, &[], subject, hf.level())?;
            if !validate_rep(hf, &phi, &[], subject, &got)? {
                report
                    .failures
                    .push(format!("{phi} on {subject}: invalid output {got}"));
            }
            report.inputs_checked += 1;
            report.max_calls = report
                .max_calls
                .max(sep.call_count() + pot.call_count());
        }
    }
    // the non-functional error path
    let non_functional: Formula = "x sub y".parse().unwrap();
    let v2 = HfSet::from_elements(HfSet::v_level(2));
    match rep_from_sep_pot(&sep, &pot, &non_functional, &[], &v2, hf.level()) {
        Err(ReductionError::NotFunctional) => {}
        other => report
            .failures
            .push(format!("non-functional formula accepted: {other:?}")),
    }
    report.inputs_checked += 1;
    Ok(CheckOutput::Reports(vec![report]))
}

pub(super) fn check_coll_from_rep(u: &Universe, _seed: u64) -> Check {
    let hf = require_hf(u, "coll_from_rep")?;
    let rep = u.oracle(Principle::Rep(None))?;
    let stages: Vec<HfSet> = (0..=hf.level())
        .map(|i| HfSet::from_elements(HfSet::v_level(i)))
        .collect();
    let mut report = ReductionReport::new("coll_from_rep", universe_label(u), rep.name());
    // the Scott trick maps each element to its set of stage witnesses; for
    // elements above rank 1 those witness sets outgrow the carrier and the
    // replacement oracle rightly sees no functional image, so the checked
    // domain is the subjects one level down
    let subjects = HfSet::v_level(hf.level() - 1);
    for phi in coverage_formulas() {
        for subject in &subjects {
            rep.reset_log();
            let got = coll_from_rep(&rep, &phi, &[], subject, &stages)?;
            if !validate_coll(hf, &phi, &[], subject, &got)? {
                report
                    .failures
                    .push(format!("{phi} on {subject}: invalid output {got}"));
            }
            if rep.call_count() != 1 {
                report.failures.push(format!(
                    "{phi} on {subject}: {} replacement calls",
                    rep.call_count()
                ));
            }
            report.inputs_checked += 1;
            report.max_calls = report.max_calls.max(rep.call_count());
        }
    }
    Ok(CheckOutput::Reports(vec![report]))
}

pub(super) fn check_coll_from_sep_pot(u: &Universe, _seed: u64) -> Check {
    let hf = require_hf(u, "coll_from_sep_pot")?;
    let sep = u.oracle(Principle::Sep(None))?;
    let pot = u.oracle(Principle::Pot)?;
    let mut report = ReductionReport::new(
        "coll_from_sep_pot",
        universe_label(u),
        "Sep@hf + Pot@hf",
    );
    for phi in coverage_formulas() {
        for subject in hf.carrier() {
            sep.reset_log();
            pot.reset_log();
            let got = coll_from_sep_pot(&sep, &pot, &phi, &[], subject, hf.level())?;
            if !validate_coll(hf, &phi, &[], subject, &got)? {
                report
                    .failures
                    .push(format!("{phi} on {subject}: invalid output {got}"));
            }
            report.inputs_checked += 1;
            report.max_calls = report
                .max_calls
                .max(sep.call_count() + pot.call_count());
        }
    }
    Ok(CheckOutput::Reports(vec![report]))
}

pub(super) fn check_pot_from_rep(u: &Universe, _seed: u64) -> Check {
    let hf = require_hf(u, "pot_from_rep")?;
    let rep = u.oracle(Principle::Rep(None))?;
    let mut report = ReductionReport::new("pot_from_rep", universe_label(u), rep.name());
    // powers of members of V₃ stay inside the V₄ carrier
    for a in HfSet::v_level(3) {
        rep.reset_log();
        let got = pot_from_rep(&rep, &setcode::encode(&a))?;
        if !validate_pot(hf, &a, &got)? {
            report
                .failures
                .push(format!("{a}: invalid power set {got}"));
        }
        if rep.call_count() != 1 {
            report
                .failures
                .push(format!("{a}: {} replacement calls", rep.call_count()));
        }
        report.inputs_checked += 1;
        report.max_calls = report.max_calls.max(rep.call_count());
    }
    Ok(CheckOutput::Reports(vec![report]))
}
