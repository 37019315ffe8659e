//! Reductions between the cardinal arithmetic principles, over toy cardinal
//! structures. Scans over "the ordinals" walk the structure's carrier, the
//! finite stand-in for the ordinal line.

use crate::machine::{self, Budget, Program, RunOutcome};
use crate::ordinal::Ordinal;
use crate::setcode::SetCode;
use crate::universe::{
    code_as_ordinal, nat_code, ord_code, ord_set_code, CardinalUniverse, Effectivizer,
    OracleError, Principle, ToyPredicate, Universe,
};

use super::{
    require_cardinal, target_variants, universe_label, CheckOutput, ReductionError,
    ReductionReport,
};

/// Any effectivizer of NextCard is one of GreaterCard: pass the input
/// through. One oracle call.
pub fn greatercard_from_nextcard(
    next: &Effectivizer,
    alpha: &Ordinal,
) -> Result<Ordinal, ReductionError> {
    Ok(code_as_ordinal(&next.call(&[ord_code(alpha)])?)?)
}

/// Walk the ordinals above α, asking the decision oracle at each step, and
/// return the first that is a cardinal.
pub fn nextcard_from_deccard(
    line: &[Ordinal],
    dec: &Effectivizer,
    alpha: &Ordinal,
) -> Result<Ordinal, ReductionError> {
    for kappa in line.iter().filter(|k| *k > alpha) {
        let bit = code_as_ordinal(&dec.call(&[ord_code(kappa)])?)?;
        if bit == Ordinal::one() {
            return Ok(kappa.clone());
        }
    }
    Err(OracleError::NoNextCardinal {
        above: alpha.clone(),
    }
    .into())
}

/// Compute the increasing enumeration of cardinals with the successor
/// oracle, starting from 0, until it passes α; α is a cardinal exactly when
/// it appears in the enumeration.
pub fn deccard_from_nextcard(
    next: &Effectivizer,
    alpha: &Ordinal,
) -> Result<bool, ReductionError> {
    let mut current = Ordinal::zero();
    loop {
        if &current == alpha {
            return Ok(true);
        }
        if &current > alpha {
            return Ok(false);
        }
        match next.call(&[ord_code(&current)]) {
            Ok(out) => current = code_as_ordinal(&out)?,
            // the enumeration topped out below α: α is past every cardinal
            Err(OracleError::NoNextCardinal { .. }) => return Ok(false),
            Err(e) => return Err(e.into()),
        }
    }
}

/// One cardinality call; α is a cardinal exactly when it is its own
/// cardinality.
pub fn deccard_from_card(card: &Effectivizer, alpha: &Ordinal) -> Result<bool, ReductionError> {
    let kappa = code_as_ordinal(&card.call(&[ord_code(alpha)])?)?;
    Ok(&kappa == alpha)
}

/// Scan 0..α, marking which points the decision oracle confirms as
/// cardinals; the last confirmed one is card(α). On a consecutive carrier
/// this makes α+1 calls.
pub fn card_from_deccard(
    line: &[Ordinal],
    dec: &Effectivizer,
    alpha: &Ordinal,
) -> Result<Ordinal, ReductionError> {
    let mut best = None;
    for beta in line.iter().filter(|b| *b <= alpha) {
        let bit = code_as_ordinal(&dec.call(&[ord_code(beta)])?)?;
        if bit == Ordinal::one() {
            best = Some(beta.clone());
        }
    }
    best.ok_or_else(|| ReductionError::Other("scan found no cardinal at or below α".into()))
}

/// Walk the ordinals above α, testing each for *not* being a cardinal
/// through the Σ₁-separation oracle applied to a singleton; the first with
/// an empty answer is the next cardinal.
pub fn nextcard_from_sep1(
    line: &[Ordinal],
    sep1: &Effectivizer,
    alpha: &Ordinal,
) -> Result<Ordinal, ReductionError> {
    for kappa in line.iter().filter(|k| *k > alpha) {
        let out = sep1.call(&[
            nat_code(ToyPredicate::NotACardinal.tag()),
            ord_set_code(&[kappa.clone()].into_iter().collect()),
        ])?;
        if out.members.is_empty() {
            return Ok(kappa.clone());
        }
    }
    Err(OracleError::NoNextCardinal {
        above: alpha.clone(),
    }
    .into())
}

/// Walk the ordinals from 0, asking the Σ₂-separation oracle whether β is
/// the power-set cardinality of α; the first nonempty answer wins.
pub fn powercard_from_sep2(
    line: &[Ordinal],
    sep2: &Effectivizer,
    alpha: &Ordinal,
) -> Result<Ordinal, ReductionError> {
    for beta in line {
        let out = sep2.call(&[
            nat_code(ToyPredicate::IsPowerCardOf.tag()),
            ord_code(alpha),
            ord_set_code(&[beta.clone()].into_iter().collect()),
        ])?;
        if !out.members.is_empty() {
            return Ok(beta.clone());
        }
    }
    Err(OracleError::NoBethValue { at: alpha.clone() }.into())
}

/// Walk the ordinals above α, testing cardinality through the Σ₂-separation
/// oracle as a truth test.
pub fn nextcard_from_sep2_scan(
    line: &[Ordinal],
    sep2: &Effectivizer,
    alpha: &Ordinal,
) -> Result<Ordinal, ReductionError> {
    for kappa in line.iter().filter(|k| *k > alpha) {
        let out = sep2.call(&[
            nat_code(ToyPredicate::IsCardinal.tag()),
            ord_set_code(&[kappa.clone()].into_iter().collect()),
        ])?;
        if !out.members.is_empty() {
            return Ok(kappa.clone());
        }
    }
    Err(OracleError::NoNextCardinal {
        above: alpha.clone(),
    }
    .into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HpVerdict {
    Halts,
    DoesNotHalt,
}

/// Bounded halting surrogate: obtain a clock bound from the GreaterCard
/// oracle at ρ and at ω, run the program under the simulator, and report
/// halting below the bound. A simulator budget that runs out before the
/// bound is an inconclusive error, never a silent "does not halt".
pub fn hp_from_greatercard(
    gc: &Effectivizer,
    program: &Program,
    input: &SetCode,
    rho: &Ordinal,
    budget: &Budget,
) -> Result<HpVerdict, ReductionError> {
    let at_rho = code_as_ordinal(&gc.call(&[ord_code(rho)])?)?;
    let at_omega = code_as_ordinal(&gc.call(&[ord_code(&Ordinal::omega())])?)?;
    let clock_bound = at_rho.max(at_omega);
    let oracle = machine::NoOracle;
    match machine::run(program, input, rho, &oracle, budget)? {
        RunOutcome::Halted { trace, .. } => {
            if trace.steps_taken < clock_bound {
                Ok(HpVerdict::Halts)
            } else {
                Err(ReductionError::SurrogateInconclusive(format!(
                    "halted at clock {}, at or past the oracle bound {clock_bound}",
                    trace.steps_taken
                )))
            }
        }
        RunOutcome::Diverged { .. } => Ok(HpVerdict::DoesNotHalt),
        RunOutcome::BudgetExhausted { at_clock, .. } => {
            if at_clock >= clock_bound {
                // simulated past the bound without halting
                Ok(HpVerdict::DoesNotHalt)
            } else {
                Err(ReductionError::SurrogateInconclusive(format!(
                    "simulator budget ran out at clock {at_clock}, below the bound {clock_bound}"
                )))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// exhaustive checkers

type Check = Result<CheckOutput, ReductionError>;

fn check_scan_reduction(
    universe: &Universe,
    name: &'static str,
    target: Principle,
    seed: u64,
    run_one: impl Fn(&CardinalUniverse, &Effectivizer, &Ordinal) -> Result<Option<Ordinal>, ReductionError>,
    expected: impl Fn(&CardinalUniverse, &Ordinal) -> Option<Ordinal>,
) -> Check {
    let cu = require_cardinal(universe, name)?;
    let variants = target_variants(universe, target, seed)?;
    let mut reports = Vec::new();
    for variant in variants {
        let mut report = ReductionReport::new(name, universe_label(universe), variant.name());
        for alpha in cu.carrier() {
            variant.reset_log();
            let got = run_one(cu, &variant, alpha)?;
            let want = expected(cu, alpha);
            if got != want {
                report.failures.push(format!(
                    "input {alpha}: got {got:?}, ground truth {want:?}"
                ));
            }
            report.inputs_checked += 1;
            report.max_calls = report.max_calls.max(variant.call_count());
        }
        reports.push(report);
    }
    Ok(CheckOutput::Reports(reports))
}

pub(super) fn check_greatercard_from_nextcard(u: &Universe, seed: u64) -> Check {
    // validity of the output is GreaterCard's defining condition: a cardinal
    // strictly above the input
    let cu = require_cardinal(u, "greatercard_from_nextcard")?;
    let variants = target_variants(u, Principle::NextCard, seed)?;
    let mut reports = Vec::new();
    for variant in variants {
        let mut report =
            ReductionReport::new("greatercard_from_nextcard", universe_label(u), variant.name());
        for alpha in cu.carrier() {
            variant.reset_log();
            match greatercard_from_nextcard(&variant, alpha) {
                Ok(kappa) => {
                    if !(cu.is_cardinal(&kappa) && &kappa > alpha) {
                        report
                            .failures
                            .push(format!("input {alpha}: {kappa} is not a greater cardinal"));
                    }
                    if variant.call_count() != 1 {
                        report.failures.push(format!(
                            "input {alpha}: {} calls, contract is exactly one",
                            variant.call_count()
                        ));
                    }
                }
                Err(ReductionError::Oracle(OracleError::NoNextCardinal { .. })) => {
                    if cu.next_card(alpha).is_some() {
                        report
                            .failures
                            .push(format!("input {alpha}: spurious NoNextCardinal"));
                    }
                }
                Err(e) => return Err(e),
            }
            report.inputs_checked += 1;
            report.max_calls = report.max_calls.max(variant.call_count());
        }
        reports.push(report);
    }
    Ok(CheckOutput::Reports(reports))
}

pub(super) fn check_nextcard_from_deccard(u: &Universe, seed: u64) -> Check {
    check_scan_reduction(
        u,
        "nextcard_from_deccard",
        Principle::DecCard,
        seed,
        |cu, dec, alpha| match nextcard_from_deccard(cu.carrier(), dec, alpha) {
            Ok(k) => Ok(Some(k)),
            Err(ReductionError::Oracle(OracleError::NoNextCardinal { .. })) => Ok(None),
            Err(e) => Err(e),
        },
        |cu, alpha| cu.next_card(alpha),
    )
}

pub(super) fn check_deccard_from_nextcard(u: &Universe, seed: u64) -> Check {
    check_scan_reduction(
        u,
        "deccard_from_nextcard",
        Principle::NextCard,
        seed,
        |_, next, alpha| {
            deccard_from_nextcard(next, alpha).map(|b| Some(Ordinal::from_nat(b as u64)))
        },
        |cu, alpha| Some(Ordinal::from_nat(cu.is_cardinal(alpha) as u64)),
    )
}

pub(super) fn check_deccard_from_card(u: &Universe, seed: u64) -> Check {
    let cu = require_cardinal(u, "deccard_from_card")?;
    let variants = target_variants(u, Principle::Card, seed)?;
    let mut reports = Vec::new();
    for variant in variants {
        let mut report =
            ReductionReport::new("deccard_from_card", universe_label(u), variant.name());
        for alpha in cu.carrier() {
            variant.reset_log();
            let got = deccard_from_card(&variant, alpha)?;
            if got != cu.is_cardinal(alpha) {
                report
                    .failures
                    .push(format!("input {alpha}: got {got}, want {}", cu.is_cardinal(alpha)));
            }
            if variant.call_count() != 1 {
                report.failures.push(format!(
                    "input {alpha}: {} calls, contract is exactly one",
                    variant.call_count()
                ));
            }
            report.inputs_checked += 1;
            report.max_calls = report.max_calls.max(variant.call_count());
        }
        reports.push(report);
    }
    Ok(CheckOutput::Reports(reports))
}

pub(super) fn check_card_from_deccard(u: &Universe, seed: u64) -> Check {
    check_scan_reduction(
        u,
        "card_from_deccard",
        Principle::DecCard,
        seed,
        |cu, dec, alpha| card_from_deccard(cu.carrier(), dec, alpha).map(Some),
        |cu, alpha| Some(cu.card_of(alpha)),
    )
}

pub(super) fn check_nextcard_from_sep1(u: &Universe, seed: u64) -> Check {
    check_scan_reduction(
        u,
        "nextcard_from_sep1",
        Principle::Sep(Some(1)),
        seed,
        |cu, sep, alpha| match nextcard_from_sep1(cu.carrier(), sep, alpha) {
            Ok(k) => Ok(Some(k)),
            Err(ReductionError::Oracle(OracleError::NoNextCardinal { .. })) => Ok(None),
            Err(e) => Err(e),
        },
        |cu, alpha| cu.next_card(alpha),
    )
}

pub(super) fn check_powercard_from_sep2(u: &Universe, seed: u64) -> Check {
    check_scan_reduction(
        u,
        "powercard_from_sep2",
        Principle::Sep(Some(2)),
        seed,
        |cu, sep, alpha| match powercard_from_sep2(cu.carrier(), sep, alpha) {
            Ok(b) => Ok(Some(b)),
            Err(ReductionError::Oracle(OracleError::NoBethValue { .. })) => Ok(None),
            Err(e) => Err(e),
        },
        |cu, alpha| cu.power_card(alpha).ok(),
    )
}

pub(super) fn check_nextcard_from_sep2_scan(u: &Universe, seed: u64) -> Check {
    check_scan_reduction(
        u,
        "nextcard_from_sep2_scan",
        Principle::Sep(Some(2)),
        seed,
        |cu, sep, alpha| match nextcard_from_sep2_scan(cu.carrier(), sep, alpha) {
            Ok(k) => Ok(Some(k)),
            Err(ReductionError::Oracle(OracleError::NoNextCardinal { .. })) => Ok(None),
            Err(e) => Err(e),
        },
        |cu, alpha| cu.next_card(alpha),
    )
}

// the surrogate halting check runs these two known programs
const HALT_NOW: &str = "
    tapes input work output
    go * * * -> - - - S go halt
";

const BUSY_LOOP: &str = "
    tapes input work output
    a * * * -> - 1 - R b
    b * * * -> - - - L a
";

pub(super) fn check_hp_from_greatercard(u: &Universe, seed: u64) -> Check {
    let cu = require_cardinal(u, "hp_from_greatercard")?;
    if cu.bound() < &Ordinal::omega() {
        return Err(ReductionError::Other(
            "the halting surrogate needs a bound of at least w".into(),
        ));
    }
    let variants = target_variants(u, Principle::GreaterCard, seed)?;
    let halts = machine::assemble(HALT_NOW).expect("fixed program");
    let loops = machine::assemble(BUSY_LOOP).expect("fixed program");
    let budget = Budget::default();
    let mut reports = Vec::new();
    for variant in variants {
        let mut report =
            ReductionReport::new("hp_from_greatercard", universe_label(u), variant.name());
        for (program, expected, label) in [
            (&halts, HpVerdict::Halts, "halt_now"),
            (&loops, HpVerdict::DoesNotHalt, "busy_loop"),
        ] {
            variant.reset_log();
            match hp_from_greatercard(
                &variant,
                program,
                &SetCode::empty(),
                &Ordinal::zero(),
                &budget,
            ) {
                Ok(verdict) => {
                    if verdict != expected {
                        report
                            .failures
                            .push(format!("{label}: verdict {verdict:?}, want {expected:?}"));
                    }
                }
                Err(e) => {
                    report.failures.push(format!("{label}: {e}"));
                }
            }
            report.inputs_checked += 1;
            report.max_calls = report.max_calls.max(variant.call_count());
        }
        reports.push(report);
    }
    Ok(CheckOutput::Reports(reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn universe() -> Universe {
        Universe::from_json(
            r#"{"kind":"cardinal","bound":"8","cardinals":["0","1","2","3","5","8"],
                "beth":{"0":"1","1":"2","2":"3","3":"5","5":"8"}}"#,
        )
        .unwrap()
    }

    fn nat(n: u64) -> Ordinal {
        Ordinal::from_nat(n)
    }

    #[test]
    fn nextcard_scan_counts_calls() {
        let u = universe();
        let cu = u.as_cardinal().unwrap();
        let dec = u.oracle(Principle::DecCard).unwrap();
        let k = nextcard_from_deccard(cu.carrier(), &dec, &nat(3)).unwrap();
        assert_eq!(k, nat(5));
        // scanned 4 (not a cardinal) then 5: two calls
        assert_eq!(dec.call_count(), 2);
        dec.reset_log();
        assert_eq!(nextcard_from_deccard(cu.carrier(), &dec, &nat(0)).unwrap(), nat(1));
        assert_eq!(dec.call_count(), 1);
        assert!(matches!(
            nextcard_from_deccard(cu.carrier(), &dec, &nat(8)),
            Err(ReductionError::Oracle(OracleError::NoNextCardinal { .. }))
        ));
    }

    #[test]
    fn deccard_from_nextcard_enumerates_cardinals() {
        let u = universe();
        let next = u.oracle(Principle::NextCard).unwrap();
        assert!(deccard_from_nextcard(&next, &nat(5)).unwrap());
        assert!(!deccard_from_nextcard(&next, &nat(4)).unwrap());
        assert!(deccard_from_nextcard(&next, &nat(0)).unwrap());
    }

    #[test]
    fn card_from_deccard_scan_length() {
        let u = universe();
        let cu = u.as_cardinal().unwrap();
        let dec = u.oracle(Principle::DecCard).unwrap();
        assert_eq!(card_from_deccard(cu.carrier(), &dec, &nat(4)).unwrap(), nat(3));
        // consecutive carrier: points 0..=4, five calls
        assert_eq!(dec.call_count(), 5);
        dec.reset_log();
        assert_eq!(card_from_deccard(cu.carrier(), &dec, &nat(0)).unwrap(), nat(0));
        assert_eq!(dec.call_count(), 1);
    }

    #[test]
    fn sep1_scan_calls_once_per_candidate() {
        let u = universe();
        let cu = u.as_cardinal().unwrap();
        let sep = u.oracle(Principle::Sep(Some(1))).unwrap();
        let k = nextcard_from_sep1(cu.carrier(), &sep, &nat(3)).unwrap();
        assert_eq!(k, nat(5));
        assert_eq!(sep.call_count(), 2);
    }

    #[test]
    fn powercard_scan_matches_beth() {
        let u = universe();
        let cu = u.as_cardinal().unwrap();
        let sep = u.oracle(Principle::Sep(Some(2))).unwrap();
        let b = powercard_from_sep2(cu.carrier(), &sep, &nat(1)).unwrap();
        assert_eq!(b, nat(2));
        // scanned 0, 1, 2: three calls
        assert_eq!(sep.call_count(), 3);
    }

    #[test]
    fn all_cardinal_checkers_pass_cleanly() {
        let u = universe();
        for name in [
            "greatercard_from_nextcard",
            "nextcard_from_deccard",
            "deccard_from_nextcard",
            "deccard_from_card",
            "card_from_deccard",
            "nextcard_from_sep1",
            "powercard_from_sep2",
            "nextcard_from_sep2_scan",
        ] {
            let red = super::super::find(name).unwrap();
            match red.check(&u, 11).unwrap() {
                CheckOutput::Reports(reports) => {
                    for r in reports {
                        assert!(
                            r.failures.is_empty(),
                            "{name}[{}]: {:?}",
                            r.effectivizer_variant,
                            r.failures
                        );
                        assert!(r.inputs_checked > 0);
                    }
                }
                _ => panic!("expected reports"),
            }
        }
    }

    #[test]
    fn halting_surrogate_distinguishes_the_two_programs() {
        let u = Universe::from_json(
            r#"{"kind":"cardinal","bound":"w*2",
                "cardinals":["0","1","2","3","5","8","w","w*2"],
                "beth":{"0":"1","1":"2","2":"3","3":"5","5":"8","8":"w","w":"w*2"}}"#,
        )
        .unwrap();
        let red = super::super::find("hp_from_greatercard").unwrap();
        match red.check(&u, 5).unwrap() {
            CheckOutput::Reports(reports) => {
                for r in reports {
                    assert!(r.failures.is_empty(), "{:?}", r.failures);
                }
            }
            _ => panic!("expected reports"),
        }
    }
}
