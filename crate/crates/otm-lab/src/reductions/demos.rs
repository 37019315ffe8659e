//! Executable counterexample universes: the identity-style reduction
//! between PowerCard and NextCard works in step-1 ("GCH") configurations
//! and fails in gap-pattern configurations, where the failing positions
//! recover the encoded bit string. Non-existence of every possible
//! reduction is not desk-checkable; what these demos exhibit is a concrete
//! program provably correct in one universe and wrong in another.

use serde::Serialize;

use crate::ordinal::Ordinal;
use crate::universe::{CardinalUniverse, Principle, Universe};

use super::{require_cardinal, universe_label, CheckOutput, ReductionError};

/// The bit string the built-in pattern configuration encodes.
pub const PATTERN_BITS: [bool; 6] = [true, false, true, false, false, true];

/// A step-1 configuration: consecutive cardinals 0..=20, beth equal to the
/// cardinal successor everywhere below the top.
pub fn builtin_gch_config() -> CardinalUniverse {
    let cardinals: Vec<Ordinal> = (0..=20).map(Ordinal::from_nat).collect();
    let beth = (0..20)
        .map(|n| (Ordinal::from_nat(n), Ordinal::from_nat(n + 1)))
        .collect();
    CardinalUniverse::new(Ordinal::from_nat(20), cardinals, beth, None)
        .expect("fixed configuration")
}

/// A gap-pattern configuration over the same cardinals: beth is defined on
/// the probe cardinals 3k (k = 1..=6) only, jumping one step for a 1 bit
/// and two steps for a 0 bit.
pub fn builtin_pattern_config() -> CardinalUniverse {
    let cardinals: Vec<Ordinal> = (0..=20).map(Ordinal::from_nat).collect();
    let beth = PATTERN_BITS
        .iter()
        .enumerate()
        .map(|(i, bit)| {
            let k = i as u64 + 1;
            let gap = if *bit { 1 } else { 2 };
            (Ordinal::from_nat(3 * k), Ordinal::from_nat(3 * k + gap))
        })
        .collect();
    CardinalUniverse::new(Ordinal::from_nat(20), cardinals, beth, None)
        .expect("fixed configuration")
}

/// What a demo run reports: where the identity reduction disagreed with the
/// ground truth per configuration, and the bit string the pattern failures
/// decode to.
#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    pub demo: String,
    pub gch_universe: String,
    pub pattern_universe: String,
    pub gch_failures: Vec<String>,
    pub pattern_failures: Vec<String>,
    pub recovered_bits: Vec<bool>,
    pub probes: Vec<Ordinal>,
}

#[derive(Clone, Copy)]
enum Direction {
    PowerFromNext,
    NextFromPower,
}

/// Runs the identity reduction (answer the other principle's oracle output
/// verbatim) over every probe of a configuration and compares against the
/// ground truth of the claimed principle.
fn identity_failures(
    u: &CardinalUniverse,
    direction: Direction,
) -> Result<(Vec<Ordinal>, Vec<String>), ReductionError> {
    let universe = Universe::Cardinal(u.clone());
    let (target, source) = match direction {
        Direction::PowerFromNext => (Principle::NextCard, Principle::PowerCard),
        Direction::NextFromPower => (Principle::PowerCard, Principle::NextCard),
    };
    let target_oracle = universe.oracle(target)?;
    let ground_oracle = universe.oracle(source)?;
    let probes: Vec<Ordinal> = u.beth_domain().cloned().collect();
    let mut failures = Vec::new();
    let mut failure_labels = Vec::new();
    for probe in &probes {
        let claimed = target_oracle.call(&[crate::universe::ord_code(probe)])?;
        let truth = ground_oracle.call(&[crate::universe::ord_code(probe)])?;
        if claimed != truth {
            failures.push(probe.clone());
            failure_labels.push(format!(
                "at {probe}: identity answer {} but ground truth {}",
                crate::universe::code_as_ordinal(&claimed)?,
                crate::universe::code_as_ordinal(&truth)?,
            ));
        }
    }
    let _ = failures;
    Ok((probes, failure_labels))
}

fn run_demo(
    name: &str,
    direction: Direction,
    gch: &CardinalUniverse,
    pattern: &CardinalUniverse,
) -> Result<DemoReport, ReductionError> {
    let (_, gch_failures) = identity_failures(gch, direction)?;
    let (probes, pattern_failures) = identity_failures(pattern, direction)?;
    // a probe position recovers bit 1 exactly when the identity reduction
    // survived there
    let recovered_bits = probes
        .iter()
        .map(|p| {
            !pattern_failures
                .iter()
                .any(|f| f.starts_with(&format!("at {p}:")))
        })
        .collect();
    Ok(DemoReport {
        demo: name.to_string(),
        gch_universe: universe_label(&Universe::Cardinal(gch.clone())),
        pattern_universe: universe_label(&Universe::Cardinal(pattern.clone())),
        gch_failures,
        pattern_failures,
        recovered_bits,
        probes,
    })
}

/// The PowerCard := NextCard identity: exhaustively correct under GCH,
/// failing exactly at the 0 bits of the pattern configuration.
pub fn demo_independence_powercard_nextcard(
    gch: &CardinalUniverse,
    pattern: &CardinalUniverse,
) -> Result<DemoReport, ReductionError> {
    run_demo(
        "demo_independence_powercard_nextcard",
        Direction::PowerFromNext,
        gch,
        pattern,
    )
}

/// The symmetric NextCard := PowerCard identity.
pub fn demo_gch_nextcard_from_powercard(
    gch: &CardinalUniverse,
    pattern: &CardinalUniverse,
) -> Result<DemoReport, ReductionError> {
    run_demo(
        "demo_gch_nextcard_from_powercard",
        Direction::NextFromPower,
        gch,
        pattern,
    )
}

/// Registry wrapper: a supplied cardinal universe acts as the pattern
/// configuration (with a GCH sibling derived over the same cardinals); the
/// built-in pair is used otherwise.
fn demo_universes(
    u: &Universe,
    name: &'static str,
) -> Result<(CardinalUniverse, CardinalUniverse), ReductionError> {
    match u {
        Universe::Cardinal(pattern) => {
            let cardinals: Vec<Ordinal> = pattern.cardinals().iter().cloned().collect();
            let mut beth = std::collections::BTreeMap::new();
            let list = &cardinals;
            for pair in list.windows(2) {
                beth.insert(pair[0].clone(), pair[1].clone());
            }
            let gch = CardinalUniverse::new(
                pattern.bound().clone(),
                cardinals,
                beth,
                Some(pattern.carrier().to_vec()),
            )
            .map_err(|e| ReductionError::Other(format!("cannot derive a GCH sibling: {e}")))?;
            Ok((gch, pattern.clone()))
        }
        Universe::Hf(_) => {
            let _ = require_cardinal(u, name)?;
            unreachable!("require_cardinal errors on hf universes")
        }
    }
}

pub(super) fn check_demo_independence(
    u: &Universe,
    _seed: u64,
) -> Result<CheckOutput, ReductionError> {
    let (gch, pattern) = demo_universes(u, "demo_independence_powercard_nextcard")?;
    Ok(CheckOutput::Demo(demo_independence_powercard_nextcard(
        &gch, &pattern,
    )?))
}

pub(super) fn check_demo_gch(u: &Universe, _seed: u64) -> Result<CheckOutput, ReductionError> {
    let (gch, pattern) = demo_universes(u, "demo_gch_nextcard_from_powercard")?;
    Ok(CheckOutput::Demo(demo_gch_nextcard_from_powercard(
        &gch, &pattern,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gch_config_passes_and_pattern_recovers_bits() {
        let gch = builtin_gch_config();
        let pattern = builtin_pattern_config();
        let report = demo_independence_powercard_nextcard(&gch, &pattern).unwrap();
        assert!(report.gch_failures.is_empty(), "{:?}", report.gch_failures);
        assert_eq!(report.recovered_bits, PATTERN_BITS.to_vec());
        // failures sit exactly at the zero bits
        let zero_count = PATTERN_BITS.iter().filter(|b| !**b).count();
        assert_eq!(report.pattern_failures.len(), zero_count);

        let report = demo_gch_nextcard_from_powercard(&gch, &pattern).unwrap();
        assert!(report.gch_failures.is_empty());
        assert_eq!(report.recovered_bits, PATTERN_BITS.to_vec());
    }

    #[test]
    fn gch_probes_cover_every_non_top_cardinal() {
        let gch = builtin_gch_config();
        assert_eq!(gch.beth_domain().count(), 20);
        // in a GCH configuration PowerCard and NextCard agree extensionally
        for probe in gch.beth_domain() {
            assert_eq!(gch.power_card(probe).unwrap(), gch.next_card(probe).unwrap());
        }
    }
}
