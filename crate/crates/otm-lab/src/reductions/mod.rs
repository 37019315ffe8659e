//! Reduction algorithms between principles, generic over the oracle
//! interface, with call-count accounting.
//!
//! Every reduction sees its target principles only through [`Effectivizer`]
//! handles; scans over "the ordinals" walk an explicitly supplied finite
//! line (the toy structure's carrier), never the universe's internals. Each
//! registered reduction carries an exhaustive checker that runs it over its
//! whole desk-scale domain against every adversarial variant of its targets
//! and validates the outputs against the source principle's defining
//! condition.

mod cardinal;
mod demos;
mod hf;

pub use cardinal::{
    card_from_deccard, deccard_from_card, deccard_from_nextcard, greatercard_from_nextcard,
    hp_from_greatercard, nextcard_from_deccard, nextcard_from_sep1, nextcard_from_sep2_scan,
    powercard_from_sep2, HpVerdict,
};
pub use demos::{
    builtin_gch_config, builtin_pattern_config, demo_gch_nextcard_from_powercard,
    demo_independence_powercard_nextcard, DemoReport, PATTERN_BITS,
};
pub use hf::{
    card_from_ordcard, card_from_pot, coll_from_rep, coll_from_sep_pot, effectivizer_from_tnd,
    nextcard_from_pot, ordcard_from_card, pot_from_rep, powercard_from_pot, rep_from_sep_pot,
    sep_from_rep, sep_from_truth, truth_from_sep,
};

use std::sync::LazyLock;

use serde::Serialize;
use thiserror::Error;

use crate::machine::MachineError;
use crate::setcode::CodeError;
use crate::universe::{Effectivizer, OracleError, Principle, Universe};

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("{reduction} runs in a {expected} universe")]
    WrongUniverse {
        reduction: &'static str,
        expected: &'static str,
    },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error("formula is not functional on the subject")]
    NotFunctional,
    #[error("formula is false in the universe")]
    FormulaFalse,
    #[error("surrogate inconclusive: {0}")]
    SurrogateInconclusive(String),
    #[error("{0}")]
    Other(String),
}

/// How many target calls a reduction is contracted to make per input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CallBound {
    ExactlyOne,
    Finite,
    Unbounded,
}

/// One validation record, the JSON report row.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    pub reduction: String,
    pub universe: String,
    pub effectivizer_variant: String,
    pub inputs_checked: usize,
    pub failures: Vec<String>,
    pub max_calls: usize,
}

impl ReductionReport {
    fn new(reduction: &str, universe: String, variant: &str) -> Self {
        ReductionReport {
            reduction: reduction.to_string(),
            universe,
            effectivizer_variant: variant.to_string(),
            inputs_checked: 0,
            failures: Vec::new(),
            max_calls: 0,
        }
    }
}

/// Output of a registered check: ordinary reductions produce validation
/// reports, demos produce a failure/recovery summary.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum CheckOutput {
    Reports(Vec<ReductionReport>),
    Demo(DemoReport),
}

pub struct Reduction {
    pub name: &'static str,
    pub source: &'static str,
    pub targets: &'static str,
    pub call_bound: CallBound,
    pub universe_kind: &'static str,
    runner: fn(&Universe, u64) -> Result<CheckOutput, ReductionError>,
}

impl Reduction {
    /// Runs the exhaustive check over the given universe.
    pub fn check(&self, universe: &Universe, seed: u64) -> Result<CheckOutput, ReductionError> {
        (self.runner)(universe, seed)
    }
}

/// All registered reductions, demos last.
pub fn registry() -> &'static [Reduction] {
    static REGISTRY: LazyLock<Vec<Reduction>> = LazyLock::new(build_registry);
    &REGISTRY
}

pub fn find(name: &str) -> Option<&'static Reduction> {
    registry().iter().find(|r| r.name == name)
}

fn build_registry() -> Vec<Reduction> {
    let mut out = Vec::new();
    let mut add = |name,
                   source,
                   targets,
                   call_bound,
                   universe_kind,
                   runner: fn(&Universe, u64) -> Result<CheckOutput, ReductionError>| {
        out.push(Reduction {
            name,
            source,
            targets,
            call_bound,
            universe_kind,
            runner,
        });
    };

    add(
        "greatercard_from_nextcard",
        "GreaterCard",
        "NextCard",
        CallBound::ExactlyOne,
        "cardinal",
        cardinal::check_greatercard_from_nextcard,
    );
    add(
        "nextcard_from_deccard",
        "NextCard",
        "DecCard",
        CallBound::Finite,
        "cardinal",
        cardinal::check_nextcard_from_deccard,
    );
    add(
        "deccard_from_nextcard",
        "DecCard",
        "NextCard",
        CallBound::Finite,
        "cardinal",
        cardinal::check_deccard_from_nextcard,
    );
    add(
        "deccard_from_card",
        "DecCard",
        "Card",
        CallBound::ExactlyOne,
        "cardinal",
        cardinal::check_deccard_from_card,
    );
    add(
        "card_from_deccard",
        "Card",
        "DecCard",
        CallBound::Finite,
        "cardinal",
        cardinal::check_card_from_deccard,
    );
    add(
        "nextcard_from_sep1",
        "NextCard",
        "Sigma_1-Sep",
        CallBound::Finite,
        "cardinal",
        cardinal::check_nextcard_from_sep1,
    );
    add(
        "powercard_from_sep2",
        "PowerCard",
        "Sigma_2-Sep",
        CallBound::Finite,
        "cardinal",
        cardinal::check_powercard_from_sep2,
    );
    add(
        "nextcard_from_sep2_scan",
        "NextCard",
        "Sigma_2-Sep",
        CallBound::Finite,
        "cardinal",
        cardinal::check_nextcard_from_sep2_scan,
    );
    add(
        "hp_from_greatercard",
        "HP (bounded surrogate)",
        "GreaterCard",
        CallBound::Finite,
        "cardinal",
        cardinal::check_hp_from_greatercard,
    );
    add(
        "ordcard_from_card",
        "OrdCard",
        "Card(full)",
        CallBound::ExactlyOne,
        "hf",
        hf::check_ordcard_from_card,
    );
    add(
        "card_from_ordcard",
        "Card",
        "OrdCard",
        CallBound::ExactlyOne,
        "hf",
        hf::check_card_from_ordcard,
    );
    add(
        "card_from_pot",
        "Card",
        "Pot",
        CallBound::ExactlyOne,
        "hf",
        hf::check_card_from_pot,
    );
    add(
        "truth_from_sep",
        "Sigma_n truth",
        "Sep",
        CallBound::ExactlyOne,
        "hf",
        hf::check_truth_from_sep,
    );
    add(
        "sep_from_truth",
        "Sep",
        "Sigma_n truth",
        CallBound::Finite,
        "hf",
        hf::check_sep_from_truth,
    );
    add(
        "effectivizer_from_tnd",
        "a true prenex statement",
        "Sigma_n-TND",
        CallBound::Finite,
        "hf",
        hf::check_effectivizer_from_tnd,
    );
    add(
        "powercard_from_pot",
        "PowerCard",
        "Pot",
        CallBound::ExactlyOne,
        "hf",
        hf::check_powercard_from_pot,
    );
    add(
        "nextcard_from_pot",
        "NextCard",
        "Pot",
        CallBound::ExactlyOne,
        "hf",
        hf::check_nextcard_from_pot,
    );
    add(
        "sep_from_rep",
        "Sep",
        "Rep",
        CallBound::ExactlyOne,
        "hf",
        hf::check_sep_from_rep,
    );
    add(
        "rep_from_sep_pot",
        "Rep",
        "Sep + Pot",
        CallBound::Finite,
        "hf",
        hf::check_rep_from_sep_pot,
    );
    add(
        "coll_from_rep",
        "Coll",
        "Rep",
        CallBound::ExactlyOne,
        "hf",
        hf::check_coll_from_rep,
    );
    add(
        "coll_from_sep_pot",
        "Coll",
        "Sep + Pot",
        CallBound::Finite,
        "hf",
        hf::check_coll_from_sep_pot,
    );
    add(
        "pot_from_rep",
        "Pot",
        "Rep",
        CallBound::ExactlyOne,
        "hf",
        hf::check_pot_from_rep,
    );
    add(
        "demo_independence_powercard_nextcard",
        "PowerCard := NextCard identity",
        "NextCard vs PowerCard ground truth",
        CallBound::ExactlyOne,
        "cardinal",
        demos::check_demo_independence,
    );
    add(
        "demo_gch_nextcard_from_powercard",
        "NextCard := PowerCard identity",
        "PowerCard vs NextCard ground truth",
        CallBound::ExactlyOne,
        "cardinal",
        demos::check_demo_gch,
    );
    out
}

/// Names of the non-demo reductions, the domain of the universality check.
pub fn reduction_names() -> Vec<&'static str> {
    registry()
        .iter()
        .filter(|r| !r.name.starts_with("demo_"))
        .map(|r| r.name)
        .collect()
}

// shared harness plumbing -----------------------------------------------------

fn require_cardinal<'a>(
    u: &'a Universe,
    reduction: &'static str,
) -> Result<&'a crate::universe::CardinalUniverse, ReductionError> {
    u.as_cardinal().ok_or(ReductionError::WrongUniverse {
        reduction,
        expected: "cardinal",
    })
}

fn require_hf<'a>(
    u: &'a Universe,
    reduction: &'static str,
) -> Result<&'a crate::universe::HfUniverse, ReductionError> {
    u.as_hf().ok_or(ReductionError::WrongUniverse {
        reduction,
        expected: "hf",
    })
}

/// The adversarial family of a target when it has one, otherwise the ground
/// truth as the single variant.
fn target_variants(
    u: &Universe,
    principle: Principle,
    seed: u64,
) -> Result<Vec<Effectivizer>, ReductionError> {
    match u.adversarial_family(principle, seed) {
        Ok(family) => Ok(family),
        Err(OracleError::PrincipleUnavailable { .. }) => Ok(vec![u.oracle(principle)?]),
        Err(e) => Err(e.into()),
    }
}

fn universe_label(u: &Universe) -> String {
    match u {
        Universe::Hf(h) => format!("hf(V{})", h.level()),
        Universe::Cardinal(c) => format!(
            "cardinal(bound={}, cardinals={})",
            c.bound(),
            c.cardinals().len()
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete_and_findable() {
        let names = reduction_names();
        assert_eq!(names.len(), 22);
        assert!(find("card_from_pot").is_some());
        assert!(find("demo_independence_powercard_nextcard").is_some());
        assert!(find("no_such_reduction").is_none());
        // no duplicate names
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
    }
}
