//! Finite ground-truth models and the effectivizers they induce.
//!
//! Two kinds of universe exist. A hereditarily finite universe has carrier
//! Vₙ and interprets ∈-formulas by Tarskian evaluation; it grounds the
//! scheme principles (separation, replacement, collection), the power set
//! axiom, choice, truth, and set cardinality. A cardinal-structure universe
//! is a toy ordinal line: a bound, a designated finite set of "cardinals",
//! and a partial `beth` function standing in for the continuum function; it
//! grounds the cardinal arithmetic principles, which are trivial in the
//! hereditarily finite world.
//!
//! An [`Effectivizer`] is a callable oracle from set-codes to a set-code
//! with a per-instance call log. The log wrapper is the only access path to
//! an effectivizer's behavior, which is what makes oracle-call accounting
//! trustworthy.

mod oracles;

pub use oracles::{
    effectivizer_satisfies, validate_ac, validate_card_full, validate_coll, validate_pot,
    validate_rep, validate_sep, ToyPredicate,
};

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::rc::Rc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{self, Assignment, EvalError, Formula};
use crate::machine;
use crate::ordinal::Ordinal;
use crate::setcode::{self, CodeError, HfSet, SetCode};

/// Toy-universe principles, named as in the reduction registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Principle {
    /// halting problem; has no ground-truth oracle, only a surrogate
    Hp,
    /// some cardinal above a given ordinal
    GreaterCard,
    /// the least cardinal above a given ordinal
    NextCard,
    /// cardinality of a set, as an ordinal
    Card,
    /// cardinality of a set together with a witnessing bijection
    CardFull,
    /// cardinality of an ordinal
    OrdCard,
    /// cardinality of the power set of an ordinal
    PowerCard,
    /// the is-a-cardinal decision bit
    DecCard,
    /// power set
    Pot,
    /// Σₙ-separation (`None` is the full scheme)
    Sep(Option<u32>),
    /// Σₙ-replacement
    Rep(Option<u32>),
    /// Σₙ-collection
    Coll(Option<u32>),
    /// choice functions
    Ac,
    /// Σₙ truth bits with delegated witnesses
    Tnd(u32),
}

impl std::str::FromStr for Principle {
    type Err = String;

    /// Parses principle names as they appear on the command line: plain
    /// names like `card`, `pot`, `deccard`, or leveled forms `sep:2`,
    /// `rep:1`, `coll:3`, `tnd:2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let (name, level) = match lower.split_once(':') {
            Some((n, l)) => {
                let level: u32 = l
                    .parse()
                    .map_err(|_| format!("bad level in principle `{s}`"))?;
                (n.to_string(), Some(level))
            }
            None => (lower, None),
        };
        match (name.as_str(), level) {
            ("hp", None) => Ok(Principle::Hp),
            ("greatercard", None) => Ok(Principle::GreaterCard),
            ("nextcard", None) => Ok(Principle::NextCard),
            ("card", None) => Ok(Principle::Card),
            ("cardfull", None) => Ok(Principle::CardFull),
            ("ordcard", None) => Ok(Principle::OrdCard),
            ("powercard", None) => Ok(Principle::PowerCard),
            ("deccard", None) => Ok(Principle::DecCard),
            ("pot", None) => Ok(Principle::Pot),
            ("ac", None) => Ok(Principle::Ac),
            ("sep", l) => Ok(Principle::Sep(l)),
            ("rep", l) => Ok(Principle::Rep(l)),
            ("coll", l) => Ok(Principle::Coll(l)),
            ("tnd", Some(n)) => Ok(Principle::Tnd(n)),
            _ => Err(format!("unknown principle `{s}`")),
        }
    }
}

impl fmt::Display for Principle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn leveled(f: &mut fmt::Formatter<'_>, name: &str, n: &Option<u32>) -> fmt::Result {
            match n {
                Some(n) => write!(f, "Sigma_{n}-{name}"),
                None => write!(f, "{name}"),
            }
        }
        match self {
            Principle::Hp => write!(f, "HP"),
            Principle::GreaterCard => write!(f, "GreaterCard"),
            Principle::NextCard => write!(f, "NextCard"),
            Principle::Card => write!(f, "Card"),
            Principle::CardFull => write!(f, "Card(full)"),
            Principle::OrdCard => write!(f, "OrdCard"),
            Principle::PowerCard => write!(f, "PowerCard"),
            Principle::DecCard => write!(f, "DecCard"),
            Principle::Pot => write!(f, "Pot"),
            Principle::Sep(n) => leveled(f, "Sep", n),
            Principle::Rep(n) => leveled(f, "Rep", n),
            Principle::Coll(n) => leveled(f, "Coll", n),
            Principle::Ac => write!(f, "AC"),
            Principle::Tnd(n) => write!(f, "Sigma_{n}-TND"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{principle} is unavailable in a {universe} universe")]
    PrincipleUnavailable { principle: String, universe: String },
    #[error("no cardinal above {above} in this structure")]
    NoNextCardinal { above: Ordinal },
    #[error("beth is undefined at {at}")]
    NoBethValue { at: Ordinal },
    #[error("malformed oracle input: {0}")]
    MalformedInput(String),
    #[error("formula is {found}, beyond the oracle's Sigma_{allowed} contract")]
    LevelExceeded { found: String, allowed: u32 },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("evaluation failed: {0}")]
    Eval(String),
}

impl From<EvalError> for OracleError {
    fn from(e: EvalError) -> Self {
        OracleError::Eval(e.to_string())
    }
}

/// One logged oracle call.
#[derive(Debug, Clone)]
pub struct CallRecord {
    pub inputs: Vec<SetCode>,
    pub output: SetCode,
}

type OracleFn = dyn Fn(&[SetCode]) -> Result<SetCode, OracleError>;

/// A callable oracle with a call log. Cloning shares the behavior and the
/// log, so a reduction and its harness observe the same counts.
#[derive(Clone)]
pub struct Effectivizer {
    name: String,
    func: Rc<OracleFn>,
    log: Rc<RefCell<Vec<CallRecord>>>,
}

impl Effectivizer {
    pub fn from_fn(
        name: impl Into<String>,
        func: impl Fn(&[SetCode]) -> Result<SetCode, OracleError> + 'static,
    ) -> Self {
        Effectivizer {
            name: name.into(),
            func: Rc::new(func),
            log: Rc::new(RefCell::new(Vec::new())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Applies the oracle and logs the call.
    pub fn call(&self, args: &[SetCode]) -> Result<SetCode, OracleError> {
        let output = (self.func)(args)?;
        self.log.borrow_mut().push(CallRecord {
            inputs: args.to_vec(),
            output: output.clone(),
        });
        Ok(output)
    }

    pub fn call_count(&self) -> usize {
        self.log.borrow().len()
    }

    pub fn log(&self) -> Vec<CallRecord> {
        self.log.borrow().clone()
    }

    pub fn reset_log(&self) {
        self.log.borrow_mut().clear();
    }
}

impl fmt::Debug for Effectivizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Effectivizer({}, {} calls)", self.name, self.call_count())
    }
}

/// Wraps a set-level function as a code-level effectivizer: inputs are
/// decoded, the function applied, the result canonically encoded. Output is
/// therefore label-independent: `same_set` inputs give `same_set` outputs.
pub fn encode_effectivizer(
    name: impl Into<String>,
    func: impl Fn(&[HfSet]) -> Result<HfSet, OracleError> + 'static,
) -> Effectivizer {
    Effectivizer::from_fn(name, move |args| {
        let values: Vec<HfSet> = args
            .iter()
            .map(setcode::decode)
            .collect::<Result<_, _>>()?;
        Ok(setcode::encode(&func(&values)?))
    })
}

/// Adapter that lets an [`Effectivizer`] serve as a machine oracle: the
/// miracle-tape content is split as a component-tagged tuple code of the
/// given arity and the output code replaces the tape.
pub struct TapeOracle {
    pub effectivizer: Effectivizer,
    pub arity: usize,
}

impl machine::Oracle for TapeOracle {
    fn apply(&self, input: &SetCode) -> Result<SetCode, String> {
        let args = if self.arity == 1 {
            vec![input.clone()]
        } else {
            setcode::untuple_code(input, self.arity)
        };
        self.effectivizer
            .call(&args)
            .map_err(|e| e.to_string())
    }
}

// ---------------------------------------------------------------------------
// value coding conventions

/// Code of an ordinal value in a cardinal-structure universe: a single mark
/// at position α. This is also what the machine's tapes naturally hold.
pub fn ord_code(alpha: &Ordinal) -> SetCode {
    SetCode::new(Ordinal::zero(), [alpha.clone()])
}

/// Reads a singleton code back as an ordinal.
pub fn code_as_ordinal(code: &SetCode) -> Result<Ordinal, OracleError> {
    let mut it = code.members.iter();
    match (it.next(), it.next()) {
        (Some(a), None) => Ok(a.clone()),
        _ => Err(OracleError::MalformedInput(format!(
            "expected a singleton ordinal code, found {} marks",
            code.members.len()
        ))),
    }
}

/// Code of a set of ordinals in a cardinal-structure universe: the set
/// itself as tape marks.
pub fn ord_set_code(set: &BTreeSet<Ordinal>) -> SetCode {
    SetCode {
        root: Ordinal::zero(),
        members: set.clone(),
    }
}

/// Code of a natural number (formula indices, toy predicate tags, bits).
pub fn nat_code(n: u64) -> SetCode {
    ord_code(&Ordinal::from_nat(n))
}

/// Code of a formula, as the canonical encoding of its syntax set.
pub fn formula_arg(f: &Formula) -> SetCode {
    setcode::encode(&formula::formula_code(f))
}

/// Reads a formula argument back.
pub fn decode_formula_arg(code: &SetCode) -> Result<Formula, OracleError> {
    let set = setcode::decode(code)?;
    formula::formula_decode(&set)
        .ok_or_else(|| OracleError::MalformedInput("not a formula code".to_string()))
}

// ---------------------------------------------------------------------------
// universes

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UniverseConfigError {
    #[error("hf level must be at most 5, got {0}")]
    LevelTooHigh(usize),
    #[error("cardinal structure must contain 0")]
    MissingZero,
    #[error("cardinal {0} lies above the bound")]
    CardinalAboveBound(Ordinal),
    #[error("beth must map cardinals to cardinals; offending entry at {0}")]
    BethOffDomain(Ordinal),
    #[error("beth({0}) must exceed its argument")]
    BethNotInflationary(Ordinal),
    #[error("beth must be strictly increasing on its domain; violated at {0}")]
    BethNotIncreasing(Ordinal),
    #[error("a default carrier needs a bound below w^2; give an explicit carrier")]
    BoundTooLargeForDefaultCarrier,
    #[error("carrier element {0} lies above the bound")]
    CarrierAboveBound(Ordinal),
    #[error("carrier must contain every cardinal; missing {0}")]
    CarrierMissingCardinal(Ordinal),
}

/// Serialized form of a universe, the `--universe` file payload.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum UniverseConfig {
    Hf {
        level: usize,
    },
    Cardinal {
        bound: Ordinal,
        cardinals: Vec<Ordinal>,
        #[serde(default)]
        beth: BTreeMap<Ordinal, Ordinal>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        carrier: Option<Vec<Ordinal>>,
    },
}

/// A hereditarily finite universe: carrier Vₙ. Cloning is cheap and shares
/// the carrier, so oracles can capture their universe.
#[derive(Clone)]
pub struct HfUniverse {
    level: usize,
    carrier: Rc<Vec<HfSet>>,
    carrier_set: Rc<BTreeSet<HfSet>>,
}

impl HfUniverse {
    pub fn new(level: usize) -> Result<Self, UniverseConfigError> {
        if level > 5 {
            return Err(UniverseConfigError::LevelTooHigh(level));
        }
        let carrier: Vec<HfSet> = HfSet::v_level(level);
        let carrier_set = Rc::new(carrier.iter().cloned().collect());
        Ok(HfUniverse {
            level,
            carrier: Rc::new(carrier),
            carrier_set,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn carrier(&self) -> &[HfSet] {
        &self.carrier
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.carrier_set.contains(x)
    }

    /// Satisfaction in this universe.
    pub fn eval(&self, f: &Formula, assignment: &Assignment) -> Result<bool, EvalError> {
        formula::eval(f, &self.carrier, assignment)
    }
}

/// A toy cardinal structure: an initial segment of the ordinals up to
/// `bound`, a designated set of cardinals, a partial beth function, and a
/// finite carrier standing in for the ordinal line in scans.
#[derive(Clone)]
pub struct CardinalUniverse {
    bound: Ordinal,
    cardinals: BTreeSet<Ordinal>,
    beth: BTreeMap<Ordinal, Ordinal>,
    carrier: Vec<Ordinal>,
}

impl CardinalUniverse {
    pub fn new(
        bound: Ordinal,
        cardinals: impl IntoIterator<Item = Ordinal>,
        beth: BTreeMap<Ordinal, Ordinal>,
        carrier: Option<Vec<Ordinal>>,
    ) -> Result<Self, UniverseConfigError> {
        let cardinals: BTreeSet<Ordinal> = cardinals.into_iter().collect();
        if !cardinals.contains(&Ordinal::zero()) {
            return Err(UniverseConfigError::MissingZero);
        }
        if let Some(c) = cardinals.iter().find(|c| *c > &bound) {
            return Err(UniverseConfigError::CardinalAboveBound(c.clone()));
        }
        for (k, v) in &beth {
            // the bound itself may serve as a beth value: the top of the toy
            // structure stands in for the next cardinal beyond the listed ones
            if !cardinals.contains(k) || !(cardinals.contains(v) || *v == bound) {
                return Err(UniverseConfigError::BethOffDomain(k.clone()));
            }
            if v <= k {
                return Err(UniverseConfigError::BethNotInflationary(k.clone()));
            }
        }
        // strictly increasing on the domain: BTreeMap iterates keys in order
        let mut prev: Option<&Ordinal> = None;
        for (k, v) in &beth {
            if let Some(p) = prev {
                if v <= p {
                    return Err(UniverseConfigError::BethNotIncreasing(k.clone()));
                }
            }
            prev = Some(v);
        }
        let carrier = match carrier {
            Some(c) => {
                if let Some(x) = c.iter().find(|x| *x > &bound) {
                    return Err(UniverseConfigError::CarrierAboveBound(x.clone()));
                }
                let set: BTreeSet<Ordinal> = c.into_iter().collect();
                if let Some(missing) = cardinals.iter().find(|c| !set.contains(c)) {
                    return Err(UniverseConfigError::CarrierMissingCardinal(missing.clone()));
                }
                set.into_iter().collect()
            }
            None => default_carrier(&bound, &cardinals, &beth)?,
        };
        Ok(CardinalUniverse {
            bound,
            cardinals,
            beth,
            carrier,
        })
    }

    pub fn bound(&self) -> &Ordinal {
        &self.bound
    }

    pub fn cardinals(&self) -> &BTreeSet<Ordinal> {
        &self.cardinals
    }

    pub fn beth(&self, k: &Ordinal) -> Option<&Ordinal> {
        self.beth.get(k)
    }

    pub fn beth_domain(&self) -> impl Iterator<Item = &Ordinal> {
        self.beth.keys()
    }

    /// The finite stand-in for the ordinal line: scans iterate over it in
    /// order. Contains every cardinal.
    pub fn carrier(&self) -> &[Ordinal] {
        &self.carrier
    }

    pub fn is_cardinal(&self, alpha: &Ordinal) -> bool {
        self.cardinals.contains(alpha)
    }

    /// card(α) = the largest cardinal ≤ α. Total because 0 is a cardinal.
    pub fn card_of(&self, alpha: &Ordinal) -> Ordinal {
        self.cardinals
            .iter()
            .filter(|c| *c <= alpha)
            .next_back()
            .cloned()
            .expect("0 is always a cardinal")
    }

    /// The least cardinal strictly above α, if any.
    pub fn next_card(&self, alpha: &Ordinal) -> Option<Ordinal> {
        self.cardinals.iter().find(|c| *c > alpha).cloned()
    }

    /// PowerCard(α) = beth(card(α)).
    pub fn power_card(&self, alpha: &Ordinal) -> Result<Ordinal, OracleError> {
        let k = self.card_of(alpha);
        self.beth
            .get(&k)
            .cloned()
            .ok_or(OracleError::NoBethValue { at: k })
    }
}

/// Default carrier for a cardinal structure: every ω-block base below the
/// bound, offsets up to a little past the largest finite offset mentioned by
/// the structure, plus the bound itself.
fn default_carrier(
    bound: &Ordinal,
    cardinals: &BTreeSet<Ordinal>,
    beth: &BTreeMap<Ordinal, Ordinal>,
) -> Result<Vec<Ordinal>, UniverseConfigError> {
    let omega_sq: Ordinal = Ordinal::omega().omega_power();
    if bound >= &omega_sq {
        return Err(UniverseConfigError::BoundTooLargeForDefaultCarrier);
    }
    // bound < ω², so every anchor is ω·b + r with r finite
    let finite_offset = |o: &Ordinal| -> u64 {
        let mut lambda = Ordinal::zero();
        loop {
            let next = lambda.add(&Ordinal::omega());
            if &next <= o {
                lambda = next;
            } else {
                break;
            }
        }
        lambda
            .sub_from(o)
            .and_then(|r| r.nat_value())
            .unwrap_or(0)
    };
    let mut max_offset = 0u64;
    for o in cardinals.iter().chain(beth.values()).chain([bound]) {
        max_offset = max_offset.max(finite_offset(o));
    }
    let pad = max_offset + 2;
    let mut out: BTreeSet<Ordinal> = BTreeSet::new();
    let mut base = Ordinal::zero();
    loop {
        for j in 0..=pad {
            let x = base.add(&Ordinal::from_nat(j));
            if &x <= bound {
                out.insert(x);
            }
        }
        base = base.add(&Ordinal::omega());
        if &base > bound {
            break;
        }
    }
    out.insert(bound.clone());
    out.extend(cardinals.iter().cloned());
    Ok(out.into_iter().collect())
}

/// A ground-truth model of either kind.
pub enum Universe {
    Hf(HfUniverse),
    Cardinal(CardinalUniverse),
}

impl Universe {
    pub fn from_config(config: &UniverseConfig) -> Result<Self, UniverseConfigError> {
        match config {
            UniverseConfig::Hf { level } => Ok(Universe::Hf(HfUniverse::new(*level)?)),
            UniverseConfig::Cardinal {
                bound,
                cardinals,
                beth,
                carrier,
            } => Ok(Universe::Cardinal(CardinalUniverse::new(
                bound.clone(),
                cardinals.iter().cloned(),
                beth.clone(),
                carrier.clone(),
            )?)),
        }
    }

    pub fn from_json(json: &str) -> Result<Self, String> {
        let config: UniverseConfig = serde_json::from_str(json).map_err(|e| e.to_string())?;
        Universe::from_config(&config).map_err(|e| e.to_string())
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Universe::Hf(_) => "hf",
            Universe::Cardinal(_) => "cardinal",
        }
    }

    pub fn as_hf(&self) -> Option<&HfUniverse> {
        match self {
            Universe::Hf(u) => Some(u),
            _ => None,
        }
    }

    pub fn as_cardinal(&self) -> Option<&CardinalUniverse> {
        match self {
            Universe::Cardinal(u) => Some(u),
            _ => None,
        }
    }

    /// The ground-truth effectivizer of a principle, or
    /// `PrincipleUnavailable` when the principle is not meaningful in this
    /// universe kind.
    pub fn oracle(&self, principle: Principle) -> Result<Effectivizer, OracleError> {
        oracles::ground_truth(self, principle)
    }

    /// A finite family of valid but non-canonical effectivizers for
    /// principles with non-unique witnesses.
    pub fn adversarial_family(
        &self,
        principle: Principle,
        seed: u64,
    ) -> Result<Vec<Effectivizer>, OracleError> {
        oracles::adversarial_family(self, principle, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_config_shapes() {
        let u = Universe::from_json(r#"{"kind":"hf","level":4}"#).unwrap();
        assert_eq!(u.as_hf().unwrap().carrier().len(), 16);

        let u = Universe::from_json(
            r#"{"kind":"cardinal","bound":"w*2",
                "cardinals":["0","1","2","3","5","8","w"],
                "beth":{"0":"1","1":"2","2":"3","3":"5","5":"8","8":"w","w":"w*2"}}"#,
        )
        .unwrap();
        let c = u.as_cardinal().unwrap();
        assert_eq!(c.card_of(&"4".parse().unwrap()), "3".parse().unwrap());
        assert_eq!(
            c.next_card(&"3".parse().unwrap()),
            Some("5".parse().unwrap())
        );
        assert_eq!(c.next_card(&"w*2".parse().unwrap()), None);
        assert!(c.carrier().contains(&"w + 1".parse().unwrap()));
        assert!(c.carrier().iter().all(|x| x <= c.bound()));
    }

    #[test]
    fn beth_validation_rejects_bad_structures() {
        let bad = Universe::from_json(
            r#"{"kind":"cardinal","bound":"8","cardinals":["0","1","2"],
                "beth":{"1":"1"}}"#,
        );
        assert!(bad.is_err());
        let bad = Universe::from_json(
            r#"{"kind":"cardinal","bound":"8","cardinals":["1","2"],"beth":{}}"#,
        );
        assert!(bad.is_err(), "0 must be a cardinal");
    }

    #[test]
    fn finite_bound_gets_a_consecutive_carrier() {
        let u = Universe::from_json(
            r#"{"kind":"cardinal","bound":"8","cardinals":["0","1","2","3","5","8"],"beth":{}}"#,
        )
        .unwrap();
        let c = u.as_cardinal().unwrap();
        let expected: Vec<Ordinal> = (0..=8).map(Ordinal::from_nat).collect();
        for x in &expected {
            assert!(c.carrier().contains(x), "carrier should contain {x}");
        }
    }

    #[test]
    fn effectivizer_logs_calls() {
        let e = Effectivizer::from_fn("echo", |args| {
            Ok(args.first().cloned().unwrap_or_else(SetCode::empty))
        });
        let code = ord_code(&Ordinal::from_nat(3));
        e.call(&[code.clone()]).unwrap();
        e.call(&[code.clone(), code.clone()]).unwrap();
        assert_eq!(e.call_count(), 2);
        assert_eq!(e.log()[1].inputs.len(), 2);
        e.reset_log();
        assert_eq!(e.call_count(), 0);
    }

    #[test]
    fn ordinal_codes_roundtrip() {
        let alpha: Ordinal = "w + 3".parse().unwrap();
        assert_eq!(code_as_ordinal(&ord_code(&alpha)).unwrap(), alpha);
        assert!(code_as_ordinal(&SetCode::empty()).is_err());
    }
}
