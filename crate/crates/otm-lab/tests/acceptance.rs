//! The acceptance suite: one test per criterion, each printing a pass line
//! with its measured time. Every expected value is either computed by an
//! independent oracle living in this file or pinned from hand-derived
//! sources (the program corpus manifest).

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use serde::Deserialize;

use otm_lab::formula::{self, ungodel, Formula, GodelIndex, Var};
use otm_lab::machine::{self, Budget, RunOutcome};
use otm_lab::ordinal::{pair, unpair, Ordinal};
use otm_lab::reductions::{self, CheckOutput, PATTERN_BITS};
use otm_lab::setcode::{self, HfSet, SetCode};
use otm_lab::universe::{
    formula_arg, ord_code, ord_set_code, Effectivizer, Principle, TapeOracle, ToyPredicate,
    Universe,
};

fn nat(n: u64) -> Ordinal {
    Ordinal::from_nat(n)
}

fn finish(criterion: &str, started: Instant, budget: Duration, detail: &str) {
    let elapsed = started.elapsed();
    println!("criterion {criterion}: PASS ({elapsed:.2?}) {detail}");
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its time budget: {elapsed:.2?} >= {budget:.2?}"
    );
}

// ---------------------------------------------------------------------------
// criterion 1: pairing law

/// All CNF ordinals with exponents drawn from {0, 1, 2, ω, ω·2}, at most
/// two terms, coefficients 1..=5: 276 ordinals, 76k ordered pairs.
fn ordinal_corpus() -> Vec<Ordinal> {
    let exponents: Vec<Ordinal> = ["0", "1", "2", "w", "w*2"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let mut out = vec![Ordinal::zero()];
    for (i, e1) in exponents.iter().enumerate() {
        for c1 in 1..=5u64 {
            let t1 = e1.omega_power().mul_by_nat_for_tests(c1);
            out.push(t1.clone());
            for e2 in &exponents[..i] {
                for c2 in 1..=5u64 {
                    out.push(t1.add(&e2.omega_power().mul_by_nat_for_tests(c2)));
                }
            }
        }
    }
    out
}

// the corpus builder needs ω^e·c; addition of c copies keeps the public
// surface free of multiplication
trait MulByNat {
    fn mul_by_nat_for_tests(&self, c: u64) -> Ordinal;
}

impl MulByNat for Ordinal {
    fn mul_by_nat_for_tests(&self, c: u64) -> Ordinal {
        let mut out = Ordinal::zero();
        for _ in 0..c {
            out = out.add(self);
        }
        out
    }
}

#[test]
fn criterion_1_pairing_law() {
    let t = Instant::now();
    let corpus = ordinal_corpus();
    assert!(
        corpus.len() * corpus.len() >= 10_000,
        "corpus too small: {}",
        corpus.len()
    );
    for a in &corpus {
        for b in &corpus {
            let z = pair(a, b);
            let (x, y) = unpair(&z);
            assert_eq!((&x, &y), (a, b), "unpair(pair({a}, {b})) gave ({x}, {y})");
        }
    }
    // brute-force Gödel-order enumeration of natural pairs, an independent
    // rank oracle: sort pairs by (max, first, second) and compare ranks
    let mut enumerated: Vec<(u64, u64)> = Vec::new();
    for m in 0u64..50 {
        for a in 0..m {
            enumerated.push((a, m));
        }
        for b in 0..=m {
            enumerated.push((m, b));
        }
    }
    assert!(enumerated.len() >= 2000);
    for (rank, (a, b)) in enumerated.iter().take(2000).enumerate() {
        assert_eq!(
            pair(&nat(*a), &nat(*b)),
            nat(rank as u64),
            "rank of ({a}, {b})"
        );
    }
    finish(
        "1 (pairing law)",
        t,
        Duration::from_secs(5),
        &format!("{} corpus pairs + 2000 ranks", corpus.len() * corpus.len()),
    );
}

// ---------------------------------------------------------------------------
// criterion 2: well-order checker vs a brute-force oracle

/// Independent well-order verdict over a 4-element field, written against a
/// plain adjacency matrix: irreflexive, transitive, and total on the points
/// that occur in edges.
fn brute_force_well_order(adj: &[[bool; 4]; 4]) -> (bool, usize) {
    let mut in_field = [false; 4];
    for a in 0..4 {
        for b in 0..4 {
            if adj[a][b] {
                in_field[a] = true;
                in_field[b] = true;
            }
        }
    }
    let field_size = in_field.iter().filter(|x| **x).count();
    for a in 0..4 {
        if adj[a][a] {
            return (false, field_size);
        }
        for b in 0..4 {
            for c in 0..4 {
                if adj[a][b] && adj[b][c] && !adj[a][c] {
                    return (false, field_size);
                }
            }
        }
    }
    for a in 0..4 {
        for b in 0..4 {
            if a != b && in_field[a] && in_field[b] && !adj[a][b] && !adj[b][a] {
                return (false, field_size);
            }
        }
    }
    (true, field_size)
}

#[test]
fn criterion_2_well_order_checker() {
    let t = Instant::now();
    let field: Vec<Ordinal> = (0..4).map(nat).collect();
    let pair_codes: Vec<Vec<Ordinal>> = (0..4)
        .map(|a| (0..4).map(|b| pair(&field[a], &field[b])).collect())
        .collect();
    let mut well_ordered = 0usize;
    for mask in 0u32..(1 << 16) {
        let mut members = BTreeSet::new();
        let mut adj = [[false; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                if mask & (1 << (a * 4 + b)) != 0 {
                    adj[a][b] = true;
                    members.insert(pair_codes[a][b].clone());
                }
            }
        }
        let code = SetCode {
            root: Ordinal::zero(),
            members,
        };
        let (expected, field_size) = brute_force_well_order(&adj);
        let got = setcode::is_well_order(&code);
        assert_eq!(got, expected, "disagreement on relation mask {mask:#06x}");
        if expected {
            well_ordered += 1;
            assert_eq!(
                setcode::order_type(&code).unwrap(),
                nat(field_size as u64),
                "order type of mask {mask:#06x}"
            );
        }
    }
    finish(
        "2 (well-order checker)",
        t,
        Duration::from_secs(30),
        &format!("65536 relations, {well_ordered} well-orders"),
    );
}

// ---------------------------------------------------------------------------
// criterion 3: truth evaluator vs an independently written one

/// The second evaluator: no shared code with the library's. It resolves
/// variables through an association list and ranges over carrier indices.
fn eval2(f: &Formula, carrier: &[HfSet], env: &mut Vec<(Var, HfSet)>) -> Option<bool> {
    fn get(env: &[(Var, HfSet)], v: &Var) -> Option<HfSet> {
        env.iter().rev().find(|(name, _)| name == v).map(|(_, x)| x.clone())
    }
    let verdict = match f {
        Formula::Eq(a, b) => get(env, a)? == get(env, b)?,
        Formula::In(a, b) => {
            let a = get(env, a)?;
            get(env, b)?.elements().any(|e| *e == a)
        }
        Formula::Not(s) => !eval2(s, carrier, env)?,
        Formula::And(a, b) => eval2(a, carrier, env)? && eval2(b, carrier, env)?,
        Formula::Or(a, b) => eval2(a, carrier, env)? || eval2(b, carrier, env)?,
        Formula::Implies(a, b) => !eval2(a, carrier, env)? || eval2(b, carrier, env)?,
        Formula::Iff(a, b) => eval2(a, carrier, env)? == eval2(b, carrier, env)?,
        Formula::ForAll(v, s) => {
            let mut all = true;
            for x in carrier {
                env.push((v.clone(), x.clone()));
                let r = eval2(s, carrier, env);
                env.pop();
                match r {
                    Some(true) => {}
                    Some(false) => {
                        all = false;
                        break;
                    }
                    None => return None,
                }
            }
            all
        }
        Formula::Exists(v, s) => {
            let mut any = false;
            for x in carrier {
                env.push((v.clone(), x.clone()));
                let r = eval2(s, carrier, env);
                env.pop();
                match r {
                    Some(true) => {
                        any = true;
                        break;
                    }
                    Some(false) => {}
                    None => return None,
                }
            }
            any
        }
        Formula::ForAllIn(v, bound, s) => {
            let range: Vec<HfSet> = get(env, bound)?.elements().cloned().collect();
            let mut all = true;
            for x in range {
                env.push((v.clone(), x));
                let r = eval2(s, carrier, env);
                env.pop();
                match r {
                    Some(true) => {}
                    Some(false) => {
                        all = false;
                        break;
                    }
                    None => return None,
                }
            }
            all
        }
        Formula::ExistsIn(v, bound, s) => {
            let range: Vec<HfSet> = get(env, bound)?.elements().cloned().collect();
            let mut any = false;
            for x in range {
                env.push((v.clone(), x));
                let r = eval2(s, carrier, env);
                env.pop();
                match r {
                    Some(true) => {
                        any = true;
                        break;
                    }
                    Some(false) => {}
                    None => return None,
                }
            }
            any
        }
    };
    Some(verdict)
}

#[test]
fn criterion_3_truth_evaluator() {
    let t = Instant::now();
    let carrier = HfSet::v_level(4);
    // generated corpus: the first 500 enumerated formulas with at most two
    // free variables and at most two unbounded quantifiers
    let mut corpus = Vec::new();
    let mut idx = 0u64;
    while corpus.len() < 500 {
        let f = ungodel(GodelIndex(idx));
        idx += 1;
        if f.free_vars().len() <= 2 && f.unbounded_quantifier_count() <= 2 {
            corpus.push(f);
        }
    }
    let mut checked = 0usize;
    for f in &corpus {
        let frees = f.free_vars();
        let mut assignments: Vec<Vec<HfSet>> = vec![Vec::new()];
        for _ in 0..frees.len() {
            assignments = assignments
                .into_iter()
                .flat_map(|a| {
                    carrier.iter().map(move |x| {
                        let mut next = a.clone();
                        next.push(x.clone());
                        next
                    })
                })
                .collect();
        }
        for values in assignments {
            let mut asg = formula::Assignment::new();
            let mut env = Vec::new();
            for (v, x) in frees.iter().zip(values.iter()) {
                asg.insert(v.clone(), x.clone());
                env.push((v.clone(), x.clone()));
            }
            let ours = formula::eval(f, &carrier, &asg).unwrap();
            let theirs = eval2(f, &carrier, &mut env).unwrap();
            assert_eq!(ours, theirs, "evaluators disagree on {f} at {values:?}");
            checked += 1;
        }
    }
    finish(
        "3 (truth evaluator)",
        t,
        Duration::from_secs(120),
        &format!("500 formulas, {checked} assignments"),
    );
}

// ---------------------------------------------------------------------------
// criterion 4: machine corpus

#[derive(Deserialize)]
struct ManifestEntry {
    name: String,
    file: String,
    input: SetCode,
    rho: Ordinal,
    #[serde(default)]
    oracle: Option<ManifestOracle>,
    expect: Expectation,
    finite: bool,
}

#[derive(Deserialize)]
struct ManifestOracle {
    universe: serde_json::Value,
    principle: String,
    arity: usize,
}

#[derive(Deserialize)]
struct Expectation {
    outcome: String,
    #[serde(default)]
    clock: Option<Ordinal>,
    #[serde(default)]
    output: Option<Vec<Ordinal>>,
    #[serde(default)]
    depth: Option<usize>,
}

fn programs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("programs")
}

fn load_corpus() -> Vec<ManifestEntry> {
    let manifest = std::fs::read_to_string(programs_dir().join("corpus.json")).unwrap();
    serde_json::from_str(&manifest).unwrap()
}

fn corpus_oracle(entry: &ManifestEntry) -> Box<dyn machine::Oracle> {
    match &entry.oracle {
        None => Box::new(machine::NoOracle),
        Some(o) => {
            let universe = Universe::from_json(&o.universe.to_string()).unwrap();
            let principle: Principle = o.principle.parse().unwrap();
            Box::new(TapeOracle {
                effectivizer: universe.oracle(principle).unwrap(),
                arity: o.arity,
            })
        }
    }
}

fn check_expectation(name: &str, expect: &Expectation, outcome: &RunOutcome) {
    match (expect.outcome.as_str(), outcome) {
        ("halted", RunOutcome::Halted { output, trace, .. }) => {
            if let Some(clock) = &expect.clock {
                assert_eq!(&trace.steps_taken, clock, "{name}: clock");
            }
            if let Some(cells) = &expect.output {
                let want: BTreeSet<Ordinal> = cells.iter().cloned().collect();
                assert_eq!(output.members, want, "{name}: output");
            }
        }
        ("budget-exhausted", RunOutcome::BudgetExhausted { .. }) => {}
        ("diverged", RunOutcome::Diverged { reason, trace }) => {
            if let Some(clock) = &expect.clock {
                assert_eq!(&trace.steps_taken, clock, "{name}: clock");
            }
            if let Some(depth) = expect.depth {
                let machine::DivergenceReason::LoopAtDepth(d) = reason;
                assert_eq!(*d, depth, "{name}: loop depth");
            }
        }
        (want, got) => panic!("{name}: wanted {want}, got {got:?}"),
    }
}

#[test]
fn criterion_4_machine_semantics() {
    let t = Instant::now();
    let corpus = load_corpus();
    assert!(corpus.len() >= 8, "corpus must ship at least 8 programs");
    let transfinite = corpus
        .iter()
        .filter(|e| {
            e.expect.outcome == "halted"
                && e.expect.clock.as_ref().is_some_and(|c| c.nat_value().is_none())
        })
        .count();
    assert!(transfinite >= 2, "need two transfinite halting clocks");

    let budget = Budget::default();
    for entry in &corpus {
        let source = std::fs::read_to_string(programs_dir().join(&entry.file)).unwrap();
        let program = machine::assemble(&source).unwrap();
        let oracle = corpus_oracle(entry);
        let outcome =
            machine::run(&program, &entry.input, &entry.rho, oracle.as_ref(), &budget).unwrap();
        check_expectation(&entry.name, &entry.expect, &outcome);

        // acceleration must not fire early: finite-halting programs agree
        // with plain step-by-step simulation
        if entry.finite {
            let plain = Budget {
                accel_depth: 0,
                ..budget
            };
            let oracle = corpus_oracle(entry);
            let unaccelerated =
                machine::run(&program, &entry.input, &entry.rho, oracle.as_ref(), &plain).unwrap();
            match (&outcome, &unaccelerated) {
                (
                    RunOutcome::Halted {
                        output: o1,
                        trace: t1,
                        ..
                    },
                    RunOutcome::Halted {
                        output: o2,
                        trace: t2,
                        ..
                    },
                ) => {
                    assert_eq!(o1, o2, "{}: accelerated output differs", entry.name);
                    assert_eq!(
                        t1.steps_taken, t2.steps_taken,
                        "{}: accelerated clock differs",
                        entry.name
                    );
                }
                other => panic!("{}: plain/accelerated mismatch {other:?}", entry.name),
            }
        }
    }
    finish(
        "4 (machine semantics)",
        t,
        Duration::from_secs(60),
        &format!("{} corpus programs, {transfinite} transfinite", corpus.len()),
    );
}

// ---------------------------------------------------------------------------
// criteria 5 + 9: reduction universality and the size monitor

fn hf_universe() -> Universe {
    Universe::from_json(r#"{"kind":"hf","level":4}"#).unwrap()
}

fn cardinal_universe() -> Universe {
    Universe::from_json(
        r#"{"kind":"cardinal","bound":"w*2",
            "cardinals":["0","1","2","3","5","8","w","w*2"],
            "beth":{"0":"1","1":"2","2":"3","3":"5","5":"8","8":"w","w":"w*2"}}"#,
    )
    .unwrap()
}

#[test]
fn criterion_5_reduction_universality() {
    let t = Instant::now();
    let hf = hf_universe();
    let cardinal = cardinal_universe();
    let mut total_reports = 0usize;
    let mut with_families = 0usize;
    for name in reductions::reduction_names() {
        let reduction = reductions::find(name).unwrap();
        let universe = match reduction.universe_kind {
            "hf" => &hf,
            _ => &cardinal,
        };
        match reduction.check(universe, 2026).unwrap() {
            CheckOutput::Reports(reports) => {
                assert!(!reports.is_empty(), "{name}: no reports");
                if reports.len() > 1 {
                    with_families += 1;
                    assert!(
                        reports.len() >= 3,
                        "{name}: adversarial family should have >= 3 variants"
                    );
                }
                for r in &reports {
                    assert!(
                        r.failures.is_empty(),
                        "{name}[{}]: {:?}",
                        r.effectivizer_variant,
                        r.failures
                    );
                    assert!(r.inputs_checked > 0, "{name}: empty domain");
                }
                total_reports += reports.len();
            }
            CheckOutput::Demo(_) => panic!("{name}: unexpected demo output"),
        }
    }
    finish(
        "5 (reduction universality)",
        t,
        Duration::from_secs(300),
        &format!(
            "{} reductions, {total_reports} variant reports, {with_families} adversarial families",
            reductions::reduction_names().len()
        ),
    );
}

#[test]
fn criterion_9_size_monitor() {
    let t = Instant::now();
    let mut sep_calls = 0usize;

    let check_log = |oracle: &Effectivizer| {
        let mut seen = 0usize;
        for record in oracle.log() {
            let mut input_field: BTreeSet<Ordinal> = BTreeSet::new();
            for input in &record.inputs {
                input_field.extend(input.field());
            }
            assert!(
                record.output.field().is_subset(&input_field),
                "separation output field escapes its input field: {record:?}"
            );
            seen += 1;
        }
        seen
    };

    // cardinal-structure separation targets
    let cu = cardinal_universe();
    let carrier: Vec<Ordinal> = cu.as_cardinal().unwrap().carrier().to_vec();
    let sep1 = cu.oracle(Principle::Sep(Some(1))).unwrap();
    let sep2 = cu.oracle(Principle::Sep(Some(2))).unwrap();
    for alpha in &carrier {
        let _ = reductions::nextcard_from_sep1(&carrier, &sep1, alpha);
        let _ = reductions::powercard_from_sep2(&carrier, &sep2, alpha);
        let _ = reductions::nextcard_from_sep2_scan(&carrier, &sep2, alpha);
    }
    sep_calls += check_log(&sep1);
    sep_calls += check_log(&sep2);

    // hereditarily finite separation targets
    let hf = hf_universe();
    let hf_u = hf.as_hf().unwrap();
    let sep = hf.oracle(Principle::Sep(None)).unwrap();
    let pot = hf.oracle(Principle::Pot).unwrap();
    let phi: Formula = "E u. u in z".parse().unwrap();
    for p in hf_u.carrier() {
        let _ = reductions::truth_from_sep(&sep, &phi, &[p.clone()]);
    }
    let identity: Formula = "x = y".parse().unwrap();
    let cover: Formula = "x sub y".parse().unwrap();
    for subject in hf_u.carrier() {
        let _ = reductions::rep_from_sep_pot(&sep, &pot, &identity, &[], subject, 4);
        let _ = reductions::coll_from_sep_pot(&sep, &pot, &cover, &[], subject, 4);
    }
    sep_calls += check_log(&sep);

    assert!(sep_calls > 100, "the monitor saw too few calls: {sep_calls}");
    finish(
        "9 (size monitor)",
        t,
        Duration::from_secs(120),
        &format!("{sep_calls} separation calls monitored"),
    );
}

// ---------------------------------------------------------------------------
// criterion 6: call-count contracts

#[test]
fn criterion_6_call_counts() {
    let t = Instant::now();
    let hf = hf_universe();
    let hf_u = hf.as_hf().unwrap();

    // truth_from_sep: exactly one separation call per decided statement
    let sep = hf.oracle(Principle::Sep(None)).unwrap();
    let mut decided = 0usize;
    let mut idx = 0u64;
    while decided < 25 {
        let f = ungodel(GodelIndex(idx));
        idx += 1;
        if f.free_vars().is_empty() {
            sep.reset_log();
            let _ = reductions::truth_from_sep(&sep, &f, &[]).unwrap();
            assert_eq!(sep.call_count(), 1, "truth_from_sep on {f}");
            decided += 1;
        }
    }

    // sep_from_truth: exactly |X| truth calls
    let truth = hf.oracle(Principle::Tnd(2)).unwrap();
    let phi: Formula = "E u. u in z".parse().unwrap();
    for subject in hf_u.carrier() {
        truth.reset_log();
        let _ = reductions::sep_from_truth(&truth, &phi, &[], subject).unwrap();
        assert_eq!(
            truth.call_count(),
            subject.len(),
            "sep_from_truth on {subject}"
        );
    }

    // card_from_pot: exactly one power set call
    let pot = hf.oracle(Principle::Pot).unwrap();
    for a in hf_u.carrier() {
        pot.reset_log();
        let _ = reductions::card_from_pot(&pot, &setcode::encode(a)).unwrap();
        assert_eq!(pot.call_count(), 1, "card_from_pot on {a}");
    }

    // deccard_from_card: exactly one cardinality call
    let cu = cardinal_universe();
    let card = cu.oracle(Principle::Card).unwrap();
    for alpha in cu.as_cardinal().unwrap().carrier() {
        card.reset_log();
        let _ = reductions::deccard_from_card(&card, alpha).unwrap();
        assert_eq!(card.call_count(), 1, "deccard_from_card on {alpha}");
    }

    finish(
        "6 (call-count contracts)",
        t,
        Duration::from_secs(120),
        &format!("{decided} truth bits + three per-input contracts"),
    );
}

// ---------------------------------------------------------------------------
// criterion 7: machine/host cross-check

fn assemble_shipped(file: &str) -> machine::Program {
    let source = std::fs::read_to_string(programs_dir().join(file)).unwrap();
    machine::assemble(&source).unwrap()
}

#[test]
fn criterion_7_machine_host_cross_check() {
    let t = Instant::now();
    // finite cardinal structure: machine scans cannot cross limit gaps, so
    // the assembly cross-check universe is the finite-bound configuration
    let cu = Universe::from_json(
        r#"{"kind":"cardinal","bound":"8","cardinals":["0","1","2","3","5","8"],
            "beth":{"0":"1","1":"2","2":"3","3":"5","5":"8"}}"#,
    )
    .unwrap();
    let carrier: Vec<Ordinal> = cu.as_cardinal().unwrap().carrier().to_vec();
    let plain = Budget {
        accel_depth: 0,
        max_steps_per_segment: 1_000_000,
        ..Budget::default()
    };
    let mut runs = 0usize;

    // deccard_from_card
    let program = assemble_shipped("red_deccard_from_card.otm");
    for alpha in &carrier {
        let card = cu.oracle(Principle::Card).unwrap();
        let host = reductions::deccard_from_card(&card, alpha).unwrap();
        let tape = TapeOracle {
            effectivizer: cu.oracle(Principle::Card).unwrap(),
            arity: 1,
        };
        match machine::run(&program, &ord_code(alpha), &Ordinal::zero(), &tape, &plain).unwrap() {
            RunOutcome::Halted { output, .. } => {
                assert_eq!(
                    output.members,
                    [nat(host as u64)].into_iter().collect::<BTreeSet<_>>(),
                    "deccard_from_card at {alpha}"
                );
            }
            other => panic!("deccard_from_card at {alpha}: {other:?}"),
        }
        runs += 1;
    }

    // nextcard_from_deccard; a host NoNextCardinal corresponds to the
    // machine scanning off to the right and exhausting its budget
    let program = assemble_shipped("red_nextcard_from_deccard.otm");
    let short = Budget {
        accel_depth: 0,
        max_steps_per_segment: 2_000,
        ..Budget::default()
    };
    for alpha in &carrier {
        let dec = cu.oracle(Principle::DecCard).unwrap();
        let host = reductions::nextcard_from_deccard(&carrier, &dec, alpha);
        let tape = TapeOracle {
            effectivizer: cu.oracle(Principle::DecCard).unwrap(),
            arity: 1,
        };
        let outcome =
            machine::run(&program, &ord_code(alpha), &Ordinal::zero(), &tape, &short).unwrap();
        match (host, outcome) {
            (Ok(kappa), RunOutcome::Halted { output, .. }) => {
                assert_eq!(
                    output.members,
                    [kappa.clone()].into_iter().collect::<BTreeSet<_>>(),
                    "nextcard_from_deccard at {alpha}"
                );
            }
            (Err(_), RunOutcome::BudgetExhausted { .. }) => {}
            (host, outcome) => {
                panic!("nextcard_from_deccard at {alpha}: host {host:?} vs machine {outcome:?}")
            }
        }
        runs += 1;
    }

    // truth_from_sep over the hereditarily finite universe: the machine
    // program injects the {∅} subject and answers the truth bit
    let hf = hf_universe();
    let hf_u = hf.as_hf().unwrap();
    let program = assemble_shipped("red_truth_from_sep.otm");
    let formulas: Vec<Formula> = ["E u. u in z", "z = z", "~ z = z", "E u in z. u = u"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    for phi in &formulas {
        for p in hf_u.carrier() {
            let sep = hf.oracle(Principle::Sep(None)).unwrap();
            let host = reductions::truth_from_sep(&sep, phi, &[p.clone()]).unwrap();
            let input = setcode::tuple_code(&[formula_arg(phi), setcode::encode(p)]);
            let rho = input
                .members
                .iter()
                .next_back()
                .cloned()
                .unwrap_or_else(Ordinal::zero)
                .succ()
                .max(nat(9));
            let tape = TapeOracle {
                effectivizer: hf.oracle(Principle::Sep(None)).unwrap(),
                arity: 3,
            };
            match machine::run(&program, &input, &rho, &tape, &plain).unwrap() {
                RunOutcome::Halted { output, .. } => {
                    assert_eq!(
                        output.members,
                        [nat(host as u64)].into_iter().collect::<BTreeSet<_>>(),
                        "truth_from_sep of {phi} at parameter {p}"
                    );
                }
                other => panic!("truth_from_sep of {phi} at {p}: {other:?}"),
            }
            runs += 1;
        }
    }

    finish(
        "7 (machine/host cross-check)",
        t,
        Duration::from_secs(300),
        &format!("{runs} assembly runs"),
    );
}

// ---------------------------------------------------------------------------
// criterion 8: independence demo

#[test]
fn criterion_8_independence_demo() {
    let t = Instant::now();
    let gch = reductions::builtin_gch_config();
    let pattern = reductions::builtin_pattern_config();
    for (label, report) in [
        (
            "power-from-next",
            reductions::demo_independence_powercard_nextcard(&gch, &pattern).unwrap(),
        ),
        (
            "next-from-power",
            reductions::demo_gch_nextcard_from_powercard(&gch, &pattern).unwrap(),
        ),
    ] {
        assert!(
            report.gch_failures.is_empty(),
            "{label}: step-1 config must pass exhaustively: {:?}",
            report.gch_failures
        );
        assert_eq!(
            report.recovered_bits,
            PATTERN_BITS.to_vec(),
            "{label}: recovered bit string"
        );
        let zero_bits = PATTERN_BITS.iter().filter(|b| !**b).count();
        assert_eq!(
            report.pattern_failures.len(),
            zero_bits,
            "{label}: failures must sit exactly at the zero bits"
        );
    }
    finish(
        "8 (independence demo)",
        t,
        Duration::from_secs(10),
        &format!("6-bit pattern, both directions"),
    );
}

// ---------------------------------------------------------------------------
// toy predicate surface used by the cardinal separation oracles

#[test]
fn toy_predicates_expose_their_levels() {
    // not a criterion; pins the interface the separation scans rely on
    assert_eq!(ToyPredicate::NotACardinal.sigma_level(), 1);
    assert_eq!(ToyPredicate::IsCardinal.sigma_level(), 2);
    assert_eq!(ToyPredicate::IsPowerCardOf.sigma_level(), 2);
    let cu = cardinal_universe();
    let sep = cu.oracle(Principle::Sep(Some(2))).unwrap();
    let out = sep
        .call(&[
            otm_lab::universe::nat_code(ToyPredicate::IsCardinal.tag()),
            ord_set_code(&(0..=8).map(nat).collect()),
        ])
        .unwrap();
    let expected: BTreeSet<Ordinal> = [0u64, 1, 2, 3, 5, 8].into_iter().map(nat).collect();
    assert_eq!(out.members, expected);
}
