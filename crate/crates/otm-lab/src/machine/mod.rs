//! The OTM simulator: ordinal-indexed sparse tapes, a single synchronized
//! head, the liminf limit rule, ordinal parameters, and an oracle ("miracle")
//! tape whose coded content an oracle call replaces wholesale.
//!
//! True transfinite running time is replaced by cycle-detecting acceleration:
//! a deterministic machine whose full configuration (state, head, tape
//! supports) repeats within a segment is provably periodic, so the liminf
//! configuration at the next limit time is computable from the cycle.
//! Repetition among limit configurations ascends to ω²-multiples, and so on
//! up to the budget's acceleration depth. A head escaping to infinity never
//! repeats a configuration and is reported as budget exhaustion, not
//! accelerated.

mod asm;

pub use asm::{assemble, AssemblyError};

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::setcode::SetCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TapeRole {
    Input,
    Work,
    Output,
    Oracle,
    Scratch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReadPattern {
    Zero,
    One,
    Any,
}

impl ReadPattern {
    fn matches(self, symbol: bool) -> bool {
        match self {
            ReadPattern::Zero => !symbol,
            ReadPattern::One => symbol,
            ReadPattern::Any => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WriteAction {
    Zero,
    One,
    Keep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Left,
    Right,
    Stay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    None,
    OracleCall,
    Halt,
}

#[derive(Debug, Clone)]
pub struct Rule {
    pub reads: Vec<ReadPattern>,
    pub writes: Vec<WriteAction>,
    pub movement: Move,
    pub next: usize,
    pub action: Action,
}

/// A validated machine program. States are indexed in program order (order
/// of first appearance in the source), which is also the order the liminf
/// rule minimizes over.
#[derive(Debug, Clone)]
pub struct Program {
    state_names: Vec<String>,
    tapes: Vec<TapeRole>,
    start: usize,
    /// per state, rules in declaration order; first match wins
    rules: Vec<Vec<Rule>>,
}

impl Program {
    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_name(&self, index: usize) -> &str {
        &self.state_names[index]
    }

    pub fn tape_count(&self) -> usize {
        self.tapes.len()
    }

    pub fn tapes(&self) -> &[TapeRole] {
        &self.tapes
    }

    pub fn start_state(&self) -> usize {
        self.start
    }

    fn tape_with_role(&self, role: TapeRole) -> Option<usize> {
        self.tapes.iter().position(|r| *r == role)
    }

    pub fn input_tape(&self) -> Option<usize> {
        self.tape_with_role(TapeRole::Input)
    }

    pub fn output_tape(&self) -> Option<usize> {
        self.tape_with_role(TapeRole::Output)
    }

    pub fn oracle_tape(&self) -> Option<usize> {
        self.tape_with_role(TapeRole::Oracle)
    }

    pub fn scratch_tape(&self) -> Option<usize> {
        self.tape_with_role(TapeRole::Scratch)
    }

    fn find_rule(&self, state: usize, symbols: &[bool]) -> Option<&Rule> {
        self.rules[state]
            .iter()
            .find(|r| r.reads.iter().zip(symbols).all(|(p, s)| p.matches(*s)))
    }
}

/// A full machine configuration. Tape contents are the sparse supports: the
/// set of positions holding 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub clock: Ordinal,
    pub state: usize,
    pub head: Ordinal,
    pub tapes: Vec<BTreeSet<Ordinal>>,
    pub halted: bool,
}

impl Config {
    /// Everything the successor step depends on; the cycle-detection key.
    fn key(&self) -> ConfigKey {
        ConfigKey {
            state: self.state,
            head: self.head.clone(),
            tapes: self.tapes.clone(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct ConfigKey {
    state: usize,
    head: Ordinal,
    tapes: Vec<BTreeSet<Ordinal>>,
}

/// One oracle call as it appears in the trace.
#[derive(Debug, Clone, Serialize)]
pub struct OracleCallRecord {
    pub clock: Ordinal,
    pub input: SetCode,
    pub output: SetCode,
}

/// What a run leaves behind besides its outcome.
#[derive(Debug, Clone, Default)]
pub struct Trace {
    pub oracle_calls: Vec<OracleCallRecord>,
    pub steps_taken: Ordinal,
    pub max_support: usize,
}

/// The function behind the miracle tape: on an oracle call the coded tape
/// content is handed to `apply` and replaces it with the result.
pub trait Oracle {
    fn apply(&self, input: &SetCode) -> Result<SetCode, String>;
}

/// An oracle slot with nothing attached; any call is an error.
pub struct NoOracle;

impl Oracle for NoOracle {
    fn apply(&self, _input: &SetCode) -> Result<SetCode, String> {
        Err("no oracle attached to this run".to_string())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MachineError {
    #[error("invalid oracle input at clock {clock}: {message}")]
    InvalidOracleInput { clock: Ordinal, message: String },
    #[error("no transition for state `{state}` reading {symbols:?} at clock {clock}")]
    MissingTransition {
        state: String,
        symbols: Vec<bool>,
        clock: Ordinal,
    },
    #[error("machine already halted")]
    AlreadyHalted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivergenceReason {
    /// A cycle closed at the top acceleration level with no escape.
    LoopAtDepth(usize),
}

impl fmt::Display for DivergenceReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivergenceReason::LoopAtDepth(d) => write!(f, "loop at acceleration depth {d}"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum RunOutcome {
    Halted {
        output: SetCode,
        trace: Trace,
        final_config: Config,
    },
    Diverged {
        reason: DivergenceReason,
        trace: Trace,
    },
    BudgetExhausted {
        at_clock: Ordinal,
        trace: Trace,
    },
}

/// Step, jump, and depth limits for a run.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// successor steps allowed within one limit segment
    pub max_steps_per_segment: u64,
    /// total limit jumps across all levels
    pub max_limit_jumps: u64,
    /// highest acceleration level: 1 reaches ω-multiples, 2 reaches
    /// ω²-multiples, 0 disables acceleration entirely
    pub accel_depth: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps_per_segment: 100_000,
            max_limit_jumps: 64,
            accel_depth: 2,
        }
    }
}

/// The starting configuration: input code on the input tape, the parameter ρ
/// as a single pre-marked cell at position ρ of the scratch tape.
pub fn initial_config(program: &Program, input: &SetCode, rho: &Ordinal) -> Config {
    let mut tapes = vec![BTreeSet::new(); program.tape_count()];
    if let Some(t) = program.input_tape() {
        tapes[t] = input.members.clone();
    }
    if let Some(t) = program.scratch_tape() {
        tapes[t].insert(rho.clone());
    }
    Config {
        clock: Ordinal::zero(),
        state: program.start_state(),
        head: Ordinal::zero(),
        tapes,
        halted: false,
    }
}

/// One successor step. Writes apply first; an oracle call then replaces the
/// oracle tape's coded content with the oracle's output; the head moves and
/// the state changes last. Moving left from a limit head position resets the
/// head to 0 (and stays at 0 when already there).
pub fn step(
    program: &Program,
    config: &Config,
    oracle: &dyn Oracle,
) -> Result<(Config, Option<OracleCallRecord>), MachineError> {
    if config.halted {
        return Err(MachineError::AlreadyHalted);
    }
    let symbols: Vec<bool> = config
        .tapes
        .iter()
        .map(|t| t.contains(&config.head))
        .collect();
    let rule = program
        .find_rule(config.state, &symbols)
        .ok_or_else(|| MachineError::MissingTransition {
            state: program.state_name(config.state).to_string(),
            symbols: symbols.clone(),
            clock: config.clock.clone(),
        })?
        .clone();

    let mut next = config.clone();
    for (tape, write) in next.tapes.iter_mut().zip(&rule.writes) {
        match write {
            WriteAction::Zero => {
                tape.remove(&config.head);
            }
            WriteAction::One => {
                tape.insert(config.head.clone());
            }
            WriteAction::Keep => {}
        }
    }

    let mut call_record = None;
    if rule.action == Action::OracleCall {
        let t = program
            .oracle_tape()
            .expect("assembly guarantees an oracle tape for oracle calls");
        let input_code = SetCode {
            root: Ordinal::zero(),
            members: next.tapes[t].clone(),
        };
        let output_code =
            oracle
                .apply(&input_code)
                .map_err(|message| MachineError::InvalidOracleInput {
                    clock: config.clock.clone(),
                    message,
                })?;
        next.tapes[t] = output_code.members.clone();
        call_record = Some(OracleCallRecord {
            clock: config.clock.clone(),
            input: input_code,
            output: output_code,
        });
    }

    next.head = match rule.movement {
        Move::Stay => next.head,
        Move::Right => next.head.succ(),
        Move::Left => match next.head.pred() {
            Some(h) => h,
            // limit or zero: reset to the start of the tape
            None => Ordinal::zero(),
        },
    };
    next.state = rule.next;
    next.clock = config.clock.succ();
    if rule.action == Action::Halt {
        next.halted = true;
    }
    Ok((next, call_record))
}

/// Componentwise liminf over one period of an eventually-periodic
/// configuration sequence: minimal state index, minimal head position, and a
/// cell holds 1 exactly when it holds 1 throughout the period. The clock is
/// supplied by the caller (the limit being jumped to).
pub fn limit_config(cycle: &[Config], clock: Ordinal) -> Config {
    assert!(!cycle.is_empty(), "liminf needs a nonempty cycle");
    let state = cycle.iter().map(|c| c.state).min().unwrap();
    let head = cycle.iter().map(|c| c.head.clone()).min().unwrap();
    let tape_count = cycle[0].tapes.len();
    let mut tapes = Vec::with_capacity(tape_count);
    for t in 0..tape_count {
        let mut stable = cycle[0].tapes[t].clone();
        for c in &cycle[1..] {
            stable = stable.intersection(&c.tapes[t]).cloned().collect();
        }
        tapes.push(stable);
    }
    Config {
        clock,
        state,
        head,
        tapes,
        halted: false,
    }
}

/// Runs a program to halt, divergence, or budget exhaustion.
pub fn run(
    program: &Program,
    input: &SetCode,
    rho: &Ordinal,
    oracle: &dyn Oracle,
    budget: &Budget,
) -> Result<RunOutcome, MachineError> {
    if budget.accel_depth == 0 {
        return run_plain(program, input, rho, oracle, budget);
    }
    let mut config = initial_config(program, input, rho);
    let mut trace = Trace::default();
    let mut timeline: Vec<Config> = Vec::new();
    // seen[k]: key -> timeline index, for configurations standing at level k
    let mut seen: Vec<HashMap<ConfigKey, usize>> = vec![HashMap::new(); budget.accel_depth + 1];
    let mut segment_steps = 0u64;
    let mut jumps = 0u64;

    fn register(
        timeline: &mut Vec<Config>,
        seen: &mut [HashMap<ConfigKey, usize>],
        level: usize,
        config: &Config,
    ) {
        let idx = timeline.len();
        timeline.push(config.clone());
        for map in seen.iter_mut().take(level + 1) {
            map.insert(config.key(), idx);
        }
    }

    register(&mut timeline, &mut seen, 0, &config);

    loop {
        if config.halted {
            let output_members = program
                .output_tape()
                .map(|t| config.tapes[t].clone())
                .unwrap_or_default();
            trace.steps_taken = config.clock.clone();
            return Ok(RunOutcome::Halted {
                output: SetCode {
                    root: Ordinal::zero(),
                    members: output_members,
                },
                trace,
                final_config: config,
            });
        }
        if segment_steps >= budget.max_steps_per_segment {
            trace.steps_taken = config.clock.clone();
            return Ok(RunOutcome::BudgetExhausted {
                at_clock: config.clock,
                trace,
            });
        }

        let (next, call) = step(program, &config, oracle)?;
        segment_steps += 1;
        if let Some(record) = call {
            trace.oracle_calls.push(record);
        }
        let support: usize = next.tapes.iter().map(|t| t.len()).sum();
        trace.max_support = trace.max_support.max(support);
        config = next;

        if config.halted {
            continue;
        }

        // cycle detection, ascending through the acceleration levels; a
        // limit configuration produced by a jump is itself checked against
        // earlier configurations at its own level before being recorded
        let mut level = 0;
        loop {
            match seen.get(level).and_then(|m| m.get(&config.key())) {
                None => {
                    register(&mut timeline, &mut seen, level, &config);
                    break;
                }
                Some(&first_idx) => {
                    if level + 1 > budget.accel_depth {
                        trace.steps_taken = config.clock.clone();
                        return Ok(RunOutcome::Diverged {
                            reason: DivergenceReason::LoopAtDepth(level),
                            trace,
                        });
                    }
                    if jumps >= budget.max_limit_jumps {
                        trace.steps_taken = config.clock.clone();
                        return Ok(RunOutcome::BudgetExhausted {
                            at_clock: config.clock,
                            trace,
                        });
                    }
                    // everything since the first occurrence recurs cofinally
                    // below the limit being jumped to; nothing in the slice
                    // outranks this level, since a higher jump would have
                    // cleared the map the first occurrence was found in
                    let cycle: Vec<Config> = timeline[first_idx..].to_vec();
                    let target = config.clock.next_limit_at(level as u32 + 1);
                    config = limit_config(&cycle, target);
                    jumps += 1;
                    segment_steps = 0;
                    for map in seen.iter_mut().take(level + 1) {
                        map.clear();
                    }
                    level += 1;
                }
            }
        }
    }
}

/// Plain finite simulation: no cycle detection, no configuration history.
/// This is what acceleration depth 0 means, and what the acceleration
/// soundness checks compare against.
fn run_plain(
    program: &Program,
    input: &SetCode,
    rho: &Ordinal,
    oracle: &dyn Oracle,
    budget: &Budget,
) -> Result<RunOutcome, MachineError> {
    let mut config = initial_config(program, input, rho);
    let mut trace = Trace::default();
    for _ in 0..budget.max_steps_per_segment {
        if config.halted {
            break;
        }
        let (next, call) = step(program, &config, oracle)?;
        if let Some(record) = call {
            trace.oracle_calls.push(record);
        }
        let support: usize = next.tapes.iter().map(|t| t.len()).sum();
        trace.max_support = trace.max_support.max(support);
        config = next;
    }
    trace.steps_taken = config.clock.clone();
    if config.halted {
        let output_members = program
            .output_tape()
            .map(|t| config.tapes[t].clone())
            .unwrap_or_default();
        Ok(RunOutcome::Halted {
            output: SetCode {
                root: Ordinal::zero(),
                members: output_members,
            },
            trace,
            final_config: config,
        })
    } else {
        Ok(RunOutcome::BudgetExhausted {
            at_clock: config.clock,
            trace,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::Ordinal;

    fn nat(n: u64) -> Ordinal {
        Ordinal::from_nat(n)
    }

    fn ord(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    const RIGHT_MOVER: &str = "
        tapes input work output
        # slides right forever
        go * * * -> - - - R go
    ";

    const FIVE_STEP: &str = "
        tapes input work output
        s0 * * * -> - - - R s1
        s1 * * * -> - - - R s2
        s2 * * * -> - - - R s3
        s3 * * * -> - - - R s4
        s4 * * * -> - 1 - S s4 halt
    ";

    // tape 4 is a second work tape holding the home marker
    const FLASH_THEN_HALT: &str = "
        tapes input work output scratch work
        # paint cells 0 and 1 forever; the liminf lands in `paint` at head 0
        # where the home marker distinguishes the limit from the in-cycle
        # position 1
        start * * * * * -> - - - - 1 R paint
        paint * * * * 0 -> - 1 - - - L back
        paint * * * * 1 -> - - 1 - - S paint halt
        back  * * * * * -> - 1 - - - R paint
    ";

    #[test]
    fn five_step_program_halts_with_clock_five() {
        let p = assemble(FIVE_STEP).unwrap();
        let out = run(
            &p,
            &SetCode::empty(),
            &Ordinal::zero(),
            &NoOracle,
            &Budget::default(),
        )
        .unwrap();
        match out {
            RunOutcome::Halted { trace, .. } => assert_eq!(trace.steps_taken, nat(5)),
            other => panic!("expected halt, got {other:?}"),
        }
    }

    #[test]
    fn right_mover_exhausts_budget() {
        let p = assemble(RIGHT_MOVER).unwrap();
        let budget = Budget {
            max_steps_per_segment: 500,
            ..Budget::default()
        };
        let out = run(&p, &SetCode::empty(), &Ordinal::zero(), &NoOracle, &budget).unwrap();
        assert!(matches!(out, RunOutcome::BudgetExhausted { .. }));
    }

    #[test]
    fn flash_program_halts_just_past_omega() {
        let p = assemble(FLASH_THEN_HALT).unwrap();
        let out = run(
            &p,
            &SetCode::empty(),
            &Ordinal::zero(),
            &NoOracle,
            &Budget::default(),
        )
        .unwrap();
        match out {
            RunOutcome::Halted {
                trace,
                output,
                final_config,
            } => {
                assert_eq!(trace.steps_taken, ord("w + 1"));
                assert_eq!(final_config.clock, ord("w + 1"));
                assert_eq!(output.members, [nat(0)].into_iter().collect());
            }
            other => panic!("expected halt, got {other:?}"),
        }
    }

    #[test]
    fn stationary_loop_diverges_at_depth() {
        let src = "
            tapes input work output
            a * * * -> - - - S b
            b * * * -> - - - S a
        ";
        let p = assemble(src).unwrap();
        let out = run(
            &p,
            &SetCode::empty(),
            &Ordinal::zero(),
            &NoOracle,
            &Budget::default(),
        )
        .unwrap();
        match out {
            RunOutcome::Diverged { reason, .. } => {
                assert_eq!(reason, DivergenceReason::LoopAtDepth(2));
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn left_from_limit_resets_head() {
        let src = "
            tapes input work output
            a * * * -> - - - L a
        ";
        let p = assemble(src).unwrap();
        let mut c = initial_config(&p, &SetCode::empty(), &Ordinal::zero());
        c.head = ord("w");
        let (next, _) = step(&p, &c, &NoOracle).unwrap();
        assert_eq!(next.head, Ordinal::zero());
        // and left from 0 stays at 0
        let (next2, _) = step(&p, &next, &NoOracle).unwrap();
        assert_eq!(next2.head, Ordinal::zero());
    }

    #[test]
    fn liminf_of_flashing_cell_is_zero() {
        let mut a = Config {
            clock: nat(0),
            state: 1,
            head: nat(2),
            tapes: vec![BTreeSet::new()],
            halted: false,
        };
        let mut b = a.clone();
        a.tapes[0].insert(nat(0)); // cell 0 flashes: present in a, absent in b
        b.state = 2;
        b.head = nat(1);
        b.tapes[0].insert(nat(1)); // cell 1 flashes the other way
        let lim = limit_config(&[a, b], ord("w"));
        assert_eq!(lim.state, 1);
        assert_eq!(lim.head, nat(1));
        assert!(lim.tapes[0].is_empty());
        // a constant cycle reproduces itself
        let c = Config {
            clock: nat(7),
            state: 3,
            head: nat(4),
            tapes: vec![[nat(4)].into_iter().collect()],
            halted: false,
        };
        let lim = limit_config(&[c.clone(), c.clone()], ord("w*2"));
        assert_eq!((lim.state, lim.head), (c.state, c.head));
        assert_eq!(lim.tapes, c.tapes);
    }

    #[test]
    fn determinism_across_reruns() {
        let p = assemble(FLASH_THEN_HALT).unwrap();
        let run_once = || {
            match run(
                &p,
                &SetCode::empty(),
                &Ordinal::zero(),
                &NoOracle,
                &Budget::default(),
            )
            .unwrap()
            {
                RunOutcome::Halted {
                    output,
                    trace,
                    final_config,
                } => (output, trace.steps_taken, final_config),
                other => panic!("expected halt, got {other:?}"),
            }
        };
        let (o1, s1, c1) = run_once();
        let (o2, s2, c2) = run_once();
        assert_eq!(o1, o2);
        assert_eq!(s1, s2);
        assert_eq!(c1, c2);
    }
}
