//! Line-oriented assembly for machine programs.
//!
//! A program starts with a `tapes` directive naming the tape roles in order,
//! optionally a `start` directive, then one transition per line:
//!
//! ```text
//! tapes input oracle output scratch work
//! start seek
//! # seek the input mark
//! seek 0 * * * * -> - - - - - R seek
//! seek 1 * * * * -> - 1 - - - S call oracle
//! call * * * * * -> - - - - - S done halt
//! done * * * * * -> - - - - - S done
//! ```
//!
//! Reads are `0`, `1`, or `*` (any); writes are `0`, `1`, or `-` (keep).
//! Within a state, rules are tried in declaration order and the first match
//! wins; two rules with identical read patterns are a duplicate-transition
//! error. The optional trailing word is `oracle` or `halt`. States are
//! indexed by first appearance, the order the liminf rule minimizes over.

use std::collections::HashMap;

use thiserror::Error;

use super::{Action, Move, Program, ReadPattern, Rule, TapeRole, WriteAction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AssemblyError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate transition for state `{state}` on identical reads")]
    DuplicateTransition { line: usize, state: String },
    #[error("unknown state `{state}` used as a transition target")]
    UnknownState { state: String },
    #[error("missing `tapes` directive")]
    MissingTapes,
    #[error("program has no transitions")]
    Empty,
    #[error("oracle call on line {line} but no oracle tape is declared")]
    NoOracleTape { line: usize },
    #[error("start state `{state}` has no transitions")]
    UnknownStart { state: String },
}

fn syntax(line: usize, message: impl Into<String>) -> AssemblyError {
    AssemblyError::Syntax {
        line,
        message: message.into(),
    }
}

pub fn assemble(source: &str) -> Result<Program, AssemblyError> {
    let mut tapes: Option<Vec<TapeRole>> = None;
    let mut start_name: Option<String> = None;
    let mut state_names: Vec<String> = Vec::new();
    let mut state_index: HashMap<String, usize> = HashMap::new();
    let mut raw_rules: Vec<(usize, usize, Vec<ReadPattern>, Rule)> = Vec::new();
    let mut pending_targets: Vec<(String, usize)> = Vec::new();

    let intern =
        |name: &str, state_names: &mut Vec<String>, state_index: &mut HashMap<String, usize>| {
            *state_index.entry(name.to_string()).or_insert_with(|| {
                state_names.push(name.to_string());
                state_names.len() - 1
            })
        };

    for (lineno, raw) in source.lines().enumerate() {
        let line = lineno + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let words: Vec<&str> = text.split_whitespace().collect();
        let is_transition = words.contains(&"->");
        match words[0] {
            "tapes" if !is_transition => {
                if tapes.is_some() {
                    return Err(syntax(line, "duplicate `tapes` directive"));
                }
                let mut roles = Vec::new();
                for w in &words[1..] {
                    roles.push(match *w {
                        "input" => TapeRole::Input,
                        "work" => TapeRole::Work,
                        "output" => TapeRole::Output,
                        "oracle" => TapeRole::Oracle,
                        "scratch" => TapeRole::Scratch,
                        other => return Err(syntax(line, format!("unknown tape role `{other}`"))),
                    });
                }
                if roles.is_empty() {
                    return Err(syntax(line, "`tapes` needs at least one role"));
                }
                for unique in [TapeRole::Input, TapeRole::Output, TapeRole::Oracle, TapeRole::Scratch] {
                    if roles.iter().filter(|r| **r == unique).count() > 1 {
                        return Err(syntax(line, format!("more than one {unique:?} tape")));
                    }
                }
                tapes = Some(roles);
            }
            "start" if !is_transition => {
                if start_name.is_some() {
                    return Err(syntax(line, "duplicate `start` directive"));
                }
                let name = words
                    .get(1)
                    .ok_or_else(|| syntax(line, "`start` needs a state name"))?;
                if words.len() > 2 {
                    return Err(syntax(line, "trailing input after `start`"));
                }
                start_name = Some((*name).to_string());
            }
            state => {
                let tape_count = tapes.as_ref().ok_or(AssemblyError::MissingTapes)?.len();
                // state reads... -> writes... move next [oracle|halt]
                let arrow = words
                    .iter()
                    .position(|w| *w == "->")
                    .ok_or_else(|| syntax(line, "missing `->`"))?;
                let reads = &words[1..arrow];
                if reads.len() != tape_count {
                    return Err(syntax(
                        line,
                        format!("expected {tape_count} read symbols, found {}", reads.len()),
                    ));
                }
                let rest = &words[arrow + 1..];
                if rest.len() < tape_count + 2 {
                    return Err(syntax(line, "expected writes, a move, and a next state"));
                }
                let writes = &rest[..tape_count];
                let movement = match rest[tape_count] {
                    "L" => Move::Left,
                    "R" => Move::Right,
                    "S" => Move::Stay,
                    other => return Err(syntax(line, format!("unknown move `{other}`"))),
                };
                let next_name = rest[tape_count + 1];
                let action = match rest.get(tape_count + 2) {
                    None => Action::None,
                    Some(&"oracle") => Action::OracleCall,
                    Some(&"halt") => Action::Halt,
                    Some(other) => {
                        return Err(syntax(line, format!("unknown action `{other}`")))
                    }
                };
                if rest.len() > tape_count + 3 {
                    return Err(syntax(line, "trailing input after action"));
                }
                let reads: Vec<ReadPattern> = reads
                    .iter()
                    .map(|w| match *w {
                        "0" => Ok(ReadPattern::Zero),
                        "1" => Ok(ReadPattern::One),
                        "*" => Ok(ReadPattern::Any),
                        other => Err(syntax(line, format!("unknown read symbol `{other}`"))),
                    })
                    .collect::<Result<_, _>>()?;
                let writes: Vec<WriteAction> = writes
                    .iter()
                    .map(|w| match *w {
                        "0" => Ok(WriteAction::Zero),
                        "1" => Ok(WriteAction::One),
                        "-" => Ok(WriteAction::Keep),
                        other => Err(syntax(line, format!("unknown write symbol `{other}`"))),
                    })
                    .collect::<Result<_, _>>()?;
                if action == Action::OracleCall
                    && !tapes
                        .as_ref()
                        .unwrap()
                        .iter()
                        .any(|r| *r == TapeRole::Oracle)
                {
                    return Err(AssemblyError::NoOracleTape { line });
                }
                let sid = intern(state, &mut state_names, &mut state_index);
                pending_targets.push((next_name.to_string(), line));
                raw_rules.push((
                    line,
                    sid,
                    reads.clone(),
                    Rule {
                        reads,
                        writes,
                        movement,
                        next: usize::MAX, // patched once all states are known
                        action,
                    },
                ));
            }
        }
    }

    let tapes = tapes.ok_or(AssemblyError::MissingTapes)?;
    if raw_rules.is_empty() {
        return Err(AssemblyError::Empty);
    }
    // resolve targets now that every state name is known
    let mut rules: Vec<Vec<Rule>> = vec![Vec::new(); state_names.len()];
    for (i, (line, sid, reads, mut rule)) in raw_rules.into_iter().enumerate() {
        let (target, _) = &pending_targets[i];
        let next = *state_index
            .get(target)
            .ok_or_else(|| AssemblyError::UnknownState {
                state: target.clone(),
            })?;
        rule.next = next;
        if rules[sid].iter().any(|r| r.reads == reads) {
            return Err(AssemblyError::DuplicateTransition {
                line,
                state: state_names[sid].clone(),
            });
        }
        rules[sid].push(rule);
    }
    let start = match start_name {
        None => 0,
        Some(name) => *state_index
            .get(&name)
            .ok_or(AssemblyError::UnknownStart { state: name })?,
    };
    Ok(Program {
        state_names,
        tapes,
        start,
        rules,
    })
}
