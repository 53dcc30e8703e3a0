//! Line-based text format for automata.
//!
//! ```text
//! automaton <name>
//! type: nba|dba|dpa|gnba|nca|pba|pwa|pca|pfa
//! alphabet: a b
//! states: q0 q1
//! init: q0              | init: q0=1/2 q1=1/2
//! accepting: q1         | priorities: q0=2 q1=1 | accsets: q0 ; q1
//! sink: q1              (optional, probabilistic only)
//! trans: q0 a q1        | trans: q0 a q1 1/3
//! ```
//!
//! `#` starts a comment; blank lines are ignored. Header lines must appear in
//! the order shown.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_traits::Zero;

use crate::automaton::{Acceptance, Automaton, NondetAutomaton, ProbAutomaton, ProbKind, StateId};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::structure::is_deterministic;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FileType {
    Nba,
    Dba,
    Dpa,
    Gnba,
    Nca,
    Prob(ProbKind),
}

impl FileType {
    fn parse(s: &str) -> Option<FileType> {
        Some(match s {
            "nba" => FileType::Nba,
            "dba" => FileType::Dba,
            "dpa" => FileType::Dpa,
            "gnba" => FileType::Gnba,
            "nca" => FileType::Nca,
            "pba" => FileType::Prob(ProbKind::Buchi),
            "pwa" => FileType::Prob(ProbKind::Weak),
            "pca" => FileType::Prob(ProbKind::CoBuchi),
            "pfa" => FileType::Prob(ProbKind::FiniteWord),
            _ => return None,
        })
    }
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, message: message.into() }
}

/// Splits `key: rest` and checks the key.
fn keyed<'a>(line: &Line<'a>, key: &str) -> Result<&'a str> {
    match line.text.split_once(':') {
        Some((k, rest)) if k.trim() == key => Ok(rest.trim()),
        _ => Err(syntax(line.number, format!("expected `{key}:`"))),
    }
}

struct Symbols<'a> {
    states: &'a HashMap<&'a str, StateId>,
    alphabet: &'a HashMap<&'a str, usize>,
}

impl Symbols<'_> {
    fn state(&self, line: usize, name: &str) -> Result<StateId> {
        self.states
            .get(name)
            .copied()
            .ok_or_else(|| Error::Undeclared { line, what: "state", name: name.to_string() })
    }

    fn symbol(&self, line: usize, name: &str) -> Result<usize> {
        self.alphabet
            .get(name)
            .copied()
            .ok_or_else(|| Error::Undeclared { line, what: "symbol", name: name.to_string() })
    }
}

fn rational(line: usize, text: &str) -> Result<Rational> {
    parse_rational(text).ok_or_else(|| syntax(line, format!("`{text}` is not a rational of the form n or n/d")))
}

fn assignment(line: usize, item: &str) -> Result<(&str, &str)> {
    item.split_once('=').ok_or_else(|| syntax(line, format!("expected `name=value`, found `{item}`")))
}

fn check_duplicates(line: usize, what: &str, items: &[&str]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for it in items {
        if !seen.insert(*it) {
            return Err(syntax(line, format!("duplicate {what} `{it}`")));
        }
    }
    Ok(())
}

/// Parses one automaton.
pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("").trim();
            (!body.is_empty()).then_some(Line { number: i + 1, text: body })
        })
        .collect();
    let last = text.lines().count().max(1);
    let header = |i: usize| lines.get(i).ok_or_else(|| syntax(last, "unexpected end of file"));

    let l0 = header(0)?;
    let name = match l0.text.split_once(char::is_whitespace) {
        Some(("automaton", rest)) if !rest.trim().is_empty() => rest.trim().to_string(),
        _ => return Err(syntax(l0.number, "expected `automaton <name>`")),
    };
    let l1 = header(1)?;
    let ty_text = keyed(l1, "type")?;
    let ty = FileType::parse(ty_text).ok_or_else(|| syntax(l1.number, format!("unknown type `{ty_text}`")))?;

    let l2 = header(2)?;
    let alphabet: Vec<&str> = keyed(l2, "alphabet")?.split_whitespace().collect();
    check_duplicates(l2.number, "symbol", &alphabet)?;
    let l3 = header(3)?;
    let states: Vec<&str> = keyed(l3, "states")?.split_whitespace().collect();
    check_duplicates(l3.number, "state", &states)?;
    if states.is_empty() {
        return Err(syntax(l3.number, "no states declared"));
    }
    let state_map: HashMap<&str, StateId> = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let symbol_map: HashMap<&str, usize> = alphabet.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let sym = Symbols { states: &state_map, alphabet: &symbol_map };
    let state_names: Vec<String> = states.iter().map(|s| s.to_string()).collect();
    let alphabet_names: Vec<String> = alphabet.iter().map(|s| s.to_string()).collect();

    let l4 = header(4)?;
    let init_text = keyed(l4, "init")?;
    let l5 = header(5)?;
    let mut rest = 6;

    match ty {
        FileType::Prob(kind) => {
            let mut init = Vec::new();
            for item in init_text.split_whitespace() {
                let (q, v) = assignment(l4.number, item)?;
                init.push((sym.state(l4.number, q)?, rational(l4.number, v)?));
            }
            let accepting = keyed(l5, "accepting")?
                .split_whitespace()
                .map(|q| sym.state(l5.number, q))
                .collect::<Result<BTreeSet<_>>>()?;
            let mut sink = None;
            if let Some(l) = lines.get(6) {
                if let Ok(s) = keyed(l, "sink") {
                    sink = Some(sym.state(l.number, s)?);
                    rest = 7;
                }
            }
            let mut transitions = Vec::new();
            let mut seen = BTreeSet::new();
            for l in &lines[rest.min(lines.len())..] {
                let parts: Vec<&str> = keyed(l, "trans")?.split_whitespace().collect();
                let [p, a, q, v] = parts[..] else {
                    return Err(syntax(l.number, "expected `trans: <state> <symbol> <state> <probability>`"));
                };
                let (p, a, q) = (sym.state(l.number, p)?, sym.symbol(l.number, a)?, sym.state(l.number, q)?);
                if !seen.insert((p, a, q)) {
                    return Err(syntax(l.number, "duplicate transition"));
                }
                let v = rational(l.number, v)?;
                if !v.is_zero() {
                    transitions.push((p, a, q, v));
                }
            }
            let init: Vec<_> = init.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            Ok(ProbAutomaton::new(name, state_names, alphabet_names, transitions, init, accepting, kind, sink)?.into())
        }
        _ => {
            let initials = init_text
                .split_whitespace()
                .map(|q| sym.state(l4.number, q))
                .collect::<Result<Vec<_>>>()?;
            if initials.is_empty() {
                return Err(syntax(l4.number, "no initial state"));
            }
            let acceptance = match ty {
                FileType::Dpa => {
                    let mut prio: Vec<Option<u32>> = vec![None; states.len()];
                    for item in keyed(l5, "priorities")?.split_whitespace() {
                        let (q, c) = assignment(l5.number, item)?;
                        let q = sym.state(l5.number, q)?;
                        let c: u32 = c
                            .parse()
                            .ok()
                            .filter(|&c| c >= 1)
                            .ok_or_else(|| syntax(l5.number, format!("priority `{c}` must be a positive integer")))?;
                        if prio[q].replace(c).is_some() {
                            return Err(syntax(l5.number, format!("state `{}` has two priorities", states[q])));
                        }
                    }
                    let prio = prio
                        .iter()
                        .enumerate()
                        .map(|(q, c)| c.ok_or_else(|| syntax(l5.number, format!("state `{}` has no priority", states[q]))))
                        .collect::<Result<Vec<_>>>()?;
                    Acceptance::Parity(prio)
                }
                FileType::Gnba => {
                    let body = keyed(l5, "accsets")?;
                    let sets = body
                        .split(';')
                        .map(|part| {
                            part.split_whitespace().map(|q| sym.state(l5.number, q)).collect::<Result<BTreeSet<_>>>()
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Acceptance::GeneralizedBuchi(sets)
                }
                _ => {
                    let f = keyed(l5, "accepting")?
                        .split_whitespace()
                        .map(|q| sym.state(l5.number, q))
                        .collect::<Result<BTreeSet<_>>>()?;
                    if ty == FileType::Nca {
                        Acceptance::CoBuchi(f)
                    } else {
                        Acceptance::Buchi(f)
                    }
                }
            };
            let mut transitions = Vec::new();
            for l in &lines[rest.min(lines.len())..] {
                let parts: Vec<&str> = keyed(l, "trans")?.split_whitespace().collect();
                let [p, a, q] = parts[..] else {
                    return Err(syntax(l.number, "expected `trans: <state> <symbol> <state>`"));
                };
                transitions.push((sym.state(l.number, p)?, sym.symbol(l.number, a)?, sym.state(l.number, q)?));
            }
            let aut = NondetAutomaton::new(name, state_names, alphabet_names, transitions, initials, acceptance)?;
            if matches!(ty, FileType::Dba | FileType::Dpa) && !is_deterministic(&aut) {
                return Err(Error::Invalid(format!("type `{ty_text}` requires a deterministic automaton")));
            }
            Ok(aut.into())
        }
    }
}

/// Reads and parses a file.
pub fn read_automaton(path: impl AsRef<std::path::Path>) -> Result<Automaton> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_automaton(&text)
}

fn join_states<'a>(aut_names: &'a [String], set: impl IntoIterator<Item = &'a StateId>) -> String {
    set.into_iter().map(|&q| aut_names[q].as_str()).collect::<Vec<_>>().join(" ")
}

fn header(out: &mut String, name: &str, ty: &str, alphabet: &[String], states: &[String]) {
    let _ = writeln!(out, "automaton {name}");
    let _ = writeln!(out, "type: {ty}");
    let _ = writeln!(out, "alphabet: {}", alphabet.join(" "));
    let _ = writeln!(out, "states: {}", states.join(" "));
}

pub fn serialize_nondet(aut: &NondetAutomaton) -> String {
    let names = aut.state_names();
    let ty = match aut.acceptance() {
        Acceptance::Buchi(_) if is_deterministic(aut) => "dba",
        Acceptance::Buchi(_) => "nba",
        Acceptance::CoBuchi(_) => "nca",
        Acceptance::GeneralizedBuchi(_) => "gnba",
        Acceptance::Parity(_) => "dpa",
    };
    let mut out = String::new();
    header(&mut out, aut.name(), ty, aut.alphabet(), names);
    let _ = writeln!(out, "init: {}", join_states(names, aut.initials()));
    match aut.acceptance() {
        Acceptance::Buchi(f) | Acceptance::CoBuchi(f) => {
            let _ = writeln!(out, "accepting: {}", join_states(names, f));
        }
        Acceptance::GeneralizedBuchi(sets) => {
            let parts: Vec<String> = sets.iter().map(|s| join_states(names, s)).collect();
            let _ = writeln!(out, "accsets: {}", parts.join(" ; "));
        }
        Acceptance::Parity(prio) => {
            let parts: Vec<String> = prio.iter().enumerate().map(|(q, c)| format!("{}={c}", names[q])).collect();
            let _ = writeln!(out, "priorities: {}", parts.join(" "));
        }
    }
    for (p, a, q) in aut.transitions() {
        let _ = writeln!(out, "trans: {} {} {}", names[p], aut.alphabet()[a], names[q]);
    }
    out
}

pub fn serialize_prob(aut: &ProbAutomaton) -> String {
    let names = aut.state_names();
    let ty = match aut.kind() {
        ProbKind::Buchi => "pba",
        ProbKind::Weak => "pwa",
        ProbKind::CoBuchi => "pca",
        ProbKind::FiniteWord => "pfa",
    };
    let mut out = String::new();
    header(&mut out, aut.name(), ty, aut.alphabet(), names);
    // merge duplicates defensively; the constructor already rejects them
    let init: BTreeMap<StateId, &Rational> = aut.initial().iter().map(|(q, v)| (*q, v)).collect();
    let parts: Vec<String> = init.iter().map(|(q, v)| format!("{}={}", names[*q], format_rational(v))).collect();
    let _ = writeln!(out, "init: {}", parts.join(" "));
    let _ = writeln!(out, "accepting: {}", join_states(names, aut.accepting()));
    if let Some(s) = aut.rej_sink() {
        let _ = writeln!(out, "sink: {}", names[s]);
    }
    for (p, a, q, v) in aut.transitions() {
        let _ = writeln!(out, "trans: {} {} {} {}", names[p], aut.alphabet()[a], names[q], format_rational(v));
    }
    out
}

pub fn serialize_automaton(aut: &Automaton) -> String {
    match aut {
        Automaton::Nondet(a) => serialize_nondet(a),
        Automaton::Prob(a) => serialize_prob(a),
    }
}
