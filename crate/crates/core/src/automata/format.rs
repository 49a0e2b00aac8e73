//! Text format for machines.
//!
//! ```text
//! type: npda
//! states: q0 q1 qf
//! alphabet: a b
//! stack_alphabet: z S B
//! start: q0
//! stack_start: z
//! finals: qf
//! q0 CENT z -> q1 push:S z
//! q1 b B -> q1 push:-
//! ```

use std::fmt::Write as _;

use crate::automata::{Dfa, Npda, NpdaSpec, TapeSymbol};
use crate::error::{Error, Result};
use crate::symbol::Symbol;
use crate::word::{Alphabet, Word};

/// A machine read from a file.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)] // short-lived; boxing buys nothing
pub enum Machine {
    Dfa(Dfa),
    Npda(Npda),
}

impl Machine {
    pub fn parse(text: &str) -> Result<Machine> {
        parse_machine(text)
    }

    pub fn to_text(&self) -> String {
        match self {
            Machine::Dfa(d) => dfa_to_text(d),
            Machine::Npda(m) => npda_to_text(m),
        }
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        match self {
            Machine::Dfa(d) => d.alphabet(),
            Machine::Npda(m) => m.input_alphabet(),
        }
    }
}

#[derive(Default)]
struct Header {
    kind: Option<String>,
    states: Option<Vec<String>>,
    alphabet: Option<Alphabet>,
    stack_alphabet: Option<Alphabet>,
    start: Option<String>,
    stack_start: Option<Symbol>,
    finals: Option<Vec<String>>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn at_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => parse_err(line, other.to_string()),
    })
}

pub fn parse_machine(text: &str) -> Result<Machine> {
    let mut header = Header::default();
    let mut rules: Vec<(usize, Vec<&str>, Vec<&str>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        // `#` is an ordinary symbol, so comments use `//`.
        let line = raw.trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        if let Some((lhs, rhs)) = line.split_once(" -> ") {
            rules.push((
                line_no,
                lhs.split_whitespace().collect(),
                rhs.split_whitespace().collect(),
            ));
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(parse_err(line_no, format!("unrecognized line `{line}`")));
        };
        let value = value.trim();
        let names = || {
            value
                .split_whitespace()
                .map(str::to_string)
                .collect::<Vec<_>>()
        };
        match key.trim() {
            "type" => header.kind = Some(value.to_string()),
            "states" => header.states = Some(names()),
            "alphabet" => header.alphabet = Some(at_line(line_no, Alphabet::from_tokens(value))?),
            "stack_alphabet" => {
                header.stack_alphabet = Some(at_line(line_no, Alphabet::from_tokens(value))?)
            }
            "start" => header.start = Some(value.to_string()),
            "stack_start" => header.stack_start = Some(at_line(line_no, value.parse())?),
            "finals" => header.finals = Some(names()),
            other => return Err(parse_err(line_no, format!("unknown header `{other}`"))),
        }
    }
    let missing = |what: &str| parse_err(0, format!("missing `{what}` header"));
    let kind = header.kind.ok_or_else(|| missing("type"))?;
    let states = header.states.ok_or_else(|| missing("states"))?;
    let alphabet = header.alphabet.ok_or_else(|| missing("alphabet"))?;
    let start = header.start.ok_or_else(|| missing("start"))?;
    let finals = header.finals.unwrap_or_default();
    match kind.as_str() {
        "dfa" => {
            let mut transitions = Vec::with_capacity(rules.len());
            for (line_no, lhs, rhs) in &rules {
                let (&[from, a], &[to]) = (lhs.as_slice(), rhs.as_slice()) else {
                    return Err(parse_err(*line_no, "expected `q a -> q'`"));
                };
                transitions.push((from, at_line(*line_no, a.parse::<Symbol>())?, to));
            }
            let finals: Vec<&str> = finals.iter().map(String::as_str).collect();
            Ok(Machine::Dfa(Dfa::new(
                states,
                alphabet,
                &start,
                &finals,
                &transitions,
            )?))
        }
        "npda" => {
            let stack_alphabet = header
                .stack_alphabet
                .ok_or_else(|| missing("stack_alphabet"))?;
            let stack_start = header.stack_start.ok_or_else(|| missing("stack_start"))?;
            let mut transitions = Vec::with_capacity(rules.len());
            for (line_no, lhs, rhs) in rules {
                let &[from, read, top] = lhs.as_slice() else {
                    return Err(parse_err(line_no, "expected `q a v -> q' push:w`"));
                };
                let Some((&to, push_tokens)) = rhs.split_first() else {
                    return Err(parse_err(line_no, "missing target state"));
                };
                let mut push = Vec::new();
                let mut tokens = push_tokens.iter();
                match tokens.next().and_then(|t| t.strip_prefix("push:")) {
                    Some(first) => {
                        let rest: Vec<&str> = tokens.copied().collect();
                        if first == "-" {
                            if !rest.is_empty() {
                                return Err(parse_err(line_no, "`push:-` must stand alone"));
                            }
                        } else {
                            for tok in std::iter::once(first).chain(rest) {
                                if !tok.is_empty() {
                                    push.push(at_line(line_no, tok.parse::<Symbol>())?);
                                }
                            }
                        }
                    }
                    None => {
                        return Err(parse_err(
                            line_no,
                            "expected `push:` after the target state",
                        ))
                    }
                }
                transitions.push((
                    from.to_string(),
                    at_line(line_no, TapeSymbol::parse(read))?,
                    at_line(line_no, top.parse::<Symbol>())?,
                    to.to_string(),
                    Word::new(push),
                ));
            }
            Ok(Machine::Npda(Npda::new(NpdaSpec {
                states,
                input_alphabet: alphabet,
                stack_alphabet,
                start,
                stack_start,
                finals,
                transitions,
            })?))
        }
        other => Err(parse_err(0, format!("unknown machine type `{other}`"))),
    }
}

fn names_line(names: impl Iterator<Item = String>) -> String {
    names.collect::<Vec<_>>().join(" ")
}

pub fn dfa_to_text(d: &Dfa) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "type: dfa");
    let _ = writeln!(out, "states: {}", d.states().join(" "));
    let _ = writeln!(out, "{}", d.alphabet().header());
    let _ = writeln!(out, "start: {}", d.state_name(d.start()));
    let finals = (0..d.state_count())
        .filter(|&q| d.is_final(q))
        .map(|q| d.state_name(q).to_string());
    let _ = writeln!(out, "finals: {}", names_line(finals));
    for (q, a, t) in d.transitions() {
        let _ = writeln!(out, "{} {a} -> {}", d.state_name(q), d.state_name(t));
    }
    out
}

pub fn npda_to_text(m: &Npda) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "type: npda");
    let _ = writeln!(out, "states: {}", m.states().join(" "));
    let _ = writeln!(out, "{}", m.input_alphabet().header());
    let stack = names_line(m.stack_alphabet().iter().map(Symbol::to_string));
    let _ = writeln!(out, "stack_alphabet: {stack}");
    let _ = writeln!(out, "start: {}", m.state_name(m.start()));
    let _ = writeln!(out, "stack_start: {}", m.stack_start());
    let _ = writeln!(
        out,
        "finals: {}",
        names_line(m.finals().map(|q| m.state_name(q).to_string()))
    );
    for i in 0..m.transitions().len() {
        let _ = writeln!(out, "{}", m.transition_line(i));
    }
    out
}
