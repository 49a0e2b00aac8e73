//! Grammar-to-machine compilation and the stack-growth bounding rewrite.

use std::collections::HashMap;

use crate::automata::{Npda, NpdaSpec, TapeSymbol};
use crate::error::{Error, Result};
use crate::grammar::GnfGrammar;
use crate::symbol::Symbol;
use crate::word::{Alphabet, Word};

/// Builds the three-state machine `q0 --¢--> q1 --$--> qf` that simulates
/// leftmost derivations: `(q1, a, A) -> (q1, u)` for every production
/// `A -> a u`. The stack start is `z`, renamed with primes if it clashes with
/// a variable.
pub fn cfg_to_npda(g: &GnfGrammar) -> Result<Npda> {
    let variables: Vec<Symbol> = g.variables().cloned().collect();
    let mut z_name = "z".to_string();
    let z = loop {
        let candidate = Symbol::new(&z_name);
        if !variables.contains(&candidate) && !g.terminals().contains(&candidate) {
            break candidate;
        }
        z_name.push('\'');
    };
    let stack_alphabet = Alphabet::new(
        std::iter::once(z.clone())
            .chain(variables.iter().cloned())
            .collect(),
    )?;
    let mut transitions = vec![
        (
            "q0".to_string(),
            TapeSymbol::LeftEnd,
            z.clone(),
            "q1".to_string(),
            Word::new(vec![g.start().clone(), z.clone()]),
        ),
        (
            "q1".to_string(),
            TapeSymbol::RightEnd,
            z.clone(),
            "qf".to_string(),
            Word::new(vec![z.clone()]),
        ),
    ];
    for (head, body) in g.productions() {
        let (a, rest) = body
            .split_first()
            .ok_or_else(|| Error::NotGnf(format!("{head} -> EPS")))?;
        transitions.push((
            "q1".to_string(),
            TapeSymbol::Input(a.clone()),
            head.clone(),
            "q1".to_string(),
            Word::new(rest.to_vec()),
        ));
    }
    Npda::new(NpdaSpec {
        states: vec!["q0".into(), "q1".into(), "qf".into()],
        input_alphabet: g.terminals().clone(),
        stack_alphabet,
        start: "q0".into(),
        stack_start: z,
        finals: vec!["qf".into()],
        transitions,
    })
}

/// Rewrites a machine in Greibach shape so that no move pushes more than two
/// stack symbols.
///
/// Stack symbols of the result are groups `(v1,...,vr)` of `1..=g` original
/// symbols, `g` being the longest original push. A move that replaces `v1` by
/// `w` on top of the group `(v1,...,vr)` produces the content `w v2 ... vr`,
/// which is pushed as nothing (if empty), as one group (if it has at most `g`
/// symbols), or as two groups with the last `g` symbols in the lower one. So
/// `w1 w2 w3` over `(v1,v2,v3)` becomes `(w1,w2)(w3,v2,v3)`. The stack start
/// becomes `(z)` and is never merged with anything. Only groups reachable from
/// `(S)` are kept.
pub fn bound_stack_growth(m: &Npda) -> Result<Npda> {
    let roles = m.gnf_roles()?.clone();
    if m.is_bounded() {
        return Ok(m.clone());
    }
    let g = m.max_push();
    let working = m.state_name(roles.working).to_string();
    let mut by_top: HashMap<&Symbol, Vec<(&TapeSymbol, &Word)>> = HashMap::new();
    for t in m.transitions() {
        if matches!(t.read, TapeSymbol::Input(_)) {
            by_top.entry(&t.top).or_default().push((&t.read, &t.push));
        }
    }

    let z_group = Symbol::group(vec![roles.stack_start.clone()]);
    let s_group = Symbol::group(vec![roles.start_variable.clone()]);
    let mut groups: Vec<Symbol> = vec![z_group.clone(), s_group.clone()];
    let mut transitions = vec![
        (
            m.state_name(roles.initial).to_string(),
            TapeSymbol::LeftEnd,
            z_group.clone(),
            working.clone(),
            Word::new(vec![s_group, z_group.clone()]),
        ),
        (
            working.clone(),
            TapeSymbol::RightEnd,
            z_group.clone(),
            m.state_name(roles.accepting).to_string(),
            Word::new(vec![z_group.clone()]),
        ),
    ];
    let mut next = 1;
    while next < groups.len() {
        let top = groups[next].clone();
        next += 1;
        let members = top.as_group().expect("group symbol");
        let Some(moves) = by_top.get(&members[0]) else {
            continue;
        };
        for (read, push) in moves {
            let mut content: Vec<Symbol> = push.symbols().to_vec();
            content.extend_from_slice(&members[1..]);
            let pushed: Vec<Symbol> = if content.is_empty() {
                Vec::new()
            } else if content.len() <= g {
                vec![Symbol::group(content)]
            } else {
                let split = content.len() - g;
                vec![
                    Symbol::group(content[..split].to_vec()),
                    Symbol::group(content[split..].to_vec()),
                ]
            };
            for s in &pushed {
                if !groups.contains(s) {
                    groups.push(s.clone());
                }
            }
            transitions.push((
                working.clone(),
                (*read).clone(),
                top.clone(),
                working.clone(),
                Word::new(pushed),
            ));
        }
    }
    Npda::new(NpdaSpec {
        states: m.states().to_vec(),
        input_alphabet: m.input_alphabet().clone(),
        stack_alphabet: Alphabet::new(groups)?,
        start: m.state_name(roles.initial).to_string(),
        stack_start: z_group,
        finals: vec![m.state_name(roles.accepting).to_string()],
        transitions,
    })
}
