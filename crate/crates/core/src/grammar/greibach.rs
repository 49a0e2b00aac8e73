//! Conversion of an arbitrary grammar (without λ in its language) to
//! Greibach normal form.

use std::collections::HashSet;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::grammar::{Cfg, GnfGrammar};
use crate::symbol::Symbol;

type Rules = IndexMap<Symbol, Vec<Vec<Symbol>>>;

/// Runs the standard pipeline: remove useless symbols, eliminate λ- and unit
/// productions, eliminate left recursion in declaration order, substitute
/// leading variables until every body starts with a terminal, and finally
/// replace non-leading terminals `a` by fresh variables `T_a -> a`.
pub fn to_greibach(g: &Cfg) -> Result<GnfGrammar> {
    if !g.generating().contains(g.start()) {
        return Err(Error::EmptyLanguage);
    }
    if g.nullable().contains(g.start()) {
        return Err(Error::EmptyStringInLanguage);
    }
    let mut work = Pipeline {
        start: g.start().clone(),
        terminals: g.terminals().symbols().iter().cloned().collect(),
        rules: g.rules().clone(),
    };
    work.remove_useless();
    work.eliminate_empty();
    work.eliminate_units();
    work.remove_useless();
    let primed = work.eliminate_left_recursion()?;
    work.substitute_leading(&primed)?;
    work.isolate_trailing_terminals();
    work.remove_useless();
    GnfGrammar::new(Cfg::from_rules(
        work.start,
        g.terminals().clone(),
        work.rules,
    ))
}

struct Pipeline {
    start: Symbol,
    terminals: HashSet<Symbol>,
    rules: Rules,
}

fn push_unique(bodies: &mut Vec<Vec<Symbol>>, body: Vec<Symbol>) {
    if !bodies.contains(&body) {
        bodies.push(body);
    }
}

impl Pipeline {
    fn is_var(&self, s: &Symbol) -> bool {
        self.rules.contains_key(s)
    }

    fn snapshot(&self) -> Cfg {
        let alphabet = crate::word::Alphabet::new(self.terminals.iter().cloned().collect())
            .expect("terminal set is nonempty and duplicate-free");
        Cfg::from_rules(self.start.clone(), alphabet, self.rules.clone())
    }

    fn remove_useless(&mut self) {
        let generating = self.snapshot().generating();
        let terminals = &self.terminals;
        for bodies in self.rules.values_mut() {
            bodies.retain(|b| {
                b.iter()
                    .all(|s| terminals.contains(s) || generating.contains(s))
            });
        }
        self.rules.retain(|v, _| generating.contains(v));

        let mut reachable: HashSet<Symbol> = HashSet::from([self.start.clone()]);
        let mut queue = vec![self.start.clone()];
        while let Some(v) = queue.pop() {
            for body in &self.rules[&v] {
                for s in body {
                    if self.rules.contains_key(s) && reachable.insert(s.clone()) {
                        queue.push(s.clone());
                    }
                }
            }
        }
        self.rules.retain(|v, _| reachable.contains(v));
    }

    /// Replaces every body by all its variants with nullable variables
    /// optionally dropped, then removes λ-bodies. The start variable is not
    /// nullable here, so the language is unchanged.
    fn eliminate_empty(&mut self) {
        let nullable = self.snapshot().nullable();
        let mut out = Rules::new();
        for (head, bodies) in &self.rules {
            let mut new_bodies = Vec::new();
            for body in bodies {
                let mut variants: Vec<Vec<Symbol>> = vec![Vec::new()];
                for s in body {
                    let mut next = Vec::with_capacity(variants.len() * 2);
                    for v in &variants {
                        let mut kept = v.clone();
                        kept.push(s.clone());
                        next.push(kept);
                        if nullable.contains(s) {
                            next.push(v.clone());
                        }
                    }
                    variants = next;
                }
                for v in variants {
                    if !v.is_empty() {
                        push_unique(&mut new_bodies, v);
                    }
                }
            }
            out.insert(head.clone(), new_bodies);
        }
        self.rules = out;
    }

    fn eliminate_units(&mut self) {
        let mut out = Rules::new();
        for head in self.rules.keys() {
            let mut closure = vec![head.clone()];
            let mut i = 0;
            while i < closure.len() {
                for body in &self.rules[&closure[i]] {
                    if let [only] = body.as_slice() {
                        if self.is_var(only) && !closure.contains(only) {
                            closure.push(only.clone());
                        }
                    }
                }
                i += 1;
            }
            let mut bodies = Vec::new();
            for v in &closure {
                for body in &self.rules[v] {
                    let is_unit = matches!(body.as_slice(), [only] if self.is_var(only));
                    if !is_unit {
                        push_unique(&mut bodies, body.clone());
                    }
                }
            }
            out.insert(head.clone(), bodies);
        }
        self.rules = out;
    }

    fn fresh(&self, base: &str) -> Symbol {
        let mut name = base.to_string();
        loop {
            if let Ok(sym) = Symbol::atom(&name) {
                if !self.rules.contains_key(&sym) && !self.terminals.contains(&sym) {
                    return sym;
                }
            }
            name.push('\'');
        }
    }

    /// Orders the variables `A1..An` by declaration order and rewrites so that
    /// every body of `Ai` starts with a terminal or some `Aj`, `j > i`.
    /// Returns the fresh variables introduced, in creation order.
    fn eliminate_left_recursion(&mut self) -> Result<Vec<Symbol>> {
        let order: Vec<Symbol> = self.rules.keys().cloned().collect();
        let mut primed = Vec::new();
        for (i, ai) in order.iter().enumerate() {
            for aj in &order[..i] {
                let bodies = std::mem::take(self.rules.get_mut(ai).expect("variable exists"));
                let mut replaced = Vec::new();
                for body in bodies {
                    if body.first() == Some(aj) {
                        for prefix in &self.rules[aj] {
                            let mut b = prefix.clone();
                            b.extend_from_slice(&body[1..]);
                            push_unique(&mut replaced, b);
                        }
                    } else {
                        push_unique(&mut replaced, body);
                    }
                }
                self.rules[ai] = replaced;
            }
            let (recursive, others): (Vec<_>, Vec<_>) = self.rules[ai]
                .iter()
                .cloned()
                .partition(|b| b.first() == Some(ai));
            if recursive.is_empty() {
                continue;
            }
            if others.is_empty() {
                return Err(Error::InvalidGrammar(format!(
                    "`{ai}` only has left-recursive productions"
                )));
            }
            let fresh = self.fresh(&format!("{ai}'"));
            let mut ai_bodies = Vec::new();
            for beta in &others {
                push_unique(&mut ai_bodies, beta.clone());
                let mut b = beta.clone();
                b.push(fresh.clone());
                push_unique(&mut ai_bodies, b);
            }
            let mut fresh_bodies = Vec::new();
            for body in &recursive {
                let alpha = body[1..].to_vec();
                push_unique(&mut fresh_bodies, alpha.clone());
                let mut b = alpha;
                b.push(fresh.clone());
                push_unique(&mut fresh_bodies, b);
            }
            self.rules[ai] = ai_bodies;
            self.rules.insert(fresh.clone(), fresh_bodies);
            primed.push(fresh);
        }
        Ok(primed)
    }

    fn terminal_first(&self, v: &Symbol) -> bool {
        self.rules[v]
            .iter()
            .all(|b| b.first().is_some_and(|s| self.terminals.contains(s)))
    }

    /// Replaces leading variables by their bodies, original variables from
    /// last to first, then the fresh ones in creation order, repeating until
    /// every body is terminal-first.
    fn substitute_leading(&mut self, primed: &[Symbol]) -> Result<()> {
        let originals: Vec<Symbol> = self
            .rules
            .keys()
            .filter(|v| !primed.contains(v))
            .cloned()
            .collect();
        let order: Vec<Symbol> = originals
            .into_iter()
            .rev()
            .chain(primed.iter().cloned())
            .collect();
        let limit = order.len() + 1;
        for _ in 0..limit {
            let mut progress = false;
            for v in &order {
                if self.terminal_first(v) {
                    continue;
                }
                let bodies = self.rules[v].clone();
                let mut replaced = Vec::new();
                for body in bodies {
                    match body.first() {
                        Some(lead) if self.is_var(lead) && self.terminal_first(lead) => {
                            progress = true;
                            for prefix in &self.rules[lead] {
                                let mut b = prefix.clone();
                                b.extend_from_slice(&body[1..]);
                                push_unique(&mut replaced, b);
                            }
                        }
                        _ => push_unique(&mut replaced, body),
                    }
                }
                self.rules[v] = replaced;
            }
            if order.iter().all(|v| self.terminal_first(v)) {
                return Ok(());
            }
            if !progress {
                break;
            }
        }
        Err(Error::InvalidGrammar(
            "leading-variable substitution did not converge".into(),
        ))
    }

    fn isolate_trailing_terminals(&mut self) {
        let mut stand_ins: IndexMap<Symbol, Symbol> = IndexMap::new();
        let mut terminals: Vec<Symbol> = Vec::new();
        for body in self.rules.values().flatten() {
            for s in body.iter().skip(1) {
                if self.terminals.contains(s) && !terminals.contains(s) {
                    terminals.push(s.clone());
                }
            }
        }
        for (idx, a) in terminals.iter().enumerate() {
            let preferred = format!("T_{a}");
            let base = if Symbol::atom(&preferred).is_ok() {
                preferred
            } else {
                format!("T_{idx}")
            };
            let v = self.fresh(&base);
            self.rules.insert(v.clone(), vec![vec![a.clone()]]);
            stand_ins.insert(a.clone(), v);
        }
        for bodies in self.rules.values_mut() {
            for body in bodies.iter_mut() {
                for s in body.iter_mut().skip(1) {
                    if let Some(v) = stand_ins.get(s) {
                        *s = v.clone();
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn same_language(src: &str, len: usize) -> GnfGrammar {
        let g = Cfg::parse(src).unwrap();
        let gnf = to_greibach(&g).unwrap();
        assert_eq!(
            g.generate_upto(len, 1_000_000).unwrap(),
            gnf.generate_upto(len, 1_000_000).unwrap(),
            "{gnf}"
        );
        gnf
    }

    #[test]
    fn anbn_becomes_terminal_first() {
        let gnf = same_language("S -> a S b | a b\n", 10);
        assert_eq!(
            gnf.to_text(),
            "start: S\nterminals: a b\nS -> a S T_b | a T_b\nT_b -> b\n"
        );
    }

    #[test]
    fn left_recursion_is_removed() {
        let gnf = same_language("S -> S a | a\n", 8);
        assert!(gnf.variables().any(|v| v.as_atom() == Some("S'")));
    }

    #[test]
    fn indirect_left_recursion_and_units() {
        same_language("S -> A b | c\nA -> S a | B\nB -> d | EPS\n", 9);
        same_language("S -> A B | a\nA -> B S | b\nB -> S A | c | A\n", 8);
        same_language("E -> E + T | T\nT -> T * F | F\nF -> o E c | x\n", 7);
    }

    #[test]
    fn empty_cases_are_reported() {
        let g = Cfg::parse("S -> a S | A\nA -> EPS\n").unwrap();
        assert!(matches!(to_greibach(&g), Err(Error::EmptyStringInLanguage)));
        let g = Cfg::parse("S -> a S\n").unwrap();
        assert!(matches!(to_greibach(&g), Err(Error::EmptyLanguage)));
    }

    #[test]
    fn gnf_input_keeps_its_language() {
        same_language("S -> a S B | a B\nB -> b\n", 10);
    }
}
