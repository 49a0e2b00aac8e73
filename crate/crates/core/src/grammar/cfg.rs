use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::symbol::Symbol;
use crate::word::{Alphabet, Word, EMPTY_WORD_TOKEN};

/// A context-free grammar.
///
/// Variables keep their declaration order (the start variable first), bodies
/// keep their insertion order, and duplicate productions are dropped. These
/// orders drive every deterministic choice in the normal-form pipeline.
#[derive(Clone, PartialEq, Eq)]
pub struct Cfg {
    start: Symbol,
    terminals: Alphabet,
    rules: IndexMap<Symbol, Vec<Vec<Symbol>>>,
}

impl Cfg {
    /// `variables` lists every variable; `productions` may mention them in any
    /// order.
    pub fn new(
        variables: Vec<Symbol>,
        terminals: Alphabet,
        start: Symbol,
        productions: impl IntoIterator<Item = (Symbol, Vec<Symbol>)>,
    ) -> Result<Cfg> {
        let mut rules: IndexMap<Symbol, Vec<Vec<Symbol>>> = IndexMap::new();
        rules.insert(start.clone(), Vec::new());
        for v in variables {
            if terminals.contains(&v) {
                return Err(Error::InvalidGrammar(format!(
                    "`{v}` is both a variable and a terminal"
                )));
            }
            rules.entry(v).or_default();
        }
        if terminals.contains(&start) {
            return Err(Error::InvalidGrammar(format!(
                "start `{start}` is a terminal"
            )));
        }
        for (head, body) in productions {
            if !rules.contains_key(&head) {
                return Err(Error::InvalidGrammar(format!(
                    "production head `{head}` is not a variable"
                )));
            }
            for s in &body {
                if !rules.contains_key(s) && !terminals.contains(s) {
                    return Err(Error::InvalidGrammar(format!(
                        "body symbol `{s}` is undeclared"
                    )));
                }
            }
            let bodies = rules.get_mut(&head).expect("checked above");
            if !bodies.contains(&body) {
                bodies.push(body);
            }
        }
        Ok(Cfg {
            start,
            terminals,
            rules,
        })
    }

    pub(crate) fn from_rules(
        start: Symbol,
        terminals: Alphabet,
        rules: IndexMap<Symbol, Vec<Vec<Symbol>>>,
    ) -> Cfg {
        Cfg {
            start,
            terminals,
            rules,
        }
    }

    pub(crate) fn rules(&self) -> &IndexMap<Symbol, Vec<Vec<Symbol>>> {
        &self.rules
    }

    pub fn start(&self) -> &Symbol {
        &self.start
    }

    pub fn terminals(&self) -> &Alphabet {
        &self.terminals
    }

    pub fn variables(&self) -> impl Iterator<Item = &Symbol> {
        self.rules.keys()
    }

    pub fn is_variable(&self, s: &Symbol) -> bool {
        self.rules.contains_key(s)
    }

    pub fn bodies(&self, head: &Symbol) -> &[Vec<Symbol>] {
        self.rules.get(head).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All productions in variable order.
    pub fn productions(&self) -> impl Iterator<Item = (&Symbol, &[Symbol])> {
        self.rules
            .iter()
            .flat_map(|(h, bodies)| bodies.iter().map(move |b| (h, b.as_slice())))
    }

    pub fn production_count(&self) -> usize {
        self.rules.values().map(Vec::len).sum()
    }

    /// Parses the grammar text format:
    ///
    /// ```text
    /// start: S
    /// terminals: a b        (optional)
    /// S -> a S b | a b
    /// ```
    ///
    /// Variables are the production heads; without a `terminals:` header
    /// every other body symbol is a terminal, in order of first appearance.
    pub fn parse(text: &str) -> Result<Cfg> {
        let mut start: Option<Symbol> = None;
        let mut declared_terminals: Option<Alphabet> = None;
        let mut lines: Vec<(usize, Symbol, Vec<Vec<Symbol>>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with("//") {
                continue;
            }
            let perr = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            if let Some((lhs, rhs)) = line.split_once("->") {
                let head: Symbol = lhs.trim().parse().map_err(|e: Error| perr(e.to_string()))?;
                let mut bodies = Vec::new();
                for alt in rhs.split('|') {
                    let tokens: Vec<&str> = alt.split_whitespace().collect();
                    let body = match tokens.as_slice() {
                        [] => {
                            return Err(perr(
                                "empty alternative (write EPS for the empty body)".into(),
                            ))
                        }
                        [only] if *only == EMPTY_WORD_TOKEN => Vec::new(),
                        _ => tokens
                            .iter()
                            .map(|t| t.parse::<Symbol>())
                            .collect::<Result<Vec<_>>>()
                            .map_err(|e| perr(e.to_string()))?,
                    };
                    bodies.push(body);
                }
                lines.push((line_no, head, bodies));
            } else if let Some((key, value)) = line.split_once(':') {
                match key.trim() {
                    "start" => {
                        start = Some(
                            value
                                .trim()
                                .parse()
                                .map_err(|e: Error| perr(e.to_string()))?,
                        )
                    }
                    "terminals" => {
                        declared_terminals =
                            Some(Alphabet::from_tokens(value).map_err(|e| perr(e.to_string()))?)
                    }
                    other => return Err(perr(format!("unknown header `{other}`"))),
                }
            } else {
                return Err(perr(format!("unrecognized line `{line}`")));
            }
        }
        let start = start
            .or_else(|| lines.first().map(|(_, h, _)| h.clone()))
            .ok_or(Error::Parse {
                line: 0,
                message: "grammar has no productions".into(),
            })?;
        let mut variables = vec![start.clone()];
        for (_, head, _) in &lines {
            if !variables.contains(head) {
                variables.push(head.clone());
            }
        }
        let terminals = match declared_terminals {
            Some(t) => t,
            None => {
                let heads: HashSet<&Symbol> = variables.iter().collect();
                let mut seen = Vec::new();
                for (_, _, bodies) in &lines {
                    for s in bodies.iter().flatten() {
                        if !heads.contains(s) && !seen.contains(s) {
                            seen.push(s.clone());
                        }
                    }
                }
                if seen.is_empty() {
                    return Err(Error::InvalidGrammar("grammar has no terminals".into()));
                }
                Alphabet::new(seen)?
            }
        };
        let productions = lines
            .into_iter()
            .flat_map(|(_, h, bodies)| bodies.into_iter().map(move |b| (h.clone(), b)));
        Cfg::new(variables, terminals, start, productions)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Variables that derive at least one terminal string.
    pub(crate) fn generating(&self) -> HashSet<Symbol> {
        let mut gen: HashSet<Symbol> = HashSet::new();
        loop {
            let before = gen.len();
            for (head, bodies) in &self.rules {
                if gen.contains(head) {
                    continue;
                }
                if bodies.iter().any(|b| {
                    b.iter()
                        .all(|s| self.terminals.contains(s) || gen.contains(s))
                }) {
                    gen.insert(head.clone());
                }
            }
            if gen.len() == before {
                return gen;
            }
        }
    }

    /// Variables that derive λ.
    pub(crate) fn nullable(&self) -> HashSet<Symbol> {
        let mut null: HashSet<Symbol> = HashSet::new();
        loop {
            let before = null.len();
            for (head, bodies) in &self.rules {
                if !null.contains(head) && bodies.iter().any(|b| b.iter().all(|s| null.contains(s)))
                {
                    null.insert(head.clone());
                }
            }
            if null.len() == before {
                return null;
            }
        }
    }

    /// Every generated word of length at most `max_len`.
    ///
    /// Computed as the least fixpoint of per-variable word sets truncated at
    /// `max_len`, bucketed by length so that concatenation only pairs pieces
    /// whose lengths fit. This terminates for any grammar, including ones with
    /// λ- and unit-cycles. `budget` bounds the total number of stored words.
    pub fn generate_upto(&self, max_len: usize, budget: usize) -> Result<BTreeSet<Word>> {
        let vars: Vec<&Symbol> = self.rules.keys().collect();
        let index: HashMap<&Symbol, usize> =
            vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        // sets[v][len] = words of that length derivable from v
        let mut sets: Vec<Vec<BTreeSet<Vec<Symbol>>>> =
            vec![vec![BTreeSet::new(); max_len + 1]; vars.len()];
        let mut stored = 0usize;
        loop {
            let mut changed = false;
            for (vi, head) in vars.iter().enumerate() {
                for body in &self.rules[*head] {
                    let produced = concat_body(body, &index, &sets, max_len);
                    for (len, words) in produced.into_iter().enumerate() {
                        for w in words {
                            if sets[vi][len].insert(w) {
                                changed = true;
                                stored += 1;
                                if stored > budget {
                                    return Err(Error::BudgetExceeded(budget));
                                }
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let start = index[&self.start];
        Ok(sets[start]
            .iter()
            .flatten()
            .map(|w| Word::new(w.clone()))
            .collect())
    }
}

fn concat_body(
    body: &[Symbol],
    index: &HashMap<&Symbol, usize>,
    sets: &[Vec<BTreeSet<Vec<Symbol>>>],
    max_len: usize,
) -> Vec<BTreeSet<Vec<Symbol>>> {
    let mut acc: Vec<BTreeSet<Vec<Symbol>>> = vec![BTreeSet::new(); max_len + 1];
    acc[0].insert(Vec::new());
    for s in body {
        let mut next: Vec<BTreeSet<Vec<Symbol>>> = vec![BTreeSet::new(); max_len + 1];
        match index.get(s) {
            Some(&v) => {
                for (l1, left) in acc.iter().enumerate() {
                    for (l2, right) in sets[v].iter().enumerate().take(max_len + 1 - l1) {
                        for a in left {
                            for b in right {
                                let mut w = a.clone();
                                w.extend_from_slice(b);
                                next[l1 + l2].insert(w);
                            }
                        }
                    }
                }
            }
            None => {
                for (l1, left) in acc.iter().enumerate().take(max_len) {
                    for a in left {
                        let mut w = a.clone();
                        w.push(s.clone());
                        next[l1 + 1].insert(w);
                    }
                }
            }
        }
        acc = next;
        if acc.iter().all(BTreeSet::is_empty) {
            break;
        }
    }
    acc
}

impl fmt::Display for Cfg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: {}", self.start)?;
        let terminals: Vec<String> = self.terminals.iter().map(Symbol::to_string).collect();
        writeln!(f, "terminals: {}", terminals.join(" "))?;
        for (head, bodies) in &self.rules {
            if bodies.is_empty() {
                continue;
            }
            let alts: Vec<String> = bodies
                .iter()
                .map(|b| {
                    if b.is_empty() {
                        EMPTY_WORD_TOKEN.to_string()
                    } else {
                        b.iter()
                            .map(Symbol::to_string)
                            .collect::<Vec<_>>()
                            .join(" ")
                    }
                })
                .collect();
            writeln!(f, "{head} -> {}", alts.join(" | "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cfg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A grammar whose every production has the shape `A -> a B1 ... Bk`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GnfGrammar(Cfg);

impl GnfGrammar {
    pub fn new(cfg: Cfg) -> Result<GnfGrammar> {
        for (head, body) in cfg.productions() {
            let ok = match body.split_first() {
                Some((first, rest)) => {
                    cfg.terminals.contains(first) && rest.iter().all(|s| cfg.is_variable(s))
                }
                None => false,
            };
            if !ok {
                let shown: Vec<String> = body.iter().map(Symbol::to_string).collect();
                return Err(Error::NotGnf(format!("{head} -> {}", shown.join(" "))));
            }
        }
        Ok(GnfGrammar(cfg))
    }

    pub fn cfg(&self) -> &Cfg {
        &self.0
    }

    pub fn into_cfg(self) -> Cfg {
        self.0
    }
}

impl std::ops::Deref for GnfGrammar {
    type Target = Cfg;

    fn deref(&self) -> &Cfg {
        &self.0
    }
}

impl fmt::Display for GnfGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Every word of `g` with length at most `max_len`, under `limits`.
pub fn generate_upto(
    g: &Cfg,
    max_len: usize,
    limits: crate::automata::EnumerationLimits,
) -> Result<BTreeSet<Word>> {
    limits.check_len(max_len)?;
    g.generate_upto(max_len, limits.node_budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(list: &[&str]) -> BTreeSet<Word> {
        list.iter().map(|s| Word::from_chars(s)).collect()
    }

    #[test]
    fn generates_anbn() {
        let g = Cfg::parse("start: S\nS -> a S b | a b\n").unwrap();
        assert_eq!(
            g.generate_upto(6, 10_000).unwrap(),
            words(&["ab", "aabb", "aaabbb"])
        );
    }

    #[test]
    fn empty_language_and_short_bounds() {
        let g = Cfg::parse("S -> a S\n").unwrap();
        assert!(g.generate_upto(5, 1000).unwrap().is_empty());
        let g = Cfg::parse("S -> a\n").unwrap();
        assert!(g.generate_upto(0, 1000).unwrap().is_empty());
    }

    #[test]
    fn handles_epsilon_and_unit_cycles() {
        let g = Cfg::parse("S -> A | a S\nA -> S | EPS\n").unwrap();
        assert_eq!(
            g.generate_upto(3, 1000).unwrap(),
            words(&["", "a", "aa", "aaa"])
        );
    }

    #[test]
    fn text_round_trip() {
        let g = Cfg::parse("start: S\nS -> a S B | a B\nB -> b\n").unwrap();
        let again = Cfg::parse(&g.to_text()).unwrap();
        assert_eq!(g, again);
        assert!(GnfGrammar::new(g).is_ok());
    }

    #[test]
    fn gnf_shape_check() {
        let g = Cfg::parse("S -> a S b | a b\n").unwrap();
        assert!(matches!(GnfGrammar::new(g), Err(Error::NotGnf(_))));
    }

    #[test]
    fn undeclared_symbols_are_rejected() {
        assert!(Cfg::parse("start: S\nterminals: a\nS -> a X\n").is_err());
        assert!(matches!(
            Cfg::parse("S -> a |\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let g = Cfg::parse("S -> a S | b S | a | b\n").unwrap();
        assert!(matches!(
            g.generate_upto(10, 50),
            Err(Error::BudgetExceeded(50))
        ));
    }
}
