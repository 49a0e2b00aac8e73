use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::symbol::Symbol;
use crate::word::{Alphabet, Word};

/// A complete deterministic finite automaton.
///
/// States are addressed by index; names are kept for reports and the text
/// format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    states: Vec<String>,
    alphabet: Alphabet,
    // delta[state][symbol index]
    delta: Vec<Vec<usize>>,
    start: usize,
    finals: Vec<bool>,
}

/// Result of a deterministic run: `trace[i]` is the state after `i` symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DfaRun {
    pub accepted: bool,
    pub trace: Vec<usize>,
}

/// How [`Dfa::product`] combines acceptance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductMode {
    Intersection,
    Union,
}

impl Dfa {
    /// Builds a machine from an explicit transition list. Every
    /// `(state, symbol)` pair must be covered exactly once.
    pub fn new(
        states: Vec<String>,
        alphabet: Alphabet,
        start: &str,
        finals: &[&str],
        transitions: &[(&str, Symbol, &str)],
    ) -> Result<Dfa> {
        let index: HashMap<&str, usize> = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        if index.len() != states.len() || states.is_empty() {
            return Err(Error::InvalidMachine(
                "state names must be nonempty and distinct".into(),
            ));
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidMachine(format!("unknown state `{name}`")))
        };
        let mut delta = vec![vec![usize::MAX; alphabet.len()]; states.len()];
        for (from, a, to) in transitions {
            let (from, to) = (lookup(from)?, lookup(to)?);
            let a_idx = alphabet
                .index_of(a)
                .ok_or_else(|| Error::UnknownSymbol(a.to_string()))?;
            let slot = &mut delta[from][a_idx];
            if *slot != usize::MAX && *slot != to {
                return Err(Error::InvalidMachine(format!(
                    "two transitions from `{}` on `{a}`",
                    states[from]
                )));
            }
            *slot = to;
        }
        for (q, row) in delta.iter().enumerate() {
            if let Some(a) = row.iter().position(|&t| t == usize::MAX) {
                return Err(Error::InvalidMachine(format!(
                    "no transition from `{}` on `{}`",
                    states[q],
                    alphabet.symbol(a)
                )));
            }
        }
        let start = lookup(start)?;
        let mut final_flags = vec![false; states.len()];
        for f in finals {
            final_flags[lookup(f)?] = true;
        }
        Ok(Dfa {
            states,
            alphabet,
            delta,
            start,
            finals: final_flags,
        })
    }

    /// Builds a machine from a transition function over indices.
    pub fn from_fn(
        states: Vec<String>,
        alphabet: Alphabet,
        start: usize,
        finals: impl Fn(usize) -> bool,
        step: impl Fn(usize, &Symbol) -> usize,
    ) -> Result<Dfa> {
        let n = states.len();
        if n == 0 || start >= n {
            return Err(Error::InvalidMachine("start state out of range".into()));
        }
        let mut delta = Vec::with_capacity(n);
        for q in 0..n {
            let row: Vec<usize> = alphabet.iter().map(|a| step(q, a)).collect();
            if row.iter().any(|&t| t >= n) {
                return Err(Error::InvalidMachine(format!(
                    "transition from state {q} leaves the state set"
                )));
            }
            delta.push(row);
        }
        Ok(Dfa {
            finals: (0..n).map(finals).collect(),
            states,
            alphabet,
            delta,
            start,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn step(&self, q: usize, a: &Symbol) -> Result<usize> {
        let a = self
            .alphabet
            .index_of(a)
            .ok_or_else(|| Error::UnknownSymbol(a.to_string()))?;
        Ok(self.delta[q][a])
    }

    fn step_index(&self, q: usize, a: usize) -> usize {
        self.delta[q][a]
    }

    /// Runs the machine, recording the state after every prefix.
    pub fn run(&self, w: &Word) -> Result<DfaRun> {
        let mut trace = Vec::with_capacity(w.len() + 1);
        let mut q = self.start;
        trace.push(q);
        for a in w {
            q = self.step(q, a)?;
            trace.push(q);
        }
        Ok(DfaRun {
            accepted: self.finals[q],
            trace,
        })
    }

    pub fn accepts(&self, w: &Word) -> Result<bool> {
        Ok(self.run(w)?.accepted)
    }

    /// Product automaton over a shared alphabet; only reachable pairs are kept.
    pub fn product(&self, other: &Dfa, mode: ProductMode) -> Result<Dfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::InvalidMachine(
                "product of machines over different alphabets".into(),
            ));
        }
        let mut pairs = vec![(self.start, other.start)];
        let mut index = HashMap::from([((self.start, other.start), 0usize)]);
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let mut row = Vec::with_capacity(self.alphabet.len());
            for a in 0..self.alphabet.len() {
                let next = (self.step_index(p, a), other.step_index(q, a));
                let id = *index.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    pairs.len() - 1
                });
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let finals = pairs
            .iter()
            .map(|&(p, q)| match mode {
                ProductMode::Intersection => self.finals[p] && other.finals[q],
                ProductMode::Union => self.finals[p] || other.finals[q],
            })
            .collect();
        let states = pairs
            .iter()
            .map(|&(p, q)| format!("<{},{}>", self.states[p], other.states[q]))
            .collect();
        Ok(Dfa {
            states,
            alphabet: self.alphabet.clone(),
            delta,
            start: 0,
            finals,
        })
    }

    /// The same machine restricted to states reachable from the start.
    pub fn trimmed(&self) -> Dfa {
        let mut order = vec![self.start];
        let mut index = HashMap::from([(self.start, 0usize)]);
        let mut i = 0;
        while i < order.len() {
            for &t in &self.delta[order[i]] {
                index.entry(t).or_insert_with(|| {
                    order.push(t);
                    order.len() - 1
                });
            }
            i += 1;
        }
        Dfa {
            states: order.iter().map(|&q| self.states[q].clone()).collect(),
            alphabet: self.alphabet.clone(),
            delta: order
                .iter()
                .map(|&q| self.delta[q].iter().map(|t| index[t]).collect())
                .collect(),
            start: 0,
            finals: order.iter().map(|&q| self.finals[q]).collect(),
        }
    }

    /// Every accepted word of length at most `max_len`, by depth-first
    /// expansion of the prefix tree. `budget` bounds the number of visited
    /// prefixes.
    pub fn language_upto(&self, max_len: usize, budget: usize) -> Result<BTreeSet<Word>> {
        let mut out = BTreeSet::new();
        let mut visited = 0usize;
        let mut prefix = Vec::with_capacity(max_len);
        self.expand(
            self.start,
            &mut prefix,
            max_len,
            budget,
            &mut visited,
            &mut out,
        )?;
        Ok(out)
    }

    fn expand(
        &self,
        q: usize,
        prefix: &mut Vec<Symbol>,
        max_len: usize,
        budget: usize,
        visited: &mut usize,
        out: &mut BTreeSet<Word>,
    ) -> Result<()> {
        *visited += 1;
        if *visited > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        if self.finals[q] {
            out.insert(Word::new(prefix.clone()));
        }
        if prefix.len() == max_len {
            return Ok(());
        }
        for (a, sym) in self.alphabet.iter().enumerate() {
            prefix.push(sym.clone());
            self.expand(self.delta[q][a], prefix, max_len, budget, visited, out)?;
            prefix.pop();
        }
        Ok(())
    }

    /// Transition triples in state-major, alphabet order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, &Symbol, usize)> + '_ {
        self.delta.iter().enumerate().flat_map(move |(q, row)| {
            row.iter()
                .enumerate()
                .map(move |(a, &t)| (q, self.alphabet.symbol(a), t))
        })
    }
}

/// The two-state machine accepting words with an even number of `1`s.
pub fn parity_dfa() -> Dfa {
    let one = Symbol::new("1");
    let zero = Symbol::new("0");
    Dfa::new(
        vec!["q_even".into(), "q_odd".into()],
        Alphabet::from_chars("01"),
        "q_even",
        &["q_even"],
        &[
            ("q_even", zero.clone(), "q_even"),
            ("q_even", one.clone(), "q_odd"),
            ("q_odd", zero, "q_odd"),
            ("q_odd", one, "q_even"),
        ],
    )
    .expect("parity machine is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::from_chars(s)
    }

    #[test]
    fn parity_run_traces() {
        let d = parity_dfa();
        let run = d.run(&w("11")).unwrap();
        assert!(run.accepted);
        let names: Vec<&str> = run.trace.iter().map(|&q| d.state_name(q)).collect();
        assert_eq!(names, ["q_even", "q_odd", "q_even"]);
        assert!(d.accepts(&w("110")).unwrap());
        assert!(!d.accepts(&w("10")).unwrap());
    }

    #[test]
    fn empty_input_accepts_iff_start_is_final() {
        let d = parity_dfa();
        let run = d.run(&Word::empty()).unwrap();
        assert_eq!(run.trace, vec![d.start()]);
        assert_eq!(run.accepted, d.is_final(d.start()));
    }

    #[test]
    fn unknown_symbol_is_an_error() {
        assert!(matches!(
            parity_dfa().run(&w("012")),
            Err(Error::UnknownSymbol(_))
        ));
    }

    #[test]
    fn trace_is_prefix_coherent() {
        let d = parity_dfa();
        let x = w("0110101");
        let full = d.run(&x).unwrap().trace;
        for i in 0..=x.len() {
            let part = d.run(&x.prefix(i).unwrap()).unwrap().trace;
            assert_eq!(part.len(), i + 1);
            assert_eq!(&full[..=i], &part[..]);
        }
    }

    #[test]
    fn incomplete_tables_are_rejected() {
        let err = Dfa::new(
            vec!["p".into()],
            Alphabet::from_chars("01"),
            "p",
            &[],
            &[("p", Symbol::new("0"), "p")],
        );
        assert!(matches!(err, Err(Error::InvalidMachine(_))));
    }

    #[test]
    fn language_upto_matches_brute_force() {
        let d = parity_dfa();
        let lang = d.language_upto(2, 1000).unwrap();
        let expected: BTreeSet<Word> = ["", "0", "00", "11"].into_iter().map(w).collect();
        assert_eq!(lang, expected);
        for n in 0..=6 {
            for x in d.alphabet().words_of_length(n) {
                assert_eq!(
                    d.language_upto(6, 10_000).unwrap().contains(&x),
                    d.accepts(&x).unwrap()
                );
            }
        }
        assert!(matches!(
            d.language_upto(10, 5),
            Err(Error::BudgetExceeded(5))
        ));
    }

    #[test]
    fn product_intersects_languages() {
        let parity = parity_dfa();
        // words ending in 0 (or empty)
        let ends_zero = Dfa::from_fn(
            vec!["e".into(), "o".into()],
            Alphabet::from_chars("01"),
            0,
            |q| q == 0,
            |_, a| usize::from(a.as_atom() == Some("1")),
        )
        .unwrap();
        let both = parity
            .product(&ends_zero, ProductMode::Intersection)
            .unwrap();
        for n in 0..=6 {
            for x in parity.alphabet().words_of_length(n) {
                let expect = parity.accepts(&x).unwrap() && ends_zero.accepts(&x).unwrap();
                assert_eq!(both.accepts(&x).unwrap(), expect, "{x}");
            }
        }
    }
}
