use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::symbol::Symbol;
use crate::word::{Alphabet, Word};

/// Default cap on the number of accepting paths enumerated per input.
pub const DEFAULT_PATH_LIMIT: usize = 10_000;

/// A cell of the endmarked tape `¢ x $`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TapeSymbol {
    LeftEnd,
    RightEnd,
    Input(Symbol),
}

impl TapeSymbol {
    pub const LEFT_END_TOKEN: &'static str = "CENT";
    pub const RIGHT_END_TOKEN: &'static str = "DOLLAR";

    pub fn parse(token: &str) -> Result<TapeSymbol> {
        Ok(match token {
            Self::LEFT_END_TOKEN => TapeSymbol::LeftEnd,
            Self::RIGHT_END_TOKEN => TapeSymbol::RightEnd,
            other => TapeSymbol::Input(other.parse()?),
        })
    }
}

impl fmt::Display for TapeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TapeSymbol::LeftEnd => f.write_str(Self::LEFT_END_TOKEN),
            TapeSymbol::RightEnd => f.write_str(Self::RIGHT_END_TOKEN),
            TapeSymbol::Input(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Debug for TapeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// One move `(to, push) ∈ δ(from, read, top)`. Every move consumes exactly one
/// tape cell and replaces the top stack symbol by `push` (leftmost on top).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: usize,
    pub read: TapeSymbol,
    pub top: Symbol,
    pub to: usize,
    pub push: Word,
}

/// Construction input for [`Npda::new`]; transitions refer to states by name.
#[derive(Clone, Debug)]
pub struct NpdaSpec {
    pub states: Vec<String>,
    pub input_alphabet: Alphabet,
    pub stack_alphabet: Alphabet,
    pub start: String,
    pub stack_start: Symbol,
    pub finals: Vec<String>,
    pub transitions: Vec<(String, TapeSymbol, Symbol, String, Word)>,
}

/// Identifies the parts of a machine in endmarked Greibach shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GnfRoles {
    pub initial: usize,
    pub working: usize,
    pub accepting: usize,
    pub start_variable: Symbol,
    pub stack_start: Symbol,
}

/// Nondeterministic pushdown acceptor over the endmarked tape `¢ x $`.
///
/// There are no λ-moves: every transition reads a tape cell, so a run on an
/// input of length `n` takes exactly `n + 2` steps and the search below needs
/// no closure computation.
#[derive(Clone, Debug)]
pub struct Npda {
    states: Vec<String>,
    input_alphabet: Alphabet,
    stack_alphabet: Alphabet,
    start: usize,
    stack_start: Symbol,
    finals: Vec<bool>,
    transitions: Vec<Transition>,
    // (state, tape index, top index) -> transition indices, in serialized order
    table: HashMap<(usize, usize, u32), Vec<usize>>,
    // per transition: target state and the push string as stack indices,
    // bottom-most first so that it can be appended to a top-at-end stack
    compiled: Vec<(usize, Vec<u32>)>,
    roles: Option<GnfRoles>,
    bounded: bool,
}

/// Machine state at one intercell boundary. The stack is written with its top
/// symbol first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub boundary: isize,
    pub state: usize,
    pub stack: Word,
}

/// An accepting computation on `input`: `configs[b + 1]` is the configuration
/// at boundary `b` for `b` in `-1..=n+1`, and `transitions[c]` is the move
/// that consumed tape cell `c` (cell 0 holds `¢`, cell `n+1` holds `$`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceptingPath {
    pub input: Word,
    pub configs: Vec<Configuration>,
    pub transitions: Vec<usize>,
}

impl AcceptingPath {
    pub fn config_at(&self, boundary: isize) -> &Configuration {
        &self.configs[(boundary + 1) as usize]
    }
}

impl Npda {
    pub fn new(spec: NpdaSpec) -> Result<Npda> {
        let NpdaSpec {
            states,
            input_alphabet,
            stack_alphabet,
            start,
            stack_start,
            finals,
            transitions,
        } = spec;
        let index: HashMap<&str, usize> = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        if states.is_empty() || index.len() != states.len() {
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
        for end in [TapeSymbol::LEFT_END_TOKEN, TapeSymbol::RIGHT_END_TOKEN] {
            if input_alphabet.iter().any(|s| s.as_atom() == Some(end)) {
                return Err(Error::InvalidMachine(format!(
                    "endmarker `{end}` inside the input alphabet"
                )));
            }
        }
        if !stack_alphabet.contains(&stack_start) {
            return Err(Error::InvalidMachine(format!(
                "stack start `{stack_start}` not in stack alphabet"
            )));
        }
        let start = lookup(&start)?;
        let mut final_flags = vec![false; states.len()];
        for f in &finals {
            final_flags[lookup(f)?] = true;
        }

        let mut resolved = Vec::with_capacity(transitions.len());
        for (from, read, top, to, push) in transitions {
            if let TapeSymbol::Input(a) = &read {
                if !input_alphabet.contains(a) {
                    return Err(Error::UnknownSymbol(a.to_string()));
                }
            }
            if !stack_alphabet.contains(&top) {
                return Err(Error::UnknownSymbol(top.to_string()));
            }
            stack_alphabet.validate(&push)?;
            resolved.push(Transition {
                from: lookup(&from)?,
                read,
                top,
                to: lookup(&to)?,
                push,
            });
        }

        let mut machine = Npda {
            states,
            input_alphabet,
            stack_alphabet,
            start,
            stack_start,
            finals: final_flags,
            transitions: Vec::new(),
            table: HashMap::new(),
            compiled: Vec::new(),
            roles: None,
            bounded: false,
        };
        // Total order on moves: by their serialized line.
        let mut keyed: Vec<(String, Transition)> = resolved
            .into_iter()
            .map(|t| (machine.transition_line_for(&t), t))
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        machine.transitions = keyed.into_iter().map(|(_, t)| t).collect();

        for (i, t) in machine.transitions.iter().enumerate() {
            let key = (
                t.from,
                machine.tape_index(&t.read),
                machine.stack_index(&t.top),
            );
            machine.table.entry(key).or_default().push(i);
            let push = t
                .push
                .iter()
                .rev()
                .map(|s| machine.stack_index(s))
                .collect();
            machine.compiled.push((t.to, push));
        }
        machine.bounded = machine.transitions.iter().all(|t| t.push.len() <= 2);
        machine.roles = machine.detect_gnf_shape().ok();
        Ok(machine)
    }

    fn tape_index(&self, t: &TapeSymbol) -> usize {
        match t {
            TapeSymbol::Input(a) => self
                .input_alphabet
                .index_of(a)
                .expect("validated input symbol"),
            TapeSymbol::LeftEnd => self.input_alphabet.len(),
            TapeSymbol::RightEnd => self.input_alphabet.len() + 1,
        }
    }

    fn stack_index(&self, s: &Symbol) -> u32 {
        self.stack_alphabet
            .index_of(s)
            .expect("validated stack symbol") as u32
    }

    fn transition_line_for(&self, t: &Transition) -> String {
        let push = if t.push.is_empty() {
            "-".to_string()
        } else {
            t.push.to_string()
        };
        format!(
            "{} {} {} -> {} push:{}",
            self.states[t.from], t.read, t.top, self.states[t.to], push
        )
    }

    /// The serialized form of transition `i` (the line used by the text format).
    pub fn transition_line(&self, i: usize) -> String {
        self.transition_line_for(&self.transitions[i])
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input_alphabet
    }

    pub fn stack_alphabet(&self) -> &Alphabet {
        &self.stack_alphabet
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn stack_start(&self) -> &Symbol {
        &self.stack_start
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.states.len()).filter(|&q| self.finals[q])
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// True when the machine has the endmarked Greibach shape.
    pub fn is_gnf_normal(&self) -> bool {
        self.roles.is_some()
    }

    /// True when no transition pushes more than two symbols.
    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    pub fn gnf_roles(&self) -> Result<&GnfRoles> {
        match &self.roles {
            Some(r) => Ok(r),
            None => Err(Error::NotGnfNormal(
                self.detect_gnf_shape()
                    .err()
                    .unwrap_or_else(|| "unknown".into()),
            )),
        }
    }

    /// Largest push length over all transitions.
    pub fn max_push(&self) -> usize {
        self.transitions
            .iter()
            .map(|t| t.push.len())
            .max()
            .unwrap_or(0)
    }

    /// Checks the grammar-derived shape: three states, one `¢` move
    /// `(q0,¢,z) -> (q1, S z)`, one `$` move `(q1,$,z) -> (qf, z)`, every other
    /// move from `q1` to `q1` on an input symbol with a variable on top, and no
    /// move ever pushing `z` or reading `z` on an input symbol.
    fn detect_gnf_shape(&self) -> std::result::Result<GnfRoles, String> {
        if self.states.len() != 3 {
            return Err(format!("expected 3 states, found {}", self.states.len()));
        }
        let finals: Vec<usize> = self.finals().collect();
        let &[accepting] = finals.as_slice() else {
            return Err("expected exactly one final state".into());
        };
        let z = &self.stack_start;
        let left: Vec<&Transition> = self
            .transitions
            .iter()
            .filter(|t| t.read == TapeSymbol::LeftEnd)
            .collect();
        let &[init] = left.as_slice() else {
            return Err("expected exactly one move on the left endmarker".into());
        };
        let working = init.to;
        if init.from != self.start
            || &init.top != z
            || init.push.len() != 2
            || &init.push.symbols()[1] != z
        {
            return Err("left-endmarker move must be (q0, CENT, z) -> (q1, S z)".into());
        }
        let start_variable = init.push.symbols()[0].clone();
        if &start_variable == z {
            return Err("start variable coincides with the stack start symbol".into());
        }
        if working == self.start || working == accepting || self.start == accepting {
            return Err("initial, working and accepting states must be distinct".into());
        }
        let right: Vec<&Transition> = self
            .transitions
            .iter()
            .filter(|t| t.read == TapeSymbol::RightEnd)
            .collect();
        let &[fin] = right.as_slice() else {
            return Err("expected exactly one move on the right endmarker".into());
        };
        if fin.from != working
            || &fin.top != z
            || fin.to != accepting
            || fin.push.symbols() != [z.clone()]
        {
            return Err("right-endmarker move must be (q1, DOLLAR, z) -> (qf, z)".into());
        }
        for t in &self.transitions {
            if !matches!(t.read, TapeSymbol::Input(_)) {
                continue;
            }
            if t.from != working || t.to != working {
                return Err(format!(
                    "input move `{}` leaves the working state",
                    self.transition_line_for(t)
                ));
            }
            if &t.top == z {
                return Err("input move reads the stack start symbol".into());
            }
            if t.push.iter().any(|s| s == z) {
                return Err("input move pushes the stack start symbol".into());
            }
        }
        Ok(GnfRoles {
            initial: self.start,
            working,
            accepting,
            start_variable,
            stack_start: z.clone(),
        })
    }

    fn encode_input(&self, x: &Word) -> Option<Vec<usize>> {
        let mut tape = Vec::with_capacity(x.len() + 2);
        tape.push(self.input_alphabet.len());
        for a in x {
            tape.push(self.input_alphabet.index_of(a)?);
        }
        tape.push(self.input_alphabet.len() + 1);
        Some(tape)
    }

    /// First accepting path in the deterministic search order, if any.
    pub fn accepts(&self, x: &Word) -> Option<AcceptingPath> {
        self.enumerate_accepting_paths(x, 1).into_iter().next()
    }

    /// All accepting paths (up to `limit`) in deterministic order: depth-first,
    /// moves tried in serialized order. Failed configurations are memoized.
    pub fn enumerate_accepting_paths(&self, x: &Word, limit: usize) -> Vec<AcceptingPath> {
        let Some(tape) = self.encode_input(x) else {
            return Vec::new();
        };
        let mut search = PathSearch {
            machine: self,
            tape: &tape,
            limit: limit.max(1),
            dead: HashSet::new(),
            trail: Vec::with_capacity(tape.len()),
            found: Vec::new(),
        };
        let mut stack = vec![self.stack_index(&self.stack_start)];
        search.dfs(0, self.start, &mut stack);
        let found = std::mem::take(&mut search.found);
        found
            .into_iter()
            .map(|trail| self.replay(x, &trail))
            .collect()
    }

    /// Number of accepting paths, counted without materializing them (still
    /// capped by `limit`).
    pub fn count_accepting_paths(&self, x: &Word, limit: usize) -> usize {
        self.enumerate_accepting_paths(x, limit).len()
    }

    fn decode_stack(&self, stack: &[u32]) -> Word {
        stack
            .iter()
            .rev()
            .map(|&i| self.stack_alphabet.symbol(i as usize).clone())
            .collect()
    }

    fn replay(&self, x: &Word, trail: &[usize]) -> AcceptingPath {
        let mut stack = vec![self.stack_index(&self.stack_start)];
        let mut state = self.start;
        let mut configs = Vec::with_capacity(trail.len() + 1);
        configs.push(Configuration {
            boundary: -1,
            state,
            stack: self.decode_stack(&stack),
        });
        for (cell, &t) in trail.iter().enumerate() {
            stack.pop();
            let (to, push) = &self.compiled[t];
            stack.extend_from_slice(push);
            state = *to;
            configs.push(Configuration {
                boundary: cell as isize,
                state,
                stack: self.decode_stack(&stack),
            });
        }
        AcceptingPath {
            input: x.clone(),
            configs,
            transitions: trail.to_vec(),
        }
    }

    /// Confirms that `path` is an accepting computation of this machine on `x`.
    pub fn check_path(&self, x: &Word, path: &AcceptingPath) -> Result<()> {
        let fail = |msg: String| Err(Error::PathMismatch(msg));
        if &path.input != x {
            return fail(format!("path is for `{}`, not `{x}`", path.input));
        }
        let n = x.len();
        if path.configs.len() != n + 3 || path.transitions.len() != n + 2 {
            return fail(format!(
                "expected {} configurations and {} moves, found {} and {}",
                n + 3,
                n + 2,
                path.configs.len(),
                path.transitions.len()
            ));
        }
        let first = &path.configs[0];
        if first.boundary != -1
            || first.state != self.start
            || first.stack.symbols() != [self.stack_start.clone()]
        {
            return fail("path does not start from the initial configuration".into());
        }
        for (cell, &t) in path.transitions.iter().enumerate() {
            let Some(tr) = self.transitions.get(t) else {
                return fail(format!("unknown transition index {t}"));
            };
            let before = &path.configs[cell];
            let after = &path.configs[cell + 1];
            let read = match cell {
                0 => TapeSymbol::LeftEnd,
                c if c == n + 1 => TapeSymbol::RightEnd,
                c => TapeSymbol::Input(x.symbols()[c - 1].clone()),
            };
            if after.boundary != cell as isize || before.boundary != cell as isize - 1 {
                return fail(format!("boundary numbering broken at cell {cell}"));
            }
            if tr.from != before.state || tr.read != read || before.stack.first() != Some(&tr.top) {
                return fail(format!(
                    "move `{}` does not apply at cell {cell}",
                    self.transition_line(t)
                ));
            }
            let expected = tr
                .push
                .concat(&Word::new(before.stack.symbols()[1..].to_vec()));
            if after.state != tr.to || after.stack != expected {
                return fail(format!(
                    "configuration after cell {cell} does not follow from its move"
                ));
            }
        }
        if !self.finals[path.configs[n + 2].state] {
            return fail("path ends in a non-final state".into());
        }
        Ok(())
    }

    /// Every accepted word of length at most `max_len`, by expanding the prefix
    /// tree with the set of reachable configurations at each node. For machines
    /// in Greibach shape, configurations whose stack cannot be emptied down to
    /// `z` in the remaining cells are pruned.
    pub fn language_upto(&self, max_len: usize, budget: usize) -> Result<BTreeSet<Word>> {
        let mut out = BTreeSet::new();
        let mut visited = 0usize;
        let z = self.stack_index(&self.stack_start);
        let initial: BTreeSet<(usize, Vec<u32>)> = [(self.start, vec![z])].into_iter().collect();
        let after_left = self.advance(&initial, self.input_alphabet.len());
        let mut prefix = Vec::new();
        self.expand(
            &after_left,
            &mut prefix,
            max_len,
            budget,
            &mut visited,
            &mut out,
        )?;
        Ok(out)
    }

    fn advance(
        &self,
        configs: &BTreeSet<(usize, Vec<u32>)>,
        tape: usize,
    ) -> BTreeSet<(usize, Vec<u32>)> {
        let mut next = BTreeSet::new();
        for (state, stack) in configs {
            let Some(&top) = stack.last() else { continue };
            if let Some(moves) = self.table.get(&(*state, tape, top)) {
                for &t in moves {
                    let (to, push) = &self.compiled[t];
                    let mut s = stack[..stack.len() - 1].to_vec();
                    s.extend_from_slice(push);
                    next.insert((*to, s));
                }
            }
        }
        next
    }

    fn expand(
        &self,
        configs: &BTreeSet<(usize, Vec<u32>)>,
        prefix: &mut Vec<Symbol>,
        max_len: usize,
        budget: usize,
        visited: &mut usize,
        out: &mut BTreeSet<Word>,
    ) -> Result<()> {
        *visited += configs.len().max(1);
        if *visited > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        let right = self.input_alphabet.len() + 1;
        if self
            .advance(configs, right)
            .iter()
            .any(|(q, _)| self.finals[*q])
        {
            out.insert(Word::new(prefix.clone()));
        }
        if prefix.len() == max_len {
            return Ok(());
        }
        let remaining = max_len - prefix.len() - 1;
        for (a, sym) in self.input_alphabet.iter().enumerate() {
            let mut next = self.advance(configs, a);
            if self.roles.is_some() {
                next.retain(|(_, stack)| stack.len() - 1 <= remaining);
            }
            if next.is_empty() {
                continue;
            }
            prefix.push(sym.clone());
            self.expand(&next, prefix, max_len, budget, visited, out)?;
            prefix.pop();
        }
        Ok(())
    }
}

struct PathSearch<'a> {
    machine: &'a Npda,
    tape: &'a [usize],
    limit: usize,
    dead: HashSet<(usize, usize, Vec<u32>)>,
    trail: Vec<usize>,
    found: Vec<Vec<usize>>,
}

impl PathSearch<'_> {
    /// Returns whether some accepting path continues from this configuration.
    fn dfs(&mut self, pos: usize, state: usize, stack: &mut Vec<u32>) -> bool {
        if pos == self.tape.len() {
            if self.machine.finals[state] {
                self.found.push(self.trail.clone());
                return true;
            }
            return false;
        }
        let key = (pos, state, stack.clone());
        if self.dead.contains(&key) {
            return false;
        }
        let Some(&top) = stack.last() else {
            self.dead.insert(key);
            return false;
        };
        let mut any = false;
        if let Some(moves) = self.machine.table.get(&(state, self.tape[pos], top)) {
            let base = stack.len() - 1;
            for &t in moves {
                if self.found.len() >= self.limit {
                    return true;
                }
                let (to, push) = &self.machine.compiled[t];
                stack.truncate(base);
                stack.extend_from_slice(push);
                self.trail.push(t);
                any |= self.dfs(pos + 1, *to, stack);
                self.trail.pop();
                stack.truncate(base);
                stack.push(top);
            }
        }
        if !any {
            self.dead.insert(key);
        }
        any
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{cfg_to_npda, Cfg, GnfGrammar};

    fn anbn_machine() -> Npda {
        let g = Cfg::parse("start: S\nS -> a S B | a B\nB -> b\n").unwrap();
        cfg_to_npda(&GnfGrammar::new(g).unwrap()).unwrap()
    }

    fn stacks(path: &AcceptingPath) -> Vec<String> {
        path.configs.iter().map(|c| c.stack.to_string()).collect()
    }

    #[test]
    fn anbn_run_follows_expected_stack_contents() {
        let m = anbn_machine();
        assert!(m.is_gnf_normal());
        assert!(m.is_bounded());
        let path = m.accepts(&Word::from_chars("aabb")).expect("aabb accepted");
        assert_eq!(
            stacks(&path),
            ["z", "S z", "S B z", "B B z", "B z", "z", "z"]
        );
        assert_eq!(path.configs.first().unwrap().boundary, -1);
        assert_eq!(path.configs.last().unwrap().boundary, 5);
        m.check_path(&Word::from_chars("aabb"), &path).unwrap();
        assert!(m.accepts(&Word::from_chars("ab")).is_some());
        assert!(m.accepts(&Word::from_chars("a")).is_none());
        assert!(m.accepts(&Word::from_chars("abc")).is_none());
    }

    #[test]
    fn rejected_inputs_have_no_paths() {
        let m = anbn_machine();
        assert!(m
            .enumerate_accepting_paths(&Word::from_chars("aab"), 10)
            .is_empty());
        assert_eq!(
            m.enumerate_accepting_paths(&Word::from_chars("aaabbb"), 10)
                .len(),
            1
        );
    }

    #[test]
    fn language_upto_small_cases() {
        let m = anbn_machine();
        let lang = m.language_upto(4, 100_000).unwrap();
        let expected: BTreeSet<Word> = ["ab", "aabb"].into_iter().map(Word::from_chars).collect();
        assert_eq!(lang, expected);
        assert!(m.language_upto(0, 100).unwrap().is_empty());
    }

    #[test]
    fn tampered_paths_are_rejected() {
        let m = anbn_machine();
        let x = Word::from_chars("aabb");
        let mut path = m.accepts(&x).unwrap();
        assert!(m.check_path(&Word::from_chars("ab"), &path).is_err());
        path.configs[2].stack = Word::from_tokens("B z").unwrap();
        assert!(matches!(
            m.check_path(&x, &path),
            Err(Error::PathMismatch(_))
        ));
    }

    #[test]
    fn endmarkers_cannot_be_input_symbols() {
        let spec = NpdaSpec {
            states: vec!["q".into()],
            input_alphabet: Alphabet::new(vec![Symbol::reserved("CENT")]).unwrap(),
            stack_alphabet: Alphabet::from_chars("z"),
            start: "q".into(),
            stack_start: Symbol::new("z"),
            finals: vec![],
            transitions: vec![],
        };
        assert!(matches!(Npda::new(spec), Err(Error::InvalidMachine(_))));
    }
}
