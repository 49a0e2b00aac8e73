//! Finite and pushdown acceptors.

mod dfa;
mod format;
mod npda;

use std::collections::BTreeSet;

pub use dfa::{parity_dfa, Dfa, DfaRun, ProductMode};
pub use format::{dfa_to_text, npda_to_text, parse_machine, Machine};
pub use npda::{
    AcceptingPath, Configuration, GnfRoles, Npda, NpdaSpec, TapeSymbol, Transition,
    DEFAULT_PATH_LIMIT,
};

use crate::error::{Error, Result};
use crate::word::Word;

/// Bounds for brute-force language enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    /// Longest length an enumeration may be asked for.
    pub max_len: usize,
    /// Number of search nodes after which enumeration gives up.
    pub node_budget: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_len: 12,
            node_budget: 5_000_000,
        }
    }
}

impl EnumerationLimits {
    pub fn check_len(&self, max_len: usize) -> Result<()> {
        if max_len > self.max_len {
            return Err(Error::InvalidParameter(format!(
                "enumeration length {max_len} exceeds the configured bound {}",
                self.max_len
            )));
        }
        Ok(())
    }
}

/// Anything that can list its accepted words up to a length.
pub trait Acceptor {
    fn accepts_word(&self, w: &Word) -> bool;
    fn enumerate_upto(&self, max_len: usize, budget: usize) -> Result<BTreeSet<Word>>;
}

impl Acceptor for Dfa {
    fn accepts_word(&self, w: &Word) -> bool {
        self.accepts(w).unwrap_or(false)
    }

    fn enumerate_upto(&self, max_len: usize, budget: usize) -> Result<BTreeSet<Word>> {
        Dfa::language_upto(self, max_len, budget)
    }
}

impl Acceptor for Npda {
    fn accepts_word(&self, w: &Word) -> bool {
        self.accepts(w).is_some()
    }

    fn enumerate_upto(&self, max_len: usize, budget: usize) -> Result<BTreeSet<Word>> {
        Npda::language_upto(self, max_len, budget)
    }
}

impl Acceptor for Machine {
    fn accepts_word(&self, w: &Word) -> bool {
        match self {
            Machine::Dfa(d) => d.accepts_word(w),
            Machine::Npda(m) => m.accepts_word(w),
        }
    }

    fn enumerate_upto(&self, max_len: usize, budget: usize) -> Result<BTreeSet<Word>> {
        match self {
            Machine::Dfa(d) => d.enumerate_upto(max_len, budget),
            Machine::Npda(m) => m.enumerate_upto(max_len, budget),
        }
    }
}

/// Every accepted word of length at most `max_len`, under `limits`.
pub fn language_upto<A: Acceptor + ?Sized>(
    acceptor: &A,
    max_len: usize,
    limits: EnumerationLimits,
) -> Result<BTreeSet<Word>> {
    limits.check_len(max_len)?;
    acceptor.enumerate_upto(max_len, limits.node_budget)
}
