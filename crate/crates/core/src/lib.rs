//! Swap-witness search for regular and context-free languages.
//!
//! The library simulates finite and pushdown acceptors, converts grammars to
//! Greibach normal form and compiles them to pushdown machines, and searches
//! sample sets for pairs of accepted strings that can exchange a block while
//! staying accepted. Every witness it returns has been re-checked by
//! simulation.

pub mod automata;
pub mod error;
pub mod fixtures;
pub mod grammar;
pub mod swap_cfl;
pub mod swap_regular;
pub mod symbol;
pub mod word;

pub use error::{Error, Result};
pub use symbol::Symbol;
pub use word::{Alphabet, Interval, SampleSet, Word};
