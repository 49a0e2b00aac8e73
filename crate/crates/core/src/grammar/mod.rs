//! Context-free grammars, Greibach normal form, and compilation to pushdown
//! machines.

mod cfg;
mod compile;
mod greibach;

pub use cfg::{generate_upto, Cfg, GnfGrammar};
pub use compile::{bound_stack_growth, cfg_to_npda};
pub use greibach::to_greibach;
