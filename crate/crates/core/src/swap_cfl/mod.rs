//! Swap witnesses for languages given by pushdown machines in Greibach shape.
//!
//! Along an accepting path the stack heights form a profile over the intercell
//! boundaries. Every long enough stretch of that profile contains a short
//! subinterval that starts and ends at the same height and never dips below
//! it; the part of the input read there can be traded between two strings
//! whose paths enter and leave it with the same stack symbols.

mod profile;
mod search;
mod transition;

pub use profile::{Feature, FeatureKind, HeightProfile, IdealInterval, Route};
pub use search::{
    assign_delta, delta_size, delta_size_for, find_cfl_swap, first_distinct_pair, CflSearch,
    CflSearchOptions, CflSwapWitness, DeltaAssignment, DeltaIndex, DeltaSize, Unassigned,
};
pub use transition::{extract_g, splice_paths, stack_transition, StackTransition};
