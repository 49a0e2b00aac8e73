//! Example languages, advice functions, sample sets and fixture machines.

mod advice;
mod languages;
mod machines;
mod samples;
mod track;

pub use advice::{advice_l3eq, advice_pal, AdviceFunction};
pub use languages::{
    equal6_alphabet, fixture_predicate, is_dup, is_equal, is_equal6, is_gt, is_l3eq, is_pal,
    is_pal_sharp, LanguagePredicate, PREDICATE_NAMES,
};
pub use machines::{
    equal_mod3_track_dfa, equal_track_dfa, fixture_gnf, fixture_grammar, fixture_grammar_text,
    fixture_machine, l3eq_advised_dfa, GRAMMAR_NAMES,
};
pub use samples::{
    dup_params, dup_params_strict, equal6_sample, equal6_samples, equal_sample, equal_samples,
    gt_sample, gt_samples, pal_samples, pal_sharp_samples, DupParams,
};
pub use track::{compose_track, track_samples, TrackString};
