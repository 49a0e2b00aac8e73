use std::collections::BTreeSet;

use proptest::prelude::*;
use swaplab::automata::{language_upto, Dfa, EnumerationLimits};
use swaplab::fixtures::{fixture_grammar, fixture_machine, fixture_predicate, GRAMMAR_NAMES};
use swaplab::grammar::{bound_stack_growth, cfg_to_npda, generate_upto, to_greibach};
use swaplab::swap_regular::{find_swap, find_swap_multi, swapping_constant};
use swaplab::{Alphabet, SampleSet, Word};

fn brute_force(
    alphabet: &Alphabet,
    max_len: usize,
    member: impl Fn(&Word) -> bool,
) -> BTreeSet<Word> {
    (0..=max_len)
        .flat_map(|n| alphabet.words_of_length(n).collect::<Vec<_>>())
        .filter(|w| member(w))
        .collect()
}

fn oracle(name: &str, max_len: usize) -> BTreeSet<Word> {
    let g = fixture_grammar(name).unwrap();
    let ab = g.terminals().clone();
    match name {
        "anbn" | "anbn-gnf" => brute_force(&ab, max_len, |w| {
            let n = w.len() / 2;
            w.len() % 2 == 0
                && n > 0
                && w.to_string() == format!("{}{}", "a ".repeat(n), "b ".repeat(n)).trim_end()
        }),
        "left-rec" => brute_force(&ab, max_len, |w| !w.is_empty()),
        "pal-sharp" => {
            let p = fixture_predicate("pal-sharp").unwrap();
            brute_force(&ab, max_len, |w| p.contains(w))
        }
        "equal" => {
            let p = fixture_predicate("equal").unwrap();
            brute_force(&ab, max_len, |w| !w.is_empty() && p.contains(w))
        }
        other => panic!("no oracle for {other}"),
    }
}

#[test]
fn every_pipeline_stage_matches_the_oracle() {
    let limits = EnumerationLimits::default();
    for name in GRAMMAR_NAMES {
        let expected = oracle(name, 8);
        let g = fixture_grammar(name).unwrap();
        let gnf = to_greibach(&g).unwrap();
        let m = cfg_to_npda(&gnf).unwrap();
        let bounded = bound_stack_growth(&m).unwrap();
        assert_eq!(
            generate_upto(&g, 8, limits).unwrap(),
            expected,
            "{name} grammar"
        );
        assert_eq!(
            generate_upto(gnf.cfg(), 8, limits).unwrap(),
            expected,
            "{name} gnf"
        );
        assert_eq!(
            language_upto(&m, 8, limits).unwrap(),
            expected,
            "{name} npda"
        );
        assert_eq!(
            language_upto(&bounded, 8, limits).unwrap(),
            expected,
            "{name} bounded"
        );
        assert_eq!(
            fixture_machine(name)
                .unwrap()
                .language_upto(8, 5_000_000)
                .unwrap(),
            expected
        );
    }
}

#[test]
fn accepting_paths_replay() {
    let m = fixture_machine("equal").unwrap();
    let x = Word::from_chars("0110");
    let paths = m.enumerate_accepting_paths(&x, 100);
    assert!(!paths.is_empty());
    for p in &paths {
        m.check_path(&x, p).unwrap();
        assert_eq!(p.configs.len(), x.len() + 3);
    }
}

fn random_dfa(states: usize, table: &[usize], finals: &[bool]) -> Dfa {
    Dfa::from_fn(
        (0..states).map(|q| format!("q{q}")).collect(),
        Alphabet::from_chars("01"),
        0,
        |q| finals[q],
        |q, a| table[2 * q + usize::from(a.as_atom() == Some("1"))] % states,
    )
    .unwrap()
}

fn dfa_strategy() -> impl Strategy<Value = Dfa> {
    (1usize..=4)
        .prop_flat_map(|q| {
            (
                Just(q),
                prop::collection::vec(0..q, 2 * q),
                prop::collection::vec(any::<bool>(), q),
            )
        })
        .prop_map(|(q, table, finals)| random_dfa(q, &table, &finals))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn large_samples_always_collide(d in dfa_strategy(), n in 1usize..=8, skip in 0usize..4) {
        let members: Vec<Word> = d.alphabet().words_of_length(n).filter(|w| d.accepts(w).unwrap()).collect();
        let need = d.state_count() + 1;
        prop_assume!(members.len() >= need + skip);
        let s = SampleSet::new(d.alphabet().clone(), n, members.into_iter().skip(skip).take(need)).unwrap();
        for cut in 0..=n {
            let w = find_swap(&d, &s, cut).unwrap();
            let w = w.witness().expect("pigeonhole");
            prop_assert!(d.accepts(&w.swapped_xy).unwrap() && d.accepts(&w.swapped_yx).unwrap());
        }
    }

    #[test]
    fn block_swaps_collide_past_the_constant(d in dfa_strategy(), n in 2usize..=8, k in 2usize..=3) {
        let members: Vec<Word> = d.alphabet().words_of_length(n).filter(|w| d.accepts(w).unwrap()).collect();
        let need = swapping_constant(&d, k).unwrap() as usize + 1;
        prop_assume!(members.len() >= need && n >= k);
        let s = SampleSet::new(d.alphabet().clone(), n, members.into_iter().take(need)).unwrap();
        let blocks: Vec<usize> = (0..k).map(|b| n / k + usize::from(b < n % k)).collect();
        let w = find_swap_multi(&d, &s, &blocks).unwrap();
        let w = w.witness().expect("pigeonhole over state tuples");
        for (a, b) in &w.swapped {
            prop_assert!(d.accepts(a).unwrap() && d.accepts(b).unwrap());
        }
    }
}
