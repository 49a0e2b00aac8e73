use proptest::prelude::*;
use swaplab::automata::Npda;
use swaplab::fixtures::{fixture_machine, is_pal_sharp, pal_sharp_samples, GRAMMAR_NAMES};
use swaplab::grammar::bound_stack_growth;
use swaplab::swap_cfl::{
    assign_delta, delta_size_for, extract_g, find_cfl_swap, stack_transition, CflSearchOptions,
    HeightProfile, IdealInterval,
};
use swaplab::swap_regular::SwapOutcome;
use swaplab::{Alphabet, Interval, SampleSet, Word};

/// Widths of all `[a, b] ⊆ [lo, hi]` with `h(a) = h(b) = level` and no lower
/// height in between, by brute force over pairs.
fn widths(h: &[usize], lo: usize, hi: usize, level: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for a in lo..=hi {
        for b in a..=hi {
            if h[a] == level && h[b] == level && h[a..=b].iter().all(|&x| x >= level) {
                out.push(b - a);
            }
        }
    }
    out
}

/// Checks every postcondition of an ideal-subinterval answer on a profile
/// that starts at boundary -1.
fn postconditions_hold(h: &[usize], r: &IdealInterval, j0: usize, k: usize) -> bool {
    let (lo, hi) = (
        (r.interval.lo() + 1) as usize,
        (r.interval.hi() + 1) as usize,
    );
    let w = hi - lo;
    let level = r.height;
    let all = widths(h, 0, h.len() - 1, level);
    let min = all.iter().copied().filter(|&x| x > 0).min();
    let max = all.iter().copied().max();
    h[lo] == level
        && h[hi] == level
        && h[lo..=hi].iter().all(|&x| x >= level)
        && (j0..=k).contains(&w)
        && min.is_some_and(|m| m <= w)
        && max.is_some_and(|m| w <= m)
}

fn machines() -> Vec<(String, Npda)> {
    GRAMMAR_NAMES
        .iter()
        .map(|name| {
            let m = fixture_machine(name).unwrap();
            let m = if m.is_bounded() {
                m
            } else {
                bound_stack_growth(&m).unwrap()
            };
            (name.to_string(), m)
        })
        .collect()
}

#[test]
fn endpoint_law_over_fixture_paths() {
    for (name, m) in machines() {
        let z = Word::new(vec![m.stack_start().clone()]);
        let lang = m.language_upto(8, 5_000_000).unwrap();
        for x in &lang {
            for p in m.enumerate_accepting_paths(x, 50) {
                let t = stack_transition(&m, x, &p).unwrap();
                let n = x.len() as isize;
                assert_eq!(t.stack(-1), &z, "{name} {x}");
                assert_eq!(t.stack(0).len(), 2, "{name} {x}");
                assert_eq!(&t.stack(0).symbols()[1..], z.symbols());
                assert_eq!(t.stack(n), &z);
                assert_eq!(t.stack(n + 1), &z);
                assert!(t.boundaries().all(|b| t.height(b) >= 1));
            }
        }
    }
}

#[test]
fn short_anbn_heights() {
    let m = fixture_machine("anbn-gnf").unwrap();
    let x = Word::from_chars("ab");
    let t = stack_transition(&m, &x, &m.accepts(&x).unwrap()).unwrap();
    let h: Vec<usize> = t.boundaries().map(|b| t.height(b)).collect();
    assert_eq!(h, [1, 2, 2, 1, 1]);
}

#[test]
fn ideal_subintervals_on_fixture_paths() {
    for (name, m) in machines() {
        for x in m.language_upto(10, 5_000_000).unwrap() {
            let n = x.len();
            for p in m.enumerate_accepting_paths(&x, 20) {
                let profile = stack_transition(&m, &x, &p).unwrap().profile();
                for j0 in 2..=n / 2 {
                    for k in 2 * j0..=n {
                        let r = profile
                            .find_ideal_subinterval(&profile.full(), j0, k)
                            .unwrap();
                        assert!(
                            postconditions_hold(profile.heights(), &r, j0, k),
                            "{name} {x} {j0} {k} {r:?}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn assignments_are_deterministic_and_recheck() {
    let m = fixture_machine("pal-sharp").unwrap();
    let s = pal_sharp_samples(9).unwrap();
    for x in s.iter() {
        let a = assign_delta(&m, x, 2, 4, 100).unwrap();
        assert_eq!(a, assign_delta(&m, x, 2, 4, 100).unwrap());
        let single = assign_delta(&m, x, 2, 4, 1).unwrap();
        assert_eq!(
            (&a.index, &a.path),
            (&single.index, &single.path),
            "unambiguous machine"
        );
        let idx = &a.index;
        assert!((2..=4).contains(&idx.j) && idx.i >= 1 && idx.i + idx.j <= x.len());
        let t = extract_g(&m, x, &a.path, idx.i, idx.j, &idx.v)
            .unwrap()
            .unwrap();
        assert_eq!(t, Word::new(vec![idx.w.clone()]));
    }
}

#[test]
fn pal_sharp_witnesses_reverify() {
    let m = fixture_machine("pal-sharp").unwrap();
    let s = pal_sharp_samples(9).unwrap();
    assert_eq!(s.len(), 16);
    let out = find_cfl_swap(&m, &s, 2, 4, CflSearchOptions::default()).unwrap();
    if let SwapOutcome::Witness(w) = &out.outcome {
        assert_ne!(w.x_middle, w.y_middle);
        assert!(is_pal_sharp(&w.swapped_x) && is_pal_sharp(&w.swapped_y));
    }
}

#[test]
fn singleton_sample_has_no_collision() {
    let m = fixture_machine("anbn-gnf").unwrap();
    let s = SampleSet::new(
        Alphabet::from_chars("ab"),
        8,
        [Word::from_chars("aaaabbbb")],
    )
    .unwrap();
    let out = find_cfl_swap(&m, &s, 2, 4, CflSearchOptions::default()).unwrap();
    assert!(!out.outcome.is_witness());
}

#[test]
fn exact_count_never_exceeds_the_bound() {
    for gamma in 1..6 {
        for n in 2..20 {
            for j0 in 1..=n {
                for k in j0..=n {
                    let d = delta_size_for(gamma, n, j0, k).unwrap();
                    assert!(d.exact <= d.bound);
                    if j0 == k {
                        assert_eq!(d.exact, ((n - j0) * gamma * gamma) as u128);
                    }
                }
            }
        }
    }
}

/// An ideal profile from -1 with steps in {-1, 0, +1}: a walk that never
/// drops below the start, closed by a descent back to it.
fn ideal_profile() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(-1i8..=1, 6..24).prop_map(|steps| {
        let mut h = vec![1usize];
        for s in steps {
            let next = (*h.last().unwrap() as i64 + s as i64).max(1) as usize;
            h.push(next);
        }
        while *h.last().unwrap() > 1 {
            h.push(h.last().unwrap() - 1);
        }
        h.push(1);
        h
    })
}

proptest! {
    #[test]
    fn ideal_subinterval_postconditions(h in ideal_profile(), a in 0usize..100, b in 0usize..100) {
        let n = h.len() - 3;
        prop_assume!(n >= 4);
        let j0 = 2 + a % (n / 2 - 1);
        let k = 2 * j0 + b % (n - 2 * j0 + 1);
        let p = HeightProfile::from_heights(h.clone()).unwrap();
        let r = p.find_ideal_subinterval(&p.full(), j0, k).unwrap();
        prop_assert!(postconditions_hold(&h, &r, j0, k), "{:?} {} {} {:?}", h, j0, k, r);
    }

    #[test]
    fn minwid_and_maxwid_match_brute_force(h in ideal_profile(), lo in 0usize..8, level in 1usize..6) {
        let p = HeightProfile::from_heights(h.clone()).unwrap();
        let lo = lo.min(h.len() - 1);
        let i = Interval::new(lo as isize - 1, h.len() as isize - 2).unwrap();
        let all = widths(&h, lo, h.len() - 1, level);
        prop_assert_eq!(p.minwid(&i, level).unwrap(), all.iter().copied().filter(|&w| w > 0).min());
        prop_assert_eq!(p.maxwid(&i, level).unwrap(), all.iter().copied().max());
    }
}
