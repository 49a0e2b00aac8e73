//! Index assignment and the bucketed swap search over pushdown machines.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::automata::{AcceptingPath, Npda, DEFAULT_PATH_LIMIT};
use crate::error::{Error, Result};
use crate::swap_cfl::transition::g_of;
use crate::swap_regular::{NoCollision, SwapOutcome};
use crate::symbol::Symbol;
use crate::word::{SampleSet, Word};

/// An element `(i, j, v, w)` of the index set: the middle `x[i..i+j]` is
/// entered with `v` on top and left with a single symbol `w` above the same
/// stack bottom. Ordered by `i`, `j`, then the stack-alphabet positions of
/// `v` and `w`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeltaIndex {
    pub i: usize,
    pub j: usize,
    pub v_rank: usize,
    pub w_rank: usize,
    pub v: Symbol,
    pub w: Symbol,
}

impl fmt::Display for DeltaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.i, self.j, self.v, self.w)
    }
}

/// The least index found for one member, with the path that realises it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaAssignment {
    pub index: DeltaIndex,
    pub path: AcceptingPath,
    pub paths_scanned: usize,
    /// The path enumeration hit its budget, so more paths may exist.
    pub truncated: bool,
}

/// Size of the index set for given parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeltaSize {
    /// `sum over j in [j0, k] of (n - j) |Γ|^2`
    pub exact: u128,
    /// `|Γ|^2 (k - j0 + 1)(n - j0 + 1)`, the coarser bound used for sample
    /// sizes.
    pub bound: u128,
}

pub fn delta_size_for(gamma: usize, n: usize, j0: usize, k: usize) -> Result<DeltaSize> {
    if j0 == 0 || j0 > k || k > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= j0 <= k <= n, got j0 = {j0}, k = {k}, n = {n}"
        )));
    }
    let g2 = (gamma as u128).pow(2);
    let exact = (j0..=k).map(|j| (n - j) as u128).sum::<u128>() * g2;
    let bound = g2 * (k - j0 + 1) as u128 * (n - j0 + 1) as u128;
    Ok(DeltaSize { exact, bound })
}

pub fn delta_size(m: &Npda, n: usize, j0: usize, k: usize) -> Result<DeltaSize> {
    delta_size_for(m.stack_alphabet().len(), n, j0, k)
}

fn check_parameters(n: usize, j0: usize, k: usize) -> Result<()> {
    if j0 < 2 || 2 * j0 > k || k > n {
        return Err(Error::PreconditionViolated(format!(
            "need j0 >= 2 and 2*j0 <= k <= n, got j0 = {j0}, k = {k}, n = {n}"
        )));
    }
    Ok(())
}

/// The least `(i, j, v, w)` with `1 ≤ i ≤ n - j`, `j0 ≤ j ≤ k` realised by
/// any of the first `path_budget` accepting paths of `x`.
///
/// Fails with `NotInLanguage` if `x` is rejected, `PathBudgetExceeded` if
/// nothing was found and the enumeration was cut short, and `NoAssignment` if
/// nothing was found among all accepting paths.
pub fn assign_delta(
    m: &Npda,
    x: &Word,
    j0: usize,
    k: usize,
    path_budget: usize,
) -> Result<DeltaAssignment> {
    m.gnf_roles()?;
    let n = x.len();
    check_parameters(n, j0, k)?;
    let budget = path_budget.max(1);
    let paths = m.enumerate_accepting_paths(x, budget);
    if paths.is_empty() {
        return Err(Error::NotInLanguage(x.to_string()));
    }
    let truncated = paths.len() >= budget;
    let rank = |s: &Symbol| {
        m.stack_alphabet()
            .index_of(s)
            .expect("stack symbol of the machine")
    };
    let mut best: Option<(DeltaIndex, usize)> = None;
    for (p_idx, path) in paths.iter().enumerate() {
        for j in j0..=k {
            for i in 1..=n - j {
                let Some(v) = path.config_at(i as isize).stack.first() else {
                    continue;
                };
                let Some(t) = g_of(path, i, j, v) else {
                    continue;
                };
                if t.len() != 1 {
                    continue;
                }
                let w = &t.symbols()[0];
                let index = DeltaIndex {
                    i,
                    j,
                    v_rank: rank(v),
                    w_rank: rank(w),
                    v: v.clone(),
                    w: w.clone(),
                };
                if best.as_ref().is_none_or(|(b, _)| index < *b) {
                    best = Some((index, p_idx));
                }
            }
        }
    }
    match best {
        Some((index, p_idx)) => Ok(DeltaAssignment {
            index,
            path: paths[p_idx].clone(),
            paths_scanned: paths.len(),
            truncated,
        }),
        None if truncated => Err(Error::PathBudgetExceeded(budget)),
        None => Err(Error::NoAssignment(x.to_string())),
    }
}

/// Groups members by key and, visiting groups from largest to smallest (ties
/// by key), returns the first pair `(a, b)`, `a < b`, whose middles differ.
/// The middle of a member depends on the group it sits in.
pub fn first_distinct_pair<K: Ord + Clone, M: PartialEq>(
    keys: &[Option<K>],
    middle: impl Fn(usize, &K) -> M,
) -> Option<(K, usize, usize)> {
    let mut groups: BTreeMap<&K, Vec<usize>> = BTreeMap::new();
    for (idx, key) in keys.iter().enumerate() {
        if let Some(key) = key {
            groups.entry(key).or_default().push(idx);
        }
    }
    let mut order: Vec<(&K, Vec<usize>)> = groups.into_iter().collect();
    order.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| a.0.cmp(b.0)));
    for (key, members) in order {
        let mids: Vec<M> = members.iter().map(|&x| middle(x, key)).collect();
        for a in 0..members.len() {
            for b in a + 1..members.len() {
                if mids[a] != mids[b] {
                    return Some((key.clone(), members[a], members[b]));
                }
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CflSearchOptions {
    pub path_budget: usize,
    /// Compute the per-member assignments on the rayon pool.
    pub parallel: bool,
}

impl Default for CflSearchOptions {
    fn default() -> Self {
        CflSearchOptions {
            path_budget: DEFAULT_PATH_LIMIT,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CflSwapWitness {
    pub x: Word,
    pub y: Word,
    pub index: DeltaIndex,
    pub x_middle: Word,
    pub y_middle: Word,
    /// `x` with its middle taken from `y`.
    pub swapped_x: Word,
    /// `y` with its middle taken from `x`.
    pub swapped_y: Word,
    pub x_path: AcceptingPath,
    pub y_path: AcceptingPath,
    pub swapped_x_path: AcceptingPath,
    pub swapped_y_path: AcceptingPath,
    /// The two middles are permutations of each other.
    pub middles_are_anagrams: bool,
}

/// Why a member did not get an index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unassigned {
    pub member: Word,
    pub error: Error,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CflSearch {
    pub outcome: SwapOutcome<CflSwapWitness>,
    pub assignments: Vec<Option<DeltaIndex>>,
    pub unassigned: Vec<Unassigned>,
    pub buckets: usize,
    pub largest_bucket: usize,
    /// Members whose assignment came from a truncated path enumeration.
    pub truncated: usize,
}

fn anagrams(a: &Word, b: &Word) -> bool {
    let mut a = a.symbols().to_vec();
    let mut b = b.symbols().to_vec();
    a.sort();
    b.sort();
    a == b
}

/// Assigns every member its least index, buckets members by index, and swaps
/// the middles of the first pair in the largest bucket whose middles differ.
/// Both swapped strings are re-simulated; a rejection is reported as
/// `VerificationFailed`. Members without an index are listed, not fatal.
pub fn find_cfl_swap(
    m: &Npda,
    s: &SampleSet,
    j0: usize,
    k: usize,
    opts: CflSearchOptions,
) -> Result<CflSearch> {
    m.gnf_roles()?;
    check_parameters(s.n(), j0, k)?;
    let assign = |x: &Word| assign_delta(m, x, j0, k, opts.path_budget);
    let results: Vec<Result<DeltaAssignment>> = if opts.parallel {
        s.strings().par_iter().map(assign).collect()
    } else {
        s.strings().iter().map(assign).collect()
    };
    let mut assigned: Vec<Option<DeltaAssignment>> = Vec::with_capacity(results.len());
    let mut unassigned = Vec::new();
    for (x, r) in s.strings().iter().zip(results) {
        match r {
            Ok(a) => assigned.push(Some(a)),
            Err(e @ (Error::NoAssignment(_) | Error::PathBudgetExceeded(_))) => {
                unassigned.push(Unassigned {
                    member: x.clone(),
                    error: e,
                });
                assigned.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    let keys: Vec<Option<DeltaIndex>> = assigned
        .iter()
        .map(|a| a.as_ref().map(|a| a.index.clone()))
        .collect();
    let mut sizes: BTreeMap<&DeltaIndex, usize> = BTreeMap::new();
    for key in keys.iter().flatten() {
        *sizes.entry(key).or_default() += 1;
    }
    let buckets = sizes.len();
    let largest_bucket = sizes.values().copied().max().unwrap_or(0);
    let truncated = assigned.iter().flatten().filter(|a| a.truncated).count();
    let strings = s.strings();
    let pair = first_distinct_pair(&keys, |x, key: &DeltaIndex| {
        strings[x]
            .middle(key.i, key.i + key.j)
            .expect("index inside the string")
    });
    let outcome = match pair {
        None => SwapOutcome::NoCollision(NoCollision {
            sample_size: s.len(),
            classes: buckets,
        }),
        Some((index, a, b)) => {
            let (x, y) = (&strings[a], &strings[b]);
            let (lo, hi) = (index.i, index.i + index.j);
            let x_middle = x.middle(lo, hi)?;
            let y_middle = y.middle(lo, hi)?;
            let swapped_x = x.splice(lo, hi, &y_middle)?;
            let swapped_y = y.splice(lo, hi, &x_middle)?;
            let swapped_x_path = m
                .accepts(&swapped_x)
                .ok_or_else(|| Error::VerificationFailed(swapped_x.to_string()))?;
            let swapped_y_path = m
                .accepts(&swapped_y)
                .ok_or_else(|| Error::VerificationFailed(swapped_y.to_string()))?;
            SwapOutcome::Witness(CflSwapWitness {
                x: x.clone(),
                y: y.clone(),
                middles_are_anagrams: anagrams(&x_middle, &y_middle),
                index,
                x_middle,
                y_middle,
                swapped_x,
                swapped_y,
                x_path: assigned[a].as_ref().expect("assigned").path.clone(),
                y_path: assigned[b].as_ref().expect("assigned").path.clone(),
                swapped_x_path,
                swapped_y_path,
            })
        }
    };
    Ok(CflSearch {
        outcome,
        assignments: keys,
        unassigned,
        buckets,
        largest_bucket,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture_machine, is_equal};
    use crate::swap_cfl::splice_paths;
    use crate::word::Alphabet;

    #[test]
    fn aabb_has_no_index_with_a_single_symbol_left() {
        let m = fixture_machine("anbn-gnf").unwrap();
        let err = assign_delta(&m, &Word::from_chars("aabb"), 2, 4, 100).unwrap_err();
        assert_eq!(
            err,
            Error::NoAssignment(Word::from_chars("aabb").to_string())
        );
        assert!(matches!(
            assign_delta(&m, &Word::from_chars("abab"), 2, 4, 100),
            Err(Error::NotInLanguage(_))
        ));
        assert!(matches!(
            assign_delta(&m, &Word::from_chars("aabb"), 2, 3, 100),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn longer_anbn_member_gets_an_index() {
        let m = fixture_machine("anbn-gnf").unwrap();
        let a = assign_delta(&m, &Word::from_chars("aaaabbbb"), 2, 4, 100).unwrap();
        assert!(!a.truncated);
        // heights climb to 5 and fall back, so level pairs 3 apart first
        // occur around the top
        assert_eq!((a.index.i, a.index.j), (2, 3));
        assert_eq!(a.index.v, Symbol::new("S"));
        assert_eq!(a.index.w, Symbol::new("B"));
    }

    #[test]
    fn sizes() {
        let d = delta_size_for(3, 10, 2, 4).unwrap();
        assert_eq!(d.exact, 9 * (8 + 7 + 6));
        assert_eq!(d.bound, 9 * 3 * 9);
        assert!(delta_size_for(3, 3, 2, 4).is_err());
    }

    #[test]
    fn pigeonhole_pair_prefers_the_largest_group() {
        let keys = [Some(2), Some(1), Some(2), None, Some(1), Some(2)];
        let mids = ["x", "y", "x", "z", "w", "v"];
        let (key, a, b) = first_distinct_pair(&keys, |i, _| mids[i]).unwrap();
        assert_eq!((key, a, b), (2, 0, 5));
        let same = [Some(0), Some(0)];
        assert_eq!(first_distinct_pair(&same, |_, _| 1), None);
    }

    #[test]
    fn equal_sample_yields_a_verified_swap() {
        let m = fixture_machine("equal").unwrap();
        let ab = Alphabet::from_chars("01");
        let s = SampleSet::new(ab.clone(), 8, ab.words_of_length(8).filter(is_equal)).unwrap();
        assert_eq!(s.len(), 70);
        let seq = find_cfl_swap(
            &m,
            &s,
            2,
            4,
            CflSearchOptions {
                path_budget: 200,
                parallel: false,
            },
        )
        .unwrap();
        let par = find_cfl_swap(
            &m,
            &s,
            2,
            4,
            CflSearchOptions {
                path_budget: 200,
                parallel: true,
            },
        )
        .unwrap();
        assert_eq!(seq, par);
        let w = seq.outcome.witness().expect("a swap in a 70-member sample");
        assert_ne!(w.x_middle, w.y_middle);
        assert!(m.accepts(&w.swapped_x).is_some() && m.accepts(&w.swapped_y).is_some());
        let spliced =
            splice_paths(&m, &w.x, &w.x_path, &w.y, &w.y_path, w.index.i, w.index.j).unwrap();
        assert_eq!(spliced.input, w.swapped_x);
    }
}
