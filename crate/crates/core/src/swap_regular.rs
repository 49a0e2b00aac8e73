//! Pigeonhole swap witnesses over deterministic finite automata.
//!
//! Two accepted strings of the same length that reach the same state after
//! `i` symbols can exchange their suffixes (or, with several cut points, any
//! block delimited by equal states) and both results are still accepted.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::word::{SampleSet, Word};

/// Either a verified witness or the report that no two members collide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SwapOutcome<W> {
    Witness(W),
    NoCollision(NoCollision),
}

impl<W> SwapOutcome<W> {
    pub fn witness(&self) -> Option<&W> {
        match self {
            SwapOutcome::Witness(w) => Some(w),
            SwapOutcome::NoCollision(_) => None,
        }
    }

    pub fn is_witness(&self) -> bool {
        matches!(self, SwapOutcome::Witness(_))
    }
}

/// Every member landed in its own class, so the pigeonhole has nothing to
/// work with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoCollision {
    pub sample_size: usize,
    pub classes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularSwapWitness {
    pub x: Word,
    pub y: Word,
    pub cut: usize,
    /// Shared state after `cut` symbols. Absent only for the degenerate cut
    /// `cut = n`, where the two runs may end in different final states.
    pub collision_state: Option<usize>,
    /// `prefix(x, cut) ++ suffix(y, n - cut)`
    pub swapped_xy: Word,
    /// `prefix(y, cut) ++ suffix(x, n - cut)`
    pub swapped_yx: Word,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiCutWitness {
    pub x: Word,
    pub y: Word,
    pub block_lengths: Vec<usize>,
    /// States at the cumulative block boundaries that lie strictly inside
    /// the string, in order.
    pub state_tuple: Vec<usize>,
    /// For block `j`: (`x` with block `j` taken from `y`, `y` with block `j`
    /// taken from `x`).
    pub swapped: Vec<(Word, Word)>,
    pub verified: bool,
}

/// `|Q|^k`, the number of classes the pigeonhole ranges over.
pub fn swapping_constant(d: &Dfa, k: usize) -> Result<u128> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "block count must be at least 1".into(),
        ));
    }
    let exp = u32::try_from(k)
        .map_err(|_| Error::InvalidParameter(format!("block count {k} is too large")))?;
    (d.state_count() as u128)
        .checked_pow(exp)
        .ok_or_else(|| Error::InvalidParameter(format!("|Q|^{k} overflows")))
}

/// State traces for all members, in sample order. Fails if a member is
/// rejected.
fn traces(d: &Dfa, s: &SampleSet) -> Result<Vec<Vec<usize>>> {
    s.strings()
        .par_iter()
        .map(|x| {
            let run = d.run(x)?;
            if run.accepted {
                Ok(run.trace)
            } else {
                Err(Error::NotInLanguage(x.to_string()))
            }
        })
        .collect()
}

/// Groups members by `key` and returns the lexicographically least pair
/// `(x, y)`, `x < y`, sharing a key, together with the number of classes.
fn first_collision<K: Ord>(keys: Vec<K>) -> (Option<(usize, usize)>, usize) {
    let mut classes: BTreeMap<K, Vec<usize>> = BTreeMap::new();
    for (idx, key) in keys.into_iter().enumerate() {
        classes.entry(key).or_default().push(idx);
    }
    let pair = classes
        .values()
        .filter(|members| members.len() >= 2)
        .map(|members| (members[0], members[1]))
        .min();
    (pair, classes.len())
}

fn splice_suffix(x: &Word, y: &Word, cut: usize) -> Result<Word> {
    Ok(x.prefix(cut)?.concat(&y.suffix(y.len() - cut)?))
}

/// Single-cut swap at boundary `cut`. Cuts `0` and `n` are degenerate: any
/// two members work and the first two are returned.
pub fn find_swap(d: &Dfa, s: &SampleSet, cut: usize) -> Result<SwapOutcome<RegularSwapWitness>> {
    let n = s.n();
    if cut > n {
        return Err(Error::IndexOutOfRange { index: cut, len: n });
    }
    let traces = traces(d, s)?;
    let (pair, classes) = if cut == 0 || cut == n {
        (
            if s.len() >= 2 { Some((0, 1)) } else { None },
            s.len().min(1),
        )
    } else {
        first_collision(traces.iter().map(|t| t[cut]).collect())
    };
    let Some((a, b)) = pair else {
        return Ok(SwapOutcome::NoCollision(NoCollision {
            sample_size: s.len(),
            classes,
        }));
    };
    let (x, y) = (&s.strings()[a], &s.strings()[b]);
    let swapped_xy = splice_suffix(x, y, cut)?;
    let swapped_yx = splice_suffix(y, x, cut)?;
    let verified = d.accepts(&swapped_xy)? && d.accepts(&swapped_yx)?;
    if !verified {
        return Err(Error::VerificationFailed(format!(
            "{swapped_xy} / {swapped_yx}"
        )));
    }
    let collision_state = (traces[a][cut] == traces[b][cut]).then_some(traces[a][cut]);
    Ok(SwapOutcome::Witness(RegularSwapWitness {
        x: x.clone(),
        y: y.clone(),
        cut,
        collision_state,
        swapped_xy,
        swapped_yx,
        verified,
    }))
}

/// Block swap for the consecutive blocks of the given lengths (the remainder
/// after the last block stays in place). Members are grouped by their states
/// at every block boundary strictly between `0` and `n`.
pub fn find_swap_multi(
    d: &Dfa,
    s: &SampleSet,
    block_lengths: &[usize],
) -> Result<SwapOutcome<MultiCutWitness>> {
    let n = s.n();
    if block_lengths.is_empty() {
        return Err(Error::InvalidBlocks(
            "at least one block is required".into(),
        ));
    }
    let total: usize = block_lengths.iter().sum();
    if total > n {
        return Err(Error::InvalidBlocks(format!(
            "blocks cover {total} symbols of a length-{n} string"
        )));
    }
    let bounds: Vec<usize> = block_lengths
        .iter()
        .scan(0, |acc, &len| {
            *acc += len;
            Some(*acc)
        })
        .collect();
    let inner: Vec<usize> = bounds.iter().copied().filter(|&b| b > 0 && b < n).collect();
    let traces = traces(d, s)?;
    let (pair, classes) = first_collision(
        traces
            .iter()
            .map(|t| inner.iter().map(|&b| t[b]).collect::<Vec<_>>())
            .collect(),
    );
    let Some((a, b)) = pair else {
        return Ok(SwapOutcome::NoCollision(NoCollision {
            sample_size: s.len(),
            classes,
        }));
    };
    let (x, y) = (&s.strings()[a], &s.strings()[b]);
    let mut swapped = Vec::with_capacity(block_lengths.len());
    let mut verified = true;
    let mut start = 0;
    for &end in &bounds {
        let xy = x.splice(start, end, &y.middle(start, end)?)?;
        let yx = y.splice(start, end, &x.middle(start, end)?)?;
        verified &= d.accepts(&xy)? && d.accepts(&yx)?;
        swapped.push((xy, yx));
        start = end;
    }
    if !verified {
        return Err(Error::VerificationFailed(format!(
            "block swaps of {x} and {y}"
        )));
    }
    Ok(SwapOutcome::Witness(MultiCutWitness {
        x: x.clone(),
        y: y.clone(),
        block_lengths: block_lengths.to_vec(),
        state_tuple: inner.iter().map(|&b| traces[a][b]).collect(),
        swapped,
        verified,
    }))
}

/// [`find_swap`] at every cut `0..=n`.
pub fn find_swap_all_cuts(d: &Dfa, s: &SampleSet) -> Result<Vec<SwapOutcome<RegularSwapWitness>>> {
    (0..=s.n()).map(|cut| find_swap(d, s, cut)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::parity_dfa;
    use crate::word::Alphabet;

    fn samples(list: &[&str]) -> SampleSet {
        let n = list[0].len();
        SampleSet::new(
            Alphabet::from_chars("01"),
            n,
            list.iter().map(|s| Word::from_chars(s)),
        )
        .unwrap()
    }

    #[test]
    fn parity_collision_after_one_symbol() {
        let d = parity_dfa();
        let out = find_swap(&d, &samples(&["110", "101", "011"]), 1).unwrap();
        let w = out.witness().expect("collision");
        assert_eq!(
            (w.x.clone(), w.y.clone()),
            (Word::from_chars("101"), Word::from_chars("110"))
        );
        assert_eq!(d.state_name(w.collision_state.unwrap()), "q_odd");
        assert_eq!(w.swapped_xy, Word::from_chars("110"));
        assert_eq!(w.swapped_yx, Word::from_chars("101"));
        assert!(w.verified);
    }

    #[test]
    fn degenerate_cuts_take_the_first_two_members() {
        let d = parity_dfa();
        let s = samples(&["110", "101", "011"]);
        for cut in [0, 3] {
            let w = find_swap(&d, &s, cut).unwrap().witness().cloned().unwrap();
            assert_eq!(w.x, s.strings()[0]);
            assert_eq!(w.y, s.strings()[1]);
            let originals = [w.x.clone(), w.y.clone()];
            assert!(originals.contains(&w.swapped_xy) && originals.contains(&w.swapped_yx));
        }
    }

    #[test]
    fn distinct_states_give_no_collision() {
        let d = parity_dfa();
        let out = find_swap(&d, &samples(&["011", "101"]), 1).unwrap();
        assert_eq!(
            out,
            SwapOutcome::NoCollision(NoCollision {
                sample_size: 2,
                classes: 2
            })
        );
    }

    #[test]
    fn rejected_members_are_errors() {
        let d = parity_dfa();
        assert!(matches!(
            find_swap(&d, &samples(&["100", "011"]), 1),
            Err(Error::NotInLanguage(_))
        ));
        assert!(matches!(
            find_swap(&d, &samples(&["011"]), 5),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn single_block_matches_single_cut() {
        let d = parity_dfa();
        let s = samples(&[
            "0000", "0011", "0101", "0110", "1001", "1010", "1100", "1111",
        ]);
        for cut in 1..=4 {
            let single = find_swap(&d, &s, cut).unwrap().witness().cloned().unwrap();
            let multi = find_swap_multi(&d, &s, &[cut])
                .unwrap()
                .witness()
                .cloned()
                .unwrap();
            assert_eq!((single.x, single.y), (multi.x, multi.y));
            assert_eq!(multi.swapped[0], (single.swapped_yx, single.swapped_xy));
        }
    }

    #[test]
    fn block_validation() {
        let d = parity_dfa();
        let s = samples(&["0000", "0011"]);
        assert!(matches!(
            find_swap_multi(&d, &s, &[3, 2]),
            Err(Error::InvalidBlocks(_))
        ));
        assert!(matches!(
            find_swap_multi(&d, &s, &[]),
            Err(Error::InvalidBlocks(_))
        ));
    }

    #[test]
    fn swapping_constants() {
        let d = parity_dfa();
        assert_eq!(swapping_constant(&d, 1).unwrap(), 2);
        assert_eq!(swapping_constant(&d, 3).unwrap(), 8);
        assert!(swapping_constant(&d, 0).is_err());
    }
}
