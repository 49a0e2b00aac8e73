//! Stack contents along an accepting path, and the pieces a swap moves around.

use crate::automata::{AcceptingPath, Configuration, Npda};
use crate::error::{Error, Result};
use crate::swap_cfl::profile::HeightProfile;
use crate::symbol::Symbol;
use crate::word::Word;

/// Stack contents at every boundary `-1..=n+1` of an accepting path, top
/// first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackTransition {
    input: Word,
    stacks: Vec<Word>,
}

impl StackTransition {
    pub fn input(&self) -> &Word {
        &self.input
    }

    /// Boundaries `-1..=n+1`.
    pub fn boundaries(&self) -> std::ops::RangeInclusive<isize> {
        -1..=self.input.len() as isize + 1
    }

    pub fn stack(&self, boundary: isize) -> &Word {
        &self.stacks[(boundary + 1) as usize]
    }

    pub fn height(&self, boundary: isize) -> usize {
        self.stack(boundary).len()
    }

    pub fn profile(&self) -> HeightProfile {
        HeightProfile::from_heights(self.stacks.iter().map(Word::len).collect())
            .expect("at least three boundaries")
    }
}

/// Validates `path` against `m` and `x` and collects its stack contents.
pub fn stack_transition(m: &Npda, x: &Word, path: &AcceptingPath) -> Result<StackTransition> {
    m.gnf_roles()?;
    m.check_path(x, path)?;
    Ok(StackTransition {
        input: x.clone(),
        stacks: path.configs.iter().map(|c| c.stack.clone()).collect(),
    })
}

/// The string `t` such that, with `v s` on the stack at boundary `i`, the
/// stack never drops below `v s` on boundaries `i..i+j` and holds `t s` at
/// boundary `i + j`. `None` when `v` is not on top at `i` or the stack dips
/// into `s` too early.
pub fn extract_g(
    m: &Npda,
    x: &Word,
    path: &AcceptingPath,
    i: usize,
    j: usize,
    v: &Symbol,
) -> Result<Option<Word>> {
    let n = x.len();
    if j == 0 || i + j > n {
        return Err(Error::InvalidRange {
            lo: i as isize,
            hi: (i + j) as isize,
        });
    }
    m.check_path(x, path)?;
    Ok(g_of(path, i, j, v))
}

/// [`extract_g`] without the path check.
pub(crate) fn g_of(path: &AcceptingPath, i: usize, j: usize, v: &Symbol) -> Option<Word> {
    let (i, end) = (i as isize, (i + j) as isize);
    let at_i = &path.config_at(i).stack;
    if at_i.first() != Some(v) {
        return None;
    }
    let rest = at_i.len() - 1;
    if (i..end).any(|b| path.config_at(b).stack.len() < rest + 1) {
        return None;
    }
    let at_end = &path.config_at(end).stack;
    if at_end.len() < rest || at_end.symbols()[at_end.len() - rest..] != at_i.symbols()[1..] {
        return None;
    }
    Some(Word::new(at_end.symbols()[..at_end.len() - rest].to_vec()))
}

/// Builds the accepting path for `x[..i] y[i..i+j] x[i+j..]` out of `px` and
/// `py`: the part of `py` over the middle is replayed on top of the stack that
/// `px` has at boundary `i`. Both paths must pop the same symbol at `i` and
/// leave the same symbol at `i + j` above their untouched stack bottoms.
pub fn splice_paths(
    m: &Npda,
    x: &Word,
    px: &AcceptingPath,
    y: &Word,
    py: &AcceptingPath,
    i: usize,
    j: usize,
) -> Result<AcceptingPath> {
    let n = x.len();
    if y.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: y.len(),
        });
    }
    if j == 0 || i + j > n {
        return Err(Error::InvalidRange {
            lo: i as isize,
            hi: (i + j) as isize,
        });
    }
    m.check_path(x, px)?;
    m.check_path(y, py)?;
    let (lo, hi) = (i as isize, (i + j) as isize);
    let x_rest = Word::new(px.config_at(lo).stack.symbols()[1..].to_vec());
    let y_rest_len = py.config_at(lo).stack.len() - 1;
    let input = x.splice(i, i + j, &y.middle(i, i + j)?)?;

    let mut configs: Vec<Configuration> = Vec::with_capacity(n + 3);
    for b in -1..=n as isize + 1 {
        let c = if b <= lo || b >= hi {
            px.config_at(b).clone()
        } else {
            let theirs = py.config_at(b);
            let own = theirs.stack.len().checked_sub(y_rest_len).ok_or_else(|| {
                Error::PathMismatch(format!(
                    "stack of the donor path dips below its base at boundary {b}"
                ))
            })?;
            Configuration {
                boundary: b,
                state: theirs.state,
                stack: Word::new(theirs.stack.symbols()[..own].to_vec()).concat(&x_rest),
            }
        };
        configs.push(c);
    }
    let transitions = (0..n + 2)
        .map(|cell| {
            if cell > i && cell <= i + j {
                py.transitions[cell]
            } else {
                px.transitions[cell]
            }
        })
        .collect();
    let spliced = AcceptingPath {
        input: input.clone(),
        configs,
        transitions,
    };
    m.check_path(&input, &spliced)?;
    Ok(spliced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture_machine;

    fn anbn() -> Npda {
        fixture_machine("anbn-gnf").unwrap()
    }

    #[test]
    fn heights_of_aabb() {
        let m = anbn();
        let x = Word::from_chars("aabb");
        let p = m.accepts(&x).unwrap();
        let t = stack_transition(&m, &x, &p).unwrap();
        let heights: Vec<usize> = t.boundaries().map(|b| t.height(b)).collect();
        assert_eq!(heights, [1, 2, 3, 3, 2, 1, 1]);
        assert_eq!(t.stack(1).len(), 3);
    }

    #[test]
    fn g_sets_of_aabb() {
        let m = anbn();
        let x = Word::from_chars("aabb");
        let p = m.accepts(&x).unwrap();
        let s = Symbol::new("S");
        let g = extract_g(&m, &x, &p, 0, 3, &s).unwrap().unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(
            extract_g(&m, &x, &p, 1, 2, &s).unwrap(),
            Some(Word::empty())
        );
        // the stack at boundary 2 has a non-`S` top
        assert_eq!(extract_g(&m, &x, &p, 2, 2, &s).unwrap(), None);
        assert!(matches!(
            extract_g(&m, &x, &p, 3, 2, &s),
            Err(Error::InvalidRange { .. })
        ));
    }

    #[test]
    fn mismatched_path_is_rejected() {
        let m = anbn();
        let p = m.accepts(&Word::from_chars("aabb")).unwrap();
        let other = Word::from_chars("abab");
        assert!(matches!(
            stack_transition(&m, &other, &p),
            Err(Error::PathMismatch(_))
        ));
    }

    #[test]
    fn splicing_equal_middles_reproduces_the_path() {
        let m = anbn();
        let x = Word::from_chars("aaabbb");
        let p = m.accepts(&x).unwrap();
        let spliced = splice_paths(&m, &x, &p, &x, &p, 1, 2).unwrap();
        assert_eq!(spliced, p);
    }
}
