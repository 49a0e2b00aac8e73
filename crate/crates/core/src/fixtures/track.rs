use crate::error::{Error, Result};
use crate::symbol::Symbol;
use crate::word::{Alphabet, SampleSet, Word};

/// Two words of equal length read cell by cell as pair symbols `[x_i/w_i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackString {
    upper: Word,
    lower: Word,
    pairs: Word,
}

impl TrackString {
    pub fn upper(&self) -> &Word {
        &self.upper
    }

    pub fn lower(&self) -> &Word {
        &self.lower
    }

    pub fn pairs(&self) -> &Word {
        &self.pairs
    }

    pub fn into_pairs(self) -> Word {
        self.pairs
    }

    /// Splits a word of pair symbols back into its two tracks.
    pub fn from_pairs(pairs: Word) -> Result<TrackString> {
        let mut upper = Vec::with_capacity(pairs.len());
        let mut lower = Vec::with_capacity(pairs.len());
        for s in &pairs {
            let (u, l) = s
                .as_pair()
                .ok_or_else(|| Error::InvalidToken(format!("`{s}` is not a track symbol")))?;
            upper.push(u.clone());
            lower.push(l.clone());
        }
        Ok(TrackString {
            upper: Word::new(upper),
            lower: Word::new(lower),
            pairs,
        })
    }
}

pub fn compose_track(x: &Word, w: &Word) -> Result<TrackString> {
    if x.len() != w.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: w.len(),
        });
    }
    let pairs = x
        .iter()
        .zip(w.iter())
        .map(|(u, l)| Symbol::pair(u.clone(), l.clone()))
        .collect();
    Ok(TrackString {
        upper: x.clone(),
        lower: w.clone(),
        pairs,
    })
}

/// Pairs every member of `s` with the same advice string, over
/// `s.alphabet() × advice_alphabet`.
pub fn track_samples(
    s: &SampleSet,
    advice: &Word,
    advice_alphabet: &Alphabet,
) -> Result<SampleSet> {
    advice_alphabet.validate(advice)?;
    let members = s
        .iter()
        .map(|x| compose_track(x, advice).map(TrackString::into_pairs))
        .collect::<Result<Vec<_>>>()?;
    SampleSet::new(s.alphabet().product(advice_alphabet), s.n(), members)
}
