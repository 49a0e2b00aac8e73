//! Words, alphabets, sample sets and the string combinatorics everything else
//! is built from.
//!
//! Positions are 0-based internally. `prefix`, `suffix` and `middle` follow the
//! decomposition identity `prefix(w,i) ++ middle(w,i,j) ++ suffix(w,|w|-j) == w`
//! for every `0 <= i <= j <= |w|`; `middle(w,i,i)` is therefore empty. The
//! 1-based "i-th symbol" reading of a degenerate middle is served by
//! [`Word::symbol_at`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::symbol::Symbol;

/// Text used for the empty word in every line-oriented format.
pub const EMPTY_WORD_TOKEN: &str = "EPS";

/// A finite sequence of symbols.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Word {
        Word(symbols)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Splits `text` into single-character atoms. Convenient for binary and
    /// letter alphabets: `Word::from_chars("0110")`.
    pub fn from_chars(text: &str) -> Word {
        Word(text.chars().map(|c| Symbol::new(&c.to_string())).collect())
    }

    /// Parses whitespace-separated tokens; `EPS` (or nothing) is the empty word.
    pub fn from_tokens(text: &str) -> Result<Word> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens == [EMPTY_WORD_TOKEN] {
            return Ok(Word::empty());
        }
        tokens
            .into_iter()
            .map(|t| t.parse())
            .collect::<Result<Vec<Symbol>>>()
            .map(Word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Symbol> {
        self.0.iter()
    }

    pub fn first(&self) -> Option<&Symbol> {
        self.0.first()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = self.0.clone();
        symbols.extend_from_slice(&other.0);
        Word(symbols)
    }

    /// The first `i` symbols.
    pub fn prefix(&self, i: usize) -> Result<Word> {
        self.check_index(i)?;
        Ok(Word(self.0[..i].to_vec()))
    }

    /// The last `i` symbols.
    pub fn suffix(&self, i: usize) -> Result<Word> {
        self.check_index(i)?;
        Ok(Word(self.0[self.len() - i..].to_vec()))
    }

    /// The word left after deleting the first `i` and the last `|w| - j` symbols.
    pub fn middle(&self, i: usize, j: usize) -> Result<Word> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i > j {
            return Err(Error::InvalidRange {
                lo: i as isize,
                hi: j as isize,
            });
        }
        Ok(Word(self.0[i..j].to_vec()))
    }

    /// The `i`-th symbol, counting from 1.
    pub fn symbol_at(&self, i: usize) -> Result<&Symbol> {
        if i == 0 || i > self.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            });
        }
        Ok(&self.0[i - 1])
    }

    /// Occurrences of `a`, without checking that `a` belongs to any alphabet.
    pub fn count(&self, a: &Symbol) -> usize {
        self.0.iter().filter(|s| *s == a).count()
    }

    /// Replaces the symbols in `[i, j)` by `replacement` (which must have
    /// length `j - i`). Used to build swapped strings.
    pub fn splice(&self, i: usize, j: usize, replacement: &Word) -> Result<Word> {
        let head = self.prefix(i)?;
        let tail = self.suffix(self.len() - j)?;
        if replacement.len() != j - i {
            return Err(Error::LengthMismatch {
                left: j - i,
                right: replacement.len(),
            });
        }
        Ok(head.concat(replacement).concat(&tail))
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().cloned().collect())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i > self.len() {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Word {
        Word(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Symbol;
    type IntoIter = std::slice::Iter<'a, Symbol>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(EMPTY_WORD_TOKEN);
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

pub fn prefix(w: &Word, i: usize) -> Result<Word> {
    w.prefix(i)
}

pub fn suffix(w: &Word, i: usize) -> Result<Word> {
    w.suffix(i)
}

pub fn middle(w: &Word, i: usize, j: usize) -> Result<Word> {
    w.middle(i, j)
}

/// Occurrences of `a` in `w`, where `a` must belong to `alphabet`.
pub fn count_symbol(alphabet: &Alphabet, w: &Word, a: &Symbol) -> Result<usize> {
    if !alphabet.contains(a) {
        return Err(Error::UnknownSymbol(a.to_string()));
    }
    Ok(w.count(a))
}

/// A nonempty ordered set of distinct symbols. The construction order is the
/// order used for every lexicographic comparison.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
    index: HashMap<Symbol, usize>,
}

impl Alphabet {
    pub fn new(symbols: Vec<Symbol>) -> Result<Alphabet> {
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Alphabet { symbols, index })
    }

    /// Alphabet of single-character atoms, e.g. `Alphabet::from_chars("01")`.
    pub fn from_chars(chars: &str) -> Alphabet {
        Alphabet::new(chars.chars().map(|c| Symbol::new(&c.to_string())).collect())
            .expect("valid character alphabet")
    }

    pub fn from_tokens(text: &str) -> Result<Alphabet> {
        Alphabet::new(
            text.split_whitespace()
                .map(|t| t.parse())
                .collect::<Result<Vec<Symbol>>>()?,
        )
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Symbol> {
        self.symbols.iter()
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.index.contains_key(s)
    }

    pub fn index_of(&self, s: &Symbol) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn symbol(&self, i: usize) -> &Symbol {
        &self.symbols[i]
    }

    pub fn validate(&self, w: &Word) -> Result<()> {
        match w.iter().find(|s| !self.contains(s)) {
            Some(s) => Err(Error::UnknownSymbol(s.to_string())),
            None => Ok(()),
        }
    }

    /// Lexicographic comparison in this alphabet's order; a proper prefix sorts
    /// first. Symbols outside the alphabet sort after every member.
    pub fn compare(&self, a: &Word, b: &Word) -> Ordering {
        let key = |s: &Symbol| self.index_of(s).unwrap_or(usize::MAX);
        for (x, y) in a.iter().zip(b.iter()) {
            match key(x).cmp(&key(y)) {
                Ordering::Equal => {}
                other => return other,
            }
        }
        a.len().cmp(&b.len())
    }

    /// Every word of length exactly `n`, in lexicographic order.
    pub fn words_of_length(&self, n: usize) -> impl Iterator<Item = Word> + '_ {
        let total = self.len().checked_pow(n as u32).unwrap_or(usize::MAX);
        (0..total).map(move |mut code| {
            let mut symbols = vec![self.symbols[0].clone(); n];
            for slot in symbols.iter_mut().rev() {
                *slot = self.symbols[code % self.len()].clone();
                code /= self.len();
            }
            Word(symbols)
        })
    }

    /// The alphabet of track pairs `[a/b]`, upper-major order.
    pub fn product(&self, lower: &Alphabet) -> Alphabet {
        let pairs = self
            .iter()
            .flat_map(|u| {
                lower
                    .iter()
                    .map(move |l| Symbol::pair(u.clone(), l.clone()))
            })
            .collect();
        Alphabet::new(pairs).expect("pairs of distinct symbols are distinct")
    }

    /// True when every symbol is an atom written as one character, so words
    /// can be written without separators.
    pub fn is_compact(&self) -> bool {
        self.iter()
            .all(|s| s.as_atom().is_some_and(|a| a.chars().count() == 1))
    }

    /// Reads a word over this alphabet. Text without whitespace is split into
    /// characters when the alphabet [is compact](Alphabet::is_compact);
    /// otherwise tokens are whitespace separated. `EPS` is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        let w =
            if self.is_compact() && !text.contains(char::is_whitespace) && text != EMPTY_WORD_TOKEN
            {
                Word::from_chars(text)
            } else {
                Word::from_tokens(text)?
            };
        self.validate(&w)?;
        Ok(w)
    }

    /// Inverse of [`Alphabet::parse_word`]: no separators for compact
    /// alphabets, `EPS` for the empty word.
    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            EMPTY_WORD_TOKEN.to_string()
        } else if self.is_compact() {
            w.iter().map(|s| s.to_string()).collect()
        } else {
            w.to_string()
        }
    }

    /// The `alphabet: tok1 tok2 ...` header line.
    pub fn header(&self) -> String {
        let tokens: Vec<String> = self.iter().map(|s| s.to_string()).collect();
        format!("alphabet: {}", tokens.join(" "))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.symbols).finish()
    }
}

/// A finite set of same-length words, kept sorted in alphabet order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSet {
    alphabet: Alphabet,
    n: usize,
    strings: Vec<Word>,
}

impl SampleSet {
    pub fn new(
        alphabet: Alphabet,
        n: usize,
        strings: impl IntoIterator<Item = Word>,
    ) -> Result<SampleSet> {
        let mut strings: Vec<Word> = strings.into_iter().collect();
        for w in &strings {
            alphabet.validate(w)?;
            if w.len() != n {
                return Err(Error::InvalidSampleSet(format!(
                    "member `{w}` has length {}, expected {n}",
                    w.len()
                )));
            }
        }
        strings.sort_by(|a, b| alphabet.compare(a, b));
        strings.dedup();
        Ok(SampleSet {
            alphabet,
            n,
            strings,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Common length of every member.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn strings(&self) -> &[Word] {
        &self.strings
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Word> {
        self.strings.iter()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.strings
            .binary_search_by(|probe| self.alphabet.compare(probe, w))
            .is_ok()
    }

    /// Groups members by their length-`j` middle starting at offset `i`.
    pub fn partition(&self, i: usize, j: usize) -> Result<BTreeMap<Word, SampleSet>> {
        if j == 0 || i + j > self.n {
            return Err(Error::InvalidRange {
                lo: i as isize,
                hi: (i + j) as isize,
            });
        }
        let mut groups: BTreeMap<Word, Vec<Word>> = BTreeMap::new();
        for w in &self.strings {
            groups
                .entry(w.middle(i, i + j)?)
                .or_default()
                .push(w.clone());
        }
        Ok(groups
            .into_iter()
            .map(|(u, members)| {
                let set = SampleSet {
                    alphabet: self.alphabet.clone(),
                    n: self.n,
                    strings: members,
                };
                (u, set)
            })
            .collect())
    }

    /// Text form: the alphabet header, then one member per line.
    pub fn to_text(&self) -> String {
        let mut out = self.alphabet.header();
        out.push('\n');
        for w in &self.strings {
            out.push_str(&self.alphabet.format_word(w));
            out.push('\n');
        }
        out
    }

    /// Parses [`SampleSet::to_text`] output. Blank lines are skipped; the
    /// common length is taken from the first member.
    pub fn from_text(text: &str) -> Result<SampleSet> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing alphabet header".into(),
        })?;
        let tokens = header
            .trim()
            .strip_prefix("alphabet:")
            .ok_or(Error::Parse {
                line: 1,
                message: "expected `alphabet:` header".into(),
            })?;
        let alphabet = Alphabet::from_tokens(tokens)?;
        let mut strings = Vec::new();
        for (no, line) in lines {
            let w = alphabet.parse_word(line).map_err(|e| Error::Parse {
                line: no + 1,
                message: e.to_string(),
            })?;
            strings.push(w);
        }
        let n = strings.first().map_or(0, Word::len);
        SampleSet::new(alphabet, n, strings)
    }
}

/// Sample-set partition `S_{i,u}` keyed by the middle `u`.
pub fn sample_partition(s: &SampleSet, i: usize, j: usize) -> Result<BTreeMap<Word, SampleSet>> {
    s.partition(i, j)
}

/// A closed range of intercell boundaries. Boundaries start at −1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    lo: isize,
    hi: isize,
}

impl Interval {
    pub fn new(lo: isize, hi: isize) -> Result<Interval> {
        if lo > hi {
            return Err(Error::InvalidRange { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> isize {
        self.lo
    }

    pub fn hi(&self) -> isize {
        self.hi
    }

    pub fn width(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    pub fn contains(&self, b: isize) -> bool {
        self.lo <= b && b <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::from_chars(s)
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(w("0110").prefix(0).unwrap(), Word::empty());
        assert_eq!(w("0110").prefix(4).unwrap(), w("0110"));
        assert_eq!(w("abc").prefix(2).unwrap(), w("ab"));
        assert!(matches!(
            w("abc").prefix(4),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn suffix_examples() {
        assert_eq!(w("0110").suffix(0).unwrap(), Word::empty());
        assert_eq!(w("0110").suffix(2).unwrap(), w("10"));
        assert_eq!(w("abc").suffix(3).unwrap(), w("abc"));
        assert!(w("abc").suffix(5).is_err());
    }

    #[test]
    fn middle_examples() {
        let x = w("010011");
        assert_eq!(x.middle(2, 4).unwrap(), w("00"));
        let rebuilt = x
            .prefix(2)
            .unwrap()
            .concat(&x.middle(2, 4).unwrap())
            .concat(&x.suffix(6 - 4).unwrap());
        assert_eq!(rebuilt, x);
        assert_eq!(w("abc").middle(0, 3).unwrap(), w("abc"));
        assert_eq!(w("abc").middle(1, 1).unwrap(), Word::empty());
        assert!(matches!(
            w("abc").middle(2, 1),
            Err(Error::InvalidRange { .. })
        ));
        assert!(w("abc").middle(1, 4).is_err());
    }

    #[test]
    fn symbol_at_is_one_based() {
        let x = w("abc");
        assert_eq!(x.symbol_at(1).unwrap(), &Symbol::new("a"));
        assert_eq!(x.symbol_at(3).unwrap(), &Symbol::new("c"));
        assert!(x.symbol_at(0).is_err());
        assert!(x.symbol_at(4).is_err());
    }

    #[test]
    fn count_symbol_examples() {
        let bin = Alphabet::from_chars("01");
        let zero = Symbol::new("0");
        assert_eq!(count_symbol(&bin, &w("0100"), &zero).unwrap(), 3);
        assert_eq!(count_symbol(&bin, &Word::empty(), &zero).unwrap(), 0);
        assert_eq!(count_symbol(&bin, &w("011001001"), &zero).unwrap(), 5);
        assert!(matches!(
            count_symbol(&bin, &w("01"), &Symbol::new("2")),
            Err(Error::UnknownSymbol(_))
        ));
    }

    #[test]
    fn partition_examples() {
        let bin = Alphabet::from_chars("01");
        let s = SampleSet::new(bin.clone(), 2, ["00", "01", "10", "11"].map(w)).unwrap();
        let parts = s.partition(0, 1).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&w("0")].strings(), &[w("00"), w("01")]);
        assert_eq!(parts[&w("1")].strings(), &[w("10"), w("11")]);

        let single = SampleSet::new(bin, 4, [w("0101")]).unwrap();
        let parts = single.partition(1, 2).unwrap();
        assert_eq!(parts.keys().collect::<Vec<_>>(), vec![&w("10")]);
        assert!(single.partition(3, 2).is_err());
        assert!(single.partition(0, 0).is_err());
    }

    #[test]
    fn alphabet_rejects_duplicates_and_empty() {
        assert!(Alphabet::new(vec![]).is_err());
        assert!(Alphabet::new(vec![Symbol::new("a"), Symbol::new("a")]).is_err());
    }

    #[test]
    fn sample_set_checks_lengths_and_dedups() {
        let bin = Alphabet::from_chars("01");
        assert!(SampleSet::new(bin.clone(), 2, [w("0"), w("01")]).is_err());
        assert!(SampleSet::new(bin.clone(), 1, [w("2")]).is_err());
        let s = SampleSet::new(bin, 2, [w("11"), w("01"), w("11")]).unwrap();
        assert_eq!(s.strings(), &[w("01"), w("11")]);
    }

    #[test]
    fn sample_set_text_round_trip() {
        let ab = Alphabet::from_tokens("a1 a2 #").unwrap();
        let s = SampleSet::new(
            ab,
            2,
            [
                Word::from_tokens("a2 #").unwrap(),
                Word::from_tokens("a1 a1").unwrap(),
            ],
        )
        .unwrap();
        let text = s.to_text();
        assert_eq!(text, "alphabet: a1 a2 #\na1 a1\na2 #\n");
        assert_eq!(SampleSet::from_text(&text).unwrap(), s);
    }

    #[test]
    fn compact_words() {
        let bin = Alphabet::from_chars("01");
        assert_eq!(bin.parse_word("0110").unwrap(), w("0110"));
        assert_eq!(bin.parse_word("0 1 1").unwrap(), w("011"));
        assert_eq!(bin.parse_word("EPS").unwrap(), Word::empty());
        assert!(matches!(
            bin.parse_word("012"),
            Err(Error::UnknownSymbol(_))
        ));
        assert_eq!(bin.format_word(&w("0110")), "0110");
        let s = SampleSet::new(bin, 3, [w("011"), w("101")]).unwrap();
        assert_eq!(s.to_text(), "alphabet: 0 1\n011\n101\n");
        assert_eq!(SampleSet::from_text(&s.to_text()).unwrap(), s);
        let wide = Alphabet::from_tokens("a1 b").unwrap();
        assert_eq!(wide.parse_word("a1 b").unwrap().len(), 2);
        assert_eq!(
            wide.format_word(&Word::from_tokens("a1 b").unwrap()),
            "a1 b"
        );
    }

    #[test]
    fn words_of_length_enumerates_in_order() {
        let bin = Alphabet::from_chars("01");
        let all: Vec<Word> = bin.words_of_length(2).collect();
        assert_eq!(all, ["00", "01", "10", "11"].map(w));
        assert_eq!(
            bin.words_of_length(0).collect::<Vec<_>>(),
            vec![Word::empty()]
        );
    }

    fn word_strategy() -> impl Strategy<Value = (Word, usize, usize)> {
        (1usize..5)
            .prop_flat_map(|k| proptest::collection::vec(0..k, 0..24))
            .prop_flat_map(|codes| {
                let len = codes.len();
                (Just(codes), 0..=len, 0..=len)
            })
            .prop_map(|(codes, a, b)| {
                let word = codes
                    .iter()
                    .map(|c| Symbol::new(&format!("s{c}")))
                    .collect();
                (word, a.min(b), a.max(b))
            })
    }

    proptest! {
        #[test]
        fn decomposition_identity((x, i, j) in word_strategy()) {
            let rebuilt = prefix(&x, i)?.concat(&middle(&x, i, j)?).concat(&suffix(&x, x.len() - j)?);
            prop_assert_eq!(rebuilt, x.clone());
            prop_assert_eq!(prefix(&x, i)?.len(), i);
            prop_assert_eq!(suffix(&x, i)?.len(), i);
            prop_assert_eq!(middle(&x, i, j)?.len(), j - i);
        }

        #[test]
        fn count_is_additive((x, i, _j) in word_strategy()) {
            let a = Symbol::new("s0");
            let (l, r) = (x.prefix(i)?, x.suffix(x.len() - i)?);
            prop_assert_eq!(x.count(&a), l.count(&a) + r.count(&a));
        }

        #[test]
        fn partition_covers_disjointly(codes in proptest::collection::btree_set(0u32..64, 1..30), i in 0usize..5, j in 1usize..3) {
            let bin = Alphabet::from_chars("01");
            let members = codes.iter().map(|c| Word::from_chars(&format!("{c:06b}")));
            let s = SampleSet::new(bin, 6, members)?;
            let parts = s.partition(i, j)?;
            let total: usize = parts.values().map(SampleSet::len).sum();
            prop_assert_eq!(total, s.len());
            for (u, part) in &parts {
                for member in part.iter() {
                    prop_assert_eq!(&member.middle(i, i + j)?, u);
                }
            }
        }
    }
}
