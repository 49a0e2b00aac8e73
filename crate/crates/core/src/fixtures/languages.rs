use std::fmt;

use crate::error::{Error, Result};
use crate::symbol::Symbol;
use crate::word::{Alphabet, Word};

/// A named membership test over a fixed alphabet. Words containing symbols
/// outside the alphabet are simply not members.
#[derive(Clone)]
pub struct LanguagePredicate {
    name: &'static str,
    alphabet: Alphabet,
    test: fn(&Word) -> bool,
}

impl LanguagePredicate {
    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.alphabet.validate(w).is_ok() && (self.test)(w)
    }
}

impl fmt::Debug for LanguagePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LanguagePredicate({})", self.name)
    }
}

pub const PREDICATE_NAMES: [&str; 7] = ["pal", "equal", "gt", "dup", "equal6", "l3eq", "pal-sharp"];

/// The alphabet `a1 .. a6 #`.
pub fn equal6_alphabet() -> Alphabet {
    Alphabet::from_tokens("a1 a2 a3 a4 a5 a6 #").expect("fixed alphabet")
}

fn count(w: &Word, token: &str) -> usize {
    w.count(&Symbol::new(token))
}

/// `{ w w^R }` over `{0,1}`.
pub fn is_pal(w: &Word) -> bool {
    w.len().is_multiple_of(2) && *w == w.reversed()
}

/// Equally many `0`s and `1`s.
pub fn is_equal(w: &Word) -> bool {
    count(w, "0") == count(w, "1")
}

/// Strictly more `0`s than `1`s.
pub fn is_gt(w: &Word) -> bool {
    count(w, "0") > count(w, "1")
}

/// `{ w w }` over `{0,1}`.
pub fn is_dup(w: &Word) -> bool {
    let half = w.len() / 2;
    w.len().is_multiple_of(2) && w.symbols()[..half] == w.symbols()[half..]
}

/// Every symbol other than `#` occurs equally often.
pub fn is_equal6(w: &Word) -> bool {
    let first = count(w, "a1");
    ["a2", "a3", "a4", "a5", "a6"]
        .iter()
        .all(|t| count(w, t) == first)
}

/// `{ a^n b^n c^n : n ≥ 0 }`.
pub fn is_l3eq(w: &Word) -> bool {
    let n = w.len() / 3;
    w.len().is_multiple_of(3)
        && *w
            == Word::from_chars(&format!(
                "{}{}{}",
                "a".repeat(n),
                "b".repeat(n),
                "c".repeat(n)
            ))
}

/// `{ w # w^R : w ∈ {0,1}* }`.
pub fn is_pal_sharp(w: &Word) -> bool {
    let sharp = Symbol::new("#");
    let n = w.len();
    n % 2 == 1 && w.symbols()[n / 2] == sharp && w.count(&sharp) == 1 && *w == w.reversed()
}

pub fn fixture_predicate(name: &str) -> Result<LanguagePredicate> {
    let binary = Alphabet::from_chars("01");
    let (name, alphabet, test): (&'static str, Alphabet, fn(&Word) -> bool) = match name {
        "pal" => ("pal", binary, is_pal),
        "equal" => ("equal", binary, is_equal),
        "gt" => ("gt", binary, is_gt),
        "dup" => ("dup", binary, is_dup),
        "equal6" => ("equal6", equal6_alphabet(), is_equal6),
        "l3eq" => ("l3eq", Alphabet::from_chars("abc"), is_l3eq),
        "pal-sharp" => ("pal-sharp", Alphabet::from_chars("01#"), is_pal_sharp),
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    Ok(LanguagePredicate {
        name,
        alphabet,
        test,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn holds(name: &str, w: &Word) -> bool {
        fixture_predicate(name).unwrap().contains(w)
    }

    #[test]
    fn predicate_examples() {
        assert!(holds("dup", &Word::from_chars("0101")));
        assert!(!holds("dup", &Word::from_chars("011")));
        assert!(holds("gt", &Word::from_chars("001")));
        assert!(holds(
            "equal6",
            &Word::from_tokens("a1 a2 a3 a4 a5 a6").unwrap()
        ));
        assert!(!holds("equal6", &Word::from_tokens("a1 a1 #").unwrap()));
        assert!(holds("l3eq", &Word::from_chars("aabbcc")));
        assert!(holds("l3eq", &Word::empty()));
        assert!(!holds("l3eq", &Word::from_chars("abcabc")));
        assert!(holds("pal-sharp", &Word::from_chars("01#10")));
        assert!(!holds("pal-sharp", &Word::from_chars("0#1")));
        assert!(!holds("pal-sharp", &Word::from_chars("#0#")));
        assert!(holds("pal", &Word::from_chars("0110")));
        assert!(!holds("pal", &Word::from_chars("010")));
        assert!(!holds("equal", &Word::from_chars("0a")));
        assert!(matches!(
            fixture_predicate("nope"),
            Err(Error::UnknownFixture(_))
        ));
    }

    #[test]
    fn every_listed_name_resolves() {
        for name in PREDICATE_NAMES {
            assert_eq!(fixture_predicate(name).unwrap().name(), name);
        }
    }
}
