use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Word};

/// Length-indexed advice: `generate(n)` always has exactly `n` symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdviceFunction {
    /// `a^{n/3} b^{n/3} c^{n/3}` when `3 | n`, else `0^n`.
    L3eq,
    /// `0^{n/2-1} 1 0 1^{n/2-1}` for even `n ≥ 2`, `1^n` for odd `n`, λ at 0.
    Pal,
}

impl AdviceFunction {
    pub const ALL: [AdviceFunction; 2] = [AdviceFunction::L3eq, AdviceFunction::Pal];

    pub fn name(self) -> &'static str {
        match self {
            AdviceFunction::L3eq => "l3eq",
            AdviceFunction::Pal => "pal",
        }
    }

    pub fn alphabet(self) -> Alphabet {
        match self {
            AdviceFunction::L3eq => Alphabet::from_chars("abc0"),
            AdviceFunction::Pal => Alphabet::from_chars("01"),
        }
    }

    pub fn generate(self, n: usize) -> Word {
        match self {
            AdviceFunction::L3eq => advice_l3eq(n),
            AdviceFunction::Pal => advice_pal(n),
        }
    }
}

impl fmt::Display for AdviceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AdviceFunction {
    type Err = Error;

    fn from_str(name: &str) -> Result<Self> {
        AdviceFunction::ALL
            .into_iter()
            .find(|a| a.name() == name)
            .ok_or_else(|| Error::UnknownFixture(name.to_string()))
    }
}

pub fn advice_l3eq(n: usize) -> Word {
    if n.is_multiple_of(3) {
        let third = n / 3;
        Word::from_chars(&format!(
            "{}{}{}",
            "a".repeat(third),
            "b".repeat(third),
            "c".repeat(third)
        ))
    } else {
        Word::from_chars(&"0".repeat(n))
    }
}

pub fn advice_pal(n: usize) -> Word {
    match n {
        0 => Word::empty(),
        n if n % 2 == 1 => Word::from_chars(&"1".repeat(n)),
        n => {
            let side = n / 2 - 1;
            Word::from_chars(&format!("{}10{}", "0".repeat(side), "1".repeat(side)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn advice_examples() {
        assert_eq!(advice_l3eq(6).to_string(), "a a b b c c");
        assert_eq!(advice_l3eq(4), Word::from_chars("0000"));
        assert!(advice_l3eq(0).is_empty());
        assert_eq!(advice_pal(6), Word::from_chars("001011"));
        assert_eq!(advice_pal(3), Word::from_chars("111"));
        assert!(advice_pal(0).is_empty());
        assert_eq!(advice_pal(2), Word::from_chars("10"));
    }

    #[test]
    fn advice_has_the_requested_length() {
        for h in AdviceFunction::ALL {
            for n in 0..=200 {
                let w = h.generate(n);
                assert_eq!(w.len(), n, "{h} at {n}");
                h.alphabet().validate(&w).unwrap();
            }
        }
    }
}
