//! Atomic symbols.
//!
//! A symbol is an opaque token rather than a character. Besides plain atoms
//! (`a`, `a1`, `#`, `T_b`) there are two compound shapes that behave as single
//! symbols: a track pair `[upper/lower]` for two-track tapes, and a group
//! `(v1,v2,v3)` for the grouped stack symbols of a bounded pushdown machine.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Tokens that the text formats reserve and that can never be atoms.
pub const RESERVED_TOKENS: &[&str] = &["EPS", "CENT", "DOLLAR", "->", "|", "-"];

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Atom(Arc<str>),
    Pair(Arc<(Symbol, Symbol)>),
    Group(Arc<[Symbol]>),
}

impl Symbol {
    /// Builds an atom, rejecting names that would not survive a text round trip.
    pub fn atom(name: &str) -> Result<Symbol> {
        if !is_atom_name(name) || RESERVED_TOKENS.contains(&name) {
            return Err(Error::InvalidToken(name.to_string()));
        }
        Ok(Symbol::Atom(Arc::from(name)))
    }

    /// Atom constructor for names known to be valid (fixtures, generated names).
    ///
    /// Panics on a malformed name.
    pub fn new(name: &str) -> Symbol {
        Symbol::atom(name).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Endmarker atoms bypass the reserved-name check.
    #[cfg(test)]
    pub(crate) fn reserved(name: &'static str) -> Symbol {
        Symbol::Atom(Arc::from(name))
    }

    pub fn pair(upper: Symbol, lower: Symbol) -> Symbol {
        Symbol::Pair(Arc::new((upper, lower)))
    }

    pub fn group(members: Vec<Symbol>) -> Symbol {
        Symbol::Group(Arc::from(members))
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Symbol::Atom(name) => Some(name),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Symbol, &Symbol)> {
        match self {
            Symbol::Pair(p) => Some((&p.0, &p.1)),
            _ => None,
        }
    }

    pub fn as_group(&self) -> Option<&[Symbol]> {
        match self {
            Symbol::Group(g) => Some(g),
            _ => None,
        }
    }
}

fn is_atom_name(name: &str) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | '[' | ']' | '/' | ','))
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Atom(name) => f.write_str(name),
            Symbol::Pair(p) => write!(f, "[{}/{}]", p.0, p.1),
            Symbol::Group(g) => {
                f.write_str("(")?;
                for (i, s) in g.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{s}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(token: &str) -> Result<Symbol> {
        let mut parser = TokenParser { src: token, pos: 0 };
        let sym = parser.symbol()?;
        if parser.pos != token.len() {
            return Err(Error::InvalidToken(token.to_string()));
        }
        Ok(sym)
    }
}

struct TokenParser<'a> {
    src: &'a str,
    pos: usize,
}

impl TokenParser<'_> {
    fn fail(&self) -> Error {
        Error::InvalidToken(self.src.to_string())
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.fail())
        }
    }

    fn symbol(&mut self) -> Result<Symbol> {
        match self.peek() {
            Some('[') => {
                self.expect('[')?;
                let upper = self.symbol()?;
                self.expect('/')?;
                let lower = self.symbol()?;
                self.expect(']')?;
                Ok(Symbol::pair(upper, lower))
            }
            Some('(') => {
                self.expect('(')?;
                let mut members = vec![self.symbol()?];
                while self.peek() == Some(',') {
                    self.expect(',')?;
                    members.push(self.symbol()?);
                }
                self.expect(')')?;
                Ok(Symbol::group(members))
            }
            _ => {
                let rest = &self.src[self.pos..];
                let len = rest
                    .find(['(', ')', '[', ']', '/', ','])
                    .unwrap_or(rest.len());
                let name = &rest[..len];
                self.pos += len;
                // Reserved names are fine inside compounds only when they are
                // not standalone tokens; the outer caller decides.
                if name.is_empty() || !is_atom_name(name) {
                    return Err(self.fail());
                }
                Ok(Symbol::Atom(Arc::from(name)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compound_tokens_round_trip() {
        for token in ["a", "a1", "#", "[a/0]", "(S,T_b,B)", "([a/0],(x))", "(z)"] {
            let sym: Symbol = token.parse().unwrap();
            assert_eq!(sym.to_string(), token);
        }
    }

    #[test]
    fn malformed_tokens_are_rejected() {
        for token in ["", "[a/0", "(a,)", "a b", "[a]", "()"] {
            assert!(token.parse::<Symbol>().is_err(), "{token:?}");
        }
        assert!(Symbol::atom("EPS").is_err());
        assert!(Symbol::atom("x,y").is_err());
    }

    #[test]
    fn compounds_compare_structurally() {
        let a = Symbol::new("a");
        let zero = Symbol::new("0");
        assert_eq!(
            Symbol::pair(a.clone(), zero.clone()),
            "[a/0]".parse().unwrap()
        );
        assert_ne!(Symbol::group(vec![a.clone()]), a);
    }
}
