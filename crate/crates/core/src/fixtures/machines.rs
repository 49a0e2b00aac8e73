use crate::automata::{Dfa, Npda, ProductMode};
use crate::error::{Error, Result};
use crate::grammar::{cfg_to_npda, to_greibach, Cfg, GnfGrammar};
use crate::symbol::Symbol;
use crate::word::{Alphabet, Word};

pub const GRAMMAR_NAMES: [&str; 5] = ["anbn", "anbn-gnf", "left-rec", "pal-sharp", "equal"];

/// Grammar text for a named fixture.
pub fn fixture_grammar_text(name: &str) -> Result<&'static str> {
    Ok(match name {
        "anbn" => "start: S\nterminals: a b\nS -> a S b | a b\n",
        "anbn-gnf" => "start: S\nterminals: a b\nS -> a S B | a B\nB -> b\n",
        "left-rec" => "start: S\nterminals: a\nS -> S a | a\n",
        "pal-sharp" => "start: S\nterminals: 0 1 #\nS -> 0 S 0 | 1 S 1 | #\n",
        "equal" => {
            "start: S\nterminals: 0 1\nS -> 0 B | 1 A\nA -> 0 | 0 S | 1 A A\nB -> 1 | 1 S | 0 B B\n"
        }
        other => return Err(Error::UnknownFixture(other.to_string())),
    })
}

pub fn fixture_grammar(name: &str) -> Result<Cfg> {
    Cfg::parse(fixture_grammar_text(name)?)
}

/// The named grammar in Greibach normal form (converted if necessary).
pub fn fixture_gnf(name: &str) -> Result<GnfGrammar> {
    let g = fixture_grammar(name)?;
    match GnfGrammar::new(g.clone()) {
        Ok(gnf) => Ok(gnf),
        Err(_) => to_greibach(&g),
    }
}

/// The compiled machine for a named fixture grammar.
pub fn fixture_machine(name: &str) -> Result<Npda> {
    cfg_to_npda(&fixture_gnf(name)?)
}

/// Advised acceptor for `a^n b^n c^n` over `{a,b,c} × {a,b,c,0}`: the product
/// of "upper equals lower cell by cell" and "empty, or the first lower symbol
/// is `a`". Fed with the `l3eq` advice it accepts exactly the members.
pub fn l3eq_advised_dfa() -> Dfa {
    let alphabet = Alphabet::from_chars("abc").product(&Alphabet::from_chars("abc0"));
    let equal_tracks = Dfa::from_fn(
        vec!["same".into(), "differ".into()],
        alphabet.clone(),
        0,
        |q| q == 0,
        |q, s| {
            let (u, l) = s.as_pair().expect("track symbol");
            usize::from(q == 1 || u != l)
        },
    )
    .expect("well-formed");
    let leading_a = Dfa::from_fn(
        vec!["fresh".into(), "led-by-a".into(), "led-by-other".into()],
        alphabet,
        0,
        |q| q != 2,
        |q, s| match q {
            0 if s.as_pair().expect("track symbol").1.as_atom() == Some("a") => 1,
            0 => 2,
            q => q,
        },
    )
    .expect("well-formed");
    equal_tracks
        .product(&leading_a, ProductMode::Intersection)
        .expect("shared alphabet")
}

fn binary_tracks() -> Alphabet {
    let binary = Alphabet::from_chars("01");
    binary.product(&binary)
}

fn zero_one_delta(s: &Symbol) -> (isize, &Symbol) {
    let (u, l) = s.as_pair().expect("track symbol");
    (if u.as_atom() == Some("0") { 1 } else { -1 }, l)
}

/// Exact acceptor for `{ [w/advice] : w ∈ Equal, |w| = n }` over
/// `{0,1} × {0,1}`: it tracks the position and the running difference
/// `#_0 - #_1`, so distinct differences at any cut never share a state.
pub fn equal_track_dfa(n: usize, advice: &Word) -> Result<Dfa> {
    if advice.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: advice.len(),
        });
    }
    let width = 2 * n + 1;
    let dead = (n + 1) * width;
    let names = (0..=dead)
        .map(|q| {
            if q == dead {
                "dead".to_string()
            } else {
                format!(
                    "p{}d{}",
                    q / width,
                    q as isize % width as isize - n as isize
                )
            }
        })
        .collect();
    let advice = advice.clone();
    let dfa = Dfa::from_fn(
        names,
        binary_tracks(),
        n,
        move |q| q != dead && q / width == n && q % width == n,
        move |q, s| {
            if q == dead || q / width == n {
                return dead;
            }
            let (pos, diff) = (q / width, q % width);
            let (step, lower) = zero_one_delta(s);
            if *lower != advice.symbols()[pos] {
                return dead;
            }
            match usize::try_from(diff as isize + step) {
                Ok(d) if d < width => (pos + 1) * width + d,
                _ => dead,
            }
        },
    )?;
    Ok(dfa.trimmed())
}

/// Coarse acceptor over `{0,1} × {0,1}`: lower track all `0`, and
/// `#_0 - #_1 ≡ 0 (mod 3)`. Six live states plus a dead one; it accepts every
/// tracked member of Equal but also strings outside it.
pub fn equal_mod3_track_dfa() -> Dfa {
    Dfa::from_fn(
        vec!["r0".into(), "r1".into(), "r2".into(), "dead".into()],
        binary_tracks(),
        0,
        |q| q == 0,
        |q, s| {
            if q == 3 {
                return 3;
            }
            let (step, lower) = zero_one_delta(s);
            if lower.as_atom() != Some("0") {
                return 3;
            }
            (q as isize + step).rem_euclid(3) as usize
        },
    )
    .expect("well-formed")
}
