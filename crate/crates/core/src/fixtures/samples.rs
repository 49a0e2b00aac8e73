use crate::error::{Error, Result};
use crate::fixtures::languages::equal6_alphabet;
use crate::symbol::Symbol;
use crate::word::{Alphabet, SampleSet, Word};

fn invalid(n: usize, reason: &str) -> Error {
    Error::InvalidLength {
        n,
        reason: reason.to_string(),
    }
}

fn repeat(token: &str, times: usize) -> impl Iterator<Item = Symbol> {
    std::iter::repeat_n(Symbol::new(token), times)
}

/// `w_k = 0^k 1^{n/2-k} 0^{n/2-k} 1^k` for `k = 0..=n/2`.
pub fn equal_sample(n: usize, k: usize) -> Word {
    let half = n / 2;
    repeat("0", k)
        .chain(repeat("1", half - k))
        .chain(repeat("0", half - k))
        .chain(repeat("1", k))
        .collect()
}

pub fn equal_samples(n: usize) -> Result<SampleSet> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(invalid(n, "needs an even length of at least 2"));
    }
    SampleSet::new(
        Alphabet::from_chars("01"),
        n,
        (0..=n / 2).map(|k| equal_sample(n, k)),
    )
}

/// `w^{(j)}` for block count `m`: `m` blocks of length `m`, block `j` (1-based)
/// is `0 1^{m-1}`, every other block is `0^{m'+1} 1^{m'}` with `m' = ⌊m/2⌋`.
pub fn gt_sample(m: usize, j: usize) -> Word {
    let half = m / 2;
    (1..=m)
        .flat_map(|block| -> Box<dyn Iterator<Item = Symbol>> {
            if block == j {
                Box::new(repeat("0", 1).chain(repeat("1", m - 1)))
            } else {
                Box::new(repeat("0", half + 1).chain(repeat("1", half)))
            }
        })
        .collect()
}

/// The `m` strings `w^{(1)} .. w^{(m)}`, each of length `m²`.
pub fn gt_samples(m: usize) -> Result<SampleSet> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "block count {m} must be odd and at least 3"
        )));
    }
    SampleSet::new(
        Alphabet::from_chars("01"),
        m * m,
        (1..=m).map(|j| gt_sample(m, j)),
    )
}

/// `(a_i)^e #^{q-e}` blocks for `i = 1..=6`, followed by the complementary
/// blocks `(a_i)^{q-e_i} #^{e_i}` with `q = n/12`.
pub fn equal6_sample(n: usize, exponents: [usize; 6]) -> Word {
    let q = n / 12;
    let half = |es: [usize; 6]| -> Vec<Symbol> {
        es.iter()
            .enumerate()
            .flat_map(|(i, &e)| {
                repeat(&format!("a{}", i + 1), e)
                    .chain(repeat("#", q - e))
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    let mut symbols = half(exponents);
    symbols.extend(half(exponents.map(|e| q - e)));
    Word::new(symbols)
}

pub fn equal6_samples(n: usize) -> Result<SampleSet> {
    if n == 0 || !n.is_multiple_of(12) {
        return Err(invalid(n, "needs a positive multiple of 12"));
    }
    let q = n / 12;
    let base = q + 1;
    let total = base.pow(6);
    let members = (0..total).map(|mut code| {
        let mut es = [0usize; 6];
        for e in es.iter_mut().rev() {
            *e = code % base;
            code /= base;
        }
        equal6_sample(n, es)
    });
    SampleSet::new(equal6_alphabet(), n, members)
}

/// All `w w^R` with `|w| = n/2`.
pub fn pal_samples(n: usize) -> Result<SampleSet> {
    if !n.is_multiple_of(2) {
        return Err(invalid(n, "needs an even length"));
    }
    let binary = Alphabet::from_chars("01");
    let members: Vec<Word> = binary
        .words_of_length(n / 2)
        .map(|w| w.concat(&w.reversed()))
        .collect();
    SampleSet::new(binary, n, members)
}

/// All `w # w^R` with `|w| = (n-1)/2`.
pub fn pal_sharp_samples(n: usize) -> Result<SampleSet> {
    if n.is_multiple_of(2) {
        return Err(invalid(n, "needs an odd length"));
    }
    let sharp = Word::from_chars("#");
    let members: Vec<Word> = Alphabet::from_chars("01")
        .words_of_length(n / 2)
        .map(|w| w.concat(&sharp).concat(&w.reversed()))
        .collect();
    SampleSet::new(Alphabet::from_chars("01#"), n, members)
}

/// Parameters for the duplicated-string sample `{ w w : |w| = n/2 }` against a
/// swapping constant `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DupParams {
    pub m: u64,
    pub n: u64,
    pub j0: u64,
    pub k: u64,
    /// `|S| = 2^{n/2}`.
    pub sample_size: u128,
    /// Largest `|S_{i,u}|` for a width-`j0` window: `2^{n/2 - j0}`.
    pub max_bucket: u128,
    /// `2 j0 ≤ k`.
    pub width_condition: bool,
    /// `max_bucket ≤ |S| / (k m n)`.
    pub kmn_threshold: bool,
    /// `max_bucket ≤ |S| / (m (k - j0 + 1)(n - j0 + 1))`.
    pub index_threshold: bool,
}

fn ceil_log2(x: u128) -> u64 {
    if x <= 1 {
        0
    } else {
        u64::from(128 - (x - 1).leading_zeros())
    }
}

impl DupParams {
    fn for_length(m: u64, n: u64) -> DupParams {
        let mn2 = u128::from(m) * u128::from(n) * u128::from(n);
        let j0 = ceil_log2(mn2) + 1;
        let k = n / 2;
        let sample_size = 1u128 << (n / 2);
        let max_bucket = if j0 <= n / 2 {
            1u128 << (n / 2 - j0)
        } else {
            1
        };
        let (m128, n128, k128, j128) =
            (u128::from(m), u128::from(n), u128::from(k), u128::from(j0));
        let index_factor = if k + 1 >= j0 && n + 1 >= j0 {
            m128 * (k128 + 1 - j128) * (n128 + 1 - j128)
        } else {
            0
        };
        DupParams {
            m,
            n,
            j0,
            k,
            sample_size,
            max_bucket,
            width_condition: 2 * j0 <= k,
            kmn_threshold: max_bucket * k128 * m128 * n128 <= sample_size,
            index_threshold: max_bucket * index_factor <= sample_size,
        }
    }

    fn qualifies(m: u64, n: u64) -> bool {
        (1u128 << (n / 2)) > 2 * u128::from(m) * u128::from(n) * u128::from(n)
    }
}

/// The least even `n` with `2^{n/2} > 2 m n²`, with `j0 = ⌈log2(m n²)⌉ + 1`
/// and `k = n/2`.
pub fn dup_params(m: u64) -> Result<DupParams> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "swapping constant must be at least 1".into(),
        ));
    }
    let n = (2..)
        .step_by(2)
        .find(|&n| DupParams::qualifies(m, n))
        .expect("exponential growth wins");
    Ok(DupParams::for_length(m, n))
}

/// Like [`dup_params`], but the least `n` that also satisfies `2 j0 ≤ k`.
pub fn dup_params_strict(m: u64) -> Result<DupParams> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "swapping constant must be at least 1".into(),
        ));
    }
    let n = (2..)
        .step_by(2)
        .find(|&n| DupParams::qualifies(m, n) && DupParams::for_length(m, n).width_condition)
        .expect("exponential growth wins");
    Ok(DupParams::for_length(m, n))
}
