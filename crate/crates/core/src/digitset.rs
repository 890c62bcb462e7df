//! Digit sets, their substitutions, and the automatic sequences they generate.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::bits::BitWord;
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Cap on the number of symbols a single materialization may allocate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(100_000_000);

    /// Returns `q^k` if it fits in the budget.
    pub fn check(self, q: u32, k: u32) -> Result<usize> {
        let exceeded = Error::BudgetExceeded {
            q,
            k,
            budget: self.0,
        };
        let size = u64::from(q)
            .checked_pow(k)
            .ok_or_else(|| exceeded.clone())?;
        if size > self.0 {
            return Err(exceeded);
        }
        usize::try_from(size).map_err(|_| exceeded)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

/// A base `q ≥ 2` and a digit set `0 = a_1 < … < a_m ≤ q - 1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DigitSet {
    q: u32,
    digits: Vec<u32>,
    #[serde(skip)]
    allowed: Vec<bool>,
}

impl DigitSet {
    /// Validates and sorts a digit set.
    pub fn new(q: u32, digits: &[i64]) -> Result<Self> {
        if q < 2 {
            return Err(Error::BaseTooSmall(q));
        }
        let mut allowed = vec![false; q as usize];
        for &d in digits {
            if d < 0 || d >= i64::from(q) {
                return Err(Error::DigitOutOfRange { digit: d, q });
            }
            let slot = &mut allowed[d as usize];
            if *slot {
                return Err(Error::DuplicateDigit(d as u32));
            }
            *slot = true;
        }
        if !allowed[0] {
            return Err(Error::MissingZero);
        }
        let digits = (0..q).filter(|&d| allowed[d as usize]).collect();
        Ok(DigitSet { q, digits, allowed })
    }

    /// The middle-thirds Cantor set: base 3, digits {0, 2}.
    pub fn cantor() -> Self {
        DigitSet::new(3, &[0, 2]).expect("valid")
    }

    /// All digits `{0, …, q-1}`; `F = [0, 1]`.
    pub fn full(q: u32) -> Result<Self> {
        let digits: Vec<i64> = (0..i64::from(q)).collect();
        DigitSet::new(q, &digits)
    }

    /// The family used by the built-in verification suites.
    pub fn reference_family() -> Vec<DigitSet> {
        [
            (3, &[0, 2][..]),
            (2, &[0, 1][..]),
            (4, &[0, 1, 3][..]),
            (5, &[0, 4][..]),
            (10, &[0, 2, 5, 8][..]),
            (7, &[0][..]),
            (3, &[0, 1, 2][..]),
        ]
        .into_iter()
        .map(|(q, a)| DigitSet::new(q, a).expect("reference family is valid"))
        .collect()
    }

    pub fn base(&self) -> u32 {
        self.q
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// `m = |A|`.
    pub fn m(&self) -> u32 {
        self.digits.len() as u32
    }

    pub fn largest_digit(&self) -> u32 {
        *self.digits.last().expect("digit sets are nonempty")
    }

    #[inline]
    pub fn contains_digit(&self, d: u32) -> bool {
        self.allowed.get(d as usize).copied().unwrap_or(false)
    }

    /// `#{a ∈ A : a < d}`.
    pub fn count_below(&self, d: u32) -> u32 {
        self.digits.partition_point(|&a| a < d) as u32
    }

    pub fn is_full(&self) -> bool {
        self.m() == self.q
    }

    /// `f(n)`: whether every base-`q` digit of `n` lies in `A`.
    pub fn digit_membership(&self, n: &BigUint) -> bool {
        if let Some(small) = n.to_u64() {
            return self.contains_index(small);
        }
        let q = BigUint::from(self.q);
        let mut rest = n.clone();
        while !rest.is_zero() {
            let (quot, digit) = rest.div_rem(&q);
            if !self.contains_digit(digit.to_u32().expect("digit < q")) {
                return false;
            }
            rest = quot;
        }
        true
    }

    /// [`digit_membership`](Self::digit_membership) for machine-size indices.
    #[inline]
    pub fn contains_index(&self, mut n: u64) -> bool {
        let q = u64::from(self.q);
        while n != 0 {
            if !self.allowed[(n % q) as usize] {
                return false;
            }
            n /= q;
        }
        true
    }

    /// `dim_H F = log_q m`.
    pub fn hausdorff_dimension(&self) -> f64 {
        match self.m() {
            1 => 0.0,
            m if m == self.q => 1.0,
            m => f64::from(m).ln() / f64::from(self.q).ln(),
        }
    }

    pub fn substitution(&self) -> Substitution {
        let q = self.q as usize;
        let mut image_of_one = BitWord::zeros(q);
        for &a in &self.digits {
            image_of_one.set(a as usize, true);
        }
        Substitution {
            q: self.q,
            allowed: self.allowed.clone(),
            image_of_one,
            image_of_zero: BitWord::zeros(q),
        }
    }
}

impl fmt::Display for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {{", self.q)?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("})")
    }
}

impl fmt::Debug for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DigitSet{self}")
    }
}

/// The length-`q` substitution `1 ↦ image_of_one`, `0 ↦ 0^q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    q: u32,
    allowed: Vec<bool>,
    image_of_one: BitWord,
    image_of_zero: BitWord,
}

impl Substitution {
    pub fn base(&self) -> u32 {
        self.q
    }

    pub fn image_of_one(&self) -> &BitWord {
        &self.image_of_one
    }

    pub fn image_of_zero(&self) -> &BitWord {
        &self.image_of_zero
    }

    /// Applies the substitution once to every symbol of `word`.
    pub fn apply(&self, word: &BitWord, exec: Execution) -> BitWord {
        let q = self.q as usize;
        let len = word.len() * q;
        let mut blocks = vec![0u64; len.div_ceil(64)];
        exec.fill_words(&mut blocks, |w| {
            let start = w * 64;
            let end = (start + 64).min(len);
            let mut source = start / q;
            let mut offset = start % q;
            let mut block = 0u64;
            for bit in 0..end - start {
                if self.allowed[offset] && word.get(source) {
                    block |= 1 << bit;
                }
                offset += 1;
                if offset == q {
                    offset = 0;
                    source += 1;
                }
            }
            block
        });
        BitWord::from_blocks(len, blocks)
    }

    /// `ρ^k(1)`, a word of length `q^k`.
    pub fn iterate(&self, k: u32, budget: Budget) -> Result<SequencePrefix> {
        self.iterate_with(k, budget, Execution::default())
    }

    pub fn iterate_with(&self, k: u32, budget: Budget, exec: Execution) -> Result<SequencePrefix> {
        budget.check(self.q, k)?;
        let mut word = BitWord::parse("1").expect("literal");
        for _ in 0..k {
            word = self.apply(&word, exec);
        }
        Ok(SequencePrefix {
            q: self.q,
            level: k,
            bits: word,
        })
    }
}

/// Generates `f(0) … f(q^k - 1)` directly from base-`q` digits, without the
/// substitution.
pub fn oracle_prefix(ds: &DigitSet, k: u32, budget: Budget) -> Result<SequencePrefix> {
    oracle_prefix_with(ds, k, budget, Execution::default())
}

pub fn oracle_prefix_with(
    ds: &DigitSet,
    k: u32,
    budget: Budget,
    exec: Execution,
) -> Result<SequencePrefix> {
    let len = budget.check(ds.base(), k)?;
    let mut blocks = vec![0u64; len.div_ceil(64)];
    exec.fill_words(&mut blocks, |w| {
        let start = w * 64;
        let end = (start + 64).min(len);
        (start..end)
            .filter(|&n| ds.contains_index(n as u64))
            .fold(0u64, |acc, n| acc | 1 << (n - start))
    });
    Ok(SequencePrefix {
        q: ds.base(),
        level: k,
        bits: BitWord::from_blocks(len, blocks),
    })
}

/// The first `q^k` symbols of the fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequencePrefix {
    q: u32,
    level: u32,
    bits: BitWord,
}

impl SequencePrefix {
    pub fn base(&self) -> u32 {
        self.q
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn bits(&self) -> &BitWord {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, n: usize) -> bool {
        self.bits.get(n)
    }

    pub fn into_bits(self) -> BitWord {
        self.bits
    }
}

impl fmt::Display for SequencePrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.bits, f)
    }
}
