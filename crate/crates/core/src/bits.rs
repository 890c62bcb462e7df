//! Packed binary words.

use std::fmt;

use crate::error::{Error, Result};

/// A finite word over `{0, 1}` stored 64 symbols per `u64`, index 0 in the
/// least significant bit of the first block.
///
/// The textual form is the ASCII string of `'0'`/`'1'` with index 0 first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitWord {
    len: usize,
    blocks: Vec<u64>,
}

impl BitWord {
    pub fn zeros(len: usize) -> Self {
        BitWord {
            len,
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    /// Builds a word from blocks; bits beyond `len` are cleared.
    pub fn from_blocks(len: usize, mut blocks: Vec<u64>) -> Self {
        assert_eq!(
            blocks.len(),
            len.div_ceil(64),
            "block count does not match length"
        );
        if !len.is_multiple_of(64) {
            if let Some(last) = blocks.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
        BitWord { len, blocks }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "index {i} out of range for word of length {}",
            self.len
        );
        (self.blocks[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "index {i} out of range for word of length {}",
            self.len
        );
        let mask = 1u64 << (i % 64);
        if value {
            self.blocks[i / 64] |= mask;
        } else {
            self.blocks[i / 64] &= !mask;
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.blocks.iter().map(|b| u64::from(b.count_ones())).sum()
    }

    /// Indices of the 1-symbols in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut rest = block;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(bi * 64 + tz)
            })
        })
    }

    pub fn is_prefix_of(&self, other: &BitWord) -> bool {
        if self.len > other.len {
            return false;
        }
        let full = self.len / 64;
        if self.blocks[..full] != other.blocks[..full] {
            return false;
        }
        let rem = self.len % 64;
        rem == 0 || {
            let mask = (1u64 << rem) - 1;
            self.blocks[full] & mask == other.blocks[full] & mask
        }
    }

    /// Index of the first position where the words differ, if any.
    pub fn first_mismatch(&self, other: &BitWord) -> Option<usize> {
        let common = self.len.min(other.len);
        for (bi, (a, b)) in self.blocks.iter().zip(&other.blocks).enumerate() {
            let diff = a ^ b;
            if diff != 0 {
                let i = bi * 64 + diff.trailing_zeros() as usize;
                return (i < common)
                    .then_some(i)
                    .or((self.len != other.len).then_some(common));
            }
        }
        (self.len != other.len).then_some(common)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim_end_matches(['\n', '\r']);
        let mut word = BitWord::zeros(text.len());
        for (i, c) in text.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => word.set(i, true),
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unexpected symbol {:?} at position {i}",
                        other as char
                    )))
                }
            }
        }
        Ok(word)
    }

    pub fn to_ascii(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ascii())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 128 {
            write!(f, "BitWord({})", self.to_ascii())
        } else {
            write!(f, "BitWord(len={}, ones={})", self.len, self.count_ones())
        }
    }
}
