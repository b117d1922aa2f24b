//! Packed Boolean vectors.

use std::fmt;

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

const WORD: usize = 64;

/// An ordered, fixed-length vector of bits packed into 64-bit words.
///
/// Bits past `len` in the last word are always zero, so derived equality and
/// word-level popcounts are exact.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector {
            len,
            words: vec![u64::MAX; len.div_ceil(WORD)],
        };
        v.clear_tail();
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % WORD == 0 {
                words.push(0);
            }
            if b {
                words[len / WORD] |= 1 << (len % WORD);
            }
            len += 1;
        }
        BitVector { len, words }
    }

    /// Parses a string of `0`/`1` characters, ignoring whitespace and `_`.
    pub fn parse(s: &str) -> Option<Self> {
        let mut bits = Vec::new();
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                '_' => {}
                c if c.is_whitespace() => {}
                _ => return None,
            }
        }
        Some(Self::from_bools(bits))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of set bits in ascending order.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + tz)
                }
            })
        })
    }

    /// Number of set bits.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn not(&self) -> Self {
        let mut v = BitVector {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        v.clear_tail();
        v
    }

    pub fn concat(&self, other: &BitVector) -> Self {
        Self::from_bools(self.iter().chain(other.iter()))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.iter().collect()
    }

    /// Number of positions where `self` and `other` differ.
    pub fn hamming_distance(&self, other: &BitVector) -> usize {
        assert_eq!(self.len, other.len, "hamming distance of unequal lengths");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self::from_bools(iter)
    }
}

// Serialized as a list of 0/1 integers.
impl Serialize for BitVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.len))?;
        for b in self.iter() {
            seq.serialize_element(&u8::from(b))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct BitsVisitor;

        impl<'de> Visitor<'de> for BitsVisitor {
            type Value = BitVector;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a list of 0/1 integers")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<BitVector, A::Error> {
                let mut bits = Vec::with_capacity(seq.size_hint().unwrap_or(0));
                while let Some(v) = seq.next_element::<u8>()? {
                    match v {
                        0 => bits.push(false),
                        1 => bits.push(true),
                        other => {
                            return Err(de::Error::invalid_value(
                                de::Unexpected::Unsigned(other as u64),
                                &"0 or 1",
                            ))
                        }
                    }
                }
                Ok(BitVector::from_bools(bits))
            }
        }

        d.deserialize_seq(BitsVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_count() {
        let v = BitVector::parse("10110").unwrap();
        assert_eq!(v.len(), 5);
        assert_eq!(v.count_ones(), 3);
        assert_eq!(v.to_string(), "10110");
        assert!(BitVector::parse("10x").is_none());
    }

    #[test]
    fn not_keeps_tail_clear() {
        let v = BitVector::zeros(70).not();
        assert_eq!(v.count_ones(), 70);
        assert_eq!(v, BitVector::ones(70));
    }

    #[test]
    fn serde_as_integers() {
        let v = BitVector::parse("101").unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), "[1,0,1]");
        let back: BitVector = serde_json::from_str("[1,0,1]").unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<BitVector>("[1,2]").is_err());
    }

    proptest! {
        #[test]
        fn ones_iter_matches_get(bits in proptest::collection::vec(any::<bool>(), 0..200)) {
            let v = BitVector::from_bools(bits.clone());
            let expect: Vec<usize> = bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect();
            prop_assert_eq!(v.ones_iter().collect::<Vec<_>>(), expect);
            prop_assert_eq!(v.to_bools(), bits);
        }
    }
}
