//! Binary words, cyclic b-symbol reads, b-symbol distance and weight, and
//! metric balls.
//!
//! A [`Word`] is stored packed in a `u64` with coordinate 0 in the least
//! significant bit. Bitstrings are printed with coordinate 0 leftmost, so
//! `"011"` has bits `x_0 = 0, x_1 = 1, x_2 = 1` and integer value 6.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest word length accepted by exhaustive enumeration unless the caller
/// supplies a different cap.
pub const DEFAULT_ENUM_CAP: usize = 24;

/// Longest word the packed representation can hold.
pub const MAX_WORD_LEN: usize = 64;

#[inline]
pub(crate) fn mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Bit `i` of the result is set iff the cyclic window starting at `i` of
/// width `b` contains a one.
#[inline]
pub(crate) fn window_or(bits: u64, n: u32, b: u32) -> u64 {
    let m = mask(n);
    let mut acc = bits;
    for j in 1..b {
        acc |= ((bits >> j) | (bits << (n - j))) & m;
    }
    acc & m
}

/// Number of nonzero cyclic windows of width `b` in an `n`-bit word.
/// The caller guarantees `1 <= b <= n <= 64`.
#[inline]
pub(crate) fn raw_b_weight(bits: u64, n: u32, b: u32) -> u32 {
    window_or(bits, n, b).count_ones()
}

/// Fixed-length binary vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    bits: u64,
    len: u8,
}

impl Word {
    pub fn new(bits: u64, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_WORD_LEN {
            return Err(Error::InvalidLength(len));
        }
        if bits & !mask(len as u32) != 0 {
            return Err(Error::InvalidParameter(format!(
                "value {bits} does not fit in {len} bits"
            )));
        }
        Ok(Self::from_raw(bits, len))
    }

    #[inline]
    pub(crate) fn from_raw(bits: u64, len: usize) -> Self {
        debug_assert!((1..=MAX_WORD_LEN).contains(&len));
        debug_assert_eq!(bits & !mask(len as u32), 0);
        Word {
            bits,
            len: len as u8,
        }
    }

    pub fn zero(len: usize) -> Result<Self> {
        Self::new(0, len)
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() || bits.len() > MAX_WORD_LEN {
            return Err(Error::InvalidLength(bits.len()));
        }
        let mut v = 0u64;
        for (i, &bit) in bits.iter().enumerate() {
            match bit {
                0 => {}
                1 => v |= 1 << i,
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "symbol {bit} at position {i} is not binary"
                    )))
                }
            }
        }
        Ok(Self::from_raw(v, bits.len()))
    }

    /// Integer value with coordinate 0 as the least significant bit.
    #[inline]
    pub fn index(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        ((self.bits >> i) & 1) as u8
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    #[inline]
    pub fn hamming_weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn xor(&self, other: &Word) -> Result<Word> {
        same_len(self, other)?;
        Ok(Word::from_raw(self.bits ^ other.bits, self.len()))
    }

    /// `(self, tail)`: `self` occupies coordinates `0..n`, `tail` follows.
    pub fn concat(&self, tail: &Word) -> Result<Word> {
        let len = self.len() + tail.len();
        if len > MAX_WORD_LEN {
            return Err(Error::InvalidLength(len));
        }
        Ok(Word::from_raw(self.bits | (tail.bits << self.len()), len))
    }

    /// The first `len` coordinates.
    pub fn prefix(&self, len: usize) -> Result<Word> {
        if len == 0 || len > self.len() {
            return Err(Error::InvalidLength(len));
        }
        Ok(Word::from_raw(self.bits & mask(len as u32), len))
    }

    /// `self` written `times` times in a row.
    pub fn repeat(&self, times: usize) -> Result<Word> {
        let len = self.len() * times;
        if times == 0 || len > MAX_WORD_LEN {
            return Err(Error::InvalidLength(len));
        }
        let mut bits = 0u64;
        for i in 0..times {
            bits |= self.bits << (i * self.len());
        }
        Ok(Word::from_raw(bits, len))
    }

    /// All `2^n` words of length `n` in increasing integer order.
    pub fn all(n: usize, cap: usize) -> Result<impl Iterator<Item = Word>> {
        check_cap(n, cap)?;
        Ok((0..1u64 << n).map(move |v| Word::from_raw(v, n)))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s.len() > MAX_WORD_LEN {
            return Err(Error::MalformedBitstring(s.to_string()));
        }
        let mut bits = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(Error::MalformedBitstring(s.to_string())),
            }
        }
        Ok(Word::from_raw(bits, s.len()))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap || n >= 63 {
        Err(Error::CapExceeded { len: n, cap })
    } else {
        Ok(())
    }
}

pub(crate) fn check_width(b: usize, n: usize) -> Result<()> {
    if b == 0 || b > n {
        Err(Error::WidthOutOfRange { b, n })
    } else {
        Ok(())
    }
}

fn same_len(x: &Word, y: &Word) -> Result<()> {
    if x.len() != y.len() {
        Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        })
    } else {
        Ok(())
    }
}

/// The cyclic b-symbol read vector: `n` windows, window `i` being
/// `(x_i, x_{i+1}, ..., x_{i+b-1})` with indices mod `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadVector {
    pub n: usize,
    pub b: usize,
    pub windows: Vec<Word>,
}

pub fn read_vector(x: &Word, b: usize) -> Result<ReadVector> {
    let n = x.len();
    check_width(b, n)?;
    let windows = (0..n)
        .map(|i| {
            let mut w = 0u64;
            for j in 0..b {
                w |= (x.get((i + j) % n) as u64) << j;
            }
            Word::from_raw(w, b)
        })
        .collect();
    Ok(ReadVector { n, b, windows })
}

pub fn hamming_distance(x: &Word, y: &Word) -> Result<usize> {
    same_len(x, y)?;
    Ok((x.bits ^ y.bits).count_ones() as usize)
}

/// Number of cyclic windows of width `b` in which `x` and `y` differ.
pub fn b_distance(x: &Word, y: &Word, b: usize) -> Result<usize> {
    same_len(x, y)?;
    check_width(b, x.len())?;
    Ok(raw_b_weight(x.bits ^ y.bits, x.len() as u32, b as u32) as usize)
}

/// Number of nonzero cyclic windows of width `b`; `b_distance(x, 0, b)`.
pub fn b_weight(x: &Word, b: usize) -> Result<usize> {
    check_width(b, x.len())?;
    Ok(raw_b_weight(x.bits, x.len() as u32, b as u32) as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "b", rename_all = "kebab-case")]
pub enum Metric {
    Hamming,
    BSymbol(usize),
}

impl Metric {
    pub fn width(&self) -> usize {
        match self {
            Metric::Hamming => 1,
            Metric::BSymbol(b) => *b,
        }
    }

    pub fn distance(&self, x: &Word, y: &Word) -> Result<usize> {
        match self {
            Metric::Hamming => hamming_distance(x, y),
            Metric::BSymbol(b) => b_distance(x, y, *b),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Hamming => f.write_str("hamming"),
            Metric::BSymbol(b) => write!(f, "b-symbol(b={b})"),
        }
    }
}

/// Exhaustive ball `{ y : distance(center, y) <= radius }` over `F_2^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ball {
    pub center: Word,
    pub radius: usize,
    pub metric: Metric,
    /// Sorted by integer value.
    pub members: Vec<Word>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, y: &Word) -> bool {
        self.members.binary_search(y).is_ok()
    }

    pub fn is_subset_of(&self, other: &Ball) -> bool {
        self.members.iter().all(|y| other.contains(y))
    }
}

pub fn ball(center: &Word, radius: usize, metric: Metric) -> Result<Ball> {
    ball_capped(center, radius, metric, DEFAULT_ENUM_CAP)
}

pub fn ball_capped(center: &Word, radius: usize, metric: Metric, cap: usize) -> Result<Ball> {
    let n = center.len();
    check_width(metric.width(), n)?;
    let members = error_patterns(n, radius, metric, cap)?
        .into_iter()
        .map(|e| Word::from_raw(center.bits ^ e, n))
        .collect::<Vec<_>>();
    let mut members = members;
    members.sort_unstable();
    Ok(Ball {
        center: *center,
        radius,
        metric,
        members,
    })
}

/// Raw error patterns `e` of length `n` with `weight(e) <= radius` under
/// `metric`, in increasing integer order. `ball(u)` is `{u ^ e}`.
pub(crate) fn error_patterns(n: usize, radius: usize, metric: Metric, cap: usize) -> Result<Vec<u64>> {
    check_cap(n, cap)?;
    let b = metric.width() as u32;
    let nn = n as u32;
    Ok((0..1u64 << n)
        .filter(|&e| raw_b_weight(e, nn, b) as usize <= radius)
        .collect())
}

/// `|B(0, radius)|`, equal to `|B(u, radius)|` for every center `u`.
pub fn ball_size(n: usize, radius: usize, metric: Metric, cap: usize) -> Result<usize> {
    check_width(metric.width(), n.max(1))?;
    Ok(error_patterns(n, radius, metric, cap)?.len())
}

/// Which branch of the Hamming/b-symbol distance trichotomy a pair falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationCase {
    /// `d_H > n - (b-1)`: every window differs, `d_b = n`.
    Saturated,
    /// `0 < d_H <= n - (b-1)`: `d_H + b - 1 <= d_b <= b * d_H`.
    Bounded,
    /// `d_H = 0`: `d_b = 0`.
    Identical,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceRelation {
    pub n: usize,
    pub b: usize,
    pub d_hamming: usize,
    pub d_b: usize,
    pub case: RelationCase,
    /// Inclusive range the case predicts for `d_b`.
    pub lower: usize,
    pub upper: usize,
    pub pass: bool,
}

pub fn check_distance_relation(x: &Word, y: &Word, b: usize) -> Result<DistanceRelation> {
    let d_hamming = hamming_distance(x, y)?;
    let d_b = b_distance(x, y, b)?;
    let n = x.len();
    let (case, lower, upper) = if d_hamming == 0 {
        (RelationCase::Identical, 0, 0)
    } else if d_hamming > n - (b - 1) {
        (RelationCase::Saturated, n, n)
    } else {
        (RelationCase::Bounded, d_hamming + b - 1, b * d_hamming)
    };
    Ok(DistanceRelation {
        n,
        b,
        d_hamming,
        d_b,
        case,
        lower,
        upper,
        pass: lower <= d_b && d_b <= upper,
    })
}
