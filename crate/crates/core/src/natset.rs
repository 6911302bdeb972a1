//! Finite subsets of ℕ and the extended values ℕ ∪ {∞}, ℚ≥0 ∪ {∞}.
//!
//! A [`NatSet`] is a dense bitset. Sumsets are computed by shift-or
//! convolution, which is the hot path for every backend in this crate.
//!
//! Extended-value conventions: `sup ∅ = gcd ∅ = 0`, `inf ∅ = ∞`,
//! `a/∞ = 0` and `a/0 = ∞` for finite `a`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

const WORD: u64 = 64;

/// A finite set of non-negative integers.
///
/// Storage is a little-endian vector of 64-bit words with trailing zero words
/// trimmed, so structural equality is set equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct NatSet {
    words: Vec<u64>,
}

impl NatSet {
    pub fn new() -> Self {
        NatSet { words: Vec::new() }
    }

    pub fn singleton(x: u64) -> Self {
        let mut s = NatSet::new();
        s.insert(x);
        s
    }

    /// The discrete interval `⟦lo, hi⟧` (empty when `lo > hi`).
    pub fn interval(lo: u64, hi: u64) -> Self {
        let mut s = NatSet::new();
        if lo > hi {
            return s;
        }
        s.reserve_for(hi);
        for x in lo..=hi {
            s.set_bit(x);
        }
        s
    }

    fn reserve_for(&mut self, x: u64) {
        let need = (x / WORD) as usize + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
    }

    fn set_bit(&mut self, x: u64) {
        self.words[(x / WORD) as usize] |= 1u64 << (x % WORD);
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, x: u64) {
        self.reserve_for(x);
        self.set_bit(x);
    }

    pub fn remove(&mut self, x: u64) {
        let w = (x / WORD) as usize;
        if w < self.words.len() {
            self.words[w] &= !(1u64 << (x % WORD));
            self.trim();
        }
    }

    pub fn contains(&self, x: u64) -> bool {
        let w = (x / WORD) as usize;
        w < self.words.len() && (self.words[w] >> (x % WORD)) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn min_elem(&self) -> Option<u64> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i as u64 * WORD + w.trailing_zeros() as u64)
    }

    pub fn max_elem(&self) -> Option<u64> {
        self.words
            .last()
            .map(|w| (self.words.len() as u64 - 1) * WORD + (WORD - 1 - w.leading_zeros() as u64))
    }

    /// `inf` with `inf ∅ = ∞`.
    pub fn inf(&self) -> ExtNat {
        self.min_elem().map_or(ExtNat::Inf, ExtNat::Fin)
    }

    /// `sup` with `sup ∅ = 0`.
    pub fn sup(&self) -> ExtNat {
        ExtNat::Fin(self.max_elem().unwrap_or(0))
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// `L⁺`, the positive part.
    pub fn positive_part(&self) -> NatSet {
        let mut s = self.clone();
        s.remove(0);
        s
    }

    pub fn union(&self, other: &NatSet) -> NatSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn union_with(&mut self, other: &NatSet) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn intersection(&self, other: &NatSet) -> NatSet {
        let mut out = NatSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        };
        out.trim();
        out
    }

    pub fn is_subset(&self, other: &NatSet) -> bool {
        self.words.len() <= other.words.len()
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// `X + t`.
    pub fn translate(&self, t: u64) -> NatSet {
        if self.is_empty() {
            return NatSet::new();
        }
        let word_shift = (t / WORD) as usize;
        let bit_shift = t % WORD;
        let mut words = vec![0u64; self.words.len() + word_shift + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + word_shift] |= w << bit_shift;
            if bit_shift != 0 {
                words[i + word_shift + 1] |= w >> (WORD - bit_shift);
            }
        }
        let mut out = NatSet { words };
        out.trim();
        out
    }

    /// `(X − t) ∩ ℕ`: shift down by `t`, dropping elements below `t`.
    pub fn shift_down(&self, t: u64) -> NatSet {
        self.iter().filter(|&x| x >= t).map(|x| x - t).collect()
    }

    /// Keep only elements in `⟦lo, hi⟧`.
    pub fn restrict(&self, lo: u64, hi: u64) -> NatSet {
        self.iter().filter(|&x| lo <= x && x <= hi).collect()
    }

    /// `(X − inf X) ∩ ⟦0, window⟧`, the bottom end pattern.
    pub fn low_pattern(&self, window: u64) -> NatSet {
        match self.min_elem() {
            None => NatSet::new(),
            Some(m) => self.shift_down(m).restrict(0, window),
        }
    }

    /// `(sup X − X) ∩ ⟦0, window⟧`, the top end pattern.
    pub fn high_pattern(&self, window: u64) -> NatSet {
        match self.max_elem() {
            None => NatSet::new(),
            Some(m) => self
                .iter()
                .filter(|&x| m - x <= window)
                .map(|x| m - x)
                .collect(),
        }
    }

    /// `X + Y`.
    pub fn sumset(&self, other: &NatSet) -> NatSet {
        if self.is_empty() || other.is_empty() {
            return NatSet::new();
        }
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let top = small.max_elem().unwrap() + big.max_elem().unwrap();
        let mut words = vec![0u64; (top / WORD) as usize + 1];
        for s in small.iter() {
            let word_shift = (s / WORD) as usize;
            let bit_shift = s % WORD;
            for (i, &w) in big.words.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                words[i + word_shift] |= w << bit_shift;
                if bit_shift != 0 && i + word_shift + 1 < words.len() {
                    words[i + word_shift + 1] |= w >> (WORD - bit_shift);
                }
            }
        }
        let mut out = NatSet { words };
        out.trim();
        out
    }

    /// `nX`, the `n`-fold sumset (not a dilation), by repeated doubling.
    pub fn n_fold_sumset(&self, n: u64) -> Result<NatSet, Error> {
        if n == 0 {
            return Err(Error::ZeroFoldSumset);
        }
        let mut acc: Option<NatSet> = None;
        let mut base = self.clone();
        let mut n = n;
        loop {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.sumset(&base),
                });
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = base.sumset(&base);
        }
        Ok(acc.expect("n >= 1"))
    }

    /// `m · X`.
    pub fn dilate(&self, m: u64) -> NatSet {
        self.iter().map(|x| x * m).collect()
    }

    /// `X / m` for a set whose elements are all divisible by `m`.
    pub fn contract(&self, m: u64) -> NatSet {
        debug_assert!(self.iter().all(|x| x % m == 0));
        self.iter().map(|x| x / m).collect()
    }

    /// `Δ(X)`: the gaps between consecutive elements.
    pub fn delta_set(&self) -> NatSet {
        let mut out = NatSet::new();
        let mut prev: Option<u64> = None;
        for x in self.iter() {
            if let Some(p) = prev {
                out.insert(x - p);
            }
            prev = Some(x);
        }
        out
    }

    /// `ρ(X) = sup X / inf X⁺`.
    pub fn elasticity(&self) -> ExtRat {
        let sup = self.max_elem().unwrap_or(0);
        match self.positive_part().min_elem() {
            None => ExtRat::zero(),
            Some(m) => ExtRat::Fin(Ratio::new(sup, m)),
        }
    }

    /// gcd of the elements (`gcd ∅ = 0`).
    pub fn gcd(&self) -> u64 {
        self.iter().fold(0, |g, x| g.gcd(&x))
    }

    /// Remove the current minimum and maximum.
    pub fn strip_ends(&self) -> NatSet {
        let mut s = self.clone();
        if let Some(m) = s.min_elem() {
            s.remove(m);
        }
        if let Some(m) = s.max_elem() {
            s.remove(m);
        }
        s
    }
}

impl FromIterator<u64> for NatSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        let mut s = NatSet::new();
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl<'a> IntoIterator for &'a NatSet {
    type Item = u64;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros() as u64;
                self.cur &= self.cur - 1;
                return Some(self.idx as u64 * WORD + bit);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

// Lexicographic order on the ascending element sequence; used as the
// canonical order of family members.
impl Ord for NatSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for NatSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for NatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for NatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for NatSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for NatSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Vec::<u64>::deserialize(deserializer)?;
        Ok(v.into_iter().collect())
    }
}

/// ℕ ∪ {∞}. `Fin(_) < Inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

impl ExtNat {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Fin(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Fin(x) => Some(x),
            ExtNat::Inf => None,
        }
    }

    /// Truncated subtraction; `∞ − finite = ∞`, `∞ − ∞ = 0`.
    pub fn saturating_sub(self, other: ExtNat) -> ExtNat {
        match (self, other) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => ExtNat::Fin(a.saturating_sub(b)),
            (ExtNat::Inf, ExtNat::Fin(_)) => ExtNat::Inf,
            (_, ExtNat::Inf) => ExtNat::Fin(0),
        }
    }
}

/// `∞` absorbs.
impl std::ops::Add for ExtNat {
    type Output = ExtNat;

    fn add(self, other: ExtNat) -> ExtNat {
        match (self, other) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => ExtNat::Fin(a + b),
            _ => ExtNat::Inf,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(x) => write!(f, "{x}"),
            ExtNat::Inf => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtNat::Fin(x) => serializer.serialize_u64(*x),
            ExtNat::Inf => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::N(x) => Ok(ExtNat::Fin(x)),
            Raw::S(s) if s == "inf" => Ok(ExtNat::Inf),
            Raw::S(s) => Err(serde::de::Error::custom(format!("expected integer or \"inf\", got {s:?}"))),
        }
    }
}

/// ℚ≥0 ∪ {∞} with exact arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtRat {
    Fin(Ratio<u64>),
    Inf,
}

impl ExtRat {
    pub fn zero() -> ExtRat {
        ExtRat::Fin(Ratio::zero())
    }

    pub fn one() -> ExtRat {
        ExtRat::Fin(Ratio::one())
    }

    pub fn from_integer(x: u64) -> ExtRat {
        ExtRat::Fin(Ratio::from_integer(x))
    }

    /// `a / b` under the extended conventions `a/∞ = 0`, `a/0 = ∞`.
    ///
    /// `∞ / b` is `∞` for every `b`.
    pub fn quotient(a: ExtNat, b: ExtNat) -> ExtRat {
        match (a, b) {
            (ExtNat::Inf, _) => ExtRat::Inf,
            (ExtNat::Fin(_), ExtNat::Inf) => ExtRat::zero(),
            (ExtNat::Fin(_), ExtNat::Fin(0)) => ExtRat::Inf,
            (ExtNat::Fin(x), ExtNat::Fin(y)) => ExtRat::Fin(Ratio::new(x, y)),
        }
    }

    /// `1 / x` with `1/0 = ∞`, `1/∞ = 0`.
    pub fn recip(self) -> ExtRat {
        match self {
            ExtRat::Inf => ExtRat::zero(),
            ExtRat::Fin(r) if r.is_zero() => ExtRat::Inf,
            ExtRat::Fin(r) => ExtRat::Fin(r.recip()),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtRat::Fin(_))
    }

    pub fn is_zero(self) -> bool {
        matches!(self, ExtRat::Fin(r) if r.is_zero())
    }

    pub fn finite(self) -> Option<Ratio<u64>> {
        match self {
            ExtRat::Fin(r) => Some(r),
            ExtRat::Inf => None,
        }
    }

    /// `n · x` as an exact value.
    pub fn scale(self, n: u64) -> ExtRat {
        match self {
            ExtRat::Fin(r) => ExtRat::Fin(r * n),
            ExtRat::Inf if n == 0 => ExtRat::zero(),
            ExtRat::Inf => ExtRat::Inf,
        }
    }

    /// `n · x` if it is a (finite) natural number.
    pub fn scale_integral(self, n: u64) -> Option<u64> {
        match self.scale(n) {
            ExtRat::Fin(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Inf, ExtRat::Inf) => Ordering::Equal,
            (ExtRat::Inf, _) => Ordering::Greater,
            (_, ExtRat::Inf) => Ordering::Less,
            (ExtRat::Fin(a), ExtRat::Fin(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Fin(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            ExtRat::Inf => write!(f, "inf"),
        }
    }
}

impl FromStr for ExtRat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s == "inf" {
            return Ok(ExtRat::Inf);
        }
        let bad = || Error::Parse(format!("expected \"p/q\" or \"inf\", got {s:?}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: u64 = p.parse().map_err(|_| bad())?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        Ok(ExtRat::quotient(ExtNat::Fin(p), ExtNat::Fin(q)))
    }
}

impl Serialize for ExtRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtRat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
