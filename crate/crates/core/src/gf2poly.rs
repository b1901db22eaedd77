//! Arithmetic for binary polynomials stored as bit vectors.
//!
//! Bit `k` of the mask is the coefficient of `x^k`, little-endian across
//! 64-bit words. The representation is canonical: no word above the leading
//! one, and the zero polynomial is the empty word vector. This makes
//! `val_x` a trailing-zero count, multiplication a carry-less multiply, and
//! the hex mask format (`0x25` = `x^5+x^2+1`) a direct dump of the words.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Shl, Shr};
use std::str::FromStr;

use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

const BITS: usize = 64;

/// Largest exponent accepted by the text parser. Guards against a typo like
/// `x^999999999` allocating gigabytes; well above the supported degree range.
const MAX_PARSE_EXPONENT: usize = 1 << 21;

/// Operating on the zero polynomial where it has no defined value, or
/// dividing by it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty polynomial text")]
    Empty,
    #[error("malformed term `{0}`")]
    MalformedTerm(String),
    #[error("duplicate term `{0}`")]
    DuplicateTerm(String),
    #[error("invalid hex mask `{0}`")]
    InvalidHexMask(String),
    #[error("exponent too large in term `{0}`")]
    ExponentTooLarge(String),
}

/// A binary polynomial in canonical bit-vector form.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    /// Little-endian 64-bit words; empty means zero, last word is nonzero.
    words: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { words: vec![1] }
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly { words: vec![2] }
    }

    /// `M1 = x^2 + x + 1`, the smallest odd polynomial besides 1.
    pub fn m1() -> Self {
        Poly { words: vec![0b111] }
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut words = vec![0u64; k / BITS + 1];
        words[k / BITS] = 1 << (k % BITS);
        Poly { words }
    }

    /// Builds from little-endian words, dropping leading zero words.
    pub fn from_words(words: &[u64]) -> Self {
        Poly::from_word_vec(words.to_vec())
    }

    pub fn from_word(word: u64) -> Self {
        if word == 0 {
            Poly::zero()
        } else {
            Poly { words: vec![word] }
        }
    }

    fn from_word_vec(mut words: Vec<u64>) -> Self {
        while words.last() == Some(&0) {
            words.pop();
        }
        Poly { words }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The low 64 coefficients; callers check `degree() < 64` first when the
    /// whole value matters.
    pub fn low_word(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = self.words.last()?;
        Some(self.words.len() * BITS - 1 - last.leading_zeros() as usize)
    }

    /// Coefficient of `x^k`.
    pub fn coeff(&self, k: usize) -> bool {
        match self.words.get(k / BITS) {
            Some(w) => (w >> (k % BITS)) & 1 == 1,
            None => false,
        }
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// `p(0)`: the constant term.
    pub fn eval_at_zero(&self) -> bool {
        self.low_word() & 1 == 1
    }

    /// `p(1)`: parity of the coefficient count.
    pub fn eval_at_one(&self) -> bool {
        self.weight() & 1 == 1
    }

    /// Odd means no factor of `x` or `x+1`, i.e. `p(0) = p(1) = 1`.
    pub fn is_odd(&self) -> bool {
        self.eval_at_zero() && self.eval_at_one()
    }

    /// Valuation at `x`: the index of the lowest set bit.
    pub fn val_x(&self) -> Result<usize, PolyError> {
        for (i, w) in self.words.iter().enumerate() {
            if *w != 0 {
                return Ok(i * BITS + w.trailing_zeros() as usize);
            }
        }
        Err(PolyError::ZeroPolynomial)
    }

    /// Valuation at `x+1`, computed as `val_x` of the conjugate `p(x+1)`.
    pub fn val_x1(&self) -> Result<usize, PolyError> {
        self.bar().val_x()
    }

    /// The substitution `x -> x+1`. An involution and a ring homomorphism
    /// that preserves degree and fixes `M1`.
    ///
    /// Computed as a butterfly over power-of-two block sizes: for a block
    /// `lo + x^s * hi` with `s` a power of two, `(x+1)^s = x^s + 1` gives
    /// `bar(block) = (bar(lo) ^ bar(hi)) + x^s * bar(hi)`, so each stage
    /// xors the high half of every block into the low half.
    pub fn bar(&self) -> Poly {
        match self.words.len() {
            0 => Poly::zero(),
            1 => Poly::from_word(bar_word(self.words[0])),
            n => {
                let padded = n.next_power_of_two();
                let mut buf = vec![0u64; padded];
                buf[..n].copy_from_slice(&self.words);
                let mut half = padded / 2;
                while half >= 1 {
                    for base in (0..padded).step_by(2 * half) {
                        for i in 0..half {
                            buf[base + i] ^= buf[base + half + i];
                        }
                    }
                    half /= 2;
                }
                for w in &mut buf {
                    *w = bar_word(*w);
                }
                Poly::from_word_vec(buf)
            }
        }
    }

    /// The reciprocal `x^deg(p) * p(1/x)`: the coefficient window reversed.
    pub fn reciprocal(&self) -> Result<Poly, PolyError> {
        let deg = self.degree().ok_or(PolyError::ZeroPolynomial)?;
        let rev: Vec<u64> = self.words.iter().rev().map(|w| w.reverse_bits()).collect();
        let excess = self.words.len() * BITS - (deg + 1);
        Ok(Poly { words: rev }.shift_right(excess))
    }

    /// Quotient and remainder with `p = q*d + r` and `deg r < deg d` (or
    /// `r = 0`).
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly), PolyError> {
        let dd = d.degree().ok_or(PolyError::DivisionByZero)?;
        let mut rem = self.clone();
        let Some(rdeg) = rem.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if rdeg < dd {
            return Ok((Poly::zero(), rem));
        }
        let mut quot = vec![0u64; (rdeg - dd) / BITS + 1];
        while let Some(rdeg) = rem.degree() {
            if rdeg < dd {
                break;
            }
            let shift = rdeg - dd;
            quot[shift / BITS] |= 1 << (shift % BITS);
            rem.xor_shifted(&d.words, shift);
            rem.normalize();
        }
        Ok((Poly::from_word_vec(quot), rem))
    }

    /// Exact division; error if the remainder is nonzero.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly, PolyError> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::DivisionByZero)
        }
    }

    /// `self * self`, by spreading each word's bits apart.
    pub fn square(&self) -> Poly {
        let mut out = Vec::with_capacity(self.words.len() * 2);
        for w in &self.words {
            out.push(spread_low(*w as u32));
            out.push(spread_low((*w >> 32) as u32));
        }
        Poly::from_word_vec(out)
    }

    /// `self^n` by square-and-multiply.
    pub fn pow(&self, mut n: u64) -> Poly {
        if n == 0 {
            return Poly::one();
        }
        if self.is_zero() {
            return Poly::zero();
        }
        let mut result = Poly::one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        result
    }

    /// Uniformly random polynomial of exactly the given degree.
    pub fn random<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Poly {
        let mut words = vec![0u64; degree / BITS + 1];
        for w in &mut words {
            *w = rng.random();
        }
        let top = degree / BITS;
        let bit = degree % BITS;
        words[top] &= ((1u64 << bit) - 1) | (1 << bit);
        words[top] |= 1 << bit;
        Poly { words }
    }

    /// Hex mask with `0x` prefix, bit `k` = coefficient of `x^k`.
    pub fn to_hex(&self) -> String {
        format!("{self:#x}")
    }

    pub fn from_hex(text: &str) -> Result<Poly, ParseError> {
        let digits = text
            .strip_prefix("0x")
            .or_else(|| text.strip_prefix("0X"))
            .unwrap_or(text);
        if digits.is_empty() {
            return Err(ParseError::InvalidHexMask(text.to_string()));
        }
        let mut words = vec![0u64; digits.len().div_ceil(16)];
        for (i, c) in digits.chars().rev().enumerate() {
            let digit = c
                .to_digit(16)
                .ok_or_else(|| ParseError::InvalidHexMask(text.to_string()))?;
            words[i / 16] |= u64::from(digit) << (4 * (i % 16));
        }
        Ok(Poly::from_word_vec(words))
    }

    fn shift_right(&self, k: usize) -> Poly {
        if k == 0 {
            return self.clone();
        }
        let drop = k / BITS;
        if drop >= self.words.len() {
            return Poly::zero();
        }
        let bit = k % BITS;
        let src = &self.words[drop..];
        let mut out = Vec::with_capacity(src.len());
        if bit == 0 {
            out.extend_from_slice(src);
        } else {
            for i in 0..src.len() {
                let hi = src.get(i + 1).copied().unwrap_or(0);
                out.push((src[i] >> bit) | (hi << (BITS - bit)));
            }
        }
        Poly::from_word_vec(out)
    }

    /// In-place `self ^= other << shift`; caller re-normalizes.
    fn xor_shifted(&mut self, other: &[u64], shift: usize) {
        let needed = other.len() + shift / BITS + 1;
        if self.words.len() < needed {
            self.words.resize(needed, 0);
        }
        xor_shifted_into(&mut self.words, other, shift);
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

/// `dst ^= src << shift`. `dst` must be long enough.
fn xor_shifted_into(dst: &mut [u64], src: &[u64], shift: usize) {
    let word = shift / BITS;
    let bit = shift % BITS;
    if bit == 0 {
        for (k, w) in src.iter().enumerate() {
            dst[word + k] ^= w;
        }
    } else {
        let mut carry = 0u64;
        for (k, w) in src.iter().enumerate() {
            dst[word + k] ^= (w << bit) | carry;
            carry = w >> (BITS - bit);
        }
        if carry != 0 {
            dst[word + src.len()] ^= carry;
        }
    }
}

/// The `x -> x+1` substitution restricted to one 64-bit word.
pub(crate) fn bar_word(mut w: u64) -> u64 {
    w ^= (w & 0xFFFF_FFFF_0000_0000) >> 32;
    w ^= (w & 0xFFFF_0000_FFFF_0000) >> 16;
    w ^= (w & 0xFF00_FF00_FF00_FF00) >> 8;
    w ^= (w & 0xF0F0_F0F0_F0F0_F0F0) >> 4;
    w ^= (w & 0xCCCC_CCCC_CCCC_CCCC) >> 2;
    w ^= (w & 0xAAAA_AAAA_AAAA_AAAA) >> 1;
    w
}

/// Interleaves zeros between the bits of `x` (squaring of one half-word).
fn spread_low(x: u32) -> u64 {
    let mut v = x as u64;
    v = (v | (v << 16)) & 0x0000_FFFF_0000_FFFF;
    v = (v | (v << 8)) & 0x00FF_00FF_00FF_00FF;
    v = (v | (v << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    v = (v | (v << 2)) & 0x3333_3333_3333_3333;
    v = (v | (v << 1)) & 0x5555_5555_5555_5555;
    v
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.words.len() >= rhs.words.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w ^= s;
        }
        Poly::from_word_vec(words)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        if self.words.len() < rhs.words.len() {
            self.words.resize(rhs.words.len(), 0);
        }
        for (w, s) in self.words.iter_mut().zip(&rhs.words) {
            *w ^= s;
        }
        self.normalize();
    }
}

impl Mul for &Poly {
    type Output = Poly;

    /// Carry-less product: for each set bit of the shorter factor, xor the
    /// longer factor shifted into the accumulator.
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let (long, short) = if self.words.len() >= rhs.words.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = vec![0u64; long.words.len() + short.words.len()];
        for (i, w) in short.words.iter().enumerate() {
            let mut w = *w;
            while w != 0 {
                let j = w.trailing_zeros() as usize;
                w &= w - 1;
                xor_shifted_into(&mut out, &long.words, i * BITS + j);
            }
        }
        Poly::from_word_vec(out)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Shl<usize> for &Poly {
    type Output = Poly;
    fn shl(self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut out = vec![0u64; self.words.len() + k / BITS + 1];
        xor_shifted_into(&mut out, &self.words, k);
        Poly::from_word_vec(out)
    }
}

impl Shr<usize> for &Poly {
    type Output = Poly;
    fn shr(self, k: usize) -> Poly {
        self.shift_right(k)
    }
}

/// Mask order: compare as the underlying integers. Used for smallest-witness
/// tie-breaks in searches.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::LowerHex for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if f.alternate() {
            write!(f, "0x")?;
        }
        match self.words.split_last() {
            None => write!(f, "0"),
            Some((last, rest)) => {
                write!(f, "{last:x}")?;
                for w in rest.iter().rev() {
                    write!(f, "{w:016x}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Poly {
    /// Monomial sum in descending powers: `x^5+x^2+1`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..self.words.len()).rev() {
            let mut w = self.words[i];
            while w != 0 {
                let j = BITS - 1 - w.leading_zeros() as usize;
                w &= !(1 << j);
                let k = i * BITS + j;
                if !first {
                    write!(f, "+")?;
                }
                first = false;
                match k {
                    0 => write!(f, "1")?,
                    1 => write!(f, "x")?,
                    _ => write!(f, "x^{k}")?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self} = {self:#x})")
    }
}

impl FromStr for Poly {
    type Err = ParseError;

    /// Accepts either a hex mask (`0x25`) or a monomial sum (`x^5+x^2+1`,
    /// term order irrelevant, `0` for the zero polynomial).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseError::Empty);
        }
        if s.starts_with("0x") || s.starts_with("0X") {
            return Poly::from_hex(s);
        }
        if s == "0" {
            return Ok(Poly::zero());
        }
        let mut poly = Poly::zero();
        for raw in s.split('+') {
            let term = raw.trim();
            let k = parse_term(term)?;
            if poly.coeff(k) {
                return Err(ParseError::DuplicateTerm(term.to_string()));
            }
            poly.xor_shifted(&[1], k);
        }
        poly.normalize();
        Ok(poly)
    }
}

fn parse_term(term: &str) -> Result<usize, ParseError> {
    match term {
        "1" => Ok(0),
        "x" => Ok(1),
        _ => {
            let exp = term
                .strip_prefix("x^")
                .filter(|e| !e.is_empty() && e.bytes().all(|b| b.is_ascii_digit()))
                .ok_or_else(|| ParseError::MalformedTerm(term.to_string()))?;
            let k: usize = exp
                .parse()
                .map_err(|_| ParseError::ExponentTooLarge(term.to_string()))?;
            if k > MAX_PARSE_EXPONENT {
                return Err(ParseError::ExponentTooLarge(term.to_string()));
            }
            Ok(k)
        }
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(D::Error::custom)
    }
}
