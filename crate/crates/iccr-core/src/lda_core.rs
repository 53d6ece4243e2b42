//! Binary vectors and shift operators of the linear deterministic channel.
//!
//! Index 0 of a [`BitVec`] is level 1, the strongest level. A down-shift by
//! `k` moves every bit `k` levels toward the noise floor.

use std::fmt;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LdaError {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("two-shift operator with nA={na}, nB={nb}, m={m} is singular")]
    SingularOperator { m: usize, na: usize, nb: usize },
    #[error("link strength {n} exceeds dimension {m}")]
    StrengthTooLarge { n: usize, m: usize },
}

/// Fixed-length vector over GF(2), packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    /// Builds a vector from 0/1 entries, top level first. Any nonzero entry counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    /// Takes the low `len` bits of `value`; bit `i` of `value` becomes index `i`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len.min(WORD) {
            if (value >> i) & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    /// Unit vector with a single one at index `i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Packs the first 64 entries into an integer, inverse of [`BitVec::from_u64`].
    pub fn to_u64(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn xor(&self, other: &BitVec) -> Result<BitVec, LdaError> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    pub fn xor_assign(&mut self, other: &BitVec) -> Result<(), LdaError> {
        if self.len != other.len {
            return Err(LdaError::LengthMismatch {
                expected: self.len,
                got: other.len,
            });
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// Returns S^k x: the top `k` levels become zero and level `i` moves to `i + k`.
    pub fn shifted_down(&self, k: usize) -> BitVec {
        let mut out = BitVec::zeros(self.len);
        if k >= self.len {
            return out;
        }
        let (q, r) = (k / WORD, k % WORD);
        for w in (q..out.words.len()).rev() {
            let src = w - q;
            let mut word = self.words[src] << r;
            if r > 0 && src > 0 {
                word |= self.words[src - 1] >> (WORD - r);
            }
            out.words[w] = word;
        }
        out.clear_tail();
        out
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[{self}]")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Free-function form of [`BitVec::shifted_down`].
pub fn down_shift(x: &BitVec, k: usize) -> BitVec {
    x.shifted_down(k)
}

/// Link strengths of the deterministic channel. `n_ij` is the strength from
/// transmitter `j` (0 is the relay) to receiver `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LdaChannelParams {
    pub n11: usize,
    pub n12: usize,
    pub n10: usize,
    pub n21: usize,
    pub n22: usize,
    pub n20: usize,
}

impl LdaChannelParams {
    /// Symmetric channel: direct links `ns`, cross links `ni`, relay links `nc`.
    pub fn symmetric(ns: usize, ni: usize, nc: usize) -> Self {
        Self {
            n11: ns,
            n12: ni,
            n10: nc,
            n21: ni,
            n22: ns,
            n20: nc,
        }
    }

    pub fn m(&self) -> usize {
        [self.n11, self.n12, self.n10, self.n21, self.n22, self.n20]
            .into_iter()
            .max()
            .unwrap_or(0)
    }
}

/// Channel outputs `y1 = S^{m-n11}x1 + S^{m-n10}x0 + S^{m-n12}x2` and the
/// matching expression for `y2`.
pub fn lda_outputs(
    params: &LdaChannelParams,
    x1: &BitVec,
    x2: &BitVec,
    x0: &BitVec,
) -> Result<(BitVec, BitVec), LdaError> {
    let m = params.m();
    for x in [x1, x2, x0] {
        if x.len() != m {
            return Err(LdaError::LengthMismatch {
                expected: m,
                got: x.len(),
            });
        }
    }
    let mut y1 = x1.shifted_down(m - params.n11);
    y1.xor_assign(&x0.shifted_down(m - params.n10))?;
    y1.xor_assign(&x2.shifted_down(m - params.n12))?;
    let mut y2 = x1.shifted_down(m - params.n21);
    y2.xor_assign(&x0.shifted_down(m - params.n20))?;
    y2.xor_assign(&x2.shifted_down(m - params.n22))?;
    Ok((y1, y2))
}

/// Applies `S^{m-nA} + S^{m-nB}` to `u`.
pub fn double_shift(m: usize, na: usize, nb: usize, u: &BitVec) -> Result<BitVec, LdaError> {
    check_double_shift(m, na, nb, u.len(), false)?;
    u.shifted_down(m - na).xor(&u.shifted_down(m - nb))
}

/// Inverts `S^{m-nA} + S^{m-nB}` by forward substitution.
///
/// The operator is invertible iff `nA != nB` and `max(nA, nB) = m`; otherwise
/// it has a nontrivial kernel and `SingularOperator` is returned.
pub fn solve_double_shift(m: usize, na: usize, nb: usize, y: &BitVec) -> Result<BitVec, LdaError> {
    check_double_shift(m, na, nb, y.len(), true)?;
    // Strong term is the identity, the weak one a strict down-shift by d.
    let d = na.abs_diff(nb);
    let mut u = BitVec::zeros(m);
    for i in 0..m {
        let mut bit = y.get(i);
        if i >= d && u.get(i - d) {
            bit = !bit;
        }
        u.set(i, bit);
    }
    Ok(u)
}

fn check_double_shift(
    m: usize,
    na: usize,
    nb: usize,
    len: usize,
    need_inverse: bool,
) -> Result<(), LdaError> {
    if len != m {
        return Err(LdaError::LengthMismatch { expected: m, got: len });
    }
    for n in [na, nb] {
        if n > m {
            return Err(LdaError::StrengthTooLarge { n, m });
        }
    }
    if need_inverse && (na == nb || na.max(nb) != m) {
        return Err(LdaError::SingularOperator { m, na, nb });
    }
    Ok(())
}
