//! Reduced words in a free group of finite rank.
//!
//! A letter is a nonzero signed generator index: `i` stands for the
//! generator `x_i` and `-i` for its inverse (indices start at 1). Words are
//! kept freely reduced at all times.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A signed generator index.
pub type Letter = i32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator index {index} out of range for alphabet {alphabet}")]
    IndexOutOfRange { index: i64, alphabet: Alphabet },
    #[error("the empty word has no primitive root")]
    EmptyWord,
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: Alphabet, right: Alphabet },
    #[error("weight vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Which factor of the product an alphabet belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tag {
    A,
    B,
}

impl Tag {
    pub fn symbol(self) -> char {
        match self {
            Tag::A => 'a',
            Tag::B => 'b',
        }
    }

    pub fn other(self) -> Tag {
        match self {
            Tag::A => Tag::B,
            Tag::B => Tag::A,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    pub rank: usize,
    pub tag: Tag,
}

impl Alphabet {
    pub fn new(rank: usize, tag: Tag) -> Self {
        Alphabet { rank, tag }
    }

    pub fn a(rank: usize) -> Self {
        Alphabet::new(rank, Tag::A)
    }

    pub fn b(rank: usize) -> Self {
        Alphabet::new(rank, Tag::B)
    }

    /// All `2 * rank` letters, ordered `1, -1, 2, -2, ...`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (1..=self.rank as Letter).flat_map(|i| [i, -i])
    }

    /// The standard free basis.
    pub fn generators(&self) -> Vec<FreeWord> {
        (1..=self.rank as Letter)
            .map(|i| FreeWord::from_reduced_unchecked(*self, vec![i]))
            .collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.tag.symbol(), self.rank)
    }
}

/// Signed exponent counts of every generator in a word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn dot(&self, weights: &[i64]) -> i64 {
        self.0.iter().zip(weights).map(|(a, b)| a * b).sum()
    }
}

/// Result of [`FreeWord::power_exponents`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PowerSet {
    /// Every integer; returned for the identity.
    AllIntegers,
    Finite(BTreeSet<i64>),
}

impl PowerSet {
    pub fn contains(&self, k: i64) -> bool {
        match self {
            PowerSet::AllIntegers => true,
            PowerSet::Finite(s) => s.contains(&k),
        }
    }
}

/// A freely reduced word over an [`Alphabet`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeWord {
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

fn push_reduced(buf: &mut Vec<Letter>, x: Letter) {
    if buf.last() == Some(&-x) {
        buf.pop();
    } else {
        buf.push(x);
    }
}

impl FreeWord {
    /// Freely reduces `raw` and checks every index against the alphabet.
    pub fn reduce(raw: &[Letter], alphabet: Alphabet) -> Result<Self, WordError> {
        let mut buf = Vec::with_capacity(raw.len());
        for &x in raw {
            if x == 0 || x.unsigned_abs() as usize > alphabet.rank {
                return Err(WordError::IndexOutOfRange {
                    index: x as i64,
                    alphabet,
                });
            }
            push_reduced(&mut buf, x);
        }
        Ok(FreeWord {
            alphabet,
            letters: buf,
        })
    }

    pub(crate) fn from_reduced_unchecked(alphabet: Alphabet, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[0] != -w[1]));
        FreeWord { alphabet, letters }
    }

    /// Reduces an arbitrary letter sequence whose indices are known to be in range.
    pub(crate) fn collect_reduced<I: IntoIterator<Item = Letter>>(alphabet: Alphabet, it: I) -> Self {
        let mut buf = Vec::new();
        for x in it {
            push_reduced(&mut buf, x);
        }
        FreeWord {
            alphabet,
            letters: buf,
        }
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        FreeWord {
            alphabet,
            letters: Vec::new(),
        }
    }

    /// The word consisting of a single letter.
    pub fn letter(alphabet: Alphabet, x: Letter) -> Result<Self, WordError> {
        FreeWord::reduce(&[x], alphabet)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            alphabet: self.alphabet,
            letters: self.letters.iter().rev().map(|x| -x).collect(),
        }
    }

    /// Product `self * other`. Panics on mismatched alphabets; use
    /// [`FreeWord::try_mul`] when the alphabets are not known to agree.
    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        self.try_mul(other).expect("alphabet mismatch in product")
    }

    pub fn try_mul(&self, other: &FreeWord) -> Result<FreeWord, WordError> {
        self.check_same(other)?;
        let mut buf = self.letters.clone();
        for &x in &other.letters {
            push_reduced(&mut buf, x);
        }
        Ok(FreeWord {
            alphabet: self.alphabet,
            letters: buf,
        })
    }

    pub fn pow(&self, k: i64) -> FreeWord {
        if k < 0 {
            return self.inverse().pow(-k);
        }
        if self.is_empty() || k == 0 {
            return FreeWord::identity(self.alphabet);
        }
        let (conj, core) = self.cyclic_decomposition();
        let mut letters = Vec::with_capacity(2 * conj.len() + core.len() * k as usize);
        letters.extend_from_slice(conj.letters());
        for _ in 0..k {
            letters.extend_from_slice(core.letters());
        }
        letters.extend(conj.letters().iter().rev().map(|x| -x));
        FreeWord::from_reduced_unchecked(self.alphabet, letters)
    }

    pub fn conjugate_by(&self, g: &FreeWord) -> FreeWord {
        g.inverse().mul(self).mul(g)
    }

    /// Writes `self = c * core * c^-1` with `core` cyclically reduced.
    pub fn cyclic_decomposition(&self) -> (FreeWord, FreeWord) {
        let w = &self.letters;
        let mut i = 0;
        while w.len() >= 2 * (i + 1) && w[i] == -w[w.len() - 1 - i] {
            i += 1;
        }
        let conj = FreeWord::from_reduced_unchecked(self.alphabet, w[..i].to_vec());
        let core = FreeWord::from_reduced_unchecked(self.alphabet, w[i..w.len() - i].to_vec());
        (conj, core)
    }

    /// The unique `(root, e)` with `root^e = self`, `e >= 1` maximal and
    /// `root` not a proper power.
    pub fn primitive_root(&self) -> Result<(FreeWord, u64), WordError> {
        if self.is_empty() {
            return Err(WordError::EmptyWord);
        }
        let (conj, core) = self.cyclic_decomposition();
        let c = core.letters();
        let n = c.len();
        // smallest period of the cyclically reduced core that divides its length
        let period = (1..=n)
            .find(|&d| n % d == 0 && (d..n).all(|i| c[i] == c[i - d]))
            .expect("n itself is a period");
        let base = FreeWord::from_reduced_unchecked(self.alphabet, c[..period].to_vec());
        let root = base.conjugate_by(&conj.inverse());
        Ok((root, (n / period) as u64))
    }

    /// `{k : self = alpha^k for some alpha}`.
    pub fn power_exponents(&self) -> PowerSet {
        match self.primitive_root() {
            Err(_) => PowerSet::AllIntegers,
            Ok((_, e)) => {
                let e = e as i64;
                let set = (1..=e)
                    .filter(|d| e % d == 0)
                    .flat_map(|d| [d, -d])
                    .collect();
                PowerSet::Finite(set)
            }
        }
    }

    /// The `alpha` with `alpha^k = self`, if any. `k` must be nonzero.
    pub fn kth_root(&self, k: i64) -> Option<FreeWord> {
        if k == 0 {
            return if self.is_empty() { Some(self.clone()) } else { None };
        }
        if self.is_empty() {
            return Some(self.clone());
        }
        let (root, e) = self.primitive_root().ok()?;
        let e = e as i64;
        if e % k != 0 {
            return None;
        }
        Some(root.pow(e / k))
    }

    /// Exponent of `self` as a power of `root` (which should be primitive).
    pub fn exponent_over(&self, root: &FreeWord) -> Option<i64> {
        if self.is_empty() {
            return Some(0);
        }
        let (r, e) = self.primitive_root().ok()?;
        if &r == root {
            Some(e as i64)
        } else if r == root.inverse() {
            Some(-(e as i64))
        } else {
            None
        }
    }

    /// Commutation decided by reducing both products.
    pub fn commutes(&self, other: &FreeWord) -> Result<bool, WordError> {
        Ok(self.try_mul(other)? == other.try_mul(self)?)
    }

    /// Commutation decided by comparing primitive roots.
    pub fn commutes_by_roots(&self, other: &FreeWord) -> Result<bool, WordError> {
        self.check_same(other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(true);
        }
        let (r1, _) = self.primitive_root()?;
        let (r2, _) = other.primitive_root()?;
        Ok(r1 == r2 || r1 == r2.inverse())
    }

    pub fn exponent_vector(&self) -> ExponentVector {
        let mut v = vec![0i64; self.alphabet.rank];
        for &x in &self.letters {
            v[x.unsigned_abs() as usize - 1] += x.signum() as i64;
        }
        ExponentVector(v)
    }

    /// Dot product of the exponent vector with `weights`.
    pub fn weighted_sum(&self, weights: &[i64]) -> Result<i64, WordError> {
        if weights.len() != self.alphabet.rank {
            return Err(WordError::LengthMismatch {
                expected: self.alphabet.rank,
                got: weights.len(),
            });
        }
        Ok(self
            .letters
            .iter()
            .map(|&x| x.signum() as i64 * weights[x.unsigned_abs() as usize - 1])
            .sum())
    }

    /// Length of the longest common prefix.
    pub fn common_prefix_len(&self, other: &FreeWord) -> usize {
        self.letters
            .iter()
            .zip(&other.letters)
            .take_while(|(a, b)| a == b)
            .count()
    }

    pub fn prefix(&self, len: usize) -> FreeWord {
        let len = len.min(self.len());
        FreeWord::from_reduced_unchecked(self.alphabet, self.letters[..len].to_vec())
    }

    /// The same letters read over another alphabet of sufficient rank.
    pub fn relabel(&self, alphabet: Alphabet) -> Result<FreeWord, WordError> {
        FreeWord::reduce(&self.letters, alphabet)
    }

    fn check_same(&self, other: &FreeWord) -> Result<(), WordError> {
        if self.alphabet != other.alphabet {
            return Err(WordError::AlphabetMismatch {
                left: self.alphabet,
                right: other.alphabet,
            });
        }
        Ok(())
    }
}

/// Shortlex order: by length, then letters compared as `1 < -1 < 2 < -2 < ...`.
impl Ord for FreeWord {
    fn cmp(&self, other: &Self) -> Ordering {
        fn key(x: Letter) -> (u32, bool) {
            (x.unsigned_abs(), x < 0)
        }
        self.alphabet
            .cmp(&other.alphabet)
            .then(self.len().cmp(&other.len()))
            .then_with(|| {
                self.letters
                    .iter()
                    .map(|&x| key(x))
                    .cmp(other.letters.iter().map(|&x| key(x)))
            })
    }
}

impl PartialOrd for FreeWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Surface syntax: `a1 a2^-1`, with `1` for the identity.
impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let t = self.alphabet.tag.symbol();
        for (k, &x) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if x > 0 {
                write!(f, "{t}{x}")?;
            } else {
                write!(f, "{t}{}^-1", -x)?;
            }
        }
        Ok(())
    }
}

/// All reduced words of length exactly `len`, in shortlex order.
pub fn words_of_length(alphabet: Alphabet, len: usize) -> Vec<FreeWord> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * 2 * alphabet.rank);
        for w in &out {
            for x in alphabet.letters() {
                if (w as &Vec<Letter>).last() != Some(&-x) {
                    let mut v = w.clone();
                    v.push(x);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|v| FreeWord::from_reduced_unchecked(alphabet, v))
        .collect()
}

/// All reduced words of length at most `max_len`.
pub fn words_up_to(alphabet: Alphabet, max_len: usize) -> Vec<FreeWord> {
    (0..=max_len)
        .flat_map(|l| words_of_length(alphabet, l))
        .collect()
}
