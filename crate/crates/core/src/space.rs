//! Finite possibility spaces: sequences over a category set, count vectors,
//! and permutations of sequence positions.
//!
//! Sequences are enumerated lexicographically in declared category order, the
//! first position being most significant. Count vectors are enumerated in
//! decreasing lexicographic order, so for two categories `(N,0)` comes first
//! and `(0,N)` last; this matches the order of the constant sequences.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use crate::error::Error;
use crate::rational::multinomial;

fn validate_categories(categories: &[String]) -> Result<(), Error> {
    if categories.is_empty() {
        return Err(Error::NoCategories);
    }
    for (i, c) in categories.iter().enumerate() {
        if categories[..i].contains(c) {
            return Err(Error::DuplicateCategory(c.clone()));
        }
    }
    Ok(())
}

/// `𝒳^N`: all sequences of length `N` over the categories.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SequenceSpace {
    categories: Vec<String>,
    length: usize,
    size: usize,
}

impl SequenceSpace {
    pub fn new<S: Into<String>>(categories: impl IntoIterator<Item = S>, length: usize) -> Result<Self, Error> {
        let categories: Vec<String> = categories.into_iter().map(Into::into).collect();
        validate_categories(&categories)?;
        if length == 0 {
            return Err(Error::ZeroLength);
        }
        let size = u32::try_from(length)
            .ok()
            .and_then(|n| categories.len().checked_pow(n))
            .ok_or(Error::SpaceTooLarge)?;
        Ok(Self {
            categories,
            length,
            size,
        })
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Same categories, different length.
    pub fn with_length(&self, length: usize) -> Result<Self, Error> {
        Self::new(self.categories.iter().cloned(), length)
    }

    pub fn count_space(&self) -> CountSpace {
        CountSpace::from_validated(self.categories.clone(), self.length)
    }

    pub fn sequence(&self, index: usize) -> Vec<usize> {
        let k = self.categories.len();
        let mut seq = vec![0; self.length];
        let mut rest = index;
        for slot in seq.iter_mut().rev() {
            *slot = rest % k;
            rest /= k;
        }
        seq
    }

    pub fn index_of(&self, seq: &[usize]) -> Result<usize, Error> {
        if seq.len() != self.length {
            return Err(Error::LengthMismatch {
                expected: self.length,
                found: seq.len(),
            });
        }
        let k = self.categories.len();
        seq.iter().try_fold(0usize, |acc, &s| {
            if s >= k {
                Err(Error::UnknownSymbol {
                    symbol: s,
                    categories: k,
                })
            } else {
                Ok(acc * k + s)
            }
        })
    }

    pub fn sequences(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.size).map(move |i| self.sequence(i))
    }

    /// Concatenated category labels, e.g. `"bw"`.
    pub fn label(&self, seq: &[usize]) -> String {
        seq.iter().map(|&s| self.categories[s].as_str()).collect()
    }

    /// Counting map: component `z` of the result is the number of positions
    /// holding category `z`.
    pub fn count_vector(&self, seq: &[usize]) -> Result<CountVector, Error> {
        self.index_of(seq)?;
        let mut counts = vec![0; self.categories.len()];
        for &s in seq {
            counts[s] += 1;
        }
        Ok(CountVector::new(counts))
    }
}

/// A composition vector: how many times each category occurs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountVector {
    counts: Vec<usize>,
}

impl CountVector {
    pub fn new(counts: Vec<usize>) -> Self {
        Self { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn categories(&self) -> usize {
        self.counts.len()
    }

    /// Componentwise `self ≤ other`.
    pub fn is_below(&self, other: &CountVector) -> bool {
        self.counts.len() == other.counts.len() && self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &CountVector) -> Option<CountVector> {
        if !other.is_below(self) {
            return None;
        }
        Some(CountVector::new(
            self.counts.iter().zip(&other.counts).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn add(&self, other: &CountVector) -> CountVector {
        assert_eq!(self.counts.len(), other.counts.len(), "count vectors over different categories");
        CountVector::new(self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect())
    }

    /// `|[m]| = N! / Π m_z!`, the number of sequences with this composition.
    pub fn atom_size(&self) -> BigUint {
        multinomial(&self.counts)
    }

    /// Lexicographically smallest sequence with this composition.
    pub fn canonical_sequence(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(z, &c)| core::iter::repeat_n(z, c))
            .collect()
    }
}

impl fmt::Display for CountVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `atom_size` as a free function.
pub fn atom_size(m: &CountVector) -> BigUint {
    m.atom_size()
}

/// Number of count vectors with `parts` components summing to `total`.
fn compositions(total: usize, parts: usize) -> usize {
    if parts == 0 {
        return usize::from(total == 0);
    }
    // C(total + parts - 1, parts - 1), computed incrementally
    let k = parts - 1;
    (1..=k).fold(1usize, |acc, j| acc * (total + j) / j)
}

/// `𝒩^N_𝒳`: all count vectors over the categories with total `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CountSpace {
    categories: Vec<String>,
    total: usize,
}

impl CountSpace {
    /// A total of zero is allowed; that space holds only the zero vector.
    pub fn new<S: Into<String>>(categories: impl IntoIterator<Item = S>, total: usize) -> Result<Self, Error> {
        let categories: Vec<String> = categories.into_iter().map(Into::into).collect();
        validate_categories(&categories)?;
        Ok(Self::from_validated(categories, total))
    }

    fn from_validated(categories: Vec<String>, total: usize) -> Self {
        Self { categories, total }
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn with_total(&self, total: usize) -> Self {
        Self::from_validated(self.categories.clone(), total)
    }

    pub fn size(&self) -> usize {
        compositions(self.total, self.categories.len())
    }

    pub fn vectors(&self) -> CountVectors {
        CountVectors::new(self.categories.len(), self.total)
    }

    pub fn vector(&self, index: usize) -> CountVector {
        self.vectors().nth(index).expect("count vector index out of range")
    }

    pub fn contains(&self, m: &CountVector) -> bool {
        m.categories() == self.categories.len() && m.total() == self.total
    }

    pub fn index_of(&self, m: &CountVector) -> Result<usize, Error> {
        let k = self.categories.len();
        if m.categories() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                found: m.categories(),
            });
        }
        if m.total() != self.total {
            return Err(Error::SizeMismatch {
                observed: m.total(),
                remaining: 0,
                total: self.total,
            });
        }
        let mut rank = 0;
        let mut remaining = self.total;
        for (i, &c) in m.counts()[..k - 1].iter().enumerate() {
            let parts_after = k - 1 - i;
            for larger in c + 1..=remaining {
                rank += compositions(remaining - larger, parts_after);
            }
            remaining -= c;
        }
        Ok(rank)
    }

    /// Comma-separated counts, e.g. `"2,0"`.
    pub fn label(&self, m: &CountVector) -> String {
        alloc::format!("{m}")
    }
}

/// Count vectors in decreasing lexicographic order.
#[derive(Clone, Debug)]
pub struct CountVectors {
    current: Option<Vec<usize>>,
}

impl CountVectors {
    pub(crate) fn new(parts: usize, total: usize) -> Self {
        let current = if parts == 0 {
            None
        } else {
            let mut first = vec![0; parts];
            first[0] = total;
            Some(first)
        };
        Self { current }
    }
}

impl Iterator for CountVectors {
    type Item = CountVector;

    fn next(&mut self) -> Option<CountVector> {
        let out = self.current.clone()?;
        let v = self.current.as_mut().unwrap();
        let k = v.len();
        // Rightmost position before the last that can give one unit to its
        // right neighbour; everything after it collapses into that neighbour.
        match (0..k.saturating_sub(1)).rev().find(|&i| v[i] > 0) {
            None => self.current = None,
            Some(i) => {
                let tail: usize = v[i + 1..].iter().sum();
                v[i] -= 1;
                for x in &mut v[i + 1..] {
                    *x = 0;
                }
                v[i + 1] = tail + 1;
            }
        }
        Some(CountVector::new(out))
    }
}

/// A bijection on sequence positions; `(π x)_k = x_{π(k)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// `images[k]` is the (zero-based) position read into position `k`.
    pub fn new(images: Vec<usize>) -> Result<Self, Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::NotAPermutation(n));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self, Error> {
        let mut images: Vec<usize> = (0..n).collect();
        if a >= n || b >= n {
            return Err(Error::NotAPermutation(n));
        }
        images.swap(a, b);
        Ok(Self { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (k, &i) in self.images.iter().enumerate() {
            inv[i] = k;
        }
        Self { images: inv }
    }

    pub fn apply(&self, seq: &[usize]) -> Vec<usize> {
        self.images.iter().map(|&i| seq[i]).collect()
    }
}

/// The finite index set a gamble is defined on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Sequences(SequenceSpace),
    Counts(CountSpace),
    /// Anonymous outcomes `0..n`.
    Outcomes(usize),
}

impl Domain {
    pub fn size(&self) -> usize {
        match self {
            Domain::Sequences(s) => s.size(),
            Domain::Counts(c) => c.size(),
            Domain::Outcomes(n) => *n,
        }
    }

    /// Human-readable key of the element at `index`.
    pub fn key(&self, index: usize) -> String {
        match self {
            Domain::Sequences(s) => s.label(&s.sequence(index)),
            Domain::Counts(c) => c.label(&c.vector(index)),
            Domain::Outcomes(_) => alloc::format!("{index}"),
        }
    }

    pub fn keys(&self) -> Vec<String> {
        match self {
            Domain::Sequences(s) => s.sequences().map(|x| s.label(&x)).collect(),
            Domain::Counts(c) => c.vectors().map(|m| c.label(&m)).collect(),
            Domain::Outcomes(n) => (0..*n).map(|i| alloc::format!("{i}")).collect(),
        }
    }
}

impl From<SequenceSpace> for Domain {
    fn from(s: SequenceSpace) -> Self {
        Domain::Sequences(s)
    }
}

impl From<CountSpace> for Domain {
    fn from(c: CountSpace) -> Self {
        Domain::Counts(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn bw(n: usize) -> SequenceSpace {
        SequenceSpace::new(["b", "w"], n).unwrap()
    }

    #[test]
    fn count_vectors_of_running_example() {
        let s = bw(2);
        let cv = |l: &[usize]| s.count_vector(l).unwrap().counts().to_vec();
        assert_eq!(cv(&[0, 1]), [1, 1]);
        assert_eq!(cv(&[0, 0]), [2, 0]);
        let s4 = bw(4);
        assert_eq!(s4.count_vector(&[1, 1, 0, 0]).unwrap().counts(), [2, 2]);
        assert_eq!(
            s.count_vector(&[0, 2]),
            Err(Error::UnknownSymbol { symbol: 2, categories: 2 })
        );
    }

    #[test]
    fn atom_sizes() {
        assert_eq!(CountVector::new(vec![2, 2]).atom_size(), BigUint::from(6u32));
        assert_eq!(CountVector::new(vec![1, 1]).atom_size(), BigUint::from(2u32));
        assert_eq!(CountVector::new(vec![5, 0, 0]).atom_size(), BigUint::from(1u32));
    }

    #[test]
    fn count_space_order_and_rank() {
        let c = CountSpace::new(["b", "w"], 2).unwrap();
        let labels: Vec<_> = c.vectors().map(|m| m.to_string()).collect();
        assert_eq!(labels, ["2,0", "1,1", "0,2"]);
        for k in 1..=4 {
            let cats: Vec<String> = (0..k).map(|i| alloc::format!("c{i}")).collect();
            for n in 0..=5 {
                let space = CountSpace::new(cats.clone(), n).unwrap();
                let all: Vec<_> = space.vectors().collect();
                assert_eq!(all.len(), space.size());
                for (i, m) in all.iter().enumerate() {
                    assert_eq!(m.total(), n);
                    assert_eq!(space.index_of(m).unwrap(), i);
                    if i > 0 {
                        assert!(all[i - 1] > *m, "not strictly decreasing");
                    }
                }
            }
        }
    }

    #[test]
    fn atom_sizes_sum_to_space_size() {
        let s = SequenceSpace::new(["a", "b", "c"], 4).unwrap();
        let total: BigUint = s.count_space().vectors().map(|m| m.atom_size()).sum();
        assert_eq!(total, BigUint::from(81u32));
    }

    #[test]
    fn sequence_indexing_round_trips() {
        let s = SequenceSpace::new(["x", "y", "z"], 3).unwrap();
        for (i, seq) in s.sequences().enumerate() {
            assert_eq!(s.index_of(&seq).unwrap(), i);
        }
        assert_eq!(s.label(&s.sequence(5)), "xyz");
    }

    #[test]
    fn space_validation() {
        assert_eq!(SequenceSpace::new(Vec::<String>::new(), 2), Err(Error::NoCategories));
        assert_eq!(SequenceSpace::new(["a", "a"], 2), Err(Error::DuplicateCategory("a".into())));
        assert_eq!(SequenceSpace::new(["a"], 0), Err(Error::ZeroLength));
    }

    #[test]
    fn permutations() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        let x = [5, 6, 7];
        assert_eq!(p.apply(&x), [7, 5, 6]);
        assert_eq!(p.inverse().apply(&p.apply(&x)), x);
    }

    #[test]
    fn canonical_sequence_is_smallest() {
        let s = bw(4);
        let m = CountVector::new(vec![2, 2]);
        let first = s.sequences().find(|x| s.count_vector(x).unwrap() == m).unwrap();
        assert_eq!(m.canonical_sequence(), first);
    }
}
