//! Permutation symmetry of sequence gambles and the count representation.
//!
//! The symmetrising projection is never computed as an average over all `N!`
//! permutations: a permutation-invariant gamble is constant on each atom
//! `[m]`, and its value there is the hypergeometric expectation of the
//! original gamble, so everything routes through per-atom averages.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::Error;
use crate::gamble::Gamble;
use crate::rational::{from_biguint, Rational};
use crate::space::{CountSpace, CountVector, Domain, Permutation, SequenceSpace};

pub(crate) fn sequence_space(f: &Gamble) -> Result<&SequenceSpace, Error> {
    match f.domain() {
        Domain::Sequences(s) => Ok(s),
        _ => Err(Error::WrongDomainKind("sequence space")),
    }
}

pub(crate) fn count_space(g: &Gamble) -> Result<&CountSpace, Error> {
    match g.domain() {
        Domain::Counts(c) => Ok(c),
        _ => Err(Error::WrongDomainKind("count space")),
    }
}

/// `(π^t f)(x) = f(π x)`.
pub fn permute_gamble(p: &Permutation, f: &Gamble) -> Result<Gamble, Error> {
    let space = sequence_space(f)?;
    if p.len() != space.length() {
        return Err(Error::LengthMismatch {
            expected: space.length(),
            found: p.len(),
        });
    }
    Ok(Gamble::from_fn(space.clone(), |i| {
        let permuted = p.apply(&space.sequence(i));
        f.value(space.index_of(&permuted).expect("permuted sequence stays in space")).clone()
    }))
}

/// Uniform average of `f` over the atom `[m]`: the expectation under sampling
/// without replacement from an urn with composition `m`.
pub fn hypgeo_expectation(f: &Gamble, m: &CountVector) -> Result<Rational, Error> {
    let space = sequence_space(f)?;
    if !space.count_space().contains(m) {
        return Err(Error::DomainMismatch);
    }
    let mut sum = Rational::zero();
    for (i, x) in space.sequences().enumerate() {
        if space.count_vector(&x)? == *m {
            sum += f.value(i);
        }
    }
    Ok(sum / from_biguint(&m.atom_size()))
}

/// Maps a sequence gamble to the count gamble of its per-atom averages.
pub fn count_representation(f: &Gamble) -> Result<Gamble, Error> {
    let space = sequence_space(f)?;
    let counts = space.count_space();
    let mut sums = vec![Rational::zero(); counts.size()];
    for (i, x) in space.sequences().enumerate() {
        let m = space.count_vector(&x)?;
        sums[counts.index_of(&m)?] += f.value(i);
    }
    let values = counts
        .vectors()
        .zip(sums)
        .map(|(m, s)| s / from_biguint(&m.atom_size()))
        .collect();
    Gamble::new(counts, values)
}

/// `g ∘ T`: the permutation-invariant sequence gamble equal to `g(m)` on each
/// atom `[m]`.
pub fn lift_count_gamble(g: &Gamble) -> Result<Gamble, Error> {
    let counts = count_space(g)?;
    let space = SequenceSpace::new(counts.categories().iter().cloned(), counts.total())?;
    let mut values = Vec::with_capacity(space.size());
    for x in space.sequences() {
        let m = space.count_vector(&x)?;
        values.push(g.value(counts.index_of(&m)?).clone());
    }
    Gamble::new(space, values)
}

/// Symmetrising projection onto permutation-invariant gambles.
pub fn project_ex(f: &Gamble) -> Result<Gamble, Error> {
    lift_count_gamble(&count_representation(f)?)
}

/// Extends a gamble on the first `n1` variables to one on `n2 ≥ n1`
/// variables that ignores the extra positions.
pub fn cylindrical_extend(f: &Gamble, n2: usize) -> Result<Gamble, Error> {
    let space = sequence_space(f)?;
    let n1 = space.length();
    if n2 < n1 {
        return Err(Error::CannotShrink {
            source_size: n1,
            target: n2,
        });
    }
    let target = space.with_length(n2)?;
    // With the first position most significant, dropping the trailing
    // `n2 - n1` positions is integer division.
    let stride = target.size() / space.size();
    Ok(Gamble::from_fn(target, |i| f.value(i / stride).clone()))
}

/// Basis of the kernel of the symmetrising projection: for each atom with
/// lexicographically smallest member `x_m`, the gambles `δ_y − δ_{x_m}` for the
/// other members `y`.
pub fn kernel_basis(space: &SequenceSpace) -> Vec<Gamble> {
    let counts = space.count_space();
    let representative: Vec<usize> = counts
        .vectors()
        .map(|m| space.index_of(&m.canonical_sequence()).expect("canonical sequence in space"))
        .collect();
    let mut basis = Vec::with_capacity(space.size() - counts.size());
    for (i, x) in space.sequences().enumerate() {
        let m = space.count_vector(&x).expect("enumerated sequence");
        let rep = representative[counts.index_of(&m).expect("count vector in space")];
        if rep == i {
            continue;
        }
        let mut values = vec![Rational::zero(); space.size()];
        values[i] = Rational::from_integer(1.into());
        values[rep] = Rational::from_integer((-1).into());
        basis.push(Gamble::new(space.clone(), values).expect("sized to space"));
    }
    basis
}
