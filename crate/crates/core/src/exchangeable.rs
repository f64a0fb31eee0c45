//! Exchangeable natural extension on `𝒳^N`, updating on samples and counts,
//! and extension to longer finite sequences.
//!
//! A model keeps two views of the same cone: the sequence cone, whose
//! lineality is the kernel of the symmetrising projection, and the count cone
//! on `CountSpace(N)` generated by the count representations of the
//! assessment. Queries go through the count cone; the sequence cone is there
//! for cross-checks and sample-level updating.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::cone::{avoids_nonpositivity, Coherence, DesirCone, NonPositiveCombination, PrevisionValue};
use crate::error::Error;
use crate::gamble::Gamble;
use crate::rational::{from_biguint, Rational};
use crate::space::{CountSpace, CountVector, Domain, SequenceSpace};
use crate::symmetry::{count_representation, count_space, lift_count_gamble, sequence_space};

#[derive(Clone, Debug)]
pub struct ExchangeableModel {
    space: SequenceSpace,
    sequence_cone: DesirCone,
    count_cone: DesirCone,
}

fn check_assessment(space: &SequenceSpace, assessment: &[Gamble]) -> Result<(), Error> {
    let domain = Domain::Sequences(space.clone());
    if assessment.iter().all(|g| *g.domain() == domain) {
        Ok(())
    } else {
        Err(Error::DomainMismatch)
    }
}

/// Smallest coherent exchangeable cone on `space` containing `assessment`.
/// Fails with the non-positivity witness (at sequence level, with kernel
/// lineality weights) if the assessment cannot be made exchangeable.
pub fn exchangeable_extension(space: &SequenceSpace, assessment: Vec<Gamble>) -> Result<ExchangeableModel, Error> {
    check_assessment(space, &assessment)?;
    let count_generators = assessment
        .iter()
        .map(count_representation)
        .collect::<Result<Vec<_>, _>>()?;
    let sequence_cone = DesirCone::exchangeable(space, assessment)?;
    sequence_cone.ensure_coherent()?;
    let count_cone = DesirCone::new(space.count_space(), Vec::new(), count_generators)?;
    Ok(ExchangeableModel {
        space: space.clone(),
        sequence_cone,
        count_cone,
    })
}

impl ExchangeableModel {
    pub fn vacuous(space: &SequenceSpace) -> Self {
        exchangeable_extension(space, Vec::new()).expect("empty assessment avoids non-positivity")
    }

    /// Model whose count cone is generated by `generators` (gambles on
    /// `CountSpace(N)`); the sequence generators are their lifts.
    fn from_count_generators(space: &SequenceSpace, generators: Vec<Gamble>) -> Result<Self, Error> {
        let lifted = generators
            .iter()
            .map(lift_count_gamble)
            .collect::<Result<Vec<_>, _>>()?;
        let count_cone = DesirCone::new(space.count_space(), Vec::new(), generators)?;
        count_cone.ensure_coherent()?;
        Ok(Self {
            space: space.clone(),
            sequence_cone: DesirCone::exchangeable(space, lifted)?,
            count_cone,
        })
    }

    pub fn space(&self) -> &SequenceSpace {
        &self.space
    }

    pub fn sequence_cone(&self) -> &DesirCone {
        &self.sequence_cone
    }

    pub fn count_cone(&self) -> &DesirCone {
        &self.count_cone
    }

    fn check_gamble(&self, f: &Gamble) -> Result<(), Error> {
        if *f.domain() == Domain::Sequences(self.space.clone()) {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }

    /// `f ∈ 𝒟`, decided on the count representation.
    pub fn contains(&self, f: &Gamble) -> Result<bool, Error> {
        self.check_gamble(f)?;
        self.count_cone.contains(&count_representation(f)?)
    }

    /// `f ∈ 𝒟`, decided on `𝒳^N` with kernel lineality.
    pub fn contains_by_sequences(&self, f: &Gamble) -> Result<bool, Error> {
        self.check_gamble(f)?;
        self.sequence_cone.contains(f)
    }

    /// Membership of a count gamble in `𝒦`.
    pub fn contains_count(&self, g: &Gamble) -> Result<bool, Error> {
        self.count_cone.contains(g)
    }

    pub fn lower_prevision(&self, f: &Gamble) -> Result<PrevisionValue, Error> {
        self.check_gamble(f)?;
        self.count_cone.lower_prevision(&count_representation(f)?)
    }

    pub fn upper_prevision(&self, f: &Gamble) -> Result<PrevisionValue, Error> {
        self.check_gamble(f)?;
        self.count_cone.upper_prevision(&count_representation(f)?)
    }

    fn check_sizes(&self, observed: usize, remaining: usize) -> Result<(), Error> {
        if observed + remaining == self.space.length() {
            Ok(())
        } else {
            Err(Error::SizeMismatch {
                observed,
                remaining,
                total: self.space.length(),
            })
        }
    }

    /// Count-level updating: `g ∈ 𝒦⌋m̂` iff the likelihood-weighted shift of
    /// `g` belongs to `𝒦`.
    pub fn updated_member(&self, observed: &CountVector, g: &Gamble) -> Result<bool, Error> {
        let remaining = count_space(g)?;
        if observed.categories() != self.space.categories().len() {
            return Err(Error::LengthMismatch {
                expected: self.space.categories().len(),
                found: observed.categories(),
            });
        }
        if remaining.categories() != self.space.categories() {
            return Err(Error::DomainMismatch);
        }
        self.check_sizes(observed.total(), remaining.total())?;
        self.count_cone.contains(&update_count_gamble(g, observed)?)
    }

    /// Updating on an observed sample `x̂` (symbol indices), decided through
    /// counts.
    pub fn updated_sample_member(&self, sample: &[usize], f: &Gamble) -> Result<bool, Error> {
        let remaining = sequence_space(f)?;
        if remaining.categories() != self.space.categories() {
            return Err(Error::DomainMismatch);
        }
        self.check_sizes(sample.len(), remaining.length())?;
        let observed = self.sample_counts(sample)?;
        self.updated_member(&observed, &count_representation(f)?)
    }

    /// Updating on an observed sample, decided on `𝒳^N` as membership of
    /// `f·I_{C_x̂}` in the sequence cone updated on the cylinder `C_x̂`.
    pub fn updated_sample_member_by_sequences(&self, sample: &[usize], f: &Gamble) -> Result<bool, Error> {
        let remaining = sequence_space(f)?;
        if remaining.categories() != self.space.categories() {
            return Err(Error::DomainMismatch);
        }
        self.check_sizes(sample.len(), remaining.length())?;
        self.sample_counts(sample)?;
        let k = self.space.categories().len();
        let prefix = sample.iter().fold(0, |acc, &s| acc * k + s);
        let block = remaining.size();
        let event: Vec<usize> = (prefix * block..(prefix + 1) * block).collect();
        let extended = Gamble::from_fn(self.space.clone(), |i| {
            if i / block == prefix {
                f.value(i % block).clone()
            } else {
                Rational::zero()
            }
        });
        self.sequence_cone.updated_member(&event, &extended)
    }

    fn sample_counts(&self, sample: &[usize]) -> Result<CountVector, Error> {
        let k = self.space.categories().len();
        let mut counts = alloc::vec![0; k];
        for &s in sample {
            if s >= k {
                return Err(Error::UnknownSymbol {
                    symbol: s,
                    categories: k,
                });
            }
            counts[s] += 1;
        }
        Ok(CountVector::new(counts))
    }
}

/// `L_m̂(m̌) = |[m̂]|·|[m̌]| / |[m̂ + m̌]|`.
pub fn likelihood(observed: &CountVector, remaining: &CountVector) -> Rational {
    let num = observed.atom_size() * remaining.atom_size();
    from_biguint(&num) / from_biguint(&observed.add(remaining).atom_size())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LikelihoodWeights {
    pub observed: CountVector,
    /// One weight per count vector of size `ň`, in count-space order.
    pub weights: Vec<(CountVector, Rational)>,
}

/// Likelihoods `L_m̂(m̌)` for every `m̌` of size `remaining`.
pub fn likelihood_weights(observed: &CountVector, remaining: usize) -> LikelihoodWeights {
    let k = observed.categories();
    let weights = crate::space::CountVectors::new(k, remaining)
        .map(|m| {
            let w = likelihood(observed, &m);
            (m, w)
        })
        .collect();
    LikelihoodWeights {
        observed: observed.clone(),
        weights,
    }
}

/// `+_m̂(L_m̂ g)`: the count gamble on size `n̂ + ň` equal to
/// `L_m̂(M − m̂)·g(M − m̂)` when `M ≥ m̂` and zero otherwise.
pub fn update_count_gamble(g: &Gamble, observed: &CountVector) -> Result<Gamble, Error> {
    let space = count_space(g)?;
    if observed.categories() != space.categories().len() {
        return Err(Error::LengthMismatch {
            expected: space.categories().len(),
            found: observed.categories(),
        });
    }
    let target = space.with_total(space.total() + observed.total());
    let values = target
        .vectors()
        .map(|big| match big.checked_sub(observed) {
            Some(rest) => {
                let v = g.value(space.index_of(&rest).expect("same categories"));
                if v.is_zero() {
                    Rational::zero()
                } else {
                    likelihood(observed, &rest) * v
                }
            }
            None => Rational::zero(),
        })
        .collect();
    Gamble::new(target, values)
}

/// Zhou's degree-elevation map from count gambles of size `n1` to size `n2`:
/// `enl(g)(M) = Σ_{m ≤ M, |m| = n1} |[M−m]|·|[m]| / |[M]| · g(m)`.
pub fn enl(g: &Gamble, n2: usize) -> Result<Gamble, Error> {
    let space = count_space(g)?;
    let n1 = space.total();
    if n2 < n1 {
        return Err(Error::CannotShrink {
            source_size: n1,
            target: n2,
        });
    }
    let target = space.with_total(n2);
    let small: Vec<CountVector> = space.vectors().collect();
    let values = target
        .vectors()
        .map(|big| {
            let denom = from_biguint(&big.atom_size());
            let mut acc = Rational::zero();
            for (m, v) in small.iter().zip(g.values()) {
                if v.is_zero() {
                    continue;
                }
                if let Some(rest) = big.checked_sub(m) {
                    acc += from_biguint(&(rest.atom_size() * m.atom_size())) * v;
                }
            }
            acc / &denom
        })
        .collect();
    Gamble::new(target, values)
}

/// Witness that an assessment on `𝒳^n` cannot be extended to `𝒳^{n+k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonExtendability {
    /// The `enl` images of the count representations of the assessment.
    pub extended_generators: Vec<Gamble>,
    /// Non-positive combination on `CountSpace(n+k)`.
    pub combination: NonPositiveCombination,
    /// The combination lifted to `𝒳^{n+k}`; pointwise `≤ 0`.
    pub sequence_image: Gamble,
}

#[derive(Clone, Debug)]
pub enum FiniteExtension {
    Extendable(Box<ExchangeableModel>),
    NotExtendable(Box<NonExtendability>),
}

impl FiniteExtension {
    pub fn is_extendable(&self) -> bool {
        matches!(self, FiniteExtension::Extendable(_))
    }
}

/// Decides whether an assessment on `𝒳^n` extends to a coherent exchangeable
/// model on `𝒳^{n+k}`: this holds iff the `enl` images of its count
/// representation avoid non-positivity on `CountSpace(n+k)`.
pub fn extend_finite(space: &SequenceSpace, assessment: &[Gamble], k: usize) -> Result<FiniteExtension, Error> {
    check_assessment(space, assessment)?;
    let target = space.with_length(space.length() + k)?;
    let counts: CountSpace = target.count_space();
    let extended_generators = assessment
        .iter()
        .map(|f| enl(&count_representation(f)?, target.length()))
        .collect::<Result<Vec<_>, _>>()?;
    match avoids_nonpositivity(&counts.into(), &extended_generators, &[])? {
        Coherence::Avoids => Ok(FiniteExtension::Extendable(Box::new(ExchangeableModel::from_count_generators(
            &target,
            extended_generators,
        )?))),
        Coherence::Fails(combination) => {
            let sequence_image = lift_count_gamble(&combination.combination)?;
            Ok(FiniteExtension::NotExtendable(Box::new(NonExtendability {
                extended_generators,
                combination,
                sequence_image,
            })))
        }
    }
}

/// Sum of `enl` coefficients over a row; used by tests of row-stochasticity.
#[doc(hidden)]
pub fn enl_row_sum(g_space: &CountSpace, big: &CountVector) -> Rational {
    let denom = from_biguint(&big.atom_size());
    g_space
        .vectors()
        .filter_map(|m| big.checked_sub(&m).map(|rest| from_biguint(&(rest.atom_size() * m.atom_size()))))
        .fold(Rational::zero(), |a, b| a + b)
        / denom
}
