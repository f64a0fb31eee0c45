//! Polynomials on the probability simplex in Bernstein form, and the
//! frequency representation of infinite exchangeable families.
//!
//! A polynomial is stored only through its Bernstein coefficients at a stated
//! degree. Questions of the form "for some degree `n`" are answered by a
//! bounded scan up to a degree cap, with two early exits: the coefficient
//! range only shrinks under degree elevation, and it always contains the
//! polynomial's values, so an evaluation at a grid point `m/n` can settle
//! the answer for every degree at once.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Pow, Signed, Zero};

use crate::error::Error;
use crate::exchangeable::update_count_gamble;
use crate::gamble::Gamble;
use crate::lp::{solve, Direction, LpOutcome, LpProblem, Sign};
use crate::rational::{from_biguint, Rational};
use crate::space::{CountSpace, CountVector, SequenceSpace};
use crate::symmetry::{count_representation, count_space};

pub const DEFAULT_CAP: usize = 64;

/// A point `θ` of the simplex: nonnegative, summing to one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FrequencyVector {
    theta: Vec<Rational>,
}

impl FrequencyVector {
    pub fn new(theta: Vec<Rational>) -> Result<Self, Error> {
        let total: Rational = theta.iter().sum();
        if theta.is_empty() || theta.iter().any(Signed::is_negative) || !total.is_one() {
            return Err(Error::NotAFrequency);
        }
        Ok(Self { theta })
    }

    /// `m / |m|`; `m` must not be the empty count vector.
    pub fn from_counts(m: &CountVector) -> Result<Self, Error> {
        let n = m.total();
        if n == 0 {
            return Err(Error::NotAFrequency);
        }
        let n = Rational::from_integer(n.into());
        Self::new(m.counts().iter().map(|&c| Rational::from_integer(c.into()) / &n).collect())
    }

    pub fn values(&self) -> &[Rational] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }
}

/// `B_m(θ) = |[m]| ∏ θ_x^{m_x}`.
pub fn bernstein_eval(m: &CountVector, theta: &FrequencyVector) -> Result<Rational, Error> {
    if m.categories() != theta.len() {
        return Err(Error::LengthMismatch {
            expected: m.categories(),
            found: theta.len(),
        });
    }
    let product = m
        .counts()
        .iter()
        .zip(theta.values())
        .fold(Rational::one(), |acc, (&c, t)| acc * Pow::pow(t, c));
    Ok(from_biguint(&m.atom_size()) * product)
}

/// `Σ_m g(m) B_m(θ)`: the expectation of a count gamble under the
/// multinomial distribution with parameter `θ`.
pub fn multinomial_lpr(theta: &FrequencyVector, g: &Gamble) -> Result<Rational, Error> {
    let space = count_space(g)?;
    let mut acc = Rational::zero();
    for (m, v) in space.vectors().zip(g.values()) {
        if !v.is_zero() {
            acc += v * bernstein_eval(&m, theta)?;
        }
    }
    Ok(acc)
}

/// A polynomial on the simplex, given by its Bernstein coefficients at
/// `degree`. Equality derives from the coefficients; use
/// [`BernsteinPoly::same_polynomial`] to compare across degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BernsteinPoly {
    coefficients: Gamble,
}

impl BernsteinPoly {
    pub fn new(coefficients: Gamble) -> Result<Self, Error> {
        count_space(&coefficients)?;
        Ok(Self { coefficients })
    }

    pub fn from_values<S: Into<String>>(
        categories: impl IntoIterator<Item = S>,
        degree: usize,
        values: Vec<Rational>,
    ) -> Result<Self, Error> {
        Self::new(Gamble::new(CountSpace::new(categories, degree)?, values)?)
    }

    pub fn constant(space: CountSpace, c: Rational) -> Self {
        Self {
            coefficients: Gamble::constant(space, c),
        }
    }

    /// The basis polynomial `B_m` at degree `|m|`.
    pub fn basis(categories: &[String], m: &CountVector) -> Result<Self, Error> {
        let space = CountSpace::new(categories.iter().cloned(), m.total())?;
        let index = space.index_of(m)?;
        Ok(Self {
            coefficients: Gamble::indicator(space, index),
        })
    }

    pub fn space(&self) -> &CountSpace {
        count_space(&self.coefficients).expect("validated on construction")
    }

    pub fn categories(&self) -> &[String] {
        self.space().categories()
    }

    pub fn degree(&self) -> usize {
        self.space().total()
    }

    pub fn coefficients(&self) -> &Gamble {
        &self.coefficients
    }

    pub fn evaluate(&self, theta: &FrequencyVector) -> Result<Rational, Error> {
        multinomial_lpr(theta, &self.coefficients)
    }

    /// Zero as a polynomial; by uniqueness of the Bernstein expansion this
    /// is a coefficient test at any degree.
    pub fn is_zero(&self) -> bool {
        self.coefficients.is_zero()
    }

    /// Coefficients at degree `n ≥ degree`.
    pub fn raise(&self, n: usize) -> Result<BernsteinPoly, Error> {
        degree_raise(self, n)
    }

    pub fn same_polynomial(&self, other: &BernsteinPoly) -> Result<bool, Error> {
        if self.categories() != other.categories() {
            return Err(Error::DomainMismatch);
        }
        let n = self.degree().max(other.degree());
        Ok(self.raise(n)?.coefficients == other.raise(n)?.coefficients)
    }
}

/// Bernstein form of the expectation of `g` under the count multinomial:
/// the coefficients are `g` itself.
pub fn from_count_gamble(g: &Gamble) -> Result<BernsteinPoly, Error> {
    BernsteinPoly::new(g.clone())
}

/// Multinomial image of a sequence gamble: the Bernstein polynomial whose
/// coefficients are the gamble's count representation.
pub fn from_sequence_gamble(f: &Gamble) -> Result<BernsteinPoly, Error> {
    from_count_gamble(&count_representation(f)?)
}

/// One step of degree elevation: `b'(M) = Σ_x M_x / (n+1) · b(M − e_x)`.
fn raise_once(coefficients: &Gamble) -> Gamble {
    let space = count_space(coefficients).expect("coefficients live on a count space");
    let target = space.with_total(space.total() + 1);
    let denom = Rational::from_integer((space.total() + 1).into());
    let values = target
        .vectors()
        .map(|big| {
            let mut acc = Rational::zero();
            let mut smaller = big.counts().to_vec();
            for x in 0..smaller.len() {
                if smaller[x] == 0 {
                    continue;
                }
                let weight = smaller[x];
                smaller[x] -= 1;
                let index = space
                    .index_of(&CountVector::new(smaller.clone()))
                    .expect("same categories");
                let b = coefficients.value(index);
                if !b.is_zero() {
                    acc += b * Rational::from_integer(weight.into());
                }
                smaller[x] += 1;
            }
            acc / &denom
        })
        .collect();
    Gamble::new(target, values).expect("sized to target")
}

/// Coefficients of the same polynomial at degree `n2`.
pub fn degree_raise(p: &BernsteinPoly, n2: usize) -> Result<BernsteinPoly, Error> {
    if n2 < p.degree() {
        return Err(Error::CannotShrink {
            source_size: p.degree(),
            target: n2,
        });
    }
    let mut coefficients = p.coefficients.clone();
    for _ in p.degree()..n2 {
        coefficients = raise_once(&coefficients);
    }
    Ok(BernsteinPoly { coefficients })
}

/// `B_m̂ · p`, in Bernstein form at degree `|m̂| + deg p`.
pub fn bern_multiply(observed: &CountVector, p: &BernsteinPoly) -> Result<BernsteinPoly, Error> {
    BernsteinPoly::new(update_count_gamble(&p.coefficients, observed)?)
}

/// `(min, max)` of the coefficients at degree `n`.
pub fn coeff_range(p: &BernsteinPoly, n: usize) -> Result<(Rational, Rational), Error> {
    let raised = p.raise(n)?;
    Ok((raised.coefficients.min(), raised.coefficients.max()))
}

/// Why no expansion of the requested sign can exist at any degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignWitness {
    /// Every coefficient at `degree` is positive; raising keeps them so.
    MinCoefficient { degree: usize, min: Rational },
    /// The polynomial takes `value` at `theta`, and every coefficient range
    /// contains all values.
    Evaluation { theta: FrequencyVector, value: Rational },
    /// The zero polynomial has only zero coefficients.
    ZeroPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpansionVerdict {
    Yes { degree: usize, coefficients: Gamble },
    Never(SignWitness),
    Undecided { cap: usize },
}

impl ExpansionVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, ExpansionVerdict::Yes { .. })
    }
}

fn check_cap(cap: usize, degree: usize) -> Result<(), Error> {
    if cap < degree {
        Err(Error::CapBelowDegree { cap, degree })
    } else {
        Ok(())
    }
}

/// First grid point `m/n` (count-space order) where `pred(p(θ))` holds.
fn grid_witness(
    p: &BernsteinPoly,
    n: usize,
    pred: impl Fn(&Rational) -> bool,
) -> Result<Option<SignWitness>, Error> {
    if n == 0 {
        return Ok(None);
    }
    for m in p.space().with_total(n).vectors() {
        let theta = FrequencyVector::from_counts(&m)?;
        let value = p.evaluate(&theta)?;
        if pred(&value) {
            return Ok(Some(SignWitness::Evaluation { theta, value }));
        }
    }
    Ok(None)
}

/// Searches degrees `deg p ..= cap` for a Bernstein expansion with all
/// coefficients `≤ 0`.
pub fn has_nonpositive_expansion(p: &BernsteinPoly, cap: usize) -> Result<ExpansionVerdict, Error> {
    check_cap(cap, p.degree())?;
    let mut current = p.coefficients.clone();
    for n in p.degree()..=cap {
        if n > p.degree() {
            current = raise_once(&current);
        }
        let (min, max) = (current.min(), current.max());
        if !max.is_positive() {
            return Ok(ExpansionVerdict::Yes {
                degree: n,
                coefficients: current,
            });
        }
        if min.is_positive() {
            return Ok(ExpansionVerdict::Never(SignWitness::MinCoefficient { degree: n, min }));
        }
        if let Some(w) = grid_witness(p, n, Signed::is_positive)? {
            return Ok(ExpansionVerdict::Never(w));
        }
    }
    Ok(ExpansionVerdict::Undecided { cap })
}

/// Searches degrees `deg p ..= cap` for a Bernstein expansion with all
/// coefficients `≥ 0` and not all zero.
pub fn has_positive_expansion(p: &BernsteinPoly, cap: usize) -> Result<ExpansionVerdict, Error> {
    check_cap(cap, p.degree())?;
    if p.is_zero() {
        return Ok(ExpansionVerdict::Never(SignWitness::ZeroPolynomial));
    }
    let mut current = p.coefficients.clone();
    for n in p.degree()..=cap {
        if n > p.degree() {
            current = raise_once(&current);
        }
        if current.is_nonnegative() {
            return Ok(ExpansionVerdict::Yes {
                degree: n,
                coefficients: current,
            });
        }
        if let Some(w) = grid_witness(p, n, Signed::is_negative)? {
            return Ok(ExpansionVerdict::Never(w));
        }
    }
    Ok(ExpansionVerdict::Undecided { cap })
}

/// The set `posi(𝒱≻0 ∪ 𝒫)` for a finite set `𝒫` of polynomials, with the
/// degree cap used by every search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernsteinCone {
    categories: Vec<String>,
    generators: Vec<BernsteinPoly>,
    cap: usize,
}

impl BernsteinCone {
    pub fn new(categories: Vec<String>, generators: Vec<BernsteinPoly>, cap: usize) -> Result<Self, Error> {
        CountSpace::new(categories.iter().cloned(), 0)?;
        if generators.iter().any(|p| p.categories() != categories.as_slice()) {
            return Err(Error::DomainMismatch);
        }
        let degree = generators.iter().map(BernsteinPoly::degree).max().unwrap_or(0);
        check_cap(cap, degree)?;
        Ok(Self {
            categories,
            generators,
            cap,
        })
    }

    pub fn vacuous(categories: Vec<String>, cap: usize) -> Result<Self, Error> {
        Self::new(categories, Vec::new(), cap)
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn generators(&self) -> &[BernsteinPoly] {
        &self.generators
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn with_cap(&self, cap: usize) -> Result<Self, Error> {
        Self::new(self.categories.clone(), self.generators.clone(), cap)
    }

    fn max_degree(&self) -> usize {
        self.generators.iter().map(BernsteinPoly::degree).max().unwrap_or(0)
    }

    /// Generator coefficients for each degree from `start` to the cap.
    fn degrees_from(&self, start: usize) -> impl Iterator<Item = (usize, Vec<Gamble>)> + '_ {
        let mut current: Option<Vec<Gamble>> = None;
        (start..=self.cap).map(move |n| {
            let next: Vec<Gamble> = match current.take() {
                None => self
                    .generators
                    .iter()
                    .map(|p| p.raise(n).expect("start is at least every degree").coefficients)
                    .collect(),
                Some(prev) => prev.iter().map(raise_once).collect(),
            };
            current = Some(next.clone());
            (n, next)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BernsteinCoherence {
    /// A convex combination of the generators, with `weights`, has all
    /// coefficients `≤ 0` at `degree`.
    Violated {
        degree: usize,
        weights: Vec<Rational>,
        combination: Gamble,
    },
    /// Certified at `degree`: every normalised combination keeps a
    /// coefficient vector that is `≥ 0` and nonzero from there on.
    Avoided { degree: usize },
    Undecided { cap: usize },
}

impl BernsteinCoherence {
    pub fn is_avoided(&self) -> bool {
        matches!(self, BernsteinCoherence::Avoided { .. })
    }
}

/// Convex weights `λ` with `Σλ_i b_i ≤ 0` coefficientwise, if any.
fn nonpositive_combination(coefficients: &[Gamble]) -> Result<Option<Vec<Rational>>, Error> {
    let mut lp = LpProblem::new();
    let lambda: Vec<_> = (0..coefficients.len())
        .map(|i| lp.add_var(alloc::format!("lambda{i}"), Sign::NonNegative))
        .collect();
    let size = coefficients[0].len();
    for m in 0..size {
        let terms = lambda
            .iter()
            .zip(coefficients)
            .filter(|(_, b)| !b.value(m).is_zero())
            .map(|(v, b)| (*v, b.value(m).clone()))
            .collect();
        lp.add_le(terms, Rational::zero());
    }
    lp.add_eq(lambda.iter().map(|v| (*v, Rational::one())).collect(), Rational::one());
    Ok(solve(&lp)?.witness().map(<[Rational]>::to_vec))
}

/// `max_λ min_m Σλ_i b_i(m)` over convex weights.
fn best_min_coefficient(coefficients: &[Gamble]) -> Result<Rational, Error> {
    let mut lp = LpProblem::new();
    let t = lp.add_var("t", Sign::Free);
    let lambda: Vec<_> = (0..coefficients.len())
        .map(|i| lp.add_var(alloc::format!("lambda{i}"), Sign::NonNegative))
        .collect();
    for m in 0..coefficients[0].len() {
        let mut terms: Vec<_> = lambda
            .iter()
            .zip(coefficients)
            .filter(|(_, b)| !b.value(m).is_zero())
            .map(|(v, b)| (*v, b.value(m).clone()))
            .collect();
        terms.push((t, -Rational::one()));
        lp.add_ge(terms, Rational::zero());
    }
    lp.add_eq(lambda.iter().map(|v| (*v, Rational::one())).collect(), Rational::one());
    lp.set_objective(Direction::Maximize, alloc::vec![(t, Rational::one())]);
    match solve(&lp)? {
        LpOutcome::Bounded { value, .. } => Ok(value),
        other => unreachable!("convex weights bound t: {other:?}"),
    }
}

/// Decides whether the generators avoid Bernstein non-positivity, scanning
/// degrees from the largest generator degree up to the cone's cap.
pub fn avoids_bernstein_nonpositivity(cone: &BernsteinCone) -> Result<BernsteinCoherence, Error> {
    if cone.generators.is_empty() {
        return Ok(BernsteinCoherence::Avoided { degree: 0 });
    }
    for (n, coefficients) in cone.degrees_from(cone.max_degree()) {
        if let Some(weights) = nonpositive_combination(&coefficients)? {
            let domain = coefficients[0].domain().clone();
            let combination = Gamble::combination(&domain, weights.iter().zip(&coefficients))?;
            return Ok(BernsteinCoherence::Violated {
                degree: n,
                weights,
                combination,
            });
        }
        if best_min_coefficient(&coefficients)?.is_positive() {
            return Ok(BernsteinCoherence::Avoided { degree: n });
        }
        // Nonnegative generators none of which is zero (LP-A above found no
        // non-positive combination) stay nonnegative and nonzero under
        // every positive combination and every raise.
        if coefficients.iter().all(Gamble::is_nonnegative) {
            return Ok(BernsteinCoherence::Avoided { degree: n });
        }
    }
    Ok(BernsteinCoherence::Undecided { cap: cone.cap })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NatexVerdict {
    /// At `degree`, `b_q − Σλ_i b_i ≥ 0` with the given weights.
    Yes { degree: usize, weights: Vec<Rational> },
    /// No decomposition found up to the cap; also returned for `q = 0`,
    /// which is never a member.
    NoUpToCap { cap: usize },
    Incoherent(BernsteinCoherence),
}

impl NatexVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, NatexVerdict::Yes { .. })
    }
}

/// Membership of `q` in the Bernstein natural extension of the cone.
/// A cone whose coherence is undecided up to the cap is still searched.
pub fn bernstein_natex_member(cone: &BernsteinCone, q: &BernsteinPoly) -> Result<NatexVerdict, Error> {
    if q.categories() != cone.categories() {
        return Err(Error::DomainMismatch);
    }
    check_cap(cone.cap, q.degree())?;
    let coherence = avoids_bernstein_nonpositivity(cone)?;
    if matches!(coherence, BernsteinCoherence::Violated { .. }) {
        return Ok(NatexVerdict::Incoherent(coherence));
    }
    if q.is_zero() {
        return Ok(NatexVerdict::NoUpToCap { cap: cone.cap });
    }
    let start = cone.max_degree().max(q.degree());
    let mut target = q.raise(start)?.coefficients;
    for (n, coefficients) in cone.degrees_from(start) {
        if n > start {
            target = raise_once(&target);
        }
        if target.is_nonnegative() {
            return Ok(NatexVerdict::Yes {
                degree: n,
                weights: alloc::vec![Rational::zero(); coefficients.len()],
            });
        }
        if coefficients.is_empty() {
            continue;
        }
        let mut lp = LpProblem::new();
        let lambda: Vec<_> = (0..coefficients.len())
            .map(|i| lp.add_var(alloc::format!("lambda{i}"), Sign::NonNegative))
            .collect();
        for m in 0..target.len() {
            let terms = lambda
                .iter()
                .zip(&coefficients)
                .filter(|(_, b)| !b.value(m).is_zero())
                .map(|(v, b)| (*v, b.value(m).clone()))
                .collect();
            lp.add_le(terms, target.value(m).clone());
        }
        if let Some(w) = solve(&lp)?.witness() {
            return Ok(NatexVerdict::Yes {
                degree: n,
                weights: w.to_vec(),
            });
        }
    }
    Ok(NatexVerdict::NoUpToCap { cap: cone.cap })
}

/// Updating on an observed count vector: `p` belongs to the updated
/// representation iff `B_m̂ · p` belongs to the cone.
pub fn updated_frequency_member(
    cone: &BernsteinCone,
    observed: &CountVector,
    p: &BernsteinPoly,
) -> Result<NatexVerdict, Error> {
    bernstein_natex_member(cone, &bern_multiply(observed, p)?)
}

/// Membership of a gamble on `𝒳^n` in the `n`-variable member of the family
/// represented by the cone.
pub fn family_member(cone: &BernsteinCone, f: &Gamble) -> Result<NatexVerdict, Error> {
    bernstein_natex_member(cone, &from_sequence_gamble(f)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfiniteExtension {
    Extendable { cone: BernsteinCone, degree: usize },
    NotExtendable {
        degree: usize,
        weights: Vec<Rational>,
        combination: Gamble,
    },
    Undecided { cap: usize },
}

/// Decides whether an assessment on `𝒳^n` extends to a coherent,
/// exchangeable, time-consistent family on all sequence lengths.
pub fn extend_infinite(space: &SequenceSpace, assessment: &[Gamble], cap: usize) -> Result<InfiniteExtension, Error> {
    let generators = assessment
        .iter()
        .map(|f| {
            if *f.domain() != space.clone().into() {
                return Err(Error::DomainMismatch);
            }
            from_sequence_gamble(f)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cone = BernsteinCone::new(space.categories().to_vec(), generators, cap)?;
    Ok(match avoids_bernstein_nonpositivity(&cone)? {
        BernsteinCoherence::Avoided { degree } => InfiniteExtension::Extendable { cone, degree },
        BernsteinCoherence::Violated {
            degree,
            weights,
            combination,
        } => InfiniteExtension::NotExtendable {
            degree,
            weights,
            combination,
        },
        BernsteinCoherence::Undecided { cap } => InfiniteExtension::Undecided { cap },
    })
}
