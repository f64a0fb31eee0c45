//! Finitely generated sets of desirable gambles.
//!
//! A [`DesirCone`] represents `V + posi(L⁺₀ ∪ A)`: a linear subspace `V`
//! spanned by the lineality gambles, plus positive combinations of the
//! assessment `A` and the unit indicators. Every query is one exact LP.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};
use once_cell::race::OnceBox;

use crate::error::Error;
use crate::gamble::Gamble;
use crate::linalg;
use crate::lp::{solve, Direction, LpOutcome, LpProblem, Sign, VarId};
use crate::rational::Rational;
use crate::space::{Domain, SequenceSpace};
use crate::symmetry::kernel_basis;

/// Certificate that an assessment incurs non-positivity: nonnegative weights
/// on the assessment and on the unit indicators, summing to one, plus free
/// lineality weights, whose combination is pointwise `≤ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonPositiveCombination {
    pub assessment_weights: Vec<Rational>,
    pub positive_weights: Vec<Rational>,
    pub lineality_weights: Vec<Rational>,
    pub combination: Gamble,
}

impl NonPositiveCombination {
    /// Recomputes the combination from the weights and checks every claim.
    pub fn verify(&self, assessment: &[Gamble], lineality: &[Gamble]) -> bool {
        let domain = self.combination.domain();
        if self.assessment_weights.len() != assessment.len()
            || self.positive_weights.len() != domain.size()
            || self.lineality_weights.len() != lineality.len()
        {
            return false;
        }
        let nonneg = self
            .assessment_weights
            .iter()
            .chain(&self.positive_weights)
            .all(|w| *w >= Rational::zero());
        let total: Rational = self.assessment_weights.iter().chain(&self.positive_weights).sum();
        let positive = Gamble::new(domain.clone(), self.positive_weights.clone());
        let recomputed = positive.and_then(|p| {
            let terms = self
                .assessment_weights
                .iter()
                .zip(assessment)
                .chain(self.lineality_weights.iter().zip(lineality));
            Gamble::combination(domain, terms)?.try_add(&p)
        });
        nonneg
            && total.is_one()
            && recomputed.as_ref() == Ok(&self.combination)
            && self.combination.is_nonpositive()
    }
}

/// Weights expressing a member as generators plus a nonnegative residual
/// plus a lineality element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub generator_weights: Vec<Rational>,
    pub positive_weights: Vec<Rational>,
    pub lineality_weights: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coherence {
    Avoids,
    Fails(NonPositiveCombination),
}

impl Coherence {
    pub fn avoids(&self) -> bool {
        matches!(self, Coherence::Avoids)
    }
}

fn check_domains(domain: &Domain, gambles: &[Gamble]) -> Result<(), Error> {
    if gambles.iter().all(|g| g.domain() == domain) {
        Ok(())
    } else {
        Err(Error::DomainMismatch)
    }
}

/// Columns of a cone LP: one per generator, one per unit indicator, one free
/// column per lineality gamble.
struct ConeColumns {
    generators: Vec<VarId>,
    indicators: Vec<VarId>,
    lineality: Vec<VarId>,
}

impl ConeColumns {
    fn add(lp: &mut LpProblem, domain: &Domain, generators: usize, lineality: usize) -> Self {
        Self {
            generators: (0..generators)
                .map(|k| lp.add_var(format!("lambda{k}"), Sign::NonNegative))
                .collect(),
            indicators: (0..domain.size())
                .map(|w| lp.add_var(format!("nu{w}"), Sign::NonNegative))
                .collect(),
            lineality: (0..lineality)
                .map(|j| lp.add_var(format!("mu{j}"), Sign::Free))
                .collect(),
        }
    }

    /// Terms of `(Σλ g + Σν δ + Σμ v)(ω)`.
    fn terms(&self, omega: usize, generators: &[Gamble], lineality: &[Gamble]) -> Vec<(VarId, Rational)> {
        let mut terms = Vec::new();
        for (v, g) in self.generators.iter().zip(generators) {
            if !g.value(omega).is_zero() {
                terms.push((*v, g.value(omega).clone()));
            }
        }
        terms.push((self.indicators[omega], Rational::one()));
        for (v, g) in self.lineality.iter().zip(lineality) {
            if !g.value(omega).is_zero() {
                terms.push((*v, g.value(omega).clone()));
            }
        }
        terms
    }

    fn normalisation(&self) -> Vec<(VarId, Rational)> {
        self.generators
            .iter()
            .chain(&self.indicators)
            .map(|v| (*v, Rational::one()))
            .collect()
    }

    fn read(ids: &[VarId], x: &[Rational]) -> Vec<Rational> {
        ids.iter().map(|v| x[v.index()].clone()).collect()
    }
}

/// Decides whether `assessment` avoids non-positivity relative to the
/// subspace spanned by `lineality`: no normalised nonnegative combination of
/// the assessment and the unit indicators, plus any lineality element, is
/// pointwise `≤ 0`.
pub fn avoids_nonpositivity(
    domain: &Domain,
    assessment: &[Gamble],
    lineality: &[Gamble],
) -> Result<Coherence, Error> {
    check_domains(domain, assessment)?;
    check_domains(domain, lineality)?;
    let mut lp = LpProblem::new();
    let cols = ConeColumns::add(&mut lp, domain, assessment.len(), lineality.len());
    for omega in 0..domain.size() {
        lp.add_le(cols.terms(omega, assessment, lineality), Rational::zero());
    }
    lp.add_eq(cols.normalisation(), Rational::one());
    let outcome = solve(&lp)?;
    let Some(x) = outcome.witness() else {
        return Ok(Coherence::Avoids);
    };
    let assessment_weights = ConeColumns::read(&cols.generators, x);
    let positive_weights = ConeColumns::read(&cols.indicators, x);
    let lineality_weights = ConeColumns::read(&cols.lineality, x);
    let combination = Gamble::combination(
        domain,
        assessment_weights
            .iter()
            .zip(assessment)
            .chain(lineality_weights.iter().zip(lineality)),
    )?
    .try_add(&Gamble::new(domain.clone(), positive_weights.clone())?)?;
    Ok(Coherence::Fails(NonPositiveCombination {
        assessment_weights,
        positive_weights,
        lineality_weights,
        combination,
    }))
}

/// Lower prevision value: a rational, or a marker when the supremum is not
/// finite (only possible for cones that do not avoid non-positivity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrevisionValue {
    Value(Rational),
    UnboundedAbove,
    UnboundedBelow,
}

impl PrevisionValue {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            PrevisionValue::Value(v) => Some(v),
            _ => None,
        }
    }

    fn negate(self) -> Self {
        match self {
            PrevisionValue::Value(v) => PrevisionValue::Value(-v),
            PrevisionValue::UnboundedAbove => PrevisionValue::UnboundedBelow,
            PrevisionValue::UnboundedBelow => PrevisionValue::UnboundedAbove,
        }
    }
}

impl fmt::Display for PrevisionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrevisionValue::Value(v) => write!(f, "{v}"),
            PrevisionValue::UnboundedAbove => f.write_str("+inf"),
            PrevisionValue::UnboundedBelow => f.write_str("-inf"),
        }
    }
}

/// `V + posi(L⁺₀ ∪ A)` on a finite domain. Immutable; the coherence verdict
/// is computed on first use and cached.
pub struct DesirCone {
    domain: Domain,
    lineality: Vec<Gamble>,
    generators: Vec<Gamble>,
    coherence: OnceBox<Coherence>,
}

impl Clone for DesirCone {
    fn clone(&self) -> Self {
        let coherence = OnceBox::new();
        if let Some(c) = self.coherence.get() {
            let _ = coherence.set(Box::new(c.clone()));
        }
        Self {
            domain: self.domain.clone(),
            lineality: self.lineality.clone(),
            generators: self.generators.clone(),
            coherence,
        }
    }
}

impl fmt::Debug for DesirCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DesirCone")
            .field("domain", &self.domain)
            .field("lineality", &self.lineality.len())
            .field("generators", &self.generators)
            .finish()
    }
}

impl DesirCone {
    pub fn new(
        domain: impl Into<Domain>,
        lineality: Vec<Gamble>,
        generators: Vec<Gamble>,
    ) -> Result<Self, Error> {
        let domain = domain.into();
        check_domains(&domain, &lineality)?;
        check_domains(&domain, &generators)?;
        let rows: Vec<Vec<Rational>> = lineality.iter().map(|g| g.values().to_vec()).collect();
        if !linalg::is_independent(&rows) {
            return Err(Error::DependentLineality);
        }
        Ok(Self {
            domain,
            lineality,
            generators,
            coherence: OnceBox::new(),
        })
    }

    /// The positive orthant alone.
    pub fn vacuous(domain: impl Into<Domain>) -> Self {
        Self {
            domain: domain.into(),
            lineality: Vec::new(),
            generators: Vec::new(),
            coherence: OnceBox::new(),
        }
    }

    /// Cone on `space` whose lineality is the kernel of the symmetrising
    /// projection.
    pub fn exchangeable(space: &SequenceSpace, generators: Vec<Gamble>) -> Result<Self, Error> {
        Self::new(space.clone(), kernel_basis(space), generators)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn lineality(&self) -> &[Gamble] {
        &self.lineality
    }

    pub fn generators(&self) -> &[Gamble] {
        &self.generators
    }

    pub fn coherence(&self) -> Result<&Coherence, Error> {
        self.coherence.get_or_try_init(|| {
            avoids_nonpositivity(&self.domain, &self.generators, &self.lineality).map(Box::new)
        })
    }

    pub fn is_coherent(&self) -> Result<bool, Error> {
        Ok(self.coherence()?.avoids())
    }

    pub fn ensure_coherent(&self) -> Result<(), Error> {
        match self.coherence()? {
            Coherence::Avoids => Ok(()),
            Coherence::Fails(w) => Err(Error::Incoherent(Box::new(w.clone()))),
        }
    }

    /// Membership in the natural extension.
    pub fn contains(&self, f: &Gamble) -> Result<bool, Error> {
        Ok(self.decompose(f)?.is_some())
    }

    /// A decomposition `f = Σλg + Σνδ + Σμv` with nonzero positive part, if
    /// `f` belongs to the natural extension.
    ///
    /// With lineality, the positive part must be nonzero, so the LP maximises
    /// the total positive weight `Σλ + Σν` and `f` is a member iff the optimum
    /// is positive. Without lineality this reduces to `f ≠ 0` plus
    /// feasibility of `f = Σλg + Σνδ`.
    pub fn decompose(&self, f: &Gamble) -> Result<Option<Decomposition>, Error> {
        self.ensure_coherent()?;
        if f.domain() != &self.domain {
            return Err(Error::DomainMismatch);
        }
        if f.is_zero() {
            return Ok(None);
        }
        let mut lp = LpProblem::new();
        let cols = ConeColumns::add(&mut lp, &self.domain, self.generators.len(), self.lineality.len());
        for omega in 0..self.domain.size() {
            lp.add_eq(cols.terms(omega, &self.generators, &self.lineality), f.value(omega).clone());
        }
        lp.set_objective(Direction::Maximize, cols.normalisation());
        let x: Vec<Rational> = match solve(&lp)? {
            LpOutcome::Bounded { value, witness } if value > Rational::zero() => witness,
            // a coherent cone bounds the positive weight, so this is not
            // expected; the point moved along the ray is still a decomposition
            LpOutcome::Unbounded { point, ray } => point.iter().zip(&ray).map(|(p, d)| p + d).collect(),
            _ => return Ok(None),
        };
        Ok(Some(Decomposition {
            generator_weights: ConeColumns::read(&cols.generators, &x),
            positive_weights: ConeColumns::read(&cols.indicators, &x),
            lineality_weights: ConeColumns::read(&cols.lineality, &x),
        }))
    }

    /// `sup{μ : f − μ ∈ cone}`. Does not require coherence; an incoherent
    /// cone yields an unbounded marker.
    pub fn lower_prevision(&self, f: &Gamble) -> Result<PrevisionValue, Error> {
        if f.domain() != &self.domain {
            return Err(Error::DomainMismatch);
        }
        let mut lp = LpProblem::new();
        let mu = lp.add_var("mu", Sign::Free);
        let cols = ConeColumns::add(&mut lp, &self.domain, self.generators.len(), self.lineality.len());
        for omega in 0..self.domain.size() {
            let mut terms = cols.terms(omega, &self.generators, &self.lineality);
            terms.push((mu, Rational::one()));
            lp.add_eq(terms, f.value(omega).clone());
        }
        lp.set_objective(Direction::Maximize, alloc::vec![(mu, Rational::one())]);
        Ok(match solve(&lp)? {
            LpOutcome::Bounded { value, .. } => PrevisionValue::Value(value),
            LpOutcome::Unbounded { .. } => PrevisionValue::UnboundedAbove,
            _ => PrevisionValue::UnboundedBelow,
        })
    }

    /// `−lower(−f)`.
    pub fn upper_prevision(&self, f: &Gamble) -> Result<PrevisionValue, Error> {
        Ok(self.lower_prevision(&f.neg())?.negate())
    }

    pub fn is_marginally_desirable(&self, f: &Gamble) -> Result<bool, Error> {
        self.ensure_coherent()?;
        Ok(self.lower_prevision(f)? == PrevisionValue::Value(Rational::zero()))
    }

    /// Membership in the cone updated on `event` (domain indices): `f` must
    /// vanish outside the event and belong to the natural extension.
    pub fn updated_member(&self, event: &[usize], f: &Gamble) -> Result<bool, Error> {
        if event.is_empty() {
            return Err(Error::EmptyEvent);
        }
        let size = self.domain.size();
        let mut inside = alloc::vec![false; size];
        for &i in event {
            if i >= size {
                return Err(Error::EventOutOfRange(i));
            }
            inside[i] = true;
        }
        if f.domain() != &self.domain {
            return Err(Error::DomainMismatch);
        }
        self.ensure_coherent()?;
        if f.values().iter().zip(&inside).any(|(v, &b)| !b && !v.is_zero()) {
            return Ok(false);
        }
        self.contains(f)
    }
}
