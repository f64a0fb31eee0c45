//! Gambles: exact rational-valued maps on a finite domain.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::rational::Rational;
use crate::space::Domain;

/// A total map from a finite domain to the rationals, stored densely in the
/// domain's enumeration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gamble {
    domain: Domain,
    values: Vec<Rational>,
}

impl Gamble {
    pub fn new(domain: impl Into<Domain>, values: Vec<Rational>) -> Result<Self, Error> {
        let domain = domain.into();
        if values.len() != domain.size() {
            return Err(Error::LengthMismatch {
                expected: domain.size(),
                found: values.len(),
            });
        }
        Ok(Self { domain, values })
    }

    pub fn from_fn(domain: impl Into<Domain>, f: impl FnMut(usize) -> Rational) -> Self {
        let domain = domain.into();
        let values = (0..domain.size()).map(f).collect();
        Self { domain, values }
    }

    pub fn zero(domain: impl Into<Domain>) -> Self {
        Self::constant(domain, Rational::zero())
    }

    pub fn constant(domain: impl Into<Domain>, c: Rational) -> Self {
        let domain = domain.into();
        let values = vec![c; domain.size()];
        Self { domain, values }
    }

    /// `δ_ω`: one at `index`, zero elsewhere.
    pub fn indicator(domain: impl Into<Domain>, index: usize) -> Self {
        let domain = domain.into();
        let mut values = vec![Rational::zero(); domain.size()];
        values[index] = Rational::from_integer(1.into());
        Self { domain, values }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn value(&self, index: usize) -> &Rational {
        &self.values[index]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn check_same_domain(&self, other: &Gamble) -> Result<(), Error> {
        if self.domain == other.domain {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }

    pub fn map(&self, f: impl FnMut(&Rational) -> Rational) -> Gamble {
        Gamble {
            domain: self.domain.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn try_add(&self, other: &Gamble) -> Result<Gamble, Error> {
        self.check_same_domain(other)?;
        Ok(Gamble {
            domain: self.domain.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Gamble) -> Result<Gamble, Error> {
        self.check_same_domain(other)?;
        Ok(Gamble {
            domain: self.domain.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    /// Pointwise product, e.g. `I_B f`.
    pub fn try_mul(&self, other: &Gamble) -> Result<Gamble, Error> {
        self.check_same_domain(other)?;
        Ok(Gamble {
            domain: self.domain.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Gamble {
        self.map(|v| v * c)
    }

    pub fn neg(&self) -> Gamble {
        self.map(|v| -v)
    }

    pub fn shift(&self, c: &Rational) -> Gamble {
        self.map(|v| v + c)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn min(&self) -> Rational {
        self.values.iter().min().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn max(&self) -> Rational {
        self.values.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    /// `f ≥ 0` pointwise.
    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    /// `f ≤ 0` pointwise.
    pub fn is_nonpositive(&self) -> bool {
        self.values.iter().all(|v| !v.is_positive())
    }

    /// `f > 0` in the order of gambles: `f ≥ 0` and `f ≠ 0`.
    pub fn is_positive(&self) -> bool {
        self.is_nonnegative() && !self.is_zero()
    }

    /// Linear combination `Σ weights_i · gambles_i` on `domain`.
    pub fn combination<'a>(
        domain: &Domain,
        terms: impl IntoIterator<Item = (&'a Rational, &'a Gamble)>,
    ) -> Result<Gamble, Error> {
        let mut values = vec![Rational::zero(); domain.size()];
        for (w, g) in terms {
            if g.domain != *domain {
                return Err(Error::DomainMismatch);
            }
            if w.is_zero() {
                continue;
            }
            for (acc, v) in values.iter_mut().zip(&g.values) {
                *acc += w * v;
            }
        }
        Ok(Gamble {
            domain: domain.clone(),
            values,
        })
    }
}
