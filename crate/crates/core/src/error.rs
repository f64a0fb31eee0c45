use alloc::boxed::Box;
use alloc::string::String;

use thiserror::Error;

use crate::cone::NonPositiveCombination;
use crate::lp::LpError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a possibility space needs at least one category")]
    NoCategories,
    #[error("duplicate category label {0:?}")]
    DuplicateCategory(String),
    #[error("sequence length must be at least 1")]
    ZeroLength,
    #[error("possibility space is too large to enumerate")]
    SpaceTooLarge,
    #[error("symbol #{symbol} is outside the {categories} declared categories")]
    UnknownSymbol { symbol: usize, categories: usize },
    #[error("expected {expected} values, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("gambles live on different domains")]
    DomainMismatch,
    #[error("operation needs a gamble on a {0}")]
    WrongDomainKind(&'static str),
    #[error("permutation is not a bijection on 1..={0}")]
    NotAPermutation(usize),
    #[error("target size {target} is smaller than source size {source_size}")]
    CannotShrink { source_size: usize, target: usize },
    #[error("observed {observed} plus remaining {remaining} does not equal {total}")]
    SizeMismatch {
        observed: usize,
        remaining: usize,
        total: usize,
    },
    #[error("conditioning event is empty")]
    EmptyEvent,
    #[error("event index {0} is outside the domain")]
    EventOutOfRange(usize),
    #[error("lineality gambles are linearly dependent")]
    DependentLineality,
    #[error("assessment incurs non-positivity; its natural extension is the whole space")]
    Incoherent(Box<NonPositiveCombination>),
    #[error("frequency vector must be nonnegative and sum to one")]
    NotAFrequency,
    #[error("degree cap {cap} is below polynomial degree {degree}")]
    CapBelowDegree { cap: usize, degree: usize },
    #[error(transparent)]
    Lp(#[from] LpError),
}
