use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("tuple of length {got} does not match arity {expected}")]
    TupleLength { expected: usize, got: usize },
    #[error("sort index {sort} outside 1..={k}")]
    SortOutOfRange { sort: usize, k: usize },
    #[error("sort count must be positive")]
    ZeroSorts,
    #[error("arity {0} exceeds the supported maximum")]
    ArityTooLarge(usize),
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("sort vectors differ")]
    SortMismatch,
    #[error("sort counts differ: {0} vs {1}")]
    KMismatch(usize, usize),
    #[error("variable {0} is not dummy")]
    NotDummy(usize),
    #[error("variable index {0} out of range")]
    VarOutOfRange(usize),
    #[error("not a permutation")]
    NotAPermutation,
    #[error("operation needs a relation of arity at least {0}")]
    ArityTooSmall(usize),
    #[error("first variable is dummy")]
    FirstVarDummy,
    #[error("relation is not a key relation")]
    NotKey,
    #[error("working arity cap {cap} is below required arity {needed}")]
    CapTooSmall { cap: usize, needed: usize },
    #[error("enumeration needs {bits} table bits, above the budget of {budget}")]
    OverBudget { bits: usize, budget: usize },
    #[error("closure exceeded {budget} representatives")]
    ClosureTooLarge { budget: usize },
    #[error("membership undecided within working arity {arity_cap} and polymorphism arity {pol_cap}")]
    Undecided { arity_cap: usize, pol_cap: usize },
    #[error("set is not closed")]
    NotClosed,
    #[error("duplicate fingerprint")]
    DuplicateFingerprint,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
