use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator image {0} is not a constant")]
    NonConstantAlpha(String),
    #[error("the kernel of the derivation is larger than the designated constant field ({0})")]
    ConstantFieldTooLarge(String),
    #[error("unsupported tower: {0}")]
    UnsupportedCombination(String),
    #[error("operation needs [K:F] finite but the tower has infinite degree over its constants")]
    InfiniteDimension,
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus must be a nonzero polynomial")]
    ZeroModulus,
    #[error("zero polynomial has no bound")]
    ZeroPolynomial,
    #[error("element does not belong to this algebra")]
    AlgebraMismatch,
    #[error("operation needs a monic polynomial")]
    NotMonic,
    #[error("subspace is not closed under multiplication")]
    NotClosed,
    #[error("an ansatz configuration is required over a characteristic-0 tower")]
    AnsatzRequired,
    #[error("ansatz denominator must be nonzero")]
    InconsistentAnsatz,
    #[error("operation is only defined in characteristic p")]
    WrongCharacteristic,
    #[error("d0 = {0} is not a constant")]
    NonConstantD0(String),
    #[error("degrees differ ({0} vs {1}); similar polynomials have equal degree")]
    DegreeMismatch(usize, usize),
    #[error("no cyclic vector found after the deterministic sweep")]
    NoCyclicVectorFound,
    #[error("hypothesis not satisfied: {0}")]
    UnsatisfiedHypothesis(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("syntax error at {line}:{col}: expected {expected}")]
    SyntaxError {
        line: usize,
        col: usize,
        expected: String,
    },
    #[error("type error: {0}")]
    TypeError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
