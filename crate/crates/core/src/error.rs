use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operand has indeterminate valuation")]
    IndeterminateValuation,
    #[error("element is not invertible at the available precision")]
    NotInvertible,
    #[error("positive valuation required")]
    PositiveValuationRequired,
    #[error("divergent substitution: {0}")]
    DivergentSubstitution(String),
    #[error("series is not a unit")]
    NotUnit,
    #[error("invalid lambda: {0}")]
    InvalidLambda(String),
    #[error("missing area ledger entry for {0}")]
    MissingAreaLedger(String),
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("leading term mismatch: {0}")]
    LeadingTermMismatch(String),
    #[error("area relation violated: {0}")]
    AreaRelationViolation(String),
    #[error("no solution inside the degree/precision window")]
    Unsolvable,
    #[error("independence not certified: {0}")]
    IndependenceUncertified(String),
    #[error("Newton polygon degenerate: {0}")]
    PolygonDegenerate(String),
    #[error("Hensel condition failed: {0}")]
    HenselConditionFailed(String),
    #[error("precision exhausted")]
    PrecisionExhausted,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
