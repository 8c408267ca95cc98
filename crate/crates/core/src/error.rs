use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure classes; the command-line front end maps each to an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Domain,
    Usage,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("substitution leaves the chart: a denominator vanishes identically")]
    SubstitutionPole,
    #[error("operands live over different variable sets")]
    VariableMismatch,
    #[error("comparison order {upto} exceeds series order {order}")]
    OrderTooLarge { upto: usize, order: usize },
    #[error("matrix does not preserve the symplectic form")]
    NotSymplectic,
    #[error("symplectic form is singular or not antisymmetric")]
    DegenerateForm,
    #[error("variable `{0}` occurs in both factors")]
    NameCollision(String),
    #[error("exterior derivative of a top-degree form")]
    DegreeTooHigh,
    #[error("function is not invariant under (x, y) -> (-x, -y)")]
    NotEven,
    #[error("matrix has zero determinant")]
    DegenerateMatrix,
    #[error("no transition declared from chart `{from}` to chart `{to}`")]
    MissingTransition { from: String, to: String },
    #[error("unknown chart `{0}`")]
    UnknownChart(String),
    #[error("operands live on different charts")]
    ChartMismatch,
    #[error("not a permutation of 1..={0}")]
    BadPermutation(usize),
    #[error("operand is not invariant under permutation of the factors")]
    NotInvariant,
    #[error("point is outside the open cell: {0}")]
    InvalidPoint(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("the series parameter h may not appear in a denominator")]
    HInDenominator,
    #[error("h-degree {degree} exceeds truncation order {order}")]
    OrderOverflow { degree: usize, order: usize },
    #[error("atlas file line {line}: {message}")]
    AtlasFormat { line: usize, message: String },
    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            Syntax { .. } | UnknownIdentifier { .. } | HInDenominator | OrderOverflow { .. } | AtlasFormat { .. } => {
                ErrorClass::Parse
            }
            UnknownSuite(_) | Usage(_) => ErrorClass::Usage,
            _ => ErrorClass::Domain,
        }
    }
}
