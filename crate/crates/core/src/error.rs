use thiserror::Error;

/// Errors raised by the algebra, the field machinery and the pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected a pure grade-{expected} multivector (off-grade norm {leak:e})")]
    WrongGrade { expected: u8, leak: f64 },

    #[error("grade {0} is outside 0..=4")]
    InvalidGrade(u8),

    #[error("even element expected, odd part has norm {0:e}")]
    NotEven(f64),

    #[error("spinor is singular: sigma^2 + omega^2 = {norm_sq:e} is below the tolerance")]
    SingularSpinor { norm_sq: f64 },

    #[error("field is null: |F^2| = {modulus:e} is below the tolerance")]
    NullField { modulus: f64 },

    #[error("bivector does not square to -1 (defect {0:e})")]
    NotUnitBivector(f64),

    #[error("rotor denominator vanishes: |1 - z| = {0:e}")]
    DegenerateDenominator(f64),

    #[error("bilinears do not come from a nonsingular spinor: {0}")]
    SingularInput(String),

    #[error("matrix column {column} should vanish but has norm {norm:e}")]
    NonzeroColumn { column: usize, norm: f64 },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("point {point:?} is not a node of the lattice")]
    OutOfDomain { point: [f64; 4] },

    #[error("stencil of radius {radius} does not fit: {reason}")]
    StencilOutOfBounds { radius: usize, reason: String },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

/// Failures of the field-expression parser. Positions are byte offsets.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("unknown identifier `{name}` at {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    #[error("operand at {pos} must be scalar: {context}")]
    NonScalarOperand { pos: usize, context: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
