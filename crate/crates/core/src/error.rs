use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Index-slot errors from [`crate::tensor::TensorValue`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TensorError {
    /// Contraction slots missing, equal, of the wrong variance, or of unequal extent.
    SlotMismatch { upper_slot: usize, lower_slot: usize },
    ShapeMismatch { expected: usize, found: usize },
}

impl fmt::Display for TensorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SlotMismatch {
                upper_slot,
                lower_slot,
            } => write!(
                f,
                "cannot contract upper slot {upper_slot} with lower slot {lower_slot}"
            ),
            Self::ShapeMismatch { expected, found } => {
                write!(f, "shape mismatch: expected {expected}, found {found}")
            }
        }
    }
}

impl core::error::Error for TensorError {}

/// Everything that can go wrong in the core crate.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    Tensor(TensorError),
    /// A linear system with no unknowns.
    DegenerateSystem,
    /// `|det g| <= 1e-10`; `point` is empty when no point is attached.
    NearSingularMetric { point: Vec<f64>, det: f64 },
    DimensionMismatch { expected: usize, found: usize },
    DomainEmpty,
    PointOutsideDomain { point: Vec<f64> },
    UnknownCatalogName(String),
    /// A seeded construction stayed degenerate after the retry budget.
    DegenerateConstruction { name: String, attempts: usize },
    /// The three torsion formulas disagree: an implementation bug.
    TorsionFormulaMismatch { residual: f64 },
    /// The two Nijenhuis computations (or the torsion relation) disagree.
    NijenhuisFormulaMismatch { residual: f64 },
    UnsupportedDimension { n: usize },
    /// Exact integer elimination overflowed `i128`.
    ExactArithmeticOverflow,
    /// Numeric and exact null-space dimensions differ.
    RankDisagreement { numeric: usize, exact: usize },
    KindMismatch { expected_product: i8, found_product: i8 },
    TheoremViolation { theorem: &'static str, detail: String },
    /// The manifold fails its own structure axioms.
    InvalidStructure { manifold: String },
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Tensor(e) => e.fmt(f),
            Self::DegenerateSystem => f.write_str("linear system has no unknowns"),
            Self::NearSingularMetric { point, det } if point.is_empty() => {
                write!(f, "metric is near-singular (det = {det:e})")
            }
            Self::NearSingularMetric { point, det } => {
                write!(f, "metric is near-singular at {point:?} (det = {det:e})")
            }
            Self::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Self::DomainEmpty => f.write_str("coordinate domain is empty"),
            Self::PointOutsideDomain { point } => {
                write!(f, "point {point:?} is not strictly inside the domain")
            }
            Self::UnknownCatalogName(name) => write!(f, "unknown catalog entry `{name}`"),
            Self::DegenerateConstruction { name, attempts } => write!(
                f,
                "`{name}`: metric stayed degenerate after {attempts} attempts"
            ),
            Self::TorsionFormulaMismatch { residual } => write!(
                f,
                "torsion formulas disagree (residual {residual:e}); this is a bug"
            ),
            Self::NijenhuisFormulaMismatch { residual } => write!(
                f,
                "Nijenhuis computations disagree (residual {residual:e}); this is a bug"
            ),
            Self::UnsupportedDimension { n } => {
                write!(f, "unsupported half-dimension n = {n} (expected 1..=3)")
            }
            Self::ExactArithmeticOverflow => f.write_str("exact integer elimination overflowed"),
            Self::RankDisagreement { numeric, exact } => write!(
                f,
                "null-space dimension {numeric} (numeric) disagrees with {exact} (exact)"
            ),
            Self::KindMismatch {
                expected_product,
                found_product,
            } => write!(
                f,
                "theorem requires alpha*epsilon = {expected_product}, manifold has {found_product}"
            ),
            Self::TheoremViolation { theorem, detail } => {
                write!(f, "theorem `{theorem}` violated: {detail}")
            }
            Self::InvalidStructure { manifold } => {
                write!(f, "`{manifold}` does not satisfy the (alpha, epsilon)-structure axioms")
            }
            Self::InvalidArgument(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for Error {}

impl From<TensorError> for Error {
    fn from(e: TensorError) -> Self {
        Error::Tensor(e)
    }
}

impl Error {
    /// True for failures that indicate a bug rather than bad input or a
    /// mathematical verdict.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Self::TorsionFormulaMismatch { .. }
                | Self::NijenhuisFormulaMismatch { .. }
                | Self::RankDisagreement { .. }
                | Self::TheoremViolation { .. }
                | Self::ExactArithmeticOverflow
        )
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
