use core::fmt;

/// Errors raised by domain validation, operator construction and filtering.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    EmptyMesh,
    FaceIndexOutOfRange { face: usize, index: usize, vertex_count: usize },
    DegenerateFace { face: usize, area: f64 },
    IsolatedVertex { vertex: usize },
    NonManifoldEdge { a: usize, b: usize, faces: usize },
    NonFiniteValue { index: usize },
    ShapeMismatch { expected: usize, found: usize },
    ChannelMismatch { expected: usize, found: usize },
    NonUnitVector { index: usize, norm: f64 },
    InvalidParameter(&'static str),
    NotPositiveDefinite { pivot: usize },
    OracleTooLarge { elements: usize, limit: usize },
    ConnectivityMismatch,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyMesh => write!(f, "mesh has no faces"),
            Error::FaceIndexOutOfRange { face, index, vertex_count } => write!(
                f,
                "face {face} references vertex {index}, but the mesh has {vertex_count} vertices"
            ),
            Error::DegenerateFace { face, area } => {
                write!(f, "face {face} is degenerate (area {area:e})")
            }
            Error::IsolatedVertex { vertex } => {
                write!(f, "vertex {vertex} is not referenced by any face")
            }
            Error::NonManifoldEdge { a, b, faces } => {
                write!(f, "edge ({a}, {b}) is shared by {faces} faces")
            }
            Error::NonFiniteValue { index } => write!(f, "non-finite value at index {index}"),
            Error::ShapeMismatch { expected, found } => {
                write!(f, "element count mismatch: expected {expected}, found {found}")
            }
            Error::ChannelMismatch { expected, found } => {
                write!(f, "channel count mismatch: expected {expected}, found {found}")
            }
            Error::NonUnitVector { index, norm } => {
                write!(f, "vector {index} has norm {norm}, expected unit length")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::NotPositiveDefinite { pivot } => {
                write!(f, "matrix is not positive definite (pivot {pivot})")
            }
            Error::OracleTooLarge { elements, limit } => write!(
                f,
                "dense oracle refused: {elements} elements exceeds the limit of {limit}"
            ),
            Error::ConnectivityMismatch => write!(f, "meshes have different connectivity"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
