use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Failure kinds found while validating a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ValidationKind {
    NonStandardSimplex,
    NotCovering,
    BadFaceIntersection,
    OriginMissing,
    BaseCellWithoutOrigin,
}

impl fmt::Display for ValidationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::NonStandardSimplex => "NON_STANDARD_SIMPLEX",
            Self::NotCovering => "NOT_COVERING",
            Self::BadFaceIntersection => "BAD_FACE_INTERSECTION",
            Self::OriginMissing => "ORIGIN_MISSING",
            Self::BaseCellWithoutOrigin => "BASE_CELL_WITHOUT_ORIGIN",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationIssue {
    pub kind: ValidationKind,
    pub detail: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("MALFORMED_INPUT: {0}")]
    MalformedInput(String),
    #[error("{kind}: {detail}")]
    Validation {
        kind: ValidationKind,
        detail: String,
    },
    #[error("NOT_ADJACENT: vertices {0} and {1} share no maximal cell")]
    NotAdjacent(usize, usize),
    #[error("UNKNOWN_VERTEX: {0}")]
    UnknownVertex(String),
    #[error("CONE_NOT_SMOOTH: {0}")]
    ConeNotSmooth(String),
    #[error("OVERRIDE_NOT_CONVEX: {0}")]
    OverrideNotConvex(String),
    #[error("OUTSIDE_TANGENT_WEDGE: {0}")]
    OutsideTangentWedge(String),
    #[error("CONSTANT_TERM_NOT_ONE")]
    ConstantTermNotOne,
    #[error("CONSTANT_TERM_NOT_ZERO")]
    ConstantTermNotZero,
    #[error("TRUNCATION_OVERFLOW: {0}")]
    TruncationOverflow(String),
    #[error("RANK_ZERO_Q: the mirror equation needs a nonzero element of Q")]
    RankZeroQ,
    #[error("VERTEX_NOT_INTERIOR: vertex {0} lies on the boundary of the polytope")]
    VertexNotInterior(usize),
    #[error("LEAF_CAP_EXCEEDED: a tree type would need more than {0} leaves")]
    LeafCapExceeded(usize),
    #[error("NON_INTEGRAL_COEFFICIENT: {0}")]
    NonIntegralCoefficient(String),
    #[error("EXPONENT_OVERFLOW: {0}")]
    ExponentOverflow(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code, used in CLI failure reports.
    pub fn code(&self) -> String {
        match self {
            Self::MalformedInput(_) => "MALFORMED_INPUT".into(),
            Self::Validation { kind, .. } => kind.to_string(),
            Self::NotAdjacent(..) => "NOT_ADJACENT".into(),
            Self::UnknownVertex(_) => "UNKNOWN_VERTEX".into(),
            Self::ConeNotSmooth(_) => "CONE_NOT_SMOOTH".into(),
            Self::OverrideNotConvex(_) => "OVERRIDE_NOT_CONVEX".into(),
            Self::OutsideTangentWedge(_) => "OUTSIDE_TANGENT_WEDGE".into(),
            Self::ConstantTermNotOne => "CONSTANT_TERM_NOT_ONE".into(),
            Self::ConstantTermNotZero => "CONSTANT_TERM_NOT_ZERO".into(),
            Self::TruncationOverflow(_) => "TRUNCATION_OVERFLOW".into(),
            Self::RankZeroQ => "RANK_ZERO_Q".into(),
            Self::VertexNotInterior(_) => "VERTEX_NOT_INTERIOR".into(),
            Self::LeafCapExceeded(_) => "LEAF_CAP_EXCEEDED".into(),
            Self::NonIntegralCoefficient(_) => "NON_INTEGRAL_COEFFICIENT".into(),
            Self::ExponentOverflow(_) => "EXPONENT_OVERFLOW".into(),
            Self::Internal(_) => "INTERNAL".into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
