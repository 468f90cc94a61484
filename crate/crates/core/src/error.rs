use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single failed feasibility condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `2 d_ii + sum_{j != i} d_ij != n_i * d(V_i)`.
    DegreeSum {
        class: usize,
        edge_endpoints: usize,
        required: usize,
    },
    /// `d_ii > n_i (n_i - 1) / 2`.
    WithinClassCapacity {
        class: usize,
        count: usize,
        capacity: usize,
    },
    /// `d_ij > n_i n_j` for `i < j`.
    CrossClassCapacity {
        first: usize,
        second: usize,
        count: usize,
        capacity: usize,
    },
    /// `d(V_i) > n - 1`: no simple graph on `n` vertices has that degree.
    DegreeBound {
        class: usize,
        degree: usize,
        vertices: usize,
    },
    /// The degrees add up to an odd number.
    OddDegreeTotal { total: usize },
}

impl Violation {
    /// Name of the condition this violation belongs to.
    pub fn condition(&self) -> &'static str {
        match self {
            Violation::DegreeSum { .. } => "degree feasibility",
            Violation::WithinClassCapacity { .. } | Violation::CrossClassCapacity { .. } => {
                "matrix feasibility"
            }
            Violation::DegreeBound { .. } | Violation::OddDegreeTotal { .. } => "graphicality",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::DegreeSum {
                class,
                edge_endpoints,
                required,
            } => write!(
                f,
                "degree feasibility fails for class {class}: 2*d_ii + sum_j d_ij = {edge_endpoints}, \
                 but n_i * d(V_i) = {required}"
            ),
            Violation::WithinClassCapacity {
                class,
                count,
                capacity,
            } => write!(
                f,
                "matrix feasibility fails for class {class}: d_ii = {count} exceeds n_i(n_i-1)/2 = {capacity}"
            ),
            Violation::CrossClassCapacity {
                first,
                second,
                count,
                capacity,
            } => write!(
                f,
                "matrix feasibility fails for classes ({first},{second}): d_ij = {count} exceeds n_i*n_j = {capacity}"
            ),
            Violation::DegreeBound {
                class,
                degree,
                vertices,
            } => write!(
                f,
                "graphicality fails for class {class}: degree {degree} needs more than {vertices} vertices"
            ),
            Violation::OddDegreeTotal { total } => {
                write!(f, "graphicality fails: the degrees add up to {total}, which is odd")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("infeasible instance: {}", join_violations(.0))]
    Infeasible(Vec<Violation>),

    #[error("graph does not match the instance's vertex set: {0}")]
    VertexSetMismatch(String),

    #[error("seed graph rejected: {0}")]
    InvalidSeed(String),

    #[error("graph is not a realization: {0}")]
    NotARealization(String),

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("no realization found by the matching reduction: {0}")]
    NoRealizationFound(String),

    #[error("instance has {vertices} vertices, above the enumeration cap of {cap}")]
    CapExceeded { vertices: usize, cap: usize },

    #[error("{location}: {message}")]
    Parse { location: String, message: String },

    #[error("unknown format `{0}`")]
    UnknownFormat(String),

    /// An algorithm reached a state its correctness argument rules out.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

fn join_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
