//! Finite metric spaces, tree metrics, hyperbolicity and geodesic defect.

mod defect;
mod hyperbolicity;
mod io;
mod space;
mod tree;

pub use defect::{geodesic_defect, is_nu_geodesic, DefectReport, NuGeodesicCheck};
pub use hyperbolicity::{four_point_excess, hyperbolicity, HyperbolicityReport};
pub use io::{format_lower_triangular, format_tree, load_metric, parse_tree, MatrixFormat};
pub(crate) use io::default_names;
pub use space::{FiniteMetricSpace, LoadOptions};
pub use tree::{compatible_order, is_compatible_order, tree_metric, TreeEdge, WeightedTree};

use crate::value::ParseValueError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("empty input")]
    Empty,
    #[error("distance matrix has {found} entries, expected {expected}")]
    Shape { expected: usize, found: usize },
    #[error("nonzero diagonal entry at point {point}")]
    Diagonal { point: String },
    #[error("negative distance between {a} and {b}")]
    Negative { a: String, b: String },
    #[error("asymmetric distances between {a} and {b}")]
    Asymmetric { a: String, b: String },
    #[error("distinct points {a} and {b} have zero distance (pseudo-metric input)")]
    Duplicate { a: String, b: String },
    #[error("triangle inequality violated for ({a},{b},{c}): d({a},{c}) > d({a},{b}) + d({b},{c})")]
    Triangle { a: String, b: String, c: String },
    #[error("invalid tree: {0}")]
    Tree(String),
}

impl MetricError {
    pub(crate) fn parse(line: usize, column: usize, err: ParseValueError) -> Self {
        MetricError::Parse { line, column, message: err.to_string() }
    }
}
