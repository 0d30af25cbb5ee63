//! Hyperbolicity and geodesic defect of finite metric spaces, Vietoris–Rips filtrations,
//! discrete gradients that collapse them, and Z/2 persistence with apparent-pair accounting.
//!
//! The crate is organised bottom-up:
//!
//! - [`metric`]: metric spaces, tree metrics, hyperbolicity, geodesic defect.
//! - [`complex`]: simplices, Vietoris–Rips complexes, diameter-lexicographic filtrations.
//! - [`morse`]: discrete gradients, validation, merging, collapse certificates.
//! - [`gradients`]: cone, filtered-cone, generic, canonical, perturbed and apparent-pairs gradients.
//! - [`persistence`]: boundary-matrix reduction, Betti numbers, H1 surjectivity.
//! - [`datasets`]: fixture spaces and seeded generators.
//!
//! ```
//! use ripscollapse::datasets::counterexample_graph;
//! use ripscollapse::gradients::filtered_cone_gradient;
//! use ripscollapse::metric::{geodesic_defect, hyperbolicity};
//!
//! let x = counterexample_graph();
//! assert_eq!(hyperbolicity(&x).delta.to_string(), "1");
//! assert_eq!(geodesic_defect(&x).nu.to_string(), "5");
//! let cone = filtered_cone_gradient(&x, 0, 1_000_000).unwrap();
//! println!("{} intervals", cone.gradient.len());
//! ```

pub mod complex;
pub mod datasets;
pub mod gradients;
pub mod metric;
pub mod morse;
pub mod persistence;
pub mod value;

pub use value::{DistanceValue, NumericMode};
