//! Random walks on a finite triangular lattice with zig-zag absorbing
//! boundaries and a single interior source.
//!
//! Three independent engines compute the expected number of visits to each
//! interior site and the probability of absorption at each boundary site:
//!
//! - [`closed_form`]: exact separation-of-variables solution (odd `m >= 3`);
//! - [`linear_oracle`]: direct solve of the field equations (any lattice);
//! - [`montecarlo`]: seeded, parallel-deterministic walk simulation.

pub mod closed_form;
pub mod error;
pub mod lattice;
pub mod linear_oracle;
pub mod montecarlo;
pub mod numeric;
pub mod solution;

pub use closed_form::{solve_exact, ClosedForm};
pub use error::{Error, Result};
pub use lattice::{LatticeSpec, Parity, Site, SiteClass, SourceSpec};
pub use linear_oracle::solve_oracle;
pub use montecarlo::{simulate, zscores, McEstimate, WalkConfig};
pub use solution::{absorption_map, AbsorptionMap, FieldSolution, Method};
