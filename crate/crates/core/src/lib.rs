//! Life-cycle footprint of enterprise AI portfolios.
//!
//! Per-inference energy and impacts for 192 use-case clusters, annual
//! portfolio aggregation, 2030 scenario projections and an efficiency
//! offset solver.
//!
//! ```
//! use ai_footprint::{portfolio, Model};
//!
//! let model = Model::default();
//! let fp = portfolio::aggregate_portfolio(&model, &Default::default()).unwrap();
//! assert!(fp.total.final_energy > 1e6);
//! ```

pub mod data;
pub mod error;
pub mod impact;
pub mod lca;
pub mod model;
pub mod portfolio;
pub mod projection;
pub mod report;
pub mod usecase;

pub use error::{Error, Result};
pub use impact::{Criterion, ImpactVector};
pub use model::{Model, ModelOptions};
