//! Dimensions of secant varieties of Grassmannians in their Plücker
//! embedding, computed with Terracini's lemma from random tangent spaces.
//!
//! The main entry points are [`scan::classify_cell`] for one `(k, n, s)`
//! cell and [`scan::scan_range`] for a sweep. Ranks are computed either
//! exactly over a prime field, where reaching the expected dimension is a
//! proof, or in floating point with an SVD cutoff.
//!
//! ```
//! use secant::rank::RankBackendConfig;
//! use secant::scan::{classify_cell, CellStatus};
//!
//! let r = classify_cell(2, 6, 3, &RankBackendConfig::exact(1)).unwrap();
//! assert_eq!((r.computed_dim, r.defect), (33, 1));
//! assert_eq!(r.status, CellStatus::OracleConfirmedDefective);
//! ```

pub mod cli;
pub mod combin;
pub mod error;
pub mod field;
pub mod golden;
pub mod matrix;
pub mod plucker;
pub mod rank;
pub mod scan;
pub mod table;
pub mod terracini;
pub mod veronese;

pub use error::{Error, Result};
