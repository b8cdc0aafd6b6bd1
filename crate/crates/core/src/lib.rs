pub mod correlation;
pub mod dataset;
pub mod error;
pub mod forest;
pub mod graph;
pub mod measures;
pub mod pca;
pub mod pipeline;
pub mod seed;
pub mod selection;
pub mod synthetic;

pub use error::{Error, Result};
