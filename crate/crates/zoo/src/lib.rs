//! Equalizer model zoo: declarative architecture descriptions, the
//! catalog of published layer stacks for both receiver configurations,
//! a builder producing executable networks, and the analytic
//! parameter/FLOP accounting that both share.

pub mod arch;
pub mod build;
pub mod catalog;
pub mod data;
pub mod error;
pub mod flops;

pub use arch::{ArchSpec, InputLayout, LayerSpec};
pub use build::build;
pub use catalog::{catalog, catalog_desk, default_mbar, default_mbar_desk, CATALOG_NAMES};
pub use error::ZooError;
pub use flops::{model_cost, CostModel, LayerCost, ModelCost};
