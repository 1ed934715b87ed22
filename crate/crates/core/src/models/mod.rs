//! Manifold-valued approximation schemes built on tangent-space pullbacks.

pub mod io;
pub mod multi;
pub mod rmls;
pub mod single;
pub mod wellposed;
pub mod weights;

pub use multi::{fit_submodels, mtsm_fit, mtsm_fit_with_anchors, MtsmConfig, MtsmFit, MtsmModel, MtsmTrace, SubmodelReport};
pub use rmls::{rmls_eval, rmls_weights, RmlsConfig};
pub use single::{stsm_fit, AnchorChoice, AnchorSubmodel};
pub use wellposed::{validate_wellposedness, SubmodelDiagnostics, WellposednessReport};
pub use weights::{cutoff_h, partition_weights, wendland, PartitionWeights};
