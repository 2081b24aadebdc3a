//! Shearlet group algebra, weighted box counting and parameter set families.

pub mod boxes;
pub mod density;
pub mod error;
pub mod group;
pub mod params;
pub mod quad;

pub use boxes::{box_contains, weighted_count, BoxSpec, CoverIndex};
pub use density::{analytic_density, estimate_density, AnalyticDensity, CenterSpec, DensityEstimate, Source};
pub use error::CoreError;
pub use group::{GroupElement, TildeElement, Vec2};
pub use params::{FamilyKind, FamilySpec, ParamSet, WeightedPoint, Window};
