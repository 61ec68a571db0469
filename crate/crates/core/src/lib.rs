//! Exact construction and verification of quantum linear spaces.

pub mod cohom;
pub mod error;
pub mod expr;
pub mod linmap;
pub mod poly;
pub mod presentation;
pub mod products;
pub mod report;
pub mod scalar;
pub mod subspace;
pub mod tensor;
pub mod ttp;
pub mod twist;

pub use error::{Error, Result};
pub use scalar::{FieldSpec, Scalar};
pub use tensor::{MultiIndex, Tensor, Vector};
pub use linmap::LinearMap;
pub use subspace::{Echelon, Subspace};
pub use presentation::{Kind, Presentation};
pub use report::CheckItem;
pub use cohom::{end_object, hom_object, HomObject};
pub use ttp::TwistingMap;
pub use twist::FactorizableTwist;
