//! Exact arithmetic for differential polynomial rings `K[t; d]` and the
//! nonassociative algebras `S_f = K[t; d] / K[t; d] f`.

pub(crate) mod ansatz;
pub mod charp;
pub mod error;
pub mod expr;
pub mod field;
pub mod linalg;
pub mod nucleus;
pub mod ore;
pub mod petit;
pub mod plt;

pub use error::{Error, Result};
pub use field::{make_tower, BaseField, Element, FBasis, FieldTower, LayerRole, TowerBuilder};
pub use ore::{DivMod, OrePoly, OreRing};
