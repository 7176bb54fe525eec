//! Exact, desk-scale structure functions over finite description systems.
//!
//! A [`DescriptionSystem`] replaces the universal prefix machine with finite
//! prefix-free program tables, so `K(x)`, `K(S)` and `K(x|S)` are exact
//! lookups and the structure functions `h_x`, `λ_x`, `β_x` can be computed
//! without approximation. The remaining modules turn the constructive
//! arguments around these functions into runnable algorithms.

pub mod codec;
pub mod descsys;
pub mod error;
pub mod experiments;
pub mod export;
pub mod logbits;
pub mod modelclasses;
pub mod predict;
pub mod search;
pub mod structfn;
pub mod synth;
pub mod unistat;

pub use codec::BitString;
pub use descsys::{DescriptionSystem, FiniteSet};
pub use error::{Error, Result};
pub use logbits::LogBits;
pub use structfn::{profile, ModelRecord, StructureProfile};
