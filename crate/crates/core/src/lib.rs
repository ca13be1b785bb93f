//! Constructs κ-term solutions of finite graph equation systems over
//! pseudovarieties of the form `V∗D`.
//!
//! Given a solution `η` of `Σ_Γ` whose labels are κ-terms, the crate
//! computes the borders and constants of `η`, the superposition transforms
//! `θ_k`, `λ_k`, `ϱ_k`, and assembles a new labeling `η′ = τ₁·τ₂·τ₃`, then
//! checks it against every property the construction promises.

pub mod cli;
pub mod error;
pub mod files;
pub mod finsemi;
pub mod kterm;
pub mod reduce;
pub mod superpose;
pub mod verify;
pub mod wordkit;

pub use error::{Error, Result};
pub use finsemi::{Delta, Element, FinSemigroup, GeneratorMap};
pub use kterm::{Factor, KTerm};
pub use wordkit::{Alphabet, LeftInfWord, Letter, Word};
