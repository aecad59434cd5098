//! Co-semi-analytic functors at finite scale.
//!
//! A coefficient functor `A` on finite sets and injections determines the
//! contravariant functor `Ǎ(X) = Σ_n A_n ⊗_n Epi(X, (n])`. This crate
//! evaluates `Ǎ` from coefficients, recovers coefficients and
//! transformations from tabulated contravariant functors, checks the
//! conditions characterizing functors of this form, and composes them with
//! semi-analytic functors.

mod error;
mod uf;

pub mod action;
pub mod coeff;
pub mod cosan;
pub mod finset;
pub mod fixtures;
pub mod json;
pub mod random;
pub mod san;
pub mod tab;
pub mod verify;

pub use coeff::{InjCoeff, InjNat, SurCoeff, SurRule};
pub use cosan::CosanElem;
pub use error::{Error, Result};
pub use finset::{FinFun, FunKind};
pub use san::{Algebra, SanElem};
pub use tab::{CheckReport, Outcome, TabFunctor, TabNat};
