//! Classical propositional logic with the syntax stripped away.
//!
//! A proposition here is not a formula but a finite set of labelled leaves
//! together with a family of resolutions, closed under double
//! orthogonality; formulas merely compile into such set systems
//! ([`absprop::compile`]). A proof is a label-respecting relation between
//! two propositions, judged by resolution conditions rather than by
//! inference rules ([`morphism`]). On top of both sit three ways to compose
//! proofs into a category: against a universal stock of axioms, carrying
//! axioms and cuts inside each proof, or as linkings chased along
//! alternating paths ([`boolean`]).

pub mod absprop;
pub mod boolean;
pub mod dot;
pub mod error;
pub mod formula;
pub mod json;
pub mod morphism;

pub use error::{Error, Result};
