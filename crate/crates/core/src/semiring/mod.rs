//! Contexts (number systems), their elements, and finite test carriers.

mod context;
mod element;
mod monoid;

pub use context::{Context, ContextKind};
pub use element::{Cancellativity, Element, OpKind, Payload, TropValue};
pub use monoid::FiniteMonoid;
