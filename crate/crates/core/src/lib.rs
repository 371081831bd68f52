//! Exact arithmetic in commutative (semi)rings whose shape can change mid-computation.
//!
//! The central idea: operations that are only partially defined (subtraction in N,
//! division in Z) become total by *widening the number system* instead of failing.
//! Division by a non-unit moves into a localization, subtraction with no answer
//! moves into a Grothendieck (difference-pair) context, and inverting something
//! that multiplies two distinct elements to the same thing collapses the system
//! toward the zero ring. All of these are ordinary values here, not errors.
//!
//! The crate is `no_std` + `alloc`; every computation is exact (big integers,
//! big rationals, explicit finite tables). The only floating-point code is the
//! display-only angle conversion in [`ratiogeom`].

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dualcalc;
pub mod eqsolve;
mod error;
pub mod polyfrac;
pub mod quantity;
pub mod ratiogeom;
pub mod semiring;
pub mod universal;

pub use error::{Error, Result};
