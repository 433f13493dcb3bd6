pub mod error;
pub mod frobmod;
pub mod generators;
pub mod gf;
pub mod langsteinberg;
pub mod linpoly;
pub mod matfrob;
pub mod scalar;
pub mod symfield;
pub mod tori;

pub use error::{Error, Result};
