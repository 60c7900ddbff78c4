//! Cayley-Klein plane geometry in homogeneous coordinates.

pub mod cayley_klein;
pub mod circles;
pub mod error;
pub mod miquel;
pub mod projective;
pub mod quadsets;
pub mod tolerance;

pub use cayley_klein::*;
pub use circles::*;
pub use error::{GeometryError, Result};
pub use miquel::*;
pub use projective::*;
pub use quadsets::*;
pub use tolerance::Tolerance;
