//! Algebraic solutions of Painlevé III (D7), their large-index limit and the
//! associated Boutroux spectral curve.

pub mod bigfloat;
pub mod error;
pub mod laurent;
pub mod ohyama;
pub mod solution;
pub mod equilibrium;
pub mod quad;
pub mod boutroux;
pub mod levelset;
pub mod verify;
pub mod toy;
pub mod selftest;

pub use error::{Error, Result};
pub use laurent::{LaurentPoly, Rational};

pub type C = num_complex::Complex64;
