//! Continued fractions of hyperquadratic power series over `F_p(T)`.

pub mod cf;
pub mod conjecture;
pub mod error;
pub mod ff;
pub mod hyperquadratic;
pub mod io;
pub mod mkaouar;
pub mod parse;
pub mod poly;
pub mod series;
pub mod sweep;

pub use error::{Error, Result};
