//! Period polynomials of level-1 modular forms and their analogues built
//! from derivatives of completed L-functions.

pub mod arith;
pub mod cli;
pub mod eichler;
pub mod error;
pub mod forms;
pub mod lfun;
pub mod periodpoly;
pub mod quad;
pub mod roots;

pub use error::{Error, Result};
