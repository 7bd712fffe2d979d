//! Exact symbolic computations for singular foliations defined by
//! polynomial vector fields vanishing at the origin.

pub mod cli;
pub mod error;
pub mod holonomy;
pub mod levinorm;
pub mod liealg;
pub mod linalg;
pub mod modalg;
pub mod poly;
pub mod vecfield;

pub use error::{Error, Result};
pub use poly::{Monomial, Polynomial, Rational};
pub use vecfield::PolyVectorField;
