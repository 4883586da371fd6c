#![allow(clippy::needless_range_loop)]

pub mod composer;
pub mod error;
pub mod factorizer;
pub mod graph;
pub mod leibniz;
pub mod linalg;
pub mod poisson;
pub mod poly;
pub mod scalar;
pub mod series;

pub use error::{Error, ParseError, Result};
pub use graph::{CanonicalForm, KGraph, LGraph, Label, TripleMode};
pub use scalar::Scalar;
pub use series::{Convention, GraphSum, WeightKey, WeightTable};

/// Exact rational coefficients, the default scalar.
pub type Rational = num_rational::BigRational;
