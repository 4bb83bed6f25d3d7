pub mod builders;
pub mod complex;
pub mod error;
pub mod exterior;
#[doc(hidden)]
pub mod fuzz_support;
pub mod hilbert;
pub mod homology;
pub mod linalg;
pub mod pfaffian;
pub mod poly;
pub mod report;
pub(crate) mod ser;

pub use error::{Error, Result};
