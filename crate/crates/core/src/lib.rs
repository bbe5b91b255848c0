//! Exact rank maps of finitely presented modules over rings with finite
//! spectra, exterior powers, and the well-founded topology on ordinals.

pub mod error;
pub mod exterior;
pub mod finspace;
pub mod instance;
pub mod linalg;
pub mod module;
pub mod ordinal;
pub mod ring;
pub mod verify;

pub use error::{Error, Result};
