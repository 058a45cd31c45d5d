//! Cut-and-project model sets in the octagonal scheme, with exact window
//! covariograms, autocorrelation and diffraction, and search for homometric
//! windows (different windows, indistinguishable model sets).
//!
//! Coordinates of lattice points are numbers `(p + q√2)/2`, so window
//! membership, covariogram values and autocorrelation coefficients are
//! computed exactly. Floats appear only in norms, Fourier transforms and
//! plots.

pub mod autocorr;
pub mod cutproject;
pub mod diffraction;
pub mod error;
pub mod homometry;
pub mod io;
pub mod quad;
pub mod run;
pub mod window;

pub use error::{Error, Result};
