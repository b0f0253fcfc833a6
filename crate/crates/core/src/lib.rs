//! Spectral solver and verification toolkit for field-only combined boundary
//! integral equations of electromagnetic scattering from a perfectly
//! conducting unit sphere.
//!
//! Every operator that appears in the formulations is diagonal, or a short
//! composition of diagonal operators and multiplications by the Cartesian
//! coordinates, once surface functions are expanded in the orthonormal
//! spherical harmonic basis. The crate is organised bottom-up:
//!
//! * [`specfun`]: spherical Bessel/Hankel functions, associated Legendre
//!   functions and spherical harmonics.
//! * [`harmonics`]: Gauss-Legendre quadrature on the sphere and the
//!   forward/inverse harmonic transforms.
//! * [`spectra`]: eigenvalues of the Helmholtz layer operators and of the
//!   combined operators, including the logarithmic-derivative sequence
//!   `s_l(k)` in three independent forms.
//! * [`lift`]: multiplication by `x1`, `x2`, `x3` in coefficient space and
//!   the normal compression `psi -> x.S[x psi]`.
//! * [`solver`]: the two field-only formulations, right-hand sides,
//!   diagonal solves and exterior evaluation.
//! * [`oracle`]: independent ground truth (singular quadrature, dense LU,
//!   manufactured multipole fields).
//! * [`verify`]: the invariant battery behind `fobie verify`.

pub mod error;
pub mod export;
pub mod harmonics;
pub mod lift;
pub mod oracle;
pub mod solver;
pub mod specfun;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
pub use harmonics::{CoeffField, HarmonicIndex, QuadratureGrid, VectorCoeffField};
pub use num_complex::Complex64;
pub use spectra::{DiagonalOperator, OperatorKind, WaveContext};
