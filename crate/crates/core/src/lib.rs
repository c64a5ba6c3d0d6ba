//! Tridiagonal supersymmetric factorization of the Morse oscillator.
//!
//! The shifted Morse Hamiltonian H = H̃ + α²D²/2 is tridiagonal in a Laguerre
//! basis. This crate computes that representation, factors it as H = A†A,
//! builds the partner H⁺ = AA†, evaluates the associated continuous dual Hahn
//! polynomial families (by recursion and closed form), extracts the mixed
//! discrete/continuous spectral measures of both operators, and verifies all
//! closed forms against independent brute-force oracles.
//!
//! Module map:
//! - [`specfun`]: gamma machinery, Pochhammer symbols, terminating
//!   hypergeometric sums, the Thomae transformation and its companions.
//! - [`morse`]: parameters, the Laguerre basis, tridiagonal matrix elements.
//! - [`susy`]: factorization coefficients, shift operators, the partner.
//! - [`orthopoly`]: recursion and closed-form polynomial evaluation, kernel
//!   polynomials, the kernel proportionality law.
//! - [`spectrum`]: bound states, the orthogonality measure, Gram checks.
//! - [`oracle`]: finite-difference Schrödinger solver and direct quadrature
//!   of matrix elements; imports none of the closed forms it validates.
//! - [`verify`]: the named check registry the CLI exposes.

pub mod error;
pub mod linalg;
pub mod morse;
pub mod operator;
pub mod oracle;
pub mod orthopoly;
pub mod quad;
pub mod specfun;
pub mod spectrum;
pub mod susy;
pub mod verify;

pub use error::{Error, Result};
pub use morse::MorseParams;
pub use operator::TridiagonalOperator;
