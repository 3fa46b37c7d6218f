//! Photon statistics, Wigner functions, and quantum Fisher information of
//! displaced Janus states: two-faced superpositions
//!
//! |Ψ⟩ ∝ χ|ξ, α⟩ + η|ζ, α⟩
//!
//! of squeezed coherent states that share one displacement α but look in
//! two squeezing directions ξ = r e^{iθ} and ζ = s e^{iφ}.
//!
//! Everything observable is computed twice, by independent routes:
//!
//! - closed forms built on generalized squeezing functions F_{p,q}(z) and
//!   their exact polynomial cores ([`gsp`], [`moments`], [`wigner`],
//!   [`metrology`]);
//! - a brute-force truncated Fock-space oracle ([`fock_oracle`]).
//!
//! The [`cli`] module wires both into the `janus` binary.

pub mod cli;
pub mod error;
pub mod fock_oracle;
pub mod gsp;
pub mod metrology;
pub mod moments;
pub mod params;
pub mod wigner;

pub use error::{JanusError, Result};
pub use params::{JanusSpec, SqueezeParam};
