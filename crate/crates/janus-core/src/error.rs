//! Error surface shared by every numerical routine in the crate.
//!
//! All failure modes are enumerated here so callers (and the CLI exit-code
//! mapping) can match on them without string inspection.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, JanusError>;

/// Everything that can go wrong while evaluating a Janus state.
#[derive(Debug, Error)]
pub enum JanusError {
    /// The weighted superposition has (numerically) zero norm and cannot be
    /// normalized. `form` is the value of |χ|² + |η|² + 2Re[η*χ⟨ζ|ξ⟩].
    #[error("degenerate state: squared norm {form:.3e} is not positive")]
    DegenerateState { form: f64 },

    /// Moment order k exceeds the supported cap.
    #[error("moment order {k} exceeds the supported cap {cap}")]
    OrderTooLarge { k: u32, cap: u32 },

    /// g⁽ᵏ⁾(0) is undefined because ⟨n̂⟩ vanishes.
    #[error("g^(k)(0) undefined: mean photon number {n1:.3e} vanishes")]
    VacuumState { n1: f64 },

    /// The F_{p,q} power series failed to settle within the term budget.
    #[error("series for F_(p,q) did not converge in {max_terms} terms (|z| = {z_mag:.6})")]
    NoConvergence { max_terms: usize, z_mag: f64 },

    /// A truncated Fock vector leaks too much weight into its top band.
    #[error("Fock cutoff {cutoff} too small: tail weight {tail:.3e}")]
    CutoffTooSmall { cutoff: usize, tail: f64 },

    /// A Gaussian covariance form is (numerically) singular.
    #[error("singular covariance form: determinant {det:.3e}")]
    SingularSigma { det: f64 },

    /// A phase-space grid fails its normalization sanity check.
    #[error("grid too coarse: Wigner integral {integral:.6} deviates from 1")]
    GridTooCoarse { integral: f64 },

    /// A finite-difference step is too small to resolve the fidelity drop.
    #[error("step too small: fidelity deficit {deficit:.3e} is below resolution")]
    StepTooSmall { deficit: f64 },
}
