//! Parameter types for displaced Janus states.
//!
//! A displaced Janus state is the weighted superposition
//! |Ψ⟩ = χ|ξ, α⟩ + η|ζ, α⟩ of two squeezed coherent states that share the
//! displacement α but carry distinct squeezing parameters ξ = r e^{iθ} and
//! ζ = s e^{iφ}.  The kernel variable z = tanh r tanh s e^{i(θ−φ)} drives
//! every closed-form expression downstream, so it is minted here.

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{JanusError, Result};

/// One complex squeezing parameter ξ = r e^{iθ} with r ≥ 0 and θ ∈ [0, 2π).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezeParam {
    r: f64,
    theta: f64,
}

impl SqueezeParam {
    /// Builds ξ = r e^{iθ}, folding a negative magnitude into the phase
    /// (−r, θ) ↦ (r, θ + π) and reducing θ into [0, 2π).
    pub fn new(r: f64, theta: f64) -> Self {
        let (r, theta) = if r < 0.0 {
            (-r, theta + std::f64::consts::PI)
        } else {
            (r, theta)
        };
        Self {
            r,
            theta: reduce_angle(theta),
        }
    }

    /// Squeezing magnitude r ≥ 0.
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Squeezing phase θ ∈ [0, 2π).
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The complex parameter ξ = r e^{iθ}.
    pub fn xi(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }
}

/// Reduces an angle into [0, 2π).
pub fn reduce_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(std::f64::consts::TAU);
    if t >= std::f64::consts::TAU {
        0.0
    } else {
        t
    }
}

/// Kernel variable z = tanh r tanh s e^{i(θ−φ)} of the pair (ξ, ζ).
///
/// |z| < 1 for finite squeezing, which keeps every series and closed form on
/// the principal branch.
pub fn composite_z(xi: &SqueezeParam, zeta: &SqueezeParam) -> Complex64 {
    Complex64::from_polar(
        xi.r().tanh() * zeta.r().tanh(),
        xi.theta() - zeta.theta(),
    )
}

/// Displacement α from polar data, folding a negative magnitude into the
/// phase exactly as [`SqueezeParam::new`] does.
pub fn polar_displacement(mag: f64, phase: f64) -> Complex64 {
    if mag < 0.0 {
        Complex64::from_polar(-mag, phase + std::f64::consts::PI)
    } else {
        Complex64::from_polar(mag, phase)
    }
}

/// Full parameter set of a displaced Janus state χ|ξ, α⟩ + η|ζ, α⟩.
///
/// Serialized as a flat JSON object with keys `chi_re`, `chi_im`, `eta_re`,
/// `eta_im`, `r`, `theta`, `s`, `phi`, `alpha_re`, `alpha_im`; ingestion
/// rejects non-finite entries and the all-zero weight pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FlatSpec", into = "FlatSpec")]
pub struct JanusSpec {
    /// Weight of the |ξ, α⟩ component.
    pub chi: Complex64,
    /// Weight of the |ζ, α⟩ component.
    pub eta: Complex64,
    /// Squeezing of the first component.
    pub xi: SqueezeParam,
    /// Squeezing of the second component.
    pub zeta: SqueezeParam,
    /// Shared displacement.
    pub alpha: Complex64,
}

impl JanusSpec {
    /// Bare constructor; no validation beyond the parameter-type folds.
    pub fn new(
        chi: Complex64,
        eta: Complex64,
        xi: SqueezeParam,
        zeta: SqueezeParam,
        alpha: Complex64,
    ) -> Self {
        Self {
            chi,
            eta,
            xi,
            zeta,
            alpha,
        }
    }

    /// Single squeezed coherent state |ξ, α⟩ (χ = 1, η = 0, ζ = ξ).
    pub fn single(xi: SqueezeParam, alpha: Complex64) -> Self {
        Self::new(Complex64::ONE, Complex64::ZERO, xi, xi, alpha)
    }

    /// Antisymmetric Janus state (|r, α⟩ − |−r, α⟩)/√N with opposite real
    /// squeezings, returned unnormalized (χ = 1, η = −1).
    pub fn antisymmetric(r: f64, alpha: Complex64) -> Self {
        Self::new(
            Complex64::ONE,
            -Complex64::ONE,
            SqueezeParam::new(r, 0.0),
            SqueezeParam::new(r, std::f64::consts::PI),
            alpha,
        )
    }

    /// Squared norm |χ|² + |η|² + 2Re[χ η* ⟨ζ|ξ⟩*]; equals 1 for a
    /// normalized spec.  The overlap enters through m₀(ξ, ζ) = ⟨ζ|ξ⟩, which
    /// is displacement-independent because both components share α.
    pub fn norm_form(&self) -> f64 {
        let m0 = crate::moments::m0(&self.xi, &self.zeta);
        self.chi.norm_sqr() + self.eta.norm_sqr() + 2.0 * (self.chi * self.eta.conj() * m0).re
    }

    /// Rescales (χ, η) by a common positive factor so the state has unit
    /// norm.  Fails with [`JanusError::DegenerateState`] when the squared
    /// norm is not positive (e.g. η = −χ with ζ = ξ).
    pub fn normalized(&self) -> Result<Self> {
        let form = self.norm_form();
        if !(form > 1e-14) {
            return Err(JanusError::DegenerateState { form });
        }
        let scale = form.sqrt().recip();
        let mut out = *self;
        out.chi *= scale;
        out.eta *= scale;
        Ok(out)
    }

    /// Larger of the two squeezing magnitudes; sizing input for Fock
    /// cutoffs and phase-space extents.
    pub fn max_r(&self) -> f64 {
        self.xi.r().max(self.zeta.r())
    }

    /// Forces |χ|/|η| = ρ while preserving both weight phases (η gets unit
    /// magnitude).  A negative ρ folds its sign into the χ phase.
    pub fn set_weight_ratio(&mut self, rho: f64) {
        let (mag, flip) = if rho < 0.0 { (-rho, -1.0) } else { (rho, 1.0) };
        let chi_phase = Complex64::from_polar(1.0, self.chi.arg());
        let eta_phase = Complex64::from_polar(1.0, self.eta.arg());
        self.chi = flip * mag * chi_phase;
        self.eta = eta_phase;
    }
}

/// Normalizes the weights of `spec`; free-function form of
/// [`JanusSpec::normalized`].
pub fn normalize_weights(spec: &JanusSpec) -> Result<JanusSpec> {
    spec.normalized()
}

/// Flat serde image of [`JanusSpec`].
#[derive(Serialize, Deserialize)]
struct FlatSpec {
    chi_re: f64,
    chi_im: f64,
    eta_re: f64,
    eta_im: f64,
    r: f64,
    theta: f64,
    s: f64,
    phi: f64,
    alpha_re: f64,
    alpha_im: f64,
}

impl TryFrom<FlatSpec> for JanusSpec {
    type Error = String;

    fn try_from(f: FlatSpec) -> std::result::Result<Self, String> {
        let fields = [
            ("chi_re", f.chi_re),
            ("chi_im", f.chi_im),
            ("eta_re", f.eta_re),
            ("eta_im", f.eta_im),
            ("r", f.r),
            ("theta", f.theta),
            ("s", f.s),
            ("phi", f.phi),
            ("alpha_re", f.alpha_re),
            ("alpha_im", f.alpha_im),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(format!("field {name} is not finite"));
            }
        }
        let chi = Complex64::new(f.chi_re, f.chi_im);
        let eta = Complex64::new(f.eta_re, f.eta_im);
        if chi == Complex64::ZERO && eta == Complex64::ZERO {
            return Err("at least one of chi, eta must be nonzero".into());
        }
        Ok(JanusSpec::new(
            chi,
            eta,
            SqueezeParam::new(f.r, f.theta),
            SqueezeParam::new(f.s, f.phi),
            Complex64::new(f.alpha_re, f.alpha_im),
        ))
    }
}

impl From<JanusSpec> for FlatSpec {
    fn from(s: JanusSpec) -> Self {
        Self {
            chi_re: s.chi.re,
            chi_im: s.chi.im,
            eta_re: s.eta.re,
            eta_im: s.eta.im,
            r: s.xi.r(),
            theta: s.xi.theta(),
            s: s.zeta.r(),
            phi: s.zeta.theta(),
            alpha_re: s.alpha.re,
            alpha_im: s.alpha.im,
        }
    }
}
