//! Quantum Fisher information (QFI) of displaced Janus states.
//!
//! Three probe parameters are supported:
//!
//! - displacement phase: the orbit α → α e^{iλ}, θ → θ + 2λ, φ → φ + 2λ is
//!   generated exactly by n̂, so F_Q = 4 Var(n̂) in closed form;
//! - squeezing angle: both squeezing phases co-rotate, θ → θ + λ and
//!   φ → φ + λ.  At α = 0 the orbit is generated by n̂/2 and the
//!   antisymmetric family obeys F_Q = 10 r⁴ + O(r⁶);
//! - squeezing generator G = ½(e^{−iθ_g} a² + e^{iθ_g} a†²), for which
//!   F_Q = 4 Var(G) is evaluated on the Fock oracle.
//!
//! The numeric route estimates QFI from the fidelity drop
//! F_Q ≈ 8(1 − |⟨Ψ(−dλ/2)|Ψ(+dλ/2)⟩|)/dλ², Richardson-extrapolated from
//! steps dλ and dλ/2; the spread between the two estimates is reported as
//! the sensitivity.

use num::complex::Complex64;

use crate::error::{JanusError, Result};
use crate::fock_oracle;
use crate::moments;
use crate::params::{JanusSpec, SqueezeParam};

/// Probe parameter of a QFI computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QfiParameter {
    DisplacementPhase,
    SqueezingAngle,
    SqueezingGenerator,
}

impl QfiParameter {
    /// Stable label used in serialized output.
    pub fn label(&self) -> &'static str {
        match self {
            Self::DisplacementPhase => "displacement_phase",
            Self::SqueezingAngle => "squeezing_angle",
            Self::SqueezingGenerator => "squeezing_generator",
        }
    }
}

/// Parameters with a well-defined state family for the fidelity route.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FidelityParameter {
    DisplacementPhase,
    SqueezingAngle,
}

impl From<FidelityParameter> for QfiParameter {
    fn from(p: FidelityParameter) -> Self {
        match p {
            FidelityParameter::DisplacementPhase => Self::DisplacementPhase,
            FidelityParameter::SqueezingAngle => Self::SqueezingAngle,
        }
    }
}

/// How a QFI value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QfiMethod {
    VarianceFormula,
    Expansion,
    FidelityNumeric,
}

impl QfiMethod {
    /// Stable label used in serialized output.
    pub fn label(&self) -> &'static str {
        match self {
            Self::VarianceFormula => "variance_formula",
            Self::Expansion => "expansion",
            Self::FidelityNumeric => "fidelity_numeric",
        }
    }
}

/// A QFI value with its provenance.
#[derive(Clone, Copy, Debug)]
pub struct QfiResult {
    pub parameter: QfiParameter,
    pub method: QfiMethod,
    pub value: f64,
    /// Spread between the two finite-difference estimates; None for
    /// closed-form routes.
    pub sensitivity: Option<f64>,
}

/// Var(n̂) = N₂ + N₁ − N₁² of the normalized state.
pub fn var_n(spec: &JanusSpec) -> Result<f64> {
    let spec = spec.normalized()?;
    let n1 = moments::janus_moment(1, &spec)?.value;
    let n2 = moments::janus_moment(2, &spec)?.value;
    Ok(n2 + n1 - n1 * n1)
}

/// Closed-form displacement-phase QFI, F_Q = 4 Var(n̂).
pub fn qfi_displacement_phase(spec: &JanusSpec) -> Result<QfiResult> {
    Ok(QfiResult {
        parameter: QfiParameter::DisplacementPhase,
        method: QfiMethod::VarianceFormula,
        value: 4.0 * var_n(spec)?,
        sensitivity: None,
    })
}

/// Leading-order squeezing-angle QFI of the antisymmetric family at α = 0:
/// F_Q = 16 (c₃/c₁)² r⁴ = 10 r⁴, with c₁ = √2/2 and c₃ = √720/48 the first
/// two odd-ladder amplitude slopes.
pub fn qfi_squeezing_angle_leading(r: f64) -> f64 {
    let c1 = std::f64::consts::SQRT_2 / 2.0;
    let c3 = 720.0_f64.sqrt() / 48.0;
    16.0 * (c3 / c1).powi(2) * r.powi(4)
}

/// Var(G) for G = ½(e^{−iθ_g} a² + e^{iθ_g} a†²) on the normalized state,
/// evaluated on the Fock oracle (`cutoff` None picks the heuristic).
pub fn var_gsq(spec: &JanusSpec, theta_g: f64, cutoff: Option<usize>) -> Result<f64> {
    let spec = spec.normalized()?;
    let v = match cutoff {
        Some(c) => fock_oracle::build_janus_fock(&spec, c)?,
        None => fock_oracle::build_janus_fock_auto(&spec)?.0,
    };
    Ok(fock_oracle::var_gsq_fock(&v, theta_g))
}

/// Squeezing-generator QFI, F_Q = 4 Var(G).
pub fn qfi_gsq(spec: &JanusSpec, theta_g: f64, cutoff: Option<usize>) -> Result<QfiResult> {
    Ok(QfiResult {
        parameter: QfiParameter::SqueezingGenerator,
        method: QfiMethod::VarianceFormula,
        value: 4.0 * var_gsq(spec, theta_g, cutoff)?,
        sensitivity: None,
    })
}

/// The spec displaced along the probe orbit by λ.  Norm is preserved
/// exactly: both orbits leave θ − φ, and hence every overlap, unchanged.
pub fn rotated_spec(spec: &JanusSpec, parameter: FidelityParameter, lambda: f64) -> JanusSpec {
    let mut out = *spec;
    match parameter {
        FidelityParameter::DisplacementPhase => {
            out.alpha *= Complex64::from_polar(1.0, lambda);
            out.xi = SqueezeParam::new(out.xi.r(), out.xi.theta() + 2.0 * lambda);
            out.zeta = SqueezeParam::new(out.zeta.r(), out.zeta.theta() + 2.0 * lambda);
        }
        FidelityParameter::SqueezingAngle => {
            out.xi = SqueezeParam::new(out.xi.r(), out.xi.theta() + lambda);
            out.zeta = SqueezeParam::new(out.zeta.r(), out.zeta.theta() + lambda);
        }
    }
    out
}

/// Fidelity-based numeric QFI with Richardson extrapolation over steps
/// dλ and dλ/2.
///
/// Fails with [`JanusError::StepTooSmall`] when the fidelity deficit
/// 1 − |⟨Ψ(−dλ/2)|Ψ(+dλ/2)⟩| drops below 10⁻¹³ and the quotient would be
/// rounding noise.
pub fn fidelity_qfi(
    spec: &JanusSpec,
    parameter: FidelityParameter,
    dl: f64,
    cutoff: Option<usize>,
) -> Result<QfiResult> {
    let spec = spec.normalized()?;
    // All four builds must share one cutoff for consistent overlaps.  Find
    // one that passes the tail audit on the base spec, then add headroom so
    // the slightly rotated specs cannot trip the audit marginally.
    let cutoff = match (cutoff, fock_oracle::forced_cutoff()) {
        (Some(c), _) => c,
        (None, Some(forced)) => forced,
        (None, None) => {
            let (_, found) = fock_oracle::build_janus_fock_auto(&spec)?;
            (found * 3 / 2).min(fock_oracle::MAX_AUTO_CUTOFF)
        }
    };

    let estimate = |step: f64| -> Result<f64> {
        let mut plus = fock_oracle::build_janus_fock(
            &rotated_spec(&spec, parameter, step / 2.0),
            cutoff,
        )?;
        let mut minus = fock_oracle::build_janus_fock(
            &rotated_spec(&spec, parameter, -step / 2.0),
            cutoff,
        )?;
        plus.normalize();
        minus.normalize();
        let deficit = 1.0 - minus.overlap(&plus).norm();
        if deficit < 1e-13 {
            return Err(JanusError::StepTooSmall { deficit });
        }
        Ok(8.0 * deficit / (step * step))
    };

    let coarse = estimate(dl)?;
    let fine = estimate(dl / 2.0)?;
    Ok(QfiResult {
        parameter: parameter.into(),
        method: QfiMethod::FidelityNumeric,
        value: (4.0 * fine - coarse) / 3.0,
        sensitivity: Some((fine - coarse).abs()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn coherent_displacement_phase_qfi() {
        let alpha = Complex64::new(0.9, -1.1);
        let spec = JanusSpec::single(SqueezeParam::new(0.0, 0.0), alpha);
        let out = qfi_displacement_phase(&spec).unwrap();
        assert_relative_eq!(out.value, 4.0 * alpha.norm_sqr(), max_relative = 1e-12);
        assert_eq!(out.method, QfiMethod::VarianceFormula);
    }

    #[test]
    fn squeezed_vacuum_photon_variance() {
        let r = 0.8_f64;
        let spec = JanusSpec::single(SqueezeParam::new(r, 0.3), Complex64::ZERO);
        assert_relative_eq!(
            var_n(&spec).unwrap(),
            2.0 * r.sinh().powi(2) * r.cosh().powi(2),
            max_relative = 1e-10
        );
    }

    #[test]
    fn displaced_antisymmetric_variance_limit() {
        // As r → 0 at |α| = 1 the antisymmetric state tends to a displaced
        // two-photon-added form with Var(n̂) → 5.
        let spec = JanusSpec::antisymmetric(0.01, Complex64::ONE);
        assert_relative_eq!(var_n(&spec).unwrap(), 5.0, epsilon = 5e-3);
    }

    #[test]
    fn fidelity_route_matches_variance_route() {
        let spec = JanusSpec::new(
            Complex64::new(0.8, 0.0),
            Complex64::new(0.0, 0.5),
            SqueezeParam::new(0.6, 0.7),
            SqueezeParam::new(0.4, -0.9),
            Complex64::new(0.7, 0.2),
        );
        let closed = qfi_displacement_phase(&spec).unwrap().value;
        let numeric = fidelity_qfi(&spec, FidelityParameter::DisplacementPhase, 1e-3, None)
            .unwrap();
        assert!(
            (numeric.value - closed).abs() <= 1e-3 * closed.max(1.0),
            "numeric {} closed {}",
            numeric.value,
            closed
        );
        assert!(numeric.sensitivity.unwrap() < 1e-3 * closed.max(1.0));
    }

    #[test]
    fn squeezing_angle_orbit_is_half_number_operator_at_zero_alpha() {
        let spec = JanusSpec::antisymmetric(0.12, Complex64::ZERO);
        let exact = var_n(&spec).unwrap();
        let numeric = fidelity_qfi(&spec, FidelityParameter::SqueezingAngle, 1e-2, None)
            .unwrap()
            .value;
        assert!(
            (numeric - exact).abs() < 1e-6 + 1e-3 * exact,
            "numeric {numeric} exact {exact}"
        );
        // Leading order for the same family.
        assert_relative_eq!(
            qfi_squeezing_angle_leading(0.12),
            10.0 * 0.12f64.powi(4),
            max_relative = 1e-12
        );
    }

    #[test]
    fn gsq_variance_known_cases() {
        let vacuum = JanusSpec::single(SqueezeParam::new(0.0, 0.0), Complex64::ZERO);
        assert_relative_eq!(var_gsq(&vacuum, 0.7, None).unwrap(), 0.5, epsilon = 1e-10);
        // Squeezed vacuum at θ = θ_g = 0: Var(G) = cosh²(2r)/2.
        let r = 0.6_f64;
        let sq = JanusSpec::single(SqueezeParam::new(r, 0.0), Complex64::ZERO);
        assert_relative_eq!(
            var_gsq(&sq, 0.0, None).unwrap(),
            (2.0 * r).cosh().powi(2) / 2.0,
            max_relative = 1e-9
        );
        let qfi = qfi_gsq(&vacuum, 0.0, None).unwrap();
        assert_relative_eq!(qfi.value, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn vanishing_step_is_rejected() {
        let spec = JanusSpec::single(SqueezeParam::new(0.0, 0.0), Complex64::new(0.1, 0.0));
        assert!(matches!(
            fidelity_qfi(&spec, FidelityParameter::DisplacementPhase, 1e-8, None),
            Err(JanusError::StepTooSmall { .. })
        ));
    }
}
