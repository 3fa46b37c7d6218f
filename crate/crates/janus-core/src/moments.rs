//! Closed-form photon moments ⟨a†ᵏaᵏ⟩ and correlation functions g⁽ᵏ⁾(0).
//!
//! The workhorse is the cross matrix element
//! M_k(ξ, ζ, α) = ⟨ζ, α| a†ᵏaᵏ |ξ, α⟩, assembled from generalized squeezing
//! functions F_{p,q} evaluated at the kernel variable
//! z = tanh r tanh s e^{i(θ−φ)}:
//!
//! M_k = (cosh r cosh s)^{−1/2} Σ_{p≡q} C(k,p) C(k,q) (α*)^{k−q} α^{k−p} W_{pq},
//!
//! where W_{pq} = (−tanh s e^{−iφ})^{(q−p)/2} F_{p,q}(z) for q ≥ p and
//! W_{pq} = (−tanh r e^{iθ})^{(p−q)/2} F_{q,p}(z) for p > q.  Diagonal
//! moments, Janus-state moments, and g⁽ᵏ⁾(0) are thin layers on top.

use num::complex::Complex64;

use crate::error::{JanusError, Result};
use crate::gsp;
use crate::params::{composite_z, JanusSpec, SqueezeParam};

/// Largest supported moment order.
pub const ORDER_CAP: u32 = 12;

/// A real moment together with its branch diagnostic.
#[derive(Clone, Copy, Debug)]
pub struct MomentResult {
    /// Moment order k.
    pub k: u32,
    /// ⟨a†ᵏaᵏ⟩, guaranteed real for physical inputs.
    pub value: f64,
    /// |Im| of the raw complex assembly before taking the real part; a
    /// branch or transcription error would show up here first.
    pub branch_residual: f64,
}

/// Overlap m₀ = ⟨ζ|ξ⟩ = (cosh r cosh s − sinh r sinh s e^{i(θ−φ)})^{−1/2}
/// of two squeezed vacua (and of |ξ, α⟩, |ζ, α⟩ for any shared α).
///
/// The radicand has positive real part for finite squeezing, so the
/// principal square root is branch-safe.
pub fn m0(xi: &SqueezeParam, zeta: &SqueezeParam) -> Complex64 {
    let (r, s) = (xi.r(), zeta.r());
    let radicand = Complex64::new(r.cosh() * s.cosh(), 0.0)
        - Complex64::from_polar(r.sinh() * s.sinh(), xi.theta() - zeta.theta());
    radicand.sqrt().inv()
}

fn binom(k: u32, j: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..j.min(k - j) {
        acc = acc * (k - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Cross matrix element M_k(ξ, ζ, α) = ⟨ζ, α| a†ᵏaᵏ |ξ, α⟩.
pub fn matrix_element(
    k: u32,
    xi: &SqueezeParam,
    zeta: &SqueezeParam,
    alpha: Complex64,
) -> Result<Complex64> {
    if k > ORDER_CAP {
        return Err(JanusError::OrderTooLarge { k, cap: ORDER_CAP });
    }
    let z = composite_z(xi, zeta);
    // Offset bases: (−tanh s e^{−iφ}) for q > p, (−tanh r e^{iθ}) for p > q.
    let bra_base = -Complex64::from_polar(zeta.r().tanh(), -zeta.theta());
    let ket_base = -Complex64::from_polar(xi.r().tanh(), xi.theta());
    let ac = alpha.conj();

    let mut sum = Complex64::ZERO;
    for p in 0..=k {
        for q in (p % 2..=k).step_by(2) {
            let w = if q >= p {
                bra_base.powu((q - p) / 2) * gsp::f_closed(p, q, z)
            } else {
                ket_base.powu((p - q) / 2) * gsp::f_closed(q, p, z)
            };
            sum += binom(k, p) * binom(k, q) * ac.powu(k - q) * alpha.powu(k - p) * w;
        }
    }
    Ok(sum / (xi.r().cosh() * zeta.r().cosh()).sqrt())
}

/// Diagonal moment N_k(ξ, α) = ⟨ξ, α| a†ᵏaᵏ |ξ, α⟩.
pub fn single_moment(k: u32, xi: &SqueezeParam, alpha: Complex64) -> Result<MomentResult> {
    let raw = matrix_element(k, xi, xi, alpha)?;
    let residual = raw.im.abs();
    assert!(
        residual <= 1e-9 * raw.re.abs().max(1.0),
        "diagonal moment came out complex: {raw}"
    );
    #[cfg(debug_assertions)]
    if let Some(reference) = closed_diagonal_reference(k, xi, alpha) {
        debug_assert!(
            (raw.re - reference).abs() <= 1e-8 * reference.abs().max(1.0),
            "diagonal N_{k} = {} disagrees with reference {reference}",
            raw.re
        );
    }
    Ok(MomentResult {
        k,
        value: raw.re,
        branch_residual: residual,
    })
}

/// Independently transcribed diagonal moments for k ≤ 4, used as a debug
/// cross-check on the general assembly.  Δ = 2 arg α − θ.
#[cfg(debug_assertions)]
fn closed_diagonal_reference(k: u32, xi: &SqueezeParam, alpha: Complex64) -> Option<f64> {
    let x = alpha.norm_sqr();
    let s = xi.r().sinh();
    let c = xi.r().cosh();
    let delta = 2.0 * alpha.arg() - xi.theta();
    let (s2, s3, s4) = (s * s, s.powi(3), s.powi(4));
    let cd = delta.cos();
    Some(match k {
        1 => x + s2,
        2 => x * x + x * (4.0 * s2 - 2.0 * s * c * cd) + 3.0 * s4 + s2,
        3 => {
            x.powi(3)
                + x * x * (9.0 * s2 - 6.0 * s * c * cd)
                + x * (27.0 * s4 + 9.0 * s2 - 18.0 * s3 * c * cd)
                + 15.0 * s2 * s4
                + 9.0 * s4
        }
        4 => {
            x.powi(4)
                + x.powi(3) * (16.0 * s2 - 12.0 * s * c * cd)
                + x * x
                    * (108.0 * s4 + 36.0 * s2 - 96.0 * s3 * c * cd
                        + 6.0 * s2 * c * c * (2.0 * delta).cos())
                + x * (240.0 * s2 * s4 + 144.0 * s4 - (180.0 * s4 * s + 36.0 * s3) * c * cd)
                + 105.0 * s4 * s4
                + 90.0 * s2 * s4
                + 9.0 * s4
        }
        _ => return None,
    })
}

/// Moment N_k(Ψ) = ⟨Ψ| a†ᵏaᵏ |Ψ⟩ of a Janus state with the weights taken
/// as given (normalize the spec first for physical values).
pub fn janus_moment(k: u32, spec: &JanusSpec) -> Result<MomentResult> {
    let n_xi = single_moment(k, &spec.xi, spec.alpha)?;
    let n_zeta = single_moment(k, &spec.zeta, spec.alpha)?;
    let cross = matrix_element(k, &spec.xi, &spec.zeta, spec.alpha)?;
    let value = spec.chi.norm_sqr() * n_xi.value
        + spec.eta.norm_sqr() * n_zeta.value
        + 2.0 * (spec.chi * spec.eta.conj() * cross).re;
    Ok(MomentResult {
        k,
        value,
        branch_residual: n_xi.branch_residual.max(n_zeta.branch_residual),
    })
}

/// Normalized correlation function g⁽ᵏ⁾(0) = N_k / N_1ᵏ.
///
/// The spec is normalized internally (the ratio is not scale-invariant);
/// fails with [`JanusError::VacuumState`] when ⟨n̂⟩ vanishes.
pub fn gk(k: u32, spec: &JanusSpec) -> Result<f64> {
    let spec = spec.normalized()?;
    let n1 = janus_moment(1, &spec)?.value;
    if n1 < 1e-12 {
        return Err(JanusError::VacuumState { n1 });
    }
    let nk = janus_moment(k, &spec)?.value;
    Ok(nk / n1.powi(k as i32))
}

/// Small-r expansion of g²(0) for the antisymmetric displaced family
/// (|r, α⟩ − |−r, α⟩)/√N, a = |α|:
///
/// g²(0) = (a⁴ + 8a² + 2)/(a² + 2)² + O(r⁴),
///
/// with the quartic term known in closed form at a = 0, where
/// g²(0) = 1/2 + (25/8) r⁴ + O(r⁶).  Intended for r ≲ 0.3.
pub fn antisym_g2_expansion(alpha_mag: f64, r: f64) -> f64 {
    let a2 = alpha_mag * alpha_mag;
    let zeroth = (a2 * a2 + 8.0 * a2 + 2.0) / (a2 + 2.0).powi(2);
    if alpha_mag == 0.0 {
        zeroth + 3.125 * r.powi(4)
    } else {
        zeroth
    }
}

/// g²(0) of the weighted two-branch state (|r, 0⟩ − ρ|−r, 0⟩)/√N.
pub fn weighted_antisym_g2(r: f64, rho: f64) -> Result<f64> {
    let mut spec = JanusSpec::antisymmetric(r, Complex64::ZERO);
    spec.eta = Complex64::new(-rho, 0.0);
    gk(2, &spec)
}

/// Result of the weight-ratio optimization of g²(0) at fixed r.
#[derive(Clone, Copy, Debug)]
pub struct OptimizedG2 {
    /// Rational closed form in x = sinh²r:
    /// (12x⁵ + 40x⁴ + 51x³ + 28x² + 11x + 2) /
    /// (4x⁵ + 16x⁴ + 29x³ + 29x² + 16x + 4).
    pub formula: f64,
    /// Weight ratio ρ = |χ/η| minimizing g²(0) over the two-branch family.
    pub best_ratio: f64,
    /// Family value g²(0) at `best_ratio`.
    pub family_minimum: f64,
}

/// Minimizes g²(0) of (|r, 0⟩ − ρ|−r, 0⟩)/√N over the weight ratio ρ and
/// reports it next to the rational closed form.
///
/// The search is a golden-section scan in ln ρ; the family is symmetric
/// under ρ ↦ 1/ρ (relabeling the branches), so the minimizer sits at the
/// self-dual point ρ = 1 for every r.
pub fn optimized_g2_undisplaced(r: f64) -> OptimizedG2 {
    let x = r.sinh().powi(2);
    let num = (((12.0 * x + 40.0) * x + 51.0) * x + 28.0) * x * x + 11.0 * x + 2.0;
    let den = (((4.0 * x + 16.0) * x + 29.0) * x + 29.0) * x * x + 16.0 * x + 4.0;
    let formula = num / den;

    let f = |t: f64| weighted_antisym_g2(r, t.exp()).expect("family g2 defined for rho > 0");
    let (mut lo, mut hi) = (-4.0_f64, 4.0_f64);
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut t1 = hi - inv_phi * (hi - lo);
    let mut t2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(t1), f(t2));
    for _ in 0..160 {
        if f1 <= f2 {
            hi = t2;
            t2 = t1;
            f2 = f1;
            t1 = hi - inv_phi * (hi - lo);
            f1 = f(t1);
        } else {
            lo = t1;
            t1 = t2;
            f1 = f2;
            t2 = lo + inv_phi * (hi - lo);
            f2 = f(t2);
        }
    }
    let best_t = 0.5 * (lo + hi);
    OptimizedG2 {
        formula,
        best_ratio: best_t.exp(),
        family_minimum: f(best_t),
    }
}
