//! Wigner functions of displaced Janus states, exactly, as three Gaussians.
//!
//! Quadrature convention: β = (q + ip)/√2, so a coherent state |α⟩ sits at
//! (q, p) = √2 (Re α, Im α) and the vacuum Wigner function is
//! e^{−q²−p²}/π with peak 1/π.
//!
//! The state χ|ξ, α⟩ + η|ζ, α⟩ has
//!
//! W_Ψ = |χ|² W_ξ + |η|² W_ζ + 2 Re[χ η* W_{ζξ}],
//!
//! where W_ξ, W_ζ are ordinary squeezed-state Gaussians and the cross
//! kernel W_{ζξ} (the Wigner transform of |ξ, α⟩⟨ζ, α|) is a Gaussian with
//! a complex quadratic form M:
//!
//! W_{ζξ} = m₀(ξ, ζ) · exp(−½ δxᵀ M δx) / π,   δx = (q, p) − √2(Re α, Im α),
//!
//! M₁₁ = 4 c_ξ c_ζ*/S, M₂₂ = 4/S, M₁₂ = −2i(c_ξ − c_ζ*)/S with
//! c = (1 + λ)/(1 − λ), λ = e^{iθ} tanh r, S = c_ξ + c_ζ*.  The identity
//! det M = 4 pins the prefactor: the kernel integrates to m₀ for every
//! parameter pair, and M reduces to V⁻¹ on the diagonal ζ = ξ.

use num::complex::Complex64;
use rayon::prelude::*;

use crate::error::{JanusError, Result};
use crate::moments::m0;
use crate::params::{JanusSpec, SqueezeParam};

const INV_PI: f64 = std::f64::consts::FRAC_1_PI;

/// Quadrature covariance of |ξ⟩, V = R(θ/2) diag(e^{−2r}, e^{2r})/2 R(θ/2)ᵀ:
///
/// v₁₁ = (cosh 2r − sinh 2r cos θ)/2, v₂₂ = (cosh 2r + sinh 2r cos θ)/2,
/// v₁₂ = −sinh 2r sin θ / 2.
///
/// The squeezed axis lies at angle θ/2 in the (q, p) plane; det V = 1/4
/// for every pure ξ.
pub fn covariance(xi: &SqueezeParam) -> [[f64; 2]; 2] {
    let ch = (2.0 * xi.r()).cosh();
    let sh = (2.0 * xi.r()).sinh();
    let c = xi.theta().cos();
    let s = xi.theta().sin();
    [
        [(ch - sh * c) / 2.0, -sh * s / 2.0],
        [-sh * s / 2.0, (ch + sh * c) / 2.0],
    ]
}

fn invert2(sigma: &[[f64; 2]; 2]) -> Result<[[f64; 2]; 2]> {
    let det = sigma[0][0] * sigma[1][1] - sigma[0][1] * sigma[1][0];
    if det.abs() < 1e-12 {
        return Err(JanusError::SingularSigma { det });
    }
    Ok([
        [sigma[1][1] / det, -sigma[0][1] / det],
        [-sigma[1][0] / det, sigma[0][0] / det],
    ])
}

/// Holomorphic coefficients (A, B) of a real Gaussian exponent:
/// ½ δxᵀ Σ⁻¹ δx = A|δβ|² + B δβ² + B* δβ*² with δβ = (δq + iδp)/√2,
/// A = (E₁₁ + E₂₂)/2 and B = (E₁₁ − E₂₂ − 2iE₁₂)/4 for E = Σ⁻¹.
pub fn ab_coefficients(sigma: &[[f64; 2]; 2]) -> Result<(f64, Complex64)> {
    let e = invert2(sigma)?;
    let a = (e[0][0] + e[1][1]) / 2.0;
    let b = Complex64::new((e[0][0] - e[1][1]) / 4.0, -e[0][1] / 2.0);
    Ok((a, b))
}

/// Wigner function of a single squeezed coherent state |ξ, α⟩.
pub fn wigner_single(xi: &SqueezeParam, alpha: Complex64, q: f64, p: f64) -> f64 {
    let v = covariance(xi);
    let e = invert2(&v).expect("pure-state covariance is invertible");
    let det = v[0][0] * v[1][1] - v[0][1] * v[1][0];
    let dq = q - std::f64::consts::SQRT_2 * alpha.re;
    let dp = p - std::f64::consts::SQRT_2 * alpha.im;
    let quad = e[0][0] * dq * dq + 2.0 * e[0][1] * dq * dp + e[1][1] * dp * dp;
    (-0.5 * quad).exp() / (std::f64::consts::TAU * det.sqrt())
}

/// The cross Gaussian kernel W_{ζξ} with its complex quadratic form.
#[derive(Clone, Copy, Debug)]
pub struct CrossGauss {
    overlap: Complex64,
    m11: Complex64,
    m12: Complex64,
    m22: Complex64,
    a: Complex64,
    b: Complex64,
    b_prime: Complex64,
    center: (f64, f64),
    sigma: [[f64; 2]; 2],
}

impl CrossGauss {
    /// Assembles the kernel for the pair (ξ, ζ) at shared displacement α.
    pub fn new(xi: &SqueezeParam, zeta: &SqueezeParam, alpha: Complex64) -> Result<Self> {
        let c_of = |sp: &SqueezeParam| {
            let lambda = Complex64::from_polar(sp.r().tanh(), sp.theta());
            (Complex64::ONE + lambda) / (Complex64::ONE - lambda)
        };
        let cx = c_of(xi);
        let cz = c_of(zeta).conj();
        let s = cx + cz;
        // Re c > 0 for |λ| < 1, so S never vanishes; guard anyway.
        if s.norm() < 1e-12 {
            return Err(JanusError::SingularSigma { det: s.norm() });
        }
        let m11 = 4.0 * cx * cz / s;
        let m22 = 4.0 / s;
        let m12 = -2.0 * Complex64::I * (cx - cz) / s;
        debug_assert!(
            (m11 * m22 - m12 * m12 - Complex64::new(4.0, 0.0)).norm() < 1e-9,
            "cross form lost its determinant"
        );
        let sx = covariance(xi);
        let sz = covariance(zeta);
        Ok(Self {
            overlap: m0(xi, zeta),
            m11,
            m12,
            m22,
            a: (m11 + m22) / 2.0,
            b: (m11 - m22 - 2.0 * Complex64::I * m12) / 4.0,
            b_prime: (m11 - m22 + 2.0 * Complex64::I * m12) / 4.0,
            center: (
                std::f64::consts::SQRT_2 * alpha.re,
                std::f64::consts::SQRT_2 * alpha.im,
            ),
            sigma: [
                [(sx[0][0] + sz[0][0]) / 2.0, (sx[0][1] + sz[0][1]) / 2.0],
                [(sx[1][0] + sz[1][0]) / 2.0, (sx[1][1] + sz[1][1]) / 2.0],
            ],
        })
    }

    /// Kernel value m₀ exp(−½ δxᵀ M δx)/π.
    pub fn evaluate(&self, q: f64, p: f64) -> Complex64 {
        let dq = q - self.center.0;
        let dp = p - self.center.1;
        let quad = self.m11 * dq * dq + 2.0 * self.m12 * dq * dp + self.m22 * dp * dp;
        self.overlap * (-0.5 * quad).exp() * INV_PI
    }

    /// Same kernel through the holomorphic split
    /// exp(−(A|δβ|² + B δβ² + B′ δβ*²)); B′ ≠ B* once M is complex.
    pub fn evaluate_holomorphic(&self, q: f64, p: f64) -> Complex64 {
        let db = Complex64::new(q - self.center.0, p - self.center.1) / std::f64::consts::SQRT_2;
        let quad = self.a * db.norm_sqr() + self.b * db * db + self.b_prime * db.conj() * db.conj();
        self.overlap * (-quad).exp() * INV_PI
    }

    /// Holomorphic coefficients (A, B, B′).
    pub fn coefficients(&self) -> (Complex64, Complex64, Complex64) {
        (self.a, self.b, self.b_prime)
    }

    /// Arithmetic mean of the two real covariances; a geometry summary,
    /// not the decay form of the kernel.
    pub fn sigma(&self) -> [[f64; 2]; 2] {
        self.sigma
    }

    /// The overlap m₀(ξ, ζ) = ∫ W_{ζξ} dq dp.
    pub fn overlap(&self) -> Complex64 {
        self.overlap
    }
}

/// Free-function form of the cross kernel.
pub fn cross_wigner(
    xi: &SqueezeParam,
    zeta: &SqueezeParam,
    alpha: Complex64,
    q: f64,
    p: f64,
) -> Result<Complex64> {
    Ok(CrossGauss::new(xi, zeta, alpha)?.evaluate(q, p))
}

/// Prepared evaluator for the full three-Gaussian Wigner function of a
/// Janus spec, with the weights taken as given.
#[derive(Clone, Copy, Debug)]
pub struct JanusWigner {
    chi_sq: f64,
    eta_sq: f64,
    weight: Complex64,
    diag_xi: CrossGauss,
    diag_zeta: CrossGauss,
    cross: CrossGauss,
}

impl JanusWigner {
    /// Builds the three kernels for `spec` (normalize it first for a
    /// unit-integral Wigner function).
    pub fn new(spec: &JanusSpec) -> Result<Self> {
        Ok(Self {
            chi_sq: spec.chi.norm_sqr(),
            eta_sq: spec.eta.norm_sqr(),
            weight: spec.chi * spec.eta.conj(),
            diag_xi: CrossGauss::new(&spec.xi, &spec.xi, spec.alpha)?,
            diag_zeta: CrossGauss::new(&spec.zeta, &spec.zeta, spec.alpha)?,
            cross: CrossGauss::new(&spec.xi, &spec.zeta, spec.alpha)?,
        })
    }

    /// W_Ψ(q, p).
    pub fn evaluate(&self, q: f64, p: f64) -> f64 {
        let (mixture, interference) = self.evaluate_parts(q, p);
        mixture + interference
    }

    /// (mixture, interference) split:
    /// |χ|²W_ξ + |η|²W_ζ and 2Re[χ η* W_{ζξ}].
    pub fn evaluate_parts(&self, q: f64, p: f64) -> (f64, f64) {
        let mixture = self.chi_sq * self.diag_xi.evaluate(q, p).re
            + self.eta_sq * self.diag_zeta.evaluate(q, p).re;
        let interference = 2.0 * (self.weight * self.cross.evaluate(q, p)).re;
        (mixture, interference)
    }
}

/// W_Ψ(q, p) for a spec, one-shot.
pub fn wigner_janus(spec: &JanusSpec, q: f64, p: f64) -> Result<f64> {
    Ok(JanusWigner::new(spec)?.evaluate(q, p))
}

/// A sampled Wigner function on a square grid centered at √2(Re α, Im α).
#[derive(Clone, Debug)]
pub struct WignerGrid {
    /// Grid q coordinates (outer index).
    pub qs: Vec<f64>,
    /// Grid p coordinates (inner index).
    pub ps: Vec<f64>,
    /// Row-major samples, `values[iq * ps.len() + ip]`.
    pub values: Vec<f64>,
    /// Grid spacing.
    pub step: f64,
    /// Riemann integral Σ W h².
    pub integral: f64,
    /// Smallest sample and its location.
    pub min_value: f64,
    pub min_q: f64,
    pub min_p: f64,
    /// Σ |W| h² − 1; twice the negative volume when the grid resolves a
    /// normalized W.  Only meaningful for the total of a normalized spec.
    pub negativity_volume: f64,
}

fn axis(center: f64, extent: f64, step: f64) -> Vec<f64> {
    let n = (2.0 * extent / step + 1e-9).floor() as usize + 1;
    (0..n.max(2)).map(|i| center - extent + i as f64 * step).collect()
}

fn summarize(qs: Vec<f64>, ps: Vec<f64>, values: Vec<f64>, step: f64) -> WignerGrid {
    let cell = step * step;
    let mut integral = 0.0;
    let mut abs_integral = 0.0;
    let mut min_value = f64::INFINITY;
    let mut min_idx = 0;
    for (i, &w) in values.iter().enumerate() {
        integral += w;
        abs_integral += w.abs();
        if w < min_value {
            min_value = w;
            min_idx = i;
        }
    }
    integral *= cell;
    abs_integral *= cell;
    let np = ps.len();
    WignerGrid {
        min_q: qs[min_idx / np],
        min_p: ps[min_idx % np],
        qs,
        ps,
        values,
        step,
        integral,
        min_value,
        negativity_volume: abs_integral - 1.0,
    }
}

/// The three grids of a decomposed Wigner function.
#[derive(Clone, Debug)]
pub struct WignerParts {
    pub mixture: WignerGrid,
    pub interference: WignerGrid,
    pub total: WignerGrid,
}

/// Samples W_Ψ on [−extent, extent]² around the displacement center.
///
/// Fails with [`JanusError::GridTooCoarse`] when the sampled integral
/// strays from 1 by more than 10⁻³ (assumes a normalized spec).
pub fn wigner_grid(spec: &JanusSpec, extent: f64, step: f64) -> Result<WignerGrid> {
    let parts = wigner_grid_parts(spec, extent, step)?;
    Ok(parts.total)
}

/// Samples mixture, interference, and total on the same grid.
pub fn wigner_grid_parts(spec: &JanusSpec, extent: f64, step: f64) -> Result<WignerParts> {
    let eval = JanusWigner::new(spec)?;
    let center = (
        std::f64::consts::SQRT_2 * spec.alpha.re,
        std::f64::consts::SQRT_2 * spec.alpha.im,
    );
    let qs = axis(center.0, extent, step);
    let ps = axis(center.1, extent, step);
    let rows: Vec<(Vec<f64>, Vec<f64>)> = qs
        .par_iter()
        .map(|&q| {
            let mut mix_row = Vec::with_capacity(ps.len());
            let mut int_row = Vec::with_capacity(ps.len());
            for &p in &ps {
                let (m, i) = eval.evaluate_parts(q, p);
                mix_row.push(m);
                int_row.push(i);
            }
            (mix_row, int_row)
        })
        .collect();

    let n = qs.len() * ps.len();
    let mut mixture = Vec::with_capacity(n);
    let mut interference = Vec::with_capacity(n);
    let mut total = Vec::with_capacity(n);
    for (mix_row, int_row) in rows {
        for (m, i) in mix_row.into_iter().zip(int_row) {
            mixture.push(m);
            interference.push(i);
            total.push(m + i);
        }
    }
    let total = summarize(qs.clone(), ps.clone(), total, step);
    if (total.integral - 1.0).abs() > 1e-3 {
        return Err(JanusError::GridTooCoarse {
            integral: total.integral,
        });
    }
    Ok(WignerParts {
        mixture: summarize(qs.clone(), ps.clone(), mixture, step),
        interference: summarize(qs, ps, interference, step),
        total,
    })
}

/// Default half-width: six standard deviations of the widest component
/// axis, 6 e^{r_max}/√2.
pub fn default_extent(spec: &JanusSpec) -> f64 {
    6.0 * spec.max_r().exp() / std::f64::consts::SQRT_2
}

/// Default spacing: 300 steps across the default box.
pub fn default_step(extent: f64) -> f64 {
    extent / 150.0
}
