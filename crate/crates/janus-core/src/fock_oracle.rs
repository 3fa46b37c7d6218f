//! Truncated Fock-space oracle.
//!
//! Everything here is deliberately brute force: states are explicit
//! amplitude vectors, the displacement operator is a dense matrix built
//! from a three-term recurrence, and observables are direct sums over
//! amplitudes.  None of the closed forms elsewhere in the crate are used,
//! so agreement between the two routes is a meaningful check.
//!
//! Truncation hygiene: every constructed vector must keep the weight in
//! its top [`TAIL_BAND`] amplitudes below [`TAIL_THRESHOLD`], otherwise
//! [`JanusError::CutoffTooSmall`] is raised.  The `JANUS_CUTOFF`
//! environment variable overrides [`cutoff_heuristic`].

use num::complex::Complex64;

use crate::error::{JanusError, Result};
use crate::params::{JanusSpec, SqueezeParam};

/// Number of top amplitudes whose weight is audited after each build step.
pub const TAIL_BAND: usize = 20;

/// Maximum tolerated weight in the audited tail band.
pub const TAIL_THRESHOLD: f64 = 1e-12;

/// Hard ceiling for [`build_janus_fock_auto`] cutoff growth.
pub const MAX_AUTO_CUTOFF: usize = 4096;

/// A state vector over the truncated Fock basis |0⟩ … |cutoff⟩.
#[derive(Clone, Debug)]
pub struct FockVector {
    amps: Vec<Complex64>,
}

impl FockVector {
    /// Wraps raw amplitudes (index = photon number).
    pub fn from_amps(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    /// Amplitudes ⟨n|ψ⟩ for n = 0 … cutoff.
    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Vector length cutoff + 1.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// Highest retained photon number.
    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    /// Σ |aₙ|².
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Rescales to unit norm.
    pub fn normalize(&mut self) {
        let scale = self.norm_sqr().sqrt().recip();
        for a in &mut self.amps {
            *a *= scale;
        }
    }

    /// ⟨self|other⟩ = Σ aₙ* bₙ over the shared index range.
    pub fn overlap(&self, other: &FockVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// ⟨n̂⟩ = Σ n |aₙ|².
    pub fn mean_n(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum()
    }

    /// Var(n̂) = ⟨n̂²⟩ − ⟨n̂⟩².
    pub fn var_n(&self) -> f64 {
        let mean = self.mean_n();
        let mean_sq: f64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(n, a)| (n as f64).powi(2) * a.norm_sqr())
            .sum();
        mean_sq - mean * mean
    }

    /// Weight in the top [`TAIL_BAND`] amplitudes.
    pub fn tail_weight(&self) -> f64 {
        let start = self.amps.len().saturating_sub(TAIL_BAND);
        self.amps[start..].iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_tail(self) -> Result<Self> {
        let tail = self.tail_weight();
        if tail > TAIL_THRESHOLD {
            return Err(JanusError::CutoffTooSmall {
                cutoff: self.cutoff(),
                tail,
            });
        }
        Ok(self)
    }
}

/// Squeezed vacuum |ξ⟩ in the truncated basis.
///
/// Even amplitudes only: a₀ = (cosh r)^{−1/2} and
/// a_{2m+2} = a_{2m} · λ √((2m+1)/(2m+2)) with λ = −e^{iθ} tanh r.
pub fn squeezed_vacuum_fock(xi: &SqueezeParam, cutoff: usize) -> Result<FockVector> {
    let mut amps = vec![Complex64::ZERO; cutoff + 1];
    let lambda = -Complex64::from_polar(xi.r().tanh(), xi.theta());
    let mut amp = Complex64::new(xi.r().cosh().sqrt().recip(), 0.0);
    let mut m = 0;
    while 2 * m <= cutoff {
        amps[2 * m] = amp;
        amp *= lambda * ((2 * m + 1) as f64 / (2 * m + 2) as f64).sqrt();
        m += 1;
    }
    FockVector::from_amps(amps).check_tail()
}

/// Dense matrix ⟨m|D(α)|n⟩ for m, n < dim.
///
/// Each diagonal d = m − n ≥ 0 follows the three-term recurrence
/// G_{n+1} = [(2n+1+d−x) Gₙ − √(n(n+d)) G_{n−1}] / √((n+1)(n+1+d)),
/// x = |α|², seeded by G₀(d) = α^d e^{−x/2}/√(d!).  The lower triangle is
/// the same recurrence seeded with −α* (from D(α)† = D(−α)).
pub fn displacement_matrix(alpha: Complex64, dim: usize) -> Vec<Vec<Complex64>> {
    let mut mat = vec![vec![Complex64::ZERO; dim]; dim];
    let x = alpha.norm_sqr();
    let seed = Complex64::new((-x / 2.0).exp(), 0.0);

    // fill(d, g0, upper): walks the diagonal with offset d starting at g0;
    // upper writes (n+d, n), lower writes (n, n+d).
    let mut fill = |d: usize, g0: Complex64, upper: bool| {
        let df = d as f64;
        let mut prev = Complex64::ZERO;
        let mut cur = g0;
        for n in 0..dim - d {
            if upper {
                mat[n + d][n] = cur;
            } else {
                mat[n][n + d] = cur;
            }
            let nf = n as f64;
            let next = ((2.0 * nf + 1.0 + df - x) * cur - (nf * (nf + df)).sqrt() * prev)
                / (((nf + 1.0) * (nf + 1.0 + df)).sqrt());
            prev = cur;
            cur = next;
        }
    };

    let mut g0 = seed;
    for d in 0..dim {
        fill(d, g0, true);
        g0 *= alpha / ((d + 1) as f64).sqrt();
    }
    let mut g0 = seed;
    for d in 1..dim {
        g0 *= -alpha.conj() / (d as f64).sqrt();
        fill(d, g0, false);
    }
    mat
}

fn apply(mat: &[Vec<Complex64>], v: &FockVector) -> FockVector {
    let amps = mat
        .iter()
        .map(|row| {
            row.iter()
                .zip(v.amps())
                .map(|(m, a)| m * a)
                .sum::<Complex64>()
        })
        .collect();
    FockVector::from_amps(amps)
}

/// Displaced vector D(α)|v⟩ with a fresh matrix build and tail audit.
pub fn displace_fock(alpha: Complex64, v: &FockVector) -> Result<FockVector> {
    let mat = displacement_matrix(alpha, v.dim());
    apply(&mat, v).check_tail()
}

/// Squeezed coherent state |ξ, α⟩ = D(α) S(ξ)|0⟩ in the truncated basis.
pub fn squeezed_coherent_fock(
    xi: &SqueezeParam,
    alpha: Complex64,
    cutoff: usize,
) -> Result<FockVector> {
    let sv = squeezed_vacuum_fock(xi, cutoff)?;
    displace_fock(alpha, &sv)
}

/// Unnormalized Janus vector χ D(α)S(ξ)|0⟩ + η D(α)S(ζ)|0⟩.
///
/// The displacement matrix is built once and applied to both components.
/// Weights are used as given; normalize the spec first if a unit-norm
/// vector is expected.
pub fn build_janus_fock(spec: &JanusSpec, cutoff: usize) -> Result<FockVector> {
    let sv_xi = squeezed_vacuum_fock(&spec.xi, cutoff)?;
    let sv_zeta = squeezed_vacuum_fock(&spec.zeta, cutoff)?;
    let mat = displacement_matrix(spec.alpha, cutoff + 1);
    let dx = apply(&mat, &sv_xi).check_tail()?;
    let dz = apply(&mat, &sv_zeta).check_tail()?;
    let amps = dx
        .amps()
        .iter()
        .zip(dz.amps())
        .map(|(a, b)| spec.chi * a + spec.eta * b)
        .collect();
    FockVector::from_amps(amps).check_tail()
}

/// The `JANUS_CUTOFF` environment variable (≥ 16), if set; it pins the
/// oracle cutoff exactly and disables automatic growth.
pub fn forced_cutoff() -> Option<usize> {
    std::env::var("JANUS_CUTOFF")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&c| c >= 16)
}

/// Default cutoff for a state with squeezing ≤ r_max and displacement
/// |α| = alpha_mag; [`forced_cutoff`] overrides the heuristic.
pub fn cutoff_heuristic(r_max: f64, alpha_mag: f64) -> usize {
    if let Some(forced) = forced_cutoff() {
        return forced;
    }
    let occupancy = alpha_mag.powi(2) + r_max.sinh().powi(2);
    60usize.max((8.0 * occupancy + 40.0).ceil() as usize)
}

/// [`build_janus_fock`] with automatic cutoff selection: starts from
/// [`cutoff_heuristic`] and grows by half until the tail audit passes or
/// [`MAX_AUTO_CUTOFF`] is exceeded.  Returns the vector and the cutoff
/// actually used.  A [`forced_cutoff`] is honored exactly, with no growth.
pub fn build_janus_fock_auto(spec: &JanusSpec) -> Result<(FockVector, usize)> {
    if let Some(forced) = forced_cutoff() {
        return Ok((build_janus_fock(spec, forced)?, forced));
    }
    let mut cutoff = cutoff_heuristic(spec.max_r(), spec.alpha.norm());
    loop {
        match build_janus_fock(spec, cutoff) {
            Ok(v) => return Ok((v, cutoff)),
            Err(JanusError::CutoffTooSmall { .. }) if cutoff * 3 / 2 <= MAX_AUTO_CUTOFF => {
                cutoff = cutoff * 3 / 2;
            }
            Err(e) => return Err(e),
        }
    }
}

/// ⟨bra| a†ᵏ aᵏ |ket⟩ = Σ_{n ≥ k} bₙ* cₙ · n!/(n−k)! on truncated vectors.
pub fn cross_moment_fock(bra: &FockVector, ket: &FockVector, k: u32) -> Complex64 {
    bra.amps()
        .iter()
        .zip(ket.amps())
        .enumerate()
        .skip(k as usize)
        .map(|(n, (b, c))| {
            let mut fact = 1.0;
            for j in 0..k as u64 {
                fact *= (n as u64 - j) as f64;
            }
            b.conj() * c * fact
        })
        .sum()
}

/// ⟨v| a†ᵏ aᵏ |v⟩ (real part; the imaginary part is rounding noise).
pub fn moment_fock(v: &FockVector, k: u32) -> f64 {
    cross_moment_fock(v, v, k).re
}

/// Cross-Wigner kernel (1/π)⟨bra|D(2β)Π|ket⟩ at β = (q + ip)/√2.
///
/// Integrating this kernel over phase space (dq dp) yields ⟨bra|ket⟩; the
/// diagonal bra = ket case is the ordinary Wigner function.
pub fn cross_wigner_fock(bra: &FockVector, ket: &FockVector, q: f64, p: f64) -> Complex64 {
    let beta = Complex64::new(q, p) / std::f64::consts::SQRT_2;
    let mat = displacement_matrix(2.0 * beta, bra.dim().max(ket.dim()));
    let parity: Vec<Complex64> = ket
        .amps()
        .iter()
        .enumerate()
        .map(|(n, a)| if n % 2 == 0 { *a } else { -*a })
        .collect();
    let displaced = apply(&mat, &FockVector::from_amps(parity));
    bra.overlap(&displaced) / std::f64::consts::PI
}

/// Wigner function of |v⟩ at the phase-space point (q, p).
pub fn wigner_fock(v: &FockVector, q: f64, p: f64) -> f64 {
    cross_wigner_fock(v, v, q, p).re
}

/// Variance of the quadratic generator G = ½(e^{−iθ_g} a² + e^{iθ_g} a†²)
/// on a truncated vector.
///
/// The a†² ladder pushes the top two amplitudes out of the window, so the
/// vector is evaluated in a two-slot extension; accuracy rests on the tail
/// audit already performed at build time.
pub fn var_gsq_fock(v: &FockVector, theta_g: f64) -> f64 {
    let a = v.amps();
    let n = a.len();
    // ⟨a²⟩ and ⟨a⁴⟩ from downward ladders.
    let mut a2 = Complex64::ZERO;
    let mut a4 = Complex64::ZERO;
    for (i, amp) in a.iter().enumerate() {
        if i + 2 < n {
            let c2 = (((i + 1) * (i + 2)) as f64).sqrt();
            a2 += amp.conj() * a[i + 2] * c2;
            if i + 4 < n {
                let c4 = c2 * (((i + 3) * (i + 4)) as f64).sqrt();
                a4 += amp.conj() * a[i + 4] * c4;
            }
        }
    }
    // Normally ordered and antinormally ordered quartic pieces.
    let mut nn = 0.0;
    let mut anti = 0.0;
    for (i, amp) in a.iter().enumerate() {
        let w = amp.norm_sqr();
        nn += (i * i.saturating_sub(1)) as f64 * w;
        anti += ((i + 1) * (i + 2)) as f64 * w;
    }
    let phase = Complex64::from_polar(1.0, -theta_g);
    let g_mean = (phase * a2).re;
    let g_sq = 0.25 * (2.0 * (phase * phase * a4).re + nn + anti);
    g_sq - g_mean * g_mean
}
