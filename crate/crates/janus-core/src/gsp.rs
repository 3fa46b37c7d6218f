//! Generalized squeezing functions F_{p,q}(z) and their polynomial cores.
//!
//! The functions are defined by the power series
//!
//! F_{p,q}(z) = Σ_{n ≥ n_min} (2n)!/(2n−p)! · (2n+q−p−1)!!/(2n)!! · zⁿ,
//!
//! with n_min = max(⌈p/2⌉, (p−q)/2) and the conventions (−1)!! = 0!! = 1.
//! They vanish identically unless p ≡ q (mod 2).  Each admits the closed
//! form F_{p,q}(z) = P_{p,q}(z)/(1−z)^{(p+q+1)/2} where P_{p,q} is a
//! polynomial with non-negative integer coefficients.  The P satisfy three
//! exact recurrences:
//!
//! 1. P_{p+1,q+1} = ((2p+q+1)z − p) P_{p,q} + 2z(1−z) P′_{p,q}
//! 2. P_{p,q+2}   = ((2p)z + q+1−p) P_{p,q} + 2z(1−z) P′_{p,q}
//! 3. P_{p+2,q}   = P_{p+1,q+1} + q(z−1) P_{p+1,q−1}
//!
//! together with the reflection identity P_{p,q}(z) = z^{(p−q)/2} P_{q,p}(z).
//! Recurrences 1 and 2 build the upper triangle p ≤ q from P_{0,0} = 1;
//! recurrence 3 descends into p > q.  All polynomial arithmetic is exact
//! (arbitrary-precision rationals); floats enter only at evaluation time.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num::complex::Complex64;
use num::{BigInt, BigRational, ToPrimitive, Zero};

use crate::error::{JanusError, Result};

/// Largest index pair (p, q both ≤ cap) kept in the polynomial memo table.
pub const MEMO_CAP: u32 = 16;

/// Convergence controls for [`f_series`].
#[derive(Clone, Copy, Debug)]
pub struct SeriesControl {
    /// Absolute term threshold; summation stops after three consecutive
    /// terms below it.
    pub tol: f64,
    /// Hard budget on summed terms before giving up.
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            tol: 1e-14,
            max_terms: 4000,
        }
    }
}

/// Exact polynomial core P_{p,q} of a generalized squeezing function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqueezePoly {
    p: u32,
    q: u32,
    /// Coefficients c₀, c₁, … of 1, z, z², …; trailing zeros trimmed, so
    /// the zero polynomial (odd p + q) has an empty vector.
    coeffs: Vec<BigRational>,
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn trim(mut coeffs: Vec<BigRational>) -> Vec<BigRational> {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

impl SqueezePoly {
    fn new(p: u32, q: u32, coeffs: Vec<BigRational>) -> Self {
        Self {
            p,
            q,
            coeffs: trim(coeffs),
        }
    }

    /// Index pair (p, q) this core belongs to.
    pub fn indices(&self) -> (u32, u32) {
        (self.p, self.q)
    }

    /// Coefficients of 1, z, z², … with trailing zeros trimmed.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// True for the identically zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Floating-point Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
        }
        acc
    }

    /// Exact Horner evaluation at a rational point.
    pub fn eval_rational(&self, z: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Coefficients as a `;`-joined string, lowest order first ("0;1;2" for
    /// z + 2z²).  Integer coefficients print without a denominator.
    pub fn coeff_line(&self) -> String {
        self.coeffs
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.numer().to_string()
                } else {
                    c.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Shared per-coefficient step of recurrences 1 and 2:
/// Q = (a z + b) P + 2z(1−z) P′, i.e. qᵢ = (a − 2(i−1)) cᵢ₋₁ + (b + 2i) cᵢ.
fn rec_affine(c: &[BigRational], a: i64, b: i64) -> Vec<BigRational> {
    let n = c.len();
    let mut out = vec![BigRational::zero(); n + 1];
    for (i, slot) in out.iter_mut().enumerate() {
        let i64i = i as i64;
        let mut acc = BigRational::zero();
        if i >= 1 && i - 1 < n {
            acc += &c[i - 1] * rat(a - 2 * (i64i - 1));
        }
        if i < n {
            acc += &c[i] * rat(b + 2 * i64i);
        }
        *slot = acc;
    }
    out
}

/// Recurrence 1: (p, q) → (p+1, q+1).
fn rec1_step(p: u32, q: u32, c: &[BigRational]) -> Vec<BigRational> {
    rec_affine(c, 2 * p as i64 + q as i64 + 1, -(p as i64))
}

/// Recurrence 2: (p, q) → (p, q+2).
fn rec2_step(p: u32, q: u32, c: &[BigRational]) -> Vec<BigRational> {
    rec_affine(c, 2 * p as i64, q as i64 + 1 - p as i64)
}

/// Upper-triangle construction of P_{p,q} (requires p ≤ q, p ≡ q mod 2):
/// recurrence 1 along the diagonal to (p, p), then recurrence 2 upward.
///
/// Exposed separately from [`poly`] so the recurrence paths can be compared
/// for exact path independence.
pub fn poly_rec12(p: u32, q: u32) -> SqueezePoly {
    assert!(p <= q, "poly_rec12 requires p <= q, got ({p}, {q})");
    assert!((p + q) % 2 == 0, "poly_rec12 requires p ≡ q (mod 2)");
    let mut coeffs = vec![rat(1)];
    for i in 0..p {
        coeffs = rec1_step(i, i, &coeffs);
    }
    let mut qq = p;
    while qq < q {
        coeffs = rec2_step(p, qq, &coeffs);
        qq += 2;
    }
    SqueezePoly::new(p, q, coeffs)
}

/// One step of recurrence 3, P_{p,q} = P_{p−1,q+1} + q(z−1)P_{p−1,q−1},
/// with both inputs built through [`poly_rec12`] (requires 2 ≤ p ≤ q).
///
/// This reaches (p, q) through a genuinely different recurrence path than
/// [`poly_rec12`]; the two must agree coefficient for coefficient.
pub fn poly_rec3(p: u32, q: u32) -> SqueezePoly {
    assert!((2..=q).contains(&p), "poly_rec3 requires 2 <= p <= q");
    assert!((p + q) % 2 == 0, "poly_rec3 requires p ≡ q (mod 2)");
    let a = poly_rec12(p - 1, q + 1);
    let b = poly_rec12(p - 1, q - 1);
    SqueezePoly::new(p, q, rec3_combine(&a.coeffs, q, &b.coeffs))
}

/// out = A + q·(z−1)·B on raw coefficient vectors.
fn rec3_combine(a: &[BigRational], q: u32, b: &[BigRational]) -> Vec<BigRational> {
    let len = a.len().max(b.len() + 1);
    let mut out = vec![BigRational::zero(); len];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    let qf = rat(q as i64);
    for (i, c) in b.iter().enumerate() {
        let scaled = c * &qf;
        out[i + 1] += &scaled;
        out[i] -= &scaled;
    }
    out
}

fn canonical(p: u32, q: u32) -> SqueezePoly {
    if (p + q) % 2 != 0 {
        return SqueezePoly::new(p, q, Vec::new());
    }
    if p <= q {
        return poly_rec12(p, q);
    }
    // Descend with recurrence 3 until the subterms land in p ≤ q.
    let a = poly(p - 1, q + 1);
    if q == 0 {
        return SqueezePoly::new(p, q, a.coeffs.clone());
    }
    let b = poly(p - 1, q - 1);
    SqueezePoly::new(p, q, rec3_combine(&a.coeffs, q, &b.coeffs))
}

fn memo() -> &'static RwLock<HashMap<(u32, u32), Arc<SqueezePoly>>> {
    static MEMO: OnceLock<RwLock<HashMap<(u32, u32), Arc<SqueezePoly>>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Memoized polynomial core P_{p,q}; pairs with p, q ≤ [`MEMO_CAP`] are
/// cached, larger ones are built fresh on every call.
pub fn poly(p: u32, q: u32) -> Arc<SqueezePoly> {
    let cached = p <= MEMO_CAP && q <= MEMO_CAP;
    if cached {
        if let Some(hit) = memo().read().expect("memo poisoned").get(&(p, q)) {
            return Arc::clone(hit);
        }
    }
    let built = Arc::new(canonical(p, q));
    if cached {
        memo()
            .write()
            .expect("memo poisoned")
            .entry((p, q))
            .or_insert_with(|| Arc::clone(&built));
    }
    built
}

/// F_{p,q}(z) by direct summation of the defining series.
///
/// Terminates once three consecutive terms fall below `ctl.tol` in absolute
/// value; fails with [`JanusError::NoConvergence`] when `ctl.max_terms` is
/// exhausted first.  Requires |z| < 1.
pub fn f_series(p: u32, q: u32, z: Complex64, ctl: &SeriesControl) -> Result<Complex64> {
    if (p + q) % 2 != 0 {
        return Ok(Complex64::ZERO);
    }
    let (pi, qi) = (p as i64, q as i64);
    let n_min = ((pi + 1) / 2).max((pi - qi) / 2).max(0);

    // Leading coefficient at n_min, where all products are still small:
    // (2n)!/(2n−p)! times (2n+q−p−1)!!/(2n)!!.
    let two_n = 2 * n_min;
    let mut lead = 1.0;
    for j in 0..pi {
        lead *= (two_n - j) as f64;
    }
    let mut k = two_n + qi - pi - 1;
    while k >= 1 {
        lead *= k as f64;
        k -= 2;
    }
    let mut k = two_n;
    while k >= 2 {
        lead /= k as f64;
        k -= 2;
    }

    let mut term = Complex64::new(lead, 0.0) * z.powi(n_min as i32);
    let mut sum = Complex64::ZERO;
    let mut streak = 0_u32;
    let mut n = n_min;
    for _ in 0..ctl.max_terms {
        sum += term;
        if term.norm() < ctl.tol {
            streak += 1;
            if streak == 3 {
                return Ok(sum);
            }
        } else {
            streak = 0;
        }
        let num = ((2 * n + 1) * (2 * n + qi - pi + 1)) as f64;
        let den = ((2 * n + 2 - pi) * (2 * n + 1 - pi)) as f64;
        term *= Complex64::new(num / den, 0.0) * z;
        n += 1;
    }
    Err(JanusError::NoConvergence {
        max_terms: ctl.max_terms,
        z_mag: z.norm(),
    })
}

/// F_{p,q}(z) through the closed form P_{p,q}(z)/(1−z)^{(p+q+1)/2}.
///
/// The branch factor uses the principal power, which is unambiguous for
/// |z| < 1 since Re(1−z) > 0 there.
pub fn f_closed(p: u32, q: u32, z: Complex64) -> Complex64 {
    if (p + q) % 2 != 0 {
        return Complex64::ZERO;
    }
    let core = poly(p, q).eval(z);
    let exponent = -((p + q + 1) as f64) / 2.0;
    core * (Complex64::ONE - z).powf(exponent)
}

/// Exact residual polynomial of the reflection identity, oriented so the
/// monomial shift is non-negative: P_{hi,lo}(z) − z^{(hi−lo)/2} P_{lo,hi}(z)
/// with (hi, lo) = (max, min)(p, q).  Identically zero when the identity
/// holds.
pub fn symmetry_residual(p: u32, q: u32) -> SqueezePoly {
    let (hi, lo) = (p.max(q), p.min(q));
    let direct = poly(hi, lo);
    let reflected = poly(lo, hi);
    let shift = ((hi - lo) / 2) as usize;
    let len = direct
        .coeffs
        .len()
        .max(reflected.coeffs.len() + shift)
        .max(1);
    let mut out = vec![BigRational::zero(); len];
    for (i, c) in direct.coeffs.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in reflected.coeffs.iter().enumerate() {
        out[i + shift] -= c;
    }
    SqueezePoly::new(hi, lo, out)
}

/// Floating-point residual |P_{hi,lo}(z) − z^{(hi−lo)/2} P_{lo,hi}(z)| of
/// the reflection identity, with the same orientation as
/// [`symmetry_residual`].
pub fn check_symmetry(p: u32, q: u32, z: Complex64) -> f64 {
    let (hi, lo) = (p.max(q), p.min(q));
    let shift = ((hi - lo) / 2) as i32;
    (poly(hi, lo).eval(z) - z.powi(shift) * poly(lo, hi).eval(z)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn coeffs_of(p: u32, q: u32) -> Vec<i64> {
        poly(p, q)
            .coeffs()
            .iter()
            .map(|c| {
                assert!(c.is_integer(), "P_({p},{q}) has non-integer coefficient");
                c.numer().to_i64().unwrap()
            })
            .collect()
    }

    #[test]
    fn polynomial_table_through_degree_five() {
        let table: &[(u32, u32, &[i64])] = &[
            (0, 0, &[1]),
            (0, 2, &[1]),
            (0, 4, &[3]),
            (1, 1, &[0, 1]),
            (1, 3, &[0, 3]),
            (1, 5, &[0, 15]),
            (2, 0, &[0, 1]),
            (2, 2, &[0, 1, 2]),
            (2, 4, &[0, 3, 12]),
            (3, 1, &[0, 0, 3]),
            (3, 3, &[0, 0, 9, 6]),
            (3, 5, &[0, 0, 45, 60]),
            (4, 0, &[0, 0, 3]),
            (4, 2, &[0, 0, 3, 12]),
            (4, 4, &[0, 0, 9, 72, 24]),
            (5, 1, &[0, 0, 0, 15]),
            (5, 3, &[0, 0, 0, 45, 60]),
            (5, 5, &[0, 0, 0, 225, 600, 120]),
        ];
        for &(p, q, want) in table {
            assert_eq!(coeffs_of(p, q), want, "P_({p},{q})");
        }
    }

    #[test]
    fn odd_parity_gives_zero() {
        assert!(poly(2, 3).is_zero());
        assert_eq!(f_closed(1, 4, Complex64::new(0.3, 0.1)), Complex64::ZERO);
        let ctl = SeriesControl::default();
        assert_eq!(
            f_series(3, 0, Complex64::new(0.2, 0.0), &ctl).unwrap(),
            Complex64::ZERO
        );
    }

    #[test]
    fn rec3_path_matches_rec12_path() {
        for p in 2..=8_u32 {
            for q in (p..=8).step_by(2) {
                if (p + q) % 2 != 0 {
                    continue;
                }
                assert_eq!(poly_rec3(p, q), poly_rec12(p, q), "({p},{q})");
            }
        }
    }

    #[test]
    fn reflection_identity_is_exact() {
        for p in 0..=8_u32 {
            for q in 0..=8_u32 {
                if (p + q) % 2 != 0 {
                    continue;
                }
                assert!(symmetry_residual(p, q).is_zero(), "({p},{q})");
            }
        }
    }

    #[test]
    fn series_agrees_with_closed_form() {
        let ctl = SeriesControl::default();
        let points = [
            Complex64::new(0.4, 0.0),
            Complex64::new(-0.35, 0.2),
            Complex64::new(0.1, -0.6),
            Complex64::new(0.0, 0.0),
        ];
        for &z in &points {
            for p in 0..=6_u32 {
                for q in 0..=6_u32 {
                    let series = f_series(p, q, z, &ctl).unwrap();
                    let closed = f_closed(p, q, z);
                    let scale = closed.norm().max(1.0);
                    assert!(
                        (series - closed).norm() / scale < 1e-12,
                        "F_({p},{q})({z}) series {series} closed {closed}"
                    );
                }
            }
        }
    }

    #[test]
    fn series_reports_nonconvergence() {
        let ctl = SeriesControl {
            tol: 1e-14,
            max_terms: 10,
        };
        let err = f_series(4, 4, Complex64::new(0.95, 0.0), &ctl).unwrap_err();
        assert!(matches!(err, JanusError::NoConvergence { max_terms: 10, .. }));
    }

    #[test]
    fn closed_form_at_origin_reduces_to_leading_coefficient() {
        // F_{0,0}(0) = 1, F_{1,1}(0) = 0, and the p > q entries vanish at 0.
        assert_relative_eq!(f_closed(0, 0, Complex64::ZERO).re, 1.0);
        assert_eq!(f_closed(1, 1, Complex64::ZERO), Complex64::ZERO);
        assert_eq!(f_closed(4, 0, Complex64::ZERO), Complex64::ZERO);
    }

    #[test]
    fn coeff_line_prints_low_order_first() {
        assert_eq!(poly(2, 2).coeff_line(), "0;1;2");
        assert_eq!(poly(0, 0).coeff_line(), "1");
        assert_eq!(poly(1, 2).coeff_line(), "");
    }
}
