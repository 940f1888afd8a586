//! Closed-form spectra of the effective 3-level model, used as oracles for
//! the numerical pipeline.
//!
//! All expressions assume optical resonance (no light shift) and no ground
//! relaxation; `omega` is the reduced rate `Ω_R²/Γ`.

use num_complex::Complex;

use crate::linalg::cubic_roots;
use crate::scalar::{ccbrt, csqrt, Real};

fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

fn im<T: Real>(x: T) -> Complex<T> {
    Complex::new(T::zero(), x)
}

/// `αₙ = Ω + i n √(2J² − Ω²)`, with the principal root when `2J² < Ω²`.
/// `α₋ₙ` plays the role of `αₙ*` on both sides of the EP.
pub fn alpha<T: Real>(omega: T, j: T, n: i32) -> Complex<T> {
    let root = csqrt(re(T::of(2.0) * j * j - omega * omega));
    re(omega) + im(T::of(f64::from(n))) * root
}

/// Eigenvalues of the resonant effective `Ĥ_NH`: `{0, −iΩ ± √(2J² − Ω²)}`.
pub fn nhh_operator_spectrum<T: Real>(omega: T, j: T) -> [Complex<T>; 3] {
    let root = csqrt(re(T::of(2.0) * j * j - omega * omega));
    let centre = im(-omega);
    [
        Complex::new(T::zero(), T::zero()),
        centre + root,
        centre - root,
    ]
}

/// The six eigenvalues of the resonant hybrid Liouvillian that do not depend on `q`.
pub fn q_independent_spectrum<T: Real>(omega: T, j: T) -> [Complex<T>; 6] {
    let a = alpha(omega, j, 1);
    let b = alpha(omega, j, -1);
    [
        Complex::new(T::zero(), T::zero()),
        re(-T::of(2.0) * omega),
        -b,
        -b,
        -a,
        -a,
    ]
}

/// `(φ, ν)` of the cubic governing the `q`-dependent triplet.
pub fn triplet_coefficients<T: Real>(omega: T, j: T, q: T) -> (T, T) {
    let o2 = omega * omega;
    let j2 = j * j;
    let phi = T::of(54.0) * j2 + o2 * (-T::of(4.0) * q * q + T::of(18.0) * q - T::of(27.0));
    let nu =
        omega * q * (T::of(324.0) * j2 + o2 * (T::of(8.0) * q * q - T::of(54.0) * q + T::of(81.0)));
    (phi, nu)
}

/// The `q`-dependent triplet `[λ₇, λ₈, λ₉]`.
///
/// Each is `(2/9)(u + Ω(2q − 9))` where `u` runs over the roots of
/// `u³ + 3φu − 2ν = 0` in Cardano form. `λ₇` uses the principal cube root
/// of `ζ = ν + √(ν² + φ³)`; `λ₈`, `λ₉` the two rotated roots.
pub fn hybrid_triplet<T: Real>(omega: T, j: T, q: T) -> [Complex<T>; 3] {
    let (phi, nu) = triplet_coefficients(omega, j, q);
    let disc = csqrt(re(nu * nu + phi * phi * phi));
    // pick the larger-modulus branch so that ζ only vanishes with φ
    let plus = re(nu) + disc;
    let minus = re(nu) - disc;
    let zeta = if plus.norm_sqr() >= minus.norm_sqr() {
        plus
    } else {
        minus
    };
    let shift = omega * (T::of(2.0) * q - T::of(9.0));
    let scale = T::of(2.0) / T::of(9.0);
    if zeta.norm_sqr() == T::zero() {
        let v = re(shift * scale);
        return [v, v, v];
    }
    let a = ccbrt(zeta);
    let p = re(phi) / a;
    let half = T::of(0.5);
    let s3 = T::of(3.0).sqrt();
    let w_plus = Complex::new(half, half * s3);
    let w_minus = Complex::new(half, -half * s3);
    let l7 = -p + a + re(shift);
    let l8 = p * w_plus - a * w_minus + re(shift);
    let l9 = p * w_minus - a * w_plus + re(shift);
    [l7 * scale, l8 * scale, l9 * scale]
}

/// All nine eigenvalues of the resonant hybrid Liouvillian: the six
/// `q`-independent ones followed by [`hybrid_triplet`].
pub fn hybrid_spectrum<T: Real>(omega: T, j: T, q: T) -> Vec<Complex<T>> {
    let mut v = q_independent_spectrum(omega, j).to_vec();
    v.extend(hybrid_triplet(omega, j, q));
    v
}

/// Spectrum of the resonant NHH superoperator (`q = 0`):
/// `{0, −2Ω, −α₁*, −α₁*, −α₁, −α₁, −2α₁, −2α₁*, −2Ω}`.
pub fn nhh_superop_spectrum<T: Real>(omega: T, j: T) -> Vec<Complex<T>> {
    let two = T::of(2.0);
    let mut v = q_independent_spectrum(omega, j).to_vec();
    v.extend([
        -alpha(omega, j, 1) * two,
        -alpha(omega, j, -1) * two,
        re(-two * omega),
    ]);
    v
}

/// Large-`J` limit of the real-part splitting between `λ₇` and `λ₈`, `λ₉`.
pub fn jump_splitting_limit<T: Real>(omega: T, q: T) -> T {
    T::of(4.0) * omega * q / T::of(3.0)
}

/// Coefficients `(c2, c1, c0)` of the monic characteristic polynomial of the
/// detuned `Ĥ_NH`: `x³ + 2iΩx² − (2J² + δ²)x − 2iΩδ²`.
pub fn characteristic_coefficients<T: Real>(
    omega: T,
    j: T,
    delta: T,
) -> (Complex<T>, Complex<T>, Complex<T>) {
    let two = T::of(2.0);
    (
        im(two * omega),
        re(-(two * j * j + delta * delta)),
        im(-two * omega * delta * delta),
    )
}

/// Roots of [`characteristic_coefficients`].
pub fn detuned_nhh_spectrum<T: Real>(omega: T, j: T, delta: T) -> [Complex<T>; 3] {
    let (c2, c1, c0) = characteristic_coefficients(omega, j, delta);
    cubic_roots(c2, c1, c0)
}

/// Coupling of the resonant operator EP2, `2J² = Ω²`.
pub fn ep2_coupling<T: Real>(omega: T) -> T {
    omega / T::of(2.0).sqrt()
}

/// Couplings `J > 0` at which two roots of the detuned characteristic
/// polynomial coincide, ascending.
///
/// With `x = iy` the polynomial is real; its discriminant vanishes where
/// `s = 2J² + δ²` solves `s³ − Ω²s² − 18Ω²δ²s + 16Ω⁴δ² + 27Ω²δ⁴ = 0`.
pub fn degenerate_couplings<T: Real>(omega: T, delta: T) -> Vec<T> {
    let o2 = omega * omega;
    let d2 = delta * delta;
    let roots = cubic_roots(
        re(-o2),
        re(-T::of(18.0) * o2 * d2),
        re(T::of(16.0) * o2 * o2 * d2 + T::of(27.0) * o2 * d2 * d2),
    );
    let scale = o2.max(d2).max(T::one());
    let tol = T::of(1e-9) * scale;
    let mut out: Vec<T> = roots
        .iter()
        .filter(|s| s.im.abs() <= tol && s.re > d2 + tol)
        .map(|s| ((s.re - d2) / T::of(2.0)).sqrt())
        .filter(|&j| j > T::zero())
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    out.dedup_by(|a, b| (*a - *b).abs() <= T::of(1e-9) * (*b).max(T::one()));
    out
}

/// Detuning, coupling and triple eigenvalue of the operator EP3 at `δ > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriplePoint<T> {
    pub delta: T,
    pub j: T,
    pub energy: Complex<T>,
}

/// `δ = 2Ω/(3√3)`, `J = 4Ω/(3√3)`, `E = −2iΩ/3`.
pub fn triple_point<T: Real>(omega: T) -> TriplePoint<T> {
    let d = T::of(3.0) * T::of(3.0).sqrt();
    TriplePoint {
        delta: T::of(2.0) * omega / d,
        j: T::of(4.0) * omega / d,
        energy: im(-T::of(2.0) * omega / T::of(3.0)),
    }
}

/// The coalesced eigenvector at [`triple_point`], in the ground basis order
/// `|1,1⟩, |1,0⟩, |1,−1⟩`: `(1/√3, (√3 − 3i)/6, (√3 + 3i)/6)`.
pub fn triple_point_vector<T: Real>() -> Vec<Complex<T>> {
    let s3 = T::of(3.0).sqrt();
    let six = T::of(6.0);
    vec![
        re(T::one() / s3),
        Complex::new(s3 / six, -T::of(3.0) / six),
        Complex::new(s3 / six, T::of(3.0) / six),
    ]
}
