//! Operator ↔ superoperator spectral correspondence.

use num_complex::Complex;

use super::matching::multiset_distance;
use super::SpectraError;
use crate::linalg::{eigvals, ComplexMatrix};
use crate::scalar::Real;

/// `{−i(E_i − E_j*)}` over all ordered pairs of eigenvalues of `h_nh`:
/// the spectrum of `ρ ↦ −i(H_NH ρ − ρ H_NHᴴ)`.
pub fn pairwise_spectrum<T: Real>(
    h_nh: &ComplexMatrix<T>,
) -> Result<Vec<Complex<T>>, SpectraError> {
    let e = eigvals(h_nh)?;
    let minus_i = Complex::new(T::zero(), -T::one());
    Ok(e.iter()
        .flat_map(|&a| e.iter().map(move |&b| minus_i * (a - b.conj())))
        .collect())
}

/// Largest mismatch between [`pairwise_spectrum`] and a superoperator
/// spectrum under optimal pairing.
pub fn correspondence_check<T: Real>(
    h_nh: &ComplexMatrix<T>,
    super_spectrum: &[Complex<T>],
) -> Result<T, SpectraError> {
    let d = h_nh.rows();
    if super_spectrum.len() != d * d {
        return Err(SpectraError::DimensionMismatch {
            expected: d * d,
            found: super_spectrum.len(),
        });
    }
    let predicted = pairwise_spectrum(h_nh)?;
    Ok(multiset_distance(&predicted, super_spectrum))
}
