//! Matrix exponential by scaling and squaring with a degree-13 Padé approximant.

use num_complex::Complex;

use super::lu::solve;
use super::matrix::ComplexMatrix;
use super::LinalgError;
use crate::scalar::Real;

const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371_920_351_148_152;

pub fn expm<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let norm = a.norm1().to_f64();
    if !norm.is_finite() {
        return Err(LinalgError::Overflow { norm });
    }
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    if s > 1000 {
        return Err(LinalgError::Overflow { norm });
    }
    let a = a.scale_real(T::of(2f64.powi(-s)));
    let b = |k: usize| Complex::new(T::of(PADE13[k]), T::zero());
    let id = ComplexMatrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let lin = |c6: usize, c4: usize, c2: usize| -> ComplexMatrix<T> {
        let mut m = a6.scale(b(c6));
        m += &a4.scale(b(c4));
        m += &a2.scale(b(c2));
        m
    };
    let mut u_inner = &a6 * &lin(13, 11, 9);
    u_inner += &lin(7, 5, 3);
    u_inner += &id.scale(b(1));
    let u = &a * &u_inner;
    let mut v = &a6 * &lin(12, 10, 8);
    v += &lin(6, 4, 2);
    v += &id.scale(b(0));
    let mut r = solve(&(&v - &u), &(&v + &u))?;
    for _ in 0..s {
        r = &r * &r;
    }
    if r.data()
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(LinalgError::Overflow { norm });
    }
    Ok(r)
}
