//! Closed-form roots of a monic cubic.

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::{cabs, ccbrt, csqrt, Real};

/// Roots of `x³ + c2 x² + c1 x + c0`, each polished by guarded Newton steps.
pub fn cubic_roots<T: Real>(c2: Complex<T>, c1: Complex<T>, c0: Complex<T>) -> [Complex<T>; 3] {
    let three = T::of(3.0);
    let d0 = c2 * c2 - c1 * three;
    let d1 = c2 * c2 * c2 * T::of(2.0) - c2 * c1 * T::of(9.0) + c0 * T::of(27.0);
    let disc = csqrt(d1 * d1 - d0 * d0 * d0 * T::of(4.0));
    let plus = (d1 + disc) * T::of(0.5);
    let minus = (d1 - disc) * T::of(0.5);
    let big = if cabs(plus) >= cabs(minus) {
        plus
    } else {
        minus
    };
    let c = ccbrt(big);
    let mut roots = if cabs(c).is_zero() {
        let x = -c2 / three;
        [x, x, x]
    } else {
        let xi = Complex::new(T::of(-0.5), three.sqrt() * T::of(0.5));
        let mut out = [Complex::zero(); 3];
        let mut w = c;
        for r in out.iter_mut() {
            *r = -(c2 + w + d0 / w) / three;
            w *= xi;
        }
        out
    };
    for r in roots.iter_mut() {
        *r = polish(*r, c2, c1, c0);
    }
    roots
}

fn polish<T: Real>(
    mut x: Complex<T>,
    c2: Complex<T>,
    c1: Complex<T>,
    c0: Complex<T>,
) -> Complex<T> {
    let p = |x: Complex<T>| ((x + c2) * x + c1) * x + c0;
    let dp = |x: Complex<T>| (x * T::of(3.0) + c2 * T::of(2.0)) * x + c1;
    let mut px = cabs(p(x));
    for _ in 0..4 {
        let d = dp(x);
        if cabs(d).is_zero() {
            break;
        }
        let cand = x - p(x) / d;
        let pc = cabs(p(cand));
        if pc < px {
            x = cand;
            px = pc;
        } else {
            break;
        }
    }
    x
}
