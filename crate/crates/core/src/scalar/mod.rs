//! Real scalar abstraction.
//!
//! Every numerical routine in the crate is written against [`Real`], so the
//! same code runs in `f64` for everyday work and in [`QuadDouble`] when a
//! high-order coalescence has to be resolved below the `f64` noise floor.

mod quad;

pub use quad::QuadDouble;

use num_complex::Complex;
use num_traits::{Num, NumAssign};
use std::fmt::{Debug, Display, LowerExp};
use std::ops::Neg;

/// Field operations plus the handful of elementary functions the solvers need.
pub trait Real:
    Copy
    + PartialOrd
    + Num
    + NumAssign
    + Neg<Output = Self>
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Exact conversion of an `f64` literal.
    fn of(x: f64) -> Self;
    /// Nearest `f64`.
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    /// Unit roundoff.
    fn epsilon() -> Self;
    fn is_finite(self) -> bool;

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn hypot(self, other: Self) -> Self {
        let a = self.abs();
        let b = other.abs();
        let (big, small) = if a > b { (a, b) } else { (b, a) };
        if big == Self::zero() {
            return big;
        }
        let r = small / big;
        big * (Self::one() + r * r).sqrt()
    }

    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one() / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    /// Real cube root: `f64` seed polished by Newton steps in `Self`.
    fn cbrt(self) -> Self {
        if self == Self::zero() {
            return self;
        }
        let three = Self::of(3.0);
        let mut x = Self::of(self.to_f64().cbrt());
        for _ in 0..4 {
            x -= (x * x * x - self) / (three * x * x);
        }
        x
    }

    fn from_usize(n: usize) -> Self {
        Self::of(n as f64)
    }
}

macro_rules! impl_real_prim {
    ($t:ty) => {
        impl Real for $t {
            #[inline]
            fn of(x: f64) -> Self {
                x as $t
            }
            #[inline]
            fn to_f64(self) -> f64 {
                self as f64
            }
            #[inline]
            fn sqrt(self) -> Self {
                <$t>::sqrt(self)
            }
            #[inline]
            fn epsilon() -> Self {
                <$t>::EPSILON
            }
            #[inline]
            fn is_finite(self) -> bool {
                <$t>::is_finite(self)
            }
            #[inline]
            fn abs(self) -> Self {
                <$t>::abs(self)
            }
            #[inline]
            fn hypot(self, other: Self) -> Self {
                <$t>::hypot(self, other)
            }
            #[inline]
            fn powi(self, n: i32) -> Self {
                <$t>::powi(self, n)
            }
            #[inline]
            fn cbrt(self) -> Self {
                <$t>::cbrt(self)
            }
        }
    };
}

impl_real_prim!(f32);
impl_real_prim!(f64);

/// Modulus of a complex number without overflow in the squares.
#[inline]
pub fn cabs<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}

/// Principal square root.
pub fn csqrt<T: Real>(z: Complex<T>) -> Complex<T> {
    let r = cabs(z);
    if r == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    let half = T::of(0.5);
    let t = ((r + z.re.abs()) * half).sqrt();
    if z.re >= T::zero() {
        Complex::new(t, z.im / (t + t))
    } else {
        let im = if z.im < T::zero() { -t } else { t };
        Complex::new(z.im.abs() / (t + t), im)
    }
}

/// Principal cube root, seeded in `f64` and polished with Newton steps.
pub fn ccbrt<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.re == T::zero() && z.im == T::zero() {
        return z;
    }
    let zf = Complex::new(z.re.to_f64(), z.im.to_f64());
    let seed = zf.powf(1.0 / 3.0);
    let three = T::of(3.0);
    let mut w = Complex::new(T::of(seed.re), T::of(seed.im));
    for _ in 0..4 {
        let w2 = w * w;
        let den = w2 * three;
        if den.re == T::zero() && den.im == T::zero() {
            break;
        }
        w = w - (w2 * w - z) / den;
    }
    w
}

/// Converts between scalar types via `f64` components, so any extra
/// precision of the source is dropped.
pub fn cast_complex<T: Real, U: Real>(z: Complex<T>) -> Complex<U> {
    Complex::new(U::of(z.re.to_f64()), U::of(z.im.to_f64()))
}
