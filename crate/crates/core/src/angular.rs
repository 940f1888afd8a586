//! Angular momentum: exact Wigner 3j symbols and spin matrices.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// A non-negative or signed half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger {
    twice: i32,
}

impl HalfInteger {
    pub const fn from_twice(twice: i32) -> Self {
        Self { twice }
    }

    pub const fn integer(n: i32) -> Self {
        Self { twice: 2 * n }
    }

    pub const fn twice_value(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// Projections `j, j−1, …, −j`.
    pub fn projections(self) -> impl Iterator<Item = HalfInteger> {
        let t = self.twice;
        (0..=t.max(-1)).map(move |k| HalfInteger::from_twice(t - 2 * k))
    }

    /// Number of projections, `2j + 1`.
    pub fn multiplicity(self) -> usize {
        (self.twice + 1).max(0) as usize
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

fn factorial(n: i64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Square of the 3j symbol as an exact rational, with the sign of the symbol.
/// `None` when a selection rule kills the symbol.
pub fn wigner3j_squared(
    j1: HalfInteger,
    j2: HalfInteger,
    j3: HalfInteger,
    m1: HalfInteger,
    m2: HalfInteger,
    m3: HalfInteger,
) -> Option<(BigRational, i8)> {
    let (tj1, tj2, tj3) = (j1.twice, j2.twice, j3.twice);
    let (tm1, tm2, tm3) = (m1.twice, m2.twice, m3.twice);
    if tj1 < 0 || tj2 < 0 || tj3 < 0 {
        return None;
    }
    if tm1 + tm2 + tm3 != 0 {
        return None;
    }
    if tm1.abs() > tj1 || tm2.abs() > tj2 || tm3.abs() > tj3 {
        return None;
    }
    // projections must match their j in parity; total must be integral
    if !(tj1 - tm1).is_even() || !(tj2 - tm2).is_even() || !(tj3 - tm3).is_even() {
        return None;
    }
    if (tj1 + tj2 + tj3) % 2 != 0 {
        return None;
    }
    if tj3 > tj1 + tj2 || tj3 < (tj1 - tj2).abs() {
        return None;
    }
    let h = |x: i32| -> i64 { i64::from(x) / 2 };
    // all of the following are integers by the checks above
    let j1_plus_j2_minus_j3 = h(tj1 + tj2 - tj3);
    let j1_minus_j2_plus_j3 = h(tj1 - tj2 + tj3);
    let neg_j1_plus_j2_plus_j3 = h(-tj1 + tj2 + tj3);
    let j_sum_plus_1 = h(tj1 + tj2 + tj3) + 1;

    let delta = BigRational::new(
        factorial(j1_plus_j2_minus_j3)
            * factorial(j1_minus_j2_plus_j3)
            * factorial(neg_j1_plus_j2_plus_j3),
        factorial(j_sum_plus_1),
    );
    let prefactor = factorial(h(tj1 + tm1))
        * factorial(h(tj1 - tm1))
        * factorial(h(tj2 + tm2))
        * factorial(h(tj2 - tm2))
        * factorial(h(tj3 + tm3))
        * factorial(h(tj3 - tm3));

    // Racah sum over k with every factorial argument non-negative
    let t1 = h(tj3 - tj2 + tm1);
    let t2 = h(tj3 - tj1 - tm2);
    let t3 = j1_plus_j2_minus_j3;
    let t4 = h(tj1 - tm1);
    let t5 = h(tj2 + tm2);
    let kmin = 0.max(-t1).max(-t2);
    let kmax = t3.min(t4).min(t5);
    let mut sum = BigRational::zero();
    for k in kmin..=kmax {
        let den = factorial(k)
            * factorial(t1 + k)
            * factorial(t2 + k)
            * factorial(t3 - k)
            * factorial(t4 - k)
            * factorial(t5 - k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return None;
    }
    let phase_exp = h(tj1 - tj2 - tm3);
    let mut sign: i8 = if phase_exp.rem_euclid(2) == 0 { 1 } else { -1 };
    if sum.is_negative() {
        sign = -sign;
    }
    let squared = delta * BigRational::from_integer(prefactor) * &sum * &sum;
    Some((squared, sign))
}

/// Exact-rational to scalar conversion through 32-bit limbs, so quad-double
/// targets keep their full precision.
pub fn rational_to_real<T: Real>(r: &BigRational) -> T {
    bigint_to_real::<T>(r.numer()) / bigint_to_real::<T>(r.denom())
}

fn bigint_to_real<T: Real>(b: &BigInt) -> T {
    let (sign, digits) = b.to_u32_digits();
    let base = T::of(4_294_967_296.0);
    let mut acc = T::zero();
    for &d in digits.iter().rev() {
        acc = acc * base + T::of(f64::from(d));
    }
    if sign == Sign::Minus {
        -acc
    } else {
        acc
    }
}

/// Wigner 3j symbol `(j1 j2 j3; m1 m2 m3)`; zero whenever a selection rule fails.
pub fn wigner3j<T: Real>(
    j1: HalfInteger,
    j2: HalfInteger,
    j3: HalfInteger,
    m1: HalfInteger,
    m2: HalfInteger,
    m3: HalfInteger,
) -> T {
    match wigner3j_squared(j1, j2, j3, m1, m2, m3) {
        None => T::zero(),
        Some((sq, sign)) => {
            let v = rational_to_real::<T>(&sq).sqrt();
            if sign < 0 {
                -v
            } else {
                v
            }
        }
    }
}

/// `(Fx, Fy, Fz)` in the basis `m = f, f−1, …, −f`.
pub fn spin_ops<T: Real>(f: HalfInteger) -> (ComplexMatrix<T>, ComplexMatrix<T>, ComplexMatrix<T>) {
    let n = f.multiplicity();
    let tf = i64::from(f.twice);
    let tm = |a: usize| tf - 2 * a as i64;
    let fz = ComplexMatrix::from_fn(n, n, |a, b| {
        if a == b {
            Complex::new(T::of(tm(a) as f64) / T::of(2.0), T::zero())
        } else {
            Complex::zero()
        }
    });
    // ⟨m+1|F+|m⟩ = sqrt(f(f+1) − m(m+1)), with 4× both sides kept integral
    let raise = |a: usize| -> T {
        let m = tm(a);
        T::of((tf * (tf + 2) - m * (m + 2)) as f64).sqrt() / T::of(2.0)
    };
    let half = T::of(0.5);
    let fx = ComplexMatrix::from_fn(n, n, |r, c| {
        if r + 1 == c {
            Complex::new(raise(c) * half, T::zero())
        } else if c + 1 == r {
            Complex::new(raise(r) * half, T::zero())
        } else {
            Complex::zero()
        }
    });
    let fy = ComplexMatrix::from_fn(n, n, |r, c| {
        if r + 1 == c {
            Complex::new(T::zero(), -raise(c) * half)
        } else if c + 1 == r {
            Complex::new(T::zero(), raise(r) * half)
        } else {
            Complex::zero()
        }
    });
    (fx, fy, fz)
}
