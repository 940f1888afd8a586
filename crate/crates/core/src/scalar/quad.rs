//! Quad-double arithmetic: an unevaluated sum of four `f64` limbs giving
//! roughly 62 significant decimal digits.
//!
//! The add, multiply and divide kernels follow the classic error-free
//! transformation scheme (two-sum, Dekker product, renormalisation).

use num_traits::{Num, One, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{
    Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign,
};

use super::Real;

/// Four non-overlapping limbs, largest first.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct QuadDouble([f64; 4]);

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134_217_729.0;
    const THRESH: f64 = 6.696_928_794_914_17e299;
    if !(-THRESH..=THRESH).contains(&a) {
        let s = a * 3.725_290_298_461_914e-9;
        let t = SPLITTER * s;
        let hi = t - (t - s);
        let lo = s - hi;
        (hi * 268_435_456.0, lo * 268_435_456.0)
    } else {
        let t = SPLITTER * a;
        let hi = t - (t - a);
        (hi, a - hi)
    }
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

#[inline]
fn three_sum(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    let (t1, t2) = two_sum(a, b);
    let (a, t3) = two_sum(c, t1);
    let (b, c) = two_sum(t2, t3);
    (a, b, c)
}

fn renorm4(c0: f64, c1: f64, c2: f64, c3: f64) -> [f64; 4] {
    if !c0.is_finite() {
        return [c0, c1, c2, c3];
    }
    let (s0, c3) = quick_two_sum(c2, c3);
    let (s0, c2) = quick_two_sum(c1, s0);
    let (c0, c1) = quick_two_sum(c0, s0);
    let (mut s0, mut s1, mut s2, mut s3) = (c0, c1, 0.0, 0.0);
    if s1 != 0.0 {
        (s1, s2) = quick_two_sum(s1, c2);
        if s2 != 0.0 {
            (s2, s3) = quick_two_sum(s2, c3);
        } else {
            (s1, s2) = quick_two_sum(s1, c3);
        }
    } else {
        (s0, s1) = quick_two_sum(s0, c2);
        if s1 != 0.0 {
            (s1, s2) = quick_two_sum(s1, c3);
        } else {
            (s0, s1) = quick_two_sum(s0, c3);
        }
    }
    [s0, s1, s2, s3]
}

fn renorm5(c0: f64, c1: f64, c2: f64, c3: f64, c4: f64) -> [f64; 4] {
    if !c0.is_finite() {
        return [c0, c1, c2, c3];
    }
    let (s0, c4) = quick_two_sum(c3, c4);
    let (s0, c3) = quick_two_sum(c2, s0);
    let (s0, c2) = quick_two_sum(c1, s0);
    let (c0, c1) = quick_two_sum(c0, s0);
    let (mut s0, mut s1, mut s2, mut s3) = (c0, c1, 0.0, 0.0);
    if s1 != 0.0 {
        (s1, s2) = quick_two_sum(s1, c2);
        if s2 != 0.0 {
            (s2, s3) = quick_two_sum(s2, c3);
            if s3 != 0.0 {
                s3 += c4;
            } else {
                (s2, s3) = quick_two_sum(s2, c4);
            }
        } else {
            (s1, s2) = quick_two_sum(s1, c3);
            if s2 != 0.0 {
                (s2, s3) = quick_two_sum(s2, c4);
            } else {
                (s1, s2) = quick_two_sum(s1, c4);
            }
        }
    } else {
        (s0, s1) = quick_two_sum(s0, c2);
        if s1 != 0.0 {
            (s1, s2) = quick_two_sum(s1, c3);
            if s2 != 0.0 {
                (s2, s3) = quick_two_sum(s2, c4);
            } else {
                (s1, s2) = quick_two_sum(s1, c4);
            }
        } else {
            (s0, s1) = quick_two_sum(s0, c3);
            if s1 != 0.0 {
                (s1, s2) = quick_two_sum(s1, c4);
            } else {
                (s0, s1) = quick_two_sum(s0, c4);
            }
        }
    }
    [s0, s1, s2, s3]
}

/// Accumulates `c` into the double-length accumulator `(u, v)`; returns a
/// finished limb when one falls out.
#[inline]
fn quick_three_accum(u: &mut f64, v: &mut f64, c: f64) -> f64 {
    let (s, b) = two_sum(*v, c);
    let (s, a) = two_sum(*u, s);
    let za = a != 0.0;
    let zb = b != 0.0;
    if za && zb {
        *u = a;
        *v = b;
        return s;
    }
    if !zb {
        *v = a;
        *u = s;
    } else {
        *u = s;
        *v = b;
    }
    0.0
}

impl QuadDouble {
    pub const ZERO: Self = QuadDouble([0.0; 4]);
    pub const ONE: Self = QuadDouble([1.0, 0.0, 0.0, 0.0]);

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        QuadDouble([x, 0.0, 0.0, 0.0])
    }

    /// The limbs, largest first.
    pub fn limbs(self) -> [f64; 4] {
        self.0
    }

    /// Builds a value from arbitrary limbs, renormalising them.
    pub fn from_limbs(l: [f64; 4]) -> Self {
        QuadDouble(renorm4(l[0], l[1], l[2], l[3]))
    }

    fn add_qd(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
        let mut x = [0.0f64; 4];
        let (mut i, mut j, mut k) = (0usize, 0usize, 0usize);
        let pick = |i: &mut usize, j: &mut usize| -> f64 {
            if *i >= 4 {
                *j += 1;
                b[*j - 1]
            } else if *j >= 4 || a[*i].abs() > b[*j].abs() {
                *i += 1;
                a[*i - 1]
            } else {
                *j += 1;
                b[*j - 1]
            }
        };
        let u0 = pick(&mut i, &mut j);
        let v0 = pick(&mut i, &mut j);
        let (mut u, mut v) = quick_two_sum(u0, v0);
        while k < 4 {
            if i >= 4 && j >= 4 {
                x[k] = u;
                if k < 3 {
                    k += 1;
                    x[k] = v;
                }
                break;
            }
            let t = pick(&mut i, &mut j);
            let s = quick_three_accum(&mut u, &mut v, t);
            if s != 0.0 {
                x[k] = s;
                k += 1;
            }
        }
        for &ai in &a[i..] {
            x[3] += ai;
        }
        for &bj in &b[j..] {
            x[3] += bj;
        }
        renorm4(x[0], x[1], x[2], x[3])
    }

    fn mul_qd(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
        let (p0, q0) = two_prod(a[0], b[0]);
        let (p1, q1) = two_prod(a[0], b[1]);
        let (p2, q2) = two_prod(a[1], b[0]);
        let (p3, q3) = two_prod(a[0], b[2]);
        let (p4, q4) = two_prod(a[1], b[1]);
        let (p5, q5) = two_prod(a[2], b[0]);

        let (p1, p2, q0) = three_sum(p1, p2, q0);
        let (p2, q1, q2) = three_sum(p2, q1, q2);
        let (p3, p4, p5) = three_sum(p3, p4, p5);

        let (s0, t0) = two_sum(p2, p3);
        let (s1, t1) = two_sum(q1, p4);
        let mut s2 = q2 + p5;
        let (s1, t0) = two_sum(s1, t0);
        s2 += t0 + t1;

        let s1 = s1 + (a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0] + q0 + q3 + q4 + q5);
        renorm5(p0, p1, s0, s1, s2)
    }

    fn div_qd(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
        let bq = QuadDouble(*b);
        let q0 = a[0] / b[0];
        let mut r = QuadDouble(*a) - bq * QuadDouble::from_f64(q0);
        let q1 = r.0[0] / b[0];
        r -= bq * QuadDouble::from_f64(q1);
        let q2 = r.0[0] / b[0];
        r -= bq * QuadDouble::from_f64(q2);
        let q3 = r.0[0] / b[0];
        r -= bq * QuadDouble::from_f64(q3);
        let q4 = r.0[0] / b[0];
        renorm5(q0, q1, q2, q3, q4)
    }

    pub fn floor(self) -> Self {
        let a = self.0;
        let x0 = a[0].floor();
        let (mut x1, mut x2, mut x3) = (0.0, 0.0, 0.0);
        if x0 == a[0] {
            x1 = a[1].floor();
            if x1 == a[1] {
                x2 = a[2].floor();
                if x2 == a[2] {
                    x3 = a[3].floor();
                }
            }
            return QuadDouble(renorm4(x0, x1, x2, x3));
        }
        QuadDouble([x0, x1, x2, x3])
    }

    pub fn trunc(self) -> Self {
        if self.0[0] >= 0.0 {
            self.floor()
        } else {
            -((-self).floor())
        }
    }

    fn pow10(e: i32) -> Self {
        QuadDouble::from_f64(10.0).powi(e)
    }

    /// Decimal digits of `|self|` in scientific form: `(digits, exponent)`.
    fn decimal_digits(self, ndigits: usize) -> (Vec<u8>, i32) {
        let mut r = self.abs();
        let mut e = r.0[0].abs().log10().floor() as i32;
        r /= Self::pow10(e);
        let ten = QuadDouble::from_f64(10.0);
        while r >= ten {
            r /= ten;
            e += 1;
        }
        while r < QuadDouble::ONE {
            r *= ten;
            e -= 1;
        }
        let mut digits = Vec::with_capacity(ndigits + 1);
        for _ in 0..=ndigits {
            let d = r.0[0].floor().clamp(0.0, 9.0);
            digits.push(d as u8);
            r = (r - QuadDouble::from_f64(d)) * ten;
        }
        // round half up on the guard digit
        if digits[ndigits] >= 5 {
            let mut k = ndigits;
            loop {
                if k == 0 {
                    digits.insert(0, 1);
                    e += 1;
                    break;
                }
                k -= 1;
                if digits[k] == 9 {
                    digits[k] = 0;
                } else {
                    digits[k] += 1;
                    break;
                }
            }
        }
        digits.truncate(ndigits);
        (digits, e)
    }

    fn write_sci(&self, f: &mut fmt::Formatter<'_>, frac_digits: usize) -> fmt::Result {
        let a = self.0[0];
        if a.is_nan() {
            return f.write_str("NaN");
        }
        if a.is_infinite() {
            return f.write_str(if a > 0.0 { "inf" } else { "-inf" });
        }
        let sign = if a < 0.0 { "-" } else { "" };
        if a == 0.0 {
            return write!(f, "{sign}0.{}e0", "0".repeat(frac_digits));
        }
        let (d, e) = self.decimal_digits(frac_digits + 1);
        let mut s = String::with_capacity(frac_digits + 8);
        s.push_str(sign);
        s.push((b'0' + d[0]) as char);
        if frac_digits > 0 {
            s.push('.');
            for &x in &d[1..] {
                s.push((b'0' + x) as char);
            }
        }
        write!(f, "{s}e{e}")
    }
}

impl From<f64> for QuadDouble {
    fn from(x: f64) -> Self {
        QuadDouble::from_f64(x)
    }
}

impl Neg for QuadDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        let a = self.0;
        QuadDouble([-a[0], -a[1], -a[2], -a[3]])
    }
}

impl Add for QuadDouble {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        QuadDouble(Self::add_qd(&self.0, &rhs.0))
    }
}

impl Sub for QuadDouble {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for QuadDouble {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        QuadDouble(Self::mul_qd(&self.0, &rhs.0))
    }
}

impl Div for QuadDouble {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        QuadDouble(Self::div_qd(&self.0, &rhs.0))
    }
}

impl Rem for QuadDouble {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        self - rhs * (self / rhs).trunc()
    }
}

macro_rules! assign_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for QuadDouble {
            #[inline]
            fn $m(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    };
}

assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);
assign_op!(RemAssign, rem_assign, %);

impl PartialOrd for QuadDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        for k in 0..4 {
            match self.0[k].partial_cmp(&other.0[k])? {
                Ordering::Equal => continue,
                o => return Some(o),
            }
        }
        Some(Ordering::Equal)
    }
}

impl Zero for QuadDouble {
    fn zero() -> Self {
        Self::ZERO
    }
    fn is_zero(&self) -> bool {
        self.0[0] == 0.0
    }
}

impl One for QuadDouble {
    fn one() -> Self {
        Self::ONE
    }
}

/// Parse error for decimal quad-double literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseQuadError;

impl fmt::Display for ParseQuadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid quad-double literal")
    }
}

impl std::error::Error for ParseQuadError {}

impl std::str::FromStr for QuadDouble {
    type Err = ParseQuadError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (neg, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let (mant, exp) = match body.find(['e', 'E']) {
            Some(p) => (
                &body[..p],
                body[p + 1..].parse::<i32>().map_err(|_| ParseQuadError)?,
            ),
            None => (body, 0),
        };
        let ten = QuadDouble::from_f64(10.0);
        let mut acc = QuadDouble::ZERO;
        let mut scale = 0i32;
        let mut seen_point = false;
        let mut any = false;
        for ch in mant.chars() {
            match ch {
                '0'..='9' => {
                    acc = acc * ten + QuadDouble::from_f64(f64::from(ch as u8 - b'0'));
                    if seen_point {
                        scale -= 1;
                    }
                    any = true;
                }
                '.' if !seen_point => seen_point = true,
                _ => return Err(ParseQuadError),
            }
        }
        if !any {
            return Err(ParseQuadError);
        }
        let e = exp + scale;
        let v = if e >= 0 {
            acc * Self::pow10(e)
        } else {
            acc / Self::pow10(-e)
        };
        Ok(if neg { -v } else { v })
    }
}

impl Num for QuadDouble {
    type FromStrRadixErr = ParseQuadError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(ParseQuadError);
        }
        s.parse()
    }
}

impl fmt::Display for QuadDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_sci(f, f.precision().unwrap_or(31))
    }
}

impl fmt::LowerExp for QuadDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_sci(f, f.precision().unwrap_or(31))
    }
}

impl fmt::Debug for QuadDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadDouble({self:.40e})")
    }
}

impl Real for QuadDouble {
    #[inline]
    fn of(x: f64) -> Self {
        QuadDouble::from_f64(x)
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self.0[0] + self.0[1]
    }

    fn sqrt(self) -> Self {
        let a0 = self.0[0];
        if a0 == 0.0 {
            return Self::ZERO;
        }
        if a0 < 0.0 {
            return QuadDouble::from_f64(f64::NAN);
        }
        let half = QuadDouble::from_f64(0.5);
        let mut x = QuadDouble::from_f64(a0.sqrt());
        for _ in 0..3 {
            x = (x + self / x) * half;
        }
        x
    }

    fn epsilon() -> Self {
        // 2^-209
        QuadDouble::from_f64(1.216_725_500_447_715_7e-63)
    }

    fn is_finite(self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    fn abs(self) -> Self {
        if self.0[0] < 0.0 {
            -self
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn exact(x: QuadDouble) -> BigRational {
        x.0.iter()
            .map(|&l| BigRational::from_float(l).unwrap())
            .fold(BigRational::from_integer(BigInt::from(0)), |a, b| a + b)
    }

    fn rel_err(got: QuadDouble, want: &BigRational) -> f64 {
        let diff = exact(got) - want;
        if *want == BigRational::from_integer(BigInt::from(0)) {
            return exact(got).to_f64_lossy().abs();
        }
        (diff / want).to_f64_lossy().abs()
    }

    trait Lossy {
        fn to_f64_lossy(&self) -> f64;
    }

    impl Lossy for BigRational {
        fn to_f64_lossy(&self) -> f64 {
            use num_traits::ToPrimitive;
            self.to_f64().unwrap()
        }
    }

    fn random_qd(rng: &mut ChaCha8Rng) -> QuadDouble {
        let a: f64 = rng.gen_range(-1.0..1.0) * 10f64.powi(rng.gen_range(-8..8));
        let l = [
            a,
            a * 1e-17 * rng.gen_range(-1.0..1.0),
            a * 1e-34 * rng.gen_range(-1.0..1.0),
            a * 1e-51 * rng.gen_range(-1.0..1.0),
        ];
        QuadDouble::from_limbs(l)
    }

    #[test]
    fn field_ops_match_exact_rationals() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let a = random_qd(&mut rng);
            let b = random_qd(&mut rng);
            let (ea, eb) = (exact(a), exact(b));
            assert!(rel_err(a * b, &(&ea * &eb)) < 1e-61);
            assert!(rel_err(a / b, &(&ea / &eb)) < 1e-61);
            let s = &ea + &eb;
            let err = (exact(a + b) - &s).to_f64_lossy().abs();
            let scale = ea.to_f64_lossy().abs().max(eb.to_f64_lossy().abs());
            assert!(err <= 1e-62 * scale, "add error {err:e} at scale {scale:e}");
        }
    }

    #[test]
    fn cancellation_keeps_low_limbs() {
        let third = QuadDouble::ONE / QuadDouble::from_f64(3.0);
        let r = third * QuadDouble::from_f64(3.0) - QuadDouble::ONE;
        assert!(r.abs().to_f64() < 1e-62);
        let big = QuadDouble::from_f64(1e20);
        let x = (big + third) - big;
        assert!((x - third).abs().to_f64() < 1e-43);
    }

    #[test]
    fn sqrt_and_display() {
        let two = QuadDouble::from_f64(2.0);
        let s = two.sqrt();
        assert!((s * s - two).abs().to_f64() < 1e-62);
        let shown = format!("{:.40e}", s);
        assert_eq!(shown, "1.4142135623730950488016887242096980785697e0");
        let back: QuadDouble = "1.4142135623730950488016887242096980785696718753769480731766797"
            .parse()
            .unwrap();
        assert!((back - s).abs().to_f64() < 1e-60);
    }

    #[test]
    fn ordering_and_floor() {
        let a = QuadDouble::from_limbs([1.0, 1e-40, 0.0, 0.0]);
        let b = QuadDouble::ONE;
        assert!(a > b && b < a);
        assert_eq!(QuadDouble::from_f64(-2.5).floor().to_f64(), -3.0);
        assert_eq!(
            (QuadDouble::from_f64(7.0) % QuadDouble::from_f64(3.0)).to_f64(),
            1.0
        );
    }
}
