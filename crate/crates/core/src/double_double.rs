//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`
//! values giving roughly 32 significant decimal digits.
//!
//! Addition, multiplication, division, `sqrt`, `exp`, `ln`, `sin` and `cos`
//! are accurate to about `1e-31` relative. The inverse trigonometric and
//! hyperbolic functions are derived from those and carry the same accuracy
//! away from their singular points. Rounding-mode queries (`floor`, `round`,
//! ...) act on the full value.
//!
//! The type exists so that convergence-rate studies can be pushed below the
//! `f64` round-off floor without changing the generic algorithms.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::num::FpCategory;
use std::ops::{
    Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign,
};

use num_traits::{Float, FloatConst, FromPrimitive, Num, NumCast, One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

const PI_DD: DoubleDouble = DoubleDouble::from_parts(3.141592653589793, 1.2246467991473532e-16);
const LN2_DD: DoubleDouble = DoubleDouble::from_parts(0.6931471805599453, 2.3190468138462996e-17);
const E_DD: DoubleDouble = DoubleDouble::from_parts(2.718281828459045, 1.4456468917292502e-16);

impl DoubleDouble {
    /// Builds a value from a normalised pair (`|lo| <= ulp(hi) / 2`).
    pub const fn from_parts(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let (h, l) = quick_two_sum(hi, lo);
        Self { hi: h, lo: l }
    }

    fn mul_pow2(self, e: i32) -> Self {
        let f = 2f64.powi(e);
        Self { hi: self.hi * f, lo: self.lo * f }
    }

    fn from_i128(n: i128) -> Self {
        let hi = n as f64;
        let rest = n - hi as i128;
        Self::renorm(hi, rest as f64)
    }

    fn is_zero_value(self) -> bool {
        self.hi == 0.0
    }

    /// `exp` of an argument already reduced to `|r| <= ln2 / 2`.
    fn exp_reduced(r: Self) -> Self {
        // Halve ten times, sum the series for exp(s) - 1, then undo the
        // halving with (1 + t)^2 - 1 = t (2 + t) so no leading 1 is carried.
        let s = r.mul_pow2(-10);
        let mut term = s;
        let mut t = s;
        for k in 2..=20 {
            term = term * s / Self::from_f64(k as f64);
            t += term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        let two = Self::from_f64(2.0);
        for _ in 0..10 {
            t = t * (t + two);
        }
        t + Self::one()
    }

    /// Sine and cosine of `|r| <= pi/4` by Taylor series.
    fn sin_cos_reduced(r: Self) -> (Self, Self) {
        let r2 = r * r;
        let mut s_term = r;
        let mut sin = r;
        let mut c_term = Self::one();
        let mut cos = Self::one();
        let mut k = 1.0;
        loop {
            c_term = -c_term * r2 / Self::from_f64(k * (k + 1.0));
            s_term = -s_term * r2 / Self::from_f64((k + 1.0) * (k + 2.0));
            cos += c_term;
            sin += s_term;
            k += 2.0;
            if s_term.hi.abs() < 1e-36 && c_term.hi.abs() < 1e-36 {
                break;
            }
        }
        (sin, cos)
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == 0.0 {
            write!(f, "{:e}", self.hi)
        } else {
            write!(f, "{:e} {:+e}", self.hi, self.lo)
        }
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Self::renorm(s, e + f)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        Self::renorm(p, e)
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        if !q1.is_finite() {
            return Self::from_f64(q1);
        }
        let r = self - rhs * Self::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Self::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (h, l) = quick_two_sum(q1, q2);
        Self { hi: h, lo: l } + Self::from_f64(q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        self - (self / rhs).trunc() * rhs
    }
}

macro_rules! assign_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for DoubleDouble {
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

impl Sum for DoubleDouble {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn is_zero(&self) -> bool {
        self.is_zero_value()
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self::from_f64(1.0)
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = <f64 as Num>::FromStrRadixErr;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(Self::from_f64)
    }
}

impl Signed for DoubleDouble {
    fn abs(&self) -> Self {
        Float::abs(*self)
    }
    fn abs_sub(&self, other: &Self) -> Self {
        if *self <= *other {
            Self::zero()
        } else {
            *self - *other
        }
    }
    fn signum(&self) -> Self {
        Float::signum(*self)
    }
    fn is_positive(&self) -> bool {
        Float::is_sign_positive(*self)
    }
    fn is_negative(&self) -> bool {
        Float::is_sign_negative(*self)
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i64(&self) -> Option<i64> {
        let t = self.trunc();
        let v = t.hi as i128 + t.lo as i128;
        i64::try_from(v).ok()
    }
    fn to_u64(&self) -> Option<u64> {
        let t = self.trunc();
        let v = t.hi as i128 + t.lo as i128;
        u64::try_from(v).ok()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi + self.lo)
    }
}

impl FromPrimitive for DoubleDouble {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Self::from_i128(n as i128))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(Self::from_i128(n as i128))
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(Self::from_f64(x))
    }
}

impl NumCast for DoubleDouble {
    fn from<T: ToPrimitive>(n: T) -> Option<Self> {
        n.to_f64().map(Self::from_f64)
    }
}

impl FloatConst for DoubleDouble {
    fn E() -> Self {
        E_DD
    }
    fn FRAC_1_PI() -> Self {
        Self::one() / PI_DD
    }
    fn FRAC_1_SQRT_2() -> Self {
        Self::one() / Self::from_f64(2.0).sqrt()
    }
    fn FRAC_2_PI() -> Self {
        Self::from_f64(2.0) / PI_DD
    }
    fn FRAC_2_SQRT_PI() -> Self {
        Self::from_f64(2.0) / PI_DD.sqrt()
    }
    fn FRAC_PI_2() -> Self {
        PI_DD.mul_pow2(-1)
    }
    fn FRAC_PI_3() -> Self {
        PI_DD / Self::from_f64(3.0)
    }
    fn FRAC_PI_4() -> Self {
        PI_DD.mul_pow2(-2)
    }
    fn FRAC_PI_6() -> Self {
        PI_DD / Self::from_f64(6.0)
    }
    fn FRAC_PI_8() -> Self {
        PI_DD.mul_pow2(-3)
    }
    fn LN_10() -> Self {
        Self::from_f64(10.0).ln()
    }
    fn LN_2() -> Self {
        LN2_DD
    }
    fn LOG10_E() -> Self {
        Self::one() / Self::LN_10()
    }
    fn LOG2_E() -> Self {
        Self::one() / LN2_DD
    }
    fn PI() -> Self {
        PI_DD
    }
    fn SQRT_2() -> Self {
        Self::from_f64(2.0).sqrt()
    }
}

impl Float for DoubleDouble {
    fn nan() -> Self {
        Self::from_f64(f64::NAN)
    }
    fn infinity() -> Self {
        Self::from_f64(f64::INFINITY)
    }
    fn neg_infinity() -> Self {
        Self::from_f64(f64::NEG_INFINITY)
    }
    fn neg_zero() -> Self {
        Self::from_f64(-0.0)
    }
    fn min_value() -> Self {
        Self::from_f64(f64::MIN)
    }
    fn min_positive_value() -> Self {
        Self::from_f64(f64::MIN_POSITIVE)
    }
    fn max_value() -> Self {
        Self::from_f64(f64::MAX)
    }
    fn epsilon() -> Self {
        // 2^-104
        Self::from_f64(4.930380657631324e-32)
    }
    fn is_nan(self) -> bool {
        self.hi.is_nan() || self.lo.is_nan()
    }
    fn is_infinite(self) -> bool {
        self.hi.is_infinite()
    }
    fn is_finite(self) -> bool {
        self.hi.is_finite()
    }
    fn is_normal(self) -> bool {
        self.hi.is_normal()
    }
    fn classify(self) -> FpCategory {
        self.hi.classify()
    }
    fn floor(self) -> Self {
        let fh = self.hi.floor();
        if fh == self.hi {
            Self::renorm(fh, self.lo.floor())
        } else {
            Self::from_f64(fh)
        }
    }
    fn ceil(self) -> Self {
        let ch = self.hi.ceil();
        if ch == self.hi {
            Self::renorm(ch, self.lo.ceil())
        } else {
            Self::from_f64(ch)
        }
    }
    fn round(self) -> Self {
        let half = Self::from_f64(0.5);
        if self.hi >= 0.0 {
            (self + half).floor()
        } else {
            -((-self) + half).floor()
        }
    }
    fn trunc(self) -> Self {
        if self.hi >= 0.0 {
            self.floor()
        } else {
            self.ceil()
        }
    }
    fn fract(self) -> Self {
        self - self.trunc()
    }
    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }
    fn signum(self) -> Self {
        Self::from_f64(self.hi.signum())
    }
    fn is_sign_positive(self) -> bool {
        self.hi.is_sign_positive()
    }
    fn is_sign_negative(self) -> bool {
        self.hi.is_sign_negative()
    }
    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }
    fn recip(self) -> Self {
        Self::one() / self
    }
    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
    fn powf(self, n: Self) -> Self {
        (n * self.ln()).exp()
    }
    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from_f64(self.hi.sqrt());
        }
        let s = Self::from_f64(self.hi.sqrt());
        // one Newton step doubles the number of correct digits
        s + (self - s * s) / (s + s)
    }
    fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Self::infinity();
        }
        if self.hi < -745.0 {
            return Self::zero();
        }
        let k = (self.hi / LN2_DD.hi).round();
        let r = self - LN2_DD * Self::from_f64(k);
        Self::exp_reduced(r).mul_pow2(k as i32)
    }
    fn exp2(self) -> Self {
        (self * LN2_DD).exp()
    }
    fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from_f64(self.hi.ln());
        }
        let mut y = Self::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Self::one();
        }
        y
    }
    fn log(self, base: Self) -> Self {
        self.ln() / base.ln()
    }
    fn log2(self) -> Self {
        self.ln() / LN2_DD
    }
    fn log10(self) -> Self {
        self.ln() / Self::LN_10()
    }
    fn max(self, other: Self) -> Self {
        if self.is_nan() || other > self {
            other
        } else {
            self
        }
    }
    fn min(self, other: Self) -> Self {
        if self.is_nan() || other < self {
            other
        } else {
            self
        }
    }
    fn abs_sub(self, other: Self) -> Self {
        if self <= other {
            Self::zero()
        } else {
            self - other
        }
    }
    fn cbrt(self) -> Self {
        if self.is_zero_value() {
            return self;
        }
        let y = Self::from_f64(self.hi.cbrt());
        let three = Self::from_f64(3.0);
        y - (y * y * y - self) / (three * y * y)
    }
    fn hypot(self, other: Self) -> Self {
        (self * self + other * other).sqrt()
    }
    fn sin(self) -> Self {
        self.sin_cos().0
    }
    fn cos(self) -> Self {
        self.sin_cos().1
    }
    fn tan(self) -> Self {
        let (s, c) = self.sin_cos();
        s / c
    }
    fn asin(self) -> Self {
        self.atan2((Self::one() - self * self).sqrt())
    }
    fn acos(self) -> Self {
        (Self::one() - self * self).sqrt().atan2(self)
    }
    fn atan(self) -> Self {
        self.atan2(Self::one())
    }
    fn atan2(self, other: Self) -> Self {
        let (y, x) = (self, other);
        let t0 = Self::from_f64(y.hi.atan2(x.hi));
        if !t0.is_finite() || (x.is_zero_value() && y.is_zero_value()) {
            return t0;
        }
        let (s, c) = t0.sin_cos();
        t0 + (y * c - x * s) / (x * c + y * s)
    }
    fn sin_cos(self) -> (Self, Self) {
        if !self.is_finite() {
            return (Self::nan(), Self::nan());
        }
        let two_pi = PI_DD.mul_pow2(1);
        let half_pi = PI_DD.mul_pow2(-1);
        let z = self - two_pi * (self / two_pi).round();
        let q = (z / half_pi).round();
        let r = z - half_pi * q;
        let (s, c) = Self::sin_cos_reduced(r);
        match (q.hi as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
    fn exp_m1(self) -> Self {
        if self.hi.abs() < 0.5 {
            let mut term = self;
            let mut sum = self;
            for k in 2..=40 {
                term = term * self / Self::from_f64(k as f64);
                sum += term;
                if term.hi.abs() < 1e-36 {
                    break;
                }
            }
            sum
        } else {
            self.exp() - Self::one()
        }
    }
    fn ln_1p(self) -> Self {
        (Self::one() + self).ln()
    }
    fn sinh(self) -> Self {
        let e = self.exp();
        (e - e.recip()).mul_pow2(-1)
    }
    fn cosh(self) -> Self {
        let e = self.exp();
        (e + e.recip()).mul_pow2(-1)
    }
    fn tanh(self) -> Self {
        let e2 = (self + self).exp();
        (e2 - Self::one()) / (e2 + Self::one())
    }
    fn asinh(self) -> Self {
        (self + (self * self + Self::one()).sqrt()).ln()
    }
    fn acosh(self) -> Self {
        (self + (self * self - Self::one()).sqrt()).ln()
    }
    fn atanh(self) -> Self {
        ((Self::one() + self) / (Self::one() - self)).ln().mul_pow2(-1)
    }
    fn integer_decode(self) -> (u64, i16, i8) {
        self.hi.integer_decode()
    }
}
