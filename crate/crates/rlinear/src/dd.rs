//! Double-double arithmetic: an extended-precision real scalar stored as an
//! unevaluated sum `hi + lo` of two `f64` values, giving roughly 31-32
//! significant decimal digits.
//!
//! The building blocks are the classical error-free transforms `two_sum` and
//! `two_prod` (the latter via fused multiply-add), so each arithmetic
//! operation keeps the relative error below `2^-100` on normalized inputs.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

/// `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Copy, Clone, Default)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

/// Error-free sum: returns `(s, e)` with `s + e == a + b` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free sum assuming `|a| >= |b|`.
#[inline]
pub fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Error-free product: returns `(p, e)` with `p + e == a * b` exactly.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// pi to double-double accuracy.
    pub const PI: Dd = Dd {
        hi: 3.141592653589793,
        lo: 1.2246467991473532e-16,
    };
    /// pi/2 to double-double accuracy.
    pub const FRAC_PI_2: Dd = Dd {
        hi: 1.5707963267948966,
        lo: 6.123233995736766e-17,
    };
    /// 2*pi to double-double accuracy.
    pub const TAU: Dd = Dd {
        hi: 6.283185307179586,
        lo: 2.4492935982947064e-16,
    };

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Rounds to the nearest `f64`; drops exactly the low component.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn floor(self) -> Dd {
        let fhi = self.hi.floor();
        if fhi == self.hi {
            let flo = self.lo.floor();
            let (s, e) = quick_two_sum(fhi, flo);
            Dd { hi: s, lo: e }
        } else {
            Dd { hi: fhi, lo: 0.0 }
        }
    }

    pub fn round(self) -> Dd {
        (self + Dd::from_f64(0.5)).floor()
    }

    pub fn trunc(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -((-self).floor())
        } else {
            self.floor()
        }
    }

    /// Square root by one Newton step from the `f64` seed.
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        debug_assert!(self.hi > 0.0, "sqrt of negative double-double");
        let s0 = self.hi.sqrt();
        // s = s0 + (a - s0^2) / (2 s0)
        let s0dd = Dd::from_f64(s0);
        let diff = self - s0dd * s0dd;
        let corr = diff.hi / (2.0 * s0);
        let (s, e) = quick_two_sum(s0, corr);
        // second tiny correction keeps the error within 2^-104
        let s1 = Dd { hi: s, lo: e };
        let diff2 = self - s1 * s1;
        let corr2 = diff2.hi / (2.0 * s);
        let (h, l) = quick_two_sum(s, e + corr2);
        Dd { hi: h, lo: l }
    }

    /// sin(x), cos(x) via quadrant reduction and Taylor series.
    pub fn sin_cos(self) -> (Dd, Dd) {
        // reduce modulo pi/2: x = k*(pi/2) + y with |y| <= pi/4
        let k = (self.hi / Dd::FRAC_PI_2.hi).round();
        let kd = Dd::from_f64(k);
        let y = self - kd * Dd::FRAC_PI_2;
        let (sy, cy) = sin_cos_taylor(y);
        match (k as i64).rem_euclid(4) {
            0 => (sy, cy),
            1 => (cy, -sy),
            2 => (-sy, -cy),
            _ => (-cy, sy),
        }
    }
}

/// Taylor series for |y| <= pi/4 + slack; terms to below 2^-110.
fn sin_cos_taylor(y: Dd) -> (Dd, Dd) {
    let y2 = y * y;
    let mut sin = y;
    let mut term = y;
    let mut k = 0.0f64;
    while term.hi.abs() > 1e-36 {
        term = -term * y2 / Dd::from_f64((2.0 * k + 2.0) * (2.0 * k + 3.0));
        sin = sin + term;
        k += 1.0;
    }
    let mut cos = Dd::ONE;
    term = Dd::ONE;
    k = 0.0;
    while term.hi.abs() > 1e-36 {
        term = -term * y2 / Dd::from_f64((2.0 * k + 1.0) * (2.0 * k + 2.0));
        cos = cos + term;
        k += 1.0;
    }
    (sin, cos)
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s0, e0) = two_sum(self.hi, rhs.hi);
        let (s1, e1) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s0, e0 + s1);
        let (h, l) = quick_two_sum(s, e + e1);
        Dd { hi: h, lo: l }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (h, l) = quick_two_sum(p, e);
        Dd { hi: h, lo: l }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        // long division: f64 seed quotient plus two refinements
        let q0 = self.hi / rhs.hi;
        let r0 = self - Dd::from_f64(q0) * rhs;
        let q1 = r0.hi / rhs.hi;
        let r1 = r0 - Dd::from_f64(q1) * rhs;
        let q2 = r1.hi / rhs.hi;
        let (s, e) = quick_two_sum(q0, q1);
        Dd { hi: s, lo: e } + Dd::from_f64(q2)
    }
}

impl Rem for Dd {
    type Output = Dd;
    fn rem(self, rhs: Dd) -> Dd {
        self - (self / rhs).trunc() * rhs
    }
}

impl PartialEq for Dd {
    fn eq(&self, other: &Dd) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl num_traits::Zero for Dd {
    fn zero() -> Dd {
        Dd::ZERO
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl num_traits::One for Dd {
    fn one() -> Dd {
        Dd::ONE
    }
}

impl num_traits::Num for Dd {
    type FromStrRadixErr = num_traits::ParseFloatError;
    /// Parses through `f64`; the low component of the result is zero.
    fn from_str_radix(s: &str, radix: u32) -> Result<Dd, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(Dd::from_f64)
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e}, {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.hi, f)
    }
}
