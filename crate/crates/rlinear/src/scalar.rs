//! Precision family: every algorithm in this crate is generic over a real
//! scalar that is either `f64` or [`Dd`] (double-double). Complex numbers are
//! `num_complex::Complex` over that scalar.

use std::fmt;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::Num;

pub use crate::dd::Dd;

/// Complex number over a precision-family scalar.
pub type C<R> = Complex<R>;

/// Real scalar of the active precision (`f64` or [`Dd`]).
pub trait RealScalar:
    Num + Neg<Output = Self> + Copy + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    /// sin and cos, needed for generating spectra at full working precision.
    fn sin_cos(self) -> (Self, Self);
    /// 2*pi at this precision.
    fn tau() -> Self;
    /// Machine epsilon of the format.
    fn eps() -> Self;
    /// Relative Arnoldi/Lanczos breakdown tolerance for this precision.
    fn breakdown_tol() -> Self;
    /// Default relative residual tolerance for the solvers.
    fn default_solve_tol() -> Self;

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
}

impl RealScalar for f64 {
    fn from_f64(x: f64) -> f64 {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
    fn sin_cos(self) -> (f64, f64) {
        f64::sin_cos(self)
    }
    fn tau() -> f64 {
        std::f64::consts::TAU
    }
    fn eps() -> f64 {
        f64::EPSILON
    }
    fn breakdown_tol() -> f64 {
        1e-13
    }
    fn default_solve_tol() -> f64 {
        1e-10
    }
}

impl RealScalar for Dd {
    fn from_f64(x: f64) -> Dd {
        Dd::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    fn abs(self) -> Dd {
        Dd::abs(self)
    }
    fn sqrt(self) -> Dd {
        Dd::sqrt(self)
    }
    fn sin_cos(self) -> (Dd, Dd) {
        Dd::sin_cos(self)
    }
    fn tau() -> Dd {
        Dd::TAU
    }
    fn eps() -> Dd {
        // 2^-100: per-operation relative error bound of the format
        Dd::from_f64(7.888609052210118e-31)
    }
    fn breakdown_tol() -> Dd {
        Dd::from_f64(1e-28)
    }
    fn default_solve_tol() -> Dd {
        Dd::from_f64(1e-25)
    }
}

/// Complex number from `f64` parts.
#[inline]
pub fn c<R: RealScalar>(re: f64, im: f64) -> C<R> {
    Complex::new(R::from_f64(re), R::from_f64(im))
}

/// Complex number from a real scalar.
#[inline]
pub fn cr<R: RealScalar>(re: R) -> C<R> {
    Complex::new(re, R::zero())
}

#[inline]
pub fn czero<R: RealScalar>() -> C<R> {
    Complex::new(R::zero(), R::zero())
}

#[inline]
pub fn cone<R: RealScalar>() -> C<R> {
    Complex::new(R::one(), R::zero())
}

/// |z| computed as sqrt(re^2 + im^2).
#[inline]
pub fn cabs<R: RealScalar>(z: C<R>) -> R {
    (z.re * z.re + z.im * z.im).sqrt()
}

/// |z|^2.
#[inline]
pub fn cnorm_sqr<R: RealScalar>(z: C<R>) -> R {
    z.re * z.re + z.im * z.im
}

/// z/|z|, or 1 for z = 0.
pub fn unit_phase<R: RealScalar>(z: C<R>, zero_tol: R) -> C<R> {
    let a = cabs(z);
    if a <= zero_tol {
        cone()
    } else {
        Complex::new(z.re / a, z.im / a)
    }
}

/// Principal square root of a complex number, using only real sqrt.
pub fn csqrt<R: RealScalar>(z: C<R>) -> C<R> {
    let a = cabs(z);
    if a.is_zero() {
        return czero();
    }
    let two = R::from_f64(2.0);
    if z.re >= R::zero() {
        let re = ((a + z.re) / two).sqrt();
        let im = z.im / (two * re);
        Complex::new(re, im)
    } else {
        let im_mag = ((a - z.re) / two).sqrt();
        let im = if z.im >= R::zero() { im_mag } else { -im_mag };
        let re = z.im / (two * im);
        Complex::new(re, im)
    }
}

/// Demote to an `f64`-precision complex number.
#[inline]
pub fn demote<R: RealScalar>(z: C<R>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

/// Promote an `f64`-precision complex number (exact).
#[inline]
pub fn promote<R: RealScalar>(z: Complex<f64>) -> C<R> {
    c(z.re, z.im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csqrt_matches_f64() {
        for &(re, im) in &[(4.0, 0.0), (0.0, 2.0), (-1.0, 0.0), (3.0, -4.0), (-3.0, 4.0)] {
            let z = Complex::new(re, im);
            let s = csqrt::<f64>(z);
            let err = (s * s - z).norm();
            assert!(err < 1e-14, "csqrt({re},{im}) err {err}");
        }
    }

    #[test]
    fn unit_phase_of_zero_is_one() {
        let d = unit_phase::<f64>(Complex::new(0.0, 0.0), 0.0);
        assert_eq!(d, Complex::new(1.0, 0.0));
    }

    #[test]
    fn complex_dd_field_ops() {
        let z: C<Dd> = c(1.0, 2.0);
        let w: C<Dd> = c(-0.5, 3.0);
        let q = (z * w) / w;
        assert!(cabs(q - z).to_f64() < 1e-30);
    }
}
