use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Gaussian rationals: the exact arithmetic path.
pub type Exact = Complex<BigRational>;
/// Complex doubles: the approximate arithmetic path.
pub type Approx = Complex<f64>;

/// Entry-wise tolerance used by the floating point path.
pub const TOLERANCE: f64 = 1e-9;

/// Field operations shared by both arithmetic paths.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    /// Exact zero test on the exact path, `|x| <= TOLERANCE` otherwise.
    fn is_zero(&self) -> bool;
    fn magnitude(&self) -> f64;
    fn to_approx(&self) -> Approx;
}

impl Scalar for Exact {
    const EXACT: bool = true;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }

    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }

    fn from_int(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn magnitude(&self) -> f64 {
        self.to_approx().norm()
    }

    fn to_approx(&self) -> Approx {
        Complex::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Scalar for Approx {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex::new(1.0, 0.0)
    }

    fn from_int(v: i64) -> Self {
        Complex::new(v as f64, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.norm() <= TOLERANCE
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_approx(&self) -> Approx {
        *self
    }
}

/// Builds an exact scalar `num/den`.
pub fn rational(num: i64, den: i64) -> Exact {
    Complex::new(
        BigRational::new(BigInt::from(num), BigInt::from(den)),
        BigRational::zero(),
    )
}

/// Builds the exact Gaussian integer `re + im*i`.
pub fn gaussian(re: i64, im: i64) -> Exact {
    Complex::new(
        BigRational::from_integer(BigInt::from(re)),
        BigRational::from_integer(BigInt::from(im)),
    )
}

/// Renders an exact scalar compactly: `3`, `-1/2`, `i`, `1+2i`.
pub fn format_exact(x: &Exact) -> String {
    fn rat(r: &BigRational) -> String {
        if r.is_integer() {
            r.to_integer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }
    match (x.re.is_zero(), x.im.is_zero()) {
        (_, true) => rat(&x.re),
        (true, false) if x.im.is_one() => "i".to_string(),
        (true, false) if (-x.im.clone()).is_one() => "-i".to_string(),
        (true, false) => format!("{}i", rat(&x.im)),
        (false, false) => {
            let sign = if x.im.is_negative() { "-" } else { "+" };
            let mag = x.im.abs();
            if mag.is_one() {
                format!("{}{}i", rat(&x.re), sign)
            } else {
                format!("{}{}{}i", rat(&x.re), sign, rat(&mag))
            }
        }
    }
}
