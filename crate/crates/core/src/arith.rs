//! Scalar fields used by the exact and floating-point paths.
//!
//! The exact path works over Gaussian rationals `Q(i)`; it is only available
//! when every Fourier coefficient is a fourth root of unity, i.e. when every
//! tuple weight divides 4. Everything else goes through `Complex64` with an
//! explicit tolerance.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Complex number with exact rational real and imaginary parts.
pub type GaussRational = Complex<BigRational>;

/// Default tolerance for float-path orthogonality, normalisation and rank checks.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Which number system a computation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticMode {
    Exact,
    Float,
}

/// User-facing arithmetic selector; `Auto` resolves to exact when possible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    #[default]
    Auto,
    Exact,
    Float,
}

impl Arithmetic {
    /// Resolve against the set of tuple weights. Returns `None` when exact
    /// arithmetic was requested but some weight does not divide 4.
    pub fn resolve<I: IntoIterator<Item = usize>>(self, weights: I) -> Option<ArithmeticMode> {
        let exact_ok = weights.into_iter().all(weight_is_exact);
        match self {
            Arithmetic::Auto if exact_ok => Some(ArithmeticMode::Exact),
            Arithmetic::Auto => Some(ArithmeticMode::Float),
            Arithmetic::Exact if exact_ok => Some(ArithmeticMode::Exact),
            Arithmetic::Exact => None,
            Arithmetic::Float => Some(ArithmeticMode::Float),
        }
    }
}

/// `true` when all `w`-th roots of unity lie in `{±1, ±i}`.
pub fn weight_is_exact(w: usize) -> bool {
    w > 0 && 4 % w == 0
}

/// The Fourier phase `exp(2πi·power/weight)` as an exact Gaussian rational.
///
/// Panics if `weight` does not divide 4.
pub fn exact_root_of_unity(power: usize, weight: usize) -> GaussRational {
    assert!(weight_is_exact(weight), "weight {weight} has no exact roots of unity");
    let quarter_turns = (power % weight) * (4 / weight);
    let (re, im) = match quarter_turns {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    };
    Complex::new(rational(re), rational(im))
}

/// The Fourier phase `exp(2πi·power/weight)` in double precision.
pub fn float_root_of_unity(power: usize, weight: usize) -> Complex64 {
    // Reduce first so that the common quarter turns come out exact.
    let p = power % weight;
    if weight_is_exact(weight) {
        return to_complex64(&exact_root_of_unity(p, weight));
    }
    let angle = 2.0 * std::f64::consts::PI * p as f64 / weight as f64;
    Complex64::from_polar(1.0, angle)
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn to_complex64(z: &GaussRational) -> Complex64 {
    Complex64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

/// `p/q` or `p` rendering used by dumps and reports.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn format_gauss(z: &GaussRational) -> String {
    let re = format_rational(&z.re);
    if z.im.is_zero() {
        return re;
    }
    let im_abs = format_rational(&z.im.abs());
    let sign = if z.im.is_negative() { '-' } else { '+' };
    if z.re.is_zero() {
        if z.im.is_negative() {
            format!("-{im_abs}i")
        } else {
            format!("{im_abs}i")
        }
    } else {
        format!("{re}{sign}{im_abs}i")
    }
}

/// Field operations needed by the elimination routines.
///
/// `is_negligible` is an exact zero test for exact scalars and a magnitude
/// test against `tol` for floating-point scalars.
pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: ArithmeticMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn conj(&self) -> Self;
    fn magnitude(&self) -> f64;
    fn is_negligible(&self, tol: f64) -> bool;
}

impl Scalar for GaussRational {
    const MODE: ArithmeticMode = ArithmeticMode::Exact;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn magnitude(&self) -> f64 {
        to_complex64(self).norm()
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

impl Scalar for Complex64 {
    const MODE: ArithmeticMode = ArithmeticMode::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }
}
