//! Scalar abstraction and forward-mode dual numbers.
//!
//! Every geometric evaluation in this crate (metric, Christoffel symbols,
//! curvature, frame fields, connection oracle) is generic over [`Scalar`] so
//! that the same code path can run at `f64`, at `Dual<f64>` for first
//! derivatives, and at nested duals for second and third derivatives. The
//! deepest consumer is the bundle curvature of the oracle connection, which
//! differentiates the Koszul formula and therefore needs third derivatives of
//! the base metric.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

/// Numeric element type for geometric evaluation.
///
/// Implemented by `f32`/`f64` and by [`Dual<S>`] for any `S: Scalar`, which is
/// what makes nesting work.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Zero
    + One
{
    fn from_f64(v: f64) -> Self;
    /// Value part with all derivative components stripped, recursively.
    fn value(self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
    fn recip(self) -> Self {
        Self::one() / self
    }
    /// |value part|; used for pivot selection and domain checks, where only
    /// the primal magnitude is meaningful.
    fn abs_value(self) -> f64 {
        self.value().abs()
    }
}

macro_rules! impl_scalar_float {
    ($t:ty) => {
        impl Scalar for $t {
            #[inline]
            fn from_f64(v: f64) -> Self {
                v as $t
            }
            #[inline]
            fn value(self) -> f64 {
                f64::from(self)
            }
            #[inline]
            fn sin(self) -> Self {
                <$t>::sin(self)
            }
            #[inline]
            fn cos(self) -> Self {
                <$t>::cos(self)
            }
            #[inline]
            fn sqrt(self) -> Self {
                <$t>::sqrt(self)
            }
            #[inline]
            fn recip(self) -> Self {
                <$t>::recip(self)
            }
        }
    };
}

impl_scalar_float!(f32);
impl_scalar_float!(f64);

/// Forward-mode dual number `re + eps * d(re)` over any scalar.
///
/// `Dual<Dual<f64>>` carries second derivatives, and so on. Arithmetic
/// follows the usual chain rules; `eps * eps = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<S> {
    pub re: S,
    pub eps: S,
}

impl<S: Scalar> Dual<S> {
    #[inline]
    pub fn new(re: S, eps: S) -> Self {
        Dual { re, eps }
    }

    /// Lift a plain scalar; derivative part zero.
    #[inline]
    pub fn constant(re: S) -> Self {
        Dual {
            re,
            eps: S::zero(),
        }
    }

    /// A variable perturbed with the given seed (directional derivative
    /// component).
    #[inline]
    pub fn seeded(re: S, seed: S) -> Self {
        Dual { re, eps: seed }
    }
}

impl<S: Scalar> Add for Dual<S> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.re + rhs.re, self.eps + rhs.eps)
    }
}

impl<S: Scalar> Sub for Dual<S> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.re - rhs.re, self.eps - rhs.eps)
    }
}

impl<S: Scalar> Mul for Dual<S> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Dual::new(
            self.re * rhs.re,
            self.re * rhs.eps + self.eps * rhs.re,
        )
    }
}

impl<S: Scalar> Div for Dual<S> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let q = self.re / rhs.re;
        Dual::new(q, (self.eps - q * rhs.eps) / rhs.re)
    }
}

impl<S: Scalar> Neg for Dual<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.eps)
    }
}

impl<S: Scalar> AddAssign for Dual<S> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<S: Scalar> SubAssign for Dual<S> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<S: Scalar> MulAssign for Dual<S> {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<S: Scalar> Zero for Dual<S> {
    #[inline]
    fn zero() -> Self {
        Dual::new(S::zero(), S::zero())
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }
}

impl<S: Scalar> One for Dual<S> {
    #[inline]
    fn one() -> Self {
        Dual::new(S::one(), S::zero())
    }
}

impl<S: Scalar> Scalar for Dual<S> {
    #[inline]
    fn from_f64(v: f64) -> Self {
        Dual::constant(S::from_f64(v))
    }
    #[inline]
    fn value(self) -> f64 {
        self.re.value()
    }
    #[inline]
    fn sin(self) -> Self {
        Dual::new(self.re.sin(), self.eps * self.re.cos())
    }
    #[inline]
    fn cos(self) -> Self {
        Dual::new(self.re.cos(), -(self.eps * self.re.sin()))
    }
    #[inline]
    fn sqrt(self) -> Self {
        let root = self.re.sqrt();
        let two = S::from_f64(2.0);
        Dual::new(root, self.eps / (two * root))
    }
}

/// Perturb coordinates along a direction: returns `x + eps * v` componentwise.
pub fn seed_along<S: Scalar>(x: &[S], v: &[S]) -> Vec<Dual<S>> {
    debug_assert_eq!(x.len(), v.len());
    x.iter()
        .zip(v)
        .map(|(&xi, &vi)| Dual::seeded(xi, vi))
        .collect()
}

/// Perturb the k-th coordinate only (partial derivative seed).
pub fn seed_partial<S: Scalar>(x: &[S], k: usize) -> Vec<Dual<S>> {
    x.iter()
        .enumerate()
        .map(|(i, &xi)| {
            if i == k {
                Dual::seeded(xi, S::one())
            } else {
                Dual::constant(xi)
            }
        })
        .collect()
}

/// Lift coordinates to constants (no perturbation).
pub fn lift<S: Scalar>(x: &[S]) -> Vec<Dual<S>> {
    x.iter().map(|&xi| Dual::constant(xi)).collect()
}
