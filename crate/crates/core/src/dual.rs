//! First-order forward-mode dual numbers.
//!
//! A [`Dual`] carries a value and a gradient with respect to up to
//! [`MAX_VARS`] active coordinates. Seeding coordinate `i` with a unit
//! derivative and evaluating a function yields `∂f/∂x_i` exactly up to
//! rounding. Only first derivatives are ever needed here: Christoffel
//! symbols need `∂g`, the Nijenhuis tensor and `∇J` need `∂J`.

use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Maximum number of active coordinates a [`Dual`] can differentiate against.
pub const MAX_VARS: usize = 8;

/// Scalar arithmetic shared by `f64` and [`Dual`], so that chart maps,
/// octonion products and small dense solves can be written once.
pub trait Scalar:
    Copy
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn from_f64(v: f64) -> Self;
    /// Real part (the value itself for `f64`).
    fn value(&self) -> f64;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn recip(self) -> Self {
        Self::one() / self
    }

    /// Integer power by repeated squaring; negative exponents go through `recip`.
    fn powi(self, exp: i32) -> Self {
        let mut base = if exp < 0 { self.recip() } else { self };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }

    fn value(&self) -> f64 {
        *self
    }
}

/// A dual number `re + Σ du_i ε_i` with `ε_i ε_j = 0`.
#[derive(Clone, Copy, PartialEq)]
pub struct Dual {
    re: f64,
    du: [f64; MAX_VARS],
    nvars: usize,
}

impl Dual {
    /// A constant: zero derivative.
    pub const fn constant(re: f64) -> Self {
        Dual {
            re,
            du: [0.0; MAX_VARS],
            nvars: 0,
        }
    }

    /// The `index`-th of `nvars` independent variables, evaluated at `re`.
    ///
    /// # Panics
    /// If `nvars > MAX_VARS` or `index >= nvars`.
    pub fn variable(re: f64, index: usize, nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} active coordinates");
        assert!(index < nvars, "variable index out of range");
        let mut du = [0.0; MAX_VARS];
        du[index] = 1.0;
        Dual { re, du, nvars }
    }

    /// Seeds every coordinate of `point` as an independent variable.
    pub fn seed(point: &[f64]) -> alloc::vec::Vec<Dual> {
        let n = point.len();
        point
            .iter()
            .enumerate()
            .map(|(i, &v)| Dual::variable(v, i, n))
            .collect()
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    /// Gradient over the active coordinates.
    pub fn derivative(&self) -> &[f64] {
        &self.du[..self.nvars]
    }

    /// `∂/∂x_i`; zero for inactive coordinates.
    pub fn partial(&self, i: usize) -> f64 {
        if i < MAX_VARS {
            self.du[i]
        } else {
            0.0
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    fn zip(self, rhs: Dual, re: f64, f: impl Fn(f64, f64) -> f64) -> Dual {
        let nvars = self.nvars.max(rhs.nvars);
        let mut du = [0.0; MAX_VARS];
        for (k, d) in du.iter_mut().enumerate().take(nvars) {
            *d = f(self.du[k], rhs.du[k]);
        }
        Dual { re, du, nvars }
    }

    fn map(self, re: f64, scale: f64) -> Dual {
        let mut out = self;
        out.re = re;
        for d in out.du.iter_mut().take(self.nvars) {
            *d *= scale;
        }
        out
    }
}

impl fmt::Debug for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dual({} + {:?}ε)", self.re, self.derivative())
    }
}

impl From<f64> for Dual {
    fn from(v: f64) -> Self {
        Dual::constant(v)
    }
}

impl Scalar for Dual {
    fn from_f64(v: f64) -> Self {
        Dual::constant(v)
    }

    fn value(&self) -> f64 {
        self.re
    }

    fn recip(self) -> Self {
        let inv = 1.0 / self.re;
        self.map(inv, -inv * inv)
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, rhs: Dual) -> Dual {
        self.zip(rhs, self.re + rhs.re, |a, b| a + b)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, rhs: Dual) -> Dual {
        self.zip(rhs, self.re - rhs.re, |a, b| a - b)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for Dual {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        let (a, c) = (self.re, rhs.re);
        self.zip(rhs, a * c, |b, d| a * d + b * c)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, rhs: Dual) -> Dual {
        let (a, c) = (self.re, rhs.re);
        let c2 = c * c;
        self.zip(rhs, a / c, |b, d| (b * c - a * d) / c2)
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        self.map(-self.re, -1.0)
    }
}

impl Add<f64> for Dual {
    type Output = Dual;
    fn add(mut self, rhs: f64) -> Dual {
        self.re += rhs;
        self
    }
}

impl Sub<f64> for Dual {
    type Output = Dual;
    fn sub(mut self, rhs: f64) -> Dual {
        self.re -= rhs;
        self
    }
}

impl Mul<f64> for Dual {
    type Output = Dual;
    fn mul(self, rhs: f64) -> Dual {
        self.map(self.re * rhs, rhs)
    }
}

impl Div<f64> for Dual {
    type Output = Dual;
    fn div(self, rhs: f64) -> Dual {
        self.map(self.re / rhs, 1.0 / rhs)
    }
}

impl AddAssign for Dual {
    fn add_assign(&mut self, rhs: Dual) {
        *self = *self + rhs;
    }
}

impl SubAssign for Dual {
    fn sub_assign(&mut self, rhs: Dual) {
        *self = *self - rhs;
    }
}

impl MulAssign for Dual {
    fn mul_assign(&mut self, rhs: Dual) {
        *self = *self * rhs;
    }
}
