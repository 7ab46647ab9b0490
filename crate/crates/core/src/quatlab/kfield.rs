//! Exact arithmetic in `K = Q(√-2)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};

/// `u + v√-2` with rational `u`, `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KElem {
    pub u: BigRational,
    pub v: BigRational,
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl KElem {
    pub fn new(u: BigRational, v: BigRational) -> Self {
        KElem { u, v }
    }

    pub fn from_ints(u: i64, v: i64) -> Self {
        KElem { u: int(u), v: int(v) }
    }

    pub fn from_rational(u: BigRational) -> Self {
        KElem { u, v: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn sqrt_m2() -> Self {
        Self::from_ints(0, 1)
    }

    /// `π = 1 - √-2`, one of the two primes over 3.
    pub fn pi() -> Self {
        Self::from_ints(1, -1)
    }

    pub fn pi_bar() -> Self {
        Self::from_ints(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn conj(&self) -> Self {
        KElem { u: self.u.clone(), v: -self.v.clone() }
    }

    /// `N(u + v√-2) = u^2 + 2 v^2`.
    pub fn norm(&self) -> BigRational {
        &self.u * &self.u + int(2) * &self.v * &self.v
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return domain("inverse of zero in K");
        }
        let n = self.norm();
        Ok(KElem { u: &self.u / &n, v: -(&self.v / &n) })
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        KElem { u: &self.u * r, v: &self.v * r }
    }

    /// Membership in `O_K = Z[√-2]`.
    pub fn is_integral(&self) -> bool {
        self.u.is_integer() && self.v.is_integer()
    }

    /// `Some(±1)` when the element is `±1`.
    pub fn sign(&self) -> Option<i8> {
        if !self.v.is_zero() {
            return None;
        }
        if self.u.is_one() {
            Some(1)
        } else if (-self.u.clone()).is_one() {
            Some(-1)
        } else {
            None
        }
    }

    /// Value at the complex place `√-2 ↦ i√2`.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        num_complex::Complex64::new(f(&self.u), f(&self.v) * std::f64::consts::SQRT_2)
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.u.is_zero(), self.v.is_zero()) {
            (_, true) => write!(f, "{}", self.u),
            (true, false) => write!(f, "{}*r", self.v),
            (false, false) if self.v.is_negative() => write!(f, "{}-{}*r", self.u, -self.v.clone()),
            (false, false) => write!(f, "{}+{}*r", self.u, self.v),
        }
    }
}

impl Add for &KElem {
    type Output = KElem;
    fn add(self, o: &KElem) -> KElem {
        KElem { u: &self.u + &o.u, v: &self.v + &o.v }
    }
}

impl Sub for &KElem {
    type Output = KElem;
    fn sub(self, o: &KElem) -> KElem {
        KElem { u: &self.u - &o.u, v: &self.v - &o.v }
    }
}

impl Mul for &KElem {
    type Output = KElem;
    fn mul(self, o: &KElem) -> KElem {
        KElem { u: &self.u * &o.u - int(2) * &self.v * &o.v, v: &self.u * &o.v + &self.v * &o.u }
    }
}

impl Neg for &KElem {
    type Output = KElem;
    fn neg(self) -> KElem {
        KElem { u: -self.u.clone(), v: -self.v.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_splits() {
        assert_eq!(&KElem::pi() * &KElem::pi_bar(), KElem::from_ints(3, 0));
        assert_eq!(&KElem::sqrt_m2() * &KElem::sqrt_m2(), KElem::from_ints(-2, 0));
        let x = KElem::from_ints(3, -5);
        assert_eq!(&x * &x.inv().unwrap(), KElem::one());
        assert_eq!(x.norm(), int(59));
        assert!(KElem::zero().inv().is_err());
        assert_eq!(x.to_string(), "3-5*r");
    }
}
