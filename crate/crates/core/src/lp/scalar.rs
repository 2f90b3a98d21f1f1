use std::cmp::Ordering;
use std::fmt::Debug;

use num_traits::{One, Signed, Zero};

use crate::geom::number::{self, Rational};

/// Field operations the simplex needs, with a sign test that may use a
/// tolerance.
pub(crate) trait Scalar: Clone + Debug + Send + Sync {
    fn nil() -> Self;
    fn unit() -> Self;
    fn from_u32(v: u32) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Sign, treating values within the tolerance as zero.
    fn sign(&self) -> Ordering;
    fn is_zero_exact(&self) -> bool;
    fn cmp_val(&self, o: &Self) -> Ordering;
    fn to_rational(&self) -> Rational;
    fn approx(&self) -> f64;
}

impl Scalar for Rational {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn from_u32(v: u32) -> Self {
        Rational::from_integer(v.into())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sign(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn is_zero_exact(&self) -> bool {
        Zero::is_zero(self)
    }
    fn cmp_val(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn approx(&self) -> f64 {
        number::to_f64(self)
    }
}

pub(crate) const FLOAT_TOL: f64 = 1e-9;

impl Scalar for f64 {
    fn nil() -> Self {
        0.0
    }
    fn unit() -> Self {
        1.0
    }
    fn from_u32(v: u32) -> Self {
        v as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sign(&self) -> Ordering {
        if *self > FLOAT_TOL {
            Ordering::Greater
        } else if *self < -FLOAT_TOL {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn is_zero_exact(&self) -> bool {
        *self == 0.0
    }
    fn cmp_val(&self, o: &Self) -> Ordering {
        self.partial_cmp(o).unwrap_or(Ordering::Equal)
    }
    fn to_rational(&self) -> Rational {
        number::snap_f64(*self, 1000, 1e-7)
    }
    fn approx(&self) -> f64 {
        *self
    }
}
