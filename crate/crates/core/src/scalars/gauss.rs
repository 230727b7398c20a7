use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Field;

/// Gaussian rational `re + im*i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRat::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn real(r: BigRational) -> Self {
        GaussRat::new(r, BigRational::zero())
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -&self.im)
    }

    pub fn inv(&self) -> Option<Self> {
        let n = &self.re * &self.re + &self.im * &self.im;
        if n.is_zero() {
            return None;
        }
        Some(GaussRat::new(&self.re / &n, -(&self.im / &n)))
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-&self.re, -&self.im)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) if self.im.is_one() => write!(f, "i"),
            (true, false) if (-&self.im).is_one() => write!(f, "-i"),
            (true, false) => write!(f, "{}*i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                let a = self.im.abs();
                if a.is_one() {
                    write!(f, "{} {sign} i", self.re)
                } else {
                    write!(f, "{} {sign} {a}*i", self.re)
                }
            }
        }
    }
}

impl Field for GaussRat {
    fn zero() -> Self {
        GaussRat::zero()
    }
    fn one() -> Self {
        GaussRat::one()
    }
    fn is_zero(&self) -> bool {
        GaussRat::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared() {
        let i = GaussRat::i();
        assert_eq!(&i * &i, GaussRat::from_ints(-1, 0));
    }

    #[test]
    fn inverse_roundtrip() {
        let z = GaussRat::from_ints(3, -4);
        assert_eq!(&z * &z.inv().unwrap(), GaussRat::one());
        assert!(GaussRat::zero().inv().is_none());
    }
}
