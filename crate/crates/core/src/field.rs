//! The exact fields the linear algebra runs over.
//!
//! Besides [`crate::scalar::Scalar`] itself, evaluation at a point lands in
//! `Q(sqrt r)`, and the classical spectrum checks need the Gaussian rationals.

use std::fmt;

use num::{BigInt, BigRational, Complex, One, Signed, Zero};

/// A commutative field with exact equality.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_i64(n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
}

/// Gaussian rationals `Q(i)`.
impl Field for Complex<BigRational> {
    fn zero() -> Self {
        Complex::new(Zero::zero(), Zero::zero())
    }
    fn one() -> Self {
        Complex::new(One::one(), Zero::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Field::is_zero(self) {
            return None;
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(Complex::new(&self.re / &n, -&self.im / &n))
    }
    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_integer(n.into()), Zero::zero())
    }
}

/// An element `a + b·sqrt(r)` of a quadratic extension of `Q`.
///
/// `r` is a squarefree integer other than 0 and 1. Purely rational values
/// carry `r = 0` and combine with any radicand.
#[derive(Clone, Debug)]
pub struct QuadExt {
    a: BigRational,
    b: BigRational,
    r: i64,
}

impl QuadExt {
    pub fn rational(a: BigRational) -> Self {
        QuadExt { a, b: Zero::zero(), r: 0 }
    }

    /// `sqrt(r)` for a squarefree `r ∉ {0, 1}`.
    pub fn sqrt_of(r: i64) -> Self {
        assert!(r != 0 && r != 1, "radicand must not be 0 or 1");
        QuadExt { a: Zero::zero(), b: One::one(), r }
    }

    pub fn new(a: BigRational, b: BigRational, r: i64) -> Self {
        if Zero::is_zero(&b) {
            Self::rational(a)
        } else {
            QuadExt { a, b, r }
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> i64 {
        self.r
    }

    /// The value as a rational, if the irrational part vanishes.
    pub fn to_rational(&self) -> Option<BigRational> {
        Zero::is_zero(&self.b).then(|| self.a.clone())
    }

    fn radicand_with(&self, other: &Self) -> i64 {
        match (self.r, other.r) {
            (0, r) | (r, 0) => r,
            (r, s) => {
                assert_eq!(r, s, "mixing quadratic extensions with different radicands");
                r
            }
        }
    }
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (Zero::is_zero(&self.b) || self.r == other.r)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.b) {
            write!(f, "{}", self.a)
        } else if Zero::is_zero(&self.a) {
            write!(f, "{}*sqrt({})", self.b, self.r)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.r)
        }
    }
}

impl Field for QuadExt {
    fn zero() -> Self {
        Self::rational(Zero::zero())
    }
    fn one() -> Self {
        Self::rational(One::one())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn add(&self, o: &Self) -> Self {
        let r = self.radicand_with(o);
        QuadExt::new(&self.a + &o.a, &self.b + &o.b, r)
    }
    fn sub(&self, o: &Self) -> Self {
        let r = self.radicand_with(o);
        QuadExt::new(&self.a - &o.a, &self.b - &o.b, r)
    }
    fn mul(&self, o: &Self) -> Self {
        let r = self.radicand_with(o);
        if Zero::is_zero(&self.b) && Zero::is_zero(&o.b) {
            return QuadExt::rational(&self.a * &o.a);
        }
        let rr = BigRational::from_integer(BigInt::from(r));
        let a = &self.a * &o.a + &self.b * &o.b * rr;
        let b = &self.a * &o.b + &self.b * &o.a;
        QuadExt::new(a, b, r)
    }
    fn neg(&self) -> Self {
        QuadExt { a: -&self.a, b: -&self.b, r: self.r }
    }
    fn inv(&self) -> Option<Self> {
        if Field::is_zero(self) {
            return None;
        }
        if Zero::is_zero(&self.b) {
            return Some(QuadExt::rational(self.a.recip()));
        }
        let rr = BigRational::from_integer(BigInt::from(self.r));
        let norm = &self.a * &self.a - &self.b * &self.b * rr;
        Some(QuadExt::new(&self.a / &norm, -&self.b / &norm, self.r))
    }
    fn from_i64(n: i64) -> Self {
        QuadExt::rational(BigRational::from_integer(n.into()))
    }
}

/// Splits a positive integer as `s^2 · f` with `f` squarefree.
pub(crate) fn square_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive());
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            square *= &p;
        }
        if e % 2 == 1 {
            free *= &p;
        }
        p += 1;
    }
    free *= rest;
    (square, free)
}
