//! Rational functions in `v` over `Q`, with `q = v^4`.
//!
//! Every coefficient in the crate lives here: quantum integers, the half and
//! quarter powers of `q` coming from `K^{1/2}` on short roots, and the
//! `1/[2]` factors of the odd case. Values are kept in a canonical form so
//! that equality is structural.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, Signed, ToPrimitive};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::field::{square_split, Field, QuadExt};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("denominator vanishes at q = {0}")]
    Pole(String),
    #[error("q^(1/4) is not representable at q = {0}")]
    NotRepresentable(String),
    #[error("invalid evaluation point q = {0}: must avoid 0, 1 and -1")]
    BadPoint(String),
    #[error("value {0} is not rational at this point")]
    Irrational(String),
    #[error("q-binomial ({n} choose {m}) out of range")]
    Domain { n: i64, m: i64 },
    #[error("cannot parse half-integer from {0:?}")]
    ParseHalf(String),
}

/// An element of `Z/2`, stored as its double.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);

    pub const fn from_int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    pub const fn from_twice(t: i32) -> Self {
        HalfInt(t)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_int(self) -> Option<i32> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(self.0.into(), 2.into())
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 - o.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl From<i32> for HalfInt {
    fn from(n: i32) -> Self {
        HalfInt::from_int(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ScalarError::ParseHalf(s.to_string());
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i32 = n.trim().parse().map_err(|_| err())?;
            let d: i32 = d.trim().parse().map_err(|_| err())?;
            match d {
                1 => Ok(HalfInt::from_int(n)),
                2 => Ok(HalfInt(n)),
                _ => Err(err()),
            }
        } else {
            s.parse::<i32>().map(HalfInt::from_int).map_err(|_| err())
        }
    }
}

// Dense polynomials over Q, lowest degree first, no trailing zeros.
type Poly = Vec<BigRational>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_add(a: &[BigRational], b: &[BigRational]) -> Poly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out: Poly = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o += s;
    }
    trim(&mut out);
    out
}

fn poly_neg(a: &[BigRational]) -> Poly {
    a.iter().map(|c| -c).collect()
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_scale(a: &[BigRational], c: &BigRational) -> Poly {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

/// Shifts `a` up by `s` powers of v (s ≥ 0).
fn poly_shift(a: &[BigRational], s: usize) -> Poly {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); s];
    out.extend_from_slice(a);
    out
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Poly, Poly) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem: Poly = a.to_vec();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = b.last().unwrap().recip();
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() * &lead_inv;
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] -= &c * bc;
        }
        quot[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

fn poly_monic(mut a: Poly) -> Poly {
    if let Some(l) = a.last().cloned() {
        if !l.is_one() {
            let inv = l.recip();
            for c in a.iter_mut() {
                *c *= &inv;
            }
        }
    }
    a
}

fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = poly_monic(r);
    }
    poly_monic(x)
}

fn low_zeros(p: &[BigRational]) -> usize {
    p.iter().take_while(|c| c.is_zero()).count()
}

fn is_one_poly(p: &[BigRational]) -> bool {
    p.len() == 1 && p[0].is_one()
}

/// An exact rational function in `v`, where `q = v^4`.
///
/// Canonical form: the value is `v^shift · num / den` with `num` and `den`
/// coprime polynomials, both with nonzero constant term, and `den(0) = 1`.
/// Zero is `shift = 0`, `num = []`, `den = [1]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    shift: i32,
    num: Poly,
    den: Poly,
}

impl Scalar {
    fn from_parts(shift: i32, num: Poly, den: Poly) -> Scalar {
        let mut num = num;
        let mut den = den;
        trim(&mut num);
        trim(&mut den);
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return Scalar::zero();
        }
        let zn = low_zeros(&num);
        let zd = low_zeros(&den);
        let shift = shift + zn as i32 - zd as i32;
        num.drain(..zn);
        den.drain(..zd);
        if den.len() > 1 {
            let g = poly_gcd(&num, &den);
            if g.len() > 1 {
                num = poly_divrem(&num, &g).0;
                den = poly_divrem(&den, &g).0;
            }
        }
        let d0 = den[0].clone();
        if !d0.is_one() {
            let inv = d0.recip();
            num = poly_scale(&num, &inv);
            den = poly_scale(&den, &inv);
        }
        Scalar { shift, num, den }
    }

    pub fn zero() -> Scalar {
        Scalar { shift: 0, num: Vec::new(), den: vec![BigRational::one()] }
    }

    pub fn one() -> Scalar {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(c: BigRational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { shift: 0, num: vec![c], den: vec![BigRational::one()] }
    }

    /// `c · v^e`.
    pub fn monomial(c: BigRational, e: i32) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { shift: e, num: vec![c], den: vec![BigRational::one()] }
    }

    /// The formal variable raised to `e`, i.e. `q^{e/4}`.
    pub fn v_pow(e: i32) -> Scalar {
        Scalar::monomial(BigRational::one(), e)
    }

    pub fn q() -> Scalar {
        Scalar::v_pow(4)
    }

    pub fn q_pow(e: i32) -> Scalar {
        Scalar::v_pow(4 * e)
    }

    /// `q^h` for a half-integer `h`.
    pub fn q_pow_half(h: HalfInt) -> Scalar {
        Scalar::v_pow(2 * h.twice())
    }

    /// Builds a Laurent polynomial from `(v-exponent, coefficient)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (i32, BigRational)>>(terms: I) -> Scalar {
        let terms: Vec<(i32, BigRational)> = terms.into_iter().collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Scalar::zero();
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut num = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            num[(e - lo) as usize] += c;
        }
        Scalar::from_parts(lo, num, vec![BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && is_one_poly(&self.num) && is_one_poly(&self.den)
    }

    /// True when the denominator is 1, i.e. the value is a Laurent polynomial in `v`.
    pub fn is_laurent(&self) -> bool {
        is_one_poly(&self.den)
    }

    /// `(v-exponent, coefficient)` pairs of the numerator times `v^shift`,
    /// ascending, skipping zeros. Only meaningful for Laurent values.
    pub fn numerator_terms(&self) -> Vec<(i32, BigRational)> {
        self.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.shift + i as i32, c.clone()))
            .collect()
    }

    pub fn denominator_terms(&self) -> Vec<(i32, BigRational)> {
        self.den
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i32, c.clone()))
            .collect()
    }

    /// Value at `v = 1` of a Laurent polynomial (the sum of its coefficients).
    pub fn coefficient_sum(&self) -> Option<BigRational> {
        self.is_laurent().then(|| self.num.iter().fold(BigRational::zero(), |a, c| a + c))
    }

    /// If the value is `±v^e`, returns `(sign, e)`.
    pub fn as_signed_monomial(&self) -> Option<(i32, i32)> {
        if self.is_laurent() && self.num.len() == 1 {
            let c = &self.num[0];
            if c.is_one() {
                return Some((1, self.shift));
            }
            if (-c).is_one() {
                return Some((-1, self.shift));
            }
        }
        None
    }

    /// True when the value is invariant under `v ↦ v^{-1}`.
    pub fn is_bar_symmetric(&self) -> bool {
        *self == self.bar()
    }

    /// The substitution `v ↦ v^{-1}`.
    pub fn bar(&self) -> Scalar {
        if self.is_zero() {
            return Scalar::zero();
        }
        let dn = self.num.len() as i32 - 1;
        let dd = self.den.len() as i32 - 1;
        let num: Poly = self.num.iter().rev().cloned().collect();
        let den: Poly = self.den.iter().rev().cloned().collect();
        Scalar::from_parts(-self.shift - dn + dd, num, den)
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(Scalar::from_parts(-self.shift, self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i32) -> Scalar {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        Field::pow(self, e as u32)
    }

    /// Exact value at an evaluation point.
    pub fn eval(&self, p: &EvalPoint) -> Result<QuadExt, ScalarError> {
        let n = eval_poly(&self.num, p)?;
        let d = eval_poly(&self.den, p)?;
        let s = p.v_pow(self.shift)?;
        let dinv = d.inv().ok_or_else(|| ScalarError::Pole(p.to_string()))?;
        Ok(n.mul(&dinv).mul(&s))
    }

    /// Exact rational value at an evaluation point.
    pub fn eval_rational(&self, p: &EvalPoint) -> Result<BigRational, ScalarError> {
        let x = self.eval(p)?;
        x.to_rational().ok_or_else(|| ScalarError::Irrational(x.to_string()))
    }
}

fn eval_poly(p: &[BigRational], at: &EvalPoint) -> Result<QuadExt, ScalarError> {
    // Group terms by exponent class so that the common case (exponents that
    // are multiples of 4) stays rational.
    let mut acc = QuadExt::zero();
    for (i, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = at.v_pow(i as i32)?.mul(&QuadExt::rational(c.clone()));
        acc = acc.add(&term);
    }
    Ok(acc)
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        self.num.is_empty()
    }
    fn is_one(&self) -> bool {
        Scalar::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(o.shift);
        let a = poly_shift(&self.num, (self.shift - s) as usize);
        let b = poly_shift(&o.num, (o.shift - s) as usize);
        if self.den == o.den {
            return Scalar::from_parts(s, poly_add(&a, &b), self.den.clone());
        }
        let num = poly_add(&poly_mul(&a, &o.den), &poly_mul(&b, &self.den));
        Scalar::from_parts(s, num, poly_mul(&self.den, &o.den))
    }
    fn sub(&self, o: &Self) -> Self {
        Field::add(self, &Field::neg(o))
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        let shift = self.shift + o.shift;
        if self.is_laurent() && o.is_laurent() {
            // Product of polynomials with nonzero constant terms keeps a
            // nonzero constant term: already canonical.
            return Scalar { shift, num: poly_mul(&self.num, &o.num), den: self.den.clone() };
        }
        Scalar::from_parts(shift, poly_mul(&self.num, &o.num), poly_mul(&self.den, &o.den))
    }
    fn neg(&self) -> Self {
        Scalar { shift: self.shift, num: poly_neg(&self.num), den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        Scalar::inv(self)
    }
    fn from_i64(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $m:ident, $f:path) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                $f(self, o)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                $f(&self, &o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                $f(&self, o)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                $f(self, &o)
            }
        }
    };
}

fn scalar_div(a: &Scalar, b: &Scalar) -> Scalar {
    Field::mul(a, &b.inv().expect("division by zero scalar"))
}

scalar_binop!(Add, add, Field::add);
scalar_binop!(Sub, sub, Field::sub);
scalar_binop!(Mul, mul, Field::mul);
scalar_binop!(Div, div, scalar_div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Field::neg(&self)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Field::neg(self)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

fn fmt_q_exp(e: i32) -> String {
    // v^e = q^{e/4}
    let g = num::integer::gcd(e.abs(), 4);
    let (n, d) = (e / g, 4 / g);
    match (n, d) {
        (1, 1) => "q".to_string(),
        (n, 1) => format!("q^{n}"),
        (n, d) => format!("q^({n}/{d})"),
    }
}

fn fmt_laurent(shift: i32, p: &[BigRational]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let e = shift + i as i32;
        let neg = c.is_negative();
        let a = c.abs();
        let body = if e == 0 {
            a.to_string()
        } else if a.is_one() {
            fmt_q_exp(e)
        } else {
            format!("{}*{}", a, fmt_q_exp(e))
        };
        if parts.is_empty() {
            parts.push(if neg { format!("-{body}") } else { body });
        } else {
            parts.push(if neg { format!("- {body}") } else { format!("+ {body}") });
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_laurent() {
            write!(f, "{}", fmt_laurent(self.shift, &self.num))
        } else {
            write!(f, "({})/({})", fmt_laurent(self.shift, &self.num), fmt_laurent(0, &self.den))
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar[{self}]")
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Quantum integer `[n] = (q^n - q^{-n}) / (q - q^{-1})` for half-integer `n`.
pub fn qint(n: HalfInt) -> Scalar {
    if let Some(m) = n.to_int() {
        // q^{m-1} + q^{m-3} + ... + q^{1-m}, negated for m < 0
        let sign = if m < 0 { -1 } else { 1 };
        let m = m.abs();
        return Scalar::from_terms(
            (0..m).map(|i| (4 * (m - 1 - 2 * i), BigRational::from_integer(sign.into()))),
        );
    }
    let t = n.twice();
    let num = Scalar::from_terms([(2 * t, BigRational::one()), (-2 * t, -BigRational::one())]);
    let den = Scalar::from_terms([(4, BigRational::one()), (-4, -BigRational::one())]);
    num / den
}

/// `[n]` for an integer `n`.
pub fn qint_i(n: i32) -> Scalar {
    qint(HalfInt::from_int(n))
}

/// `{i} = q^i + q^{-i}`.
pub fn curly(i: HalfInt) -> Scalar {
    Scalar::q_pow_half(i) + Scalar::q_pow_half(-i)
}

/// `[n]! = [1][2]...[n]`.
pub fn qfactorial(n: u32) -> Scalar {
    (1..=n as i32).fold(Scalar::one(), |acc, i| acc * qint_i(i))
}

/// Gaussian binomial `[n]! / ([m]! [n-m]!)`.
pub fn qbinom(n: i64, m: i64) -> Result<Scalar, ScalarError> {
    if n < 0 || m < 0 || m > n {
        return Err(ScalarError::Domain { n, m });
    }
    let m = m.min(n - m);
    let mut acc = Scalar::one();
    for i in 0..m {
        acc = acc * qint_i((n - i) as i32) / qint_i((i + 1) as i32);
    }
    Ok(acc)
}

/// An exact specialization point `q = q0`.
///
/// Values land in `Q(sqrt(q0))`; odd powers of `v = q^{1/4}` are available
/// only when `sqrt(q0)` is rational.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalPoint {
    q0: BigRational,
    sqrt: QuadExt,
    quarter: Option<QuadExt>,
}

impl EvalPoint {
    /// A generic point `q = q0`, `q0 ∉ {0, 1, -1}`.
    pub fn new(q0: BigRational) -> Result<EvalPoint, ScalarError> {
        let one = BigRational::one();
        if q0.is_zero() || q0 == one || q0 == -one {
            return Err(ScalarError::BadPoint(q0.to_string()));
        }
        let sqrt = rational_sqrt(&q0);
        let quarter = match sqrt.to_rational() {
            Some(s) if s.is_positive() => Some(rational_sqrt(&s)),
            _ => None,
        };
        Ok(EvalPoint { q0, sqrt, quarter })
    }

    /// The point with `v = v0`, so `q = v0^4`.
    pub fn from_v(v0: BigRational) -> Result<EvalPoint, ScalarError> {
        let one = BigRational::one();
        if v0.is_zero() || v0 == one || v0 == -one {
            return Err(ScalarError::BadPoint(format!("v = {v0}")));
        }
        let sq = &v0 * &v0;
        Ok(EvalPoint {
            q0: &sq * &sq,
            sqrt: QuadExt::rational(sq),
            quarter: Some(QuadExt::rational(v0)),
        })
    }

    /// The classical point `q = 1`. It sits outside the generic range and is
    /// only meaningful for values without poles at `q = 1`.
    pub fn classical() -> EvalPoint {
        let one = QuadExt::one();
        EvalPoint { q0: BigRational::one(), sqrt: one.clone(), quarter: Some(one) }
    }

    pub fn parse(s: &str) -> Result<EvalPoint, ScalarError> {
        let q0: BigRational =
            s.trim().parse().map_err(|_| ScalarError::BadPoint(s.to_string()))?;
        EvalPoint::new(q0)
    }

    pub fn q0(&self) -> &BigRational {
        &self.q0
    }

    pub fn is_classical(&self) -> bool {
        self.q0.is_one()
    }

    /// The value of `v^e`.
    pub fn v_pow(&self, e: i32) -> Result<QuadExt, ScalarError> {
        let base = if e % 4 == 0 {
            return Ok(QuadExt::rational(rat_pow(&self.q0, e / 4)));
        } else if e % 2 == 0 {
            (self.sqrt.clone(), e / 2)
        } else {
            let qq = self
                .quarter
                .clone()
                .ok_or_else(|| ScalarError::NotRepresentable(self.q0.to_string()))?;
            (qq, e)
        };
        let (b, k) = base;
        let p = Field::pow(&b, k.unsigned_abs());
        if k < 0 {
            p.inv().ok_or_else(|| ScalarError::Pole(self.q0.to_string()))
        } else {
            Ok(p)
        }
    }
}

impl fmt::Display for EvalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q0)
    }
}

fn rat_pow(x: &BigRational, e: i32) -> BigRational {
    let p = Field::pow(x, e.unsigned_abs());
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// `sqrt(x)` in the smallest quadratic extension containing it.
fn rational_sqrt(x: &BigRational) -> QuadExt {
    let neg = x.is_negative();
    let n = x.numer().abs() * x.denom();
    let (s, f) = square_split(&n);
    let coeff = BigRational::new(s, x.denom().clone());
    let radicand = if neg { -f } else { f };
    if radicand == BigInt::from(1) {
        QuadExt::rational(coeff)
    } else {
        let r = radicand.to_i64().expect("radicand fits in i64");
        QuadExt::new(BigRational::zero(), coeff, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn q(e: i32) -> Scalar {
        Scalar::q_pow(e)
    }

    #[test]
    fn qint_examples() {
        assert_eq!(qint_i(1), Scalar::one());
        assert_eq!(qint_i(2), q(1) + q(-1));
        assert_eq!(qint_i(0), Scalar::zero());
        let h = HalfInt::HALF;
        let expect = (Scalar::q_pow_half(h) + Scalar::q_pow_half(-h)).inv().unwrap();
        assert_eq!(qint(h), expect);
        assert_eq!(qint(-HalfInt::from_twice(3)), -qint(HalfInt::from_twice(3)));
    }

    #[test]
    fn qint_matches_defining_quotient() {
        for t in -9..=9 {
            let n = HalfInt::from_twice(t);
            let direct = (Scalar::q_pow_half(n) - Scalar::q_pow_half(-n)) / (q(1) - q(-1));
            assert_eq!(qint(n), direct, "n = {n}");
        }
    }

    #[test]
    fn qint_coefficient_sum_is_n() {
        for n in 1..12 {
            assert_eq!(qint_i(n).coefficient_sum(), Some(r(n as i64, 1)));
        }
    }

    #[test]
    fn qbinom_examples() {
        assert_eq!(qbinom(5, 0).unwrap(), Scalar::one());
        let expect = q(4) + q(2) + Scalar::from_int(2) + q(-2) + q(-4);
        assert_eq!(qbinom(4, 2).unwrap(), expect);
        assert_eq!(qbinom(3, 1).unwrap(), q(2) + Scalar::one() + q(-2));
        assert!(qbinom(3, 4).is_err());
        assert!(qbinom(3, -1).is_err());
    }

    #[test]
    fn qbinom_pascal_and_symmetry() {
        for n in 1..=12i64 {
            for m in 0..=n {
                let b = qbinom(n, m).unwrap();
                assert!(b.is_laurent() && b.is_bar_symmetric());
                assert_eq!(b, qbinom(n, n - m).unwrap());
                if m >= 1 && m < n {
                    let rhs = q(m as i32) * qbinom(n - 1, m).unwrap()
                        + q((m - n) as i32) * qbinom(n - 1, m - 1).unwrap();
                    assert_eq!(b, rhs, "pascal at ({n},{m})");
                }
            }
        }
    }

    #[test]
    fn curly_examples() {
        assert_eq!(curly(HalfInt::ZERO), Scalar::from_int(2));
        assert_eq!(curly(HalfInt::from_int(1)), qint_i(2));
        assert_eq!(curly(HalfInt::HALF), Scalar::v_pow(2) + Scalar::v_pow(-2));
        assert_eq!(curly(HalfInt::from_twice(-3)), curly(HalfInt::from_twice(3)));
    }

    #[test]
    fn eval_examples() {
        let p = EvalPoint::new(r(9, 4)).unwrap();
        assert_eq!(qint_i(2).eval_rational(&p).unwrap(), r(97, 36));
        assert_eq!(Scalar::one().eval_rational(&p).unwrap(), r(1, 1));
        assert!(EvalPoint::new(r(1, 1)).is_err());
        assert!(EvalPoint::new(r(-1, 1)).is_err());
        assert!(EvalPoint::from_v(r(-1, 1)).is_err());
    }

    #[test]
    fn eval_in_quadratic_extension() {
        let p = EvalPoint::new(r(3, 2)).unwrap();
        let s = Scalar::q_pow_half(HalfInt::HALF);
        let x = s.eval(&p).unwrap();
        assert_eq!(x.mul(&x), QuadExt::rational(r(3, 2)));
        assert!(matches!(Scalar::v_pow(1).eval(&p), Err(ScalarError::NotRepresentable(_))));
        // [1/2] = 1/(q^{1/2}+q^{-1/2}) evaluates fine.
        let h = qint(HalfInt::HALF).eval(&p).unwrap();
        let two = curly(HalfInt::HALF).eval(&p).unwrap();
        assert_eq!(h.mul(&two), QuadExt::one());
        // At a square q0 the quarter power is available.
        let p2 = EvalPoint::new(r(9, 4)).unwrap();
        let v = Scalar::v_pow(1).eval(&p2).unwrap();
        assert_eq!(v.mul(&v), QuadExt::rational(r(3, 2)));
    }

    #[test]
    fn pole_is_reported() {
        // 1/(q - 2) at q = 2
        let s = (q(1) - Scalar::from_int(2)).inv().unwrap();
        let p = EvalPoint::new(r(2, 1)).unwrap();
        assert!(matches!(s.eval(&p), Err(ScalarError::Pole(_))));
    }

    #[test]
    fn canonical_form_after_cancellation() {
        let a = (q(2) - Scalar::one()) / (q(1) - Scalar::one());
        assert_eq!(a, q(1) + Scalar::one());
        assert!(a.is_laurent());
        let b = Scalar::from_int(3) / Scalar::from_int(6);
        assert_eq!(b, Scalar::from_rational(r(1, 2)));
    }

    #[test]
    fn bar_involution() {
        let x = (q(2) + Scalar::from_int(3)) / (q(-1) + Scalar::from_int(5));
        assert_eq!(x.bar().bar(), x);
        assert_eq!(qint(HalfInt::from_twice(5)).bar(), qint(HalfInt::from_twice(5)));
    }

    #[test]
    fn display_forms() {
        assert_eq!(qint_i(3).to_string(), "q^2 + 1 + q^-2");
        assert_eq!((Scalar::from_int(-2) * Scalar::v_pow(2)).to_string(), "-2*q^(1/2)");
        assert_eq!(Scalar::zero().to_string(), "0");
    }

    #[test]
    fn half_int_parse_and_display() {
        assert_eq!("3/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(3));
        assert_eq!("-2".parse::<HalfInt>().unwrap(), HalfInt::from_int(-2));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert_eq!(HalfInt::from_twice(-1).to_string(), "-1/2");
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        let laurent = || {
            prop::collection::vec((-6i32..=6, -4i64..=4), 0..4).prop_map(|ts| {
                Scalar::from_terms(ts.into_iter().map(|(e, c)| (e, BigRational::from_integer(c.into()))))
            })
        };
        (laurent(), laurent()).prop_map(|(n, d)| match d.inv() {
            Some(di) => n * di,
            None => n,
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a - &a), &Scalar::zero());
        }

        #[test]
        fn field_inverse(a in arb_scalar()) {
            if let Some(i) = a.inv() {
                prop_assert!((&a * &i).is_one());
            }
        }

        #[test]
        fn eval_is_homomorphism(a in arb_scalar(), b in arb_scalar()) {
            let p = EvalPoint::new(BigRational::new(5.into(), 2.into())).unwrap();
            if let (Ok(x), Ok(y)) = (a.eval(&p), b.eval(&p)) {
                let s = (&a + &b).eval(&p).unwrap();
                prop_assert_eq!(s, x.add(&y));
                if let Ok(m) = (&a * &b).eval(&p) {
                    prop_assert_eq!(m, x.mul(&y));
                }
            }
        }
    }
}
