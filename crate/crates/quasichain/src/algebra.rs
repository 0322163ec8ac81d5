//! Exact arithmetic in the real quadratic field Q(√5) and its ring of
//! integers Z[τ], together with the Galois star map √5 ↦ −√5.
//!
//! Every other module builds on [`GoldenNum`] (a + b√5 over big rationals)
//! and [`GoldenInt`] (m + nτ over big integers). Ordering, floor/ceil and
//! window membership are all decided exactly; floats only appear at the
//! output boundary.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Element a + b√5 of Q(√5), with `a`, `b` rational in lowest terms.
///
/// Equality is structural equality of (a, b), which coincides with equality
/// of real values because the representation is unique.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GoldenNum {
    a: BigRational,
    b: BigRational,
}

impl GoldenNum {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        GoldenNum { a, b }
    }

    pub fn zero() -> Self {
        GoldenNum {
            a: BigRational::zero(),
            b: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        GoldenNum {
            a: BigRational::one(),
            b: BigRational::zero(),
        }
    }

    /// The golden ratio τ = (1 + √5)/2.
    pub fn tau() -> Self {
        GoldenNum {
            a: BigRational::new(BigInt::from(1), BigInt::from(2)),
            b: BigRational::new(BigInt::from(1), BigInt::from(2)),
        }
    }

    /// √5 itself.
    pub fn sqrt5() -> Self {
        GoldenNum {
            a: BigRational::zero(),
            b: BigRational::one(),
        }
    }

    pub fn from_int(v: i64) -> Self {
        GoldenNum {
            a: BigRational::from_integer(BigInt::from(v)),
            b: BigRational::zero(),
        }
    }

    pub fn from_rational(num: i64, den: i64) -> Self {
        GoldenNum {
            a: BigRational::new(BigInt::from(num), BigInt::from(den)),
            b: BigRational::zero(),
        }
    }

    pub fn from_big_rational(r: BigRational) -> Self {
        GoldenNum {
            a: r,
            b: BigRational::zero(),
        }
    }

    /// Rational part (coefficient of 1).
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of √5.
    pub fn surd_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugation √5 ↦ −√5. An involutive field automorphism.
    pub fn star(&self) -> Self {
        GoldenNum {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm N(p) = p · star(p) = a² − 5b², a rational number.
    pub fn field_norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(BigInt::from(5)) * &self.b * &self.b
    }

    /// Exact sign of the real value a + b√5.
    pub fn sign(&self) -> Ordering {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            // Opposite signs: compare a² with 5b²; the part with the larger
            // square wins.
            (Ordering::Greater, Ordering::Less) | (Ordering::Less, Ordering::Greater) => {
                let a2 = &self.a * &self.a;
                let b25 = BigRational::from_integer(BigInt::from(5)) * &self.b * &self.b;
                match a2.cmp(&b25) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// Double value, correct to within a couple of ulp.
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * 5.0_f64.sqrt()
    }

    /// As [`Self::to_f64`], but signals a range error when the rational
    /// components overflow the double range.
    pub fn checked_to_f64(&self) -> Result<f64> {
        let v = self.to_f64();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Range(format!("{self} does not fit in an f64")))
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn checked_recip(&self) -> Option<Self> {
        let n = self.field_norm();
        if n.is_zero() {
            return None;
        }
        let s = self.star();
        Some(GoldenNum {
            a: &s.a / &n,
            b: &s.b / &n,
        })
    }

    /// Integer power, negative exponents via the inverse.
    pub fn pow(&self, e: i32) -> Self {
        if e < 0 {
            return self
                .checked_recip()
                .expect("pow of zero with negative exponent")
                .pow(-e);
        }
        let mut acc = GoldenNum::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Largest integer ≤ self.
    pub fn floor_bigint(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        let guess = self.to_f64();
        assert!(guess.is_finite(), "floor of out-of-range golden number");
        let mut cand = BigInt::from(guess.floor() as i128);
        // Correct the float guess exactly.
        loop {
            let lo = GoldenNum::from_big_rational(BigRational::from_integer(cand.clone()));
            if &lo > self {
                cand -= 1;
                continue;
            }
            let hi = GoldenNum::from_big_rational(BigRational::from_integer(&cand + 1));
            if &hi <= self {
                cand += 1;
                continue;
            }
            return cand;
        }
    }

    /// Smallest integer ≥ self.
    pub fn ceil_bigint(&self) -> BigInt {
        let f = self.floor_bigint();
        let fv = GoldenNum::from_big_rational(BigRational::from_integer(f.clone()));
        if &fv == self {
            f
        } else {
            f + 1
        }
    }

    /// Exact conversion to m + nτ, when the coefficients are integers.
    pub fn to_golden_int(&self) -> Option<GoldenInt> {
        // a + b√5 = (a − b) + 2b·τ
        let n = &self.b * BigRational::from_integer(BigInt::from(2));
        let m = &self.a - &self.b;
        if n.is_integer() && m.is_integer() {
            Some(GoldenInt::new(m.to_integer(), n.to_integer()))
        } else {
            None
        }
    }
}

fn sign_of(r: &BigRational) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::INFINITY)
}

impl PartialOrd for GoldenNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GoldenNum {
    fn cmp(&self, other: &Self) -> Ordering {
        GoldenNum {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
        }
        .sign()
    }
}

macro_rules! golden_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<GoldenNum> for GoldenNum {
            type Output = GoldenNum;
            fn $method(self, rhs: GoldenNum) -> GoldenNum {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a GoldenNum> for GoldenNum {
            type Output = GoldenNum;
            fn $method(self, rhs: &'a GoldenNum) -> GoldenNum {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<GoldenNum> for &'a GoldenNum {
            type Output = GoldenNum;
            fn $method(self, rhs: GoldenNum) -> GoldenNum {
                self.$method(&rhs)
            }
        }
    };
}

impl<'a, 'b> Add<&'b GoldenNum> for &'a GoldenNum {
    type Output = GoldenNum;
    fn add(self, rhs: &'b GoldenNum) -> GoldenNum {
        GoldenNum {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}
golden_binop!(Add, add);

impl<'a, 'b> Sub<&'b GoldenNum> for &'a GoldenNum {
    type Output = GoldenNum;
    fn sub(self, rhs: &'b GoldenNum) -> GoldenNum {
        GoldenNum {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}
golden_binop!(Sub, sub);

impl<'a, 'b> Mul<&'b GoldenNum> for &'a GoldenNum {
    type Output = GoldenNum;
    fn mul(self, rhs: &'b GoldenNum) -> GoldenNum {
        // (a + b√5)(c + d√5) = (ac + 5bd) + (ad + bc)√5
        let five = BigRational::from_integer(BigInt::from(5));
        GoldenNum {
            a: &self.a * &rhs.a + &five * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}
golden_binop!(Mul, mul);

impl<'a, 'b> Div<&'b GoldenNum> for &'a GoldenNum {
    type Output = GoldenNum;
    fn div(self, rhs: &'b GoldenNum) -> GoldenNum {
        let inv = rhs.checked_recip().expect("division by zero GoldenNum");
        self * &inv
    }
}
golden_binop!(Div, div);

impl Neg for GoldenNum {
    type Output = GoldenNum;
    fn neg(self) -> GoldenNum {
        GoldenNum {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl<'a> Neg for &'a GoldenNum {
    type Output = GoldenNum;
    fn neg(self) -> GoldenNum {
        GoldenNum {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }
}

impl fmt::Display for GoldenNum {
    /// Canonical text form "a+b*s5"; round-trips through the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*s5", self.b);
        }
        if self.b.is_negative() {
            write!(f, "{}-{}*s5", self.a, -self.b.clone())
        } else {
            write!(f, "{}+{}*s5", self.a, self.b)
        }
    }
}

impl fmt::Debug for GoldenNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GoldenNum({} ≈ {})", self, self.to_f64())
    }
}

impl FromStr for GoldenNum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_golden(s)
    }
}

/// Quadratic integer m + nτ of Z[τ], closed under multiplication via τ² = τ + 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GoldenInt {
    m: BigInt,
    n: BigInt,
}

impl GoldenInt {
    pub fn new(m: BigInt, n: BigInt) -> Self {
        GoldenInt { m, n }
    }

    pub fn from_ints(m: i64, n: i64) -> Self {
        GoldenInt {
            m: BigInt::from(m),
            n: BigInt::from(n),
        }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn tau() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn unit_part(&self) -> &BigInt {
        &self.m
    }

    pub fn tau_part(&self) -> &BigInt {
        &self.n
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero() && self.n.is_zero()
    }

    /// Lossless embedding m + nτ = (m + n/2) + (n/2)√5.
    pub fn to_golden_num(&self) -> GoldenNum {
        let two = BigInt::from(2);
        GoldenNum::new(
            BigRational::from_integer(self.m.clone())
                + BigRational::new(self.n.clone(), two.clone()),
            BigRational::new(self.n.clone(), two),
        )
    }

    /// star(m + nτ) = (m + n) − nτ, again in Z[τ].
    pub fn star(&self) -> GoldenInt {
        GoldenInt {
            m: &self.m + &self.n,
            n: -self.n.clone(),
        }
    }

    /// Ring norm N(m + nτ) = m² + mn − n².
    pub fn norm(&self) -> BigInt {
        &self.m * &self.m + &self.m * &self.n - &self.n * &self.n
    }

    pub fn to_f64(&self) -> f64 {
        self.to_golden_num().to_f64()
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Exact quotient self / rhs when it lies in Z[τ].
    pub fn checked_div_exact(&self, rhs: &GoldenInt) -> Option<GoldenInt> {
        let n = rhs.norm();
        if n.is_zero() {
            return None;
        }
        // self · star(rhs) has both coordinates divisible by N(rhs) iff the
        // quotient is integral.
        let prod = self * &rhs.star();
        let (qm, rm) = num_integer_div_rem(&prod.m, &n);
        let (qn, rn) = num_integer_div_rem(&prod.n, &n);
        if rm.is_zero() && rn.is_zero() {
            Some(GoldenInt { m: qm, n: qn })
        } else {
            None
        }
    }

    pub fn sign(&self) -> Ordering {
        self.to_golden_num().sign()
    }
}

fn num_integer_div_rem(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    (a / b, a % b)
}

impl<'a, 'b> Add<&'b GoldenInt> for &'a GoldenInt {
    type Output = GoldenInt;
    fn add(self, rhs: &'b GoldenInt) -> GoldenInt {
        GoldenInt {
            m: &self.m + &rhs.m,
            n: &self.n + &rhs.n,
        }
    }
}

impl<'a, 'b> Sub<&'b GoldenInt> for &'a GoldenInt {
    type Output = GoldenInt;
    fn sub(self, rhs: &'b GoldenInt) -> GoldenInt {
        GoldenInt {
            m: &self.m - &rhs.m,
            n: &self.n - &rhs.n,
        }
    }
}

impl<'a, 'b> Mul<&'b GoldenInt> for &'a GoldenInt {
    type Output = GoldenInt;
    fn mul(self, rhs: &'b GoldenInt) -> GoldenInt {
        // (m1 + n1τ)(m2 + n2τ) = (m1m2 + n1n2) + (m1n2 + n1m2 + n1n2)τ
        let nn = &self.n * &rhs.n;
        GoldenInt {
            m: &self.m * &rhs.m + &nn,
            n: &self.m * &rhs.n + &self.n * &rhs.m + &nn,
        }
    }
}

macro_rules! golden_int_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<GoldenInt> for GoldenInt {
            type Output = GoldenInt;
            fn $method(self, rhs: GoldenInt) -> GoldenInt {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a GoldenInt> for GoldenInt {
            type Output = GoldenInt;
            fn $method(self, rhs: &'a GoldenInt) -> GoldenInt {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<GoldenInt> for &'a GoldenInt {
            type Output = GoldenInt;
            fn $method(self, rhs: GoldenInt) -> GoldenInt {
                self.$method(&rhs)
            }
        }
    };
}
golden_int_binop!(Add, add);
golden_int_binop!(Sub, sub);
golden_int_binop!(Mul, mul);

impl Neg for GoldenInt {
    type Output = GoldenInt;
    fn neg(self) -> GoldenInt {
        GoldenInt {
            m: -self.m,
            n: -self.n,
        }
    }
}

impl<'a> Neg for &'a GoldenInt {
    type Output = GoldenInt;
    fn neg(self) -> GoldenInt {
        GoldenInt {
            m: -self.m.clone(),
            n: -self.n.clone(),
        }
    }
}

impl PartialOrd for GoldenInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GoldenInt {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

impl fmt::Display for GoldenInt {
    /// Canonical text form "m+n*t"; round-trips through the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n.is_zero() {
            return write!(f, "{}", self.m);
        }
        if self.m.is_zero() {
            return write!(f, "{}*t", self.n);
        }
        if self.n.is_negative() {
            write!(f, "{}-{}*t", self.m, -self.n.clone())
        } else {
            write!(f, "{}+{}*t", self.m, self.n)
        }
    }
}

impl fmt::Debug for GoldenInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GoldenInt({} ≈ {})", self, self.to_f64())
    }
}

impl FromStr for GoldenInt {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let g = parse_golden(s)?;
        g.to_golden_int()
            .ok_or_else(|| Error::Parse(format!("'{s}' is not an element of Z[tau]")))
    }
}

/// Point of the Minkowski embedding lattice: (x, star(x)) with x in Z[τ].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePoint {
    x: GoldenInt,
    xstar: GoldenInt,
}

impl LatticePoint {
    pub fn new(x: GoldenInt) -> Self {
        let xstar = x.star();
        LatticePoint { x, xstar }
    }

    pub fn physical(&self) -> &GoldenInt {
        &self.x
    }

    pub fn internal(&self) -> &GoldenInt {
        &self.xstar
    }
}

/// Parses expressions like "t-1", "-1+2*t", "1/2+1/2*s5", "3", "-t".
///
/// Terms are separated by top-level + and −; each term is a rational, the
/// symbol `t` (= τ) or `s5` (= √5), or a rational times one of the symbols.
pub fn parse_golden(input: &str) -> Result<GoldenNum> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut acc = GoldenNum::zero();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = 1i64;
        while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        }
        let start = i;
        while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            i += 1;
        }
        if start == i {
            return Err(Error::Parse(format!("dangling sign in '{input}'")));
        }
        let term = &s[start..i];
        let value = parse_term(term)
            .ok_or_else(|| Error::Parse(format!("bad term '{term}' in '{input}'")))?;
        if sign < 0 {
            acc = acc - value;
        } else {
            acc = acc + value;
        }
    }
    Ok(acc)
}

fn parse_term(term: &str) -> Option<GoldenNum> {
    if term == "t" {
        return Some(GoldenNum::tau());
    }
    if term == "s5" {
        return Some(GoldenNum::sqrt5());
    }
    let (coef_str, sym) = if let Some(rest) = term.strip_suffix("*t") {
        (rest, Some('t'))
    } else if let Some(rest) = term.strip_suffix("*s5") {
        (rest, Some('s'))
    } else if let Some(rest) = term.strip_suffix('t') {
        // allow "2t"
        (rest, Some('t'))
    } else {
        (term, None)
    };
    let coef = parse_rational(coef_str)?;
    let base = match sym {
        Some('t') => GoldenNum::tau(),
        Some('s') => GoldenNum::sqrt5(),
        _ => GoldenNum::one(),
    };
    Some(GoldenNum::from_big_rational(coef) * base)
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num).ok()?;
        let d = BigInt::from_str(den).ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n = BigInt::from_str(s).ok()?;
        Some(BigRational::from_integer(n))
    }
}
