//! Exact rational with an inline machine-word representation.
//!
//! Values whose numerator and denominator fit in `i64` stay inline and are
//! combined in `i128`; anything larger falls back to `BigRational`. Every
//! value is kept canonical (lowest terms, positive denominator, inline when it
//! fits), so derived equality and hashing are structural.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64, i64),
    Big(BigRational),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Lehmer's gcd on magnitudes: runs Euclid on the leading 64 bits and
/// applies the accumulated cofactors in one multi-precision step, finishing
/// in `u128` once both operands fit.
fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut x, mut y) = (a.magnitude().clone(), b.magnitude().clone());
    if x < y {
        std::mem::swap(&mut x, &mut y);
    }
    loop {
        if let Some(v) = y.to_u128() {
            if v == 0 {
                return BigInt::from(x);
            }
            let u = (&x % v).to_u128().expect("remainder below a u128 divisor");
            return BigInt::from(gcd_u128(v, u));
        }
        let shift = x.bits() - 64;
        let (mut xh, mut yh) = ((&x >> shift).to_u64().unwrap() as i128, (&y >> shift).to_u64().unwrap() as i128);
        let (mut ca, mut cb, mut cc, mut cd): (i128, i128, i128, i128) = (1, 0, 0, 1);
        while yh + cc != 0 && yh + cd != 0 {
            let q = (xh + ca) / (yh + cc);
            if q != (xh + cb) / (yh + cd) {
                break;
            }
            (ca, cc) = (cc, ca - q * cc);
            (cb, cd) = (cd, cb - q * cd);
            (xh, yh) = (yh, xh - q * yh);
        }
        if cb == 0 {
            let r = &x % &y;
            x = y;
            y = r;
        } else {
            let (bx, by) = (BigInt::from(x), BigInt::from(y));
            let nx = &bx * ca + &by * cb;
            let ny = bx * cc + by * cd;
            x = nx.into_parts().1;
            y = ny.into_parts().1;
        }
    }
}

impl Rational {
    /// `n/d` from `i128` parts; panics when `d == 0`.
    pub fn from_i128(n: i128, d: i128) -> Rational {
        assert!(d != 0, "denominator == 0");
        let (un, ud) = (n.unsigned_abs(), d.unsigned_abs());
        let negative = (n < 0) != (d < 0) && n != 0;
        let (un, ud) = if un <= u64::MAX as u128 && ud <= u64::MAX as u128 {
            let g = gcd_u64(un as u64, ud as u64);
            ((un as u64 / g) as u128, (ud as u64 / g) as u128)
        } else {
            let g = gcd_u128(un, ud);
            (un / g, ud / g)
        };
        match (i128::try_from(un), i128::try_from(ud)) {
            (Ok(a), Ok(b)) => Rational::from_reduced(if negative { -a } else { a }, b),
            _ => Rational::from_parts(BigInt::from(n), BigInt::from(d)),
        }
    }

    fn from_reduced(n: i128, d: i128) -> Rational {
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    /// `n/d` from arbitrary parts; panics when `d == 0`.
    fn from_parts(n: BigInt, d: BigInt) -> Rational {
        assert!(!d.is_zero(), "denominator == 0");
        if let (Some(a), Some(b)) = (n.to_i128(), d.to_i128()) {
            return Rational::from_i128(a, b);
        }
        let g = gcd_big(&n, &d);
        let (n, d) = if g.is_one() { (n, d) } else { (n / &g, d / &g) };
        let (n, d) = if d.is_negative() { (-n, -d) } else { (n, d) };
        Rational::from_big(BigRational::new_raw(n, d))
    }

    fn parts(&self) -> (BigInt, BigInt) {
        match &self.0 {
            Repr::Small(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(x) => (x.numer().clone(), x.denom().clone()),
        }
    }

    fn from_big(x: BigRational) -> Rational {
        match (x.numer().to_i64(), x.denom().to_i64()) {
            (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(x)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(x) => x.clone(),
        }
    }

    pub fn new(n: BigInt, d: BigInt) -> Rational {
        Rational::from_parts(n, d)
    }

    pub fn from_integer(n: BigInt) -> Rational {
        Rational::from_big(BigRational::from_integer(n))
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(x) => x.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(x) => x.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(x) => x.is_integer(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n > 0,
            Repr::Big(x) => x.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(x) => x.is_negative(),
        }
    }

    pub fn abs(&self) -> Rational {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// `1/x`; panics on zero.
    pub fn recip(&self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => Rational::from_i128(*d as i128, *n as i128),
            Repr::Big(x) => Rational::from_big(x.recip()),
        }
    }

    pub fn floor(&self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => Rational(Repr::Small(n.div_euclid(*d), 1)),
            Repr::Big(x) => Rational::from_big(x.floor()),
        }
    }

    pub fn ceil(&self) -> Rational {
        -(-self).floor()
    }

    /// Integer part, rounding toward zero.
    pub fn to_integer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, d) => BigInt::from(n / d),
            Repr::Big(x) => x.to_integer(),
        }
    }

    pub fn pow(&self, e: i32) -> Rational {
        let base = if e < 0 { self.recip() } else { self.clone() };
        (0..e.unsigned_abs()).fold(Rational::one(), |acc, _| acc * &base)
    }

    pub fn to_f64(&self) -> Option<f64> {
        match &self.0 {
            Repr::Small(n, d) => Some(*n as f64 / *d as f64),
            Repr::Big(x) => x.to_f64(),
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational(Repr::Small(0, 1))
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational(Repr::Small(n, 1))
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(x: BigRational) -> Self {
        Rational::from_big(x)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => {
                let ((a, b), (c, d)) = (self.parts(), other.parts());
                (a * d).cmp(&(c * b))
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(x) => write!(f, "{x}"),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) if *n != i64::MIN => Rational(Repr::Small(-n, *d)),
            _ => Rational::from_big(-self.to_big()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

fn big_add(x: &Rational, y: &Rational, subtract: bool) -> Rational {
    let ((a, b), (c, d)) = (x.parts(), y.parts());
    let c = if subtract { -c } else { c };
    if b == d {
        return Rational::from_parts(a + c, b);
    }
    let g = gcd_big(&b, &d);
    if g.is_one() {
        return Rational::from_parts(a * &d + c * &b, b * d);
    }
    let (b1, d1) = (&b / &g, &d / &g);
    let t = a * &d1 + c * &b1;
    if t.is_zero() {
        return Rational::zero();
    }
    let g2 = gcd_big(&(&t % &g), &g);
    if g2.is_one() {
        Rational::from_big(BigRational::new_raw(t, b1 * d))
    } else {
        Rational::from_big(BigRational::new_raw(t / &g2, b1 * (d / g2)))
    }
}

/// gcd of two values whose magnitudes fit in `u64`.
fn gcd_small(x: i128, y: i128) -> u64 {
    gcd_u64(x.unsigned_abs() as u64, y.unsigned_abs() as u64)
}

// Operands here fit in 64 bits (up to sign), so every division is done in
// u64 where the hardware handles it; only products are widened.
fn div_small(x: i128, g: u64) -> i128 {
    let q = (x.unsigned_abs() as u64 / g) as i128;
    if x < 0 {
        -q
    } else {
        q
    }
}

/// `a/b + c/d` for inline operands, reducing through `gcd(b, d)` first so
/// the final reduction only needs a gcd against that small factor.
fn small_add(a: i128, b: i128, c: i128, d: i128) -> Option<Rational> {
    let g = gcd_small(b, d);
    if g == 1 {
        let n = (a * d).checked_add(c * b)?;
        return Some(Rational::from_reduced(n, b * d));
    }
    let (b1, d1) = (div_small(b, g), div_small(d, g));
    let t = (a * d1).checked_add(c * b1)?;
    if t == 0 {
        return Some(Rational::zero());
    }
    let rem = match u64::try_from(t.unsigned_abs()) {
        Ok(u) => u % g,
        Err(_) => (t.unsigned_abs() % g as u128) as u64,
    };
    let g2 = gcd_u64(rem, g);
    let n = if g2 == 1 {
        t
    } else if let Ok(t) = i64::try_from(t) {
        (t / g2 as i64) as i128
    } else {
        t / g2 as i128
    };
    Some(Rational::from_reduced(n, b1 * div_small(d, g2)))
}

/// `(a/b)(c/d)` for reduced inline operands with `b, d > 0`.
fn small_mul(a: i128, b: i128, c: i128, d: i128) -> Rational {
    if a == 0 || c == 0 {
        return Rational::zero();
    }
    let (g1, g2) = (gcd_small(a, d), gcd_small(c, b));
    Rational::from_reduced(div_small(a, g1) * div_small(c, g2), div_small(b, g2) * div_small(d, g1))
}

fn add(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            small_add(*a as i128, *b as i128, *c as i128, *d as i128).unwrap_or_else(|| big_add(x, y, false))
        }
        _ => big_add(x, y, false),
    }
}

fn sub(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            small_add(*a as i128, *b as i128, -(*c as i128), *d as i128).unwrap_or_else(|| big_add(x, y, true))
        }
        _ => big_add(x, y, true),
    }
}

fn mul(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => small_mul(*a as i128, *b as i128, *c as i128, *d as i128),
        _ => {
            let ((a, b), (c, d)) = (x.parts(), y.parts());
            Rational::from_parts(a * c, b * d)
        }
    }
}

fn div(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            assert!(*c != 0, "division by zero");
            let (c, d) = if *c < 0 { (-(*d as i128), -(*c as i128)) } else { (*d as i128, *c as i128) };
            small_mul(*a as i128, *b as i128, c, d)
        }
        _ => {
            let ((a, b), (c, d)) = (x.parts(), y.parts());
            Rational::from_parts(a * d, b * c)
        }
    }
}

macro_rules! binary_op {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign_method:ident, $f:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $f(self, rhs)
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $f(self, &rhs)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $f(&self, rhs)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $f(&self, &rhs)
            }
        }
        impl $assign_tr<&Rational> for Rational {
            fn $assign_method(&mut self, rhs: &Rational) {
                *self = $f(self, rhs);
            }
        }
        impl $assign_tr<Rational> for Rational {
            fn $assign_method(&mut self, rhs: Rational) {
                *self = $f(self, &rhs);
            }
        }
    };
}

binary_op!(Add, add, AddAssign, add_assign, add);
binary_op!(Sub, sub, SubAssign, sub_assign, sub);
binary_op!(Mul, mul, MulAssign, mul_assign, mul);
binary_op!(Div, div, DivAssign, div_assign, div);

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}
