//! Exact coefficient fields.
//!
//! Everything above this module is generic over [`Field`]. Two instances ship
//! with the crate: [`BigRational`] (the rationals) and [`GaussianRational`]
//! (the rationals adjoined `i`), which additionally implements
//! [`ComplexField`] and is the scalar every star product runs over.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Prime used for modular coprimality certificates. `p = 119 * 2^23 + 1`,
/// so `p = 1 mod 4` and `-1` has a square root.
pub const CERT_PRIME: u64 = 998_244_353;

/// A reduction target `Z[i] -> Z/p`, sending `i` to a fixed square root of -1.
#[derive(Clone, Copy, Debug)]
pub struct Modulus {
    pub prime: u64,
    pub sqrt_minus_one: u64,
}

impl Modulus {
    pub fn cert() -> Self {
        // 3 is a primitive root mod CERT_PRIME.
        let s = pow_mod(3, (CERT_PRIME - 1) / 4, CERT_PRIME);
        debug_assert_eq!(s * s % CERT_PRIME, CERT_PRIME - 1);
        Modulus {
            prime: CERT_PRIME,
            sqrt_minus_one: s,
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.prime
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.prime - b) % self.prime
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.prime
    }

    pub fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.prime - 2, self.prime)
    }

    fn reduce_int(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.prime);
        n.mod_floor(&p).to_u64().expect("residue fits in u64")
    }

    /// Image of a rational number; `None` when the denominator vanishes mod p.
    pub fn reduce_rational(&self, q: &BigRational) -> Option<u64> {
        let den = self.reduce_int(q.denom());
        if den == 0 {
            return None;
        }
        Some(self.mul(self.reduce_int(q.numer()), self.inv(den)))
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// An exact field of characteristic zero.
///
/// Arithmetic is by value with borrowed right-hand sides, which keeps the
/// polynomial kernels free of gratuitous clones.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    fn from_i64(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn inv(&self) -> Self {
        Self::one() / self
    }

    /// Image under reduction mod `m`, if the element is integral there.
    fn reduce(&self, m: &Modulus) -> Option<u64>;

    /// Whether printing should pull a minus sign out of this coefficient.
    fn is_negative(&self) -> bool;

    /// Writes the coefficient as a multiplicative factor in expression syntax
    /// (parenthesised whenever it is not a bare integer or `i`-multiple).
    fn write_factor(&self, out: &mut String);
}

/// A field containing a square root of -1.
pub trait ComplexField: Field {
    fn imag_unit() -> Self;
}

impl Field for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn reduce(&self, m: &Modulus) -> Option<u64> {
        m.reduce_rational(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn write_factor(&self, out: &mut String) {
        write_rational(self, out);
    }
}

fn write_rational(q: &BigRational, out: &mut String) {
    if q.is_integer() {
        out.push_str(&q.numer().to_string());
    } else {
        out.push('(');
        out.push_str(&q.numer().to_string());
        out.push('/');
        out.push_str(&q.denom().to_string());
        out.push(')');
    }
}

/// `re + im*i` with exact rational parts. `BigRational` keeps both parts
/// reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// A square root inside Q(i), if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        // (a + bi)^2 = re + im i  =>  a^2 = (re + |z|)/2, b^2 = (|z| - re)/2.
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let a = rational_sqrt(&((&self.re + &modulus) / &two))?;
        let b = rational_sqrt(&((&modulus - &self.re) / &two))?;
        [(a.clone(), b.clone()), (a, -b)]
            .into_iter()
            .map(|(a, b)| GaussianRational::new(a, b))
            .find(|c| &(c.clone() * c) == self)
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if Signed::is_negative(q) {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Literal form `a`, `b*i` or `a+b*i`, with `a`, `b` written `n` or `n/d`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}*i", self.im),
            (false, false) => {
                if Signed::is_negative(&self.im) {
                    write!(f, "{}-{}*i", self.re, -self.im.clone())
                } else {
                    write!(f, "{}+{}*i", self.re, self.im)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed Gaussian-rational literal `{0}`")]
pub struct ParseLiteralError(pub String);

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

impl FromStr for GaussianRational {
    type Err = ParseLiteralError;

    /// Accepts `a`, `b*i`, `i`, `-i`, `a+b*i`, `a-b*i`, `a+i`, `a-i`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || ParseLiteralError(text.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err());
        }
        let Some(body) = s.strip_suffix('i') else {
            return parse_rational(&s).map(Self::real).ok_or_else(err);
        };
        // Split off the real part at the last sign that is not leading.
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .last();
        let (re_text, im_text) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let re = if re_text.is_empty() {
            BigRational::zero()
        } else {
            parse_rational(re_text).ok_or_else(err)?
        };
        let im_text = im_text.strip_suffix('*').unwrap_or(im_text);
        let im = match im_text {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t if t.ends_with('*') => return Err(err()),
            t => parse_rational(t.strip_prefix('+').unwrap_or(t)).ok_or_else(err)?,
        };
        Ok(GaussianRational::new(re, im))
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(BigRational::one())
    }

    fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl<'a> Add<&'a GaussianRational> for GaussianRational {
    type Output = Self;
    fn add(mut self, rhs: &'a Self) -> Self {
        self += rhs;
        self
    }
}

impl<'a> Sub<&'a GaussianRational> for GaussianRational {
    type Output = Self;
    fn sub(mut self, rhs: &'a Self) -> Self {
        self -= rhs;
        self
    }
}

impl<'a> Mul<&'a GaussianRational> for GaussianRational {
    type Output = Self;
    fn mul(mut self, rhs: &'a Self) -> Self {
        self *= rhs;
        self
    }
}

impl<'a> Div<&'a GaussianRational> for GaussianRational {
    type Output = Self;
    fn div(self, rhs: &'a Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero in Q(i)");
        if rhs.im.is_zero() {
            return GaussianRational::new(self.re / &rhs.re, self.im / &rhs.re);
        }
        let n = rhs.norm_sqr();
        let prod = self * &rhs.conj();
        GaussianRational::new(prod.re / &n, prod.im / &n)
    }
}

macro_rules! by_value {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for GaussianRational {
            type Output = Self;
            fn $m(self, rhs: Self) -> Self {
                <Self as $tr<&Self>>::$m(self, &rhs)
            }
        }
    )*};
}
by_value!(Add add, Sub sub, Mul mul, Div div);

impl<'a> AddAssign<&'a GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &'a Self) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a> SubAssign<&'a GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &'a Self) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl<'a> MulAssign<&'a GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &'a Self) {
        if rhs.im.is_zero() {
            self.re *= &rhs.re;
            self.im *= &rhs.re;
        } else if self.im.is_zero() {
            self.im = &self.re * &rhs.im;
            self.re *= &rhs.re;
        } else {
            let re = &self.re * &rhs.re - &self.im * &rhs.im;
            let im = &self.re * &rhs.im + &self.im * &rhs.re;
            self.re = re;
            self.im = im;
        }
    }
}

impl Field for GaussianRational {
    fn from_i64(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn reduce(&self, m: &Modulus) -> Option<u64> {
        let re = m.reduce_rational(&self.re)?;
        let im = m.reduce_rational(&self.im)?;
        Some(m.add(re, m.mul(im, m.sqrt_minus_one)))
    }

    fn is_negative(&self) -> bool {
        if self.re.is_zero() {
            Signed::is_negative(&self.im)
        } else {
            Signed::is_negative(&self.re)
        }
    }

    fn write_factor(&self, out: &mut String) {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write_rational(&self.re, out),
            (true, false) => {
                if !self.im.is_one() {
                    write_rational(&self.im, out);
                    out.push('*');
                }
                out.push('i');
            }
            (false, false) => {
                out.push('(');
                write_rational(&self.re, out);
                let im = if Signed::is_negative(&self.im) {
                    out.push_str(" - ");
                    -self.im.clone()
                } else {
                    out.push_str(" + ");
                    self.im.clone()
                };
                if !im.is_one() {
                    write_rational(&im, out);
                    out.push('*');
                }
                out.push_str("i)");
            }
        }
    }
}

impl ComplexField for GaussianRational {
    fn imag_unit() -> Self {
        Self::i()
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        <Self as Field>::from_i64(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(q: BigRational) -> Self {
        Self::real(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn g(a: (i64, i64), b: (i64, i64)) -> GaussianRational {
        GaussianRational::new(q(a.0, a.1), q(b.0, b.1))
    }

    #[test]
    fn components_are_reduced() {
        let z = g((2, 4), (-3, -6));
        assert_eq!(z.re.numer(), &BigInt::from(1));
        assert_eq!(z.re.denom(), &BigInt::from(2));
        assert!(Signed::is_positive(z.im.denom()));
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(i.clone() * &i, -GaussianRational::one());
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = g((3, 2), (-1, 5));
        let b = g((1, 1), (7, 3));
        assert_eq!((a.clone() * &b) / &b, a);
        assert_eq!(b.inv() * &b, GaussianRational::one());
    }

    #[test]
    fn literal_round_trip() {
        for text in ["0", "-4/7", "1/2*i", "3+2*i", "-1/2-5/3*i", "i", "-i"] {
            let z: GaussianRational = text.parse().unwrap();
            let back: GaussianRational = z.to_string().parse().unwrap();
            assert_eq!(z, back, "{text}");
        }
        assert_eq!("2-i".parse::<GaussianRational>().unwrap(), g((2, 1), (-1, 1)));
        assert!("1/0".parse::<GaussianRational>().is_err());
        assert!("x".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn factor_rendering() {
        let mut s = String::new();
        g((1, 2), (0, 1)).write_factor(&mut s);
        assert_eq!(s, "(1/2)");
        s.clear();
        g((0, 1), (2, 1)).write_factor(&mut s);
        assert_eq!(s, "2*i");
        s.clear();
        g((1, 1), (-1, 3)).write_factor(&mut s);
        assert_eq!(s, "(1 - (1/3)*i)");
    }

    #[test]
    fn square_roots() {
        let minus_one = -GaussianRational::one();
        let r = minus_one.sqrt().unwrap();
        assert_eq!(r.clone() * &r, minus_one);
        let two_i = g((0, 1), (2, 1));
        assert_eq!(two_i.sqrt().unwrap(), g((1, 1), (1, 1)));
        assert!(GaussianRational::from(2).sqrt().is_none());
    }

    #[test]
    fn modular_images_respect_arithmetic() {
        let m = Modulus::cert();
        let a = g((3, 2), (-1, 5));
        let b = g((1, 1), (7, 3));
        let (ra, rb) = (a.reduce(&m).unwrap(), b.reduce(&m).unwrap());
        assert_eq!((a.clone() * &b).reduce(&m).unwrap(), m.mul(ra, rb));
        assert_eq!((a + &b).reduce(&m).unwrap(), m.add(ra, rb));
    }
}
