//! Exact scalars: rationals and Gaussian rationals, with the string format
//! used by problem files (`"p/q"` and `"a/b+c/d i"`).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Parses `"p"`, `"p/q"`, allowing surrounding whitespace.
pub fn parse_q(s: &str) -> Result<Q, ParseScalarError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseScalarError(s.to_string()));
    }
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| ParseScalarError(s.to_string()))?;
    let d: BigInt = d.parse().map_err(|_| ParseScalarError(s.to_string()))?;
    if d.is_zero() {
        return Err(ParseScalarError(s.to_string()));
    }
    Ok(Q::new(n, d))
}

pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Rounds `x` to the nearest multiple of `2^-bits` (ties toward +∞).
pub fn round_dyadic(x: &Q, bits: u32) -> Q {
    let scale = BigInt::one() << bits;
    let scaled = x * Q::from_integer(scale.clone());
    let half = qf(1, 2);
    let r = (scaled + half).floor();
    r / Q::from_integer(scale)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed exact scalar `{0}`")]
pub struct ParseScalarError(pub String);

/// Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gq {
    pub re: Q,
    pub im: Q,
}

impl Gq {
    pub fn new(re: Q, im: Q) -> Self {
        Gq { re, im }
    }

    pub fn real(re: Q) -> Self {
        Gq { re, im: Q::zero() }
    }

    pub fn int(n: i64) -> Self {
        Gq::real(q(n))
    }

    pub fn i() -> Self {
        Gq::new(Q::zero(), Q::one())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Gq {
        Gq::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, exact.
    pub fn norm_sqr(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Gq> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(Gq::new(&self.re / &n, -&self.im / &n))
    }

    pub fn scale(&self, s: &Q) -> Gq {
        Gq::new(&self.re * s, &self.im * s)
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }

    pub fn from_c64_dyadic(z: num_complex::Complex64, bits: u32) -> Option<Gq> {
        let re = Q::from_float(z.re)?;
        let im = Q::from_float(z.im)?;
        Some(Gq::new(round_dyadic(&re, bits), round_dyadic(&im, bits)))
    }

    pub fn round_dyadic(&self, bits: u32) -> Gq {
        Gq::new(round_dyadic(&self.re, bits), round_dyadic(&self.im, bits))
    }
}

impl From<Q> for Gq {
    fn from(x: Q) -> Self {
        Gq::real(x)
    }
}

impl fmt::Display for Gq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", format_q(&self.re));
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{} i", format_q(&self.re), sign, format_q(&self.im.abs()))
    }
}

impl fmt::Debug for Gq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Gq {
    type Err = ParseScalarError;

    /// Accepts `"a"`, `"a/b"`, `"a/b+c/d i"`, `"a-c i"`, `"c/d i"`, `"i"`, `"-i"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        let Some(body) = t.strip_suffix('i') else {
            return parse_q(&t).map(Gq::real).map_err(|_| err());
        };
        // Split at the last sign that is not the leading character.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        let (re_part, im_part) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im_part {
            "" | "+" => Q::one(),
            "-" => -Q::one(),
            other => parse_q(other.strip_prefix('+').unwrap_or(other)).map_err(|_| err())?,
        };
        let re = parse_q(re_part).map_err(|_| err())?;
        Ok(Gq::new(re, im))
    }
}

impl Add for Gq {
    type Output = Gq;
    fn add(self, o: Gq) -> Gq {
        Gq::new(self.re + o.re, self.im + o.im)
    }
}

impl<'a> Add<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn add(self, o: &Gq) -> Gq {
        Gq::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl AddAssign<&Gq> for Gq {
    fn add_assign(&mut self, o: &Gq) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl AddAssign for Gq {
    fn add_assign(&mut self, o: Gq) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl Sub for Gq {
    type Output = Gq;
    fn sub(self, o: Gq) -> Gq {
        Gq::new(self.re - o.re, self.im - o.im)
    }
}

impl<'a> Sub<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn sub(self, o: &Gq) -> Gq {
        Gq::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl SubAssign<&Gq> for Gq {
    fn sub_assign(&mut self, o: &Gq) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl Mul for Gq {
    type Output = Gq;
    fn mul(self, o: Gq) -> Gq {
        &self * &o
    }
}

impl<'a> Mul<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn mul(self, o: &Gq) -> Gq {
        Gq::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        Gq::new(-self.re, -self.im)
    }
}

impl std::iter::Sum for Gq {
    fn sum<I: Iterator<Item = Gq>>(iter: I) -> Gq {
        iter.fold(Gq::zero(), |a, b| a + b)
    }
}

impl Zero for Gq {
    fn zero() -> Self {
        Gq::new(Q::zero(), Q::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Gq {
    fn one() -> Self {
        Gq::new(Q::one(), Q::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_gaussians() {
        assert_eq!(parse_q("-3/6").unwrap(), qf(-1, 2));
        assert_eq!(parse_q(" 7 ").unwrap(), q(7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());

        let z: Gq = "1/2+3/4 i".parse().unwrap();
        assert_eq!(z, Gq::new(qf(1, 2), qf(3, 4)));
        let z: Gq = "-1/2-3 i".parse().unwrap();
        assert_eq!(z, Gq::new(qf(-1, 2), q(-3)));
        let z: Gq = "-i".parse().unwrap();
        assert_eq!(z, Gq::new(q(0), q(-1)));
        let z: Gq = "5/3i".parse().unwrap();
        assert_eq!(z, Gq::new(q(0), qf(5, 3)));
        let z: Gq = "-4".parse().unwrap();
        assert_eq!(z, Gq::int(-4));
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "-3", "1/2", "1/2+3/4 i", "-2-1/3 i", "0+1 i"] {
            let z: Gq = s.parse().unwrap();
            let back: Gq = z.to_string().parse().unwrap();
            assert_eq!(z, back, "{s}");
        }
    }

    #[test]
    fn gaussian_field_ops() {
        let a = Gq::new(q(1), q(2));
        let b = Gq::new(q(3), q(-1));
        assert_eq!(&a * &b, Gq::new(q(5), q(5)));
        let inv = a.inv().unwrap();
        assert_eq!(&a * &inv, Gq::int(1));
        assert!(Gq::zero().inv().is_none());
    }

    #[test]
    fn dyadic_rounding() {
        assert_eq!(round_dyadic(&qf(1, 3), 2), qf(1, 4));
        assert_eq!(round_dyadic(&qf(-1, 3), 2), qf(-1, 4));
    }
}
