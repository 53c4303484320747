use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Complex;

/// `re + i·im` with arbitrary-precision rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::new(BigRational::new(BigInt::from(p), BigInt::from(q)), BigRational::zero())
    }

    /// `(p1/q1) + i(p2/q2)`.
    pub fn from_parts(p1: i64, q1: i64, p2: i64, q2: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(p1), BigInt::from(q1)),
            BigRational::new(BigInt::from(p2), BigInt::from(q2)),
        )
    }

    pub fn real(r: BigRational) -> Self {
        Self::new(r, BigRational::zero())
    }

    /// Exact binary value of a finite float pair.
    pub fn from_complex(z: Complex) -> Result<Self> {
        let re = BigRational::from_float(z.re).ok_or_else(|| Error::Parameter(format!("non-finite value {}", z.re)))?;
        let im = BigRational::from_float(z.im).ok_or_else(|| Error::Parameter(format!("non-finite value {}", z.im)))?;
        Ok(Self::new(re, im))
    }

    pub fn to_complex(&self) -> Complex {
        Complex::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.im.is_zero() && self.re.is_integer()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    /// `i·self`.
    pub fn mul_i(&self) -> Self {
        Self::new(-self.im.clone(), self.re.clone())
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Div for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &GaussianRational) -> GaussianRational {
        self * &o.inv().expect("division by zero Gaussian rational")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: GaussianRational) -> GaussianRational {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Parameter(format!("cannot parse exact number {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parameter(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.chars().any(|c| !c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.trim_start().starts_with('-');
        let ip_digits = ip.trim_start_matches(['-', '+']);
        let whole = if ip_digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(ip_digits).map_err(|_| bad())?
        };
        let frac = if fp.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(fp).map_err(|_| bad())?
        };
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let mag = BigRational::new(whole * &scale + frac, scale);
        return Ok(if neg { -mag } else { mag });
    }
    Ok(BigRational::from_integer(BigInt::from_str(t).map_err(|_| bad())?))
}

impl GaussianRational {
    /// Parse a real part and an imaginary part given as `"p/q"`, integer or
    /// terminating-decimal strings.
    pub fn parse_pair(re: &str, im: &str) -> Result<Self> {
        Ok(Self::new(parse_rational(re)?, parse_rational(im)?))
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&fmt_rational(&self.re));
        }
        let mut out = String::new();
        if !self.re.is_zero() {
            out.push_str(&fmt_rational(&self.re));
        }
        let neg = self.im.is_negative();
        let mag = self.im.abs();
        if neg {
            out.push('-');
        } else if !self.re.is_zero() {
            out.push('+');
        }
        if mag.is_one() {
            out.push('i');
        } else if mag.is_integer() {
            out.push_str(&format!("{}i", mag.numer()));
        } else {
            out.push_str(&format!("({})i", fmt_rational(&mag)));
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
