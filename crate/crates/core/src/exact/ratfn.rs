use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::exact::{GaussianRational as Q, Poly};
use crate::Complex;

/// Reduced rational function `num/den` with monic `den`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    /// Reduce `num/den`. Panics if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = Poly::gcd(&num, &den);
        let num = num.div_exact(&g).expect("gcd divides numerator");
        let den = den.div_exact(&g).expect("gcd divides denominator");
        let lead = den.leading().inv().expect("nonzero denominator");
        Self {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::new(self.den.clone(), self.num.clone()))
    }

    /// `f(-s)`
    pub fn reflect(&self) -> Self {
        Self::new(self.num.reflect(), self.den.reflect())
    }

    /// Exact evaluation; `None` at a pole.
    pub fn eval(&self, x: &Q) -> Option<Q> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| &self.num.eval(x) / &d)
    }

    pub fn eval_complex(&self, x: Complex) -> Complex {
        self.num.eval_complex(x) / self.den.eval_complex(x)
    }
}

impl Add for &RationalFn {
    type Output = RationalFn;
    fn add(self, o: &RationalFn) -> RationalFn {
        RationalFn::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub for &RationalFn {
    type Output = RationalFn;
    fn sub(self, o: &RationalFn) -> RationalFn {
        self + &(-o)
    }
}

impl Mul for &RationalFn {
    type Output = RationalFn;
    fn mul(self, o: &RationalFn) -> RationalFn {
        RationalFn::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &RationalFn {
    type Output = RationalFn;
    fn div(self, o: &RationalFn) -> RationalFn {
        self * &o.inv().expect("division by the zero rational function")
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

/// `(s^2+3s+2)/(s-1)`; plain polynomial when the denominator is 1.
impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| {
            if p.is_atomic() {
                p.to_string()
            } else {
                format!("({p})")
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFn({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn reduces_and_normalizes() {
        // (2s^2 - 2) / (2s - 2) = s + 1
        let r = RationalFn::new(p(&[-2, 0, 2]), p(&[-2, 2]));
        assert_eq!(r, RationalFn::from_poly(p(&[1, 1])));
        let r = RationalFn::new(p(&[1]), p(&[-2, 2]));
        assert!(r.den().is_monic());
        assert_eq!(r.to_string(), "(1/2)/(s-1)");
    }

    #[test]
    fn rendering() {
        let r = RationalFn::new(p(&[2, 3, 1]), p(&[-1, 1]));
        assert_eq!(r.to_string(), "(s^2+3s+2)/(s-1)");
        assert_eq!(RationalFn::new(p(&[0, 1]), p(&[-1, 1])).to_string(), "s/(s-1)");
        assert_eq!(RationalFn::new(p(&[1]), p(&[-1, 1])).to_string(), "1/(s-1)");
    }

    #[test]
    fn arithmetic() {
        let a = RationalFn::new(p(&[2, 1]), p(&[4, 1]));
        let b = RationalFn::new(p(&[-4, 1]), p(&[-2, 1]));
        // duality pair: a(s) b(-s) = 1
        assert!((&a * &b.reflect()).is_one());
        assert!((&(&a - &a)).is_zero());
        assert_eq!(&(&a / &a), &RationalFn::one());
        assert_eq!(a.eval(&Q::from_int(-4)), None);
        assert_eq!(a.eval(&Q::zero()), Some(Q::from_ratio(1, 2)));
    }
}
