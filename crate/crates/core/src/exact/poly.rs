use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::exact::GaussianRational as Q;
use crate::Complex;

/// Polynomial in `s` over the Gaussian rationals, coefficients lowest degree
/// first. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Q::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// `s`
    pub fn s() -> Self {
        Self::new(vec![Q::zero(), Q::one()])
    }

    /// `s - r`
    pub fn linear(r: &Q) -> Self {
        Self::new(vec![-r, Q::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Q::from_int(x)).collect())
    }

    pub fn from_roots(roots: &[Q]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| &acc * &Self::linear(r))
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Divide by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading().inv() {
            Some(li) if !self.is_zero() => self.scale(&li),
            _ => Self::zero(),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// Quotient and remainder. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.leading().inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * dc);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Exact quotient when `d` divides `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = x.div_rem(&y).1;
            x = y;
            y = r;
        }
        x.monic()
    }

    pub fn lcm(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let g = Poly::gcd(a, b);
        (&a.div_exact(&g).expect("gcd divides") * b).monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Q::from_int(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_complex(&self, x: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, c| acc * x + c.to_complex())
    }

    /// `p(-s)`
    pub fn reflect(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn pow(&self, e: usize) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }

    pub fn to_complex_coeffs(&self) -> Vec<Complex> {
        self.coeffs.iter().map(Q::to_complex).collect()
    }

    fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// True when rendering needs no parentheses as a factor.
    pub(crate) fn is_atomic(&self) -> bool {
        match self.term_count() {
            0 => true,
            1 => {
                let c = self.leading();
                if self.degree() == Some(0) {
                    c.is_real() && c.re.is_integer()
                } else {
                    c.is_integer()
                }
            }
            _ => false,
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

fn power(k: usize) -> String {
    match k {
        0 => String::new(),
        1 => "s".into(),
        _ => format!("s^{k}"),
    }
}

/// Highest degree first, e.g. `s^2+3s+2`, `(1/2)s-1`, `(1+2i)s^2+(i)`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let first = out.is_empty();
            if c.is_real() {
                let neg = num_traits::Signed::is_negative(&c.re);
                let mag = num_traits::Signed::abs(&c.re);
                if neg {
                    out.push('-');
                } else if !first {
                    out.push('+');
                }
                let mag_s = crate::exact::gaussian::fmt_rational(&mag);
                if k == 0 {
                    out.push_str(&mag_s);
                } else if num_traits::One::is_one(&mag) {
                    out.push_str(&power(k));
                } else if mag.is_integer() {
                    out.push_str(&mag_s);
                    out.push_str(&power(k));
                } else {
                    out.push_str(&format!("({mag_s}){}", power(k)));
                }
            } else {
                if !first {
                    out.push('+');
                }
                if k == 0 && num_traits::Zero::is_zero(&c.re) && first {
                    out.push_str(&c.to_string());
                } else {
                    out.push_str(&format!("({c}){}", power(k)));
                }
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(Poly::gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(Poly::gcd(&p(&[0, 1]), &p(&[-1, 1])), Poly::one());
        assert_eq!(Poly::gcd(&p(&[2, -3, 1]), &p(&[-1, 0, 1])), p(&[-1, 1]));
        assert_eq!(
            Poly::gcd(&p(&[2, 4]), &Poly::zero()),
            p(&[1, 2]).scale(&Q::from_ratio(1, 2)).monic()
        );
    }

    #[test]
    fn rendering() {
        assert_eq!(p(&[2, 3, 1]).to_string(), "s^2+3s+2");
        assert_eq!(p(&[-1, 1]).to_string(), "s-1");
        assert_eq!(p(&[0, -1]).to_string(), "-s");
        assert_eq!(
            Poly::new(vec![Q::from_int(-1), Q::from_ratio(1, 2)]).to_string(),
            "(1/2)s-1"
        );
        assert_eq!(Poly::new(vec![Q::from_ratio(1, 2), Q::one()]).to_string(), "s+1/2");
        assert_eq!(
            Poly::new(vec![Q::i(), Q::zero(), Q::from_parts(1, 1, 2, 1)]).to_string(),
            "(1+2i)s^2+(i)"
        );
        assert_eq!(Poly::constant(Q::i()).to_string(), "i");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn reflect_and_derivative() {
        assert_eq!(p(&[1, 2, 3]).reflect(), p(&[1, -2, 3]));
        assert_eq!(p(&[1, 2, 3]).derivative(), p(&[2, 6]));
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(-5i64..=5, 0..5).prop_map(|c| Poly::from_ints(&c))
    }

    proptest! {
        #[test]
        fn division_identity(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree().map_or(true, |d| d < b.degree().unwrap()));
        }

        #[test]
        fn gcd_divides_both(a in small_poly(), b in small_poly()) {
            let g = Poly::gcd(&a, &b);
            if !g.is_zero() {
                prop_assert!(g.divides(&a));
                prop_assert!(g.divides(&b));
                prop_assert!(g.is_monic());
            }
        }
    }
}
