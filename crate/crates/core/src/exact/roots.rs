//! Roots of exact polynomials: square-free split, exact linear factors recovered
//! by rationalizing numeric roots, numeric roots for what remains.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::Result;
use crate::exact::{GaussianRational as Q, Poly};
use crate::numeric::{eigenvalues, CMatrix};
use crate::Complex;

const MAX_DENOMINATOR: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Roots {
    /// Exact roots with multiplicity.
    pub exact: Vec<(Q, usize)>,
    /// Roots of irreducible residual factors, computed in floating point.
    pub numeric: Vec<(Complex, usize)>,
}

impl Roots {
    pub fn is_exact(&self) -> bool {
        self.numeric.is_empty()
    }

    /// All roots as floats, repeated by multiplicity.
    pub fn multiset(&self) -> Vec<Complex> {
        let mut out = Vec::new();
        for (r, k) in &self.exact {
            out.extend(std::iter::repeat_n(r.to_complex(), *k));
        }
        for (r, k) in &self.numeric {
            out.extend(std::iter::repeat_n(*r, *k));
        }
        out
    }

    pub fn count(&self) -> usize {
        self.exact.iter().map(|(_, k)| k).sum::<usize>() + self.numeric.iter().map(|(_, k)| k).sum::<usize>()
    }
}

/// Yun's algorithm: `p = c · Π f_i^i` with square-free, pairwise coprime monic `f_i`.
pub fn square_free(p: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let p = p.monic();
    let dp = p.derivative();
    let a0 = Poly::gcd(&p, &dp);
    let mut b = p.div_exact(&a0).expect("gcd divides");
    let mut c = dp.div_exact(&a0).expect("gcd divides derivative");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = Poly::gcd(&b, &d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).expect("gcd divides");
        c = d.div_exact(&a).expect("gcd divides");
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

/// Best rational approximation with bounded denominator, via continued fractions.
fn rationalize(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > MAX_DENOMINATOR as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if (x - h1 as f64 / k1 as f64).abs() <= 1e-12 * x.abs().max(1.0) || frac.abs() < 1e-14 {
            break;
        }
        r = 1.0 / frac;
    }
    (k1 != 0).then(|| BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

/// Numeric roots of a polynomial via eigenvalues of its companion matrix.
pub fn numeric_roots(p: &Poly) -> Result<Vec<Complex>> {
    let Some(n) = p.degree() else {
        return Ok(Vec::new());
    };
    if n == 0 {
        return Ok(Vec::new());
    }
    let c = p.monic().to_complex_coeffs();
    let comp = CMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            -c[n - 1 - j]
        } else if j + 1 == i {
            Complex::new(1.0, 0.0)
        } else {
            Complex::new(0.0, 0.0)
        }
    });
    eigenvalues(&comp)
}

/// Roots of a nonzero polynomial with multiplicity.
pub fn roots(p: &Poly) -> Result<Roots> {
    let mut exact: Vec<(Q, usize)> = Vec::new();
    let mut numeric = Vec::new();
    for (f, mult) in square_free(p) {
        let mut rest = f;
        for z in numeric_roots(&rest.clone())? {
            if rest.degree().unwrap_or(0) == 0 {
                break;
            }
            let (Some(re), Some(im)) = (rationalize(z.re), rationalize(z.im)) else {
                continue;
            };
            let cand = Q::new(re, im);
            if rest.eval(&cand).is_zero() {
                rest = rest.div_exact(&Poly::linear(&cand)).expect("root divides");
                exact.push((cand, mult));
            }
        }
        for z in numeric_roots(&rest)? {
            numeric.push((z, mult));
        }
    }
    exact.sort_by(|a, b| a.0.re.cmp(&b.0.re).then(a.0.im.cmp(&b.0.im)));
    numeric.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    Ok(Roots { exact, numeric })
}
