use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{GaussianRational as Q, Poly, RationalFn};
use crate::numeric::CMatrix;

/// Commutative ring operations needed by the generic exact matrix.
pub trait Ring: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
}

/// Division that is known to be exact (integral-domain quotient).
pub trait ExactDiv: Ring {
    fn div_exact(&self, d: &Self) -> Self;
}

macro_rules! impl_ring {
    ($t:ty) => {
        impl Ring for $t {
            fn zero() -> Self {
                <$t>::zero()
            }
            fn one() -> Self {
                <$t>::one()
            }
            fn is_zero(&self) -> bool {
                <$t>::is_zero(self)
            }
            fn add(&self, o: &Self) -> Self {
                self + o
            }
            fn sub(&self, o: &Self) -> Self {
                self - o
            }
            fn mul(&self, o: &Self) -> Self {
                self * o
            }
            fn neg(&self) -> Self {
                -self
            }
        }
    };
}
impl_ring!(Q);
impl_ring!(Poly);
impl_ring!(RationalFn);

impl ExactDiv for Q {
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
}

impl ExactDiv for Poly {
    fn div_exact(&self, d: &Self) -> Self {
        Poly::div_exact(self, d).expect("inexact polynomial division")
    }
}

impl ExactDiv for RationalFn {
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
}

/// Dense row-major matrix over an exact ring.
#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type QMat = Mat<Q>;
pub type PolyMat = Mat<Poly>;
pub type RationalMatrix = Mat<RationalFn>;

impl<T: Ring> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(d: Vec<T>) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in d.into_iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    fn zip(&self, o: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.shape() != o.shape() {
            return Err(Error::Dimension(format!(
                "shape mismatch {:?} vs {:?}",
                self.shape(),
                o.shape()
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, T::add)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, T::sub)
    }

    pub fn neg(&self) -> Self {
        self.map(T::neg)
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|x| x.mul(k))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn block2x2(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::Dimension("inconsistent 2x2 block shapes".into()));
        }
        let (r, cc) = (a.rows + c.rows, a.cols + b.cols);
        Ok(Self::from_fn(r, cc, |i, j| {
            match (i < a.rows, j < a.cols) {
                (true, true) => a.get(i, j),
                (true, false) => b.get(i, j - a.cols),
                (false, true) => c.get(i - a.rows, j),
                (false, false) => d.get(i - a.rows, j - a.cols),
            }
            .clone()
        }))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<T: ExactDiv> Mat<T> {
    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> Result<T> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut sign_neg = false;
        let mut prev = T::one();
        for k in 0..n {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign_neg = !sign_neg;
                    }
                    None => return Ok(T::zero()),
                }
            }
            let pivot = m.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = pivot
                        .mul(m.get(i, j))
                        .sub(&m.get(i, k).mul(m.get(k, j)))
                        .div_exact(&prev);
                    m.set(i, j, v);
                }
                m.set(i, k, T::zero());
            }
            prev = pivot;
        }
        let d = if n == 0 { T::one() } else { m.get(n - 1, n - 1).clone() };
        Ok(if sign_neg { d.neg() } else { d })
    }
}

/// Gaussian integer, the domain for fraction-free elimination of [`QMat`].
#[derive(Clone, PartialEq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl Ring for GaussInt {
    fn zero() -> Self {
        Self {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }
    fn one() -> Self {
        Self {
            re: BigInt::one(),
            im: BigInt::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Self {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
    fn sub(&self, o: &Self) -> Self {
        Self {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
    fn mul(&self, o: &Self) -> Self {
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn neg(&self) -> Self {
        Self {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl ExactDiv for GaussInt {
    fn div_exact(&self, d: &Self) -> Self {
        let norm = &d.re * &d.re + &d.im * &d.im;
        Self {
            re: (&self.re * &d.re + &self.im * &d.im) / &norm,
            im: (&self.im * &d.re - &self.re * &d.im) / &norm,
        }
    }
}

impl QMat {
    /// Determinant via Bareiss over the Gaussian integers after clearing
    /// denominators row by row.
    pub fn det_fraction_free(&self) -> Result<Q> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let mut scale = BigInt::one();
        let mut ints = Vec::with_capacity(self.data.len());
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let l = row
                .iter()
                .fold(BigInt::one(), |l, q| l.lcm(q.re.denom()).lcm(q.im.denom()));
            for q in row {
                ints.push(GaussInt {
                    re: q.re.numer() * (&l / q.re.denom()),
                    im: q.im.numer() * (&l / q.im.denom()),
                });
            }
            scale *= l;
        }
        let m = Mat {
            rows: self.rows,
            cols: self.cols,
            data: ints,
        };
        let d = m.det()?;
        Ok(Q::new(
            BigRational::new(d.re, scale.clone()),
            BigRational::new(d.im, scale),
        ))
    }
}

impl PolyMat {
    /// Determinant by exact evaluation at `0, 1, …, d` and Newton
    /// interpolation, where `d` bounds the degree by row. Avoids the
    /// polynomial divisions of Bareiss elimination.
    pub fn det_interpolated(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let bound: usize = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .filter_map(|j| self.get(i, j).degree())
                    .max()
                    .unwrap_or(0)
            })
            .sum();
        let xs: Vec<Q> = (0..=bound as i64).map(Q::from_int).collect();
        let mut dd = xs
            .iter()
            .map(|x| self.map(|p| p.eval(x)).det_fraction_free())
            .collect::<Result<Vec<Q>>>()?;
        // divided differences in place: dd[k] becomes f[x_0, …, x_k]
        for k in 1..dd.len() {
            for i in (k..dd.len()).rev() {
                let num = &dd[i] - &dd[i - 1];
                dd[i] = &num / &(&xs[i] - &xs[i - k]);
            }
        }
        let mut out = Poly::zero();
        for k in (0..dd.len()).rev() {
            out = &(&out * &Poly::linear(&xs[k])) + &Poly::constant(dd[k].clone());
        }
        Ok(out)
    }
}

impl QMat {
    /// Exact binary values of the float entries.
    pub fn from_cmatrix(m: &CMatrix) -> Result<Self> {
        let data = m
            .as_slice()
            .iter()
            .map(|&z| Q::from_complex(z))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rows: m.rows(),
            cols: m.cols(),
            data,
        })
    }

    pub fn to_cmatrix(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_complex())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn conj(&self) -> Self {
        self.map(Q::conj)
    }

    /// `J_r X† J_k`.
    pub fn flat(&self) -> Result<Self> {
        let (k, r) = even_halves(self)?;
        let xa = self.adjoint();
        Ok(Self::from_fn(2 * r, 2 * k, |i, j| {
            let v = xa.get(i, j);
            if (i < r) == (j < k) {
                v.clone()
            } else {
                -v
            }
        }))
    }

    /// `𝕁_r X† 𝕁_kᵀ` (reduces to the transpose form for real matrices).
    pub fn sharp(&self) -> Result<Self> {
        let (k, r) = even_halves(self)?;
        let jr = symplectic(r);
        let jk_t = symplectic(k).transpose();
        jr.mul(&self.adjoint())?.mul(&jk_t)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(Q::is_real)
    }

    /// `s·I - self` as a polynomial matrix.
    pub fn resolvent_pencil(&self) -> PolyMat {
        Mat::from_fn(self.rows, self.cols, |i, j| {
            let c = Poly::constant(-self.get(i, j));
            if i == j {
                &c + &Poly::s()
            } else {
                c
            }
        })
    }

    pub fn to_poly(&self) -> PolyMat {
        self.map(|q| Poly::constant(q.clone()))
    }
}

fn even_halves(x: &QMat) -> Result<(usize, usize)> {
    if x.rows % 2 != 0 || x.cols % 2 != 0 {
        return Err(Error::Dimension(format!(
            "adjoint needs even dimensions, got {}x{}",
            x.rows, x.cols
        )));
    }
    Ok((x.rows / 2, x.cols / 2))
}

fn symplectic(k: usize) -> QMat {
    Mat::from_fn(2 * k, 2 * k, |i, j| {
        if i < k && j == i + k {
            Q::one()
        } else if i >= k && j + k == i {
            Q::from_int(-1)
        } else {
            Q::zero()
        }
    })
}

impl<T: Ring + fmt::Display> fmt::Display for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl<T: Ring + fmt::Display> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}{}", self.rows, self.cols, self)
    }
}
