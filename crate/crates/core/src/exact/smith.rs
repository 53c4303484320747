//! Smith form of polynomial matrices and the Smith–McMillan form of rational
//! matrices, with the elementary operations recorded.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{GaussianRational as Q, Mat, Poly, PolyMat, RationalFn, RationalMatrix, Ring};

/// Unimodular elementary operation on rows (left) or columns (right).
#[derive(Debug, Clone, PartialEq)]
pub enum ElementaryOp {
    Swap(usize, usize),
    /// `line[target] += factor * line[source]`
    AddMultiple {
        target: usize,
        source: usize,
        factor: Poly,
    },
    /// `line[index] *= factor`, `factor` a nonzero constant.
    Scale {
        index: usize,
        factor: Q,
    },
}

impl fmt::Display for ElementaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementaryOp::Swap(a, b) => write!(f, "swap {a} {b}"),
            ElementaryOp::AddMultiple { target, source, factor } => write!(f, "{target} += ({factor})*{source}"),
            ElementaryOp::Scale { index, factor } => write!(f, "{index} *= {factor}"),
        }
    }
}

/// Apply a row operation to any exact matrix whose entries can absorb polynomials.
pub fn apply_row_op<T: Ring>(m: &mut Mat<T>, op: &ElementaryOp, lift: &impl Fn(&Poly) -> T) {
    match op {
        ElementaryOp::Swap(a, b) => m.swap_rows(*a, *b),
        ElementaryOp::AddMultiple { target, source, factor } => {
            let f = lift(factor);
            for j in 0..m.cols() {
                let v = m.get(*target, j).add(&f.mul(m.get(*source, j)));
                m.set(*target, j, v);
            }
        }
        ElementaryOp::Scale { index, factor } => {
            let f = lift(&Poly::constant(factor.clone()));
            for j in 0..m.cols() {
                let v = m.get(*index, j).mul(&f);
                m.set(*index, j, v);
            }
        }
    }
}

pub fn apply_col_op<T: Ring>(m: &mut Mat<T>, op: &ElementaryOp, lift: &impl Fn(&Poly) -> T) {
    match op {
        ElementaryOp::Swap(a, b) => m.swap_cols(*a, *b),
        ElementaryOp::AddMultiple { target, source, factor } => {
            let f = lift(factor);
            for i in 0..m.rows() {
                let v = m.get(i, *target).add(&f.mul(m.get(i, *source)));
                m.set(i, *target, v);
            }
        }
        ElementaryOp::Scale { index, factor } => {
            let f = lift(&Poly::constant(factor.clone()));
            for i in 0..m.rows() {
                let v = m.get(i, *index).mul(&f);
                m.set(i, *index, v);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmithForm {
    /// Monic invariant factors `ε_1 | ε_2 | ... | ε_r`.
    pub invariants: Vec<Poly>,
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    pub left_ops: Vec<ElementaryOp>,
    pub right_ops: Vec<ElementaryOp>,
}

impl SmithForm {
    pub fn diagonal(&self) -> PolyMat {
        let mut m = PolyMat::zeros(self.rows, self.cols);
        for (i, e) in self.invariants.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }
}

fn find_pivot(m: &PolyMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            if let Some(d) = m.get(i, j).degree() {
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Smith form by repeated lowest-degree pivoting (ties: smallest row, then column).
pub fn smith_form(n: &PolyMat) -> SmithForm {
    let mut m = n.clone();
    let (rows, cols) = m.shape();
    let mut left = Vec::new();
    let mut right = Vec::new();
    let lift = |p: &Poly| p.clone();
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = find_pivot(&m, t) else {
                break;
            };
            if pi != t {
                let op = ElementaryOp::Swap(t, pi);
                apply_row_op(&mut m, &op, &lift);
                left.push(op);
            }
            if pj != t {
                let op = ElementaryOp::Swap(t, pj);
                apply_col_op(&mut m, &op, &lift);
                right.push(op);
            }
            let pivot = m.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if m.get(i, t).is_zero() {
                    continue;
                }
                let (q, r) = m.get(i, t).div_rem(&pivot);
                let op = ElementaryOp::AddMultiple {
                    target: i,
                    source: t,
                    factor: -&q,
                };
                apply_row_op(&mut m, &op, &lift);
                left.push(op);
                clean &= r.is_zero();
            }
            for j in t + 1..cols {
                if m.get(t, j).is_zero() {
                    continue;
                }
                let (q, r) = m.get(t, j).div_rem(&pivot);
                let op = ElementaryOp::AddMultiple {
                    target: j,
                    source: t,
                    factor: -&q,
                };
                apply_col_op(&mut m, &op, &lift);
                right.push(op);
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            // pivot must divide the whole trailing block
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !pivot.divides(m.get(i, j)));
            match offender {
                Some((i, _)) => {
                    let op = ElementaryOp::AddMultiple {
                        target: t,
                        source: i,
                        factor: Poly::one(),
                    };
                    apply_row_op(&mut m, &op, &lift);
                    left.push(op);
                }
                None => break,
            }
        }
        if m.get(t, t).is_zero() {
            break;
        }
        let lead = m.get(t, t).leading();
        if !lead.is_one() {
            let op = ElementaryOp::Scale {
                index: t,
                factor: lead.inv().expect("nonzero leading coefficient"),
            };
            apply_row_op(&mut m, &op, &lift);
            left.push(op);
        }
        rank = t + 1;
    }
    SmithForm {
        invariants: (0..rank).map(|i| m.get(i, i).clone()).collect(),
        rank,
        rows,
        cols,
        left_ops: left,
        right_ops: right,
    }
}

/// `diag(α_i/β_i)` with `α_i | α_{i+1}`, `β_{i+1} | β_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmithMcMillanForm {
    pub alphas: Vec<Poly>,
    pub betas: Vec<Poly>,
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    /// Monic least common denominator `d` with `G = N/d`.
    pub common_denominator: Poly,
    pub left_ops: Vec<ElementaryOp>,
    pub right_ops: Vec<ElementaryOp>,
}

impl SmithMcMillanForm {
    pub fn entries(&self) -> Vec<RationalFn> {
        self.alphas
            .iter()
            .zip(&self.betas)
            .map(|(a, b)| RationalFn::new(a.clone(), b.clone()))
            .collect()
    }

    pub fn diagonal(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.rows, self.cols);
        for (i, e) in self.entries().into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    /// Apply the recorded operations to `g`; the result equals [`Self::diagonal`].
    pub fn apply_to(&self, g: &RationalMatrix) -> RationalMatrix {
        let lift = |p: &Poly| RationalFn::from_poly(p.clone());
        let mut m = g.clone();
        for op in &self.left_ops {
            apply_row_op(&mut m, op, &lift);
        }
        for op in &self.right_ops {
            apply_col_op(&mut m, op, &lift);
        }
        m
    }

    pub fn check_divisibility(&self) -> bool {
        self.alphas.windows(2).all(|w| w[0].divides(&w[1]))
            && self.betas.windows(2).all(|w| w[1].divides(&w[0]))
            && self
                .alphas
                .iter()
                .zip(&self.betas)
                .all(|(a, b)| Poly::gcd(a, b).is_one() && a.is_monic() && b.is_monic())
    }
}

pub fn smith_mcmillan(g: &RationalMatrix) -> Result<SmithMcMillanForm> {
    let d = g.entries().iter().fold(Poly::one(), |acc, e| Poly::lcm(&acc, e.den()));
    if d.is_zero() {
        return Err(Error::Parameter("zero denominator".into()));
    }
    let n = PolyMat::from_fn(g.rows(), g.cols(), |i, j| {
        let e = g.get(i, j);
        &e.num().clone() * &d.div_exact(e.den()).expect("lcm is a multiple")
    });
    let sf = smith_form(&n);
    let mut alphas = Vec::new();
    let mut betas = Vec::new();
    for eps in &sf.invariants {
        let r = RationalFn::new(eps.clone(), d.clone());
        alphas.push(r.num().monic());
        betas.push(r.den().clone());
    }
    Ok(SmithMcMillanForm {
        alphas,
        betas,
        rank: sf.rank,
        rows: g.rows(),
        cols: g.cols(),
        common_denominator: d,
        left_ops: sf.left_ops,
        right_ops: sf.right_ops,
    })
}
