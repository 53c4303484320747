//! Eigenvalues of dense complex matrices: balancing, Householder reduction to
//! Hessenberg form, then single-shift QR with Wilkinson shifts.

use crate::error::{Error, Result};
use crate::numeric::CMatrix;
use crate::Complex;

const MAX_ITER_PER_EIGENVALUE: usize = 30;

/// All `n` eigenvalues of a square matrix, repeated by algebraic multiplicity,
/// sorted by real part then imaginary part.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = to_rows(m);
    balance(&mut h);
    hessenberg(&mut h);
    let mut ev = hessenberg_qr(&mut h)?;
    sort_complex(&mut ev);
    Ok(ev)
}

pub(crate) fn sort_complex(v: &mut [Complex]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

fn to_rows(m: &CMatrix) -> Vec<Vec<Complex>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn balance(a: &mut [Vec<Complex>]) {
    let n = a.len();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j][i].l1_norm();
                    r += a[i][j].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / 2.0;
            while c < g {
                f *= 2.0;
                c *= 4.0;
            }
            g = r * 2.0;
            while c >= g {
                f /= 2.0;
                c /= 4.0;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[i][j] /= f;
                    a[j][i] *= f;
                }
            }
        }
    }
}

fn hessenberg(a: &mut [Vec<Complex>]) {
    let n = a.len();
    for k in 0..n.saturating_sub(2) {
        let alpha_norm: f64 = (k + 1..n).map(|i| a[i][k].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = a[k + 1][k];
        let phase = if x0.norm() == 0.0 {
            Complex::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        // v = x + e^{iθ}‖x‖ e1, reflector H = I - 2 v v† / (v† v)
        let mut v: Vec<Complex> = (k + 1..n).map(|i| a[i][k]).collect();
        v[0] += phase * alpha_norm;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // left: A <- H A on rows k+1..n
        for j in 0..n {
            let dot: Complex = v.iter().enumerate().map(|(t, vt)| vt.conj() * a[k + 1 + t][j]).sum();
            let f = dot * (2.0 / vnorm2);
            for (t, vt) in v.iter().enumerate() {
                a[k + 1 + t][j] -= vt * f;
            }
        }
        // right: A <- A H on columns k+1..n
        for row in a.iter_mut() {
            let dot: Complex = v.iter().enumerate().map(|(t, vt)| row[k + 1 + t] * vt).sum();
            let f = dot * (2.0 / vnorm2);
            for (t, vt) in v.iter().enumerate() {
                row[k + 1 + t] -= f * vt.conj();
            }
        }
        for row in a.iter_mut().skip(k + 2) {
            row[k] = Complex::new(0.0, 0.0);
        }
    }
}

fn wilkinson_shift(a: Complex, b: Complex, c: Complex, d: Complex) -> Complex {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let root = disc.sqrt();
    let l1 = half_tr + root;
    let l2 = half_tr - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn hessenberg_qr(h: &mut [Vec<Complex>]) -> Result<Vec<Complex>> {
    let n = h.len();
    let mut eig = vec![Complex::new(0.0, 0.0); n];
    let scale = h
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let limit = MAX_ITER_PER_EIGENVALUE * n.max(1);
    loop {
        if hi == 0 {
            eig[0] = h[0][0];
            break;
        }
        // locate the start of the active unreduced block
        let mut l = hi;
        while l > 0 {
            let s = h[l - 1][l - 1].norm() + h[l][l].norm();
            let s = if s == 0.0 { scale } else { s };
            if h[l][l - 1].norm() <= eps * s {
                h[l][l - 1] = Complex::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[hi][hi];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > limit {
            return Err(Error::NoConvergence { iterations: total });
        }
        let mu = if iter % 10 == 0 {
            let sub = h[hi][hi - 1].norm() + if hi >= 2 { h[hi - 1][hi - 2].norm() } else { 0.0 };
            h[hi][hi] + Complex::new(0.75 * sub, 0.5 * sub)
        } else {
            wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };
        for (i, row) in h.iter_mut().enumerate().take(hi + 1).skip(l) {
            row[i] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let a = h[k][k];
            let b = h[k + 1][k];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0))
            } else {
                (a / r, b / r)
            };
            for j in k..=hi {
                let x = h[k][j];
                let y = h[k + 1][j];
                h[k][j] = c.conj() * x + s.conj() * y;
                h[k + 1][j] = -s * x + c * y;
            }
            rots.push((c, s));
        }
        for (t, &(c, s)) in rots.iter().enumerate() {
            let k = l + t;
            for row in h.iter_mut().take((k + 2).min(hi) + 1).skip(l) {
                let x = row[k];
                let y = row[k + 1];
                row[k] = x * c + y * s;
                row[k + 1] = -x * s.conj() + y * c.conj();
            }
        }
        for (i, row) in h.iter_mut().enumerate().take(hi + 1).skip(l) {
            row[i] += mu;
        }
    }
    Ok(eig)
}
