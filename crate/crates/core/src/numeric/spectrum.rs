//! Eigenvalue multisets with tolerance clustering and optimal multiset matching.

use std::fmt;

use crate::numeric::eigen::sort_complex;
use crate::Complex;

/// Which computation produced a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Eigenvalues,
    Pencil,
    FlatAdjoint,
    Smf,
    KalmanTheorem,
    MinimalRealization,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Eigenvalues => "eigenvalues",
            Method::Pencil => "pencil",
            Method::FlatAdjoint => "flat_adjoint",
            Method::Smf => "smf",
            Method::KalmanTheorem => "kalman_theorem",
            Method::MinimalRealization => "minimal_realization",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `|a - b| <= tol * max(1, |a|)`.
pub fn close(a: Complex, b: Complex, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(1.0)
}

/// Clustered multiset of complex values.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub values: Vec<(Complex, usize)>,
    pub tol: f64,
    pub method: Method,
    /// Free-form qualifiers such as "degraded" or "numeric roots".
    pub notes: Vec<String>,
}

impl SpectrumReport {
    pub fn from_values(raw: &[Complex], tol: f64, method: Method) -> Self {
        Self {
            values: cluster(raw, tol),
            tol,
            method,
            notes: Vec::new(),
        }
    }

    pub fn empty(tol: f64, method: Method) -> Self {
        Self::from_values(&[], tol, method)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Values repeated by multiplicity.
    pub fn multiset(&self) -> Vec<Complex> {
        self.values
            .iter()
            .flat_map(|&(z, k)| std::iter::repeat_n(z, k))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.values.iter().map(|&(_, k)| k).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, z: Complex, tol: f64) -> bool {
        self.values.iter().any(|&(v, _)| close(v, z, tol))
    }
}

/// Group values that lie within `tol * max(1, |z|)` of each other. Cluster
/// representatives are means of their members. Output is sorted.
pub fn cluster(raw: &[Complex], tol: f64) -> Vec<(Complex, usize)> {
    let mut sorted = raw.to_vec();
    sort_complex(&mut sorted);
    let mut groups: Vec<(Complex, usize)> = Vec::new();
    for z in sorted {
        match groups.iter_mut().find(|(rep, _)| close(*rep, z, tol)) {
            Some((rep, k)) => {
                *rep = (*rep * (*k as f64) + z) / ((*k + 1) as f64);
                *k += 1;
            }
            None => groups.push((z, 1)),
        }
    }
    // averaging can pull two representatives together
    loop {
        let mut merged = false;
        'outer: for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                if close(groups[i].0, groups[j].0, tol) {
                    let (zj, kj) = groups.remove(j);
                    let (zi, ki) = groups[i];
                    groups[i] = ((zi * ki as f64 + zj * kj as f64) / (ki + kj) as f64, ki + kj);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    groups.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    groups
}

/// Result of pairing two multisets.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub matched: bool,
    /// `(index in left, index in right, distance)`.
    pub pairs: Vec<(usize, usize, f64)>,
    pub max_distance: f64,
    pub unmatched_left: Vec<usize>,
    pub unmatched_right: Vec<usize>,
}

/// Minimum-total-distance bipartite matching. The sets match when they have the
/// same size and each pair satisfies `|a - b| <= tol * max(1, |a|)`.
pub fn match_multisets(a: &[Complex], b: &[Complex], tol: f64) -> MatchResult {
    let (n, m) = (a.len(), b.len());
    let k = n.max(m);
    if k == 0 {
        return MatchResult {
            matched: true,
            pairs: Vec::new(),
            max_distance: 0.0,
            unmatched_left: Vec::new(),
            unmatched_right: Vec::new(),
        };
    }
    // pad to square with a large dummy cost so real pairs are preferred
    let dummy = a.iter().chain(b).map(|z| z.norm()).fold(1.0, f64::max) * 1e6;
    let cost: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i < n && j < m { (a[i] - b[j]).norm() } else { dummy })
                .collect()
        })
        .collect();
    let assign = hungarian(&cost);
    let mut pairs = Vec::new();
    let mut unmatched_left = Vec::new();
    let mut unmatched_right = Vec::new();
    let mut ok = n == m;
    let mut max_distance: f64 = 0.0;
    for (i, &j) in assign.iter().enumerate() {
        match (i < n, j < m) {
            (true, true) => {
                let d = (a[i] - b[j]).norm();
                max_distance = max_distance.max(d);
                if d > tol * a[i].norm().max(1.0) {
                    ok = false;
                }
                pairs.push((i, j, d));
            }
            (true, false) => unmatched_left.push(i),
            (false, true) => unmatched_right.push(j),
            (false, false) => {}
        }
    }
    unmatched_right.sort_unstable();
    MatchResult {
        matched: ok,
        pairs,
        max_distance,
        unmatched_left,
        unmatched_right,
    }
}

/// Square assignment problem; returns the column assigned to each row.
fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let inf = f64::INFINITY;
    // 1-based potentials, e-maxx formulation
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut ans = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            ans[p[j] - 1] = j - 1;
        }
    }
    ans
}
