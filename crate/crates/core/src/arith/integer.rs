//! Exact integer linear algebra: incremental echelon forms, Smith normal form,
//! hyperplane normals.

use super::rational::{det_i64, gcd_i64};

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn primitive(v: &mut [i128]) {
    let g = v.iter().fold(0, |g, &x| gcd128(g, x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

/// Row echelon basis of a growing set of integer vectors.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, Vec<i128>)>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residue of `v` modulo the span; zero iff `v` is in the span.
    pub fn reduce(&self, v: &[i64]) -> Vec<i128> {
        let mut v: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (p, row) in &self.rows {
            if v[*p] != 0 {
                let a = row[*p];
                let b = v[*p];
                let g = gcd128(a, b);
                let (a, b) = (a / g, b / g);
                for (x, y) in v.iter_mut().zip(row) {
                    *x = *x * a - y * b;
                }
                primitive(&mut v);
            }
        }
        v
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        let r = self.reduce(v);
        match r.iter().position(|&x| x != 0) {
            Some(p) => {
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }
}

pub fn rank_of(vectors: &[&[i64]]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Primitive normal of the hyperplane spanned by `n - 1` independent vectors
/// in `ℤⁿ`, with first nonzero entry positive.
pub fn hyperplane_normal(vectors: &[&[i64]]) -> Vec<i64> {
    let n = vectors.len() + 1;
    let mut normal: Vec<i64> = (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = vectors
                .iter()
                .map(|v| v.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let d = det_i64(&minor) as i64;
            if j % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    let g = normal.iter().fold(0, |g, &x| gcd_i64(g, x));
    if g > 1 {
        for x in normal.iter_mut() {
            *x /= g;
        }
    }
    if normal.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        for x in normal.iter_mut() {
            *x = -*x;
        }
    }
    normal
}

/// Smith normal form `U·A·V = D` of a square matrix; returns the diagonal of
/// `D` and the column transform `V`.
pub fn smith(a: &[Vec<i64>]) -> (Vec<i64>, Vec<Vec<i64>>) {
    let n = a.len();
    let mut m: Vec<Vec<i64>> = a.to_vec();
    let mut v: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for t in 0..n {
        loop {
            // pivot: smallest nonzero absolute value in the trailing block
            let Some((pi, pj)) = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].abs())
            else {
                return (diag_of(&m), v);
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..n {
                let q = m[i][t] / p;
                if q != 0 {
                    for j in t..n {
                        m[i][j] -= q * m[t][j];
                    }
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..n {
                let q = m[t][j] / p;
                if q != 0 {
                    for i in t..n {
                        m[i][j] -= q * m[i][t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block
            let bad = (t + 1..n).flat_map(|i| (t + 1..n).map(move |j| (i, j))).find(|&(i, j)| m[i][j] % p != 0);
            match bad {
                Some((i, _)) => {
                    for j in t..n {
                        m[t][j] += m[i][j];
                    }
                }
                None => break,
            }
        }
    }
    let mut d = diag_of(&m);
    for (k, x) in d.iter_mut().enumerate() {
        if *x < 0 {
            *x = -*x;
            for row in v.iter_mut() {
                row[k] = -row[k];
            }
        }
    }
    (d, v)
}

fn diag_of(m: &[Vec<i64>]) -> Vec<i64> {
    (0..m.len()).map(|i| m[i][i]).collect()
}
