//! Exact Gaussian elimination over the top level of a [`FieldTower`].
//!
//! Pivots are chosen by smallest [`FieldTower::complexity`] within the
//! column, which keeps fraction growth down over function fields.

use crate::field::{Element, FieldTower};

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(k: &FieldTower, rows: &[Vec<Element>], ncols: usize) -> (Vec<Vec<Element>>, Vec<usize>) {
    let mut m: Vec<Vec<Element>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let best = (r..m.len())
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| k.complexity(&m[i][c]));
        let Some(best) = best else { continue };
        m.swap(r, best);
        let inv = k.inv(&m[r][c]);
        let pivot_row: Vec<Element> = m[r].iter().map(|x| k.mul(x, &inv)).collect();
        m[r] = pivot_row;
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..ncols {
                if m[r][j].is_zero() {
                    continue;
                }
                let prod = k.mul(&factor, &m[r][j]);
                m[i][j] = k.sub(&m[i][j], &prod);
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(k: &FieldTower, rows: &[Vec<Element>], ncols: usize) -> usize {
    rref(k, rows, ncols).1.len()
}

/// Basis of `{v : M v = 0}`; one vector per free column, with a 1 in that column.
pub fn nullspace(k: &FieldTower, rows: &[Vec<Element>], ncols: usize) -> Vec<Vec<Element>> {
    let (m, pivots) = rref(k, rows, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![k.zero(); ncols];
        v[free] = k.one();
        for (row, &pc) in m.iter().zip(&pivots) {
            if !row[free].is_zero() {
                v[pc] = k.neg(&row[free]);
            }
        }
        out.push(v);
    }
    out
}

/// A particular solution of `M x = b` with free variables set to zero.
pub fn solve(k: &FieldTower, rows: &[Vec<Element>], rhs: &[Element], ncols: usize) -> Option<Vec<Element>> {
    let aug: Vec<Vec<Element>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let (m, pivots) = rref(k, &aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![k.zero(); ncols];
    for (row, &pc) in m.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

/// Columns given as vectors, returned as rows of length `ncols`.
pub fn transpose(k: &FieldTower, columns: &[Vec<Element>], ncols: usize) -> Vec<Vec<Element>> {
    let nrows = columns.first().map_or(0, Vec::len);
    (0..nrows)
        .map(|i| {
            (0..ncols)
                .map(|j| columns.get(j).map_or_else(|| k.zero(), |c| c[i].clone()))
                .collect()
        })
        .collect()
}

/// `M v` for a row-major matrix.
pub fn mat_vec(k: &FieldTower, rows: &[Vec<Element>], v: &[Element]) -> Vec<Element> {
    rows.iter()
        .map(|r| {
            r.iter().zip(v).fold(k.zero(), |acc, (a, b)| {
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    k.add(&acc, &k.mul(a, b))
                }
            })
        })
        .collect()
}

/// Intersection of two subspaces of `k^n` given by spanning vectors.
pub fn intersect(k: &FieldTower, u: &[Vec<Element>], v: &[Vec<Element>], n: usize) -> Vec<Vec<Element>> {
    if u.is_empty() || v.is_empty() {
        return Vec::new();
    }
    // solve sum a_i u_i - sum b_j v_j = 0
    let mut cols: Vec<Vec<Element>> = u.to_vec();
    cols.extend(v.iter().map(|x| x.iter().map(|e| k.neg(e)).collect::<Vec<_>>()));
    let rows = transpose(k, &cols, cols.len());
    let kernel = nullspace(k, &rows, cols.len());
    let mut out: Vec<Vec<Element>> = kernel
        .iter()
        .map(|coef| {
            let mut acc = vec![k.zero(); n];
            for (a, ui) in coef.iter().zip(u) {
                if a.is_zero() {
                    continue;
                }
                for (slot, x) in acc.iter_mut().zip(ui) {
                    *slot = k.add(slot, &k.mul(a, x));
                }
            }
            acc
        })
        .collect();
    // the kernel may contain dependent combinations when u is not independent
    let (m, _) = rref(k, &out, n);
    out = m;
    out
}

/// Incrementally maintained echelon basis of a row space.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    rows: Vec<Vec<Element>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Element>] {
        &self.rows
    }

    /// Reduce `v` against the basis.
    pub fn reduce(&self, k: &FieldTower, v: &[Element]) -> Vec<Element> {
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if v[pc].is_zero() {
                continue;
            }
            let f = v[pc].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = k.sub(x, &k.mul(&f, r));
                }
            }
        }
        v
    }

    /// Adds `v` if it is independent; returns whether the rank grew.
    pub fn insert(&mut self, k: &FieldTower, v: &[Element]) -> bool {
        let r = self.reduce(k, v);
        let Some(pc) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = k.inv(&r[pc]);
        let r: Vec<Element> = r.iter().map(|x| k.mul(x, &inv)).collect();
        self.rows.push(r);
        self.pivots.push(pc);
        true
    }

    pub fn contains(&self, k: &FieldTower, v: &[Element]) -> bool {
        self.reduce(k, v).iter().all(Element::is_zero)
    }
}
