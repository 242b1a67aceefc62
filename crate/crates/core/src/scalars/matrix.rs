use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::KappaPoly;
use super::{KappaScalar, Rational};

/// Dense row-major matrix over Q(κ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<KappaScalar>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<KappaScalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        ExactMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![KappaScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, KappaScalar::one());
        }
        m
    }

    /// Rows of equal length; `cols` is needed when there are no rows.
    pub fn from_rows(rows: Vec<Vec<KappaScalar>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        ExactMatrix { rows: r, cols, data }
    }

    pub fn from_rationals(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().cloned().map(KappaScalar::from_rational).collect())
                .collect(),
            cols,
        )
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(columns: &[Vec<KappaScalar>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &KappaScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: KappaScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &KappaScalar) {
        if !v.is_zero() {
            let e = &mut self.data[i * self.cols + j];
            *e += v;
        }
    }

    pub fn row(&self, i: usize) -> &[KappaScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<KappaScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[KappaScalar]) -> Vec<KappaScalar> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = KappaScalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &KappaScalar) -> Self {
        let data = self.data.iter().map(|a| a * c).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        let mut m = Self::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..o.cols {
                m.set(i, self.cols + j, o.get(i, j).clone());
            }
        }
        m
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        ExactMatrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        ExactMatrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                m.set(i, jj, self.get(i, j).clone());
            }
        }
        m
    }

    /// Entry-wise substitution κ = κ₀; `None` if some entry has a pole there.
    pub fn specialize(&self, k0: &Rational) -> Option<Self> {
        let data = self
            .data
            .iter()
            .map(|x| x.eval(k0).map(KappaScalar::from_rational))
            .collect::<Option<Vec<_>>>()?;
        Some(ExactMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// Rank over Q(κ) by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        self.pivot_columns().len()
    }

    /// Pivot columns of the row echelon form (left to right), computed by
    /// Bareiss elimination: over Z when no entry depends on κ, otherwise
    /// over Q[κ] after clearing denominators row by row.
    pub fn pivot_columns(&self) -> Vec<usize> {
        if self.rows == 0 || self.cols == 0 {
            return Vec::new();
        }
        if self.data.iter().all(|x| x.as_rational().is_some()) {
            let a = (0..self.rows).map(|i| integer_row(self.row(i))).collect();
            bareiss(a, self.cols, |x: &BigInt| x.is_zero(), |a, b, c, d, prev| {
                let v = a * b - c * d;
                if prev.is_one() { v } else { v / prev }
            }, BigInt::one())
        } else {
            let a = (0..self.rows).map(|i| cleared_row(self.row(i))).collect();
            bareiss(a, self.cols, |x: &KappaPoly| x.is_zero(), |a, b, c, d, prev| {
                let v = a.mul(b).sub(&c.mul(d));
                if prev.is_one() { v } else { v.div_exact(prev) }
            }, KappaPoly::one())
        }
    }

    /// Reduced row echelon form by Gauss-Jordan over Q(κ), scanning pivot
    /// columns from the right. Returns the RREF (columns in original order)
    /// and pivot columns in increasing order.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        self.rref_with_order(&(0..self.cols).collect::<Vec<_>>())
    }

    /// Rank through Gauss-Jordan with the reversed column order; an
    /// elimination route independent of `rank`.
    pub fn rank_gauss(&self) -> usize {
        let order: Vec<usize> = (0..self.cols).rev().collect();
        self.rref_with_order(&order).1.len()
    }

    fn rref_with_order(&self, order: &[usize]) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for &c in order {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().unwrap();
            for j in 0..m.cols {
                let v = m.get(r, j);
                if !v.is_zero() {
                    let nv = v * &inv;
                    m.set(r, j, nv);
                }
            }
            let pivot_row: Vec<KappaScalar> = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for (j, pv) in pivot_row.iter().enumerate() {
                    if !pv.is_zero() {
                        let nv = m.get(i, j) - &(&f * pv);
                        m.set(i, j, nv);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        if order.windows(2).all(|w| w[0] < w[1]) {
            return (m, pivots);
        }
        // Reorder rows so pivots increase; callers only inspect the count.
        let mut idx: Vec<usize> = (0..pivots.len()).collect();
        idx.sort_by_key(|&i| pivots[i]);
        let mut rows: Vec<usize> = idx.clone();
        rows.extend(pivots.len()..m.rows);
        let sorted = m.select_rows(&rows);
        let mut piv: Vec<usize> = pivots.clone();
        piv.sort_unstable();
        (sorted, piv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the null space {x : Mx = 0}, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<KappaScalar>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(row);
        }
        let mut out = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f].is_some() {
                continue;
            }
            let mut v = vec![KappaScalar::zero(); self.cols];
            v[f] = KappaScalar::one();
            for (row, &c) in pivots.iter().enumerate() {
                let e = r.get(row, f);
                if !e.is_zero() {
                    v[c] = -e;
                }
            }
            out.push(v);
        }
        out
    }

    /// Some x with Mx = b, or `None` if inconsistent.
    pub fn solve(&self, b: &[KappaScalar]) -> Option<Vec<KappaScalar>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&ExactMatrix::from_columns(&[b.to_vec()], self.rows));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![KappaScalar::zero(); self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let aug = self.hstack(&Self::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Some(r.select_columns(&idx))
    }
}

/// Fraction-free elimination; `step(piv, x, lead, y, prev)` returns
/// (piv·x − lead·y)/prev, which is exact.
fn bareiss<T: Clone>(
    mut a: Vec<Vec<T>>,
    cols: usize,
    is_zero: impl Fn(&T) -> bool,
    step: impl Fn(&T, &T, &T, &T, &T) -> T,
    one: T,
) -> Vec<usize> {
    let rows = a.len();
    let mut prev = one;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let piv = &pivot_row[c];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in (c + 1)..cols {
                row[j] = step(piv, &row[j], &lead, &pivot_row[j], &prev);
            }
            row[c] = step(piv, &row[c], &lead, &pivot_row[c], &prev);
        }
        prev = piv.clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Scales a κ-free row to integers.
fn integer_row(row: &[KappaScalar]) -> Vec<BigInt> {
    let vals: Vec<Rational> = row.iter().map(|x| x.as_rational().unwrap()).collect();
    let mut l = BigInt::one();
    for v in &vals {
        l = l.lcm(v.denom());
    }
    vals.iter().map(|v| v.numer() * (&l / v.denom())).collect()
}

/// Multiplies a row by the lcm of its denominators, giving entries in Q[κ].
fn cleared_row(row: &[KappaScalar]) -> Vec<KappaPoly> {
    let mut l = KappaPoly::one();
    for x in row {
        let d = x.denom();
        if !d.is_one() {
            let g = l.gcd(d);
            l = l.mul(&d.div_exact(&g));
        }
    }
    row.iter()
        .map(|x| {
            if x.is_zero() {
                KappaPoly::zero()
            } else if l.is_one() {
                x.numer().clone()
            } else {
                x.numer().mul(&l.div_exact(x.denom()))
            }
        })
        .collect()
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> KappaScalar {
        KappaScalar::from_int(v)
    }

    #[test]
    fn rank_cancels_in_q_kappa() {
        let k = KappaScalar::kappa();
        let m = ExactMatrix::from_rows(
            vec![vec![q(1), k.inv().unwrap()], vec![k.clone(), q(1)]],
            2,
        );
        assert_eq!(m.rank(), 1);
        assert_eq!(m.rank_gauss(), 1);
    }

    #[test]
    fn kernel_of_single_relation() {
        let k = KappaScalar::kappa();
        let m = ExactMatrix::from_rows(vec![vec![k.clone(), q(1)]], 2);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        // proportional to (1, -k)
        let v = &ker[0];
        assert_eq!(&v[1] / &v[0], -k);
    }

    #[test]
    fn identity_and_zero() {
        assert_eq!(ExactMatrix::identity(3).rank(), 3);
        assert!(ExactMatrix::identity(3).kernel_basis().is_empty());
        assert_eq!(ExactMatrix::zeros(2, 2).kernel_basis().len(), 2);
        assert_eq!(ExactMatrix::zeros(0, 4).rank(), 0);
    }

    #[test]
    fn solve_and_inverse() {
        let m = ExactMatrix::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(1)]], 2);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), ExactMatrix::identity(2));
        let x = m.solve(&[q(3), q(2)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        let sing = ExactMatrix::from_rows(vec![vec![q(1), q(1)], vec![q(1), q(1)]], 2);
        assert!(sing.solve(&[q(1), q(2)]).is_none());
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn bareiss_with_skipped_columns() {
        let k = KappaScalar::kappa();
        let m = ExactMatrix::from_rows(
            vec![
                vec![q(0), k.clone(), q(1), q(2)],
                vec![q(0), &k * &k, k.clone(), q(3)],
                vec![q(0), q(1), k.inv().unwrap(), &k + &q(1)],
            ],
            4,
        );
        assert_eq!(m.rank(), m.rank_gauss());
        assert_eq!(m.rank(), 2);
    }
}
