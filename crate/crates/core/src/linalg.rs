//! Small dense linear algebra: complex column-major matrices, pivoted
//! Householder least squares and a symmetric Jacobi eigensolver.
//!
//! Sizes in this crate are tiny (a few dozen rows, a handful of columns in
//! the least-squares problems), so everything is written for clarity and
//! predictable operation counts rather than blocking.

use alloc::vec;
use alloc::vec::Vec;

use crate::C64;

/// Relative rank tolerance for the least-squares solver.
pub const RANK_TOL: f64 = 1e-10;

/// Dense complex matrix stored column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from equally long columns.
    ///
    /// Panics if the columns have different lengths.
    pub fn from_columns(columns: &[Vec<C64>]) -> Self {
        let rows = columns.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows * columns.len());
        for c in columns {
            assert_eq!(c.len(), rows, "ragged columns");
            data.extend_from_slice(c);
        }
        Self { rows, cols: columns.len(), data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[j * self.rows + i] = v;
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[C64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [C64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `A x`.
    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![C64::new(0.0, 0.0); self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj == C64::new(0.0, 0.0) {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.col(j)) {
                *o += a * xj;
            }
        }
        out
    }

    /// `A^* y` (conjugate transpose times a vector).
    pub fn adjoint_mul_vec(&self, y: &[C64]) -> Vec<C64> {
        assert_eq!(y.len(), self.rows);
        (0..self.cols).map(|j| dot_conj(self.col(j), y)).collect()
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let col = self.mul_vec(other.col(j));
            out.col_mut(j).copy_from_slice(&col);
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Sub-matrix made of the listed columns, in the listed order.
    pub fn select_columns(&self, idx: &[usize]) -> CMatrix {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for &j in idx {
            data.extend_from_slice(self.col(j));
        }
        CMatrix { rows: self.rows, cols: idx.len(), data }
    }

    /// `S A` for a real square `S`.
    pub fn left_mul_real(&self, s: &RealMatrix) -> CMatrix {
        assert_eq!(s.n, self.rows);
        let mut out = CMatrix::zeros(self.rows, self.cols);
        for j in 0..self.cols {
            let src = self.col(j);
            let dst = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for (i, d) in dst.iter_mut().enumerate() {
                let row = s.row(i);
                let mut acc = C64::new(0.0, 0.0);
                for (&sik, &a) in row.iter().zip(src) {
                    acc += a * sik;
                }
                *d = acc;
            }
        }
        out
    }

    /// `A S` for a real square `S`.
    pub fn right_mul_real(&self, s: &RealMatrix) -> CMatrix {
        assert_eq!(s.n, self.cols);
        let mut out = CMatrix::zeros(self.rows, self.cols);
        for k in 0..self.cols {
            let src = self.col(k);
            for j in 0..self.cols {
                let skj = s.get(k, j);
                if skj == 0.0 {
                    continue;
                }
                let dst = &mut out.data[j * self.rows..(j + 1) * self.rows];
                for (d, &a) in dst.iter_mut().zip(src) {
                    *d += a * skj;
                }
            }
        }
        out
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// `a^* b`.
#[inline]
pub fn dot_conj(a: &[C64], b: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * y;
    }
    acc
}

#[inline]
pub fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Square real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    n: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, other: &RealMatrix) -> RealMatrix {
        assert_eq!(self.n, other.n);
        RealMatrix::from_fn(self.n, |i, j| (0..self.n).map(|k| self.get(i, k) * other.get(k, j)).sum())
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == if i == j { 1.0 } else { 0.0 }))
    }

    pub fn frobenius(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|v| v * v).sum())
    }

    /// Elementwise difference, for reconstruction checks.
    pub fn sub(&self, other: &RealMatrix) -> RealMatrix {
        RealMatrix::from_fn(self.n, |i, j| self.get(i, j) - other.get(i, j))
    }
}

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Eigenvectors as matrix columns, matching `values`.
    pub vectors: RealMatrix,
}

/// Cyclic Jacobi eigensolver for a real symmetric matrix.
pub fn symmetric_eigen(a: &RealMatrix) -> SymmetricEigen {
    let n = a.n;
    let mut m = a.clone();
    let mut v = RealMatrix::identity(n);
    let scale = m.frobenius().max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j) * m.get(i, j))
            .sum();
        if libm::sqrt(off) <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = m.get(p, p);
                let aqq = m.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = libm::copysign(1.0, theta) / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkq = m.get(k, q);
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mqk = m.get(q, k);
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).total_cmp(&m.get(j, j)));
    let values = order.iter().map(|&i| m.get(i, i)).collect();
    let vectors = RealMatrix::from_fn(n, |i, j| v.get(i, order[j]));
    SymmetricEigen { values, vectors }
}

/// Outcome of a least-squares solve.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    /// Minimizer of `‖A x − b‖₂`; the minimum-norm one when `A` is rank
    /// deficient.
    pub solution: Vec<C64>,
    /// Numerical rank of `A` at [`RANK_TOL`].
    pub rank: usize,
    /// Complex multiply-accumulate operations spent.
    pub flops: u64,
}

impl LeastSquares {
    pub fn is_rank_deficient(&self) -> bool {
        self.rank < self.solution.len()
    }
}

/// Applies the Householder reflector `I − 2 v v^* / ‖v‖²` to `x`.
#[inline]
fn reflect(v: &[C64], vnorm2: f64, x: &mut [C64]) {
    let s = dot_conj(v, x) * (2.0 / vnorm2);
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= vi * s;
    }
}

/// Builds the reflector mapping `x` onto `alpha e₁`; returns `(v, ‖v‖², alpha)`.
fn reflector(x: &[C64], norm: f64) -> (Vec<C64>, f64, C64) {
    let x0 = x[0];
    let a0 = x0.norm();
    let phase = if a0 == 0.0 { C64::new(1.0, 0.0) } else { x0 / a0 };
    let alpha = -phase * norm;
    let mut v = x.to_vec();
    v[0] -= alpha;
    (v, 2.0 * norm * (norm + a0), alpha)
}

/// Solves `min ‖A x − b‖₂` by Householder QR with column pivoting.
///
/// Columns whose remaining norm falls below `RANK_TOL · |R₁₁|` are treated as
/// dependent; the remaining system is then solved in the minimum-norm sense
/// through a second (unpivoted) QR of the trapezoidal factor.
pub fn least_squares(a: &CMatrix, b: &[C64]) -> LeastSquares {
    let (m, n) = (a.rows, a.cols);
    assert_eq!(b.len(), m, "right-hand side length");
    let zero = C64::new(0.0, 0.0);
    let mut w = a.clone();
    let mut rhs = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut flops = 0u64;
    let mut rank = 0;
    let mut lead = 0.0;

    for k in 0..m.min(n) {
        let mut best = k;
        let mut best_norm2 = -1.0;
        for j in k..n {
            let nj = norm_sqr(&w.col(j)[k..]);
            if nj > best_norm2 {
                best = j;
                best_norm2 = nj;
            }
        }
        flops += ((n - k) * (m - k)) as u64;
        if best != k {
            for i in 0..m {
                let t = w.get(i, k);
                w.set(i, k, w.get(i, best));
                w.set(i, best, t);
            }
            perm.swap(k, best);
        }
        let norm = libm::sqrt(best_norm2);
        if k == 0 {
            lead = norm;
        }
        if norm == 0.0 || norm <= RANK_TOL * lead {
            break;
        }
        let (v, vnorm2, alpha) = reflector(&w.col(k)[k..], norm);
        for j in k + 1..n {
            reflect(&v, vnorm2, &mut w.col_mut(j)[k..]);
            flops += 2 * (m - k) as u64;
        }
        reflect(&v, vnorm2, &mut rhs[k..]);
        flops += 2 * (m - k) as u64;
        w.set(k, k, alpha);
        rank = k + 1;
    }

    let mut z = vec![zero; n];
    if rank == n {
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            for j in i + 1..n {
                acc -= w.get(i, j) * z[j];
            }
            z[i] = acc / w.get(i, i);
        }
        flops += (n * (n + 1) / 2) as u64;
    } else if rank > 0 {
        // R1 = W[0..rank, 0..n] is upper trapezoidal. Factor R1^* = Q2 R2 and
        // solve R2^* u = c, then z = Q2 [u; 0] is the minimum-norm solution.
        let r = rank;
        let mut t = CMatrix::from_fn(n, r, |i, j| if i >= j { w.get(j, i).conj() } else { zero });
        let mut reflectors: Vec<(Vec<C64>, f64)> = Vec::with_capacity(r);
        for k in 0..r {
            let norm = libm::sqrt(norm_sqr(&t.col(k)[k..]));
            flops += (n - k) as u64;
            let (v, vnorm2, alpha) = reflector(&t.col(k)[k..], norm);
            for j in k + 1..r {
                reflect(&v, vnorm2, &mut t.col_mut(j)[k..]);
                flops += 2 * (n - k) as u64;
            }
            t.set(k, k, alpha);
            reflectors.push((v, vnorm2));
        }
        // R2^* is lower triangular with entries conj(t[j, i]) for j <= i.
        let mut u = vec![zero; n];
        for i in 0..r {
            let mut acc = rhs[i];
            for j in 0..i {
                acc -= t.get(j, i).conj() * u[j];
            }
            u[i] = acc / t.get(i, i).conj();
        }
        flops += (r * (r + 1) / 2) as u64;
        for k in (0..r).rev() {
            let (v, vnorm2) = &reflectors[k];
            reflect(v, *vnorm2, &mut u[k..]);
            flops += 2 * (n - k) as u64;
        }
        z = u;
    }

    let mut solution = vec![zero; n];
    for (i, &p) in perm.iter().enumerate() {
        solution[p] = z[i];
    }
    LeastSquares { solution, rank, flops }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn exact_square_system() {
        let a = CMatrix::from_columns(&[vec![c(2.0, 0.0), c(0.0, 1.0)], vec![c(1.0, -1.0), c(3.0, 0.0)]]);
        let x = vec![c(0.5, 0.25), c(-1.0, 2.0)];
        let b = a.mul_vec(&x);
        let ls = least_squares(&a, &b);
        assert_eq!(ls.rank, 2);
        for (u, v) in ls.solution.iter().zip(&x) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn duplicate_columns_give_minimum_norm() {
        // [h h] x = h  has minimum-norm solution (1/2, 1/2).
        let h = vec![c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 1.0)];
        let a = CMatrix::from_columns(&[h.clone(), h.clone()]);
        let ls = least_squares(&a, &h);
        assert_eq!(ls.rank, 1);
        assert!(ls.is_rank_deficient());
        for z in &ls.solution {
            assert!((z - c(0.5, 0.0)).norm() < 1e-12, "{z}");
        }
    }

    #[test]
    fn underdetermined_minimum_norm() {
        // [1 1] x = 2 → x = (1, 1).
        let a = CMatrix::from_columns(&[vec![c(1.0, 0.0)], vec![c(1.0, 0.0)]]);
        let ls = least_squares(&a, &[c(2.0, 0.0)]);
        assert_eq!(ls.rank, 1);
        for z in &ls.solution {
            assert!((z - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_matrix_gives_zero() {
        let a = CMatrix::zeros(3, 2);
        let ls = least_squares(&a, &[c(1.0, 0.0); 3]);
        assert_eq!(ls.rank, 0);
        assert!(ls.solution.iter().all(|z| *z == c(0.0, 0.0)));
    }

    #[test]
    fn overdetermined_matches_normal_equations() {
        let a = CMatrix::from_fn(5, 2, |i, j| c((i + 1) as f64, (i * j) as f64 - 1.0));
        let b: Vec<C64> = (0..5).map(|i| c(i as f64, 1.0)).collect();
        let ls = least_squares(&a, &b);
        // Residual must be orthogonal to the column space.
        let r: Vec<C64> = b.iter().zip(a.mul_vec(&ls.solution)).map(|(u, v)| u - v).collect();
        for z in a.adjoint_mul_vec(&r) {
            assert!(z.norm() < 1e-10);
        }
    }

    #[test]
    fn jacobi_diagonalizes() {
        let a = RealMatrix::from_fn(4, |i, j| 1.0 / (1.0 + i as f64 + j as f64));
        let e = symmetric_eigen(&a);
        let v = &e.vectors;
        let recon = RealMatrix::from_fn(4, |i, j| (0..4).map(|k| v.get(i, k) * e.values[k] * v.get(j, k)).sum());
        assert!(recon.sub(&a).frobenius() < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }
}
