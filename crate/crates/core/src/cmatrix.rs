//! Dense complex matrices sized for desk-scale work (up to 16x16 here):
//! arithmetic, block assembly, Gaussian inversion, and a Jacobi eigensolver
//! for Hermitian matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::fmath;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix entrywise from a closure.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Builds a square matrix from a row-major slice of real entries.
    pub fn from_real_rows(n: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), n * n);
        CMat::from_fn(n, n, |r, c| Complex64::new(entries[r * n + c], 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> CMat {
        CMat::from_fn(self.rows, self.cols, |r, c| self[(r, c)].conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        CMat::from_fn(self.rows, self.cols, |r, c| self[(r, c)] * s)
    }

    pub fn scale_re(&self, s: f64) -> CMat {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        fmath::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Writes `block` into `self` with upper-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &CMat) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)];
            }
        }
    }

    /// Extracts the `nr x nc` sub-block with upper-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> CMat {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols);
        CMat::from_fn(nr, nc, |r, c| self[(r0 + r, c0 + c)])
    }

    /// Assembles a block-diagonal matrix.
    pub fn block_diag(blocks: &[&CMat]) -> CMat {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = CMat::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Assembles a matrix from a rectangular grid of equally shaped blocks.
    pub fn from_blocks(grid: &[&[&CMat]]) -> CMat {
        let (br, bc) = (grid[0][0].rows, grid[0][0].cols);
        let mut out = CMat::zeros(br * grid.len(), bc * grid[0].len());
        for (i, row) in grid.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                assert!(b.rows == br && b.cols == bc);
                out.set_block(i * br, j * bc, b);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }

    /// Inverse via Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Option<CMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = CMat::identity(n);
        for col in 0..n {
            let pivot = (col..n).max_by(|&i, &j| {
                a[(i, col)]
                    .norm()
                    .partial_cmp(&a[(j, col)].norm())
                    .unwrap()
            })?;
            if a[(pivot, col)].norm() < 1e-300 {
                return None;
            }
            for c in 0..n {
                a.data.swap(col * n + c, pivot * n + c);
                inv.data.swap(col * n + c, pivot * n + c);
            }
            let d = a[(col, col)];
            for c in 0..n {
                a[(col, c)] /= d;
                inv[(col, c)] /= d;
            }
            for r in 0..n {
                if r != col {
                    let f = a[(r, col)];
                    if f.norm() > 0.0 {
                        for c in 0..n {
                            let (ac, ic) = (a[(col, c)], inv[(col, c)]);
                            a[(r, c)] -= f * ac;
                            inv[(r, c)] -= f * ic;
                        }
                    }
                }
            }
        }
        Some(inv)
    }

    /// Frobenius distance to the Hermitian part; 0 for Hermitian matrices.
    pub fn hermiticity_defect(&self) -> f64 {
        (self - &self.adjoint()).frobenius_norm() * 0.5
    }

    /// Eigenvalues and eigenvectors of a Hermitian matrix via cyclic complex
    /// Jacobi rotations. Eigenvalues ascending; eigenvectors are the columns
    /// of the returned matrix.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, CMat) {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut v = CMat::identity(n);
        let norm = self.frobenius_norm().max(1e-300);
        for _sweep in 0..100 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a[(p, q)].norm_sqr();
                }
            }
            if fmath::sqrt(2.0 * off) < 1e-15 * norm {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    let b = apq.norm();
                    if b < 1e-18 * norm {
                        continue;
                    }
                    let phase = apq / b;
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let tau = (aqq - app) / (2.0 * b);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + fmath::sqrt(1.0 + tau * tau))
                    } else {
                        -1.0 / (-tau + fmath::sqrt(1.0 + tau * tau))
                    };
                    let c = 1.0 / fmath::sqrt(1.0 + t * t);
                    let s = t * c;
                    // Unitary J differing from the identity only in rows and
                    // columns p,q; J^* A J annihilates the (p,q) entry.
                    let jpp = Complex64::new(c, 0.0);
                    let jpq = Complex64::new(s, 0.0);
                    let jqp = -phase.conj() * s;
                    let jqq = phase.conj() * c;
                    // Column update A <- A J, V <- V J.
                    for r in 0..n {
                        let (xp, xq) = (a[(r, p)], a[(r, q)]);
                        a[(r, p)] = xp * jpp + xq * jqp;
                        a[(r, q)] = xp * jpq + xq * jqq;
                        let (yp, yq) = (v[(r, p)], v[(r, q)]);
                        v[(r, p)] = yp * jpp + yq * jqp;
                        v[(r, q)] = yp * jpq + yq * jqq;
                    }
                    // Row update A <- J^* A.
                    for cidx in 0..n {
                        let (xp, xq) = (a[(p, cidx)], a[(q, cidx)]);
                        a[(p, cidx)] = jpp.conj() * xp + jqp.conj() * xq;
                        a[(q, cidx)] = jpq.conj() * xp + jqq.conj() * xq;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
        order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
        let eigs: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
        let vecs = CMat::from_fn(n, n, |r, c| v[(r, order[c])]);
        (eigs, vecs)
    }

    /// Minimum eigenvalue of a Hermitian matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        self.hermitian_eigen().0[0]
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        CMat::from_fn(self.rows, self.cols, |r, c| self[(r, c)] + rhs[(r, c)])
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        CMat::from_fn(self.rows, self.cols, |r, c| self[(r, c)] - rhs[(r, c)])
    }
}

impl Neg for &CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        CMat::from_fn(self.rows, self.cols, |r, c| -self[(r, c)])
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    out[(r, c)] += a * rhs[(k, c)];
                }
            }
        }
        out
    }
}

/// Conjugate inner product `conj(a) . b`.
pub fn cdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Plain bilinear product `a . b` (no conjugation).
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
