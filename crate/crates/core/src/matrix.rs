//! Dense complex matrices and the Hermitian spectral machinery the rest of
//! the crate is built on.
//!
//! Everything here is value-semantic: operations take references and return
//! fresh matrices, so matrices can be shared freely across threads.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{QsiError, Result};

pub type C64 = Complex64;

/// Maximum tolerated `max |A - A^H|` for an input to be treated as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Relative cutoff separating the numerical nullspace from the support.
pub const DEFAULT_ZERO_CUTOFF: f64 = 1e-10;

const JACOBI_REL_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting bad lengths and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(QsiError::Shape(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QsiError::NonFinite {
                row: k / cols.max(1),
                col: k % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Real matrix from nested rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(QsiError::Shape("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| C64::new(x, 0.0)))
            .collect();
        Self::new(r, c, data)
    }

    /// The rank-one projector-like matrix `|v><v|`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        let mut data = Vec::with_capacity(n * n);
        for a in v {
            for b in v {
                data.push(a * b.conj());
            }
        }
        Self::from_vec_unchecked(n, n, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_vec_unchecked(self.rows, self.cols, self.data.iter().map(|z| z * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation `max |a - b|`; `None` if the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return None;
        }
        Some(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        )
    }

    /// `max |A - A^H|`.
    pub fn hermitian_deviation(&self) -> Result<f64> {
        self.require_square()?;
        let n = self.rows;
        let mut dev = 0.0f64;
        for r in 0..n {
            for c in r..n {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        Ok(dev)
    }

    /// `(A + A^H) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.rows;
        let mut out = self.clone();
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] = (self[(r, c)] + self[(c, r)].conj()) * 0.5;
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(QsiError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; `self`'s index is the major one.
    pub fn tensor(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for ar in 0..self.rows {
            for ac in 0..self.cols {
                let a = self[(ar, ac)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for br in 0..other.rows {
                    for bc in 0..other.cols {
                        out[(ar * other.rows + br, ac * other.cols + bc)] = a * other[(br, bc)];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Result<C64> {
        self.require_square()?;
        Ok((0..self.rows).map(|i| self[(i, i)]).sum())
    }

    /// Trace norm `sum |lambda_i|` of a Hermitian matrix.
    pub fn trace_norm(&self) -> Result<f64> {
        Ok(self.eigvals_hermitian()?.iter().map(|l| l.abs()).sum())
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(QsiError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn require_hermitian(&self) -> Result<()> {
        let deviation = self.hermitian_deviation()?;
        if deviation > HERMITIAN_TOL {
            return Err(QsiError::NotHermitian {
                deviation,
                tolerance: HERMITIAN_TOL,
            });
        }
        Ok(())
    }

    /// Full Hermitian eigendecomposition by cyclic Jacobi rotations.
    pub fn eig_hermitian(&self) -> Result<HermitianEigen> {
        self.require_hermitian()?;
        let (values, vectors) = jacobi(self, true);
        Ok(sorted_eigen(values, vectors.expect("vectors requested")))
    }

    /// Eigenvalues only, ascending.
    pub fn eigvals_hermitian(&self) -> Result<Vec<f64>> {
        self.require_hermitian()?;
        let (mut values, _) = jacobi(self, false);
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    /// `V f(Lambda) V^H`. Eigenvalues with `|lambda| <= zero_cutoff` map to 0
    /// without evaluating `f`, which restricts singular functions such as
    /// inverse powers to the support. Pass `0.0` to disable the cutoff.
    pub fn spectral_fn(&self, f: impl Fn(f64) -> f64, zero_cutoff: f64) -> Result<Self> {
        let eig = self.eig_hermitian()?;
        Ok(eig.map_spectrum(|l| if l.abs() <= zero_cutoff { 0.0 } else { f(l) }))
    }

    /// Principal square root of a PSD matrix; small negative round-off
    /// eigenvalues are clamped to zero.
    pub fn sqrt_psd(&self) -> Result<Self> {
        self.spectral_fn(|l| l.max(0.0).sqrt(), 0.0)
    }

    /// Support-restricted inverse square root, cutoff relative to the
    /// largest eigenvalue magnitude.
    pub fn pinv_sqrt(&self) -> Result<Self> {
        let eig = self.eig_hermitian()?;
        let cutoff = eig.support_cutoff(DEFAULT_ZERO_CUTOFF);
        Ok(eig.map_spectrum(|l| if l <= cutoff { 0.0 } else { l.powf(-0.5) }))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        ComplexMatrix::from_vec_unchecked(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        )
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        ComplexMatrix::from_vec_unchecked(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        )
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("shape mismatch in mul")
    }
}

/// Eigenpairs of a Hermitian matrix: ascending eigenvalues, eigenvectors as
/// the columns of a unitary matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(g(lambda)) V^H`.
    pub fn map_spectrum(&self, g: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| g(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for r in 0..n {
                let vr = v[(r, k)] * w;
                for c in 0..n {
                    out[(r, c)] += vr * v[(c, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }

    /// `max |V^H V - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let v = &self.eigenvectors;
        let vhv = &v.adjoint() * v;
        vhv.max_abs_diff(&ComplexMatrix::identity(v.rows()))
            .unwrap_or(f64::INFINITY)
    }

    /// Absolute threshold `rel * max |lambda|`.
    pub fn support_cutoff(&self, rel: f64) -> f64 {
        rel * self.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()))
    }
}

fn sorted_eigen(values: Vec<f64>, vectors: ComplexMatrix) -> HermitianEigen {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut sorted_vecs = ComplexMatrix::zeros(n, n);
    for (new_c, &old_c) in order.iter().enumerate() {
        for r in 0..n {
            sorted_vecs[(r, new_c)] = vectors[(r, old_c)];
        }
    }
    HermitianEigen {
        eigenvalues: order.iter().map(|&k| values[k]).collect(),
        eigenvectors: sorted_vecs,
    }
}

/// Cyclic Jacobi on a Hermitian matrix. Each rotation is a 2x2 unitary
/// `U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]` acting on columns/rows
/// `p, q`, where `phi = arg a_pq`, which zeroes `a_pq` exactly.
fn jacobi(input: &ComplexMatrix, want_vectors: bool) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = input.rows();
    let mut a = input.hermitian_part();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    if n <= 1 {
        return ((0..n).map(|i| a[(i, i)].re).collect(), v);
    }

    let total = a.frobenius_norm();
    let threshold = JACOBI_REL_TOL * total;

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[(r, c)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= threshold {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 || mag < 1e-300 {
                    continue;
                }
                let phase = apq / mag; // e^{i phi}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                let u_pp = C64::new(c, 0.0);
                let u_pq = C64::new(s, 0.0);
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;

                // A <- A U
                for r in 0..n {
                    let ar_p = a[(r, p)];
                    let ar_q = a[(r, q)];
                    a[(r, p)] = ar_p * u_pp + ar_q * u_qp;
                    a[(r, q)] = ar_p * u_pq + ar_q * u_qq;
                }
                // A <- U^H A
                for col in 0..n {
                    let ap = a[(p, col)];
                    let aq = a[(q, col)];
                    a[(p, col)] = u_pp.conj() * ap + u_qp.conj() * aq;
                    a[(q, col)] = u_pq.conj() * ap + u_qq.conj() * aq;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                if let Some(v) = v.as_mut() {
                    for r in 0..n {
                        let vp = v[(r, p)];
                        let vq = v[(r, q)];
                        v[(r, p)] = vp * u_pp + vq * u_qp;
                        v[(r, q)] = vp * u_pq + vq * u_qq;
                    }
                }
            }
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}
