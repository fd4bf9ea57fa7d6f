//! Dense Hermitian eigensolver (cyclic Jacobi) and small matrix helpers.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Off-diagonal Frobenius threshold, relative to the Frobenius norm of the
/// shifted input.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `H T = T diag(E)` with ascending `E` and unitary `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    pub energies: Vec<f64>,
    /// Eigenvectors stored column-wise.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }
}

/// Promote a real matrix to complex.
pub fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// `max |H - H†|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// `max |T†T - 1|`.
pub fn unitarity_defect(t: &CMatrix) -> f64 {
    let n = t.ncols();
    max_abs(&(t.adjoint() * t - CMatrix::identity(n, n)))
}

/// `max |H T - T diag(E)|`.
pub fn eigen_residual(h: &CMatrix, eig: &HermitianEigen) -> f64 {
    let ht = h * &eig.vectors;
    let mut worst = 0.0_f64;
    for (j, &e) in eig.energies.iter().enumerate() {
        for i in 0..h.nrows() {
            worst = worst.max((ht[(i, j)] - eig.vectors[(i, j)] * e).norm());
        }
    }
    worst
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// The matrix is shifted by its mean diagonal before rotating so that the
/// absolute rounding in the residual tracks the spread of the spectrum rather
/// than its offset. Eigenpairs come back sorted by energy (ties broken by the
/// basis index of the largest eigenvector component) and every eigenvector is
/// rotated so that its largest-magnitude component is real and positive.
pub fn diagonalize(h: &CMatrix) -> Result<HermitianEigen> {
    let n = h.nrows();
    if n != h.ncols() {
        return Err(Error::Dimension(format!(
            "diagonalize expects a square matrix, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    if n == 0 {
        return Ok(HermitianEigen {
            energies: vec![],
            vectors: CMatrix::zeros(0, 0),
        });
    }
    if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric("non-finite matrix element".into()));
    }

    let shift = (0..n).map(|i| h[(i, i)].re).sum::<f64>() / n as f64;
    let mut a = h.clone();
    for i in 0..n {
        a[(i, i)] -= Complex64::new(shift, 0.0);
    }
    // Symmetrize exactly; the input is Hermitian only up to rounding.
    for j in 0..n {
        a[(j, j)] = Complex64::new(a[(j, j)].re, 0.0);
        for i in (j + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }

    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = JACOBI_TOLERANCE * scale.max(f64::MIN_POSITIVE);
    let mut v = CMatrix::identity(n, n);

    let mut converged = off_diagonal_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off_diagonal_norm(&a),
            });
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) <= threshold;
    }
    log::trace!("jacobi: n={n} converged in {sweeps} sweeps");

    let mut order: Vec<(f64, usize, usize)> = (0..n)
        .map(|j| (a[(j, j)].re + shift, dominant_index(&v, j), j))
        .collect();
    order.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));

    let mut vectors = CMatrix::zeros(n, n);
    let mut energies = Vec::with_capacity(n);
    for (dst, &(e, big, src)) in order.iter().enumerate() {
        let pivot = v[(big, src)];
        let phase = pivot.conj() / pivot.norm();
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)] * phase;
        }
        vectors[(big, dst)] = Complex64::new(vectors[(big, dst)].norm(), 0.0);
        energies.push(e);
    }
    Ok(HermitianEigen { energies, vectors })
}

/// Index of the first largest-magnitude entry of column `j`.
fn dominant_index(v: &CMatrix, j: usize) -> usize {
    let mut best = 0;
    let mut best_val = -1.0;
    for i in 0..v.nrows() {
        let m = v[(i, j)].norm_sqr();
        if m > best_val {
            best_val = m;
            best = i;
        }
    }
    best
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Negligible against both diagonal entries: zeroing it changes nothing.
    if app.abs() + 1e3 * mag == app.abs() && aqq.abs() + 1e3 * mag == aqq.abs() {
        a[(p, q)] = Complex64::new(0.0, 0.0);
        a[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let e = apq / mag; // e^{iφ}
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U = [[c, s e^{iφ}], [-s e^{-iφ}, c]] acting on columns p, q.
    let u_pq = e * s;
    let u_qp = -e.conj() * s;
    let n = a.nrows();

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * u_qp.conj();
        a[(q, k)] = apk * u_pq.conj() + aqk * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * c;
    }
}
