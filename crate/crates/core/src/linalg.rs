//! Dense Hermitian helpers shared by the lattice engines.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::cmp::Ordering;

/// Eigenvalues closer than this are treated as one degenerate level when
/// ordering eigenvectors.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Real symmetric eigendecomposition with a reproducible ordering.
///
/// Eigenvalues come back ascending. Each eigenvector is sign-fixed so its first
/// significant component is positive, and vectors inside a degenerate level are
/// ordered lexicographically by their components.
pub fn sorted_symmetric_eigen(m: DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let eig = m.symmetric_eigen();
    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|k| {
            let mut v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
            if let Some(first) = v.iter().copied().find(|x| x.abs() > 1e-12) {
                if first < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
            }
            (eig.eigenvalues[k], v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    order_degenerate(&mut pairs, |a, b| lexicographic(a, b, |x| [*x, 0.0]));

    let values = DVector::from_iterator(n, pairs.iter().map(|p| p.0));
    let vectors = DMatrix::from_fn(n, n, |i, k| pairs[k].1[i]);
    (values, vectors)
}

/// Complex Hermitian eigendecomposition with the same ordering rules as
/// [`sorted_symmetric_eigen`]; phases are fixed so the first significant
/// component is real and positive.
pub fn sorted_hermitian_eigen(m: DMatrix<Complex64>) -> (DVector<f64>, DMatrix<Complex64>) {
    let n = m.nrows();
    let eig = m.symmetric_eigen();
    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let mut v: Vec<Complex64> = eig.eigenvectors.column(k).iter().copied().collect();
            if let Some(first) = v.iter().copied().find(|x| x.norm() > 1e-12) {
                let phase = first.conj() / first.norm();
                v.iter_mut().for_each(|x| *x *= phase);
            }
            (eig.eigenvalues[k], v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    order_degenerate(&mut pairs, |a, b| lexicographic(a, b, |z| [z.re, z.im]));

    let values = DVector::from_iterator(n, pairs.iter().map(|p| p.0));
    let vectors = DMatrix::from_fn(n, n, |i, k| pairs[k].1[i]);
    (values, vectors)
}

fn order_degenerate<T>(pairs: &mut [(f64, Vec<T>)], cmp: impl Fn(&[T], &[T]) -> Ordering) {
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end].0 - pairs[end - 1].0 <= DEGENERACY_TOL {
            end += 1;
        }
        if end - start > 1 {
            pairs[start..end].sort_by(|a, b| cmp(&a.1, &b.1));
        }
        start = end;
    }
}

fn lexicographic<T>(a: &[T], b: &[T], parts: impl Fn(&T) -> [f64; 2]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let (px, py) = (parts(x), parts(y));
        for (u, v) in px.iter().zip(py.iter()) {
            if (u - v).abs() > 1e-12 {
                return u.total_cmp(v);
            }
        }
    }
    Ordering::Equal
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut values: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Ascending eigenvalues of a general matrix that is Hermitian up to rounding;
/// the input is symmetrized first.
pub fn hermitian_part_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    hermitian_eigenvalues(&sym)
}

/// `v * m * v^T` for real `v` and complex `m`, done as two real products so
/// the fast real GEMM path is used.
pub fn real_congruence(v: &DMatrix<f64>, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let re = m.map(|z| z.re);
    let im = m.map(|z| z.im);
    let vt = v.transpose();
    let re = v * re * &vt;
    let im = v * im * &vt;
    DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
}

/// Real and imaginary parts of a complex matrix.
pub fn split_complex(m: &DMatrix<Complex64>) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

/// `a * b` as four real GEMMs; nalgebra has no fast kernel for complex scalars.
pub fn complex_matmul(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (ar, ai) = split_complex(a);
    let (br, bi) = split_complex(b);
    split_matmul((&ar, &ai), (&br, &bi))
}

/// Product of two matrices given as `(re, im)` pairs.
pub fn split_matmul(
    (ar, ai): (&DMatrix<f64>, &DMatrix<f64>),
    (br, bi): (&DMatrix<f64>, &DMatrix<f64>),
) -> DMatrix<Complex64> {
    let re = ar * br - ai * bi;
    let im = ar * bi + ai * br;
    DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
}

/// `v^T * m * v` for real `v` and complex `m`.
pub fn real_congruence_transposed(v: &DMatrix<f64>, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    real_congruence(&v.transpose(), m)
}

/// Largest elementwise deviation from Hermiticity.
pub fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..=i {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `-x ln x - (1-x) ln(1-x)` with the continuous extension at the endpoints.
pub fn binary_entropy(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    xlnx_neg(x) + xlnx_neg(1.0 - x)
}

/// `-p ln p`, zero at `p = 0`.
pub fn xlnx_neg(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.ln()
    }
}

pub fn trace(m: &DMatrix<Complex64>) -> Complex64 {
    m.diagonal().iter().sum()
}
