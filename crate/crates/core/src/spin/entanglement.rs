use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::{DensityMatrix, SpinState};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, xlnx_neg};

/// Splits register indices into (kept, traced) sub-indices.
struct Split {
    kept: Vec<usize>,
    traced: Vec<usize>,
    /// `compose[a * d_traced + e]` is the full index.
    compose: Vec<usize>,
    d_kept: usize,
    d_traced: usize,
}

impl Split {
    fn new(register: usize, kept_positions: &[usize]) -> Split {
        let traced_positions: Vec<usize> =
            (0..register).filter(|p| !kept_positions.contains(p)).collect();
        let dim = 1usize << register;
        let sub = |b: usize, positions: &[usize]| {
            let k = positions.len();
            positions.iter().enumerate().fold(0usize, |acc, (i, &p)| {
                if b & (1 << (register - 1 - p)) != 0 {
                    acc | (1 << (k - 1 - i))
                } else {
                    acc
                }
            })
        };
        let kept: Vec<usize> = (0..dim).map(|b| sub(b, kept_positions)).collect();
        let traced: Vec<usize> = (0..dim).map(|b| sub(b, &traced_positions)).collect();
        let d_kept = 1 << kept_positions.len();
        let d_traced = 1 << traced_positions.len();
        let mut compose = vec![0; dim];
        for b in 0..dim {
            compose[kept[b] * d_traced + traced[b]] = b;
        }
        Split {
            kept,
            traced,
            compose,
            d_kept,
            d_traced,
        }
    }
}

fn normalize_sites(sites: &[usize]) -> Result<Vec<usize>> {
    if sites.is_empty() {
        return Err(Error::InvalidRegion("empty site set".into()));
    }
    let mut s = sites.to_vec();
    s.sort_unstable();
    if s.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidRegion(format!("repeated site in {sites:?}")));
    }
    Ok(s)
}

fn positions_in(support: &[usize], sites: &[usize]) -> Result<Vec<usize>> {
    sites
        .iter()
        .map(|s| {
            support.iter().position(|x| x == s).ok_or_else(|| {
                Error::InvalidRegion(format!("site {s} is not in the support {support:?}"))
            })
        })
        .collect()
}

/// Partial trace onto `sites` (any order; the result uses sorted labels).
pub fn reduced_density_matrix(state: &SpinState, sites: &[usize]) -> Result<DensityMatrix> {
    let sites = normalize_sites(sites)?;
    match state {
        SpinState::Pure(psi) => {
            let support: Vec<usize> = (0..psi.n_sites()).collect();
            let pos = positions_in(&support, &sites)?;
            let split = Split::new(psi.n_sites(), &pos);
            let amps = psi.amplitudes();
            let mut m = DMatrix::<Complex64>::zeros(split.d_kept, split.d_traced);
            for (b, &amp) in amps.iter().enumerate() {
                m[(split.kept[b], split.traced[b])] = amp;
            }
            Ok(DensityMatrix::from_trusted(sites, &m * m.adjoint()))
        }
        SpinState::Mixed(rho) => {
            let pos = positions_in(rho.sites(), &sites)?;
            let split = Split::new(rho.n_sites(), &pos);
            let full = rho.matrix();
            let out = DMatrix::from_fn(split.d_kept, split.d_kept, |a, a2| {
                (0..split.d_traced)
                    .map(|e| {
                        full[(
                            split.compose[a * split.d_traced + e],
                            split.compose[a2 * split.d_traced + e],
                        )]
                    })
                    .sum()
            });
            Ok(DensityMatrix::from_trusted(sites, out))
        }
    }
}

/// `-sum p ln p` over the spectrum, eigenvalues clamped to [0, 1].
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .map(|p| xlnx_neg(p.clamp(0.0, 1.0)))
        .sum()
}

/// Entropy of the reduced state on `sites`.
pub fn entanglement_entropy(state: &SpinState, sites: &[usize]) -> Result<f64> {
    Ok(von_neumann_entropy(&reduced_density_matrix(state, sites)?))
}

fn check_partition(rho: &DensityMatrix, a: &[usize], b: &[usize]) -> Result<Vec<usize>> {
    if a.iter().any(|s| b.contains(s)) {
        return Err(Error::InvalidPartition(format!("{a:?} and {b:?} overlap")));
    }
    let mut union: Vec<usize> = a.iter().chain(b).copied().collect();
    union.sort_unstable();
    union.dedup();
    if union.len() != a.len() + b.len() || union != rho.sites() {
        return Err(Error::InvalidPartition(format!(
            "{a:?} and {b:?} must split the support {:?}",
            rho.sites()
        )));
    }
    positions_in(rho.sites(), b)
}

/// `rho^{T_B}`: transposes the tensor factors belonging to `b` only.
pub fn partial_transpose(
    rho: &DensityMatrix,
    a: &[usize],
    b: &[usize],
) -> Result<DMatrix<Complex64>> {
    let b_pos = check_partition(rho, a, b)?;
    let m = rho.n_sites();
    let mask = b_pos.iter().fold(0usize, |acc, &p| acc | (1 << (m - 1 - p)));
    let src = rho.matrix();
    let dim = src.nrows();
    let mut out = DMatrix::zeros(dim, dim);
    for c in 0..dim {
        for r in 0..dim {
            let r2 = (r & !mask) | (c & mask);
            let c2 = (c & !mask) | (r & mask);
            out[(r2, c2)] = src[(r, c)];
        }
    }
    Ok(out)
}

/// `ln || rho^{T_B} ||_1`.
pub fn logarithmic_negativity(rho: &DensityMatrix, a: &[usize], b: &[usize]) -> Result<f64> {
    let pt = partial_transpose(rho, a, b)?;
    let norm: f64 = hermitian_eigenvalues(&pt).iter().map(|x| x.abs()).sum();
    Ok(norm.ln())
}

/// `S_A + S_B - S_{AB}`.
pub fn mutual_information(state: &SpinState, a: &[usize], b: &[usize]) -> Result<f64> {
    if a.iter().any(|s| b.contains(s)) {
        return Err(Error::InvalidPartition(format!("{a:?} and {b:?} overlap")));
    }
    let ab: Vec<usize> = a.iter().chain(b).copied().collect();
    Ok(entanglement_entropy(state, a)? + entanglement_entropy(state, b)?
        - entanglement_entropy(state, &ab)?)
}
