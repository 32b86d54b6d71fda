//! Gaussian-state engine for free-fermion hopping chains.
//!
//! States are carried entirely by the two-point function `C_ij = <c_i^dag c_j>`,
//! so chains of a few hundred sites are cheap. Evolution follows
//! `C(t) = e^{iht} C e^{-iht}`.

use std::ops::Range;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    binary_entropy, hermiticity_defect, hermitian_eigenvalues, real_congruence,
    real_congruence_transposed, sorted_symmetric_eigen, DEGENERACY_TOL,
};
use crate::series::{check_strictly_increasing, TimeSeries};
use crate::Boundary;

/// Single-particle hopping Hamiltonian with unit hopping amplitude.
#[derive(Debug, Clone)]
pub struct SingleParticleHamiltonian {
    boundary: Boundary,
    matrix: DMatrix<f64>,
    spectrum: OnceLock<(DVector<f64>, DMatrix<f64>)>,
}

impl SingleParticleHamiltonian {
    /// Wraps an arbitrary real symmetric matrix.
    pub fn from_matrix(matrix: DMatrix<f64>, boundary: Boundary) -> Result<Self> {
        let n = matrix.nrows();
        if n < 2 || matrix.ncols() != n {
            return Err(Error::InvalidSize(format!(
                "hopping matrix must be square with at least 2 sites, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::param("h", "entries must be finite"));
        }
        for i in 0..n {
            for j in 0..i {
                if matrix[(i, j)] != matrix[(j, i)] {
                    return Err(Error::param("h", format!("not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(SingleParticleHamiltonian {
            boundary,
            matrix,
            spectrum: OnceLock::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Mode energies (ascending) and the matching orthonormal modes as columns.
    /// Computed once and shared afterwards.
    pub fn spectrum(&self) -> &(DVector<f64>, DMatrix<f64>) {
        self.spectrum
            .get_or_init(|| sorted_symmetric_eigen(self.matrix.clone()))
    }

    /// Copy with every bond between `[0, cut)` and `[cut, L)` removed.
    pub fn decoupled_at(&self, cut: usize) -> Result<Self> {
        let n = self.len();
        if cut == 0 || cut >= n {
            return Err(Error::param("cut", format!("must lie in 1..{n}, got {cut}")));
        }
        let mut m = self.matrix.clone();
        for i in 0..cut {
            for j in cut..n {
                m[(i, j)] = 0.0;
                m[(j, i)] = 0.0;
            }
        }
        SingleParticleHamiltonian::from_matrix(m, self.boundary)
    }
}

/// Nearest-neighbour chain with `h_{i,i+1} = -1` and on-site `potentials`.
pub fn build_chain(
    len: usize,
    boundary: Boundary,
    potentials: &[f64],
) -> Result<SingleParticleHamiltonian> {
    if len < 2 {
        return Err(Error::InvalidSize(format!("chain needs L >= 2, got {len}")));
    }
    if potentials.len() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            found: potentials.len(),
        });
    }
    let mut m = DMatrix::<f64>::zeros(len, len);
    for (i, &v) in potentials.iter().enumerate() {
        m[(i, i)] = v;
    }
    for i in 0..len - 1 {
        m[(i, i + 1)] = -1.0;
        m[(i + 1, i)] = -1.0;
    }
    // L = 2 has a single bond; the wrap would only repeat it.
    if boundary == Boundary::Periodic && len > 2 {
        m[(0, len - 1)] = -1.0;
        m[(len - 1, 0)] = -1.0;
    }
    SingleParticleHamiltonian::from_matrix(m, boundary)
}

/// Uniform chain with no on-site potential.
pub fn uniform_chain(len: usize, boundary: Boundary) -> Result<SingleParticleHamiltonian> {
    build_chain(len, boundary, &vec![0.0; len])
}

/// Two-point function `C_ij = <c_i^dag c_j>` of a Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    matrix: DMatrix<Complex64>,
}

impl CorrelationMatrix {
    /// Validates Hermiticity (1e-10) and that occupations lie in [0, 1] up to 1e-9.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::InvalidSize(format!(
                "correlation matrix must be square and nonempty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > 1e-10 {
            return Err(Error::param("C", format!("not Hermitian (defect {defect:e})")));
        }
        let eig = hermitian_eigenvalues(&matrix);
        if eig[0] < -1e-9 || eig[eig.len() - 1] > 1.0 + 1e-9 {
            return Err(Error::param(
                "C",
                format!("occupations outside [0, 1]: [{}, {}]", eig[0], eig[eig.len() - 1]),
            ));
        }
        Ok(CorrelationMatrix { matrix })
    }

    fn from_trusted(matrix: DMatrix<Complex64>) -> Self {
        CorrelationMatrix { matrix }
    }

    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.nrows() == 0
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    /// Total particle number `tr C`.
    pub fn particle_number(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    /// Ascending occupation numbers of the natural orbitals.
    pub fn occupations(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// True when `C^2 = C` to `tol`, i.e. the state is pure.
    pub fn is_projector(&self, tol: f64) -> bool {
        let sq = &self.matrix * &self.matrix;
        (sq - &self.matrix).iter().all(|z| z.norm() <= tol)
    }

    /// Restriction to a contiguous block of sites.
    pub fn block(&self, sites: Range<usize>) -> DMatrix<Complex64> {
        let n = sites.len();
        self.matrix
            .view((sites.start, sites.start), (n, n))
            .into_owned()
    }
}

/// Which single-particle modes a ground state occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Filling {
    /// The lowest `floor(L/2)` modes.
    Half,
    /// Every mode with strictly negative energy.
    NegativeModes,
}

fn mode_projector(modes: &DMatrix<f64>, occupied: usize) -> DMatrix<Complex64> {
    let n = modes.nrows();
    let filled = modes.columns(0, occupied);
    let p = filled * filled.transpose();
    DMatrix::from_fn(n, n, |i, j| Complex64::new(p[(i, j)], 0.0))
}

/// Pure Gaussian ground state `C = V P V^dag`.
///
/// Degenerate levels at the Fermi energy are filled in the order returned by
/// [`crate::linalg::sorted_symmetric_eigen`], which is deterministic.
pub fn ground_state_correlations(
    ham: &SingleParticleHamiltonian,
    filling: Filling,
) -> CorrelationMatrix {
    let (energies, modes) = ham.spectrum();
    let occupied = match filling {
        Filling::Half => ham.len() / 2,
        Filling::NegativeModes => energies.iter().filter(|&&e| e < -DEGENERACY_TOL).count(),
    };
    CorrelationMatrix::from_trusted(mode_projector(modes, occupied))
}

/// Fermi-Dirac factor `1 / (1 + e^{beta e})`, evaluated without overflow.
pub fn fermi_factor(beta: f64, energy: f64) -> f64 {
    let x = beta * energy;
    if x > 0.0 {
        let w = (-x).exp();
        w / (1.0 + w)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Grand-canonical Gibbs state at zero chemical potential.
pub fn thermal_correlations(
    ham: &SingleParticleHamiltonian,
    beta: f64,
) -> Result<CorrelationMatrix> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::param("beta", format!("must be finite and >= 0, got {beta}")));
    }
    let (energies, modes) = ham.spectrum();
    let n = ham.len();
    let weights: Vec<f64> = energies.iter().map(|&e| fermi_factor(beta, e)).collect();
    let mut scaled = modes.clone();
    for (k, w) in weights.iter().enumerate() {
        scaled.column_mut(k).scale_mut(*w);
    }
    let c = scaled * modes.transpose();
    Ok(CorrelationMatrix::from_trusted(DMatrix::from_fn(n, n, |i, j| {
        Complex64::new(c[(i, j)], 0.0)
    })))
}

/// Correlations of `c_{x0}^dag |state>` after normalization (Wick update).
pub fn apply_local_creation(c: &CorrelationMatrix, x0: usize) -> Result<CorrelationMatrix> {
    let n = c.len();
    if x0 >= n {
        return Err(Error::InvalidRegion(format!("site {x0} outside chain of {n}")));
    }
    let occ = c.matrix[(x0, x0)].re;
    if occ >= 1.0 - 1e-9 {
        return Err(Error::AnnihilatedState(format!(
            "site {x0} is already occupied (n = {occ})"
        )));
    }
    let norm = 1.0 - occ;
    let delta = |i: usize| if i == x0 { 1.0 } else { 0.0 };
    let u: Vec<Complex64> = (0..n).map(|i| delta(i) - c.matrix[(i, x0)]).collect();
    let w: Vec<Complex64> = (0..n).map(|j| delta(j) - c.matrix[(x0, j)]).collect();
    let m = DMatrix::from_fn(n, n, |i, j| c.matrix[(i, j)] + u[i] * w[j] / norm);
    Ok(CorrelationMatrix::from_trusted(m))
}

fn check_dims(c: &CorrelationMatrix, ham: &SingleParticleHamiltonian) -> Result<()> {
    if c.len() != ham.len() {
        return Err(Error::DimensionMismatch {
            expected: ham.len(),
            found: c.len(),
        });
    }
    Ok(())
}

/// `C` expressed in the eigenmode basis of `ham`.
fn to_mode_basis(c: &CorrelationMatrix, ham: &SingleParticleHamiltonian) -> DMatrix<Complex64> {
    let (_, modes) = ham.spectrum();
    real_congruence_transposed(modes, &c.matrix)
}

fn dephase(mode_c: &DMatrix<Complex64>, energies: &DVector<f64>, t: f64) -> DMatrix<Complex64> {
    let n = mode_c.nrows();
    let phases: Vec<Complex64> = energies
        .iter()
        .map(|&e| Complex64::from_polar(1.0, e * t))
        .collect();
    DMatrix::from_fn(n, n, |a, b| mode_c[(a, b)] * phases[a] * phases[b].conj())
}

/// `C(t) = e^{iht} C e^{-iht}`.
pub fn evolve(
    c: &CorrelationMatrix,
    ham: &SingleParticleHamiltonian,
    t: f64,
) -> Result<CorrelationMatrix> {
    check_dims(c, ham)?;
    if t == 0.0 {
        return Ok(c.clone());
    }
    let (energies, modes) = ham.spectrum();
    let rotated = dephase(&to_mode_basis(c, ham), energies, t);
    Ok(CorrelationMatrix::from_trusted(real_congruence(modes, &rotated)))
}

fn check_block(n: usize, sites: &Range<usize>) -> Result<()> {
    if sites.is_empty() {
        return Err(Error::InvalidRegion("empty block".into()));
    }
    if sites.end > n {
        return Err(Error::InvalidRegion(format!(
            "block {}..{} exceeds chain of {n}",
            sites.start, sites.end
        )));
    }
    Ok(())
}

fn block_entropy(block: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(block)
        .into_iter()
        .map(binary_entropy)
        .sum()
}

/// Entanglement entropy (nats) of a contiguous block: `sum_k h(lambda_k)`.
pub fn subsystem_entropy(c: &CorrelationMatrix, sites: Range<usize>) -> Result<f64> {
    check_block(c.len(), &sites)?;
    Ok(block_entropy(&c.block(sites)))
}

/// Lattice quench protocols.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "protocol", rename_all = "snake_case")]
pub enum QuenchSpec {
    /// Each half `[0, cut)` and `[cut, L)` starts in its own half-filled ground
    /// state; the halves are then joined.
    JoinHalves { cut: usize },
    /// `c^dag_site` applied to the half-filled ground state.
    LocalCreation { site: usize },
    /// `c^dag_site` applied to the Gibbs state at inverse temperature `beta`.
    ThermalBackgroundPlusCreation { site: usize, beta: f64 },
}

impl QuenchSpec {
    pub fn validate(&self, len: usize) -> Result<()> {
        match *self {
            QuenchSpec::JoinHalves { cut } => {
                if cut == 0 || cut >= len {
                    return Err(Error::param("cut", format!("must lie in 1..{len}, got {cut}")));
                }
            }
            QuenchSpec::LocalCreation { site } => {
                if site >= len {
                    return Err(Error::param("site", format!("must lie in 0..{len}, got {site}")));
                }
            }
            QuenchSpec::ThermalBackgroundPlusCreation { site, beta } => {
                if site >= len {
                    return Err(Error::param("site", format!("must lie in 0..{len}, got {site}")));
                }
                if !beta.is_finite() || beta < 0.0 {
                    return Err(Error::param("beta", format!("must be finite and >= 0, got {beta}")));
                }
            }
        }
        Ok(())
    }
}

fn half_filled_block(h: &DMatrix<f64>) -> DMatrix<Complex64> {
    let n = h.nrows();
    let (_, modes) = sorted_symmetric_eigen(h.clone());
    mode_projector(&modes, n / 2)
}

/// Post-quench state at `t = 0`; it is then evolved with `ham` itself.
pub fn prepare_quench(
    ham: &SingleParticleHamiltonian,
    quench: &QuenchSpec,
) -> Result<CorrelationMatrix> {
    let n = ham.len();
    quench.validate(n)?;
    match *quench {
        QuenchSpec::JoinHalves { cut } => {
            let h = ham.matrix();
            let left = half_filled_block(&h.view((0, 0), (cut, cut)).into_owned());
            let right = half_filled_block(&h.view((cut, cut), (n - cut, n - cut)).into_owned());
            let mut c = DMatrix::<Complex64>::zeros(n, n);
            c.view_mut((0, 0), (cut, cut)).copy_from(&left);
            c.view_mut((cut, cut), (n - cut, n - cut)).copy_from(&right);
            Ok(CorrelationMatrix::from_trusted(c))
        }
        QuenchSpec::LocalCreation { site } => {
            apply_local_creation(&ground_state_correlations(ham, Filling::Half), site)
        }
        QuenchSpec::ThermalBackgroundPlusCreation { site, beta } => {
            apply_local_creation(&thermal_correlations(ham, beta)?, site)
        }
    }
}

/// Block entropy after a quench and its growth `S(t) - S(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyCurve {
    pub entropy: TimeSeries,
    pub delta: TimeSeries,
    /// `S(0)` of the post-quench state, whether or not `t = 0` is sampled.
    pub initial_entropy: f64,
}

/// Applies `quench`, evolves with `ham` and records the block entropy.
///
/// Time points are evaluated in parallel; each is computed independently, so
/// the result does not depend on the schedule.
pub fn entropy_time_series(
    ham: &SingleParticleHamiltonian,
    quench: &QuenchSpec,
    sites: Range<usize>,
    times: &[f64],
) -> Result<EntropyCurve> {
    check_strictly_increasing(times)?;
    check_block(ham.len(), &sites)?;
    let c0 = prepare_quench(ham, quench)?;
    let initial_entropy = subsystem_entropy(&c0, sites.clone())?;

    let (energies, modes) = ham.spectrum();
    let mode_c = to_mode_basis(&c0, ham);
    let block_modes = modes.rows(sites.start, sites.len()).into_owned();

    let values: Vec<f64> = times
        .par_iter()
        .map(|&t| {
            if t == 0.0 {
                return initial_entropy;
            }
            let rotated = dephase(&mode_c, energies, t);
            block_entropy(&real_congruence(&block_modes, &rotated))
        })
        .collect();

    let entropy = TimeSeries::new(times.to_vec(), values.clone(), "entropy", "nats")?;
    let delta = TimeSeries::new(
        times.to_vec(),
        values.iter().map(|s| s - initial_entropy).collect(),
        "delta_entropy",
        "nats",
    )?;
    Ok(EntropyCurve {
        entropy,
        delta,
        initial_entropy,
    })
}
