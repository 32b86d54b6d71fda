use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::hamiltonian::{LocalOperator, SpinHamiltonian, MAX_SITES};
use crate::error::{Error, Result};
use crate::linalg::{complex_matmul, hermiticity_defect, hermitian_eigenvalues, trace};

/// Normalized pure state of an `L`-site register.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyBodyState {
    n_sites: usize,
    amplitudes: DVector<Complex64>,
}

impl ManyBodyState {
    /// Validates the dimension and unit norm (1e-10).
    pub fn new(n_sites: usize, amplitudes: DVector<Complex64>) -> Result<Self> {
        if n_sites == 0 || n_sites > MAX_SITES {
            return Err(Error::SizeCap {
                requested: n_sites,
                cap: MAX_SITES,
            });
        }
        if amplitudes.len() != 1 << n_sites {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_sites,
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::param("psi", format!("norm is {norm}, expected 1")));
        }
        Ok(ManyBodyState {
            n_sites,
            amplitudes,
        })
    }

    /// Normalizes `amplitudes` first.
    pub fn normalized(n_sites: usize, amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm <= 1e-12 {
            return Err(Error::AnnihilatedState("zero vector".into()));
        }
        ManyBodyState::new(n_sites, amplitudes.unscale(norm))
    }

    pub(crate) fn from_trusted(n_sites: usize, amplitudes: DVector<Complex64>) -> Self {
        ManyBodyState {
            n_sites,
            amplitudes,
        }
    }

    /// Computational basis state; `bits[j]` true means site `j` is down.
    pub fn product(bits: &[bool]) -> Result<Self> {
        let n = bits.len();
        if n == 0 || n > MAX_SITES {
            return Err(Error::SizeCap {
                requested: n,
                cap: MAX_SITES,
            });
        }
        let index = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(0usize, |acc, (j, _)| acc | super::site_bit(n, j));
        let mut v = DVector::zeros(1 << n);
        v[index] = Complex64::new(1.0, 0.0);
        Ok(ManyBodyState::from_trusted(n, v))
    }

    /// All spins up.
    pub fn all_up(n_sites: usize) -> Result<Self> {
        ManyBodyState::product(&vec![false; n_sites])
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn overlap(&self, other: &ManyBodyState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn to_density_matrix(&self) -> DensityMatrix {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix::from_trusted((0..self.n_sites).collect(), m)
    }
}

/// Density matrix over a sorted list of site labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    sites: Vec<usize>,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Checks Hermiticity and unit trace (1e-10) and positivity (-1e-9).
    pub fn new(sites: Vec<usize>, matrix: DMatrix<Complex64>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidRegion("density matrix with no sites".into()));
        }
        if sites.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidRegion("site labels must be strictly increasing".into()));
        }
        let dim = 1usize << sites.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        let defect = hermiticity_defect(&matrix);
        if defect > 1e-10 {
            return Err(Error::param("rho", format!("not Hermitian (defect {defect:e})")));
        }
        let tr = trace(&matrix);
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::param("rho", format!("trace is {tr}")));
        }
        let min = hermitian_eigenvalues(&matrix)[0];
        if min < -1e-9 {
            return Err(Error::param("rho", format!("negative eigenvalue {min}")));
        }
        Ok(DensityMatrix { sites, matrix })
    }

    pub(crate) fn from_trusted(sites: Vec<usize>, matrix: DMatrix<Complex64>) -> Self {
        DensityMatrix { sites, matrix }
    }

    /// `I / 2^L` on sites `0..n_sites`.
    pub fn maximally_mixed(n_sites: usize) -> Self {
        let dim = 1usize << n_sites;
        let m = DMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0);
        DensityMatrix::from_trusted((0..n_sites).collect(), m)
    }

    /// `self ⊗ other`; `other`'s sites must all come after `self`'s.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        if self.sites.last() >= other.sites.first() {
            return Err(Error::InvalidPartition(
                "tensor factors must be ordered and disjoint".into(),
            ));
        }
        let sites = self.sites.iter().chain(&other.sites).copied().collect();
        Ok(DensityMatrix::from_trusted(sites, self.matrix.kronecker(&other.matrix)))
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    fn covers_register(&self) -> bool {
        self.sites.iter().enumerate().all(|(k, &s)| k == s)
    }
}

/// Either kind of state accepted by the quench and entanglement routines.
#[derive(Debug, Clone, PartialEq)]
pub enum SpinState {
    Pure(ManyBodyState),
    Mixed(DensityMatrix),
}

impl SpinState {
    pub fn n_sites(&self) -> usize {
        match self {
            SpinState::Pure(p) => p.n_sites(),
            SpinState::Mixed(m) => m.n_sites(),
        }
    }
}

impl From<ManyBodyState> for SpinState {
    fn from(p: ManyBodyState) -> Self {
        SpinState::Pure(p)
    }
}

impl From<DensityMatrix> for SpinState {
    fn from(m: DensityMatrix) -> Self {
        SpinState::Mixed(m)
    }
}

fn check_register(h: &SpinHamiltonian, n_sites: usize) -> Result<()> {
    if h.n_sites() != n_sites {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: 1 << n_sites,
        });
    }
    Ok(())
}

/// Propagator `e^{-iHt}` built from the cached eigendecomposition.
pub(crate) fn propagator(h: &SpinHamiltonian, t: f64) -> DMatrix<Complex64> {
    let (energies, vectors) = h.eigen();
    let mut scaled = vectors.clone();
    for (k, &e) in energies.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -e * t);
        scaled.column_mut(k).iter_mut().for_each(|z| *z *= phase);
    }
    complex_matmul(&scaled, &vectors.adjoint())
}

/// `psi(t) = e^{-iHt} psi0`.
pub fn evolve_state(h: &SpinHamiltonian, psi0: &ManyBodyState, t: f64) -> Result<ManyBodyState> {
    check_register(h, psi0.n_sites)?;
    if t == 0.0 {
        return Ok(psi0.clone());
    }
    let (energies, vectors) = h.eigen();
    let mut coeffs = vectors.ad_mul(&psi0.amplitudes);
    for (c, &e) in coeffs.iter_mut().zip(energies.iter()) {
        *c *= Complex64::from_polar(1.0, -e * t);
    }
    Ok(ManyBodyState::from_trusted(psi0.n_sites, vectors * coeffs))
}

/// `rho(t) = e^{-iHt} rho e^{iHt}` for a density matrix on the whole register.
pub fn evolve_density(h: &SpinHamiltonian, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if !rho.covers_register() {
        return Err(Error::InvalidRegion(
            "time evolution needs the density matrix of the full chain".into(),
        ));
    }
    check_register(h, rho.n_sites())?;
    if t == 0.0 {
        return Ok(rho.clone());
    }
    let u = propagator(h, t);
    let m = complex_matmul(&complex_matmul(&u, &rho.matrix), &u.adjoint());
    Ok(DensityMatrix::from_trusted(rho.sites.clone(), m))
}

/// Gibbs state `e^{-beta H} / Z`.
pub fn thermal_density_matrix(h: &SpinHamiltonian, beta: f64) -> Result<DensityMatrix> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::param("beta", format!("must be finite and >= 0, got {beta}")));
    }
    let n = h.n_sites();
    if beta == 0.0 {
        return Ok(DensityMatrix::maximally_mixed(n));
    }
    let (energies, vectors) = h.eigen();
    let e0 = energies[0];
    let weights: Vec<f64> = energies.iter().map(|&e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let mut scaled = vectors.clone();
    for (k, w) in weights.iter().enumerate() {
        scaled.column_mut(k).iter_mut().for_each(|x| *x *= w / z);
    }
    let m = scaled * vectors.adjoint();
    Ok(DensityMatrix::from_trusted((0..n).collect(), m))
}

/// `O psi / |O psi|` or `O rho O^dag / tr(.)`.
pub fn operator_quench(state: &SpinState, op: &LocalOperator) -> Result<SpinState> {
    match state {
        SpinState::Pure(psi) => {
            op.check_sites(psi.n_sites)?;
            let out = op.apply(psi.n_sites, &psi.amplitudes);
            let norm = out.norm();
            if norm <= 1e-12 {
                return Err(Error::AnnihilatedState(format!("|{op} psi| = {norm:e}")));
            }
            Ok(SpinState::Pure(ManyBodyState::from_trusted(
                psi.n_sites,
                out.unscale(norm),
            )))
        }
        SpinState::Mixed(rho) => {
            if !rho.covers_register() {
                return Err(Error::InvalidRegion(
                    "operator quench needs the density matrix of the full chain".into(),
                ));
            }
            let n = rho.n_sites();
            op.check_sites(n)?;
            let o = op.matrix(n);
            let m = &o * &rho.matrix * o.adjoint();
            let tr = trace(&m).re;
            if tr <= 1e-12 {
                return Err(Error::AnnihilatedState(format!("tr({op} rho {op}^dag) = {tr:e}")));
            }
            Ok(SpinState::Mixed(DensityMatrix::from_trusted(
                rho.sites.clone(),
                m.unscale(tr),
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{build_spin_hamiltonian, von_neumann_entropy, IsingParams, Pauli};
    use crate::Boundary;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_time_is_identity() {
        let h = build_spin_hamiltonian(IsingParams::chaotic(3)).unwrap();
        let psi = ManyBodyState::all_up(3).unwrap();
        assert_eq!(evolve_state(&h, &psi, 0.0).unwrap(), psi);
    }

    #[test]
    fn eigenstates_are_stationary() {
        let h = build_spin_hamiltonian(IsingParams::chaotic(4)).unwrap();
        let (_, vecs) = h.eigen();
        for n in [0, 5, 15] {
            let psi = ManyBodyState::new(4, vecs.column(n).into_owned()).unwrap();
            let out = evolve_state(&h, &psi, 2.7).unwrap();
            assert_abs_diff_eq!(psi.overlap(&out).norm(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn thermal_state_limits() {
        let h = build_spin_hamiltonian(IsingParams::chaotic(4)).unwrap();
        let rho = thermal_density_matrix(&h, 0.0).unwrap();
        assert_eq!(rho, DensityMatrix::maximally_mixed(4));
        let cold = thermal_density_matrix(&h, 200.0).unwrap();
        let gs = h.ground_state();
        let overlap = gs.amplitudes().dotc(&(cold.matrix() * gs.amplitudes())).re;
        assert!(overlap >= 1.0 - 1e-6);
        assert!(thermal_density_matrix(&h, -1.0).is_err());
    }

    #[test]
    fn single_spin_gibbs_weights() {
        let h = build_spin_hamiltonian(IsingParams {
            sites: 1,
            coupling: 0.0,
            transverse_field: 1.0,
            longitudinal_field: 0.0,
            boundary: Boundary::Open,
        })
        .unwrap();
        let rho = thermal_density_matrix(&h, 1.0).unwrap();
        let p = rho.eigenvalues();
        let z = 1f64.exp() + (-1f64).exp();
        assert_abs_diff_eq!(p[0], (-1f64).exp() / z, epsilon = 1e-12);
        assert_abs_diff_eq!(p[1], 1f64.exp() / z, epsilon = 1e-12);
        assert_abs_diff_eq!(trace(rho.matrix()).re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn z_on_product_eigenstate() {
        let psi = ManyBodyState::product(&[false, true, false]).unwrap();
        let out = operator_quench(&psi.clone().into(), &LocalOperator::single(1, Pauli::Z)).unwrap();
        let SpinState::Pure(out) = out else { panic!() };
        assert_abs_diff_eq!(out.overlap(&psi).norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn x_flips_one_spin() {
        let psi = ManyBodyState::all_up(4).unwrap();
        let out = operator_quench(&psi.into(), &LocalOperator::single(2, Pauli::X)).unwrap();
        let SpinState::Pure(out) = out else { panic!() };
        assert_eq!(out, ManyBodyState::product(&[false, false, true, false]).unwrap());
        let rho = crate::spin::reduced_density_matrix(&out.into(), &[0, 1, 2]).unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&rho), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn mixed_quench_renormalizes() {
        let h = build_spin_hamiltonian(IsingParams::chaotic(8)).unwrap();
        let rho = thermal_density_matrix(&h, 1.0).unwrap();
        let out = operator_quench(&rho.into(), &LocalOperator::single(4, Pauli::Z)).unwrap();
        let SpinState::Mixed(out) = out else { panic!() };
        assert_abs_diff_eq!(trace(out.matrix()).re, 1.0, epsilon = 1e-12);
        assert!(DensityMatrix::new(out.sites().to_vec(), out.matrix().clone()).is_ok());
    }

    #[test]
    fn annihilation_detected() {
        // (1 + Z)/2-like annihilation is not a Pauli product; use a zero state instead
        let zero = DVector::<Complex64>::zeros(4);
        assert!(matches!(
            ManyBodyState::normalized(2, zero),
            Err(Error::AnnihilatedState(_))
        ));
    }

    #[test]
    fn out_of_range_operator() {
        let psi = ManyBodyState::all_up(2).unwrap();
        assert!(operator_quench(&psi.into(), &LocalOperator::single(5, Pauli::X)).is_err());
    }

    #[test]
    fn density_validation() {
        let bad = DMatrix::<Complex64>::identity(2, 2);
        assert!(DensityMatrix::new(vec![0], bad).is_err());
        let ok = DMatrix::<Complex64>::identity(2, 2) * Complex64::new(0.5, 0.0);
        assert!(DensityMatrix::new(vec![0], ok.clone()).is_ok());
        assert!(DensityMatrix::new(vec![], ok).is_err());
    }
}
