use std::fmt;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::site_bit;
use crate::error::{Error, Result};
use crate::linalg::{hermiticity_defect, sorted_hermitian_eigen, sorted_symmetric_eigen};
use crate::Boundary;

/// Largest chain handled by dense diagonalization.
pub const MAX_SITES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    /// Image of basis bit `bit` (0 = up): `(flips, amplitude)`.
    #[inline]
    fn act(self, bit: bool) -> (bool, Complex64) {
        match (self, bit) {
            (Pauli::X, _) => (true, Complex64::new(1.0, 0.0)),
            (Pauli::Y, false) => (true, Complex64::new(0.0, 1.0)),
            (Pauli::Y, true) => (true, Complex64::new(0.0, -1.0)),
            (Pauli::Z, false) => (false, Complex64::new(1.0, 0.0)),
            (Pauli::Z, true) => (false, Complex64::new(-1.0, 0.0)),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli::X => "x",
            Pauli::Y => "y",
            Pauli::Z => "z",
        };
        f.write_str(s)
    }
}

/// Product of Pauli matrices on distinct sites.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalOperator {
    factors: Vec<(usize, Pauli)>,
}

impl LocalOperator {
    pub fn single(site: usize, axis: Pauli) -> Self {
        LocalOperator {
            factors: vec![(site, axis)],
        }
    }

    pub fn product(factors: Vec<(usize, Pauli)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::param("operator", "needs at least one factor"));
        }
        let mut sites: Vec<usize> = factors.iter().map(|f| f.0).collect();
        sites.sort_unstable();
        if sites.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::param("operator", "factors must act on distinct sites"));
        }
        Ok(LocalOperator { factors })
    }

    pub fn factors(&self) -> &[(usize, Pauli)] {
        &self.factors
    }

    pub fn sites(&self) -> impl Iterator<Item = usize> + '_ {
        self.factors.iter().map(|f| f.0)
    }

    pub(crate) fn check_sites(&self, n_sites: usize) -> Result<()> {
        match self.sites().find(|&s| s >= n_sites) {
            Some(s) => Err(Error::InvalidRegion(format!(
                "operator site {s} outside chain of {n_sites}"
            ))),
            None => Ok(()),
        }
    }

    /// Image of basis state `index`: `(new_index, amplitude)`.
    #[inline]
    pub(crate) fn apply_basis(&self, n_sites: usize, index: usize) -> (usize, Complex64) {
        let mut out = index;
        let mut amp = Complex64::new(1.0, 0.0);
        for &(site, axis) in &self.factors {
            let bit = site_bit(n_sites, site);
            let (flip, a) = axis.act(index & bit != 0);
            if flip {
                out ^= bit;
            }
            amp *= a;
        }
        (out, amp)
    }

    /// `O psi` on an `n_sites` register.
    pub fn apply(&self, n_sites: usize, psi: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::zeros(psi.len());
        for (b, &amp) in psi.iter().enumerate() {
            let (b2, a) = self.apply_basis(n_sites, b);
            out[b2] += a * amp;
        }
        out
    }

    /// Dense `2^L x 2^L` matrix.
    pub fn matrix(&self, n_sites: usize) -> DMatrix<Complex64> {
        let dim = 1usize << n_sites;
        let mut m = DMatrix::zeros(dim, dim);
        for b in 0..dim {
            let (b2, a) = self.apply_basis(n_sites, b);
            m[(b2, b)] += a;
        }
        m
    }
}

impl fmt::Display for LocalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (site, axis)) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "s{axis}_{site}")?;
        }
        Ok(())
    }
}

/// Couplings of `H = -J sum zz - g sum x - hz sum z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsingParams {
    pub sites: usize,
    pub coupling: f64,
    pub transverse_field: f64,
    pub longitudinal_field: f64,
    pub boundary: Boundary,
}

impl IsingParams {
    /// Non-integrable point (J, g, hz) = (1, 1.05, 0.5).
    pub fn chaotic(sites: usize) -> Self {
        IsingParams {
            sites,
            coupling: 1.0,
            transverse_field: 1.05,
            longitudinal_field: 0.5,
            boundary: Boundary::Open,
        }
    }

    /// Same transverse field with the longitudinal field switched off.
    pub fn integrable(sites: usize) -> Self {
        IsingParams {
            longitudinal_field: 0.0,
            ..IsingParams::chaotic(sites)
        }
    }
}

/// Dense Hamiltonian on `2^L` states with a lazily computed, shared
/// eigendecomposition.
#[derive(Debug)]
pub struct SpinHamiltonian {
    n_sites: usize,
    params: Option<IsingParams>,
    matrix: DMatrix<Complex64>,
    eigen: OnceLock<(DVector<f64>, DMatrix<Complex64>)>,
}

impl SpinHamiltonian {
    /// Wraps a Hermitian matrix acting on `n_sites` spins.
    pub fn from_matrix(n_sites: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        check_size(n_sites)?;
        let dim = 1usize << n_sites;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        let defect = hermiticity_defect(&matrix);
        if defect > 1e-12 {
            return Err(Error::param("H", format!("not Hermitian (defect {defect:e})")));
        }
        Ok(SpinHamiltonian {
            n_sites,
            params: None,
            matrix,
            eigen: OnceLock::new(),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn params(&self) -> Option<&IsingParams> {
        self.params.as_ref()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Ascending energies and eigenvectors as columns.
    pub fn eigen(&self) -> &(DVector<f64>, DMatrix<Complex64>) {
        self.eigen.get_or_init(|| {
            if self.matrix.iter().all(|z| z.im == 0.0) {
                let (vals, vecs) = sorted_symmetric_eigen(self.matrix.map(|z| z.re));
                (vals, vecs.map(|x| Complex64::new(x, 0.0)))
            } else {
                sorted_hermitian_eigen(self.matrix.clone())
            }
        })
    }

    pub fn energies(&self) -> &DVector<f64> {
        &self.eigen().0
    }

    pub fn ground_state(&self) -> super::ManyBodyState {
        let v = self.eigen().1.column(0).into_owned();
        super::ManyBodyState::from_trusted(self.n_sites, v)
    }
}

fn check_size(n_sites: usize) -> Result<()> {
    if n_sites == 0 {
        return Err(Error::InvalidSize("spin chain needs at least one site".into()));
    }
    if n_sites > MAX_SITES {
        return Err(Error::SizeCap {
            requested: n_sites,
            cap: MAX_SITES,
        });
    }
    Ok(())
}

/// Transverse-field Ising chain in a longitudinal field.
pub fn build_spin_hamiltonian(params: IsingParams) -> Result<SpinHamiltonian> {
    let n = params.sites;
    check_size(n)?;
    for (name, v) in [
        ("J", params.coupling),
        ("g", params.transverse_field),
        ("hz", params.longitudinal_field),
    ] {
        if !v.is_finite() {
            return Err(Error::param(name, "must be finite"));
        }
    }
    let mut bonds: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|j| (j, j + 1)).collect();
    if params.boundary == Boundary::Periodic && n > 2 {
        bonds.push((n - 1, 0));
    }
    let dim = 1usize << n;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for b in 0..dim {
        let z = |site: usize| if b & site_bit(n, site) == 0 { 1.0 } else { -1.0 };
        let zz: f64 = bonds.iter().map(|&(i, j)| z(i) * z(j)).sum();
        let zsum: f64 = (0..n).map(z).sum();
        m[(b, b)] = Complex64::new(-params.coupling * zz - params.longitudinal_field * zsum, 0.0);
        if params.transverse_field != 0.0 {
            for site in 0..n {
                m[(b ^ site_bit(n, site), b)] += Complex64::new(-params.transverse_field, 0.0);
            }
        }
    }
    Ok(SpinHamiltonian {
        n_sites: n,
        params: Some(params),
        matrix: m,
        eigen: OnceLock::new(),
    })
}
