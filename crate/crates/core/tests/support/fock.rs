//! Brute-force Fock-space reference for small free-fermion chains.
//!
//! Occupation of site `j` is bit `j` of the basis index and
//! `c_j |n> = (-1)^{n_0 + ... + n_{j-1}} |n - e_j>`. Everything here works on
//! the full `2^L` space and never touches correlation-matrix identities.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

fn parity_below(index: usize, site: usize) -> f64 {
    if (index & ((1 << site) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Annihilation operator `c_site` on `sites` modes.
pub fn annihilation(sites: usize, site: usize) -> DMatrix<f64> {
    let dim = 1 << sites;
    let mut m = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        if n & (1 << site) != 0 {
            m[(n ^ (1 << site), n)] = parity_below(n, site);
        }
    }
    m
}

/// `sum_ij h_ij c_i^dag c_j`.
pub fn many_body_hamiltonian(h: &DMatrix<f64>) -> DMatrix<f64> {
    let l = h.nrows();
    let ops: Vec<DMatrix<f64>> = (0..l).map(|j| annihilation(l, j)).collect();
    let dim = 1 << l;
    let mut out = DMatrix::zeros(dim, dim);
    for i in 0..l {
        for j in 0..l {
            if h[(i, j)] != 0.0 {
                out += h[(i, j)] * ops[i].transpose() * &ops[j];
            }
        }
    }
    out
}

fn to_complex(m: &DMatrix<f64>) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Lowest state with exactly `particles` fermions. Panics on a degenerate
/// sector ground state, since the answer would then not be unique.
pub fn ground_state(h: &DMatrix<f64>, particles: usize) -> CVec {
    ground_state_where(h, |n| n.count_ones() as usize == particles)
}

/// Lowest state of `h` restricted to basis states accepted by `keep`.
pub fn ground_state_where(h: &DMatrix<f64>, keep: impl Fn(usize) -> bool) -> CVec {
    let l = h.nrows();
    let hmb = many_body_hamiltonian(h);
    let sector: Vec<usize> = (0..1usize << l).filter(|&n| keep(n)).collect();
    let sub = DMatrix::from_fn(sector.len(), sector.len(), |a, b| hmb[(sector[a], sector[b])]);
    let eig = sub.symmetric_eigen();
    let mut order: Vec<usize> = (0..sector.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    if order.len() > 1 {
        let gap = eig.eigenvalues[order[1]] - eig.eigenvalues[order[0]];
        assert!(gap > 1e-8, "degenerate sector ground state (gap {gap})");
    }
    let v = eig.eigenvectors.column(order[0]);
    let mut psi = CVec::zeros(1 << l);
    for (a, &n) in sector.iter().enumerate() {
        psi[n] = Complex64::new(v[a], 0.0);
    }
    psi
}

/// Grand-canonical Gibbs state `e^{-beta H} / Z` at zero chemical potential.
pub fn thermal_state(h: &DMatrix<f64>, beta: f64) -> CMat {
    let eig = many_body_hamiltonian(h).symmetric_eigen();
    let e0 = eig.eigenvalues.min();
    let w = eig.eigenvalues.map(|e| (-beta * (e - e0)).exp());
    let z = w.sum();
    let rho = &eig.eigenvectors * DMatrix::from_diagonal(&(w / z)) * eig.eigenvectors.transpose();
    to_complex(&rho)
}

/// `e^{-iHt}` for the many-body Hamiltonian of `h`.
pub fn propagator(h: &DMatrix<f64>, t: f64) -> CMat {
    let eig = many_body_hamiltonian(h).symmetric_eigen();
    let v = to_complex(&eig.eigenvectors);
    let phases = eig.eigenvalues.map(|e| Complex64::new(0.0, -e * t).exp());
    &v * DMatrix::from_diagonal(&phases) * v.adjoint()
}

pub fn evolve_pure(h: &DMatrix<f64>, psi: &CVec, t: f64) -> CVec {
    propagator(h, t) * psi
}

pub fn evolve_mixed(h: &DMatrix<f64>, rho: &CMat, t: f64) -> CMat {
    let u = propagator(h, t);
    &u * rho * u.adjoint()
}

/// Normalized `c_site^dag |psi>`.
pub fn create_pure(psi: &CVec, sites: usize, site: usize) -> CVec {
    let cd = to_complex(&annihilation(sites, site).transpose());
    let out = cd * psi;
    let norm = out.norm();
    out / Complex64::new(norm, 0.0)
}

/// Normalized `c^dag rho c`.
pub fn create_mixed(rho: &CMat, sites: usize, site: usize) -> CMat {
    let c = to_complex(&annihilation(sites, site));
    let out = c.adjoint() * rho * &c;
    let tr: Complex64 = out.diagonal().sum();
    out / tr
}

pub fn pure_to_density(psi: &CVec) -> CMat {
    psi * psi.adjoint()
}

/// `C_ij = tr(rho c_i^dag c_j)`.
pub fn correlations(rho: &CMat, sites: usize) -> CMat {
    let ops: Vec<CMat> = (0..sites).map(|j| to_complex(&annihilation(sites, j))).collect();
    CMat::from_fn(sites, sites, |i, j| {
        (rho * ops[i].adjoint() * &ops[j]).diagonal().sum()
    })
}

/// Reduced state of the first `block` sites, traced element by element.
///
/// With the string running over lower sites, operators on a leading block
/// never reach outside it, so the fermionic and qubit partial traces agree.
pub fn leading_block_rdm(rho: &CMat, sites: usize, block: usize) -> CMat {
    let da = 1 << block;
    let db = 1 << (sites - block);
    let mut out = CMat::zeros(da, da);
    for a in 0..da {
        for a2 in 0..da {
            let mut acc = Complex64::new(0.0, 0.0);
            for b in 0..db {
                acc += rho[(a + da * b, a2 + da * b)];
            }
            out[(a, a2)] = acc;
        }
    }
    out
}

pub fn von_neumann(rho: &CMat) -> f64 {
    rho.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .filter(|&&p| p > 1e-14)
        .map(|&p| -p * p.ln())
        .sum()
}

pub fn leading_block_entropy(rho: &CMat, sites: usize, block: usize) -> f64 {
    von_neumann(&leading_block_rdm(rho, sites, block))
}

/// Reduced state of the contiguous block `start..end`.
///
/// Valid for states that commute with the particle number: then every
/// parity-odd block operator has zero expectation with or without strings.
pub fn block_rdm(rho: &CMat, sites: usize, start: usize, end: usize) -> CMat {
    let k = end - start;
    let block_mask = ((1usize << k) - 1) << start;
    let dim = 1usize << sites;
    let mut out = CMat::zeros(1 << k, 1 << k);
    for x in 0..dim {
        for y in 0..dim {
            if x & !block_mask == y & !block_mask {
                out[((x & block_mask) >> start, (y & block_mask) >> start)] += rho[(x, y)];
            }
        }
    }
    out
}

pub fn block_entropy(rho: &CMat, sites: usize, start: usize, end: usize) -> f64 {
    von_neumann(&block_rdm(rho, sites, start, end))
}
