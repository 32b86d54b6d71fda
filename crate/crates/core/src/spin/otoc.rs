use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hamiltonian::{LocalOperator, SpinHamiltonian};
use super::state::{DensityMatrix, ManyBodyState};
use crate::error::{Error, Result};
use crate::linalg::{complex_matmul, split_complex, split_matmul};
use crate::series::{check_strictly_increasing, TimeSeries};

/// State in which `<W(t) V W(t) V>` is evaluated.
#[derive(Debug, Clone, Copy)]
pub enum OtocState<'a> {
    /// `tr(.) / 2^L`.
    InfiniteTemperature,
    /// Gibbs state of the same Hamiltonian.
    Thermal(f64),
    Density(&'a DensityMatrix),
    Pure(&'a ManyBodyState),
}

/// Complex OTOC samples; `same_site` marks `W` and `V` sharing a site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OtocSeries {
    pub times: Vec<f64>,
    pub values: Vec<Complex64>,
    pub same_site: bool,
}

impl OtocSeries {
    pub fn real_part(&self) -> Result<TimeSeries> {
        TimeSeries::new(
            self.times.clone(),
            self.values.iter().map(|z| z.re).collect(),
            "otoc_re",
            "",
        )
    }

    pub fn imag_part(&self) -> Result<TimeSeries> {
        TimeSeries::new(
            self.times.clone(),
            self.values.iter().map(|z| z.im).collect(),
            "otoc_im",
            "",
        )
    }
}

enum Weight {
    Diagonal(Vec<f64>),
    Full(DMatrix<Complex64>),
    Vector(DVector<Complex64>),
}

/// `F(t) = <W(t) V W(t) V>` with `W(t) = e^{iHt} W e^{-iHt}`.
///
/// Everything is rotated into the energy eigenbasis once; each time point then
/// only needs phases and one product.
pub fn otoc(
    h: &SpinHamiltonian,
    w: &LocalOperator,
    v: &LocalOperator,
    state: OtocState<'_>,
    times: &[f64],
) -> Result<OtocSeries> {
    let n = h.n_sites();
    w.check_sites(n)?;
    v.check_sites(n)?;
    check_strictly_increasing(times)?;
    let same_site = w.sites().any(|s| v.sites().any(|r| r == s));

    let (energies, vectors) = h.eigen();
    let dim = h.dim();
    let w_e = vectors.ad_mul(&(w.matrix(n) * vectors));
    let v_e = vectors.ad_mul(&(v.matrix(n) * vectors));

    let weight = match state {
        OtocState::InfiniteTemperature => Weight::Diagonal(vec![1.0 / dim as f64; dim]),
        OtocState::Thermal(beta) => {
            if !beta.is_finite() || beta < 0.0 {
                return Err(Error::param("beta", format!("must be finite and >= 0, got {beta}")));
            }
            let e0 = energies[0];
            let raw: Vec<f64> = energies.iter().map(|&e| (-beta * (e - e0)).exp()).collect();
            let z: f64 = raw.iter().sum();
            Weight::Diagonal(raw.into_iter().map(|p| p / z).collect())
        }
        OtocState::Density(rho) => {
            if rho.n_sites() != n || rho.sites().iter().enumerate().any(|(k, &s)| k != s) {
                return Err(Error::InvalidRegion(
                    "OTOC needs the density matrix of the full chain".into(),
                ));
            }
            Weight::Full(vectors.ad_mul(&(rho.matrix() * vectors)))
        }
        OtocState::Pure(psi) => {
            if psi.n_sites() != n {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: psi.amplitudes().len(),
                });
            }
            Weight::Vector(vectors.ad_mul(psi.amplitudes()))
        }
    };

    let (v_re, v_im) = split_complex(&v_e);
    let values: Vec<Complex64> = times
        .par_iter()
        .map(|&t| {
            let phases: Vec<Complex64> = energies
                .iter()
                .map(|&e| Complex64::from_polar(1.0, e * t))
                .collect();
            let w_t = DMatrix::from_fn(dim, dim, |a, b| w_e[(a, b)] * phases[a] * phases[b].conj());
            let (w_re, w_im) = split_complex(&w_t);
            match &weight {
                Weight::Vector(psi) => {
                    let x = &v_e * psi;
                    let x = &w_t * x;
                    let x = &v_e * x;
                    let x = &w_t * x;
                    psi.dotc(&x)
                }
                Weight::Diagonal(p) => {
                    let x = split_matmul((&w_re, &w_im), (&v_re, &v_im));
                    (0..dim)
                        .map(|a| {
                            let row_dot: Complex64 =
                                (0..dim).map(|b| x[(a, b)] * x[(b, a)]).sum();
                            row_dot * p[a]
                        })
                        .sum()
                }
                Weight::Full(rho) => {
                    let x = split_matmul((&w_re, &w_im), (&v_re, &v_im));
                    let y = complex_matmul(&x, &x);
                    (0..dim)
                        .flat_map(|a| (0..dim).map(move |b| (a, b)))
                        .map(|(a, b)| rho[(a, b)] * y[(b, a)])
                        .sum()
                }
            }
        })
        .collect();

    Ok(OtocSeries {
        times: times.to_vec(),
        values,
        same_site,
    })
}
