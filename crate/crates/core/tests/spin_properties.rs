//! Structural properties of spin-chain entanglement measures and OTOCs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use quenchlab_core::spin::{
    build_spin_hamiltonian, entanglement_entropy, evolve_state, logarithmic_negativity,
    mutual_information, otoc, reduced_density_matrix, von_neumann_entropy, DensityMatrix,
    IsingParams, LocalOperator, ManyBodyState, OtocState, Pauli, SpinState,
};
use quenchlab_core::Boundary;

fn random_state(n: usize) -> impl Strategy<Value = ManyBodyState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map(
        "zero vector",
        move |amps| {
            let v = DVector::from_iterator(amps.len(), amps.iter().map(|&(a, b)| Complex64::new(a, b)));
            (v.norm() > 1e-3).then(|| ManyBodyState::normalized(n, v).unwrap())
        },
    )
}

fn sized_state() -> impl Strategy<Value = ManyBodyState> {
    (2usize..=6).prop_flat_map(random_state)
}

fn random_density(n: usize) -> impl Strategy<Value = DMatrix<Complex64>> {
    let dim = 1 << n;
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |g| {
        let g = DMatrix::from_iterator(dim, dim, g.iter().map(|&(a, b)| Complex64::new(a, b)));
        let rho = &g * g.adjoint();
        let tr: Complex64 = rho.diagonal().sum();
        rho / tr
    })
}

/// Subset of `0..n` from a bit mask, never empty and never everything.
fn split(n: usize, mask: u32) -> (Vec<usize>, Vec<usize>) {
    let full = (1u32 << n) - 1;
    let mask = (mask % (full - 1)) + 1;
    let a: Vec<usize> = (0..n).filter(|&j| mask & (1 << j) != 0).collect();
    let b: Vec<usize> = (0..n).filter(|&j| mask & (1 << j) == 0).collect();
    (a, b)
}

/// Direct index summation with site `j` at bit `n - 1 - j`.
fn rdm_by_summation(psi: &ManyBodyState, n: usize, keep: &[usize]) -> DMatrix<Complex64> {
    let k = keep.len();
    let mut out = DMatrix::zeros(1 << k, 1 << k);
    let amps = psi.amplitudes();
    let sub_index = |full: usize| -> usize {
        keep.iter()
            .fold(0, |acc, &s| (acc << 1) | ((full >> (n - 1 - s)) & 1))
    };
    let traced: Vec<usize> = (0..n).filter(|s| !keep.contains(s)).collect();
    let traced_index = |full: usize| -> usize {
        traced.iter().fold(0, |acc, &s| (acc << 1) | ((full >> (n - 1 - s)) & 1))
    };
    for x in 0..1 << n {
        for y in 0..1 << n {
            if traced_index(x) == traced_index(y) {
                out[(sub_index(x), sub_index(y))] += amps[x] * amps[y].conj();
            }
        }
    }
    out
}

fn bits_of(full: usize, n: usize, sites: &[usize]) -> usize {
    sites.iter().fold(0, |acc, &s| (acc << 1) | ((full >> (n - 1 - s)) & 1))
}

/// Amplitudes reshaped to `psi[a, b]`.
fn schmidt_matrix(psi: &ManyBodyState, n: usize, a: &[usize], b: &[usize]) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(1 << a.len(), 1 << b.len());
    for (x, amp) in psi.amplitudes().iter().enumerate() {
        m[(bits_of(x, n, a), bits_of(x, n, b))] = *amp;
    }
    m
}

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complementary_entropies_agree(psi in sized_state(), mask in any::<u32>()) {
        let n = psi.n_sites();
        let (a, b) = split(n, mask);
        let state = SpinState::from(psi);
        let sa = entanglement_entropy(&state, &a).unwrap();
        let sb = entanglement_entropy(&state, &b).unwrap();
        prop_assert!((sa - sb).abs() <= 1e-9);
        prop_assert!(sa >= -1e-12);
        prop_assert!(sa <= a.len().min(b.len()) as f64 * std::f64::consts::LN_2 + 1e-9);
    }

    #[test]
    fn rdm_matches_summation(psi in sized_state(), mask in any::<u32>()) {
        let n = psi.n_sites();
        let (a, _) = split(n, mask);
        let expected = rdm_by_summation(&psi, n, &a);
        let rho = reduced_density_matrix(&SpinState::from(psi), &a).unwrap();
        prop_assert!(max_diff(rho.matrix(), &expected) <= 1e-12);
    }

    #[test]
    fn mixed_rdm_matches_pure_rdm(psi in sized_state(), mask in any::<u32>()) {
        let n = psi.n_sites();
        let (a, _) = split(n, mask);
        let via_pure = reduced_density_matrix(&SpinState::from(psi.clone()), &a).unwrap();
        let via_mixed = reduced_density_matrix(&SpinState::from(psi.to_density_matrix()), &a).unwrap();
        prop_assert!(max_diff(via_pure.matrix(), via_mixed.matrix()) <= 1e-10);
    }

    #[test]
    fn product_states_have_no_negativity(ra in random_density(2), rb in random_density(1)) {
        let a = DensityMatrix::new(vec![0, 1], ra).unwrap();
        let b = DensityMatrix::new(vec![2], rb).unwrap();
        let rho = a.tensor(&b).unwrap();
        let en = logarithmic_negativity(&rho, &[0, 1], &[2]).unwrap();
        prop_assert!(en.abs() <= 1e-9);
        let i = mutual_information(&SpinState::from(rho), &[0, 1], &[2]).unwrap();
        prop_assert!(i.abs() <= 1e-9);
    }

    #[test]
    fn pure_state_negativity_is_renyi_half(psi in sized_state(), mask in any::<u32>()) {
        let n = psi.n_sites();
        let (a, b) = split(n, mask);
        // Schmidt coefficients straight from an SVD; sqrt of tiny RDM eigenvalues is too noisy
        let expected = 2.0 * schmidt_matrix(&psi, n, &a, &b).singular_values().sum().ln();
        let en = logarithmic_negativity(&psi.to_density_matrix(), &a, &b).unwrap();
        prop_assert!((en - expected).abs() <= 1e-8, "{a:?} {b:?} {en} {expected}");
    }

    #[test]
    fn mutual_information_nonnegative(psi in random_state(4), mask in any::<u32>()) {
        let (a, rest) = split(4, mask);
        // drop one site so the pair does not cover the register
        let b = &rest[..rest.len().saturating_sub(1)];
        if !b.is_empty() {
            let i = mutual_information(&SpinState::from(psi), &a, b).unwrap();
            prop_assert!(i >= -1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn otoc_matches_matrix_exponential(
        g in 0.2f64..1.5,
        hz in 0.0f64..1.0,
        t in 0.0f64..4.0,
        w_site in 0usize..4,
        v_site in 0usize..4,
    ) {
        let n = 4;
        let h = build_spin_hamiltonian(IsingParams {
            sites: n,
            coupling: 1.0,
            transverse_field: g,
            longitudinal_field: hz,
            boundary: Boundary::Periodic,
        }).unwrap();
        let w = LocalOperator::single(w_site, Pauli::Z);
        let v = LocalOperator::single(v_site, Pauli::X);
        let series = otoc(&h, &w, &v, OtocState::InfiniteTemperature, &[t]).unwrap();

        let u = (h.matrix() * Complex64::new(0.0, -t)).exp();
        let wm = u.adjoint() * w.matrix(n) * &u;
        let vm = v.matrix(n);
        let prod = &wm * &vm * &wm * &vm;
        let expected: Complex64 = prod.diagonal().sum() / Complex64::new((1 << n) as f64, 0.0);
        prop_assert!((series.values[0] - expected).norm() <= 1e-9);
        prop_assert!(series.values[0].norm() <= 1.0 + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn two_site_evolution_matches_exponential(psi in random_state(2), g in 0.0f64..2.0, hz in -1.0f64..1.0) {
        let h = build_spin_hamiltonian(IsingParams {
            sites: 2,
            coupling: 1.0,
            transverse_field: g,
            longitudinal_field: hz,
            boundary: Boundary::Open,
        }).unwrap();
        let t = 1.3;
        let expected = (h.matrix() * Complex64::new(0.0, -t)).exp() * psi.amplitudes();
        let got = evolve_state(&h, &psi, t).unwrap();
        let err = (got.amplitudes() - expected).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-10);
    }

    #[test]
    fn mutual_information_is_entropy_combination(psi in random_state(6), mask in any::<u32>()) {
        let (a, rest) = split(6, mask);
        let b = &rest[..rest.len().saturating_sub(1)];
        prop_assume!(!b.is_empty());
        let state = SpinState::from(psi);
        let mut ab: Vec<usize> = a.iter().chain(b).copied().collect();
        ab.sort_unstable();
        let s = |sites: &[usize]| von_neumann_entropy(&reduced_density_matrix(&state, sites).unwrap());
        let expected = s(&a) + s(b) - s(&ab);
        let got = mutual_information(&state, &a, b).unwrap();
        prop_assert!((got - expected).abs() <= 1e-10);
    }
}

#[test]
fn chaotic_otoc_decays() {
    let h = build_spin_hamiltonian(IsingParams::chaotic(8)).unwrap();
    let times: Vec<f64> = (0..=120).map(|k| k as f64 * 0.25).collect();
    let f = otoc(
        &h,
        &LocalOperator::single(0, Pauli::Z),
        &LocalOperator::single(4, Pauli::Z),
        OtocState::InfiniteTemperature,
        &times,
    )
    .unwrap();
    assert!((f.values[0].re - 1.0).abs() <= 1e-12);
    let late = &f.values[84..];
    let mean = late.iter().map(|z| z.re).sum::<f64>() / late.len() as f64;
    assert!(mean < 0.5, "late mean {mean}");
}
