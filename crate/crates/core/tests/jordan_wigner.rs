//! Hopping chains against the XX spin chain they map to.
//!
//! With `n_j = (1 - Z_j) / 2` the open hopping chain is
//! `-1/2 sum (X X + Y Y) + sum v_j n_j`; block entropies of leading blocks must agree.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use quenchlab_core::fermion::{
    build_chain, entropy_time_series, ground_state_correlations, subsystem_entropy, Filling,
    QuenchSpec,
};
use quenchlab_core::spin::{
    entanglement_entropy, evolve_state, LocalOperator, Pauli, SpinHamiltonian, SpinState,
};
use quenchlab_core::Boundary;

fn xx_chain(len: usize, potentials: &[f64], cut_bond: Option<usize>) -> SpinHamiltonian {
    let dim = 1 << len;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..len - 1 {
        if Some(i) == cut_bond {
            continue;
        }
        for axis in [Pauli::X, Pauli::Y] {
            let op = LocalOperator::product(vec![(i, axis), (i + 1, axis)]).unwrap();
            m -= op.matrix(len) * Complex64::new(0.5, 0.0);
        }
    }
    let id = DMatrix::<Complex64>::identity(dim, dim);
    for (j, &v) in potentials.iter().enumerate() {
        let z = LocalOperator::single(j, Pauli::Z).matrix(len);
        m += (&id - z) * Complex64::new(0.5 * v, 0.0);
    }
    SpinHamiltonian::from_matrix(len, m).unwrap()
}

fn leading_sites(block: usize) -> Vec<usize> {
    (0..block).collect()
}

#[test]
fn join_quench_agrees() {
    let (len, cut) = (8, 4);
    let zeros = vec![0.0; len];
    let times = [0.0, 0.5, 1.7, 3.2, 5.0];
    let ham = build_chain(len, Boundary::Open, &zeros).unwrap();
    let curve =
        entropy_time_series(&ham, &QuenchSpec::JoinHalves { cut }, 0..cut, &times).unwrap();

    let full = xx_chain(len, &zeros, None);
    let psi0 = xx_chain(len, &zeros, Some(cut - 1)).ground_state();
    for (k, &t) in times.iter().enumerate() {
        let psi = SpinState::from(evolve_state(&full, &psi0, t).unwrap());
        let s_spin = entanglement_entropy(&psi, &leading_sites(cut)).unwrap();
        let s_ferm = curve.entropy.values()[k];
        assert!((s_spin - s_ferm).abs() <= 1e-8, "t = {t}: {s_spin} vs {s_ferm}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ground_state_entropies_agree(potentials in prop::collection::vec(-1.0f64..1.0, 3..=7)) {
        let len = potentials.len();
        let ham = build_chain(len, Boundary::Open, &potentials).unwrap();
        // a near-zero mode makes the many-body ground state ambiguous
        prop_assume!(ham.spectrum().0.iter().all(|e| e.abs() > 0.05));
        let c = ground_state_correlations(&ham, Filling::NegativeModes);
        let psi = SpinState::from(xx_chain(len, &potentials, None).ground_state());
        for block in 1..len {
            let s_ferm = subsystem_entropy(&c, 0..block).unwrap();
            let s_spin = entanglement_entropy(&psi, &leading_sites(block)).unwrap();
            prop_assert!((s_ferm - s_spin).abs() <= 1e-8);
        }
    }
}
