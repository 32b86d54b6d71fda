//! Runs a validated config against the core library, in memory.

use nalgebra::DVector;
use num_complex::Complex64;
use quenchlab_core::diagnostics::{
    classify_regime, decay_window, detect_plateau, fit_log_slope, fit_otoc_decay,
    measure_comparison, revival_time, RegimeParams,
};
use quenchlab_core::eikonal::suppression_curve;
use quenchlab_core::fermion::{build_chain, entropy_time_series};
use quenchlab_core::spin::{
    build_spin_hamiltonian, entanglement_entropy, evolve_density, evolve_state,
    logarithmic_negativity, mutual_information, operator_quench, otoc, reduced_density_matrix,
    thermal_density_matrix, ManyBodyState, OtocState, SpinHamiltonian, SpinState,
};
use quenchlab_core::{Result, TimeSeries};
use rand::Rng;
use serde_json::{json, Value};

use crate::config::{
    EikonalConfig, ExperimentConfig, FermionQuenchConfig, InitialState, Model, NegativityConfig,
    OtocConfig, OtocStateSpec, SpinQuenchConfig,
};
use crate::seed::{rng, Stream};

/// Series for `series.csv` and the body of `report.json`.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub series: Vec<TimeSeries>,
    pub report: Value,
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome> {
    let times = cfg.time.times();
    match &cfg.model {
        Model::FermionQuench(m) => fermion_quench(m, &times, cfg.seed),
        Model::SpinQuench(m) => spin_quench(m, &times, cfg.seed).map(|(out, _)| out),
        Model::Otoc(m) => otoc_run(m, &times).map(|(out, _)| out),
        Model::Negativity(m) => negativity(m, &times, cfg.seed),
        Model::Eikonal(m) => eikonal(m, &times),
        Model::Report(m) => {
            let (quench, entropy) = spin_quench(&m.quench, &times, cfg.seed)?;
            let (otoc_out, re) = otoc_run(&m.otoc, &times)?;
            let delta = entropy.relative_to_first().with_label("delta_s");
            let report = classify_regime(&delta, &re, &m.otoc.regime);
            Ok(Outcome {
                series: vec![delta, re],
                report: json!({
                    "regime": report,
                    "spin_quench": quench.report,
                    "otoc": otoc_out.report,
                }),
            })
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn fermion_quench(m: &FermionQuenchConfig, times: &[f64], seed: u64) -> Result<Outcome> {
    let potentials: Vec<f64> = if m.disorder > 0.0 {
        let mut r = rng(seed, Stream::Potentials);
        (0..m.len).map(|_| r.random_range(-m.disorder..=m.disorder)).collect()
    } else {
        vec![0.0; m.len]
    };
    let ham = build_chain(m.len, m.boundary, &potentials)?;
    let curve = entropy_time_series(&ham, &m.quench, m.block.clone(), times)?;
    let delta = curve.delta.with_label("delta_s");

    let t_rev = m.regime.revival_time.unwrap_or_else(|| revival_time(m.len));
    let pre_revival = delta.truncated(t_rev);
    let plateau = detect_plateau(&pre_revival, m.regime.rel_tol, m.regime.window_fraction);
    let window = m.fit_window.or_else(|| {
        let lo = times.iter().copied().find(|&t| t > 0.0)?;
        Some((lo, t_rev.min(*times.last()?)))
    });
    let fit = window.map(|w| fit_log_slope(&delta, w));

    let report = json!({
        "quench": to_json(&m.quench),
        "block": [m.block.start, m.block.end],
        "initial_entropy": curve.initial_entropy,
        "revival_time": t_rev,
        "plateau_time": plateau,
        "fit_window": window,
        "log_slope": match &fit {
            Some(Ok(f)) => to_json(f),
            Some(Err(e)) => json!({ "error": e.to_string() }),
            None => Value::Null,
        },
    });
    Ok(Outcome {
        series: vec![delta],
        report,
    })
}

fn initial(h: &SpinHamiltonian, spec: &InitialState, seed: u64) -> Result<SpinState> {
    let n = h.n_sites();
    Ok(match spec {
        InitialState::AllUp => ManyBodyState::all_up(n)?.into(),
        InitialState::Ground => h.ground_state().into(),
        InitialState::Random => {
            let mut r = rng(seed, Stream::SpinState);
            let amps = DVector::from_iterator(
                1 << n,
                (0..1usize << n).map(|_| {
                    Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
                }),
            );
            ManyBodyState::normalized(n, amps)?.into()
        }
        InitialState::Thermal(beta) => thermal_density_matrix(h, *beta)?.into(),
    })
}

fn evolve(h: &SpinHamiltonian, state: &SpinState, t: f64) -> Result<SpinState> {
    Ok(match state {
        SpinState::Pure(psi) => evolve_state(h, psi, t)?.into(),
        SpinState::Mixed(rho) => evolve_density(h, rho, t)?.into(),
    })
}

fn prepared(
    h: &SpinHamiltonian,
    spec: &InitialState,
    op: Option<&quenchlab_core::spin::LocalOperator>,
    seed: u64,
) -> Result<SpinState> {
    let s = initial(h, spec, seed)?;
    match op {
        Some(op) => operator_quench(&s, op),
        None => Ok(s),
    }
}

fn spin_quench(m: &SpinQuenchConfig, times: &[f64], seed: u64) -> Result<(Outcome, TimeSeries)> {
    let h = build_spin_hamiltonian(m.model)?;
    let s0 = prepared(&h, &m.initial, m.operator.as_ref(), seed)?;
    let values = times
        .iter()
        .map(|&t| entanglement_entropy(&evolve(&h, &s0, t)?, &m.block))
        .collect::<Result<Vec<f64>>>()?;
    let entropy = TimeSeries::new(times.to_vec(), values, "entropy", "nats")?;
    let d = RegimeParams::default();
    let report = json!({
        "model": to_json(&m.model),
        "block": m.block,
        "operator": m.operator.as_ref().map(|o| o.to_string()),
        "initial_entropy": entropy.values()[0],
        "final_entropy": entropy.values()[entropy.len() - 1],
        "plateau_time": detect_plateau(&entropy, d.rel_tol, d.window_fraction),
    });
    Ok((
        Outcome {
            series: vec![entropy.clone()],
            report,
        },
        entropy,
    ))
}

fn otoc_run(m: &OtocConfig, times: &[f64]) -> Result<(Outcome, TimeSeries)> {
    let h = build_spin_hamiltonian(m.model)?;
    let ground;
    let state = match m.state {
        OtocStateSpec::InfiniteTemperature => OtocState::InfiniteTemperature,
        OtocStateSpec::Thermal(beta) => OtocState::Thermal(beta),
        OtocStateSpec::Ground => {
            ground = h.ground_state();
            OtocState::Pure(&ground)
        }
    };
    let series = otoc(&h, &m.w, &m.v, state, times)?;
    let re = series.real_part()?;
    let im = series.imag_part()?;

    let window = decay_window(&re, m.regime.otoc_onset, m.regime.otoc_floor);
    let fit = window.map(|w| fit_otoc_decay(&re, w)).transpose()?;
    let tail = (re.len() * 3 / 10).max(1);
    let late_mean = re.values()[re.len() - tail..].iter().sum::<f64>() / tail as f64;
    let report = json!({
        "model": to_json(&m.model),
        "w": m.w.to_string(),
        "v": m.v.to_string(),
        "same_site": series.same_site,
        "fit_window": window,
        "fit": fit.map(|f| to_json(&f)),
        "late_mean": late_mean,
    });
    Ok((
        Outcome {
            series: vec![re.clone(), im],
            report,
        },
        re,
    ))
}

fn negativity(m: &NegativityConfig, times: &[f64], seed: u64) -> Result<Outcome> {
    let h = build_spin_hamiltonian(m.model)?;
    let s0 = prepared(&h, &m.initial, m.operator.as_ref(), seed)?;
    let mut union: Vec<usize> = m.a.iter().chain(&m.b).copied().collect();
    union.sort_unstable();

    let mut entropy = Vec::with_capacity(times.len());
    let mut neg = Vec::with_capacity(times.len());
    let mut mi = Vec::with_capacity(times.len());
    for &t in times {
        let st = evolve(&h, &s0, t)?;
        let rho_ab = reduced_density_matrix(&st, &union)?;
        entropy.push(entanglement_entropy(&st, &m.a)?);
        neg.push(logarithmic_negativity(&rho_ab, &m.a, &m.b)?);
        mi.push(mutual_information(&st, &m.a, &m.b)?);
    }
    let entropy = TimeSeries::new(times.to_vec(), entropy, "entropy_a", "nats")?;
    let neg = TimeSeries::new(times.to_vec(), neg, "log_negativity", "nats")?;
    let mi = TimeSeries::new(times.to_vec(), mi, "mutual_information", "nats")?;
    let table = measure_comparison(&entropy, &neg, &mi)?;
    Ok(Outcome {
        report: json!({
            "model": to_json(&m.model),
            "a": m.a,
            "b": m.b,
            "operator": m.operator.as_ref().map(|o| o.to_string()),
            "table": to_json(&table),
            "rows": table.rows.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        }),
        series: vec![entropy, neg, mi],
    })
}

fn eikonal(m: &EikonalConfig, times: &[f64]) -> Result<Outcome> {
    let curve = suppression_curve(&m.model, &m.cft, times, m.mode)?;
    let model = curve.model_series()?;
    let plateau = detect_plateau(&model, m.regime.rel_tol, m.regime.window_fraction);
    Ok(Outcome {
        report: json!({
            "model": to_json(&m.model),
            "cft": to_json(&m.cft),
            "mode": to_json(&m.mode),
            "geometric_bound": m.model.geometric_bound(),
            "saturation_time": curve.saturation_time,
            "plateau_time": plateau,
        }),
        series: vec![curve.vacuum_series()?, curve.sigma_series()?, model],
    })
}
