//! Fits and classifiers that turn raw curves into regime verdicts.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cft::holo_negativity;
use crate::error::{Error, Result};
pub use crate::series::TimeSeries;

/// Default relative range tolerance for [`detect_plateau`].
pub const DEFAULT_REL_TOL: f64 = 0.02;
/// Default share of the series duration a plateau must cover.
pub const DEFAULT_WINDOW_FRACTION: f64 = 0.3;
/// Hopping-chain maximal group velocity used for revival cut-offs.
pub const HOPPING_MAX_VELOCITY: f64 = 2.0;
/// Values below this count as zero in the measure comparison.
pub const VANISHING_THRESHOLD: f64 = 1e-6;

/// Time at which signals reflected from the ends of an `L`-site hopping chain
/// return: `L / (2 v_max)`.
pub fn revival_time(sites: usize) -> f64 {
    sites as f64 / (2.0 * HOPPING_MAX_VELOCITY)
}

struct LineFit {
    slope: f64,
    intercept: f64,
    rms: f64,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> LineFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    LineFit {
        slope,
        intercept,
        rms: (sse / n).sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogSlopeFit {
    /// `dS / d ln t`.
    pub slope: f64,
    /// `3 * slope`.
    pub c_eff: f64,
    pub intercept: f64,
    /// Root-mean-square misfit.
    pub residual: f64,
    pub samples: usize,
}

/// Least-squares fit of `values` against `ln t` over `[t_lo, t_hi]`.
pub fn fit_log_slope(s: &TimeSeries, window: (f64, f64)) -> Result<LogSlopeFit> {
    let (lo, hi) = window;
    let points: Vec<(f64, f64)> = s.window(lo, hi).collect();
    if let Some(&(t, _)) = points.iter().find(|(t, _)| *t <= 0.0) {
        return Err(Error::param("window", format!("log fit needs t > 0, window contains {t}")));
    }
    if points.len() < 8 {
        return Err(Error::TooFewSamples {
            needed: 8,
            found: points.len(),
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let fit = least_squares(&xs, &ys);
    Ok(LogSlopeFit {
        slope: fit.slope,
        c_eff: 3.0 * fit.slope,
        intercept: fit.intercept,
        residual: fit.rms,
        samples: points.len(),
    })
}

/// Earliest `t_p` after which the series stays within
/// `rel_tol * max|values|` and the remaining stretch covers at least
/// `window_fraction` of the total duration.
///
/// # Panics
/// If `rel_tol` or `window_fraction` lies outside `(0, 1)`.
pub fn detect_plateau(s: &TimeSeries, rel_tol: f64, window_fraction: f64) -> Option<f64> {
    assert!(rel_tol > 0.0 && rel_tol < 1.0, "rel_tol must lie in (0, 1)");
    assert!(
        window_fraction > 0.0 && window_fraction < 1.0,
        "window_fraction must lie in (0, 1)"
    );
    let n = s.len();
    if n < 2 {
        return None;
    }
    let (times, values) = (s.times(), s.values());
    let t_end = times[n - 1];
    let min_span = window_fraction * (t_end - times[0]);
    let tol = rel_tol * values.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    // suffix extrema
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    lo[n - 1] = values[n - 1];
    hi[n - 1] = values[n - 1];
    for k in (0..n - 1).rev() {
        lo[k] = lo[k + 1].min(values[k]);
        hi[k] = hi[k + 1].max(values[k]);
    }
    (0..n)
        .take_while(|&k| t_end - times[k] >= min_span)
        .find(|&k| hi[k] - lo[k] <= tol)
        .map(|k| times[k])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OtocFit {
    /// False when the data show no exponential decay.
    pub valid: bool,
    pub epsilon: f64,
    pub lyapunov: f64,
    pub scrambling_time: f64,
    /// RMS misfit of `ln(1 - F)`.
    pub residual: f64,
    pub samples: usize,
}

impl OtocFit {
    fn no_decay(samples: usize) -> Self {
        OtocFit {
            valid: false,
            epsilon: 0.0,
            lyapunov: 0.0,
            scrambling_time: f64::NAN,
            residual: 0.0,
            samples,
        }
    }
}

/// Fits `ln(1 - F) = ln(eps) + lambda (t - t*)` over `window`.
///
/// Only `eps e^{-lambda t*}` is identifiable, so `eps` is pinned to `1 - F` at
/// the earliest usable sample and `t*` follows from the intercept. Samples with
/// `1 - F <= 1e-12` carry no decay information and are skipped.
pub fn fit_otoc_decay(s: &TimeSeries, window: (f64, f64)) -> Result<OtocFit> {
    let points: Vec<(f64, f64)> = s.window(window.0, window.1).collect();
    if let Some(&(t, f)) = points.iter().find(|(_, f)| !(*f > 0.0 && *f <= 1.0 + 1e-9)) {
        return Err(Error::param(
            "otoc",
            format!("fit needs values in (0, 1], found {f} at t = {t}"),
        ));
    }
    let usable: Vec<(f64, f64)> = points
        .into_iter()
        .filter(|&(_, f)| 1.0 - f > 1e-12)
        .map(|(t, f)| (t, (1.0 - f).ln()))
        .collect();
    if usable.len() < 3 {
        return Ok(OtocFit::no_decay(usable.len()));
    }
    let xs: Vec<f64> = usable.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = usable.iter().map(|p| p.1).collect();
    let fit = least_squares(&xs, &ys);
    if fit.slope <= 0.0 {
        return Ok(OtocFit {
            lyapunov: fit.slope,
            residual: fit.rms,
            ..OtocFit::no_decay(usable.len())
        });
    }
    let ln_eps = ys[0];
    Ok(OtocFit {
        valid: true,
        epsilon: ln_eps.exp(),
        lyapunov: fit.slope,
        scrambling_time: (ln_eps - fit.intercept) / fit.slope,
        residual: fit.rms,
        samples: usable.len(),
    })
}

/// Window from the first sample with `1 - F >= onset` to the last sample
/// before `F` first drops below `floor`. `None` when fewer than three samples
/// qualify.
pub fn decay_window(s: &TimeSeries, onset: f64, floor: f64) -> Option<(f64, f64)> {
    let (times, values) = (s.times(), s.values());
    let start = values.iter().position(|&f| 1.0 - f >= onset)?;
    let len = values[start..]
        .iter()
        .take_while(|&&f| f > floor && f <= 1.0 + 1e-9)
        .count();
    if len < 3 {
        return None;
    }
    Some((times[start], times[start + len - 1]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OtocBehavior {
    ConstantOrOscillatory,
    ExponentialDecay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suppression {
    Absent,
    Present,
}

/// Knobs for [`classify_regime`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeParams {
    pub rel_tol: f64,
    pub window_fraction: f64,
    /// `1 - F` level that opens the OTOC fit window.
    pub otoc_onset: f64,
    /// `F` level that closes it.
    pub otoc_floor: f64,
    /// Both series are cut here before classification.
    pub revival_time: Option<f64>,
}

impl Default for RegimeParams {
    fn default() -> Self {
        RegimeParams {
            rel_tol: DEFAULT_REL_TOL,
            window_fraction: DEFAULT_WINDOW_FRACTION,
            otoc_onset: 0.01,
            otoc_floor: 0.05,
            revival_time: None,
        }
    }
}

/// Machine-checkable version of the integrable/holographic comparison rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub scrambling_detected: bool,
    pub otoc_behavior: OtocBehavior,
    pub suppression: Suppression,
    pub plateau_time: Option<f64>,
    pub slope: Option<f64>,
    pub c_eff: Option<f64>,
    pub epsilon: Option<f64>,
    pub lyapunov: Option<f64>,
    pub scrambling_time: Option<f64>,
    /// `|plateau_time - t*|` when both exist.
    pub cross_check: Option<f64>,
}

impl RegimeReport {
    /// Matches the integrable row: no scrambling, no suppression.
    pub fn is_integrable_row(&self) -> bool {
        !self.scrambling_detected
            && self.otoc_behavior == OtocBehavior::ConstantOrOscillatory
            && self.suppression == Suppression::Absent
    }

    /// Matches the holographic row: exponential OTOC decay and a plateau.
    pub fn is_holographic_row(&self) -> bool {
        self.scrambling_detected
            && self.otoc_behavior == OtocBehavior::ExponentialDecay
            && self.suppression == Suppression::Present
    }
}

/// Combines plateau detection and the OTOC fit into one verdict.
pub fn classify_regime(entropy: &TimeSeries, otoc: &TimeSeries, params: &RegimeParams) -> RegimeReport {
    let (entropy, otoc) = match params.revival_time {
        Some(t) => (entropy.truncated(t), otoc.truncated(t)),
        None => (entropy.clone(), otoc.clone()),
    };
    let plateau_time = detect_plateau(&entropy, params.rel_tol, params.window_fraction);

    let otoc_fit = decay_window(&otoc, params.otoc_onset, params.otoc_floor)
        .and_then(|w| fit_otoc_decay(&otoc, w).ok())
        .filter(|f| f.valid);

    let log_fit = entropy
        .times()
        .iter()
        .copied()
        .find(|&t| t > 0.0)
        .and_then(|t0| {
            let t1 = plateau_time.unwrap_or(*entropy.times().last()?);
            fit_log_slope(&entropy, (t0, t1)).ok()
        });

    let scrambling_time = otoc_fit.map(|f| f.scrambling_time);
    RegimeReport {
        scrambling_detected: otoc_fit.is_some(),
        otoc_behavior: if otoc_fit.is_some() {
            OtocBehavior::ExponentialDecay
        } else {
            OtocBehavior::ConstantOrOscillatory
        },
        suppression: if plateau_time.is_some() {
            Suppression::Present
        } else {
            Suppression::Absent
        },
        plateau_time,
        slope: log_fit.map(|f| f.slope),
        c_eff: log_fit.map(|f| f.c_eff),
        epsilon: otoc_fit.map(|f| f.epsilon),
        lyapunov: otoc_fit.map(|f| f.lyapunov),
        scrambling_time,
        cross_check: plateau_time.zip(scrambling_time).map(|(a, b)| (a - b).abs()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Flat,
    Grows,
    Saturates,
    Vanishes,
    Decays,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Flat => "flat",
            Verdict::Grows => "grows",
            Verdict::Saturates => "saturates",
            Verdict::Vanishes => "vanishes",
            Verdict::Decays => "decays",
        };
        f.write_str(s)
    }
}

fn verdict(s: &TimeSeries) -> Verdict {
    let values = s.values();
    let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max_abs < VANISHING_THRESHOLD {
        return Verdict::Flat;
    }
    if values.last().is_some_and(|v| v.abs() < VANISHING_THRESHOLD) {
        return Verdict::Vanishes;
    }
    if detect_plateau(s, DEFAULT_REL_TOL, DEFAULT_WINDOW_FRACTION).is_some() {
        return Verdict::Saturates;
    }
    let half = s.len() / 2;
    let fit = least_squares(&s.times()[half..], &values[half..]);
    if fit.slope > 0.0 {
        Verdict::Grows
    } else {
        Verdict::Decays
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub property: String,
    pub entropy: String,
    pub negativity: String,
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} / {}", self.property, self.entropy, self.negativity)
    }
}

/// Entropy-versus-negativity comparison for one double-quench run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureTable {
    pub entropy: Verdict,
    pub negativity: Verdict,
    pub mutual_information: Verdict,
    /// Negativity ended below 1e-6 while the entropy stayed above 1e-5.
    pub negativity_vanished: bool,
    /// `(3/2) I` at the last sample.
    pub holographic_proxy_final: f64,
    pub rows: Vec<TableRow>,
}

/// Per-measure verdicts and the contrast rows.
pub fn measure_comparison(
    entropy: &TimeSeries,
    negativity: &TimeSeries,
    mutual_info: &TimeSeries,
) -> Result<MeasureTable> {
    for other in [negativity, mutual_info] {
        if other.times() != entropy.times() {
            return Err(Error::Alignment(format!(
                "`{}` and `{}` are sampled on different grids",
                entropy.label, other.label
            )));
        }
    }
    if entropy.is_empty() {
        return Err(Error::Alignment("series are empty".into()));
    }
    let (ve, vn, vi) = (verdict(entropy), verdict(negativity), verdict(mutual_info));
    let last = |s: &TimeSeries| s.values()[s.len() - 1];
    let negativity_vanished = last(negativity).abs() < VANISHING_THRESHOLD
        && last(entropy).abs() > 10.0 * VANISHING_THRESHOLD;
    let holographic_proxy_final = holo_negativity(last(mutual_info), 0.0, 0.0);

    let rows = vec![
        TableRow {
            property: "Decay after t*".into(),
            entropy: ve.to_string(),
            negativity: if negativity_vanished {
                "may vanish entirely".into()
            } else {
                vn.to_string()
            },
        },
        TableRow {
            property: "Suppression effect".into(),
            entropy: if ve == Verdict::Saturates { "present" } else { "absent" }.into(),
            negativity: if negativity_vanished {
                "complete loss"
            } else if vn == Verdict::Saturates {
                "present"
            } else {
                "absent"
            }
            .into(),
        },
        TableRow {
            property: "Mutual information".into(),
            entropy: vi.to_string(),
            negativity: format!("holographic proxy {holographic_proxy_final:.6}"),
        },
    ];
    Ok(MeasureTable {
        entropy: ve,
        negativity: vn,
        mutual_information: vi,
        negativity_vanished,
        holographic_proxy_final,
        rows,
    })
}
