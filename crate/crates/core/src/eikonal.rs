//! Eikonal scattering off an absorbing centre and the resulting entropy
//! suppression model.
//!
//! The phase shift is `delta(b) = G_N s (f_R(b) + i f_I(b))`; a positive
//! imaginary part removes flux, and the absorbed flux integrated over impact
//! parameter is subtracted from the vacuum entropy growth.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cft::{delta_s_local_quench, CftParams};
use crate::error::{Error, Result};
use crate::series::{check_strictly_increasing, TimeSeries};

/// Real (elastic) part of the impact-parameter profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RealProfile {
    Zero,
    /// `amplitude * e^{-b / scale}`
    Exponential { amplitude: f64, scale: f64 },
}

impl RealProfile {
    pub fn eval(&self, b: f64) -> f64 {
        match *self {
            RealProfile::Zero => 0.0,
            RealProfile::Exponential { amplitude, scale } => amplitude * (-b / scale).exp(),
        }
    }
}

/// Absorptive part `f_I(b) >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AbsorptiveProfile {
    /// `alpha * e^{-b^2 / (2 b_h^2)}`
    Gaussian { alpha: f64, horizon_scale: f64 },
    /// Infinite absorption for `b < horizon_scale`, none outside.
    HardDisk { horizon_scale: f64 },
}

/// Which one-sided limit to take at a profile discontinuity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

impl AbsorptiveProfile {
    pub fn eval(&self, b: f64) -> f64 {
        self.eval_sided(b, Side::Right)
    }

    fn eval_sided(&self, b: f64, side: Side) -> f64 {
        match *self {
            AbsorptiveProfile::Gaussian {
                alpha,
                horizon_scale,
            } => alpha * (-b * b / (2.0 * horizon_scale * horizon_scale)).exp(),
            AbsorptiveProfile::HardDisk { horizon_scale } => {
                let inside = match side {
                    Side::Left => b <= horizon_scale,
                    Side::Right => b < horizon_scale,
                };
                if inside {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
        }
    }

    fn discontinuity(&self) -> Option<f64> {
        match *self {
            AbsorptiveProfile::Gaussian { .. } => None,
            AbsorptiveProfile::HardDisk { horizon_scale } => Some(horizon_scale),
        }
    }

    pub fn horizon_scale(&self) -> f64 {
        match *self {
            AbsorptiveProfile::Gaussian { horizon_scale, .. }
            | AbsorptiveProfile::HardDisk { horizon_scale } => horizon_scale,
        }
    }
}

/// Uniform impact-parameter grid `b_k = k b_max / (N - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpactGrid {
    pub b_max: f64,
    pub points: usize,
}

impl ImpactGrid {
    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let step = self.b_max / (self.points - 1) as f64;
        (0..self.points).map(move |k| {
            if k == self.points - 1 {
                self.b_max
            } else {
                step * k as f64
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EikonalModel {
    pub newton_constant: f64,
    /// Mandelstam `s` at `t = 0`.
    pub base_energy: f64,
    /// Sets the blueshift rate `s(t) = s0 e^{2 pi t / beta}`.
    pub beta: f64,
    pub real_profile: RealProfile,
    pub absorptive_profile: AbsorptiveProfile,
    pub grid: ImpactGrid,
    /// Cross sections are divided by this area before entering entropies.
    pub area_scale: f64,
    /// Saturating mode triggers once `sigma >= plateau_fraction * b_max^2 / 2`.
    pub plateau_fraction: f64,
}

impl Default for EikonalModel {
    fn default() -> Self {
        EikonalModel {
            newton_constant: 1.0,
            base_energy: 1.0,
            beta: 2.0 * PI,
            real_profile: RealProfile::Exponential {
                amplitude: 1.0,
                scale: 0.25,
            },
            absorptive_profile: AbsorptiveProfile::Gaussian {
                alpha: 1.0,
                horizon_scale: 1.0,
            },
            grid: ImpactGrid {
                b_max: 3.0,
                points: 1024,
            },
            area_scale: 1.0,
            plateau_fraction: 0.99,
        }
    }
}

impl EikonalModel {
    pub fn validated(self) -> Result<Self> {
        let positive = [
            ("g_n", self.newton_constant),
            ("s0", self.base_energy),
            ("beta", self.beta),
            ("b_max", self.grid.b_max),
            ("area_scale", self.area_scale),
            ("b_h", self.absorptive_profile.horizon_scale()),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, format!("must be finite and > 0, got {v}")));
            }
        }
        if let AbsorptiveProfile::Gaussian { alpha, .. } = self.absorptive_profile {
            if !(alpha.is_finite() && alpha >= 0.0) {
                return Err(Error::param("alpha", format!("must be finite and >= 0, got {alpha}")));
            }
        }
        if let RealProfile::Exponential { amplitude, scale } = self.real_profile {
            if !amplitude.is_finite() || !(scale.is_finite() && scale > 0.0) {
                return Err(Error::param("f_r", "needs finite amplitude and positive scale"));
            }
        }
        if self.grid.points < 64 {
            return Err(Error::param(
                "n_b",
                format!("need at least 64 grid points, got {}", self.grid.points),
            ));
        }
        if !(self.plateau_fraction > 0.0 && self.plateau_fraction <= 1.0) {
            return Err(Error::param("plateau_fraction", "must lie in (0, 1]"));
        }
        Ok(self)
    }

    /// `s(t) = s0 e^{2 pi t / beta}`.
    pub fn energy_at(&self, t: f64) -> f64 {
        self.base_energy * (2.0 * PI * t / self.beta).exp()
    }

    /// Largest cross section the grid can hold, `b_max^2 / 2`, in area units.
    pub fn geometric_bound(&self) -> f64 {
        0.5 * self.grid.b_max * self.grid.b_max / self.area_scale
    }

    /// `1 - |A(s, b)|^2` evaluated with one-sided profile limits.
    fn loss(&self, s: f64, b: f64, side: Side) -> f64 {
        let im = self.newton_constant * s * self.absorptive_profile.eval_sided(b, side);
        if im.is_infinite() {
            1.0
        } else {
            -(-2.0 * im).exp_m1()
        }
    }
}

fn check_kinematics(s: f64, b: f64) -> Result<()> {
    if !(b.is_finite() && b >= 0.0) {
        return Err(Error::param("b", format!("must be finite and >= 0, got {b}")));
    }
    if s.is_nan() || s <= 0.0 {
        return Err(Error::param("s", format!("must be > 0, got {s}")));
    }
    Ok(())
}

/// `delta(b) = G_N s (f_R(b) + i f_I(b))`.
pub fn phase_shift(m: &EikonalModel, s: f64, b: f64) -> Result<Complex64> {
    check_kinematics(s, b)?;
    let scale = m.newton_constant * s;
    Ok(Complex64::new(
        scale * m.real_profile.eval(b),
        scale * m.absorptive_profile.eval(b),
    ))
}

/// `A(s, b) = e^{i delta(b)}`.
pub fn amplitude(m: &EikonalModel, s: f64, b: f64) -> Result<Complex64> {
    let delta = phase_shift(m, s, b)?;
    Ok(Complex64::from_polar((-delta.im).exp(), delta.re))
}

/// `sigma(s) = int_0^{b_max} b (1 - |A|^2) db` by composite trapezoid.
///
/// Panels containing a profile discontinuity are split there and each side
/// uses its one-sided limit, so piecewise-smooth absorbers integrate to the
/// same order as smooth ones.
pub fn absorption_cross_section(m: &EikonalModel, s: f64) -> Result<f64> {
    if s.is_nan() || s <= 0.0 {
        return Err(Error::param("s", format!("must be > 0, got {s}")));
    }
    let nodes: Vec<f64> = m.grid.nodes().collect();
    let cut = m.absorptive_profile.discontinuity();
    let integrand = |b: f64, side: Side| b * m.loss(s, b, side);
    let mut total = 0.0;
    for w in nodes.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        match cut {
            Some(c) if c > lo && c < hi => {
                total += 0.5 * (c - lo) * (integrand(lo, Side::Right) + integrand(c, Side::Left));
                total += 0.5 * (hi - c) * (integrand(c, Side::Right) + integrand(hi, Side::Left));
            }
            _ => {
                total += 0.5 * (hi - lo) * (integrand(lo, Side::Right) + integrand(hi, Side::Left));
            }
        }
    }
    Ok(total / m.area_scale)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuppressionMode {
    /// `max(0, dS_vac - sigma)`
    LiteralSubtraction,
    /// `dS_vac` frozen at the time the cross section saturates.
    Saturating,
}

/// Vacuum growth, cross section and the modelled entropy on a shared grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuppressionCurve {
    pub times: Vec<f64>,
    pub vacuum: Vec<f64>,
    pub sigma: Vec<f64>,
    pub model: Vec<f64>,
    pub mode: SuppressionMode,
    /// First sample where `sigma` reached the plateau threshold.
    pub saturation_time: Option<f64>,
}

impl SuppressionCurve {
    pub fn vacuum_series(&self) -> Result<TimeSeries> {
        TimeSeries::new(self.times.clone(), self.vacuum.clone(), "delta_s_vac", "nats")
    }

    pub fn sigma_series(&self) -> Result<TimeSeries> {
        TimeSeries::new(self.times.clone(), self.sigma.clone(), "sigma", "area")
    }

    pub fn model_series(&self) -> Result<TimeSeries> {
        TimeSeries::new(self.times.clone(), self.model.clone(), "delta_s_model", "nats")
    }
}

/// Entropy growth of a local quench reduced by absorption in the bulk.
pub fn suppression_curve(
    m: &EikonalModel,
    p: &CftParams,
    times: &[f64],
    mode: SuppressionMode,
) -> Result<SuppressionCurve> {
    if times.is_empty() {
        return Err(Error::param("times", "at least one time is required"));
    }
    check_strictly_increasing(times)?;
    let vacuum: Vec<f64> = times.iter().map(|&t| delta_s_local_quench(p, t)).collect();
    let sigma = times
        .iter()
        .map(|&t| absorption_cross_section(m, m.energy_at(t)))
        .collect::<Result<Vec<f64>>>()?;

    let threshold = m.plateau_fraction * m.geometric_bound();
    let saturation_index = sigma.iter().position(|&x| x >= threshold);
    let saturation_time = saturation_index.map(|k| times[k]);

    let model = match mode {
        SuppressionMode::LiteralSubtraction => vacuum
            .iter()
            .zip(&sigma)
            .map(|(v, s)| (v - s).max(0.0))
            .collect(),
        SuppressionMode::Saturating => match saturation_index {
            Some(k) => vacuum.iter().map(|&v| v.min(vacuum[k])).collect(),
            None => vacuum.clone(),
        },
    };

    Ok(SuppressionCurve {
        times: times.to_vec(),
        vacuum,
        sigma,
        model,
        mode,
        saturation_time,
    })
}
