//! Closed-form CFT and holographic formulas for local quenches and scrambling.
//!
//! All logarithms are natural; entropies are in nats.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every symbol the closed-form expressions need.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CftParams {
    pub central_charge: f64,
    /// UV regulator of the quench (time units).
    pub regulator: f64,
    pub beta: f64,
    /// Energy of the perturbing operator.
    pub perturbation_energy: f64,
    /// Perturbation strength in the OTOC decay model.
    pub epsilon: f64,
    pub lyapunov: f64,
    pub scrambling_time: f64,
    pub newton_constant: f64,
    /// Energy of the infalling probe.
    pub probe_energy: f64,
    pub horizon_radius: f64,
}

impl Default for CftParams {
    fn default() -> Self {
        CftParams {
            central_charge: 1.0,
            regulator: 1.0,
            beta: 2.0 * PI,
            perturbation_energy: 1.0,
            epsilon: 0.01,
            lyapunov: 1.0,
            scrambling_time: 0.0,
            newton_constant: 1.0,
            probe_energy: 1.0,
            horizon_radius: 1.0,
        }
    }
}

/// Conditions that are accepted but worth reporting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CftFlags {
    /// `lambda_L > 2 pi / beta`.
    pub bound_violating: bool,
    /// `delta E > c`, so the scrambling-time formula is negative.
    pub negative_scrambling_time: bool,
}

impl CftParams {
    /// Checks the positivity constraints.
    pub fn validated(self) -> Result<Self> {
        let positive = [
            ("c", self.central_charge),
            ("delta", self.regulator),
            ("beta", self.beta),
            ("delta_e", self.perturbation_energy),
            ("g_n", self.newton_constant),
            ("probe_energy", self.probe_energy),
            ("r_plus", self.horizon_radius),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, format!("must be finite and > 0, got {v}")));
            }
        }
        for (name, v) in [("epsilon", self.epsilon), ("lambda_l", self.lyapunov)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::param(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        if !self.scrambling_time.is_finite() {
            return Err(Error::param("t_star", "must be finite"));
        }
        Ok(self)
    }

    pub fn flags(&self) -> CftFlags {
        CftFlags {
            bound_violating: self.lyapunov > chaos_bound(self.beta) + 1e-9,
            negative_scrambling_time: self.perturbation_energy > self.central_charge,
        }
    }

    /// Copy with `t*` replaced by the scrambling-time formula.
    pub fn with_derived_scrambling_time(mut self) -> Self {
        self.scrambling_time = scrambling_time(&self);
        self
    }
}

/// Maximal Lyapunov exponent `2 pi / beta`.
pub fn chaos_bound(beta: f64) -> f64 {
    2.0 * PI / beta
}

/// `(c/6) ln((t^2 + delta^2) / delta^2)`.
pub fn delta_s_local_quench(p: &CftParams, t: f64) -> f64 {
    let d2 = p.regulator * p.regulator;
    p.central_charge / 6.0 * ((t * t + d2) / d2).ln()
}

/// `1 - epsilon e^{lambda_L (t - t*)}` without the floor.
pub fn otoc_model_raw(p: &CftParams, t: f64) -> f64 {
    1.0 - p.epsilon * (p.lyapunov * (t - p.scrambling_time)).exp()
}

/// Early-time OTOC decay, floored at 0.
pub fn otoc_model(p: &CftParams, t: f64) -> f64 {
    otoc_model_raw(p, t).max(0.0)
}

/// `(beta / 2 pi) ln(c / delta E)`; negative when `delta E > c`.
pub fn scrambling_time(p: &CftParams) -> f64 {
    p.beta / (2.0 * PI) * (p.central_charge / p.perturbation_energy).ln()
}

/// Kruskal shift `(G_N E / r_+^2) e^{2 pi t / beta}`.
pub fn shock_shift(p: &CftParams, t: f64) -> f64 {
    p.newton_constant * p.probe_energy / (p.horizon_radius * p.horizon_radius)
        * (2.0 * PI * t / p.beta).exp()
}

/// `(3/2)(S_A + S_B - S_{AB})`.
pub fn holo_negativity(s_a: f64, s_b: f64, s_ab: f64) -> f64 {
    1.5 * (s_a + s_b - s_ab)
}
