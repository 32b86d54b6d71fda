use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A sampled curve on a strictly increasing time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
    pub label: String,
    pub units: String,
}

impl TimeSeries {
    pub fn new(
        times: Vec<f64>,
        values: Vec<f64>,
        label: impl Into<String>,
        units: impl Into<String>,
    ) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidSeries(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        check_strictly_increasing(&times)?;
        Ok(TimeSeries {
            times,
            values,
            label: label.into(),
            units: units.into(),
        })
    }

    /// Samples `f` on `times`.
    pub fn from_fn(
        times: &[f64],
        label: impl Into<String>,
        units: impl Into<String>,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let values = times.iter().map(|&t| f(t)).collect();
        TimeSeries::new(times.to_vec(), values, label, units)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }

    /// Samples with `lo <= t <= hi`.
    pub fn window(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.iter().filter(move |&(t, _)| t >= lo && t <= hi)
    }

    /// Drops every sample after `t_max`.
    pub fn truncated(&self, t_max: f64) -> TimeSeries {
        let keep = self.times.iter().take_while(|&&t| t <= t_max).count();
        TimeSeries {
            times: self.times[..keep].to_vec(),
            values: self.values[..keep].to_vec(),
            label: self.label.clone(),
            units: self.units.clone(),
        }
    }

    /// Same grid with every value shifted by `-values[0]`.
    pub fn relative_to_first(&self) -> TimeSeries {
        let base = self.values.first().copied().unwrap_or(0.0);
        TimeSeries {
            times: self.times.clone(),
            values: self.values.iter().map(|v| v - base).collect(),
            label: self.label.clone(),
            units: self.units.clone(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

pub(crate) fn check_strictly_increasing(times: &[f64]) -> Result<()> {
    if let Some(bad) = times.iter().find(|t| !t.is_finite()) {
        return Err(Error::InvalidSeries(format!("non-finite time {bad}")));
    }
    if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSeries(format!(
            "times must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// `n` evenly spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / (n - 1) as f64;
            (0..n)
                .map(|k| if k == n - 1 { end } else { start + step * k as f64 })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_and_ragged() {
        assert!(TimeSeries::new(vec![0.0, 0.0], vec![1.0, 2.0], "x", "").is_err());
        assert!(TimeSeries::new(vec![0.0, 1.0], vec![1.0], "x", "").is_err());
        assert!(TimeSeries::new(vec![0.0, 1.0], vec![1.0, 2.0], "x", "").is_ok());
    }

    #[test]
    fn linspace_hits_endpoints() {
        let t = linspace(0.0, 1.0, 11);
        assert_eq!(t.len(), 11);
        assert_eq!(t[0], 0.0);
        assert_eq!(t[10], 1.0);
        assert!((t[3] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn truncation_and_baseline() {
        let s = TimeSeries::new(vec![0.0, 1.0, 2.0], vec![3.0, 4.0, 6.0], "s", "nats").unwrap();
        assert_eq!(s.truncated(1.5).len(), 2);
        assert_eq!(s.relative_to_first().values(), &[0.0, 1.0, 3.0]);
    }
}
