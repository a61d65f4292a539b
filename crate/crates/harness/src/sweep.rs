//! Bisection for the largest stable time step.

use serde::{Deserialize, Serialize};
use tdgl_core::Error;

use crate::config::RunConfig;
use crate::error::{HarnessError, Result};
use crate::run::Simulation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub dt: f64,
    pub steps: u64,
    pub stable: bool,
    /// Time at which the probe diverged.
    pub diverged_at: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Largest stable step found; `None` when even `dt_min` diverges.
    pub max_stable_dt: Option<f64>,
    /// Smallest unstable step found, if any.
    pub min_unstable_dt: Option<f64>,
    pub probes: Vec<Probe>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub dt_min: f64,
    pub dt_max: f64,
    /// Stop once `hi / lo <= 1 + resolution`.
    pub resolution: f64,
    /// Physical length of each probe; `None` uses `20 ceil(1/dt)` steps.
    pub probe_time: Option<f64>,
}

impl SweepOptions {
    pub fn new(dt_min: f64, dt_max: f64) -> Self {
        SweepOptions {
            dt_min,
            dt_max,
            resolution: 0.02,
            probe_time: None,
        }
    }

    pub fn budget(&self, dt: f64) -> u64 {
        match self.probe_time {
            Some(t) => (t / dt).ceil() as u64,
            None => 20 * (1.0 / dt).ceil() as u64,
        }
    }
}

/// One probe from the configured initial state.
pub fn probe(config: &RunConfig, dt: f64, steps: u64) -> Result<Probe> {
    let mut cfg = config.clone();
    cfg.dt = dt;
    let mut sim = Simulation::new(&cfg)?;
    Ok(match sim.advance(steps) {
        Ok(()) => Probe {
            dt,
            steps,
            stable: true,
            diverged_at: None,
        },
        Err(Error::Divergence { time }) => Probe {
            dt,
            steps,
            stable: false,
            diverged_at: Some(time),
        },
        Err(e) => return Err(e.into()),
    })
}

/// Geometric bisection between `dt_min` and `dt_max`. A step is stable when a
/// probe of the configured budget finishes without divergence.
pub fn stability_sweep(config: &RunConfig, opts: SweepOptions) -> Result<SweepResult> {
    if !(opts.dt_min > 0.0 && opts.dt_min < opts.dt_max && opts.dt_max.is_finite()) {
        return Err(HarnessError::invalid("dt_min", "need 0 < dt_min < dt_max"));
    }
    if !(opts.resolution > 0.0) {
        return Err(HarnessError::invalid("resolution", "must be positive"));
    }
    if let Some(t) = opts.probe_time {
        if !(t > 0.0 && t.is_finite()) {
            return Err(HarnessError::invalid("probe_time", "must be positive and finite"));
        }
    }
    let mut probes = Vec::new();
    let mut run = |dt: f64| -> Result<bool> {
        let p = probe(config, dt, opts.budget(dt))?;
        let stable = p.stable;
        probes.push(p);
        Ok(stable)
    };
    if !run(opts.dt_min)? {
        return Ok(SweepResult {
            max_stable_dt: None,
            min_unstable_dt: Some(opts.dt_min),
            probes,
        });
    }
    if run(opts.dt_max)? {
        return Ok(SweepResult {
            max_stable_dt: Some(opts.dt_max),
            min_unstable_dt: None,
            probes,
        });
    }
    let (mut lo, mut hi) = (opts.dt_min, opts.dt_max);
    while hi / lo > 1.0 + opts.resolution {
        let mid = (lo * hi).sqrt();
        if run(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(SweepResult {
        max_stable_dt: Some(lo),
        min_unstable_dt: Some(hi),
        probes,
    })
}
