//! Named benchmark configurations.

use tdgl_core::StepperKind;

use crate::config::{InitialState, RunConfig};
use crate::error::{HarnessError, Result};

pub const PRESETS: [&str; 2] = ["paper-benchmark", "desk"];

/// Reference time steps of the full-size benchmark.
pub fn benchmark_dt(kind: StepperKind) -> f64 {
    match kind {
        StepperKind::ExplicitI => 0.0025,
        StepperKind::SemiImplicitII => 0.05,
        StepperKind::ImplicitIII => 0.1,
        StepperKind::FullyImplicitIV => 0.19,
    }
}

/// Half the measured stability limit of each stepper on the desk preset
/// (3000 time-unit probes for III and IV).
pub fn desk_dt(kind: StepperKind) -> f64 {
    match kind {
        StepperKind::ExplicitI => 0.0013,
        StepperKind::SemiImplicitII => 0.0317,
        StepperKind::ImplicitIII => 0.45,
        StepperKind::FullyImplicitIV => 0.4,
    }
}

/// Steps in roughly two time units, the desk monitoring period.
pub fn check_interval_for(dt: f64) -> usize {
    ((2.0 / dt).round() as usize).max(1)
}

pub fn preset(name: &str, kind: StepperKind) -> Result<RunConfig> {
    let base = RunConfig {
        sc_width_cells: 0,
        blanket_cells: 4,
        period_cells: 0,
        h_x: 0.5,
        h_y: 0.5,
        kappa: 0.0,
        sigma: 0.04,
        h_left: 0.5,
        h_right: 0.5,
        tau: 1.0,
        initial_state: InitialState::Meissner,
        algorithm: kind,
        dt: 0.0,
        t_max: 0.0,
        seed: 1,
        noise_amp: 1e-3,
        check_interval: 0,
        position_tolerance: 1e-6,
        consecutive_passes: 3,
        output_dir: None,
        snapshot_every: 0,
    };
    let cfg = match name {
        "paper-benchmark" => {
            let dt = benchmark_dt(kind);
            RunConfig {
                sc_width_cells: 256,
                period_cells: 384,
                kappa: 16.0,
                dt,
                t_max: 30_000.0,
                check_interval: ((10.0 / dt).round() as usize).max(1),
                ..base
            }
        }
        "desk" => {
            let dt = desk_dt(kind);
            RunConfig {
                sc_width_cells: 56,
                period_cells: 96,
                kappa: 4.0,
                initial_state: InitialState::Normal,
                dt,
                t_max: 40_000.0,
                check_interval: check_interval_for(dt),
                ..base
            }
        }
        _ => return Err(HarnessError::UnknownPreset(name.to_string())),
    };
    cfg.validate()?;
    Ok(cfg)
}
