//! Runs to equilibrium with monitoring, snapshots and a report.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use tdgl_core::operators::gibbs_energy;
use tdgl_core::vortex::EquilibriumMonitor;
use tdgl_core::{DomainGeometry, Error, FieldState, PhysicsParams, Stepper, VortexConfiguration};

use crate::config::RunConfig;
use crate::error::{HarnessError, Result};
use crate::snapshot::{write_snapshot, SnapshotHeader};
use crate::timeseries::{Record, TimeSeriesWriter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Equilibrium,
    TMax,
    Divergence,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::Equilibrium => "equilibrium",
            Termination::TMax => "t_max",
            Termination::Divergence => "divergence",
        }
    }
}

/// Serializable form of a vortex configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationSummary {
    pub t: f64,
    pub count: usize,
    pub mean_bond_length: Option<f64>,
    pub mean_bond_angle: Option<f64>,
    pub positions: Vec<(f64, f64)>,
}

impl From<&VortexConfiguration> for ConfigurationSummary {
    fn from(c: &VortexConfiguration) -> Self {
        ConfigurationSummary {
            t: c.t,
            count: c.count,
            mean_bond_length: c.mean_bond_length,
            mean_bond_angle: c.mean_bond_angle,
            positions: c.positions.clone(),
        }
    }
}

impl ConfigurationSummary {
    pub fn to_configuration(&self) -> VortexConfiguration {
        VortexConfiguration {
            positions: self.positions.clone(),
            count: self.count,
            mean_bond_length: self.mean_bond_length,
            mean_bond_angle: self.mean_bond_angle,
            t: self.t,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: String,
    pub dt: f64,
    /// Steps taken by this run (N).
    pub steps: u64,
    /// `N dt`.
    pub physical_time: f64,
    /// Final simulation time, including any resumed history.
    pub t_final: f64,
    /// Stepping and monitoring time, file output excluded (T).
    pub wall_seconds: f64,
    /// `T / N` (C).
    pub cost_per_step: f64,
    /// Gibbs energy of the final state; absent after a divergence.
    pub final_energy: Option<f64>,
    pub final_configuration: ConfigurationSummary,
    pub period_y: f64,
    pub termination: Termination,
    /// Absolute index of the step that diverged.
    pub divergence_step: Option<u64>,
}

impl RunReport {
    pub fn wall_hours(&self) -> f64 {
        self.wall_seconds / 3600.0
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("report serializes");
        fs::write(path, text + "\n").map_err(|e| HarnessError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| HarnessError::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

/// A configured simulation: fields, stepper and step counter.
pub struct Simulation {
    pub config: RunConfig,
    pub geom: DomainGeometry,
    pub params: PhysicsParams,
    pub state: FieldState,
    /// Steps taken since the initial state.
    pub step: u64,
    stepper: Stepper,
}

impl Simulation {
    pub fn new(config: &RunConfig) -> Result<Self> {
        config.validate()?;
        let geom = config.geometry()?;
        let params = config.params(&geom)?;
        let state = config.initial_state(&geom, &params)?;
        Self::with_state(config, geom, params, state, 0)
    }

    /// Continues from a snapshot. `config` may change run controls (time
    /// step, limits, output); grid and physics must match the snapshot.
    pub fn resume(config: &RunConfig, state: FieldState, header: &SnapshotHeader) -> Result<Self> {
        config.validate()?;
        let h = &header.config;
        let same_grid = (h.sc_width_cells, h.blanket_cells, h.period_cells, h.h_x, h.h_y)
            == (config.sc_width_cells, config.blanket_cells, config.period_cells, config.h_x, config.h_y);
        let same_physics =
            (h.kappa, h.sigma, h.h_left, h.h_right, h.tau) == (config.kappa, config.sigma, config.h_left, config.h_right, config.tau);
        if !(same_grid && same_physics) {
            return Err(HarnessError::Inconsistent("snapshot grid or physics differs from the configuration".into()));
        }
        let geom = config.geometry()?;
        let params = config.params(&geom)?;
        state.check_shape(&geom)?;
        Self::with_state(config, geom, params, state, header.step)
    }

    fn with_state(config: &RunConfig, geom: DomainGeometry, params: PhysicsParams, state: FieldState, step: u64) -> Result<Self> {
        let stepper = Stepper::new(config.algorithm, &geom, &params, config.dt)?;
        Ok(Simulation {
            config: config.clone(),
            geom,
            params,
            state,
            step,
            stepper,
        })
    }

    /// Takes `n` steps, stopping at the first error.
    pub fn advance(&mut self, n: u64) -> tdgl_core::Result<()> {
        for _ in 0..n {
            self.stepper.step(&mut self.state, &self.params, &self.geom)?;
            self.step += 1;
        }
        Ok(())
    }

    pub fn configuration(&self) -> VortexConfiguration {
        VortexConfiguration::from_state(&self.state, &self.params, &self.geom)
    }

    pub fn energy(&self) -> f64 {
        gibbs_energy(&self.state, &self.params, &self.geom)
    }

    pub fn header(&self) -> SnapshotHeader {
        SnapshotHeader {
            config: self.config.clone(),
            t: self.state.t,
            step: self.step,
        }
    }

    /// Runs until the monitor fires, `t_max` is reached (counted from the
    /// initial state), or the fields diverge. Monitoring samples are taken
    /// every `check_interval` steps and passed to `on_record`.
    pub fn run_with(&mut self, mut on_record: impl FnMut(&Record, &Simulation) -> Result<()>) -> Result<RunReport> {
        let cfg = self.config.clone();
        let max_steps = cfg.max_steps() as u64;
        let interval = cfg.check_interval as u64;
        let mut monitor =
            EquilibriumMonitor::new(cfg.check_interval, cfg.position_tolerance, cfg.consecutive_passes, self.geom.period_y())?;
        let start_step = self.step;
        let mut wall = Duration::ZERO;

        let clock = Instant::now();
        let (mut last, mut record) = self.sample(&mut monitor);
        wall += clock.elapsed();
        let mut settled = monitor.passes() >= cfg.consecutive_passes;
        on_record(&record, self)?;

        let mut termination = Termination::TMax;
        let mut divergence_step = None;
        while self.step < max_steps {
            if settled {
                termination = Termination::Equilibrium;
                break;
            }
            let next_check = (self.step / interval + 1) * interval;
            let target = next_check.min(max_steps);
            let clock = Instant::now();
            let stepped = self.advance(target - self.step);
            wall += clock.elapsed();
            match stepped {
                Ok(()) => {}
                Err(Error::Divergence { .. }) => {
                    termination = Termination::Divergence;
                    divergence_step = Some(self.step + 1);
                    break;
                }
                Err(e) => return Err(e.into()),
            }
            let clock = Instant::now();
            (last, record) = self.sample(&mut monitor);
            settled = monitor.passes() >= cfg.consecutive_passes;
            wall += clock.elapsed();
            on_record(&record, self)?;
        }
        if settled && termination == Termination::TMax {
            termination = Termination::Equilibrium;
        }

        let steps = self.step - start_step;
        let wall_seconds = wall.as_secs_f64();
        Ok(RunReport {
            algorithm: cfg.algorithm.roman().to_string(),
            dt: cfg.dt,
            steps,
            physical_time: steps as f64 * cfg.dt,
            t_final: self.state.t,
            wall_seconds,
            cost_per_step: if steps > 0 { wall_seconds / steps as f64 } else { 0.0 },
            final_energy: (termination != Termination::Divergence).then(|| record.energy),
            final_configuration: ConfigurationSummary::from(&last),
            period_y: self.geom.period_y(),
            termination,
            divergence_step,
        })
    }

    fn sample(&self, monitor: &mut EquilibriumMonitor) -> (VortexConfiguration, Record) {
        let config = self.configuration();
        monitor.check(config.clone());
        let record = Record {
            step: self.step,
            t: self.state.t,
            energy: self.energy(),
            vortex_count: config.count,
            max_position_delta: monitor.last_delta(),
        };
        (config, record)
    }
}

/// Files written by [`run_to_equilibrium`] under `output_dir`.
pub struct OutputFiles {
    pub dir: PathBuf,
}

impl OutputFiles {
    pub fn timeseries(&self) -> PathBuf {
        self.dir.join("timeseries.csv")
    }
    pub fn report(&self) -> PathBuf {
        self.dir.join("report.json")
    }
    pub fn config(&self) -> PathBuf {
        self.dir.join("run.cfg")
    }
    pub fn final_snapshot(&self) -> PathBuf {
        self.dir.join("final.tdgl")
    }
    pub fn snapshot(&self, step: u64) -> PathBuf {
        self.dir.join(format!("snapshot_{step:010}.tdgl"))
    }
}

/// Runs `sim` and, when `output_dir` is set, writes the time series,
/// periodic and final snapshots, the effective configuration and the report.
pub fn run_simulation(sim: &mut Simulation) -> Result<RunReport> {
    let Some(dir) = sim.config.output_dir.clone() else {
        return sim.run_with(|_, _| Ok(()));
    };
    fs::create_dir_all(&dir).map_err(|e| HarnessError::io(&dir, e))?;
    let files = OutputFiles { dir };
    fs::write(files.config(), sim.config.to_text()).map_err(|e| HarnessError::io(files.config(), e))?;
    let mut csv = TimeSeriesWriter::create(&files.timeseries())?;
    let every = sim.config.snapshot_every as u64;
    let start = sim.step;
    let mut next_snapshot = if every > 0 { (start / every + 1) * every } else { u64::MAX };
    let report = sim.run_with(|record, s| {
        csv.push(record)?;
        // Snapshots land on the first check at or after each multiple of `every`.
        if s.step >= next_snapshot {
            write_snapshot(&s.state, &s.config, s.step, &files.snapshot(s.step))?;
            next_snapshot = (s.step / every + 1) * every;
        }
        Ok(())
    })?;
    csv.finish()?;
    if report.termination != Termination::Divergence {
        write_snapshot(&sim.state, &sim.config, sim.step, &files.final_snapshot())?;
    }
    report.write(&files.report())?;
    Ok(report)
}

pub fn run_to_equilibrium(config: &RunConfig) -> Result<RunReport> {
    run_simulation(&mut Simulation::new(config)?)
}
