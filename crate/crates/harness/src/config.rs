//! `key = value` run configuration files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use tdgl_core::state::{init_meissner_state, init_normal_state};
use tdgl_core::{DomainGeometry, FieldState, PhysicsParams, StepperKind};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    /// `psi = sqrt(tau)`, `A = 0`: the applied field must enter through the surface.
    Meissner,
    /// `psi ~ 0`, `A_y = H x`: the flux threads the sample from the start.
    Normal,
}

impl InitialState {
    pub fn name(self) -> &'static str {
        match self {
            InitialState::Meissner => "meissner",
            InitialState::Normal => "normal",
        }
    }
}

impl FromStr for InitialState {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "meissner" => Ok(InitialState::Meissner),
            "normal" => Ok(InitialState::Normal),
            _ => Err("expected `meissner` or `normal`".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sc_width_cells: usize,
    pub blanket_cells: usize,
    pub period_cells: usize,
    pub h_x: f64,
    pub h_y: f64,
    pub kappa: f64,
    pub sigma: f64,
    pub h_left: f64,
    pub h_right: f64,
    /// Uniform `tau` on the superconductor.
    pub tau: f64,
    pub initial_state: InitialState,
    pub algorithm: StepperKind,
    pub dt: f64,
    pub t_max: f64,
    pub seed: u64,
    pub noise_amp: f64,
    pub check_interval: usize,
    pub position_tolerance: f64,
    pub consecutive_passes: usize,
    pub output_dir: Option<PathBuf>,
    /// Steps between snapshots, written at the first monitoring sample at or
    /// after each multiple; 0 writes only the final one.
    pub snapshot_every: usize,
}

pub const KEYS: [&str; 21] = [
    "sc_width_cells",
    "blanket_cells",
    "period_cells",
    "h_x",
    "h_y",
    "kappa",
    "sigma",
    "h_left",
    "h_right",
    "tau",
    "initial_state",
    "algorithm",
    "dt",
    "t_max",
    "seed",
    "noise_amp",
    "check_interval",
    "position_tolerance",
    "consecutive_passes",
    "output_dir",
    "snapshot_every",
];

/// Raw `key = value` pairs with the line each came from.
pub(crate) type Pairs = BTreeMap<String, (usize, String)>;

pub(crate) fn parse_pairs(text: &str, allowed: &[&str]) -> Result<Pairs> {
    let mut pairs = Pairs::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            return Err(HarnessError::Parse {
                line,
                message: format!("expected `key = value`, found `{body}`"),
            });
        };
        let key = key.trim();
        if !allowed.contains(&key) {
            return Err(HarnessError::Parse {
                line,
                message: format!("unknown key `{key}`"),
            });
        }
        if pairs.insert(key.to_string(), (line, value.trim().to_string())).is_some() {
            return Err(HarnessError::Parse {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
    }
    Ok(pairs)
}

pub(crate) fn get<T: FromStr>(pairs: &Pairs, key: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match pairs.get(key) {
        None => Ok(None),
        Some((line, v)) => v.parse().map(Some).map_err(|e| HarnessError::Parse {
            line: *line,
            message: format!("`{key}`: {e}"),
        }),
    }
}

fn required<T: FromStr>(pairs: &Pairs, key: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    get(pairs, key)?.ok_or_else(|| HarnessError::invalid(key, "missing required key"))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_pairs(&parse_pairs(text, &KEYS)?)
    }

    pub(crate) fn from_pairs(p: &Pairs) -> Result<Self> {
        let cfg = RunConfig {
            sc_width_cells: required(p, "sc_width_cells")?,
            blanket_cells: required(p, "blanket_cells")?,
            period_cells: required(p, "period_cells")?,
            h_x: get(p, "h_x")?.unwrap_or(0.5),
            h_y: get(p, "h_y")?.unwrap_or(0.5),
            kappa: required(p, "kappa")?,
            sigma: get(p, "sigma")?.unwrap_or(1.0),
            h_left: get(p, "h_left")?.unwrap_or(0.0),
            h_right: get(p, "h_right")?.unwrap_or(0.0),
            tau: get(p, "tau")?.unwrap_or(1.0),
            initial_state: get(p, "initial_state")?.unwrap_or(InitialState::Meissner),
            algorithm: required(p, "algorithm")?,
            dt: required(p, "dt")?,
            t_max: required(p, "t_max")?,
            seed: get(p, "seed")?.unwrap_or(0),
            noise_amp: get(p, "noise_amp")?.unwrap_or(1e-3),
            check_interval: get(p, "check_interval")?.unwrap_or(100),
            position_tolerance: get(p, "position_tolerance")?.unwrap_or(1e-6),
            consecutive_passes: get(p, "consecutive_passes")?.unwrap_or(3),
            output_dir: get::<String>(p, "output_dir")?.filter(|s| !s.is_empty()).map(PathBuf::from),
            snapshot_every: get(p, "snapshot_every")?.unwrap_or(0),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |key: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(HarnessError::invalid(key, format!("must be positive and finite, got {v}")))
            }
        };
        let at_least_one = |key: &str, v: usize| {
            if v >= 1 {
                Ok(())
            } else {
                Err(HarnessError::invalid(key, "must be at least 1"))
            }
        };
        at_least_one("sc_width_cells", self.sc_width_cells)?;
        at_least_one("blanket_cells", self.blanket_cells)?;
        at_least_one("period_cells", self.period_cells)?;
        positive("h_x", self.h_x)?;
        positive("h_y", self.h_y)?;
        positive("kappa", self.kappa)?;
        positive("sigma", self.sigma)?;
        positive("tau", self.tau)?;
        positive("dt", self.dt)?;
        positive("position_tolerance", self.position_tolerance)?;
        at_least_one("check_interval", self.check_interval)?;
        at_least_one("consecutive_passes", self.consecutive_passes)?;
        for (key, v) in [("h_left", self.h_left), ("h_right", self.h_right)] {
            if !v.is_finite() {
                return Err(HarnessError::invalid(key, "must be finite"));
            }
        }
        if !(self.t_max.is_finite() && self.t_max >= 0.0) {
            return Err(HarnessError::invalid("t_max", "must be non-negative and finite"));
        }
        if !(self.noise_amp.is_finite() && self.noise_amp >= 0.0) {
            return Err(HarnessError::invalid("noise_amp", "must be non-negative and finite"));
        }
        Ok(())
    }

    /// The file form; floats are written in their shortest round-trip form.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| writeln!(s, "{k} = {v}").unwrap();
        kv("sc_width_cells", self.sc_width_cells.to_string());
        kv("blanket_cells", self.blanket_cells.to_string());
        kv("period_cells", self.period_cells.to_string());
        kv("h_x", format!("{:?}", self.h_x));
        kv("h_y", format!("{:?}", self.h_y));
        kv("kappa", format!("{:?}", self.kappa));
        kv("sigma", format!("{:?}", self.sigma));
        kv("h_left", format!("{:?}", self.h_left));
        kv("h_right", format!("{:?}", self.h_right));
        kv("tau", format!("{:?}", self.tau));
        kv("initial_state", self.initial_state.name().into());
        kv("algorithm", self.algorithm.roman().into());
        kv("dt", format!("{:?}", self.dt));
        kv("t_max", format!("{:?}", self.t_max));
        kv("seed", self.seed.to_string());
        kv("noise_amp", format!("{:?}", self.noise_amp));
        kv("check_interval", self.check_interval.to_string());
        kv("position_tolerance", format!("{:?}", self.position_tolerance));
        kv("consecutive_passes", self.consecutive_passes.to_string());
        kv(
            "output_dir",
            self.output_dir.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
        );
        kv("snapshot_every", self.snapshot_every.to_string());
        s
    }

    pub fn geometry(&self) -> Result<DomainGeometry> {
        Ok(DomainGeometry::build(
            self.sc_width_cells,
            self.blanket_cells,
            self.period_cells,
            self.h_x,
            self.h_y,
        )?)
    }

    pub fn params(&self, geom: &DomainGeometry) -> Result<PhysicsParams> {
        let p = PhysicsParams::uniform(geom, self.kappa, self.sigma, 0.0)?;
        let mut p = p.with_tau(geom, |_, _| self.tau)?;
        p.applied = tdgl_core::AppliedField::uniform(geom, self.h_left, self.h_right);
        p.validate(geom)?;
        Ok(p)
    }

    pub fn initial_state(&self, geom: &DomainGeometry, params: &PhysicsParams) -> Result<FieldState> {
        Ok(match self.initial_state {
            InitialState::Meissner => init_meissner_state(geom, params, self.seed, self.noise_amp)?,
            InitialState::Normal => init_normal_state(geom, params, self.seed, self.noise_amp)?,
        })
    }

    /// Steps needed to reach `t_max` from `t = 0`.
    pub fn max_steps(&self) -> usize {
        (self.t_max / self.dt - 1e-9).ceil().max(0.0) as usize
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    RunConfig::parse(&text)
}
