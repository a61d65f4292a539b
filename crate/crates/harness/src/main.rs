use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tdgl::run::{run_simulation, Simulation, Termination};
use tdgl::sweep::{stability_sweep, SweepOptions};
use tdgl::{compare_runs, load_config, preset, read_snapshot, HarnessError, Result, RunReport};
use tdgl_core::StepperKind;

#[derive(Parser)]
#[command(name = "tdgl", version, about = "Time-dependent Ginzburg-Landau vortex simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate until equilibrium, t_max or divergence.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        algorithm: Option<StepperKind>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Continue from a snapshot instead of the initial state.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Bisect for the largest stable time step.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        dt_min: f64,
        #[arg(long)]
        dt_max: f64,
        #[arg(long)]
        algorithm: Option<StepperKind>,
        #[arg(long, default_value_t = 0.02)]
        resolution: f64,
        /// Probe length in time units (default: 20 ceil(1/dt) steps).
        #[arg(long)]
        probe_time: Option<f64>,
    },
    /// Print the vortex configuration stored in a snapshot.
    Analyze {
        #[arg(long)]
        snapshot: PathBuf,
    },
    /// Write a named configuration (paper-benchmark, desk).
    Preset {
        name: String,
        #[arg(long, default_value = "IV")]
        algorithm: StepperKind,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare two run reports.
    Compare { report_a: PathBuf, report_b: PathBuf },
}

fn print_report(r: &RunReport) {
    println!("algorithm       {}", r.algorithm);
    println!("termination     {}", r.termination.name());
    println!("dt              {}", r.dt);
    println!("steps (N)       {}", r.steps);
    println!("N dt            {:.6}", r.physical_time);
    println!("wall (T)        {:.3} s", r.wall_seconds);
    println!("cost (C)        {:.3e} s/step", r.cost_per_step);
    if let Some(e) = r.final_energy {
        println!("energy          {e:.10}");
    }
    let c = &r.final_configuration;
    println!("vortices        {}", c.count);
    if let Some(l) = c.mean_bond_length {
        println!("bond length     {l:.6}");
    }
    if let Some(a) = c.mean_bond_angle {
        println!("bond angle      {a:.6}");
    }
    if let Some(s) = r.divergence_step {
        println!("diverged at     step {s}");
    }
}

fn execute(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run {
            config,
            algorithm,
            dt,
            t_max,
            output_dir,
            resume,
        } => {
            let mut cfg = load_config(&config)?;
            cfg.algorithm = algorithm.unwrap_or(cfg.algorithm);
            cfg.dt = dt.unwrap_or(cfg.dt);
            cfg.t_max = t_max.unwrap_or(cfg.t_max);
            if output_dir.is_some() {
                cfg.output_dir = output_dir;
            }
            cfg.validate()?;
            let mut sim = match resume {
                Some(path) => {
                    let (state, header) = read_snapshot(&path)?;
                    Simulation::resume(&cfg, state, &header)?
                }
                None => Simulation::new(&cfg)?,
            };
            let report = run_simulation(&mut sim)?;
            print_report(&report);
            Ok(if report.termination == Termination::Divergence {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Sweep {
            config,
            dt_min,
            dt_max,
            algorithm,
            resolution,
            probe_time,
        } => {
            let mut cfg = load_config(&config)?;
            cfg.algorithm = algorithm.unwrap_or(cfg.algorithm);
            let opts = SweepOptions {
                dt_min,
                dt_max,
                resolution,
                probe_time,
            };
            let result = stability_sweep(&cfg, opts)?;
            for p in &result.probes {
                match p.diverged_at {
                    Some(t) => println!("dt {:<12.6e} steps {:<10} diverged at t = {t:.3}", p.dt, p.steps),
                    None => println!("dt {:<12.6e} steps {:<10} stable", p.dt, p.steps),
                }
            }
            match result.max_stable_dt {
                Some(dt) => {
                    println!("max stable dt {dt:.6e}");
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("no stable dt in range");
                    Ok(ExitCode::from(2))
                }
            }
        }
        Command::Analyze { snapshot } => {
            let (state, header) = read_snapshot(&snapshot)?;
            let sim = Simulation::resume(&header.config, state, &header)?;
            let c = sim.configuration();
            println!("t               {}", header.t);
            println!("step            {}", header.step);
            println!("energy          {:.10}", sim.energy());
            println!("vortices        {}", c.count);
            match c.mean_bond_length {
                Some(l) => println!("bond length     {l:.6}"),
                None => println!("bond length     undefined"),
            }
            match c.mean_bond_angle {
                Some(a) => println!("bond angle      {a:.6}"),
                None => println!("bond angle      undefined"),
            }
            for (x, y) in &c.positions {
                println!("{x:.9} {y:.9}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Preset { name, algorithm, output } => {
            let text = preset(&name, algorithm)?.to_text();
            match output {
                Some(path) => std::fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { report_a, report_b } => {
            let a = RunReport::read(&report_a)?;
            let b = RunReport::read(&report_b)?;
            println!("{}", compare_runs(&a, &b));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
