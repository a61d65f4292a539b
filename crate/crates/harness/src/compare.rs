use std::fmt;

use tdgl_core::vortex::configs_equivalent;

use crate::run::RunReport;

/// One row of the performance table: `dt`, `N`, `C` (s/step), `T` (hours).
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub label: String,
    pub dt: f64,
    pub steps: u64,
    pub cost_per_step: f64,
    pub wall_hours: f64,
    pub physical_time: f64,
}

impl TableRow {
    pub fn from_report(label: &str, r: &RunReport) -> Self {
        TableRow {
            label: label.to_string(),
            dt: r.dt,
            steps: r.steps,
            cost_per_step: r.cost_per_step,
            wall_hours: r.wall_hours(),
            physical_time: r.physical_time,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub equivalent: bool,
    pub count_delta: i64,
    pub length_delta: f64,
    pub angle_delta: f64,
    /// `|N_a dt_a - N_b dt_b| / max(N_a dt_a, N_b dt_b)`.
    pub time_spread: f64,
    pub rows: [TableRow; 2],
}

pub fn compare_runs(a: &RunReport, b: &RunReport) -> Comparison {
    let r = configs_equivalent(&a.final_configuration.to_configuration(), &b.final_configuration.to_configuration());
    let (ta, tb) = (a.physical_time, b.physical_time);
    let top = ta.max(tb);
    Comparison {
        equivalent: r.equivalent,
        count_delta: r.count_delta,
        length_delta: r.length_delta,
        angle_delta: r.angle_delta,
        time_spread: if top > 0.0 { (ta - tb).abs() / top } else { 0.0 },
        rows: [
            TableRow::from_report(&format!("{} (a)", a.algorithm), a),
            TableRow::from_report(&format!("{} (b)", b.algorithm), b),
        ],
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<10} {:>10} {:>12} {:>12} {:>10} {:>12}", "algorithm", "dt", "N", "C [s]", "T [h]", "N dt")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<10} {:>10.4} {:>12} {:>12.3e} {:>10.4} {:>12.2}",
                r.label, r.dt, r.steps, r.cost_per_step, r.wall_hours, r.physical_time
            )?;
        }
        writeln!(f, "count delta        {}", self.count_delta)?;
        writeln!(f, "bond length delta  {:.3e}", self.length_delta)?;
        writeln!(f, "bond angle delta   {:.3e}", self.angle_delta)?;
        writeln!(f, "N dt spread        {:.1}%", 100.0 * self.time_spread)?;
        write!(f, "equivalent         {}", if self.equivalent { "yes" } else { "no" })
    }
}
