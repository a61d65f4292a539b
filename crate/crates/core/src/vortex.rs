//! Vortex detection, positions, lattice statistics and equilibrium tests.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;

use crate::geometry::DomainGeometry;
use crate::grid::GridArray;
use crate::operators::{self, LinkVariables};
use crate::state::{FieldState, PhysicsParams};

/// Corners with `|psi|` below this make a plaquette indeterminate.
pub const AMPLITUDE_FLOOR: f64 = 1e-12;
/// Bond cutoff as a multiple of the mean nearest-neighbour distance.
pub const BOND_CUTOFF: f64 = 1.35;
/// Angular gaps wider than this at a vortex are open wedges, not bond angles.
pub const MAX_BOND_GAP: f64 = 0.75 * PI;

/// Winding number per superconducting plaquette.
///
/// Plaquette `(i, j)` has lower-left corner `(i, j)`, with `i` in
/// `n_sx..n_ex` and `j` in `1..=n_y`. `None` marks an indeterminate plaquette.
#[derive(Debug, Clone, PartialEq)]
pub struct WindingField {
    pub w: GridArray<Option<i32>>,
}

impl WindingField {
    /// Plaquettes with non-zero winding in row-major order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, i32)> + '_ {
        let c0 = self.w.first_col();
        (1..self.w.rows()).flat_map(move |j| {
            self.w
                .row(j)
                .iter()
                .enumerate()
                .filter_map(move |(k, w)| match w {
                    Some(w) if *w != 0 => Some((c0 + k, j, *w)),
                    _ => None,
                })
        })
    }

    pub fn total(&self) -> i64 {
        self.w.as_slice().iter().flatten().map(|&w| w as i64).sum()
    }

    pub fn indeterminate(&self) -> usize {
        self.w.as_slice()[self.w.cols()..].iter().filter(|w| w.is_none()).count()
    }
}

#[inline]
fn wrap_phase(z: Complex64) -> f64 {
    // atan2 gives (-pi, pi]
    z.im.atan2(z.re)
}

/// Winding numbers from the gauge-invariant link products around each
/// superconducting plaquette, with the enclosed-flux correction.
pub fn winding_numbers(
    psi: &GridArray<Complex64>,
    links: &LinkVariables,
    b: &GridArray<f64>,
    geom: &DomainGeometry,
    kappa: f64,
) -> WindingField {
    let cols = geom.n_ex - geom.n_sx;
    let mut w = GridArray::filled(geom.n_sx, cols, geom.n_y + 1, Some(0));
    let flux = geom.h_x * geom.h_y / kappa;
    for j in 1..=geom.n_y {
        for i in geom.n_sx..geom.n_ex {
            let p00 = psi[(i, j)];
            let p10 = psi[(i + 1, j)];
            let p11 = psi[(i + 1, j + 1)];
            let p01 = psi[(i, j + 1)];
            if [p00, p10, p11, p01].iter().any(|p| p.norm() < AMPLITUDE_FLOOR) {
                w[(i, j)] = None;
                continue;
            }
            let sum = wrap_phase(p00.conj() * links.u_x[(i, j)] * p10)
                + wrap_phase(p10.conj() * links.u_y[(i + 1, j)] * p11)
                + wrap_phase(p11.conj() * links.u_x[(i, j + 1)].conj() * p01)
                + wrap_phase(p01.conj() * links.u_y[(i, j)].conj() * p00);
            w[(i, j)] = Some(((sum + flux * b[(i, j)]) / (2.0 * PI)).round() as i32);
        }
    }
    WindingField { w }
}

/// Zero of the bilinear interpolant `a0 + a1 s + a2 t + a3 s t` in the unit
/// square, if any.
fn bilinear_zero(a0: Complex64, a1: Complex64, a2: Complex64, a3: Complex64) -> Option<(f64, f64)> {
    // t real requires Im[(a0 + a1 s) conj(a2 + a3 s)] = 0
    let c0 = (a0 * a2.conj()).im;
    let c1 = (a0 * a3.conj()).im + (a1 * a2.conj()).im;
    let c2 = (a1 * a3.conj()).im;
    let scale = c0.abs().max(c1.abs()).max(c2.abs());
    if scale == 0.0 {
        return None;
    }
    let mut roots = [f64::NAN; 2];
    if c2.abs() <= 1e-14 * scale {
        if c1 != 0.0 {
            roots[0] = -c0 / c1;
        }
    } else {
        let disc = c1 * c1 - 4.0 * c2 * c0;
        if disc < 0.0 {
            return None;
        }
        let q = -0.5 * (c1 + c1.signum() * disc.sqrt());
        if q != 0.0 {
            roots[0] = q / c2;
            roots[1] = c0 / q;
        } else {
            roots[0] = 0.0;
        }
    }
    const EPS: f64 = 1e-9;
    let mut best: Option<(f64, f64)> = None;
    for s in roots.into_iter().filter(|s| s.is_finite()) {
        if !(-EPS..=1.0 + EPS).contains(&s) {
            continue;
        }
        let num = a0 + a1 * s;
        let den = a2 + a3 * s;
        let d2 = den.norm_sqr();
        if d2 == 0.0 {
            continue;
        }
        let t = -(num * den.conj()).re / d2;
        if !(-EPS..=1.0 + EPS).contains(&t) {
            continue;
        }
        let cand = (s.clamp(0.0, 1.0), t.clamp(0.0, 1.0));
        let dist = |(s, t): (f64, f64)| (s - 0.5).powi(2) + (t - 0.5).powi(2);
        if best.is_none_or(|b| dist(cand) < dist(b)) {
            best = Some(cand);
        }
    }
    best
}

/// Sub-cell positions of the vortices in `windings`, in row-major plaquette
/// order, with `y` folded into `[0, period)`.
///
/// Corner values are transported into the gauge of the lower-left corner
/// before interpolating, so the result is gauge invariant.
pub fn vortex_positions(
    psi: &GridArray<Complex64>,
    links: &LinkVariables,
    windings: &WindingField,
    geom: &DomainGeometry,
) -> Vec<(f64, f64)> {
    let period = geom.period_y();
    windings
        .nonzero()
        .map(|(i, j, _)| {
            let q00 = psi[(i, j)];
            let q10 = links.u_x[(i, j)] * psi[(i + 1, j)];
            let q01 = links.u_y[(i, j)] * psi[(i, j + 1)];
            let q11 = links.u_x[(i, j)] * links.u_y[(i + 1, j)] * psi[(i + 1, j + 1)];
            let (s, t) = bilinear_zero(q00, q10 - q00, q01 - q00, q11 - q10 - q01 + q00)
                .unwrap_or_else(|| {
                    let corners = [(0.0, 0.0, q00), (1.0, 0.0, q10), (0.0, 1.0, q01), (1.0, 1.0, q11)];
                    let (mut ws, mut ss, mut ts) = (0.0, 0.0, 0.0);
                    for (s, t, q) in corners {
                        let wgt = 1.0 / q.norm().max(AMPLITUDE_FLOOR);
                        ws += wgt;
                        ss += wgt * s;
                        ts += wgt * t;
                    }
                    (ss / ws, ts / ws)
                });
            let x = geom.x(i) + s * geom.h_x;
            let y = geom.y(j) + t * geom.h_y;
            let y = y - period * (y / period).floor();
            let y = if y >= period { y - period } else { y };
            (x, y)
        })
        .collect()
}

#[inline]
fn min_image(d: f64, period: f64) -> f64 {
    d - period * (d / period).round()
}

#[inline]
fn separation(a: (f64, f64), b: (f64, f64), period: f64) -> (f64, f64) {
    (b.0 - a.0, min_image(b.1 - a.1, period))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BondStatistics {
    pub bonds: usize,
    pub mean_length: Option<f64>,
    pub mean_angle: Option<f64>,
}

/// Mean bond length and mean angle between angularly adjacent bonds.
///
/// Bonds join pairs closer than [`BOND_CUTOFF`] times the mean nearest
/// neighbour distance, using minimum-image separations in `y`. Angular gaps
/// wider than [`MAX_BOND_GAP`] (vortices at the open edges) are skipped.
pub fn bond_statistics(positions: &[(f64, f64)], period_y: f64) -> BondStatistics {
    let n = positions.len();
    let empty = BondStatistics {
        bonds: 0,
        mean_length: None,
        mean_angle: None,
    };
    if n < 2 {
        return empty;
    }
    let dist = |a: usize, b: usize| {
        let (dx, dy) = separation(positions[a], positions[b], period_y);
        dx.hypot(dy)
    };
    let mut nn_sum = 0.0;
    for a in 0..n {
        let nn = (0..n).filter(|&b| b != a).map(|b| dist(a, b)).fold(f64::INFINITY, f64::min);
        nn_sum += nn;
    }
    let cutoff = BOND_CUTOFF * nn_sum / n as f64;

    let mut bond_angles: Vec<Vec<f64>> = (0..n).map(|_| Vec::new()).collect();
    let (mut bonds, mut length_sum) = (0usize, 0.0);
    for a in 0..n {
        for b in a + 1..n {
            let (dx, dy) = separation(positions[a], positions[b], period_y);
            let d = dx.hypot(dy);
            if d <= cutoff {
                bonds += 1;
                length_sum += d;
                bond_angles[a].push(dy.atan2(dx));
                bond_angles[b].push((-dy).atan2(-dx));
            }
        }
    }
    if bonds == 0 {
        return empty;
    }
    let (mut gaps, mut gap_sum) = (0usize, 0.0);
    if n >= 3 {
        for angles in &mut bond_angles {
            if angles.len() < 2 {
                continue;
            }
            angles.sort_by(f64::total_cmp);
            for k in 0..angles.len() {
                let next = if k + 1 < angles.len() { angles[k + 1] } else { angles[0] + 2.0 * PI };
                let gap = next - angles[k];
                if gap <= MAX_BOND_GAP {
                    gaps += 1;
                    gap_sum += gap;
                }
            }
        }
    }
    BondStatistics {
        bonds,
        mean_length: Some(length_sum / bonds as f64),
        mean_angle: (gaps > 0).then(|| gap_sum / gaps as f64),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VortexConfiguration {
    pub positions: Vec<(f64, f64)>,
    pub count: usize,
    pub mean_bond_length: Option<f64>,
    pub mean_bond_angle: Option<f64>,
    pub t: f64,
}

impl VortexConfiguration {
    pub fn new(positions: Vec<(f64, f64)>, period_y: f64, t: f64) -> Self {
        let stats = bond_statistics(&positions, period_y);
        VortexConfiguration {
            count: positions.len(),
            positions,
            mean_bond_length: stats.mean_length,
            mean_bond_angle: stats.mean_angle,
            t,
        }
    }

    /// Detects the vortices of a synchronized state.
    pub fn from_state(state: &FieldState, params: &PhysicsParams, geom: &DomainGeometry) -> Self {
        let links = operators::link_variables(&state.a_x, &state.a_y, geom, params.kappa);
        let b = operators::discrete_b(&state.a_x, &state.a_y, &params.applied, geom).b;
        let w = winding_numbers(&state.psi, &links, &b, geom, params.kappa);
        let positions = vortex_positions(&state.psi, &links, &w, geom);
        VortexConfiguration::new(positions, geom.period_y(), state.t)
    }
}

/// Largest displacement under greedy nearest matching; `None` if the counts
/// differ.
pub fn max_displacement(a: &[(f64, f64)], b: &[(f64, f64)], period_y: f64) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (p, &pa) in a.iter().enumerate() {
        for (q, &pb) in b.iter().enumerate() {
            let (dx, dy) = separation(pa, pb, period_y);
            pairs.push((dx.hypot(dy), p, q));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut used_a = alloc::vec![false; a.len()];
    let mut used_b = alloc::vec![false; b.len()];
    let (mut matched, mut worst) = (0, 0.0f64);
    for (d, p, q) in pairs {
        if matched == a.len() {
            break;
        }
        if !used_a[p] && !used_b[q] {
            used_a[p] = true;
            used_b[q] = true;
            matched += 1;
            worst = worst.max(d);
        }
    }
    Some(worst)
}

/// Declares equilibrium after enough consecutive quiet checks.
#[derive(Debug, Clone)]
pub struct EquilibriumMonitor {
    pub check_interval: usize,
    pub tolerance: f64,
    pub required_passes: usize,
    pub period_y: f64,
    previous: Option<VortexConfiguration>,
    passes: usize,
    last_delta: Option<f64>,
}

impl EquilibriumMonitor {
    pub fn new(check_interval: usize, tolerance: f64, required_passes: usize, period_y: f64) -> crate::Result<Self> {
        if !(tolerance > 0.0) {
            return Err(crate::Error::InvalidParameter {
                name: "position_tolerance",
                reason: "must be positive",
            });
        }
        if check_interval == 0 || required_passes == 0 {
            return Err(crate::Error::InvalidParameter {
                name: "check_interval",
                reason: "check interval and pass count must be at least 1",
            });
        }
        Ok(EquilibriumMonitor {
            check_interval,
            tolerance,
            required_passes,
            period_y,
            previous: None,
            passes: 0,
            last_delta: None,
        })
    }

    /// Records a sample; true once the last `required_passes` checks kept the
    /// count and moved no vortex by `tolerance` or more.
    pub fn check(&mut self, config: VortexConfiguration) -> bool {
        let delta = self
            .previous
            .as_ref()
            .and_then(|p| max_displacement(&p.positions, &config.positions, self.period_y));
        self.last_delta = delta;
        match delta {
            Some(d) if d < self.tolerance => self.passes += 1,
            _ => self.passes = 0,
        }
        self.previous = Some(config);
        self.passes >= self.required_passes
    }

    /// Displacement measured by the latest check, if the counts matched.
    pub fn last_delta(&self) -> Option<f64> {
        self.last_delta
    }

    pub fn passes(&self) -> usize {
        self.passes
    }

    pub fn reset(&mut self) {
        self.previous = None;
        self.passes = 0;
        self.last_delta = None;
    }
}

pub const LENGTH_TOLERANCE: f64 = 1e-3;
pub const ANGLE_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub count_delta: i64,
    pub length_delta: f64,
    pub angle_delta: f64,
}

fn option_delta(a: Option<f64>, b: Option<f64>) -> f64 {
    match (a, b) {
        (Some(a), Some(b)) => (a - b).abs(),
        (None, None) => 0.0,
        _ => f64::NAN,
    }
}

pub fn configs_equivalent(c1: &VortexConfiguration, c2: &VortexConfiguration) -> EquivalenceReport {
    let count_delta = c2.count as i64 - c1.count as i64;
    let length_delta = option_delta(c1.mean_bond_length, c2.mean_bond_length);
    let angle_delta = option_delta(c1.mean_bond_angle, c2.mean_bond_angle);
    EquivalenceReport {
        equivalent: count_delta == 0 && length_delta < LENGTH_TOLERANCE && angle_delta < ANGLE_TOLERANCE,
        count_delta,
        length_delta,
        angle_delta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::FieldState;

    fn synthetic(geom: &DomainGeometry, x0: f64, y0: f64) -> GridArray<Complex64> {
        let mut psi = FieldState::zeros(geom).psi;
        for j in 0..geom.rows() {
            for i in geom.n_sx - 1..=geom.n_ex + 1 {
                let z = Complex64::new(geom.x(i) - x0, geom.y(j) - y0);
                psi[(i, j)] = z / z.norm();
            }
        }
        psi
    }

    fn no_field(geom: &DomainGeometry) -> (LinkVariables, GridArray<f64>) {
        (LinkVariables::identity(geom), FieldState::zeros(geom).a_x)
    }

    #[test]
    fn uniform_state_has_no_vortices() {
        let g = DomainGeometry::build(8, 2, 8, 0.5, 0.5).unwrap();
        let mut psi = FieldState::zeros(&g).psi;
        psi.fill(Complex64::new(0.7, 0.1));
        let (l, b) = no_field(&g);
        let w = winding_numbers(&psi, &l, &b, &g, 2.0);
        assert_eq!(w.nonzero().count(), 0);
        assert_eq!(w.indeterminate(), 0);
    }

    #[test]
    fn single_vortex_and_antivortex() {
        let g = DomainGeometry::build(8, 2, 8, 0.5, 0.5).unwrap();
        let (x0, y0) = (g.x(5) + 0.3 * g.h_x, g.y(4) + 0.6 * g.h_y);
        let psi = synthetic(&g, x0, y0);
        let (l, b) = no_field(&g);
        let w = winding_numbers(&psi, &l, &b, &g, 2.0);
        let found: Vec<_> = w.nonzero().collect();
        assert_eq!(found, [(5, 4, 1)]);
        let anti = psi.map(|z| z.conj());
        let w = winding_numbers(&anti, &l, &b, &g, 2.0);
        assert_eq!(w.nonzero().collect::<Vec<_>>(), [(5, 4, -1)]);
    }

    #[test]
    fn zero_corner_is_indeterminate() {
        let g = DomainGeometry::build(8, 2, 8, 0.5, 0.5).unwrap();
        let mut psi = synthetic(&g, 1.23, 1.71);
        psi[(6, 3)] = Complex64::new(0.0, 0.0);
        let (l, b) = no_field(&g);
        let w = winding_numbers(&psi, &l, &b, &g, 2.0);
        assert_eq!(w.w[(6, 3)], None);
        assert_eq!(w.w[(5, 2)], None);
        assert_eq!(w.indeterminate(), 4);
    }

    #[test]
    fn positions_of_linear_vortex_are_exact() {
        let g = DomainGeometry::build(8, 2, 8, 0.5, 0.5).unwrap();
        let (l, b) = no_field(&g);
        for (fx, fy) in [(0.5, 0.5), (0.2, 0.7), (0.9, 0.1)] {
            let (x0, y0) = (g.x(6) + fx * g.h_x, g.y(3) + fy * g.h_y);
            let mut psi = FieldState::zeros(&g).psi;
            for j in 0..g.rows() {
                for i in g.n_sx - 1..=g.n_ex + 1 {
                    psi[(i, j)] = Complex64::new(g.x(i) - x0, g.y(j) - y0);
                }
            }
            let w = winding_numbers(&psi, &l, &b, &g, 2.0);
            let p = vortex_positions(&psi, &l, &w, &g);
            assert_eq!(p.len(), 1);
            assert!((p[0].0 - x0).abs() < 1e-12 && (p[0].1 - y0).abs() < 1e-12, "{p:?}");
        }
    }

    #[test]
    fn bilinear_zero_outside_cell_is_none() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(bilinear_zero(one, zero, zero, zero), None);
        // f = (s - 2) + i(t - 0.5) vanishes at s = 2
        let f = bilinear_zero(Complex64::new(-2.0, -0.5), one, Complex64::new(0.0, 1.0), zero);
        assert_eq!(f, None);
    }

    fn hexagonal(a: f64, cols: usize, rows: usize) -> (Vec<(f64, f64)>, f64) {
        let dx = a * 3f64.sqrt() / 2.0;
        let mut p = Vec::new();
        for c in 0..cols {
            for r in 0..rows {
                let off = if c % 2 == 1 { 0.5 * a } else { 0.0 };
                p.push((1.0 + c as f64 * dx, r as f64 * a + off));
            }
        }
        (p, rows as f64 * a)
    }

    #[test]
    fn hexagonal_lattice_statistics() {
        let (p, period) = hexagonal(2.0, 6, 8);
        let s = bond_statistics(&p, period);
        assert!((s.mean_length.unwrap() - 2.0).abs() < 1e-12);
        assert!((s.mean_angle.unwrap() - PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn square_lattice_statistics() {
        let a = 1.5;
        let p: Vec<_> = (0..5).flat_map(|c| (0..6).map(move |r| (c as f64 * a, r as f64 * a))).collect();
        let s = bond_statistics(&p, 6.0 * a);
        assert!((s.mean_length.unwrap() - a).abs() < 1e-12);
        assert!((s.mean_angle.unwrap() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn small_sets_have_undefined_statistics() {
        assert_eq!(bond_statistics(&[(0.0, 0.0)], 10.0).mean_length, None);
        let s = bond_statistics(&[(0.0, 0.0), (1.0, 0.0)], 10.0);
        assert_eq!(s.mean_length, Some(1.0));
        assert_eq!(s.mean_angle, None);
    }

    #[test]
    fn monitor_thresholds() {
        let p = alloc::vec![(1.0, 1.0), (3.0, 2.0)];
        let c = |p: Vec<(f64, f64)>| VortexConfiguration::new(p, 10.0, 0.0);
        let mut m = EquilibriumMonitor::new(1, 1e-6, 3, 10.0).unwrap();
        assert!(!m.check(c(p.clone())));
        assert!(!m.check(c(p.clone())));
        assert!(!m.check(c(p.clone())));
        assert!(m.check(c(p.clone())));
        let mut moved = p.clone();
        moved[1].0 += 1e-5;
        assert!(!m.check(c(moved)));
        assert_eq!(m.passes(), 0);
        assert!(m.last_delta().unwrap() > 9e-6);
        assert!(!m.check(c(p[..1].to_vec())));
        assert_eq!(m.last_delta(), None);
        assert!(EquilibriumMonitor::new(1, 0.0, 3, 10.0).is_err());
    }

    #[test]
    fn matching_folds_the_period() {
        let a = [(1.0, 0.01)];
        let b = [(1.0, 9.99)];
        assert!((max_displacement(&a, &b, 10.0).unwrap() - 0.02).abs() < 1e-12);
    }

    #[test]
    fn equivalence_report() {
        let (p, period) = hexagonal(2.0, 4, 6);
        let c1 = VortexConfiguration::new(p.clone(), period, 1.0);
        let r = configs_equivalent(&c1, &c1);
        assert!(r.equivalent);
        assert_eq!((r.count_delta, r.length_delta, r.angle_delta), (0, 0.0, 0.0));
        let c2 = VortexConfiguration::new(p[1..].to_vec(), period, 1.0);
        let r = configs_equivalent(&c1, &c2);
        assert!(!r.equivalent);
        assert_eq!(r.count_delta, -1);
    }
}
