//! Time integrators, from fully explicit to fully implicit.
//!
//! * [`StepperKind::ExplicitI`]: forward Euler for `psi`, `A_x` and `A_y`.
//! * [`StepperKind::SemiImplicitII`]: as I, but `D_yy` in the `A_x` equation
//!   and `D_xx` in the `A_y` equation are taken at the new level. The two
//!   coefficient matrices are constant and are factored once.
//! * [`StepperKind::ImplicitIII`]: the potential as in II, then the
//!   correction `phi = psi^{n+1} - psi^n` from the factored operator
//!   `(I - dt L_xx)(I - dt L_yy)`, one sweep per direction, with the
//!   cubic term at the old level.
//! * [`StepperKind::FullyImplicitIV`]: as III with `dt N(psi^n)` replaced by
//!   `S(psi^n) - psi^n`, where `S` is the exact logistic flow of the local
//!   nonlinearity over one step.
//!
//! I and II update `psi` from the old potential and the potential from the
//! old `psi`. III and IV update the potential first so that the new link
//! variables are available for the reduced interface conditions.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::DomainGeometry;
use crate::grid::GridArray;
use crate::operators::{self, LinkVariables, SupercurrentField};
use crate::state::{FieldState, PhysicsParams};
use crate::tridiagonal::{Factorization, TridiagonalSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepperKind {
    ExplicitI,
    SemiImplicitII,
    ImplicitIII,
    FullyImplicitIV,
}

impl StepperKind {
    pub const ALL: [StepperKind; 4] = [
        StepperKind::ExplicitI,
        StepperKind::SemiImplicitII,
        StepperKind::ImplicitIII,
        StepperKind::FullyImplicitIV,
    ];

    pub fn roman(self) -> &'static str {
        match self {
            StepperKind::ExplicitI => "I",
            StepperKind::SemiImplicitII => "II",
            StepperKind::ImplicitIII => "III",
            StepperKind::FullyImplicitIV => "IV",
        }
    }

    fn implicit_potential(self) -> bool {
        self != StepperKind::ExplicitI
    }
}

impl fmt::Display for StepperKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.roman())
    }
}

impl FromStr for StepperKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I" | "1" | "explicit" => Ok(StepperKind::ExplicitI),
            "II" | "2" | "semi-implicit" => Ok(StepperKind::SemiImplicitII),
            "III" | "3" | "implicit" => Ok(StepperKind::ImplicitIII),
            "IV" | "4" | "fully-implicit" => Ok(StepperKind::FullyImplicitIV),
            _ => Err(Error::InvalidParameter {
                name: "algorithm",
                reason: "expected one of I, II, III, IV",
            }),
        }
    }
}

/// Closed-form flow of `x' = 2x(tau - x)`, `x = |psi|^2`, over `dt`, with
/// the phase of `psi` kept.
#[inline]
pub fn semigroup_map(psi: Complex64, tau: f64, dt: f64) -> Complex64 {
    let x = psi.norm_sqr();
    let denom = x + (tau - x) * (-2.0 * tau * dt).exp();
    psi * (tau.sqrt() / denom.sqrt())
}

/// [`semigroup_map`] over the superconducting vertices. Rejects `tau <= 0`
/// and negative `dt`.
pub fn semigroup_s(
    psi: &GridArray<Complex64>,
    tau: &GridArray<f64>,
    dt: f64,
    geom: &DomainGeometry,
) -> Result<GridArray<Complex64>> {
    if !(dt >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: "must be non-negative",
        });
    }
    let mut out = FieldState::psi_array(geom, Complex64::new(0.0, 0.0));
    for j in 1..=geom.n_y {
        for i in geom.n_sx..=geom.n_ex {
            let t = tau[(i, j)];
            if !(t > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "tau",
                    reason: "semigroup map needs tau > 0",
                });
            }
            out[(i, j)] = semigroup_map(psi[(i, j)], t, dt);
        }
    }
    Ok(out)
}

/// The constant systems `(I - dt/sigma D_yy)` (periodic, size `n_y`) and
/// `(I - dt/sigma D_xx)` (size `n_x`, with the edge rows of the field
/// boundary condition).
pub fn potential_systems(
    geom: &DomainGeometry,
    sigma: f64,
    dt: f64,
) -> (TridiagonalSystem<f64>, TridiagonalSystem<f64>) {
    let ry = dt / (sigma * geom.h_y * geom.h_y);
    let rx = dt / (sigma * geom.h_x * geom.h_x);
    let ax = TridiagonalSystem {
        lower: vec![-ry; geom.n_y],
        diag: vec![1.0 + 2.0 * ry; geom.n_y],
        upper: vec![-ry; geom.n_y],
        periodic: true,
    };
    let mut diag = vec![1.0 + 2.0 * rx; geom.n_x];
    diag[0] = 1.0 + rx;
    diag[geom.n_x - 1] = 1.0 + rx;
    let mut lower = vec![-rx; geom.n_x];
    let mut upper = vec![-rx; geom.n_x];
    lower[0] = 0.0;
    upper[geom.n_x - 1] = 0.0;
    let ay = TridiagonalSystem {
        lower,
        diag,
        upper,
        periodic: false,
    };
    (ax, ay)
}

/// What a cached potential factorization was built for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorKey {
    pub dt: f64,
    pub sigma: f64,
    pub h_x: f64,
    pub h_y: f64,
    pub n_x: usize,
    pub n_y: usize,
}

impl FactorKey {
    fn new(geom: &DomainGeometry, sigma: f64, dt: f64) -> Self {
        FactorKey {
            dt,
            sigma,
            h_x: geom.h_x,
            h_y: geom.h_y,
            n_x: geom.n_x,
            n_y: geom.n_y,
        }
    }

    fn matches(&self, other: &FactorKey) -> bool {
        self.dt.to_bits() == other.dt.to_bits()
            && self.sigma.to_bits() == other.sigma.to_bits()
            && self.h_x.to_bits() == other.h_x.to_bits()
            && self.h_y.to_bits() == other.h_y.to_bits()
            && self.n_x == other.n_x
            && self.n_y == other.n_y
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialFactors {
    pub key: FactorKey,
    pub a_x: Factorization<f64>,
    pub a_y: Factorization<f64>,
}

impl PotentialFactors {
    pub fn build(geom: &DomainGeometry, sigma: f64, dt: f64) -> Result<Self> {
        let (sx, sy) = potential_systems(geom, sigma, dt);
        Ok(PotentialFactors {
            key: FactorKey::new(geom, sigma, dt),
            a_x: Factorization::factor(&sx)?,
            a_y: Factorization::factor(&sy)?,
        })
    }
}

/// Scratch storage and cached factorizations for one simulation.
#[derive(Debug, Clone)]
pub struct Workspace {
    geom: DomainGeometry,
    factors: Option<PotentialFactors>,
    links: LinkVariables,
    links_new: LinkVariables,
    // potential the `links` were computed from
    links_src: Option<(GridArray<f64>, GridArray<f64>)>,
    current: SupercurrentField,
    b: GridArray<f64>,
    rhs: GridArray<Complex64>,
    new_ax: GridArray<f64>,
    new_ay: GridArray<f64>,
    line_real: Vec<f64>,
    lower: Vec<Complex64>,
    diag: Vec<Complex64>,
    upper: Vec<Complex64>,
    line: Vec<Complex64>,
    psi_fact: Option<Factorization<Complex64>>,
}

impl Workspace {
    pub fn new(geom: &DomainGeometry) -> Self {
        let edge = FieldState::edge_array(geom);
        Workspace {
            geom: *geom,
            factors: None,
            links: LinkVariables::identity(geom),
            links_new: LinkVariables::identity(geom),
            links_src: None,
            current: SupercurrentField {
                j_x: edge.clone(),
                j_y: edge.clone(),
            },
            b: edge.clone(),
            rhs: FieldState::psi_array(geom, Complex64::new(0.0, 0.0)),
            new_ax: edge.clone(),
            new_ay: edge,
            line_real: Vec::new(),
            lower: Vec::new(),
            diag: Vec::new(),
            upper: Vec::new(),
            line: Vec::new(),
            psi_fact: None,
        }
    }

    pub fn factors(&self) -> Option<&PotentialFactors> {
        self.factors.as_ref()
    }

    fn ensure_geometry(&mut self, geom: &DomainGeometry) {
        if self.geom != *geom {
            *self = Workspace::new(geom);
        }
    }

    fn ensure_factors(&mut self, geom: &DomainGeometry, sigma: f64, dt: f64) -> Result<()> {
        let key = FactorKey::new(geom, sigma, dt);
        if !self.factors.as_ref().is_some_and(|f| f.key.matches(&key)) {
            self.factors = Some(PotentialFactors::build(geom, sigma, dt)?);
        }
        Ok(())
    }

    /// Makes `self.links` the link variables of the state's potential.
    fn refresh_links(&mut self, state: &FieldState, geom: &DomainGeometry, kappa: f64) {
        let fresh = matches!(&self.links_src, Some((ax, ay)) if ax == &state.a_x && ay == &state.a_y);
        if !fresh {
            operators::link_variables_into(&mut self.links, &state.a_x, &state.a_y, geom, kappa);
            self.links_src = Some((state.a_x.clone(), state.a_y.clone()));
        }
    }

    /// Promotes `links_new` (computed from the state's new potential).
    fn promote_links(&mut self, state: &FieldState) {
        core::mem::swap(&mut self.links, &mut self.links_new);
        match &mut self.links_src {
            Some((ax, ay)) => {
                ax.as_mut_slice().copy_from_slice(state.a_x.as_slice());
                ay.as_mut_slice().copy_from_slice(state.a_y.as_slice());
            }
            None => self.links_src = Some((state.a_x.clone(), state.a_y.clone())),
        }
    }
}

fn check_inputs(state: &FieldState, params: &PhysicsParams, geom: &DomainGeometry, dt: f64) -> Result<()> {
    if !(dt.is_finite() && dt >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: "must be finite and non-negative",
        });
    }
    state.check_shape(geom)?;
    if params.tau.rows() != geom.rows() || params.applied.left.len() != geom.n_y {
        return Err(Error::ShapeMismatch("parameters do not match geometry"));
    }
    Ok(())
}

/// Current at step start, with `psi` ghosts refreshed from the current links.
fn begin_step(ws: &mut Workspace, state: &mut FieldState, params: &PhysicsParams, geom: &DomainGeometry) {
    ws.ensure_geometry(geom);
    ws.refresh_links(state, geom, params.kappa);
    operators::apply_interface(&mut state.psi, &ws.links.u_x, geom);
    operators::supercurrent_into(&mut ws.current, &state.psi, &ws.links, geom, params.kappa);
}

fn advance_potential_explicit(ws: &mut Workspace, state: &mut FieldState, params: &PhysicsParams, geom: &DomainGeometry, dt: f64) {
    operators::discrete_b_into(&mut ws.b, &state.a_x, &state.a_y, &params.applied, geom);
    let c = dt / params.sigma;
    let (ihx, ihy) = (1.0 / geom.h_x, 1.0 / geom.h_y);
    for j in 1..=geom.n_y {
        let (bj, bd) = (ws.b.row(j), ws.b.row(j - 1));
        let (ax, jx) = (state.a_x.row(j), ws.current.j_x.row(j));
        let out = ws.new_ax.row_mut(j);
        for i in 1..geom.n_x {
            out[i] = ax[i] + c * (-(bj[i] - bd[i]) * ihy + jx[i]);
        }
        let (ay, jy) = (state.a_y.row(j), ws.current.j_y.row(j));
        let out = ws.new_ay.row_mut(j);
        for i in 1..=geom.n_x {
            out[i] = ay[i] + c * ((bj[i] - bj[i - 1]) * ihx + jy[i]);
        }
    }
    finish_potential(ws, state);
}

fn advance_potential_semi_implicit(ws: &mut Workspace, state: &mut FieldState, params: &PhysicsParams, geom: &DomainGeometry, dt: f64) -> Result<()> {
    ws.ensure_factors(geom, params.sigma, dt)?;
    let c = dt / params.sigma;
    let factors = ws.factors.as_ref().expect("factors built above");
    let ny = geom.n_y;
    ws.line_real.resize(ny.max(geom.n_x), 0.0);

    for i in 1..geom.n_x {
        let col = &mut ws.line_real[..ny];
        for j in 1..=ny {
            col[j - 1] = state.a_x[(i, j)]
                + c * (-operators::d_yx(&state.a_y, i, j, geom) + ws.current.j_x[(i, j)]);
        }
        factors.a_x.solve_in_place(col);
        for j in 1..=ny {
            ws.new_ax[(i, j)] = col[j - 1];
        }
    }
    for j in 1..=ny {
        let row = &mut ws.line_real[..geom.n_x];
        for i in 1..=geom.n_x {
            row[i - 1] = state.a_y[(i, j)]
                + c * (-operators::d_xy(&state.a_x, i, j, geom) + ws.current.j_y[(i, j)]);
        }
        row[0] -= c * params.applied.left_at(j) / geom.h_x;
        row[geom.n_x - 1] += c * params.applied.right_at(j) / geom.h_x;
        factors.a_y.solve_in_place(row);
        ws.new_ay.row_mut(j)[1..=geom.n_x].copy_from_slice(row);
    }
    finish_potential(ws, state);
    Ok(())
}

fn finish_potential(ws: &mut Workspace, state: &mut FieldState) {
    ws.new_ax.sync_periodic_rows();
    ws.new_ay.sync_periodic_rows();
    core::mem::swap(&mut state.a_x, &mut ws.new_ax);
    core::mem::swap(&mut state.a_y, &mut ws.new_ay);
}

/// Recomputes links for the new potential, resets ghosts, advances time and
/// checks for divergence.
fn end_step(ws: &mut Workspace, state: &mut FieldState, params: &PhysicsParams, geom: &DomainGeometry, dt: f64, new_links_ready: bool) -> Result<()> {
    if !new_links_ready {
        operators::link_variables_into(&mut ws.links_new, &state.a_x, &state.a_y, geom, params.kappa);
    }
    ws.promote_links(state);
    operators::apply_interface(&mut state.psi, &ws.links.u_x, geom);
    state.psi.sync_periodic_rows();
    state.t += dt;
    let bound = 10.0 * params.tau_max().sqrt().max(1.0);
    let psi_ok = state
        .psi
        .as_slice()
        .iter()
        .all(|z| z.re.is_finite() && z.im.is_finite() && z.norm_sqr() <= bound * bound);
    let a_ok = state.a_x.as_slice().iter().chain(state.a_y.as_slice()).all(|v| v.is_finite());
    if psi_ok && a_ok {
        Ok(())
    } else {
        ws.links_src = None;
        Err(Error::Divergence { time: state.t })
    }
}

fn advance_psi_explicit(ws: &mut Workspace, state: &mut FieldState, params: &PhysicsParams, geom: &DomainGeometry, dt: f64) {
    operators::psi_rhs_into(&mut ws.rhs, &state.psi, &ws.links, &params.tau, geom, true);
    let p0 = state.psi.first_col();
    for j in 1..=geom.n_y {
        let r = ws.rhs.row(j);
        let p = state.psi.row_mut(j);
        for k in geom.n_sx - p0..=geom.n_ex - p0 {
            p[k] += r[k] * dt;
        }
    }
}

/// Solves `(I - dt L_xx)(I - dt L_yy) phi = F` with `F` in `ws.rhs`, the
/// x-sweep first; `phi` is left in `ws.rhs`. `L` uses `ws.links` (old
/// level); the reduced interface conditions use `ws.links_new`.
fn factored_psi_solve(ws: &mut Workspace, geom: &DomainGeometry, dt: f64) -> Result<()> {
    let n = geom.n_sc();
    let rx = dt / (geom.h_x * geom.h_x);
    let ry = dt / (geom.h_y * geom.h_y);
    let p0 = geom.n_sx - 1;
    let zero = Complex64::new(0.0, 0.0);
    let diag0 = Complex64::new(1.0 + 2.0 * rx, 0.0);

    ws.lower.resize(n, zero);
    ws.diag.resize(n, zero);
    ws.upper.resize(n, zero);
    ws.line.resize(n.max(geom.n_y), zero);
    for j in 1..=geom.n_y {
        let ux = ws.links.u_x.row(j);
        let uxn = ws.links_new.u_x.row(j);
        for k in 0..n {
            let i = geom.n_sx + k;
            ws.lower[k] = ux[i - 1].conj() * -rx;
            ws.upper[k] = ux[i] * -rx;
            ws.diag[k] = diag0;
        }
        ws.lower[0] = zero;
        ws.upper[n - 1] = zero;
        // phi_{n_sx-1} = U^{n+1} phi_{n_sx}, phi_{n_ex+1} = conj(U^{n+1}) phi_{n_ex}
        ws.diag[0] -= ux[geom.n_sx - 1].conj() * uxn[geom.n_sx - 1] * rx;
        ws.diag[n - 1] -= ux[geom.n_ex] * uxn[geom.n_ex].conj() * rx;
        refactor(&mut ws.psi_fact, &ws.lower[..n], &ws.diag[..n], &ws.upper[..n], false)?;
        let row = &mut ws.rhs.row_mut(j)[geom.n_sx - p0..=geom.n_ex - p0];
        ws.psi_fact.as_ref().expect("factored").solve_in_place(row);
    }

    let ny = geom.n_y;
    ws.lower.resize(ny.max(n), zero);
    ws.diag.resize(ny.max(n), zero);
    ws.upper.resize(ny.max(n), zero);
    let diag0 = Complex64::new(1.0 + 2.0 * ry, 0.0);
    for i in geom.n_sx..=geom.n_ex {
        for j in 1..=ny {
            ws.lower[j - 1] = ws.links.u_y[(i, j - 1)].conj() * -ry;
            ws.upper[j - 1] = ws.links.u_y[(i, j)] * -ry;
            ws.diag[j - 1] = diag0;
            ws.line[j - 1] = ws.rhs[(i, j)];
        }
        refactor(&mut ws.psi_fact, &ws.lower[..ny], &ws.diag[..ny], &ws.upper[..ny], true)?;
        ws.psi_fact.as_ref().expect("factored").solve_in_place(&mut ws.line[..ny]);
        for j in 1..=ny {
            ws.rhs[(i, j)] = ws.line[j - 1];
        }
    }
    Ok(())
}

/// Solves `(I - dt L_xx)(I - dt L_yy) phi = rhs` over the superconductor,
/// x-sweep first. `links` enter `L`; `links_new` enter the reduced interface
/// conditions of the x-sweep edge rows.
pub fn factored_solve(
    rhs: &GridArray<Complex64>,
    links: &LinkVariables,
    links_new: &LinkVariables,
    geom: &DomainGeometry,
    dt: f64,
) -> Result<GridArray<Complex64>> {
    let mut ws = Workspace::new(geom);
    if !rhs.same_shape(&ws.rhs) {
        return Err(Error::ShapeMismatch("rhs must use the order-parameter layout"));
    }
    ws.rhs = rhs.clone();
    ws.links = links.clone();
    ws.links_new = links_new.clone();
    factored_psi_solve(&mut ws, geom, dt)?;
    Ok(ws.rhs)
}

fn refactor(slot: &mut Option<Factorization<Complex64>>, lower: &[Complex64], diag: &[Complex64], upper: &[Complex64], periodic: bool) -> Result<()> {
    match slot {
        Some(f) => f.refactor(lower, diag, upper, periodic),
        None => {
            *slot = Some(Factorization::factor(&TridiagonalSystem {
                lower: lower.to_vec(),
                diag: diag.to_vec(),
                upper: upper.to_vec(),
                periodic,
            })?);
            Ok(())
        }
    }
}

fn step_with(kind: StepperKind, state: &mut FieldState, params: &PhysicsParams, geom: &DomainGeometry, dt: f64, ws: &mut Workspace) -> Result<()> {
    check_inputs(state, params, geom, dt)?;
    begin_step(ws, state, params, geom);
    match kind {
        StepperKind::ExplicitI | StepperKind::SemiImplicitII => {
            advance_psi_explicit(ws, state, params, geom, dt);
            if kind.implicit_potential() {
                advance_potential_semi_implicit(ws, state, params, geom, dt)?;
            } else {
                advance_potential_explicit(ws, state, params, geom, dt);
            }
            end_step(ws, state, params, geom, dt, false)
        }
        StepperKind::ImplicitIII | StepperKind::FullyImplicitIV => {
            // F from the old fields, before the potential moves.
            let with_cubic = kind == StepperKind::ImplicitIII;
            operators::psi_rhs_into(&mut ws.rhs, &state.psi, &ws.links, &params.tau, geom, with_cubic);
            let p0 = state.psi.first_col();
            let t0 = params.tau.first_col();
            for j in 1..=geom.n_y {
                let p = state.psi.row(j);
                let tau = params.tau.row(j);
                let r = ws.rhs.row_mut(j);
                for i in geom.n_sx..=geom.n_ex {
                    let k = i - p0;
                    r[k] = if with_cubic {
                        r[k] * dt
                    } else {
                        r[k] * dt + semigroup_map(p[k], tau[i - t0], dt) - p[k]
                    };
                }
            }
            advance_potential_semi_implicit(ws, state, params, geom, dt)?;
            operators::link_variables_into(&mut ws.links_new, &state.a_x, &state.a_y, geom, params.kappa);
            factored_psi_solve(ws, geom, dt)?;
            for j in 1..=geom.n_y {
                let r = ws.rhs.row(j);
                let p = state.psi.row_mut(j);
                for k in geom.n_sx - p0..=geom.n_ex - p0 {
                    p[k] += r[k];
                }
            }
            end_step(ws, state, params, geom, dt, true)
        }
    }
}

/// One forward-Euler step of all three fields.
pub fn step_explicit(state: &mut FieldState, params: &PhysicsParams, geom: &DomainGeometry, dt: f64) -> Result<()> {
    let mut ws = Workspace::new(geom);
    step_with(StepperKind::ExplicitI, state, params, geom, dt, &mut ws)
}

pub fn step_semi_implicit(state: &mut FieldState, params: &PhysicsParams, geom: &DomainGeometry, dt: f64, ws: &mut Workspace) -> Result<()> {
    step_with(StepperKind::SemiImplicitII, state, params, geom, dt, ws)
}

pub fn step_implicit(state: &mut FieldState, params: &PhysicsParams, geom: &DomainGeometry, dt: f64, ws: &mut Workspace) -> Result<()> {
    step_with(StepperKind::ImplicitIII, state, params, geom, dt, ws)
}

pub fn step_fully_implicit(state: &mut FieldState, params: &PhysicsParams, geom: &DomainGeometry, dt: f64, ws: &mut Workspace) -> Result<()> {
    step_with(StepperKind::FullyImplicitIV, state, params, geom, dt, ws)
}

/// A configured integrator owning its workspace.
#[derive(Debug, Clone)]
pub struct Stepper {
    kind: StepperKind,
    dt: f64,
    ws: Workspace,
}

impl Stepper {
    /// Validates inputs and, for II-IV, factors the potential systems up front.
    pub fn new(kind: StepperKind, geom: &DomainGeometry, params: &PhysicsParams, dt: f64) -> Result<Self> {
        geom.validate()?;
        params.validate(geom)?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: "must be positive and finite",
            });
        }
        let mut ws = Workspace::new(geom);
        if kind.implicit_potential() {
            ws.ensure_factors(geom, params.sigma, dt)?;
        }
        Ok(Stepper { kind, dt, ws })
    }

    pub fn kind(&self) -> StepperKind {
        self.kind
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Changes the step; cached factorizations are rebuilt on the next step.
    pub fn set_dt(&mut self, dt: f64) -> Result<()> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: "must be positive and finite",
            });
        }
        self.dt = dt;
        Ok(())
    }

    pub fn factors(&self) -> Option<&PotentialFactors> {
        self.ws.factors()
    }

    pub fn step(&mut self, state: &mut FieldState, params: &PhysicsParams, geom: &DomainGeometry) -> Result<()> {
        step_with(self.kind, state, params, geom, self.dt, &mut self.ws)
    }

    /// Takes `n` steps, stopping at the first error.
    pub fn advance(&mut self, state: &mut FieldState, params: &PhysicsParams, geom: &DomainGeometry, n: usize) -> Result<()> {
        for _ in 0..n {
            self.step(state, params, geom)?;
        }
        Ok(())
    }
}
