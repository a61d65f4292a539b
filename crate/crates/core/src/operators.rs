//! Spatial operators of the discretized gauged TDGL system.
//!
//! Link variables `U = exp(-i h A / kappa)` turn the covariant derivatives
//! into plain differences, so every operator here is exactly covariant under
//! the discrete gauge transformation of [`crate::state::gauge_transform`].

use num_complex::Complex64;
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;

use crate::geometry::DomainGeometry;
use crate::grid::GridArray;
use crate::state::{AppliedField, FieldState, PhysicsParams};

/// Unit-modulus edge factors, laid out like `a_x` / `a_y`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkVariables {
    pub u_x: GridArray<Complex64>,
    pub u_y: GridArray<Complex64>,
}

impl LinkVariables {
    pub fn identity(geom: &DomainGeometry) -> Self {
        let one = Complex64::new(1.0, 0.0);
        LinkVariables {
            u_x: GridArray::filled(0, geom.n_x + 1, geom.rows(), one),
            u_y: GridArray::filled(0, geom.n_x + 1, geom.rows(), one),
        }
    }
}

/// Supercurrent density on the edges of the vector potential.
#[derive(Debug, Clone, PartialEq)]
pub struct SupercurrentField {
    pub j_x: GridArray<f64>,
    pub j_y: GridArray<f64>,
}

/// Induced field at cell centres, columns `0..=n_x`. Columns `0` and `n_x`
/// hold the prescribed outer-surface values.
#[derive(Debug, Clone, PartialEq)]
pub struct MagneticField {
    pub b: GridArray<f64>,
}

#[inline]
pub fn link(h: f64, a: f64, kappa: f64) -> Complex64 {
    let (s, c) = (h * a / kappa).sin_cos();
    Complex64::new(c, -s)
}

pub fn link_variables(
    a_x: &GridArray<f64>,
    a_y: &GridArray<f64>,
    geom: &DomainGeometry,
    kappa: f64,
) -> LinkVariables {
    let mut out = LinkVariables::identity(geom);
    link_variables_into(&mut out, a_x, a_y, geom, kappa);
    out
}

pub fn link_variables_into(
    out: &mut LinkVariables,
    a_x: &GridArray<f64>,
    a_y: &GridArray<f64>,
    geom: &DomainGeometry,
    kappa: f64,
) {
    for (u, &a) in out.u_x.as_mut_slice().iter_mut().zip(a_x.as_slice()) {
        *u = link(geom.h_x, a, kappa);
    }
    for (u, &a) in out.u_y.as_mut_slice().iter_mut().zip(a_y.as_slice()) {
        *u = link(geom.h_y, a, kappa);
    }
}

/// `J_x` on the x-edges from `n_sx - 1` to `n_ex` (both interface edges
/// included), `J_y` on the superconducting columns. Zero elsewhere.
pub fn supercurrent(
    psi: &GridArray<Complex64>,
    links: &LinkVariables,
    geom: &DomainGeometry,
    kappa: f64,
) -> SupercurrentField {
    let mut out = SupercurrentField {
        j_x: FieldState::edge_array(geom),
        j_y: FieldState::edge_array(geom),
    };
    supercurrent_into(&mut out, psi, links, geom, kappa);
    out
}

pub fn supercurrent_into(
    out: &mut SupercurrentField,
    psi: &GridArray<Complex64>,
    links: &LinkVariables,
    geom: &DomainGeometry,
    kappa: f64,
) {
    let p0 = psi.first_col();
    let cx = 1.0 / (kappa * geom.h_x);
    let cy = 1.0 / (kappa * geom.h_y);
    for j in 1..=geom.n_y {
        let pr = psi.row(j);
        let pu = psi.row(j + 1);
        let ux = links.u_x.row(j);
        let uy = links.u_y.row(j);
        let jx = out.j_x.row_mut(j);
        for i in geom.n_sx - 1..=geom.n_ex {
            jx[i] = cx * (pr[i - p0].conj() * ux[i] * pr[i + 1 - p0]).im;
        }
        let jy = out.j_y.row_mut(j);
        for i in geom.n_sx..=geom.n_ex {
            jy[i] = cy * (pr[i - p0].conj() * uy[i] * pu[i - p0]).im;
        }
    }
    out.j_x.sync_periodic_rows();
    out.j_y.sync_periodic_rows();
}

/// Covariant second difference in x on the superconducting vertices.
/// Reads the interface ghost columns of `psi`.
pub fn apply_lxx(
    psi: &GridArray<Complex64>,
    u_x: &GridArray<Complex64>,
    geom: &DomainGeometry,
) -> GridArray<Complex64> {
    let mut out = FieldState::psi_array(geom, Complex64::new(0.0, 0.0));
    let p0 = psi.first_col();
    let c = 1.0 / (geom.h_x * geom.h_x);
    for j in 1..=geom.n_y {
        let pr = psi.row(j);
        let ur = u_x.row(j);
        let or = out.row_mut(j);
        for i in geom.n_sx..=geom.n_ex {
            let k = i - p0;
            or[k] = (ur[i] * pr[k + 1] - pr[k] * 2.0 + ur[i - 1].conj() * pr[k - 1]) * c;
        }
    }
    out
}

/// Covariant second difference in y on the superconducting vertices.
/// Reads the periodic ghost rows of `psi`.
pub fn apply_lyy(
    psi: &GridArray<Complex64>,
    u_y: &GridArray<Complex64>,
    geom: &DomainGeometry,
) -> GridArray<Complex64> {
    let mut out = FieldState::psi_array(geom, Complex64::new(0.0, 0.0));
    let p0 = psi.first_col();
    let c = 1.0 / (geom.h_y * geom.h_y);
    for j in 1..=geom.n_y {
        let (pd, pr, pu) = (psi.row(j - 1), psi.row(j), psi.row(j + 1));
        let (ud, ur) = (u_y.row(j - 1), u_y.row(j));
        let or = out.row_mut(j);
        for i in geom.n_sx..=geom.n_ex {
            let k = i - p0;
            or[k] = (ur[i] * pu[k] - pr[k] * 2.0 + ud[i].conj() * pd[k]) * c;
        }
    }
    out
}

/// `tau psi - |psi|^2 psi`.
#[inline]
pub fn nonlinear_term(psi: Complex64, tau: f64) -> Complex64 {
    psi * (tau - psi.norm_sqr())
}

pub fn nonlinear_n(
    psi: &GridArray<Complex64>,
    tau: &GridArray<f64>,
    geom: &DomainGeometry,
) -> GridArray<Complex64> {
    let mut out = FieldState::psi_array(geom, Complex64::new(0.0, 0.0));
    for j in 1..=geom.n_y {
        for i in geom.n_sx..=geom.n_ex {
            out[(i, j)] = nonlinear_term(psi[(i, j)], tau[(i, j)]);
        }
    }
    out
}

/// Fused `L_xx psi + L_yy psi + N(psi)` on the superconducting vertices.
pub(crate) fn psi_rhs_into(
    out: &mut GridArray<Complex64>,
    psi: &GridArray<Complex64>,
    links: &LinkVariables,
    tau: &GridArray<f64>,
    geom: &DomainGeometry,
    with_nonlinear: bool,
) {
    let p0 = psi.first_col();
    let t0 = tau.first_col();
    let cx = 1.0 / (geom.h_x * geom.h_x);
    let cy = 1.0 / (geom.h_y * geom.h_y);
    for j in 1..=geom.n_y {
        let (pd, pr, pu) = (psi.row(j - 1), psi.row(j), psi.row(j + 1));
        let ux = links.u_x.row(j);
        let (ud, ur) = (links.u_y.row(j - 1), links.u_y.row(j));
        let tr = tau.row(j);
        let or = out.row_mut(j);
        for i in geom.n_sx..=geom.n_ex {
            let k = i - p0;
            let z = pr[k];
            let lxx = (ux[i] * pr[k + 1] - z * 2.0 + ux[i - 1].conj() * pr[k - 1]) * cx;
            let lyy = (ur[i] * pu[k] - z * 2.0 + ud[i].conj() * pd[k]) * cy;
            or[k] = if with_nonlinear {
                lxx + lyy + nonlinear_term(z, tr[i - t0])
            } else {
                lxx + lyy
            };
        }
    }
}

/// `(D_yy A_x)_{i,j}` for `i` in `1..n_x`.
#[inline]
pub(crate) fn d_yy(a_x: &GridArray<f64>, i: usize, j: usize, geom: &DomainGeometry) -> f64 {
    (a_x[(i, j + 1)] - 2.0 * a_x[(i, j)] + a_x[(i, j - 1)]) / (geom.h_y * geom.h_y)
}

/// `(D_yx A_y)_{i,j}` for `i` in `1..n_x`.
#[inline]
pub(crate) fn d_yx(a_y: &GridArray<f64>, i: usize, j: usize, geom: &DomainGeometry) -> f64 {
    ((a_y[(i + 1, j)] - a_y[(i, j)]) - (a_y[(i + 1, j - 1)] - a_y[(i, j - 1)]))
        / (geom.h_x * geom.h_y)
}

/// `(D_xx A_y)_{i,j}` for `i` in `1..=n_x`. The edge rows `i = 1` and
/// `i = n_x` drop the missing outside neighbour and its diagonal share
/// (the outer-surface cell field enters through [`apply_field_bc`]).
#[inline]
pub(crate) fn d_xx(a_y: &GridArray<f64>, i: usize, j: usize, geom: &DomainGeometry) -> f64 {
    let c = a_y[(i, j)];
    let left = if i > 1 { a_y[(i - 1, j)] - c } else { 0.0 };
    let right = if i < geom.n_x { a_y[(i + 1, j)] - c } else { 0.0 };
    (left + right) / (geom.h_x * geom.h_x)
}

/// `(D_xy A_x)_{i,j}` for `i` in `1..=n_x`; `a_x` columns `0` and `n_x` are zero.
#[inline]
pub(crate) fn d_xy(a_x: &GridArray<f64>, i: usize, j: usize, geom: &DomainGeometry) -> f64 {
    ((a_x[(i, j + 1)] - a_x[(i, j)]) - (a_x[(i - 1, j + 1)] - a_x[(i - 1, j)]))
        / (geom.h_x * geom.h_y)
}

/// `(D_yy A_x - D_yx A_y, D_xx A_y - D_xy A_x)`, the discrete `-curl curl A`
/// for a zero outer-surface field. Add [`apply_field_bc`] for the applied field.
pub fn apply_curl_curl(
    a_x: &GridArray<f64>,
    a_y: &GridArray<f64>,
    geom: &DomainGeometry,
) -> (GridArray<f64>, GridArray<f64>) {
    let mut cx = FieldState::edge_array(geom);
    let mut cy = FieldState::edge_array(geom);
    for j in 1..=geom.n_y {
        for i in 1..geom.n_x {
            cx[(i, j)] = d_yy(a_x, i, j, geom) - d_yx(a_y, i, j, geom);
        }
        for i in 1..=geom.n_x {
            cy[(i, j)] = d_xx(a_y, i, j, geom) - d_xy(a_x, i, j, geom);
        }
    }
    cx.sync_periodic_rows();
    cy.sync_periodic_rows();
    (cx, cy)
}

/// Adds the outer-surface field to the y-component of the curl-curl at the
/// first and last `A_y` edges, so that `dB/dx` there reads
/// `(B_1 - H_L)/h_x` and `(H_R - B_{n_x-1})/h_x`.
pub fn apply_field_bc(cc_y: &mut GridArray<f64>, applied: &AppliedField, geom: &DomainGeometry) {
    for j in 1..=geom.n_y {
        cc_y[(1, j)] -= applied.left_at(j) / geom.h_x;
        cc_y[(geom.n_x, j)] += applied.right_at(j) / geom.h_x;
    }
    cc_y.sync_periodic_rows();
}

/// Sets the interface ghost columns of `psi` from the link variables:
/// `psi_{n_sx-1} = U_{x;n_sx-1} psi_{n_sx}`, `psi_{n_ex+1} = conj(U_{x;n_ex}) psi_{n_ex}`.
pub fn apply_interface(
    psi: &mut GridArray<Complex64>,
    u_x: &GridArray<Complex64>,
    geom: &DomainGeometry,
) {
    let (l, r) = (geom.n_sx, geom.n_ex);
    for j in 0..geom.rows() {
        let left = u_x[(l - 1, j)] * psi[(l, j)];
        let right = u_x[(r, j)].conj() * psi[(r, j)];
        psi[(l - 1, j)] = left;
        psi[(r + 1, j)] = right;
    }
}

pub(crate) fn apply_interface_from_potential(
    psi: &mut GridArray<Complex64>,
    a_x: &GridArray<f64>,
    geom: &DomainGeometry,
    kappa: f64,
) {
    let (l, r) = (geom.n_sx, geom.n_ex);
    for j in 0..geom.rows() {
        let left = link(geom.h_x, a_x[(l - 1, j)], kappa) * psi[(l, j)];
        let right = link(geom.h_x, a_x[(r, j)], kappa).conj() * psi[(r, j)];
        psi[(l - 1, j)] = left;
        psi[(r + 1, j)] = right;
    }
}

pub fn discrete_b(
    a_x: &GridArray<f64>,
    a_y: &GridArray<f64>,
    applied: &AppliedField,
    geom: &DomainGeometry,
) -> MagneticField {
    let mut b = FieldState::edge_array(geom);
    discrete_b_into(&mut b, a_x, a_y, applied, geom);
    MagneticField { b }
}

pub(crate) fn discrete_b_into(
    b: &mut GridArray<f64>,
    a_x: &GridArray<f64>,
    a_y: &GridArray<f64>,
    applied: &AppliedField,
    geom: &DomainGeometry,
) {
    let (ihx, ihy) = (1.0 / geom.h_x, 1.0 / geom.h_y);
    for j in 1..=geom.n_y {
        let (ax, axu, ay) = (a_x.row(j), a_x.row(j + 1), a_y.row(j));
        let br = b.row_mut(j);
        br[0] = applied.left_at(j);
        br[geom.n_x] = applied.right_at(j);
        for i in 1..geom.n_x {
            br[i] = (ay[i + 1] - ay[i]) * ihx - (axu[i] - ax[i]) * ihy;
        }
    }
    b.sync_periodic_rows();
}

/// The three contributions to the discrete energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub kinetic: f64,
    pub condensation: f64,
    pub field: f64,
}

impl EnergyBreakdown {
    pub fn total(&self) -> f64 {
        self.kinetic + self.condensation + self.field
    }
}

/// Midpoint quadrature of the energy functional: covariant gradients on
/// superconducting edges, condensation on superconducting vertices and
/// `|B|^2` on cells, where the two outer-surface cells count half.
pub fn energy_breakdown(
    state: &FieldState,
    params: &PhysicsParams,
    geom: &DomainGeometry,
) -> EnergyBreakdown {
    let links = link_variables(&state.a_x, &state.a_y, geom, params.kappa);
    let b = discrete_b(&state.a_x, &state.a_y, &params.applied, geom).b;
    energy_from_parts(&state.psi, &links, &b, params, geom)
}

pub(crate) fn energy_from_parts(
    psi: &GridArray<Complex64>,
    links: &LinkVariables,
    b: &GridArray<f64>,
    params: &PhysicsParams,
    geom: &DomainGeometry,
) -> EnergyBreakdown {
    let area = geom.cell_area();
    let (ihx2, ihy2) = (1.0 / (geom.h_x * geom.h_x), 1.0 / (geom.h_y * geom.h_y));
    let (mut kin, mut cond, mut field) = (0.0, 0.0, 0.0);
    for j in 1..=geom.n_y {
        for i in geom.n_sx..=geom.n_ex {
            let z = psi[(i, j)];
            if i < geom.n_ex {
                kin += (links.u_x[(i, j)] * psi[(i + 1, j)] - z).norm_sqr() * ihx2;
            }
            kin += (links.u_y[(i, j)] * psi[(i, j + 1)] - z).norm_sqr() * ihy2;
            let r2 = z.norm_sqr();
            cond += -params.tau[(i, j)] * r2 + 0.5 * r2 * r2;
        }
        let br = b.row(j);
        field += 0.5 * (br[0] * br[0] + br[geom.n_x] * br[geom.n_x]);
        for &v in &br[1..geom.n_x] {
            field += v * v;
        }
    }
    EnergyBreakdown {
        kinetic: kin * area,
        condensation: cond * area,
        field: field * area,
    }
}

pub fn discrete_energy(state: &FieldState, params: &PhysicsParams, geom: &DomainGeometry) -> f64 {
    energy_breakdown(state, params, geom).total()
}

/// Work done by the applied field through the outer surfaces,
/// `2 h_y sum_j (H_R A_{y;n_x,j} - H_L A_{y;1,j})`.
pub fn boundary_work(a_y: &GridArray<f64>, applied: &AppliedField, geom: &DomainGeometry) -> f64 {
    let mut w = 0.0;
    for j in 1..=geom.n_y {
        w += applied.right_at(j) * a_y[(geom.n_x, j)] - applied.left_at(j) * a_y[(1, j)];
    }
    2.0 * geom.h_y * w
}

/// Free energy in a fixed applied field: [`discrete_energy`] minus
/// [`boundary_work`]. This is the Lyapunov functional of the semi-discrete
/// flow; for a uniform applied field `H` it equals the energy with `|B|^2`
/// replaced by `|B - H|^2`, up to the constant `H^2` times the total area.
pub fn gibbs_energy(state: &FieldState, params: &PhysicsParams, geom: &DomainGeometry) -> f64 {
    discrete_energy(state, params, geom) - boundary_work(&state.a_y, &params.applied, geom)
}
