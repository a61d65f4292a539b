//! Field storage, physical parameters, initial states and the discrete
//! gauge transformation.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::geometry::DomainGeometry;
use crate::grid::GridArray;
use crate::operators;

/// Applied field on the two outer surfaces, one value per row `j = 1..=n_y`
/// (stored at index `j - 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct AppliedField {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl AppliedField {
    pub fn uniform(geom: &DomainGeometry, h_left: f64, h_right: f64) -> Self {
        AppliedField {
            left: alloc::vec![h_left; geom.n_y],
            right: alloc::vec![h_right; geom.n_y],
        }
    }

    #[inline]
    pub fn left_at(&self, j: usize) -> f64 {
        self.left[j - 1]
    }

    #[inline]
    pub fn right_at(&self, j: usize) -> f64 {
        self.right[j - 1]
    }

    pub fn is_uniform(&self) -> bool {
        let same = |v: &[f64]| v.windows(2).all(|w| w[0] == w[1]);
        same(&self.left) && same(&self.right)
    }
}

/// Material and drive parameters in dimensionless units.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicsParams {
    /// Ginzburg-Landau parameter.
    pub kappa: f64,
    /// Dimensionless resistivity scaling the relaxation of the vector potential.
    pub sigma: f64,
    /// Condensation coefficient on the superconducting columns (`first_col = n_sx`).
    pub tau: GridArray<f64>,
    pub applied: AppliedField,
}

impl PhysicsParams {
    /// Defect-free material (`tau = 1`) in a uniform applied field `h` on both sides.
    pub fn uniform(geom: &DomainGeometry, kappa: f64, sigma: f64, h: f64) -> Result<Self> {
        let p = PhysicsParams {
            kappa,
            sigma,
            tau: GridArray::filled(geom.n_sx, geom.n_sc(), geom.rows(), 1.0),
            applied: AppliedField::uniform(geom, h, h),
        };
        p.validate(geom)?;
        Ok(p)
    }

    /// Replaces `tau` with `f(i, j)` on the superconducting vertices.
    pub fn with_tau(mut self, geom: &DomainGeometry, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        for j in 1..=geom.n_y {
            for i in geom.n_sx..=geom.n_ex {
                self.tau[(i, j)] = f(i, j);
            }
        }
        self.tau.sync_periodic_rows();
        self.validate(geom)?;
        Ok(self)
    }

    pub fn validate(&self, geom: &DomainGeometry) -> Result<()> {
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                reason: "must be positive",
            });
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::InvalidParameter {
                name: "sigma",
                reason: "must be positive",
            });
        }
        if self.tau.first_col() != geom.n_sx
            || self.tau.cols() != geom.n_sc()
            || self.tau.rows() != geom.rows()
        {
            return Err(Error::ShapeMismatch("tau must cover the superconducting columns"));
        }
        if self.tau.as_slice().iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
            return Err(Error::InvalidParameter {
                name: "tau",
                reason: "must satisfy 0 < tau <= 1",
            });
        }
        if self.applied.left.len() != geom.n_y || self.applied.right.len() != geom.n_y {
            return Err(Error::ShapeMismatch("applied field needs one value per row"));
        }
        if self.applied.left.iter().chain(&self.applied.right).any(|h| !h.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "applied field",
                reason: "must be finite",
            });
        }
        Ok(())
    }

    pub fn tau_max(&self) -> f64 {
        self.tau.as_slice().iter().copied().fold(0.0, f64::max)
    }
}

/// Order parameter, vector potential and simulation time.
///
/// `psi` covers the superconducting columns plus one interface ghost column
/// on each side (`first_col = n_sx - 1`). `a_x` and `a_y` span columns
/// `0..=n_x`; `a_x` is meaningful for `1..n_x`, `a_y` for `1..=n_x`, the
/// remaining columns stay zero. All arrays carry the two periodic ghost rows.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub psi: GridArray<Complex64>,
    pub a_x: GridArray<f64>,
    pub a_y: GridArray<f64>,
    pub t: f64,
}

impl FieldState {
    pub fn zeros(geom: &DomainGeometry) -> Self {
        FieldState {
            psi: Self::psi_array(geom, Complex64::new(0.0, 0.0)),
            a_x: Self::edge_array(geom),
            a_y: Self::edge_array(geom),
            t: 0.0,
        }
    }

    pub(crate) fn psi_array(geom: &DomainGeometry, v: Complex64) -> GridArray<Complex64> {
        GridArray::filled(geom.n_sx - 1, geom.n_sc() + 2, geom.rows(), v)
    }

    pub(crate) fn edge_array(geom: &DomainGeometry) -> GridArray<f64> {
        GridArray::filled(0, geom.n_x + 1, geom.rows(), 0.0)
    }

    pub fn check_shape(&self, geom: &DomainGeometry) -> Result<()> {
        let psi = Self::psi_array(geom, Complex64::new(0.0, 0.0));
        let edge = Self::edge_array(geom);
        if !self.psi.same_shape(&psi) {
            return Err(Error::ShapeMismatch("psi does not match geometry"));
        }
        if !self.a_x.same_shape(&edge) || !self.a_y.same_shape(&edge) {
            return Err(Error::ShapeMismatch("vector potential does not match geometry"));
        }
        Ok(())
    }

    /// Restores every derived entry: periodic ghost rows of all fields and
    /// the interface ghost columns of `psi`.
    pub fn synchronize(&mut self, geom: &DomainGeometry, kappa: f64) {
        self.a_x.sync_periodic_rows();
        self.a_y.sync_periodic_rows();
        operators::apply_interface_from_potential(&mut self.psi, &self.a_x, geom, kappa);
        self.psi.sync_periodic_rows();
    }

    /// Largest modulus of the order parameter over the superconductor.
    pub fn psi_max(&self, geom: &DomainGeometry) -> f64 {
        let mut m = 0.0f64;
        for j in 1..=geom.n_y {
            for i in geom.n_sx..=geom.n_ex {
                m = m.max(self.psi[(i, j)].norm());
            }
        }
        m
    }

    /// True when every stored value is finite.
    pub fn is_finite(&self) -> bool {
        self.psi.as_slice().iter().all(|z| z.re.is_finite() && z.im.is_finite())
            && self.a_x.as_slice().iter().all(|v| v.is_finite())
            && self.a_y.as_slice().iter().all(|v| v.is_finite())
    }
}

/// Meissner initial state: `A = 0`, `psi = sqrt(tau) + eps` with `|eps| <= noise_amp`
/// drawn from a SplitMix64 stream seeded by `seed`.
pub fn init_meissner_state(
    geom: &DomainGeometry,
    params: &PhysicsParams,
    seed: u64,
    noise_amp: f64,
) -> Result<FieldState> {
    init_with(geom, params, seed, noise_amp, true)
}

/// Field-cooled initial state: `psi = eps` only, and `A_y = x (H_L + H_R)/2`,
/// so the applied flux already threads the sample. Uses the same noise
/// stream as [`init_meissner_state`].
pub fn init_normal_state(
    geom: &DomainGeometry,
    params: &PhysicsParams,
    seed: u64,
    noise_amp: f64,
) -> Result<FieldState> {
    init_with(geom, params, seed, noise_amp, false)
}

fn init_with(
    geom: &DomainGeometry,
    params: &PhysicsParams,
    seed: u64,
    noise_amp: f64,
    meissner: bool,
) -> Result<FieldState> {
    geom.validate()?;
    params.validate(geom)?;
    if !(noise_amp.is_finite() && noise_amp >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "noise_amp",
            reason: "must be non-negative",
        });
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut unit = move || (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    let mut state = FieldState::zeros(geom);
    for j in 1..=geom.n_y {
        for i in geom.n_sx..=geom.n_ex {
            let base = if meissner { params.tau[(i, j)].sqrt() } else { 0.0 };
            let eps = if noise_amp > 0.0 {
                let r = noise_amp * unit().sqrt();
                Complex64::from_polar(r, 2.0 * PI * unit())
            } else {
                Complex64::new(0.0, 0.0)
            };
            state.psi[(i, j)] = Complex64::new(base, 0.0) + eps;
        }
    }
    if !meissner {
        for j in 1..=geom.n_y {
            let h = 0.5 * (params.applied.left_at(j) + params.applied.right_at(j));
            for i in 1..=geom.n_x {
                state.a_y[(i, j)] = h * geom.x(i);
            }
        }
    }
    state.synchronize(geom, params.kappa);
    Ok(state)
}

/// Real gauge function on vertex columns `0..=n_x`, periodic in `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeFunction {
    pub chi: GridArray<f64>,
}

impl GaugeFunction {
    pub fn new(geom: &DomainGeometry, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut chi = GridArray::filled(0, geom.n_x + 1, geom.rows(), 0.0);
        for j in 1..=geom.n_y {
            for i in 0..=geom.n_x {
                chi[(i, j)] = f(i, j);
            }
        }
        chi.sync_periodic_rows();
        GaugeFunction { chi }
    }

    pub fn negated(&self) -> Self {
        GaugeFunction {
            chi: self.chi.map(|v| -v),
        }
    }
}

/// Applies `(psi, A) -> (psi e^{i chi}, A + kappa grad_h chi)` with the
/// one-sided difference along each edge, which keeps link-variable
/// identities exact.
pub fn gauge_transform(
    state: &FieldState,
    gauge: &GaugeFunction,
    geom: &DomainGeometry,
    kappa: f64,
) -> FieldState {
    let chi = &gauge.chi;
    let mut out = state.clone();
    for j in 0..geom.rows() {
        for i in out.psi.first_col()..out.psi.end_col() {
            out.psi[(i, j)] = state.psi[(i, j)] * Complex64::cis(chi[(i, j)]);
        }
        for i in 1..geom.n_x {
            out.a_x[(i, j)] += kappa * (chi[(i + 1, j)] - chi[(i, j)]) / geom.h_x;
        }
    }
    for j in 0..=geom.n_y {
        for i in 1..=geom.n_x {
            out.a_y[(i, j)] += kappa * (chi[(i, j + 1)] - chi[(i, j)]) / geom.h_y;
        }
    }
    out.a_y.sync_periodic_rows();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk_small() -> (DomainGeometry, PhysicsParams) {
        let g = DomainGeometry::build(6, 2, 5, 0.5, 0.5).unwrap();
        let p = PhysicsParams::uniform(&g, 2.0, 1.0, 0.3).unwrap();
        (g, p)
    }

    #[test]
    fn unperturbed_meissner_state() {
        let (g, p) = desk_small();
        let s = init_meissner_state(&g, &p, 7, 0.0).unwrap();
        assert!(s.psi.as_slice().iter().all(|&z| z == Complex64::new(1.0, 0.0)));
        assert!(s.a_x.as_slice().iter().all(|&v| v == 0.0));
        assert!(s.a_y.as_slice().iter().all(|&v| v == 0.0));
        assert_eq!(s.t, 0.0);
    }

    #[test]
    fn seeded_noise_is_deterministic_and_bounded() {
        let (g, p) = desk_small();
        let a = init_meissner_state(&g, &p, 42, 1e-3).unwrap();
        let b = init_meissner_state(&g, &p, 42, 1e-3).unwrap();
        assert_eq!(a, b);
        let c = init_meissner_state(&g, &p, 43, 1e-3).unwrap();
        assert_ne!(a, c);
        for j in 1..=g.n_y {
            for i in g.n_sx..=g.n_ex {
                let d = (a.psi[(i, j)] - Complex64::new(1.0, 0.0)).norm();
                assert!(d <= 1e-3);
            }
        }
    }

    #[test]
    fn normal_state_carries_the_applied_flux() {
        let (g, p) = desk_small();
        let s = init_normal_state(&g, &p, 42, 1e-3).unwrap();
        let m = init_meissner_state(&g, &p, 42, 1e-3).unwrap();
        let b = crate::operators::discrete_b(&s.a_x, &s.a_y, &p.applied, &g).b;
        for j in 1..=g.n_y {
            for i in g.n_sx..=g.n_ex {
                assert!(s.psi[(i, j)].norm() <= 1e-3);
                assert_eq!(s.psi[(i, j)] + Complex64::new(1.0, 0.0), m.psi[(i, j)]);
            }
            for i in 0..=g.n_x {
                assert!((b[(i, j)] - 0.3).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn noise_respects_defect_amplitude() {
        let (g, p) = desk_small();
        let p = p.with_tau(&g, |i, _| if i == 4 { 0.25 } else { 1.0 }).unwrap();
        let s = init_meissner_state(&g, &p, 1, 0.0).unwrap();
        assert_eq!(s.psi[(4, 2)].re, 0.5);
    }

    #[test]
    fn rejects_bad_parameters() {
        let (g, _) = desk_small();
        assert!(PhysicsParams::uniform(&g, 0.0, 1.0, 0.0).is_err());
        assert!(PhysicsParams::uniform(&g, 1.0, -1.0, 0.0).is_err());
        let p = PhysicsParams::uniform(&g, 1.0, 1.0, 0.0).unwrap();
        assert!(p.clone().with_tau(&g, |_, _| 0.0).is_err());
        assert!(p.clone().with_tau(&g, |_, _| 1.5).is_err());
        assert!(init_meissner_state(&g, &p, 0, -1.0).is_err());
    }

    #[test]
    fn constant_gauge_only_rotates_phase() {
        let (g, p) = desk_small();
        let s = init_meissner_state(&g, &p, 3, 1e-2).unwrap();
        let chi = GaugeFunction::new(&g, |_, _| 0.7);
        let t = gauge_transform(&s, &chi, &g, p.kappa);
        assert_eq!(t.a_x, s.a_x);
        assert_eq!(t.a_y, s.a_y);
        let rot = Complex64::cis(0.7);
        for (a, b) in t.psi.as_slice().iter().zip(s.psi.as_slice()) {
            assert!((a - b * rot).norm() < 1e-15);
        }
        let zero = GaugeFunction::new(&g, |_, _| 0.0);
        assert_eq!(gauge_transform(&s, &zero, &g, p.kappa), s);
    }
}
