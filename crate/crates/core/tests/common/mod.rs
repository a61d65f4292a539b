//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use tdgl_core::geometry::DomainGeometry;
use tdgl_core::grid::GridArray;
use tdgl_core::operators::LinkVariables;
use tdgl_core::tridiagonal::TridiagonalSystem;
use tdgl_core::{Complex64, FieldState};

pub struct TestRng(SplitMix64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(SplitMix64::seed_from_u64(seed))
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn complex(&mut self, r: f64) -> Complex64 {
        Complex64::new(self.range(-r, r), self.range(-r, r))
    }
}

pub type Dense = Vec<Vec<Complex64>>;

pub fn zeros(rows: usize, cols: usize) -> Dense {
    vec![vec![Complex64::new(0.0, 0.0); cols]; rows]
}

pub fn matvec(m: &Dense, x: &[Complex64]) -> Vec<Complex64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// `m^H x`
pub fn adjoint_matvec(m: &Dense, x: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); m[0].len()];
    for (row, xi) in m.iter().zip(x) {
        for (o, a) in out.iter_mut().zip(row) {
            *o += a.conj() * xi;
        }
    }
    out
}

/// Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Dense, mut b: Vec<Complex64>) -> Vec<Complex64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&r, &s| a[r][k].norm().total_cmp(&a[s][k].norm())).unwrap();
        a.swap(k, p);
        b.swap(k, p);
        for r in k + 1..n {
            let f = a[r][k] / a[k][k];
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in k..n {
                let v = a[k][c];
                a[r][c] -= f * v;
            }
            let v = b[k];
            b[r] -= f * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for k in (0..n).rev() {
        let s: Complex64 = (k + 1..n).map(|c| a[k][c] * x[c]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    x
}

/// Dense form of a (possibly periodic) tridiagonal system.
pub fn dense_tridiagonal<T: Copy + Into<Complex64>>(s: &TridiagonalSystem<T>) -> Dense {
    let n = s.diag.len();
    let mut m = zeros(n, n);
    for i in 0..n {
        m[i][i] += s.diag[i].into();
        if i > 0 {
            m[i][i - 1] += s.lower[i].into();
        }
        if i + 1 < n {
            m[i][i + 1] += s.upper[i].into();
        }
    }
    if s.periodic {
        m[0][n - 1] += s.lower[0].into();
        m[n - 1][0] += s.upper[n - 1].into();
    }
    m
}

/// Superconducting vertex `(i, j)` to dense index.
pub fn sc_index(g: &DomainGeometry, i: usize, j: usize) -> usize {
    (j - 1) * g.n_sc() + (i - g.n_sx)
}

pub fn sc_vector(g: &DomainGeometry, psi: &GridArray<Complex64>) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); g.n_sc() * g.n_y];
    for j in 1..=g.n_y {
        for i in g.n_sx..=g.n_ex {
            v[sc_index(g, i, j)] = psi[(i, j)];
        }
    }
    v
}

/// Covariant forward differences on superconducting x-edges (interface edges
/// excluded) and periodic y-edges.
pub fn covariant_differences(g: &DomainGeometry, links: &LinkVariables) -> (Dense, Dense) {
    let nv = g.n_sc() * g.n_y;
    let mut dx = Vec::new();
    let mut dy = Vec::new();
    for j in 1..=g.n_y {
        for i in g.n_sx..g.n_ex {
            let mut row = vec![Complex64::new(0.0, 0.0); nv];
            row[sc_index(g, i, j)] = Complex64::new(-1.0 / g.h_x, 0.0);
            row[sc_index(g, i + 1, j)] = links.u_x[(i, j)] / g.h_x;
            dx.push(row);
        }
        for i in g.n_sx..=g.n_ex {
            let jn = if j == g.n_y { 1 } else { j + 1 };
            let mut row = vec![Complex64::new(0.0, 0.0); nv];
            row[sc_index(g, i, j)] += Complex64::new(-1.0 / g.h_y, 0.0);
            row[sc_index(g, i, jn)] += links.u_y[(i, j)] / g.h_y;
            dy.push(row);
        }
    }
    (dx, dy)
}

/// `-D^H D psi`
pub fn dense_laplacian(d: &Dense, psi: &[Complex64]) -> Vec<Complex64> {
    adjoint_matvec(d, &matvec(d, psi)).into_iter().map(|z| -z).collect()
}

/// Unknown ordering for the potential: `A_x` (i = 1..n_x-1) then `A_y`
/// (i = 1..=n_x), each row-major over j = 1..=n_y.
pub fn potential_index_x(g: &DomainGeometry, i: usize, j: usize) -> usize {
    (j - 1) * (g.n_x - 1) + (i - 1)
}

pub fn potential_index_y(g: &DomainGeometry, i: usize, j: usize) -> usize {
    (g.n_x - 1) * g.n_y + (j - 1) * g.n_x + (i - 1)
}

pub fn potential_vector(g: &DomainGeometry, a_x: &GridArray<f64>, a_y: &GridArray<f64>) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); (2 * g.n_x - 1) * g.n_y];
    for j in 1..=g.n_y {
        for i in 1..g.n_x {
            v[potential_index_x(g, i, j)] = a_x[(i, j)].into();
        }
        for i in 1..=g.n_x {
            v[potential_index_y(g, i, j)] = a_y[(i, j)].into();
        }
    }
    v
}

/// Discrete curl from potential unknowns to interior cells `i = 1..n_x-1`.
pub fn dense_curl(g: &DomainGeometry) -> Dense {
    let nu = (2 * g.n_x - 1) * g.n_y;
    let mut c = Vec::new();
    for j in 1..=g.n_y {
        let jn = if j == g.n_y { 1 } else { j + 1 };
        for i in 1..g.n_x {
            let mut row = vec![Complex64::new(0.0, 0.0); nu];
            row[potential_index_y(g, i + 1, j)] += Complex64::new(1.0 / g.h_x, 0.0);
            row[potential_index_y(g, i, j)] -= Complex64::new(1.0 / g.h_x, 0.0);
            row[potential_index_x(g, i, jn)] -= Complex64::new(1.0 / g.h_y, 0.0);
            row[potential_index_x(g, i, j)] += Complex64::new(1.0 / g.h_y, 0.0);
            c.push(row);
        }
    }
    c
}

pub fn random_state(g: &DomainGeometry, kappa: f64, rng: &mut TestRng) -> FieldState {
    let mut s = FieldState::zeros(g);
    for j in 1..=g.n_y {
        for i in g.n_sx..=g.n_ex {
            s.psi[(i, j)] = rng.complex(1.0);
        }
        for i in 1..g.n_x {
            s.a_x[(i, j)] = rng.range(-1.0, 1.0);
        }
        for i in 1..=g.n_x {
            s.a_y[(i, j)] = rng.range(-1.0, 1.0);
        }
    }
    s.synchronize(g, kappa);
    s
}

/// Adaptive Dormand-Prince 5(4) integration of a scalar ODE.
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, x0: f64, t_end: f64, tol: f64) -> f64 {
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let _ = C;
    let (mut t, mut x, mut h) = (0.0, x0, 1e-3f64.min(t_end));
    while t < t_end {
        h = h.min(t_end - t);
        let mut k = [0.0; 7];
        for s in 0..7 {
            let xs = x + h * (0..s).map(|r| A[s][r] * k[r]).sum::<f64>();
            k[s] = f(xs);
        }
        let x5 = x + h * (0..7).map(|s| B5[s] * k[s]).sum::<f64>();
        let x4 = x + h * (0..7).map(|s| B4[s] * k[s]).sum::<f64>();
        let err = (x5 - x4).abs() / (tol * (1.0 + x5.abs()));
        if err <= 1.0 {
            t += h;
            x = x5;
        }
        h *= (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
    }
    x
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}
