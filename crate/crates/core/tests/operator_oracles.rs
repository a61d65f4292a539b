mod common;

use common::*;
use tdgl_core::operators::{
    apply_curl_curl, apply_field_bc, apply_interface, apply_lxx, apply_lyy, discrete_b, link_variables, supercurrent,
};
use tdgl_core::{AppliedField, Complex64, DomainGeometry};

const GRIDS: [(usize, usize, usize); 4] = [(4, 1, 4), (8, 2, 6), (10, 3, 16), (12, 2, 15)];

#[test]
fn covariant_laplacian_matches_dense_form() {
    let mut rng = TestRng::new(11);
    for (sc, bl, period) in GRIDS {
        for (hx, hy) in [(0.5, 0.5), (0.4, 0.7)] {
            let g = DomainGeometry::build(sc, bl, period, hx, hy).unwrap();
            assert!(g.n_x <= 16 && g.n_y <= 16);
            let kappa = rng.range(0.5, 4.0);
            let mut s = random_state(&g, kappa, &mut rng);
            let links = link_variables(&s.a_x, &s.a_y, &g, kappa);
            apply_interface(&mut s.psi, &links.u_x, &g);
            let (dx, dy) = covariant_differences(&g, &links);
            let v = sc_vector(&g, &s.psi);
            let lxx = sc_vector(&g, &apply_lxx(&s.psi, &links.u_x, &g));
            let lyy = sc_vector(&g, &apply_lyy(&s.psi, &links.u_y, &g));
            assert!(max_diff(&lxx, &dense_laplacian(&dx, &v)) <= 1e-13, "L_xx on {sc}/{bl}/{period}");
            assert!(max_diff(&lyy, &dense_laplacian(&dy, &v)) <= 1e-13, "L_yy on {sc}/{bl}/{period}");
        }
    }
}

#[test]
fn curl_curl_matches_dense_form() {
    let mut rng = TestRng::new(12);
    for (sc, bl, period) in GRIDS {
        let g = DomainGeometry::build(sc, bl, period, 0.5, 0.6).unwrap();
        let s = random_state(&g, 2.0, &mut rng);
        let (hl, hr) = (rng.range(-1.0, 1.0), rng.range(-1.0, 1.0));
        let applied = AppliedField::uniform(&g, hl, hr);
        let (cx, mut cy) = apply_curl_curl(&s.a_x, &s.a_y, &g);
        apply_field_bc(&mut cy, &applied, &g);

        let c = dense_curl(&g);
        let a = potential_vector(&g, &s.a_x, &s.a_y);
        let mut expect: Vec<Complex64> = adjoint_matvec(&c, &matvec(&c, &a)).into_iter().map(|z| -z).collect();
        for j in 1..=g.n_y {
            expect[potential_index_y(&g, 1, j)] -= hl / g.h_x;
            expect[potential_index_y(&g, g.n_x, j)] += hr / g.h_x;
        }
        let got = potential_vector(&g, &cx, &cy);
        assert!(max_diff(&got, &expect) <= 1e-13, "curl-curl on {sc}/{bl}/{period}");

        let b = discrete_b(&s.a_x, &s.a_y, &applied, &g).b;
        let cells = matvec(&c, &a);
        for j in 1..=g.n_y {
            assert_eq!(b[(0, j)], hl);
            assert_eq!(b[(g.n_x, j)], hr);
            for i in 1..g.n_x {
                assert!((b[(i, j)] - cells[(j - 1) * (g.n_x - 1) + i - 1].re).abs() <= 1e-13);
            }
        }
    }
}

#[test]
fn interface_blocks_normal_current() {
    let mut rng = TestRng::new(13);
    let g = DomainGeometry::build(10, 3, 12, 0.5, 0.5).unwrap();
    let s = random_state(&g, 1.5, &mut rng);
    let links = link_variables(&s.a_x, &s.a_y, &g, 1.5);
    let j = supercurrent(&s.psi, &links, &g, 1.5);
    for row in 1..=g.n_y {
        assert!(j.j_x[(g.n_sx - 1, row)].abs() <= 1e-14);
        assert!(j.j_x[(g.n_ex, row)].abs() <= 1e-14);
        assert!((s.psi[(g.n_sx - 1, row)].norm() - s.psi[(g.n_sx, row)].norm()).abs() <= 1e-15);
    }
}

#[test]
fn gradient_energy_is_minus_psi_dot_laplacian() {
    // sum_e |D psi|^2 = -<psi, L psi>, a summation-by-parts identity the
    // energy and the L operators must share.
    let mut rng = TestRng::new(14);
    let g = DomainGeometry::build(8, 2, 10, 0.5, 0.5).unwrap();
    let mut s = random_state(&g, 2.0, &mut rng);
    let links = link_variables(&s.a_x, &s.a_y, &g, 2.0);
    apply_interface(&mut s.psi, &links.u_x, &g);
    let v = sc_vector(&g, &s.psi);
    let l: Vec<Complex64> = sc_vector(&g, &apply_lxx(&s.psi, &links.u_x, &g))
        .iter()
        .zip(sc_vector(&g, &apply_lyy(&s.psi, &links.u_y, &g)))
        .map(|(a, b)| a + b)
        .collect();
    let inner: f64 = v.iter().zip(&l).map(|(a, b)| (a.conj() * b).re).sum();
    let params = tdgl_core::PhysicsParams::uniform(&g, 2.0, 1.0, 0.0).unwrap();
    let e = tdgl_core::operators::energy_breakdown(&s, &params, &g);
    assert!((e.kinetic / g.cell_area() + inner).abs() <= 1e-10 * inner.abs().max(1.0));
}
