mod common;

use common::{fixture, small};
use tdgl::{load_config, InitialState, RunConfig};
use tdgl_core::StepperKind;

#[test]
fn fixture_loads_with_defaults() {
    let c = small();
    assert_eq!((c.sc_width_cells, c.blanket_cells, c.period_cells), (12, 2, 16));
    assert_eq!(c.algorithm, StepperKind::FullyImplicitIV);
    assert_eq!(c.initial_state, InitialState::Normal);
    assert_eq!((c.tau, c.noise_amp, c.consecutive_passes), (1.0, 1e-3, 3));
    assert_eq!(c.output_dir, None);
    assert_eq!(c.max_steps(), 400);
}

#[test]
fn written_text_reloads_identically() {
    let c = small();
    let again = RunConfig::parse(&c.to_text()).unwrap();
    assert_eq!(again, c);
}

#[test]
fn geometry_matches_fixture() {
    let c = small();
    let g = c.geometry().unwrap();
    assert_eq!(g.period_y(), 8.0);
    let p = c.params(&g).unwrap();
    assert_eq!(p.kappa, 2.0);
}

#[test]
fn missing_file_is_an_io_error() {
    let e = load_config(&fixture("absent.cfg")).unwrap_err();
    assert_eq!(e.exit_code(), 4);
}
