#![allow(dead_code)]

use std::path::{Path, PathBuf};

use tdgl::{load_config, RunConfig};
use tdgl_core::state::FieldState;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn small() -> RunConfig {
    load_config(&fixture("small.cfg")).unwrap()
}

/// Raw bit patterns of every stored value, ghosts included.
pub fn bits(s: &FieldState) -> Vec<u64> {
    let mut out: Vec<u64> = s.psi.as_slice().iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]).collect();
    out.extend(s.a_x.as_slice().iter().map(|v| v.to_bits()));
    out.extend(s.a_y.as_slice().iter().map(|v| v.to_bits()));
    out.push(s.t.to_bits());
    out
}
