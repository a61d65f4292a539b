//! Binary snapshots: `TDGL1\n`, a u64 little-endian header length, the text
//! header, then psi (re, im interleaved), `A_x` and `A_y` as little-endian
//! f64 over the full stored arrays, ghosts included, row-major.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use tdgl_core::{DomainGeometry, FieldState};

use crate::config::{get, parse_pairs, RunConfig, KEYS};
use crate::error::{HarnessError, Result};

pub const MAGIC: &[u8; 6] = b"TDGL1\n";

#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotHeader {
    pub config: RunConfig,
    pub t: f64,
    /// Steps taken since the initial state.
    pub step: u64,
}

fn lengths(geom: &DomainGeometry) -> [usize; 3] {
    let s = FieldState::zeros(geom);
    [2 * s.psi.as_slice().len(), s.a_x.as_slice().len(), s.a_y.as_slice().len()]
}

fn encode(state: &FieldState, config: &RunConfig, step: u64) -> Vec<u8> {
    let [np, nx, ny] = [2 * state.psi.as_slice().len(), state.a_x.as_slice().len(), state.a_y.as_slice().len()];
    let header = format!(
        "{}t = {:?}\nstep = {step}\narray_lengths = {np} {nx} {ny}\n",
        config.to_text(),
        state.t
    );
    let mut out = Vec::with_capacity(14 + header.len() + 8 * (np + nx + ny));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(header.len() as u64).to_le_bytes());
    out.extend_from_slice(header.as_bytes());
    for z in state.psi.as_slice() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    for v in state.a_x.as_slice().iter().chain(state.a_y.as_slice()) {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn write_snapshot(state: &FieldState, config: &RunConfig, step: u64, path: &Path) -> Result<()> {
    let io = |e| HarnessError::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    w.write_all(&encode(state, config, step)).map_err(io)?;
    w.flush().map_err(io)
}

pub fn read_snapshot(path: &Path) -> Result<(FieldState, SnapshotHeader)> {
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| HarnessError::io(path, e))?;
    decode(&bytes)
}

pub fn decode(bytes: &[u8]) -> Result<(FieldState, SnapshotHeader)> {
    let truncated = |expected: usize| HarnessError::Truncated {
        expected: expected as u64,
        found: bytes.len() as u64,
    };
    if bytes.len() < MAGIC.len() {
        return Err(if MAGIC.starts_with(bytes) { truncated(MAGIC.len() + 8) } else { HarnessError::BadMagic });
    }
    if &bytes[..MAGIC.len()] != MAGIC {
        return Err(HarnessError::BadMagic);
    }
    let start = MAGIC.len() + 8;
    if bytes.len() < start {
        return Err(truncated(start));
    }
    let header_len = u64::from_le_bytes(bytes[MAGIC.len()..start].try_into().unwrap()) as usize;
    let data_start = start
        .checked_add(header_len)
        .ok_or_else(|| HarnessError::Inconsistent("header length overflows".into()))?;
    if bytes.len() < data_start {
        return Err(truncated(data_start));
    }
    let text = std::str::from_utf8(&bytes[start..data_start])
        .map_err(|_| HarnessError::Inconsistent("header is not UTF-8".into()))?;

    let mut allowed = KEYS.to_vec();
    allowed.extend(["t", "step", "array_lengths"]);
    let pairs = parse_pairs(text, &allowed)?;
    let config = RunConfig::from_pairs(&pairs)?;
    let t: f64 = get(&pairs, "t")?.ok_or_else(|| HarnessError::Inconsistent("header lacks `t`".into()))?;
    let step: u64 = get(&pairs, "step")?.ok_or_else(|| HarnessError::Inconsistent("header lacks `step`".into()))?;
    let declared: Vec<usize> = get::<String>(&pairs, "array_lengths")?
        .ok_or_else(|| HarnessError::Inconsistent("header lacks `array_lengths`".into()))?
        .split_whitespace()
        .map(|v| v.parse().map_err(|_| HarnessError::Inconsistent(format!("bad array length `{v}`"))))
        .collect::<Result<_>>()?;

    let geom = config.geometry()?;
    let expected = lengths(&geom);
    if declared != expected {
        return Err(HarnessError::Inconsistent(format!(
            "arrays {declared:?} do not fit a {}x{} grid (expected {expected:?})",
            geom.n_x, geom.n_y
        )));
    }
    let total = data_start + 8 * expected.iter().sum::<usize>();
    if bytes.len() < total {
        return Err(truncated(total));
    }
    if bytes.len() > total {
        return Err(HarnessError::Inconsistent(format!("{} trailing bytes", bytes.len() - total)));
    }

    let mut values = bytes[data_start..].chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap()));
    let mut state = FieldState::zeros(&geom);
    for z in state.psi.as_mut_slice() {
        z.re = values.next().unwrap();
        z.im = values.next().unwrap();
    }
    for v in state.a_x.as_mut_slice().iter_mut().chain(state.a_y.as_mut_slice()) {
        *v = values.next().unwrap();
    }
    state.t = t;
    Ok((state, SnapshotHeader { config, t, step }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset::preset;
    use tdgl_core::StepperKind;

    fn sample() -> (FieldState, RunConfig) {
        let mut c = preset("desk", StepperKind::ImplicitIII).unwrap();
        c.sc_width_cells = 6;
        c.period_cells = 5;
        let g = c.geometry().unwrap();
        let p = c.params(&g).unwrap();
        let mut s = c.initial_state(&g, &p).unwrap();
        s.t = 0.1 + 0.2;
        s.a_x[(3, 2)] = -1.0 / 3.0;
        (s, c)
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let (s, c) = sample();
        let (back, h) = decode(&encode(&s, &c, 17)).unwrap();
        assert_eq!(h, SnapshotHeader { config: c, t: s.t, step: 17 });
        let bits = |s: &FieldState| {
            let mut v: Vec<u64> = s.psi.as_slice().iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]).collect();
            v.extend(s.a_x.as_slice().iter().chain(s.a_y.as_slice()).map(|x| x.to_bits()));
            v
        };
        assert_eq!(bits(&back), bits(&s));
        assert_eq!(back, s);
    }

    #[test]
    fn detects_damage() {
        let (s, c) = sample();
        let good = encode(&s, &c, 0);
        assert!(matches!(decode(&good[..good.len() - 3]), Err(HarnessError::Truncated { .. })));
        assert!(matches!(decode(&good[..10]), Err(HarnessError::Truncated { .. })));
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(decode(&bad), Err(HarnessError::BadMagic)));
        let mut long = good.clone();
        long.extend_from_slice(&[0; 8]);
        assert!(matches!(decode(&long), Err(HarnessError::Inconsistent(_))));

        // Header claims a wider grid than the arrays hold.
        let mut wide = c.clone();
        wide.sc_width_cells += 1;
        let text = encode(&s, &wide, 0);
        assert!(matches!(decode(&text), Err(HarnessError::Inconsistent(_))));
    }
}
