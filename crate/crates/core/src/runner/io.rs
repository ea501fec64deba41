//! Diagnostics CSV and the flat binary checkpoint.
//!
//! Checkpoint layout, all little-endian:
//!
//! | bytes | field |
//! |-------|-------|
//! | 4     | magic `CFLW` |
//! | 4     | version (u32) |
//! | 8     | M, grid points (u64) |
//! | 8     | ambient dimension (u64) |
//! | 4     | target kind: 0 sphere, 1 projective, 2 grassmannian (u32) |
//! | 4     | n (u32) |
//! | 4     | k (u32) |
//! | 8     | curvature scale (f64) |
//! | 8     | dealias fraction (f64) |
//! | 8·M·dim | node coordinates, row-major (f64) |

use super::DiagnosticsRecord;
use crate::curve::DiscreteCurve;
use crate::error::{FlowError, Result};
use crate::manifold::{TargetKind, TargetManifold};
use crate::spectral::GridSpec;
use std::io::{Read, Write};

pub const CSV_HEADER: &str = "t,E,E2,Estar,Etotal,Hk1,VkL2,Nk,HkNaive,drift";
pub const CHECKPOINT_MAGIC: [u8; 4] = *b"CFLW";
pub const CHECKPOINT_VERSION: u32 = 1;

/// One row per record, 17 significant digits.
pub fn write_diagnostics_csv<W: Write>(mut out: W, records: &[DiagnosticsRecord]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        let vals = [
            r.t,
            r.energies.dirichlet,
            r.energies.bi,
            r.energies.star,
            r.total,
            r.norms.hk1,
            r.norms.vk_l2,
            r.norms.nk,
            r.norms.hk_naive,
            r.constraint_drift,
        ];
        let row: Vec<String> = vals.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_checkpoint<W: Write>(mut out: W, curve: &DiscreteCurve) -> Result<()> {
    let t = curve.target();
    let (code, n, k) = match t.kind() {
        TargetKind::Sphere2 => (0u32, 0u32, 0u32),
        TargetKind::ComplexProjective(n) => (1, n as u32, 1),
        TargetKind::GrassmannianCompact { n, k } => (2, n as u32, k as u32),
    };
    let mut buf = Vec::with_capacity(56 + 8 * curve.points().len());
    buf.extend_from_slice(&CHECKPOINT_MAGIC);
    buf.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    buf.extend_from_slice(&(curve.len() as u64).to_le_bytes());
    buf.extend_from_slice(&(curve.dim() as u64).to_le_bytes());
    for v in [code, n, k] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf.extend_from_slice(&t.curvature_scale().to_le_bytes());
    buf.extend_from_slice(&curve.grid().dealias_fraction().to_le_bytes());
    for v in curve.points() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&buf)?;
    out.flush()?;
    Ok(())
}

pub fn read_checkpoint<R: Read>(mut input: R) -> Result<DiscreteCurve> {
    let bad = |m: &str| FlowError::Checkpoint(m.to_string());
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let mut cur = Cursor { bytes: &bytes, pos: 0 };
    if cur.take(4).ok_or_else(|| bad("truncated header"))? != CHECKPOINT_MAGIC {
        return Err(bad("bad magic"));
    }
    let version = cur.u32().ok_or_else(|| bad("truncated header"))?;
    if version != CHECKPOINT_VERSION {
        return Err(FlowError::Checkpoint(format!("unsupported version {version}")));
    }
    let header = (|| Some((cur.u64()?, cur.u64()?, cur.u32()?, cur.u32()?, cur.u32()?, cur.f64()?, cur.f64()?)))();
    let (m, dim, code, n, k, scale, dealias) = header.ok_or_else(|| bad("truncated header"))?;
    let kind = match code {
        0 => TargetKind::Sphere2,
        1 => TargetKind::ComplexProjective(n as usize),
        2 => TargetKind::GrassmannianCompact { n: n as usize, k: k as usize },
        c => return Err(FlowError::Checkpoint(format!("unknown target kind code {c}"))),
    };
    let target = TargetManifold::from_kind(kind)
        .and_then(|t| t.with_curvature_scale(scale))
        .map_err(|e| FlowError::Checkpoint(e.to_string()))?;
    if target.ambient_dim() as u64 != dim {
        return Err(FlowError::Checkpoint(format!(
            "ambient dimension {dim} does not match the target ({})",
            target.ambient_dim()
        )));
    }
    let grid = GridSpec::new(m as usize, dealias).map_err(|e| FlowError::Checkpoint(e.to_string()))?;
    let len = (m as usize).checked_mul(dim as usize).ok_or_else(|| bad("size overflow"))?;
    if cur.remaining() != 8 * len {
        return Err(FlowError::Checkpoint(format!("body has {} bytes, expected {}", cur.remaining(), 8 * len)));
    }
    let coords: Vec<f64> = (0..len).map(|_| cur.f64().expect("length checked")).collect();
    DiscreteCurve::new(target, grid, coords).map_err(|e| FlowError::Checkpoint(e.to_string()))
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let s = self.bytes.get(self.pos..self.pos + n)?;
        self.pos += n;
        Some(s)
    }

    fn u32(&mut self) -> Option<u32> {
        self.take(4).map(|b| u32::from_le_bytes(b.try_into().unwrap()))
    }

    fn u64(&mut self) -> Option<u64> {
        self.take(8).map(|b| u64::from_le_bytes(b.try_into().unwrap()))
    }

    fn f64(&mut self) -> Option<f64> {
        self.take(8).map(|b| f64::from_le_bytes(b.try_into().unwrap()))
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoint_round_trip_is_exact() {
        for t in [
            TargetManifold::sphere2(),
            TargetManifold::complex_projective(2).unwrap().with_curvature_scale(2.5).unwrap(),
            TargetManifold::grassmannian(4, 2).unwrap(),
        ] {
            let c = DiscreteCurve::random_smooth(t, GridSpec::new(32, 0.5).unwrap(), 3);
            let mut buf = Vec::new();
            write_checkpoint(&mut buf, &c).unwrap();
            assert_eq!(&buf[..4], b"CFLW");
            let back = read_checkpoint(buf.as_slice()).unwrap();
            assert_eq!(back, c);
            assert!(back.points().iter().zip(c.points()).all(|(a, b)| a.to_bits() == b.to_bits()));
        }
    }

    #[test]
    fn corrupt_checkpoints_are_rejected() {
        let c = DiscreteCurve::great_circle(TargetManifold::sphere2(), GridSpec::with_points(16).unwrap(), 1);
        let mut buf = Vec::new();
        write_checkpoint(&mut buf, &c).unwrap();
        let mut bad_magic = buf.clone();
        bad_magic[0] = b'X';
        assert!(matches!(read_checkpoint(bad_magic.as_slice()), Err(FlowError::Checkpoint(_))));
        assert!(matches!(read_checkpoint(&buf[..buf.len() - 3]), Err(FlowError::Checkpoint(_))));
        assert!(matches!(read_checkpoint(&buf[..10]), Err(FlowError::Checkpoint(_))));
        let mut bad_version = buf.clone();
        bad_version[4] = 9;
        assert!(matches!(read_checkpoint(bad_version.as_slice()), Err(FlowError::Checkpoint(_))));
    }
}
