//! Binary label store, version 1.
//!
//! All integers are big-endian. Layout:
//!
//! ```text
//! magic    4 B   "FTCL"
//! version  u16   1
//! n        u64   original vertex count          (< 2^32)
//! m        u64   original edge count            (< 2^32)
//! f        u32   fault budget
//! q        u32   ancestry field width (bits)
//! w        u32   syndrome field width (bits)
//! h        u32   hierarchy depth
//! K        u64   decode threshold
//! mode     u8    0 deterministic, 1 randomized
//! c_net    u64   net constant
//! seed     u64   present iff mode = 1
//! edges    m × (u32 u32)                        endpoints, u < v
//! levels   (h+1) × [u32 count, count × u32]     ascending edge indices
//! vlabels  n × ⌈2q/8⌉ B                         start·2^q + end
//! elabels  m × [⌈2q/8⌉ B upper, ⌈2q/8⌉ B lower, (h+1) × 2K·w/8 B]
//! ```
//!
//! Decoding validates structure and all interval/index invariants, so a
//! well-formed read reconstructs a label set byte-identical under
//! re-encoding.

use std::path::Path;

use crate::ancestry::{ancestry_width, AncestryLabel};
use crate::gf2e::FieldSpec;
use crate::scheme::{EdgeLabel, LabelSet, SchemeParams, VertexLabel};
use crate::sparsify::HierarchyMode;
use crate::{Error, Result};

/// File magic.
pub const MAGIC: [u8; 4] = *b"FTCL";
/// Current format version.
pub const VERSION: u16 = 1;

/// Serialize a label set to bytes.
pub fn encode_labels(labels: &LabelSet) -> Vec<u8> {
    let p = labels.params();
    let ab = ancestry_pack_bytes(p.q);
    let mut out = Vec::new();
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_be_bytes());
    out.extend_from_slice(&(p.n as u64).to_be_bytes());
    out.extend_from_slice(&(p.m as u64).to_be_bytes());
    out.extend_from_slice(&p.f.to_be_bytes());
    out.extend_from_slice(&p.q.to_be_bytes());
    out.extend_from_slice(&p.w.to_be_bytes());
    out.extend_from_slice(&(p.h as u32).to_be_bytes());
    out.extend_from_slice(&p.threshold.to_be_bytes());
    match p.mode {
        HierarchyMode::Deterministic => out.push(0),
        HierarchyMode::Randomized => out.push(1),
    }
    out.extend_from_slice(&p.c_net.to_be_bytes());
    if let Some(seed) = p.seed {
        out.extend_from_slice(&seed.to_be_bytes());
    }
    for &(u, v) in labels.edges() {
        out.extend_from_slice(&(u as u32).to_be_bytes());
        out.extend_from_slice(&(v as u32).to_be_bytes());
    }
    for level in labels.levels() {
        out.extend_from_slice(&(level.len() as u32).to_be_bytes());
        for &e in level {
            out.extend_from_slice(&(e as u32).to_be_bytes());
        }
    }
    for v in 0..p.n {
        let a = labels.vertex_label(v).ancestry();
        push_be(&mut out, (a.start << p.q) | a.end, ab);
    }
    for e in 0..p.m {
        let label = labels.edge_label(e);
        let (u, l) = (label.upper(), label.lower());
        push_be(&mut out, (u.start << p.q) | u.end, ab);
        push_be(&mut out, (l.start << p.q) | l.end, ab);
        for block in label.level_blocks() {
            out.extend_from_slice(block);
        }
    }
    out
}

/// Parse a label store.
///
/// Errors with [`Error::Store`] on any structural or invariant failure.
pub fn decode_labels(bytes: &[u8]) -> Result<LabelSet> {
    let mut rd = Reader { bytes, pos: 0 };
    let magic = rd.take(4)?;
    if magic != MAGIC {
        return Err(Error::Store("bad magic; not a label store".into()));
    }
    let version = rd.u16()?;
    if version != VERSION {
        return Err(Error::Store(format!(
            "unsupported store version {version}, expected {VERSION}"
        )));
    }
    let n = rd.u64()?;
    let m = rd.u64()?;
    if n == 0 || n > u64::from(u32::MAX) || m > u64::from(u32::MAX) {
        return Err(Error::Store(format!("implausible sizes n={n}, m={m}")));
    }
    let (n, m) = (n as usize, m as usize);
    let f = rd.u32()?;
    if f == 0 {
        return Err(Error::Store("fault budget 0 in header".into()));
    }
    let q = rd.u32()?;
    if q != ancestry_width(m + 1) {
        return Err(Error::Store(format!(
            "ancestry width {q} does not match m = {m}"
        )));
    }
    let w = rd.u32()?;
    let field =
        FieldSpec::new(w).map_err(|_| Error::Store(format!("unsupported field width {w}")))?;
    let expected = FieldSpec::for_width(2 * q + 1)
        .map_err(|_| Error::Store("ancestry width beyond supported locators".into()))?;
    if field.width() != expected.width() {
        return Err(Error::Store(format!(
            "field width {w} does not fit locator width {}",
            2 * q + 1
        )));
    }
    let h = rd.u32()? as usize;
    let threshold = rd.u64()?;
    if threshold == 0 {
        return Err(Error::Store("zero decode threshold".into()));
    }
    let mode = match rd.u8()? {
        0 => HierarchyMode::Deterministic,
        1 => HierarchyMode::Randomized,
        other => return Err(Error::Store(format!("unknown mode byte {other}"))),
    };
    let c_net = rd.u64()?;
    if c_net == 0 {
        return Err(Error::Store("zero net constant".into()));
    }
    let seed = match mode {
        HierarchyMode::Deterministic => None,
        HierarchyMode::Randomized => Some(rd.u64()?),
    };

    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    for e in 0..m {
        let u = rd.u32()? as usize;
        let v = rd.u32()? as usize;
        if u >= v || v >= n {
            return Err(Error::Store(format!("edge {e} has bad endpoints {u}-{v}")));
        }
        if !seen.insert((u, v)) {
            return Err(Error::Store(format!("edge {u}-{v} repeated")));
        }
        edges.push((u, v));
    }

    let mut levels: Vec<Vec<usize>> = Vec::with_capacity(h + 1);
    for i in 0..=h {
        let count = rd.u32()? as usize;
        if count > m {
            return Err(Error::Store(format!("level {i} claims {count} edges")));
        }
        let mut level = Vec::with_capacity(count);
        for _ in 0..count {
            let e = rd.u32()? as usize;
            if e >= m {
                return Err(Error::Store(format!("level {i} references edge {e}")));
            }
            if let Some(&last) = level.last() {
                if e <= last {
                    return Err(Error::Store(format!("level {i} is not sorted")));
                }
            }
            level.push(e);
        }
        if let Some(prev) = levels.last() {
            let prev: std::collections::HashSet<usize> = prev.iter().copied().collect();
            if !level.iter().all(|e| prev.contains(e)) {
                return Err(Error::Store(format!("level {i} is not nested")));
            }
        }
        levels.push(level);
    }
    if !levels.last().expect("at least one level").is_empty() {
        return Err(Error::Store("last level is not empty".into()));
    }

    let np = (m + 1) as u64;
    let ab = ancestry_pack_bytes(q);
    let unpack = |value: u64| -> AncestryLabel {
        AncestryLabel {
            start: value >> q,
            end: value & ((1u64 << q) - 1),
        }
    };
    let check = |a: AncestryLabel, what: &str| -> Result<AncestryLabel> {
        if a.start < a.end && a.end <= np {
            Ok(a)
        } else {
            Err(Error::Store(format!(
                "{what} interval [{}, {}) out of range",
                a.start, a.end
            )))
        }
    };
    let mut vertex_labels = Vec::with_capacity(n);
    for v in 0..n {
        let a = check(unpack(read_be(rd.take(ab)?)), &format!("vertex {v}"))?;
        vertex_labels.push(VertexLabel::new(a));
    }

    let sb = 2usize
        .checked_mul(threshold as usize)
        .and_then(|x| x.checked_mul(field.elem_bytes()))
        .ok_or_else(|| Error::Store("syndrome block size overflows".into()))?;
    let mut edge_labels = Vec::with_capacity(m);
    for e in 0..m {
        let upper = check(unpack(read_be(rd.take(ab)?)), &format!("edge {e} upper"))?;
        let lower = check(unpack(read_be(rd.take(ab)?)), &format!("edge {e} lower"))?;
        if !(upper.start < lower.start && lower.end <= upper.end) {
            return Err(Error::Store(format!(
                "edge {e}: upper interval does not enclose lower"
            )));
        }
        let mut blocks = Vec::with_capacity(h + 1);
        for _ in 0..=h {
            blocks.push(rd.take(sb)?.to_vec());
        }
        edge_labels.push(EdgeLabel::new(upper, lower, blocks));
    }
    if rd.pos != bytes.len() {
        return Err(Error::Store(format!(
            "{} trailing bytes after the label table",
            bytes.len() - rd.pos
        )));
    }

    let params = SchemeParams {
        n,
        m,
        f,
        q,
        w,
        threshold,
        h,
        mode,
        c_net,
        seed,
    };
    Ok(LabelSet::from_parts(
        params,
        edges,
        levels,
        vertex_labels,
        edge_labels,
    ))
}

/// Write a label store to disk.
pub fn save_labels(path: &Path, labels: &LabelSet) -> Result<()> {
    std::fs::write(path, encode_labels(labels))?;
    Ok(())
}

/// Read a label store from disk.
pub fn load_labels(path: &Path) -> Result<LabelSet> {
    decode_labels(&std::fs::read(path)?)
}

/// Bytes used by one packed ancestry pair (`2q` bits).
fn ancestry_pack_bytes(q: u32) -> usize {
    (2 * q).div_ceil(8) as usize
}

fn push_be(out: &mut Vec<u8>, value: u64, nb: usize) {
    out.extend_from_slice(&value.to_be_bytes()[8 - nb..]);
}

fn read_be(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0u64, |acc, &b| (acc << 8) | u64::from(b))
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(Error::Store(format!(
                "store truncated at byte {} (needed {n} more)",
                self.pos
            )));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_be_bytes(self.take(2)?.try_into().expect("len 2")))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().expect("len 4")))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_be_bytes(self.take(8)?.try_into().expect("len 8")))
    }
}
