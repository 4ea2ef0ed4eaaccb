//! The outdetect codec: syndrome sketches that recover small boundary sets.
//!
//! An *edge locator* packs the two endpoint ancestry starts of a tree edge
//! into one nonzero field element. A set of edges is summarized by its
//! *syndrome*: the `2k` power sums `coords[j] = Σ_α α^j` (`j = 0..2k`) of
//! the member locators over `GF(2^w)`. Power sums are exactly the product of
//! the set's characteristic vector with a Reed–Solomon parity-check matrix
//! whose column for locator `α` is `(α^0, …, α^{2k−1})`, which yields two
//! crucial properties:
//!
//! * **Additivity.** XOR of two syndromes is the syndrome of the symmetric
//!   difference of the sets (characteristic-two cancellation), so per-vertex
//!   labels aggregate over any vertex set into the syndrome of its cut.
//! * **Decodability.** Any support of size `≤ k` is recovered *exactly* from
//!   the first `2k` power sums by Berlekamp–Massey plus deterministic root
//!   finding ([`syndrome_decode`]); larger supports are detected as
//!   [`DecodeResult::Overflow`] whenever any of the decoder's consistency
//!   checks fails.
//!
//! Syndromes of capacity `k` are prefix-compatible: the first `2k′`
//! coordinates are bit-identical to a capacity-`k′` syndrome of the same
//! set, so one stored label serves every smaller decoding budget.

use crate::gf2e::FieldSpec;
use crate::{Error, Result};

/// A nonzero field element identifying one tree edge by its endpoints.
///
/// For ancestry width `q`, the locator of the edge with endpoint preorder
/// starts `a ≠ b` is `(min ∥ max) + 2^{2q}`: the smaller start occupies bits
/// `q..2q`, the larger bits `0..q`, and bit `2q` is a tag guaranteeing the
/// element is nonzero and exactly `2q + 1` bits wide. The value `0` is the
/// formal zero, "no edge".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeLocator(u64);

impl EdgeLocator {
    /// Wrap a raw field element (no well-formedness requirement).
    pub fn from_raw(value: u64) -> EdgeLocator {
        EdgeLocator(value)
    }

    /// The raw field element.
    pub fn value(self) -> u64 {
        self.0
    }

    /// Encode the edge whose endpoints have preorder starts `a` and `b`.
    ///
    /// # Panics
    ///
    /// Panics if `a == b`, if either start needs more than `q` bits, or if
    /// `2q + 1 > 64`.
    pub fn encode(q: u32, a: u64, b: u64) -> EdgeLocator {
        assert!(2 * q + 1 <= 64, "locator width 2q+1 = {} exceeds 64", 2 * q + 1);
        assert!(a != b, "edge endpoints must have distinct starts");
        let bound = 1u64 << q;
        assert!(a < bound && b < bound, "start exceeds q = {q} bits");
        let (lo, hi) = (a.min(b), a.max(b));
        EdgeLocator((1u64 << (2 * q)) | (lo << q) | hi)
    }

    /// Whether this value is a well-formed locator for ancestry width `q`:
    /// tag bit `2q` set, nothing above it, and the packed starts strictly
    /// ordered.
    pub fn is_well_formed(self, q: u32) -> bool {
        if 2 * q + 1 > 64 {
            return false;
        }
        let v = self.0;
        if v >> (2 * q) != 1 {
            return false;
        }
        let mask = (1u64 << q) - 1;
        (v >> q) & mask < v & mask
    }

    /// Decode into `(smaller start, larger start)`, or `None` if the value
    /// is not a well-formed locator for width `q`.
    pub fn decode(self, q: u32) -> Option<(u64, u64)> {
        if !self.is_well_formed(q) {
            return None;
        }
        let mask = (1u64 << q) - 1;
        Some(((self.0 >> q) & mask, self.0 & mask))
    }
}

/// Bits a locator occupies at ancestry width `q`: `2q + 1`.
pub fn locator_bits(q: u32) -> u32 {
    2 * q + 1
}

/// The parity-check row of one locator: consecutive powers
/// `(α^0, α^1, …, α^{2k−1})`.
///
/// # Panics
///
/// Panics if the locator is the formal zero or `k == 0`.
pub fn edge_row(f: &FieldSpec, loc: EdgeLocator, k: usize) -> Vec<u64> {
    assert!(loc.value() != 0, "formal zero has no parity row");
    assert!(k > 0, "capacity must be positive");
    let mut row = Vec::with_capacity(2 * k);
    let mut p = 1u64;
    for _ in 0..2 * k {
        row.push(p);
        p = f.mul(p, loc.value());
    }
    row
}

/// XOR the parity row of `loc` into a packed syndrome buffer of capacity
/// `k` (layout: `2k` big-endian elements of `f.elem_bytes()` bytes each).
///
/// This is the bulk-construction path used when labeling whole graphs; it
/// avoids materializing intermediate rows.
///
/// # Panics
///
/// Panics if `buf` is not exactly `2k · elem_bytes` long, `loc` is zero, or
/// `k == 0`.
pub fn accumulate_row_packed(f: &FieldSpec, loc: EdgeLocator, k: usize, buf: &mut [u8]) {
    assert!(loc.value() != 0, "formal zero has no parity row");
    assert!(k > 0, "capacity must be positive");
    let eb = f.elem_bytes();
    assert_eq!(buf.len(), 2 * k * eb, "packed syndrome buffer size mismatch");
    let mut p = 1u64;
    for j in 0..2 * k {
        let be = p.to_be_bytes();
        let src = &be[8 - eb..];
        let dst = &mut buf[j * eb..(j + 1) * eb];
        for (d, s) in dst.iter_mut().zip(src) {
            *d ^= s;
        }
        p = f.mul(p, loc.value());
    }
}

/// A capacity-`k` syndrome: the `2k` power sums of a locator multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutdetectSyndrome {
    k: usize,
    coords: Vec<u64>,
}

impl OutdetectSyndrome {
    /// The all-zero syndrome (empty edge set) of capacity `k`.
    ///
    /// # Panics
    ///
    /// Panics if `k == 0`.
    pub fn zero(k: usize) -> OutdetectSyndrome {
        assert!(k > 0, "capacity must be positive");
        OutdetectSyndrome {
            k,
            coords: vec![0; 2 * k],
        }
    }

    /// Syndrome of an explicit locator multiset: the definitional
    /// constructor. Duplicated locators cancel pairwise.
    ///
    /// # Panics
    ///
    /// Panics if `k == 0` or any locator is the formal zero.
    pub fn of_support(f: &FieldSpec, support: &[EdgeLocator], k: usize) -> OutdetectSyndrome {
        let mut s = OutdetectSyndrome::zero(k);
        for &loc in support {
            assert!(loc.value() != 0, "formal zero cannot appear in a support");
            let mut p = 1u64;
            for j in 0..2 * k {
                s.coords[j] ^= p;
                p = f.mul(p, loc.value());
            }
        }
        s
    }

    /// Capacity `k`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// The `2k` power-sum coordinates, exponent `0` first.
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// Whether every coordinate is zero.
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Add (XOR) another syndrome in place: the result describes the
    /// symmetric difference of the two edge sets.
    ///
    /// Errors with [`Error::Argument`] if the capacities differ.
    pub fn add_assign(&mut self, other: &OutdetectSyndrome) -> Result<()> {
        if self.k != other.k {
            return Err(Error::Argument(format!(
                "cannot add syndromes of capacity {} and {}",
                self.k, other.k
            )));
        }
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a ^= b;
        }
        Ok(())
    }

    /// The capacity-`k′` syndrome consisting of the first `2k′` coordinates;
    /// bit-identical to a syndrome built directly at capacity `k′`.
    ///
    /// Errors with [`Error::Argument`] unless `1 ≤ k′ ≤ k`.
    pub fn prefix(&self, k_prime: usize) -> Result<OutdetectSyndrome> {
        if k_prime == 0 || k_prime > self.k {
            return Err(Error::Argument(format!(
                "prefix capacity {k_prime} outside 1..={}",
                self.k
            )));
        }
        Ok(OutdetectSyndrome {
            k: k_prime,
            coords: self.coords[..2 * k_prime].to_vec(),
        })
    }

    /// Serialize as a `u32` big-endian capacity followed by the `2k`
    /// elements, each `f.elem_bytes()` big-endian bytes.
    pub fn to_bytes(&self, f: &FieldSpec) -> Vec<u8> {
        let eb = f.elem_bytes();
        let mut out = Vec::with_capacity(4 + 2 * self.k * eb);
        out.extend_from_slice(&(self.k as u32).to_be_bytes());
        let mut buf = vec![0u8; eb];
        for &c in &self.coords {
            f.write_element(c, &mut buf);
            out.extend_from_slice(&buf);
        }
        out
    }

    /// Inverse of [`to_bytes`](Self::to_bytes).
    ///
    /// Errors with [`Error::Store`] on a truncated or oversized buffer, a
    /// zero capacity, or an out-of-range element.
    pub fn from_bytes(f: &FieldSpec, bytes: &[u8]) -> Result<OutdetectSyndrome> {
        if bytes.len() < 4 {
            return Err(Error::Store("syndrome shorter than its header".into()));
        }
        let k = u32::from_be_bytes(bytes[..4].try_into().unwrap()) as usize;
        if k == 0 {
            return Err(Error::Store("syndrome capacity 0".into()));
        }
        let eb = f.elem_bytes();
        let want = 4 + 2 * k * eb;
        if bytes.len() != want {
            return Err(Error::Store(format!(
                "syndrome of capacity {k} must be {want} bytes, found {}",
                bytes.len()
            )));
        }
        let mut coords = Vec::with_capacity(2 * k);
        for chunk in bytes[4..].chunks_exact(eb) {
            coords.push(f.read_element(chunk)?);
        }
        Ok(OutdetectSyndrome { k, coords })
    }

    /// Deserialize a headerless packed buffer of exactly `2k` elements
    /// (the layout used inside stored edge labels).
    ///
    /// Errors with [`Error::Store`] on a size mismatch or an out-of-range
    /// element.
    pub fn from_packed(f: &FieldSpec, bytes: &[u8], k: usize) -> Result<OutdetectSyndrome> {
        if k == 0 {
            return Err(Error::Store("syndrome capacity 0".into()));
        }
        let eb = f.elem_bytes();
        if bytes.len() != 2 * k * eb {
            return Err(Error::Store(format!(
                "packed syndrome of capacity {k} must be {} bytes, found {}",
                2 * k * eb,
                bytes.len()
            )));
        }
        let mut coords = Vec::with_capacity(2 * k);
        for chunk in bytes.chunks_exact(eb) {
            coords.push(f.read_element(chunk)?);
        }
        Ok(OutdetectSyndrome { k, coords })
    }
}

/// Component-wise sum of a nonempty sequence of equal-capacity syndromes:
/// the syndrome of the symmetric difference of all the edge sets.
///
/// Errors with [`Error::Argument`] on an empty sequence or mismatched
/// capacities.
pub fn aggregate(syndromes: &[OutdetectSyndrome]) -> Result<OutdetectSyndrome> {
    let first = syndromes
        .first()
        .ok_or_else(|| Error::Argument("aggregate of an empty sequence".into()))?;
    let mut acc = first.clone();
    for s in &syndromes[1..] {
        acc.add_assign(s)?;
    }
    Ok(acc)
}

/// Per-vertex syndrome label: XOR of the parity rows of all edges of `h`
/// incident to `v`. An isolated vertex gets the zero syndrome.
///
/// `h` lists edges as `((endpoint, endpoint), locator)`.
///
/// # Panics
///
/// Panics if `k == 0` or an incident locator is the formal zero.
pub fn vertex_label(
    f: &FieldSpec,
    h: &[((usize, usize), EdgeLocator)],
    v: usize,
    k: usize,
) -> OutdetectSyndrome {
    let incident: Vec<EdgeLocator> = h
        .iter()
        .filter(|((a, b), _)| *a == v || *b == v)
        .map(|&(_, loc)| loc)
        .collect();
    OutdetectSyndrome::of_support(f, &incident, k)
}

/// Outcome of [`syndrome_decode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeResult {
    /// All consulted coordinates were zero: the support is empty (or
    /// cancels — callers rely on the guarantee that it does not).
    Empty,
    /// The exact support, sorted ascending by raw locator value.
    Edges(Vec<EdgeLocator>),
    /// The support does not fit the decoding budget, or an internal
    /// consistency check failed.
    Overflow,
}

/// Decode the support from the first `2k′` coordinates of `s`.
///
/// Guarantees:
///
/// * true support of size 0 → [`DecodeResult::Empty`];
/// * true support of size `1..=k′` over distinct locators →
///   [`DecodeResult::Edges`] with the exact support;
/// * larger supports → [`DecodeResult::Overflow`] whenever any check fails
///   (locator degree above `k′`, a connection polynomial that does not
///   split into distinct roots over the field, a power-sum verification
///   mismatch, or — when `locator_q` is given — a root that is not a
///   well-formed [`EdgeLocator`]); otherwise an incorrect `Edges` set may
///   be returned, so callers must ensure the size bound externally.
///
/// The decoder is deterministic: Berlekamp–Massey for the connection
/// polynomial, then Frobenius-trace splitting for its roots.
///
/// Errors with [`Error::Argument`] unless `1 ≤ k′ ≤ s.k`.
pub fn syndrome_decode(
    f: &FieldSpec,
    s: &OutdetectSyndrome,
    k_prime: usize,
    locator_q: Option<u32>,
) -> Result<DecodeResult> {
    if k_prime == 0 || k_prime > s.k {
        return Err(Error::Argument(format!(
            "decode capacity {k_prime} outside 1..={}",
            s.k
        )));
    }
    let seq = &s.coords[..2 * k_prime];
    if seq.iter().all(|&c| c == 0) {
        return Ok(DecodeResult::Empty);
    }
    let (c, l) = berlekamp_massey(f, seq);
    if l == 0 || l > k_prime || c[l] == 0 {
        // A degenerate connection polynomial cannot describe a support of
        // size ≤ k′ (c[l] == 0 would put the formal zero among the roots).
        return Ok(DecodeResult::Overflow);
    }
    // Locators are the roots of the reciprocal polynomial
    // r(y) = y^l · c(1/y); r is monic because c[0] = 1.
    let r: Vec<u64> = (0..=l).map(|i| c[l - i]).collect();
    let Some(mut roots) = distinct_roots(f, &r) else {
        return Ok(DecodeResult::Overflow);
    };
    debug_assert_eq!(roots.len(), l);
    if let Some(q) = locator_q {
        if !roots.iter().all(|&x| EdgeLocator(x).is_well_formed(q)) {
            return Ok(DecodeResult::Overflow);
        }
    }
    // Verify by recomputing every consulted power sum from the roots.
    let mut powers: Vec<u64> = vec![1; roots.len()];
    for &want in seq {
        let mut sum = 0u64;
        for (p, &root) in powers.iter_mut().zip(&roots) {
            sum ^= *p;
            *p = f.mul(*p, root);
        }
        if sum != want {
            return Ok(DecodeResult::Overflow);
        }
    }
    roots.sort_unstable();
    Ok(DecodeResult::Edges(
        roots.into_iter().map(EdgeLocator).collect(),
    ))
}

/// Berlekamp–Massey over `GF(2^w)`: the minimal connection polynomial
/// `c` (with `c[0] = 1`) and its LFSR length `l`, such that
/// `seq[n] = Σ_{i=1..l} c[i]·seq[n−i]` for all `n ≥ l`.
/// Returns `c` padded/truncated to exactly `l + 1` coefficients.
fn berlekamp_massey(f: &FieldSpec, seq: &[u64]) -> (Vec<u64>, usize) {
    let mut c: Vec<u64> = vec![1];
    let mut b: Vec<u64> = vec![1];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut last_d = 1u64;
    for n in 0..seq.len() {
        let mut d = seq[n];
        for i in 1..=l.min(c.len() - 1) {
            if c[i] != 0 && seq[n - i] != 0 {
                d ^= f.mul(c[i], seq[n - i]);
            }
        }
        if d == 0 {
            m += 1;
            continue;
        }
        let coef = f.mul(d, f.inv(last_d).expect("last discrepancy is nonzero"));
        if 2 * l <= n {
            let snapshot = c.clone();
            add_shifted(f, &mut c, &b, coef, m);
            l = n + 1 - l;
            b = snapshot;
            last_d = d;
            m = 1;
        } else {
            add_shifted(f, &mut c, &b, coef, m);
            m += 1;
        }
    }
    if c.len() < l + 1 {
        c.resize(l + 1, 0);
    } else {
        c.truncate(l + 1);
    }
    (c, l)
}

/// `c += coef · x^shift · b` over the field.
fn add_shifted(f: &FieldSpec, c: &mut Vec<u64>, b: &[u64], coef: u64, shift: usize) {
    if c.len() < b.len() + shift {
        c.resize(b.len() + shift, 0);
    }
    for (i, &bi) in b.iter().enumerate() {
        if bi != 0 {
            c[i + shift] ^= f.mul(coef, bi);
        }
    }
}

/// All roots of the monic polynomial `r` (ascending coefficients,
/// `deg r = r.len() − 1 ≥ 1`), provided `r` splits into *distinct* linear
/// factors over the field; `None` otherwise.
///
/// Splitting and squarefreeness are established in one shot by checking
/// `x^(2^w) ≡ x (mod r)` (the field polynomial `x^(2^w) − x` is the product
/// of all distinct linear factors, so dividing it is exactly "distinct roots
/// in the field"). Factors are then separated deterministically with
/// Frobenius traces `Tr(θ·x)` over the bit basis `θ = 2^t`: for any two
/// distinct roots some basis element gives differing traces, so `w` rounds
/// of gcd splitting isolate every root.
fn distinct_roots(f: &FieldSpec, r: &[u64]) -> Option<Vec<u64>> {
    let deg = r.len() - 1;
    debug_assert!(deg >= 1 && *r.last().unwrap() == 1);
    let mut roots = Vec::with_capacity(deg);
    if deg == 1 {
        roots.push(r[0]); // y + a has the single root a (characteristic 2).
        return Some(roots);
    }
    let w = f.width();
    // x^(2^w) mod r via repeated squaring of x.
    let x_poly = vec![0u64, 1];
    let mut t = x_poly.clone();
    for _ in 0..w {
        t = poly_sq_mod(f, &t, r);
    }
    if t != x_poly {
        return None;
    }
    let mut work: Vec<Vec<u64>> = vec![r.to_vec()];
    for bit in 0..w {
        // Retire linear factors before the next splitting round.
        work.retain(|g| {
            if g.len() == 2 {
                roots.push(g[0]);
                false
            } else {
                true
            }
        });
        if work.is_empty() {
            break;
        }
        let theta = 1u64 << bit;
        let mut next = Vec::with_capacity(work.len());
        for g in work {
            // Trace polynomial Σ_{j<w} (θx)^(2^j) mod g.
            let mut z = vec![0u64, theta];
            let mut acc = z.clone();
            for _ in 1..w {
                z = poly_sq_mod(f, &z, &g);
                poly_add_into(&mut acc, &z);
            }
            poly_trim(&mut acc);
            let g1 = poly_gcd_monic(f, g.clone(), acc)?;
            let d1 = g1.len() - 1;
            if d1 == 0 || d1 == g.len() - 1 {
                next.push(g); // this θ does not separate g's roots
            } else {
                let g2 = poly_div_exact(f, &g, &g1)?;
                next.push(g1);
                next.push(g2);
            }
        }
        work = next;
    }
    work.retain(|g| {
        if g.len() == 2 {
            roots.push(g[0]);
            false
        } else {
            true
        }
    });
    if !work.is_empty() || roots.len() != deg {
        return None; // unreachable for a verified splitting polynomial
    }
    Some(roots)
}

/// Remove trailing zero coefficients (the zero polynomial becomes empty).
fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// `a += b` coefficient-wise.
fn poly_add_into(a: &mut Vec<u64>, b: &[u64]) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (ai, &bi) in a.iter_mut().zip(b) {
        *ai ^= bi;
    }
}

/// `a² mod r` for monic `r`. Squaring in characteristic 2 squares each
/// coefficient and spreads it to the doubled degree.
fn poly_sq_mod(f: &FieldSpec, a: &[u64], r: &[u64]) -> Vec<u64> {
    let mut sq = vec![0u64; 2 * a.len().saturating_sub(1) + 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai != 0 {
            sq[2 * i] = f.mul(ai, ai);
        }
    }
    poly_mod_monic(f, &mut sq, r);
    sq
}

/// Reduce `a` modulo the monic polynomial `r` in place
/// (`x^deg(r) ≡ Σ_{i<deg} r[i]·x^i`).
fn poly_mod_monic(f: &FieldSpec, a: &mut Vec<u64>, r: &[u64]) {
    let dr = r.len() - 1;
    debug_assert_eq!(r[dr], 1);
    while a.len() > dr {
        let top = a.pop().unwrap();
        if top != 0 {
            let off = a.len() - dr;
            for (i, &ri) in r[..dr].iter().enumerate() {
                if ri != 0 {
                    a[off + i] ^= f.mul(top, ri);
                }
            }
        }
    }
    poly_trim(a);
}

/// Remainder of `a` divided by arbitrary nonzero `b` (trimmed).
fn poly_rem(f: &FieldSpec, mut a: Vec<u64>, b: &[u64]) -> Option<Vec<u64>> {
    let db = b.len() - 1;
    let lead_inv = f.inv(*b.last().unwrap()).ok()?;
    poly_trim(&mut a);
    while a.len() > db {
        let top = a.pop().unwrap();
        if top != 0 {
            let coef = f.mul(top, lead_inv);
            let off = a.len() - db;
            for (i, &bi) in b[..db].iter().enumerate() {
                if bi != 0 {
                    a[off + i] ^= f.mul(coef, bi);
                }
            }
        }
        poly_trim(&mut a);
    }
    Some(a)
}

/// Monic greatest common divisor of `a` and `b` over the field.
fn poly_gcd_monic(f: &FieldSpec, mut a: Vec<u64>, mut b: Vec<u64>) -> Option<Vec<u64>> {
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(f, a, &b)?;
        a = b;
        b = r;
    }
    if a.is_empty() {
        return None; // gcd(0, 0): cannot occur for a monic input
    }
    let lead_inv = f.inv(*a.last().unwrap()).ok()?;
    for c in &mut a {
        *c = f.mul(*c, lead_inv);
    }
    Some(a)
}

/// Exact quotient `a / b` for monic `b` dividing monic `a`.
fn poly_div_exact(f: &FieldSpec, a: &[u64], b: &[u64]) -> Option<Vec<u64>> {
    let da = a.len() - 1;
    let db = b.len() - 1;
    debug_assert!(b[db] == 1 && da >= db);
    let mut rem = a.to_vec();
    let mut quot = vec![0u64; da - db + 1];
    for dq in (0..=da - db).rev() {
        let top = rem[dq + db];
        if top != 0 {
            quot[dq] = top;
            for (i, &bi) in b.iter().enumerate() {
                if bi != 0 {
                    rem[dq + i] ^= f.mul(top, bi);
                }
            }
        }
    }
    if rem.iter().any(|&c| c != 0) {
        return None; // not an exact divisor: inconsistent factorization
    }
    Some(quot)
}
