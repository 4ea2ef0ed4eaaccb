//! Small shared helpers.

/// Ceiling of the base-2 logarithm: the smallest `k` with `2^k ≥ x`.
///
/// `x` must be positive; `ceil_log2(1) == 0`.
pub(crate) fn ceil_log2(x: u64) -> u32 {
    debug_assert!(x > 0, "ceil_log2 of zero");
    64 - (x - 1).leading_zeros()
}

/// `max(1, ceil_log2(x))` — the logarithm convention used by every
/// sparsification threshold, so single-element inputs never yield a zero
/// slab size or capacity.
pub(crate) fn lg(x: u64) -> u32 {
    ceil_log2(x).max(1)
}

/// Whether every byte of `bytes` is zero. Used on hot query paths to skip
/// all-zero syndrome prefixes without unpacking field elements.
pub(crate) fn all_zero(bytes: &[u8]) -> bool {
    let mut chunks = bytes.chunks_exact(8);
    for c in &mut chunks {
        if u64::from_ne_bytes(c.try_into().unwrap()) != 0 {
            return false;
        }
    }
    chunks.remainder().iter().all(|&b| b == 0)
}
