//! Arithmetic in binary extension fields `GF(2^w)`, `1 ≤ w ≤ 64`.
//!
//! Field elements are polynomials over GF(2) of degree `< w`, stored as the
//! integer whose bit `i` is the coefficient of `x^i`; every element fits in a
//! `u64`. Addition is bitwise XOR. Multiplication is a carryless product
//! followed by reduction modulo a fixed irreducible polynomial
//! `x^w + p(x)`, where the *low part* `p` has degree `< w`.
//!
//! A [`FieldSpec`] bundles the width and modulus. The widths that are
//! multiples of 8 (the ones used for edge-locator syndromes) come from a
//! built-in modulus table; [`FieldSpec::with_modulus`] accepts any other
//! width with a caller-chosen modulus. Either way the modulus is verified
//! irreducible at construction time with Rabin's test, so a `FieldSpec` in
//! hand is proof of a well-formed field.
//!
//! The built-in table picks, for each width, the lexicographically smallest
//! low part that makes `x^w + p(x)` irreducible. This is a convention, not a
//! performance choice, but it keeps every low part below `x^8`, so reduction
//! after a carryless multiply needs at most three folds.
//!
//! On x86-64 the carryless product uses the `pclmulqdq` instruction when the
//! CPU advertises it (checked once at runtime); all other paths use a
//! portable shift-and-XOR loop with identical results.

use crate::{Error, Result};

/// Widths served by the built-in modulus table, in ascending order.
pub const TABLE_WIDTHS: [u32; 8] = [8, 16, 24, 32, 40, 48, 56, 64];

/// Low parts `p` of the built-in moduli `x^w + p(x)`, aligned with
/// [`TABLE_WIDTHS`]. Each is the smallest (as an integer) low part making
/// the modulus irreducible over GF(2).
const TABLE_LOW_PARTS: [u64; 8] = [0x1B, 0x2B, 0x1B, 0x8D, 0x39, 0x2D, 0x95, 0x1B];

/// A binary extension field `GF(2^w)` with a fixed irreducible modulus.
///
/// Elements are plain `u64` values `< 2^w`; all operations are methods on
/// the `FieldSpec` and never allocate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    w: u32,
    low: u64,
    mask: u64,
}

impl FieldSpec {
    /// Field with the built-in modulus for width `w`.
    ///
    /// Errors with [`Error::Config`] unless `w` is one of [`TABLE_WIDTHS`].
    pub fn new(w: u32) -> Result<FieldSpec> {
        let idx = TABLE_WIDTHS
            .iter()
            .position(|&tw| tw == w)
            .ok_or_else(|| {
                Error::Config(format!(
                    "field width {w} is not in the supported table {TABLE_WIDTHS:?}"
                ))
            })?;
        FieldSpec::with_modulus(w, TABLE_LOW_PARTS[idx])
    }

    /// Field `GF(2^w)` with the caller-supplied modulus `x^w + p(x)`,
    /// where `low` encodes `p` bitwise.
    ///
    /// Errors with [`Error::Config`] if `w` is 0 or exceeds 64, if `low`
    /// has degree `≥ w`, or if the polynomial is reducible.
    pub fn with_modulus(w: u32, low: u64) -> Result<FieldSpec> {
        if w == 0 || w > 64 {
            return Err(Error::Config(format!(
                "field width must be between 1 and 64, got {w}"
            )));
        }
        let mask = if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
        if low & !mask != 0 {
            return Err(Error::Config(format!(
                "modulus low part {low:#x} has degree ≥ field width {w}"
            )));
        }
        let spec = FieldSpec { w, low, mask };
        spec.validate_irreducible()?;
        Ok(spec)
    }

    /// Smallest table field whose elements can hold `bits` bits.
    ///
    /// Errors with [`Error::Config`] if `bits` is 0 or exceeds 64.
    pub fn for_width(bits: u32) -> Result<FieldSpec> {
        let w = TABLE_WIDTHS
            .iter()
            .copied()
            .find(|&tw| tw >= bits)
            .ok_or_else(|| {
                Error::Config(format!(
                    "no supported field width can hold {bits} bits (max 64)"
                ))
            })?;
        if bits == 0 {
            return Err(Error::Config("field width of 0 bits requested".into()));
        }
        FieldSpec::new(w)
    }

    /// Field width `w` in bits.
    pub fn width(&self) -> u32 {
        self.w
    }

    /// Low part `p` of the modulus `x^w + p(x)`.
    pub fn modulus_low(&self) -> u64 {
        self.low
    }

    /// Bitmask with the low `w` bits set; every element satisfies
    /// `e & mask == e`.
    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Bytes needed to store one element: `⌈w/8⌉`.
    pub fn elem_bytes(&self) -> usize {
        self.w.div_ceil(8) as usize
    }

    /// Field addition (and subtraction): bitwise XOR.
    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a <= self.mask && b <= self.mask);
        a ^ b
    }

    /// Field multiplication.
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a <= self.mask && b <= self.mask);
        self.reduce(clmul64(a, b))
    }

    /// Reduce a carryless product of two elements modulo `x^w + p(x)`.
    ///
    /// Uses the identity `x^w ≡ p(x)`: repeatedly splits off the part of
    /// degree `≥ w` and folds it back as a carryless multiple of `p`. The
    /// degree shrinks by at least `w − deg p` per fold, so for table moduli
    /// (`deg p < 8`) at most three folds run.
    fn reduce(&self, mut prod: u128) -> u64 {
        let w = self.w;
        let low_mask = (1u128 << w) - 1;
        loop {
            let hi = (prod >> w) as u64;
            if hi == 0 {
                return prod as u64;
            }
            prod = (prod & low_mask) ^ clmul64(hi, self.low);
        }
    }

    /// `a` raised to the integer power `e` (with `pow(0, 0) == 1`).
    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, via `a^(2^w − 2)`.
    ///
    /// Errors with [`Error::Argument`] if `a` is zero.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::Argument("inverse of the zero element".into()));
        }
        // 2^w − 2 == mask − 1 (mask == 2^w − 1).
        Ok(self.pow(a, self.mask - 1))
    }

    /// Serialize one element as `elem_bytes()` big-endian bytes into `out`.
    ///
    /// # Panics
    ///
    /// Panics if `out.len() != elem_bytes()`.
    pub fn write_element(&self, e: u64, out: &mut [u8]) {
        assert_eq!(out.len(), self.elem_bytes(), "element buffer size mismatch");
        debug_assert!(e <= self.mask);
        let be = e.to_be_bytes();
        out.copy_from_slice(&be[8 - self.elem_bytes()..]);
    }

    /// Deserialize one element from `elem_bytes()` big-endian bytes.
    ///
    /// Errors with [`Error::Store`] if the encoded value has bits above the
    /// field width (possible only when `w` is not a multiple of 8).
    ///
    /// # Panics
    ///
    /// Panics if `bytes.len() != elem_bytes()`.
    pub fn read_element(&self, bytes: &[u8]) -> Result<u64> {
        assert_eq!(
            bytes.len(),
            self.elem_bytes(),
            "element buffer size mismatch"
        );
        let mut be = [0u8; 8];
        be[8 - bytes.len()..].copy_from_slice(bytes);
        let e = u64::from_be_bytes(be);
        if e > self.mask {
            return Err(Error::Store(format!(
                "field element {e:#x} exceeds width {w}",
                w = self.w
            )));
        }
        Ok(e)
    }

    /// Rabin's irreducibility test for `x^w + p(x)`.
    ///
    /// The polynomial is irreducible iff `x^(2^w) ≡ x (mod f)` and, for
    /// every prime `r | w`, `gcd(x^(2^(w/r)) − x, f) = 1`. The repeated
    /// squarings run in the candidate quotient ring via `mul`, which is
    /// well-defined whether or not `f` is irreducible.
    fn validate_irreducible(&self) -> Result<()> {
        let w = self.w;
        if w >= 2 && self.low & 1 == 0 {
            // Constant term 0 means x divides the modulus.
            return Err(Error::Config(format!(
                "modulus x^{w} + {low:#x} is divisible by x",
                low = self.low
            )));
        }
        if w == 1 {
            return Ok(()); // Degree-1 polynomials are always irreducible.
        }
        const X: u64 = 0b10;
        let mut t = X;
        for _ in 0..w {
            t = self.mul(t, t);
        }
        if t != X {
            return Err(Error::Config(format!(
                "modulus x^{w} + {low:#x} is reducible (splitting test failed)",
                low = self.low
            )));
        }
        let full = (1u128 << w) | self.low as u128;
        for r in prime_divisors(w) {
            let mut y = X;
            for _ in 0..(w / r) {
                y = self.mul(y, y);
            }
            if poly_gcd(full, (y ^ X) as u128) != 1 {
                return Err(Error::Config(format!(
                    "modulus x^{w} + {low:#x} is reducible \
                     (shares a factor with x^(2^({w}/{r})) − x)",
                    low = self.low
                )));
            }
        }
        Ok(())
    }
}

/// Carryless 64×64 → 128-bit product.
fn clmul64(a: u64, b: u64) -> u128 {
    #[cfg(target_arch = "x86_64")]
    {
        if let Some(p) = clmul_x86::clmul64(a, b) {
            return p;
        }
    }
    clmul64_generic(a, b)
}

/// Portable carryless multiply: XOR of `a` shifted to each set bit of `b`.
fn clmul64_generic(a: u64, b: u64) -> u128 {
    let wide = a as u128;
    let mut acc = 0u128;
    let mut rest = b;
    while rest != 0 {
        acc ^= wide << rest.trailing_zeros();
        rest &= rest - 1;
    }
    acc
}

#[cfg(target_arch = "x86_64")]
#[allow(unsafe_code)]
mod clmul_x86 {
    use std::arch::x86_64::{__m128i, _mm_clmulepi64_si128, _mm_set_epi64x};

    /// Carryless product via `pclmulqdq`, or `None` if the CPU lacks it.
    /// The feature probe is cached by the standard library.
    pub(super) fn clmul64(a: u64, b: u64) -> Option<u128> {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: `pclmulqdq` support was verified just above.
            Some(unsafe { clmul64_pclmul(a, b) })
        } else {
            None
        }
    }

    #[target_feature(enable = "pclmulqdq")]
    fn clmul64_pclmul(a: u64, b: u64) -> u128 {
        let va = _mm_set_epi64x(0, a as i64);
        let vb = _mm_set_epi64x(0, b as i64);
        let prod = _mm_clmulepi64_si128::<0>(va, vb);
        // SAFETY: __m128i is 16 opaque bytes; reinterpreting as u128 is a
        // plain bit copy. On little-endian x86 the low lane lands in the
        // low 64 bits.
        unsafe { std::mem::transmute::<__m128i, u128>(prod) }
    }
}

/// Distinct prime divisors of `n ≥ 2`, ascending.
fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut primes = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            primes.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    primes
}

/// Degree of a GF(2)[x] polynomial packed in a `u128` (`-1` for zero).
fn poly_deg(a: u128) -> i32 {
    127 - a.leading_zeros() as i32
}

/// Greatest common divisor in GF(2)[x], by repeated remainder.
fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let db = poly_deg(b);
        loop {
            let da = poly_deg(a);
            if da < db {
                break;
            }
            a ^= b << (da - db);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}
