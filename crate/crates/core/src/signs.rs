//! Every sign convention used by the constructions, in one place.
//!
//! | where                          | rule                                                    |
//! |--------------------------------|---------------------------------------------------------|
//! | tensor of maps                 | `(1⊗d)(x⊗y) = (-1)^{|x|} x⊗dy`                          |
//! | derivations                    | `d(xy) = dx·y + (-1)^{|x|} x·dy`                        |
//! | chains                         | `d = Σ (-1)^i ∂_i`, AW coproduct front ⊗ back, no sign  |
//! | bar, internal part             | `[..|a_i|..] ↦ -(-1)^{ε_{i-1}} [..|da_i|..]`            |
//! | bar, merge part                | `[..|a_i|a_{i+1}|..] ↦ (-1)^{ε_i} [..|a_i a_{i+1}|..]`  |
//! | cobar                          | `d(s⁻¹c) = -s⁻¹dc + Σ (-1)^{|c'|} s⁻¹c' s⁻¹c''`         |
//! | unit `C → BΩC`                 | `c ↦ Σ_k [s⁻¹c_(1)|…|s⁻¹c_(k)]`, iterated reduced Δ     |
//!
//! Here `ε_i = Σ_{j≤i} (|a_j| + 1)` and `Σ c' ⊗ c''` is the reduced coproduct.
//! Negating the quadratic cobar term also gives `d² = 0`; this table is the
//! one under which the nerve and bar chains agree on the nose.

use num_bigint::BigInt;

/// `(-1)^k`.
pub fn parity(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn parity_big(k: usize) -> BigInt {
    BigInt::from(parity(k))
}

/// Sign of `1⊗d` on `x⊗y` with `|x| = deg_left`.
pub fn koszul(deg_left: usize) -> i64 {
    parity(deg_left)
}

/// Sign of the internal term hitting letter `i` (0-based) of a bar word,
/// given `prefix = ε_{i-1}`, the suspended degree of the letters before it.
pub fn bar_internal(prefix: usize) -> i64 {
    -parity(prefix)
}

/// Sign of merging letters `i` and `i+1`, given `through = ε_i`, the
/// suspended degree up to and including letter `i`.
pub fn bar_merge(through: usize) -> i64 {
    parity(through)
}

/// Sign of the linear part of the cobar differential.
pub const COBAR_LINEAR: i64 = -1;

/// Sign of the quadratic term `s⁻¹c' s⁻¹c''`.
pub fn cobar_quadratic(deg_left: usize) -> i64 {
    parity(deg_left)
}
