//! Ternary-digit machinery for the complement of the middle-thirds Cantor set.
//!
//! A point `x ∈ [0,1)` is converted to the exact fixed-point fraction
//! `N / 2^126` (exact for every double above `2^-74`, and below that the first
//! 45 ternary digits are zero anyway). Digits are then produced by
//! `N ← 3N`, `digit = N >> 126`, `N ← N mod 2^126`, all in `u128`, so no
//! floating error accumulates however deep the expansion goes.

/// Depth cap for fractal membership; a double carries about 33 ternary digits,
/// the remaining digits are those of the exact binary fraction.
pub const MAX_DEPTH: u32 = 45;

const FRAC_BITS: u32 = 126;
const FRAC_MASK: u128 = (1u128 << FRAC_BITS) - 1;

/// Maximal gap `(left, right)` of the Cantor complement containing a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantorGap {
    pub level: u32,
    pub left: f64,
    pub right: f64,
}

fn to_fixed(x: f64) -> u128 {
    // x in [0,1): scaling by a power of two is exact, the cast floors.
    (x * 2f64.powi(FRAC_BITS as i32)) as u128
}

/// Iterator over the ternary digits of `x ∈ [0,1)`.
#[derive(Debug, Clone)]
pub struct TernaryDigits {
    frac: u128,
}

impl TernaryDigits {
    pub fn new(x: f64) -> Self {
        debug_assert!((0.0..1.0).contains(&x));
        TernaryDigits { frac: to_fixed(x) }
    }

    /// True when every remaining digit is zero.
    pub fn exhausted(&self) -> bool {
        self.frac == 0
    }
}

impl Iterator for TernaryDigits {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        let tripled = self.frac * 3;
        self.frac = tripled & FRAC_MASK;
        Some((tripled >> FRAC_BITS) as u8)
    }
}

/// The gap of level `≤ depth` containing `x`, if any.
pub fn find_gap(x: f64, depth: u32) -> Option<CantorGap> {
    if !(x > 0.0 && x < 1.0) {
        return None;
    }
    let depth = depth.min(MAX_DEPTH);
    let mut digits = TernaryDigits::new(x);
    let mut prefix: u128 = 0;
    for level in 1..=depth {
        let d = digits.next().unwrap();
        if d == 1 {
            if digits.exhausted() {
                // x is exactly a left endpoint, which lies in the Cantor set.
                return None;
            }
            let scale = 3f64.powi(level as i32);
            return Some(CantorGap {
                level,
                left: (3 * prefix + 1) as f64 / scale,
                right: (3 * prefix + 2) as f64 / scale,
            });
        }
        prefix = 3 * prefix + d as u128;
    }
    None
}

pub fn contains(x: f64, depth: u32) -> bool {
    find_gap(x, depth).is_some()
}

/// First ternary digit of `x`, which selects the piece `R₁𝔇` (0), `𝔇₀` (1) or
/// `R₂𝔇` (2) of the self-similar decomposition.
pub fn first_digit(x: f64) -> Option<u8> {
    if !(x > 0.0 && x < 1.0) {
        return None;
    }
    TernaryDigits::new(x).next()
}

pub fn dist_to_complement(x: f64, depth: u32) -> f64 {
    match find_gap(x, depth) {
        Some(g) => (x - g.left).min(g.right - x).max(0.0),
        None => 0.0,
    }
}

/// All gaps of levels `1..=level`, sorted left to right.
pub fn gaps(level: u32) -> Vec<(f64, f64)> {
    fn recurse(lo: f64, width: f64, remaining: u32, out: &mut Vec<(f64, f64)>) {
        if remaining == 0 {
            return;
        }
        let third = width / 3.0;
        recurse(lo, third, remaining - 1, out);
        out.push((lo + third, lo + 2.0 * third));
        recurse(lo + 2.0 * third, third, remaining - 1, out);
    }
    let mut out = Vec::with_capacity((1usize << level.min(30)) - 1);
    recurse(0.0, 1.0, level, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent digit oracle on exact rationals p/q (q a power of two).
    fn rational_has_gap_digit(p: u128, q: u128, depth: u32) -> bool {
        let mut num = p;
        for _ in 0..depth {
            num *= 3;
            let d = num / q;
            num %= q;
            if d == 1 {
                return num != 0;
            }
        }
        false
    }

    #[test]
    fn midpoint_is_in_first_gap() {
        for depth in 1..=MAX_DEPTH {
            assert!(contains(0.5, depth));
        }
        let g = find_gap(0.5, 1).unwrap();
        assert_eq!(g.level, 1);
        assert!((g.left - 1.0 / 3.0).abs() < 1e-16 && (g.right - 2.0 / 3.0).abs() < 1e-16);
        assert!((dist_to_complement(0.5, 10) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn quarter_is_a_cantor_point() {
        // 1/4 = 0.020202... in base 3.
        assert!(!contains(0.25, 20));
        assert!(!contains(0.25, MAX_DEPTH));
        assert!(!rational_has_gap_digit(1, 4, 45));
        let digits: Vec<u8> = TernaryDigits::new(0.25).take(8).collect();
        assert_eq!(digits, vec![0, 2, 0, 2, 0, 2, 0, 2]);
    }

    #[test]
    fn gap_lookup_for_second_level() {
        let x = 0.12;
        let g = find_gap(x, 5).unwrap();
        assert_eq!(g.level, 2);
        assert!((g.left - 1.0 / 9.0).abs() < 1e-16);
        assert!((dist_to_complement(x, 5) - (0.12 - 1.0 / 9.0)).abs() < 1e-15);
        assert!((dist_to_complement(x, 5) - 0.008888888888888).abs() < 1e-12);
    }

    #[test]
    fn outside_unit_interval() {
        assert!(!contains(-0.1, 5));
        assert!(!contains(1.0, 5));
        assert!(!contains(0.0, 5));
        assert_eq!(dist_to_complement(1.5, 5), 0.0);
    }

    #[test]
    fn agrees_with_rational_oracle_on_dyadics() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let q: u128 = 1 << 40;
        for _ in 0..20_000 {
            let p: u128 = rng.random_range(1..q);
            let x = p as f64 / q as f64;
            let depth = rng.random_range(1..=MAX_DEPTH);
            assert_eq!(contains(x, depth), rational_has_gap_digit(p, q, depth), "x={x} depth={depth}");
        }
    }

    #[test]
    fn membership_is_monotone_in_depth() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20_000 {
            let x: f64 = rng.random();
            for k in 1..MAX_DEPTH {
                if contains(x, k) {
                    assert!(contains(x, k + 1));
                }
            }
        }
    }

    #[test]
    fn gap_lengths_sum_exactly() {
        for k in 1..=16 {
            let total: f64 = gaps(k).iter().map(|(a, b)| b - a).sum();
            let expected = 1.0 - (2.0f64 / 3.0).powi(k as i32);
            assert!((total - expected).abs() < 1e-12, "level {k}");
        }
        let g = gaps(3);
        assert_eq!(g.len(), 7);
        assert!(g.windows(2).all(|w| w[0].1 < w[1].0));
    }
}
