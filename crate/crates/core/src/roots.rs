//! Integer roots by Newton iteration.
//!
//! These are the building blocks of every oracle in the crate, so they are
//! written against plain `BigUint` arithmetic and never touch a series.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `floor(sqrt(n))`.
///
/// Starts from a power of two that is guaranteed to be above the root and
/// runs the decreasing Newton sequence until it stops decreasing.
pub fn integer_sqrt(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    // 2^ceil(bits/2) > sqrt(n)
    let mut x = BigUint::one() << n.bits().div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1u32;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// `floor(n^(1/k))` for `k >= 1`.
pub fn integer_nth_root(n: &BigUint, k: u32) -> BigUint {
    assert!(k >= 1, "root degree must be positive");
    if k == 1 || n.is_zero() {
        return n.clone();
    }
    if k == 2 {
        return integer_sqrt(n);
    }
    let km1 = BigUint::from(k - 1);
    let kk = BigUint::from(k);
    // 2^ceil(bits/k) > n^(1/k)
    let mut x = BigUint::one() << n.bits().div_ceil(u64::from(k));
    loop {
        let y = (&km1 * &x + n / x.pow(k - 1)) / &kk;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// True iff `n` is a perfect square.
pub fn is_perfect_square(n: &BigUint) -> bool {
    let r = integer_sqrt(n);
    &r * &r == *n
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn small_square_roots() {
        assert_eq!(integer_sqrt(&big(0)), big(0));
        assert_eq!(integer_sqrt(&big(1)), big(1));
        assert_eq!(integer_sqrt(&big(12)), big(3));
        assert_eq!(integer_sqrt(&big(332929)), big(577));
        assert_eq!(integer_sqrt(&big(332928)), big(576));
    }

    #[test]
    fn exhaustive_below_ten_thousand() {
        for n in 0u64..10_000 {
            let r = integer_sqrt(&big(n));
            assert!(&r * &r <= big(n));
            assert!((&r + 1u32) * (&r + 1u32) > big(n));
            let c = integer_nth_root(&big(n), 3);
            assert!(c.pow(3) <= big(n) && (&c + 1u32).pow(3) > big(n));
        }
    }

    #[test]
    fn two_times_ten_to_the_twenty() {
        let n = big(2) * BigUint::from(10u32).pow(20);
        assert_eq!(integer_sqrt(&n).to_string(), "14142135623");
    }

    #[test]
    fn perfect_square_detection() {
        assert!(is_perfect_square(&big(0)));
        assert!(is_perfect_square(&big(4)));
        assert!(!is_perfect_square(&big(2)));
        assert!(!is_perfect_square(&big(13)));
        assert!(is_perfect_square(&(big(649) * big(649))));
    }

    proptest! {
        #[test]
        fn sqrt_brackets(words in proptest::collection::vec(any::<u32>(), 1..9)) {
            let n = BigUint::new(words);
            let r = integer_sqrt(&n);
            prop_assert!(&r * &r <= n);
            prop_assert!((&r + 1u32) * (&r + 1u32) > n);
            prop_assert_eq!(r, n.sqrt());
        }

        #[test]
        fn nth_root_matches_reference(words in proptest::collection::vec(any::<u32>(), 1..9), k in 1u32..7) {
            let n = BigUint::new(words);
            let r = integer_nth_root(&n, k);
            prop_assert_eq!(r, n.nth_root(k));
        }
    }
}
