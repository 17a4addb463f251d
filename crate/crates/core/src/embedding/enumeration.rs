//! The fixed bijective enumeration of the rationals.
//!
//! Position 0 holds 0; afterwards the positive rationals appear in
//! Calkin–Wilf breadth-first order, each immediately followed by its
//! negation: 0, 1, -1, 1/2, -1/2, 2, -2, 1/3, -1/3, 3/2, -3/2, ...
//! Both directions are computable: a value's index comes from its path in
//! the Calkin–Wilf tree (recovered by run-length division steps, so even
//! lopsided fractions like 1000000/1 resolve quickly), and an index's
//! value comes from replaying that path downward.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numerals::Rational;

/// The positive rational at 1-based breadth-first position `index` of the
/// Calkin–Wilf tree (1, 1/2, 2, 1/3, 3/2, 2/3, 3, ...).
fn calkin_wilf_value(index: &BigUint) -> Rational {
    assert!(!index.is_zero(), "Calkin-Wilf positions start at 1");
    let mut p = BigUint::one();
    let mut q = BigUint::one();
    // Skip the leading 1 bit; remaining bits walk from the root, most
    // significant first: 0 descends left (p/(p+q)), 1 right ((p+q)/q).
    for pos in (0..index.bits() - 1).rev() {
        if index.bit(pos) {
            p += &q;
        } else {
            q += &p;
        }
    }
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// The 1-based breadth-first position of a positive rational in the
/// Calkin–Wilf tree. Inverse of [`calkin_wilf_value`].
fn calkin_wilf_index(value: &Rational) -> BigUint {
    assert!(value.is_positive(), "Calkin-Wilf tree holds positives only");
    let mut p = value.numer().magnitude().clone();
    let mut q = value.denom().magnitude().clone();
    // Walk up to the root, emitting each step's direction; equal runs of
    // direction collapse into one division.
    let mut path: Vec<(bool, BigUint)> = Vec::new();
    let one = BigUint::one();
    while p != q {
        if p > q {
            // A run of right-child steps: parent of p/q is (p-q)/q.
            let runs = (&p - &one) / &q;
            p -= &runs * &q;
            path.push((true, runs));
        } else {
            let runs = (&q - &one) / &p;
            q -= &runs * &p;
            path.push((false, runs));
        }
    }
    // Rebuild the index: a leading 1, then the path root-to-leaf, each
    // run appended as a block of equal bits.
    let mut index = BigUint::one();
    for (bit, runs) in path.iter().rev() {
        let width = runs.to_u64().expect("tree path runs fit a shift count");
        index <<= width;
        if *bit {
            index |= (BigUint::one() << width) - &one;
        }
    }
    index
}

/// The rational at `position` of the enumeration.
pub fn rational_at(position: &BigUint) -> Rational {
    if position.is_zero() {
        return Rational::zero();
    }
    // Position 2j-1 holds the j-th Calkin-Wilf value, position 2j its
    // negation.
    let j = (position + BigUint::one()) >> 1;
    let value = calkin_wilf_value(&j);
    if position.bit(0) {
        value
    } else {
        -value
    }
}

/// The enumeration position of a rational. Inverse of [`rational_at`].
pub fn position_of(value: &Rational) -> BigUint {
    if value.is_zero() {
        return BigUint::zero();
    }
    let j = calkin_wilf_index(&value.abs());
    let doubled = &j << 1;
    if value.is_positive() {
        doubled - BigUint::one()
    } else {
        doubled
    }
}

/// Convenience for small positions.
pub fn rational_at_u64(position: u64) -> Rational {
    rational_at(&BigUint::from(position))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn enumeration_prefix_is_the_documented_sequence() {
        let expected = [
            rat(0, 1),
            rat(1, 1),
            rat(-1, 1),
            rat(1, 2),
            rat(-1, 2),
            rat(2, 1),
            rat(-2, 1),
            rat(1, 3),
            rat(-1, 3),
            rat(3, 2),
            rat(-3, 2),
        ];
        for (i, want) in expected.iter().enumerate() {
            assert_eq!(rational_at_u64(i as u64), *want, "position {i}");
        }
    }

    #[test]
    fn calkin_wilf_breadth_first_prefix() {
        let expected = [
            rat(1, 1),
            rat(1, 2),
            rat(2, 1),
            rat(1, 3),
            rat(3, 2),
            rat(2, 3),
            rat(3, 1),
            rat(1, 4),
            rat(4, 3),
            rat(3, 5),
            rat(5, 2),
            rat(2, 5),
            rat(5, 3),
            rat(3, 4),
            rat(4, 1),
        ];
        for (i, want) in expected.iter().enumerate() {
            let index = BigUint::from(i as u64 + 1);
            assert_eq!(calkin_wilf_value(&index), *want, "position {}", i + 1);
        }
    }

    #[test]
    fn positions_round_trip_both_ways() {
        for i in 0..4000u64 {
            let value = rational_at_u64(i);
            assert_eq!(position_of(&value), BigUint::from(i), "value {value}");
        }
    }

    #[test]
    fn lopsided_fractions_index_without_long_walks() {
        // 50/1 sits fifty levels deep; the run-collapsed walk reaches it
        // in one division instead of fifty subtractions.
        // Tree position 2^50 - 1 (an all-right path), interleaved to
        // enumeration position 2 * (2^50 - 1) - 1.
        let big = rat(50, 1);
        let index = position_of(&big);
        assert_eq!(index, BigUint::from((1u128 << 51) - 3));
        assert_eq!(rational_at(&index), big);

        let thin = rat(2, 1001);
        let index = position_of(&thin);
        assert_eq!(rational_at(&index), thin);
    }

    #[test]
    fn enumeration_is_injective_on_a_long_prefix() {
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..4000u64 {
            assert!(seen.insert(rational_at_u64(i)), "duplicate at {i}");
        }
    }
}
