//! The definable total orders that read binary digits least significant
//! first, together with rational-valued rank maps that serve as independent
//! order oracles.
//!
//! Three orders live here:
//!
//! * the final-digits order on the naturals, where the first disagreeing
//!   digit decides and a number that outlasts the other is lower or higher
//!   according to its next digit;
//! * a variant that reads the digits of the shorter number as continuing
//!   with zeros, which gives the order a least element;
//! * the signed extension to the integers, with the negatives mirrored to
//!   the left of zero and the positives to the right.
//!
//! Each order is dense (the variant is dense above its least element), and
//! `between` / `unbounded_witnesses` make that density computable.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::numerals::{Numeral, Sign, SignedNumeral};

pub use crate::numerals::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("order {kind} is carried by {expected}, got {got}")]
    CarrierMismatch {
        kind: OrderKind,
        expected: Carrier,
        got: Carrier,
    },
    #[error("interval ({lo}, {hi}) is empty in order {kind}")]
    EmptyInterval {
        kind: OrderKind,
        lo: String,
        hi: String,
    },
}

/// Which definable order is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    FinalDigits,
    Variant,
    SignedFinalDigits,
}

impl OrderKind {
    pub fn carrier(self) -> Carrier {
        match self {
            OrderKind::FinalDigits | OrderKind::Variant => Carrier::Naturals,
            OrderKind::SignedFinalDigits => Carrier::Integers,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            OrderKind::FinalDigits => "fd",
            OrderKind::Variant => "variant",
            OrderKind::SignedFinalDigits => "signed",
        }
    }

    pub fn from_token(s: &str) -> Option<OrderKind> {
        match s {
            "fd" => Some(OrderKind::FinalDigits),
            "variant" => Some(OrderKind::Variant),
            "signed" => Some(OrderKind::SignedFinalDigits),
            _ => None,
        }
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// The carrier set of an order or a basic open set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Carrier {
    Naturals,
    Integers,
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Carrier::Naturals => "naturals",
            Carrier::Integers => "integers",
        })
    }
}

/// A point of one of the two carriers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Nat(Numeral),
    Int(SignedNumeral),
}

impl Element {
    pub fn carrier(&self) -> Carrier {
        match self {
            Element::Nat(_) => Carrier::Naturals,
            Element::Int(_) => Carrier::Integers,
        }
    }

    pub fn as_nat(&self) -> Option<&Numeral> {
        match self {
            Element::Nat(n) => Some(n),
            Element::Int(_) => None,
        }
    }

    pub fn as_int(&self) -> Option<&SignedNumeral> {
        match self {
            Element::Int(i) => Some(i),
            Element::Nat(_) => None,
        }
    }

    pub fn nat(v: u64) -> Element {
        Element::Nat(Numeral::from_u64(v))
    }

    pub fn int(v: i64) -> Element {
        Element::Int(SignedNumeral::from_i64(v))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Nat(n) => write!(f, "{n}"),
            Element::Int(i) => write!(f, "{i}"),
        }
    }
}

impl From<Numeral> for Element {
    fn from(n: Numeral) -> Self {
        Element::Nat(n)
    }
}

impl From<SignedNumeral> for Element {
    fn from(i: SignedNumeral) -> Self {
        Element::Int(i)
    }
}

/// Final-digits comparison: scan digits from the least significant end; at
/// the first disagreement the number holding 0 is lower; when one sequence
/// ends first, the longer number is lower if its next digit is 0 and higher
/// if it is 1.
pub fn fd_cmp(n: &Numeral, m: &Numeral) -> Ordering {
    if let (Some(a), Some(b)) = (n.to_u64(), m.to_u64()) {
        return fd_cmp_u64(a, b);
    }
    let (ln, lm) = (n.len(), m.len());
    let common = ln.min(lm);
    for pos in 1..=common {
        let (dn, dm) = (n.digit_padded(pos), m.digit_padded(pos));
        if dn != dm {
            return if dn { Ordering::Greater } else { Ordering::Less };
        }
    }
    match ln.cmp(&lm) {
        Ordering::Equal => Ordering::Equal,
        Ordering::Greater => {
            if n.digit_padded(common + 1) {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        }
        Ordering::Less => {
            if m.digit_padded(common + 1) {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
    }
}

fn bit_len_u64(v: u64) -> u32 {
    64 - v.leading_zeros()
}

fn fd_cmp_u64(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let (la, lb) = (bit_len_u64(a), bit_len_u64(b));
    let common = la.min(lb);
    let mask = if common >= 64 { u64::MAX } else { (1u64 << common) - 1 };
    let diff = (a ^ b) & mask;
    if diff != 0 {
        let p = diff.trailing_zeros();
        return if (a >> p) & 1 == 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        };
    }
    if la > lb {
        if (a >> common) & 1 == 1 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    } else if (b >> common) & 1 == 1 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Variant comparison: as `fd_cmp`, but a sequence that ends is read as
/// continuing with zeros, so the first disagreeing digit always decides.
/// This order has least element zero.
pub fn variant_cmp(n: &Numeral, m: &Numeral) -> Ordering {
    if let (Some(a), Some(b)) = (n.to_u64(), m.to_u64()) {
        if a == b {
            return Ordering::Equal;
        }
        let p = (a ^ b).trailing_zeros();
        return if (a >> p) & 1 == 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        };
    }
    let top = n.len().max(m.len());
    for pos in 1..=top {
        let (dn, dm) = (n.digit_padded(pos), m.digit_padded(pos));
        if dn != dm {
            return if dn { Ordering::Greater } else { Ordering::Less };
        }
    }
    Ordering::Equal
}

/// Signed comparison: every negative is below zero, every positive above;
/// positives compare by `fd_cmp` of their magnitudes and negatives mirror it.
pub fn signed_cmp(x: &SignedNumeral, y: &SignedNumeral) -> Ordering {
    let block = |s: Sign| match s {
        Sign::Negative => 0u8,
        Sign::Zero => 1,
        Sign::Positive => 2,
    };
    match block(x.sign()).cmp(&block(y.sign())) {
        Ordering::Equal => match x.sign() {
            Sign::Zero => Ordering::Equal,
            Sign::Positive => fd_cmp(x.magnitude(), y.magnitude()),
            Sign::Negative => fd_cmp(y.magnitude(), x.magnitude()),
        },
        unequal => unequal,
    }
}

/// Compare two carrier points in the given order.
pub fn compare(kind: OrderKind, x: &Element, y: &Element) -> Result<Ordering, OrderError> {
    match kind {
        OrderKind::FinalDigits | OrderKind::Variant => {
            let (a, b) = (expect_nat(kind, x)?, expect_nat(kind, y)?);
            Ok(if kind == OrderKind::FinalDigits {
                fd_cmp(a, b)
            } else {
                variant_cmp(a, b)
            })
        }
        OrderKind::SignedFinalDigits => {
            let (a, b) = (expect_int(kind, x)?, expect_int(kind, y)?);
            Ok(signed_cmp(a, b))
        }
    }
}

fn expect_nat<'a>(kind: OrderKind, x: &'a Element) -> Result<&'a Numeral, OrderError> {
    x.as_nat().ok_or(OrderError::CarrierMismatch {
        kind,
        expected: Carrier::Naturals,
        got: x.carrier(),
    })
}

fn expect_int<'a>(kind: OrderKind, x: &'a Element) -> Result<&'a SignedNumeral, OrderError> {
    x.as_int().ok_or(OrderError::CarrierMismatch {
        kind,
        expected: Carrier::Integers,
        got: x.carrier(),
    })
}

/// Rank of a natural in the final-digits order: digits map to `2*d` ternary
/// digit weights and the end of the sequence contributes one further
/// `3^-(len+1)` terminator, so distinct naturals get distinct ranks and rank
/// comparison reproduces `fd_cmp`.
///
/// ```text
/// rank3(n) = sum_i (2 * digit_i) * 3^(-i)  +  3^(-(len+1))
/// ```
pub fn rank3(n: &Numeral) -> Rational {
    let third = Rational::new(BigInt::one(), BigInt::from(3));
    let two = Rational::from_integer(BigInt::from(2));
    let mut acc = Rational::zero();
    let mut place = third.clone();
    for digit in n.digits() {
        if digit {
            acc += &two * &place;
        }
        place *= &third;
    }
    acc + place
}

/// Rank of a natural in the variant order: the binary expansion read as a
/// dyadic fraction, `rankv(n) = sum_i digit_i * 2^(-i)`.
pub fn rankv(n: &Numeral) -> Rational {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut acc = Rational::zero();
    let mut place = half.clone();
    for digit in n.digits() {
        if digit {
            acc += &place;
        }
        place *= &half;
    }
    acc
}

/// Rank of an integer in the signed order: `±rank3(|x|)` with `ranks(0) = 0`.
pub fn ranks(x: &SignedNumeral) -> Rational {
    match x.sign() {
        Sign::Zero => Rational::zero(),
        Sign::Positive => rank3(x.magnitude()),
        Sign::Negative => -rank3(x.magnitude()),
    }
}

/// Least natural, in ordinary magnitude order, lying strictly between the
/// optional final-digits bounds (`None` leaves that side unbounded).
///
/// This is a digit-surgery search rather than a magnitude scan: candidate
/// lengths are tried in increasing order, and for each length a small
/// dynamic program over comparison states (still matching / decided below /
/// decided above, against each bound) finds the cheapest digit choice. Any
/// nonempty strict interval contains an element no longer than one digit
/// past its longer endpoint, so the length sweep is short. Returns `None`
/// only for empty intervals.
pub fn fd_least_strictly_between(lo: Option<&Numeral>, hi: Option<&Numeral>) -> Option<Numeral> {
    if let (Some(a), Some(b)) = (lo, hi) {
        if fd_cmp(a, b) != Ordering::Less {
            return None;
        }
    }

    // Comparison progress of the candidate against one bound.
    const MATCHING: usize = 0;
    const BELOW: usize = 1;
    const ABOVE: usize = 2;

    let start = |bound: Option<&Numeral>, missing: usize| -> usize {
        if bound.is_some() {
            MATCHING
        } else {
            missing
        }
    };
    let step = |state: usize, bound: Option<&Numeral>, pos: u64, d: bool| -> usize {
        if state != MATCHING {
            return state;
        }
        let y = bound.expect("matching state only occurs with a bound present");
        if pos <= y.len() {
            let dy = y.digit_padded(pos);
            match (d, dy) {
                (false, true) => BELOW,
                (true, false) => ABOVE,
                _ => MATCHING,
            }
        } else if d {
            // The candidate outlasts the bound: its next digit decides.
            ABOVE
        } else {
            BELOW
        }
    };
    // Strictly above the lower bound?
    let ok_lo = |state: usize, len: u64| -> bool {
        match state {
            ABOVE => true,
            BELOW => false,
            _ => match lo {
                None => true,
                Some(a) => len < a.len() && !a.digit_padded(len + 1),
            },
        }
    };
    // Strictly below the upper bound?
    let ok_hi = |state: usize, len: u64| -> bool {
        match state {
            BELOW => true,
            ABOVE => false,
            _ => match hi {
                None => true,
                Some(b) => len < b.len() && b.digit_padded(len + 1),
            },
        }
    };

    let lo_start = start(lo, ABOVE);
    let hi_start = start(hi, BELOW);

    // Length 0 is the candidate 0 itself.
    if ok_lo(lo_start, 0) && ok_hi(hi_start, 0) {
        return Some(Numeral::zero());
    }

    let longest = lo.map_or(0, Numeral::len).max(hi.map_or(0, Numeral::len));
    for target_len in 1..=longest + 2 {
        // best[sa][sb] = least value of a digit prefix reaching that state pair.
        let mut best: [[Option<num_bigint::BigUint>; 3]; 3] = Default::default();
        best[lo_start][hi_start] = Some(num_bigint::BigUint::zero());
        for pos in 1..=target_len {
            let mut next: [[Option<num_bigint::BigUint>; 3]; 3] = Default::default();
            for sa in 0..3 {
                for sb in 0..3 {
                    let Some(prefix) = best[sa][sb].clone() else {
                        continue;
                    };
                    for d in [false, true] {
                        if pos == target_len && !d {
                            continue; // canonical sequences end with digit 1
                        }
                        let mut value = prefix.clone();
                        if d {
                            value.set_bit(pos - 1, true);
                        }
                        let na = step(sa, lo, pos, d);
                        let nb = step(sb, hi, pos, d);
                        match &next[na][nb] {
                            Some(seen) if *seen <= value => {}
                            _ => next[na][nb] = Some(value),
                        }
                    }
                }
            }
            best = next;
        }
        let mut found: Option<num_bigint::BigUint> = None;
        for sa in 0..3 {
            for sb in 0..3 {
                if !(ok_lo(sa, target_len) && ok_hi(sb, target_len)) {
                    continue;
                }
                if let Some(v) = best[sa][sb].clone() {
                    match &found {
                        Some(seen) if *seen <= v => {}
                        _ => found = Some(v),
                    }
                }
            }
        }
        if let Some(v) = found {
            // Any longer candidate has a higher leading digit, hence a
            // larger value, so the first length that works is the answer.
            return Some(Numeral::from_biguint(v));
        }
    }
    None
}

/// Least element, in ordinary magnitude order, strictly between `a` and `b`.
///
/// On the integer carrier "magnitude order" means the scan 0, 1, -1, 2, -2,
/// so ties between a value and its negation resolve to the positive one.
pub fn between(kind: OrderKind, a: &Element, b: &Element) -> Result<Element, OrderError> {
    let empty = || OrderError::EmptyInterval {
        kind,
        lo: a.to_string(),
        hi: b.to_string(),
    };
    if compare(kind, a, b)? != Ordering::Less {
        return Err(empty());
    }
    match kind {
        OrderKind::FinalDigits => {
            let (x, y) = (expect_nat(kind, a)?, expect_nat(kind, b)?);
            fd_least_strictly_between(Some(x), Some(y))
                .map(Element::Nat)
                .ok_or_else(empty)
        }
        OrderKind::Variant => {
            let (x, y) = (expect_nat(kind, a)?, expect_nat(kind, b)?);
            let mut candidate = Numeral::zero();
            loop {
                if variant_cmp(x, &candidate) == Ordering::Less
                    && variant_cmp(&candidate, y) == Ordering::Less
                {
                    return Ok(Element::Nat(candidate));
                }
                candidate = candidate.successor();
            }
        }
        OrderKind::SignedFinalDigits => {
            let (x, y) = (expect_int(kind, a)?, expect_int(kind, b)?);
            for candidate in signed_magnitude_scan() {
                if signed_cmp(x, &candidate) == Ordering::Less
                    && signed_cmp(&candidate, y) == Ordering::Less
                {
                    return Ok(Element::Int(candidate));
                }
            }
            unreachable!("signed order is dense, so the scan terminates")
        }
    }
}

fn signed_magnitude_scan() -> impl Iterator<Item = SignedNumeral> {
    std::iter::once(SignedNumeral::zero()).chain((1u64..).flat_map(|m| {
        let mag = Numeral::from_u64(m);
        [
            SignedNumeral::positive(mag.clone()),
            SignedNumeral::negative(mag),
        ]
    }))
}

/// Least elements strictly below and strictly above `a` (magnitude order
/// again breaking ties). The "below" side is `None` exactly at the variant
/// order's least element, zero; the other orders are endless both ways.
pub fn unbounded_witnesses(
    kind: OrderKind,
    a: &Element,
) -> Result<(Option<Element>, Element), OrderError> {
    match kind {
        OrderKind::FinalDigits => {
            let x = expect_nat(kind, a)?;
            let below = fd_least_strictly_between(None, Some(x))
                .expect("final-digits order is endless downward");
            let above = fd_least_strictly_between(Some(x), None)
                .expect("final-digits order is endless upward");
            Ok((Some(Element::Nat(below)), Element::Nat(above)))
        }
        OrderKind::Variant => {
            let x = expect_nat(kind, a)?;
            let below = if x.is_zero() {
                None
            } else {
                // Zero is the least element, so it is the first hit.
                Some(Element::Nat(Numeral::zero()))
            };
            let mut candidate = Numeral::zero();
            loop {
                if variant_cmp(x, &candidate) == Ordering::Less {
                    return Ok((below, Element::Nat(candidate)));
                }
                candidate = candidate.successor();
            }
        }
        OrderKind::SignedFinalDigits => {
            let x = expect_int(kind, a)?;
            let mut below = None;
            let mut above = None;
            for candidate in signed_magnitude_scan() {
                if below.is_none() && signed_cmp(&candidate, x) == Ordering::Less {
                    below = Some(Element::Int(candidate.clone()));
                }
                if above.is_none() && signed_cmp(x, &candidate) == Ordering::Less {
                    above = Some(Element::Int(candidate.clone()));
                }
                if let (Some(_), Some(up)) = (&below, &above) {
                    return Ok((below.clone(), up.clone()));
                }
            }
            unreachable!("signed order is endless both ways")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(v: u64) -> Numeral {
        Numeral::from_u64(v)
    }

    fn i(v: i64) -> SignedNumeral {
        SignedNumeral::from_i64(v)
    }

    /// Reference comparator: a direct transcription of the digit rule with no
    /// fast path, used to pin the optimized one.
    fn fd_cmp_reference(a: u64, b: u64) -> Ordering {
        let digits = |v: u64| -> Vec<bool> {
            (0..bit_len_u64(v)).map(|i| (v >> i) & 1 == 1).collect()
        };
        let (da, db) = (digits(a), digits(b));
        for idx in 0..da.len().min(db.len()) {
            if da[idx] != db[idx] {
                return if da[idx] { Ordering::Greater } else { Ordering::Less };
            }
        }
        match da.len().cmp(&db.len()) {
            Ordering::Equal => Ordering::Equal,
            Ordering::Greater => {
                if da[db.len()] {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            Ordering::Less => {
                if db[da.len()] {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    #[test]
    fn final_digits_examples() {
        assert_eq!(fd_cmp(&n(2), &n(0)), Ordering::Less);
        assert_eq!(fd_cmp(&n(0), &n(1)), Ordering::Less);
        assert_eq!(fd_cmp(&n(5), &n(1)), Ordering::Less);
        assert_eq!(fd_cmp(&n(1), &n(3)), Ordering::Less);
        assert_eq!(fd_cmp(&n(7), &n(7)), Ordering::Equal);
    }

    #[test]
    fn variant_examples() {
        for v in 1..=64u64 {
            assert_eq!(variant_cmp(&n(0), &n(v)), Ordering::Less);
        }
        assert_eq!(variant_cmp(&n(2), &n(1)), Ordering::Less);
        assert_eq!(variant_cmp(&n(2), &n(6)), Ordering::Less);
        assert_eq!(variant_cmp(&n(9), &n(9)), Ordering::Equal);
    }

    #[test]
    fn signed_examples() {
        assert_eq!(signed_cmp(&i(-1), &i(0)), Ordering::Less);
        assert_eq!(signed_cmp(&i(0), &i(1)), Ordering::Less);
        assert_eq!(signed_cmp(&i(-3), &i(-1)), Ordering::Less);
        assert_eq!(signed_cmp(&i(5), &i(1)), Ordering::Less);
        assert_eq!(signed_cmp(&i(-9), &i(4)), Ordering::Less);
    }

    #[test]
    fn fast_path_matches_reference_digit_rule() {
        for a in 0..512u64 {
            for b in 0..512u64 {
                assert_eq!(fd_cmp(&n(a), &n(b)), fd_cmp_reference(a, b), "({a}, {b})");
            }
        }
    }

    #[test]
    fn comparators_are_total_orders_on_a_small_truncation() {
        let bound = 128u64;
        for kind in [OrderKind::FinalDigits, OrderKind::Variant] {
            let cmp = |a: u64, b: u64| compare(kind, &Element::nat(a), &Element::nat(b)).unwrap();
            for a in 0..=bound {
                for b in 0..=bound {
                    match cmp(a, b) {
                        Ordering::Equal => assert_eq!(a, b),
                        o => assert_eq!(o, cmp(b, a).reverse()),
                    }
                }
            }
            // Transitivity on a sorted witness: adjacent comparisons chain.
            let mut sorted: Vec<u64> = (0..=bound).collect();
            sorted.sort_by(|&a, &b| cmp(a, b));
            for w in sorted.windows(2) {
                assert_eq!(cmp(w[0], w[1]), Ordering::Less);
            }
        }
    }

    #[test]
    fn rank3_examples() {
        let r = |num: i64, den: i64| Rational::new(num.into(), den.into());
        assert_eq!(rank3(&n(0)), r(1, 3));
        assert_eq!(rank3(&n(1)), r(7, 9));
        assert_eq!(rank3(&n(2)), r(7, 27));
        assert_eq!(rank3(&n(3)), r(25, 27));
    }

    #[test]
    fn rankv_examples() {
        let r = |num: i64, den: i64| Rational::new(num.into(), den.into());
        assert_eq!(rankv(&n(0)), Rational::zero());
        assert_eq!(rankv(&n(1)), r(1, 2));
        assert_eq!(rankv(&n(6)), r(3, 8));
        assert_eq!(rankv(&n(2)), r(1, 4));
    }

    #[test]
    fn ranks_examples() {
        let r = |num: i64, den: i64| Rational::new(num.into(), den.into());
        assert_eq!(ranks(&i(0)), Rational::zero());
        assert_eq!(ranks(&i(1)), r(7, 9));
        assert_eq!(ranks(&i(-3)), r(-25, 27));
    }

    #[test]
    fn ranks_agree_with_comparators_on_a_truncation() {
        let bound = 256u64;
        for a in 0..=bound {
            for b in 0..=bound {
                assert_eq!(fd_cmp(&n(a), &n(b)), rank3(&n(a)).cmp(&rank3(&n(b))));
                assert_eq!(variant_cmp(&n(a), &n(b)), rankv(&n(a)).cmp(&rankv(&n(b))));
            }
        }
        for a in -64i64..=64 {
            for b in -64i64..=64 {
                assert_eq!(signed_cmp(&i(a), &i(b)), ranks(&i(a)).cmp(&ranks(&i(b))));
            }
        }
    }

    #[test]
    fn between_examples() {
        let bet = |kind, a: Element, b: Element| between(kind, &a, &b).unwrap();
        assert_eq!(
            bet(OrderKind::FinalDigits, Element::nat(2), Element::nat(0)),
            Element::nat(6)
        );
        assert_eq!(
            bet(OrderKind::FinalDigits, Element::nat(0), Element::nat(1)),
            Element::nat(5)
        );
        assert_eq!(
            bet(OrderKind::Variant, Element::nat(0), Element::nat(1)),
            Element::nat(2)
        );
        assert_eq!(
            bet(
                OrderKind::SignedFinalDigits,
                Element::int(-1),
                Element::int(1)
            ),
            Element::int(0)
        );
    }

    #[test]
    fn between_rejects_empty_intervals() {
        assert!(matches!(
            between(OrderKind::FinalDigits, &Element::nat(0), &Element::nat(2)),
            Err(OrderError::EmptyInterval { .. })
        ));
        assert!(matches!(
            between(OrderKind::FinalDigits, &Element::nat(5), &Element::nat(5)),
            Err(OrderError::EmptyInterval { .. })
        ));
    }

    #[test]
    fn between_rejects_carrier_mismatches() {
        assert!(matches!(
            between(OrderKind::FinalDigits, &Element::int(1), &Element::nat(2)),
            Err(OrderError::CarrierMismatch { .. })
        ));
        assert!(matches!(
            compare(OrderKind::SignedFinalDigits, &Element::nat(1), &Element::nat(2)),
            Err(OrderError::CarrierMismatch { .. })
        ));
    }

    /// Scan oracle for the digit-surgery search.
    fn fd_least_by_scan(lo: Option<u64>, hi: Option<u64>, scan_to: u64) -> Option<u64> {
        (0..=scan_to).find(|&x| {
            lo.map_or(true, |a| fd_cmp(&n(a), &n(x)) == Ordering::Less)
                && hi.map_or(true, |b| fd_cmp(&n(x), &n(b)) == Ordering::Less)
        })
    }

    #[test]
    fn digit_surgery_matches_the_scan_oracle_exhaustively() {
        let bound = 96u64;
        for a in 0..=bound {
            for b in 0..=bound {
                let fast = fd_least_strictly_between(Some(&n(a)), Some(&n(b)))
                    .map(|x| x.to_u64().unwrap());
                let slow = fd_least_by_scan(Some(a), Some(b), 1 << 12);
                assert_eq!(fast, slow, "interval ({a}, {b})");
            }
            let above = fd_least_strictly_between(Some(&n(a)), None).map(|x| x.to_u64().unwrap());
            assert_eq!(above, fd_least_by_scan(Some(a), None, 1 << 12), "above {a}");
            let below = fd_least_strictly_between(None, Some(&n(a))).map(|x| x.to_u64().unwrap());
            assert_eq!(below, fd_least_by_scan(None, Some(a), 1 << 12), "below {a}");
        }
    }

    proptest! {
        #[test]
        fn digit_surgery_matches_the_scan_oracle_randomly(a in 0u64..5000, b in 0u64..5000) {
            let fast = fd_least_strictly_between(Some(&n(a)), Some(&n(b)))
                .map(|x| x.to_u64().unwrap());
            let slow = fd_least_by_scan(Some(a), Some(b), 1 << 16);
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn fast_comparator_agrees_with_reference(a in 0u64..u64::MAX, b in 0u64..u64::MAX) {
            prop_assert_eq!(fd_cmp(&n(a), &n(b)), fd_cmp_reference(a, b));
        }
    }

    #[test]
    fn unbounded_witness_examples() {
        let w = |kind, a: Element| unbounded_witnesses(kind, &a).unwrap();
        assert_eq!(
            w(OrderKind::FinalDigits, Element::nat(0)),
            (Some(Element::nat(2)), Element::nat(1))
        );
        assert_eq!(
            w(OrderKind::Variant, Element::nat(0)),
            (None, Element::nat(1))
        );
        assert_eq!(
            w(OrderKind::SignedFinalDigits, Element::int(0)),
            (Some(Element::int(-1)), Element::int(1))
        );
    }

    #[test]
    fn witnesses_are_strict_and_least() {
        for kind in [OrderKind::FinalDigits, OrderKind::Variant] {
            for v in 0..200u64 {
                let a = Element::nat(v);
                let (below, above) = unbounded_witnesses(kind, &a).unwrap();
                if let Some(b) = &below {
                    assert_eq!(compare(kind, b, &a).unwrap(), Ordering::Less);
                }
                assert_eq!(compare(kind, &a, &above).unwrap(), Ordering::Less);
            }
        }
    }
}
