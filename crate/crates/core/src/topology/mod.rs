//! Symbolic basic open sets and topology descriptions over the naturals and
//! integers, with decidable membership and neighborhood queries.
//!
//! Spaces here are always infinite, so topologies are never materialized as
//! families of sets. Instead a [`TopologySpec`] names a construction
//! (digit-suffix classes, order intervals, restrictions to an initial
//! segment, blends, point isolations, ...) and every query — membership,
//! a basic neighborhood of a point, isolation of a point — is answered by
//! finite computation against that description.
//!
//! The conventions that matter:
//!
//! * a suffix class contains exactly the naturals congruent to the value of
//!   the digit string modulo `2^len`; in particular the number obtained by
//!   deleting the string's leading zeros is a member;
//! * the zero-tail sets on the integers contain zero and both signs;
//! * restricting to an initial segment `[0, b]` keeps the whole space as
//!   the one extra open set, so points above `b` have only that
//!   neighborhood.

pub mod text;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::numerals::{DigitString, Numeral, Sign, SignedNumeral};
use crate::orders::{compare, Carrier, Element, OrderKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TopologyError {
    #[error("{context} lives on {expected}, got element {got}")]
    CarrierMismatch {
        context: String,
        expected: Carrier,
        got: Carrier,
    },
    #[error("signed suffix classes need a nonempty digit string")]
    EmptySignedSuffix,
    #[error("cannot parse {what}: {text:?}")]
    Parse { what: &'static str, text: String },
}

/// Sign half of the integers a signed suffix class or sign block lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    fn admits(self, sign: Sign) -> bool {
        matches!(
            (self, sign),
            (Polarity::Positive, Sign::Positive) | (Polarity::Negative, Sign::Negative)
        )
    }

    pub fn token(self) -> char {
        match self {
            Polarity::Positive => '+',
            Polarity::Negative => '-',
        }
    }
}

/// A basic open set of one of the topologies in play, as symbolic data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasicOpen {
    Empty,
    WholeSpace(Carrier),
    /// Naturals whose binary representation ends with the given digits.
    SuffixClass(DigitString),
    /// Nonzero integers of one sign whose magnitude ends with the digits.
    SignedSuffixClass {
        polarity: Polarity,
        suffix: DigitString,
    },
    /// All positive (or all negative) integers.
    SignBlock(Polarity),
    /// Integers divisible by `2^k`, both signs, zero included.
    ZeroTail(u64),
    /// Strict open interval of an order; a missing endpoint is a ray.
    OrderInterval {
        kind: OrderKind,
        lo: Option<Element>,
        hi: Option<Element>,
    },
    /// Half-open interval `[lo, hi)` of an order; `None` means unbounded.
    RightOpenInterval {
        kind: OrderKind,
        lo: Element,
        hi: Option<Element>,
    },
    /// Naturals `0..=k` in magnitude order.
    InitialSegment(Numeral),
    /// Naturals `k..` in magnitude order.
    FinalSegment(Numeral),
    Singleton(Element),
    Intersection(Box<BasicOpen>, Box<BasicOpen>),
    UnionOf(Vec<BasicOpen>),
}

impl BasicOpen {
    pub fn suffix(s: &str) -> BasicOpen {
        BasicOpen::SuffixClass(s.parse().expect("valid digit string"))
    }

    pub fn singleton_nat(v: u64) -> BasicOpen {
        BasicOpen::Singleton(Element::nat(v))
    }

    pub fn initial(k: u64) -> BasicOpen {
        BasicOpen::InitialSegment(Numeral::from_u64(k))
    }

    pub fn and(a: BasicOpen, b: BasicOpen) -> BasicOpen {
        BasicOpen::Intersection(Box::new(a), Box::new(b))
    }

    /// The carrier this open constrains elements to, when it pins one down
    /// (`Empty` fits either carrier).
    pub fn carrier(&self) -> Option<Carrier> {
        match self {
            BasicOpen::Empty => None,
            BasicOpen::WholeSpace(c) => Some(*c),
            BasicOpen::SuffixClass(_)
            | BasicOpen::InitialSegment(_)
            | BasicOpen::FinalSegment(_) => Some(Carrier::Naturals),
            BasicOpen::SignedSuffixClass { .. }
            | BasicOpen::SignBlock(_)
            | BasicOpen::ZeroTail(_) => Some(Carrier::Integers),
            BasicOpen::OrderInterval { kind, .. } | BasicOpen::RightOpenInterval { kind, .. } => {
                Some(kind.carrier())
            }
            BasicOpen::Singleton(x) => Some(x.carrier()),
            BasicOpen::Intersection(a, b) => a.carrier().or_else(|| b.carrier()),
            BasicOpen::UnionOf(parts) => parts.iter().find_map(BasicOpen::carrier),
        }
    }
}

impl fmt::Display for BasicOpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_open(self, f)
    }
}

fn carrier_mismatch(context: &str, expected: Carrier, x: &Element) -> TopologyError {
    TopologyError::CarrierMismatch {
        context: context.to_string(),
        expected,
        got: x.carrier(),
    }
}

fn expect_nat<'a>(context: &str, x: &'a Element) -> Result<&'a Numeral, TopologyError> {
    x.as_nat()
        .ok_or_else(|| carrier_mismatch(context, Carrier::Naturals, x))
}

fn expect_int<'a>(context: &str, x: &'a Element) -> Result<&'a SignedNumeral, TopologyError> {
    x.as_int()
        .ok_or_else(|| carrier_mismatch(context, Carrier::Integers, x))
}

/// Exact membership of a carrier point in a basic open set.
pub fn member(open: &BasicOpen, x: &Element) -> Result<bool, TopologyError> {
    match open {
        BasicOpen::Empty => Ok(false),
        BasicOpen::WholeSpace(c) => {
            if *c == x.carrier() {
                Ok(true)
            } else {
                Err(carrier_mismatch("whole space", *c, x))
            }
        }
        BasicOpen::SuffixClass(s) => {
            let n = expect_nat("suffix class", x)?;
            Ok(suffix_matches(n, s))
        }
        BasicOpen::SignedSuffixClass { polarity, suffix } => {
            let v = expect_int("signed suffix class", x)?;
            Ok(polarity.admits(v.sign()) && suffix_matches(v.magnitude(), suffix))
        }
        BasicOpen::SignBlock(polarity) => {
            let v = expect_int("sign block", x)?;
            Ok(polarity.admits(v.sign()))
        }
        BasicOpen::ZeroTail(k) => {
            let v = expect_int("zero tail", x)?;
            Ok(match v.magnitude().v2() {
                Err(_) => true, // zero is divisible by every power of two
                Ok(val) => val >= *k,
            })
        }
        BasicOpen::OrderInterval { kind, lo, hi } => {
            let above_lo = match lo {
                None => true,
                Some(a) => cmp_or_mismatch("order interval", *kind, a, x)? == Ordering::Less,
            };
            if !above_lo {
                return Ok(false);
            }
            match hi {
                None => Ok(true),
                Some(b) => Ok(cmp_or_mismatch("order interval", *kind, x, b)? == Ordering::Less),
            }
        }
        BasicOpen::RightOpenInterval { kind, lo, hi } => {
            if cmp_or_mismatch("half-open interval", *kind, x, lo)? == Ordering::Less {
                return Ok(false);
            }
            match hi {
                None => Ok(true),
                Some(b) => Ok(cmp_or_mismatch("half-open interval", *kind, x, b)? == Ordering::Less),
            }
        }
        BasicOpen::InitialSegment(k) => {
            let n = expect_nat("initial segment", x)?;
            Ok(n.value() <= k.value())
        }
        BasicOpen::FinalSegment(k) => {
            let n = expect_nat("final segment", x)?;
            Ok(n.value() >= k.value())
        }
        BasicOpen::Singleton(y) => {
            if y.carrier() != x.carrier() {
                return Err(carrier_mismatch("singleton", y.carrier(), x));
            }
            Ok(x == y)
        }
        BasicOpen::Intersection(a, b) => Ok(member(a, x)? && member(b, x)?),
        BasicOpen::UnionOf(parts) => {
            for part in parts {
                if member(part, x)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

fn cmp_or_mismatch(
    context: &str,
    kind: OrderKind,
    a: &Element,
    b: &Element,
) -> Result<Ordering, TopologyError> {
    compare(kind, a, b).map_err(|_| TopologyError::CarrierMismatch {
        context: context.to_string(),
        expected: kind.carrier(),
        got: if a.carrier() == kind.carrier() {
            b.carrier()
        } else {
            a.carrier()
        },
    })
}

fn suffix_matches(n: &Numeral, s: &DigitString) -> bool {
    (1..=s.len()).all(|pos| n.digit_padded(pos) == s.bit_padded(pos))
}

/// Intersection of two suffix classes: empty when the strings disagree on a
/// common digit position, otherwise the class of the longer string.
pub fn intersect_suffix(s: &DigitString, t: &DigitString) -> BasicOpen {
    let common = s.len().min(t.len());
    for pos in 1..=common {
        if s.bit_padded(pos) != t.bit_padded(pos) {
            return BasicOpen::Empty;
        }
    }
    if s.len() >= t.len() {
        BasicOpen::SuffixClass(s.clone())
    } else {
        BasicOpen::SuffixClass(t.clone())
    }
}

/// A suffix class rewritten as a half-open interval `[m0, m1)` of the
/// zero-least variant order: `m0` is the value of the digit string and `m1`
/// the numeral whose digit pattern is the string's pattern plus one unit in
/// the last place, read back least significant first; an all-ones pattern
/// carries out and the interval is unbounded above.
pub fn suffix_class_as_right_open(s: &DigitString) -> BasicOpen {
    let len = s.len();
    // The digit pattern as a fraction with denominator 2^len, most
    // significant digit first, so adding one in the last place is +1.
    let mut pattern = BigUint::zero();
    for pos in 1..=len {
        if s.bit_padded(pos) {
            pattern.set_bit(len - pos, true);
        }
    }
    pattern += BigUint::one();
    let hi = if pattern.bit(len) {
        None // carried out: the pattern was all ones
    } else {
        let mut reversed = BigUint::zero();
        for j in 0..len {
            if pattern.bit(j) {
                reversed.set_bit(len - 1 - j, true);
            }
        }
        Some(Element::Nat(Numeral::from_biguint(reversed)))
    };
    BasicOpen::RightOpenInterval {
        kind: OrderKind::Variant,
        lo: Element::Nat(s.value()),
        hi,
    }
}

/// A topology on one of the carriers, described by its construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopologySpec {
    Discrete,
    Indiscrete,
    /// Generated by the suffix classes on the naturals.
    FinalDigits,
    /// Generated on the integers by signed suffix classes and zero tails.
    SignedFinalDigits,
    /// Order topology (open intervals and rays) of the given order.
    OrderTopology(OrderKind),
    /// Half-open-interval topology `[a, b)` of the given order.
    RightOpenTopology(OrderKind),
    /// Opens are the initial segments `[0, k]` of the naturals.
    InitialSegments,
    /// Opens are the final segments `[k, ∞)` of the naturals.
    FinalSegments,
    /// Opens are `U ∩ [0, b]` for inner opens `U`, plus the whole space.
    Restrict(Box<TopologySpec>, Numeral),
    /// Generated by unions `U ∪ A` with `U` open in the second topology and
    /// `A` an open subset of `[0, b]` under the first.
    Blend(Box<TopologySpec>, Box<TopologySpec>, Numeral),
    /// The inner topology with every point of `[0, b]` made isolated.
    IsolateBelow(Box<TopologySpec>, Numeral),
    /// Generated by the opens of both topologies together.
    Union(Box<TopologySpec>, Box<TopologySpec>),
    /// The inner topology with all initial segments added as opens.
    AugmentInitial(Box<TopologySpec>),
    /// The inner topology with all final segments added as opens.
    AugmentFinal(Box<TopologySpec>),
}

impl TopologySpec {
    pub fn restrict(inner: TopologySpec, b: u64) -> TopologySpec {
        TopologySpec::Restrict(Box::new(inner), Numeral::from_u64(b))
    }

    pub fn isolate_below(inner: TopologySpec, b: u64) -> TopologySpec {
        TopologySpec::IsolateBelow(Box::new(inner), Numeral::from_u64(b))
    }

    /// The carrier the spec is tied to; `None` when it works on either
    /// (the discrete and indiscrete constructions).
    pub fn carrier(&self) -> Option<Carrier> {
        match self {
            TopologySpec::Discrete | TopologySpec::Indiscrete => None,
            TopologySpec::FinalDigits => Some(Carrier::Naturals),
            TopologySpec::SignedFinalDigits => Some(Carrier::Integers),
            TopologySpec::OrderTopology(kind) | TopologySpec::RightOpenTopology(kind) => {
                Some(kind.carrier())
            }
            TopologySpec::InitialSegments
            | TopologySpec::FinalSegments
            | TopologySpec::Restrict(..)
            | TopologySpec::Blend(..)
            | TopologySpec::IsolateBelow(..)
            | TopologySpec::AugmentInitial(_)
            | TopologySpec::AugmentFinal(_) => Some(Carrier::Naturals),
            TopologySpec::Union(a, b) => a.carrier().or_else(|| b.carrier()),
        }
    }
}

impl fmt::Display for TopologySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_spec(self, f)
    }
}

fn check_carrier(spec: &TopologySpec, x: &Element) -> Result<(), TopologyError> {
    if let Some(c) = spec.carrier() {
        if c != x.carrier() {
            return Err(carrier_mismatch(&spec.to_string(), c, x));
        }
    }
    Ok(())
}

/// A basic open of the topology containing `x`.
///
/// `resolution` selects how tight the neighborhood is drawn from the
/// canonical basis family at `x` — suffix length for the digit topologies,
/// a magnitude search bound (`2^resolution`) for the order topologies. It
/// is a hint because several of these spaces have no minimal neighborhoods;
/// where a minimal basic open exists (isolated points, segment topologies)
/// it is returned regardless of the hint. Larger resolutions never return
/// larger sets.
pub fn basic_nbhd(
    spec: &TopologySpec,
    x: &Element,
    resolution: Option<u64>,
) -> Result<BasicOpen, TopologyError> {
    check_carrier(spec, x)?;
    let open = match spec {
        TopologySpec::Discrete => BasicOpen::Singleton(x.clone()),
        TopologySpec::Indiscrete => BasicOpen::WholeSpace(x.carrier()),
        TopologySpec::FinalDigits => {
            let n = expect_nat("final-digits neighborhood", x)?;
            let len = resolution.unwrap_or_else(|| n.len().max(1));
            BasicOpen::SuffixClass(n.suffix(len))
        }
        TopologySpec::SignedFinalDigits => {
            let v = expect_int("signed final-digits neighborhood", x)?;
            match v.sign() {
                Sign::Zero => BasicOpen::ZeroTail(resolution.unwrap_or(1).max(1)),
                sign => {
                    let len = resolution
                        .unwrap_or_else(|| v.magnitude().len())
                        .max(v.magnitude().len())
                        .max(1);
                    BasicOpen::SignedSuffixClass {
                        polarity: if sign == Sign::Positive {
                            Polarity::Positive
                        } else {
                            Polarity::Negative
                        },
                        suffix: v.magnitude().suffix(len),
                    }
                }
            }
        }
        TopologySpec::OrderTopology(kind) => {
            let (lo, hi) = order_neighbors(*kind, x, resolution)?;
            BasicOpen::OrderInterval { kind: *kind, lo, hi }
        }
        TopologySpec::RightOpenTopology(kind) => {
            let (_, hi) = order_neighbors(*kind, x, resolution)?;
            BasicOpen::RightOpenInterval {
                kind: *kind,
                lo: x.clone(),
                hi,
            }
        }
        TopologySpec::InitialSegments => {
            let n = expect_nat("initial-segment neighborhood", x)?;
            BasicOpen::InitialSegment(n.clone())
        }
        TopologySpec::FinalSegments => {
            let n = expect_nat("final-segment neighborhood", x)?;
            BasicOpen::FinalSegment(n.clone())
        }
        TopologySpec::Restrict(inner, b) => {
            let n = expect_nat("restricted neighborhood", x)?;
            if n.value() <= b.value() {
                let u = basic_nbhd(inner, x, resolution)?;
                BasicOpen::and(u, BasicOpen::InitialSegment(b.clone()))
            } else {
                // Above the segment only the whole space is open.
                BasicOpen::WholeSpace(Carrier::Naturals)
            }
        }
        TopologySpec::Blend(tau0, tau1, b) => {
            let n = expect_nat("blended neighborhood", x)?;
            if n.value() <= b.value() {
                // An open subset of the segment under the first topology is
                // itself a generating open (union with the empty open).
                let a = basic_nbhd(tau0, x, resolution)?;
                BasicOpen::and(a, BasicOpen::InitialSegment(b.clone()))
            } else {
                basic_nbhd(tau1, x, resolution)?
            }
        }
        TopologySpec::IsolateBelow(inner, b) => {
            let n = expect_nat("isolating neighborhood", x)?;
            if n.value() <= b.value() {
                BasicOpen::Singleton(x.clone())
            } else {
                basic_nbhd(inner, x, resolution)?
            }
        }
        TopologySpec::Union(sigma, tau) => {
            let u = basic_nbhd(sigma, x, resolution)?;
            let v = basic_nbhd(tau, x, resolution)?;
            BasicOpen::and(u, v)
        }
        TopologySpec::AugmentInitial(inner) => {
            let n = expect_nat("initial-augmented neighborhood", x)?;
            let u = basic_nbhd(inner, x, resolution)?;
            BasicOpen::and(u, BasicOpen::InitialSegment(n.clone()))
        }
        TopologySpec::AugmentFinal(inner) => {
            let n = expect_nat("final-augmented neighborhood", x)?;
            let u = basic_nbhd(inner, x, resolution)?;
            BasicOpen::and(u, BasicOpen::FinalSegment(n.clone()))
        }
    };
    Ok(simplify(open))
}

/// Nearest order neighbors of `x` among carrier elements of magnitude at
/// most `2^resolution`: the order-greatest strictly below and the
/// order-least strictly above, `None` for a side with no witness in range.
fn order_neighbors(
    kind: OrderKind,
    x: &Element,
    resolution: Option<u64>,
) -> Result<(Option<Element>, Option<Element>), TopologyError> {
    let r = resolution.unwrap_or_else(|| {
        let len = match x {
            Element::Nat(n) => n.len(),
            Element::Int(i) => i.magnitude().len(),
        };
        (len + 3).max(6)
    });
    // The scan is exhaustive over magnitudes, so keep it desk-scale.
    let r = r.min(22);
    let bound = 1u64 << r;
    let mut below: Option<Element> = None;
    let mut above: Option<Element> = None;
    let mut consider = |candidate: Element| -> Result<(), TopologyError> {
        match cmp_or_mismatch("order neighborhood", kind, &candidate, x)? {
            Ordering::Less => {
                let closer = match &below {
                    None => true,
                    Some(cur) => {
                        cmp_or_mismatch("order neighborhood", kind, cur, &candidate)?
                            == Ordering::Less
                    }
                };
                if closer {
                    below = Some(candidate);
                }
            }
            Ordering::Greater => {
                let closer = match &above {
                    None => true,
                    Some(cur) => {
                        cmp_or_mismatch("order neighborhood", kind, &candidate, cur)?
                            == Ordering::Less
                    }
                };
                if closer {
                    above = Some(candidate);
                }
            }
            Ordering::Equal => {}
        }
        Ok(())
    };
    match kind.carrier() {
        Carrier::Naturals => {
            for v in 0..=bound {
                consider(Element::nat(v))?;
            }
        }
        Carrier::Integers => {
            for m in 0..=bound {
                consider(Element::int(m as i64))?;
                if m > 0 {
                    consider(Element::int(-(m as i64)))?;
                }
            }
        }
    }
    Ok((below, above))
}

/// Light structural simplification: collapse trivial intersections and
/// unions so neighborhoods come back in their plainest shape.
pub fn simplify(open: BasicOpen) -> BasicOpen {
    match open {
        BasicOpen::Intersection(a, b) => {
            let a = simplify(*a);
            let b = simplify(*b);
            match (a, b) {
                (BasicOpen::Empty, _) | (_, BasicOpen::Empty) => BasicOpen::Empty,
                (BasicOpen::WholeSpace(_), other) | (other, BasicOpen::WholeSpace(_)) => other,
                (BasicOpen::SuffixClass(s), BasicOpen::SuffixClass(t)) => intersect_suffix(&s, &t),
                (BasicOpen::Singleton(x), other) | (other, BasicOpen::Singleton(x)) => {
                    match member(&other, &x) {
                        Ok(true) => BasicOpen::Singleton(x),
                        Ok(false) => BasicOpen::Empty,
                        Err(_) => BasicOpen::and(BasicOpen::Singleton(x), other),
                    }
                }
                (a, b) => BasicOpen::and(a, b),
            }
        }
        BasicOpen::UnionOf(parts) => {
            let mut kept: Vec<BasicOpen> = parts
                .into_iter()
                .map(simplify)
                .filter(|p| *p != BasicOpen::Empty)
                .collect();
            match kept.len() {
                0 => BasicOpen::Empty,
                1 => kept.pop().expect("one element"),
                _ => BasicOpen::UnionOf(kept),
            }
        }
        other => other,
    }
}

/// Whether some basic open of the topology is exactly `{x}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Isolation {
    /// Isolated, with a basic open witnessing it.
    Isolated(BasicOpen),
    NotIsolated,
    /// The basis search was truncated without a verdict.
    Inconclusive { bound: u64 },
}

impl Isolation {
    pub fn is_isolated(&self) -> bool {
        matches!(self, Isolation::Isolated(_))
    }
}

/// Decide whether `x` is an isolated point of the topology, searching the
/// canonical basis at `x` up to the given resolution bound.
///
/// The answer is exact (`Isolated` carries a witnessing open, `NotIsolated`
/// rests on a structural argument that no basic open is a singleton);
/// `Inconclusive` is returned when neither the bounded search nor a
/// structural rule settles the point.
pub fn is_isolated(
    spec: &TopologySpec,
    x: &Element,
    search_bound: u64,
) -> Result<Isolation, TopologyError> {
    check_carrier(spec, x)?;
    match spec {
        TopologySpec::Discrete => Ok(Isolation::Isolated(BasicOpen::Singleton(x.clone()))),
        // Every nonempty open is the whole infinite carrier.
        TopologySpec::Indiscrete => Ok(Isolation::NotIsolated),
        // Every suffix class, signed suffix class and zero tail is an
        // infinite residue class, so no basic open is a singleton.
        TopologySpec::FinalDigits | TopologySpec::SignedFinalDigits => Ok(Isolation::NotIsolated),
        // The orders are dense and endless (the variant order is dense
        // above its least element but every ray below a point is still
        // infinite), so every nonempty open interval or half-open interval
        // is infinite.
        TopologySpec::OrderTopology(_) | TopologySpec::RightOpenTopology(_) => {
            Ok(Isolation::NotIsolated)
        }
        TopologySpec::InitialSegments => {
            let n = expect_nat("isolation", x)?;
            if n.is_zero() {
                Ok(Isolation::Isolated(BasicOpen::InitialSegment(
                    Numeral::zero(),
                )))
            } else {
                // Every initial segment containing n also contains 0 ≠ n.
                Ok(Isolation::NotIsolated)
            }
        }
        // Every final segment is infinite.
        TopologySpec::FinalSegments => Ok(Isolation::NotIsolated),
        TopologySpec::IsolateBelow(inner, b) => {
            let n = expect_nat("isolation", x)?;
            if n.value() <= b.value() {
                Ok(Isolation::Isolated(BasicOpen::Singleton(x.clone())))
            } else {
                // Above the isolated segment the generating opens are the
                // inner opens unioned with subsets of the segment, so a
                // singleton {x} must already be an inner open.
                is_isolated(inner, x, search_bound)
            }
        }
        TopologySpec::Restrict(inner, b) => {
            let n = expect_nat("isolation", x)?;
            if n.value() > b.value() {
                // The only open containing x is the whole space.
                return Ok(Isolation::NotIsolated);
            }
            sweep_for_singleton(spec, inner, x, search_bound, |u| {
                BasicOpen::and(u, BasicOpen::InitialSegment(b.clone()))
            })
        }
        TopologySpec::Blend(tau0, tau1, b) => {
            let n = expect_nat("isolation", x)?;
            if n.value() <= b.value() {
                // {x} can arise as a segment-open of the first topology or
                // as an open of the second; either suffices.
                let restricted = sweep_for_singleton(spec, tau0, x, search_bound, |u| {
                    BasicOpen::and(u, BasicOpen::InitialSegment(b.clone()))
                })?;
                if restricted.is_isolated() {
                    return Ok(restricted);
                }
                let outer = is_isolated(tau1, x, search_bound)?;
                match (restricted, outer) {
                    (_, done @ Isolation::Isolated(_)) => Ok(done),
                    (Isolation::NotIsolated, Isolation::NotIsolated) => Ok(Isolation::NotIsolated),
                    _ => Ok(Isolation::Inconclusive {
                        bound: search_bound,
                    }),
                }
            } else {
                // A generating open containing x > b is U ∪ A with x ∈ U,
                // and U ∪ A = {x} forces A = ∅, U = {x}.
                is_isolated(tau1, x, search_bound)
            }
        }
        TopologySpec::Union(sigma, tau) => {
            // Basic opens are pairwise intersections; sweep resolutions.
            for r in sweep_resolutions(x, search_bound) {
                let u = basic_nbhd(sigma, x, Some(r))?;
                let v = basic_nbhd(tau, x, Some(r))?;
                let combined = simplify(BasicOpen::and(u, v));
                if let Some(only) = known_singleton(&combined) {
                    debug_assert_eq!(&only, x);
                    return Ok(Isolation::Isolated(combined));
                }
            }
            match (
                is_isolated(sigma, x, search_bound)?,
                is_isolated(tau, x, search_bound)?,
            ) {
                // An isolated side stays isolated in the finer topology.
                (done @ Isolation::Isolated(_), _) | (_, done @ Isolation::Isolated(_)) => Ok(done),
                _ => Ok(Isolation::Inconclusive {
                    bound: search_bound,
                }),
            }
        }
        TopologySpec::AugmentInitial(inner) => {
            let n = expect_nat("isolation", x)?;
            sweep_for_singleton(spec, inner, x, search_bound, |u| {
                BasicOpen::and(u, BasicOpen::InitialSegment(n.clone()))
            })
        }
        TopologySpec::AugmentFinal(inner) => {
            let n = expect_nat("isolation", x)?;
            sweep_for_singleton(spec, inner, x, search_bound, |u| {
                BasicOpen::and(u, BasicOpen::FinalSegment(n.clone()))
            })
        }
    }
}

/// Resolutions to try when hunting for a singleton neighborhood: start at
/// the point's own digit length (the first place a suffix class can pin the
/// point down) and grow to the bound.
fn sweep_resolutions(x: &Element, search_bound: u64) -> impl Iterator<Item = u64> {
    let len = match x {
        Element::Nat(n) => n.len(),
        Element::Int(i) => i.magnitude().len(),
    };
    let start = len.max(1).min(search_bound);
    start..=search_bound
}

/// Shared isolation sweep: wrap the inner topology's canonical neighborhood
/// at increasing resolutions and test for an exact singleton. When the
/// wrapped neighborhood is provably constant in the resolution, the sweep's
/// failure is conclusive.
fn sweep_for_singleton(
    outer: &TopologySpec,
    inner: &TopologySpec,
    x: &Element,
    search_bound: u64,
    wrap: impl Fn(BasicOpen) -> BasicOpen,
) -> Result<Isolation, TopologyError> {
    let _ = outer;
    let mut last: Option<BasicOpen> = None;
    let mut constant = true;
    for r in sweep_resolutions(x, search_bound) {
        let u = basic_nbhd(inner, x, Some(r))?;
        let wrapped = simplify(wrap(u));
        if let Some(only) = known_singleton(&wrapped) {
            debug_assert_eq!(&only, x);
            return Ok(Isolation::Isolated(wrapped));
        }
        if let Some(prev) = &last {
            if *prev != wrapped {
                constant = false;
            }
        }
        last = Some(wrapped);
    }
    // The canonical family is cofinal among basic opens at x, and its
    // members shrink as the resolution grows; if the wrapped neighborhood
    // never changed across the whole sweep, the family is a single set
    // whose cardinality we can read off.
    if constant {
        if let Some(open) = &last {
            if matches!(exact_size(open), Some(SetSize::Several | SetSize::Infinite)) {
                return Ok(Isolation::NotIsolated);
            }
        }
    }
    Ok(Isolation::Inconclusive {
        bound: search_bound,
    })
}

/// The unique element of the open, when the open is provably a singleton.
fn known_singleton(open: &BasicOpen) -> Option<Element> {
    match exact_size(open) {
        Some(SetSize::One(e)) => Some(e),
        _ => None,
    }
}

/// Exact cardinality classification for the opens we can normalize.
#[derive(Clone, Debug, PartialEq, Eq)]
enum SetSize {
    Empty,
    One(Element),
    /// Finite with at least two elements.
    Several,
    Infinite,
}

/// Decide the exact size of an open where a closed form exists: on the
/// naturals the suffix/segment/singleton constructors and their
/// intersections normalize to an arithmetic progression over an interval.
/// Returns `None` for shapes with no normal form here.
fn exact_size(open: &BasicOpen) -> Option<SetSize> {
    if let Some(p) = nat_progression(open) {
        return Some(p.size());
    }
    match open {
        BasicOpen::Singleton(e) => Some(SetSize::One(e.clone())),
        BasicOpen::Empty => Some(SetSize::Empty),
        BasicOpen::WholeSpace(_)
        | BasicOpen::SignBlock(_)
        | BasicOpen::ZeroTail(_)
        | BasicOpen::SignedSuffixClass { .. } => Some(SetSize::Infinite),
        _ => None,
    }
}

/// Normal form for natural-carrier opens built from residue classes and
/// magnitude segments: `{v : v ≡ residue (mod 2^k), lo ≤ v ≤ hi}`.
struct Progression {
    modulus: BigUint,
    residue: BigUint,
    lo: BigUint,
    hi: Option<BigUint>,
}

impl Progression {
    fn whole() -> Progression {
        Progression {
            modulus: BigUint::one(),
            residue: BigUint::zero(),
            lo: BigUint::zero(),
            hi: None,
        }
    }

    fn size(&self) -> SetSize {
        // Least member ≥ lo in the residue class.
        let m = &self.modulus;
        let offset = (&self.residue + m - (&self.lo % m)) % m;
        let first = &self.lo + offset;
        match &self.hi {
            None => SetSize::Infinite,
            Some(hi) => {
                if first > *hi {
                    SetSize::Empty
                } else if &first + m > *hi {
                    SetSize::One(Element::Nat(Numeral::from_biguint(first)))
                } else {
                    SetSize::Several
                }
            }
        }
    }

    fn intersect(self, other: Progression) -> Option<Progression> {
        // Both moduli are powers of two, so one divides the other and the
        // classes are compatible exactly when the residues agree modulo the
        // smaller modulus.
        let (big, small) = if self.modulus >= other.modulus {
            (self, other)
        } else {
            (other, self)
        };
        if &big.residue % &small.modulus != small.residue {
            return None; // empty intersection
        }
        let lo = big.lo.max(small.lo);
        let hi = match (big.hi, small.hi) {
            (None, h) | (h, None) => h,
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        Some(Progression {
            modulus: big.modulus,
            residue: big.residue,
            lo,
            hi,
        })
    }
}

fn nat_progression(open: &BasicOpen) -> Option<Progression> {
    match open {
        BasicOpen::WholeSpace(Carrier::Naturals) => Some(Progression::whole()),
        BasicOpen::SuffixClass(s) => Some(Progression {
            modulus: s.modulus(),
            residue: s.value().value().clone(),
            ..Progression::whole()
        }),
        BasicOpen::InitialSegment(k) => Some(Progression {
            hi: Some(k.value().clone()),
            ..Progression::whole()
        }),
        BasicOpen::FinalSegment(k) => Some(Progression {
            lo: k.value().clone(),
            ..Progression::whole()
        }),
        BasicOpen::Singleton(Element::Nat(n)) => Some(Progression {
            lo: n.value().clone(),
            hi: Some(n.value().clone()),
            ..Progression::whole()
        }),
        BasicOpen::Intersection(a, b) => {
            let (pa, pb) = (nat_progression(a)?, nat_progression(b)?);
            Some(pa.intersect(pb).unwrap_or(Progression {
                // Incompatible residues: encode emptiness as a crossed range.
                modulus: BigUint::one(),
                residue: BigUint::zero(),
                lo: BigUint::one(),
                hi: Some(BigUint::zero()),
            }))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(s: &str) -> DigitString {
        s.parse().unwrap()
    }

    fn nat(v: u64) -> Element {
        Element::nat(v)
    }

    #[test]
    fn suffix_class_membership_is_a_residue_check() {
        let u = BasicOpen::suffix("00110");
        assert!(member(&u, &nat(6)).unwrap());
        assert!(!member(&u, &nat(22)).unwrap());
        assert!(member(&u, &nat(6 + 32)).unwrap());
        assert!(member(&u, &nat(6 + 7 * 32)).unwrap());
        for x in 0..1024u64 {
            assert_eq!(member(&u, &nat(x)).unwrap(), x % 32 == 6, "x = {x}");
        }
    }

    #[test]
    fn zero_tail_contains_zero_and_both_signs() {
        let u = BasicOpen::ZeroTail(3);
        assert!(member(&u, &Element::int(0)).unwrap());
        assert!(member(&u, &Element::int(8)).unwrap());
        assert!(member(&u, &Element::int(-16)).unwrap());
        assert!(!member(&u, &Element::int(4)).unwrap());
        assert!(!member(&u, &Element::int(-12)).unwrap());
    }

    #[test]
    fn signed_suffix_class_checks_sign_and_digits() {
        let u = BasicOpen::SignedSuffixClass {
            polarity: Polarity::Negative,
            suffix: ds("110"),
        };
        assert!(member(&u, &Element::int(-6)).unwrap());
        assert!(member(&u, &Element::int(-14)).unwrap());
        assert!(!member(&u, &Element::int(6)).unwrap());
        assert!(!member(&u, &Element::int(-2)).unwrap());
        assert!(!member(&u, &Element::int(0)).unwrap());
    }

    #[test]
    fn membership_rejects_the_wrong_carrier() {
        let u = BasicOpen::suffix("110");
        assert!(matches!(
            member(&u, &Element::int(6)),
            Err(TopologyError::CarrierMismatch { .. })
        ));
    }

    #[test]
    fn suffix_intersection_keeps_the_longer_string() {
        assert_eq!(
            intersect_suffix(&ds("10"), &ds("110")),
            BasicOpen::suffix("110")
        );
        assert_eq!(intersect_suffix(&ds("1"), &ds("0")), BasicOpen::Empty);
        assert_eq!(intersect_suffix(&ds("011"), &ds("011")), BasicOpen::suffix("011"));
    }

    #[test]
    fn suffix_intersection_agrees_with_pointwise_intersection() {
        let strings: Vec<DigitString> = (1..=4u64)
            .flat_map(|len| (0..1u64 << len).map(move |bits| {
                let s: String = (0..len)
                    .rev()
                    .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
                    .collect();
                s.parse().unwrap()
            }))
            .collect();
        for s in &strings {
            for t in &strings {
                let meet = intersect_suffix(s, t);
                let us = BasicOpen::SuffixClass(s.clone());
                let ut = BasicOpen::SuffixClass(t.clone());
                for x in 0..512u64 {
                    let expected =
                        member(&us, &nat(x)).unwrap() && member(&ut, &nat(x)).unwrap();
                    assert_eq!(member(&meet, &nat(x)).unwrap(), expected, "{s} ∩ {t} at {x}");
                }
            }
        }
    }

    #[test]
    fn right_open_form_of_named_suffix_classes() {
        let as_interval = |s: &str| suffix_class_as_right_open(&ds(s));
        assert_eq!(
            as_interval("110"),
            BasicOpen::RightOpenInterval {
                kind: OrderKind::Variant,
                lo: nat(6),
                hi: Some(nat(1)),
            }
        );
        assert_eq!(
            as_interval("00110"),
            BasicOpen::RightOpenInterval {
                kind: OrderKind::Variant,
                lo: nat(6),
                hi: Some(nat(22)),
            }
        );
        assert_eq!(
            as_interval("1"),
            BasicOpen::RightOpenInterval {
                kind: OrderKind::Variant,
                lo: nat(1),
                hi: None,
            }
        );
    }

    #[test]
    fn right_open_form_is_pointwise_equal_to_the_class() {
        for len in 0..=5u64 {
            for bits in 0..1u64 << len {
                let s: String = (0..len)
                    .rev()
                    .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
                    .collect();
                let s: DigitString = s.parse().unwrap();
                let class = BasicOpen::SuffixClass(s.clone());
                let interval = suffix_class_as_right_open(&s);
                for x in 0..2048u64 {
                    assert_eq!(
                        member(&interval, &nat(x)).unwrap(),
                        member(&class, &nat(x)).unwrap(),
                        "{s} at {x}"
                    );
                }
            }
        }
    }

    #[test]
    fn final_digits_neighborhoods_are_suffix_classes() {
        let u = basic_nbhd(&TopologySpec::FinalDigits, &nat(6), Some(5)).unwrap();
        assert_eq!(u, BasicOpen::suffix("00110"));
        let u = basic_nbhd(&TopologySpec::FinalDigits, &nat(6), None).unwrap();
        assert_eq!(u, BasicOpen::suffix("110"));
        let u = basic_nbhd(&TopologySpec::FinalDigits, &nat(0), None).unwrap();
        assert_eq!(u, BasicOpen::suffix("0"));
    }

    #[test]
    fn restricted_discrete_neighborhoods_split_at_the_segment() {
        let spec = TopologySpec::restrict(TopologySpec::Discrete, 17);
        assert_eq!(
            basic_nbhd(&spec, &nat(15), None).unwrap(),
            BasicOpen::singleton_nat(15)
        );
        assert_eq!(
            basic_nbhd(&spec, &nat(30), None).unwrap(),
            BasicOpen::WholeSpace(Carrier::Naturals)
        );
    }

    #[test]
    fn signed_neighborhoods_track_sign_and_zero() {
        let spec = TopologySpec::SignedFinalDigits;
        assert_eq!(
            basic_nbhd(&spec, &Element::int(0), Some(3)).unwrap(),
            BasicOpen::ZeroTail(3)
        );
        assert_eq!(
            basic_nbhd(&spec, &Element::int(-6), Some(3)).unwrap(),
            BasicOpen::SignedSuffixClass {
                polarity: Polarity::Negative,
                suffix: ds("110"),
            }
        );
    }

    #[test]
    fn order_neighborhoods_contain_their_point() {
        for kind in [OrderKind::FinalDigits, OrderKind::Variant] {
            for v in 0..64u64 {
                let u = basic_nbhd(&TopologySpec::OrderTopology(kind), &nat(v), Some(8)).unwrap();
                assert!(member(&u, &nat(v)).unwrap(), "{kind} at {v}: {u}");
            }
        }
        for v in -24i64..=24 {
            let u = basic_nbhd(
                &TopologySpec::OrderTopology(OrderKind::SignedFinalDigits),
                &Element::int(v),
                Some(7),
            )
            .unwrap();
            assert!(member(&u, &Element::int(v)).unwrap(), "signed at {v}: {u}");
        }
    }

    #[test]
    fn variant_least_element_gets_a_ray_neighborhood() {
        let u = basic_nbhd(&TopologySpec::OrderTopology(OrderKind::Variant), &nat(0), Some(6))
            .unwrap();
        match u {
            BasicOpen::OrderInterval { lo: None, hi: Some(_), .. } => {}
            other => panic!("expected a downward ray, got {other}"),
        }
    }

    #[test]
    fn isolation_examples() {
        let fd = TopologySpec::FinalDigits;
        assert_eq!(is_isolated(&fd, &nat(6), 16).unwrap(), Isolation::NotIsolated);

        let m_star = TopologySpec::isolate_below(TopologySpec::FinalDigits, 17);
        assert!(is_isolated(&m_star, &nat(15), 16).unwrap().is_isolated());
        assert_eq!(
            is_isolated(&m_star, &nat(30), 16).unwrap(),
            Isolation::NotIsolated
        );

        let augmented = TopologySpec::AugmentInitial(Box::new(TopologySpec::FinalDigits));
        for v in [0u64, 1, 6, 17, 100, 1000] {
            assert!(
                is_isolated(&augmented, &nat(v), 24).unwrap().is_isolated(),
                "augmented at {v}"
            );
        }
    }

    #[test]
    fn restriction_isolates_small_points_of_the_digit_topology() {
        let spec = TopologySpec::restrict(TopologySpec::FinalDigits, 17);
        for v in 0..=17u64 {
            assert!(is_isolated(&spec, &nat(v), 16).unwrap().is_isolated(), "at {v}");
        }
        assert_eq!(is_isolated(&spec, &nat(30), 16).unwrap(), Isolation::NotIsolated);
    }

    #[test]
    fn segment_topologies_isolate_almost_nothing() {
        assert!(is_isolated(&TopologySpec::InitialSegments, &nat(0), 8)
            .unwrap()
            .is_isolated());
        assert_eq!(
            is_isolated(&TopologySpec::InitialSegments, &nat(3), 8).unwrap(),
            Isolation::NotIsolated
        );
        assert_eq!(
            is_isolated(&TopologySpec::FinalSegments, &nat(3), 8).unwrap(),
            Isolation::NotIsolated
        );
        // Joining the two segment topologies pinches {x} = [0,x] ∩ [x,∞).
        let both = TopologySpec::Union(
            Box::new(TopologySpec::InitialSegments),
            Box::new(TopologySpec::FinalSegments),
        );
        assert!(is_isolated(&both, &nat(5), 8).unwrap().is_isolated());
    }

    #[test]
    fn indiscrete_restriction_is_conclusively_unisolated() {
        let spec = TopologySpec::restrict(TopologySpec::Indiscrete, 17);
        assert_eq!(is_isolated(&spec, &nat(3), 12).unwrap(), Isolation::NotIsolated);
    }

    #[test]
    fn blend_isolation_follows_the_case_analysis() {
        // Discrete below 17 blended over the digit topology: the same space
        // as isolate-below.
        let blend = TopologySpec::Blend(
            Box::new(TopologySpec::Discrete),
            Box::new(TopologySpec::FinalDigits),
            Numeral::from_u64(17),
        );
        assert!(is_isolated(&blend, &nat(9), 16).unwrap().is_isolated());
        assert_eq!(is_isolated(&blend, &nat(20), 16).unwrap(), Isolation::NotIsolated);
    }

    #[test]
    fn progression_sizes_are_exact() {
        // Suffix class of 6 mod 8 intersected with [0, 6]: exactly {6}.
        let open = BasicOpen::and(BasicOpen::suffix("110"), BasicOpen::initial(6));
        assert_eq!(exact_size(&open), Some(SetSize::One(nat(6))));
        // Widen the segment: 6 and 14 both fit.
        let open = BasicOpen::and(BasicOpen::suffix("110"), BasicOpen::initial(14));
        assert_eq!(exact_size(&open), Some(SetSize::Several));
        // Clash of residues: empty.
        let open = BasicOpen::and(BasicOpen::suffix("1"), BasicOpen::suffix("0"));
        assert_eq!(exact_size(&simplify(open)), Some(SetSize::Empty));
    }

    #[test]
    fn simplify_collapses_trivial_shapes() {
        let u = BasicOpen::and(BasicOpen::WholeSpace(Carrier::Naturals), BasicOpen::suffix("10"));
        assert_eq!(simplify(u), BasicOpen::suffix("10"));
        let u = BasicOpen::and(BasicOpen::singleton_nat(6), BasicOpen::suffix("110"));
        assert_eq!(simplify(u), BasicOpen::singleton_nat(6));
        let u = BasicOpen::and(BasicOpen::singleton_nat(5), BasicOpen::suffix("110"));
        assert_eq!(simplify(u), BasicOpen::Empty);
        let u = BasicOpen::UnionOf(vec![BasicOpen::Empty, BasicOpen::suffix("01")]);
        assert_eq!(simplify(u), BasicOpen::suffix("01"));
    }
}
