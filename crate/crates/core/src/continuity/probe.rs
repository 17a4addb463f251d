//! Bounded, seeded, evidence-only probes.
//!
//! Where an exact certificate exists (the digit topologies and arithmetic)
//! [`probe_continuity`] returns it. Everywhere else it searches the
//! canonical neighborhood basis at the point, samples each candidate
//! neighborhood — small members, structured far-out members of the form
//! `x ± m·2^j`, and seeded random draws — and either returns a witness
//! whose soundness is *only sampled*, or reports the escapes it found.
//! Escapes are facts; a missing witness at a bound is not a theorem, and
//! nothing here gates a verification run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numerals::{DigitString, Numeral, SignedNumeral};
use crate::orders::{fd_cmp, Element};
use crate::topology::{basic_nbhd, member, BasicOpen, TopologySpec};

use super::{
    members_up_to, witness_final_digits, witness_translate, ContinuityError, ContinuityWitness,
    Justification, Operation,
};

/// A tuple from a candidate neighborhood product whose image left the
/// target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeEscape {
    pub inputs: Vec<Element>,
    pub image: Element,
}

/// What a bounded continuity probe found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    Witness(ContinuityWitness),
    /// No candidate neighborhood up to the resolution bound survived
    /// sampling; the escapes exhibit why each candidate failed.
    NoWitnessUpTo { bound: u64, escapes: Vec<ProbeEscape> },
}

impl ProbeOutcome {
    pub fn is_witness(&self) -> bool {
        matches!(self, ProbeOutcome::Witness(_))
    }
}

/// Search for a continuity certificate for `op` at `point` into `target`
/// under the topology `spec`.
///
/// Exact residue certificates are returned outright for the digit topology.
/// Otherwise candidate neighborhoods from the canonical basis at
/// resolutions `1..=search_bound` are vetted by sampling members of
/// magnitude at most `sample_bound`, plus structured far-out members and
/// seeded random draws; the first candidate with no violation is returned
/// as a witness justified only as sampled. Deterministic for fixed
/// arguments.
pub fn probe_continuity(
    op: &Operation,
    spec: &TopologySpec,
    point: &[Element],
    target: &BasicOpen,
    search_bound: u64,
    sample_bound: u64,
    seed: u64,
) -> Result<ProbeOutcome, ContinuityError> {
    let image = op.apply(point).ok_or_else(|| {
        ContinuityError::PreconditionViolated(format!(
            "{op} undefined at the probe point"
        ))
    })?;
    if !member(target, &image)? {
        return Err(ContinuityError::TargetMisses {
            target: target.to_string(),
            image: image.to_string(),
        });
    }

    // Exact route: on the digit topology with a suffix target, arithmetic
    // has a congruence certificate — no sampling involved.
    if *spec == TopologySpec::FinalDigits {
        if let BasicOpen::SuffixClass(s) = target {
            if let Some(witness) = exact_digit_witness(op, point, s)? {
                return Ok(ProbeOutcome::Witness(witness));
            }
        }
    }

    let mut escapes: Vec<ProbeEscape> = Vec::new();
    for resolution in 1..=search_bound {
        let mut neighborhoods = Vec::with_capacity(point.len());
        for p in point {
            neighborhoods.push(basic_nbhd(spec, p, Some(resolution))?);
        }
        let violations = sample_violations(
            op,
            point,
            &neighborhoods,
            target,
            sample_bound,
            search_bound,
            seed ^ resolution,
        )?;
        if violations.is_empty() {
            return Ok(ProbeOutcome::Witness(ContinuityWitness {
                operation: op.clone(),
                point: point.to_vec(),
                target: target.clone(),
                neighborhoods,
                justification: Justification::Sampled {
                    bound: sample_bound,
                },
            }));
        }
        for v in violations {
            if !escapes.contains(&v) {
                escapes.push(v);
            }
        }
    }
    escapes.sort_by_key(|e| {
        (
            e.inputs
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(","),
            e.image.to_string(),
        )
    });
    escapes.truncate(16);
    Ok(ProbeOutcome::NoWitnessUpTo {
        bound: search_bound,
        escapes,
    })
}

/// Exact digit-topology certificates, when the operation has one: the
/// binary arithmetic operations and the pairing polynomial keep residues,
/// translation and successor are additions with a constant, predecessor is
/// a subtraction, and halving needs one extra input digit per output digit.
fn exact_digit_witness(
    op: &Operation,
    point: &[Element],
    target: &DigitString,
) -> Result<Option<ContinuityWitness>, ContinuityError> {
    let len = target.len();
    let nat = |i: usize| -> Option<&Numeral> { point.get(i).and_then(Element::as_nat) };
    match op {
        Operation::Add | Operation::Mul | Operation::Sub => {
            let (Some(x), Some(y)) = (nat(0), nat(1)) else {
                return Ok(None);
            };
            match witness_final_digits(op, x, y, len) {
                Ok(w) => Ok(Some(w)),
                Err(ContinuityError::Underflow { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        }
        Operation::Translate(k) => {
            let Some(x) = nat(0) else { return Ok(None) };
            Ok(Some(witness_translate(k, x, len)?))
        }
        Operation::Successor | Operation::Predecessor | Operation::PairDouble => {
            let inputs: Option<Vec<&Numeral>> = (0..op.arity()).map(nat).collect();
            let Some(inputs) = inputs else { return Ok(None) };
            let Some(image) = op.apply(point) else {
                return Ok(None);
            };
            let out = image.as_nat().expect("natural image");
            Ok(Some(ContinuityWitness {
                operation: op.clone(),
                point: point.to_vec(),
                target: BasicOpen::SuffixClass(out.suffix(len)),
                neighborhoods: inputs
                    .iter()
                    .map(|x| BasicOpen::SuffixClass(x.suffix(len)))
                    .collect(),
                justification: Justification::ResidueModulus { bits: len },
            }))
        }
        Operation::Halving => {
            let Some(x) = nat(0) else { return Ok(None) };
            let Some(half) = x.half() else { return Ok(None) };
            // Fixing len+1 input digits fixes len digits of the half.
            Ok(Some(ContinuityWitness {
                operation: op.clone(),
                point: point.to_vec(),
                target: BasicOpen::SuffixClass(half.suffix(len)),
                neighborhoods: vec![BasicOpen::SuffixClass(x.suffix(len + 1))],
                justification: Justification::ResidueModulus { bits: len },
            }))
        }
    }
}

/// Candidate members of one neighborhood: every member up to the sample
/// bound, the structured far-out family `p ± m·2^j`, and seeded random
/// draws. Deterministic for fixed arguments.
fn neighborhood_pool(
    open: &BasicOpen,
    p: &Element,
    sample_bound: u64,
    search_bound: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Element>, ContinuityError> {
    let mut pool = members_up_to(open, sample_bound)?;
    let push = |candidate: Element, pool: &mut Vec<Element>| -> Result<(), ContinuityError> {
        if member(open, &candidate)? && !pool.contains(&candidate) {
            pool.push(candidate);
        }
        Ok(())
    };
    // Far-out candidates grow from the point and from any interval
    // endpoints the neighborhood carries: escapes often sit just past an
    // endpoint, far beyond any magnitude cutoff.
    let mut anchors = vec![p.clone()];
    interval_anchors(open, &mut anchors);
    for anchor in &anchors {
        for j in 0..=search_bound + 4 {
            for m in 1..=3u64 {
                let offset = Numeral::from_biguint(num_bigint::BigUint::from(m) << j);
                match anchor {
                    Element::Nat(x) => {
                        push(Element::Nat(x.add(&offset)), &mut pool)?;
                        if let Ok(down) = x.checked_sub(&offset) {
                            push(Element::Nat(down), &mut pool)?;
                        }
                    }
                    Element::Int(x) => {
                        let shift = SignedNumeral::positive(offset);
                        push(Element::Int(x.add(&shift)), &mut pool)?;
                        push(Element::Int(x.sub(&shift)), &mut pool)?;
                    }
                }
            }
        }
    }
    let roam = 1u128 << (search_bound.min(40) + 8);
    for _ in 0..48 {
        let magnitude = Numeral::from_biguint((rng.gen_range(0..roam)).into());
        let candidate = match p {
            Element::Nat(_) => Element::Nat(magnitude),
            Element::Int(_) => {
                if rng.gen_bool(0.5) {
                    Element::Int(SignedNumeral::positive(magnitude))
                } else {
                    Element::Int(SignedNumeral::negative(magnitude))
                }
            }
        };
        push(candidate, &mut pool)?;
    }
    // Keep the product of pools desk-scale but deterministic.
    pool.truncate(600);
    Ok(pool)
}

/// Collect the order-interval endpoints buried in a basic open.
fn interval_anchors(open: &BasicOpen, out: &mut Vec<Element>) {
    match open {
        BasicOpen::OrderInterval { lo, hi, .. } => {
            out.extend(lo.iter().cloned());
            out.extend(hi.iter().cloned());
        }
        BasicOpen::RightOpenInterval { lo, hi, .. } => {
            out.push(lo.clone());
            out.extend(hi.iter().cloned());
        }
        BasicOpen::Intersection(a, b) => {
            interval_anchors(a, out);
            interval_anchors(b, out);
        }
        BasicOpen::UnionOf(parts) => {
            for part in parts {
                interval_anchors(part, out);
            }
        }
        _ => {}
    }
}

fn sample_violations(
    op: &Operation,
    point: &[Element],
    neighborhoods: &[BasicOpen],
    target: &BasicOpen,
    sample_bound: u64,
    search_bound: u64,
    seed: u64,
) -> Result<Vec<ProbeEscape>, ContinuityError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pools = Vec::with_capacity(neighborhoods.len());
    for (open, p) in neighborhoods.iter().zip(point) {
        pools.push(neighborhood_pool(open, p, sample_bound, search_bound, &mut rng)?);
    }
    let mut violations = Vec::new();
    let mut consider = |tuple: &[Element]| -> Result<bool, ContinuityError> {
        if let Some(image) = op.apply(tuple) {
            if !member(target, &image)? {
                violations.push(ProbeEscape {
                    inputs: tuple.to_vec(),
                    image,
                });
            }
        }
        Ok(violations.len() >= 8)
    };
    match pools.len() {
        1 => {
            for x in &pools[0] {
                if consider(std::slice::from_ref(x))? {
                    break;
                }
            }
        }
        2 => {
            'outer: for x in &pools[0] {
                for y in &pools[1] {
                    if consider(&[x.clone(), y.clone()])? {
                        break 'outer;
                    }
                }
            }
        }
        n => {
            return Err(ContinuityError::PreconditionViolated(format!(
                "probes handle arity 1 and 2, got {n}"
            )))
        }
    }
    Ok(violations)
}

/// Where the class representative sits in the order among the class members
/// that fit in the truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemberPosition {
    Least,
    Greatest,
    Interior,
    /// The truncation holds no other member to compare with.
    Only,
}

impl MemberPosition {
    pub fn token(self) -> &'static str {
        match self {
            MemberPosition::Least => "least",
            MemberPosition::Greatest => "greatest",
            MemberPosition::Interior => "interior",
            MemberPosition::Only => "only",
        }
    }
}

/// Exhaustive facts about one suffix class, read against the final-digits
/// order on the truncation `{0, ..., 2^bits - 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderTopologyProbe {
    pub suffix: DigitString,
    pub truncation_bits: u64,
    pub member_count: u64,
    /// No non-member of the truncation lies strictly between two members.
    pub convex_on_truncation: bool,
    /// Order position of the class representative among the members.
    pub convention_position: MemberPosition,
    /// Every member lies between the predicted flanks: lowest is the
    /// representative plus a single 1 at the top of the truncation;
    /// highest is the representative padded with ones — or the
    /// representative itself when the class string has leading zeros,
    /// since the end rule then puts it above every longer member.
    pub sandwich_holds: bool,
    /// Membership coincides with the residue test on the truncation.
    pub residue_matches: bool,
}

/// Survey one suffix class against the order on a truncation: convexity,
/// the representative's position, the flanking bounds, and the residue law.
pub fn probe_order_topology(suffix: &DigitString, bits: u64) -> OrderTopologyProbe {
    let bits = bits.clamp(suffix.len() + 1, 18);
    let size = 1u64 << bits;
    let class = BasicOpen::SuffixClass(suffix.clone());
    let rep = suffix
        .value()
        .to_u64()
        .expect("representative fits the truncation");

    let mut members: Vec<u64> = Vec::new();
    let mut residue_matches = true;
    let modulus = 1u64 << suffix.len();
    let residue = rep % modulus;
    for x in 0..size {
        let is_member = member(&class, &Element::nat(x)).expect("natural carrier");
        if is_member != (x % modulus == residue) {
            residue_matches = false;
        }
        if is_member {
            members.push(x);
        }
    }

    // Sort the whole truncation by the order and check the members form a
    // contiguous block.
    let n = |v: u64| Numeral::from_u64(v);
    let mut universe: Vec<u64> = (0..size).collect();
    universe.sort_by(|&a, &b| fd_cmp(&n(a), &n(b)));
    let positions: Vec<usize> = universe
        .iter()
        .enumerate()
        .filter(|(_, v)| **v % modulus == residue)
        .map(|(i, _)| i)
        .collect();
    let convex_on_truncation = positions
        .windows(2)
        .all(|w| w[1] == w[0] + 1);

    let mut sorted_members = members.clone();
    sorted_members.sort_by(|&a, &b| fd_cmp(&n(a), &n(b)));
    let convention_position = if sorted_members.len() <= 1 {
        MemberPosition::Only
    } else if sorted_members.first() == Some(&rep) {
        MemberPosition::Least
    } else if sorted_members.last() == Some(&rep) {
        MemberPosition::Greatest
    } else {
        MemberPosition::Interior
    };

    // Flanks: the member with one leading 1 at the top of the truncation,
    // and the member padded with ones all the way up — unless the class
    // string has leading zeros, in which case the representative ends
    // above every properly longer member and is itself the top.
    let len = suffix.len();
    let sandwich_holds = if bits > len {
        let low_flank = residue + (1 << (bits - 1));
        let high_flank = if Numeral::from_u64(residue).len() < len {
            residue
        } else {
            residue + (size - (1 << len))
        };
        members.iter().all(|&m| {
            fd_cmp(&n(low_flank), &n(m)) != std::cmp::Ordering::Greater
                && fd_cmp(&n(m), &n(high_flank)) != std::cmp::Ordering::Greater
        })
    } else {
        true
    };

    OrderTopologyProbe {
        suffix: suffix.clone(),
        truncation_bits: bits,
        member_count: members.len() as u64,
        convex_on_truncation,
        convention_position,
        sandwich_holds,
        residue_matches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::OrderKind;
    use crate::topology::Polarity;

    fn ds(s: &str) -> DigitString {
        s.parse().unwrap()
    }

    #[test]
    fn digit_topology_arithmetic_always_gets_an_exact_witness() {
        for (x, y) in [(3u64, 5u64), (0, 0), (1261, 153), (6, 5)] {
            for op in [Operation::Add, Operation::Mul] {
                let point = [Element::nat(x), Element::nat(y)];
                let out = op.apply(&point).unwrap();
                let target = BasicOpen::SuffixClass(out.as_nat().unwrap().suffix(3));
                let outcome = probe_continuity(
                    &op,
                    &TopologySpec::FinalDigits,
                    &point,
                    &target,
                    8,
                    128,
                    1,
                )
                .unwrap();
                match outcome {
                    ProbeOutcome::Witness(w) => {
                        assert_eq!(
                            w.justification,
                            Justification::ResidueModulus { bits: 3 },
                            "{op} at ({x},{y})"
                        );
                    }
                    ProbeOutcome::NoWitnessUpTo { .. } => {
                        panic!("{op} at ({x},{y}) must have an exact witness")
                    }
                }
            }
        }
    }

    #[test]
    fn halving_on_the_digit_topology_needs_one_extra_digit() {
        let point = [Element::nat(36)];
        let target = BasicOpen::SuffixClass(Numeral::from_u64(18).suffix(3));
        let outcome = probe_continuity(
            &Operation::Halving,
            &TopologySpec::FinalDigits,
            &point,
            &target,
            8,
            256,
            1,
        )
        .unwrap();
        let ProbeOutcome::Witness(w) = outcome else {
            panic!("halving is continuous on its domain in the digit topology");
        };
        assert_eq!(w.neighborhoods[0], BasicOpen::SuffixClass(ds("0100")));
        let check = super::super::check_pointwise(&w, 1024).unwrap();
        assert!(check.holds());
    }

    #[test]
    fn mixed_sign_addition_probe_reports_structured_escapes() {
        let point = [Element::int(1), Element::int(-2)];
        // The image -1 lies in the negative odd class.
        let target = BasicOpen::SignedSuffixClass {
            polarity: Polarity::Negative,
            suffix: ds("1"),
        };
        let outcome = probe_continuity(
            &Operation::Add,
            &TopologySpec::SignedFinalDigits,
            &point,
            &target,
            10,
            64,
            7,
        )
        .unwrap();
        let ProbeOutcome::NoWitnessUpTo { bound, escapes } = outcome else {
            panic!("no fixed number of digits plus sign determines the output sign");
        };
        assert_eq!(bound, 10);
        assert!(!escapes.is_empty());
        // Every escape genuinely leaves the target.
        for escape in &escapes {
            assert!(!member(&target, &escape.image).unwrap());
        }
        // The classic family is among them: first input 1 + 2^k, second -2.
        let classic = escapes.iter().any(|e| {
            e.inputs[1] == Element::int(-2)
                && e.inputs[0]
                    .as_int()
                    .and_then(|v| v.magnitude().to_u64())
                    .is_some_and(|m| m > 1 && (m - 1).is_power_of_two())
        });
        assert!(classic, "expected an escape of the form (1 + 2^k, -2): {escapes:?}");
    }

    #[test]
    fn variant_successor_probe_agrees_with_the_refuter() {
        let point = [Element::nat(1)];
        let target = BasicOpen::OrderInterval {
            kind: OrderKind::Variant,
            lo: Some(Element::nat(0)),
            hi: Some(Element::nat(1)),
        };
        let outcome = probe_continuity(
            &Operation::Successor,
            &TopologySpec::OrderTopology(OrderKind::Variant),
            &point,
            &target,
            8,
            128,
            3,
        )
        .unwrap();
        let ProbeOutcome::NoWitnessUpTo { escapes, .. } = outcome else {
            panic!("successor is discontinuous at 1 for the variant order");
        };
        assert!(!escapes.is_empty());
        for escape in &escapes {
            let v = escape.inputs[0].as_nat().unwrap().to_u64().unwrap();
            assert_eq!(v % 2, 0, "escapes are even numbers, got {v}");
        }
    }

    #[test]
    fn order_survey_of_the_named_classes() {
        let probe = probe_order_topology(&ds("110"), 16);
        assert!(probe.convex_on_truncation);
        assert!(probe.residue_matches);
        assert!(probe.sandwich_holds);
        assert_eq!(probe.convention_position, MemberPosition::Interior);

        let probe = probe_order_topology(&ds("0110"), 16);
        assert_eq!(probe.convention_position, MemberPosition::Greatest);
        assert!(probe.convex_on_truncation);
        assert!(probe.sandwich_holds);

        let probe = probe_order_topology(&ds("00110"), 16);
        assert!(probe.residue_matches);
        assert_eq!(probe.member_count, (1 << 16) / 32);
    }
}
