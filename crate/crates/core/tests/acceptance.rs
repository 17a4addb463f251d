//! The acceptance gate: fourteen criteria, one test and one printed
//! pass/fail line each. Heavy shared fixtures (suite runs, the shuttle)
//! are built once and reused across criteria.

use std::cmp::Ordering;
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use finaldigits::continuity::{
    check_pointwise, refute_restrict17, refute_variant_successor, residues_determine_output,
    validate_escape, witness_blend, witness_final_digits, witness_segment, witness_translate,
    Operation, RestrictCase,
};
use finaldigits::embedding::enumeration::rational_at_u64;
use finaldigits::embedding::{pair_double, unpair_cantor, witness_pairing, BackAndForthState};
use finaldigits::numerals::{metric2, Numeral, Rational};
use finaldigits::orders::{fd_cmp, variant_cmp, Carrier, Element, OrderKind};
use finaldigits::render::{figure_offset, rendered_numbers};
use finaldigits::report::{to_jsonl, ReportRecord, Status};
use finaldigits::topology::{is_isolated, BasicOpen, Isolation, TopologySpec};
use finaldigits::verify::{run_probe, run_suite, ProbeClaim, SuiteName};

fn conclude(number: u32, name: &str, outcome: Result<(), String>) {
    let verdict = if outcome.is_ok() { "pass" } else { "fail" };
    println!("criterion {number:02} {name}: {verdict}");
    if let Err(reason) = outcome {
        panic!("criterion {number:02} {name}: {reason}");
    }
}

/// All records whose case starts with one of the prefixes must pass, and
/// at least one such record must exist.
fn all_pass(records: &[ReportRecord], case_prefixes: &[&str]) -> Result<(), String> {
    let mut seen = 0;
    for r in records {
        if case_prefixes.iter().any(|p| r.case.starts_with(p)) {
            seen += 1;
            if r.status != Status::Pass {
                return Err(format!(
                    "{}::{} [{}]: {:?}",
                    r.suite, r.case, r.params, r.counterexample
                ));
            }
        }
    }
    if seen == 0 {
        return Err(format!("no records matched {case_prefixes:?}"));
    }
    Ok(())
}

fn orders_records() -> &'static [ReportRecord] {
    static RECORDS: OnceLock<Vec<ReportRecord>> = OnceLock::new();
    RECORDS.get_or_init(|| run_suite(SuiteName::Orders, 1 << 14, 1))
}

fn topology_records() -> &'static [ReportRecord] {
    static RECORDS: OnceLock<Vec<ReportRecord>> = OnceLock::new();
    RECORDS.get_or_init(|| run_suite(SuiteName::Topology, 1 << 16, 1))
}

fn shuttle() -> &'static Mutex<BackAndForthState> {
    static SHUTTLE: OnceLock<Mutex<BackAndForthState>> = OnceLock::new();
    SHUTTLE.get_or_init(|| {
        let mut state = BackAndForthState::new();
        state.advance_to(2000).expect("2000 shuttle steps stay within budget");
        Mutex::new(state)
    })
}

fn n(v: u64) -> Numeral {
    Numeral::from_u64(v)
}

#[test]
fn criterion_01_order_axioms() {
    let started = Instant::now();
    let outcome = all_pass(orders_records(), &["trichotomy", "transitivity"]).and_then(|()| {
        if started.elapsed().as_secs() > 60 {
            Err(format!("order axioms took {:?}", started.elapsed()))
        } else {
            Ok(())
        }
    });
    conclude(1, "order-axioms", outcome);
}

#[test]
fn criterion_02_rank_oracle_agreement() {
    conclude(2, "rank-oracle-agreement", all_pass(orders_records(), &["rank-agreement"]));
}

#[test]
fn criterion_03_figure_fidelity() {
    let outcome = (|| {
        // Depth-5 horizontal positions, doubled to stay integral: digit i
        // of n contributes 2^(6-i) and the node midpoint adds 2^(5-len).
        let doubled_position = |v: u64| -> u64 {
            let len = 64 - v.leading_zeros() as u64;
            let mut acc = 1 << (5 - len);
            for i in 1..=len {
                if v >> (i - 1) & 1 == 1 {
                    acc += 1 << (6 - i);
                }
            }
            acc
        };
        let mut sorted: Vec<u64> = (0..32).collect();
        sorted.sort_by(|a, b| fd_cmp(&n(*a), &n(*b)));
        for pair in sorted.windows(2) {
            if doubled_position(pair[0]) >= doubled_position(pair[1]) {
                return Err(format!("figure positions disagree at ({},{})", pair[0], pair[1]));
            }
        }
        for v in 0..32 {
            let expected = Rational::new(BigInt::from(doubled_position(v)), BigInt::from(2));
            if figure_offset(&n(v), 5) != expected {
                return Err(format!("figure offset of {v} is off"));
            }
        }
        let drawn = rendered_numbers(OrderKind::FinalDigits, 5);
        let expected: Vec<Element> = sorted.iter().map(|v| Element::nat(*v)).collect();
        if drawn != expected {
            return Err("depth-5 rendering disagrees with the comparator sort".into());
        }

        let variant_min = (0..1u64 << 16)
            .map(n)
            .min_by(|a, b| variant_cmp(a, b))
            .unwrap();
        if variant_min != n(0) {
            return Err(format!("variant minimum is {variant_min}, not 0"));
        }
        let class_min = (0..1u64 << 16)
            .filter(|v| v % 8 == 6)
            .map(n)
            .min_by(|a, b| variant_cmp(a, b))
            .unwrap();
        if class_min != n(6) {
            return Err(format!("variant minimum of the 110 class is {class_min}, not 6"));
        }
        Ok(())
    })();
    conclude(3, "figure-fidelity", outcome);
}

#[test]
fn criterion_04_digit_modulus() {
    let outcome = (|| {
        for op in [Operation::Add, Operation::Mul] {
            for k in 1..=10 {
                if !residues_determine_output(&op, k) {
                    return Err(format!("{op} residues mod 2^{k} do not determine the output"));
                }
            }
        }
        Ok(())
    })();
    conclude(4, "digit-modulus", outcome);
}

#[test]
fn criterion_05_ball_suffix_residue() {
    let outcome = all_pass(
        topology_records(),
        &["suffix-membership-residue", "suffix-intersection"],
    )
    .and_then(|()| {
        // The metric side: distances depend only on the difference, the
        // distance of a difference is exactly 2^-v2, and the valuation
        // threshold is the residue test. Together with the membership
        // records above this closes the three-way equivalence on {0..2^16}.
        for d in 1..=1u64 << 16 {
            let expected = Rational::new(BigInt::one(), BigInt::from(1u64 << d.trailing_zeros()));
            if metric2(&n(0), &n(d)) != expected {
                return Err(format!("metric at difference {d} is not 2^-v2"));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let x = rng.gen_range(0..1u64 << 16);
            let d = rng.gen_range(1..1u64 << 16);
            if metric2(&n(x), &n(x + d)) != metric2(&n(0), &n(d)) {
                return Err(format!("metric is not translation invariant at ({x},{d})"));
            }
        }
        for len in 1..=8u64 {
            for value in 0..1u64 << len {
                for x in 0..1u64 << 16 {
                    let same_residue = x % (1 << len) == value;
                    let deep_valuation = (x ^ value).trailing_zeros() as u64 >= len;
                    if same_residue != deep_valuation {
                        return Err(format!(
                            "residue and valuation disagree at x={x}, class {value} mod 2^{len}"
                        ));
                    }
                }
            }
        }
        // A literal three-way spot check with real metric comparisons.
        for len in 1..=4u64 {
            let radius = Rational::new(BigInt::one(), BigInt::from(1u64 << len));
            for value in 0..1u64 << len {
                let class = BasicOpen::SuffixClass(n(value).suffix(len));
                for x in 0..1u64 << 12 {
                    let in_class =
                        finaldigits::topology::member(&class, &Element::nat(x)).unwrap();
                    let in_ball = metric2(&n(x), &n(value)) <= radius;
                    if in_class != in_ball {
                        return Err(format!("ball and class disagree at x={x}, len {len}"));
                    }
                }
            }
        }
        Ok(())
    });
    conclude(5, "ball-suffix-residue", outcome);
}

#[test]
fn criterion_06_right_open_characterization() {
    conclude(
        6,
        "right-open-characterization",
        all_pass(topology_records(), &["right-open-characterization", "right-open-frozen"]),
    );
}

#[test]
fn criterion_07_witness_soundness() {
    let bound = 1 << 12;
    let outcome = (|| {
        let mut witnesses = Vec::new();
        for (x, y, len) in [(9u64, 5u64, 3u64), (12, 7, 4), (100, 37, 5), (45, 31, 6)] {
            for op in [Operation::Add, Operation::Mul, Operation::Sub] {
                witnesses.push((
                    format!("{op} digits at ({x},{y})"),
                    witness_final_digits(&op, &n(x), &n(y), len).map_err(|e| e.to_string())?,
                ));
            }
        }
        for (k, x, len) in [(9u64, 5u64, 3u64), (37, 100, 5), (0, 6, 4)] {
            witnesses.push((
                format!("translate {k} at {x}"),
                witness_translate(&n(k), &n(x), len).map_err(|e| e.to_string())?,
            ));
        }
        for (op, spec, x, y, target) in [
            (Operation::Add, TopologySpec::InitialSegments, 8u64, 5u64, 20u64),
            (Operation::Mul, TopologySpec::InitialSegments, 8, 5, 45),
            (Operation::Add, TopologySpec::FinalSegments, 8, 5, 10),
            (Operation::Mul, TopologySpec::FinalSegments, 8, 5, 30),
        ] {
            witnesses.push((
                format!("{op} segment at ({x},{y})"),
                witness_segment(&op, &spec, &n(x), &n(y), &n(target))
                    .map_err(|e| e.to_string())?,
            ));
        }
        let blends: Vec<(TopologySpec, u64, u64, Operation, BasicOpen)> = vec![
            (
                TopologySpec::isolate_below(TopologySpec::FinalDigits, 17),
                3,
                4,
                Operation::Add,
                BasicOpen::singleton_nat(7),
            ),
            (
                TopologySpec::isolate_below(TopologySpec::FinalDigits, 17),
                6,
                5,
                Operation::Mul,
                BasicOpen::SuffixClass(n(30).suffix(3)),
            ),
            (
                TopologySpec::restrict(TopologySpec::FinalDigits, 17),
                3,
                4,
                Operation::Mul,
                BasicOpen::singleton_nat(12),
            ),
            (
                TopologySpec::restrict(TopologySpec::FinalDigits, 17),
                6,
                5,
                Operation::Mul,
                BasicOpen::WholeSpace(Carrier::Naturals),
            ),
            (
                TopologySpec::restrict(TopologySpec::FinalDigits, 17),
                0,
                23,
                Operation::Mul,
                BasicOpen::singleton_nat(0),
            ),
            (
                TopologySpec::Blend(
                    Box::new(TopologySpec::Discrete),
                    Box::new(TopologySpec::FinalDigits),
                    n(17),
                ),
                9,
                8,
                Operation::Add,
                BasicOpen::singleton_nat(17),
            ),
        ];
        for (spec, x, y, op, target) in blends {
            witnesses.push((
                format!("{op} blend at ({x},{y})"),
                witness_blend(&op, &spec, &n(x), &n(y), &target).map_err(|e| e.to_string())?,
            ));
        }
        for (a, b, len) in [(1u64, 2u64, 4u64), (3, 5, 3), (10, 20, 5), (0, 0, 2)] {
            witnesses.push((format!("pairing at ({a},{b})"), witness_pairing(&n(a), &n(b), len)));
        }

        for (label, witness) in &witnesses {
            let check = check_pointwise(witness, bound).map_err(|e| format!("{label}: {e}"))?;
            if let Some((inputs, image)) = &check.counterexample {
                let shown: Vec<String> = inputs.iter().map(|e| e.to_string()).collect();
                return Err(format!(
                    "{label}: ({}) maps to {image} outside the target",
                    shown.join(",")
                ));
            }
        }
        Ok(())
    })();
    conclude(7, "witness-soundness", outcome);
}

#[test]
fn criterion_08_discontinuity_witnesses() {
    let outcome = (|| {
        let whole = BasicOpen::WholeSpace(Carrier::Naturals);

        for (case, point, canonical) in [
            (RestrictCase::HalvingAt30, 30u64, 36u64),
            (RestrictCase::PredecessorAt18, 18, 20),
        ] {
            let witness = refute_restrict17(case);
            let escape = witness.escape(&whole).map_err(|e| e.to_string())?;
            if escape.element != Element::nat(canonical) {
                return Err(format!(
                    "canonical escape at {point} is {}, expected {canonical}",
                    escape.element
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(8 ^ point);
            for i in 0..100 {
                let nbhd = match rng.gen_range(0..4u8) {
                    0 => whole.clone(),
                    1 => BasicOpen::FinalSegment(n(rng.gen_range(0..=point))),
                    2 => BasicOpen::InitialSegment(n(rng.gen_range(point + 30..point + 600))),
                    _ => BasicOpen::SuffixClass(n(point).suffix(rng.gen_range(1..=6u64))),
                };
                let escape = witness
                    .escape(&nbhd)
                    .map_err(|e| format!("{case:?} neighborhood {i} ({nbhd}): {e}"))?;
                validate_escape(&witness, &nbhd, &escape)
                    .map_err(|e| format!("{case:?} neighborhood {i} ({nbhd}): {e}"))?;
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(88);
        for i in 0..100 {
            let lo = Element::nat(2 * rng.gen_range(0..1u64 << 15));
            let hi = Element::nat(2 * rng.gen_range(1..1u64 << 15) + 1);
            let nbhd = BasicOpen::OrderInterval {
                kind: OrderKind::Variant,
                lo: Some(lo),
                hi: Some(hi),
            };
            let witness =
                refute_variant_successor(&nbhd).map_err(|e| format!("interval {i}: {e}"))?;
            let escape = witness.escape(&nbhd).map_err(|e| format!("interval {i}: {e}"))?;
            validate_escape(&witness, &nbhd, &escape)
                .map_err(|e| format!("interval {i}: {e}"))?;
        }
        Ok(())
    })();
    conclude(8, "discontinuity-witnesses", outcome);
}

#[test]
fn criterion_09_back_and_forth() {
    let started = Instant::now();
    let outcome = (|| {
        let mut state = shuttle().lock().unwrap();
        for pair in state.assignments().windows(2) {
            if fd_cmp(&pair[0].0, &pair[1].0) != Ordering::Less || pair[0].1 >= pair[1].1 {
                return Err(format!("order broken between {} and {}", pair[0].0, pair[1].0));
            }
        }
        let mut shorter = BackAndForthState::new();
        shorter.advance_to(1000).map_err(|e| e.to_string())?;
        if shorter.log() != &state.log()[..1000] {
            return Err("a 1000-step rerun is not a prefix of the 2000-step run".into());
        }
        for v in 0..999u64 {
            if state.image_of(&n(v)).is_none() {
                return Err(format!("natural {v} is unmapped after 2000 steps"));
            }
            if state.preimage_of(&rational_at_u64(v)).is_none() {
                return Err(format!("enumeration position {v} is uncovered after 2000 steps"));
            }
        }
        for v in 0..999u64 {
            let q = state.embed(&n(v)).map_err(|e| e.to_string())?;
            if state.inverse(&q).map_err(|e| e.to_string())? != n(v) {
                return Err(format!("round trip failed at natural {v}"));
            }
        }
        if started.elapsed().as_secs() > 120 {
            return Err(format!("shuttle checks took {:?}", started.elapsed()));
        }
        Ok(())
    })();
    conclude(9, "back-and-forth", outcome);
}

#[test]
fn criterion_10_transported_arithmetic() {
    let outcome = (|| {
        let mut state = shuttle().lock().unwrap();
        let zero = state.embed(&n(0)).map_err(|e| e.to_string())?;
        let one = state.embed(&n(1)).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..40 {
            let a = rng.gen_range(0..90u64);
            let b = rng.gen_range(0..90u64);
            let c = rng.gen_range(0..8u64);
            let (qa, qb, qc) = (
                state.embed(&n(a)).map_err(|e| e.to_string())?,
                state.embed(&n(b)).map_err(|e| e.to_string())?,
                state.embed(&n(c)).map_err(|e| e.to_string())?,
            );
            let add = |p: &Rational, q: &Rational, state: &mut BackAndForthState| {
                finaldigits::embedding::transported_add(p, q, state).map_err(|e| e.to_string())
            };
            let ab = add(&qa, &qb, &mut state)?;
            if add(&qa, &zero, &mut state)? != qa {
                return Err(format!("additive identity failed at {a}"));
            }
            if add(&qb, &qa, &mut state)? != ab {
                return Err(format!("commutativity failed at ({a},{b})"));
            }
            let bc = add(&qb, &qc, &mut state)?;
            if add(&ab, &qc, &mut state)? != add(&qa, &bc, &mut state)? {
                return Err(format!("associativity failed at ({a},{b},{c})"));
            }
            let mul = |p: &Rational, q: &Rational, state: &mut BackAndForthState| {
                finaldigits::embedding::transported_mul(p, q, state).map_err(|e| e.to_string())
            };
            if mul(&qa, &one, &mut state)? != qa {
                return Err(format!("multiplicative identity failed at {a}"));
            }
            if c * (a + b) <= 200 {
                let left = mul(&qc, &ab, &mut state)?;
                let right = add(&mul(&qc, &qa, &mut state)?, &mul(&qc, &qb, &mut state)?, &mut state)?;
                if left != right {
                    return Err(format!("distributivity failed at ({a},{b},{c})"));
                }
            }
        }
        Ok(())
    })();
    conclude(10, "transported-arithmetic", outcome);
}

#[test]
fn criterion_11_pairing() {
    let outcome = (|| {
        let mut seen = std::collections::BTreeSet::new();
        for a in 0..=500u64 {
            for b in 0..=500u64 {
                let v = pair_double(&n(a), &n(b));
                if v.digit_padded(1) {
                    return Err(format!("pair of ({a},{b}) is odd"));
                }
                if !seen.insert(v) {
                    return Err(format!("pairing collision at ({a},{b})"));
                }
            }
        }
        for e in (0..=10_000u64).step_by(2) {
            let (a, b) = unpair_cantor(&n(e / 2));
            if pair_double(&a, &b) != n(e) {
                return Err(format!("even {e} is not attained"));
            }
        }
        Ok(())
    })();
    conclude(11, "pairing", outcome);
}

#[test]
fn criterion_12_blend_isolation() {
    let outcome = (|| {
        let seam = TopologySpec::isolate_below(TopologySpec::FinalDigits, 17);
        for v in 0..=1u64 << 12 {
            let verdict = is_isolated(&seam, &Element::nat(v), 64).map_err(|e| e.to_string())?;
            let expected = v <= 17;
            match verdict {
                Isolation::Isolated(_) if expected => {}
                Isolation::NotIsolated if !expected => {}
                other => {
                    return Err(format!("isolate-below at {v} reported {other:?}"));
                }
            }
        }
        let augmented = TopologySpec::AugmentInitial(Box::new(TopologySpec::FinalDigits));
        for v in 0..=1u64 << 12 {
            if !is_isolated(&augmented, &Element::nat(v), 64)
                .map_err(|e| e.to_string())?
                .is_isolated()
            {
                return Err(format!("augmenting initial segments left {v} unisolated"));
            }
        }
        Ok(())
    })();
    conclude(12, "blend-isolation", outcome);
}

#[test]
fn criterion_13_report_determinism() {
    let outcome = (|| {
        let first = to_jsonl(&run_suite(SuiteName::All, 256, 1));
        let second = to_jsonl(&run_suite(SuiteName::All, 256, 1));
        if first != second {
            return Err("two identical runs produced different bytes".into());
        }
        Ok(())
    })();
    conclude(13, "report-determinism", outcome);
}

#[test]
fn criterion_14_probe_evidence() {
    let started = Instant::now();
    let outcome = (|| {
        for claim in [
            ProbeClaim::OrderTopologyEquality,
            ProbeClaim::SignedAddContinuity,
            ProbeClaim::TransportedContinuity,
        ] {
            let records = run_probe(claim, 16, 1);
            if records.is_empty() {
                return Err(format!("{claim:?} produced no evidence"));
            }
            if records.iter().any(|r| r.status == Status::Fail) {
                return Err(format!("{claim:?} produced a failing record"));
            }
            if !records.iter().any(|r| r.status == Status::Inconclusive) {
                return Err(format!("{claim:?} produced no evidence records"));
            }
        }
        if started.elapsed().as_secs() > 120 {
            return Err(format!("probes took {:?}", started.elapsed()));
        }
        Ok(())
    })();
    conclude(14, "probe-evidence", outcome);
}
