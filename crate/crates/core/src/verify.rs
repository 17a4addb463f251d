//! Deterministic verification suites and evidence probes.
//!
//! [`run_suite`] executes the library's invariants at a configurable
//! truncation bound and returns one [`ReportRecord`] per check, sorted by
//! suite, case, and params — identical arguments always produce identical
//! records. [`run_probe`] wraps the bounded probes for the genuinely open
//! questions; probe records are evidence and never report failure.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::continuity::probe::{probe_continuity, probe_order_topology, ProbeOutcome};
use crate::continuity::{
    check_pointwise, refute_restrict17, refute_variant_successor, residues_determine_output,
    validate_escape, witness_blend, witness_final_digits, witness_segment, witness_translate,
    Operation, RestrictCase,
};
use crate::embedding::enumeration::{position_of, rational_at_u64};
use crate::embedding::{
    pair_double, transported_add, transported_mul, unpair_cantor, witness_pairing,
    BackAndForthState,
};
use crate::numerals::{metric2, DigitString, Numeral, Rational};
use crate::orders::{
    between, compare, fd_cmp, rank3, rankv, ranks, unbounded_witnesses, Element, OrderKind,
};
use crate::report::{sort_records, ReportRecord};
use crate::topology::{
    basic_nbhd, intersect_suffix, is_isolated, member, suffix_class_as_right_open, text,
    BasicOpen, Isolation, TopologySpec,
};

/// Which invariant suite to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteName {
    Orders,
    Topology,
    Continuity,
    Embedding,
    All,
}

impl SuiteName {
    pub fn token(self) -> &'static str {
        match self {
            SuiteName::Orders => "orders",
            SuiteName::Topology => "topology",
            SuiteName::Continuity => "continuity",
            SuiteName::Embedding => "embedding",
            SuiteName::All => "all",
        }
    }

    pub fn from_token(text: &str) -> Option<Self> {
        match text {
            "orders" => Some(SuiteName::Orders),
            "topology" => Some(SuiteName::Topology),
            "continuity" => Some(SuiteName::Continuity),
            "embedding" => Some(SuiteName::Embedding),
            "all" => Some(SuiteName::All),
            _ => None,
        }
    }
}

/// The open questions a probe can gather evidence for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeClaim {
    OrderTopologyEquality,
    SignedAddContinuity,
    TransportedContinuity,
}

impl ProbeClaim {
    pub fn token(self) -> &'static str {
        match self {
            ProbeClaim::OrderTopologyEquality => "order-topology-equality",
            ProbeClaim::SignedAddContinuity => "signed-add-continuity",
            ProbeClaim::TransportedContinuity => "transported-continuity",
        }
    }

    pub fn from_token(text: &str) -> Option<Self> {
        match text {
            "order-topology-equality" => Some(ProbeClaim::OrderTopologyEquality),
            "signed-add-continuity" => Some(ProbeClaim::SignedAddContinuity),
            "transported-continuity" => Some(ProbeClaim::TransportedContinuity),
            _ => None,
        }
    }
}

/// Run one suite (or all of them) at truncation bound `max`; seeded parts
/// derive their randomness from `seed`. Deterministic given the arguments.
pub fn run_suite(name: SuiteName, max: u64, seed: u64) -> Vec<ReportRecord> {
    let mut records = Vec::new();
    let max = max.max(4);
    match name {
        SuiteName::Orders => orders_suite(&mut records, max, seed),
        SuiteName::Topology => topology_suite(&mut records, max, seed),
        SuiteName::Continuity => continuity_suite(&mut records, max, seed),
        SuiteName::Embedding => embedding_suite(&mut records, max, seed),
        SuiteName::All => {
            orders_suite(&mut records, max, seed);
            topology_suite(&mut records, max, seed);
            continuity_suite(&mut records, max, seed);
            embedding_suite(&mut records, max, seed);
        }
    }
    sort_records(&mut records);
    records
}

/// Record a pass/fail check.
fn check(
    records: &mut Vec<ReportRecord>,
    suite: &str,
    case: &str,
    params: String,
    outcome: Result<(), String>,
) {
    records.push(match outcome {
        Ok(()) => ReportRecord::pass(suite, case, params),
        Err(cx) => ReportRecord::fail(suite, case, params, cx),
    });
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e3779b97f4a7c15))
}

/// The elements a kind's comparator covers, magnitudes below `bound`.
fn kind_elements(kind: OrderKind, bound: u64) -> Vec<Element> {
    match kind {
        OrderKind::FinalDigits | OrderKind::Variant => {
            (0..bound).map(Element::nat).collect()
        }
        OrderKind::SignedFinalDigits => {
            let mut out: Vec<Element> = Vec::with_capacity(2 * bound as usize);
            for v in (1..bound).rev() {
                out.push(Element::int(-(v as i64)));
            }
            for v in 0..bound {
                out.push(Element::int(v as i64));
            }
            out
        }
    }
}

fn random_element(kind: OrderKind, bound: u64, rng: &mut ChaCha8Rng) -> Element {
    match kind {
        OrderKind::FinalDigits | OrderKind::Variant => Element::nat(rng.gen_range(0..bound)),
        OrderKind::SignedFinalDigits => {
            let v = rng.gen_range(0..bound) as i64;
            if rng.gen_bool(0.5) {
                Element::int(-v)
            } else {
                Element::int(v)
            }
        }
    }
}

const KINDS: [OrderKind; 3] = [
    OrderKind::FinalDigits,
    OrderKind::Variant,
    OrderKind::SignedFinalDigits,
];

// ---------------------------------------------------------------------
// orders suite (the numeral invariants ride along: the comparators are
// where digit access and the metric earn their keep)
// ---------------------------------------------------------------------

fn orders_suite(records: &mut Vec<ReportRecord>, max: u64, seed: u64) {
    let suite = "orders";
    let pair_bound = max.min(4096);

    // Trichotomy and antisymmetry, exhaustive below the bound.
    for kind in KINDS {
        let elems = kind_elements(kind, pair_bound);
        let params = format!("kind={},bound={pair_bound}", kind.token());
        let mut bad = None;
        'scan: for (i, x) in elems.iter().enumerate() {
            if compare(kind, x, x).unwrap() != Ordering::Equal {
                bad = Some(format!("{x} not equal to itself"));
                break;
            }
            for y in elems.iter().skip(i + 1) {
                let xy = compare(kind, x, y).unwrap();
                let yx = compare(kind, y, x).unwrap();
                if xy == Ordering::Equal || yx != xy.reverse() {
                    bad = Some(format!("({x},{y}) compared {xy:?}/{yx:?}"));
                    break 'scan;
                }
            }
        }
        check(records, suite, "trichotomy", params, bad.map_or(Ok(()), Err));
    }

    // Transitivity on seeded triples.
    for kind in KINDS {
        let samples = (pair_bound * 25).clamp(1_000, 100_000);
        let mut rng = rng_for(seed, 0x01 + kind.token().len() as u64);
        let params = format!("kind={},samples={samples},seed={seed}", kind.token());
        let mut bad = None;
        for _ in 0..samples {
            let (x, y, z) = (
                random_element(kind, max, &mut rng),
                random_element(kind, max, &mut rng),
                random_element(kind, max, &mut rng),
            );
            let (xy, yz, xz) = (
                compare(kind, &x, &y).unwrap(),
                compare(kind, &y, &z).unwrap(),
                compare(kind, &x, &z).unwrap(),
            );
            if xy == yz && xy != Ordering::Equal && xz != xy {
                bad = Some(format!("({x},{y},{z}) broke transitivity"));
                break;
            }
        }
        check(records, suite, "transitivity", params, bad.map_or(Ok(()), Err));
    }

    // Rank oracles order-agree with the comparators. Sorting by the
    // comparator and demanding strictly increasing ranks settles every
    // pair at once: two total orders agree everywhere exactly when one
    // sorts the other monotonically.
    let rank_bound = max.min(1 << 14);
    for kind in KINDS {
        let params = format!("kind={},bound={rank_bound}", kind.token());
        let mut elems = kind_elements(kind, rank_bound);
        elems.sort_by(|a, b| compare(kind, a, b).unwrap());
        let rank_of = |e: &Element| -> Rational {
            match (kind, e) {
                (OrderKind::FinalDigits, Element::Nat(n)) => rank3(n),
                (OrderKind::Variant, Element::Nat(n)) => rankv(n),
                (OrderKind::SignedFinalDigits, Element::Int(x)) => ranks(x),
                _ => unreachable!("kind and carrier always match here"),
            }
        };
        let mut bad = None;
        for pair in elems.windows(2) {
            if rank_of(&pair[0]) >= rank_of(&pair[1]) {
                bad = Some(format!("ranks out of order at ({},{})", pair[0], pair[1]));
                break;
            }
        }
        check(records, suite, "rank-agreement", params, bad.map_or(Ok(()), Err));
    }

    // Fixed comparisons that pin the end-of-digits rule.
    for (a, b) in [(2u64, 0u64), (0, 1), (5, 1), (1, 3)] {
        let outcome = if fd_cmp(&Numeral::from_u64(a), &Numeral::from_u64(b)) == Ordering::Less {
            Ok(())
        } else {
            Err(format!("{a} is not below {b}"))
        };
        check(records, suite, "fd-frozen", format!("a={a},b={b}"), outcome);
    }

    // Fixed betweenness values.
    let between_cases: [(OrderKind, Element, Element, Element); 4] = [
        (OrderKind::FinalDigits, Element::nat(2), Element::nat(0), Element::nat(6)),
        (OrderKind::FinalDigits, Element::nat(0), Element::nat(1), Element::nat(5)),
        (OrderKind::Variant, Element::nat(0), Element::nat(1), Element::nat(2)),
        (OrderKind::SignedFinalDigits, Element::int(-1), Element::int(1), Element::int(0)),
    ];
    for (kind, a, b, expected) in between_cases {
        let params = format!("kind={},a={a},b={b}", kind.token());
        let got = between(kind, &a, &b).unwrap();
        let outcome = if got == expected {
            Ok(())
        } else {
            Err(format!("between gave {got}, expected {expected}"))
        };
        check(records, suite, "between-frozen", params, outcome);
    }

    // Betweenness is strict and minimal on seeded pairs.
    for kind in KINDS {
        let mut rng = rng_for(seed, 0x02 + kind.token().len() as u64);
        let params = format!("kind={},samples=256,seed={seed}", kind.token());
        let mut bad = None;
        for _ in 0..256 {
            let x = random_element(kind, max, &mut rng);
            let y = random_element(kind, max, &mut rng);
            if x == y {
                continue;
            }
            let (lo, hi) = if compare(kind, &x, &y).unwrap() == Ordering::Less {
                (&x, &y)
            } else {
                (&y, &x)
            };
            let m = between(kind, lo, hi).unwrap();
            if compare(kind, lo, &m).unwrap() != Ordering::Less
                || compare(kind, &m, hi).unwrap() != Ordering::Less
            {
                bad = Some(format!("between({lo},{hi}) = {m} is not strictly inside"));
                break;
            }
        }
        check(records, suite, "between-strict", params, bad.map_or(Ok(()), Err));
    }

    // Endlessness witnesses. The variant order alone has a least element.
    for kind in KINDS {
        let mut rng = rng_for(seed, 0x03 + kind.token().len() as u64);
        let params = format!("kind={},samples=64,seed={seed}", kind.token());
        let mut bad = None;
        for _ in 0..64 {
            let x = random_element(kind, max, &mut rng);
            let (below, above) = unbounded_witnesses(kind, &x).unwrap();
            let below_ok = match &below {
                Some(b) => compare(kind, b, &x).unwrap() == Ordering::Less,
                None => kind == OrderKind::Variant && x == Element::nat(0),
            };
            if !below_ok || compare(kind, &x, &above).unwrap() != Ordering::Less {
                bad = Some(format!("witnesses for {x}: {below:?}, {above}"));
                break;
            }
        }
        check(records, suite, "unbounded-witnesses", params, bad.map_or(Ok(()), Err));
    }

    // Numeral plumbing: suffix residues and the 2-adic metric.
    {
        let mut rng = rng_for(seed, 0x04);
        let mut bad = None;
        for _ in 0..512 {
            let v = rng.gen_range(0..max);
            let k = rng.gen_range(1..=16u64);
            let n = Numeral::from_u64(v);
            let suffix_value = n.suffix(k).value().to_u64().unwrap();
            if suffix_value != v % (1u64 << k.min(63)) {
                bad = Some(format!("suffix({v},{k}) valued {suffix_value}"));
                break;
            }
        }
        check(
            records,
            suite,
            "suffix-residue",
            format!("samples=512,max={max},seed={seed}"),
            bad.map_or(Ok(()), Err),
        );
    }
    {
        let mut rng = rng_for(seed, 0x05);
        let mut bad = None;
        for _ in 0..512 {
            let x = Numeral::from_u64(rng.gen_range(0..max));
            let y = Numeral::from_u64(rng.gen_range(0..max));
            let z = Numeral::from_u64(rng.gen_range(0..max));
            let (dxy, dyz, dxz) = (metric2(&x, &y), metric2(&y, &z), metric2(&x, &z));
            let strong_triangle = dxz <= dxy.clone().max(dyz.clone());
            let identity = (dxy == Rational::new(BigInt::from(0), BigInt::from(1))) == (x == y);
            if !strong_triangle || !identity {
                bad = Some(format!("metric at ({x},{y},{z}): {dxy}, {dyz}, {dxz}"));
                break;
            }
        }
        check(
            records,
            suite,
            "metric-ultrametric",
            format!("samples=512,max={max},seed={seed}"),
            bad.map_or(Ok(()), Err),
        );
    }
}

// ---------------------------------------------------------------------
// topology suite
// ---------------------------------------------------------------------

/// All digit strings of length 1..=len_max, via the values they encode.
fn all_suffixes(len_max: u64) -> Vec<DigitString> {
    let mut out = Vec::new();
    for len in 1..=len_max {
        for v in 0..(1u64 << len) {
            out.push(Numeral::from_u64(v).suffix(len));
        }
    }
    out
}

/// Bitset of class membership over `0..universe`.
fn membership_bits(open: &BasicOpen, elements: &[Element]) -> Vec<u64> {
    let mut bits = vec![0u64; elements.len().div_ceil(64)];
    for (i, e) in elements.iter().enumerate() {
        if member(open, e).expect("natural carrier") {
            bits[i / 64] |= 1 << (i % 64);
        }
    }
    bits
}

fn topology_suite(records: &mut Vec<ReportRecord>, max: u64, seed: u64) {
    let suite = "topology";
    let universe = max.min(1 << 16);
    let elements: Vec<Element> = (0..universe).map(Element::nat).collect();
    let len_max = 8u64.min(universe.ilog2() as u64);
    let suffixes = all_suffixes(len_max);

    // Membership is exactly the residue test; build bitsets as we go so
    // the intersection rule below can be checked pointwise everywhere.
    let mut bitsets = Vec::with_capacity(suffixes.len());
    {
        let mut bad = None;
        for s in &suffixes {
            let open = BasicOpen::SuffixClass(s.clone());
            let modulus = 1u64 << s.len();
            let residue = s.value().to_u64().unwrap() % modulus;
            let bits = membership_bits(&open, &elements);
            if bad.is_none() {
                for v in 0..universe {
                    let claimed = bits[(v / 64) as usize] >> (v % 64) & 1 == 1;
                    if claimed != (v % modulus == residue) {
                        bad = Some(format!("string {s}, element {v}"));
                        break;
                    }
                }
            }
            bitsets.push(bits);
        }
        check(
            records,
            suite,
            "suffix-membership-residue",
            format!("len_max={len_max},universe={universe}"),
            bad.map_or(Ok(()), Err),
        );
    }

    // The intersection rule, pointwise on the whole universe for every
    // pair of strings. The meet of two length-bounded strings is empty or
    // another string in the enumeration, so its membership bitset is a
    // lookup: index of a length-L string valued v is (2^L - 2) + v.
    {
        let zeros = vec![0u64; elements.len().div_ceil(64)];
        let index_of = |d: &DigitString| -> usize {
            ((1u64 << d.len()) - 2 + d.value().to_u64().unwrap()) as usize
        };
        let mut bad = None;
        'pairs: for (i, s) in suffixes.iter().enumerate() {
            for (j, t) in suffixes.iter().enumerate() {
                let meet = intersect_suffix(s, t);
                let got = match &meet {
                    BasicOpen::Empty => &zeros,
                    BasicOpen::SuffixClass(d) if d.len() <= len_max => &bitsets[index_of(d)],
                    other => {
                        bad = Some(format!("strings {s} and {t} gave {other}"));
                        break 'pairs;
                    }
                };
                let agrees = bitsets[i]
                    .iter()
                    .zip(&bitsets[j])
                    .zip(got)
                    .all(|((a, b), g)| a & b == *g);
                if !agrees {
                    bad = Some(format!("strings {s} and {t} gave {meet}"));
                    break 'pairs;
                }
            }
        }
        check(
            records,
            suite,
            "suffix-intersection",
            format!("len_max={len_max},universe={universe}"),
            bad.map_or(Ok(()), Err),
        );
    }

    // Each class is one half-open interval of the variant order.
    {
        let mut bad = None;
        for (i, s) in suffixes.iter().enumerate() {
            let interval = suffix_class_as_right_open(s);
            let bits = membership_bits(&interval, &elements);
            if bits != bitsets[i] {
                bad = Some(format!("string {s} gave {interval}"));
                break;
            }
        }
        check(
            records,
            suite,
            "right-open-characterization",
            format!("len_max={len_max},universe={universe}"),
            bad.map_or(Ok(()), Err),
        );
    }

    // Fixed half-open forms.
    for (s, expected) in [
        ("110", "rightopen(variant,6,1)"),
        ("00110", "rightopen(variant,6,22)"),
        ("1", "rightopen(variant,1,inf)"),
    ] {
        let got = suffix_class_as_right_open(&s.parse().unwrap()).to_string();
        let outcome = if got == expected {
            Ok(())
        } else {
            Err(format!("got {got}, expected {expected}"))
        };
        check(records, suite, "right-open-frozen", format!("s={s}"), outcome);
    }

    // Canonical neighborhoods contain their point.
    {
        let specs: Vec<TopologySpec> = vec![
            TopologySpec::Discrete,
            TopologySpec::Indiscrete,
            TopologySpec::FinalDigits,
            TopologySpec::OrderTopology(OrderKind::FinalDigits),
            TopologySpec::OrderTopology(OrderKind::Variant),
            TopologySpec::RightOpenTopology(OrderKind::Variant),
            TopologySpec::InitialSegments,
            TopologySpec::FinalSegments,
            TopologySpec::restrict(TopologySpec::Discrete, 17),
            TopologySpec::isolate_below(TopologySpec::FinalDigits, 17),
            TopologySpec::Blend(
                Box::new(TopologySpec::Discrete),
                Box::new(TopologySpec::FinalDigits),
                Numeral::from_u64(17),
            ),
            TopologySpec::Union(
                Box::new(TopologySpec::InitialSegments),
                Box::new(TopologySpec::FinalSegments),
            ),
            TopologySpec::AugmentInitial(Box::new(TopologySpec::FinalDigits)),
            TopologySpec::AugmentFinal(Box::new(TopologySpec::FinalDigits)),
        ];
        let mut rng = rng_for(seed, 0x10);
        let mut bad = None;
        'specs: for spec in &specs {
            for _ in 0..48 {
                let x = Element::nat(rng.gen_range(0..universe));
                let nbhd = basic_nbhd(spec, &x, None).unwrap();
                if !member(&nbhd, &x).unwrap() {
                    bad = Some(format!("{spec} at {x} gave {nbhd}"));
                    break 'specs;
                }
            }
        }
        // Signed topologies at signed points.
        if bad.is_none() {
            for spec in [
                TopologySpec::SignedFinalDigits,
                TopologySpec::OrderTopology(OrderKind::SignedFinalDigits),
            ] {
                for _ in 0..48 {
                    let x = random_element(OrderKind::SignedFinalDigits, universe, &mut rng);
                    let nbhd = basic_nbhd(&spec, &x, None).unwrap();
                    if !member(&nbhd, &x).unwrap() {
                        bad = Some(format!("{spec} at {x} gave {nbhd}"));
                        break;
                    }
                }
            }
        }
        check(
            records,
            suite,
            "neighborhood-contains-point",
            format!("samples=48,seed={seed}"),
            bad.map_or(Ok(()), Err),
        );
    }

    // Restricting the discrete topology to [0,17]: points inside keep
    // their singletons, points outside see only the whole space.
    {
        let spec = TopologySpec::restrict(TopologySpec::Discrete, 17);
        let inside = basic_nbhd(&spec, &Element::nat(15), None).unwrap();
        let outside = basic_nbhd(&spec, &Element::nat(30), None).unwrap();
        let outcome = if inside == BasicOpen::singleton_nat(15)
            && matches!(outside, BasicOpen::WholeSpace(_))
        {
            Ok(())
        } else {
            Err(format!("got {inside} and {outside}"))
        };
        check(records, suite, "restrict-neighborhoods", "bound=17".into(), outcome);
    }

    // Isolation around a blend seam: below it, every point is isolated;
    // above it, the digit topology shows through.
    {
        let spec = TopologySpec::isolate_below(TopologySpec::FinalDigits, 17);
        let mut bad = None;
        for v in 0..=17u64 {
            match is_isolated(&spec, &Element::nat(v), 32).unwrap() {
                Isolation::Isolated(_) => {}
                other => {
                    bad = Some(format!("{v} reported {other:?}"));
                    break;
                }
            }
        }
        if bad.is_none() {
            for v in [18u64, 30, 100, 1000] {
                match is_isolated(&spec, &Element::nat(v), 32).unwrap() {
                    Isolation::NotIsolated => {}
                    other => {
                        bad = Some(format!("{v} reported {other:?}"));
                        break;
                    }
                }
            }
        }
        check(records, suite, "isolate-below-seam", "bound=17".into(), bad.map_or(Ok(()), Err));
    }

    // Adding initial segments to the digit topology isolates everything.
    {
        let spec = TopologySpec::AugmentInitial(Box::new(TopologySpec::FinalDigits));
        let mut rng = rng_for(seed, 0x11);
        let mut bad = None;
        for _ in 0..128 {
            let v = rng.gen_range(0..universe);
            if !is_isolated(&spec, &Element::nat(v), 64).unwrap().is_isolated() {
                bad = Some(format!("{v} not isolated"));
                break;
            }
        }
        check(
            records,
            suite,
            "augment-initial-isolates",
            format!("samples=128,seed={seed}"),
            bad.map_or(Ok(()), Err),
        );
    }

    // Structural non-isolation: residue classes and dense orders have no
    // singleton opens; initial segments isolate only 0.
    {
        let mut rng = rng_for(seed, 0x12);
        let mut bad = None;
        for spec in [
            TopologySpec::FinalDigits,
            TopologySpec::OrderTopology(OrderKind::FinalDigits),
            TopologySpec::OrderTopology(OrderKind::Variant),
            TopologySpec::FinalSegments,
        ] {
            for _ in 0..32 {
                let x = Element::nat(rng.gen_range(0..universe));
                if is_isolated(&spec, &x, 24).unwrap() != Isolation::NotIsolated {
                    bad = Some(format!("{spec} at {x}"));
                    break;
                }
            }
        }
        if bad.is_none() {
            let zero = is_isolated(&TopologySpec::InitialSegments, &Element::nat(0), 8).unwrap();
            let one = is_isolated(&TopologySpec::InitialSegments, &Element::nat(1), 8).unwrap();
            if !zero.is_isolated() || one != Isolation::NotIsolated {
                bad = Some("initial segments must isolate 0 and nothing else".into());
            }
        }
        check(
            records,
            suite,
            "structural-isolation",
            format!("samples=32,seed={seed}"),
            bad.map_or(Ok(()), Err),
        );
    }

    // The textual grammar round-trips.
    {
        let opens = [
            "empty",
            "all:nat",
            "suffix(00110)",
            "suffix-(110)",
            "zerotail(3)",
            "interval(fd,2,0)",
            "rightopen(variant,6,22)",
            "[0,17]",
            "[18,inf)",
            "{15}",
            "and(suffix(110),[0,17])",
            "or(suffix(0),{15})",
        ];
        let specs = [
            "discrete",
            "fd",
            "order(variant)",
            "restrict(discrete,[0,17])",
            "blend(discrete,fd,[0,17])",
            "isolatebelow(fd,17)",
            "union(initialsegments,finalsegments)",
            "augmentinitial(fd)",
        ];
        let mut bad = None;
        for s in opens {
            let parsed = text::parse_open(s).unwrap();
            if parsed.to_string() != s {
                bad = Some(format!("open {s} rendered {parsed}"));
                break;
            }
        }
        if bad.is_none() {
            for s in specs {
                let parsed = text::parse_spec(s).unwrap();
                if parsed.to_string() != s {
                    bad = Some(format!("spec {s} rendered {parsed}"));
                    break;
                }
            }
        }
        check(records, suite, "text-roundtrip", format!("cases={}", 20), bad.map_or(Ok(()), Err));
    }
}

// ---------------------------------------------------------------------
// continuity suite
// ---------------------------------------------------------------------

fn continuity_suite(records: &mut Vec<ReportRecord>, max: u64, seed: u64) {
    let suite = "continuity";
    let check_bound = max.min(1 << 12);

    // Residues of sums, products and differences are functions of input
    // residues — the digit-counting modulus.
    {
        let k_max = 10u64.min(63 - max.leading_zeros() as u64).max(1).min(10);
        let mut bad = None;
        for op in [Operation::Add, Operation::Mul, Operation::Sub] {
            for k in 1..=k_max {
                if !residues_determine_output(&op, k) {
                    bad = Some(format!("{op} at k={k}"));
                    break;
                }
            }
        }
        check(
            records,
            suite,
            "digit-modulus",
            format!("k_max={k_max}"),
            bad.map_or(Ok(()), Err),
        );
    }

    // Digit witnesses are sound pointwise. The check bound scales with
    // the witness resolution so each residue class contributes a handful
    // of members rather than thousands.
    {
        let mut rng = rng_for(seed, 0x20);
        let mut bad = None;
        for _ in 0..24 {
            let x = Numeral::from_u64(rng.gen_range(0..max));
            let y = Numeral::from_u64(rng.gen_range(0..max));
            let len = rng.gen_range(1..=6u64);
            let bound = check_bound.min((1 << len) * 16);
            for op in [Operation::Add, Operation::Mul] {
                let w = witness_final_digits(&op, &x, &y, len).unwrap();
                let outcome = check_pointwise(&w, bound).unwrap();
                if !outcome.holds() {
                    bad = Some(format!("{op} at ({x},{y}), len {len}: {:?}", outcome.counterexample));
                    break;
                }
            }
            if x.value() >= y.value() {
                let w = witness_final_digits(&Operation::Sub, &x, &y, len).unwrap();
                let outcome = check_pointwise(&w, bound).unwrap();
                if !outcome.holds() {
                    bad = Some(format!("sub at ({x},{y}), len {len}: {:?}", outcome.counterexample));
                }
            }
            if bad.is_some() {
                break;
            }
        }
        check(
            records,
            suite,
            "witness-final-digits",
            format!("samples=24,max={max},seed={seed}"),
            bad.map_or(Ok(()), Err),
        );
    }

    {
        let mut rng = rng_for(seed, 0x21);
        let mut bad = None;
        for _ in 0..24 {
            let k = Numeral::from_u64(rng.gen_range(0..max));
            let x = Numeral::from_u64(rng.gen_range(0..max));
            let len = rng.gen_range(1..=6u64);
            let bound = check_bound.min((1 << len) * 32);
            let w = witness_translate(&k, &x, len).unwrap();
            let outcome = check_pointwise(&w, bound).unwrap();
            if !outcome.holds() {
                bad = Some(format!("translate({k}) at {x}, len {len}"));
                break;
            }
        }
        check(
            records,
            suite,
            "witness-translate",
            format!("samples=24,max={max},seed={seed}"),
            bad.map_or(Ok(()), Err),
        );
    }

    // Segment witnesses: monotone operations respect segment targets.
    {
        let mut rng = rng_for(seed, 0x22);
        let mut bad = None;
        for _ in 0..24 {
            let x = Numeral::from_u64(rng.gen_range(0..64));
            let y = Numeral::from_u64(rng.gen_range(0..64));
            for op in [Operation::Add, Operation::Mul] {
                let image = match op {
                    Operation::Add => x.add(&y),
                    _ => x.mul(&y),
                };
                let above = image.add(&Numeral::from_u64(rng.gen_range(0..16)));
                let w = witness_segment(&op, &TopologySpec::InitialSegments, &x, &y, &above).unwrap();
                let outcome = check_pointwise(&w, check_bound.min(512)).unwrap();
                if !outcome.holds() {
                    bad = Some(format!("initial {op} at ({x},{y})"));
                    break;
                }
                if let Ok(below) = image.checked_sub(&Numeral::from_u64(rng.gen_range(0..16))) {
                    let w =
                        witness_segment(&op, &TopologySpec::FinalSegments, &x, &y, &below).unwrap();
                    let outcome = check_pointwise(&w, check_bound.min(512)).unwrap();
                    if !outcome.holds() {
                        bad = Some(format!("final {op} at ({x},{y})"));
                        break;
                    }
                }
            }
            if bad.is_some() {
                break;
            }
        }
        check(
            records,
            suite,
            "witness-segment",
            format!("samples=24,seed={seed}"),
            bad.map_or(Ok(()), Err),
        );
    }

    // Blend witnesses across the three seam cases.
    {
        let specs: Vec<(&str, TopologySpec)> = vec![
            ("isolatebelow", TopologySpec::isolate_below(TopologySpec::FinalDigits, 17)),
            ("restrict", TopologySpec::restrict(TopologySpec::FinalDigits, 17)),
            (
                "blend",
                TopologySpec::Blend(
                    Box::new(TopologySpec::Discrete),
                    Box::new(TopologySpec::FinalDigits),
                    Numeral::from_u64(17),
                ),
            ),
        ];
        let mut rng = rng_for(seed, 0x23);
        let mut bad = None;
        'outer: for (label, spec) in &specs {
            for _ in 0..16 {
                let x = Numeral::from_u64(rng.gen_range(0..24));
                let y = Numeral::from_u64(rng.gen_range(0..24));
                for op in [Operation::Add, Operation::Mul] {
                    let image = match op {
                        Operation::Add => x.add(&y),
                        _ => x.mul(&y),
                    };
                    let target = if image.value() <= Numeral::from_u64(17).value() {
                        BasicOpen::Singleton(Element::Nat(image.clone()))
                    } else {
                        BasicOpen::SuffixClass(image.suffix(3))
                    };
                    let target = match (label, &target) {
                        // The restricted topology has no small opens above
                        // the segment: the only target is the whole space.
                        (&"restrict", BasicOpen::SuffixClass(_)) => {
                            BasicOpen::WholeSpace(crate::orders::Carrier::Naturals)
                        }
                        _ => target,
                    };
                    match witness_blend(&op, spec, &x, &y, &target) {
                        Ok(w) => {
                            let outcome = check_pointwise(&w, check_bound.min(512)).unwrap();
                            if !outcome.holds() {
                                bad = Some(format!(
                                    "{label} {op} at ({x},{y}): {:?}",
                                    outcome.counterexample
                                ));
                                break 'outer;
                            }
                        }
                        Err(e) => {
                            bad = Some(format!("{label} {op} at ({x},{y}) refused: {e}"));
                            break 'outer;
                        }
                    }
                }
            }
        }
        check(
            records,
            suite,
            "witness-blend",
            format!("samples=16,seed={seed}"),
            bad.map_or(Ok(()), Err),
        );
    }

    // Pairing witnesses (from the embedding module) are sound.
    {
        let mut rng = rng_for(seed, 0x24);
        let mut bad = None;
        for _ in 0..16 {
            let n = Numeral::from_u64(rng.gen_range(0..64));
            let m = Numeral::from_u64(rng.gen_range(0..64));
            let len = rng.gen_range(1..=5u64);
            let w = witness_pairing(&n, &m, len);
            let outcome = check_pointwise(&w, check_bound.min((1 << len) * 16)).unwrap();
            if !outcome.holds() {
                bad = Some(format!("pairing at ({n},{m}), len {len}"));
                break;
            }
        }
        check(
            records,
            suite,
            "witness-pairing",
            format!("samples=16,seed={seed}"),
            bad.map_or(Ok(()), Err),
        );
    }

    // The two fixed refutations on the restricted topology. Every
    // neighborhood of the point above the seam is the whole space in
    // disguise, so any containing open the caller presents gets escaped.
    for (case_label, restrict_case, point) in [
        ("halving-at-30", RestrictCase::HalvingAt30, 30u64),
        ("predecessor-at-18", RestrictCase::PredecessorAt18, 18u64),
    ] {
        let witness = refute_restrict17(restrict_case);
        let mut rng = rng_for(seed, 0x25 ^ point);
        let mut bad = None;
        let mut neighborhoods: Vec<BasicOpen> =
            vec![BasicOpen::WholeSpace(crate::orders::Carrier::Naturals)];
        for _ in 0..20 {
            match rng.gen_range(0..3u8) {
                0 => neighborhoods.push(BasicOpen::FinalSegment(Numeral::from_u64(
                    rng.gen_range(0..=18),
                ))),
                1 => neighborhoods.push(BasicOpen::InitialSegment(Numeral::from_u64(
                    rng.gen_range(point..point + 64),
                ))),
                _ => neighborhoods.push(BasicOpen::SuffixClass(
                    Numeral::from_u64(point).suffix(rng.gen_range(1..=4u64)),
                )),
            }
        }
        for nbhd in &neighborhoods {
            match witness.escape(nbhd).and_then(|e| validate_escape(&witness, nbhd, &e)) {
                Ok(()) => {}
                Err(e) => {
                    bad = Some(format!("neighborhood {nbhd}: {e}"));
                    break;
                }
            }
        }
        check(
            records,
            suite,
            "refute_restrict17",
            format!("case={case_label},neighborhoods={},seed={seed}", neighborhoods.len()),
            bad.map_or(Ok(()), Err),
        );
    }

    // The successor escapes every variant-order interval around 1.
    {
        let mut rng = rng_for(seed, 0x26);
        let mut bad = None;
        for i in 0..20 {
            let lo = Element::nat(2 * rng.gen_range(0..max / 2));
            let hi = Element::nat(2 * rng.gen_range(1..max / 2) + 1);
            let nbhd = BasicOpen::OrderInterval {
                kind: OrderKind::Variant,
                lo: Some(lo),
                hi: Some(hi),
            };
            let witness = match refute_variant_successor(&nbhd) {
                Ok(w) => w,
                Err(e) => {
                    bad = Some(format!("interval {i} ({nbhd}): {e}"));
                    break;
                }
            };
            let escape = witness.escape(&nbhd).unwrap();
            if let Err(e) = validate_escape(&witness, &nbhd, &escape) {
                bad = Some(format!("interval {i} ({nbhd}): {e}"));
                break;
            }
        }
        check(
            records,
            suite,
            "refute-variant-successor",
            format!("neighborhoods=20,seed={seed}"),
            bad.map_or(Ok(()), Err),
        );
    }
}

// ---------------------------------------------------------------------
// embedding suite
// ---------------------------------------------------------------------

fn embedding_suite(records: &mut Vec<ReportRecord>, max: u64, seed: u64) {
    let suite = "embedding";

    // Enumeration is a two-way bijection on a prefix.
    {
        let positions = max.min(2000);
        let mut bad = None;
        let mut seen = BTreeSet::new();
        for i in 0..positions {
            let q = rational_at_u64(i);
            if position_of(&q).to_u64() != Some(i) {
                bad = Some(format!("position {i} round-tripped wrong"));
                break;
            }
            if !seen.insert(q) {
                bad = Some(format!("duplicate value at position {i}"));
                break;
            }
        }
        check(
            records,
            suite,
            "enumeration-roundtrip",
            format!("positions={positions}"),
            bad.map_or(Ok(()), Err),
        );
    }

    let steps = (2 * max).clamp(64, 600);
    let mut state = BackAndForthState::new();
    state.advance_to(steps).expect("desk-scale shuttle run");

    // Order isomorphism along the sorted assignment list.
    {
        let mut bad = None;
        for pair in state.assignments().windows(2) {
            if fd_cmp(&pair[0].0, &pair[1].0) != Ordering::Less || pair[0].1 >= pair[1].1 {
                bad = Some(format!("{} and {} out of order", pair[0].0, pair[1].0));
                break;
            }
        }
        check(
            records,
            suite,
            "order-isomorphism",
            format!("steps={steps}"),
            bad.map_or(Ok(()), Err),
        );
    }

    // A shorter independent run is a verbatim prefix.
    {
        let mut shorter = BackAndForthState::new();
        shorter.advance_to(steps / 2).expect("desk-scale shuttle run");
        let outcome = if shorter.log() == &state.log()[..(steps / 2) as usize] {
            Ok(())
        } else {
            Err("prefix diverged".to_string())
        };
        check(
            records,
            suite,
            "prefix-stability",
            format!("steps={steps},prefix={}", steps / 2),
            outcome,
        );
    }

    // Progress: naturals and enumeration positions are hit on schedule.
    {
        let mut bad = None;
        let horizon = (steps / 2).saturating_sub(1);
        for v in 0..horizon {
            if !state.log()[..=(2 * v) as usize]
                .iter()
                .any(|e| e.natural == Numeral::from_u64(v))
            {
                bad = Some(format!("natural {v} late"));
                break;
            }
            let q = rational_at_u64(v);
            if !state.log()[..=(2 * v + 1) as usize].iter().any(|e| e.rational == q) {
                bad = Some(format!("position {v} late"));
                break;
            }
        }
        check(
            records,
            suite,
            "progress",
            format!("steps={steps},horizon={horizon}"),
            bad.map_or(Ok(()), Err),
        );
    }

    // Round trips both ways.
    {
        let trips = max.min(300);
        let mut bad = None;
        for v in 0..trips {
            let n = Numeral::from_u64(v);
            let q = state.embed(&n).unwrap();
            if state.inverse(&q).unwrap() != n {
                bad = Some(format!("natural {v}"));
                break;
            }
        }
        if bad.is_none() {
            for j in 0..trips {
                let q = rational_at_u64(j);
                let n = state.inverse(&q).unwrap();
                if state.embed(&n).unwrap() != q {
                    bad = Some(format!("position {j}"));
                    break;
                }
            }
        }
        check(records, suite, "round-trip", format!("trips={trips}"), bad.map_or(Ok(()), Err));
    }

    // Transported arithmetic: identities, commutativity, and sampled
    // associativity/distributivity — the image is arithmetic in disguise.
    {
        let mut rng = rng_for(seed, 0x30);
        let mut bad = None;
        let zero = state.embed(&Numeral::zero()).unwrap();
        let one = state.embed(&Numeral::one()).unwrap();
        for _ in 0..32 {
            let a = Numeral::from_u64(rng.gen_range(0..64));
            let b = Numeral::from_u64(rng.gen_range(0..64));
            let c = Numeral::from_u64(rng.gen_range(0..8));
            let (qa, qb, qc) = (
                state.embed(&a).unwrap(),
                state.embed(&b).unwrap(),
                state.embed(&c).unwrap(),
            );
            let ab = transported_add(&qa, &qb, &mut state).unwrap();
            let checks = [
                transported_add(&qa, &zero, &mut state).unwrap() == qa,
                transported_mul(&qa, &one, &mut state).unwrap() == qa,
                transported_add(&qb, &qa, &mut state).unwrap() == ab,
                transported_add(&ab, &qc, &mut state).unwrap()
                    == transported_add(&qa, &transported_add(&qb, &qc, &mut state).unwrap(), &mut state)
                        .unwrap(),
                transported_mul(&qc, &ab, &mut state).unwrap()
                    == transported_add(
                        &transported_mul(&qc, &qa, &mut state).unwrap(),
                        &transported_mul(&qc, &qb, &mut state).unwrap(),
                        &mut state,
                    )
                    .unwrap(),
            ];
            if checks.iter().any(|ok| !ok) {
                bad = Some(format!("laws failed at ({a},{b},{c})"));
                break;
            }
        }
        check(
            records,
            suite,
            "transported-arithmetic",
            format!("samples=48,seed={seed}"),
            bad.map_or(Ok(()), Err),
        );
    }

    // Pairing: injectivity on a grid, evenness, and attainment.
    {
        let side = max.min(200);
        let mut seen = BTreeSet::new();
        let mut bad = None;
        'grid: for a in 0..side {
            for b in 0..side {
                let v = pair_double(&Numeral::from_u64(a), &Numeral::from_u64(b));
                if v.digit_padded(1) {
                    bad = Some(format!("pair_double({a},{b}) is odd"));
                    break 'grid;
                }
                if !seen.insert(v.clone()) {
                    bad = Some(format!("collision at ({a},{b})"));
                    break 'grid;
                }
            }
        }
        check(
            records,
            suite,
            "pair-double-injective",
            format!("grid={side}x{side}"),
            bad.map_or(Ok(()), Err),
        );
    }
    {
        let evens = max.min(2000);
        let mut bad = None;
        for e in (0..evens).step_by(2) {
            let (a, b) = unpair_cantor(&Numeral::from_u64(e / 2));
            if pair_double(&a, &b) != Numeral::from_u64(e) {
                bad = Some(format!("even {e} not attained"));
                break;
            }
        }
        check(
            records,
            suite,
            "pair-double-onto-evens",
            format!("evens={evens}"),
            bad.map_or(Ok(()), Err),
        );
    }
}

// ---------------------------------------------------------------------
// probes
// ---------------------------------------------------------------------

/// Run a bounded evidence probe. Probe records use pass for bounded facts
/// that were verified outright and inconclusive for open-question
/// evidence; they never contain failures and must not gate a run.
pub fn run_probe(claim: ProbeClaim, bound: u64, seed: u64) -> Vec<ReportRecord> {
    let mut records = Vec::new();
    match claim {
        ProbeClaim::OrderTopologyEquality => order_topology_probe(&mut records, bound),
        ProbeClaim::SignedAddContinuity => signed_add_probe(&mut records, bound, seed),
        ProbeClaim::TransportedContinuity => transported_probe(&mut records, bound, seed),
    }
    sort_records(&mut records);
    records
}

/// Survey every suffix class of length up to 8 against the order
/// topology: the open question is whether the digit topology and the
/// comparator's order topology coincide, and the convention members of
/// classes with leading zeros are where they pull apart.
fn order_topology_probe(records: &mut Vec<ReportRecord>, bound: u64) {
    let suite = "probe-order-topology";
    let len_max = 8u64.min(bound.saturating_sub(1)).max(1);
    for s in all_suffixes(len_max) {
        let survey = probe_order_topology(&s, bound);
        let evidence = format!(
            "members={},convex={},position={},sandwich={},residue={}",
            survey.member_count,
            survey.convex_on_truncation,
            survey.convention_position.token(),
            survey.sandwich_holds,
            survey.residue_matches,
        );
        records.push(ReportRecord::inconclusive(
            suite,
            "class-survey",
            format!("s={s},bits={}", survey.truncation_bits),
            Some(evidence),
        ));
    }
}

/// Probe the claim that sign plus final digits determine the sign and
/// final digits of a sum. The mixed-sign family starting at (1, -2) is
/// where candidate neighborhoods keep leaking.
fn signed_add_probe(records: &mut Vec<ReportRecord>, bound: u64, seed: u64) {
    let suite = "probe-signed-add";
    for (x, y) in [(1i64, -2i64), (9, -2), (1, -4)] {
        let point = [Element::int(x), Element::int(y)];
        let image = Operation::Add.apply(&point).expect("total on integers");
        let image_int = image.as_int().expect("integer image");
        let polarity = match image_int.sign() {
            crate::numerals::Sign::Negative => crate::topology::Polarity::Negative,
            _ => crate::topology::Polarity::Positive,
        };
        let target = BasicOpen::SignedSuffixClass {
            polarity,
            suffix: image_int.magnitude().suffix(1),
        };
        let params = format!("x={x},y={y},bound={bound},seed={seed}");
        match probe_continuity(
            &Operation::Add,
            &TopologySpec::SignedFinalDigits,
            &point,
            &target,
            bound,
            128,
            seed,
        ) {
            Ok(ProbeOutcome::Witness(w)) => {
                let nbhds: Vec<String> =
                    w.neighborhoods.iter().map(|n| n.to_string()).collect();
                records.push(ReportRecord::inconclusive(
                    suite,
                    "sampled-witness",
                    params,
                    Some(format!("neighborhoods survived sampling: {}", nbhds.join(" x "))),
                ));
            }
            Ok(ProbeOutcome::NoWitnessUpTo { bound, escapes }) => {
                records.push(ReportRecord::inconclusive(
                    suite,
                    "no-witness",
                    params.clone(),
                    Some(format!("resolutions 1..={bound} all leaked")),
                ));
                for (i, escape) in escapes.iter().enumerate() {
                    let inputs: Vec<String> =
                        escape.inputs.iter().map(|e| e.to_string()).collect();
                    records.push(ReportRecord::inconclusive(
                        suite,
                        "escape",
                        format!("x={x},y={y},bound={bound},seed={seed},index={i:02}"),
                        Some(format!("inputs=({}),image={}", inputs.join(","), escape.image)),
                    ));
                }
            }
            Err(e) => {
                records.push(ReportRecord::inconclusive(
                    suite,
                    "probe-error",
                    params,
                    Some(e.to_string()),
                ));
            }
        }
    }
}

/// Probe continuity of transported arithmetic. The shuttle is an order
/// isomorphism, so the rational order topology pulls back to the
/// comparator's order topology on this side; the probe runs there, at
/// sampled points, and reports what the neighborhoods did.
fn transported_probe(records: &mut Vec<ReportRecord>, bound: u64, seed: u64) {
    let suite = "probe-transported";
    let mut rng = rng_for(seed, 0x40);
    let spec = TopologySpec::OrderTopology(OrderKind::FinalDigits);
    for i in 0..4 {
        let x = rng.gen_range(0..40u64);
        let y = rng.gen_range(0..40u64);
        for op in [Operation::Add, Operation::Mul] {
            let point = [Element::nat(x), Element::nat(y)];
            let image = op.apply(&point).expect("total on naturals");
            let target = match basic_nbhd(&spec, &image, Some(bound.min(10))) {
                Ok(t) => t,
                Err(e) => {
                    records.push(ReportRecord::inconclusive(
                        suite,
                        "probe-error",
                        format!("op={op},x={x},y={y},sample={i}"),
                        Some(e.to_string()),
                    ));
                    continue;
                }
            };
            let params = format!("op={op},x={x},y={y},bound={bound},seed={seed},sample={i}");
            match probe_continuity(&op, &spec, &point, &target, bound.min(10), 96, seed ^ i) {
                Ok(ProbeOutcome::Witness(w)) => {
                    let nbhds: Vec<String> =
                        w.neighborhoods.iter().map(|n| n.to_string()).collect();
                    records.push(ReportRecord::inconclusive(
                        suite,
                        "sampled-witness",
                        params,
                        Some(format!(
                            "target {}, neighborhoods survived sampling: {}",
                            w.target,
                            nbhds.join(" x ")
                        )),
                    ));
                }
                Ok(ProbeOutcome::NoWitnessUpTo { bound, escapes }) => {
                    records.push(ReportRecord::inconclusive(
                        suite,
                        "no-witness",
                        params,
                        Some(format!(
                            "target {target}: resolutions 1..={bound} leaked, {} escapes",
                            escapes.len()
                        )),
                    ));
                }
                Err(e) => {
                    records.push(ReportRecord::inconclusive(
                        suite,
                        "probe-error",
                        params,
                        Some(e.to_string()),
                    ));
                }
            }
        }
    }
}
