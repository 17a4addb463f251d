//! Machine-checkable continuity and discontinuity certificates.
//!
//! A [`ContinuityWitness`] asserts that an arithmetic operation maps a
//! product of basic input neighborhoods into a basic target neighborhood of
//! the output, and names the argument (`justification`) that makes the
//! assertion sound. Witnesses are plain data: [`check_pointwise`] replays
//! them against every carrier tuple up to a bound, so a wrong witness is
//! caught by an independent checker rather than trusted.
//!
//! A [`DiscontinuityWitness`] is the dual object: for a fixed operation,
//! point and target it carries a *refuter* which, handed any basic
//! neighborhood of the point, produces an element of that neighborhood
//! whose image misses the target.
//!
//! The bounded, evidence-only probes for genuinely open questions live in
//! [`probe`].

pub mod probe;

use std::fmt;

use thiserror::Error;

use crate::numerals::{Numeral, SignedNumeral};
use crate::orders::{Carrier, Element};
use crate::topology::{member, BasicOpen, TopologyError, TopologySpec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContinuityError {
    #[error("difference {x} - {y} is undefined on the naturals")]
    Underflow { x: String, y: String },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no blend structure to certify against in {0}")]
    UnsupportedSpec(String),
    #[error("cannot read a certifiable shape out of target {0}")]
    UnsupportedTarget(String),
    #[error("target {target} does not contain the image {image}")]
    TargetMisses { target: String, image: String },
    #[error("witnesses disagree on operation or point: {0}")]
    WitnessMismatch(String),
    #[error("no escape element found within {0}")]
    NoEscapeFound(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// An arithmetic operation on a carrier, unary or binary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operation {
    Add,
    Mul,
    /// Partial on the naturals (undefined on underflow), total on integers.
    Sub,
    /// `x ↦ x + k` for a fixed natural `k`.
    Translate(Numeral),
    /// `(n, m) ↦ (n+m)(n+m+1) + 2m`, the even-valued pairing polynomial.
    PairDouble,
    Successor,
    /// `x ↦ x/2`, defined on even numbers only.
    Halving,
    /// `x ↦ x - 1`, undefined at zero.
    Predecessor,
}

impl Operation {
    pub fn arity(&self) -> usize {
        match self {
            Operation::Add | Operation::Mul | Operation::Sub | Operation::PairDouble => 2,
            _ => 1,
        }
    }

    /// Apply the operation; `None` where it is undefined (partial
    /// operations outside their domain, or inputs off the carrier the
    /// operation supports).
    pub fn apply(&self, inputs: &[Element]) -> Option<Element> {
        if inputs.len() != self.arity() {
            return None;
        }
        let all_nat = inputs.iter().all(|e| e.carrier() == Carrier::Naturals);
        let all_int = inputs.iter().all(|e| e.carrier() == Carrier::Integers);
        if all_nat {
            let nat = |i: usize| inputs[i].as_nat().expect("checked natural");
            return match self {
                Operation::Add => Some(Element::Nat(nat(0).add(nat(1)))),
                Operation::Mul => Some(Element::Nat(nat(0).mul(nat(1)))),
                Operation::Sub => nat(0).checked_sub(nat(1)).ok().map(Element::Nat),
                Operation::Translate(k) => Some(Element::Nat(nat(0).add(k))),
                Operation::PairDouble => {
                    let (n, m) = (nat(0), nat(1));
                    let s = n.add(m);
                    let prod = s.mul(&s.successor());
                    Some(Element::Nat(prod.add(&m.add(m))))
                }
                Operation::Successor => Some(Element::Nat(nat(0).successor())),
                Operation::Halving => nat(0).half().map(Element::Nat),
                Operation::Predecessor => nat(0).checked_sub(&Numeral::one()).ok().map(Element::Nat),
            };
        }
        if all_int {
            let int = |i: usize| inputs[i].as_int().expect("checked integer");
            return match self {
                Operation::Add => Some(Element::Int(int(0).add(int(1)))),
                Operation::Mul => Some(Element::Int(int(0).mul(int(1)))),
                Operation::Sub => Some(Element::Int(int(0).sub(int(1)))),
                Operation::Successor => Some(Element::Int(
                    int(0).add(&SignedNumeral::from_i64(1)),
                )),
                _ => None,
            };
        }
        None
    }

    pub fn token(&self) -> String {
        match self {
            Operation::Add => "add".into(),
            Operation::Mul => "mul".into(),
            Operation::Sub => "sub".into(),
            Operation::Translate(k) => format!("translate({k})"),
            Operation::PairDouble => "pairdouble".into(),
            Operation::Successor => "successor".into(),
            Operation::Halving => "halving".into(),
            Operation::Predecessor => "predecessor".into(),
        }
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

/// Why a continuity witness is sound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// Agreement of the inputs modulo `2^bits` forces agreement of the
    /// output modulo `2^bits` — pure congruence algebra.
    ResidueModulus { bits: u64 },
    /// The operation is monotone, so segment neighborhoods map into the
    /// segment target.
    MonotoneSegment,
    /// One case of a blended topology's case analysis; the label says
    /// which.
    BlendCase { case: &'static str },
    /// The input neighborhoods are singletons of isolated points.
    IsolatedPoint,
    /// A zero factor pins the product at zero on a whole section.
    ZeroSection,
    /// No exact argument — soundness was only sampled up to a bound
    /// (probe results carry this and never gate anything).
    Sampled { bound: u64 },
}

impl Justification {
    pub fn token(&self) -> String {
        match self {
            Justification::ResidueModulus { bits } => format!("residue-modulus({bits})"),
            Justification::MonotoneSegment => "monotone-segment".into(),
            Justification::BlendCase { case } => format!("blend-case({case})"),
            Justification::IsolatedPoint => "isolated-point".into(),
            Justification::ZeroSection => "zero-section".into(),
            Justification::Sampled { bound } => format!("sampled({bound})"),
        }
    }
}

/// Certificate that `operation` maps the product of `neighborhoods` into
/// `target`, at and around `point`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuityWitness {
    pub operation: Operation,
    pub point: Vec<Element>,
    pub target: BasicOpen,
    pub neighborhoods: Vec<BasicOpen>,
    pub justification: Justification,
}

impl ContinuityWitness {
    pub fn describe(&self) -> String {
        let inputs: Vec<String> = self.point.iter().map(|e| e.to_string()).collect();
        let nbhds: Vec<String> = self.neighborhoods.iter().map(|u| u.to_string()).collect();
        format!(
            "{}({}) via {} into {} [{}]",
            self.operation,
            inputs.join(","),
            nbhds.join("x"),
            self.target,
            self.justification.token()
        )
    }
}

/// Result of replaying a witness against all small carrier tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointwiseCheck {
    /// Tuples drawn from the neighborhoods on which the operation was
    /// defined and the image was tested.
    pub tuples_checked: u64,
    /// First offending tuple and its image, if any.
    pub counterexample: Option<(Vec<Element>, Element)>,
}

impl PointwiseCheck {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn carrier_candidates(carrier: Carrier, bound: u64) -> Vec<Element> {
    match carrier {
        Carrier::Naturals => (0..=bound).map(Element::nat).collect(),
        Carrier::Integers => {
            let mut v = Vec::with_capacity(2 * bound as usize + 1);
            v.push(Element::int(0));
            for m in 1..=bound as i64 {
                v.push(Element::int(m));
                v.push(Element::int(-m));
            }
            v
        }
    }
}

/// Every carrier element ≤ `bound` (by magnitude) inside the open.
fn members_up_to(open: &BasicOpen, bound: u64) -> Result<Vec<Element>, ContinuityError> {
    let carrier = match open.carrier() {
        Some(c) => c,
        None => return Ok(Vec::new()), // the empty set constrains nothing
    };
    let mut hits = Vec::new();
    for cand in carrier_candidates(carrier, bound) {
        if member(open, &cand)? {
            hits.push(cand);
        }
    }
    Ok(hits)
}

/// Replay a witness against all tuples of carrier elements of magnitude at
/// most `bound` drawn from its neighborhoods: wherever the operation is
/// defined, the image must land in the target. The witness point itself is
/// checked first regardless of the bound.
pub fn check_pointwise(
    witness: &ContinuityWitness,
    bound: u64,
) -> Result<PointwiseCheck, ContinuityError> {
    if witness.point.len() != witness.operation.arity()
        || witness.neighborhoods.len() != witness.operation.arity()
    {
        return Err(ContinuityError::WitnessMismatch(format!(
            "arity {} with {} inputs and {} neighborhoods",
            witness.operation.arity(),
            witness.point.len(),
            witness.neighborhoods.len(),
        )));
    }
    // The declared point must sit inside its own neighborhoods with its
    // image in the target; otherwise the witness refutes itself.
    for (p, u) in witness.point.iter().zip(&witness.neighborhoods) {
        if !member(u, p)? {
            let image = witness
                .operation
                .apply(&witness.point)
                .unwrap_or_else(|| p.clone());
            return Ok(PointwiseCheck {
                tuples_checked: 0,
                counterexample: Some((witness.point.clone(), image)),
            });
        }
    }
    let mut checked = 0u64;
    let mut verdict = |tuple: &[Element]| -> Result<Option<(Vec<Element>, Element)>, ContinuityError> {
        if let Some(image) = witness.operation.apply(tuple) {
            checked += 1;
            if !member(&witness.target, &image)? {
                return Ok(Some((tuple.to_vec(), image)));
            }
        }
        Ok(None)
    };
    if let Some(image) = witness.operation.apply(&witness.point) {
        if !member(&witness.target, &image)? {
            return Ok(PointwiseCheck {
                tuples_checked: 1,
                counterexample: Some((witness.point.clone(), image)),
            });
        }
    }
    let counterexample = match witness.operation.arity() {
        1 => {
            let xs = members_up_to(&witness.neighborhoods[0], bound)?;
            let mut found = None;
            for x in &xs {
                if let Some(bad) = verdict(std::slice::from_ref(x))? {
                    found = Some(bad);
                    break;
                }
            }
            found
        }
        _ => {
            let xs = members_up_to(&witness.neighborhoods[0], bound)?;
            let ys = members_up_to(&witness.neighborhoods[1], bound)?;
            let mut found = None;
            'outer: for x in &xs {
                for y in &ys {
                    if let Some(bad) = verdict(&[x.clone(), y.clone()])? {
                        found = Some(bad);
                        break 'outer;
                    }
                }
            }
            found
        }
    };
    Ok(PointwiseCheck {
        tuples_checked: checked,
        counterexample,
    })
}

/// The number of final digits of the output that agreement on `k` final
/// digits of the inputs pins down, for addition, multiplication and
/// subtraction: exactly `k`, because carries propagate upward only.
pub fn modulus_residue(op: &Operation, k: u64) -> u64 {
    debug_assert!(matches!(
        op,
        Operation::Add | Operation::Mul | Operation::Sub
    ));
    k
}

/// Complete finite check (over residues, not elements) that input residues
/// modulo `2^k` determine the output residue modulo `2^k`. Representatives
/// of each class differ by multiples of `2^k`; sweeping small multiplier
/// offsets on both inputs covers the general case because the offset enters
/// the output linearly (addition, subtraction) or through terms all
/// divisible by `2^k` (multiplication).
pub fn residues_determine_output(op: &Operation, k: u64) -> bool {
    assert!(k <= 12, "residue sweep is exponential in k");
    let modulus = 1i128 << k;
    let apply = |a: i128, b: i128| -> i128 {
        match op {
            Operation::Add => a + b,
            Operation::Mul => a * b,
            Operation::Sub => a - b,
            _ => unreachable!("residue determination applies to add/mul/sub"),
        }
    };
    for a in 0..modulus {
        for b in 0..modulus {
            let base = apply(a, b).rem_euclid(modulus);
            for c in 0..4i128 {
                for d in 0..4i128 {
                    let shifted = apply(a + c * modulus, b + d * modulus).rem_euclid(modulus);
                    if shifted != base {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn suffix_open(n: &Numeral, len: u64) -> BasicOpen {
    BasicOpen::SuffixClass(n.suffix(len))
}

/// Witness that addition, multiplication or subtraction maps the length-
/// `target_len` suffix classes of the inputs into the suffix class of the
/// output: carries propagate away from the low digits, so the low digits
/// of the result depend only on equally many low digits of the inputs.
pub fn witness_final_digits(
    op: &Operation,
    x: &Numeral,
    y: &Numeral,
    target_len: u64,
) -> Result<ContinuityWitness, ContinuityError> {
    let point = vec![Element::Nat(x.clone()), Element::Nat(y.clone())];
    let image = match op {
        Operation::Add | Operation::Mul => op.apply(&point).expect("total on naturals"),
        Operation::Sub => op.apply(&point).ok_or_else(|| ContinuityError::Underflow {
            x: x.to_string(),
            y: y.to_string(),
        })?,
        other => {
            return Err(ContinuityError::PreconditionViolated(format!(
                "digit witnesses cover add/mul/sub, not {other}"
            )))
        }
    };
    let out = image.as_nat().expect("natural image");
    Ok(ContinuityWitness {
        operation: op.clone(),
        point,
        target: suffix_open(out, target_len),
        neighborhoods: vec![suffix_open(x, target_len), suffix_open(y, target_len)],
        justification: Justification::ResidueModulus {
            bits: modulus_residue(op, target_len),
        },
    })
}

/// Witness that translation by a fixed `k` maps a suffix class of `x` into
/// the suffix class of `x + k`.
pub fn witness_translate(
    k: &Numeral,
    x: &Numeral,
    target_len: u64,
) -> Result<ContinuityWitness, ContinuityError> {
    let out = x.add(k);
    Ok(ContinuityWitness {
        operation: Operation::Translate(k.clone()),
        point: vec![Element::Nat(x.clone())],
        target: suffix_open(&out, target_len),
        neighborhoods: vec![suffix_open(x, target_len)],
        justification: Justification::ResidueModulus { bits: target_len },
    })
}

/// Witness for the segment topologies: addition and multiplication are
/// monotone, so `[0,x] × [0,y]` maps into `[0,k]` whenever `x ∘ y ≤ k`, and
/// `[x,∞) × [y,∞)` into `[k,∞)` whenever `x ∘ y ≥ k`.
pub fn witness_segment(
    op: &Operation,
    spec: &TopologySpec,
    x: &Numeral,
    y: &Numeral,
    bound: &Numeral,
) -> Result<ContinuityWitness, ContinuityError> {
    if !matches!(op, Operation::Add | Operation::Mul) {
        return Err(ContinuityError::PreconditionViolated(format!(
            "segment witnesses cover add/mul, not {op}"
        )));
    }
    let point = vec![Element::Nat(x.clone()), Element::Nat(y.clone())];
    let image = op.apply(&point).expect("total on naturals");
    let out = image.as_nat().expect("natural image").clone();
    let (target, neighborhoods) = match spec {
        TopologySpec::InitialSegments => {
            if out.value() > bound.value() {
                return Err(ContinuityError::PreconditionViolated(format!(
                    "{op}({x},{y}) = {out} exceeds the segment bound {bound}"
                )));
            }
            (
                BasicOpen::InitialSegment(bound.clone()),
                vec![
                    BasicOpen::InitialSegment(x.clone()),
                    BasicOpen::InitialSegment(y.clone()),
                ],
            )
        }
        TopologySpec::FinalSegments => {
            if out.value() < bound.value() {
                return Err(ContinuityError::PreconditionViolated(format!(
                    "{op}({x},{y}) = {out} is below the segment bound {bound}"
                )));
            }
            (
                BasicOpen::FinalSegment(bound.clone()),
                vec![
                    BasicOpen::FinalSegment(x.clone()),
                    BasicOpen::FinalSegment(y.clone()),
                ],
            )
        }
        other => {
            return Err(ContinuityError::UnsupportedSpec(other.to_string()));
        }
    };
    Ok(ContinuityWitness {
        operation: op.clone(),
        point,
        target,
        neighborhoods,
        justification: Justification::MonotoneSegment,
    })
}

/// A neighborhood that pins `v ≤ b` down exactly inside a restriction to
/// `[0, b]`: a suffix class so long that consecutive members are further
/// than `b` apart, intersected with the segment.
fn restricted_singleton(v: &Numeral, b: &Numeral) -> BasicOpen {
    let len = v.len().max(b.len() + 1);
    BasicOpen::and(suffix_open(v, len), BasicOpen::InitialSegment(b.clone()))
}

/// Witness continuity of `add`/`mul` in a blended topology (a blend proper,
/// an isolate-below space, or a restriction to an initial segment) by the
/// case analysis on where the image lands.
///
/// The target must be a generating open containing the image. Cases:
///
/// * image inside the isolated/restricted segment — the inputs are pinned
///   by singleton (or restricted-singleton) neighborhoods;
/// * a zero product — the zero input is pinned and the other input roams
///   the whole space, since the section through zero multiplies to zero;
/// * image outside the segment — delegate to the outer topology's witness.
pub fn witness_blend(
    op: &Operation,
    spec: &TopologySpec,
    x: &Numeral,
    y: &Numeral,
    target: &BasicOpen,
) -> Result<ContinuityWitness, ContinuityError> {
    if !matches!(op, Operation::Add | Operation::Mul) {
        return Err(ContinuityError::PreconditionViolated(format!(
            "blend witnesses cover add/mul, not {op}"
        )));
    }
    let point = vec![Element::Nat(x.clone()), Element::Nat(y.clone())];
    let image = op.apply(&point).expect("total on naturals");
    if !member(target, &image)? {
        return Err(ContinuityError::TargetMisses {
            target: target.to_string(),
            image: image.to_string(),
        });
    }
    let out = image.as_nat().expect("natural image").clone();

    let (inside, outer, segment): (&TopologySpec, &TopologySpec, &Numeral) = match spec {
        TopologySpec::IsolateBelow(inner, b) => (&TopologySpec::Discrete, inner, b),
        TopologySpec::Restrict(inner, b) => (inner, &TopologySpec::Indiscrete, b),
        TopologySpec::Blend(t0, t1, b) => (t0, t1, b),
        other => return Err(ContinuityError::UnsupportedSpec(other.to_string())),
    };

    // A zero product lets one whole axis through regardless of the segment:
    // the section through zero maps to {0}.
    if *op == Operation::Mul && out.is_zero() && (x.is_zero() || y.is_zero()) {
        let zero_first = x.is_zero();
        let pinned = if segment.value() >= Numeral::zero().value() && inside_is_digitlike(inside) {
            restricted_singleton(&Numeral::zero(), segment)
        } else {
            BasicOpen::Singleton(Element::nat(0))
        };
        let whole = BasicOpen::WholeSpace(Carrier::Naturals);
        let neighborhoods = if zero_first {
            vec![pinned, whole]
        } else {
            vec![whole, pinned]
        };
        return Ok(ContinuityWitness {
            operation: op.clone(),
            point,
            target: target.clone(),
            neighborhoods,
            justification: Justification::ZeroSection,
        });
    }

    if out.value() <= segment.value() {
        // The image is in the segment, and then so are both inputs: a sum
        // bounds its summands, and a nonzero product bounds its factors
        // (the zero product was handled above).
        let pin = |v: &Numeral| -> Result<BasicOpen, ContinuityError> {
            match inside {
                TopologySpec::Discrete => Ok(BasicOpen::Singleton(Element::Nat(v.clone()))),
                TopologySpec::FinalDigits => Ok(restricted_singleton(v, segment)),
                other => Err(ContinuityError::UnsupportedSpec(format!(
                    "segment-side topology {other}"
                ))),
            }
        };
        let justification = match inside {
            TopologySpec::Discrete => Justification::IsolatedPoint,
            _ => Justification::BlendCase {
                case: "inside-segment",
            },
        };
        return Ok(ContinuityWitness {
            operation: op.clone(),
            point,
            target: target.clone(),
            neighborhoods: vec![pin(x)?, pin(y)?],
            justification,
        });
    }

    // Image outside the segment: certify in the outer topology.
    match outer {
        TopologySpec::FinalDigits => {
            let len = target_suffix_len(target, &image)?;
            let mut witness = witness_final_digits(op, x, y, len)?;
            witness.target = target.clone();
            witness.justification = Justification::BlendCase {
                case: "outside-segment",
            };
            Ok(witness)
        }
        TopologySpec::Indiscrete => {
            if !matches!(target, BasicOpen::WholeSpace(_)) {
                return Err(ContinuityError::UnsupportedTarget(target.to_string()));
            }
            Ok(ContinuityWitness {
                operation: op.clone(),
                point,
                target: target.clone(),
                neighborhoods: vec![
                    BasicOpen::WholeSpace(Carrier::Naturals),
                    BasicOpen::WholeSpace(Carrier::Naturals),
                ],
                justification: Justification::BlendCase {
                    case: "outside-segment",
                },
            })
        }
        TopologySpec::Discrete => Ok(ContinuityWitness {
            operation: op.clone(),
            point: point.clone(),
            target: target.clone(),
            neighborhoods: vec![
                BasicOpen::Singleton(point[0].clone()),
                BasicOpen::Singleton(point[1].clone()),
            ],
            justification: Justification::IsolatedPoint,
        }),
        other => Err(ContinuityError::UnsupportedSpec(format!(
            "outer topology {other}"
        ))),
    }
}

fn inside_is_digitlike(spec: &TopologySpec) -> bool {
    matches!(spec, TopologySpec::FinalDigits)
}

/// The suffix length a digit-topology witness must certify so its image
/// stays inside the given target: the length of the suffix-class component
/// of the target that contains the image.
fn target_suffix_len(target: &BasicOpen, image: &Element) -> Result<u64, ContinuityError> {
    match target {
        BasicOpen::SuffixClass(s) => Ok(s.len()),
        BasicOpen::WholeSpace(Carrier::Naturals) => Ok(0),
        BasicOpen::UnionOf(parts) => {
            for part in parts {
                if member(part, image)? {
                    if let Ok(len) = target_suffix_len(part, image) {
                        return Ok(len);
                    }
                }
            }
            Err(ContinuityError::UnsupportedTarget(target.to_string()))
        }
        other => Err(ContinuityError::UnsupportedTarget(other.to_string())),
    }
}

/// Combine witnesses for the same operation at the same point, valid in two
/// topologies, into one for the topology their opens generate together:
/// intersect neighborhoods pairwise and intersect the targets.
pub fn combine(
    first: &ContinuityWitness,
    second: &ContinuityWitness,
) -> Result<ContinuityWitness, ContinuityError> {
    if first.operation != second.operation || first.point != second.point {
        return Err(ContinuityError::WitnessMismatch(format!(
            "{} vs {}",
            first.describe(),
            second.describe()
        )));
    }
    let neighborhoods = first
        .neighborhoods
        .iter()
        .zip(&second.neighborhoods)
        .map(|(a, b)| crate::topology::simplify(BasicOpen::and(a.clone(), b.clone())))
        .collect();
    Ok(ContinuityWitness {
        operation: first.operation.clone(),
        point: first.point.clone(),
        target: crate::topology::simplify(BasicOpen::and(
            first.target.clone(),
            second.target.clone(),
        )),
        neighborhoods,
        justification: Justification::BlendCase { case: "union" },
    })
}

/// An element of a supplied neighborhood whose image misses the witness
/// target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Escape {
    pub element: Element,
    pub image: Element,
}

/// The refutation procedures this library ships.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Refuter {
    /// Every variant-order neighborhood of 1 contains a nonzero even
    /// number, whose successor is odd and so misses the target of nonzero
    /// even numbers around 2.
    VariantSuccessorParity,
    /// In the discrete topology restricted to `[0,17]`, the only
    /// neighborhood of 30 contains every number above 17; 36 halves to 18,
    /// missing the isolated target {15}.
    RestrictHalvingAt30,
    /// Same space: the only neighborhood of 18 contains 20, whose
    /// predecessor 19 misses the isolated target {17}.
    RestrictPredecessorAt18,
}

/// Certificate that an operation is discontinuous at a point: a fixed
/// target neighborhood of the image, plus a procedure producing, for any
/// basic neighborhood of the point, an element whose image misses the
/// target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscontinuityWitness {
    pub operation: Operation,
    pub point: Vec<Element>,
    pub target: BasicOpen,
    pub refuter: Refuter,
}

impl DiscontinuityWitness {
    /// Run the refuter against a neighborhood of the witness point.
    pub fn escape(&self, neighborhood: &BasicOpen) -> Result<Escape, ContinuityError> {
        for (p, _) in self.point.iter().zip([neighborhood]) {
            if !member(neighborhood, p)? {
                return Err(ContinuityError::PreconditionViolated(format!(
                    "{neighborhood} is not a neighborhood of {p}"
                )));
            }
        }
        let scan_limit = 1u64 << 20;
        let candidates: Box<dyn Iterator<Item = u64>> = match self.refuter {
            // Nonzero even numbers in ascending magnitude.
            Refuter::VariantSuccessorParity => Box::new((1..scan_limit / 2).map(|m| 2 * m)),
            // 36 is the canonical escape; any even above the segment works.
            Refuter::RestrictHalvingAt30 => {
                Box::new(std::iter::once(36).chain((9..scan_limit / 2).map(|m| 2 * m)))
            }
            // 20 is the canonical escape; anything above 20 works too.
            Refuter::RestrictPredecessorAt18 => Box::new(20..scan_limit),
        };
        for cand in candidates {
            let element = Element::nat(cand);
            if !member(neighborhood, &element)? {
                continue;
            }
            let Some(image) = self.operation.apply(std::slice::from_ref(&element)) else {
                continue;
            };
            if !member(&self.target, &image)? {
                return Ok(Escape { element, image });
            }
        }
        Err(ContinuityError::NoEscapeFound(neighborhood.to_string()))
    }
}

/// Check an escape against the neighborhood it was drawn from: it must be a
/// member, its image must be defined, and the image must miss the target.
pub fn validate_escape(
    witness: &DiscontinuityWitness,
    neighborhood: &BasicOpen,
    escape: &Escape,
) -> Result<(), ContinuityError> {
    if !member(neighborhood, &escape.element)? {
        return Err(ContinuityError::PreconditionViolated(format!(
            "escape {} is not in {}",
            escape.element, neighborhood
        )));
    }
    match witness.operation.apply(std::slice::from_ref(&escape.element)) {
        Some(image) if image == escape.image => {}
        _ => {
            return Err(ContinuityError::PreconditionViolated(format!(
                "escape image mismatch at {}",
                escape.element
            )))
        }
    }
    if member(&witness.target, &escape.image)? {
        return Err(ContinuityError::PreconditionViolated(format!(
            "escape image {} still lies in the target",
            escape.image
        )));
    }
    Ok(())
}

/// Discontinuity of the successor at 1 in the variant order topology: the
/// target is the interval (0, 1), which contains 2 and consists exactly of
/// the nonzero even numbers. The supplied neighborhood must contain 1.
pub fn refute_variant_successor(
    neighborhood: &BasicOpen,
) -> Result<DiscontinuityWitness, ContinuityError> {
    let witness = DiscontinuityWitness {
        operation: Operation::Successor,
        point: vec![Element::nat(1)],
        target: BasicOpen::OrderInterval {
            kind: crate::orders::OrderKind::Variant,
            lo: Some(Element::nat(0)),
            hi: Some(Element::nat(1)),
        },
        refuter: Refuter::VariantSuccessorParity,
    };
    // Fail fast when the neighborhood is unusable, so the caller learns at
    // construction time rather than on first escape.
    witness.escape(neighborhood)?;
    Ok(witness)
}

/// Which of the two fixed counterexamples on the discrete topology
/// restricted to `[0,17]` to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RestrictCase {
    HalvingAt30,
    PredecessorAt18,
}

/// Discontinuity of halving at 30 (target {15}) or of the predecessor at 18
/// (target {17}) on the discrete topology restricted to `[0,17]`, where the
/// only neighborhood of the point contains every number above the segment.
pub fn refute_restrict17(case: RestrictCase) -> DiscontinuityWitness {
    match case {
        RestrictCase::HalvingAt30 => DiscontinuityWitness {
            operation: Operation::Halving,
            point: vec![Element::nat(30)],
            target: BasicOpen::singleton_nat(15),
            refuter: Refuter::RestrictHalvingAt30,
        },
        RestrictCase::PredecessorAt18 => DiscontinuityWitness {
            operation: Operation::Predecessor,
            point: vec![Element::nat(18)],
            target: BasicOpen::singleton_nat(17),
            refuter: Refuter::RestrictPredecessorAt18,
        },
    }
}
