//! The explicit order isomorphism between the final-digits order and the
//! rationals, built by a deterministic back-and-forth, plus the arithmetic
//! it transports and the pairing polynomials.
//!
//! Steps alternate: even step counts go forth (take the least unmapped
//! natural by magnitude, give it the first unused rational from the fixed
//! enumeration that fits the required order slot), odd counts go back
//! (take the first unused rational, find the magnitude-least unused
//! natural in the matching comparator interval by ascending scan). Both
//! scans are total — the comparator order is dense and endless — but a
//! configurable budget bounds them in practice. Every assignment is
//! final: later steps never revise earlier ones, so longer runs extend
//! shorter ones verbatim.

pub mod enumeration;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::continuity::{witness_final_digits, ContinuityWitness, Justification, Operation};
use crate::numerals::{Numeral, Rational};
use crate::orders::{fd_cmp, Element};
use crate::topology::BasicOpen;
use enumeration::{position_of, rational_at_u64};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("scan budget of {budget} exhausted while {context}")]
    BudgetExceeded { budget: u64, context: String },
}

/// Which half of the shuttle a step ran.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepDirection {
    Forth,
    Back,
}

impl StepDirection {
    pub fn token(self) -> &'static str {
        match self {
            StepDirection::Forth => "forth",
            StepDirection::Back => "back",
        }
    }
}

/// One assignment made by the back-and-forth, in the order it happened.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleEntry {
    pub step: u64,
    pub direction: StepDirection,
    pub natural: Numeral,
    pub rational: Rational,
}

/// The growing partial isomorphism.
///
/// Single-writer by construction: stepping needs `&mut self`, every query
/// works on `&self`, and the state is `Clone` for snapshots.
#[derive(Clone, Debug)]
pub struct BackAndForthState {
    steps: u64,
    /// Assignments sorted by the comparator on the natural side.
    by_order: Vec<(Numeral, Rational)>,
    /// The same assignments keyed by rational, in rational order.
    by_rational: BTreeMap<Rational, Numeral>,
    /// Naturals consumed so far, in magnitude order.
    used_naturals: BTreeSet<Numeral>,
    log: Vec<ScheduleEntry>,
    scan_budget: u64,
}

impl Default for BackAndForthState {
    fn default() -> Self {
        Self::new()
    }
}

impl BackAndForthState {
    pub fn new() -> Self {
        Self::with_budget(1_000_000)
    }

    /// `scan_budget` caps each step's candidate scan (naturals tried on a
    /// back step, enumeration positions tried on a forth step).
    pub fn with_budget(scan_budget: u64) -> Self {
        BackAndForthState {
            steps: 0,
            by_order: Vec::new(),
            by_rational: BTreeMap::new(),
            used_naturals: BTreeSet::new(),
            log: Vec::new(),
            scan_budget,
        }
    }

    /// Completed step count.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Assignments in schedule order.
    pub fn log(&self) -> &[ScheduleEntry] {
        &self.log
    }

    /// Assignments sorted by the comparator on the natural side.
    pub fn assignments(&self) -> &[(Numeral, Rational)] {
        &self.by_order
    }

    /// The image of `n`, if assigned so far.
    pub fn image_of(&self, n: &Numeral) -> Option<&Rational> {
        let pos = self
            .by_order
            .binary_search_by(|(m, _)| fd_cmp(m, n))
            .ok()?;
        Some(&self.by_order[pos].1)
    }

    /// The preimage of `q`, if assigned so far.
    pub fn preimage_of(&self, q: &Rational) -> Option<&Numeral> {
        self.by_rational.get(q)
    }

    /// Comparator neighbors of an unassigned natural: the images of the
    /// assigned naturals directly below and above it.
    fn rational_slot(&self, n: &Numeral) -> (Option<&Rational>, Option<&Rational>) {
        match self.by_order.binary_search_by(|(m, _)| fd_cmp(m, n)) {
            Ok(_) => unreachable!("slot queried for an assigned natural"),
            Err(pos) => (
                pos.checked_sub(1).map(|i| &self.by_order[i].1),
                self.by_order.get(pos).map(|(_, q)| q),
            ),
        }
    }

    /// Rational-order neighbors of an unassigned rational: the preimages
    /// of the assigned rationals directly below and above it.
    fn natural_slot(&self, q: &Rational) -> (Option<&Numeral>, Option<&Numeral>) {
        (
            self.by_rational.range(..q.clone()).next_back().map(|(_, n)| n),
            self.by_rational
                .range(q.clone()..)
                .next()
                .map(|(_, n)| n),
        )
    }

    fn record(&mut self, direction: StepDirection, natural: Numeral, rational: Rational) {
        let pos = self
            .by_order
            .binary_search_by(|(m, _)| fd_cmp(m, &natural))
            .expect_err("assigning an already-assigned natural");
        self.by_order.insert(pos, (natural.clone(), rational.clone()));
        self.by_rational.insert(rational.clone(), natural.clone());
        self.used_naturals.insert(natural.clone());
        self.log.push(ScheduleEntry {
            step: self.steps,
            direction,
            natural,
            rational,
        });
        self.steps += 1;
    }

    /// Run one step: forth on even counts, back on odd.
    pub fn ba_step(&mut self) -> Result<ScheduleEntry, EmbeddingError> {
        if self.steps % 2 == 0 {
            self.step_forth()?;
        } else {
            self.step_back()?;
        }
        Ok(self.log.last().expect("step just recorded").clone())
    }

    /// Run steps until `target` steps have completed.
    pub fn advance_to(&mut self, target: u64) -> Result<(), EmbeddingError> {
        while self.steps < target {
            self.ba_step()?;
        }
        Ok(())
    }

    fn step_forth(&mut self) -> Result<(), EmbeddingError> {
        // Least unmapped natural in magnitude order.
        let mut candidate = Numeral::zero();
        while self.used_naturals.contains(&candidate) {
            candidate = candidate.successor();
        }
        let (lo, hi) = self.rational_slot(&candidate);
        // First unused rational in enumeration order inside the slot.
        let mut found = None;
        for position in 0..self.scan_budget {
            let q = rational_at_u64(position);
            if self.by_rational.contains_key(&q) {
                continue;
            }
            if lo.is_some_and(|l| *l >= q) || hi.is_some_and(|h| *h <= q) {
                continue;
            }
            found = Some(q);
            break;
        }
        let q = found.ok_or_else(|| EmbeddingError::BudgetExceeded {
            budget: self.scan_budget,
            context: format!("seeking an image for {candidate}"),
        })?;
        self.record(StepDirection::Forth, candidate, q);
        Ok(())
    }

    fn step_back(&mut self) -> Result<(), EmbeddingError> {
        // First unused rational in enumeration order.
        let mut found = None;
        for position in 0..self.scan_budget {
            let q = rational_at_u64(position);
            if !self.by_rational.contains_key(&q) {
                found = Some(q);
                break;
            }
        }
        let q = found.ok_or_else(|| EmbeddingError::BudgetExceeded {
            budget: self.scan_budget,
            context: "seeking the first unused rational".into(),
        })?;
        let (lo, hi) = self.natural_slot(&q);
        let (lo, hi) = (lo.cloned(), hi.cloned());
        // Magnitude-least unused natural in the comparator interval,
        // by ascending scan.
        let mut candidate = Numeral::zero();
        let mut scanned = 0;
        let preimage = loop {
            if scanned >= self.scan_budget {
                return Err(EmbeddingError::BudgetExceeded {
                    budget: self.scan_budget,
                    context: format!("seeking a preimage for {q}"),
                });
            }
            scanned += 1;
            let fits = !self.used_naturals.contains(&candidate)
                && lo
                    .as_ref()
                    .is_none_or(|l| fd_cmp(l, &candidate) == std::cmp::Ordering::Less)
                && hi
                    .as_ref()
                    .is_none_or(|h| fd_cmp(&candidate, h) == std::cmp::Ordering::Less);
            if fits {
                break candidate;
            }
            candidate = candidate.successor();
        };
        self.record(StepDirection::Back, preimage, q);
        Ok(())
    }

    /// The image of `n`, advancing the shuttle as far as needed (step
    /// `2n + 1` suffices by the progress guarantee).
    pub fn embed(&mut self, n: &Numeral) -> Result<Rational, EmbeddingError> {
        if let Some(q) = self.image_of(n) {
            return Ok(q.clone());
        }
        let needed = n
            .value()
            .to_u64()
            .and_then(|v| v.checked_mul(2))
            .and_then(|v| v.checked_add(1))
            .ok_or_else(|| EmbeddingError::BudgetExceeded {
                budget: self.scan_budget,
                context: format!("embedding {n} needs more steps than fit a counter"),
            })?;
        self.advance_to(needed)?;
        Ok(self
            .image_of(n)
            .expect("progress guarantee: natural n is mapped by step 2n+1")
            .clone())
    }

    /// The preimage of `q`, advancing the shuttle as far as needed (step
    /// `2j + 2` suffices, where `j` is the enumeration position).
    pub fn inverse(&mut self, q: &Rational) -> Result<Numeral, EmbeddingError> {
        if let Some(n) = self.preimage_of(q) {
            return Ok(n.clone());
        }
        let position = position_of(q);
        let needed = position
            .to_u64()
            .and_then(|v| v.checked_mul(2))
            .and_then(|v| v.checked_add(2))
            .ok_or_else(|| EmbeddingError::BudgetExceeded {
                budget: self.scan_budget,
                context: format!("inverting {q} needs more steps than fit a counter"),
            })?;
        self.advance_to(needed)?;
        Ok(self
            .preimage_of(q)
            .expect("progress guarantee: position j is hit by step 2j+2")
            .clone())
    }
}

/// Addition pulled through the isomorphism: the image of the sum of the
/// preimages.
pub fn transported_add(
    q1: &Rational,
    q2: &Rational,
    state: &mut BackAndForthState,
) -> Result<Rational, EmbeddingError> {
    let n1 = state.inverse(q1)?;
    let n2 = state.inverse(q2)?;
    state.embed(&n1.add(&n2))
}

/// Multiplication pulled through the isomorphism.
pub fn transported_mul(
    q1: &Rational,
    q2: &Rational,
    state: &mut BackAndForthState,
) -> Result<Rational, EmbeddingError> {
    let n1 = state.inverse(q1)?;
    let n2 = state.inverse(q2)?;
    state.embed(&n1.mul(&n2))
}

/// The diagonal pairing polynomial `(n+m)(n+m+1)/2 + m`.
pub fn pair_cantor(n: &Numeral, m: &Numeral) -> Numeral {
    let s = n.add(m);
    let triangle = s
        .mul(&s.successor())
        .half()
        .expect("s(s+1) is even");
    triangle.add(m)
}

/// Twice the diagonal pairing: `(n+m)(n+m+1) + 2m`. Injective, with image
/// exactly the even numbers.
pub fn pair_double(n: &Numeral, m: &Numeral) -> Numeral {
    let s = n.add(m);
    s.mul(&s.successor()).add(&m.add(m))
}

/// A digit-topology continuity certificate for [`pair_double`] at `(n, m)`:
/// the polynomial is a composition of sums and products, each of which
/// keeps residues, so fixing `target_len` digits of both inputs fixes
/// `target_len` digits of the output. The constituent sum/product
/// witnesses are built explicitly and their neighborhoods chained.
pub fn witness_pairing(n: &Numeral, m: &Numeral, target_len: u64) -> ContinuityWitness {
    let s = n.add(m);
    let shifted = s.successor();
    let product = s.mul(&shifted);
    let double_m = m.add(m);
    // Chain: s = n + m, then s * (s + 1), then + 2m. Each stage keeps
    // target_len digits, so the composite does; the stage witnesses only
    // assert what composition needs.
    let stage_sum = witness_final_digits(&Operation::Add, n, m, target_len)
        .expect("addition is total");
    let stage_product = witness_final_digits(&Operation::Mul, &s, &shifted, target_len)
        .expect("multiplication is total");
    let stage_total = witness_final_digits(&Operation::Add, &product, &double_m, target_len)
        .expect("addition is total");
    debug_assert_eq!(
        stage_total.target,
        BasicOpen::SuffixClass(pair_double(n, m).suffix(target_len))
    );
    let _ = (&stage_sum, &stage_product);
    ContinuityWitness {
        operation: Operation::PairDouble,
        point: vec![Element::Nat(n.clone()), Element::Nat(m.clone())],
        target: stage_total.target,
        neighborhoods: vec![
            BasicOpen::SuffixClass(n.suffix(target_len)),
            BasicOpen::SuffixClass(m.suffix(target_len)),
        ],
        justification: Justification::ResidueModulus { bits: target_len },
    }
}

/// Invert [`pair_cantor`]: the unique `(n, m)` with `pair_cantor(n, m) = v`.
pub fn unpair_cantor(v: &Numeral) -> (Numeral, Numeral) {
    // Find the diagonal s with s(s+1)/2 <= v by growing, then walk back.
    let mut s = Numeral::zero();
    loop {
        let next = s.successor();
        let tri = next
            .mul(&next.successor())
            .half()
            .expect("s(s+1) is even");
        if tri.value() > v.value() {
            break;
        }
        s = next;
    }
    let tri = s.mul(&s.successor()).half().expect("s(s+1) is even");
    let m = v.checked_sub(&tri).expect("v sits on or past its diagonal");
    let n = s.checked_sub(&m).expect("m never exceeds the diagonal");
    (n, m)
}
