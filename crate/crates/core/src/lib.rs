//! Definable digit orders on the naturals and integers, the topologies their
//! digit neighborhoods generate, machine-checkable continuity and
//! discontinuity witnesses for arithmetic on those spaces, and a
//! deterministic back-and-forth construction embedding the final-digits
//! order into the rationals.
//!
//! The crate is organized bottom-up:
//!
//! * [`numerals`] — exact naturals/integers with least-significant-first
//!   digit access, plus the 2-adic valuation and metric;
//! * [`orders`] — the final-digits order, its zero-least variant, the signed
//!   extension, rational rank oracles, and density searches;
//! * [`topology`] — basic open sets (digit-suffix classes and friends),
//!   space descriptions, membership, neighborhood filters, and isolation;
//! * [`continuity`] — witness objects that certify an operation continuous
//!   (or refute it) at a point, and sampling probes for open cases;
//! * [`embedding`] — the back-and-forth order isomorphism with the
//!   rationals, plus pairing-based product embeddings;
//! * [`report`] / [`verify`] — deterministic machine-readable check suites
//!   over all of the above.

pub mod continuity;
pub mod embedding;
pub mod numerals;
pub mod orders;
pub mod render;
pub mod report;
pub mod topology;
pub mod verify;
