//! Canonical textual form for basic opens, topology descriptions and
//! carrier elements, with a round-tripping parser.
//!
//! The grammar is compact and stable so the strings can key report records:
//!
//! ```text
//! element   := 15 | +15 | -15 | +0            (sign present ⟺ integer)
//! open      := empty | all:nat | all:int
//!            | suffix(BITS) | suffix+(BITS) | suffix-(BITS)
//!            | sign(+) | sign(-) | zerotail(K)
//!            | interval(KIND,LO,HI)           (LO may be -inf, HI may be inf)
//!            | rightopen(KIND,LO,HI)          (HI may be inf)
//!            | [0,K] | [K,inf) | {ELEMENT}
//!            | and(OPEN,OPEN) | or(OPEN,...)
//! topology  := discrete | indiscrete | fd | signedfd
//!            | order(KIND) | rightorder(KIND)
//!            | initialsegments | finalsegments
//!            | restrict(TOP,[0,B]) | blend(TOP,TOP,[0,B])
//!            | isolatebelow(TOP,B) | union(TOP,TOP)
//!            | augmentinitial(TOP) | augmentfinal(TOP)
//! KIND      := fd | variant | signed
//! ```

use std::fmt;

use crate::numerals::{DigitString, Numeral, Sign, SignedNumeral};
use crate::orders::{Carrier, Element, OrderKind};

use super::{BasicOpen, Polarity, TopologyError, TopologySpec};

fn parse_err(what: &'static str, text: &str) -> TopologyError {
    TopologyError::Parse {
        what,
        text: text.to_string(),
    }
}

pub fn write_element(x: &Element, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match x {
        Element::Nat(n) => write!(f, "{n}"),
        Element::Int(i) => match i.sign() {
            Sign::Negative => write!(f, "-{}", i.magnitude()),
            _ => write!(f, "+{}", i.magnitude()),
        },
    }
}

struct ElementText<'a>(&'a Element);

impl fmt::Display for ElementText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_element(self.0, f)
    }
}

pub fn parse_element(text: &str) -> Result<Element, TopologyError> {
    let text = text.trim();
    if text.starts_with('+') || text.starts_with('-') {
        let v: SignedNumeral = text
            .parse()
            .map_err(|_| parse_err("element", text))?;
        Ok(Element::Int(v))
    } else {
        let v: Numeral = text.parse().map_err(|_| parse_err("element", text))?;
        Ok(Element::Nat(v))
    }
}

pub fn write_open(open: &BasicOpen, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match open {
        BasicOpen::Empty => f.write_str("empty"),
        BasicOpen::WholeSpace(Carrier::Naturals) => f.write_str("all:nat"),
        BasicOpen::WholeSpace(Carrier::Integers) => f.write_str("all:int"),
        BasicOpen::SuffixClass(s) => write!(f, "suffix({s})"),
        BasicOpen::SignedSuffixClass { polarity, suffix } => {
            write!(f, "suffix{}({suffix})", polarity.token())
        }
        BasicOpen::SignBlock(p) => write!(f, "sign({})", p.token()),
        BasicOpen::ZeroTail(k) => write!(f, "zerotail({k})"),
        BasicOpen::OrderInterval { kind, lo, hi } => {
            write!(f, "interval({kind},")?;
            match lo {
                None => f.write_str("-inf")?,
                Some(a) => write_element(a, f)?,
            }
            f.write_str(",")?;
            match hi {
                None => f.write_str("inf")?,
                Some(b) => write_element(b, f)?,
            }
            f.write_str(")")
        }
        BasicOpen::RightOpenInterval { kind, lo, hi } => {
            write!(f, "rightopen({kind},")?;
            write_element(lo, f)?;
            f.write_str(",")?;
            match hi {
                None => f.write_str("inf")?,
                Some(b) => write_element(b, f)?,
            }
            f.write_str(")")
        }
        BasicOpen::InitialSegment(k) => write!(f, "[0,{k}]"),
        BasicOpen::FinalSegment(k) => write!(f, "[{k},inf)"),
        BasicOpen::Singleton(x) => write!(f, "{{{}}}", ElementText(x)),
        BasicOpen::Intersection(a, b) => write!(f, "and({a},{b})"),
        BasicOpen::UnionOf(parts) => {
            f.write_str("or(")?;
            for (i, part) in parts.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{part}")?;
            }
            f.write_str(")")
        }
    }
}

pub fn write_spec(spec: &TopologySpec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match spec {
        TopologySpec::Discrete => f.write_str("discrete"),
        TopologySpec::Indiscrete => f.write_str("indiscrete"),
        TopologySpec::FinalDigits => f.write_str("fd"),
        TopologySpec::SignedFinalDigits => f.write_str("signedfd"),
        TopologySpec::OrderTopology(kind) => write!(f, "order({kind})"),
        TopologySpec::RightOpenTopology(kind) => write!(f, "rightorder({kind})"),
        TopologySpec::InitialSegments => f.write_str("initialsegments"),
        TopologySpec::FinalSegments => f.write_str("finalsegments"),
        TopologySpec::Restrict(inner, b) => write!(f, "restrict({inner},[0,{b}])"),
        TopologySpec::Blend(t0, t1, b) => write!(f, "blend({t0},{t1},[0,{b}])"),
        TopologySpec::IsolateBelow(inner, b) => write!(f, "isolatebelow({inner},{b})"),
        TopologySpec::Union(a, b) => write!(f, "union({a},{b})"),
        TopologySpec::AugmentInitial(inner) => write!(f, "augmentinitial({inner})"),
        TopologySpec::AugmentFinal(inner) => write!(f, "augmentfinal({inner})"),
    }
}

/// Split `args` at top-level commas, respecting nested `()`, `[]`, `{}`.
fn split_args(args: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in args.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&args[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&args[start..]);
    parts
}

/// The body of `head(...)` when `text` has that shape.
fn call_body<'a>(text: &'a str, head: &str) -> Option<&'a str> {
    let rest = text.strip_prefix(head)?;
    let rest = rest.strip_prefix('(')?;
    rest.strip_suffix(')')
}

fn parse_kind(text: &str) -> Result<OrderKind, TopologyError> {
    OrderKind::from_token(text.trim()).ok_or_else(|| parse_err("order kind", text))
}

fn parse_endpoint(text: &str, infinite: &str) -> Result<Option<Element>, TopologyError> {
    let text = text.trim();
    if text == infinite {
        Ok(None)
    } else {
        parse_element(text).map(Some)
    }
}

fn parse_digit_string(text: &str) -> Result<DigitString, TopologyError> {
    text.trim()
        .parse()
        .map_err(|_| parse_err("digit string", text))
}

fn parse_count(text: &str) -> Result<u64, TopologyError> {
    text.trim().parse().map_err(|_| parse_err("count", text))
}

fn parse_numeral(text: &str) -> Result<Numeral, TopologyError> {
    text.trim()
        .parse()
        .map_err(|_| parse_err("natural number", text))
}

/// Parse `[0,K]` to an initial segment bound.
fn parse_initial_segment(text: &str) -> Result<Numeral, TopologyError> {
    let body = text
        .trim()
        .strip_prefix("[0,")
        .and_then(|rest| rest.strip_suffix(']'))
        .ok_or_else(|| parse_err("initial segment", text))?;
    parse_numeral(body)
}

pub fn parse_open(text: &str) -> Result<BasicOpen, TopologyError> {
    let text = text.trim();
    match text {
        "empty" => return Ok(BasicOpen::Empty),
        "all:nat" => return Ok(BasicOpen::WholeSpace(Carrier::Naturals)),
        "all:int" => return Ok(BasicOpen::WholeSpace(Carrier::Integers)),
        _ => {}
    }
    if let Some(body) = text.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        return Ok(BasicOpen::Singleton(parse_element(body)?));
    }
    if let Some(body) = text.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let parts = split_args(body);
        if parts.len() == 2 && parts[0].trim() == "0" {
            return Ok(BasicOpen::InitialSegment(parse_numeral(parts[1])?));
        }
        return Err(parse_err("segment", text));
    }
    if let Some(body) = text.strip_prefix('[').and_then(|r| r.strip_suffix(")")) {
        let parts = split_args(body);
        if parts.len() == 2 && parts[1].trim() == "inf" {
            return Ok(BasicOpen::FinalSegment(parse_numeral(parts[0])?));
        }
        return Err(parse_err("segment", text));
    }
    if let Some(body) = call_body(text, "suffix+") {
        let suffix = parse_digit_string(body)?;
        if suffix.is_empty() {
            return Err(TopologyError::EmptySignedSuffix);
        }
        return Ok(BasicOpen::SignedSuffixClass {
            polarity: Polarity::Positive,
            suffix,
        });
    }
    if let Some(body) = call_body(text, "suffix-") {
        let suffix = parse_digit_string(body)?;
        if suffix.is_empty() {
            return Err(TopologyError::EmptySignedSuffix);
        }
        return Ok(BasicOpen::SignedSuffixClass {
            polarity: Polarity::Negative,
            suffix,
        });
    }
    if let Some(body) = call_body(text, "suffix") {
        return Ok(BasicOpen::SuffixClass(parse_digit_string(body)?));
    }
    if let Some(body) = call_body(text, "sign") {
        return match body.trim() {
            "+" => Ok(BasicOpen::SignBlock(Polarity::Positive)),
            "-" => Ok(BasicOpen::SignBlock(Polarity::Negative)),
            _ => Err(parse_err("sign block", text)),
        };
    }
    if let Some(body) = call_body(text, "zerotail") {
        return Ok(BasicOpen::ZeroTail(parse_count(body)?));
    }
    if let Some(body) = call_body(text, "interval") {
        let parts = split_args(body);
        if parts.len() != 3 {
            return Err(parse_err("order interval", text));
        }
        return Ok(BasicOpen::OrderInterval {
            kind: parse_kind(parts[0])?,
            lo: parse_endpoint(parts[1], "-inf")?,
            hi: parse_endpoint(parts[2], "inf")?,
        });
    }
    if let Some(body) = call_body(text, "rightopen") {
        let parts = split_args(body);
        if parts.len() != 3 {
            return Err(parse_err("half-open interval", text));
        }
        let lo = parse_element(parts[1])?;
        return Ok(BasicOpen::RightOpenInterval {
            kind: parse_kind(parts[0])?,
            lo,
            hi: parse_endpoint(parts[2], "inf")?,
        });
    }
    if let Some(body) = call_body(text, "and") {
        let parts = split_args(body);
        if parts.len() != 2 {
            return Err(parse_err("intersection", text));
        }
        return Ok(BasicOpen::and(parse_open(parts[0])?, parse_open(parts[1])?));
    }
    if let Some(body) = call_body(text, "or") {
        let parts = split_args(body);
        let mut opens = Vec::with_capacity(parts.len());
        for part in parts {
            opens.push(parse_open(part)?);
        }
        return Ok(BasicOpen::UnionOf(opens));
    }
    Err(parse_err("basic open", text))
}

pub fn parse_spec(text: &str) -> Result<TopologySpec, TopologyError> {
    let text = text.trim();
    match text {
        "discrete" => return Ok(TopologySpec::Discrete),
        "indiscrete" => return Ok(TopologySpec::Indiscrete),
        "fd" => return Ok(TopologySpec::FinalDigits),
        "signedfd" => return Ok(TopologySpec::SignedFinalDigits),
        "initialsegments" => return Ok(TopologySpec::InitialSegments),
        "finalsegments" => return Ok(TopologySpec::FinalSegments),
        _ => {}
    }
    if let Some(body) = call_body(text, "order") {
        return Ok(TopologySpec::OrderTopology(parse_kind(body)?));
    }
    if let Some(body) = call_body(text, "rightorder") {
        return Ok(TopologySpec::RightOpenTopology(parse_kind(body)?));
    }
    if let Some(body) = call_body(text, "restrict") {
        let parts = split_args(body);
        if parts.len() != 2 {
            return Err(parse_err("restriction", text));
        }
        return Ok(TopologySpec::Restrict(
            Box::new(parse_spec(parts[0])?),
            parse_initial_segment(parts[1])?,
        ));
    }
    if let Some(body) = call_body(text, "blend") {
        let parts = split_args(body);
        if parts.len() != 3 {
            return Err(parse_err("blend", text));
        }
        return Ok(TopologySpec::Blend(
            Box::new(parse_spec(parts[0])?),
            Box::new(parse_spec(parts[1])?),
            parse_initial_segment(parts[2])?,
        ));
    }
    if let Some(body) = call_body(text, "isolatebelow") {
        let parts = split_args(body);
        if parts.len() != 2 {
            return Err(parse_err("isolation", text));
        }
        return Ok(TopologySpec::IsolateBelow(
            Box::new(parse_spec(parts[0])?),
            parse_numeral(parts[1])?,
        ));
    }
    if let Some(body) = call_body(text, "union") {
        let parts = split_args(body);
        if parts.len() != 2 {
            return Err(parse_err("union", text));
        }
        return Ok(TopologySpec::Union(
            Box::new(parse_spec(parts[0])?),
            Box::new(parse_spec(parts[1])?),
        ));
    }
    if let Some(body) = call_body(text, "augmentinitial") {
        return Ok(TopologySpec::AugmentInitial(Box::new(parse_spec(body)?)));
    }
    if let Some(body) = call_body(text, "augmentfinal") {
        return Ok(TopologySpec::AugmentFinal(Box::new(parse_spec(body)?)));
    }
    Err(parse_err("topology", text))
}
