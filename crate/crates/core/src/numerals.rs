//! Arbitrary-precision naturals and integers with digit-level access.
//!
//! Binary digits are stored least significant first, which is the direction
//! every comparator and suffix query in this crate scans. Zero is the empty
//! digit sequence, so canonical digit sequences never end in a zero digit
//! (a "leading" zero in ordinary writing order).

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational numbers; rank oracles and the 2-adic metric return these.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumeralError {
    #[error("2-adic valuation of zero is undefined")]
    ZeroValuation,
    #[error("natural subtraction underflow: subtrahend exceeds minuend")]
    Underflow,
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported digit base {0}; supported bases are 2..=36")]
    UnsupportedBase(u64),
    #[error("cannot parse {0:?} as a numeral")]
    Parse(String),
}

/// A natural number viewed as its canonical binary digit sequence.
///
/// Digit positions are 1-based and count from the least significant digit, so
/// `value = sum(digit(i) * 2^(i-1))`. The backing integer keeps the sequence
/// canonical by construction: no digits above the most significant 1, and
/// zero is the empty sequence.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Numeral(BigUint);

impl Numeral {
    pub fn zero() -> Self {
        Numeral(BigUint::zero())
    }

    pub fn one() -> Self {
        Numeral(BigUint::one())
    }

    pub fn from_u64(v: u64) -> Self {
        Numeral(BigUint::from(v))
    }

    pub fn from_biguint(v: BigUint) -> Self {
        Numeral(v)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Number of digits in the canonical sequence (zero has none).
    pub fn len(&self) -> u64 {
        self.0.bits()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_zero()
    }

    /// Digit at 1-based position `pos`, or `None` past the end of the sequence.
    pub fn digit(&self, pos: u64) -> Option<bool> {
        if pos == 0 || pos > self.len() {
            None
        } else {
            Some(self.0.bit(pos - 1))
        }
    }

    /// Digit at `pos` with the canonical sequence padded by zeros upward.
    pub fn digit_padded(&self, pos: u64) -> bool {
        pos >= 1 && self.0.bit(pos - 1)
    }

    /// Iterator over the canonical digits, least significant first.
    pub fn digits(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len()).map(move |i| self.0.bit(i - 1))
    }

    /// The last `k` binary digits, zero-padded to length exactly `k`.
    pub fn suffix(&self, k: u64) -> DigitString {
        DigitString::new((1..=k).map(|i| self.digit_padded(i)).collect())
    }

    /// 2-adic valuation: the position count of trailing zero digits.
    pub fn v2(&self) -> Result<u64, NumeralError> {
        self.0.trailing_zeros().ok_or(NumeralError::ZeroValuation)
    }

    pub fn add(&self, rhs: &Numeral) -> Numeral {
        Numeral(&self.0 + &rhs.0)
    }

    pub fn mul(&self, rhs: &Numeral) -> Numeral {
        Numeral(&self.0 * &rhs.0)
    }

    pub fn checked_sub(&self, rhs: &Numeral) -> Result<Numeral, NumeralError> {
        if rhs.0 > self.0 {
            Err(NumeralError::Underflow)
        } else {
            Ok(Numeral(&self.0 - &rhs.0))
        }
    }

    pub fn successor(&self) -> Numeral {
        Numeral(&self.0 + 1u32)
    }

    /// Floor division by a constant.
    pub fn div_floor(&self, divisor: u64) -> Result<Numeral, NumeralError> {
        if divisor == 0 {
            return Err(NumeralError::DivisionByZero);
        }
        Ok(Numeral(&self.0 / BigUint::from(divisor)))
    }

    /// Exact halving; `None` on odd input.
    pub fn half(&self) -> Option<Numeral> {
        if self.digit_padded(1) {
            None
        } else {
            Some(Numeral(&self.0 >> 1u32))
        }
    }

    /// The last `k` digits of this number written in `base`, zero-padded and
    /// rendered most significant first (the ordinary writing order).
    pub fn trailing_digits(&self, k: u64, base: u64) -> Result<String, NumeralError> {
        if !(2..=36).contains(&base) {
            return Err(NumeralError::UnsupportedBase(base));
        }
        let digits = self.0.to_radix_le(base as u32);
        let mut out = String::with_capacity(k as usize);
        for i in (0..k).rev() {
            let d = digits.get(i as usize).copied().unwrap_or(0);
            out.push(char::from_digit(d as u32, base as u32).expect("digit below base"));
        }
        Ok(out)
    }
}

impl fmt::Display for Numeral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Numeral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Numeral({})", self.0)
    }
}

impl From<u64> for Numeral {
    fn from(v: u64) -> Self {
        Numeral::from_u64(v)
    }
}

impl FromStr for Numeral {
    type Err = NumeralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigUint::from_str(s)
            .map(Numeral)
            .map_err(|_| NumeralError::Parse(s.to_owned()))
    }
}

/// The 2-adic metric: `0` when equal, otherwise `2^(-v2(|x - y|))`.
pub fn metric2(x: &Numeral, y: &Numeral) -> Rational {
    if x == y {
        return Rational::zero();
    }
    let diff = if x.0 > y.0 { &x.0 - &y.0 } else { &y.0 - &x.0 };
    let v = diff.trailing_zeros().expect("difference is nonzero");
    let denom = BigInt::one() << v;
    Rational::new(BigInt::one(), denom)
}

/// A finite binary digit string, least significant first, which unlike a
/// canonical numeral may carry zeros at its most significant end.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct DigitString {
    bits: Vec<bool>,
}

impl DigitString {
    pub fn new(bits: Vec<bool>) -> Self {
        DigitString { bits }
    }

    pub fn empty() -> Self {
        DigitString { bits: Vec::new() }
    }

    pub fn len(&self) -> u64 {
        self.bits.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Digit at 1-based position `pos` (position 1 is least significant).
    /// The digit at `pos`, reading positions past the end as 0.
    pub fn bit_padded(&self, pos: u64) -> bool {
        self.bit(pos).unwrap_or(false)
    }

    pub fn bit(&self, pos: u64) -> Option<bool> {
        if pos == 0 {
            None
        } else {
            self.bits.get(pos as usize - 1).copied()
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Numeric value of the string; zeros at the significant end are ignored,
    /// so this is also the member the string contributes by convention to its
    /// own suffix class.
    pub fn value(&self) -> Numeral {
        let mut v = BigUint::zero();
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                v.set_bit(i as u64, true);
            }
        }
        Numeral(v)
    }

    /// 2^len, the modulus of the residue class this string carves out.
    pub fn modulus(&self) -> BigUint {
        BigUint::one() << self.bits.len()
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.bits.iter().rev() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DigitString(\"{self}\")")
    }
}

impl FromStr for DigitString {
    type Err = NumeralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars().rev() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(NumeralError::Parse(s.to_owned())),
            }
        }
        Ok(DigitString { bits })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// An integer as a sign together with a magnitude numeral.
///
/// Invariant: the sign is `Zero` exactly when the magnitude is the empty
/// digit sequence; the constructors normalize.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedNumeral {
    sign: Sign,
    magnitude: Numeral,
}

impl SignedNumeral {
    pub fn zero() -> Self {
        SignedNumeral {
            sign: Sign::Zero,
            magnitude: Numeral::zero(),
        }
    }

    pub fn positive(magnitude: Numeral) -> Self {
        if magnitude.is_zero() {
            Self::zero()
        } else {
            SignedNumeral {
                sign: Sign::Positive,
                magnitude,
            }
        }
    }

    pub fn negative(magnitude: Numeral) -> Self {
        if magnitude.is_zero() {
            Self::zero()
        } else {
            SignedNumeral {
                sign: Sign::Negative,
                magnitude,
            }
        }
    }

    pub fn from_i64(v: i64) -> Self {
        if v < 0 {
            Self::negative(Numeral::from_u64(v.unsigned_abs()))
        } else {
            Self::positive(Numeral::from_u64(v as u64))
        }
    }

    pub fn from_natural(n: Numeral) -> Self {
        Self::positive(n)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        let (sign, mag) = v.into_parts();
        match sign {
            num_bigint::Sign::Minus => Self::negative(Numeral(mag)),
            _ => Self::positive(Numeral(mag)),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        let mag = BigInt::from(self.magnitude.0.clone());
        match self.sign {
            Sign::Negative => -mag,
            _ => mag,
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn magnitude(&self) -> &Numeral {
        &self.magnitude
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    pub fn neg(&self) -> SignedNumeral {
        match self.sign {
            Sign::Zero => Self::zero(),
            Sign::Positive => Self::negative(self.magnitude.clone()),
            Sign::Negative => Self::positive(self.magnitude.clone()),
        }
    }

    pub fn add(&self, rhs: &SignedNumeral) -> SignedNumeral {
        Self::from_bigint(self.to_bigint() + rhs.to_bigint())
    }

    pub fn sub(&self, rhs: &SignedNumeral) -> SignedNumeral {
        Self::from_bigint(self.to_bigint() - rhs.to_bigint())
    }

    pub fn mul(&self, rhs: &SignedNumeral) -> SignedNumeral {
        Self::from_bigint(self.to_bigint() * rhs.to_bigint())
    }

    /// Floor division by a constant (rounds toward negative infinity).
    pub fn div_floor(&self, divisor: u64) -> Result<SignedNumeral, NumeralError> {
        if divisor == 0 {
            return Err(NumeralError::DivisionByZero);
        }
        let q = self.to_bigint().div_floor(&BigInt::from(divisor));
        Ok(Self::from_bigint(q))
    }
}

impl fmt::Display for SignedNumeral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == Sign::Negative {
            write!(f, "-{}", self.magnitude)
        } else {
            write!(f, "{}", self.magnitude)
        }
    }
}

impl fmt::Debug for SignedNumeral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedNumeral({self})")
    }
}

impl From<i64> for SignedNumeral {
    fn from(v: i64) -> Self {
        SignedNumeral::from_i64(v)
    }
}

impl FromStr for SignedNumeral {
    type Err = NumeralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (neg, digits) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let mag: Numeral = digits.parse()?;
        Ok(if neg {
            SignedNumeral::negative(mag)
        } else {
            SignedNumeral::positive(mag)
        })
    }
}
