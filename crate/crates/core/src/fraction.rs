//! Exact, unreduced integer fractions.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A non-negative fraction `numerator / denominator` with a non-zero
/// denominator.
///
/// The fraction is *not* reduced: a metric computed as 2 of 2 nodes is kept
/// as `2/2` so the counts behind it stay visible. Equality and ordering are
/// by value, so `2/2 == 1/1`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(into = "FractionRepr", try_from = "FractionRepr")]
pub struct Fraction {
    numerator: u64,
    denominator: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FractionError {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("invalid decimal {0:?}")]
    InvalidDecimal(String),
    #[error("decimal {0:?} has too many digits")]
    TooPrecise(String),
}

impl Fraction {
    pub fn new(numerator: u64, denominator: u64) -> Result<Self, FractionError> {
        if denominator == 0 {
            return Err(FractionError::ZeroDenominator);
        }
        Ok(Fraction {
            numerator,
            denominator,
        })
    }

    pub const ZERO: Fraction = Fraction {
        numerator: 0,
        denominator: 1,
    };

    pub const ONE: Fraction = Fraction {
        numerator: 1,
        denominator: 1,
    };

    pub fn numerator(self) -> u64 {
        self.numerator
    }

    pub fn denominator(self) -> u64 {
        self.denominator
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// Parses a plain decimal such as `0.95` or `1` into the exact fraction
    /// it denotes (`95/100`, `1/1`).
    pub fn from_decimal(s: &str) -> Result<Self, FractionError> {
        let bad = || FractionError::InvalidDecimal(s.to_string());
        let (int, frac) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        if frac.len() > 18 {
            return Err(FractionError::TooPrecise(s.to_string()));
        }
        let denominator = 10u64.pow(frac.len() as u32);
        let digits = format!("{int}{frac}");
        let numerator: u64 = if digits.is_empty() {
            0
        } else {
            digits
                .parse()
                .map_err(|_| FractionError::TooPrecise(s.to_string()))?
        };
        Fraction::new(numerator, denominator)
    }

    /// Decimal rendering with `places` digits after the point, rounding half
    /// to even. Computed on integers, so no binary floating-point error.
    pub fn to_decimal(self, places: u32) -> String {
        let scale = 10u128.pow(places);
        let num = self.numerator as u128 * scale;
        let den = self.denominator as u128;
        let mut q = num / den;
        let r = num % den;
        match (2 * r).cmp(&den) {
            Ordering::Greater => q += 1,
            Ordering::Equal if q % 2 == 1 => q += 1,
            _ => {}
        }
        if places == 0 {
            return q.to_string();
        }
        let int = q / scale;
        let frac = q % scale;
        format!("{int}.{frac:0width$}", width = places as usize)
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Fraction {}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.numerator as u128 * other.denominator as u128;
        let rhs = other.numerator as u128 * self.denominator as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

impl FromStr for Fraction {
    type Err = FractionError;

    /// Accepts `n/d` or a plain decimal.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let parse = |x: &str| {
                    x.trim()
                        .parse::<u64>()
                        .map_err(|_| FractionError::InvalidDecimal(s.to_string()))
                };
                Fraction::new(parse(n)?, parse(d)?)
            }
            None => Fraction::from_decimal(s),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FractionRepr {
    numerator: u64,
    denominator: u64,
    decimal: String,
}

impl From<Fraction> for FractionRepr {
    fn from(f: Fraction) -> Self {
        FractionRepr {
            numerator: f.numerator,
            denominator: f.denominator,
            decimal: f.to_decimal(4),
        }
    }
}

impl TryFrom<FractionRepr> for Fraction {
    type Error = FractionError;

    fn try_from(r: FractionRepr) -> Result<Self, Self::Error> {
        let f = Fraction::new(r.numerator, r.denominator)?;
        if f.to_decimal(4) != r.decimal {
            return Err(FractionError::InvalidDecimal(r.decimal));
        }
        Ok(f)
    }
}
