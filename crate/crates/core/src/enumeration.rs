//! Iterators and counts over degree strata of binary polynomials.
//!
//! A stratum is the set of degree-`d` polynomials meeting one constraint:
//! everything, a fixed value at 0 or at 1, or oddness. Iteration yields each
//! member exactly once in ascending mask order, and [`count`] cross-checks
//! the enumerated size against the closed form (`2^(d-1)` for the four
//! value strata, `2^(d-2)` for the odd stratum at `d >= 2`).

use thiserror::Error;

use crate::gf2poly::Poly;

/// Strata are enumerated through `u64` masks, so degrees stop here.
pub const MAX_DEGREE: u32 = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    All,
    /// Polynomials with the given value at 0 (i.e. constant term).
    ValueAt0(bool),
    /// Polynomials with the given value at 1 (i.e. coefficient parity).
    ValueAt1(bool),
    /// No linear factor: value 1 both at 0 and at 1.
    Odd,
}

impl Constraint {
    pub fn label(self) -> &'static str {
        match self {
            Constraint::All => "all",
            Constraint::ValueAt0(false) => "p(0)=0",
            Constraint::ValueAt0(true) => "p(0)=1",
            Constraint::ValueAt1(false) => "p(1)=0",
            Constraint::ValueAt1(true) => "p(1)=1",
            Constraint::Odd => "odd",
        }
    }

    fn matches(self, mask: u64) -> bool {
        match self {
            Constraint::All => true,
            Constraint::ValueAt0(v) => (mask & 1 == 1) == v,
            Constraint::ValueAt1(v) => (mask.count_ones() & 1 == 1) == v,
            Constraint::Odd => mask & 1 == 1 && mask.count_ones() & 1 == 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("degree {degree} out of range for stratum `{constraint}` (supported {min}..={max})")]
    DegreeOutOfRange {
        degree: u32,
        constraint: &'static str,
        min: u32,
        max: u32,
    },
    #[error("count mismatch for degree {degree} stratum `{constraint}`: enumerated {enumerated}, formula {formula}")]
    CountMismatch {
        degree: u32,
        constraint: &'static str,
        enumerated: u64,
        formula: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stratum {
    degree: u32,
    constraint: Constraint,
}

impl Stratum {
    /// Degree 0 is allowed only for `All`; everything else needs `d >= 1`.
    pub fn new(degree: u32, constraint: Constraint) -> Result<Self, EnumError> {
        let min = if constraint == Constraint::All { 0 } else { 1 };
        if degree < min || degree > MAX_DEGREE {
            return Err(EnumError::DegreeOutOfRange {
                degree,
                constraint: constraint.label(),
                min,
                max: MAX_DEGREE,
            });
        }
        Ok(Stratum { degree, constraint })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn constraint(&self) -> Constraint {
        self.constraint
    }

    /// Closed-form size, where one is stated: `2^d` for all, `2^(d-1)` for
    /// the four value strata, `2^(d-2)` for odd at `d >= 2`.
    pub fn count_formula(&self) -> Option<u64> {
        let d = self.degree;
        match self.constraint {
            Constraint::All => Some(1 << d),
            Constraint::ValueAt0(_) | Constraint::ValueAt1(_) => Some(1 << (d - 1)),
            Constraint::Odd => (d >= 2).then(|| 1 << (d - 2)),
        }
    }

    pub fn iter(&self) -> StratumIter {
        let start = 1u64 << self.degree;
        StratumIter {
            cursor: start,
            end: start << 1,
            constraint: self.constraint,
        }
    }

    /// Splits the mask interval into `parts` ascending sub-iterators for
    /// parallel consumption; together they cover the stratum exactly once.
    pub fn split(&self, parts: u64) -> Vec<StratumIter> {
        let start = 1u64 << self.degree;
        let len = start;
        let parts = parts.clamp(1, len);
        let chunk = len / parts;
        (0..parts)
            .map(|i| {
                let lo = start + i * chunk;
                let hi = if i + 1 == parts { start << 1 } else { lo + chunk };
                StratumIter {
                    cursor: lo,
                    end: hi,
                    constraint: self.constraint,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct StratumIter {
    cursor: u64,
    end: u64,
    constraint: Constraint,
}

impl Iterator for StratumIter {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        while self.cursor < self.end {
            let mask = self.cursor;
            self.cursor += 1;
            if self.constraint.matches(mask) {
                return Some(Poly::from_word(mask));
            }
        }
        None
    }
}

/// Enumerated size of the stratum, cross-checked against the closed form.
/// A mismatch means the arithmetic itself is broken, so it is an error, not
/// a finding.
pub fn count(stratum: Stratum) -> Result<u64, EnumError> {
    let enumerated = stratum.iter().count() as u64;
    if let Some(formula) = stratum.count_formula() {
        if formula != enumerated {
            return Err(EnumError::CountMismatch {
                degree: stratum.degree(),
                constraint: stratum.constraint().label(),
                enumerated,
                formula,
            });
        }
    }
    Ok(enumerated)
}
