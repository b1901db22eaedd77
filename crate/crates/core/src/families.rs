//! Special seed families and automated checks of their conjectured
//! trajectory shapes.
//!
//! Families: the trinomials `T_n = x^n+x+1` and `U_n = x^n+x^(n-1)+1`
//! (reciprocals of each other), the even quadrinomial `S_n = x^n+x^7+x^3+1`,
//! the powers `M1^n + 1`, and three fixed degree-14 seeds `P1..P3` whose
//! trajectories have length `deg + 1`.
//!
//! The conjecture checkers never fail hard: they emit verdict tables, since
//! the statements they test are open. A mismatch is a finding about the
//! conjecture, not a build error.

use serde::Serialize;
use thiserror::Error;

use crate::collatz::{self, TraceError};
use crate::gf2poly::Poly;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("parameter {n} out of range for family {family}: requires n >= {min}")]
    ParamOutOfRange {
        family: &'static str,
        n: u32,
        min: u32,
    },
    #[error(transparent)]
    Trace(#[from] TraceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyId {
    /// `x^n + x + 1`, n >= 2.
    T(u32),
    /// `x^n + x^(n-1) + 1`, n >= 2; the reciprocal of `T(n)`.
    U(u32),
    /// `x^n + x^7 + x^3 + 1`, n >= 8; always even.
    S(u32),
    /// `M1^n + 1`, n >= 1; always even.
    M1Power(u32),
    P1,
    P2,
    P3,
}

impl FamilyId {
    pub fn label(&self) -> &'static str {
        match self {
            FamilyId::T(_) => "t",
            FamilyId::U(_) => "u",
            FamilyId::S(_) => "s",
            FamilyId::M1Power(_) => "mpow",
            FamilyId::P1 => "p1",
            FamilyId::P2 => "p2",
            FamilyId::P3 => "p3",
        }
    }

    pub fn parameter(&self) -> Option<u32> {
        match self {
            FamilyId::T(n) | FamilyId::U(n) | FamilyId::S(n) | FamilyId::M1Power(n) => Some(*n),
            _ => None,
        }
    }

    pub fn generate(&self) -> Result<Poly, FamilyError> {
        let check = |n: u32, min: u32, family: &'static str| {
            if n < min {
                Err(FamilyError::ParamOutOfRange { family, n, min })
            } else {
                Ok(())
            }
        };
        Ok(match *self {
            FamilyId::T(n) => {
                check(n, 2, "t")?;
                &(&Poly::monomial(n as usize) + &Poly::x()) + &Poly::one()
            }
            FamilyId::U(n) => {
                check(n, 2, "u")?;
                &(&Poly::monomial(n as usize) + &Poly::monomial(n as usize - 1)) + &Poly::one()
            }
            FamilyId::S(n) => {
                check(n, 8, "s")?;
                let mut p = &Poly::monomial(n as usize) + &Poly::monomial(7);
                p += &Poly::monomial(3);
                p += &Poly::one();
                p
            }
            FamilyId::M1Power(n) => {
                check(n, 1, "mpow")?;
                Poly::m1().pow(u64::from(n)) + Poly::one()
            }
            FamilyId::P1 => "x^14+x^10+x^9+x^8+x^3+x^2+1".parse().unwrap(),
            FamilyId::P2 => "x^14+x^12+x^9+x^6+x^4+x^3+1".parse().unwrap(),
            FamilyId::P3 => "x^14+x^13+x^9+x^8+x^6+x^5+x^3+x^2+1".parse().unwrap(),
        })
    }

    /// The generated seed with its odd degree sequence and length.
    pub fn sequence(&self) -> Result<(Poly, Vec<usize>), FamilyError> {
        let seed = self.generate()?;
        let degrees = collatz::odd_degree_sequence(&seed)?;
        Ok((seed, degrees))
    }
}

/// Odd-core identity for `M1^n + 1`: with `n = 2^r * u`, `u` odd, the core
/// must equal the Frobenius power of the geometric sum,
/// `(M1^(u-1) + ... + M1 + 1)^(2^r)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MPowCoreCheck {
    pub n: u32,
    pub expected: Poly,
    pub observed: Poly,
    pub equal: bool,
}

pub fn mpow_odd_core(n: u32) -> Result<MPowCoreCheck, FamilyError> {
    if n < 1 {
        return Err(FamilyError::ParamOutOfRange {
            family: "mpow",
            n,
            min: 1,
        });
    }
    let two_exp = n.trailing_zeros();
    let odd_part_of_n = n >> two_exp;
    let mut geometric = Poly::zero();
    let mut power = Poly::one();
    for _ in 0..odd_part_of_n {
        geometric += &power;
        power = &power * &Poly::m1();
    }
    let mut expected = geometric;
    for _ in 0..two_exp {
        expected = expected.square();
    }
    let seed = FamilyId::M1Power(n).generate()?;
    let observed = collatz::odd_part(&seed)?.core;
    let equal = expected == observed;
    Ok(MPowCoreCheck {
        n,
        expected,
        observed,
        equal,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConjectureId {
    /// Odd-sequence length of `M1^(2^r - j) + 1` is `j + 1`.
    C2,
    /// Odd degree sequence of `x^n+x+1` falls into constant blocks of sizes
    /// 1, 1, 2, 4, ..., 2^(s-1).
    C3,
    /// Odd-sequence length of `x^n+x+1` is `2^s + 1`.
    C4,
}

impl ConjectureId {
    pub fn label(&self) -> &'static str {
        match self {
            ConjectureId::C2 => "c2",
            ConjectureId::C3 => "c3",
            ConjectureId::C4 => "c4",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureRow {
    pub family: &'static str,
    /// Seed degree parameter (for C2 this is the exponent of `M1`).
    pub n: u32,
    pub predicted: String,
    pub observed: String,
    pub verdict: Verdict,
    /// The trace data the verdict was computed from.
    pub odd_degrees: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub conjecture: ConjectureId,
    pub rows: Vec<ConjectureRow>,
}

impl ConjectureReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.verdict == Verdict::Holds)
    }

    pub const CSV_HEADER: &'static str = "family,n,predicted,observed,verdict";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.family,
                row.n,
                row.predicted,
                row.observed,
                row.verdict.label()
            ));
        }
        out
    }
}

/// For each `r` in the range and each `j` in `0..=2^(r-1)-1`, compares the
/// odd-sequence length of `M1^(2^r - j) + 1` against `j + 1`.
pub fn check_conjecture_2(r_range: std::ops::RangeInclusive<u32>) -> Result<ConjectureReport, FamilyError> {
    if *r_range.start() < 1 {
        return Err(FamilyError::ParamOutOfRange {
            family: "mpow",
            n: *r_range.start(),
            min: 1,
        });
    }
    let mut rows = Vec::new();
    for r in r_range {
        for j in 0..1u32 << (r - 1) {
            let n = (1u32 << r) - j;
            let seed = FamilyId::M1Power(n).generate()?;
            let degrees = collatz::odd_degree_sequence(&seed)?;
            let predicted = j + 1;
            let observed = degrees.len() as u32;
            rows.push(ConjectureRow {
                family: "mpow",
                n,
                predicted: predicted.to_string(),
                observed: observed.to_string(),
                verdict: if predicted == observed {
                    Verdict::Holds
                } else {
                    Verdict::Fails
                },
                odd_degrees: degrees,
            });
        }
    }
    Ok(ConjectureReport {
        conjecture: ConjectureId::C2,
        rows,
    })
}

/// Greatest `s >= 1` with `2^(s+1) <= n`; the conjectures about `x^n+x+1`
/// are stated for `n >= 4`.
fn block_exponent(n: u32) -> u32 {
    debug_assert!(n >= 4);
    (n.ilog2()) - 1
}

/// Maximal constant blocks of the non-terminal odd degree sequence.
fn degree_blocks(degrees: &[usize]) -> Vec<usize> {
    let body = &degrees[..degrees.len() - 1];
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < body.len() {
        let mut j = i + 1;
        while j < body.len() && body[j] == body[i] {
            j += 1;
        }
        blocks.push(j - i);
        i = j;
    }
    blocks
}

fn format_blocks(blocks: &[usize]) -> String {
    blocks
        .iter()
        .map(|b| b.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn require_at_least_4(n_range: &std::ops::RangeInclusive<u32>) -> Result<(), FamilyError> {
    if *n_range.start() < 4 {
        Err(FamilyError::ParamOutOfRange {
            family: "t",
            n: *n_range.start(),
            min: 4,
        })
    } else {
        Ok(())
    }
}

/// For each `n`, partitions the odd degree sequence of `x^n+x+1` (excluding
/// the terminal 0) into maximal constant blocks and compares the block sizes
/// with `1, 1, 2, 4, ..., 2^(s-1)`. For `s = 1` there is nothing to check
/// and the row holds vacuously.
pub fn check_conjecture_3(n_range: std::ops::RangeInclusive<u32>) -> Result<ConjectureReport, FamilyError> {
    require_at_least_4(&n_range)?;
    let mut rows = Vec::new();
    for n in n_range {
        let degrees = collatz::odd_degree_sequence(&FamilyId::T(n).generate()?)?;
        let s = block_exponent(n);
        let observed_blocks = degree_blocks(&degrees);
        let (predicted, verdict) = if s < 2 {
            ("vacuous".to_string(), Verdict::Holds)
        } else {
            let expected: Vec<usize> = std::iter::once(1)
                .chain((0..s).map(|t| 1usize << t))
                .collect();
            let verdict = if observed_blocks == expected {
                Verdict::Holds
            } else {
                Verdict::Fails
            };
            (format_blocks(&expected), verdict)
        };
        rows.push(ConjectureRow {
            family: "t",
            n,
            predicted,
            observed: format_blocks(&observed_blocks),
            verdict,
            odd_degrees: degrees,
        });
    }
    Ok(ConjectureReport {
        conjecture: ConjectureId::C3,
        rows,
    })
}

/// For each `n`, compares the odd-sequence length of `x^n+x+1` (terminal 0
/// included, as the tables display it) against `2^s + 1`.
pub fn check_conjecture_4(n_range: std::ops::RangeInclusive<u32>) -> Result<ConjectureReport, FamilyError> {
    require_at_least_4(&n_range)?;
    let mut rows = Vec::new();
    for n in n_range {
        let degrees = collatz::odd_degree_sequence(&FamilyId::T(n).generate()?)?;
        let s = block_exponent(n);
        let predicted = (1u64 << s) + 1;
        let observed = degrees.len() as u64;
        rows.push(ConjectureRow {
            family: "t",
            n,
            predicted: predicted.to_string(),
            observed: observed.to_string(),
            verdict: if predicted == observed {
                Verdict::Holds
            } else {
                Verdict::Fails
            },
            odd_degrees: degrees,
        });
    }
    Ok(ConjectureReport {
        conjecture: ConjectureId::C4,
        rows,
    })
}

/// Side-by-side odd degree sequences of a seed, its conjugate `bar(A)`, and
/// its reciprocal `A*`. Conjugation always commutes with the trajectory;
/// the reciprocal generally does not, and `reciprocal_equal` simply records
/// what happened.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugationReport {
    pub seed: Poly,
    pub seed_degrees: Vec<usize>,
    pub conjugate: Poly,
    pub conjugate_degrees: Vec<usize>,
    pub reciprocal: Poly,
    pub reciprocal_degrees: Vec<usize>,
    pub conjugate_equal: bool,
    pub reciprocal_equal: bool,
}

pub fn conjugation_experiment(seed: &Poly) -> Result<ConjugationReport, FamilyError> {
    let seed_degrees = collatz::odd_degree_sequence(seed)?;
    let conjugate = seed.bar();
    let conjugate_degrees = collatz::odd_degree_sequence(&conjugate)?;
    let reciprocal = seed.reciprocal().map_err(|_| TraceError::ZeroPolynomial)?;
    let reciprocal_degrees = collatz::odd_degree_sequence(&reciprocal)?;
    Ok(ConjugationReport {
        conjugate_equal: seed_degrees == conjugate_degrees,
        reciprocal_equal: seed_degrees == reciprocal_degrees,
        seed: seed.clone(),
        seed_degrees,
        conjugate,
        conjugate_degrees,
        reciprocal,
        reciprocal_degrees,
    })
}
