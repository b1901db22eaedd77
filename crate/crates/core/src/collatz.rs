//! The Collatz-style transformation on binary polynomials.
//!
//! From an odd term `A` (no factor of `x` or `x+1`) one step forms the even
//! term `E = 1 + M1*A`, which both `x` and `x+1` divide, and strips
//! `x^a (x+1)^b` to reach the next odd term. Iterating from any nonzero seed
//! reaches the fixed pair `(x^2+x, 1)` after finitely many steps, and
//! [`trace`] records the whole run.
//!
//! Length convention: `m` counts the odd terms through the first `1`
//! inclusive, matching the printed degree-sequence tables; `r_a = m + 1` is
//! carried alongside for statements about the padded sequence that repeats
//! the terminal `1`.

use serde::Serialize;
use thiserror::Error;

use crate::gf2poly::{bar_word, Poly};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not odd: {0}")]
    NotOdd(Poly),
    #[error("step cap {cap} exceeded before termination")]
    StepCapExceeded {
        cap: usize,
        /// Present when the caller was building a full trace.
        partial: Option<Box<CollatzTrace>>,
    },
}

/// `p = x^a (x+1)^b * core` with the core odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddDecomposition {
    /// Valuation at `x`.
    pub val_x: usize,
    /// Valuation at `x+1`.
    pub val_x1: usize,
    pub core: Poly,
}

impl OddDecomposition {
    /// Rebuilds `x^a (x+1)^b * core`.
    pub fn reconstruct(&self) -> Poly {
        let x1_pow = Poly::monomial(self.val_x1).bar();
        &(&self.core << self.val_x) * &x1_pow
    }
}

/// Splits off all factors of `x` and `x+1`.
pub fn odd_part(p: &Poly) -> Result<OddDecomposition, TraceError> {
    if p.is_zero() {
        return Err(TraceError::ZeroPolynomial);
    }
    let (val_x, val_x1, core) = strip(p);
    Ok(OddDecomposition { val_x, val_x1, core })
}

/// `(val_x, val_x1, core)` of a nonzero polynomial. Stripping `(x+1)^b` uses
/// the conjugation trick: `p = (x+1)^b q` iff `bar(p) = x^b bar(q)`.
fn strip(p: &Poly) -> (usize, usize, Poly) {
    let a = p.val_x().expect("nonzero");
    let shifted = p >> a;
    let conj = shifted.bar();
    let b = conj.val_x().expect("nonzero");
    let core = (&conj >> b).bar();
    (a, b, core)
}

/// `1 + M1*p` via shifts: `M1*p = p + (p<<1) + (p<<2)`.
fn one_plus_m1_mul(p: &Poly) -> Poly {
    let mut out = &(p << 1usize) + &(p << 2usize);
    out += p;
    out += &Poly::one();
    out
}

/// One step from an odd term: the even term `1 + M1*odd`, its valuations,
/// and the next odd term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepResult {
    pub even: Poly,
    pub val_x: usize,
    pub val_x1: usize,
    pub next_odd: Poly,
}

pub fn step(odd: &Poly) -> Result<StepResult, TraceError> {
    if odd.is_zero() {
        return Err(TraceError::ZeroPolynomial);
    }
    if !odd.is_odd() {
        return Err(TraceError::NotOdd(odd.clone()));
    }
    let even = one_plus_m1_mul(odd);
    let (val_x, val_x1, next_odd) = strip(&even);
    Ok(StepResult {
        even,
        val_x,
        val_x1,
        next_odd,
    })
}

/// One step on an odd mask whose degree is at most 61, so the even term
/// still fits one word. Returns `(val_x, val_x1, next_odd)`.
pub(crate) fn step_word(odd: u64) -> (u32, u32, u64) {
    debug_assert!(odd & 1 == 1);
    let even = odd ^ (odd << 1) ^ (odd << 2) ^ 1;
    let a = even.trailing_zeros();
    let conj = bar_word(even >> a);
    let b = conj.trailing_zeros();
    (a, b, bar_word(conj >> b))
}

/// Next odd term after `cur`, which must already be odd.
pub(crate) fn advance_odd(cur: &Poly) -> Poly {
    debug_assert!(cur.is_odd());
    strip(&one_plus_m1_mul(cur)).2
}

/// Trajectory record for one seed.
///
/// Index `k` pairs `odd_terms[k]` with `even_terms[k] = 1 + M1*odd_terms[k]`
/// and `valuations[k]`, the valuations of that even term. Stripping
/// `even_terms[k]` yields `odd_terms[k+1]`. The lists end at the first odd
/// term equal to 1, whose even term is `x^2+x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollatzTrace {
    pub seed: Poly,
    pub odd_terms: Vec<Poly>,
    pub even_terms: Vec<Poly>,
    /// `(val_x, val_x1)` of each even term.
    pub valuations: Vec<(usize, usize)>,
    /// Count of odd terms through the first 1, inclusive.
    pub m: usize,
    /// `m + 1`.
    pub r_a: usize,
    pub odd_degrees: Vec<usize>,
    pub even_degrees: Vec<usize>,
    /// False when a `poly_limit` stopped the polynomial lists early; the
    /// degree and valuation lists are always complete.
    pub polys_complete: bool,
}

#[derive(Debug, Clone, Default)]
pub struct TraceOptions {
    /// Maximum number of odd terms before giving up; defaults to
    /// [`default_step_cap`] of the seed degree.
    pub step_cap: Option<usize>,
    /// Maximum number of polynomials retained in `odd_terms`/`even_terms`;
    /// degrees and valuations are kept regardless.
    pub poly_limit: Option<usize>,
}

/// `2^(min(deg,30)-1) + 1`, clamped to 1e9. Termination is guaranteed below
/// `2^(deg-1)`, so hitting this cap means an arithmetic bug.
pub fn default_step_cap(seed_degree: usize) -> usize {
    let exp = seed_degree.clamp(1, 30) - 1;
    ((1usize << exp) + 1).min(1_000_000_000)
}

pub fn trace(seed: &Poly) -> Result<CollatzTrace, TraceError> {
    trace_with(seed, &TraceOptions::default())
}

pub fn trace_with(seed: &Poly, opts: &TraceOptions) -> Result<CollatzTrace, TraceError> {
    if seed.is_zero() {
        return Err(TraceError::ZeroPolynomial);
    }
    let seed_degree = seed.degree().expect("nonzero");
    let cap = opts
        .step_cap
        .unwrap_or_else(|| default_step_cap(seed_degree));
    let poly_limit = opts.poly_limit.unwrap_or(usize::MAX);

    let mut out = CollatzTrace {
        seed: seed.clone(),
        odd_terms: Vec::new(),
        even_terms: Vec::new(),
        valuations: Vec::new(),
        m: 0,
        r_a: 0,
        odd_degrees: Vec::new(),
        even_degrees: Vec::new(),
        polys_complete: true,
    };

    let mut cur = odd_part(seed)?.core;
    loop {
        let even = one_plus_m1_mul(&cur);
        let (a, b, next) = strip(&even);
        out.odd_degrees.push(cur.degree().expect("odd term nonzero"));
        out.even_degrees.push(even.degree().expect("even term nonzero"));
        out.valuations.push((a, b));
        let done = cur.is_one();
        if out.odd_terms.len() < poly_limit {
            out.odd_terms.push(cur);
            out.even_terms.push(even);
        } else {
            out.polys_complete = false;
        }
        if done {
            break;
        }
        if out.odd_degrees.len() >= cap {
            out.m = out.odd_degrees.len();
            out.r_a = out.m + 1;
            return Err(TraceError::StepCapExceeded {
                cap,
                partial: Some(Box::new(out)),
            });
        }
        cur = next;
    }
    out.m = out.odd_degrees.len();
    out.r_a = out.m + 1;
    // Finite-length bound: the non-terminal odd terms are distinct odd
    // polynomials of degree <= deg(seed), so the sequence has at most
    // 2^(deg-1) entries. Tight at degrees 1 (m=1) and 2 (m=2).
    if (1..=64).contains(&seed_degree) {
        assert!(
            (out.m as u128) <= 1u128 << (seed_degree - 1),
            "length bound m <= 2^(deg-1) violated for seed {seed:#x}"
        );
    }
    Ok(out)
}

/// Degrees of the odd terms, last entry 0. Cheaper than [`trace`]: no
/// polynomial lists, and the loop drops to single-word arithmetic once the
/// current term fits.
pub fn odd_degree_sequence(seed: &Poly) -> Result<Vec<usize>, TraceError> {
    if seed.is_zero() {
        return Err(TraceError::ZeroPolynomial);
    }
    let cap = default_step_cap(seed.degree().expect("nonzero"));
    let mut degrees = Vec::new();
    let mut cur = odd_part(seed)?.core;
    loop {
        let deg = cur.degree().expect("odd term nonzero");
        if deg <= 61 {
            let mut word = cur.low_word();
            loop {
                degrees.push(63 - word.leading_zeros() as usize);
                if word == 1 {
                    return Ok(degrees);
                }
                check_cap(degrees.len(), cap)?;
                word = step_word(word).2;
            }
        }
        degrees.push(deg);
        check_cap(degrees.len(), cap)?;
        cur = advance_odd(&cur);
    }
}

fn check_cap(len: usize, cap: usize) -> Result<(), TraceError> {
    if len >= cap {
        Err(TraceError::StepCapExceeded { cap, partial: None })
    } else {
        Ok(())
    }
}

impl CollatzTrace {
    /// Verifies every within-trace relation; returns the first failure.
    pub fn check_invariants(&self) -> Result<(), String> {
        let m = self.m;
        if m == 0 || self.r_a != m + 1 {
            return Err(format!("inconsistent counters m={m} r_a={}", self.r_a));
        }
        if self.odd_degrees.len() != m
            || self.even_degrees.len() != m
            || self.valuations.len() != m
        {
            return Err("list lengths disagree with m".into());
        }
        if *self.odd_degrees.last().unwrap() != 0 {
            return Err("last odd degree is not 0".into());
        }
        for k in 0..m {
            let (a, b) = self.valuations[k];
            if a < 1 || b < 1 {
                return Err(format!("valuations ({a},{b}) below 1 at index {k}"));
            }
            if self.even_degrees[k] != self.odd_degrees[k] + 2 {
                return Err(format!("even degree != odd degree + 2 at index {k}"));
            }
            let next_degree = if k + 1 < m {
                if self.odd_degrees[k + 1] > self.odd_degrees[k] {
                    return Err(format!("odd degrees increase at index {k}"));
                }
                self.odd_degrees[k + 1]
            } else {
                0
            };
            if self.even_degrees[k] != next_degree + a + b {
                return Err(format!("degree/valuation link broken at index {k}"));
            }
        }
        let stored = self.odd_terms.len();
        if self.even_terms.len() != stored {
            return Err("odd/even polynomial lists differ in length".into());
        }
        if self.polys_complete {
            if stored != m {
                return Err("polys_complete but polynomial lists are short".into());
            }
            if !self.odd_terms[m - 1].is_one() {
                return Err("last odd term is not 1".into());
            }
            if self.even_terms[m - 1] != "x^2+x".parse().unwrap() {
                return Err("last even term is not x^2+x".into());
            }
        }
        for k in 0..stored {
            let odd = &self.odd_terms[k];
            let even = &self.even_terms[k];
            if !odd.is_odd() {
                return Err(format!("odd term at index {k} is not odd"));
            }
            if &one_plus_m1_mul(odd) != even {
                return Err(format!("even term != 1 + M1*odd at index {k}"));
            }
            let (a, b) = self.valuations[k];
            if k + 1 < stored {
                let rebuilt = OddDecomposition {
                    val_x: a,
                    val_x1: b,
                    core: self.odd_terms[k + 1].clone(),
                }
                .reconstruct();
                if &rebuilt != even {
                    return Err(format!("x^a (x+1)^b * next_odd != even at index {k}"));
                }
            }
        }
        if let Some(seed_degree) = self.seed.degree() {
            if (1..=64).contains(&seed_degree) && (self.m as u128) > 1u128 << (seed_degree - 1) {
                return Err("sequence length exceeds 2^(deg-1)".into());
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }

    /// Line-oriented record: a header line, then one line per index.
    pub fn to_text_record(&self) -> String {
        let mut out = format!(
            "seed={:#x} deg={} m={} r_a={}\n",
            self.seed,
            self.seed.degree().map_or(-1, |d| d as i64),
            self.m,
            self.r_a
        );
        for k in 0..self.m {
            let (a, b) = self.valuations[k];
            if k < self.odd_terms.len() {
                out.push_str(&format!(
                    "k={} odd={:#x} odd_deg={} even={:#x} even_deg={} a={} b={}\n",
                    k,
                    self.odd_terms[k],
                    self.odd_degrees[k],
                    self.even_terms[k],
                    self.even_degrees[k],
                    a,
                    b
                ));
            } else {
                out.push_str(&format!(
                    "k={} odd_deg={} even_deg={} a={} b={}\n",
                    k, self.odd_degrees[k], self.even_degrees[k], a, b
                ));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn odd_part_examples() {
        let d = odd_part(&p("x^3+x^2")).unwrap();
        assert_eq!((d.val_x, d.val_x1, d.core.clone()), (2, 1, Poly::one()));
        assert_eq!(d.reconstruct(), p("x^3+x^2"));

        let d = odd_part(&p("x^2+x+1")).unwrap();
        assert_eq!((d.val_x, d.val_x1, d.core), (0, 0, p("x^2+x+1")));

        let d = odd_part(&p("x^5+x^4")).unwrap();
        assert_eq!((d.val_x, d.val_x1, d.core), (4, 1, Poly::one()));

        assert_eq!(odd_part(&Poly::zero()), Err(TraceError::ZeroPolynomial));
    }

    #[test]
    fn step_examples() {
        let s = step(&Poly::one()).unwrap();
        assert_eq!(
            (s.even, s.val_x, s.val_x1, s.next_odd),
            (p("x^2+x"), 1, 1, Poly::one())
        );

        let s = step(&p("x^2+x+1")).unwrap();
        assert_eq!(
            (s.even, s.val_x, s.val_x1, s.next_odd),
            (p("x^4+x^2"), 2, 2, Poly::one())
        );

        let s = step(&p("x^3+x+1")).unwrap();
        assert_eq!(
            (s.even, s.val_x, s.val_x1, s.next_odd),
            (p("x^5+x^4"), 4, 1, Poly::one())
        );

        assert!(matches!(step(&p("x^2+x")), Err(TraceError::NotOdd(_))));
        assert_eq!(step(&Poly::zero()), Err(TraceError::ZeroPolynomial));
    }

    #[test]
    fn step_word_matches_step() {
        for mask in (1u64..1 << 12).step_by(2) {
            let poly = Poly::from_word(mask);
            if !poly.is_odd() {
                continue;
            }
            let wide = step(&poly).unwrap();
            let (a, b, next) = step_word(mask);
            assert_eq!(a as usize, wide.val_x);
            assert_eq!(b as usize, wide.val_x1);
            assert_eq!(Poly::from_word(next), wide.next_odd);
        }
    }

    #[test]
    fn trace_examples() {
        let t = trace(&p("x")).unwrap();
        assert_eq!(t.odd_terms, vec![Poly::one()]);
        assert_eq!(t.even_terms, vec![p("x^2+x")]);
        assert_eq!((t.m, t.r_a), (1, 2));

        let t = trace(&p("x^2+x+1")).unwrap();
        assert_eq!(t.odd_terms, vec![p("x^2+x+1"), Poly::one()]);
        assert_eq!(t.even_terms, vec![p("x^4+x^2"), p("x^2+x")]);
        assert_eq!(t.valuations, vec![(2, 2), (1, 1)]);
        assert_eq!((t.m, t.r_a), (2, 3));
        t.check_invariants().unwrap();

        // Seeds of the form x^a (x+1)^b collapse immediately.
        let t = trace(&p("x^6+x^5")).unwrap();
        assert_eq!((t.m, t.r_a), (1, 2));
    }

    #[test]
    fn trace_m1_pow15_plus_one() {
        let seed = Poly::m1().pow(15) + Poly::one();
        let t = trace(&seed).unwrap();
        assert_eq!(t.odd_degrees, vec![28, 0]);
        assert_eq!(t.m, 2);
        t.check_invariants().unwrap();
    }

    #[test]
    fn degree_sequences_match_trace() {
        for mask in 1u64..1 << 10 {
            let poly = Poly::from_word(mask);
            let seq = odd_degree_sequence(&poly).unwrap();
            let t = trace(&poly).unwrap();
            assert_eq!(seq, t.odd_degrees);
        }
    }

    #[test]
    fn step_cap_carries_partial() {
        let seed = p("x^8+x^3+1"); // m = 7
        let err = trace_with(
            &seed,
            &TraceOptions {
                step_cap: Some(3),
                poly_limit: None,
            },
        )
        .unwrap_err();
        match err {
            TraceError::StepCapExceeded { cap, partial } => {
                assert_eq!(cap, 3);
                assert_eq!(partial.unwrap().odd_degrees.len(), 3);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn poly_limit_keeps_degrees() {
        let seed = p("x^8+x^3+1");
        let t = trace_with(
            &seed,
            &TraceOptions {
                step_cap: None,
                poly_limit: Some(2),
            },
        )
        .unwrap();
        assert!(!t.polys_complete);
        assert_eq!(t.odd_terms.len(), 2);
        assert_eq!(t.odd_degrees.len(), t.m);
        assert_eq!(t.odd_degrees, vec![8, 7, 5, 5, 4, 3, 0]);
    }

    #[test]
    fn trace_rejects_zero() {
        assert!(matches!(
            trace(&Poly::zero()),
            Err(TraceError::ZeroPolynomial)
        ));
    }

    #[test]
    fn stationarity_at_one() {
        // Re-stepping the terminal odd term forever yields (x^2+x, 1, 1, 1).
        let mut cur = Poly::one();
        for _ in 0..3 {
            let s = step(&cur).unwrap();
            assert_eq!(s.even, p("x^2+x"));
            assert_eq!((s.val_x, s.val_x1), (1, 1));
            assert!(s.next_odd.is_one());
            cur = s.next_odd;
        }
    }

    #[test]
    fn text_record_shape() {
        let t = trace(&p("x^2+x+1")).unwrap();
        let rec = t.to_text_record();
        let lines: Vec<&str> = rec.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "seed=0x7 deg=2 m=2 r_a=3");
        assert_eq!(lines[1], "k=0 odd=0x7 odd_deg=2 even=0x14 even_deg=4 a=2 b=2");
        assert_eq!(lines[2], "k=1 odd=0x1 odd_deg=0 even=0x6 even_deg=2 a=1 b=1");
    }
}
