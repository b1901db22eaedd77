//! The generalized transformation `T = (K*S - R)/D` over binary polynomials
//! (subtraction is addition in characteristic 2).
//!
//! A configuration fixes `K` coprime to `D` and one polynomial `R_r` per
//! residue `r` modulo `D`, with `R_r` congruent to `K*r`; the step picks the
//! `R` matching `S mod D`, making the division exact. Unlike the main map,
//! trajectories here may cycle or grow without bound, so [`classify`]
//! reports cycles (found by a windowed map plus Brent's algorithm on exact
//! values), degree divergence past a threshold, or step exhaustion.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::gf2poly::Poly;

/// Residue tables are indexed by mask, so the modulus degree stays small.
pub const MAX_MODULUS_DEGREE: usize = 20;

/// Values remembered exactly during the first phase of cycle detection;
/// beyond this window Brent's constant-memory scheme takes over.
const VISITED_WINDOW: usize = 1024;

/// Trajectory values retained in reports.
const PREFIX_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("modulus must be nonzero")]
    ZeroModulus,
    #[error("modulus degree {degree} exceeds the supported {MAX_MODULUS_DEGREE}")]
    ModulusTooLarge { degree: usize },
    #[error("multiplier and modulus are not coprime (gcd {gcd})")]
    NotCoprime { gcd: Poly },
    #[error("residue {residue} is not reduced modulo the modulus")]
    UnreducedResidue { residue: Poly },
    #[error("residue {residue} appears twice")]
    DuplicateResidue { residue: Poly },
    #[error("incomplete residue system: expected {expected} residues, got {got}")]
    IncompleteResidues { expected: u64, got: u64 },
    #[error("map entry for residue {residue} is not congruent to K*r modulo D")]
    ResidueMismatch { residue: Poly },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error("division by D was inexact; the residue map violates its congruence")]
    InexactDivision,
    #[error("step at 0 is undefined because R_0 is nonzero")]
    UndefinedAtZero,
}

/// Validated `(K, D, residue map)` instance.
#[derive(Debug, Clone, PartialEq)]
pub struct MatthewsConfig {
    multiplier: Poly,
    modulus: Poly,
    /// `residues[mask of r] = R_r` for every residue `r` with `deg r < deg D`.
    residues: Vec<Poly>,
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = a.div_rem(&b).expect("nonzero divisor").1;
        a = b;
        b = r;
    }
    a
}

impl MatthewsConfig {
    /// Checks all three invariants: coprimality, completeness of the residue
    /// system, and the congruence `R_r = K*r (mod D)` for each entry.
    pub fn new(
        multiplier: Poly,
        modulus: Poly,
        residue_map: &[(Poly, Poly)],
    ) -> Result<Self, ConfigError> {
        let mod_degree = modulus.degree().ok_or(ConfigError::ZeroModulus)?;
        if mod_degree > MAX_MODULUS_DEGREE {
            return Err(ConfigError::ModulusTooLarge { degree: mod_degree });
        }
        let g = gcd(&multiplier, &modulus);
        if !g.is_one() {
            return Err(ConfigError::NotCoprime { gcd: g });
        }
        let expected = 1u64 << mod_degree;
        let mut residues: Vec<Option<Poly>> = vec![None; expected as usize];
        for (residue, image) in residue_map {
            if residue.degree().is_some_and(|d| d >= mod_degree) {
                return Err(ConfigError::UnreducedResidue {
                    residue: residue.clone(),
                });
            }
            let slot = &mut residues[residue.low_word() as usize];
            if slot.is_some() {
                return Err(ConfigError::DuplicateResidue {
                    residue: residue.clone(),
                });
            }
            let product = &multiplier * residue;
            let difference = image + &product;
            if !difference.is_zero() && !difference.div_rem(&modulus).unwrap().1.is_zero() {
                return Err(ConfigError::ResidueMismatch {
                    residue: residue.clone(),
                });
            }
            *slot = Some(image.clone());
        }
        let got = residues.iter().filter(|r| r.is_some()).count() as u64;
        if got != expected {
            return Err(ConfigError::IncompleteResidues { expected, got });
        }
        Ok(MatthewsConfig {
            multiplier,
            modulus,
            residues: residues.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn multiplier(&self) -> &Poly {
        &self.multiplier
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// `R_r` for the residue of `s` modulo `D`.
    pub fn residue_image(&self, s: &Poly) -> &Poly {
        let rem = s.div_rem(&self.modulus).expect("nonzero modulus").1;
        &self.residues[rem.low_word() as usize]
    }

    /// The divergent example: `T(A) = A/x` when `x | A`, else
    /// `((x+1)^3 A + 1)/x`. That is `K = (x+1)^3`, `D = x`,
    /// `R_0 = 0`, `R_1 = 1`.
    pub fn divergent_example() -> MatthewsConfig {
        let k = Poly::x().bar().pow(3);
        MatthewsConfig::new(
            k,
            Poly::x(),
            &[
                (Poly::zero(), Poly::zero()),
                (Poly::one(), Poly::one()),
            ],
        )
        .expect("example config is valid")
    }
}

/// Applies the map without the zero-input guard; always exact for a
/// validated config since `K*S + R_(S mod D) = 0 (mod D)` by construction.
fn apply(cfg: &MatthewsConfig, s: &Poly) -> Poly {
    let image = cfg.residue_image(s);
    let numerator = &(&cfg.multiplier * s) + image;
    numerator
        .div_exact(&cfg.modulus)
        .expect("congruence makes division exact")
}

/// One step `T = (K*S + R)/D`. The zero input is rejected unless `R_0 = 0`.
pub fn step(cfg: &MatthewsConfig, s: &Poly) -> Result<Poly, StepError> {
    if s.is_zero() && !cfg.residues[0].is_zero() {
        return Err(StepError::UndefinedAtZero);
    }
    let image = cfg.residue_image(s);
    let numerator = &(&cfg.multiplier * s) + image;
    numerator
        .div_exact(&cfg.modulus)
        .map_err(|_| StepError::InexactDivision)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum OutcomeKind {
    /// Trajectory enters a cycle at index `entry`; `members` lists one full
    /// period starting there.
    Cycle { entry: usize, members: Vec<Poly> },
    /// Degree exceeded the threshold at the given step.
    DegreeDivergence { threshold: usize, step: usize },
    /// Neither cycle nor divergence within the step budget.
    StepExhausted { cap: usize },
}

impl OutcomeKind {
    pub fn label(&self) -> &'static str {
        match self {
            OutcomeKind::Cycle { .. } => "cycle",
            OutcomeKind::DegreeDivergence { .. } => "degree_divergence",
            OutcomeKind::StepExhausted { .. } => "step_exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryOutcome {
    pub kind: OutcomeKind,
    /// First values of the trajectory, capped.
    pub prefix: Vec<Poly>,
    /// Degree of every value through the classification step; -1 marks the
    /// zero polynomial.
    pub degree_profile: Vec<i64>,
}

impl TrajectoryOutcome {
    /// Index at which the classification was decided.
    pub fn steps(&self) -> usize {
        self.degree_profile.len() - 1
    }

    pub fn max_degree(&self) -> i64 {
        self.degree_profile.iter().copied().max().unwrap_or(-1)
    }

    pub fn cycle_len(&self) -> usize {
        match &self.kind {
            OutcomeKind::Cycle { members, .. } => members.len(),
            _ => 0,
        }
    }
}

fn degree_of(p: &Poly) -> i64 {
    p.degree().map_or(-1, |d| d as i64)
}

/// Classifies the trajectory from `seed`: cycle, degree divergence past
/// `degree_threshold`, or step exhaustion after `step_cap` applications.
///
/// The first [`VISITED_WINDOW`] values are kept in a map, catching any cycle
/// that returns into the window; beyond it Brent's algorithm finds the cycle
/// length with constant memory, and the true entry point is then recovered
/// by the standard two-pointer walk from the seed.
pub fn classify(
    cfg: &MatthewsConfig,
    seed: &Poly,
    degree_threshold: usize,
    step_cap: usize,
) -> TrajectoryOutcome {
    let mut prefix = vec![seed.clone()];
    let mut profile = vec![degree_of(seed)];
    let mut seen: HashMap<Poly, usize> = HashMap::new();
    seen.insert(seed.clone(), 0);
    let mut window = vec![seed.clone()];

    let finish = |kind: OutcomeKind, prefix: Vec<Poly>, profile: Vec<i64>| TrajectoryOutcome {
        kind,
        prefix,
        degree_profile: profile,
    };

    let mut cur = seed.clone();
    let window_len = VISITED_WINDOW.min(step_cap);
    for index in 1..=window_len {
        cur = apply(cfg, &cur);
        profile.push(degree_of(&cur));
        if prefix.len() < PREFIX_CAP {
            prefix.push(cur.clone());
        }
        if degree_of(&cur) > degree_threshold as i64 {
            return finish(
                OutcomeKind::DegreeDivergence {
                    threshold: degree_threshold,
                    step: index,
                },
                prefix,
                profile,
            );
        }
        if let Some(&entry) = seen.get(&cur) {
            let members = window[entry..index].to_vec();
            return finish(OutcomeKind::Cycle { entry, members }, prefix, profile);
        }
        seen.insert(cur.clone(), index);
        window.push(cur.clone());
    }
    if window_len == step_cap {
        return finish(OutcomeKind::StepExhausted { cap: step_cap }, prefix, profile);
    }

    // Brent phase: find the cycle length from the window's last value.
    let mut power = 1usize;
    let mut lambda = 1usize;
    let mut tortoise = cur.clone();
    let mut hare = apply(cfg, &cur);
    let mut index = window_len + 1;
    profile.push(degree_of(&hare));
    loop {
        if degree_of(&hare) > degree_threshold as i64 {
            return finish(
                OutcomeKind::DegreeDivergence {
                    threshold: degree_threshold,
                    step: index,
                },
                prefix,
                profile,
            );
        }
        if tortoise == hare {
            break;
        }
        if index >= step_cap {
            return finish(OutcomeKind::StepExhausted { cap: step_cap }, prefix, profile);
        }
        if power == lambda {
            tortoise = hare.clone();
            power *= 2;
            lambda = 0;
        }
        hare = apply(cfg, &hare);
        index += 1;
        lambda += 1;
        profile.push(degree_of(&hare));
    }

    // Entry point: advance one pointer by lambda, then walk both from the
    // seed; every value revisited here already passed the degree check.
    let mut front = seed.clone();
    for _ in 0..lambda {
        front = apply(cfg, &front);
    }
    let mut entry = 0usize;
    let mut back = seed.clone();
    while back != front {
        back = apply(cfg, &back);
        front = apply(cfg, &front);
        entry += 1;
    }
    let mut members = Vec::with_capacity(lambda);
    let mut member = back;
    for _ in 0..lambda {
        members.push(member.clone());
        member = apply(cfg, &member);
    }
    finish(OutcomeKind::Cycle { entry, members }, prefix, profile)
}

/// One census line per seed of degree at most `max_degree`, ascending mask
/// order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusRow {
    pub seed: Poly,
    pub kind: String,
    pub steps: usize,
    pub max_degree: i64,
    pub cycle_len: usize,
}

pub const CENSUS_CSV_HEADER: &str = "seed_hex,kind,steps,max_degree,cycle_len";

pub fn census(
    cfg: &MatthewsConfig,
    max_seed_degree: usize,
    degree_threshold: usize,
    step_cap: usize,
) -> Vec<CensusRow> {
    let mut rows = Vec::new();
    for mask in 1..1u64 << (max_seed_degree + 1) {
        let seed = Poly::from_word(mask);
        let outcome = classify(cfg, &seed, degree_threshold, step_cap);
        rows.push(CensusRow {
            kind: outcome.kind.label().to_string(),
            steps: outcome.steps(),
            max_degree: outcome.max_degree(),
            cycle_len: outcome.cycle_len(),
            seed,
        });
    }
    rows
}

pub fn census_csv(rows: &[CensusRow]) -> String {
    let mut out = String::from(CENSUS_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.seed.to_hex(),
            row.kind,
            row.steps,
            row.max_degree,
            row.cycle_len
        ));
    }
    out
}
