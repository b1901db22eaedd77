//! Exhaustive per-degree searches.
//!
//! Two length conventions appear here:
//!
//! - `m` (see [`trajectory_length`]): odd terms through the first 1,
//!   inclusive — the convention of the printed degree-sequence tables.
//! - transient length (see [`transient_length`]): the number of sequence
//!   terms before the stationary tail `(x^2+x, 1)` repeats: `2m-2` for an
//!   odd seed, `2m-1` for an even one (the seed itself adds a term ahead of
//!   its odd part).
//!
//! `f(n)` — [`compute_f`] — is the maximal transient length over seeds with
//! `n` coefficient bits, i.e. of degree `n-1`. Since the trajectory depends
//! only on the odd core and every core of smaller degree is realized by some
//! degree-`(n-1)` seed, each row needs one scan of the odd stratum of degree
//! `n-1` plus a running maximum carried from below: odd seeds contribute
//! `2m-2`, even seeds `2m-1` through their embedded cores.
//!
//! `g(n)` — [`compute_g`] — is the maximum number of consecutive odd terms
//! of degree exactly `n`. A degree-preserving step forces valuations
//! `(1,1)`, and the within-degree successor map is injective, so the
//! functional graph on odd degree-`n` polynomials is a disjoint union of
//! paths; `compute_g` censuses those chains.
//!
//! Work is partitioned into `2^range_bits` mask ranges consumed by a worker
//! pool with dynamic stealing. Per-range results are merged by an
//! associative reduction (longer wins, ties keep the smaller mask), so the
//! outcome is identical for any worker count, and completed ranges can be
//! checkpointed and resumed.

pub mod checkpoint;

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use self::checkpoint::{CheckpointError, CheckpointFile, RangePartial};
use crate::collatz::{self, TraceError};
use crate::gf2poly::{bar_word, Poly};

/// Convention id for transient lengths (terms before the stationary tail).
pub const CONVENTION_TRANSIENT: &str = "transient";
/// Convention id for within-degree chain lengths.
pub const CONVENTION_CHAIN: &str = "chain";

pub const CSV_HEADER: &str = "n,value,witness_hex,convention,seeds_examined,wall_ms";

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("degree {n} exceeds the configured ceiling {ceiling}")]
    CeilingExceeded { n: u32, ceiling: u32 },
    #[error("degree {n} below the minimum {min} for this search")]
    DegreeTooSmall { n: u32, min: u32 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Worker threads; 0 means one per available core.
    pub workers: usize,
    /// Work splits into `2^range_bits` ranges per degree (clamped to the
    /// stratum size). The partition depends only on the degree, never on the
    /// worker count, so results and checkpoints are scheduling-independent.
    pub range_bits: u32,
    /// Per-worker memo table of `2^bits` entries caching trajectory lengths
    /// of odd cores; `None` disables. Affects speed only, never results.
    pub memo_bits: Option<u32>,
    pub f_ceiling: u32,
    pub g_ceiling: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            workers: 0,
            range_bits: 8,
            memo_bits: Some(18),
            f_ceiling: 28,
            g_ceiling: 26,
        }
    }
}

impl SearchConfig {
    pub fn with_workers(workers: usize) -> Self {
        SearchConfig {
            workers,
            ..SearchConfig::default()
        }
    }

    fn resolve_workers(&self) -> usize {
        if self.workers > 0 {
            self.workers
        } else {
            thread::available_parallelism().map_or(1, |p| p.get())
        }
    }
}

/// Result of one per-degree search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchRecord {
    pub n: u32,
    pub value: u64,
    /// Smallest mask attaining `value` within the scanned stratum. For an
    /// `f` row won by an even seed, this is the smallest `x^a (x+1)^b`
    /// embedding of the earliest recorded maximal core.
    pub witness: Poly,
    pub convention: &'static str,
    pub seeds_examined: u64,
    #[serde(skip)]
    pub wall: Duration,
}

impl SearchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n,
            self.value,
            self.witness.to_hex(),
            self.convention,
            self.seeds_examined,
            self.wall.as_millis()
        )
    }
}

/// Chain census of the within-degree functional graph at one degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainCensus {
    pub n: u32,
    pub chain_count: u64,
    pub max_chain_len: u64,
    /// chain length -> number of maximal chains of that length.
    pub histogram: BTreeMap<u64, u64>,
    /// The maximal chain starting at the smallest attaining mask.
    pub witness_chain: Vec<Poly>,
}

impl ChainCensus {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("census serializes")
    }
}

// ---------------------------------------------------------------------------
// Length functionals
// ---------------------------------------------------------------------------

/// Number of odd terms through the first 1, inclusive (`m` of the trace).
pub fn trajectory_length(seed: &Poly) -> Result<u64, TraceError> {
    if seed.is_zero() {
        return Err(TraceError::ZeroPolynomial);
    }
    let cap = collatz::default_step_cap(seed.degree().expect("nonzero"));
    let mut cur = collatz::odd_part(seed)?.core;
    let mut count: u64 = 0;
    loop {
        let deg = cur.degree().expect("odd term nonzero");
        if deg <= 61 {
            let mut word = cur.low_word();
            loop {
                count += 1;
                if word == 1 {
                    return Ok(count);
                }
                if count as usize >= cap {
                    return Err(TraceError::StepCapExceeded { cap, partial: None });
                }
                word = collatz::step_word(word).2;
            }
        }
        count += 1;
        if count as usize >= cap {
            return Err(TraceError::StepCapExceeded { cap, partial: None });
        }
        cur = collatz::advance_odd(&cur);
    }
}

/// Number of sequence terms before the stationary tail: each odd term except
/// the final 1 contributes itself and its even successor (`2m-2`), and an
/// even seed contributes one more term ahead of its odd part.
pub fn transient_length(seed: &Poly) -> Result<u64, TraceError> {
    let m = trajectory_length(seed)?;
    Ok(2 * m - 2 + u64::from(!seed.is_odd()))
}

/// Direct-mapped cache of odd-core trajectory lengths. Collisions overwrite
/// (last write wins), keeping memory bounded and results deterministic: a
/// hit returns the exact length, a miss just recomputes.
struct Memo {
    table: Vec<u64>,
    shift: u32,
}

impl Memo {
    fn new(bits: u32) -> Memo {
        let bits = bits.clamp(4, 30);
        Memo {
            table: vec![0; 1 << bits],
            shift: 64 - bits,
        }
    }

    #[inline]
    fn slot(&self, key: u64) -> usize {
        (key.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> self.shift) as usize
    }

    #[inline]
    fn get(&self, key: u64) -> Option<u32> {
        let entry = self.table[self.slot(key)];
        (entry != 0 && entry >> 16 == key).then_some((entry & 0xFFFF) as u32)
    }

    #[inline]
    fn put(&mut self, key: u64, len: u32) {
        if len <= 0xFFFF && key < (1 << 48) {
            let slot = self.slot(key);
            self.table[slot] = (key << 16) | u64::from(len);
        }
    }
}

struct WorkerState {
    memo: Option<Memo>,
    path: Vec<u64>,
}

impl WorkerState {
    fn new(memo_bits: Option<u32>) -> WorkerState {
        WorkerState {
            memo: memo_bits.map(Memo::new),
            path: Vec::new(),
        }
    }
}

/// Trajectory length of an odd single-word core, memoizing every suffix of
/// the walk.
fn trajectory_length_word(start: u64, state: &mut WorkerState) -> u32 {
    debug_assert!(start & 1 == 1);
    state.path.clear();
    let mut cur = start;
    let base = loop {
        if cur == 1 {
            break 1u32;
        }
        if let Some(hit) = state.memo.as_ref().and_then(|m| m.get(cur)) {
            break hit;
        }
        state.path.push(cur);
        cur = collatz::step_word(cur).2;
        assert!(state.path.len() < (1 << 25), "trajectory failed to terminate");
    };
    let mut len = base;
    for &node in state.path.iter().rev() {
        len += 1;
        if let Some(memo) = state.memo.as_mut() {
            memo.put(node, len);
        }
    }
    len
}

// ---------------------------------------------------------------------------
// Parallel range driver
// ---------------------------------------------------------------------------

/// Runs `work` over range ids `0..range_count` on a worker pool with dynamic
/// stealing; returns results in range order.
fn parallel_map_ranges<T: Send>(
    range_count: u32,
    workers: usize,
    memo_bits: Option<u32>,
    work: impl Fn(u32, &mut WorkerState) -> T + Sync,
) -> Vec<T> {
    let next = AtomicU32::new(0);
    let collected: Mutex<Vec<(u32, T)>> = Mutex::new(Vec::with_capacity(range_count as usize));
    thread::scope(|scope| {
        for _ in 0..workers.clamp(1, range_count.max(1) as usize) {
            scope.spawn(|| {
                let mut state = WorkerState::new(memo_bits);
                let mut local = Vec::new();
                loop {
                    let id = next.fetch_add(1, Ordering::Relaxed);
                    if id >= range_count {
                        break;
                    }
                    local.push((id, work(id, &mut state)));
                }
                collected.lock().expect("result lock").extend(local);
            });
        }
    });
    let mut items = collected.into_inner().expect("result lock");
    items.sort_unstable_by_key(|(id, _)| *id);
    items.into_iter().map(|(_, value)| value).collect()
}

/// Odd degree-`d` masks are `(1<<d) | (middle<<1) | 1` with `middle` of odd
/// popcount ranging over `[0, 2^(d-1))`; ranges split that middle space.
fn range_span(degree: u32, range_bits: u32) -> u64 {
    1u64 << (degree - 1 - range_bits)
}

fn clamp_range_bits(degree: u32, range_bits: u32) -> u32 {
    range_bits.min(degree - 1)
}

// ---------------------------------------------------------------------------
// f(n): maximal transient length
// ---------------------------------------------------------------------------

/// Scans one range of the odd degree-`d` stratum for the maximal `m`.
fn scan_f_range(degree: u32, range_id: u32, range_bits: u32, state: &mut WorkerState) -> RangePartial {
    let span = range_span(degree, range_bits);
    let lo = u64::from(range_id) * span;
    let top = 1u64 << degree;
    let mut partial = RangePartial::EMPTY;
    for middle in lo..lo + span {
        if middle.count_ones() & 1 == 0 {
            continue;
        }
        let mask = top | (middle << 1) | 1;
        partial.seeds += 1;
        let len = trajectory_length_word(mask, state);
        // Masks ascend, so a strict improvement is always the smallest
        // witness for its length.
        if len > partial.max_len {
            partial.max_len = len;
            partial.witness = Some(mask);
        }
    }
    partial
}

/// Best odd core seen so far across ascending degrees.
struct RunningCore {
    m: u32,
    mask: u64,
    degree: u32,
}

/// Smallest mask of the form `x^a (x+1)^b * core` with the given degree.
fn smallest_embedding(core: u64, core_degree: u32, target_degree: u32) -> u64 {
    let gap = target_degree - core_degree;
    let conj = bar_word(core);
    (0..=gap)
        .map(|a| bar_word(conj << (gap - a)) << a)
        .min()
        .expect("nonempty range")
}

/// `f(n)` for every `n` in `1..=n_max`: the maximal number of sequence terms
/// before the stationary tail, over seeds with `n` coefficient bits (degree
/// `n-1`). Odd seeds contribute `2m-2`; even seeds reach `2m-1` through
/// their cores, which the running maximum over smaller degrees covers.
///
/// With a checkpoint path, completed `(row, range)` pairs are appended as
/// they finish; `resume` loads them back and skips the work. The final
/// records are identical either way.
pub fn compute_f_table(
    n_max: u32,
    cfg: &SearchConfig,
    checkpoint_path: Option<&Path>,
    resume: bool,
) -> Result<Vec<SearchRecord>, SearchError> {
    if n_max < 1 {
        return Err(SearchError::DegreeTooSmall { n: n_max, min: 1 });
    }
    if n_max > cfg.f_ceiling {
        return Err(SearchError::CeilingExceeded {
            n: n_max,
            ceiling: cfg.f_ceiling,
        });
    }
    let workers = cfg.resolve_workers();
    let (writer, completed) = match checkpoint_path {
        None => (None, HashMap::new()),
        Some(path) if resume && path.exists() => {
            let (file, done) = CheckpointFile::resume(path, n_max, cfg.range_bits)?;
            (Some(file), done)
        }
        Some(path) => (
            Some(CheckpointFile::create(path, n_max, cfg.range_bits)?),
            HashMap::new(),
        ),
    };
    let write_error: Mutex<Option<CheckpointError>> = Mutex::new(None);

    let mut records = Vec::with_capacity(n_max as usize);
    // Row 1: the single degree-0 seed is 1, already stationary.
    records.push(SearchRecord {
        n: 1,
        value: 0,
        witness: Poly::one(),
        convention: CONVENTION_TRANSIENT,
        seeds_examined: 1,
        wall: Duration::ZERO,
    });
    let mut best = RunningCore {
        m: 1,
        mask: 1,
        degree: 0,
    };
    for n in 2..=n_max {
        let started = Instant::now();
        let degree = n - 1;
        let range_bits = clamp_range_bits(degree, cfg.range_bits);
        let range_count = 1u32 << range_bits;
        let partials = parallel_map_ranges(range_count, workers, cfg.memo_bits, |id, state| {
            if let Some(done) = completed.get(&(n, id)) {
                return *done;
            }
            let partial = scan_f_range(degree, id, range_bits, state);
            if let Some(file) = &writer {
                if let Err(err) = file.append(n, id, &partial) {
                    write_error.lock().expect("error slot").get_or_insert(err);
                }
            }
            partial
        });
        if let Some(err) = write_error.lock().expect("error slot").take() {
            return Err(err.into());
        }
        let merged = partials
            .into_iter()
            .fold(RangePartial::EMPTY, RangePartial::merge);

        // Even seeds of degree n-1 carry every previously seen core, the
        // seed itself adding one transient term; the two branches can never
        // tie (opposite parities).
        let even_value = 2 * u64::from(best.m) - 1;
        let (value, witness) = match merged.witness {
            Some(mask) if 2 * u64::from(merged.max_len) - 2 > even_value => {
                (2 * u64::from(merged.max_len) - 2, mask)
            }
            _ => (
                even_value,
                smallest_embedding(best.mask, best.degree, degree),
            ),
        };
        let witness = Poly::from_word(witness);
        debug_assert_eq!(transient_length(&witness), Ok(value));
        records.push(SearchRecord {
            n,
            value,
            witness,
            convention: CONVENTION_TRANSIENT,
            seeds_examined: merged.seeds,
            wall: started.elapsed(),
        });
        if merged.max_len > best.m {
            best = RunningCore {
                m: merged.max_len,
                mask: merged.witness.expect("max_len > 0 implies witness"),
                degree,
            };
        }
    }
    Ok(records)
}

/// `f(n)` alone; computes the table up to `n` internally.
pub fn compute_f(
    n: u32,
    cfg: &SearchConfig,
    checkpoint_path: Option<&Path>,
    resume: bool,
) -> Result<SearchRecord, SearchError> {
    Ok(compute_f_table(n, cfg, checkpoint_path, resume)?
        .pop()
        .expect("nonempty table"))
}

// ---------------------------------------------------------------------------
// g(n): within-degree chains
// ---------------------------------------------------------------------------

/// Successor of an odd degree-`n` mask within its degree: defined exactly
/// when the even term has valuations `(1,1)`.
fn within_degree_successor_word(mask: u64) -> Option<u64> {
    let even = mask ^ (mask << 1) ^ (mask << 2) ^ 1;
    if even.trailing_zeros() != 1 {
        return None;
    }
    let conj = bar_word(even >> 1);
    if conj.trailing_zeros() != 1 {
        return None;
    }
    Some(bar_word(conj >> 1))
}

fn divisible_by_m1_word(mut v: u64) -> bool {
    while v > 3 {
        let deg = 63 - v.leading_zeros();
        v ^= 0b111 << (deg - 2);
    }
    v == 0
}

/// A node is a chain start iff it has no within-degree predecessor, i.e.
/// `M1` does not divide `1 + x(x+1)*mask` (the candidate predecessor's even
/// term); when it does, the quotient is automatically odd of the same
/// degree.
fn is_chain_start_word(mask: u64) -> bool {
    let candidate = (mask << 1) ^ (mask << 2) ^ 1;
    !divisible_by_m1_word(candidate)
}

/// Next odd term iff it still has degree `n`. Errors when `a` is not odd of
/// degree `n`.
pub fn within_degree_successor(a: &Poly, n: u32) -> Result<Option<Poly>, SearchError> {
    if !a.is_odd() {
        return Err(SearchError::Precondition(format!("{a} is not odd")));
    }
    if a.degree() != Some(n as usize) {
        return Err(SearchError::Precondition(format!(
            "degree of {a} is not {n}"
        )));
    }
    if n <= 61 {
        return Ok(within_degree_successor_word(a.low_word()).map(Poly::from_word));
    }
    let step = collatz::step(a)?;
    Ok((step.val_x == 1 && step.val_x1 == 1).then_some(step.next_odd))
}

#[derive(Clone, Debug)]
struct ChainPartial {
    histogram: BTreeMap<u64, u64>,
    chain_count: u64,
    max_len: u64,
    best_start: Option<u64>,
    nodes: u64,
    mass: u64,
}

impl ChainPartial {
    fn empty() -> ChainPartial {
        ChainPartial {
            histogram: BTreeMap::new(),
            chain_count: 0,
            max_len: 0,
            best_start: None,
            nodes: 0,
            mass: 0,
        }
    }

    fn merge(mut self, other: ChainPartial) -> ChainPartial {
        for (len, count) in other.histogram {
            *self.histogram.entry(len).or_insert(0) += count;
        }
        self.chain_count += other.chain_count;
        self.nodes += other.nodes;
        self.mass += other.mass;
        if other.max_len > self.max_len {
            self.max_len = other.max_len;
            self.best_start = other.best_start;
        } else if other.max_len == self.max_len {
            self.best_start = match (self.best_start, other.best_start) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
        }
        self
    }
}

fn scan_g_range(n: u32, range_id: u32, range_bits: u32) -> ChainPartial {
    let span = range_span(n, range_bits);
    let lo = u64::from(range_id) * span;
    let top = 1u64 << n;
    let mut partial = ChainPartial::empty();
    for middle in lo..lo + span {
        if middle.count_ones() & 1 == 0 {
            continue;
        }
        let mask = top | (middle << 1) | 1;
        partial.nodes += 1;
        if !is_chain_start_word(mask) {
            continue;
        }
        let mut len = 1u64;
        let mut cur = mask;
        while let Some(next) = within_degree_successor_word(cur) {
            cur = next;
            len += 1;
        }
        *partial.histogram.entry(len).or_insert(0) += 1;
        partial.chain_count += 1;
        partial.mass += len;
        if len > partial.max_len {
            partial.max_len = len;
            partial.best_start = Some(mask);
        }
    }
    partial
}

/// Maximal within-degree chain length at degree `n`, with the full census.
pub fn compute_g(n: u32, cfg: &SearchConfig) -> Result<(SearchRecord, ChainCensus), SearchError> {
    if n < 2 {
        return Err(SearchError::DegreeTooSmall { n, min: 2 });
    }
    if n > cfg.g_ceiling {
        return Err(SearchError::CeilingExceeded {
            n,
            ceiling: cfg.g_ceiling,
        });
    }
    let started = Instant::now();
    let workers = cfg.resolve_workers();
    let range_bits = clamp_range_bits(n, cfg.range_bits);
    let range_count = 1u32 << range_bits;
    let partials = parallel_map_ranges(range_count, workers, None, |id, _state| {
        scan_g_range(n, id, range_bits)
    });
    let merged = partials
        .into_iter()
        .fold(ChainPartial::empty(), ChainPartial::merge);

    let expected_nodes = 1u64 << (n - 2);
    if merged.mass != expected_nodes || merged.nodes != expected_nodes {
        return Err(SearchError::InvariantViolation(format!(
            "chain census mass {} over {} nodes, expected {expected_nodes}",
            merged.mass, merged.nodes
        )));
    }

    let best_start = merged
        .best_start
        .ok_or_else(|| SearchError::InvariantViolation("no chains found".into()))?;
    let mut witness_chain = vec![Poly::from_word(best_start)];
    let mut cur = best_start;
    while let Some(next) = within_degree_successor_word(cur) {
        cur = next;
        witness_chain.push(Poly::from_word(cur));
    }

    let record = SearchRecord {
        n,
        value: merged.max_len,
        witness: Poly::from_word(best_start),
        convention: CONVENTION_CHAIN,
        seeds_examined: merged.nodes,
        wall: started.elapsed(),
    };
    let census = ChainCensus {
        n,
        chain_count: merged.chain_count,
        max_chain_len: merged.max_len,
        histogram: merged.histogram,
        witness_chain,
    };
    Ok((record, census))
}

/// `g(n)` for every `n` in `2..=n_max`.
pub fn compute_g_table(n_max: u32, cfg: &SearchConfig) -> Result<Vec<SearchRecord>, SearchError> {
    (2..=n_max)
        .map(|n| compute_g(n, cfg).map(|(record, _)| record))
        .collect()
}

// ---------------------------------------------------------------------------
// Length-bound report
// ---------------------------------------------------------------------------

/// Degrees up to here are checked exhaustively (via the odd-core argument);
/// larger degrees are sampled.
pub const POLYBOUND_EXHAUSTIVE_MAX: u32 = 20;

#[derive(Debug, Clone, Serialize)]
pub struct PolyBoundRow {
    pub n: u32,
    pub exhaustive: bool,
    pub seeds_checked: u64,
    /// Maximal transient length observed among degree-`n` seeds.
    pub max_r_a: u64,
    /// `n(n+1)/2`.
    pub bound: u64,
    pub exceeds_bound: bool,
    /// Seed attaining `max_r_a`.
    pub witness: Poly,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolyBoundReport {
    pub rows: Vec<PolyBoundRow>,
    pub samples_per_degree: u64,
    pub rng_seed: u64,
}

impl PolyBoundReport {
    pub fn violations(&self) -> Vec<&PolyBoundRow> {
        self.rows.iter().filter(|r| r.exceeds_bound).collect()
    }
}

/// Checks `r_A <= n(n+1)/2` (transient length against the conjectured
/// quadratic bound) exhaustively for `n <= 20` and on random samples above.
/// Violations are findings reported in the rows, not errors.
pub fn polybound_report(
    n_max: u32,
    samples_per_degree: u64,
    rng_seed: u64,
    cfg: &SearchConfig,
) -> Result<PolyBoundReport, SearchError> {
    if n_max < 1 {
        return Err(SearchError::DegreeTooSmall { n: n_max, min: 1 });
    }
    let exhaustive_max = n_max.min(POLYBOUND_EXHAUSTIVE_MAX);
    // Row n+1 of the f table is the exhaustive maximum over degree-n seeds.
    let table = compute_f_table(exhaustive_max + 1, cfg, None, false)?;
    let mut rows = Vec::new();
    for n in 1..=exhaustive_max {
        let record = &table[n as usize];
        let bound = u64::from(n) * u64::from(n + 1) / 2;
        let max_r_a = record.value;
        rows.push(PolyBoundRow {
            n,
            exhaustive: true,
            seeds_checked: record.seeds_examined,
            max_r_a,
            bound,
            exceeds_bound: max_r_a > bound,
            witness: record.witness.clone(),
            note: (n == 1).then(|| {
                "bound is tight at degree 1: every degree-1 seed has transient length 1".to_string()
            }),
        });
    }
    for n in exhaustive_max + 1..=n_max {
        let bound = u64::from(n) * u64::from(n + 1) / 2;
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed ^ (u64::from(n) << 32));
        let mut max_r_a = 0;
        let mut witness = Poly::zero();
        let mut exceeds = false;
        for _ in 0..samples_per_degree {
            let seed = Poly::random(n as usize, &mut rng);
            let r_a = transient_length(&seed)?;
            if r_a > max_r_a {
                max_r_a = r_a;
                witness = seed;
            }
            exceeds |= r_a > bound;
        }
        rows.push(PolyBoundRow {
            n,
            exhaustive: false,
            seeds_checked: samples_per_degree,
            max_r_a,
            bound,
            exceeds_bound: exceeds,
            witness,
            note: None,
        });
    }
    Ok(PolyBoundReport {
        rows,
        samples_per_degree,
        rng_seed,
    })
}

/// One start of a maximal within-degree chain at degree 21, with its length
/// under each convention.
#[derive(Debug, Clone, Serialize)]
pub struct Degree21Start {
    pub seed: Poly,
    /// Odd terms through the first 1.
    pub m: u64,
    /// `m + 1`.
    pub r_a: u64,
    /// Terms before the stationary tail (`2m-2`; the starts are odd).
    pub transient: u64,
}

/// Targeted look at degree 21: the maximal within-degree chains and how the
/// lengths of their starts relate to 32 under each counting convention.
#[derive(Debug, Clone, Serialize)]
pub struct TargetedDegree21 {
    pub max_chain_len: u64,
    /// Starts of maximal chains, ascending by mask.
    pub starts: Vec<Degree21Start>,
}

impl TargetedDegree21 {
    pub fn first_matching_32(&self) -> Option<(&Degree21Start, &'static str)> {
        for start in &self.starts {
            if start.m == 32 {
                return Some((start, "m"));
            }
            if start.r_a == 32 {
                return Some((start, "m+1"));
            }
            if start.transient == 32 {
                return Some((start, "transient"));
            }
        }
        None
    }
}

pub fn degree21_targeted() -> Result<TargetedDegree21, SearchError> {
    const N: u32 = 21;
    let top = 1u64 << N;
    let mut max_len = 0u64;
    let mut start_masks: Vec<u64> = Vec::new();
    for middle in 0..1u64 << (N - 1) {
        if middle.count_ones() & 1 == 0 {
            continue;
        }
        let mask = top | (middle << 1) | 1;
        if !is_chain_start_word(mask) {
            continue;
        }
        let mut len = 1u64;
        let mut cur = mask;
        while let Some(next) = within_degree_successor_word(cur) {
            cur = next;
            len += 1;
        }
        if len > max_len {
            max_len = len;
            start_masks.clear();
        }
        if len == max_len {
            start_masks.push(mask);
        }
    }
    let mut starts = Vec::with_capacity(start_masks.len());
    for mask in start_masks {
        let seed = Poly::from_word(mask);
        let m = trajectory_length(&seed)?;
        starts.push(Degree21Start {
            seed,
            m,
            r_a: m + 1,
            transient: 2 * m - 2,
        });
    }
    Ok(TargetedDegree21 {
        max_chain_len: max_len,
        starts,
    })
}
