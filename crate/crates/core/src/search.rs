//! Search for difference families with a prescribed parameter set.
//!
//! Three modes share one exactness contract: every family reported by any
//! mode has passed [`DifferenceFamily::verify`] in integer arithmetic, so no
//! floating-point artifact is ever emitted.
//!
//! - `Exhaustive` walks the full product of block streams and verifies each
//!   tuple by difference counting. Feasible only for tiny spaces; serves as
//!   the completeness oracle for the fingerprint join.
//! - `Fingerprint` enumerates per-block candidate streams, prunes with the
//!   PSD-test, and joins streams by hashing quantized PSD fingerprints: a
//!   tuple can only be a family when its fingerprints sum to the constant
//!   `4n` at every nontrivial character.
//! - `Anneal` runs a seeded local search over block tuples with an
//!   incrementally maintained PAF objective.

use std::collections::{HashMap, HashSet};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{DifferenceFamily, ParameterSet};
use crate::filter::{PsdFingerprint, FINGERPRINT_QUANTUM, PSD_TEST_TOL};
use crate::group::{Element, GroupSpec};

/// Search strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Fingerprint,
    Anneal,
}

/// Knobs shared by the search modes. Defaults match the CLI defaults.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub mode: SearchMode,
    /// Restrict the first block to candidates containing the identity (one
    /// representative per translation class of the first block).
    pub dedup: bool,
    /// Apply the per-block PSD-test when enumerating candidates.
    pub psd_prune: bool,
    pub seed: u64,
    /// Ceiling on enumerated (block, fingerprint) pairs across all streams.
    pub max_candidates: u64,
    /// Ceiling on the tuple space walked by the exhaustive mode.
    pub max_product: u64,
    pub max_solutions: usize,
    /// Iteration budget for the annealing mode.
    pub max_iters: u64,
    /// Join tolerance; `None` means `t * 1e-6`.
    pub tol: Option<f64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: SearchMode::Fingerprint,
            dedup: true,
            psd_prune: true,
            seed: 0,
            max_candidates: 10_000_000,
            max_product: 10_000_000,
            max_solutions: usize::MAX,
            max_iters: 200_000,
            tol: None,
        }
    }
}

/// Progress and pruning counters.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct SearchStats {
    pub candidates: u64,
    pub pruned_by_psd: u64,
    pub kept: u64,
    pub probed: u64,
    pub matched: u64,
    pub verified: u64,
}

/// Result of a search run.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub families: Vec<DifferenceFamily>,
    pub stats: SearchStats,
}

/// One per-block candidate stream: blocks as sorted element-index vectors
/// plus their PSD fingerprints, in deterministic lexicographic order.
#[derive(Debug, Clone)]
pub struct CandidateStream {
    pub k: usize,
    pub blocks: Vec<Vec<u32>>,
    pub fingerprints: Vec<Vec<f64>>,
    pub stats: SearchStats,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Lexicographic k-subset iterator over `0..n`.
struct Combinations {
    n: usize,
    k: usize,
    state: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        let state = if k <= n { Some((0..k).collect()) } else { None };
        Combinations { n, k, state }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.state.clone()?;
        // advance
        let mut next = current.clone();
        let mut i = self.k;
        loop {
            if i == 0 {
                self.state = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - (self.k - i) {
                next[i] += 1;
                for j in i + 1..self.k {
                    next[j] = next[j - 1] + 1;
                }
                self.state = Some(next);
                break;
            }
        }
        Some(current)
    }
}

fn block_elements(g: &GroupSpec, idx: &[u32]) -> Vec<Element> {
    idx.iter().map(|&i| g.element_at(i as usize)).collect()
}

/// Enumerates the candidate `k`-subsets for one block, with optional
/// translation dedup (keep only subsets containing the identity) and
/// optional PSD-test pruning against `4n`. Deterministic order.
pub fn enumerate_candidates(
    g: &GroupSpec,
    k: usize,
    n: i64,
    dedup: bool,
    psd_prune: bool,
    max_candidates: u64,
) -> Result<CandidateStream> {
    let v = g.order();
    if k == 0 || k >= v {
        return Err(Error::InvalidParams(format!("block size {k} out of range for group of order {v}")));
    }
    let space = if dedup { binomial(v - 1, k - 1) } else { binomial(v, k) };
    if space > max_candidates as u128 {
        return Err(Error::BudgetExceeded(format!("{space} candidate blocks exceed the ceiling {max_candidates}")));
    }
    let mut stats = SearchStats::default();
    let mut blocks = Vec::new();
    let mut fingerprints = Vec::new();
    let bound = 4.0 * n as f64 + PSD_TEST_TOL;

    // chunked parallel evaluation; order preserved by in-order collection
    let combos: Box<dyn Iterator<Item = Vec<usize>>> = if dedup {
        Box::new(Combinations::new(v - 1, k - 1).map(|rest| {
            let mut b = Vec::with_capacity(k);
            b.push(0);
            b.extend(rest.into_iter().map(|i| i + 1));
            b
        }))
    } else {
        Box::new(Combinations::new(v, k))
    };
    let mut chunk: Vec<Vec<usize>> = Vec::with_capacity(4096);
    let mut flush = |chunk: &mut Vec<Vec<usize>>,
                     blocks: &mut Vec<Vec<u32>>,
                     fingerprints: &mut Vec<Vec<f64>>,
                     stats: &mut SearchStats|
     -> Result<()> {
        let evaluated: Vec<(Vec<u32>, Vec<f64>, bool)> = chunk
            .par_iter()
            .map(|combo| {
                let idx: Vec<u32> = combo.iter().map(|&i| i as u32).collect();
                let elems = block_elements(g, &idx);
                let fp = PsdFingerprint::of_block(g, &elems).expect("in-group");
                let pass = !psd_prune || fp.max_value() <= bound;
                (idx, fp.values().to_vec(), pass)
            })
            .collect();
        for (idx, fp, pass) in evaluated {
            stats.candidates += 1;
            if pass {
                stats.kept += 1;
                blocks.push(idx);
                fingerprints.push(fp);
            } else {
                stats.pruned_by_psd += 1;
            }
        }
        chunk.clear();
        Ok(())
    };
    for combo in combos {
        chunk.push(combo);
        if chunk.len() == 4096 {
            flush(&mut chunk, &mut blocks, &mut fingerprints, &mut stats)?;
        }
    }
    flush(&mut chunk, &mut blocks, &mut fingerprints, &mut stats)?;
    Ok(CandidateStream { k, blocks, fingerprints, stats })
}

fn quantize(values: &[f64]) -> Vec<i64> {
    values.iter().map(|&x| (x / FINGERPRINT_QUANTUM).round() as i64).collect()
}

fn quantize_complement(target: f64, values: &[f64]) -> Vec<i64> {
    values.iter().map(|&x| ((target - x) / FINGERPRINT_QUANTUM).round() as i64).collect()
}

fn verify_tuple(
    g: &GroupSpec,
    params: &ParameterSet,
    blocks: Vec<Vec<Element>>,
    stats: &mut SearchStats,
) -> Option<DifferenceFamily> {
    stats.matched += 1;
    let fam = DifferenceFamily::new(g, blocks, params.lambda, false).ok()?;
    if fam.verify().valid {
        stats.verified += 1;
        Some(fam)
    } else {
        None
    }
}

/// Joins candidate streams into exactly verified families.
///
/// A tuple is a family iff its fingerprints sum to the constant `beta = 4n`
/// at every nontrivial character; the join hashes quantized fingerprints
/// (complement keys for the probing side) and exact-verifies every hash
/// match. For `t > 2` the trailing stream is the hash side and the leading
/// streams are walked with pointwise partial-sum pruning, which is sound
/// because PSD values are nonnegative.
pub fn fingerprint_match(
    g: &GroupSpec,
    params: &ParameterSet,
    streams: &[CandidateStream],
    tol: f64,
    max_solutions: usize,
) -> Result<SearchOutcome> {
    let t = params.t();
    if streams.len() != t {
        return Err(Error::InvalidParams(format!("expected {t} streams, got {}", streams.len())));
    }
    for (s, &k) in streams.iter().zip(&params.k) {
        if s.k != k {
            return Err(Error::InvalidParams(format!("stream block size {} does not match parameter {k}", s.k)));
        }
    }
    let beta = 4.0 * params.n() as f64;
    let dim = g.order() - 1;
    let mut stats = SearchStats::default();
    for s in streams {
        stats.candidates += s.stats.candidates;
        stats.pruned_by_psd += s.stats.pruned_by_psd;
        stats.kept += s.stats.kept;
    }
    let mut families = Vec::new();
    let mut seen: HashSet<Vec<Vec<Vec<u32>>>> = HashSet::new();

    if t == 1 {
        let target = quantize(&vec![beta; dim]);
        for (bi, fp) in streams[0].fingerprints.iter().enumerate() {
            stats.probed += 1;
            if quantize(fp) == target {
                let blocks = vec![block_elements(g, &streams[0].blocks[bi])];
                if let Some(fam) = verify_tuple(g, params, blocks, &mut stats) {
                    if seen.insert(fam.canonical_key()) {
                        families.push(fam);
                        if families.len() >= max_solutions {
                            break;
                        }
                    }
                }
            }
        }
        return Ok(SearchOutcome { families, stats });
    }

    // hash side: the last stream, keyed by quantized fingerprint
    let last = &streams[t - 1];
    let mut table: HashMap<Vec<i64>, Vec<u32>> = HashMap::new();
    for (i, fp) in last.fingerprints.iter().enumerate() {
        table.entry(quantize(fp)).or_default().push(i as u32);
    }

    // walk the leading streams, carrying the running fingerprint sum
    let mut choice = vec![0usize; t - 1];
    let mut running: Vec<Vec<f64>> = vec![vec![0.0; dim]; t];
    'outer: loop {
        // fill running sums from the current choice, with pointwise pruning
        let mut depth = 0;
        while depth < t - 1 {
            let idx = choice[depth];
            if idx >= streams[depth].blocks.len() {
                break;
            }
            let (prev, here) = running.split_at_mut(depth + 1);
            let prev = &prev[depth];
            let sum = &mut here[0];
            let fp = &streams[depth].fingerprints[idx];
            let mut ok = true;
            for j in 0..dim {
                sum[j] = prev[j] + fp[j];
                if sum[j] > beta + tol {
                    ok = false;
                    break;
                }
            }
            if !ok {
                break;
            }
            depth += 1;
        }
        if depth == t - 1 {
            // probe the hash side with the complement key
            stats.probed += 1;
            let key = quantize_complement(beta, &running[t - 1]);
            if let Some(hits) = table.get(&key) {
                for &bi in hits {
                    let mut blocks: Vec<Vec<Element>> = (0..t - 1)
                        .map(|d| block_elements(g, &streams[d].blocks[choice[d]]))
                        .collect();
                    blocks.push(block_elements(g, &last.blocks[bi as usize]));
                    if let Some(fam) = verify_tuple(g, params, blocks, &mut stats) {
                        if seen.insert(fam.canonical_key()) {
                            families.push(fam);
                            if families.len() >= max_solutions {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        // advance the odometer at the failed/finished depth
        let mut level = if depth == t - 1 { t - 2 } else { depth };
        loop {
            choice[level] += 1;
            if choice[level] < streams[level].blocks.len() {
                break;
            }
            if level == 0 {
                break 'outer;
            }
            choice[level] = 0;
            level -= 1;
        }
        // reset deeper levels
        for c in choice.iter_mut().skip(level + 1) {
            *c = 0;
        }
    }
    Ok(SearchOutcome { families, stats })
}

/// Product-space exhaustion with exact verification of every tuple. The
/// independent completeness oracle for the fingerprint join; guarded by
/// `max_product`.
pub fn exhaustive_search(g: &GroupSpec, params: &ParameterSet, config: &SearchConfig) -> Result<SearchOutcome> {
    let streams = build_streams(g, params, config)?;
    let mut product: u128 = 1;
    for s in &streams {
        product = product.saturating_mul(s.blocks.len() as u128);
    }
    if product > config.max_product as u128 {
        return Err(Error::BudgetExceeded(format!(
            "{product} tuples exceed the exhaustive ceiling {}",
            config.max_product
        )));
    }
    let t = params.t();
    let mut stats = SearchStats::default();
    for s in &streams {
        stats.candidates += s.stats.candidates;
        stats.pruned_by_psd += s.stats.pruned_by_psd;
        stats.kept += s.stats.kept;
    }
    let mut families = Vec::new();
    let mut seen: HashSet<Vec<Vec<Vec<u32>>>> = HashSet::new();
    if streams.iter().any(|s| s.blocks.is_empty()) {
        return Ok(SearchOutcome { families, stats });
    }
    let mut choice = vec![0usize; t];
    loop {
        stats.probed += 1;
        let blocks: Vec<Vec<Element>> =
            (0..t).map(|d| block_elements(g, &streams[d].blocks[choice[d]])).collect();
        if let Some(fam) = verify_tuple(g, params, blocks, &mut stats) {
            if seen.insert(fam.canonical_key()) {
                families.push(fam);
                if families.len() >= config.max_solutions {
                    break;
                }
            }
        }
        let mut level = t - 1;
        loop {
            choice[level] += 1;
            if choice[level] < streams[level].blocks.len() {
                break;
            }
            choice[level] = 0;
            if level == 0 {
                return Ok(SearchOutcome { families, stats });
            }
            level -= 1;
        }
    }
    Ok(SearchOutcome { families, stats })
}

fn build_streams(g: &GroupSpec, params: &ParameterSet, config: &SearchConfig) -> Result<Vec<CandidateStream>> {
    let mut total: u128 = 0;
    let v = g.order();
    for (i, &k) in params.k.iter().enumerate() {
        let dedup = config.dedup && i == 0;
        total += if dedup { binomial(v - 1, k - 1) } else { binomial(v, k) };
    }
    if total > config.max_candidates as u128 {
        return Err(Error::BudgetExceeded(format!(
            "{total} candidate blocks exceed the ceiling {}",
            config.max_candidates
        )));
    }
    params
        .k
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            enumerate_candidates(g, k, params.n(), config.dedup && i == 0, config.psd_prune, config.max_candidates)
        })
        .collect()
}

/// Dispatches a search according to `config.mode`.
pub fn run_search(g: &GroupSpec, params: &ParameterSet, config: &SearchConfig) -> Result<SearchOutcome> {
    if !params.validate(false) {
        return Err(Error::InvalidParams(format!("{params} fails the parameter identities")));
    }
    match config.mode {
        SearchMode::Exhaustive => exhaustive_search(g, params, config),
        SearchMode::Fingerprint => {
            let streams = build_streams(g, params, config)?;
            let tol = config.tol.unwrap_or(params.t() as f64 * 1e-6);
            fingerprint_match(g, params, &streams, tol, config.max_solutions)
        }
        SearchMode::Anneal => anneal_search(g, params, config),
    }
}

/// Annealing state for one block: membership mask, PAF vector, sign values.
struct BlockState {
    members: Vec<bool>,
    f: Vec<i64>,
    paf: Vec<i64>,
}

impl BlockState {
    fn new(g: &GroupSpec, block: &[usize]) -> Self {
        let v = g.order();
        let mut members = vec![false; v];
        let mut f = vec![1i64; v];
        for &i in block {
            members[i] = true;
            f[i] = -1;
        }
        let mut paf = vec![0i64; v];
        for x in 0..v {
            let mut acc = 0;
            for y in 0..v {
                acc += f[g.compose_idx(x, y)] * f[y];
            }
            paf[x] = acc;
        }
        BlockState { members, f, paf }
    }

    /// Flips the sign at element `p`, updating the PAF in `O(v)`:
    /// `paf'(x) = paf(x) - 2 f(p) [f(x^{-1} p) + f(x p)] + 4 delta_e(x)`.
    fn flip(&mut self, g: &GroupSpec, p: usize, total: &mut [i64]) {
        let v = g.order();
        let fp = self.f[p];
        for x in 0..v {
            let xinv_p = g.compose_idx(g.inverse_idx(x), p);
            let xp = g.compose_idx(x, p);
            let mut delta = -2 * fp * (self.f[xinv_p] + self.f[xp]);
            if x == 0 {
                delta += 4;
            }
            self.paf[x] += delta;
            total[x] += delta;
        }
        self.f[p] = -fp;
        self.members[p] = !self.members[p];
    }
}

fn objective(total: &[i64], alpha: i64) -> i64 {
    total[1..].iter().map(|&t| (t - alpha) * (t - alpha)).sum()
}

/// Seeded simulated annealing over block tuples.
///
/// Moves swap one element in or out of one block; candidate blocks failing
/// the PSD-test are rejected before the objective is evaluated. The
/// objective `sum_{x != e} (sum_i paf_i(x) - alpha)^2` is maintained through
/// incremental PAF updates and reaches zero exactly at complementary tuples,
/// which are then exact-verified.
pub fn anneal_search(g: &GroupSpec, params: &ParameterSet, config: &SearchConfig) -> Result<SearchOutcome> {
    let v = g.order();
    for &k in &params.k {
        if k == 0 || k >= v {
            return Err(Error::InvalidParams(format!("block size {k} out of range")));
        }
    }
    let t = params.t();
    let alpha = params.paf_constants().1;
    let n = params.n();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut stats = SearchStats::default();
    let mut families = Vec::new();
    let mut seen: HashSet<Vec<Vec<Vec<u32>>>> = HashSet::new();

    let random_state = |rng: &mut ChaCha8Rng, total: &mut Vec<i64>| -> Vec<BlockState> {
        total.iter_mut().for_each(|x| *x = 0);
        let states: Vec<BlockState> = params
            .k
            .iter()
            .map(|&k| {
                let mut pool: Vec<usize> = (0..v).collect();
                pool.shuffle(rng);
                pool.truncate(k);
                BlockState::new(g, &pool)
            })
            .collect();
        for s in &states {
            for (x, p) in s.paf.iter().enumerate() {
                total[x] += p;
            }
        }
        states
    };

    let mut total = vec![0i64; v];
    let mut states = random_state(&mut rng, &mut total);
    let mut obj = objective(&total, alpha);
    let mut best_obj = obj;
    let mut temperature = (v as f64) * 4.0;
    let cooling = 0.9995f64;

    for _iter in 0..config.max_iters {
        if obj == 0 {
            // candidate solution: exact-verify, record, restart
            let blocks: Vec<Vec<Element>> = states
                .iter()
                .map(|s| {
                    (0..v).filter(|&i| s.members[i]).map(|i| g.element_at(i)).collect()
                })
                .collect();
            if let Some(fam) = verify_tuple(g, params, blocks, &mut stats) {
                if seen.insert(fam.canonical_key()) {
                    families.push(fam);
                }
            }
            if families.len() >= config.max_solutions {
                break;
            }
            states = random_state(&mut rng, &mut total);
            obj = objective(&total, alpha);
            temperature = (v as f64) * 4.0;
            continue;
        }
        let bi = rng.gen_range(0..t);
        let out_pool: Vec<usize> = (0..v).filter(|&i| states[bi].members[i]).collect();
        let in_pool: Vec<usize> = (0..v).filter(|&i| !states[bi].members[i]).collect();
        if out_pool.is_empty() || in_pool.is_empty() {
            continue;
        }
        let u = out_pool[rng.gen_range(0..out_pool.len())];
        let w = in_pool[rng.gen_range(0..in_pool.len())];
        stats.candidates += 1;

        // PSD-gate the candidate block before looking at the objective
        if config.psd_prune {
            let mut cand: Vec<Element> =
                out_pool.iter().filter(|&&i| i != u).map(|&i| g.element_at(i)).collect();
            cand.push(g.element_at(w));
            let fp = PsdFingerprint::of_block(g, &cand)?;
            if fp.max_value() > 4.0 * n as f64 + PSD_TEST_TOL {
                stats.pruned_by_psd += 1;
                continue;
            }
        }

        states[bi].flip(g, u, &mut total);
        states[bi].flip(g, w, &mut total);
        let new_obj = objective(&total, alpha);
        let delta = new_obj - obj;
        let accept = delta <= 0 || rng.gen::<f64>() < (-(delta as f64) / temperature.max(1e-9)).exp();
        if accept {
            obj = new_obj;
            best_obj = best_obj.min(obj);
        } else {
            // undo
            states[bi].flip(g, w, &mut total);
            states[bi].flip(g, u, &mut total);
        }
        temperature *= cooling;
    }
    // final state may itself be a solution
    if obj == 0 && families.len() < config.max_solutions {
        let blocks: Vec<Vec<Element>> = states
            .iter()
            .map(|s| (0..v).filter(|&i| s.members[i]).map(|i| g.element_at(i)).collect())
            .collect();
        if let Some(fam) = verify_tuple(g, params, blocks, &mut stats) {
            if seen.insert(fam.canonical_key()) {
                families.push(fam);
            }
        }
    }
    Ok(SearchOutcome { families, stats })
}

/// The Goethals-Seidel quadruples with trivial blocks.
///
/// The counting identity with `k_0 = 0` forces
/// `sum (v/2 - k_i)^2 = v(4 - v)/4`, hence `v <= 4`; the solutions per case
/// are returned as verified families (two for `v = 4`: the cyclic group and
/// the Klein four-group).
pub fn gs_quadruple_search(v: usize) -> Result<Vec<DifferenceFamily>> {
    let make = |orders: Vec<u32>, blocks: Vec<Vec<Vec<u32>>>| -> Result<DifferenceFamily> {
        let g = GroupSpec::new(orders)?;
        let blocks: Vec<Vec<Element>> = blocks
            .into_iter()
            .map(|b| b.into_iter().map(Element).collect())
            .collect();
        let k_sum: i64 = blocks.iter().map(|b| b.len() as i64).sum();
        // n = v for a GS family, so lambda = sum k_i - v
        let lambda = k_sum - g.order() as i64;
        let fam = DifferenceFamily::new(&g, blocks, lambda, true)?;
        let report = fam.verify();
        if !report.valid {
            return Err(Error::InvalidParams(format!("case v={} failed verification", g.order())));
        }
        Ok(fam)
    };
    match v {
        1 => Ok(vec![make(vec![1], vec![vec![], vec![], vec![], vec![]])?]),
        2 => Ok(vec![make(vec![2], vec![vec![], vec![], vec![vec![0]], vec![vec![0]]])?]),
        3 => Ok(vec![make(vec![3], vec![vec![], vec![vec![0]], vec![vec![0]], vec![vec![0]]])?]),
        4 => Ok(vec![
            make(vec![4], vec![vec![], vec![vec![0], vec![1]], vec![vec![0], vec![2]], vec![vec![0], vec![3]]])?,
            make(
                vec![2, 2],
                vec![
                    vec![],
                    vec![vec![0, 0], vec![0, 1]],
                    vec![vec![0, 0], vec![1, 0]],
                    vec![vec![0, 0], vec![1, 1]],
                ],
            )?,
        ]),
        other => Err(Error::InvalidParams(format!("no Goethals-Seidel quadruple case for v = {other}"))),
    }
}
