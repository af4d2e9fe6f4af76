//! Lattice-walk sampling on the move alphabet: unconditioned i.i.d. walks,
//! rejection sampling of quadrant-confined bridges, exhaustive enumeration
//! and counting at small size, and the exact law of a move window around a
//! uniform time (computed by forward/backward dynamic programming).
//!
//! A bridge instance is a walk of `n` steps from `(0, l_start)` to
//! `(k_end, 0)` whose every position stays in the closed non-negative
//! quadrant. Since the vertical coordinate drops by at most one per step, a
//! bridge at time `t` must satisfy `y <= n - t`; likewise `x <= t`. These
//! bounds make the dynamic programs exact — no reachable state is truncated.

use crate::moves::{LatticePath, Move};
use crate::rng::Stream;
use crate::stepdist::StepDistribution;
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

/// Default cap for exhaustive path enumeration.
pub const ENUM_CAP: usize = 8;
/// Default cap for the window-law dynamic program at `r = 0`.
pub const DP_CAP: usize = 40;

#[derive(Debug, Error, PartialEq)]
pub enum WalkError {
    #[error("rejection sampling exhausted {attempts} attempts without acceptance")]
    AttemptsExhausted { attempts: u64 },
    #[error("instance size {n} exceeds cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("the bridge event has zero probability")]
    ZeroProbability,
}

/// A bridge-sampling instance: `n` steps from `(0, l_start)` to `(k_end, 0)`
/// inside the non-negative quadrant, with i.i.d. steps from `dist`.
#[derive(Clone)]
pub struct WalkSpec {
    pub n: usize,
    pub l_start: i64,
    pub k_end: i64,
    pub dist: StepDistribution,
}

impl WalkSpec {
    pub fn new(n: usize, l_start: i64, k_end: i64, dist: StepDistribution) -> Self {
        assert!(l_start >= 0 && k_end >= 0, "endpoints must be in the quadrant");
        WalkSpec { n, l_start, k_end, dist }
    }

    pub fn start(&self) -> (i64, i64) {
        (0, self.l_start)
    }

    pub fn end(&self) -> (i64, i64) {
        (self.k_end, 0)
    }

    fn accepts(&self, moves: &[Move]) -> bool {
        let mut pos = self.start();
        for mv in moves {
            let (dx, dy) = mv.increment();
            pos = (pos.0 + dx, pos.1 + dy);
            if pos.0 < 0 || pos.1 < 0 {
                return false;
            }
        }
        pos == self.end()
    }
}

/// `n` i.i.d. moves as a path from the origin, unconstrained in sign.
pub fn sample_unconditioned(n: usize, dist: &StepDistribution, rng: &mut Stream) -> LatticePath {
    let moves = (0..n).map(|_| dist.sample_move(rng)).collect();
    LatticePath::new((0, 0), moves)
}

#[derive(Clone, Debug)]
pub struct ConditionedSample {
    pub path: LatticePath,
    /// Number of proposals drawn, including the accepted one.
    pub attempts: u64,
}

/// Rejection-sample the conditioned bridge law using the caller's stream.
pub fn sample_conditioned(
    spec: &WalkSpec,
    rng: &mut Stream,
    max_attempts: u64,
) -> Result<ConditionedSample, WalkError> {
    for attempt in 1..=max_attempts {
        let moves: Vec<Move> = (0..spec.n).map(|_| spec.dist.sample_move(rng)).collect();
        if spec.accepts(&moves) {
            return Ok(ConditionedSample {
                path: LatticePath::new(spec.start(), moves),
                attempts: attempt,
            });
        }
    }
    Err(WalkError::AttemptsExhausted { attempts: max_attempts })
}

/// Deterministic parallel rejection sampling: proposal `i` is drawn from
/// `Stream::indexed(seed, i)`, and the accepted proposal with the smallest
/// index wins, so the result does not depend on the thread count.
pub fn sample_conditioned_indexed(
    spec: &WalkSpec,
    seed: u64,
    max_attempts: u64,
) -> Result<ConditionedSample, WalkError> {
    let hit = (0..max_attempts).into_par_iter().find_first(|&i| {
        let mut rng = Stream::indexed(seed, i as i64);
        let moves: Vec<Move> = (0..spec.n).map(|_| spec.dist.sample_move(&mut rng)).collect();
        spec.accepts(&moves)
    });
    match hit {
        Some(i) => {
            let mut rng = Stream::indexed(seed, i as i64);
            let moves: Vec<Move> = (0..spec.n).map(|_| spec.dist.sample_move(&mut rng)).collect();
            Ok(ConditionedSample { path: LatticePath::new(spec.start(), moves), attempts: i + 1 })
        }
        None => Err(WalkError::AttemptsExhausted { attempts: max_attempts }),
    }
}

/// All valid bridges, by depth-first search. `cap` bounds `n` (see [`ENUM_CAP`]).
pub fn enumerate_conditioned(spec: &WalkSpec, cap: usize) -> Result<Vec<LatticePath>, WalkError> {
    if spec.n > cap {
        return Err(WalkError::CapExceeded { n: spec.n, cap });
    }
    fn go(
        n: usize,
        t: usize,
        pos: (i64, i64),
        end: (i64, i64),
        word: &mut Vec<Move>,
        out: &mut Vec<Vec<Move>>,
    ) {
        if t == n {
            if pos == end {
                out.push(word.clone());
            }
            return;
        }
        let steps_left = (n - t - 1) as i64;
        if pos.1 >= 1 {
            word.push(Move::Edge);
            go(n, t + 1, (pos.0 + 1, pos.1 - 1), end, word, out);
            word.pop();
        }
        for i in 0..=pos.0 {
            // A bridge must return to y = 0, dropping at most 1 per step.
            for j in 0..=(steps_left - pos.1).max(-1) {
                word.push(Move::Face { i: i as u64, j: j as u64 });
                go(n, t + 1, (pos.0 - i, pos.1 + j), end, word, out);
                word.pop();
            }
        }
    }
    let mut words = Vec::new();
    go(spec.n, 0, spec.start(), spec.end(), &mut Vec::new(), &mut words);
    Ok(words
        .into_iter()
        .map(|w| LatticePath::new(spec.start(), w))
        .collect())
}

/// Number of valid bridges, by dynamic programming over time and position.
pub fn count_paths(spec: &WalkSpec, cap: usize) -> Result<u128, WalkError> {
    if spec.n > cap {
        return Err(WalkError::CapExceeded { n: spec.n, cap });
    }
    let n = spec.n;
    let xmax = n as i64 + spec.k_end;
    let ymax = n as i64 + spec.l_start;
    let idx = |x: i64, y: i64| (x * (ymax + 1) + y) as usize;
    let mut cur = vec![0u128; ((xmax + 1) * (ymax + 1)) as usize];
    cur[idx(0, spec.l_start)] = 1;
    for t in 0..n {
        let mut next = vec![0u128; cur.len()];
        let steps_left = (n - t - 1) as i64;
        for x in 0..=xmax {
            for y in 0..=ymax {
                let c = cur[idx(x, y)];
                if c == 0 {
                    continue;
                }
                if y >= 1 && x < xmax {
                    next[idx(x + 1, y - 1)] += c;
                }
                for i in 0..=x {
                    for j in 0..=(steps_left - y).max(-1) {
                        next[idx(x - i, y + j)] += c;
                    }
                }
            }
        }
        cur = next;
    }
    Ok(cur[idx(spec.k_end, 0)])
}

/// Exact law of a move window, plus the probability-mass defect of its table
/// (zero here: the dynamic program covers every reachable step).
#[derive(Clone, Debug)]
pub struct WindowLaw {
    /// Window word (length `2r + 1`) and its probability, sorted by word.
    pub table: BTreeMap<Vec<Move>, f64>,
    pub dropped_mass: f64,
}

impl WindowLaw {
    pub fn total_mass(&self) -> f64 {
        self.table.values().sum()
    }

    /// Total variation distance to the product of `2r + 1` unconditioned
    /// step laws. The table's complement in the product law is handled
    /// analytically: the window law puts no mass there, so it contributes
    /// half the product law's remaining mass.
    pub fn tv_to_step_product(&self, dist: &StepDistribution) -> f64 {
        let mut acc = 0.0;
        let mut covered = 0.0;
        for (word, &p) in &self.table {
            let q: f64 = word.iter().map(|&m| dist.move_prob(m)).product();
            acc += (p - q).abs();
            covered += q;
        }
        0.5 * acc + 0.5 * (1.0 - covered).max(0.0)
    }
}

/// Weighted occupation measures of the conditioned walk: `fwd[t]` maps
/// position to the probability weight of valid prefixes, `bwd[t]` to the
/// weight of valid completions.
struct BridgeDp {
    fwd: Vec<BTreeMap<(i64, i64), f64>>,
    bwd: Vec<BTreeMap<(i64, i64), f64>>,
    total: f64,
}

fn bridge_dp(spec: &WalkSpec) -> BridgeDp {
    let n = spec.n;
    let mut fwd: Vec<BTreeMap<(i64, i64), f64>> = Vec::with_capacity(n + 1);
    let mut layer = BTreeMap::new();
    layer.insert(spec.start(), 1.0f64);
    fwd.push(layer);
    for t in 0..n {
        let mut next: BTreeMap<(i64, i64), f64> = BTreeMap::new();
        let steps_left = (n - t - 1) as i64;
        for (&(x, y), &w) in &fwd[t] {
            if y >= 1 {
                *next.entry((x + 1, y - 1)).or_insert(0.0) += w * spec.dist.p0();
            }
            for i in 0..=x {
                for j in 0..=(steps_left - y).max(-1) {
                    let p = spec.dist.move_prob(Move::Face { i: i as u64, j: j as u64 });
                    *next.entry((x - i, y + j)).or_insert(0.0) += w * p;
                }
            }
        }
        fwd.push(next);
    }
    let mut bwd: Vec<BTreeMap<(i64, i64), f64>> = vec![BTreeMap::new(); n + 1];
    bwd[n].insert(spec.end(), 1.0);
    for t in (0..n).rev() {
        let steps_left = (n - t - 1) as i64;
        let mut layer: BTreeMap<(i64, i64), f64> = BTreeMap::new();
        // Only positions reachable forward matter.
        for &(x, y) in fwd[t].keys() {
            let mut w = 0.0;
            if y >= 1 {
                if let Some(&b) = bwd[t + 1].get(&(x + 1, y - 1)) {
                    w += spec.dist.p0() * b;
                }
            }
            for i in 0..=x {
                for j in 0..=(steps_left - y).max(-1) {
                    if let Some(&b) = bwd[t + 1].get(&(x - i, y + j)) {
                        w += spec.dist.move_prob(Move::Face { i: i as u64, j: j as u64 }) * b;
                    }
                }
            }
            if w > 0.0 {
                layer.insert((x, y), w);
            }
        }
        bwd[t] = layer;
    }
    let total = *fwd[n].get(&spec.end()).unwrap_or(&0.0);
    BridgeDp { fwd, bwd, total }
}

/// Exact law of the window `(w_{U-r}, ..., w_{U+r})` of the conditioned
/// bridge, where `U` is uniform on `{r, ..., n-1-r}` over 0-based step
/// indices. `cap` bounds `n` (see [`DP_CAP`] for `r = 0`).
pub fn exact_window_law(spec: &WalkSpec, r: usize, cap: usize) -> Result<WindowLaw, WalkError> {
    let n = spec.n;
    if n > cap {
        return Err(WalkError::CapExceeded { n, cap });
    }
    assert!(2 * r < n, "window of length {} does not fit {} steps", 2 * r + 1, n);
    let dp = bridge_dp(spec);
    if dp.total <= 0.0 {
        return Err(WalkError::ZeroProbability);
    }
    let width = 2 * r + 1;
    let u_count = (n - 2 * r) as f64;
    let mut table: BTreeMap<Vec<Move>, f64> = BTreeMap::new();

    // For each anchor u and state at time u, walk every width-step
    // continuation, closing with the backward weight.
    #[allow(clippy::too_many_arguments)]
    fn extend(
        spec: &WalkSpec,
        dp: &BridgeDp,
        t: usize,
        t_stop: usize,
        pos: (i64, i64),
        weight: f64,
        word: &mut Vec<Move>,
        table: &mut BTreeMap<Vec<Move>, f64>,
        norm: f64,
    ) {
        if t == t_stop {
            if let Some(&b) = dp.bwd[t].get(&pos) {
                *table.entry(word.clone()).or_insert(0.0) += weight * b / norm;
            }
            return;
        }
        let n = spec.n;
        let steps_left = (n - t - 1) as i64;
        let (x, y) = pos;
        if y >= 1 {
            word.push(Move::Edge);
            extend(spec, dp, t + 1, t_stop, (x + 1, y - 1), weight * spec.dist.p0(), word, table, norm);
            word.pop();
        }
        for i in 0..=x {
            for j in 0..=(steps_left - y).max(-1) {
                let mv = Move::Face { i: i as u64, j: j as u64 };
                word.push(mv);
                extend(
                    spec,
                    dp,
                    t + 1,
                    t_stop,
                    (x - i, y + j),
                    weight * spec.dist.move_prob(mv),
                    word,
                    table,
                    norm,
                );
                word.pop();
            }
        }
    }

    for u in r..=(n - 1 - r) {
        let t0 = u - r;
        for (&pos, &f) in &dp.fwd[t0] {
            let mut word = Vec::with_capacity(width);
            extend(
                spec,
                &dp,
                t0,
                t0 + width,
                pos,
                f,
                &mut word,
                &mut table,
                dp.total * u_count,
            );
        }
    }
    table.retain(|_, p| *p > 0.0);
    Ok(WindowLaw { table, dropped_mass: 0.0 })
}
