//! Admissible step distributions on the move alphabet.
//!
//! A face-weight sequence `(a_k)` with `a_0 = 1` induces a step distribution
//! via the tilt `λ` solving `1 = Σ_{k≥3} (k-1)(k-2)/2 · a_k λ^k` and the
//! normalizer `C = 1/λ² + Σ_{k≥2} (k-1) a_k λ^{k-2}`:
//!
//! * `P[m_e] = p_0 = 1 / (λ² C)`,
//! * `P[m_{i,j}] = p_{i+j+2}` with `p_k = a_k λ^{k-2} / C`
//!   (there are `k - 1` distinct face moves of degree `k`).
//!
//! The resulting walk increment has mean zero. For the power-law family
//! `a_k = C₀ L^{-k} k^{-α-2}` (`α ∈ (1, 2)`) everything is explicit:
//! `λ = L`, `p_k = C₁ k^{-α-2}` and `p_0 = C₁ / C₀`, where `C₀`, `C₁` are the
//! normalizing constants computed by [`power_law_constants`].

use crate::moves::Move;
use crate::rng::Stream;
use std::sync::Arc;
use thiserror::Error;

/// Largest face degree resolved by the cumulative sampling table; beyond it
/// the power-law family uses exact inversion-plus-rejection on the tail.
const TABLE_MAX_DEGREE: u64 = 10_000;


#[derive(Debug, Error, PartialEq)]
pub enum StepDistError {
    #[error("alpha must lie strictly between 1 and 2, got {0}")]
    AlphaOutOfRange(f64),
    #[error("weight sequence is infeasible: no tilt in (0, radius) reaches total face mass 1")]
    InfeasibleWeights,
    #[error("weight a_{k} is negative ({value})", k = .k, value = .value)]
    NegativeWeight { k: u64, value: f64 },
    #[error("weight series failed to converge within the configured caps")]
    SeriesDiverges,
    #[error("step probabilities leak mass: total {0} differs from 1 beyond tolerance")]
    NormalizationLeak(f64),
    #[error("scale L must be positive and finite, got {0}")]
    BadScale(f64),
}

/// Tail exponent parameter, restricted to the open interval `(1, 2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self, StepDistError> {
        if value.is_finite() && value > 1.0 && value < 2.0 {
            Ok(Alpha(value))
        } else {
            Err(StepDistError::AlphaOutOfRange(value))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// `Σ_{k=k0}^∞ k^{-s}` for `s > 1`, via direct summation to `K` plus an
/// Euler–Maclaurin tail. With `K = 2000` and correction terms through `B₆`
/// the remainder is far below [`SERIES_TOL`] for every exponent we use
/// (`s ∈ (1, 4)`).
pub(crate) fn power_sum(s: f64, k0: u64) -> f64 {
    const K: u64 = 2000;
    debug_assert!(s > 1.0);
    let cutoff = K.max(k0);
    let mut sum = 0.0;
    for k in k0..cutoff {
        sum += (k as f64).powf(-s);
    }
    let kf = cutoff as f64;
    let tail = kf.powf(1.0 - s) / (s - 1.0)
        + 0.5 * kf.powf(-s)
        + s * kf.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * kf.powf(-s - 3.0) / 720.0
        + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * kf.powf(-s - 5.0) / 30_240.0;
    sum + tail
}

/// `Σ_{k≥2} (k-1)(k-2)/(2 k^{α+2})`, the series fixing `C₀`.
pub(crate) fn series_s0(alpha: f64) -> f64 {
    0.5 * (power_sum(alpha, 2) - 3.0 * power_sum(alpha + 1.0, 2) + 2.0 * power_sum(alpha + 2.0, 2))
}

/// `Σ_{k≥2} (k-1) k^{-α-2}`, the series fixing `C₁`.
pub(crate) fn series_s1(alpha: f64) -> f64 {
    power_sum(alpha + 1.0, 2) - power_sum(alpha + 2.0, 2)
}

/// The two normalizing constants of the power-law family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawConstants {
    pub c0: f64,
    pub c1: f64,
}

/// `C₀ = (Σ (k-1)(k-2)/(2k^{α+2}))⁻¹` and
/// `C₁ = C₀ (1 + C₀ Σ (k-1) k^{-α-2})⁻¹`.
pub fn power_law_constants(alpha: Alpha) -> PowerLawConstants {
    let a = alpha.get();
    let c0 = 1.0 / series_s0(a);
    let c1 = c0 / (1.0 + c0 * series_s1(a));
    PowerLawConstants { c0, c1 }
}

/// A face-weight sequence `(a_k)_{k≥2}` (with the convention `a_0 = 1`).
#[derive(Clone)]
pub enum WeightSequence {
    /// `a_k = C₀ L^{-k} k^{-α-2}`; the normalization makes the tilt `λ = L`.
    PowerLaw { alpha: Alpha, l: f64 },
    /// Arbitrary nonnegative weights given by a rule, together with (a lower
    /// bound on) the radius of convergence of `Σ a_k z^k`.
    General {
        weights: Arc<dyn Fn(u64) -> f64 + Send + Sync>,
        radius: f64,
    },
}

impl std::fmt::Debug for WeightSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightSequence::PowerLaw { alpha, l } => f
                .debug_struct("PowerLaw")
                .field("alpha", &alpha.get())
                .field("l", l)
                .finish(),
            WeightSequence::General { radius, .. } => f
                .debug_struct("General")
                .field("radius", radius)
                .finish_non_exhaustive(),
        }
    }
}

impl WeightSequence {
    /// Power-law weights with the default scale `L = 1`.
    pub fn power_law(alpha: Alpha) -> Self {
        WeightSequence::PowerLaw { alpha, l: 1.0 }
    }

    pub fn power_law_scaled(alpha: Alpha, l: f64) -> Result<Self, StepDistError> {
        if !(l.is_finite() && l > 0.0) {
            return Err(StepDistError::BadScale(l));
        }
        Ok(WeightSequence::PowerLaw { alpha, l })
    }

    pub fn general(
        weights: Arc<dyn Fn(u64) -> f64 + Send + Sync>,
        radius: f64,
    ) -> Self {
        WeightSequence::General { weights, radius }
    }

    /// Derive the tilted step distribution.
    pub fn derive(&self) -> Result<StepDistribution, StepDistError> {
        match self {
            WeightSequence::PowerLaw { alpha, l } => {
                StepDistribution::power_law_scaled(*alpha, *l)
            }
            WeightSequence::General { weights, radius } => {
                StepDistribution::from_general(weights.as_ref(), *radius)
            }
        }
    }
}

/// How `p_k` is represented.
#[derive(Clone, Debug)]
enum PkRule {
    /// `p_k = c1 · k^{-α-2}` for all `k ≥ 2`.
    PowerLaw { alpha: f64, c1: f64 },
    /// Explicit values for `k = 2, 3, …` (essentially all mass inside).
    Table(Vec<f64>),
}

/// An admissible step distribution over the move alphabet.
#[derive(Clone, Debug)]
pub struct StepDistribution {
    alpha: Option<Alpha>,
    lambda: f64,
    big_c: f64,
    p0: f64,
    consts: Option<PowerLawConstants>,
    rule: PkRule,
    /// `cum[m] = p0 + Σ_{k=2}^{m+2} (k-1) p_k`; degrees `2 ..= table_top`.
    cum: Vec<f64>,
    table_top: u64,
    /// Degree mass above `table_top` (power law only; ~0 for general rules).
    tail_mass: f64,
}

impl StepDistribution {
    /// Power-law family with scale `L = 1`.
    pub fn power_law(alpha: Alpha) -> Result<Self, StepDistError> {
        Self::power_law_scaled(alpha, 1.0)
    }

    pub fn power_law_scaled(alpha: Alpha, l: f64) -> Result<Self, StepDistError> {
        if !(l.is_finite() && l > 0.0) {
            return Err(StepDistError::BadScale(l));
        }
        let consts = power_law_constants(alpha);
        let a = alpha.get();
        let p0 = consts.c1 / consts.c0;
        let big_c = consts.c0 / (consts.c1 * l * l);
        let rule = PkRule::PowerLaw {
            alpha: a,
            c1: consts.c1,
        };
        let mut cum = Vec::with_capacity(TABLE_MAX_DEGREE as usize - 1);
        let mut acc = p0;
        for k in 2..=TABLE_MAX_DEGREE {
            let kf = k as f64;
            acc += (kf - 1.0) * consts.c1 * kf.powf(-a - 2.0);
            cum.push(acc);
        }
        // Exact mass above the table: C₁ Σ_{k>K} (k-1) k^{-α-2}.
        let k_next = TABLE_MAX_DEGREE + 1;
        let tail_mass =
            consts.c1 * (power_sum(a + 1.0, k_next) - power_sum(a + 2.0, k_next));
        let dist = StepDistribution {
            alpha: Some(alpha),
            lambda: l,
            big_c,
            p0,
            consts: Some(consts),
            rule,
            cum,
            table_top: TABLE_MAX_DEGREE,
            tail_mass,
        };
        dist.check_normalization()?;
        Ok(dist)
    }

    /// General weights: solve for the tilt by bisection, then normalize.
    fn from_general(
        a: &(dyn Fn(u64) -> f64 + Send + Sync),
        radius: f64,
    ) -> Result<Self, StepDistError> {
        // Total tilted face mass g(λ) = Σ_{k≥3} (k-1)(k-2)/2 a_k λ^k.
        let g = |lambda: f64| -> Result<f64, StepDistError> {
            let mut sum = 0.0;
            for k in 3..=1_000_000u64 {
                let ak = a(k);
                if ak < 0.0 {
                    return Err(StepDistError::NegativeWeight { k, value: ak });
                }
                let kf = k as f64;
                let term = if ak == 0.0 {
                    0.0
                } else {
                    0.5 * (kf - 1.0) * (kf - 2.0) * ak * lambda.powi(k as i32)
                };
                sum += term;
                if sum > 4.0 {
                    return Ok(sum); // far past the root; enough for bracketing
                }
                if k > 200 && term < 1e-17 * (1.0 + sum) {
                    return Ok(sum);
                }
            }
            Err(StepDistError::SeriesDiverges)
        };

        // Bracket the root of g(λ) = 1 inside (0, radius).
        let mut hi = if radius.is_finite() {
            radius
        } else {
            let mut h = 1.0;
            let mut steps = 0;
            while g(h)? < 1.0 {
                h *= 2.0;
                steps += 1;
                if steps > 200 {
                    return Err(StepDistError::InfeasibleWeights);
                }
            }
            h
        };
        if radius.is_finite() {
            // Feasibility: the supremum over (0, R) must reach 1.
            let probe = radius * (1.0 - 1e-9);
            if g(probe)? < 1.0 {
                return Err(StepDistError::InfeasibleWeights);
            }
            hi = probe;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid)? < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo) < 1e-12 * hi.max(1.0) {
                break;
            }
        }
        let lambda = 0.5 * (lo + hi);

        // Normalizer C and the p_k table.
        let mut s1 = 0.0; // Σ (k-1) a_k λ^{k-2}
        let mut pk_raw = Vec::new(); // a_k λ^{k-2} for k = 2, 3, …
        let mut k = 2u64;
        loop {
            let ak = a(k);
            if ak < 0.0 {
                return Err(StepDistError::NegativeWeight { k, value: ak });
            }
            let kf = k as f64;
            let term = if ak == 0.0 {
                0.0
            } else {
                ak * lambda.powi(k as i32 - 2)
            };
            s1 += (kf - 1.0) * term;
            pk_raw.push(term);
            if k > 200 && (kf - 1.0) * term < 1e-17 * (1.0 + s1) {
                break;
            }
            if k >= 2_000_000 {
                return Err(StepDistError::SeriesDiverges);
            }
            k += 1;
        }
        let big_c = 1.0 / (lambda * lambda) + s1;
        let p0 = 1.0 / (lambda * lambda * big_c);
        let pk: Vec<f64> = pk_raw.iter().map(|t| t / big_c).collect();
        let mut cum = Vec::with_capacity(pk.len());
        let mut acc = p0;
        for (idx, &p) in pk.iter().enumerate() {
            let kf = (idx + 2) as f64;
            acc += (kf - 1.0) * p;
            cum.push(acc);
        }
        let table_top = (pk.len() + 1) as u64;
        let dist = StepDistribution {
            alpha: None,
            lambda,
            big_c,
            p0,
            consts: None,
            rule: PkRule::Table(pk),
            cum,
            table_top,
            tail_mass: 0.0,
        };
        dist.check_normalization()?;
        Ok(dist)
    }

    fn check_normalization(&self) -> Result<(), StepDistError> {
        let total = self.cum.last().copied().unwrap_or(self.p0) + self.tail_mass;
        if (total - 1.0).abs() > 1e-11 {
            return Err(StepDistError::NormalizationLeak(total));
        }
        Ok(())
    }

    #[inline]
    pub fn p0(&self) -> f64 {
        self.p0
    }

    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    #[inline]
    pub fn big_c(&self) -> f64 {
        self.big_c
    }

    pub fn alpha(&self) -> Option<Alpha> {
        self.alpha
    }

    pub fn constants(&self) -> Option<PowerLawConstants> {
        self.consts
    }

    /// `p_k` for a degree `k ≥ 2`.
    pub fn pk(&self, k: u64) -> f64 {
        debug_assert!(k >= 2);
        match &self.rule {
            PkRule::PowerLaw { alpha, c1 } => c1 * (k as f64).powf(-alpha - 2.0),
            PkRule::Table(t) => t.get((k - 2) as usize).copied().unwrap_or(0.0),
        }
    }

    /// Probability of one specific move.
    pub fn move_prob(&self, mv: Move) -> f64 {
        match mv {
            Move::Edge => self.p0,
            Move::Face { i, j } => self.pk(i + j + 2),
        }
    }

    /// Mean walk increment `(E[ΔX], E[ΔY])`, evaluated by series. Zero (to
    /// floating-point accuracy) for every admissible weight sequence.
    pub fn mean_increment(&self) -> (f64, f64) {
        // E[ΔX] = p0 - Σ_k (k-1)(k-2)/2 p_k  and  E[ΔY] = -E[ΔX]:
        // for degree k the k-1 splits (i, j = k-2-i) have mean i = (k-2)/2.
        let face_mean = match &self.rule {
            PkRule::PowerLaw { alpha, c1 } => {
                // Σ (k-1)(k-2)/2 · c1 k^{-α-2} = c1 · S0(α)
                c1 * series_s0(*alpha)
            }
            PkRule::Table(t) => t
                .iter()
                .enumerate()
                .map(|(idx, &p)| {
                    let kf = (idx + 2) as f64;
                    0.5 * (kf - 1.0) * (kf - 2.0) * p
                })
                .sum(),
        };
        let m = self.p0 - face_mean;
        (m, -m)
    }

    /// Sample a face degree; `None` encodes the edge move.
    fn sample_degree(&self, rng: &mut Stream) -> Option<u64> {
        let u = rng.next_f64();
        if u < self.p0 {
            return None;
        }
        let last = *self.cum.last().expect("table nonempty");
        if u < last {
            // First index with cum > u; degree = index + 2.
            let idx = self.cum.partition_point(|&c| c <= u);
            return Some(idx as u64 + 2);
        }
        match self.rule {
            PkRule::PowerLaw { alpha, c1 } => Some(self.sample_tail_degree(alpha, c1, rng)),
            // General tables hold all but ≤1e-12 of the mass; attribute the
            // sliver to the largest tabulated degree.
            PkRule::Table(_) => Some(self.table_top),
        }
    }

    /// Exact sampling of the degree law restricted to `k > table_top`:
    /// inversion of the continuous Pareto envelope `x^{-α-1}` on
    /// `[K + 1/2, ∞)` followed by one accept/reject correction per proposal.
    /// The envelope dominates because `∫_cell x^{-α-1} dx ≥ k^{-α-1} >
    /// (k-1)k^{-α-2}` (convexity).
    fn sample_tail_degree(&self, alpha: f64, _c1: f64, rng: &mut Stream) -> u64 {
        let x0 = self.table_top as f64 + 0.5;
        loop {
            let v = rng.next_f64_open();
            let x = x0 * v.powf(-1.0 / alpha);
            if x >= u64::MAX as f64 / 2.0 {
                continue; // astronomically improbable guard
            }
            let k = (x + 0.5).floor() as u64;
            let kf = k as f64;
            let target = (kf - 1.0) * kf.powf(-alpha - 2.0);
            let envelope = ((kf - 0.5).powf(-alpha) - (kf + 0.5).powf(-alpha)) / alpha;
            debug_assert!(target <= envelope * (1.0 + 1e-12));
            if rng.next_f64() * envelope < target {
                return k;
            }
        }
    }

    /// Draw one move: the edge move with probability `p_0`, otherwise a face
    /// degree `k` and a uniformly random split `i + j = k - 2`.
    pub fn sample_move(&self, rng: &mut Stream) -> Move {
        match self.sample_degree(rng) {
            None => Move::Edge,
            Some(k) => {
                let i = rng.next_below(k - 1);
                Move::Face { i, j: k - 2 - i }
            }
        }
    }

    /// Total degree mass above the sampling table (diagnostic).
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Largest degree resolved by the table.
    pub fn table_top(&self) -> u64 {
        self.table_top
    }
}
