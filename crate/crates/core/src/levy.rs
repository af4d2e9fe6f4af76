//! Correlated pair of heavy-tailed jump processes on a finite horizon.
//!
//! A Poisson cloud of jump times and magnitudes (power-law intensity
//! `c1 x^{-alpha-1}` above a truncation level delta) is split by independent
//! uniforms: the first coordinate takes `-U j`, the second `(1-U) j`, and a
//! linear compensator recenters each coordinate exactly. Small jumps below
//! delta are dropped and mean-compensated only; the discarded variance is
//! reported so callers can budget the truncation.

use rand_distr::{Distribution, Poisson};
use thiserror::Error;

use crate::rng::Stream;
use crate::stepdist::Alpha;

#[derive(Debug, Error, PartialEq)]
pub enum LevyError {
    #[error("horizon must be positive, got {t}")]
    BadHorizon { t: f64 },
    #[error("truncation level must lie in (0, 1), got {delta}")]
    BadDelta { delta: f64 },
    #[error("jump constant must be positive, got {c1}")]
    BadConstant { c1: f64 },
    #[error("expected jump count {mean:.3e} exceeds the simulation budget")]
    TooManyJumps { mean: f64 },
    #[error("adaptive quadrature did not converge")]
    QuadratureFailed,
    #[error("rectangle must satisfy x1 < x2 <= 0 <= y1 < y2")]
    DegenerateRectangle,
}

/// One retained jump: time, magnitude, and split fraction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jump {
    pub t: f64,
    pub j: f64,
    pub u: f64,
}

/// Poisson cloud of truncated jumps on [0, T], sorted by time. Magnitudes
/// follow the Pareto tail P[j > x] = (x/delta)^{-alpha}; splits are uniform.
pub fn sample_jump_ppp(
    horizon: f64,
    delta: f64,
    alpha: Alpha,
    c1: f64,
    rng: &mut Stream,
) -> Result<Vec<Jump>, LevyError> {
    if !horizon.is_finite() || horizon <= 0.0 {
        return Err(LevyError::BadHorizon { t: horizon });
    }
    if !delta.is_finite() || delta <= 0.0 || delta >= 1.0 {
        return Err(LevyError::BadDelta { delta });
    }
    if !c1.is_finite() || c1 <= 0.0 {
        return Err(LevyError::BadConstant { c1 });
    }
    let a = alpha.get();
    let mean = horizon * c1 * delta.powf(-a) / a;
    if mean > 5e8 {
        return Err(LevyError::TooManyJumps { mean });
    }
    let count = Poisson::new(mean.max(f64::MIN_POSITIVE))
        .map_err(|_| LevyError::TooManyJumps { mean })?
        .sample(rng) as usize;
    let mut jumps = Vec::with_capacity(count);
    for _ in 0..count {
        let t = horizon * rng.next_f64();
        let j = delta * rng.next_f64_open().powf(-1.0 / a);
        let u = rng.next_f64();
        jumps.push(Jump { t, j, u });
    }
    jumps.sort_by(|p, q| p.t.total_cmp(&q.t));
    Ok(jumps)
}

/// The assembled pair, evaluable at any t in [0, T]. Immutable after
/// construction; prefix sums make evaluation logarithmic in the jump count.
#[derive(Clone, Debug)]
pub struct StablePairPath {
    pub horizon: f64,
    pub delta: f64,
    pub alpha: Alpha,
    pub c1: f64,
    jumps: Vec<Jump>,
    /// Cumulative sums of U_k j_k and of j_k, aligned with `jumps`.
    prefix_uj: Vec<f64>,
    prefix_j: Vec<f64>,
    /// Per-unit-time recentering applied with opposite signs to the two
    /// coordinates: (c1/2) delta^{1-alpha} / (alpha-1).
    pub compensator_rate: f64,
}

pub fn assemble_pair(
    jumps: Vec<Jump>,
    delta: f64,
    horizon: f64,
    alpha: Alpha,
    c1: f64,
) -> StablePairPath {
    debug_assert!(jumps.windows(2).all(|w| w[0].t <= w[1].t));
    let a = alpha.get();
    let compensator_rate = 0.5 * c1 * delta.powf(1.0 - a) / (a - 1.0);
    let mut prefix_uj = Vec::with_capacity(jumps.len());
    let mut prefix_j = Vec::with_capacity(jumps.len());
    let (mut suj, mut sj) = (0.0, 0.0);
    for jr in &jumps {
        suj += jr.u * jr.j;
        sj += jr.j;
        prefix_uj.push(suj);
        prefix_j.push(sj);
    }
    StablePairPath {
        horizon,
        delta,
        alpha,
        c1,
        jumps,
        prefix_uj,
        prefix_j,
        compensator_rate,
    }
}

impl StablePairPath {
    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    /// Number of jumps with time <= t.
    fn count_upto(&self, t: f64) -> usize {
        self.jumps.partition_point(|j| j.t <= t)
    }

    /// First coordinate: negative jump parts plus positive drift.
    pub fn w1(&self, t: f64) -> f64 {
        let k = self.count_upto(t);
        let s = if k == 0 { 0.0 } else { self.prefix_uj[k - 1] };
        -s + t * self.compensator_rate
    }

    /// Second coordinate: positive jump parts minus the same drift.
    pub fn w2(&self, t: f64) -> f64 {
        let k = self.count_upto(t);
        let (suj, sj) = if k == 0 {
            (0.0, 0.0)
        } else {
            (self.prefix_uj[k - 1], self.prefix_j[k - 1])
        };
        (sj - suj) - t * self.compensator_rate
    }

    /// Standard deviation bound on the discarded small-jump part of one
    /// coordinate over the whole horizon: sqrt(T * E[U^2] * c1 *
    /// delta^{2-alpha} / (2-alpha)) with E[U^2] = 1/3.
    pub fn truncation_std_bound(&self) -> f64 {
        (self.horizon * truncation_variance_rate(self.delta, self.alpha, self.c1)).sqrt()
    }

    /// Evaluate both coordinates on a uniform grid of `points` times
    /// including both endpoints.
    pub fn sample_grid(&self, points: usize) -> Vec<(f64, f64, f64)> {
        assert!(points >= 2);
        (0..points)
            .map(|i| {
                let t = self.horizon * i as f64 / (points - 1) as f64;
                (t, self.w1(t), self.w2(t))
            })
            .collect()
    }
}

/// Per-unit-time variance of the discarded jumps, per coordinate:
/// E[U^2] c1 delta^{2-alpha} / (2-alpha).
pub fn truncation_variance_rate(delta: f64, alpha: Alpha, c1: f64) -> f64 {
    let a = alpha.get();
    c1 * delta.powf(2.0 - a) / (3.0 * (2.0 - a))
}

/// Default truncation level for a given horizon: small against the natural
/// scale T^{1/alpha} while keeping the jump count tractable.
pub fn default_delta(horizon: f64, alpha: Alpha) -> f64 {
    (0.01 * horizon.powf(1.0 / alpha.get())).min(0.5)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, LevyError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol {
        return Ok(left + right + err / 15.0);
    }
    if depth == 0 {
        return Err(LevyError::QuadratureFailed);
    }
    let l = adaptive_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?;
    let r = adaptive_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?;
    Ok(l + r)
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn integrate_adaptive(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, LevyError> {
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(a, b, fa, fm, fb);
    adaptive_step(&f, a, b, fa, fm, fb, whole, tol, 60)
}

/// Centering constant of the pre-limit walk: c1/((alpha-1)(alpha+1)) plus
/// c1/(alpha+1) times the integral of x (x + sqrt(1-x^2))^{-alpha-1} over
/// [0, 1], computed adaptively to 1e-10. A documented diagnostic.
pub fn drift_m_alpha(alpha: Alpha, c1: f64) -> Result<f64, LevyError> {
    let a = alpha.get();
    let integrand = move |x: f64| x / (x + (1.0 - x * x).max(0.0).sqrt()).powf(a + 1.0);
    let integral = integrate_adaptive(integrand, 0.0, 1.0, 1e-10)?;
    Ok(c1 / ((a - 1.0) * (a + 1.0)) + c1 * integral / (a + 1.0))
}

/// Mass of the jump-intensity measure with density c1 (y-x)^{-alpha-2} on
/// x < 0 < y over the rectangle [x1,x2] x [y1,y2], via the closed-form
/// mixed antiderivative -(y-x)^{-alpha} / (alpha (alpha+1)).
pub fn nu_rectangle_mass(
    x1: f64,
    x2: f64,
    y1: f64,
    y2: f64,
    alpha: Alpha,
    c1: f64,
) -> Result<f64, LevyError> {
    let ordered = x1 < x2 && x2 <= 0.0 && 0.0 <= y1 && y1 < y2;
    if !ordered {
        return Err(LevyError::DegenerateRectangle);
    }
    let a = alpha.get();
    let g = |x: f64, y: f64| -> f64 {
        if y - x <= 0.0 {
            // Only reachable at the corner x2 = y1 = 0, where the density
            // integrates to a finite value approached through this limit.
            return 0.0;
        }
        -(y - x).powf(-a) / (a * (a + 1.0))
    };
    Ok(c1 * (g(x2, y2) - g(x1, y2) - g(x2, y1) + g(x1, y1)))
}

/// Mean of the Poisson jump count for the given parameters.
pub fn expected_jump_count(horizon: f64, delta: f64, alpha: Alpha, c1: f64) -> f64 {
    horizon * c1 * delta.powf(-alpha.get()) / alpha.get()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stepdist::StepDistribution;
    use rayon::prelude::*;

    fn setup(alpha: f64) -> (Alpha, f64) {
        let a = Alpha::new(alpha).unwrap();
        let d = StepDistribution::power_law(a).unwrap();
        (a, d.constants().unwrap().c1)
    }

    #[test]
    fn rejects_bad_parameters() {
        let (a, c1) = setup(1.5);
        let mut rng = Stream::substream(1, 0);
        assert!(matches!(
            sample_jump_ppp(-1.0, 0.1, a, c1, &mut rng),
            Err(LevyError::BadHorizon { .. })
        ));
        assert!(matches!(
            sample_jump_ppp(1.0, 1.5, a, c1, &mut rng),
            Err(LevyError::BadDelta { .. })
        ));
        assert!(matches!(
            sample_jump_ppp(1.0, 0.1, a, -1.0, &mut rng),
            Err(LevyError::BadConstant { .. })
        ));
        assert!(matches!(
            sample_jump_ppp(1e12, 1e-15_f64.max(f64::MIN_POSITIVE), a, c1, &mut rng),
            Err(LevyError::TooManyJumps { .. })
        ));
    }

    #[test]
    fn jump_cloud_shape() {
        let (a, c1) = setup(1.5);
        let mut rng = Stream::substream(2, 0);
        let jumps = sample_jump_ppp(3.0, 0.2, a, c1, &mut rng).unwrap();
        assert!(!jumps.is_empty());
        for w in jumps.windows(2) {
            assert!(w[0].t <= w[1].t);
        }
        for j in &jumps {
            assert!(j.t >= 0.0 && j.t <= 3.0);
            assert!(j.j >= 0.2);
            assert!((0.0..=1.0).contains(&j.u));
        }
    }

    #[test]
    fn jump_count_matches_intensity() {
        let (a, c1) = setup(1.5);
        let horizon = 2.0;
        let delta = 0.3;
        let mu = expected_jump_count(horizon, delta, a, c1);
        let runs = 10_000u64;
        let total: usize = (0..runs)
            .into_par_iter()
            .map(|k| {
                let mut rng = Stream::substream(500 + k, 1);
                sample_jump_ppp(horizon, delta, a, c1, &mut rng).unwrap().len()
            })
            .sum();
        let mean = total as f64 / runs as f64;
        let se = (mu / runs as f64).sqrt();
        assert!(
            (mean - mu).abs() < 4.0 * se,
            "mean {mean} vs {mu}, se {se}"
        );
    }

    #[test]
    fn magnitudes_follow_the_pareto_tail() {
        // One-sample KS against the exact truncated tail law at 1%.
        let (a, c1) = setup(1.4);
        let mut rng = Stream::substream(3, 0);
        let mut mags: Vec<f64> = Vec::new();
        let delta = 0.25;
        while mags.len() < 5000 {
            for j in sample_jump_ppp(5.0, delta, a, c1, &mut rng).unwrap() {
                mags.push(j.j);
            }
        }
        mags.sort_by(f64::total_cmp);
        let n = mags.len() as f64;
        let mut dstat: f64 = 0.0;
        for (i, &x) in mags.iter().enumerate() {
            let cdf = 1.0 - (x / delta).powf(-a.get());
            let lo = i as f64 / n;
            let hi = (i + 1) as f64 / n;
            dstat = dstat.max((cdf - lo).abs()).max((hi - cdf).abs());
        }
        let crit = 1.628 / n.sqrt();
        assert!(dstat < crit, "KS {dstat} >= {crit}");
    }

    #[test]
    fn empty_cloud_is_pure_compensator() {
        let (a, c1) = setup(1.5);
        let delta = 0.1;
        let path = assemble_pair(Vec::new(), delta, 2.0, a, c1);
        let rate = 0.5 * c1 * delta.powf(1.0 - a.get()) / (a.get() - 1.0);
        for t in [0.0, 0.7, 2.0] {
            assert_eq!(path.w1(t), t * rate);
            assert_eq!(path.w2(t), -t * rate);
        }
    }

    #[test]
    fn jumps_are_simultaneous_with_exact_split() {
        let (a, c1) = setup(1.6);
        let mut rng = Stream::substream(4, 0);
        let delta = 0.15;
        let jumps = sample_jump_ppp(4.0, delta, a, c1, &mut rng).unwrap();
        let path = assemble_pair(jumps.clone(), delta, 4.0, a, c1);
        for jr in &jumps {
            let eps = 1e-12 * jr.t.max(1.0);
            let d1 = path.w1(jr.t) - path.w1(jr.t - eps);
            let d2 = path.w2(jr.t) - path.w2(jr.t - eps);
            // Drift over eps is negligible against the jump sizes compared.
            assert!(d1 <= 1e-9, "first coordinate must jump down");
            assert!(d2 >= -1e-9, "second coordinate must jump up");
            assert!(((d2 - d1) - jr.j).abs() < 1e-6 * jr.j.max(1.0));
        }
    }

    #[test]
    fn coordinates_are_centered() {
        let (a, c1) = setup(1.5);
        let horizon = 1.0;
        let delta = 0.05;
        let runs = 10_000u64;
        let finals: Vec<(f64, f64)> = (0..runs)
            .into_par_iter()
            .map(|k| {
                let mut rng = Stream::substream(9000 + k, 2);
                let jumps = sample_jump_ppp(horizon, delta, a, c1, &mut rng).unwrap();
                let p = assemble_pair(jumps, delta, horizon, a, c1);
                (p.w1(horizon), p.w2(horizon))
            })
            .collect();
        for (label, vals) in [
            ("w1", finals.iter().map(|f| f.0).collect::<Vec<_>>()),
            ("w2", finals.iter().map(|f| f.1).collect::<Vec<_>>()),
            (
                "difference",
                finals.iter().map(|f| f.1 - f.0).collect::<Vec<_>>(),
            ),
        ] {
            let n = vals.len() as f64;
            let mean = vals.iter().sum::<f64>() / n;
            let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
            let se = (var / n).sqrt();
            assert!(mean.abs() < 4.0 * se, "{label}: mean {mean}, se {se}");
        }
    }

    #[test]
    fn truncation_budget_formula() {
        let (a, c1) = setup(1.5);
        let delta = 0.04;
        let path = assemble_pair(Vec::new(), delta, 3.0, a, c1);
        let expect = (3.0 * c1 * delta.powf(0.5) / (3.0 * 0.5)).sqrt();
        assert!((path.truncation_std_bound() - expect).abs() < 1e-12);
    }

    #[test]
    fn drift_constant_properties() {
        for alpha in [1.1, 1.3, 1.5, 1.7, 1.9] {
            let (a, c1) = setup(alpha);
            let m = drift_m_alpha(a, c1).unwrap();
            assert!(m > 0.0);
            // The integrand is at most x, so the integral is at most 1/2.
            let bound = c1 / ((alpha - 1.0) * (alpha + 1.0)) + c1 / (2.0 * (alpha + 1.0));
            assert!(m <= bound + 1e-12);
        }
    }

    #[test]
    fn drift_matches_fixed_grid_quadrature() {
        // Independent oracle: composite Simpson on 2^20 fixed panels.
        let (a, c1) = setup(1.5);
        let al = a.get();
        let f = |x: f64| x / (x + (1.0 - x * x).max(0.0).sqrt()).powf(al + 1.0);
        let n = 1 << 20;
        let h = 1.0 / n as f64;
        let mut acc = f(0.0) + f(1.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(i as f64 * h);
        }
        let integral = acc * h / 3.0;
        let oracle = c1 / ((al - 1.0) * (al + 1.0)) + c1 * integral / (al + 1.0);
        let m = drift_m_alpha(a, c1).unwrap();
        assert!((m - oracle).abs() < 1e-8, "{m} vs {oracle}");
    }

    #[test]
    fn rectangle_mass_swap_symmetry() {
        let (a, c1) = setup(1.5);
        let m1 = nu_rectangle_mass(-3.0, -1.0, 0.5, 2.0, a, c1).unwrap();
        let m2 = nu_rectangle_mass(-2.0, -0.5, 1.0, 3.0, a, c1).unwrap();
        assert!((m1 - m2).abs() < 1e-14);
        assert!(m1 > 0.0);
        assert!(matches!(
            nu_rectangle_mass(-1.0, -2.0, 0.5, 2.0, a, c1),
            Err(LevyError::DegenerateRectangle)
        ));
    }

    #[test]
    fn rectangle_mass_matches_split_quadrature() {
        // Oracle: integrate over the jump magnitude the u-interval length
        // selected by the split map into the rectangle.
        let (a, c1) = setup(1.5);
        let al = a.get();
        let (x1, x2, y1, y2) = (-2.5, -0.7, 0.4, 1.8);
        let closed = nu_rectangle_mass(x1, x2, y1, y2, a, c1).unwrap();
        let integrand = move |j: f64| {
            if j <= 0.0 {
                return 0.0;
            }
            let lo = (-x2 / j).max(1.0 - y2 / j).max(0.0);
            let hi = (-x1 / j).min(1.0 - y1 / j).min(1.0);
            (hi - lo).max(0.0) * c1 * j.powf(-al - 1.0)
        };
        let (jlo, jhi) = (y1 - x2, y2 - x1);
        // The integrand has kinks; split at every corner combination.
        let mut cuts = vec![jlo, -x1, -x2, y1, y2, -x1 + y1, -x2 + y2, jhi];
        cuts.retain(|&c| c >= jlo && c <= jhi);
        cuts.sort_by(f64::total_cmp);
        let mut oracle = 0.0;
        for w in cuts.windows(2) {
            if w[1] > w[0] {
                oracle += integrate_adaptive(integrand, w[0], w[1], 1e-12).unwrap();
            }
        }
        assert!((closed - oracle).abs() < 1e-9, "{closed} vs {oracle}");
    }

    #[test]
    fn simulated_jumps_match_rectangle_masses() {
        // Frequencies of large-jump splits in three disjoint rectangles
        // against exact intensities, 4 sigma Poisson bounds.
        let (a, c1) = setup(1.5);
        let horizon = 200.0;
        let delta = 0.5;
        let rects = [
            (-2.0, -1.0, 1.0, 2.0),
            (-1.0, -0.25, 2.0, 4.0),
            (-4.0, -2.0, 0.5, 1.0),
        ];
        let mut counts = [0usize; 3];
        let mut rng = Stream::substream(77, 3);
        let jumps = sample_jump_ppp(horizon, delta, a, c1, &mut rng).unwrap();
        for jr in &jumps {
            let dx = -jr.u * jr.j;
            let dy = (1.0 - jr.u) * jr.j;
            for (ri, &(x1, x2, y1, y2)) in rects.iter().enumerate() {
                if dx >= x1 && dx <= x2 && dy >= y1 && dy <= y2 {
                    counts[ri] += 1;
                }
            }
        }
        for (ri, &(x1, x2, y1, y2)) in rects.iter().enumerate() {
            // All rectangles sit inside {magnitude >= 1 >= delta}.
            let mass = horizon * nu_rectangle_mass(x1, x2, y1, y2, a, c1).unwrap();
            let sigma = mass.sqrt();
            assert!(
                (counts[ri] as f64 - mass).abs() < 4.0 * sigma,
                "rect {ri}: count {} vs mass {mass}",
                counts[ri]
            );
        }
    }

    #[test]
    fn stability_under_time_scaling() {
        // a^{-1/alpha} W1(a t) should match W1(t) in law when the
        // truncation is scaled compatibly; two-sample KS at 1%.
        let (al, c1) = setup(1.5);
        let a_scale = 4.0f64;
        let delta = 0.05;
        let n = 1500u64;
        let base: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|k| {
                let mut rng = Stream::substream(40_000 + k, 4);
                let jumps = sample_jump_ppp(1.0, delta, al, c1, &mut rng).unwrap();
                assemble_pair(jumps, delta, 1.0, al, c1).w1(1.0)
            })
            .collect();
        let d_scaled = delta * a_scale.powf(1.0 / al.get());
        let scaled: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|k| {
                let mut rng = Stream::substream(80_000 + k, 4);
                let jumps = sample_jump_ppp(a_scale, d_scaled, al, c1, &mut rng).unwrap();
                let w = assemble_pair(jumps, d_scaled, a_scale, al, c1).w1(a_scale);
                w * a_scale.powf(-1.0 / al.get())
            })
            .collect();
        let mut xs = base.clone();
        let mut ys = scaled.clone();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        let (mut i, mut jj) = (0usize, 0usize);
        let mut dstat: f64 = 0.0;
        while i < xs.len() && jj < ys.len() {
            if xs[i] <= ys[jj] {
                i += 1;
            } else {
                jj += 1;
            }
            let fx = i as f64 / xs.len() as f64;
            let fy = jj as f64 / ys.len() as f64;
            dstat = dstat.max((fx - fy).abs());
        }
        let nn = xs.len() as f64;
        let crit = 1.628 * (2.0 / nn).sqrt();
        assert!(dstat < crit, "KS {dstat} >= {crit}");
    }

    #[test]
    fn grid_evaluation_is_consistent() {
        let (a, c1) = setup(1.5);
        let mut rng = Stream::substream(5, 0);
        let delta = 0.2;
        let jumps = sample_jump_ppp(2.0, delta, a, c1, &mut rng).unwrap();
        let path = assemble_pair(jumps, delta, 2.0, a, c1);
        let grid = path.sample_grid(11);
        assert_eq!(grid.len(), 11);
        assert_eq!(grid[0].0, 0.0);
        assert_eq!(grid[10].0, 2.0);
        for &(t, w1, w2) in &grid {
            assert_eq!(w1, path.w1(t));
            assert_eq!(w2, path.w2(t));
        }
    }

    #[test]
    fn default_delta_is_sane() {
        let a = Alpha::new(1.5).unwrap();
        let d = default_delta(1.0, a);
        assert!(d > 0.0 && d < 1.0);
        assert!(default_delta(1e6, a) <= 0.5);
    }
}
