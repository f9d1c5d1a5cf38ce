//! Randomized order-axiom harness.
//!
//! Each check is a pure predicate over instances drawn from a per-trial
//! deterministic stream (`seed`, trial index), so a suite is reproducible
//! bit-for-bit from its configuration. Violations are data, not errors: the
//! report carries per-check counts and the first counterexample found.
//!
//! Checks needing comparable instances resample up to a fixed budget and
//! record a vacuous trial when none is found, so coverage is visible in the
//! report rather than silently assumed.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::orders::{Comparability, Relation, Tag};
use crate::scale::{entropy_lower, entropy_upper, Gauge};
use crate::spectra::{scale_flat, WeightedSpectrum};
use crate::{Error, Result};

/// Resampling budget for checks quantified over comparable instances.
const FILTER_TRIES: usize = 100;

/// Configuration of one randomized suite.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialConfig {
    pub tag: Tag,
    pub trials: u32,
    pub seed: u64,
    /// Dimensions are drawn uniformly from `2..=dim_max`; capped at 8.
    pub dim_max: usize,
    /// Descending positive scaling factors for the stability check; the
    /// smallest is the decisive antecedent.
    pub epsilon_ladder: Vec<f64>,
    /// Fixed inverse temperature; sampled log-uniformly in [0.1, 5] if absent.
    pub beta: Option<f64>,
    /// Fixed chemical potential; sampled uniformly in [-1, 1] if absent.
    pub mu: Option<f64>,
    /// Fixed field parameter; sampled log-uniformly in [0.1, 5] if absent.
    pub gamma: Option<f64>,
}

impl TrialConfig {
    pub fn new(tag: Tag, trials: u32, seed: u64, dim_max: usize) -> Result<Self> {
        let cfg = Self {
            tag,
            trials,
            seed,
            dim_max,
            epsilon_ladder: (1..=20).map(|k| crate::math::powf(2.0, -(k as f64))).collect(),
            beta: None,
            mu: None,
            gamma: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be >= 1"));
        }
        if self.dim_max < 2 {
            return Err(Error::InvalidConfig("dim_max must be >= 2"));
        }
        if self.dim_max > 8 {
            return Err(Error::InvalidConfig("dim_max is capped at 8"));
        }
        if self.epsilon_ladder.is_empty() {
            return Err(Error::InvalidConfig("epsilon ladder must be nonempty"));
        }
        let mut prev = f64::INFINITY;
        for &e in &self.epsilon_ladder {
            if !(e > 0.0 && e < prev) {
                return Err(Error::InvalidConfig(
                    "epsilon ladder must be positive and strictly descending",
                ));
            }
            prev = e;
        }
        Ok(())
    }
}

/// Counters for one check.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckStats {
    /// Trials in which the check's conclusion was actually evaluated.
    pub checked: u64,
    /// Trials skipped because no qualifying instance was found in budget.
    pub vacuous: u64,
    pub violations: u64,
    pub first_counterexample: Option<String>,
}

impl CheckStats {
    fn pass(&mut self) {
        self.checked += 1;
    }

    fn fail(&mut self, describe: impl FnOnce() -> String) {
        self.checked += 1;
        self.violations += 1;
        if self.first_counterexample.is_none() {
            self.first_counterexample = Some(describe());
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.pass()
        } else {
            self.fail(describe)
        }
    }

    /// Fraction of trials that produced a non-vacuous check.
    pub fn coverage(&self) -> f64 {
        let total = self.checked + self.vacuous;
        if total == 0 {
            0.0
        } else {
            self.checked as f64 / total as f64
        }
    }
}

/// Per-axiom outcome of [`run_axiom_suite`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AxiomReport {
    pub reflexivity: CheckStats,
    pub transitivity: CheckStats,
    pub consistent_composition: CheckStats,
    pub scaling_invariance: CheckStats,
    pub splitting_recombination: CheckStats,
    pub stability: CheckStats,
    pub comparison_completeness: CheckStats,
    pub bracketing: CheckStats,
    pub cancellation: CheckStats,
}

impl AxiomReport {
    pub fn checks(&self) -> [(&'static str, &CheckStats); 9] {
        [
            ("reflexivity", &self.reflexivity),
            ("transitivity", &self.transitivity),
            ("consistent-composition", &self.consistent_composition),
            ("scaling-invariance", &self.scaling_invariance),
            ("splitting-recombination", &self.splitting_recombination),
            ("stability", &self.stability),
            ("comparison-completeness", &self.comparison_completeness),
            ("bracketing", &self.bracketing),
            ("cancellation", &self.cancellation),
        ]
    }

    pub fn total_violations(&self) -> u64 {
        self.checks().iter().map(|(_, s)| s.violations).sum()
    }
}

/// Outcome of [`run_lemma1_suite`]: the sufficiency condition (a strict gap
/// between upper and lower scales forces convertibility) and the necessity
/// condition (convertibility forces both scales monotone).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Lemma1Report {
    pub sufficiency: CheckStats,
    pub necessity: CheckStats,
}

/// Deterministic sampling primitives shared by the harness, the batch
/// verifier, and the acceptance suite.
pub mod sampling {
    use alloc::vec;
    use alloc::vec::Vec;

    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::math;
    use crate::orders::Tag;
    use crate::spectra::{LabeledState, Reservoir, WeightedSpectrum};
    use crate::Result;

    /// Independent deterministic stream for one trial of a seeded suite.
    pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        rng
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform_in(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * uniform(rng)
    }

    pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
        math::exp(uniform_in(rng, math::ln(lo), math::ln(hi)))
    }

    pub fn index(rng: &mut ChaCha8Rng, n: usize) -> usize {
        (rng.next_u64() % n as u64) as usize
    }

    /// Uniform dimension in `2..=dim_max`.
    pub fn draw_dim(rng: &mut ChaCha8Rng, dim_max: usize) -> usize {
        2 + index(rng, dim_max - 1)
    }

    /// Reservoir parameters for one trial.
    #[derive(Clone, Copy, Debug, PartialEq)]
    pub struct Params {
        pub beta: f64,
        pub mu: f64,
        pub gamma: f64,
    }

    pub fn draw_params(
        rng: &mut ChaCha8Rng,
        tag: Tag,
        beta: Option<f64>,
        mu: Option<f64>,
        gamma: Option<f64>,
    ) -> Params {
        // Consume the stream identically for every tag so states that follow
        // see tag-independent randomness; reductions across tags rely on it.
        let sampled_beta = log_uniform(rng, 0.1, 5.0);
        let sampled_mu = uniform_in(rng, -1.0, 1.0);
        let sampled_gamma = log_uniform(rng, 0.1, 5.0);
        let _ = tag;
        Params {
            beta: beta.unwrap_or(sampled_beta),
            mu: mu.unwrap_or(sampled_mu),
            gamma: gamma.unwrap_or(sampled_gamma),
        }
    }

    /// Reservoir with empty labels: the parameter carrier for a [`crate::orders::Relation`].
    pub fn bare_reservoir(tag: Tag, p: &Params) -> Reservoir {
        match tag {
            Tag::M => Reservoir::none(),
            Tag::T => Reservoir::heat(p.beta, vec![]),
            Tag::Nt => Reservoir::heat_particle(p.beta, p.mu, vec![], vec![]),
            Tag::J => Reservoir::angular_momentum(p.gamma, vec![]),
        }
    }

    /// Reservoir with freshly sampled labels for a `dim`-level state:
    /// energies uniform in [0, 1], particle numbers in 0..=3, angular momenta
    /// uniform in [-1, 1].
    pub fn draw_reservoir(rng: &mut ChaCha8Rng, tag: Tag, dim: usize, p: &Params) -> Reservoir {
        match tag {
            Tag::M => Reservoir::none(),
            Tag::T => {
                let energies = (0..dim).map(|_| uniform(rng)).collect();
                Reservoir::heat(p.beta, energies)
            }
            Tag::Nt => {
                let energies = (0..dim).map(|_| uniform(rng)).collect();
                let particles = (0..dim).map(|_| index(rng, 4) as u64).collect();
                Reservoir::heat_particle(p.beta, p.mu, energies, particles)
            }
            Tag::J => {
                let jz = (0..dim).map(|_| uniform_in(rng, -1.0, 1.0)).collect();
                Reservoir::angular_momentum(p.gamma, jz)
            }
        }
    }

    /// Spectrum drawn uniformly from the simplex (exponential gaps), paired
    /// with the given reservoir.
    pub fn draw_labeled(rng: &mut ChaCha8Rng, dim: usize, res: &Reservoir) -> Result<LabeledState> {
        let mut raw = Vec::with_capacity(dim);
        let mut total = 0.0;
        for _ in 0..dim {
            let e = -math::ln(1.0 - uniform(rng));
            raw.push(e);
            total += e;
        }
        for v in raw.iter_mut() {
            *v /= total;
        }
        LabeledState::new(&raw, res.clone())
    }

    pub fn draw_state(rng: &mut ChaCha8Rng, dim: usize, res: &Reservoir) -> Result<WeightedSpectrum> {
        draw_labeled(rng, dim, res)?.weighted()
    }

    /// Equilibrium occupation on a random nonempty subset of the levels:
    /// a flat state after rescaling. Returns the state and its support weight.
    pub fn draw_flat(
        rng: &mut ChaCha8Rng,
        dim: usize,
        res: &Reservoir,
    ) -> Result<(WeightedSpectrum, f64)> {
        let weights = res.weights(dim)?;
        let mut mask = vec![false; dim];
        let mut any = false;
        for m in mask.iter_mut() {
            *m = uniform(rng) < 0.5;
            any |= *m;
        }
        if !any {
            mask[index(rng, dim)] = true;
        }
        let z: f64 = weights
            .iter()
            .zip(&mask)
            .filter(|(_, &m)| m)
            .map(|(&w, _)| w)
            .sum();
        let probs: Vec<f64> = weights
            .iter()
            .zip(&mask)
            .map(|(&w, &m)| if m { w / z } else { 0.0 })
            .collect();
        Ok((LabeledState::new(&probs, res.clone())?.weighted()?, z))
    }

    /// Full-support equilibrium: probabilities proportional to the weights.
    pub fn equilibrium(dim: usize, res: &Reservoir) -> Result<WeightedSpectrum> {
        let weights = res.weights(dim)?;
        let z: f64 = weights.iter().sum();
        let probs: Vec<f64> = weights.iter().map(|&w| w / z).collect();
        LabeledState::new(&probs, res.clone())?.weighted()
    }

    /// Pure state concentrated on the smallest-weight level; precedes every
    /// state on the same labels.
    pub fn pure_min_weight(dim: usize, res: &Reservoir) -> Result<WeightedSpectrum> {
        let weights = res.weights(dim)?;
        let mut argmin = 0;
        for (i, &w) in weights.iter().enumerate() {
            if w < weights[argmin] {
                argmin = i;
            }
        }
        let mut probs = vec![0.0; dim];
        probs[argmin] = 1.0;
        LabeledState::new(&probs, res.clone())?.weighted()
    }

    /// Mixes a state toward the equilibrium of its own labels; the input
    /// always precedes the mixture.
    pub fn mix_toward_equilibrium(state: &LabeledState, t: f64) -> Result<LabeledState> {
        let res = state.reservoir().clone();
        let weights = res.weights(state.spectrum().dim())?;
        let z: f64 = weights.iter().sum();
        let probs: Vec<f64> = state
            .spectrum()
            .probs()
            .iter()
            .zip(&weights)
            .map(|(&p, &w)| (1.0 - t) * p + t * w / z)
            .collect();
        LabeledState::new(&probs, res)
    }
}

use rand_chacha::ChaCha8Rng;

/// Whether the harness compares faithfully or through a deliberately negated
/// comparator (the self-test mutation).
#[derive(Clone, Copy, PartialEq)]
enum ComparatorMode {
    Faithful,
    Negated,
}

struct Harness {
    rel: Relation,
    mode: ComparatorMode,
}

impl Harness {
    fn precedes(&self, a: &WeightedSpectrum, b: &WeightedSpectrum) -> Result<bool> {
        let v = self.rel.precedes(a, b)?;
        Ok(match self.mode {
            ComparatorMode::Faithful => v,
            ComparatorMode::Negated => !v,
        })
    }

    fn equivalent(&self, a: &WeightedSpectrum, b: &WeightedSpectrum) -> Result<bool> {
        Ok(self.precedes(a, b)? && self.precedes(b, a)?)
    }

    fn comparable(&self, a: &WeightedSpectrum, b: &WeightedSpectrum) -> Result<Comparability> {
        Ok(match (self.precedes(a, b)?, self.precedes(b, a)?) {
            (true, true) => Comparability::Equivalent,
            (true, false) => Comparability::ABeforeB,
            (false, true) => Comparability::BBeforeA,
            (false, false) => Comparability::Incomparable,
        })
    }
}

fn describe(ws: &WeightedSpectrum) -> String {
    let mut s = String::from("[");
    for (k, b) in ws.blocks().iter().enumerate() {
        if k > 0 {
            s.push_str(", ");
        }
        s.push_str(&format!("({:.6}, {:.6})", b.prob, b.weight));
    }
    s.push(']');
    s
}

/// Runs every axiom check for `cfg.trials` trials.
pub fn run_axiom_suite(cfg: &TrialConfig) -> Result<AxiomReport> {
    run_suite_with_mode(cfg, ComparatorMode::Faithful)
}

/// Self-test: runs the same suite against a negated comparator and returns
/// its report. A healthy harness must flag violations (reflexivity alone
/// fails every trial), so `report.total_violations() == 0` here would mean
/// the harness cannot detect a corrupted order at all.
pub fn run_corrupted_suite(cfg: &TrialConfig) -> Result<AxiomReport> {
    run_suite_with_mode(cfg, ComparatorMode::Negated)
}

fn run_suite_with_mode(cfg: &TrialConfig, mode: ComparatorMode) -> Result<AxiomReport> {
    cfg.validate()?;
    let mut report = AxiomReport::default();
    for trial in 0..cfg.trials {
        let mut rng = sampling::trial_rng(cfg.seed, trial as u64);
        let params = sampling::draw_params(&mut rng, cfg.tag, cfg.beta, cfg.mu, cfg.gamma);
        let harness = Harness {
            rel: Relation::new(sampling::bare_reservoir(cfg.tag, &params)),
            mode,
        };
        let even_trial = trial % 2 == 0;
        check_reflexivity(&mut rng, cfg, &params, &harness, &mut report.reflexivity)?;
        check_transitivity(&mut rng, cfg, &params, &harness, &mut report.transitivity)?;
        check_composition(&mut rng, cfg, &params, &harness, &mut report.consistent_composition)?;
        check_scaling(&mut rng, cfg, &params, &harness, &mut report.scaling_invariance)?;
        check_splitting(&mut rng, cfg, &params, &harness, &mut report.splitting_recombination)?;
        check_stability(&mut rng, cfg, &params, &harness, even_trial, &mut report.stability)?;
        check_comparison(&mut rng, cfg, &params, &harness, &mut report.comparison_completeness)?;
        check_bracketing(&mut rng, cfg, &params, &harness, &mut report.bracketing)?;
        check_cancellation(&mut rng, cfg, &params, &harness, &mut report.cancellation)?;
    }
    Ok(report)
}

fn draw_any(
    rng: &mut ChaCha8Rng,
    cfg: &TrialConfig,
    params: &sampling::Params,
) -> Result<WeightedSpectrum> {
    let dim = sampling::draw_dim(rng, cfg.dim_max);
    let res = sampling::draw_reservoir(rng, cfg.tag, dim, params);
    sampling::draw_state(rng, dim, &res)
}

/// Samples until `x` precedes the candidate, within the filter budget.
fn find_dominated_from(
    rng: &mut ChaCha8Rng,
    cfg: &TrialConfig,
    params: &sampling::Params,
    harness: &Harness,
    x: &WeightedSpectrum,
) -> Result<Option<WeightedSpectrum>> {
    for _ in 0..FILTER_TRIES {
        let y = draw_any(rng, cfg, params)?;
        if harness.precedes(x, &y)? {
            return Ok(Some(y));
        }
    }
    Ok(None)
}

fn find_ordered_pair(
    rng: &mut ChaCha8Rng,
    cfg: &TrialConfig,
    params: &sampling::Params,
    harness: &Harness,
) -> Result<Option<(WeightedSpectrum, WeightedSpectrum)>> {
    for _ in 0..FILTER_TRIES {
        let x = draw_any(rng, cfg, params)?;
        let y = draw_any(rng, cfg, params)?;
        if harness.precedes(&x, &y)? {
            return Ok(Some((x, y)));
        }
    }
    Ok(None)
}

fn check_reflexivity(
    rng: &mut ChaCha8Rng,
    cfg: &TrialConfig,
    params: &sampling::Params,
    harness: &Harness,
    stats: &mut CheckStats,
) -> Result<()> {
    let x = draw_any(rng, cfg, params)?;
    let ok = harness.precedes(&x, &x)?;
    stats.record(ok, || format!("x ~ x failed for x = {}", describe(&x)));
    Ok(())
}

fn check_transitivity(
    rng: &mut ChaCha8Rng,
    cfg: &TrialConfig,
    params: &sampling::Params,
    harness: &Harness,
    stats: &mut CheckStats,
) -> Result<()> {
    let x = draw_any(rng, cfg, params)?;
    let Some(y) = find_dominated_from(rng, cfg, params, harness, &x)? else {
        stats.vacuous += 1;
        return Ok(());
    };
    let Some(z) = find_dominated_from(rng, cfg, params, harness, &y)? else {
        stats.vacuous += 1;
        return Ok(());
    };
    let ok = harness.precedes(&x, &z)?;
    stats.record(ok, || {
        format!(
            "x -> y -> z but not x -> z: x = {}, z = {}",
            describe(&x),
            describe(&z)
        )
    });
    Ok(())
}

fn check_composition(
    rng: &mut ChaCha8Rng,
    cfg: &TrialConfig,
    params: &sampling::Params,
    harness: &Harness,
    stats: &mut CheckStats,
) -> Result<()> {
    let Some((x, y)) = find_ordered_pair(rng, cfg, params, harness)? else {
        stats.vacuous += 1;
        return Ok(());
    };
    let Some((x2, y2)) = find_ordered_pair(rng, cfg, params, harness)? else {
        stats.vacuous += 1;
        return Ok(());
    };
    let ok = harness.precedes(&x.compose(&x2), &y.compose(&y2))?;
    stats.record(ok, || {
        format!(
            "(x, x') -> (y, y') failed: x = {}, x' = {}",
            describe(&x),
            describe(&x2)
        )
    });
    Ok(())
}

fn check_scaling(
    rng: &mut ChaCha8Rng,
    cfg: &TrialConfig,
    params: &sampling::Params,
    harness: &Harness,
    stats: &mut CheckStats,
) -> Result<()> {
    // Real scaling factors on flat states.
    let dim_a = sampling::draw_dim(rng, cfg.dim_max);
    let res_a = sampling::draw_reservoir(rng, cfg.tag, dim_a, params);
    let (_, za) = sampling::draw_flat(rng, dim_a, &res_a)?;
    let dim_b = sampling::draw_dim(rng, cfg.dim_max);
    let res_b = sampling::draw_reservoir(rng, cfg.tag, dim_b, params);
    let (_, zb) = sampling::draw_flat(rng, dim_b, &res_b)?;
    let (z_small, z_big) = if za <= zb { (za, zb) } else { (zb, za) };
    let lam = sampling::uniform_in(rng, 0.05, 3.0);
    let scaled_small = scale_flat(z_small, lam)?;
    let scaled_big = scale_flat(z_big, lam)?;
    let ok_flat = harness.precedes(&scaled_small, &scaled_big)?;
    stats.record(ok_flat, || {
        format!("flat scaling broke order: z = ({z_small}, {z_big}), lambda = {lam}")
    });

    // Integer scaling on general comparable states.
    if let Some((x, y)) = find_ordered_pair(rng, cfg, params, harness)? {
        let n = 2 + sampling::index(rng, 2) as u32;
        let ok_int = harness.precedes(&x.scale_integer(n), &y.scale_integer(n))?;
        stats.record(ok_int, || {
            format!("integer scaling broke order at n = {n}: x = {}", describe(&x))
        });
    } else {
        stats.vacuous += 1;
    }
    Ok(())
}

fn check_splitting(
    rng: &mut ChaCha8Rng,
    cfg: &TrialConfig,
    params: &sampling::Params,
    harness: &Harness,
    stats: &mut CheckStats,
) -> Result<()> {
    let dim = sampling::draw_dim(rng, cfg.dim_max);
    let res = sampling::draw_reservoir(rng, cfg.tag, dim, params);
    let (flat, z) = sampling::draw_flat(rng, dim, &res)?;
    let lam = sampling::uniform_in(rng, 0.01, 0.99);
    let split = scale_flat(z, lam)?.compose(&scale_flat(z, 1.0 - lam)?);
    let ok = harness.equivalent(&split, &flat)?;
    stats.record(ok, || {
        format!("(lambda X, (1-lambda) X) !~ X for z = {z}, lambda = {lam}")
    });
    Ok(())
}

fn check_stability(
    rng: &mut ChaCha8Rng,
    cfg: &TrialConfig,
    params: &sampling::Params,
    harness: &Harness,
    constructed: bool,
    stats: &mut CheckStats,
) -> Result<()> {
    let x = draw_any(rng, cfg, params)?;
    let y = if constructed {
        // Mixture pairs keep the antecedent frequently true.
        let dim = sampling::draw_dim(rng, cfg.dim_max);
        let res = sampling::draw_reservoir(rng, cfg.tag, dim, params);
        let base = sampling::draw_labeled(rng, dim, &res)?;
        let t = sampling::uniform_in(rng, 0.1, 0.9);
        let mixed = sampling::mix_toward_equilibrium(&base, t)?;
        let x = base.weighted()?;
        let y = mixed.weighted()?;
        return stability_core(rng, cfg, params, harness, &x, &y, stats);
    } else {
        draw_any(rng, cfg, params)?
    };
    stability_core(rng, cfg, params, harness, &x, &y, stats)
}

fn stability_core(
    rng: &mut ChaCha8Rng,
    cfg: &TrialConfig,
    params: &sampling::Params,
    harness: &Harness,
    x: &WeightedSpectrum,
    y: &WeightedSpectrum,
    stats: &mut CheckStats,
) -> Result<()> {
    let dim0 = sampling::draw_dim(rng, cfg.dim_max);
    let res0 = sampling::draw_reservoir(rng, cfg.tag, dim0, params);
    let (_, za) = sampling::draw_flat(rng, dim0, &res0)?;
    let dim1 = sampling::draw_dim(rng, cfg.dim_max);
    let res1 = sampling::draw_reservoir(rng, cfg.tag, dim1, params);
    let (_, zb) = sampling::draw_flat(rng, dim1, &res1)?;
    let (z0, z1) = if za <= zb { (za, zb) } else { (zb, za) };
    let eps = *cfg.epsilon_ladder.last().expect("ladder validated nonempty");
    let lhs = x.compose(&scale_flat(z0, eps)?);
    let rhs = y.compose(&scale_flat(z1, eps)?);
    if !harness.precedes(&lhs, &rhs)? {
        stats.vacuous += 1;
        return Ok(());
    }
    let ok = harness.precedes(x, y)?;
    stats.record(ok, || {
        format!(
            "antecedent at eps = {eps} held but x !-> y: x = {}, y = {}",
            describe(x),
            describe(y)
        )
    });
    Ok(())
}

fn check_comparison(
    rng: &mut ChaCha8Rng,
    cfg: &TrialConfig,
    params: &sampling::Params,
    harness: &Harness,
    stats: &mut CheckStats,
) -> Result<()> {
    // Compositions of scaled flat states must always be comparable.
    let flat = |rng: &mut ChaCha8Rng| -> Result<f64> {
        let dim = sampling::draw_dim(rng, cfg.dim_max);
        let res = sampling::draw_reservoir(rng, cfg.tag, dim, params);
        Ok(sampling::draw_flat(rng, dim, &res)?.1)
    };
    let (z_rho, z_sigma, z_rho2, z_sigma2) =
        (flat(rng)?, flat(rng)?, flat(rng)?, flat(rng)?);
    let lam = sampling::uniform(rng);
    let m = sampling::uniform(rng);
    let a = scale_flat(z_rho, lam)?.compose(&scale_flat(z_sigma, 1.0 - lam)?);
    let b = scale_flat(z_rho2, m)?.compose(&scale_flat(z_sigma2, 1.0 - m)?);
    let ok = harness.comparable(&a, &b)? != Comparability::Incomparable;
    stats.record(ok, || {
        format!(
            "scaled flat compositions incomparable: ({z_rho}, {z_sigma}, {lam}) vs ({z_rho2}, {z_sigma2}, {m})"
        )
    });
    Ok(())
}

fn check_bracketing(
    rng: &mut ChaCha8Rng,
    cfg: &TrialConfig,
    params: &sampling::Params,
    harness: &Harness,
    stats: &mut CheckStats,
) -> Result<()> {
    let dim = sampling::draw_dim(rng, cfg.dim_max);
    let res = sampling::draw_reservoir(rng, cfg.tag, dim, params);
    let x = sampling::draw_state(rng, dim, &res)?;
    let bottom = sampling::pure_min_weight(dim, &res)?;
    let top = sampling::equilibrium(dim, &res)?;
    let ok = harness.precedes(&bottom, &x)? && harness.precedes(&x, &top)?;
    stats.record(ok, || {
        format!("bracketing failed for x = {}", describe(&x))
    });
    Ok(())
}

fn check_cancellation(
    rng: &mut ChaCha8Rng,
    cfg: &TrialConfig,
    params: &sampling::Params,
    harness: &Harness,
    stats: &mut CheckStats,
) -> Result<()> {
    for _ in 0..FILTER_TRIES {
        let x = draw_any(rng, cfg, params)?;
        let y = draw_any(rng, cfg, params)?;
        let dim = sampling::draw_dim(rng, cfg.dim_max);
        let res = sampling::draw_reservoir(rng, cfg.tag, dim, params);
        let (z, _) = sampling::draw_flat(rng, dim, &res)?;
        if harness.precedes(&x.compose(&z), &y.compose(&z))? {
            let ok = harness.precedes(&x, &y)?;
            stats.record(ok, || {
                format!(
                    "(x, z) -> (y, z) but x !-> y: x = {}, y = {}, z = {}",
                    describe(&x),
                    describe(&y),
                    describe(&z)
                )
            });
            return Ok(());
        }
    }
    stats.vacuous += 1;
    Ok(())
}

/// Checks the two scale-vs-order conditions on random pairs sharing one
/// gauge per trial: a strict scale gap forces convertibility, and
/// convertibility forces both scales monotone. The paired states may live on
/// any label space of the relation; only the gauge is common.
///
/// `gauge`: `None` uses the per-trial default for a sampled reservoir.
pub fn run_lemma1_suite(cfg: &TrialConfig, gauge: Option<Gauge>) -> Result<Lemma1Report> {
    cfg.validate()?;
    let mut report = Lemma1Report::default();
    for trial in 0..cfg.trials {
        let mut rng = sampling::trial_rng(cfg.seed, trial as u64);
        let params = sampling::draw_params(&mut rng, cfg.tag, cfg.beta, cfg.mu, cfg.gamma);
        let rel = Relation::new(sampling::bare_reservoir(cfg.tag, &params));
        // The gauge is fixed per trial; the states may live on any label
        // space of the same relation (different dimensions included).
        let gauge_dim = sampling::draw_dim(&mut rng, cfg.dim_max);
        let gauge_res = sampling::draw_reservoir(&mut rng, cfg.tag, gauge_dim, &params);
        let g = match gauge {
            Some(g) => g,
            None => Gauge::for_reservoir(&gauge_res, gauge_dim)?,
        };
        let draw = |rng: &mut ChaCha8Rng| -> Result<WeightedSpectrum> {
            let dim = sampling::draw_dim(rng, cfg.dim_max);
            let res = sampling::draw_reservoir(rng, cfg.tag, dim, &params);
            sampling::draw_state(rng, dim, &res)
        };

        // Sufficiency: filter on the closed forms (cheap), assert with the
        // searched values (the real thing).
        let mut found = None;
        for _ in 0..FILTER_TRIES {
            let x = draw(&mut rng)?;
            let y = draw(&mut rng)?;
            let upper_closed = g.upper_closed_form(x.support_weight());
            let lower_closed = g.lower_closed_form(y.max_ratio());
            if upper_closed < lower_closed - 1e-9 {
                found = Some((x, y));
                break;
            }
        }
        match found {
            Some((x, y)) => {
                let up_x = entropy_upper(&rel, &x, &g)?.lambda;
                let lo_y = entropy_lower(&rel, &y, &g)?.lambda;
                if up_x < lo_y - 1e-9 {
                    let ok = rel.precedes(&x, &y)?;
                    report.sufficiency.record(ok, || {
                        format!(
                            "scale gap without convertibility: x = {}, y = {}",
                            describe(&x),
                            describe(&y)
                        )
                    });
                } else {
                    report.sufficiency.vacuous += 1;
                }
            }
            None => report.sufficiency.vacuous += 1,
        }

        // Necessity: a convertible pair must have monotone scales.
        let mut pair = None;
        for _ in 0..FILTER_TRIES {
            let x = draw(&mut rng)?;
            let y = draw(&mut rng)?;
            if rel.precedes(&x, &y)? {
                pair = Some((x, y));
                break;
            }
        }
        match pair {
            Some((x, y)) => {
                let lo_x = entropy_lower(&rel, &x, &g)?.lambda;
                let lo_y = entropy_lower(&rel, &y, &g)?.lambda;
                let up_x = entropy_upper(&rel, &x, &g)?.lambda;
                let up_y = entropy_upper(&rel, &y, &g)?.lambda;
                let ok = lo_x <= lo_y + 1e-12 && up_x <= up_y + 1e-12;
                report.necessity.record(ok, || {
                    format!(
                        "monotonicity broke: lower ({lo_x}, {lo_y}), upper ({up_x}, {up_y})"
                    )
                });
            }
            None => report.necessity.vacuous += 1,
        }
    }
    Ok(report)
}
