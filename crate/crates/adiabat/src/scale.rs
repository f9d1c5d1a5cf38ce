//! Entropy scales derived from an order relation and a gauge pair.
//!
//! A [`Gauge`] is a pair of flat reference states with support weights
//! `z0 < z1`. For a state `x`, [`entropy_lower`] finds the supremum of λ such
//! that the flat composition `((1-λ)·X0, λ·X1)` precedes `x`, and
//! [`entropy_upper`] the infimum of λ such that `x` precedes it. Both are
//! located by bisection of the generic curve comparison — deliberately not by
//! the closed forms, so that the agreement between the two routes is a real
//! check and not a tautology. The closed forms ride along in every
//! [`LambdaResult`]:
//!
//! - lower: `slope · log(1 / max_ratio) + offset` — the min-entropy family,
//! - upper: `slope · log(support_weight) + offset` — the max-entropy family.
//!
//! λ may leave `[0, 1]`: the composed reference stays a flat function of
//! width `z0^(1-λ) · z1^λ` for any real λ, which is exactly the standard
//! rewriting of the defining conditions in terms of positively-scaled
//! references moved across the relation.

use alloc::string::String;

use crate::math;
use crate::orders::{Relation, Tag};
use crate::spectra::{scale_flat, Provenance, Reservoir, WeightedSpectrum};
use crate::{Error, Result, ZERO_EPS};

/// λ-search bracket; covers every state of dimension ≤ 64 at gauge (1, 2).
const LAMBDA_BRACKET: (f64, f64) = (-64.0, 64.0);
/// Bisection stops when the bracket is this narrow.
const LAMBDA_TOL: f64 = 1e-12;
const MAX_ITERATIONS: u32 = 200;
/// Required agreement between the λ-search and the closed form.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Relative flatness tolerance for equilibrium-only operations.
const FLAT_TOL: f64 = 1e-9;

/// Logarithm base fixing the units of a gauge's entropy scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogBase {
    /// Bits; the natural choice for unit weights.
    Log2,
    /// Nats; the natural choice for reservoir weights.
    Ln,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Log2 => math::log2(x),
            LogBase::Ln => math::ln(x),
        }
    }

    /// ln of the base itself: converts `log_base` differences back to nats.
    fn ln_of_base(self) -> f64 {
        match self {
            LogBase::Log2 => core::f64::consts::LN_2,
            LogBase::Ln => 1.0,
        }
    }
}

/// Pair of flat reference states (support weights `z0 < z1`) plus a log base.
/// Changing the gauge moves every reported entropy by an affine map with
/// positive slope and nothing else.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gauge {
    z0: f64,
    z1: f64,
    base: LogBase,
}

impl Gauge {
    pub fn new(z0: f64, z1: f64, base: LogBase) -> Result<Self> {
        if !(z0 > 0.0 && z1 > z0) {
            return Err(Error::GaugeDegenerate { z0, z1 });
        }
        Ok(Self { z0, z1, base })
    }

    /// The gauge (1, 2, bits): the lower/upper scales equal the min- and
    /// max-entropy exactly.
    pub fn standard() -> Self {
        Self {
            z0: 1.0,
            z1: 2.0,
            base: LogBase::Log2,
        }
    }

    /// Default gauge for a reservoir and the labeled space of one state:
    /// `z0` is the smallest single-level weight, `z1` the full partition
    /// function, base natural log. Fails with one level only (z0 = z1).
    pub fn for_reservoir(res: &Reservoir, dim: usize) -> Result<Self> {
        if matches!(res, Reservoir::None) {
            return Ok(Self::standard());
        }
        let weights = res.weights(dim)?;
        let mut min_w = f64::INFINITY;
        let mut total = 0.0;
        for &w in &weights {
            min_w = min_w.min(w);
            total += w;
        }
        Self::new(min_w, total, LogBase::Ln)
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn z1(&self) -> f64 {
        self.z1
    }

    pub fn base(&self) -> LogBase {
        self.base
    }

    /// Affine slope `1 / log(z1/z0)`.
    pub fn slope(&self) -> f64 {
        1.0 / self.base.log(self.z1 / self.z0)
    }

    /// Affine offset `-slope · log(z0)`.
    pub fn offset(&self) -> f64 {
        -self.slope() * self.base.log(self.z0)
    }

    /// Closed-form lower scale from the largest rescaled eigenvalue.
    pub fn lower_closed_form(&self, max_ratio: f64) -> f64 {
        self.slope() * self.base.log(1.0 / max_ratio) + self.offset()
    }

    /// Closed-form upper scale from the support weight.
    pub fn upper_closed_form(&self, support_weight: f64) -> f64 {
        self.slope() * self.base.log(support_weight) + self.offset()
    }

    /// Inverts the affine map: natural log of the quantity a λ value stands
    /// for (`ln u` where `λ = slope·log(u) + offset`).
    pub fn ln_from_lambda(&self, lambda: f64) -> f64 {
        (lambda - self.offset()) / self.slope() * self.base.ln_of_base()
    }

    /// The composed reference `((1-λ)·X0, λ·X1)`: a flat function of width
    /// `z0^(1-λ) · z1^λ`, for any real λ.
    pub fn reference(&self, lambda: f64) -> WeightedSpectrum {
        let a = scale_flat(self.z0, 1.0 - lambda).expect("z0 > 0 by construction");
        let b = scale_flat(self.z1, lambda).expect("z1 > 0 by construction");
        a.compose(&b)
    }
}

/// Outcome of one λ-search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaResult {
    /// Midpoint of the final bisection bracket.
    pub lambda: f64,
    /// The matching closed form.
    pub closed_form: f64,
    pub iterations: u32,
    /// `|lambda - closed_form|`.
    pub residual: f64,
}

impl LambdaResult {
    fn new(lambda: f64, closed_form: f64, iterations: u32) -> Self {
        Self {
            lambda,
            closed_form,
            iterations,
            residual: math::abs(lambda - closed_form),
        }
    }
}

fn check_relation_state(rel: &Relation, x: &WeightedSpectrum) -> Result<()> {
    match x.provenance() {
        Provenance::Universal => Ok(()),
        Provenance::Tagged(p) if p == rel.reservoir().params() => Ok(()),
        _ => Err(Error::WeightMismatch),
    }
}

/// Supremum of λ with `((1-λ)·X0, λ·X1) ≺ x`, by bisection of the generic
/// curve comparison. Equals the min-entropy family in closed form.
pub fn entropy_lower(rel: &Relation, x: &WeightedSpectrum, g: &Gauge) -> Result<LambdaResult> {
    check_relation_state(rel, x)?;
    let xc = x.lorenz();
    // Reference precedes x iff its height >= x's largest ratio; the height
    // falls as λ grows, so the predicate is monotone true -> false.
    let pred = |lam: f64| g.reference(lam).lorenz().dominates_with_tol(&xc, 0.0);
    let (lambda, iterations) = bisect_boundary(pred, true)?;
    Ok(LambdaResult::new(
        lambda,
        g.lower_closed_form(x.max_ratio()),
        iterations,
    ))
}

/// Infimum of λ with `x ≺ ((1-λ)·X0, λ·X1)`. Equals the max-entropy family
/// in closed form.
pub fn entropy_upper(rel: &Relation, x: &WeightedSpectrum, g: &Gauge) -> Result<LambdaResult> {
    check_relation_state(rel, x)?;
    let xc = x.lorenz();
    // x precedes the reference iff the reference is at least as wide as x's
    // support; the width grows with λ, so the predicate is false -> true.
    let pred = |lam: f64| xc.dominates_with_tol(&g.reference(lam).lorenz(), 0.0);
    let (lambda, iterations) = bisect_boundary(pred, false)?;
    Ok(LambdaResult::new(
        lambda,
        g.upper_closed_form(x.support_weight()),
        iterations,
    ))
}

/// The unique scale value of a flat state: the λ at which the composed
/// reference is equivalent to `x`. Demands lower and upper searches agree.
pub fn entropy_flat(rel: &Relation, x: &WeightedSpectrum, g: &Gauge) -> Result<LambdaResult> {
    if !x.is_flat(FLAT_TOL) {
        return Err(Error::NotFlat {
            ratio_spread: x.ratio_spread(),
        });
    }
    let lo = entropy_lower(rel, x, g)?;
    let hi = entropy_upper(rel, x, g)?;
    let lambda = 0.5 * (lo.lambda + hi.lambda);
    let closed = g.upper_closed_form(x.support_weight());
    Ok(LambdaResult {
        lambda,
        closed_form: closed,
        iterations: lo.iterations + hi.iterations,
        residual: math::abs(lambda - closed).max(math::abs(lo.lambda - hi.lambda)),
    })
}

/// Supremum of the entropy of *physical* flat states (integer rank) that
/// precede `x`: `log2 floor(1/p_max)` bits. Plain majorization only.
pub fn entropy_lower_integer(x: &WeightedSpectrum) -> Result<f64> {
    require_unit_weights(x)?;
    let best_rank = math::floor(1.0 / x.max_ratio() + 1e-9);
    Ok(math::log2(best_rank))
}

/// Infimum of the entropy of physical flat states that `x` precedes:
/// `log2 rank` bits, which is exactly the max-entropy.
pub fn entropy_upper_integer(x: &WeightedSpectrum) -> Result<f64> {
    require_unit_weights(x)?;
    let rank = x.blocks().iter().filter(|b| b.prob > ZERO_EPS).count();
    Ok(math::log2(rank as f64))
}

fn require_unit_weights(x: &WeightedSpectrum) -> Result<()> {
    match x.provenance() {
        Provenance::Tagged(p) if p.tag == Tag::M => Ok(()),
        Provenance::Universal if x.blocks().iter().all(|b| b.weight == 1.0) => Ok(()),
        _ => Err(Error::WeightMismatch),
    }
}

/// Bisection for the boundary of a monotone predicate over the λ bracket.
/// `sup_side = true` searches sup{λ : pred} (pred true below the boundary);
/// `false` searches inf{λ : pred} (pred true above).
fn bisect_boundary<F: FnMut(f64) -> bool>(mut pred: F, sup_side: bool) -> Result<(f64, u32)> {
    let (mut lo, mut hi) = LAMBDA_BRACKET;
    let lo_ok = pred(lo);
    let hi_ok = pred(hi);
    let expected = if sup_side { (true, false) } else { (false, true) };
    if (lo_ok, hi_ok) != expected {
        return Err(Error::BracketExceeded { lo, hi });
    }
    let mut iterations = 0;
    while hi - lo > LAMBDA_TOL && iterations < MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let ok = pred(mid);
        iterations += 1;
        // For sup-side searches the true region touches lo; for inf-side it
        // touches hi. Either way the invariant is kept.
        if ok == sup_side {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi), iterations))
}

/// Affine image of the λ scales in energy units, for heat-bath relations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyScaleMap {
    /// `k_B T ln p_max^res` recovered from the lower λ. The lower scale maps
    /// to the *upper* free energy: the free energy falls, not rises, along
    /// the order.
    pub f_max: f64,
    /// `-k_B T ln Z_rho` recovered from the upper λ.
    pub f_min: f64,
}

/// Both λ-searches plus their closed forms, the flat-state scale when
/// applicable, and the energy-unit image for heat-bath relations.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub lower: LambdaResult,
    pub upper: LambdaResult,
    pub flat: Option<LambdaResult>,
    pub energy_map: Option<EnergyScaleMap>,
    pub max_residual: f64,
    /// True when every residual is within `1e-9`.
    pub pass: bool,
}

/// Runs both searches on `x` and checks them against the closed forms.
pub fn verify_identities(rel: &Relation, x: &WeightedSpectrum, g: &Gauge) -> Result<IdentityReport> {
    let lower = entropy_lower(rel, x, g)?;
    let upper = entropy_upper(rel, x, g)?;
    let flat = if x.is_flat(FLAT_TOL) {
        Some(entropy_flat(rel, x, g)?)
    } else {
        None
    };
    let energy_map = rel.reservoir().kbt().map(|kbt| EnergyScaleMap {
        f_max: -kbt * g.ln_from_lambda(lower.lambda),
        f_min: -kbt * g.ln_from_lambda(upper.lambda),
    });
    let mut max_residual = lower.residual.max(upper.residual);
    if let Some(f) = &flat {
        max_residual = max_residual.max(f.residual);
    }
    Ok(IdentityReport {
        lower,
        upper,
        flat,
        energy_map,
        max_residual,
        pass: max_residual <= IDENTITY_TOL,
    })
}

/// Batch verification over seeded random states; drives the `verify` CLI.
#[derive(Clone, Debug)]
pub struct BatchConfig {
    pub tag: Tag,
    pub trials: u32,
    pub seed: u64,
    pub dim_max: usize,
    pub beta: Option<f64>,
    pub mu: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct BatchReport {
    pub trials: u32,
    pub max_residual: f64,
    pub failures: u32,
    pub worst_case: Option<String>,
    pub pass: bool,
}

/// Draws `trials` random states for the tag, runs [`verify_identities`] on
/// each with the default gauge, and reports the worst residual.
pub fn verify_batch(cfg: &BatchConfig) -> Result<BatchReport> {
    use crate::axioms::sampling;

    if cfg.trials == 0 {
        return Err(Error::InvalidConfig("trials must be >= 1"));
    }
    if cfg.dim_max < 2 {
        return Err(Error::InvalidConfig("dim_max must be >= 2"));
    }
    let mut max_residual = 0.0_f64;
    let mut failures = 0;
    let mut worst_case = None;
    for trial in 0..cfg.trials {
        let mut rng = sampling::trial_rng(cfg.seed, trial as u64);
        let params = sampling::draw_params(&mut rng, cfg.tag, cfg.beta, cfg.mu, cfg.gamma);
        let dim = sampling::draw_dim(&mut rng, cfg.dim_max);
        let res = sampling::draw_reservoir(&mut rng, cfg.tag, dim, &params);
        let state = sampling::draw_state(&mut rng, dim, &res)?;
        let rel = Relation::new(sampling::bare_reservoir(cfg.tag, &params));
        let gauge = Gauge::for_reservoir(&res, dim)?;
        let report = verify_identities(&rel, &state, &gauge)?;
        if report.max_residual > max_residual {
            max_residual = report.max_residual;
            worst_case = Some(format!(
                "trial {trial}: dim {dim}, residual {:.3e}",
                report.max_residual
            ));
        }
        if !report.pass {
            failures += 1;
        }
    }
    Ok(BatchReport {
        trials: cfg.trials,
        max_residual,
        failures,
        worst_case,
        pass: failures == 0,
    })
}
