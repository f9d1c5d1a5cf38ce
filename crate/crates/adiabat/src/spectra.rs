//! State spectra, reservoir rescalings, step-function blocks, and Lorenz curves.
//!
//! A state enters the crate as a sorted probability vector ([`Spectrum`]).
//! Pairing each probability `p_i` with a positive reservoir weight `g_i`
//! yields a [`WeightedSpectrum`], whose rescaled step function takes the value
//! `p_i / g_i` on a block of width `g_i`. Its running integral is the
//! [`LorenzCurve`]; every order relation in [`crate::orders`] is dominance of
//! one such curve over another.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{self, KahanSum};
use crate::orders::Tag;
use crate::{Error, Result, NORM_TOL, ZERO_EPS};

/// Sorted, normalized eigenvalue list of a state (descending).
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    probs: Vec<f64>,
}

impl Spectrum {
    /// Builds a spectrum from raw probabilities: entries must be nonnegative
    /// and sum to 1 within `1e-9`. The input is sorted descending and
    /// renormalized to unit sum. Trailing exact zeros are kept.
    pub fn from_probs(values: &[f64]) -> Result<Self> {
        for (index, &value) in values.iter().enumerate() {
            if value.is_nan() || value < 0.0 {
                return Err(Error::NegativeEntry { index, value });
            }
        }
        let mut sum = KahanSum::new();
        for &v in values {
            sum.add(v);
        }
        let sum = sum.value();
        if sum.is_nan() || math::abs(sum - 1.0) > NORM_TOL {
            return Err(Error::NotNormalized { sum });
        }
        let mut probs: Vec<f64> = values.iter().map(|&v| v / sum).collect();
        probs.sort_by(|a, b| b.partial_cmp(a).expect("probabilities are finite"));
        Ok(Self { probs })
    }

    /// Uniform spectrum on `dim` levels.
    pub fn uniform(dim: usize) -> Self {
        assert!(dim > 0, "uniform spectrum needs at least one level");
        Self {
            probs: vec![1.0 / dim as f64; dim],
        }
    }

    /// Pure state: all mass on one level, `dim - 1` trailing zeros.
    pub fn pure(dim: usize) -> Self {
        assert!(dim > 0, "pure state needs at least one level");
        let mut probs = vec![0.0; dim];
        probs[0] = 1.0;
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    /// Number of entries above the zero threshold.
    pub fn rank(&self) -> usize {
        self.probs.iter().filter(|&&p| p > ZERO_EPS).count()
    }

    /// Largest eigenvalue.
    pub fn p_max(&self) -> f64 {
        self.probs.first().copied().unwrap_or(0.0)
    }
}

/// Reservoir attached to a state: fixes the block weights of the rescaled
/// step function.
///
/// Label lists are positional: entry `i` annotates the `i`-th stored
/// probability of the spectrum (descending order). Callers that read states
/// from files sort probabilities and labels jointly before constructing both.
#[derive(Clone, Debug, PartialEq)]
pub enum Reservoir {
    /// No reservoir: unit weights, plain majorization.
    None,
    /// Heat bath at inverse temperature `beta`; weights `exp(-beta * E_i)`.
    Heat { beta: f64, k_b: f64, energies: Vec<f64> },
    /// Heat bath plus particle reservoir; weights `exp(-beta * (E_i - mu * N_i))`.
    HeatParticle {
        beta: f64,
        k_b: f64,
        mu: f64,
        energies: Vec<f64>,
        particles: Vec<u64>,
    },
    /// Angular-momentum reservoir; weights `exp(-gamma * J_i)` with the
    /// reduced Planck constant folded into `gamma * J_i` as a dimensionless
    /// exponent.
    AngularMomentum { gamma: f64, jz: Vec<f64> },
}

impl Reservoir {
    pub fn none() -> Self {
        Reservoir::None
    }

    pub fn heat(beta: f64, energies: Vec<f64>) -> Self {
        Reservoir::Heat {
            beta,
            k_b: 1.0,
            energies,
        }
    }

    pub fn heat_particle(beta: f64, mu: f64, energies: Vec<f64>, particles: Vec<u64>) -> Self {
        Reservoir::HeatParticle {
            beta,
            k_b: 1.0,
            mu,
            energies,
            particles,
        }
    }

    pub fn angular_momentum(gamma: f64, jz: Vec<f64>) -> Self {
        Reservoir::AngularMomentum { gamma, jz }
    }

    /// Overrides the Boltzmann constant (default 1). Only affects reported
    /// temperatures; every energy-unit quantity uses `k_B T = 1/beta`.
    pub fn with_k_b(mut self, value: f64) -> Self {
        match &mut self {
            Reservoir::Heat { k_b, .. } | Reservoir::HeatParticle { k_b, .. } => *k_b = value,
            _ => {}
        }
        self
    }

    pub fn tag(&self) -> Tag {
        match self {
            Reservoir::None => Tag::M,
            Reservoir::Heat { .. } => Tag::T,
            Reservoir::HeatParticle { .. } => Tag::Nt,
            Reservoir::AngularMomentum { .. } => Tag::J,
        }
    }

    /// Identifying parameters of the rescaling, used to detect mismatched
    /// comparisons. Unused parameters are zero.
    pub fn params(&self) -> RescalingParams {
        match self {
            Reservoir::None => RescalingParams {
                tag: Tag::M,
                beta: 0.0,
                mu: 0.0,
                gamma: 0.0,
            },
            Reservoir::Heat { beta, .. } => RescalingParams {
                tag: Tag::T,
                beta: *beta,
                mu: 0.0,
                gamma: 0.0,
            },
            Reservoir::HeatParticle { beta, mu, .. } => RescalingParams {
                tag: Tag::Nt,
                beta: *beta,
                mu: *mu,
                gamma: 0.0,
            },
            Reservoir::AngularMomentum { gamma, .. } => RescalingParams {
                tag: Tag::J,
                beta: 0.0,
                mu: 0.0,
                gamma: *gamma,
            },
        }
    }

    /// Inverse temperature, when the reservoir has one.
    pub fn beta(&self) -> Option<f64> {
        match self {
            Reservoir::Heat { beta, .. } | Reservoir::HeatParticle { beta, .. } => Some(*beta),
            _ => None,
        }
    }

    /// `k_B T = 1/beta`, the conversion factor from nats to energy units.
    pub fn kbt(&self) -> Option<f64> {
        self.beta().map(|b| 1.0 / b)
    }

    /// Temperature `T = 1/(k_B beta)`.
    pub fn temperature(&self) -> Option<f64> {
        match self {
            Reservoir::Heat { beta, k_b, .. } | Reservoir::HeatParticle { beta, k_b, .. } => {
                Some(1.0 / (k_b * beta))
            }
            _ => None,
        }
    }

    /// Block weights for a spectrum of dimension `dim`.
    pub fn weights(&self, dim: usize) -> Result<Vec<f64>> {
        let check = |len: usize| -> Result<()> {
            if len == dim {
                Ok(())
            } else {
                Err(Error::LengthMismatch {
                    expected: dim,
                    found: len,
                })
            }
        };
        let w = match self {
            Reservoir::None => vec![1.0; dim],
            Reservoir::Heat { beta, energies, .. } => {
                check(energies.len())?;
                energies.iter().map(|&e| clamp_weight(math::exp(-beta * e))).collect()
            }
            Reservoir::HeatParticle {
                beta,
                mu,
                energies,
                particles,
                ..
            } => {
                check(energies.len())?;
                check(particles.len())?;
                energies
                    .iter()
                    .zip(particles.iter())
                    .map(|(&e, &n)| clamp_weight(math::exp(-beta * (e - mu * n as f64))))
                    .collect()
            }
            Reservoir::AngularMomentum { gamma, jz } => {
                check(jz.len())?;
                jz.iter().map(|&j| clamp_weight(math::exp(-gamma * j))).collect()
            }
        };
        Ok(w)
    }
}

// Weights must stay strictly positive and finite; extreme exponents saturate.
fn clamp_weight(w: f64) -> f64 {
    w.clamp(f64::MIN_POSITIVE, f64::MAX)
}

/// Parameters identifying a rescaling; two weighted spectra are comparable
/// only when these agree exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RescalingParams {
    pub tag: Tag,
    pub beta: f64,
    pub mu: f64,
    pub gamma: f64,
}

/// Where a weighted spectrum's weights came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Provenance {
    /// Flat reference built by [`scale_flat`]: comparable under any relation.
    Universal,
    /// Built from a reservoir with these parameters.
    Tagged(RescalingParams),
    /// Composition of spectra with conflicting parameters; never comparable.
    Mixed,
}

/// One block of a rescaled step function: probability mass `prob` spread over
/// width `weight`, so the function value (block height) is `prob / weight`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Block {
    pub prob: f64,
    pub weight: f64,
}

impl Block {
    pub fn ratio(&self) -> f64 {
        self.prob / self.weight
    }
}

/// A spectrum paired with positive reservoir weights, stored as blocks sorted
/// by `prob/weight` descending (ties broken by larger weight first).
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSpectrum {
    blocks: Vec<Block>,
    provenance: Provenance,
    abstract_dim: bool,
}

impl WeightedSpectrum {
    fn from_blocks(mut blocks: Vec<Block>, provenance: Provenance, abstract_dim: bool) -> Self {
        blocks.sort_by(|a, b| {
            b.ratio()
                .partial_cmp(&a.ratio())
                .expect("block ratios are finite")
                .then(b.weight.partial_cmp(&a.weight).expect("weights are finite"))
        });
        Self {
            blocks,
            provenance,
            abstract_dim,
        }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.len()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// True when this function was produced by a non-integer flat scaling and
    /// its width need not be an achievable physical dimension. Such functions
    /// are only ever compared at the curve level.
    pub fn is_abstract(&self) -> bool {
        self.abstract_dim
    }

    /// Sum of weights over blocks with probability above the zero threshold.
    /// Generalizes rank (unit weights) and the support partition function.
    pub fn support_weight(&self) -> f64 {
        let mut sum = KahanSum::new();
        for b in &self.blocks {
            if b.prob > ZERO_EPS {
                sum.add(b.weight);
            }
        }
        sum.value()
    }

    /// Total width of the step function, occupied or not.
    pub fn total_weight(&self) -> f64 {
        let mut sum = KahanSum::new();
        for b in &self.blocks {
            sum.add(b.weight);
        }
        sum.value()
    }

    /// Largest rescaled eigenvalue `max_i p_i / g_i`.
    pub fn max_ratio(&self) -> f64 {
        self.blocks.first().map(Block::ratio).unwrap_or(0.0)
    }

    /// True when all occupied blocks share one ratio within `tol` (relative).
    pub fn is_flat(&self, tol: f64) -> bool {
        self.ratio_spread() <= tol * self.max_ratio()
    }

    /// Absolute spread between the largest and smallest occupied ratio.
    pub fn ratio_spread(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0_f64;
        for b in &self.blocks {
            if b.prob > ZERO_EPS {
                let r = b.ratio();
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        if hi == 0.0 {
            0.0
        } else {
            hi - lo
        }
    }

    /// Tensor composition: all pairwise products `(p_i p'_j, g_i g'_j)`.
    pub fn compose(&self, other: &WeightedSpectrum) -> WeightedSpectrum {
        let mut blocks = Vec::with_capacity(self.blocks.len() * other.blocks.len());
        for a in &self.blocks {
            for b in &other.blocks {
                blocks.push(Block {
                    prob: a.prob * b.prob,
                    weight: a.weight * b.weight,
                });
            }
        }
        let provenance = match (self.provenance, other.provenance) {
            (Provenance::Universal, p) | (p, Provenance::Universal) => p,
            (Provenance::Tagged(a), Provenance::Tagged(b)) if a == b => Provenance::Tagged(a),
            _ => Provenance::Mixed,
        };
        WeightedSpectrum::from_blocks(blocks, provenance, self.abstract_dim || other.abstract_dim)
    }

    /// `n`-fold self-composition, `n >= 1`.
    pub fn scale_integer(&self, n: u32) -> WeightedSpectrum {
        assert!(n >= 1, "integer scaling needs n >= 1");
        let mut out = self.clone();
        for _ in 1..n {
            out = out.compose(self);
        }
        out
    }

    /// Running integral of the step function.
    pub fn lorenz(&self) -> LorenzCurve {
        let mut xs = Vec::with_capacity(self.blocks.len() + 1);
        let mut ys = Vec::with_capacity(self.blocks.len() + 1);
        let mut slopes = Vec::with_capacity(self.blocks.len());
        let mut x = KahanSum::new();
        let mut y = KahanSum::new();
        xs.push(0.0);
        ys.push(0.0);
        for b in &self.blocks {
            x.add(b.weight);
            y.add(b.prob);
            xs.push(x.value());
            ys.push(y.value());
            slopes.push(b.ratio());
        }
        // Probabilities sum to 1 by invariant; pin the accumulated ordinates
        // to end at exactly 1.0 so curves with different block counts stay
        // comparable without slack at the terminal breakpoint.
        let total = *ys.last().expect("at least the origin");
        if total > 0.0 && total != 1.0 {
            let inv = 1.0 / total;
            for v in ys.iter_mut() {
                *v *= inv;
            }
            for s in slopes.iter_mut() {
                *s *= inv;
            }
        }
        LorenzCurve { xs, ys, slopes }
    }
}

/// A probability vector and its reservoir labels, sorted jointly so that the
/// positional pairing survives the spectrum's descending storage order.
///
/// This is the constructor to use for raw file or sampler data, where
/// probabilities arrive in label order rather than sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledState {
    spectrum: Spectrum,
    reservoir: Reservoir,
}

impl LabeledState {
    pub fn new(probs: &[f64], reservoir: Reservoir) -> Result<Self> {
        // Validate label lengths against the raw input before permuting.
        reservoir.weights(probs.len())?;
        let mut order: Vec<usize> = (0..probs.len()).collect();
        order.sort_by(|&i, &j| {
            probs[j]
                .partial_cmp(&probs[i])
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(i.cmp(&j))
        });
        let sorted: Vec<f64> = order.iter().map(|&i| probs[i]).collect();
        let spectrum = Spectrum::from_probs(&sorted)?;
        let permute = |v: &[f64]| -> Vec<f64> { order.iter().map(|&i| v[i]).collect() };
        let reservoir = match reservoir {
            Reservoir::None => Reservoir::None,
            Reservoir::Heat { beta, k_b, energies } => Reservoir::Heat {
                beta,
                k_b,
                energies: permute(&energies),
            },
            Reservoir::HeatParticle {
                beta,
                k_b,
                mu,
                energies,
                particles,
            } => Reservoir::HeatParticle {
                beta,
                k_b,
                mu,
                energies: permute(&energies),
                particles: order.iter().map(|&i| particles[i]).collect(),
            },
            Reservoir::AngularMomentum { gamma, jz } => Reservoir::AngularMomentum {
                gamma,
                jz: permute(&jz),
            },
        };
        Ok(Self { spectrum, reservoir })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn reservoir(&self) -> &Reservoir {
        &self.reservoir
    }

    pub fn weighted(&self) -> Result<WeightedSpectrum> {
        weighted(&self.spectrum, &self.reservoir)
    }
}

/// Rescales a spectrum by a reservoir's weights. Labels in `res` are
/// positional with the stored (descending) probability order of `spec`.
pub fn weighted(spec: &Spectrum, res: &Reservoir) -> Result<WeightedSpectrum> {
    let weights = res.weights(spec.dim())?;
    let blocks = spec
        .probs()
        .iter()
        .zip(weights)
        .map(|(&prob, weight)| Block { prob, weight })
        .collect();
    Ok(WeightedSpectrum::from_blocks(
        blocks,
        Provenance::Tagged(res.params()),
        false,
    ))
}

/// Flat step function of support weight `base` scaled by a real factor `lam`:
/// a single block of width `base^lam` (height `base^-lam`). Integer `lam`
/// matches `scale_integer` of the flat state; non-integer `lam` is marked
/// abstract and is only compared at the curve level.
pub fn scale_flat(base: f64, lam: f64) -> Result<WeightedSpectrum> {
    if base.is_nan() || base <= 0.0 {
        return Err(Error::NonpositiveBase { base });
    }
    let width = clamp_weight(math::powf(base, lam));
    let is_integer = lam == math::round(lam);
    Ok(WeightedSpectrum::from_blocks(
        vec![Block {
            prob: 1.0,
            weight: width,
        }],
        Provenance::Universal,
        !is_integer,
    ))
}

/// Piecewise-linear concave curve from `(0, 0)` to `(total weight, 1)`:
/// the integral of a rescaled step function up to `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct LorenzCurve {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl LorenzCurve {
    /// Breakpoints `(cumulative weight, cumulative probability)`.
    pub fn breakpoints(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    pub fn total_weight(&self) -> f64 {
        *self.xs.last().expect("curve has at least the origin")
    }

    pub fn terminal(&self) -> f64 {
        *self.ys.last().expect("curve has at least the origin")
    }

    /// Value of the curve at `k`; constant beyond the last breakpoint.
    pub fn eval(&self, k: f64) -> f64 {
        if k <= 0.0 {
            return 0.0;
        }
        let n = self.xs.len();
        if k >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        // Index of the segment containing k.
        let mut lo = 0;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.xs[mid] <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.ys[lo] + (k - self.xs[lo]) * self.slopes[lo]
    }

    /// True when `self` lies on or above `other` at every breakpoint of
    /// either curve, within absolute slack `tol` on cumulative probabilities.
    /// Both curves are concave piecewise linear, so the union of breakpoints
    /// decides dominance everywhere.
    pub(crate) fn dominates_with_tol(&self, other: &LorenzCurve, tol: f64) -> bool {
        self.first_violation(other, tol).is_none()
    }

    /// Index (into the merged breakpoint list) of the first dominance
    /// violation, if any.
    pub(crate) fn first_violation(&self, other: &LorenzCurve, tol: f64) -> Option<usize> {
        let mut i = 1; // skip the shared origin
        let mut j = 1;
        let mut idx = 0;
        loop {
            let k = match (self.xs.get(i), other.xs.get(j)) {
                (Some(&a), Some(&b)) => {
                    if a <= b {
                        i += 1;
                        a
                    } else {
                        j += 1;
                        b
                    }
                }
                (Some(&a), None) => {
                    i += 1;
                    a
                }
                (None, Some(&b)) => {
                    j += 1;
                    b
                }
                (None, None) => return None,
            };
            idx += 1;
            if self.eval(k) < other.eval(k) - tol {
                return Some(idx);
            }
        }
    }
}
