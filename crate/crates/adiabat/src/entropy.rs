//! Closed-form entropy and free-energy functionals.
//!
//! Unit conventions: the Rényi/von Neumann family is reported in bits
//! (base-2 logs); the reservoir potentials are energy-unit quantities built
//! from natural logs scaled by `k_B T = 1/beta`.

use alloc::vec::Vec;

use crate::math;
use crate::spectra::{Reservoir, Spectrum};
use crate::{Error, Result, ZERO_EPS};

/// Shannon/von Neumann entropy in bits; `0 log 0 := 0`.
pub fn von_neumann(s: &Spectrum) -> f64 {
    let mut acc = 0.0;
    for &p in s.probs() {
        if p > ZERO_EPS {
            acc -= p * math::log2(p);
        }
    }
    acc
}

/// Rényi entropy of order `alpha` in bits.
///
/// - `alpha = 0` → log₂ rank (max-entropy),
/// - `alpha = 1` → von Neumann,
/// - `alpha = ∞` → −log₂ p_max (min-entropy),
/// - otherwise `log₂(Σ p_i^alpha) / (1 - alpha)`.
pub fn renyi(s: &Spectrum, alpha: f64) -> f64 {
    assert!(alpha >= 0.0, "Rényi order must be nonnegative");
    if alpha == 0.0 {
        return math::log2(s.rank() as f64);
    }
    if alpha.is_infinite() {
        return -math::log2(s.p_max());
    }
    if alpha == 1.0 {
        return von_neumann(s);
    }
    let mut acc = 0.0;
    for &p in s.probs() {
        if p > ZERO_EPS {
            acc += math::powf(p, alpha);
        }
    }
    math::log2(acc) / (1.0 - alpha)
}

/// Min-entropy in bits: `-log2 p_max`.
pub fn h_min(s: &Spectrum) -> f64 {
    renyi(s, f64::INFINITY)
}

/// Max-entropy in bits: `log2 rank`.
pub fn h_max(s: &Spectrum) -> f64 {
    renyi(s, 0.0)
}

/// One-shot free energies for a state labeled by energies (heat reservoir).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FreeEnergies {
    /// `-k_B T ln Z_rho`, with `Z_rho` the partition function restricted to
    /// the occupied levels. Collapses to the full free energy on equilibrium.
    pub f_min: f64,
    /// `k_B T ln p_max^res`, with `p_max^res = max_i p_i e^{beta E_i}`.
    pub f_max: f64,
    /// Reference value `F = U - T S` with `U = Σ p_i E_i` and
    /// `S = k_B ln2 · H`.
    pub f: f64,
}

/// Computes `(f_min, f_max, f)` for a heat reservoir. Labels are positional
/// with the spectrum's stored order.
pub fn free_energies(s: &Spectrum, res: &Reservoir) -> Result<FreeEnergies> {
    let Reservoir::Heat { beta, energies, .. } = res else {
        return Err(Error::MissingLabels);
    };
    let weights = res.weights(s.dim())?;
    let kbt = 1.0 / beta;
    let (max_ratio, support_z) = rescaled_extrema(s.probs(), &weights);
    let u: f64 = s.probs().iter().zip(energies).map(|(&p, &e)| p * e).sum();
    let h_nats = von_neumann(s) * core::f64::consts::LN_2;
    Ok(FreeEnergies {
        f_min: -kbt * math::ln(support_z),
        f_max: kbt * math::ln(max_ratio),
        f: u - kbt * h_nats,
    })
}

/// One-shot grand potentials for a heat-plus-particle reservoir.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrandPotential {
    /// `-k_B T ln 𝒵_rho` over the occupied levels.
    pub omega_min: f64,
    /// `k_B T ln p_max^res` with weights `e^{-beta (E - mu N)}`.
    pub omega_max: f64,
    /// Reference value `Ω = U - T S - mu ⟨N⟩`.
    pub omega: f64,
}

pub fn grand_potential(s: &Spectrum, res: &Reservoir) -> Result<GrandPotential> {
    let Reservoir::HeatParticle {
        beta,
        mu,
        energies,
        particles,
        ..
    } = res
    else {
        return Err(Error::MissingLabels);
    };
    let weights = res.weights(s.dim())?;
    let kbt = 1.0 / beta;
    let (max_ratio, support_z) = rescaled_extrema(s.probs(), &weights);
    let u_eff: f64 = s
        .probs()
        .iter()
        .zip(energies.iter().zip(particles))
        .map(|(&p, (&e, &n))| p * (e - mu * n as f64))
        .sum();
    let h_nats = von_neumann(s) * core::f64::consts::LN_2;
    Ok(GrandPotential {
        omega_min: -kbt * math::ln(support_z),
        omega_max: kbt * math::ln(max_ratio),
        omega: u_eff - kbt * h_nats,
    })
}

/// Angular-momentum potentials, reported raw in nats (the affine gauge is
/// applied by [`crate::scale`], not here).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JPotential {
    /// `ln(1 / p_max^res)` with weights `e^{-gamma J}`.
    pub lower: f64,
    /// `ln Z_J` over the occupied levels.
    pub upper: f64,
    /// Reference value `H_nats - gamma ⟨J⟩`; equals `ln Z_J` on equilibrium.
    pub reference: f64,
}

pub fn j_potential(s: &Spectrum, res: &Reservoir) -> Result<JPotential> {
    let Reservoir::AngularMomentum { gamma, jz } = res else {
        return Err(Error::MissingLabels);
    };
    let weights = res.weights(s.dim())?;
    let (max_ratio, support_z) = rescaled_extrema(s.probs(), &weights);
    let j_mean: f64 = s.probs().iter().zip(jz).map(|(&p, &j)| p * j).sum();
    let h_nats = von_neumann(s) * core::f64::consts::LN_2;
    Ok(JPotential {
        lower: -math::ln(max_ratio),
        upper: math::ln(support_z),
        reference: h_nats - gamma * j_mean,
    })
}

fn rescaled_extrema(probs: &[f64], weights: &[f64]) -> (f64, f64) {
    let mut max_ratio = 0.0_f64;
    let mut support = 0.0_f64;
    for (&p, &g) in probs.iter().zip(weights) {
        max_ratio = max_ratio.max(p / g);
        if p > ZERO_EPS {
            support += g;
        }
    }
    (max_ratio, support)
}

/// Everything the `entropy` CLI subcommand reports about one state.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyReport {
    pub h: f64,
    pub h_min: f64,
    pub h_max: f64,
    /// `(alpha, H_alpha)` pairs in the order requested.
    pub renyi: Vec<(f64, f64)>,
    pub free: Option<FreeEnergies>,
    pub grand: Option<GrandPotential>,
    pub j: Option<JPotential>,
}

/// Assembles the full report; the reservoir kind decides which potential
/// block is present.
pub fn report(s: &Spectrum, res: &Reservoir, alphas: &[f64]) -> Result<EntropyReport> {
    let renyi_vals = alphas.iter().map(|&a| (a, renyi(s, a))).collect();
    let mut rep = EntropyReport {
        h: von_neumann(s),
        h_min: h_min(s),
        h_max: h_max(s),
        renyi: renyi_vals,
        free: None,
        grand: None,
        j: None,
    };
    match res {
        Reservoir::None => {}
        Reservoir::Heat { .. } => rep.free = Some(free_energies(s, res)?),
        Reservoir::HeatParticle { .. } => rep.grand = Some(grand_potential(s, res)?),
        Reservoir::AngularMomentum { .. } => rep.j = Some(j_potential(s, res)?),
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::LabeledState;
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn spectrum(probs: &[f64]) -> Spectrum {
        Spectrum::from_probs(probs).unwrap()
    }

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn von_neumann_frozen_values() {
        assert_eq!(von_neumann(&spectrum(&[0.5, 0.5])), 1.0);
        assert_eq!(von_neumann(&spectrum(&[1.0])), 0.0);
        assert!(approx(von_neumann(&spectrum(&[0.75, 0.25])), 0.8112781244591328, 1e-15));
    }

    #[test]
    fn renyi_flat_spectrum_is_order_independent() {
        let s = spectrum(&[0.5, 0.5]);
        for alpha in [0.0, 0.5, 1.0, 2.0, f64::INFINITY] {
            assert!(approx(renyi(&s, alpha), 1.0, 1e-15));
        }
    }

    #[test]
    fn renyi_qubit_anchor_values() {
        let s = spectrum(&[0.75, 0.25]);
        // min-entropy: 0.415037... bits
        assert!(approx(renyi(&s, f64::INFINITY), 0.4150374992788438, 1e-15));
        assert!(approx(renyi(&s, 0.0), 1.0, 1e-15));
        // order 2: -log2(0.5625 + 0.0625)
        assert!(approx(renyi(&s, 2.0), 0.6780719051126378, 1e-14));
    }

    #[test]
    fn thermal_state_collapses_free_energies() {
        let beta = 0.7;
        let energies = vec![0.0, 0.3, 0.9];
        let g: Vec<f64> = energies.iter().map(|&e: &f64| (-beta * e).exp()).collect();
        let z: f64 = g.iter().sum();
        let probs: Vec<f64> = g.iter().map(|&w| w / z).collect();
        let state = LabeledState::new(&probs, Reservoir::heat(beta, energies)).unwrap();
        let fe = free_energies(state.spectrum(), state.reservoir()).unwrap();
        let f_eq = -(1.0 / beta) * z.ln();
        assert!(approx(fe.f_min, f_eq, 1e-12));
        assert!(approx(fe.f_max, f_eq, 1e-12));
        assert!(approx(fe.f, f_eq, 1e-12));
    }

    #[test]
    fn pure_ground_state_free_energies_vanish() {
        let s = spectrum(&[1.0, 0.0]);
        let fe = free_energies(&s, &Reservoir::heat(1.0, vec![0.0, 1.0])).unwrap();
        assert!(approx(fe.f_min, 0.0, 1e-15));
        assert!(approx(fe.f_max, 0.0, 1e-15));
    }

    #[test]
    fn skewed_state_free_energies_hand_computed() {
        // p_max^res = max(0.9 e^0, 0.1 e^1) = 0.9; Z_rho = 1 + e^{-1}.
        let s = spectrum(&[0.9, 0.1]);
        let fe = free_energies(&s, &Reservoir::heat(1.0, vec![0.0, 1.0])).unwrap();
        assert!(approx(fe.f_max, 0.9_f64.ln(), 1e-15));
        assert!(approx(fe.f_min, -(1.0 + (-1.0_f64).exp()).ln(), 1e-15));
    }

    #[test]
    fn free_energies_require_heat_labels() {
        let s = spectrum(&[0.9, 0.1]);
        assert!(matches!(
            free_energies(&s, &Reservoir::none()),
            Err(Error::MissingLabels)
        ));
    }

    #[test]
    fn grand_potential_with_zero_mu_reduces_to_free_energies() {
        let probs = [0.5, 0.3, 0.2];
        let energies = vec![0.1, 0.5, 0.9];
        let s = spectrum(&probs);
        let fe = free_energies(&s, &Reservoir::heat(1.3, energies.clone())).unwrap();
        let gp = grand_potential(
            &s,
            &Reservoir::heat_particle(1.3, 0.0, energies, vec![1, 2, 3]),
        )
        .unwrap();
        assert!(approx(gp.omega_min, fe.f_min, 1e-15));
        assert!(approx(gp.omega_max, fe.f_max, 1e-15));
        assert!(approx(gp.omega, fe.f, 1e-15));
    }

    #[test]
    fn grand_potential_single_occupied_level() {
        let s = spectrum(&[1.0, 0.0]);
        let (e1, n1, mu, beta) = (0.4, 2u64, 0.3, 1.7);
        let gp = grand_potential(
            &s,
            &Reservoir::heat_particle(beta, mu, vec![e1, 0.9], vec![n1, 0]),
        )
        .unwrap();
        assert!(approx(gp.omega_min, e1 - mu * n1 as f64, 1e-12));
    }

    #[test]
    fn grand_equilibrium_collapses() {
        let beta = 0.9;
        let mu = 0.2;
        let energies = vec![0.0, 0.4, 0.8];
        let particles = vec![0u64, 1, 2];
        let g: Vec<f64> = energies
            .iter()
            .zip(&particles)
            .map(|(&e, &n)| (-beta * (e - mu * n as f64)).exp())
            .collect();
        let z: f64 = g.iter().sum();
        let probs: Vec<f64> = g.iter().map(|&w| w / z).collect();
        let state =
            LabeledState::new(&probs, Reservoir::heat_particle(beta, mu, energies, particles))
                .unwrap();
        let gp = grand_potential(state.spectrum(), state.reservoir()).unwrap();
        let omega_eq = -(1.0 / beta) * z.ln();
        assert!(approx(gp.omega_min, omega_eq, 1e-12));
        assert!(approx(gp.omega_max, omega_eq, 1e-12));
        assert!(approx(gp.omega, omega_eq, 1e-12));
    }

    #[test]
    fn j_potential_equilibrium_collapses() {
        let gamma = 0.8;
        let jz = vec![-1.0, 0.0, 1.0];
        let g: Vec<f64> = jz.iter().map(|&j: &f64| (-gamma * j).exp()).collect();
        let z: f64 = g.iter().sum();
        let probs: Vec<f64> = g.iter().map(|&w| w / z).collect();
        let state = LabeledState::new(&probs, Reservoir::angular_momentum(gamma, jz)).unwrap();
        let jp = j_potential(state.spectrum(), state.reservoir()).unwrap();
        assert!(approx(jp.lower, z.ln(), 1e-12));
        assert!(approx(jp.upper, z.ln(), 1e-12));
        assert!(approx(jp.reference, z.ln(), 1e-12));
    }

    #[test]
    fn j_potential_zero_gamma_gives_plain_quantities() {
        let s = spectrum(&[0.6, 0.4]);
        let jp = j_potential(&s, &Reservoir::angular_momentum(0.0, vec![0.5, -0.5])).unwrap();
        assert!(approx(jp.lower, (1.0 / 0.6_f64).ln(), 1e-15));
        assert!(approx(jp.upper, 2.0_f64.ln(), 1e-15));
    }

    #[test]
    fn j_potential_balanced_two_level_example() {
        // weights (1, 1/2): rescaled ratios (1/2, 1); max ratio 1, so the
        // lower potential is ln 1 = 0.
        let s = spectrum(&[0.5, 0.5]);
        let res = Reservoir::angular_momentum(core::f64::consts::LN_2, vec![0.0, 1.0]);
        let jp = j_potential(&s, &res).unwrap();
        assert!(approx(jp.lower, 0.0, 1e-15));
    }

    #[test]
    fn report_includes_matching_block() {
        let s = spectrum(&[0.7, 0.3]);
        let r = report(&s, &Reservoir::none(), &[0.0, 1.0, f64::INFINITY]).unwrap();
        assert!(r.free.is_none() && r.grand.is_none() && r.j.is_none());
        assert_eq!(r.renyi.len(), 3);
        let r = report(&s, &Reservoir::heat(1.0, vec![0.0, 1.0]), &[]).unwrap();
        assert!(r.free.is_some());
    }

    prop_compose! {
        fn arb_probs(max_dim: usize)(dim in 2..=max_dim)(
            raw in prop::collection::vec(1e-3..1.0f64, dim),
        ) -> Vec<f64> {
            let s: f64 = raw.iter().sum();
            raw.iter().map(|v| v / s).collect()
        }
    }

    // Tensor product of two spectra.
    fn tensor(a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(a.len() * b.len());
        for &x in a {
            for &y in b {
                out.push(x * y);
            }
        }
        out
    }

    proptest! {
        #[test]
        fn entropies_are_additive_over_tensor_products(
            a in arb_probs(6),
            b in arb_probs(6),
        ) {
            let (sa, sb) = (spectrum(&a), spectrum(&b));
            let sab = spectrum(&tensor(&a, &b));
            prop_assert!(approx(von_neumann(&sab), von_neumann(&sa) + von_neumann(&sb), 1e-9));
            prop_assert!(approx(h_min(&sab), h_min(&sa) + h_min(&sb), 1e-9));
            prop_assert!(approx(h_max(&sab), h_max(&sa) + h_max(&sb), 1e-9));
            prop_assert!(approx(renyi(&sab, 2.0), renyi(&sa, 2.0) + renyi(&sb, 2.0), 1e-9));
        }

        #[test]
        fn free_energies_are_additive_with_summed_energies(
            a in arb_probs(4),
            b in arb_probs(4),
            beta in 0.1..5.0f64,
            ea_raw in prop::collection::vec(0.0..1.0f64, 4),
            eb_raw in prop::collection::vec(0.0..1.0f64, 4),
        ) {
            let ea = &ea_raw[..a.len()];
            let eb = &eb_raw[..b.len()];
            let state_a = LabeledState::new(&a, Reservoir::heat(beta, ea.to_vec())).unwrap();
            let state_b = LabeledState::new(&b, Reservoir::heat(beta, eb.to_vec())).unwrap();
            let fa = free_energies(state_a.spectrum(), state_a.reservoir()).unwrap();
            let fb = free_energies(state_b.spectrum(), state_b.reservoir()).unwrap();
            // Composite: probabilities multiply, energies add.
            let mut probs = Vec::new();
            let mut energies = Vec::new();
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    probs.push(x * y);
                    energies.push(ea[i] + eb[j]);
                }
            }
            let state_ab = LabeledState::new(&probs, Reservoir::heat(beta, energies)).unwrap();
            let fab = free_energies(state_ab.spectrum(), state_ab.reservoir()).unwrap();
            prop_assert!(approx(fab.f_min, fa.f_min + fb.f_min, 1e-9));
            prop_assert!(approx(fab.f_max, fa.f_max + fb.f_max, 1e-9));
            prop_assert!(approx(fab.f, fa.f + fb.f, 1e-9));
        }

        #[test]
        fn entropies_monotone_along_mixing(
            a in arb_probs(6),
            t in 0.01..0.99f64,
        ) {
            // Mixing toward uniform is order-increasing, so every Rényi
            // entropy must not decrease.
            let d = a.len() as f64;
            let mixed: Vec<f64> = a.iter().map(|&p| (1.0 - t) * p + t / d).collect();
            let (sa, sb) = (spectrum(&a), spectrum(&mixed));
            for alpha in [0.0, 0.5, 1.0, 2.0, f64::INFINITY] {
                prop_assert!(renyi(&sa, alpha) <= renyi(&sb, alpha) + 1e-12);
            }
        }

        #[test]
        fn min_le_vn_le_max(a in arb_probs(8)) {
            let s = spectrum(&a);
            prop_assert!(h_min(&s) <= von_neumann(&s) + 1e-12);
            prop_assert!(von_neumann(&s) <= h_max(&s) + 1e-12);
        }

        #[test]
        fn f_min_never_exceeds_f_max(
            a in arb_probs(8),
            beta in 0.1..5.0f64,
            energies in prop::collection::vec(0.0..1.0f64, 8),
        ) {
            let state = LabeledState::new(&a, Reservoir::heat(beta, energies[..a.len()].to_vec()))
                .unwrap();
            let fe = free_energies(state.spectrum(), state.reservoir()).unwrap();
            let kbt = 1.0 / beta;
            prop_assert!(fe.f_min <= fe.f_max + 1e-12 * kbt);
        }
    }
}
