//! Constructive convertibility certificates for plain majorization.
//!
//! When `p` precedes `q`, a finite chain of T-transforms — doubly stochastic
//! matrices mixing exactly two coordinates, `(1-t)·Id + t·swap(i,j)` — maps
//! `p` onto `q`. [`build_witness`] produces such a chain of length at most
//! `dim - 1` together with its doubly stochastic product; [`verify_witness`]
//! re-checks the product's invariants from scratch.
//!
//! The reduction picks, at each step, the first coordinate still above the
//! target and the first later coordinate below it, and transfers exactly
//! enough mass to pin one of them to its target. Index-deficit bookkeeping
//! keeps every intermediate prefix sum nonnegative, so the first mismatch is
//! always a surplus and each step retires at least one coordinate.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::spectra::Spectrum;
use crate::{Error, Result, CURVE_TOL};

/// Coordinates snapped to the target below this are treated as matched.
const SNAP_TOL: f64 = 1e-13;

/// One T-transform: mixes coordinates `i` and `j` with strength `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TTransform {
    pub i: usize,
    pub j: usize,
    pub t: f64,
}

/// A convertibility certificate: the T-transform chain and its product,
/// a doubly stochastic matrix carrying the padded source to the target.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    dim: usize,
    steps: Vec<TTransform>,
    product: Vec<f64>, // row-major dim x dim
}

impl Witness {
    /// Assembles a witness from parts (for hand-built certificates);
    /// [`verify_witness`] decides whether it is valid.
    pub fn from_parts(dim: usize, steps: Vec<TTransform>, product: Vec<f64>) -> Self {
        Self { dim, steps, product }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> &[TTransform] {
        &self.steps
    }

    /// Row-major `dim x dim` product matrix.
    pub fn product(&self) -> &[f64] {
        &self.product
    }

    pub fn product_entry(&self, row: usize, col: usize) -> f64 {
        self.product[row * self.dim + col]
    }
}

/// Zero-pads both spectra to a common dimension.
fn padded(p: &Spectrum, q: &Spectrum) -> (Vec<f64>, Vec<f64>, usize) {
    let dim = p.dim().max(q.dim());
    let mut pv = p.probs().to_vec();
    let mut qv = q.probs().to_vec();
    pv.resize(dim, 0.0);
    qv.resize(dim, 0.0);
    (pv, qv, dim)
}

/// Builds a T-transform chain carrying `p` to `q`. Fails with the first
/// violated prefix index when `p` does not precede `q`.
pub fn build_witness(p: &Spectrum, q: &Spectrum) -> Result<Witness> {
    let (pv, qv, dim) = padded(p, q);

    // Precondition: partial sums of p dominate those of q at every prefix.
    let mut sum_p = 0.0;
    let mut sum_q = 0.0;
    for k in 0..dim {
        sum_p += pv[k];
        sum_q += qv[k];
        if sum_p < sum_q - CURVE_TOL {
            return Err(Error::NotMajorized { prefix: k + 1 });
        }
    }

    let mut x = pv.clone();
    let mut product = identity(dim);
    let mut steps = Vec::new();

    for _ in 0..dim {
        let Some(i) = x
            .iter()
            .zip(&qv)
            .position(|(&a, &b)| math::abs(a - b) > SNAP_TOL)
        else {
            break;
        };
        debug_assert!(x[i] > qv[i], "first mismatch must be a surplus");
        let j = (i + 1..dim)
            .find(|&k| x[k] < qv[k])
            .expect("a surplus implies a later deficit");
        let excess = x[i] - qv[i];
        let deficit = qv[j] - x[j];
        let delta = excess.min(deficit);
        let t = delta / (x[i] - x[j]);
        steps.push(TTransform { i, j, t });
        mix_rows(&mut product, dim, i, j, t);
        if excess <= deficit {
            x[j] += excess;
            x[i] = qv[i];
        } else {
            x[i] -= deficit;
            x[j] = qv[j];
        }
    }

    Ok(Witness {
        dim,
        steps,
        product,
    })
}

/// Re-checks every witness invariant independently of construction: the
/// product is doubly stochastic within `1e-12`, maps the padded source to the
/// target within `1e-12`, and the chain has at most `dim - 1` steps.
pub fn verify_witness(w: &Witness, p: &Spectrum, q: &Spectrum) -> bool {
    let (pv, qv, dim) = padded(p, q);
    if dim != w.dim || w.product.len() != dim * dim {
        return false;
    }
    if dim > 0 && w.steps.len() > dim - 1 {
        return false;
    }
    for &e in &w.product {
        if e < -CURVE_TOL {
            return false;
        }
    }
    for k in 0..dim {
        let row: f64 = (0..dim).map(|c| w.product[k * dim + c]).sum();
        let col: f64 = (0..dim).map(|r| w.product[r * dim + k]).sum();
        if math::abs(row - 1.0) > CURVE_TOL || math::abs(col - 1.0) > CURVE_TOL {
            return false;
        }
    }
    for (r, &target) in qv.iter().enumerate() {
        let mapped: f64 = (0..dim).map(|c| w.product[r * dim + c] * pv[c]).sum();
        if math::abs(mapped - target) > CURVE_TOL {
            return false;
        }
    }
    true
}

fn identity(dim: usize) -> Vec<f64> {
    let mut m = vec![0.0; dim * dim];
    for k in 0..dim {
        m[k * dim + k] = 1.0;
    }
    m
}

/// Left-multiplies the accumulated product by a T-transform on rows (i, j).
fn mix_rows(m: &mut [f64], dim: usize, i: usize, j: usize, t: f64) {
    for c in 0..dim {
        let a = m[i * dim + c];
        let b = m[j * dim + c];
        m[i * dim + c] = (1.0 - t) * a + t * b;
        m[j * dim + c] = t * a + (1.0 - t) * b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::von_neumann;
    use proptest::prelude::*;

    fn spectrum(probs: &[f64]) -> Spectrum {
        Spectrum::from_probs(probs).unwrap()
    }

    #[test]
    fn bit_flip_mixing() {
        let w = build_witness(&spectrum(&[1.0, 0.0]), &spectrum(&[0.5, 0.5])).unwrap();
        assert_eq!(w.steps(), &[TTransform { i: 0, j: 1, t: 0.5 }]);
        assert_eq!(w.product(), &[0.5, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn equal_spectra_need_no_steps() {
        let p = spectrum(&[0.6, 0.4]);
        let w = build_witness(&p, &p.clone()).unwrap();
        assert!(w.steps().is_empty());
        assert_eq!(w.product(), &[1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn three_level_reduction_hand_checked() {
        // First step moves 0.1 from coordinate 0 to 2 (t = 1/6), second step
        // balances coordinates 1 and 2 (t = 1/2).
        let p = spectrum(&[0.6, 0.4, 0.0]);
        let q = spectrum(&[0.5, 0.25, 0.25]);
        let w = build_witness(&p, &q).unwrap();
        assert_eq!(w.steps().len(), 2);
        let s0 = w.steps()[0];
        let s1 = w.steps()[1];
        assert_eq!((s0.i, s0.j), (0, 2));
        assert!((s0.t - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!((s1.i, s1.j), (1, 2));
        assert!((s1.t - 0.5).abs() < 1e-15);
        assert!(verify_witness(&w, &p, &q));
        // Frozen product of the two transforms.
        let expect = [
            5.0 / 6.0,
            0.0,
            1.0 / 6.0,
            1.0 / 12.0,
            0.5,
            5.0 / 12.0,
            1.0 / 12.0,
            0.5,
            5.0 / 12.0,
        ];
        for (a, e) in w.product().iter().zip(expect) {
            assert!((a - e).abs() < 1e-15, "{} vs {}", a, e);
        }
    }

    #[test]
    fn zero_padding_aligns_dimensions() {
        let p = spectrum(&[0.7, 0.3]);
        let q = spectrum(&[0.4, 0.3, 0.3]);
        let w = build_witness(&p, &q).unwrap();
        assert_eq!(w.dim(), 3);
        assert!(verify_witness(&w, &p, &q));
    }

    #[test]
    fn non_majorizing_pair_reports_first_prefix() {
        let err = build_witness(&spectrum(&[0.5, 0.5]), &spectrum(&[0.7, 0.3])).unwrap_err();
        assert_eq!(err, Error::NotMajorized { prefix: 1 });
        let err = build_witness(&spectrum(&[0.6, 0.2, 0.2]), &spectrum(&[0.55, 0.45, 0.0])).unwrap_err();
        assert_eq!(err, Error::NotMajorized { prefix: 2 });
    }

    #[test]
    fn identity_product_fails_for_distinct_spectra() {
        let p = spectrum(&[1.0, 0.0]);
        let q = spectrum(&[0.5, 0.5]);
        let w = Witness::from_parts(2, vec![], identity(2));
        assert!(!verify_witness(&w, &p, &q));
    }

    #[test]
    fn hand_built_permutation_mixture_verifies() {
        // 0.5·Id + 0.5·swap maps (0.6, 0.4) to (0.5, 0.5); empty chain.
        let p = spectrum(&[0.6, 0.4]);
        let q = spectrum(&[0.5, 0.5]);
        let w = Witness::from_parts(2, vec![], vec![0.5, 0.5, 0.5, 0.5]);
        assert!(verify_witness(&w, &p, &q));
    }

    #[test]
    fn corrupted_product_is_rejected() {
        let p = spectrum(&[0.6, 0.4, 0.0]);
        let q = spectrum(&[0.5, 0.25, 0.25]);
        let good = build_witness(&p, &q).unwrap();
        assert!(verify_witness(&good, &p, &q));
        let mut bad = good.product().to_vec();
        bad[0] += 1e-6;
        let w = Witness::from_parts(3, good.steps().to_vec(), bad);
        assert!(!verify_witness(&w, &p, &q));
    }

    // Random majorizing pair: q is p pushed through a few random T-transforms.
    prop_compose! {
        fn arb_majorizing_pair(max_dim: usize)(dim in 2..=max_dim)(
            raw in prop::collection::vec(1e-4..1.0f64, dim),
            mixes in prop::collection::vec((0usize..64, 0usize..64, 0.0..1.0f64), 1..8),
        ) -> (Spectrum, Spectrum) {
            let total: f64 = raw.iter().sum();
            let p: alloc::vec::Vec<f64> = raw.iter().map(|v| v / total).collect();
            let mut q = p.clone();
            let d = q.len();
            for (a, b, t) in mixes {
                let (i, j) = (a % d, b % d);
                if i == j {
                    continue;
                }
                let (x, y) = (q[i], q[j]);
                q[i] = (1.0 - t) * x + t * y;
                q[j] = t * x + (1.0 - t) * y;
            }
            (Spectrum::from_probs(&p).unwrap(), Spectrum::from_probs(&q).unwrap())
        }
    }

    proptest! {
        #[test]
        fn round_trip_on_random_majorizing_pairs((p, q) in arb_majorizing_pair(16)) {
            let w = build_witness(&p, &q).unwrap();
            prop_assert!(verify_witness(&w, &p, &q));
            prop_assert!(w.steps().len() <= w.dim().saturating_sub(1));
        }

        #[test]
        fn witnesses_never_decrease_entropy((p, q) in arb_majorizing_pair(12)) {
            let _ = build_witness(&p, &q).unwrap();
            prop_assert!(von_neumann(&q) >= von_neumann(&p) - 1e-12);
        }
    }
}
