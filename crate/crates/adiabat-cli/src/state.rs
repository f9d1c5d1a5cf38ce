//! State files: a spectrum with optional conserved-quantity labels, or a
//! density matrix to be eigen-decomposed (sector by sector when labels are
//! present).

use std::fs;
use std::path::Path;

use serde::Deserialize;

use adiabat::hermitian::{decohere, eigen_spectrum, DensityMatrix};
use adiabat::spectra::LabeledState;
use adiabat::{Reservoir, Tag};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    #[serde(default)]
    pub spectrum: Option<Vec<f64>>,
    #[serde(default)]
    pub matrix: Option<MatrixFile>,
    #[serde(default)]
    pub energies: Option<Vec<f64>>,
    #[serde(default)]
    pub particles: Option<Vec<u64>>,
    #[serde(default)]
    pub jz: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

/// Reservoir parameters shared by a whole invocation.
#[derive(Clone, Copy, Debug)]
pub struct Params {
    pub beta: Option<f64>,
    pub mu: Option<f64>,
    pub gamma: Option<f64>,
    pub kb: f64,
}

pub fn load(path: &Path) -> Result<StateFile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::domain("io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::domain("parse", format!("{}: {e}", path.display())))
}

impl StateFile {
    /// Raw `(probabilities, labels)` rows in file order. Matrix inputs are
    /// decohered in the label basis (when labels exist) and eigen-decomposed
    /// sector by sector so eigenvalues stay paired with their labels.
    pub fn probabilities(&self, tag: Tag) -> Result<(Vec<f64>, Labels), CliError> {
        match (&self.spectrum, &self.matrix) {
            (Some(_), Some(_)) => Err(CliError::domain(
                "input",
                "state file has both \"spectrum\" and \"matrix\"".to_string(),
            )),
            (None, None) => Err(CliError::domain(
                "input",
                "state file needs \"spectrum\" or \"matrix\"".to_string(),
            )),
            (Some(spectrum), None) => Ok((spectrum.clone(), self.labels())),
            (None, Some(m)) => self.matrix_probabilities(m, tag),
        }
    }

    fn labels(&self) -> Labels {
        Labels {
            energies: self.energies.clone(),
            particles: self.particles.clone(),
            jz: self.jz.clone(),
        }
    }

    fn matrix_probabilities(&self, m: &MatrixFile, tag: Tag) -> Result<(Vec<f64>, Labels), CliError> {
        let rho = build_matrix(m)?;
        let dim = rho.dim();
        let labels = self.labels();
        let sector_key: Option<Vec<(u64, u64)>> = match tag {
            Tag::M => None,
            Tag::T => Some(key_rows(dim, &labels.energies, None)?),
            Tag::Nt => Some(key_rows(dim, &labels.energies, labels.particles.as_deref())?),
            Tag::J => Some(key_rows(dim, &labels.jz, None)?),
        };
        let Some(keys) = sector_key else {
            // No conserved quantity: plain spectrum of the whole matrix.
            let s = eigen_spectrum(&rho).map_err(CliError::from)?;
            return Ok((s.probs().to_vec(), labels));
        };

        // Decohere across sectors, then diagonalize each sector on its own.
        let float_keys: Vec<f64> = keys.iter().map(|&(a, b)| combine_key(a, b)).collect();
        let rho = decohere(&rho, &float_keys).map_err(CliError::from)?;
        let mut probs = vec![0.0_f64; dim];
        let mut seen = vec![false; dim];
        for start in 0..dim {
            if seen[start] {
                continue;
            }
            let members: Vec<usize> = (start..dim).filter(|&i| keys[i] == keys[start]).collect();
            for &i in &members {
                seen[i] = true;
            }
            let evals = sector_eigenvalues(&rho, &members)?;
            for (slot, value) in members.iter().zip(evals) {
                probs[*slot] = value;
            }
        }
        Ok((probs, labels))
    }
}

/// Per-row labels from a state file, selected per relation in `reservoir`.
#[derive(Clone, Debug, Default)]
pub struct Labels {
    pub energies: Option<Vec<f64>>,
    pub particles: Option<Vec<u64>>,
    pub jz: Option<Vec<f64>>,
}

/// Assembles the reservoir for one state under the given relation tag.
pub fn reservoir(tag: Tag, labels: &Labels, params: &Params) -> Result<Reservoir, CliError> {
    let need = |o: Option<f64>, flag: &str| {
        o.ok_or_else(|| CliError::usage(format!("--{flag} is required for this relation")))
    };
    let res = match tag {
        Tag::M => Reservoir::none(),
        Tag::T => {
            let beta = need(params.beta, "beta")?;
            let energies = labels
                .energies
                .clone()
                .ok_or_else(|| CliError::domain("MissingLabels", "state has no energies".into()))?;
            Reservoir::heat(beta, energies).with_k_b(params.kb)
        }
        Tag::Nt => {
            let beta = need(params.beta, "beta")?;
            let mu = need(params.mu, "mu")?;
            let energies = labels
                .energies
                .clone()
                .ok_or_else(|| CliError::domain("MissingLabels", "state has no energies".into()))?;
            let particles = labels
                .particles
                .clone()
                .ok_or_else(|| CliError::domain("MissingLabels", "state has no particles".into()))?;
            Reservoir::heat_particle(beta, mu, energies, particles).with_k_b(params.kb)
        }
        Tag::J => {
            let gamma = need(params.gamma, "gamma")?;
            let jz = labels
                .jz
                .clone()
                .ok_or_else(|| CliError::domain("MissingLabels", "state has no jz".into()))?;
            Reservoir::angular_momentum(gamma, jz)
        }
    };
    Ok(res)
}

/// Loads a file and produces the jointly-sorted labeled state for a relation.
pub fn load_state(path: &Path, tag: Tag, params: &Params) -> Result<LabeledState, CliError> {
    let file = load(path)?;
    let (probs, labels) = file.probabilities(tag)?;
    let res = reservoir(tag, &labels, params)?;
    LabeledState::new(&probs, res).map_err(CliError::from)
}

fn build_matrix(m: &MatrixFile) -> Result<DensityMatrix, CliError> {
    let dim = m.re.len();
    let bad = |msg: &str| CliError::domain("input", format!("matrix: {msg}"));
    if m.re.iter().any(|row| row.len() != dim) {
        return Err(bad("\"re\" must be square"));
    }
    if let Some(im) = &m.im {
        if im.len() != dim || im.iter().any(|row| row.len() != dim) {
            return Err(bad("\"im\" must match \"re\" in shape"));
        }
    }
    let mut data = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let re = m.re[i][j];
            let im = m.im.as_ref().map_or(0.0, |rows| rows[i][j]);
            data.push(num_complex::Complex64::new(re, im));
        }
    }
    DensityMatrix::new(dim, data).map_err(CliError::from)
}

fn key_rows(
    dim: usize,
    primary: &Option<Vec<f64>>,
    secondary: Option<&[u64]>,
) -> Result<Vec<(u64, u64)>, CliError> {
    let p = primary
        .as_ref()
        .ok_or_else(|| CliError::domain("MissingLabels", "matrix input needs labels".into()))?;
    if p.len() != dim {
        return Err(CliError::domain(
            "LengthMismatch",
            format!("labels have length {}, matrix has {dim}", p.len()),
        ));
    }
    if let Some(s) = secondary {
        if s.len() != dim {
            return Err(CliError::domain(
                "LengthMismatch",
                format!("labels have length {}, matrix has {dim}", s.len()),
            ));
        }
    }
    Ok((0..dim)
        .map(|i| (p[i].to_bits(), secondary.map_or(0, |s| s[i])))
        .collect())
}

// Injective map from a label pair to one f64 sector id for `decohere`.
fn combine_key(a: u64, b: u64) -> f64 {
    let mut h = a.wrapping_mul(0x9e3779b97f4a7c15);
    h ^= b.wrapping_add(0x632be59bd9b4e019).rotate_left(31);
    h = h.wrapping_mul(0xbf58476d1ce4e5b9);
    f64::from_bits((h >> 12) | 0x3ff0000000000000)
}

fn sector_eigenvalues(rho: &DensityMatrix, members: &[usize]) -> Result<Vec<f64>, CliError> {
    let k = members.len();
    if k == 1 {
        return Ok(vec![rho.get(members[0], members[0]).re]);
    }
    let mut sub = Vec::with_capacity(k * k);
    let mut trace = 0.0;
    for &i in members {
        for &j in members {
            sub.push(rho.get(i, j));
        }
        trace += rho.get(i, i).re;
    }
    if trace <= 1e-15 {
        return Ok(vec![0.0; k]);
    }
    // Normalize the sector to unit trace, diagonalize, scale back.
    for e in sub.iter_mut() {
        *e /= trace;
    }
    let dm = DensityMatrix::new(k, sub).map_err(CliError::from)?;
    let s = eigen_spectrum(&dm).map_err(CliError::from)?;
    Ok(s.probs().iter().map(|&p| p * trace).collect())
}
