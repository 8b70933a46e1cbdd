//! JSON run configuration for amplitude evaluation: a single document with
//! `model`, `measures`, `multipliers`, and `sweep` sections. Discrete measure
//! atoms are arrays of [point, weight].

use num_complex::Complex64;
use serde::Deserialize;

use vevlab_core::kinematics::{mass_shell, FourVector};
use vevlab_core::scattering::{MultiplierSpec, ScatterKinematics};
use vevlab_core::wick::{InvariantMeasure, ScalarMeasure};

use crate::CliError;

#[derive(Debug, Deserialize)]
pub struct ConfigFile {
    pub model: ModelSection,
    pub measures: MeasuresSection,
    pub multipliers: MultipliersSection,
    pub sweep: SweepSection,
}

#[derive(Debug, Deserialize)]
pub struct ModelSection {
    /// "scalar" or "electro".
    pub kind: String,
    #[serde(default = "default_mass")]
    pub mass: f64,
}

fn default_mass() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
pub struct MeasuresSection {
    /// Invariant-measure atoms: [[e, px, py, pz], weight].
    #[serde(default)]
    pub upsilon: Vec<([f64; 4], f64)>,
    /// Scalar-measure atoms: [point, weight].
    #[serde(default)]
    pub beta: Vec<(f64, f64)>,
}

#[derive(Debug, Deserialize)]
pub struct MultipliersSection {
    pub c4: f64,
    /// Unit-modulus two-point phase as [re, im].
    #[serde(default = "default_varsigma")]
    pub varsigma2: [f64; 2],
    pub u2: U2Section,
}

fn default_varsigma() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum U2Section {
    /// Constant multiplier value [re, im].
    Constant { value: [f64; 2] },
    /// Yukawa-type multiplier evaluated on the invariant argument.
    Yukawa { delta: f64, epsilon: f64, alpha: f64 },
}

#[derive(Debug, Deserialize)]
pub struct SweepSection {
    /// Each point is four legs: 1, 2 outgoing and 3, 4 incoming.
    pub points: Vec<[LegSpec; 4]>,
}

#[derive(Debug, Deserialize)]
pub struct LegSpec {
    pub mass: f64,
    pub momentum: [f64; 3],
    /// Component coefficients as [re, im] pairs (length = model components).
    pub w: Vec<[f64; 2]>,
}

pub fn load(path: &std::path::Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("malformed config: {e}")))
}

impl ConfigFile {
    pub fn multiplier_spec(&self) -> Result<MultiplierSpec, CliError> {
        let upsilon_atoms: Vec<(FourVector, f64)> = self
            .measures
            .upsilon
            .iter()
            .map(|(p, w)| (FourVector::new(p[0], p[1], p[2], p[3]), *w))
            .collect();
        let upsilon = InvariantMeasure::new(upsilon_atoms)
            .map_err(|e| CliError::Usage(format!("invalid upsilon measure: {e:?}")))?;
        let beta = ScalarMeasure::new(self.measures.beta.clone())
            .map_err(|e| CliError::Usage(format!("invalid beta measure: {e:?}")))?;
        let u2: Box<dyn Fn(&FourVector) -> Complex64> = match &self.multipliers.u2 {
            U2Section::Constant { value } => {
                let v = Complex64::new(value[0], value[1]);
                Box::new(move |_: &FourVector| v)
            }
            U2Section::Yukawa { delta, epsilon, alpha } => {
                let spec = vevlab_core::potentials::YukawaSpec::new(
                    *delta,
                    *epsilon,
                    *alpha,
                    self.multipliers.c4,
                    self.model.mass,
                )
                .map_err(|e| CliError::Usage(format!("invalid yukawa multiplier: {e:?}")))?;
                Box::new(move |p: &FourVector| {
                    Complex64::new(vevlab_core::potentials::u_s_invariant(&spec, p), 0.0)
                })
            }
        };
        let varsigma = Complex64::new(self.multipliers.varsigma2[0], self.multipliers.varsigma2[1]);
        MultiplierSpec::new(u2, upsilon, beta, self.multipliers.c4, varsigma)
            .map_err(|e| CliError::Usage(format!("invalid multipliers: {e:?}")))
    }

    pub fn kinematics(&self, point: &[LegSpec; 4]) -> Result<ScatterKinematics, CliError> {
        let mut momenta = Vec::with_capacity(4);
        let mut coeffs = Vec::with_capacity(4);
        for leg in point {
            let p = mass_shell(leg.mass, leg.momentum, 1)
                .map_err(|e| CliError::Usage(format!("invalid leg momentum: {e:?}")))?;
            momenta.push(p);
            coeffs.push(
                leg.w
                    .iter()
                    .map(|[re, im]| Complex64::new(*re, *im))
                    .collect::<Vec<_>>(),
            );
        }
        let p: [_; 4] = [momenta[0], momenta[1], momenta[2], momenta[3]];
        let mut it = coeffs.into_iter();
        let w: [Vec<Complex64>; 4] = [
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
        ];
        ScatterKinematics::new(p, w).map_err(|e| CliError::Usage(format!("{e:?}")))
    }
}
