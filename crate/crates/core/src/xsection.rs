//! Transition-likelihood pipeline for two-in, two-out scattering: plane-wave
//! state norms, the projection measure fixed by idempotence of the final-state
//! projection, the flux velocity, and differential cross sections. Both the
//! raw factored bookkeeping (packet scale L, duration T, flux volume V) and
//! the cancelled closed form are exposed, so the cancellation of all L-, T-,
//! V-dependent factors is itself testable.

use core::fmt;

use num_complex::Complex64;

use crate::cmatrix::cdot;
use crate::fields::{polarization_norm, FieldsError, Polarization, TwoPointModel, TWO_PI};
use crate::fields::photon_basis;
use crate::fmath;
use crate::kinematics::{
    lorentz_from_sl2c, mass_shell, minkowski_dot, pure_boost, FourVector, KinematicsError,
    LorentzMatrix, OnShellMomentum,
};
use crate::scattering::{
    delta_t_squared_prefactor, AmplitudeResult, ComptonKinematics, Provenance, ScatterKinematics,
    ScatteringError, com_photon_energy, compton_com_momenta, constructed_compton, feynman_compton,
};

/// Spacetime dimension for cross sections; delta-sequence bookkeeping keeps
/// d as a parameter, amplitudes fix it.
pub const DIM: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum XsectionError {
    /// Two plane-wave momenta coincide where distinct momenta are required
    /// (state norms factorize only for p_i != p_j; zero relative flux).
    CoincidentMomenta,
    /// Total energy below the final-state mass threshold.
    BelowThreshold { energy: f64, threshold: f64 },
    /// Kinematics declared center-of-momentum have nonzero total 3-momentum.
    NotCenterOfMomentum { residual: f64 },
    /// Underlying amplitude or kinematics failure.
    Scattering(ScatteringError),
}

impl fmt::Display for XsectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XsectionError::CoincidentMomenta => write!(f, "coincident plane-wave momenta"),
            XsectionError::BelowThreshold { energy, threshold } => {
                write!(f, "total energy {energy} below threshold {threshold}")
            }
            XsectionError::NotCenterOfMomentum { residual } => {
                write!(f, "not center-of-momentum (residual {residual})")
            }
            XsectionError::Scattering(e) => write!(f, "amplitude error: {e}"),
        }
    }
}

impl From<ScatteringError> for XsectionError {
    fn from(e: ScatteringError) -> Self {
        XsectionError::Scattering(e)
    }
}

impl From<KinematicsError> for XsectionError {
    fn from(_: KinematicsError) -> Self {
        XsectionError::Scattering(ScatteringError::InvalidLeg { index: 0 })
    }
}

impl From<FieldsError> for XsectionError {
    fn from(_: FieldsError) -> Self {
        XsectionError::Scattering(ScatteringError::InvalidLeg { index: 0 })
    }
}

// ---------------------------------------------------------------------------
// Bookkeeping factors: measure, volume, flux.
// ---------------------------------------------------------------------------

/// Density of the measure on final-state labels, mu(dp) = (L/sqrt(2 pi))^{d-1}
/// dp, fixed by idempotence P^2 = P of the projection onto final states.
pub fn projection_measure(l: f64, d: usize) -> f64 {
    fmath::powi(l / fmath::sqrt(TWO_PI), (d - 1) as i32)
}

/// Interaction volume V = (2 L sqrt(pi))^{d-1}, consistent with box
/// normalization of the squared momentum delta sequence.
pub fn flux_volume(l: f64, d: usize) -> f64 {
    fmath::powi(2.0 * l * fmath::sqrt(fmath::PI), (d - 1) as i32)
}

/// Flux-corrected interaction area A = V / (T u_alpha).
pub fn flux_area(l: f64, t: f64, u_alpha: f64, d: usize) -> f64 {
    flux_volume(l, d) / (t * u_alpha)
}

/// Relative velocity factor u_alpha = sqrt((p1.p2)^2 - m1^2 m2^2) /
/// (omega1 omega2) for the incident pair; 1 for a photon on a particle at
/// rest, 0 when both momenta vanish.
pub fn flux_velocity(p1: &OnShellMomentum, p2: &OnShellMomentum) -> f64 {
    let dot = minkowski_dot(&p1.four_vector(), &p2.four_vector());
    let m1 = p1.mass();
    let m2 = p2.mass();
    let rad = (dot * dot - m1 * m1 * m2 * m2).max(0.0);
    fmath::sqrt(rad) / (p1.omega() * p2.omega())
}

/// Numeric audit of the idempotence identity behind the projection measure:
/// per axis, the normalized single-particle overlap kernel
/// (L/sqrt(2 pi)) exp(-L^2 x^2 / 2) must integrate to 1, so the product of
/// the label measure and the overlap delta sequence reproduces the
/// projection. Returns |integral^{d-1} - 1|.
pub fn projection_idempotence_residual(l: f64, d: usize) -> f64 {
    let half = 12.0 / l;
    let one_axis = crate::quad::adaptive_simpson(
        &|x: f64| l / fmath::sqrt(TWO_PI) * fmath::exp(-0.5 * l * l * x * x),
        -half,
        half,
        1e-12,
    );
    fmath::abs(fmath::powi(one_axis, (d - 1) as i32) - 1.0)
}

// ---------------------------------------------------------------------------
// State norms and overlaps.
// ---------------------------------------------------------------------------

/// Plane-wave-limit single-particle overlap
/// <(p_i, w_i) | (p_k, w_k)> ~ 2 omega_k (conj(w_i)^T (DM(p_k)/2 pi) w_k)
/// (L/sqrt(2 pi))^{d-1} exp(-L^2 |p_i - p_k|^2 / 2).
pub fn two_point_overlap<M: TwoPointModel>(
    model: &M,
    pol_i: &Polarization,
    pol_k: &Polarization,
    l: f64,
) -> Complex64 {
    let pk = pol_k.momentum;
    let dm = (&model.d() * &model.m(&pk.four_vector())).scale_re(1.0 / TWO_PI);
    let bilinear = cdot(&pol_i.w, &dm.mul_vec(&pol_k.w));
    let si = pol_i.momentum.spatial();
    let sk = pk.spatial();
    let dsq: f64 = (0..3).map(|a| (si[a] - sk[a]) * (si[a] - sk[a])).sum();
    bilinear
        * 2.0
        * pk.omega()
        * projection_measure(l, DIM)
        * fmath::exp(-0.5 * l * l * dsq)
}

/// Overlap of the vacuum with a two-particle in or out state. Both LSZ
/// packets of a two-particle state are supported on the positive-energy
/// shell, while the single two-point pairing requires opposite-energy
/// supports; the overlap therefore vanishes identically.
pub fn vacuum_two_particle_overlap() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Squared norm of a two-particle plane-wave state with distinct momenta:
/// the product of the two single-particle self-overlaps,
/// 4 omega_i omega_j n_i n_j (L^2 / 2 pi)^{d-1} with n the polarization
/// norms; equals (L^2 / 2 pi)^{d-1} for normalized polarizations.
pub fn state_norm_sq<M: TwoPointModel>(
    model: &M,
    pols: &[Polarization; 2],
    l: f64,
) -> Result<f64, XsectionError> {
    let si = pols[0].momentum.spatial();
    let sj = pols[1].momentum.spatial();
    let scale = 1.0
        + pols[0].momentum.spatial_norm().max(pols[1].momentum.spatial_norm());
    if (0..3).all(|a| fmath::abs(si[a] - sj[a]) < 1e-12 * scale) {
        return Err(XsectionError::CoincidentMomenta);
    }
    let ni = polarization_norm(model, &pols[0]).re;
    let nj = polarization_norm(model, &pols[1]).re;
    Ok(4.0
        * pols[0].momentum.omega()
        * pols[1].momentum.omega()
        * ni
        * nj
        * fmath::powi(l * l / TWO_PI, (DIM - 1) as i32))
}

// ---------------------------------------------------------------------------
// Outgoing momentum magnitude from energy conservation.
// ---------------------------------------------------------------------------

/// Magnitude of the outgoing center-of-momentum 3-momenta solving
/// omega_3(rho) + omega_4(rho) = omega_1 + omega_2 for final masses m1, m2:
/// rho_o = sqrt(((w)^2 - m1^2 - m2^2)^2 - 4 m1^2 m2^2) / (2 w) with
/// w = omega_1 + omega_2.
pub fn rho_out(omega1: f64, omega2: f64, m1: f64, m2: f64) -> Result<f64, XsectionError> {
    let w = omega1 + omega2;
    let threshold = m1 + m2;
    if w < threshold {
        return Err(XsectionError::BelowThreshold {
            energy: w,
            threshold,
        });
    }
    let a = w * w - m1 * m1 - m2 * m2;
    let rad = a * a - 4.0 * m1 * m1 * m2 * m2;
    if rad < -1e-12 * w * w * w * w {
        return Err(XsectionError::BelowThreshold {
            energy: w,
            threshold,
        });
    }
    Ok(fmath::sqrt(rad.max(0.0)) / (2.0 * w))
}

// ---------------------------------------------------------------------------
// Differential cross section.
// ---------------------------------------------------------------------------

/// Frame of the supplied kinematics: center-of-momentum inputs are validated,
/// lab inputs are boosted to center-of-momentum before evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    CenterOfMomentum,
    Lab,
}

/// A cross-section evaluation request: the amplitude coefficient, the legs it
/// was evaluated on (1,2 outgoing; 3,4 incoming), the packet scale, and the
/// declared frame.
pub struct CrossSectionInput {
    pub amplitude: AmplitudeResult,
    pub kin: ScatterKinematics,
    pub l: f64,
    pub frame: Frame,
}

/// Center-of-momentum data extracted from four legs: energies
/// (omega1, omega2 incoming; omega3, omega4 outgoing), the incident momentum
/// magnitude rho1, and the outgoing masses.
struct ComFrame {
    omega_in: [f64; 2],
    omega_out: [f64; 2],
    rho1: f64,
    mass_out: [f64; 2],
}

fn com_residual(p: &[OnShellMomentum; 4]) -> f64 {
    let total = p[2].four_vector() + p[3].four_vector();
    total.spatial_norm() / total.e
}

/// Boosts the legs to the center-of-momentum frame of the incident pair.
fn canonicalize(p: &[OnShellMomentum; 4]) -> Result<ComFrame, XsectionError> {
    let total = p[2].four_vector() + p[3].four_vector();
    let s = total.square();
    if s <= 0.0 {
        return Err(XsectionError::BelowThreshold {
            energy: total.e,
            threshold: 0.0,
        });
    }
    let boosted: [FourVector; 4] = if com_residual(p) < 1e-13 {
        [0, 1, 2, 3].map(|k| p[k].four_vector())
    } else {
        let carrier = mass_shell(fmath::sqrt(s), total.spatial(), 1)?;
        let lam: LorentzMatrix = lorentz_from_sl2c(&pure_boost(&carrier)?)?.inverse();
        [0, 1, 2, 3].map(|k| lam.apply(&p[k].four_vector()))
    };
    let rho1 = FourVector::new(0.0, boosted[2].px, boosted[2].py, boosted[2].pz).spatial_norm();
    if rho1 <= 1e-14 * boosted[2].e.max(1.0) {
        return Err(XsectionError::CoincidentMomenta);
    }
    Ok(ComFrame {
        omega_in: [boosted[2].e, boosted[3].e],
        omega_out: [boosted[0].e, boosted[1].e],
        rho1,
        mass_out: [p[0].mass(), p[1].mass()],
    })
}

/// Cancelled closed form for the center-of-momentum differential cross
/// section, from the legs and the squared amplitude coefficient:
/// dsigma/dOmega = (2 pi)^d rho_o^{d-3} omega1 omega2 omega3 omega4 |M|^2
/// / (rho1 (omega3 + omega4)^2), evaluated at rho3 = rho_o, with d = 4.
pub fn dsigma_domega_from_legs(p: &[OnShellMomentum; 4], m_sq: f64) -> Result<f64, XsectionError> {
    let com = canonicalize(p)?;
    let rho_o = rho_out(
        com.omega_in[0],
        com.omega_in[1],
        com.mass_out[0],
        com.mass_out[1],
    )?;
    let out_sum = com.omega_out[0] + com.omega_out[1];
    Ok(fmath::powi(TWO_PI, DIM as i32)
        * fmath::powi(rho_o, (DIM - 3) as i32)
        * com.omega_in[0]
        * com.omega_in[1]
        * com.omega_out[0]
        * com.omega_out[1]
        * m_sq
        / (com.rho1 * out_sum * out_sum))
}

/// Differential cross section for a full input record. Center-of-momentum
/// inputs are validated against the declared frame; lab inputs are boosted.
pub fn dsigma_domega(input: &CrossSectionInput) -> Result<f64, XsectionError> {
    if input.frame == Frame::CenterOfMomentum {
        let residual = com_residual(&input.kin.p);
        if residual > 1e-9 {
            return Err(XsectionError::NotCenterOfMomentum { residual });
        }
    }
    dsigma_domega_from_legs(&input.kin.p, input.amplitude.abs_sq())
}

/// The raw factored coefficient multiplying delta_T(p1+p2-p3-p4) |M|^2
/// dp3 dp4 in the differential cross section, assembled from the flux area,
/// the label measures, the squared-delta reduction, and the state norms.
/// Every L- and T-dependence cancels analytically: the value equals
/// (2 pi)^d / u_alpha.
pub fn scatter_density_prefactor(l: f64, t: f64, u_alpha: f64) -> f64 {
    let mu_pair = projection_measure(l, DIM) * projection_measure(l, DIM);
    let norm_in = fmath::powi(l * l / TWO_PI, (DIM - 1) as i32);
    let norm_out = norm_in;
    flux_area(l, t, u_alpha, DIM) * mu_pair * delta_t_squared_prefactor(l, t, DIM) * TWO_PI
        * TWO_PI
        / (norm_in * norm_out)
}

/// Differential cross section through the raw factored pipeline at explicit
/// packet scale and duration: the density prefactor times the phase-space
/// reduction rho_o omega3 omega4 / (omega3 + omega4) of the energy delta.
/// Agrees with `dsigma_domega` for every (L, T); exposed so the cancellation
/// is auditable.
pub fn dsigma_domega_factored(input: &CrossSectionInput, t: f64) -> Result<f64, XsectionError> {
    if input.frame == Frame::CenterOfMomentum {
        let residual = com_residual(&input.kin.p);
        if residual > 1e-9 {
            return Err(XsectionError::NotCenterOfMomentum { residual });
        }
    }
    let com = canonicalize(&input.kin.p)?;
    let rho_o = rho_out(
        com.omega_in[0],
        com.omega_in[1],
        com.mass_out[0],
        com.mass_out[1],
    )?;
    let out_sum = com.omega_out[0] + com.omega_out[1];
    let u_alpha = com.rho1 * out_sum / (com.omega_in[0] * com.omega_in[1]);
    Ok(scatter_density_prefactor(input.l, t, u_alpha)
        * fmath::powi(rho_o, (DIM - 3) as i32)
        * com.omega_out[0]
        * com.omega_out[1]
        / out_sum
        * input.amplitude.abs_sq())
}

// ---------------------------------------------------------------------------
// Spin-averaged Compton cross sections.
// ---------------------------------------------------------------------------

/// Spin-averaged squared Compton amplitude on explicit legs (photon out,
/// electron out, photon in, electron in): averaged over the 2 incident
/// electron spins and 2 incident transverse photon polarizations, summed
/// over the final ones. Basis independent, hence rotation invariant.
pub fn compton_spin_averaged_abs_sq(
    p: &[OnShellMomentum; 4],
    e: f64,
    provenance: Provenance,
) -> Result<f64, XsectionError> {
    let basis_out = photon_basis(&p[0])?;
    let basis_in = photon_basis(&p[2])?;
    let mut sum = 0.0;
    for eps_out in [&basis_out[1], &basis_out[2]] {
        for eps_in in [&basis_in[1], &basis_in[2]] {
            for spin_out in 0..2 {
                for spin_in in 0..2 {
                    let kin =
                        ComptonKinematics::new(*p, *eps_out, *eps_in, spin_out, spin_in)?;
                    let amp = match provenance {
                        Provenance::Feynman => feynman_compton(&kin, e)?,
                        Provenance::Constructed => constructed_compton(&kin, e)?,
                    };
                    sum += amp.abs_sq();
                }
            }
        }
    }
    Ok(sum / 4.0)
}

/// Spin-averaged Compton differential cross section in the center-of-momentum
/// frame, parameterized by the photon energy rho_hat seen in the incident
/// electron's rest frame and the center-of-momentum scattering angle.
pub fn compton_dsigma_domega(
    m: f64,
    rho_hat: f64,
    theta: f64,
    e: f64,
    provenance: Provenance,
) -> Result<f64, XsectionError> {
    let rho = com_photon_energy(m, rho_hat);
    let p = compton_com_momenta(m, rho, theta, 0.0)?;
    let m_sq = compton_spin_averaged_abs_sq(&p, e, provenance)?;
    dsigma_domega_from_legs(&p, m_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{electron_polarization, transverse_polarization, ElectroModel};
    use crate::kinematics::{boost_z, rotation};
    use crate::scattering::{fractional_error, ChannelTerm};
    use alloc::vec;
    use alloc::vec::Vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Constant-coefficient amplitude wrapper for kinematic-factor tests.
    fn const_amplitude(value: Complex64) -> AmplitudeResult {
        AmplitudeResult {
            value,
            channel_terms: vec![ChannelTerm {
                label: "direct",
                value,
                coefficient: c(1.0, 0.0),
            }],
            provenance: Provenance::Feynman,
        }
    }

    /// Compton legs wrapped into ScatterKinematics with 12-component
    /// polarization vectors (photon out/in transverse, electrons spin 0).
    fn compton_scatter_kinematics(p: [OnShellMomentum; 4]) -> ScatterKinematics {
        let w: Vec<Vec<Complex64>> = [0usize, 1, 2, 3]
            .iter()
            .map(|&k| {
                if p[k].mass() == 0.0 {
                    transverse_polarization(&p[k], c(1.0, 0.0), c(0.0, 0.0))
                        .unwrap()
                        .w
                        .to_vec()
                } else {
                    electron_polarization(&p[k], 0).unwrap().w.to_vec()
                }
            })
            .collect();
        let mut it = w.into_iter();
        ScatterKinematics::new(
            p,
            [
                it.next().unwrap(),
                it.next().unwrap(),
                it.next().unwrap(),
                it.next().unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn bookkeeping_factors_and_idempotence() {
        for l in [3.0, 20.0] {
            let mu = projection_measure(l, 4);
            assert!((mu - fmath::powi(l / fmath::sqrt(TWO_PI), 3)).abs() < 1e-14 * mu);
            let v = flux_volume(l, 4);
            assert!((v - fmath::powi(2.0 * l * fmath::sqrt(fmath::PI), 3)).abs() < 1e-12 * v);
            // P^2 = P at the density level: the normalized overlap kernel
            // integrates to 1 against the label measure.
            assert!(projection_idempotence_residual(l, 4) < 1e-10, "l = {l}");
        }
        // A = V / (T u_alpha).
        let a = flux_area(2.0, 5.0, 0.25, 4);
        assert!((a - flux_volume(2.0, 4) / (5.0 * 0.25)).abs() < 1e-12 * a);
    }

    #[test]
    fn state_norms_overlaps_and_vacuum() {
        let m = 1.0;
        let model = ElectroModel::new(m);
        let l = 7.0;
        let photon = mass_shell(0.0, [0.0, 0.3, 0.8], 1).unwrap();
        let electron = mass_shell(m, [0.1, -0.3, 0.2], 1).unwrap();
        let wp = transverse_polarization(&photon, c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        let we = electron_polarization(&electron, 0).unwrap();

        // Normalized polarizations: ||(p,w)_{i,j}||^2 = (L^2 / 2 pi)^3.
        let norm = state_norm_sq(&model, &[wp.clone(), we.clone()], l).unwrap();
        let expected = fmath::powi(l * l / TWO_PI, 3);
        assert!((norm - expected).abs() < 1e-10 * expected, "{norm} vs {expected}");

        // Coincident momenta are rejected.
        let we2 = electron_polarization(&electron, 1).unwrap();
        assert_eq!(
            state_norm_sq(&model, &[we.clone(), we2], l),
            Err(XsectionError::CoincidentMomenta)
        );

        // Single-particle self overlap = (L / sqrt(2 pi))^3 at normalization.
        let self_overlap = two_point_overlap(&model, &we, &we, l);
        let mu = projection_measure(l, 4);
        assert!((self_overlap - c(mu, 0.0)).norm() < 1e-10 * mu);

        // Distinct momenta: Gaussian falloff exp(-L^2 |dp|^2 / 2) against
        // the bilinear evaluated at the ket momentum.
        let electron_b = mass_shell(m, [0.1, -0.3, 0.5], 1).unwrap();
        let we_b = electron_polarization(&electron_b, 0).unwrap();
        let cross = two_point_overlap(&model, &we, &we_b, l);
        let dm = (&model.d() * &model.m(&electron_b.four_vector())).scale_re(1.0 / TWO_PI);
        let bil = cdot(&we.w, &dm.mul_vec(&we_b.w));
        let gauss = fmath::exp(-0.5 * l * l * 0.3 * 0.3);
        let expected = bil * 2.0 * electron_b.omega() * mu * gauss;
        assert!((cross - expected).norm() < 1e-12 * expected.norm().max(1e-30));

        // Cross-species overlap vanishes (block-diagonal DM).
        let mixed = two_point_overlap(&model, &wp, &we, l);
        assert!(mixed.norm() < 1e-14);

        // Vacuum overlap with a two-particle state is exactly zero.
        assert_eq!(vacuum_two_particle_overlap(), c(0.0, 0.0));
    }

    #[test]
    fn flux_velocity_examples() {
        let m = 0.9;
        // Photon on an electron at rest: u_alpha = 1.
        let photon = mass_shell(0.0, [0.0, 0.0, 0.37], 1).unwrap();
        let rest = mass_shell(m, [0.0, 0.0, 0.0], 1).unwrap();
        assert!((flux_velocity(&photon, &rest) - 1.0).abs() < 1e-14);

        // Both at rest: p1.p2 = m1 m2, vanishing radicand.
        let rest_b = mass_shell(1.3, [0.0, 0.0, 0.0], 1).unwrap();
        assert!(flux_velocity(&rest, &rest_b).abs() < 1e-7);

        // Center-of-momentum consistency: u_alpha = rho1 (w3 + w4) / (w1 w2)
        // using energy conservation.
        let p = compton_com_momenta(m, 0.4, 1.1, 0.3).unwrap();
        let u = flux_velocity(&p[2], &p[3]);
        let expected =
            0.4 * (p[0].omega() + p[1].omega()) / (p[2].omega() * p[3].omega());
        assert!((u - expected).abs() < 1e-13, "{u} vs {expected}");
    }

    #[test]
    fn rho_out_closed_forms_threshold_and_root() {
        // Equal-mass elastic: rho_o = sqrt(omega^2 - m^2).
        let m = 0.7;
        let omega = 1.1;
        let r = rho_out(omega, omega, m, m).unwrap();
        assert!((r - fmath::sqrt(omega * omega - m * m)).abs() < 1e-13);

        // m2 = 0: rho_o = (w^2 - m1^2) / (2 w).
        let (o1, o2, m1) = (1.4, 0.9, 0.8);
        let w = o1 + o2;
        let r = rho_out(o1, o2, m1, 0.0).unwrap();
        assert!((r - (w * w - m1 * m1) / (2.0 * w)).abs() < 1e-13);

        // Threshold: w = m1 + m2 gives rho_o = 0; below errors.
        let r = rho_out(0.6, 0.9, 0.5, 1.0).unwrap();
        assert!(r.abs() < 1e-12);
        assert!(matches!(
            rho_out(0.5, 0.8, 0.9, 1.0),
            Err(XsectionError::BelowThreshold { .. })
        ));

        // Brute-force root of omega3(rho) + omega4(rho) = omega1 + omega2.
        for (o1, o2, m1, m2) in [
            (1.2, 0.8, 0.5, 0.3),
            (2.0, 2.0, 1.0, 1.0),
            (3.1, 0.6, 0.0, 1.7),
            (1.0, 1.0, 0.0, 0.0),
        ] {
            let target = o1 + o2;
            let total = |rho: f64| {
                fmath::sqrt(m1 * m1 + rho * rho) + fmath::sqrt(m2 * m2 + rho * rho)
            };
            let (mut lo, mut hi) = (0.0f64, target);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if total(mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let root = 0.5 * (lo + hi);
            let r = rho_out(o1, o2, m1, m2).unwrap();
            assert!((r - root).abs() < 1e-10, "({o1},{o2},{m1},{m2}): {r} vs {root}");
        }
    }

    #[test]
    fn factored_pipeline_cancels_to_closed_form() {
        // The density prefactor is (2 pi)^4 / u_alpha for every (L, T).
        for (l, t) in [(3.0, 7.0), (11.0, 0.4), (0.6, 120.0)] {
            for u in [0.2, 0.9] {
                let pre = scatter_density_prefactor(l, t, u);
                let expected = fmath::powi(TWO_PI, 4) / u;
                assert!((pre - expected).abs() < 1e-9 * expected, "(l,t)=({l},{t})");
            }
        }

        // Full pipeline agreement on Compton kinematics.
        let m = 1.0;
        let p = compton_com_momenta(m, 0.3, 1.9, 0.0).unwrap();
        let kin = compton_scatter_kinematics(p);
        let input = CrossSectionInput {
            amplitude: const_amplitude(c(0.7, -0.4)),
            kin,
            l: 9.0,
            frame: Frame::CenterOfMomentum,
        };
        let closed = dsigma_domega(&input).unwrap();
        for t in [0.5, 40.0] {
            let raw = dsigma_domega_factored(&input, t).unwrap();
            assert!((raw - closed).abs() < 1e-11 * closed, "t = {t}: {raw} vs {closed}");
        }
    }

    #[test]
    fn constant_amplitude_isotropy_and_frame_handling() {
        let m = 1.0;
        let rho = 0.25;
        let amp = const_amplitude(c(0.3, 0.1));

        // Constant |M| is isotropic in the center-of-momentum frame.
        let reference = dsigma_domega_from_legs(
            &compton_com_momenta(m, rho, 0.4, 0.0).unwrap(),
            amp.abs_sq(),
        )
        .unwrap();
        for theta in [0.9, 1.5708, 2.6] {
            let p = compton_com_momenta(m, rho, theta, 1.1).unwrap();
            let v = dsigma_domega_from_legs(&p, amp.abs_sq()).unwrap();
            assert!((v - reference).abs() < 1e-12 * reference, "theta = {theta}");
        }

        // Lab-frame inputs are boosted to center-of-momentum; the declared
        // center-of-momentum frame rejects boosted kinematics.
        let p = compton_com_momenta(m, rho, 1.3, 0.0).unwrap();
        let lam = lorentz_from_sl2c(&boost_z(0.6)).unwrap();
        let boosted: [OnShellMomentum; 4] = [0, 1, 2, 3].map(|k| {
            let q = lam.apply(&p[k].four_vector());
            mass_shell(p[k].mass(), q.spatial(), 1).unwrap()
        });
        let lab_input = CrossSectionInput {
            amplitude: amp.clone(),
            kin: compton_scatter_kinematics(boosted),
            l: 5.0,
            frame: Frame::Lab,
        };
        let com_input = CrossSectionInput {
            amplitude: amp.clone(),
            kin: compton_scatter_kinematics(p),
            l: 5.0,
            frame: Frame::CenterOfMomentum,
        };
        let lab = dsigma_domega(&lab_input).unwrap();
        let com = dsigma_domega(&com_input).unwrap();
        assert!((lab - com).abs() < 1e-9 * com, "{lab} vs {com}");

        let misdeclared = CrossSectionInput {
            frame: Frame::CenterOfMomentum,
            ..lab_input
        };
        assert!(matches!(
            dsigma_domega(&misdeclared),
            Err(XsectionError::NotCenterOfMomentum { .. })
        ));
    }

    #[test]
    fn feynman_compton_reaches_thomson_shape() {
        // At rho_hat << m the spin-averaged angular distribution approaches
        // the low-energy shape 1 + cos^2(theta).
        let m = 1.0;
        let e = 0.3;
        let rho_hat = 1e-5;
        let half_pi = 0.5 * fmath::PI;
        let reference =
            compton_dsigma_domega(m, rho_hat, half_pi, e, Provenance::Feynman).unwrap();
        for theta in [0.4, 1.0, 2.0, 2.8] {
            let v = compton_dsigma_domega(m, rho_hat, theta, e, Provenance::Feynman).unwrap();
            let shape = 1.0 + fmath::cos(theta) * fmath::cos(theta);
            let ratio = v / reference;
            assert!(
                (ratio - shape).abs() < 1e-3 * shape,
                "theta = {theta}: {ratio} vs {shape}"
            );
        }
    }

    #[test]
    fn constructed_feynman_ratio_bounded_by_fractional_error() {
        let m = 1.0;
        let e = 0.3;
        let theta = 2.0;
        let mut deviations = Vec::new();
        for rho_hat in [1e-5, 1e-4, 1e-3, 1e-2] {
            let f = compton_dsigma_domega(m, rho_hat, theta, e, Provenance::Feynman).unwrap();
            let g =
                compton_dsigma_domega(m, rho_hat, theta, e, Provenance::Constructed).unwrap();
            let dev = (g / f - 1.0).abs();
            // Bounded by a small multiple of the u-channel coefficient error.
            assert!(
                dev < 5.0 * fractional_error(rho_hat, theta, m),
                "rho_hat = {rho_hat}: {dev}"
            );
            deviations.push(dev);
        }
        // Vanishes in the low-energy limit and grows monotonically with
        // the incident energy over the decade sweep.
        assert!(deviations[0] < 1e-4);
        for k in 1..deviations.len() {
            assert!(deviations[k] > deviations[k - 1], "{deviations:?}");
        }
    }

    #[test]
    fn compton_cross_section_is_rotation_invariant() {
        let m = 1.0;
        let e = 0.3;
        let p = compton_com_momenta(m, 0.35, 1.2, 0.7).unwrap();
        let base = compton_spin_averaged_abs_sq(&p, e, Provenance::Feynman).unwrap();
        let base_ds = dsigma_domega_from_legs(&p, base).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for _ in 0..10 {
            let raw: [f64; 3] = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.2..1.0),
            ];
            let n = fmath::sqrt(raw.iter().map(|x| x * x).sum::<f64>());
            let axis = [raw[0] / n, raw[1] / n, raw[2] / n];
            let angle = rng.gen_range(0.1..3.0);
            let lam = lorentz_from_sl2c(&rotation(axis, angle)).unwrap();
            let rotated: [OnShellMomentum; 4] = [0, 1, 2, 3].map(|k| {
                let q = lam.apply(&p[k].four_vector());
                mass_shell(p[k].mass(), q.spatial(), 1).unwrap()
            });
            let m_sq = compton_spin_averaged_abs_sq(&rotated, e, Provenance::Feynman).unwrap();
            assert!((m_sq - base).abs() < 1e-9 * base);
            let ds = dsigma_domega_from_legs(&rotated, m_sq).unwrap();
            assert!((ds - base_ds).abs() < 1e-9 * base_ds);
        }
    }
}
