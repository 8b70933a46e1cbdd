//! Plane-wave-limit scattering machinery: Gaussian delta sequences, the
//! constructed two-in/two-out amplitude built from two-point blocks and
//! Laplace-transform multipliers, Compton amplitudes in the Feynman and
//! constructed variants, and the semidefiniteness verifiers behind the
//! constructed u-channel coefficient.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::cmatrix::CMat;
use crate::dirac::{factor_r, gamma, gamma_star, r_matrix, slash, slash_c, DiracError};
use crate::fields::{fermion_spinors, photon_basis, TwoPointModel, TWO_PI};
use crate::fmath;
use crate::kinematics::{
    lorentz_from_sl2c, mass_shell, minkowski_dot, pure_boost, rotation_aligning, FourVector,
    KinematicsError, OnShellMomentum, Sl2c,
};
use crate::wick::{laplace_b, upsilon, InvariantMeasure, ScalarMeasure, WickError};

#[derive(Debug, Clone, PartialEq)]
pub enum ScatteringError {
    /// The out pair equals the in pair as a set of momenta.
    ForwardKinematics,
    /// p1 + p2 differs from p3 + p4 beyond tolerance.
    ConservationViolated { residual: f64 },
    /// The distinguishable-particle amplitude requires legs 1,3 and 2,4 to
    /// carry the same species with the two species distinct.
    IndistinguishableSetup,
    /// A propagator denominator vanished.
    PropagatorPole { denominator: f64 },
    /// A matrix expected positive semidefinite has a negative eigenvalue.
    NotSemidefinite { min_eigenvalue: f64 },
    /// A matrix expected negative semidefinite has a positive eigenvalue,
    /// or a factorization residual exceeded its ceiling.
    SemidefinitenessViolated { max_value: f64 },
    /// A photon polarization violates the Coulomb or Lorentz condition.
    PolarizationNotTransverse { residual: f64 },
    /// A rest-frame substitution identity failed.
    IdentityViolation { residual: f64 },
    /// The discretized connected four-point form went negative.
    NegativeForm { value: f64 },
    /// A multiplier parameter is out of contract (e.g. |varsigma| != 1).
    InvalidMultiplier { name: &'static str },
    /// An invalid leg configuration (wrong mass pattern, bad spin index).
    InvalidLeg { index: usize },
}

impl fmt::Display for ScatteringError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScatteringError::ForwardKinematics => write!(f, "forward kinematics excluded"),
            ScatteringError::ConservationViolated { residual } => {
                write!(f, "energy-momentum conservation violated (residual {residual})")
            }
            ScatteringError::IndistinguishableSetup => {
                write!(f, "distinguishable two-species setup required")
            }
            ScatteringError::PropagatorPole { denominator } => {
                write!(f, "propagator pole (denominator {denominator})")
            }
            ScatteringError::NotSemidefinite { min_eigenvalue } => {
                write!(f, "not positive semidefinite (min eigenvalue {min_eigenvalue})")
            }
            ScatteringError::SemidefinitenessViolated { max_value } => {
                write!(f, "negative semidefiniteness violated (max value {max_value})")
            }
            ScatteringError::PolarizationNotTransverse { residual } => {
                write!(f, "photon polarization not transverse (residual {residual})")
            }
            ScatteringError::IdentityViolation { residual } => {
                write!(f, "rest-frame identity violated (residual {residual})")
            }
            ScatteringError::NegativeForm { value } => {
                write!(f, "connected four-point form negative ({value})")
            }
            ScatteringError::InvalidMultiplier { name } => {
                write!(f, "invalid multiplier parameter: {name}")
            }
            ScatteringError::InvalidLeg { index } => write!(f, "invalid leg {index}"),
        }
    }
}

impl From<DiracError> for ScatteringError {
    fn from(e: DiracError) -> Self {
        match e {
            DiracError::NotSemidefinite { min_eigenvalue } => {
                ScatteringError::NotSemidefinite { min_eigenvalue }
            }
            DiracError::IdentityViolation { residual, .. } => {
                ScatteringError::IdentityViolation { residual }
            }
            DiracError::NotUnimodular => ScatteringError::InvalidMultiplier { name: "sl2c" },
        }
    }
}

impl From<KinematicsError> for ScatteringError {
    fn from(_: KinematicsError) -> Self {
        ScatteringError::InvalidLeg { index: 0 }
    }
}

impl From<WickError> for ScatteringError {
    fn from(_: WickError) -> Self {
        ScatteringError::InvalidMultiplier { name: "measure" }
    }
}

// ---------------------------------------------------------------------------
// Delta sequences.
// ---------------------------------------------------------------------------

/// Normalized Gaussian delta sequence on 3-momentum:
/// (L/sqrt(pi))^3 exp(-L^2 |p - q|^2); integrates to 1 for every L > 0.
pub fn lsz_delta(l: f64, p: [f64; 3], q: [f64; 3]) -> f64 {
    assert!(l > 0.0, "lsz_delta requires L > 0");
    let d2 = fmath::powi(p[0] - q[0], 2) + fmath::powi(p[1] - q[1], 2) + fmath::powi(p[2] - q[2], 2);
    fmath::powi(l / fmath::sqrt(fmath::PI), 3) * fmath::exp(-l * l * d2)
}

/// Energy-momentum delta sequence for an n-leg process in d spacetime
/// dimensions: sin(E T/2)/(pi E) (L/sqrt(n pi))^{d-1} exp(-L^2 |p|^2 / n),
/// with the E -> 0 limit T/(2 pi).
pub fn delta_t(p: &FourVector, l: f64, t: f64, n: usize, d: usize) -> f64 {
    assert!(l > 0.0 && t > 0.0 && n > 0 && d >= 2);
    let e = p.e;
    let x = e * t / 2.0;
    // sin(E T/2)/(pi E) with a series switch near the removable singularity.
    let sinc = if fmath::abs(x) < 1e-6 {
        (t / (2.0 * fmath::PI)) * (1.0 - x * x / 6.0)
    } else {
        fmath::sin(x) / (fmath::PI * e)
    };
    let spatial2 = p.px * p.px + p.py * p.py + p.pz * p.pz;
    let gauss = fmath::powi(l / fmath::sqrt(n as f64 * fmath::PI), d as i32 - 1)
        * fmath::exp(-l * l * spatial2 / n as f64);
    sinc * gauss
}

/// Coefficient in the distributional squared-delta identity
/// delta_T^2 = (T/2 pi) (L/(2 sqrt(pi)))^{d-1} delta_T for four-leg
/// sequences; the identity is exact at p = 0.
pub fn delta_t_squared_prefactor(l: f64, t: f64, d: usize) -> f64 {
    (t / (2.0 * fmath::PI)) * fmath::powi(l / (2.0 * fmath::sqrt(fmath::PI)), d as i32 - 1)
}

// ---------------------------------------------------------------------------
// Amplitude containers.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Feynman,
    Constructed,
}

#[derive(Debug, Clone)]
pub struct ChannelTerm {
    pub label: &'static str,
    pub value: Complex64,
    /// The scalar channel coefficient multiplying the matrix element
    /// (propagator coefficient for Compton channels).
    pub coefficient: Complex64,
}

/// The coefficient M of the energy-momentum conserving delta in a two-in,
/// two-out transition amplitude; `value` equals the sum of channel terms.
#[derive(Debug, Clone)]
pub struct AmplitudeResult {
    pub value: Complex64,
    pub channel_terms: Vec<ChannelTerm>,
    pub provenance: Provenance,
}

impl AmplitudeResult {
    /// |M|^2, the only quantity cross sections depend on.
    pub fn abs_sq(&self) -> f64 {
        self.value.norm_sqr()
    }

    /// Residual of the sum-of-terms identity (diagnostic).
    pub fn terms_sum_residual(&self) -> f64 {
        let sum: Complex64 = self.channel_terms.iter().map(|t| t.value).sum();
        (sum - self.value).norm()
    }
}

// ---------------------------------------------------------------------------
// Generic constructed amplitude.
// ---------------------------------------------------------------------------

/// Multiplier data for the constructed amplitude: the invariant function U_2,
/// the Laplace-transform measure feeding Upsilon and (DB), the scalar measure
/// feeding the beta coefficients, the coupling c_4, and the unit-modulus
/// two-point phase varsigma_2.
pub struct MultiplierSpec {
    pub u2: Box<dyn Fn(&FourVector) -> Complex64>,
    pub upsilon_measure: InvariantMeasure,
    pub beta_measure: ScalarMeasure,
    pub c4: f64,
    pub varsigma2: Complex64,
}

impl MultiplierSpec {
    pub fn new(
        u2: Box<dyn Fn(&FourVector) -> Complex64>,
        upsilon_measure: InvariantMeasure,
        beta_measure: ScalarMeasure,
        c4: f64,
        varsigma2: Complex64,
    ) -> Result<Self, ScatteringError> {
        if fmath::abs(varsigma2.norm() - 1.0) > 1e-12 {
            return Err(ScatteringError::InvalidMultiplier { name: "varsigma2" });
        }
        Ok(MultiplierSpec {
            u2,
            upsilon_measure,
            beta_measure,
            c4,
            varsigma2,
        })
    }
}

/// Two-in, two-out kinematics: legs 1,2 outgoing and 3,4 incoming, with
/// component coefficient vectors w_j matching the model dimension.
/// Energy-momentum conservation p1 + p2 = p3 + p4 is enforced at
/// construction.
#[derive(Debug, Clone)]
pub struct ScatterKinematics {
    pub p: [OnShellMomentum; 4],
    pub w: [Vec<Complex64>; 4],
}

fn conservation_residual(p: &[OnShellMomentum; 4]) -> f64 {
    let d = (p[0].four_vector() + p[1].four_vector()) - (p[2].four_vector() + p[3].four_vector());
    let scale = p.iter().map(|q| q.omega()).fold(1.0, f64::max);
    [d.e, d.px, d.py, d.pz]
        .iter()
        .map(|x| fmath::abs(*x))
        .fold(0.0, f64::max)
        / scale
}

impl ScatterKinematics {
    pub fn new(p: [OnShellMomentum; 4], w: [Vec<Complex64>; 4]) -> Result<Self, ScatteringError> {
        let residual = conservation_residual(&p);
        if residual > 1e-10 {
            return Err(ScatteringError::ConservationViolated { residual });
        }
        let n = w[0].len();
        if w.iter().any(|v| v.len() != n) {
            return Err(ScatteringError::InvalidLeg { index: 0 });
        }
        Ok(ScatterKinematics { p, w })
    }

    /// True when the out pair equals the in pair as a set of momenta.
    pub fn is_forward(&self) -> bool {
        let close = |a: &OnShellMomentum, b: &OnShellMomentum| {
            let (sa, sb) = (a.spatial(), b.spatial());
            let scale = 1.0 + a.spatial_norm().max(b.spatial_norm());
            (0..3).all(|i| fmath::abs(sa[i] - sb[i]) < 1e-9 * scale)
                && fmath::abs(a.mass() - b.mass()) < 1e-9 * scale
        };
        (close(&self.p[0], &self.p[2]) && close(&self.p[1], &self.p[3]))
            || (close(&self.p[0], &self.p[3]) && close(&self.p[1], &self.p[2]))
    }
}

/// Leg-exchange sign inside the signed symmetrizations: -1 when both
/// component indices are fermionic, +1 otherwise.
fn swap_sign(k_a: usize, k_b: usize, n_bosons: usize) -> f64 {
    if k_a >= n_bosons && k_b >= n_bosons {
        -1.0
    } else {
        1.0
    }
}

/// The constructed two-in, two-out amplitude: the two-point product term
/// conj(U2 M)(p1-p2) (U2 M)(p3-p4) plus the two beta Upsilon (DB) exchange
/// products, symmetrized with fermionic signs over legs (1,2) and (3,4),
/// contracted with conj(w1) conj(w2) w3 w4, with overall prefactor
/// -i (2 pi)^3 c4 |varsigma2|^2 / 4.
pub fn constructed_amplitude<M: TwoPointModel>(
    kin: &ScatterKinematics,
    spec: &MultiplierSpec,
    model: &M,
) -> Result<AmplitudeResult, ScatteringError> {
    if kin.is_forward() {
        return Err(ScatteringError::ForwardKinematics);
    }
    let nc = model.n_components();
    if kin.w[0].len() != nc {
        return Err(ScatteringError::InvalidLeg { index: 0 });
    }
    let nb = model.n_bosons();
    let pv: [FourVector; 4] = [
        kin.p[0].four_vector(),
        kin.p[1].four_vector(),
        kin.p[2].four_vector(),
        kin.p[3].four_vector(),
    ];

    // Precompute M at the signed out/in differences and (DB), Upsilon at the
    // four out+in sums (all in the forward cone for positive-energy shells).
    let m_out = [model.m(&(pv[0] - pv[1])), model.m(&(pv[1] - pv[0]))];
    let m_in = [model.m(&(pv[2] - pv[3])), model.m(&(pv[3] - pv[2]))];
    let u2 = |p: &FourVector| (spec.u2)(p);
    let d = model.d();
    // Index (a, b) with a in {0,1} (out legs) and b in {2,3} (in legs).
    let idx = |a: usize, b: usize| a * 2 + (b - 2);
    let mut db: Vec<CMat> = Vec::with_capacity(4);
    let mut ups = [0.0f64; 4];
    for a in 0..2 {
        for b in 2..4 {
            let s = pv[a] + pv[b];
            db.push(&d * &laplace_b(model, &spec.upsilon_measure, &s)?);
            ups[idx(a, b)] = upsilon(&spec.upsilon_measure, &s)?;
        }
    }
    let b2 = crate::wick::beta(&spec.beta_measure, 2);
    let b3 = crate::wick::beta(&spec.beta_measure, 3);
    let b4 = crate::wick::beta(&spec.beta_measure, 4);

    let mut direct = Complex64::new(0.0, 0.0);
    let mut exch_a = Complex64::new(0.0, 0.0);
    let mut exch_b = Complex64::new(0.0, 0.0);
    for k1 in 0..nc {
        for k2 in 0..nc {
            for k3 in 0..nc {
                for k4 in 0..nc {
                    let wgt = kin.w[0][k1].conj()
                        * kin.w[1][k2].conj()
                        * kin.w[2][k3]
                        * kin.w[3][k4];
                    if wgt.norm_sqr() == 0.0 {
                        continue;
                    }
                    // Signed symmetrizations over the out pair and the in
                    // pair: slots hold (leg index, component index).
                    for (swap12, s12) in [(false, 1.0), (true, swap_sign(k1, k2, nb))] {
                        for (swap34, s34) in [(false, 1.0), (true, swap_sign(k3, k4, nb))] {
                            let sign = s12 * s34;
                            let (a1, ka, a2, kb) = if swap12 {
                                (1, k2, 0, k1)
                            } else {
                                (0, k1, 1, k2)
                            };
                            let (c1, kc, c2, kd) = if swap34 {
                                (3, k4, 2, k3)
                            } else {
                                (2, k3, 3, k4)
                            };
                            // Two-point product term.
                            let mo = &m_out[swap12 as usize];
                            let mi = &m_in[swap34 as usize];
                            let t1 = (u2(&(pv[a1] - pv[a2])) * mo[(ka, kb)]).conj()
                                * u2(&(pv[c1] - pv[c2]))
                                * mi[(kc, kd)];
                            // Exchange products pairing (slot1, slot3) with
                            // (slot2, slot4) and (slot1, slot4) with
                            // (slot2, slot3).
                            let t2 = b2
                                * ups[idx(a1, c1)]
                                * db[idx(a1, c1)][(ka, kc)]
                                * (b4 * ups[idx(a2, c2)])
                                * db[idx(a2, c2)][(kb, kd)];
                            let t3 = b3
                                * ups[idx(a1, c2)]
                                * db[idx(a1, c2)][(ka, kd)]
                                * (b3 * ups[idx(a2, c1)])
                                * db[idx(a2, c1)][(kb, kc)];
                            direct += wgt * sign * t1;
                            exch_a += wgt * sign * t2;
                            exch_b += wgt * sign * t3;
                        }
                    }
                }
            }
        }
    }
    let pref = Complex64::new(0.0, -1.0)
        * fmath::powi(TWO_PI, 3)
        * spec.c4
        * (spec.varsigma2.norm_sqr() / 4.0);
    let terms = vec![
        ChannelTerm {
            label: "direct",
            value: pref * direct,
            coefficient: pref,
        },
        ChannelTerm {
            label: "exchange-a",
            value: pref * exch_a,
            coefficient: pref,
        },
        ChannelTerm {
            label: "exchange-b",
            value: pref * exch_b,
            coefficient: pref,
        },
    ];
    Ok(AmplitudeResult {
        value: pref * (direct + exch_a + exch_b),
        channel_terms: terms,
        provenance: Provenance::Constructed,
    })
}

// ---------------------------------------------------------------------------
// Distinguishable-particle scalar amplitude.
// ---------------------------------------------------------------------------

/// Scalar two-species kinematics: legs 1,3 carry species a and legs 2,4
/// species b with a != b (distinguishable particles).
#[derive(Debug, Clone)]
pub struct ScalarKinematics {
    pub p: [OnShellMomentum; 4],
    pub species: [u8; 4],
}

impl ScalarKinematics {
    pub fn new(p: [OnShellMomentum; 4], species: [u8; 4]) -> Result<Self, ScatteringError> {
        let residual = conservation_residual(&p);
        if residual > 1e-10 {
            return Err(ScatteringError::ConservationViolated { residual });
        }
        if species[0] != species[2] || species[1] != species[3] || species[0] == species[1] {
            return Err(ScatteringError::IndistinguishableSetup);
        }
        Ok(ScalarKinematics { p, species })
    }
}

/// Distinguishable-particle amplitude
/// M = (-i (2 pi)^3 c4 / sqrt(w1 w2 w3 w4)) [conj(U_s(p1-p2)) U_s(p3-p4)
/// + upsilon_a + upsilon_b], with the optional additive exchange terms
/// passed through unchanged.
pub fn scalar_amplitude(
    kin: &ScalarKinematics,
    u_s: &dyn Fn(&FourVector) -> Complex64,
    upsilon_a: Complex64,
    upsilon_b: Complex64,
    c4: f64,
) -> Result<AmplitudeResult, ScatteringError> {
    let root = fmath::sqrt(
        kin.p[0].omega() * kin.p[1].omega() * kin.p[2].omega() * kin.p[3].omega(),
    );
    let pref = Complex64::new(0.0, -1.0) * fmath::powi(TWO_PI, 3) * c4 / root;
    let direct = u_s(&(kin.p[0].four_vector() - kin.p[1].four_vector())).conj()
        * u_s(&(kin.p[2].four_vector() - kin.p[3].four_vector()));
    let terms = vec![
        ChannelTerm {
            label: "direct",
            value: pref * direct,
            coefficient: pref,
        },
        ChannelTerm {
            label: "exchange-a",
            value: pref * upsilon_a,
            coefficient: pref,
        },
        ChannelTerm {
            label: "exchange-b",
            value: pref * upsilon_b,
            coefficient: pref,
        },
    ];
    Ok(AmplitudeResult {
        value: pref * (direct + upsilon_a + upsilon_b),
        channel_terms: terms,
        provenance: Provenance::Constructed,
    })
}

// ---------------------------------------------------------------------------
// Compton kinematics and amplitudes.
// ---------------------------------------------------------------------------

fn mdot_c(p: &FourVector, w: &[Complex64; 4]) -> Complex64 {
    w[0] * p.e - w[1] * p.px - w[2] * p.py - w[3] * p.pz
}

fn conj4(w: &[Complex64; 4]) -> [Complex64; 4] {
    [w[0].conj(), w[1].conj(), w[2].conj(), w[3].conj()]
}

/// Contraction sum_k w_k gamma_k (plain gammas; `slash_c` contracts with the
/// starred gammas).
fn slash_plain(w: &[Complex64; 4]) -> CMat {
    slash_c(&[w[0], -w[1], -w[2], -w[3]])
}

/// Coulomb (w_0 = 0) plus Lorentz (p.w = 0) residual, relative to the
/// polarization scale.
pub fn transversality_residual(p: &OnShellMomentum, eps: &[Complex64; 4]) -> f64 {
    let scale = eps.iter().map(|z| z.norm()).fold(0.0, f64::max) * (1.0 + p.omega());
    if scale == 0.0 {
        return 0.0;
    }
    let coulomb = eps[0].norm();
    let lorentz = mdot_c(&p.four_vector(), eps).norm();
    coulomb.max(lorentz) / scale
}

/// Compton legs: 1 = outgoing photon, 2 = outgoing electron, 3 = incoming
/// photon, 4 = incoming electron, with transverse photon polarization
/// vectors and rest-frame electron spin labels in {0, 1}.
#[derive(Debug, Clone)]
pub struct ComptonKinematics {
    pub p: [OnShellMomentum; 4],
    pub eps_out: [Complex64; 4],
    pub eps_in: [Complex64; 4],
    pub spin_out: usize,
    pub spin_in: usize,
}

impl ComptonKinematics {
    pub fn new(
        p: [OnShellMomentum; 4],
        eps_out: [Complex64; 4],
        eps_in: [Complex64; 4],
        spin_out: usize,
        spin_in: usize,
    ) -> Result<Self, ScatteringError> {
        let residual = conservation_residual(&p);
        if residual > 1e-10 {
            return Err(ScatteringError::ConservationViolated { residual });
        }
        if p[0].mass() != 0.0 {
            return Err(ScatteringError::InvalidLeg { index: 1 });
        }
        if p[2].mass() != 0.0 {
            return Err(ScatteringError::InvalidLeg { index: 3 });
        }
        if p[1].mass() <= 0.0 || fmath::abs(p[1].mass() - p[3].mass()) > 1e-12 * p[1].mass() {
            return Err(ScatteringError::InvalidLeg { index: 2 });
        }
        if spin_out > 1 || spin_in > 1 {
            return Err(ScatteringError::InvalidLeg { index: 2 });
        }
        for (q, eps) in [(&p[0], &eps_out), (&p[2], &eps_in)] {
            let r = transversality_residual(q, eps);
            if r > 1e-9 {
                return Err(ScatteringError::PolarizationNotTransverse { residual: r });
            }
        }
        Ok(ComptonKinematics {
            p,
            eps_out,
            eps_in,
            spin_out,
            spin_in,
        })
    }

    pub fn mass(&self) -> f64 {
        self.p[1].mass()
    }
}

/// Center-of-momentum Compton kinematics: incoming photon of energy rho
/// along +z, incoming electron opposite, photon scattered to polar angle
/// theta (equal to the angle between the electron momenta) and azimuth phi.
pub fn compton_com_momenta(
    m: f64,
    rho: f64,
    theta: f64,
    phi: f64,
) -> Result<[OnShellMomentum; 4], ScatteringError> {
    if m <= 0.0 || rho <= 0.0 {
        return Err(ScatteringError::InvalidLeg { index: 0 });
    }
    let n = [
        rho * fmath::sin(theta) * fmath::cos(phi),
        rho * fmath::sin(theta) * fmath::sin(phi),
        rho * fmath::cos(theta),
    ];
    let p1 = mass_shell(0.0, n, 1)?;
    let p2 = mass_shell(m, [-n[0], -n[1], -n[2]], 1)?;
    let p3 = mass_shell(0.0, [0.0, 0.0, rho], 1)?;
    let p4 = mass_shell(m, [0.0, 0.0, -rho], 1)?;
    Ok([p1, p2, p3, p4])
}

/// Center-of-momentum photon energy rho from the photon energy rho_hat seen
/// in the rest frame of the paired electron: rho = m rho_hat /
/// sqrt(m^2 + 2 m rho_hat).
pub fn com_photon_energy(m: f64, rho_hat: f64) -> f64 {
    m * rho_hat / fmath::sqrt(m * m + 2.0 * m * rho_hat)
}

/// Photon energy in the paired electron's rest frame from the
/// center-of-momentum photon energy: m rho_hat = rho (rho + sqrt(m^2+rho^2)).
pub fn rest_frame_photon_energy(m: f64, rho: f64) -> f64 {
    rho * (rho + fmath::sqrt(m * m + rho * rho)) / m
}

/// Fractional deviation of the constructed u-channel coefficient from the
/// Feynman one: rho_hat (1 - cos theta) / (m + 2 rho_hat), with theta the
/// center-of-momentum angle between the electron momenta and rho_hat the
/// photon energy in the paired electron's rest frame.
pub fn fractional_error(rho_hat: f64, theta: f64, m: f64) -> f64 {
    rho_hat * (1.0 - fmath::cos(theta)) / (m + 2.0 * rho_hat)
}

/// Core Compton matrix element for explicit spinor states. The u-channel
/// coefficient is 1/((p4-p1)^2 - m^2) for the Feynman variant and
/// -1/(2 p1.p2) for the constructed one; the s-channel coefficient is
/// 1/((p1+p2)^2 - m^2) = 1/(2 p1.p2) in both.
#[allow(clippy::too_many_arguments)]
pub fn compton_with_states(
    p1: &FourVector,
    p2: &FourVector,
    p4: &FourVector,
    m: f64,
    eps_out: &[Complex64; 4],
    eps_in: &[Complex64; 4],
    u2: &[Complex64; 4],
    u4: &[Complex64; 4],
    e: f64,
    provenance: Provenance,
) -> Result<AmplitudeResult, ScatteringError> {
    let s_denom = (*p1 + *p2).square() - m * m;
    let u_denom = (*p4 - *p1).square() - m * m;
    let guard = 1e-12 * m * m;
    if fmath::abs(s_denom) < guard {
        return Err(ScatteringError::PropagatorPole { denominator: s_denom });
    }
    if fmath::abs(u_denom) < guard {
        return Err(ScatteringError::PropagatorPole { denominator: u_denom });
    }
    let s_coeff = 1.0 / s_denom;
    let u_coeff = match provenance {
        Provenance::Feynman => 1.0 / u_denom,
        // Same magnitude as the s-channel coefficient but negative,
        // preserving the semidefinite u-channel factorization.
        Provenance::Constructed => -1.0 / s_denom,
    };

    let sl_in = slash_c(eps_in);
    let sl_out_bar = slash_c(&conj4(eps_out));
    let g0 = gamma(0);
    let r_u = r_matrix(&(*p4 - *p1), m);
    let r_s = r_matrix(&(*p1 + *p2), m);
    // conj(u2)^T gamma_0 (eps_in_slash R_u gamma_0 conj_eps_out_slash
    //                   + conj_eps_out_slash R_s gamma_0 eps_in_slash) u4.
    let k_u = &(&(&sl_in * &r_u) * &g0) * &sl_out_bar;
    let k_s = &(&(&sl_out_bar * &r_s) * &g0) * &sl_in;
    let u2c = conj4(u2);
    let row = |k: &CMat| -> Complex64 {
        let v = (&g0 * k).mul_vec(u4);
        u2c.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
    };
    let norm = e * e / fmath::powi(TWO_PI, 3);
    let s_val = norm * s_coeff * row(&k_s);
    let u_val = norm * u_coeff * row(&k_u);
    let i = Complex64::new(0.0, 1.0);
    let (s_coefficient, u_coefficient) = match provenance {
        Provenance::Feynman => (i * e * e * s_coeff, i * e * e * u_coeff),
        Provenance::Constructed => (
            Complex64::new(e * e * s_coeff, 0.0),
            Complex64::new(e * e * u_coeff, 0.0),
        ),
    };
    Ok(AmplitudeResult {
        value: s_val + u_val,
        channel_terms: vec![
            ChannelTerm {
                label: "s-channel",
                value: s_val,
                coefficient: s_coefficient,
            },
            ChannelTerm {
                label: "u-channel",
                value: u_val,
                coefficient: u_coefficient,
            },
        ],
        provenance,
    })
}

fn compton_amplitude(
    kin: &ComptonKinematics,
    e: f64,
    provenance: Provenance,
) -> Result<AmplitudeResult, ScatteringError> {
    let m = kin.mass();
    let u2 = fermion_spinors(&kin.p[1])
        .map_err(|_| ScatteringError::InvalidLeg { index: 2 })?
        .u[kin.spin_out];
    let u4 = fermion_spinors(&kin.p[3])
        .map_err(|_| ScatteringError::InvalidLeg { index: 4 })?
        .u[kin.spin_in];
    compton_with_states(
        &kin.p[0].four_vector(),
        &kin.p[1].four_vector(),
        &kin.p[3].four_vector(),
        m,
        &kin.eps_out,
        &kin.eps_in,
        &u2,
        &u4,
        e,
        provenance,
    )
}

/// First contributing Feynman-series Compton amplitude.
pub fn feynman_compton(kin: &ComptonKinematics, e: f64) -> Result<AmplitudeResult, ScatteringError> {
    compton_amplitude(kin, e, Provenance::Feynman)
}

/// Constructed Compton amplitude: identical s-channel, with the u-channel
/// propagator coefficient replaced by -1/(2 p1.p2) so that the connected
/// four-point form factorizes semidefinitely.
pub fn constructed_compton(
    kin: &ComptonKinematics,
    e: f64,
) -> Result<AmplitudeResult, ScatteringError> {
    compton_amplitude(kin, e, Provenance::Constructed)
}

// ---------------------------------------------------------------------------
// Semidefiniteness verifiers.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SChannelReport {
    pub min_eigenvalue: f64,
    pub reconstruction_residual: f64,
}

/// Positive-semidefinite factorization R(p, m) = C_e^* C_e for the s-channel
/// matrix; errors with NotSemidefinite for spacelike or negative-energy p.
pub fn verify_s_channel(p: &FourVector, m: f64) -> Result<(CMat, SChannelReport), ScatteringError> {
    let r = r_matrix(p, m);
    let scale = r.frobenius_norm().max(1.0);
    let min_eigenvalue = r.min_eigenvalue();
    if min_eigenvalue < -1e-10 * scale {
        return Err(ScatteringError::NotSemidefinite { min_eigenvalue });
    }
    let c = factor_r(p, m)?;
    let reconstruction_residual = (&(&c.adjoint() * &c) - &r).frobenius_norm() / scale;
    if reconstruction_residual > 1e-10 {
        return Err(ScatteringError::NotSemidefinite { min_eigenvalue });
    }
    Ok((
        c,
        SChannelReport {
            min_eigenvalue,
            reconstruction_residual,
        },
    ))
}

/// 16x16 block matrix [gamma_i R(q, m) gamma_j^*] with 4x4 blocks indexed by
/// the row gamma i and the column starred gamma j.
pub fn gamma_sandwich_matrix(q: &FourVector, m: f64) -> CMat {
    let r = r_matrix(q, m);
    let mut k = CMat::zeros(16, 16);
    for i in 0..4 {
        let gi = gamma(i);
        for j in 0..4 {
            let block = &(&gi * &r) * &gamma_star(j);
            k.set_block(4 * i, 4 * j, &block);
        }
    }
    k
}

/// chi_3 = -i gamma_1 gamma_2^* = diag(sigma_3, sigma_3).
pub fn chi3() -> CMat {
    (&gamma(1) * &gamma_star(2)).scale(Complex64::new(0.0, -1.0))
}

#[derive(Debug, Clone)]
pub struct UChannelReport {
    /// Largest eigenvalue of the full 16x16 matrix (expected <= 0).
    pub max_eigenvalue: f64,
    /// Largest transverse-contracted quadratic form value (expected <= 0).
    pub transverse_form: f64,
    /// Selected-frame 8x8 block-structure residual against
    /// [[R, i chi3 R], [-i R chi3, R]].
    pub structure_residual: f64,
    /// ||C_x^* C_x - (-K_8x8)|| relative residual.
    pub reconstruction_residual: f64,
}

/// Verifies negative semidefiniteness of [gamma_i R(-(p1+p2), m) gamma_j^*]
/// and produces the selected-frame upper-triangular factor C_x with
/// C_x^* C_x reconstructing the negated contributing 8x8 block.
pub fn verify_u_channel(
    p1: &OnShellMomentum,
    p2: &OnShellMomentum,
    eps: &[Complex64; 4],
) -> Result<(CMat, UChannelReport), ScatteringError> {
    let tr = transversality_residual(p1, eps);
    if tr > 1e-9 {
        return Err(ScatteringError::PolarizationNotTransverse { residual: tr });
    }
    let m = p2.mass();
    let q = -(p1.four_vector() + p2.four_vector());
    let k = gamma_sandwich_matrix(&q, m);
    let scale = k.frobenius_norm().max(1.0);
    let (eigs, _) = k.hermitian_eigen();
    let max_eigenvalue = eigs[eigs.len() - 1];
    if max_eigenvalue > 1e-10 * scale {
        return Err(ScatteringError::SemidefinitenessViolated {
            max_value: max_eigenvalue,
        });
    }
    // Quadratic forms with transverse-polarization-contracted vectors
    // x_{(i, alpha)} = eps_i psi_alpha over a fixed spinor sample set.
    let mut transverse_form = f64::NEG_INFINITY;
    for psi in &spinor_samples() {
        let mut x = vec![Complex64::new(0.0, 0.0); 16];
        for i in 0..4 {
            for a in 0..4 {
                x[4 * i + a] = eps[i] * psi[a];
            }
        }
        let kx = k.mul_vec(&x);
        let form: Complex64 = x.iter().zip(kx.iter()).map(|(a, b)| a.conj() * b).sum();
        transverse_form = transverse_form.max(form.re);
    }
    if transverse_form > 1e-10 * scale {
        return Err(ScatteringError::SemidefinitenessViolated {
            max_value: transverse_form,
        });
    }

    // Selected frame: electron at rest and photon along +z with energy
    // rho_hat = p1.p2 / m (invariant under the canonicalizing transform).
    let rho_hat = minkowski_dot(&p1.four_vector(), &p2.four_vector()) / m;
    let p_sum = FourVector::new(m + rho_hat, 0.0, 0.0, rho_hat);
    let k_sel = gamma_sandwich_matrix(&-p_sum, m);
    // Negated contributing 8x8 principal submatrix over gamma indices {1, 2}.
    let mut neg8 = CMat::zeros(8, 8);
    for (bi, gi) in [1usize, 2].iter().enumerate() {
        for (bj, gj) in [1usize, 2].iter().enumerate() {
            let block = k_sel.block(4 * gi, 4 * gj, 4, 4).scale_re(-1.0);
            neg8.set_block(4 * bi, 4 * bj, &block);
        }
    }
    let r_sel = r_matrix(&p_sum, m);
    let x3 = chi3();
    let i = Complex64::new(0.0, 1.0);
    let mut expected = CMat::zeros(8, 8);
    expected.set_block(0, 0, &r_sel);
    expected.set_block(4, 4, &r_sel);
    expected.set_block(0, 4, &(&x3 * &r_sel).scale(i));
    expected.set_block(4, 0, &(&r_sel * &x3).scale(-i));
    let scale8 = neg8.frobenius_norm().max(1.0);
    let structure_residual = (&neg8 - &expected).frobenius_norm() / scale8;
    // Upper-triangular factor C_x = [[C_e, i (C_e^*)^{-1} chi3 R], [0, 0]].
    let c_e = factor_r(&p_sum, m)?;
    let c_e_star_inv = c_e
        .adjoint()
        .inverse()
        .ok_or(ScatteringError::SemidefinitenessViolated { max_value: 0.0 })?;
    let mut c_x = CMat::zeros(8, 8);
    c_x.set_block(0, 0, &c_e);
    c_x.set_block(0, 4, &(&(&c_e_star_inv * &x3) * &r_sel).scale(i));
    let reconstruction_residual = (&(&c_x.adjoint() * &c_x) - &neg8).frobenius_norm() / scale8;
    if reconstruction_residual > 1e-10 || structure_residual > 1e-10 {
        return Err(ScatteringError::SemidefinitenessViolated {
            max_value: structure_residual.max(reconstruction_residual),
        });
    }
    Ok((
        c_x,
        UChannelReport {
            max_eigenvalue,
            transverse_form,
            structure_residual,
            reconstruction_residual,
        },
    ))
}

fn spinor_samples() -> [[Complex64; 4]; 6] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let h = Complex64::new(0.5, 0.0);
    [
        [one, z, z, z],
        [z, one, z, z],
        [z, z, one, z],
        [z, z, z, one],
        [h, h * i, h, -h],
        [h * i, h, -h * i, h],
    ]
}

// ---------------------------------------------------------------------------
// Rest-frame substitution identity.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RestFrameReport {
    /// ||(p_slash + m) w_eps_slash (p_slash + m)^*|| at rest for the spatial
    /// polarization contraction.
    pub rest_zero_residual: f64,
    /// Residual of replacing the exchange-channel matrix by the massless
    /// photon-leg matrix in the sandwich.
    pub photon_leg_residual: f64,
    /// Residual of replacing the exchange-channel matrix by the matrix built
    /// from the incident pair difference.
    pub substitution_residual: f64,
}

impl RestFrameReport {
    pub fn max_residual(&self) -> f64 {
        self.rest_zero_residual
            .max(self.photon_leg_residual)
            .max(self.substitution_residual)
    }
}

/// Verifies the rest-frame vanishing (q_slash + m) w_eps_slash
/// (q_slash + m)^* = 0 for spatial polarization contractions at rest, and the
/// sandwich substitution identities
/// (q2_slash + m) G_1 R(q4 - q1, m) G_3^* (q4_slash + m)^*
///   = (q2_slash + m) G_1 R(-q1, 0) G_3^* (q4_slash + m)^*
///   = (q2_slash + m) G_1 R(q2 - q1, m) G_3^* (q4_slash + m)^*
/// where q1, q2 are the incoming photon and electron (legs 2, 3 of the
/// kinematics array), q3, q4 the outgoing photon and electron (legs 0, 1),
/// G_1 the plain-gamma contraction of eps_in, and G_3^* the starred
/// contraction of conj(eps_out).
///
/// The sandwich is evaluated in the frame given by the caller. The equality
/// chain holds exactly at collinear configurations in the incoming
/// electron's rest frame (photons along the +z/-z axis, polarizations with
/// zero time component and zero z component) and at every covariant
/// transport of such a configuration: momenta moved by a Lorentz matrix and
/// polarizations moved as four-vectors by the same matrix. Polarizations
/// violating the four-transversality condition break the chain and are
/// reported as identity violations.
pub fn verify_rest_frame_identity(
    p: &[OnShellMomentum; 4],
    eps_out: &[Complex64; 4],
    eps_in: &[Complex64; 4],
    tol: f64,
) -> Result<RestFrameReport, ScatteringError> {
    let residual = conservation_residual(p);
    if residual > 1e-10 {
        return Err(ScatteringError::ConservationViolated { residual });
    }
    let m = p[3].mass();
    let qv1 = p[2].four_vector();
    let qv2 = p[3].four_vector();
    let qv4 = p[1].four_vector();

    // Rest-frame zero: the statement is purely about the spatial structure
    // of the contraction at a rest momentum, for any spatial polarization.
    let rest = FourVector::new(m, 0.0, 0.0, 0.0);
    let proj = &slash(&rest) + &CMat::identity(4).scale_re(m);
    let zero = Complex64::new(0.0, 0.0);
    let mut rest_zero_residual = 0.0f64;
    for eps in [eps_out, eps_in] {
        let w_eps = slash_c(&[zero, eps[1], eps[2], eps[3]]);
        let r = (&(&proj * &w_eps) * &proj.adjoint()).frobenius_norm()
            / fmath::powi(proj.frobenius_norm(), 2).max(1.0);
        rest_zero_residual = rest_zero_residual.max(r);
    }

    // Sandwich identities in the caller's frame: incoming electron adjacent
    // to the incoming photon's contraction, outgoing electron adjacent to
    // the outgoing photon's starred contraction.
    let left = &(&slash(&qv2) + &CMat::identity(4).scale_re(m)) * &slash_plain(eps_in);
    let right = &slash_c(&conj4(eps_out)) * &(&slash(&qv4) + &CMat::identity(4).scale_re(m)).adjoint();
    let sandwich = |r: &CMat| -> CMat { &(&left * r) * &right };
    let a = sandwich(&r_matrix(&(qv4 - qv1), m));
    let b = sandwich(&r_matrix(&(qv2 - qv1), m));
    let c0 = sandwich(&r_matrix(&-qv1, 0.0));
    let scale = a.frobenius_norm().max(c0.frobenius_norm()).max(1.0);
    let photon_leg_residual = (&a - &c0).frobenius_norm() / scale;
    let substitution_residual = (&a - &b).frobenius_norm() / scale;
    let report = RestFrameReport {
        rest_zero_residual,
        photon_leg_residual,
        substitution_residual,
    };
    if report.max_residual() > tol {
        return Err(ScatteringError::IdentityViolation {
            residual: report.max_residual(),
        });
    }
    Ok(report)
}

/// Canonicalizing SL(2,C) element whose Lorentz action puts `electron` at
/// rest and `photon` along +z (rotation after inverse pure boost).
pub fn selected_frame_transform(
    photon: &OnShellMomentum,
    electron: &OnShellMomentum,
) -> Result<Sl2c, ScatteringError> {
    let boost = pure_boost(electron)?.inverse();
    let lam = lorentz_from_sl2c(&boost)?;
    let p1b = lam.apply(&photon.four_vector());
    let rot = rotation_aligning([p1b.px, p1b.py, p1b.pz], [0.0, 0.0, 1.0]);
    Ok(rot.mul(&boost))
}

// ---------------------------------------------------------------------------
// Discretized connected four-point positivity.
// ---------------------------------------------------------------------------

/// One two-leg coefficient sample: transverse photon coefficients in the
/// respective photon's transverse basis and a spinor coefficient vector,
/// for the out pair (legs 1, 2) and the in pair (legs 3, 4).
#[derive(Debug, Clone)]
pub struct PairCoefficients {
    pub photon_out: [Complex64; 2],
    pub spinor_out: [Complex64; 4],
    pub photon_in: [Complex64; 2],
    pub spinor_in: [Complex64; 4],
}

#[derive(Debug, Clone)]
pub struct PositivityReport {
    /// Value of the discretized connected four-point form.
    pub form_value: f64,
    /// The same value reassembled from the T_s / T_u factor rows.
    pub gram_value: f64,
    /// Scale used for the nonnegativity ceiling.
    pub scale: f64,
}

/// Discretized connected four-point form for the constructed Compton
/// kernel. With the two pair points (p1, p2) and (p3, p4) on the
/// conservation manifold, the kernel between pair slots is
/// a_s (pe_slash + m) G R(p1+p2, m) G'^* (pe'_slash + m)^*
/// + a_u (pe_slash + m) G R(-(p1+p2), m) G'^* (pe'_slash + m)^*
/// with a_u = -a_s < 0, and the form summed over both pair assignments
/// equals the Gram sum of the T_s / T_u factor contractions, hence is
/// nonnegative for any coefficients in the transverse sector.
pub fn connected_four_point_positivity(
    p: &[OnShellMomentum; 4],
    e: f64,
    sample: &PairCoefficients,
) -> Result<PositivityReport, ScatteringError> {
    let residual = conservation_residual(p);
    if residual > 1e-10 {
        return Err(ScatteringError::ConservationViolated { residual });
    }
    let m = p[1].mass();
    let p_sum = p[0].four_vector() + p[1].four_vector();
    let s_denom = p_sum.square() - m * m;
    if s_denom <= 0.0 {
        return Err(ScatteringError::PropagatorPole { denominator: s_denom });
    }
    let a_s = e * e / s_denom;
    let a_u = -a_s;

    // Photon 4-vectors from transverse-basis coefficients.
    let basis_out = photon_basis(&p[0]).map_err(|_| ScatteringError::InvalidLeg { index: 1 })?;
    let basis_in = photon_basis(&p[2]).map_err(|_| ScatteringError::InvalidLeg { index: 3 })?;
    let mix = |basis: &[[Complex64; 4]; 4], c: &[Complex64; 2]| -> [Complex64; 4] {
        let mut v = [Complex64::new(0.0, 0.0); 4];
        for k in 0..4 {
            v[k] = c[0] * basis[1][k] + c[1] * basis[2][k];
        }
        v
    };
    let eps_a = mix(&basis_out, &sample.photon_out);
    let eps_b = mix(&basis_in, &sample.photon_in);

    // Side data: photon 4-vector, adjoint electron projector (pe_slash+m)^*,
    // spinor coefficients.
    let proj_adj = |q: &OnShellMomentum| -> CMat {
        (&slash(&q.four_vector()) + &CMat::identity(4).scale_re(m)).adjoint()
    };
    let sides = [
        (eps_a, proj_adj(&p[1]), sample.spinor_out),
        (eps_b, proj_adj(&p[3]), sample.spinor_in),
    ];

    // Direct kernel evaluation over the 2x2 pair grid.
    let r_plus = r_matrix(&p_sum, m);
    let r_minus = r_matrix(&-p_sum, m);
    let mut form = Complex64::new(0.0, 0.0);
    for (eps_l, proj_l, g_l) in &sides {
        // (pe_slash + m) G_l: adjoint of the stored projector times the
        // plain contraction of conj(eps_l).
        let head = &proj_l.adjoint() * &slash_plain(&conj4(eps_l));
        let left_s = &head * &r_plus;
        let left_u = &head * &r_minus;
        for (eps_r, proj_r, g_r) in &sides {
            let k_s = &(&left_s * &slash_c(eps_r)) * proj_r;
            let k_u = &(&left_u * &slash_c(eps_r)) * proj_r;
            let gl = conj4(g_l);
            let dot = |k: &CMat| -> Complex64 {
                let v = k.mul_vec(g_r);
                gl.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
            };
            form += a_s * dot(&k_s) + a_u * dot(&k_u);
        }
    }

    // Gram reassembly: t_s = sqrt(a_s) C_e G^* (pe_slash + m)^* g summed
    // over the two sides, t_u likewise with the negative-branch factor C_-
    // satisfying C_-^* C_- = R(p_sum, -m) = -R(-p_sum, m).
    let c_e = factor_r(&p_sum, m)?;
    let c_minus = factor_r(&p_sum, -m)?;
    let root_as = fmath::sqrt(a_s);
    let root_au = fmath::sqrt(-a_u);
    let mut t_s = [Complex64::new(0.0, 0.0); 4];
    let mut t_u = [Complex64::new(0.0, 0.0); 4];
    for (eps, proj_m, g) in &sides {
        let f_s = &(&c_e * &slash_c(eps)) * proj_m;
        let f_u = &(&c_minus * &slash_c(eps)) * proj_m;
        let vs = f_s.mul_vec(g);
        let vu = f_u.mul_vec(g);
        for l in 0..4 {
            t_s[l] += vs[l] * root_as;
            t_u[l] += vu[l] * root_au;
        }
    }
    let gram_value: f64 = t_s.iter().map(|z| z.norm_sqr()).sum::<f64>()
        + t_u.iter().map(|z| z.norm_sqr()).sum::<f64>();

    let coeff_scale = sides
        .iter()
        .map(|(eps, _, g)| {
            eps.iter().map(|z| z.norm_sqr()).sum::<f64>()
                * g.iter().map(|z| z.norm_sqr()).sum::<f64>()
        })
        .fold(0.0, f64::max);
    let scale = a_s * r_plus.frobenius_norm() * coeff_scale * (1.0 + m * m) + 1e-300;
    let form_value = form.re;
    if form_value < -1e-10 * scale {
        return Err(ScatteringError::NegativeForm { value: form_value });
    }
    Ok(PositivityReport {
        form_value,
        gram_value,
        scale,
    })
}
