//! Equivalent-potential extraction: the Yukawa-type multiplier U_s, radial
//! Fourier transforms (analytic and quadrature), the position-space
//! equivalent potential with its Yukawa and 1/r regimes, and the
//! first-Born-approximation cross section.

use core::fmt;

use crate::fmath;
use crate::kinematics::FourVector;
use crate::quad;

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialsError {
    InvalidParameter(&'static str),
    QuadratureFailure,
}

impl fmt::Display for PotentialsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialsError::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            PotentialsError::QuadratureFailure => write!(f, "quadrature did not converge"),
        }
    }
}

/// Parameters of the Yukawa-type multiplier: short length scale `delta`,
/// screening momentum `epsilon`, strength `alpha` in (0, 1], overall
/// four-point coefficient `c4`, and particle mass `m`.
#[derive(Debug, Clone, Copy)]
pub struct YukawaSpec {
    pub delta: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub c4: f64,
    pub m: f64,
}

impl YukawaSpec {
    pub fn new(delta: f64, epsilon: f64, alpha: f64, c4: f64, m: f64) -> Result<Self, PotentialsError> {
        if !(delta > 0.0) {
            return Err(PotentialsError::InvalidParameter("delta must be > 0"));
        }
        if !(epsilon > 0.0) {
            return Err(PotentialsError::InvalidParameter("epsilon must be > 0"));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(PotentialsError::InvalidParameter("alpha must be in (0, 1]"));
        }
        if !(m > 0.0) {
            return Err(PotentialsError::InvalidParameter("m must be > 0"));
        }
        Ok(YukawaSpec {
            delta,
            epsilon,
            alpha,
            c4,
            m,
        })
    }

    /// Ratio alpha / (delta^2 epsilon^2); the near-constant regime holds when
    /// this is much less than one.
    pub fn regime_ratio(&self) -> f64 {
        self.alpha / (self.delta * self.delta * self.epsilon * self.epsilon)
    }

    pub fn regime_ok(&self) -> bool {
        self.regime_ratio() < 0.1
    }

    /// Onset of the Yukawa window: r >> -delta ln(alpha) / (1 - epsilon delta),
    /// the crossing point where the two exponentials exchange dominance.
    pub fn yukawa_window_start(&self) -> f64 {
        -self.delta * fmath::ln(self.alpha) / (1.0 - self.epsilon * self.delta)
    }

    /// Asymptotic Yukawa strength |C| = 16 pi^5 alpha c4 / (m delta)^2.
    pub fn strength(&self) -> f64 {
        let pi = fmath::PI;
        16.0 * pi * pi * pi * pi * pi * self.alpha * fmath::abs(self.c4)
            / (self.m * self.delta * self.m * self.delta)
    }
}

/// U_s(0, 2q) = 1/(1 + delta^2 q^2) + alpha/(delta^2 (epsilon^2 + q^2)).
pub fn u_s(spec: &YukawaSpec, q: f64) -> f64 {
    let d2 = spec.delta * spec.delta;
    1.0 / (1.0 + d2 * q * q) + spec.alpha / (d2 * (spec.epsilon * spec.epsilon + q * q))
}

/// Smooth ramp from 0 to 1 over [0, w] (C^1 smoothstep).
fn ramp(x: f64, w: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= w {
        1.0
    } else {
        let t = x / w;
        t * t * (3.0 - 2.0 * t)
    }
}

/// Poincare-invariant evaluation U_s(2p): supported on spacelike arguments
/// with q = sqrt(-p^2)/2, smoothly mollified to exclude a neighborhood of
/// p^2 = 0 (ramp width 1e-3 epsilon^2 in the invariant -p^2).
pub fn u_s_invariant(spec: &YukawaSpec, p: &FourVector) -> f64 {
    let s = -p.square();
    let width = 1e-3 * spec.epsilon * spec.epsilon;
    if s <= 0.0 {
        return 0.0;
    }
    u_s(spec, fmath::sqrt(s) / 2.0) * ramp(s, width)
}

/// Radial Fourier transform of a rotation-invariant function:
/// integral over 3-momentum of e^{i q.x} phi(q) = (4 pi / r) times the
/// sine integral of q phi(q), via oscillation-aware quadrature.
pub fn radial_fourier<F: Fn(f64) -> f64>(phi: &F, r: f64, tol: f64) -> Result<f64, PotentialsError> {
    if !(r > 0.0) {
        return Err(PotentialsError::InvalidParameter("r must be > 0"));
    }
    let integral = quad::oscillatory_sine(&|q: f64| q * phi(q), r, tol);
    if !integral.is_finite() {
        return Err(PotentialsError::QuadratureFailure);
    }
    Ok(4.0 * fmath::PI / r * integral)
}

/// Closed form of the radial transform of U_s:
/// (2 pi^2 / (delta^2 r)) (e^{-r/delta} + alpha e^{-epsilon r}).
pub fn us_transform_analytic(spec: &YukawaSpec, r: f64) -> f64 {
    2.0 * fmath::PI * fmath::PI / (spec.delta * spec.delta * r)
        * (fmath::exp(-r / spec.delta) + spec.alpha * fmath::exp(-spec.epsilon * r))
}

/// Equivalent potential value: magnitude and the (unobservable) plane-wave
/// phase are reported separately.
#[derive(Debug, Clone, Copy)]
pub struct PotentialValue {
    pub magnitude: f64,
    /// Phase of the e^{-i p1.x} prefactor along the incident axis.
    pub phase: f64,
}

/// |V|(r) for incident momentum magnitude p1: the x-independent part of
/// (2 pi)^3 c4/m^2 conj(U_s(0, 2 p1)) times the radial transform of U_s.
/// `analytic` selects the closed-form transform; otherwise quadrature.
pub fn equivalent_potential(
    spec: &YukawaSpec,
    p1: f64,
    r: f64,
    analytic: bool,
) -> Result<PotentialValue, PotentialsError> {
    if !(r > 0.0) {
        return Err(PotentialsError::InvalidParameter("r must be > 0"));
    }
    let transform = if analytic {
        us_transform_analytic(spec, r)
    } else {
        radial_fourier(&|q: f64| u_s(spec, q), r, 1e-10)?
    };
    let two_pi = 2.0 * fmath::PI;
    let prefactor = two_pi * two_pi * two_pi * spec.c4 / (spec.m * spec.m) * u_s(spec, p1);
    Ok(PotentialValue {
        magnitude: fmath::abs(prefactor * transform),
        phase: -p1 * r,
    })
}

/// Reduced mass m1 m2 / (m1 + m2).
pub fn reduced_mass(m1: f64, m2: f64) -> f64 {
    m1 * m2 / (m1 + m2)
}

/// First Born approximation: dsigma/dOmega = |mu/(2 pi) V~(q)|^2 with
/// V~(q) the position-space transform of the potential at momentum transfer q.
pub fn born_cross_section(v_tilde: f64, mu: f64) -> f64 {
    let a = mu / (2.0 * fmath::PI) * v_tilde;
    a * a
}

/// The transform of the equivalent potential at momentum transfer q
/// (the Born integrand): (2 pi)^6 c4/m^2 conj(U_s(0,2p1)) U_s(0, 2|p1 - q|),
/// evaluated with the elastic identification |p1 - q| -> argument `q_out`.
pub fn potential_transform(spec: &YukawaSpec, p1: f64, q_out: f64) -> f64 {
    let two_pi = 2.0 * fmath::PI;
    let v6 = fmath::powi(two_pi, 6);
    v6 * spec.c4 / (spec.m * spec.m) * u_s(spec, p1) * u_s(spec, q_out)
}
