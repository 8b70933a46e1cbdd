//! Minkowski four-vector algebra, mass shells, and the SL(2,C) covering map
//! onto proper orthochronous Lorentz matrices, including the polar
//! (rotation-boost-rotation) decomposition.
//!
//! Conventions: natural units, metric g = diag(1,-1,-1,-1), signed components
//! p_(k) so that `P(p) = sum_k p_(k) sigma_k` is Hermitian for real p.

use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::cmatrix::CMat;
use crate::fmath;

pub const METRIC_DIAG: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

#[derive(Debug, Clone, PartialEq)]
pub enum KinematicsError {
    /// Massless momentum with |p| = 0 is excluded from every mass shell.
    ZeroMasslessMomentum,
    /// 2x2 matrix with determinant away from one.
    NotUnimodular { det: Complex64 },
    /// Component that is NaN or infinite.
    NonFinite,
    /// Negative mass parameter.
    NegativeMass,
}

impl fmt::Display for KinematicsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KinematicsError::ZeroMasslessMomentum => {
                write!(f, "massless momentum requires |p| > 0")
            }
            KinematicsError::NotUnimodular { det } => {
                write!(f, "matrix determinant {det} differs from 1")
            }
            KinematicsError::NonFinite => write!(f, "non-finite component"),
            KinematicsError::NegativeMass => write!(f, "mass must be nonnegative"),
        }
    }
}

/// Energy-momentum four-vector (E, px, py, pz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourVector {
    pub e: f64,
    pub px: f64,
    pub py: f64,
    pub pz: f64,
}

impl FourVector {
    pub fn new(e: f64, px: f64, py: f64, pz: f64) -> Self {
        FourVector { e, px, py, pz }
    }

    pub fn zero() -> Self {
        FourVector::new(0.0, 0.0, 0.0, 0.0)
    }

    pub fn component(&self, mu: usize) -> f64 {
        match mu {
            0 => self.e,
            1 => self.px,
            2 => self.py,
            3 => self.pz,
            _ => panic!("four-vector index out of range"),
        }
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.px, self.py, self.pz]
    }

    pub fn spatial_norm(&self) -> f64 {
        fmath::sqrt(self.px * self.px + self.py * self.py + self.pz * self.pz)
    }

    /// Minkowski square p.p.
    pub fn square(&self) -> f64 {
        minkowski_dot(self, self)
    }

    pub fn is_finite(&self) -> bool {
        self.e.is_finite() && self.px.is_finite() && self.py.is_finite() && self.pz.is_finite()
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector::new(self.e + o.e, self.px + o.px, self.py + o.py, self.pz + o.pz)
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector::new(self.e - o.e, self.px - o.px, self.py - o.py, self.pz - o.pz)
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector::new(-self.e, -self.px, -self.py, -self.pz)
    }
}

/// Minkowski inner product a.b = a_e b_e - a.p . b.p.
pub fn minkowski_dot(a: &FourVector, b: &FourVector) -> f64 {
    a.e * b.e - a.px * b.px - a.py * b.py - a.pz * b.pz
}

/// On-shell momentum: spatial momentum plus mass and energy-branch sign; the
/// energy is always derived as sign * sqrt(m^2 + |p|^2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnShellMomentum {
    mass: f64,
    p: [f64; 3],
    sign: i8,
}

/// Constructs an on-shell momentum on the chosen energy branch.
pub fn mass_shell(mass: f64, p3: [f64; 3], sign: i8) -> Result<OnShellMomentum, KinematicsError> {
    assert!(sign == 1 || sign == -1, "energy branch sign must be +1 or -1");
    if !(mass.is_finite() && p3.iter().all(|x| x.is_finite())) {
        return Err(KinematicsError::NonFinite);
    }
    if mass < 0.0 {
        return Err(KinematicsError::NegativeMass);
    }
    if mass == 0.0 && p3 == [0.0, 0.0, 0.0] {
        return Err(KinematicsError::ZeroMasslessMomentum);
    }
    Ok(OnShellMomentum { mass, p: p3, sign })
}

impl OnShellMomentum {
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn spatial(&self) -> [f64; 3] {
        self.p
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Positive shell frequency omega = sqrt(m^2 + |p|^2).
    pub fn omega(&self) -> f64 {
        fmath::sqrt(
            self.mass * self.mass
                + self.p[0] * self.p[0]
                + self.p[1] * self.p[1]
                + self.p[2] * self.p[2],
        )
    }

    /// Energy including the branch sign.
    pub fn energy(&self) -> f64 {
        f64::from(self.sign) * self.omega()
    }

    pub fn four_vector(&self) -> FourVector {
        FourVector::new(self.energy(), self.p[0], self.p[1], self.p[2])
    }

    pub fn spatial_norm(&self) -> f64 {
        fmath::sqrt(self.p[0] * self.p[0] + self.p[1] * self.p[1] + self.p[2] * self.p[2])
    }
}

/// Element of SL(2,C): 2x2 complex matrix with determinant one.
#[derive(Debug, Clone, PartialEq)]
pub struct Sl2c {
    m: CMat,
}

impl Sl2c {
    /// Wraps a 2x2 matrix, requiring |det - 1| <= 1e-9.
    pub fn new(m: CMat) -> Result<Self, KinematicsError> {
        assert!(m.rows() == 2 && m.cols() == 2);
        let det = det2(&m);
        if (det - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
            return Err(KinematicsError::NotUnimodular { det });
        }
        Ok(Sl2c { m })
    }

    /// Rescales an invertible 2x2 matrix to determinant one, then wraps it.
    pub fn normalized(m: CMat) -> Result<Self, KinematicsError> {
        let det = det2(&m);
        if det.norm() < 1e-150 {
            return Err(KinematicsError::NotUnimodular { det });
        }
        let s = det.sqrt();
        Sl2c::new(m.scale(Complex64::new(1.0, 0.0) / s))
    }

    pub fn identity() -> Self {
        Sl2c {
            m: CMat::identity(2),
        }
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn det(&self) -> Complex64 {
        det2(&self.m)
    }

    pub fn mul(&self, o: &Sl2c) -> Sl2c {
        Sl2c {
            m: &self.m * &o.m,
        }
    }

    /// Closed-form inverse [[d,-b],[-c,a]] (determinant one).
    pub fn inverse(&self) -> Sl2c {
        let mut inv = CMat::zeros(2, 2);
        inv[(0, 0)] = self.m[(1, 1)];
        inv[(0, 1)] = -self.m[(0, 1)];
        inv[(1, 0)] = -self.m[(1, 0)];
        inv[(1, 1)] = self.m[(0, 0)];
        Sl2c { m: inv }
    }

    pub fn adjoint(&self) -> CMat {
        self.m.adjoint()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (&(&self.m.adjoint() * &self.m) - &CMat::identity(2)).frobenius_norm() < tol
    }
}

fn det2(m: &CMat) -> Complex64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// Pauli matrices sigma_0..sigma_3 as 2x2 complex matrices.
pub fn pauli(k: usize) -> CMat {
    let mut s = CMat::zeros(2, 2);
    match k {
        0 => {
            s[(0, 0)] = Complex64::new(1.0, 0.0);
            s[(1, 1)] = Complex64::new(1.0, 0.0);
        }
        1 => {
            s[(0, 1)] = Complex64::new(1.0, 0.0);
            s[(1, 0)] = Complex64::new(1.0, 0.0);
        }
        2 => {
            s[(0, 1)] = Complex64::new(0.0, -1.0);
            s[(1, 0)] = Complex64::new(0.0, 1.0);
        }
        3 => {
            s[(0, 0)] = Complex64::new(1.0, 0.0);
            s[(1, 1)] = Complex64::new(-1.0, 0.0);
        }
        _ => panic!("pauli index out of range"),
    }
    s
}

/// P(p) = sum_k p_(k) sigma_k = [[E+pz, px-i py], [px+i py, E-pz]];
/// Hermitian for real p with det P(p) = p.p.
pub fn pauli_p(p: &FourVector) -> CMat {
    let mut m = CMat::zeros(2, 2);
    m[(0, 0)] = Complex64::new(p.e + p.pz, 0.0);
    m[(1, 1)] = Complex64::new(p.e - p.pz, 0.0);
    m[(0, 1)] = Complex64::new(p.px, -p.py);
    m[(1, 0)] = Complex64::new(p.px, p.py);
    m
}

/// Inverse of `pauli_p`: reads the four-vector back off a 2x2 Hermitian matrix.
pub fn four_vector_from_pauli(m: &CMat) -> FourVector {
    FourVector::new(
        0.5 * (m[(0, 0)].re + m[(1, 1)].re),
        m[(0, 1)].re,
        -m[(0, 1)].im,
        0.5 * (m[(0, 0)].re - m[(1, 1)].re),
    )
}

/// 4x4 real proper orthochronous Lorentz matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMatrix {
    pub m: [[f64; 4]; 4],
}

impl LorentzMatrix {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        LorentzMatrix { m }
    }

    pub fn mul(&self, o: &LorentzMatrix) -> LorentzMatrix {
        let mut m = [[0.0; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                m[r][c] = (0..4).map(|k| self.m[r][k] * o.m[k][c]).sum();
            }
        }
        LorentzMatrix { m }
    }

    pub fn apply(&self, p: &FourVector) -> FourVector {
        let v = [p.e, p.px, p.py, p.pz];
        let mut out = [0.0; 4];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|c| self.m[r][c] * v[c]).sum();
        }
        FourVector::new(out[0], out[1], out[2], out[3])
    }

    /// Inverse via the metric identity: Lambda^{-1} = g Lambda^T g.
    pub fn inverse(&self) -> LorentzMatrix {
        let mut m = [[0.0; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                m[r][c] = METRIC_DIAG[r] * self.m[c][r] * METRIC_DIAG[c];
            }
        }
        LorentzMatrix { m }
    }

    /// Frobenius norm of Lambda^T g Lambda - g.
    pub fn metric_defect(&self) -> f64 {
        let mut acc = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                let mut s = 0.0;
                for k in 0..4 {
                    s += self.m[k][a] * METRIC_DIAG[k] * self.m[k][b];
                }
                let target = if a == b { METRIC_DIAG[a] } else { 0.0 };
                acc += (s - target) * (s - target);
            }
        }
        fmath::sqrt(acc)
    }
}

/// Covering map: Lambda(A)_{mu nu} = Re Tr(sigma_mu A sigma_nu A^*) / 2,
/// satisfying A P(p) A^* = P(Lambda p).
pub fn lorentz_from_sl2c(a: &Sl2c) -> Result<LorentzMatrix, KinematicsError> {
    let det = a.det();
    if (det - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
        return Err(KinematicsError::NotUnimodular { det });
    }
    let astar = a.adjoint();
    let mut m = [[0.0; 4]; 4];
    for (mu, row) in m.iter_mut().enumerate() {
        for (nu, entry) in row.iter_mut().enumerate() {
            let prod = &(&pauli(mu) * a.matrix()) * &(&pauli(nu) * &astar);
            *entry = 0.5 * prod.trace().re;
        }
    }
    Ok(LorentzMatrix { m })
}

/// Boost along z with rapidity eta: diag(e^{eta/2}, e^{-eta/2}).
pub fn boost_z(rapidity: f64) -> Sl2c {
    let mut m = CMat::zeros(2, 2);
    m[(0, 0)] = Complex64::new(fmath::exp(0.5 * rapidity), 0.0);
    m[(1, 1)] = Complex64::new(fmath::exp(-0.5 * rapidity), 0.0);
    Sl2c { m }
}

/// Rotation exp(-i (angle/2) axis.sigma) for a unit axis.
pub fn rotation(axis: [f64; 3], angle: f64) -> Sl2c {
    let n = fmath::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    assert!((n - 1.0).abs() < 1e-9, "rotation axis must be unit length");
    let (c, s) = (fmath::cos(0.5 * angle), fmath::sin(0.5 * angle));
    let sigma_n = CMat::from_fn(2, 2, |r, cidx| {
        axis[0] * pauli(1)[(r, cidx)] + axis[1] * pauli(2)[(r, cidx)] + axis[2] * pauli(3)[(r, cidx)]
    });
    let m = &CMat::identity(2).scale_re(c) + &sigma_n.scale(Complex64::new(0.0, -s));
    Sl2c { m }
}

/// Rotation taking the unit vector `from` onto the unit vector `to`.
pub fn rotation_aligning(from: [f64; 3], to: [f64; 3]) -> Sl2c {
    let dot = from[0] * to[0] + from[1] * to[1] + from[2] * to[2];
    let cross = [
        from[1] * to[2] - from[2] * to[1],
        from[2] * to[0] - from[0] * to[2],
        from[0] * to[1] - from[1] * to[0],
    ];
    let cn = fmath::sqrt(cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]);
    if cn < 1e-14 {
        if dot > 0.0 {
            return Sl2c::identity();
        }
        // Antiparallel: rotate by pi about any axis perpendicular to `from`.
        let perp = if from[0].abs() < 0.9 {
            [0.0, -from[2], from[1]]
        } else {
            [-from[1], from[0], 0.0]
        };
        let pn = fmath::sqrt(perp[0] * perp[0] + perp[1] * perp[1] + perp[2] * perp[2]);
        return rotation([perp[0] / pn, perp[1] / pn, perp[2] / pn], fmath::PI);
    }
    let axis = [cross[0] / cn, cross[1] / cn, cross[2] / cn];
    rotation(axis, fmath::atan2(cn, dot))
}

/// Pure boost A = (P(p) + m sigma_0)/sqrt(2m(E+m)) taking the rest-frame
/// momentum (m, 0) to p; Hermitian positive with determinant one.
pub fn pure_boost(p: &OnShellMomentum) -> Result<Sl2c, KinematicsError> {
    if p.mass() <= 0.0 {
        return Err(KinematicsError::ZeroMasslessMomentum);
    }
    let m = p.mass();
    let e = p.energy();
    if e <= 0.0 {
        return Err(KinematicsError::NegativeMass);
    }
    let denom = fmath::sqrt(2.0 * m * (e + m));
    let a = &pauli_p(&p.four_vector()) + &CMat::identity(2).scale_re(m);
    Sl2c::new(a.scale_re(1.0 / denom))
}

/// Polar decomposition A = U . (V Dg V^*) with U, V unitary and
/// Dg = diag(lambda, 1/lambda), lambda >= 1.
pub fn polar_decompose(a: &Sl2c) -> (Sl2c, Sl2c, Sl2c) {
    let h = &a.adjoint() * a.matrix();
    if (&h - &CMat::identity(2)).frobenius_norm() < 1e-14 {
        // A already unitary: ties resolved by V = identity.
        return (a.clone(), Sl2c::identity(), Sl2c::identity());
    }
    let (eigs, vecs) = h.hermitian_eigen();
    // Descending order puts lambda >= 1 first (eigenvalues multiply to one).
    let lam = fmath::sqrt(eigs[1].max(0.0));
    let mut dg = CMat::zeros(2, 2);
    dg[(0, 0)] = Complex64::new(lam, 0.0);
    dg[(1, 1)] = Complex64::new(1.0 / lam, 0.0);
    let v_raw = CMat::from_fn(2, 2, |r, c| vecs[(r, 1 - c)]);
    let v = Sl2c::normalized(v_raw).expect("eigenvector matrix is unitary");
    let dg = Sl2c::new(dg).expect("diag(lambda, 1/lambda) is unimodular");
    let pos = v.mul(&dg).mul(&Sl2c::new(v.adjoint()).expect("unitary adjoint"));
    let u = a.mul(&pos.inverse());
    (u, v, dg)
}
