//! The electrodynamics field model: block two-point matrix M(p) for a
//! 12-component field (photon, electron, conjugate electron), the conjugation
//! matrix D, the reducible representation S(A), condition verifiers, and
//! photon/fermion polarization bases with their spin-sum and normalization
//! identities.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::cmatrix::{cdot, CMat};
use crate::dirac::{gamma, r_matrix, slash, spinor_rep};
use crate::fmath;
use crate::kinematics::{
    lorentz_from_sl2c, pure_boost, FourVector, KinematicsError, OnShellMomentum, Sl2c,
    METRIC_DIAG,
};

pub const TWO_PI: f64 = 2.0 * fmath::PI;

/// Global component layout: photon indices 0..4, electron field indices 4..8,
/// conjugate field indices 8..12.
pub const N_BOSON: usize = 4;
pub const N_COMPONENTS: usize = 12;
pub const PHOTON_OFFSET: usize = 0;
pub const PSI_OFFSET: usize = 4;
pub const PSI_STAR_OFFSET: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum FieldsError {
    NotUnimodular,
    /// Coefficients fail the unit-norm requirement.
    NotNormalized { norm_sq: f64 },
    MasslessFermion,
    MassivePhoton,
    /// A structural condition on (M, D, S) failed.
    ConditionViolation { name: &'static str, residual: f64 },
}

impl fmt::Display for FieldsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldsError::NotUnimodular => write!(f, "SL(2,C) element required"),
            FieldsError::NotNormalized { norm_sq } => {
                write!(f, "coefficients have squared norm {norm_sq}, expected 1")
            }
            FieldsError::MasslessFermion => write!(f, "fermion operations require mass > 0"),
            FieldsError::MassivePhoton => write!(f, "photon operations require mass = 0"),
            FieldsError::ConditionViolation { name, residual } => {
                write!(f, "two-point condition '{name}' violated (residual {residual})")
            }
        }
    }
}

impl From<KinematicsError> for FieldsError {
    fn from(_: KinematicsError) -> Self {
        FieldsError::NotUnimodular
    }
}

/// Two-point model interface: the matrix M(p), the conjugation D, and the
/// representation S(A), together with the block layout (offset, size,
/// fermionic) used by structural checks.
pub trait TwoPointModel {
    fn n_components(&self) -> usize;
    fn n_bosons(&self) -> usize;
    fn m(&self, p: &FourVector) -> CMat;
    fn d(&self) -> CMat;
    fn s(&self, a: &Sl2c) -> Result<CMat, FieldsError>;
    /// Irreducible blocks as (offset, size, is_fermion_pair).
    fn blocks(&self) -> Vec<(usize, usize, bool)>;
    /// Columns spanning the physical subspace at `p`, on which DM(p) is
    /// positive semidefinite. Defaults to the full component space.
    fn physical_basis(&self, _p: &OnShellMomentum) -> CMat {
        CMat::identity(self.n_components())
    }
}

/// The electrodynamics model: photon block -2 pi g and the 8x8 fermion block
/// with antidiagonal (slash(p)+m) gamma_0 / gamma_0 (slash(p)-m)^T entries.
#[derive(Debug, Clone, Copy)]
pub struct ElectroModel {
    pub mass: f64,
}

impl ElectroModel {
    pub fn new(mass: f64) -> Self {
        assert!(mass > 0.0, "electron mass must be positive");
        ElectroModel { mass }
    }

    /// Photon block M_1(p) = -2 pi g (momentum independent).
    pub fn photon_block(&self, _p: &FourVector) -> CMat {
        CMat::from_fn(4, 4, |r, c| {
            if r == c {
                Complex64::new(-TWO_PI * METRIC_DIAG[r], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Fermion block M_2(p) = 2 pi [[0, (slash(p)+m) gamma_0],
    /// [gamma_0 (slash(p)-m)^T, 0]].
    pub fn fermion_block(&self, p: &FourVector) -> CMat {
        let upper = r_matrix(p, self.mass);
        let lower = &gamma(0) * &(&slash(p) - &CMat::identity(4).scale_re(self.mass)).transpose();
        let mut m2 = CMat::zeros(8, 8);
        m2.set_block(0, 4, &upper.scale_re(TWO_PI));
        m2.set_block(4, 0, &lower.scale_re(TWO_PI));
        m2
    }

    /// The fermion conjugation block: swap of the two 4x4 sub-blocks.
    pub fn d2() -> CMat {
        let mut d = CMat::zeros(8, 8);
        d.set_block(0, 4, &CMat::identity(4));
        d.set_block(4, 0, &CMat::identity(4));
        d
    }

    /// D_2 M_2(p) / (2 pi) = diag(gamma_0 (slash(p)-m)^T, (slash(p)+m) gamma_0),
    /// positive semidefinite for p^2 >= m^2, E >= 0.
    pub fn d2m2_normalized(&self, p: &FourVector) -> CMat {
        &Self::d2() * &self.fermion_block(p).scale_re(1.0 / TWO_PI)
    }
}

impl TwoPointModel for ElectroModel {
    fn n_components(&self) -> usize {
        N_COMPONENTS
    }

    fn n_bosons(&self) -> usize {
        N_BOSON
    }

    fn m(&self, p: &FourVector) -> CMat {
        CMat::block_diag(&[&self.photon_block(p), &self.fermion_block(p)])
    }

    fn d(&self) -> CMat {
        CMat::block_diag(&[&CMat::identity(4), &Self::d2()])
    }

    fn s(&self, a: &Sl2c) -> Result<CMat, FieldsError> {
        let lam_inv = lorentz_from_sl2c(a)
            .map_err(|_| FieldsError::NotUnimodular)?
            .inverse();
        let s1 = CMat::from_fn(4, 4, |r, c| Complex64::new(lam_inv.m[r][c], 0.0));
        let rep = spinor_rep(a);
        Ok(CMat::block_diag(&[&s1, rep.sbar(), &rep.s()]))
    }

    fn blocks(&self) -> Vec<(usize, usize, bool)> {
        [(0, 4, false), (4, 8, true)].into_iter().collect()
    }

    /// Transverse photon directions plus the full fermion block: the photon
    /// slot of DM acts as -g, positive only on spatial transverse vectors.
    fn physical_basis(&self, p: &OnShellMomentum) -> CMat {
        let mut cols = CMat::zeros(N_COMPONENTS, 10);
        if let Ok(massless) = crate::kinematics::mass_shell(0.0, p.spatial(), 1) {
            if let Ok(basis) = photon_basis(&massless) {
                for (j, r) in [1usize, 2].into_iter().enumerate() {
                    for k in 0..4 {
                        cols[(PHOTON_OFFSET + k, j)] = basis[r][k];
                    }
                }
            }
        }
        for j in 0..8 {
            cols[(PSI_OFFSET + j, 2 + j)] = Complex64::new(1.0, 0.0);
        }
        cols
    }
}

/// Single-component scalar boson model, used by the distinguishable-particle
/// amplitude reductions.
#[derive(Debug, Clone, Copy)]
pub struct ScalarModel;

impl TwoPointModel for ScalarModel {
    fn n_components(&self) -> usize {
        1
    }

    fn n_bosons(&self) -> usize {
        1
    }

    fn m(&self, _p: &FourVector) -> CMat {
        CMat::identity(1).scale_re(TWO_PI)
    }

    fn d(&self) -> CMat {
        CMat::identity(1)
    }

    fn s(&self, _a: &Sl2c) -> Result<CMat, FieldsError> {
        Ok(CMat::identity(1))
    }

    fn blocks(&self) -> Vec<(usize, usize, bool)> {
        [(0, 1, false)].into_iter().collect()
    }
}

/// A deliberately broken electrodynamics model (lower fermion sub-block sign
/// flipped) for negative-control verification runs: the signed-transpose
/// check must name the failure.
#[derive(Debug, Clone, Copy)]
pub struct SignCorruptedModel(pub ElectroModel);

impl TwoPointModel for SignCorruptedModel {
    fn n_components(&self) -> usize {
        self.0.n_components()
    }

    fn n_bosons(&self) -> usize {
        self.0.n_bosons()
    }

    fn m(&self, p: &FourVector) -> CMat {
        let mut m = self.0.m(p);
        let lower = m.block(8, 4, 4, 4).scale_re(-1.0);
        m.set_block(8, 4, &lower);
        m
    }

    fn d(&self) -> CMat {
        self.0.d()
    }

    fn s(&self, a: &Sl2c) -> Result<CMat, FieldsError> {
        self.0.s(a)
    }

    fn blocks(&self) -> Vec<(usize, usize, bool)> {
        self.0.blocks()
    }

    fn physical_basis(&self, p: &OnShellMomentum) -> CMat {
        self.0.physical_basis(p)
    }
}

/// Structural condition report: (name, residual) per check, all within `tol`.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub checks: Vec<(&'static str, f64)>,
}

impl ConditionReport {
    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }
}

/// Verifies the two-point structural conditions at an on-shell momentum `p`
/// and group element `a`:
/// block structure, positive semidefiniteness of DM on the positive shell,
/// conjugation involution, conjugate symmetry M(p)^* = D M(p) D^T, the
/// signed transpose law M_k(-p)^T = (-1)^{k-1} M_k(p), covariance
/// S M S^T = M(Lambda^{-1}p), and the intertwining conj(S) D = D S.
pub fn verify_conditions<M: TwoPointModel>(
    model: &M,
    p: &OnShellMomentum,
    a: &Sl2c,
    tol: f64,
) -> Result<ConditionReport, FieldsError> {
    let pv = p.four_vector();
    let m = model.m(&pv);
    let d = model.d();
    let mut checks: Vec<(&'static str, f64)> = Vec::new();
    let scale = m.frobenius_norm().max(1.0);

    // Block-diagonal structure.
    let mut off_block = m.clone();
    for (off, size, _) in model.blocks() {
        off_block.set_block(off, off, &CMat::zeros(size, size));
    }
    checks.push(("block-structure", off_block.frobenius_norm() / scale));

    // conj(D) D = identity.
    let inv = (&(&d.conj() * &d) - &CMat::identity(model.n_components())).frobenius_norm();
    checks.push(("conjugation-involution", inv));

    // Signed transpose per block (locality): boson blocks symmetric under
    // p -> -p transposition, fermion blocks antisymmetric.
    let m_neg_t = model.m(&-pv).transpose();
    let mut signed = 0.0f64;
    for (off, size, fermion) in model.blocks() {
        let sign = if fermion { -1.0 } else { 1.0 };
        let lhs = m_neg_t.block(off, off, size, size);
        let rhs = m.block(off, off, size, size).scale_re(sign);
        signed = signed.max((&lhs - &rhs).frobenius_norm() / scale);
    }
    checks.push(("signed-transpose", signed));

    // M(p)^* = D M(p) D^T.
    let conj_sym = (&m.adjoint() - &(&(&d * &m) * &d.transpose())).frobenius_norm() / scale;
    checks.push(("conjugate-symmetry", conj_sym));

    // DM(p) positive semidefinite on the physical subspace (full fermion
    // block, transverse photon directions) at positive energy.
    let basis = model.physical_basis(p);
    let dm_phys = &(&basis.adjoint() * &(&d * &m)) * &basis;
    let min_eig = dm_phys.min_eigenvalue();
    checks.push(("positivity", (-min_eig / scale).max(0.0)));

    // Covariance S(A) M(p) S(A)^T = M(Lambda^{-1} p).
    let s = model.s(a)?;
    let lam_inv = lorentz_from_sl2c(a)
        .map_err(|_| FieldsError::NotUnimodular)?
        .inverse();
    let cov = (&(&(&s * &m) * &s.transpose()) - &model.m(&lam_inv.apply(&pv))).frobenius_norm()
        / scale;
    checks.push(("covariance", cov));

    // Intertwining conj(S(A)) D = D S(A).
    let tw = (&(&s.conj() * &d) - &(&d * &s)).frobenius_norm() / (1.0 + s.frobenius_norm());
    checks.push(("intertwining", tw));

    for (name, residual) in &checks {
        if *residual > tol {
            return Err(FieldsError::ConditionViolation {
                name,
                residual: *residual,
            });
        }
    }
    Ok(ConditionReport { checks })
}

/// Particle species tag for a polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Species {
    Photon,
    Electron,
    Positron,
    /// Electron/positron superposition.
    FermionMixture,
}

/// Species-tagged 12-component polarization vector supported on the species'
/// index block, normalized so that conj(w)^T (D M(p)/(2 pi)) w = 1/(2 omega).
#[derive(Debug, Clone)]
pub struct Polarization {
    pub species: Species,
    pub w: [Complex64; N_COMPONENTS],
    pub momentum: OnShellMomentum,
}

impl Polarization {
    /// The photon 4-vector slot.
    pub fn photon_part(&self) -> [Complex64; 4] {
        [self.w[0], self.w[1], self.w[2], self.w[3]]
    }

    /// The conjugate-field (electron polarization) slot.
    pub fn electron_part(&self) -> [Complex64; 4] {
        [self.w[8], self.w[9], self.w[10], self.w[11]]
    }

    /// Builds an unvalidated polarization from raw parts (negative controls).
    pub fn raw(species: Species, w: [Complex64; N_COMPONENTS], momentum: OnShellMomentum) -> Self {
        Polarization {
            species,
            w,
            momentum,
        }
    }
}

/// conj(w)^T (D M(p)/(2 pi)) w for the polarization's own momentum.
pub fn polarization_norm<M: TwoPointModel>(model: &M, pol: &Polarization) -> Complex64 {
    let dm = (&model.d() * &model.m(&pol.momentum.four_vector())).scale_re(1.0 / TWO_PI);
    cdot(&pol.w, &dm.mul_vec(&pol.w))
}

/// Photon basis epsilon_0..epsilon_3 at a massless momentum: timelike,
/// two transverse vectors, and the longitudinal one, orthonormal under the
/// 2 omega inner product. The chart singularity at u_yz = 0 (momentum along
/// the x-axis) is completed by Gram-Schmidt against the y and z axes.
pub fn photon_basis(p: &OnShellMomentum) -> Result<[[Complex64; 4]; 4], FieldsError> {
    if p.mass() != 0.0 {
        return Err(FieldsError::MassivePhoton);
    }
    let omega = p.omega();
    let norm = 1.0 / fmath::sqrt(2.0 * omega);
    let sp = p.spatial();
    let pn = p.spatial_norm();
    let u = [sp[0] / pn, sp[1] / pn, sp[2] / pn];
    let uyz = fmath::sqrt(u[1] * u[1] + u[2] * u[2]);
    let re4 = |v: [f64; 4]| -> [Complex64; 4] {
        [
            Complex64::new(v[0] * norm, 0.0),
            Complex64::new(v[1] * norm, 0.0),
            Complex64::new(v[2] * norm, 0.0),
            Complex64::new(v[3] * norm, 0.0),
        ]
    };
    let eps0 = re4([1.0, 0.0, 0.0, 0.0]);
    let eps3 = re4([0.0, u[0], u[1], u[2]]);
    let (eps1, eps2) = if uyz >= 1e-12 {
        (
            re4([0.0, uyz, -u[0] * u[1] / uyz, -u[0] * u[2] / uyz]),
            re4([0.0, 0.0, u[2] / uyz, -u[1] / uyz]),
        )
    } else {
        // Momentum along +/- x: orthonormalize y and z axis candidates.
        let mut e1 = [0.0, 1.0, 0.0];
        let d1 = e1[0] * u[0] + e1[1] * u[1] + e1[2] * u[2];
        for i in 0..3 {
            e1[i] -= d1 * u[i];
        }
        let n1 = fmath::sqrt(e1.iter().map(|x| x * x).sum::<f64>());
        for x in e1.iter_mut() {
            *x /= n1;
        }
        let mut e2 = [0.0, 0.0, 1.0];
        let d2u = e2[0] * u[0] + e2[1] * u[1] + e2[2] * u[2];
        let d2e = e2[0] * e1[0] + e2[1] * e1[1] + e2[2] * e1[2];
        for i in 0..3 {
            e2[i] -= d2u * u[i] + d2e * e1[i];
        }
        let n2 = fmath::sqrt(e2.iter().map(|x| x * x).sum::<f64>());
        for x in e2.iter_mut() {
            *x /= n2;
        }
        (re4([0.0, e1[0], e1[1], e1[2]]), re4([0.0, e2[0], e2[1], e2[2]]))
    };
    Ok([eps0, eps1, eps2, eps3])
}

/// Transverse photon polarization w = a1 eps_1 + a2 eps_2 with
/// |a1|^2 + |a2|^2 = 1; satisfies the Coulomb (w_0 = 0) and Lorentz
/// (p.w = 0) conditions.
pub fn transverse_polarization(
    p: &OnShellMomentum,
    a1: Complex64,
    a2: Complex64,
) -> Result<Polarization, FieldsError> {
    let norm_sq = a1.norm_sqr() + a2.norm_sqr();
    if (norm_sq - 1.0).abs() > 1e-9 {
        return Err(FieldsError::NotNormalized { norm_sq });
    }
    let basis = photon_basis(p)?;
    let mut w = [Complex64::new(0.0, 0.0); N_COMPONENTS];
    for k in 0..4 {
        w[PHOTON_OFFSET + k] = a1 * basis[1][k] + a2 * basis[2][k];
    }
    Ok(Polarization {
        species: Species::Photon,
        w,
        momentum: *p,
    })
}

/// Rest-frame spin states: u_1(0), u_2(0), v_1(0), v_2(0).
pub fn rest_spinors() -> ([[Complex64; 4]; 2], [[Complex64; 4]; 2]) {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let u = [[one, z, z, z], [z, one, z, z]];
    let v = [[z, z, z, -one], [z, z, one, z]];
    (u, v)
}

/// Field expansion coefficients u_r(p), v_r(p) obtained by the pure boost:
/// u_r(p) = sqrt(m/omega) sbar(A) u_r(0), and similarly v_r.
#[derive(Debug, Clone)]
pub struct FermionSpinors {
    pub u: [[Complex64; 4]; 2],
    pub v: [[Complex64; 4]; 2],
}

pub fn fermion_spinors(p: &OnShellMomentum) -> Result<FermionSpinors, FieldsError> {
    if p.mass() <= 0.0 {
        return Err(FieldsError::MasslessFermion);
    }
    // The representation transports rest-frame data to momentum p through
    // the inverse boost: sbar(A) R(q) s(A)^T = R(Lambda(A)^{-1} q).
    let a = pure_boost(p)
        .map_err(|_| FieldsError::MasslessFermion)?
        .inverse();
    let sbar = spinor_rep(&a).sbar().clone();
    let scale = fmath::sqrt(p.mass() / p.omega());
    let (u0, v0) = rest_spinors();
    let map = |r0: &[Complex64; 4]| -> [Complex64; 4] {
        let v = sbar.mul_vec(r0).iter().map(|z| z * scale).collect::<Vec<_>>();
        [v[0], v[1], v[2], v[3]]
    };
    Ok(FermionSpinors {
        u: [map(&u0[0]), map(&u0[1])],
        v: [map(&v0[0]), map(&v0[1])],
    })
}

/// Dual polarization basis: w_{p,r} = (S^T)^{-1} u_r(0) / (2 sqrt(omega m))
/// for electrons and w_{a,r} = (S^*)^{-1} v_r(0) / (2 sqrt(omega m)) for
/// positrons, orthogonal to the field coefficients with weight 1/(2 omega).
#[derive(Debug, Clone)]
pub struct DualBasis {
    pub w_p: [[Complex64; 4]; 2],
    pub w_a: [[Complex64; 4]; 2],
}

pub fn dual_polarizations(p: &OnShellMomentum) -> Result<DualBasis, FieldsError> {
    if p.mass() <= 0.0 {
        return Err(FieldsError::MasslessFermion);
    }
    let a = pure_boost(p)
        .map_err(|_| FieldsError::MasslessFermion)?
        .inverse();
    let rep = spinor_rep(&a);
    let st_inv = rep.s_t().inverse().expect("representation invertible");
    // S^* is the conjugate transpose of S, i.e. sbar^T.
    let sstar_inv = rep
        .sbar()
        .transpose()
        .inverse()
        .expect("representation invertible");
    let scale = 1.0 / (2.0 * fmath::sqrt(p.omega() * p.mass()));
    let (u0, v0) = rest_spinors();
    let map = |m: &CMat, r0: &[Complex64; 4]| -> [Complex64; 4] {
        let v = m.mul_vec(r0).iter().map(|z| z * scale).collect::<Vec<_>>();
        [v[0], v[1], v[2], v[3]]
    };
    Ok(DualBasis {
        w_p: [map(&st_inv, &u0[0]), map(&st_inv, &u0[1])],
        w_a: [map(&sstar_inv, &v0[0]), map(&sstar_inv, &v0[1])],
    })
}

/// General fermion polarization from four coefficients: c_1, c_2 weight the
/// electron duals (conjugate-field block) and c_3, c_4 the positron duals
/// (field block); requires sum |c_k|^2 = 1.
pub fn general_polarization(
    p: &OnShellMomentum,
    c: [Complex64; 4],
) -> Result<Polarization, FieldsError> {
    let norm_sq: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > 1e-9 {
        return Err(FieldsError::NotNormalized { norm_sq });
    }
    let dual = dual_polarizations(p)?;
    let mut w = [Complex64::new(0.0, 0.0); N_COMPONENTS];
    for k in 0..4 {
        w[PSI_STAR_OFFSET + k] = c[0] * dual.w_p[0][k] + c[1] * dual.w_p[1][k];
        w[PSI_OFFSET + k] = c[2] * dual.w_a[0][k] + c[3] * dual.w_a[1][k];
    }
    let electron = c[0].norm_sqr() + c[1].norm_sqr() > 0.0;
    let positron = c[2].norm_sqr() + c[3].norm_sqr() > 0.0;
    let species = match (electron, positron) {
        (true, false) => Species::Electron,
        (false, true) => Species::Positron,
        _ => Species::FermionMixture,
    };
    Ok(Polarization {
        species,
        w,
        momentum: *p,
    })
}

/// Electron polarization with definite rest-frame spin r in {0, 1}.
pub fn electron_polarization(p: &OnShellMomentum, r: usize) -> Result<Polarization, FieldsError> {
    let mut c = [Complex64::new(0.0, 0.0); 4];
    c[r] = Complex64::new(1.0, 0.0);
    general_polarization(p, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::dot;
    use crate::kinematics::testutil::{random_massive, random_massless, random_sl2c};
    use crate::kinematics::{boost_z, mass_shell, rotation};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn outer(a: &[Complex64; 4], b: &[Complex64; 4]) -> CMat {
        CMat::from_fn(4, 4, |r, c| a[r] * b[c].conj())
    }

    #[test]
    fn photon_block_facts() {
        let model = ElectroModel::new(1.0);
        let p = FourVector::new(1.0, 0.3, 0.0, 0.9);
        let m1 = model.photon_block(&p);
        for r in 0..4 {
            assert!((m1[(r, r)].re + TWO_PI * METRIC_DIAG[r]).abs() < 1e-14);
        }
        // Boson sign: M_1(-p)^T = M_1(p).
        assert!((&model.photon_block(&-p).transpose() - &m1).frobenius_norm() < 1e-14);
    }

    #[test]
    fn fermion_block_spectrum() {
        let model = ElectroModel::new(0.9);
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..50 {
            let p3: [f64; 3] = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let e: f64 = rng.gen_range(-2.0..2.0);
            let p = FourVector::new(e, p3[0], p3[1], p3[2]);
            let omega = fmath::sqrt(
                model.mass * model.mass + p3[0] * p3[0] + p3[1] * p3[1] + p3[2] * p3[2],
            );
            let (eigs, _) = model.d2m2_normalized(&p).hermitian_eigen();
            // Fourfold degenerate E +/- omega.
            for i in 0..4 {
                assert!((eigs[i] - (e - omega)).abs() < 1e-10 * (1.0 + omega));
                assert!((eigs[4 + i] - (e + omega)).abs() < 1e-10 * (1.0 + omega));
            }
            // Fermion sign: M_2(-p)^T = -M_2(p).
            let refl =
                &model.fermion_block(&-p).transpose() + &model.fermion_block(&p);
            assert!(refl.frobenius_norm() < 1e-12);
        }
        // On shell: min eigenvalue 0, max 2 omega.
        let p = mass_shell(0.9, [0.3, -0.2, 0.5], 1).unwrap();
        let (eigs, _) = model.d2m2_normalized(&p.four_vector()).hermitian_eigen();
        assert!(eigs[0].abs() < 1e-12);
        assert!((eigs[7] - 2.0 * p.omega()).abs() < 1e-12);
    }

    #[test]
    fn covariance_suite() {
        let model = ElectroModel::new(1.2);
        let mut rng = StdRng::seed_from_u64(32);
        for _ in 0..200 {
            let a = random_sl2c(&mut rng);
            let p = random_massive(&mut rng).four_vector();
            let s = model.s(&a).unwrap();
            let lam_inv = lorentz_from_sl2c(&a).unwrap().inverse();
            let lhs = &(&(&s * &model.m(&p)) * &s.transpose()) - &model.m(&lam_inv.apply(&p));
            assert!(lhs.frobenius_norm() < 1e-10 * model.m(&p).frobenius_norm());
            // Intertwining.
            let tw = &(&s.conj() * &model.d()) - &(&model.d() * &s);
            assert!(tw.frobenius_norm() < 1e-10 * (1.0 + s.frobenius_norm()));
        }
    }

    #[test]
    fn conditions_pass_and_corruption_caught() {
        let model = ElectroModel::new(1.0);
        let mut rng = StdRng::seed_from_u64(33);
        for _ in 0..20 {
            // Positivity of DM(p) requires p on the model's own mass shell.
            let p = mass_shell(
                model.mass,
                [
                    rng.gen_range(-1.5..1.5),
                    rng.gen_range(-1.5..1.5),
                    rng.gen_range(-1.5..1.5),
                ],
                1,
            )
            .unwrap();
            let a = random_sl2c(&mut rng);
            let report = verify_conditions(&model, &p, &a, 1e-9).unwrap();
            assert!(report.max_residual() < 1e-10);
        }
        let bad = SignCorruptedModel(model);
        let p = mass_shell(1.0, [0.4, 0.1, -0.3], 1).unwrap();
        match verify_conditions(&bad, &p, &Sl2c::identity(), 1e-9) {
            Err(FieldsError::ConditionViolation { name, .. }) => {
                assert_eq!(name, "signed-transpose");
            }
            other => panic!("expected a condition violation, got {other:?}"),
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let model = ElectroModel::new(0.8);
        let mut rng = StdRng::seed_from_u64(34);
        for _ in 0..50 {
            let p = random_massive(&mut rng).four_vector();
            let m = model.m(&p);
            let rhs = &(&model.d() * &m) * &model.d().transpose();
            assert!((&m.adjoint() - &rhs).frobenius_norm() < 1e-10 * m.frobenius_norm());
        }
    }

    #[test]
    fn photon_basis_orthonormal_and_complete() {
        let mut rng = StdRng::seed_from_u64(35);
        for _ in 0..100 {
            let p = random_massless(&mut rng);
            let omega = p.omega();
            let basis = photon_basis(&p).unwrap();
            for r in 0..4 {
                for rp in 0..4 {
                    let ip = 2.0 * omega * cdot(&basis[r], &basis[rp]).re;
                    let target = if r == rp { 1.0 } else { 0.0 };
                    assert!((ip - target).abs() < 1e-10, "orthonormality ({r},{rp})");
                }
            }
            // Completeness: sum_r g_rr eps_r conj(eps_r)^T = g/(2 omega).
            let mut sum = CMat::zeros(4, 4);
            for r in 0..4 {
                sum = &sum + &outer(&basis[r], &basis[r]).scale_re(METRIC_DIAG[r]);
            }
            let target = CMat::from_fn(4, 4, |r, c| {
                if r == c {
                    Complex64::new(METRIC_DIAG[r] / (2.0 * omega), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            assert!((&sum - &target).frobenius_norm() < 1e-10);
        }
    }

    #[test]
    fn photon_basis_z_and_x_axis() {
        let p = mass_shell(0.0, [0.0, 0.0, 2.0], 1).unwrap();
        let b = photon_basis(&p).unwrap();
        let n = 1.0 / 2.0; // 1/sqrt(2 omega) with omega = 2
        assert!((b[1][1].re - n).abs() < 1e-14 && b[1][2].norm() < 1e-14);
        assert!((b[2][2].re - n).abs() < 1e-14 && b[2][1].norm() < 1e-14);
        // Chart singularity: momentum along x handled by the fallback.
        let px = mass_shell(0.0, [1.0, 0.0, 0.0], 1).unwrap();
        let bx = photon_basis(&px).unwrap();
        for r in 0..4 {
            for rp in 0..4 {
                let ip = 2.0 * px.omega() * cdot(&bx[r], &bx[rp]).re;
                let target = if r == rp { 1.0 } else { 0.0 };
                assert!((ip - target).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn transverse_polarization_conditions() {
        let mut rng = StdRng::seed_from_u64(36);
        let model = ElectroModel::new(1.0);
        for _ in 0..50 {
            let p = random_massless(&mut rng);
            let phase = rng.gen_range(0.0..TWO_PI);
            let t = rng.gen_range(0.0..1.0f64);
            let a1 = Complex64::new(t.sqrt(), 0.0);
            let a2 = Complex64::from_polar((1.0 - t).sqrt(), phase);
            let pol = transverse_polarization(&p, a1, a2).unwrap();
            // Coulomb condition.
            assert!(pol.w[0].norm() < 1e-13);
            // Lorentz condition p.w = 0 (Minkowski contraction).
            let pv = p.four_vector();
            let lor = pv.e * pol.w[0] - pv.px * pol.w[1] - pv.py * pol.w[2] - pv.pz * pol.w[3];
            assert!(lor.norm() < 1e-12);
            // Normalization 1/(2 omega).
            let norm = polarization_norm(&model, &pol);
            assert!((norm.re - 1.0 / (2.0 * p.omega())).abs() < 1e-12 && norm.im.abs() < 1e-13);
        }
        // Negative control.
        let p = mass_shell(0.0, [0.0, 0.0, 1.0], 1).unwrap();
        assert!(matches!(
            transverse_polarization(&p, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
            Err(FieldsError::NotNormalized { .. })
        ));
    }

    #[test]
    fn rest_frame_spinors() {
        let p = mass_shell(1.3, [0.0; 3], 1).unwrap();
        let sp = fermion_spinors(&p).unwrap();
        let (u0, v0) = rest_spinors();
        for r in 0..2 {
            for k in 0..4 {
                assert!((sp.u[r][k] - u0[r][k]).norm() < 1e-13);
                assert!((sp.v[r][k] - v0[r][k]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn spin_sums() {
        let mut rng = StdRng::seed_from_u64(37);
        let model = ElectroModel::new(1.1);
        for _ in 0..100 {
            let p = mass_shell(
                model.mass,
                [
                    rng.gen_range(-1.5..1.5),
                    rng.gen_range(-1.5..1.5),
                    rng.gen_range(-1.5..1.5),
                ],
                1,
            )
            .unwrap();
            let sp = fermion_spinors(&p).unwrap();
            let omega = p.omega();
            // 2 omega sum_r u_r conj(u_r)^T = (slash(p)+m) gamma_0.
            let mut usum = CMat::zeros(4, 4);
            let mut vsum = CMat::zeros(4, 4);
            for r in 0..2 {
                usum = &usum + &outer(&sp.u[r], &sp.u[r]);
                // conj(v_r) v_r^T has (k1,k2) entry conj(v_k1) v_k2.
                vsum = &vsum + &outer(&sp.v[r], &sp.v[r]).conj();
            }
            let pv = p.four_vector();
            let r_plus = r_matrix(&pv, model.mass);
            let r_minus_t = &gamma(0)
                * &(&slash(&pv) - &CMat::identity(4).scale_re(model.mass)).transpose();
            assert!(
                (&usum.scale_re(2.0 * omega) - &r_plus).frobenius_norm()
                    < 1e-10 * r_plus.frobenius_norm()
            );
            assert!(
                (&vsum.scale_re(2.0 * omega) - &r_minus_t).frobenius_norm()
                    < 1e-10 * (1.0 + r_minus_t.frobenius_norm())
            );
        }
    }

    #[test]
    fn rest_frame_dm_decomposition() {
        // DM(0)/(2 pi) equals 2m times the rest spinor outer products.
        let model = ElectroModel::new(0.75);
        let m = model.mass;
        let p = FourVector::new(m, 0.0, 0.0, 0.0);
        let dm = model.d2m2_normalized(&p);
        let (u0, v0) = rest_spinors();
        let mut target = CMat::zeros(8, 8);
        let mut upper = CMat::zeros(4, 4);
        let mut lower = CMat::zeros(4, 4);
        for r in 0..2 {
            upper = &upper + &outer(&v0[r], &v0[r]).conj();
            lower = &lower + &outer(&u0[r], &u0[r]);
        }
        target.set_block(0, 0, &upper.scale_re(2.0 * m));
        target.set_block(4, 4, &lower.scale_re(2.0 * m));
        assert!((&dm - &target).frobenius_norm() < 1e-12);
    }

    #[test]
    fn dual_orthogonality_and_norm() {
        let mut rng = StdRng::seed_from_u64(38);
        let model = ElectroModel::new(1.4);
        for _ in 0..50 {
            let p = mass_shell(
                model.mass,
                [
                    rng.gen_range(-1.5..1.5),
                    rng.gen_range(-1.5..1.5),
                    rng.gen_range(-1.5..1.5),
                ],
                1,
            )
            .unwrap();
            let sp = fermion_spinors(&p).unwrap();
            let dual = dual_polarizations(&p).unwrap();
            let omega = p.omega();
            for r in 0..2 {
                for rp in 0..2 {
                    let target = if r == rp { 1.0 / (2.0 * omega) } else { 0.0 };
                    // conj(u_r) . w_{p,r'} = delta / (2 omega).
                    let e = cdot(&sp.u[r], &dual.w_p[rp]);
                    assert!((e.re - target).abs() < 1e-12 && e.im.abs() < 1e-12);
                    // v_r . w_{a,r'} = delta / (2 omega), plain contraction.
                    let a = dot(&sp.v[r], &dual.w_a[rp]);
                    assert!((a.re - target).abs() < 1e-12 && a.im.abs() < 1e-12);
                }
            }
            // Unit-coefficient mixtures meet the 1/(2 omega) normalization.
            let raw = [
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ];
            let total: f64 = raw.iter().map(|z| z.norm_sqr()).sum();
            let c = raw.map(|z| z / total.sqrt());
            let pol = general_polarization(&p, c).unwrap();
            let norm = polarization_norm(&model, &pol);
            assert!(
                (norm.re - 1.0 / (2.0 * omega)).abs() < 1e-12 && norm.im.abs() < 1e-12,
                "pold normalization failed: {norm}"
            );
        }
        // Negative control: unnormalized coefficients rejected.
        let p = mass_shell(1.4, [0.1, 0.0, 0.0], 1).unwrap();
        let c = [
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        assert!(matches!(
            general_polarization(&p, c),
            Err(FieldsError::NotNormalized { .. })
        ));
    }

    #[test]
    fn coulomb_preserved_under_boost_rotation_transport() {
        // A z-boost followed by a rotation transports a z-directed transverse
        // polarization while keeping both the Coulomb and Lorentz conditions.
        let mut rng = StdRng::seed_from_u64(39);
        for _ in 0..50 {
            let p = mass_shell(0.0, [0.0, 0.0, rng.gen_range(0.2..2.0)], 1).unwrap();
            let t: f64 = rng.gen_range(0.0..1.0);
            let a1 = Complex64::new(t.sqrt(), 0.0);
            let a2 = Complex64::from_polar((1.0 - t).sqrt(), rng.gen_range(0.0..TWO_PI));
            let pol = transverse_polarization(&p, a1, a2).unwrap();
            let axis_angle: f64 = rng.gen_range(0.0..fmath::PI);
            let axis = {
                let raw: [f64; 3] = [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ];
                let n = fmath::sqrt(raw.iter().map(|x| x * x).sum::<f64>());
                [raw[0] / n, raw[1] / n, raw[2] / n]
            };
            let a = boost_z(rng.gen_range(-1.0..1.0)).mul(&rotation(axis, axis_angle));
            let lam_inv = lorentz_from_sl2c(&a).unwrap().inverse();
            // Covariant transport of the photon slot.
            let w4 = pol.photon_part();
            let mut w4t = [Complex64::new(0.0, 0.0); 4];
            for mu in 0..4 {
                for nu in 0..4 {
                    w4t[mu] += lam_inv.m[mu][nu] * w4[nu];
                }
            }
            let pv = lam_inv.apply(&p.four_vector());
            // Coulomb condition survives boost-then-rotation transport order.
            assert!(w4t[0].norm() < 1e-12, "Coulomb violated: {:?}", w4t[0]);
            let lor = pv.e * w4t[0] - pv.px * w4t[1] - pv.py * w4t[2] - pv.pz * w4t[3];
            assert!(lor.norm() < 1e-12);
        }
    }

    #[test]
    fn scalar_model_conditions() {
        let model = ScalarModel;
        let p = mass_shell(1.0, [0.2, 0.0, 0.1], 1).unwrap();
        let report = verify_conditions(&model, &p, &Sl2c::identity(), 1e-12).unwrap();
        assert!(report.max_residual() < 1e-14);
    }
}
