//! Gamma-matrix algebra in the fixed Dirac representation, slash notation,
//! the Hermitian matrix R(p,mu) = (slash(p)+mu) gamma_0 with its closed-form
//! semidefinite factorization, and the bispinor representation of SL(2,C)
//! with its transport identities.

use core::fmt;

use num_complex::Complex64;

use crate::cmatrix::CMat;
use crate::fmath;
use crate::kinematics::{
    lorentz_from_sl2c, pauli, pauli_p, FourVector, KinematicsError, Sl2c, METRIC_DIAG,
};

#[derive(Debug, Clone, PartialEq)]
pub enum DiracError {
    /// R(p,mu) has a negative eigenvalue beyond tolerance, so no C^*C
    /// factorization exists.
    NotSemidefinite { min_eigenvalue: f64 },
    NotUnimodular,
    /// A transport identity failed; `clause` indexes the failing check.
    IdentityViolation { clause: usize, residual: f64 },
}

impl fmt::Display for DiracError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiracError::NotSemidefinite { min_eigenvalue } => {
                write!(f, "matrix is not positive semidefinite (min eigenvalue {min_eigenvalue})")
            }
            DiracError::NotUnimodular => write!(f, "SL(2,C) element required"),
            DiracError::IdentityViolation { clause, residual } => {
                write!(f, "spinor identity clause {clause} violated (residual {residual})")
            }
        }
    }
}

impl From<KinematicsError> for DiracError {
    fn from(_: KinematicsError) -> Self {
        DiracError::NotUnimodular
    }
}

/// Gamma matrix: gamma_0 = diag(sigma_0, -sigma_0), gamma_j antidiagonal
/// (sigma_j, -sigma_j) blocks.
pub fn gamma(mu: usize) -> CMat {
    let mut g = CMat::zeros(4, 4);
    let s = pauli(mu);
    if mu == 0 {
        g.set_block(0, 0, &s);
        g.set_block(2, 2, &s.scale_re(-1.0));
    } else {
        g.set_block(0, 2, &s);
        g.set_block(2, 0, &s.scale_re(-1.0));
    }
    g
}

/// gamma_mu^* = g_{mu mu} gamma_mu (the conjugate transpose in this
/// representation).
pub fn gamma_star(mu: usize) -> CMat {
    gamma(mu).scale_re(METRIC_DIAG[mu])
}

/// slash(p) = sum_k p_(k) gamma_k^* = [[E sigma_0, -P(0,p)], [P(0,p), -E sigma_0]].
pub fn slash(p: &FourVector) -> CMat {
    slash_c(&[
        Complex64::new(p.e, 0.0),
        Complex64::new(p.px, 0.0),
        Complex64::new(p.py, 0.0),
        Complex64::new(p.pz, 0.0),
    ])
}

/// Slash contraction with complex coefficients: sum_k w_k gamma_k^*
/// (used for polarization vectors).
pub fn slash_c(w: &[Complex64; 4]) -> CMat {
    let mut m = CMat::zeros(4, 4);
    for (k, wk) in w.iter().enumerate() {
        let g = gamma_star(k);
        for r in 0..4 {
            for c in 0..4 {
                m[(r, c)] += wk * g[(r, c)];
            }
        }
    }
    m
}

/// R(p,mu) = (slash(p) + mu) gamma_0; Hermitian for real p with doubly
/// degenerate eigenvalues E +/- sqrt(mu^2 + |p|^2).
pub fn r_matrix(p: &FourVector, mu: f64) -> CMat {
    let sl = &slash(p) + &CMat::identity(4).scale_re(mu);
    &sl * &gamma(0)
}

/// Upper block-triangular factor C_e with C_e^* C_e = R(p,mu):
/// C_e = [[(E+mu) sigma_0, P(0,p)], [0, sqrt(p.p - mu^2) sigma_0]] / sqrt(E+mu).
///
/// Requires R(p,mu) positive semidefinite (E >= 0 and p.p >= mu^2). When
/// E + mu is too small for the closed form, falls back to the
/// eigendecomposition square root.
pub fn factor_r(p: &FourVector, mu: f64) -> Result<CMat, DiracError> {
    let r = r_matrix(p, mu);
    let disc = p.square() - mu * mu;
    if p.e < 0.0 || disc < -1e-10 * r.frobenius_norm().max(1.0) {
        return Err(DiracError::NotSemidefinite {
            min_eigenvalue: r.min_eigenvalue(),
        });
    }
    if p.e + mu > 1e-12 {
        let root = fmath::sqrt(1.0 / (p.e + mu));
        let spatial = pauli_p(&FourVector::new(0.0, p.px, p.py, p.pz));
        let mut c = CMat::zeros(4, 4);
        c.set_block(0, 0, &pauli(0).scale_re((p.e + mu) * root));
        c.set_block(0, 2, &spatial.scale_re(root));
        c.set_block(2, 2, &pauli(0).scale_re(fmath::sqrt(disc.max(0.0)) * root));
        Ok(c)
    } else {
        // Division guard: generic Hermitian square root R = (V sqrt(d) V^*)^2.
        let (eigs, v) = r.hermitian_eigen();
        if eigs[0] < -1e-10 * r.frobenius_norm().max(1.0) {
            return Err(DiracError::NotSemidefinite {
                min_eigenvalue: eigs[0],
            });
        }
        let d = CMat::from_fn(4, 4, |r0, c0| {
            if r0 == c0 {
                Complex64::new(fmath::sqrt(eigs[r0].max(0.0)), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok(&(&v * &d) * &v.adjoint())
    }
}

/// Bispinor representation of A in SL(2,C); `sbar` is the matrix acting on
/// the electron block, the conjugate-block action is its entrywise conjugate.
#[derive(Debug, Clone)]
pub struct SpinorRep {
    sbar: CMat,
}

impl SpinorRep {
    pub fn sbar(&self) -> &CMat {
        &self.sbar
    }

    /// Entrywise conjugate (the representation on the conjugate block).
    pub fn s(&self) -> CMat {
        self.sbar.conj()
    }

    pub fn s_t(&self) -> CMat {
        self.sbar.conj().transpose()
    }
}

/// sbar(A) = (1/2) [[A^{-1}+A^*, A^{-1}-A^*], [A^{-1}-A^*, A^{-1}+A^*]].
pub fn spinor_rep(a: &Sl2c) -> SpinorRep {
    let ainv = a.inverse();
    let astar = a.adjoint();
    let plus = (ainv.matrix() + &astar).scale_re(0.5);
    let minus = (ainv.matrix() - &astar).scale_re(0.5);
    let mut m = CMat::zeros(4, 4);
    m.set_block(0, 0, &plus);
    m.set_block(0, 2, &minus);
    m.set_block(2, 0, &minus);
    m.set_block(2, 2, &plus);
    SpinorRep { sbar: m }
}

/// Real orthogonal similarity B (and its inverse) to the equivalent
/// representation with antidiagonal gamma_0':
/// B = (1/sqrt(2)) [[sigma_0, -sigma_0], [sigma_0, sigma_0]].
pub fn similarity_b() -> (CMat, CMat) {
    let s = 1.0 / fmath::sqrt(2.0);
    let id = pauli(0);
    let mut b = CMat::zeros(4, 4);
    b.set_block(0, 0, &id.scale_re(s));
    b.set_block(0, 2, &id.scale_re(-s));
    b.set_block(2, 0, &id.scale_re(s));
    b.set_block(2, 2, &id.scale_re(s));
    (b.clone(), b.transpose())
}

/// Residuals of the four spinor-transport identities for (A, p):
/// 1. slash(p) = sbar slash(p') sbar^{-1} with p = Lambda^{-1} p'
/// 2. sum_nu gamma_nu^* InvLambda_{nu mu} = sbar gamma_mu^* sbar^{-1}
/// 3. sum_nu InvLambda_{mu nu} gamma_nu^* = S^T gamma_mu^* (S^T)^{-1}
/// 4. sbar'^{-1} gamma_0' (S'^T)^{-1} = gamma_0' in the primed representation
#[derive(Debug, Clone)]
pub struct SpIdentityReport {
    pub residuals: [f64; 4],
}

impl SpIdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

pub fn verify_sp_identities(
    a: &Sl2c,
    p: &FourVector,
    tol: f64,
) -> Result<SpIdentityReport, DiracError> {
    let lam = lorentz_from_sl2c(a)?;
    let lam_inv = lam.inverse();
    let rep = spinor_rep(a);
    let sbar = rep.sbar();
    let sbar_inv = spinor_rep(&a.inverse()).sbar;
    let st = rep.s_t();
    let st_inv = st.inverse().expect("spinor representation is invertible");

    // 1: slash(Lambda^{-1} p') = sbar slash(p') sbar^{-1}.
    let p_prime = lam.apply(p);
    let lhs1 = slash(p);
    let rhs1 = &(sbar * &slash(&p_prime)) * &sbar_inv;
    let r1 = rel_residual(&lhs1, &rhs1);

    // 2 and 3: column- and row-contractions of gamma^* with Lambda^{-1}.
    let mut r2 = 0.0f64;
    let mut r3 = 0.0f64;
    for mu in 0..4 {
        let mut lhs2 = CMat::zeros(4, 4);
        let mut lhs3 = CMat::zeros(4, 4);
        for nu in 0..4 {
            let g = gamma_star(nu);
            lhs2 = &lhs2 + &g.scale_re(lam_inv.m[nu][mu]);
            lhs3 = &lhs3 + &g.scale_re(lam_inv.m[mu][nu]);
        }
        let rhs2 = &(sbar * &gamma_star(mu)) * &sbar_inv;
        let rhs3 = &(&st * &gamma_star(mu)) * &st_inv;
        r2 = r2.max(rel_residual(&lhs2, &rhs2));
        r3 = r3.max(rel_residual(&lhs3, &rhs3));
    }

    // 4: invariance of the antidiagonal gamma_0' under the primed
    // representation: sbar'^{-1} gamma_0' (S'^T)^{-1} = gamma_0'.
    let (b, binv) = similarity_b();
    let g0p = &(&b * &gamma(0)) * &binv;
    let sbar_p_inv = &(&b * &sbar_inv) * &binv;
    let st_p_inv = &(&b * &st_inv) * &binv;
    let lhs4 = &(&sbar_p_inv * &g0p) * &st_p_inv;
    let r4 = rel_residual(&lhs4, &g0p);

    let report = SpIdentityReport {
        residuals: [r1, r2, r3, r4],
    };
    for (i, &res) in report.residuals.iter().enumerate() {
        if res > tol {
            return Err(DiracError::IdentityViolation {
                clause: i + 1,
                residual: res,
            });
        }
    }
    Ok(report)
}

fn rel_residual(a: &CMat, b: &CMat) -> f64 {
    (a - b).frobenius_norm() / (1.0 + b.frobenius_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::testutil::{random_four_vector, random_massive, random_sl2c};
    use crate::kinematics::{boost_z, mass_shell, rotation};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn gamma_basics() {
        let g0 = gamma(0);
        assert!((&(&g0 * &g0) - &CMat::identity(4)).frobenius_norm() < 1e-15);
        for mu in 0..4 {
            // gamma^* is the conjugate transpose and g_{mu mu} gamma_mu.
            let gs = gamma_star(mu);
            assert!((&gs - &gamma(mu).adjoint()).frobenius_norm() < 1e-15);
            assert!((&gs - &gamma(mu).scale_re(METRIC_DIAG[mu])).frobenius_norm() < 1e-15);
            // gamma_0 gamma_mu gamma_0 = gamma_mu^* and gamma_mu^* = gamma_mu^{-1}.
            let sandwiched = &(&g0 * &gamma(mu)) * &g0;
            assert!((&sandwiched - &gs).frobenius_norm() < 1e-15);
            assert!((&(&gs * &gamma(mu)) - &CMat::identity(4)).frobenius_norm() < 1e-15);
        }
    }

    #[test]
    fn clifford_relations() {
        for mu in 0..4 {
            for nu in 0..4 {
                let anti = &(&gamma(mu) * &gamma(nu)) + &(&gamma(nu) * &gamma(mu));
                let target = if mu == nu {
                    CMat::identity(4).scale_re(2.0 * METRIC_DIAG[mu])
                } else {
                    CMat::zeros(4, 4)
                };
                assert!(
                    (&anti - &target).frobenius_norm() < 1e-15,
                    "Clifford relation failed for ({mu},{nu})"
                );
            }
        }
    }

    #[test]
    fn slash_forms() {
        let m = 1.3;
        let rest = slash(&FourVector::new(m, 0.0, 0.0, 0.0));
        assert!((&rest - &gamma(0).scale_re(m)).frobenius_norm() < 1e-15);
        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..20 {
            let a = random_four_vector(&mut rng);
            let b = random_four_vector(&mut rng);
            let lin = &slash(&(a + b)) - &(&slash(&a) + &slash(&b));
            assert!(lin.frobenius_norm() < 1e-12);
            assert!((&slash(&-a) + &slash(&a)).frobenius_norm() < 1e-12);
            // Block form: [[E sigma_0, -P(0,p)], [P(0,p), -E sigma_0]].
            let sl = slash(&a);
            let sp = pauli_p(&FourVector::new(0.0, a.px, a.py, a.pz));
            assert!((&sl.block(0, 2, 2, 2) + &sp).frobenius_norm() < 1e-15);
            assert!((&sl.block(2, 0, 2, 2) - &sp).frobenius_norm() < 1e-15);
        }
    }

    #[test]
    fn r_matrix_rest_frame_and_reflection() {
        let m = 0.7;
        let r = r_matrix(&FourVector::new(m, 0.0, 0.0, 0.0), m);
        let mut expected = CMat::zeros(4, 4);
        expected.set_block(0, 0, &pauli(0).scale_re(2.0 * m));
        assert!((&r - &expected).frobenius_norm() < 1e-15);
        let mut rng = StdRng::seed_from_u64(22);
        for _ in 0..20 {
            let p = random_four_vector(&mut rng);
            let mu = rng.gen_range(-1.0..1.0);
            assert!(r_matrix(&p, mu).hermiticity_defect() < 1e-14);
            // -R(-p, m) = R(p, -m).
            let refl = &r_matrix(&-p, mu).scale_re(-1.0) - &r_matrix(&p, -mu);
            assert!(refl.frobenius_norm() < 1e-13);
        }
    }

    #[test]
    fn r_matrix_spectrum() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..100 {
            let p = random_four_vector(&mut rng);
            let mu = rng.gen_range(-1.5..1.5);
            let (eigs, _) = r_matrix(&p, mu).hermitian_eigen();
            let s = fmath::sqrt(mu * mu + p.px * p.px + p.py * p.py + p.pz * p.pz);
            let expect = [p.e - s, p.e - s, p.e + s, p.e + s];
            for (got, want) in eigs.iter().zip(expect) {
                assert!(
                    (got - want).abs() < 1e-10 * (1.0 + s.abs() + p.e.abs()),
                    "eigenvalue {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn factor_r_reconstructs() {
        // Rest frame with mu = m.
        let m = 1.1;
        let p = FourVector::new(m, 0.0, 0.0, 0.0);
        let c = factor_r(&p, m).unwrap();
        let res = (&(&c.adjoint() * &c) - &r_matrix(&p, m)).frobenius_norm();
        assert!(res < 1e-13);
        // Random on-shell pair sums, both signs of mu.
        let mut rng = StdRng::seed_from_u64(24);
        for _ in 0..100 {
            let p1 = random_massive(&mut rng);
            let p2 = random_massive(&mut rng);
            let sum = p1.four_vector() + p2.four_vector();
            for mu in [p1.mass(), -p1.mass()] {
                let c = factor_r(&sum, mu).unwrap();
                let r = r_matrix(&sum, mu);
                let res = (&(&c.adjoint() * &c) - &r).frobenius_norm();
                assert!(res < 1e-10 * r.frobenius_norm(), "residual {res}");
                // Upper block-triangular.
                assert!(c.block(2, 0, 2, 2).frobenius_norm() == 0.0);
            }
        }
    }

    #[test]
    fn factor_r_rejects_indefinite() {
        // Spacelike p with p.p < mu^2 gives an indefinite R.
        let p = FourVector::new(0.2, 0.0, 0.0, 1.0);
        match factor_r(&p, 1.0) {
            Err(DiracError::NotSemidefinite { min_eigenvalue }) => {
                assert!(min_eigenvalue < 0.0);
            }
            other => panic!("expected NotSemidefinite, got {other:?}"),
        }
    }

    #[test]
    fn factor_r_division_guard() {
        // E + mu = 0 on the null boundary exercises the eigen fallback.
        let p = FourVector::new(1.0, 0.0, 0.0, 0.5);
        let mu = -1.0;
        // p.p = 0.75 < mu^2: indefinite, must error.
        assert!(factor_r(&p, mu).is_err());
        let q = FourVector::new(1.0, 0.0, 0.0, 0.0);
        let c = factor_r(&q, -1.0 + 1e-14).unwrap();
        let res = (&(&c.adjoint() * &c) - &r_matrix(&q, -1.0 + 1e-14)).frobenius_norm();
        assert!(res < 1e-10);
    }

    #[test]
    fn spinor_rep_transports_r() {
        let mut rng = StdRng::seed_from_u64(25);
        for _ in 0..100 {
            let a = random_sl2c(&mut rng);
            let p = random_four_vector(&mut rng);
            let m = rng.gen_range(0.1..2.0);
            let rep = spinor_rep(&a);
            let lam_inv = lorentz_from_sl2c(&a).unwrap().inverse();
            let lhs = &(rep.sbar() * &r_matrix(&p, m)) * &rep.s_t();
            let rhs = r_matrix(&lam_inv.apply(&p), m);
            assert!(
                (&lhs - &rhs).frobenius_norm() < 1e-10 * (1.0 + rhs.frobenius_norm()),
                "transport failed"
            );
        }
    }

    #[test]
    fn spinor_rep_inverse_and_product() {
        let mut rng = StdRng::seed_from_u64(26);
        for _ in 0..50 {
            let a = random_sl2c(&mut rng);
            let b = random_sl2c(&mut rng);
            // sbar(A)^{-1} = sbar(A^{-1}) = gamma_0 S^T gamma_0.
            let rep = spinor_rep(&a);
            let inv = spinor_rep(&a.inverse());
            let prod = &(rep.sbar() * inv.sbar()) - &CMat::identity(4);
            assert!(prod.frobenius_norm() < 1e-10);
            let alt = &(&gamma(0) * &rep.s_t()) * &gamma(0);
            assert!((&alt - inv.sbar()).frobenius_norm() < 1e-10);
            // det sbar = 1.
            // Product rule is order-reversing, matching M(p) -> M(Lambda^{-1}p).
            let sab = spinor_rep(&a.mul(&b));
            let sba = &spinor_rep(&b).sbar * &spinor_rep(&a).sbar;
            assert!((sab.sbar() - &sba).frobenius_norm() < 1e-9);
        }
    }

    #[test]
    fn similarity_b_properties() {
        let (b, binv) = similarity_b();
        assert!((&(&b * &binv) - &CMat::identity(4)).frobenius_norm() < 1e-15);
        assert!((&(&b.transpose() * &b) - &CMat::identity(4)).frobenius_norm() < 1e-15);
        // gamma_0' is antidiagonal sigma_0 blocks.
        let g0p = &(&b * &gamma(0)) * &binv;
        let mut expected = CMat::zeros(4, 4);
        expected.set_block(0, 2, &pauli(0));
        expected.set_block(2, 0, &pauli(0));
        assert!((&g0p - &expected).frobenius_norm() < 1e-14);
        // slash(p) gamma_0' in the primed representation is
        // diag(P(E,-p), P(p)).
        let mut rng = StdRng::seed_from_u64(27);
        for _ in 0..20 {
            let p = random_four_vector(&mut rng);
            let slp = &(&b * &slash(&p)) * &binv;
            let lhs = &slp * &g0p;
            let mut rhs = CMat::zeros(4, 4);
            rhs.set_block(0, 0, &pauli_p(&FourVector::new(p.e, -p.px, -p.py, -p.pz)));
            rhs.set_block(2, 2, &pauli_p(&p));
            assert!((&lhs - &rhs).frobenius_norm() < 1e-13);
        }
    }

    #[test]
    fn sp_identities_hold() {
        let mut rng = StdRng::seed_from_u64(28);
        // Identity element: all residuals vanish.
        let rep = verify_sp_identities(
            &Sl2c::identity(),
            &FourVector::new(1.0, 0.2, 0.1, 0.4),
            1e-12,
        )
        .unwrap();
        assert!(rep.max_residual() < 1e-14);
        // Pure boost, rotation-boost composite, and generic elements.
        let composite = rotation([0.0, 1.0, 0.0], 0.8).mul(&boost_z(0.9));
        for a in [boost_z(0.6), composite] {
            let rep = verify_sp_identities(&a, &FourVector::new(2.0, 0.3, -0.2, 0.5), 1e-10);
            assert!(rep.unwrap().max_residual() < 1e-10);
        }
        for _ in 0..100 {
            let a = random_sl2c(&mut rng);
            let p = random_four_vector(&mut rng);
            let rep = verify_sp_identities(&a, &p, 1e-9).unwrap();
            assert!(rep.max_residual() < 1e-10);
        }
    }

    #[test]
    fn factor_r_on_shell_photon_electron_sum() {
        // Sum of a photon and an electron momentum with mu = m stays
        // factorizable (the s-channel configuration).
        let mut rng = StdRng::seed_from_u64(29);
        for _ in 0..50 {
            let e = random_massive(&mut rng);
            let k = mass_shell(
                0.0,
                [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(0.1..1.0),
                ],
                1,
            )
            .unwrap();
            let sum = e.four_vector() + k.four_vector();
            let c = factor_r(&sum, e.mass()).unwrap();
            let r = r_matrix(&sum, e.mass());
            assert!((&(&c.adjoint() * &c) - &r).frobenius_norm() < 1e-10 * r.frobenius_norm());
        }
    }
}
