//! Seeded property-verification suites over the core identities. Each suite
//! reports one row per identity with the maximum residual observed over the
//! requested number of random trials.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use vevlab_core::cmatrix::CMat;
use vevlab_core::dirac::{factor_r, gamma, r_matrix, spinor_rep, verify_sp_identities};
use vevlab_core::fields::{
    verify_conditions, ElectroModel, SignCorruptedModel, TwoPointModel,
};
use vevlab_core::fmath;
use vevlab_core::kinematics::{
    lorentz_from_sl2c, mass_shell, pauli_p, pure_boost, FourVector, LorentzMatrix,
    OnShellMomentum, Sl2c, METRIC_DIAG,
};
use vevlab_core::scattering::{
    com_photon_energy, compton_com_momenta, constructed_compton, feynman_compton,
    fractional_error, verify_rest_frame_identity, verify_s_channel, verify_u_channel,
    ComptonKinematics,
};
use vevlab_core::wick::{check_hankel, enumerate_pairings, moments, permutation_sign, ScalarMeasure};

/// One verification row: identity name, worst residual, and its tolerance.
#[derive(Debug, Clone)]
pub struct CheckRow {
    pub suite: &'static str,
    pub check: &'static str,
    pub residual: f64,
    pub tol: f64,
}

impl CheckRow {
    pub fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Kinematics,
    Dirac,
    Fields,
    Wick,
    Scattering,
    All,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Suite> {
        match name {
            "kinematics" => Some(Suite::Kinematics),
            "dirac" => Some(Suite::Dirac),
            "fields" => Some(Suite::Fields),
            "wick" => Some(Suite::Wick),
            "scattering" => Some(Suite::Scattering),
            "all" => Some(Suite::All),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Random draws.
// ---------------------------------------------------------------------------

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_sl2c<R: Rng>(rng: &mut R) -> Sl2c {
    loop {
        let m = CMat::from_fn(2, 2, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        if let Ok(a) = Sl2c::normalized(m) {
            return a;
        }
    }
}

fn random_four_vector<R: Rng>(rng: &mut R) -> FourVector {
    FourVector::new(
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
    )
}

fn random_massive<R: Rng>(rng: &mut R) -> OnShellMomentum {
    let m = rng.gen_range(0.3..2.0);
    mass_shell(
        m,
        [
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
        ],
        1,
    )
    .expect("positive mass shell")
}

/// Random center-of-momentum Compton legs (photon out, electron out, photon
/// in, electron in) with the rest-frame photon energy and angle returned.
fn random_compton<R: Rng>(rng: &mut R) -> (f64, f64, f64, [OnShellMomentum; 4]) {
    let m = rng.gen_range(0.5..1.5);
    let rho_hat = m * fmath::exp(rng.gen_range(-6.0..0.0));
    let theta = rng.gen_range(0.3..2.8);
    let phi = rng.gen_range(0.0..6.28);
    let rho = com_photon_energy(m, rho_hat);
    let p = compton_com_momenta(m, rho, theta, phi).expect("valid Compton kinematics");
    (m, rho_hat, theta, p)
}

/// Collinear backscatter base in the incident electron's rest frame, with
/// transverse polarizations for both photons.
pub fn collinear_base<R: Rng>(
    rng: &mut R,
) -> ([OnShellMomentum; 4], [Complex64; 4], [Complex64; 4]) {
    let m = rng.gen_range(0.5..1.5);
    let rho = m * fmath::exp(rng.gen_range(-3.0..0.5));
    let rho_back = rho / (1.0 + 2.0 * rho / m);
    let p = [
        mass_shell(0.0, [0.0, 0.0, -rho_back], 1).unwrap(),
        mass_shell(m, [0.0, 0.0, rho + rho_back], 1).unwrap(),
        mass_shell(0.0, [0.0, 0.0, rho], 1).unwrap(),
        mass_shell(m, [0.0, 0.0, 0.0], 1).unwrap(),
    ];
    let zero = c(0.0, 0.0);
    let mut tr = |_: ()| {
        [
            zero,
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            zero,
        ]
    };
    let eps_out = tr(());
    let eps_in = tr(());
    (p, eps_out, eps_in)
}

/// Transports four-vectors by Lambda and polarization components by
/// g Lambda g (the covariant-component law).
pub fn transport(
    lam: &LorentzMatrix,
    p: &[OnShellMomentum; 4],
    eps: &[Complex64; 4],
) -> ([OnShellMomentum; 4], [Complex64; 4]) {
    let moved: [OnShellMomentum; 4] = [0, 1, 2, 3].map(|k| {
        let q = lam.apply(&p[k].four_vector());
        mass_shell(p[k].mass(), q.spatial(), 1).expect("transported shell")
    });
    let flip = |w: &[Complex64; 4]| [w[0], -w[1], -w[2], -w[3]];
    let apply_c4 = |w: &[Complex64; 4]| -> [Complex64; 4] {
        let re = lam.apply(&FourVector::new(w[0].re, w[1].re, w[2].re, w[3].re));
        let im = lam.apply(&FourVector::new(w[0].im, w[1].im, w[2].im, w[3].im));
        [
            c(re.e, im.e),
            c(re.px, im.px),
            c(re.py, im.py),
            c(re.pz, im.pz),
        ]
    };
    (moved, flip(&apply_c4(&flip(eps))))
}

fn rel(diff: &CMat, scale: f64) -> f64 {
    diff.frobenius_norm() / scale.max(1.0)
}

// ---------------------------------------------------------------------------
// Suites.
// ---------------------------------------------------------------------------

fn kinematics_suite(trials: usize, rng: &mut ChaCha12Rng, tol: f64) -> Vec<CheckRow> {
    let mut hom = 0.0f64;
    let mut metric = 0.0f64;
    let mut pauli_cov = 0.0f64;
    let mut boost = 0.0f64;
    let mut shell = 0.0f64;
    for _ in 0..trials {
        let a = random_sl2c(rng);
        let b = random_sl2c(rng);
        let la = lorentz_from_sl2c(&a).unwrap();
        let lb = lorentz_from_sl2c(&b).unwrap();
        let lab = lorentz_from_sl2c(&a.mul(&b)).unwrap();
        let prod = la.mul(&lb);
        let mut d = 0.0f64;
        for mu in 0..4 {
            for nu in 0..4 {
                d = d.max((lab.m[mu][nu] - prod.m[mu][nu]).abs());
            }
        }
        hom = hom.max(d);
        metric = metric.max(la.metric_defect());

        let q = random_four_vector(rng);
        let lhs = &(a.matrix() * &pauli_p(&q)) * &a.adjoint();
        pauli_cov = pauli_cov.max(rel(&(&lhs - &pauli_p(&la.apply(&q))), lhs.frobenius_norm()));

        let p = random_massive(rng);
        let lam = lorentz_from_sl2c(&pure_boost(&p).unwrap()).unwrap();
        let rest = FourVector::new(p.mass(), 0.0, 0.0, 0.0);
        let moved = lam.apply(&rest);
        let target = p.four_vector();
        boost = boost.max(
            [
                moved.e - target.e,
                moved.px - target.px,
                moved.py - target.py,
                moved.pz - target.pz,
            ]
            .iter()
            .fold(0.0f64, |acc, x| acc.max(x.abs()))
                / p.omega(),
        );
        shell = shell.max((p.four_vector().square() - p.mass() * p.mass()).abs());
    }
    vec![
        CheckRow { suite: "kinematics", check: "lorentz-homomorphism", residual: hom, tol },
        CheckRow { suite: "kinematics", check: "metric-preservation", residual: metric, tol },
        CheckRow { suite: "kinematics", check: "pauli-covariance", residual: pauli_cov, tol },
        CheckRow { suite: "kinematics", check: "pure-boost-transport", residual: boost, tol },
        CheckRow { suite: "kinematics", check: "mass-shell-consistency", residual: shell, tol },
    ]
}

fn dirac_suite(trials: usize, rng: &mut ChaCha12Rng, tol: f64) -> Vec<CheckRow> {
    // Clifford relations are deterministic.
    let mut clifford = 0.0f64;
    for mu in 0..4 {
        for nu in 0..4 {
            let anti = &(&gamma(mu) * &gamma(nu)) + &(&gamma(nu) * &gamma(mu));
            let target = CMat::identity(4).scale_re(2.0 * if mu == nu { METRIC_DIAG[mu] } else { 0.0 });
            clifford = clifford.max((&anti - &target).frobenius_norm());
        }
    }

    let mut eig = 0.0f64;
    let mut factor = 0.0f64;
    let mut r_cov = 0.0f64;
    let mut sp = [0.0f64; 4];
    for _ in 0..trials {
        let p = random_massive(rng);
        let mu = rng.gen_range(0.0..1.5);
        let pv = p.four_vector();
        let r = r_matrix(&pv, mu);
        let (vals, _) = r.hermitian_eigen();
        let split = fmath::sqrt(mu * mu + pv.spatial_norm() * pv.spatial_norm());
        let expect = [pv.e - split, pv.e - split, pv.e + split, pv.e + split];
        for (v, e) in vals.iter().zip(expect.iter()) {
            eig = eig.max((v - e).abs());
        }
        if pv.e - split >= 0.0 {
            let cfac = factor_r(&pv, mu).unwrap();
            factor = factor.max(rel(&(&(&cfac.adjoint() * &cfac) - &r), r.frobenius_norm()));
        }

        // sbar(A) R(q) s(A)^T = R(Lambda(A)^{-1} q).
        let a = random_sl2c(rng);
        let lam_inv = lorentz_from_sl2c(&a).unwrap().inverse();
        let rep = spinor_rep(&a);
        let lhs = &(rep.sbar() * &r) * &rep.s_t();
        let rhs = r_matrix(&lam_inv.apply(&pv), mu);
        r_cov = r_cov.max(rel(&(&lhs - &rhs), rhs.frobenius_norm()));

        let report = verify_sp_identities(&a, &pv, 1e6).expect("loose tolerance");
        for (k, res) in report.residuals.iter().enumerate() {
            sp[k] = sp[k].max(*res);
        }
    }
    vec![
        CheckRow { suite: "dirac", check: "clifford-anticommutation", residual: clifford, tol },
        CheckRow { suite: "dirac", check: "r-eigenvalue-split", residual: eig, tol },
        CheckRow { suite: "dirac", check: "r-factorization", residual: factor, tol },
        CheckRow { suite: "dirac", check: "r-covariance", residual: r_cov, tol },
        CheckRow { suite: "dirac", check: "sp-identity-slash", residual: sp[0], tol },
        CheckRow { suite: "dirac", check: "sp-identity-column", residual: sp[1], tol },
        CheckRow { suite: "dirac", check: "sp-identity-row", residual: sp[2], tol },
        CheckRow { suite: "dirac", check: "sp-identity-antidiagonal", residual: sp[3], tol },
    ]
}

fn fields_suite(trials: usize, rng: &mut ChaCha12Rng, tol: f64, corrupt: bool) -> Vec<CheckRow> {
    let model = ElectroModel::new(1.0);
    let corrupted = SignCorruptedModel(model);
    let names = [
        "block-structure",
        "conjugation-involution",
        "signed-transpose",
        "conjugate-symmetry",
        "positivity",
        "covariance",
        "intertwining",
    ];
    let mut worst = [0.0f64; 7];
    let mut spectral = 0.0f64;
    for _ in 0..trials {
        let p = random_massive_with_mass(rng, 1.0);
        let a = random_sl2c(rng);
        let report = if corrupt {
            run_conditions(&corrupted, &p, &a)
        } else {
            run_conditions(&model, &p, &a)
        };
        for (k, name) in names.iter().enumerate() {
            if let Some((_, r)) = report.iter().find(|(n, _)| n == name) {
                worst[k] = worst[k].max(*r);
            }
        }

        // Spectral degeneracy of the conjugated fermion block: eigenvalues
        // {E - omega (x4), E + omega (x4)} with the lower branch vanishing
        // on shell.
        let dm = model.d2m2_normalized(&p.four_vector());
        let (vals, _) = dm.hermitian_eigen();
        let e = p.omega();
        for k in 0..4 {
            spectral = spectral.max(vals[k].abs());
            spectral = spectral.max((vals[4 + k] - 2.0 * e).abs());
        }
    }
    let mut rows: Vec<CheckRow> = names
        .iter()
        .zip(worst.iter())
        .map(|(check, residual)| CheckRow {
            suite: "fields",
            check,
            residual: *residual,
            tol,
        })
        .collect();
    rows.push(CheckRow {
        suite: "fields",
        check: "spectral-degeneracy",
        residual: spectral,
        tol,
    });
    rows
}

fn random_massive_with_mass<R: Rng>(rng: &mut R, m: f64) -> OnShellMomentum {
    mass_shell(
        m,
        [
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
        ],
        1,
    )
    .unwrap()
}

fn run_conditions<M: TwoPointModel>(
    model: &M,
    p: &OnShellMomentum,
    a: &Sl2c,
) -> Vec<(&'static str, f64)> {
    match verify_conditions(model, p, a, 1e6) {
        Ok(report) => report.checks,
        Err(_) => vec![],
    }
}

fn wick_suite(trials: usize, rng: &mut ChaCha12Rng, tol: f64) -> Vec<CheckRow> {
    // Pairing counts (2k)!/(2^k k!) for k <= 6.
    let mut count_residual = 0.0f64;
    for k in 1..=6usize {
        let n = 2 * k;
        let expected: usize = (1..=n).product::<usize>()
            / (2usize.pow(k as u32) * (1..=k).product::<usize>());
        let got = enumerate_pairings(n).unwrap().len();
        count_residual = count_residual.max((got as f64 - expected as f64).abs());
    }

    // Sign rules: boson swaps +1, adjacent fermion swaps -1, repeated
    // fermionic components 0.
    let mut sign_residual = 0.0f64;
    let check_sign = |kappas: &[usize], perm: &[usize], n_b: usize, expect: i32| -> f64 {
        match permutation_sign(kappas, perm, n_b) {
            Ok(s) if s == expect => 0.0,
            _ => 1.0,
        }
    };
    sign_residual = sign_residual.max(check_sign(&[0, 1, 2, 3], &[1, 0, 2, 3], 2, 1));
    sign_residual = sign_residual.max(check_sign(&[0, 1, 2, 3], &[0, 1, 3, 2], 2, -1));
    sign_residual = sign_residual.max(check_sign(&[0, 2, 2, 3], &[0, 1, 2, 3], 2, 0));
    sign_residual = sign_residual.max(check_sign(&[2, 3, 4, 5], &[3, 2, 1, 0], 2, 1));

    // Hankel positivity of random positive measures.
    let mut hankel_residual = 0.0f64;
    for _ in 0..trials {
        let atoms: Vec<(f64, f64)> = (0..rng.gen_range(1..5))
            .map(|_| (rng.gen_range(0.0..3.0), rng.gen_range(0.01..2.0)))
            .collect();
        let measure = ScalarMeasure::new(atoms).unwrap();
        if !check_hankel(&moments(&measure, 6)) {
            hankel_residual = 1.0;
        }
    }
    vec![
        CheckRow { suite: "wick", check: "pairing-count", residual: count_residual, tol },
        CheckRow { suite: "wick", check: "permutation-sign-rules", residual: sign_residual, tol },
        CheckRow { suite: "wick", check: "hankel-positivity", residual: hankel_residual, tol },
    ]
}

fn scattering_suite(trials: usize, rng: &mut ChaCha12Rng, tol: f64) -> Vec<CheckRow> {
    let mut s_psd = 0.0f64;
    let mut u_nsd = 0.0f64;
    let mut deviation = 0.0f64;
    for _ in 0..trials {
        let (m, _rho_hat, theta, p) = random_compton(rng);
        let p_sum = p[2].four_vector() + p[3].four_vector();
        let (_, s_rep) = verify_s_channel(&p_sum, m).expect("timelike s-channel");
        s_psd = s_psd.max((-s_rep.min_eigenvalue).max(0.0)).max(s_rep.reconstruction_residual);

        let basis_out = vevlab_core::fields::photon_basis(&p[0]).unwrap();
        let (_, u_rep) = verify_u_channel(&p[0], &p[1], &basis_out[1]).expect("u-channel");
        u_nsd = u_nsd
            .max(u_rep.max_eigenvalue.max(0.0))
            .max(u_rep.reconstruction_residual)
            .max(u_rep.structure_residual);

        // The constructed/Feynman u-coefficient deviation equals the
        // closed-form fractional error.
        let basis_in = vevlab_core::fields::photon_basis(&p[2]).unwrap();
        let kin = ComptonKinematics::new(p, basis_out[1], basis_in[1], 0, 0).unwrap();
        let f = feynman_compton(&kin, 0.3).unwrap();
        let g = constructed_compton(&kin, 0.3).unwrap();
        let coeff = |amp: &vevlab_core::scattering::AmplitudeResult| {
            amp.channel_terms
                .iter()
                .find(|t| t.label == "u-channel")
                .map(|t| t.coefficient.norm())
                .expect("u-channel present")
        };
        let measured = (coeff(&g) - coeff(&f)).abs() / coeff(&f);
        let rho_hat_out =
            vevlab_core::kinematics::minkowski_dot(&p[0].four_vector(), &p[1].four_vector()) / m;
        deviation = deviation.max((measured - fractional_error(rho_hat_out, theta, m)).abs());
    }

    let mut rest_zero = 0.0f64;
    let mut transported = 0.0f64;
    for _ in 0..trials {
        let (p, eps_out, eps_in) = collinear_base(rng);
        let report = verify_rest_frame_identity(&p, &eps_out, &eps_in, 1e6).unwrap();
        rest_zero = rest_zero.max(report.max_residual());

        let lam = lorentz_from_sl2c(&random_sl2c(rng)).unwrap();
        let (pm, eo) = transport(&lam, &p, &eps_out);
        let (_, ei) = transport(&lam, &p, &eps_in);
        let report = verify_rest_frame_identity(&pm, &eo, &ei, 1e6).unwrap();
        transported = transported.max(report.max_residual());
    }
    vec![
        CheckRow { suite: "scattering", check: "s-channel-semidefinite", residual: s_psd, tol },
        CheckRow { suite: "scattering", check: "u-channel-semidefinite", residual: u_nsd, tol },
        CheckRow { suite: "scattering", check: "u-coefficient-deviation", residual: deviation, tol },
        CheckRow { suite: "scattering", check: "rest-frame-identity", residual: rest_zero, tol: 1e-12 },
        CheckRow { suite: "scattering", check: "transported-identity", residual: transported, tol },
    ]
}

/// Runs the requested suite(s) with a deterministic seeded generator.
pub fn run(suite: Suite, trials: usize, seed: u64, tol: f64, corrupt: bool) -> Vec<CheckRow> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Kinematics {
        rows.extend(kinematics_suite(trials, &mut rng, tol));
    }
    if all || suite == Suite::Dirac {
        rows.extend(dirac_suite(trials, &mut rng, tol));
    }
    if all || suite == Suite::Fields {
        rows.extend(fields_suite(trials, &mut rng, tol, corrupt));
    }
    if all || suite == Suite::Wick {
        rows.extend(wick_suite(trials, &mut rng, tol));
    }
    if all || suite == Suite::Scattering {
        rows.extend(scattering_suite(trials, &mut rng, tol));
    }
    rows
}
