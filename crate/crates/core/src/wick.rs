//! Signed permutations, Wick-pairing free-field n-point coefficients, and
//! discrete-measure objects: moments with Hankel positivity, and Laplace
//! transforms B(p), Upsilon(p), beta_j built from atom lists.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::cmatrix::CMat;
use crate::fields::TwoPointModel;
use crate::fmath;
use crate::kinematics::{minkowski_dot, FourVector, OnShellMomentum};

#[derive(Debug, Clone, PartialEq)]
pub enum WickError {
    /// Pairing enumeration requested beyond the supported leg count.
    TooLarge { n: usize },
    InvalidPermutation,
    OffShell,
    /// Laplace transforms require p in the closed forward cone.
    OutsideForwardCone,
    NonPositiveWeight,
}

impl fmt::Display for WickError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WickError::TooLarge { n } => write!(f, "pairing enumeration capped at 12 legs, got {n}"),
            WickError::InvalidPermutation => write!(f, "not a permutation of the positions"),
            WickError::OffShell => write!(f, "legs must be on positive mass shells"),
            WickError::OutsideForwardCone => {
                write!(f, "Laplace argument must lie in the closed forward cone")
            }
            WickError::NonPositiveWeight => write!(f, "measure weights must be positive"),
        }
    }
}

/// Side of the vacuum expectation the leg sits on: `Out` legs carry the
/// conjugated (negative-energy support) slot, `In` legs the positive one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    In,
    Out,
}

/// A field leg: physical on-shell momentum, component index, and side.
#[derive(Debug, Clone, Copy)]
pub struct IndexedLeg {
    pub momentum: OnShellMomentum,
    pub kappa: usize,
    pub direction: Direction,
}

/// A perfect matching of leg positions 0..n, pairs ascending and sorted by
/// first element; `sign` is the fermionic permutation sign for legs whose
/// component indices are all-distinct fermions.
#[derive(Debug, Clone)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
}

impl Pairing {
    /// Positions flattened in pairing order (p1, p2, p3, p4, ...).
    pub fn flatten(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.pairs.len() * 2);
        for &(a, b) in &self.pairs {
            out.push(a);
            out.push(b);
        }
        out
    }
}

/// Sign of the permuted component sequence relative to the identity order:
/// adjacent transpositions contribute -1 when both components are fermionic
/// (kappa >= n_b), +1 otherwise, and the sign is 0 whenever two equal
/// fermionic components appear anywhere in the sequence.
pub fn permutation_sign(kappas: &[usize], perm: &[usize], n_b: usize) -> Result<i32, WickError> {
    let n = kappas.len();
    if perm.len() != n {
        return Err(WickError::InvalidPermutation);
    }
    let mut seen = alloc::vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(WickError::InvalidPermutation);
        }
        seen[p] = true;
    }
    // Zero rule: repeated fermionic component index.
    for i in 0..n {
        if kappas[i] < n_b {
            continue;
        }
        for j in (i + 1)..n {
            if kappas[j] == kappas[i] {
                return Ok(0);
            }
        }
    }
    // Count inversions among fermionic entries.
    let mut inversions = 0usize;
    for a in 0..n {
        for b in (a + 1)..n {
            if perm[a] > perm[b] && kappas[perm[a]] >= n_b && kappas[perm[b]] >= n_b {
                inversions += 1;
            }
        }
    }
    Ok(if inversions % 2 == 0 { 1 } else { -1 })
}

/// All perfect matchings of 0..n in lexicographic order; exactly
/// n!/(2^{n/2} (n/2)!) of them. Capped at n = 12.
pub fn enumerate_pairings(n: usize) -> Result<Vec<Pairing>, WickError> {
    if n > 12 {
        return Err(WickError::TooLarge { n });
    }
    if n % 2 != 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut used = alloc::vec![false; n];
    let mut current: Vec<(usize, usize)> = Vec::new();
    fn recurse(
        n: usize,
        used: &mut [bool],
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Pairing>,
    ) {
        let first = match (0..n).find(|&i| !used[i]) {
            Some(i) => i,
            None => {
                out.push(Pairing {
                    pairs: current.clone(),
                });
                return;
            }
        };
        used[first] = true;
        for second in (first + 1)..n {
            if used[second] {
                continue;
            }
            used[second] = true;
            current.push((first, second));
            recurse(n, used, current, out);
            current.pop();
            used[second] = false;
        }
        used[first] = false;
    }
    recurse(n, &mut used, &mut current, &mut out);
    Ok(out)
}

/// Whether a pair of legs has a nonzero two-point contraction: the earlier
/// leg conjugated (`Out`), the later one `In`, equal masses and equal
/// physical spatial momenta (three-momentum conservation of the contraction).
fn pair_supported(a: &IndexedLeg, b: &IndexedLeg) -> bool {
    if a.direction != Direction::Out || b.direction != Direction::In {
        return false;
    }
    if (a.momentum.mass() - b.momentum.mass()).abs() > 1e-12 {
        return false;
    }
    let pa = a.momentum.spatial();
    let pb = b.momentum.spatial();
    let scale = 1.0 + a.momentum.spatial_norm();
    (0..3).all(|k| (pa[k] - pb[k]).abs() < 1e-9 * scale)
}

/// Free-field n-point coefficient on the conservation support: the sum over
/// pairings of signed products of two-point coefficients
/// M(p_j)_{kappa_i kappa_j} / (2 omega_j). Odd leg counts give zero.
pub fn free_npoint<M: TwoPointModel>(model: &M, legs: &[IndexedLeg]) -> Result<Complex64, WickError> {
    let n = legs.len();
    if legs.iter().any(|l| l.momentum.energy() < 0.0) {
        return Err(WickError::OffShell);
    }
    if n % 2 != 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let kappas: Vec<usize> = legs.iter().map(|l| l.kappa).collect();
    let n_b = model.n_bosons();
    let mut total = Complex64::new(0.0, 0.0);
    for pairing in enumerate_pairings(n)? {
        let mut term = Complex64::new(1.0, 0.0);
        let mut supported = true;
        for &(i, j) in &pairing.pairs {
            if !pair_supported(&legs[i], &legs[j]) {
                supported = false;
                break;
            }
            let pj = legs[j].momentum;
            let m = model.m(&pj.four_vector());
            term *= m[(legs[i].kappa, legs[j].kappa)] / (2.0 * pj.omega());
        }
        if !supported {
            continue;
        }
        let sign = permutation_sign(&kappas, &pairing.flatten(), n_b)?;
        total += term * sign as f64;
    }
    Ok(total)
}

/// Nonnegative measure on the real line as a finite list of atoms
/// (point, weight).
#[derive(Debug, Clone, Default)]
pub struct ScalarMeasure {
    pub atoms: Vec<(f64, f64)>,
}

impl ScalarMeasure {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self, WickError> {
        if atoms.iter().any(|&(_, w)| w <= 0.0) {
            return Err(WickError::NonPositiveWeight);
        }
        Ok(ScalarMeasure { atoms })
    }
}

/// Lorentz-invariant nonnegative measure: atoms on positive-energy
/// hyperboloids (four-vector point, weight).
#[derive(Debug, Clone, Default)]
pub struct InvariantMeasure {
    pub atoms: Vec<(FourVector, f64)>,
}

impl InvariantMeasure {
    pub fn new(atoms: Vec<(FourVector, f64)>) -> Result<Self, WickError> {
        for &(s, w) in &atoms {
            if w <= 0.0 {
                return Err(WickError::NonPositiveWeight);
            }
            if s.e < 0.0 || s.square() < -1e-12 * (1.0 + s.e * s.e) {
                return Err(WickError::OffShell);
            }
        }
        Ok(InvariantMeasure { atoms })
    }
}

/// Moments c_n = sum_i w_i lambda_i^n for n = 0..=n_max.
pub fn moments(measure: &ScalarMeasure, n_max: usize) -> Vec<f64> {
    (0..=n_max)
        .map(|n| {
            measure
                .atoms
                .iter()
                .map(|&(l, w)| w * fmath::powi(l, n as i32))
                .sum()
        })
        .collect()
}

/// Positive semidefiniteness of the Hankel matrix [c_{i+j}], necessary for
/// the sequence to be moments of a nonnegative measure.
pub fn check_hankel(c: &[f64]) -> bool {
    if c.is_empty() {
        return true;
    }
    let k = (c.len() + 1) / 2;
    let h = CMat::from_fn(k, k, |i, j| Complex64::new(c[i + j], 0.0));
    let scale = c.iter().fold(0.0f64, |a, &x| a.max(fmath::abs(x))).max(1.0);
    h.min_eigenvalue() >= -1e-10 * scale
}

fn require_forward_cone(p: &FourVector) -> Result<(), WickError> {
    if p.e < -1e-14 || p.square() < -1e-12 * (1.0 + p.e * p.e) {
        return Err(WickError::OutsideForwardCone);
    }
    Ok(())
}

/// B(p) = sum_i w_i M(s_i) e^{-s_i.p}, an N_c x N_c matrix.
pub fn laplace_b<M: TwoPointModel>(
    model: &M,
    measure: &InvariantMeasure,
    p: &FourVector,
) -> Result<CMat, WickError> {
    require_forward_cone(p)?;
    let mut b = CMat::zeros(model.n_components(), model.n_components());
    for &(s, w) in &measure.atoms {
        let factor = w * fmath::exp(-minkowski_dot(&s, p));
        b = &b + &model.m(&s).scale_re(factor);
    }
    Ok(b)
}

/// Upsilon(p) = sum_i w_i e^{-s_i.p} > 0 for nonempty measures.
pub fn upsilon(measure: &InvariantMeasure, p: &FourVector) -> Result<f64, WickError> {
    require_forward_cone(p)?;
    Ok(measure
        .atoms
        .iter()
        .map(|&(s, w)| w * fmath::exp(-minkowski_dot(&s, p)))
        .sum())
}

/// beta_j = sum_i w_i e^{-j v_i}, decreasing in j for atoms with v >= 0.
pub fn beta(measure: &ScalarMeasure, j: u32) -> f64 {
    measure
        .atoms
        .iter()
        .map(|&(v, w)| w * fmath::exp(-(j as f64) * v))
        .sum()
}
