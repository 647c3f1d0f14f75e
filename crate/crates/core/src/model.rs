//! Ion-laser-cavity model: system parameters, the truncated 4x4
//! interaction Hamiltonian, its analytic eigensystem, and the full
//! Fock-space interaction Hamiltonian.
//!
//! Internal convention: hbar = 1, so every energy is stored as an angular
//! frequency. The truncated dynamics is controlled by two scales,
//! `a_mn = g eta_c sqrt(m n) / 2` and `mu_mn = sqrt(a_mn^2 + Omega^2)`;
//! most call sites work in units where `a_mn = 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{BasisTag, ComplexMatrix};

/// Relative tolerance for the resonance conditions checked at construction.
const RESONANCE_RTOL: f64 = 1e-9;

/// Physical and derived constants of the ion-laser-cavity model.
///
/// Raw couplings and frequencies come first; `derived_params` fills the
///derived block (`a_mn`, `mu_mn`, `coeff_a`, `coeff_b`, `alpha`).
#[derive(Clone, Copy, Debug)]
pub struct SystemParams {
    /// Rabi frequency Omega of the resonant laser.
    pub omega_rabi: f64,
    /// Ion-cavity coupling strength g.
    pub ion_cavity_g: f64,
    /// Ion-cavity Lamb-Dicke parameter eta_c.
    pub eta_c: f64,
    /// Ion-laser Lamb-Dicke parameter eta_L. Kept for completeness; the
    /// rotating-wave interaction used here does not consume it.
    pub eta_l: f64,
    /// Phonon label m >= 1 of the upper model-space doublet.
    pub m: u32,
    /// Photon label n >= 1 of the upper model-space doublet.
    pub n: u32,
    /// Trap frequency nu.
    pub trap_freq: f64,
    /// Ion transition frequency omega_0.
    pub ion_freq: f64,
    /// Laser frequency; resonance requires omega_L = omega_0.
    pub laser_freq: f64,
    /// Cavity mode frequency; red-sideband tuning requires omega_c = omega_0 - nu.
    pub cavity_freq: f64,

    /// Derived: a_mn = g eta_c sqrt(m n) / 2.
    pub a_mn: f64,
    /// Derived: mu_mn = sqrt(a_mn^2 + Omega^2).
    pub mu_mn: f64,
    /// Derived: A with A^2 = (mu + Omega) / (4 mu).
    pub coeff_a: f64,
    /// Derived: B with B^2 = (mu - Omega) / (4 mu).
    pub coeff_b: f64,
    /// Derived: alpha = mu_mn / a_mn >= 1.
    pub alpha: f64,
}

impl SystemParams {
    /// Build raw parameters (derived block zeroed) with the resonance
    /// conditions baked in: `laser_freq = ion_freq`, `cavity_freq = ion_freq - trap_freq`.
    #[allow(clippy::too_many_arguments)]
    pub fn raw(
        omega_rabi: f64,
        ion_cavity_g: f64,
        eta_c: f64,
        eta_l: f64,
        m: u32,
        n: u32,
        trap_freq: f64,
        ion_freq: f64,
    ) -> Self {
        Self {
            omega_rabi,
            ion_cavity_g,
            eta_c,
            eta_l,
            m,
            n,
            trap_freq,
            ion_freq,
            laser_freq: ion_freq,
            cavity_freq: ion_freq - trap_freq,
            a_mn: 0.0,
            mu_mn: 0.0,
            coeff_a: 0.0,
            coeff_b: 0.0,
            alpha: 0.0,
        }
    }

    /// Parameters in a_mn = 1 units for a given ratio alpha = mu/a, with
    /// m = n = 1: Omega = sqrt(alpha^2 - 1), g eta_c = 2.
    pub fn scaled(alpha: f64) -> Result<Self> {
        if !(alpha >= 1.0) {
            return Err(Error::InvalidParams(format!(
                "alpha = mu/a must be >= 1, got {alpha}"
            )));
        }
        let omega = (alpha * alpha - 1.0).sqrt();
        derived_params(Self::raw(omega, 2.0, 1.0, 0.05, 1, 1, 1.0, 100.0))
    }

    /// Parameters from a physical Rabi frequency and the ratio alpha = mu/a,
    /// with m = n = 1. Units of `omega_rabi` propagate to all frequencies.
    pub fn from_rabi_alpha(omega_rabi: f64, alpha: f64) -> Result<Self> {
        if !(alpha > 1.0) {
            return Err(Error::InvalidParams(format!(
                "alpha must exceed 1 to solve mu = alpha a with Omega > 0, got {alpha}"
            )));
        }
        let a11 = omega_rabi / (alpha * alpha - 1.0).sqrt();
        // split g eta_c = 2 a11 with a conventional Lamb-Dicke value
        let eta_c = 0.05;
        let g = 2.0 * a11 / eta_c;
        derived_params(Self::raw(
            omega_rabi,
            g,
            eta_c,
            eta_c,
            1,
            1,
            omega_rabi,
            1000.0 * omega_rabi,
        ))
    }
}

/// Fill the derived block of `SystemParams`. Idempotent.
pub fn derived_params(raw: SystemParams) -> Result<SystemParams> {
    let mut violations = Vec::new();
    if !(raw.omega_rabi >= 0.0) {
        violations.push(format!("omega_rabi must be >= 0, got {}", raw.omega_rabi));
    }
    if !(raw.ion_cavity_g > 0.0) {
        violations.push(format!(
            "ion_cavity_g must be > 0, got {}",
            raw.ion_cavity_g
        ));
    }
    if !(raw.eta_c > 0.0) {
        violations.push(format!("eta_c must be > 0, got {}", raw.eta_c));
    }
    if raw.m < 1 || raw.n < 1 {
        violations.push(format!("m, n must be >= 1, got ({}, {})", raw.m, raw.n));
    }
    for (name, v) in [
        ("trap_freq", raw.trap_freq),
        ("ion_freq", raw.ion_freq),
        ("laser_freq", raw.laser_freq),
        ("cavity_freq", raw.cavity_freq),
    ] {
        if !(v >= 0.0) {
            violations.push(format!("{name} must be >= 0, got {v}"));
        }
    }
    let scale = raw.ion_freq.abs().max(1.0);
    if (raw.laser_freq - raw.ion_freq).abs() > RESONANCE_RTOL * scale {
        violations.push("laser must be resonant: omega_L = omega_0".into());
    }
    if (raw.cavity_freq - (raw.ion_freq - raw.trap_freq)).abs() > RESONANCE_RTOL * scale {
        violations.push("cavity must sit on the red sideband: omega_c = omega_0 - nu".into());
    }
    if !violations.is_empty() {
        return Err(Error::InvalidParams(violations.join("; ")));
    }

    let mut p = raw;
    p.a_mn = 0.5 * p.ion_cavity_g * p.eta_c * ((p.m as f64) * (p.n as f64)).sqrt();
    p.mu_mn = (p.a_mn * p.a_mn + p.omega_rabi * p.omega_rabi).sqrt();
    p.alpha = p.mu_mn / p.a_mn;
    p.coeff_a = ((p.mu_mn + p.omega_rabi) / (4.0 * p.mu_mn)).sqrt();
    p.coeff_b = ((p.mu_mn - p.omega_rabi) / (4.0 * p.mu_mn)).sqrt();
    Ok(p)
}

/// The four model-space kets, in the fixed ordering of the computational basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ModelKet {
    /// |g, m-1, n-1>
    GroundLower = 0,
    /// |e, m-1, n-1>
    ExcitedLower = 1,
    /// |g, m, n>
    GroundUpper = 2,
    /// |e, m, n>
    ExcitedUpper = 3,
}

impl ModelKet {
    pub const ALL: [ModelKet; 4] = [
        ModelKet::GroundLower,
        ModelKet::ExcitedLower,
        ModelKet::GroundUpper,
        ModelKet::ExcitedUpper,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// True when the ion factor is |e>.
    pub fn ion_excited(self) -> bool {
        matches!(self, ModelKet::ExcitedLower | ModelKet::ExcitedUpper)
    }
}

/// Analytic eigensystem of the truncated interaction matrix.
///
/// `energies` follows the closed-form ordering p = 1..4:
/// `(mu - a, -(mu + a), mu + a, a - mu)`. `transform` is the orthogonal
/// matrix relating computational kets to eigenvectors,
/// `|basis_i> = sum_p transform[i][p] |Phi_p>`, so column p holds `Phi_p`
/// in computational coordinates.
#[derive(Clone, Copy, Debug)]
pub struct AnalyticEigenSystem {
    pub energies: [f64; 4],
    pub transform: [[f64; 4]; 4],
}

impl AnalyticEigenSystem {
    /// Eigenvector Phi_p (p = 0..3) in computational coordinates.
    pub fn eigenvector(&self, p: usize) -> [f64; 4] {
        [
            self.transform[0][p],
            self.transform[1][p],
            self.transform[2][p],
            self.transform[3][p],
        ]
    }

    /// Conjugate a model-basis matrix into the eigenbasis: T^t M T.
    pub fn to_eigen_basis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(m.dim(), 4, "eigenbasis transform is 4-dimensional");
        ComplexMatrix::from_fn(4, BasisTag::EIGEN, |p, q| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    acc += m.get(i, j) * self.transform[i][p] * self.transform[j][q];
                }
            }
            acc
        })
    }

    /// Conjugate an eigenbasis matrix back to the model basis: T M T^t.
    pub fn to_model_basis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(m.dim(), 4, "eigenbasis transform is 4-dimensional");
        ComplexMatrix::from_fn(4, BasisTag::MODEL, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for p in 0..4 {
                for q in 0..4 {
                    acc += m.get(p, q) * self.transform[i][p] * self.transform[j][q];
                }
            }
            acc
        })
    }
}

/// The 4x4 interaction matrix on the model space, in `ModelKet` ordering:
/// off-diagonals Omega on the laser bonds and `g eta_c sqrt(m n) = 2 a_mn`
/// on the sideband bond.
pub fn build_h_is(p: &SystemParams) -> ComplexMatrix {
    let two_a = 2.0 * p.a_mn;
    let mut h = ComplexMatrix::zeros(4, BasisTag::MODEL);
    for (i, j, v) in [(0, 1, p.omega_rabi), (1, 2, two_a), (2, 3, p.omega_rabi)] {
        h.set(i, j, Complex64::new(v, 0.0));
        h.set(j, i, Complex64::new(v, 0.0));
    }
    h
}

/// Closed-form eigensystem of `build_h_is`.
pub fn analytic_eigensystem(p: &SystemParams) -> AnalyticEigenSystem {
    let (mu, a) = (p.mu_mn, p.a_mn);
    let w = (p.coeff_a + p.coeff_b) / std::f64::consts::SQRT_2;
    let x = (p.coeff_a - p.coeff_b) / std::f64::consts::SQRT_2;
    AnalyticEigenSystem {
        energies: [mu - a, -(mu + a), mu + a, a - mu],
        transform: [[w, x, x, -w], [x, -w, w, x], [-x, w, w, x], [-w, -x, x, -w]],
    }
}

#[inline]
fn fock_flat(phonon_cut: usize, photon_cut: usize, ion: usize, k: usize, l: usize) -> usize {
    (ion * phonon_cut + k) * photon_cut + l
}

/// The interaction Hamiltonian on the truncated Fock space
/// |ion, phonon, photon> with `phonon < phonon_cut`, `photon < photon_cut`,
/// in lexicographic ordering.
///
/// Matrix elements: Omega between |g,k,l> and |e,k,l>; `g eta_c sqrt(k l)`
/// between |e,k-1,l-1> and |g,k,l>.
pub fn build_h_full(
    p: &SystemParams,
    phonon_cut: usize,
    photon_cut: usize,
) -> Result<ComplexMatrix> {
    if phonon_cut < 2 || photon_cut < 2 {
        return Err(Error::CutoffTooSmall {
            min: 2,
            phonon: phonon_cut,
            photon: photon_cut,
        });
    }
    let dim = 2 * phonon_cut * photon_cut;
    let g_eta = p.ion_cavity_g * p.eta_c;
    let mut h = ComplexMatrix::zeros(dim, BasisTag::FOCK);
    let idx = |ion, k, l| fock_flat(phonon_cut, photon_cut, ion, k, l);
    for k in 0..phonon_cut {
        for l in 0..photon_cut {
            let (g_i, e_i) = (idx(0, k, l), idx(1, k, l));
            h.set(g_i, e_i, Complex64::new(p.omega_rabi, 0.0));
            h.set(e_i, g_i, Complex64::new(p.omega_rabi, 0.0));
            if k >= 1 && l >= 1 {
                let v = g_eta * ((k * l) as f64).sqrt();
                let (lo, hi) = (idx(1, k - 1, l - 1), idx(0, k, l));
                h.set(lo, hi, Complex64::new(v, 0.0));
                h.set(hi, lo, Complex64::new(v, 0.0));
            }
        }
    }
    Ok(h)
}

/// Flat Fock indices of the four model-space kets for the given cutoffs.
pub(crate) fn model_space_indices(
    p: &SystemParams,
    phonon_cut: usize,
    photon_cut: usize,
) -> [usize; 4] {
    let (m, n) = (p.m as usize, p.n as usize);
    [
        fock_flat(phonon_cut, photon_cut, 0, m - 1, n - 1),
        fock_flat(phonon_cut, photon_cut, 1, m - 1, n - 1),
        fock_flat(phonon_cut, photon_cut, 0, m, n),
        fock_flat(phonon_cut, photon_cut, 1, m, n),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigensystem;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sqrt15_params() -> SystemParams {
        // Omega = sqrt(15), g eta_c sqrt(mn) = 2 => a = 1, mu = 4
        derived_params(SystemParams::raw(
            15.0_f64.sqrt(),
            2.0,
            1.0,
            0.05,
            1,
            1,
            1.0,
            50.0,
        ))
        .unwrap()
    }

    #[test]
    fn derived_substitution() {
        let p = sqrt15_params();
        assert!((p.a_mn - 1.0).abs() < 1e-15);
        assert!((p.mu_mn - 4.0).abs() < 1e-15);
        assert!((p.alpha - 4.0).abs() < 1e-15);
        // idempotent
        let p2 = derived_params(p).unwrap();
        assert_eq!(p.a_mn, p2.a_mn);
        assert_eq!(p.coeff_b, p2.coeff_b);
    }

    #[test]
    fn derived_omega_zero_limit() {
        let p = derived_params(SystemParams::raw(0.0, 2.0, 1.0, 0.05, 1, 1, 1.0, 50.0)).unwrap();
        assert!((p.a_mn - p.mu_mn).abs() < 1e-15);
        assert!((p.alpha - 1.0).abs() < 1e-15);
        assert!((p.coeff_a * p.coeff_a - 0.25).abs() < 1e-15);
        assert!((p.coeff_b * p.coeff_b - 0.25).abs() < 1e-15);
    }

    #[test]
    fn derived_physical_point() {
        // Omega = 8.95 (1e6 rad/s), alpha = 4 => a11 = Omega/sqrt(15)
        let p = SystemParams::from_rabi_alpha(8.95, 4.0).unwrap();
        let want_a = 8.95 / 15.0_f64.sqrt();
        assert!((p.a_mn - want_a).abs() < 1e-12);
        assert!((p.a_mn - 2.3109).abs() < 2e-4);
        assert!((p.mu_mn - 4.0 * want_a).abs() < 1e-12);
        assert!((p.mu_mn - 9.2435).abs() < 1e-3);
        assert!((p.alpha - 4.0).abs() < 1e-12);
    }

    #[test]
    fn derived_rejects_bad_input() {
        assert!(derived_params(SystemParams::raw(1.0, -1.0, 1.0, 0.0, 1, 1, 1.0, 50.0)).is_err());
        assert!(derived_params(SystemParams::raw(1.0, 1.0, 1.0, 0.0, 0, 1, 1.0, 50.0)).is_err());
        let mut p = SystemParams::raw(1.0, 1.0, 1.0, 0.0, 1, 1, 1.0, 50.0);
        p.laser_freq = 51.0; // off resonance
        assert!(derived_params(p).is_err());
    }

    #[test]
    fn h_is_single_coupling_case() {
        // Omega = 0, a = 1: only |e,m-1,n-1> <-> |g,m,n> with entry 2
        let p = derived_params(SystemParams::raw(0.0, 2.0, 1.0, 0.05, 1, 1, 1.0, 50.0)).unwrap();
        let h = build_h_is(&p);
        for i in 0..4 {
            for j in 0..4 {
                let want = if (i, j) == (1, 2) || (i, j) == (2, 1) {
                    2.0
                } else {
                    0.0
                };
                assert!((h.get(i, j) - Complex64::new(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn h_is_numeric_spectrum() {
        let h = build_h_is(&sqrt15_params());
        assert!(h.hermiticity_deviation() == 0.0);
        let eig = hermitian_eigensystem(&h).unwrap();
        for (got, want) in eig.values.iter().zip([-5.0, -3.0, 3.0, 5.0]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn analytic_energies_in_paper_order() {
        let eig = analytic_eigensystem(&sqrt15_params());
        let want = [3.0, -5.0, 5.0, -3.0];
        for (g, w) in eig.energies.iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn analytic_transform_orthogonal_and_diagonalizing() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let omega = rng.gen_range(0.0..5.0);
            let g = rng.gen_range(0.1..4.0);
            let eta = rng.gen_range(0.02..1.0);
            let m = rng.gen_range(1..4);
            let n = rng.gen_range(1..4);
            let p = derived_params(SystemParams::raw(omega, g, eta, 0.0, m, n, 1.0, 50.0)).unwrap();
            let eig = analytic_eigensystem(&p);
            let t = eig.transform;
            // orthogonality T T^t = 1
            for i in 0..4 {
                for j in 0..4 {
                    let dot: f64 = (0..4).map(|k| t[i][k] * t[j][k]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() <= 1e-12, "TT^t at ({i},{j}) = {dot}");
                }
            }
            // columns are eigenvectors of H_IS
            let h = build_h_is(&p);
            let hnorm = h.frobenius_norm().max(1.0);
            for pi in 0..4 {
                let v: Vec<Complex64> = eig
                    .eigenvector(pi)
                    .iter()
                    .map(|&x| Complex64::new(x, 0.0))
                    .collect();
                let hv = h.apply(&v);
                let res = hv
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| (a - b * eig.energies[pi]).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(res <= 1e-10 * hnorm, "residual {res} for p={pi}");
            }
            // spectral consistency with the numeric eigensolver
            let numeric = hermitian_eigensystem(&h).unwrap();
            let mut analytic = eig.energies.to_vec();
            analytic.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (a, b) in analytic.iter().zip(&numeric.values) {
                assert!((a - b).abs() <= 1e-10 * hnorm);
            }
        }
    }

    #[test]
    fn analytic_decoupled_limit() {
        // a -> 0: doublets E -> {Omega, -Omega, Omega, -Omega}
        let p = derived_params(SystemParams::raw(2.0, 1e-9, 1e-4, 0.0, 1, 1, 1.0, 50.0)).unwrap();
        let eig = analytic_eigensystem(&p);
        let want = [2.0, -2.0, 2.0, -2.0];
        for (g, w) in eig.energies.iter().zip(want) {
            assert!((g - w).abs() < 1e-6);
        }
    }

    #[test]
    fn h_full_embeds_h_is() {
        let p = sqrt15_params();
        let h4 = build_h_is(&p);
        let hf = build_h_full(&p, 2, 2).unwrap();
        let idx = model_space_indices(&p, 2, 2);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(
                    hf.get(idx[i], idx[j]),
                    h4.get(i, j),
                    "mismatch at ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn h_full_lowest_sideband_element() {
        let p = sqrt15_params();
        let hf = build_h_full(&p, 3, 3).unwrap();
        // <e,0,0| H |g,1,1> = g eta_c = 2 a11
        let idx = |ion: usize, k: usize, l: usize| (ion * 3 + k) * 3 + l;
        let e00 = idx(1, 0, 0);
        let g11 = idx(0, 1, 1);
        assert!((hf.get(e00, g11).re - 2.0 * p.a_mn).abs() < 1e-15);
        assert!(hf.hermiticity_deviation() <= 1e-15);
    }

    #[test]
    fn h_full_rejects_tiny_cutoffs() {
        let p = sqrt15_params();
        assert!(matches!(
            build_h_full(&p, 1, 4),
            Err(Error::CutoffTooSmall { .. })
        ));
    }
}
