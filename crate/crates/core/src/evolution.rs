//! Time evolution of the model-space state: the general dephasing map in
//! the interaction eigenbasis, its explicit closed form for the default
//! initial state, and the coherence-free unitary propagator.

use num_complex::Complex64;

use crate::bath::DephasingProfile;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigensystem, hermitian_expm, BasisTag, ComplexMatrix};
use crate::model::{AnalyticEigenSystem, ModelKet, SystemParams};

/// Absolute Hermiticity tolerance for density operators.
pub const STATE_HERMITICITY_ATOL: f64 = 1e-12;
/// Trace-one tolerance.
pub const STATE_TRACE_ATOL: f64 = 1e-10;
/// Most negative eigenvalue tolerated before a state is rejected.
/// Eigenvalues in `[-STATE_EIGEN_FLOOR, 0)` are clamped to zero.
pub const STATE_EIGEN_FLOOR: f64 = 1e-10;

/// Trace-one positive-semidefinite complex matrix tagged with its basis.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validate and wrap a matrix. Hermiticity and trace are checked
    /// directly; eigenvalues in `[-1e-10, 0)` are clamped to zero with
    /// renormalization, anything lower is an `InvalidState`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let dev = matrix.hermiticity_deviation();
        if dev > STATE_HERMITICITY_ATOL {
            return Err(Error::InvalidState(format!(
                "Hermiticity deviation {dev:.3e} exceeds {STATE_HERMITICITY_ATOL:.1e}"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TRACE_ATOL || tr.im.abs() > STATE_TRACE_ATOL {
            return Err(Error::InvalidState(format!(
                "trace {tr} deviates from one beyond {STATE_TRACE_ATOL:.1e}"
            )));
        }
        let eig = hermitian_eigensystem(&matrix)?;
        let min = eig.values.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -STATE_EIGEN_FLOOR {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e} below -{STATE_EIGEN_FLOOR:.1e}"
            )));
        }
        if min >= 0.0 {
            return Ok(Self { matrix });
        }
        // clamp the tiny negative tail and renormalize
        let clamped: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0)).collect();
        let norm: f64 = clamped.iter().sum();
        let matrix = eig.assemble(|l| Complex64::new(l.max(0.0) / norm, 0.0));
        Ok(Self { matrix })
    }

    /// Rank-one state |psi><psi| from a (normalized) pure vector. Valid by
    /// construction, so no eigendecomposition is spent on it.
    pub fn from_pure(psi: &[Complex64], basis: BasisTag) -> Result<Self> {
        let norm_sq: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > STATE_TRACE_ATOL {
            return Err(Error::InvalidState(format!(
                "pure-state norm^2 {norm_sq} deviates from one"
            )));
        }
        Ok(Self {
            matrix: ComplexMatrix::outer(psi, basis),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn basis(&self) -> BasisTag {
        self.matrix.basis()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Tr rho^2.
    pub fn purity(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.matrix.get(i, j) * self.matrix.get(j, i)).re;
            }
        }
        acc
    }

    /// <psi| rho |psi>; for a pure target this is the fidelity.
    pub fn overlap(&self, psi: &[Complex64]) -> f64 {
        let n = self.dim();
        assert_eq!(psi.len(), n);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += psi[i].conj() * self.matrix.get(i, j) * psi[j];
            }
        }
        acc.re
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigensystem(&self.matrix)?.values)
    }
}

/// Which model-space ket the system starts in. Defaults to |g, m-1, n-1>.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InitialState(pub ModelKet);

impl Default for InitialState {
    fn default() -> Self {
        InitialState(ModelKet::GroundLower)
    }
}

impl InitialState {
    pub fn density(&self) -> DensityOperator {
        let mut psi = vec![Complex64::new(0.0, 0.0); 4];
        psi[self.0.index()] = Complex64::new(1.0, 0.0);
        DensityOperator::from_pure(&psi, BasisTag::MODEL).expect("basis ket is normalized")
    }
}

/// General dephasing map in the interaction eigenbasis:
///
/// ```text
/// rho(t) = sum_ij <Phi_i|rho0|Phi_j>
///          * exp(-(E_i - E_j)^2 Gamma(t) / 4)
///          * exp(-i [ (E_i - E_j) t + (E_i^2 - E_j^2) C(t) ])
///          * |Phi_i><Phi_j|
/// ```
///
/// Diagonal eigenbasis entries are untouched for every bath strength.
pub fn evolve_dephasing(
    rho0: &DensityOperator,
    eig: &AnalyticEigenSystem,
    profile: &DephasingProfile,
    t: f64,
) -> Result<DensityOperator> {
    if rho0.dim() != 4 || rho0.basis() != BasisTag::MODEL {
        return Err(Error::DimensionMismatch(format!(
            "dephasing map needs a 4-dim model-basis state, got dim {} ({:?})",
            rho0.dim(),
            rho0.basis()
        )));
    }
    let (gamma, c, _phi) = profile.sample(t)?;
    let rho_eig = eig.to_eigen_basis(rho0.matrix());
    let mut out = ComplexMatrix::zeros(4, BasisTag::EIGEN);
    for i in 0..4 {
        for j in 0..=i {
            let de = eig.energies[i] - eig.energies[j];
            let de2 = eig.energies[i].powi(2) - eig.energies[j].powi(2);
            let damp = (-de * de * gamma / 4.0).exp();
            let phase = Complex64::from_polar(damp, -(de * t + de2 * c));
            let v = rho_eig.get(i, j) * phase;
            out.set(i, j, v);
            if i != j {
                out.set(j, i, v.conj());
            }
        }
    }
    DensityOperator::new(eig.to_model_basis(&out))
}

/// Explicit 16-term closed form of the dephased state for the initial
/// state |g, m-1, n-1><g, m-1, n-1|, assembled term by term in the
/// eigenbasis and rotated back to the model basis.
///
/// Cross-validates the general map: the two routes must agree elementwise
/// to 1e-9 (asserted in tests and the acceptance suite).
pub fn rho_closed_form(
    params: &SystemParams,
    profile: &DephasingProfile,
    t: f64,
) -> Result<DensityOperator> {
    let (gamma, c, _) = profile.sample(t)?;
    let (mu, a) = (params.mu_mn, params.a_mn);
    let phi = 4.0 * mu * a * c;
    let p = (params.coeff_a + params.coeff_b).powi(2) / 2.0; // (A+B)^2 / 2
    let q = (params.coeff_a - params.coeff_b).powi(2) / 2.0; // (A-B)^2 / 2
    let r = (params.coeff_a.powi(2) - params.coeff_b.powi(2)) / 2.0; // (A^2-B^2)/2

    let mut rho = ComplexMatrix::zeros(4, BasisTag::EIGEN);
    let set_pair = |rho: &mut ComplexMatrix, i: usize, j: usize, v: Complex64| {
        rho.set(i, j, v);
        rho.set(j, i, v.conj());
    };

    for (k, w) in [(0, p), (1, q), (2, q), (3, p)] {
        rho.set(k, k, Complex64::new(w, 0.0));
    }
    // |Phi_1><Phi_4|: weight -(A+B)^2/2, decay (mu-a)^2 Gamma, phase -2(mu-a)t
    set_pair(
        &mut rho,
        0,
        3,
        Complex64::from_polar(p * (-(mu - a).powi(2) * gamma).exp(), -2.0 * (mu - a) * t)
            * Complex64::new(-1.0, 0.0),
    );
    // |Phi_2><Phi_3|: weight +(A-B)^2/2, decay (mu+a)^2 Gamma, phase +2(mu+a)t
    set_pair(
        &mut rho,
        1,
        2,
        Complex64::from_polar(q * (-(mu + a).powi(2) * gamma).exp(), 2.0 * (mu + a) * t),
    );
    // |Phi_1><Phi_2| and |Phi_3><Phi_4|: decay mu^2 Gamma, phases -(2 mu t -+ phi)
    let damp_mu = (-mu * mu * gamma).exp();
    set_pair(
        &mut rho,
        0,
        1,
        Complex64::from_polar(r * damp_mu, -(2.0 * mu * t - phi)),
    );
    set_pair(
        &mut rho,
        2,
        3,
        Complex64::from_polar(r * damp_mu, -(2.0 * mu * t + phi)) * Complex64::new(-1.0, 0.0),
    );
    // |Phi_1><Phi_3| and |Phi_2><Phi_4|: decay a^2 Gamma, phases +(2 a t +- phi)
    let damp_a = (-a * a * gamma).exp();
    set_pair(
        &mut rho,
        0,
        2,
        Complex64::from_polar(r * damp_a, 2.0 * a * t + phi),
    );
    set_pair(
        &mut rho,
        1,
        3,
        Complex64::from_polar(r * damp_a, 2.0 * a * t - phi) * Complex64::new(-1.0, 0.0),
    );

    let eig = crate::model::analytic_eigensystem(params);
    DensityOperator::new(eig.to_model_basis(&rho))
}

/// Coherence-free propagation U rho0 U^dag with U = exp(-i h t).
pub fn unitary_evolve(
    rho0: &DensityOperator,
    h: &ComplexMatrix,
    t: f64,
) -> Result<DensityOperator> {
    if rho0.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dim {} vs Hamiltonian dim {}",
            rho0.dim(),
            h.dim()
        )));
    }
    let u = hermitian_expm(h, -t)?;
    let evolved = u
        .mul(rho0.matrix())
        .mul(&u.adjoint())
        .with_basis(rho0.basis());
    DensityOperator::new(evolved)
}

/// Propagate a pure state: exp(-i h t) |psi>.
pub fn unitary_evolve_state(
    psi: &[Complex64],
    h: &ComplexMatrix,
    t: f64,
) -> Result<Vec<Complex64>> {
    let eig = hermitian_eigensystem(h)?;
    let n = h.dim();
    let coeffs: Vec<Complex64> = (0..n)
        .map(|k| {
            let phase = Complex64::from_polar(1.0, -eig.values[k] * t);
            (0..n)
                .map(|i| eig.vectors.get(i, k).conj() * psi[i])
                .sum::<Complex64>()
                * phase
        })
        .collect();
    Ok((0..n)
        .map(|i| (0..n).map(|k| eig.vectors.get(i, k) * coeffs[k]).sum())
        .collect())
}
