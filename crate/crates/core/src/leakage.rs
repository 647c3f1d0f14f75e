//! Model-space leakage under the full interaction Hamiltonian.
//!
//! The truncated four-state description ignores the sideband matrix
//! elements that connect |e,m,n> upward. Starting from |g,0,0>, the
//! shortest escape path needs four hops, so the escaped probability opens
//! as t^8; this module evolves the state on a truncated Fock space and
//! measures that leakage directly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolution::DensityOperator;
use crate::linalg::{hermitian_eigensystem, BasisTag, HermitianEigenSystem};
use crate::model::{build_h_full, model_space_indices, SystemParams};

/// Minimum truncation for full-space evolution: the shortest leakage path
/// reaches phonon/photon occupancy 2, which needs at least 4 levels of
/// headroom to resolve.
const MIN_EVOLVE_CUTOFF: usize = 4;

/// A truncated Fock space |ion, phonon, photon> with lexicographic flat
/// indexing; `dim = 2 * phonon_cut * photon_cut`.
#[derive(Clone, Copy, Debug)]
pub struct FockSpace {
    pub phonon_cut: usize,
    pub photon_cut: usize,
}

impl FockSpace {
    pub fn new(phonon_cut: usize, photon_cut: usize) -> Result<Self> {
        if phonon_cut < 2 || photon_cut < 2 {
            return Err(Error::CutoffTooSmall {
                min: 2,
                phonon: phonon_cut,
                photon: photon_cut,
            });
        }
        Ok(Self {
            phonon_cut,
            photon_cut,
        })
    }

    pub fn dim(&self) -> usize {
        2 * self.phonon_cut * self.photon_cut
    }

    #[inline]
    pub fn flat(&self, ion: usize, phonon: usize, photon: usize) -> usize {
        (ion * self.phonon_cut + phonon) * self.photon_cut + photon
    }

    #[inline]
    pub fn split(&self, idx: usize) -> (usize, usize, usize) {
        let photon = idx % self.photon_cut;
        let rest = idx / self.photon_cut;
        (rest / self.phonon_cut, rest % self.phonon_cut, photon)
    }
}

/// Diagonalized full-space propagator with the initial |g,0,0> expansion
/// precomputed, so a whole time series costs one eigensolve.
struct Propagator {
    eig: HermitianEigenSystem,
    coeffs: Vec<Complex64>,
    start: usize,
    model_idx: [usize; 4],
}

impl Propagator {
    fn build(params: &SystemParams, space: &FockSpace) -> Result<Self> {
        if space.phonon_cut < MIN_EVOLVE_CUTOFF || space.photon_cut < MIN_EVOLVE_CUTOFF {
            return Err(Error::CutoffTooSmall {
                min: MIN_EVOLVE_CUTOFF,
                phonon: space.phonon_cut,
                photon: space.photon_cut,
            });
        }
        let h = build_h_full(params, space.phonon_cut, space.photon_cut)?;
        let eig = hermitian_eigensystem(&h)?;
        let n = space.dim();
        let start = space.flat(0, 0, 0);
        // coefficients of |g,0,0> in the eigenbasis
        let coeffs: Vec<Complex64> = (0..n).map(|k| eig.vectors.get(start, k).conj()).collect();
        Ok(Self {
            eig,
            coeffs,
            start,
            model_idx: model_space_indices(params, space.phonon_cut, space.photon_cut),
        })
    }

    fn state_at(&self, t: f64) -> Vec<Complex64> {
        let n = self.coeffs.len();
        if t == 0.0 {
            // exactly the initial ket; avoids eigenbasis round-trip dust
            let mut psi = vec![Complex64::new(0.0, 0.0); n];
            psi[self.start] = Complex64::new(1.0, 0.0);
            return psi;
        }
        let phased: Vec<Complex64> = self
            .coeffs
            .iter()
            .zip(&self.eig.values)
            .map(|(c, &e)| c * Complex64::from_polar(1.0, -e * t))
            .collect();
        (0..n)
            .map(|i| (0..n).map(|k| self.eig.vectors.get(i, k) * phased[k]).sum())
            .collect()
    }

    /// Sum of squared amplitudes outside the model space. Equals
    /// 1 - sum(model populations) by unitarity, but summing the escaped
    /// amplitudes directly keeps full relative accuracy when the leakage
    /// is at the 1e-15 scale.
    fn leakage_at(&self, t: f64) -> f64 {
        let psi = self.state_at(t);
        let mut acc = 0.0;
        for (i, amp) in psi.iter().enumerate() {
            if !self.model_idx.contains(&i) {
                acc += amp.norm_sqr();
            }
        }
        acc
    }
}

/// Evolve |g,0,0> under the full truncated interaction Hamiltonian.
pub fn full_space_evolve(
    params: &SystemParams,
    space: &FockSpace,
    t: f64,
) -> Result<DensityOperator> {
    let prop = Propagator::build(params, space)?;
    let psi = prop.state_at(t);
    DensityOperator::from_pure(&psi, BasisTag::FOCK)
}

/// Probability of finding the system outside the four model-space states
/// at time `t`, starting from |g,0,0>.
pub fn leakage_probability(params: &SystemParams, space: &FockSpace, t: f64) -> Result<f64> {
    let prop = Propagator::build(params, space)?;
    Ok(prop.leakage_at(t))
}

/// Leakage at many times with a single eigensolve.
pub fn leakage_series(params: &SystemParams, space: &FockSpace, ts: &[f64]) -> Result<Vec<f64>> {
    let prop = Propagator::build(params, space)?;
    Ok(ts.iter().map(|&t| prop.leakage_at(t)).collect())
}

/// Least-squares line through (ln t, ln p): returns (exponent, r^2).
pub fn fit_power_law(series: &[(f64, f64)]) -> Result<(f64, f64)> {
    if series.len() < 5 {
        return Err(Error::DegenerateFit(format!(
            "need at least 5 samples, got {}",
            series.len()
        )));
    }
    if series.iter().any(|&(t, p)| t <= 0.0 || p <= 0.0) {
        return Err(Error::DegenerateFit(
            "samples must have t > 0 and p > 0".into(),
        ));
    }
    let n = series.len() as f64;
    let xs: Vec<f64> = series.iter().map(|&(t, _)| t.ln()).collect();
    let ys: Vec<f64> = series.iter().map(|&(_, p)| p.ln()).collect();
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all sample times are equal".into()));
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    let r2 = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok((slope, r2))
}

/// Logarithmically spaced sample times, handy for power-law fits.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let ratio = (hi / lo).powf(1.0 / (n - 1) as f64);
    (0..n).map(|k| lo * ratio.powi(k as i32)).collect()
}
