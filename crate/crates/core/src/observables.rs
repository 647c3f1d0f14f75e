//! Target states and scalar observables: generation probability of the
//! maximally entangled target, and the ion population inversion.
//!
//! Each observable comes in two routes: a direct trace against the density
//! operator (the source of truth) and an analytic closed form used as a
//! cross-check. The closed forms are re-derived here because the commonly
//! printed variants carry misprints; see `docs/PHYSICS.md` and the
//! `*_printed_form` functions, which reproduce the misprinted expressions
//! verbatim for documentation.

use num_complex::Complex64;

use crate::bath::DephasingProfile;
use crate::error::{Error, Result};
use crate::evolution::DensityOperator;
use crate::linalg::{BasisTag, ComplexMatrix};
use crate::model::SystemParams;

/// Relative sign of the superposition (|g,m-1,n-1> -+ i |e,m,n>)/sqrt(2).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GhzSign {
    Minus,
    Plus,
}

/// A maximally entangled three-party target state, stored in the 4-dim
/// model basis where |g,m-1,n-1> and |e,m,n> are basis elements 0 and 3.
#[derive(Clone, Debug)]
pub struct GhzTarget {
    pub sign: GhzSign,
    state: Vec<Complex64>,
}

impl GhzTarget {
    pub fn new(sign: GhzSign) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let tail = match sign {
            GhzSign::Minus => Complex64::new(0.0, -s),
            GhzSign::Plus => Complex64::new(0.0, s),
        };
        GhzTarget {
            sign,
            state: vec![
                Complex64::new(s, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                tail,
            ],
        }
    }

    pub fn minus() -> Self {
        Self::new(GhzSign::Minus)
    }

    pub fn plus() -> Self {
        Self::new(GhzSign::Plus)
    }

    pub fn state(&self) -> &[Complex64] {
        &self.state
    }

    /// Rank-one projector onto the target.
    pub fn projector(&self) -> DensityOperator {
        DensityOperator::from_pure(&self.state, BasisTag::MODEL).expect("target is normalized")
    }
}

/// tr(rho * |target><target|), clamped to [0, 1].
pub fn ghz_probability(rho: &DensityOperator, target: &GhzTarget) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "generation probability needs a 4-dim state, got {}",
            rho.dim()
        )));
    }
    Ok(rho.overlap(target.state()).clamp(0.0, 1.0))
}

/// Closed-form generation probability for the minus-sign target and the
/// default initial state (m = n = 1), with the two misprints repaired:
/// the exponents carry no extra /4 (matching the state closed form) and
/// the two pure sine terms have swapped coefficients and signs.
pub fn ghz_probability_closed_form(
    params: &SystemParams,
    profile: &DephasingProfile,
    t: f64,
) -> Result<f64> {
    let (gamma, c, _) = profile.sample(t)?;
    let (mu, a, om) = (params.mu_mn, params.a_mn, params.omega_rabi);
    let phi = 4.0 * mu * a * c;
    let om_w = om * om / (4.0 * mu * mu);
    let value = 0.5
        + om_w * (-mu * mu * gamma).exp() * (2.0 * mu * t).cos() * phi.cos()
        + om_w * ((-a * a * gamma).exp() * (2.0 * a * t).sin() * phi.cos() - 1.0)
        - 0.5
            * ((mu + a) / (2.0 * mu)).powi(2)
            * (-(mu - a) * (mu - a) * gamma).exp()
            * (2.0 * (mu - a) * t).sin()
        + 0.5
            * ((mu - a) / (2.0 * mu)).powi(2)
            * (-(mu + a) * (mu + a) * gamma).exp()
            * (2.0 * (mu + a) * t).sin();
    Ok(value)
}

/// The generation-probability expression exactly as printed in its source
/// derivation, kept for documentation: at (kappa = 0, a t = pi/4, alpha = 4)
/// it evaluates to 0.46875 where unitarity forces 1.
pub fn ghz_probability_printed_form(
    params: &SystemParams,
    profile: &DephasingProfile,
    t: f64,
) -> Result<f64> {
    let (gamma, c, _) = profile.sample(t)?;
    let (mu, a, om) = (params.mu_mn, params.a_mn, params.omega_rabi);
    let phi = 4.0 * mu * a * c;
    let om_w = om * om / (4.0 * mu * mu);
    let value = 0.5
        + om_w * (-mu * mu * gamma / 4.0).exp() * (2.0 * mu * t).cos() * phi.cos()
        + om_w * ((-a * a * gamma / 4.0).exp() * (2.0 * a * t).sin() * phi.cos() - 1.0)
        + 0.5
            * ((mu - a) / (2.0 * mu)).powi(2)
            * (-(mu - a) * (mu - a) * gamma / 4.0).exp()
            * (2.0 * (mu - a) * t).sin()
        - 0.5
            * ((mu + a) / (2.0 * mu)).powi(2)
            * (-(mu + a) * (mu + a) * gamma / 4.0).exp()
            * (2.0 * (mu + a) * t).sin();
    Ok(value)
}

/// Population inversion I = P_g - P_e from the model-basis diagonal.
pub fn population_inversion(rho: &DensityOperator) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "population inversion needs a 4-dim state, got {}",
            rho.dim()
        )));
    }
    let m: &ComplexMatrix = rho.matrix();
    Ok(m.get(0, 0).re - m.get(1, 1).re + m.get(2, 2).re - m.get(3, 3).re)
}

/// Closed-form inversion for the default initial state (m = n = 1), with
/// the second coefficient repaired to (mu - a)/(2 mu) so that I(0) = 1.
/// Carries no phase-drift dependence: only Gamma enters.
pub fn inversion_closed_form(
    params: &SystemParams,
    profile: &DephasingProfile,
    t: f64,
) -> Result<f64> {
    let (gamma, _, _) = profile.sample(t)?;
    let (mu, a) = (params.mu_mn, params.a_mn);
    Ok(
        (mu + a) / (2.0 * mu) * (-(mu - a) * (mu - a) * gamma).exp() * (2.0 * (mu - a) * t).cos()
            + (mu - a) / (2.0 * mu)
                * (-(mu + a) * (mu + a) * gamma).exp()
                * (2.0 * (mu + a) * t).cos(),
    )
}

/// The inversion expression exactly as printed in its source derivation,
/// kept for documentation: both coefficients read (mu + a)/(2 mu), so it
/// evaluates to 1.25 at t = 0 (alpha = 4) where normalization forces 1.
pub fn inversion_printed_form(
    params: &SystemParams,
    profile: &DephasingProfile,
    t: f64,
) -> Result<f64> {
    let (gamma, _, _) = profile.sample(t)?;
    let (mu, a) = (params.mu_mn, params.a_mn);
    let coeff = (mu + a) / (2.0 * mu);
    Ok(
        coeff * (-(mu - a) * (mu - a) * gamma).exp() * (2.0 * (mu - a) * t).cos()
            + coeff * (-(mu + a) * (mu + a) * gamma).exp() * (2.0 * (mu + a) * t).cos(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{build_profile, BathSpec, DephasingProfile};
    use crate::evolution::{evolve_dephasing, rho_closed_form, InitialState};
    use crate::model::{analytic_eigensystem, derived_params, SystemParams};

    fn params() -> SystemParams {
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

    fn grid(n: usize, t_max: f64) -> Vec<f64> {
        (0..n).map(|k| k as f64 * t_max / (n - 1) as f64).collect()
    }

    fn zero_profile(g: &[f64]) -> DephasingProfile {
        let z = vec![0.0; g.len()];
        DephasingProfile::from_parts(g.to_vec(), z.clone(), z.clone(), z).unwrap()
    }

    fn hot_profile(kappa: f64, g: &[f64]) -> DephasingProfile {
        let spec = BathSpec::new(kappa, 519.3, 5.881e-4).unwrap();
        build_profile(&spec, &params(), g).unwrap()
    }

    #[test]
    fn ground_state_has_half_probability() {
        let rho = InitialState::default().density();
        assert!((ghz_probability(&rho, &GhzTarget::minus()).unwrap() - 0.5).abs() < 1e-14);
        assert!((ghz_probability(&rho, &GhzTarget::plus()).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn targets_orthonormal_and_idempotent() {
        let minus = GhzTarget::minus();
        let plus = GhzTarget::plus();
        let dot: Complex64 = minus
            .state()
            .iter()
            .zip(plus.state())
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!(dot.norm() < 1e-15);
        let proj = minus.projector();
        let sq = proj.matrix().mul(proj.matrix());
        assert!(sq.max_abs_diff(proj.matrix()) <= 1e-12);
    }

    #[test]
    fn coherent_anchor_points() {
        let p = params();
        let t45 = std::f64::consts::FRAC_PI_4;
        let t135 = 3.0 * t45;
        let g = vec![0.0, t45, t135];
        let prof = zero_profile(&g);
        let minus = GhzTarget::minus();
        let rho45 = rho_closed_form(&p, &prof, t45).unwrap();
        assert!((ghz_probability(&rho45, &minus).unwrap() - 1.0).abs() <= 1e-9);
        let rho135 = rho_closed_form(&p, &prof, t135).unwrap();
        assert!(ghz_probability(&rho135, &minus).unwrap() <= 1e-9);
        assert!(population_inversion(&rho45).unwrap().abs() <= 1e-9);
        assert!(population_inversion(&rho135).unwrap().abs() <= 1e-9);
        assert!(
            (population_inversion(&InitialState::default().density()).unwrap() - 1.0).abs() < 1e-14
        );
    }

    #[test]
    fn printed_forms_reproduce_misprint_values() {
        let p = params();
        let t45 = std::f64::consts::FRAC_PI_4;
        let g = vec![0.0, t45];
        let prof = zero_profile(&g);
        let printed = ghz_probability_printed_form(&p, &prof, t45).unwrap();
        assert!(
            (printed - 0.46875).abs() < 1e-12,
            "printed form gave {printed}"
        );
        let corrected = ghz_probability_closed_form(&p, &prof, t45).unwrap();
        assert!((corrected - 1.0).abs() < 1e-12);
        // both printed and corrected agree at t = 0 (all sines vanish)
        let printed0 = ghz_probability_printed_form(&p, &prof, 0.0).unwrap();
        let corrected0 = ghz_probability_closed_form(&p, &prof, 0.0).unwrap();
        assert!((printed0 - 0.5).abs() < 1e-14);
        assert!((corrected0 - 0.5).abs() < 1e-14);

        let printed_i0 = inversion_printed_form(&p, &prof, 0.0).unwrap();
        assert!(
            (printed_i0 - 1.25).abs() < 1e-12,
            "printed inversion gave {printed_i0}"
        );
        let corrected_i0 = inversion_closed_form(&p, &prof, 0.0).unwrap();
        assert!((corrected_i0 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn closed_forms_match_direct_traces() {
        let p = params();
        let eig = analytic_eigensystem(&p);
        let g = grid(181, std::f64::consts::PI);
        let rho0 = InitialState::default().density();
        for kappa in [0.0, 0.01, 0.1] {
            let prof = if kappa == 0.0 {
                zero_profile(&g)
            } else {
                hot_profile(kappa, &g)
            };
            for &t in &g {
                let rho = evolve_dephasing(&rho0, &eig, &prof, t).unwrap();
                let p_direct = ghz_probability(&rho, &GhzTarget::minus()).unwrap();
                let p_closed = ghz_probability_closed_form(&p, &prof, t).unwrap();
                assert!(
                    (p_direct - p_closed).abs() <= 1e-9,
                    "P mismatch at kappa={kappa}, t={t}: {p_direct} vs {p_closed}"
                );
                let i_direct = population_inversion(&rho).unwrap();
                let i_closed = inversion_closed_form(&p, &prof, t).unwrap();
                assert!(
                    (i_direct - i_closed).abs() <= 1e-9,
                    "I mismatch at kappa={kappa}, t={t}"
                );
            }
        }
    }

    #[test]
    fn coherent_inversion_is_two_cosines() {
        // kappa = 0, alpha = 4: I(t) = (5/8) cos(6 t) + (3/8) cos(10 t)
        let p = params();
        let g = grid(721, std::f64::consts::PI);
        let prof = zero_profile(&g);
        for &t in &g {
            let want = 0.625 * (6.0 * t).cos() + 0.375 * (10.0 * t).cos();
            let got = inversion_closed_form(&p, &prof, t).unwrap();
            assert!((got - want).abs() <= 1e-9, "t={t}");
        }
    }

    #[test]
    fn inversion_ignores_phase_drift() {
        // zeroing C(t) must not change the closed-form inversion
        let p = params();
        let g = grid(61, std::f64::consts::PI);
        let prof = hot_profile(0.05, &g);
        let no_phase = DephasingProfile::from_parts(
            prof.grid().to_vec(),
            prof.gamma().to_vec(),
            vec![0.0; g.len()],
            vec![0.0; g.len()],
        )
        .unwrap();
        for &t in &g {
            let a = inversion_closed_form(&p, &prof, t).unwrap();
            let b = inversion_closed_form(&p, &no_phase, t).unwrap();
            assert_eq!(a, b, "phase drift leaked into the inversion at t={t}");
        }
    }

    #[test]
    fn strong_damping_kills_inversion() {
        let p = params();
        let g = vec![0.0, 2.5];
        let prof = hot_profile(0.1, &g);
        assert!(inversion_closed_form(&p, &prof, 2.5).unwrap().abs() < 1e-12);
    }

    #[test]
    fn probabilities_of_orthogonal_targets_bounded() {
        let p = params();
        let eig = analytic_eigensystem(&p);
        let g = grid(121, std::f64::consts::PI);
        let prof = hot_profile(0.01, &g);
        let rho0 = InitialState::default().density();
        for &t in &g {
            let rho = evolve_dephasing(&rho0, &eig, &prof, t).unwrap();
            let sum = ghz_probability(&rho, &GhzTarget::minus()).unwrap()
                + ghz_probability(&rho, &GhzTarget::plus()).unwrap();
            assert!(sum <= 1.0 + 1e-10, "P- + P+ = {sum} at t={t}");
        }
    }

    #[test]
    fn coherent_periodicity_with_sign_swap() {
        // Without a bath the probability repeats with period pi/a, and a
        // half-period shift swaps the two targets: the minus one peaks at
        // a t = pi/4, 5 pi/4, ..., the plus one at 3 pi/4, 7 pi/4, ...
        let p = params();
        let period = std::f64::consts::PI; // a = 1
        let ts: Vec<f64> = (0..16).map(|k| k as f64 * 0.19).collect();
        let mut g: Vec<f64> = ts
            .iter()
            .flat_map(|&t| [t, t + 0.5 * period, t + period])
            .collect();
        g.sort_by(|a, b| a.partial_cmp(b).unwrap());
        g.dedup();
        let prof = zero_profile(&g);
        for &t in &ts {
            let here = ghz_probability_closed_form(&p, &prof, t).unwrap();
            let next_period = ghz_probability_closed_form(&p, &prof, t + period).unwrap();
            assert!((here - next_period).abs() <= 1e-9, "period broke at t={t}");
            let rho_half = rho_closed_form(&p, &prof, t + 0.5 * period).unwrap();
            let swapped = ghz_probability(&rho_half, &GhzTarget::plus()).unwrap();
            assert!(
                (here - swapped).abs() <= 1e-9,
                "target swap failed at t={t}"
            );
        }
    }
}
