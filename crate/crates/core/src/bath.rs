//! Ohmic-bath dephasing integrals and sampled profiles.
//!
//! The spectral weight is fixed to the ohmic form
//! `D(w) |g|^2 = kappa * w * exp(-w / cutoff)`, giving
//!
//! ```text
//! Gamma(t) = 8 kappa Int_0^{3 cutoff} dw exp(-w/cutoff)/w coth(beta w / 2) sin^2(w t / 2)
//! C(t)     =   kappa Int_0^{3 cutoff} dw exp(-w/cutoff)/w (sin(w t) - w t)
//! ```
//!
//! Both integrands have one sign (Gamma's >= 0, C's <= 0), so the adaptive
//! scheme can normalize its tolerance against the running total without
//! cancellation worries. All quantities are treated as dimensionless; the
//! caller picks a unit system in which `beta`, `cutoff` and `t` are
//! mutually consistent (the scenario layer uses a_11 = 1 units).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::SystemParams;

/// One bath configuration: coupling strength, spectral cutoff, inverse
/// temperature, and quadrature controls.
#[derive(Clone, Copy, Debug)]
pub struct BathSpec {
    /// Dimensionless system-bath coupling kappa >= 0.
    pub kappa: f64,
    /// Spectral cutoff frequency (same units as the system frequencies).
    pub cutoff: f64,
    /// Inverse temperature, in inverse units of `cutoff`.
    pub beta: f64,
    /// Relative tolerance of the adaptive quadrature.
    pub quad_rel_tol: f64,
    /// Maximum bisection depth per panel before giving up.
    pub quad_max_depth: u32,
}

impl BathSpec {
    pub fn new(kappa: f64, cutoff: f64, beta: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !(cutoff > 0.0) || !(beta > 0.0) {
            return Err(Error::InvalidParams(format!(
                "bath spec needs kappa >= 0, cutoff > 0, beta > 0; got ({kappa}, {cutoff}, {beta})"
            )));
        }
        Ok(Self {
            kappa,
            cutoff,
            beta,
            quad_rel_tol: 1e-8,
            quad_max_depth: 40,
        })
    }
}

/// coth(x) for x > 0, series-expanded near zero to avoid 1/tanh blowup.
#[inline]
fn coth(x: f64) -> f64 {
    if x < 1e-4 {
        1.0 / x + x / 3.0
    } else {
        1.0 / x.tanh()
    }
}

/// sin(x) - x without cancellation for small x.
#[inline]
fn sin_minus_x(x: f64) -> f64 {
    if x.abs() < 0.5 {
        let x2 = x * x;
        x * x2 * (-1.0 / 6.0 + x2 * (1.0 / 120.0 + x2 * (-1.0 / 5040.0 + x2 / 362_880.0)))
    } else {
        x.sin() - x
    }
}

/// Dephasing amplitude Gamma(t) >= 0.
pub fn gamma_of_t(spec: &BathSpec, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParams(format!("t must be >= 0, got {t}")));
    }
    if spec.kappa == 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    let (beta, wc) = (spec.beta, spec.cutoff);
    let f = move |w: f64| -> f64 {
        if w == 0.0 {
            // limit of exp(-w/wc)/w * coth(beta w/2) * sin^2(w t/2)
            return t * t / (2.0 * beta);
        }
        let s = (0.5 * w * t).sin();
        (-w / wc).exp() / w * coth(0.5 * beta * w) * s * s
    };
    let integral = integrate(&f, 3.0 * wc, t, spec)?;
    Ok(8.0 * spec.kappa * integral)
}

/// Phase-drift integral C(t) <= 0.
pub fn c_of_t(spec: &BathSpec, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParams(format!("t must be >= 0, got {t}")));
    }
    if spec.kappa == 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    let wc = spec.cutoff;
    let f = move |w: f64| -> f64 {
        if w == 0.0 {
            return 0.0;
        }
        (-w / wc).exp() / w * sin_minus_x(w * t)
    };
    let integral = integrate(&f, 3.0 * wc, t, spec)?;
    Ok(spec.kappa * integral)
}

/// Adaptive Simpson over [0, b] with per-oscillation initial panels.
fn integrate(f: &dyn Fn(f64) -> f64, b: f64, t: f64, spec: &BathSpec) -> Result<f64> {
    // Initial panel width: at most an eighth of the integrand's oscillation
    // period 2 pi / t, and at least 16 panels across the domain.
    let mut width = b / 16.0;
    if t > 0.0 {
        width = width.min(std::f64::consts::FRAC_PI_4 / t);
    }
    let n = (b / width).ceil() as usize;
    let h = b / n as f64;

    struct Panel {
        a: f64,
        m: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        s: f64,
    }

    let mut panels = Vec::with_capacity(n);
    let mut coarse = 0.0;
    let mut fa = f(0.0);
    for i in 0..n {
        let x0 = i as f64 * h;
        let x1 = if i + 1 == n { b } else { (i + 1) as f64 * h };
        let xm = 0.5 * (x0 + x1);
        let fm = f(xm);
        let fb = f(x1);
        let s = (x1 - x0) / 6.0 * (fa + 4.0 * fm + fb);
        coarse += s;
        panels.push(Panel {
            a: x0,
            m: xm,
            b: x1,
            fa,
            fm,
            fb,
            s,
        });
        fa = fb;
    }

    // Single-signed integrands: |coarse| is a sound scale for the tolerance.
    let scale = coarse.abs().max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    for p in &panels {
        let tol = spec.quad_rel_tol * scale * (p.b - p.a) / b;
        total += refine(
            f,
            p.a,
            p.m,
            p.b,
            p.fa,
            p.fm,
            p.fb,
            p.s,
            tol,
            spec.quad_max_depth,
        )?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    s: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let sl = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let sr = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let s2 = sl + sr;
    if (s2 - s).abs() <= 15.0 * tol {
        return Ok(s2 + (s2 - s) / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureNoConvergence(format!(
            "panel [{a:.6e}, {b:.6e}] residual {:.3e} above budget {:.3e}",
            (s2 - s).abs(),
            15.0 * tol
        )));
    }
    Ok(refine(f, a, lm, m, fa, flm, fm, sl, 0.5 * tol, depth - 1)?
        + refine(f, m, rm, b, fm, frm, fb, sr, 0.5 * tol, depth - 1)?)
}

/// Sampled Gamma(t), C(t) and phi(t) = 4 mu a C(t) on a fixed time grid.
#[derive(Clone, Debug)]
pub struct DephasingProfile {
    grid: Vec<f64>,
    gamma: Vec<f64>,
    c: Vec<f64>,
    phi: Vec<f64>,
    interpolate: bool,
}

impl DephasingProfile {
    /// Assemble a profile from already-sampled columns. Used by tests that
    /// need doctored profiles; `build_profile` is the normal route.
    pub fn from_parts(grid: Vec<f64>, gamma: Vec<f64>, c: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        if grid.is_empty()
            || grid.len() != gamma.len()
            || grid.len() != c.len()
            || grid.len() != phi.len()
        {
            return Err(Error::InvalidParams(
                "profile columns must be non-empty and equally long".into(),
            ));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) || grid[0] < 0.0 {
            return Err(Error::InvalidParams(
                "profile grid must be ascending with grid[0] >= 0".into(),
            ));
        }
        Ok(Self {
            grid,
            gamma,
            c,
            phi,
            interpolate: false,
        })
    }

    /// Enable approximate monotone-cubic sampling between grid points.
    pub fn with_interpolation(mut self) -> Self {
        self.interpolate = true;
        self
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// (Gamma, C, phi) at time `t`. Exact grid hits only, unless the
    /// interpolation mode was enabled; otherwise `GridMiss`.
    pub fn sample(&self, t: f64) -> Result<(f64, f64, f64)> {
        let tol = 1e-12 * t.abs().max(1.0);
        match self.grid.binary_search_by(|g| g.partial_cmp(&t).unwrap()) {
            Ok(k) => Ok((self.gamma[k], self.c[k], self.phi[k])),
            Err(ins) => {
                for k in [ins.wrapping_sub(1), ins] {
                    if let Some(&g) = self.grid.get(k) {
                        if (g - t).abs() <= tol {
                            return Ok((self.gamma[k], self.c[k], self.phi[k]));
                        }
                    }
                }
                if self.interpolate && t >= self.grid[0] && t <= *self.grid.last().unwrap() {
                    return Ok((
                        mono_cubic(&self.grid, &self.gamma, t),
                        mono_cubic(&self.grid, &self.c, t),
                        mono_cubic(&self.grid, &self.phi, t),
                    ));
                }
                Err(Error::GridMiss { t })
            }
        }
    }
}

/// Fritsch-Carlson monotone cubic interpolation with local tangents.
fn mono_cubic(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if n == 1 {
        return ys[0];
    }
    let i = match xs.binary_search_by(|g| g.partial_cmp(&x).unwrap()) {
        Ok(k) => return ys[k],
        Err(ins) => ins.clamp(1, n - 1) - 1,
    };
    let h = xs[i + 1] - xs[i];
    let d = (ys[i + 1] - ys[i]) / h;
    let secant = |k: usize| (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]);
    let tangent = |k: usize| -> f64 {
        if k == 0 {
            secant(0)
        } else if k == n - 1 {
            secant(n - 2)
        } else {
            let (d0, d1) = (secant(k - 1), secant(k));
            if d0 * d1 <= 0.0 {
                0.0
            } else {
                2.0 * d0 * d1 / (d0 + d1) // harmonic mean limits overshoot
            }
        }
    };
    let (mut m0, mut m1) = (tangent(i), tangent(i + 1));
    if d == 0.0 {
        m0 = 0.0;
        m1 = 0.0;
    }
    let s = (x - xs[i]) / h;
    let (s2, s3) = (s * s, s * s * s);
    ys[i] * (2.0 * s3 - 3.0 * s2 + 1.0)
        + m0 * h * (s3 - 2.0 * s2 + s)
        + ys[i + 1] * (-2.0 * s3 + 3.0 * s2)
        + m1 * h * (s3 - s2)
}

/// Sample Gamma, C and phi = 4 mu_mn a_mn C on an ascending time grid.
/// Grid points are evaluated in parallel; the result is immutable.
pub fn build_profile(
    spec: &BathSpec,
    params: &SystemParams,
    grid: &[f64],
) -> Result<DephasingProfile> {
    if grid.is_empty() {
        return Err(Error::InvalidParams(
            "profile grid must be non-empty".into(),
        ));
    }
    if grid[0] < 0.0 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams(
            "profile grid must be ascending with grid[0] >= 0".into(),
        ));
    }
    let pairs: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&t| Ok((gamma_of_t(spec, t)?, c_of_t(spec, t)?)))
        .collect::<Result<_>>()?;
    let scale = 4.0 * params.mu_mn * params.a_mn;
    let gamma: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let c: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let phi: Vec<f64> = c.iter().map(|&v| scale * v).collect();
    DephasingProfile::from_parts(grid.to_vec(), gamma, c, phi)
}
