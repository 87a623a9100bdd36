//! Rotationally symmetric model manifolds and the volume-growth
//! sufficient test for p-parabolicity.
//!
//! A model is described by its warping function `sigma(r) > 0`; the
//! boundary sphere of radius `r` has volume `omega_{m-1} sigma(r)^{m-1}`.
//! The manifold is p-parabolic provided
//! `(1 / vol_{m-1} dB_r)^{1/(p-1)}` is not integrable at infinity.
//!
//! The criterion is one-directional: a divergent integral yields
//! [`Verdict::Parabolic`], a convergent one yields
//! [`Verdict::Inconclusive`], never "not parabolic".

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ineq::PExponent;

/// Warping function of a rotationally symmetric model.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelProfile {
    /// `sigma(r) = r^k`
    Power { exponent: f64 },
    /// `sigma(r) = exp(a r)`
    Exponential { rate: f64 },
    /// piecewise-linear interpolation of `(r, sigma)` samples,
    /// strictly increasing in `r`, `sigma > 0`
    Tabulated { samples: Vec<(f64, f64)> },
}

impl ModelProfile {
    pub fn validate(&self) -> Result<()> {
        match self {
            ModelProfile::Power { exponent } => {
                if !exponent.is_finite() {
                    return Err(Error::InvalidProfile("power exponent must be finite".into()));
                }
            }
            ModelProfile::Exponential { rate } => {
                if !rate.is_finite() {
                    return Err(Error::InvalidProfile("exponential rate must be finite".into()));
                }
            }
            ModelProfile::Tabulated { samples } => {
                if samples.len() < 2 {
                    return Err(Error::InvalidProfile("need at least 2 samples".into()));
                }
                for w in samples.windows(2) {
                    if !(w[1].0 > w[0].0) {
                        return Err(Error::InvalidProfile(
                            "sample radii must be strictly increasing".into(),
                        ));
                    }
                }
                if samples.iter().any(|&(r, s)| !(r > 0.0) || !(s > 0.0)) {
                    return Err(Error::InvalidProfile(
                        "samples need r > 0 and sigma > 0".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// `sigma(r)`; errors outside a tabulated range.
    pub fn sigma(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidProfile(format!("invalid radius {r}")));
        }
        match self {
            ModelProfile::Power { exponent } => Ok(r.powf(*exponent)),
            ModelProfile::Exponential { rate } => Ok((rate * r).exp()),
            ModelProfile::Tabulated { samples } => {
                let (lo, hi) = (samples[0].0, samples[samples.len() - 1].0);
                if r < lo || r > hi {
                    return Err(Error::OutOfProfileRange { r, lo, hi });
                }
                let j = samples.partition_point(|&(rr, _)| rr < r).min(samples.len() - 1);
                let j = j.max(1);
                let (r0, s0) = samples[j - 1];
                let (r1, s1) = samples[j];
                let t = (r - r0) / (r1 - r0);
                Ok(s0 + t * (s1 - s0))
            }
        }
    }

    /// Largest radius the profile can be evaluated at, if bounded.
    pub fn max_radius(&self) -> Option<f64> {
        match self {
            ModelProfile::Tabulated { samples } => Some(samples[samples.len() - 1].0),
            _ => None,
        }
    }

    /// Parses `power:K`, `exp:A`, or a JSON file path.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let profile = if let Some(k) = spec.strip_prefix("power:") {
            ModelProfile::Power {
                exponent: k
                    .parse()
                    .map_err(|_| Error::InvalidProfile(format!("bad power exponent {k}")))?,
            }
        } else if let Some(a) = spec.strip_prefix("exp:") {
            ModelProfile::Exponential {
                rate: a
                    .parse()
                    .map_err(|_| Error::InvalidProfile(format!("bad exponential rate {a}")))?,
            }
        } else {
            let text = std::fs::read_to_string(spec)?;
            serde_json::from_str(&text)?
        };
        profile.validate()?;
        Ok(profile)
    }
}

/// Area of the unit sphere in R^m: `2 pi^{m/2} / Gamma(m/2)`.
pub fn unit_sphere_area(m: u32) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidProfile(format!("dimension m must be >= 2, got {m}")));
    }
    // Gamma(m/2) at integer and half-integer arguments.
    let gamma_half = |m: u32| -> f64 {
        if m % 2 == 0 {
            // (m/2 - 1)!
            (1..m / 2).map(|k| k as f64).product()
        } else {
            // Gamma(1/2) = sqrt(pi), Gamma(z+1) = z Gamma(z)
            let mut g = std::f64::consts::PI.sqrt();
            let mut z = 0.5;
            while z + 1.0 <= m as f64 / 2.0 {
                g *= z;
                z += 1.0;
            }
            g
        }
    };
    let m_f = m as f64;
    Ok(2.0 * std::f64::consts::PI.powf(m_f / 2.0) / gamma_half(m))
}

/// Boundary-sphere volume `omega_{m-1} sigma(r)^{m-1}`.
pub fn boundary_volume(profile: &ModelProfile, m: u32, r: f64) -> Result<f64> {
    Ok(unit_sphere_area(m)? * profile.sigma(r)?.powi(m as i32 - 1))
}

/// Integrand of the parabolicity test: `(vol_{m-1} dB_r)^{-1/(p-1)}`.
pub fn parabolicity_integrand(profile: &ModelProfile, m: u32, p: PExponent, r: f64) -> Result<f64> {
    let vol = boundary_volume(profile, m, r)?;
    if !(vol > 0.0) {
        return Err(Error::Quadrature(format!("non-positive boundary volume at r = {r}")));
    }
    Ok(vol.powf(-1.0 / (p.get() - 1.0)))
}

/// Partial integral of the test integrand over `[r0, r1]` by adaptive
/// Simpson quadrature on geometric panels (relative tolerance 1e-9).
pub fn parabolicity_integral(
    profile: &ModelProfile,
    m: u32,
    p: PExponent,
    r0: f64,
    r1: f64,
) -> Result<f64> {
    if !(r0 > 0.0) || !(r1 >= r0) {
        return Err(Error::Quadrature(format!("invalid interval [{r0}, {r1}]")));
    }
    if r1 == r0 {
        return Ok(0.0);
    }
    let f = |r: f64| parabolicity_integrand(profile, m, p, r);
    // geometric panels follow power-law decay well
    let mut total = 0.0;
    let mut lo = r0;
    while lo < r1 {
        let hi = (lo * 2.0).min(r1);
        total += adaptive_simpson(&f, lo, hi, 1e-9)?;
        lo = hi;
    }
    Ok(total)
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive_simpson<F>(f: &F, a: f64, b: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    struct Ctx<'a, F> {
        f: &'a F,
        rel_tol: f64,
        evals: usize,
    }
    fn recurse<F>(
        ctx: &mut Ctx<'_, F>,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        depth: u32,
    ) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (ctx.f)(lm)?;
        let frm = (ctx.f)(rm)?;
        ctx.evals += 2;
        if ctx.evals > 2_000_000 {
            return Err(Error::Quadrature("evaluation budget exhausted".into()));
        }
        if !flm.is_finite() || !frm.is_finite() {
            return Err(Error::Quadrature(format!("non-finite integrand near [{a}, {b}]")));
        }
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let err = left + right - whole;
        if depth >= 48 {
            return Err(Error::Quadrature(format!("max refinement depth at [{a}, {b}]")));
        }
        if err.abs() <= 15.0 * ctx.rel_tol * (left + right).abs().max(1e-300) || depth >= 40 {
            return Ok(left + right + err / 15.0);
        }
        Ok(recurse(ctx, a, m, fa, flm, fm, left, depth + 1)?
            + recurse(ctx, m, b, fm, frm, fb, right, depth + 1)?)
    }

    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    if !fa.is_finite() || !fb.is_finite() || !fm.is_finite() {
        return Err(Error::Quadrature(format!("non-finite integrand on [{a}, {b}]")));
    }
    let whole = simpson(fa, fm, fb, b - a);
    let mut ctx = Ctx {
        f,
        rel_tol,
        evals: 3,
    };
    recurse(&mut ctx, a, b, fa, fm, fb, whole, 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Parabolic,
    Inconclusive,
}

/// Outcome of the volume-growth test, with diagnostics: the fitted tail
/// exponent of the integrand and partial integrals at checkpoints.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParabolicityVerdict {
    pub verdict: Verdict,
    /// least-squares slope of `log integrand` vs `log r` over the last
    /// decade of the working range
    pub tail_exponent_estimate: f64,
    /// `(R, integral over [r0, R])` at geometric checkpoints
    pub integral_values: Vec<(f64, f64)>,
    pub r0: f64,
    pub r_max: f64,
}

pub const DEFAULT_R0: f64 = 1.0;
pub const DEFAULT_R_MAX: f64 = 1e6;
/// Margin on the divergence threshold: the integral diverges when the tail
/// exponent is >= -1, and the fit is accepted down to `-1 - SLOPE_MARGIN`.
pub const SLOPE_MARGIN: f64 = 1e-3;

/// Classifies a model by the volume-growth criterion with default range.
pub fn classify_model(profile: &ModelProfile, m: u32, p: PExponent) -> Result<ParabolicityVerdict> {
    classify_model_in(profile, m, p, DEFAULT_R0, DEFAULT_R_MAX)
}

pub fn classify_model_in(
    profile: &ModelProfile,
    m: u32,
    p: PExponent,
    r0: f64,
    r_max: f64,
) -> Result<ParabolicityVerdict> {
    profile.validate()?;
    if !(r0 > 0.0) || !(r_max > r0) {
        return Err(Error::InvalidProfile(format!("invalid range [{r0}, {r_max}]")));
    }
    let mut r_hi = match profile.max_radius() {
        Some(rm) => rm.min(r_max),
        None => r_max,
    };
    // Shrink the working range while the integrand underflows: a tail that
    // underflows to zero is already integrable, the fit is done where the
    // values are representable.
    const UNDERFLOW_FLOOR: f64 = 1e-280;
    if parabolicity_integrand(profile, m, p, r_hi)? < UNDERFLOW_FLOOR {
        let mut lo = r0;
        let mut hi = r_hi;
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if parabolicity_integrand(profile, m, p, mid)? < UNDERFLOW_FLOOR {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi / lo < 1.0 + 1e-12 {
                break;
            }
        }
        r_hi = lo;
    }
    if r_hi < 10.0 * r0 {
        return Err(Error::TailEstimation(format!(
            "working range [{r0}, {r_hi}] spans less than one decade"
        )));
    }

    // fit log-integrand vs log-r over the last decade
    let fit_lo = r_hi / 10.0;
    let k = 33;
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..k {
        let t = i as f64 / (k - 1) as f64;
        let r = fit_lo * (r_hi / fit_lo).powf(t);
        let v = parabolicity_integrand(profile, m, p, r)?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::TailEstimation(format!("integrand not positive at r = {r}")));
        }
        let x = r.ln();
        let y = v.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let kf = k as f64;
    let slope = (kf * sxy - sx * sy) / (kf * sxx - sx * sx);

    // partial integrals at geometric checkpoints for plotting
    let mut integral_values = Vec::new();
    let mut acc = 0.0;
    let mut lo = r0;
    let mut checkpoint = r0 * 10.0;
    while checkpoint < r_hi {
        acc += parabolicity_integral(profile, m, p, lo, checkpoint)?;
        integral_values.push((checkpoint, acc));
        lo = checkpoint;
        checkpoint *= 10.0;
    }
    acc += parabolicity_integral(profile, m, p, lo, r_hi)?;
    integral_values.push((r_hi, acc));

    let verdict = if slope >= -1.0 - SLOPE_MARGIN {
        Verdict::Parabolic
    } else {
        Verdict::Inconclusive
    };
    Ok(ParabolicityVerdict {
        verdict,
        tail_exponent_estimate: slope,
        integral_values,
        r0,
        r_max: r_hi,
    })
}
