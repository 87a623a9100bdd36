//! Pointwise vector inequalities behind nonlinear comparison arguments.
//!
//! Every inequality is exposed as a signed *gap* (left side minus right
//! side). Nonnegativity of the gap is the inequality, and tests can detect
//! violations directly instead of having them clamped away.
//!
//! The three kernels:
//!
//! * [`lindqvist_gap`] — Lindqvist's inequality
//!   `|x|^p + (p-1)|y|^p >= p|y|^{p-2}<x,y> + |x-y|^p / (2^{p-1}-1)`.
//! * [`mhck_gap`] — its monotonicity consequence for the p-flux map
//!   `<|x|^{p-2}x - |y|^{p-2}y, x-y> >= c_p |x-y|^p` with
//!   `c_p = 2 / (p (2^{p-1}-1))`, see [`mhck_constant`].
//! * [`classical_mhck_gap`] — the Mikljukov–Hwang–Collin–Krust inequality
//!   for the mean-curvature operator `x -> x / sqrt(1+|x|^2)`.
//!
//! Degenerate powers are taken by continuous extension: `|y|^{p-2}<x,y>`
//! is 0 whenever `y = 0`, valid for `p >= 2`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent of the p-Laplace operator. Enforces the standing assumption
/// `p >= 2` at construction, so downstream code can rely on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PExponent(f64);

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p < 2.0 {
            return Err(Error::ExponentOutOfRange(p));
        }
        Ok(PExponent(p))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// Conjugate exponent `p / (p-1)`.
    #[inline]
    pub fn conjugate(self) -> f64 {
        self.0 / (self.0 - 1.0)
    }
}

impl TryFrom<f64> for PExponent {
    type Error = Error;
    fn try_from(p: f64) -> Result<Self> {
        PExponent::new(p)
    }
}

impl From<PExponent> for f64 {
    fn from(p: PExponent) -> f64 {
        p.0
    }
}

#[inline]
pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[inline]
pub fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// `|v|^{p-2}` with the continuous extension 0 at `v = 0` (for the flux
/// `|v|^{p-2} v`, which tends to 0 as `v -> 0` whenever `p >= 2`).
#[inline]
pub fn flux_scale(norm: f64, p: f64) -> f64 {
    if norm == 0.0 {
        0.0
    } else {
        norm.powf(p - 2.0)
    }
}

fn check_dims(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::InvalidField("empty vector".into()));
    }
    Ok(())
}

/// Gap of Lindqvist's inequality:
/// `|x|^p + (p-1)|y|^p - p|y|^{p-2}<x,y> - |x-y|^p/(2^{p-1}-1)`.
pub fn lindqvist_gap(x: &[f64], y: &[f64], p: PExponent) -> Result<f64> {
    check_dims(x, y)?;
    let p = p.get();
    let nx = norm(x);
    let ny = norm(y);
    let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let nd = norm(&diff);
    let cross = flux_scale(ny, p) * dot(x, y);
    Ok(nx.powf(p) + (p - 1.0) * ny.powf(p) - p * cross - nd.powf(p) / (powm1(p)))
}

/// `2^{p-1} - 1`.
#[inline]
fn powm1(p: f64) -> f64 {
    (p - 1.0).exp2() - 1.0
}

/// The monotonicity constant `2 / (p (2^{p-1} - 1))`, in `(0, 1]` for
/// `p >= 2` and exactly 1 at `p = 2`.
pub fn mhck_constant(p: PExponent) -> f64 {
    let p = p.get();
    2.0 / (p * powm1(p))
}

/// Pairing `<|x|^{p-2}x - |y|^{p-2}y, x - y>`, the left side of the
/// p-flux monotonicity inequality.
pub fn flux_pairing(x: &[f64], y: &[f64], p: PExponent) -> Result<f64> {
    check_dims(x, y)?;
    let p = p.get();
    let sx = flux_scale(norm(x), p);
    let sy = flux_scale(norm(y), p);
    Ok(x.iter()
        .zip(y)
        .map(|(a, b)| (sx * a - sy * b) * (a - b))
        .sum())
}

/// Expanded form of [`flux_pairing`]:
/// `|x|^p + |y|^p - <x,y>(|x|^{p-2} + |y|^{p-2})`. Algebraically equal to
/// the pairing; kept as an independent route for cross-checks.
pub fn flux_pairing_expanded(x: &[f64], y: &[f64], p: PExponent) -> Result<f64> {
    check_dims(x, y)?;
    let p = p.get();
    let nx = norm(x);
    let ny = norm(y);
    Ok(nx.powf(p) + ny.powf(p) - dot(x, y) * (flux_scale(nx, p) + flux_scale(ny, p)))
}

/// Gap of the p-flux monotonicity inequality:
/// `<|x|^{p-2}x - |y|^{p-2}y, x-y> - mhck_constant(p) |x-y|^p`.
pub fn mhck_gap(x: &[f64], y: &[f64], p: PExponent) -> Result<f64> {
    let pairing = flux_pairing(x, y, p)?;
    let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    Ok(pairing - mhck_constant(p) * norm(&diff).powf(p.get()))
}

/// Gap of the classical Mikljukov–Hwang–Collin–Krust inequality for the
/// mean-curvature operator `f(v) = v / sqrt(1+|v|^2)`:
/// `<f(x)-f(y), x-y> - (W(x)+W(y))/2 * |f(x)-f(y)|^2` with
/// `W(v) = sqrt(1+|v|^2)`.
///
/// The gap vanishes at `x = y`, and more generally on the cone
/// `|x| = |y|` (there `f(x)-f(y)` is parallel to `x-y` with the exact
/// ratio); off that cone it is strictly positive.
pub fn classical_mhck_gap(x: &[f64], y: &[f64]) -> Result<f64> {
    check_dims(x, y)?;
    let wx = (1.0 + dot(x, x)).sqrt();
    let wy = (1.0 + dot(y, y)).sqrt();
    let f: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(a, b)| a / wx - b / wy)
        .collect();
    let lhs: f64 = f.iter().zip(x.iter().zip(y)).map(|(d, (a, b))| d * (a - b)).sum();
    Ok(lhs - 0.5 * (wx + wy) * dot(&f, &f))
}

/// Aggregate statistics of a seeded sampling run over the three gaps.
///
/// Relative gaps are scaled by `max(1, |x|^p + |y|^p)` (or the analogous
/// magnitude for the classical kernel), so the reported minima are
/// directly comparable against floating-point tolerances.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapSuiteSummary {
    pub samples: usize,
    pub dims: Vec<usize>,
    pub exponents: Vec<f64>,
    pub seed: u64,
    /// Minimum of `lindqvist_gap / scale` over all samples.
    pub lindqvist_min_rel_gap: f64,
    /// Minimum of `mhck_gap / scale` over all samples.
    pub mhck_min_rel_gap: f64,
    /// Maximum of `|gap| / scale` over samples with `p = 2` (both kernels);
    /// at `p = 2` both inequalities are identities.
    pub p2_max_abs_rel_gap: f64,
    /// Minimum relative classical gap over samples away from the equality
    /// cone `|x| = |y|` with `|x-y| >= 1e-6`; strictly positive.
    pub classical_min_rel_gap_off_cone: f64,
    /// Maximum `|gap| / scale` over samples generated on the equality cone.
    pub classical_max_abs_rel_gap_on_cone: f64,
    /// Maximum relative residual of the identity
    /// `lindqvist_gap(x,y) + lindqvist_gap(y,x) = p * mhck_gap(x,y)`.
    pub symmetrization_max_rel_residual: f64,
    /// Maximum relative mismatch between [`flux_pairing`] and
    /// [`flux_pairing_expanded`].
    pub pairing_identity_max_rel_residual: f64,
}

/// Runs the seeded gap battery: isotropic Gaussian pairs plus adversarial
/// corner cases (collinear, antipodal, near-equal, zero vectors), spread
/// round-robin over the requested dimensions and exponents.
pub fn run_gap_suite(
    seed: u64,
    samples: usize,
    dims: &[usize],
    exponents: &[f64],
) -> Result<GapSuiteSummary> {
    if samples == 0 || dims.is_empty() || exponents.is_empty() {
        return Err(Error::InvalidExperiment(
            "gap suite needs samples, dims and exponents".into(),
        ));
    }
    let ps: Vec<PExponent> = exponents
        .iter()
        .map(|&p| PExponent::new(p))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut summary = GapSuiteSummary {
        samples,
        dims: dims.to_vec(),
        exponents: exponents.to_vec(),
        seed,
        lindqvist_min_rel_gap: f64::INFINITY,
        mhck_min_rel_gap: f64::INFINITY,
        p2_max_abs_rel_gap: 0.0,
        classical_min_rel_gap_off_cone: f64::INFINITY,
        classical_max_abs_rel_gap_on_cone: 0.0,
        symmetrization_max_rel_residual: 0.0,
        pairing_identity_max_rel_residual: 0.0,
    };

    for i in 0..samples {
        let d = dims[i % dims.len()];
        let p = ps[(i / dims.len()) % ps.len()];
        let (x, y, on_cone) = sample_pair(&mut rng, d, i);

        let pv = p.get();
        let scale = (norm(&x).powf(pv) + norm(&y).powf(pv)).max(1.0);

        let lg_xy = lindqvist_gap(&x, &y, p)?;
        let lg_yx = lindqvist_gap(&y, &x, p)?;
        let mg = mhck_gap(&x, &y, p)?;
        summary.lindqvist_min_rel_gap = summary.lindqvist_min_rel_gap.min(lg_xy / scale);
        summary.mhck_min_rel_gap = summary.mhck_min_rel_gap.min(mg / scale);
        if pv == 2.0 {
            let m = (lg_xy.abs() / scale).max(mg.abs() / scale);
            summary.p2_max_abs_rel_gap = summary.p2_max_abs_rel_gap.max(m);
        }

        let sym = (lg_xy + lg_yx - pv * mg).abs() / scale;
        summary.symmetrization_max_rel_residual = summary.symmetrization_max_rel_residual.max(sym);

        let pid = (flux_pairing(&x, &y, p)? - flux_pairing_expanded(&x, &y, p)?).abs() / scale;
        summary.pairing_identity_max_rel_residual =
            summary.pairing_identity_max_rel_residual.max(pid);

        let cg = classical_mhck_gap(&x, &y)?;
        let cscale = (norm(&x) + norm(&y)).powi(2).max(1.0);
        let diff_norm = norm(&x.iter().zip(&y).map(|(a, b)| a - b).collect::<Vec<_>>());
        let norm_split = (norm(&x) - norm(&y)).abs();
        if on_cone || norm_split <= 1e-9 * (1.0 + norm(&x) + norm(&y)) {
            summary.classical_max_abs_rel_gap_on_cone =
                summary.classical_max_abs_rel_gap_on_cone.max(cg.abs() / cscale);
        } else if diff_norm >= 1e-6 {
            summary.classical_min_rel_gap_off_cone =
                summary.classical_min_rel_gap_off_cone.min(cg / cscale);
        }
    }
    Ok(summary)
}

/// One sample pair. Returns `(x, y, on_equality_cone)`; the flag marks
/// pairs constructed with `|x| = |y|` exactly.
fn sample_pair(rng: &mut ChaCha8Rng, d: usize, i: usize) -> (Vec<f64>, Vec<f64>, bool) {
    let gauss = |rng: &mut ChaCha8Rng, d: usize| -> Vec<f64> {
        (0..d).map(|_| standard_normal(rng)).collect()
    };
    match i % 10 {
        // collinear: the tight regime
        0 => {
            let x = gauss(rng, d);
            let s = standard_normal(rng);
            let y = x.iter().map(|a| a * s).collect();
            (x, y, s.abs() == 1.0)
        }
        // antipodal: equality cone of the classical kernel
        1 => {
            let x = gauss(rng, d);
            let y = x.iter().map(|a| -a).collect();
            (x, y, true)
        }
        // near-equal
        2 => {
            let x = gauss(rng, d);
            let y = x
                .iter()
                .map(|a| a * (1.0 + 1e-8) + 1e-8 * standard_normal(rng))
                .collect();
            (x, y, false)
        }
        // zero vectors
        3 => (vec![0.0; d], gauss(rng, d), false),
        4 => (gauss(rng, d), vec![0.0; d], false),
        _ => (gauss(rng, d), gauss(rng, d), false),
    }
}

/// Box–Muller; two uniform draws per normal keeps the stream layout simple
/// and reproducible.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64) -> PExponent {
        PExponent::new(v).unwrap()
    }

    #[test]
    fn rejects_p_below_two() {
        assert!(PExponent::new(1.5).is_err());
        assert!(PExponent::new(f64::NAN).is_err());
        assert!(PExponent::new(2.0).is_ok());
    }

    #[test]
    fn rejects_dimension_mismatch() {
        assert!(lindqvist_gap(&[1.0], &[1.0, 2.0], p(2.0)).is_err());
        assert!(mhck_gap(&[1.0], &[1.0, 2.0], p(2.0)).is_err());
        assert!(classical_mhck_gap(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn lindqvist_examples() {
        // x = y: both sides coincide
        let g = lindqvist_gap(&[1.0, 2.0], &[1.0, 2.0], p(3.0)).unwrap();
        assert!(g.abs() <= 1e-12, "gap {g}");
        // p = 2 is the identity |x|^2 + |y|^2 - 2<x,y> = |x-y|^2
        let g = lindqvist_gap(&[1.0, 0.0], &[0.0, 1.0], p(2.0)).unwrap();
        assert!(g.abs() <= 1e-12, "gap {g}");
        // y = 0, p = 3: gap = 1 - 1/(2^2-1) = 2/3
        let g = lindqvist_gap(&[1.0, 0.0], &[0.0, 0.0], p(3.0)).unwrap();
        assert!((g - 2.0 / 3.0).abs() <= 1e-15, "gap {g}");
    }

    #[test]
    fn mhck_examples() {
        let g = mhck_gap(&[0.3, -0.7, 2.0], &[0.3, -0.7, 2.0], p(5.0)).unwrap();
        assert!(g.abs() <= 1e-12, "gap {g}");
        // <x, x> - (2/9)|x|^3 with |x| = 1: 1 - 2/9 = 7/9
        let g = mhck_gap(&[1.0, 0.0], &[0.0, 0.0], p(3.0)).unwrap();
        assert!((g - 7.0 / 9.0).abs() <= 1e-15, "gap {g}");
        // p = 2, antipodal: both sides equal |x-y|^2
        let g = mhck_gap(&[1.0, 0.0], &[-1.0, 0.0], p(2.0)).unwrap();
        assert!(g.abs() <= 1e-12, "gap {g}");
    }

    #[test]
    fn mhck_constant_values() {
        assert_eq!(mhck_constant(p(2.0)), 1.0);
        assert!((mhck_constant(p(3.0)) - 2.0 / 9.0).abs() <= 1e-16);
        assert!((mhck_constant(p(4.0)) - 1.0 / 14.0).abs() <= 1e-16);
    }

    #[test]
    fn classical_examples() {
        let g = classical_mhck_gap(&[3.0, 4.0], &[3.0, 4.0]).unwrap();
        assert!(g.abs() <= 1e-15, "gap {g}");
        // hand value: 1/sqrt(2) - (sqrt(2)+1)/4
        let expected = 0.5f64.sqrt() - (2f64.sqrt() + 1.0) / 4.0;
        let g = classical_mhck_gap(&[1.0, 0.0], &[0.0, 0.0]).unwrap();
        assert!((g - expected).abs() <= 1e-12, "gap {g}");
        // antipodal pairs sit on the equality cone |x| = |y|: the gap is 0,
        // not positive (f(x)-f(y) is exactly (x-y)/W there).
        let g = classical_mhck_gap(&[1.0, 0.0], &[-1.0, 0.0]).unwrap();
        assert!(g.abs() <= 1e-15, "gap {g}");
        // off the cone the gap is strictly positive
        let g = classical_mhck_gap(&[2.0, 0.0], &[-1.0, 0.0]).unwrap();
        assert!(g > 0.1, "gap {g}");
    }

    #[test]
    fn zero_handling_is_continuous_extension() {
        // |y|^{p-2}<x,y> term must vanish at y = 0 for every p >= 2
        for pv in [2.0, 2.5, 3.0, 10.0] {
            let g = lindqvist_gap(&[1.0, 1.0], &[0.0, 0.0], p(pv)).unwrap();
            assert!(g.is_finite());
        }
    }

    #[test]
    fn suite_smoke() {
        let s = run_gap_suite(7, 2_000, &[1, 2, 3], &[2.0, 3.0]).unwrap();
        assert!(s.lindqvist_min_rel_gap >= -1e-10);
        assert!(s.mhck_min_rel_gap >= -1e-10);
        assert!(s.p2_max_abs_rel_gap <= 1e-12);
        assert!(s.classical_min_rel_gap_off_cone > 0.0);
        assert!(s.classical_max_abs_rel_gap_on_cone <= 1e-12);
        assert!(s.symmetrization_max_rel_residual <= 1e-9);
        assert!(s.pairing_identity_max_rel_residual <= 1e-9);
    }
}
