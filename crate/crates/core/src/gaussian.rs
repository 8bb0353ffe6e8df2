//! Standard normal pdf, cdf and quantile, and the Gaussian isoperimetric
//! profile `I(x) = φ(Φ⁻¹(x))`.
//!
//! The cdf is self-contained:
//! * `|t| < 3`: Marsaglia's series `Φ(t) = 1/2 + φ(t) Σ_{k≥0} t^(2k+1) / (2k+1)!!`,
//!   whose terms are all of one sign, so the only cancellation is in the final
//!   `1/2 ± …` (absolute error a few ulps of 1/2);
//! * `|t| >= 3`: the Mills-ratio continued fraction
//!   `Φ(-x) = φ(x) / (x + 1/(x + 2/(x + 3/(x + …))))`, evaluated with the
//!   modified Lentz method, which keeps full relative accuracy in the tail.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};

pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Switch point between the series and the continued fraction.
const SERIES_LIMIT: f64 = 3.0;

/// Target accuracy of [`std_normal_quantile`], in probability.
pub const QUANTILE_TOL: f64 = 1e-12;

/// `e^(-t²/2) / √(2π)`.
pub fn std_normal_pdf(t: f64) -> f64 {
    let t = t.abs();
    // Split t = hi + lo with hi a multiple of 2^-10 so that hi² is exact and
    // the rounding of t² does not leak into the exponent.
    let hi = (t * 1024.0).trunc() / 1024.0;
    let lo = t - hi;
    (-0.5 * hi * hi).exp() * (-0.5 * lo * (2.0 * hi + lo)).exp() * FRAC_1_SQRT_2PI
}

/// `Φ(t)`; see the module docs for the evaluation scheme.
pub fn std_normal_cdf(t: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t.abs() < SERIES_LIMIT {
        0.5 + std_normal_pdf(t) * odd_double_factorial_series(t)
    } else if t < 0.0 {
        lower_tail(-t)
    } else {
        1.0 - lower_tail(t)
    }
}

/// `Σ_{k≥0} t^(2k+1) / (2k+1)!!`.
fn odd_double_factorial_series(t: f64) -> f64 {
    let t2 = t * t;
    let mut term = t;
    let mut sum = t;
    let mut k = 1.0;
    loop {
        term *= t2 / (2.0 * k + 1.0);
        let next = sum + term;
        if next == sum {
            return sum;
        }
        sum = next;
        k += 1.0;
    }
}

/// `Φ(-x)` for `x >= 3`.
fn lower_tail(x: f64) -> f64 {
    if x > 40.0 {
        return 0.0;
    }
    const TINY: f64 = 1e-300;
    // b_0 = x, a_k = k, b_k = x.
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..500 {
        let a = k as f64;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    std_normal_pdf(x) / f
}

/// `Φ⁻¹(p)`: bisection to a narrow bracket, then safeguarded Newton steps
/// until `|Φ(t) - p|` is at rounding level.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("quantile needs p in (0, 1), got {p}")));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    if p > 0.5 {
        // 1 - p is exact for p in [1/2, 1).
        return Ok(-lower_quantile(1.0 - p));
    }
    Ok(lower_quantile(p))
}

/// Quantile for `p < 1/2`, so the root is negative.
fn lower_quantile(p: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0f64, 0.0f64);
    for _ in 0..14 {
        let mid = 0.5 * (lo + hi);
        if std_normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..60 {
        let err = std_normal_cdf(t) - p;
        if err < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let pdf = std_normal_pdf(t);
        let mut next = t - err / pdf;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 4.0 * f64::EPSILON * t.abs().max(1.0) {
            return next;
        }
        t = next;
    }
    t
}

/// `I(x) = φ(Φ⁻¹(x))`, with `I(0) = I(1) = 0`; `NaN` outside `[0, 1]`.
pub fn iso_profile(x: f64) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        return f64::NAN;
    }
    // Evaluate at min(x, 1-x) so that the symmetry I(x) = I(1-x) is exact.
    let s = x.min(1.0 - x);
    if s == 0.0 {
        return 0.0;
    }
    std_normal_pdf(std_normal_quantile(s).expect("s in (0, 1/2]"))
}

/// `I` sampled on `D_n`.
#[derive(Clone, Debug, Serialize)]
pub struct ProfileSample {
    pub level: u32,
    pub values: Vec<f64>,
    pub quantile_tol: f64,
}

impl ProfileSample {
    pub fn new(level: u32) -> Result<Self> {
        if level > 24 {
            return Err(invalid(format!("profile level must be <= 24, got {level}")));
        }
        let scale = (level as f64).exp2();
        let values = (0..=1u64 << level).into_par_iter().map(|k| iso_profile(k as f64 / scale)).collect();
        Ok(Self { level, values, quantile_tol: QUANTILE_TOL })
    }
}

/// Min and max of `I(x) / (x* √(ln(1/x*)))` over `D_n ∩ (0, 1)`.
#[derive(Clone, Debug, Serialize)]
pub struct EquivScan {
    pub n: u32,
    pub min_ratio: f64,
    pub min_at: f64,
    pub max_ratio: f64,
    pub max_at: f64,
}

/// `x* √(ln(1/x*))`; positive on `(0, 1)`.
pub fn profile_comparator(x: f64) -> f64 {
    let s = x.min(1.0 - x);
    if s <= 0.0 {
        0.0
    } else {
        s * (-s.ln()).sqrt()
    }
}

pub fn profile_equiv_scan(n: u32) -> Result<EquivScan> {
    if !(3..=24).contains(&n) {
        return Err(invalid(format!("equivalence scan needs level in 3..=24, got {n}")));
    }
    let scale = (n as f64).exp2();
    let ratios: Vec<(f64, f64)> = (1..1u64 << n)
        .into_par_iter()
        .map(|k| {
            let x = k as f64 / scale;
            (x, iso_profile(x) / profile_comparator(x))
        })
        .collect();
    let (min_at, min_ratio) = ratios.iter().copied().fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    let (max_at, max_ratio) = ratios.iter().copied().fold((0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    Ok(EquivScan { n, min_ratio, min_at, max_ratio, max_at })
}

/// `min I(x) / (x(1-x))` over `D_n ∩ (0, 1)`.
pub fn quadratic_bound_constant(n: u32) -> f64 {
    let scale = (n as f64).exp2();
    (1..1u64 << n)
        .map(|k| {
            let x = k as f64 / scale;
            iso_profile(x) / (x * (1.0 - x))
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite 10-point Gauss–Legendre quadrature of the pdf on [0, t].
    fn cdf_by_quadrature(t: f64) -> f64 {
        const NODES: [f64; 5] = [
            0.148_874_338_981_631_2,
            0.433_395_394_129_247_2,
            0.679_409_568_299_024_4,
            0.865_063_366_688_984_5,
            0.973_906_528_517_171_7,
        ];
        const WEIGHTS: [f64; 5] = [
            0.295_524_224_714_752_9,
            0.269_266_719_309_996_4,
            0.219_086_362_515_982,
            0.149_451_349_150_580_6,
            0.066_671_344_308_688_1,
        ];
        let panels = 2000;
        let h = t / panels as f64;
        let mut total = 0.0;
        for i in 0..panels {
            let mid = (i as f64 + 0.5) * h;
            let mut s = 0.0;
            for (x, w) in NODES.iter().zip(WEIGHTS) {
                let g = |u: f64| (-0.5 * u * u).exp() * FRAC_1_SQRT_2PI;
                s += w * (g(mid + 0.5 * h * x) + g(mid - 0.5 * h * x));
            }
            total += 0.5 * h * s;
        }
        0.5 + total
    }

    #[test]
    fn pdf_values() {
        assert!((std_normal_pdf(0.0) - 0.398_942_280_4).abs() < 1e-10);
        assert_eq!(std_normal_pdf(1.3), std_normal_pdf(-1.3));
        let v = std_normal_pdf(10.0);
        assert!((v / 7.694_598_626_706_42e-23 - 1.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn cdf_matches_quadrature() {
        for &t in &[0.1, 0.5, 1.0, 1.96, 2.5, 2.99, 3.0, 3.5, 5.0, 7.0] {
            let q = cdf_by_quadrature(t);
            assert!((std_normal_cdf(t) - q).abs() < 1e-14, "t = {t}: {} vs {q}", std_normal_cdf(t));
            assert!((std_normal_cdf(-t) - (1.0 - q)).abs() < 1e-14);
        }
        assert_eq!(std_normal_cdf(0.0), 0.5);
        assert!((std_normal_cdf(1.96) - 0.975_002_1).abs() < 1e-7);
    }

    #[test]
    fn tail_is_relatively_accurate() {
        // Φ(-5) and Φ(-8) to 12 significant digits.
        assert!((std_normal_cdf(-5.0) / 2.866_515_718_791_939e-7 - 1.0).abs() < 1e-12);
        assert!((std_normal_cdf(-8.0) / 6.220_960_574_271_784e-16 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quantile_roundtrip() {
        assert_eq!(std_normal_quantile(0.5).unwrap(), 0.0);
        assert!((std_normal_quantile(0.975_002_1).unwrap() - 1.96).abs() < 1e-6);
        for i in 1..2000 {
            let p = i as f64 / 2000.0;
            let t = std_normal_quantile(p).unwrap();
            assert!((std_normal_cdf(t) - p).abs() <= 1e-12, "p = {p}");
        }
        assert!((std_normal_cdf(std_normal_quantile(1e-300).unwrap()) / 1e-300 - 1.0).abs() < 1e-10);
        assert!(std_normal_quantile(0.0).is_err());
        assert!(std_normal_quantile(1.0).is_err());
        assert!(std_normal_quantile(f64::NAN).is_err());
    }

    #[test]
    fn profile_values() {
        assert!((iso_profile(0.5) - 0.398_942_280_4).abs() < 1e-10);
        assert_eq!(iso_profile(0.0), 0.0);
        assert_eq!(iso_profile(1.0), 0.0);
        assert!((iso_profile(0.25) - 0.317_776_5).abs() < 1e-6);
        assert_eq!(iso_profile(0.3), iso_profile(0.7));
        assert!(iso_profile(1.5).is_nan());
        let s = ProfileSample::new(4).unwrap();
        assert_eq!(s.values.len(), 17);
        assert_eq!(s.values[0], 0.0);
        assert_eq!(s.values[3], s.values[13]);
    }

    #[test]
    fn equivalence_scan() {
        let scan = profile_equiv_scan(10).unwrap();
        assert!(scan.min_ratio > 0.0 && scan.max_ratio.is_finite());
        let x = 2f64.powi(-10);
        let r = iso_profile(x) / profile_comparator(x);
        assert!(r > 0.5 && r < 2.5);
        assert_eq!(r, iso_profile(1.0 - x) / profile_comparator(1.0 - x));
        assert!(profile_equiv_scan(2).is_err());
        assert!(quadratic_bound_constant(10) > 1.0);
    }
}
