//! Point models for open configuration spaces: half-plane with marked
//! boundary points, the first quadrant with points on its two axes, and the
//! half-strip. Includes the square-root diffeomorphism between the first two
//! models, the σ/τ involutions, gauge sections and ε-families approaching
//! boundary strata.
//!
//! Compactified strata are never stored as data; all limit tests work with
//! explicit ε-families produced here.

use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Branch convention used throughout: arg values in (−π/2, 3π/2), i.e. the
/// cut sits on the negative imaginary axis together with the origin.
pub fn arg_branch(z: C64) -> f64 {
    let a = z.arg(); // (−π, π]
    if a < -std::f64::consts::FRAC_PI_2 {
        a + 2.0 * std::f64::consts::PI
    } else {
        a
    }
}

/// √z with the (−π/2, 3π/2) branch: maps ℍ⁺ ∪ ℝ∖{0} into the closed first
/// quadrant; negative reals go to the positive imaginary axis.
pub fn sqrt_branch(z: C64) -> C64 {
    let r = z.norm().sqrt();
    let a = arg_branch(z) / 2.0;
    C64::new(r * a.cos(), r * a.sin())
}

/// Configuration of points in the open upper half-plane plus ordered marked
/// points on the real axis.
#[derive(Debug, Clone)]
pub struct UHPConfig {
    pub aerial: Vec<C64>,
    pub boundary: Vec<f64>,
}

impl UHPConfig {
    pub fn new(aerial: Vec<C64>, boundary: Vec<f64>) -> Result<Self> {
        for z in &aerial {
            if z.im <= 0.0 {
                return Err(Error::input("aerial point not in the open half-plane"));
            }
        }
        for w in boundary.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::input("boundary points must strictly increase"));
            }
        }
        let cfg = UHPConfig { aerial, boundary };
        cfg.check_distinct()?;
        Ok(cfg)
    }

    fn check_distinct(&self) -> Result<()> {
        for (i, a) in self.aerial.iter().enumerate() {
            for b in self.aerial.iter().skip(i + 1) {
                if (a - b).norm() == 0.0 {
                    return Err(Error::input("coincident aerial points"));
                }
            }
        }
        Ok(())
    }
}

/// Configuration in the open first quadrant with points on the two axes.
/// The imaginary-axis list is stored in the configuration order, which is
/// decreasing in the coordinate (ix ≤ iy iff y ≤ x).
#[derive(Debug, Clone)]
pub struct QuadrantConfig {
    pub aerial: Vec<C64>,
    pub imag_axis: Vec<f64>,
    pub real_axis: Vec<f64>,
}

impl QuadrantConfig {
    pub fn new(aerial: Vec<C64>, imag_axis: Vec<f64>, real_axis: Vec<f64>) -> Result<Self> {
        for z in &aerial {
            if z.re <= 0.0 || z.im <= 0.0 {
                return Err(Error::input("aerial point not inside the quadrant"));
            }
        }
        for w in imag_axis.windows(2) {
            if w[0] <= w[1] {
                return Err(Error::input("imaginary-axis coordinates must decrease"));
            }
        }
        if imag_axis.iter().any(|&x| x <= 0.0) {
            return Err(Error::input("imaginary-axis coordinates must be positive"));
        }
        for w in real_axis.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::input("real-axis coordinates must increase"));
            }
        }
        if real_axis.iter().any(|&x| x <= 0.0) {
            return Err(Error::input("real-axis coordinates must be positive"));
        }
        Ok(QuadrantConfig {
            aerial,
            imag_axis,
            real_axis,
        })
    }
}

/// Points in the open half-strip ⊏ = {x > 0, −π/2 < y < π/2}.
#[derive(Debug, Clone)]
pub struct StripConfig {
    pub points: Vec<C64>,
}

impl StripConfig {
    pub fn new(points: Vec<C64>) -> Result<Self> {
        for z in &points {
            if z.re <= 0.0 || z.im.abs() >= std::f64::consts::FRAC_PI_2 {
                return Err(Error::input("point not inside the half-strip"));
            }
        }
        for (i, a) in points.iter().enumerate() {
            for b in points.iter().skip(i + 1) {
                if (a - b).norm() == 0.0 {
                    return Err(Error::input("coincident strip points"));
                }
            }
        }
        Ok(StripConfig { points })
    }
}

/// z ↦ √(z − x_pivot): half-plane model with marked pivot to quadrant model.
/// Boundary points left of the pivot land on the imaginary axis, points to
/// the right on the real axis; the pivot becomes the origin.
pub fn square_map(cfg: &UHPConfig, pivot: usize) -> Result<QuadrantConfig> {
    if pivot >= cfg.boundary.len() {
        return Err(Error::input("pivot index out of range"));
    }
    let xp = cfg.boundary[pivot];
    let aerial: Vec<C64> = cfg
        .aerial
        .iter()
        .map(|&z| sqrt_branch(z - xp))
        .collect();
    let imag_axis: Vec<f64> = cfg.boundary[..pivot]
        .iter()
        .map(|&x| (xp - x).sqrt())
        .collect();
    let real_axis: Vec<f64> = cfg.boundary[pivot + 1..]
        .iter()
        .map(|&x| (x - xp).sqrt())
        .collect();
    QuadrantConfig::new(aerial, imag_axis, real_axis)
}

/// Inverse of [`square_map`]: w ↦ w² + x_pivot, restoring the pivot value.
pub fn inverse_square_map(cfg: &QuadrantConfig, pivot_value: f64) -> Result<UHPConfig> {
    let aerial: Vec<C64> = cfg.aerial.iter().map(|&w| w * w + pivot_value).collect();
    let mut boundary: Vec<f64> = cfg
        .imag_axis
        .iter()
        .map(|&t| pivot_value - t * t)
        .collect();
    boundary.push(pivot_value);
    boundary.extend(cfg.real_axis.iter().map(|&t| pivot_value + t * t));
    UHPConfig::new(aerial, boundary)
}

/// σ on the half-plane model: z ↦ −z̄ (x ↦ −x on the axis).
pub fn involution_sigma_uhp(cfg: &UHPConfig) -> Result<UHPConfig> {
    let aerial = cfg.aerial.iter().map(|z| C64::new(-z.re, z.im)).collect();
    let mut boundary: Vec<f64> = cfg.boundary.iter().map(|x| -x).collect();
    boundary.reverse();
    UHPConfig::new(aerial, boundary)
}

/// τ on the half-plane model: z ↦ 1/z̄; requires no point at the origin.
pub fn involution_tau_uhp(cfg: &UHPConfig) -> Result<UHPConfig> {
    if cfg.boundary.contains(&0.0) {
        return Err(Error::input("tau is singular at the origin"));
    }
    let aerial = cfg.aerial.iter().map(|z| 1.0 / z.conj()).collect();
    let mut boundary: Vec<f64> = cfg.boundary.iter().map(|x| 1.0 / x).collect();
    boundary.sort_by(|a, b| a.partial_cmp(b).unwrap());
    UHPConfig::new(aerial, boundary)
}

/// σ on the quadrant model: z ↦ i z̄, i.e. (x, y) ↦ (y, x); swaps the axes.
pub fn involution_sigma_quadrant(cfg: &QuadrantConfig) -> Result<QuadrantConfig> {
    let aerial = cfg.aerial.iter().map(|z| C64::new(z.im, z.re)).collect();
    // axis points swap roles; both orders reverse to stay monotone
    let mut imag_axis = cfg.real_axis.clone();
    imag_axis.reverse();
    let mut real_axis = cfg.imag_axis.clone();
    real_axis.reverse();
    QuadrantConfig::new(aerial, imag_axis, real_axis)
}

/// τ on the quadrant model: z ↦ 1/z̄ = z/|z|²; fixes the unit circle.
pub fn involution_tau_quadrant(cfg: &QuadrantConfig) -> Result<QuadrantConfig> {
    let aerial = cfg.aerial.iter().map(|z| 1.0 / z.conj()).collect();
    let mut imag_axis: Vec<f64> = cfg.imag_axis.iter().map(|t| 1.0 / t).collect();
    imag_axis.reverse();
    let mut real_axis: Vec<f64> = cfg.real_axis.iter().map(|t| 1.0 / t).collect();
    real_axis.reverse();
    QuadrantConfig::new(aerial, imag_axis, real_axis)
}

/// Gauge section of the half-plane model under rescaling + real translation.
/// Returns the normalized configuration and the measure factor of the applied
/// map (λ² per aerial point, λ per boundary point, for scaling by λ).
pub fn gauge_fix_uhp(cfg: &UHPConfig) -> Result<(UHPConfig, f64)> {
    let n = cfg.aerial.len();
    let m = cfg.boundary.len();
    if 2 * n + m < 2 {
        return Err(Error::input("not enough points to fix the gauge group"));
    }
    let (shift, scale) = if m >= 2 {
        (cfg.boundary[0], cfg.boundary[1] - cfg.boundary[0])
    } else if m == 1 {
        (cfg.boundary[0], (cfg.aerial[0] - cfg.boundary[0]).norm())
    } else {
        (cfg.aerial[0].re, cfg.aerial[0].im)
    };
    if scale <= 0.0 {
        return Err(Error::input("degenerate configuration"));
    }
    let lambda = 1.0 / scale;
    let aerial = cfg.aerial.iter().map(|z| (z - shift) * lambda).collect();
    let boundary = cfg.boundary.iter().map(|x| (x - shift) * lambda).collect();
    let factor = lambda.powi(2 * n as i32 + m as i32);
    Ok((UHPConfig::new(aerial, boundary)?, factor))
}

/// Gauge section of the quadrant model under rescaling: the point of largest
/// norm is moved to norm 1. Measure factor as in [`gauge_fix_uhp`].
pub fn gauge_fix_quadrant(cfg: &QuadrantConfig) -> Result<(QuadrantConfig, f64)> {
    let n = cfg.aerial.len();
    let (k, l) = (cfg.imag_axis.len(), cfg.real_axis.len());
    if 2 * n + k + l < 1 {
        return Err(Error::input("not enough points to fix the scaling"));
    }
    let max_norm = cfg
        .aerial
        .iter()
        .map(|z| z.norm())
        .chain(cfg.imag_axis.iter().copied())
        .chain(cfg.real_axis.iter().copied())
        .fold(0.0, f64::max);
    if max_norm <= 0.0 {
        return Err(Error::input("degenerate configuration"));
    }
    let lambda = 1.0 / max_norm;
    let aerial = cfg.aerial.iter().map(|z| z * lambda).collect();
    let imag_axis = cfg.imag_axis.iter().map(|t| t * lambda).collect();
    let real_axis = cfg.real_axis.iter().map(|t| t * lambda).collect();
    let factor = lambda.powi(2 * n as i32 + k as i32 + l as i32);
    Ok((QuadrantConfig::new(aerial, imag_axis, real_axis)?, factor))
}

/// Codimension-1 stratum descriptors for ε-family limit tests.
#[derive(Debug, Clone)]
pub enum Stratum {
    /// Second point spirals onto the first: (base, base + ε e^{iφ}).
    AerialPairCollapse { base: C64, phi: f64 },
    /// Aerial point approaching the real axis at x: z = x + iε.
    AerialToRealAxis { x: f64 },
    /// Aerial point approaching the imaginary axis at height y: z = ε + iy.
    AerialToImagAxis { y: f64 },
    /// Aerial point approaching the origin along angle t: z = ε e^{it}.
    AerialToOrigin { angle: f64 },
    /// Whole point cloud scaled towards the origin by ε.
    AllToOrigin { points: Vec<C64> },
}

/// Produce the configuration family member at parameter ε > 0.
pub fn boundary_approach(stratum: &Stratum, eps: f64) -> Result<Vec<C64>> {
    if eps <= 0.0 {
        return Err(Error::input("epsilon must be strictly positive"));
    }
    Ok(match stratum {
        Stratum::AerialPairCollapse { base, phi } => {
            vec![*base, base + C64::from_polar(eps, *phi)]
        }
        Stratum::AerialToRealAxis { x } => vec![C64::new(*x, eps)],
        Stratum::AerialToImagAxis { y } => vec![C64::new(eps, *y)],
        Stratum::AerialToOrigin { angle } => vec![C64::from_polar(eps, *angle)],
        Stratum::AllToOrigin { points } => points.iter().map(|z| z * eps).collect(),
    })
}
