//! The named verification campaign: one function per acceptance check, with
//! a single tolerance table. Both the acceptance suite and the command-line
//! front end drive these.

use num_complex::Complex64 as C64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::liealg::{LieAlgebra, SymmetricPair};
use crate::propagators::{self, Color, Involution};
use crate::ratlin::{rat, Rat, RatMat};
use crate::uea::{self, PolyElement};
use crate::weights::{self, OmegaKind, WheelFamily};
use crate::{Error, Result};

/// Every tolerance and threshold used by the campaign, pinned in one place.
#[derive(Debug, Clone)]
pub struct Tolerances {
    /// Loop weight: |est − ¼| < `gate_sigma`·σ and σ < this cap at 10⁶ samples.
    pub loop_weight_sigma_cap: f64,
    /// Middle-point vanishing: σ cap at 10⁵ samples.
    pub omega_sigma_cap: f64,
    /// Statistical acceptance gate in units of σ.
    pub gate_sigma: f64,
    /// Pointwise identities (pullback, symmetry relations).
    pub pointwise: f64,
    /// Linear ε-ratio window around 10 for the boundary tables.
    pub ratio_window: (f64, f64),
    /// Matrix-oracle tolerance for the BCH suite.
    pub bch_oracle: f64,
    /// Extrapolated ε → 0 limits of the regular terms.
    pub regular_limit: f64,
    /// Closed form vs finite differences.
    pub finite_difference: f64,
    /// Symbol-identity budget in units of the combined σ.
    pub symbol_budget_sigma: f64,
    /// Wheel-weight σ cap at 10⁶ samples.
    pub wheel_sigma_cap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            loop_weight_sigma_cap: 5e-3,
            omega_sigma_cap: 1e-2,
            gate_sigma: 3.0,
            pointwise: 1e-10,
            ratio_window: (5.0, 20.0),
            bch_oracle: 1e-8,
            regular_limit: 1e-6,
            finite_difference: 1e-6,
            symbol_budget_sigma: 5.0,
            wheel_sigma_cap: 5e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckOutcome {
    pub name: String,
    pub status: CheckStatus,
    pub value: Option<f64>,
    pub std_error: Option<f64>,
    pub tolerance: Option<f64>,
    pub seed: u64,
    pub runtime_ms: u128,
    pub details: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Campaign configuration (budgets scale the per-check defaults).
#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub samples: u64,
    pub seed: u64,
    pub order: u32,
    pub tolerances: Tolerances,
    /// Optional file-backed weight cache.
    pub cache_path: Option<std::path::PathBuf>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            samples: 1_000_000,
            seed: 2026,
            order: 6,
            tolerances: Tolerances::default(),
            cache_path: None,
        }
    }
}

/// Run a weight computation through the campaign's cache, if configured.
fn cached_weight<F>(cfg: &CampaignConfig, name: &str, f: F) -> Result<weights::WeightEstimate>
where
    F: FnOnce() -> Result<weights::WeightEstimate>,
{
    let key = weights::WeightCache::standard_key(name, cfg.samples, cfg.seed);
    match &cfg.cache_path {
        None => f(),
        Some(path) => {
            let mut cache = weights::WeightCache::load(path)?;
            let est = cache.get_or_compute(key, f)?;
            cache.save(path)?;
            Ok(est)
        }
    }
}

pub const CHECK_NAMES: [&str; 12] = [
    "loopWeight14",
    "vanishingOmega",
    "squareMapPullback",
    "symmetryRelations",
    "boundaryTables",
    "rouviereCommutativity",
    "dufloMultiplicativity",
    "bchSuite",
    "reductionSpaces",
    "aerialOneWheel",
    "symbolIdentity",
    "eightColorGeometry",
];

/// Dispatch a named check.
pub fn run_check(name: &str, cfg: &CampaignConfig) -> Result<CheckOutcome> {
    let start = std::time::Instant::now();
    let mut outcome = match name {
        "loopWeight14" => check_loop_weight(cfg),
        "vanishingOmega" => check_vanishing_omega(cfg),
        "squareMapPullback" => check_square_map_pullback(cfg),
        "symmetryRelations" => check_symmetry_relations(cfg),
        "boundaryTables" => check_boundary_tables(cfg),
        "rouviereCommutativity" => check_rouviere_commutativity(cfg),
        "dufloMultiplicativity" => check_duflo_multiplicativity(cfg),
        "bchSuite" => check_bch_suite(cfg),
        "reductionSpaces" => check_reduction_spaces(cfg),
        "aerialOneWheel" => check_aerial_one_wheel(cfg),
        "symbolIdentity" => check_symbol_identity(cfg),
        "eightColorGeometry" => check_eight_color_geometry(cfg),
        other => Err(Error::input(format!("unknown check {other:?}"))),
    }?;
    outcome.name = name.to_string();
    outcome.runtime_ms = start.elapsed().as_millis();
    Ok(outcome)
}

fn outcome(
    status: CheckStatus,
    value: Option<f64>,
    std_error: Option<f64>,
    tolerance: Option<f64>,
    seed: u64,
    details: Vec<String>,
) -> CheckOutcome {
    CheckOutcome {
        name: String::new(),
        status,
        value,
        std_error,
        tolerance,
        seed,
        runtime_ms: 0,
        details,
    }
}

/// The sl(2) Cartan pair every pinned check runs on.
pub fn sl2_pair() -> SymmetricPair {
    let alg = LieAlgebra::sl2();
    let sigma = RatMat::from_rows(vec![
        vec![rat(0), rat(0), rat(-1)],
        vec![rat(0), rat(-1), rat(0)],
        vec![rat(-1), rat(0), rat(0)],
    ]);
    SymmetricPair::new(alg, sigma).expect("sl2 Cartan pair")
}

fn check_loop_weight(cfg: &CampaignConfig) -> Result<CheckOutcome> {
    let est = cached_weight(cfg, "loopWeight", || {
        weights::loop_weight(cfg.samples, cfg.seed)
    })?;
    let t = &cfg.tolerances;
    let pass = (est.value - 0.25).abs() < t.gate_sigma * est.std_error
        && est.std_error < t.loop_weight_sigma_cap;
    Ok(outcome(
        if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        Some(est.value),
        Some(est.std_error),
        Some(t.gate_sigma * est.std_error),
        cfg.seed,
        vec![format!(
            "loop weight = {:.6} ± {:.6} (target 0.25, {} rejections)",
            est.value, est.std_error, est.rejections
        )],
    ))
}

fn check_vanishing_omega(cfg: &CampaignConfig) -> Result<CheckOutcome> {
    let samples = (cfg.samples / 10).max(10_000);
    let t = &cfg.tolerances;
    let two_pts = [
        (C64::new(0.0, 1.0), C64::new(0.0, 2.0)),
        (C64::new(-0.5, 0.8), C64::new(0.7, 1.4)),
        (C64::new(0.3, 0.5), C64::new(-0.2, 2.2)),
    ];
    let quad_pts = [
        (C64::new(1.0, 1.0), C64::new(2.0, 2.0)),
        (
            C64::from_polar(1.0, std::f64::consts::FRAC_PI_6),
            C64::from_polar(1.0, std::f64::consts::FRAC_PI_3),
        ),
        (C64::new(0.4, 1.3), C64::new(1.8, 0.6)),
    ];
    let mut details = Vec::new();
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut idx = 0u64;
    let kinds: Vec<(String, OmegaKind)> = [true, false]
        .iter()
        .map(|&p| {
            (
                format!("omega{}", if p { "+" } else { "-" }),
                OmegaKind::TwoColor { plus: p },
            )
        })
        .chain(Color::ALL.iter().map(|&c| {
            (
                format!("omega^{}", c.label()),
                OmegaKind::FourColor(c),
            )
        }))
        .collect();
    for (label, kind) in kinds {
        let pts: &[(C64, C64)] = match kind {
            OmegaKind::TwoColor { .. } => &two_pts,
            OmegaKind::FourColor(_) => &quad_pts,
        };
        for (z1, z3) in pts {
            let est = weights::vanishing_omega(kind, *z1, *z3, samples, cfg.seed + idx)?;
            idx += 1;
            let ok =
                est.value.abs() < t.gate_sigma * est.std_error && est.std_error < t.omega_sigma_cap;
            if !ok {
                pass = false;
                details.push(format!(
                    "{label} at ({z1}, {z3}): {:.5} ± {:.5} NOT consistent with 0",
                    est.value, est.std_error
                ));
            }
            worst = worst.max(est.value.abs() / est.std_error.max(1e-300));
        }
    }
    details.push(format!("worst |Ω|/σ over 18 runs: {worst:.2}"));
    Ok(outcome(
        if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        Some(worst),
        None,
        Some(t.gate_sigma),
        cfg.seed,
        details,
    ))
}

fn check_square_map_pullback(cfg: &CampaignConfig) -> Result<CheckOutcome> {
    let mut rng = crate::numeric::Rng::seeded(cfg.seed ^ 0x515);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 1000 {
        let x = rng.range(-1.0, 1.0);
        let z1 = C64::new(rng.range(-1.5, 1.5) + x, rng.range(0.1, 2.0));
        let z2 = C64::new(rng.range(-1.5, 1.5) + x, rng.range(0.1, 2.0));
        if (z1 - z2).norm() < 1e-3 {
            continue;
        }
        done += 1;
        for color in Color::ALL {
            let direct = propagators::four_color_half_plane(color, z1, z2, x)?;
            let pulled = propagators::four_color_half_plane_pullback(color, z1, z2, x)?;
            worst = worst.max(direct.max_abs_diff(&pulled));
        }
    }
    let t = cfg.tolerances.pointwise;
    Ok(outcome(
        if worst < t { CheckStatus::Pass } else { CheckStatus::Fail },
        Some(worst),
        None,
        Some(t),
        cfg.seed,
        vec![format!(
            "max component difference over 10³ configurations × 4 colors: {worst:.3e}"
        )],
    ))
}

fn check_symmetry_relations(cfg: &CampaignConfig) -> Result<CheckOutcome> {
    let mut rng = crate::numeric::Rng::seeded(cfg.seed ^ 0x5e7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let w1 = C64::new(rng.range(0.2, 2.0), rng.range(0.2, 2.0));
        let w2 = C64::new(rng.range(0.2, 2.0), rng.range(0.2, 2.0));
        for color in Color::ALL {
            for inv in [Involution::Sigma, Involution::Tau] {
                worst =
                    worst.max(propagators::symmetry_residual_quadrant(color, inv, w1, w2)?);
            }
        }
    }
    let t = cfg.tolerances.pointwise;
    Ok(outcome(
        if worst < t { CheckStatus::Pass } else { CheckStatus::Fail },
        Some(worst),
        None,
        Some(t),
        cfg.seed,
        vec![format!(
            "max residual of the 8 involution relations at 100 random pairs: {worst:.3e}"
        )],
    ))
}

/// Transform covector components under a per-point complex substitution
/// w = μ·ξ + const: returns components w.r.t. ξ.
fn transform_components(form: &[f64], factors: &[C64]) -> Vec<f64> {
    let mut out = vec![0.0; form.len()];
    for (p, mu) in factors.iter().enumerate() {
        let c = C64::new(form[2 * p], form[2 * p + 1]);
        let cp = c * mu.conj();
        out[2 * p] = cp.re;
        out[2 * p + 1] = cp.im;
    }
    out
}

fn check_boundary_tables(cfg: &CampaignConfig) -> Result<CheckOutcome> {
    let t = &cfg.tolerances;
    let epss = [1e-2, 1e-3, 1e-4];
    let mut details = Vec::new();
    let mut pass = true;
    let mut worst_final: f64 = 0.0;

    // residual of a stratum family at ε for one color
    type Fam = Box<dyn Fn(Color, f64) -> Result<f64>>;
    let z_far = C64::new(0.9, 0.6);

    let families: Vec<(String, Fam)> = vec![
        // α: collapse z₂ → z₁; expected dφ ± dη with sign per color
        (
            "alpha".into(),
            Box::new(move |color: Color, eps: f64| {
                let z = C64::new(0.8, 0.9);
                let z2 = z + C64::from_polar(eps, 0.7);
                let f = propagators::four_color_quadrant(color, z, z2)?;
                let total = [f.0[0] + f.0[2], f.0[1] + f.0[3]];
                let (_, de) = propagators::eta_quadrant(z)?;
                let s = match color {
                    Color::PP | Color::MM => 1.0,
                    _ => -1.0,
                };
                Ok(((total[0] - s * de.0[0]).powi(2) + (total[1] - s * de.0[1]).powi(2)).sqrt())
            }),
        ),
        // β: both points collapse onto the imaginary axis; expected ω^{ε₁}
        (
            "beta".into(),
            Box::new(move |color: Color, eps: f64| {
                let s = 1.1;
                let xi1 = C64::new(0.9, 0.3);
                let xi2 = C64::new(0.5, -0.4);
                let w1 = C64::new(0.0, s) + eps * xi1;
                let w2 = C64::new(0.0, s) + eps * xi2;
                let f = propagators::four_color_quadrant(color, w1, w2)?;
                // components w.r.t. ξ at scale ε
                let got = transform_components(&f.0, &[C64::new(eps, 0.0), C64::new(eps, 0.0)]);
                // expected: two-colored form at u = −iξ (first color survives)
                let mi = C64::new(0.0, -1.0);
                let plus = matches!(color, Color::PP | Color::PM);
                let exp_u = propagators::kontsevich(mi * xi1, mi * xi2, plus)?;
                let expect = transform_components(&exp_u.0, &[mi, mi]);
                let d: f64 = got
                    .iter()
                    .zip(&expect)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                Ok(d)
            }),
        ),
        // γ: both points collapse onto the real axis; expected ω^{ε₂}
        (
            "gamma".into(),
            Box::new(move |color: Color, eps: f64| {
                let s = 1.3;
                let xi1 = C64::new(0.2, 0.8);
                let xi2 = C64::new(-0.3, 0.5);
                let w1 = C64::new(s, 0.0) + eps * xi1;
                let w2 = C64::new(s, 0.0) + eps * xi2;
                let f = propagators::four_color_quadrant(color, w1, w2)?;
                let got = transform_components(&f.0, &[C64::new(eps, 0.0), C64::new(eps, 0.0)]);
                let plus = matches!(color, Color::PP | Color::MP);
                let exp_u = propagators::kontsevich(xi1, xi2, plus)?;
                let expect = transform_components(&exp_u.0, &[C64::new(1.0, 0.0); 2]);
                let d: f64 = got
                    .iter()
                    .zip(&expect)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                Ok(d)
            }),
        ),
    ];

    // vanishing strata: (name, does the first point collapse, colors that die)
    let vanishing: Vec<(&str, bool, Vec<Color>)> = vec![
        ("delta (z1→origin)", true, vec![Color::PP, Color::PM, Color::MP]),
        ("epsilon (z2→origin)", false, vec![Color::PM, Color::MP, Color::MM]),
        ("eta (z2→ℝ⁺)", false, vec![Color::PM, Color::MM]),
        ("theta (z1→ℝ⁺)", true, vec![Color::PP, Color::MP]),
        ("zeta (z2→iℝ⁺)", false, vec![Color::MP, Color::MM]),
        ("xi (z1→iℝ⁺)", true, vec![Color::PP, Color::PM]),
    ];

    let mut run_family = |label: &str, color: Color, f: &dyn Fn(f64) -> Result<f64>| -> Result<()> {
        let r: Vec<f64> = epss.iter().map(|&e| f(e)).collect::<Result<_>>()?;
        let fine = r[2];
        worst_final = worst_final.max(fine);
        // linear convergence ratio test, skipped below float noise
        for k in 0..2 {
            if r[k + 1] > 1e-13 {
                let ratio = r[k] / r[k + 1];
                // at least linear decay required; some entries vanish to
                // second order, which passes a fortiori
                if ratio < t.ratio_window.0 {
                    pass = false;
                    details.push(format!(
                        "{label} [{}]: ratio {ratio:.2} below the linear window ({:?})",
                        color.label(),
                        r
                    ));
                } else if ratio > t.ratio_window.1 {
                    details.push(format!(
                        "{label} [{}]: super-linear convergence (ratio {ratio:.0})",
                        color.label()
                    ));
                }
            }
        }
        Ok(())
    };

    // half-plane-with-mark variants: the collapse regular term is −dη for
    // the mixed colors and absent for (+,+)/(−,−)
    let hp_families: Vec<(String, Fam)> = vec![
        (
            "alpha (marked model)".into(),
            Box::new(move |color: Color, eps: f64| {
                let mark = 1.0;
                let z = C64::new(-0.4, 0.9);
                let z2 = z + C64::from_polar(eps, 0.7);
                let f = propagators::four_color_half_plane(color, z, z2, mark)?;
                let total = [f.0[0] + f.0[2], f.0[1] + f.0[3]];
                let expect = match color {
                    Color::PP | Color::MM => [0.0, 0.0],
                    _ => {
                        let (_, de) = propagators::eta_half_plane(z, mark)?;
                        [-de.0[0], -de.0[1]]
                    }
                };
                Ok(((total[0] - expect[0]).powi(2) + (total[1] - expect[1]).powi(2)).sqrt())
            }),
        ),
        (
            "beta (marked model)".into(),
            Box::new(move |color: Color, eps: f64| {
                // collapse of both points to a boundary point left of the mark
                let mark = 1.0;
                let x0 = -0.8;
                let u1 = C64::new(0.3, 0.9);
                let u2 = C64::new(-0.4, 0.5);
                let z1 = x0 + eps * u1;
                let z2 = x0 + eps * u2;
                let f = propagators::four_color_half_plane(color, z1, z2, mark)?;
                let got = transform_components(
                    &f.0[..4],
                    &[C64::new(eps, 0.0), C64::new(eps, 0.0)],
                );
                let plus = matches!(color, Color::PP | Color::PM);
                let expect = propagators::kontsevich(u1, u2, plus)?;
                Ok(got
                    .iter()
                    .zip(&expect.0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max))
            }),
        ),
        (
            "gamma (marked model)".into(),
            Box::new(move |color: Color, eps: f64| {
                // collapse to a boundary point right of the mark
                let mark = -1.0;
                let x0 = 0.8;
                let u1 = C64::new(0.3, 0.9);
                let u2 = C64::new(-0.4, 0.5);
                let z1 = x0 + eps * u1;
                let z2 = x0 + eps * u2;
                let f = propagators::four_color_half_plane(color, z1, z2, mark)?;
                let got = transform_components(
                    &f.0[..4],
                    &[C64::new(eps, 0.0), C64::new(eps, 0.0)],
                );
                let plus = matches!(color, Color::PP | Color::MP);
                let expect = propagators::kontsevich(u1, u2, plus)?;
                Ok(got
                    .iter()
                    .zip(&expect.0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max))
            }),
        ),
    ];

    for (label, fam) in families.iter().chain(&hp_families) {
        for color in Color::ALL {
            run_family(label, color, &|e| fam(color, e))?;
        }
    }
    // marked-model vanishing strata (same kill-lists through the square map)
    let z_far_hp = C64::new(-0.3, 0.8);
    for (label, first, colors) in &[
        ("theta (marked, z1 right of mark)", true, vec![Color::PP, Color::MP]),
        ("xi (marked, z1 left of mark)", true, vec![Color::PP, Color::PM]),
        ("eta (marked, z2 right of mark)", false, vec![Color::PM, Color::MM]),
        ("zeta (marked, z2 left of mark)", false, vec![Color::MP, Color::MM]),
    ] {
        for color in colors {
            let f = |eps: f64| -> Result<f64> {
                let mark = 0.0;
                let near = if label.contains("right") {
                    C64::new(1.1, eps)
                } else {
                    C64::new(-1.1, eps)
                };
                let (z1, z2) = if *first {
                    (near, z_far_hp)
                } else {
                    (z_far_hp, near)
                };
                let form = propagators::four_color_half_plane(*color, z1, z2, mark)?;
                // tangent directions: the far point, the along-axis direction
                // of the collapsing point, and the mark slot
                let p = usize::from(!*first) * 2;
                let far = usize::from(*first) * 2;
                Ok(form.0[far]
                    .abs()
                    .max(form.0[far + 1].abs())
                    .max(form.0[p].abs())
                    .max(form.0[4].abs()))
            };
            run_family(label, *color, &f)?;
        }
    }

    for (label, first, colors) in &vanishing {
        for color in colors {
            let f = |eps: f64| -> Result<f64> {
                let origin = label.contains("origin");
                let theta = 0.8f64;
                let near = if origin {
                    C64::from_polar(eps, theta)
                } else if label.contains("iℝ") {
                    C64::new(eps, 1.3)
                } else {
                    C64::new(1.3, eps)
                };
                let (w1, w2) = if *first { (near, z_far) } else { (z_far, near) };
                let form = propagators::four_color_quadrant(*color, w1, w2)?;
                // restrict to the stratum's tangent directions: the far
                // point's slots plus, for the collapsing point, the
                // along-wall direction (axis strata) or the ε-scaled angular
                // direction (origin strata)
                let p = usize::from(!*first) * 2;
                let far = usize::from(*first) * 2;
                let mut r = form.0[far].abs().max(form.0[far + 1].abs());
                if origin {
                    let ang = eps * (-theta.sin() * form.0[p] + theta.cos() * form.0[p + 1]);
                    r = r.max(ang.abs());
                } else {
                    let tangent = if label.contains("iℝ") { p + 1 } else { p };
                    r = r.max(form.0[tangent].abs());
                }
                Ok(r)
            };
            run_family(label, *color, &f)?;
        }
    }
    details.push(format!(
        "worst residual at ε = 1e−4 across all strata/colors: {worst_final:.3e}"
    ));
    Ok(outcome(
        if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        Some(worst_final),
        None,
        None,
        cfg.seed,
        details,
    ))
}

/// 𝔨-invariant basis of S^{≤4}(𝔭) for the sl2 pair: 1, r², r⁴.
fn sl2_invariants(pair: &SymmetricPair) -> Vec<PolyElement> {
    let alg = &pair.adapted;
    let sub: Vec<Vec<Rat>> = pair.k_indices().map(|i| alg.basis_vector(i)).collect();
    let comp: Vec<Vec<Rat>> = pair.p_indices().map(|i| alg.basis_vector(i)).collect();
    let setup = crate::reduction::ReductionSetup::new(alg, &sub, &comp, None).expect("setup");
    let ker = crate::reduction::reduction_h0(&setup, 4).expect("kernel");
    ker.basis
        .iter()
        .map(|v| {
            let mut p = PolyElement::zero(alg.dim);
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    p.add_term(ker.monomials[i].clone(), c.clone());
                }
            }
            p
        })
        .collect()
}

fn check_rouviere_commutativity(cfg: &CampaignConfig) -> Result<CheckOutcome> {
    let pair = sl2_pair();
    let alg = &pair.adapted;
    // χ = δ (zero for sl2, but built from the pair, not assumed)
    let chi = pair.delta_character().values;
    let invariants = sl2_invariants(&pair);
    let mut rng = crate::numeric::Rng::seeded(cfg.seed ^ 0x60e);
    let mut pairs_checked = 0u32;
    for (i, f) in invariants.iter().enumerate() {
        for g in invariants.iter().skip(i) {
            let fg = uea::rouviere_product(alg, pair.p_dim, &chi, f, g)?;
            let gf = uea::rouviere_product(alg, pair.p_dim, &chi, g, f)?;
            if fg != gf {
                return Ok(outcome(
                    CheckStatus::Fail,
                    None,
                    None,
                    None,
                    cfg.seed,
                    vec![format!("basis pair ({i}) does not commute")],
                ));
            }
            pairs_checked += 1;
        }
    }
    // random rational combinations, degree ≤ 4
    for _ in 0..20 {
        let mut f = PolyElement::zero(alg.dim);
        let mut g = PolyElement::zero(alg.dim);
        for b in &invariants {
            f = f.add(&b.scale(&rat((rng.next_u64() % 7) as i64 - 3)));
            g = g.add(&b.scale(&rat((rng.next_u64() % 7) as i64 - 3)));
        }
        if f.degree() > 4 || g.degree() > 4 {
            continue;
        }
        let fg = uea::rouviere_product(alg, pair.p_dim, &chi, &f, &g)?;
        let gf = uea::rouviere_product(alg, pair.p_dim, &chi, &g, &f)?;
        if fg != gf {
            return Ok(outcome(
                CheckStatus::Fail,
                None,
                None,
                None,
                cfg.seed,
                vec!["random invariant pair does not commute".into()],
            ));
        }
        pairs_checked += 1;
    }
    Ok(outcome(
        CheckStatus::Pass,
        Some(pairs_checked as f64),
        None,
        Some(0.0),
        cfg.seed,
        vec![format!(
            "{pairs_checked} invariant pairs commute exactly under # at χ = δ"
        )],
    ))
}

fn check_duflo_multiplicativity(cfg: &CampaignConfig) -> Result<CheckOutcome> {
    let alg = LieAlgebra::sl2();
    // Casimir element in S(𝔤): h² + 4ef in basis (e, h, f)
    let mut casimir = PolyElement::zero(3);
    casimir.add_term(vec![0, 2, 0], Rat::one());
    casimir.add_term(vec![1, 0, 1], rat(4));
    let order = 6;
    let dq = uea::sqrt_q_operator(&alg, order, false);
    let mut rng = crate::numeric::Rng::seeded(cfg.seed ^ 0xd0f);
    let mut checked = 0u32;
    for _ in 0..12 {
        // invariants a + b·C and c + d·C, product degree ≤ 4
        let coefs: Vec<Rat> = (0..4).map(|_| rat((rng.next_u64() % 9) as i64 - 4)).collect();
        let f = PolyElement::constant(3, coefs[0].clone()).add(&casimir.scale(&coefs[1]));
        let g = PolyElement::constant(3, coefs[2].clone()).add(&casimir.scale(&coefs[3]));
        let lhs = uea::pbw_symmetrize(&alg, &dq.apply(&f.mul(&g))?);
        let rhs = uea::uea_multiply(
            &alg,
            &uea::pbw_symmetrize(&alg, &dq.apply(&f)?),
            &uea::pbw_symmetrize(&alg, &dq.apply(&g)?),
        );
        if lhs != rhs {
            return Ok(outcome(
                CheckStatus::Fail,
                None,
                None,
                None,
                cfg.seed,
                vec!["β∂√q multiplicativity fails on an invariant pair".into()],
            ));
        }
        checked += 1;
    }
    Ok(outcome(
        CheckStatus::Pass,
        Some(checked as f64),
        None,
        Some(0.0),
        cfg.seed,
        vec![format!(
            "β(∂√q(C·C′)) = β(∂√qC)·β(∂√qC′) exactly on {checked} invariant pairs of degree ≤ 4"
        )],
    ))
}

fn check_bch_suite(cfg: &CampaignConfig) -> Result<CheckOutcome> {
    let t = &cfg.tolerances;
    let order = cfg.order.max(6) as usize;
    let pair = sl2_pair();
    let alg = LieAlgebra::sl2();
    let mut details = Vec::new();
    let mut pass = true;

    // order-6 BCH against the matrix logarithm (ad-operator norms ≤ 0.1)
    let b = crate::bch::bch_series(order)?;
    let x = [0.0, 0.05, 0.0];
    let y = [0.05, 0.0, 0.0];
    let z = b.evaluate_f64(&alg, &x, &y);
    let oracle = alg
        .adjoint_matrix_f64(&x)
        .expm()
        .mul(&alg.adjoint_matrix_f64(&y).expm())
        .logm();
    let d1 = alg.adjoint_matrix_f64(&z).max_abs_diff(&oracle);
    details.push(format!("BCH vs matrix log: {d1:.2e}"));
    pass &= d1 < t.bch_oracle;

    // BCH_p: odd-word structure, matrix oracle, 𝔭-valued result
    let bp = crate::bch::bch_p_series(order)?;
    let odd_only = bp.terms.keys().all(|w| w.len() % 2 == 1);
    details.push(format!("BCH_p odd-word content only: {odd_only}"));
    pass &= odd_only;
    let xa = [0.05, 0.0, 0.0];
    let ya = [0.0, 0.05, 0.0];
    let za = bp.evaluate_f64(&pair.adapted, &xa, &ya);
    pass &= za[2].abs() < 1e-12;
    let prod = pair
        .adapted
        .adjoint_matrix_f64(&xa)
        .expm()
        .mul(&pair.adapted.adjoint_matrix_f64(&ya).scale(2.0).expm())
        .mul(&pair.adapted.adjoint_matrix_f64(&xa).expm());
    let d2 = pair
        .adapted
        .adjoint_matrix_f64(&za)
        .max_abs_diff(&prod.logm().scale(0.5));
    details.push(format!("BCH_p vs matrix oracle: {d2:.2e}"));
    pass &= d2 < t.bch_oracle;

    // D_p(x, 0) = 1 exactly
    let dp = crate::bch::density_dp(&pair, &bp, &xa, &[0.0; 3])?;
    details.push(format!("D_p(x, 0) = {dp}"));
    pass &= dp == 1.0;

    // P–K at order 2: K = ½[x, y]
    let (p2, k2) = crate::bch::pk_decompose(2)?;
    let ok_pk = k2.coeff(&[0, 1]) == Rat::new(1.into(), 2.into())
        && p2.coeff(&[0]).is_one()
        && p2.coeff(&[1]).is_one();
    details.push(format!("pk order-2 gives K = ½[x,y]: {ok_pk}"));
    pass &= ok_pk;

    Ok(outcome(
        if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        Some(d1.max(d2)),
        None,
        Some(t.bch_oracle),
        cfg.seed,
        details,
    ))
}

fn check_reduction_spaces(cfg: &CampaignConfig) -> Result<CheckOutcome> {
    use crate::reduction::*;
    let mut details = Vec::new();
    let mut pass = true;

    // sl2 Cartan pair: kernel dims (1,0,1,0,1) at degree 4
    let pair = sl2_pair();
    let alg = &pair.adapted;
    let sub: Vec<Vec<Rat>> = pair.k_indices().map(|i| alg.basis_vector(i)).collect();
    let comp: Vec<Vec<Rat>> = pair.p_indices().map(|i| alg.basis_vector(i)).collect();
    let setup = ReductionSetup::new(alg, &sub, &comp, None)?;
    let ker = reduction_h0(&setup, 4)?;
    details.push(format!("sl2 Cartan kernel dims: {:?}", ker.dims_by_degree));
    pass &= ker.dims_by_degree == vec![1, 0, 1, 0, 1];

    // polarization brane ξ = e*, 𝔟 = span{h,f}: constants only up to degree 3
    let sl2 = LieAlgebra::sl2();
    let bsub = vec![vec![rat(0), rat(1), rat(0)], vec![rat(0), rat(0), rat(1)]];
    let bcomp = vec![vec![rat(1), rat(0), rat(0)]];
    let xi = vec![rat(1), rat(0), rat(0)];
    let b = crate::liealg::Subalgebra::new(&sl2, bsub.clone())?;
    pass &= check_polarization(&sl2, &xi, &b)?;
    let setup = ReductionSetup::new(&sl2, &bsub, &bcomp, Some(xi))?;
    let ker = reduction_h0(&setup, 3)?;
    details.push(format!("polarization brane kernel dims: {:?}", ker.dims_by_degree));
    pass &= ker.dims_by_degree == vec![1, 0, 0, 0];

    // Iwasawa instance: classical reduction equals S(𝔭₀)^{𝔨₀} up to degree 3
    let (_, rd) = iwasawa_from_search(&pair, 40, cfg.seed)?;
    let kera = reduction_h0(&rd.iwasawa_setup(&pair)?, 3)?;
    let kerb = rd.bimodule_kernel_order1(&pair, 3)?;
    details.push(format!(
        "Iwasawa reduction dims: {:?} vs invariants {:?}",
        kera.dims_by_degree, kerb.dims_by_degree
    ));
    pass &= kera.dims_by_degree == kerb.dims_by_degree;

    Ok(outcome(
        if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        None,
        None,
        None,
        cfg.seed,
        details,
    ))
}

fn check_aerial_one_wheel(cfg: &CampaignConfig) -> Result<CheckOutcome> {
    let t = &cfg.tolerances;
    let w1a = cached_weight(cfg, "w1A", || {
        weights::w1_weight(WheelFamily::A, cfg.samples, cfg.seed)
    })?;
    let w1b = cached_weight(cfg, "w1B", || {
        weights::w1_weight(WheelFamily::B, cfg.samples, cfg.seed ^ 0x5bd1e995)
    })?;
    let rep = weights::balance_report_from(w1a, w1b);
    let mut details = vec![
        format!(
            "W1A = {:.6} ± {:.6}, W1B = {:.6} ± {:.6}",
            rep.w1a.value, rep.w1a.std_error, rep.w1b.value, rep.w1b.std_error
        ),
        format!(
            "balance |W1A + W1B + s/4|: s = {:+}, residual {:.6}",
            rep.quarter_sign, rep.residual
        ),
        format!(
            "mirrored balance |W1A − W1B + s'/4|: s' = {:+}, residual {:.6}",
            rep.mirror_sign, rep.mirror_residual
        ),
        format!("separation |W1A − W1B| = {:.2}σ", rep.separation_sigma),
    ];
    let balance_ok = rep.residual < t.gate_sigma * rep.combined_std_error;
    let distinct_ok = rep.separation_sigma > t.gate_sigma;
    if !distinct_ok {
        details.push(
            "separation sub-check fails by construction: the reflection w ↦ i·w̄ \
             maps one 1-wheel integrand to the other up to orientation, forcing \
             |W1A| = |W1B| exactly; once the chart orientations are calibrated so \
             the Stokes balance closes, the two weights agree and cannot be 3σ \
             apart (see the decisions ledger)"
                .into(),
        );
    }
    Ok(outcome(
        if balance_ok && distinct_ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        Some(rep.residual),
        Some(rep.combined_std_error),
        Some(t.gate_sigma * rep.combined_std_error),
        cfg.seed,
        details,
    ))
}

fn check_symbol_identity(cfg: &CampaignConfig) -> Result<CheckOutcome> {
    let t = &cfg.tolerances;
    let pair = sl2_pair();
    let w2a = cached_weight(cfg, "w2A", || {
        weights::wheel_weight(WheelFamily::A, 2, cfg.samples, cfg.seed)
    })?;
    let w2b = cached_weight(cfg, "w2B", || {
        weights::wheel_weight(WheelFamily::B, 2, cfg.samples, cfg.seed ^ 0xb)
    })?;
    let mut details = vec![format!(
        "W2A = {:.6} ± {:.6}, W2B = {:.6} ± {:.6}",
        w2a.value, w2a.std_error, w2b.value, w2b.std_error
    )];
    let mut pass = w2a.std_error < t.wheel_sigma_cap && w2b.std_error < t.wheel_sigma_cap;
    if !pass {
        details.push("wheel σ caps exceeded".into());
    }
    for tt in [0.1, 0.3] {
        let x = [tt, 0.0, 0.0]; // t·h in adapted coordinates
        let resid = weights::dr_symbol_residual(&pair, w2a.value, w2b.value, &x)?;
        let ad = pair.adapted.adjoint_matrix_f64(&x);
        let sq = ad.mul(&ad);
        let tr2p: f64 = (0..pair.p_dim).map(|i| sq.get(i, i)).sum();
        let budget = t.symbol_budget_sigma
            * tr2p.abs()
            * (w2a.std_error.powi(2) + w2b.std_error.powi(2)).sqrt();
        details.push(format!(
            "t = {tt}: log-residual {resid:.6} vs budget {budget:.6}"
        ));
        pass &= resid < budget;
    }
    // j_B-triviality prediction: reported, not hard-failed
    let triv = w2b.value.abs() < t.gate_sigma * w2b.std_error;
    details.push(format!(
        "j_B ≡ 1 prediction |W2B| < 3σ: {} (flagged only)",
        if triv { "holds" } else { "NOT within 3σ" }
    ));
    Ok(outcome(
        if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        Some(w2a.value),
        Some(w2a.std_error),
        None,
        cfg.seed,
        details,
    ))
}

fn check_eight_color_geometry(cfg: &CampaignConfig) -> Result<CheckOutcome> {
    let t = &cfg.tolerances;
    let mut details = Vec::new();
    let mut pass = true;
    let mut rng = crate::numeric::Rng::seeded(cfg.seed ^ 0x8c0);

    // geodesic solve conditioning over random pairs
    let mut worst_cond: f64 = 0.0;
    for _ in 0..200 {
        let z1 = C64::new(rng.range(0.1, 2.5), rng.range(-1.4, 1.4));
        let z2 = C64::new(rng.range(0.1, 2.5), rng.range(-1.4, 1.4));
        if (z1.re - z2.re).abs() < 1e-6 {
            continue;
        }
        if let propagators::Geodesic::Curve { a, b, condition } =
            propagators::geodesic_through(z1, z2)
        {
            worst_cond = worst_cond.max(condition);
            // the solved geodesic passes through both points
            for z in [z1, z2] {
                let r = (z.im.sin() - a * z.re.exp() - b * (-z.re).exp()).abs();
                pass &= r < 1e-10;
            }
        }
    }
    details.push(format!(
        "geodesic 2×2 solve: max condition number over 200 pairs ≈ {worst_cond:.1}"
    ));

    // ρ̂ vanishes on the three finite walls: extrapolated ε → 0 limits
    let pi = std::f64::consts::PI;
    type WallFamily<'a> = Box<dyn Fn(f64) -> (C64, usize) + 'a>;
    let walls: [(&str, WallFamily<'_>); 3] = [
        ("lower", Box::new(|e| (C64::new(0.8, -pi / 2.0 + e), 0))),
        ("upper", Box::new(|e| (C64::new(0.8, pi / 2.0 - e), 0))),
        ("vertical", Box::new(|e| (C64::new(e, 0.3), 1))),
    ];
    for (name, fam) in &walls {
        let r = |e: f64| -> Result<f64> {
            let (z, tangential) = fam(e);
            Ok(propagators::rho_hat(z)?.0[tangential])
        };
        let (r3, r4) = (r(1e-3)?, r(1e-4)?);
        // two-point Richardson extrapolation of the linear decay
        let limit = (10.0 * r4 - r3) / 9.0;
        details.push(format!(
            "ρ̂ on the {name} wall: value {r4:.2e} at ε = 1e−4, extrapolated limit {limit:.2e}"
        ));
        pass &= limit.abs() < t.regular_limit;
    }

    // θ₁₁₁ collapse = dφ + ρ̃ with linear convergence
    let z = C64::new(1.1, 0.35);
    let resid = |eps: f64| -> Result<f64> {
        let z2 = z + C64::from_polar(eps, 0.9);
        let f = propagators::eight_color((1, 1, 1), z, z2)?;
        let total = [f.0[0] + f.0[2], f.0[1] + f.0[3]];
        let rt = propagators::rho_tilde(z);
        Ok(((total[0] - rt.0[0]).powi(2) + (total[1] - rt.0[1]).powi(2)).sqrt())
    };
    let (r2, r3, r4) = (resid(1e-2)?, resid(1e-3)?, resid(1e-4)?);
    let lin_ok = (5.0..20.0).contains(&(r2 / r3)) && (5.0..20.0).contains(&(r3 / r4));
    details.push(format!(
        "θ₁₁₁ collapse residual: {r2:.2e} → {r3:.2e} → {r4:.2e} (linear: {lin_ok})"
    ));
    pass &= lin_ok;

    // ρ̃ closed form vs finite differences
    let mut worst_fd: f64 = 0.0;
    for _ in 0..50 {
        let z = C64::new(rng.range(0.2, 2.0), rng.range(-1.2, 1.2));
        let form = propagators::rho_tilde(z);
        let h = 1e-5;
        let f = |x: f64, y: f64| (x.tanh() * y.tan()).atan() / std::f64::consts::TAU;
        let fdx = (f(z.re + h, z.im) - f(z.re - h, z.im)) / (2.0 * h);
        let fdy = (f(z.re, z.im + h) - f(z.re, z.im - h)) / (2.0 * h);
        worst_fd = worst_fd.max((form.0[0] - fdx).abs().max((form.0[1] - fdy).abs()));
    }
    details.push(format!("ρ̃ analytic vs finite differences: {worst_fd:.2e}"));
    pass &= worst_fd < t.finite_difference;

    Ok(outcome(
        if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        Some(worst_fd),
        None,
        Some(t.finite_difference),
        cfg.seed,
        details,
    ))
}
