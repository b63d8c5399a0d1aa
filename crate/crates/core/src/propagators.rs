//! Evaluation of the colored propagator 1-forms as covectors at configuration
//! points: the two-colored angle forms on the half-plane, the four-colored
//! forms on the quadrant and on the half-plane with a marked boundary point,
//! the regular terms η, ρ̂, ρ̃, the geodesic angle form on the strip, and the
//! eight-colored family on the half-strip.
//!
//! Every component is produced by analytic differentiation of arg/arctan
//! compositions; finite differences appear only in tests. Components are
//! `Im(du/u)`-style expressions, so branch cuts of arg never enter.

use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Distance below which evaluations count as singular and are refused.
pub const SINGULAR_GUARD: f64 = 1e-12;

const TWO_PI: f64 = std::f64::consts::TAU;

/// Covector of a 1-form in chart coordinates; the slot layout is documented
/// by each evaluator (pairs of (x, y) per complex point, then marks).
#[derive(Debug, Clone, PartialEq)]
pub struct OneFormValue(pub Vec<f64>);

impl OneFormValue {
    pub fn zeros(slots: usize) -> Self {
        OneFormValue(vec![0.0; slots])
    }

    pub fn add_scaled(&mut self, other: &OneFormValue, c: f64) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += c * b;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn max_abs_diff(&self, other: &OneFormValue) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Accumulator for Σ coeff · d arg(u) with du expressed per real slot.
struct FormAcc {
    slots: Vec<f64>,
}

impl FormAcc {
    fn new(n: usize) -> Self {
        FormAcc {
            slots: vec![0.0; n],
        }
    }

    /// Add `coeff * d arg(u)` where `du = Σ_slot dcoeff[slot] · d(slot)`.
    fn add_arg_term(&mut self, coeff: f64, u: C64, dcoeff: &[(usize, C64)]) -> Result<()> {
        if u.norm() < SINGULAR_GUARD {
            return Err(Error::Singular(format!("arg argument too small: |u| = {}", u.norm())));
        }
        for &(slot, c) in dcoeff {
            self.slots[slot] += coeff * (c / u).im;
        }
        Ok(())
    }

    fn into_form(self) -> OneFormValue {
        OneFormValue(self.slots)
    }
}

/// Per-point complex differential coefficients: `dz` carries μ and `dz̄`
/// carries ν, turned into the real slots (x, y) of point `p`.
fn point_slots(p: usize, mu: C64, nu: C64) -> [(usize, C64); 2] {
    let i = C64::new(0.0, 1.0);
    [(2 * p, mu + nu), (2 * p + 1, i * (mu - nu))]
}

/// Kontsevich angle form ω⁺ (or ω⁻ for `plus = false`) on a half-plane pair.
/// Slots: (x1, y1, x2, y2).
pub fn kontsevich(z1: C64, z2: C64, plus: bool) -> Result<OneFormValue> {
    let (a, b) = if plus { (z1, z2) } else { (z2, z1) };
    let (pa, pb) = if plus { (0, 1) } else { (1, 0) };
    let mut acc = FormAcc::new(4);
    let one = C64::new(1.0, 0.0);
    // d arg(a − b)
    let mut d = Vec::new();
    d.extend(point_slots(pa, one, C64::new(0.0, 0.0)));
    d.extend(point_slots(pb, -one, C64::new(0.0, 0.0)));
    acc.add_arg_term(1.0 / TWO_PI, a - b, &d)?;
    // − d arg(ā − b)
    let mut d = Vec::new();
    d.extend(point_slots(pa, C64::new(0.0, 0.0), one));
    d.extend(point_slots(pb, -one, C64::new(0.0, 0.0)));
    acc.add_arg_term(-1.0 / TWO_PI, a.conj() - b, &d)?;
    Ok(acc.into_form())
}

/// η on the half-plane with a mark: value arg(z − x)/2π and its differential.
/// Slots: (zx, zy, x).
pub fn eta_half_plane(z: C64, x: f64) -> Result<(f64, OneFormValue)> {
    let u = z - x;
    if u.norm() < SINGULAR_GUARD {
        return Err(Error::Singular("eta evaluated at its mark".into()));
    }
    let value = crate::confspace::arg_branch(u) / TWO_PI;
    let mut acc = FormAcc::new(3);
    let one = C64::new(1.0, 0.0);
    let mut d: Vec<(usize, C64)> = point_slots(0, one, C64::new(0.0, 0.0)).to_vec();
    d.push((2, -one));
    acc.add_arg_term(1.0 / TWO_PI, u, &d)?;
    Ok((value, acc.into_form()))
}

/// η on the quadrant: value arg(w)/2π relative to the origin. Slots: (x, y).
pub fn eta_quadrant(w: C64) -> Result<(f64, OneFormValue)> {
    if w.norm() < SINGULAR_GUARD {
        return Err(Error::Singular("eta evaluated at the origin".into()));
    }
    let value = crate::confspace::arg_branch(w) / TWO_PI;
    let mut acc = FormAcc::new(2);
    let d = point_slots(0, C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    acc.add_arg_term(1.0 / TWO_PI, w, &d)?;
    Ok((value, acc.into_form()))
}

/// Color labels (ε₁, ε₂) of the four-colored propagators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    PP,
    PM,
    MP,
    MM,
}

impl Color {
    pub fn signs(self) -> (f64, f64) {
        match self {
            Color::PP => (1.0, 1.0),
            Color::PM => (1.0, -1.0),
            Color::MP => (-1.0, 1.0),
            Color::MM => (-1.0, -1.0),
        }
    }

    pub const ALL: [Color; 4] = [Color::PP, Color::PM, Color::MP, Color::MM];

    pub fn label(self) -> &'static str {
        match self {
            Color::PP => "++",
            Color::PM => "+-",
            Color::MP => "-+",
            Color::MM => "--",
        }
    }
}

/// Four-colored propagator on the quadrant:
/// ω^{ε₁ε₂}(w₁,w₂) = [d arg(w₁−w₂) − ε₂ d arg(w̄₁−w₂) − ε₁ d arg(w̄₁+w₂)
/// + ε₁ε₂ d arg(w₁+w₂)] / 2π. Slots: (x1, y1, x2, y2).
pub fn four_color_quadrant(color: Color, w1: C64, w2: C64) -> Result<OneFormValue> {
    let (e1, e2) = color.signs();
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let mut acc = FormAcc::new(4);
    let term = |acc: &mut FormAcc, coeff: f64, u: C64, holo1: bool, sign2: f64| -> Result<()> {
        let mut d = Vec::new();
        if holo1 {
            d.extend(point_slots(0, one, zero));
        } else {
            d.extend(point_slots(0, zero, one));
        }
        d.extend(point_slots(1, sign2 * one, zero));
        acc.add_arg_term(coeff / TWO_PI, u, &d)
    };
    term(&mut acc, 1.0, w1 - w2, true, -1.0)?;
    term(&mut acc, -e2, w1.conj() - w2, false, -1.0)?;
    term(&mut acc, -e1, w1.conj() + w2, false, 1.0)?;
    term(&mut acc, e1 * e2, w1 + w2, true, 1.0)?;
    Ok(acc.into_form())
}

/// Four-colored propagator on the half-plane with a marked boundary point.
/// The (+,+)/(−,−) colors are the plain two-colored forms; the mixed colors
/// use the square-root formulas. Slots: (x1, y1, x2, y2, mark).
pub fn four_color_half_plane(color: Color, z1: C64, z2: C64, x: f64) -> Result<OneFormValue> {
    match color {
        Color::PP | Color::MM => {
            let k = kontsevich(z1, z2, color == Color::PP)?;
            let mut v = k.0;
            v.push(0.0);
            Ok(OneFormValue(v))
        }
        Color::PM | Color::MP => {
            let w1 = crate::confspace::sqrt_branch(z1 - x);
            let w2 = crate::confspace::sqrt_branch(z2 - x);
            for w in [w1, w2] {
                if w.norm() < SINGULAR_GUARD {
                    return Err(Error::Singular("aerial point at the mark".into()));
                }
            }
            // dw_i = (dz_i − dx) / (2 w_i); conjugates take the conjugate factor
            let m1 = 1.0 / (2.0 * w1);
            let m2 = 1.0 / (2.0 * w2);
            let _one = C64::new(1.0, 0.0);
            let zero = C64::new(0.0, 0.0);
            let sgn = if color == Color::PM { 1.0 } else { -1.0 };
            let mut acc = FormAcc::new(5);
            // term(u, c1h: dz1 enters holomorphically?, s2: sign of w2)
            let term = |acc: &mut FormAcc,
                            coeff: f64,
                            u: C64,
                            conj1: bool,
                            s2: f64|
             -> Result<()> {
                let (mu1, nu1, mx1) = if conj1 {
                    (zero, m1.conj(), -m1.conj())
                } else {
                    (m1, zero, -m1)
                };
                let mu2 = s2 * m2;
                let mut d: Vec<(usize, C64)> = Vec::new();
                d.extend(point_slots(0, mu1, nu1));
                d.extend(point_slots(1, mu2, zero));
                d.push((4, mx1 + s2 * (-m2)));
                acc.add_arg_term(coeff / TWO_PI, u, &d)
            };
            // ω^{+,−} = [d arg(w1−w2) + d arg(w̄1−w2) − d arg(w̄1+w2) − d arg(w1+w2)]/2π
            // ω^{−,+} flips the middle two signs.
            term(&mut acc, 1.0, w1 - w2, false, -1.0)?;
            term(&mut acc, sgn, w1.conj() - w2, true, -1.0)?;
            term(&mut acc, -sgn, w1.conj() + w2, true, 1.0)?;
            term(&mut acc, -1.0, w1 + w2, false, 1.0)?;
            Ok(acc.into_form())
        }
    }
}

/// The same four-colored forms computed by evaluating the quadrant model at
/// (√(z₁−x), √(z₂−x)) and pulling components back through the square map.
pub fn four_color_half_plane_pullback(
    color: Color,
    z1: C64,
    z2: C64,
    x: f64,
) -> Result<OneFormValue> {
    let w1 = crate::confspace::sqrt_branch(z1 - x);
    let w2 = crate::confspace::sqrt_branch(z2 - x);
    let q = four_color_quadrant(color, w1, w2)?;
    let mut out = vec![0.0; 5];
    for (p, w) in [(0usize, w1), (1usize, w2)] {
        if w.norm() < SINGULAR_GUARD {
            return Err(Error::Singular("aerial point at the mark".into()));
        }
        let c = C64::new(q.0[2 * p], q.0[2 * p + 1]); // covector as A_x + iA_y
        let mu = 1.0 / (2.0 * w); // dw = μ (dz − dx)
        let pulled = c.conj() * mu; // Re(c̄ · μ dz) expansion
        out[2 * p] += pulled.re;
        out[2 * p + 1] += -pulled.im;
        out[4] += -pulled.re;
    }
    Ok(OneFormValue(out))
}

/// Point models the propagator families live on; used by reporting and cache
/// keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    HalfPlaneWithMark,
    Quadrant,
    HalfStrip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    KontsevichPlus,
    KontsevichMinus,
    FourColor(Color),
    RegularEta,
    EightColor(u8, u8, u8),
    RegularRhoHat,
    RegularRhoTilde,
}

/// A propagator family pinned to a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PropagatorKind {
    pub family: Family,
    pub model: Model,
}

impl PropagatorKind {
    pub fn new(family: Family, model: Model) -> Result<Self> {
        let ok = match family {
            Family::KontsevichPlus | Family::KontsevichMinus => model != Model::HalfStrip,
            Family::FourColor(_) | Family::RegularEta => model != Model::HalfStrip,
            Family::EightColor(j1, j2, j3) => {
                model == Model::HalfStrip && [j1, j2, j3].iter().all(|j| (1..=2).contains(j))
            }
            Family::RegularRhoHat | Family::RegularRhoTilde => model == Model::HalfStrip,
        };
        if ok {
            Ok(PropagatorKind { family, model })
        } else {
            Err(Error::input("propagator family incompatible with model"))
        }
    }
}

/// Involutions of the two point models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Involution {
    Sigma,
    Tau,
}

fn jacobian_sigma_quadrant() -> [[f64; 2]; 2] {
    // (x, y) ↦ (y, x)
    [[0.0, 1.0], [1.0, 0.0]]
}

fn jacobian_tau(w: C64) -> [[f64; 2]; 2] {
    // w ↦ w / |w|²
    let (x, y) = (w.re, w.im);
    let r4 = (x * x + y * y).powi(2);
    [
        [(y * y - x * x) / r4, -2.0 * x * y / r4],
        [-2.0 * x * y / r4, (x * x - y * y) / r4],
    ]
}

fn apply_involution(inv: Involution, w: C64) -> C64 {
    match inv {
        Involution::Sigma => C64::new(w.im, w.re),
        Involution::Tau => 1.0 / w.conj(),
    }
}

/// Pull a 2-point quadrant form back through an involution applied to both
/// points.
fn pullback_two_point(
    inv: Involution,
    w1: C64,
    w2: C64,
    form_at_image: &OneFormValue,
) -> OneFormValue {
    let mut out = vec![0.0; 4];
    for (p, w) in [(0usize, w1), (1usize, w2)] {
        let j = match inv {
            Involution::Sigma => jacobian_sigma_quadrant(),
            Involution::Tau => jacobian_tau(w),
        };
        for a in 0..2 {
            for b in 0..2 {
                // slot a of the pullback picks up J[b][a] · component b
                out[2 * p + a] += j[b][a] * form_at_image.0[2 * p + b];
            }
        }
    }
    OneFormValue(out)
}

/// Residual of the tabulated involution relation for a four-colored form on
/// the quadrant, max over components. The τ-relations for (+,+) and (−,−)
/// include the 4·dη correction on the first resp. second point.
pub fn symmetry_residual_quadrant(
    color: Color,
    inv: Involution,
    w1: C64,
    w2: C64,
) -> Result<f64> {
    let image = (apply_involution(inv, w1), apply_involution(inv, w2));
    let lhs = pullback_two_point(
        inv,
        w1,
        w2,
        &four_color_quadrant(color, image.0, image.1)?,
    );
    let mut rhs = OneFormValue::zeros(4);
    match inv {
        Involution::Sigma => {
            let partner = match color {
                Color::PP => Color::PP,
                Color::MM => Color::MM,
                Color::PM => Color::MP,
                Color::MP => Color::PM,
            };
            rhs.add_scaled(&four_color_quadrant(partner, w1, w2)?, -1.0);
        }
        Involution::Tau => {
            rhs.add_scaled(&four_color_quadrant(color, w1, w2)?, -1.0);
            match color {
                Color::PP => {
                    let (_, de) = eta_quadrant(w1)?;
                    rhs.0[0] += 4.0 * de.0[0];
                    rhs.0[1] += 4.0 * de.0[1];
                }
                Color::MM => {
                    let (_, de) = eta_quadrant(w2)?;
                    rhs.0[2] += 4.0 * de.0[0];
                    rhs.0[3] += 4.0 * de.0[1];
                }
                _ => {}
            }
        }
    }
    Ok(lhs.max_abs_diff(&rhs))
}

/// Residual of the involution relations for the two-colored forms on ℍ⁺:
/// σ*(ω^±) = −ω^±, τ*(ω^+) = −ω^+ + 2 d(arg z₁)/2π (and z₂ for ω^−).
pub fn symmetry_residual_two_color(
    plus: bool,
    inv: Involution,
    z1: C64,
    z2: C64,
) -> Result<f64> {
    let (i1, i2) = match inv {
        Involution::Sigma => (C64::new(-z1.re, z1.im), C64::new(-z2.re, z2.im)),
        Involution::Tau => (1.0 / z1.conj(), 1.0 / z2.conj()),
    };
    let at_image = kontsevich(i1, i2, plus)?;
    let lhs = match inv {
        Involution::Sigma => {
            // (x, y) ↦ (−x, y): flip the x-components' sign
            let mut v = at_image.0;
            v[0] = -v[0];
            v[2] = -v[2];
            OneFormValue(v)
        }
        Involution::Tau => pullback_two_point(Involution::Tau, z1, z2, &at_image),
    };
    let mut rhs = OneFormValue::zeros(4);
    rhs.add_scaled(&kontsevich(z1, z2, plus)?, -1.0);
    if inv == Involution::Tau {
        let p = if plus { 0 } else { 1 };
        let w = if plus { z1 } else { z2 };
        let (_, de) = eta_quadrant(w)?; // d arg(w)/2π, two slots
        rhs.0[2 * p] += 2.0 * de.0[0];
        rhs.0[2 * p + 1] += 2.0 * de.0[1];
    }
    Ok(lhs.max_abs_diff(&rhs))
}

// ---------------------------------------------------------------------------
// Half-strip machinery (eight-colored propagators)
// ---------------------------------------------------------------------------

/// Geodesic of the strip metric dx²+dy²)/cos²y through two points: either a
/// vertical segment or sin(y) = A eˣ + B e⁻ˣ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geodesic {
    Vertical,
    Curve { a: f64, b: f64, condition: f64 },
}

/// Solve the 2×2 linear system for the geodesic through z₁, z₂.
pub fn geodesic_through(z1: C64, z2: C64) -> Geodesic {
    if z1.re == z2.re {
        return Geodesic::Vertical;
    }
    let (e1, e1i) = (z1.re.exp(), (-z1.re).exp());
    let (e2, e2i) = (z2.re.exp(), (-z2.re).exp());
    let det = e1 * e2i - e1i * e2;
    let a = (z1.im.sin() * e2i - z2.im.sin() * e1i) / det;
    let b = (e1 * z2.im.sin() - e2 * z1.im.sin()) / det;
    // condition estimate of the Vandermonde-type matrix, ∞-norm
    let norm = (e1.abs() + e1i.abs()).max(e2.abs() + e2i.abs());
    let inv_norm = ((e2i.abs() + e1i.abs()).max(e2.abs() + e1.abs())) / det.abs();
    Geodesic::Curve {
        a,
        b,
        condition: norm * inv_norm,
    }
}

/// Geodesic angle function ϑ̃(z₁,z₂) of the strip metric, fixed by
/// tan(ϑ̃ + π/2) = (sin y₁ cosh(x₁−x₂) − sin y₂) / (cos y₁ sinh(x₁−x₂)).
pub fn geodesic_angle(z1: C64, z2: C64) -> f64 {
    let d = z1.re - z2.re;
    let n = z1.im.sin() * d.cosh() - z2.im.sin();
    let den = z1.im.cos() * d.sinh();
    n.atan2(den) - std::f64::consts::FRAC_PI_2
}

/// The geodesic angle 1-form ϑ = dϑ̃. Slots: (x1, y1, x2, y2).
pub fn geodesic_angle_form(z1: C64, z2: C64) -> Result<OneFormValue> {
    if (z1 - z2).norm() < SINGULAR_GUARD {
        return Err(Error::Singular("coincident strip points".into()));
    }
    let d = z1.re - z2.re;
    let (sy1, cy1) = (z1.im.sin(), z1.im.cos());
    let sy2 = z2.im.sin();
    let n = sy1 * d.cosh() - sy2;
    let den = cy1 * d.sinh();
    let r2 = n * n + den * den;
    if r2 < SINGULAR_GUARD {
        return Err(Error::Singular("degenerate geodesic angle".into()));
    }
    // dϑ̃ = (D dN − N dD) / (N² + D²)
    let dn = [
        sy1 * d.sinh(),  // ∂x1
        cy1 * d.cosh(),  // ∂y1
        -sy1 * d.sinh(), // ∂x2
        -z2.im.cos(),    // ∂y2
    ];
    let dd = [
        cy1 * d.cosh(),
        -sy1 * d.sinh(),
        -cy1 * d.cosh(),
        0.0,
    ];
    let mut v = [0.0; 4];
    for k in 0..4 {
        v[k] = (den * dn[k] - n * dd[k]) / r2;
    }
    Ok(OneFormValue(v.to_vec()))
}

/// Regular term ρ̂ on the half-strip. Slots: (x, y).
pub fn rho_hat(z: C64) -> Result<OneFormValue> {
    let mut acc = FormAcc::new(2);
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let pi = std::f64::consts::PI;
    let d = point_slots(0, one, zero);
    acc.add_arg_term(1.0 / TWO_PI, z + i * (pi / 2.0), &d)?;
    acc.add_arg_term(-1.0 / TWO_PI, z - i * (pi / 2.0), &d)?;
    // −d arg(Re z + iπ): only the x-slot moves
    let u = C64::new(z.re, pi);
    acc.add_arg_term(-1.0 / TWO_PI, u, &[(0, one)])?;
    Ok(acc.into_form())
}

/// Regular term ρ̃ = d arctan(tanh x · tan y) / 2π on the half-strip.
/// Slots: (x, y).
pub fn rho_tilde(z: C64) -> OneFormValue {
    let (x, y) = (z.re, z.im);
    let g = x.tanh() * y.tan();
    let denom = 1.0 + g * g;
    let sech2 = 1.0 / x.cosh().powi(2);
    let sec2 = 1.0 / y.cos().powi(2);
    OneFormValue(vec![
        (y.tan() * sech2 / denom) / TWO_PI,
        (x.tanh() * sec2 / denom) / TWO_PI,
    ])
}

fn strip_sigma(z: C64) -> C64 {
    C64::new(-z.re, z.im)
}

/// Eight-colored propagators θ_{j₁j₂j₃} on the half-strip. The j₁ = j₃
/// members come from the geodesic angle form and the strip reflection σ; the
/// j₁ ≠ j₃ members are finite sums of reflected Euclidean angle forms whose
/// collapse regular term is ±ρ̂. Slots: (x1, y1, x2, y2).
pub fn eight_color(j: (u8, u8, u8), z1: C64, z2: C64) -> Result<OneFormValue> {
    let (j1, j2, j3) = j;
    if ![j1, j2, j3].iter().all(|v| (1..=2).contains(v)) {
        return Err(Error::input("color indices must be 1 or 2"));
    }
    if (z1 - z2).norm() < SINGULAR_GUARD {
        return Err(Error::Singular("coincident strip points".into()));
    }
    if j1 == j3 {
        // θ_{1,j2,1} = [ϑ(z1,z2) − ϑ(σz1,z2)]/2π resp. [ϑ − ϑ(z1,σz2)]/2π;
        // the j1 = 2 members take the + sign.
        let sign = if j1 == 1 { -1.0 } else { 1.0 };
        let base = geodesic_angle_form(z1, z2)?;
        let mut out = OneFormValue::zeros(4);
        out.add_scaled(&base, 1.0 / TWO_PI);
        if j2 == 1 {
            // reflect the first argument
            let refl = geodesic_angle_form(strip_sigma(z1), z2)?;
            out.0[0] += sign / TWO_PI * (-refl.0[0]);
            out.0[1] += sign / TWO_PI * refl.0[1];
            out.0[2] += sign / TWO_PI * refl.0[2];
            out.0[3] += sign / TWO_PI * refl.0[3];
        } else {
            // reflect the second argument
            let refl = geodesic_angle_form(z1, strip_sigma(z2))?;
            out.0[0] += sign / TWO_PI * refl.0[0];
            out.0[1] += sign / TWO_PI * refl.0[1];
            out.0[2] += sign / TWO_PI * (-refl.0[2]);
            out.0[3] += sign / TWO_PI * refl.0[3];
        }
        return Ok(out);
    }
    // j1 ≠ j3: reflections across the three walls of the half-strip,
    // r1(z) = z̄ − iπ (lower), r2(z) = −z̄ (vertical), r3(z) = z̄ + iπ (upper).
    // Each image of z2 is s·z2 + c or s·z̄2 + c; the sign pattern reproduces
    // the tabulated ±ρ̂ regular term at the two-point collapse.
    let eps = |jk: u8| if jk == 1 { 1.0 } else { -1.0 };
    let (e1, e2, e3) = (eps(j1), eps(j2), eps(j3));
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let ipi = C64::new(0.0, std::f64::consts::PI);
    let mut acc = FormAcc::new(4);
    // (coefficient, s, holomorphic in z2?, additive constant)
    let images: [(f64, f64, bool, C64); 7] = [
        (1.0, 1.0, true, zero),          // z2
        (e1, 1.0, false, -ipi),          // r1 z2
        (e2, -1.0, false, zero),         // r2 z2
        (e3, 1.0, false, ipi),           // r3 z2
        (e1 * e2, -1.0, true, -ipi),     // r2 r1 z2
        (e2 * e3, -1.0, true, ipi),      // r2 r3 z2
        (e2 * e3, -1.0, false, -2.0 * ipi), // r1 r2 r3 z2
    ];
    for (coeff, s, holo, c) in images {
        let img = if holo { s * z2 + c } else { s * z2.conj() + c };
        let mut d: Vec<(usize, C64)> = point_slots(0, -one, zero).to_vec();
        if holo {
            d.extend(point_slots(1, s * one, zero));
        } else {
            d.extend(point_slots(1, zero, s * one));
        }
        acc.add_arg_term(coeff / TWO_PI, img - z1, &d)?;
    }
    Ok(acc.into_form())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Rng;
    use std::f64::consts::PI;

    fn rand_uhp(rng: &mut Rng) -> C64 {
        C64::new(rng.range(-2.0, 2.0), rng.range(0.2, 2.0))
    }

    fn rand_quadrant(rng: &mut Rng) -> C64 {
        C64::new(rng.range(0.2, 2.0), rng.range(0.2, 2.0))
    }

    /// Central-difference curl of a 2-point form evaluator, max over slot
    /// pairs; closed forms give ~0.
    fn curl<F>(f: F, p: [f64; 4]) -> f64
    where
        F: Fn([f64; 4]) -> Option<Vec<f64>>,
    {
        let h = 1e-4;
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in a + 1..4 {
                let mut pa1 = p;
                pa1[a] += h;
                let mut pa0 = p;
                pa0[a] -= h;
                let mut pb1 = p;
                pb1[b] += h;
                let mut pb0 = p;
                pb0[b] -= h;
                let (Some(fa1), Some(fa0), Some(fb1), Some(fb0)) =
                    (f(pa1), f(pa0), f(pb1), f(pb0))
                else {
                    continue;
                };
                let dab = (fa1[b] - fa0[b]) / (2.0 * h);
                let dba = (fb1[a] - fb0[a]) / (2.0 * h);
                worst = worst.max((dab - dba).abs());
            }
        }
        worst
    }

    #[test]
    fn kontsevich_boundary_limit_and_eta() {
        // ω⁺ components vanish linearly as Im(z1) → 0
        let z2 = C64::new(0.5, 1.0);
        let mut prev = f64::INFINITY;
        for eps in [1e-2, 1e-3, 1e-4] {
            let z1 = C64::new(-0.4, eps);
            let w = kontsevich(z1, z2, true).unwrap();
            // components along the boundary stratum direction (x1) and all of z2
            let m = w.0[0].abs().max(w.0[2].abs()).max(w.0[3].abs());
            assert!(m < prev);
            prev = m;
        }
        assert!(prev < 1e-3);

        // η(z1, z2-collapse): arg(z1 − z̄2)/2π → 1/4 as z2 → z1
        let z1 = C64::new(0.0, 1.0);
        for eps in [1e-2, 1e-3, 1e-4] {
            let z2 = C64::new(0.0, 1.0 + eps);
            let u = z1 - z2.conj();
            let eta = crate::confspace::arg_branch(u) / TWO_PI;
            assert!((eta - 0.25).abs() < eps);
        }
    }

    #[test]
    fn forms_are_closed() {
        let mut rng = Rng::seeded(77);
        let mut done = 0;
        while done < 100 {
            let p = [
                rng.range(-1.0, 1.0),
                rng.range(0.5, 1.5),
                rng.range(-1.0, 1.0),
                rng.range(0.5, 1.5),
            ];
            if ((p[0] - p[2]).powi(2) + (p[1] - p[3]).powi(2)).sqrt() < 0.4 {
                continue;
            }
            done += 1;
            let c = curl(
                |q| {
                    kontsevich(C64::new(q[0], q[1]), C64::new(q[2], q[3]), true)
                        .ok()
                        .map(|f| f.0)
                },
                p,
            );
            assert!(c < 1e-6, "kontsevich curl {c}");
        }
        let mut done = 0;
        while done < 100 {
            let p = [
                rng.range(0.3, 1.5),
                rng.range(0.3, 1.5),
                rng.range(0.3, 1.5),
                rng.range(0.3, 1.5),
            ];
            // keep the sample away from the singular locus so the
            // finite-difference curl stays in its asymptotic regime
            if ((p[0] - p[2]).powi(2) + (p[1] - p[3]).powi(2)).sqrt() < 0.4 {
                continue;
            }
            done += 1;
            for color in Color::ALL {
                let c = curl(
                    |q| {
                        four_color_quadrant(color, C64::new(q[0], q[1]), C64::new(q[2], q[3]))
                            .ok()
                            .map(|f| f.0)
                    },
                    p,
                );
                assert!(c < 1e-6, "four-color curl {c}");
            }
        }
        // eight-colored families
        let mut done = 0;
        while done < 100 {
            let p = [
                rng.range(0.3, 2.0),
                rng.range(-1.2, 1.2),
                rng.range(0.3, 2.0),
                rng.range(-1.2, 1.2),
            ];
            if ((p[0] - p[2]).powi(2) + (p[1] - p[3]).powi(2)).sqrt() < 0.4 {
                continue;
            }
            done += 1;
            for j in [(1, 1, 1), (1, 2, 1), (2, 1, 2), (1, 1, 2), (2, 2, 1), (1, 2, 2), (2, 1, 1)] {
                let c = curl(
                    |q| {
                        eight_color(j, C64::new(q[0], q[1]), C64::new(q[2], q[3]))
                            .ok()
                            .map(|f| f.0)
                    },
                    p,
                );
                assert!(c < 1e-6, "eight-color {j:?} curl {c}");
            }
        }
    }

    #[test]
    fn eta_values() {
        // z real-ish, right of the mark → η ≈ 0
        let (v, _) = eta_half_plane(C64::new(2.0, 1e-9), 1.0).unwrap();
        assert!(v.abs() < 1e-8);
        // quadrant at it → 1/4
        let (v, _) = eta_quadrant(C64::new(0.0, 1.3)).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
        // dη closedness
        let mut rng = Rng::seeded(3);
        for _ in 0..10 {
            let p = [rng.range(0.2, 1.5), rng.range(0.2, 1.5), 0.0, 0.0];
            let c = curl(
                |q| {
                    eta_quadrant(C64::new(q[0], q[1]))
                        .ok()
                        .map(|(_, f)| vec![f.0[0], f.0[1], 0.0, 0.0])
                },
                p,
            );
            assert!(c < 1e-6);
        }
    }

    #[test]
    fn pullback_identity_through_square_map() {
        let mut rng = Rng::seeded(42);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let x = rng.range(-1.0, 1.0);
            let z1 = rand_uhp(&mut rng) + x;
            let z2 = rand_uhp(&mut rng) + x;
            for color in Color::ALL {
                let direct = four_color_half_plane(color, z1, z2, x).unwrap();
                let pulled = four_color_half_plane_pullback(color, z1, z2, x).unwrap();
                worst = worst.max(direct.max_abs_diff(&pulled));
            }
        }
        assert!(worst < 1e-10, "pullback mismatch {worst}");
    }

    #[test]
    fn quadrant_symmetries() {
        let mut rng = Rng::seeded(9);
        for _ in 0..30 {
            let w1 = rand_quadrant(&mut rng);
            let w2 = rand_quadrant(&mut rng);
            for color in Color::ALL {
                for inv in [Involution::Sigma, Involution::Tau] {
                    let r = symmetry_residual_quadrant(color, inv, w1, w2).unwrap();
                    assert!(r < 1e-10, "{color:?} {inv:?} residual {r}");
                }
            }
        }
        // τ on its fixed circle
        let w1 = C64::from_polar(1.0, 0.4);
        let w2 = C64::from_polar(1.0, 1.1);
        for color in Color::ALL {
            let r = symmetry_residual_quadrant(color, Involution::Tau, w1, w2).unwrap();
            assert!(r < 1e-10);
        }
    }

    #[test]
    fn two_color_symmetries() {
        let mut rng = Rng::seeded(10);
        for _ in 0..30 {
            let z1 = rand_uhp(&mut rng);
            let z2 = rand_uhp(&mut rng);
            for plus in [true, false] {
                for inv in [Involution::Sigma, Involution::Tau] {
                    let r = symmetry_residual_two_color(plus, inv, z1, z2).unwrap();
                    assert!(r < 1e-10, "plus={plus} {inv:?} residual {r}");
                }
            }
        }
    }

    #[test]
    fn boundary_vanishing_pattern() {
        // z1 → iℝ⁺ kills (+,+) and (+,−); z1 → ℝ⁺ kills (+,+) and (−,+);
        // z2 → iℝ⁺ kills (−,+) and (−,−); z2 → ℝ⁺ kills (+,−) and (−,−).
        let far = C64::new(0.8, 0.6);
        let table: [(bool, bool, [Color; 2]); 4] = [
            (true, true, [Color::PP, Color::PM]),
            (true, false, [Color::PP, Color::MP]),
            (false, true, [Color::MP, Color::MM]),
            (false, false, [Color::PM, Color::MM]),
        ];
        for (first, imag, colors) in table {
            let mut prev = [f64::INFINITY; 2];
            for eps in [1e-2, 1e-3, 1e-4] {
                let near = if imag {
                    C64::new(eps, 1.3)
                } else {
                    C64::new(1.3, eps)
                };
                let (w1, w2) = if first { (near, far) } else { (far, near) };
                for (ci, color) in colors.iter().enumerate() {
                    let f = four_color_quadrant(*color, w1, w2).unwrap();
                    // tangential components of the stratum: everything except
                    // the collapsing point's normal coordinate
                    let normal = if first {
                        if imag { 0 } else { 1 }
                    } else if imag {
                        2
                    } else {
                        3
                    };
                    let m = (0..4)
                        .filter(|&s| s != normal)
                        .map(|s| f.0[s].abs())
                        .fold(0.0, f64::max);
                    assert!(m < prev[ci]);
                    prev[ci] = m;
                }
            }
            assert!(prev.iter().all(|&m| m < 1e-3));
        }
    }

    #[test]
    fn collapse_regular_terms_quadrant() {
        // ω^{ε1ε2}|_α = dφ ± dη: the remainder after subtracting the singular
        // d arg(z2−z1) part converges to ±dη(z) linearly in ε.
        let z = C64::new(0.9, 0.7);
        let signs = [
            (Color::PP, 1.0),
            (Color::PM, -1.0),
            (Color::MP, -1.0),
            (Color::MM, 1.0),
        ];
        for (color, s) in signs {
            let mut prev = f64::INFINITY;
            for eps in [1e-2, 1e-3, 1e-4] {
                let phi = 0.7;
                let z2 = z + C64::from_polar(eps, phi);
                let f = four_color_quadrant(color, z, z2).unwrap();
                // singular part: d arg(±(z1−z2)) has dφ-component only in the
                // collapse chart; its (x,y)-total components vanish, so the
                // total-derivative components isolate the regular term.
                let total = [f.0[0] + f.0[2], f.0[1] + f.0[3]];
                let (_, de) = eta_quadrant(z).unwrap();
                let diff = ((total[0] - s * de.0[0]).powi(2)
                    + (total[1] - s * de.0[1]).powi(2))
                .sqrt();
                assert!(diff < prev);
                prev = diff;
            }
            assert!(prev < 1e-4, "{color:?} regular term residual {prev}");
        }
    }

    #[test]
    fn geodesics_and_angle() {
        // vertical when x1 = x2
        assert_eq!(
            geodesic_through(C64::new(1.0, 0.3), C64::new(1.0, -0.2)),
            Geodesic::Vertical
        );
        // symmetric points give A = B
        let g = geodesic_through(C64::new(0.8, 0.4), C64::new(-0.8, 0.4));
        if let Geodesic::Curve { a, b, .. } = g {
            assert!((a - b).abs() < 1e-14);
        } else {
            panic!("expected curve");
        }
        // the geodesic through both points passes through them
        let z1 = C64::new(0.5, 0.3);
        let z2 = C64::new(1.2, -0.4);
        if let Geodesic::Curve { a, b, .. } = geodesic_through(z1, z2) {
            for z in [z1, z2] {
                let lhs = z.im.sin();
                let rhs = a * z.re.exp() + b * (-z.re).exp();
                assert!((lhs - rhs).abs() < 1e-14);
            }
        }
        // tan(ϑ̃ + π/2) consistency at random pairs
        let mut rng = Rng::seeded(8);
        for _ in 0..50 {
            let z1 = C64::new(rng.range(0.1, 2.0), rng.range(-1.3, 1.3));
            let z2 = C64::new(rng.range(0.1, 2.0), rng.range(-1.3, 1.3));
            if (z1.re - z2.re).abs() < 1e-2 {
                continue;
            }
            let theta = geodesic_angle(z1, z2);
            let lhs = (theta + PI / 2.0).tan();
            let rhs = (z1.im.sin() * (z1.re - z2.re).cosh() - z2.im.sin())
                / (z1.im.cos() * (z1.re - z2.re).sinh());
            assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn rho_tilde_formula_and_fd() {
        let mut rng = Rng::seeded(12);
        let h = 1e-5;
        for _ in 0..20 {
            let z = C64::new(rng.range(0.2, 2.0), rng.range(-1.2, 1.2));
            let form = rho_tilde(z);
            let f = |x: f64, y: f64| (x.tanh() * y.tan()).atan() / TWO_PI;
            let fdx = (f(z.re + h, z.im) - f(z.re - h, z.im)) / (2.0 * h);
            let fdy = (f(z.re, z.im + h) - f(z.re, z.im - h)) / (2.0 * h);
            assert!((form.0[0] - fdx).abs() < 1e-6);
            assert!((form.0[1] - fdy).abs() < 1e-6);
        }
        // behavior at infinity: ρ̃ → dy/2π (the short-loop form's value)
        let z = C64::new(30.0, 0.4);
        let form = rho_tilde(z);
        assert!(form.0[0].abs() < 1e-6);
        assert!((form.0[1] - 1.0 / TWO_PI).abs() < 1e-6);
    }

    #[test]
    fn rho_hat_boundary_limits() {
        // ρ̂ vanishes on the three finite walls
        for eps in [1e-3, 1e-4] {
            // lower wall y = −π/2
            let z = C64::new(0.8, -PI / 2.0 + eps);
            let f = rho_hat(z).unwrap();
            // tangential component along the wall
            assert!(f.0[0].abs() < 20.0 * eps, "lower wall {}", f.0[0]);
            // upper wall
            let z = C64::new(0.8, PI / 2.0 - eps);
            let f = rho_hat(z).unwrap();
            assert!(f.0[0].abs() < 20.0 * eps);
            // vertical wall x = 0
            let z = C64::new(eps, 0.3);
            let f = rho_hat(z).unwrap();
            assert!(f.0[1].abs() < 20.0 * eps, "vertical wall {}", f.0[1]);
        }
        // and decays at infinity (horizontal escape)
        let f = rho_hat(C64::new(50.0, 0.2)).unwrap();
        assert!(f.max_abs() < 1e-3);
    }

    #[test]
    fn theta111_collapse_matches_rho_tilde() {
        let z = C64::new(1.1, 0.35);
        let mut prev = f64::INFINITY;
        for eps in [1e-2, 1e-3, 1e-4] {
            let z2 = z + C64::from_polar(eps, 0.9);
            let f = eight_color((1, 1, 1), z, z2).unwrap();
            // subtract the singular part (1/2π) d arg(z2 − z1): its total
            // derivative in the collapsed point vanishes, so totals isolate
            // the regular term.
            let total = [f.0[0] + f.0[2], f.0[1] + f.0[3]];
            let rt = rho_tilde(z);
            let diff =
                ((total[0] - rt.0[0]).powi(2) + (total[1] - rt.0[1]).powi(2)).sqrt();
            assert!(diff < prev);
            prev = diff;
        }
        assert!(prev < 1e-4, "theta111 regular term residual {prev}");
    }

    #[test]
    fn eight_color_j1_ne_j3_collapse() {
        // regular term at the collapse is ±ρ̂ per family
        let z = C64::new(0.9, 0.25);
        let expect: [((u8, u8, u8), f64); 4] = [
            ((1, 1, 2), 1.0),
            ((1, 2, 2), -1.0),
            ((2, 1, 1), -1.0),
            ((2, 2, 1), 1.0),
        ];
        for (j, s) in expect {
            let mut prev = f64::INFINITY;
            for eps in [1e-2, 1e-3, 1e-4] {
                let z2 = z + C64::from_polar(eps, 0.6);
                let f = eight_color(j, z, z2).unwrap();
                let total = [f.0[0] + f.0[2], f.0[1] + f.0[3]];
                let rh = rho_hat(z).unwrap();
                let diff = ((total[0] - s * rh.0[0]).powi(2)
                    + (total[1] - s * rh.0[1]).powi(2))
                .sqrt();
                assert!(diff < prev);
                prev = diff;
            }
            assert!(prev < 1e-4, "{j:?} regular term residual {prev}");
        }
    }

    #[test]
    fn kind_compatibility() {
        assert!(PropagatorKind::new(Family::FourColor(Color::PP), Model::Quadrant).is_ok());
        assert!(PropagatorKind::new(Family::EightColor(1, 2, 1), Model::Quadrant).is_err());
        assert!(PropagatorKind::new(Family::RegularRhoHat, Model::HalfStrip).is_ok());
    }
}
