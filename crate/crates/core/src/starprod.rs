//! Desk-scale biquantization operators: the left-module operator 𝒜 = (·)⋆_L 1
//! and right-module operator ℬ = 1 ⋆_R (·) assembled from enumerated colored
//! graphs with Monte-Carlo weights, their wheel symbols, the truncated
//! exponential symbol identity, and the order-2 reduction-algebra product
//! cross-checked against its exact enveloping-algebra oracle.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::bch::TraceSpace;
use crate::graphs::{
    colorings, enumerate_graphs, operator_of_graph, AdmissibleGraph, ColorScheme, EdgeColoring,
    EnumOptions, PartRestriction, SecondType,
};
use crate::liealg::SymmetricPair;
use crate::numeric::Mat;
use crate::ratlin::{rat_to_f64, Rat};
use crate::uea::{Expo, PolyElement};
use crate::weights::{integrate_weight, EdgeForm, WeightEstimate};
use crate::{Error, Result};

/// Float-coefficient polynomial (exact algebra mixed with MC weights).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyF64 {
    pub dim: usize,
    pub terms: BTreeMap<Expo, f64>,
}

impl PolyF64 {
    pub fn zero(dim: usize) -> Self {
        PolyF64 {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_exact(f: &PolyElement) -> Self {
        let mut out = PolyF64::zero(f.dim);
        for (e, c) in &f.terms {
            out.add_term(e.clone(), rat_to_f64(c));
        }
        out
    }

    pub fn add_term(&mut self, e: Expo, c: f64) {
        if c == 0.0 {
            return;
        }
        *self.terms.entry(e).or_insert(0.0) += c;
    }

    pub fn add_scaled(&mut self, other: &PolyF64, s: f64) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c * s);
        }
    }

    pub fn coeff(&self, e: &[u32]) -> f64 {
        self.terms.get(e).copied().unwrap_or(0.0)
    }

    pub fn max_abs_diff(&self, other: &PolyF64) -> f64 {
        let mut keys: std::collections::BTreeSet<&Expo> = self.terms.keys().collect();
        keys.extend(other.terms.keys());
        keys.iter()
            .map(|e| (self.coeff(e) - other.coeff(e)).abs())
            .fold(0.0, f64::max)
    }

    /// Drop terms of total degree below `min_degree` (truncation window).
    pub fn degree_at_least(&self, min_degree: u32) -> PolyF64 {
        let mut out = PolyF64::zero(self.dim);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() >= min_degree {
                out.add_term(e.clone(), *c);
            }
        }
        out
    }
}

/// Exponential trace-letter series with float coefficients (wheel symbols).
#[derive(Debug, Clone)]
pub struct TraceSymbolSeries {
    pub order: u32,
    pub terms: Vec<(TraceSpace, u32, f64)>,
}

impl TraceSymbolSeries {
    pub fn new(order: u32, terms: Vec<(TraceSpace, u32, f64)>) -> Result<Self> {
        if terms.iter().any(|(_, m, _)| m % 2 != 0) {
            return Err(Error::input("only even trace letters may appear"));
        }
        Ok(TraceSymbolSeries { order, terms })
    }

    /// Evaluate exp(Σ c · tr_s(ad^{2n} x)) at x in adapted coordinates.
    pub fn eval(&self, pair: &SymmetricPair, x: &[f64]) -> f64 {
        self.eval_log(pair, x).exp()
    }

    pub fn eval_log(&self, pair: &SymmetricPair, x: &[f64]) -> f64 {
        let ad = pair.adapted.adjoint_matrix_f64(x);
        let mut acc = 0.0;
        for (space, m, c) in &self.terms {
            let mut pow = Mat::identity(ad.n);
            for _ in 0..*m {
                pow = pow.mul(&ad);
            }
            let range = match space {
                TraceSpace::Full => 0..pair.dim(),
                TraceSpace::PPart => 0..pair.p_dim,
                TraceSpace::KPart => pair.p_dim..pair.dim(),
            };
            acc += c * range.map(|i| pow.get(i, i)).sum::<f64>();
        }
        acc
    }
}

/// Cache of Monte-Carlo graph weights keyed by (graph, coloring, context).
#[derive(Debug, Clone, Default)]
pub struct WeightTable {
    entries: BTreeMap<String, (f64, f64)>,
}

impl WeightTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn key(g: &AdmissibleGraph, coloring: &EdgeColoring) -> String {
        let colors: Vec<String> = coloring.edge_colors.iter().map(|c| c.to_string()).collect();
        format!("{:?}|{}|{}", g.second, g.graph_id(), colors.join(""))
    }

    pub fn insert(&mut self, key: String, value: f64, std_error: f64) {
        self.entries.insert(key, (value, std_error));
    }

    pub fn insert_estimate(&mut self, key: String, est: &WeightEstimate) {
        self.insert(key, est.value, est.std_error);
    }

    pub fn get(&self, key: &str) -> Result<(f64, f64)> {
        self.entries
            .get(key)
            .copied()
            .ok_or_else(|| Error::MissingWeight(key.to_string()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Operator-family context: which model the graphs live on and how colors
/// map to propagator forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorModel {
    /// Left-module side: argument on the imaginary axis (quadrant model).
    LeftModule,
    /// Right-module side: argument on the real axis (quadrant model).
    RightModule,
    /// Algebra-B product side: two arguments on the real line, two-colored
    /// forms (half-plane model).
    AlgebraB,
}

impl OperatorModel {
    fn second_type(self) -> SecondType {
        match self {
            OperatorModel::LeftModule => SecondType::Quadrant { k: 1, l: 0 },
            OperatorModel::RightModule => SecondType::Quadrant { k: 0, l: 1 },
            OperatorModel::AlgebraB => SecondType::Marked { m: 2, mark: 0 },
        }
    }

    fn capped_index(self) -> Option<usize> {
        match self {
            OperatorModel::LeftModule => Some(1),
            OperatorModel::RightModule => Some(0),
            OperatorModel::AlgebraB => None,
        }
    }

    fn edge_form(self, color: usize) -> EdgeForm {
        match self {
            OperatorModel::AlgebraB => EdgeForm::TwoColor { plus: color == 0 },
            _ => EdgeForm::FourColor(if color == 0 {
                crate::propagators::Color::PP
            } else {
                crate::propagators::Color::PM
            }),
        }
    }
}

/// The coloring scheme of a symmetric pair on the brane χ + 𝔨^⊥: part 0 is
/// 𝔭, part 1 is 𝔨 restricting to the character χ.
pub fn pair_color_scheme(
    pair: &SymmetricPair,
    model: OperatorModel,
    chi: &[Rat],
) -> Result<ColorScheme> {
    let p: Vec<usize> = pair.p_indices().collect();
    let k: Vec<usize> = pair.k_indices().collect();
    if chi.len() != k.len() {
        return Err(Error::input("character length must match dim 𝔨"));
    }
    let restriction = vec![
        PartRestriction::Variable,
        if chi.iter().all(Zero::is_zero) {
            PartRestriction::Zero
        } else {
            PartRestriction::Constant(chi.to_vec())
        },
    ];
    let second = model.second_type();
    let nb = second.boundary_count();
    // edges into the marked/origin vertex carry the (+,+) color only
    let boundary_in: Vec<Vec<bool>> = (0..nb)
        .map(|j| {
            if !matches!(model, OperatorModel::AlgebraB) && j == second.mark() {
                vec![true, false]
            } else {
                vec![true, true]
            }
        })
        .collect();
    ColorScheme::from_partition(
        &pair.adapted,
        vec![p, k],
        boundary_in,
        1,
        vec![1, -1],
        restriction,
    )
}

fn enum_options(model: OperatorModel) -> EnumOptions {
    let second = model.second_type();
    let caps = model.capped_index().map(|idx| {
        (0..second.boundary_count())
            .map(|j| if j == idx { 0 } else { usize::MAX })
            .collect()
    });
    EnumOptions {
        multi_edges: true,
        short_loops: !matches!(model, OperatorModel::AlgebraB),
        edges_from_boundary: 0,
        phantom_budget: 0,
        boundary_in_caps: caps,
        degree_filter: true,
        max_aerial: 4,
    }
}

/// Substitute the brane values for the 𝔨-coordinates: χ(k) or 0.
pub fn restrict_to_brane(pair: &SymmetricPair, chi: &[Rat], f: &PolyElement) -> PolyF64 {
    let chif: Vec<f64> = chi.iter().map(rat_to_f64).collect();
    let mut out = PolyF64::zero(f.dim);
    for (e, c) in &f.terms {
        let mut coeff = rat_to_f64(c);
        let mut reduced = e.clone();
        for (pos, kb) in pair.k_indices().enumerate() {
            for _ in 0..e[kb] {
                coeff *= chif[pos];
            }
            reduced[kb] = 0;
        }
        out.add_term(reduced, coeff);
    }
    out
}

/// Derivations of the 𝔨-action on S(𝔭); zero iff the input is invariant.
pub fn is_k_invariant(pair: &SymmetricPair, f: &PolyElement) -> bool {
    let alg = &pair.adapted;
    for kb in pair.k_indices() {
        let mut image = PolyElement::zero(alg.dim);
        for (e, c) in &f.terms {
            for i in pair.p_indices() {
                if e[i] == 0 {
                    continue;
                }
                let br = alg.bracket(&alg.basis_vector(kb), &alg.basis_vector(i));
                let mut base = e.clone();
                base[i] -= 1;
                for (j, coeff) in br.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    let mut ne = base.clone();
                    ne[j] += 1;
                    image.add_term(ne, c * coeff * crate::ratlin::rat(e[i] as i64));
                }
            }
        }
        if !image.is_zero() {
            return false;
        }
    }
    true
}

/// An assembled operator value together with its propagated MC error budget
/// (Σ |contraction coefficient| · σ_weight per monomial).
#[derive(Debug, Clone)]
pub struct AssembledValue {
    pub value: PolyF64,
    pub error_budget: PolyF64,
}

/// List the weight-table keys needed to assemble an operator at the given
/// truncation, together with the data needed to compute them.
pub fn required_weights(
    pair: &SymmetricPair,
    model: OperatorModel,
    chi: &[Rat],
    truncation: usize,
) -> Result<Vec<(String, AdmissibleGraph, Vec<EdgeForm>)>> {
    let scheme = pair_color_scheme(pair, model, chi)?;
    let mut out = Vec::new();
    for n in 1..=truncation {
        for g in enumerate_graphs(n, model.second_type(), &enum_options(model))? {
            for coloring in colorings(&g, &scheme) {
                let key = WeightTable::key(&g, &coloring);
                let forms = coloring
                    .edge_colors
                    .iter()
                    .map(|&c| model.edge_form(c))
                    .collect();
                out.push((key, g.clone(), forms));
            }
        }
    }
    Ok(out)
}

/// Populate a weight table by Monte-Carlo integration of every graph weight
/// an operator assembly at this truncation will ask for.
pub fn populate_weights(
    table: &mut WeightTable,
    pair: &SymmetricPair,
    model: OperatorModel,
    chi: &[Rat],
    truncation: usize,
    samples: u64,
    seed: u64,
) -> Result<()> {
    for (i, (key, g, forms)) in required_weights(pair, model, chi, truncation)?
        .into_iter()
        .enumerate()
    {
        let est = integrate_weight(&g, &forms, samples, seed.wrapping_add(i as u64))?;
        table.insert_estimate(key, &est);
    }
    Ok(())
}

/// Generic graph-expansion assembly shared by 𝒜, ℬ and the order-2 product.
fn assemble(
    pair: &SymmetricPair,
    model: OperatorModel,
    chi: &[Rat],
    inputs_by_boundary: &[PolyElement],
    truncation: usize,
    weights: &WeightTable,
) -> Result<AssembledValue> {
    let scheme = pair_color_scheme(pair, model, chi)?;
    let alg = &pair.adapted;
    // order-0 part: the plain product of the arguments restricted to the brane
    let mut base = PolyElement::one(alg.dim);
    for f in inputs_by_boundary {
        base = base.mul(f);
    }
    let mut value = restrict_to_brane(pair, chi, &base);
    let mut error_budget = PolyF64::zero(alg.dim);
    for n in 1..=truncation {
        for g in enumerate_graphs(n, model.second_type(), &enum_options(model))? {
            let aut = g.automorphism_count() as f64;
            for coloring in colorings(&g, &scheme) {
                let key = WeightTable::key(&g, &coloring);
                let (w, sigma) = weights.get(&key)?;
                let op = operator_of_graph(alg, &scheme, &g, &coloring, inputs_by_boundary)?;
                if op.is_zero() {
                    continue;
                }
                let restricted = restrict_to_brane(pair, chi, &op);
                value.add_scaled(&restricted, w / aut);
                for (e, c) in &restricted.terms {
                    error_budget.add_term(e.clone(), c.abs() * sigma / aut);
                }
            }
        }
    }
    Ok(AssembledValue {
        value,
        error_budget,
    })
}

/// 𝒜(f) = f ⋆_L 1 at the given truncation: the brane projection of f plus
/// the graph corrections (left-module placement).
pub fn operator_a(
    pair: &SymmetricPair,
    chi: &[Rat],
    f: &PolyElement,
    truncation: usize,
    weights: &WeightTable,
) -> Result<AssembledValue> {
    let one = PolyElement::one(pair.dim());
    assemble(
        pair,
        OperatorModel::LeftModule,
        chi,
        &[f.clone(), one],
        truncation,
        weights,
    )
}

/// ℬ(f) = 1 ⋆_R f at the given truncation (right-module placement).
pub fn operator_b(
    pair: &SymmetricPair,
    chi: &[Rat],
    f: &PolyElement,
    truncation: usize,
    weights: &WeightTable,
) -> Result<AssembledValue> {
    if !f.supported_on(pair.p_indices()) {
        return Err(Error::input("right-module argument must live in S(𝔭)"));
    }
    let one = PolyElement::one(pair.dim());
    assemble(
        pair,
        OperatorModel::RightModule,
        chi,
        &[one, f.clone()],
        truncation,
        weights,
    )
}

/// Wheel symbol j (exponential trace series) of the chosen family with the
/// supplied even-wheel weights; index n in `wheel_weights` is the weight of
/// the 2n-wheel.
pub fn symbol_j(order: u32, wheel_weights: &[f64]) -> Result<TraceSymbolSeries> {
    let mut terms = Vec::new();
    for (i, w) in wheel_weights.iter().enumerate() {
        let power = 2 * (i as u32 + 1);
        if power <= order && *w != 0.0 {
            terms.push((TraceSpace::PPart, power, *w));
        }
    }
    TraceSymbolSeries::new(order, terms)
}

/// Residual of the truncated exponential identity for 𝒜(e^x), x ∈ 𝔨:
/// the order-2 trace coefficients of log 𝒜(e^x) against log √q(x) (the
/// character parts cancel exactly).
///
/// `w2_k_cycle` / `w2_p_cycle` are the raw MC integrals of the two
/// k-argument 2-wheels (cycle colored 𝔨 resp. 𝔭); each wheel has a 2-fold
/// rotational automorphism and a single admissible coloring, so the operator
/// coefficients are the integrals halved.
pub fn sym_k_lemma_residual(
    pair: &SymmetricPair,
    w2_k_cycle: f64,
    w2_p_cycle: f64,
    x_adapted: &[f64],
) -> Result<f64> {
    if x_adapted[..pair.p_dim].iter().any(|&c| c != 0.0) {
        return Err(Error::input("argument must lie in 𝔨"));
    }
    let ad = pair.adapted.adjoint_matrix_f64(x_adapted);
    let sq = ad.mul(&ad);
    let tr_p: f64 = (0..pair.p_dim).map(|i| sq.get(i, i)).sum();
    let tr_k: f64 = (pair.p_dim..pair.dim()).map(|i| sq.get(i, i)).sum();
    // log √q order-2 coefficient is 1/48 on tr_g(ad²)
    let lhs = 0.5 * w2_k_cycle * tr_k + 0.5 * w2_p_cycle * tr_p;
    let rhs = (tr_k + tr_p) / 48.0;
    Ok((lhs - rhs).abs())
}

/// The two k-argument 2-wheel graphs (cycle all-𝔨 or all-𝔭) whose weights
/// feed [`sym_k_lemma_residual`].
pub fn k_wheel_weight(cycle_p: bool, samples: u64, seed: u64) -> Result<WeightEstimate> {
    use crate::graphs::Vertex;
    let g = AdmissibleGraph::new(
        2,
        SecondType::Quadrant { k: 1, l: 0 },
        vec![
            (Vertex::Aerial(0), Vertex::Aerial(1)),
            (Vertex::Aerial(0), Vertex::Boundary(0)),
            (Vertex::Aerial(1), Vertex::Aerial(0)),
            (Vertex::Aerial(1), Vertex::Boundary(0)),
        ],
        vec![],
        std::collections::BTreeSet::new(),
    )?;
    let cycle = if cycle_p {
        crate::propagators::Color::PP
    } else {
        crate::propagators::Color::PM
    };
    let forms = vec![
        EdgeForm::FourColor(cycle),
        EdgeForm::FourColor(crate::propagators::Color::PM),
        EdgeForm::FourColor(cycle),
        EdgeForm::FourColor(crate::propagators::Color::PM),
    ];
    integrate_weight(&g, &forms, samples, seed)
}

/// Order-≤2 graph expansion of the reduction-algebra product f₁ ⋆_B f₂ on
/// 𝔨-invariant inputs, with its propagated MC error budget.
pub fn cf_product_order2(
    pair: &SymmetricPair,
    chi: &[Rat],
    f1: &PolyElement,
    f2: &PolyElement,
    weights: &WeightTable,
) -> Result<AssembledValue> {
    for f in [f1, f2] {
        if !f.supported_on(pair.p_indices()) || !is_k_invariant(pair, f) {
            return Err(Error::input("inputs must be 𝔨-invariant elements of S(𝔭)"));
        }
    }
    assemble(
        pair,
        OperatorModel::AlgebraB,
        chi,
        &[f1.clone(), f2.clone()],
        2,
        weights,
    )
}

/// Exact oracle for the reduction-algebra product: the Rouvière pairing
/// conjugated by ∂_√j, per the product-comparison theorem:
/// f₁ ⋆_B f₂ = ∂_√j⁻¹( (∂_√j f₁) # (∂_√j f₂) ) with # at the character
/// δ − ¼tr_𝔤∘ad + χ.
pub fn cf_product_oracle(
    pair: &SymmetricPair,
    chi: &[Rat],
    f1: &PolyElement,
    f2: &PolyElement,
    order: u32,
) -> Result<PolyElement> {
    let alg = &pair.adapted;
    let dj = crate::uea::sqrt_j_operator(pair, order, false);
    let dj_inv = crate::uea::sqrt_j_operator(pair, order, true);
    let delta = pair.delta_character();
    let quarter = pair.quarter_trace_character();
    let chi_tot: Vec<Rat> = (0..pair.k_dim())
        .map(|i| &delta.values[i] - &quarter.values[i] + &chi[i])
        .collect();
    let sharp = crate::uea::rouviere_product(
        alg,
        pair.p_dim,
        &chi_tot,
        &dj.apply(f1)?,
        &dj.apply(f2)?,
    )?;
    dj_inv.apply(&sharp)
}


#[cfg(test)]
mod assembly_tests {
    use super::tests::invariant_quadric;
    use super::*;
    use num_traits::One;
    use crate::liealg::LieAlgebra;
    use crate::ratlin::{rat, RatMat};
    use crate::uea::star_a;

    fn sl2_cartan() -> SymmetricPair {
        let alg = LieAlgebra::sl2();
        let sigma = RatMat::from_rows(vec![
            vec![rat(0), rat(0), rat(-1)],
            vec![rat(0), rat(-1), rat(0)],
            vec![rat(-1), rat(0), rat(0)],
        ]);
        SymmetricPair::new(alg, sigma).unwrap()
    }

    /// Forward operator restricted to S(𝔭) is unitriangular by degree: with
    /// any weights, each graph correction strictly lowers the degree.
    #[test]
    fn operator_a_is_unitriangular_on_p() {
        let pair = sl2_cartan();
        let chi = vec![Rat::zero()];
        let mut table = WeightTable::new();
        for (key, _, _) in required_weights(&pair, OperatorModel::LeftModule, &chi, 2).unwrap() {
            table.insert(key, 1.0, 0.0); // arbitrary nonzero weights
        }
        for mono in [vec![1u32, 0, 0], vec![0, 1, 0], vec![2, 0, 0], vec![1, 1, 0]] {
            let f = PolyElement::monomial(3, mono.clone(), Rat::one());
            let out = operator_a(&pair, &chi, &f, 2, &table).unwrap();
            let deg: u32 = mono.iter().sum();
            // diagonal coefficient 1
            assert!((out.value.coeff(&mono) - 1.0).abs() < 1e-12);
            // everything else strictly lower degree
            for (e, c) in &out.value.terms {
                if *e != mono && *c != 0.0 {
                    assert!(e.iter().sum::<u32>() < deg, "{e:?} in image of {mono:?}");
                }
            }
        }
    }

    /// The kernel identification: 𝒜(g ⋆ 𝔸⁻¹(k)) ≈ 0 for low-degree g, with
    /// the exact deformed product and Monte-Carlo assembly weights.
    #[test]
    fn kernel_identity_aside() {
        let pair = sl2_cartan();
        let alg = &pair.adapted;
        let chi = vec![Rat::zero()];
        let mut table = WeightTable::new();
        populate_weights(
            &mut table,
            &pair,
            OperatorModel::LeftModule,
            &chi,
            1,
            400_000,
            911,
        )
        .unwrap();
        // 𝔸⁻¹(k) = k − δ(k) + ¼tr(ad k); for sl2 both characters vanish
        let k = PolyElement::variable(3, 2);
        for g in [PolyElement::one(3), PolyElement::variable(3, 0)] {
            let u = star_a(alg, &g, &k, 4).unwrap();
            let out = operator_a(&pair, &chi, &u, 1, &table).unwrap();
            // compare the degree-≥1 part against zero within the budget
            // (degree-0 needs the next truncation order)
            let high = out.value.degree_at_least(1);
            let worst = high
                .terms
                .values()
                .fold(0.0f64, |m, v| m.max(v.abs()));
            let budget = out
                .error_budget
                .terms
                .values()
                .fold(0.0f64, |m, v| m.max(*v));
            assert!(
                worst < 5.0 * budget + 1e-9,
                "kernel residual {worst} vs budget {budget} ({:?})",
                out.value
            );
        }
    }

    /// Truncated exponential identity with Monte-Carlo k-wheel weights: both
    /// cycle colorings measure ≈ 1/48, the √q order-2 coefficient.
    #[test]
    fn sym_k_lemma_with_mc_weights() {
        let pair = sl2_cartan();
        let wk = k_wheel_weight(false, 400_000, 77).unwrap();
        let wp = k_wheel_weight(true, 400_000, 78).unwrap();
        let x = [0.0, 0.0, 0.2]; // t·(e−f)-direction in adapted coordinates
        let resid = sym_k_lemma_residual(&pair, wk.value, wp.value, &x).unwrap();
        let ad = pair.adapted.adjoint_matrix_f64(&x);
        let sq = ad.mul(&ad);
        let tr_p: f64 = (0..2).map(|i| sq.get(i, i)).sum();
        let tr_k: f64 = (2..3).map(|i| sq.get(i, i)).sum();
        let budget = 5.0
            * 0.5
            * ((wk.std_error * tr_k).powi(2) + (wp.std_error * tr_p).powi(2)).sqrt();
        assert!(
            resid < budget,
            "residual {resid} vs budget {budget} (wk = {}, wp = {})",
            wk.value,
            wp.value
        );
        // the raw integrals approach twice the exact 1/48 coefficient
        assert!((wk.value - 1.0 / 24.0).abs() < 6.0 * wk.std_error.max(1e-3));
        assert!((wp.value - 1.0 / 24.0).abs() < 6.0 * wp.std_error.max(1e-3));
    }

    /// Commutativity of the order-2 product on invariants within the budget.
    #[test]
    fn cf_product_antisymmetric_part_small() {
        let pair = sl2_cartan();
        let chi = vec![Rat::zero()];
        let mut table = WeightTable::new();
        populate_weights(
            &mut table,
            &pair,
            OperatorModel::AlgebraB,
            &chi,
            2,
            150_000,
            313,
        )
        .unwrap();
        let r2 = invariant_quadric(&pair);
        let f = r2.mul(&r2); // r⁴
        let ab = cf_product_order2(&pair, &chi, &r2, &f, &table).unwrap();
        let ba = cf_product_order2(&pair, &chi, &f, &r2, &table).unwrap();
        let mut anti = ab.value.clone();
        anti.add_scaled(&ba.value, -1.0);
        let worst = anti.terms.values().fold(0.0f64, |m, v| m.max(v.abs()));
        let budget = ab
            .error_budget
            .terms
            .values()
            .chain(ba.error_budget.terms.values())
            .fold(0.0f64, |m, v| m.max(*v));
        assert!(
            worst < 5.0 * budget + 1e-9,
            "antisymmetric part {worst} vs budget {budget}"
        );
    }
}

#[cfg(test)]
mod mc_shift_tests {
    use super::*;
    use crate::liealg::LieAlgebra;
    use crate::ratlin::{rat, rat_to_f64, RatMat};

    /// End-to-end quantum shift with measured weights: on the solvable pair
    /// [a, b] = b the assembled 𝒜(a) at truncation 1 reproduces
    /// δ(a) − ¼tr(ad a) = ¼ within the propagated budget.
    #[test]
    fn quantum_shift_with_measured_weights() {
        let mut t = vec![vec![vec![Rat::zero(); 2]; 2]; 2];
        t[0][1][1] = rat(1);
        t[1][0][1] = rat(-1);
        let alg = LieAlgebra::new(vec!["a".into(), "b".into()], t).unwrap();
        let sigma = RatMat::from_rows(vec![vec![rat(1), rat(0)], vec![rat(0), rat(-1)]]);
        let pair = SymmetricPair::new(alg, sigma).unwrap();
        let chi = vec![Rat::zero()];
        let mut table = WeightTable::new();
        populate_weights(
            &mut table,
            &pair,
            OperatorModel::LeftModule,
            &chi,
            1,
            400_000,
            41,
        )
        .unwrap();
        let a_fn = PolyElement::variable(2, 1); // the 𝔨-coordinate
        let out = operator_a(&pair, &chi, &a_fn, 1, &table).unwrap();
        let delta = pair.delta_character();
        let quarter = pair.quarter_trace_character();
        let expect = rat_to_f64(&delta.values[0]) - rat_to_f64(&quarter.values[0]);
        let got = out.value.coeff(&[0, 0]);
        let budget = out
            .error_budget
            .terms
            .values()
            .fold(0.0f64, |m, v| m.max(*v));
        assert!(
            (got - expect).abs() < 5.0 * budget,
            "shift {got} vs {expect} (budget {budget})"
        );
        assert!((expect - 0.25).abs() < 1e-15);
    }
}
