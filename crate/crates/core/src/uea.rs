//! PBW-ordered universal enveloping algebra over exact rationals.
//!
//! Elements of S(𝔤) are exponent-vector polynomials ([`PolyElement`]);
//! elements of U(𝔤) are combinations of PBW words, i.e. non-decreasing index
//! sequences in the fixed basis order ([`UEAElement`]). The basis order is
//! the adapted order of a [`SymmetricPair`]: 𝔭-letters first, 𝔨-letters
//! last, so ideal reduction can always strip 𝔨-letters from the right.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::liealg::{LieAlgebra, SymmetricPair};
use crate::ratlin::{rat, Rat};
use crate::{Error, Result};

/// Exponent vector over the algebra basis.
pub type Expo = Vec<u32>;

/// Finitely supported polynomial, no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyElement {
    pub dim: usize,
    pub terms: BTreeMap<Expo, Rat>,
}

impl PolyElement {
    pub fn zero(dim: usize) -> Self {
        PolyElement {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rat) -> Self {
        let mut p = PolyElement::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    pub fn one(dim: usize) -> Self {
        PolyElement::constant(dim, Rat::one())
    }

    pub fn variable(dim: usize, i: usize) -> Self {
        let mut e = vec![0u32; dim];
        e[i] = 1;
        let mut p = PolyElement::zero(dim);
        p.add_term(e, Rat::one());
        p
    }

    pub fn monomial(dim: usize, expo: Expo, c: Rat) -> Self {
        assert_eq!(expo.len(), dim);
        let mut p = PolyElement::zero(dim);
        p.add_term(expo, c);
        p
    }

    pub fn add_term(&mut self, expo: Expo, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(expo.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&expo);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &PolyElement) -> PolyElement {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PolyElement) -> PolyElement {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> PolyElement {
        if c.is_zero() {
            return PolyElement::zero(self.dim);
        }
        let mut out = PolyElement::zero(self.dim);
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &PolyElement) -> PolyElement {
        let mut out = PolyElement::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Expo = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Truncate away all terms of total degree above `n`.
    pub fn truncate(&self, n: u32) -> PolyElement {
        let mut out = PolyElement::zero(self.dim);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() <= n {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Homogeneous part of total degree `n`.
    pub fn homogeneous_part(&self, n: u32) -> PolyElement {
        let mut out = PolyElement::zero(self.dim);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == n {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// True if every variable with nonzero exponent lies in `range`.
    pub fn supported_on(&self, range: std::ops::Range<usize>) -> bool {
        self.terms.keys().all(|e| {
            e.iter()
                .enumerate()
                .all(|(i, &p)| p == 0 || range.contains(&i))
        })
    }

    pub fn coeff(&self, expo: &[u32]) -> Rat {
        self.terms.get(expo).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = crate::ratlin::rat_to_f64(c);
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    t *= x[i];
                }
            }
            acc += t;
        }
        acc
    }
}

/// Element of U(𝔤) in the PBW word basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UEAElement {
    pub dim: usize,
    /// PBW words (non-decreasing index sequences) with coefficients.
    pub terms: BTreeMap<Vec<usize>, Rat>,
}

impl UEAElement {
    pub fn zero(dim: usize) -> Self {
        UEAElement {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        let mut u = UEAElement::zero(dim);
        u.terms.insert(Vec::new(), Rat::one());
        u
    }

    pub fn add_term(&mut self, word: Vec<usize>, c: Rat) {
        if c.is_zero() {
            return;
        }
        debug_assert!(word.windows(2).all(|w| w[0] <= w[1]), "word not PBW-ordered");
        let entry = self.terms.entry(word.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn add(&self, other: &UEAElement) -> UEAElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &UEAElement) -> UEAElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> UEAElement {
        let mut out = UEAElement::zero(self.dim);
        if c.is_zero() {
            return out;
        }
        for (w, v) in &self.terms {
            out.terms.insert(w.clone(), v * c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }
}

/// Rewrite an arbitrary index word into PBW normal form.
fn normalize_word(alg: &LieAlgebra, word: &[usize], coeff: &Rat, out: &mut UEAElement) {
    // find the first descent
    let pos = word.windows(2).position(|w| w[0] > w[1]);
    match pos {
        None => out.add_term(word.to_vec(), coeff.clone()),
        Some(p) => {
            let (a, b) = (word[p], word[p + 1]);
            // x_a x_b = x_b x_a + [x_a, x_b]
            let mut swapped = word.to_vec();
            swapped.swap(p, p + 1);
            normalize_word(alg, &swapped, coeff, out);
            for k in 0..alg.dim {
                let c = alg.structure_constant(a, b, k);
                if c.is_zero() {
                    continue;
                }
                let mut shorter = Vec::with_capacity(word.len() - 1);
                shorter.extend_from_slice(&word[..p]);
                shorter.push(k);
                shorter.extend_from_slice(&word[p + 2..]);
                normalize_word(alg, &shorter, &(coeff * c), out);
            }
        }
    }
}

/// Product in U(𝔤), exact PBW rewriting.
pub fn uea_multiply(alg: &LieAlgebra, u: &UEAElement, v: &UEAElement) -> UEAElement {
    let mut out = UEAElement::zero(alg.dim);
    for (wu, cu) in &u.terms {
        for (wv, cv) in &v.terms {
            let mut word = wu.clone();
            word.extend_from_slice(wv);
            normalize_word(alg, &word, &(cu * cv), &mut out);
        }
    }
    out
}

fn expo_to_word(expo: &[u32]) -> Vec<usize> {
    let mut word = Vec::new();
    for (i, &p) in expo.iter().enumerate() {
        for _ in 0..p {
            word.push(i);
        }
    }
    word
}

fn word_to_expo(dim: usize, word: &[usize]) -> Expo {
    let mut e = vec![0u32; dim];
    for &i in word {
        e[i] += 1;
    }
    e
}

/// All distinct permutations of a sorted word (lexicographic successor walk).
fn distinct_permutations(word: &[usize]) -> Vec<Vec<usize>> {
    let mut w = word.to_vec();
    w.sort_unstable();
    let mut out = vec![w.clone()];
    // next_permutation walk
    while let Some(i) = (0..w.len().saturating_sub(1)).rev().find(|&i| w[i] < w[i + 1]) {
        let j = (i + 1..w.len()).rev().find(|&j| w[j] > w[i]).unwrap();
        w.swap(i, j);
        w[i + 1..].reverse();
        out.push(w.clone());
    }
    out
}

/// PBW symmetrization β: S(𝔤) → U(𝔤); monomials map to averaged products.
pub fn pbw_symmetrize(alg: &LieAlgebra, f: &PolyElement) -> UEAElement {
    let mut out = UEAElement::zero(alg.dim);
    for (expo, c) in &f.terms {
        let word = expo_to_word(expo);
        if word.len() <= 1 {
            out.add_term(word, c.clone());
            continue;
        }
        let perms = distinct_permutations(&word);
        // distinct permutations each stand for (n!/count) equal orderings, so
        // the average over all n! orderings is the average over the set.
        let scale = c / rat(perms.len() as i64);
        for p in perms {
            normalize_word(alg, &p, &scale, &mut out);
        }
    }
    out
}

/// β⁻¹ by top-degree peeling: subtract β of the top symbol and recurse.
pub fn pbw_symbol(alg: &LieAlgebra, u: &UEAElement) -> PolyElement {
    let mut rest = u.clone();
    let mut out = PolyElement::zero(alg.dim);
    while !rest.is_zero() {
        let d = rest.max_word_len();
        let mut top = PolyElement::zero(alg.dim);
        for (w, c) in &rest.terms {
            if w.len() == d {
                top.add_term(word_to_expo(alg.dim, w), c.clone());
            }
        }
        out = out.add(&top);
        rest = rest.sub(&pbw_symmetrize(alg, &top));
        debug_assert!(rest.is_zero() || rest.max_word_len() < d);
    }
    out
}

/// Projection of U(𝔤) onto S(𝔭) modulo the left ideal U(𝔤)·𝔨^{−χ}.
///
/// Everything is expressed in the adapted basis: indices `0..p_dim` are
/// 𝔭-letters, the rest 𝔨-letters; `chi` holds χ on the 𝔨-basis. The unique
/// `f ∈ S(𝔭)` with `u − β(f) ∈ U(𝔤)·𝔨^{−χ}` is returned.
pub fn pbw_project(
    alg: &LieAlgebra,
    p_dim: usize,
    chi: &[Rat],
    u: &UEAElement,
) -> Result<PolyElement> {
    if chi.len() != alg.dim - p_dim {
        return Err(Error::input("character length does not match the k-part"));
    }
    let mut rest = u.clone();
    let mut out = PolyElement::zero(alg.dim);
    loop {
        // strip rightmost 𝔨-letters: w·k ≡ χ(k)·w  (mod U(𝔤)·𝔨^{−χ})
        let mut reduced = UEAElement::zero(alg.dim);
        for (w, c) in &rest.terms {
            let mut word = w.clone();
            let mut coeff = c.clone();
            while let Some(&last) = word.last() {
                if last < p_dim || coeff.is_zero() {
                    break;
                }
                word.pop();
                coeff *= &chi[last - p_dim];
            }
            reduced.add_term(word, coeff);
        }
        rest = reduced;
        if rest.is_zero() {
            break;
        }
        let d = rest.max_word_len();
        let mut top = PolyElement::zero(alg.dim);
        for (w, c) in &rest.terms {
            if w.len() == d {
                debug_assert!(w.iter().all(|&i| i < p_dim));
                top.add_term(word_to_expo(alg.dim, w), c.clone());
            }
        }
        out = out.add(&top);
        rest = rest.sub(&pbw_symmetrize(alg, &top));
        if rest.is_zero() {
            break;
        }
    }
    Ok(out)
}

/// Rouvière pairing f₁ # f₂ on S(𝔭): project β(f₁)·β(f₂) back to S(𝔭).
pub fn rouviere_product(
    alg: &LieAlgebra,
    p_dim: usize,
    chi: &[Rat],
    f1: &PolyElement,
    f2: &PolyElement,
) -> Result<PolyElement> {
    let prod = uea_multiply(alg, &pbw_symmetrize(alg, f1), &pbw_symmetrize(alg, f2));
    pbw_project(alg, p_dim, chi, &prod)
}

/// Polynomial differential operator with constant coefficients, truncated by
/// total order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstCoeffOperator {
    pub order: u32,
    pub dim: usize,
    pub terms: BTreeMap<Expo, Rat>,
}

impl ConstCoeffOperator {
    pub fn identity(dim: usize, order: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0u32; dim], Rat::one());
        ConstCoeffOperator { order, dim, terms }
    }

    /// Apply to a polynomial. Errors out if the input degree exceeds the
    /// truncation order, so nothing is ever silently dropped.
    pub fn apply(&self, f: &PolyElement) -> Result<PolyElement> {
        if f.degree() > self.order {
            return Err(Error::Truncation(format!(
                "operator of order {} applied to degree {}",
                self.order,
                f.degree()
            )));
        }
        let mut out = PolyElement::zero(self.dim);
        for (beta, c) in &self.terms {
            for (alpha, v) in &f.terms {
                if beta.iter().zip(alpha).any(|(b, a)| b > a) {
                    continue;
                }
                let mut coeff = c * v;
                let mut expo = alpha.clone();
                for i in 0..self.dim {
                    for _ in 0..beta[i] {
                        coeff *= rat(expo[i] as i64);
                        expo[i] -= 1;
                    }
                }
                out.add_term(expo, coeff);
            }
        }
        Ok(out)
    }

    fn from_symbol(symbol: PolyElement, order: u32) -> Self {
        ConstCoeffOperator {
            order,
            dim: symbol.dim,
            terms: symbol.truncate(order).terms,
        }
    }
}

/// Coefficients of log(sinh(u/2)/(u/2)) resp. log(sinh(u)/u) as a power
/// series in u, exact, up to degree `n` inclusive.
pub(crate) fn log_sinh_ratio_series(n: u32, half_argument: bool) -> Vec<Rat> {
    // s(u) = sinh(au)/(au) = Σ_k (au)^{2k} / (2k+1)!, a = 1/2 or 1
    let len = (n + 1) as usize;
    let mut s = vec![Rat::zero(); len];
    let mut fact = Rat::one();
    let a = if half_argument {
        Rat::new(1.into(), 2.into())
    } else {
        Rat::one()
    };
    let mut apow = Rat::one();
    for m in 0..=n {
        if m > 0 {
            fact *= rat(m as i64);
            apow *= &a;
        }
        if m % 2 == 0 {
            // coefficient of u^m in sinh(au)/(au) is a^m / (m+1)!
            s[m as usize] = apow.clone() / (&fact * rat((m + 1) as i64));
        }
    }
    // log(s) with s(0)=1: log(1+e) = Σ_m (−1)^{m+1} e^m / m
    let mut e = s;
    e[0] = Rat::zero();
    let mut log = vec![Rat::zero(); len];
    let mut pow = e.clone();
    let mut m = 1u32;
    while m <= n && !pow.iter().all(Zero::is_zero) {
        let sign = if m % 2 == 1 { Rat::one() } else { -Rat::one() };
        for (i, c) in pow.iter().enumerate() {
            if !c.is_zero() {
                log[i] += c * &sign / rat(m as i64);
            }
        }
        // pow *= e, truncated
        let mut next = vec![Rat::zero(); len];
        for (i, a1) in pow.iter().enumerate() {
            if a1.is_zero() {
                continue;
            }
            for (j, a2) in e.iter().enumerate() {
                if i + j < len && !a2.is_zero() {
                    next[i + j] += a1 * a2;
                }
            }
        }
        pow = next;
        m += 1;
    }
    log
}

/// tr(ad(x)^m) restricted to `trace_range`, as an exact polynomial in the
/// coordinates of x (which range over `var_range` only).
fn trace_ad_power_poly(
    alg: &LieAlgebra,
    m: u32,
    trace_range: std::ops::Range<usize>,
    var_range: std::ops::Range<usize>,
) -> PolyElement {
    let dim = alg.dim;
    // symbolic ad(x): entry (i,j) = Σ_v x_v c_{v j}^i
    let mut ad = vec![vec![PolyElement::zero(dim); dim]; dim];
    for (i, row) in ad.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut p = PolyElement::zero(dim);
            for v in var_range.clone() {
                let c = alg.structure_constant(v, j, i);
                if !c.is_zero() {
                    let mut e = vec![0u32; dim];
                    e[v] = 1;
                    p.add_term(e, c.clone());
                }
            }
            *cell = p;
        }
    }
    // power and trace
    let mut pow = ad.clone();
    for _ in 1..m {
        let mut next = vec![vec![PolyElement::zero(dim); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = PolyElement::zero(dim);
                for k in 0..dim {
                    if pow[i][k].is_zero() || ad[k][j].is_zero() {
                        continue;
                    }
                    acc = acc.add(&pow[i][k].mul(&ad[k][j]));
                }
                next[i][j] = acc;
            }
        }
        pow = next;
    }
    let mut tr = PolyElement::zero(dim);
    for i in trace_range {
        tr = tr.add(&pow[i][i]);
    }
    tr
}

fn exp_poly(p: &PolyElement, order: u32) -> PolyElement {
    // p has no constant term
    let mut out = PolyElement::one(p.dim);
    let mut pow = PolyElement::one(p.dim);
    let mut fact = Rat::one();
    for m in 1..=order {
        pow = pow.mul(p).truncate(order);
        fact *= rat(m as i64);
        if pow.is_zero() {
            break;
        }
        out = out.add(&pow.scale(&(Rat::one() / &fact)));
    }
    out
}

/// Which Duflo-type symbol to expand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DufloSymbol {
    /// √q with q(x) = det_𝔤 (sinh(ad x / 2) / (ad x / 2)).
    SqrtQ,
    /// 1/√q.
    SqrtQInv,
    /// √j with j(x) = det_𝔭 (sinh(ad x) / ad x) for x ∈ 𝔭.
    SqrtJ,
    /// 1/√j.
    SqrtJInv,
}

/// Truncated expansion of √q (on a whole algebra) as a constant-coefficient
/// operator, exact.
pub fn sqrt_q_operator(alg: &LieAlgebra, order: u32, inverse: bool) -> ConstCoeffOperator {
    let log = log_sinh_ratio_series(order, true);
    let mut exponent = PolyElement::zero(alg.dim);
    let mut m = 2u32;
    while m <= order {
        if !log[m as usize].is_zero() {
            let trace = trace_ad_power_poly(alg, m, 0..alg.dim, 0..alg.dim);
            let half = &log[m as usize] / rat(2);
            let signed = if inverse { -half } else { half };
            exponent = exponent.add(&trace.scale(&signed));
        }
        m += 1;
    }
    ConstCoeffOperator::from_symbol(exp_poly(&exponent, order), order)
}

/// Truncated expansion of √j for a symmetric pair, exact; the symbol lives
/// on the 𝔭-coordinates of the adapted basis.
pub fn sqrt_j_operator(pair: &SymmetricPair, order: u32, inverse: bool) -> ConstCoeffOperator {
    let alg = &pair.adapted;
    let log = log_sinh_ratio_series(order, false);
    let mut exponent = PolyElement::zero(alg.dim);
    let mut m = 2u32;
    while m <= order {
        if !log[m as usize].is_zero() {
            let trace = trace_ad_power_poly(alg, m, pair.p_indices(), pair.p_indices());
            let half = &log[m as usize] / rat(2);
            let signed = if inverse { -half } else { half };
            exponent = exponent.add(&trace.scale(&signed));
        }
        m += 1;
    }
    ConstCoeffOperator::from_symbol(exp_poly(&exponent, order), order)
}

/// Dispatcher over [`DufloSymbol`], working in the pair's adapted basis.
pub fn build_duflo_operator(
    pair: &SymmetricPair,
    symbol: DufloSymbol,
    order: u32,
) -> ConstCoeffOperator {
    match symbol {
        DufloSymbol::SqrtQ => sqrt_q_operator(&pair.adapted, order, false),
        DufloSymbol::SqrtQInv => sqrt_q_operator(&pair.adapted, order, true),
        DufloSymbol::SqrtJ => sqrt_j_operator(pair, order, false),
        DufloSymbol::SqrtJInv => sqrt_j_operator(pair, order, true),
    }
}

/// The deformed product ⋆ on S(𝔤) defined through the enveloping algebra:
/// f₁ ⋆ f₂ = ∂_√q⁻¹ β⁻¹( β(∂_√q f₁) · β(∂_√q f₂) ), exact at truncation
/// order `n` provided deg f₁ + deg f₂ ≤ n.
pub fn star_a(alg: &LieAlgebra, f1: &PolyElement, f2: &PolyElement, n: u32) -> Result<PolyElement> {
    if f1.degree() + f2.degree() > n {
        return Err(Error::Truncation(format!(
            "star product of degrees {} and {} needs order ≥ {}",
            f1.degree(),
            f2.degree(),
            f1.degree() + f2.degree()
        )));
    }
    let dq = sqrt_q_operator(alg, n, false);
    let dq_inv = sqrt_q_operator(alg, n, true);
    let u1 = pbw_symmetrize(alg, &dq.apply(f1)?);
    let u2 = pbw_symmetrize(alg, &dq.apply(f2)?);
    let prod = uea_multiply(alg, &u1, &u2);
    dq_inv.apply(&pbw_symbol(alg, &prod))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::LieAlgebra;
    use crate::ratlin::{ratio, RatMat};

    fn sl2_cartan() -> SymmetricPair {
        let alg = LieAlgebra::sl2();
        let sigma = RatMat::from_rows(vec![
            vec![rat(0), rat(0), rat(-1)],
            vec![rat(0), rat(-1), rat(0)],
            vec![rat(-1), rat(0), rat(0)],
        ]);
        SymmetricPair::new(alg, sigma).unwrap()
    }

    #[test]
    fn symmetrize_degree_one_and_two() {
        let alg = LieAlgebra::sl2(); // basis order e < h < f
        let x = PolyElement::variable(3, 1);
        let bx = pbw_symmetrize(&alg, &x);
        assert_eq!(bx.terms.len(), 1);
        assert_eq!(bx.terms[&vec![1usize]], Rat::one());

        // β(h·e) = ½(he + eh) = eh + ½[h,e] = eh + e
        let he = PolyElement::monomial(3, vec![1, 1, 0], Rat::one());
        let b = pbw_symmetrize(&alg, &he);
        assert_eq!(b.terms[&vec![0usize, 1]], Rat::one());
        assert_eq!(b.terms[&vec![0usize]], Rat::one());

        // β(h²) = h·h, already ordered
        let h2 = PolyElement::monomial(3, vec![0, 2, 0], Rat::one());
        let b2 = pbw_symmetrize(&alg, &h2);
        assert_eq!(b2.terms.len(), 1);
        assert_eq!(b2.terms[&vec![1usize, 1]], Rat::one());
    }

    #[test]
    fn uea_product_rewrites_single_commutator() {
        let alg = LieAlgebra::sl2(); // e=0 < h=1 < f=2
        let mut f = UEAElement::zero(3);
        f.add_term(vec![2], Rat::one());
        let mut e = UEAElement::zero(3);
        e.add_term(vec![0], Rat::one());
        // f·e = e·f − h
        let prod = uea_multiply(&alg, &f, &e);
        assert_eq!(prod.terms[&vec![0usize, 2]], Rat::one());
        assert_eq!(prod.terms[&vec![1usize]], -Rat::one());
        // e·f stays ordered
        let prod2 = uea_multiply(&alg, &e, &f);
        assert_eq!(prod2.terms.len(), 1);

        // 1·u = u
        let one = UEAElement::one(3);
        assert_eq!(uea_multiply(&alg, &one, &prod), prod);
    }

    #[test]
    fn uea_product_is_associative() {
        let alg = LieAlgebra::sl2();
        let mut rng = crate::numeric::Rng::seeded(11);
        let rand_elt = |rng: &mut crate::numeric::Rng| {
            let mut u = UEAElement::zero(3);
            for w in [
                vec![],
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![1, 2],
                vec![0, 1, 2],
            ] {
                let c = rat((rng.next_u64() % 5) as i64 - 2);
                u.add_term(w, c);
            }
            u
        };
        for _ in 0..8 {
            let (a, b, c) = (rand_elt(&mut rng), rand_elt(&mut rng), rand_elt(&mut rng));
            let lhs = uea_multiply(&alg, &uea_multiply(&alg, &a, &b), &c);
            let rhs = uea_multiply(&alg, &a, &uea_multiply(&alg, &b, &c));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn symbol_inverts_symmetrization() {
        let alg = LieAlgebra::sl2();
        let mut rng = crate::numeric::Rng::seeded(5);
        for _ in 0..10 {
            let mut f = PolyElement::zero(3);
            for _ in 0..4 {
                let e = vec![
                    (rng.next_u64() % 3) as u32,
                    (rng.next_u64() % 2) as u32,
                    (rng.next_u64() % 2) as u32,
                ];
                f.add_term(e, rat((rng.next_u64() % 9) as i64 - 4));
            }
            let back = pbw_symbol(&alg, &pbw_symmetrize(&alg, &f));
            assert_eq!(back, f);
        }
    }

    #[test]
    fn project_kills_shifted_k_and_fixes_p() {
        let pair = sl2_cartan();
        let alg = &pair.adapted;
        let chi = vec![ratio(3, 7)]; // arbitrary test character value on 𝔨
        // k − χ(k) ↦ 0
        let mut u = UEAElement::zero(3);
        u.add_term(vec![2], Rat::one()); // the 𝔨-letter
        u.add_term(vec![], -chi[0].clone());
        let p = pbw_project(alg, 2, &chi, &u).unwrap();
        assert!(p.is_zero());
        // β(p-monomial) ↦ that monomial
        let mono = PolyElement::monomial(3, vec![2, 1, 0], rat(5));
        let proj = pbw_project(alg, 2, &chi, &pbw_symmetrize(alg, &mono)).unwrap();
        assert_eq!(proj, mono);
    }

    #[test]
    fn project_agrees_with_linear_solve_oracle() {
        // Project β-free word p1·k0 ∈ U(sl2) with χ = 0 and compare against a
        // dense linear solve in the degree-≤2 PBW basis.
        let pair = sl2_cartan();
        let alg = &pair.adapted;
        let chi = vec![Rat::zero()];
        let mut u = UEAElement::zero(3);
        u.add_term(vec![1, 2], Rat::one());
        let fast = pbw_project(alg, 2, &chi, &u).unwrap();

        // Oracle: write u = β(f) + Σ u_w · (k − χ(k)) over PBW words w of
        // degree ≤ 1 and p-monomials f of degree ≤ 2; solve exactly.
        let p_monos: Vec<Expo> = vec![
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![2, 0, 0],
            vec![1, 1, 0],
            vec![0, 2, 0],
        ];
        let lows: Vec<Vec<usize>> = vec![vec![], vec![0], vec![1], vec![2]];
        let mut columns: Vec<UEAElement> = Vec::new();
        for m in &p_monos {
            columns.push(pbw_symmetrize(
                alg,
                &PolyElement::monomial(3, m.clone(), Rat::one()),
            ));
        }
        for w in &lows {
            // w·(k − χ(k)) with k the 𝔨-basis letter (index 2)
            let mut gen = UEAElement::zero(3);
            gen.add_term(w.clone(), Rat::one());
            let mut k = UEAElement::zero(3);
            k.add_term(vec![2], Rat::one());
            k.add_term(vec![], -chi[0].clone());
            columns.push(uea_multiply(alg, &gen, &k));
        }
        let mut words: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
        for c in &columns {
            words.extend(c.terms.keys().cloned());
        }
        words.extend(u.terms.keys().cloned());
        let words: Vec<_> = words.into_iter().collect();
        let mut mat = RatMat::zeros(words.len(), columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, w) in words.iter().enumerate() {
                if let Some(v) = c.terms.get(w) {
                    mat[(i, j)] = v.clone();
                }
            }
        }
        let rhs: Vec<Rat> = words
            .iter()
            .map(|w| u.terms.get(w).cloned().unwrap_or_else(Rat::zero))
            .collect();
        let sol = mat.solve(&rhs).expect("decomposition must exist");
        let mut oracle = PolyElement::zero(3);
        for (m, c) in p_monos.iter().zip(&sol) {
            oracle.add_term(m.clone(), c.clone());
        }
        assert_eq!(fast, oracle);
    }

    #[test]
    fn rouviere_unit_and_abelian() {
        let pair = sl2_cartan();
        let alg = &pair.adapted;
        let chi = vec![Rat::zero()];
        let one = PolyElement::one(3);
        let f = PolyElement::monomial(3, vec![1, 1, 0], rat(2));
        assert_eq!(rouviere_product(alg, 2, &chi, &one, &f).unwrap(), f);

        // abelian pair: # is the plain commutative product
        let ab = LieAlgebra::abelian(2);
        let pairb = SymmetricPair::new(
            ab,
            RatMat::from_rows(vec![vec![rat(-1), rat(0)], vec![rat(0), rat(1)]]),
        )
        .unwrap();
        let a = PolyElement::monomial(2, vec![2, 0], rat(1));
        let b = PolyElement::monomial(2, vec![1, 0], rat(3));
        let prod = rouviere_product(&pairb.adapted, 1, &[Rat::zero()], &a, &b).unwrap();
        assert_eq!(prod, a.mul(&b));
    }

    #[test]
    fn duflo_log_sqrt_q_coefficient() {
        // sl2: log q(t·h) = 2 log(sinh t / t); t² coefficient of log √q along
        // the h-direction is 1/6.
        let alg = LieAlgebra::sl2();
        let log = log_sinh_ratio_series(4, true);
        assert_eq!(log[2], ratio(1, 24));
        assert_eq!(log[4], ratio(-1, 2880));
        let tr2 = trace_ad_power_poly(&alg, 2, 0..3, 0..3);
        // coefficient of h² in tr_𝔤(ad²) is 8, so log √q gets (1/24)·8/2·h² = h²/6
        assert_eq!(tr2.coeff(&[0, 2, 0]), rat(8));
    }

    #[test]
    fn duflo_operator_truncations() {
        let pair = sl2_cartan();
        // truncation 1: no degree-1 term, so the operator is the identity
        let op1 = build_duflo_operator(&pair, DufloSymbol::SqrtQ, 1);
        assert_eq!(op1.terms.len(), 1);
        assert_eq!(op1.terms[&vec![0u32, 0, 0]], Rat::one());
        // abelian: identity at every order
        let ab = LieAlgebra::abelian(2);
        let op = sqrt_q_operator(&ab, 6, false);
        assert_eq!(op.terms.len(), 1);
    }

    #[test]
    fn star_a_unit_and_bracket() {
        let alg = LieAlgebra::sl2();
        let one = PolyElement::one(3);
        let e = PolyElement::variable(3, 0);
        let f = PolyElement::variable(3, 2);
        assert_eq!(star_a(&alg, &one, &e, 4).unwrap(), e);
        // x ⋆ y − y ⋆ x = [x, y]
        let ef = star_a(&alg, &e, &f, 4).unwrap();
        let fe = star_a(&alg, &f, &e, 4).unwrap();
        let comm = ef.sub(&fe);
        let h = PolyElement::variable(3, 1);
        assert_eq!(comm, h); // [e,f] = h
    }

    #[test]
    fn star_a_truncation_error() {
        let alg = LieAlgebra::sl2();
        let e2 = PolyElement::monomial(3, vec![2, 0, 0], Rat::one());
        assert!(star_a(&alg, &e2, &e2, 3).is_err());
    }

    #[test]
    fn star_a_is_associative_on_low_degrees() {
        let alg = LieAlgebra::sl2();
        let mut rng = crate::numeric::Rng::seeded(3);
        let rand_poly = |rng: &mut crate::numeric::Rng| {
            let mut f = PolyElement::zero(3);
            for e in [
                vec![0u32, 0, 0],
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![1, 1, 0],
                vec![0, 0, 2],
            ] {
                f.add_term(e, rat((rng.next_u64() % 5) as i64 - 2));
            }
            f
        };
        for _ in 0..3 {
            let (a, b, c) = (rand_poly(&mut rng), rand_poly(&mut rng), rand_poly(&mut rng));
            let lhs = star_a(&alg, &star_a(&alg, &a, &b, 8).unwrap(), &c, 8).unwrap();
            let rhs = star_a(&alg, &a, &star_a(&alg, &b, &c, 8).unwrap(), 8).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}


/// JSON wire format for polynomials and enveloping-algebra elements: maps
/// from comma-separated index sequences to rational strings.
impl PolyElement {
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (e, c) in &self.terms {
            let word: Vec<String> = expo_to_word(e).iter().map(usize::to_string).collect();
            map.insert(word.join(","), crate::ratlin::format_rat(c).into());
        }
        serde_json::Value::Object(map)
    }

    pub fn from_json(dim: usize, v: &serde_json::Value) -> crate::Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| crate::Error::input("expected a JSON object"))?;
        let mut out = PolyElement::zero(dim);
        for (key, val) in obj {
            let mut expo = vec![0u32; dim];
            for part in key.split(',').filter(|s| !s.is_empty()) {
                let idx: usize = part
                    .trim()
                    .parse()
                    .map_err(|_| crate::Error::input(format!("bad index {part:?}")))?;
                if idx >= dim {
                    return Err(crate::Error::input("index out of range"));
                }
                expo[idx] += 1;
            }
            let c = crate::ratlin::parse_rat(
                val.as_str()
                    .ok_or_else(|| crate::Error::input("coefficient must be a string"))?,
            )?;
            out.add_term(expo, c);
        }
        Ok(out)
    }
}

impl UEAElement {
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (w, c) in &self.terms {
            let word: Vec<String> = w.iter().map(usize::to_string).collect();
            map.insert(word.join(","), crate::ratlin::format_rat(c).into());
        }
        serde_json::Value::Object(map)
    }
}

#[cfg(test)]
mod json_tests {
    use super::*;

    #[test]
    fn poly_json_roundtrip() {
        let alg = LieAlgebra::sl2();
        let mut f = PolyElement::zero(3);
        f.add_term(vec![2, 1, 0], crate::ratlin::ratio(3, 7));
        f.add_term(vec![0, 0, 1], rat(-2));
        let v = f.to_json();
        let back = PolyElement::from_json(3, &v).unwrap();
        assert_eq!(f, back);
        let u = pbw_symmetrize(&alg, &f);
        let uj = u.to_json();
        assert!(uj.as_object().unwrap().len() == u.terms.len());
    }
}
