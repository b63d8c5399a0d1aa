//! Truncated free-Lie-algebra series in two generators: the BCH series, its
//! symmetric-pair variant, the P–K factorization, and the scalar densities
//! built from q and j.
//!
//! Series are stored on the Lyndon-word basis (alphabet x = 0 < y = 1,
//! standard bracketing), which is a Hall basis; coefficients are exact
//! rationals. Numeric evaluation happens against a concrete Lie algebra in
//! f64 coordinates.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::liealg::{LieAlgebra, SymmetricPair};
use crate::numeric::Mat;
use crate::ratlin::{rat, rat_to_f64, Rat, RatMat};
use crate::{Error, Result};

/// Truncated series in the free associative algebra on two generators.
#[derive(Debug, Clone, PartialEq, Eq)]
struct FreeAssoc {
    order: usize,
    terms: BTreeMap<Vec<u8>, Rat>,
}

impl FreeAssoc {
    fn zero(order: usize) -> Self {
        FreeAssoc {
            order,
            terms: BTreeMap::new(),
        }
    }

    fn one(order: usize) -> Self {
        let mut a = FreeAssoc::zero(order);
        a.terms.insert(Vec::new(), Rat::one());
        a
    }

    fn generator(order: usize, g: u8) -> Self {
        let mut a = FreeAssoc::zero(order);
        a.terms.insert(vec![g], Rat::one());
        a
    }

    fn add_term(&mut self, w: Vec<u8>, c: Rat) {
        if c.is_zero() || w.len() > self.order {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    fn add(&self, other: &FreeAssoc) -> FreeAssoc {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    fn scale(&self, c: &Rat) -> FreeAssoc {
        let mut out = FreeAssoc::zero(self.order);
        if c.is_zero() {
            return out;
        }
        for (w, v) in &self.terms {
            out.terms.insert(w.clone(), v * c);
        }
        out
    }

    fn mul(&self, other: &FreeAssoc) -> FreeAssoc {
        let mut out = FreeAssoc::zero(self.order);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                if w1.len() + w2.len() > self.order {
                    continue;
                }
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        out
    }

    /// exp of a series without constant term.
    fn exp(&self) -> FreeAssoc {
        debug_assert!(!self.terms.contains_key(&Vec::new()));
        let mut out = FreeAssoc::one(self.order);
        let mut pow = FreeAssoc::one(self.order);
        let mut fact = Rat::one();
        for m in 1..=self.order {
            pow = pow.mul(self);
            if pow.terms.is_empty() {
                break;
            }
            fact *= rat(m as i64);
            out = out.add(&pow.scale(&(Rat::one() / &fact)));
        }
        out
    }

    /// log of a series with constant term 1.
    fn log(&self) -> FreeAssoc {
        let mut e = self.clone();
        e.terms.remove(&Vec::new());
        let mut out = FreeAssoc::zero(self.order);
        let mut pow = e.clone();
        for m in 1..=self.order {
            if pow.terms.is_empty() {
                break;
            }
            let sign = if m % 2 == 1 { Rat::one() } else { -Rat::one() };
            out = out.add(&pow.scale(&(sign / rat(m as i64))));
            pow = pow.mul(&e);
        }
        out
    }

    fn word_len_part(&self, d: usize) -> FreeAssoc {
        let mut out = FreeAssoc::zero(self.order);
        for (w, c) in &self.terms {
            if w.len() == d {
                out.terms.insert(w.clone(), c.clone());
            }
        }
        out
    }
}

/// All Lyndon words over {0,1} of length 1..=n, sorted by (length, lex).
pub fn lyndon_words(n: usize) -> Vec<Vec<u8>> {
    // Duval's generation loop.
    let mut out = Vec::new();
    let mut w = vec![0u8];
    loop {
        if w.len() <= n {
            out.push(w.clone());
        }
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() % m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == 1 {
                w.pop();
            } else {
                break;
            }
        }
        if w.is_empty() {
            break;
        }
        *w.last_mut().unwrap() = 1;
    }
    out.sort_by_key(|a| (a.len(), a.clone()));
    out
}

fn is_lyndon(w: &[u8]) -> bool {
    if w.is_empty() {
        return false;
    }
    for i in 1..w.len() {
        if w[i..] <= w[..] {
            return false;
        }
    }
    true
}

/// Standard factorization of a Lyndon word: w = uv with v the longest proper
/// Lyndon suffix; the bracketing is [b(u), b(v)].
fn standard_factorization(w: &[u8]) -> (Vec<u8>, Vec<u8>) {
    debug_assert!(w.len() >= 2);
    let i = (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .expect("proper Lyndon suffix exists");
    (w[..i].to_vec(), w[i..].to_vec())
}

/// Expansion of a bracketed Lyndon word inside the free associative algebra.
fn lyndon_bracket_expansion(w: &[u8], order: usize) -> FreeAssoc {
    if w.len() == 1 {
        return FreeAssoc::generator(order, w[0]);
    }
    let (u, v) = standard_factorization(w);
    let a = lyndon_bracket_expansion(&u, order);
    let b = lyndon_bracket_expansion(&v, order);
    a.mul(&b).add(&b.mul(&a).scale(&-Rat::one()))
}

/// A Lie series on the Lyndon basis, truncated at bracket length `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeLieSeries {
    pub order: usize,
    /// Lyndon word → coefficient.
    pub terms: BTreeMap<Vec<u8>, Rat>,
}

impl FreeLieSeries {
    pub fn zero(order: usize) -> Self {
        FreeLieSeries {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn coeff(&self, w: &[u8]) -> Rat {
        self.terms.get(w).cloned().unwrap_or_else(Rat::zero)
    }

    /// Bracket-evaluate the series on concrete coordinate vectors.
    pub fn evaluate_f64(&self, alg: &LieAlgebra, x: &[f64], y: &[f64]) -> Vec<f64> {
        let table = alg.table_f64();
        fn eval_word(
            table: &[Vec<Vec<f64>>],
            dim: usize,
            w: &[u8],
            x: &[f64],
            y: &[f64],
        ) -> Vec<f64> {
            if w.len() == 1 {
                return if w[0] == 0 { x.to_vec() } else { y.to_vec() };
            }
            let (u, v) = standard_factorization(w);
            let a = eval_word(table, dim, &u, x, y);
            let b = eval_word(table, dim, &v, x, y);
            let mut out = vec![0.0; dim];
            for i in 0..dim {
                if a[i] == 0.0 {
                    continue;
                }
                for j in 0..dim {
                    if b[j] == 0.0 {
                        continue;
                    }
                    let f = a[i] * b[j];
                    for (k, o) in out.iter_mut().enumerate() {
                        *o += f * table[i][j][k];
                    }
                }
            }
            out
        }
        let mut out = vec![0.0; alg.dim];
        for (w, c) in &self.terms {
            let val = eval_word(&table, alg.dim, w, x, y);
            let cf = rat_to_f64(c);
            for (o, v) in out.iter_mut().zip(val) {
                *o += cf * v;
            }
        }
        out
    }

    /// Exact bracket evaluation over the rationals.
    pub fn evaluate_rat(&self, alg: &LieAlgebra, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        fn eval_word(alg: &LieAlgebra, w: &[u8], x: &[Rat], y: &[Rat]) -> Vec<Rat> {
            if w.len() == 1 {
                return if w[0] == 0 { x.to_vec() } else { y.to_vec() };
            }
            let (u, v) = standard_factorization(w);
            let a = eval_word(alg, &u, x, y);
            let b = eval_word(alg, &v, x, y);
            alg.bracket(&a, &b)
        }
        let mut out = vec![Rat::zero(); alg.dim];
        for (w, c) in &self.terms {
            let val = eval_word(alg, w, x, y);
            for (o, v) in out.iter_mut().zip(val) {
                *o += c * &v;
            }
        }
        out
    }

    /// Largest word length carrying a nonzero coefficient.
    pub fn top_length(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }
}

/// Extract Lyndon-basis coordinates of a Lie element of the free associative
/// algebra; errors if the input is not a Lie element.
fn lie_from_assoc(a: &FreeAssoc) -> Result<FreeLieSeries> {
    let mut out = FreeLieSeries::zero(a.order);
    let all_lyndon = lyndon_words(a.order);
    for d in 1..=a.order {
        let part = a.word_len_part(d);
        if part.terms.is_empty() {
            continue;
        }
        let lyndon: Vec<&Vec<u8>> = all_lyndon.iter().filter(|w| w.len() == d).collect();
        let expansions: Vec<FreeAssoc> = lyndon
            .iter()
            .map(|w| lyndon_bracket_expansion(w, a.order))
            .collect();
        let mut words: std::collections::BTreeSet<Vec<u8>> = std::collections::BTreeSet::new();
        for e in &expansions {
            words.extend(e.terms.keys().cloned());
        }
        words.extend(part.terms.keys().cloned());
        let words: Vec<_> = words.into_iter().collect();
        let mut m = RatMat::zeros(words.len(), lyndon.len());
        for (j, e) in expansions.iter().enumerate() {
            for (i, w) in words.iter().enumerate() {
                if let Some(c) = e.terms.get(w) {
                    m[(i, j)] = c.clone();
                }
            }
        }
        let rhs: Vec<Rat> = words
            .iter()
            .map(|w| part.terms.get(w).cloned().unwrap_or_else(Rat::zero))
            .collect();
        let sol = m
            .solve(&rhs)
            .ok_or_else(|| Error::input("series is not a Lie element"))?;
        for (w, c) in lyndon.iter().zip(sol) {
            if !c.is_zero() {
                out.terms.insert((*w).clone(), c);
            }
        }
    }
    Ok(out)
}

fn lie_to_assoc(l: &FreeLieSeries, order: usize) -> FreeAssoc {
    let mut out = FreeAssoc::zero(order);
    for (w, c) in &l.terms {
        out = out.add(&lyndon_bracket_expansion(w, order).scale(c));
    }
    out
}

/// BCH(x, y) truncated at bracket length `n`: log(exp x · exp y), projected
/// onto the Lyndon basis.
pub fn bch_series(n: usize) -> Result<FreeLieSeries> {
    if n == 0 {
        return Err(Error::input("BCH order must be at least 1"));
    }
    let x = FreeAssoc::generator(n, 0);
    let y = FreeAssoc::generator(n, 1);
    lie_from_assoc(&x.exp().mul(&y.exp()).log())
}

/// The symmetric-pair series Z(x,y) with exp(2Z) = exp(x) exp(2y) exp(x),
/// truncated at order `n`. On 𝔭-arguments Z lies in 𝔭, so only odd-length
/// bracket words occur.
pub fn bch_p_series(n: usize) -> Result<FreeLieSeries> {
    if n == 0 {
        return Err(Error::input("order must be at least 1"));
    }
    let x = FreeAssoc::generator(n, 0);
    let y2 = FreeAssoc::generator(n, 1).scale(&rat(2));
    let prod = x.exp().mul(&y2.exp()).mul(&x.exp());
    let half = Rat::new(1.into(), 2.into());
    lie_from_assoc(&prod.log().scale(&half))
}

/// Order-by-order solve of exp(P)·exp(K) = exp(x)·exp(y) with P carrying the
/// odd-length (𝔭-valued) words and K the even-length (𝔨-valued) words.
pub fn pk_decompose(n: usize) -> Result<(FreeLieSeries, FreeLieSeries)> {
    if n == 0 {
        return Err(Error::input("order must be at least 1"));
    }
    let h = bch_series(n)?;
    let mut p = FreeLieSeries::zero(n);
    let mut k = FreeLieSeries::zero(n);
    for d in 1..=n {
        let cur = lie_from_assoc(
            &lie_to_assoc(&p, n)
                .exp()
                .mul(&lie_to_assoc(&k, n).exp())
                .log(),
        )?;
        // mismatch at degree d goes to P (d odd) or K (d even)
        let mut fix = |w: &Vec<u8>, delta: Rat| {
            if delta.is_zero() {
                return;
            }
            let dest = if d % 2 == 1 { &mut p } else { &mut k };
            let e = dest.terms.entry(w.clone()).or_insert_with(Rat::zero);
            *e += delta;
            if e.is_zero() {
                dest.terms.remove(w);
            }
        };
        let mut seen: std::collections::BTreeSet<&Vec<u8>> = std::collections::BTreeSet::new();
        for (w, c) in h.terms.iter().filter(|(w, _)| w.len() == d) {
            seen.insert(w);
            fix(w, c - cur.coeff(w));
        }
        for (w, c) in cur.terms.iter().filter(|(w, _)| w.len() == d) {
            if !seen.contains(w) {
                fix(w, -c.clone());
            }
        }
    }
    Ok((p, k))
}

/// sinh(aA)/(aA) as a matrix power series (a = ½ or 1), f64.
fn sinh_ratio_matrix(ad: &Mat, half: bool) -> Mat {
    let a = if half { ad.scale(0.5) } else { ad.clone() };
    let a2 = a.mul(&a);
    let mut term = Mat::identity(ad.n);
    let mut sum = Mat::identity(ad.n);
    let mut fact = 1.0f64;
    for k in 1..=12 {
        term = term.mul(&a2);
        fact *= (2 * k) as f64 * (2 * k + 1) as f64;
        sum = sum.add(&term.scale(1.0 / fact));
    }
    sum
}

/// q(x) = det_𝔤 ( sinh(ad x / 2) / (ad x / 2) ).
pub fn q_function(alg: &LieAlgebra, x: &[f64]) -> f64 {
    let ad = alg.adjoint_matrix_f64(x);
    sinh_ratio_matrix(&ad, true).det()
}

/// j(x) = det_𝔭 ( sinh(ad x) / ad x ) for x ∈ 𝔭, adapted coordinates.
pub fn j_function(pair: &SymmetricPair, x: &[f64]) -> Result<f64> {
    if x.len() != pair.dim() {
        return Err(Error::input("element has wrong dimension"));
    }
    if x[pair.p_dim..].iter().any(|&c| c != 0.0) {
        return Err(Error::input("element is not in the p-part"));
    }
    let ad = pair.adapted.adjoint_matrix_f64(x);
    let full = sinh_ratio_matrix(&ad, false);
    // The even series is block diagonal for x ∈ 𝔭; take the 𝔭-block.
    let p = pair.p_dim;
    let mut block = Mat::zeros(p);
    for i in 0..p {
        for j in 0..p {
            block.set(i, j, full.get(i, j));
        }
    }
    Ok(block.det())
}

/// D(x,y) = √q(x)√q(y) / √q(BCH(x,y)), BCH at the series' truncation order.
pub fn density_d(alg: &LieAlgebra, bch: &FreeLieSeries, x: &[f64], y: &[f64]) -> f64 {
    let z = bch.evaluate_f64(alg, x, y);
    (q_function(alg, x).sqrt() * q_function(alg, y).sqrt()) / q_function(alg, &z).sqrt()
}

/// D_𝔭(x,y) = √j(x)√j(y) / √j(BCH_𝔭(x,y)) for x, y ∈ 𝔭.
pub fn density_dp(
    pair: &SymmetricPair,
    bch_p: &FreeLieSeries,
    x: &[f64],
    y: &[f64],
) -> Result<f64> {
    let z = bch_p.evaluate_f64(&pair.adapted, x, y);
    Ok((j_function(pair, x)?.sqrt() * j_function(pair, y)?.sqrt()) / j_function(pair, &z)?.sqrt())
}

/// Which trace a formal trace letter refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TraceSpace {
    Full,
    PPart,
    KPart,
}

/// A log-series Σ c_{s,2n} · tr_s(ad(x)^{2n}) with an evaluator against a
/// symmetric pair. Houses log q, log j and the wheel symbols.
#[derive(Debug, Clone)]
pub struct ScalarSeries {
    pub order: u32,
    pub log_terms: Vec<(TraceSpace, u32, Rat)>,
}

impl ScalarSeries {
    pub fn new(order: u32, log_terms: Vec<(TraceSpace, u32, Rat)>) -> Result<Self> {
        if log_terms.iter().any(|(_, m, _)| m % 2 != 0) {
            return Err(Error::input("only even ad-powers may appear"));
        }
        Ok(ScalarSeries { order, log_terms })
    }

    /// log q as a trace series up to the given even order.
    pub fn log_q(order: u32) -> Self {
        let log = crate::uea::log_sinh_ratio_series(order, true);
        let terms = (1..=order / 2)
            .filter(|k| !log[(2 * k) as usize].is_zero())
            .map(|k| (TraceSpace::Full, 2 * k, log[(2 * k) as usize].clone()))
            .collect();
        ScalarSeries {
            order,
            log_terms: terms,
        }
    }

    /// log j as a trace series up to the given even order.
    pub fn log_j(order: u32) -> Self {
        let log = crate::uea::log_sinh_ratio_series(order, false);
        let terms = (1..=order / 2)
            .filter(|k| !log[(2 * k) as usize].is_zero())
            .map(|k| (TraceSpace::PPart, 2 * k, log[(2 * k) as usize].clone()))
            .collect();
        ScalarSeries {
            order,
            log_terms: terms,
        }
    }

    /// Evaluate the log-series at x (adapted coordinates).
    pub fn eval_log(&self, pair: &SymmetricPair, x: &[f64]) -> f64 {
        let ad = pair.adapted.adjoint_matrix_f64(x);
        let mut acc = 0.0;
        for (space, m, c) in &self.log_terms {
            let mut pow = Mat::identity(ad.n);
            for _ in 0..*m {
                pow = pow.mul(&ad);
            }
            let range = match space {
                TraceSpace::Full => 0..pair.dim(),
                TraceSpace::PPart => 0..pair.p_dim,
                TraceSpace::KPart => pair.p_dim..pair.dim(),
            };
            let tr: f64 = range.map(|i| pow.get(i, i)).sum();
            acc += rat_to_f64(c) * tr;
        }
        acc
    }
}


impl FreeLieSeries {
    /// JSON dump of the Lyndon-basis coefficients (word → rational string).
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (w, c) in &self.terms {
            let key: String = w
                .iter()
                .map(|&g| if g == 0 { 'x' } else { 'y' })
                .collect();
            map.insert(key, crate::ratlin::format_rat(c).into());
        }
        serde_json::Value::Object(map)
    }
}
