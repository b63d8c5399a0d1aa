//! Exact-arithmetic Lie algebras, symmetric pairs, characters and traces.
//!
//! A [`LieAlgebra`] is a validated structure-constant table over the
//! rationals. A [`SymmetricPair`] carries an involutive automorphism σ and a
//! σ-eigenbasis ordered with the −1-eigenspace 𝔭 first, then the
//! +1-eigenspace 𝔨; every downstream PBW convention refers to that order.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Deserialize;

use crate::numeric::Mat;
use crate::ratlin::{in_span, parse_rat, Rat, RatMat};
use crate::{Error, Result};

/// Finite-dimensional Lie algebra given by structure constants
/// `[x_i, x_j] = Σ_k c_{ij}^k x_k` over exact rationals.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    pub dim: usize,
    pub basis_names: Vec<String>,
    /// `table[i][j]` is the coordinate vector of `[x_i, x_j]`.
    table: Vec<Vec<Vec<Rat>>>,
}

impl LieAlgebra {
    /// Build and validate (antisymmetry + Jacobi, both exact).
    pub fn new(basis_names: Vec<String>, table: Vec<Vec<Vec<Rat>>>) -> Result<Self> {
        let dim = basis_names.len();
        if table.len() != dim || table.iter().any(|r| r.len() != dim) {
            return Err(Error::input("structure table is not dim × dim"));
        }
        for row in &table {
            for entry in row {
                if entry.len() != dim {
                    return Err(Error::input("bracket coordinate vector has wrong length"));
                }
            }
        }
        let alg = LieAlgebra {
            dim,
            basis_names,
            table,
        };
        alg.validate()?;
        Ok(alg)
    }

    pub fn abelian(dim: usize) -> Self {
        let names = (0..dim).map(|i| format!("x{i}")).collect();
        let zero = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
        LieAlgebra {
            dim,
            basis_names: names,
            table: zero,
        }
    }

    /// sl(2) with basis (e, h, f): [h,e]=2e, [h,f]=−2f, [e,f]=h.
    pub fn sl2() -> Self {
        let mut t = vec![vec![vec![Rat::zero(); 3]; 3]; 3];
        let (e, h, f) = (0usize, 1usize, 2usize);
        let set = |t: &mut Vec<Vec<Vec<Rat>>>, i: usize, j: usize, k: usize, v: i64| {
            t[i][j][k] = Rat::from_integer(v.into());
            t[j][i][k] = Rat::from_integer((-v).into());
        };
        set(&mut t, h, e, e, 2);
        set(&mut t, h, f, f, -2);
        set(&mut t, e, f, h, 1);
        LieAlgebra::new(vec!["e".into(), "h".into(), "f".into()], t).unwrap()
    }

    fn validate(&self) -> Result<()> {
        if !check_jacobi(&self.table) {
            return Err(Error::input(
                "structure constants violate antisymmetry or the Jacobi identity",
            ));
        }
        Ok(())
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.table[i][j][k]
    }

    /// `[x, y]` for coordinate vectors.
    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let f = &x[i] * &y[j];
                for k in 0..self.dim {
                    let c = &self.table[i][j][k];
                    if !c.is_zero() {
                        out[k] += c * &f;
                    }
                }
            }
        }
        out
    }

    /// Matrix of ad(x) in the algebra basis.
    pub fn adjoint_matrix(&self, x: &[Rat]) -> RatMat {
        assert_eq!(x.len(), self.dim);
        let mut m = RatMat::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let mut ej = vec![Rat::zero(); self.dim];
            ej[j] = Rat::one();
            let col = self.bracket(x, &ej);
            for i in 0..self.dim {
                m[(i, j)] = col[i].clone();
            }
        }
        m
    }

    /// f64 copy of the structure constants, for evaluation-heavy callers.
    pub fn table_f64(&self) -> Vec<Vec<Vec<f64>>> {
        self.table
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| v.iter().map(crate::ratlin::rat_to_f64).collect())
                    .collect()
            })
            .collect()
    }

    /// Matrix of ad(x) over f64, for the numeric oracles.
    pub fn adjoint_matrix_f64(&self, x: &[f64]) -> Mat {
        let t = self.table_f64();
        let mut m = Mat::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = 0.0;
                for (xi, ti) in x.iter().zip(&t) {
                    acc += xi * ti[j][i];
                }
                m.set(i, j, acc);
            }
        }
        m
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim];
        v[i] = Rat::one();
        v
    }

    /// Parse the JSON wire format.
    pub fn from_json(text: &str) -> Result<(Self, Option<RatMat>)> {
        let raw: AlgebraJson = serde_json::from_str(text)?;
        let dim = raw.dim;
        if raw.basis.len() != dim {
            return Err(Error::input("basis name count does not match dim"));
        }
        let mut table = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
        for b in &raw.brackets {
            if b.i >= dim || b.j >= dim {
                return Err(Error::input("bracket index out of range"));
            }
            for (k, coeff) in &b.coeffs {
                let k: usize = k
                    .parse()
                    .map_err(|_| Error::input(format!("bad bracket key {k:?}")))?;
                if k >= dim {
                    return Err(Error::input("bracket target index out of range"));
                }
                let c = parse_rat(coeff)?;
                table[b.i][b.j][k] = c.clone();
                table[b.j][b.i][k] = -c;
            }
        }
        let alg = LieAlgebra::new(raw.basis, table)?;
        let sigma = match raw.sigma {
            None => None,
            Some(entries) => {
                if entries.len() != dim * dim {
                    return Err(Error::input("sigma must be a row-major dim × dim table"));
                }
                let mut m = RatMat::zeros(dim, dim);
                for (idx, s) in entries.iter().enumerate() {
                    m[(idx / dim, idx % dim)] = parse_rat(s)?;
                }
                Some(m)
            }
        };
        Ok((alg, sigma))
    }
}

#[derive(Deserialize)]
struct AlgebraJson {
    dim: usize,
    basis: Vec<String>,
    brackets: Vec<BracketJson>,
    #[serde(default)]
    sigma: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct BracketJson {
    i: usize,
    j: usize,
    coeffs: BTreeMap<String, String>,
}

/// Exact antisymmetry + Jacobi test on a raw structure table.
pub fn check_jacobi(table: &[Vec<Vec<Rat>>]) -> bool {
    let dim = table.len();
    if table.iter().any(|r| r.len() != dim)
        || table
            .iter()
            .any(|r| r.iter().any(|v| v.len() != dim))
    {
        return false;
    }
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                if table[i][j][k] != -table[j][i][k].clone() {
                    return false;
                }
            }
        }
    }
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                for l in 0..dim {
                    let mut s = Rat::zero();
                    for m in 0..dim {
                        s += &table[i][j][m] * &table[m][k][l];
                        s += &table[j][k][m] * &table[m][i][l];
                        s += &table[k][i][m] * &table[m][j][l];
                    }
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// A subspace of a Lie algebra that is closed under the bracket.
#[derive(Debug, Clone)]
pub struct Subalgebra {
    pub basis: Vec<Vec<Rat>>,
}

impl Subalgebra {
    pub fn new(parent: &LieAlgebra, basis: Vec<Vec<Rat>>) -> Result<Self> {
        for v in &basis {
            if v.len() != parent.dim {
                return Err(Error::input("subalgebra vector has wrong dimension"));
            }
        }
        for a in &basis {
            for b in &basis {
                let br = parent.bracket(a, b);
                if !in_span(&basis, &br) {
                    return Err(Error::input("subspace is not closed under the bracket"));
                }
            }
        }
        Ok(Subalgebra { basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        in_span(&self.basis, v)
    }
}

/// Rational linear functional on a subalgebra that kills its brackets.
#[derive(Debug, Clone)]
pub struct Character {
    /// Value on each basis vector of the domain subalgebra.
    pub values: Vec<Rat>,
}

impl Character {
    pub fn zero(dim: usize) -> Self {
        Character {
            values: vec![Rat::zero(); dim],
        }
    }

    pub fn new(parent: &LieAlgebra, domain: &Subalgebra, values: Vec<Rat>) -> Result<Self> {
        if values.len() != domain.dim() {
            return Err(Error::input("character value count mismatch"));
        }
        // χ must vanish on brackets of domain elements.
        for a in &domain.basis {
            for b in &domain.basis {
                let br = parent.bracket(a, b);
                let coords = express_in_basis(&domain.basis, &br)
                    .ok_or_else(|| Error::input("bracket left the subalgebra"))?;
                let val: Rat = coords.iter().zip(&values).map(|(c, v)| c * v).sum();
                if !val.is_zero() {
                    return Err(Error::input("functional does not vanish on brackets"));
                }
            }
        }
        Ok(Character { values })
    }
}

/// Coordinates of `v` in `basis`, if it lies in the span.
pub fn express_in_basis(basis: &[Vec<Rat>], v: &[Rat]) -> Option<Vec<Rat>> {
    if basis.is_empty() {
        return v.iter().all(Zero::is_zero).then(Vec::new);
    }
    let dim = v.len();
    let mut m = RatMat::zeros(dim, basis.len());
    for (j, b) in basis.iter().enumerate() {
        for i in 0..dim {
            m[(i, j)] = b[i].clone();
        }
    }
    m.solve(v)
}

/// Symmetric pair (𝔤, σ): σ² = id, σ a Lie algebra automorphism, with the
/// Cartan decomposition 𝔤 = 𝔨 ⊕ 𝔭 into the ±1-eigenspaces.
#[derive(Debug, Clone)]
pub struct SymmetricPair {
    pub algebra: LieAlgebra,
    pub sigma: RatMat,
    /// Eigenbasis vectors (in the original basis): 𝔭-vectors first, then 𝔨.
    pub eigenbasis: Vec<Vec<Rat>>,
    pub p_dim: usize,
    /// The algebra rewritten in the eigenbasis; indices `0..p_dim` span 𝔭
    /// and `p_dim..dim` span 𝔨. PBW conventions downstream use this order.
    pub adapted: LieAlgebra,
}

impl SymmetricPair {
    /// Decompose along an involutive automorphism supplied as a matrix.
    pub fn new(algebra: LieAlgebra, sigma: RatMat) -> Result<Self> {
        let dim = algebra.dim;
        if sigma.rows != dim || sigma.cols != dim {
            return Err(Error::input("sigma has wrong shape"));
        }
        if sigma.mul(&sigma) != RatMat::identity(dim) {
            return Err(Error::input("sigma is not an involution"));
        }
        // automorphism: σ[x,y] = [σx, σy] on basis pairs
        for i in 0..dim {
            for j in 0..dim {
                let lhs = sigma.mul_vec(&algebra.bracket(
                    &algebra.basis_vector(i),
                    &algebra.basis_vector(j),
                ));
                let rhs = algebra.bracket(&sigma.col(i), &sigma.col(j));
                if lhs != rhs {
                    return Err(Error::input("sigma is not a Lie algebra automorphism"));
                }
            }
        }
        // ±1 eigenspaces over ℚ
        let minus = sigma.add(&RatMat::identity(dim)); // ker(σ+1) = 𝔭
        let plus = sigma.sub(&RatMat::identity(dim)); // ker(σ−1) = 𝔨
        let p_basis = minus.kernel_basis();
        let k_basis = plus.kernel_basis();
        if p_basis.len() + k_basis.len() != dim {
            return Err(Error::input("eigenspaces do not span; sigma not diagonalizable"));
        }
        let mut eigenbasis = p_basis.clone();
        eigenbasis.extend(k_basis.iter().cloned());
        let p_dim = p_basis.len();

        // structure constants in the eigenbasis
        let mut change = RatMat::zeros(dim, dim);
        for (j, v) in eigenbasis.iter().enumerate() {
            for i in 0..dim {
                change[(i, j)] = v[i].clone();
            }
        }
        let inv = change
            .inverse()
            .ok_or_else(|| Error::input("eigenbasis is singular"))?;
        let mut table = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let br = algebra.bracket(&eigenbasis[i], &eigenbasis[j]);
                let coords = inv.mul_vec(&br);
                table[i][j] = coords;
            }
        }
        let names: Vec<String> = (0..dim)
            .map(|i| {
                if i < p_dim {
                    format!("p{i}")
                } else {
                    format!("k{}", i - p_dim)
                }
            })
            .collect();
        let adapted = LieAlgebra::new(names, table)?;

        let pair = SymmetricPair {
            algebra,
            sigma,
            eigenbasis,
            p_dim,
            adapted,
        };
        pair.check_cartan()?;
        Ok(pair)
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim
    }

    pub fn k_dim(&self) -> usize {
        self.dim() - self.p_dim
    }

    pub fn p_indices(&self) -> std::ops::Range<usize> {
        0..self.p_dim
    }

    pub fn k_indices(&self) -> std::ops::Range<usize> {
        self.p_dim..self.dim()
    }

    fn check_cartan(&self) -> Result<()> {
        let d = self.dim();
        let in_part = |v: &[Rat], p_part: bool| -> bool {
            let range = if p_part { 0..self.p_dim } else { self.p_dim..d };
            v.iter()
                .enumerate()
                .all(|(i, c)| range.contains(&i) || c.is_zero())
        };
        for i in 0..d {
            for j in 0..d {
                let br = self.adapted.bracket(
                    &self.adapted.basis_vector(i),
                    &self.adapted.basis_vector(j),
                );
                let pi = i < self.p_dim;
                let pj = j < self.p_dim;
                // [𝔭,𝔭]⊆𝔨, [𝔨,𝔭]⊆𝔭, [𝔨,𝔨]⊆𝔨
                let expect_p = pi != pj;
                if !in_part(&br, expect_p) {
                    return Err(Error::input("Cartan relations fail in the eigenbasis"));
                }
            }
        }
        Ok(())
    }

    /// δ(k) = ½ tr_𝔭(ad(k)|_𝔭), as a character of 𝔨 in adapted coordinates.
    pub fn delta_character(&self) -> Character {
        let mut values = Vec::with_capacity(self.k_dim());
        for kb in self.k_indices() {
            let ad = self.adapted.adjoint_matrix(&self.adapted.basis_vector(kb));
            let mut tr = Rat::zero();
            for p in 0..self.p_dim {
                tr += ad[(p, p)].clone();
            }
            values.push(tr / Rat::from_integer(2.into()));
        }
        Character { values }
    }

    /// ¼ tr_𝔤(ad(k)) as a functional on the 𝔨-basis (adapted coordinates).
    pub fn quarter_trace_character(&self) -> Character {
        let mut values = Vec::with_capacity(self.k_dim());
        for kb in self.k_indices() {
            let ad = self.adapted.adjoint_matrix(&self.adapted.basis_vector(kb));
            values.push(ad.trace() / Rat::from_integer(4.into()));
        }
        Character { values }
    }

    /// tr_𝔭(ad(x)^{2n}) for x ∈ 𝔭 (adapted coordinates, exact).
    pub fn trace_ad_power(&self, x: &[Rat], n: usize) -> Result<Rat> {
        if x.len() != self.dim() {
            return Err(Error::input("element has wrong dimension"));
        }
        if x[self.p_dim..].iter().any(|c| !c.is_zero()) {
            return Err(Error::input("element is not in the p-part"));
        }
        let ad = self.adapted.adjoint_matrix(x);
        let mut pow = RatMat::identity(self.dim());
        for _ in 0..2 * n {
            pow = pow.mul(&ad);
        }
        let mut tr = Rat::zero();
        for p in 0..self.p_dim {
            tr += pow[(p, p)].clone();
        }
        Ok(tr)
    }

    /// The subalgebra 𝔨 inside the adapted algebra.
    pub fn k_subalgebra(&self) -> Subalgebra {
        let basis = self
            .k_indices()
            .map(|i| self.adapted.basis_vector(i))
            .collect();
        Subalgebra { basis }
    }
}
