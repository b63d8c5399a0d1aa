//! Shared fixtures for the benchmark targets.

use biquant::liealg::{LieAlgebra, SymmetricPair};
use biquant::ratlin::{rat, RatMat};

pub fn sl2_pair() -> SymmetricPair {
    let alg = LieAlgebra::sl2();
    let sigma = RatMat::from_rows(vec![
        vec![rat(0), rat(0), rat(-1)],
        vec![rat(0), rat(-1), rat(0)],
        vec![rat(-1), rat(0), rat(0)],
    ]);
    SymmetricPair::new(alg, sigma).expect("sl2 Cartan pair")
}
