//! Explicit code constructions: Koetter–Médard linear codes for linear
//! targets, the relay code for reducible targets, and the two
//! reverse-butterfly codes for sums.

mod butterfly;
mod km;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{index_vector, AlgebraError, Elem, Matrix};
use crate::codes::{verify_code, verify_code_random, CodeError, Decoder, Encoder, NetworkCode, Selector, SymbolTable, Verification};
use crate::functions::{FunctionError, ReductionWitness, TargetFunction};
use crate::network::{standard, Network, NetworkError};

pub use butterfly::{arith_code_length, butterfly_arith_code, butterfly_capacity, butterfly_mod_code};
pub use km::{km_construct, KmConstruction, KM_DRAWS_PER_DEGREE, KM_MAX_FIELD_SIZE};

/// Message assignments above which constructions fall back to random checks.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 20;
/// Number of random assignments checked when exhaustive verification is too large.
pub const RANDOM_CHECKS: u64 = 100_000;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("coefficient a_{0} of the linear target is zero")]
    ZeroCoefficient(usize),
    #[error("{given} coefficients given, the network has {sources} sources")]
    CoefficientCount { given: usize, sources: usize },
    #[error("coefficient {0} is not an element of the field")]
    BadCoefficient(Elem),
    #[error("alphabet {0} is not a finite field")]
    NotAField(String),
    #[error("source {source_index} has min cut {cut}, below the network min cut {c}")]
    SourceCut { source_index: usize, cut: u64, c: u64 },
    #[error("min cut is zero, no positive-rate code exists")]
    ZeroCut,
    #[error("no invertible transfer matrices after {attempts} draws up to field size {max_field}; retry with another --seed")]
    RetryCapExceeded { attempts: u64, max_field: u64 },
    #[error("reduction witness does not satisfy g(xT) = f(x)")]
    InvalidWitness,
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("constructed code failed verification: {0:?}")]
    Unverified(Verification),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A constructed code together with its network, target and verification result.
#[derive(Clone, Debug)]
pub struct Construction {
    pub network: Network,
    pub function: TargetFunction,
    pub code: NetworkCode,
    pub verification: Verification,
    /// False when verification used random message assignments.
    pub exhaustive: bool,
}

fn verify_exhaustively(net: &Network, code: &NetworkCode, f: &TargetFunction) -> Result<Verification, ConstructError> {
    let v = verify_code(net, code, f, u128::MAX)?;
    if !v.is_verified() {
        return Err(ConstructError::Unverified(v));
    }
    Ok(v)
}

/// Exhaustive verification when `exhaustive` holds, else [`RANDOM_CHECKS`]
/// seeded random assignments. Returns the result and which mode ran.
fn verify_with_fallback(
    net: &Network,
    code: &NetworkCode,
    f: &TargetFunction,
    exhaustive: bool,
    seed: u64,
) -> Result<(Verification, bool), ConstructError> {
    if exhaustive {
        return Ok((verify_exhaustively(net, code, f)?, true));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = verify_code_random(net, code, f, RANDOM_CHECKS, &mut rng)?;
    if !v.is_verified() {
        return Err(ConstructError::Unverified(v));
    }
    Ok((v, false))
}

/// The `(1, lambda)` code on the relay network of `f.arity()` sources: every
/// source sends its symbol to `v`, `v` forwards `xT` and the receiver applies `g`.
pub fn relay_reduction_code(f: &TargetFunction, witness: &ReductionWitness) -> Result<Construction, ConstructError> {
    if !witness.holds_for(f) {
        return Err(ConstructError::InvalidWitness);
    }
    let s = f.arity();
    let lambda = witness.lambda;
    let alg = f.domain().clone();
    let q = alg.size();
    let net = standard::relay(s);
    let mut encoders = Vec::with_capacity(s + 1);
    for _ in 0..s {
        let mut sel = vec![Selector::Message { pos: 0 }];
        sel.resize(lambda, Selector::Zero);
        encoders.push(Encoder::Routing(sel));
    }
    let inputs = (0..s)
        .map(|i| {
            let mut g = Matrix::zeros(lambda, lambda);
            for j in 0..lambda {
                g.set(0, j, witness.t.get(i, j));
            }
            (i, g)
        })
        .collect();
    encoders.push(Encoder::Linear { inputs, message: None });
    let size = (q as usize).pow(lambda as u32);
    let values = (0..size).map(|i| witness.g_label(f, &index_vector(i, q, lambda))).collect();
    let decoder = Decoder::Table {
        path: "g.tbl".into(),
        table: SymbolTable { input_len: lambda, output_len: 1, values },
    };
    let code = NetworkCode { k: 1, n: lambda, alphabet: alg, encoders, decoder };
    let verification = verify_exhaustively(&net, &code, f)?;
    Ok(Construction { network: net, function: f.clone(), code, verification, exhaustive: true })
}

#[cfg(test)]
mod tests;
