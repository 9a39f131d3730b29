//! Codes for sums on the reverse butterfly.
//!
//! Edge ids follow [`standard::REVERSE_BUTTERFLY`]. With messages `x` at `s1`
//! and `y` at `s2`, each split into halves `(x1, x2)`, node `u` forms
//! `w = x1 + x2 + y1`, node `a` recovers `x1 + y1 = w - x2` and node `b`
//! forms the full sum `w + y2`. The receiver subtracts the two.

use num_bigint::BigUint;
use num_rational::Ratio;

use super::{verify_with_fallback, ConstructError, Construction, EXHAUSTIVE_LIMIT};
use crate::algebra::{index_vector, Algebra, Elem, Matrix};
use crate::codes::{Decoder, Encoder, NetworkCode, Selector, SymbolTable, ValueMap};
use crate::functions::TargetFunction;
use crate::network::{standard, LogQuotient};

/// Exhaustive verification is run for `q` up to this size.
const MOD_VERIFY_MAX_Q: u32 = 5;

fn mat(alg: &Algebra, text: &str) -> Matrix {
    Matrix::parse(alg, text).expect("constant matrix is well formed")
}

/// The `(2, 1)` code computing the component-wise mod-`q` sum on the reverse
/// butterfly over `Z_q`.
pub fn butterfly_mod_code(q: u32) -> Result<Construction, ConstructError> {
    if q < 2 {
        return Err(ConstructError::Parameter(format!("q = {q}, need q >= 2")));
    }
    let alg = Algebra::integers_mod(q)?;
    let net = standard::reverse_butterfly();
    let m1 = q - 1;
    let lin = |inputs: &[(usize, &str)], message: Option<&str>| Encoder::Linear {
        inputs: inputs.iter().map(|&(e, t)| (e, mat(&alg, t))).collect(),
        message: message.map(|t| mat(&alg, t)),
    };
    let minus = m1.to_string();
    let encoders = vec![
        lin(&[], Some("0;1")),
        lin(&[], Some("1;1")),
        lin(&[], Some("0;1")),
        lin(&[], Some("1;0")),
        lin(&[(1, "1"), (3, "1")], None),
        lin(&[(4, "1")], None),
        lin(&[(4, "1")], None),
        lin(&[(0, &minus), (5, "1")], None),
        lin(&[(2, "1"), (6, "1")], None),
    ];
    let decoder = Decoder::LinearThenMap {
        blocks: vec![(7, mat(&alg, &format!("1 {m1}"))), (8, mat(&alg, "0 1"))],
        map: ValueMap::Identity,
    };
    let f = TargetFunction::builtin(&format!("mod-sum:{q}"), &alg, 2)?;
    let code = NetworkCode { k: 2, n: 1, alphabet: alg, encoders, decoder };
    let (verification, exhaustive) = verify_with_fallback(&net, &code, &f, q <= MOD_VERIFY_MAX_Q, 0)?;
    Ok(Construction { network: net, function: f, code, verification, exhaustive })
}

/// Smallest `n'` with `q^n' >= (2q - 1)^n`, i.e. `ceil(n log_q(2q - 1))`.
pub fn arith_code_length(q: u32, n: usize) -> usize {
    let target = BigUint::from(2 * q - 1).pow(n as u32);
    let mut power = BigUint::from(1u32);
    let mut len = 0;
    while power < target {
        power *= q;
        len += 1;
    }
    len
}

/// Radix re-encoding between `n` digits base `2q - 1` and `n'` digits base `q`,
/// most significant digit first.
struct Radix {
    q: u32,
    wide: u32,
    n: usize,
    n_out: usize,
}

impl Radix {
    fn encode(&self, digits: &[Elem]) -> Vec<Elem> {
        let mut value: u128 = 0;
        for &d in digits {
            value = value * self.wide as u128 + d as u128;
        }
        let mut out = vec![0; self.n_out];
        for slot in out.iter_mut().rev() {
            *slot = (value % self.q as u128) as Elem;
            value /= self.q as u128;
        }
        out
    }

    /// Inverse of [`Radix::encode`] on its image; other words map to an
    /// arbitrary but fixed preimage.
    fn decode(&self, word: &[Elem]) -> Vec<Elem> {
        let mut value: u128 = 0;
        for &d in word {
            value = value * self.q as u128 + d as u128;
        }
        let mut out = vec![0; self.n];
        for slot in out.iter_mut().rev() {
            *slot = (value % self.wide as u128) as Elem;
            value /= self.wide as u128;
        }
        out
    }

    fn add(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.wide).collect()
    }

    fn sub(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter().zip(b).map(|(&x, &y)| (x + self.wide - y) % self.wide).collect()
    }
}

fn tabulate(q: u32, input_len: usize, output_len: usize, mut f: impl FnMut(&[Elem]) -> Vec<Elem>) -> SymbolTable<Elem> {
    let size = (q as usize).pow(input_len as u32);
    let mut values = Vec::with_capacity(size * output_len);
    for i in 0..size {
        let out = f(&index_vector(i, q, input_len));
        debug_assert_eq!(out.len(), output_len);
        values.extend(out);
    }
    SymbolTable { input_len, output_len, values }
}

/// The `(2n, n')` code computing the component-wise arithmetic sum over
/// `{0..q-1}` on the reverse butterfly, with `n' = ceil(n log_q(2q - 1))`.
///
/// Each message is split into halves of `n` symbols, read as words over
/// `{0..2q-2}`, and the mod-`(2q - 1)` code runs on those words. Edges carry
/// the words re-encoded in base `q`. Since each half-sum stays below `2q - 1`
/// the modular sums equal the arithmetic ones.
pub fn butterfly_arith_code(q: u32, n: usize) -> Result<Construction, ConstructError> {
    if q < 2 || n == 0 {
        return Err(ConstructError::Parameter(format!("q = {q}, n = {n}, need q >= 2 and n >= 1")));
    }
    let n_out = arith_code_length(q, n);
    let receiver_table = (q as u128).pow(2 * n_out as u32);
    if receiver_table > 1 << 24 {
        return Err(ConstructError::Parameter(format!(
            "q = {q}, n = {n} needs decoder tables of {receiver_table} entries"
        )));
    }
    let r = Radix { q, wide: 2 * q - 1, n, n_out };
    let alg = Algebra::integers_mod(q)?;
    let net = standard::reverse_butterfly();
    let k = 2 * n;
    let table = |e: usize, input_len: usize, f: &dyn Fn(&[Elem]) -> Vec<Elem>| Encoder::Table {
        path: format!("enc{e}.tbl"),
        table: tabulate(q, input_len, n_out, f),
    };
    let forward = |e: usize| Encoder::Routing((0..n_out).map(|pos| Selector::InEdge { edge: e, pos }).collect());
    // Halves of a source message: first n symbols, last n symbols.
    let halves = |m: &[Elem]| (m[..n].to_vec(), m[n..].to_vec());
    let encoders = vec![
        table(0, k, &|m| r.encode(&halves(m).1)),
        table(1, k, &|m| {
            let (h1, h2) = halves(m);
            r.encode(&r.add(&h1, &h2))
        }),
        table(2, k, &|m| r.encode(&halves(m).1)),
        table(3, k, &|m| r.encode(&halves(m).0)),
        table(4, 2 * n_out, &|z| r.encode(&r.add(&r.decode(&z[..n_out]), &r.decode(&z[n_out..])))),
        forward(4),
        forward(4),
        // Node a: in-edges 0 (x2) then 5 (w).
        table(7, 2 * n_out, &|z| r.encode(&r.sub(&r.decode(&z[n_out..]), &r.decode(&z[..n_out])))),
        // Node b: in-edges 2 (y2) then 6 (w).
        table(8, 2 * n_out, &|z| r.encode(&r.add(&r.decode(&z[n_out..]), &r.decode(&z[..n_out])))),
    ];
    let dec = tabulate(q, 2 * n_out, k, |z| {
        let first = r.decode(&z[..n_out]);
        let total = r.decode(&z[n_out..]);
        let second = r.sub(&total, &first);
        first.into_iter().chain(second).collect()
    });
    let decoder = Decoder::Table {
        path: "dec.tbl".into(),
        table: SymbolTable {
            input_len: dec.input_len,
            output_len: dec.output_len,
            values: dec.values.into_iter().map(i64::from).collect(),
        },
    };
    let f = TargetFunction::builtin("arith-sum", &alg, 2)?;
    let code = NetworkCode { k, n: n_out, alphabet: alg, encoders, decoder };
    let assignments = (q as u128).checked_pow((k * 2) as u32).unwrap_or(u128::MAX);
    let (verification, exhaustive) = verify_with_fallback(&net, &code, &f, assignments <= EXHAUSTIVE_LIMIT, 0)?;
    Ok(Construction { network: net, function: f, code, verification, exhaustive })
}

/// Arithmetic-sum computing capacity of the reverse butterfly over an
/// alphabet of size `q`: `2 / log_q(2q - 1)`. It increases with `q` and
/// tends to 2.
pub fn butterfly_capacity(q: u32) -> LogQuotient {
    LogQuotient::new(Ratio::from_integer(2), q as u64, 2 * q as u64 - 1)
}
