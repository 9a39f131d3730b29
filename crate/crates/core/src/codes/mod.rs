//! `(k, n)` network codes: per-edge encoders, a receiver decoder, evaluation
//! in topological order and exhaustive verification against a target.

mod format;

use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{index_vector, Algebra, AlgebraError, Elem, Matrix};
use crate::functions::TargetFunction;
use crate::network::Network;

pub use format::{parse_code, read_code, write_code, CodeBundle};

/// Default cap on the number of message assignments checked by [`verify_code`].
pub const DEFAULT_VERIFY_BUDGET: u128 = 1 << 26;

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown edge id {0}")]
    UnknownEdge(usize),
    #[error("edge {0} has no encoder")]
    MissingEncoder(usize),
    #[error("edge {0} has more than one encoder")]
    DuplicateEncoder(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("edge {edge}: {message}")]
    BadEncoder { edge: usize, message: String },
    #[error("table {path}: {message}")]
    Table { path: String, message: String },
    #[error("edge {edge}: table encoder has no entry for input {input:?}")]
    MissingTableEntry { edge: usize, input: Vec<Elem> },
    #[error("verification needs {needed} message assignments, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("target function has arity {arity} but the network has {sources} sources")]
    ArityMismatch { arity: usize, sources: usize },
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// One output coordinate of a routing encoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selector {
    /// Symbol `pos` of in-edge `edge`.
    InEdge { edge: usize, pos: usize },
    /// Symbol `pos` of the tail's own message.
    Message { pos: usize },
    /// The constant zero.
    Zero,
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::InEdge { edge, pos } => write!(f, "{edge}.{pos}"),
            Selector::Message { pos } => write!(f, "m.{pos}"),
            Selector::Zero => f.write_str("0"),
        }
    }
}

/// Explicit map from input vectors (lexicographic index) to output vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTable<T> {
    pub input_len: usize,
    pub output_len: usize,
    /// `output_len` values per input, inputs in lexicographic order.
    pub values: Vec<T>,
}

impl<T: Copy> SymbolTable<T> {
    pub fn lookup(&self, index: usize) -> &[T] {
        &self.values[index * self.output_len..(index + 1) * self.output_len]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Encoder {
    Routing(Vec<Selector>),
    /// `z_e = sum_j z_{in_j} G_j + alpha(v) H`.
    Linear {
        /// `(in-edge id, n x n matrix)` in file order; absent in-edges count as zero.
        inputs: Vec<(usize, Matrix)>,
        /// `k x n` matrix applied to the message of a source tail.
        message: Option<Matrix>,
    },
    /// Input: in-edge vectors by ascending edge id, then the tail's message
    /// if it is a source.
    Table { path: String, table: SymbolTable<Elem> },
}

/// Receiver-side per-symbol value map `A -> B` for linear decoders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueMap {
    /// The canonical integer of the element.
    Identity,
    Table { path: String, labels: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decoder {
    /// Input: the receiver's in-edge vectors by ascending edge id; output: `k` labels.
    Table { path: String, table: SymbolTable<i64> },
    /// `y = sum_e z_e D_e` with `D_e` of size `n x k`, then `map` per component.
    LinearThenMap { blocks: Vec<(usize, Matrix)>, map: ValueMap },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkCode {
    pub k: usize,
    pub n: usize,
    pub alphabet: Algebra,
    /// Indexed by edge id.
    pub encoders: Vec<Encoder>,
    pub decoder: Decoder,
}

/// Outcome of [`verify_code`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    Verified { assignments: u128 },
    Counterexample {
        /// One message vector per source.
        messages: Vec<Vec<Elem>>,
        /// 0-based symbol position where the decoder is wrong.
        component: usize,
        expected: i64,
        decoded: i64,
    },
}

impl Verification {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verification::Verified { .. })
    }
}

/// Result of [`NetworkCode::evaluate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    /// Vector carried by each edge, indexed by edge id.
    pub edges: Vec<Vec<Elem>>,
    pub output: Vec<i64>,
}

impl NetworkCode {
    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.k as u64, self.n as u64)
    }

    /// Checks every encoder and the decoder against the network.
    pub fn validate(&self, net: &Network) -> Result<(), CodeError> {
        let (k, n) = (self.k, self.n);
        if k == 0 || n == 0 {
            return Err(CodeError::Dimension("k and n must be positive".into()));
        }
        if self.encoders.len() != net.edges().len() {
            return Err(CodeError::Dimension(format!(
                "{} encoders for {} edges",
                self.encoders.len(),
                net.edges().len()
            )));
        }
        let q = self.alphabet.size();
        for (e, enc) in self.encoders.iter().enumerate() {
            let tail = net.edges()[e].tail;
            let ins = net.in_edges(tail);
            let is_source = net.source_index(tail).is_some();
            let bad = |message: String| CodeError::BadEncoder { edge: e, message };
            match enc {
                Encoder::Routing(sel) => {
                    if sel.len() != n {
                        return Err(bad(format!("routing encoder has {} selectors, n = {n}", sel.len())));
                    }
                    for s in sel {
                        match *s {
                            Selector::InEdge { edge, pos } if !ins.contains(&edge) || pos >= n => {
                                return Err(bad(format!("selector {s} does not name an in-edge symbol")))
                            }
                            Selector::Message { pos } if !is_source || pos >= k => {
                                return Err(bad(format!("selector {s} does not name a message symbol")))
                            }
                            _ => {}
                        }
                    }
                }
                Encoder::Linear { inputs, message } => {
                    let mut seen = Vec::new();
                    for (edge, g) in inputs {
                        if !ins.contains(edge) || seen.contains(edge) {
                            return Err(bad(format!("matrix for {edge}, which is not a distinct in-edge")));
                        }
                        seen.push(*edge);
                        if g.rows() != n || g.cols() != n {
                            return Err(CodeError::Dimension(format!(
                                "edge {e}: in-edge matrix is {}x{}, expected {n}x{n}",
                                g.rows(),
                                g.cols()
                            )));
                        }
                    }
                    if let Some(h) = message {
                        if !is_source {
                            return Err(bad("message matrix on an edge whose tail is not a source".into()));
                        }
                        if h.rows() != k || h.cols() != n {
                            return Err(CodeError::Dimension(format!(
                                "edge {e}: message matrix is {}x{}, expected {k}x{n}",
                                h.rows(),
                                h.cols()
                            )));
                        }
                    }
                }
                Encoder::Table { table, .. } => {
                    let input_len = ins.len() * n + if is_source { k } else { 0 };
                    if table.input_len != input_len || table.output_len != n {
                        return Err(CodeError::Dimension(format!(
                            "edge {e}: table maps length {} to {}, expected {input_len} to {n}",
                            table.input_len, table.output_len
                        )));
                    }
                    if table.values.len() != (q as usize).pow(input_len as u32) * n {
                        return Err(bad("table encoder is not total".into()));
                    }
                }
            }
        }
        let rho_in = net.in_edges(net.receiver());
        match &self.decoder {
            Decoder::Table { table, .. } => {
                if table.input_len != rho_in.len() * n || table.output_len != k {
                    return Err(CodeError::Dimension(format!(
                        "decoder table maps length {} to {}, expected {} to {k}",
                        table.input_len,
                        table.output_len,
                        rho_in.len() * n
                    )));
                }
            }
            Decoder::LinearThenMap { blocks, map } => {
                for (edge, d) in blocks {
                    if !rho_in.contains(edge) {
                        return Err(CodeError::Dimension(format!("decoder block for {edge}, not a receiver in-edge")));
                    }
                    if d.rows() != n || d.cols() != k {
                        return Err(CodeError::Dimension(format!(
                            "decoder block for {edge} is {}x{}, expected {n}x{k}",
                            d.rows(),
                            d.cols()
                        )));
                    }
                }
                if let ValueMap::Table { labels, .. } = map {
                    if labels.len() != q as usize {
                        return Err(CodeError::Dimension("value map must cover the alphabet".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Evaluates every edge in topological order and decodes at the receiver.
    pub fn evaluate(&self, net: &Network, messages: &[Vec<Elem>]) -> Result<Evaluation, CodeError> {
        if messages.len() != net.num_sources() || messages.iter().any(|m| m.len() != self.k) {
            return Err(CodeError::Dimension(format!(
                "expected {} messages of length {}",
                net.num_sources(),
                self.k
            )));
        }
        let eval = Evaluator::new(net, self);
        let flat: Vec<Elem> = messages.concat();
        let mut z = vec![0; net.edges().len() * self.n];
        let mut out = vec![0; self.k];
        eval.run(&flat, &mut z, &mut out)?;
        Ok(Evaluation { edges: z.chunks(self.n).map(|c| c.to_vec()).collect(), output: out })
    }
}

/// Precomputed evaluation schedule for one code on one network.
pub(crate) struct Evaluator<'a> {
    code: &'a NetworkCode,
    k: usize,
    n: usize,
    order: Vec<usize>,
    /// Per edge: in-edges of its tail and the source index of its tail.
    inputs: Vec<(Vec<usize>, Option<usize>)>,
    receiver_inputs: Vec<usize>,
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(net: &Network, code: &'a NetworkCode) -> Evaluator<'a> {
        let inputs = net
            .edges()
            .iter()
            .map(|e| (net.in_edges(e.tail), net.source_index(e.tail)))
            .collect();
        Evaluator {
            code,
            k: code.k,
            n: code.n,
            order: net.edges_in_topological_order(),
            inputs,
            receiver_inputs: net.in_edges(net.receiver()),
        }
    }

    /// `messages` is the concatenation of all source messages; `z` receives
    /// the edge vectors (`n` symbols per edge id) and `out` the decoded labels.
    pub(crate) fn run(&self, messages: &[Elem], z: &mut [Elem], out: &mut [i64]) -> Result<(), CodeError> {
        let alg = &self.code.alphabet;
        let q = alg.size() as usize;
        let (k, n) = (self.k, self.n);
        for &e in &self.order {
            let (ins, src) = &self.inputs[e];
            let msg = src.map(|i| &messages[i * k..(i + 1) * k]);
            let mut value = vec![0; n];
            match &self.code.encoders[e] {
                Encoder::Routing(sel) => {
                    for (v, s) in value.iter_mut().zip(sel) {
                        *v = match *s {
                            Selector::InEdge { edge, pos } => z[edge * n + pos],
                            Selector::Message { pos } => msg.expect("validated source")[pos],
                            Selector::Zero => 0,
                        };
                    }
                }
                Encoder::Linear { inputs, message } => {
                    for (edge, g) in inputs {
                        g.accumulate_row_product(alg, &z[edge * n..(edge + 1) * n], &mut value);
                    }
                    if let (Some(h), Some(m)) = (message, msg) {
                        h.accumulate_row_product(alg, m, &mut value);
                    }
                }
                Encoder::Table { table, .. } => {
                    let mut index = 0usize;
                    let mut input = Vec::new();
                    for &edge in ins {
                        input.extend_from_slice(&z[edge * n..(edge + 1) * n]);
                    }
                    if let Some(m) = msg {
                        input.extend_from_slice(m);
                    }
                    for &v in &input {
                        index = index * q + v as usize;
                    }
                    if (index + 1) * n > table.values.len() {
                        return Err(CodeError::MissingTableEntry { edge: e, input });
                    }
                    value.copy_from_slice(table.lookup(index));
                }
            }
            z[e * n..(e + 1) * n].copy_from_slice(&value);
        }
        match &self.code.decoder {
            Decoder::Table { table, .. } => {
                let mut index = 0usize;
                for &edge in &self.receiver_inputs {
                    for &v in &z[edge * n..(edge + 1) * n] {
                        index = index * q + v as usize;
                    }
                }
                out.copy_from_slice(table.lookup(index));
            }
            Decoder::LinearThenMap { blocks, map } => {
                let mut y = vec![0; k];
                for (edge, d) in blocks {
                    d.accumulate_row_product(alg, &z[edge * n..(edge + 1) * n], &mut y);
                }
                for (o, &v) in out.iter_mut().zip(&y) {
                    *o = match map {
                        ValueMap::Identity => v as i64,
                        ValueMap::Table { labels, .. } => labels[v as usize],
                    };
                }
            }
        }
        Ok(())
    }
}

/// Exhaustively checks that the decoder reproduces `f` component-wise for
/// every message assignment. Assignments are ordered lexicographically over
/// the concatenated messages (source 1 first); the reported counterexample is
/// the first failing one in that order regardless of thread count.
pub fn verify_code(
    net: &Network,
    code: &NetworkCode,
    f: &TargetFunction,
    budget: u128,
) -> Result<Verification, CodeError> {
    let s = net.num_sources();
    if f.arity() != s {
        return Err(CodeError::ArityMismatch { arity: f.arity(), sources: s });
    }
    if f.domain() != &code.alphabet {
        return Err(CodeError::Dimension(format!(
            "function over {} but code over {}",
            f.domain(),
            code.alphabet
        )));
    }
    code.validate(net)?;
    let q = code.alphabet.size();
    let len = code.k * s;
    let needed = (q as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(CodeError::BudgetExceeded { needed, budget });
    }
    let eval = Evaluator::new(net, code);
    let z_len = net.edges().len() * code.n;
    let k = code.k;
    let found = (0..needed as u64)
        .into_par_iter()
        .map_init(
            || (vec![0; z_len], vec![0i64; k], vec![0; s]),
            |(z, out, x), idx| -> Result<Option<Verification>, CodeError> {
                let flat = index_vector(idx as usize, q, len);
                eval.run(&flat, z, out)?;
                for j in 0..k {
                    for (i, xi) in x.iter_mut().enumerate() {
                        *xi = flat[i * k + j];
                    }
                    let expected = f.eval(x);
                    if out[j] != expected {
                        return Ok(Some(Verification::Counterexample {
                            messages: flat.chunks(k).map(|c| c.to_vec()).collect(),
                            component: j,
                            expected,
                            decoded: out[j],
                        }));
                    }
                }
                Ok(None)
            },
        )
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        None => Ok(Verification::Verified { assignments: needed }),
        Some(r) => r.map(|v| v.expect("only failures are kept")),
    }
}

/// Checks `samples` random assignments drawn from `rng`; returns the first
/// failure found.
pub fn verify_code_random<R: rand::Rng>(
    net: &Network,
    code: &NetworkCode,
    f: &TargetFunction,
    samples: u64,
    rng: &mut R,
) -> Result<Verification, CodeError> {
    code.validate(net)?;
    let s = net.num_sources();
    let q = code.alphabet.size();
    let (k, n) = (code.k, code.n);
    let eval = Evaluator::new(net, code);
    let mut z = vec![0; net.edges().len() * n];
    let mut out = vec![0i64; k];
    let mut x = vec![0; s];
    for _ in 0..samples {
        let flat: Vec<Elem> = (0..k * s).map(|_| rng.gen_range(0..q)).collect();
        eval.run(&flat, &mut z, &mut out)?;
        for j in 0..k {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = flat[i * k + j];
            }
            if out[j] != f.eval(&x) {
                return Ok(Verification::Counterexample {
                    messages: flat.chunks(k).map(|c| c.to_vec()).collect(),
                    component: j,
                    expected: f.eval(&x),
                    decoded: out[j],
                });
            }
        }
    }
    Ok(Verification::Verified { assignments: samples as u128 })
}
