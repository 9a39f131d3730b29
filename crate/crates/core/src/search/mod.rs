//! Exhaustive achievability search over `(k, n)` codes.
//!
//! The decoder is never enumerated. For each encoder candidate the receiver
//! tuple produced by every message assignment must map to `f` of that
//! assignment; two assignments that reach the same tuple with different
//! target values rule the candidate out. Candidates are indexed
//! lexicographically (edges in file order, matrices row-major, tables in
//! input order) and scanned in fixed-size chunks; the reported witness is the
//! smallest verifying index whatever the thread count.

use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{index_vector, Algebra, Elem, Matrix};
use crate::codes::{verify_code, CodeError, Decoder, Encoder, NetworkCode, SymbolTable};
use crate::functions::TargetFunction;
use crate::network::{Network, NetworkError, DEFAULT_CUT_BUDGET};

/// Default cap on candidate-times-message evaluations.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000_000;

/// Candidates per scheduling chunk; budget checks happen between chunks.
const CHUNK: u64 = 1 << 14;

/// Largest receiver tuple space for which a decoder table is forced.
const MAX_RECEIVER_TUPLES: u128 = 1 << 20;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("target function has arity {arity} but the network has {sources} sources")]
    ArityMismatch { arity: usize, sources: usize },
    #[error("receiver sees {0} possible tuples, too many to tabulate a decoder")]
    ReceiverSpace(u128),
    #[error("k and n must be positive")]
    Dimension,
    #[error("search returned a code that fails verification: {0}")]
    Unverified(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchKind {
    Linear,
    General,
}

impl fmt::Display for SearchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchKind::Linear => "linear",
            SearchKind::General => "general",
        })
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    /// `candidate` is the lexicographic index of the witness.
    Found { code: NetworkCode, candidate: u64, candidates: u128, evaluations: u64 },
    /// Every candidate was checked and none computes `f`.
    Exhausted { candidates: u128, evaluations: u64 },
    /// Stopped before covering the class; `remaining` candidates are unchecked.
    BudgetExceeded { candidates: u128, remaining: u128, evaluations: u64 },
}

impl SearchOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Found { .. } => "found",
            SearchOutcome::Exhausted { .. } => "exhausted-none",
            SearchOutcome::BudgetExceeded { .. } => "budget-exceeded",
        }
    }

    pub fn code(&self) -> Option<&NetworkCode> {
        match self {
            SearchOutcome::Found { code, .. } => Some(code),
            _ => None,
        }
    }

    pub fn evaluations(&self) -> u64 {
        match *self {
            SearchOutcome::Found { evaluations, .. }
            | SearchOutcome::Exhausted { evaluations, .. }
            | SearchOutcome::BudgetExceeded { evaluations, .. } => evaluations,
        }
    }
}

/// All message assignments ordered by weight then lexicographically, with
/// the packed target vector each one requires.
struct Messages {
    len: usize,
    flat: Vec<Elem>,
    required: Vec<u64>,
}

impl Messages {
    fn new(f: &TargetFunction, s: usize, k: usize) -> Messages {
        let q = f.domain().size();
        let len = s * k;
        let count = (q as usize).pow(len as u32);
        let mut all: Vec<Vec<Elem>> = (0..count).map(|i| index_vector(i, q, len)).collect();
        all.sort_by_key(|m| m.iter().filter(|&&v| v != 0).count());
        let b = f.range_size() as u64;
        let mut x = vec![0; s];
        let required = all
            .iter()
            .map(|m| {
                (0..k).fold(0u64, |acc, j| {
                    for (i, xi) in x.iter_mut().enumerate() {
                        *xi = m[i * k + j];
                    }
                    acc * b + f.eval_index(&x) as u64
                })
            })
            .collect();
        Messages { len, flat: all.concat(), required }
    }

    fn count(&self) -> usize {
        self.required.len()
    }

    fn get(&self, i: usize) -> &[Elem] {
        &self.flat[i * self.len..(i + 1) * self.len]
    }
}

/// Per-edge position of a candidate's digits.
#[derive(Clone, Debug)]
struct EdgeLayout {
    ins: Vec<usize>,
    source: Option<usize>,
    /// Linear: offset of each in-edge matrix then of the message matrix.
    /// General: offset of the table.
    offset: usize,
}

struct Space<'a> {
    kind: SearchKind,
    net: &'a Network,
    alg: &'a Algebra,
    k: usize,
    n: usize,
    edges: Vec<EdgeLayout>,
    order: Vec<usize>,
    receiver_inputs: Vec<usize>,
    digits: usize,
    receiver_tuples: usize,
}

impl<'a> Space<'a> {
    fn new(kind: SearchKind, net: &'a Network, alg: &'a Algebra, k: usize, n: usize) -> Result<Self, SearchError> {
        let q = alg.size() as u128;
        let mut edges = Vec::new();
        let mut digits: u128 = 0;
        for e in net.edges() {
            let ins = net.in_edges(e.tail);
            let source = net.source_index(e.tail);
            let offset = digits as usize;
            digits += match kind {
                SearchKind::Linear => (ins.len() * n * n + if source.is_some() { k * n } else { 0 }) as u128,
                SearchKind::General => {
                    let input_len = ins.len() * n + if source.is_some() { k } else { 0 };
                    q.checked_pow(input_len as u32).unwrap_or(u128::MAX).saturating_mul(n as u128)
                }
            };
            edges.push(EdgeLayout { ins, source, offset });
        }
        let receiver_inputs = net.in_edges(net.receiver());
        let tuples = q.checked_pow((receiver_inputs.len() * n) as u32).unwrap_or(u128::MAX);
        if tuples > MAX_RECEIVER_TUPLES {
            return Err(SearchError::ReceiverSpace(tuples));
        }
        Ok(Space {
            kind,
            net,
            alg,
            k,
            n,
            edges,
            order: net.edges_in_topological_order(),
            receiver_inputs,
            digits: digits.min(usize::MAX as u128) as usize,
            receiver_tuples: tuples as usize,
        })
    }

    /// `q^digits`, or `None` when it does not fit in `u128`.
    fn candidates(&self) -> Option<u128> {
        (self.alg.size() as u128).checked_pow(u32::try_from(self.digits).ok()?)
    }

    /// Writes every edge vector for one message assignment into `z`.
    fn evaluate(&self, cand: &[Elem], msg: &[Elem], z: &mut [Elem]) {
        let (k, n, alg) = (self.k, self.n, self.alg);
        let q = alg.size() as usize;
        for &e in &self.order {
            let lay = &self.edges[e];
            let own = lay.source.map(|i| &msg[i * k..(i + 1) * k]);
            let mut out = vec![0; n];
            match self.kind {
                SearchKind::Linear => {
                    let mut off = lay.offset;
                    for &ie in &lay.ins {
                        let zin = &z[ie * n..(ie + 1) * n];
                        for (r, &a) in zin.iter().enumerate() {
                            if a != 0 {
                                for c in 0..n {
                                    out[c] = alg.add(out[c], alg.mul(a, cand[off + r * n + c]));
                                }
                            }
                        }
                        off += n * n;
                    }
                    if let Some(m) = own {
                        for (r, &a) in m.iter().enumerate() {
                            if a != 0 {
                                for c in 0..n {
                                    out[c] = alg.add(out[c], alg.mul(a, cand[off + r * n + c]));
                                }
                            }
                        }
                    }
                }
                SearchKind::General => {
                    let mut index = 0usize;
                    for &ie in &lay.ins {
                        for &v in &z[ie * n..(ie + 1) * n] {
                            index = index * q + v as usize;
                        }
                    }
                    if let Some(m) = own {
                        for &v in m {
                            index = index * q + v as usize;
                        }
                    }
                    out.copy_from_slice(&cand[lay.offset + index * n..lay.offset + (index + 1) * n]);
                }
            }
            z[e * n..(e + 1) * n].copy_from_slice(&out);
        }
    }

    fn receiver_index(&self, z: &[Elem]) -> usize {
        let (q, n) = (self.alg.size() as usize, self.n);
        self.receiver_inputs
            .iter()
            .flat_map(|&e| &z[e * n..(e + 1) * n])
            .fold(0, |acc, &v| acc * q + v as usize)
    }

    /// Forced decoder for one candidate, or `None` on a collision. The second
    /// component counts the message assignments examined.
    fn check(&self, cand: &[Elem], msgs: &Messages) -> (Option<Vec<u64>>, u64) {
        let mut forced = vec![u64::MAX; self.receiver_tuples];
        let mut z = vec![0; self.net.edges().len() * self.n];
        let q = self.alg.size() as usize;
        // a linear candidate is determined by its response to unit messages
        let transfer: Option<Vec<Vec<Elem>>> = (self.kind == SearchKind::Linear).then(|| {
            (0..msgs.len)
                .map(|r| {
                    let mut unit = vec![0; msgs.len];
                    unit[r] = self.alg.one();
                    self.evaluate(cand, &unit, &mut z);
                    self.receiver_inputs.iter().flat_map(|&e| z[e * self.n..(e + 1) * self.n].to_vec()).collect()
                })
                .collect()
        });
        let width = self.receiver_inputs.len() * self.n;
        let mut tuple = vec![0; width];
        for i in 0..msgs.count() {
            let m = msgs.get(i);
            let index = match &transfer {
                Some(rows) => {
                    tuple.iter_mut().for_each(|t| *t = 0);
                    for (&a, row) in m.iter().zip(rows) {
                        if a != 0 {
                            for (t, &v) in tuple.iter_mut().zip(row) {
                                *t = self.alg.add(*t, self.alg.mul(a, v));
                            }
                        }
                    }
                    tuple.iter().fold(0, |acc, &v| acc * q + v as usize)
                }
                None => {
                    self.evaluate(cand, m, &mut z);
                    self.receiver_index(&z)
                }
            };
            let want = msgs.required[i];
            let slot = &mut forced[index];
            if *slot == u64::MAX {
                *slot = want;
            } else if *slot != want {
                return (None, i as u64 + 1);
            }
        }
        (Some(forced), msgs.count() as u64)
    }

    /// Materializes a candidate with its forced decoder as a code.
    fn build(&self, cand: &[Elem], forced: &[u64], f: &TargetFunction) -> NetworkCode {
        let (k, n, q) = (self.k, self.n, self.alg.size());
        let encoders = self
            .edges
            .iter()
            .enumerate()
            .map(|(e, lay)| match self.kind {
                SearchKind::Linear => {
                    let mut off = lay.offset;
                    let mut inputs = Vec::new();
                    for &ie in &lay.ins {
                        inputs.push((ie, Matrix::from_vec(n, n, cand[off..off + n * n].to_vec()).unwrap()));
                        off += n * n;
                    }
                    let message = lay.source.map(|_| Matrix::from_vec(k, n, cand[off..off + k * n].to_vec()).unwrap());
                    Encoder::Linear { inputs, message }
                }
                SearchKind::General => {
                    let input_len = lay.ins.len() * n + if lay.source.is_some() { k } else { 0 };
                    let size = (q as usize).pow(input_len as u32) * n;
                    Encoder::Table {
                        path: format!("enc{e}.tbl"),
                        table: SymbolTable { input_len, output_len: n, values: cand[lay.offset..lay.offset + size].to_vec() },
                    }
                }
            })
            .collect();
        let b = f.range_size() as u64;
        let labels = f.labels();
        let mut values = Vec::with_capacity(forced.len() * k);
        for &packed in forced {
            // tuples no message reaches decode to the first label
            let packed = if packed == u64::MAX { 0 } else { packed };
            let mut digits = vec![0i64; k];
            let mut rest = packed;
            for d in digits.iter_mut().rev() {
                *d = labels[(rest % b) as usize];
                rest /= b;
            }
            values.extend(digits);
        }
        let decoder = Decoder::Table {
            path: "dec.tbl".into(),
            table: SymbolTable { input_len: self.receiver_inputs.len() * n, output_len: k, values },
        };
        NetworkCode { k, n, alphabet: self.alg.clone(), encoders, decoder }
    }
}

fn check_inputs(net: &Network, f: &TargetFunction, k: usize, n: usize) -> Result<(), SearchError> {
    if f.arity() != net.num_sources() {
        return Err(SearchError::ArityMismatch { arity: f.arity(), sources: net.num_sources() });
    }
    if k == 0 || n == 0 {
        return Err(SearchError::Dimension);
    }
    Ok(())
}

/// Exhaustive search over one code class; `budget` caps candidate-times-message
/// evaluations.
pub fn search(
    kind: SearchKind,
    net: &Network,
    f: &TargetFunction,
    k: usize,
    n: usize,
    budget: u64,
) -> Result<SearchOutcome, SearchError> {
    check_inputs(net, f, k, n)?;
    let alg = f.domain();
    let space = Space::new(kind, net, alg, k, n)?;
    let q = alg.size();
    let total = match space.candidates() {
        Some(t) if t <= budget as u128 => t as u64,
        other => {
            let candidates = other.unwrap_or(u128::MAX);
            return Ok(SearchOutcome::BudgetExceeded { candidates, remaining: candidates, evaluations: 0 });
        }
    };
    let msgs = Messages::new(f, net.num_sources(), k);
    let mut evaluations: u64 = 0;
    let mut start = 0u64;
    while start < total {
        let end = (start + CHUNK).min(total);
        let results: Vec<(u64, Option<Vec<u64>>, u64)> = (start..end)
            .into_par_iter()
            .map(|idx| {
                let cand = index_vector(idx as usize, q, space.digits);
                let (forced, evals) = space.check(&cand, &msgs);
                (idx, forced, evals)
            })
            .collect();
        evaluations += results.iter().map(|r| r.2).sum::<u64>();
        if let Some((idx, Some(forced), _)) = results.into_iter().find(|r| r.1.is_some()) {
            let cand = index_vector(idx as usize, q, space.digits);
            let code = space.build(&cand, &forced, f);
            match verify_code(net, &code, f, u128::MAX)? {
                v if v.is_verified() => {}
                v => return Err(SearchError::Unverified(format!("{v:?}"))),
            }
            return Ok(SearchOutcome::Found { code, candidate: idx, candidates: total as u128, evaluations });
        }
        start = end;
        if evaluations > budget && start < total {
            return Ok(SearchOutcome::BudgetExceeded {
                candidates: total as u128,
                remaining: (total - start) as u128,
                evaluations,
            });
        }
    }
    Ok(SearchOutcome::Exhausted { candidates: total as u128, evaluations })
}

/// Linear encoders over the function's alphabet, forced decoder.
pub fn search_linear(
    net: &Network,
    f: &TargetFunction,
    k: usize,
    n: usize,
    budget: u64,
) -> Result<SearchOutcome, SearchError> {
    search(SearchKind::Linear, net, f, k, n, budget)
}

/// Arbitrary table encoders, forced decoder.
pub fn search_general(
    net: &Network,
    f: &TargetFunction,
    k: usize,
    n: usize,
    budget: u64,
) -> Result<SearchOutcome, SearchError> {
    search(SearchKind::General, net, f, k, n, budget)
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub k: usize,
    pub n: usize,
    pub linear: SearchOutcome,
    pub general: SearchOutcome,
}

impl SweepRow {
    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.k as u64, self.n as u64)
    }
}

#[derive(Clone, Debug)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    pub report: crate::network::BoundReport,
}

impl Sweep {
    /// True when no found rate exceeds the footprint bound.
    pub fn consistent_with_bounds(&self) -> bool {
        self.rows.iter().all(|r| {
            let found = r.linear.code().is_some() || r.general.code().is_some();
            !found || self.report.footprint.value.cmp_rational(&r.rate()) != std::cmp::Ordering::Less
        })
    }
}

/// Runs both searches at every `(k, n)` and attaches the bound report.
pub fn achievability_sweep(
    net: &Network,
    f: &TargetFunction,
    pairs: &[(usize, usize)],
    budget: u64,
) -> Result<Sweep, SearchError> {
    let rows = pairs
        .iter()
        .map(|&(k, n)| {
            Ok(SweepRow {
                k,
                n,
                linear: search_linear(net, f, k, n, budget)?,
                general: search_general(net, f, k, n, budget)?,
            })
        })
        .collect::<Result<_, SearchError>>()?;
    let report = net.bound_report(f, DEFAULT_CUT_BUDGET)?;
    Ok(Sweep { rows, report })
}

#[cfg(test)]
mod tests;
