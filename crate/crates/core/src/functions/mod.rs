//! Target functions `f : A^s -> B` stored as explicit tables.
//!
//! The codomain `B` is an ordered set of integer labels; the table stores
//! for each input (mixed-radix index, first argument most significant) the
//! position of its value in `B`.

mod classify;

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::algebra::{for_each_vector, index_vector, vector_index, Algebra, AlgebraError, Elem};

pub use classify::{Classification, FunctionClass, ReductionWitness, DEFAULT_RING_BUDGET};

/// Largest table (number of inputs) accepted for a target function.
pub const MAX_TABLE: usize = 1 << 24;

#[derive(Debug, Error)]
pub enum FunctionError {
    #[error("malformed function spec `{0}`")]
    Malformed(String),
    #[error("function `{name}` is incompatible with {algebra}: {reason}")]
    Incompatible { name: String, algebra: String, reason: String },
    #[error("target function is constant in argument {0}")]
    ConstantInArgument(usize),
    #[error("function table: {0}")]
    Table(String),
    #[error("table of {0} entries exceeds the supported maximum")]
    TooLarge(u128),
    #[error("reducibility search needs {needed} candidate matrices, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("source index set must be a nonempty subset of 1..={0}")]
    BadIndexSet(usize),
    #[error("function is both semi-injective and reducible (classification bug)")]
    Inconsistent,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetFunction {
    name: String,
    arity: usize,
    domain: Algebra,
    labels: Vec<i64>,
    table: Vec<u32>,
}

pub(crate) fn table_len(q: u32, arity: usize) -> Result<usize, FunctionError> {
    let len = (q as u128).pow(arity as u32);
    if len > MAX_TABLE as u128 {
        return Err(FunctionError::TooLarge(len));
    }
    Ok(len as usize)
}

/// Maps raw values to sorted distinct labels plus per-entry label indices.
fn index_values(values: &[i64]) -> (Vec<i64>, Vec<u32>) {
    let mut labels = values.to_vec();
    labels.sort_unstable();
    labels.dedup();
    let table = values
        .iter()
        .map(|v| labels.binary_search(v).unwrap() as u32)
        .collect();
    (labels, table)
}

impl TargetFunction {
    /// Builds a function from one value per input in lexicographic order.
    /// Fails if the function is constant in any of its arguments.
    pub fn from_values(
        name: impl Into<String>,
        domain: Algebra,
        arity: usize,
        values: Vec<i64>,
    ) -> Result<TargetFunction, FunctionError> {
        if arity == 0 {
            return Err(FunctionError::Malformed("arity must be at least 1".into()));
        }
        let len = table_len(domain.size(), arity)?;
        if values.len() != len {
            return Err(FunctionError::Table(format!(
                "{} values for {} inputs",
                values.len(),
                len
            )));
        }
        let (labels, table) = index_values(&values);
        let f = TargetFunction { name: name.into(), arity, domain, labels, table };
        if let Some(i) = f.constant_argument() {
            return Err(FunctionError::ConstantInArgument(i + 1));
        }
        Ok(f)
    }

    pub fn from_fn(
        name: impl Into<String>,
        domain: Algebra,
        arity: usize,
        mut f: impl FnMut(&[Elem]) -> i64,
    ) -> Result<TargetFunction, FunctionError> {
        table_len(domain.size(), arity)?;
        let mut values = Vec::new();
        for_each_vector(domain.size(), arity, |x| values.push(f(x)));
        TargetFunction::from_values(name, domain, arity, values)
    }

    /// Parses `identity`, `arith-sum`, `mod-sum:<r>`, `linear:<a1,...,as>`,
    /// `max`, `paper-f4` or `table:<path>`.
    pub fn builtin(spec: &str, domain: &Algebra, arity: usize) -> Result<TargetFunction, FunctionError> {
        let q = domain.size();
        let incompatible = |reason: &str| FunctionError::Incompatible {
            name: spec.to_string(),
            algebra: domain.to_string(),
            reason: reason.to_string(),
        };
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (spec, None),
        };
        let d = domain.clone();
        match (head, arg) {
            ("identity", None) => {
                TargetFunction::from_fn(spec, d, arity, |x| vector_index(x, q) as i64)
            }
            ("arith-sum", None) => {
                TargetFunction::from_fn(spec, d, arity, |x| x.iter().map(|&v| v as i64).sum())
            }
            ("mod-sum", Some(r)) => {
                let r: i64 = r.parse().map_err(|_| FunctionError::Malformed(spec.into()))?;
                if r < 2 {
                    return Err(incompatible("modulus must be at least 2"));
                }
                TargetFunction::from_fn(spec, d, arity, |x| {
                    x.iter().map(|&v| v as i64).sum::<i64>() % r
                })
            }
            ("linear", Some(coeffs)) => {
                let coeffs: Vec<Elem> = coeffs
                    .split(',')
                    .map(|c| c.parse::<Elem>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| FunctionError::Malformed(spec.into()))?;
                if coeffs.len() != arity {
                    return Err(incompatible(&format!(
                        "{} coefficients for arity {arity}",
                        coeffs.len()
                    )));
                }
                for &c in &coeffs {
                    domain.check(c)?;
                }
                TargetFunction::from_fn(spec, d, arity, |x| domain.dot(&coeffs, x) as i64)
            }
            ("max", None) => TargetFunction::from_fn(spec, d, arity, |x| {
                x.iter().copied().max().unwrap_or(0) as i64
            }),
            ("paper-f4", None) => {
                if arity != 2 || q != 4 {
                    return Err(incompatible("requires arity 2 and a 4-element alphabet"));
                }
                // Hamming distance between the 2-bit labels of a_i and a_j
                TargetFunction::from_fn(spec, d, arity, |x| (x[0] ^ x[1]).count_ones() as i64)
            }
            ("table", Some(path)) => {
                let f = TargetFunction::read_table(Path::new(path), domain)?;
                if f.arity != arity {
                    return Err(incompatible(&format!(
                        "table has arity {}, expected {arity}",
                        f.arity
                    )));
                }
                Ok(f)
            }
            _ => Err(FunctionError::Malformed(spec.to_string())),
        }
    }

    pub fn read_table(path: &Path, domain: &Algebra) -> Result<TargetFunction, FunctionError> {
        let text = std::fs::read_to_string(path).map_err(|source| FunctionError::Io {
            path: path.display().to_string(),
            source,
        })?;
        TargetFunction::parse_table(&format!("table:{}", path.display()), &text, domain)
    }

    /// Parses the line-oriented table format:
    ///
    /// ```text
    /// arity 2
    /// domain 2
    /// 0 0 -> 0
    /// ...
    /// ```
    pub fn parse_table(name: &str, text: &str, domain: &Algebra) -> Result<TargetFunction, FunctionError> {
        let err = |line: usize, msg: &str| FunctionError::Table(format!("line {line}: {msg}"));
        let mut arity = None;
        let mut size = None;
        let mut values: Vec<Option<i64>> = Vec::new();
        let q = domain.size();
        for (no, raw) in text.lines().enumerate() {
            let no = no + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            match words.next() {
                Some("arity") => {
                    let s: usize = words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .filter(|&s| s >= 1)
                        .ok_or_else(|| err(no, "bad arity"))?;
                    arity = Some(s);
                }
                Some("domain") => {
                    let d: u32 =
                        words.next().and_then(|w| w.parse().ok()).ok_or_else(|| err(no, "bad domain"))?;
                    if d != q {
                        return Err(err(no, &format!("domain size {d} does not match {domain}")));
                    }
                    size = Some(d);
                }
                _ => {
                    let (Some(s), Some(_)) = (arity, size) else {
                        return Err(err(no, "entries must follow the `arity` and `domain` header"));
                    };
                    if values.is_empty() {
                        values = vec![None; table_len(q, s)?];
                    }
                    let (lhs, rhs) = line.split_once("->").ok_or_else(|| err(no, "missing `->`"))?;
                    let x: Vec<Elem> = lhs
                        .split_whitespace()
                        .map(|w| w.parse::<Elem>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| err(no, "bad input symbol"))?;
                    if x.len() != s || x.iter().any(|&v| v >= q) {
                        return Err(err(no, "input is not an element of A^s"));
                    }
                    let v: i64 = rhs.trim().parse().map_err(|_| err(no, "bad value"))?;
                    let slot = &mut values[vector_index(&x, q)];
                    if slot.is_some() {
                        return Err(err(no, "duplicate input"));
                    }
                    *slot = Some(v);
                }
            }
        }
        let (Some(s), Some(_)) = (arity, size) else {
            return Err(FunctionError::Table("missing `arity` or `domain` header".into()));
        };
        if values.is_empty() {
            values = vec![None; table_len(q, s)?];
        }
        let values: Option<Vec<i64>> = values.into_iter().collect();
        let values = values.ok_or_else(|| FunctionError::Table("table is not total over A^s".into()))?;
        TargetFunction::from_values(name, domain.clone(), s, values)
    }

    /// Canonical table text: header followed by all inputs in lexicographic order.
    pub fn to_table_text(&self) -> String {
        let mut out = format!("arity {}\ndomain {}\n", self.arity, self.domain.size());
        for_each_vector(self.domain.size(), self.arity, |x| {
            let xs: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{} -> {}", xs.join(" "), self.eval(x));
        });
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> &Algebra {
        &self.domain
    }

    /// The ordered receiver alphabet `B`.
    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    /// Value label of `f(x)`.
    pub fn eval(&self, x: &[Elem]) -> i64 {
        self.labels[self.eval_index(x) as usize]
    }

    /// Position of `f(x)` in [`labels`](Self::labels).
    #[inline]
    pub fn eval_index(&self, x: &[Elem]) -> u32 {
        self.table[vector_index(x, self.domain.size())]
    }

    pub fn input(&self, index: usize) -> Vec<Elem> {
        index_vector(index, self.domain.size(), self.arity)
    }

    /// Number of distinct values `|f(A^s)|`.
    pub fn range_size(&self) -> usize {
        self.labels.len()
    }

    fn constant_argument(&self) -> Option<usize> {
        let q = self.domain.size() as usize;
        (0..self.arity).find(|&i| {
            let stride = q.pow((self.arity - 1 - i) as u32);
            // every input with x_i = 0 agrees with all its x_i-variants
            (0..self.table.len()).filter(|idx| (idx / stride).is_multiple_of(q)).all(|idx| {
                (1..q).all(|v| self.table[idx + v * stride] == self.table[idx])
            })
        })
    }

    /// Coefficients `a` with `f(x) = a_1 x_1 + ... + a_s x_s` over the domain
    /// ring, when the labels are ring elements and such coefficients exist.
    pub fn linear_coefficients(&self) -> Option<Vec<Elem>> {
        let q = self.domain.size();
        if self.labels.iter().any(|&l| l < 0 || l >= q as i64) {
            return None;
        }
        let coeffs: Vec<Elem> = (0..self.arity)
            .map(|i| {
                let mut e = vec![0; self.arity];
                e[i] = self.domain.one();
                self.eval(&e) as Elem
            })
            .collect();
        let mut ok = true;
        for_each_vector(q, self.arity, |x| {
            if ok && self.eval(x) != self.domain.dot(&coeffs, x) as i64 {
                ok = false;
            }
        });
        ok.then_some(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(s: &str) -> Algebra {
        Algebra::parse(s).unwrap()
    }

    #[test]
    fn builtin_examples() {
        let gf2 = alg("field:2");
        let sum = TargetFunction::builtin("arith-sum", &gf2, 2).unwrap();
        assert_eq!(sum.eval(&[1, 1]), 2);
        assert_eq!(sum.labels(), &[0, 1, 2]);

        let f4 = TargetFunction::builtin("paper-f4", &alg("zmod:4"), 2).unwrap();
        assert_eq!(f4.eval(&[1, 2]), 2);
        let rows = [[0, 1, 1, 2], [1, 0, 2, 1], [1, 2, 0, 1], [2, 1, 1, 0]];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(f4.eval(&[i as Elem, j as Elem]), v);
            }
        }

        let m = TargetFunction::builtin("mod-sum:2", &gf2, 2).unwrap();
        assert_eq!(m.eval(&[1, 1]), 0);
    }

    #[test]
    fn arith_sum_codomain() {
        let f = TargetFunction::builtin("arith-sum", &alg("zmod:3"), 3).unwrap();
        assert_eq!(f.labels(), &[0, 1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn linear_over_ring() {
        let z4 = alg("zmod:4");
        let f = TargetFunction::builtin("linear:1,3", &z4, 2).unwrap();
        assert_eq!(f.eval(&[1, 1]), 0);
        assert_eq!(f.eval(&[2, 1]), 1);
        assert_eq!(f.linear_coefficients(), Some(vec![1, 3]));
        let sum = TargetFunction::builtin("arith-sum", &z4, 2).unwrap();
        assert_eq!(sum.linear_coefficients(), None);
    }

    #[test]
    fn builtin_errors() {
        let gf2 = alg("field:2");
        assert!(matches!(
            TargetFunction::builtin("linear:0,1", &gf2, 2),
            Err(FunctionError::ConstantInArgument(1))
        ));
        assert!(matches!(
            TargetFunction::builtin("linear:1", &gf2, 2),
            Err(FunctionError::Incompatible { .. })
        ));
        assert!(matches!(
            TargetFunction::builtin("paper-f4", &gf2, 2),
            Err(FunctionError::Incompatible { .. })
        ));
        assert!(matches!(
            TargetFunction::builtin("median", &gf2, 2),
            Err(FunctionError::Malformed(_))
        ));
        assert!(matches!(
            TargetFunction::builtin("mod-sum:x", &gf2, 2),
            Err(FunctionError::Malformed(_))
        ));
        // x mod 3 on {0,1} with r = 3 is fine, r = 1 is rejected
        assert!(TargetFunction::builtin("mod-sum:1", &gf2, 2).is_err());
    }

    #[test]
    fn table_roundtrip() {
        let gf2 = alg("field:2");
        let f = TargetFunction::from_fn("p", gf2.clone(), 3, |x| ((x[0] ^ x[1]) & x[2]) as i64).unwrap();
        let text = f.to_table_text();
        let g = TargetFunction::parse_table("p", &text, &gf2).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn table_errors() {
        let gf2 = alg("field:2");
        let missing = "arity 1\ndomain 2\n0 -> 0\n";
        assert!(matches!(TargetFunction::parse_table("t", missing, &gf2), Err(FunctionError::Table(_))));
        let dup = "arity 1\ndomain 2\n0 -> 0\n0 -> 1\n1 -> 1\n";
        assert!(matches!(TargetFunction::parse_table("t", dup, &gf2), Err(FunctionError::Table(_))));
        let wrong_domain = "arity 1\ndomain 3\n";
        assert!(TargetFunction::parse_table("t", wrong_domain, &gf2).is_err());
        let constant = "# constant\narity 1\ndomain 2\n0 -> 5\n1 -> 5 # same\n";
        assert!(matches!(
            TargetFunction::parse_table("t", constant, &gf2),
            Err(FunctionError::ConstantInArgument(1))
        ));
        let ok = "arity 1\ndomain 2\n1 -> 7\n0 -> 5\n";
        let f = TargetFunction::parse_table("t", ok, &gf2).unwrap();
        assert_eq!(f.eval(&[1]), 7);
    }
}
