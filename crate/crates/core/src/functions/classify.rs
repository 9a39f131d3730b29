//! Injectivity, semi-injectivity, reducibility and footprint sizes.

use std::collections::HashSet;

use rayon::prelude::*;

use super::{table_len, FunctionError, TargetFunction};
use crate::algebra::{for_each_vector, increment, index_vector, vector_index, Algebra, Elem, Matrix};

/// Default cap on candidate matrices for the ring reducibility scan.
pub const DEFAULT_RING_BUDGET: u128 = 1 << 24;

/// A certificate `g(xT) = f(x)` with `T` an `s x lambda` matrix, `lambda < s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionWitness {
    pub lambda: usize,
    pub t: Matrix,
    /// `g` as label indices of `f`, indexed by `y` in `A^lambda`.
    pub g: Vec<u32>,
    /// Invariant direction `d` with `f(a d + x) = f(x)`, when the witness was
    /// derived from one.
    pub direction: Option<Vec<Elem>>,
}

impl ReductionWitness {
    /// Exhaustively re-checks `g(xT) = f(x)` and the direction invariance.
    pub fn holds_for(&self, f: &TargetFunction) -> bool {
        let alg = f.domain();
        let q = alg.size();
        if self.t.rows() != f.arity() || self.t.cols() != self.lambda || self.lambda >= f.arity() {
            return false;
        }
        let mut ok = true;
        for_each_vector(q, f.arity(), |x| {
            if ok {
                let y = self.t.row_product(alg, x);
                ok = self.g[vector_index(&y, q)] == f.eval_index(x);
            }
        });
        if let (true, Some(d)) = (ok, &self.direction) {
            ok = d.iter().any(|&v| v != 0) && invariant_under(alg, f.arity(), f.table(), d);
        }
        ok
    }

    /// Value label of `g(y)`.
    pub fn g_label(&self, f: &TargetFunction, y: &[Elem]) -> i64 {
        f.labels()[self.g[vector_index(y, f.domain().size())] as usize]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionClass {
    Injective,
    SemiInjectiveNotInjective,
    Reducible,
    Neither,
}

impl std::fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FunctionClass::Injective => "injective",
            FunctionClass::SemiInjectiveNotInjective => "semi-injective-not-injective",
            FunctionClass::Reducible => "reducible",
            FunctionClass::Neither => "neither",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub class: FunctionClass,
    pub semi_injective_witness: Option<Vec<Elem>>,
    pub reduction: Option<ReductionWitness>,
    /// Largest lambda exhausted without finding a reduction, when no
    /// reduction exists within the scanned range.
    pub exhausted_lambda: Option<usize>,
    /// The reducibility scan hit its budget, so `Neither` is not certain.
    pub unresolved: bool,
}

/// True if `f(x + a d) = f(x)` for every scalar `a` and input `x`.
fn invariant_under(alg: &Algebra, arity: usize, table: &[u32], d: &[Elem]) -> bool {
    let q = alg.size();
    let mut x = vec![0; arity];
    for a in 1..q {
        let ad = alg.vec_scale(a, d);
        x.iter_mut().for_each(|v| *v = 0);
        loop {
            let shifted = alg.vec_add(&x, &ad);
            if table[vector_index(&shifted, q)] != table[vector_index(&x, q)] {
                return false;
            }
            if !increment(&mut x, q) {
                break;
            }
        }
    }
    true
}

/// One reduction step over a field: first invariant direction `d` in
/// lexicographic order, `T` spanning the annihilator of `d`, and the reduced
/// table `g`.
fn reduce_once(alg: &Algebra, arity: usize, table: &[u32]) -> Option<(Vec<Elem>, Matrix, Vec<u32>)> {
    let q = alg.size();
    let mut d = vec![0; arity];
    while increment(&mut d, q) {
        if !invariant_under(alg, arity, table, &d) {
            continue;
        }
        let column = Matrix::from_vec(arity, 1, d.clone()).unwrap();
        let basis = column.left_nullspace_basis(alg).expect("field domain");
        let lambda = basis.len();
        let mut t = Matrix::zeros(arity, lambda);
        for (c, v) in basis.iter().enumerate() {
            for (r, &e) in v.iter().enumerate() {
                t.set(r, c, e);
            }
        }
        let mut g = vec![u32::MAX; (q as usize).pow(lambda as u32)];
        for_each_vector(q, arity, |x| {
            let y = t.row_product(alg, x);
            let slot = &mut g[vector_index(&y, q)];
            debug_assert!(*slot == u32::MAX || *slot == table[vector_index(x, q)]);
            *slot = table[vector_index(x, q)];
        });
        return Some((d, t, g));
    }
    None
}

impl TargetFunction {
    pub fn is_injective(&self) -> bool {
        self.labels.len() == self.table.len()
    }

    /// Lexicographically smallest `x` whose fiber `f^{-1}(f(x))` is `{x}`.
    pub fn semi_injective_witness(&self) -> Option<Vec<Elem>> {
        let mut counts = vec![0usize; self.labels.len()];
        for &v in &self.table {
            counts[v as usize] += 1;
        }
        self.table
            .iter()
            .position(|&v| counts[v as usize] == 1)
            .map(|i| self.input(i))
    }

    /// Reducibility over a field via invariant directions, iterating the
    /// reduction on `g` until no invariant direction remains.
    pub fn reducible_over_field(&self) -> Result<Option<ReductionWitness>, FunctionError> {
        let alg = self.domain();
        if !alg.is_field() {
            return Err(crate::algebra::AlgebraError::NotAField(alg.to_string()).into());
        }
        let Some((d, mut t, mut g)) = reduce_once(alg, self.arity, &self.table) else {
            return Ok(None);
        };
        let mut lambda = t.cols();
        while lambda > 1 {
            let Some((_, t2, g2)) = reduce_once(alg, lambda, &g) else {
                break;
            };
            t = t.mul(alg, &t2)?;
            g = g2;
            lambda = t.cols();
        }
        let w = ReductionWitness { lambda, t, g, direction: Some(d) };
        debug_assert!(w.holds_for(self));
        Ok(Some(w))
    }

    /// Reducibility over an arbitrary ring by enumerating every `s x lambda`
    /// matrix for `lambda = 1..=min(max_lambda, s-1)` in lexicographic
    /// (row-major) order. Exceeding `budget` candidates is an error rather
    /// than a silent "not reducible".
    pub fn reducible_over_ring(
        &self,
        max_lambda: usize,
        budget: u128,
    ) -> Result<Option<ReductionWitness>, FunctionError> {
        let alg = self.domain();
        let q = alg.size();
        let s = self.arity;
        let top = max_lambda.min(s.saturating_sub(1));
        let needed: u128 = (1..=top).map(|l| (q as u128).pow((s * l) as u32)).sum();
        if needed > budget {
            return Err(FunctionError::BudgetExceeded { needed, budget });
        }
        let inputs: Vec<Vec<Elem>> = (0..self.table.len()).map(|i| self.input(i)).collect();
        for lambda in 1..=top {
            let count = (q as u128).pow((s * lambda) as u32) as u64;
            let fiber_len = table_len(q, lambda)?;
            let check = |idx: u64| -> Option<Vec<u32>> {
                let t = Matrix::from_vec(s, lambda, index_vector(idx as usize, q, s * lambda)).unwrap();
                let mut g = vec![u32::MAX; fiber_len];
                for (x, &v) in inputs.iter().zip(&self.table) {
                    let y = t.row_product(alg, x);
                    let slot = &mut g[vector_index(&y, q)];
                    if *slot == u32::MAX {
                        *slot = v;
                    } else if *slot != v {
                        return None;
                    }
                }
                Some(g)
            };
            let hit = (0..count).into_par_iter().find_map_first(|idx| check(idx).map(|g| (idx, g)));
            if let Some((idx, mut g)) = hit {
                // inputs outside the image of x -> xT get the first label
                g.iter_mut().filter(|v| **v == u32::MAX).for_each(|v| *v = 0);
                let t = Matrix::from_vec(s, lambda, index_vector(idx as usize, q, s * lambda)).unwrap();
                let w = ReductionWitness { lambda, t, g, direction: None };
                debug_assert!(w.holds_for(self));
                return Ok(Some(w));
            }
        }
        Ok(None)
    }

    /// Number of classes of `A^|I|` that can be told apart through `f` for
    /// some fixed assignment of the remaining arguments. `indices` are
    /// 1-based source indices.
    pub fn footprint_size(&self, indices: &[usize]) -> Result<usize, FunctionError> {
        let s = self.arity;
        let mut idx: Vec<usize> = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if idx.is_empty() || idx.iter().any(|&i| i == 0 || i > s) {
            return Err(FunctionError::BadIndexSet(s));
        }
        let q = self.domain.size();
        let inside: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        let outside: Vec<usize> = (0..s).filter(|i| !inside.contains(i)).collect();
        let mut signatures = HashSet::new();
        let mut x = vec![0; s];
        for_each_vector(q, inside.len(), |a| {
            let mut sig = Vec::new();
            for_each_vector(q, outside.len(), |c| {
                for (&i, &v) in inside.iter().zip(a) {
                    x[i] = v;
                }
                for (&i, &v) in outside.iter().zip(c) {
                    x[i] = v;
                }
                sig.push(self.eval_index(&x));
            });
            signatures.insert(sig);
        });
        Ok(signatures.len())
    }

    /// Places the function in the injective / semi-injective / reducible
    /// decomposition. Over fields reducibility uses invariant directions;
    /// over other rings the matrix scan runs under `ring_budget`.
    pub fn classify(&self, ring_budget: u128) -> Result<Classification, FunctionError> {
        let semi = self.semi_injective_witness();
        let s = self.arity;
        let (reduction, unresolved) = if self.domain.is_field() {
            (self.reducible_over_field()?, false)
        } else {
            match self.reducible_over_ring(s - 1, ring_budget) {
                Ok(w) => (w, false),
                Err(FunctionError::BudgetExceeded { .. }) => (None, true),
                Err(e) => return Err(e),
            }
        };
        if semi.is_some() && reduction.is_some() {
            return Err(FunctionError::Inconsistent);
        }
        let class = if self.is_injective() {
            FunctionClass::Injective
        } else if semi.is_some() {
            FunctionClass::SemiInjectiveNotInjective
        } else if reduction.is_some() {
            FunctionClass::Reducible
        } else {
            FunctionClass::Neither
        };
        let exhausted_lambda = (reduction.is_none() && !unresolved && s > 1).then_some(s - 1);
        let unresolved = unresolved && semi.is_none();
        Ok(Classification {
            class,
            semi_injective_witness: semi,
            reduction,
            exhausted_lambda,
            unresolved,
        })
    }
}
