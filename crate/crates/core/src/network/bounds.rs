//! Cut-set upper bounds and the capacity statements implied by the class of
//! the target function.
//!
//! Logarithmic quantities are kept as exact integer triples; comparisons
//! reduce to comparing integer powers, so irrational capacities are never
//! rounded before they are compared.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{Pow, ToPrimitive, Zero};

use super::{Cut, Network, NetworkError};
use crate::functions::{FunctionClass, TargetFunction, DEFAULT_RING_BUDGET};

/// The real number `numerator / log_base(argument)`, i.e.
/// `numerator * ln(base) / ln(argument)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogQuotient {
    pub numerator: Ratio<u64>,
    pub base: u64,
    pub argument: u64,
}

/// Writes `n = t^u` with `t` as small as possible.
fn perfect_power(n: u64) -> (u64, u32) {
    for u in (2..=63u32).rev() {
        let guess = (n as f64).powf(1.0 / u as f64).round() as u64;
        for t in guess.saturating_sub(1).max(2)..=guess + 1 {
            if t.checked_pow(u) == Some(n) {
                let (t2, u2) = perfect_power(t);
                return (t2, u * u2);
            }
        }
    }
    (n, 1)
}

fn big_pow(base: u64, exp: u64) -> BigUint {
    Pow::pow(BigUint::from(base), exp as u32)
}

impl LogQuotient {
    pub fn new(numerator: Ratio<u64>, base: u64, argument: u64) -> LogQuotient {
        assert!(base >= 2 && argument >= 2, "logarithm base and argument must be at least 2");
        LogQuotient { numerator, base, argument }
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator.to_f64().unwrap() * (self.base as f64).ln() / (self.argument as f64).ln()
    }

    /// Same value with base and argument reduced to their smallest roots.
    fn normalized(&self) -> LogQuotient {
        let (b, u) = perfect_power(self.base);
        let (a, v) = perfect_power(self.argument);
        LogQuotient { numerator: self.numerator * Ratio::new(u as u64, v as u64), base: b, argument: a }
    }

    /// The value as a rational number, when it is one.
    pub fn exact(&self) -> Option<Ratio<u64>> {
        if self.numerator.is_zero() {
            return Some(self.numerator);
        }
        let n = self.normalized();
        (n.base == n.argument).then_some(n.numerator)
    }

    /// Exact comparison of the value with a nonnegative rational.
    pub fn cmp_rational(&self, r: &Ratio<u64>) -> Ordering {
        // (p/m) ln b / ln a  vs  k/n   <=>   b^(p n)  vs  a^(k m)
        let (p, m) = (*self.numerator.numer(), *self.numerator.denom());
        let (k, n) = (*r.numer(), *r.denom());
        big_pow(self.base, p * n).cmp(&big_pow(self.argument, k * m))
    }

    /// Exact comparison when both values share a base or an argument after
    /// normalization, or when either one is rational.
    pub fn partial_cmp_exact(&self, other: &LogQuotient) -> Option<Ordering> {
        if let Some(r) = other.exact() {
            return Some(self.cmp_rational(&r));
        }
        if let Some(r) = self.exact() {
            return Some(other.cmp_rational(&r).reverse());
        }
        let (x, y) = (self.normalized(), other.normalized());
        let (p1, m1) = (*x.numerator.numer(), *x.numerator.denom());
        let (p2, m2) = (*y.numerator.numer(), *y.numerator.denom());
        if x.base == y.base {
            // p1/m1 / ln a1  vs  p2/m2 / ln a2   <=>   a2^(p1 m2) vs a1^(p2 m1)
            Some(big_pow(y.argument, p1 * m2).cmp(&big_pow(x.argument, p2 * m1)))
        } else if x.argument == y.argument {
            Some(big_pow(x.base, p1 * m2).cmp(&big_pow(y.base, p2 * m1)))
        } else {
            None
        }
    }
}

impl fmt::Display for LogQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.exact() {
            return write!(f, "{r}");
        }
        if self.numerator.is_integer() {
            write!(f, "{}/log_{}({})", self.numerator, self.base, self.argument)
        } else {
            write!(f, "({})/log_{}({})", self.numerator, self.base, self.argument)
        }
    }
}

/// A capacity value: exact rational or exact logarithmic quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundValue {
    Rational(Ratio<u64>),
    Log(LogQuotient),
}

impl BoundValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            BoundValue::Rational(r) => r.to_f64().unwrap(),
            BoundValue::Log(l) => l.to_f64(),
        }
    }

    pub fn cmp_rational(&self, r: &Ratio<u64>) -> Ordering {
        match self {
            BoundValue::Rational(x) => x.cmp(r),
            BoundValue::Log(l) => l.cmp_rational(r),
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Rational(r) => write!(f, "{r}"),
            BoundValue::Log(l) if l.exact().is_some() => write!(f, "{l}"),
            BoundValue::Log(l) => write!(f, "{l} ~ {:.12}", l.to_f64()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    /// Routing computing capacity.
    Routing,
    /// Linear computing capacity.
    Linear,
    /// Computing capacity over all codes.
    Coding,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Routing => "C_rout",
            Quantity::Linear => "C_lin",
            Quantity::Coding => "C_cod",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Equal,
    AtMost,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Equal => "=",
            Relation::AtMost => "<=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityStatement {
    pub quantity: Quantity,
    pub relation: Relation,
    pub value: BoundValue,
    /// Short name of the result that yields the statement.
    pub rule: &'static str,
}

impl fmt::Display for CapacityStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}  [{}]", self.quantity, self.relation, self.value, self.rule)
    }
}

/// The footprint cut-set bound with the cut that attains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FootprintBound {
    /// `|C| / log_|A| R_{I_C,f}` for the minimizing cut.
    pub value: LogQuotient,
    pub cut: Cut,
    pub footprint: usize,
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub routing_capacity: Ratio<u64>,
    pub min_cut: u64,
    pub footprint: FootprintBound,
    /// `log2|A| * min|C|`.
    pub min_cut_bound: LogQuotient,
    /// `s * log2|A| * C_rout`.
    pub coding_gain_bound: LogQuotient,
    /// `min|C|`, when the target is linear over a field.
    pub linear_target_bound: Option<u64>,
    pub class: FunctionClass,
    pub class_unresolved: bool,
    pub statements: Vec<CapacityStatement>,
}

impl BoundReport {
    /// First statement about `quantity` with the given relation.
    pub fn statement(&self, quantity: Quantity, relation: Relation) -> Option<&CapacityStatement> {
        self.statements.iter().find(|s| s.quantity == quantity && s.relation == relation)
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "routing capacity: {}", self.routing_capacity)?;
        writeln!(f, "min cut: {}", self.min_cut)?;
        writeln!(
            f,
            "footprint bound: {} (cut {}, footprint {})",
            BoundValue::Log(self.footprint.value.clone()),
            self.footprint.cut,
            self.footprint.footprint
        )?;
        writeln!(f, "target class: {}{}", self.class, if self.class_unresolved { " (unresolved)" } else { "" })?;
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

impl Network {
    fn check_arity(&self, f: &TargetFunction) -> Result<(), NetworkError> {
        if f.arity() != self.num_sources() {
            return Err(NetworkError::ArityMismatch { arity: f.arity(), sources: self.num_sources() });
        }
        Ok(())
    }

    /// `min_C |C| / log_|A| R_{I_C,f}` over all cuts; ties keep the first cut
    /// in enumeration order.
    pub fn footprint_cut_bound(&self, f: &TargetFunction, budget: u64) -> Result<FootprintBound, NetworkError> {
        self.check_arity(f)?;
        let q = f.domain().size() as u64;
        let mut cache: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut best: Option<FootprintBound> = None;
        for cut in self.enumerate_cuts(budget)? {
            let footprint = match cache.get(&cut.separated) {
                Some(&r) => r,
                None => {
                    let r = f.footprint_size(&cut.separated)?;
                    cache.insert(cut.separated.clone(), r);
                    r
                }
            };
            if footprint < 2 {
                // a footprint of one class puts no constraint on the cut
                continue;
            }
            let value = LogQuotient::new(Ratio::from_integer(cut.edges.len() as u64), q, footprint as u64);
            let better = match &best {
                None => true,
                Some(b) => value.partial_cmp_exact(&b.value).expect("common base") == Ordering::Less,
            };
            if better {
                best = Some(FootprintBound { value, cut, footprint });
            }
        }
        Ok(best.expect("every network has a cut separating all sources"))
    }

    /// All bounds and capacity identities that apply to `(self, f)`.
    pub fn bound_report(&self, f: &TargetFunction, budget: u64) -> Result<BoundReport, NetworkError> {
        self.check_arity(f)?;
        let alg = f.domain();
        let q = alg.size() as u64;
        let s = self.num_sources() as u64;
        let routing_capacity = self.routing_capacity();
        let min_cut = self.min_cut_size();
        let footprint = self.footprint_cut_bound(f, budget)?;
        let min_cut_bound = LogQuotient::new(Ratio::from_integer(min_cut), q, 2);
        let coding_gain_bound = LogQuotient::new(routing_capacity * s, q, 2);
        let classification = f.classify(DEFAULT_RING_BUDGET)?;
        let linear_target = alg.is_field() && f.linear_coefficients().is_some();
        let linear_target_bound = linear_target.then_some(min_cut);

        let rout = BoundValue::Rational(routing_capacity);
        let mut statements = vec![CapacityStatement {
            quantity: Quantity::Routing,
            relation: Relation::Equal,
            value: rout.clone(),
            rule: "routing capacity does not depend on the target",
        }];
        let mut push = |quantity, relation, value, rule| {
            statements.push(CapacityStatement { quantity, relation, value, rule });
        };
        if classification.class == FunctionClass::Injective {
            push(Quantity::Linear, Relation::Equal, rout.clone(), "injective target has no coding gain");
            push(Quantity::Coding, Relation::Equal, rout.clone(), "injective target has no coding gain");
        } else if alg.is_field() && classification.class != FunctionClass::Reducible {
            push(Quantity::Linear, Relation::Equal, rout.clone(), "field alphabet and target not reducible");
        } else if classification.semi_injective_witness.is_some() {
            push(Quantity::Linear, Relation::Equal, rout.clone(), "semi-injective target over a ring");
        }
        if linear_target {
            let mc = BoundValue::Rational(Ratio::from_integer(min_cut));
            push(Quantity::Linear, Relation::Equal, mc.clone(), "linear target over a field");
            push(Quantity::Coding, Relation::Equal, mc, "linear target over a field");
            push(
                Quantity::Linear,
                Relation::AtMost,
                BoundValue::Rational(routing_capacity * s),
                "linear target: at most s times routing capacity",
            );
        }
        push(Quantity::Coding, Relation::AtMost, BoundValue::Log(footprint.value.clone()), "footprint cut-set bound");
        push(Quantity::Coding, Relation::AtMost, BoundValue::Log(min_cut_bound.clone()), "log2|A| times min cut");
        push(
            Quantity::Coding,
            Relation::AtMost,
            BoundValue::Log(coding_gain_bound.clone()),
            "coding gain at most s log2|A| over routing",
        );
        Ok(BoundReport {
            routing_capacity,
            min_cut,
            footprint,
            min_cut_bound,
            coding_gain_bound,
            linear_target_bound,
            class: classification.class,
            class_unresolved: classification.unresolved,
            statements,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{relay, REVERSE_BUTTERFLY};
    use super::super::DEFAULT_CUT_BUDGET;
    use super::*;
    use crate::algebra::Algebra;

    fn alg(s: &str) -> Algebra {
        Algebra::parse(s).unwrap()
    }

    #[test]
    fn perfect_powers() {
        assert_eq!(perfect_power(8), (2, 3));
        assert_eq!(perfect_power(16), (2, 4));
        assert_eq!(perfect_power(9), (3, 2));
        assert_eq!(perfect_power(12), (12, 1));
        assert_eq!(perfect_power(2), (2, 1));
    }

    #[test]
    fn log_quotient_exactness() {
        let two_over_log2_3 = LogQuotient::new(Ratio::from_integer(2), 2, 3);
        assert_eq!(two_over_log2_3.exact(), None);
        assert!((two_over_log2_3.to_f64() - 1.2618595071429148).abs() < 1e-12);
        assert_eq!(two_over_log2_3.cmp_rational(&Ratio::new(5, 4)), Ordering::Greater);
        assert_eq!(two_over_log2_3.cmp_rational(&Ratio::new(24, 19)), Ordering::Less);
        assert_eq!(LogQuotient::new(Ratio::from_integer(3), 4, 8).exact(), Some(Ratio::new(2, 1)));
        assert_eq!(LogQuotient::new(Ratio::from_integer(2), 3, 3).exact(), Some(Ratio::from_integer(2)));
        assert_eq!(two_over_log2_3.to_string(), "2/log_2(3)");
        let other = LogQuotient::new(Ratio::from_integer(2), 4, 9);
        // 2/log_4(9) = 2/log_2(3)
        assert_eq!(two_over_log2_3.partial_cmp_exact(&other), Some(Ordering::Equal));
    }

    #[test]
    fn footprint_bound_examples() {
        let rb = Network::parse(REVERSE_BUTTERFLY).unwrap();
        let sum = TargetFunction::builtin("arith-sum", &alg("field:2"), 2).unwrap();
        let b = rb.footprint_cut_bound(&sum, DEFAULT_CUT_BUDGET).unwrap();
        assert_eq!(b.value, LogQuotient::new(Ratio::from_integer(2), 2, 3));
        assert_eq!(b.footprint, 3);
        for q in [2, 3, 5] {
            let f = TargetFunction::builtin(&format!("mod-sum:{q}"), &alg(&format!("zmod:{q}")), 2).unwrap();
            let b = rb.footprint_cut_bound(&f, DEFAULT_CUT_BUDGET).unwrap();
            assert_eq!(b.value.exact(), Some(Ratio::from_integer(2)));
        }
        for s in 2..=4 {
            let f = TargetFunction::builtin(&format!("linear:{}", vec!["1"; s].join(",")), &alg("field:3"), s).unwrap();
            let b = relay(s).footprint_cut_bound(&f, DEFAULT_CUT_BUDGET).unwrap();
            assert_eq!(b.value.exact(), Some(Ratio::from_integer(1)));
        }
    }

    #[test]
    fn report_examples() {
        let rb = Network::parse(REVERSE_BUTTERFLY).unwrap();
        let sum = TargetFunction::builtin("arith-sum", &alg("field:2"), 2).unwrap();
        let r = rb.bound_report(&sum, DEFAULT_CUT_BUDGET).unwrap();
        assert_eq!(r.routing_capacity, Ratio::from_integer(1));
        assert_eq!(r.statement(Quantity::Linear, Relation::Equal).unwrap().value, BoundValue::Rational(Ratio::from_integer(1)));
        let cod = r.statement(Quantity::Coding, Relation::AtMost).unwrap();
        assert_eq!(cod.value, BoundValue::Log(LogQuotient::new(Ratio::from_integer(2), 2, 3)));

        let m = TargetFunction::builtin("mod-sum:2", &alg("field:2"), 2).unwrap();
        let r = rb.bound_report(&m, DEFAULT_CUT_BUDGET).unwrap();
        assert_eq!(r.linear_target_bound, Some(2));
        assert_eq!(r.statement(Quantity::Coding, Relation::Equal).unwrap().value, BoundValue::Rational(Ratio::from_integer(2)));
        assert_eq!(r.coding_gain_bound.exact(), Some(Ratio::from_integer(2)));

        let lin = TargetFunction::builtin("linear:1,1,1", &alg("field:2"), 3).unwrap();
        let r = relay(3).bound_report(&lin, DEFAULT_CUT_BUDGET).unwrap();
        assert_eq!(r.statement(Quantity::Linear, Relation::Equal).unwrap().value, BoundValue::Rational(Ratio::from_integer(1)));
        assert_eq!(r.routing_capacity * 3, Ratio::from_integer(1));
        assert!(r.footprint.value.partial_cmp_exact(&r.min_cut_bound) != Some(Ordering::Greater));
    }

    #[test]
    fn arity_must_match() {
        let f = TargetFunction::builtin("arith-sum", &alg("field:2"), 3).unwrap();
        assert!(matches!(relay(2).bound_report(&f, DEFAULT_CUT_BUDGET), Err(NetworkError::ArityMismatch { .. })));
    }
}
