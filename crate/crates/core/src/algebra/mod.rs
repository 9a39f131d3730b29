//! Finite rings and fields with a canonical integer encoding.
//!
//! Every element of an [`Algebra`] of size `q` is encoded as an integer in
//! `0..q`. Prime fields and `Z_m` use the residue itself. Extension fields
//! encode the coefficient vector of the polynomial representative in base `p`
//! (constant term least significant). Product rings use a mixed-radix
//! encoding with the first component as the most significant digit, so over
//! `Z_2 x Z_2` the element `(1, 0)` encodes as `2`.

mod matrix;
mod poly;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use matrix::Matrix;

/// Canonical encoding of an algebra element.
pub type Elem = u32;

/// Largest supported alphabet size.
pub const MAX_SIZE: u32 = 1 << 16;

/// Algebras up to this size carry precomputed operation tables.
const TABLE_LIMIT: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("malformed algebra spec `{0}`")]
    Malformed(String),
    #[error("field size {0} is not a prime power")]
    NotPrimePower(u32),
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u32),
    #[error("algebra size {0} exceeds the supported maximum {MAX_SIZE}")]
    TooLarge(u64),
    #[error("{0} is not a valid element encoding for an algebra of size {1}")]
    InvalidElement(Elem, u32),
    #[error("matrix dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operation requires a field, but {0} is not a field")]
    NotAField(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraKind {
    PrimeField { p: u32 },
    /// `base[x] / (modulus)`, modulus monic and irreducible, coefficients
    /// stored constant term first.
    ExtensionField { base: Box<Algebra>, modulus: Vec<Elem> },
    IntegersMod { m: u32 },
    Product { parts: Vec<Algebra> },
}

#[derive(Debug)]
struct Tables {
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Option<Elem>>,
}

/// A finite commutative ring with identity.
#[derive(Clone)]
pub struct Algebra {
    kind: AlgebraKind,
    size: u32,
    tables: Option<Arc<Tables>>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Algebra {}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({})", self)
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            AlgebraKind::PrimeField { p } => write!(f, "field:{p}"),
            AlgebraKind::ExtensionField { .. } => write!(f, "field:{}", self.size),
            AlgebraKind::IntegersMod { m } => write!(f, "zmod:{m}"),
            AlgebraKind::Product { parts } => {
                write!(f, "product:")?;
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{part}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::str::FromStr for Algebra {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algebra::parse(s)
    }
}

fn smallest_prime_factor(n: u32) -> u32 {
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    n
}

pub(crate) fn is_prime(n: u32) -> bool {
    n >= 2 && smallest_prime_factor(n) == n
}

/// Splits `q` into `(p, m)` with `q = p^m`, or `None` if `q` is not a prime power.
pub(crate) fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = smallest_prime_factor(q);
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

impl Algebra {
    /// Parses `field:<q>`, `zmod:<m>` or `product:<spec>(,<spec>)*`.
    ///
    /// Product components are split at commas; a component that is itself a
    /// product absorbs the remainder of the list.
    pub fn parse(spec: &str) -> Result<Algebra, AlgebraError> {
        let malformed = || AlgebraError::Malformed(spec.to_string());
        if spec.chars().any(|c| c.is_whitespace()) {
            return Err(malformed());
        }
        let (kind, arg) = spec.split_once(':').ok_or_else(malformed)?;
        match kind {
            "field" => {
                let q: u64 = arg.parse().map_err(|_| malformed())?;
                if q > MAX_SIZE as u64 {
                    return Err(AlgebraError::TooLarge(q));
                }
                Algebra::field(q as u32)
            }
            "zmod" => {
                let m: u64 = arg.parse().map_err(|_| malformed())?;
                if m > MAX_SIZE as u64 {
                    return Err(AlgebraError::TooLarge(m));
                }
                Algebra::integers_mod(m as u32)
            }
            "product" => {
                let mut parts = Vec::new();
                let mut rest = arg;
                while !rest.is_empty() {
                    if rest.starts_with("product:") {
                        parts.push(Algebra::parse(rest)?);
                        break;
                    }
                    let (head, tail) = match rest.find(',') {
                        Some(i) => (&rest[..i], &rest[i + 1..]),
                        None => (rest, ""),
                    };
                    if head.is_empty() {
                        return Err(malformed());
                    }
                    parts.push(Algebra::parse(head)?);
                    if tail.is_empty() && rest.ends_with(',') {
                        return Err(malformed());
                    }
                    rest = tail;
                }
                if parts.is_empty() {
                    return Err(malformed());
                }
                Algebra::product(parts)
            }
            _ => Err(malformed()),
        }
    }

    /// The finite field of order `q`. For `q = p^m` with `m > 1` the
    /// representation uses the lexicographically smallest monic irreducible
    /// polynomial of degree `m` over `GF(p)`.
    pub fn field(q: u32) -> Result<Algebra, AlgebraError> {
        if q > MAX_SIZE {
            return Err(AlgebraError::TooLarge(q as u64));
        }
        let (p, m) = prime_power(q).ok_or(AlgebraError::NotPrimePower(q))?;
        let prime = Algebra::build(AlgebraKind::PrimeField { p }, p);
        if m == 1 {
            Ok(prime)
        } else {
            prime.extension(m)
        }
    }

    pub fn integers_mod(m: u32) -> Result<Algebra, AlgebraError> {
        if m < 2 {
            return Err(AlgebraError::ModulusTooSmall(m));
        }
        if m > MAX_SIZE {
            return Err(AlgebraError::TooLarge(m as u64));
        }
        Ok(Algebra::build(AlgebraKind::IntegersMod { m }, m))
    }

    pub fn product(parts: Vec<Algebra>) -> Result<Algebra, AlgebraError> {
        if parts.is_empty() {
            return Err(AlgebraError::Malformed("product:".into()));
        }
        let size = parts.iter().try_fold(1u64, |acc, p| {
            let s = acc * p.size as u64;
            (s <= MAX_SIZE as u64).then_some(s).ok_or(AlgebraError::TooLarge(s))
        })?;
        Ok(Algebra::build(AlgebraKind::Product { parts }, size as u32))
    }

    /// Degree-`degree` extension of this field, using the lexicographically
    /// smallest monic irreducible polynomial (lowest encoding of the
    /// non-leading coefficients read as a base-`q` integer).
    pub fn extension(&self, degree: u32) -> Result<Algebra, AlgebraError> {
        if !self.is_field() {
            return Err(AlgebraError::NotAField(self.to_string()));
        }
        if degree == 1 {
            return Ok(self.clone());
        }
        let size = (self.size as u64).pow(degree);
        if size > MAX_SIZE as u64 {
            return Err(AlgebraError::TooLarge(size));
        }
        let modulus = poly::smallest_irreducible(self, degree as usize);
        Ok(Algebra::build(
            AlgebraKind::ExtensionField { base: Box::new(self.clone()), modulus },
            size as u32,
        ))
    }

    fn build(kind: AlgebraKind, size: u32) -> Algebra {
        let mut alg = Algebra { kind, size, tables: None };
        if size <= TABLE_LIMIT {
            let q = size as usize;
            let mut add = vec![0; q * q];
            let mut mul = vec![0; q * q];
            for a in 0..size {
                for b in 0..size {
                    add[a as usize * q + b as usize] = alg.add_slow(a, b);
                    mul[a as usize * q + b as usize] = alg.mul_slow(a, b);
                }
            }
            let neg = (0..size).map(|a| alg.neg_slow(a)).collect();
            let one = alg.one();
            let inv = (0..size)
                .map(|a| (0..size).find(|&b| mul[a as usize * q + b as usize] == one))
                .collect();
            alg.tables = Some(Arc::new(Tables { add, mul, neg, inv }));
        }
        alg
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        match &self.kind {
            AlgebraKind::PrimeField { .. }
            | AlgebraKind::ExtensionField { .. }
            | AlgebraKind::IntegersMod { .. } => 1,
            AlgebraKind::Product { parts } => {
                let ones: Vec<Elem> = parts.iter().map(|p| p.one()).collect();
                self.compose(&ones)
            }
        }
    }

    /// True when every nonzero element is a unit.
    pub fn is_field(&self) -> bool {
        match &self.kind {
            AlgebraKind::PrimeField { .. } | AlgebraKind::ExtensionField { .. } => true,
            AlgebraKind::IntegersMod { m } => is_prime(*m),
            AlgebraKind::Product { parts } => parts.len() == 1 && parts[0].is_field(),
        }
    }

    /// Characteristic-`p` prime field underlying a field, if any.
    pub fn characteristic(&self) -> Option<u32> {
        match &self.kind {
            AlgebraKind::PrimeField { p } => Some(*p),
            AlgebraKind::ExtensionField { base, .. } => base.characteristic(),
            AlgebraKind::IntegersMod { m } => Some(*m),
            AlgebraKind::Product { .. } => None,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size
    }

    pub fn check(&self, a: Elem) -> Result<Elem, AlgebraError> {
        if a < self.size {
            Ok(a)
        } else {
            Err(AlgebraError::InvalidElement(a, self.size))
        }
    }

    /// Splits a product-ring element into its component encodings.
    pub fn components(&self, a: Elem) -> Vec<Elem> {
        match &self.kind {
            AlgebraKind::Product { parts } => {
                let mut out = vec![0; parts.len()];
                let mut rest = a;
                for (i, part) in parts.iter().enumerate().rev() {
                    out[i] = rest % part.size;
                    rest /= part.size;
                }
                out
            }
            _ => vec![a],
        }
    }

    pub fn compose(&self, comps: &[Elem]) -> Elem {
        match &self.kind {
            AlgebraKind::Product { parts } => parts
                .iter()
                .zip(comps)
                .fold(0, |acc, (part, &c)| acc * part.size + c),
            _ => comps[0],
        }
    }

    /// Coefficients of an extension-field element, constant term first.
    pub fn coefficients(&self, a: Elem) -> Vec<Elem> {
        match &self.kind {
            AlgebraKind::ExtensionField { base, modulus } => {
                let b = base.size;
                let mut rest = a;
                (0..modulus.len() - 1)
                    .map(|_| {
                        let c = rest % b;
                        rest /= b;
                        c
                    })
                    .collect()
            }
            _ => vec![a],
        }
    }

    pub fn from_coefficients(&self, coeffs: &[Elem]) -> Elem {
        match &self.kind {
            AlgebraKind::ExtensionField { base, .. } => {
                coeffs.iter().rev().fold(0, |acc, &c| acc * base.size + c)
            }
            _ => coeffs[0],
        }
    }

    /// Base field and modulus of an extension field.
    pub fn extension_parts(&self) -> Option<(&Algebra, &[Elem])> {
        match &self.kind {
            AlgebraKind::ExtensionField { base, modulus } => Some((base, modulus)),
            _ => None,
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.add[(a * self.size + b) as usize],
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.mul[(a * self.size + b) as usize],
            None => self.mul_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.neg[a as usize],
            None => self.neg_slow(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse if `a` is a unit.
    pub fn unit_inverse(&self, a: Elem) -> Option<Elem> {
        if let Some(t) = &self.tables {
            return t.inv[a as usize];
        }
        match &self.kind {
            AlgebraKind::PrimeField { p } | AlgebraKind::IntegersMod { m: p } => {
                mod_inverse(a as i64, *p as i64).map(|v| v as Elem)
            }
            AlgebraKind::ExtensionField { .. } => {
                (a != 0).then(|| self.pow(a, self.size as u64 - 2))
            }
            AlgebraKind::Product { parts } => {
                let comps = self.components(a);
                let inv: Option<Vec<Elem>> = parts
                    .iter()
                    .zip(comps)
                    .map(|(part, c)| part.unit_inverse(c))
                    .collect();
                inv.map(|v| self.compose(&v))
            }
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Checked ring operation on raw encodings.
    pub fn op(&self, op: RingOp, a: Elem, b: Elem) -> Result<Elem, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        Ok(match op {
            RingOp::Add => self.add(a, b),
            RingOp::Mul => self.mul(a, b),
            RingOp::Neg => self.neg(a),
        })
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        match &self.kind {
            AlgebraKind::PrimeField { p } | AlgebraKind::IntegersMod { m: p } => {
                ((a as u64 + b as u64) % *p as u64) as Elem
            }
            AlgebraKind::ExtensionField { base, .. } => {
                let (x, y) = (self.coefficients(a), self.coefficients(b));
                let sum: Vec<Elem> = x.iter().zip(&y).map(|(&u, &v)| base.add(u, v)).collect();
                self.from_coefficients(&sum)
            }
            AlgebraKind::Product { parts } => {
                let (x, y) = (self.components(a), self.components(b));
                let c: Vec<Elem> = parts
                    .iter()
                    .zip(x.iter().zip(&y))
                    .map(|(part, (&u, &v))| part.add(u, v))
                    .collect();
                self.compose(&c)
            }
        }
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        match &self.kind {
            AlgebraKind::PrimeField { p } | AlgebraKind::IntegersMod { m: p } => {
                ((a as u64 * b as u64) % *p as u64) as Elem
            }
            AlgebraKind::ExtensionField { base, modulus } => {
                let prod = poly::mul(base, &self.coefficients(a), &self.coefficients(b));
                let mut rem = poly::rem(base, &prod, modulus);
                rem.resize(modulus.len() - 1, 0);
                self.from_coefficients(&rem)
            }
            AlgebraKind::Product { parts } => {
                let (x, y) = (self.components(a), self.components(b));
                let c: Vec<Elem> = parts
                    .iter()
                    .zip(x.iter().zip(&y))
                    .map(|(part, (&u, &v))| part.mul(u, v))
                    .collect();
                self.compose(&c)
            }
        }
    }

    fn neg_slow(&self, a: Elem) -> Elem {
        match &self.kind {
            AlgebraKind::PrimeField { p } | AlgebraKind::IntegersMod { m: p } => (p - a) % p,
            AlgebraKind::ExtensionField { base, .. } => {
                let c: Vec<Elem> = self.coefficients(a).iter().map(|&u| base.neg(u)).collect();
                self.from_coefficients(&c)
            }
            AlgebraKind::Product { parts } => {
                let c: Vec<Elem> = parts
                    .iter()
                    .zip(self.components(a))
                    .map(|(part, u)| part.neg(u))
                    .collect();
                self.compose(&c)
            }
        }
    }

    /// Dot product of two equal-length vectors.
    pub fn dot(&self, x: &[Elem], y: &[Elem]) -> Elem {
        x.iter()
            .zip(y)
            .fold(0, |acc, (&a, &b)| self.add(acc, self.mul(a, b)))
    }

    /// Componentwise `x + y`.
    pub fn vec_add(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        x.iter().zip(y).map(|(&a, &b)| self.add(a, b)).collect()
    }

    /// `c * x` for a scalar `c`.
    pub fn vec_scale(&self, c: Elem, x: &[Elem]) -> Vec<Elem> {
        x.iter().map(|&a| self.mul(c, a)).collect()
    }
}

fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (mut r0, mut r1) = (m, a.rem_euclid(m));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Mul,
    Neg,
}

/// Iterates over all vectors of `A^len` in lexicographic order (first
/// coordinate most significant).
pub fn for_each_vector(q: u32, len: usize, mut f: impl FnMut(&[Elem])) {
    let mut v = vec![0; len];
    loop {
        f(&v);
        if !increment(&mut v, q) {
            return;
        }
    }
}

/// Advances `v` to the lexicographic successor; false on wrap-around.
pub fn increment(v: &mut [Elem], q: u32) -> bool {
    for i in (0..v.len()).rev() {
        v[i] += 1;
        if v[i] < q {
            return true;
        }
        v[i] = 0;
    }
    false
}

/// Mixed-radix index of `v` with the first coordinate most significant.
pub fn vector_index(v: &[Elem], q: u32) -> usize {
    v.iter().fold(0usize, |acc, &x| acc * q as usize + x as usize)
}

/// Inverse of [`vector_index`].
pub fn index_vector(mut index: usize, q: u32, len: usize) -> Vec<Elem> {
    let mut v = vec![0; len];
    for slot in v.iter_mut().rev() {
        *slot = (index % q as usize) as Elem;
        index /= q as usize;
    }
    v
}
